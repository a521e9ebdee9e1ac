//! Token boxes, documents and reading orders.
//!
//! Coordinates follow the image/OCR convention: origin at the top-left corner,
//! `y` grows downward. "Top-first, then left-first" therefore means ascending
//! `y` then ascending `x`. Coordinates are `f64` so that fractional
//! augmentation shifts can be represented exactly enough; integer OCR input
//! widens losslessly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One OCR token: an axis-aligned rectangle plus its text.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenBox {
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    text: String,
    source_index: usize,
}

impl TokenBox {
    /// Builds a box, checking `x1 <= x2`, `y1 <= y2` and finiteness.
    ///
    /// Degenerate boxes (zero width or height) are accepted.
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64, text: impl Into<String>, source_index: usize) -> Result<Self> {
        if ![x1, y1, x2, y2].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidBox { index: source_index, reason: "non-finite coordinate" });
        }
        if x1 > x2 {
            return Err(Error::InvalidBox { index: source_index, reason: "x1 > x2" });
        }
        if y1 > y2 {
            return Err(Error::InvalidBox { index: source_index, reason: "y1 > y2" });
        }
        Ok(Self { x1, y1, x2, y2, text: text.into(), source_index })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn y1(&self) -> f64 {
        self.y1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn y2(&self) -> f64 {
        self.y2
    }

    /// `[x1, y1, x2, y2]`
    pub fn coords(&self) -> [f64; 4] {
        [self.x1, self.y1, self.x2, self.y2]
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Position of this token in the original input.
    pub fn source_index(&self) -> usize {
        self.source_index
    }

    /// The same token moved by `(dx, dy)`; width and height are unchanged.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            x1: self.x1 + dx,
            y1: self.y1 + dy,
            x2: self.x2 + dx,
            y2: self.y2 + dy,
            text: self.text.clone(),
            source_index: self.source_index,
        }
    }
}

/// Coordinate-wise bounds of a set of boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

/// A page of OCR tokens.
///
/// Token `source_index` labels are always exactly `0..K`, but the token
/// sequence itself may be in any order (e.g. after [`apply_order`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    id: String,
    width: f64,
    height: f64,
    tokens: Vec<TokenBox>,
}

impl Document {
    /// Validates page size, source-index labels and that every box lies in
    /// `[-width, 2*width] x [-height, 2*height]`.
    pub fn new(id: impl Into<String>, width: f64, height: f64, tokens: Vec<TokenBox>) -> Result<Self> {
        if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
            return Err(Error::InvalidPage);
        }
        let mut seen = vec![false; tokens.len()];
        for t in &tokens {
            match seen.get_mut(t.source_index) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(Error::BadSourceIndices),
            }
        }
        for t in &tokens {
            let inside = t.x1 >= -width && t.x2 <= 2.0 * width && t.y1 >= -height && t.y2 <= 2.0 * height;
            if !inside {
                return Err(Error::OutOfPage { index: t.source_index });
            }
        }
        Ok(Self { id: id.into(), width, height, tokens })
    }

    /// Builds a document from `(x1, y1, x2, y2, text)` tuples, labelling
    /// tokens `0..K` in sequence order.
    pub fn from_boxes<S: Into<String>>(
        id: impl Into<String>,
        width: f64,
        height: f64,
        boxes: impl IntoIterator<Item = (f64, f64, f64, f64, S)>,
    ) -> Result<Self> {
        let tokens = boxes
            .into_iter()
            .enumerate()
            .map(|(i, (x1, y1, x2, y2, text))| TokenBox::new(x1, y1, x2, y2, text, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(id, width, height, tokens)
    }

    /// Skips the page-slack check. Used for augmented copies, whose shifts
    /// may push boxes past the page margin when `theta` is large.
    pub(crate) fn with_tokens_unchecked(&self, tokens: Vec<TokenBox>) -> Self {
        Self { id: self.id.clone(), width: self.width, height: self.height, tokens }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn tokens(&self) -> &[TokenBox] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The token sequence's source indices, in sequence order.
    pub fn source_order(&self) -> Vec<usize> {
        self.tokens.iter().map(TokenBox::source_index).collect()
    }

    /// Same tokens, in the order given by `tokens`' positions. Fails when the
    /// result would break the document invariants.
    pub fn with_tokens(&self, tokens: Vec<TokenBox>) -> Result<Self> {
        Self::new(self.id.clone(), self.width, self.height, tokens)
    }
}

/// A permutation of `0..K`. `order[rank]` is the source index of the token
/// read at position `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReadingOrder {
    order: Vec<usize>,
}

impl ReadingOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order) {
            return Err(Error::NotAPermutation);
        }
        Ok(Self { order })
    }

    pub fn identity(len: usize) -> Self {
        Self { order: (0..len).collect() }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `inverse[order[r]] == r`
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.order.len()];
        for (rank, &idx) in self.order.iter().enumerate() {
            inv[idx] = rank;
        }
        Self { order: inv }
    }
}

pub(crate) fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    for &i in order {
        match seen.get_mut(i) {
            Some(slot) if !*slot => *slot = true,
            _ => return false,
        }
    }
    true
}

/// Coordinate-wise min of all `(x1, y1)` and max of all `(x2, y2)`.
pub fn extent(doc: &Document) -> Result<Extent> {
    boxes_extent(doc.tokens())
}

pub(crate) fn boxes_extent(boxes: &[TokenBox]) -> Result<Extent> {
    let first = boxes.first().ok_or(Error::EmptyDocument)?;
    let init = Extent { x_min: first.x1, y_min: first.y1, x_max: first.x2, y_max: first.y2 };
    Ok(boxes.iter().fold(init, |e, b| Extent {
        x_min: e.x_min.min(b.x1),
        y_min: e.y_min.min(b.y1),
        x_max: e.x_max.max(b.x2),
        y_max: e.y_max.max(b.y2),
    }))
}

/// Permutes the token sequence positionally: output position `r` holds the
/// token at input position `ord[r]`. Tokens keep their `source_index`.
///
/// For documents whose tokens are in source order (as produced by ingest),
/// positions and source indices coincide.
pub fn apply_order(doc: &Document, ord: &ReadingOrder) -> Result<Document> {
    if ord.len() != doc.len() {
        return Err(Error::LengthMismatch { expected: doc.len(), found: ord.len() });
    }
    let tokens = ord.as_slice().iter().map(|&i| doc.tokens[i].clone()).collect();
    Ok(doc.with_tokens_unchecked(tokens))
}
