//! Input and output file formats.
//!
//! * `boxes-json`: `{ "id", "width", "height", "tokens": [{ "text", "box": [x1, y1, x2, y2] }] }`
//! * `funsd-annotation`: FUNSD form files (`{ "form": [{ "words": [...] }] }`),
//!   flattened word by word in file order. XFUN language files
//!   (`{ "documents": [{ "id", "img", "document": [...] }] }`) go through the
//!   same adapter and may yield several documents.
//! * order output: `{ "id", "strategy", "seed", "order", "tokens" }` where each
//!   token also carries its `source_index`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use readorder_core::{Document, ReadingOrder, TokenBox};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    BoxesJson,
    FunsdAnnotation,
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenRecord {
    text: String,
    #[serde(rename = "box")]
    bbox: [f64; 4],
}

#[derive(Debug, Serialize, Deserialize)]
struct BoxesFile {
    id: String,
    width: f64,
    height: f64,
    tokens: Vec<TokenRecord>,
}

#[derive(Debug, Deserialize)]
struct FormEntry {
    #[serde(default)]
    words: Vec<TokenRecord>,
}

#[derive(Debug, Deserialize)]
struct FunsdFile {
    form: Vec<FormEntry>,
}

#[derive(Debug, Deserialize)]
struct XfunImage {
    width: f64,
    height: f64,
}

#[derive(Debug, Deserialize)]
struct XfunDocument {
    id: String,
    img: Option<XfunImage>,
    document: Vec<FormEntry>,
}

#[derive(Debug, Deserialize)]
struct XfunFile {
    documents: Vec<XfunDocument>,
}

/// Reads every document in `path`.
pub fn ingest(path: &Path, format: InputFormat) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        InputFormat::BoxesJson => parse_boxes_json(&text, path).map(|d| vec![d]),
        InputFormat::FunsdAnnotation => parse_annotation(&text, path),
    }
}

pub fn parse_boxes_json(text: &str, path: &Path) -> Result<Document> {
    let file: BoxesFile = serde_json::from_str(text).map_err(|e| Error::parse(path, &e))?;
    build_document(path, file.id, Some((file.width, file.height)), file.tokens)
}

/// FUNSD or XFUN annotation text.
pub fn parse_annotation(text: &str, path: &Path) -> Result<Vec<Document>> {
    let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::parse(path, &e))?;
    if probe.get("documents").is_some() {
        let file: XfunFile = serde_json::from_str(text).map_err(|e| Error::parse(path, &e))?;
        if file.documents.is_empty() {
            return Err(Error::invalid(path, "no documents"));
        }
        file.documents
            .into_iter()
            .map(|d| {
                let page = d.img.map(|i| (i.width, i.height));
                let words = d.document.into_iter().flat_map(|e| e.words).collect();
                build_document(path, d.id, page, words)
            })
            .collect()
    } else {
        let file: FunsdFile = serde_json::from_str(text).map_err(|e| Error::parse(path, &e))?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let words = file.form.into_iter().flat_map(|e| e.words).collect();
        build_document(path, id, None, words).map(|d| vec![d])
    }
}

/// Without an explicit page size, the page is taken to end at the largest
/// box corner.
fn build_document(path: &Path, id: String, page: Option<(f64, f64)>, records: Vec<TokenRecord>) -> Result<Document> {
    if records.is_empty() {
        return Err(Error::invalid(path, format!("document {id:?} has no tokens")));
    }
    let tokens = records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let [x1, y1, x2, y2] = r.bbox;
            TokenBox::new(x1, y1, x2, y2, r.text, i).map_err(|e| Error::invalid(path, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (width, height) = page.unwrap_or_else(|| {
        let w = tokens.iter().map(TokenBox::x2).fold(1.0, f64::max);
        let h = tokens.iter().map(TokenBox::y2).fold(1.0, f64::max);
        (w, h)
    });
    Document::new(id, width, height, tokens).map_err(|e| Error::invalid(path, e.to_string()))
}

/// Serialises a document as `boxes-json`, tokens in sequence order.
pub fn to_boxes_json(doc: &Document) -> String {
    let file = BoxesFile {
        id: doc.id().to_owned(),
        width: doc.width(),
        height: doc.height(),
        tokens: doc.tokens().iter().map(|t| TokenRecord { text: t.text().to_owned(), bbox: t.coords() }).collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serialises")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedToken {
    pub text: String,
    #[serde(rename = "box")]
    pub bbox: [f64; 4],
    pub source_index: usize,
}

/// One ordered document as written by the tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderOutput {
    pub id: String,
    pub strategy: String,
    pub seed: Option<u64>,
    pub order: Vec<usize>,
    pub tokens: Vec<OrderedToken>,
}

impl OrderOutput {
    /// `doc` must have its tokens in source order, as produced by ingest.
    pub fn new(doc: &Document, strategy: &str, seed: Option<u64>, order: &ReadingOrder) -> Self {
        let by_source = {
            let mut v: Vec<&TokenBox> = doc.tokens().iter().collect();
            v.sort_by_key(|t| t.source_index());
            v
        };
        let tokens = order
            .as_slice()
            .iter()
            .map(|&i| {
                let t = by_source[i];
                OrderedToken { text: t.text().to_owned(), bbox: t.coords(), source_index: i }
            })
            .collect();
        Self { id: doc.id().to_owned(), strategy: strategy.to_owned(), seed, order: order.as_slice().to_vec(), tokens }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

#[derive(Debug, Deserialize)]
struct ReferenceRecord {
    id: String,
    order: Vec<usize>,
}

/// Reference orders keyed by document id. The file may hold one object with
/// `id` and `order` (for instance an order output), an array of them, or a
/// stream of them (JSON Lines).
pub fn read_reference(path: &Path) -> Result<Vec<(String, ReadingOrder)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for value in serde_json::Deserializer::from_str(&text).into_iter::<serde_json::Value>() {
        let value = value.map_err(|e| Error::parse(path, &e))?;
        let items = match value {
            serde_json::Value::Array(items) => items,
            other => vec![other],
        };
        for item in items {
            let rec: ReferenceRecord = serde_json::from_value(item).map_err(|e| Error::invalid(path, e.to_string()))?;
            let order = ReadingOrder::new(rec.order)
                .map_err(|e| Error::invalid(path, format!("reference {:?}: {e}", rec.id)))?;
            out.push((rec.id, order));
        }
    }
    Ok(out)
}

/// Destination for a per-document artifact: `path` itself for a single
/// document, `path/<id><suffix>` when several documents share the run.
pub fn artifact_path(path: &Path, doc_id: &str, suffix: &str, many: bool) -> PathBuf {
    if !many {
        return path.to_path_buf();
    }
    let safe: String =
        doc_id.chars().map(|c| if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' }).collect();
    path.join(format!("{safe}{suffix}"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
