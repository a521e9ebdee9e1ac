#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use readorder_core::{Document, TokenBox};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const PAGE_W: f64 = 1000.0;
pub const PAGE_H: f64 = 1400.0;

/// Text lines of words, optionally in two columns, with jittered baselines
/// that sometimes make neighbouring lines overlap.
pub fn form_like(rng: &mut ChaCha8Rng, k: usize, id: &str) -> Document {
    let columns = if rng.random_bool(0.5) { 2 } else { 1 };
    let col_w = (PAGE_W - 40.0) / columns as f64;
    let mut boxes = Vec::with_capacity(k);
    let mut col = 0;
    let mut y = 20.0;
    let mut x = 20.0;
    while boxes.len() < k {
        let w = rng.random_range(8..60) as f64;
        let h = rng.random_range(8..16) as f64;
        let jitter = rng.random_range(-3..=3) as f64;
        if x + w > 20.0 + col_w * (col + 1) as f64 - 10.0 {
            x = 20.0 + col_w * col as f64;
            y += rng.random_range(10..24) as f64;
        }
        if y > PAGE_H - 40.0 {
            col = (col + 1) % columns;
            x = 20.0 + col_w * col as f64;
            y = 20.0 + rng.random_range(0..8) as f64;
        }
        let top = (y + jitter).max(0.0);
        boxes.push((x, top, x + w, top + h));
        x += w + rng.random_range(2..14) as f64;
    }
    build(id, boxes)
}

/// Boxes scattered uniformly; many overlap.
pub fn scattered(rng: &mut ChaCha8Rng, k: usize, id: &str) -> Document {
    let boxes = (0..k)
        .map(|_| {
            let x = rng.random_range(0..900) as f64;
            let y = rng.random_range(0..1300) as f64;
            (x, y, x + rng.random_range(0..90) as f64, y + rng.random_range(0..40) as f64)
        })
        .collect();
    build(id, boxes)
}

/// Either layout, or a union of both, with `k` boxes.
pub fn random_document(rng: &mut ChaCha8Rng, k: usize, id: &str) -> Document {
    match rng.random_range(0..3) {
        0 => form_like(rng, k, id),
        1 => scattered(rng, k, id),
        _ => {
            let a = form_like(rng, k - k / 3, id);
            let b = scattered(rng, k / 3, id);
            let boxes = a.tokens().iter().chain(b.tokens()).map(|t| (t.x1(), t.y1(), t.x2(), t.y2())).collect();
            build(id, boxes)
        }
    }
}

pub fn build(id: &str, boxes: Vec<(f64, f64, f64, f64)>) -> Document {
    Document::from_boxes(
        id,
        PAGE_W,
        PAGE_H,
        boxes.into_iter().enumerate().map(|(i, (a, b, c, d))| (a, b, c, d, format!("w{i}"))),
    )
    .expect("generated boxes are valid")
}

/// 512 words in two columns of text lines.
pub fn synthetic_512() -> Document {
    let mut boxes = Vec::with_capacity(512);
    for i in 0..512 {
        let column = i / 256;
        let line = (i % 256) / 8;
        let word = i % 8;
        let x = 40.0 + column as f64 * 480.0 + word as f64 * 55.0;
        let y = 40.0 + line as f64 * 40.0;
        boxes.push((x, y, x + 45.0 + (i % 5) as f64, y + 14.0));
    }
    build("synthetic-512", boxes)
}

pub fn shuffle<T>(rng: &mut ChaCha8Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
}

pub fn shuffled(rng: &mut ChaCha8Rng, doc: &Document) -> Document {
    let mut tokens: Vec<TokenBox> = doc.tokens().to_vec();
    shuffle(rng, &mut tokens);
    doc.with_tokens(tokens).unwrap()
}

pub fn boxes_json(doc: &Document) -> String {
    readorder::io::to_boxes_json(doc)
}
