//! Per-document ordering latency. Parsing and output are not timed.

use std::hint::black_box;
use std::time::Instant;

use readorder_core::Document;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::strategy::{compute_order, OrderStrategy};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchStats {
    pub id: String,
    pub tokens: usize,
    pub samples: usize,
    /// Seconds.
    pub mean: f64,
    /// Sample standard deviation in seconds; 0 for a single sample.
    pub stddev: f64,
    pub min: f64,
}

impl BenchStats {
    pub fn from_samples(id: &str, tokens: usize, samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stddev = if samples.len() > 1 {
            (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
        Self { id: id.to_owned(), tokens, samples: samples.len(), mean, stddev, min }
    }
}

/// Times `repetitions` runs of `strategy` on each document.
pub fn bench(docs: &[Document], strategy: &OrderStrategy, repetitions: usize) -> Result<Vec<BenchStats>> {
    if repetitions == 0 {
        return Err(Error::Usage("--bench needs at least one repetition".into()));
    }
    docs.iter()
        .map(|doc| {
            let mut samples = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let start = Instant::now();
                black_box(compute_order(black_box(doc), strategy)?);
                samples.push(start.elapsed().as_secs_f64());
            }
            Ok(BenchStats::from_samples(doc.id(), doc.len(), &samples))
        })
        .collect()
}
