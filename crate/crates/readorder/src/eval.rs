//! Order agreement metrics: Kendall tau-a over rank pairs.

use readorder_core::ReadingOrder;
use serde::Serialize;

use crate::error::{Error, Result};

/// Agreement of one predicted order with its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalEntry {
    pub tokens: usize,
    /// Token pairs the two orders read in opposite sequence.
    pub inversions: u64,
    /// `1 - 2 * inversions / (K * (K - 1) / 2)`; 1 when `K < 2`.
    pub tau: f64,
    pub exact_match: bool,
}

/// Counts inversions of `seq` by merge sort.
pub fn count_inversions(seq: &[usize]) -> u64 {
    fn sort(v: &mut [usize], buf: &mut Vec<usize>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = sort(&mut v[..mid], buf) + sort(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[i] <= v[j] {
                buf.push(v[i]);
                i += 1;
            } else {
                buf.push(v[j]);
                inv += (mid - i) as u64;
                j += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..n]);
        v.copy_from_slice(buf);
        inv
    }
    let mut work = seq.to_vec();
    sort(&mut work, &mut Vec::with_capacity(seq.len()))
}

pub fn tau_from_inversions(inversions: u64, tokens: usize) -> f64 {
    if tokens < 2 {
        return 1.0;
    }
    let pairs = (tokens as i64) * (tokens as i64 - 1) / 2;
    // (concordant - discordant) / pairs, with an exact integer numerator
    (pairs - 2 * inversions as i64) as f64 / pairs as f64
}

pub fn evaluate(pred: &ReadingOrder, reference: &ReadingOrder) -> Result<EvalEntry> {
    if pred.len() != reference.len() {
        return Err(Error::Core(readorder_core::Error::LengthMismatch {
            expected: reference.len(),
            found: pred.len(),
        }));
    }
    let rank = pred.inverse();
    // predicted rank of each token, visited in reference order
    let seq: Vec<usize> = reference.as_slice().iter().map(|&i| rank.as_slice()[i]).collect();
    let inversions = count_inversions(&seq);
    Ok(EvalEntry {
        tokens: pred.len(),
        inversions,
        tau: tau_from_inversions(inversions, pred.len()),
        exact_match: inversions == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentEval {
    pub id: String,
    #[serde(flatten)]
    pub entry: EvalEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub documents: Vec<DocumentEval>,
    pub mean_tau: f64,
    pub exact_matches: usize,
    pub total_inversions: u64,
}

impl EvalReport {
    pub fn new(documents: Vec<DocumentEval>) -> Self {
        let n = documents.len().max(1) as f64;
        Self {
            mean_tau: documents.iter().map(|d| d.entry.tau).sum::<f64>() / n,
            exact_matches: documents.iter().filter(|d| d.entry.exact_match).count(),
            total_inversions: documents.iter().map(|d| d.entry.inversions).sum(),
            documents,
        }
    }
}
