//! Ordering strategies and their batch driver.

use clap::ValueEnum;
use rayon::prelude::*;
use readorder_core::{
    augmented_xy_cut, order_aug_yx, order_default, order_sum, order_xy, order_yx, shift_rng, xy_cut, AugmentParams,
    Document, ReadingOrder, XyTree,
};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Default,
    Yx,
    Xy,
    Sum,
    Xycut,
    AugXycut,
    AugYx,
}

/// A strategy ready to run. Augmented strategies carry their parameters and
/// a base seed; each document draws from its own stream, seeded by
/// [`document_seed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderStrategy {
    Default,
    Yx,
    Xy,
    Sum,
    XyCut,
    AugXyCut { params: AugmentParams, seed: u64 },
    AugYx { params: AugmentParams, seed: u64 },
}

impl OrderStrategy {
    /// `seed` is required for the augmented strategies and ignored otherwise.
    pub fn from_name(name: StrategyName, params: AugmentParams, seed: Option<u64>) -> Result<Self> {
        let need_seed = || seed.ok_or_else(|| Error::Usage(format!("strategy {name:?} needs a seed")));
        Ok(match name {
            StrategyName::Default => OrderStrategy::Default,
            StrategyName::Yx => OrderStrategy::Yx,
            StrategyName::Xy => OrderStrategy::Xy,
            StrategyName::Sum => OrderStrategy::Sum,
            StrategyName::Xycut => OrderStrategy::XyCut,
            StrategyName::AugXycut => OrderStrategy::AugXyCut { params, seed: need_seed()? },
            StrategyName::AugYx => OrderStrategy::AugYx { params, seed: need_seed()? },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderStrategy::Default => "default",
            OrderStrategy::Yx => "yx",
            OrderStrategy::Xy => "xy",
            OrderStrategy::Sum => "sum",
            OrderStrategy::XyCut => "xycut",
            OrderStrategy::AugXyCut { .. } => "aug-xycut",
            OrderStrategy::AugYx { .. } => "aug-yx",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            OrderStrategy::AugXyCut { seed, .. } | OrderStrategy::AugYx { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn produces_tree(&self) -> bool {
        matches!(self, OrderStrategy::XyCut | OrderStrategy::AugXyCut { .. })
    }
}

/// Per-document seed: the first 8 bytes (little endian) of
/// `SHA-256(base_seed as u64 LE || document id as UTF-8)`.
pub fn document_seed(base: u64, doc_id: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(base.to_le_bytes());
    hasher.update(doc_id.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderOutcome {
    pub order: ReadingOrder,
    pub tree: Option<XyTree>,
}

/// Runs `strategy` without any post-checks.
pub fn compute_order(doc: &Document, strategy: &OrderStrategy) -> Result<OrderOutcome> {
    let plain = |order| Ok(OrderOutcome { order, tree: None });
    match strategy {
        OrderStrategy::Default => plain(order_default(doc)),
        OrderStrategy::Yx => plain(order_yx(doc)),
        OrderStrategy::Xy => plain(order_xy(doc)),
        OrderStrategy::Sum => plain(order_sum(doc)),
        OrderStrategy::XyCut => {
            let (order, tree) = xy_cut(doc)?;
            Ok(OrderOutcome { order, tree: Some(tree) })
        }
        OrderStrategy::AugXyCut { params, seed } => {
            let mut rng = shift_rng(document_seed(*seed, doc.id()));
            let (order, tree) = augmented_xy_cut(doc, params, &mut rng)?;
            Ok(OrderOutcome { order, tree: Some(tree) })
        }
        OrderStrategy::AugYx { params, seed } => {
            let mut rng = shift_rng(document_seed(*seed, doc.id()));
            plain(order_aug_yx(doc, params, &mut rng))
        }
    }
}

/// Runs `strategy` on one document and checks the result: the order must
/// cover every token exactly once and any tree must be well formed.
pub fn run_order(doc: &Document, strategy: &OrderStrategy) -> Result<OrderOutcome> {
    let outcome = compute_order(doc, strategy)?;
    if outcome.order.len() != doc.len() {
        return Err(Error::Invariant(format!(
            "{}: order has {} entries for {} tokens",
            doc.id(),
            outcome.order.len(),
            doc.len()
        )));
    }
    if let Some(tree) = &outcome.tree {
        tree.validate().map_err(|e| Error::Invariant(format!("{}: {e}", doc.id())))?;
        if tree.leaves() != outcome.order.as_slice() {
            return Err(Error::Invariant(format!("{}: tree leaves disagree with order", doc.id())));
        }
    }
    Ok(outcome)
}

/// Orders every document on a pool of `jobs` threads. Results come back in
/// input order and do not depend on `jobs`.
pub fn run_all(docs: &[Document], strategy: &OrderStrategy, jobs: usize) -> Result<Vec<OrderOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| docs.par_iter().map(|d| run_order(d, strategy)).collect())
}
