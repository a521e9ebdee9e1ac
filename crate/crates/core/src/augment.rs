//! Randomised box shifts that turn XY cut into augmented XY cut.
//!
//! For every box, two values `v_x`, `v_y` are drawn. When `|v_x| > lambda_x`
//! the box moves `theta * v_x` along X; likewise for Y. Boxes keep their size.
//!
//! Draws come from a caller-supplied RNG, two per box (`v_x` then `v_y`), in
//! ascending `source_index` order whether or not a shift fires. Appending
//! tokens therefore never changes the draws of earlier ones. The CLI and the
//! convenience helpers use [`ShiftRng`] (ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`) with `rand`'s uniform float sampler, which is
//! stable across platforms.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{Document, ReadingOrder};
use crate::xycut::{xy_cut, XyTree};

/// The generator used for reproducible augmentation.
pub type ShiftRng = rand_chacha::ChaCha8Rng;

pub fn shift_rng(seed: u64) -> ShiftRng {
    ShiftRng::seed_from_u64(seed)
}

/// How `v_x` and `v_y` are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ShiftDistribution {
    /// Uniform on `[-1, 1]`.
    #[default]
    Uniform,
    /// Standard normal, clamped to `[-1, 1]`.
    ClampedNormal,
}

impl ShiftDistribution {
    fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            ShiftDistribution::Uniform => rng.random_range(-1.0..=1.0),
            ShiftDistribution::ClampedNormal => {
                let v: f64 = StandardNormal.sample(rng);
                v.clamp(-1.0, 1.0)
            }
        }
    }
}

/// Thresholds `lambda_x`, `lambda_y` in `[0, 1]` and shift scale `theta >= 0`
/// (pixels). Defaults are `(0.5, 0.5, 5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AugmentParams {
    lambda_x: f64,
    lambda_y: f64,
    theta: f64,
    distribution: ShiftDistribution,
}

impl Default for AugmentParams {
    fn default() -> Self {
        Self { lambda_x: 0.5, lambda_y: 0.5, theta: 5.0, distribution: ShiftDistribution::Uniform }
    }
}

impl AugmentParams {
    pub fn new(lambda_x: f64, lambda_y: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda_x) || !(0.0..=1.0).contains(&lambda_y) {
            return Err(Error::InvalidParams("lambda thresholds must lie in [0, 1]"));
        }
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::InvalidParams("theta must be finite and non-negative"));
        }
        Ok(Self { lambda_x, lambda_y, theta, distribution: ShiftDistribution::Uniform })
    }

    pub fn with_distribution(mut self, distribution: ShiftDistribution) -> Self {
        self.distribution = distribution;
        self
    }

    pub fn lambda_x(&self) -> f64 {
        self.lambda_x
    }

    pub fn lambda_y(&self) -> f64 {
        self.lambda_y
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn distribution(&self) -> ShiftDistribution {
        self.distribution
    }

    /// Offset applied along X for a drawn `v_x` (zero when under threshold).
    pub fn x_offset(&self, v_x: f64) -> f64 {
        if v_x.abs() > self.lambda_x {
            self.theta * v_x
        } else {
            0.0
        }
    }

    pub fn y_offset(&self, v_y: f64) -> f64 {
        if v_y.abs() > self.lambda_y {
            self.theta * v_y
        } else {
            0.0
        }
    }
}

/// The pair of values drawn for one box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSample {
    pub v_x: f64,
    pub v_y: f64,
}

/// Draws `count` samples in sequence.
pub fn draw_shifts<R: Rng + ?Sized>(count: usize, params: &AugmentParams, rng: &mut R) -> Vec<ShiftSample> {
    (0..count)
        .map(|_| {
            let v_x = params.distribution.sample(rng);
            let v_y = params.distribution.sample(rng);
            ShiftSample { v_x, v_y }
        })
        .collect()
}

/// Applies `samples[i]` to the token whose `source_index` is `i`.
pub fn apply_shifts(doc: &Document, params: &AugmentParams, samples: &[ShiftSample]) -> Result<Document> {
    if samples.len() != doc.len() {
        return Err(Error::LengthMismatch { expected: doc.len(), found: samples.len() });
    }
    let tokens = doc
        .tokens()
        .iter()
        .map(|t| {
            let s = samples[t.source_index()];
            t.translated(params.x_offset(s.v_x), params.y_offset(s.v_y))
        })
        .collect();
    Ok(doc.with_tokens_unchecked(tokens))
}

/// Returns a copy of `doc` with every box independently shifted.
pub fn shift_boxes<R: Rng + ?Sized>(doc: &Document, params: &AugmentParams, rng: &mut R) -> Document {
    let samples = draw_shifts(doc.len(), params, rng);
    apply_shifts(doc, params, &samples).expect("one sample per token")
}

/// XY cut over shifted boxes. The order and tree index the original tokens;
/// shifts only influence the ordering.
pub fn augmented_xy_cut<R: Rng + ?Sized>(
    doc: &Document,
    params: &AugmentParams,
    rng: &mut R,
) -> Result<(ReadingOrder, XyTree)> {
    xy_cut(&shift_boxes(doc, params, rng))
}
