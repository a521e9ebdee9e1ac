//! Reading-order engine for OCR token boxes.
//!
//! The centrepiece is a recursive XY cut over exact projection profiles
//! ([`xycut`]), optionally preceded by randomised box shifts ([`augment`]) to
//! sample several plausible orders from noisy OCR geometry. Baseline sorts
//! live in [`heuristics`]; [`dcpe`] holds forward-pass numerics for dilated
//! convolutional position encoding.
//!
//! Coordinates use the image convention: origin top-left, `y` grows downward.
//! Reading precedence is therefore ascending `y` (top first), then ascending
//! `x` (left first).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod augment;
pub mod dcpe;
pub mod error;
pub mod geometry;
pub mod heuristics;
pub mod projection;
pub mod xycut;

pub use augment::{augmented_xy_cut, shift_boxes, shift_rng, AugmentParams, ShiftDistribution, ShiftRng, ShiftSample};
pub use error::{Error, Result};
pub use geometry::{apply_order, extent, Document, Extent, ReadingOrder, TokenBox};
pub use heuristics::{order_aug_yx, order_default, order_sum, order_xy, order_yx};
pub use projection::{profile, valleys, Axis, ProjectionProfile, Valley};
pub use xycut::{divide, fallback, flatten, xy_cut, NodeKind, XyNode, XyTree};
