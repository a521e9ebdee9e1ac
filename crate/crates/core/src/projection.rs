//! Projection profiles and valley detection.
//!
//! A profile counts, for every coordinate `t` on one axis, how many boxes have
//! a closed projection interval `[a, b]` containing `t`. It is computed exactly
//! from the interval endpoints, so fractional coordinates need no rasterising.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::TokenBox;

/// Which profile to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axis {
    /// Project onto the Y axis; valleys separate rows (cuts are horizontal).
    Horizontal,
    /// Project onto the X axis; valleys separate columns.
    Vertical,
}

impl Axis {
    pub fn other(self) -> Self {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }

    /// The box's closed projection interval on this axis.
    #[inline]
    pub fn interval(self, b: &TokenBox) -> (f64, f64) {
        match self {
            Axis::Horizontal => (b.y1(), b.y2()),
            Axis::Vertical => (b.x1(), b.x2()),
        }
    }
}

/// One breakpoint of the piecewise-constant coverage function.
///
/// `at` is the coverage exactly at `position`; `after` holds on the open
/// interval up to the next breakpoint (and is 0 after the last one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub position: f64,
    pub at: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProfile {
    axis: Axis,
    breaks: Vec<Breakpoint>,
}

/// A maximal open interval of zero coverage between two covered points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Valley {
    pub start: f64,
    pub end: f64,
}

impl ProjectionProfile {
    /// Builds the profile of closed intervals `[a, b]` with `a <= b`.
    pub fn from_intervals(axis: Axis, intervals: &[(f64, f64)]) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut starts: Vec<f64> = intervals.iter().map(|iv| iv.0).collect();
        let mut ends: Vec<f64> = intervals.iter().map(|iv| iv.1).collect();
        starts.sort_unstable_by(f64::total_cmp);
        ends.sort_unstable_by(f64::total_cmp);

        let mut breaks = Vec::with_capacity(starts.len() + ends.len());
        let (mut si, mut ei) = (0, 0);
        while si < starts.len() || ei < ends.len() {
            let p = match (starts.get(si), ends.get(ei)) {
                (Some(&s), Some(&e)) => s.min(e),
                (Some(&s), None) => s,
                (None, Some(&e)) => e,
                (None, None) => unreachable!(),
            };
            while si < starts.len() && starts[si] <= p {
                si += 1;
            }
            // intervals ending strictly before p are already gone
            let open = si - ei;
            while ei < ends.len() && ends[ei] <= p {
                ei += 1;
            }
            breaks.push(Breakpoint { position: p, at: open, after: si - ei });
        }
        Ok(Self { axis, breaks })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Lowest covered coordinate.
    pub fn lo(&self) -> f64 {
        self.breaks[0].position
    }

    /// Highest covered coordinate.
    pub fn hi(&self) -> f64 {
        self.breaks[self.breaks.len() - 1].position
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breaks
    }

    /// Number of boxes whose projection contains `t`.
    pub fn coverage(&self, t: f64) -> usize {
        let idx = self.breaks.partition_point(|b| b.position <= t);
        if idx == 0 {
            return 0;
        }
        let b = &self.breaks[idx - 1];
        if b.position == t {
            b.at
        } else {
            b.after
        }
    }

    /// Integral of coverage over the domain; equals the summed interval lengths.
    pub fn integral(&self) -> f64 {
        self.breaks.windows(2).map(|w| w[0].after as f64 * (w[1].position - w[0].position)).sum()
    }

    /// Zero-coverage gaps, ascending. Margins outside `[lo, hi]` are not valleys.
    pub fn valleys(&self) -> Vec<Valley> {
        self.breaks
            .windows(2)
            .filter(|w| w[0].after == 0)
            .map(|w| Valley { start: w[0].position, end: w[1].position })
            .collect()
    }
}

/// Projection profile of `boxes` on `axis`.
pub fn profile(boxes: &[TokenBox], axis: Axis) -> Result<ProjectionProfile> {
    let intervals: Vec<(f64, f64)> = boxes.iter().map(|b| axis.interval(b)).collect();
    ProjectionProfile::from_intervals(axis, &intervals)
}

pub fn valleys(p: &ProjectionProfile) -> Vec<Valley> {
    p.valleys()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn boxes(coords: &[[f64; 4]]) -> Vec<TokenBox> {
        coords.iter().enumerate().map(|(i, c)| TokenBox::new(c[0], c[1], c[2], c[3], "", i).unwrap()).collect()
    }

    fn random_int_boxes(rng: &mut ChaCha8Rng, n: usize) -> Vec<TokenBox> {
        (0..n)
            .map(|i| {
                let x = rng.random_range(0..200) as f64;
                let y = rng.random_range(0..200) as f64;
                let w = rng.random_range(0..30) as f64;
                let h = rng.random_range(0..30) as f64;
                TokenBox::new(x, y, x + w, y + h, "", i).unwrap()
            })
            .collect()
    }

    #[test]
    fn coverage_of_two_stacked_boxes() {
        let p = profile(&boxes(&[[0.0, 0.0, 10.0, 10.0], [0.0, 20.0, 10.0, 30.0]]), Axis::Horizontal).unwrap();
        assert_eq!(p.coverage(5.0), 1);
        assert_eq!(p.coverage(15.0), 0);
        assert_eq!(p.coverage(25.0), 1);
        assert_eq!(p.coverage(10.0), 1);
        assert_eq!(p.coverage(-1.0), 0);
        assert_eq!(p.coverage(31.0), 0);
        assert_eq!(p.valleys(), vec![Valley { start: 10.0, end: 20.0 }]);
    }

    #[test]
    fn identical_boxes_sum() {
        let p = profile(&boxes(&[[0.0, 0.0, 10.0, 10.0]; 2]), Axis::Horizontal).unwrap();
        assert_eq!(p.coverage(5.0), 2);
    }

    #[test]
    fn overlapping_boxes_have_no_valley() {
        let p = profile(&boxes(&[[0.0, 0.0, 10.0, 10.0], [0.0, 5.0, 10.0, 30.0]]), Axis::Horizontal).unwrap();
        assert!(p.valleys().is_empty());
    }

    #[test]
    fn touching_intervals_do_not_split() {
        let p = profile(&boxes(&[[0.0, 0.0, 10.0, 1.0], [10.0, 0.0, 20.0, 1.0]]), Axis::Vertical).unwrap();
        assert_eq!(p.coverage(10.0), 2);
        assert!(p.valleys().is_empty());
    }

    #[test]
    fn degenerate_interval_is_a_point() {
        let p = profile(&boxes(&[[5.0, 0.0, 5.0, 1.0], [7.0, 0.0, 9.0, 1.0]]), Axis::Vertical).unwrap();
        assert_eq!(p.coverage(5.0), 1);
        assert_eq!(p.coverage(5.5), 0);
        assert_eq!(p.valleys(), vec![Valley { start: 5.0, end: 7.0 }]);
    }

    #[test]
    fn empty_is_error() {
        assert_eq!(profile(&[], Axis::Horizontal), Err(Error::EmptyInput));
    }

    #[test]
    fn coverage_matches_containment_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bs = random_int_boxes(&mut rng, 50);
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let p = profile(&bs, axis).unwrap();
            for _ in 0..1000 {
                // half the probes land on integer endpoints
                let t =
                    if rng.random_bool(0.5) { rng.random_range(-5..240) as f64 } else { rng.random_range(-5.0..240.0) };
                let brute = bs
                    .iter()
                    .filter(|b| {
                        let (a, e) = axis.interval(b);
                        a <= t && t <= e
                    })
                    .count();
                assert_eq!(p.coverage(t), brute, "t = {t}");
            }
        }
    }

    #[test]
    fn valleys_are_complement_of_interval_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.random_range(1..25);
            let bs = random_int_boxes(&mut rng, n);
            let p = profile(&bs, Axis::Horizontal).unwrap();
            // union by merging sorted intervals
            let mut ivs: Vec<(f64, f64)> = bs.iter().map(|b| (b.y1(), b.y2())).collect();
            ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut union: Vec<(f64, f64)> = Vec::new();
            for (a, b) in ivs {
                match union.last_mut() {
                    Some(last) if a <= last.1 => last.1 = last.1.max(b),
                    _ => union.push((a, b)),
                }
            }
            let gaps: Vec<Valley> = union.windows(2).map(|w| Valley { start: w[0].1, end: w[1].0 }).collect();
            assert_eq!(p.valleys(), gaps);
            assert!(p.valleys().len() < bs.len());
            let lengths: f64 = bs.iter().map(|b| b.y2() - b.y1()).sum();
            assert!((p.integral() - lengths).abs() < 1e-9);
        }
    }
}
