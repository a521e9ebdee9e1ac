//! Baseline orderings keyed on each box's left-top corner.
//!
//! Every ordering breaks ties by `source_index`, so results do not depend on
//! the token sequence order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::augment::{shift_boxes, AugmentParams};
use crate::geometry::{Document, ReadingOrder, TokenBox};

pub(crate) fn cmp_yx(a: &TokenBox, b: &TokenBox) -> Ordering {
    a.y1().total_cmp(&b.y1()).then(a.x1().total_cmp(&b.x1())).then(a.source_index().cmp(&b.source_index()))
}

fn cmp_xy(a: &TokenBox, b: &TokenBox) -> Ordering {
    a.x1().total_cmp(&b.x1()).then(a.y1().total_cmp(&b.y1())).then(a.source_index().cmp(&b.source_index()))
}

fn cmp_sum(a: &TokenBox, b: &TokenBox) -> Ordering {
    (a.y1() + a.x1()).total_cmp(&(b.y1() + b.x1())).then(a.source_index().cmp(&b.source_index()))
}

fn sorted_by(doc: &Document, cmp: fn(&TokenBox, &TokenBox) -> Ordering) -> ReadingOrder {
    let mut toks: Vec<&TokenBox> = doc.tokens().iter().collect();
    toks.sort_unstable_by(|a, b| cmp(a, b));
    ReadingOrder::new(toks.iter().map(|t| t.source_index()).collect())
        .expect("document source indices form a permutation")
}

/// The token sequence as given.
pub fn order_default(doc: &Document) -> ReadingOrder {
    ReadingOrder::new(doc.source_order()).expect("document source indices form a permutation")
}

/// Top-first, then left-first: sort by `(y1, x1, source_index)`.
pub fn order_yx(doc: &Document) -> ReadingOrder {
    sorted_by(doc, cmp_yx)
}

/// Left-first, then top-first: sort by `(x1, y1, source_index)`.
pub fn order_xy(doc: &Document) -> ReadingOrder {
    sorted_by(doc, cmp_xy)
}

/// Sort by `(y1 + x1, source_index)`.
pub fn order_sum(doc: &Document) -> ReadingOrder {
    sorted_by(doc, cmp_sum)
}

/// [`order_yx`] over randomly shifted boxes. The order indexes the original
/// tokens.
pub fn order_aug_yx<R: Rng + ?Sized>(doc: &Document, params: &AugmentParams, rng: &mut R) -> ReadingOrder {
    order_yx(&shift_boxes(doc, params, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn abc() -> Document {
        Document::from_boxes(
            "abc",
            100.0,
            100.0,
            [(0.0, 0.0, 10.0, 10.0, "A"), (20.0, 0.0, 30.0, 10.0, "B"), (0.0, 20.0, 10.0, 30.0, "C")],
        )
        .unwrap()
    }

    fn random_doc(rng: &mut ChaCha8Rng, n: usize) -> Document {
        let boxes: Vec<_> = (0..n)
            .map(|_| {
                let x = rng.random_range(0..50) as f64;
                let y = rng.random_range(0..50) as f64;
                (x, y, x + 5.0, y + 5.0, "")
            })
            .collect();
        Document::from_boxes("r", 100.0, 100.0, boxes).unwrap()
    }

    #[test]
    fn yx_xy_sum_on_three_boxes() {
        let d = abc();
        assert_eq!(order_yx(&d).as_slice(), [0, 1, 2]);
        assert_eq!(order_xy(&d).as_slice(), [0, 2, 1]);
        // B and C tie on 20, source index decides
        assert_eq!(order_sum(&d).as_slice(), [0, 1, 2]);
        assert_eq!(order_default(&d).as_slice(), [0, 1, 2]);
    }

    #[test]
    fn equal_boxes_keep_input_order() {
        let d = Document::from_boxes("eq", 10.0, 10.0, vec![(1.0, 1.0, 2.0, 2.0, ""); 5]).unwrap();
        for ord in [order_yx(&d), order_xy(&d), order_sum(&d)] {
            assert_eq!(ord.as_slice(), [0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn single_box() {
        let d = Document::from_boxes("one", 10.0, 10.0, [(1.0, 1.0, 2.0, 2.0, "")]).unwrap();
        assert_eq!(order_xy(&d).as_slice(), [0]);
    }

    // reference: lexicographic sort over explicit key tuples
    fn reference(doc: &Document, key: impl Fn(&TokenBox) -> (f64, f64)) -> Vec<usize> {
        let mut keyed: Vec<(f64, f64, usize)> =
            doc.tokens().iter().map(|t| (key(t).0, key(t).1, t.source_index())).collect();
        keyed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        keyed.into_iter().map(|k| k.2).collect()
    }

    #[test]
    fn heuristics_match_reference_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..60);
            let d = random_doc(&mut rng, n);
            assert_eq!(order_yx(&d).into_vec(), reference(&d, |t| (t.y1(), t.x1())));
            assert_eq!(order_xy(&d).into_vec(), reference(&d, |t| (t.x1(), t.y1())));
            assert_eq!(order_sum(&d).into_vec(), reference(&d, |t| (t.y1() + t.x1(), 0.0)));

            let mut toks = d.tokens().to_vec();
            toks.reverse();
            let shuffled = d.with_tokens(toks).unwrap();
            assert_eq!(order_yx(&shuffled), order_yx(&d));
            assert_eq!(order_sum(&shuffled), order_sum(&d));
        }
    }

    #[test]
    fn diagonal_boxes_agree() {
        let d = Document::from_boxes(
            "diag",
            100.0,
            100.0,
            (0..8).rev().map(|i| (i as f64 * 10.0, i as f64 * 10.0, i as f64 * 10.0 + 5.0, i as f64 * 10.0 + 5.0, "")),
        )
        .unwrap();
        assert_eq!(order_yx(&d), order_xy(&d));
        assert_eq!(order_yx(&d).as_slice(), [7, 6, 5, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn aug_yx() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = random_doc(&mut rng, 40);
        let still = AugmentParams::new(0.5, 0.5, 0.0).unwrap();
        assert_eq!(order_aug_yx(&d, &still, &mut ChaCha8Rng::seed_from_u64(9)), order_yx(&d));

        let p = AugmentParams::default();
        let a = order_aug_yx(&d, &p, &mut ChaCha8Rng::seed_from_u64(9));
        let b = order_aug_yx(&d, &p, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        for seed in 0..50 {
            let o = order_aug_yx(&d, &p, &mut ChaCha8Rng::seed_from_u64(seed));
            assert!(ReadingOrder::new(o.into_vec()).is_ok());
        }
    }
}
