//! Recursive XY cut.
//!
//! Starting with the horizontal profile, each cluster is split at every
//! valley of the current axis' profile; the pieces are recursed on with the
//! other axis. A cluster that cannot be split along the current axis gets one
//! more try along the other axis before it is declared indivisible. Singleton
//! clusters become leaves, indivisible clusters are read top-first then
//! left-first. The reading order is the left-to-right sequence of leaves.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Document, ReadingOrder, TokenBox};
use crate::heuristics::cmp_yx;
use crate::projection::{Axis, ProjectionProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NodeKind {
    Root,
    /// Children are the clusters separated by valleys of `axis`'s profile.
    Division {
        axis: Axis,
    },
    /// A cluster no valley splits; its leaf children follow the fallback order.
    Indivisible,
    Leaf {
        index: usize,
    },
}

/// One node of the XY tree. `indices` holds the covered source indices in
/// ascending order; `children` are stored in reading precedence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XyNode {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: NodeKind,
    pub indices: Vec<usize>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub children: Vec<XyNode>,
}

impl XyNode {
    pub fn leaf(index: usize) -> Self {
        Self { kind: NodeKind::Leaf { index }, indices: vec![index], children: Vec::new() }
    }
}

/// Recursion trace of an XY cut. The root has a single child: the node for
/// the whole document.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XyTree {
    pub root: XyNode,
}

impl XyTree {
    /// Leaf indices in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.root.indices.len());
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            if let NodeKind::Leaf { index } = node.kind {
                out.push(index);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Checks the structural invariants: leaves cover `0..K` once each,
    /// children partition their parent, divisions have at least two children
    /// and division axes alternate along every root-to-leaf path.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::MalformedTree(msg.into()));
        if self.root.kind != NodeKind::Root {
            return bad("root node must have kind root");
        }
        if self.root.children.len() != 1 {
            return bad("root must have exactly one child");
        }
        let k = self.root.indices.len();
        if self.root.indices.iter().enumerate().any(|(i, &v)| i != v) {
            return bad("root must cover 0..K in ascending order");
        }
        if !crate::geometry::is_permutation(&self.leaves()) || self.leaves().len() != k {
            return bad("duplicate or missing leaf indices");
        }
        validate_node(&self.root, None)
    }
}

fn validate_node(node: &XyNode, last_axis: Option<Axis>) -> Result<()> {
    let fail = |msg: &str| Err(Error::MalformedTree(format!("{msg} (node {:?})", node.kind)));
    if node.indices.windows(2).any(|w| w[0] >= w[1]) {
        return fail("indices must be strictly ascending");
    }
    let mut next_axis = last_axis;
    match node.kind {
        NodeKind::Leaf { index } => {
            if node.indices != [index] || !node.children.is_empty() {
                return fail("leaf must cover exactly its own index and have no children");
            }
            return Ok(());
        }
        NodeKind::Root => {
            if last_axis.is_some() {
                return fail("root below the top");
            }
        }
        NodeKind::Division { axis } => {
            if node.children.len() < 2 {
                return fail("division needs at least two children");
            }
            if last_axis == Some(axis) {
                return fail("division axes must alternate");
            }
            next_axis = Some(axis);
        }
        NodeKind::Indivisible => {
            if node.children.len() < 2 || node.children.iter().any(|c| !matches!(c.kind, NodeKind::Leaf { .. })) {
                return fail("indivisible cluster needs two or more leaf children");
            }
        }
    }
    let mut union: Vec<usize> = node.children.iter().flat_map(|c| c.indices.iter().copied()).collect();
    union.sort_unstable();
    if union != node.indices {
        return fail("children must partition the parent's indices");
    }
    node.children.iter().try_for_each(|c| validate_node(c, next_axis))
}

/// Splits `members` (positions into `tokens`) at the valleys of `axis`'s
/// profile. Clusters come back in ascending coordinate order; members keep
/// their relative order.
fn divide_positions(tokens: &[TokenBox], members: &[usize], axis: Axis) -> Vec<Vec<usize>> {
    let intervals: Vec<(f64, f64)> = members.iter().map(|&m| axis.interval(&tokens[m])).collect();
    let valleys = match ProjectionProfile::from_intervals(axis, &intervals) {
        Ok(p) => p.valleys(),
        Err(_) => return Vec::new(),
    };
    if valleys.is_empty() {
        return vec![members.to_vec()];
    }
    let mut clusters = vec![Vec::new(); valleys.len() + 1];
    for (&m, &(lo, _)) in members.iter().zip(&intervals) {
        let slot = valleys.partition_point(|v| v.end <= lo);
        clusters[slot].push(m);
    }
    clusters
}

/// Partitions `boxes` into the clusters separated by valleys on `axis`,
/// top-first for [`Axis::Horizontal`] and left-first for [`Axis::Vertical`].
/// A single cluster comes back when the profile has no valley.
pub fn divide(boxes: &[TokenBox], axis: Axis) -> Vec<Vec<TokenBox>> {
    let members: Vec<usize> = (0..boxes.len()).collect();
    divide_positions(boxes, &members, axis)
        .into_iter()
        .map(|c| c.into_iter().map(|m| boxes[m].clone()).collect())
        .collect()
}

/// Order inside a cluster no valley can split: `(y1, x1, source_index)`
/// ascending. The result indexes positions within `boxes`.
pub fn fallback(boxes: &[TokenBox]) -> ReadingOrder {
    let mut pos: Vec<usize> = (0..boxes.len()).collect();
    pos.sort_unstable_by(|&a, &b| cmp_yx(&boxes[a], &boxes[b]));
    ReadingOrder::new(pos).expect("sorted positions form a permutation")
}

fn sorted_indices(tokens: &[TokenBox], members: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = members.iter().map(|&m| tokens[m].source_index()).collect();
    idx.sort_unstable();
    idx
}

fn build(tokens: &[TokenBox], mut members: Vec<usize>, axis: Axis) -> XyNode {
    if let [only] = members[..] {
        return XyNode::leaf(tokens[only].source_index());
    }
    let indices = sorted_indices(tokens, &members);
    for try_axis in [axis, axis.other()] {
        let clusters = divide_positions(tokens, &members, try_axis);
        if clusters.len() > 1 {
            let children = clusters.into_iter().map(|c| build(tokens, c, try_axis.other())).collect();
            return XyNode { kind: NodeKind::Division { axis: try_axis }, indices, children };
        }
    }
    members.sort_unstable_by(|&a, &b| cmp_yx(&tokens[a], &tokens[b]));
    let children = members.iter().map(|&m| XyNode::leaf(tokens[m].source_index())).collect();
    XyNode { kind: NodeKind::Indivisible, indices, children }
}

/// Runs XY cut on `doc`, returning the order over source indices and the
/// tree that produced it.
pub fn xy_cut(doc: &Document) -> Result<(ReadingOrder, XyTree)> {
    if doc.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let tokens = doc.tokens();
    let top = build(tokens, (0..tokens.len()).collect(), Axis::Horizontal);
    let tree =
        XyTree { root: XyNode { kind: NodeKind::Root, indices: (0..tokens.len()).collect(), children: vec![top] } };
    let order = flatten(&tree)?;
    Ok((order, tree))
}

/// Gathers leaf indices depth-first, children in stored order.
pub fn flatten(tree: &XyTree) -> Result<ReadingOrder> {
    ReadingOrder::new(tree.leaves()).map_err(|_| Error::MalformedTree("duplicate or missing leaf indices".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn figure_layout() -> Document {
        Document::from_boxes(
            "figure",
            100.0,
            60.0,
            [
                (0.0, 0.0, 100.0, 10.0, "1"),
                (0.0, 20.0, 20.0, 60.0, "2"),
                (30.0, 20.0, 70.0, 28.0, "3"),
                (30.0, 32.0, 40.0, 60.0, "4"),
                (45.0, 32.0, 55.0, 60.0, "5"),
                (60.0, 32.0, 70.0, 60.0, "6"),
                (80.0, 20.0, 100.0, 60.0, "7"),
            ],
        )
        .unwrap()
    }

    fn division(axis: Axis, children: Vec<XyNode>) -> XyNode {
        let mut indices: Vec<usize> = children.iter().flat_map(|c| c.indices.clone()).collect();
        indices.sort_unstable();
        XyNode { kind: NodeKind::Division { axis }, indices, children }
    }

    fn figure_tree() -> XyTree {
        use Axis::*;
        let l = XyNode::leaf;
        let inner = division(Vertical, vec![l(3), l(4), l(5)]);
        let middle = division(Horizontal, vec![l(2), inner]);
        let lower = division(Vertical, vec![l(1), middle, l(6)]);
        let top = division(Horizontal, vec![l(0), lower]);
        XyTree { root: XyNode { kind: NodeKind::Root, indices: (0..7).collect(), children: vec![top] } }
    }

    #[test]
    fn figure_layout_order_and_tree() {
        let (order, tree) = xy_cut(&figure_layout()).unwrap();
        assert_eq!(order.as_slice(), [0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(tree, figure_tree());
        tree.validate().unwrap();
    }

    #[test]
    fn figure_layout_is_input_order_independent() {
        let d = figure_layout();
        let mut toks = d.tokens().to_vec();
        toks.reverse();
        toks.swap(1, 4);
        let (order, tree) = xy_cut(&d.with_tokens(toks).unwrap()).unwrap();
        assert_eq!(order.as_slice(), [0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(tree, figure_tree());
    }

    #[test]
    fn flatten_figure_tree() {
        assert_eq!(flatten(&figure_tree()).unwrap().as_slice(), [0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn single_box_is_one_leaf() {
        let d = Document::from_boxes("one", 10.0, 10.0, [(1.0, 1.0, 2.0, 2.0, "")]).unwrap();
        let (order, tree) = xy_cut(&d).unwrap();
        assert_eq!(order.as_slice(), [0]);
        assert_eq!(tree.root.children, vec![XyNode::leaf(0)]);
        assert_eq!(flatten(&tree).unwrap().as_slice(), [0]);
    }

    #[test]
    fn upper_box_first_regardless_of_input() {
        let d = Document::from_boxes(
            "stack",
            100.0,
            100.0,
            [(0.0, 50.0, 10.0, 60.0, "low"), (0.0, 0.0, 10.0, 10.0, "high")],
        )
        .unwrap();
        assert_eq!(xy_cut(&d).unwrap().0.as_slice(), [1, 0]);
    }

    #[test]
    fn empty_document_is_error() {
        let d = Document::new("e", 1.0, 1.0, Vec::new()).unwrap();
        assert_eq!(xy_cut(&d), Err(Error::EmptyDocument));
    }

    #[test]
    fn retries_other_axis() {
        // two columns side by side; the horizontal profile has no valley
        let d = Document::from_boxes(
            "cols",
            100.0,
            100.0,
            [(50.0, 0.0, 60.0, 50.0, "right"), (0.0, 10.0, 10.0, 40.0, "left")],
        )
        .unwrap();
        let (order, tree) = xy_cut(&d).unwrap();
        assert_eq!(order.as_slice(), [1, 0]);
        assert_eq!(tree.root.children[0].kind, NodeKind::Division { axis: Axis::Vertical });
    }

    #[test]
    fn indivisible_cluster_uses_fallback() {
        // a pinwheel: no horizontal or vertical valley exists
        let d = Document::from_boxes(
            "pinwheel",
            100.0,
            100.0,
            [
                (0.0, 30.0, 30.0, 90.0, "w"),
                (0.0, 0.0, 60.0, 30.0, "n"),
                (60.0, 0.0, 90.0, 60.0, "e"),
                (30.0, 60.0, 90.0, 90.0, "s"),
            ],
        )
        .unwrap();
        let (order, tree) = xy_cut(&d).unwrap();
        assert_eq!(tree.root.children[0].kind, NodeKind::Indivisible);
        // (y1, x1): n(0,0) e(0,60) w(30,0) s(60,30)
        assert_eq!(order.as_slice(), [1, 2, 0, 3]);
        tree.validate().unwrap();
    }

    #[test]
    fn fallback_examples() {
        let overlapping = [
            TokenBox::new(5.0, 0.0, 20.0, 10.0, "right", 0).unwrap(),
            TokenBox::new(0.0, 0.0, 20.0, 10.0, "left", 1).unwrap(),
        ];
        assert_eq!(fallback(&overlapping).as_slice(), [1, 0]);
        let same = [
            TokenBox::new(0.0, 0.0, 5.0, 5.0, "", 0).unwrap(),
            TokenBox::new(0.0, 0.0, 5.0, 5.0, "", 1).unwrap(),
            TokenBox::new(0.0, 0.0, 5.0, 5.0, "", 2).unwrap(),
        ];
        assert_eq!(fallback(&same).as_slice(), [0, 1, 2]);
    }

    #[test]
    fn fallback_matches_reference_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            // every box contains the point (50, 50)
            let boxes: Vec<TokenBox> = (0..10)
                .map(|i| {
                    let x1 = rng.random_range(0..50) as f64;
                    let y1 = rng.random_range(0..50) as f64;
                    let x2 = rng.random_range(50..100) as f64;
                    let y2 = rng.random_range(50..100) as f64;
                    TokenBox::new(x1, y1, x2, y2, "", i).unwrap()
                })
                .collect();
            let mut keyed: Vec<(f64, f64, usize)> = boxes.iter().map(|b| (b.y1(), b.x1(), b.source_index())).collect();
            keyed.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let want: Vec<usize> = keyed.into_iter().map(|k| k.2).collect();
            assert_eq!(fallback(&boxes).into_vec(), want);
        }
    }

    #[test]
    fn divide_examples() {
        let stacked = [
            TokenBox::new(0.0, 20.0, 10.0, 30.0, "low", 0).unwrap(),
            TokenBox::new(0.0, 0.0, 10.0, 10.0, "high", 1).unwrap(),
        ];
        let c = divide(&stacked, Axis::Horizontal);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0][0].text(), "high");
        let overlapping =
            [TokenBox::new(0.0, 0.0, 10.0, 10.0, "", 0).unwrap(), TokenBox::new(0.0, 5.0, 10.0, 30.0, "", 1).unwrap()];
        assert_eq!(divide(&overlapping, Axis::Horizontal).len(), 1);
    }

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    #[test]
    fn divide_matches_overlap_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..300 {
            let n = rng.random_range(1..40);
            let boxes: Vec<TokenBox> = (0..n)
                .map(|i| {
                    let x = rng.random_range(0..300) as f64;
                    let y = rng.random_range(0..300) as f64;
                    let w = rng.random_range(0..25) as f64;
                    let h = rng.random_range(0..25) as f64;
                    TokenBox::new(x, y, x + w, y + h, "", i).unwrap()
                })
                .collect();
            for axis in [Axis::Horizontal, Axis::Vertical] {
                let mut parent: Vec<usize> = (0..n).collect();
                for i in 0..n {
                    for j in 0..i {
                        let (a0, a1) = axis.interval(&boxes[i]);
                        let (b0, b1) = axis.interval(&boxes[j]);
                        if a0 <= b1 && b0 <= a1 {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            parent[ri] = rj;
                        }
                    }
                }
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for i in 0..n {
                    groups.entry(find(&mut parent, i)).or_default().push(i);
                }
                let mut want: Vec<Vec<usize>> = groups.into_values().collect();
                let mut got: Vec<Vec<usize>> =
                    divide(&boxes, axis).iter().map(|c| c.iter().map(TokenBox::source_index).collect()).collect();
                // precedence: clusters ascend by their lowest coordinate
                let starts: Vec<f64> = got
                    .iter()
                    .map(|c| c.iter().map(|&i| axis.interval(&boxes[i]).0).fold(f64::INFINITY, f64::min))
                    .collect();
                assert!(starts.windows(2).all(|w| w[0] < w[1]));
                got.sort();
                want.sort();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn validate_rejects_malformed_trees() {
        let mut t = figure_tree();
        t.root.children[0].children[0] = XyNode::leaf(1);
        assert!(t.validate().is_err());
        assert!(flatten(&t).is_err());

        let mut t = figure_tree();
        t.root.children[0].children[1].kind = NodeKind::Division { axis: Axis::Horizontal };
        assert!(matches!(t.validate(), Err(Error::MalformedTree(_))));
        assert!(flatten(&t).is_ok());

        let lone = XyTree {
            root: XyNode {
                kind: NodeKind::Root,
                indices: vec![0],
                children: vec![division(Axis::Vertical, vec![XyNode::leaf(0)])],
            },
        };
        assert!(lone.validate().is_err());
    }
}
