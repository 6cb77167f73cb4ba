//! Objects of the bounded categorical operads: planar rooted trees with
//! bijectively labelled leaves, either decorated by trees at every internal
//! vertex or left undecorated.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::trees::{all_trees_by_nodes, NTree};

/// A planar rooted tree whose leaves carry labels `1..=k` and whose
/// internal vertices carry a decoration of type `D`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Plan<D> {
    /// A leaf with its label.
    Leaf(usize),
    /// An internal vertex with its decoration and ordered children.
    Vertex(D, Vec<Plan<D>>),
}

/// A decorated object: every vertex carries a tree whose tip count equals
/// the vertex valency.
pub type HnObject = Plan<NTree>;

/// An undecorated object: only the planar shape and the leaf labels.
pub type HInfObject = Plan<()>;

impl<D> Plan<D> {
    /// Number of leaves.
    pub fn arity(&self) -> usize {
        match self {
            Plan::Leaf(_) => 1,
            Plan::Vertex(_, children) => children.iter().map(Plan::arity).sum(),
        }
    }

    /// Number of internal vertices.
    pub fn vertex_count(&self) -> usize {
        match self {
            Plan::Leaf(_) => 0,
            Plan::Vertex(_, children) => {
                1 + children.iter().map(Plan::vertex_count).sum::<usize>()
            }
        }
    }

    /// Leaf labels in planar (left-to-right) order.
    pub fn leaf_labels(&self) -> Vec<usize> {
        match self {
            Plan::Leaf(label) => vec![*label],
            Plan::Vertex(_, children) => {
                children.iter().flat_map(Plan::leaf_labels).collect()
            }
        }
    }

    /// The subtree at a path of child indices, if the path exists.
    pub fn subtree(&self, path: &[usize]) -> Option<&Plan<D>> {
        match path.split_first() {
            None => Some(self),
            Some((&head, rest)) => match self {
                Plan::Leaf(_) => None,
                Plan::Vertex(_, children) => children.get(head)?.subtree(rest),
            },
        }
    }

    /// True when the object is one vertex with only leaves below it
    /// (including a childless vertex).
    pub fn is_single_vertex(&self) -> bool {
        self.vertex_count() == 1
    }

    /// Paths to all nodes (vertices and leaves) in depth-first order; the
    /// root path is empty.
    pub fn all_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_paths(&mut Vec::new(), &mut out);
        out
    }

    fn collect_paths(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        if let Plan::Vertex(_, children) = self {
            for (i, child) in children.iter().enumerate() {
                prefix.push(i);
                child.collect_paths(prefix, out);
                prefix.pop();
            }
        }
    }
}

impl<D: Clone> Plan<D> {
    /// Returns a copy with the subtree at `path` replaced.  Panics when the
    /// path does not exist.
    pub fn replace(&self, path: &[usize], new: Plan<D>) -> Plan<D> {
        match path.split_first() {
            None => new,
            Some((&head, rest)) => match self {
                Plan::Leaf(_) => panic!("path descends into a leaf"),
                Plan::Vertex(d, children) => {
                    let mut children = children.clone();
                    children[head] = children[head].replace(rest, new);
                    Plan::Vertex(d.clone(), children)
                }
            },
        }
    }
}

/// Forgets the decorations, keeping the planar shape and the leaf labels.
pub fn zeta(obj: &HnObject) -> HInfObject {
    match obj {
        Plan::Leaf(label) => Plan::Leaf(*label),
        Plan::Vertex(_, children) => {
            Plan::Vertex((), children.iter().map(zeta).collect())
        }
    }
}

/// Checks the decorated-object invariants: every decoration is an `n`-tree
/// whose tip count equals the vertex valency, and the leaf labels are a
/// permutation of `1..=k`.
pub fn check_hn_object(n: usize, obj: &HnObject) -> Result<()> {
    fn walk(n: usize, obj: &HnObject) -> Result<()> {
        if let Plan::Vertex(decoration, children) = obj {
            if decoration.n() != n {
                return Err(Error::InvalidTree(format!(
                    "decoration has height {}, expected {n}",
                    decoration.n()
                )));
            }
            if decoration.tips() != children.len() {
                return Err(Error::InvalidTree(format!(
                    "decoration has {} tips but the vertex has {} children",
                    decoration.tips(),
                    children.len()
                )));
            }
            for child in children {
                walk(n, child)?;
            }
        }
        Ok(())
    }
    walk(n, obj)?;
    let mut labels = obj.leaf_labels();
    labels.sort_unstable();
    let expected: Vec<usize> = (1..=labels.len()).collect();
    if labels != expected {
        return Err(Error::InvalidTree(format!(
            "leaf labels {labels:?} are not a permutation of 1..={}",
            labels.len()
        )));
    }
    Ok(())
}

fn summary(tree: &NTree) -> String {
    let sizes: Vec<String> = (1..=tree.n())
        .rev()
        .map(|j| tree.level_size(j).to_string())
        .collect();
    if sizes.is_empty() {
        return "*".to_string();
    }
    let mut out = sizes.join(",");
    for j in (1..=tree.n()).rev() {
        out.push('/');
        let parents: Vec<String> = (0..tree.level_size(j))
            .map(|i| (tree.map(j - 1).apply(i) + 1).to_string())
            .collect();
        out.push_str(&parents.join("."));
    }
    out
}

impl fmt::Display for Plan<NTree> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Leaf(label) => write!(f, "{label}"),
            Plan::Vertex(decoration, children) => {
                write!(f, "({}:", summary(decoration))?;
                for child in children {
                    write!(f, " {child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Plan<()> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Leaf(label) => write!(f, "{label}"),
            Plan::Vertex((), children) => {
                write!(f, "(*:")?;
                for child in children {
                    write!(f, " {child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Trees with at most `decoration_bound` nodes, grouped by tip count.
pub(crate) fn decorations_by_tips(
    n: usize,
    decoration_bound: usize,
) -> BTreeMap<usize, Vec<NTree>> {
    let mut out: BTreeMap<usize, Vec<NTree>> = BTreeMap::new();
    for tree in all_trees_by_nodes(n, decoration_bound) {
        out.entry(tree.tips()).or_default().push(tree);
    }
    out
}

/// All unlabelled subtree shapes with the given number of leaves, using at
/// most `vertex_budget` vertices; returns each with its vertex count.
fn subtree_shapes<D: Clone>(
    decorations: &BTreeMap<usize, Vec<D>>,
    leaves: usize,
    vertex_budget: usize,
) -> Vec<(Plan<D>, usize)> {
    let mut out = Vec::new();
    if leaves == 1 {
        out.push((Plan::Leaf(0), 0));
    }
    if vertex_budget == 0 {
        return out;
    }
    for (&valency, choices) in decorations {
        for (children, used) in forest_shapes(decorations, valency, leaves, vertex_budget - 1) {
            for decoration in choices {
                out.push((Plan::Vertex(decoration.clone(), children.clone()), used + 1));
            }
        }
    }
    out
}

/// All ordered lists of `width` subtree shapes with `leaves` leaves in
/// total, within the vertex budget.
fn forest_shapes<D: Clone>(
    decorations: &BTreeMap<usize, Vec<D>>,
    width: usize,
    leaves: usize,
    vertex_budget: usize,
) -> Vec<(Vec<Plan<D>>, usize)> {
    if width == 0 {
        return if leaves == 0 {
            vec![(Vec::new(), 0)]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first_leaves in 0..=leaves {
        for (first, used_first) in subtree_shapes(decorations, first_leaves, vertex_budget) {
            for (mut rest, used_rest) in forest_shapes(
                decorations,
                width - 1,
                leaves - first_leaves,
                vertex_budget - used_first,
            ) {
                rest.insert(0, first.clone());
                out.push((rest, used_first + used_rest));
            }
        }
    }
    out
}

/// All label sequences `1..=k` in lexicographic order.
pub(crate) fn label_permutations(k: usize) -> Vec<Vec<usize>> {
    crate::ordmaps::Perm::all(k)
        .into_iter()
        .map(|p| (0..k).map(|i| p.apply(i) + 1).collect())
        .collect()
}

/// Writes `labels` onto the leaves in planar order.
fn assign_labels<D: Clone>(shape: &Plan<D>, labels: &[usize]) -> Plan<D> {
    fn go<D: Clone>(shape: &Plan<D>, labels: &[usize], next: &mut usize) -> Plan<D> {
        match shape {
            Plan::Leaf(_) => {
                let label = labels[*next];
                *next += 1;
                Plan::Leaf(label)
            }
            Plan::Vertex(d, children) => Plan::Vertex(
                d.clone(),
                children.iter().map(|c| go(c, labels, next)).collect(),
            ),
        }
    }
    let mut next = 0;
    let out = go(shape, labels, &mut next);
    debug_assert_eq!(next, labels.len());
    out
}

/// All decorated objects of arity `k` with at most `vertex_bound` vertices,
/// each decoration a tree of height `n` with at most `decoration_bound`
/// nodes.  The list is sorted and duplicate-free.
pub fn enumerate_hn(
    n: usize,
    k: usize,
    vertex_bound: usize,
    decoration_bound: usize,
) -> Vec<HnObject> {
    let decorations = decorations_by_tips(n, decoration_bound);
    let labellings = label_permutations(k);
    let mut out = Vec::new();
    for (shape, _) in subtree_shapes(&decorations, k, vertex_bound) {
        for labels in &labellings {
            out.push(assign_labels(&shape, labels));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All undecorated objects of arity `k` with at most `vertex_bound`
/// vertices.  The list is sorted and duplicate-free.
pub fn enumerate_hinf(k: usize, vertex_bound: usize) -> Vec<HInfObject> {
    // A vertex valency never exceeds the node budget below it.
    let cap = k + vertex_bound;
    let decorations: BTreeMap<usize, Vec<()>> =
        (0..=cap).map(|valency| (valency, vec![()])).collect();
    let labellings = label_permutations(k);
    let mut out = Vec::new();
    for (shape, _) in subtree_shapes(&decorations, k, vertex_bound) {
        for labels in &labellings {
            out.push(assign_labels(&shape, labels));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Weighted count of unlabelled shapes: each vertex of valency `t`
/// contributes a factor `weights[t]` (zero when absent).  Multiplying by
/// `k!` counts the labelled objects, planar shapes having no symmetries.
pub(crate) fn count_weighted_shapes(
    leaves: usize,
    vertex_bound: usize,
    weights: &BTreeMap<usize, u128>,
) -> u128 {
    fn subtree(leaves: usize, budget: usize, weights: &BTreeMap<usize, u128>) -> u128 {
        let mut total = if leaves == 1 { 1 } else { 0 };
        if budget == 0 {
            return total;
        }
        for (&valency, &weight) in weights {
            if weight == 0 {
                continue;
            }
            total += weight * forest(valency, leaves, budget - 1, weights);
        }
        total
    }
    fn forest(width: usize, leaves: usize, budget: usize, weights: &BTreeMap<usize, u128>) -> u128 {
        if width == 0 {
            return if leaves == 0 { 1 } else { 0 };
        }
        let mut total = 0;
        for first_leaves in 0..=leaves {
            // Split the vertex budget between the first subtree and the rest.
            for first_budget in 0..=budget {
                let first = exact_subtree(first_leaves, first_budget, weights);
                if first == 0 {
                    continue;
                }
                total += first * forest(width - 1, leaves - first_leaves, budget - first_budget, weights);
            }
        }
        total
    }
    fn exact_subtree(leaves: usize, vertices: usize, weights: &BTreeMap<usize, u128>) -> u128 {
        if vertices == 0 {
            return if leaves == 1 { 1 } else { 0 };
        }
        let mut total = 0;
        for (&valency, &weight) in weights {
            if weight == 0 {
                continue;
            }
            total += weight * exact_forest(valency, leaves, vertices - 1, weights);
        }
        total
    }
    fn exact_forest(
        width: usize,
        leaves: usize,
        vertices: usize,
        weights: &BTreeMap<usize, u128>,
    ) -> u128 {
        if width == 0 {
            return if leaves == 0 && vertices == 0 { 1 } else { 0 };
        }
        let mut total = 0;
        for first_leaves in 0..=leaves {
            for first_vertices in 0..=vertices {
                let first = exact_subtree(first_leaves, first_vertices, weights);
                if first == 0 {
                    continue;
                }
                total += first
                    * exact_forest(width - 1, leaves - first_leaves, vertices - first_vertices, weights);
            }
        }
        total
    }
    subtree(leaves, vertex_bound, weights)
}

pub(crate) fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::NTree;

    fn tree(s: &str) -> NTree {
        s.parse().unwrap()
    }

    #[test]
    fn arity_and_vertex_count() {
        let obj: HnObject = Plan::Vertex(
            NTree::fan(1, 0, 2),
            vec![
                Plan::Leaf(2),
                Plan::Vertex(NTree::fan(1, 0, 1), vec![Plan::Leaf(1)]),
            ],
        );
        assert_eq!(obj.arity(), 2);
        assert_eq!(obj.vertex_count(), 2);
        assert_eq!(obj.leaf_labels(), vec![2, 1]);
        assert!(check_hn_object(1, &obj).is_ok());
        assert_eq!(obj.to_string(), "(2/1.1: 2 (1/1: 1))");
        assert_eq!(zeta(&obj).to_string(), "(*: 2 (*: 1))");
    }

    #[test]
    fn invariant_violations_are_reported() {
        let wrong_tips: HnObject = Plan::Vertex(NTree::fan(1, 0, 2), vec![Plan::Leaf(1)]);
        assert!(check_hn_object(1, &wrong_tips).is_err());
        let wrong_labels: HnObject = Plan::Vertex(
            NTree::fan(1, 0, 2),
            vec![Plan::Leaf(1), Plan::Leaf(3)],
        );
        assert!(check_hn_object(1, &wrong_labels).is_err());
    }

    #[test]
    fn enumerate_bare_leaf_is_an_object() {
        let objs = enumerate_hn(1, 1, 2, 3);
        assert!(objs.contains(&Plan::Leaf(1)));
        // One single-vertex object per one-tip decoration within bounds.
        let single: Vec<_> = objs.iter().filter(|o| o.is_single_vertex()).collect();
        assert_eq!(single.len(), 1);
        assert_eq!(
            single[0],
            &Plan::Vertex(NTree::fan(1, 0, 1), vec![Plan::Leaf(1)])
        );
    }

    #[test]
    fn enumerate_single_vertex_objects_match_one_tip_trees() {
        // Height two: three one-tip trees within five nodes.
        let objs = enumerate_hn(2, 1, 1, 4);
        let single: Vec<_> = objs.iter().filter(|o| o.is_single_vertex()).collect();
        assert_eq!(single.len(), 3);
    }

    #[test]
    fn enumerate_contains_both_two_tip_decorations_under_both_labelings() {
        let objs = enumerate_hn(2, 2, 1, 5);
        let pointed = tree("2; 2,1; rho_1=[1,1]; rho_0=[1]");
        let split = tree("2; 2,2; rho_1=[1,2]; rho_0=[1,1]");
        for decoration in [pointed, split] {
            for labels in [[1, 2], [2, 1]] {
                let obj = Plan::Vertex(
                    decoration.clone(),
                    vec![Plan::Leaf(labels[0]), Plan::Leaf(labels[1])],
                );
                assert!(objs.contains(&obj), "missing {obj}");
            }
        }
    }

    #[test]
    fn enumerate_counts_are_deterministic() {
        let objs = enumerate_hn(1, 2, 2, 3);
        let rerun = enumerate_hn(1, 2, 2, 3);
        assert_eq!(objs, rerun);
        for obj in &objs {
            assert!(check_hn_object(1, obj).is_ok());
            assert!(obj.vertex_count() <= 2);
            assert_eq!(obj.arity(), 2);
        }
        // Labelled counts are k! times the unlabelled shape count.
        assert_eq!(objs.len() % 2, 0);
    }

    #[test]
    fn enumerate_hinf_small_counts() {
        // Arity one, at most two vertices: the bare leaf, the leaf under one
        // or two unary vertices, and the leaf beside a childless vertex in
        // either order.
        let objs = enumerate_hinf(1, 2);
        assert_eq!(objs.len(), 5);
        assert!(objs.contains(&Plan::Leaf(1)));
        assert!(objs.contains(&Plan::Vertex(
            (),
            vec![Plan::Vertex((), vec![]), Plan::Leaf(1)]
        )));
    }

    #[test]
    fn weighted_count_matches_enumeration() {
        for (k, vb, db) in [(1, 2, 3), (2, 2, 3), (2, 3, 4), (0, 2, 3)] {
            let weights: BTreeMap<usize, u128> = decorations_by_tips(1, db)
                .into_iter()
                .map(|(tips, trees)| (tips, trees.len() as u128))
                .collect();
            let counted = count_weighted_shapes(k, vb, &weights) * factorial(k);
            let listed = enumerate_hn(1, k, vb, db).len() as u128;
            assert_eq!(counted, listed, "k={k} vb={vb} db={db}");
        }
    }

    #[test]
    fn label_permutations_are_all_orders() {
        assert_eq!(label_permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(label_permutations(3).len(), 6);
        let perms = label_permutations(3);
        assert!(perms.contains(&vec![3, 1, 2]));
        let mut sorted = perms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn paths_and_replacement() {
        let obj: HnObject = Plan::Vertex(
            NTree::fan(1, 0, 2),
            vec![Plan::Leaf(1), Plan::Leaf(2)],
        );
        let paths = obj.all_paths();
        assert_eq!(paths, vec![vec![], vec![0], vec![1]]);
        let swapped = obj.replace(&[0], Plan::Leaf(7));
        assert_eq!(swapped.leaf_labels(), vec![7, 2]);
        assert_eq!(obj.subtree(&[1]), Some(&Plan::Leaf(2)));
        assert_eq!(obj.subtree(&[2]), None);
    }
}
