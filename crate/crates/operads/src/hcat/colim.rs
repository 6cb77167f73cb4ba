//! Symmetrisation of an `n`-operad as a bounded colimit.
//!
//! An `n`-operad `A` spreads over the decorated-tree category: an object
//! contributes one node per way of picking an `A`-element for each of its
//! decorations, a contraction arrow acts by multiplying the cluster's
//! elements along its morphism, and a unit insertion adds the unit of `A`.
//! The colimit is the union-find quotient of all such nodes.  Every bounded
//! object contracts to a single vertex, so classes are reported through
//! single-vertex representatives `(decoration, element)` when they contain
//! one; classes that fail to reach a representative inside the bounds stay
//! visible with `representative == None` rather than being dropped.

use std::collections::BTreeMap;
use std::fmt;

use crate::nops::FinNOperad;
use crate::trees::NTree;
use crate::unionfind::UnionFind;

use super::arrows::{contract_cluster, generating_arrows, ArrowWitness};
use super::objects::{enumerate_hn, HnObject, Plan};

/// An object whose vertices carry an operad element next to the decoration.
pub type DecoratedObject = Plan<(NTree, usize)>;

/// One colimit class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymClass {
    /// A single-vertex member `(decoration, element)`, when the class has
    /// one, together with its leaf labels in planar order.
    pub representative: Option<(NTree, usize, Vec<usize>)>,
    pub size: usize,
}

/// The bounded symmetrisation colimit at one arity.
#[derive(Clone, Debug)]
pub struct SymReport {
    pub n: usize,
    pub k: usize,
    pub vertex_bound: usize,
    pub decoration_bound: usize,
    /// Decorated nodes the union-find ran over.
    pub nodes: usize,
    pub edges: usize,
    /// Objects with a decoration outside the operad's tree family.
    pub skipped_objects: usize,
    /// Arrow applications whose multiplication table entry is missing.
    pub skipped_arrows: usize,
    pub classes: Vec<SymClass>,
}

impl SymReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Classes that reached a single-vertex representative.
    pub fn represented(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| c.representative.is_some())
            .count()
    }
}

impl fmt::Display for SymReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetrise at k={}: {} classes ({} represented) over {} nodes, {} edges; \
             skipped {} objects, {} arrows (vertex bound {}, decoration bound {})",
            self.k,
            self.class_count(),
            self.represented(),
            self.nodes,
            self.edges,
            self.skipped_objects,
            self.skipped_arrows,
            self.vertex_bound,
            self.decoration_bound,
        )
    }
}

/// All ways of decorating the vertices of `obj` with elements of `a`;
/// `None` when some decoration has an empty element set.
fn decorations(obj: &HnObject, a: &FinNOperad) -> Option<Vec<DecoratedObject>> {
    match obj {
        Plan::Leaf(l) => Some(vec![Plan::Leaf(*l)]),
        Plan::Vertex(tree, children) => {
            let count = a.element_count(tree);
            if count == 0 {
                return None;
            }
            let mut combos: Vec<Vec<DecoratedObject>> = vec![Vec::new()];
            for child in children {
                let choices = decorations(child, a)?;
                let mut next = Vec::with_capacity(combos.len() * choices.len());
                for prefix in &combos {
                    for choice in &choices {
                        let mut p = prefix.clone();
                        p.push(choice.clone());
                        next.push(p);
                    }
                }
                combos = next;
            }
            let mut out = Vec::with_capacity(count * combos.len());
            for e in 0..count {
                for combo in &combos {
                    out.push(Plan::Vertex((tree.clone(), e), combo.clone()));
                }
            }
            Some(out)
        }
    }
}

/// Applies a contraction witness to a decorated node; `None` when the
/// multiplication table lacks the needed entry.
fn apply_contraction(
    node: &DecoratedObject,
    path: &[usize],
    sigma: &crate::omegan::TreeMorphism,
    a: &FinNOperad,
) -> Option<DecoratedObject> {
    let Some(Plan::Vertex((_, outer), children)) = node.subtree(path) else {
        return None;
    };
    let mut inners = Vec::with_capacity(children.len());
    for child in children {
        match child {
            Plan::Vertex((_, e), _) => inners.push(*e),
            Plan::Leaf(_) => return None,
        }
    }
    let result = a.mult_lookup(sigma, *outer, &inners)?;
    let pi = sigma.tip_permutation();
    Some(contract_cluster(
        node,
        path,
        &pi,
        (sigma.source().clone(), result),
    ))
}

/// Computes the bounded symmetrisation colimit of `a` at arity `k`.
pub fn symmetrise(
    a: &FinNOperad,
    k: usize,
    vertex_bound: usize,
    decoration_bound: usize,
) -> SymReport {
    let n = a.n;
    let unit_vertex = (NTree::linear(n), a.unit);
    let objects = enumerate_hn(n, k, vertex_bound, decoration_bound);

    let mut nodes: Vec<DecoratedObject> = Vec::new();
    let mut per_object: Vec<(HnObject, Vec<DecoratedObject>)> = Vec::new();
    let mut skipped_objects = 0;
    for obj in objects {
        match decorations(&obj, a) {
            None => skipped_objects += 1,
            Some(list) => {
                nodes.extend(list.iter().cloned());
                per_object.push((obj, list));
            }
        }
    }
    let index: BTreeMap<&DecoratedObject, usize> =
        nodes.iter().enumerate().map(|(i, d)| (d, i)).collect();

    let mut uf = UnionFind::new(nodes.len());
    let mut edges = 0;
    let mut skipped_arrows = 0;
    for (obj, decorated) in &per_object {
        for arrow in generating_arrows(n, obj, vertex_bound, decoration_bound) {
            for node in decorated {
                let target = match &arrow.witness {
                    ArrowWitness::Contraction { path, sigma } => {
                        match apply_contraction(node, path, sigma, a) {
                            Some(t) => t,
                            None => {
                                skipped_arrows += 1;
                                continue;
                            }
                        }
                    }
                    ArrowWitness::UnitInsertion { path } => {
                        let sub = node
                            .subtree(path)
                            .expect("insertion path exists in every decoration")
                            .clone();
                        node.replace(path, Plan::Vertex(unit_vertex.clone(), vec![sub]))
                    }
                };
                let t = *index
                    .get(&target)
                    .expect("arrow target stays within the enumerated bounds");
                let s = index[node];
                uf.union(s, t);
                edges += 1;
            }
        }
    }

    let mut roots: BTreeMap<usize, SymClass> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        let root = uf.find(i);
        let class = roots.entry(root).or_insert(SymClass {
            representative: None,
            size: 0,
        });
        class.size += 1;
        if class.representative.is_none() && node.is_single_vertex() {
            if let Plan::Vertex((tree, element), _) = node {
                class.representative =
                    Some((tree.clone(), *element, node.leaf_labels()));
            }
        }
    }
    let classes: Vec<SymClass> = roots.into_values().collect();

    SymReport {
        n,
        k,
        vertex_bound,
        decoration_bound,
        nodes: nodes.len(),
        edges,
        skipped_objects,
        skipped_arrows,
        classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::FreeNOperad;
    use crate::hcat::pi0::component_data;
    use crate::trees::{all_trees_by_nodes, NTree};

    #[test]
    fn terminal_colimit_matches_component_count_at_every_bound() {
        for &(n, k, vb, db) in &[
            (1, 2, 1, 3),
            (1, 2, 2, 3),
            (1, 2, 3, 3),
            (1, 1, 2, 2),
            (2, 1, 2, 3),
            (2, 2, 2, 4),
        ] {
            let family = all_trees_by_nodes(n, db);
            let term = FinNOperad::terminal(n, &family).unwrap();
            let report = symmetrise(&term, k, vb, db);
            let mut data = component_data(n, k, vb, db);
            let (anchored, raw) = data.component_counts();
            assert_eq!(
                report.class_count(),
                raw,
                "terminal colimit must equal the component count at n={n}, k={k}, vb={vb}, db={db}"
            );
            assert_eq!(report.represented(), anchored);
            assert_eq!(report.skipped_objects, 0);
            assert_eq!(report.skipped_arrows, 0);
            assert_eq!(report.nodes, data.objects.len());
        }
    }

    #[test]
    fn height_one_free_operad_colimit_is_labelled_elements() {
        // Classes of the symmetrised free operad on one binary generator:
        // one per (label order, element over the arity tree).
        let family = all_trees_by_nodes(1, 4);
        let free = FreeNOperad::new(1, vec![NTree::fan(1, 0, 2)]).unwrap();
        let a = free.truncate(&family, 2).unwrap();
        for k in 1..=3 {
            let expected = {
                let mut f = 1;
                for i in 2..=k {
                    f *= i;
                }
                f * a.element_count(&NTree::fan(1, 0, k))
            };
            let report = symmetrise(&a, k, k + 1, 4);
            assert_eq!(
                report.represented(),
                expected,
                "k={k}: {report}"
            );
        }
    }

    #[test]
    fn unary_free_operad_classes_count_chains() {
        // One unary generator truncated at two occurrences: unit, g, g*g.
        let family = all_trees_by_nodes(1, 2);
        let free = FreeNOperad::new(1, vec![NTree::linear(1)]).unwrap();
        let a = free.truncate(&family, 2).unwrap();
        assert_eq!(a.element_count(&NTree::linear(1)), 3);
        let report = symmetrise(&a, 1, 2, 2);
        assert_eq!(report.represented(), 3);
        // A three-vertex chain of g's cannot multiply down within the
        // truncation; it surfaces as an unrepresented class, not silently.
        let report = symmetrise(&a, 1, 3, 2);
        assert!(report.skipped_arrows > 0);
        assert_eq!(report.represented(), 3);
        assert!(report.class_count() > report.represented());
    }

    #[test]
    fn unit_class_contains_the_unit_representative() {
        let family = all_trees_by_nodes(2, 3);
        let term = FinNOperad::terminal(2, &family).unwrap();
        let report = symmetrise(&term, 1, 2, 3);
        assert_eq!(report.class_count(), 1);
        let rep = report.classes[0].representative.as_ref().unwrap();
        assert_eq!(rep.2, vec![1]);
    }
}
