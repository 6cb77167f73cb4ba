//! Connected components of the bounded decorated-tree categories.
//!
//! Hard bounds leave junk at the frontier: objects whose every cluster
//! mixes leaves with vertices and whose vertex budget is exhausted have no
//! arrows at all, even though one more vertex of room would connect them.
//! The component count that stabilizes is therefore the number of
//! components containing a single-vertex object — those are interior
//! points of the truncation — while the raw total stays available and
//! keeps growing with the junk.

use std::collections::BTreeMap;
use std::fmt;

use crate::unionfind::UnionFind;

use super::arrows::generating_arrows;
use super::objects::{enumerate_hn, HnObject};

/// The enumerated objects of one bounded category together with the
/// union-find closure of its generating arrows.
pub(crate) struct ComponentData {
    pub objects: Vec<HnObject>,
    pub uf: UnionFind,
    pub edges: usize,
}

impl ComponentData {
    /// `(components containing a single-vertex object, all components)`.
    pub fn component_counts(&mut self) -> (usize, usize) {
        let mut anchored = std::collections::BTreeSet::new();
        for i in 0..self.objects.len() {
            if self.objects[i].is_single_vertex() {
                let root = self.uf.find(i);
                anchored.insert(root);
            }
        }
        (anchored.len(), self.uf.components())
    }
}

pub(crate) fn component_data(
    n: usize,
    k: usize,
    vertex_bound: usize,
    decoration_bound: usize,
) -> ComponentData {
    let objects = enumerate_hn(n, k, vertex_bound, decoration_bound);
    let index: BTreeMap<&HnObject, usize> =
        objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut uf = UnionFind::new(objects.len());
    let mut edges = 0;
    for (i, obj) in objects.iter().enumerate() {
        for arrow in generating_arrows(n, obj, vertex_bound, decoration_bound) {
            if let Some(&j) = index.get(&arrow.target) {
                uf.union(i, j);
                edges += 1;
            }
        }
    }
    drop(index);
    ComponentData {
        objects,
        uf,
        edges,
    }
}

/// Component counts of a bounded category, with the counts at singly
/// decremented bounds for a stabilization check.
#[derive(Clone, Debug)]
pub struct Pi0Report {
    pub n: usize,
    pub k: usize,
    pub vertex_bound: usize,
    pub decoration_bound: usize,
    pub objects: usize,
    pub edges: usize,
    /// Components containing at least one single-vertex object.
    pub components: usize,
    /// All components, truncation junk included.
    pub raw_components: usize,
    /// `(vertex_bound, decoration_bound, components)` at decremented bounds.
    pub previous: Vec<(usize, usize, usize)>,
    /// True when no decrement changes the anchored component count.
    pub stabilized: bool,
}

impl fmt::Display for Pi0Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pi0(n={}, k={}) = {} over {} objects, {} edges, {} raw components \
             (vertex bound {}, decoration bound {}, {})",
            self.n,
            self.k,
            self.components,
            self.objects,
            self.edges,
            self.raw_components,
            self.vertex_bound,
            self.decoration_bound,
            if self.stabilized {
                "stabilized"
            } else {
                "not stabilized"
            },
        )
    }
}

/// Counts connected components of the bounded category of decorated
/// objects at arity `k`.
pub fn pi0(n: usize, k: usize, vertex_bound: usize, decoration_bound: usize) -> Pi0Report {
    let mut data = component_data(n, k, vertex_bound, decoration_bound);
    let (components, raw_components) = data.component_counts();
    let mut previous = Vec::new();
    if vertex_bound > 1 {
        let mut d = component_data(n, k, vertex_bound - 1, decoration_bound);
        previous.push((vertex_bound - 1, decoration_bound, d.component_counts().0));
    }
    if decoration_bound > 1 {
        let mut d = component_data(n, k, vertex_bound, decoration_bound - 1);
        previous.push((vertex_bound, decoration_bound - 1, d.component_counts().0));
    }
    let stabilized = previous.iter().all(|&(_, _, c)| c == components);
    Pi0Report {
        n,
        k,
        vertex_bound,
        decoration_bound,
        objects: data.objects.len(),
        edges: data.edges,
        components,
        raw_components,
        previous,
        stabilized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcat::arrows::generating_arrows;
    use crate::hcat::objects::Plan;
    use std::collections::BTreeSet;

    #[test]
    fn unary_category_is_connected() {
        let report = pi0(1, 1, 2, 2);
        assert_eq!(report.components, 1);
        assert_eq!(report.raw_components, 1);
        assert!(report.objects >= 3);
    }

    #[test]
    fn height_one_components_are_label_orders() {
        assert_eq!(pi0(1, 1, 2, 2).components, 1);
        assert_eq!(pi0(1, 2, 3, 3).components, 2);
        assert_eq!(pi0(1, 3, 4, 4).components, 6);
    }

    #[test]
    fn nullary_component_is_connected() {
        let report = pi0(1, 0, 2, 3);
        assert_eq!(report.components, 1);
        let report = pi0(2, 0, 2, 4);
        assert_eq!(report.components, 1);
    }

    #[test]
    fn frontier_junk_is_counted_separately() {
        // Objects whose clusters all mix leaves with vertices get stuck
        // once the vertex budget is full; they inflate the raw count only.
        let report = pi0(1, 2, 3, 3);
        assert!(report.raw_components > report.components);
    }

    #[test]
    fn components_never_increase_with_the_vertex_bound() {
        let mut last = usize::MAX;
        for vb in 1..=4 {
            let report = pi0(1, 2, vb, 3);
            assert!(report.components <= last);
            last = report.components;
        }
        assert_eq!(last, 2);
    }

    #[test]
    fn four_labels_stabilize_at_twenty_four_components() {
        // Tip maps of height-one tree morphisms are globally monotone, so
        // the label order is invariant and the count is 4! from the
        // smallest usable bounds onward.
        let report = pi0(1, 4, 3, 6);
        assert_eq!(report.components, 24);
        assert!(report.stabilized, "{report}");
    }

    #[test]
    fn height_two_single_label_is_connected() {
        let report = pi0(2, 1, 3, 4);
        assert_eq!(report.components, 1);
        assert_eq!(report.raw_components, 1);
        assert!(report.stabilized, "{report}");
    }

    #[test]
    fn height_two_pair_count_holds_while_room_is_short() {
        // Joining the two label orders at height two takes contractions
        // through four-vertex objects; below that budget the count sits
        // at four anchored components without moving.
        assert_eq!(pi0(2, 2, 2, 5).components, 4);
        assert_eq!(pi0(2, 2, 3, 5).components, 4);
    }

    #[test]
    fn every_bounded_object_contracts_to_a_single_vertex_with_slack() {
        // Directed reachability: given one extra vertex of room beyond the
        // enumeration bound, insertions then contractions take any object
        // to a one-vertex object.
        let (n, k, vb, db) = (1, 2, 3, 3);
        for obj in enumerate_hn(n, k, vb, db) {
            let slack = vb + 1;
            let mut frontier = vec![obj.clone()];
            let mut seen: BTreeSet<HnObject> = frontier.iter().cloned().collect();
            let mut reached = obj.is_single_vertex();
            while !reached {
                let mut next = Vec::new();
                for current in &frontier {
                    for arrow in generating_arrows(n, current, slack, db) {
                        if seen.insert(arrow.target.clone()) {
                            if arrow.target.is_single_vertex() {
                                reached = true;
                            }
                            next.push(arrow.target);
                        }
                    }
                }
                assert!(
                    !next.is_empty(),
                    "search exhausted before reaching a single vertex from {obj}"
                );
                frontier = next;
            }
        }
    }

    #[test]
    fn bare_leaf_joins_the_unit_component() {
        let mut data = component_data(1, 1, 2, 2);
        let position = |wanted: &Plan<crate::trees::NTree>| {
            data.objects
                .iter()
                .position(|o| o == wanted)
                .expect("object enumerated")
        };
        let leaf = position(&Plan::Leaf(1));
        let unit = position(&Plan::Vertex(
            crate::trees::NTree::linear(1),
            vec![Plan::Leaf(1)],
        ));
        assert!(data.uf.same(leaf, unit));
    }
}
