//! Generating arrows of the bounded categorical operads: cluster
//! contractions along tree morphisms and unit-vertex insertions in context.

use crate::omegan::{hom, TreeMorphism};
use crate::ordmaps::{all_maps, OrdMap, Perm};
use crate::trees::{all_trees_by_nodes, NTree};

use super::objects::{HInfObject, HnObject, Plan};

/// The rewrite performed by a generating arrow on a decorated object.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArrowWitness {
    /// Contracts the two-level cluster at `path`: the vertex there is
    /// decorated by the target of `sigma` and its children are vertices
    /// decorated by the tip fibers of `sigma`, in order.  The cluster is
    /// replaced by one vertex decorated by the source of `sigma`, and the
    /// grandchild subtrees are re-attached along the factorization
    /// permutation of the tip map of `sigma`.
    Contraction {
        path: Vec<usize>,
        sigma: TreeMorphism,
    },
    /// Inserts a unary vertex decorated by the linear tree above the
    /// subtree at `path`.
    UnitInsertion { path: Vec<usize> },
}

/// A generating arrow between decorated objects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenArrow {
    pub source: HnObject,
    pub target: HnObject,
    pub witness: ArrowWitness,
}

impl GenArrow {
    /// Re-applies the witness to the source and compares with the stored
    /// target.
    pub fn check(&self, n: usize) -> bool {
        match &self.witness {
            ArrowWitness::Contraction { path, sigma } => {
                contract(&self.source, path, sigma)
                    .map(|t| t == self.target)
                    .unwrap_or(false)
            }
            ArrowWitness::UnitInsertion { path } => {
                insert_unit(n, &self.source, path) == self.target
            }
        }
    }
}

/// Replaces the two-level cluster at `path` by a single vertex with the
/// given decoration, re-attaching the grandchild subtrees so that position
/// `q` receives the grandchild at `pi(q)` of the fiber-grouped listing.
pub(crate) fn contract_cluster<D: Clone>(
    obj: &Plan<D>,
    path: &[usize],
    pi: &Perm,
    merged: D,
) -> Plan<D> {
    let cluster = obj.subtree(path).expect("cluster path exists");
    let children = match cluster {
        Plan::Vertex(_, children) => children,
        Plan::Leaf(_) => panic!("cluster path points at a leaf"),
    };
    let mut grands = Vec::new();
    for child in children {
        match child {
            Plan::Vertex(_, grandchildren) => grands.extend(grandchildren.iter().cloned()),
            Plan::Leaf(_) => panic!("cluster child is a leaf"),
        }
    }
    assert_eq!(grands.len(), pi.n(), "grandchild count mismatch");
    let reordered: Vec<Plan<D>> = (0..grands.len())
        .map(|q| grands[pi.apply(q)].clone())
        .collect();
    obj.replace(path, Plan::Vertex(merged, reordered))
}

/// Applies a cluster contraction along `sigma` at `path`.  Returns `None`
/// when the cluster does not match the fibers of `sigma`.
pub fn contract(obj: &HnObject, path: &[usize], sigma: &TreeMorphism) -> Option<HnObject> {
    let cluster = obj.subtree(path)?;
    let children = match cluster {
        Plan::Vertex(decoration, children) if decoration == sigma.target() => children,
        _ => return None,
    };
    for (i, child) in children.iter().enumerate() {
        match child {
            Plan::Vertex(decoration, _) if *decoration == sigma.tip_fiber(i).tree => {}
            _ => return None,
        }
    }
    if children.len() != sigma.target().tips() {
        return None;
    }
    Some(contract_cluster(
        obj,
        path,
        &sigma.tip_permutation(),
        sigma.source().clone(),
    ))
}

/// Inserts a unary vertex decorated by the linear tree above the subtree at
/// `path`.
pub fn insert_unit(n: usize, obj: &HnObject, path: &[usize]) -> HnObject {
    let below = obj.subtree(path).expect("insertion path exists").clone();
    obj.replace(path, Plan::Vertex(NTree::linear(n), vec![below]))
}

/// All generating arrows out of `obj` whose targets stay within the bounds:
/// every cluster contraction along a morphism with source within the
/// decoration bound, and every unit insertion while the vertex budget
/// allows.  Trivial identity loops at childless vertices are omitted.
pub fn generating_arrows(
    n: usize,
    obj: &HnObject,
    vertex_bound: usize,
    decoration_bound: usize,
) -> Vec<GenArrow> {
    let candidates = all_trees_by_nodes(n, decoration_bound);
    let mut out = Vec::new();
    for path in obj.all_paths() {
        let node = obj.subtree(&path).unwrap();
        if let Plan::Vertex(base, children) = node {
            if let Some(fibers) = children
                .iter()
                .map(|c| match c {
                    Plan::Vertex(d, _) => Some(d.clone()),
                    Plan::Leaf(_) => None,
                })
                .collect::<Option<Vec<NTree>>>()
            {
                let needed_tips: usize = fibers.iter().map(NTree::tips).sum();
                for t in candidates.iter().filter(|t| t.tips() == needed_tips) {
                    for sigma in hom(t, base) {
                        if sigma.is_identity() && children.is_empty() {
                            continue;
                        }
                        if (0..fibers.len()).any(|i| sigma.tip_fiber(i).tree != fibers[i]) {
                            continue;
                        }
                        let target = contract(obj, &path, &sigma).expect("matching fibers");
                        out.push(GenArrow {
                            source: obj.clone(),
                            target,
                            witness: ArrowWitness::Contraction {
                                path: path.clone(),
                                sigma,
                            },
                        });
                    }
                }
            }
        }
        if obj.vertex_count() < vertex_bound && n + 1 <= decoration_bound {
            out.push(GenArrow {
                source: obj.clone(),
                target: insert_unit(n, obj, &path),
                witness: ArrowWitness::UnitInsertion { path: path.clone() },
            });
        }
    }
    out
}

/// The rewrite performed by a generating arrow on an undecorated object.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HInfWitness {
    /// Contracts the cluster at `path` along a map of finite sets whose
    /// fiber sizes are the child valencies.
    Contraction { path: Vec<usize>, sigma: OrdMap },
    /// Inserts a unary vertex above the subtree at `path`.
    UnitInsertion { path: Vec<usize> },
}

/// A generating arrow between undecorated objects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HInfArrow {
    pub source: HInfObject,
    pub target: HInfObject,
    pub witness: HInfWitness,
}

/// Applies an undecorated cluster contraction along `sigma` at `path`.
pub fn contract_hinf(obj: &HInfObject, path: &[usize], sigma: &OrdMap) -> Option<HInfObject> {
    let cluster = obj.subtree(path)?;
    let children = match cluster {
        Plan::Vertex((), children) => children,
        Plan::Leaf(_) => return None,
    };
    let sizes: Option<Vec<usize>> = children
        .iter()
        .map(|c| match c {
            Plan::Vertex((), grandchildren) => Some(grandchildren.len()),
            Plan::Leaf(_) => None,
        })
        .collect();
    let sizes = sizes?;
    if sigma.cod() != children.len() || sigma.fiber_sizes() != sizes {
        return None;
    }
    Some(contract_cluster(obj, path, &sigma.factorize().0, ()))
}

/// All generating arrows out of an undecorated object: cluster contractions
/// along arbitrary maps of finite sets with matching fiber sizes, and unit
/// insertions within the vertex budget.
pub fn generating_arrows_hinf(obj: &HInfObject, vertex_bound: usize) -> Vec<HInfArrow> {
    let mut out = Vec::new();
    for path in obj.all_paths() {
        let node = obj.subtree(&path).unwrap();
        if let Plan::Vertex((), children) = node {
            let sizes: Option<Vec<usize>> = children
                .iter()
                .map(|c| match c {
                    Plan::Vertex((), grandchildren) => Some(grandchildren.len()),
                    Plan::Leaf(_) => None,
                })
                .collect();
            if let Some(sizes) = sizes {
                let total: usize = sizes.iter().sum();
                for sigma in all_maps(total, children.len()) {
                    if sigma.is_identity() && children.is_empty() {
                        continue;
                    }
                    if sigma.fiber_sizes() != sizes {
                        continue;
                    }
                    let target = contract_hinf(obj, &path, &sigma).expect("matching sizes");
                    out.push(HInfArrow {
                        source: obj.clone(),
                        target,
                        witness: HInfWitness::Contraction {
                            path: path.clone(),
                            sigma,
                        },
                    });
                }
            }
        }
        if obj.vertex_count() < vertex_bound {
            let below = obj.subtree(&path).unwrap().clone();
            out.push(HInfArrow {
                source: obj.clone(),
                target: obj.replace(&path, Plan::Vertex((), vec![below])),
                witness: HInfWitness::UnitInsertion { path: path.clone() },
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omegan::from_fibers;
    use crate::trees::NTree;

    fn tree(s: &str) -> NTree {
        s.parse().unwrap()
    }

    fn unit_vertex(n: usize, label: usize) -> HnObject {
        Plan::Vertex(NTree::linear(n), vec![Plan::Leaf(label)])
    }

    #[test]
    fn fan_over_units_contracts_only_along_the_identity() {
        let base = NTree::fan(1, 0, 2);
        let obj: HnObject = Plan::Vertex(
            base.clone(),
            vec![unit_vertex(1, 1), unit_vertex(1, 2)],
        );
        let arrows = generating_arrows(1, &obj, 3, 4);
        let contractions: Vec<_> = arrows
            .iter()
            .filter(|a| matches!(a.witness, ArrowWitness::Contraction { .. }))
            .collect();
        assert_eq!(contractions.len(), 1);
        let expected: HnObject = Plan::Vertex(base, vec![Plan::Leaf(1), Plan::Leaf(2)]);
        assert_eq!(contractions[0].target, expected);
        match &contractions[0].witness {
            ArrowWitness::Contraction { sigma, .. } => assert!(sigma.is_identity()),
            _ => unreachable!(),
        }
        for arrow in &arrows {
            assert!(arrow.check(1));
        }
    }

    #[test]
    fn single_vertex_object_has_only_insertion_arrows() {
        let obj: HnObject = Plan::Vertex(
            NTree::fan(1, 0, 2),
            vec![Plan::Leaf(1), Plan::Leaf(2)],
        );
        let arrows = generating_arrows(1, &obj, 2, 3);
        assert!(!arrows.is_empty());
        for arrow in &arrows {
            assert!(matches!(arrow.witness, ArrowWitness::UnitInsertion { .. }));
        }
        // One insertion slot per node: the root and both leaves.
        assert_eq!(arrows.len(), 3);
    }

    #[test]
    fn twist_contraction_swaps_the_leaf_labels() {
        let fan = NTree::fan(2, 1, 2);
        let fiber_second = tree("2; 1,2; rho_1=[2]; rho_0=[1,1]");
        let fiber_first = tree("2; 1,2; rho_1=[1]; rho_0=[1,1]");
        let obj: HnObject = Plan::Vertex(
            fan,
            vec![
                Plan::Vertex(fiber_second.clone(), vec![Plan::Leaf(1)]),
                Plan::Vertex(fiber_first.clone(), vec![Plan::Leaf(2)]),
            ],
        );
        let arrows = generating_arrows(2, &obj, 3, 5);
        let contractions: Vec<_> = arrows
            .iter()
            .filter_map(|a| match &a.witness {
                ArrowWitness::Contraction { sigma, .. } => Some((sigma.clone(), a.target.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(contractions.len(), 1);
        let (sigma, target) = &contractions[0];
        let twist_source = tree("2; 2,2; rho_1=[1,2]; rho_0=[1,1]");
        assert_eq!(sigma.source(), &twist_source);
        assert_eq!(sigma.tip_permutation().to_string(), "[2,1]");
        let expected: HnObject =
            Plan::Vertex(twist_source, vec![Plan::Leaf(2), Plan::Leaf(1)]);
        assert_eq!(target, &expected);
    }

    #[test]
    fn cluster_fibers_pick_the_pasted_decoration() {
        // Over a one-branch base, a contraction's fibers each contain the
        // whole source level-1 row, so the pasted tree is forced by where
        // the fibers put their tips: first branch twice, split, or second
        // branch twice.
        let fan = NTree::fan(2, 1, 2);
        let fiber_first = tree("2; 1,2; rho_1=[1]; rho_0=[1,1]");
        let fiber_second = tree("2; 1,2; rho_1=[2]; rho_0=[1,1]");
        let contraction_targets = |left: &NTree, right: &NTree| -> Vec<String> {
            let obj: HnObject = Plan::Vertex(
                fan.clone(),
                vec![
                    Plan::Vertex(left.clone(), vec![Plan::Leaf(1)]),
                    Plan::Vertex(right.clone(), vec![Plan::Leaf(2)]),
                ],
            );
            let mut targets: Vec<String> = generating_arrows(2, &obj, 3, 5)
                .iter()
                .filter(|a| matches!(a.witness, ArrowWitness::Contraction { .. }))
                .map(|a| a.target.to_string())
                .collect();
            targets.sort();
            targets
        };
        assert_eq!(
            contraction_targets(&fiber_first, &fiber_first),
            vec!["(2,2/1.1/1.1: 1 2)".to_string()]
        );
        assert_eq!(
            contraction_targets(&fiber_first, &fiber_second),
            vec!["(2,2/1.2/1.1: 1 2)".to_string()]
        );
        assert_eq!(
            contraction_targets(&fiber_second, &fiber_second),
            vec!["(2,2/2.2/1.1: 1 2)".to_string()]
        );
    }

    #[test]
    fn all_unit_cluster_matches_the_hom_filter_oracle() {
        let base = NTree::fan(2, 1, 2);
        let obj: HnObject = Plan::Vertex(
            base.clone(),
            vec![unit_vertex(2, 1), unit_vertex(2, 2)],
        );
        let arrows = generating_arrows(2, &obj, 3, 5);
        let found: Vec<_> = arrows
            .iter()
            .filter_map(|a| match &a.witness {
                ArrowWitness::Contraction { sigma, .. } => Some(sigma.clone()),
                _ => None,
            })
            .collect();
        // Oracle: filter the hom-sets from every candidate tree directly.
        let linear = NTree::linear(2);
        let mut expected = Vec::new();
        for t in crate::trees::all_trees_by_nodes(2, 5) {
            for sigma in hom(&t, &base) {
                if (0..2).all(|i| sigma.tip_fiber(i).tree == linear) {
                    expected.push(sigma);
                }
            }
        }
        assert_eq!(found, expected);
        // The pasted tree realizes one of them.
        let (pasted, canonical) = from_fibers(&base, &[linear.clone(), linear]).unwrap();
        assert_eq!(pasted, base);
        assert!(found.contains(&canonical));
    }

    #[test]
    fn childless_cluster_mutates_the_decoration() {
        // A childless vertex contracts along any morphism into its
        // decoration from another zero-tip tree; the identity loop is
        // omitted.
        let obj: HnObject = Plan::Vertex(tree("2; 0,1; rho_1=[]; rho_0=[1]"), vec![]);
        let arrows = generating_arrows(2, &obj, 1, 4);
        let mut targets: Vec<String> = arrows
            .iter()
            .filter(|a| matches!(a.witness, ArrowWitness::Contraction { .. }))
            .map(|a| a.target.to_string())
            .collect();
        targets.sort();
        assert_eq!(
            targets,
            vec![
                "(0,0//:)".to_string(),
                "(0,2//1.1:)".to_string(),
                "(0,3//1.1.1:)".to_string(),
            ]
        );
    }

    #[test]
    fn unit_insertion_respects_the_vertex_bound() {
        let obj: HnObject = Plan::Vertex(
            NTree::fan(1, 0, 2),
            vec![Plan::Leaf(1), Plan::Leaf(2)],
        );
        let at_bound = generating_arrows(1, &obj, 1, 3);
        assert!(at_bound.is_empty());
    }

    #[test]
    fn hinf_permutation_contraction_relabels() {
        // A corolla over unary vertices contracts along every permutation.
        let obj: HInfObject = Plan::Vertex(
            (),
            vec![
                Plan::Vertex((), vec![Plan::Leaf(1)]),
                Plan::Vertex((), vec![Plan::Leaf(2)]),
            ],
        );
        let arrows = generating_arrows_hinf(&obj, 3);
        let contractions: Vec<_> = arrows
            .iter()
            .filter_map(|a| match &a.witness {
                HInfWitness::Contraction { sigma, .. } => Some((sigma.clone(), a.target.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(contractions.len(), 2);
        let targets: Vec<String> = contractions.iter().map(|(_, t)| t.to_string()).collect();
        assert!(targets.contains(&"(*: 1 2)".to_string()));
        assert!(targets.contains(&"(*: 2 1)".to_string()));
    }

    #[test]
    fn hinf_contraction_requires_matching_fiber_sizes() {
        let obj: HInfObject = Plan::Vertex(
            (),
            vec![
                Plan::Vertex((), vec![Plan::Leaf(1), Plan::Leaf(2)]),
                Plan::Vertex((), vec![Plan::Leaf(3)]),
            ],
        );
        let arrows = generating_arrows_hinf(&obj, 3);
        for arrow in &arrows {
            if let HInfWitness::Contraction { sigma, .. } = &arrow.witness {
                assert_eq!(sigma.fiber_sizes(), vec![2, 1]);
            }
        }
        let contraction_count = arrows
            .iter()
            .filter(|a| matches!(a.witness, HInfWitness::Contraction { .. }))
            .count();
        // Maps [3] -> [2] with fiber sizes (2,1).
        assert_eq!(contraction_count, 3);
    }
}
