//! Free `n`-operads on tree-shaped generators.
//!
//! Elements are admissible expressions: the unit, a generator, or a formal
//! multiplication `m_sigma(head; args)` along a tree morphism.  Three
//! rewrite rules normalize an expression:
//!
//! 1. head flattening - a composite head is folded into one multiplication
//!    along the composed morphism, regrouping the arguments over tip
//!    fibers;
//! 2. unit head - multiplying into the unit along the unique collapse to
//!    the linear tree returns the single argument;
//! 3. unit arguments - multiplying along an identity with only units inside
//!    returns the head.
//!
//! A normal form therefore has a generator at every head and no
//! identity-with-units layer.  Tree morphisms are planar-rigid (the only
//! isomorphisms are identities), so no further relations arise: distinct
//! normal forms are distinct elements, and enumerating normal forms by
//! generator count enumerates the free operad.

use std::fmt;

use crate::error::{Error, Result};
use crate::nops::{tuples, FinNOperad};
use crate::omegan::{hom, TreeMorphism};
use crate::symops::MultTable;
use crate::trees::NTree;

/// A formal expression in the free `n`-operad.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expr {
    Unit,
    Gen(usize),
    Comp(TreeMorphism, Box<Expr>, Vec<Expr>),
}

impl Expr {
    /// Number of generator occurrences.
    pub fn gen_count(&self) -> usize {
        match self {
            Expr::Unit => 0,
            Expr::Gen(_) => 1,
            Expr::Comp(_, head, args) => {
                head.gen_count() + args.iter().map(Expr::gen_count).sum::<usize>()
            }
        }
    }

    /// Whether the expression is in normal form.
    pub fn is_normal(&self) -> bool {
        match self {
            Expr::Unit | Expr::Gen(_) => true,
            Expr::Comp(sigma, head, args) => {
                matches!(**head, Expr::Gen(_))
                    && !(sigma.is_identity() && args.iter().all(|a| matches!(a, Expr::Unit)))
                    && args.iter().all(Expr::is_normal)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Unit => write!(f, "1"),
            Expr::Gen(i) => write!(f, "g{}", i + 1),
            Expr::Comp(sigma, head, args) => {
                write!(f, "m[{sigma}]({head}")?;
                for a in args {
                    write!(f, "; {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The free `n`-operad on a list of generator shapes (one generator per
/// entry; repeated shapes give distinct generators).
#[derive(Clone, Debug)]
pub struct FreeNOperad {
    n: usize,
    generators: Vec<NTree>,
}

impl FreeNOperad {
    pub fn new(n: usize, generators: Vec<NTree>) -> Result<Self> {
        for g in &generators {
            if g.n() != n {
                return Err(Error::InvalidOperad(format!(
                    "generator shape {g} has height {}, expected {n}",
                    g.n()
                )));
            }
        }
        Ok(FreeNOperad { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[NTree] {
        &self.generators
    }

    /// The tree an expression lives over.
    pub fn shape_of(&self, e: &Expr) -> Result<NTree> {
        match e {
            Expr::Unit => Ok(NTree::linear(self.n)),
            Expr::Gen(i) => self.generators.get(*i).cloned().ok_or_else(|| {
                Error::InvalidOperad(format!("generator index {i} out of range"))
            }),
            Expr::Comp(sigma, _, _) => Ok(sigma.source().clone()),
        }
    }

    fn check_shapes(&self, sigma: &TreeMorphism, head: &Expr, args: &[Expr]) -> Result<()> {
        let head_shape = self.shape_of(head)?;
        if &head_shape != sigma.target() {
            return Err(Error::InvalidOperad(format!(
                "head lives over {head_shape} but the morphism targets {}",
                sigma.target()
            )));
        }
        let tips = sigma.target().tips();
        if args.len() != tips {
            return Err(Error::InvalidOperad(format!(
                "expected {tips} arguments, got {}",
                args.len()
            )));
        }
        for (i, a) in args.iter().enumerate() {
            let fiber = sigma.tip_fiber(i).tree;
            let shape = self.shape_of(a)?;
            if shape != fiber {
                return Err(Error::InvalidOperad(format!(
                    "argument {} lives over {shape} but the tip fiber is {fiber}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Rewrites an expression to its normal form, validating shapes on the
    /// way.
    pub fn normalize(&self, e: &Expr) -> Result<Expr> {
        match e {
            Expr::Unit => Ok(Expr::Unit),
            Expr::Gen(i) => {
                self.shape_of(&Expr::Gen(*i))?;
                Ok(Expr::Gen(*i))
            }
            Expr::Comp(sigma, head, args) => {
                let nh = self.normalize(head)?;
                let nargs: Vec<Expr> = args
                    .iter()
                    .map(|a| self.normalize(a))
                    .collect::<Result<_>>()?;
                self.check_shapes(sigma, &nh, &nargs)?;
                match nh {
                    Expr::Unit => {
                        // The target is linear, so sigma is the unique
                        // collapse and the single fiber is the whole source.
                        Ok(nargs.into_iter().next().expect("collapse has one tip"))
                    }
                    Expr::Gen(g) => {
                        if sigma.is_identity() && nargs.iter().all(|a| matches!(a, Expr::Unit)) {
                            Ok(Expr::Gen(g))
                        } else {
                            Ok(Expr::Comp(sigma.clone(), Box::new(Expr::Gen(g)), nargs))
                        }
                    }
                    Expr::Comp(omega, inner_head, inner_args) => {
                        // Head flattening along associativity.
                        let composite = sigma.compose(&omega)?;
                        let mut new_args = Vec::with_capacity(omega.target().tips());
                        for (j, b) in inner_args.iter().enumerate() {
                            let tf = omega.tip_fiber(j);
                            let (sigma_j, _) = sigma.restrict_over(&tf.positions);
                            let grouped: Vec<Expr> = tf.positions[self.n]
                                .iter()
                                .map(|&i| nargs[i].clone())
                                .collect();
                            new_args.push(self.normalize(&Expr::Comp(
                                sigma_j,
                                Box::new(b.clone()),
                                grouped,
                            ))?);
                        }
                        self.normalize(&Expr::Comp(composite, inner_head, new_args))
                    }
                }
            }
        }
    }

    /// All normal forms over `shape` with exactly `gens` generator
    /// occurrences, sorted.
    pub fn enumerate_graded(&self, shape: &NTree, gens: usize) -> Vec<Expr> {
        let mut out = Vec::new();
        if gens == 0 {
            if shape.is_linear() {
                out.push(Expr::Unit);
            }
            return out;
        }
        for (g, gshape) in self.generators.iter().enumerate() {
            if gens == 1 && gshape == shape {
                out.push(Expr::Gen(g));
            }
            for sigma in hom(shape, gshape) {
                if sigma.is_identity() && gens == 1 {
                    // The all-units layer rewrites to the bare generator.
                    continue;
                }
                let tips = gshape.tips();
                let fibers: Vec<NTree> =
                    (0..tips).map(|i| sigma.tip_fiber(i).tree).collect();
                for dist in compositions(gens - 1, tips) {
                    let choices: Vec<Vec<Expr>> = (0..tips)
                        .map(|i| self.enumerate_graded(&fibers[i], dist[i]))
                        .collect();
                    if choices.iter().any(|c| c.is_empty()) {
                        continue;
                    }
                    for pick in tuples(&choices.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                        let args: Vec<Expr> = pick
                            .iter()
                            .enumerate()
                            .map(|(i, &p)| choices[i][p].clone())
                            .collect();
                        out.push(Expr::Comp(sigma.clone(), Box::new(Expr::Gen(g)), args));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// All normal forms over `shape` with at most `max_gens` generator
    /// occurrences.
    pub fn enumerate(&self, shape: &NTree, max_gens: usize) -> Vec<Expr> {
        let mut out = Vec::new();
        for c in 0..=max_gens {
            out.extend(self.enumerate_graded(shape, c));
        }
        out.sort();
        out
    }

    /// Truncates the free operad to finite tables over a tree family,
    /// keeping elements with at most `max_gens` generators.  Entries whose
    /// result would exceed the budget, and morphisms with a tip fiber
    /// outside the family, are left out of the tables (the validator counts
    /// them as skips).
    pub fn truncate(&self, trees: &[NTree], max_gens: usize) -> Result<FinNOperad> {
        let family = FinNOperad::sorted_family(self.n, trees)?;
        let elements: Vec<Vec<Expr>> = family
            .iter()
            .map(|t| self.enumerate(t, max_gens))
            .collect();
        let linear_idx = family
            .binary_search(&NTree::linear(self.n))
            .expect("family contains the linear tree");
        let unit = elements[linear_idx]
            .binary_search(&Expr::Unit)
            .expect("unit is always enumerated");
        let names: Vec<Vec<String>> = elements
            .iter()
            .map(|es| es.iter().map(|e| e.to_string()).collect())
            .collect();
        let mut mult = std::collections::BTreeMap::new();
        for source in &family {
            for target in &family {
                let ti = family.binary_search(target).unwrap();
                let si = family.binary_search(source).unwrap();
                for sigma in hom(source, target) {
                    let tips = target.tips();
                    let fiber_indices: Option<Vec<usize>> = (0..tips)
                        .map(|i| family.binary_search(&sigma.tip_fiber(i).tree).ok())
                        .collect();
                    let Some(fiber_indices) = fiber_indices else {
                        continue;
                    };
                    let mut table = MultTable::new();
                    let counts: Vec<usize> =
                        fiber_indices.iter().map(|&fi| elements[fi].len()).collect();
                    for (o, outer) in elements[ti].iter().enumerate() {
                        for pick in tuples(&counts) {
                            let args: Vec<Expr> = pick
                                .iter()
                                .enumerate()
                                .map(|(i, &p)| elements[fiber_indices[i]][p].clone())
                                .collect();
                            let value = self.normalize(&Expr::Comp(
                                sigma.clone(),
                                Box::new(outer.clone()),
                                args,
                            ))?;
                            if value.gen_count() > max_gens {
                                continue;
                            }
                            let v = elements[si]
                                .binary_search(&value)
                                .map_err(|_| {
                                    Error::InvalidOperad(format!(
                                        "normal form {value} missing from the enumeration"
                                    ))
                                })?;
                            table.insert((o, pick), v);
                        }
                    }
                    mult.insert(sigma, table);
                }
            }
        }
        Ok(FinNOperad {
            n: self.n,
            trees: family,
            elements: names,
            unit,
            mult,
        })
    }
}

/// Weak compositions: all ways to write `total` as an ordered sum of
/// `parts` nonnegative integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::all_trees_by_nodes;

    fn binary_free() -> FreeNOperad {
        FreeNOperad::new(1, vec![NTree::fan(1, 0, 2)]).unwrap()
    }

    fn ordinal(k: usize) -> NTree {
        NTree::fan(1, 0, k)
    }

    #[test]
    fn one_binary_generator_counts_are_catalan() {
        let free = binary_free();
        // Planar binary trees with m leaves: 1, 1, 2, 5, 14.
        for (m, expect) in [(1usize, 1usize), (2, 1), (3, 2), (4, 5), (5, 14)] {
            let total = free.enumerate(&ordinal(m), m.saturating_sub(1)).len();
            assert_eq!(total, expect, "arity {m}");
        }
        // No elements of arity 0 exist over a binary generator.
        assert_eq!(free.enumerate(&ordinal(0), 4).len(), 0);
    }

    #[test]
    fn grading_is_by_generator_count() {
        let free = binary_free();
        for c in 0..4 {
            for e in free.enumerate_graded(&ordinal(3), c) {
                assert_eq!(e.gen_count(), c);
                assert!(e.is_normal(), "{e}");
                assert_eq!(free.shape_of(&e).unwrap(), ordinal(3));
                assert_eq!(free.normalize(&e).unwrap(), e, "normalize is idempotent");
            }
        }
    }

    #[test]
    fn unit_laws_rewrite_away() {
        let free = binary_free();
        let g = Expr::Gen(0);
        // Identity with units collapses to the head.
        let id = TreeMorphism::identity(&ordinal(2));
        let padded = Expr::Comp(id, Box::new(g.clone()), vec![Expr::Unit, Expr::Unit]);
        assert_eq!(free.normalize(&padded).unwrap(), g);
        // The unit as head collapses to the argument.
        let collapse = hom(&ordinal(2), &ordinal(1)).pop().unwrap();
        let wrapped = Expr::Comp(collapse, Box::new(Expr::Unit), vec![g.clone()]);
        assert_eq!(free.normalize(&wrapped).unwrap(), g);
    }

    #[test]
    fn head_flattening_leaves_normal_forms() {
        let free = binary_free();
        let g = Expr::Gen(0);
        // Inner composite over [3]: g into the first slot of g.
        let sigma21 = hom(&ordinal(3), &ordinal(2))
            .into_iter()
            .find(|s| s.tip_map().fiber_sizes() == vec![2, 1])
            .unwrap();
        let inner = Expr::Comp(
            sigma21,
            Box::new(g.clone()),
            vec![g.clone(), Expr::Unit],
        );
        assert_eq!(free.shape_of(&inner).unwrap(), ordinal(3));
        // Outer layer over [4] whose head is itself a composite.
        let omega = hom(&ordinal(4), &ordinal(3))
            .into_iter()
            .find(|s| s.tip_map().fiber_sizes() == vec![2, 1, 1])
            .unwrap();
        let outer = Expr::Comp(
            omega,
            Box::new(inner),
            vec![g.clone(), Expr::Unit, Expr::Unit],
        );
        let nf = free.normalize(&outer).unwrap();
        assert!(nf.is_normal(), "{nf}");
        assert_eq!(nf.gen_count(), 3);
        assert_eq!(free.shape_of(&nf).unwrap(), ordinal(4));
        // The flattened form is one of the five planar binary trees with
        // four leaves.
        assert!(free.enumerate_graded(&ordinal(4), 3).contains(&nf));
    }

    #[test]
    fn truncated_free_operad_validates() {
        // A binary generator plus a unary one, so that unary stacks
        // overflow any generator budget and force genuine truncation.
        let free =
            FreeNOperad::new(1, vec![NTree::fan(1, 0, 2), NTree::linear(1)]).unwrap();
        let trees = all_trees_by_nodes(1, 4);
        let op = free.truncate(&trees, 3).unwrap();
        let report = op.validate();
        assert!(report.is_clean(), "{report}");
        assert!(report.checked > 100, "{report}");
        assert!(report.skipped > 0, "budget truncation must show up as skips");
    }

    #[test]
    fn height_two_generator_composes_against_itself() {
        // One generator shaped like the two-tip fan branching above the
        // root; composites grow upward through its tip fibers.
        let fan = NTree::fan(2, 1, 2);
        let free = FreeNOperad::new(2, vec![fan.clone()]).unwrap();
        assert_eq!(free.enumerate(&fan, 1).len(), 1);
        let linear = NTree::linear(2);
        assert_eq!(free.enumerate(&linear, 1).len(), 1, "just the unit");
        // Two generators stacked: every normal form with two occurrences
        // over some tree with at most six nodes.  Five nodes are not
        // enough, because grafting the fan onto one of its own tips
        // already needs six.
        let mut total = 0;
        for t in all_trees_by_nodes(2, 6) {
            for e in free.enumerate_graded(&t, 2) {
                total += 1;
                assert!(e.is_normal());
                assert_eq!(free.normalize(&e).unwrap(), e);
                assert_eq!(free.shape_of(&e).unwrap(), t);
            }
        }
        assert!(total > 0);
    }

    #[test]
    fn compositions_enumerate_weak_sums() {
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert_eq!(compositions(2, 0), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(2, 2).len(), 3);
        assert_eq!(compositions(3, 3).len(), 10);
    }
}
