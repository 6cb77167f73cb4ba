//! Bounded comparison between decorated-object counts and symmetrised
//! free-operad towers, plus the free-operad coproduct count check.
//!
//! Write `D_0` for the collection with one element per tree in the bounded
//! family, and `D_{p+1}` for the elements of the free `n`-operad on `D_p`.
//! Degree `p` of the comparison counts, on the left, labelled planar trees
//! whose vertices are decorated by `D_p`-elements (grouped by tip count);
//! on the right, the represented classes of the symmetrisation colimit of
//! the free operad on `D_p`, truncated to the same generator budget.  The
//! two sides compute one cardinality through entirely different routes —
//! a weighted shape recursion against a union-find quotient — and their
//! agreement is the nerve-level acceptance contract at height one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::free::{Expr, FreeNOperad};
use crate::trees::{all_trees_by_nodes, NTree};

use super::colim::symmetrise;
use super::objects::{count_weighted_shapes, factorial};

/// Normal-form expressions are the objects of the expression-level
/// categories; one lives over each tree shape.
pub type HnExprObject = Expr;

/// Bounds for the nerve comparison: planar shapes use at most
/// `vertex_bound` decorated vertices (which is also the truncation budget
/// of the compared free operad), decorations and carrier trees stay within
/// `decoration_bound` nodes, and the elements of the iterated collections
/// `D_p` are enumerated with at most `gen_bound` generator occurrences.
#[derive(Clone, Copy, Debug)]
pub struct NerveBounds {
    pub vertex_bound: usize,
    pub decoration_bound: usize,
    pub gen_bound: usize,
}

/// Enumerates the normal-form expression objects over `tree`, built from
/// one generator per tree shape within `decoration_bound`.
pub fn enumerate_expr_objects(
    n: usize,
    tree: &NTree,
    decoration_bound: usize,
    gen_bound: usize,
) -> Result<Vec<HnExprObject>> {
    let family = all_trees_by_nodes(n, decoration_bound);
    let free = FreeNOperad::new(n, family)?;
    Ok(free.enumerate(tree, gen_bound))
}

/// Product over the generator occurrences of `expr` of the multiplicity
/// its shape has in the original collection.
fn expr_weight(expr: &Expr, multiplicities: &[usize]) -> usize {
    match expr {
        Expr::Unit => 1,
        Expr::Gen(i) => multiplicities[*i],
        Expr::Comp(_, head, args) => {
            let mut w = expr_weight(head, multiplicities);
            for a in args {
                w *= expr_weight(a, multiplicities);
            }
            w
        }
    }
}

/// Checks that the free operad on a collection with repeated shapes has,
/// over `tree`, exactly as many elements as the shape-wise coproduct: a
/// sum over normal forms on the distinct shapes, weighted by the product
/// of shape multiplicities at the generator slots.
pub fn freeop_count_check(
    n: usize,
    generators: &[NTree],
    tree: &NTree,
    gen_bound: usize,
) -> Result<bool> {
    let lhs = FreeNOperad::new(n, generators.to_vec())?
        .enumerate(tree, gen_bound)
        .len();

    let mut counts: BTreeMap<NTree, usize> = BTreeMap::new();
    for g in generators {
        *counts.entry(g.clone()).or_insert(0) += 1;
    }
    let support: Vec<NTree> = counts.keys().cloned().collect();
    let multiplicities: Vec<usize> = support.iter().map(|s| counts[s]).collect();
    let shapes = FreeNOperad::new(n, support)?;
    let rhs: usize = shapes
        .enumerate(tree, gen_bound)
        .iter()
        .map(|w| expr_weight(w, &multiplicities))
        .sum();
    Ok(lhs == rhs)
}

/// The generator multiset of the degree-`p` collection `D_p`: one shape
/// entry per element, so multiplicities carry the element counts.
fn generator_multiset(
    n: usize,
    p: usize,
    decoration_bound: usize,
    gen_bound: usize,
) -> Result<Vec<NTree>> {
    let family = all_trees_by_nodes(n, decoration_bound);
    if p == 0 {
        return Ok(family);
    }
    let prev = generator_multiset(n, p - 1, decoration_bound, gen_bound)?;
    let free = FreeNOperad::new(n, prev)?;
    let mut out = Vec::new();
    for tree in &family {
        let count = free.enumerate(tree, gen_bound).len();
        out.extend(std::iter::repeat(tree.clone()).take(count));
    }
    Ok(out)
}

/// Compares the two degree-`p` counts; equality is expected at height one
/// once the bounds agree on both sides.  Returns `(lhs, rhs)`.
pub fn nerve_compare(
    n: usize,
    k: usize,
    p: usize,
    bounds: &NerveBounds,
) -> Result<(u128, u128)> {
    if p > 2 {
        return Err(Error::Unsupported(format!(
            "nerve comparison implemented for degrees 0..=2, got {p}"
        )));
    }
    let gens = generator_multiset(n, p, bounds.decoration_bound, bounds.gen_bound)?;

    let mut weights: BTreeMap<usize, u128> = BTreeMap::new();
    for g in &gens {
        *weights.entry(g.tips()).or_insert(0) += 1;
    }
    let lhs = factorial(k) * count_weighted_shapes(k, bounds.vertex_bound, &weights);

    let family = all_trees_by_nodes(n, bounds.decoration_bound);
    let truncated = FreeNOperad::new(n, gens)?.truncate(&family, bounds.vertex_bound)?;
    let report = symmetrise(&truncated, k, bounds.vertex_bound, bounds.decoration_bound);
    Ok((lhs, report.represented() as u128))
}
