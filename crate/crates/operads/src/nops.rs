//! Finite `n`-operads over sets, and desymmetrisation of symmetric operads.
//!
//! An `n`-operad assigns a finite set of elements to every `n`-tree in a
//! chosen family and a multiplication to every tree morphism
//! `sigma : T -> S`: an outer element over `S` and one inner element per
//! tip fiber of `sigma` compose to an element over `T`.  The unit lives
//! over the linear tree.  Associativity is stated for composable pairs of
//! tree morphisms, with inner arguments regrouped along tip fibers; no
//! symmetric group actions appear anywhere — the twisting that actions
//! encode for symmetric operads is carried by the tree morphisms
//! themselves.
//!
//! [`FinNOperad::desymmetrise`] turns a symmetric operad `A` into the
//! `n`-operad with `Des(A)_T = A_{tips(T)}`, multiplying along the tip map
//! of a tree morphism through the substitution presentation of `A`.
//! [`FinNOperad::endomorphism`] builds the endomorphism `n`-operad of a
//! finite set directly from tip positions; comparing it against the
//! desymmetrised endomorphism symmetric operad exercises every table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omegan::{hom, TreeMorphism};
use crate::report::ValidationReport;
use crate::symops::{
    decode_tuple, decode_function_value, encode_function, pow_len, FinSymOperad, MultTable,
};
use crate::trees::NTree;

/// A finite `n`-operad given by explicit tables over a tree family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinNOperad {
    pub n: usize,
    /// The carrier tree family, sorted and deduplicated; element lists and
    /// tables refer to trees through their position here.
    pub trees: Vec<NTree>,
    /// Element names per tree, parallel to `trees`.
    pub elements: Vec<Vec<String>>,
    /// Index of the unit in the element list of the linear tree.
    pub unit: usize,
    /// Multiplication tables per tree morphism: `(outer, inners) -> result`
    /// with one inner element per target tip, in tip order.
    pub mult: BTreeMap<TreeMorphism, MultTable>,
}

impl FinNOperad {
    pub fn tree_index(&self, tree: &NTree) -> Option<usize> {
        self.trees.binary_search(tree).ok()
    }

    pub fn element_count(&self, tree: &NTree) -> usize {
        self.tree_index(tree)
            .map_or(0, |t| self.elements[t].len())
    }

    pub fn mult_lookup(&self, sigma: &TreeMorphism, outer: usize, inners: &[usize]) -> Option<usize> {
        self.mult
            .get(sigma)?
            .get(&(outer, inners.to_vec()))
            .copied()
    }

    pub(crate) fn sorted_family(n: usize, trees: &[NTree]) -> Result<Vec<NTree>> {
        let mut family = trees.to_vec();
        family.sort();
        family.dedup();
        for t in &family {
            if t.n() != n {
                return Err(Error::InvalidOperad(format!(
                    "tree {t} has height {}, expected {n}",
                    t.n()
                )));
            }
        }
        if !family.contains(&NTree::linear(n)) {
            return Err(Error::InvalidOperad(
                "the tree family must contain the linear tree (the unit needs it)".to_string(),
            ));
        }
        Ok(family)
    }

    /// Desymmetrisation: `Des(A)_T = A_{tips(T)}`, multiplication along the
    /// tip map through the substitution presentation of `A`.  All trees
    /// must have at most `A`'s maximum arity many tips.
    pub fn desymmetrise(sym: &FinSymOperad, n: usize, trees: &[NTree]) -> Result<FinNOperad> {
        let family = Self::sorted_family(n, trees)?;
        for t in &family {
            if t.tips() > sym.max_arity {
                return Err(Error::InvalidOperad(format!(
                    "tree {t} has {} tips but the symmetric operad stops at arity {}",
                    t.tips(),
                    sym.max_arity
                )));
            }
        }
        let subst = sym.to_substitution()?;
        let elements: Vec<Vec<String>> = family
            .iter()
            .map(|t| sym.elements[t.tips()].clone())
            .collect();
        let mut mult = BTreeMap::new();
        for source in &family {
            for target in &family {
                for sigma in hom(source, target) {
                    let tip_map = sigma.tip_map();
                    let sizes = tip_map.fiber_sizes();
                    let outer_count = sym.arity_count(target.tips());
                    let mut table = MultTable::new();
                    for outer in 0..outer_count {
                        for inners in tuples(&sizes.iter().map(|&s| sym.arity_count(s)).collect::<Vec<_>>()) {
                            let value = subst
                                .mult_lookup(&tip_map, outer, &inners)
                                .ok_or_else(|| {
                                    Error::MissingTable(format!(
                                        "substitution table for {tip_map}"
                                    ))
                                })?;
                            table.insert((outer, inners), value);
                        }
                    }
                    mult.insert(sigma, table);
                }
            }
        }
        Ok(FinNOperad {
            n,
            trees: family,
            elements,
            unit: sym.unit,
            mult,
        })
    }

    /// The endomorphism `n`-operad of a finite set, built directly: over a
    /// tree `T` live all functions `x^{tips(T)} -> x`, and multiplication
    /// along `sigma` feeds each inner function the argument slots sitting
    /// over its tip fiber.
    pub fn endomorphism(n: usize, set_size: usize, trees: &[NTree]) -> Result<FinNOperad> {
        assert!(set_size >= 1, "endomorphism operad needs a nonempty set");
        let s = set_size;
        let family = Self::sorted_family(n, trees)?;
        let fun_count = |k: usize| pow_len(pow_len(k, s), s);
        let name_of = |k: usize, f: usize| -> String {
            let values = crate::symops::decode_function(f, k, s);
            let mut out = String::from("[");
            for (i, v) in values.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&(v + 1).to_string());
            }
            out.push(']');
            out
        };
        let elements: Vec<Vec<String>> = family
            .iter()
            .map(|t| (0..fun_count(t.tips())).map(|f| name_of(t.tips(), f)).collect())
            .collect();
        let unit_values: Vec<usize> = (0..s).collect();
        let unit = encode_function(&unit_values, s);
        let eval = |k: usize, f: usize, args: &[usize]| -> usize {
            let mut idx = 0;
            for &a in args {
                idx = idx * s + a;
            }
            decode_function_value(f, idx, pow_len(k, s), s)
        };

        let mut mult = BTreeMap::new();
        for source in &family {
            for target in &family {
                for sigma in hom(source, target) {
                    let k = target.tips();
                    let m = source.tips();
                    // Tip slots of the source owned by each target tip.
                    let slots: Vec<Vec<usize>> = (0..k)
                        .map(|i| sigma.tip_fiber(i).positions[sigma.source().n()].clone())
                        .collect();
                    let inner_counts: Vec<usize> =
                        slots.iter().map(|sl| fun_count(sl.len())).collect();
                    let mut table = MultTable::new();
                    for outer in 0..fun_count(k) {
                        for inners in tuples(&inner_counts) {
                            let mut values = Vec::with_capacity(pow_len(m, s));
                            for vidx in 0..pow_len(m, s) {
                                let v = decode_tuple(vidx, m, s);
                                let mid: Vec<usize> = (0..k)
                                    .map(|i| {
                                        let args: Vec<usize> =
                                            slots[i].iter().map(|&p| v[p]).collect();
                                        eval(slots[i].len(), inners[i], &args)
                                    })
                                    .collect();
                                values.push(eval(k, outer, &mid));
                            }
                            table.insert((outer, inners), encode_function(&values, s));
                        }
                    }
                    mult.insert(sigma, table);
                }
            }
        }
        Ok(FinNOperad {
            n,
            trees: family,
            elements,
            unit,
            mult,
        })
    }

    /// The terminal `n`-operad over a tree family: one element per tree and
    /// every multiplication collapses to it.
    pub fn terminal(n: usize, trees: &[NTree]) -> Result<FinNOperad> {
        let family = Self::sorted_family(n, trees)?;
        let elements: Vec<Vec<String>> = family.iter().map(|_| vec!["*".to_string()]).collect();
        let mut mult = BTreeMap::new();
        for source in &family {
            for target in &family {
                for sigma in hom(source, target) {
                    let mut table = MultTable::new();
                    table.insert((0, vec![0; target.tips()]), 0);
                    mult.insert(sigma, table);
                }
            }
        }
        Ok(FinNOperad {
            n,
            trees: family,
            elements,
            unit: 0,
            mult,
        })
    }

    /// Checks the `n`-operad axioms over every instance the tables and tree
    /// family afford; anything referring to a tree outside the family is a
    /// skip, not a violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.trees.is_empty() || self.elements.len() != self.trees.len() {
            report.note_violation("element lists do not match the tree family".to_string());
            return report;
        }
        let mut sorted = self.trees.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != self.trees {
            report.note_violation("tree family is not sorted and deduplicated".to_string());
            return report;
        }
        let linear = NTree::linear(self.n);
        let Some(linear_idx) = self.tree_index(&linear) else {
            report.note_violation("tree family lacks the linear tree".to_string());
            return report;
        };
        if self.unit >= self.elements[linear_idx].len() {
            report.note_violation("unit index out of range".to_string());
            return report;
        }
        self.validate_units(&linear, &mut report);
        self.validate_associativity(&mut report);
        report
    }

    fn validate_units(&self, linear: &NTree, report: &mut ValidationReport) {
        for (t, tree) in self.trees.iter().enumerate() {
            // Unit as the outer element, along the unique collapse to the
            // linear tree.
            let collapse = hom(tree, linear);
            debug_assert_eq!(collapse.len(), 1);
            for a in 0..self.elements[t].len() {
                match self.mult_lookup(&collapse[0], self.unit, &[a]) {
                    None => report.skipped += 1,
                    Some(v) => {
                        report.checked += 1;
                        if v != a {
                            report.note_violation(format!(
                                "unit head law fails over {tree} at element {a}"
                            ));
                        }
                    }
                }
                // Units as every inner element, along the identity.
                let id = TreeMorphism::identity(tree);
                let units = vec![self.unit; tree.tips()];
                match self.mult_lookup(&id, a, &units) {
                    None => report.skipped += 1,
                    Some(v) => {
                        report.checked += 1;
                        if v != a {
                            report.note_violation(format!(
                                "unit argument law fails over {tree} at element {a}"
                            ));
                        }
                    }
                }
            }
        }
    }

    /// Element counts for the tip fibers of a morphism; `None` if a fiber
    /// tree is outside the family.
    fn fiber_counts(&self, sigma: &TreeMorphism) -> Option<Vec<usize>> {
        (0..sigma.target().tips())
            .map(|i| {
                let fiber = sigma.tip_fiber(i).tree;
                self.tree_index(&fiber).map(|t| self.elements[t].len())
            })
            .collect()
    }

    fn validate_associativity(&self, report: &mut ValidationReport) {
        for source in &self.trees {
            for middle in &self.trees {
                for sigma in hom(source, middle) {
                    for top in &self.trees {
                        for omega in hom(middle, top) {
                            self.check_assoc_instance(&sigma, &omega, report);
                        }
                    }
                }
            }
        }
    }

    fn check_assoc_instance(
        &self,
        sigma: &TreeMorphism,
        omega: &TreeMorphism,
        report: &mut ValidationReport,
    ) {
        let n = self.n;
        let composite = match sigma.compose(omega) {
            Ok(c) => c,
            Err(_) => unreachable!("hom produced a non-composable pair"),
        };
        let top = omega.target();
        let top_tips = top.tips();
        let Some(top_idx) = self.tree_index(top) else {
            report.skipped += 1;
            return;
        };
        let (Some(b_counts), Some(a_counts)) =
            (self.fiber_counts(omega), self.fiber_counts(sigma))
        else {
            report.skipped += 1;
            return;
        };
        // Restriction of sigma over each omega tip fiber, with the middle
        // tips each fiber owns.
        let restrictions: Vec<(TreeMorphism, Vec<usize>)> = (0..top_tips)
            .map(|j| {
                let tf = omega.tip_fiber(j);
                let restricted = sigma.restrict_over(&tf.positions).0;
                (restricted, tf.positions[n].clone())
            })
            .collect();
        for c in 0..self.elements[top_idx].len() {
            for b in tuples(&b_counts) {
                let head = self.mult_lookup(omega, c, &b);
                for a in tuples(&a_counts) {
                    let lhs = head.and_then(|h| self.mult_lookup(sigma, h, &a));
                    let rhs = (|| {
                        let mut grouped = Vec::with_capacity(top_tips);
                        for (j, (restr, owned)) in restrictions.iter().enumerate() {
                            let args: Vec<usize> = owned.iter().map(|&i| a[i]).collect();
                            grouped.push(self.mult_lookup(restr, b[j], &args)?);
                        }
                        self.mult_lookup(&composite, c, &grouped)
                    })();
                    match (lhs, rhs) {
                        (Some(l), Some(r)) => {
                            report.checked += 1;
                            if l != r {
                                report.note_violation(format!(
                                    "associativity fails for {sigma} then {omega} at outer {c}"
                                ));
                            }
                        }
                        _ => report.skipped += 1,
                    }
                }
            }
        }
    }
}

/// All tuples with the given per-slot cardinalities, lexicographically.
pub(crate) fn tuples(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in counts {
        let mut next = Vec::with_capacity(out.len() * c.max(1));
        for prefix in &out {
            for v in 0..c {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub const N_OPERAD_SCHEMA_VERSION: u32 = 1;

/// Serialized form of [`FinNOperad`]; sorted tables make it canonical.
#[derive(Serialize, Deserialize)]
struct NOperadDto {
    schema_version: u32,
    n: usize,
    trees: Vec<NTree>,
    elements: Vec<Vec<String>>,
    unit: usize,
    mult: Vec<NMultDto>,
}

#[derive(Serialize, Deserialize)]
struct NMultDto {
    morphism: TreeMorphism,
    entries: Vec<NMultEntryDto>,
}

#[derive(Serialize, Deserialize)]
struct NMultEntryDto {
    outer: usize,
    inners: Vec<usize>,
    result: usize,
}

impl Serialize for FinNOperad {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = NOperadDto {
            schema_version: N_OPERAD_SCHEMA_VERSION,
            n: self.n,
            trees: self.trees.clone(),
            elements: self.elements.clone(),
            unit: self.unit,
            mult: self
                .mult
                .iter()
                .map(|(morphism, table)| NMultDto {
                    morphism: morphism.clone(),
                    entries: table
                        .iter()
                        .map(|((outer, inners), result)| NMultEntryDto {
                            outer: *outer,
                            inners: inners.clone(),
                            result: *result,
                        })
                        .collect(),
                })
                .collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinNOperad {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = NOperadDto::deserialize(deserializer)?;
        if dto.schema_version != N_OPERAD_SCHEMA_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported schema version {}",
                dto.schema_version
            )));
        }
        let mut mult = BTreeMap::new();
        for m in dto.mult {
            let mut table = MultTable::new();
            for e in m.entries {
                table.insert((e.outer, e.inners), e.result);
            }
            mult.insert(m.morphism, table);
        }
        Ok(FinNOperad {
            n: dto.n,
            trees: dto.trees,
            elements: dto.elements,
            unit: dto.unit,
            mult,
        })
    }
}

impl fmt::Display for FinNOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-operad over {} trees, {} tables",
            self.n,
            self.trees.len(),
            self.mult.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symops::Flavor;
    use crate::trees::all_trees_by_nodes;

    #[test]
    fn desymmetrised_permutation_operad_is_an_n_operad() {
        // Height 1: trees are ordinals, morphisms are monotone maps.
        let sym = FinSymOperad::permutation_operad(3, Flavor::Right);
        let trees = all_trees_by_nodes(1, 4);
        let des = FinNOperad::desymmetrise(&sym, 1, &trees).unwrap();
        let report = des.validate();
        assert!(report.is_clean(), "{report}");
        assert!(report.checked > 500);

        // Height 2: tree morphisms can twist tips; associativity now rides
        // on the compatibility of factorization with composition.
        let trees = all_trees_by_nodes(2, 4);
        assert_eq!(trees.len(), 8);
        let des = FinNOperad::desymmetrise(&sym, 2, &trees).unwrap();
        let report = des.validate();
        assert!(report.is_clean(), "{report}");
        assert!(report.checked > 1000);
    }

    #[test]
    fn desymmetrisation_multiplies_along_tip_maps() {
        let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
        // The genuine twist: both tips of a two-branch tree cross when
        // their parents merge in the target.
        let twist: TreeMorphism =
            "2; 2,2; rho_1=[1,2]; rho_0=[1,1] | 2; 2,1; rho_1=[1,1]; rho_0=[1] | sigma_2=[2,1]; sigma_1=[1,1]"
                .parse()
                .unwrap();
        let mut family = all_trees_by_nodes(2, 5);
        family.retain(|t| t.tips() <= 2);
        let des = FinNOperad::desymmetrise(&sym, 2, &family).unwrap();
        let idx = |k: usize, name: &str| -> usize {
            sym.elements[k].iter().position(|e| e == name).unwrap()
        };
        // Units inside, identity outside: the twist itself shows up as the
        // action of the tip permutation on the outer element.
        let v = des
            .mult_lookup(&twist, idx(2, "[1,2]"), &[idx(1, "[1]"), idx(1, "[1]")])
            .unwrap();
        assert_eq!(sym.elements[2][v], "[2,1]");
    }

    #[test]
    fn endomorphism_n_operad_matches_desymmetrised_endomorphisms() {
        let sym = FinSymOperad::endomorphism_operad(2, 2, Flavor::Right);
        let mut family = all_trees_by_nodes(2, 5);
        family.retain(|t| t.tips() <= 2);
        let des = FinNOperad::desymmetrise(&sym, 2, &family).unwrap();
        let direct = FinNOperad::endomorphism(2, 2, &family).unwrap();
        assert_eq!(des, direct);
    }

    #[test]
    fn endomorphism_n_operad_validates() {
        let trees = all_trees_by_nodes(1, 3);
        let end = FinNOperad::endomorphism(1, 2, &trees).unwrap();
        let report = end.validate();
        assert!(report.is_clean(), "{report}");
    }

    #[test]
    fn terminal_n_operad_validates() {
        for n in 1..=2 {
            let trees = all_trees_by_nodes(n, 4);
            let term = FinNOperad::terminal(n, &trees).unwrap();
            let report = term.validate();
            assert!(report.is_clean(), "{report}");
            assert!(trees.iter().all(|t| term.element_count(t) == 1));
        }
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
        let trees = all_trees_by_nodes(1, 3);
        let des = FinNOperad::desymmetrise(&sym, 1, &trees).unwrap();
        let text = serde_json::to_string_pretty(&des).unwrap();
        let back: FinNOperad = serde_json::from_str(&text).unwrap();
        assert_eq!(back, des);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn corrupted_tables_are_reported() {
        let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
        let trees = all_trees_by_nodes(1, 3);
        let mut des = FinNOperad::desymmetrise(&sym, 1, &trees).unwrap();
        // Break a unit-argument instance over the two-tip tree: the unit
        // law pins every such entry, so the validator must flag it.
        let two = NTree::fan(1, 0, 2);
        let id = TreeMorphism::identity(&two);
        let unit = des.unit;
        let table = des.mult.get_mut(&id).unwrap();
        let old = table[&(0, vec![unit, unit])];
        table.insert((0, vec![unit, unit]), (old + 1) % 2);
        assert!(!des.validate().is_clean());
    }

    #[test]
    fn missing_linear_tree_is_rejected() {
        let sym = FinSymOperad::permutation_operad(2, Flavor::Right);
        let fan = NTree::fan(1, 0, 2);
        assert!(FinNOperad::desymmetrise(&sym, 1, &[fan]).is_err());
    }
}
