//! Iterated-monoidal expression posets and the operad they carry.
//!
//! Objects of arity `k` are formal expressions over the symbols `1..=k`
//! built with `n` associative operations `o0 .. o{n-1}`, each symbol
//! appearing exactly once and runs of one operation stored flattened.
//! Morphisms are generated by the middle interchange rewrites, directed
//! from higher operation levels towards lower ones; whether an arrow
//! exists is decided by a pairwise reading of the two expressions and
//! cross-checked against breadth-first rewriting.
//!
//! Every tree carries a canonical expression joining two tips at the
//! level where their ancestors first meet.  A tree morphism then yields a
//! comparison from the substituted canonical expressions of its fibers to
//! the permuted canonical expression of its source — an operad internal
//! to the poset.  Flipping the level numbering reverses all comparisons
//! and gives the internal cooperad.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::omegan::hom;
use crate::ordmaps::Perm;
use crate::trees::{all_trees_by_nodes, NTree};

/// A node of a flattened expression: a symbol, or a run of one operation
/// level with at least two children, none of which starts with the same
/// level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MExpr {
    Symbol(usize),
    Op(usize, Vec<MExpr>),
}

/// An iterated-monoidal expression: `n` operation levels over symbols
/// `1..=k`, each appearing exactly once.  The empty expression (`k = 0`)
/// acts as the unit of substitution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MExpression {
    n: usize,
    expr: Option<MExpr>,
}

/// Flattening smart constructor: splices children that start with the
/// same level, drops empty parts, and collapses trivial runs.
fn op(level: usize, parts: Vec<Option<MExpr>>) -> Option<MExpr> {
    let mut kids = Vec::new();
    for part in parts.into_iter().flatten() {
        match part {
            MExpr::Op(l, sub) if l == level => kids.extend(sub),
            other => kids.push(other),
        }
    }
    match kids.len() {
        0 => None,
        1 => Some(kids.pop().expect("one child")),
        _ => Some(MExpr::Op(level, kids)),
    }
}

fn op2(level: usize, a: Option<MExpr>, b: Option<MExpr>) -> Option<MExpr> {
    op(level, vec![a, b])
}

/// Rebuilds an expression through the smart constructor, normalizing any
/// unflattened runs handed in by a caller.
fn normalize(expr: MExpr) -> Option<MExpr> {
    match expr {
        MExpr::Symbol(s) => Some(MExpr::Symbol(s)),
        MExpr::Op(level, kids) => op(level, kids.into_iter().map(normalize).collect()),
    }
}

fn collect_symbols(expr: &MExpr, out: &mut Vec<usize>) {
    match expr {
        MExpr::Symbol(s) => out.push(*s),
        MExpr::Op(_, kids) => {
            for kid in kids {
                collect_symbols(kid, out);
            }
        }
    }
}

fn shift_symbols(expr: &MExpr, offset: usize) -> MExpr {
    match expr {
        MExpr::Symbol(s) => MExpr::Symbol(s + offset),
        MExpr::Op(level, kids) => MExpr::Op(
            *level,
            kids.iter().map(|k| shift_symbols(k, offset)).collect(),
        ),
    }
}

fn rename_symbols(expr: &MExpr, rename: &dyn Fn(usize) -> usize) -> MExpr {
    match expr {
        MExpr::Symbol(s) => MExpr::Symbol(rename(*s)),
        MExpr::Op(level, kids) => MExpr::Op(
            *level,
            kids.iter().map(|k| rename_symbols(k, rename)).collect(),
        ),
    }
}

impl MExpression {
    /// Checked constructor; normalizes flattening and validates that the
    /// levels fit under `n` and the symbols are exactly `1..=k`.
    pub fn new(n: usize, expr: Option<MExpr>) -> Result<Self> {
        let expr = expr.and_then(normalize);
        if let Some(e) = &expr {
            let mut symbols = Vec::new();
            collect_symbols(e, &mut symbols);
            let mut sorted = symbols.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != symbols.len()
                || sorted.first() != Some(&1)
                || *sorted.last().expect("nonempty") != sorted.len()
            {
                return Err(Error::InvalidExpression(format!(
                    "symbols must be 1..=k each exactly once, got {symbols:?}"
                )));
            }
            let mut levels = Vec::new();
            fn collect_levels(e: &MExpr, out: &mut Vec<usize>) {
                if let MExpr::Op(l, kids) = e {
                    out.push(*l);
                    for k in kids {
                        collect_levels(k, out);
                    }
                }
            }
            collect_levels(e, &mut levels);
            if let Some(&bad) = levels.iter().find(|&&l| l >= n) {
                return Err(Error::InvalidExpression(format!(
                    "operation level {bad} does not exist at height {n}"
                )));
            }
        }
        Ok(MExpression { n, expr })
    }

    /// The empty expression, unit of substitution.
    pub fn empty(n: usize) -> Self {
        MExpression { n, expr: None }
    }

    /// The single-symbol expression `1`.
    pub fn unit(n: usize) -> Self {
        MExpression {
            n,
            expr: Some(MExpr::Symbol(1)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn expr(&self) -> Option<&MExpr> {
        self.expr.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.expr.is_none()
    }

    /// Number of symbols (the arity `k`).
    pub fn symbol_count(&self) -> usize {
        self.symbols().len()
    }

    /// Symbols in left-to-right reading order.
    pub fn symbols(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(e) = &self.expr {
            collect_symbols(e, &mut out);
        }
        out
    }

    /// `(level, left symbol)` of the least operation joining `u` and `v`.
    pub fn pair(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        if u == v {
            return Err(Error::InvalidExpression(format!(
                "pair level of {u} with itself is undefined"
            )));
        }
        let table = self.pair_table();
        let key = (u.min(v), u.max(v));
        table.pairs.get(&key).copied().ok_or_else(|| {
            Error::InvalidExpression(format!("no pair {{{u},{v}}} in {self}"))
        })
    }

    /// Tabulates `pair` over all symbol pairs.
    pub fn pair_table(&self) -> PairTable {
        let mut pairs = BTreeMap::new();
        fn fill(expr: &MExpr, pairs: &mut BTreeMap<(usize, usize), (usize, usize)>) {
            if let MExpr::Op(level, kids) = expr {
                let runs: Vec<Vec<usize>> = kids
                    .iter()
                    .map(|k| {
                        let mut s = Vec::new();
                        collect_symbols(k, &mut s);
                        s
                    })
                    .collect();
                for a in 0..runs.len() {
                    for b in a + 1..runs.len() {
                        for &u in &runs[a] {
                            for &v in &runs[b] {
                                pairs.insert((u.min(v), u.max(v)), (*level, u));
                            }
                        }
                    }
                }
                for kid in kids {
                    fill(kid, pairs);
                }
            }
        }
        if let Some(e) = &self.expr {
            fill(e, &mut pairs);
        }
        PairTable { n: self.n, pairs }
    }

    /// Whether an arrow `self -> other` exists: every pair must keep its
    /// orientation without raising its level, or flip with a strict drop.
    pub fn leq(&self, other: &MExpression) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::InvalidExpression(format!(
                "height mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        let mut a = self.symbols();
        let mut b = other.symbols();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::InvalidExpression(format!(
                "symbol sets differ: {self} vs {other}"
            )));
        }
        Ok(self.pair_table().leq(&other.pair_table()))
    }

    /// Operadic substitution: replaces symbol `m` by `inners[m-1]`,
    /// renumbering symbols left to right; empty inners delete their
    /// symbol.
    pub fn substitute(&self, inners: &[MExpression]) -> Result<MExpression> {
        if inners.len() != self.symbol_count() {
            return Err(Error::InvalidExpression(format!(
                "expected {} inner expressions, got {}",
                self.symbol_count(),
                inners.len()
            )));
        }
        if let Some(bad) = inners.iter().find(|e| e.n != self.n) {
            return Err(Error::InvalidExpression(format!(
                "height mismatch in substitution: {} vs {}",
                self.n, bad.n
            )));
        }
        let mut offsets = Vec::with_capacity(inners.len());
        let mut total = 0;
        for inner in inners {
            offsets.push(total);
            total += inner.symbol_count();
        }
        fn subst(
            expr: &MExpr,
            inners: &[MExpression],
            offsets: &[usize],
        ) -> Option<MExpr> {
            match expr {
                MExpr::Symbol(s) => inners[s - 1]
                    .expr
                    .as_ref()
                    .map(|e| shift_symbols(e, offsets[s - 1])),
                MExpr::Op(level, kids) => op(
                    *level,
                    kids.iter().map(|k| subst(k, inners, offsets)).collect(),
                ),
            }
        }
        let expr = self.expr.as_ref().and_then(|e| subst(e, inners, &offsets));
        MExpression::new(self.n, expr)
    }

    /// Relabels each symbol `u` to `pi(u)`.
    pub fn permuted(&self, pi: &Perm) -> Result<MExpression> {
        if pi.n() != self.symbol_count() {
            return Err(Error::InvalidExpression(format!(
                "permutation rank {} does not match {} symbols",
                pi.n(),
                self.symbol_count()
            )));
        }
        let expr = self
            .expr
            .as_ref()
            .map(|e| rename_symbols(e, &|u| pi.apply(u - 1) + 1));
        MExpression::new(self.n, expr)
    }

    /// Renumbers operation levels by `l -> n - 1 - l`.  Turns the
    /// canonical tree assignment into its cooperad companion.
    pub fn level_flipped(&self) -> MExpression {
        fn flip(expr: &MExpr, n: usize) -> MExpr {
            match expr {
                MExpr::Symbol(s) => MExpr::Symbol(*s),
                MExpr::Op(level, kids) => MExpr::Op(
                    n - 1 - level,
                    kids.iter().map(|k| flip(k, n)).collect(),
                ),
            }
        }
        MExpression {
            n: self.n,
            expr: self.expr.as_ref().map(|e| flip(e, self.n)),
        }
    }
}

impl fmt::Display for MExpression {
    /// Renders with explicit level subscripts, `(1 o1 2) o0 (3 o1 4)`;
    /// the empty expression prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_expr(expr: &MExpr, f: &mut fmt::Formatter<'_>, outer: bool) -> fmt::Result {
            match expr {
                MExpr::Symbol(s) => write!(f, "{s}"),
                MExpr::Op(level, kids) => {
                    if !outer {
                        write!(f, "(")?;
                    }
                    for (i, kid) in kids.iter().enumerate() {
                        if i > 0 {
                            write!(f, " o{level} ")?;
                        }
                        write_expr(kid, f, false)?;
                    }
                    if !outer {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        match &self.expr {
            None => write!(f, "e"),
            Some(e) => write_expr(e, f, true),
        }
    }
}

/// Parses the rendered form.  The height is taken as one more than the
/// highest level mentioned; use [`MExpression::with_height`] to raise it.
impl FromStr for MExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        #[derive(Debug, PartialEq)]
        enum Tok {
            Num(usize),
            Op(usize),
            Open,
            Close,
            Empty,
        }
        let mut toks = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                ' ' | '\t' => {
                    chars.next();
                }
                '(' => {
                    chars.next();
                    toks.push(Tok::Open);
                }
                ')' => {
                    chars.next();
                    toks.push(Tok::Close);
                }
                'e' => {
                    chars.next();
                    toks.push(Tok::Empty);
                }
                'o' => {
                    chars.next();
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    if digits.is_empty() {
                        return Err(Error::Parse(format!("bare 'o' in {s:?}")));
                    }
                    toks.push(Tok::Op(digits.parse().expect("digits")));
                }
                d if d.is_ascii_digit() => {
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push(Tok::Num(digits.parse().expect("digits")));
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in {s:?}"
                    )));
                }
            }
        }

        fn parse_expr(toks: &[Tok], at: &mut usize) -> Result<Option<MExpr>> {
            let first = parse_atom(toks, at)?;
            let mut parts = vec![first];
            let mut level = None;
            while let Some(Tok::Op(l)) = toks.get(*at) {
                match level {
                    None => level = Some(*l),
                    Some(expected) if expected != *l => {
                        return Err(Error::Parse(format!(
                            "mixed levels o{expected} and o{l} need parentheses"
                        )));
                    }
                    _ => {}
                }
                *at += 1;
                parts.push(parse_atom(toks, at)?);
            }
            Ok(match level {
                None => parts.pop().expect("one part"),
                Some(l) => op(l, parts),
            })
        }

        fn parse_atom(toks: &[Tok], at: &mut usize) -> Result<Option<MExpr>> {
            match toks.get(*at) {
                Some(Tok::Num(v)) => {
                    *at += 1;
                    Ok(Some(MExpr::Symbol(*v)))
                }
                Some(Tok::Empty) => {
                    *at += 1;
                    Ok(None)
                }
                Some(Tok::Open) => {
                    *at += 1;
                    let inner = parse_expr(toks, at)?;
                    if toks.get(*at) != Some(&Tok::Close) {
                        return Err(Error::Parse("missing ')'".to_string()));
                    }
                    *at += 1;
                    Ok(inner)
                }
                other => Err(Error::Parse(format!("unexpected token {other:?}"))),
            }
        }

        let mut at = 0;
        let expr = parse_expr(&toks, &mut at)?;
        if at != toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        let mut max_level = None;
        fn scan(expr: &MExpr, max: &mut Option<usize>) {
            if let MExpr::Op(l, kids) = expr {
                *max = Some(max.map_or(*l, |m: usize| m.max(*l)));
                for k in kids {
                    scan(k, max);
                }
            }
        }
        if let Some(e) = &expr {
            scan(e, &mut max_level);
        }
        MExpression::new(max_level.map_or(1, |m| m + 1), expr)
    }
}

impl MExpression {
    /// The same expression considered at a larger height.
    pub fn with_height(&self, n: usize) -> Result<MExpression> {
        MExpression::new(n, self.expr.clone())
    }
}

/// The pairwise reading of an expression: for each unordered symbol pair
/// the level of the least operation joining it and which symbol stands
/// left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTable {
    n: usize,
    pairs: BTreeMap<(usize, usize), (usize, usize)>,
}

impl PairTable {
    pub fn new(n: usize, pairs: BTreeMap<(usize, usize), (usize, usize)>) -> Result<Self> {
        for (&(u, v), &(level, left)) in &pairs {
            if u >= v {
                return Err(Error::InvalidExpression(format!(
                    "pair key ({u},{v}) must be ordered"
                )));
            }
            if level >= n {
                return Err(Error::InvalidExpression(format!(
                    "pair level {level} does not exist at height {n}"
                )));
            }
            if left != u && left != v {
                return Err(Error::InvalidExpression(format!(
                    "left symbol {left} is not in the pair ({u},{v})"
                )));
            }
        }
        Ok(PairTable { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &BTreeMap<(usize, usize), (usize, usize)> {
        &self.pairs
    }

    /// The pairwise arrow criterion: levels may only drop, and the
    /// orientation may only flip together with a strict drop.
    pub fn leq(&self, other: &PairTable) -> bool {
        if self.pairs.keys().ne(other.pairs.keys()) {
            return false;
        }
        self.pairs.iter().all(|(key, &(i, left_a))| {
            let (j, left_b) = other.pairs[key];
            if left_a == left_b {
                j <= i
            } else {
                j < i
            }
        })
    }

    /// Whether every triple of symbols is realized by some expression.
    pub fn consistent(&self) -> bool {
        let symbols: BTreeSet<usize> = self
            .pairs
            .keys()
            .flat_map(|&(u, v)| [u, v])
            .collect();
        let symbols: Vec<usize> = symbols.into_iter().collect();
        if symbols.len() < 3 {
            return true;
        }
        let realizable: BTreeSet<BTreeMap<(usize, usize), (usize, usize)>> =
            enumerate_mexprs(self.n, 3)
                .iter()
                .map(|e| e.pair_table().pairs)
                .collect();
        for a in 0..symbols.len() {
            for b in a + 1..symbols.len() {
                for c in b + 1..symbols.len() {
                    let triple = [symbols[a], symbols[b], symbols[c]];
                    let slot = |s: usize| {
                        triple.iter().position(|&t| t == s).expect("in triple") + 1
                    };
                    let mut restricted = BTreeMap::new();
                    for x in 0..3 {
                        for y in x + 1..3 {
                            let key = (triple[x], triple[y]);
                            match self.pairs.get(&key) {
                                Some(&(level, left)) => {
                                    restricted.insert((x + 1, y + 1), (level, slot(left)));
                                }
                                None => return false,
                            }
                        }
                    }
                    if !realizable.contains(&restricted) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Reads the complete-graph label table off an expression.
pub fn to_complete_graph(expr: &MExpression) -> PairTable {
    expr.pair_table()
}

/// The pairwise order on label tables.
pub fn leq_k(a: &PairTable, b: &PairTable) -> bool {
    a.leq(b)
}

/// `(level, left symbol)` of the least operation joining `u` and `v`.
pub fn pair_level(expr: &MExpression, u: usize, v: usize) -> Result<(usize, usize)> {
    expr.pair(u, v)
}

/// Relabels symbols by `pi`.
pub fn perm_act(pi: &Perm, expr: &MExpression) -> Result<MExpression> {
    expr.permuted(pi)
}

/// The canonical expression of a tree: two tips are joined at the level
/// where their ancestors first meet, read off the canonical
/// decomposition; degenerate trees give the empty expression.
pub fn a_tree(tree: &NTree) -> MExpression {
    fn build(tree: &NTree) -> Option<MExpr> {
        if tree.tips() == 0 {
            return None;
        }
        if tree.tips() == 1 {
            return Some(MExpr::Symbol(1));
        }
        let decomposition = tree.canonical_decomposition();
        let mut parts = Vec::with_capacity(decomposition.parts.len());
        let mut offset = 0;
        for part in &decomposition.parts {
            parts.push(build(part).map(|e| shift_symbols(&e, offset)));
            offset += part.tips();
        }
        op(decomposition.susp, parts)
    }
    MExpression {
        n: tree.n(),
        expr: build(tree),
    }
}

/// All expressions of height `n` over the symbols `1..=k`.
pub fn enumerate_mexprs(n: usize, k: usize) -> Vec<MExpression> {
    if k == 0 {
        return vec![MExpression::empty(n)];
    }
    let symbols: Vec<usize> = (1..=k).collect();
    all_over(n, &symbols)
        .into_iter()
        .map(|e| MExpression { n, expr: Some(e) })
        .collect()
}

fn all_over(n: usize, symbols: &[usize]) -> Vec<MExpr> {
    if symbols.len() == 1 {
        return vec![MExpr::Symbol(symbols[0])];
    }
    (0..n).flat_map(|i| top_level(n, symbols, i)).collect()
}

/// Expressions over `symbols` whose outermost operation is exactly `i`.
fn top_level(n: usize, symbols: &[usize], i: usize) -> Vec<MExpr> {
    let mut out = Vec::new();
    for blocks in ordered_partitions(symbols) {
        if blocks.len() < 2 {
            continue;
        }
        let choices: Vec<Vec<MExpr>> = blocks
            .iter()
            .map(|block| {
                if block.len() == 1 {
                    vec![MExpr::Symbol(block[0])]
                } else {
                    (0..n)
                        .filter(|&l| l != i)
                        .flat_map(|l| top_level(n, block, l))
                        .collect()
                }
            })
            .collect();
        let mut picks = vec![0usize; choices.len()];
        'product: loop {
            if choices.iter().any(|c| c.is_empty()) {
                break 'product;
            }
            let kids: Vec<MExpr> = picks
                .iter()
                .zip(&choices)
                .map(|(&p, c)| c[p].clone())
                .collect();
            out.push(MExpr::Op(i, kids));
            let mut pos = picks.len();
            loop {
                if pos == 0 {
                    break 'product;
                }
                pos -= 1;
                picks[pos] += 1;
                if picks[pos] < choices[pos].len() {
                    break;
                }
                picks[pos] = 0;
            }
        }
    }
    out
}

/// Ordered partitions of a symbol set into nonempty blocks (any number of
/// blocks, blocks kept sorted, order of blocks significant).
fn ordered_partitions(symbols: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if symbols.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let full = 1usize << symbols.len();
    for mask in 1..full {
        let mut first = Vec::new();
        let mut rest = Vec::new();
        for (pos, &s) in symbols.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                first.push(s);
            } else {
                rest.push(s);
            }
        }
        if rest.is_empty() {
            out.push(vec![first]);
        } else {
            for mut tail in ordered_partitions(&rest) {
                let mut blocks = vec![first.clone()];
                blocks.append(&mut tail);
                out.push(blocks);
            }
        }
    }
    out
}

/// All single middle-interchange rewrites of an expression, applied at
/// any node with any unit-degenerate corners, results flattened.
pub fn rewrites(expr: &MExpression) -> Vec<MExpression> {
    let Some(root) = &expr.expr else {
        return Vec::new();
    };
    let mut seen = BTreeSet::new();
    rewrite_nodes(root)
        .into_iter()
        .filter(|r| r != root)
        .filter_map(|r| {
            let rewritten =
                MExpression::new(expr.n, Some(r)).expect("rewrites stay well formed");
            seen.insert(rewritten.clone()).then_some(rewritten)
        })
        .collect()
}

/// Splits `x` as `a o{j} b`, including the unit-degenerate corners.
fn level_splits(x: &MExpr, j: usize) -> Vec<(Option<MExpr>, Option<MExpr>)> {
    let mut out = vec![
        (None, Some(x.clone())),
        (Some(x.clone()), None),
    ];
    if let MExpr::Op(l, xs) = x {
        if *l == j {
            for m in 1..xs.len() {
                out.push((
                    op(j, xs[..m].iter().cloned().map(Some).collect()),
                    op(j, xs[m..].iter().cloned().map(Some).collect()),
                ));
            }
        }
    }
    out
}

fn run_expr(level: usize, run: &[MExpr]) -> MExpr {
    if run.len() == 1 {
        run[0].clone()
    } else {
        MExpr::Op(level, run.to_vec())
    }
}

fn rewrite_nodes(expr: &MExpr) -> Vec<MExpr> {
    let MExpr::Op(i, kids) = expr else {
        return Vec::new();
    };
    let mut out = Vec::new();
    // One interchange across two adjacent child runs of this node.
    for a in 0..kids.len() {
        for b in a + 1..kids.len() {
            for c in b + 1..=kids.len() {
                let x = run_expr(*i, &kids[a..b]);
                let y = run_expr(*i, &kids[b..c]);
                for j in 0..*i {
                    for (xa, xb) in level_splits(&x, j) {
                        for (yc, yd) in level_splits(&y, j) {
                            let left = op2(*i, xa.clone(), yc.clone());
                            let right = op2(*i, xb.clone(), yd.clone());
                            let piece = op2(j, left, right);
                            let mut parts: Vec<Option<MExpr>> =
                                kids[..a].iter().cloned().map(Some).collect();
                            parts.push(piece);
                            parts.extend(kids[c..].iter().cloned().map(Some));
                            if let Some(result) = op(*i, parts) {
                                out.push(result);
                            }
                        }
                    }
                }
            }
        }
    }
    // Rewrites inside one child, respliced into this run.
    for (idx, kid) in kids.iter().enumerate() {
        for rewritten in rewrite_nodes(kid) {
            let parts: Vec<Option<MExpr>> = kids
                .iter()
                .enumerate()
                .map(|(p, k)| Some(if p == idx { rewritten.clone() } else { k.clone() }))
                .collect();
            if let Some(result) = op(*i, parts) {
                out.push(result);
            }
        }
    }
    out
}

/// Breadth-first reachability through single interchange rewrites.
pub fn rewrite_reachable(from: &MExpression, to: &MExpression) -> bool {
    if from == to {
        return true;
    }
    let mut seen = BTreeSet::new();
    seen.insert(from.clone());
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(current) = queue.pop_front() {
        for next in rewrites(&current) {
            if next == *to {
                return true;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Indices `(i, j)` of the Hasse diagram of `leq` on the given objects.
pub fn covering_arrows(objects: &[MExpression]) -> Vec<(usize, usize)> {
    let below: Vec<Vec<bool>> = objects
        .iter()
        .map(|a| {
            objects
                .iter()
                .map(|b| a.leq(b).expect("comparable enumeration"))
                .collect()
        })
        .collect();
    let mut arrows = Vec::new();
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            if i == j || !below[i][j] {
                continue;
            }
            let covered = (0..objects.len())
                .any(|l| l != i && l != j && below[i][l] && below[l][j]);
            if !covered {
                arrows.push((i, j));
            }
        }
    }
    arrows
}

/// DOT rendering of the bounded expression poset's Hasse diagram.
pub fn dot_mposet(n: usize, k: usize) -> String {
    let objects = enumerate_mexprs(n, k);
    let arrows = covering_arrows(&objects);
    let mut out = String::new();
    out.push_str(&format!("digraph mposet_n{n}_k{k} {{\n"));
    out.push_str("  rankdir=BT;\n");
    for (i, obj) in objects.iter().enumerate() {
        out.push_str(&format!("  v{i} [shape=box, label=\"{obj}\"];\n"));
    }
    for (i, j) in &arrows {
        out.push_str(&format!("  v{i} -> v{j};\n"));
    }
    out.push_str("}\n");
    out
}

/// Outcome of checking the internal operad and cooperad cells over every
/// tree morphism within the tip bound.
#[derive(Clone, Debug)]
pub struct InternalOperadReport {
    pub n: usize,
    pub tip_bound: usize,
    pub trees: usize,
    pub morphisms: usize,
    pub operad_failures: Vec<String>,
    pub cooperad_failures: Vec<String>,
}

impl InternalOperadReport {
    pub fn ok(&self) -> bool {
        self.operad_failures.is_empty() && self.cooperad_failures.is_empty()
    }
}

impl fmt::Display for InternalOperadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "internal operad at height {}: {} morphisms over {} trees with <= {} tips, \
             {} operad failures, {} cooperad failures",
            self.n,
            self.morphisms,
            self.trees,
            self.tip_bound,
            self.operad_failures.len(),
            self.cooperad_failures.len(),
        )
    }
}

/// Checks, for every morphism between tip-supported trees with at most
/// `tip_bound` tips, that substituted fiber expressions compare to the
/// permuted canonical expression — and dually with flipped levels.
pub fn verify_internal_operad(n: usize, tip_bound: usize) -> InternalOperadReport {
    let trees: Vec<NTree> = all_trees_by_nodes(n, 1 + n * tip_bound)
        .into_iter()
        .filter(|t| !t.is_degenerate() && t.tips() <= tip_bound && t.is_tip_supported())
        .collect();
    let mut morphisms = 0;
    let mut operad_failures = Vec::new();
    let mut cooperad_failures = Vec::new();
    for source in &trees {
        for target in &trees {
            for sigma in hom(source, target) {
                morphisms += 1;
                let pi = sigma.tip_permutation();
                let outer = a_tree(target);
                let fibers: Vec<MExpression> = (0..target.tips())
                    .map(|t| a_tree(&sigma.tip_fiber(t).tree))
                    .collect();
                let substituted = outer
                    .substitute(&fibers)
                    .expect("fiber arities match the outer expression");
                let permuted = a_tree(source)
                    .permuted(&pi)
                    .expect("tip permutation matches the source expression");
                if !substituted.leq(&permuted).expect("same symbols") {
                    operad_failures.push(format!(
                        "{sigma}: {substituted} is not below {permuted}"
                    ));
                }
                let co_substituted = outer
                    .level_flipped()
                    .substitute(&fibers.iter().map(|f| f.level_flipped()).collect::<Vec<_>>())
                    .expect("fiber arities match the outer expression");
                let co_permuted = a_tree(source)
                    .level_flipped()
                    .permuted(&pi)
                    .expect("tip permutation matches the source expression");
                if !co_permuted.leq(&co_substituted).expect("same symbols") {
                    cooperad_failures.push(format!(
                        "{sigma}: {co_permuted} is not below {co_substituted}"
                    ));
                }
            }
        }
    }
    InternalOperadReport {
        n,
        tip_bound,
        trees: trees.len(),
        morphisms,
        operad_failures,
        cooperad_failures,
    }
}
