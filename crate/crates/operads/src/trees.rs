//! Planar level trees of a fixed height (`n`-trees).
//!
//! An `n`-tree is a chain of monotone ordinal maps
//!
//! ```text
//! k_n -> k_{n-1} -> ... -> k_1 -> k_0 = 1
//! ```
//!
//! read as "each node of level `j+1` names its parent on level `j`".  Level
//! `0` is always the root; level `n` nodes are the *tips*.  Levels may be
//! empty: a tree whose top level is empty is called *degenerate* (it has no
//! tips at all, and emptiness propagates upward).
//!
//! The two degeneracy operators are [`NTree::suspend`] (insert a fresh
//! singleton level just above the root) and [`NTree::append_empty_level`]
//! (put an empty level on top).  The *suspension index* counts how many
//! leading levels above the root are singletons.
//!
//! `n`-trees form a monoid under each of the `n` gluing operations
//! [`NTree::tensor_at`]: two trees agreeing below level `k` are merged above
//! it, interleaving branches by their level-`k` ancestor.  Every tree
//! decomposes canonically into single-column parts along its suspension
//! level; see [`NTree::canonical_decomposition`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordmaps::{monotone_maps, OrdMap};

/// A planar level tree of height `n`, stored as its parent maps.
///
/// `maps[j]` sends level `j+1` to level `j`; there are exactly `n` maps and
/// each is monotone, with `maps[0]` landing in the singleton root level.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NTree {
    maps: Vec<OrdMap>,
}

/// For each level `j`, the new index of every old node: `emb[j][i]` is where
/// level-`j` node `i` ended up after a gluing.
pub type LevelEmbedding = Vec<Vec<usize>>;

/// A tree split at its suspension level: `susp` leading singleton levels,
/// then one part per node of the first wide level.  Each part keeps the full
/// root spine and a single node at level `susp + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub susp: usize,
    pub parts: Vec<NTree>,
}

impl NTree {
    /// Checked constructor from parent maps (level `j+1 -> j`, bottom first).
    pub fn new(maps: Vec<OrdMap>) -> Result<Self> {
        if let Some(first) = maps.first() {
            if first.cod() != 1 {
                return Err(Error::InvalidTree(format!(
                    "root level must be a single node, got {}",
                    first.cod()
                )));
            }
        }
        for j in 1..maps.len() {
            if maps[j].cod() != maps[j - 1].dom() {
                return Err(Error::InvalidTree(format!(
                    "level {} has {} nodes but the map above it expects {}",
                    j,
                    maps[j - 1].dom(),
                    maps[j].cod()
                )));
            }
        }
        for (j, m) in maps.iter().enumerate() {
            if !m.is_monotone() {
                return Err(Error::InvalidTree(format!(
                    "parent map at level {j} is not monotone"
                )));
            }
        }
        Ok(NTree { maps })
    }

    pub(crate) fn unchecked(maps: Vec<OrdMap>) -> Self {
        debug_assert!(NTree::new(maps.clone()).is_ok());
        NTree { maps }
    }

    /// The linear tree: one node on every level (a single tip).
    pub fn linear(n: usize) -> Self {
        NTree {
            maps: vec![OrdMap::identity(1); n],
        }
    }

    /// The fan with `width` parallel columns branching at level `pivot + 1`:
    /// levels `0..=pivot` are singletons, all higher levels have `width`
    /// nodes mapped identically.  `fan(n, n-1, k)` is the `k`-corolla,
    /// `fan(n, l, 1)` the linear tree, `fan(n, l, 0)` the degenerate column.
    pub fn fan(n: usize, pivot: usize, width: usize) -> Self {
        assert!(pivot < n || width == 1, "fan pivot {pivot} out of range for height {n}");
        let mut maps = Vec::with_capacity(n);
        for j in 0..n {
            if j < pivot {
                maps.push(OrdMap::identity(1));
            } else if j == pivot {
                maps.push(OrdMap::unchecked(vec![0; width], 1));
            } else {
                maps.push(OrdMap::identity(width));
            }
        }
        NTree { maps }
    }

    /// Height of the tree.
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    /// Number of nodes on level `j` (level 0 is the root).
    pub fn level_size(&self, j: usize) -> usize {
        if j == 0 {
            1
        } else {
            self.maps[j - 1].dom()
        }
    }

    /// All level sizes, root first; the result has length `n + 1`.
    pub fn levels(&self) -> Vec<usize> {
        (0..=self.n()).map(|j| self.level_size(j)).collect()
    }

    /// The parent map from level `j + 1` to level `j`.
    pub fn map(&self, j: usize) -> &OrdMap {
        &self.maps[j]
    }

    pub fn tips(&self) -> usize {
        self.level_size(self.n())
    }

    pub fn node_count(&self) -> usize {
        self.levels().iter().sum()
    }

    /// A tree with no tips (equivalently, some level is empty).
    pub fn is_degenerate(&self) -> bool {
        self.tips() == 0
    }

    pub fn is_linear(&self) -> bool {
        self.levels().iter().all(|&k| k == 1)
    }

    /// Every node lies below some tip; equivalently, all parent maps are
    /// surjective.  Morphisms into such a tree are determined by their tip
    /// fibers.
    pub fn is_tip_supported(&self) -> bool {
        self.maps
            .iter()
            .all(|m| m.fiber_sizes().iter().all(|&s| s > 0))
    }

    /// Number of leading singleton levels above the root.
    pub fn susp_index(&self) -> usize {
        let mut m = 0;
        while m < self.n() && self.level_size(m + 1) == 1 {
            m += 1;
        }
        m
    }

    /// Whether the tree is `fan(n, pivot, width)` for its own suspension
    /// index; returns the `(pivot, width)` pair if so.
    pub fn as_fan(&self) -> Option<(usize, usize)> {
        let pivot = self.susp_index();
        if pivot == self.n() {
            return Some((pivot, 1)); // linear
        }
        let width = self.level_size(pivot + 1);
        for j in pivot + 1..self.n() {
            if self.level_size(j + 1) != width || !self.maps[j].is_identity() {
                return None;
            }
        }
        Some((pivot, width))
    }

    /// Insert a fresh singleton level just above the root (height grows by 1).
    pub fn suspend(&self) -> NTree {
        let mut maps = Vec::with_capacity(self.n() + 1);
        maps.push(OrdMap::identity(1));
        maps.extend(self.maps.iter().cloned());
        NTree { maps }
    }

    /// Put an empty level on top (height grows by 1, tree becomes degenerate).
    pub fn append_empty_level(&self) -> NTree {
        let mut maps = self.maps.clone();
        maps.push(OrdMap::unchecked(Vec::new(), self.tips()));
        NTree { maps }
    }

    /// Forget the top level.
    pub fn boundary(&self) -> NTree {
        assert!(self.n() > 0, "the 0-tree has no boundary");
        NTree {
            maps: self.maps[..self.n() - 1].to_vec(),
        }
    }

    /// Forget the top `k` levels.
    pub fn boundary_k(&self, k: usize) -> NTree {
        assert!(k <= self.n());
        NTree {
            maps: self.maps[..self.n() - k].to_vec(),
        }
    }

    /// Ancestor of `node` (on level `j_from`) at level `j_to <= j_from`.
    pub fn ancestor(&self, j_from: usize, node: usize, j_to: usize) -> usize {
        assert!(j_to <= j_from);
        let mut x = node;
        for j in (j_to..j_from).rev() {
            x = self.maps[j].apply(x);
        }
        x
    }

    /// Highest level on which two tips share an ancestor.
    pub fn meet_level(&self, tip_u: usize, tip_v: usize) -> usize {
        let mut j = self.n();
        let (mut u, mut v) = (tip_u, tip_v);
        while u != v {
            j -= 1;
            u = self.maps[j].apply(u);
            v = self.maps[j].apply(v);
        }
        j
    }

    /// Glue several trees that agree on levels `0..=k`, merging each higher
    /// level; branches are ordered by level-`k` ancestor first, then by which
    /// part they come from, then by their original position.  Also returns,
    /// per part, where each old node went.
    pub fn glue_at(k: usize, parts: &[NTree]) -> Result<(NTree, Vec<LevelEmbedding>)> {
        assert!(!parts.is_empty(), "cannot glue an empty list of trees");
        let n = parts[0].n();
        assert!(k <= n);
        for t in parts {
            if t.n() != n {
                return Err(Error::BoundaryMismatch(format!(
                    "cannot glue trees of heights {} and {}",
                    n,
                    t.n()
                )));
            }
            if t.maps[..k] != parts[0].maps[..k] {
                return Err(Error::BoundaryMismatch(format!(
                    "trees disagree below the gluing level {k}: {} vs {}",
                    parts[0], t
                )));
            }
        }

        let mut embeddings: Vec<LevelEmbedding> = parts
            .iter()
            .map(|t| (0..=n).map(|j| vec![0; t.level_size(j)]).collect())
            .collect();
        // Shared levels keep their numbering.
        for (c, t) in parts.iter().enumerate() {
            for j in 0..=k {
                for i in 0..t.level_size(j) {
                    embeddings[c][j][i] = i;
                }
            }
        }

        let mut maps = parts[0].maps[..k].to_vec();
        // `order[j]` lists the merged nodes of level j as (part, old index),
        // already sorted by the gluing key.
        let mut prev_order: Vec<(usize, usize)> = Vec::new();
        for j in k + 1..=n {
            let mut keyed: Vec<((usize, usize, usize), (usize, usize))> = Vec::new();
            for (c, t) in parts.iter().enumerate() {
                for i in 0..t.level_size(j) {
                    let anc = t.ancestor(j, i, k);
                    keyed.push(((anc, c, i), (c, i)));
                }
            }
            keyed.sort();
            let order: Vec<(usize, usize)> = keyed.into_iter().map(|(_, v)| v).collect();
            for (new_idx, &(c, i)) in order.iter().enumerate() {
                embeddings[c][j][i] = new_idx;
            }
            let images: Vec<usize> = order
                .iter()
                .map(|&(c, i)| {
                    let parent = parts[c].maps[j - 1].apply(i);
                    if j - 1 <= k {
                        parent
                    } else {
                        embeddings[c][j - 1][parent]
                    }
                })
                .collect();
            let cod = if j - 1 <= k {
                parts[0].level_size(j - 1)
            } else {
                prev_order.len()
            };
            maps.push(OrdMap::new(images, cod).map_err(|e| {
                Error::InvalidTree(format!("gluing produced an invalid parent map: {e}"))
            })?);
            prev_order = order;
        }
        Ok((NTree { maps }, embeddings))
    }

    /// Binary gluing along level `k`: both trees must agree on levels
    /// `0..=k`.  This is the composition of the `k`-th monoidal structure on
    /// trees of a fixed height.
    pub fn tensor_at(&self, k: usize, other: &NTree) -> Result<NTree> {
        Ok(NTree::glue_at(k, &[self.clone(), other.clone()])?.0)
    }

    /// Split along the suspension level.  The linear tree is its own single
    /// part; a tree whose first wide level is empty has no parts.  Otherwise
    /// each node of the first wide level contributes the part consisting of
    /// the root spine, that node, and everything above it; gluing the parts
    /// back at the suspension level reproduces the tree.
    pub fn canonical_decomposition(&self) -> CanonicalDecomposition {
        if self.is_linear() {
            return CanonicalDecomposition {
                susp: self.n(),
                parts: vec![self.clone()],
            };
        }
        let l = self.susp_index();
        let width = self.level_size(l + 1);
        let mut parts = Vec::with_capacity(width);
        for c in 0..width {
            let mut maps: Vec<OrdMap> = self.maps[..l].to_vec();
            maps.push(OrdMap::identity(1)); // the single column node over the spine
            // Selected node indices of the current level, in tree order.
            let mut selected = vec![c];
            for j in l + 1..self.n() {
                let mut images = Vec::new();
                let mut next = Vec::new();
                for i in 0..self.level_size(j + 1) {
                    let parent = self.maps[j].apply(i);
                    if let Some(pos) = selected.iter().position(|&s| s == parent) {
                        images.push(pos);
                        next.push(i);
                    }
                }
                maps.push(OrdMap::unchecked(images, selected.len()));
                selected = next;
            }
            parts.push(NTree { maps });
        }
        let decomposition = CanonicalDecomposition { susp: l, parts };
        debug_assert!(
            decomposition.parts.is_empty()
                || NTree::glue_at(l, &decomposition.parts).unwrap().0 == *self,
            "canonical parts must glue back to the original tree"
        );
        decomposition
    }
}

impl PartialOrd for NTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NTree {
    /// Orders by height, then total size, then level profile, then parent
    /// maps; a deterministic total order used wherever trees index tables.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.node_count().cmp(&other.node_count()))
            .then_with(|| self.levels().cmp(&other.levels()))
            .then_with(|| {
                for (a, b) in self.maps.iter().zip(&other.maps) {
                    match a.images().cmp(b.images()) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for NTree {
    /// Text form `n; k_n,...,k_1; rho_{n-1}=[..]; ...; rho_0=[..]` with the
    /// level sizes listed top first and 1-based parent lists; the 0-tree is
    /// plain `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        if n == 0 {
            return write!(f, "0");
        }
        write!(f, "{n}; ")?;
        for j in (1..=n).rev() {
            write!(f, "{}", self.level_size(j))?;
            if j > 1 {
                write!(f, ",")?;
            }
        }
        for j in (0..n).rev() {
            write!(f, "; rho_{j}=[")?;
            for (i, &v) in self.maps[j].images().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NTree({self})")
    }
}

impl FromStr for NTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let segments: Vec<&str> = s.split(';').map(str::trim).collect();
        let n: usize = segments[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad tree height in {s:?}")))?;
        if n == 0 {
            if segments.len() == 1 {
                return Ok(NTree { maps: Vec::new() });
            }
            return Err(Error::Parse(format!("the 0-tree is written plain 0, got {s:?}")));
        }
        if segments.len() != n + 2 {
            return Err(Error::Parse(format!(
                "expected sizes and {n} parent lists in {s:?}"
            )));
        }
        let mut sizes: Vec<usize> = Vec::with_capacity(n);
        for item in segments[1].split(',') {
            sizes.push(
                item.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad level size {item:?} in {s:?}")))?,
            );
        }
        if sizes.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} level sizes, got {} in {s:?}",
                sizes.len()
            )));
        }
        sizes.reverse(); // now bottom first: k_1 .. k_n
        let mut maps = Vec::with_capacity(n);
        for j in 0..n {
            let seg = segments[2 + (n - 1 - j)];
            let label = format!("rho_{j}=");
            let body = seg
                .strip_prefix(&label)
                .ok_or_else(|| Error::Parse(format!("expected {label}[..], got {seg:?}")))?
                .trim();
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected bracketed list in {seg:?}")))?;
            let mut images = Vec::new();
            if !inner.trim().is_empty() {
                for item in inner.split(',') {
                    let v: usize = item
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad parent {item:?} in {s:?}")))?;
                    if v == 0 {
                        return Err(Error::Parse(format!("parents are 1-based in {s:?}")));
                    }
                    images.push(v - 1);
                }
            }
            if images.len() != sizes[j] {
                return Err(Error::Parse(format!(
                    "level {} lists {} parents but has size {} in {s:?}",
                    j + 1,
                    images.len(),
                    sizes[j]
                )));
            }
            let cod = if j == 0 { 1 } else { sizes[j - 1] };
            maps.push(
                OrdMap::new(images, cod)
                    .map_err(|e| Error::Parse(format!("bad parent map in {s:?}: {e}")))?,
            );
        }
        NTree::new(maps)
    }
}

impl Serialize for NTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// All trees of height `n` with at most `max_nodes` nodes in total (the root
/// counts), ordered by the tree order.
pub fn all_trees_by_nodes(n: usize, max_nodes: usize) -> Vec<NTree> {
    let mut out = Vec::new();
    if max_nodes == 0 {
        return out;
    }
    fn rec(
        remaining_levels: usize,
        current_size: usize,
        budget: usize,
        maps: &mut Vec<OrdMap>,
        out: &mut Vec<NTree>,
    ) {
        if remaining_levels == 0 {
            out.push(NTree::unchecked(maps.clone()));
            return;
        }
        for next in 0..=budget {
            for m in monotone_maps(next, current_size) {
                maps.push(m);
                rec(remaining_levels - 1, next, budget - next, maps, out);
                maps.pop();
            }
        }
    }
    rec(n, 1, max_nodes - 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(s: &str) -> NTree {
        s.parse().unwrap()
    }

    #[test]
    fn linear_and_fan_shapes() {
        assert_eq!(NTree::linear(2).levels(), vec![1, 1, 1]);
        assert_eq!(NTree::fan(2, 1, 2).levels(), vec![1, 1, 2]);
        assert_eq!(NTree::fan(2, 0, 2).levels(), vec![1, 2, 2]);
        assert_eq!(NTree::fan(1, 0, 3).levels(), vec![1, 3]);
        assert_eq!(NTree::fan(2, 0, 0).levels(), vec![1, 0, 0]);
        assert_eq!(NTree::fan(2, 1, 1), NTree::linear(2));
        assert!(NTree::fan(2, 0, 0).is_degenerate());
        assert!(!NTree::fan(2, 0, 2).is_degenerate());
    }

    #[test]
    fn as_fan_detects_fans_only() {
        assert_eq!(NTree::fan(3, 1, 2).as_fan(), Some((1, 2)));
        assert_eq!(NTree::linear(3).as_fan(), Some((3, 1)));
        assert_eq!(NTree::fan(2, 1, 0).as_fan(), Some((1, 0)));
        // Branching twice is not a fan.
        assert_eq!(tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]").as_fan(), None);
        assert_eq!(tr("2; 2,2; rho_1=[1,2]; rho_0=[1,1]").as_fan(), Some((0, 2)));
        assert_eq!(tr("2; 2,2; rho_1=[1,1]; rho_0=[1,1]").as_fan(), None);
    }

    #[test]
    fn suspension_index_counts_leading_singletons() {
        assert_eq!(NTree::linear(3).susp_index(), 3);
        assert_eq!(NTree::fan(3, 1, 2).susp_index(), 1);
        assert_eq!(tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]").susp_index(), 0);
    }

    #[test]
    fn suspension_index_of_degenerate_columns() {
        // Appending an empty level never changes the leading singleton
        // count: the column U_{n-1} with an empty top keeps index n - 1.
        for n in 1..=4 {
            let t = NTree::linear(n - 1).append_empty_level();
            assert_eq!(t.n(), n);
            assert_eq!(t.susp_index(), n - 1);
        }
        assert_eq!(NTree::linear(0).append_empty_level().append_empty_level().susp_index(), 0);
    }

    #[test]
    fn suspend_and_append_shapes() {
        let t = tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]");
        assert_eq!(t.suspend().levels(), vec![1, 1, 2, 4]);
        assert_eq!(t.suspend().susp_index(), 1);
        assert_eq!(t.append_empty_level().levels(), vec![1, 2, 4, 0]);
        assert!(t.append_empty_level().is_degenerate());
        assert_eq!(t.suspend().boundary(), NTree::fan(2, 1, 2));
        assert_eq!(t.suspend().boundary_k(3), NTree::linear(0));
        assert_eq!(t.boundary(), NTree::fan(1, 0, 2));
    }

    #[test]
    fn tensor_at_root_concatenates_branches() {
        let s = NTree::fan(2, 0, 2);
        let got = s.tensor_at(0, &NTree::linear(2)).unwrap();
        assert_eq!(got, NTree::fan(2, 0, 3));
    }

    #[test]
    fn tensor_at_level_one_interleaves_tips() {
        // Gluing two 2-level fans along their common 1-level boundary pairs
        // the tips over each shared branch.
        let s = NTree::fan(2, 0, 2);
        let got = s.tensor_at(1, &s).unwrap();
        assert_eq!(got, tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]"));
    }

    #[test]
    fn tensor_boundary_mismatch_is_an_error() {
        let a = NTree::fan(2, 0, 2);
        let b = NTree::fan(2, 0, 3);
        assert!(a.tensor_at(1, &b).is_err());
        assert!(a.tensor_at(0, &b).is_ok());
    }

    #[test]
    fn glue_reports_embeddings() {
        let s = NTree::fan(2, 0, 2);
        let (glued, emb) = NTree::glue_at(1, &[s.clone(), s.clone()]).unwrap();
        assert_eq!(glued.levels(), vec![1, 2, 4]);
        // First part's tips land at positions 1 and 3 (by branch, part, slot).
        assert_eq!(emb[0][2], vec![0, 2]);
        assert_eq!(emb[1][2], vec![1, 3]);
        assert_eq!(emb[0][1], vec![0, 1]);
    }

    #[test]
    fn canonical_decomposition_frozen_cases() {
        let t = tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]");
        let d = t.canonical_decomposition();
        assert_eq!(d.susp, 0);
        assert_eq!(d.parts, vec![NTree::fan(2, 1, 2), NTree::fan(2, 1, 2)]);

        let u = NTree::linear(3);
        let d = u.canonical_decomposition();
        assert_eq!(d.susp, 3);
        assert_eq!(d.parts, vec![u.clone()]);

        let z = NTree::linear(1).append_empty_level();
        let d = z.canonical_decomposition();
        assert_eq!((d.susp, d.parts.len()), (1, 0));

        let zz = NTree::linear(0).append_empty_level().append_empty_level();
        let d = zz.canonical_decomposition();
        assert_eq!((d.susp, d.parts.len()), (0, 0));
    }

    #[test]
    fn canonical_parts_glue_back() {
        for t in all_trees_by_nodes(2, 6) {
            let d = t.canonical_decomposition();
            if d.parts.is_empty() {
                assert!(t.is_degenerate());
                continue;
            }
            let (glued, _) = NTree::glue_at(d.susp, &d.parts).unwrap();
            assert_eq!(glued, t, "parts of {t} did not glue back");
        }
    }

    #[test]
    fn ancestors_and_meets() {
        let t = tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]");
        assert_eq!(t.ancestor(2, 0, 1), 0);
        assert_eq!(t.ancestor(2, 3, 1), 1);
        assert_eq!(t.ancestor(2, 3, 0), 0);
        assert_eq!(t.meet_level(0, 1), 1);
        assert_eq!(t.meet_level(0, 2), 0);
        assert_eq!(t.meet_level(2, 3), 1);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let reprs = [
            "0",
            "1; 3; rho_0=[1,1,1]",
            "1; 0; rho_0=[]",
            "2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]",
            "2; 0,2; rho_1=[]; rho_0=[1,1]",
            "3; 1,1,1; rho_2=[1]; rho_1=[1]; rho_0=[1]",
        ];
        for s in reprs {
            let t = tr(s);
            assert_eq!(t.to_string(), s);
        }
        assert_eq!(NTree::linear(0).to_string(), "0");
        assert!("2; 4,2; rho_1=[1,1,2,3]; rho_0=[1,1]".parse::<NTree>().is_err());
        assert!("2; 2; rho_1=[1,1]; rho_0=[1]".parse::<NTree>().is_err());
        // Non-monotone parent lists are rejected.
        assert!("2; 2,2; rho_1=[2,1]; rho_0=[1,1]".parse::<NTree>().is_err());
    }

    #[test]
    fn serde_uses_text_form() {
        let t = tr("2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]");
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, "\"2; 4,2; rho_1=[1,1,2,2]; rho_0=[1,1]\"");
        let back: NTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn enumeration_counts() {
        // Height-1 trees are ordinals: sizes 0..=4 under a 5-node budget.
        assert_eq!(all_trees_by_nodes(1, 5).len(), 5);
        // Height-2 trees with at most 7 nodes: sum over level profiles
        // (1, a, b), a + b <= 6, of the number of monotone maps b -> a.
        assert_eq!(all_trees_by_nodes(2, 7).len(), 64);
        assert_eq!(all_trees_by_nodes(0, 1), vec![NTree::linear(0)]);
        let all = all_trees_by_nodes(2, 7);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert!(all.windows(2).all(|w| w[0] != w[1]));
    }
}
