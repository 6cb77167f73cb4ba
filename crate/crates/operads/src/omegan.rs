//! Morphisms of `n`-trees.
//!
//! A morphism `T -> S` between trees of the same height is a family of
//! level maps `sigma_j : T_j -> S_j` (with `sigma_0` the identity of the
//! root) such that
//!
//! * each square over a parent map commutes: going up a level in `T` and
//!   then across agrees with going across and then up in `S`, and
//! * each `sigma_{j+1}` is weakly monotone on every sibling group of `T`
//!   (the fibers of the parent map), though not necessarily globally.
//!
//! These morphisms compose levelwise.  For height 1 they are exactly the
//! monotone maps of ordinals; in higher heights the sibling-wise condition
//! permits genuine shuffles of branches, and the combinatorics of those
//! shuffles is what the rest of the crate runs on:
//!
//! * [`TreeMorphism::tip_permutation`] sends each source tip to its position
//!   in the fiber-by-fiber ordering of tips (the permutation part of the
//!   tip-level map);
//! * [`TreeMorphism::tip_fiber`] extracts the full preimage of a tip's
//!   ancestor spine, itself a tree of the same height;
//! * [`from_fibers`] pastes prescribed fibers over a target tree back into a
//!   morphism, inverse to taking fibers;
//! * [`TreeMorphism::assembly_permutation`] rebuilds the tip shuffle by
//!   structural recursion on the target, without ever factorizing the tip
//!   map; it is the inverse of `tip_permutation`.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordmaps::{block_move, block_sum, monotone_maps, OrdMap, Perm};
use crate::trees::{LevelEmbedding, NTree};

/// A levelwise map of `n`-trees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeMorphism {
    source: NTree,
    target: NTree,
    /// `level_maps[j]` is `sigma_{j+1}`, acting on level `j + 1`.
    level_maps: Vec<OrdMap>,
}

/// The full preimage of a tip's ancestor spine, renumbered as a standalone
/// tree; `positions[j]` records which source nodes of level `j` it uses.
#[derive(Clone, Debug)]
pub struct TipFiber {
    pub tree: NTree,
    pub positions: Vec<Vec<usize>>,
}

impl TreeMorphism {
    /// Checked constructor from the maps on levels `1..=n`.
    pub fn new(source: NTree, target: NTree, level_maps: Vec<OrdMap>) -> Result<Self> {
        let n = source.n();
        if target.n() != n {
            return Err(Error::InvalidMorphism(format!(
                "source has height {} but target has height {}",
                n,
                target.n()
            )));
        }
        if level_maps.len() != n {
            return Err(Error::InvalidMorphism(format!(
                "expected {} level maps, got {}",
                n,
                level_maps.len()
            )));
        }
        for j in 0..n {
            if level_maps[j].dom() != source.level_size(j + 1)
                || level_maps[j].cod() != target.level_size(j + 1)
            {
                return Err(Error::InvalidMorphism(format!(
                    "level {} map has shape {}->{} but the trees have {}->{}",
                    j + 1,
                    level_maps[j].dom(),
                    level_maps[j].cod(),
                    source.level_size(j + 1),
                    target.level_size(j + 1)
                )));
            }
        }
        for j in 0..n {
            // Commutativity over the parent maps; on the lowest level both
            // sides collapse to the root, which the rank check already fixed.
            let down_then_across = if j == 0 {
                source.map(0).then(&OrdMap::identity(1))
            } else {
                source.map(j).then(&level_maps[j - 1])
            };
            let across_then_down = level_maps[j].then(target.map(j));
            if down_then_across != across_then_down {
                return Err(Error::InvalidMorphism(format!(
                    "level {} square does not commute",
                    j + 1
                )));
            }
            // Weak monotonicity on sibling groups.
            for p in 0..source.level_size(j) {
                let siblings = source.map(j).fiber(p);
                let mut last: Option<usize> = None;
                for &x in &siblings {
                    let v = level_maps[j].apply(x);
                    if let Some(prev) = last {
                        if v < prev {
                            return Err(Error::InvalidMorphism(format!(
                                "level {} map decreases within a sibling group",
                                j + 1
                            )));
                        }
                    }
                    last = Some(v);
                }
            }
        }
        Ok(TreeMorphism {
            source,
            target,
            level_maps,
        })
    }

    pub fn identity(tree: &NTree) -> Self {
        let level_maps = (1..=tree.n())
            .map(|j| OrdMap::identity(tree.level_size(j)))
            .collect();
        TreeMorphism {
            source: tree.clone(),
            target: tree.clone(),
            level_maps,
        }
    }

    /// The unique morphism into the linear tree of the same height.
    pub fn to_linear(tree: &NTree) -> Self {
        let level_maps = (1..=tree.n())
            .map(|j| OrdMap::terminal(tree.level_size(j)))
            .collect();
        TreeMorphism {
            source: tree.clone(),
            target: NTree::linear(tree.n()),
            level_maps,
        }
    }

    pub fn source(&self) -> &NTree {
        &self.source
    }

    pub fn target(&self) -> &NTree {
        &self.target
    }

    /// The map on level `j` (so `level_map(1)` acts just above the root).
    pub fn level_map(&self, j: usize) -> &OrdMap {
        &self.level_maps[j - 1]
    }

    pub fn level_maps(&self) -> &[OrdMap] {
        &self.level_maps
    }

    /// The map on tips; for height 0 this is the identity of the root.
    pub fn tip_map(&self) -> OrdMap {
        match self.level_maps.last() {
            Some(m) => m.clone(),
            None => OrdMap::identity(1),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.level_maps.iter().all(|m| m.is_identity())
    }

    /// Diagrammatic composition: `self` first, then `other`.
    pub fn compose(&self, other: &TreeMorphism) -> Result<TreeMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidMorphism(format!(
                "cannot compose: middle trees differ ({} vs {})",
                self.target, other.source
            )));
        }
        let level_maps = self
            .level_maps
            .iter()
            .zip(&other.level_maps)
            .map(|(a, b)| a.then(b))
            .collect();
        // Validity is preserved under composition; `new` re-checks it so a
        // regression here would surface immediately.
        TreeMorphism::new(self.source.clone(), other.target.clone(), level_maps)
    }

    /// Sends each source tip to its position in the tip ordering "fiber over
    /// target tip 1 first, then fiber over tip 2, ...": the permutation part
    /// of the tip-level map.
    pub fn tip_permutation(&self) -> Perm {
        self.tip_map().factorize().0
    }

    /// The full preimage of the ancestor spine of a target tip, renumbered.
    pub fn tip_fiber(&self, tip: usize) -> TipFiber {
        let n = self.source.n();
        let spine: Vec<Vec<usize>> = (0..=n)
            .map(|j| vec![self.target.ancestor(n, tip, j)])
            .collect();
        let (restricted, positions) = self.restrict_over(&spine);
        debug_assert!(restricted.target().is_linear());
        TipFiber {
            tree: restricted.source().clone(),
            positions,
        }
    }

    /// Restricts the morphism over a parent-closed selection of target
    /// nodes (one sorted index list per level, the root included).  The
    /// source becomes the full preimage of the selection; both sides are
    /// renumbered.  Returns the restricted morphism and the source
    /// positions that were kept.
    pub fn restrict_over(&self, selection: &[Vec<usize>]) -> (TreeMorphism, Vec<Vec<usize>>) {
        let n = self.source.n();
        assert_eq!(selection.len(), n + 1);
        assert_eq!(selection[0], vec![0], "selection must keep the root");

        // Renumbered target: position of old target node within its level.
        let mut tgt_maps = Vec::with_capacity(n);
        for j in 0..n {
            let images: Vec<usize> = selection[j + 1]
                .iter()
                .map(|&x| {
                    let parent = self.target.map(j).apply(x);
                    selection[j]
                        .iter()
                        .position(|&s| s == parent)
                        .expect("selection is not closed under parents")
                })
                .collect();
            tgt_maps.push(OrdMap::unchecked(images, selection[j].len()));
        }
        let new_target = NTree::unchecked(tgt_maps);

        // Source preimages per level, in order.
        let mut positions: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
        positions.push(vec![0]);
        for j in 1..=n {
            let keep: Vec<usize> = (0..self.source.level_size(j))
                .filter(|&x| selection[j].contains(&self.level_maps[j - 1].apply(x)))
                .collect();
            positions.push(keep);
        }

        let mut src_maps = Vec::with_capacity(n);
        let mut new_level_maps = Vec::with_capacity(n);
        for j in 0..n {
            let images: Vec<usize> = positions[j + 1]
                .iter()
                .map(|&x| {
                    let parent = self.source.map(j).apply(x);
                    positions[j]
                        .iter()
                        .position(|&s| s == parent)
                        .expect("source preimage is not closed under parents")
                })
                .collect();
            src_maps.push(OrdMap::unchecked(images, positions[j].len()));
            let sigma_images: Vec<usize> = positions[j + 1]
                .iter()
                .map(|&x| {
                    let v = self.level_maps[j].apply(x);
                    selection[j + 1].iter().position(|&s| s == v).unwrap()
                })
                .collect();
            new_level_maps.push(OrdMap::unchecked(sigma_images, selection[j + 1].len()));
        }
        let new_source = NTree::unchecked(src_maps);
        let restricted = TreeMorphism::new(new_source, new_target, new_level_maps)
            .expect("restriction of a valid morphism stays valid");
        (restricted, positions)
    }

    /// The morphism collapsing a tree onto the fan of its canonical parts:
    /// every node above the suspension level goes to its part's column.
    /// Returns the morphism together with the part embeddings of the target.
    pub fn onto_fan(tree: &NTree) -> (TreeMorphism, Vec<LevelEmbedding>) {
        let d = tree.canonical_decomposition();
        let n = tree.n();
        let l = d.susp;
        let (fan, width) = if tree.is_linear() {
            (tree.clone(), 1)
        } else {
            let w = tree.level_size(l + 1);
            (NTree::fan(n, l, w), w)
        };
        let mut level_maps = Vec::with_capacity(n);
        for j in 1..=n {
            if j <= l {
                level_maps.push(OrdMap::identity(1));
            } else {
                let images: Vec<usize> = (0..tree.level_size(j))
                    .map(|x| tree.ancestor(j, x, l + 1))
                    .collect();
                level_maps.push(OrdMap::unchecked(images, width));
            }
        }
        let embeddings = if d.parts.is_empty() {
            Vec::new()
        } else {
            NTree::glue_at(l, &d.parts)
                .expect("canonical parts glue back")
                .1
        };
        let morphism = TreeMorphism::new(tree.clone(), fan, level_maps)
            .expect("the collapse onto the fan is a valid morphism");
        (morphism, embeddings)
    }

    /// Rebuilds the inverse of [`tip_permutation`] by structural recursion
    /// on the target: it maps each position in the fiber-by-fiber tip
    /// ordering back to the tip it came from.
    ///
    /// * Over a linear or tipless target the ordering is untouched.
    /// * Over a fan, the source decomposes into a grid (fiber, column); the
    ///   fiber-major grid order is transposed into column-major order and
    ///   each column is then fixed up recursively.
    /// * Over a general target, the morphism is restricted over each
    ///   canonical part and also collapsed onto the part fan, and the two
    ///   contributions compose.
    pub fn assembly_permutation(&self) -> Perm {
        let tips = self.source.tips();
        let s = &self.target;
        if s.is_linear() || s.is_degenerate() {
            return Perm::identity(tips);
        }
        if let Some((pivot, width)) = s.as_fan() {
            let m = self.source.susp_index();
            if m >= pivot {
                return Perm::identity(tips);
            }
            let fibers: Vec<NTree> = (0..width).map(|i| self.tip_fiber(i).tree).collect();
            let grid: Vec<Vec<NTree>> = fibers
                .iter()
                .map(|f| {
                    let d = f.canonical_decomposition();
                    debug_assert_eq!(d.susp, m);
                    d.parts
                })
                .collect();
            let columns = grid[0].len();
            debug_assert!(grid.iter().all(|row| row.len() == columns));
            // Block transpose: fiber-major (fiber, column) grid positions go
            // to column-major ones.
            let mut tau = vec![0; width * columns];
            for i in 0..width {
                for c in 0..columns {
                    tau[i * columns + c] = c * width + i;
                }
            }
            let mut sizes = Vec::with_capacity(width * columns);
            for row in &grid {
                for part in row {
                    sizes.push(part.tips());
                }
            }
            let transpose = block_move(&Perm::new(tau).unwrap(), &sizes);

            let mut column_fixes = Vec::with_capacity(columns);
            for c in 0..columns {
                let column: Vec<NTree> = (0..width).map(|i| grid[i][c].clone()).collect();
                let (_, phi) = from_fibers(s, &column)
                    .expect("column parts share all levels below the fan pivot");
                column_fixes.push(phi.assembly_permutation());
            }
            return transpose.then(&block_sum(&column_fixes));
        }
        // General target: split along its canonical parts.
        let (omega, embeddings) = TreeMorphism::onto_fan(s);
        let composed = self
            .compose(&omega)
            .expect("collapse composes with any morphism into the tree");
        let mut part_chis = Vec::with_capacity(embeddings.len());
        for emb in &embeddings {
            let (restricted, _) = self.restrict_over(emb);
            part_chis.push(restricted.assembly_permutation());
        }
        block_sum(&part_chis).then(&composed.assembly_permutation())
    }
}

/// All morphisms from `source` to `target`, enumerated sibling group by
/// sibling group, in lexicographic order of their level maps.
pub fn hom(source: &NTree, target: &NTree) -> Vec<TreeMorphism> {
    let n = source.n();
    if target.n() != n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut acc: Vec<OrdMap> = Vec::with_capacity(n);
    fn extend_level(
        source: &NTree,
        target: &NTree,
        acc: &mut Vec<OrdMap>,
        out: &mut Vec<TreeMorphism>,
    ) {
        let n = source.n();
        let j = acc.len(); // building sigma_{j+1}
        if j == n {
            out.push(
                TreeMorphism::new(source.clone(), target.clone(), acc.clone())
                    .expect("enumerated level maps satisfy the morphism conditions"),
            );
            return;
        }
        // For each node p of source level j, the siblings above p must land
        // weakly monotonically in the target siblings above sigma_j(p).
        let parent_image = |p: usize| -> usize {
            if j == 0 {
                0
            } else {
                acc[j - 1].apply(p)
            }
        };
        let mut per_fiber: Vec<Vec<Vec<usize>>> = Vec::new();
        for p in 0..source.level_size(j) {
            let siblings = source.map(j).fiber(p);
            let choices = target.map(j).fiber(parent_image(p));
            if siblings.is_empty() {
                per_fiber.push(vec![Vec::new()]);
                continue;
            }
            if choices.is_empty() {
                return; // dead branch: nothing to map the siblings to
            }
            let assignments: Vec<Vec<usize>> = monotone_maps(siblings.len(), choices.len())
                .into_iter()
                .map(|m| m.images().iter().map(|&v| choices[v]).collect())
                .collect();
            per_fiber.push(assignments);
        }
        // Cartesian product over the sibling groups; fibers of a monotone
        // parent map are consecutive, so concatenation is in node order.
        let mut idx = vec![0usize; per_fiber.len()];
        loop {
            let mut images = Vec::with_capacity(source.level_size(j + 1));
            for (p, fiber_choices) in per_fiber.iter().enumerate() {
                images.extend_from_slice(&fiber_choices[idx[p]]);
            }
            acc.push(OrdMap::unchecked(images, target.level_size(j + 1)));
            extend_level(source, target, acc, out);
            acc.pop();

            let mut p = per_fiber.len();
            loop {
                if p == 0 {
                    return;
                }
                p -= 1;
                if idx[p] + 1 < per_fiber[p].len() {
                    idx[p] += 1;
                    for q in p + 1..per_fiber.len() {
                        idx[q] = 0;
                    }
                    break;
                }
            }
        }
    }
    extend_level(source, target, &mut acc, &mut out);
    out.sort();
    out
}

/// Pastes prescribed tip fibers over a target tree into a morphism: the
/// result maps a glued source onto `target` and its tip fibers are exactly
/// the given trees, in tip order.
///
/// Adjacent fibers overlap below the level where their target tips branch
/// apart, so they must agree there; mismatched fibers are rejected.
pub fn from_fibers(target: &NTree, fibers: &[NTree]) -> Result<(NTree, TreeMorphism)> {
    let n = target.n();
    if fibers.len() != target.tips() {
        return Err(Error::InvalidMorphism(format!(
            "target has {} tips but {} fibers were given",
            target.tips(),
            fibers.len()
        )));
    }
    for f in fibers {
        if f.n() != n {
            return Err(Error::InvalidMorphism(format!(
                "fiber {} does not have height {}",
                f, n
            )));
        }
    }
    if target.is_degenerate() {
        return Ok((target.clone(), TreeMorphism::identity(target)));
    }
    if target.is_linear() {
        let t = fibers[0].clone();
        let m = TreeMorphism::to_linear(&t);
        return Ok((t, m));
    }

    let d = target.canonical_decomposition();
    let l = d.susp;
    let (reglued, tgt_emb) = NTree::glue_at(l, &d.parts).expect("canonical parts glue back");
    debug_assert_eq!(&reglued, target);

    // Target tips grouped by their part (consecutive, in part order).
    let mut groups: Vec<Vec<NTree>> = vec![Vec::new(); d.parts.len()];
    for (tip, f) in fibers.iter().enumerate() {
        let part = target.ancestor(n, tip, l + 1);
        groups[part].push(f.clone());
    }

    let mut pieces = Vec::with_capacity(d.parts.len());
    let mut piece_maps = Vec::with_capacity(d.parts.len());
    for (part, group) in d.parts.iter().zip(&groups) {
        let (piece, phi) = from_fibers(part, group)?;
        pieces.push(piece);
        piece_maps.push(phi);
    }

    let (glued, src_emb) = NTree::glue_at(l, &pieces)?;
    let mut level_maps = Vec::with_capacity(n);
    for j in 1..=n {
        if j <= l {
            level_maps.push(OrdMap::terminal(glued.level_size(j)));
        } else {
            let mut images = vec![usize::MAX; glued.level_size(j)];
            for (c, phi) in piece_maps.iter().enumerate() {
                for i in 0..pieces[c].level_size(j) {
                    images[src_emb[c][j][i]] = tgt_emb[c][j][phi.level_map(j).apply(i)];
                }
            }
            debug_assert!(images.iter().all(|&v| v != usize::MAX));
            level_maps.push(OrdMap::unchecked(images, target.level_size(j)));
        }
    }
    let morphism = TreeMorphism::new(glued.clone(), target.clone(), level_maps)?;
    Ok((glued, morphism))
}

impl fmt::Display for TreeMorphism {
    /// Text form `source | target | sigma_n=[..]; ...; sigma_1=[..]` with
    /// 1-based image lists, top level first; a height-0 morphism writes its
    /// (empty) map list as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | ", self.source, self.target)?;
        if self.level_maps.is_empty() {
            return write!(f, "-");
        }
        for j in (1..=self.level_maps.len()).rev() {
            write!(f, "sigma_{j}=[")?;
            for (i, &v) in self.level_maps[j - 1].images().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, "]")?;
            if j > 1 {
                write!(f, "; ")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TreeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeMorphism({self})")
    }
}

impl FromStr for TreeMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected 'source | target | maps', got {s:?}"
            )));
        }
        let source: NTree = parts[0].parse()?;
        let target: NTree = parts[1].parse()?;
        let n = source.n();
        let mut level_maps = vec![None; n];
        if parts[2] != "-" && !parts[2].is_empty() {
            for seg in parts[2].split(';') {
                let seg = seg.trim();
                let (label, body) = seg
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected sigma_j=[..] in {seg:?}")))?;
                let j: usize = label
                    .strip_prefix("sigma_")
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad level label {label:?}")))?;
                if j == 0 || j > n {
                    return Err(Error::Parse(format!("level {j} out of range in {s:?}")));
                }
                let inner = body
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("expected bracketed list in {seg:?}")))?;
                let mut images = Vec::new();
                if !inner.trim().is_empty() {
                    for item in inner.split(',') {
                        let v: usize = item
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad image {item:?} in {s:?}")))?;
                        if v == 0 {
                            return Err(Error::Parse(format!("images are 1-based in {s:?}")));
                        }
                        images.push(v - 1);
                    }
                }
                level_maps[j - 1] = Some(OrdMap::new(images, target.level_size(j))?);
            }
        }
        let level_maps: Vec<OrdMap> = level_maps
            .into_iter()
            .enumerate()
            .map(|(j, m)| m.ok_or_else(|| Error::Parse(format!("missing sigma_{} in {s:?}", j + 1))))
            .collect::<Result<_>>()?;
        TreeMorphism::new(source, target, level_maps)
    }
}

impl Serialize for TreeMorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TreeMorphism {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}
