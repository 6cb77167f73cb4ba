//! Maps of finite ordinals and the permutation operad.
//!
//! An [`OrdMap`] is a function `{0,..,n-1} -> {0,..,k-1}` stored as its image
//! vector.  Everything is 0-based internally; the text format is 1-based, so
//! the map sending `0,1,2` to `1,0,1` prints as `[2,1,2]:3->2`.
//!
//! Composition is diagrammatic throughout the crate: `f.then(&g)` (or the
//! checked [`OrdMap::compose`]) applies `f` first, so `f.then(&g)` sends `p`
//! to `g(f(p))`.
//!
//! The central fact used everywhere else is unique factorization: every map
//! `sigma` splits as a permutation followed by a monotone map,
//! `sigma = pi(sigma) . nu(sigma)`, where `pi(sigma)` is the unique
//! permutation that is order-preserving on every fiber of `sigma`.  See
//! [`OrdMap::factorize`].

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A function between finite ordinals, stored as its vector of images.
///
/// `images[p]` is the image of `p`; the domain is `images.len()` and the
/// codomain is `cod`.  All values satisfy `images[p] < cod`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdMap {
    images: Vec<usize>,
    cod: usize,
}

impl OrdMap {
    /// Checked constructor; every image must be `< cod`.
    pub fn new(images: Vec<usize>, cod: usize) -> Result<Self> {
        for (index, &value) in images.iter().enumerate() {
            if value >= cod {
                return Err(Error::ImageOutOfRange { index, value, cod });
            }
        }
        Ok(OrdMap { images, cod })
    }

    /// Constructor for callers that guarantee the range invariant structurally.
    pub(crate) fn unchecked(images: Vec<usize>, cod: usize) -> Self {
        debug_assert!(images.iter().all(|&v| v < cod));
        OrdMap { images, cod }
    }

    pub fn identity(n: usize) -> Self {
        OrdMap {
            images: (0..n).collect(),
            cod: n,
        }
    }

    /// The unique map `n -> 1` (total for `n = 0` as well).
    pub fn terminal(n: usize) -> Self {
        OrdMap {
            images: vec![0; n],
            cod: 1,
        }
    }

    /// The monotone surjection with prescribed fiber sizes: `sizes[i]` many
    /// points map to `i`.
    pub fn from_fiber_sizes(sizes: &[usize]) -> Self {
        let mut images = Vec::with_capacity(sizes.iter().sum());
        for (i, &s) in sizes.iter().enumerate() {
            images.extend(std::iter::repeat(i).take(s));
        }
        OrdMap {
            images,
            cod: sizes.len(),
        }
    }

    pub fn dom(&self) -> usize {
        self.images.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    /// Diagrammatic composition, checked: `self` first, then `other`.
    pub fn compose(&self, other: &OrdMap) -> Result<OrdMap> {
        if self.cod != other.dom() {
            return Err(Error::ComposeMismatch {
                lhs_cod: self.cod,
                rhs_dom: other.dom(),
            });
        }
        Ok(self.then(other))
    }

    /// Diagrammatic composition for callers that know the ranks line up.
    pub fn then(&self, other: &OrdMap) -> OrdMap {
        assert_eq!(
            self.cod,
            other.dom(),
            "ordinal map composition rank mismatch"
        );
        OrdMap {
            images: self.images.iter().map(|&p| other.images[p]).collect(),
            cod: other.cod,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.images.len() && self.images.iter().enumerate().all(|(p, &v)| p == v)
    }

    pub fn is_monotone(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_bijection(&self) -> bool {
        if self.cod != self.images.len() {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &v in &self.images {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// Positions mapping to `i`, in increasing order.
    pub fn fiber(&self, i: usize) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == i)
            .map(|(p, _)| p)
            .collect()
    }

    /// All fiber sizes at once; the result has length `cod`.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cod];
        for &v in &self.images {
            sizes[v] += 1;
        }
        sizes
    }

    /// Restriction of `self` over a sorted subset `targets` of the codomain:
    /// the induced map from the preimage of `targets` to `targets`, with both
    /// sides renumbered consecutively.  Also returns the preimage positions.
    pub fn restriction_over(&self, targets: &[usize]) -> (OrdMap, Vec<usize>) {
        debug_assert!(targets.windows(2).all(|w| w[0] < w[1]));
        let mut rank = vec![usize::MAX; self.cod];
        for (r, &t) in targets.iter().enumerate() {
            rank[t] = r;
        }
        let mut images = Vec::new();
        let mut positions = Vec::new();
        for (p, &v) in self.images.iter().enumerate() {
            if rank[v] != usize::MAX {
                images.push(rank[v]);
                positions.push(p);
            }
        }
        (
            OrdMap {
                images,
                cod: targets.len(),
            },
            positions,
        )
    }

    /// Unique factorization `self = pi . nu` with `pi` a permutation and `nu`
    /// monotone.  `pi` is order-preserving on every fiber of `self`, sending
    /// the fiber over `i` onto the `i`-th constant block of `nu`.
    pub fn factorize(&self) -> (Perm, OrdMap) {
        let sizes = self.fiber_sizes();
        let mut starts = vec![0; self.cod + 1];
        for i in 0..self.cod {
            starts[i + 1] = starts[i] + sizes[i];
        }
        let mut next = starts.clone();
        let mut pi = vec![0; self.images.len()];
        for (p, &v) in self.images.iter().enumerate() {
            pi[p] = next[v];
            next[v] += 1;
        }
        let nu = OrdMap::from_fiber_sizes(&sizes);
        (Perm { images: pi }, nu)
    }

    /// The permutation part of the factorization.
    pub fn pi(&self) -> Perm {
        self.factorize().0
    }

    /// The monotone part of the factorization.
    pub fn nu(&self) -> OrdMap {
        self.factorize().1
    }
}

impl fmt::Display for OrdMap {
    /// 1-based text form, e.g. `[2,1,2]:3->2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]:{}->{}", self.images.len(), self.cod)
    }
}

impl fmt::Debug for OrdMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrdMap({self})")
    }
}

fn parse_bracketed_list(s: &str) -> Result<(Vec<usize>, &str)> {
    let s = s.trim();
    let rest = s
        .strip_prefix('[')
        .ok_or_else(|| Error::Parse(format!("expected '[' in {s:?}")))?;
    let close = rest
        .find(']')
        .ok_or_else(|| Error::Parse(format!("missing ']' in {s:?}")))?;
    let body = &rest[..close];
    let tail = &rest[close + 1..];
    let mut values = Vec::new();
    if !body.trim().is_empty() {
        for item in body.split(',') {
            let n: usize = item
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad entry {item:?} in {s:?}")))?;
            if n == 0 {
                return Err(Error::Parse(format!("entries are 1-based in {s:?}")));
            }
            values.push(n - 1);
        }
    }
    Ok((values, tail))
}

impl FromStr for OrdMap {
    type Err = Error;

    /// Parses the 1-based text form `[2,1,2]:3->2` (the empty map of
    /// codomain `k` is `[]:0->k`).
    fn from_str(s: &str) -> Result<Self> {
        let (images, tail) = parse_bracketed_list(s)?;
        let tail = tail
            .trim()
            .strip_prefix(':')
            .ok_or_else(|| Error::Parse(format!("expected ':dom->cod' in {s:?}")))?;
        let (dom_s, cod_s) = tail
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("expected '->' in {s:?}")))?;
        let dom: usize = dom_s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad domain in {s:?}")))?;
        let cod: usize = cod_s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad codomain in {s:?}")))?;
        if dom != images.len() {
            return Err(Error::Parse(format!(
                "domain {dom} does not match {} listed images in {s:?}",
                images.len()
            )));
        }
        OrdMap::new(images, cod)
    }
}

impl Serialize for OrdMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrdMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// A permutation of `{0,..,n-1}`, stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &v)| p == v)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (p, &v) in self.images.iter().enumerate() {
            inv[v] = p;
        }
        Perm { images: inv }
    }

    /// Diagrammatic composition: `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "permutation rank mismatch");
        Perm {
            images: self.images.iter().map(|&p| other.images[p]).collect(),
        }
    }

    pub fn as_map(&self) -> OrdMap {
        OrdMap::unchecked(self.images.clone(), self.images.len())
    }

    pub fn from_map(map: &OrdMap) -> Result<Self> {
        if !map.is_bijection() {
            return Err(Error::NotAPermutation(map.to_string()));
        }
        Ok(Perm {
            images: map.images().to_vec(),
        })
    }

    /// All permutations of `{0,..,n-1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
            if images.len() == n {
                out.push(Perm {
                    images: images.clone(),
                });
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    images.push(v);
                    rec(n, images, used, out);
                    images.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut images, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Perm {
    /// 1-based text form, e.g. `[2,1,3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (images, tail) = parse_bracketed_list(s)?;
        if !tail.trim().is_empty() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Perm::new(images)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Whether `pi` is order-preserving on every fiber of `sigma`: for positions
/// `p < q` with `sigma(p) == sigma(q)`, also `pi(p) < pi(q)`.  This is the
/// side condition that makes the permutation-then-monotone factorization of
/// `sigma` unique.
pub fn preserves_fiber_order(pi: &Perm, sigma: &OrdMap) -> bool {
    let n = sigma.dom();
    debug_assert_eq!(pi.n(), n);
    for p in 0..n {
        for q in p + 1..n {
            if sigma.apply(p) == sigma.apply(q) && pi.apply(p) > pi.apply(q) {
                return false;
            }
        }
    }
    true
}

/// Direct sum of permutations: each `blocks[i]` permutes its own consecutive
/// block of the total.
pub fn block_sum(blocks: &[Perm]) -> Perm {
    let total: usize = blocks.iter().map(|b| b.n()).sum();
    let mut images = Vec::with_capacity(total);
    let mut offset = 0;
    for b in blocks {
        images.extend(b.images.iter().map(|&v| v + offset));
        offset += b.n();
    }
    Perm { images }
}

/// The permutation of `sizes[0] + .. + sizes[k-1]` points that moves the
/// `b`-th block (of size `sizes[b]`) to the position prescribed by
/// `sigma(b)`, keeping each block's interior order.
pub fn block_move(sigma: &Perm, sizes: &[usize]) -> Perm {
    assert_eq!(sigma.n(), sizes.len(), "block count mismatch");
    let k = sizes.len();
    let mut base = vec![0; k];
    for b in 0..k {
        base[b] = (0..k)
            .filter(|&j| sigma.images[j] < sigma.images[b])
            .map(|j| sizes[j])
            .sum();
    }
    let mut images = Vec::with_capacity(sizes.iter().sum());
    for b in 0..k {
        images.extend((0..sizes[b]).map(|o| base[b] + o));
    }
    Perm { images }
}

/// Operadic composition in the permutation operad: substitute `blocks[i]`
/// into the `i`-th input of `sigma`.  Equals the block sum of the inner
/// permutations followed by the block move along `sigma`.
pub fn gamma(sigma: &Perm, blocks: &[Perm]) -> Perm {
    assert_eq!(sigma.n(), blocks.len(), "gamma arity mismatch");
    let sizes: Vec<usize> = blocks.iter().map(|b| b.n()).collect();
    block_sum(blocks).then(&block_move(sigma, &sizes))
}

/// All maps `dom -> cod` in lexicographic order of image vectors.
pub fn all_maps(dom: usize, cod: usize) -> Vec<OrdMap> {
    if dom == 0 {
        return vec![OrdMap::unchecked(Vec::new(), cod)];
    }
    if cod == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut images = vec![0; dom];
    loop {
        out.push(OrdMap::unchecked(images.clone(), cod));
        let mut p = dom;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if images[p] + 1 < cod {
                images[p] += 1;
                for q in p + 1..dom {
                    images[q] = 0;
                }
                break;
            }
        }
    }
}

/// All weakly monotone maps `dom -> cod`, in lexicographic order.
pub fn monotone_maps(dom: usize, cod: usize) -> Vec<OrdMap> {
    let mut out = Vec::new();
    if cod == 0 && dom > 0 {
        return out;
    }
    let mut images = Vec::with_capacity(dom);
    fn rec(dom: usize, cod: usize, low: usize, images: &mut Vec<usize>, out: &mut Vec<OrdMap>) {
        if images.len() == dom {
            out.push(OrdMap::unchecked(images.clone(), cod));
            return;
        }
        for v in low..cod {
            images.push(v);
            rec(dom, cod, v, images, out);
            images.pop();
        }
    }
    rec(dom, cod, 0, &mut images, &mut out);
    out
}

/// Compatibility of `factorize` with composition.  For `sigma: n -> k`
/// followed by `omega: k -> m`, the permutation part of the composite can be
/// computed from the parts: writing `sigma_i` for the restriction of `sigma`
/// over the fiber of `omega` at `i`, both of
///
/// * `pi(sigma . omega)` followed by the block sum of the `pi(sigma_i)`
///   (blocks laid out in the fiber order of `sigma . omega`), and
/// * `pi(sigma)` followed by the block move of the sigma-fibers along
///   `pi(omega)`
///
/// must agree.  Returns the two sides for inspection.
pub fn pisigma_sides(sigma: &OrdMap, omega: &OrdMap) -> Result<(Perm, Perm)> {
    if sigma.cod() != omega.dom() {
        return Err(Error::ComposeMismatch {
            lhs_cod: sigma.cod(),
            rhs_dom: omega.dom(),
        });
    }
    let composite = sigma.then(omega);

    let mut inner = Vec::with_capacity(omega.cod());
    for i in 0..omega.cod() {
        let (sigma_i, _) = sigma.restriction_over(&omega.fiber(i));
        inner.push(sigma_i.pi());
    }
    let lhs = composite.pi().then(&block_sum(&inner));

    let fiber_blocks: Vec<Perm> = sigma
        .fiber_sizes()
        .iter()
        .map(|&s| Perm::identity(s))
        .collect();
    let rhs = sigma.pi().then(&gamma(&omega.pi(), &fiber_blocks));

    Ok((lhs, rhs))
}

/// Checks the identity documented on [`pisigma_sides`].
pub fn verify_pisigma(sigma: &OrdMap, omega: &OrdMap) -> Result<bool> {
    let (lhs, rhs) = pisigma_sides(sigma, omega)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn om(s: &str) -> OrdMap {
        s.parse().unwrap()
    }

    fn pm(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn compose_applies_left_map_first() {
        let f = om("[1,2,1]:3->2");
        let g = om("[1,1]:2->1");
        assert_eq!(f.compose(&g).unwrap(), om("[1,1,1]:3->1"));

        let h = om("[2,1]:2->2");
        // (f then h)(1) = h(f(1)) = h(1) = 2 in 1-based terms.
        assert_eq!(f.compose(&h).unwrap(), om("[1,2,1]:3->2").then(&h));
        assert_eq!(f.then(&h).images(), &[1, 0, 1]);
    }

    #[test]
    fn compose_rank_mismatch_is_an_error() {
        let f = om("[1,2,1]:3->2");
        let g = om("[1,1,1]:3->1");
        assert!(f.compose(&g).is_err());
    }

    #[test]
    fn factorize_frozen_example() {
        // [2,1,2] = [2,1,3] . [1,2,2] with the permutation order-preserving
        // on both fibers.
        let sigma = om("[2,1,2]:3->2");
        let (pi, nu) = sigma.factorize();
        assert_eq!(pi, pm("[2,1,3]"));
        assert_eq!(nu, om("[1,2,2]:3->2"));
        assert_eq!(pi.as_map().then(&nu), sigma);
    }

    #[test]
    fn factorize_identity_and_bijections() {
        let id = OrdMap::identity(4);
        let (pi, nu) = id.factorize();
        assert!(pi.is_identity());
        assert!(nu.is_identity());

        // A bijection factors as itself followed by the identity.
        let b = om("[3,1,2]:3->3");
        let (pi, nu) = b.factorize();
        assert_eq!(pi.as_map(), b);
        assert!(nu.is_identity());

        // A monotone map factors as identity followed by itself.
        let m = om("[1,1,2]:3->2");
        let (pi, nu) = m.factorize();
        assert!(pi.is_identity());
        assert_eq!(nu, m);
    }

    #[test]
    fn factorization_is_unique_small() {
        // Brute force: for each map there is exactly one pair (permutation,
        // monotone map) composing to it with the permutation order-preserving
        // on every fiber.  Larger ranges are covered by the acceptance suite.
        for n in 0..=3 {
            for k in 0..=3 {
                for sigma in all_maps(n, k) {
                    let mut found = Vec::new();
                    for pi in Perm::all(n) {
                        for nu in monotone_maps(n, k) {
                            if pi.as_map().then(&nu) == sigma
                                && preserves_fiber_order(&pi, &sigma)
                            {
                                found.push((pi.clone(), nu));
                            }
                        }
                    }
                    assert_eq!(found.len(), 1, "factorizations of {sigma}");
                    assert_eq!((found[0].0.clone(), found[0].1.clone()), sigma.factorize());
                }
            }
        }
    }

    #[test]
    fn block_move_keeps_interior_order() {
        let mv = block_move(&pm("[2,1]"), &[1, 2]);
        assert_eq!(mv, pm("[3,1,2]"));
    }

    #[test]
    fn gamma_strand_diagram() {
        // Substituting (21), (12), (1) into (132) braids five strands into
        // [2,1,4,5,3].
        let got = gamma(&pm("[1,3,2]"), &[pm("[2,1]"), pm("[1,2]"), pm("[1]")]);
        assert_eq!(got, pm("[2,1,4,5,3]"));
    }

    #[test]
    fn gamma_with_identity_blocks_is_a_block_move() {
        let got = gamma(&pm("[2,1]"), &[Perm::identity(1), Perm::identity(2)]);
        assert_eq!(got, pm("[3,1,2]"));
    }

    #[test]
    fn gamma_unit_laws() {
        let sigma = pm("[3,1,2]");
        let ones: Vec<Perm> = (0..3).map(|_| Perm::identity(1)).collect();
        assert_eq!(gamma(&sigma, &ones), sigma);

        let tau = pm("[2,1,3]");
        assert_eq!(gamma(&Perm::identity(1), &[tau.clone()]), tau);
    }

    #[test]
    fn gamma_associativity_small() {
        // gamma(gamma(s; t); u-grouped) == gamma(s; gamma(t_i; u-group_i))
        // over all shapes with outer arity 2 and inner arities <= 2.
        for s in Perm::all(2) {
            for t1 in Perm::all(2) {
                for t2 in Perm::all(1) {
                    let inner = [t1.clone(), t2.clone()];
                    let mid = gamma(&s, &inner);
                    for u in [pm("[1,2]"), pm("[2,1]")] {
                        let blocks = [u.clone(), pm("[1]"), pm("[1]")];
                        let lhs = gamma(&mid, &blocks);
                        // Regroup the three unit-level blocks along the
                        // original arities 2 + 1.
                        let g1 = gamma(&t1, &[blocks[0].clone(), blocks[1].clone()]);
                        let g2 = gamma(&t2, &[blocks[2].clone()]);
                        let rhs = gamma(&s, &[g1, g2]);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn pisigma_on_monotone_pairs_is_trivial() {
        // Monotone maps have identity permutation parts, so both sides are
        // built from identities; the identity still has to hold.
        for sigma in monotone_maps(3, 2) {
            for omega in monotone_maps(2, 2) {
                assert!(verify_pisigma(&sigma, &omega).unwrap());
            }
        }
    }

    #[test]
    fn pisigma_frozen_nonmonotone_instances() {
        // sigma = [1,2,1]: 3->2 followed by the swap omega = [2,1].
        let sigma = om("[1,2,1]:3->2");
        let omega = om("[2,1]:2->2");
        let (lhs, rhs) = pisigma_sides(&sigma, &omega).unwrap();
        assert_eq!(lhs, pm("[2,1,3]"));
        assert_eq!(rhs, pm("[2,1,3]"));

        let sigma = om("[2,1]:2->2");
        assert!(verify_pisigma(&sigma, &omega).unwrap());
    }

    #[test]
    fn pisigma_exhaustive_small() {
        for n in 0..=3 {
            for k in 0..=3 {
                for m in 1..=3 {
                    for sigma in all_maps(n, k) {
                        for omega in all_maps(k, m) {
                            assert!(
                                verify_pisigma(&sigma, &omega).unwrap(),
                                "pisigma failed for {sigma} then {omega}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_over_renumbers() {
        let sigma = om("[3,1,3,2]:4->3");
        let (restr, positions) = sigma.restriction_over(&[0, 2]);
        assert_eq!(positions, vec![0, 1, 2]);
        assert_eq!(restr, om("[2,1,2]:3->2"));
    }

    #[test]
    fn enumerators_have_expected_counts() {
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(all_maps(3, 2).len(), 8);
        assert_eq!(all_maps(0, 2).len(), 1);
        assert_eq!(all_maps(2, 0).len(), 0);
        // C(n + k - 1, n) weakly monotone maps.
        assert_eq!(monotone_maps(3, 2).len(), 4);
        assert_eq!(monotone_maps(2, 4).len(), 10);
        assert_eq!(monotone_maps(0, 3).len(), 1);
        assert!(monotone_maps(4, 3).iter().all(|m| m.is_monotone()));
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["[2,1,2]:3->2", "[]:0->2", "[1]:1->1", "[4,4,1,2]:4->4"] {
            let m: OrdMap = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert_eq!(pm("[2,1,3]").to_string(), "[2,1,3]");
        assert!("[0,1]:2->2".parse::<OrdMap>().is_err());
        assert!("[3,1]:2->2".parse::<OrdMap>().is_err());
        assert!("[2,1]:3->2".parse::<OrdMap>().is_err());
        assert!("[2,2]".parse::<Perm>().is_err());
    }

    #[test]
    fn serde_uses_text_form() {
        let m = om("[2,1,2]:3->2");
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "\"[2,1,2]:3->2\"");
        let back: OrdMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    fn arb_ordmap(max_dom: usize, max_cod: usize) -> impl Strategy<Value = OrdMap> {
        (1..=max_cod).prop_flat_map(move |cod| {
            proptest::collection::vec(0..cod, 0..=max_dom)
                .prop_map(move |images| OrdMap::unchecked(images, cod))
        })
    }

    proptest! {
        #[test]
        fn prop_parse_inverts_display(m in arb_ordmap(6, 6)) {
            let parsed: OrdMap = m.to_string().parse().unwrap();
            prop_assert_eq!(parsed, m);
        }

        #[test]
        fn prop_factorize_recomposes(m in arb_ordmap(7, 5)) {
            let (pi, nu) = m.factorize();
            prop_assert!(nu.is_monotone());
            prop_assert_eq!(pi.as_map().then(&nu), m);
        }

        #[test]
        fn prop_compose_associative(
            f_img in proptest::collection::vec(0..4usize, 0..=5),
            g_img in proptest::collection::vec(0..3usize, 4),
            h_img in proptest::collection::vec(0..6usize, 3),
        ) {
            let f = OrdMap::unchecked(f_img, 4);
            let g = OrdMap::unchecked(g_img, 3);
            let h = OrdMap::unchecked(h_img, 6);
            prop_assert_eq!(f.then(&g).then(&h), f.then(&g.then(&h)));
        }
    }
}
