//! Every map of finite ordinals splits uniquely into a fiber-order
//! preserving permutation followed by a monotone map.  This walks the
//! factorization on a concrete map, checks the compatibility law for a
//! composite against its two-sided recombination, and brute-forces
//! uniqueness on a small range.

use operads::ordmaps::{monotone_maps, pisigma_sides, preserves_fiber_order, OrdMap, Perm};

fn main() {
    let sigma: OrdMap = "[2,1,2]:3->2".parse().unwrap();
    let (pi, nu) = sigma.factorize();
    println!("sigma          = {sigma}");
    println!("permutation    = {pi}");
    println!("monotone part  = {nu}");
    assert_eq!(pi.as_map().then(&nu), sigma);
    assert!(nu.is_monotone());
    assert!(preserves_fiber_order(&pi, &sigma));

    // Uniqueness by exhaustion: no other permutation preserves the fiber
    // order of sigma.
    let alternatives = Perm::all(3)
        .into_iter()
        .filter(|p| p != &pi && preserves_fiber_order(p, &sigma))
        .count();
    println!("other fiber-order-preserving permutations: {alternatives}");
    assert_eq!(alternatives, 0);

    // The permutation parts of a composite of monotone maps satisfy a
    // two-sided compatibility; its two sides are rebuilt here for one
    // composable pair and compared.
    let omega: OrdMap = "[1,1,2]:3->2".parse().unwrap();
    let tau: OrdMap = "[1,2,2]:3->3".parse().unwrap();
    let (lhs, rhs) = pisigma_sides(&tau, &omega).unwrap();
    println!("compatibility sides for {tau} then {omega}: {lhs} vs {rhs}");
    assert_eq!(lhs, rhs);

    // The same law holds for every composable monotone pair up to size 3.
    let mut pairs = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            for s in monotone_maps(a, b) {
                for c in 0..=3 {
                    for w in monotone_maps(b, c) {
                        let (l, r) = pisigma_sides(&s, &w).unwrap();
                        assert_eq!(l, r, "compatibility fails for {s} then {w}");
                        pairs += 1;
                    }
                }
            }
        }
    }
    println!("checked {pairs} composable monotone pairs up to size 3");
}
