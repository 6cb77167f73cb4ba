//! The forgetful comparison onto undecorated trees and its bounded
//! finality probe.
//!
//! Forgetting decorations sends generating arrows to generating arrows:
//! contractions go to contractions along the tip map, insertions to
//! insertions.  At heights two and up the comparison is moreover final:
//! any two decorated lifts of the endpoints of an undecorated arrow sit in
//! one connected component.  The probe checks exactly that over bounded
//! enumerations; at height one it reports honest failures, because the
//! undecorated side can permute labels while the decorated side cannot.

use std::collections::BTreeMap;
use std::fmt;

use super::arrows::generating_arrows_hinf;
use super::objects::{enumerate_hinf, zeta, HInfObject};
use super::pi0::component_data;

/// Outcome of probing every undecorated generating arrow within bounds.
#[derive(Clone, Debug)]
pub struct FinalityReport {
    pub n: usize,
    pub k: usize,
    pub probe_bound: usize,
    pub vertex_bound: usize,
    pub decoration_bound: usize,
    /// Arrows probed with at least one lift on each side.
    pub probes: usize,
    /// Probes whose lifts all share a component.
    pub connected: usize,
    /// Arrows with no lift on some side within the bounds.
    pub vacuous: usize,
    /// Descriptions of the failing probes.
    pub failures: Vec<String>,
}

impl FinalityReport {
    pub fn all_connected(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for FinalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "finality probe at n={}, k={}: {}/{} probes connected, {} vacuous, {} failures \
             (probe bound {}, vertex bound {}, decoration bound {})",
            self.n,
            self.k,
            self.connected,
            self.probes,
            self.vacuous,
            self.failures.len(),
            self.probe_bound,
            self.vertex_bound,
            self.decoration_bound,
        )
    }
}

/// For every undecorated generating arrow whose source has at most
/// `probe_bound` vertices, checks that all decorated lifts of its two
/// endpoints lie in one component of the decorated category bounded by
/// `vertex_bound` and `decoration_bound`.
///
/// The probe window must sit strictly inside the connecting network:
/// lifts of a shape at the outer vertex bound have no room left for the
/// insert-then-contract zig-zags that join them, so probing the whole
/// window would report spurious splits.  Keeping `probe_bound` below
/// `vertex_bound` asks the meaningful question.
pub fn finality_probe(
    n: usize,
    k: usize,
    probe_bound: usize,
    vertex_bound: usize,
    decoration_bound: usize,
) -> FinalityReport {
    let mut data = component_data(n, k, vertex_bound, decoration_bound);
    let mut lifts: BTreeMap<HInfObject, Vec<usize>> = BTreeMap::new();
    for (i, obj) in data.objects.iter().enumerate() {
        lifts.entry(zeta(obj)).or_default().push(i);
    }

    let mut probes = 0;
    let mut connected = 0;
    let mut vacuous = 0;
    let mut failures = Vec::new();
    for shape in enumerate_hinf(k, probe_bound) {
        for arrow in generating_arrows_hinf(&shape, vertex_bound) {
            let (Some(sources), Some(targets)) =
                (lifts.get(&arrow.source), lifts.get(&arrow.target))
            else {
                vacuous += 1;
                continue;
            };
            probes += 1;
            let anchor = data.uf.find(sources[0]);
            let joined = sources
                .iter()
                .chain(targets.iter())
                .all(|&i| data.uf.find(i) == anchor);
            if joined {
                connected += 1;
            } else {
                failures.push(format!(
                    "lifts of {} -> {} split across components",
                    arrow.source, arrow.target
                ));
            }
        }
    }

    FinalityReport {
        n,
        k,
        probe_bound,
        vertex_bound,
        decoration_bound,
        probes,
        connected,
        vacuous,
        failures,
    }
}
