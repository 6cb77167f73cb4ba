//! DOT and CSV renderings of the bounded categories and their counts.

use std::fmt::Write as _;

use crate::error::Result;

use super::arrows::{generating_arrows, ArrowWitness};
use super::nerve::{nerve_compare, NerveBounds};
use super::objects::enumerate_hn;
use super::pi0::pi0;

/// Renders the bounded decorated category as a DOT digraph: objects as
/// nodes labelled by their summaries, contractions as solid edges and
/// unit insertions as dashed ones.
pub fn dot_category(n: usize, k: usize, vertex_bound: usize, decoration_bound: usize) -> String {
    let objects = enumerate_hn(n, k, vertex_bound, decoration_bound);
    let index: std::collections::BTreeMap<_, _> = objects
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "digraph category_n{n}_k{k} {{\n  rankdir=LR;\n  node [shape=box, fontsize=10];"
    );
    for (i, obj) in objects.iter().enumerate() {
        let label = obj.to_string().replace('"', "\\\"");
        let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
    }
    for (i, obj) in objects.iter().enumerate() {
        for arrow in generating_arrows(n, obj, vertex_bound, decoration_bound) {
            let Some(&j) = index.get(&arrow.target) else {
                continue;
            };
            let style = match arrow.witness {
                ArrowWitness::Contraction { .. } => "solid",
                ArrowWitness::UnitInsertion { .. } => "dashed",
            };
            let _ = writeln!(out, "  v{i} -> v{j} [style={style}];");
        }
    }
    out.push_str("}\n");
    out
}

/// Component counts for every vertex bound up to `max_vertex_bound`, one
/// CSV row per bound.
pub fn csv_pi0(n: usize, k: usize, max_vertex_bound: usize, decoration_bound: usize) -> String {
    let mut out =
        String::from("n,k,vertex_bound,decoration_bound,objects,edges,components,stabilized\n");
    for vb in 1..=max_vertex_bound {
        let report = pi0(n, k, vb, decoration_bound);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            report.n,
            report.k,
            report.vertex_bound,
            report.decoration_bound,
            report.objects,
            report.edges,
            report.components,
            report.stabilized,
        );
    }
    out
}

/// Nerve comparison counts for every degree up to `max_degree`, one CSV
/// row per degree.
pub fn csv_nerve(
    n: usize,
    k: usize,
    max_degree: usize,
    bounds: &NerveBounds,
) -> Result<String> {
    let mut out = String::from("n,k,degree,lhs,rhs,matched\n");
    for p in 0..=max_degree {
        let (lhs, rhs) = nerve_compare(n, k, p, bounds)?;
        let _ = writeln!(out, "{n},{k},{p},{lhs},{rhs},{}", lhs == rhs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_output_is_wellformed_and_deterministic() {
        let dot = dot_category(1, 1, 2, 2);
        assert!(dot.starts_with("digraph category_n1_k1 {"));
        assert!(dot.ends_with("}\n"));
        assert!(dot.contains("style=solid"));
        assert!(dot.contains("style=dashed"));
        assert_eq!(dot, dot_category(1, 1, 2, 2));
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        assert_eq!(nodes, enumerate_hn(1, 1, 2, 2).len());
    }

    #[test]
    fn pi0_csv_has_one_row_per_bound() {
        let csv = csv_pi0(1, 1, 3, 2);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("n,k,"));
        assert!(lines[1].starts_with("1,1,1,2,"));
        assert!(lines[3].starts_with("1,1,3,2,"));
    }

    #[test]
    fn nerve_csv_has_one_row_per_degree() {
        let bounds = NerveBounds {
            vertex_bound: 2,
            decoration_bound: 2,
            gen_bound: 1,
        };
        let csv = csv_nerve(1, 1, 1, &bounds).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,1,0,"));
        assert!(lines[2].starts_with("1,1,1,"));
    }
}
