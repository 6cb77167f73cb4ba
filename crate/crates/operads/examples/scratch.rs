use std::time::Instant;

use operads::hcat::{finality_probe, nerve_compare, pi0, NerveBounds};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let which = args.first().map(String::as_str).unwrap_or("pi0");
    match which {
        "pi0" => {
            for &(n, k, vb, db) in &[
                (2usize, 2usize, 2usize, 5usize),
                (2, 2, 3, 5),
                (2, 2, 3, 6),
                (2, 2, 4, 5),
            ] {
                let t = Instant::now();
                let r = pi0(n, k, vb, db);
                println!("{r}   [{:?}]", t.elapsed());
            }
        }
        "pi0big" => {
            for &(n, k, vb, db) in &[
                (2usize, 2usize, 4usize, 6usize),
                (2, 3, 3, 6),
                (2, 3, 4, 6),
            ] {
                let t = Instant::now();
                let r = pi0(n, k, vb, db);
                println!("{r}   [{:?}]", t.elapsed());
            }
        }
        "pi0one" => {
            let n: usize = args[1].parse().unwrap();
            let k: usize = args[2].parse().unwrap();
            let vb: usize = args[3].parse().unwrap();
            let db: usize = args[4].parse().unwrap();
            let t = Instant::now();
            let r = pi0(n, k, vb, db);
            println!("{r}   [{:?}]", t.elapsed());
        }
        "nerve" => {
            for &(k, p, vb, db, gb) in &[
                (1usize, 0usize, 2usize, 3usize, 2usize),
                (1, 1, 2, 3, 2),
                (2, 0, 2, 3, 2),
                (2, 1, 2, 3, 2),
                (2, 0, 3, 3, 2),
                (2, 1, 3, 3, 2),
                (2, 0, 3, 4, 2),
                (2, 1, 3, 4, 2),
            ] {
                let bounds = NerveBounds {
                    vertex_bound: vb,
                    decoration_bound: db,
                    gen_bound: gb,
                };
                let t = Instant::now();
                match nerve_compare(1, k, p, &bounds) {
                    Ok((lhs, rhs)) => println!(
                        "nerve n=1 k={k} p={p} vb={vb} db={db} gb={gb}: lhs={lhs} rhs={rhs} {}  [{:?}]",
                        if lhs == rhs { "MATCH" } else { "MISMATCH" },
                        t.elapsed()
                    ),
                    Err(e) => println!("nerve n=1 k={k} p={p}: error {e}"),
                }
            }
        }
        "finality" => {
            let n: usize = args[1].parse().unwrap();
            let k: usize = args[2].parse().unwrap();
            let pb: usize = args[3].parse().unwrap();
            let vb: usize = args[4].parse().unwrap();
            let db: usize = args[5].parse().unwrap();
            let t = Instant::now();
            let r = finality_probe(n, k, pb, vb, db);
            println!("{r}   [{:?}]", t.elapsed());
            for f in r.failures.iter().take(10) {
                println!("  {f}");
            }
        }
        other => eprintln!("unknown mode {other}"),
    }
}
