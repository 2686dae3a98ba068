//! Build graphs from the named families and an Erdős–Rényi draw, then write
//! and re-read an edge list.
//!
//! cargo run --example generate_graph -- 12 0.3

use gffnet::graph::{er_connectivity_threshold, sample_erdos_renyi, GraphFamily, WeightedGraph};
use gffnet::seed;

fn main() -> gffnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(12, |s| s.parse().expect("d"));
    let p: f64 = args.next().map_or(0.3, |s| s.parse().expect("p"));

    for fam in [GraphFamily::Path, GraphFamily::Cycle, GraphFamily::Complete, GraphFamily::Star] {
        let g = WeightedGraph::family(fam, d)?;
        let l = g.laplacian();
        let max_deg = (0..d).map(|v| g.degree(v)).max().unwrap_or(0);
        println!("{fam:?}: {} edges, max degree {max_deg}, trace(L) = {}", g.edge_count(), l.matrix().trace());
    }

    let mut rng = seed::derived_stream(7, "graph", &[]);
    let g = sample_erdos_renyi(d, p, &mut rng)?;
    let thr = er_connectivity_threshold(d);
    println!("ER({d}, {p}): {} edges (expected {:.1})", g.edge_count(), p * (d * (d - 1) / 2) as f64);
    if p < thr {
        println!("p is below log(d)/d = {thr:.3}; expect isolated vertices");
    }

    let text = g.to_edge_list();
    let back: WeightedGraph = text.parse()?;
    assert_eq!(back, g);
    print!("{text}");
    Ok(())
}
