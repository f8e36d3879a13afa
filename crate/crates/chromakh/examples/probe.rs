use chromakh::khovanov::*;
use chromakh::graph::sample_connected_graphs;
use chromakh::homcore;
use std::time::Instant;

fn main() {
    // LD_3 first (12 crossings), then the v=7 sample, then LD_4.
    let t0 = Instant::now();
    let d3 = flower_diagram(3, 4).unwrap();
    let h3 = khovanov_homology_with_limit(&d3, 16).unwrap();
    println!("LD_3 Kh in {:?}, {} groups", t0.elapsed(), h3.iter().count());

    let t0 = Instant::now();
    let sample = sample_connected_graphs(7, 200, 42);
    let mut worst = std::time::Duration::ZERO;
    for (k, g) in sample.iter().enumerate() {
        let t1 = Instant::now();
        let h = homcore::homology(g, 2).unwrap();
        let dt = t1.elapsed();
        if dt > worst { worst = dt; eprintln!("  slowest so far: graph {} E={} in {:?}", k, g.edge_count(), dt); }
        drop(h);
    }
    println!("v=7 sample of 200 in {:?} (worst single: {:?})", t0.elapsed(), worst);

    let t0 = Instant::now();
    let d4 = flower_diagram(4, 4).unwrap();
    let h4 = khovanov_homology_with_limit(&d4, 16).unwrap();
    println!("LD_4 Kh in {:?}, {} groups", t0.elapsed(), h4.iter().count());
    for (&(p, q), g) in h4.iter() {
        println!("  Kh({},{}) = {}", p, q, g.render());
    }
}
