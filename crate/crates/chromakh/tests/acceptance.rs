//! Acceptance suite: one test per release criterion, each printing a
//! single PASS line with its measured scope. Every tolerance here is
//! exact equality of groups, coefficients or patterns.
//!
//! The two heaviest checks honor the resource budgets by reading
//! `CHROMAKH_ACCEPT_HEAVY`: set it to `0` to run the reduced variants
//! (Table 2 stays exact; the 16-crossing link degrades to 12 crossings,
//! reported explicitly).

use chromakh::chrompoly::{chromatic_polynomial, farrell_coefficients};
use chromakh::closedform::{self, TorsionPattern};
use chromakh::graph::{
    build, connected_graphs, cycle, edge_glue_k, sample_connected_graphs, theta, vertex_glue,
    GraphInvariants, SimpleGraph,
};
use chromakh::homcore::{self, GroupData};
use chromakh::khovanov;
use std::time::Instant;

fn heavy_enabled() -> bool {
    std::env::var("CHROMAKH_ACCEPT_HEAVY").map_or(true, |v| v != "0")
}

fn sweep_v_le(limit: usize) -> Vec<SimpleGraph> {
    let mut out = Vec::new();
    for v in 1..=limit {
        out.extend(connected_graphs(v));
    }
    out
}

/// Criterion 1: the cycle closed form equals the oracle for
/// n in 3..=8, m in {2, 3}, group by group.
#[test]
fn criterion_1_cycle_closed_form() {
    let t0 = Instant::now();
    for n in 3..=8 {
        for m in 2..=3 {
            let cf = closedform::cycle_homology(n, m).unwrap();
            let bf = homcore::homology(&cycle(n).unwrap(), m).unwrap();
            assert_eq!(cf, bf, "cycle({}) over A_{}", n, m);
        }
    }
    println!(
        "PASS criterion 1: cycle closed form == oracle for n in 3..=8, m in 2..=3 ({:?})",
        t0.elapsed()
    );
}

/// Criterion 2: the chromatic homology of four squares glued at a
/// vertex contains exactly the published groups.
#[test]
fn criterion_2_four_squares_table() {
    let t0 = Instant::now();
    let g = build("vertex_glue(vertex_glue(vertex_glue(cycle(4),cycle(4)),cycle(4)),cycle(4))")
        .unwrap();
    let h = homcore::homology(&g, 2).unwrap();
    let z = GroupData::free;
    let zt = |f: usize, t: usize| {
        let mut g = GroupData::free(f);
        g.torsion.push((2u32.into(), t));
        g
    };
    assert_eq!(h.get(0, 13), z(1));
    assert_eq!(h.get(1, 12), z(4));
    assert_eq!(h.get(2, 11), zt(6, 4));
    assert_eq!(h.get(2, 10), z(4));
    assert_eq!(h.get(3, 10), zt(10, 6));
    assert_eq!(h.get(3, 9), z(6));
    assert_eq!(h.get(4, 9), zt(9, 10));
    assert_eq!(h.get(4, 8), z(10));
    println!(
        "PASS criterion 2: published chromatic table of P4*P4*P4*P4 reproduced exactly ({:?})",
        t0.elapsed()
    );
}

/// Criterion 3: (a) chromatic torsion of theta(3,2,3) is (1,1,2,2,1) at
/// i = 1..5; (b) the Khovanov torsion of the 8-crossing (-3,-2,-3)
/// pretzel matches its published row; (c) the correspondence reports
/// torsion isomorphism exactly on i = 1..5.
#[test]
fn criterion_3_theta_and_pretzel() {
    let t0 = Instant::now();
    // (a)
    let g = build("theta(3,2,3)").unwrap();
    let hg = homcore::homology(&g, 2).unwrap();
    let by_i = hg.z2_exponents_by_i();
    let chromatic: Vec<usize> = (1..=5).map(|i| by_i.get(&i).copied().unwrap_or(0)).collect();
    assert_eq!(chromatic, vec![1, 1, 2, 2, 1]);
    assert!(by_i.keys().all(|&i| (1..=5).contains(&i)));

    // (b) published torsion row at p = -5..2: the global grading shift
    // comes out at zero offset once the diagram is oriented.
    let d = khovanov::pretzel_diagram(&[3, 2, 3]).unwrap();
    let kh = khovanov::khovanov_homology(&d).unwrap();
    let kt = kh.z2_exponents_by_i();
    let row: Vec<usize> = (-5..=2).map(|p| kt.get(&p).copied().unwrap_or(0)).collect();
    assert_eq!(row, vec![1, 1, 2, 2, 1, 2, 0, 1]);

    // (c)
    let rep = khovanov::correspondence_check(&d, 16).unwrap();
    assert!(!rep.vacuous);
    assert_eq!(rep.girth, 5);
    assert!(rep.groups_match, "offset found: {:?}", rep.offset);
    assert!(rep.torsion_match_at_girth);
    assert_eq!(rep.offset, (0, 0));
    println!(
        "PASS criterion 3: theta(3,2,3) torsion row, pretzel Khovanov row, and the \
         correspondence on i = 1..5 all reproduced at zero offset ({:?})",
        t0.elapsed()
    );
}

/// Criterion 4: the full determination pipeline on every connected graph
/// with v <= 6 plus a 200-graph sample at v = 7: reconstruction from the
/// chromatic polynomial equals the oracle, all torsion is Z_2, the span
/// is v - b with free rank in every degree, j_min = b, and the support
/// bounds hold.
#[test]
fn criterion_4_determination_pipeline() {
    let t0 = Instant::now();
    let mut graphs = sweep_v_le(6);
    graphs.extend(sample_connected_graphs(7, 200, 42));
    let count = graphs.len();
    for g in graphs {
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology(&g, 2).unwrap();
        // Thm Det pipeline.
        let p = chromatic_polynomial(&g).to_q_basis();
        let rec = closedform::reconstruct_a2_homology(&p, inv.v, inv.bipartite).unwrap();
        assert_eq!(rec, h, "reconstruction differs on {}", g);
        // Only Z_2 torsion.
        assert!(
            h.iter()
                .all(|(_, grp)| grp.torsion.iter().all(|(o, _)| *o == 2u32.into())),
            "non-Z_2 torsion on {}",
            g
        );
        // Span, D1, j_min.
        let span = inv.v - inv.blocks;
        assert_eq!(h.hspan(), span, "span differs on {}", g);
        for i in 0..span as i32 {
            assert!(
                h.get(i, inv.v as i32 - i).free + h.get(i, inv.v as i32 - i - 1).free > 0,
                "no free summand at degree {} of {}",
                i,
                g
            );
        }
        assert_eq!(h.j_min(), Some(inv.blocks as i32), "j_min differs on {}", g);
        // Support bounds.
        for (&(i, j), grp) in h.iter() {
            assert!(i >= 0 && i <= (inv.v as i32 - 2).max(0));
            assert!(i + j >= inv.v as i32 - 1);
            assert!(i + j <= inv.v as i32);
            if !grp.torsion.is_empty() {
                assert!(i >= 1 && i + j >= inv.v as i32);
            }
        }
        // Tail multiplicity.
        let k = closedform::tail(&g);
        if span >= 1 {
            let imax = span as i32 - 1;
            assert_eq!(h.get(imax, inv.blocks as i32).free, k, "tail rank on {}", g);
            if imax >= 1 {
                assert_eq!(
                    h.get(imax, inv.blocks as i32 + 1).torsion_mult(2),
                    k,
                    "tail torsion on {}",
                    g
                );
            }
        }
    }
    println!(
        "PASS criterion 4: determination pipeline exact on {} graphs (v <= 6 exhaustive \
         + 200 sampled at v = 7) ({:?})",
        count,
        t0.elapsed()
    );
}

/// Criterion 5: gluing formulas agree with the oracle for cycles C3..C6
/// and theta(2,2,2) with attached cycles n in 3..=6, and the two-cycle
/// torsion patterns agree on 3 <= s <= t <= 7 (4 <= s for the two-edge
/// gluing).
#[test]
fn criterion_5_gluing_theorems() {
    let t0 = Instant::now();
    let bases = ["cycle(3)", "cycle(4)", "cycle(5)", "cycle(6)", "theta(2,2,2)"];
    for expr in bases {
        let g = build(expr).unwrap();
        let inv = GraphInvariants::compute(&g);
        let hg = homcore::homology(&g, 2).unwrap();
        for n in 3..=6 {
            let edge = closedform::edge_glue_homology(&hg, &inv, n).unwrap();
            let glued = edge_glue_k(&g, &cycle(n).unwrap(), 1).unwrap();
            assert_eq!(edge, homcore::homology(&glued, 2).unwrap(), "{}|P{}", expr, n);

            let star = closedform::vertex_glue_homology(&hg, &inv, n).unwrap();
            let vglued = vertex_glue(&g, &cycle(n).unwrap()).unwrap();
            assert_eq!(star, homcore::homology(&vglued, 2).unwrap(), "{}*P{}", expr, n);

            let bridged = closedform::bridge_homology(&star);
            let bgraph = chromakh::graph::bridge(&g, &cycle(n).unwrap()).unwrap();
            assert_eq!(
                bridged,
                homcore::homology(&bgraph, 2).unwrap(),
                "{} bridge P{}",
                expr,
                n
            );
        }
    }
    for s in 3..=7usize {
        for t in s..=7 {
            let pat = closedform::two_cycle_torsion(s, t, 1).unwrap();
            let g = edge_glue_k(&cycle(s).unwrap(), &cycle(t).unwrap(), 1).unwrap();
            let h = homcore::homology(&g, 2).unwrap();
            assert!(pat.matches_homology(&h), "P{}|P{}", s, t);
            if s >= 4 {
                let pat = closedform::two_cycle_torsion(s, t, 2).unwrap();
                let g = edge_glue_k(&cycle(s).unwrap(), &cycle(t).unwrap(), 2).unwrap();
                let h = homcore::homology(&g, 2).unwrap();
                assert!(pat.matches_homology(&h), "P{}|^2P{}", s, t);
            }
        }
    }
    println!(
        "PASS criterion 5: gluing formulas and two-cycle torsion patterns exact \
         on all stated families ({:?})",
        t0.elapsed()
    );
}

/// Criterion 6: the leading-coefficient formulas (with the -2 k4 term)
/// match the chromatic polynomial, and the third/fourth group formulas
/// match the oracle, over connected graphs with 4 <= v <= 6 plus the
/// v = 7 sample.
#[test]
fn criterion_6_coefficient_formulas() {
    let t0 = Instant::now();
    let mut graphs: Vec<SimpleGraph> = Vec::new();
    for v in 4..=6 {
        graphs.extend(connected_graphs(v));
    }
    graphs.extend(sample_connected_graphs(7, 200, 42));
    let count = graphs.len();
    for g in &graphs {
        let inv = GraphInvariants::compute(g);
        let p = chromatic_polynomial(g);
        let (c0, c1, c2, c3) = farrell_coefficients(&inv);
        assert_eq!(c0, p.coeff(inv.v), "c_v on {}", g);
        assert_eq!(c1, p.coeff(inv.v - 1), "c_(v-1) on {}", g);
        assert_eq!(c2, p.coeff(inv.v - 2), "c_(v-2) on {}", g);
        assert_eq!(c3, p.coeff(inv.v - 3), "c_(v-3) on {}", g);

        let h = homcore::homology(g, 2).unwrap();
        let (rk3, t4) = closedform::third_fourth_groups(&inv);
        assert_eq!(rk3, h.get(3, inv.v as i32 - 3).free as i64, "rank on {}", g);
        assert_eq!(
            t4,
            h.get(4, inv.v as i32 - 4).torsion_mult(2) as i64,
            "torsion on {}",
            g
        );
    }
    println!(
        "PASS criterion 6: coefficient formulas exact on {} graphs ({:?})",
        count,
        t0.elapsed()
    );
}

/// Criterion 7: Khovanov sanity. The graded Euler characteristic equals
/// the Kauffman state sum on every fixture; the unknot gives Z at
/// (0, +-1); two distinct trefoil PD codes give identical groups.
#[test]
fn criterion_7_khovanov_sanity() {
    let t0 = Instant::now();
    let fixtures: Vec<(String, khovanov::LinkDiagram)> = vec![
        ("unknot".into(), khovanov::LinkDiagram::parse("O").unwrap()),
        ("torus(2,2)".into(), khovanov::torus_diagram(2).unwrap()),
        ("torus(2,3)".into(), khovanov::torus_diagram(3).unwrap()),
        ("torus(2,4)".into(), khovanov::torus_diagram(4).unwrap()),
        ("torus(2,5)".into(), khovanov::torus_diagram(5).unwrap()),
        ("torus(2,7)".into(), khovanov::torus_diagram(7).unwrap()),
        ("pretzel(2,2,2)".into(), khovanov::pretzel_diagram(&[2, 2, 2]).unwrap()),
        ("pretzel(3,2,3)".into(), khovanov::pretzel_diagram(&[3, 2, 3]).unwrap()),
        ("rational(3,4)".into(), khovanov::rational_diagram(3, 4).unwrap()),
        ("rational(4,5)".into(), khovanov::rational_diagram(4, 5).unwrap()),
        ("flower(3,2)".into(), khovanov::flower_diagram(3, 2).unwrap()),
        (
            "figure-eight".into(),
            khovanov::LinkDiagram::parse("X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 2\nX 2 7 3 8").unwrap(),
        ),
    ];
    for (name, d) in &fixtures {
        assert!(d.crossing_count() <= 10);
        let h = khovanov::khovanov_homology(d).unwrap();
        assert_eq!(
            khovanov::kh_euler_characteristic(&h),
            khovanov::jones_polynomial(d),
            "chi_q != state sum for {}",
            name
        );
    }

    let unknot = khovanov::khovanov_homology(&fixtures[0].1).unwrap();
    assert_eq!(unknot.get(0, 1), GroupData::free(1));
    assert_eq!(unknot.get(0, -1), GroupData::free(1));
    assert_eq!(unknot.iter().count(), 2);

    // Two different PD codes of the left trefoil: the 3-crossing torus
    // code and a 4-crossing code with an extra kink on one arc (the
    // crossing-count shifts cancel through c_plus and c_minus).
    let t3 = khovanov::torus_diagram(3).unwrap();
    let kinked = {
        let max_arc = t3
            .crossings()
            .iter()
            .flat_map(|c| c.arcs)
            .max()
            .unwrap();
        let target = t3.crossings()[0].arcs[0];
        let (loop_arc, cont) = (max_arc + 1, max_arc + 2);
        let mut crossings: Vec<[usize; 4]> =
            t3.crossings().iter().map(|c| c.arcs).collect();
        // Split the first occurrence of `target` and route it through a
        // one-crossing loop.
        crossings[0][0] = cont;
        crossings.push([target, loop_arc, loop_arc, cont]);
        khovanov::LinkDiagram::new(crossings, 0).unwrap()
    };
    assert_eq!(kinked.crossing_count(), 4);
    let h1 = khovanov::khovanov_homology(&t3).unwrap();
    let h2 = khovanov::khovanov_homology(&kinked).unwrap();
    assert_eq!(h1, h2, "trefoil homology must not depend on the PD code");
    println!(
        "PASS criterion 7: Euler characteristics equal state sums on {} fixtures; unknot \
         and Reidemeister-equivalent trefoil codes verified ({:?})",
        fixtures.len(),
        t0.elapsed()
    );
}

/// Criterion 8: homological width equals (m-2) v + 2 for m in {2, 3, 4}
/// over every connected graph with v <= 5.
#[test]
fn criterion_8_width() {
    let t0 = Instant::now();
    let graphs: Vec<SimpleGraph> = (2..=5).flat_map(connected_graphs).collect();
    let count = graphs.len();
    for g in &graphs {
        let inv = GraphInvariants::compute(g);
        let bounds = closedform::span_bounds(&inv);
        for m in 2..=4 {
            let h = homcore::homology(g, m).unwrap();
            assert_eq!(h.hw_diagonal(), bounds.width_m(m), "{} over A_{}", g, m);
        }
    }
    println!(
        "PASS criterion 8: width (m-2)v + 2 exact for m in 2..=4 on {} graphs ({:?})",
        count,
        t0.elapsed()
    );
}

/// Criterion 9: A_3 distinguishing at v = 6 finds split cochromatic
/// classes, including the published class separated by H^(1,9).
#[test]
fn criterion_9_a3_distinguishing() {
    let t0 = Instant::now();
    let graphs = connected_graphs(6);
    let mut classes: std::collections::BTreeMap<String, Vec<&SimpleGraph>> = Default::default();
    for g in &graphs {
        classes
            .entry(chromatic_polynomial(g).display_with("lambda"))
            .or_default()
            .push(g);
    }
    let target = "lambda^6 - 10lambda^5 + 41lambda^4 - 84lambda^3 + 84lambda^2 - 32lambda";
    let members = classes.get(target).expect("published cochromatic class exists");
    assert!(members.len() >= 2);
    let mut groups_at_19: Vec<String> = members
        .iter()
        .map(|g| {
            homcore::homology_low_degrees(g, 3, 1)
                .unwrap()
                .get(1, 9)
                .render()
        })
        .collect();
    groups_at_19.sort();
    assert!(
        groups_at_19.contains(&"Z^7 + Z_3^3".to_string()),
        "got {:?}",
        groups_at_19
    );
    assert!(
        groups_at_19.contains(&"Z^8 + Z_3^3".to_string()),
        "got {:?}",
        groups_at_19
    );
    // At least one split class overall (this one).
    println!(
        "PASS criterion 9: v = 6 cochromatic class with the published polynomial splits \
         by H^(1,9) over A_3 into {:?} ({:?})",
        groups_at_19,
        t0.elapsed()
    );
}

/// Criterion 10 (stretch, resource-gated): the correspondence-range
/// cells of the Khovanov homology of the 16-crossing flower link match
/// the published values. With CHROMAKH_ACCEPT_HEAVY=0 the check degrades
/// to the 12-crossing variant and says so.
#[test]
fn criterion_10_flower_khovanov() {
    let t0 = Instant::now();
    if heavy_enabled() {
        let d = khovanov::flower_diagram(4, 4).unwrap();
        assert_eq!(d.crossing_count(), 16);
        assert_eq!(d.negative_crossings(), 16);
        let h = khovanov::khovanov_homology_with_limit(&d, 16).unwrap();
        let zt = |f: usize, t: usize| {
            let mut g = GroupData::free(f);
            if t > 0 {
                g.torsion.push((2u32.into(), t));
            }
            g
        };
        // Published cells in the correspondence range (zero offset).
        assert_eq!(h.get(-16, -45), zt(1, 0));
        assert_eq!(h.get(-16, -43), zt(1, 0));
        assert_eq!(h.get(-15, -43), zt(4, 0));
        assert_eq!(h.get(-14, -41), zt(6, 4));
        assert_eq!(h.get(-14, -39), zt(4, 0));
        assert_eq!(h.get(-13, -39), zt(10, 6));
        assert_eq!(h.get(-13, -37), zt(6, 0));
        assert_eq!(h.get(-12, -37).torsion_mult(2), 10);
        // The full correspondence statement for i < 4 plus torsion at 4.
        let rep = khovanov::correspondence_check(&d, 16).unwrap();
        assert!(rep.groups_match && rep.torsion_match_at_girth);
        assert_eq!(rep.offset, (0, 0));
        println!(
            "PASS criterion 10: 16-crossing LD_4 computed in full; published boldface \
             cells reproduced at zero offset ({:?})",
            t0.elapsed()
        );
    } else {
        let d = khovanov::flower_diagram(3, 4).unwrap();
        assert_eq!(d.crossing_count(), 12);
        let rep = khovanov::correspondence_check(&d, 16).unwrap();
        assert!(rep.groups_match && rep.torsion_match_at_girth);
        assert_eq!(rep.offset, (0, 0));
        println!(
            "PASS criterion 10 (REDUCED): 16-crossing budget declined via \
             CHROMAKH_ACCEPT_HEAVY=0; 12-crossing LD_3 correspondence verified instead ({:?})",
            t0.elapsed()
        );
    }
}
