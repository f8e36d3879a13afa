//! Instance-by-instance verification of the closed-form results against
//! the brute-force oracle. Each instance prints one JSON verdict line
//! `{"theorem", "instance", "closed_form", "oracle", "match"}` and any
//! mismatch makes the process exit nonzero.

use crate::{CliError, LimitArgs};
use chromakh::chrompoly::{chromatic_polynomial, farrell_coefficients};
use chromakh::closedform::{self, TorsionPattern};
use chromakh::graph::{
    self, build, connected_graphs, cycle, edge_glue_k, sample_connected_graphs, GraphInvariants,
    SimpleGraph,
};
use chromakh::homcore::{self, BigradedGroups};
use chromakh::khovanov;
use clap::Args;
use num_bigint::BigInt;
use serde_json::json;

#[derive(Args)]
pub struct VerifyArgs {
    /// Theorem family: polygon, rankdiag, 4thkh, polyedge, glueshift,
    /// bridge, twocycle, patterns2, pretzel, rational, span, width, det,
    /// density, jones4, correspondence, 2tor, lemmasum.
    theorem: String,
    /// Vertex bound for enumeration sweeps (7 adds a sampled level).
    #[arg(long)]
    max_v: Option<usize>,
    /// Cycle-length range "lo..hi" for the first glued cycle.
    #[arg(long)]
    s: Option<String>,
    /// Cycle-length range "lo..hi" for the second glued cycle.
    #[arg(long)]
    t: Option<String>,
    /// Specific pretzel parameters a1,a2,a3.
    #[arg(long, value_delimiter = ',')]
    pretzel: Option<Vec<usize>>,
    /// Specific rational parameters P,Q.
    #[arg(long, value_delimiter = ',')]
    rational: Option<Vec<usize>>,
    /// Sample size at the top enumeration level (default 200).
    #[arg(long, default_value_t = 200)]
    sample: usize,
    /// Sample seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Print only the summary line.
    #[arg(long)]
    quiet: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
}

struct Verdicts {
    theorem: String,
    total: usize,
    failed: usize,
    quiet: bool,
}

impl Verdicts {
    fn new(theorem: &str, quiet: bool) -> Self {
        Verdicts {
            theorem: theorem.to_string(),
            total: 0,
            failed: 0,
            quiet,
        }
    }

    fn check(&mut self, instance: &str, closed_form: &str, oracle: &str) {
        let ok = closed_form == oracle;
        self.total += 1;
        self.failed += usize::from(!ok);
        if !self.quiet || !ok {
            println!(
                "{}",
                json!({
                    "theorem": self.theorem,
                    "instance": instance,
                    "closed_form": closed_form,
                    "oracle": oracle,
                    "match": ok,
                })
            );
        }
    }

    fn finish(self) -> Result<(), CliError> {
        println!(
            "{}",
            json!({
                "theorem": self.theorem,
                "instances": self.total,
                "failures": self.failed,
            })
        );
        if self.failed > 0 {
            Err(CliError::Mismatch)
        } else {
            Ok(())
        }
    }
}

fn parse_range(spec: &Option<String>, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    match spec {
        None => Ok(default),
        Some(s) => {
            let parts: Vec<&str> = s.split("..").collect();
            if parts.len() != 2 {
                return Err(CliError::Usage(format!("range {:?} must look like lo..hi", s)));
            }
            let lo = parts[0]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad range bound {:?}", parts[0])))?;
            let hi = parts[1]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad range bound {:?}", parts[1])))?;
            Ok((lo, hi))
        }
    }
}

/// Connected-graph sweep: exhaustive through `min(max_v, 6)`, sampled at 7.
fn sweep(min_v: usize, max_v: usize, sample: usize, seed: u64) -> Vec<SimpleGraph> {
    let mut out = Vec::new();
    for v in min_v..=max_v.min(6) {
        out.extend(connected_graphs(v));
    }
    if max_v >= 7 {
        out.extend(sample_connected_graphs(7, sample, seed));
    }
    out
}

fn graph_label(g: &SimpleGraph) -> String {
    format!("v={} edges={:?}", g.vertex_count(), g.edges())
}

pub fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    match args.theorem.as_str() {
        "polygon" => verify_polygon(&args),
        "rankdiag" => verify_rankdiag(&args),
        "4thkh" => verify_4thkh(&args),
        "polyedge" => verify_glue(&args, GlueKind::Edge),
        "glueshift" => verify_glue(&args, GlueKind::Vertex),
        "bridge" => verify_glue(&args, GlueKind::Bridge),
        "twocycle" => verify_twocycle(&args, 1),
        "patterns2" => verify_twocycle(&args, 2),
        "pretzel" => verify_pretzel(&args),
        "rational" => verify_rational(&args),
        "span" => verify_span(&args),
        "width" => verify_width(&args),
        "det" => verify_det(&args),
        "density" => verify_density(&args),
        "jones4" => verify_jones4(&args),
        "correspondence" => verify_correspondence(&args),
        "2tor" => verify_2tor(&args),
        "lemmasum" => verify_lemmasum(&args),
        "farrell" => verify_farrell(&args),
        other => Err(CliError::Usage(format!(
            "unknown theorem id {:?}; see `chromakh verify --help`",
            other
        ))),
    }
}

fn verify_polygon(args: &VerifyArgs) -> Result<(), CliError> {
    let (lo, hi) = parse_range(&args.s, (3, 8))?;
    let mut v = Verdicts::new("polygon", args.quiet);
    for n in lo..=hi {
        for m in 2..=3 {
            let cf = closedform::cycle_homology(n, m)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let bf = homcore::homology_with_limit(&cycle(n).unwrap(), m, args.limits.edges())
                .map_err(CliError::from_hom)?;
            v.check(
                &format!("cycle({}) over A_{}", n, m),
                &cf.to_json().to_string(),
                &bf.to_json().to_string(),
            );
        }
    }
    v.finish()
}

fn verify_rankdiag(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("rankdiag", args.quiet);
    for g in sweep(3, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology_low_degrees(&g, 2, 2).map_err(CliError::from_hom)?;
        let cols = closedform::low_degree_groups(&inv);
        let vv = inv.v as i32;
        let cf: Vec<String> = cols
            .iter()
            .map(|c| format!("{}/{}", c.upper.render(), c.lower.render()))
            .collect();
        let or: Vec<String> = (0..=2)
            .map(|i| {
                format!(
                    "{}/{}",
                    h.get(i, vv - i).render(),
                    h.get(i, vv - i - 1).render()
                )
            })
            .collect();
        v.check(&graph_label(&g), &cf.join(" "), &or.join(" "));
    }
    v.finish()
}

fn verify_4thkh(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("4thkh", args.quiet);
    for g in sweep(4, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let vv = inv.v as i32;
        let (rk3, t4) = closedform::third_fourth_groups(&inv);
        v.check(
            &graph_label(&g),
            &format!("rk3={} t4={}", rk3, t4),
            &format!(
                "rk3={} t4={}",
                h.get(3, vv - 3).free,
                h.get(4, vv - 4).torsion_mult(2)
            ),
        );
    }
    v.finish()
}

enum GlueKind {
    Edge,
    Vertex,
    Bridge,
}

fn verify_glue(args: &VerifyArgs, kind: GlueKind) -> Result<(), CliError> {
    let (nlo, nhi) = parse_range(&args.t, (3, 6))?;
    let name = match kind {
        GlueKind::Edge => "polyedge",
        GlueKind::Vertex => "glueshift",
        GlueKind::Bridge => "bridge",
    };
    let mut v = Verdicts::new(name, args.quiet);
    let bases = ["cycle(3)", "cycle(4)", "cycle(5)", "cycle(6)", "theta(2,2,2)"];
    for gexpr in bases {
        let g = build(gexpr).unwrap();
        let inv = GraphInvariants::compute(&g);
        let hg = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        for n in nlo..=nhi {
            let (cf, oracle_graph) = match kind {
                GlueKind::Edge => (
                    closedform::edge_glue_homology(&hg, &inv, n)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                    edge_glue_k(&g, &cycle(n).unwrap(), 1).unwrap(),
                ),
                GlueKind::Vertex => (
                    closedform::vertex_glue_homology(&hg, &inv, n)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                    graph::vertex_glue(&g, &cycle(n).unwrap()).unwrap(),
                ),
                GlueKind::Bridge => {
                    let star = closedform::vertex_glue_homology(&hg, &inv, n)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    (
                        closedform::bridge_homology(&star),
                        graph::bridge(&g, &cycle(n).unwrap()).unwrap(),
                    )
                }
            };
            let bf = homcore::homology_with_limit(&oracle_graph, 2, args.limits.edges())
                .map_err(CliError::from_hom)?;
            v.check(
                &format!("{} with P_{}", gexpr, n),
                &cf.to_json().to_string(),
                &bf.to_json().to_string(),
            );
        }
    }
    v.finish()
}

fn verify_twocycle(args: &VerifyArgs, glue: usize) -> Result<(), CliError> {
    let min = if glue == 2 { 4 } else { 3 };
    let (slo, shi) = parse_range(&args.s, (min, 7))?;
    let (tlo, thi) = parse_range(&args.t, (min, 7))?;
    let name = if glue == 2 { "patterns2" } else { "twocycle" };
    let mut v = Verdicts::new(name, args.quiet);
    for s in slo..=shi {
        for t in tlo.max(s)..=thi {
            let pat = closedform::two_cycle_torsion(s, t, glue)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let g = edge_glue_k(&cycle(s).unwrap(), &cycle(t).unwrap(), glue)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
                .map_err(CliError::from_hom)?;
            let oracle = TorsionPattern::from_homology(&h);
            let hi = pat.exponents.len().max(oracle.exponents.len()) as i32;
            let cf: Vec<usize> = (1..=hi).map(|i| pat.at(i)).collect();
            let or: Vec<usize> = (1..=hi).map(|i| oracle.at(i)).collect();
            v.check(
                &format!("P{} |^{} P{}", s, glue, t),
                &format!("{:?}", cf),
                &format!("{:?}", or),
            );
        }
    }
    v.finish()
}

/// Compares a closed-form Khovanov torsion pattern against the computed
/// Khovanov homology, by p-column inside the correspondence range.
fn check_kh_pattern(
    v: &mut Verdicts,
    instance: &str,
    pattern: &TorsionPattern,
    offsets: &closedform::KhovanovOffsets,
    d: &khovanov::LinkDiagram,
    limit: usize,
) -> Result<(), CliError> {
    let kh = khovanov::khovanov_homology_with_limit(d, limit).map_err(CliError::from_link)?;
    let by_p = kh.z2_exponents_by_i();
    let cf: Vec<usize> = (1..=offsets.girth as i32).map(|i| pattern.at(i)).collect();
    let or: Vec<usize> = (1..=offsets.girth as i32)
        .map(|i| {
            by_p.get(&(i - offsets.c_minus as i32))
                .copied()
                .unwrap_or(0)
        })
        .collect();
    v.check(instance, &format!("{:?}", cf), &format!("{:?}", or));
    Ok(())
}

fn verify_pretzel(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("pretzel", args.quiet);
    let families: Vec<Vec<usize>> = match &args.pretzel {
        Some(p) => vec![p.clone()],
        None => vec![
            vec![2, 2, 2],
            vec![3, 2, 3],
            vec![3, 2, 5],
            vec![5, 2, 3],
            vec![3, 2, 4],
            vec![4, 2, 3],
            vec![4, 2, 4],
            vec![2, 2, 4],
        ],
    };
    for params in families {
        if params.len() != 3 {
            return Err(CliError::Usage("pretzel parameters must be a1,a2,a3".into()));
        }
        let (a1, a2, a3) = (params[0], params[1], params[2]);
        let (pattern, offsets) = closedform::pretzel_torsion(a1, a2, a3)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let d = khovanov::pretzel_diagram(&params).map_err(CliError::from_link)?;
        check_kh_pattern(
            &mut v,
            &format!("pretzel (-{}, -{}, -{})", a1, a2, a3),
            &pattern,
            &offsets,
            &d,
            args.limits.crossings(),
        )?;
    }
    v.finish()
}

fn verify_rational(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("rational", args.quiet);
    let families: Vec<(usize, usize)> = match &args.rational {
        Some(r) if r.len() == 2 => vec![(r[0], r[1])],
        Some(_) => return Err(CliError::Usage("rational parameters must be P,Q".into())),
        None => vec![(3, 3), (3, 4), (4, 5), (5, 5), (3, 6), (5, 4)],
    };
    for (p, q) in families {
        let (pattern, offsets) =
            closedform::rational_torsion(p, q).map_err(|e| CliError::Usage(e.to_string()))?;
        let d = khovanov::rational_diagram(p, q).map_err(CliError::from_link)?;
        check_kh_pattern(
            &mut v,
            &format!("rational -{} {}", p, q),
            &pattern,
            &offsets,
            &d,
            args.limits.crossings(),
        )?;
    }
    v.finish()
}

fn verify_span(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("span", args.quiet);
    for g in sweep(2, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let bounds = closedform::span_bounds(&inv);
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        // hspan exact; every degree in range carries free rank; j_min = b;
        // girth - 1 is a lower bound.
        let d1 = (0..bounds.hspan as i32).all(|i| {
            h.get(i, inv.v as i32 - i).free + h.get(i, inv.v as i32 - i - 1).free > 0
        });
        v.check(
            &graph_label(&g),
            &format!(
                "hspan={} d1=true jmin={} girth_bound<=hspan=true",
                bounds.hspan, inv.blocks
            ),
            &format!(
                "hspan={} d1={} jmin={} girth_bound<=hspan={}",
                h.hspan(),
                d1,
                h.j_min().unwrap_or(-1),
                bounds.girth_lower_bound <= h.hspan()
            ),
        );
    }
    // The A_m lower bound (m = 3) on a smaller sweep.
    for g in sweep(2, max_v.min(5), args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology_with_limit(&g, 3, args.limits.edges())
            .map_err(CliError::from_hom)?;
        v.check(
            &format!("A_3 lower bound, {}", graph_label(&g)),
            "hspan >= v-b",
            if h.hspan() >= inv.v - inv.blocks {
                "hspan >= v-b"
            } else {
                "hspan < v-b"
            },
        );
    }
    v.finish()
}

fn verify_width(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(5).min(5);
    let mut v = Verdicts::new("width", args.quiet);
    for g in sweep(2, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let bounds = closedform::span_bounds(&inv);
        for m in 2..=4 {
            let h = homcore::homology_with_limit(&g, m, args.limits.edges())
                .map_err(CliError::from_hom)?;
            v.check(
                &format!("{} over A_{}", graph_label(&g), m),
                &format!("hw={}", bounds.width_m(m)),
                &format!("hw={}", h.hw_diagonal()),
            );
        }
    }
    v.finish()
}

fn verify_det(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("det", args.quiet);
    for g in sweep(1, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let p = chromatic_polynomial(&g).to_q_basis();
        let cf = closedform::reconstruct_a2_homology(&p, inv.v, inv.bipartite)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let bf = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let support_ok = support_bounds_hold(&bf, inv.v, 2);
        let tor2 = bf
            .iter()
            .all(|(_, grp)| grp.torsion.iter().all(|(o, _)| *o == 2u32.into()));
        v.check(
            &graph_label(&g),
            &format!("{} support=true z2only=true", cf.to_json()),
            &format!("{} support={} z2only={}", bf.to_json(), support_ok, tor2),
        );
    }
    v.finish()
}

pub fn support_bounds_hold(h: &BigradedGroups, v: usize, m: usize) -> bool {
    h.iter().all(|(&(i, j), grp)| {
        // For a single vertex the "i <= v - 2" bound degenerates to i = 0.
        let hi = (v as i32 - 2).max(0);
        let in_support = i >= 0
            && i <= hi
            && i + j >= v as i32 - 1
            && (m as i32 - 1) * i + j <= (m as i32 - 1) * v as i32;
        let torsion_ok = grp.torsion.is_empty() || (i >= 1 && i + j >= v as i32);
        in_support && torsion_ok
    })
}

fn verify_density(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("density", args.quiet);
    // Polygon trees are dense.
    for expr in [
        "edge_glue(cycle(3),cycle(3))",
        "edge_glue(cycle(3),edge_glue(cycle(4),cycle(5)))",
        "edge_glue(cycle(4),edge_glue(cycle(4),cycle(4)))",
        "edge_glue(cycle(6),cycle(3))",
    ] {
        let g = build(expr).unwrap();
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let rep = closedform::density_and_gaps(&h, &inv);
        v.check(
            expr,
            "dense, no gaps",
            &if rep.dense && rep.gaps.is_empty() {
                "dense, no gaps".to_string()
            } else {
                format!("dense={} gaps={:?}", rep.dense, rep.gaps)
            },
        );
    }
    // theta(2, n-2, 2): no homology at degree v - b = n, the source of
    // the Khovanov torsion gap.
    for n in 4..=7 {
        let g = graph::theta(&[2, n - 2, 2]).unwrap();
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let imax = h.i_range().map(|(_, hi)| hi).unwrap_or(0);
        v.check(
            &format!("theta(2,{},2)", n - 2),
            &format!("i_max={}", n - 1),
            &format!("i_max={}", imax),
        );
    }
    v.finish()
}

fn verify_jones4(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("jones4", args.quiet);
    // Alternating diagrams whose all-positive graph has girth >= 4.
    let diagrams: Vec<(String, khovanov::LinkDiagram)> = vec![
        ("torus(2,4)".into(), khovanov::torus_diagram(4).unwrap()),
        ("torus(2,5)".into(), khovanov::torus_diagram(5).unwrap()),
        ("torus(2,6)".into(), khovanov::torus_diagram(6).unwrap()),
        ("rational -4 4".into(), khovanov::rational_diagram(4, 4).unwrap()),
        ("rational -4 5".into(), khovanov::rational_diagram(4, 5).unwrap()),
        ("rational -5 5".into(), khovanov::rational_diagram(5, 5).unwrap()),
        ("pretzel (-2,-2,-2)".into(), khovanov::pretzel_diagram(&[2, 2, 2]).unwrap()),
    ];
    for (name, d) in diagrams {
        let g = khovanov::g_plus(&d);
        let inv = GraphInvariants::compute(&g);
        let (a, b, c, dd) = closedform::jones_coefficients(&inv)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let jones = khovanov::jones_polynomial(&d);
        let base = -(inv.v as i32) + d.positive_crossings() as i32
            - 2 * d.negative_crossings() as i32;
        let mut alpha = jones.coeff(base);
        let mut beta = jones.coeff(base + 2);
        let mut gamma = jones.coeff(base + 4);
        let mut delta = jones.coeff(base + 6);
        if alpha < BigInt::from(0) {
            alpha = -alpha;
            beta = -beta;
            gamma = -gamma;
            delta = -delta;
        }
        // Normalized coefficients: a = alpha, b = beta - a, c = gamma - b,
        // d = delta - c.
        let ob = &beta - &alpha;
        let oc = &gamma - &ob;
        let od = &delta - &oc;
        v.check(
            &name,
            &format!("({}, {}, {}, {})", a, b, c, dd),
            &format!("({}, {}, {}, {})", alpha, ob, oc, od),
        );
    }
    v.finish()
}

fn verify_correspondence(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("correspondence", args.quiet);
    let mut diagrams: Vec<(String, khovanov::LinkDiagram)> = Vec::new();
    if let Some(p) = &args.pretzel {
        diagrams.push((
            format!("pretzel {:?}", p),
            khovanov::pretzel_diagram(p).map_err(CliError::from_link)?,
        ));
    }
    if let Some(r) = &args.rational {
        if r.len() != 2 {
            return Err(CliError::Usage("rational parameters must be P,Q".into()));
        }
        diagrams.push((
            format!("rational -{} {}", r[0], r[1]),
            khovanov::rational_diagram(r[0], r[1]).map_err(CliError::from_link)?,
        ));
    }
    if diagrams.is_empty() {
        for n in 3..=6 {
            diagrams.push((format!("torus(2,{})", n), khovanov::torus_diagram(n).unwrap()));
        }
        diagrams.push((
            "pretzel (-3,-2,-3)".into(),
            khovanov::pretzel_diagram(&[3, 2, 3]).unwrap(),
        ));
        diagrams.push((
            "pretzel (-2,-2,-2)".into(),
            khovanov::pretzel_diagram(&[2, 2, 2]).unwrap(),
        ));
        diagrams.push((
            "rational -3 4".into(),
            khovanov::rational_diagram(3, 4).unwrap(),
        ));
        diagrams.push((
            "flower(3,2)".into(),
            khovanov::flower_diagram(3, 2).unwrap(),
        ));
    }
    for (name, d) in diagrams {
        let rep = khovanov::correspondence_check(&d, args.limits.crossings())
            .map_err(CliError::from_link)?;
        let expected = "groups below girth: match; torsion at girth: match; offset (0, 0)";
        let got = format!(
            "groups below girth: {}; torsion at girth: {}; offset ({}, {})",
            if rep.groups_match { "match" } else { "MISMATCH" },
            if rep.torsion_match_at_girth { "match" } else { "MISMATCH" },
            rep.offset.0,
            rep.offset.1,
        );
        v.check(&name, expected, &got);
    }
    v.finish()
}

fn verify_2tor(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("2tor", args.quiet);
    for g in sweep(2, max_v, args.sample, args.seed) {
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let bad: Vec<String> = h
            .iter()
            .flat_map(|(&(i, j), grp)| {
                grp.torsion
                    .iter()
                    .filter(|(o, _)| *o != 2u32.into())
                    .map(move |(o, m)| format!("Z_{}^{} at ({},{})", o, m, i, j))
                    .collect::<Vec<_>>()
            })
            .collect();
        v.check(
            &graph_label(&g),
            "only Z_2 torsion",
            &if bad.is_empty() {
                "only Z_2 torsion".to_string()
            } else {
                bad.join(", ")
            },
        );
    }
    v.finish()
}

fn verify_lemmasum(args: &VerifyArgs) -> Result<(), CliError> {
    let mut v = Verdicts::new("lemmasum", args.quiet);
    for expr in [
        "complete(4)",
        "theta(3,2,3)",
        "wheel(5)",
        "edge_glue(cycle(4),cycle(5))",
        "theta(2,2,2)",
    ] {
        let g = build(expr).unwrap();
        let inv = GraphInvariants::compute(&g);
        let h = homcore::homology_with_limit(&g, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let bridges: std::collections::HashSet<usize> = g.bridges().into_iter().collect();
        // First non-bridge edge.
        let (a, b) = (0..g.edge_count())
            .find(|i| !bridges.contains(i))
            .map(|i| g.edges()[i])
            .expect("fixture has a non-bridge edge");
        let contracted = g.contract_edge(a, b).unwrap();
        let deleted = g.delete_edge(a, b).unwrap();
        let hc = homcore::homology_with_limit(&contracted, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let hd = homcore::homology_with_limit(&deleted, 2, args.limits.edges())
            .map_err(CliError::from_hom)?;
        let vv = inv.v as i32;
        for i in 2..=(inv.v as i32 - 2) {
            let lhs = h.get(i, vv - i);
            let mut rhs = hc.get(i - 1, vv - i);
            let dd = hd.get(i, vv - i);
            rhs.free += dd.free;
            for (o, m) in dd.torsion {
                match rhs.torsion.iter_mut().find(|(oo, _)| *oo == o) {
                    Some((_, mm)) => *mm += m,
                    None => rhs.torsion.push((o, m)),
                }
            }
            rhs.torsion.sort();
            v.check(
                &format!("{} edge ({},{}) at i={}", expr, a, b, i),
                &lhs.render(),
                &rhs.render(),
            );
        }
    }
    v.finish()
}

fn verify_farrell(args: &VerifyArgs) -> Result<(), CliError> {
    let max_v = args.max_v.unwrap_or(6);
    let mut v = Verdicts::new("farrell", args.quiet);
    for g in sweep(4, max_v, args.sample, args.seed) {
        let inv = GraphInvariants::compute(&g);
        let p = chromatic_polynomial(&g);
        let (c0, c1, c2, c3) = farrell_coefficients(&inv);
        let vv = inv.v;
        v.check(
            &graph_label(&g),
            &format!("{} {} {} {}", c0, c1, c2, c3),
            &format!(
                "{} {} {} {}",
                p.coeff(vv),
                p.coeff(vv - 1),
                p.coeff(vv - 2),
                p.coeff(vv - 3)
            ),
        );
    }
    v.finish()
}
