use anyhow::{anyhow, bail, Context, Result};
use num_traits::ToPrimitive;
use serde_json::json;

use mothergraph::electric::{
    effective_resistance_exact, effective_resistance_float, Resistance, WeightedGraph,
};
use mothergraph::fuzz::random_instance;
use mothergraph::mothercuts::{
    lemma_membership_check, recurrence_experiment, theorem_bound, weight_sum_over_cutsets,
    CutsetEngine, SolverMode, SolverOutcome,
};
use mothergraph::nashwilliams::{optimal_allocation_exact, wnw_bound};
use mothergraph::schreier::{build_from_action, build_from_criterion, build_projected, Network};
use mothergraph::words::TreeShape;
use mothergraph::Rat;

use crate::format::{self, rat_string};
use crate::{
    BoundArgs, BoundMode, BuildArgs, Command, Mode, ResistArgs, ScalingArgs, ShapeArgs,
    VerifyArgs, VerifySuite,
};

/// Core errors carry Display but not std::error::Error (the library is
/// no_std); lift them into anyhow by message.
fn ah(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("{e}")
}

pub fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Build(a) => cmd_build(a),
        Command::Resist(a) => cmd_resist(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scaling(a) => cmd_scaling(a),
    }
}

fn parse_sizes(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|p| p.trim().parse().with_context(|| format!("bad digit size {p:?}")))
        .collect()
}

fn shape_of(args: &ShapeArgs, n: usize) -> Result<TreeShape> {
    if let Some(list) = &args.m_list {
        TreeShape::explicit(&parse_sizes(list)?, n).map_err(ah)
    } else {
        TreeShape::repeating(&parse_sizes(&args.m)?, n).map_err(ah)
    }
}

/// Position-set grammar: comma-separated values or half-open `lo..hi` ranges.
fn parse_positions(spec: &str) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().with_context(|| format!("bad range {item:?}"))?;
            let hi: u64 = hi.trim().parse().with_context(|| format!("bad range {item:?}"))?;
            if lo >= hi {
                bail!("empty range {item:?}");
            }
            out.push((lo, hi));
        } else {
            let p: u64 = item.parse().with_context(|| format!("bad position {item:?}"))?;
            out.push((p, p + 1));
        }
    }
    Ok(out)
}

fn select(positions: &[u64], ranges: &[(u64, u64)]) -> Vec<usize> {
    (0..positions.len())
        .filter(|&v| ranges.iter().any(|&(lo, hi)| positions[v] >= lo && positions[v] < hi))
        .collect()
}

fn build_network(d: i32, shape: &TreeShape, n: usize, raw: bool, cap: usize) -> Result<Network> {
    if raw {
        build_from_criterion(d, shape, n, cap).map_err(ah)
    } else {
        build_projected(d, shape, n, cap).map_err(ah)
    }
}

fn cmd_build(args: BuildArgs) -> Result<i32> {
    let shape = shape_of(&args.shape, args.n)?;
    let net = build_network(args.d, &shape, args.n, args.raw, args.cap)?;
    let text = serde_json::to_string_pretty(&format::graph_to_json(&net))? + "\n";
    format::write_output(args.out.as_deref(), &text)?;
    if let Some(dot) = &args.dot {
        std::fs::write(dot, format::graph_to_dot(&net))
            .with_context(|| format!("writing {}", dot.display()))?;
    }
    eprintln!("graph: {} vertices, {} edges", net.vertices.len(), net.edges.len());
    Ok(0)
}

fn cmd_resist(args: ResistArgs) -> Result<i32> {
    let (g, positions) = if let Some(path) = &args.graph {
        let (_, loaded) = format::load_graph(path)?;
        (loaded.graph, loaded.positions)
    } else {
        let n = args.n.expect("clap enforces --n without --graph");
        let shape = shape_of(&args.shape, n)?;
        let net = build_network(args.d.unwrap(), &shape, n, args.raw, args.cap)?;
        let g = WeightedGraph::from_network(&net);
        let positions = net
            .linear_positions()
            .unwrap_or_else(|_| (0..g.n as u64).collect());
        (g, positions)
    };
    let a = select(&positions, &parse_positions(&args.a)?);
    let b = select(&positions, &parse_positions(&args.b)?);
    if a.is_empty() || b.is_empty() {
        bail!("a vertex set is empty; positions run 0..{}", positions.len());
    }
    let (value, code) = match args.mode {
        Mode::Exact => match effective_resistance_exact(&g, &a, &b).map_err(ah)? {
            Resistance::Finite(r) => (json!({ "res": rat_string(&r) }), 0),
            Resistance::Infinite => (json!({ "res": "inf" }), 3),
        },
        Mode::Float => {
            let fr = effective_resistance_float(&g, &a, &b).map_err(ah)?;
            if fr.value.is_finite() {
                (json!({ "res": fr.value, "residual": fr.residual }), 0)
            } else {
                (json!({ "res": "inf" }), 3)
            }
        }
    };
    format::write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&value)? + "\n"))?;
    Ok(code)
}

fn solver_string(outcome: &SolverOutcome) -> String {
    match outcome {
        SolverOutcome::Exact(Resistance::Finite(r)) => rat_string(r),
        SolverOutcome::Exact(Resistance::Infinite) => "inf".into(),
        SolverOutcome::Float(f) => format!("{}", f.value),
    }
}

/// bound <= Res, with relative slack when the solver ran in float mode.
fn bound_is_sound(bound: &Rat, outcome: &SolverOutcome) -> bool {
    match outcome {
        SolverOutcome::Exact(Resistance::Finite(r)) => bound <= r,
        SolverOutcome::Exact(Resistance::Infinite) => true,
        SolverOutcome::Float(f) => {
            bound.to_f64().unwrap() <= f.value * (1.0 + 1e-8) + 1e-12
        }
    }
}

fn cmd_bound(args: BoundArgs) -> Result<i32> {
    let shape = shape_of(&args.shape, args.n)?;
    let mode = match args.mode {
        BoundMode::Exact => SolverMode::Exact,
        BoundMode::Float => SolverMode::Float,
        BoundMode::None => SolverMode::None,
    };
    let report = theorem_bound(args.d, &shape, args.s, args.t, args.n, mode, args.cap)
        .map_err(ah)?;
    println!("bound {}", rat_string(&report.bound));
    let mut sound = true;
    if let Some(outcome) = &report.solver {
        println!("res {}", solver_string(outcome));
        println!("ratio {}", report.gap_ratio().unwrap());
        sound = bound_is_sound(&report.bound, outcome);
        if !sound {
            eprintln!("bound exceeds the solver resistance");
        }
    }
    if let Some(out) = &args.out {
        let cert = format::certificate_json(shape.entries(), &report);
        std::fs::write(out, serde_json::to_string_pretty(&cert)? + "\n")
            .with_context(|| format!("writing {}", out.display()))?;
    }
    if let Some(csv) = &args.csv {
        std::fs::write(csv, format::conductance_csv(&report))
            .with_context(|| format!("writing {}", csv.display()))?;
    }
    Ok(if sound { 0 } else { 1 })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let pass = match args.suite {
        VerifySuite::Lemma { shape, d, n, cap } => {
            let shape = shape_of(&shape, n)?;
            let net = build_projected(d, &shape, n, cap).map_err(ah)?;
            let report = lemma_membership_check(&net).map_err(ah)?;
            let ok = report.counterexamples.is_empty();
            println!(
                "lemma: {} edges x {} words, {} counterexamples: {}",
                report.edges_checked,
                1u64 << n,
                report.counterexamples.len(),
                verdict(ok)
            );
            for c in report.counterexamples.iter().take(5) {
                eprintln!(
                    "  edge {} (type {}) at a_hat={}: in S_a={}, criterion={}",
                    c.edge, c.edge_type, c.a_hat, c.definitional, c.criterion
                );
            }
            ok
        }
        VerifySuite::Weights { shape, d, n, cap } => {
            let shape = shape_of(&shape, n)?;
            let net = build_projected(d, &shape, n, cap).map_err(ah)?;
            let engine = CutsetEngine::new(&net).map_err(ah)?;
            // enumerate the family once, accumulating each edge's brute sum
            let mut brute = vec![Rat::from_integer(0.into()); net.edges.len()];
            for a_hat in 0..(1u64 << n) {
                let beta = engine.beta_of(a_hat);
                for e in engine.enlarged_edges(a_hat) {
                    brute[e] += beta.clone();
                }
            }
            let mut bad = 0usize;
            for e in 0..net.edges.len() {
                let closed = weight_sum_over_cutsets(&net, e).map_err(ah)?;
                if closed != brute[e] {
                    bad += 1;
                    if bad <= 5 {
                        eprintln!(
                            "  edge {}: closed form {} != enumerated {}",
                            e,
                            rat_string(&closed),
                            rat_string(&brute[e])
                        );
                    }
                }
            }
            println!(
                "weights: {} edges, {} mismatches: {}",
                net.edges.len(),
                bad,
                verdict(bad == 0)
            );
            bad == 0
        }
        VerifySuite::Wnw { trials, seed, max_vertices } => {
            let mut unsound = 0usize;
            let mut gaps = 0usize;
            for i in 0..trials {
                let inst = random_instance(seed.wrapping_add(i), max_vertices);
                let res = match effective_resistance_exact(&inst.graph, &inst.source, &inst.sink)
                    .map_err(ah)?
                {
                    Resistance::Finite(r) => r,
                    Resistance::Infinite => bail!("random instance is disconnected"),
                };
                let report = wnw_bound(
                    &inst.graph,
                    &inst.cutsets,
                    &inst.allocation,
                    Some(&inst.weights),
                    None,
                )
                .map_err(ah)?;
                if report.bound > res {
                    unsound += 1;
                }
                let opt = optimal_allocation_exact(&inst.graph, &inst.source, &inst.sink)
                    .map_err(ah)?;
                let best = wnw_bound(&inst.graph, &opt.cutsets, &opt.allocation, None, None)
                    .map_err(ah)?;
                if best.bound != res {
                    gaps += 1;
                }
            }
            println!(
                "wnw: {trials} instances, {unsound} unsound bounds, {gaps} non-optimal allocations: {}",
                verdict(unsound == 0 && gaps == 0)
            );
            unsound == 0 && gaps == 0
        }
        VerifySuite::Action { shape, d, n, cap } => {
            let shape = shape_of(&shape, n)?;
            let by_action = build_from_action(d, &shape, n, cap).map_err(ah)?;
            let by_criterion = build_from_criterion(d, &shape, n, cap).map_err(ah)?;
            let key = |net: &Network| {
                let mut v: Vec<(usize, usize, i32)> = net
                    .edges
                    .iter()
                    .map(|e| (e.u.min(e.v), e.u.max(e.v), e.edge_type))
                    .collect();
                v.sort();
                v
            };
            let ok = key(&by_action) == key(&by_criterion);
            println!(
                "action: {} vs {} edges: {}",
                by_action.edges.len(),
                by_criterion.edges.len(),
                verdict(ok)
            );
            ok
        }
    };
    Ok(if pass { 0 } else { 1 })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_scaling(args: ScalingArgs) -> Result<i32> {
    let n_max = args.t_max as usize + 2;
    if args.t_max <= args.s {
        bail!("--t-max must exceed --s");
    }
    let shape = shape_of(&args.shape, n_max)?;
    let mut csv = String::from("t,bound,res,bound_per_linear,bound_per_log\n");
    let s = args.s;
    if s == 0 {
        // from the root: cumulative bounds from one deep truncation,
        // resistances measured on the same graph
        let rows = recurrence_experiment(args.d, &shape, args.t_max, args.cap).map_err(ah)?;
        let net = build_projected(args.d, &shape, n_max, args.cap).map_err(ah)?;
        let g = WeightedGraph::from_network(&net);
        let pos = net.linear_positions().map_err(ah)?;
        let a: Vec<usize> = (0..g.n).filter(|&v| pos[v] == 0).collect();
        for row in rows {
            let b: Vec<usize> = (0..g.n).filter(|&v| pos[v] >= (1u64 << row.t)).collect();
            let res = resistance_string(&g, &a, &b, args.mode)?;
            let bound = row.cumulative.to_f64().unwrap();
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                row.t,
                rat_string(&row.cumulative),
                res,
                bound / row.t as f64,
                bound / (row.t as f64).ln()
            ));
        }
    } else {
        let mode = match args.mode {
            Mode::Exact => SolverMode::Exact,
            Mode::Float => SolverMode::Float,
        };
        for t in (s + 1)..=args.t_max {
            let n = t as usize + 2;
            let report = theorem_bound(args.d, &shape, s, t, n, mode, args.cap).map_err(ah)?;
            let bound = report.bound.to_f64().unwrap();
            let outcome = report.solver.as_ref().unwrap();
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                t,
                rat_string(&report.bound),
                solver_string(outcome),
                bound / (t - s) as f64,
                bound / ((t as f64).ln() - (s as f64).ln())
            ));
        }
    }
    format::write_output(args.out.as_deref(), &csv)?;
    Ok(0)
}

fn resistance_string(g: &WeightedGraph, a: &[usize], b: &[usize], mode: Mode) -> Result<String> {
    Ok(match mode {
        Mode::Exact => match effective_resistance_exact(g, a, b).map_err(ah)? {
            Resistance::Finite(r) => rat_string(&r),
            Resistance::Infinite => "inf".into(),
        },
        Mode::Float => format!("{}", effective_resistance_float(g, a, b).map_err(ah)?.value),
    })
}
