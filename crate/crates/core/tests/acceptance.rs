//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{compare_framework, compare_spec, compare_spec_with, outputs_for, random_instance, random_spec, rng, Agreement, ENCODERS};
use gmip::framework::{build_output3, MatchingInstance, Regime};
use gmip::ip::{
    add_table2_constraints, declare_x_grid, emit_lp, evaluate, parse_lp, Assignment, IpModel, LinExpr, Relation,
    Sense, Table2Kind, VarKind, VarTag,
};
use gmip::oracle::check_witness;
use gmip::problems::{decode, encode, problem_value, Witness};
use gmip::rational::{int, Rational};
use gmip::solver::{solve, SolveConfig, Status};
use gmip::specfile::load_spec;
use gmip::{Graph, NodeId};
use rand::Rng;

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 5] = [
        ("framework equivalence", framework_equivalence),
        ("encoder equivalence", encoder_equivalence),
        ("named fixtures", named_fixtures),
        ("constraint family semantics", family_semantics),
        ("determinism and round trip", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn framework_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = rng(0x5eed_0001);
    let (mut instances, mut optimal, mut infeasible, mut rejected) = (0, 0, 0, 0);
    let mut errors = Vec::new();
    for i in 0..240 {
        let inst = random_instance(&mut rng, i % 5 == 4);
        let mut any = false;
        for output in outputs_for(&inst) {
            match compare_framework(&inst, output) {
                Ok(Agreement::Optimal) => {
                    any = true;
                    optimal += 1;
                }
                Ok(Agreement::Infeasible) => {
                    any = true;
                    infeasible += 1;
                }
                Ok(Agreement::Rejected) => rejected += 1,
                Err(e) => errors.push(format!("instance {i}: {e}")),
            }
        }
        instances += usize::from(any);
    }
    let elapsed = started.elapsed();
    if !errors.is_empty() {
        return Err(format!("{} disagreements, first: {}", errors.len(), errors[0]));
    }
    if instances < 200 {
        return Err(format!("only {instances} instances compared"));
    }
    if elapsed > Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{instances} instances, {optimal} optimal and {infeasible} infeasible agreements, {rejected} rejected by both"
    ))
}

fn encoder_equivalence() -> Outcome {
    let mut rng = rng(0x5eed_0002);
    let mut summary = Vec::new();
    let mut errors = Vec::new();
    for which in ENCODERS {
        let (mut solved, mut infeasible) = (0, 0);
        for _ in 0..60 {
            let spec = random_spec(&mut rng, which);
            match compare_spec(&spec) {
                Ok(Agreement::Optimal) => solved += 1,
                Ok(Agreement::Infeasible) => {
                    solved += 1;
                    infeasible += 1;
                }
                Ok(Agreement::Rejected) => {}
                Err(e) => errors.push(format!("{which}: {e}")),
            }
        }
        if solved < 50 {
            errors.push(format!("{which}: only {solved} instances compared"));
        }
        summary.push(format!("{which} {solved} ({infeasible} infeasible)"));
    }
    if !errors.is_empty() {
        return Err(format!("{} problems, first: {}", errors.len(), errors[0]));
    }
    Ok(summary.join(", "))
}

enum Expect {
    Value(i64),
    Feasible,
    Image(&'static [NodeId]),
}

fn named_fixtures() -> Outcome {
    let cases = [
        ("bandwidth_p5", Expect::Value(1)),
        ("bandwidth_c5", Expect::Value(2)),
        ("bandwidth_k4", Expect::Value(3)),
        ("lap_p4", Expect::Value(3)),
        ("mclap_k4", Expect::Value(4)),
        ("gc_c5", Expect::Value(3)),
        ("golomb4", Expect::Value(6)),
        ("golomb5", Expect::Value(11)),
        ("igc_c4", Expect::Value(1)),
        ("igc_c5", Expect::Value(2)),
        ("mlcm_k22", Expect::Value(1)),
        ("si_fig2", Expect::Feasible),
        ("isi_fig2", Expect::Image(&[2, 3, 4, 5])),
    ];
    let config = SolveConfig::default().with_threads(1);
    let mut slowest = (Duration::ZERO, "");
    for (name, expect) in &cases {
        let spec = load_spec(&fixtures().join(format!("{name}.spec"))).map_err(|e| format!("{name}: {e}"))?;
        let started = Instant::now();
        let model = encode(&spec).map_err(|e| format!("{name}: {e}"))?;
        let sol = solve(&model, &config).map_err(|e| format!("{name}: {e}"))?;
        let took = started.elapsed();
        if took > Duration::from_secs(10) {
            return Err(format!("{name} took {took:?}"));
        }
        if took > slowest.0 {
            slowest = (took, name);
        }
        if sol.status != Status::Optimal {
            return Err(format!("{name}: status {}", sol.status));
        }
        let value = problem_value(&spec, sol.objective);
        let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).map_err(|e| format!("{name}: {e}"))?;
        check_witness(&spec, &w).map_err(|e| format!("{name}: answer {w} rejected: {e}"))?;
        match expect {
            Expect::Value(v) if value != Some(int(*v)) => return Err(format!("{name}: value {value:?}, want {v}")),
            Expect::Image(want) => {
                let Witness::Map(m) = &w else { return Err(format!("{name}: answer {w} is not a map")) };
                let image: Vec<NodeId> = m.keys().copied().collect();
                if image != *want {
                    return Err(format!("{name}: node set {image:?}, want {want:?}"));
                }
            }
            _ => {}
        }
    }
    Ok(format!("{} fixtures, slowest {} in {:?}", cases.len(), slowest.1, slowest.0))
}

/// All simple graphs on `n` nodes.
fn all_graphs(n: usize, directed: bool) -> Vec<Graph> {
    let pairs: Vec<(NodeId, NodeId)> = (1..=n)
        .flat_map(|u| (1..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| if directed { u != v } else { u < v })
        .collect();
    (0..1u32 << pairs.len())
        .map(|mask| {
            let chosen: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            if directed {
                Graph::directed(n, &chosen).unwrap()
            } else {
                Graph::undirected(n, &chosen).unwrap()
            }
        })
        .collect()
}

/// Pattern/target pairs small enough to enumerate every 0/1 grid.
fn grid_pairs(pattern_directed: bool, target_directed: bool) -> Vec<(Graph, Graph)> {
    let mut out = Vec::new();
    for (n, n2) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        if (pattern_directed || target_directed) && n * n2 == 9 {
            continue;
        }
        for g in all_graphs(n, pattern_directed) {
            for gp in all_graphs(n2, target_directed) {
                out.push((g.clone(), gp.clone()));
            }
        }
    }
    out
}

type Grid<'a> = &'a dyn Fn(NodeId, NodeId) -> bool;

fn ordered_pairs(n: usize) -> impl Iterator<Item = (NodeId, NodeId)> {
    (1..=n).flat_map(move |a| (1..=n).map(move |b| (a, b))).filter(|(a, b)| a != b)
}

/// Whether a 0/1 grid breaks the rule each exclusion family stands for.
fn breaks(kind: Table2Kind, g: &Graph, gp: &Graph, x: Grid) -> bool {
    use Table2Kind::*;
    let pattern_edges = || g.proper_edges().map(|e| (e.u, e.v));
    match kind {
        C1 | D1 => pattern_edges()
            .any(|(u, v)| ordered_pairs(gp.n()).any(|(a, b)| !gp.adjacent(a, b) && x(u, a) && x(v, b))),
        C2 | D2 => ordered_pairs(g.n())
            .filter(|&(u, v)| !g.adjacent(u, v))
            .any(|(u, v)| ordered_pairs(gp.n()).any(|(a, b)| gp.adjacent(a, b) && x(u, a) && x(v, b))),
        E => pattern_edges().any(|(u, v)| {
            ordered_pairs(gp.n()).any(|(a, b)| gp.has_edge(a, b) && !gp.has_edge(b, a) && x(u, b) && x(v, a))
        }),
        H1 | H2 => g.nodes().any(|u| ordered_pairs(gp.n()).any(|(a, b)| gp.has_edge(a, b) && x(u, a) && x(u, b))),
        I1 | I2 => pattern_edges().any(|(u, v)| gp.nodes().any(|t| x(u, t) && x(v, t))),
        _ => unreachable!("not an exclusion family"),
    }
}

fn exclusion_family(kind: Table2Kind, pattern_directed: bool, target_directed: bool) -> Result<usize, String> {
    let mut checked = 0;
    for (g, gp) in grid_pairs(pattern_directed, target_directed) {
        let mut m = IpModel::new();
        declare_x_grid(&mut m, &g, &gp);
        add_table2_constraints(&mut m, kind, &g, &gp).map_err(|e| e.to_string())?;
        let cells = g.n() * gp.n();
        for mask in 0..1u32 << cells {
            let mut a = Assignment::zeros(&m);
            for u in g.nodes() {
                for t in gp.nodes() {
                    let bit = (u - 1) * gp.n() + (t - 1);
                    a.set(m.x(u, t).unwrap(), int(i64::from(mask >> bit & 1)));
                }
            }
            let x = |u: NodeId, t: NodeId| a.is_one(m.x(u, t).unwrap());
            if evaluate(&m, &a).feasible() == breaks(kind, &g, &gp, &x) {
                return Err(format!("({kind}) on {g:?} into {gp:?} disagrees at grid {mask:b}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Every 0/1 point of `m`; calls `f` with the point and its feasibility.
fn each_point(m: &IpModel, mut f: impl FnMut(&Assignment, bool)) {
    assert!(m.vars().iter().all(|v| v.kind == VarKind::Binary));
    let n = m.vars().len();
    assert!(n <= 16, "{n} variables");
    for mask in 0..1u32 << n {
        let a = Assignment::from_values((0..n).map(|i| int(i64::from(mask >> i & 1))).collect());
        f(&a, evaluate(m, &a).feasible());
    }
}

/// For every `x` part with a feasible completion, the least feasible value of
/// each linking variable equals `placed`.
fn linking_holds(
    m: &IpModel,
    links: &[(usize, Box<dyn Fn(&Assignment) -> bool + '_>)],
) -> Result<usize, String> {
    let xs: Vec<usize> = m.vars_where(|t| matches!(t, VarTag::X { .. }));
    let mut least: HashMap<Vec<bool>, Vec<bool>> = HashMap::new();
    let mut points = 0;
    each_point(m, |a, feasible| {
        points += 1;
        if !feasible {
            return;
        }
        let key: Vec<bool> = xs.iter().map(|&v| a.is_one(v)).collect();
        let ys: Vec<bool> = links.iter().map(|(y, _)| a.is_one(*y)).collect();
        let entry = least.entry(key).or_insert_with(|| ys.clone());
        for (slot, y) in entry.iter_mut().zip(ys) {
            *slot &= y;
        }
    });
    for (key, ys) in &least {
        let mut a = Assignment::zeros(m);
        for (&v, &on) in xs.iter().zip(key) {
            a.set(v, int(i64::from(on)));
        }
        for ((y, placed), &got) in links.iter().zip(ys) {
            if placed(&a) != got {
                return Err(format!("{} has least value {got} at x = {key:?}", m.variable(*y).name));
            }
        }
    }
    Ok(points)
}

/// Graphs on two nodes, self-loops allowed.
fn loop_targets(directed: bool) -> Vec<Graph> {
    let pairs: Vec<(NodeId, NodeId)> =
        if directed { vec![(1, 1), (1, 2), (2, 1), (2, 2)] } else { vec![(1, 1), (1, 2), (2, 2)] };
    (1..1u32 << pairs.len())
        .map(|mask| {
            let mut b = Graph::builder(2, directed).allow_self_loops();
            for (i, &(a, c)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    b = b.edge(a, c);
                }
            }
            b.build().unwrap()
        })
        .collect()
}

fn linking_family(kind: Table2Kind) -> Result<usize, String> {
    let directed = kind == Table2Kind::G;
    let g = if directed { Graph::directed(2, &[(1, 2)]).unwrap() } else { Graph::path(2) };
    let mut targets = loop_targets(directed);
    targets.extend(all_graphs(3, directed).into_iter().filter(|t| t.m() > 0 && t.m() <= 3));
    let mut points = 0;
    for gp in targets {
        let mut m = IpModel::new();
        declare_x_grid(&mut m, &g, &gp);
        add_table2_constraints(&mut m, kind, &g, &gp).map_err(|e| e.to_string())?;
        let mut links: Vec<(usize, Box<dyn Fn(&Assignment) -> bool>)> = Vec::new();
        for t in gp.edges() {
            let (a, b) = (t.u, t.v);
            let tag = if directed { VarTag::y_arc(1, 2, a, b) } else { VarTag::y_edge(1, 2, a, b) };
            let y = m.var(&tag).ok_or_else(|| format!("({kind}) did not declare {}", tag.name()))?;
            let (x1a, x2b, x1b, x2a) = (m.x(1, a).unwrap(), m.x(2, b).unwrap(), m.x(1, b).unwrap(), m.x(2, a).unwrap());
            links.push((
                y,
                Box::new(move |s: &Assignment| {
                    (s.is_one(x1a) && s.is_one(x2b)) || (!directed && s.is_one(x1b) && s.is_one(x2a))
                }),
            ));
        }
        points += linking_holds(&m, &links).map_err(|e| format!("({kind}) into {gp:?}: {e}"))?;
    }
    Ok(points)
}

/// Penalty indicators of the one-edge penalty model.
fn penalty_links() -> Result<usize, String> {
    let mut points = 0;
    for gp in loop_targets(false) {
        for preserve in [false, true] {
            let mut inst = MatchingInstance::new(Graph::path(2), gp.clone()).with_regime(Regime::ManyToOne);
            inst.preserve_edges = preserve;
            let mut taus = BTreeSet::new();
            for (i, t) in gp.edges().iter().enumerate() {
                let tau = i as i64 % 2;
                inst.set_edge_cost((1, 2), (t.u, t.v), int(tau));
                taus.insert(tau);
                inst.set_penalty((1, 2), tau, int(2 + tau));
            }
            inst.set_forbidden((1, 2), taus);
            let m = build_output3(&inst).map_err(|e| e.to_string())?;
            let mut links: Vec<(usize, Box<dyn Fn(&Assignment) -> bool>)> = Vec::new();
            for t in gp.edges() {
                let tau = inst.is_forbidden((1, 2), (t.u, t.v)).unwrap();
                let tag = VarTag::YTau { e: (1, 2), t: (t.u, t.v), tau };
                let y = m.var(&tag).ok_or_else(|| format!("no {}", tag.name()))?;
                let (a, b) = (t.u, t.v);
                let xs = [m.x(1, a), m.x(2, b), m.x(1, b), m.x(2, a)];
                links.push((
                    y,
                    Box::new(move |s: &Assignment| {
                        let on = |v: Option<usize>| v.is_some_and(|v| s.is_one(v));
                        (on(xs[0]) && on(xs[1])) || (on(xs[2]) && on(xs[3]))
                    }),
                ));
            }
            points += linking_holds(&m, &links).map_err(|e| format!("penalty rows into {gp:?}: {e}"))?;
        }
    }
    Ok(points)
}

fn family_semantics() -> Outcome {
    use Table2Kind::*;
    let exclusion = [
        (C1, false, false),
        (C2, false, false),
        (D1, true, true),
        (D2, true, true),
        (E, true, true),
        (H1, false, false),
        (H1, true, false),
        (H2, false, true),
        (H2, true, true),
        (I1, false, false),
        (I1, false, true),
        (I2, true, false),
        (I2, true, true),
    ];
    let mut grids = 0;
    for (kind, pd, td) in exclusion {
        grids += exclusion_family(kind, pd, td)?;
    }
    let mut points = 0;
    for kind in [F, G] {
        points += linking_family(kind)?;
    }
    points += penalty_links()?;
    Ok(format!("{grids} grids over 9 exclusion families, {points} points over the linking rows"))
}

/// Random model whose coefficients all have terminating decimals.
fn random_model(rng: &mut common::TestRng) -> IpModel {
    let mut m = IpModel::new();
    let n = rng.gen_range(1..=8);
    let mut ids = Vec::new();
    for i in 0..n {
        let tag = match rng.gen_range(0..3) {
            0 => VarTag::x(i + 1, rng.gen_range(1..=4)),
            1 => VarTag::named(&format!("v{i}")),
            _ => VarTag::Fill { u: i + 1, v: i + 2 },
        };
        if m.var(&tag).is_some() {
            continue;
        }
        let id = if rng.gen_bool(0.8) {
            m.add_var(tag, VarKind::Binary, int(0), Some(int(1))).unwrap()
        } else {
            let hi = if rng.gen_bool(0.5) { Some(int(rng.gen_range(1..=9))) } else { None };
            m.continuous(tag, int(rng.gen_range(-3..=0)), hi).unwrap()
        };
        ids.push(id);
    }
    let coef = |rng: &mut common::TestRng| {
        let den = [1, 2, 4, 5, 8, 10][rng.gen_range(0..6)];
        let num = loop {
            let k = rng.gen_range(-20..=20);
            if k != 0 {
                break k;
            }
        };
        Rational::new(num, den)
    };
    let expr = |rng: &mut common::TestRng| {
        let mut e = LinExpr::new();
        for &v in &ids {
            if rng.gen_bool(0.6) {
                e.add(v, coef(rng));
            }
        }
        e
    };
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    let obj = expr(rng);
    m.set_objective(sense, obj).unwrap();
    for _ in 0..rng.gen_range(0..=6) {
        let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
        let fam = ["row", "cut", "link"][rng.gen_range(0..3)];
        let e = expr(rng);
        let rhs = coef(rng);
        m.add_constraint(fam, e, rel, rhs).unwrap();
    }
    m
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gmip");
    let mut files = 0;
    for entry in std::fs::read_dir(fixtures()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_none_or(|x| x != "spec") {
            continue;
        }
        let run = || Command::new(bin).arg("encode").arg(&path).output().map(|o| o.stdout);
        let (first, second) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
        let spec = load_spec(&path).map_err(|e| e.to_string())?;
        let here = emit_lp(&encode(&spec).map_err(|e| e.to_string())?);
        if first != second || first != here.as_bytes() {
            return Err(format!("encoding {} differs between runs", path.display()));
        }
        files += 1;
    }

    let mut rng = rng(0x5eed_0005);
    for i in 0..100 {
        let m = random_model(&mut rng);
        let text = emit_lp(&m);
        let back = parse_lp(&text).map_err(|e| format!("model {i}: {e}\n{text}"))?;
        if back != m || emit_lp(&back) != text {
            return Err(format!("model {i} changes on a round trip:\n{text}"));
        }
    }

    let four = SolveConfig::default().with_threads(4);
    let one = SolveConfig::default().with_threads(1);
    let mut runs = 0;
    for which in ENCODERS {
        for _ in 0..6 {
            let spec = random_spec(&mut rng, which);
            let Ok(model) = encode(&spec) else { continue };
            let a = solve(&model, &one).map_err(|e| e.to_string())?;
            let b = solve(&model, &four).map_err(|e| e.to_string())?;
            if (a.status, a.objective) != (b.status, b.objective) {
                return Err(format!("{spec:?}: 1 thread {:?}, 4 threads {:?}", a.objective, b.objective));
            }
            compare_spec_with(&spec, &four)?;
            runs += 1;
        }
    }
    let mut fixture_runs = 0;
    for name in ["golomb5", "bandwidth_k4", "isi_fig2", "mlcm_k22"] {
        let spec = load_spec(&fixtures().join(format!("{name}.spec"))).map_err(|e| e.to_string())?;
        let model = encode(&spec).map_err(|e| e.to_string())?;
        let a = solve(&model, &one).map_err(|e| e.to_string())?;
        let b = solve(&model, &four).map_err(|e| e.to_string())?;
        if (a.status, a.objective) != (b.status, b.objective) {
            return Err(format!("{name}: thread count changes the answer"));
        }
        fixture_runs += 1;
    }
    Ok(format!(
        "{files} fixture encodings stable, 100 LP round trips, {} thread comparisons",
        runs + fixture_runs
    ))
}
