//! Random instance generators and model-versus-oracle comparisons shared by
//! the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gmip::framework::{build, decode_matching, MatchingInstance, ObjectiveForm, Output, Regime};
use gmip::oracle::{check_framework, check_witness, oracle_framework, oracle_solve, OracleStatus};
use gmip::problems::{
    decode, encode, problem_value, Arrangement, ArrangementKind, Bandwidth, Coloring, ColoringKind, CommonKind,
    CommonSubgraph, FrequencyAssignment, Goal, Golomb, GraphLabeling, IsoKind, Isomorphism, KTsp, KTspVariant,
    Labeling, MetricLabeling, ProblemSpec,
};
use gmip::rational::{int, Rational};
use gmip::solver::{solve, SolveConfig, Status};
use gmip::{Graph, LayeredGraph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Simple graph with edge probability `p` and weights drawn from `weights`.
pub fn random_graph(rng: &mut TestRng, n: usize, p: f64, directed: bool, weights: &[i64]) -> Graph {
    let mut b = Graph::builder(n, directed);
    for u in 1..=n {
        for v in 1..=n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.gen_bool(p) {
                b = b.weighted_edge(u, v, int(*weights.choose(rng).unwrap()));
            }
        }
    }
    b.build().unwrap()
}

pub fn unit_graph(rng: &mut TestRng, n: usize, p: f64, directed: bool) -> Graph {
    random_graph(rng, n, p, directed, &[1])
}

/// Digraph with no pair of opposite arcs.
pub fn oriented_graph(rng: &mut TestRng, n: usize, p: f64) -> Graph {
    let mut arcs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                arcs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    Graph::directed(n, &arcs).unwrap()
}

/// Random spanning tree plus extra edges.
pub fn connected_graph(rng: &mut TestRng, n: usize, extra: f64) -> Graph {
    let mut edges = BTreeSet::new();
    for v in 2..=n {
        let u = rng.gen_range(1..v);
        edges.insert((u, v));
    }
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(extra) {
                edges.insert((u, v));
            }
        }
    }
    Graph::undirected(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// `g` relabelled by a random permutation.
pub fn shuffled(rng: &mut TestRng, g: &Graph) -> Graph {
    let mut perm: Vec<NodeId> = (1..=g.n()).collect();
    perm.shuffle(rng);
    let mut b = Graph::builder(g.n(), g.is_directed());
    for e in g.edges() {
        b = b.weighted_edge(perm[e.u - 1], perm[e.v - 1], e.w);
    }
    b.build().unwrap()
}

fn small_value(rng: &mut TestRng, lo: i64, hi: i64) -> Rational {
    let v = int(rng.gen_range(lo..=hi));
    if rng.gen_bool(0.15) {
        v / int(2)
    } else {
        v
    }
}

/// A framework instance with at most 4 nodes per side and at most 3
/// allowable targets per node.
pub fn random_instance(rng: &mut TestRng, directed: bool) -> MatchingInstance {
    let n = rng.gen_range(1..=4);
    let n2 = rng.gen_range(1..=4);
    let g = if directed { oriented_graph(rng, n, 0.5) } else { unit_graph(rng, n, 0.5, false) };
    let mut b = Graph::builder(n2, directed);
    let loops = !directed && rng.gen_bool(0.35);
    if loops {
        b = b.allow_self_loops();
    }
    for a in 1..=n2 {
        for c in 1..=n2 {
            if (a == c && !loops) || (!directed && c < a) {
                continue;
            }
            if rng.gen_bool(if a == c { 0.4 } else { 0.55 }) {
                b = b.edge(a, c);
            }
        }
    }
    let g2 = b.build().unwrap();
    let regime = *Regime::ALL.choose(rng).unwrap();
    let mut inst = MatchingInstance::new(g.clone(), g2.clone()).with_regime(regime);
    inst.preserve_edges = rng.gen_bool(0.75);
    inst.reflect_target_edges = !directed && rng.gen_bool(0.2);
    for u in 1..=n {
        if n2 > 3 || rng.gen_bool(0.4) {
            let size = rng.gen_range(1..=n2.min(3));
            let mut targets: Vec<NodeId> = (1..=n2).collect();
            targets.shuffle(rng);
            inst.set_allow(u, targets[..size].iter().copied());
        }
    }
    for u in 1..=n {
        for a in 1..=n2 {
            if rng.gen_bool(0.4) {
                inst.set_node_cost(u, a, small_value(rng, -2, 4));
            }
        }
    }
    for e in g.proper_edges() {
        for t in g2.edges() {
            if rng.gen_bool(0.5) {
                inst.set_edge_cost((e.u, e.v), (t.u, t.v), small_value(rng, -2, 4));
            }
        }
        if rng.gen_bool(0.4) {
            let values: BTreeSet<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(-1..=3)).collect();
            for &tau in &values {
                inst.set_penalty((e.u, e.v), tau, int(rng.gen_range(0..=4)));
            }
            inst.set_forbidden((e.u, e.v), values);
        }
    }
    inst
}

/// Outputs that apply to an instance.
pub fn outputs_for(inst: &MatchingInstance) -> Vec<Output> {
    let mut outs = vec![Output::Feasibility];
    if !inst.g.is_directed() {
        outs.extend(ObjectiveForm::ALL.into_iter().map(Output::Optimize));
        outs.push(Output::Penalty);
    }
    outs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// Same optimum, and the decoded answer checks out.
    Optimal,
    /// Both sides find no solution.
    Infeasible,
    /// Both sides refuse the instance.
    Rejected,
}

pub fn compare_framework(inst: &MatchingInstance, output: Output) -> Result<Agreement, String> {
    let oracle = oracle_framework(inst, output);
    let model = build(inst, output);
    let (oracle, model) = match (oracle, model) {
        (Err(_), Err(_)) => return Ok(Agreement::Rejected),
        (Ok(o), Ok(m)) => (o, m),
        (o, m) => return Err(format!("only one side rejected: oracle {o:?}, model {:?}", m.err())),
    };
    let sol = solve(&model, &SolveConfig::default()).map_err(|e| e.to_string())?;
    match (oracle.status, sol.status) {
        (OracleStatus::Optimal, Status::Optimal) => {}
        (OracleStatus::Infeasible, Status::Infeasible) => return Ok(Agreement::Infeasible),
        (o, s) => return Err(format!("{output}: oracle {o:?}, solver {s:?}")),
    }
    let value = sol.objective.unwrap();
    if Some(value) != oracle.value {
        return Err(format!("{output}: oracle {:?}, solver {value}", oracle.value));
    }
    let f = decode_matching(&model, sol.assignment.as_ref().unwrap()).map_err(|e| e.to_string())?;
    match check_framework(inst, output, &f) {
        Ok(v) if v == value => Ok(Agreement::Optimal),
        Ok(v) => Err(format!("{output}: decoded map {f:?} is worth {v}, solver says {value}")),
        Err(e) => Err(format!("{output}: decoded map {f:?} rejected: {e}")),
    }
}

pub fn compare_spec(spec: &ProblemSpec) -> Result<Agreement, String> {
    compare_spec_with(spec, &SolveConfig::default())
}

pub fn compare_spec_with(spec: &ProblemSpec, config: &SolveConfig) -> Result<Agreement, String> {
    let oracle = oracle_solve(spec);
    let model = encode(spec);
    let (oracle, model) = match (oracle, model) {
        (Err(_), Err(_)) => return Ok(Agreement::Rejected),
        (Ok(o), Ok(m)) => (o, m),
        (o, m) => return Err(format!("{spec:?}: only one side rejected: oracle {o:?}, model {:?}", m.err())),
    };
    let sol = solve(&model, config).map_err(|e| e.to_string())?;
    match (oracle.status, sol.status) {
        (OracleStatus::Optimal, Status::Optimal) => {}
        (OracleStatus::Infeasible, Status::Infeasible) => return Ok(Agreement::Infeasible),
        (o, s) => return Err(format!("{spec:?}: oracle {o:?}, solver {s:?}")),
    }
    let value = problem_value(spec, sol.objective);
    if value != oracle.value {
        return Err(format!("{spec:?}: oracle {:?}, solver {value:?}", oracle.value));
    }
    let w = decode(spec, &model, sol.assignment.as_ref().unwrap()).map_err(|e| format!("{spec:?}: {e}"))?;
    match check_witness(spec, &w) {
        Ok(v) if Some(v) == value => Ok(Agreement::Optimal),
        Ok(v) => Err(format!("{spec:?}: decoded {w} is worth {v}, solver says {value:?}")),
        Err(e) => Err(format!("{spec:?}: decoded {w} rejected: {e}")),
    }
}

/// The eleven encoders, by the name used in reports.
pub const ENCODERS: [&str; 11] = [
    "ktsp",
    "bandwidth",
    "arrangement",
    "isomorphism",
    "common_subgraph",
    "coloring",
    "labeling",
    "metric_labeling",
    "golomb",
    "igc",
    "mlcm",
];

fn goal(rng: &mut TestRng, hi: i64) -> Goal {
    if rng.gen_bool(0.3) {
        Goal::AtMost(int(rng.gen_range(0..=hi)))
    } else {
        Goal::Minimize
    }
}

/// A random instance for the encoder named `which`.
pub fn random_spec(rng: &mut TestRng, which: &str) -> ProblemSpec {
    match which {
        "ktsp" => {
            let n = rng.gen_range(3..=5);
            let g = random_graph(rng, n, 0.6, true, &[0, 1, 2, 3, 5]);
            let variant = *[KTspVariant::A, KTspVariant::B, KTspVariant::C].choose(rng).unwrap();
            ProblemSpec::KTsp(KTsp { g, k: rng.gen_range(2..=n), variant, goal: goal(rng, 10) })
        }
        "bandwidth" => {
            let n = rng.gen_range(2..=6);
            let directed = rng.gen_bool(0.3);
            let g = unit_graph(rng, n, 0.45, directed);
            ProblemSpec::Bandwidth(Bandwidth { g, goal: goal(rng, n as i64 - 1) })
        }
        "arrangement" => {
            let kind = *[ArrangementKind::Lap, ArrangementKind::Dlap, ArrangementKind::Pmp, ArrangementKind::Mclap]
                .choose(rng)
                .unwrap();
            let n = rng.gen_range(2..=if kind == ArrangementKind::Pmp { 5 } else { 6 });
            let g = match kind {
                ArrangementKind::Lap => random_graph(rng, n, 0.45, false, &[1, 1, 2, 3]),
                ArrangementKind::Dlap => random_graph(rng, n, 0.45, true, &[1, 2]),
                _ => unit_graph(rng, n, 0.5, false),
            };
            let goal = if kind == ArrangementKind::Pmp { Goal::Minimize } else { goal(rng, 8) };
            ProblemSpec::Arrangement(Arrangement { kind, g, goal })
        }
        "isomorphism" => {
            let kind = *[IsoKind::Gi, IsoKind::Si, IsoKind::Isi].choose(rng).unwrap();
            let n = rng.gen_range(2..=6);
            let host = unit_graph(rng, n, 0.5, false);
            let pattern = match kind {
                IsoKind::Gi if rng.gen_bool(0.6) => shuffled(rng, &host),
                IsoKind::Gi => unit_graph(rng, n, 0.5, false),
                _ => {
                    let m = rng.gen_range(2..=n.min(4));
                    unit_graph(rng, m, 0.5, false)
                }
            };
            ProblemSpec::Isomorphism(Isomorphism { kind, g: host, g2: pattern })
        }
        "common_subgraph" => {
            let kind = *[CommonKind::Lcs, CommonKind::Mism, CommonKind::Msm, CommonKind::Cmp].choose(rng).unwrap();
            let (n, m) = match kind {
                CommonKind::Msm => (rng.gen_range(1..=3), rng.gen_range(1..=4)),
                CommonKind::Cmp => (rng.gen_range(2..=5), rng.gen_range(2..=5)),
                _ => (rng.gen_range(1..=4), rng.gen_range(1..=4)),
            };
            let (g, g2) = match kind {
                CommonKind::Lcs => {
                    (random_graph(rng, n, 0.6, false, &[-1, 1, 2, 3]), random_graph(rng, m, 0.6, false, &[1, 2, -2]))
                }
                CommonKind::Cmp => (unit_graph(rng, n, 0.5, false), unit_graph(rng, m, 0.5, false)),
                _ => (oriented_graph(rng, n, 0.5), oriented_graph(rng, m, 0.5)),
            };
            ProblemSpec::CommonSubgraph(CommonSubgraph { kind, g, g2 })
        }
        "coloring" => random_coloring(rng),
        "labeling" => {
            let n = rng.gen_range(2..=5);
            if rng.gen_bool(0.5) {
                let m = rng.gen_range(0..=2);
                let gl = GraphLabeling {
                    g: connected_graph(rng, n, 0.2),
                    m,
                    k: rng.gen_range(0..=m),
                    span: rng.gen_range(0..=5),
                    optimize: rng.gen_bool(0.6),
                };
                ProblemSpec::Labeling(Labeling::Gl(gl))
            } else {
                let g = unit_graph(rng, n, 0.5, false);
                let freqs = rng.gen_range(1..=3);
                let mut f = FrequencyAssignment { g: g.clone(), freqs, separation: BTreeMap::new(), penalty: BTreeMap::new() };
                for e in g.edges() {
                    if rng.gen_bool(0.7) {
                        let t = rng.gen_range(0..=2);
                        f.separation.insert((e.u, e.v), t);
                        for tau in 0..=t {
                            f.penalty.insert(((e.u, e.v), tau), int(rng.gen_range(0..=5)));
                        }
                    }
                }
                ProblemSpec::Labeling(Labeling::Fsfa(f))
            }
        }
        "metric_labeling" => {
            let n = rng.gen_range(1..=4);
            let labels = rng.gen_range(2..=3);
            let g = random_graph(rng, n, 0.5, false, &[1, 2, 3]);
            let mut dist = BTreeMap::new();
            for a in 1..=labels {
                for b in a..=labels {
                    if rng.gen_bool(0.8) {
                        dist.insert((a, b), if a == b { int(0) } else { int(rng.gen_range(1..=3)) });
                    }
                }
            }
            let mut node_cost = BTreeMap::new();
            let mut allow = BTreeMap::new();
            for u in 1..=n {
                for a in 1..=labels {
                    if rng.gen_bool(0.5) {
                        node_cost.insert((u, a), int(rng.gen_range(0..=4)));
                    }
                }
                if rng.gen_bool(0.3) {
                    let mut ls: Vec<NodeId> = (1..=labels).collect();
                    ls.shuffle(rng);
                    allow.insert(u, ls[..rng.gen_range(1..=labels)].iter().copied().collect());
                }
            }
            let form = if rng.gen_bool(0.5) { ObjectiveForm::P2 } else { ObjectiveForm::P4 };
            ProblemSpec::MetricLabeling(MetricLabeling { g, labels, dist, node_cost, allow, form })
        }
        "golomb" => {
            let n: usize = rng.gen_range(1..=4);
            let k = rng.gen_range(n.saturating_sub(1)..=8);
            ProblemSpec::Golomb(Golomb { n, k, optimize: rng.gen_bool(0.6) })
        }
        "igc" => {
            let n = rng.gen_range(2..=6);
            ProblemSpec::Igc(connected_graph(rng, n, 0.25))
        }
        "mlcm" => ProblemSpec::Mlcm(random_layered(rng)),
        other => panic!("unknown encoder {other}"),
    }
}

fn random_coloring(rng: &mut TestRng) -> ProblemSpec {
    use ColoringKind::*;
    let kind = *[Gkc, Gc, Gh, Dgh, MwscpA, MwscpB, Wvcp, Mcp, Mwis].choose(rng).unwrap();
    let n = rng.gen_range(2..=if matches!(kind, Gc | Wvcp | Mcp) { 5 } else { 6 });
    let g = match kind {
        Dgh => oriented_graph(rng, n.min(5), 0.5),
        Mcp => random_graph(rng, n, 0.6, false, &[-1, 1, 2, 3]),
        _ => unit_graph(rng, n, 0.5, false),
    };
    let mut s = Coloring::new(kind, g);
    let n = s.g.n();
    match kind {
        Gkc => s.k = Some(rng.gen_range(1..=3)),
        Gh => {
            let m = rng.gen_range(2..=4);
            s.g2 = Some(unit_graph(rng, m, 0.6, false));
        }
        Dgh => {
            let m = rng.gen_range(2..=3);
            s.g2 = Some(random_graph(rng, m, 0.6, true, &[1]));
        }
        MwscpA | MwscpB => {
            let k = rng.gen_range(1..=3);
            s.k = Some(k);
            for u in 1..=n {
                for a in 1..=k {
                    if rng.gen_bool(0.6) {
                        s.costs.insert((u, a), int(rng.gen_range(-1..=4)));
                    }
                }
            }
            if s.costs.is_empty() {
                s.costs.insert((1, 1), int(1));
            }
            if kind == MwscpB {
                let mut a = s.clone();
                a.kind = MwscpA;
                let best = oracle_solve(&ProblemSpec::Coloring(a)).unwrap().value.unwrap();
                s.z_star = Some(if rng.gen_bool(0.8) { best } else { best - int(1) });
            }
        }
        Wvcp => {
            for u in 1..=n {
                s.weights.insert(u, int(rng.gen_range(0..=4)));
            }
        }
        _ => {
            if rng.gen_bool(0.3) {
                s.k = Some(rng.gen_range(1..=n));
            }
        }
    }
    ProblemSpec::Coloring(s)
}

/// Up to three layers of up to three nodes.
pub fn random_layered(rng: &mut TestRng) -> LayeredGraph {
    let layers = rng.gen_range(2..=3);
    let mut next = 1;
    let mut ls = Vec::new();
    for _ in 0..layers {
        let size = rng.gen_range(1..=3);
        ls.push((next..next + size).collect::<Vec<NodeId>>());
        next += size;
    }
    let mut arcs = Vec::new();
    for w in ls.windows(2) {
        for &u in &w[0] {
            for &v in &w[1] {
                if rng.gen_bool(0.6) {
                    arcs.push((u, v));
                }
            }
        }
    }
    LayeredGraph::new(ls, arcs).unwrap()
}
