//! Enumeration oracles for every named problem.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use itertools::Itertools;
use num_traits::Signed;

use super::{
    bad, factorial, falling, for_each_choice, for_each_partial_injection, guard, partial_injections, product, Best,
    OracleError, OracleResult,
};
use crate::framework::ObjectiveForm;
use crate::graph::{Graph, LayeredGraph, NodeId};
use crate::problems::{
    Arrangement, ArrangementKind, Bandwidth, Coloring, ColoringKind, CommonKind, CommonSubgraph, FrequencyAssignment,
    Goal, Golomb, GraphLabeling, IsoKind, Isomorphism, KTsp, KTspVariant, Labeling, MetricLabeling, ProblemSpec,
    Witness,
};
use crate::rational::{int, Rational};

type Flow = ControlFlow<()>;
const GO: Flow = ControlFlow::Continue(());

pub(super) fn solve(spec: &ProblemSpec) -> Result<OracleResult, OracleError> {
    match spec {
        ProblemSpec::KTsp(s) => ktsp(s),
        ProblemSpec::Bandwidth(s) => bandwidth(s),
        ProblemSpec::Arrangement(s) => arrangement(s),
        ProblemSpec::Isomorphism(s) => isomorphism(s),
        ProblemSpec::CommonSubgraph(s) => common(s),
        ProblemSpec::Coloring(s) => coloring(s),
        ProblemSpec::Labeling(Labeling::Gl(s)) => gl(s),
        ProblemSpec::Labeling(Labeling::Fsfa(s)) => fsfa(s),
        ProblemSpec::MetricLabeling(s) => metric(s),
        ProblemSpec::Golomb(s) => golomb(s),
        ProblemSpec::Igc(g) => igc(g),
        ProblemSpec::Mlcm(l) => mlcm(l),
        ProblemSpec::Framework(inst, out) => super::oracle_framework(inst, *out),
    }
}

fn no_loops(g: &Graph) -> Result<(), OracleError> {
    if g.loops().next().is_some() {
        return bad("self-loops are not part of this problem");
    }
    Ok(())
}

fn directed(g: &Graph, want: bool) -> Result<(), OracleError> {
    if g.is_directed() != want {
        return bad(if want { "needs a directed graph" } else { "needs an undirected graph" });
    }
    Ok(())
}

/// Minimise, or stop at the first candidate within the bound.
fn goal_best(goal: Goal) -> (Best, Option<Rational>) {
    match goal {
        Goal::Minimize => (Best::minimize(), None),
        Goal::AtMost(b) => (Best::feasibility(), Some(b)),
    }
}

fn offer_goal(best: &mut Best, bound: Option<Rational>, v: Rational, w: impl FnOnce() -> Witness) -> Flow {
    match bound {
        Some(b) if v > b => GO,
        _ => best.offer(v, w),
    }
}

/// Each permutation as `pos[u]` (index 0 unused).
fn for_each_ordering(n: usize, mut visit: impl FnMut(&[usize]) -> Flow) -> Result<(), OracleError> {
    guard(factorial(n))?;
    let mut pos = vec![0usize; n + 1];
    for perm in (1..=n).permutations(n) {
        pos[1..].copy_from_slice(&perm);
        if visit(&pos).is_break() {
            break;
        }
    }
    Ok(())
}

fn ordering_witness(pos: &[usize]) -> Witness {
    Witness::Ordering(pos.iter().enumerate().skip(1).map(|(u, &p)| (u, p)).collect())
}

fn ktsp(s: &KTsp) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    directed(g, true)?;
    no_loops(g)?;
    if s.k < 2 || s.k > g.n() {
        return bad("k out of range");
    }
    if s.variant != KTspVariant::A && g.edges().iter().any(|e| e.w.is_negative()) {
        return bad("negative arc length");
    }
    guard(falling(g.n(), s.k))?;
    let (mut best, bound) = match s.variant {
        KTspVariant::A => (Best::feasibility(), None),
        _ => goal_best(s.goal),
    };
    for seq in g.nodes().permutations(s.k) {
        let arcs: Option<Vec<Rational>> = (0..s.k).map(|i| g.weight(seq[i], seq[(i + 1) % s.k])).collect();
        let Some(ws) = arcs else { continue };
        let v = match s.variant {
            KTspVariant::A => int(0),
            KTspVariant::B => ws.iter().sum(),
            KTspVariant::C => ws.iter().copied().fold(int(0), Rational::max),
        };
        if offer_goal(&mut best, bound, v, || Witness::Tour(seq.clone())).is_break() {
            break;
        }
    }
    Ok(best.finish())
}

fn bandwidth(s: &Bandwidth) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    no_loops(g)?;
    let (mut best, bound) = goal_best(s.goal);
    for_each_ordering(g.n(), |pos| {
        let mut width = 0i64;
        for e in g.edges() {
            let (a, b) = (pos[e.u] as i64, pos[e.v] as i64);
            if g.is_directed() && a > b {
                return GO;
            }
            width = width.max((a - b).abs());
        }
        offer_goal(&mut best, bound, int(width), || ordering_witness(pos))
    })?;
    Ok(best.finish())
}

fn arrangement(s: &Arrangement) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    no_loops(g)?;
    directed(g, s.kind == ArrangementKind::Dlap)?;
    if matches!(s.kind, ArrangementKind::Lap | ArrangementKind::Dlap) && g.edges().iter().any(|e| e.w.is_negative()) {
        return bad("negative edge weight");
    }
    if s.kind == ArrangementKind::Pmp && s.goal.is_feasibility() {
        return bad("profile minimisation has no bounded form");
    }
    let n = g.n();
    let (mut best, bound) = goal_best(s.goal);
    for_each_ordering(n, |pos| {
        let v = match s.kind {
            ArrangementKind::Lap => g.edges().iter().map(|e| e.w * int((pos[e.u] as i64 - pos[e.v] as i64).abs())).sum(),
            ArrangementKind::Dlap => {
                let mut total = int(0);
                for e in g.edges() {
                    if pos[e.u] > pos[e.v] {
                        return GO;
                    }
                    total += e.w * int((pos[e.v] - pos[e.u]) as i64);
                }
                total
            }
            ArrangementKind::Pmp => {
                // Profile: how far back each node's earliest neighbour sits.
                let mut total = 0i64;
                for u in g.nodes() {
                    let earliest = g.neighbors(u).expect("node").iter().map(|&v| pos[v]).min().unwrap_or(pos[u]);
                    total += (pos[u] as i64 - earliest as i64).max(0);
                }
                int(total)
            }
            ArrangementKind::Mclap => {
                let cut = (1..n)
                    .map(|i| g.edges().iter().filter(|e| pos[e.u].min(pos[e.v]) <= i && i < pos[e.u].max(pos[e.v])).count())
                    .max()
                    .unwrap_or(0);
                int(cut as i64)
            }
        };
        offer_goal(&mut best, bound, v, || ordering_witness(pos))
    })?;
    Ok(best.finish())
}

fn isomorphism(s: &Isomorphism) -> Result<OracleResult, OracleError> {
    let (host, pat) = (&s.g, &s.g2);
    for h in [host, pat] {
        directed(h, false)?;
        no_loops(h)?;
    }
    match s.kind {
        IsoKind::Gi if host.n() != pat.n() => return bad("node counts differ"),
        IsoKind::Si | IsoKind::Isi if host.n() < pat.n() => return bad("pattern larger than host"),
        _ => {}
    }
    guard(falling(host.n(), pat.n()))?;
    let induced = s.kind != IsoKind::Si;
    let mut best = Best::feasibility();
    // phi[a - 1] is the host node carrying pattern node a.
    for phi in host.nodes().permutations(pat.n()) {
        let ok = (1..=pat.n()).tuple_combinations().all(|(a, b)| {
            let in_host = host.adjacent(phi[a - 1], phi[b - 1]);
            let in_pat = pat.adjacent(a, b);
            if induced {
                in_host == in_pat
            } else {
                !in_pat || in_host
            }
        });
        if ok {
            let map = phi.iter().enumerate().map(|(a, &u)| (u, a + 1)).collect();
            if best.offer(int(0), || Witness::Map(map)).is_break() {
                break;
            }
        }
    }
    Ok(best.finish())
}

fn common(s: &CommonSubgraph) -> Result<OracleResult, OracleError> {
    let (g, h) = (&s.g, &s.g2);
    let want_directed = matches!(s.kind, CommonKind::Mism | CommonKind::Msm);
    for x in [g, h] {
        directed(x, want_directed)?;
        no_loops(x)?;
        if want_directed && x.has_antiparallel_arcs() {
            return bad("antiparallel arcs");
        }
    }
    if s.kind == CommonKind::Msm {
        return msm(g, h);
    }
    guard(partial_injections(g.n(), h.n()))?;
    let mut best = Best::maximize();
    for_each_partial_injection(g.n(), h.n(), |f| {
        let at = |u: NodeId| f[u - 1];
        let value = match s.kind {
            CommonKind::Lcs => {
                let mut total = int(0);
                for e in g.edges() {
                    if let (Some(a), Some(b)) = (at(e.u), at(e.v)) {
                        if let Some(w) = h.weight(a, b) {
                            total += (e.w * w).max(int(0));
                        }
                    }
                }
                total
            }
            CommonKind::Mism => {
                for (u, v) in g.nodes().tuple_combinations() {
                    if let (Some(a), Some(b)) = (at(u), at(v)) {
                        if g.has_edge(u, v) != h.has_edge(a, b) || g.has_edge(v, u) != h.has_edge(b, a) {
                            return GO;
                        }
                    }
                }
                int(f.iter().flatten().count() as i64)
            }
            CommonKind::Cmp => {
                let mapped: Vec<(NodeId, NodeId)> = g.nodes().filter_map(|u| at(u).map(|a| (u, a))).collect();
                if mapped.windows(2).any(|w| w[0].1 > w[1].1) {
                    return GO;
                }
                let shared = g
                    .edges()
                    .iter()
                    .filter(|e| matches!((at(e.u), at(e.v)), (Some(a), Some(b)) if h.adjacent(a, b)))
                    .count();
                int(shared as i64)
            }
            CommonKind::Msm => unreachable!(),
        };
        let map: BTreeMap<NodeId, NodeId> = g.nodes().filter_map(|u| at(u).map(|a| (u, a))).collect();
        best.offer(value, || Witness::Map(map))
    });
    Ok(best.finish())
}

/// Largest relation in which every two related pairs agree on arcs.
fn msm(g: &Graph, h: &Graph) -> Result<OracleResult, OracleError> {
    let cells: Vec<(NodeId, NodeId)> = g.nodes().cartesian_product(h.nodes()).collect();
    guard(1u128.checked_shl(cells.len() as u32).unwrap_or(u128::MAX))?;
    let agree = |(u, a): (NodeId, NodeId), (v, b): (NodeId, NodeId)| {
        g.has_edge(u, v) == h.has_edge(a, b) && g.has_edge(v, u) == h.has_edge(b, a)
    };
    fn rec(
        i: usize,
        cells: &[(NodeId, NodeId)],
        chosen: &mut Vec<(NodeId, NodeId)>,
        best: &mut Vec<(NodeId, NodeId)>,
        agree: &dyn Fn((NodeId, NodeId), (NodeId, NodeId)) -> bool,
    ) {
        if chosen.len() + (cells.len() - i) <= best.len() {
            return;
        }
        if i == cells.len() {
            *best = chosen.clone();
            return;
        }
        let c = cells[i];
        if chosen.iter().all(|&p| agree(p, c)) {
            chosen.push(c);
            rec(i + 1, cells, chosen, best, agree);
            chosen.pop();
        }
        rec(i + 1, cells, chosen, best, agree);
    }
    let mut best = Vec::new();
    rec(0, &cells, &mut Vec::new(), &mut best, &agree);
    let size = int(best.len() as i64);
    Ok(OracleResult {
        status: super::OracleStatus::Optimal,
        value: Some(size),
        witness: Some(Witness::Relation(best.into_iter().collect::<BTreeSet<_>>())),
    })
}

fn proper(g: &Graph, f: &[usize]) -> bool {
    g.edges().iter().all(|e| f[e.u - 1] == 0 || f[e.v - 1] == 0 || f[e.u - 1] != f[e.v - 1])
}

fn labels_witness(f: &[usize], shift: i64) -> Witness {
    Witness::Labels(
        f.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i + 1, c as i64 + shift)).collect(),
    )
}

fn coloring(s: &Coloring) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    no_loops(g)?;
    directed(g, s.kind == ColoringKind::Dgh)?;
    let n = g.n();
    if let ColoringKind::Gh | ColoringKind::Dgh = s.kind {
        let Some(h) = &s.g2 else { return bad("missing target graph") };
        no_loops(h)?;
        directed(h, s.kind == ColoringKind::Dgh)?;
        let domains = vec![h.nodes().collect::<Vec<_>>(); n];
        guard(product(domains.iter().map(Vec::len)))?;
        let mut best = Best::feasibility();
        for_each_choice(&domains, |f| {
            if g.edges().iter().all(|e| h.has_edge(f[e.u - 1], f[e.v - 1])) {
                return best.offer(int(0), || Witness::Map(f.iter().enumerate().map(|(i, &a)| (i + 1, a)).collect()));
            }
            GO
        });
        return Ok(best.finish());
    }
    let k = match (s.kind, s.k) {
        (ColoringKind::Mwis, _) => 1,
        (ColoringKind::Gkc, None) => return bad("missing K"),
        (_, Some(0)) => return bad("K must be positive"),
        (_, Some(k)) => k,
        (_, None) => n.max(1),
    };
    let partial = matches!(s.kind, ColoringKind::MwscpA | ColoringKind::MwscpB | ColoringKind::Mwis);
    let first = if partial { 0 } else { 1 };
    let domains = vec![(first..=k).collect::<Vec<usize>>(); n];
    guard(product(domains.iter().map(Vec::len)))?;
    let cost = |f: &[usize]| -> Rational {
        f.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| s.costs.get(&(i + 1, c)).copied().unwrap_or_default()).sum()
    };
    let used = |f: &[usize]| int(f.iter().copied().max().unwrap_or(0) as i64);
    // Classes must be cliques for the partition kinds.
    let cliques = |f: &[usize]| {
        g.nodes().tuple_combinations().all(|(u, v)| f[u - 1] == 0 || f[u - 1] != f[v - 1] || g.adjacent(u, v))
    };
    let inside = |f: &[usize], unit: bool| -> Rational {
        g.edges()
            .iter()
            .filter(|e| f[e.u - 1] != 0 && f[e.u - 1] == f[e.v - 1])
            .map(|e| if unit { int(1) } else { e.w })
            .sum()
    };
    let mut best = match s.kind {
        ColoringKind::Gkc => Best::feasibility(),
        ColoringKind::MwscpA | ColoringKind::Mcp | ColoringKind::Mwis => Best::maximize(),
        _ => Best::minimize(),
    };
    match s.kind {
        ColoringKind::MwscpA | ColoringKind::MwscpB if s.costs.is_empty() => return bad("missing costs"),
        ColoringKind::MwscpA | ColoringKind::MwscpB if s.costs.keys().any(|&(u, a)| u == 0 || u > n || a == 0 || a > k) => {
            return bad("cost entry outside the graph or palette")
        }
        ColoringKind::MwscpB if s.z_star.is_none() => return bad("missing Z*"),
        ColoringKind::Wvcp if g.nodes().any(|u| s.weights.get(&u).is_none_or(|w| w.is_negative())) => {
            return bad("missing or negative node weight")
        }
        _ => {}
    }
    for_each_choice(&domains, |f| {
        let v = match s.kind {
            ColoringKind::Gkc | ColoringKind::Gc if !proper(g, f) => return GO,
            ColoringKind::Gkc => int(0),
            ColoringKind::Gc => used(f),
            ColoringKind::MwscpA if !proper(g, f) => return GO,
            ColoringKind::MwscpA => cost(f),
            ColoringKind::MwscpB if !proper(g, f) || Some(cost(f)) != s.z_star => return GO,
            ColoringKind::MwscpB => used(f),
            ColoringKind::Wvcp if !proper(g, f) => return GO,
            ColoringKind::Wvcp => (1..=k)
                .map(|c| g.nodes().filter(|&u| f[u - 1] == c).map(|u| s.weights[&u]).fold(int(0), Rational::max))
                .sum(),
            ColoringKind::Mcp | ColoringKind::Mwis if !cliques(f) => return GO,
            ColoringKind::Mcp => inside(f, false),
            ColoringKind::Mwis => inside(f, true),
            ColoringKind::Gh | ColoringKind::Dgh => unreachable!(),
        };
        best.offer(v, || labels_witness(f, 0))
    });
    Ok(best.finish())
}

/// Pairs at distance exactly two, found through common neighbours.
fn two_apart(g: &Graph) -> Vec<(NodeId, NodeId)> {
    g.nodes()
        .tuple_combinations()
        .filter(|&(u, v)| !g.adjacent(u, v) && g.nodes().any(|w| g.adjacent(u, w) && g.adjacent(w, v)))
        .collect()
}

fn gl(s: &GraphLabeling) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    directed(g, false)?;
    no_loops(g)?;
    if s.k < 0 || s.m < s.k || s.span < 0 {
        return bad("need m >= k >= 0 and a nonnegative span");
    }
    let domains = vec![(0..=s.span).collect::<Vec<i64>>(); g.n()];
    guard(product(domains.iter().map(Vec::len)))?;
    let far = two_apart(g);
    let mut best = if s.optimize { Best::minimize() } else { Best::feasibility() };
    for_each_choice(&domains, |f| {
        let sep = |u: NodeId, v: NodeId| (f[u - 1] - f[v - 1]).abs();
        if g.edges().iter().any(|e| sep(e.u, e.v) < s.m) || far.iter().any(|&(u, v)| sep(u, v) < s.k) {
            return GO;
        }
        let top = f.iter().copied().max().unwrap_or(0);
        best.offer(int(top), || Witness::Labels(f.iter().enumerate().map(|(i, &l)| (i + 1, l)).collect()))
    });
    Ok(best.finish())
}

fn fsfa(s: &FrequencyAssignment) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    directed(g, false)?;
    no_loops(g)?;
    if s.freqs == 0 {
        return bad("no frequencies");
    }
    let domains = vec![(0..s.freqs as i64).collect::<Vec<i64>>(); g.n()];
    guard(product(domains.iter().map(Vec::len)))?;
    // Every difference a forbidden window can produce needs a penalty.
    for (&(u, v), &t) in &s.separation {
        if t < 0 || !g.has_edge(u, v) {
            return bad("separations must be nonnegative and sit on edges");
        }
        for tau in 0..=t.min(s.freqs as i64 - 1) {
            if penalty(s, (u, v), tau).is_none() {
                return bad(format!("missing penalty on edge ({u}, {v}) at {tau}"));
            }
        }
    }
    let mut best = Best::minimize();
    for_each_choice(&domains, |f| {
        let mut total = int(0);
        for e in g.edges() {
            let gap = (f[e.u - 1] - f[e.v - 1]).abs();
            let sep = s.separation.get(&(e.u, e.v)).or_else(|| s.separation.get(&(e.v, e.u)));
            if sep.is_some_and(|&t| gap <= t) {
                total += penalty(s, (e.u, e.v), gap).unwrap_or_default();
            }
        }
        best.offer(total, || Witness::Labels(f.iter().enumerate().map(|(i, &l)| (i + 1, l)).collect()))
    });
    Ok(best.finish())
}

fn penalty(s: &FrequencyAssignment, (u, v): (NodeId, NodeId), tau: i64) -> Option<Rational> {
    s.penalty.get(&((u, v), tau)).or_else(|| s.penalty.get(&((v, u), tau))).copied()
}

fn metric(s: &MetricLabeling) -> Result<OracleResult, OracleError> {
    let g = &s.g;
    directed(g, false)?;
    no_loops(g)?;
    if !matches!(s.form, ObjectiveForm::P2 | ObjectiveForm::P4) {
        return bad("objective must be P2 or P4");
    }
    let domains: Vec<Vec<NodeId>> = g
        .nodes()
        .map(|u| match s.allow.get(&u) {
            Some(set) => set.iter().copied().collect(),
            None => (1..=s.labels).collect(),
        })
        .collect();
    guard(product(domains.iter().map(Vec::len)))?;
    let mut best = Best::minimize();
    for_each_choice(&domains, |f| {
        let mut node = vec![int(0); s.labels + 1];
        let mut edge_total = int(0);
        for u in g.nodes() {
            node[f[u - 1]] += s.node_cost.get(&(u, f[u - 1])).copied().unwrap_or_default();
        }
        let mut load = node.clone();
        for e in g.edges() {
            let (a, b) = (f[e.u - 1], f[e.v - 1]);
            let Some(d) = s.distance(a, b) else { return GO };
            let c = e.w * d;
            edge_total += c;
            load[a] += c;
            if b != a {
                load[b] += c;
            }
        }
        let v = match s.form {
            ObjectiveForm::P2 => node.iter().sum::<Rational>() + edge_total,
            _ => load.iter().copied().fold(int(0), Rational::max),
        };
        best.offer(v, || Witness::Map(f.iter().enumerate().map(|(i, &a)| (i + 1, a)).collect()))
    });
    Ok(best.finish())
}

fn golomb(s: &Golomb) -> Result<OracleResult, OracleError> {
    if s.n == 0 || s.n > s.k + 1 {
        return bad("marks do not fit");
    }
    // Sorted subsets of 0..=k that contain 0.
    let needed = falling(s.k, s.n - 1) / factorial(s.n - 1);
    guard(needed)?;
    fn rec(marks: &mut Vec<i64>, diffs: &mut BTreeSet<i64>, n: usize, k: i64, best: &mut Best, optimize: bool) -> Flow {
        if marks.len() == n {
            let len = *marks.last().expect("nonempty");
            return best.offer(int(if optimize { len } else { 0 }), || Witness::Marks(marks.clone()));
        }
        let last = *marks.last().expect("nonempty");
        for next in last + 1..=k {
            let new: Vec<i64> = marks.iter().map(|&m| next - m).collect();
            if new.iter().any(|d| diffs.contains(d)) {
                continue;
            }
            diffs.extend(new.iter().copied());
            marks.push(next);
            let r = rec(marks, diffs, n, k, best, optimize);
            marks.pop();
            for d in &new {
                diffs.remove(d);
            }
            r?;
        }
        GO
    }
    let mut best = if s.optimize { Best::minimize() } else { Best::feasibility() };
    let _ = rec(&mut vec![0], &mut BTreeSet::new(), s.n, s.k as i64, &mut best, s.optimize);
    Ok(best.finish())
}

/// Fill edges forced by an ordering: `{z, v}` whenever `z` sits strictly
/// inside an edge `{u, v}` whose right end is `v`.
pub(crate) fn forced_fill(g: &Graph, pos: &[usize]) -> BTreeSet<(NodeId, NodeId)> {
    let mut fill = BTreeSet::new();
    for e in g.edges() {
        let (left, right) = if pos[e.u] < pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
        for z in g.nodes() {
            if pos[left] < pos[z] && pos[z] < pos[right] && !g.adjacent(z, right) {
                fill.insert((z.min(right), z.max(right)));
            }
        }
    }
    fill
}

fn igc(g: &Graph) -> Result<OracleResult, OracleError> {
    directed(g, false)?;
    no_loops(g)?;
    if !g.is_connected() {
        return bad("graph is disconnected");
    }
    let mut best = Best::minimize();
    for_each_ordering(g.n(), |pos| {
        let fill = forced_fill(g, pos).len();
        best.offer(int(fill as i64), || ordering_witness(pos))
    })?;
    Ok(best.finish())
}

/// Crossing pairs between consecutive layers for the given left-to-right
/// orders.
pub(crate) fn crossings(l: &LayeredGraph, orders: &[Vec<NodeId>]) -> usize {
    let mut pos = vec![0usize; l.node_count() + 1];
    for order in orders {
        for (i, &u) in order.iter().enumerate() {
            pos[u] = i;
        }
    }
    l.arcs()
        .iter()
        .tuple_combinations()
        .filter(|((u, u2), (v, v2))| {
            l.layer_of(*u) == l.layer_of(*v)
                && ((pos[*u] < pos[*v] && pos[*v2] < pos[*u2]) || (pos[*v] < pos[*u] && pos[*u2] < pos[*v2]))
        })
        .count()
}

fn mlcm(l: &LayeredGraph) -> Result<OracleResult, OracleError> {
    let per_layer: Vec<Vec<Vec<NodeId>>> =
        l.layers().iter().map(|layer| layer.iter().copied().permutations(layer.len()).collect()).collect();
    guard(product(per_layer.iter().map(Vec::len)))?;
    let index_domains: Vec<Vec<usize>> = per_layer.iter().map(|p| (0..p.len()).collect()).collect();
    let mut best = Best::minimize();
    for_each_choice(&index_domains, |pick| {
        let orders: Vec<Vec<NodeId>> = pick.iter().enumerate().map(|(li, &i)| per_layer[li][i].clone()).collect();
        let c = crossings(l, &orders);
        best.offer(int(c as i64), || Witness::Layers(orders))
    });
    Ok(best.finish())
}
