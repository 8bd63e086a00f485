//! Checks a proposed answer against the problem definition and recomputes
//! its value, without going through any model.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::framework::{admissible, evaluate};
use super::problems::{crossings, forced_fill};
use crate::framework::{MatchingInstance, ObjectiveForm, Output};
use crate::graph::{Graph, NodeId};
use crate::problems::{
    ArrangementKind, ColoringKind, CommonKind, Goal, IsoKind, KTspVariant, Labeling, ProblemSpec, Witness,
};
use crate::rational::{int, Rational};

type Check = Result<Rational, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn wrong_kind(w: &Witness) -> Check {
    fail(format!("unexpected answer shape: {w}"))
}

fn within(goal: Goal, v: Rational) -> Check {
    match goal {
        Goal::AtMost(b) if v > b => fail(format!("value {v} exceeds the bound {b}")),
        Goal::AtMost(_) => Ok(int(0)),
        Goal::Minimize => Ok(v),
    }
}

/// `pos[u]` from an ordering that must be a bijection onto `1..=n`.
fn positions(n: usize, ord: &BTreeMap<NodeId, usize>) -> Result<Vec<usize>, String> {
    let keys: BTreeSet<NodeId> = ord.keys().copied().collect();
    let vals: BTreeSet<usize> = ord.values().copied().collect();
    let all: BTreeSet<usize> = (1..=n).collect();
    if keys != all || vals != all {
        return fail("ordering is not a permutation of the nodes");
    }
    let mut pos = vec![0; n + 1];
    for (&u, &p) in ord {
        pos[u] = p;
    }
    Ok(pos)
}

fn injective(map: &BTreeMap<NodeId, NodeId>) -> bool {
    map.values().all_unique()
}

fn in_range(map: &BTreeMap<NodeId, NodeId>, n: usize, m: usize) -> bool {
    map.iter().all(|(&u, &a)| (1..=n).contains(&u) && (1..=m).contains(&a))
}

/// Validates `w` as an answer to `spec` and returns its value (0 for a
/// feasibility question).
pub fn check_witness(spec: &ProblemSpec, w: &Witness) -> Check {
    match (spec, w) {
        (ProblemSpec::KTsp(s), Witness::Tour(t)) => {
            if t.len() != s.k || !t.iter().all_unique() || t.iter().any(|&u| u == 0 || u > s.g.n()) {
                return fail("tour must visit k distinct nodes");
            }
            let mut ws = Vec::new();
            for i in 0..s.k {
                let (u, v) = (t[i], t[(i + 1) % s.k]);
                ws.push(s.g.weight(u, v).ok_or_else(|| format!("tour uses the missing arc ({u}, {v})"))?);
            }
            match s.variant {
                KTspVariant::A => Ok(int(0)),
                KTspVariant::B => within(s.goal, ws.iter().sum()),
                KTspVariant::C => within(s.goal, ws.into_iter().fold(int(0), Rational::max)),
            }
        }
        (ProblemSpec::Bandwidth(s), Witness::Ordering(o)) => {
            let pos = positions(s.g.n(), o)?;
            let mut width = 0i64;
            for e in s.g.edges() {
                if s.g.is_directed() && pos[e.u] > pos[e.v] {
                    return fail(format!("arc ({}, {}) points backwards", e.u, e.v));
                }
                width = width.max((pos[e.u] as i64 - pos[e.v] as i64).abs());
            }
            within(s.goal, int(width))
        }
        (ProblemSpec::Arrangement(s), Witness::Ordering(o)) => {
            let (g, n) = (&s.g, s.g.n());
            let pos = positions(n, o)?;
            let gap = |u: NodeId, v: NodeId| int((pos[u] as i64 - pos[v] as i64).abs());
            let v = match s.kind {
                ArrangementKind::Lap => g.edges().iter().map(|e| e.w * gap(e.u, e.v)).sum(),
                ArrangementKind::Dlap => {
                    if let Some(e) = g.edges().iter().find(|e| pos[e.u] > pos[e.v]) {
                        return fail(format!("arc ({}, {}) points backwards", e.u, e.v));
                    }
                    g.edges().iter().map(|e| e.w * gap(e.u, e.v)).sum()
                }
                ArrangementKind::Pmp => g
                    .nodes()
                    .map(|u| g.neighbors(u).expect("node").iter().map(|&v| pos[u].saturating_sub(pos[v])).max().unwrap_or(0))
                    .map(|x| int(x as i64))
                    .sum(),
                ArrangementKind::Mclap => {
                    let cut = |i: usize| {
                        g.edges().iter().filter(|e| pos[e.u].min(pos[e.v]) <= i && i < pos[e.u].max(pos[e.v])).count()
                    };
                    int((1..n).map(cut).max().unwrap_or(0) as i64)
                }
            };
            within(s.goal, v)
        }
        (ProblemSpec::Isomorphism(s), Witness::Map(m)) => {
            let (host, pat) = (&s.g, &s.g2);
            let image: BTreeSet<NodeId> = m.values().copied().collect();
            if !in_range(m, host.n(), pat.n()) || !injective(m) || image.len() != pat.n() {
                return fail("map must cover every pattern node once");
            }
            if s.kind == IsoKind::Gi && m.len() != host.n() {
                return fail("isomorphism must be a bijection");
            }
            for ((&u, &a), (&v, &b)) in m.iter().tuple_combinations() {
                let (he, pe) = (host.has_edge(u, v), pat.has_edge(a, b));
                if pe && !he {
                    return fail(format!("pattern edge ({a}, {b}) is missing in the host"));
                }
                if s.kind != IsoKind::Si && he && !pe {
                    return fail(format!("host edge ({u}, {v}) is not in the pattern"));
                }
            }
            Ok(int(0))
        }
        (ProblemSpec::CommonSubgraph(s), Witness::Relation(r)) if s.kind == CommonKind::Msm => {
            let (g, h) = (&s.g, &s.g2);
            if r.iter().any(|&(u, a)| u == 0 || u > g.n() || a == 0 || a > h.n()) {
                return fail("relation pair out of range");
            }
            for (&(u, a), &(v, b)) in r.iter().tuple_combinations() {
                if g.has_edge(u, v) != h.has_edge(a, b) || g.has_edge(v, u) != h.has_edge(b, a) {
                    return fail(format!("pairs ({u},{a}) and ({v},{b}) disagree on arcs"));
                }
            }
            Ok(int(r.len() as i64))
        }
        (ProblemSpec::CommonSubgraph(s), Witness::Map(m)) if s.kind != CommonKind::Msm => {
            let (g, h) = (&s.g, &s.g2);
            if !in_range(m, g.n(), h.n()) || !injective(m) {
                return fail("map must be a partial injection");
            }
            match s.kind {
                CommonKind::Lcs => Ok(g
                    .edges()
                    .iter()
                    .filter_map(|e| Some((e.w * h.weight(*m.get(&e.u)?, *m.get(&e.v)?)?).max(int(0))))
                    .sum()),
                CommonKind::Mism => {
                    for ((&u, &a), (&v, &b)) in m.iter().tuple_combinations() {
                        if g.has_edge(u, v) != h.has_edge(a, b) || g.has_edge(v, u) != h.has_edge(b, a) {
                            return fail(format!("nodes {u} and {v} do not induce the same arcs"));
                        }
                    }
                    Ok(int(m.len() as i64))
                }
                _ => {
                    if m.values().tuple_windows().any(|(a, b)| a > b) {
                        return fail("alignment links cross");
                    }
                    let shared = g
                        .edges()
                        .iter()
                        .filter(|e| matches!((m.get(&e.u), m.get(&e.v)), (Some(&a), Some(&b)) if h.has_edge(a, b)))
                        .count();
                    Ok(int(shared as i64))
                }
            }
        }
        (ProblemSpec::Coloring(s), Witness::Map(m)) if matches!(s.kind, ColoringKind::Gh | ColoringKind::Dgh) => {
            let h = s.g2.as_ref().ok_or("missing target graph")?;
            if m.len() != s.g.n() || !in_range(m, s.g.n(), h.n()) {
                return fail("homomorphism must map every node");
            }
            match s.g.edges().iter().find(|e| !h.has_edge(m[&e.u], m[&e.v])) {
                Some(e) => fail(format!("edge ({}, {}) is not mapped onto an edge", e.u, e.v)),
                None => Ok(int(0)),
            }
        }
        (ProblemSpec::Coloring(s), Witness::Labels(l)) => check_coloring(s, l),
        (ProblemSpec::Labeling(Labeling::Gl(s)), Witness::Labels(l)) => {
            let g = &s.g;
            if l.len() != g.n() || l.iter().any(|(&u, &x)| u == 0 || u > g.n() || !(0..=s.span).contains(&x)) {
                return fail("every node needs a label in range");
            }
            for e in g.edges() {
                if (l[&e.u] - l[&e.v]).abs() < s.m {
                    return fail(format!("edge ({}, {}) is too close", e.u, e.v));
                }
            }
            for (u, v) in g.nodes().tuple_combinations() {
                let two = !g.adjacent(u, v) && g.nodes().any(|z| g.adjacent(u, z) && g.adjacent(z, v));
                if two && (l[&u] - l[&v]).abs() < s.k {
                    return fail(format!("nodes {u} and {v} at distance two are too close"));
                }
            }
            Ok(if s.optimize { int(l.values().copied().max().unwrap_or(0)) } else { int(0) })
        }
        (ProblemSpec::Labeling(Labeling::Fsfa(s)), Witness::Labels(l)) => {
            let g = &s.g;
            if l.len() != g.n() || l.iter().any(|(&u, &x)| u == 0 || u > g.n() || x < 0 || x >= s.freqs as i64) {
                return fail("every transmitter needs a frequency");
            }
            let mut total = int(0);
            for e in g.edges() {
                let gap = (l[&e.u] - l[&e.v]).abs();
                let sep = s.separation.get(&(e.u, e.v)).or_else(|| s.separation.get(&(e.v, e.u)));
                if sep.is_some_and(|&t| gap <= t) {
                    let p = s.penalty.get(&((e.u, e.v), gap)).or_else(|| s.penalty.get(&((e.v, e.u), gap)));
                    total += p.copied().unwrap_or(int(0));
                }
            }
            Ok(total)
        }
        (ProblemSpec::MetricLabeling(s), Witness::Map(m)) => {
            let g = &s.g;
            if m.len() != g.n() || !in_range(m, g.n(), s.labels) {
                return fail("every object needs a label");
            }
            if let Some((u, a)) = m.iter().find(|(u, a)| s.allow.get(u).is_some_and(|set| !set.contains(a))) {
                return fail(format!("node {u} may not take label {a}"));
            }
            let mut load = vec![int(0); s.labels + 1];
            let mut total = int(0);
            for (&u, &a) in m {
                let c = s.node_cost.get(&(u, a)).copied().unwrap_or_default();
                load[a] += c;
                total += c;
            }
            for e in g.edges() {
                let (a, b) = (m[&e.u], m[&e.v]);
                let d = e.w * s.distance(a, b).ok_or_else(|| format!("label pair ({a}, {b}) has no distance"))?;
                total += d;
                load[a] += d;
                if a != b {
                    load[b] += d;
                }
            }
            Ok(match s.form {
                ObjectiveForm::P2 => total,
                _ => load.into_iter().fold(int(0), Rational::max),
            })
        }
        (ProblemSpec::Golomb(s), Witness::Marks(marks)) => {
            if marks.len() != s.n || marks.first() != Some(&0) || marks.iter().any(|&x| x < 0 || x > s.k as i64) {
                return fail("ruler needs n marks in range starting at 0");
            }
            let diffs: Vec<i64> = marks.iter().tuple_combinations().map(|(a, b)| (b - a).abs()).collect();
            if diffs.contains(&0) || !diffs.iter().all_unique() {
                return fail("two mark pairs share a distance");
            }
            Ok(if s.optimize { int(*marks.iter().max().expect("nonempty")) } else { int(0) })
        }
        (ProblemSpec::Igc(g), Witness::Ordering(o)) => {
            let pos = positions(g.n(), o)?;
            Ok(int(forced_fill(g, &pos).len() as i64))
        }
        (ProblemSpec::Mlcm(l), Witness::Layers(rows)) => {
            if rows.len() != l.layers().len()
                || rows.iter().zip(l.layers()).any(|(r, layer)| {
                    r.len() != layer.len() || r.iter().copied().collect::<BTreeSet<_>>() != layer.iter().copied().collect()
                })
            {
                return fail("each layer must be a permutation of its nodes");
            }
            Ok(int(crossings(l, rows) as i64))
        }
        (ProblemSpec::Framework(inst, out), Witness::Map(m)) => check_framework(inst, *out, m),
        _ => wrong_kind(w),
    }
}

fn check_coloring(s: &crate::problems::Coloring, l: &BTreeMap<NodeId, i64>) -> Check {
    let g: &Graph = &s.g;
    let k = match s.kind {
        ColoringKind::Mwis => 1,
        _ => s.k.unwrap_or(g.n().max(1)),
    } as i64;
    if l.iter().any(|(&u, &c)| u == 0 || u > g.n() || c < 1 || c > k) {
        return fail("colour out of range");
    }
    let partial = matches!(s.kind, ColoringKind::MwscpA | ColoringKind::MwscpB | ColoringKind::Mwis);
    if !partial && l.len() != g.n() {
        return fail("every node needs a colour");
    }
    let proper = || g.edges().iter().all(|e| !matches!((l.get(&e.u), l.get(&e.v)), (Some(a), Some(b)) if a == b));
    let cliques = || g.nodes().tuple_combinations().all(|(u, v)| l.get(&u).is_none() || l.get(&u) != l.get(&v) || g.adjacent(u, v));
    let top = || int(l.values().copied().max().unwrap_or(0));
    let cost = || -> Rational { l.iter().map(|(&u, &c)| s.costs.get(&(u, c as usize)).copied().unwrap_or_default()).sum() };
    match s.kind {
        ColoringKind::Mcp | ColoringKind::Mwis => {
            if !cliques() {
                return fail("a colour class is not a clique");
            }
            Ok(g.edges()
                .iter()
                .filter(|e| l.get(&e.u).is_some() && l.get(&e.u) == l.get(&e.v))
                .map(|e| if s.kind == ColoringKind::Mwis { int(1) } else { e.w })
                .sum())
        }
        _ if !proper() => fail("adjacent nodes share a colour"),
        ColoringKind::Gkc => Ok(int(0)),
        ColoringKind::Gc => Ok(top()),
        ColoringKind::MwscpA => Ok(cost()),
        ColoringKind::MwscpB => {
            if Some(cost()) != s.z_star {
                return fail("colouring does not reach Z*");
            }
            Ok(top())
        }
        ColoringKind::Wvcp => Ok((1..=k)
            .map(|c| l.iter().filter(|(_, &x)| x == c).map(|(u, _)| s.weights[u]).fold(int(0), Rational::max))
            .sum()),
        ColoringKind::Gh | ColoringKind::Dgh => fail("homomorphisms answer with a map"),
    }
}

/// Validates a framework map and returns its objective value.
pub fn check_framework(inst: &MatchingInstance, output: Output, m: &BTreeMap<NodeId, NodeId>) -> Check {
    if !in_range(m, inst.g.n(), inst.g2.n()) {
        return fail("map entry out of range");
    }
    let f: Vec<Option<NodeId>> = inst.g.nodes().map(|u| m.get(&u).copied()).collect();
    if !admissible(inst, &f, output) {
        return fail("map violates the matching constraints");
    }
    Ok(evaluate(inst, &f, output))
}
