//! Circuits and linear orderings: k-TSP, bandwidth and the arrangement
//! family.

use num_traits::Zero;

use super::{
    cap_rows, families, forward_complete, integral_bound, invalid, require_directed, require_nonnegative_weights,
    require_simple, require_undirected, xv, Arrangement, ArrangementKind, Bandwidth, EncodeError, Goal, KTsp,
    KTspVariant,
};
use crate::framework::{build_output2, MatchingInstance, ObjectiveForm, Regime};
use crate::graph::Graph;
use crate::ip::{declare_x_grid, IpModel, LinExpr, Relation, Table2Kind::*, VarTag};
use crate::rational::{int, Rational};

/// Target digraph `1 -> 2 -> ... -> k -> 1`.
fn circle(k: usize) -> Graph {
    let arcs: Vec<_> = (1..k).map(|a| (a, a + 1)).chain([(k, 1)]).collect();
    Graph::directed(k, &arcs).expect("circle arcs are simple")
}

pub fn encode_ktsp(s: &KTsp) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_directed(g, "k-TSP")?;
    require_simple(g, "k-TSP")?;
    if s.k < 2 || s.k > g.n() {
        return invalid(format!("k = {} must lie in 2..={}", s.k, g.n()));
    }
    let k = s.k;
    let target = circle(k);
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, &target);
    families(&mut m, &[A2, B1], g, &target)?;
    // Whoever sits at position a must have an out-neighbour at the next one.
    for u in g.nodes() {
        for a in 1..=k {
            let next = if a == k { 1 } else { a + 1 };
            let mut row = LinExpr::sum([xv(&m, u, a)]);
            for &v in g.neighbors(u)? {
                row.add(xv(&m, v, next), int(-1));
            }
            m.add_constraint("succ", row, Relation::Le, int(0))?;
        }
    }
    if s.variant == KTspVariant::A {
        return Ok(m);
    }
    require_nonnegative_weights(g, "k-TSP")?;
    families(&mut m, &[G], g, &target)?;
    let mut rows = Vec::new();
    let mut total = LinExpr::new();
    let mut mass = Rational::zero();
    let mut heaviest = Rational::zero();
    for e in g.edges() {
        if e.w.is_zero() {
            continue;
        }
        mass += e.w;
        heaviest = heaviest.max(e.w);
        for t in target.edges() {
            let y = m.var(&VarTag::y_arc(e.u, e.v, t.u, t.v)).expect("declared by (g)");
            match s.variant {
                KTspVariant::B => {
                    total.add(y, e.w);
                }
                _ => rows.push(LinExpr::new().with(y, e.w)),
            }
        }
    }
    let hi = if s.variant == KTspVariant::B {
        rows.push(total);
        mass
    } else {
        heaviest
    };
    cap_rows(&mut m, "length", s.goal, rows, int(0), hi)?;
    Ok(m)
}

/// Targets `|a - b| <= k` (undirected) or `0 < b - a <= k` (directed).
fn band(n: usize, k: i64, directed: bool) -> Graph {
    let mut pairs = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if (b - a) as i64 <= k {
                pairs.push((a, b));
            }
        }
    }
    if directed {
        Graph::directed(n, &pairs).expect("band arcs")
    } else {
        Graph::undirected(n, &pairs).expect("band edges")
    }
}

pub fn encode_bandwidth(s: &Bandwidth) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_simple(g, "bandwidth")?;
    let n = g.n();
    let directed = g.is_directed();
    let mut m = IpModel::new();
    if let Some(k) = integral_bound(s.goal, "bandwidth")? {
        let target = band(n, k, directed);
        declare_x_grid(&mut m, g, &target);
        let kinds: &[_] = if directed { &[A1, A2, D1, E] } else { &[A1, A2, C1] };
        families(&mut m, kinds, g, &target)?;
        return Ok(m);
    }
    let target = if directed { forward_complete(n) } else { Graph::complete(n) };
    declare_x_grid(&mut m, g, &target);
    let kinds: &[_] = if directed { &[A1, A2, E, G] } else { &[A1, A2, F] };
    families(&mut m, kinds, g, &target)?;
    let mut rows = Vec::new();
    for e in g.edges() {
        for t in target.edges() {
            let tag = if directed { VarTag::y_arc(e.u, e.v, t.u, t.v) } else { VarTag::y_edge(e.u, e.v, t.u, t.v) };
            let y = m.var(&tag).expect("declared by the linking family");
            rows.push(LinExpr::new().with(y, int((t.v - t.u) as i64)));
        }
    }
    cap_rows(&mut m, "stretch", Goal::Minimize, rows, int(0), int(n.saturating_sub(1) as i64))?;
    Ok(m)
}

pub fn encode_arrangement(s: &Arrangement) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_simple(g, "linear arrangement")?;
    let n = g.n();
    match s.kind {
        ArrangementKind::Lap | ArrangementKind::Dlap => {
            let directed = s.kind == ArrangementKind::Dlap;
            if directed {
                require_directed(g, "DLAP")?;
            } else {
                require_undirected(g, "LAP")?;
            }
            require_nonnegative_weights(g, "linear arrangement")?;
            let target = if directed { forward_complete(n) } else { Graph::complete(n) };
            let mut m = IpModel::new();
            declare_x_grid(&mut m, g, &target);
            let kinds: &[_] = if directed { &[A1, A2, E, G] } else { &[A1, A2, F] };
            families(&mut m, kinds, g, &target)?;
            let mut row = LinExpr::new();
            let mut mass = Rational::zero();
            for e in g.edges() {
                mass += e.w * int(n.saturating_sub(1) as i64);
                for t in target.edges() {
                    let coef = e.w * int((t.v - t.u) as i64);
                    if coef.is_zero() {
                        continue;
                    }
                    let tag =
                        if directed { VarTag::y_arc(e.u, e.v, t.u, t.v) } else { VarTag::y_edge(e.u, e.v, t.u, t.v) };
                    row.add(m.var(&tag).expect("linked"), coef);
                }
            }
            cap_rows(&mut m, "length", s.goal, vec![row], int(0), mass)?;
            Ok(m)
        }
        ArrangementKind::Pmp => {
            require_undirected(g, "PMP")?;
            if s.goal.is_feasibility() {
                return invalid("PMP is posed as a minimisation only");
            }
            // c(u, a) = a and d({u,v}, {a,b}) = -min(a, b) under the per-node
            // maximum objective.
            let mut inst = MatchingInstance::new(g.clone(), Graph::complete(n)).with_regime(Regime::OntoTotal);
            for u in g.nodes() {
                for a in 1..=n {
                    inst.set_node_cost(u, a, int(a as i64));
                }
            }
            for e in g.edges() {
                for t in Graph::complete(n).edges() {
                    inst.set_edge_cost((e.u, e.v), (t.u, t.v), -int(t.u.min(t.v) as i64));
                }
            }
            Ok(build_output2(&inst, ObjectiveForm::P3)?)
        }
        ArrangementKind::Mclap => {
            require_undirected(g, "MCLAP")?;
            let target = Graph::complete(n);
            let mut m = IpModel::new();
            declare_x_grid(&mut m, g, &target);
            families(&mut m, &[A1, A2, F], g, &target)?;
            let mut rows = Vec::new();
            for i in 1..n {
                let mut row = LinExpr::new();
                for e in g.edges() {
                    for t in target.edges().iter().filter(|t| t.u <= i && i < t.v) {
                        row.add(m.var(&VarTag::y_edge(e.u, e.v, t.u, t.v)).expect("linked"), int(1));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
            cap_rows(&mut m, "cut", s.goal, rows, int(0), int(g.m() as i64))?;
            Ok(m)
        }
    }
}
