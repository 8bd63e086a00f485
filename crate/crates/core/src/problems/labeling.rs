//! Distance-constrained labelling, frequency assignment and metric
//! labelling. Label `l` is target node `l + 1` for the first two; metric
//! labels are the target nodes themselves.

use num_traits::Zero;

use super::{
    cap_rows, invalid, require_simple, require_undirected, xv, EncodeError, FrequencyAssignment, Goal, GraphLabeling,
    Labeling, MetricLabeling,
};
use crate::framework::{build_output2, build_output3, MatchingInstance, ObjectiveForm, Regime};
use crate::graph::{Graph, NodeId};
use crate::ip::{declare_x_grid, IpModel, LinExpr, Relation, Table2Kind};
use crate::rational::{int, Rational};

pub fn encode_labeling(s: &Labeling) -> Result<IpModel, EncodeError> {
    match s {
        Labeling::Gl(gl) => encode_gl(gl),
        Labeling::Fsfa(f) => encode_fsfa(f),
    }
}

fn encode_gl(s: &GraphLabeling) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_undirected(g, "labelling")?;
    require_simple(g, "labelling")?;
    if s.k < 0 || s.m < s.k {
        return invalid(format!("separations need m >= k >= 0, got m = {}, k = {}", s.m, s.k));
    }
    if s.span < 0 {
        return invalid("the span bound must be nonnegative");
    }
    let ids = (s.span + 1) as usize;
    let target = Graph::empty(ids);
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, &target);
    crate::ip::add_table2_constraints(&mut m, Table2Kind::A1, g, &target)?;
    let adjacent: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let apart = g.distance_two_pairs()?;
    for (pairs, sep, fam) in [(&adjacent, s.m, "sep_edge"), (&apart, s.k, "sep_two")] {
        for &(u, v) in pairs.iter() {
            for p in 1..=ids {
                for q in p..=ids {
                    if ((q - p) as i64) >= sep {
                        break;
                    }
                    let mut rows = vec![[xv(&m, u, p), xv(&m, v, q)]];
                    if p != q {
                        rows.push([xv(&m, u, q), xv(&m, v, p)]);
                    }
                    for r in rows {
                        m.add_constraint(fam, LinExpr::sum(r), Relation::Le, int(1))?;
                    }
                }
            }
        }
    }
    if s.optimize {
        let mut rows = Vec::new();
        for u in g.nodes() {
            for id in 2..=ids {
                rows.push(LinExpr::new().with(xv(&m, u, id), int(id as i64 - 1)));
            }
        }
        cap_rows(&mut m, "span", Goal::Minimize, rows, int(0), int(s.span))?;
    }
    Ok(m)
}

/// Complete target with a self-loop on every node.
fn complete_with_loops(n: usize) -> Graph {
    let mut b = Graph::builder(n, false).allow_self_loops();
    for a in 1..=n {
        for c in a..=n {
            b = b.edge(a, c);
        }
    }
    b.build().expect("complete graph with loops")
}

fn encode_fsfa(s: &FrequencyAssignment) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_undirected(g, "frequency assignment")?;
    require_simple(g, "frequency assignment")?;
    if s.freqs == 0 {
        return invalid("the frequency set is empty");
    }
    let target = complete_with_loops(s.freqs);
    let mut inst = MatchingInstance::new(g.clone(), target.clone()).with_regime(Regime::ManyToOne);
    for (&(u, v), &t) in &s.separation {
        if !g.has_edge(u, v) {
            return invalid(format!("separation given for non-edge ({u}, {v})"));
        }
        if t < 0 {
            return invalid("separations must be nonnegative");
        }
        inst.set_forbidden((u, v), 0..=t);
    }
    for &((u, v), tau) in s.penalty.keys() {
        if !s.separation.get(&(u.min(v), u.max(v))).is_some_and(|&t| (0..=t).contains(&tau)) {
            return invalid(format!("penalty for ({u}, {v}) at difference {tau} has no matching separation"));
        }
    }
    for (&(e, tau), &p) in &s.penalty {
        inst.set_penalty(e, tau, p);
    }
    for e in g.edges() {
        for t in target.edges() {
            if t.u != t.v {
                inst.set_edge_cost((e.u, e.v), (t.u, t.v), int((t.v - t.u) as i64));
            }
        }
    }
    Ok(build_output3(&inst)?)
}

/// The framework instance behind a metric labelling problem.
pub(crate) fn metric_instance(s: &MetricLabeling) -> Result<MatchingInstance, EncodeError> {
    let g = &s.g;
    require_undirected(g, "metric labelling")?;
    require_simple(g, "metric labelling")?;
    let in_range = |a: NodeId| a >= 1 && a <= s.labels;
    let mut b = Graph::builder(s.labels, false).allow_self_loops();
    for &(a, c) in s.dist.keys() {
        if !in_range(a) || !in_range(c) {
            return invalid(format!("label pair ({a}, {c}) is outside 1..={}", s.labels));
        }
        if a > c {
            return invalid(format!("distance keys are written low label first, got ({a}, {c})"));
        }
        b = b.edge(a, c);
    }
    let target = b.build()?;
    let mut inst = MatchingInstance::new(g.clone(), target.clone());
    for (&u, set) in &s.allow {
        if let Some(&a) = set.iter().find(|&&a| !in_range(a)) {
            return invalid(format!("label {a} is outside 1..={}", s.labels));
        }
        if set.is_empty() {
            return invalid(format!("node {u} has no allowed label"));
        }
        inst.set_allow(u, set.iter().copied());
    }
    for (&(u, a), &c) in &s.node_cost {
        if !in_range(a) {
            return invalid(format!("label {a} is outside 1..={}", s.labels));
        }
        inst.set_node_cost(u, a, c);
    }
    for e in g.edges() {
        for t in target.edges() {
            let d: Rational = e.w * s.dist[&(t.u, t.v)];
            if !d.is_zero() {
                inst.set_edge_cost((e.u, e.v), (t.u, t.v), d);
            }
        }
    }
    Ok(inst)
}

pub fn encode_metric_labeling(s: &MetricLabeling) -> Result<IpModel, EncodeError> {
    if !matches!(s.form, ObjectiveForm::P2 | ObjectiveForm::P4) {
        return invalid(format!("metric labelling takes P2 or P4, not {}", s.form));
    }
    let inst = metric_instance(s)?;
    Ok(build_output2(&inst, s.form)?)
}
