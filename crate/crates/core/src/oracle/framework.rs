//! Enumeration oracle for the three framework outputs.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_traits::Zero;

use super::{bad, for_each_choice, guard, product, Best, OracleError, OracleResult};
use crate::framework::{MatchingInstance, ObjectiveForm, Output};
use crate::graph::NodeId;
use crate::problems::Witness;
use crate::rational::Rational;

/// `f[u - 1]`; `None` leaves `u` unmatched.
pub(crate) type PartialMap = [Option<NodeId>];

/// Whether `f` satisfies the regime, allowable sets, edge preservation, the
/// reverse rows and (for the first two outputs) the forbidden values.
pub(crate) fn admissible(inst: &MatchingInstance, f: &PartialMap, output: Output) -> bool {
    let (g, h) = (&inst.g, &inst.g2);
    for u in g.nodes() {
        match f[u - 1] {
            None if inst.regime.is_total() => return false,
            Some(a) if !inst.allows(u, a) => return false,
            _ => {}
        }
    }
    let hits = |a: NodeId| f.iter().filter(|&&t| t == Some(a)).count();
    if inst.regime.is_injective() && h.nodes().any(|a| hits(a) > 1) {
        return false;
    }
    if inst.regime.is_onto() && h.nodes().any(|a| hits(a) != 1) {
        return false;
    }
    for e in g.proper_edges() {
        let (Some(a), Some(b)) = (f[e.u - 1], f[e.v - 1]) else { continue };
        if inst.preserve_edges && !h.has_edge(a, b) {
            return false;
        }
        if output != Output::Penalty && h.has_edge(a, b) && inst.is_forbidden((e.u, e.v), (a, b)).is_some() {
            return false;
        }
    }
    if inst.reflect_target_edges {
        for (u, v) in g.nodes().flat_map(|u| (u + 1..=g.n()).map(move |v| (u, v))) {
            if let (Some(a), Some(b)) = (f[u - 1], f[v - 1]) {
                if a != b && h.has_edge(a, b) && !g.adjacent(u, v) {
                    return false;
                }
            }
        }
    }
    true
}

/// Objective value of an admissible `f` under `output`.
pub(crate) fn evaluate(inst: &MatchingInstance, f: &PartialMap, output: Output) -> Rational {
    let (g, h) = (&inst.g, &inst.g2);
    let zero = Rational::zero();
    let cu = |u: NodeId| f[u - 1].map_or(zero, |a| inst.c(u, a));
    // Cost of the pattern edge {u, v} where it landed, if on a target edge.
    let de = |u: NodeId, v: NodeId| match (f[u - 1], f[v - 1]) {
        (Some(a), Some(b)) if h.has_edge(a, b) => inst.d((u, v), (a, b)),
        _ => zero,
    };
    let nbrs = |u: NodeId| g.neighbors(u).expect("node").iter().copied().filter(move |&v| v != u);
    let pos = |v: Rational| v.max(zero);
    let form = match output {
        Output::Feasibility => return zero,
        Output::Penalty => {
            let mut total = zero;
            for e in g.proper_edges() {
                if let (Some(a), Some(b)) = (f[e.u - 1], f[e.v - 1]) {
                    if h.has_edge(a, b) {
                        if let Some(tau) = inst.is_forbidden((e.u, e.v), (a, b)) {
                            total += inst.penalty_of((e.u, e.v), tau).unwrap_or(zero);
                        }
                    }
                }
            }
            return total;
        }
        Output::Optimize(form) => form,
    };
    match form {
        ObjectiveForm::P1 => {
            if g.proper_edges().next().is_none() {
                return pos(g.nodes().map(cu).max().unwrap_or(zero));
            }
            pos(g.nodes().flat_map(|u| nbrs(u).map(move |v| cu(u) + de(u, v))).max().unwrap_or(zero))
        }
        ObjectiveForm::P2 => g.nodes().map(cu).sum::<Rational>() + g.proper_edges().map(|e| de(e.u, e.v)).sum::<Rational>(),
        ObjectiveForm::P3 => g.nodes().map(|u| pos(nbrs(u).map(|v| cu(u) + de(u, v)).max().unwrap_or(zero))).sum(),
        ObjectiveForm::P4 => {
            let load = |a: NodeId| {
                let nodes: Rational = g.nodes().filter(|&u| f[u - 1] == Some(a)).map(cu).sum();
                let edges: Rational = g
                    .proper_edges()
                    .filter(|e| f[e.u - 1] == Some(a) || f[e.v - 1] == Some(a))
                    .map(|e| de(e.u, e.v))
                    .sum();
                nodes + edges
            };
            pos(h.nodes().map(load).max().unwrap_or(zero))
        }
        ObjectiveForm::P5 => h
            .nodes()
            .map(|a| {
                let best = g
                    .nodes()
                    .filter(|&u| f[u - 1] == Some(a))
                    .map(|u| cu(u) + nbrs(u).map(|v| de(u, v)).sum::<Rational>())
                    .max()
                    .unwrap_or(zero);
                pos(best)
            })
            .sum(),
        ObjectiveForm::P6 => pos(g.nodes().map(|u| cu(u) + nbrs(u).map(|v| de(u, v)).sum::<Rational>()).max().unwrap_or(zero)),
        ObjectiveForm::P7 => {
            let cut = |i: NodeId| -> Rational {
                g.proper_edges()
                    .filter_map(|e| {
                        let (a, b) = (f[e.u - 1]?, f[e.v - 1]?);
                        let (lo, hi) = (a.min(b), a.max(b));
                        (lo != hi && h.has_edge(lo, hi) && lo <= i && i < hi).then(|| cu(e.u) + cu(e.v) + de(e.u, e.v))
                    })
                    .sum()
            };
            pos(h.nodes().map(cut).max().unwrap_or(zero))
        }
    }
}

/// Exact answer of the framework problem by enumerating every map.
pub fn oracle_framework(inst: &MatchingInstance, output: Output) -> Result<OracleResult, OracleError> {
    inst.validate().map_err(|e| OracleError::Invalid(e.to_string()))?;
    let directed = inst.g.is_directed();
    if directed && output != Output::Feasibility {
        return bad("objectives and penalties need undirected graphs");
    }
    if directed && inst.reflect_target_edges {
        return bad("reverse edge rows need undirected graphs");
    }
    if output == Output::Penalty {
        for e in inst.g.proper_edges() {
            for t in inst.g2.edges() {
                if let Some(tau) = inst.is_forbidden((e.u, e.v), (t.u, t.v)) {
                    if inst.penalty_of((e.u, e.v), tau).is_none() {
                        return bad(format!("no penalty for edge ({}, {}) at {tau}", e.u, e.v));
                    }
                }
            }
        }
    }
    let domains: Vec<Vec<Option<NodeId>>> = inst
        .g
        .nodes()
        .map(|u| {
            let mut d: Vec<Option<NodeId>> = inst.allowed(u).into_iter().map(Some).collect();
            if !inst.regime.is_total() {
                d.insert(0, None);
            }
            d
        })
        .collect();
    guard(product(domains.iter().map(Vec::len)))?;
    let mut best = if output == Output::Feasibility { Best::feasibility() } else { Best::minimize() };
    for_each_choice(&domains, |f| {
        if !admissible(inst, f, output) {
            return ControlFlow::Continue(());
        }
        best.offer(evaluate(inst, f, output), || Witness::Map(as_map(f)))
    });
    Ok(best.finish())
}

pub(crate) fn as_map(f: &PartialMap) -> BTreeMap<NodeId, NodeId> {
    f.iter().enumerate().filter_map(|(i, a)| a.map(|a| (i + 1, a))).collect()
}
