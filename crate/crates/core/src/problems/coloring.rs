//! Colouring, homomorphism and clique-partition encoders.

use num_traits::{Signed, Zero};

use super::{families, invalid, require_directed, require_simple, require_undirected, xv, Coloring, ColoringKind, EncodeError, Goal, cap_rows};
use crate::graph::Graph;
use crate::ip::{declare_x_grid, IpModel, LinExpr, Relation, Sense, Table2Kind::*, VarTag};
use crate::rational::{int, Rational};

/// `k` isolated colour nodes. Only the node set matters to the families used.
fn palette(k: usize) -> Graph {
    Graph::empty(k)
}

fn colours(s: &Coloring) -> Result<usize, EncodeError> {
    match (s.kind, s.k) {
        (ColoringKind::Gkc, None) => invalid("GKC needs the number of colours K"),
        (ColoringKind::Mwis, _) => Ok(1),
        (_, Some(0)) => invalid("the number of colours must be positive"),
        (_, Some(k)) => Ok(k),
        (_, None) => Ok(s.g.n().max(1)),
    }
}

pub fn encode_coloring(s: &Coloring) -> Result<IpModel, EncodeError> {
    let g = &s.g;
    require_simple(g, "colouring")?;
    if s.kind == ColoringKind::Dgh {
        require_directed(g, "DGH")?;
    } else {
        require_undirected(g, "colouring")?;
    }
    let mut m = IpModel::new();
    match s.kind {
        ColoringKind::Gh | ColoringKind::Dgh => {
            let Some(g2) = &s.g2 else { return invalid("homomorphism needs a target graph") };
            require_simple(g2, "the homomorphism target")?;
            declare_x_grid(&mut m, g, g2);
            if s.kind == ColoringKind::Gh {
                require_undirected(g2, "GH")?;
                families(&mut m, &[A1, C1, I1], g, g2)?;
            } else {
                require_directed(g2, "DGH")?;
                families(&mut m, &[A1, D1, E, I2], g, g2)?;
            }
            return Ok(m);
        }
        _ => {}
    }
    let k = colours(s)?;
    let target = palette(k);
    declare_x_grid(&mut m, g, &target);
    let index_rows = |m: &IpModel| -> Vec<LinExpr> {
        let mut rows = Vec::new();
        for u in g.nodes() {
            for a in 1..=k {
                rows.push(LinExpr::new().with(xv(m, u, a), int(a as i64)));
            }
        }
        rows
    };
    match s.kind {
        ColoringKind::Gkc => families(&mut m, &[A1, I1], g, &target)?,
        ColoringKind::Gc => {
            families(&mut m, &[A1, I1], g, &target)?;
            let rows = index_rows(&m);
            cap_rows(&mut m, "colour", Goal::Minimize, rows, int(0), int(k as i64))?;
        }
        ColoringKind::MwscpA | ColoringKind::MwscpB => {
            if s.costs.is_empty() {
                return invalid("MWSCP needs colour costs");
            }
            if let Some(&(u, a)) = s.costs.keys().find(|&&(u, a)| u == 0 || u > g.n() || a == 0 || a > k) {
                return invalid(format!("cost entry ({u}, {a}) is outside the graph or the palette"));
            }
            families(&mut m, &[B1, I1], g, &target)?;
            let mut value = LinExpr::new();
            for (&(u, a), &c) in &s.costs {
                if !c.is_zero() {
                    value.add(xv(&m, u, a), c);
                }
            }
            if s.kind == ColoringKind::MwscpA {
                m.set_objective(Sense::Maximize, value)?;
            } else {
                let Some(z) = s.z_star else { return invalid("MWSCP strength needs the optimal value Z*") };
                m.add_constraint("value", value, Relation::Eq, z)?;
                let rows = index_rows(&m);
                cap_rows(&mut m, "colour", Goal::Minimize, rows, int(0), int(k as i64))?;
            }
        }
        ColoringKind::Wvcp => {
            if let Some(u) = g.nodes().find(|u| !s.weights.contains_key(u)) {
                return invalid(format!("WVCP needs a weight for node {u}"));
            }
            if s.weights.values().any(|w| w.is_negative()) {
                return invalid("WVCP weights must be nonnegative");
            }
            families(&mut m, &[A1, I1], g, &target)?;
            let heaviest = s.weights.values().copied().fold(Rational::zero(), Rational::max);
            let mut obj = LinExpr::new();
            for a in 1..=k {
                let ka = m.continuous(VarTag::KP(a), int(0), Some(heaviest))?;
                for u in g.nodes() {
                    let w = s.weights[&u];
                    if w.is_zero() {
                        continue;
                    }
                    let row = LinExpr::new().with(xv(&m, u, a), w).with(ka, int(-1));
                    m.add_constraint("weight", row, Relation::Le, int(0))?;
                }
                obj.add(ka, int(1));
            }
            m.set_objective(Sense::Minimize, obj)?;
        }
        ColoringKind::Mcp | ColoringKind::Mwis => {
            if s.kind == ColoringKind::Mwis {
                families(&mut m, &[B1], g, &target)?;
            } else {
                families(&mut m, &[A1], g, &target)?;
            }
            // Each class is a clique.
            for (u, v) in g.non_edges() {
                for a in 1..=k {
                    let row = LinExpr::sum([xv(&m, u, a), xv(&m, v, a)]);
                    m.add_constraint("clique", row, Relation::Le, int(1))?;
                }
            }
            let mut obj = LinExpr::new();
            for e in g.edges() {
                let w = if s.kind == ColoringKind::Mwis { int(1) } else { e.w };
                if w.is_zero() {
                    continue;
                }
                for a in 1..=k {
                    let y = m.binary(VarTag::y_edge(e.u, e.v, a, a));
                    let (xu, xv_) = (xv(&m, e.u, a), xv(&m, e.v, a));
                    for x in [xu, xv_] {
                        let row = LinExpr::new().with(y, int(1)).with(x, int(-1));
                        m.add_constraint("link_up", row, Relation::Le, int(0))?;
                    }
                    if w.is_negative() {
                        let row = LinExpr::sum([xu, xv_]).with(y, int(-1));
                        m.add_constraint("link", row, Relation::Le, int(1))?;
                    }
                    obj.add(y, w);
                }
            }
            m.set_objective(Sense::Maximize, obj)?;
        }
        ColoringKind::Gh | ColoringKind::Dgh => unreachable!("handled above"),
    }
    Ok(m)
}
