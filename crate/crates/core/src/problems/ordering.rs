//! Golomb rulers, interval graph completion and layered crossing
//! minimisation.

use super::{cap_rows, families, forward_complete, invalid, require_simple, require_undirected, xv, EncodeError, Goal, Golomb};
use crate::graph::{Graph, LayeredGraph, NodeId};
use crate::ip::{declare_x_grid, IpModel, LinExpr, Relation, Sense, Table2Kind::*, VarTag};
use crate::rational::int;

/// Mark `i` of the ruler is pattern node `i`; position `p` is target node
/// `p + 1`.
pub fn encode_golomb(s: &Golomb) -> Result<IpModel, EncodeError> {
    if s.n == 0 {
        return invalid("a ruler needs at least one mark");
    }
    if s.n > s.k + 1 {
        return invalid(format!("{} marks do not fit on a ruler of length {}", s.n, s.k));
    }
    let marks = forward_complete(s.n);
    let ruler = forward_complete(s.k + 1);
    let mut m = IpModel::new();
    declare_x_grid(&mut m, &marks, &ruler);
    families(&mut m, &[A1, B2, E, G], &marks, &ruler)?;
    for d in 1..=s.k {
        let mut row = LinExpr::new();
        for e in marks.edges() {
            for a in 1..=s.k + 1 - d {
                row.add(m.var(&VarTag::y_arc(e.u, e.v, a, a + d)).expect("declared by (g)"), int(1));
            }
        }
        if row.len() > 1 {
            m.add_constraint("difference", row, Relation::Le, int(1))?;
        }
    }
    m.add_constraint("anchor", LinExpr::sum([xv(&m, 1, 1)]), Relation::Eq, int(1))?;
    if s.optimize {
        let mut rows = Vec::new();
        for u in marks.nodes() {
            for p in 2..=s.k + 1 {
                rows.push(LinExpr::new().with(xv(&m, u, p), int(p as i64 - 1)));
            }
        }
        cap_rows(&mut m, "length", Goal::Minimize, rows, int(0), int(s.k as i64))?;
    }
    Ok(m)
}

/// Fill variables live on the non-edges; `yf = 1` means the edge is added.
pub fn encode_igc(g: &Graph) -> Result<IpModel, EncodeError> {
    require_undirected(g, "interval completion")?;
    require_simple(g, "interval completion")?;
    if !g.is_connected() {
        return invalid("interval completion needs a connected graph");
    }
    let n = g.n();
    let positions = Graph::empty(n);
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, &positions);
    families(&mut m, &[A1, A2], g, &positions)?;
    let mut obj = LinExpr::new();
    for (u, v) in g.non_edges() {
        obj.add(m.binary(VarTag::fill(u, v)), int(1));
    }
    // An edge reaching from position a to b forces every node in between
    // to see its right end.
    for e in g.edges() {
        for (u, v) in [(e.u, e.v), (e.v, e.u)] {
            for z in g.nodes().filter(|&z| z != u && z != v && !g.adjacent(z, v)) {
                let fill = m.var(&VarTag::fill(z, v)).expect("declared on non-edges");
                for a in 1..=n {
                    for b in a + 2..=n {
                        for c in a + 1..b {
                            let row = LinExpr::sum([xv(&m, u, a), xv(&m, v, b), xv(&m, z, c)]).with(fill, int(-1));
                            m.add_constraint("fill", row, Relation::Le, int(2))?;
                        }
                    }
                }
            }
        }
    }
    m.set_objective(Sense::Minimize, obj)?;
    Ok(m)
}

/// Per-layer position variables `x_{u i}` (positions `1..=|layer|`) and one
/// crossing indicator per pair of arcs between the same two layers.
pub fn encode_mlcm(l: &LayeredGraph) -> Result<IpModel, EncodeError> {
    let mut m = IpModel::new();
    for layer in l.layers() {
        for &u in layer {
            for i in 1..=layer.len() {
                m.binary(VarTag::x(u, i));
            }
        }
    }
    for layer in l.layers() {
        let size = layer.len();
        for &u in layer {
            let row = LinExpr::sum((1..=size).map(|i| xv(&m, u, i)));
            m.add_constraint("a1", row, Relation::Eq, int(1))?;
        }
        for i in 1..=size {
            let row = LinExpr::sum(layer.iter().map(|&u| xv(&m, u, i)));
            m.add_constraint("a2", row, Relation::Eq, int(1))?;
        }
    }
    let mut obj = LinExpr::new();
    for li in 0..l.layers().len().saturating_sub(1) {
        let (top, bottom) = (l.layers()[li].len(), l.layers()[li + 1].len());
        let mut arcs = l.arcs_from_layer(li);
        arcs.sort_unstable();
        for (p, &(u, u2)) in arcs.iter().enumerate() {
            for &(v, v2) in &arcs[p + 1..] {
                if u == v || u2 == v2 {
                    continue;
                }
                let y = m.binary(VarTag::y_arc(u, u2, v, v2));
                obj.add(y, int(1));
                for i in 1..=top {
                    for j in i + 1..=top {
                        for i2 in 1..=bottom {
                            for j2 in i2 + 1..=bottom {
                                crossing_row(&mut m, y, [(u, i), (v, j), (v2, i2), (u2, j2)])?;
                                crossing_row(&mut m, y, [(u, j), (v, i), (u2, i2), (v2, j2)])?;
                            }
                        }
                    }
                }
            }
        }
    }
    m.set_objective(Sense::Minimize, obj)?;
    Ok(m)
}

fn crossing_row(m: &mut IpModel, y: crate::ip::VarId, at: [(NodeId, usize); 4]) -> Result<(), EncodeError> {
    let row = LinExpr::sum(at.iter().map(|&(u, i)| xv(m, u, i))).with(y, int(-1));
    m.add_constraint("cross", row, Relation::Le, int(3))?;
    Ok(())
}
