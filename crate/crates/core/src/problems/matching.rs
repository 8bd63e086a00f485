//! Isomorphism and common-subgraph problems.

use num_traits::Zero;

use super::{
    families, invalid, require_directed, require_simple, require_undirected, xv, CommonKind, CommonSubgraph,
    EncodeError, IsoKind, Isomorphism,
};
use crate::ip::{declare_x_grid, IpModel, LinExpr, Relation, Sense, Table2Kind::*, VarId, VarTag};
use crate::rational::int;

pub fn encode_isomorphism(s: &Isomorphism) -> Result<IpModel, EncodeError> {
    let (g, g2) = (&s.g, &s.g2);
    for h in [g, g2] {
        require_undirected(h, "isomorphism")?;
        require_simple(h, "isomorphism")?;
    }
    match s.kind {
        IsoKind::Gi if g.n() != g2.n() => {
            return invalid(format!("isomorphism needs equal node counts, got {} and {}", g.n(), g2.n()))
        }
        IsoKind::Si | IsoKind::Isi if g.n() < g2.n() => {
            return invalid(format!("the host has {} nodes but the pattern has {}", g.n(), g2.n()))
        }
        _ => {}
    }
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, g2);
    let kinds: &[_] = match s.kind {
        IsoKind::Gi => &[A1, A2, C1, C2],
        IsoKind::Si => &[A2, B1, C2],
        IsoKind::Isi => &[A2, B1, C1, C2],
    };
    families(&mut m, kinds, g, g2)?;
    Ok(m)
}

/// `y <= x` rows reading a placement from the `x` grid.
fn indicator(m: &mut IpModel, tag: VarTag, xs: [VarId; 2]) -> Result<VarId, EncodeError> {
    let y = m.binary(tag);
    for x in xs {
        m.add_constraint("indicate", LinExpr::new().with(y, int(1)).with(x, int(-1)), Relation::Le, int(0))?;
    }
    Ok(y)
}

pub fn encode_common_subgraph(s: &CommonSubgraph) -> Result<IpModel, EncodeError> {
    let (g, g2) = (&s.g, &s.g2);
    for h in [g, g2] {
        require_simple(h, "common subgraph")?;
        match s.kind {
            CommonKind::Lcs | CommonKind::Cmp => require_undirected(h, "LCS and CMP")?,
            CommonKind::Mism | CommonKind::Msm => {
                require_directed(h, "MISM and MSM")?;
                if h.has_antiparallel_arcs() {
                    return invalid("MISM and MSM do not take antiparallel arcs");
                }
            }
        }
    }
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, g2);
    let mut obj = LinExpr::new();
    match s.kind {
        CommonKind::Lcs => {
            families(&mut m, &[B1, B2], g, g2)?;
            for e in g.edges() {
                for t in g2.edges() {
                    let w = e.w * t.w;
                    if w.is_zero() {
                        continue;
                    }
                    let straight = [xv(&m, e.u, t.u), xv(&m, e.v, t.v)];
                    let crossed = [xv(&m, e.u, t.v), xv(&m, e.v, t.u)];
                    let y = indicator(&mut m, VarTag::y_edge(e.u, e.v, t.u, t.v), straight)?;
                    let z = indicator(&mut m, VarTag::Z { e: (e.u, e.v), t: (t.u, t.v) }, crossed)?;
                    obj.add(y, w).add(z, w);
                }
            }
        }
        CommonKind::Mism => {
            families(&mut m, &[B1, B2, D1, D2, E], g, g2)?;
            obj = LinExpr::sum(m.vars_where(|t| matches!(t, VarTag::X { .. })));
        }
        CommonKind::Msm => {
            families(&mut m, &[D1, D2, E, H2, I2], g, g2)?;
            obj = LinExpr::sum(m.vars_where(|t| matches!(t, VarTag::X { .. })));
        }
        CommonKind::Cmp => {
            families(&mut m, &[B1, B2], g, g2)?;
            // No two alignment links may cross.
            for u in g.nodes() {
                for v in u + 1..=g.n() {
                    for a in g2.nodes() {
                        for b in a + 1..=g2.n() {
                            let row = LinExpr::sum([xv(&m, u, b), xv(&m, v, a)]);
                            m.add_constraint("cross", row, Relation::Le, int(1))?;
                        }
                    }
                }
            }
            for e in g.edges() {
                for t in g2.edges() {
                    let xs = [xv(&m, e.u, t.u), xv(&m, e.v, t.v)];
                    let y = indicator(&mut m, VarTag::y_edge(e.u, e.v, t.u, t.v), xs)?;
                    obj.add(y, int(1));
                }
            }
        }
    }
    m.set_objective(Sense::Maximize, obj)?;
    Ok(m)
}
