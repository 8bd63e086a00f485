//! The reusable assignment constraint families.
//!
//! Every builder reads `x_{u t}` for `u` in the pattern graph `g` and `t` in
//! the target graph `gp`; the full grid must already be declared. The `f`
//! and `g` families declare their `y` variables on demand.
//!
//! Reconstructed semantics, per kind:
//!
//! * `a1`/`a2`: each pattern (target) node used exactly once; `b1`/`b2`: at most once.
//! * `c1`: an edge of `g` may not land on a non-adjacent target pair, both orientations.
//! * `c2`: a non-adjacent pattern pair may not land on an edge of `gp`.
//! * `d1`/`d2`: directed analogues; "non-adjacent" means no arc either way.
//! * `e`: an arc may not be laid on a target arc backwards. Only emitted when
//!   the target pair carries a single arc, otherwise the reversed placement is
//!   itself a legal arc.
//! * `f`: `y` is forced to 1 when an edge lands on a target edge (either
//!   orientation); a self-loop target gives one row.
//! * `g`: the directed linking row.
//! * `h1`/`h2`: one pattern node may not cover both ends of a target edge/arc.
//! * `i1`/`i2`: the two ends of a pattern edge/arc may not share a target node.

use std::fmt;
use std::str::FromStr;

use crate::graph::{Graph, NodeId};
use crate::ip::model::{IpModel, LinExpr, ModelError, Relation, VarId, VarTag};
use crate::rational::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table2Kind {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
    D1,
    D2,
    E,
    F,
    G,
    H1,
    H2,
    I1,
    I2,
}

impl Table2Kind {
    pub const ALL: [Table2Kind; 15] = [
        Table2Kind::A1,
        Table2Kind::A2,
        Table2Kind::B1,
        Table2Kind::B2,
        Table2Kind::C1,
        Table2Kind::C2,
        Table2Kind::D1,
        Table2Kind::D2,
        Table2Kind::E,
        Table2Kind::F,
        Table2Kind::G,
        Table2Kind::H1,
        Table2Kind::H2,
        Table2Kind::I1,
        Table2Kind::I2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Table2Kind::A1 => "a1",
            Table2Kind::A2 => "a2",
            Table2Kind::B1 => "b1",
            Table2Kind::B2 => "b2",
            Table2Kind::C1 => "c1",
            Table2Kind::C2 => "c2",
            Table2Kind::D1 => "d1",
            Table2Kind::D2 => "d2",
            Table2Kind::E => "e",
            Table2Kind::F => "f",
            Table2Kind::G => "g",
            Table2Kind::H1 => "h1",
            Table2Kind::H2 => "h2",
            Table2Kind::I1 => "i1",
            Table2Kind::I2 => "i2",
        }
    }

    /// Required directedness of (pattern, target); `None` means either.
    fn directedness(self) -> (Option<bool>, Option<bool>) {
        use Table2Kind::*;
        match self {
            A1 | A2 | B1 | B2 => (None, None),
            C1 | C2 | F => (Some(false), Some(false)),
            D1 | D2 | E | G => (Some(true), Some(true)),
            H1 => (None, Some(false)),
            H2 => (None, Some(true)),
            I1 => (Some(false), None),
            I2 => (Some(true), None),
        }
    }
}

impl fmt::Display for Table2Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Table2Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Table2Kind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown constraint family `{s}`"))
    }
}

fn check_grid(model: &IpModel, g: &Graph, gp: &Graph) -> Result<(), ModelError> {
    for u in g.nodes() {
        for t in gp.nodes() {
            model.require(&VarTag::x(u, t))?;
        }
    }
    Ok(())
}

fn x(model: &IpModel, u: NodeId, t: NodeId) -> VarId {
    model.x(u, t).expect("grid checked")
}

fn pair_row(model: &mut IpModel, fam: &str, a: VarId, b: VarId) -> Result<(), ModelError> {
    model.add_constraint(fam, LinExpr::sum([a, b]), Relation::Le, int(1))?;
    Ok(())
}

/// Emits the rows of one family and returns how many were added.
pub fn add_table2_constraints(
    model: &mut IpModel,
    kind: Table2Kind,
    g: &Graph,
    gp: &Graph,
) -> Result<usize, ModelError> {
    let (want_g, want_gp) = kind.directedness();
    for (want, graph, which) in [(want_g, g, "pattern"), (want_gp, gp, "target")] {
        if let Some(d) = want {
            if graph.is_directed() != d {
                return Err(ModelError::Directedness(format!(
                    "({kind}) needs a {} {which} graph",
                    if d { "directed" } else { "undirected" }
                )));
            }
        }
    }
    check_grid(model, g, gp)?;
    let before = model.constraints().len();
    let fam = kind.label();
    use Table2Kind::*;
    match kind {
        A1 | B1 => {
            let rel = if kind == A1 { Relation::Eq } else { Relation::Le };
            for u in g.nodes() {
                let row = LinExpr::sum(gp.nodes().map(|t| x(model, u, t)));
                model.add_constraint(fam, row, rel, int(1))?;
            }
        }
        A2 | B2 => {
            let rel = if kind == A2 { Relation::Eq } else { Relation::Le };
            for t in gp.nodes() {
                let row = LinExpr::sum(g.nodes().map(|u| x(model, u, t)));
                model.add_constraint(fam, row, rel, int(1))?;
            }
        }
        C1 => {
            let non = gp.non_edges();
            for e in g.proper_edges() {
                for &(a, b) in &non {
                    pair_row(model, fam, x(model, e.u, a), x(model, e.v, b))?;
                    pair_row(model, fam, x(model, e.u, b), x(model, e.v, a))?;
                }
            }
        }
        C2 | D2 => {
            let non = g.non_edges();
            for e in gp.proper_edges() {
                for &(u, v) in &non {
                    pair_row(model, fam, x(model, u, e.u), x(model, v, e.v))?;
                    pair_row(model, fam, x(model, u, e.v), x(model, v, e.u))?;
                }
            }
        }
        D1 => {
            let non = gp.non_edges();
            for e in g.proper_edges() {
                for &(a, b) in &non {
                    pair_row(model, fam, x(model, e.u, a), x(model, e.v, b))?;
                    pair_row(model, fam, x(model, e.u, b), x(model, e.v, a))?;
                }
            }
        }
        E => {
            for e in g.proper_edges() {
                for t in gp.proper_edges() {
                    if !gp.has_edge(t.v, t.u) {
                        pair_row(model, fam, x(model, e.u, t.v), x(model, e.v, t.u))?;
                    }
                }
            }
        }
        F => {
            for e in g.proper_edges() {
                for t in gp.edges() {
                    let y = model.binary(VarTag::y_edge(e.u, e.v, t.u, t.v));
                    let rows: &[(NodeId, NodeId)] =
                        if t.u == t.v { &[(t.u, t.v)] } else { &[(t.u, t.v), (t.v, t.u)] };
                    for &(a, b) in rows {
                        let row = LinExpr::sum([x(model, e.u, a), x(model, e.v, b)]).with(y, int(-1));
                        model.add_constraint(fam, row, Relation::Le, int(1))?;
                    }
                }
            }
        }
        G => {
            for e in g.proper_edges() {
                for t in gp.edges() {
                    let y = model.binary(VarTag::y_arc(e.u, e.v, t.u, t.v));
                    let row = LinExpr::sum([x(model, e.u, t.u), x(model, e.v, t.v)]).with(y, int(-1));
                    model.add_constraint(fam, row, Relation::Le, int(1))?;
                }
            }
        }
        H1 | H2 => {
            for u in g.nodes() {
                for t in gp.proper_edges() {
                    pair_row(model, fam, x(model, u, t.u), x(model, u, t.v))?;
                }
            }
        }
        I1 | I2 => {
            for e in g.proper_edges() {
                for t in gp.nodes() {
                    pair_row(model, fam, x(model, e.u, t), x(model, e.v, t))?;
                }
            }
        }
    }
    Ok(model.constraints().len() - before)
}

/// Declares the full `x` grid for `g` against `gp`.
pub fn declare_x_grid(model: &mut IpModel, g: &Graph, gp: &Graph) {
    for u in g.nodes() {
        for t in gp.nodes() {
            model.binary(VarTag::x(u, t));
        }
    }
}
