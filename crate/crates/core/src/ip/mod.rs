//! 0-1 programs: model, constraint families and LP text.

pub mod lp;
pub mod model;
pub mod table2;

pub use lp::{emit_lp, parse_lp, LpParseError};
pub use model::{
    evaluate, Assignment, Constraint, Evaluation, IpModel, LinExpr, ModelError, ModelStats, Objective, Relation,
    Sense, VarId, VarKind, VarTag, Variable, Violation, ViolationKind,
};
pub use table2::{add_table2_constraints, declare_x_grid, Table2Kind};
