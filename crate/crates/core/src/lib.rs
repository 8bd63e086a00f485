//! Graph matching problems as exact 0-1 integer programs.
//!
//! Build a model from a graph problem, solve it with the bundled
//! branch-and-bound, decode the answer, and check it against brute-force
//! oracles.

pub mod cli;
pub mod framework;
pub mod graph;
pub mod ip;
pub mod oracle;
pub mod problems;
pub mod rational;
pub mod solver;
pub mod specfile;

pub use graph::{Graph, GraphError, LayeredGraph, NodeId};
pub use ip::{IpModel, LinExpr, Relation, Sense, VarTag};
pub use oracle::{oracle_framework, oracle_solve, OracleError, OracleResult, OracleStatus};
pub use problems::{encode, ProblemSpec, Witness};
pub use rational::{int, Rational};
pub use solver::{solve, SolveConfig, Solution, Status};
