//! The general matching framework: find `f : V -> V'` under allowable sets,
//! edge preservation and forbidden communication costs, then either stop at
//! feasibility, minimise one of the seven objective forms, or minimise the
//! total penalty of forbidden hits.
//!
//! Variable conventions used by the builders:
//!
//! * `x_{u a}` exists only for `a` in the allowable set of `u`.
//! * Unordered `y_{e e'}` (forms P1, P2, P3, P4, P6) is 1 when the edge `e`
//!   lands on `e'` in either orientation.
//! * Oriented `y`/`z` (forms P5, P7): for `e = (u, v)` with `u < v` and
//!   `e' = (a, b)` with `a <= b`, `y` means `f(u) = a, f(v) = b` and `z`
//!   means `f(u) = b, f(v) = a`.
//!
//! A `y` is only declared when some row or the objective reads it with a
//! nonzero coefficient. Whenever that coefficient is negative the upper
//! linking rows are added as well, so the variable cannot be set to 1 for
//! free.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::ip::{Assignment, IpModel, LinExpr, ModelError, Relation, Sense, VarId, VarTag};
use crate::rational::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameworkError {
    #[error("node {node} out of range for the {side} graph")]
    NodeOutOfRange { node: NodeId, side: &'static str },
    #[error("({0}, {1}) is not an edge of the pattern graph")]
    NotPatternEdge(NodeId, NodeId),
    #[error("({0}, {1}) is not an edge of the target graph")]
    NotTargetEdge(NodeId, NodeId),
    #[error("allowable set of node {0} is empty")]
    EmptyAllowSet(NodeId),
    #[error("no penalty given for edge ({u}, {v}) and forbidden value {tau}")]
    MissingPenalty { u: NodeId, v: NodeId, tau: i64 },
    #[error("penalty for edge ({u}, {v}) and value {tau} has no forbidden value to attach to")]
    StrayPenalty { u: NodeId, v: NodeId, tau: i64 },
    #[error("penalties must be nonnegative")]
    NegativePenalty,
    #[error("pattern and target graphs must share directedness")]
    MixedDirectedness,
    #[error("{0} is only defined for undirected graphs")]
    DirectedUnsupported(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which assignment rows accompany the allowable-set rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// Every pattern node mapped exactly once.
    ManyToOne,
    /// Total and injective.
    OneToOne,
    /// Total and onto: a bijection when sizes agree.
    OntoTotal,
    /// Every target node hit exactly once, pattern nodes used at most once.
    InjectivePartial,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::ManyToOne, Regime::OneToOne, Regime::OntoTotal, Regime::InjectivePartial];

    pub fn label(self) -> &'static str {
        match self {
            Regime::ManyToOne => "many-to-one",
            Regime::OneToOne => "one-to-one",
            Regime::OntoTotal => "onto-total",
            Regime::InjectivePartial => "injective-partial",
        }
    }

    pub fn is_total(self) -> bool {
        self != Regime::InjectivePartial
    }

    pub fn is_injective(self) -> bool {
        self != Regime::ManyToOne
    }

    pub fn is_onto(self) -> bool {
        matches!(self, Regime::OntoTotal | Regime::InjectivePartial)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Regime::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveForm {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
}

impl ObjectiveForm {
    pub const ALL: [ObjectiveForm; 7] = [
        ObjectiveForm::P1,
        ObjectiveForm::P2,
        ObjectiveForm::P3,
        ObjectiveForm::P4,
        ObjectiveForm::P5,
        ObjectiveForm::P6,
        ObjectiveForm::P7,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ObjectiveForm::P1 => "P1",
            ObjectiveForm::P2 => "P2",
            ObjectiveForm::P3 => "P3",
            ObjectiveForm::P4 => "P4",
            ObjectiveForm::P5 => "P5",
            ObjectiveForm::P6 => "P6",
            ObjectiveForm::P7 => "P7",
        }
    }

    /// Forms whose `y` variables carry orientation.
    pub fn is_oriented(self) -> bool {
        matches!(self, ObjectiveForm::P5 | ObjectiveForm::P7)
    }
}

impl fmt::Display for ObjectiveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ObjectiveForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjectiveForm::ALL
            .into_iter()
            .find(|o| o.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown objective form `{s}`"))
    }
}

/// Which of the three framework problems to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    Feasibility,
    Optimize(ObjectiveForm),
    Penalty,
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Feasibility => f.write_str("output1"),
            Output::Optimize(o) => write!(f, "output2-{o}"),
            Output::Penalty => f.write_str("output3"),
        }
    }
}

impl FromStr for Output {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "output1" | "1" => Ok(Output::Feasibility),
            "output3" | "3" => Ok(Output::Penalty),
            _ => {
                let form = s.strip_prefix("output2-").or_else(|| s.strip_prefix("output2:")).unwrap_or(s);
                form.parse().map(Output::Optimize).map_err(|_| format!("unknown output `{s}`"))
            }
        }
    }
}

type Pair = (NodeId, NodeId);

/// Input of the framework. Cost tables are keyed by canonical edges:
/// `(min, max)` for undirected graphs and the arc itself otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingInstance {
    pub g: Graph,
    pub g2: Graph,
    /// Allowable targets; a missing entry means every target node.
    pub allow: BTreeMap<NodeId, BTreeSet<NodeId>>,
    pub node_cost: BTreeMap<Pair, Rational>,
    pub edge_cost: BTreeMap<(Pair, Pair), Rational>,
    pub forbidden: BTreeMap<Pair, BTreeSet<i64>>,
    pub penalty: BTreeMap<(Pair, i64), Rational>,
    pub regime: Regime,
    /// Edges must land on target edges.
    pub preserve_edges: bool,
    /// Target edges must come from pattern edges (induced-style reverse rows).
    pub reflect_target_edges: bool,
}

impl MatchingInstance {
    pub fn new(g: Graph, g2: Graph) -> Self {
        MatchingInstance {
            g,
            g2,
            allow: BTreeMap::new(),
            node_cost: BTreeMap::new(),
            edge_cost: BTreeMap::new(),
            forbidden: BTreeMap::new(),
            penalty: BTreeMap::new(),
            regime: Regime::ManyToOne,
            preserve_edges: true,
            reflect_target_edges: false,
        }
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    fn pattern_key(&self, u: NodeId, v: NodeId) -> Pair {
        if self.g.is_directed() {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        }
    }

    fn target_key(&self, a: NodeId, b: NodeId) -> Pair {
        if self.g2.is_directed() {
            (a, b)
        } else {
            (a.min(b), a.max(b))
        }
    }

    pub fn set_allow(&mut self, u: NodeId, targets: impl IntoIterator<Item = NodeId>) {
        self.allow.insert(u, targets.into_iter().collect());
    }

    pub fn set_node_cost(&mut self, u: NodeId, a: NodeId, c: Rational) {
        self.node_cost.insert((u, a), c);
    }

    pub fn set_edge_cost(&mut self, (u, v): Pair, (a, b): Pair, d: Rational) {
        let key = (self.pattern_key(u, v), self.target_key(a, b));
        self.edge_cost.insert(key, d);
    }

    pub fn set_forbidden(&mut self, (u, v): Pair, values: impl IntoIterator<Item = i64>) {
        let key = self.pattern_key(u, v);
        self.forbidden.insert(key, values.into_iter().collect());
    }

    pub fn set_penalty(&mut self, (u, v): Pair, tau: i64, p: Rational) {
        let key = self.pattern_key(u, v);
        self.penalty.insert((key, tau), p);
    }

    /// Sorted allowable targets of `u`.
    pub fn allowed(&self, u: NodeId) -> Vec<NodeId> {
        match self.allow.get(&u) {
            Some(s) => s.iter().copied().collect(),
            None => self.g2.nodes().collect(),
        }
    }

    pub fn allows(&self, u: NodeId, a: NodeId) -> bool {
        a >= 1 && a <= self.g2.n() && self.allow.get(&u).is_none_or(|s| s.contains(&a))
    }

    pub fn c(&self, u: NodeId, a: NodeId) -> Rational {
        self.node_cost.get(&(u, a)).copied().unwrap_or_else(Rational::zero)
    }

    /// `d(e, e')`, orientation-free for undirected graphs.
    pub fn d(&self, (u, v): Pair, (a, b): Pair) -> Rational {
        let key = (self.pattern_key(u, v), self.target_key(a, b));
        self.edge_cost.get(&key).copied().unwrap_or_else(Rational::zero)
    }

    pub fn forbidden_set(&self, (u, v): Pair) -> Option<&BTreeSet<i64>> {
        self.forbidden.get(&self.pattern_key(u, v))
    }

    /// True when `d(e, e')` is an integer in the forbidden set of `e`.
    pub fn is_forbidden(&self, e: Pair, t: Pair) -> Option<i64> {
        let d = self.d(e, t);
        if !d.is_integer() {
            return None;
        }
        let tau = d.to_integer();
        self.forbidden_set(e).filter(|s| s.contains(&tau)).map(|_| tau)
    }

    pub fn penalty_of(&self, (u, v): Pair, tau: i64) -> Option<Rational> {
        self.penalty.get(&(self.pattern_key(u, v), tau)).copied()
    }

    /// Structural checks shared by every builder.
    pub fn validate(&self) -> Result<(), FrameworkError> {
        if self.g.is_directed() != self.g2.is_directed() {
            return Err(FrameworkError::MixedDirectedness);
        }
        let in_g = |u: NodeId| u >= 1 && u <= self.g.n();
        let in_g2 = |a: NodeId| a >= 1 && a <= self.g2.n();
        for (&u, set) in &self.allow {
            if !in_g(u) {
                return Err(FrameworkError::NodeOutOfRange { node: u, side: "pattern" });
            }
            if let Some(&a) = set.iter().find(|&&a| !in_g2(a)) {
                return Err(FrameworkError::NodeOutOfRange { node: a, side: "target" });
            }
        }
        if self.regime.is_total() {
            if let Some(u) = self.g.nodes().find(|&u| self.allowed(u).is_empty()) {
                return Err(FrameworkError::EmptyAllowSet(u));
            }
        }
        for &(u, a) in self.node_cost.keys() {
            if !in_g(u) {
                return Err(FrameworkError::NodeOutOfRange { node: u, side: "pattern" });
            }
            if !in_g2(a) {
                return Err(FrameworkError::NodeOutOfRange { node: a, side: "target" });
            }
        }
        for &((u, v), (a, b)) in self.edge_cost.keys() {
            if !self.g.has_edge(u, v) {
                return Err(FrameworkError::NotPatternEdge(u, v));
            }
            if !self.g2.has_edge(a, b) {
                return Err(FrameworkError::NotTargetEdge(a, b));
            }
        }
        for &(u, v) in self.forbidden.keys() {
            if !self.g.has_edge(u, v) {
                return Err(FrameworkError::NotPatternEdge(u, v));
            }
        }
        for (&((u, v), tau), p) in &self.penalty {
            if p.is_negative() {
                return Err(FrameworkError::NegativePenalty);
            }
            if !self.forbidden.get(&(u, v)).is_some_and(|s| s.contains(&tau)) {
                return Err(FrameworkError::StrayPenalty { u, v, tau });
            }
        }
        Ok(())
    }

    /// Sum of `|c|` and `|d|` over the tables, the default big-M for `K`.
    pub fn cost_mass(&self) -> Rational {
        self.node_cost.values().chain(self.edge_cost.values()).fold(Rational::zero(), |a, c| a + c.abs())
    }
}

/// Bottleneck or total-distance k-TSP as a framework instance: the target is
/// an undirected `k`-cycle, `d(e, e') = w_e`, a subset of `k` pattern nodes
/// is matched one-to-one onto the cycle, and every cycle edge must come from
/// a pattern edge. `induced` also forbids pattern chords inside the subset.
pub fn k_tsp_instance(g: &Graph, k: usize, induced: bool) -> Result<MatchingInstance, FrameworkError> {
    if g.is_directed() {
        return Err(FrameworkError::DirectedUnsupported("the k-TSP preset"));
    }
    if k < 3 || k > g.n() {
        return Err(FrameworkError::Model(ModelError::Invalid(format!("k = {k} must lie in 3..={}", g.n()))));
    }
    let mut inst = MatchingInstance::new(g.clone(), Graph::cycle(k)).with_regime(Regime::InjectivePartial);
    inst.preserve_edges = induced;
    inst.reflect_target_edges = true;
    for e in g.proper_edges() {
        for t in Graph::cycle(k).edges() {
            inst.set_edge_cost((e.u, e.v), (t.u, t.v), e.w);
        }
    }
    Ok(inst)
}

/// Row scaffolding shared by the three outputs.
struct Builder<'a> {
    inst: &'a MatchingInstance,
    m: IpModel,
    upper_linked: BTreeSet<VarId>,
    oriented: bool,
    declared: BTreeMap<VarTag, Option<VarId>>,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a MatchingInstance) -> Result<Self, FrameworkError> {
        inst.validate()?;
        let mut m = IpModel::new();
        for u in inst.g.nodes() {
            for a in inst.allowed(u) {
                m.binary(VarTag::x(u, a));
            }
        }
        Ok(Builder { inst, m, upper_linked: BTreeSet::new(), oriented: false, declared: BTreeMap::new() })
    }

    fn x(&self, u: NodeId, a: NodeId) -> Option<VarId> {
        self.m.x(u, a)
    }

    /// `sum x <= 1` over the listed pairs; vacuous when a variable is absent.
    fn exclusion(&mut self, fam: &str, pairs: &[Pair]) -> Result<(), FrameworkError> {
        let vars: Option<Vec<VarId>> = pairs.iter().map(|&(u, a)| self.x(u, a)).collect();
        if let Some(vars) = vars {
            self.m.add_constraint(fam, LinExpr::sum(vars), Relation::Le, int(1))?;
        }
        Ok(())
    }

    fn regime_rows(&mut self) -> Result<(), FrameworkError> {
        let inst = self.inst;
        let per_node = if inst.regime.is_total() { ("a1", Relation::Eq) } else { ("b1", Relation::Le) };
        for u in inst.g.nodes() {
            let row = LinExpr::sum(inst.allowed(u).into_iter().filter_map(|a| self.x(u, a)));
            self.m.add_constraint(per_node.0, row, per_node.1, int(1))?;
        }
        let per_target = match inst.regime {
            Regime::ManyToOne => None,
            Regime::OneToOne => Some(("b2", Relation::Le)),
            Regime::OntoTotal | Regime::InjectivePartial => Some(("a2", Relation::Eq)),
        };
        if let Some((fam, rel)) = per_target {
            for a in inst.g2.nodes() {
                let row = LinExpr::sum(inst.g.nodes().filter_map(|u| self.x(u, a)));
                self.m.add_constraint(fam, row, rel, int(1))?;
            }
        }
        Ok(())
    }

    /// Edge preservation, plus the reverse rows when requested.
    fn structure_rows(&mut self) -> Result<(), FrameworkError> {
        let inst = self.inst;
        let g2 = &inst.g2;
        if inst.preserve_edges {
            let non = g2.non_edges();
            let edges: Vec<Pair> = inst.g.proper_edges().map(|e| (e.u, e.v)).collect();
            for &(u, v) in &edges {
                for &(a, b) in &non {
                    self.exclusion("preserve", &[(u, a), (v, b)])?;
                    self.exclusion("preserve", &[(u, b), (v, a)])?;
                }
                for a in g2.nodes().filter(|&a| !g2.has_self_loop(a)) {
                    self.exclusion("preserve_loop", &[(u, a), (v, a)])?;
                }
                if g2.is_directed() {
                    for t in g2.proper_edges() {
                        if !g2.has_edge(t.v, t.u) {
                            self.exclusion("orient", &[(u, t.v), (v, t.u)])?;
                        }
                    }
                }
            }
        }
        if inst.reflect_target_edges {
            if inst.g.is_directed() {
                return Err(FrameworkError::DirectedUnsupported("reverse edge rows"));
            }
            let non = inst.g.non_edges();
            let targets: Vec<Pair> = g2.proper_edges().map(|e| (e.u, e.v)).collect();
            for &(a, b) in &targets {
                for &(u, v) in &non {
                    self.exclusion("reflect", &[(u, a), (v, b)])?;
                    self.exclusion("reflect", &[(u, b), (v, a)])?;
                }
            }
        }
        Ok(())
    }

    /// Rows forbidding edge placements whose cost is in the forbidden set.
    fn forbidden_rows(&mut self) -> Result<(), FrameworkError> {
        let inst = self.inst;
        let edges: Vec<Pair> = inst.g.proper_edges().map(|e| (e.u, e.v)).collect();
        let targets: Vec<Pair> = inst.g2.edges().iter().map(|e| (e.u, e.v)).collect();
        for &(u, v) in &edges {
            for &(a, b) in &targets {
                if inst.is_forbidden((u, v), (a, b)).is_none() {
                    continue;
                }
                self.exclusion("forbid", &[(u, a), (v, b)])?;
                if a != b && !inst.g2.is_directed() {
                    self.exclusion("forbid", &[(u, b), (v, a)])?;
                }
            }
        }
        Ok(())
    }

    /// Placement alternatives of `e` on `t`: (x, x) pairs whose joint value
    /// 1 means the edge sits on `t`.
    fn placements(&self, (u, v): Pair, (a, b): Pair, oriented: bool) -> Vec<(VarId, VarId)> {
        let mut out = Vec::new();
        let mut push = |p: Pair, q: Pair| {
            if let (Some(x1), Some(x2)) = (self.x(p.0, p.1), self.x(q.0, q.1)) {
                out.push((x1, x2));
            }
        };
        push((u, a), (v, b));
        if a != b && !oriented && !self.inst.g.is_directed() {
            push((u, b), (v, a));
        }
        out
    }

    /// Linked `y` for `tag`; `None` when no placement is possible.
    fn linked(&mut self, tag: VarTag, e: Pair, t: Pair, oriented: bool) -> Result<Option<VarId>, FrameworkError> {
        if let Some(&v) = self.declared.get(&tag) {
            return Ok(v);
        }
        let places = self.placements(e, t, oriented);
        let id = if places.is_empty() {
            None
        } else {
            let y = self.m.binary(tag.clone());
            let fam = if matches!(tag, VarTag::YTau { .. }) { "penalty_link" } else { "link" };
            for (x1, x2) in places {
                self.m.add_constraint(fam, LinExpr::sum([x1, x2]).with(y, int(-1)), Relation::Le, int(1))?;
            }
            Some(y)
        };
        self.declared.insert(tag, id);
        Ok(id)
    }

    /// Unordered `y_{e t}`.
    fn y(&mut self, e: Pair, t: Pair) -> Result<Option<VarId>, FrameworkError> {
        self.linked(VarTag::y_edge(e.0, e.1, t.0, t.1), e, t, false)
    }

    /// Oriented indicator of `f(p) = a, f(q) = b` for the pattern edge `{p, q}`.
    fn placed(&mut self, p: NodeId, a: NodeId, q: NodeId, b: NodeId) -> Result<Option<VarId>, FrameworkError> {
        let ((u, fu), (v, fv)) = if p < q { ((p, a), (q, b)) } else { ((q, b), (p, a)) };
        let tag = if fu <= fv {
            VarTag::Y { e: (u, v), t: (fu, fv) }
        } else {
            VarTag::Z { e: (u, v), t: (fv, fu) }
        };
        self.linked(tag, (u, v), (fu, fv), true)
    }

    /// Upper linking rows for a `y` read with a negative coefficient.
    fn upper_link(&mut self, y: VarId) -> Result<(), FrameworkError> {
        if !self.upper_linked.insert(y) {
            return Ok(());
        }
        let tag = self.m.variable(y).tag.clone();
        let (oriented, (u, v), (a, b)) = match tag {
            VarTag::Y { e, t } => (false, e, t),
            VarTag::Z { e, t } => (true, e, (t.1, t.0)),
            _ => unreachable!("only y/z variables are linked"),
        };
        let oriented = oriented || self.oriented;
        let groups: Vec<Vec<Pair>> = if oriented || a == b {
            vec![vec![(u, a)], vec![(v, b)]]
        } else {
            vec![vec![(u, a), (u, b)], vec![(v, a), (v, b)], vec![(u, a), (v, a)], vec![(u, b), (v, b)]]
        };
        for group in groups {
            let mut row = LinExpr::new().with(y, int(1));
            for (p, q) in group {
                if let Some(x) = self.x(p, q) {
                    row.add(x, int(-1));
                }
            }
            self.m.add_constraint("link_up", row, Relation::Le, int(0))?;
        }
        Ok(())
    }

    /// Adds `coef * var` to `expr`, upper-linking negative readers.
    fn term(&mut self, expr: &mut LinExpr, var: Option<VarId>, coef: Rational) -> Result<(), FrameworkError> {
        if let Some(v) = var {
            if coef.is_negative() {
                self.upper_link(v)?;
            }
            expr.add(v, coef);
        }
        Ok(())
    }

    fn node_terms(&mut self, expr: &mut LinExpr, u: NodeId) {
        for a in self.inst.allowed(u) {
            let c = self.inst.c(u, a);
            if !c.is_zero() {
                expr.add(self.x(u, a).expect("allowed"), c);
            }
        }
    }

    /// `sum_t d(e, t) y_{e t}` over target edges `t`.
    fn edge_terms(&mut self, expr: &mut LinExpr, e: Pair) -> Result<(), FrameworkError> {
        let targets: Vec<Pair> = self.inst.g2.edges().iter().map(|t| (t.u, t.v)).collect();
        for t in targets {
            let d = self.inst.d(e, t);
            if !d.is_zero() {
                let y = self.y(e, t)?;
                self.term(expr, y, d)?;
            }
        }
        Ok(())
    }

    /// Adds `expr <= var` for every row once the bound variable exists.
    fn bounded_by(&mut self, fam: &str, tag: VarTag, rows: Vec<LinExpr>) -> Result<VarId, FrameworkError> {
        let mut ub = self.inst.cost_mass();
        for r in &rows {
            let pos = r.terms().filter(|(_, c)| c.is_positive()).fold(Rational::zero(), |a, (_, c)| a + c);
            if pos > ub {
                ub = pos;
            }
        }
        let k = self.m.continuous(tag, int(0), Some(ub))?;
        for r in rows {
            self.m.add_constraint(fam, r.with(k, int(-1)), Relation::Le, int(0))?;
        }
        Ok(k)
    }

    fn pattern_edges(&self) -> Vec<Pair> {
        self.inst.g.proper_edges().map(|e| (e.u, e.v)).collect()
    }

    fn nbrs(&self, u: NodeId) -> Vec<NodeId> {
        self.inst.g.neighbors(u).expect("node in range").iter().copied().filter(|&v| v != u).collect()
    }
}

fn undirected_only(inst: &MatchingInstance, what: &'static str) -> Result<(), FrameworkError> {
    if inst.g.is_directed() || inst.g2.is_directed() {
        Err(FrameworkError::DirectedUnsupported(what))
    } else {
        Ok(())
    }
}

/// Feasibility model: allowable sets, regime rows, edge preservation and
/// forbidden-cost exclusions. Directed instances use the arc forms.
pub fn build_output1(inst: &MatchingInstance) -> Result<IpModel, FrameworkError> {
    let mut b = Builder::new(inst)?;
    b.regime_rows()?;
    b.structure_rows()?;
    b.forbidden_rows()?;
    Ok(b.m)
}

/// Feasibility rows plus the chosen objective form.
pub fn build_output2(inst: &MatchingInstance, form: ObjectiveForm) -> Result<IpModel, FrameworkError> {
    undirected_only(inst, "an objective form")?;
    let mut b = Builder::new(inst)?;
    b.oriented = form.is_oriented();
    b.regime_rows()?;
    b.structure_rows()?;
    b.forbidden_rows()?;
    let edges = b.pattern_edges();
    let nodes: Vec<NodeId> = inst.g.nodes().collect();
    match form {
        ObjectiveForm::P1 | ObjectiveForm::P3 => {
            let mut per_node: Vec<(NodeId, Vec<LinExpr>)> = Vec::new();
            for &u in &nodes {
                let mut rows = Vec::new();
                let nbrs = b.nbrs(u);
                if nbrs.is_empty() && form == ObjectiveForm::P1 && edges.is_empty() {
                    let mut r = LinExpr::new();
                    b.node_terms(&mut r, u);
                    rows.push(r);
                }
                for v in nbrs {
                    let mut r = LinExpr::new();
                    b.node_terms(&mut r, u);
                    b.edge_terms(&mut r, (u, v))?;
                    rows.push(r);
                }
                per_node.push((u, rows));
            }
            if form == ObjectiveForm::P1 {
                let rows = per_node.into_iter().flat_map(|(_, r)| r).collect();
                let k = b.bounded_by("p1", VarTag::K, rows)?;
                b.m.set_objective(Sense::Minimize, LinExpr::sum([k]))?;
            } else {
                let mut obj = LinExpr::new();
                for (u, rows) in per_node {
                    let k = b.bounded_by("p3", VarTag::KU(u), rows)?;
                    obj.add(k, int(1));
                }
                b.m.set_objective(Sense::Minimize, obj)?;
            }
        }
        ObjectiveForm::P2 => {
            let mut obj = LinExpr::new();
            for &u in &nodes {
                b.node_terms(&mut obj, u);
            }
            for &e in &edges {
                b.edge_terms(&mut obj, e)?;
            }
            b.m.set_objective(Sense::Minimize, obj)?;
        }
        ObjectiveForm::P4 => {
            let mut rows = Vec::new();
            for a in inst.g2.nodes() {
                let mut r = LinExpr::new();
                for &u in &nodes {
                    let c = inst.c(u, a);
                    if let (Some(x), false) = (b.x(u, a), c.is_zero()) {
                        r.add(x, c);
                    }
                }
                let touching: Vec<Pair> = inst.g2.edges().iter().filter(|t| t.u == a || t.v == a).map(|t| (t.u, t.v)).collect();
                for &e in &edges {
                    for &t in &touching {
                        let d = inst.d(e, t);
                        if !d.is_zero() {
                            let y = b.y(e, t)?;
                            b.term(&mut r, y, d)?;
                        }
                    }
                }
                rows.push(r);
            }
            let k = b.bounded_by("p4", VarTag::K, rows)?;
            b.m.set_objective(Sense::Minimize, LinExpr::sum([k]))?;
        }
        ObjectiveForm::P5 => {
            let mut obj = LinExpr::new();
            for a in inst.g2.nodes() {
                let mut rows = Vec::new();
                for &u in &nodes {
                    let Some(xu) = b.x(u, a) else { continue };
                    let mut r = LinExpr::new();
                    let c = inst.c(u, a);
                    if !c.is_zero() {
                        r.add(xu, c);
                    }
                    for v in b.nbrs(u) {
                        for t in inst.g2.neighbors(a).expect("target node").clone() {
                            let d = inst.d((u, v), (a, t));
                            if !d.is_zero() {
                                let y = b.placed(u, a, v, t)?;
                                b.term(&mut r, y, d)?;
                            }
                        }
                    }
                    rows.push(r);
                }
                if !rows.is_empty() {
                    let k = b.bounded_by("p5", VarTag::KP(a), rows)?;
                    obj.add(k, int(1));
                }
            }
            b.m.set_objective(Sense::Minimize, obj)?;
        }
        ObjectiveForm::P6 => {
            let mut rows = Vec::new();
            for &u in &nodes {
                let mut r = LinExpr::new();
                b.node_terms(&mut r, u);
                for v in b.nbrs(u) {
                    b.edge_terms(&mut r, (u, v))?;
                }
                rows.push(r);
            }
            let k = b.bounded_by("p6", VarTag::K, rows)?;
            b.m.set_objective(Sense::Minimize, LinExpr::sum([k]))?;
        }
        ObjectiveForm::P7 => {
            let targets: Vec<Pair> = inst.g2.proper_edges().map(|t| (t.u, t.v)).collect();
            let mut rows = Vec::new();
            for i in inst.g2.nodes() {
                let mut r = LinExpr::new();
                for &(u, v) in &edges {
                    for &(a, bb) in targets.iter().filter(|&&(a, bb)| a <= i && i < bb) {
                        let d = inst.d((u, v), (a, bb));
                        for (p, fp, q, fq) in [(u, a, v, bb), (v, a, u, bb)] {
                            let coef = inst.c(p, fp) + inst.c(q, fq) + d;
                            if !coef.is_zero() {
                                let y = b.placed(p, fp, q, fq)?;
                                b.term(&mut r, y, coef)?;
                            }
                        }
                    }
                }
                if !r.is_empty() {
                    rows.push(r);
                }
            }
            let k = b.bounded_by("p7", VarTag::K, rows)?;
            b.m.set_objective(Sense::Minimize, LinExpr::sum([k]))?;
        }
    }
    Ok(b.m)
}

/// Penalty model: regime and preservation rows, one `y^tau` per forbidden
/// placement, minimise the total penalty.
pub fn build_output3(inst: &MatchingInstance) -> Result<IpModel, FrameworkError> {
    undirected_only(inst, "the penalty output")?;
    let mut b = Builder::new(inst)?;
    b.regime_rows()?;
    b.structure_rows()?;
    let targets: Vec<Pair> = inst.g2.edges().iter().map(|t| (t.u, t.v)).collect();
    let mut obj = LinExpr::new();
    for e in b.pattern_edges() {
        for &t in &targets {
            let Some(tau) = inst.is_forbidden(e, t) else { continue };
            let p = inst.penalty_of(e, tau).ok_or(FrameworkError::MissingPenalty { u: e.0, v: e.1, tau })?;
            let tag = VarTag::YTau { e, t, tau };
            if let Some(y) = b.linked(tag, e, t, false)? {
                if !p.is_zero() {
                    obj.add(y, p);
                }
            }
        }
    }
    b.m.set_objective(Sense::Minimize, obj)?;
    Ok(b.m)
}

pub fn build(inst: &MatchingInstance, output: Output) -> Result<IpModel, FrameworkError> {
    match output {
        Output::Feasibility => build_output1(inst),
        Output::Optimize(form) => build_output2(inst, form),
        Output::Penalty => build_output3(inst),
    }
}

/// The total-cost objective written over ordered node pairs and oriented
/// target pairs with the halving factor, keyed by the oriented placement
/// tags (`Y` straight, `Z` crossed). Used to check it against the unordered
/// form the builder emits.
pub fn p2_ordered_half_form(inst: &MatchingInstance) -> BTreeMap<VarTag, Rational> {
    let mut out: BTreeMap<VarTag, Rational> = BTreeMap::new();
    let half = Rational::new(1, 2);
    for u in inst.g.nodes() {
        for a in inst.allowed(u) {
            let c = inst.c(u, a);
            if !c.is_zero() {
                *out.entry(VarTag::x(u, a)).or_insert_with(Rational::zero) += c;
            }
        }
        for &v in inst.g.neighbors(u).expect("node").iter().filter(|&&v| v != u) {
            for a in inst.allowed(u) {
                let mut reach = inst.g2.neighbors(a).expect("node").clone();
                if inst.g2.has_self_loop(a) {
                    reach.insert(a);
                }
                for b in reach.into_iter().filter(|&b| inst.allows(v, b)) {
                    let d = inst.d((u, v), (a, b));
                    if d.is_zero() {
                        continue;
                    }
                    let ((p, fp), (q, fq)) = if u < v { ((u, a), (v, b)) } else { ((v, b), (u, a)) };
                    let tag = if fp <= fq {
                        VarTag::Y { e: (p, q), t: (fp, fq) }
                    } else {
                        VarTag::Z { e: (p, q), t: (fq, fp) }
                    };
                    *out.entry(tag).or_insert_with(Rational::zero) += half * d;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("pattern node {u} is assigned to both {a} and {b}")]
    MultipleTargets { u: NodeId, a: NodeId, b: NodeId },
}

/// Reads `f` off the `x` variables of any model in this crate.
pub fn decode_matching(model: &IpModel, a: &Assignment) -> Result<BTreeMap<NodeId, NodeId>, DecodeError> {
    let mut f = BTreeMap::new();
    for (id, var) in model.vars().iter().enumerate() {
        if let VarTag::X { u, t } = var.tag {
            if a.is_one(id) {
                if let Some(prev) = f.insert(u, t) {
                    return Err(DecodeError::MultipleTargets { u, a: prev.min(t), b: prev.max(t) });
                }
            }
        }
    }
    Ok(f)
}
