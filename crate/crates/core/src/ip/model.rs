use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::NodeId;
use crate::rational::{format_decimal, int, Rational};

pub type VarId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` is required but not declared")]
    MissingVariable(String),
    #[error("variable id {0} is not declared")]
    UnknownVariable(VarId),
    #[error("constraint `{0}` declared twice")]
    DuplicateConstraint(String),
    #[error("directedness mismatch: {0}")]
    Directedness(String),
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// Semantic identity of a variable. The LP name is a pure function of the tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarTag {
    /// `x_{u t}`: pattern node `u` assigned to target node `t`.
    X { u: NodeId, t: NodeId },
    /// `y_{e t}`: pattern edge/arc `e` assigned to target edge/arc `t`.
    Y { e: (NodeId, NodeId), t: (NodeId, NodeId) },
    /// Crossed orientation companion of `Y`.
    Z { e: (NodeId, NodeId), t: (NodeId, NodeId) },
    /// `y^tau_{e t}`.
    YTau { e: (NodeId, NodeId), t: (NodeId, NodeId), tau: i64 },
    /// Fill-edge indicator on a pattern non-edge.
    Fill { u: NodeId, v: NodeId },
    K,
    KU(NodeId),
    KP(NodeId),
    /// Free-form name, normalised by [`VarTag::named`].
    Named(String),
}

impl VarTag {
    pub fn x(u: NodeId, t: NodeId) -> VarTag {
        VarTag::X { u, t }
    }

    /// Unordered edge pair; both sides are canonicalised to `u <= v`.
    pub fn y_edge(u: NodeId, v: NodeId, a: NodeId, b: NodeId) -> VarTag {
        VarTag::Y { e: (u.min(v), u.max(v)), t: (a.min(b), a.max(b)) }
    }

    /// Ordered arc pair.
    pub fn y_arc(u: NodeId, v: NodeId, a: NodeId, b: NodeId) -> VarTag {
        VarTag::Y { e: (u, v), t: (a, b) }
    }

    pub fn fill(u: NodeId, v: NodeId) -> VarTag {
        VarTag::Fill { u: u.min(v), v: u.max(v) }
    }

    /// Builds a `Named` tag whose rendered name can never be mistaken for a
    /// structured tag.
    pub fn named(s: &str) -> VarTag {
        let mut clean: String =
            s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
        let bad_start = clean.chars().next().is_none_or(|c| c.is_ascii_digit() || c == 'e' || c == 'E');
        if bad_start || !matches!(VarTag::from_name(&clean), VarTag::Named(_)) {
            clean = format!("n_{clean}");
        }
        VarTag::Named(clean)
    }

    pub fn name(&self) -> String {
        fn tau(t: i64) -> String {
            if t < 0 {
                format!("n{}", -t)
            } else {
                t.to_string()
            }
        }
        match self {
            VarTag::X { u, t } => format!("x_{u}_{t}"),
            VarTag::Y { e, t } => format!("y_{}_{}__{}_{}", e.0, e.1, t.0, t.1),
            VarTag::Z { e, t } => format!("z_{}_{}__{}_{}", e.0, e.1, t.0, t.1),
            VarTag::YTau { e, t, tau: tv } => {
                format!("yt_{}_{}__{}_{}_{}", e.0, e.1, t.0, t.1, tau(*tv))
            }
            VarTag::Fill { u, v } => format!("yf_{u}_{v}"),
            VarTag::K => "K".to_string(),
            VarTag::KU(u) => format!("K_u{u}"),
            VarTag::KP(u) => format!("Kp_{u}"),
            VarTag::Named(s) => s.clone(),
        }
    }

    /// Inverse of [`VarTag::name`]. Anything that does not round-trip exactly
    /// is returned as `Named`.
    pub fn from_name(s: &str) -> VarTag {
        let parsed = Self::parse_structured(s);
        match parsed {
            Some(tag) if tag.name() == s => tag,
            _ => VarTag::Named(s.to_string()),
        }
    }

    fn parse_structured(s: &str) -> Option<VarTag> {
        fn num(t: &str) -> Option<usize> {
            t.parse().ok()
        }
        fn pair(t: &str) -> Option<(usize, usize)> {
            let (a, b) = t.split_once('_')?;
            Some((num(a)?, num(b)?))
        }
        if s == "K" {
            return Some(VarTag::K);
        }
        if let Some(r) = s.strip_prefix("K_u") {
            return num(r).map(VarTag::KU);
        }
        if let Some(r) = s.strip_prefix("Kp_") {
            return num(r).map(VarTag::KP);
        }
        if let Some(r) = s.strip_prefix("yf_") {
            let (u, v) = pair(r)?;
            return Some(VarTag::Fill { u, v });
        }
        if let Some(r) = s.strip_prefix("yt_") {
            let (e, rest) = r.split_once("__")?;
            let mut it = rest.splitn(3, '_');
            let a = num(it.next()?)?;
            let b = num(it.next()?)?;
            let t = it.next()?;
            let tau = match t.strip_prefix('n') {
                Some(m) => -(m.parse::<i64>().ok()?),
                None => t.parse::<i64>().ok()?,
            };
            return Some(VarTag::YTau { e: pair(e)?, t: (a, b), tau });
        }
        for (prefix, is_y) in [("y_", true), ("z_", false)] {
            if let Some(r) = s.strip_prefix(prefix) {
                let (e, t) = r.split_once("__")?;
                let (e, t) = (pair(e)?, pair(t)?);
                return Some(if is_y { VarTag::Y { e, t } } else { VarTag::Z { e, t } });
            }
        }
        if let Some(r) = s.strip_prefix("x_") {
            let (u, t) = pair(r)?;
            return Some(VarTag::X { u, t });
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
    /// General integer; accepted by the model and LP layer, rejected by the solver.
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub tag: VarTag,
    pub kind: VarKind,
    pub lower: Rational,
    pub upper: Option<Rational>,
}

/// Sparse linear expression with exact coefficients. Zero terms are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinExpr {
    terms: BTreeMap<VarId, Rational>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (VarId, Rational)>) -> Self {
        let mut e = LinExpr::new();
        for (v, c) in terms {
            e.add(v, c);
        }
        e
    }

    /// Sum of the given variables with coefficient 1.
    pub fn sum(vars: impl IntoIterator<Item = VarId>) -> Self {
        Self::from_terms(vars.into_iter().map(|v| (v, Rational::one())))
    }

    pub fn add(&mut self, v: VarId, c: Rational) -> &mut Self {
        if c.is_zero() {
            return self;
        }
        let slot = self.terms.entry(v).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
        self
    }

    pub fn with(mut self, v: VarId, c: Rational) -> Self {
        self.add(v, c);
        self
    }

    pub fn coef(&self, v: VarId) -> Rational {
        self.terms.get(&v).copied().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, Rational)> + '_ {
        self.terms.iter().map(|(&v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: Rational) -> LinExpr {
        LinExpr::from_terms(self.terms().map(|(v, c)| (v, c * k)))
    }

    pub fn value(&self, values: &[Rational]) -> Rational {
        self.terms().fold(Rational::zero(), |acc, (v, c)| acc + c * values[v])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    /// Family prefix of the constraint name (`c1_17` -> `c1`).
    pub fn family(&self) -> &str {
        self.name.rsplit_once('_').map_or(self.name.as_str(), |(f, _)| f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub expr: LinExpr,
}

/// A 0-1 program with optional continuous bound variables.
#[derive(Debug, Clone)]
pub struct IpModel {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    by_tag: HashMap<VarTag, VarId>,
    by_name: HashMap<String, VarId>,
    constraint_names: HashSet<String>,
    family_counts: HashMap<String, usize>,
}

impl PartialEq for IpModel {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.constraints == other.constraints && self.objective == other.objective
    }
}

impl Default for IpModel {
    fn default() -> Self {
        IpModel::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub continuous: usize,
    pub constraints: usize,
}

impl fmt::Display for ModelStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables ({} binary, {} continuous), {} constraints",
            self.variables, self.binaries, self.continuous, self.constraints
        )
    }
}

impl IpModel {
    pub fn new() -> Self {
        IpModel {
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: Objective { sense: Sense::Minimize, expr: LinExpr::new() },
            by_tag: HashMap::new(),
            by_name: HashMap::new(),
            constraint_names: HashSet::new(),
            family_counts: HashMap::new(),
        }
    }

    pub fn add_var(
        &mut self,
        tag: VarTag,
        kind: VarKind,
        lower: Rational,
        upper: Option<Rational>,
    ) -> Result<VarId, ModelError> {
        let tag = match tag {
            VarTag::Named(s) => VarTag::named(&s),
            t => t,
        };
        let name = tag.name();
        if self.by_tag.contains_key(&tag) || self.by_name.contains_key(&name) {
            return Err(ModelError::DuplicateVariable(name));
        }
        let id = self.vars.len();
        self.by_tag.insert(tag.clone(), id);
        self.by_name.insert(name.clone(), id);
        self.vars.push(Variable { name, tag, kind, lower, upper });
        Ok(id)
    }

    /// Returns the binary variable for `tag`, declaring it on first use.
    pub fn binary(&mut self, tag: VarTag) -> VarId {
        if let Some(&id) = self.by_tag.get(&tag) {
            return id;
        }
        self.add_var(tag, VarKind::Binary, int(0), Some(int(1))).expect("fresh tag")
    }

    pub fn continuous(&mut self, tag: VarTag, lower: Rational, upper: Option<Rational>) -> Result<VarId, ModelError> {
        self.add_var(tag, VarKind::Continuous, lower, upper)
    }

    pub fn var(&self, tag: &VarTag) -> Option<VarId> {
        self.by_tag.get(tag).copied()
    }

    pub fn x(&self, u: NodeId, t: NodeId) -> Option<VarId> {
        self.var(&VarTag::X { u, t })
    }

    pub fn require(&self, tag: &VarTag) -> Result<VarId, ModelError> {
        self.var(tag).ok_or_else(|| ModelError::MissingVariable(tag.name()))
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.vars[id]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn set_objective(&mut self, sense: Sense, expr: LinExpr) -> Result<(), ModelError> {
        self.check_expr(&expr)?;
        self.objective = Objective { sense, expr };
        Ok(())
    }

    fn check_expr(&self, expr: &LinExpr) -> Result<(), ModelError> {
        match expr.terms().find(|&(v, _)| v >= self.vars.len()) {
            Some((v, _)) => Err(ModelError::UnknownVariable(v)),
            None => Ok(()),
        }
    }

    /// Adds a row named `<family>_<n>` where `n` counts rows of that family.
    pub fn add_constraint(
        &mut self,
        family: &str,
        expr: LinExpr,
        rel: Relation,
        rhs: Rational,
    ) -> Result<usize, ModelError> {
        let count = self.family_counts.entry(family.to_string()).or_insert(0);
        *count += 1;
        let name = format!("{family}_{count}");
        self.add_named_constraint(name, expr, rel, rhs)
    }

    pub fn add_named_constraint(
        &mut self,
        name: String,
        expr: LinExpr,
        rel: Relation,
        rhs: Rational,
    ) -> Result<usize, ModelError> {
        self.check_expr(&expr)?;
        if !self.constraint_names.insert(name.clone()) {
            return Err(ModelError::DuplicateConstraint(name));
        }
        if let Some((fam, n)) = name.rsplit_once('_') {
            if let Ok(n) = n.parse::<usize>() {
                let c = self.family_counts.entry(fam.to_string()).or_insert(0);
                *c = (*c).max(n);
            }
        }
        self.constraints.push(Constraint { name, expr, rel, rhs });
        Ok(self.constraints.len() - 1)
    }

    /// Number of rows whose name carries the given family prefix.
    pub fn family_count(&self, family: &str) -> usize {
        self.constraints.iter().filter(|c| c.family() == family).count()
    }

    pub fn stats(&self) -> ModelStats {
        let binaries = self.vars.iter().filter(|v| v.kind == VarKind::Binary).count();
        let continuous = self.vars.iter().filter(|v| v.kind == VarKind::Continuous).count();
        ModelStats { variables: self.vars.len(), binaries, continuous, constraints: self.constraints.len() }
    }

    /// Variables carrying a given tag shape, in declaration order.
    pub fn vars_where(&self, pred: impl Fn(&VarTag) -> bool) -> Vec<VarId> {
        (0..self.vars.len()).filter(|&i| pred(&self.vars[i].tag)).collect()
    }
}

/// Value for every declared variable, indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Rational>,
}

impl Assignment {
    pub fn zeros(model: &IpModel) -> Self {
        Assignment { values: vec![Rational::zero(); model.vars().len()] }
    }

    pub fn from_values(values: Vec<Rational>) -> Self {
        Assignment { values }
    }

    pub fn get(&self, v: VarId) -> Rational {
        self.values[v]
    }

    pub fn set(&mut self, v: VarId, value: Rational) {
        self.values[v] = value;
    }

    pub fn is_one(&self, v: VarId) -> bool {
        self.values[v] == Rational::one()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    Row { index: usize, name: String },
    Bound { var: VarId },
    Integrality { var: VarId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Row { name, .. } => {
                write!(f, "row {name}: lhs {} vs rhs {}", format_decimal(&self.lhs), format_decimal(&self.rhs))
            }
            ViolationKind::Bound { var } => write!(f, "variable #{var} out of bounds at {}", format_decimal(&self.lhs)),
            ViolationKind::Integrality { var } => {
                write!(f, "variable #{var} not integral at {}", format_decimal(&self.lhs))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub objective: Rational,
    pub violations: Vec<Violation>,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Objective value and every violated row, bound or integrality requirement.
pub fn evaluate(model: &IpModel, a: &Assignment) -> Evaluation {
    assert_eq!(a.len(), model.vars().len(), "assignment must cover every variable");
    let vals = a.values();
    let mut violations = Vec::new();
    for (var, v) in model.vars().iter().enumerate() {
        let x = vals[var];
        let below = x < v.lower;
        let above = v.upper.is_some_and(|u| x > u);
        if below || above {
            violations.push(Violation {
                kind: ViolationKind::Bound { var },
                lhs: x,
                rhs: if below { v.lower } else { v.upper.unwrap() },
            });
        }
        if v.kind != VarKind::Continuous && !x.is_integer() {
            violations.push(Violation { kind: ViolationKind::Integrality { var }, lhs: x, rhs: x.round() });
        }
    }
    for (index, c) in model.constraints().iter().enumerate() {
        let lhs = c.expr.value(vals);
        if !c.rel.holds(lhs, c.rhs) {
            violations.push(Violation {
                kind: ViolationKind::Row { index, name: c.name.clone() },
                lhs,
                rhs: c.rhs,
            });
        }
    }
    Evaluation { objective: model.objective().expr.value(vals), violations }
}
