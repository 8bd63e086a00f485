//! One encoder per named problem. Each takes a plain description of the
//! instance and produces an [`IpModel`] whose `x` variables can be decoded
//! back into the problem's own kind of answer.

mod coloring;
mod labeling;
mod matching;
mod ordering;
mod sequencing;
mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::framework::{FrameworkError, MatchingInstance, ObjectiveForm, Output};
use crate::graph::{Graph, GraphError, LayeredGraph, NodeId};
use crate::ip::{add_table2_constraints, IpModel, LinExpr, ModelError, Relation, Sense, Table2Kind, VarId, VarTag};
use crate::rational::{int, Rational};

pub use coloring::encode_coloring;
pub use labeling::{encode_labeling, encode_metric_labeling};
pub use matching::{encode_common_subgraph, encode_isomorphism};
pub use ordering::{encode_golomb, encode_igc, encode_mlcm};
pub use sequencing::{encode_arrangement, encode_bandwidth, encode_ktsp};
pub use witness::{decode, DecodeError, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T, EncodeError> {
    Err(EncodeError::Invalid(msg.into()))
}

/// Optimise the problem's measure, or only ask whether it can be kept at or
/// below a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    AtMost(Rational),
}

impl Goal {
    pub fn is_feasibility(self) -> bool {
        matches!(self, Goal::AtMost(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KTspVariant {
    /// Is there a circuit through `k` nodes?
    A,
    /// Total length of the circuit.
    B,
    /// Longest arc of the circuit.
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KTsp {
    pub g: Graph,
    pub k: usize,
    pub variant: KTspVariant,
    /// Ignored for variant A.
    pub goal: Goal,
}

/// Bandwidth of an ordering; the directed version also requires every arc to
/// point forward.
#[derive(Debug, Clone, PartialEq)]
pub struct Bandwidth {
    pub g: Graph,
    pub goal: Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrangementKind {
    Lap,
    Dlap,
    Pmp,
    Mclap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement {
    pub kind: ArrangementKind,
    pub g: Graph,
    pub goal: Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoKind {
    Gi,
    Si,
    Isi,
}

/// For `Si`/`Isi`, `g` is the host and `g2` the pattern being looked for.
#[derive(Debug, Clone, PartialEq)]
pub struct Isomorphism {
    pub kind: IsoKind,
    pub g: Graph,
    pub g2: Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommonKind {
    Lcs,
    Mism,
    Msm,
    Cmp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommonSubgraph {
    pub kind: CommonKind,
    pub g: Graph,
    pub g2: Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringKind {
    Gkc,
    Gc,
    Gh,
    Dgh,
    MwscpA,
    MwscpB,
    Wvcp,
    Mcp,
    Mwis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    pub kind: ColoringKind,
    pub g: Graph,
    /// Target of the homomorphism kinds.
    pub g2: Option<Graph>,
    /// Number of colours (required for `Gkc`; a cap elsewhere, default `n`).
    pub k: Option<usize>,
    /// Node weights for `Wvcp`.
    pub weights: BTreeMap<NodeId, Rational>,
    /// `c(u, colour)` for the strength kinds.
    pub costs: BTreeMap<(NodeId, NodeId), Rational>,
    /// Optimal total cost, required by `MwscpB`.
    pub z_star: Option<Rational>,
}

impl Coloring {
    pub fn new(kind: ColoringKind, g: Graph) -> Self {
        Coloring { kind, g, g2: None, k: None, weights: BTreeMap::new(), costs: BTreeMap::new(), z_star: None }
    }
}

/// Labels `0..=span` with separation `m` on edges and `k` on pairs at
/// distance two.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLabeling {
    pub g: Graph,
    pub m: i64,
    pub k: i64,
    pub span: i64,
    pub optimize: bool,
}

/// Frequencies `0..freqs`; an edge with separation `t` pays `penalty[(e, d)]`
/// whenever its two frequencies differ by `d <= t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyAssignment {
    pub g: Graph,
    pub freqs: usize,
    pub separation: BTreeMap<(NodeId, NodeId), i64>,
    pub penalty: BTreeMap<((NodeId, NodeId), i64), Rational>,
}

impl FrequencyAssignment {
    /// Same penalty for every violated difference of an edge.
    pub fn uniform(g: Graph, freqs: usize, edges: &[((NodeId, NodeId), i64, Rational)]) -> Self {
        let mut separation = BTreeMap::new();
        let mut penalty = BTreeMap::new();
        for &((u, v), t, p) in edges {
            let e = (u.min(v), u.max(v));
            separation.insert(e, t);
            for tau in 0..=t {
                penalty.insert((e, tau), p);
            }
        }
        FrequencyAssignment { g, freqs, separation, penalty }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Labeling {
    Gl(GraphLabeling),
    Fsfa(FrequencyAssignment),
}

/// Labels are `1..=labels`; `dist` keys are `(a, b)` with `a <= b` and also
/// define which label pairs adjacent nodes may take.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLabeling {
    pub g: Graph,
    pub labels: usize,
    pub dist: BTreeMap<(NodeId, NodeId), Rational>,
    pub node_cost: BTreeMap<(NodeId, NodeId), Rational>,
    pub allow: BTreeMap<NodeId, BTreeSet<NodeId>>,
    pub form: ObjectiveForm,
}

impl MetricLabeling {
    pub fn distance(&self, a: NodeId, b: NodeId) -> Option<Rational> {
        self.dist.get(&(a.min(b), a.max(b))).copied()
    }
}

/// `n` marks on `0..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Golomb {
    pub n: usize,
    pub k: usize,
    pub optimize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    KTsp(KTsp),
    Bandwidth(Bandwidth),
    Arrangement(Arrangement),
    Isomorphism(Isomorphism),
    CommonSubgraph(CommonSubgraph),
    Coloring(Coloring),
    Labeling(Labeling),
    MetricLabeling(MetricLabeling),
    Golomb(Golomb),
    Igc(Graph),
    Mlcm(LayeredGraph),
    Framework(MatchingInstance, Output),
}

impl ProblemSpec {
    /// Short tag used by the command line and in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            ProblemSpec::KTsp(s) => match s.variant {
                KTspVariant::A => "ktsp-a",
                KTspVariant::B => "ktsp-b",
                KTspVariant::C => "ktsp-c",
            },
            ProblemSpec::Bandwidth(s) => {
                if s.g.is_directed() {
                    "dbp"
                } else {
                    "bandwidth"
                }
            }
            ProblemSpec::Arrangement(s) => match s.kind {
                ArrangementKind::Lap => "lap",
                ArrangementKind::Dlap => "dlap",
                ArrangementKind::Pmp => "pmp",
                ArrangementKind::Mclap => "mclap",
            },
            ProblemSpec::Isomorphism(s) => match s.kind {
                IsoKind::Gi => "gi",
                IsoKind::Si => "si",
                IsoKind::Isi => "isi",
            },
            ProblemSpec::CommonSubgraph(s) => match s.kind {
                CommonKind::Lcs => "lcs",
                CommonKind::Mism => "mism",
                CommonKind::Msm => "msm",
                CommonKind::Cmp => "cmp",
            },
            ProblemSpec::Coloring(s) => match s.kind {
                ColoringKind::Gkc => "gkc",
                ColoringKind::Gc => "gc",
                ColoringKind::Gh => "gh",
                ColoringKind::Dgh => "dgh",
                ColoringKind::MwscpA => "mwscp-a",
                ColoringKind::MwscpB => "mwscp-b",
                ColoringKind::Wvcp => "wvcp",
                ColoringKind::Mcp => "mcp",
                ColoringKind::Mwis => "mwis",
            },
            ProblemSpec::Labeling(Labeling::Gl(_)) => "gl",
            ProblemSpec::Labeling(Labeling::Fsfa(_)) => "fsfa",
            ProblemSpec::MetricLabeling(_) => "mlp",
            ProblemSpec::Golomb(_) => "golomb",
            ProblemSpec::Igc(_) => "igc",
            ProblemSpec::Mlcm(_) => "mlcm",
            ProblemSpec::Framework(..) => "framework",
        }
    }

    /// True when the answer is a yes/no verdict rather than a value.
    pub fn is_feasibility(&self) -> bool {
        match self {
            ProblemSpec::KTsp(s) => s.variant == KTspVariant::A || s.goal.is_feasibility(),
            ProblemSpec::Bandwidth(s) => s.goal.is_feasibility(),
            ProblemSpec::Arrangement(s) => s.goal.is_feasibility(),
            ProblemSpec::Isomorphism(_) => true,
            ProblemSpec::CommonSubgraph(_) => false,
            ProblemSpec::Coloring(s) => matches!(s.kind, ColoringKind::Gkc | ColoringKind::Gh | ColoringKind::Dgh),
            ProblemSpec::Labeling(Labeling::Gl(s)) => !s.optimize,
            ProblemSpec::Labeling(Labeling::Fsfa(_)) => false,
            ProblemSpec::MetricLabeling(_) => false,
            ProblemSpec::Golomb(s) => !s.optimize,
            ProblemSpec::Igc(_) | ProblemSpec::Mlcm(_) => false,
            ProblemSpec::Framework(_, out) => *out == Output::Feasibility,
        }
    }

    /// Whether larger values are better.
    pub fn maximizes(&self) -> bool {
        match self {
            ProblemSpec::CommonSubgraph(_) => true,
            ProblemSpec::Coloring(s) => matches!(s.kind, ColoringKind::MwscpA | ColoringKind::Mcp | ColoringKind::Mwis),
            _ => false,
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::Framework(_, out) => write!(f, "framework {out}"),
            _ => f.write_str(self.tag()),
        }
    }
}

/// Tag and one-line description of every problem the CLI accepts.
pub const PROBLEMS: &[(&str, &str)] = &[
    ("ktsp-a", "directed circuit through exactly k nodes"),
    ("ktsp-b", "k-node circuit of least total length"),
    ("ktsp-c", "k-node circuit with the shortest longest arc"),
    ("bandwidth", "ordering minimising the longest edge stretch (directed graph: arcs point forward)"),
    ("lap", "linear arrangement: least total weighted stretch"),
    ("dlap", "directed linear arrangement: arcs point forward, least total stretch"),
    ("pmp", "profile minimisation"),
    ("mclap", "minimum cut linear arrangement"),
    ("gi", "graph isomorphism"),
    ("si", "subgraph isomorphism: graph2 inside graph"),
    ("isi", "induced subgraph isomorphism: graph2 inside graph"),
    ("lcs", "largest common subgraph by matched edges"),
    ("mism", "maximum induced subgraph matching on digraphs"),
    ("msm", "maximum subgraph matching: largest consistent node relation"),
    ("cmp", "contact map overlap: non-crossing alignment sharing most contacts"),
    ("gkc", "K-colourability"),
    ("gc", "chromatic number"),
    ("gh", "homomorphism into graph2"),
    ("dgh", "directed homomorphism into graph2"),
    ("mwscp-a", "most valuable partial colouring"),
    ("mwscp-b", "fewest colours reaching a given partial colouring value"),
    ("wvcp", "weighted vertex colouring"),
    ("mcp", "clique partition of greatest internal edge weight"),
    ("mwis", "single clique with the most edges"),
    ("gl", "distance-constrained labelling with separations m and k"),
    ("fsfa", "frequency assignment with interference penalties"),
    ("mlp", "metric labelling"),
    ("golomb", "Golomb ruler"),
    ("igc", "interval graph completion"),
    ("mlcm", "multi-layer crossing minimisation"),
    ("framework", "the general matching model with a chosen output"),
];

/// Compiles any problem to a model.
pub fn encode(spec: &ProblemSpec) -> Result<IpModel, EncodeError> {
    match spec {
        ProblemSpec::KTsp(s) => encode_ktsp(s),
        ProblemSpec::Bandwidth(s) => encode_bandwidth(s),
        ProblemSpec::Arrangement(s) => encode_arrangement(s),
        ProblemSpec::Isomorphism(s) => encode_isomorphism(s),
        ProblemSpec::CommonSubgraph(s) => encode_common_subgraph(s),
        ProblemSpec::Coloring(s) => encode_coloring(s),
        ProblemSpec::Labeling(s) => encode_labeling(s),
        ProblemSpec::MetricLabeling(s) => encode_metric_labeling(s),
        ProblemSpec::Golomb(s) => encode_golomb(s),
        ProblemSpec::Igc(g) => encode_igc(g),
        ProblemSpec::Mlcm(l) => encode_mlcm(l),
        ProblemSpec::Framework(inst, out) => Ok(crate::framework::build(inst, *out)?),
    }
}

// Helpers shared by the encoders.

pub(crate) fn families(m: &mut IpModel, kinds: &[Table2Kind], g: &Graph, gp: &Graph) -> Result<(), EncodeError> {
    for &k in kinds {
        add_table2_constraints(m, k, g, gp)?;
    }
    Ok(())
}

pub(crate) fn xv(m: &IpModel, u: NodeId, t: NodeId) -> VarId {
    m.x(u, t).expect("x grid declared")
}

/// Arcs `(a, b)` for every `a < b`.
pub(crate) fn forward_complete(n: usize) -> Graph {
    let mut arcs = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            arcs.push((a, b));
        }
    }
    Graph::directed(n, &arcs).expect("forward arcs are simple")
}

pub(crate) fn require_simple(g: &Graph, what: &str) -> Result<(), EncodeError> {
    if g.loops().next().is_some() {
        return invalid(format!("{what} does not take self-loops"));
    }
    Ok(())
}

pub(crate) fn require_undirected(g: &Graph, what: &str) -> Result<(), EncodeError> {
    if g.is_directed() {
        return invalid(format!("{what} needs an undirected graph"));
    }
    Ok(())
}

pub(crate) fn require_directed(g: &Graph, what: &str) -> Result<(), EncodeError> {
    if !g.is_directed() {
        return invalid(format!("{what} needs a directed graph"));
    }
    Ok(())
}

pub(crate) fn require_nonnegative_weights(g: &Graph, what: &str) -> Result<(), EncodeError> {
    if g.edges().iter().any(|e| e.w.is_negative()) {
        return invalid(format!("{what} needs nonnegative edge weights"));
    }
    Ok(())
}

/// Turns the rows `r <= K` into either a minimised `K` in `[lo, hi]` or the
/// fixed bound of `goal`.
pub(crate) fn cap_rows(
    m: &mut IpModel,
    fam: &str,
    goal: Goal,
    rows: Vec<LinExpr>,
    lo: Rational,
    hi: Rational,
) -> Result<(), EncodeError> {
    match goal {
        Goal::Minimize => {
            let k = m.continuous(VarTag::K, lo, Some(hi.max(lo)))?;
            for r in rows {
                m.add_constraint(fam, r.with(k, int(-1)), Relation::Le, int(0))?;
            }
            m.set_objective(Sense::Minimize, LinExpr::sum([k]))?;
        }
        Goal::AtMost(b) => {
            for r in rows {
                m.add_constraint(fam, r, Relation::Le, b)?;
            }
        }
    }
    Ok(())
}

/// Integral, nonnegative bound of a feasibility goal.
pub(crate) fn integral_bound(goal: Goal, what: &str) -> Result<Option<i64>, EncodeError> {
    match goal {
        Goal::Minimize => Ok(None),
        Goal::AtMost(b) if b.is_integer() && !b.is_negative() => Ok(Some(b.to_integer())),
        Goal::AtMost(b) => invalid(format!("{what} bound {b} must be a nonnegative integer")),
    }
}

/// Value of a solved model in the problem's terms: 0 for a feasibility
/// question answered yes.
pub fn problem_value(spec: &ProblemSpec, objective: Option<Rational>) -> Option<Rational> {
    objective.map(|v| if spec.is_feasibility() { int(0) } else { v })
}
