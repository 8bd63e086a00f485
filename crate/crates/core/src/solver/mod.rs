//! Exact branch-and-bound for 0-1 models.
//!
//! Supported models: binaries plus continuous variables that each appear in
//! rows only as lower-bounded quantities (`K >= ...`) and are minimised (or
//! ignored) by the objective. That covers every bottleneck-style encoding in
//! this crate. Anything else is rejected with [`SolveError::Unsupported`].

mod engine;

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::ip::{Assignment, IpModel, VarId};
use crate::rational::Rational;
use engine::{Compiled, Engine, FREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("variable `{0}` is a general integer; only binaries are supported")]
    NonBinaryInteger(String),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("objective is unbounded through `{0}`")]
    UnboundedObjective(String),
    #[error("coefficients overflow 64-bit scaling")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    LimitReached,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::LimitReached => "limit_reached",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    /// Unsatisfied assignment rows first, fewest free members wins.
    #[default]
    AssignmentFirst,
    /// Lowest-index free binary.
    Lexicographic,
}

pub type IncumbentHook = Arc<dyn Fn(&Rational) + Send + Sync>;

#[derive(Clone, Default)]
pub struct SolveConfig {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub threads: usize,
    pub branching: Branching,
    pub on_incumbent: Option<IncumbentHook>,
}

impl fmt::Debug for SolveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolveConfig")
            .field("node_limit", &self.node_limit)
            .field("time_limit", &self.time_limit)
            .field("threads", &self.threads)
            .field("branching", &self.branching)
            .field("on_incumbent", &self.on_incumbent.is_some())
            .finish()
    }
}

impl SolveConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = Some(nodes);
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub conflicts: u64,
    pub prunes: u64,
    pub incumbents: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    /// Objective in the model's own sense.
    pub objective: Option<Rational>,
    pub assignment: Option<Assignment>,
    pub stats: SolveStats,
    /// Proven lower bounds (minimisation sense): the root bound, then one
    /// entry per improving incumbent. Single-threaded runs only.
    pub bound_trace: Vec<Rational>,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

struct Incumbent {
    value: Option<Rational>,
    assignment: Option<Assignment>,
}

struct Shared<'m> {
    model: &'m IpModel,
    config: &'m SolveConfig,
    inc: Mutex<Incumbent>,
    generation: AtomicU64,
    nodes: AtomicU64,
    stop: AtomicBool,
    start: Instant,
    trace: Mutex<Vec<Rational>>,
    trace_on: bool,
}

impl Shared<'_> {
    /// Offers a leaf in minimisation sense; returns true when it improved.
    fn offer(&self, internal: Rational, a: Assignment, external: Rational) -> bool {
        let mut inc = self.inc.lock().unwrap();
        if inc.value.is_some_and(|v| internal >= v) {
            return false;
        }
        inc.value = Some(internal);
        inc.assignment = Some(a);
        self.generation.fetch_add(1, Ordering::SeqCst);
        if let Some(h) = &self.config.on_incumbent {
            h(&external);
        }
        true
    }

    fn snapshot(&self) -> (u64, Option<Rational>) {
        let inc = self.inc.lock().unwrap();
        (self.generation.load(Ordering::SeqCst), inc.value)
    }

    fn over_limit(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let hit = self.config.node_limit.is_some_and(|l| n > l)
            || (n % 256 == 0 && self.config.time_limit.is_some_and(|t| self.start.elapsed() >= t));
        if hit {
            self.stop.store(true, Ordering::Relaxed);
        }
        hit
    }
}

struct Frame {
    var: usize,
    one: bool,
    mark: usize,
    bound: Rational,
    depth: usize,
}

struct Worker<'a> {
    eng: Engine<'a>,
    gen: u64,
    inc: Option<Rational>,
    stats: SolveStats,
    groups_first: bool,
}

enum Mode<'s> {
    Solve,
    Split { depth: usize, out: &'s mut Vec<Vec<(usize, bool)>> },
}

impl<'a> Worker<'a> {
    fn refresh(&mut self, shared: &Shared) -> bool {
        let g = shared.generation.load(Ordering::SeqCst);
        if g == self.gen {
            return true;
        }
        let (g, v) = shared.snapshot();
        self.gen = g;
        self.inc = v;
        if let Some(v) = v {
            if self.eng.tighten(v) {
                self.eng.enqueue_tightened();
                return self.eng.propagate();
            }
        }
        true
    }

    fn pruned(&self, bound: &Rational) -> bool {
        self.inc.is_some_and(|v| *bound >= v)
    }

    /// Depth-first search below the current (propagated) state.
    /// Returns false if a limit stopped it.
    fn run(&mut self, shared: &Shared, mut mode: Mode<'_>) -> bool {
        let base = self.eng.trail_len();
        let mut stack: Vec<Frame> = Vec::new();
        let mut path: Vec<(usize, bool)> = Vec::new();
        let mut depth = 0usize;
        let mut live = true;
        let complete = loop {
            if live {
                self.stats.nodes += 1;
                if shared.over_limit() {
                    break false;
                }
                if !self.refresh(shared) {
                    self.stats.conflicts += 1;
                } else {
                    let bound = self.eng.bound();
                    if self.pruned(&bound) {
                        self.stats.prunes += 1;
                    } else {
                        match self.eng.select(self.groups_first) {
                            None => self.leaf(shared, &stack),
                            Some((b, first)) => match &mut mode {
                                Mode::Split { depth: d, out } if depth >= *d => {
                                    out.push(path[..depth].to_vec());
                                }
                                _ => {
                                    let mark = self.eng.trail_len();
                                    for one in [!first, first] {
                                        stack.push(Frame { var: b, one, mark, bound, depth: depth + 1 });
                                    }
                                }
                            },
                        }
                    }
                }
            }
            let Some(fr) = stack.pop() else { break true };
            self.eng.undo_to(fr.mark);
            depth = fr.depth;
            path.truncate(depth - 1);
            path.push((fr.var, fr.one));
            if self.pruned(&fr.bound) {
                self.stats.prunes += 1;
                live = false;
                continue;
            }
            self.eng.fix(fr.var, fr.one);
            live = self.eng.propagate();
            if !live {
                self.stats.conflicts += 1;
            }
        };
        self.eng.undo_to(base);
        complete
    }

    fn leaf(&mut self, shared: &Shared, stack: &[Frame]) {
        let Some((external, a)) = self.eng.leaf(shared.model) else {
            return;
        };
        let internal = if self.eng.p.negate { -external } else { external };
        if self.inc.is_some_and(|v| internal >= v) {
            return;
        }
        if shared.offer(internal, a, external) {
            self.stats.incumbents += 1;
            if shared.trace_on {
                let lb = stack.iter().map(|f| f.bound).fold(internal, |m, b| if b < m { b } else { m });
                shared.trace.lock().unwrap().push(lb);
            }
        }
        self.refresh(shared);
    }

    /// Applies a decision path from the root; false when it propagates to a
    /// conflict.
    fn descend(&mut self, path: &[(usize, bool)]) -> bool {
        for &(b, one) in path {
            match self.eng.val[b] {
                FREE => {
                    self.eng.fix(b, one);
                    if !self.eng.propagate() {
                        return false;
                    }
                }
                v => {
                    if (v == 1) != one {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Solves a model to proven optimality (or until a limit fires).
pub fn solve(model: &IpModel, config: &SolveConfig) -> Result<Solution, SolveError> {
    let compiled = Compiled::new(model)?;
    let threads = config.threads.max(1);
    let shared = Shared {
        model,
        config,
        inc: Mutex::new(Incumbent { value: None, assignment: None }),
        generation: AtomicU64::new(0),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        start: Instant::now(),
        trace: Mutex::new(Vec::new()),
        trace_on: threads == 1,
    };
    let groups_first = config.branching == Branching::AssignmentFirst;
    let mut root = Worker { eng: Engine::new(&compiled), gen: 0, inc: None, stats: SolveStats::default(), groups_first };
    let mut root_ok = true;
    for &(b, one) in &compiled.root_fix {
        match root.eng.val[b] {
            FREE => root.eng.fix(b, one),
            v if (v == 1) != one => root_ok = false,
            _ => {}
        }
    }
    root.eng.enqueue_all();
    root_ok = root_ok && root.eng.propagate();
    if shared.trace_on && root_ok {
        shared.trace.lock().unwrap().push(root.eng.bound());
    }

    let mut stats = SolveStats::default();
    let complete = if !root_ok {
        stats.nodes = 1;
        stats.conflicts = 1;
        true
    } else if threads == 1 {
        let ok = root.run(&shared, Mode::Solve);
        stats = root.stats.clone();
        ok
    } else {
        let depth = (usize::BITS - (4 * threads - 1).leading_zeros()) as usize;
        let mut parts = Vec::new();
        let ok = root.run(&shared, Mode::Split { depth, out: &mut parts });
        stats = root.stats.clone();
        let next = AtomicUsize::new(0);
        let all_ok = AtomicBool::new(ok);
        let merged = Mutex::new(SolveStats::default());
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| {
                    let mut w = Worker {
                        eng: root.eng.clone(),
                        gen: u64::MAX,
                        inc: None,
                        stats: SolveStats::default(),
                        groups_first,
                    };
                    let mark = w.eng.trail_len();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        if i >= parts.len() || shared.stop.load(Ordering::Relaxed) {
                            break;
                        }
                        if w.descend(&parts[i]) && !w.run(&shared, Mode::Solve) {
                            all_ok.store(false, Ordering::SeqCst);
                        }
                        w.eng.undo_to(mark);
                    }
                    let mut m = merged.lock().unwrap();
                    m.nodes += w.stats.nodes;
                    m.conflicts += w.stats.conflicts;
                    m.prunes += w.stats.prunes;
                    m.incumbents += w.stats.incumbents;
                });
            }
        });
        let m = merged.into_inner().unwrap();
        stats.nodes += m.nodes;
        stats.conflicts += m.conflicts;
        stats.prunes += m.prunes;
        stats.incumbents += m.incumbents;
        all_ok.load(Ordering::SeqCst) && !shared.stop.load(Ordering::SeqCst)
    };
    stats.elapsed = shared.start.elapsed();
    let inc = shared.inc.into_inner().unwrap();
    let objective = inc.value.map(|v| if compiled.negate { -v } else { v });
    let status = match (complete, &objective) {
        (false, _) => Status::LimitReached,
        (true, Some(_)) => Status::Optimal,
        (true, None) => Status::Infeasible,
    };
    let mut bound_trace = shared.trace.into_inner().unwrap();
    if !complete {
        bound_trace.clear();
    }
    Ok(Solution { status, objective, assignment: inc.assignment, stats, bound_trace })
}

/// Result of running propagation from a partial fixing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    /// Every binary fixed so far (given and implied), in model order.
    Fixed(Vec<(VarId, bool)>),
    /// Name of a row proven unsatisfiable.
    Conflict(String),
}

/// Fixes the given binaries and propagates every row to a fixpoint.
/// Continuous variables are left at their bounds.
pub fn propagate(model: &IpModel, partial: &[(VarId, bool)]) -> Result<Propagation, SolveError> {
    let compiled = Compiled::new(model)?;
    let mut eng = Engine::new(&compiled);
    let mut wanted = compiled.root_fix.clone();
    for &(v, one) in partial {
        let b = compiled.bin_of_var.get(v).copied().flatten().ok_or_else(|| {
            SolveError::Unsupported(format!("variable {v} is not a binary of this model"))
        })?;
        wanted.push((b, one));
    }
    for (b, one) in wanted {
        match eng.val[b] {
            FREE => eng.fix(b, one),
            v if (v == 1) != one => {
                return Ok(Propagation::Conflict(model.variable(compiled.var_of_bin[b]).name.clone()))
            }
            _ => {}
        }
    }
    eng.enqueue_all();
    if !eng.propagate() {
        let r = eng.conflict_row.expect("conflict row recorded");
        let src = compiled.rows[r].source;
        return Ok(Propagation::Conflict(model.constraints()[src].name.clone()));
    }
    let mut fixed: Vec<(VarId, bool)> =
        eng.trail().iter().map(|&b| (compiled.var_of_bin[b], eng.val[b] == 1)).collect();
    fixed.sort();
    Ok(Propagation::Fixed(fixed))
}
