//! Instance files: `key = value` settings plus table lines.
//!
//! ```text
//! # bandwidth of the 5-path
//! problem = bandwidth
//! mode = optimize          # or feasibility (needs K)
//! graph = p5.graph         # relative to this file
//! ```
//!
//! Settings: `problem`, `mode`, `K`, `k`, `m`, `n`, `labels`, `graph`,
//! `graph2`, `objective`, `output`, `regime`, `preserve`, `reflect`, `zstar`.
//! Tables, one entry per line:
//!
//! ```text
//! c <u> <a> <value>            node cost / colour cost
//! d <u> <v> <a> <b> <value>    edge cost (framework)
//! t <u> <v> <int ...>          forbidden values / separation
//! p <u> <v> <tau> <value>      penalty
//! w <u> <value>                node weight
//! D <a> <b> <value>            label distance (metric labelling)
//! allow <u> <a ...>            allowable targets
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::framework::{MatchingInstance, ObjectiveForm, Output, Regime};
use crate::graph::{parse_graph, Graph, GraphFile, NodeId, ParseError};
use crate::problems::{
    Arrangement, ArrangementKind, Bandwidth, Coloring, ColoringKind, CommonKind, CommonSubgraph, FrequencyAssignment,
    Goal, Golomb, GraphLabeling, IsoKind, Isomorphism, KTsp, KTspVariant, Labeling, MetricLabeling, ProblemSpec,
    PROBLEMS,
};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Graph { path: String, source: ParseError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

/// Raw contents of an instance file before the problem is assembled.
#[derive(Debug, Default, Clone)]
struct Raw {
    settings: BTreeMap<String, (usize, String)>,
    c: Vec<(usize, NodeId, NodeId, Rational)>,
    d: Vec<(usize, (NodeId, NodeId), (NodeId, NodeId), Rational)>,
    t: Vec<(usize, (NodeId, NodeId), Vec<i64>)>,
    p: Vec<(usize, (NodeId, NodeId), i64, Rational)>,
    w: Vec<(usize, NodeId, Rational)>,
    dist: Vec<(usize, NodeId, NodeId, Rational)>,
    allow: Vec<(usize, NodeId, Vec<NodeId>)>,
}

const KEYS: &[&str] = &[
    "problem", "mode", "K", "k", "m", "n", "labels", "graph", "graph2", "objective", "output", "regime", "preserve",
    "reflect", "zstar",
];

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn at<T>(&self, line: usize, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Parse { path: self.path.to_string(), line, message: message.into() })
    }

    fn invalid<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Invalid { path: self.path.to_string(), message: message.into() })
    }
}

fn parse_raw(text: &str, ctx: &Ctx) -> Result<Raw, SpecError> {
    let mut raw = Raw::default();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return ctx.at(no, format!("unknown setting `{key}`"));
            }
            if value.is_empty() {
                return ctx.at(no, format!("`{key}` has no value"));
            }
            if raw.settings.insert(key.to_string(), (no, value.to_string())).is_some() {
                return ctx.at(no, format!("`{key}` set twice"));
            }
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().expect("nonempty line");
        let rest: Vec<&str> = words.collect();
        let node = |s: &str| -> Result<NodeId, SpecError> {
            match s.parse::<NodeId>() {
                Ok(u) if u >= 1 => Ok(u),
                _ => ctx.at(no, format!("`{s}` is not a node id")),
            }
        };
        let num = |s: &str| -> Result<Rational, SpecError> {
            parse_rational(s).map_or_else(|| ctx.at(no, format!("`{s}` is not a number")), Ok)
        };
        let integer = |s: &str| -> Result<i64, SpecError> {
            s.parse::<i64>().map_or_else(|_| ctx.at(no, format!("`{s}` is not an integer")), Ok)
        };
        let arity = |want: usize| -> Result<(), SpecError> {
            if rest.len() == want {
                Ok(())
            } else {
                ctx.at(no, format!("`{head}` takes {want} fields, found {}", rest.len()))
            }
        };
        match head {
            "c" => {
                arity(3)?;
                raw.c.push((no, node(rest[0])?, node(rest[1])?, num(rest[2])?));
            }
            "d" => {
                arity(5)?;
                raw.d.push((no, (node(rest[0])?, node(rest[1])?), (node(rest[2])?, node(rest[3])?), num(rest[4])?));
            }
            "t" => {
                if rest.len() < 2 {
                    return ctx.at(no, "`t` needs an edge");
                }
                let values = rest[2..].iter().map(|s| integer(s)).collect::<Result<_, _>>()?;
                raw.t.push((no, (node(rest[0])?, node(rest[1])?), values));
            }
            "p" => {
                arity(4)?;
                raw.p.push((no, (node(rest[0])?, node(rest[1])?), integer(rest[2])?, num(rest[3])?));
            }
            "w" => {
                arity(2)?;
                raw.w.push((no, node(rest[0])?, num(rest[1])?));
            }
            "D" => {
                arity(3)?;
                raw.dist.push((no, node(rest[0])?, node(rest[1])?, num(rest[2])?));
            }
            "allow" => {
                if rest.len() < 2 {
                    return ctx.at(no, "`allow` needs a node and at least one target");
                }
                let targets = rest[1..].iter().map(|s| node(s)).collect::<Result<_, _>>()?;
                raw.allow.push((no, node(rest[0])?, targets));
            }
            _ => return ctx.at(no, format!("unrecognised line `{line}`")),
        }
    }
    Ok(raw)
}

struct Assembler<'a> {
    raw: Raw,
    ctx: Ctx<'a>,
    base: PathBuf,
}

impl Assembler<'_> {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.raw.settings.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn need(&self, key: &str, problem: &str) -> Result<(usize, &str), SpecError> {
        self.get(key).map_or_else(|| self.ctx.invalid(format!("`{problem}` needs `{key} = ...`")), Ok)
    }

    fn int_setting<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, SpecError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).or_else(|_| self.ctx.at(line, format!("`{key}` must be an integer"))),
        }
    }

    fn need_int<T: std::str::FromStr>(&self, key: &str, problem: &str) -> Result<T, SpecError> {
        self.need(key, problem)?;
        Ok(self.int_setting(key)?.expect("present"))
    }

    fn bool_setting(&self, key: &str, default: bool) -> Result<bool, SpecError> {
        match self.get(key) {
            None => Ok(default),
            Some((_, "true" | "yes" | "1")) => Ok(true),
            Some((_, "false" | "no" | "0")) => Ok(false),
            Some((line, _)) => self.ctx.at(line, format!("`{key}` must be true or false")),
        }
    }

    fn optimize(&self) -> Result<bool, SpecError> {
        match self.get("mode") {
            None | Some((_, "optimize" | "optimise")) => Ok(true),
            Some((_, "feasibility")) => Ok(false),
            Some((line, m)) => self.ctx.at(line, format!("mode `{m}` is neither optimize nor feasibility")),
        }
    }

    fn goal(&self, problem: &str) -> Result<Goal, SpecError> {
        if self.optimize()? {
            return Ok(Goal::Minimize);
        }
        let (line, v) = self.need("K", problem)?;
        parse_rational(v).map(Goal::AtMost).map_or_else(|| self.ctx.at(line, "`K` must be a number"), Ok)
    }

    /// `labels = lo..hi` or `labels = count` (meaning `lo..count` for the
    /// given default `lo`).
    fn labels(&self, problem: &str, lo_default: i64) -> Result<(i64, i64), SpecError> {
        let (line, v) = self.need("labels", problem)?;
        let bad = || self.ctx.at(line, format!("`labels` must look like `{lo_default}..9` or a count"));
        let (lo, hi) = match v.split_once("..") {
            Some((a, b)) => match (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return bad(),
            },
            None => match v.parse::<i64>() {
                Ok(c) => (lo_default, lo_default + c - 1),
                Err(_) => return bad(),
            },
        };
        if lo != lo_default || hi < lo {
            return self.ctx.at(line, format!("labels for `{problem}` start at {lo_default}"));
        }
        Ok((lo, hi))
    }

    fn load_graph(&self, key: &str, problem: &str) -> Result<GraphFile, SpecError> {
        let (_, rel) = self.need(key, problem)?;
        let path = self.base.join(rel);
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| SpecError::Io { path: shown.clone(), message: e.to_string() })?;
        parse_graph(&text).map_err(|source| SpecError::Graph { path: shown, source })
    }

    fn graph(&self, key: &str, problem: &str) -> Result<Graph, SpecError> {
        Ok(self.load_graph(key, problem)?.graph)
    }

    fn no_tables(&self, problem: &str, allowed: &[&str]) -> Result<(), SpecError> {
        let r = &self.raw;
        let present = [
            ("c", r.c.first().map(|e| e.0)),
            ("d", r.d.first().map(|e| e.0)),
            ("t", r.t.first().map(|e| e.0)),
            ("p", r.p.first().map(|e| e.0)),
            ("w", r.w.first().map(|e| e.0)),
            ("D", r.dist.first().map(|e| e.0)),
            ("allow", r.allow.first().map(|e| e.0)),
        ];
        for (name, line) in present {
            if let (Some(line), false) = (line, allowed.contains(&name)) {
                return self.ctx.at(line, format!("`{name}` lines do not apply to `{problem}`"));
            }
        }
        Ok(())
    }

    fn build(&self) -> Result<ProblemSpec, SpecError> {
        let (line, tag) = self.get("problem").map_or_else(|| self.ctx.invalid("missing `problem = ...`"), Ok)?;
        let tag = tag.to_ascii_lowercase();
        let tables: &[&str] = match tag.as_str() {
            "mwscp-a" | "mwscp-b" => &["c"],
            "wvcp" => &["w"],
            "fsfa" => &["t", "p"],
            "mlp" => &["c", "D", "allow"],
            "framework" => &["c", "d", "t", "p", "allow"],
            _ => &[],
        };
        self.no_tables(&tag, tables)?;
        let t = tag.as_str();
        let spec = match t {
            "ktsp-a" | "ktsp-b" | "ktsp-c" => {
                let variant = match t {
                    "ktsp-a" => KTspVariant::A,
                    "ktsp-b" => KTspVariant::B,
                    _ => KTspVariant::C,
                };
                let goal = if variant == KTspVariant::A { Goal::Minimize } else { self.goal(t)? };
                ProblemSpec::KTsp(KTsp { g: self.graph("graph", t)?, k: self.need_int("k", t)?, variant, goal })
            }
            "bandwidth" | "dbp" => {
                let g = self.graph("graph", t)?;
                if t == "dbp" && !g.is_directed() {
                    return self.ctx.invalid("`dbp` needs a directed graph");
                }
                ProblemSpec::Bandwidth(Bandwidth { g, goal: self.goal(t)? })
            }
            "lap" | "dlap" | "pmp" | "mclap" => {
                let kind = match t {
                    "lap" => ArrangementKind::Lap,
                    "dlap" => ArrangementKind::Dlap,
                    "pmp" => ArrangementKind::Pmp,
                    _ => ArrangementKind::Mclap,
                };
                ProblemSpec::Arrangement(Arrangement { kind, g: self.graph("graph", t)?, goal: self.goal(t)? })
            }
            "gi" | "si" | "isi" => {
                let kind = match t {
                    "gi" => IsoKind::Gi,
                    "si" => IsoKind::Si,
                    _ => IsoKind::Isi,
                };
                ProblemSpec::Isomorphism(Isomorphism { kind, g: self.graph("graph", t)?, g2: self.graph("graph2", t)? })
            }
            "lcs" | "mism" | "msm" | "cmp" => {
                let kind = match t {
                    "lcs" => CommonKind::Lcs,
                    "mism" => CommonKind::Mism,
                    "msm" => CommonKind::Msm,
                    _ => CommonKind::Cmp,
                };
                ProblemSpec::CommonSubgraph(CommonSubgraph { kind, g: self.graph("graph", t)?, g2: self.graph("graph2", t)? })
            }
            "gkc" | "gc" | "gh" | "dgh" | "mwscp-a" | "mwscp-b" | "wvcp" | "mcp" | "mwis" => self.coloring(t)?,
            "gl" => {
                let (_, span) = self.labels(t, 0)?;
                ProblemSpec::Labeling(Labeling::Gl(GraphLabeling {
                    g: self.graph("graph", t)?,
                    m: self.need_int("m", t)?,
                    k: self.need_int("k", t)?,
                    span,
                    optimize: self.optimize()?,
                }))
            }
            "fsfa" => self.fsfa()?,
            "mlp" => self.metric()?,
            "golomb" => {
                let n: usize = self.need_int("n", t)?;
                let optimize = self.optimize()?;
                let k = match self.int_setting::<usize>("K")? {
                    Some(k) => k,
                    None if optimize => (1usize << n.saturating_sub(1).min(20)) - 1,
                    None => return self.ctx.invalid("a feasibility ruler needs `K`"),
                };
                ProblemSpec::Golomb(Golomb { n, k, optimize })
            }
            "igc" => ProblemSpec::Igc(self.graph("graph", t)?),
            "mlcm" => {
                let file = self.load_graph("graph", t)?;
                let layered = file.layered().map_err(|e| SpecError::Invalid { path: self.ctx.path.into(), message: e.to_string() })?;
                ProblemSpec::Mlcm(layered)
            }
            "framework" => self.framework()?,
            _ => {
                let known: Vec<&str> = PROBLEMS.iter().map(|p| p.0).collect();
                return self.ctx.at(line, format!("unknown problem `{t}` (known: {})", known.join(", ")));
            }
        };
        Ok(spec)
    }

    fn coloring(&self, t: &str) -> Result<ProblemSpec, SpecError> {
        let kind = match t {
            "gkc" => ColoringKind::Gkc,
            "gc" => ColoringKind::Gc,
            "gh" => ColoringKind::Gh,
            "dgh" => ColoringKind::Dgh,
            "mwscp-a" => ColoringKind::MwscpA,
            "mwscp-b" => ColoringKind::MwscpB,
            "wvcp" => ColoringKind::Wvcp,
            "mcp" => ColoringKind::Mcp,
            _ => ColoringKind::Mwis,
        };
        let mut s = Coloring::new(kind, self.graph("graph", t)?);
        if matches!(kind, ColoringKind::Gh | ColoringKind::Dgh) {
            s.g2 = Some(self.graph("graph2", t)?);
        }
        s.k = self.int_setting("K")?;
        for &(line, u, a, c) in &self.raw.c {
            if s.costs.insert((u, a), c).is_some() {
                return self.ctx.at(line, format!("cost ({u}, {a}) given twice"));
            }
        }
        for &(line, u, w) in &self.raw.w {
            if s.weights.insert(u, w).is_some() {
                return self.ctx.at(line, format!("weight of {u} given twice"));
            }
        }
        if let Some((line, z)) = self.get("zstar") {
            s.z_star = Some(parse_rational(z).map_or_else(|| self.ctx.at(line, "`zstar` must be a number"), Ok)?);
        }
        Ok(ProblemSpec::Coloring(s))
    }

    fn fsfa(&self) -> Result<ProblemSpec, SpecError> {
        let (_, hi) = self.labels("fsfa", 0)?;
        let mut s = FrequencyAssignment {
            g: self.graph("graph", "fsfa")?,
            freqs: (hi + 1) as usize,
            separation: BTreeMap::new(),
            penalty: BTreeMap::new(),
        };
        for (line, (u, v), vals) in &self.raw.t {
            let [sep] = vals[..] else { return self.ctx.at(*line, "`t` takes one separation per edge here") };
            s.separation.insert(((*u).min(*v), (*u).max(*v)), sep);
        }
        for &(_, (u, v), tau, p) in &self.raw.p {
            s.penalty.insert(((u.min(v), u.max(v)), tau), p);
        }
        Ok(ProblemSpec::Labeling(Labeling::Fsfa(s)))
    }

    fn form(&self, default: ObjectiveForm) -> Result<ObjectiveForm, SpecError> {
        match self.get("objective") {
            None => Ok(default),
            Some((line, v)) => v.parse().or_else(|e: String| self.ctx.at(line, e)),
        }
    }

    fn allow_sets(&self) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        self.raw.allow.iter().map(|(_, u, ts)| (*u, ts.iter().copied().collect())).collect()
    }

    fn metric(&self) -> Result<ProblemSpec, SpecError> {
        let (_, hi) = self.labels("mlp", 1)?;
        let mut dist = BTreeMap::new();
        for &(line, a, b, d) in &self.raw.dist {
            if dist.insert((a.min(b), a.max(b)), d).is_some() {
                return self.ctx.at(line, format!("distance ({a}, {b}) given twice"));
            }
        }
        Ok(ProblemSpec::MetricLabeling(MetricLabeling {
            g: self.graph("graph", "mlp")?,
            labels: hi as usize,
            dist,
            node_cost: self.raw.c.iter().map(|&(_, u, a, c)| ((u, a), c)).collect(),
            allow: self.allow_sets(),
            form: self.form(ObjectiveForm::P2)?,
        }))
    }

    fn framework(&self) -> Result<ProblemSpec, SpecError> {
        let output = match self.get("output") {
            None => Output::Feasibility,
            Some((line, v)) => v.parse().or_else(|e: String| self.ctx.at(line, e))?,
        };
        let regime = match self.get("regime") {
            None => Regime::ManyToOne,
            Some((line, v)) => v.parse().or_else(|e: String| self.ctx.at(line, e))?,
        };
        let mut inst = MatchingInstance::new(self.graph("graph", "framework")?, self.graph("graph2", "framework")?)
            .with_regime(regime);
        inst.preserve_edges = self.bool_setting("preserve", true)?;
        inst.reflect_target_edges = self.bool_setting("reflect", false)?;
        inst.allow = self.allow_sets();
        for &(_, u, a, c) in &self.raw.c {
            inst.set_node_cost(u, a, c);
        }
        for &(_, e, t, d) in &self.raw.d {
            inst.set_edge_cost(e, t, d);
        }
        for (_, e, vals) in &self.raw.t {
            inst.set_forbidden(*e, vals.iter().copied());
        }
        for &(_, e, tau, p) in &self.raw.p {
            inst.set_penalty(e, tau, p);
        }
        Ok(ProblemSpec::Framework(inst, output))
    }
}

/// Parses instance text; graph paths are resolved against `base`. `name`
/// labels error messages.
pub fn parse_spec(text: &str, base: &Path, name: &str) -> Result<ProblemSpec, SpecError> {
    let ctx = Ctx { path: name };
    let raw = parse_raw(text, &ctx)?;
    Assembler { raw, ctx, base: base.to_path_buf() }.build()
}

pub fn load_spec(path: &Path) -> Result<ProblemSpec, SpecError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io { path: shown.clone(), message: e.to_string() })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_spec(&text, base, &shown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn dir_with(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, body) in files {
            std::fs::write(dir.path().join(name), body).unwrap();
        }
        dir
    }

    const P3: &str = "p graph 3 2 undirected\ne 1 2\ne 2 3\n";

    #[test]
    fn bandwidth_bound() {
        let dir = dir_with(&[("g.graph", P3)]);
        let text = "problem = bandwidth\nmode = feasibility\nK = 1\ngraph = g.graph\n";
        let spec = parse_spec(text, dir.path(), "s").unwrap();
        assert!(matches!(spec, ProblemSpec::Bandwidth(Bandwidth { goal: Goal::AtMost(k), .. }) if k == int(1)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dir = dir_with(&[("g.graph", P3)]);
        let err = parse_spec("problem = lap\n\nc 1 x 3\n", dir.path(), "s").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_spec("problem = nope\n", dir.path(), "s").unwrap_err();
        assert!(err.to_string().contains("line 1") && err.to_string().contains("unknown problem"), "{err}");
        let err = parse_spec("problem = lap\ngraph = g.graph\nw 1 2\n", dir.path(), "s").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn framework_tables() {
        let dir = dir_with(&[("g.graph", P3)]);
        let text = "problem = framework\noutput = output2-P2\nregime = one-to-one\ngraph = g.graph\ngraph2 = g.graph\n\
                    c 1 2 5\nd 1 2 2 3 7\nt 1 2 0 1\np 1 2 1 4\nallow 1 1 2\n";
        let ProblemSpec::Framework(inst, out) = parse_spec(text, dir.path(), "s").unwrap() else { panic!() };
        assert_eq!(out, Output::Optimize(ObjectiveForm::P2));
        assert_eq!(inst.regime, Regime::OneToOne);
        assert_eq!(inst.c(1, 2), int(5));
        assert_eq!(inst.d((2, 1), (3, 2)), int(7));
        assert_eq!(inst.penalty_of((1, 2), 1), Some(int(4)));
        assert_eq!(inst.allowed(1), vec![1, 2]);
    }

    #[test]
    fn labels_ranges() {
        let dir = dir_with(&[("g.graph", P3)]);
        let ProblemSpec::Labeling(Labeling::Gl(gl)) =
            parse_spec("problem = gl\nm = 2\nk = 1\nlabels = 0..4\ngraph = g.graph\n", dir.path(), "s").unwrap()
        else {
            panic!()
        };
        assert_eq!(gl.span, 4);
        assert!(parse_spec("problem = gl\nm = 2\nk = 1\nlabels = 1..4\ngraph = g.graph\n", dir.path(), "s").is_err());
    }
}
