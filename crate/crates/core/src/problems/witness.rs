//! Reading a solved model back into the problem's own answer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{ColoringKind, CommonKind, Labeling, ProblemSpec};
use crate::graph::NodeId;
use crate::ip::{Assignment, IpModel, VarTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    /// Node to position, `1..=n`.
    Ordering(BTreeMap<NodeId, usize>),
    /// Nodes in circuit order.
    Tour(Vec<NodeId>),
    /// Partial map from the first graph to the second.
    Map(BTreeMap<NodeId, NodeId>),
    Relation(BTreeSet<(NodeId, NodeId)>),
    /// Node to colour or label value.
    Labels(BTreeMap<NodeId, i64>),
    /// Sorted ruler marks.
    Marks(Vec<i64>),
    /// Nodes of each layer, left to right.
    Layers(Vec<Vec<NodeId>>),
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ordering(pos) => {
                let mut by_pos: Vec<_> = pos.iter().map(|(&u, &p)| (p, u)).collect();
                by_pos.sort_unstable();
                write!(f, "ordering {}", join(by_pos.into_iter().map(|(_, u)| u), " "))
            }
            Witness::Tour(t) => match t.first() {
                Some(first) => write!(f, "tour {} -> {first}", join(t, " -> ")),
                None => f.write_str("tour (empty)"),
            },
            Witness::Map(m) => write!(f, "map {}", join(m.iter().map(|(u, a)| format!("{u}->{a}")), " ")),
            Witness::Relation(r) => write!(f, "relation {}", join(r.iter().map(|(u, a)| format!("({u},{a})")), " ")),
            Witness::Labels(l) => write!(f, "labels {}", join(l.iter().map(|(u, v)| format!("{u}:{v}")), " ")),
            Witness::Marks(m) => write!(f, "marks {}", join(m, " ")),
            Witness::Layers(ls) => {
                write!(f, "layers {}", join(ls.iter().map(|l| format!("[{}]", join(l, " "))), " "))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("node {u} takes both {a} and {b}")]
    MultipleTargets { u: NodeId, a: NodeId, b: NodeId },
    #[error("position {0} of the answer is empty")]
    Hole(usize),
}

fn pairs(model: &IpModel, a: &Assignment) -> Vec<(NodeId, NodeId)> {
    model
        .vars()
        .iter()
        .enumerate()
        .filter_map(|(id, v)| match v.tag {
            VarTag::X { u, t } if a.is_one(id) => Some((u, t)),
            _ => None,
        })
        .collect()
}

fn function(model: &IpModel, a: &Assignment) -> Result<BTreeMap<NodeId, NodeId>, DecodeError> {
    let mut f = BTreeMap::new();
    for (u, t) in pairs(model, a) {
        if let Some(prev) = f.insert(u, t) {
            return Err(DecodeError::MultipleTargets { u, a: prev.min(t), b: prev.max(t) });
        }
    }
    Ok(f)
}

/// Decodes `a` (a feasible point of `encode(spec)`) into a witness.
pub fn decode(spec: &ProblemSpec, model: &IpModel, a: &Assignment) -> Result<Witness, DecodeError> {
    let shifted = |f: BTreeMap<NodeId, NodeId>| Witness::Labels(f.into_iter().map(|(u, t)| (u, t as i64 - 1)).collect());
    Ok(match spec {
        ProblemSpec::KTsp(s) => {
            let f = function(model, a)?;
            let mut tour = vec![0; s.k];
            for (u, p) in f {
                tour[p - 1] = u;
            }
            if let Some(i) = tour.iter().position(|&u| u == 0) {
                return Err(DecodeError::Hole(i + 1));
            }
            Witness::Tour(tour)
        }
        ProblemSpec::Bandwidth(_) | ProblemSpec::Arrangement(_) | ProblemSpec::Igc(_) => {
            Witness::Ordering(function(model, a)?)
        }
        ProblemSpec::CommonSubgraph(s) if s.kind == CommonKind::Msm => {
            Witness::Relation(pairs(model, a).into_iter().collect())
        }
        ProblemSpec::Isomorphism(_) | ProblemSpec::CommonSubgraph(_) | ProblemSpec::MetricLabeling(_) => {
            Witness::Map(function(model, a)?)
        }
        ProblemSpec::Framework(..) => Witness::Map(function(model, a)?),
        ProblemSpec::Coloring(s) => match s.kind {
            ColoringKind::Gh | ColoringKind::Dgh => Witness::Map(function(model, a)?),
            _ => Witness::Labels(function(model, a)?.into_iter().map(|(u, c)| (u, c as i64)).collect()),
        },
        ProblemSpec::Labeling(Labeling::Gl(_) | Labeling::Fsfa(_)) => shifted(function(model, a)?),
        ProblemSpec::Golomb(_) => {
            let mut marks: Vec<i64> = function(model, a)?.values().map(|&p| p as i64 - 1).collect();
            marks.sort_unstable();
            Witness::Marks(marks)
        }
        ProblemSpec::Mlcm(l) => {
            let f = function(model, a)?;
            let mut layers = Vec::new();
            for layer in l.layers() {
                let mut row = vec![0; layer.len()];
                for &u in layer {
                    if let Some(&p) = f.get(&u) {
                        row[p - 1] = u;
                    }
                }
                if let Some(i) = row.iter().position(|&u| u == 0) {
                    return Err(DecodeError::Hole(i + 1));
                }
                layers.push(row);
            }
            Witness::Layers(layers)
        }
    })
}
