//! Graph representation shared by every encoder and oracle.
//!
//! Node ids are `1..=n`. Undirected edges are stored as `(u, v)` with
//! `u <= v`; directed arcs keep their orientation. Graphs are immutable once
//! built.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::rational::{int, parse_rational, Rational};

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("self-loop at node {0} not allowed")]
    SelfLoop(NodeId),
    #[error("operation requires an undirected graph")]
    NotUndirected,
    #[error("operation requires a directed graph")]
    NotDirected,
    #[error("invalid layering: {0}")]
    Layering(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Rational,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    self_loops_allowed: bool,
    edges: Vec<Edge>,
    lookup: BTreeMap<(NodeId, NodeId), usize>,
    out: Vec<BTreeSet<NodeId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<_> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("directed", &self.directed)
            .field("edges", &pairs)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    directed: bool,
    self_loops_allowed: bool,
    edges: Vec<(NodeId, NodeId, Rational)>,
}

impl GraphBuilder {
    pub fn new(n: usize, directed: bool) -> Self {
        GraphBuilder { n, directed, self_loops_allowed: false, edges: Vec::new() }
    }

    pub fn allow_self_loops(mut self) -> Self {
        self.self_loops_allowed = true;
        self
    }

    pub fn edge(self, u: NodeId, v: NodeId) -> Self {
        self.weighted_edge(u, v, int(1))
    }

    pub fn weighted_edge(mut self, u: NodeId, v: NodeId, w: Rational) -> Self {
        self.edges.push((u, v, w));
        self
    }

    pub fn edges(mut self, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        for (u, v) in pairs {
            self.edges.push((u, v, int(1)));
        }
        self
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        let n = self.n;
        let mut lookup = BTreeMap::new();
        let mut staged = Vec::with_capacity(self.edges.len());
        for (u, v, w) in self.edges {
            for node in [u, v] {
                if node == 0 || node > n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v && !self.self_loops_allowed {
                return Err(GraphError::SelfLoop(u));
            }
            let key = if self.directed { (u, v) } else { (u.min(v), u.max(v)) };
            if lookup.insert(key, 0usize).is_some() {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            staged.push(Edge { u: key.0, v: key.1, w });
        }
        staged.sort_by_key(|e| (e.u, e.v));
        let mut out = vec![BTreeSet::new(); n + 1];
        for (i, e) in staged.iter().enumerate() {
            lookup.insert((e.u, e.v), i);
            out[e.u].insert(e.v);
            if !self.directed {
                out[e.v].insert(e.u);
            }
        }
        Ok(Graph {
            n,
            directed: self.directed,
            self_loops_allowed: self.self_loops_allowed,
            edges: staged,
            lookup,
            out,
        })
    }
}

impl Graph {
    pub fn builder(n: usize, directed: bool) -> GraphBuilder {
        GraphBuilder::new(n, directed)
    }

    /// Unit-weight undirected graph from an edge list.
    pub fn undirected(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        GraphBuilder::new(n, false).edges(pairs.iter().copied()).build()
    }

    /// Unit-weight digraph from an arc list.
    pub fn directed(n: usize, arcs: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        GraphBuilder::new(n, true).edges(arcs.iter().copied()).build()
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n, false).build().expect("empty graph")
    }

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::undirected(n, &pairs).expect("path graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let mut pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        pairs.push((1, n));
        Graph::undirected(n, &pairs).expect("cycle graph")
    }

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                pairs.push((u, v));
            }
        }
        Graph::undirected(n, &pairs).expect("complete graph")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 1..=a {
            for v in a + 1..=a + b {
                pairs.push((u, v));
            }
        }
        Graph::undirected(a + b, &pairs).expect("complete bipartite graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn allows_self_loops(&self) -> bool {
        self.self_loops_allowed
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<NodeId> {
        1..=self.n
    }

    /// Edges (or arcs) sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges that are not self-loops.
    pub fn proper_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.u != e.v)
    }

    pub fn loops(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter(|e| e.u == e.v).map(|e| e.u)
    }

    fn key(&self, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
        if self.directed {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        }
    }

    /// `{u,v}` is an edge (undirected) or `(u,v)` is an arc (directed).
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.lookup.contains_key(&self.key(u, v))
    }

    /// Any arc between `u` and `v` in either direction.
    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn has_self_loop(&self, u: NodeId) -> bool {
        self.lookup.contains_key(&(u, u))
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<Rational> {
        self.lookup.get(&self.key(u, v)).map(|&i| self.edges[i].w)
    }

    fn check(&self, u: NodeId) -> Result<(), GraphError> {
        if u == 0 || u > self.n {
            Err(GraphError::NodeOutOfRange { node: u, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Open neighbourhood; out-neighbours for digraphs. A self-loop makes a
    /// node its own neighbour.
    pub fn neighbors(&self, u: NodeId) -> Result<&BTreeSet<NodeId>, GraphError> {
        self.check(u)?;
        Ok(&self.out[u])
    }

    /// `N[u] = N(u) ∪ {u}`.
    pub fn closed_neighbors(&self, u: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        let mut set = self.neighbors(u)?.clone();
        set.insert(u);
        Ok(set)
    }

    /// Undirected degree ignoring self-loops.
    pub fn degree(&self, u: NodeId) -> usize {
        self.out[u].iter().filter(|&&v| v != u).count()
    }

    /// Pairs `{u,v}`, `u < v`, that are not adjacent. For digraphs this is the
    /// pair set of the complement (no arc in either direction).
    pub fn non_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                if !self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Complement graph. The complement of a digraph is undirected: it joins
    /// every pair with no arc in either direction.
    pub fn complement(&self) -> Graph {
        Graph::undirected(self.n, &self.non_edges()).expect("complement is simple")
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let dist = self.bfs(1);
        dist.iter().skip(1).all(|d| d.is_some())
    }

    fn bfs(&self, src: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n + 1];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            let undirected_nbrs = self.out[u].iter().copied().chain(
                self.directed
                    .then(|| (1..=self.n).filter(move |&w| self.has_edge(w, u)))
                    .into_iter()
                    .flatten(),
            );
            for v in undirected_nbrs {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Pairs at shortest-path distance exactly two.
    pub fn distance_two_pairs(&self) -> Result<Vec<(NodeId, NodeId)>, GraphError> {
        if self.directed {
            return Err(GraphError::NotUndirected);
        }
        let mut out = Vec::new();
        for u in 1..=self.n {
            let dist = self.bfs(u);
            for (v, d) in dist.iter().enumerate().skip(u + 1) {
                if *d == Some(2) {
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    /// True when some pair carries arcs in both directions.
    pub fn has_antiparallel_arcs(&self) -> bool {
        self.directed && self.edges.iter().any(|e| e.u < e.v && self.has_edge(e.v, e.u))
    }
}

/// Nodes split into ordered layers with arcs between consecutive layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    layers: Vec<Vec<NodeId>>,
    arcs: Vec<(NodeId, NodeId)>,
    layer_of: Vec<usize>,
}

impl LayeredGraph {
    /// `layers[l]` lists the nodes of layer `l` (0-based here); nodes are
    /// `1..=total`. Each arc must go from layer `l` to layer `l + 1`.
    pub fn new(layers: Vec<Vec<NodeId>>, arcs: Vec<(NodeId, NodeId)>) -> Result<Self, GraphError> {
        let total: usize = layers.iter().map(Vec::len).sum();
        let mut layer_of = vec![usize::MAX; total + 1];
        for (l, layer) in layers.iter().enumerate() {
            for &u in layer {
                if u == 0 || u > total {
                    return Err(GraphError::NodeOutOfRange { node: u, n: total });
                }
                if layer_of[u] != usize::MAX {
                    return Err(GraphError::Layering(format!("node {u} in more than one layer")));
                }
                layer_of[u] = l;
            }
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &arcs {
            if u == 0 || u > total || v == 0 || v > total {
                return Err(GraphError::NodeOutOfRange { node: u.max(v), n: total });
            }
            if layer_of[v] != layer_of[u] + 1 {
                return Err(GraphError::Layering(format!(
                    "arc ({u},{v}) does not join consecutive layers"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(LayeredGraph { layers, arcs, layer_of })
    }

    pub fn layers(&self) -> &[Vec<NodeId>] {
        &self.layers
    }

    pub fn arcs(&self) -> &[(NodeId, NodeId)] {
        &self.arcs
    }

    pub fn layer_of(&self, u: NodeId) -> usize {
        self.layer_of[u]
    }

    pub fn node_count(&self) -> usize {
        self.layer_of.len() - 1
    }

    /// Arcs leaving layer `l`.
    pub fn arcs_from_layer(&self, l: usize) -> Vec<(NodeId, NodeId)> {
        self.arcs.iter().copied().filter(|&(u, _)| self.layer_of[u] == l).collect()
    }

    pub fn as_digraph(&self) -> Graph {
        Graph::directed(self.node_count(), &self.arcs).expect("layered arcs are simple")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Contents of a graph file: the graph plus an optional layering.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub layers: Option<Vec<Vec<NodeId>>>,
}

impl GraphFile {
    pub fn layered(&self) -> Result<LayeredGraph, GraphError> {
        let layers = self
            .layers
            .clone()
            .ok_or_else(|| GraphError::Layering("file has no layer lines".into()))?;
        let arcs = self.graph.edges().iter().map(|e| (e.u, e.v)).collect();
        LayeredGraph::new(layers, arcs)
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// p graph <n> <m> <directed|undirected> [selfloops]
/// e <u> <v> [w]
/// l <layer-index> <node-id ...>
/// ```
pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut header: Option<(usize, usize, GraphBuilder)> = None;
    let mut declared_edges = 0usize;
    let mut layers: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::new(line_no, "duplicate header"));
                }
                if toks.len() < 5 || toks[1] != "graph" {
                    return Err(ParseError::new(
                        line_no,
                        "expected `p graph <n> <m> <directed|undirected> [selfloops]`",
                    ));
                }
                let n = parse_count(toks[2], line_no)?;
                let m = parse_count(toks[3], line_no)?;
                let directed = match toks[4] {
                    "directed" => true,
                    "undirected" => false,
                    other => {
                        return Err(ParseError::new(line_no, format!("unknown graph kind `{other}`")))
                    }
                };
                let mut b = GraphBuilder::new(n, directed);
                match toks.get(5) {
                    Some(&"selfloops") => b = b.allow_self_loops(),
                    Some(other) => {
                        return Err(ParseError::new(line_no, format!("unexpected token `{other}`")))
                    }
                    None => {}
                }
                header = Some((n, m, b));
            }
            "e" => {
                let Some((_, _, b)) = header.as_mut() else {
                    return Err(ParseError::new(line_no, "edge before header"));
                };
                if toks.len() != 3 && toks.len() != 4 {
                    return Err(ParseError::new(line_no, "expected `e <u> <v> [w]`"));
                }
                let u = parse_count(toks[1], line_no)?;
                let v = parse_count(toks[2], line_no)?;
                let w = match toks.get(3) {
                    Some(t) => parse_rational(t)
                        .ok_or_else(|| ParseError::new(line_no, format!("bad weight `{t}`")))?,
                    None => int(1),
                };
                *b = std::mem::replace(b, GraphBuilder::new(0, false)).weighted_edge(u, v, w);
                declared_edges += 1;
            }
            "l" => {
                if header.is_none() {
                    return Err(ParseError::new(line_no, "layer before header"));
                }
                if toks.len() < 2 {
                    return Err(ParseError::new(line_no, "expected `l <layer-index> <node-id ...>`"));
                }
                let l = parse_count(toks[1], line_no)?;
                if l == 0 {
                    return Err(ParseError::new(line_no, "layer indices start at 1"));
                }
                let nodes = toks[2..]
                    .iter()
                    .map(|t| parse_count(t, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                layers.entry(l).or_default().extend(nodes);
            }
            other => return Err(ParseError::new(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let (_, m, builder) = header.ok_or_else(|| ParseError::new(last_line.max(1), "missing header"))?;
    if m != declared_edges {
        return Err(ParseError::new(
            last_line.max(1),
            format!("header declares {m} edges, found {declared_edges}"),
        ));
    }
    let graph = builder.build().map_err(|e| ParseError::new(last_line.max(1), e.to_string()))?;
    let layers = if layers.is_empty() {
        None
    } else {
        let expected: Vec<usize> = (1..=layers.len()).collect();
        if layers.keys().copied().collect::<Vec<_>>() != expected {
            return Err(ParseError::new(last_line, "layer indices must be 1..p without gaps"));
        }
        Some(layers.into_values().collect())
    };
    Ok(GraphFile { graph, layers })
}

fn parse_count(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, format!("expected a non-negative integer, got `{tok}`")))
}

/// Renders a graph in the text format accepted by [`parse_graph`].
pub fn write_graph(g: &Graph, layers: Option<&[Vec<NodeId>]>) -> String {
    let mut s = format!(
        "p graph {} {} {}{}\n",
        g.n(),
        g.m(),
        if g.is_directed() { "directed" } else { "undirected" },
        if g.allows_self_loops() { " selfloops" } else { "" }
    );
    for e in g.edges() {
        if e.w == int(1) {
            s.push_str(&format!("e {} {}\n", e.u, e.v));
        } else {
            s.push_str(&format!("e {} {} {}\n", e.u, e.v, crate::rational::format_decimal(&e.w)));
        }
    }
    if let Some(layers) = layers {
        for (i, layer) in layers.iter().enumerate() {
            let ids: Vec<String> = layer.iter().map(|u| u.to_string()).collect();
            s.push_str(&format!("l {} {}\n", i + 1, ids.join(" ")));
        }
    }
    s
}
