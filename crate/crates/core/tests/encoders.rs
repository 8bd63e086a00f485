//! Worked instances for each encoder, solved end to end.

use std::collections::{BTreeMap, BTreeSet};

use gmip::framework::ObjectiveForm;
use gmip::ip::{evaluate, Assignment};
use gmip::oracle::{check_witness, oracle_solve, OracleStatus};
use gmip::problems::{
    decode, encode, problem_value, Arrangement, ArrangementKind, Bandwidth, Coloring, ColoringKind, CommonKind,
    CommonSubgraph, FrequencyAssignment, Goal, Golomb, GraphLabeling, IsoKind, Isomorphism, KTsp, KTspVariant,
    Labeling, MetricLabeling, ProblemSpec, Witness,
};
use gmip::rational::{int, Rational};
use gmip::solver::{solve, SolveConfig, Status};
use gmip::{Graph, LayeredGraph};

/// Status, problem value and checked answer.
fn run(spec: &ProblemSpec) -> (Status, Option<Rational>, Option<Witness>) {
    let model = encode(spec).expect("encodes");
    let sol = solve(&model, &SolveConfig::default()).expect("solves");
    let value = problem_value(spec, sol.objective);
    let w = sol.assignment.as_ref().map(|a| decode(spec, &model, a).expect("decodes"));
    if let Some(w) = &w {
        let checked = check_witness(spec, w).unwrap_or_else(|e| panic!("{w} rejected: {e}"));
        assert_eq!(Some(checked), value, "answer {w}");
    }
    (sol.status, value, w)
}

fn value(spec: ProblemSpec) -> Option<Rational> {
    let (status, v, _) = run(&spec);
    assert_eq!(status, Status::Optimal);
    v
}

fn infeasible(spec: ProblemSpec) -> bool {
    run(&spec).0 == Status::Infeasible
}

#[test]
fn ktsp_circuits() {
    let cycle = Graph::directed(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
    let path = Graph::directed(3, &[(1, 2), (2, 3)]).unwrap();
    let a = |g: Graph| ProblemSpec::KTsp(KTsp { g, k: 3, variant: KTspVariant::A, goal: Goal::Minimize });
    assert!(!infeasible(a(cycle)));
    assert!(infeasible(a(path)));
}

#[test]
fn ktsp_total_length_matches_enumeration() {
    let mut b = Graph::builder(4, true);
    let w = [[0, 3, 9, 4], [2, 0, 6, 7], [8, 5, 0, 1], [6, 3, 2, 0]];
    for u in 1..=4 {
        for v in 1..=4 {
            if u != v {
                b = b.weighted_edge(u, v, int(w[u - 1][v - 1]));
            }
        }
    }
    let spec = ProblemSpec::KTsp(KTsp { g: b.build().unwrap(), k: 4, variant: KTspVariant::B, goal: Goal::Minimize });
    let oracle = oracle_solve(&spec).unwrap().value;
    assert_eq!(value(spec), oracle);
    // Tour 1 -> 2 -> 3 -> 4 -> 1 has length 3 + 6 + 1 + 6 = 16; 1 -> 4 -> 3 -> 2 -> 1 has 4 + 2 + 5 + 2 = 13.
    assert_eq!(oracle, Some(int(13)));
}

#[test]
fn bandwidth_values() {
    let bw = |g| value(ProblemSpec::Bandwidth(Bandwidth { g, goal: Goal::Minimize }));
    assert_eq!(bw(Graph::path(5)), Some(int(1)));
    assert_eq!(bw(Graph::complete(4)), Some(int(3)));
    assert_eq!(bw(Graph::cycle(5)), Some(int(2)));
}

#[test]
fn bandwidth_bound_question() {
    let q = |k| ProblemSpec::Bandwidth(Bandwidth { g: Graph::cycle(5), goal: Goal::AtMost(int(k)) });
    assert!(infeasible(q(1)));
    assert_eq!(value(q(2)), Some(int(0)));
}

#[test]
fn arrangement_values() {
    let arr = |kind, g| value(ProblemSpec::Arrangement(Arrangement { kind, g, goal: Goal::Minimize }));
    assert_eq!(arr(ArrangementKind::Lap, Graph::path(2)), Some(int(1)));
    assert_eq!(arr(ArrangementKind::Lap, Graph::path(4)), Some(int(3)));
    assert_eq!(arr(ArrangementKind::Mclap, Graph::path(5)), Some(int(1)));
    assert_eq!(arr(ArrangementKind::Mclap, Graph::complete(4)), Some(int(4)));
}

#[test]
fn isomorphism_cases() {
    let iso = |kind, g, g2| ProblemSpec::Isomorphism(Isomorphism { kind, g, g2 });
    let relabelled = Graph::undirected(5, &[(1, 3), (3, 5), (5, 2), (2, 4), (4, 1)]).unwrap();
    assert!(!infeasible(iso(IsoKind::Gi, Graph::cycle(5), relabelled)));
    assert!(infeasible(iso(IsoKind::Gi, Graph::cycle(5), Graph::path(5))));
    let fig2 = Graph::undirected(5, &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4), (4, 5)]).unwrap();
    assert!(!infeasible(iso(IsoKind::Si, fig2.clone(), Graph::cycle(4))));
    let (_, _, w) = run(&iso(IsoKind::Isi, fig2, Graph::cycle(4)));
    let Some(Witness::Map(m)) = w else { panic!("expected a map") };
    assert_eq!(m.keys().copied().collect::<Vec<_>>(), vec![2, 3, 4, 5]);
}

#[test]
fn identity_point_decodes_to_identity() {
    let g = Graph::undirected(4, &[(1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
    let spec = ProblemSpec::Isomorphism(Isomorphism { kind: IsoKind::Gi, g: g.clone(), g2: g });
    let model = encode(&spec).unwrap();
    let mut a = Assignment::zeros(&model);
    for u in 1..=4 {
        a.set(model.x(u, u).unwrap(), int(1));
    }
    assert!(evaluate(&model, &a).feasible());
    let identity: BTreeMap<_, _> = (1..=4).map(|u| (u, u)).collect();
    assert_eq!(decode(&spec, &model, &a).unwrap(), Witness::Map(identity));
}

#[test]
fn common_subgraph_cases() {
    let g = Graph::undirected(4, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)]).unwrap();
    let lcs = ProblemSpec::CommonSubgraph(CommonSubgraph { kind: CommonKind::Lcs, g: g.clone(), g2: g.clone() });
    assert_eq!(value(lcs), Some(int(5)));
    let cmp = |g, g2| value(ProblemSpec::CommonSubgraph(CommonSubgraph { kind: CommonKind::Cmp, g, g2 }));
    assert_eq!(cmp(g.clone(), g), Some(int(5)));
    let contacts = Graph::undirected(3, &[(1, 3)]).unwrap();
    assert_eq!(cmp(contacts, Graph::path(2)), Some(int(1)));
}

#[test]
fn coloring_cases() {
    let mut gkc = Coloring::new(ColoringKind::Gkc, Graph::complete_bipartite(2, 3));
    gkc.k = Some(2);
    assert!(!infeasible(ProblemSpec::Coloring(gkc)));
    let mut k3 = Coloring::new(ColoringKind::Gkc, Graph::complete(3));
    k3.k = Some(2);
    assert!(infeasible(ProblemSpec::Coloring(k3)));
    assert_eq!(value(ProblemSpec::Coloring(Coloring::new(ColoringKind::Gc, Graph::cycle(5)))), Some(int(3)));
    assert_eq!(value(ProblemSpec::Coloring(Coloring::new(ColoringKind::Mcp, Graph::complete(3)))), Some(int(3)));
}

#[test]
fn strength_keeps_the_optimal_cost() {
    // Path 1-2-3: colour 1 pays most on the ends, colour 2 in the middle.
    let mut a = Coloring::new(ColoringKind::MwscpA, Graph::path(3));
    a.k = Some(3);
    for (u, c, v) in [(1, 1, 5), (1, 2, 2), (2, 1, 2), (2, 2, 5), (3, 1, 5), (3, 2, 2), (1, 3, 1), (2, 3, 1), (3, 3, 1)] {
        a.costs.insert((u, c), int(v));
    }
    let z = value(ProblemSpec::Coloring(a.clone())).unwrap();
    assert_eq!(z, int(15));
    let mut b = a.clone();
    b.kind = ColoringKind::MwscpB;
    b.z_star = Some(z);
    let l = value(ProblemSpec::Coloring(b)).unwrap();
    assert_eq!(l, int(2));
    let l = l.to_integer() as usize;
    a.k = Some(l);
    a.costs.retain(|&(_, c), _| c <= l);
    assert_eq!(value(ProblemSpec::Coloring(a)), Some(z));
}

#[test]
fn graph_labeling_cases() {
    let gl = |span, m, k| {
        ProblemSpec::Labeling(Labeling::Gl(GraphLabeling { g: Graph::path(2), m, k, span, optimize: false }))
    };
    let (status, _, w) = run(&gl(2, 2, 1));
    assert_eq!(status, Status::Optimal);
    let Some(Witness::Labels(l)) = w else { panic!("expected labels") };
    assert_eq!(l.values().copied().collect::<BTreeSet<_>>(), BTreeSet::from([0, 2]));
    assert!(infeasible(gl(1, 2, 1)));
}

#[test]
fn frequency_assignment_penalties() {
    let fsfa = |freqs| {
        ProblemSpec::Labeling(Labeling::Fsfa(FrequencyAssignment::uniform(Graph::path(2), freqs, &[((1, 2), 1, int(7))])))
    };
    assert_eq!(value(fsfa(3)), Some(int(0)));
    assert_eq!(value(fsfa(2)), Some(int(7)));
}

fn metric(node_cost: &[((usize, usize), i64)], dist: &[((usize, usize), i64)], g: Graph) -> MetricLabeling {
    MetricLabeling {
        g,
        labels: 2,
        dist: dist.iter().map(|&(k, v)| (k, int(v))).collect(),
        node_cost: node_cost.iter().map(|&(k, v)| (k, int(v))).collect(),
        allow: BTreeMap::new(),
        form: ObjectiveForm::P2,
    }
}

#[test]
fn metric_labeling_cases() {
    let one = metric(&[((1, 1), 2), ((1, 2), 5)], &[((1, 1), 0), ((2, 2), 0), ((1, 2), 1)], Graph::empty(1));
    assert_eq!(value(ProblemSpec::MetricLabeling(one)), Some(int(2)));
    let two = metric(&[], &[((1, 1), 0), ((2, 2), 0), ((1, 2), 10)], Graph::path(2));
    assert_eq!(value(ProblemSpec::MetricLabeling(two)), Some(int(0)));
    let mut split = metric(&[], &[((2, 2), 0), ((1, 2), 10)], Graph::path(2));
    split.allow.insert(1, BTreeSet::from([1]));
    split.allow.insert(2, BTreeSet::from([2]));
    assert_eq!(value(ProblemSpec::MetricLabeling(split)), Some(int(10)));
}

#[test]
fn golomb_rulers() {
    let (status, _, w) = run(&ProblemSpec::Golomb(Golomb { n: 2, k: 1, optimize: false }));
    assert_eq!(status, Status::Optimal);
    assert_eq!(w, Some(Witness::Marks(vec![0, 1])));
    assert_eq!(value(ProblemSpec::Golomb(Golomb { n: 4, k: 10, optimize: true })), Some(int(6)));
    assert_eq!(value(ProblemSpec::Golomb(Golomb { n: 5, k: 12, optimize: true })), Some(int(11)));
}

#[test]
fn interval_completion() {
    assert_eq!(value(ProblemSpec::Igc(Graph::path(4))), Some(int(0)));
    assert_eq!(value(ProblemSpec::Igc(Graph::cycle(4))), Some(int(1)));
    assert_eq!(value(ProblemSpec::Igc(Graph::cycle(5))), Some(int(2)));
}

#[test]
fn crossing_minimization() {
    let l = |layers: Vec<Vec<usize>>, arcs: Vec<(usize, usize)>| LayeredGraph::new(layers, arcs).unwrap();
    let parallel = l(vec![vec![1, 2], vec![3, 4]], vec![(1, 3), (2, 4)]);
    assert_eq!(value(ProblemSpec::Mlcm(parallel)), Some(int(0)));
    let k22 = l(vec![vec![1, 2], vec![3, 4]], vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
    assert_eq!(value(ProblemSpec::Mlcm(k22)), Some(int(1)));
    let paths = l(vec![vec![1, 2], vec![3, 4], vec![5, 6]], vec![(1, 4), (2, 3), (4, 5), (3, 6)]);
    assert_eq!(value(ProblemSpec::Mlcm(paths)), Some(int(0)));
}

#[test]
fn oracle_agrees_on_examples() {
    let specs = [
        ProblemSpec::Bandwidth(Bandwidth { g: Graph::cycle(6), goal: Goal::Minimize }),
        ProblemSpec::Arrangement(Arrangement { kind: ArrangementKind::Pmp, g: Graph::cycle(5), goal: Goal::Minimize }),
        ProblemSpec::Igc(Graph::complete_bipartite(2, 3)),
    ];
    for spec in specs {
        let o = oracle_solve(&spec).unwrap();
        assert_eq!(o.status, OracleStatus::Optimal);
        assert_eq!(value(spec), o.value);
    }
}
