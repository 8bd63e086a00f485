//! Chromatic number, weighted vertex colouring and clique partitioning.

use gmip::problems::{decode, encode, problem_value, Coloring, ColoringKind};
use gmip::{int, solve, Graph, ProblemSpec, SolveConfig};

fn show(spec: ProblemSpec) {
    let model = encode(&spec).unwrap();
    let sol = solve(&model, &SolveConfig::default()).unwrap();
    let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
    println!("{:<6} {}  {w}", spec.tag(), problem_value(&spec, sol.objective).unwrap());
}

pub fn run() {
    let petersen_like = Graph::undirected(
        6,
        &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4), (2, 5)],
    )
    .unwrap();
    show(ProblemSpec::Coloring(Coloring::new(ColoringKind::Gc, Graph::cycle(5))));
    show(ProblemSpec::Coloring(Coloring::new(ColoringKind::Gc, petersen_like.clone())));

    let mut wvcp = Coloring::new(ColoringKind::Wvcp, petersen_like);
    for (u, w) in [(1, 4), (2, 1), (3, 3), (4, 2), (5, 2), (6, 1)] {
        wvcp.weights.insert(u, int(w));
    }
    show(ProblemSpec::Coloring(wvcp));

    let g = Graph::builder(4, false)
        .weighted_edge(1, 2, int(3))
        .weighted_edge(2, 3, int(-2))
        .weighted_edge(3, 4, int(4))
        .weighted_edge(1, 4, int(-1))
        .build()
        .unwrap();
    show(ProblemSpec::Coloring(Coloring::new(ColoringKind::Mcp, g)));
}

fn main() {
    run();
}
