//! Shortest circuits through exactly k cities of a small weighted digraph.

use gmip::problems::{decode, encode, problem_value, Goal, KTsp, KTspVariant};
use gmip::{int, solve, Graph, ProblemSpec, SolveConfig, Status};

pub fn run() {
    let d = [[0, 4, 7, 3, 9], [4, 0, 2, 8, 5], [6, 2, 0, 4, 3], [3, 9, 4, 0, 6], [8, 5, 3, 6, 0]];
    let mut b = Graph::builder(5, true);
    for u in 1..=5 {
        for v in 1..=5 {
            if u != v {
                b = b.weighted_edge(u, v, int(d[u - 1][v - 1]));
            }
        }
    }
    let g = b.build().unwrap();
    for k in 2..=5 {
        for variant in [KTspVariant::B, KTspVariant::C] {
            let spec = ProblemSpec::KTsp(KTsp { g: g.clone(), k, variant, goal: Goal::Minimize });
            let model = encode(&spec).unwrap();
            let sol = solve(&model, &SolveConfig::default()).unwrap();
            if sol.status != Status::Optimal {
                println!("k = {k} {}: {}", spec.tag(), sol.status);
                continue;
            }
            let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
            println!("k = {k} {}: {}  {w}", spec.tag(), problem_value(&spec, sol.objective).unwrap());
        }
    }
}

fn main() {
    run();
}
