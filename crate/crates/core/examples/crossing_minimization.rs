//! Reordering the layers of a small layered drawing to remove crossings.

use gmip::problems::{decode, encode, problem_value};
use gmip::{solve, LayeredGraph, ProblemSpec, SolveConfig};

pub fn run() {
    let layers = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8]];
    let arcs = vec![(1, 6), (2, 5), (3, 4), (1, 4), (4, 8), (5, 7), (6, 7)];
    let spec = ProblemSpec::Mlcm(LayeredGraph::new(layers, arcs).unwrap());
    let model = encode(&spec).unwrap();
    println!("model: {}", model.stats());
    let sol = solve(&model, &SolveConfig::default()).unwrap();
    let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
    println!("crossings {}: {w}", problem_value(&spec, sol.objective).unwrap());
}

fn main() {
    run();
}
