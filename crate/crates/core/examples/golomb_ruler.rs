//! Shortest Golomb rulers with up to six marks.

use gmip::problems::{decode, encode, problem_value, Golomb, Witness};
use gmip::{solve, ProblemSpec, SolveConfig};

pub fn run() {
    for (n, k) in [(3, 5), (4, 8), (5, 12), (6, 18)] {
        let spec = ProblemSpec::Golomb(Golomb { n, k, optimize: true });
        let model = encode(&spec).unwrap();
        let sol = solve(&model, &SolveConfig::default().with_threads(4)).unwrap();
        let length = problem_value(&spec, sol.objective).unwrap();
        let Witness::Marks(marks) = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap() else {
            unreachable!()
        };
        println!("n = {n}: length {length}, marks {marks:?}, {} search nodes", sol.stats.nodes);
    }
}

fn main() {
    run();
}
