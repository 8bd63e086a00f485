//! Frequency assignment with interference penalties: a triangle of
//! transmitters sharing too few channels.

use gmip::problems::{decode, encode, problem_value, FrequencyAssignment, Labeling};
use gmip::{int, solve, Graph, ProblemSpec, SolveConfig};

pub fn run() {
    for freqs in 2..=5 {
        let fa = FrequencyAssignment::uniform(
            Graph::complete(3),
            freqs,
            &[((1, 2), 1, int(5)), ((1, 3), 1, int(3)), ((2, 3), 0, int(8))],
        );
        let spec = ProblemSpec::Labeling(Labeling::Fsfa(fa));
        let model = encode(&spec).unwrap();
        let sol = solve(&model, &SolveConfig::default()).unwrap();
        let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
        println!("{freqs} channels: penalty {}, {w}", problem_value(&spec, sol.objective).unwrap());
    }
}

fn main() {
    run();
}
