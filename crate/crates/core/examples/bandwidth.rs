//! Bandwidth and linear arrangement of small graphs.

use gmip::problems::{decode, encode, problem_value, Arrangement, ArrangementKind, Bandwidth, Goal};
use gmip::{solve, Graph, ProblemSpec, SolveConfig};

fn report(name: &str, spec: &ProblemSpec) {
    let model = encode(spec).expect("encodes");
    let sol = solve(&model, &SolveConfig::default()).expect("solves");
    let value = problem_value(spec, sol.objective).expect("feasible");
    let answer = decode(spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
    println!("{name:<14} {value:>3}  {answer}  ({} nodes)", sol.stats.nodes);
}

pub fn run() {
    for (name, g) in [("path P6", Graph::path(6)), ("cycle C6", Graph::cycle(6)), ("K_{2,3}", Graph::complete_bipartite(2, 3))] {
        report(&format!("bw {name}"), &ProblemSpec::Bandwidth(Bandwidth { g: g.clone(), goal: Goal::Minimize }));
        let lap = Arrangement { kind: ArrangementKind::Lap, g, goal: Goal::Minimize };
        report(&format!("lap {name}"), &ProblemSpec::Arrangement(lap));
    }
}

fn main() {
    run();
}
