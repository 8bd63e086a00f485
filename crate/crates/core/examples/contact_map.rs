//! Contact map overlap: align two small contact maps without crossings and
//! count the shared contacts.

use gmip::problems::{decode, encode, problem_value, CommonKind, CommonSubgraph};
use gmip::{solve, Graph, ProblemSpec, SolveConfig};

pub fn run() {
    let a = Graph::undirected(6, &[(1, 4), (2, 6), (3, 5), (1, 6)]).unwrap();
    let b = Graph::undirected(5, &[(1, 3), (2, 5), (1, 5), (3, 4)]).unwrap();
    let spec = ProblemSpec::CommonSubgraph(CommonSubgraph { kind: CommonKind::Cmp, g: a, g2: b });
    let model = encode(&spec).unwrap();
    let sol = solve(&model, &SolveConfig::default()).unwrap();
    let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
    println!("shared contacts: {}", problem_value(&spec, sol.objective).unwrap());
    println!("alignment: {w}");
}

fn main() {
    run();
}
