//! One matching instance under every objective form, checked against the
//! enumeration oracle.

use gmip::framework::{build, decode_matching, MatchingInstance, ObjectiveForm, Output, Regime};
use gmip::{int, oracle_framework, solve, Graph, SolveConfig};

pub fn run() {
    // Map a 3-path onto a 4-node target, one pattern node per target node.
    let target = Graph::undirected(4, &[(1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
    let mut inst = MatchingInstance::new(Graph::path(3), target.clone()).with_regime(Regime::OneToOne);
    for u in 1..=3 {
        for a in 1..=4 {
            inst.set_node_cost(u, a, int(((u * a) % 4) as i64));
        }
    }
    for e in [(1, 2), (2, 3)] {
        for t in target.edges() {
            inst.set_edge_cost(e, (t.u, t.v), int((t.u + t.v) as i64 - 2));
        }
    }

    let mut outputs = vec![Output::Feasibility];
    outputs.extend(ObjectiveForm::ALL.map(Output::Optimize));
    for out in outputs {
        let model = build(&inst, out).unwrap();
        let sol = solve(&model, &SolveConfig::default()).unwrap();
        let f = decode_matching(&model, sol.assignment.as_ref().unwrap()).unwrap();
        let oracle = oracle_framework(&inst, out).unwrap();
        let value = sol.objective.unwrap();
        let agree = if oracle.value == Some(value) { "agrees" } else { "DIFFERS" };
        println!("{:<10} {value:>3}  {f:?}  oracle {agree}  [{}]", out.to_string(), model.stats());
    }
}

fn main() {
    run();
}
