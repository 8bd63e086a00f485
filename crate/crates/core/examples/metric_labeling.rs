//! Metric labeling: place four tasks on three processors, paying a run cost
//! per placement and a distance-weighted cost per communicating pair.

use std::collections::BTreeMap;

use gmip::framework::ObjectiveForm;
use gmip::problems::{decode, encode, problem_value, MetricLabeling};
use gmip::{int, solve, Graph, ProblemSpec, SolveConfig};

pub fn run() {
    let tasks = Graph::builder(4, false)
        .weighted_edge(1, 2, int(3))
        .weighted_edge(2, 3, int(1))
        .weighted_edge(3, 4, int(2))
        .build()
        .unwrap();
    let mut dist = BTreeMap::new();
    for (a, b, d) in [(1, 1, 0), (2, 2, 0), (3, 3, 0), (1, 2, 1), (2, 3, 1), (1, 3, 2)] {
        dist.insert((a, b), int(d));
    }
    let mut node_cost = BTreeMap::new();
    for (u, costs) in [(1, [1, 4, 6]), (2, [5, 1, 5]), (3, [6, 3, 1]), (4, [2, 6, 2])] {
        for (a, c) in costs.into_iter().enumerate() {
            node_cost.insert((u, a + 1), int(c));
        }
    }
    for form in [ObjectiveForm::P2, ObjectiveForm::P4] {
        let ml = MetricLabeling { g: tasks.clone(), labels: 3, dist: dist.clone(), node_cost: node_cost.clone(), allow: BTreeMap::new(), form };
        let spec = ProblemSpec::MetricLabeling(ml);
        let model = encode(&spec).unwrap();
        let sol = solve(&model, &SolveConfig::default()).unwrap();
        let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
        println!("{form}: cost {}  {w}", problem_value(&spec, sol.objective).unwrap());
    }
}

fn main() {
    run();
}
