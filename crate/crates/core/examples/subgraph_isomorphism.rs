//! A 4-cycle inside a five-node host: as a subgraph it sits on 1-2-3-4, as
//! an induced subgraph only on 2-3-4-5. The host is also matched against a
//! relabelled copy of itself.

use gmip::problems::{decode, encode, IsoKind, Isomorphism};
use gmip::{solve, Graph, ProblemSpec, SolveConfig, Status};

fn ask(kind: IsoKind, g: &Graph, g2: &Graph) {
    let spec = ProblemSpec::Isomorphism(Isomorphism { kind, g: g.clone(), g2: g2.clone() });
    let model = encode(&spec).unwrap();
    let sol = solve(&model, &SolveConfig::default()).unwrap();
    match sol.status {
        Status::Optimal => {
            let w = decode(&spec, &model, sol.assignment.as_ref().unwrap()).unwrap();
            println!("{:<4} yes: {w}", spec.tag());
        }
        s => println!("{:<4} {s}", spec.tag()),
    }
}

pub fn run() {
    let edges = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4), (4, 5)];
    let host = Graph::undirected(5, &edges).unwrap();
    let relabel = |u: usize| [3, 5, 1, 2, 4][u - 1];
    let moved: Vec<_> = edges.iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();
    ask(IsoKind::Gi, &host, &Graph::undirected(5, &moved).unwrap());
    ask(IsoKind::Gi, &host, &Graph::complete_bipartite(2, 3));
    ask(IsoKind::Si, &host, &Graph::cycle(4));
    ask(IsoKind::Isi, &host, &Graph::cycle(4));
}

fn main() {
    run();
}
