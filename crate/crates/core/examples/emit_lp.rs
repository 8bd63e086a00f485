//! Writes the LP text of a bandwidth model and reads it back.

use gmip::ip::{emit_lp, parse_lp};
use gmip::problems::{encode, Bandwidth, Goal};
use gmip::{Graph, ProblemSpec};

pub fn run() {
    let spec = ProblemSpec::Bandwidth(Bandwidth { g: Graph::path(3), goal: Goal::Minimize });
    let model = encode(&spec).unwrap();
    let text = emit_lp(&model);
    print!("{text}");
    let back = parse_lp(&text).unwrap();
    assert_eq!(back, model);
    eprintln!("round trip ok: {}", back.stats());
}

fn main() {
    run();
}
