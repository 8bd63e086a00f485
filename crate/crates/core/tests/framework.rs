//! Builders of the matching framework against hand-worked instances and
//! exhaustive enumeration.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{random_instance, rng};
use gmip::framework::{
    build, build_output1, build_output2, build_output3, decode_matching, p2_ordered_half_form, MatchingInstance,
    ObjectiveForm, Output, Regime,
};
use gmip::ip::{evaluate, Assignment, IpModel, VarKind, VarTag};
use gmip::oracle::{check_framework, oracle_framework};
use gmip::rational::{int, Rational};
use gmip::solver::{solve, SolveConfig, Status};
use gmip::{Graph, NodeId};

fn optimum(m: &IpModel) -> Option<Rational> {
    let s = solve(m, &SolveConfig::default()).unwrap();
    assert_ne!(s.status, Status::LimitReached);
    s.objective
}

fn looped(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
    Graph::builder(n, false).allow_self_loops().edges(edges.iter().copied()).build().unwrap()
}

/// One pattern edge; target path 1-2-3 with d = 3 on {1,2} and 5 on {2,3}.
fn two_costs() -> MatchingInstance {
    let mut inst = MatchingInstance::new(Graph::path(2), Graph::path(3)).with_regime(Regime::OneToOne);
    inst.set_edge_cost((1, 2), (1, 2), int(3));
    inst.set_edge_cost((1, 2), (2, 3), int(5));
    inst
}

#[test]
fn bottleneck_and_total_agree_on_one_edge() {
    let inst = two_costs();
    for form in [ObjectiveForm::P1, ObjectiveForm::P2] {
        assert_eq!(optimum(&build_output2(&inst, form).unwrap()), Some(int(3)), "{form}");
        assert_eq!(oracle_framework(&inst, Output::Optimize(form)).unwrap().value, Some(int(3)));
    }
}

#[test]
fn max_load_on_a_single_target() {
    let mut inst = MatchingInstance::new(Graph::path(4), looped(1, &[(1, 1)]));
    for u in 1..=4 {
        inst.set_node_cost(u, 1, int(1));
    }
    assert_eq!(optimum(&build_output2(&inst, ObjectiveForm::P4).unwrap()), Some(int(4)));
}

#[test]
fn positional_cut_on_a_path() {
    // Only 1-2-3 and 3-2-1 keep both edges; node 1 costs its position.
    let mut inst = MatchingInstance::new(Graph::path(3), Graph::path(3)).with_regime(Regime::OneToOne);
    for a in 1..=3 {
        inst.set_node_cost(1, a, int(a as i64));
    }
    for e in [(1, 2), (2, 3)] {
        inst.set_edge_cost(e, (1, 2), int(2));
        inst.set_edge_cost(e, (2, 3), int(5));
    }
    let out = Output::Optimize(ObjectiveForm::P7);
    assert_eq!(oracle_framework(&inst, out).unwrap().value, Some(int(5)));
    assert_eq!(optimum(&build(&inst, out).unwrap()), Some(int(5)));
}

#[test]
fn penalty_is_zero_without_forbidden_values() {
    let inst = MatchingInstance::new(Graph::cycle(3), looped(2, &[(1, 1), (1, 2)]));
    assert_eq!(optimum(&build_output3(&inst).unwrap()), Some(int(0)));
}

#[test]
fn any_constant_map_into_a_looped_complete_target() {
    let inst = MatchingInstance::new(Graph::complete(3), looped(2, &[(1, 1), (1, 2), (2, 2)]));
    assert!(oracle_framework(&inst, Output::Feasibility).unwrap().value.is_some());
    assert!(optimum(&build_output1(&inst).unwrap()).is_some());
}

/// Every 0/1 point of a model with only binaries.
fn points(m: &IpModel) -> impl Iterator<Item = Assignment> + '_ {
    assert!(m.vars().iter().all(|v| v.kind == VarKind::Binary));
    let n = m.vars().len();
    (0..1u32 << n).map(move |mask| Assignment::from_values((0..n).map(|i| int(i64::from(mask >> i & 1))).collect()))
}

fn all_maps(inst: &MatchingInstance) -> Vec<BTreeMap<NodeId, NodeId>> {
    let mut out = vec![BTreeMap::new()];
    for u in inst.g.nodes() {
        let mut next = Vec::new();
        for f in &out {
            next.push(f.clone());
            for a in inst.g2.nodes() {
                let mut g = f.clone();
                g.insert(u, a);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

#[test]
fn separation_zero_forces_distinct_targets() {
    let mut inst = MatchingInstance::new(Graph::path(2), looped(2, &[(1, 1), (1, 2), (2, 2)]));
    for (a, b) in [(1, 1), (1, 2), (2, 2)] {
        inst.set_edge_cost((1, 2), (a, b), int(b as i64 - a as i64));
    }
    inst.set_forbidden((1, 2), [0]);
    let m = build_output1(&inst).unwrap();
    let maps: BTreeSet<_> =
        points(&m).filter(|a| evaluate(&m, a).feasible()).map(|a| decode_matching(&m, &a).unwrap()).collect();
    let want = BTreeSet::from([BTreeMap::from([(1, 1), (2, 2)]), BTreeMap::from([(1, 2), (2, 1)])]);
    assert_eq!(maps, want);
}

#[test]
fn feasible_points_decode_to_exactly_the_admissible_maps() {
    let mut rng = rng(0x5eed_0101);
    let mut checked = 0;
    while checked < 60 {
        let inst = random_instance(&mut rng, checked % 3 == 2);
        let Ok(m) = build_output1(&inst) else { continue };
        if m.vars().len() > 14 || m.vars().iter().any(|v| v.kind != VarKind::Binary) {
            continue;
        }
        let decoded: BTreeSet<_> = points(&m)
            .filter(|a| evaluate(&m, a).feasible())
            .map(|a| decode_matching(&m, &a).expect("one target per node"))
            .collect();
        let admissible: BTreeSet<_> =
            all_maps(&inst).into_iter().filter(|f| check_framework(&inst, Output::Feasibility, f).is_ok()).collect();
        assert_eq!(decoded, admissible, "{inst:?}");
        checked += 1;
    }
}

#[test]
fn reverse_placements_excluded_on_one_way_arcs() {
    let g = Graph::directed(3, &[(1, 2), (2, 3)]).unwrap();
    let gp = Graph::directed(3, &[(1, 2), (2, 3), (3, 2)]).unwrap();
    let m = build_output1(&MatchingInstance::new(g, gp)).unwrap();
    for a in points(&m).filter(|a| evaluate(&m, a).feasible()) {
        let f = decode_matching(&m, &a).unwrap();
        for (u, v) in [(1, 2), (2, 3)] {
            assert_ne!((f[&u], f[&v]), (2, 1), "arc ({u},{v}) laid backwards on 1->2");
        }
    }
}

#[test]
fn total_cost_halved_ordered_form_equals_the_built_objective() {
    let mut rng = rng(0x5eed_0102);
    let mut compared = 0;
    for _ in 0..80 {
        let mut inst = random_instance(&mut rng, false);
        // Symmetric allowable sets, so the halved form is the one that applies.
        inst.allow.clear();
        let Ok(m) = build_output2(&inst, ObjectiveForm::P2) else { continue };
        let built: BTreeMap<VarTag, Rational> =
            m.objective().expr.terms().map(|(v, c)| (m.variable(v).tag.clone(), c)).collect();
        // Each orientation of a placement carries the full edge cost, which
        // is what the unordered variable carries.
        let mut halved: BTreeMap<VarTag, Rational> = BTreeMap::new();
        for (tag, c) in p2_ordered_half_form(&inst) {
            let tag = match tag {
                VarTag::Z { e, t } => VarTag::Y { e, t },
                t => t,
            };
            if let Some(prev) = halved.insert(tag.clone(), c) {
                assert_eq!(prev, c, "{tag:?} differs between orientations");
            }
        }
        assert_eq!(built, halved, "{inst:?}");
        compared += 1;
    }
    assert!(compared >= 60);
}
