//! Property tests over random graphs and models.

use gmip::graph::{parse_graph, write_graph};
use gmip::ip::{
    add_table2_constraints, declare_x_grid, emit_lp, parse_lp, IpModel, LinExpr, Relation, Sense, Table2Kind, VarKind,
    VarTag,
};
use gmip::rational::{format_decimal, is_terminating, parse_rational, Rational};
use gmip::{Graph, NodeId};
use proptest::prelude::*;

fn pairs(n: usize, directed: bool) -> Vec<(NodeId, NodeId)> {
    (1..=n)
        .flat_map(|u| (1..=n).map(move |v| (u, v)))
        .filter(|&(u, v)| if directed { u != v } else { u < v })
        .collect()
}

/// Simple graph on up to `max` nodes.
fn graph(max: usize, directed: bool) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(move |n| {
        let all = pairs(n, directed);
        prop::collection::vec(any::<bool>(), all.len()).prop_map(move |keep| {
            let chosen: Vec<_> = all.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p).collect();
            if directed {
                Graph::directed(n, &chosen).unwrap()
            } else {
                Graph::undirected(n, &chosen).unwrap()
            }
        })
    })
}

fn rows(g: &Graph, gp: &Graph, kind: Table2Kind) -> usize {
    let mut m = IpModel::new();
    declare_x_grid(&mut m, g, gp);
    add_table2_constraints(&mut m, kind, g, gp).unwrap()
}

fn one_way_arcs(g: &Graph) -> usize {
    g.proper_edges().filter(|e| !g.has_edge(e.v, e.u)).count()
}

proptest! {
    #[test]
    fn complement_is_an_involution(g in graph(7, false)) {
        prop_assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn edges_and_non_edges_partition_the_pairs(g in graph(7, false)) {
        let n = g.n();
        prop_assert_eq!(g.m() + g.non_edges().len(), n * (n - 1) / 2);
    }

    #[test]
    fn distance_two_pairs_are_not_edges(g in graph(7, false)) {
        for (u, v) in g.distance_two_pairs().unwrap() {
            prop_assert!(!g.adjacent(u, v));
            let common = g.neighbors(u).unwrap().intersection(g.neighbors(v).unwrap()).count();
            prop_assert!(common > 0);
        }
    }

    #[test]
    fn undirected_family_counts(g in graph(4, false), gp in graph(4, false)) {
        let (n, n2) = (g.n(), gp.n());
        let (e, e2) = (g.m(), gp.m());
        let (ne, ne2) = (g.non_edges().len(), gp.non_edges().len());
        prop_assert_eq!(rows(&g, &gp, Table2Kind::A1), n);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::A2), n2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::B1), n);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::B2), n2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::C1), 2 * e * ne2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::C2), 2 * e2 * ne);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::F), 2 * e * e2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::H1), n * e2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::I1), e * n2);
    }

    #[test]
    fn directed_family_counts(g in graph(3, true), gp in graph(3, true)) {
        let (a, a2) = (g.m(), gp.m());
        let (na, na2) = (g.non_edges().len(), gp.non_edges().len());
        prop_assert_eq!(rows(&g, &gp, Table2Kind::D1), 2 * a * na2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::D2), 2 * a2 * na);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::E), a * one_way_arcs(&gp));
        prop_assert_eq!(rows(&g, &gp, Table2Kind::G), a * a2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::H2), g.n() * a2);
        prop_assert_eq!(rows(&g, &gp, Table2Kind::I2), a * gp.n());
    }

    #[test]
    fn graph_files_round_trip(g in graph(6, false), d in graph(5, true)) {
        for g in [g, d] {
            let text = write_graph(&g, None);
            prop_assert_eq!(parse_graph(&text).unwrap().graph, g);
        }
    }

    #[test]
    fn terminating_decimals_round_trip(num in -10_000i64..10_000, exp2 in 0u32..6, exp5 in 0u32..6) {
        let r = Rational::new(num, 2i64.pow(exp2) * 5i64.pow(exp5));
        prop_assert!(is_terminating(&r));
        prop_assert_eq!(parse_rational(&format_decimal(&r)), Some(r));
    }

    #[test]
    fn lp_text_round_trips(
        vars in prop::collection::vec((0u8..3, -3i64..=0, prop::option::of(1i64..9)), 1..8),
        objective in prop::collection::vec((-40i64..40, 0usize..4), 0..8),
        maximize in any::<bool>(),
        constraints in prop::collection::vec(
            (prop::collection::vec((-40i64..40, 0usize..4), 1..6), 0u8..3, -9i64..9),
            0..6,
        ),
    ) {
        const DENS: [i64; 4] = [1, 2, 4, 5];
        let mut m = IpModel::new();
        let mut ids = Vec::new();
        for (i, &(kind, lo, hi)) in vars.iter().enumerate() {
            let tag = if i % 2 == 0 { VarTag::x(i + 1, i + 2) } else { VarTag::named(&format!("aux{i}")) };
            let id = match kind {
                0 | 1 => m.add_var(tag, VarKind::Binary, Rational::from(0), Some(Rational::from(1))).unwrap(),
                _ => m.continuous(tag, Rational::from(lo), hi.map(Rational::from)).unwrap(),
            };
            ids.push(id);
        }
        let expr = |terms: &[(i64, usize)]| {
            let mut e = LinExpr::new();
            for (i, &(num, den)) in terms.iter().enumerate() {
                e.add(ids[i % ids.len()], Rational::new(num, DENS[den]));
            }
            e
        };
        let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
        m.set_objective(sense, expr(&objective)).unwrap();
        for (terms, rel, rhs) in &constraints {
            let rel = [Relation::Le, Relation::Ge, Relation::Eq][*rel as usize];
            m.add_constraint("row", expr(terms), rel, Rational::new(*rhs, 4)).unwrap();
        }
        let text = emit_lp(&m);
        let back = parse_lp(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(emit_lp(&back), text);
    }
}
