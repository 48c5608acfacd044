use std::collections::HashSet;

use proptest::prelude::*;

use supermagic::construct::{construct, expected_corner_table, ConstructionPlan};
use supermagic::search::{feasible_completion, forced_label, PartialLabeling};
use supermagic::torus::{corner_vertex, decompose, incident_edges, CornerKind, CornerPos};
use supermagic::verify::{audit_corners, verify};
use supermagic::{dims, Labeling};

fn supported() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![
        (1usize..=12, 1usize..=12, 1usize..=4)
            .prop_map(|(a, b, f)| ((2 * a + 1) * f, (2 * b + 1) * f))
            .prop_filter("odd with common factor", |&(n, m)| {
                n % 2 == 1 && m % 2 == 1 && supermagic::torus::gcd(n, m) > 1 && n <= 45 && m <= 45
            }),
        (2usize..=14, 2usize..=14).prop_map(|(a, b)| (2 * a, 2 * b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructions_verify((n, m) in supported()) {
        let c = construct(n, m).unwrap();
        let report = verify(&c.labeling);
        prop_assert!(report.is_supermagic);
        prop_assert_eq!(report.constant, Some(4 * (n * m) as u64 + 2));
        prop_assert!(audit_corners(&c.labeling, &c.plan).unwrap().clean);
    }

    #[test]
    fn corners_cover_every_vertex_twice((n, m) in supported()) {
        let g = dims(n, m).unwrap();
        let plan = ConstructionPlan::auto(&g).unwrap();
        let table = expected_corner_table(&plan, &g).unwrap();
        let base = table.dims;
        let mut hv = HashSet::new();
        let mut vh = HashSet::new();
        for (c, _) in table.iter() {
            let v = corner_vertex(c, plan.start_cols[c.diag - 1], &base);
            let fresh = match c.kind {
                CornerKind::HV => hv.insert(v),
                CornerKind::VH => vh.insert(v),
            };
            prop_assert!(fresh, "{} repeats vertex {}", c, v);
        }
        prop_assert_eq!(hv.len(), n * m);
        prop_assert_eq!(vh.len(), n * m);
        prop_assert_eq!(table.len(), 2 * base.d * base.l);
    }

    #[test]
    fn diagonals_are_closed_alternating_walks(n in 3usize..40, m in 3usize..40) {
        let g = dims(n, m).unwrap();
        for diag in decompose(&g, None).unwrap() {
            for (k, pair) in diag.edges.chunks(2).enumerate() {
                prop_assert_eq!(pair[0].orient, supermagic::Orientation::H);
                prop_assert_eq!(pair[1].orient, supermagic::Orientation::V);
                let c = CornerPos { diag: diag.index, k: k + 1, kind: CornerKind::HV };
                let v = corner_vertex(c, diag.start_col, &g);
                prop_assert!(incident_edges(v, &g).contains(&pair[0]));
                prop_assert!(incident_edges(v, &g).contains(&pair[1]));
            }
        }
    }

    #[test]
    fn verify_notices_any_swap((n, m) in supported(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let c = construct(n, m).unwrap();
        let g = *c.labeling.dims();
        let (ea, eb) = (g.edge_at(a.index(g.q)), g.edge_at(b.index(g.q)));
        prop_assume!(ea != eb);
        let mut lab = c.labeling.clone();
        lab.swap(ea, eb);
        // two distinct labels moved, so some endpoint not shared by both edges changes weight
        prop_assert!(!verify(&lab).is_supermagic);
    }

    #[test]
    fn propagation_never_prunes_a_real_solution(
        (n, m) in supported(),
        holes in prop::collection::vec(any::<prop::sample::Index>(), 1..12),
    ) {
        let c = construct(n, m).unwrap();
        let g = *c.labeling.dims();
        let mut partial = PartialLabeling::from_labeling(&c.labeling);
        for h in &holes {
            partial.clear(g.edge_at(h.index(g.q)));
        }
        for v in g.vertices() {
            prop_assert!(feasible_completion(&partial, v), "{} judged infeasible", v);
            let open: Vec<_> = incident_edges(v, &g).into_iter().filter(|&e| partial.get(e).is_none()).collect();
            if open.len() == 1 {
                prop_assert_eq!(forced_label(&partial, v), Some(c.labeling.get(open[0])));
            }
        }
    }

    #[test]
    fn transpose_preserves_supermagic((n, m) in supported()) {
        let lab: Labeling = construct(n, m).unwrap().labeling;
        let t = lab.transpose();
        prop_assert_eq!(t.dims().n, m);
        prop_assert!(verify(&t).is_supermagic);
        prop_assert_eq!(t.transpose(), lab);
    }
}
