use hexmono::analysis::{analyze, classify, period_check, r2_graph, trace_r1, ClassVerdict, FeatureKind};
use hexmono::constructions::*;
use hexmono::engine::{is_directly_constructible, replay};
use hexmono::hexlattice::{spiral_anchor, Hex};
use hexmono::PrototileTemplate;
use std::collections::BTreeMap;

fn ruler_length(x: i64) -> usize {
    (1usize << x.trailing_zeros()) - 1
}

#[test]
fn spiral_patches_have_four_to_the_n_growth() {
    let mut prev = None;
    for n in 0..=6 {
        let p = build_pn(n).unwrap();
        assert_eq!(p.len(), (4usize.pow(n + 1) - 1) / 3, "P_{n}");
        assert!(p.is_r1_consistent());
        assert!(r2_graph(&p).is_tree());
        assert!(p.contains(spiral_anchor(n)));
        if let Some(prev) = prev {
            assert!(hexmono::Patch::is_subpatch_of(&prev, &p), "P_{} ⊄ P_{n}", n - 1);
        }
        prev = Some(p);
    }
}

#[test]
fn spiral_growth_order_replays() {
    let (p, order) = build_pn_with_order(4).unwrap();
    assert_eq!(replay(PrototileTemplate::shipped(), &order).unwrap(), p);
    assert!(is_directly_constructible(&p).constructible);
}

#[test]
fn spiral_sub_copies_are_images_of_the_previous_level() {
    for m in 1..=4 {
        let prev = spiral_tiles(m - 1);
        let cur: BTreeMap<Hex, u8> = spiral_tiles(m).into_iter().collect();
        for i in 0..3 {
            let g = sub_copy(m, i);
            for &(c, o) in &prev {
                assert_eq!(cur.get(&g.apply(c)), Some(&g.apply_orientation(o)), "m={m} copy {i}");
            }
        }
    }
}

#[test]
fn spiral_range_is_enforced() {
    assert!(matches!(build_pn(SPIRAL_MAX_N + 1), Err(ConstructionError::Range(_))));
    assert!(build_t0(T0_MAX_RADIUS + 1).is_err());
}

#[test]
fn t0_window_is_a_legal_disk() {
    let w = build_t0(20).unwrap();
    assert!(w.patch.is_r1_consistent());
    // Cropping to a disk cuts trees apart but never closes a cycle.
    assert!(r2_graph(&w.patch).is_forest);
    for (c, _) in w.patch.iter() {
        assert!(c.cartesian_norm2_x4() <= 4 * 20 * 20);
    }
    // Every cell of the disk is covered.
    let count = (-25..=25)
        .flat_map(|q| (-25..=25).map(move |r| Hex::new(q, r)))
        .filter(|c| c.cartesian_norm2_x4() <= 4 * 20 * 20)
        .count();
    assert_eq!(w.patch.len(), count);
}

/// Lengths of the fault-line triangles cornered on the line, keyed by
/// (position, above the line).
fn line_triangles(fl: &FaultLine) -> BTreeMap<(i64, bool), usize> {
    let mut out = BTreeMap::new();
    for f in trace_r1(&fl.fill).unwrap() {
        if f.kind != FeatureKind::Triangle {
            continue;
        }
        let up = f.cells.iter().any(|c| c.r > 0);
        for c in f.corner_cells.iter().filter(|c| c.r == 0) {
            assert!(out.insert((FaultLine::position(*c), up), f.length.unwrap()).is_none());
        }
    }
    out
}

#[test]
fn fault_line_triangles_follow_the_ruler_sequence() {
    for m_max in 1..=3 {
        let choices = ChoiceSequence::alternating(m_max as usize + 1);
        let fl = build_faultline(64, m_max, &choices, false).unwrap();
        let found = line_triangles(&fl);
        for (&(q, up), &len) in &found {
            let offset = if up { fl.upper_offset } else { fl.lower_offset };
            assert_eq!(len, ruler_length(q - offset), "m_max={m_max} q={q} up={up}");
        }
        // Every position well inside the strip carries a corner on each side.
        for q in -32..32 {
            assert!(found.contains_key(&(q, true)) && found.contains_key(&(q, false)), "q={q}");
        }
        assert!(fl.patch.is_r1_consistent());
        assert!(r2_graph(&fl.patch).is_tree());
        assert!(fl.line.iter().all(|c| fl.patch.contains(*c)));
        assert!(fl.patch.is_subpatch_of(&fl.fill));
    }
}

#[test]
fn fault_line_offsets_follow_the_choices() {
    let alt = ChoiceSequence::alternating(4);
    assert_eq!(alt.complement().complement(), alt);
    assert!(!alt.is_constant());
    assert!(ChoiceSequence::constant(Choice::Left, 3).is_constant());
    assert_eq!(ChoiceSequence::parse("RLR").unwrap(), ChoiceSequence::alternating(3));
    assert!(ChoiceSequence::parse("RXL").is_none());
    // Upper and lower offsets disagree at every level, so the lengths on
    // the two sides of the line never coincide.
    let fl = build_faultline(32, 2, &alt, false).unwrap();
    let found = line_triangles(&fl);
    for q in -16..16 {
        assert_ne!(found[&(q, true)], found[&(q, false)], "q={q}");
    }
}

#[test]
fn fault_line_core_is_class_one() {
    let fl = build_faultline(64, 3, &ChoiceSequence::alternating(4), false).unwrap();
    let rep = classify(&fl.patch, &trace_r1(&fl.patch).unwrap());
    assert_eq!(rep.verdict, ClassVerdict::C1Consistent);
    assert!(!rep.c0_ok);
    let long = rep.long_line.unwrap();
    assert!(long.spans && long.length >= 128);
}

#[test]
fn fault_line_rejects_bad_widths() {
    assert!(build_faultline(4, 3, &ChoiceSequence::alternating(4), false).is_err());
    assert!(build_faultline(1024, 3, &ChoiceSequence::alternating(4), false).is_err());
}

#[test]
fn periodic_lattice_is_periodic_and_consistent() {
    for m in 1..=2 {
        let lat = periodic_lattice(m).unwrap();
        assert_eq!(lat.triangle_length(), (1 << m) - 1);
        for q in -10..10 {
            for r in -10..10 {
                let c = Hex::new(q, r);
                assert_eq!(lat.orientation(c), lat.orientation(c + Hex::new(lat.period, 0)));
                assert_eq!(lat.orientation(c), lat.orientation(c + Hex::new(0, lat.period)));
            }
        }
        let w = lat.window(Hex::ORIGIN, 12);
        assert!(w.is_r1_consistent());
        let p = build_periodic_lattice(m, 3).unwrap();
        assert!(p.is_r1_consistent() && p.is_edge_connected());
        let comps = r2_graph(&p).components.len();
        assert!(comps > 1, "the tree rule fails on the lattice");
        assert!(!is_directly_constructible(&p).constructible);
        let period = period_check(&p, 1 << (m + 1)).shortest_period().expect("a period is found");
        assert!(period.norm() as u32 <= 1 << (m + 1));
        let lens: Vec<usize> =
            trace_r1(&p).unwrap().iter().filter(|f| f.is_closed()).filter_map(|f| f.length).collect();
        assert!(lens.iter().all(|&l| (l + 1).is_power_of_two() && l < 1 << m));
        assert_eq!(lens.iter().max(), Some(&((1 << m) - 1)));
    }
}

#[test]
fn seeds_are_pinwheels_of_the_right_kind() {
    use hexmono::analysis::PinwheelKind;
    for n in 0..=1 {
        for (p, kind) in [
            (build_cycle_seed(n).unwrap(), PinwheelKind::Cycle),
            (build_anticycle_seed(n).unwrap(), PinwheelKind::Anticycle),
        ] {
            assert!(p.is_r1_consistent());
            let rep = analyze(&p, None);
            assert!(rep.pinwheels.iter().any(|f| f.kind == kind && f.length == (1 << (n + 1)) - 1), "{kind:?} n={n}");
        }
    }
    assert_eq!(build_cycle_seed(0).unwrap().len(), 15);
    assert_eq!(build_anticycle_seed(0).unwrap().len(), 15);
    assert!(build_cycle_seed(SEED_MAX_N + 1).is_err());
}

#[test]
fn cycle_seed_fixture() {
    let expected: BTreeMap<Hex, u8> = [
        ((-1, 0), 4),
        ((-1, 1), 0),
        ((-1, 2), 2),
        ((0, -2), 4),
        ((0, -1), 0),
        ((0, 0), 2),
        ((0, 1), 4),
        ((1, -2), 2),
        ((1, -1), 4),
        ((1, 0), 0),
        ((1, 1), 2),
        ((2, -2), 0),
        ((2, -1), 2),
        ((2, 0), 4),
        ((3, -1), 0),
    ]
    .into_iter()
    .map(|((q, r), o)| (Hex::new(q, r), o))
    .collect();
    let got: BTreeMap<Hex, u8> = build_cycle_seed(0).unwrap().iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn infinite_triangle_rays_lie_in_different_trees() {
    for (radius, size) in [(1, 3), (8, 45), (16, 153)] {
        let it = build_infinite_triangle_trunc(radius).unwrap();
        assert_eq!(it.patch.len(), size);
        assert!(it.patch.is_r1_consistent());
        let g = r2_graph(&it.patch);
        assert_eq!(g.components.len(), 2);
        assert_ne!(g.component_of(it.ray_a[0]), g.component_of(it.ray_b[0]));
        assert!(it.ray_a.iter().all(|c| g.component_of(*c) == g.component_of(it.ray_a[0])));
    }
    assert!(build_infinite_triangle_trunc(0).is_err());
}

#[test]
fn hull_patches_have_three_trees() {
    for n in 0..=4u32 {
        let r = build_hull(n, HullKind::R).unwrap();
        let s = build_hull(n, HullKind::S).unwrap();
        assert_eq!(r.len(), 2 * (4usize.pow(n + 1) - 1) / 3 + 1);
        assert_eq!(s.len(), 3 * (4usize.pow(n + 1) - 1) / 3);
        for p in [r, s] {
            assert!(p.is_r1_consistent() && p.is_edge_connected());
            assert_eq!(r2_graph(&p).components.len(), 3);
        }
    }
}

#[test]
fn catalogue_labels_build_and_round_trip() {
    for info in catalogue() {
        let json = serde_json::to_string(&info.example).unwrap();
        let back: ConstructionLabel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, info.example);
        let p = info.example.build().unwrap();
        assert!(!p.is_empty(), "{}", info.kind);
        assert!(p.is_r1_consistent(), "{}", info.kind);
    }
}
