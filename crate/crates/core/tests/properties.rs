//! Randomized algebraic invariants.

use std::sync::OnceLock;

use engel_core::catalog::{build, format_group_file, parse_group_file, CatalogEntry, GroupFile, Recipe};
use engel_core::group::{Elt, IDENTITY};
use engel_core::rank::{min_generators, rank, RankConfig};
use engel_core::sinks::{commutator_map, minimal_sink_at};
use engel_core::subgroup::commutator_subgroup;
use engel_core::{Group, Permutation, Subgroup};
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn perms(degree: usize, n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    proptest::collection::vec(perm(degree), n)
}

/// A fixed pool of small groups of mixed structure.
fn pool() -> &'static [CatalogEntry] {
    static POOL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    POOL.get_or_init(|| {
        [
            ("S4", Recipe::Symmetric { n: 4 }),
            ("D6", Recipe::Dihedral { n: 6 }),
            ("Q16", Recipe::Quaternion { order: 16 }),
            ("A5", Recipe::Alternating { n: 5 }),
            ("C3^2:C4", Recipe::Semidirect { p: 3, k: 2, matrix: vec![0, 2, 1, 0], m: 4 }),
            ("SL2(5)", Recipe::Sl2 { p: 5 }),
        ]
        .iter()
        .map(|(l, r)| build(l, r).unwrap())
        .collect()
    })
}

fn whole_rank(which: usize) -> usize {
    static RANKS: OnceLock<Vec<usize>> = OnceLock::new();
    RANKS.get_or_init(|| {
        pool()
            .iter()
            .map(|e| rank(&Subgroup::whole(&e.group).unwrap(), RankConfig::default()).unwrap().rank)
            .collect()
    })[which]
}

proptest! {
    #[test]
    fn composition_is_associative(v in (1usize..10).prop_flat_map(|d| perms(d, 3))) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.then(b).then(c), a.then(&b.then(c)));
    }

    #[test]
    fn identity_and_inverse(p in (1usize..10).prop_flat_map(perm)) {
        let e = Permutation::identity(p.degree());
        prop_assert_eq!(p.then(&e), p.clone());
        prop_assert_eq!(e.then(&p), p.clone());
        prop_assert!(p.inverse().then(&p).is_identity());
        prop_assert!(p.pow(p.order()).is_identity());
    }

    #[test]
    fn cycle_notation_round_trip(p in (1usize..12).prop_flat_map(perm)) {
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse_cycles(&text, p.degree()).unwrap(), p);
    }

    #[test]
    fn left_normed_recursion(v in (1usize..8).prop_flat_map(|d| perms(d, 2)), n in 1usize..6) {
        let (x, g) = (&v[0], &v[1]);
        let step = Permutation::left_normed_commutator(x, g, n).unwrap();
        let next = Permutation::left_normed_commutator(x, g, n + 1).unwrap();
        prop_assert_eq!(Permutation::commutator(&step, g).unwrap(), next);
    }

    #[test]
    fn commutator_trivial_iff_commuting(v in (1usize..8).prop_flat_map(|d| perms(d, 2))) {
        let (x, g) = (&v[0], &v[1]);
        prop_assert_eq!(Permutation::commutator(x, g).unwrap().is_identity(), x.then(g) == g.then(x));
    }

    #[test]
    fn group_file_round_trip(v in (1usize..9).prop_flat_map(|d| (0usize..4).prop_flat_map(move |n| perms(d, n)))) {
        let degree = v.first().map_or(3, |p| p.degree());
        let file = GroupFile { degree, label: Some("G".into()), generators: v };
        let text = format_group_file(&file);
        let parsed = parse_group_file(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(format_group_file(&parsed), text);
    }

    #[test]
    fn closure_is_idempotent(v in perms(6, 2)) {
        let g = Group::new("S6", 6, vec![
            Permutation::parse_cycles("(1 2)", 6).unwrap(),
            Permutation::parse_cycles("(1 2 3 4 5 6)", 6).unwrap(),
        ]).unwrap();
        let h = g.closure(&v).unwrap();
        let again = Subgroup::generated_by(&g, h.elements()).unwrap();
        prop_assert_eq!(again.elements(), h.elements());
        let order = engel_core::bsgs::StabChain::new(6, &v).order().unwrap();
        prop_assert_eq!(h.order() as u64, order);
    }

    #[test]
    fn commutator_subgroup_symmetric(which in 0usize..6, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = &pool()[which].group;
        let n = g.order() as usize;
        let x = Subgroup::generated_by(g, &[a.index(n) as Elt]).unwrap();
        let y = Subgroup::generated_by(g, &[b.index(n) as Elt, a.index(n).saturating_sub(1) as Elt]).unwrap();
        prop_assert_eq!(commutator_subgroup(&x, &y).unwrap(), commutator_subgroup(&y, &x).unwrap());
    }

    #[test]
    fn sink_invariants(which in 0usize..6, x in any::<prop::sample::Index>(), h in any::<prop::sample::Index>()) {
        let g = &pool()[which].group;
        let t = g.table().unwrap();
        let n = t.len();
        let x = x.index(n) as Elt;
        let report = minimal_sink_at(g, x).unwrap();
        prop_assert!(report.sink.binary_search(&IDENTITY).is_ok());
        prop_assert!(report.max_tail <= n);

        // φ_x permutes its sink
        let map = commutator_map(t, x);
        let mut image: Vec<Elt> = report.sink.iter().map(|&y| map[y as usize]).collect();
        image.sort_unstable();
        prop_assert_eq!(&image, &report.sink);

        // sinks of conjugates are conjugate
        let h = h.index(n) as Elt;
        let conj = minimal_sink_at(g, t.conj(x, h)).unwrap();
        let mut moved: Vec<Elt> = report.sink.iter().map(|&y| t.conj(y, h)).collect();
        moved.sort_unstable();
        prop_assert_eq!(moved, conj.sink);
    }

    #[test]
    fn generator_bounds(which in 0usize..6, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = &pool()[which].group;
        let n = g.order() as usize;
        let h = Subgroup::generated_by(g, &[a.index(n) as Elt, b.index(n) as Elt]).unwrap();
        let (d, gens) = min_generators(&h).unwrap();
        prop_assert_eq!(d == 1, h.is_cyclic() && !h.is_trivial());
        prop_assert!(d as f64 <= (h.order() as f64).log2() + 1e-9);
        prop_assert_eq!(Subgroup::generated_by(g, &gens).unwrap(), h.clone());

        // rank is monotone along H ≤ G
        let r = rank(&h, RankConfig::default()).unwrap().rank;
        prop_assert!(d <= r);
        prop_assert!(r <= whole_rank(which));
    }
}
