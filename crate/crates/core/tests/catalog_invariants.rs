//! Structural invariants and brute-force oracles over the default catalog.

use std::sync::OnceLock;

use engel_core::arith::prime_divisors;
use engel_core::catalog::{default_catalog, default_recipes, build, load_group, save_group, CatalogEntry};
use engel_core::group::{Elt, DEFAULT_ENUMERATION_THRESHOLD};
use engel_core::sinks::{minimal_sink_at, naive_sink_oracle, ProfileConfig, SinkProfile};
use engel_core::structure::{
    derived_series, fitting_height, fitting_subgroup, is_nilpotent, is_soluble, lower_central_series, nilpotent_residual,
    p_core, quotient_action, sylow_subgroup,
};
use engel_core::subgroup::commutator_subgroup;
use engel_core::{Error, GroupHandle, Subgroup};

fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| default_catalog(2000, DEFAULT_ENUMERATION_THRESHOLD).unwrap())
}

fn up_to(order: u64) -> impl Iterator<Item = &'static CatalogEntry> {
    catalog().iter().filter(move |e| e.group.order() <= order)
}

/// `⟨[a, b] : a ∈ A, b ∈ B⟩` from every pair of elements.
fn brute_commutator(g: &GroupHandle, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let t = g.table().unwrap();
    let mut gens: Vec<Elt> = a
        .elements()
        .iter()
        .flat_map(|&x| b.elements().iter().map(move |&y| t.comm(x, y)))
        .collect();
    gens.sort_unstable();
    gens.dedup();
    Subgroup::generated_by(g, &gens).unwrap()
}

#[test]
fn recipes_are_deterministic() {
    for (label, recipe) in default_recipes() {
        let a = build(&label, &recipe).unwrap();
        let b = build(&label, &recipe).unwrap();
        assert_eq!(a.group.generators(), b.group.generators(), "{label}");
    }
}

#[test]
fn catalog_shape() {
    let c = catalog();
    assert!(c.len() >= 100);
    let mut labels: Vec<&str> = c.iter().map(|e| e.label.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();
    assert_eq!(labels.len(), c.len(), "labels are unique");
    assert!(c.iter().all(|e| e.group.order() <= 2000 && e.group.is_enumerable()));
}

#[test]
fn derived_subgroup_matches_brute_force() {
    for e in up_to(400) {
        let whole = Subgroup::whole(&e.group).unwrap();
        let fast = commutator_subgroup(&whole, &whole).unwrap();
        assert_eq!(fast, brute_commutator(&e.group, &whole, &whole), "{}", e.label);
    }
}

#[test]
fn second_lower_central_term_is_derived_subgroup() {
    for e in catalog() {
        let whole = Subgroup::whole(&e.group).unwrap();
        let lcs = lower_central_series(&whole).unwrap();
        let ds = derived_series(&whole).unwrap();
        let second = |terms: &[Subgroup]| terms.get(1).cloned().unwrap_or_else(|| terms[0].clone());
        assert_eq!(second(&lcs.terms), second(&ds.terms), "{}", e.label);
    }
}

#[test]
fn commutator_subgroups_are_symmetric() {
    for e in up_to(200) {
        let whole = Subgroup::whole(&e.group).unwrap();
        let mut subs = vec![whole.clone(), commutator_subgroup(&whole, &whole).unwrap()];
        for p in prime_divisors(whole.order() as u64) {
            subs.push(sylow_subgroup(&whole, p).unwrap());
        }
        for a in &subs {
            for b in &subs {
                let ab = commutator_subgroup(a, b).unwrap();
                assert_eq!(ab, commutator_subgroup(b, a).unwrap(), "{}", e.label);
                assert_eq!(ab, brute_commutator(&e.group, a, b), "{}", e.label);
            }
        }
    }
}

#[test]
fn fitting_subgroup_properties() {
    for e in catalog() {
        let whole = Subgroup::whole(&e.group).unwrap();
        let f = fitting_subgroup(&whole).unwrap();
        assert!(f.is_normal_in(&whole), "{}", e.label);
        assert!(is_nilpotent(&f).unwrap(), "{}", e.label);
        for p in prime_divisors(whole.order() as u64) {
            assert!(p_core(&whole, p).unwrap().is_subgroup_of(&f), "{}", e.label);
        }
        let nilpotent = is_nilpotent(&whole).unwrap();
        if is_soluble(&whole).unwrap() {
            assert_eq!(fitting_height(&whole).unwrap() == Some(1), nilpotent, "{}", e.label);
        } else {
            assert_eq!(fitting_height(&whole).unwrap(), None, "{}", e.label);
        }
    }
}

#[test]
fn quotient_orders() {
    for e in up_to(1000) {
        let whole = Subgroup::whole(&e.group).unwrap();
        for n in [
            commutator_subgroup(&whole, &whole).unwrap(),
            nilpotent_residual(&whole).unwrap(),
            fitting_subgroup(&whole).unwrap(),
        ] {
            let q = quotient_action(&whole, &n).unwrap();
            assert_eq!(q.group().order() as usize, whole.order() / n.order(), "{}", e.label);
        }
    }
}

#[test]
fn sinks_are_conjugation_equivariant() {
    for e in up_to(120) {
        let g = &e.group;
        let t = g.table().unwrap();
        let sinks: Vec<Vec<Elt>> = (0..t.len() as Elt).map(|x| minimal_sink_at(g, x).unwrap().sink).collect();
        for x in 0..t.len() as Elt {
            for h in 0..t.len() as Elt {
                let mut moved: Vec<Elt> = sinks[x as usize].iter().map(|&y| t.conj(y, h)).collect();
                moved.sort_unstable();
                assert_eq!(moved, sinks[t.conj(x, h) as usize], "{}", e.label);
            }
        }
    }
}

#[test]
fn profile_matches_direct_sinks() {
    for e in up_to(400) {
        let g = &e.group;
        let profile = SinkProfile::compute(g, ProfileConfig::default()).unwrap();
        let t = g.table().unwrap();
        let mut all_trivial = true;
        for x in 0..t.len() as Elt {
            let direct = minimal_sink_at(g, x).unwrap();
            assert_eq!(profile.sink_of(x), direct.sink, "{}", e.label);
            let report = profile.report_for(x);
            assert_eq!(report.sink_subgroup, direct.sink_subgroup, "{}", e.label);
            assert_eq!(report.max_tail, direct.max_tail, "{}", e.label);
            all_trivial &= direct.sink.len() == 1;
        }
        assert_eq!(profile.is_all_trivial(), all_trivial);
        let whole = Subgroup::whole(g).unwrap();
        assert_eq!(all_trivial, is_nilpotent(&whole).unwrap(), "{}", e.label);
    }
}

#[test]
fn naive_oracle_rejects_short_horizon() {
    let e = catalog().iter().find(|e| e.label == "S3").unwrap();
    let g = &e.group;
    let x = g.table().unwrap().element(1).clone();
    assert!(matches!(naive_sink_oracle(g, &x, 5), Err(Error::HorizonTooSmall { .. })));
    let outsider = engel_core::Permutation::parse_cycles("(1 2)", 4).unwrap();
    assert!(naive_sink_oracle(g, &outsider, 6).is_err());
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for e in up_to(200).step_by(7) {
        let path = dir.path().join("g.group");
        save_group(&e.group, &path).unwrap();
        let loaded = load_group(&path).unwrap();
        assert_eq!(loaded.group.generators(), e.group.generators());
        assert_eq!(loaded.group.order(), e.group.order());
        assert_eq!(loaded.group.label(), e.label);
        let text = std::fs::read_to_string(&path).unwrap();
        save_group(&loaded.group, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text, "bit-exact round trip");
    }
}

#[test]
fn large_group_loads_without_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s8.group");
    std::fs::write(&path, "degree: 8\n# symmetric group of degree 8\ngen: (1 2)\ngen: (1 2 3 4 5 6 7 8)\n").unwrap();
    let loaded = load_group(&path).unwrap();
    assert_eq!(loaded.group.order(), 40320);
    assert!(!loaded.group.is_enumerable());
    assert_eq!(loaded.warnings.len(), 1);
    assert!(matches!(loaded.group.table(), Err(Error::NotEnumerable { .. })));
}
