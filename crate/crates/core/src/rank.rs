//! Minimal generating sets `d(H)` and the rank `max { d(K) : K ≤ H }`, each
//! with a certificate naming the subgroup and generators that attain it.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::arith::{exact_log, prime_divisors, prime_of_power};
use crate::error::Result;
use crate::group::{Elt, ElementTable, IDENTITY};
use crate::lattice::{cyclic_subgroup_reps, subgroup_classes, DEFAULT_LATTICE_CAP};
use crate::structure::{is_nilpotent, sylow_subgroup};
use crate::subgroup::{commutator_subgroup, Closure, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    AbelianShortcut,
    NilpotentShortcut,
    ExhaustiveLattice,
}

impl RankMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMethod::AbelianShortcut => "abelian-shortcut",
            RankMethod::NilpotentShortcut => "nilpotent-shortcut",
            RankMethod::ExhaustiveLattice => "exhaustive-lattice",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RankConfig {
    pub lattice_cap: usize,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            lattice_cap: DEFAULT_LATTICE_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub group: Subgroup,
    pub rank: usize,
    pub witness_subgroup: Subgroup,
    pub witness_generators: Vec<Elt>,
    pub method: RankMethod,
    /// False when the lattice cap was hit; `rank` is then only a lower bound.
    pub exact: bool,
}

/// Serializable summary of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRecord {
    pub group: String,
    pub rank: usize,
    pub exact: bool,
    pub witness_order: usize,
    pub witness_generators: Vec<String>,
    pub method: RankMethod,
}

impl RankCertificate {
    pub fn record(&self) -> RankRecord {
        let t = self.group.table();
        RankRecord {
            group: self.group.parent().label().to_string(),
            rank: self.rank,
            exact: self.exact,
            witness_order: self.witness_subgroup.order(),
            witness_generators: self
                .witness_generators
                .iter()
                .map(|&g| t.element(g).to_string())
                .collect(),
            method: self.method,
        }
    }

    /// `"3"` for exact values, `">=3"` for lower bounds.
    pub fn display_value(&self) -> String {
        if self.exact {
            self.rank.to_string()
        } else {
            format!(">={}", self.rank)
        }
    }
}

/// DFS over increasing tuples of cyclic-subgroup generators, skipping any
/// candidate already inside the span of the prefix.
fn search(
    t: &ElementTable,
    target: usize,
    reps: &[Elt],
    start: usize,
    left: usize,
    span: &Closure,
    chosen: &mut Vec<Elt>,
) -> bool {
    if span.len() == target {
        return true;
    }
    if left == 0 {
        return false;
    }
    for (i, &r) in reps.iter().enumerate().skip(start) {
        if span.contains(r) {
            continue;
        }
        let mut next = span.clone();
        next.add_generator(t, r);
        if left == 1 && next.len() != target {
            continue;
        }
        chosen.push(r);
        if search(t, target, reps, i + 1, left - 1, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A generating set of `h` with at most `k` elements, if one exists.
pub fn generating_set_within(h: &Subgroup, k: usize) -> Option<Vec<Elt>> {
    let t = h.table();
    if h.is_trivial() {
        return Some(Vec::new());
    }
    let reps = cyclic_subgroup_reps(t, h);
    let mut chosen = Vec::new();
    search(t, h.order(), &reps, 0, k, &Closure::trivial(t.len()), &mut chosen).then_some(chosen)
}

fn min_generators_from(h: &Subgroup, lower: usize) -> (usize, Vec<Elt>) {
    let mut k = lower;
    loop {
        if let Some(gens) = generating_set_within(h, k) {
            return (gens.len(), gens);
        }
        k += 1;
    }
}

/// `d(H)` by plain search from `k = 1`, with no structural lower bound.
pub fn min_generators_exhaustive(h: &Subgroup) -> (usize, Vec<Elt>) {
    min_generators_from(h, 0)
}

/// `d(H)` with a witness. For `p`-groups the search starts at the
/// Frattini-quotient bound, which it then meets exactly.
pub fn min_generators(h: &Subgroup) -> Result<(usize, Vec<Elt>)> {
    if h.is_trivial() {
        return Ok((0, Vec::new()));
    }
    let lower = match prime_of_power(h.order() as u64) {
        Some(_) => frattini_rank(h)?,
        None if h.is_cyclic() => 1,
        None => 2,
    };
    Ok(min_generators_from(h, lower))
}

/// `log_p |P/Φ(P)|` with `Φ(P) = P′·Pᵖ`, for a `p`-group `P`.
pub fn frattini_rank(p_group: &Subgroup) -> Result<usize> {
    if p_group.is_trivial() {
        return Ok(0);
    }
    let n = p_group.order() as u64;
    let p = prime_of_power(n).ok_or_else(|| {
        crate::Error::InvalidParameter(format!("order {n} is not a prime power"))
    })?;
    let t = p_group.table();
    let derived = commutator_subgroup(p_group, p_group)?;
    let mut phi = derived.closure();
    for &x in p_group.elements() {
        let y = t.pow(x, p);
        if y != IDENTITY {
            phi.add_generator(t, y);
        }
    }
    Ok(exact_log(n / phi.len() as u64, p).expect("index of Frattini subgroup is a power of p") as usize)
}

fn trivial_certificate(h: &Subgroup, method: RankMethod) -> RankCertificate {
    RankCertificate {
        group: h.clone(),
        rank: 0,
        witness_subgroup: h.clone(),
        witness_generators: Vec::new(),
        method,
        exact: true,
    }
}

/// Abelian case: the largest `log_p |Ω₁(H_p)|`, with `Ω₁(H_p)` the elements
/// of order dividing `p`.
pub fn rank_abelian(h: &Subgroup) -> Result<RankCertificate> {
    debug_assert!(h.is_abelian());
    if h.is_trivial() {
        return Ok(trivial_certificate(h, RankMethod::AbelianShortcut));
    }
    let t = h.table();
    let mut best: Option<(usize, Subgroup)> = None;
    for p in prime_divisors(h.order() as u64) {
        let omega: Vec<Elt> = h
            .elements()
            .iter()
            .copied()
            .filter(|&x| t.pow(x, p) == IDENTITY)
            .collect();
        let r = exact_log(omega.len() as u64, p).expect("Ω₁ of an abelian p-group") as usize;
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, Subgroup::generated_by(h.parent(), &omega)?));
        }
    }
    let (rank, witness) = best.unwrap();
    let (d, gens) = min_generators(&witness)?;
    debug_assert_eq!(d, rank);
    Ok(RankCertificate {
        group: h.clone(),
        rank,
        witness_subgroup: witness,
        witness_generators: gens,
        method: RankMethod::AbelianShortcut,
        exact: true,
    })
}

/// Nilpotent case: the largest rank among the Sylow subgroups.
pub fn rank_nilpotent(h: &Subgroup, cfg: RankConfig) -> Result<RankCertificate> {
    if h.is_trivial() {
        return Ok(trivial_certificate(h, RankMethod::NilpotentShortcut));
    }
    let mut best: Option<RankCertificate> = None;
    let mut exact = true;
    for p in prime_divisors(h.order() as u64) {
        let sylow = sylow_subgroup(h, p)?;
        let cert = if sylow.is_abelian() {
            rank_abelian(&sylow)?
        } else {
            rank_exhaustive(&sylow, cfg)?
        };
        exact &= cert.exact;
        if best.as_ref().is_none_or(|b| cert.rank > b.rank) {
            best = Some(cert);
        }
    }
    let best = best.unwrap();
    Ok(RankCertificate {
        group: h.clone(),
        rank: best.rank,
        witness_subgroup: best.witness_subgroup,
        witness_generators: best.witness_generators,
        method: RankMethod::NilpotentShortcut,
        exact,
    })
}

/// `(|H|, μ(H, K))` for every `H ≤ K` among `subgroups` (largest first),
/// skipping zero Möbius values.
fn mobius_below(k: &FixedBitSet, subgroups: &[FixedBitSet]) -> Vec<(u64, i64)> {
    let inside: Vec<&FixedBitSet> = subgroups.iter().filter(|s| s.is_subset(k)).collect();
    let mut mu: Vec<i64> = Vec::with_capacity(inside.len());
    for (i, h) in inside.iter().enumerate() {
        let above: i64 = (0..i)
            .filter(|&j| mu[j] != 0 && h.is_subset(inside[j]))
            .map(|j| mu[j])
            .sum();
        mu.push(if i == 0 { 1 } else { -above });
    }
    inside
        .iter()
        .zip(mu)
        .filter(|(_, m)| *m != 0)
        .map(|(h, m)| (h.count_ones(..) as u64, m))
        .collect()
}

/// Number of ordered `k`-tuples generating `K`: `Σ μ(H, K)·|H|ᵏ`. `None` on
/// overflow.
fn eulerian(mobius: &[(u64, i64)], k: usize) -> Option<i128> {
    let mut total: i128 = 0;
    for &(order, mu) in mobius {
        let power = (order as i128).checked_pow(k as u32)?;
        total = total.checked_add(power.checked_mul(mu as i128)?)?;
    }
    Some(total)
}

fn generated_within(h: &Subgroup, k: usize, mobius: Option<&[(u64, i64)]>) -> bool {
    match mobius.and_then(|m| eulerian(m, k)) {
        Some(count) => count > 0,
        None => generating_set_within(h, k).is_some(),
    }
}

/// General case: the largest `d(K)` over representatives of the conjugacy
/// classes of subgroups. With the full lattice at hand, `K` is `k`-generated
/// iff its Eulerian function at `k` is positive; the witness search then only
/// runs at the known minimum.
pub fn rank_exhaustive(h: &Subgroup, cfg: RankConfig) -> Result<RankCertificate> {
    if h.is_trivial() {
        return Ok(trivial_certificate(h, RankMethod::ExhaustiveLattice));
    }
    let lattice = subgroup_classes(h, cfg.lattice_cap);
    let mut reps: Vec<&Subgroup> = lattice.classes.iter().map(|c| &c.rep).collect();
    // large subgroups first, so the log bound prunes most of the rest
    reps.sort_by(|a, b| b.order().cmp(&a.order()).then(a.elements().cmp(b.elements())));
    let mut best = 0usize;
    let mut witness: (Subgroup, Vec<Elt>) = (h.clone(), Vec::new());
    for k in reps {
        let log2 = usize::BITS as usize - 1 - (k.order().leading_zeros() as usize);
        if log2 <= best {
            continue;
        }
        let mobius = lattice
            .complete
            .then(|| mobius_below(k.members(), &lattice.subgroups));
        let mobius = mobius.as_deref();
        if best > 0 && generated_within(k, best, mobius) {
            continue;
        }
        let d = (best + 1..=log2)
            .find(|&j| generated_within(k, j, mobius))
            .expect("a group of order n is generated by log2(n) elements");
        let gens = generating_set_within(k, d).ok_or_else(|| {
            crate::Error::Internal(format!("no {d}-element generating set found for a subgroup of order {}", k.order()))
        })?;
        best = d;
        witness = (k.clone(), gens);
    }
    Ok(RankCertificate {
        group: h.clone(),
        rank: best,
        witness_subgroup: witness.0,
        witness_generators: witness.1,
        method: RankMethod::ExhaustiveLattice,
        exact: lattice.complete,
    })
}

/// Rank with the cheapest applicable method.
pub fn rank(h: &Subgroup, cfg: RankConfig) -> Result<RankCertificate> {
    if h.is_abelian() {
        rank_abelian(h)
    } else if is_nilpotent(h)? {
        rank_nilpotent(h, cfg)
    } else {
        rank_exhaustive(h, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Group, Permutation};

    fn whole(n: usize, gens: &[&str]) -> Subgroup {
        let g = Group::new("G", n, gens.iter().map(|s| Permutation::parse_cycles(s, n).unwrap()).collect()).unwrap();
        Subgroup::whole(&g).unwrap()
    }

    /// Regular representation of `C_p^k` on `p^k` points.
    fn elementary(p: u32, k: u32) -> Subgroup {
        let n = p.pow(k);
        let gens = (0..k)
            .map(|i| {
                let step = p.pow(i);
                let images = (0..n)
                    .map(|x| {
                        let digit = (x / step) % p;
                        x - digit * step + ((digit + 1) % p) * step
                    })
                    .collect();
                Permutation::from_images(images).unwrap()
            })
            .collect();
        let g = Group::new("E", n as usize, gens).unwrap();
        Subgroup::whole(&g).unwrap()
    }

    fn check_certificate(c: &RankCertificate) {
        let w = Subgroup::generated_by(c.witness_subgroup.parent(), &c.witness_generators).unwrap();
        assert_eq!(w, c.witness_subgroup);
        assert_eq!(c.witness_generators.len(), c.rank);
        assert!(c.witness_subgroup.is_subgroup_of(&c.group));
        for skip in 0..c.witness_generators.len() {
            let mut fewer = c.witness_generators.clone();
            fewer.remove(skip);
            let sub = Subgroup::generated_by(c.group.parent(), &fewer).unwrap();
            assert_ne!(sub, c.witness_subgroup, "proper subset generates");
        }
    }

    #[test]
    fn min_generators_examples() {
        assert_eq!(min_generators(&whole(6, &["(1 2 3 4 5 6)"])).unwrap().0, 1);
        assert_eq!(min_generators(&whole(4, &["(1 2)(3 4)", "(1 3)(2 4)"])).unwrap().0, 2);
        for k in 1..=3 {
            let e = elementary(3, k);
            assert_eq!(min_generators(&e).unwrap().0, k as usize);
            assert_eq!(min_generators_exhaustive(&e).0, k as usize);
        }
        let s4 = whole(4, &["(1 2)", "(1 2 3 4)"]);
        assert_eq!(min_generators(&s4).unwrap().0, 2);
    }

    #[test]
    fn rank_examples() {
        let s3 = whole(3, &["(1 2)", "(1 2 3)"]);
        let c = rank(&s3, RankConfig::default()).unwrap();
        assert_eq!((c.rank, c.method, c.exact), (2, RankMethod::ExhaustiveLattice, true));
        assert_eq!(c.witness_subgroup, s3);
        check_certificate(&c);

        let a4 = whole(4, &["(1 2 3)", "(2 3 4)"]);
        let c = rank(&a4, RankConfig::default()).unwrap();
        assert_eq!(c.rank, 2);
        check_certificate(&c);

        for (p, k) in [(2, 3), (3, 2), (5, 2)] {
            let e = elementary(p, k);
            let c = rank(&e, RankConfig::default()).unwrap();
            assert_eq!((c.rank, c.method), (k as usize, RankMethod::AbelianShortcut));
            check_certificate(&c);
            assert_eq!(rank_exhaustive(&e, RankConfig::default()).unwrap().rank, k as usize);
        }

        let s4 = whole(4, &["(1 2)", "(1 2 3 4)"]);
        let c = rank(&s4, RankConfig::default()).unwrap();
        assert_eq!(c.rank, 2);
        check_certificate(&c);
    }

    #[test]
    fn frattini_examples() {
        let d4 = whole(4, &["(1 2 3 4)", "(2 4)"]);
        assert_eq!(frattini_rank(&d4).unwrap(), 2);
        assert_eq!(frattini_rank(&elementary(2, 4)).unwrap(), 4);
        let s3 = whole(3, &["(1 2)", "(1 2 3)"]);
        assert!(frattini_rank(&s3).is_err());
    }

    #[test]
    fn nilpotent_shortcut_agrees_with_lattice() {
        // D4 x C3 as a nilpotent non-abelian example
        let g = whole(7, &["(1 2 3 4)", "(2 4)", "(5 6 7)"]);
        let a = rank_nilpotent(&g, RankConfig::default()).unwrap();
        let b = rank_exhaustive(&g, RankConfig::default()).unwrap();
        assert_eq!(a.rank, b.rank);
        assert_eq!(a.rank, 2);
        check_certificate(&a);
        check_certificate(&b);
    }

    #[test]
    fn capped_lattice_is_lower_bound() {
        let s4 = whole(4, &["(1 2)", "(1 2 3 4)"]);
        let c = rank_exhaustive(&s4, RankConfig { lattice_cap: 2 }).unwrap();
        assert!(!c.exact);
        assert!(c.rank <= 2);
        assert!(c.display_value().starts_with(">="));
    }

    #[test]
    fn eulerian_counts_generating_tuples() {
        let s3 = whole(3, &["(1 2)", "(1 2 3)"]);
        let l = subgroup_classes(&s3, DEFAULT_LATTICE_CAP);
        let mu = mobius_below(s3.members(), &l.subgroups);
        assert_eq!(eulerian(&mu, 1), Some(0));
        // 18 ordered generating pairs of S3
        assert_eq!(eulerian(&mu, 2), Some(18));
    }

    #[test]
    fn eulerian_decision_matches_search() {
        let s4 = whole(4, &["(1 2)", "(1 2 3 4)"]);
        let l = subgroup_classes(&s4, DEFAULT_LATTICE_CAP);
        for class in &l.classes {
            let mu = mobius_below(class.rep.members(), &l.subgroups);
            for k in 0..=3 {
                assert_eq!(
                    eulerian(&mu, k).unwrap() > 0,
                    generating_set_within(&class.rep, k).is_some(),
                    "order {} with k = {k}",
                    class.rep.order()
                );
            }
        }
    }

    #[test]
    fn inverting_extension_of_elementary_abelian() {
        // C3^2 on 9 points extended by x -> -x
        let g = whole(9, &["(1 2 3)(4 5 6)(7 8 9)", "(1 4 7)(2 5 8)(3 6 9)", "(2 3)(4 7)(5 9)(6 8)"]);
        assert_eq!(g.order(), 18);
        let c = rank(&g, RankConfig::default()).unwrap();
        assert_eq!(c.rank, 3);
        assert_eq!(c.witness_subgroup, g);
        check_certificate(&c);
    }
}
