//! Executable cross-checks of four group-theoretic identities. Each check
//! verifies its own preconditions and reports a skip, rather than a
//! failure, when they do not hold.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{prime_divisors, prime_of_power};
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::group::Elt;
use crate::rank::{rank, RankCertificate, RankConfig};
use crate::structure::{fitting_height, is_soluble, nilpotent_residual, p_core, sylow_subgroup};
use crate::subgroup::{commutator_subgroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    /// `rank(G) ≤ 1 + max_p rank(Sylow_p(G))`.
    Kovacs,
    /// `[M, A]` is the product of the `[M, aᵢ]` over generators `aᵢ` of `A`.
    Lprod,
    /// `γ∞(H) = ∏_q [F_q, H_{q′}]` for Fitting height at most 2.
    Lf2,
    /// `[P, g] ≤ ⟨𝓔(g)⟩` for a `p′`-element `g` normalizing a `p`-group `P`.
    L0,
}

impl CheckId {
    pub const ALL: [CheckId; 4] = [CheckId::Kovacs, CheckId::Lprod, CheckId::Lf2, CheckId::L0];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Kovacs => "kovacs",
            CheckId::Lprod => "lprod",
            CheckId::Lf2 => "lf2",
            CheckId::L0 => "l0",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown lemma {s:?}; expected kovacs, lprod, lf2 or l0")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass { detail: String },
    Fail { witness: String },
    Skipped { reason: String },
}

impl CheckOutcome {
    fn pass(detail: impl Into<String>) -> Self {
        CheckOutcome::Pass { detail: detail.into() }
    }
    fn fail(witness: impl Into<String>) -> Self {
        CheckOutcome::Fail { witness: witness.into() }
    }
    fn skip(reason: impl Into<String>) -> Self {
        CheckOutcome::Skipped { reason: reason.into() }
    }
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail { .. })
    }
}

/// Describes a subgroup by order and generators in cycle notation.
fn describe(h: &Subgroup) -> String {
    let gens: Vec<String> = h.generator_perms().iter().map(ToString::to_string).collect();
    format!("order {} <{}>", h.order(), gens.join(", "))
}

pub fn verify_kovacs(g: &Subgroup, cfg: RankConfig) -> Result<CheckOutcome> {
    verify_kovacs_with(&rank(g, cfg)?, cfg)
}

/// As [`verify_kovacs`], reusing an already computed rank certificate for the
/// whole group.
pub fn verify_kovacs_with(whole: &RankCertificate, cfg: RankConfig) -> Result<CheckOutcome> {
    let g = &whole.group;
    if !whole.exact {
        return Ok(CheckOutcome::skip("subgroup lattice cap reached for the group"));
    }
    let mut sylow_max = 0;
    for p in prime_divisors(g.order() as u64) {
        let cert = rank(&sylow_subgroup(g, p)?, cfg)?;
        if !cert.exact {
            return Ok(CheckOutcome::skip(format!("subgroup lattice cap reached for the Sylow {p}-subgroup")));
        }
        sylow_max = sylow_max.max(cert.rank);
    }
    let bound = 1 + sylow_max;
    Ok(if whole.rank <= bound {
        CheckOutcome::pass(format!("rank {} <= 1 + {sylow_max}", whole.rank))
    } else {
        CheckOutcome::fail(format!(
            "rank {} > 1 + {sylow_max}; witness subgroup {}",
            whole.rank,
            describe(&whole.witness_subgroup)
        ))
    })
}

pub fn verify_lprod(m: &Subgroup, a: &Subgroup) -> Result<CheckOutcome> {
    if !m.is_normalized_by(a) {
        return Ok(CheckOutcome::skip("acting subgroup does not normalize M"));
    }
    let whole = commutator_subgroup(m, a)?;
    let mut product = Subgroup::trivial(m.parent())?;
    for &ai in a.generators() {
        let cyclic = Subgroup::generated_by(m.parent(), &[ai])?;
        product = product.join(&commutator_subgroup(m, &cyclic)?)?;
    }
    Ok(if whole == product {
        CheckOutcome::pass(format!("[M,A] has order {} over {} generators", whole.order(), a.generators().len()))
    } else {
        CheckOutcome::fail(format!("[M,A] is {} but the product is {}", describe(&whole), describe(&product)))
    })
}

/// Uses the Hall `q′`-subgroups from the entry's split-extension metadata.
pub fn verify_lf2(entry: &CatalogEntry) -> Result<CheckOutcome> {
    if !entry.meta.has_hall_data() {
        return Ok(CheckOutcome::skip("no Hall subgroup metadata"));
    }
    let h = Subgroup::whole(&entry.group)?;
    if !is_soluble(&h)? {
        return Ok(CheckOutcome::skip("group is not soluble"));
    }
    match fitting_height(&h)? {
        Some(height) if height <= 2 => {}
        other => return Ok(CheckOutcome::skip(format!("Fitting height {other:?} exceeds 2"))),
    }
    let residual = nilpotent_residual(&h)?;
    let mut product = Subgroup::trivial(&entry.group)?;
    for q in prime_divisors(h.order() as u64) {
        let fq = p_core(&h, q)?;
        let hall = entry
            .hall_complement(q)?
            .ok_or_else(|| Error::Internal("Hall metadata vanished".into()))?;
        product = product.join(&commutator_subgroup(&fq, &hall)?)?;
    }
    Ok(if residual == product {
        CheckOutcome::pass(format!("both sides have order {}", residual.order()))
    } else {
        CheckOutcome::fail(format!(
            "nilpotent residual is {} but the product is {}",
            describe(&residual),
            describe(&product)
        ))
    })
}

/// `sink_subgroup` is `⟨𝓔(g)⟩` as computed by the caller.
pub fn verify_l0(p_group: &Subgroup, g: Elt, sink_subgroup: &Subgroup) -> Result<CheckOutcome> {
    if p_group.is_trivial() {
        return Ok(CheckOutcome::skip("P is trivial"));
    }
    let Some(p) = prime_of_power(p_group.order() as u64) else {
        return Ok(CheckOutcome::skip(format!("|P| = {} is not a prime power", p_group.order())));
    };
    let t = p_group.table();
    if t.order_of(g).is_multiple_of(p) {
        return Ok(CheckOutcome::skip(format!("g has order divisible by {p}")));
    }
    let cyclic = Subgroup::generated_by(p_group.parent(), &[g])?;
    if !p_group.is_normalized_by(&cyclic) {
        return Ok(CheckOutcome::skip("g does not normalize P"));
    }
    let comm = commutator_subgroup(p_group, &cyclic)?;
    Ok(match comm.elements().iter().find(|&&x| !sink_subgroup.contains(x)) {
        None => CheckOutcome::pass(format!("[P,g] of order {} lies in <E(g)> of order {}", comm.order(), sink_subgroup.order())),
        Some(&x) => CheckOutcome::fail(format!(
            "{} lies in [P,g] but not in <E(g)> for g = {}",
            t.element(x),
            t.element(g)
        )),
    })
}
