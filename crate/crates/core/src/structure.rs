//! Structural series and characteristic subgroups: lower central and derived
//! series, the nilpotent residual, Sylow subgroups, p-cores, the Fitting
//! subgroup and Fitting series, and coset-action quotients.
//!
//! Every function takes the ambient group as a [`Subgroup`] so the same code
//! serves whole groups, quotients and subgroups alike.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::arith::{is_p_power, p_part, prime_divisors};
use crate::error::{Error, Result};
use crate::group::{Elt, Group, GroupHandle, IDENTITY};
use crate::subgroup::{commutator_subgroup, Closure, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
    Fitting,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// Descending for derived and lower central series, ascending for the
    /// Fitting series. When the series stops short of its natural end the
    /// repeated term is kept as the last entry.
    pub terms: Vec<Subgroup>,
    pub stabilized: bool,
    /// Number of distinct terms.
    pub height: usize,
}

impl SeriesReport {
    pub fn last(&self) -> &Subgroup {
        self.terms.last().expect("series has at least one term")
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Subgroup::order).collect()
    }
}

fn descending(kind: SeriesKind, g: &Subgroup, next: impl Fn(&Subgroup) -> Result<Subgroup>) -> Result<SeriesReport> {
    let mut terms = vec![g.clone()];
    loop {
        let cur = terms.last().unwrap();
        let nxt = next(cur)?;
        let done = nxt == *cur;
        terms.push(nxt);
        if done {
            break;
        }
    }
    let height = terms.len() - 1;
    Ok(SeriesReport {
        kind,
        terms,
        stabilized: true,
        height,
    })
}

/// `γ₁ = G`, `γᵢ₊₁ = [γᵢ, G]` until two consecutive terms agree.
pub fn lower_central_series(g: &Subgroup) -> Result<SeriesReport> {
    descending(SeriesKind::LowerCentral, g, |h| commutator_subgroup(h, g))
}

pub fn derived_series(g: &Subgroup) -> Result<SeriesReport> {
    descending(SeriesKind::Derived, g, |h| commutator_subgroup(h, h))
}

/// `γ∞(G)`, the last term of the lower central series.
pub fn nilpotent_residual(g: &Subgroup) -> Result<Subgroup> {
    Ok(lower_central_series(g)?.last().clone())
}

pub fn is_soluble(g: &Subgroup) -> Result<bool> {
    Ok(derived_series(g)?.last().is_trivial())
}

pub fn is_nilpotent(g: &Subgroup) -> Result<bool> {
    Ok(nilpotent_residual(g)?.is_trivial())
}

/// Independent nilpotency test: every Sylow subgroup is normal.
pub fn all_sylows_normal(g: &Subgroup) -> Result<bool> {
    for p in prime_divisors(g.order() as u64) {
        if !sylow_subgroup(g, p)?.is_normal_in(g) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sylow `p`-subgroup by greedy ascent from a `p`-element of maximal order.
/// Returns the trivial subgroup when `p` does not divide the order.
pub fn sylow_subgroup(g: &Subgroup, p: u64) -> Result<Subgroup> {
    let t = g.table();
    let target = p_part(g.order() as u64, p) as usize;
    let start = g
        .elements()
        .iter()
        .copied()
        .filter(|&x| x != IDENTITY && is_p_power(t.order_of(x), p))
        .fold(None::<Elt>, |best, x| match best {
            Some(b) if t.order_of(b) >= t.order_of(x) => Some(b),
            _ => Some(x),
        });
    let mut c = Closure::of(t, &start.into_iter().collect::<Vec<_>>());
    while c.len() < target {
        let current = Subgroup::from_closure(g.parent().clone(), c.clone());
        let normalizer = current.normalizer_in(g)?;
        let y = normalizer
            .elements()
            .iter()
            .copied()
            .find(|&y| !c.contains(y) && is_p_power(t.order_of(y), p))
            .ok_or_else(|| Error::Internal(format!("Sylow ascent stalled at order {}", c.len())))?;
        c.add_generator(t, y);
    }
    if c.len() != target {
        return Err(Error::Internal(format!(
            "Sylow ascent overshot: order {} for p-part {target}",
            c.len()
        )));
    }
    Ok(Subgroup::from_closure(g.parent().clone(), c))
}

/// The `p`-core `O_p(G)`: the intersection of all conjugates of a Sylow
/// `p`-subgroup.
pub fn p_core(g: &Subgroup, p: u64) -> Result<Subgroup> {
    let t = g.table();
    let sylow = sylow_subgroup(g, p)?;
    let mut core = sylow.members().clone();
    for &h in g.elements() {
        let hinv = t.inv(h);
        let keep: Vec<usize> = core
            .ones()
            .filter(|&x| sylow.contains(t.conj(x as Elt, hinv)))
            .collect();
        if keep.len() != core.count_ones(..) {
            core.clear();
            keep.into_iter().for_each(|x| core.insert(x));
        }
    }
    Ok(Subgroup::from_element_set(g.parent(), core))
}

/// `F(G)`, generated by the `p`-cores over the primes dividing `|G|`.
pub fn fitting_subgroup(g: &Subgroup) -> Result<Subgroup> {
    let t = g.table();
    let mut c = Closure::trivial(t.len());
    for p in prime_divisors(g.order() as u64) {
        for &x in p_core(g, p)?.generators() {
            c.add_generator(t, x);
        }
    }
    let f = Subgroup::from_closure(g.parent().clone(), c);
    debug_assert!(f.is_normal_in(g));
    Ok(f)
}

/// Fitting series `F₁ ≤ F₂ ≤ …`, each term the preimage of the Fitting
/// subgroup of the quotient by the previous one. For non-soluble groups the
/// series stops below `G` and the repeated term is kept.
pub fn fitting_series(g: &Subgroup) -> Result<SeriesReport> {
    let mut terms = vec![fitting_subgroup(g)?];
    loop {
        let cur = terms.last().unwrap().clone();
        if cur == *g {
            let height = terms.len();
            return Ok(SeriesReport {
                kind: SeriesKind::Fitting,
                terms,
                stabilized: true,
                height,
            });
        }
        let q = quotient_action(g, &cur)?;
        let fq = fitting_subgroup(&Subgroup::whole(q.group())?)?;
        let next = q.preimage(&fq)?;
        if next == cur {
            terms.push(next);
            let height = terms.len() - 1;
            return Ok(SeriesReport {
                kind: SeriesKind::Fitting,
                terms,
                stabilized: true,
                height,
            });
        }
        terms.push(next);
    }
}

/// Fitting height, or `None` when the group is not soluble.
pub fn fitting_height(g: &Subgroup) -> Result<Option<usize>> {
    let s = fitting_series(g)?;
    Ok((s.last() == g).then_some(s.height))
}

/// `G/N` realised as a permutation group on the cosets of `N`, with the
/// projection kept for preimages.
pub struct Quotient {
    source: Subgroup,
    group: GroupHandle,
    /// coset index per parent element; `u32::MAX` outside the source group
    coset_of: Vec<u32>,
    /// quotient element whose action sends coset 0 to coset `c`
    element_of_coset: Vec<Elt>,
}

/// Quotient by a normal subgroup via the action on cosets `Nx ↦ Nxy`.
pub fn quotient_action(g: &Subgroup, n: &Subgroup) -> Result<Quotient> {
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal);
    }
    let index = g.order() / n.order();
    if index > g.parent().threshold() {
        return Err(Error::NotEnumerable {
            order: index as u64,
            threshold: g.parent().threshold(),
        });
    }
    let t = g.table();
    let mut coset_of = vec![u32::MAX; t.len()];
    let mut reps = Vec::with_capacity(index);
    for &x in g.elements() {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &m in n.elements() {
            coset_of[t.mul(m, x) as usize] = c;
        }
    }
    let gens: Vec<crate::Permutation> = g
        .generators()
        .iter()
        .map(|&h| {
            let images = reps.iter().map(|&r| coset_of[t.mul(r, h) as usize]).collect();
            crate::Permutation::from_images_unchecked(images)
        })
        .collect();
    let label = format!("{}/N[{}]", g.parent().label(), n.order());
    let group = Group::with_threshold(label, index, gens, g.parent().threshold())?;
    if group.order() as usize != index {
        return Err(Error::Internal(format!(
            "quotient order {} differs from index {index}",
            group.order()
        )));
    }
    let qt = group.table()?;
    let mut element_of_coset = vec![0; index];
    for (i, e) in qt.elements().iter().enumerate() {
        element_of_coset[e.apply(0) as usize] = i as Elt;
    }
    Ok(Quotient {
        source: g.clone(),
        group,
        coset_of,
        element_of_coset,
    })
}

impl Quotient {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    /// Image of a source element in the quotient group.
    pub fn project(&self, x: Elt) -> Option<Elt> {
        let c = *self.coset_of.get(x as usize)?;
        (c != u32::MAX).then(|| self.element_of_coset[c as usize])
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup> {
        if !std::sync::Arc::ptr_eq(s.parent(), &self.group) {
            return Err(Error::ParentMismatch);
        }
        let n = self.source.table().len();
        let mut set = FixedBitSet::with_capacity(n);
        for &x in self.source.elements() {
            if s.contains(self.project(x).unwrap()) {
                set.insert(x as usize);
            }
        }
        Ok(Subgroup::from_element_set(self.source.parent(), set))
    }
}
