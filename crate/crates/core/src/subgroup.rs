//! Subgroups of an enumerated group: closure, joins, intersections,
//! normalizers, normal closures and commutator subgroups.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Elt, ElementTable, Group, GroupHandle, IDENTITY};
use crate::perm::Permutation;

/// Incremental closure under right multiplication by a generator list.
#[derive(Clone, Debug)]
pub(crate) struct Closure {
    pub list: Vec<Elt>,
    pub set: FixedBitSet,
    pub gens: Vec<Elt>,
}

impl Closure {
    pub fn trivial(n: usize) -> Self {
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(IDENTITY as usize);
        Closure {
            list: vec![IDENTITY],
            set,
            gens: Vec::new(),
        }
    }

    pub fn of(t: &ElementTable, gens: &[Elt]) -> Self {
        let mut c = Closure::trivial(t.len());
        for &g in gens {
            c.add_generator(t, g);
        }
        c
    }

    /// Adds `g` to the generators; returns false when `g` was already inside.
    pub fn add_generator(&mut self, t: &ElementTable, g: Elt) -> bool {
        if self.set.contains(g as usize) {
            return false;
        }
        self.gens.push(g);
        let old = self.list.len();
        for i in 0..old {
            let y = t.mul(self.list[i], g);
            if !self.set.put(y as usize) {
                self.list.push(y);
            }
        }
        let mut k = old;
        while k < self.list.len() {
            let x = self.list[k];
            for gi in 0..self.gens.len() {
                let y = t.mul(x, self.gens[gi]);
                if !self.set.put(y as usize) {
                    self.list.push(y);
                }
            }
            k += 1;
        }
        true
    }

    #[inline]
    pub fn contains(&self, x: Elt) -> bool {
        self.set.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }
}

/// A subgroup of an enumerated parent group, stored as the sorted set of its
/// element indices together with a generating list.
#[derive(Clone)]
pub struct Subgroup {
    parent: GroupHandle,
    elements: Vec<Elt>,
    members: FixedBitSet,
    generators: Vec<Elt>,
}

pub type SubgroupHandle = Subgroup;

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.order(), self.parent.label())
    }
}

impl Subgroup {
    pub(crate) fn from_closure(parent: GroupHandle, c: Closure) -> Self {
        let mut elements = c.list;
        elements.sort_unstable();
        Subgroup {
            parent,
            elements,
            members: c.set,
            generators: c.gens,
        }
    }

    /// `⟨gens⟩` for generators given as element indices.
    pub fn generated_by(parent: &GroupHandle, gens: &[Elt]) -> Result<Self> {
        let t = parent.table()?;
        Ok(Subgroup::from_closure(parent.clone(), Closure::of(t, gens)))
    }

    /// Wraps a set already known to be a subgroup; a small generating list is
    /// picked greedily in canonical order.
    pub(crate) fn from_element_set(parent: &GroupHandle, set: FixedBitSet) -> Self {
        let t = parent.table().expect("enumerated parent");
        let mut c = Closure::trivial(t.len());
        for x in set.ones() {
            if !c.contains(x as Elt) {
                c.add_generator(t, x as Elt);
            }
        }
        debug_assert_eq!(c.set, set);
        Subgroup::from_closure(parent.clone(), c)
    }

    pub fn whole(parent: &GroupHandle) -> Result<Self> {
        let t = parent.table()?;
        let gens = t.generators().to_vec();
        Subgroup::generated_by(parent, &gens)
    }

    pub fn trivial(parent: &GroupHandle) -> Result<Self> {
        Subgroup::generated_by(parent, &[])
    }

    pub fn parent(&self) -> &GroupHandle {
        &self.parent
    }

    pub(crate) fn table(&self) -> &ElementTable {
        self.parent.table().expect("subgroups only exist in enumerated groups")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elt] {
        &self.elements
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn generators(&self) -> &[Elt] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Permutation> {
        let t = self.table();
        self.generators.iter().map(|&g| t.element(g).clone()).collect()
    }

    pub fn element_perms(&self) -> Vec<Permutation> {
        let t = self.table();
        self.elements.iter().map(|&g| t.element(g).clone()).collect()
    }

    #[inline]
    pub fn contains(&self, x: Elt) -> bool {
        self.members.contains(x as usize)
    }

    pub fn contains_perm(&self, g: &Permutation) -> bool {
        self.table().index_of(g).is_some_and(|i| self.contains(i))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members.is_subset(&other.members)
    }

    pub(crate) fn closure(&self) -> Closure {
        Closure {
            list: self.elements.clone(),
            set: self.members.clone(),
            gens: self.generators.clone(),
        }
    }

    fn check_parent(&self, other: &Subgroup) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// A standalone group generated by this subgroup's generators.
    pub fn to_group(&self, label: impl Into<String>) -> Result<GroupHandle> {
        Group::with_threshold(
            label,
            self.parent.degree(),
            self.generator_perms(),
            self.parent.threshold(),
        )
    }

    pub fn is_abelian(&self) -> bool {
        let t = self.table();
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| t.mul(a, b) == t.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        let t = self.table();
        let n = self.order() as u64;
        self.elements.iter().any(|&x| t.order_of(x) == n)
    }

    /// `⟨self, other⟩`
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        let t = self.table();
        let mut c = self.closure();
        for &g in &other.generators {
            c.add_generator(t, g);
        }
        Ok(Subgroup::from_closure(self.parent.clone(), c))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_parent(other)?;
        let mut set = self.members.clone();
        set.intersect_with(&other.members);
        Ok(Subgroup::from_element_set(&self.parent, set))
    }

    /// `self^h`
    pub fn conjugate(&self, h: Elt) -> Subgroup {
        let t = self.table();
        let gens: Vec<Elt> = self.generators.iter().map(|&g| t.conj(g, h)).collect();
        Subgroup::from_closure(self.parent.clone(), Closure::of(t, &gens))
    }

    /// Whether every element of `by` normalizes `self`.
    pub fn is_normalized_by(&self, by: &Subgroup) -> bool {
        let t = self.table();
        by.generators
            .iter()
            .all(|&h| self.generators.iter().all(|&g| self.contains(t.conj(g, h))))
    }

    pub fn is_normal_in(&self, overgroup: &Subgroup) -> bool {
        self.is_subgroup_of(overgroup) && self.is_normalized_by(overgroup)
    }

    pub fn normalizer_in(&self, overgroup: &Subgroup) -> Result<Subgroup> {
        self.check_parent(overgroup)?;
        let t = self.table();
        let mut set = FixedBitSet::with_capacity(t.len());
        for &h in &overgroup.elements {
            if self.generators.iter().all(|&g| self.contains(t.conj(g, h))) {
                set.insert(h as usize);
            }
        }
        Ok(Subgroup::from_element_set(&self.parent, set))
    }

    pub fn centralizer_in(&self, overgroup: &Subgroup) -> Result<Subgroup> {
        self.check_parent(overgroup)?;
        let t = self.table();
        let mut set = FixedBitSet::with_capacity(t.len());
        for &h in &overgroup.elements {
            if self.generators.iter().all(|&g| t.mul(g, h) == t.mul(h, g)) {
                set.insert(h as usize);
            }
        }
        Ok(Subgroup::from_element_set(&self.parent, set))
    }
}

/// Smallest subgroup containing `gens` and normalized by `by`.
pub fn normal_closure(parent: &GroupHandle, gens: &[Elt], by: &[Elt]) -> Result<Subgroup> {
    let t = parent.table()?;
    let mut c = Closure::of(t, gens);
    let mut k = 0;
    while k < c.gens.len() {
        let g = c.gens[k];
        for &h in by {
            let y = t.conj(g, h);
            c.add_generator(t, y);
        }
        k += 1;
    }
    Ok(Subgroup::from_closure(parent.clone(), c))
}

/// `[A, B]`: the normal closure in `⟨A, B⟩` of the commutators of generators.
pub fn commutator_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.check_parent(b)?;
    let t = a.table();
    let mut comms = Vec::new();
    for &x in &a.generators {
        for &y in &b.generators {
            let c = t.comm(x, y);
            if c != IDENTITY && !comms.contains(&c) {
                comms.push(c);
            }
        }
    }
    let by: Vec<Elt> = a.generators.iter().chain(&b.generators).copied().collect();
    normal_closure(&a.parent, &comms, &by)
}

impl Group {
    /// `⟨gens⟩` inside `self`.
    pub fn closure(self: &Arc<Self>, gens: &[Permutation]) -> Result<Subgroup> {
        let t = self.table()?;
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != self.degree() {
                return Err(Error::DegreeMismatch {
                    left: self.degree(),
                    right: g.degree(),
                });
            }
            idx.push(t.index_of(g).ok_or_else(|| Error::NotMember(g.to_string()))?);
        }
        Subgroup::generated_by(self, &idx)
    }
}
