//! Conjugacy classes of subgroups by cyclic joins.
//!
//! Every subgroup is a join of cyclic subgroups, so starting from the trivial
//! and cyclic subgroups and repeatedly joining each class representative with
//! every cyclic subgroup reaches every class. This also finds perfect
//! subgroups, which extension by normalizing elements alone would miss.
//! Each new class registers all of its conjugates, so later joins are
//! recognised with one hash lookup.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::group::{Elt, ElementTable, IDENTITY};
use crate::subgroup::{Closure, Subgroup};

pub const DEFAULT_LATTICE_CAP: usize = 50_000;

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    /// Number of conjugates of the representative.
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub classes: Vec<SubgroupClass>,
    /// False when the class cap stopped enumeration early.
    pub complete: bool,
    /// Every subgroup found (all conjugates of every class), as member sets
    /// over the parent's element indices, largest first.
    pub subgroups: Vec<FixedBitSet>,
}

impl SubgroupLattice {
    pub fn total_subgroups(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }
}

/// One generator per cyclic subgroup of `h`: the smallest generator in
/// canonical order, listed in increasing order.
pub fn cyclic_subgroup_reps(t: &ElementTable, h: &Subgroup) -> Vec<Elt> {
    let mut marked = FixedBitSet::with_capacity(t.len());
    let mut reps = Vec::new();
    for &x in h.elements() {
        if x == IDENTITY || marked.contains(x as usize) {
            continue;
        }
        reps.push(x);
        let n = t.order_of(x);
        let mut y = x;
        for j in 1..=n {
            if num_integer::gcd(j, n) == 1 {
                marked.insert(y as usize);
            }
            y = t.mul(y, x);
        }
    }
    reps
}

fn conjugate_set(t: &ElementTable, set: &Closure, h: Elt) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(t.len());
    let hinv = t.inv(h);
    for &x in &set.list {
        out.insert(t.mul(t.mul(hinv, x), h) as usize);
    }
    out
}

/// Representatives of the conjugacy classes of subgroups of `h`, ordered by
/// discovery (trivial first, then cyclic subgroups, then joins).
pub fn subgroup_classes(h: &Subgroup, cap: usize) -> SubgroupLattice {
    let t = h.table();
    let cyclic = cyclic_subgroup_reps(t, h);
    let mut seen: FxHashMap<FixedBitSet, usize> = FxHashMap::default();
    let mut reps: Vec<(Closure, usize)> = Vec::new();
    let mut complete = true;

    let register = |c: Closure, seen: &mut FxHashMap<FixedBitSet, usize>, reps: &mut Vec<(Closure, usize)>| -> bool {
        if seen.contains_key(&c.set) {
            return true;
        }
        if reps.len() >= cap {
            return false;
        }
        let id = reps.len();
        let mut size = 0;
        for &g in h.elements() {
            let conj = conjugate_set(t, &c, g);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(conj) {
                e.insert(id);
                size += 1;
            }
        }
        reps.push((c, size));
        true
    };

    register(Closure::trivial(t.len()), &mut seen, &mut reps);
    for &x in &cyclic {
        if !register(Closure::of(t, &[x]), &mut seen, &mut reps) {
            complete = false;
        }
    }
    let mut i = 0;
    'outer: while i < reps.len() {
        let base = reps[i].0.clone();
        if base.len() < h.order() {
            for &x in &cyclic {
                if base.contains(x) {
                    continue;
                }
                let mut joined = base.clone();
                joined.add_generator(t, x);
                if !register(joined, &mut seen, &mut reps) {
                    complete = false;
                    break 'outer;
                }
            }
        }
        i += 1;
    }

    let mut subgroups: Vec<FixedBitSet> = seen.into_keys().collect();
    subgroups.sort_by_cached_key(|s| (std::cmp::Reverse(s.count_ones(..)), s.ones().collect::<Vec<_>>()));
    let classes = reps
        .into_iter()
        .map(|(c, size)| SubgroupClass {
            rep: Subgroup::from_closure(h.parent().clone(), c),
            size,
        })
        .collect();
    SubgroupLattice {
        classes,
        complete,
        subgroups,
    }
}
