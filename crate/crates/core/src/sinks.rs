//! Minimal Engel sinks.
//!
//! For `g ∈ G` the map `φ_g : x ↦ [x, g]` is a self-map of a finite set, so
//! every orbit `x, [x,g], [x,g,g], …` eventually enters a cycle. The smallest
//! Engel sink `𝓔(g)` is the set of points lying on those cycles: every long
//! enough commutator lands there, and every periodic point recurs on its own
//! orbit, so nothing smaller works.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ConjugacyClass, Elt, ElementTable, GroupHandle, IDENTITY};
use crate::par;
use crate::perm::Permutation;
use crate::rank::{rank, RankConfig};
use crate::subgroup::Subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankValue {
    pub rank: usize,
    pub exact: bool,
}

impl RankValue {
    pub fn display(&self) -> String {
        if self.exact {
            self.rank.to_string()
        } else {
            format!(">={}", self.rank)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SinkReport {
    pub element: Elt,
    /// Sorted element indices, i.e. canonical order.
    pub sink: Vec<Elt>,
    pub sink_subgroup: Subgroup,
    /// Filled in by [`SinkProfile`]; `None` from a bare [`minimal_sink`].
    pub sink_rank: Option<RankValue>,
    /// Longest pre-periodic tail of `φ_g`.
    pub max_tail: usize,
}

/// `φ_g` as an index map.
pub fn commutator_map(t: &ElementTable, g: Elt) -> Vec<Elt> {
    (0..t.len() as Elt).map(|x| t.comm(x, g)).collect()
}

/// Periodic points of a self-map of `{0, …, n-1}` and its longest tail.
///
/// Points of in-degree zero are peeled off repeatedly; what survives lies on
/// cycles. Depths are then filled in reverse peel order.
pub fn periodic_points(map: &[Elt]) -> (FixedBitSet, usize) {
    let n = map.len();
    let mut indeg = vec![0u32; n];
    for &y in map {
        indeg[y as usize] += 1;
    }
    let mut peeled: Vec<Elt> = (0..n as Elt).filter(|&x| indeg[x as usize] == 0).collect();
    let mut k = 0;
    while k < peeled.len() {
        let y = map[peeled[k] as usize] as usize;
        indeg[y] -= 1;
        if indeg[y] == 0 {
            peeled.push(y as Elt);
        }
        k += 1;
    }
    let mut periodic = FixedBitSet::with_capacity(n);
    periodic.insert_range(..);
    for &x in &peeled {
        periodic.set(x as usize, false);
    }
    let mut depth = vec![0usize; n];
    let mut max_tail = 0;
    for &x in peeled.iter().rev() {
        let d = depth[map[x as usize] as usize] + 1;
        depth[x as usize] = d;
        max_tail = max_tail.max(d);
    }
    (periodic, max_tail)
}

pub fn minimal_sink_at(group: &GroupHandle, g: Elt) -> Result<SinkReport> {
    let t = group.table()?;
    let map = commutator_map(t, g);
    let (periodic, max_tail) = periodic_points(&map);
    let sink: Vec<Elt> = periodic.ones().map(|x| x as Elt).collect();
    let sink_subgroup = Subgroup::generated_by(group, &sink)?;
    Ok(SinkReport {
        element: g,
        sink,
        sink_subgroup,
        sink_rank: None,
        max_tail,
    })
}

/// `𝓔(g)` together with `⟨𝓔(g)⟩` and the longest tail.
pub fn minimal_sink(group: &GroupHandle, g: &Permutation) -> Result<SinkReport> {
    let idx = group.index_of(g)?;
    minimal_sink_at(group, idx)
}

/// Reference sink: iterate the commutator map `horizon` times from every `x`
/// using permutation arithmetic, then collect the cycle reached.
pub fn naive_sink_oracle(group: &GroupHandle, g: &Permutation, horizon: usize) -> Result<Vec<Permutation>> {
    let elements = group.table()?.elements();
    if horizon < elements.len() {
        return Err(Error::HorizonTooSmall {
            horizon,
            order: elements.len(),
        });
    }
    if !group.contains(g) {
        return Err(Error::NotMember(g.to_string()));
    }
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let step: Vec<usize> = elements
        .iter()
        .map(|x| Permutation::commutator(x, g).map(|c| index[&c]))
        .collect::<Result<_>>()?;
    let mut found = vec![false; elements.len()];
    for start in 0..elements.len() {
        let mut y = start;
        for _ in 0..horizon {
            y = step[y];
        }
        let entry = y;
        loop {
            found[y] = true;
            y = step[y];
            if y == entry {
                break;
            }
        }
    }
    Ok(found
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| elements[i].clone())
        .collect())
}

#[derive(Clone, Copy, Debug)]
pub struct ProfileConfig {
    pub rank: RankConfig,
    pub audit_seed: u64,
    /// Conjugates per class whose sink is recomputed directly and compared
    /// with the one obtained by conjugation.
    pub audits_per_class: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            rank: RankConfig::default(),
            audit_seed: 42,
            audits_per_class: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassSink {
    pub class: usize,
    pub report: SinkReport,
}

/// Sinks of every element, computed on class representatives and carried to
/// the rest of each class by conjugation.
pub struct SinkProfile {
    group: GroupHandle,
    pub classes: Vec<ClassSink>,
    /// `(class, position in class)` per element
    position: Vec<(u32, u32)>,
    pub r_star: RankValue,
    pub audited: usize,
}

fn conjugate_sorted(t: &ElementTable, set: &[Elt], h: Elt) -> Vec<Elt> {
    let mut out: Vec<Elt> = set.iter().map(|&x| t.conj(x, h)).collect();
    out.sort_unstable();
    out
}

impl SinkProfile {
    pub fn compute(group: &GroupHandle, cfg: ProfileConfig) -> Result<SinkProfile> {
        let t = group.table()?;
        let classes: &[ConjugacyClass] = group.classes()?;
        let mut position = vec![(0u32, 0u32); t.len()];
        for (ci, c) in classes.iter().enumerate() {
            for (k, &m) in c.members.iter().enumerate() {
                position[m as usize] = (ci as u32, k as u32);
            }
        }

        let reports: Vec<SinkReport> = par::map(classes, |c| minimal_sink_at(group, c.rep))
            .into_iter()
            .collect::<Result<_>>()?;

        // one rank computation per distinct sink subgroup
        let mut distinct: Vec<&Subgroup> = Vec::new();
        let mut which = Vec::with_capacity(reports.len());
        for r in &reports {
            match distinct.iter().position(|s| *s == &r.sink_subgroup) {
                Some(i) => which.push(i),
                None => {
                    which.push(distinct.len());
                    distinct.push(&r.sink_subgroup);
                }
            }
        }
        let ranks: Vec<RankValue> = par::map(&distinct, |s| {
            rank(s, cfg.rank).map(|c| RankValue {
                rank: c.rank,
                exact: c.exact,
            })
        })
        .into_iter()
        .collect::<Result<_>>()?;

        let classes_out: Vec<ClassSink> = reports
            .into_iter()
            .zip(which)
            .enumerate()
            .map(|(ci, (mut report, w))| {
                report.sink_rank = Some(ranks[w]);
                ClassSink { class: ci, report }
            })
            .collect();

        let r_star = classes_out
            .iter()
            .map(|c| c.report.sink_rank.unwrap())
            .fold(RankValue { rank: 0, exact: true }, |acc, r| RankValue {
                rank: acc.rank.max(r.rank),
                exact: acc.exact && r.exact,
            });

        let mut profile = SinkProfile {
            group: group.clone(),
            classes: classes_out,
            position,
            r_star,
            audited: 0,
        };
        profile.audited = profile.audit(cfg)?;
        Ok(profile)
    }

    fn audit(&self, cfg: ProfileConfig) -> Result<usize> {
        let classes = self.group.classes()?;
        let jobs: Vec<(usize, Elt)> = classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.members.len() > 1)
            .flat_map(|(ci, c)| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.audit_seed ^ (ci as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                (0..cfg.audits_per_class)
                    .map(move |_| (ci, c.members[rng.gen_range(1..c.members.len())]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let failures: Vec<Option<String>> = par::map(&jobs, |&(_, m)| {
            let direct = match minimal_sink_at(&self.group, m) {
                Ok(r) => r,
                Err(e) => return Some(e.to_string()),
            };
            let derived = self.sink_of(m);
            (direct.sink != derived).then(|| {
                format!(
                    "sink of {} disagrees with the conjugated class sink",
                    self.group.table().unwrap().element(m)
                )
            })
        });
        if let Some(msg) = failures.into_iter().flatten().next() {
            return Err(Error::Internal(msg));
        }
        Ok(jobs.len())
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    fn locate(&self, g: Elt) -> (&ClassSink, Elt) {
        let (ci, k) = self.position[g as usize];
        let class = &self.group.classes().expect("enumerated")[ci as usize];
        (&self.classes[ci as usize], class.conjugators[k as usize])
    }

    /// `𝓔(g)` in canonical order.
    pub fn sink_of(&self, g: Elt) -> Vec<Elt> {
        let (c, h) = self.locate(g);
        if h == IDENTITY {
            return c.report.sink.clone();
        }
        conjugate_sorted(self.group.table().unwrap(), &c.report.sink, h)
    }

    pub fn report_for(&self, g: Elt) -> SinkReport {
        let (c, h) = self.locate(g);
        if h == IDENTITY {
            return c.report.clone();
        }
        let t = self.group.table().unwrap();
        SinkReport {
            element: g,
            sink: conjugate_sorted(t, &c.report.sink, h),
            sink_subgroup: c.report.sink_subgroup.conjugate(h),
            sink_rank: c.report.sink_rank,
            max_tail: c.report.max_tail,
        }
    }

    pub fn is_all_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.report.sink == [IDENTITY])
    }
}

pub fn sink_profile(group: &GroupHandle) -> Result<SinkProfile> {
    SinkProfile::compute(group, ProfileConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Group;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn group(n: usize, gens: &[&str]) -> GroupHandle {
        Group::new("G", n, gens.iter().map(|s| p(n, s)).collect()).unwrap()
    }

    fn perms(g: &GroupHandle, sink: &[Elt]) -> Vec<Permutation> {
        let t = g.table().unwrap();
        sink.iter().map(|&x| t.element(x).clone()).collect()
    }

    #[test]
    fn abelian_sinks_are_trivial() {
        let g = group(6, &["(1 2 3 4 5 6)"]);
        for x in g.table().unwrap().elements().to_vec() {
            let r = minimal_sink(&g, &x).unwrap();
            assert_eq!(r.sink, vec![IDENTITY]);
            assert!(r.sink_subgroup.is_trivial());
        }
    }

    #[test]
    fn s3_transposition() {
        let g = group(3, &["(1 2)", "(1 2 3)"]);
        let r = minimal_sink(&g, &p(3, "(1 2)")).unwrap();
        assert_eq!(perms(&g, &r.sink), vec![p(3, "()"), p(3, "(1 2 3)"), p(3, "(1 3 2)")]);
        assert_eq!(r.sink_subgroup.order(), 3);
        assert_eq!(r.max_tail, 1);
        let oracle = naive_sink_oracle(&g, &p(3, "(1 2)"), 6).unwrap();
        assert_eq!(oracle, perms(&g, &r.sink));
    }

    #[test]
    fn d5_reflection_sink_is_rotations() {
        let g = group(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]);
        let r = minimal_sink(&g, &p(5, "(2 5)(3 4)")).unwrap();
        assert_eq!(r.sink.len(), 5);
        assert!(r.sink_subgroup.contains_perm(&p(5, "(1 2 3 4 5)")));
        let prof = sink_profile(&g).unwrap();
        assert_eq!(prof.r_star, RankValue { rank: 1, exact: true });
    }

    #[test]
    fn oracle_rejects_short_horizon_and_foreign_element() {
        let g = group(3, &["(1 2)", "(1 2 3)"]);
        assert!(matches!(
            naive_sink_oracle(&g, &p(3, "(1 2)"), 5),
            Err(Error::HorizonTooSmall { horizon: 5, order: 6 })
        ));
        let c3 = group(3, &["(1 2 3)"]);
        assert!(matches!(naive_sink_oracle(&c3, &p(3, "(1 2)"), 10), Err(Error::NotMember(_))));
        assert!(matches!(minimal_sink(&c3, &p(3, "(1 2)")), Err(Error::NotMember(_))));
        let id = naive_sink_oracle(&g, &Permutation::identity(3), 6).unwrap();
        assert_eq!(id, vec![Permutation::identity(3)]);
    }

    #[test]
    fn profile_of_s3_and_s4() {
        let g = group(3, &["(1 2)", "(1 2 3)"]);
        let prof = sink_profile(&g).unwrap();
        assert_eq!(prof.r_star.rank, 1);
        let s4 = group(4, &["(1 2)", "(1 2 3 4)"]);
        let prof = sink_profile(&s4).unwrap();
        let t = s4.table().unwrap();
        for x in 0..t.len() as Elt {
            let direct = minimal_sink_at(&s4, x).unwrap();
            assert_eq!(prof.sink_of(x), direct.sink);
            let derived = prof.report_for(x);
            assert_eq!(derived.sink_subgroup, direct.sink_subgroup);
            assert_eq!(derived.max_tail, direct.max_tail);
        }
    }

    #[test]
    fn periodic_points_of_small_maps() {
        // 0 -> 1 -> 2 -> 1, 3 -> 0
        let (per, tail) = periodic_points(&[1, 2, 1, 0]);
        assert_eq!(per.ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(tail, 2);
        let (per, tail) = periodic_points(&[1, 2, 0]);
        assert_eq!(per.count_ones(..), 3);
        assert_eq!(tail, 0);
    }
}
