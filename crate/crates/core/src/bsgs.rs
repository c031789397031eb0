//! Deterministic Schreier–Sims: base, strong generators, basic orbits and
//! transversals. Used for group orders and membership when a group is too
//! large to enumerate, and to pick the base whose images index elements.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `transversal[γ]` maps the level's base point to `γ`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: u32, degree: usize) -> Self {
        Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        }
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.point as usize] = Some(Permutation::identity(degree));
        self.orbit = vec![self.point];
        let mut k = 0;
        while k < self.orbit.len() {
            let gamma = self.orbit[k];
            for s in &self.gens {
                let delta = s.apply(gamma);
                if self.transversal[delta as usize].is_none() {
                    let u = self.transversal[gamma as usize].as_ref().unwrap().then(s);
                    self.transversal[delta as usize] = Some(u);
                    self.orbit.push(delta);
                }
            }
            k += 1;
        }
    }
}

/// A base and strong generating set with its stabilizer chain.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

fn first_moved(p: &Permutation) -> Option<u32> {
    p.images()
        .iter()
        .enumerate()
        .find(|(i, &j)| *i as u32 != j)
        .map(|(i, _)| i as u32)
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut levels: Vec<Level> = Vec::new();
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        for s in &strong {
            if levels.iter().all(|l| s.apply(l.point) == l.point) {
                levels.push(Level::new(first_moved(s).unwrap(), degree));
            }
        }
        // level i holds the strong generators fixing the first i base points
        let points: Vec<u32> = levels.iter().map(|l| l.point).collect();
        for (i, level) in levels.iter_mut().enumerate() {
            level.gens = strong
                .iter()
                .filter(|s| points[..i].iter().all(|&b| s.apply(b) == b))
                .cloned()
                .collect();
            level.rebuild_orbit(degree);
        }

        let mut chain = StabChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let degree = self.degree;
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut jumped = None;
            'scan: for k in 0..self.levels[li].orbit.len() {
                let gamma = self.levels[li].orbit[k];
                for s_idx in 0..self.levels[li].gens.len() {
                    let level = &self.levels[li];
                    let s = &level.gens[s_idx];
                    let delta = s.apply(gamma);
                    let h = level.transversal[gamma as usize]
                        .as_ref()
                        .unwrap()
                        .then(s)
                        .then(&level.transversal[delta as usize].as_ref().unwrap().inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.sift_from(h, li + 1);
                    if j < self.levels.len() || !residue.is_identity() {
                        if j == self.levels.len() {
                            let point = first_moved(&residue).unwrap();
                            self.levels.push(Level::new(point, degree));
                        }
                        for l in li + 1..=j {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].rebuild_orbit(degree);
                        }
                        jumped = Some(j);
                        break 'scan;
                    }
                }
            }
            match jumped {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` starting at `start`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` when it passed every level).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let gamma = g.apply(level.point);
            match &level.transversal[gamma as usize] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, j),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Group order as the product of basic orbit lengths; `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.levels
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.sift_from(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// All elements, unsorted.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for x in &acc {
                for &gamma in &level.orbit {
                    next.push(x.then(level.transversal[gamma as usize].as_ref().unwrap()));
                }
            }
            acc = next;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, deg).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=8usize {
            let gens = [p(n, "(1 2)"), {
                let cyc: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
                p(n, &format!("({})", cyc.join(" ")))
            }];
            let chain = StabChain::new(n, &gens);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(chain.order(), Some(fact));
        }
    }

    #[test]
    fn membership() {
        let chain = StabChain::new(5, &[p(5, "(1 2 3)"), p(5, "(3 4 5)")]);
        assert_eq!(chain.order(), Some(60));
        assert!(chain.contains(&p(5, "(1 2)(3 4)")));
        assert!(!chain.contains(&p(5, "(1 2)")));
    }

    #[test]
    fn trivial_group() {
        let chain = StabChain::new(4, &[Permutation::identity(4)]);
        assert_eq!(chain.order(), Some(1));
        assert_eq!(chain.elements().len(), 1);
        assert!(chain.base().is_empty());
    }

    #[test]
    fn elements_are_distinct_and_complete() {
        let chain = StabChain::new(6, &[p(6, "(1 2)(3 4)"), p(6, "(1 3 5)(2 4 6)")]);
        let mut els = chain.elements();
        let n = els.len() as u64;
        els.sort();
        els.dedup();
        assert_eq!(els.len() as u64, n);
        assert_eq!(chain.order(), Some(n));
        assert!(els.iter().all(|e| chain.contains(e)));
    }
}
