//! Permutation groups given by generators, with a lazily built element table.
//!
//! Elements of an enumerated group are addressed by their index in the
//! canonical (lexicographic) order. The identity is always index 0.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;

use crate::bsgs::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Index of an element in its group's canonical order.
pub type Elt = u32;

pub const IDENTITY: Elt = 0;

/// Groups above this order are kept in the stabilizer-chain tier.
pub const DEFAULT_ENUMERATION_THRESHOLD: usize = 20_000;

/// Largest order for which a full multiplication table is stored.
const TABLE_LIMIT: usize = 2048;

pub type GroupHandle = Arc<Group>;

pub struct Group {
    label: String,
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: u64,
    threshold: usize,
    table: OnceLock<ElementTable>,
    classes: OnceLock<Vec<ConjugacyClass>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("label", &self.label)
            .field("degree", &self.degree)
            .field("order", &self.order)
            .finish()
    }
}

impl Group {
    pub fn new(label: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<GroupHandle> {
        Group::with_threshold(label, degree, generators, DEFAULT_ENUMERATION_THRESHOLD)
    }

    pub fn with_threshold(
        label: impl Into<String>,
        degree: usize,
        mut generators: Vec<Permutation>,
        threshold: usize,
    ) -> Result<GroupHandle> {
        if threshold == 0 {
            return Err(Error::InvalidParameter("enumeration threshold must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        if generators.is_empty() {
            generators.push(Permutation::identity(degree));
        }
        let chain = StabChain::new(degree, &generators);
        let order = chain
            .order()
            .ok_or_else(|| Error::InvalidParameter("group order overflows u64".into()))?;
        Ok(Arc::new(Group {
            label: label.into(),
            degree,
            generators,
            chain,
            order,
            threshold,
            table: OnceLock::new(),
            classes: OnceLock::new(),
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn is_enumerable(&self) -> bool {
        self.order <= self.threshold as u64
    }

    pub fn stab_chain(&self) -> &StabChain {
        &self.chain
    }

    /// Membership via the stabilizer chain; works in either tier.
    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    /// The element table, built on first use.
    pub fn table(&self) -> Result<&ElementTable> {
        if !self.is_enumerable() {
            return Err(Error::NotEnumerable {
                order: self.order,
                threshold: self.threshold,
            });
        }
        Ok(self.table.get_or_init(|| ElementTable::build(self)))
    }

    pub fn index_of(&self, g: &Permutation) -> Result<Elt> {
        self.table()?
            .index_of(g)
            .ok_or_else(|| Error::NotMember(g.to_string()))
    }

    /// Conjugacy classes in canonical order of their representatives, each
    /// representative being the smallest member.
    pub fn classes(&self) -> Result<&[ConjugacyClass]> {
        let t = self.table()?;
        Ok(self.classes.get_or_init(|| conjugacy_classes(t)))
    }
}

/// One conjugacy class with a conjugating element for every member:
/// `rep^conjugators[k] == members[k]`.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub rep: Elt,
    pub members: Vec<Elt>,
    pub conjugators: Vec<Elt>,
}

fn conjugacy_classes(t: &ElementTable) -> Vec<ConjugacyClass> {
    let n = t.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n as Elt {
        if seen[x as usize] {
            continue;
        }
        seen[x as usize] = true;
        let mut members = vec![x];
        let mut conjugators = vec![IDENTITY];
        let mut k = 0;
        while k < members.len() {
            let (y, h) = (members[k], conjugators[k]);
            for &s in t.generators() {
                let z = t.conj(y, s);
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    members.push(z);
                    conjugators.push(t.mul(h, s));
                }
            }
            k += 1;
        }
        out.push(ConjugacyClass {
            rep: x,
            members,
            conjugators,
        });
    }
    out
}

/// Enumerated elements with index lookup and multiplication.
pub struct ElementTable {
    elements: Vec<Permutation>,
    orders: Vec<u32>,
    base: Vec<u32>,
    lookup: FxHashMap<Box<[u32]>, Elt>,
    inverse: Vec<Elt>,
    generators: Vec<Elt>,
    mul_table: Option<Vec<Elt>>,
}

impl ElementTable {
    fn build(group: &Group) -> Self {
        let mut elements = group.chain.elements();
        elements.sort_unstable();
        let base = group.chain.base();
        let mut lookup = FxHashMap::default();
        lookup.reserve(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let key: Box<[u32]> = base.iter().map(|&b| e.apply(b)).collect();
            lookup.insert(key, i as Elt);
        }
        let orders = elements.iter().map(|e| e.order() as u32).collect();
        let mut table = ElementTable {
            elements,
            orders,
            base,
            lookup,
            inverse: Vec::new(),
            generators: Vec::new(),
            mul_table: None,
        };
        table.inverse = table
            .elements
            .iter()
            .map(|e| table.index_of(&e.inverse()).expect("closed under inverse"))
            .collect();
        table.generators = group
            .generators
            .iter()
            .map(|g| table.index_of(g).expect("generator in group"))
            .filter(|&g| g != IDENTITY)
            .collect();
        if table.len() <= TABLE_LIMIT {
            table.mul_table = Some(table.build_mul_table());
        }
        table
    }

    /// Full table from a spanning tree: `a·b = (a·parent(b))·s`.
    fn build_mul_table(&self) -> Vec<Elt> {
        let n = self.len();
        let gens: Vec<Elt> = if self.generators.is_empty() {
            vec![IDENTITY]
        } else {
            self.generators.clone()
        };
        let right: Vec<Vec<Elt>> = (0..n as Elt)
            .map(|x| gens.iter().map(|&s| self.mul_slow(x, s)).collect())
            .collect();
        // BFS tree from the identity
        let mut parent = vec![(u32::MAX, 0usize); n];
        let mut order = vec![IDENTITY];
        parent[0] = (IDENTITY, 0);
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            for (si, &y) in right[x as usize].iter().enumerate() {
                if parent[y as usize].0 == u32::MAX {
                    parent[y as usize] = (x, si);
                    order.push(y);
                }
            }
            k += 1;
        }
        debug_assert_eq!(order.len(), n);
        let mut table = vec![0 as Elt; n * n];
        for a in 0..n {
            let row = &mut table[a * n..(a + 1) * n];
            row[0] = a as Elt;
            for &b in &order[1..] {
                let (pb, s) = parent[b as usize];
                row[b as usize] = right[row[pb as usize] as usize][s];
            }
        }
        table
    }

    fn mul_slow(&self, a: Elt, b: Elt) -> Elt {
        let (x, y) = (&self.elements[a as usize], &self.elements[b as usize]);
        let mut key = [0u32; 16];
        if self.base.len() <= key.len() {
            for (k, &pt) in self.base.iter().enumerate() {
                key[k] = y.apply(x.apply(pt));
            }
            self.lookup[&key[..self.base.len()]]
        } else {
            let key: Vec<u32> = self.base.iter().map(|&pt| y.apply(x.apply(pt))).collect();
            self.lookup[&key[..]]
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn element(&self, i: Elt) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, g: &Permutation) -> Option<Elt> {
        if g.degree() != self.elements[0].degree() {
            return None;
        }
        let key: Vec<u32> = self.base.iter().map(|&b| g.apply(b)).collect();
        let i = *self.lookup.get(&key[..])?;
        (self.elements[i as usize] == *g).then_some(i)
    }

    /// Indices of the group's non-identity generators.
    pub fn generators(&self) -> &[Elt] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        match &self.mul_table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inverse[a as usize]
    }

    /// `h⁻¹·x·h`
    #[inline]
    pub fn conj(&self, x: Elt, h: Elt) -> Elt {
        self.mul(self.mul(self.inv(h), x), h)
    }

    /// `[x, g] = x⁻¹·g⁻¹·x·g`
    #[inline]
    pub fn comm(&self, x: Elt, g: Elt) -> Elt {
        self.mul(self.inv(x), self.conj(x, g))
    }

    pub fn pow(&self, x: Elt, mut e: u64) -> Elt {
        let mut base = x;
        let mut acc = IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn order_of(&self, x: Elt) -> u64 {
        self.orders[x as usize] as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> GroupHandle {
        let cyc: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        Group::new(
            format!("S{n}"),
            n,
            vec![
                Permutation::parse_cycles("(1 2)", n).unwrap(),
                Permutation::parse_cycles(&format!("({})", cyc.join(" ")), n).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn table_matches_permutation_arithmetic() {
        let g = s(4);
        let t = g.table().unwrap();
        assert_eq!(t.len(), 24);
        assert!(t.element(IDENTITY).is_identity());
        for a in 0..24 {
            assert_eq!(t.mul(a, t.inv(a)), IDENTITY);
            for b in 0..24 {
                let prod = t.element(a).then(t.element(b));
                assert_eq!(t.element(t.mul(a, b)), &prod);
                assert_eq!(t.mul(a, b), t.mul_slow(a, b));
                let c = Permutation::commutator(t.element(a), t.element(b)).unwrap();
                assert_eq!(t.element(t.comm(a, b)), &c);
            }
        }
        let els = t.elements();
        assert!(els.windows(2).all(|w| w[0] < w[1]), "canonical order");
    }

    #[test]
    fn classes_of_s4() {
        let g = s(4);
        let classes = g.classes().unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        let t = g.table().unwrap();
        for c in classes {
            assert_eq!(c.members[0], c.rep);
            assert!(c.members.iter().all(|&m| m >= c.rep));
            for (&m, &h) in c.members.iter().zip(&c.conjugators) {
                assert_eq!(t.conj(c.rep, h), m);
            }
        }
    }

    #[test]
    fn threshold_gates_enumeration() {
        let gens = s(6).generators().to_vec();
        let g = Group::with_threshold("S6", 6, gens, 100).unwrap();
        assert_eq!(g.order(), 720);
        assert!(matches!(g.table(), Err(Error::NotEnumerable { order: 720, .. })));
        assert!(g.contains(&Permutation::parse_cycles("(1 6)", 6).unwrap()));
    }

    #[test]
    fn rejects_degree_mismatch() {
        let err = Group::new("bad", 3, vec![Permutation::identity(4)]);
        assert!(matches!(err, Err(Error::DegreeMismatch { .. })));
    }
}
