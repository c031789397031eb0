//! Deterministic group constructors and the group file format.
//!
//! Every recipe yields the same generators on every run. Semidirect products
//! `F_p^k ⋊ C_m` act on the disjoint union of the base's regular action (by
//! translations and the twisting matrix) and an `m`-cycle for the
//! complement, so the degree is `p^k + m` and the action is faithful even
//! when the twist has a kernel.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, p_part};
use crate::error::{Error, Result};
use crate::group::{Elt, Group, GroupHandle, DEFAULT_ENUMERATION_THRESHOLD};
use crate::par;
use crate::perm::Permutation;
use crate::structure::is_nilpotent;
use crate::subgroup::{commutator_subgroup, Subgroup};

/// Degree cap for built-in constructions.
pub const MAX_DEGREE: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Cyclic { n: u32 },
    /// Dihedral group of order `2n` on `n` points.
    Dihedral { n: u32 },
    Symmetric { n: u32 },
    Alternating { n: u32 },
    ElementaryAbelian { p: u32, k: u32 },
    DirectProduct { left: Box<Recipe>, right: Box<Recipe> },
    /// `F_p^k ⋊ C_m`, the generator of `C_m` acting by `x ↦ x·matrix`
    /// (row-major, entries mod `p`).
    Semidirect { p: u32, k: u32, matrix: Vec<u32>, m: u32 },
    Sl2 { p: u32 },
    Psl2 { p: u32 },
    /// Generalized quaternion group of the given order (a power of 2, ≥ 8).
    Quaternion { order: u32 },
    FromFile { path: PathBuf },
}

/// Known structure attached to a constructed group.
#[derive(Clone, Debug, Default)]
pub struct Metadata {
    /// Generators of a normal base subgroup, for split extensions.
    pub base: Option<Vec<Permutation>>,
    /// Generators of a complement to the base.
    pub complement: Option<Vec<Permutation>>,
    pub expected_order: Option<u64>,
    pub expected_r_star: Option<usize>,
    pub expected_gamma_inf_order: Option<u64>,
    pub expected_rank_gamma_inf: Option<usize>,
}

impl Metadata {
    pub fn has_hall_data(&self) -> bool {
        self.base.is_some() && self.complement.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: String,
    pub recipe: Recipe,
    pub group: GroupHandle,
    pub meta: Metadata,
}

impl CatalogEntry {
    /// A Hall `q′`-subgroup `A_{q′}·B_{q′}` built from the base `A` and
    /// complement `B`, both nilpotent of coprime orders. `None` without that
    /// metadata.
    pub fn hall_complement(&self, q: u64) -> Result<Option<Subgroup>> {
        let (Some(base), Some(comp)) = (&self.meta.base, &self.meta.complement) else {
            return Ok(None);
        };
        let g = &self.group;
        let t = g.table()?;
        let mut gens: Vec<Elt> = Vec::new();
        for part in [g.closure(base)?, g.closure(comp)?] {
            gens.extend(
                part.elements()
                    .iter()
                    .copied()
                    .filter(|&x| t.order_of(x) % q != 0),
            );
        }
        let hall = Subgroup::generated_by(g, &gens)?;
        let n = g.order();
        if hall.order() as u64 != n / p_part(n, q) {
            return Err(Error::Internal(format!(
                "{}: Hall {q}'-subgroup has order {} instead of {}",
                self.label,
                hall.order(),
                n / p_part(n, q)
            )));
        }
        Ok(Some(hall))
    }
}

fn perm(images: Vec<u32>) -> Permutation {
    Permutation::from_images_unchecked(images)
}

fn check_degree(d: usize) -> Result<()> {
    if d > MAX_DEGREE {
        Err(Error::InvalidParameter(format!("degree {d} exceeds cap {MAX_DEGREE}")))
    } else {
        Ok(())
    }
}

fn cycle(n: u32) -> Permutation {
    perm((0..n).map(|i| (i + 1) % n).collect())
}

fn require_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not prime")))
    }
}

/// Vectors of `F_p^k` indexed by `Σ xᵢ pⁱ`.
struct VectorSpace {
    p: u32,
    k: u32,
}

impl VectorSpace {
    fn size(&self) -> u32 {
        self.p.pow(self.k)
    }
    fn decode(&self, mut x: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }
    fn encode(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }
    fn translation(&self, i: u32) -> Vec<u32> {
        (0..self.size())
            .map(|x| {
                let mut v = self.decode(x);
                v[i as usize] = (v[i as usize] + 1) % self.p;
                self.encode(&v)
            })
            .collect()
    }
    /// `x ↦ x·M` for a row-major `k×k` matrix.
    fn linear(&self, m: &[u32]) -> Vec<u32> {
        let k = self.k as usize;
        (0..self.size())
            .map(|x| {
                let v = self.decode(x);
                let w: Vec<u32> = (0..k)
                    .map(|j| (0..k).map(|i| v[i] * m[i * k + j]).sum::<u32>() % self.p)
                    .collect();
                self.encode(&w)
            })
            .collect()
    }
}

fn mat_mul(a: &[u32], b: &[u32], k: usize, p: u32) -> Vec<u32> {
    (0..k * k)
        .map(|ij| {
            let (i, j) = (ij / k, ij % k);
            (0..k).map(|l| a[i * k + l] * b[l * k + j]).sum::<u32>() % p
        })
        .collect()
}

fn mat_pow_is_identity(m: &[u32], k: usize, p: u32, e: u32) -> bool {
    let mut acc: Vec<u32> = (0..k * k).map(|ij| u32::from(ij / k == ij % k)).collect();
    for _ in 0..e {
        acc = mat_mul(&acc, m, k, p);
    }
    acc.iter().enumerate().all(|(ij, &x)| x == u32::from(ij / k == ij % k))
}

/// `F_p^k ⋊ C_m` generators: translations, then the twist.
fn semidirect(p: u32, k: u32, matrix: &[u32], m: u32) -> Result<(usize, Vec<Permutation>, Vec<Permutation>)> {
    require_prime(p)?;
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("semidirect needs k ≥ 1 and m ≥ 1".into()));
    }
    let ku = k as usize;
    if matrix.len() != ku * ku || matrix.iter().any(|&x| x >= p) {
        return Err(Error::InvalidParameter(format!("matrix must have {} entries below {p}", ku * ku)));
    }
    if !mat_pow_is_identity(matrix, ku, p, m) {
        return Err(Error::InvalidParameter(format!("matrix order does not divide {m}")));
    }
    let vs = VectorSpace { p, k };
    let base_n = vs.size();
    let degree = (base_n + m) as usize;
    check_degree(degree)?;
    let pad = |mut images: Vec<u32>, tail: Vec<u32>| {
        images.extend(tail.into_iter().map(|x| x + base_n));
        perm(images)
    };
    let identity_tail: Vec<u32> = (0..m).collect();
    let base: Vec<Permutation> = (0..k).map(|i| pad(vs.translation(i), identity_tail.clone())).collect();
    let twist = pad(vs.linear(matrix), cycle(m).images().to_vec());
    if matrix_is_singular(&vs, &twist) {
        return Err(Error::InvalidParameter("matrix is not invertible".into()));
    }
    Ok((degree, base, vec![twist]))
}

fn matrix_is_singular(vs: &VectorSpace, twist: &Permutation) -> bool {
    let mut seen = vec![false; vs.size() as usize];
    (0..vs.size()).any(|x| std::mem::replace(&mut seen[twist.apply(x) as usize], true))
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero element")
}

/// Row-vector action of 2×2 matrices on the nonzero vectors of `F_p²`,
/// vector `(x, y)` at index `x·p + y − 1`.
fn sl2_action(p: u32, m: [u32; 4]) -> Permutation {
    let n = p * p - 1;
    perm(
        (0..n)
            .map(|i| {
                let v = i + 1;
                let (x, y) = (v / p, v % p);
                let nx = (x * m[0] + y * m[2]) % p;
                let ny = (x * m[1] + y * m[3]) % p;
                nx * p + ny - 1
            })
            .collect(),
    )
}

/// Action on the `p + 1` lines of `F_p²`: `(1, y)` at index `y`, `(0, 1)` at `p`.
fn psl2_action(p: u32, m: [u32; 4]) -> Permutation {
    perm(
        (0..=p)
            .map(|i| {
                let (x, y) = if i < p { (1, i) } else { (0, 1) };
                let nx = (x * m[0] + y * m[2]) % p;
                let ny = (x * m[1] + y * m[3]) % p;
                if nx == 0 {
                    p
                } else {
                    ny * inv_mod(nx, p) % p
                }
            })
            .collect(),
    )
}

const UPPER: [u32; 4] = [1, 1, 0, 1];

const LOWER: [u32; 4] = [1, 0, 1, 1];

fn quaternion(order: u32) -> Result<Vec<Permutation>> {
    if order < 8 || !order.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("quaternion order {order} must be a power of 2, at least 8")));
    }
    let half = order / 2;
    let h = half / 2;
    // element x^a y^b at index a + half·b
    let mul = |(a, b): (u32, u32), (c, d): (u32, u32)| -> (u32, u32) {
        match (b, d) {
            (0, _) => ((a + c) % half, d),
            (1, 0) => ((a + half - c) % half, 1),
            _ => ((a + half - c + h) % half, 0),
        }
    };
    let right = |g: (u32, u32)| {
        perm(
            (0..order)
                .map(|z| {
                    let (a, b) = mul((z % half, z / half), g);
                    a + half * b
                })
                .collect(),
        )
    };
    Ok(vec![right((1, 0)), right((0, 1))])
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Generators and closed-form order for a recipe.
fn generators(recipe: &Recipe) -> Result<(usize, Vec<Permutation>, Option<u64>, Metadata)> {
    let mut meta = Metadata::default();
    let (degree, gens, order) = match recipe {
        Recipe::Cyclic { n } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("cyclic order must be ≥ 1".into()));
            }
            (*n as usize, vec![cycle(*n)], Some(*n as u64))
        }
        Recipe::Dihedral { n } => {
            if *n < 3 {
                return Err(Error::InvalidParameter("dihedral needs n ≥ 3 points".into()));
            }
            let refl = perm((0..*n).map(|i| (n - i) % n).collect());
            (*n as usize, vec![cycle(*n), refl], Some(2 * *n as u64))
        }
        Recipe::Symmetric { n } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("degree must be ≥ 1".into()));
            }
            let n = *n;
            let mut gens = vec![cycle(n)];
            if n > 1 {
                let mut t: Vec<u32> = (0..n).collect();
                t.swap(0, 1);
                gens.insert(0, perm(t));
            }
            (n as usize, gens, Some(factorial(n as u64)))
        }
        Recipe::Alternating { n } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("degree must be ≥ 1".into()));
            }
            let n = *n;
            let gens: Vec<Permutation> = (2..n)
                .map(|i| {
                    let mut t: Vec<u32> = (0..n).collect();
                    t[0] = 1;
                    t[1] = i;
                    t[i as usize] = 0;
                    perm(t)
                })
                .collect();
            let order = if n <= 2 { 1 } else { factorial(n as u64) / 2 };
            (n as usize, gens, Some(order))
        }
        Recipe::ElementaryAbelian { p, k } => {
            require_prime(*p)?;
            if *k == 0 {
                return Err(Error::InvalidParameter("rank must be ≥ 1".into()));
            }
            let vs = VectorSpace { p: *p, k: *k };
            check_degree(vs.size() as usize)?;
            let gens = (0..*k).map(|i| perm(vs.translation(i))).collect();
            (vs.size() as usize, gens, Some((*p as u64).pow(*k)))
        }
        Recipe::DirectProduct { left, right } => {
            let (dl, gl, ol, _) = generators(left)?;
            let (dr, gr, or, _) = generators(right)?;
            let degree = dl + dr;
            check_degree(degree)?;
            let mut gens = Vec::new();
            for g in gl {
                let mut images = g.images().to_vec();
                images.extend(dl as u32..degree as u32);
                gens.push(perm(images));
            }
            for g in gr {
                let mut images: Vec<u32> = (0..dl as u32).collect();
                images.extend(g.images().iter().map(|&x| x + dl as u32));
                gens.push(perm(images));
            }
            (degree, gens, ol.zip(or).map(|(a, b)| a * b))
        }
        Recipe::Semidirect { p, k, matrix, m } => {
            let (degree, base, comp) = semidirect(*p, *k, matrix, *m)?;
            let mut gens = base.clone();
            gens.extend(comp.iter().cloned());
            meta.base = Some(base);
            meta.complement = Some(comp);
            (degree, gens, Some((*p as u64).pow(*k) * *m as u64))
        }
        Recipe::Sl2 { p } => {
            require_prime(*p)?;
            let p = *p;
            let gens = vec![sl2_action(p, UPPER), sl2_action(p, LOWER)];
            let q = p as u64;
            ((p * p - 1) as usize, gens, Some((q * q - 1) * q))
        }
        Recipe::Psl2 { p } => {
            require_prime(*p)?;
            let p = *p;
            let gens = vec![psl2_action(p, UPPER), psl2_action(p, LOWER)];
            let q = p as u64;
            let order = (q * q - 1) * q / if p == 2 { 1 } else { 2 };
            ((p + 1) as usize, gens, Some(order))
        }
        Recipe::Quaternion { order } => (*order as usize, quaternion(*order)?, Some(*order as u64)),
        Recipe::FromFile { path } => {
            let loaded = read_group_file(path)?;
            (loaded.degree, loaded.generators, None)
        }
    };
    meta.expected_order = order;
    Ok((degree, gens, order, meta))
}

/// Builds a recipe and verifies its closed-form order and split-extension
/// metadata.
pub fn build(label: &str, recipe: &Recipe) -> Result<CatalogEntry> {
    build_with_threshold(label, recipe, DEFAULT_ENUMERATION_THRESHOLD)
}

pub fn build_with_threshold(label: &str, recipe: &Recipe, threshold: usize) -> Result<CatalogEntry> {
    let (degree, gens, order, meta) = generators(recipe)?;
    let group = Group::with_threshold(label, degree, gens, threshold)?;
    if let Some(expected) = order {
        if group.order() != expected {
            return Err(Error::Internal(format!(
                "{label}: order {} differs from closed form {expected}",
                group.order()
            )));
        }
    }
    let entry = CatalogEntry {
        label: label.to_string(),
        recipe: recipe.clone(),
        group,
        meta,
    };
    verify_split_metadata(&entry)?;
    Ok(entry)
}

fn verify_split_metadata(e: &CatalogEntry) -> Result<()> {
    let (Some(base), Some(comp)) = (&e.meta.base, &e.meta.complement) else {
        return Ok(());
    };
    if !e.group.is_enumerable() {
        return Ok(());
    }
    let whole = Subgroup::whole(&e.group)?;
    let a = e.group.closure(base)?;
    let b = e.group.closure(comp)?;
    let fail = |msg: &str| Err(Error::Internal(format!("{}: {msg}", e.label)));
    if !a.is_normal_in(&whole) {
        return fail("base is not normal");
    }
    if a.order() * b.order() != whole.order() || !a.intersection(&b)?.is_trivial() {
        return fail("base and complement do not split the group");
    }
    if num_integer::gcd(a.order(), b.order()) != 1 {
        return fail("base and complement orders are not coprime");
    }
    if !is_nilpotent(&a)? || !is_nilpotent(&b)? {
        return fail("base and complement must be nilpotent");
    }
    Ok(())
}

/// `A⟨b⟩`: `A = F_3^{r+1}` with `b` of order 2 acting as `x ↦ −x`.
pub fn inverted_elementary_abelian(r: u32) -> Result<CatalogEntry> {
    let k = r + 1;
    let ku = k as usize;
    let matrix: Vec<u32> = (0..ku * ku).map(|ij| if ij / ku == ij % ku { 2 } else { 0 }).collect();
    let recipe = Recipe::Semidirect { p: 3, k, matrix, m: 2 };
    let mut e = build(&format!("A<b>(r={r})"), &recipe)?;
    e.meta.expected_r_star = Some(k as usize);
    e.meta.expected_gamma_inf_order = Some(3u64.pow(k));
    e.meta.expected_rank_gamma_inf = Some(k as usize);

    // b fixes no nontrivial element of A
    let t = e.group.table()?;
    let a = e.group.closure(e.meta.base.as_ref().unwrap())?;
    let b = t.index_of(&e.meta.complement.as_ref().unwrap()[0]).unwrap();
    if a.elements().iter().any(|&x| x != crate::group::IDENTITY && t.conj(x, b) == x) {
        return Err(Error::Internal("b has a nontrivial fixed point on A".into()));
    }
    Ok(e)
}

/// `SL₂(p)` with `g = diag(ζ⁻¹, ζ)` and the upper unitriangular subgroup `T`.
pub struct Sl2Pair {
    pub entry: CatalogEntry,
    pub zeta: u32,
    pub g: Elt,
    pub t: Subgroup,
}

/// Smallest `ζ ∈ F_p^×` with `ζ² ≠ 1`.
pub fn sl2_zeta(p: u32) -> Option<u32> {
    (2..p).find(|&z| z * z % p != 1)
}

pub fn sl2_diagonal_pair(p: u32) -> Result<Sl2Pair> {
    require_prime(p)?;
    let zeta = sl2_zeta(p).ok_or_else(|| {
        Error::InvalidParameter(format!("F_{p} has no element ζ with ζ² ≠ 1"))
    })?;
    let entry = build(&format!("SL2({p})"), &Recipe::Sl2 { p })?;
    let group = &entry.group;
    let g_perm = sl2_action(p, [inv_mod(zeta, p), 0, 0, zeta]);
    let g = group.index_of(&g_perm)?;
    let t = group.closure(&[sl2_action(p, UPPER)])?;
    let tt = group.table()?;

    let gsub = Subgroup::generated_by(group, &[g])?;
    if !t.is_normalized_by(&gsub) {
        return Err(Error::Internal("g does not normalize T".into()));
    }
    if t.elements().iter().any(|&x| x != crate::group::IDENTITY && tt.conj(x, g) == x) {
        return Err(Error::Internal("C_T(g) is not trivial".into()));
    }
    if commutator_subgroup(&t, &gsub)? != t {
        return Err(Error::Internal("[T, g] differs from T".into()));
    }
    Ok(Sl2Pair { entry, zeta, g, t })
}

/// The built-in catalog: `(label, recipe)` in canonical order.
pub fn default_recipes() -> Vec<(String, Recipe)> {
    use Recipe::*;
    let mut out: Vec<(String, Recipe)> = Vec::new();
    for n in 1..=60 {
        out.push((format!("C{n}"), Cyclic { n }));
    }
    for n in 3..=30 {
        out.push((format!("D{n}"), Dihedral { n }));
    }
    for n in 2..=6 {
        out.push((format!("S{n}"), Symmetric { n }));
    }
    for n in 3..=6 {
        out.push((format!("A{n}"), Alternating { n }));
    }
    for p in [2, 3, 5] {
        for k in 2..=4 {
            out.push((format!("C{p}^{k}"), ElementaryAbelian { p, k }));
        }
    }
    for order in [8, 16, 32] {
        out.push((format!("Q{order}"), Quaternion { order }));
    }
    for p in [5, 7, 11] {
        out.push((format!("SL2({p})"), Sl2 { p }));
        out.push((format!("PSL2({p})"), Psl2 { p }));
    }
    let b = |r: Recipe| Box::new(r);
    let products: [(&str, Recipe, Recipe); 10] = [
        ("C2xS3", Cyclic { n: 2 }, Symmetric { n: 3 }),
        ("S3xS3", Symmetric { n: 3 }, Symmetric { n: 3 }),
        ("D4xC3", Dihedral { n: 4 }, Cyclic { n: 3 }),
        ("Q8xC3", Quaternion { order: 8 }, Cyclic { n: 3 }),
        ("A4xC2", Alternating { n: 4 }, Cyclic { n: 2 }),
        ("S4xC2", Symmetric { n: 4 }, Cyclic { n: 2 }),
        ("C2xQ8", Cyclic { n: 2 }, Quaternion { order: 8 }),
        ("D4xC2", Dihedral { n: 4 }, Cyclic { n: 2 }),
        ("S3xC5", Symmetric { n: 3 }, Cyclic { n: 5 }),
        ("A5xC2", Alternating { n: 5 }, Cyclic { n: 2 }),
    ];
    for (label, l, r) in products {
        out.push((label.to_string(), DirectProduct { left: b(l), right: b(r) }));
    }
    for (label, p, k, matrix, m) in semidirect_table() {
        out.push((label.to_string(), Semidirect { p, k, matrix, m }));
    }
    out
}

/// Ten split extensions `F_p^k ⋊ C_m` with nontrivial, coprime actions.
fn semidirect_table() -> Vec<(&'static str, u32, u32, Vec<u32>, u32)> {
    vec![
        ("C7:C3", 7, 1, vec![2], 3),
        ("C5:C4", 5, 1, vec![2], 4),
        ("C11:C5", 11, 1, vec![3], 5),
        ("C3:C4", 3, 1, vec![2], 4),
        ("C2^2:C3", 2, 2, vec![0, 1, 1, 1], 3),
        ("C3^2:C4", 3, 2, vec![0, 2, 1, 0], 4),
        ("C3^2:C8", 3, 2, vec![0, 1, 1, 1], 8),
        ("C5^2:C3", 5, 2, vec![0, 1, 4, 4], 3),
        ("C2^3:C7", 2, 3, vec![0, 1, 0, 0, 0, 1, 1, 1, 0], 7),
        ("C2^4:C15", 2, 4, vec![0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0], 15),
    ]
}

/// Default catalog plus the constructed examples, restricted to `max_order`.
pub fn default_catalog(max_order: u64, threshold: usize) -> Result<Vec<CatalogEntry>> {
    let recipes: Vec<(String, Recipe)> = default_recipes()
        .into_iter()
        .filter(|(_, r)| recipe_order(r).is_none_or(|o| o <= max_order))
        .collect();
    let mut entries: Vec<CatalogEntry> = par::map(&recipes, |(label, r)| build_with_threshold(label, r, threshold))
        .into_iter()
        .collect::<Result<_>>()?;
    for r in 0..=3 {
        if 2 * 3u64.pow(r + 1) <= max_order {
            entries.push(inverted_elementary_abelian(r)?);
        }
    }
    Ok(entries)
}

/// Closed-form order without building the group.
pub fn recipe_order(recipe: &Recipe) -> Option<u64> {
    use Recipe::*;
    Some(match recipe {
        Cyclic { n } => *n as u64,
        Dihedral { n } => 2 * *n as u64,
        Symmetric { n } => factorial(*n as u64),
        Alternating { n } => {
            if *n <= 2 {
                1
            } else {
                factorial(*n as u64) / 2
            }
        }
        ElementaryAbelian { p, k } => (*p as u64).pow(*k),
        DirectProduct { left, right } => recipe_order(left)? * recipe_order(right)?,
        Semidirect { p, k, m, .. } => (*p as u64).pow(*k) * *m as u64,
        Sl2 { p } => {
            let q = *p as u64;
            (q * q - 1) * q
        }
        Psl2 { p } => {
            let q = *p as u64;
            (q * q - 1) * q / if q == 2 { 1 } else { 2 }
        }
        Quaternion { order } => *order as u64,
        FromFile { .. } => return None,
    })
}

/// Parses a recipe string such as `S4`, `D5`, `C2^3`, `SL2(5)`, `Q16` or
/// `A<b>(r=2)`; anything naming an existing file is loaded from disk.
pub fn build_named(name: &str) -> Result<CatalogEntry> {
    let path = Path::new(name);
    if path.is_file() {
        let loaded = load_group(path)?;
        return Ok(CatalogEntry {
            label: loaded.group.label().to_string(),
            recipe: Recipe::FromFile {
                path: path.to_path_buf(),
            },
            group: loaded.group,
            meta: Metadata::default(),
        });
    }
    if let Some(r) = name.strip_prefix("A<b>(r=").and_then(|s| s.strip_suffix(')')) {
        let r = r.parse().map_err(|_| Error::parse(None, format!("bad r in {name:?}")))?;
        return inverted_elementary_abelian(r);
    }
    if let Some((label, recipe)) = default_recipes().into_iter().find(|(l, _)| l == name) {
        return build(&label, &recipe);
    }
    let num = |s: &str| -> Result<u32> { s.parse().map_err(|_| Error::parse(None, format!("unknown group {name:?}"))) };
    let recipe = if let Some(rest) = name.strip_prefix("PSL2(").and_then(|s| s.strip_suffix(')')) {
        Recipe::Psl2 { p: num(rest)? }
    } else if let Some(rest) = name.strip_prefix("SL2(").and_then(|s| s.strip_suffix(')')) {
        Recipe::Sl2 { p: num(rest)? }
    } else if let Some((p, k)) = name.strip_prefix('C').and_then(|s| s.split_once('^')) {
        Recipe::ElementaryAbelian { p: num(p)?, k: num(k)? }
    } else if let Some(rest) = name.strip_prefix('C') {
        Recipe::Cyclic { n: num(rest)? }
    } else if let Some(rest) = name.strip_prefix('D') {
        Recipe::Dihedral { n: num(rest)? }
    } else if let Some(rest) = name.strip_prefix('S') {
        Recipe::Symmetric { n: num(rest)? }
    } else if let Some(rest) = name.strip_prefix('A') {
        Recipe::Alternating { n: num(rest)? }
    } else if let Some(rest) = name.strip_prefix('Q') {
        Recipe::Quaternion { order: num(rest)? }
    } else {
        return Err(Error::parse(None, format!("unknown group {name:?}")));
    };
    build(name, &recipe)
}

/// Raw contents of a group file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFile {
    pub degree: usize,
    pub label: Option<String>,
    pub generators: Vec<Permutation>,
}

pub struct LoadedGroup {
    pub group: GroupHandle,
    pub label: Option<String>,
    pub warnings: Vec<String>,
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    let mut degree: Option<usize> = None;
    let mut label = None;
    let mut generators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(Some(line_no), format!("expected `key: value`, got {line:?}")))?;
        let value = value.trim();
        match key.trim() {
            "degree" => {
                if degree.is_some() {
                    return Err(Error::parse(Some(line_no), "degree given twice"));
                }
                if !generators.is_empty() {
                    return Err(Error::parse(Some(line_no), "degree must precede generators"));
                }
                let d: usize = value
                    .parse()
                    .map_err(|_| Error::parse(Some(line_no), format!("bad degree {value:?}")))?;
                if d == 0 {
                    return Err(Error::parse(Some(line_no), "degree must be at least 1"));
                }
                degree = Some(d);
            }
            "gen" => {
                let d = degree.ok_or_else(|| Error::parse(Some(line_no), "generator before degree"))?;
                let g = Permutation::parse_cycles(value, d).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::parse(Some(line_no), msg),
                    other => Error::parse(Some(line_no), other.to_string()),
                })?;
                generators.push(g);
            }
            "label" => label = Some(value.to_string()),
            other => return Err(Error::parse(Some(line_no), format!("unknown key {other:?}"))),
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(None, "missing `degree:` line"))?;
    Ok(GroupFile {
        degree,
        label,
        generators,
    })
}

pub fn format_group_file(file: &GroupFile) -> String {
    let mut out = String::new();
    writeln!(out, "degree: {}", file.degree).unwrap();
    if let Some(label) = &file.label {
        writeln!(out, "label: {label}").unwrap();
    }
    for g in &file.generators {
        writeln!(out, "gen: {g}").unwrap();
    }
    out
}

fn read_group_file(path: &Path) -> Result<GroupFile> {
    parse_group_file(&std::fs::read_to_string(path)?)
}

pub fn load_group(path: &Path) -> Result<LoadedGroup> {
    load_group_with_threshold(path, DEFAULT_ENUMERATION_THRESHOLD)
}

pub fn load_group_with_threshold(path: &Path, threshold: usize) -> Result<LoadedGroup> {
    let file = read_group_file(path)?;
    let label = file
        .label
        .clone()
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let group = Group::with_threshold(label, file.degree, file.generators, threshold)?;
    let mut warnings = Vec::new();
    if !group.is_enumerable() {
        warnings.push(format!(
            "group of order {} exceeds the enumeration threshold {threshold}; only order and membership are available",
            group.order()
        ));
    }
    Ok(LoadedGroup {
        group,
        label: file.label,
        warnings,
    })
}

pub fn save_group(group: &Group, path: &Path) -> Result<()> {
    let file = GroupFile {
        degree: group.degree(),
        label: Some(group.label().to_string()),
        generators: group.generators().to_vec(),
    };
    std::fs::write(path, format_group_file(&file))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_orders() {
        for (label, recipe) in default_recipes() {
            let e = build(&label, &recipe).unwrap();
            assert_eq!(Some(e.group.order()), recipe_order(&recipe), "{label}");
        }
    }

    #[test]
    fn small_examples() {
        let d5 = build("D5", &Recipe::Dihedral { n: 5 }).unwrap();
        assert_eq!((d5.group.order(), d5.group.degree()), (10, 5));
        let sl = build("SL2(5)", &Recipe::Sl2 { p: 5 }).unwrap();
        assert_eq!((sl.group.order(), sl.group.degree()), (120, 24));
        let ab = inverted_elementary_abelian(1).unwrap();
        assert_eq!(ab.group.order(), 18);
        let s3 = inverted_elementary_abelian(0).unwrap();
        assert_eq!(s3.group.order(), 6);
        assert!(!Subgroup::whole(&s3.group).unwrap().is_abelian());
        assert_eq!(inverted_elementary_abelian(3).unwrap().group.order(), 162);
    }

    #[test]
    fn sl2_pairs() {
        assert!(sl2_diagonal_pair(3).is_err());
        assert!(sl2_diagonal_pair(2).is_err());
        let pair = sl2_diagonal_pair(5).unwrap();
        let t = pair.entry.group.table().unwrap();
        assert_eq!(t.order_of(pair.g), 4);
        assert_eq!(pair.t.order(), 5);
        let pair = sl2_diagonal_pair(7).unwrap();
        assert_eq!(pair.t.order(), 7);
    }

    #[test]
    fn invalid_parameters() {
        assert!(build("x", &Recipe::ElementaryAbelian { p: 4, k: 2 }).is_err());
        assert!(build("x", &Recipe::Dihedral { n: 2 }).is_err());
        assert!(build("x", &Recipe::Quaternion { order: 12 }).is_err());
        // matrix of order 3 used with m = 2
        let bad = Recipe::Semidirect { p: 7, k: 1, matrix: vec![2], m: 2 };
        assert!(build("x", &bad).is_err());
    }

    #[test]
    fn hall_complements() {
        let e = build("C3:C4", &Recipe::Semidirect { p: 3, k: 1, matrix: vec![2], m: 4 }).unwrap();
        assert_eq!(e.group.order(), 12);
        assert_eq!(e.hall_complement(2).unwrap().unwrap().order(), 3);
        assert_eq!(e.hall_complement(3).unwrap().unwrap().order(), 4);
        let s4 = build("S4", &Recipe::Symmetric { n: 4 }).unwrap();
        assert!(s4.hall_complement(2).unwrap().is_none());
    }

    #[test]
    fn group_file_parsing() {
        let f = parse_group_file("degree: 3\ngen: (1 2)\ngen: (1 2 3)\n").unwrap();
        let g = Group::new("S3", f.degree, f.generators).unwrap();
        assert_eq!(g.order(), 6);
        let err = parse_group_file("degree: 3\n# comment\ngen: (1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(3), .. }), "{err}");
        let f = parse_group_file("degree: 4\nlabel: trivial\ngen: ()\n").unwrap();
        assert_eq!(Group::new("t", f.degree, f.generators).unwrap().order(), 1);
        assert!(parse_group_file("gen: (1 2)\n").is_err());
        assert!(parse_group_file("degree: 2\ngen: (1 3)\n").is_err());
    }

    #[test]
    fn recipe_strings() {
        for (s, order) in [("S4", 24), ("D5", 10), ("C2^3", 8), ("SL2(5)", 120), ("PSL2(7)", 168), ("Q16", 16), ("A<b>(r=2)", 54), ("C7:C3", 21), ("C12", 12)] {
            assert_eq!(build_named(s).unwrap().group.order(), order, "{s}");
        }
        assert!(build_named("Z9").is_err());
    }
}
