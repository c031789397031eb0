//! Permutations on `{0, …, n-1}` and the commutator calculus built on them.
//!
//! Products are written left to right and applied left first: `p.compose(q)`
//! sends `i` to `q(p(i))`. Conjugation is `x^g = g⁻¹·x·g` and the commutator
//! is `[x, g] = x⁻¹·x^g`. Every other module relies on this convention.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image array.
///
/// Ordering is lexicographic on the image array, which is the canonical
/// element order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} occurs twice"
                )));
            }
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} out of range for degree {degree}",
                        a.max(b) + 1
                    )));
                }
                if std::mem::replace(&mut touched[a as usize], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears in more than one cycle",
                        a + 1
                    )));
                }
                images[a as usize] = b;
            }
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self` then `other`: the result maps `i` to `other(self(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    /// Unchecked form of [`compose`](Self::compose); panics on mismatched degree.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// `g⁻¹·self·g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // x^g sends g(i) to g(x(i))
        let mut images = vec![0u32; self.degree()];
        for (i, &xi) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[xi as usize];
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// `[x, g] = x⁻¹·g⁻¹·x·g`.
    pub fn commutator(x: &Permutation, g: &Permutation) -> Result<Permutation> {
        x.check_degree(g)?;
        Ok(x.inverse().then(&x.conjugate_by(g)))
    }

    /// `[x, g, …, g]` with `g` repeated `n` times, left-normed.
    pub fn left_normed_commutator(x: &Permutation, g: &Permutation, n: usize) -> Result<Permutation> {
        if n == 0 {
            return Err(Error::ZeroCommutatorLength);
        }
        let mut acc = Permutation::commutator(x, g)?;
        for _ in 1..n {
            acc = Permutation::commutator(&acc, g)?;
        }
        Ok(acc)
    }

    /// Non-trivial cycles, each starting at its smallest point, ordered by
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u32);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"` or `"()"`.
    /// Whitespace is insignificant; commas are accepted as separators.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::parse(None, "empty cycle notation, use \"()\" for the identity"));
        }
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        let mut number = String::new();

        fn flush(number: &mut String, current: &mut Option<Vec<u32>>, degree: usize) -> Result<()> {
            if number.is_empty() {
                return Ok(());
            }
            let Some(cycle) = current.as_mut() else {
                return Err(Error::parse(None, format!("point {number} outside parentheses")));
            };
            let point: usize = number
                .parse()
                .map_err(|_| Error::parse(None, format!("bad point {number:?}")))?;
            if point == 0 || point > degree {
                return Err(Error::parse(
                    None,
                    format!("point {point} out of range 1..={degree}"),
                ));
            }
            cycle.push(point as u32 - 1);
            number.clear();
            Ok(())
        }

        for ch in text.chars() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(Error::parse(None, "nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut number, &mut current, degree)?;
                    match current.take() {
                        Some(c) => cycles.push(c),
                        None => return Err(Error::parse(None, "unmatched ')'")),
                    }
                }
                c if c.is_ascii_digit() => number.push(c),
                c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current, degree)?,
                c => return Err(Error::parse(None, format!("unexpected character {c:?}"))),
            }
        }
        if current.is_some() {
            return Err(Error::parse(None, "unclosed '('"));
        }
        let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs).map_err(|e| Error::parse(None, e.to_string()))
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images.into_vec()
    }
}

/// 1-based cycle notation.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{{{}; deg {}}}", self, self.degree())
    }
}
