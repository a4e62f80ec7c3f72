//! Dense permutations of `{0..n-1}`.
//!
//! Products are read left to right: `a * b` applies `a` first, then `b`,
//! so `(a * b).apply(i) == b.apply(a.apply(i))`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Validates that `images` is a bijection on `0..images.len()`.
    pub fn from_images<I: Into<usize> + Copy>(images: &[I]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::NotAPermutation("degree must be at least 1".into()));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for (i, &img) in images.iter().enumerate() {
            let v: usize = img.into();
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {v} of point {i} is out of range"
                )));
            }
            if seen[v] {
                return Err(Error::NotAPermutation(format!("image {v} appears twice")));
            }
            seen[v] = true;
            out.push(v as u32);
        }
        Ok(Permutation { images: out })
    }

    /// Caller guarantees bijectivity.
    pub(crate) fn from_vec_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(&images.iter().map(|&x| x as usize).collect::<Vec<_>>()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(Error::PointOutOfRange { point: pt, degree });
                }
                if touched[pt] {
                    return Err(Error::Parse(format!("point {pt} occurs in more than one cycle")));
                }
                touched[pt] = true;
                images[pt] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; commas are accepted as separators.
    /// The empty string and `()` denote the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
            let body = &open[..close];
            let cycle = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self` then `other`; errors on mismatched degrees.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `y^-1 * self * y`.
    pub fn conjugate_by(&self, y: &Permutation) -> Permutation {
        // (y^-1 x y)(y(i)) = y(x(i))
        let mut out = vec![0u32; self.images.len()];
        for (i, &xi) in self.images.iter().enumerate() {
            out[y.images[i] as usize] = y.images[xi as usize];
        }
        Permutation { images: out }
    }

    pub fn pow(&self, exp: u64) -> Permutation {
        // Cycle-wise: every point moves `exp` steps along its cycle.
        let n = self.images.len();
        let mut out = vec![0u32; n];
        let mut done = vec![false; n];
        let mut cycle = Vec::new();
        for start in 0..n {
            if done[start] {
                continue;
            }
            cycle.clear();
            let mut x = start;
            while !done[x] {
                done[x] = true;
                cycle.push(x);
                x = self.images[x] as usize;
            }
            let len = cycle.len();
            let shift = (exp % len as u64) as usize;
            for (k, &pt) in cycle.iter().enumerate() {
                out[pt] = cycle[(k + shift) % len] as u32;
            }
        }
        Permutation { images: out }
    }

    /// Cycle lengths including fixed points, in order of smallest point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles_with_fixed().iter().map(Vec::len).collect()
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !done[x] {
                done[x] = true;
                cycle.push(x);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Nontrivial cycles only.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Least `k >= 1` with `self^k = 1`: the lcm of the cycle lengths.
    pub fn element_order(&self) -> BigUint {
        self.cycle_lengths()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, len| acc.lcm(&BigUint::from(len)))
    }

    /// The element order when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for len in self.cycle_lengths() {
            let len = len as u64;
            let g = acc.gcd(&len);
            acc = acc.checked_mul(len / g)?;
        }
        Some(acc)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &v)| *i as u32 == v).count()
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &v)| i as u32 != v)
    }

    /// Sign of the permutation: `true` when even.
    pub fn is_even(&self) -> bool {
        let n = self.images.len();
        let cycles = self.cycle_lengths().len();
        (n - cycles) % 2 == 0
    }
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;

    #[inline]
    fn mul(self, rhs: &'a Permutation) -> Permutation {
        assert_eq!(self.images.len(), rhs.images.len(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&i| rhs.images[i as usize]).collect(),
        }
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(&images.iter().map(|&x| x as usize).collect::<Vec<_>>())
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}
