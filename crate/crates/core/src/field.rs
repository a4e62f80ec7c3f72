//! Table-driven finite fields of order at most 256.
//!
//! Elements are encoded as integers `0..size`: the base-`p` digits are the
//! coefficients of a polynomial of degree `< k`, reduced modulo the
//! lexicographically least monic irreducible of degree `k`. So `0` and `1` are the
//! field's zero and one, and a prime field's elements are the residues themselves.

use crate::error::{Error, Result};

pub type Elem = u8;

#[derive(Clone, Debug)]
pub struct FiniteField {
    characteristic: u32,
    degree: u32,
    size: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    primitive: Elem,
}

fn prime_power(order: u64) -> Option<(u32, u32)> {
    if order < 2 {
        return None;
    }
    let p = (2..=order).find(|d| order % d == 0)?;
    let mut k = 0;
    let mut m = order;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p as u32, k))
}

/// Coefficients, low degree first.
type Poly = Vec<u32>;

fn poly_rem(mut a: Poly, b: &[u32], p: u32) -> Poly {
    // b is monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - (lead * c) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    // any factor has a monic factor of degree <= k/2
    for d in 1..=k / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut g: Poly = (0..d)
                .map(|i| ((code / (p as usize).pow(i as u32)) % p as usize) as u32)
                .collect();
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(order: u64) -> Result<Self> {
        let (p, k) = prime_power(order)
            .filter(|_| order <= 256)
            .ok_or(Error::UnsupportedField(order))?;
        let size = order as usize;
        let modulus: Poly = if k == 1 {
            vec![0, 1]
        } else {
            (0..size)
                .map(|code| {
                    let mut f: Poly = (0..k)
                        .map(|i| ((code / (p as usize).pow(i)) % p as usize) as u32)
                        .collect();
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        let digits = |e: usize| -> Poly {
            (0..k)
                .map(|i| ((e / (p as usize).pow(i)) % p as usize) as u32)
                .collect()
        };
        let encode =
            |poly: &[u32]| -> usize { poly.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize) };

        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for a in 0..size {
            let da = digits(a);
            for b in 0..size {
                let db = digits(b);
                let sum: Poly = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * size + b] = encode(&sum) as Elem;
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let rem = if k == 1 { prod } else { poly_rem(prod, &modulus, p) };
                mul[a * size + b] = encode(&rem) as Elem;
            }
        }
        let neg = (0..size)
            .map(|a| (0..size).find(|&b| add[a * size + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..size)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..size).find(|&b| mul[a * size + b] == 1).unwrap() as Elem
                }
            })
            .collect();
        let mut field = FiniteField {
            characteristic: p,
            degree: k,
            size,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        field.primitive = (1..size)
            .map(|a| a as Elem)
            .find(|&a| field.mult_order(a) == size - 1)
            .expect("multiplicative group is cyclic");
        Ok(field)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn extension_degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, e: usize) -> Elem {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.primitive
    }

    pub fn mult_order(&self, a: Elem) -> usize {
        if a == 0 {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(|e| e as Elem)
    }

    /// The prime subfield as encoded elements `0..p`.
    pub fn prime_subfield(&self) -> impl Iterator<Item = Elem> {
        (0..self.characteristic).map(|e| e as Elem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if a != 0 && b != 0 {
                    assert_ne!(f.mul(a, b), 0, "zero divisors");
                }
                for &c in els.iter().step_by(3) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                }
            }
        }
        assert_eq!(f.mult_order(f.primitive_element()), f.size() - 1);
    }

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.size() as u64, q);
            check_axioms(&f);
        }
    }

    #[test]
    fn large_fields_are_cyclic() {
        for q in [121u64, 128, 169, 256] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.mult_order(f.primitive_element()), f.size() - 1);
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn unsupported_orders() {
        for q in [0, 1, 6, 12, 257, 343] {
            assert!(FiniteField::new(q).is_err(), "{q}");
        }
    }

    #[test]
    fn prime_subfield_is_closed() {
        let f = FiniteField::new(121).unwrap();
        let sub: Vec<Elem> = f.prime_subfield().collect();
        for &a in &sub {
            for &b in &sub {
                assert!(sub.contains(&f.add(a, b)));
                assert!(sub.contains(&f.mul(a, b)));
            }
        }
    }
}
