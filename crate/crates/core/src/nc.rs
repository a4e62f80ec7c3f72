//! Which products `pq` of two distinct primes admit a vertex-transitive graph that is
//! not a Cayley graph, decided by five arithmetic conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 10_000;
/// Deterministic Miller-Rabin bases for all n < 2^64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < TRIAL_LIMIT {
        return n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
    }
    if [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        .iter()
        .any(|d| n % d == 0)
    {
        return false;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FermatBranch {
    #[serde(rename = "p_divides_2^t-1")]
    DividesMersenne,
    #[serde(rename = "p_eq_2^(t-1)-1")]
    EqualsHalfMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum NcCondition {
    /// `p^2 | q - 1`; `quotient = (q - 1) / p^2`.
    #[serde(rename = "C1_p2_divides_q_minus_1")]
    SquareDividesQMinusOne { quotient: u64 },
    #[serde(rename = "C2a_q_eq_2p_minus_1")]
    QIsTwicePMinusOne,
    #[serde(rename = "C2b_q_eq_half_p2_plus_1")]
    QIsHalfPSquaredPlusOne,
    /// `q = 2^t + 1`, and `p | 2^t - 1` or `p = 2^(t-1) - 1`.
    #[serde(rename = "C3_fermat")]
    Fermat { t: u32, branch: FermatBranch },
    /// `q = 2^t - 1` and `p = 2^(t-1) + 1`.
    #[serde(rename = "C4_mersenne")]
    Mersenne { t: u32 },
    /// `pq = 7 * 11`.
    #[serde(rename = "C5_seventy_seven")]
    SeventySeven,
}

impl NcCondition {
    pub fn name(&self) -> &'static str {
        match self {
            NcCondition::SquareDividesQMinusOne { .. } => "C1_p2_divides_q_minus_1",
            NcCondition::QIsTwicePMinusOne => "C2a_q_eq_2p_minus_1",
            NcCondition::QIsHalfPSquaredPlusOne => "C2b_q_eq_half_p2_plus_1",
            NcCondition::Fermat { .. } => "C3_fermat",
            NcCondition::Mersenne { .. } => "C4_mersenne",
            NcCondition::SeventySeven => "C5_seventy_seven",
        }
    }

    /// Position in the list of conditions, 1-based (2a and 2b both report 2).
    pub fn number(&self) -> u8 {
        match self {
            NcCondition::SquareDividesQMinusOne { .. } => 1,
            NcCondition::QIsTwicePMinusOne | NcCondition::QIsHalfPSquaredPlusOne => 2,
            NcCondition::Fermat { .. } => 3,
            NcCondition::Mersenne { .. } => 4,
            NcCondition::SeventySeven => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcWitness {
    pub p: u64,
    pub q: u64,
    #[serde(flatten)]
    pub condition: NcCondition,
}

impl NcWitness {
    /// Re-evaluates the stated condition from its parameters alone.
    pub fn recheck(&self) -> bool {
        let (p, q) = (self.p as u128, self.q as u128);
        match self.condition {
            NcCondition::SquareDividesQMinusOne { quotient } => quotient >= 1 && p * p * quotient as u128 + 1 == q,
            NcCondition::QIsTwicePMinusOne => 2 * p == q + 1,
            NcCondition::QIsHalfPSquaredPlusOne => 2 * q == p * p + 1,
            NcCondition::Fermat { t, branch } => {
                t < 127
                    && q == (1u128 << t) + 1
                    && match branch {
                        FermatBranch::DividesMersenne => ((1u128 << t) - 1) % p == 0,
                        FermatBranch::EqualsHalfMinusOne => t >= 1 && p + 1 == 1u128 << (t - 1),
                    }
            }
            NcCondition::Mersenne { t } => t >= 1 && t < 127 && q + 1 == 1u128 << t && p == (1u128 << (t - 1)) + 1,
            NcCondition::SeventySeven => p == 7 && q == 11,
        }
    }
}

/// `Some(t)` when `x = 2^t`.
fn log2_exact(x: u64) -> Option<u32> {
    (x != 0 && x.is_power_of_two()).then(|| x.trailing_zeros())
}

fn check_inputs(p: u64, q: u64) -> Result<()> {
    if p >= q {
        return Err(Error::InvalidArgument(format!("need p < q, got p = {p}, q = {q}")));
    }
    for x in [p, q] {
        if !is_prime(x) {
            return Err(Error::InvalidArgument(format!("{x} is not prime")));
        }
    }
    Ok(())
}

fn conditions(p: u64, q: u64) -> Vec<NcCondition> {
    let mut out = Vec::new();
    let (pw, qw) = (p as u128, q as u128);
    if (qw - 1) % (pw * pw) == 0 {
        out.push(NcCondition::SquareDividesQMinusOne {
            quotient: ((qw - 1) / (pw * pw)) as u64,
        });
    }
    if qw + 1 == 2 * pw {
        out.push(NcCondition::QIsTwicePMinusOne);
    }
    if 2 * qw == pw * pw + 1 {
        out.push(NcCondition::QIsHalfPSquaredPlusOne);
    }
    if let Some(t) = log2_exact(q - 1) {
        let mersenne = (1u128 << t) - 1;
        if mersenne % pw == 0 {
            out.push(NcCondition::Fermat {
                t,
                branch: FermatBranch::DividesMersenne,
            });
        } else if t >= 1 && pw + 1 == 1u128 << (t - 1) {
            out.push(NcCondition::Fermat {
                t,
                branch: FermatBranch::EqualsHalfMinusOne,
            });
        }
    }
    if let Some(t) = q.checked_add(1).and_then(log2_exact) {
        if t >= 1 && pw == (1u128 << (t - 1)) + 1 {
            out.push(NcCondition::Mersenne { t });
        }
    }
    if p == 7 && q == 11 {
        out.push(NcCondition::SeventySeven);
    }
    out
}

/// The lowest-numbered condition that holds for primes `p < q`, or `None` when `pq` is
/// not a non-Cayley number.
pub fn nc_check(p: u64, q: u64) -> Result<Option<NcWitness>> {
    Ok(nc_check_all(p, q)?.into_iter().next())
}

/// Every condition that holds, in order.
pub fn nc_check_all(p: u64, q: u64) -> Result<Vec<NcWitness>> {
    check_inputs(p, q)?;
    Ok(conditions(p, q)
        .into_iter()
        .map(|condition| NcWitness { p, q, condition })
        .collect())
}

pub const ENUMERATE_MAX: u64 = 1_000_000_000;

/// All `(p, q, witness)` with `pq <= max`, ascending by `pq`.
pub fn nc_enumerate(max: u64) -> Result<Vec<NcWitness>> {
    nc_enumerate_filtered(max, false)
}

/// As [`nc_enumerate`]; `odd_only` drops `p = 2`.
pub fn nc_enumerate_filtered(max: u64, odd_only: bool) -> Result<Vec<NcWitness>> {
    if max > ENUMERATE_MAX {
        return Err(Error::InvalidArgument(format!("max {max} exceeds {ENUMERATE_MAX}")));
    }
    let mut out = Vec::new();
    let mut p = if odd_only { 3u64 } else { 2 };
    while p * p < max {
        if is_prime(p) {
            let q_max = max / p;
            let mut candidates = Vec::new();
            let mut q = 1 + p * p;
            while q <= q_max {
                candidates.push(q);
                q += p * p;
            }
            candidates.push(2 * p - 1);
            if p % 2 == 1 {
                candidates.push((p * p + 1) / 2);
            }
            for t in 1..40 {
                candidates.push((1u64 << t) + 1);
                candidates.push((1u64 << t) - 1);
            }
            candidates.push(11);
            candidates.sort_unstable();
            candidates.dedup();
            for q in candidates {
                if q > p && q <= q_max && is_prime(q) {
                    if let Some(w) = nc_check(p, q).expect("inputs checked") {
                        out.push(w);
                    }
                }
            }
        }
        p += 1;
    }
    out.sort_by_key(|w| (w.p * w.q, w.p));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn cond(p: u64, q: u64) -> Option<NcCondition> {
        nc_check(p, q).unwrap().map(|w| w.condition)
    }

    #[test]
    fn primality() {
        assert!(is_prime(61));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2));
        assert!(is_prime(2_147_483_647));
        assert!(trial_division(2_147_483_647));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(u64::MAX));
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "{n}");
        }
        for n in (100_000_000u64..100_020_000).step_by(7) {
            assert_eq!(is_prime(n), trial_division(n), "{n}");
        }
    }

    #[test]
    fn named_instances() {
        assert_eq!(cond(7, 11), Some(NcCondition::SeventySeven));
        assert_eq!(cond(3, 5), Some(NcCondition::QIsTwicePMinusOne));
        assert_eq!(cond(5, 13), Some(NcCondition::QIsHalfPSquaredPlusOne));
        assert_eq!(cond(5, 31), None);
        assert_eq!(cond(3, 7), None);
        assert_eq!(cond(3, 19), Some(NcCondition::SquareDividesQMinusOne { quotient: 2 }));
        assert_eq!(cond(5, 7), Some(NcCondition::Mersenne { t: 3 }));
        assert_eq!(
            cond(5, 17),
            Some(NcCondition::Fermat {
                t: 4,
                branch: FermatBranch::DividesMersenne
            })
        );
        assert_eq!(
            cond(7, 17),
            Some(NcCondition::Fermat {
                t: 4,
                branch: FermatBranch::EqualsHalfMinusOne
            })
        );
        // 10: 4 | 5 - 1
        assert_eq!(cond(2, 5), Some(NcCondition::SquareDividesQMinusOne { quotient: 1 }));
    }

    #[test]
    fn input_contract() {
        assert!(nc_check(7, 3).is_err());
        assert!(nc_check(7, 7).is_err());
        assert!(nc_check(4, 7).is_err());
        assert!(nc_check(3, 9).is_err());
    }

    #[test]
    fn all_conditions_reported() {
        // (3,5): q = 2p-1 and q = (p^2+1)/2 both hold
        let all: Vec<_> = nc_check_all(3, 5)
            .unwrap()
            .into_iter()
            .map(|w| w.condition.name())
            .collect();
        assert_eq!(all, ["C2a_q_eq_2p_minus_1", "C2b_q_eq_half_p2_plus_1", "C3_fermat"]);
    }

    #[test]
    fn witness_json_names() {
        let w = nc_check(7, 11).unwrap().unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"p":7,"q":11,"condition":"C5_seventy_seven"}"#);
        let back: NcWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        let f = serde_json::to_string(&nc_check(7, 17).unwrap().unwrap()).unwrap();
        assert_eq!(
            f,
            r#"{"p":7,"q":17,"condition":"C3_fermat","t":4,"branch":"p_eq_2^(t-1)-1"}"#
        );
    }

    #[test]
    fn enumeration_matches_exhaustive_scan() {
        let max = 20_000;
        let mut expected = Vec::new();
        for p in 2..max {
            if !trial_division(p) {
                continue;
            }
            for q in p + 1..=max / p {
                if trial_division(q) {
                    if let Some(w) = nc_check(p, q).unwrap() {
                        expected.push(w);
                    }
                }
            }
        }
        expected.sort_by_key(|w| (w.p * w.q, w.p));
        assert_eq!(nc_enumerate(max).unwrap(), expected);
    }

    #[test]
    fn enumeration_examples() {
        let small = nc_enumerate(30).unwrap();
        assert!(small.iter().any(|w| (w.p, w.q) == (2, 5)));
        assert!(small.iter().any(|w| (w.p, w.q) == (3, 5)));
        assert!(nc_enumerate(80).unwrap().iter().any(|w| (w.p, w.q) == (7, 11)));
        assert!(nc_enumerate(14).unwrap().iter().all(|w| w.p == 2));
        assert!(nc_enumerate(ENUMERATE_MAX + 1).is_err());
        assert!(nc_enumerate_filtered(14, true).unwrap().is_empty());
        assert!(nc_enumerate_filtered(10_000, true).unwrap().iter().all(|w| w.p > 2));
    }

    #[test]
    fn witnesses_recheck() {
        for w in nc_enumerate(2_000_000).unwrap() {
            assert!(w.recheck(), "{w:?}");
        }
        let mut bad = nc_check(7, 11).unwrap().unwrap();
        bad.q = 13;
        assert!(!bad.recheck());
    }
}
