//! Socles of primitive groups of degree `pq`: one row per family instance, each with a
//! closed-form degree and socle order, an arithmetic validation and (where the group is
//! small enough) a concrete permutation representation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{
    act_on_cosets_with_chain, act_on_pairs, act_on_subsets, projective_line_action, projective_line_labels,
    projective_line_pgl, projective_subspace_action_labelled, subfield_pgl2, PointedAction, DEFAULT_INDEX_BOUND,
};
use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::frobenius::{element_of_order, TranscriptLine};
use crate::group::PermGroup;
use crate::nc::{is_prime, nc_check, NcWitness};
use crate::perm::Permutation;

pub type Check = TranscriptLine;

/// Largest degree for which rows are built as permutation groups.
pub const CONSTRUCTIBLE_MAX_DEGREE: u64 = 2000;
/// Random pairs tried when locating a stabilizer subgroup.
pub const SUBGROUP_SEARCH_BUDGET: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "A_q_pairs")]
    AqPairs,
    #[serde(rename = "A_q1_pairs")]
    Aq1Pairs,
    #[serde(rename = "A7_on_35")]
    A7On35,
    #[serde(rename = "A7_on_15")]
    A7On15,
    #[serde(rename = "A_pq_natural")]
    ApqNatural,
    #[serde(rename = "PSL2_pairs")]
    Psl2Pairs,
    #[serde(rename = "PSL2_cosets_D")]
    Psl2CosetsD,
    #[serde(rename = "PSL2_cosets_A4")]
    Psl2CosetsA4,
    #[serde(rename = "PSL2_cosets_S4")]
    Psl2CosetsS4,
    #[serde(rename = "PSL2_cosets_A5")]
    Psl2CosetsA5,
    #[serde(rename = "PSL2_p2_cosets_PGL")]
    Psl2P2CosetsPgl,
    #[serde(rename = "PSLn2_lines")]
    PslN2Lines,
    #[serde(rename = "PSLn_s_points")]
    PslNsPoints,
    #[serde(rename = "M11_pairs")]
    M11Pairs,
    #[serde(rename = "M23_pairs")]
    M23Pairs,
    #[serde(rename = "Sz8_arith")]
    Sz8Arith,
    #[serde(rename = "PSU3_arith")]
    Psu3Arith,
    #[serde(rename = "PSp4_arith")]
    Psp4Arith,
    #[serde(rename = "Omega_arith")]
    OmegaArith,
    #[serde(rename = "M22_arith")]
    M22Arith,
}

impl Family {
    pub const ALL: [Family; 20] = [
        Family::AqPairs,
        Family::Aq1Pairs,
        Family::A7On35,
        Family::A7On15,
        Family::ApqNatural,
        Family::Psl2Pairs,
        Family::Psl2CosetsD,
        Family::Psl2CosetsA4,
        Family::Psl2CosetsS4,
        Family::Psl2CosetsA5,
        Family::Psl2P2CosetsPgl,
        Family::PslN2Lines,
        Family::PslNsPoints,
        Family::M11Pairs,
        Family::M23Pairs,
        Family::Sz8Arith,
        Family::Psu3Arith,
        Family::Psp4Arith,
        Family::OmegaArith,
        Family::M22Arith,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::AqPairs => "A_q_pairs",
            Family::Aq1Pairs => "A_q1_pairs",
            Family::A7On35 => "A7_on_35",
            Family::A7On15 => "A7_on_15",
            Family::ApqNatural => "A_pq_natural",
            Family::Psl2Pairs => "PSL2_pairs",
            Family::Psl2CosetsD => "PSL2_cosets_D",
            Family::Psl2CosetsA4 => "PSL2_cosets_A4",
            Family::Psl2CosetsS4 => "PSL2_cosets_S4",
            Family::Psl2CosetsA5 => "PSL2_cosets_A5",
            Family::Psl2P2CosetsPgl => "PSL2_p2_cosets_PGL",
            Family::PslN2Lines => "PSLn2_lines",
            Family::PslNsPoints => "PSLn_s_points",
            Family::M11Pairs => "M11_pairs",
            Family::M23Pairs => "M23_pairs",
            Family::Sz8Arith => "Sz8_arith",
            Family::Psu3Arith => "PSU3_arith",
            Family::Psp4Arith => "PSp4_arith",
            Family::OmegaArith => "Omega_arith",
            Family::M22Arith => "M22_arith",
        }
    }

    /// Families only validated arithmetically.
    pub fn arithmetic_only(self) -> bool {
        matches!(
            self,
            Family::Sz8Arith | Family::Psu3Arith | Family::Psp4Arith | Family::OmegaArith | Family::M22Arith
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::InvalidArgument(format!("unknown family {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableSource {
    Table1,
    Table2,
    Prop1,
}

/// Family parameters as supplied by a caller. Unused fields stay `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub family: Family,
    pub params: RowParams,
    pub p: u64,
    pub q: u64,
    pub degree: u64,
    pub socle_name: String,
    pub table_source: TableSource,
    pub constructible: bool,
}

/// The Suzuki factorization: with `s = 2^(2a+1)` and `r^2 = 2s`,
/// `s^2 + 1 = (s + r + 1)(s - r + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuzukiArith {
    pub s: u64,
    pub r: u64,
    pub factors: (u64, u64),
}

impl SuzukiArith {
    pub fn new(a: u32) -> Result<Self> {
        if a == 0 || a > 15 {
            return Err(Error::InvalidArgument(format!(
                "Suzuki parameter a = {a} out of range 1..=15"
            )));
        }
        let s = 1u64 << (2 * a + 1);
        let r = 1u64 << (a + 1);
        Ok(SuzukiArith {
            s,
            r,
            factors: (s + r + 1, s - r + 1),
        })
    }

    pub fn degree(&self) -> u64 {
        self.s * self.s + 1
    }

    pub fn checks(&self) -> Vec<Check> {
        let (f1, f2) = self.factors;
        vec![
            check(
                "r^2 = 2s",
                self.r * self.r == 2 * self.s,
                format!("r = {}, s = {}", self.r, self.s),
            ),
            check(
                "s^2 + 1 = (s+r+1)(s-r+1)",
                self.degree() == f1 * f2,
                format!("{} = {f1} * {f2}", self.degree()),
            ),
            check(
                "5 | s^2 + 1",
                self.degree() % 5 == 0,
                format!("{} mod 5 = {}", self.degree(), self.degree() % 5),
            ),
        ]
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        check: name.to_string(),
        passed,
        detail,
    }
}

fn factorial(m: u64) -> BigUint {
    (1..=m).map(BigUint::from).product()
}

fn binom(m: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (m - i) / (i + 1))
}

fn psl_order(n: u32, s: u64) -> BigUint {
    let s_big = BigUint::from(s);
    let mut order = s_big.pow(n * (n - 1) / 2);
    for i in 2..=n {
        order *= s_big.pow(i) - 1u32;
    }
    order / BigUint::from(n as u64).gcd(&BigUint::from(s - 1))
}

/// `(s^n - 1)/(s - 1)`, `None` on overflow.
fn projective_points(n: u32, s: u64) -> Option<u64> {
    let mut total = 0u64;
    let mut term = 1u64;
    for _ in 0..n {
        total = total.checked_add(term)?;
        term = term.checked_mul(s)?;
    }
    Some(total)
}

/// `(p, q)` with `p < q` odd primes and `n = pq`.
fn odd_pq(n: u64) -> Option<(u64, u64)> {
    if n % 2 == 0 || n < 15 {
        return None;
    }
    let p = (3..).step_by(2).take_while(|d| d * d <= n).find(|d| n % d == 0)?;
    let q = n / p;
    (p < q && is_prime(p) && is_prime(q)).then_some((p, q))
}

fn prime_power(s: u64) -> Option<(u64, u32)> {
    if s < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= s).find(|d| s % d == 0).unwrap_or(s);
    let mut m = s;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn odd_prime(x: u64) -> bool {
    x > 2 && is_prime(x)
}

/// Sporadic `PSL(2, q)` rows on cosets of a small subgroup, keyed by `q`.
const PSL2_SPORADIC_ROWS: [(Family, u64, u64, TableSource); 7] = [
    (Family::Psl2CosetsA5, 19, 3, TableSource::Table1),
    (Family::Psl2CosetsA5, 29, 7, TableSource::Table2),
    (Family::Psl2CosetsA5, 59, 29, TableSource::Table2),
    (Family::Psl2CosetsA5, 61, 31, TableSource::Table1),
    (Family::Psl2CosetsS4, 23, 11, TableSource::Table2),
    (Family::Psl2CosetsA4, 11, 5, TableSource::Table2),
    (Family::Psl2CosetsA4, 13, 7, TableSource::Table1),
];

fn need<T: Copy>(value: Option<T>, what: &str, family: Family) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("{family} needs parameter {what}")))
}

fn not_a_row(family: Family, detail: String) -> Error {
    Error::InvalidArgument(format!("{family}: {detail} is not a row of the tables"))
}

impl AtlasEntry {
    /// Resolves a family and its parameters into a row, deriving `p`, `q` from the table
    /// columns and the degree from the family's own formula.
    pub fn from_params(family: Family, params: RowParams) -> Result<Self> {
        use Family::*;
        let mut params = params;
        let (p, q, degree, socle, source) = match family {
            AqPairs => {
                let q = need(params.q, "q", family)?;
                if q < 5 {
                    return Err(not_a_row(family, format!("q = {q}")));
                }
                ((q - 1) / 2, q, binom(q, 2), format!("A_{q}"), TableSource::Table2)
            }
            Aq1Pairs => {
                let q = need(params.q, "q", family)?;
                if q < 5 {
                    return Err(not_a_row(family, format!("q = {q}")));
                }
                (
                    (q + 1) / 2,
                    q,
                    binom(q + 1, 2),
                    format!("A_{}", q + 1),
                    TableSource::Table1,
                )
            }
            A7On35 => {
                params = RowParams::default();
                (5, 7, binom(7, 3), "A_7".into(), TableSource::Table1)
            }
            A7On15 => {
                params = RowParams::default();
                (3, 5, 2520 / 168, "A_7".into(), TableSource::Prop1)
            }
            ApqNatural => {
                let (p, q) = (need(params.p, "p", family)?, need(params.q, "q", family)?);
                let m = p
                    .checked_mul(q)
                    .ok_or_else(|| not_a_row(family, format!("p = {p}, q = {q}")))?;
                (p, q, m, format!("A_{m}"), TableSource::Prop1)
            }
            Psl2Pairs => {
                let q = need(params.q, "q", family)?;
                if q < 13 {
                    return Err(not_a_row(family, format!("q = {q}")));
                }
                (
                    (q + 1) / 2,
                    q,
                    q * (q + 1) / 2,
                    format!("PSL(2,{q})"),
                    TableSource::Table1,
                )
            }
            Psl2CosetsD => {
                let q = need(params.q, "q", family)?;
                if q < 7 {
                    return Err(not_a_row(family, format!("q = {q}")));
                }
                (
                    (q - 1) / 2,
                    q,
                    q * (q - 1) / 2,
                    format!("PSL(2,{q})"),
                    TableSource::Table2,
                )
            }
            Psl2CosetsA4 | Psl2CosetsS4 | Psl2CosetsA5 => {
                let q = need(params.q, "q", family)?;
                let &(_, _, p, source) = PSL2_SPORADIC_ROWS
                    .iter()
                    .find(|r| r.0 == family && r.1 == q)
                    .ok_or_else(|| not_a_row(family, format!("q = {q}")))?;
                let h = match family {
                    Psl2CosetsA4 => 12,
                    Psl2CosetsS4 => 24,
                    _ => 60,
                };
                let order = q * (q * q - 1) / 2;
                (p, q, order / h, format!("PSL(2,{q})"), source)
            }
            Psl2P2CosetsPgl => {
                let p = need(params.p, "p", family)?;
                if p % 2 == 0 || p > 1_000_000 {
                    return Err(not_a_row(family, format!("p = {p}")));
                }
                let s = p * p;
                let psl = s * (s * s - 1) / 2;
                let pgl = p * (p * p - 1);
                (p, (s + 1) / 2, psl / pgl, format!("PSL(2,{s})"), TableSource::Table1)
            }
            PslN2Lines => {
                let n = need(params.n, "n", family)?;
                if !(3..=40).contains(&n) {
                    return Err(not_a_row(family, format!("n = {n}")));
                }
                let degree = ((1u64 << n) - 1) * ((1u64 << (n - 1)) - 1) / 3;
                let (p, q) = match n {
                    4 => (5, 7),
                    5 => (5, 31),
                    _ => return Err(not_a_row(family, format!("n = {n}"))),
                };
                let source = if n == 5 {
                    TableSource::Table2
                } else {
                    TableSource::Table1
                };
                (p, q, degree, format!("PSL({n},2)"), source)
            }
            PslNsPoints => {
                let n = need(params.n, "n", family)?;
                let s = need(params.s.or(params.q), "s", family)?;
                params.q = None;
                params.s = Some(s);
                prime_power(s).ok_or_else(|| not_a_row(family, format!("s = {s}")))?;
                if n < 2 || (n == 2 && s < 4) {
                    return Err(not_a_row(family, format!("n = {n}, s = {s}")));
                }
                let degree = projective_points(n, s).ok_or_else(|| not_a_row(family, format!("n = {n}, s = {s}")))?;
                let (p, q) = odd_pq(degree).ok_or_else(|| not_a_row(family, format!("degree {degree}")))?;
                (p, q, degree, format!("PSL({n},{s})"), TableSource::Prop1)
            }
            M11Pairs => {
                params = RowParams::default();
                (5, 11, binom(11, 2), "M_11".into(), TableSource::Table2)
            }
            M23Pairs => {
                params = RowParams::default();
                (11, 23, binom(23, 2), "M_23".into(), TableSource::Table2)
            }
            M22Arith => {
                params = RowParams::default();
                // blocks of the Steiner system S(3,6,22): C(22,3)/C(6,3)
                (7, 11, binom(22, 3) / binom(6, 3), "M_22".into(), TableSource::Table1)
            }
            Sz8Arith => {
                params = RowParams::default();
                let sz = SuzukiArith::new(1)?;
                let (big, small) = sz.factors;
                (small, big, sz.degree(), "Sz(8)".into(), TableSource::Prop1)
            }
            Psu3Arith => {
                let a = need(params.a, "a", family)?;
                if a == 0 || a > 20 {
                    return Err(not_a_row(family, format!("a = {a}")));
                }
                let t = 1u64 << a;
                (
                    t + 1,
                    t * t - t + 1,
                    t * t * t + 1,
                    format!("PSU(3,{t})"),
                    TableSource::Prop1,
                )
            }
            Psp4Arith => {
                let a = need(params.a, "a", family)?;
                if a == 0 || a > 20 {
                    return Err(not_a_row(family, format!("a = {a}")));
                }
                let t = 1u64 << a;
                // points of PG(3, 2^a)
                (
                    t + 1,
                    t * t + 1,
                    (t.pow(4) - 1) / (t - 1),
                    format!("PSp(4,{t})"),
                    TableSource::Table1,
                )
            }
            OmegaArith => {
                let n = need(params.n, "n", family)?;
                let sign = need(params.sign, "sign", family)?;
                if !(2..=31).contains(&n) || !(sign == 1 || sign == -1) {
                    return Err(not_a_row(family, format!("n = {n}, sign = {sign}")));
                }
                let t = 1u64 << n;
                let (q, p) = if sign > 0 {
                    (t - 1, t / 2 + 1)
                } else {
                    (t + 1, t / 2 - 1)
                };
                if q <= 7 {
                    return Err(not_a_row(family, format!("q = {q}")));
                }
                // singular points of the quadric
                let degree = if sign > 0 {
                    (t - 1) * (t / 2 + 1)
                } else {
                    (t + 1) * (t / 2 - 1)
                };
                let name = format!("Omega{}({},2)", if sign > 0 { "+" } else { "-" }, 2 * n);
                (p, q, degree, name, TableSource::Table1)
            }
        };
        let params = match family {
            AqPairs | Aq1Pairs | Psl2Pairs | Psl2CosetsD | Psl2CosetsA4 | Psl2CosetsS4 | Psl2CosetsA5 => RowParams {
                q: Some(q),
                ..Default::default()
            },
            ApqNatural | Psl2P2CosetsPgl => RowParams {
                p: params.p,
                q: if family == ApqNatural { params.q } else { None },
                ..Default::default()
            },
            PslN2Lines => RowParams {
                n: params.n,
                ..Default::default()
            },
            PslNsPoints => RowParams {
                n: params.n,
                s: params.s,
                ..Default::default()
            },
            Psu3Arith | Psp4Arith => RowParams {
                a: params.a,
                ..Default::default()
            },
            OmegaArith => RowParams {
                n: params.n,
                sign: params.sign,
                ..Default::default()
            },
            _ => params,
        };
        let constructible = !family.arithmetic_only()
            && degree <= CONSTRUCTIBLE_MAX_DEGREE
            && match family {
                Family::ApqNatural => degree <= 21,
                Family::Psl2P2CosetsPgl => p * p <= 256,
                Family::PslNsPoints => {
                    let (n, s) = (params.n.unwrap_or(0), params.s.unwrap_or(0));
                    s <= 256 && s.checked_pow(n).is_some_and(|v| v <= 1 << 20)
                }
                _ => true,
            };
        Ok(AtlasEntry {
            family,
            params,
            p,
            q,
            degree,
            socle_name: socle,
            table_source: source,
            constructible,
        })
    }

    pub fn label(&self) -> String {
        format!(
            "{} on {} points ({} p={} q={})",
            self.socle_name, self.degree, self.family, self.p, self.q
        )
    }

    /// Closed-form order of the socle.
    pub fn socle_order(&self) -> BigUint {
        use Family::*;
        let pr = self.params;
        match self.family {
            AqPairs => factorial(self.q) / 2u32,
            Aq1Pairs => factorial(self.q + 1) / 2u32,
            A7On35 | A7On15 => factorial(7) / 2u32,
            ApqNatural => factorial(self.degree) / 2u32,
            Psl2Pairs | Psl2CosetsD | Psl2CosetsA4 | Psl2CosetsS4 | Psl2CosetsA5 => psl_order(2, self.q),
            Psl2P2CosetsPgl => psl_order(2, self.p * self.p),
            PslN2Lines => psl_order(pr.n.unwrap_or(2), 2),
            PslNsPoints => psl_order(pr.n.unwrap_or(2), pr.s.unwrap_or(2)),
            M11Pairs => BigUint::from(7920u32),
            M23Pairs => BigUint::from(10_200_960u32),
            M22Arith => BigUint::from(443_520u32),
            Sz8Arith => BigUint::from(29_120u32),
            Psu3Arith => {
                let t = BigUint::from(1u32) << pr.a.unwrap_or(1);
                let t3 = t.pow(3);
                let g = (&t + 1u32).gcd(&BigUint::from(3u32));
                &t3 * (&t3 + 1u32) * (t.pow(2) - 1u32) / g
            }
            Psp4Arith => {
                let t = BigUint::from(1u32) << pr.a.unwrap_or(1);
                t.pow(4) * (t.pow(2) - 1u32) * (t.pow(4) - 1u32)
            }
            OmegaArith => {
                let n = pr.n.unwrap_or(2);
                let t = BigUint::from(1u32) << n;
                let lead = if pr.sign.unwrap_or(1) > 0 { &t - 1u32 } else { &t + 1u32 };
                let mut order = (BigUint::from(1u32) << (n * (n - 1))) * lead;
                for i in 1..n {
                    order *= (BigUint::from(1u32) << (2 * i)) - 1u32;
                }
                order
            }
        }
    }

    /// The family formula for the degree, evaluated independently of the `p`, `q` columns.
    fn degree_formula(&self) -> (String, Option<u64>) {
        use Family::*;
        let pr = self.params;
        match self.family {
            AqPairs => ("q(q-1)/2".into(), Some(self.q * (self.q - 1) / 2)),
            Aq1Pairs => ("(q+1)q/2".into(), Some((self.q + 1) * self.q / 2)),
            A7On35 => ("C(7,3)".into(), Some(binom(7, 3))),
            A7On15 => ("|A_7|/|PSL(2,7)|".into(), Some(2520 / 168)),
            ApqNatural => ("pq".into(), self.p.checked_mul(self.q)),
            Psl2Pairs => ("q(q+1)/2".into(), Some(self.q * (self.q + 1) / 2)),
            Psl2CosetsD => ("q(q-1)/2".into(), Some(self.q * (self.q - 1) / 2)),
            Psl2CosetsA4 => ("q(q^2-1)/24".into(), Some(self.q * (self.q * self.q - 1) / 24)),
            Psl2CosetsS4 => ("q(q^2-1)/48".into(), Some(self.q * (self.q * self.q - 1) / 48)),
            Psl2CosetsA5 => ("q(q^2-1)/120".into(), Some(self.q * (self.q * self.q - 1) / 120)),
            Psl2P2CosetsPgl => ("p(p^2+1)/2".into(), Some(self.p * (self.p * self.p + 1) / 2)),
            PslN2Lines => {
                let n = pr.n.unwrap_or(0);
                (
                    "(2^n-1)(2^(n-1)-1)/3".into(),
                    Some(((1u64 << n) - 1) * ((1u64 << (n - 1)) - 1) / 3),
                )
            }
            PslNsPoints => (
                "(s^n-1)/(s-1)".into(),
                projective_points(pr.n.unwrap_or(0), pr.s.unwrap_or(0)),
            ),
            M11Pairs => ("C(11,2)".into(), Some(55)),
            M23Pairs => ("C(23,2)".into(), Some(253)),
            M22Arith => ("C(22,3)/C(6,3)".into(), Some(77)),
            Sz8Arith => ("s^2+1".into(), Some(65)),
            Psu3Arith => {
                let t = 1u64 << pr.a.unwrap_or(0);
                ("2^(3a)+1".into(), Some(t * t * t + 1))
            }
            Psp4Arith => {
                let t = 1u64 << pr.a.unwrap_or(0);
                ("(2^(4a)-1)/(2^a-1)".into(), Some((t.pow(4) - 1) / (t - 1)))
            }
            OmegaArith => {
                let t = 1u64 << pr.n.unwrap_or(0);
                if pr.sign.unwrap_or(1) > 0 {
                    ("(2^n-1)(2^(n-1)+1)".into(), Some((t - 1) * (t / 2 + 1)))
                } else {
                    ("(2^n+1)(2^(n-1)-1)".into(), Some((t + 1) * (t / 2 - 1)))
                }
            }
        }
    }

    /// Expected NC membership of `pq` for this row, if the tables commit to one.
    pub fn expected_nc(&self) -> Option<bool> {
        match (self.table_source, self.family) {
            (TableSource::Table2, _) => Some(false),
            (TableSource::Table1, _) => Some(true),
            (TableSource::Prop1, Family::Sz8Arith) => Some(true),
            (TableSource::Prop1, Family::Psu3Arith) => Some(self.p == 5 && self.q == 13),
            (TableSource::Prop1, _) => None,
        }
    }
}

fn push_row(rows: &mut Vec<AtlasEntry>, max_degree: u64, family: Family, params: RowParams) {
    if let Ok(e) = AtlasEntry::from_params(family, params) {
        let valid = e.degree <= max_degree
            && odd_prime(e.p)
            && odd_prime(e.q)
            && e.p < e.q
            && e.p.checked_mul(e.q) == Some(e.degree);
        if valid {
            rows.push(e);
        }
    }
}

/// Every row of degree at most `max_degree`, ordered by degree then family.
pub fn list_rows(max_degree: u64) -> Vec<AtlasEntry> {
    let mut rows = Vec::new();
    let qp = |q| RowParams {
        q: Some(q),
        ..Default::default()
    };
    // q(q-1)/2 <= max_degree bounds every q-indexed family
    let q_max = (1..).find(|&q: &u64| q * (q - 1) / 2 > max_degree).unwrap_or(2);
    for q in (5..=q_max + 1).filter(|&q| odd_prime(q)) {
        push_row(&mut rows, max_degree, Family::AqPairs, qp(q));
        push_row(&mut rows, max_degree, Family::Aq1Pairs, qp(q));
        push_row(&mut rows, max_degree, Family::Psl2Pairs, qp(q));
        push_row(&mut rows, max_degree, Family::Psl2CosetsD, qp(q));
    }
    for &(family, q, _, _) in &PSL2_SPORADIC_ROWS {
        push_row(&mut rows, max_degree, family, qp(q));
    }
    for family in [
        Family::A7On35,
        Family::A7On15,
        Family::M11Pairs,
        Family::M23Pairs,
        Family::M22Arith,
        Family::Sz8Arith,
    ] {
        push_row(&mut rows, max_degree, family, RowParams::default());
    }
    for n in [4, 5] {
        push_row(
            &mut rows,
            max_degree,
            Family::PslN2Lines,
            RowParams {
                n: Some(n),
                ..Default::default()
            },
        );
    }
    let mut p = 3;
    while p * (p * p + 1) / 2 <= max_degree {
        if odd_prime(p) {
            push_row(
                &mut rows,
                max_degree,
                Family::Psl2P2CosetsPgl,
                RowParams {
                    p: Some(p),
                    ..Default::default()
                },
            );
        }
        p += 2;
    }
    for a in 1..=20u32 {
        if (1u64 << a).pow(3) + 1 > max_degree.max(1) * 8 && a > 2 {
            break;
        }
        let ap = RowParams {
            a: Some(a),
            ..Default::default()
        };
        push_row(&mut rows, max_degree, Family::Psu3Arith, ap);
        push_row(&mut rows, max_degree, Family::Psp4Arith, ap);
    }
    for n in 2..=31u32 {
        for sign in [1i8, -1] {
            push_row(
                &mut rows,
                max_degree,
                Family::OmegaArith,
                RowParams {
                    n: Some(n),
                    sign: Some(sign),
                    ..Default::default()
                },
            );
        }
    }
    for m in (15..=max_degree.min(21)).filter(|&m| odd_pq(m).is_some()) {
        let (p, q) = odd_pq(m).expect("filtered");
        push_row(
            &mut rows,
            max_degree,
            Family::ApqNatural,
            RowParams {
                p: Some(p),
                q: Some(q),
                ..Default::default()
            },
        );
    }
    for s in (2..max_degree.max(2)).filter(|&s| prime_power(s).is_some()) {
        for n in 2..=64u32 {
            match projective_points(n, s) {
                Some(d) if d <= max_degree => push_row(
                    &mut rows,
                    max_degree,
                    Family::PslNsPoints,
                    RowParams {
                        n: Some(n),
                        s: Some(s),
                        ..Default::default()
                    },
                ),
                _ => break,
            }
        }
    }
    rows.sort_by(|a, b| (a.degree, a.family, a.params).cmp(&(b.degree, b.family, b.params)));
    rows.dedup();
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub row: String,
    pub p: u64,
    pub q: u64,
    pub degree: u64,
    pub table_source: TableSource,
    pub nc: Option<NcWitness>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suzuki: Option<SuzukiArith>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks (a) `p < q` odd primes, (b) the family degree formula equals `pq`, and
/// (c) the row's table membership agrees with the non-Cayley number test.
pub fn validate_row_arithmetic(entry: &AtlasEntry) -> ValidationReport {
    let (p, q) = (entry.p, entry.q);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    checks.push(check(
        "p, q distinct odd primes with p < q",
        odd_prime(p) && odd_prime(q) && p < q,
        format!("p = {p}, q = {q}"),
    ));
    let (formula, value) = entry.degree_formula();
    checks.push(check(
        "degree formula = pq",
        value.is_some() && value == p.checked_mul(q) && value == Some(entry.degree),
        format!(
            "{formula} = {}, pq = {}",
            value.map_or("overflow".into(), |v| v.to_string()),
            p.saturating_mul(q)
        ),
    ));
    let nc = if p < q { nc_check(p, q).ok().flatten() } else { None };
    let in_nc = nc.is_some();
    let nc_detail = match &nc {
        Some(w) => format!("pq in NC by {}", w.condition.name()),
        None => "pq not in NC".to_string(),
    };
    match entry.expected_nc() {
        Some(expected) => {
            let name = match entry.table_source {
                TableSource::Table2 => "Table2 row iff pq not in NC",
                TableSource::Table1 => "Table1-only row iff pq in NC",
                TableSource::Prop1 => "NC status as stated for the 2-transitive case",
            };
            checks.push(check(name, in_nc == expected, nc_detail));
        }
        None => notes.push(format!("NC status recorded without expectation: {nc_detail}")),
    }
    let mut suzuki = None;
    match entry.family {
        Family::Sz8Arith => {
            let sz = SuzukiArith::new(1).expect("a = 1");
            checks.extend(sz.checks());
            checks.push(check(
                "{p, q} = factors of s^2 + 1",
                (sz.factors.1, sz.factors.0) == (p, q),
                format!("factors {} and {}", sz.factors.0, sz.factors.1),
            ));
            notes.push(format!(
                "s^2 + 1 = {} factors as (s+r+1)(s-r+1) = {} * {}; the product (s+r+1)(s+r-1) = {} does not equal it",
                sz.degree(),
                sz.factors.0,
                sz.factors.1,
                (sz.s + sz.r + 1) * (sz.s + sz.r - 1)
            ));
            notes.push(format!("p = 5 forces q = {}, not q = 1", sz.degree() / 5));
            suzuki = Some(sz);
        }
        Family::A7On15 => {
            if let Some(w) = &nc {
                notes.push(format!(
                    "15 satisfies {} so 15 is a non-Cayley number, although the 2-transitive A_7 case asserts otherwise",
                    w.condition.name()
                ));
            }
        }
        Family::Psu3Arith => {
            let t = 1u64 << entry.params.a.unwrap_or(0);
            checks.push(check(
                "p = 2^a + 1, q = 2^(2a) - 2^a + 1",
                p == t + 1 && q == t * t - t + 1,
                format!("a = {}", entry.params.a.unwrap_or(0)),
            ));
        }
        Family::Psp4Arith => {
            let t = 1u64 << entry.params.a.unwrap_or(0);
            checks.push(check(
                "p = 2^a + 1, q = 2^(2a) + 1",
                p == t + 1 && q == t * t + 1,
                format!("a = {}", entry.params.a.unwrap_or(0)),
            ));
        }
        Family::OmegaArith => {
            let n = entry.params.n.unwrap_or(0);
            let t = 1u64 << n;
            let plus = entry.params.sign.unwrap_or(1) > 0;
            let (eq, ep) = if plus { (t - 1, t / 2 + 1) } else { (t + 1, t / 2 - 1) };
            checks.push(check(
                "q = 2^n -+ 1 > 7, p = 2^(n-1) +- 1",
                q == eq && p == ep && q > 7,
                format!("n = {n}, sign {}", if plus { "+" } else { "-" }),
            ));
        }
        _ => {}
    }
    ValidationReport {
        row: entry.label(),
        p,
        q,
        degree: entry.degree,
        table_source: entry.table_source,
        nc,
        checks,
        notes,
        suzuki,
    }
}

/// `M_11` on 11 points, 0-based.
pub fn mathieu_11() -> PermGroup {
    let a = Permutation::parse_cycles(11, "(0 1 2 3 4 5 6 7 8 9 10)").expect("valid");
    let b = Permutation::parse_cycles(11, "(2 6 10 7)(3 9 4 5)").expect("valid");
    PermGroup::new(vec![a, b]).expect("same degree").with_label("M_11")
}

/// `M_23` on 23 points, 0-based.
pub fn mathieu_23() -> PermGroup {
    let a =
        Permutation::parse_cycles(23, "(0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22)").expect("valid");
    let b = Permutation::parse_cycles(23, "(2 16 9 6 8)(3 12 13 18 4)(7 17 10 11 22)(14 19 21 20 15)").expect("valid");
    PermGroup::new(vec![a, b]).expect("same degree").with_label("M_23")
}

/// Generators `a`, `b` of a subgroup of order `target` with `o(a)`, `o(b)`, `o(ab)` as in
/// `profile`, found by random search.
pub fn find_subgroup_by_profile(
    chain: &StabilizerChain,
    profile: (u64, u64, u64),
    target: u64,
    seed: u64,
    budget: u64,
) -> Result<Vec<Permutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (oa, ob, oab) = profile;
    let target = BigUint::from(target);
    for _ in 0..budget {
        let Some(a) = element_of_order(chain, &mut rng, oa) else {
            continue;
        };
        let Some(b) = element_of_order(chain, &mut rng, ob) else {
            continue;
        };
        if (&a * &b).order_u64() != Some(oab) {
            continue;
        }
        let sub = PermGroup::new(vec![a.clone(), b.clone()])?;
        if StabilizerChain::build(&sub, seed).order() == &target {
            return Ok(vec![a, b]);
        }
    }
    Err(Error::SearchExhausted { seed, attempts: budget })
}

fn coset_action(g: PermGroup, profile: (u64, u64, u64), order: u64, seed: u64) -> Result<PointedAction> {
    let chain = StabilizerChain::build(&g, seed);
    let h = find_subgroup_by_profile(&chain, profile, order, seed, SUBGROUP_SEARCH_BUDGET)?;
    act_on_cosets_with_chain(&g, &chain, &h, DEFAULT_INDEX_BOUND)
}

fn field(s: u64) -> Result<FiniteField> {
    FiniteField::new(s)
}

/// Builds the socle of a constructible row acting on `pq` points.
pub fn build(entry: &AtlasEntry, seed: u64) -> Result<PointedAction> {
    use Family::*;
    if !entry.constructible {
        return Err(Error::NotConstructible(entry.label()));
    }
    let q = entry.q;
    let mut action = match entry.family {
        AqPairs => act_on_pairs(&PermGroup::alternating(q as usize))?,
        Aq1Pairs => act_on_pairs(&PermGroup::alternating(q as usize + 1))?,
        A7On35 => act_on_subsets(&PermGroup::alternating(7), 3)?,
        A7On15 => coset_action(PermGroup::alternating(7), (2, 3, 7), 168, seed)?,
        ApqNatural => {
            let g = PermGroup::alternating(entry.degree as usize);
            PointedAction {
                source: g.clone(),
                target: g,
                point_labels: (0..entry.degree).map(|i| i.to_string()).collect(),
            }
        }
        Psl2Pairs => act_on_pairs(&projective_line_action(&field(q)?)?)?,
        Psl2CosetsD => coset_action(projective_line_action(&field(q)?)?, (2, 2, (q + 1) / 2), q + 1, seed)?,
        Psl2CosetsA4 => coset_action(projective_line_action(&field(q)?)?, (2, 3, 3), 12, seed)?,
        Psl2CosetsS4 => coset_action(projective_line_action(&field(q)?)?, (2, 3, 4), 24, seed)?,
        Psl2CosetsA5 => coset_action(projective_line_action(&field(q)?)?, (2, 3, 5), 60, seed)?,
        Psl2P2CosetsPgl => {
            let f = field(entry.p * entry.p)?;
            let g = projective_line_action(&f)?;
            let chain = StabilizerChain::build(&g, seed);
            act_on_cosets_with_chain(&g, &chain, &subfield_pgl2(&f)?, DEFAULT_INDEX_BOUND)?
        }
        PslN2Lines => projective_subspace_action_labelled(entry.params.n.unwrap_or(0) as usize, &field(2)?, 2)?,
        PslNsPoints => {
            let (n, s) = (entry.params.n.unwrap_or(0) as usize, entry.params.s.unwrap_or(0));
            let f = field(s)?;
            if n == 2 {
                let g = projective_line_action(&f)?;
                PointedAction {
                    source: g.clone(),
                    target: g,
                    point_labels: projective_line_labels(&f),
                }
            } else {
                projective_subspace_action_labelled(n, &f, 1)?
            }
        }
        M11Pairs => act_on_pairs(&mathieu_11())?,
        M23Pairs => act_on_pairs(&mathieu_23())?,
        Sz8Arith | Psu3Arith | Psp4Arith | OmegaArith | M22Arith => unreachable!("not constructible"),
    };
    action.target = action.target.with_label(entry.label());
    Ok(action)
}

/// For rows whose socle action is imprimitive, a primitive overgroup `PGL(2, q)` on the
/// cosets of the normalizer of the socle's point stabilizer. Its first three generators
/// generate the socle. `None` for other families.
pub fn primitive_overgroup(entry: &AtlasEntry, seed: u64) -> Result<Option<PointedAction>> {
    let q = entry.q;
    let (profile, order) = match entry.family {
        Family::Psl2CosetsD => ((2, 2, q + 1), 2 * (q + 1)),
        Family::Psl2CosetsA4 => ((2, 3, 4), 24),
        _ => return Ok(None),
    };
    let pgl = projective_line_pgl(&field(q)?)?;
    let mut action = coset_action(pgl, profile, order, seed)?;
    let degree = action.degree();
    action.target = action.target.with_label(format!("PGL(2,{q}) on {degree} points"));
    Ok(Some(action))
}

/// Number of generators of [`primitive_overgroup`]'s target that generate the socle.
pub const OVERGROUP_SOCLE_GENERATORS: usize = 3;
