//! Regular subgroups: Frobenius groups of order `pq` found by random search and
//! certified independently, plus a general regular-subgroup search.
//!
//! A transitive subgroup of order `pq` in a group of degree `pq` acts regularly, so a
//! certificate shows the group contains a proper transitive subgroup whenever its own
//! order exceeds `pq`.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainOptions, StabilizerChain, INTERNAL_SEED};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::nc::is_prime;
use crate::perm::Permutation;

/// Search effort: random candidates per phase and number of restarts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub candidates_per_phase: u64,
    pub restarts: u32,
}

pub const BUDGET_ENV: &str = "PQ_CENSUS_BUDGET";

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            candidates_per_phase: 10_000,
            restarts: 20,
        }
    }
}

impl SearchBudget {
    /// Default budget, with `candidates_per_phase` taken from `PQ_CENSUS_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut b = SearchBudget::default();
        if let Some(v) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            b.candidates_per_phase = v;
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptLine {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCertificate {
    pub p: u64,
    pub q: u64,
    /// `y^-1 x y = x^r`.
    pub r: u64,
    pub x: Permutation,
    pub y: Permutation,
    pub transcript: Vec<TranscriptLine>,
}

/// Outcome of [`verify_certificate`]: every line re-derived from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub lines: Vec<TranscriptLine>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn first_failure(&self) -> Option<&TranscriptLine> {
        self.lines.iter().find(|l| !l.passed)
    }
}

fn line(check: &str, passed: bool, detail: String) -> TranscriptLine {
    TranscriptLine {
        check: check.to_string(),
        passed,
        detail,
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1 % m as u128, base as u128 % m as u128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

/// A random element of `chain`'s group of order exactly `k`, by powering; `None` if the
/// sampled element's order is not a multiple of `k`.
pub(crate) fn element_of_order(chain: &StabilizerChain, rng: &mut ChaCha8Rng, k: u64) -> Option<Permutation> {
    let g = chain.random_element_with(rng);
    let o = g.order_u64()?;
    (o % k == 0).then(|| g.pow(o / k))
}

fn check_frobenius_inputs(g: &PermGroup, p: u64, q: u64) -> Result<()> {
    if !is_prime(p) || !is_prime(q) {
        return Err(Error::InvalidArgument(format!("p = {p} and q = {q} must be prime")));
    }
    if (q - 1) % p != 0 {
        return Err(Error::InvalidArgument(format!("{p} does not divide {q} - 1")));
    }
    if g.degree() as u64 != p * q {
        return Err(Error::InvalidArgument(format!(
            "degree {} is not {p} * {q}",
            g.degree()
        )));
    }
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    Ok(())
}

/// Searches `g` (transitive of degree `pq`, `p | q - 1`) for a regular Frobenius subgroup
/// with the default budget. `Ok(None)` means the budget ran out, not that none exists.
pub fn find_regular_frobenius(g: &PermGroup, p: u64, q: u64, seed: u64) -> Result<Option<FrobeniusCertificate>> {
    find_regular_frobenius_with(g, p, q, seed, SearchBudget::default())
}

pub fn find_regular_frobenius_with(
    g: &PermGroup,
    p: u64,
    q: u64,
    seed: u64,
    budget: SearchBudget,
) -> Result<Option<FrobeniusCertificate>> {
    check_frobenius_inputs(g, p, q)?;
    let chain = StabilizerChain::build(g, seed);
    find_regular_frobenius_in(g, &chain, p, q, seed, budget)
}

/// As [`find_regular_frobenius_with`], reusing a chain already built for `g`.
pub fn find_regular_frobenius_in(
    g: &PermGroup,
    chain: &StabilizerChain,
    p: u64,
    q: u64,
    seed: u64,
    budget: SearchBudget,
) -> Result<Option<FrobeniusCertificate>> {
    check_frobenius_inputs(g, p, q)?;
    if chain.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: chain.degree(),
        });
    }
    if !(chain.order() % BigUint::from(p * q) == BigUint::from(0u32)) {
        return Ok(None);
    }
    let r0 = (2..q).find(|&r| pow_mod(r, p, q) == 1).expect("p divides q - 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf70b_e1a5);
    for _ in 0..budget.restarts {
        // phase 1: a random element of order q
        let Some(x) = (0..budget.candidates_per_phase).find_map(|_| element_of_order(chain, &mut rng, q)) else {
            continue;
        };
        // phase 2: exhaustive search for y with y^-1 x y = x^r0, over a chain whose base
        // starts along a cycle of x
        let c = x.first_moved_point().expect("x has order q > 1");
        let cycle: Vec<usize> = std::iter::successors(Some(c), |&z| Some(x.apply(z)).filter(|&w| w != c)).collect();
        let chain_x = StabilizerChain::build_with(
            g,
            seed,
            &ChainOptions {
                base_prefix: cycle,
                known_order: Some(chain.order().clone()),
            },
        );
        let target = x.pow(r0);
        let mut found = None;
        chain_x.search_conjugators(&x, &target, |y| {
            let Some(o) = y.order_u64() else { return false };
            let k = o / p;
            if o % p != 0 || k % p == 0 {
                return false;
            }
            let z = y.pow(k);
            let regular = PermGroup::new(vec![x.clone(), z.clone()])
                .and_then(|sub| sub.orbit(0))
                .is_ok_and(|orbit| orbit.len() as u64 == p * q);
            if regular {
                found = Some((z, pow_mod(r0, k, q)));
            }
            regular
        })?;
        if let Some((y, r)) = found {
            let mut cert = FrobeniusCertificate {
                p,
                q,
                r,
                x,
                y,
                transcript: Vec::new(),
            };
            cert.transcript = verify_with_chain(g, chain, &cert).lines;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Re-checks a certificate without reference to how it was found.
pub fn verify_certificate(g: &PermGroup, cert: &FrobeniusCertificate) -> Verification {
    let chain = StabilizerChain::build(g, INTERNAL_SEED);
    verify_with_chain(g, &chain, cert)
}

fn verify_with_chain(g: &PermGroup, chain: &StabilizerChain, cert: &FrobeniusCertificate) -> Verification {
    let (p, q, r) = (cert.p, cert.q, cert.r);
    let n = g.degree();
    let pq = p.checked_mul(q).unwrap_or(0);
    let mut lines = Vec::new();
    let degrees_ok = cert.x.degree() == n && cert.y.degree() == n;
    lines.push(line(
        "degree",
        degrees_ok && pq == n as u64,
        format!(
            "group degree {n}, p*q = {pq}, x and y of degree {} and {}",
            cert.x.degree(),
            cert.y.degree()
        ),
    ));
    if !degrees_ok {
        return Verification { lines };
    }
    lines.push(line(
        "x in G",
        chain.contains(&cert.x).unwrap_or(false),
        "sifted through a fresh chain".into(),
    ));
    lines.push(line(
        "y in G",
        chain.contains(&cert.y).unwrap_or(false),
        "sifted through a fresh chain".into(),
    ));
    let ox = cert.x.element_order();
    let oy = cert.y.element_order();
    lines.push(line("order(x) = q", ox == BigUint::from(q), format!("order(x) = {ox}")));
    lines.push(line("order(y) = p", oy == BigUint::from(p), format!("order(y) = {oy}")));
    let relation = q > 1 && r % q != 1 && pow_mod(r % q, p, q) == 1 && cert.x.conjugate_by(&cert.y) == cert.x.pow(r);
    lines.push(line(
        "y^-1 x y = x^r",
        relation,
        format!("r = {r}, r^p mod q = {}", if q > 1 { pow_mod(r % q, p, q) } else { 0 }),
    ));
    let sub = PermGroup::new(vec![cert.x.clone(), cert.y.clone()]).expect("same degree");
    let sub_chain = StabilizerChain::build_with(
        &sub,
        INTERNAL_SEED,
        &ChainOptions {
            base_prefix: vec![0],
            ..Default::default()
        },
    );
    lines.push(line(
        "|<x,y>| = pq",
        sub_chain.order() == &BigUint::from(pq),
        format!("|<x,y>| = {}", sub_chain.order()),
    ));
    let orbit = sub.orbit(0).map(|o| o.len()).unwrap_or(0);
    lines.push(line(
        "<x,y> transitive",
        orbit == n,
        format!("orbit of 0 has {orbit} points"),
    ));
    let stab: BigUint = sub_chain
        .transversal_lengths()
        .iter()
        .skip(1)
        .map(|&l| BigUint::from(l))
        .product();
    lines.push(line(
        "point stabilizer trivial",
        stab == BigUint::from(1u32),
        format!("|<x,y>_0| = {stab}"),
    ));
    lines.push(line(
        "pq < |G|",
        BigUint::from(pq) < *chain.order(),
        format!("|G| = {}", chain.order()),
    ));
    Verification { lines }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

/// Tri-state: a refutation is only produced by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RegularSearch {
    Found { subgroup: PermGroup },
    Refuted,
    Unknown,
}

pub const EXHAUSTIVE_ORDER_BOUND: u64 = 100_000;

/// Closes `elements` under multiplication by `gens`, failing as soon as the group would
/// exceed `limit` elements or contain a non-identity element with a fixed point.
fn semiregular_closure(mut elements: Vec<Permutation>, gens: &[Permutation], limit: usize) -> Option<Vec<Permutation>> {
    let mut seen: HashSet<Permutation> = elements.iter().cloned().collect();
    let mut queue: VecDeque<usize> = (0..elements.len()).collect();
    while let Some(i) = queue.pop_front() {
        for s in gens {
            let h = &elements[i] * s;
            if seen.contains(&h) {
                continue;
            }
            if !h.is_identity() && h.fixed_points() > 0 {
                return None;
            }
            if elements.len() == limit {
                return None;
            }
            seen.insert(h.clone());
            elements.push(h);
            queue.push_back(elements.len() - 1);
        }
    }
    Some(elements)
}

fn exhaustive_regular(
    candidates: &[Vec<Permutation>],
    current: Vec<Permutation>,
    gens: Vec<Permutation>,
    n: usize,
) -> Option<Vec<Permutation>> {
    if current.len() == n {
        return Some(gens);
    }
    let mut covered = vec![false; n];
    for e in &current {
        covered[e.apply(0)] = true;
    }
    let j = covered.iter().position(|c| !c)?;
    for c in &candidates[j] {
        let mut next_gens = gens.clone();
        next_gens.push(c.clone());
        if let Some(closed) = semiregular_closure(current.clone(), &next_gens, n) {
            if let Some(found) = exhaustive_regular(candidates, closed, next_gens, n) {
                return Some(found);
            }
        }
    }
    None
}

/// Looks for a subgroup of `g` acting regularly. Exhaustive mode needs `|g| <= 10^5`.
pub fn regular_subgroup_search(g: &PermGroup, mode: SearchMode, seed: u64) -> Result<RegularSearch> {
    regular_subgroup_search_with(g, mode, seed, SearchBudget::default())
}

pub fn regular_subgroup_search_with(
    g: &PermGroup,
    mode: SearchMode,
    seed: u64,
    budget: SearchBudget,
) -> Result<RegularSearch> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = g.degree();
    let chain = StabilizerChain::build(g, seed);
    let found = |gens: Vec<Permutation>| -> Result<RegularSearch> {
        let gens = if gens.is_empty() {
            vec![Permutation::identity(n)]
        } else {
            gens
        };
        Ok(RegularSearch::Found {
            subgroup: PermGroup::new(gens)?.with_label("regular subgroup"),
        })
    };
    match mode {
        SearchMode::Exhaustive => {
            let elements = chain
                .elements(EXHAUSTIVE_ORDER_BOUND)
                .ok_or_else(|| Error::TooLargeForExhaustive {
                    order: chain.order().to_string(),
                    bound: EXHAUSTIVE_ORDER_BOUND,
                })?;
            if !(chain.order() % BigUint::from(n)).eq(&BigUint::from(0u32)) {
                return Ok(RegularSearch::Refuted);
            }
            let mut candidates = vec![Vec::new(); n];
            for e in elements {
                if e.fixed_points() == 0 {
                    candidates[e.apply(0)].push(e);
                }
            }
            for c in &mut candidates {
                c.sort();
            }
            match exhaustive_regular(&candidates, vec![Permutation::identity(n)], Vec::new(), n) {
                Some(gens) => found(gens),
                None => Ok(RegularSearch::Refuted),
            }
        }
        SearchMode::Randomized => {
            if n == 1 {
                return found(Vec::new());
            }
            if let Some((p, q)) = odd_semiprime_split(n as u64) {
                if (q - 1) % p == 0 {
                    if let Some(cert) = find_regular_frobenius_with(g, p, q, seed, budget)? {
                        return found(vec![cert.x, cert.y]);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4e67_1a2d);
            let tries = budget.candidates_per_phase * budget.restarts as u64;
            let n64 = n as u64;
            let sample = |rng: &mut ChaCha8Rng| -> Option<Permutation> {
                let h = chain.random_element_with(rng);
                let o = h.order_u64()?;
                let d = o.gcd(&n64);
                let a = h.pow(o / d);
                (a.fixed_points() == 0).then_some(a)
            };
            for _ in 0..tries {
                let Some(a) = sample(&mut rng) else { continue };
                if a.order_u64() == Some(n64) {
                    return found(vec![a]);
                }
                let Some(b) = sample(&mut rng) else { continue };
                let gens = vec![a, b];
                if let Some(closed) = semiregular_closure(vec![Permutation::identity(n)], &gens, n) {
                    if closed.len() == n {
                        return found(gens);
                    }
                }
            }
            Ok(RegularSearch::Unknown)
        }
    }
}

/// `(p, q)` with `p < q` primes and `n = pq`.
fn odd_semiprime_split(n: u64) -> Option<(u64, u64)> {
    let p = (2..).take_while(|d| d * d <= n).find(|d| n % d == 0)?;
    let q = n / p;
    (p < q && is_prime(p) && is_prime(q)).then_some((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{act_on_cosets, act_on_pairs, projective_line_action};
    use crate::field::FiniteField;

    fn a7_pairs() -> PermGroup {
        act_on_pairs(&PermGroup::alternating(7)).unwrap().target
    }

    #[test]
    fn a7_on_pairs_has_f21() {
        let g = a7_pairs();
        let cert = find_regular_frobenius(&g, 3, 7, 1).unwrap().expect("found");
        assert!([2, 4].contains(&cert.r));
        assert!(cert.transcript.iter().all(|l| l.passed));
        assert!(verify_certificate(&g, &cert).passed());
    }

    #[test]
    fn psl211_on_a4_cosets_has_f55() {
        let f = FiniteField::new(11).unwrap();
        let psl = projective_line_action(&f).unwrap();
        let chain = StabilizerChain::build(&psl, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // A_4 = <a, b> with a^2 = b^3 = (ab)^3 = 1
        let a4 = loop {
            let a = element_of_order(&chain, &mut rng, 2);
            let b = element_of_order(&chain, &mut rng, 3);
            if let (Some(a), Some(b)) = (a, b) {
                if (&a * &b).order_u64() == Some(3) {
                    break vec![a, b];
                }
            }
        };
        let g = act_on_cosets(&psl, &a4).unwrap().target;
        assert_eq!(g.degree(), 55);
        let cert = find_regular_frobenius(&g, 5, 11, 2).unwrap().expect("found");
        assert!([3, 4, 5, 9].contains(&cert.r));
        assert!(verify_certificate(&g, &cert).passed());
    }

    #[test]
    fn mutated_certificates_fail() {
        let g = a7_pairs();
        let cert = find_regular_frobenius(&g, 3, 7, 5).unwrap().unwrap();

        let mut no_y = cert.clone();
        no_y.y = Permutation::identity(21);
        let v = verify_certificate(&g, &no_y);
        assert!(!v.passed());
        assert_eq!(v.first_failure().unwrap().check, "order(y) = p");

        let mut r1 = cert.clone();
        r1.r = 1;
        let v = verify_certificate(&g, &r1);
        assert_eq!(v.first_failure().unwrap().check, "y^-1 x y = x^r");

        let mut wrong_p = cert.clone();
        wrong_p.p = 5;
        assert!(!verify_certificate(&g, &wrong_p).passed());

        let mut swapped = cert.clone();
        std::mem::swap(&mut swapped.x, &mut swapped.y);
        assert!(!verify_certificate(&g, &swapped).passed());

        // an odd permutation is not in A_7
        let mut outsider = cert.clone();
        let t = act_on_pairs(&PermGroup::symmetric(7)).unwrap().target.generators()[0].clone();
        outsider.x = t;
        let v = verify_certificate(&g, &outsider);
        assert_eq!(v.first_failure().unwrap().check, "x in G");
    }

    #[test]
    fn input_contract() {
        let g = a7_pairs();
        assert!(find_regular_frobenius(&g, 3, 5, 1).is_err()); // degree mismatch and 3 | 4 fails
        assert!(find_regular_frobenius(&g, 7, 3, 1).is_err());
        let c = PermGroup::cyclic(21);
        // cyclic group of order 21 has no element of order 3 normalizing nontrivially
        assert_eq!(
            find_regular_frobenius_with(
                &c,
                3,
                7,
                1,
                SearchBudget {
                    candidates_per_phase: 50,
                    restarts: 2
                }
            )
            .unwrap(),
            None
        );
    }

    #[test]
    fn petersen_group_has_no_regular_subgroup() {
        let s5_pairs = act_on_pairs(&PermGroup::symmetric(5)).unwrap().target;
        assert_eq!(
            regular_subgroup_search(&s5_pairs, SearchMode::Exhaustive, 1).unwrap(),
            RegularSearch::Refuted
        );
    }

    #[test]
    fn regular_groups_are_their_own_witness() {
        let c6 = PermGroup::cyclic(6);
        match regular_subgroup_search(&c6, SearchMode::Exhaustive, 1).unwrap() {
            RegularSearch::Found { subgroup } => {
                assert_eq!(StabilizerChain::build(&subgroup, 0).order(), &BigUint::from(6u32));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            regular_subgroup_search(&c6, SearchMode::Randomized, 1).unwrap(),
            RegularSearch::Found { .. }
        ));
    }

    #[test]
    fn a7_pairs_regular_subgroup_is_frobenius() {
        let g = a7_pairs();
        for mode in [SearchMode::Exhaustive, SearchMode::Randomized] {
            match regular_subgroup_search(&g, mode, 4).unwrap() {
                RegularSearch::Found { subgroup } => {
                    assert_eq!(StabilizerChain::build(&subgroup, 0).order(), &BigUint::from(21u32));
                    assert!(subgroup.is_transitive());
                    // F_21 is non-abelian
                    let gens = subgroup.generators();
                    let commute = gens.iter().all(|a| gens.iter().all(|b| &(a * b) == &(b * a)));
                    assert!(!commute || gens.len() == 1);
                }
                other => panic!("{mode:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn exhaustive_bound() {
        let big = PermGroup::alternating(9);
        assert!(matches!(
            regular_subgroup_search(&big, SearchMode::Exhaustive, 0),
            Err(Error::TooLargeForExhaustive { .. })
        ));
    }

    #[test]
    fn budget_env_override() {
        // parsing only; the default is the published constant
        assert_eq!(SearchBudget::default().candidates_per_phase, 10_000);
        assert_eq!(SearchBudget::default().restarts, 20);
    }
}
