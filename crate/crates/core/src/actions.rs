//! New permutation actions from old ones: k-subsets, right cosets, and the
//! projective actions of `PSL(n, s)` over small fields.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::chain::{StabilizerChain, INTERNAL_SEED};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::group::{GroupFile, PermGroup};
use crate::perm::Permutation;

pub const DEFAULT_INDEX_BOUND: usize = 100_000;

/// A group together with an induced action. Generator `i` of `target` is the image of
/// generator `i` of `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedAction {
    pub source: PermGroup,
    pub target: PermGroup,
    pub point_labels: Vec<String>,
}

impl PointedAction {
    /// Group-file form of the target with its point labels.
    pub fn to_group_file(&self) -> GroupFile {
        let mut file = GroupFile::from(self.target.clone());
        file.point_labels = Some(self.point_labels.clone());
        file
    }

    pub fn degree(&self) -> usize {
        self.target.degree()
    }

    fn unlabelled(group: PermGroup) -> Self {
        let labels = (0..group.degree()).map(|i| i.to_string()).collect();
        PointedAction {
            source: group.clone(),
            target: group,
            point_labels: labels,
        }
    }
}

fn combinations(m: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| (cur[i] as usize) < m - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Induced action on the 2-subsets, listed lexicographically.
pub fn act_on_pairs(g: &PermGroup) -> Result<PointedAction> {
    if g.degree() < 3 {
        return Err(Error::InvalidArgument(format!(
            "pair action needs degree at least 3, got {}",
            g.degree()
        )));
    }
    act_on_subsets(g, 2)
}

/// Induced action on the `k`-subsets, listed lexicographically.
pub fn act_on_subsets(g: &PermGroup, k: usize) -> Result<PointedAction> {
    let m = g.degree();
    if k == 0 || k >= m {
        return Err(Error::InvalidArgument(format!("{k}-subsets of a {m}-set")));
    }
    let subsets = combinations(m, k);
    let index: HashMap<&[u32], u32> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i as u32))
        .collect();
    let mut gens = Vec::with_capacity(g.generators().len());
    let mut buf = vec![0u32; k];
    for s in g.generators() {
        let images = subsets
            .iter()
            .map(|set| {
                for (b, &x) in buf.iter_mut().zip(set) {
                    *b = s.apply(x as usize) as u32;
                }
                buf.sort_unstable();
                index[buf.as_slice()]
            })
            .collect();
        gens.push(Permutation::from_vec_unchecked(images));
    }
    let labels = subsets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    Ok(PointedAction {
        source: g.clone(),
        target: PermGroup::new(gens)?.with_label(format!("{} on {k}-sets", g.label())),
        point_labels: labels,
    })
}

/// Action on the right cosets `Hx` of `H = <subgroup_gens>`, with the default index bound.
pub fn act_on_cosets(g: &PermGroup, subgroup_gens: &[Permutation]) -> Result<PointedAction> {
    act_on_cosets_bounded(g, subgroup_gens, DEFAULT_INDEX_BOUND)
}

pub fn act_on_cosets_bounded(g: &PermGroup, subgroup_gens: &[Permutation], bound: usize) -> Result<PointedAction> {
    let g_chain = StabilizerChain::build(g, INTERNAL_SEED);
    act_on_cosets_with_chain(g, &g_chain, subgroup_gens, bound)
}

/// Same as [`act_on_cosets_bounded`] when a chain for `g` is already at hand.
pub fn act_on_cosets_with_chain(
    g: &PermGroup,
    g_chain: &StabilizerChain,
    subgroup_gens: &[Permutation],
    bound: usize,
) -> Result<PointedAction> {
    for (i, h) in subgroup_gens.iter().enumerate() {
        if !g_chain.contains(h)? {
            return Err(Error::NotAMember { index: i });
        }
    }
    let h_group = if subgroup_gens.is_empty() {
        PermGroup::trivial(g.degree())
    } else {
        PermGroup::new(subgroup_gens.to_vec())?
    };
    let h_chain = StabilizerChain::build(&h_group, INTERNAL_SEED);
    let index = g_chain.order() / h_chain.order();
    if index > BigUint::from(bound) {
        return Err(Error::IndexTooLarge { bound });
    }

    // Δ^x is constant on a coset Hx when Δ is an H-orbit; it buckets candidates before the
    // membership test.
    let orbits = h_group.orbits();
    let delta: Vec<usize> = orbits.into_iter().min_by_key(Vec::len).unwrap_or_default();
    let key = |x: &Permutation| -> Vec<u32> {
        let mut k: Vec<u32> = delta.iter().map(|&d| x.apply(d) as u32).collect();
        k.sort_unstable();
        k
    };

    let id = Permutation::identity(g.degree());
    let mut reps = vec![id.clone()];
    let mut inv_reps = vec![id.clone()];
    let mut labels = vec!["H".to_string()];
    let mut buckets: HashMap<Vec<u32>, Vec<u32>> = HashMap::from([(key(&id), vec![0])]);
    let gens = g.generators();
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut k = 0;
    while k < reps.len() {
        for (si, s) in gens.iter().enumerate() {
            let y = &reps[k] * s;
            let ky = key(&y);
            let bucket = buckets.entry(ky).or_default();
            let found = bucket
                .iter()
                .copied()
                .find(|&j| h_chain.contains(&(&y * &inv_reps[j as usize])).expect("degrees agree"));
            let j = match found {
                Some(j) => j,
                None => {
                    let j = reps.len() as u32;
                    if reps.len() >= bound {
                        return Err(Error::IndexTooLarge { bound });
                    }
                    bucket.push(j);
                    labels.push(format!("{}*g{si}", labels[k]));
                    inv_reps.push(y.inverse());
                    reps.push(y);
                    j
                }
            };
            images[si].push(j);
        }
        k += 1;
    }
    debug_assert_eq!(BigUint::from(reps.len()), index);
    let target_gens = images.into_iter().map(Permutation::from_vec_unchecked).collect();
    Ok(PointedAction {
        source: g.clone(),
        target: PermGroup::new(target_gens)?.with_label(format!("{} on {} cosets", g.label(), reps.len())),
        point_labels: labels,
    })
}

/// Fractional linear map `x -> (a x + b) / (c x + d)` on the projective line, with the
/// point `inf` at index 0 and field element `e` at index `1 + e`.
fn mobius(field: &FiniteField, [a, b, c, d]: [Elem; 4]) -> Permutation {
    let n = field.size() + 1;
    let mut images = vec![0u32; n];
    images[0] = if c == 0 {
        0
    } else {
        1 + field.mul(a, field.inv(c)) as u32
    };
    for x in field.elements() {
        let num = field.add(field.mul(a, x), b);
        let den = field.add(field.mul(c, x), d);
        images[1 + x as usize] = if den == 0 {
            0
        } else {
            1 + field.mul(num, field.inv(den)) as u32
        };
    }
    debug_assert!(n > 1);
    Permutation::from_vec_unchecked(images)
}

pub fn projective_line_labels(field: &FiniteField) -> Vec<String> {
    std::iter::once("inf".to_string())
        .chain(field.elements().map(|e| e.to_string()))
        .collect()
}

/// `PSL(2, s)` on the `s + 1` points of the projective line, generated by
/// `x -> x + 1`, `x -> w^2 x` and `x -> -1/x` (`w` primitive).
pub fn projective_line_action(field: &FiniteField) -> Result<PermGroup> {
    if field.size() < 4 {
        return Err(Error::InvalidArgument(format!("PSL(2,{}) needs s >= 4", field.size())));
    }
    let w = field.primitive_element();
    let one = 1;
    let minus_one = field.neg(one);
    let gens = vec![
        mobius(field, [one, one, 0, one]),
        mobius(field, [w, 0, 0, field.inv(w)]),
        mobius(field, [0, minus_one, one, 0]),
    ];
    Ok(PermGroup::new(gens)?.with_label(format!("PSL(2,{})", field.size())))
}

/// `PGL(2, s)` on the projective line: the `PSL(2, s)` generators (same order) plus `x -> w x`.
pub fn projective_line_pgl(field: &FiniteField) -> Result<PermGroup> {
    let psl = projective_line_action(field)?;
    let mut gens = psl.generators().to_vec();
    gens.push(mobius(field, [field.primitive_element(), 0, 0, 1]));
    Ok(PermGroup::new(gens)?.with_label(format!("PGL(2,{})", field.size())))
}

/// `PGL(2, p)` for the prime subfield, as maps of the projective line over `field`.
/// Every determinant in `F_p` is a square in `F_{p^2}`, so for `|field| = p^2` this lies in
/// `PSL(2, p^2)`.
pub fn subfield_pgl2(field: &FiniteField) -> Result<Vec<Permutation>> {
    let p = field.characteristic() as usize;
    let w = (1..p)
        .map(|e| e as Elem)
        .find(|&e| field.mult_order(e) == p - 1)
        .ok_or_else(|| Error::InvalidArgument("prime subfield has no generator".into()))?;
    let one = 1;
    Ok(vec![
        mobius(field, [one, one, 0, one]),
        mobius(field, [w, 0, 0, one]),
        mobius(field, [0, field.neg(one), one, 0]),
    ])
}

type Matrix = Vec<Vec<Elem>>;

fn rref(field: &FiniteField, mut rows: Matrix) -> Matrix {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = field.mul(f, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn times_matrix(field: &FiniteField, row: &[Elem], m: &Matrix) -> Vec<Elem> {
    let n = m.len();
    (0..n)
        .map(|j| {
            row.iter()
                .enumerate()
                .fold(0, |acc, (i, &x)| field.add(acc, field.mul(x, m[i][j])))
        })
        .collect()
}

/// Generators of `SL(n, s)`: transvections `I + a E_{0,1}` for `a` running over an additive
/// basis `1, w, .., w^{k-1}`, and an `n`-cycle permutation matrix with determinant 1.
fn sl_generators(n: usize, field: &FiniteField) -> Vec<Matrix> {
    let identity: Matrix = (0..n).map(|i| (0..n).map(|j| (i == j) as Elem).collect()).collect();
    let mut gens = Vec::new();
    let w = field.primitive_element();
    for e in 0..field.extension_degree() as usize {
        let mut t = identity.clone();
        t[0][1] = field.pow(w, e);
        gens.push(t);
    }
    let mut c: Matrix = vec![vec![0; n]; n];
    for i in 0..n {
        c[i][(i + 1) % n] = 1;
    }
    // sign of an n-cycle is (-1)^(n-1)
    if n % 2 == 0 {
        c[0][1] = field.neg(1);
    }
    gens.push(c);
    gens
}

fn gaussian_binomial(n: usize, k: usize, s: u64) -> Option<u64> {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul((s as u128).checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul((s as u128).checked_pow((i + 1) as u32)? - 1)?;
    }
    u64::try_from(num / den).ok()
}

fn enumerate_subspaces(n: usize, field: &FiniteField, dim: usize) -> Vec<Matrix> {
    let s = field.size();
    let mut out = Vec::new();
    for pivots in combinations(n, dim) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &pivots;
                ((pc as usize + 1)..n)
                    .filter(move |c| !pivots.contains(&(*c as u32)))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = s.pow(free.len() as u32);
        for code in 0..total {
            let mut m: Matrix = vec![vec![0; n]; dim];
            for (r, &pc) in pivots.iter().enumerate() {
                m[r][pc as usize] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                m[r][col] = (c % s) as Elem;
                c /= s;
            }
            out.push(m);
        }
    }
    out.sort();
    out
}

fn subspace_label(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("<{}>", rows.join("|"))
}

/// `PSL(n, s)` acting on the `dim`-dimensional subspaces of `F_s^n` (row vectors, `v -> vM`),
/// points ordered by reduced echelon form.
pub fn projective_subspace_action(n: usize, field: &FiniteField, dim: usize) -> Result<PermGroup> {
    Ok(projective_subspace_action_labelled(n, field, dim)?.target)
}

pub fn projective_subspace_action_labelled(n: usize, field: &FiniteField, dim: usize) -> Result<PointedAction> {
    let s = field.size() as u64;
    if n < 2 || dim == 0 || dim >= n {
        return Err(Error::InvalidArgument(format!("{dim}-subspaces of F^{n}")));
    }
    let vectors = s.checked_pow(n as u32).unwrap_or(u64::MAX);
    let count = gaussian_binomial(n, dim, s).unwrap_or(u64::MAX);
    if vectors > 1 << 20 || count > DEFAULT_INDEX_BOUND as u64 {
        return Err(Error::InvalidArgument(format!(
            "{dim}-subspaces of F_{s}^{n}: {count} points exceed the enumeration bound"
        )));
    }
    let spaces = enumerate_subspaces(n, field, dim);
    debug_assert_eq!(spaces.len() as u64, count);
    let index: HashMap<&Matrix, u32> = spaces.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let mut gens = Vec::new();
    for mat in sl_generators(n, field) {
        let images = spaces
            .iter()
            .map(|sp| {
                let rows = sp.iter().map(|r| times_matrix(field, r, &mat)).collect();
                index[&rref(field, rows)]
            })
            .collect();
        gens.push(Permutation::from_vec_unchecked(images));
    }
    let group = PermGroup::new(gens)?.with_label(format!("PSL({n},{s}) on {dim}-spaces"));
    Ok(PointedAction {
        point_labels: spaces.iter().map(subspace_label).collect(),
        ..PointedAction::unlabelled(group)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_chain;

    fn order(g: &PermGroup) -> BigUint {
        build_chain(g, 1).order().clone()
    }

    fn psl2_order(q: u64) -> BigUint {
        let d = if q % 2 == 1 { 2u64 } else { 1 };
        BigUint::from(q * (q * q - 1) / d)
    }

    #[test]
    fn pairs_actions() {
        let a7 = PermGroup::alternating(7);
        let pa = act_on_pairs(&a7).unwrap();
        assert_eq!(pa.degree(), 21);
        assert_eq!(pa.point_labels[0], "{0,1}");
        assert_eq!(pa.point_labels[20], "{5,6}");
        let a5 = act_on_pairs(&PermGroup::alternating(5)).unwrap();
        assert_eq!(a5.degree(), 10);
        assert_eq!(order(&a5.target), BigUint::from(60u32));
        assert_eq!(act_on_pairs(&PermGroup::symmetric(3)).unwrap().degree(), 3);
        assert!(act_on_pairs(&PermGroup::symmetric(2)).is_err());
    }

    #[test]
    fn triples_action() {
        let a = act_on_subsets(&PermGroup::alternating(7), 3).unwrap();
        assert_eq!(a.degree(), 35);
        assert_eq!(order(&a.target), BigUint::from(2520u32));
    }

    #[test]
    fn projective_lines() {
        for (s, deg) in [(7u64, 8usize), (11, 12), (9, 10), (4, 5), (8, 9), (25, 26)] {
            let f = FiniteField::new(s).unwrap();
            let g = projective_line_action(&f).unwrap();
            assert_eq!(g.degree(), deg);
            assert_eq!(order(&g), psl2_order(s), "PSL(2,{s})");
        }
        assert!(projective_line_action(&FiniteField::new(3).unwrap()).is_err());
    }

    #[test]
    fn pgl_has_twice_the_order_in_odd_characteristic() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!(order(&projective_line_pgl(&f).unwrap()), BigUint::from(336u32));
        let f9 = FiniteField::new(9).unwrap();
        let sub = PermGroup::new(subfield_pgl2(&f9).unwrap()).unwrap();
        assert_eq!(order(&sub), BigUint::from(24u32));
    }

    #[test]
    fn subspace_actions() {
        let f2 = FiniteField::new(2).unwrap();
        let lines4 = projective_subspace_action(4, &f2, 2).unwrap();
        assert_eq!(lines4.degree(), 35);
        assert_eq!(order(&lines4), BigUint::from(20160u32));
        let lines5 = projective_subspace_action(5, &f2, 2).unwrap();
        assert_eq!(lines5.degree(), 155);
        assert_eq!(order(&lines5), BigUint::from(9999360u32));
        let points4 = projective_subspace_action(4, &f2, 1).unwrap();
        assert_eq!(points4.degree(), 15);
        let f4 = FiniteField::new(4).unwrap();
        let psl34 = projective_subspace_action(3, &f4, 1).unwrap();
        assert_eq!(psl34.degree(), 21);
        assert_eq!(order(&psl34), BigUint::from(20160u32));
        let f3 = FiniteField::new(3).unwrap();
        // SL(4,3) has centre of order 2
        assert_eq!(
            order(&projective_subspace_action(4, &f3, 1).unwrap()),
            BigUint::from(6065280u32)
        );
        assert!(projective_subspace_action(3, &f2, 3).is_err());
    }

    #[test]
    fn coset_actions() {
        let f = FiniteField::new(11).unwrap();
        let psl = projective_line_action(&f).unwrap();
        // H = G gives one coset; H = 1 gives the regular action
        let whole = act_on_cosets(&psl, psl.generators()).unwrap();
        assert_eq!(whole.degree(), 1);
        let regular = act_on_cosets(&psl, &[]).unwrap();
        assert_eq!(regular.degree(), 660);
        assert!(regular.target.generators().iter().all(|g| g.fixed_points() == 0));
        let odd = Permutation::parse_cycles(12, "(0 1)").unwrap();
        assert_eq!(act_on_cosets(&psl, &[odd]).unwrap_err(), Error::NotAMember { index: 0 });
        assert!(matches!(
            act_on_cosets_bounded(&psl, &[], 100),
            Err(Error::IndexTooLarge { .. })
        ));
    }

    #[test]
    fn coset_action_degree_times_subgroup_order() {
        let a6 = PermGroup::alternating(6);
        let h = vec![
            Permutation::parse_cycles(6, "(0 1 2)").unwrap(),
            Permutation::parse_cycles(6, "(0 1)(3 4)").unwrap(),
        ];
        let act = act_on_cosets(&a6, &h).unwrap();
        let h_order = order(&PermGroup::new(h).unwrap());
        assert_eq!(BigUint::from(act.degree()) * h_order, BigUint::from(360u32));
        assert_eq!(order(&act.target), BigUint::from(360u32));
    }
}
