//! Base and strong generating sets.
//!
//! Construction is randomized Schreier-Sims (product-replacement random elements,
//! sifted until a run of consecutive successes) followed by a deterministic pass
//! that sifts every Schreier generator at every level. The verified chain does not
//! depend on the seed for correctness, only for its particular strong generators.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

/// Consecutive trivially-sifting random elements that end the random phase.
const RANDOM_STREAK: usize = 20;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Indices into the chain's strong generators; all fix the earlier base points.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    slot: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut slot = vec![NONE; degree];
        slot[base] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base as u32],
            slot,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
        }
    }

    fn extend(&mut self, strong: &[Permutation]) {
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k] as usize;
            for &gi in &self.gens {
                let y = strong[gi].apply(x);
                if self.slot[y] == NONE {
                    let rep = &self.reps[k] * &strong[gi];
                    self.slot[y] = self.reps.len() as u32;
                    self.orbit.push(y as u32);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            k += 1;
        }
    }

    #[inline]
    fn rep_of(&self, point: usize) -> Option<&Permutation> {
        match self.slot[point] {
            NONE => None,
            s => Some(&self.reps[s as usize]),
        }
    }
}

/// Knobs for chain construction. The defaults give a fully verified chain.
#[derive(Clone, Debug, Default)]
pub struct ChainOptions {
    /// Points forced to the front of the base, in order.
    pub base_prefix: Vec<usize>,
    /// When the group order is already proven (for example a faithful induced action of a
    /// group with a verified chain), the random phase stops as soon as the transversal product
    /// reaches it. A partial chain's product never exceeds the true order, so reaching it
    /// certifies completeness and the Schreier-generator pass is skipped.
    pub known_order: Option<BigUint>,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

/// Product-replacement random elements, seeded.
pub(crate) struct RandomElements {
    state: Vec<Permutation>,
    acc: Permutation,
    rng: ChaCha8Rng,
}

impl RandomElements {
    pub(crate) fn new(gens: &[Permutation], seed: u64) -> Self {
        let degree = gens[0].degree();
        let mut state: Vec<Permutation> = gens.to_vec();
        while state.len() < 10 {
            let g = gens[state.len() % gens.len()].clone();
            state.push(g);
        }
        let mut r = RandomElements {
            state,
            acc: Permutation::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..50 {
            r.next();
        }
        r
    }

    pub(crate) fn next(&mut self) -> Permutation {
        let n = self.state.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let rhs = if self.rng.gen_bool(0.5) {
            self.state[j].clone()
        } else {
            self.state[j].inverse()
        };
        self.state[i] = if self.rng.gen_bool(0.5) {
            &self.state[i] * &rhs
        } else {
            &rhs * &self.state[i]
        };
        self.acc = &self.acc * &self.state[i];
        self.acc.clone()
    }
}

impl StabilizerChain {
    pub fn build(group: &PermGroup, seed: u64) -> Self {
        Self::build_with(group, seed, &ChainOptions::default())
    }

    pub fn build_with(group: &PermGroup, seed: u64, options: &ChainOptions) -> Self {
        let degree = group.degree();
        let mut chain = StabilizerChain {
            degree,
            strong: Vec::new(),
            levels: options.base_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            order: BigUint::one(),
        };
        for g in group.generators() {
            let (h, _) = chain.sift_from(g.clone(), 0);
            if !h.is_identity() {
                chain.add_strong(h);
            }
        }
        chain.refresh_order();

        let reached = |c: &StabilizerChain| options.known_order.as_ref().is_some_and(|k| &c.order >= k);
        if !chain.strong.is_empty() && !reached(&chain) {
            let mut random = RandomElements::new(group.generators(), seed);
            let mut streak = 0;
            // With a known order the streak rule is only a safety net against a wrong target.
            let limit = if options.known_order.is_some() {
                10 * RANDOM_STREAK
            } else {
                RANDOM_STREAK
            };
            while streak < limit {
                let (h, _) = chain.sift_from(random.next(), 0);
                if h.is_identity() {
                    streak += 1;
                } else {
                    chain.add_strong(h);
                    chain.refresh_order();
                    streak = 0;
                    if reached(&chain) {
                        break;
                    }
                }
            }
        }
        if !(reached(&chain) && options.known_order.as_ref() == Some(&chain.order)) {
            chain.verify_schreier_generators();
        }
        chain.refresh_order();
        chain
    }

    /// Deterministic completion: every Schreier generator at level `i` must sift to the
    /// identity through levels `i+1..`. Residues become new strong generators.
    fn verify_schreier_generators(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let level = i - 1;
            match self.find_failing_schreier_generator(level) {
                None => i -= 1,
                Some(residue) => {
                    let touched = self.add_strong(residue);
                    i = touched + 1;
                }
            }
        }
    }

    fn find_failing_schreier_generator(&self, level: usize) -> Option<Permutation> {
        let lv = &self.levels[level];
        for (k, &beta) in lv.orbit.iter().enumerate() {
            for &gi in &lv.gens {
                let s = &self.strong[gi];
                let image = s.apply(beta as usize);
                let target = lv.slot[image] as usize;
                // u_beta * s * u_{beta^s}^-1
                let sg = &(&lv.reps[k] * s) * &lv.inv_reps[target];
                if sg.is_identity() {
                    continue;
                }
                let (h, _) = self.sift_from(sg, level + 1);
                if !h.is_identity() {
                    return Some(h);
                }
            }
        }
        None
    }

    /// Adds `h` (not the identity) as a strong generator; returns the deepest level it joined.
    fn add_strong(&mut self, h: Permutation) -> usize {
        let depth = self
            .levels
            .iter()
            .position(|l| h.apply(l.base) != l.base)
            .unwrap_or(self.levels.len());
        if depth == self.levels.len() {
            let b = h.first_moved_point().expect("identity is never added");
            self.levels.push(Level::new(b, self.degree));
        }
        let idx = self.strong.len();
        self.strong.push(h);
        for lv in &mut self.levels[..=depth] {
            lv.gens.push(idx);
            lv.extend(&self.strong);
        }
        depth
    }

    fn refresh_order(&mut self) {
        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
    }

    /// Sifts `g` starting at `start`; returns the residue and the level where sifting stopped
    /// (`levels.len()` when it passed every level).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (i, lv) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(lv.base);
            match lv.slot[beta] {
                NONE => return (g, i),
                s => g = &g * &lv.inv_reps[s as usize],
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn transversal_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Basic orbit at `level` with its coset representatives (`base^rep = point`).
    pub fn transversal(&self, level: usize) -> impl Iterator<Item = (usize, &Permutation)> {
        let lv = &self.levels[level];
        lv.orbit.iter().zip(&lv.reps).map(|(&p, r)| (p as usize, r))
    }

    /// Strong generators fixing the first `level` base points; they generate that stabilizer.
    pub fn stabilizer_generators(&self, level: usize) -> Vec<Permutation> {
        let base = self.base();
        self.strong
            .iter()
            .filter(|g| base[..level.min(base.len())].iter().all(|&b| g.apply(b) == b))
            .cloned()
            .collect()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        let (h, _) = self.sift_from(g.clone(), 0);
        Ok(h.is_identity())
    }

    /// Uniformly distributed element: one random coset representative per level.
    pub fn random_element(&self, seed: u64) -> Permutation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_element_with(&mut rng)
    }

    pub fn random_element_with<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lv in self.levels.iter().rev() {
            let k = rng.gen_range(0..lv.reps.len());
            g = &g * &lv.reps[k];
        }
        g
    }

    /// Every element, or `None` if the order exceeds `limit`.
    pub fn elements(&self, limit: u64) -> Option<Vec<Permutation>> {
        if self.order > BigUint::from(limit) {
            return None;
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lv.reps.len());
            for g in &out {
                for r in &lv.reps {
                    next.push(g * r);
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Depth-first search for `y` in the group with `y^-1 x y = target`, calling `accept` on
    /// each solution until it returns `true`. Images of base points are chosen level by
    /// level; fixing `y` on one point of an `x`-cycle forces it on the whole cycle, so a base
    /// that runs along cycles of `x` makes most levels single-branch.
    pub fn search_conjugators<F: FnMut(&Permutation) -> bool>(
        &self,
        x: &Permutation,
        target: &Permutation,
        mut accept: F,
    ) -> Result<bool> {
        if x.degree() != self.degree || target.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: x.degree().max(target.degree()),
            });
        }
        if x.cycle_lengths() != target.cycle_lengths() {
            return Ok(false);
        }
        let mut forced = vec![NONE; self.degree];
        let id = Permutation::identity(self.degree);
        Ok(self.conjugator_step(0, &id, &id, &mut forced, x, target, &mut accept))
    }

    #[allow(clippy::too_many_arguments)]
    fn conjugator_step<F: FnMut(&Permutation) -> bool>(
        &self,
        level: usize,
        p: &Permutation,
        p_inv: &Permutation,
        forced: &mut Vec<u32>,
        x: &Permutation,
        target: &Permutation,
        accept: &mut F,
    ) -> bool {
        if level == self.levels.len() {
            let ok = (0..self.degree).all(|z| p.apply(x.apply(z)) == target.apply(p.apply(z)));
            return ok && accept(p);
        }
        let lv = &self.levels[level];
        let b = lv.base;
        let targets: Vec<usize> = if forced[b] != NONE {
            vec![forced[b] as usize]
        } else {
            lv.orbit.iter().map(|&g| p.apply(g as usize)).collect()
        };
        for t in targets {
            let slot = lv.slot[p_inv.apply(t)];
            if slot == NONE {
                continue;
            }
            let mut assigned = Vec::new();
            let mut consistent = true;
            if forced[b] == NONE {
                let (mut z, mut w) = (b, t);
                loop {
                    if forced[z] == NONE {
                        forced[z] = w as u32;
                        assigned.push(z);
                    } else if forced[z] as usize != w {
                        consistent = false;
                        break;
                    }
                    z = x.apply(z);
                    w = target.apply(w);
                    if (z == b) != (w == t) {
                        consistent = false;
                        break;
                    }
                    if z == b {
                        break;
                    }
                }
            }
            if consistent {
                let next = &lv.reps[slot as usize] * p;
                let next_inv = p_inv * &lv.inv_reps[slot as usize];
                if self.conjugator_step(level + 1, &next, &next_inv, forced, x, target, accept) {
                    return true;
                }
            }
            for z in assigned {
                forced[z] = NONE;
            }
        }
        false
    }

    /// Coset representative mapping the first base point to `point`, if in its orbit.
    pub fn first_level_rep(&self, point: usize) -> Option<&Permutation> {
        self.levels.first().and_then(|l| l.rep_of(point))
    }
}

/// Convenience: stabilizer chain of `group`.
pub fn build_chain(group: &PermGroup, seed: u64) -> StabilizerChain {
    StabilizerChain::build(group, seed)
}

/// Fixed seed used where an operation's contract carries no seed of its own.
pub const INTERNAL_SEED: u64 = 0x5eed_0f_c4a1;

/// Generators of the stabilizer of `point`, from a chain whose base starts at `point`.
pub fn point_stabilizer(group: &PermGroup, point: usize) -> Result<PermGroup> {
    Ok(point_stabilizer_with_chain(group, point)?.0)
}

pub(crate) fn point_stabilizer_with_chain(group: &PermGroup, point: usize) -> Result<(PermGroup, StabilizerChain)> {
    group.check_point(point)?;
    let chain = StabilizerChain::build_with(
        group,
        INTERNAL_SEED,
        &ChainOptions {
            base_prefix: vec![point],
            ..Default::default()
        },
    );
    let gens = chain.stabilizer_generators(1);
    let stab = if gens.is_empty() {
        PermGroup::trivial(group.degree())
    } else {
        PermGroup::new(gens)?
    };
    Ok((stab.with_label(format!("Stab({point})")), chain))
}
