//! Transitivity, rank, block systems and primitivity of a permutation group.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::point_stabilizer;
use crate::error::{Error, Result};
use crate::group::PermGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    /// Blocks sorted internally and ordered by least element.
    pub partition: Vec<Vec<usize>>,
    pub block_size: usize,
}

impl BlockSystem {
    pub fn is_trivial(&self) -> bool {
        self.block_size == 1 || self.partition.len() == 1
    }

    /// Every generator maps every block onto a block.
    pub fn is_invariant_under(&self, g: &PermGroup) -> bool {
        let n = g.degree();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in self.partition.iter().enumerate() {
            for &x in block {
                block_of[x] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return false;
        }
        g.generators().iter().all(|s| {
            self.partition.iter().all(|block| {
                let target = block_of[s.apply(block[0])];
                block.iter().all(|&x| block_of[s.apply(x)] == target)
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionProfile {
    pub degree: usize,
    pub transitive: bool,
    pub rank: usize,
    pub suborbit_lengths: Vec<usize>,
    pub primitive: bool,
    pub two_transitive: bool,
    pub uniprimitive: bool,
}

pub fn is_transitive(g: &PermGroup) -> bool {
    g.is_transitive()
}

/// Rank and sorted suborbit lengths: orbits of the stabilizer of point 0.
pub fn rank_and_suborbits(g: &PermGroup) -> Result<(usize, Vec<usize>)> {
    let subs = suborbits(g)?;
    let mut lengths: Vec<usize> = subs.iter().map(Vec::len).collect();
    lengths.sort_unstable();
    Ok((lengths.len(), lengths))
}

/// Orbits of the stabilizer of point 0, ordered by least element (so `{0}` comes first).
pub fn suborbits(g: &PermGroup) -> Result<Vec<Vec<usize>>> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    Ok(point_stabilizer(g, 0)?.orbits())
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }
}

/// Finest block system in which `a` and `b` share a block (Atkinson's closure).
pub fn minimal_block(g: &PermGroup, a: usize, b: usize) -> Result<BlockSystem> {
    g.check_point(a)?;
    g.check_point(b)?;
    if a == b {
        return Err(Error::InvalidArgument("minimal_block needs two distinct points".into()));
    }
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = g.degree();
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    uf.parent[b.max(a)] = a.min(b) as u32;
    while let Some((x, y)) = queue.pop() {
        for s in g.generators() {
            let u = uf.find(s.apply(x));
            let v = uf.find(s.apply(y));
            if u != v {
                let (lo, hi) = (u.min(v), u.max(v));
                uf.parent[hi] = lo as u32;
                queue.push((lo, hi));
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for x in 0..n {
        let r = uf.find(x);
        if index[r] == usize::MAX {
            index[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[index[r]].push(x);
    }
    let block_size = blocks[0].len();
    debug_assert!(blocks.iter().all(|b| b.len() == block_size));
    Ok(BlockSystem {
        partition: blocks,
        block_size,
    })
}

/// Full profile. An intransitive group gets `transitive = false` with every other flag false.
pub fn classify(g: &PermGroup) -> ActionProfile {
    if !g.is_transitive() {
        return intransitive_profile(g.degree());
    }
    let stab = point_stabilizer(g, 0).expect("point 0 exists");
    classify_with_stabilizer(g, &stab)
}

pub(crate) fn intransitive_profile(degree: usize) -> ActionProfile {
    ActionProfile {
        degree,
        transitive: false,
        rank: 0,
        suborbit_lengths: Vec::new(),
        primitive: false,
        two_transitive: false,
        uniprimitive: false,
    }
}

/// [`classify`] when generators of the stabilizer of point 0 are already known.
pub fn classify_with_stabilizer(g: &PermGroup, stab0: &PermGroup) -> ActionProfile {
    let n = g.degree();
    if !g.is_transitive() {
        return intransitive_profile(n);
    }
    let mut suborbit_lengths: Vec<usize> = stab0.orbits().iter().map(Vec::len).collect();
    suborbit_lengths.sort_unstable();
    let rank = suborbit_lengths.len();
    // Minimal blocks through 0; the n-1 closures are independent.
    let primitive = (1..n)
        .into_par_iter()
        .all(|b| minimal_block(g, 0, b).expect("transitive").partition.len() == 1);
    let two_transitive = rank == 2;
    ActionProfile {
        degree: n,
        transitive: true,
        rank,
        suborbit_lengths,
        primitive,
        two_transitive,
        uniprimitive: primitive && !two_transitive,
    }
}

/// A nontrivial block system if one exists.
pub fn find_nontrivial_blocks(g: &PermGroup) -> Option<BlockSystem> {
    if !g.is_transitive() {
        return None;
    }
    (1..g.degree()).find_map(|b| {
        let sys = minimal_block(g, 0, b).ok()?;
        (!sys.is_trivial()).then_some(sys)
    })
}
