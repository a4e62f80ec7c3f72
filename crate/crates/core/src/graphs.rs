//! Orbital graphs of transitive groups, the 2-transitive dichotomy, relative Cayley tests
//! and graph6 input/output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{regular_subgroup_search, RegularSearch, SearchMode};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::structure::suborbits;

/// Simple undirected graph on `0..n` stored as a bit matrix.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphData", try_from = "GraphData")]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphData {
    n: usize,
    graph6: String,
}

impl From<Graph> for GraphData {
    fn from(g: Graph) -> Self {
        GraphData {
            n: g.n,
            graph6: export_graph6(&g).expect("graphs in memory fit the graph6 bound"),
        }
    }
}

impl TryFrom<GraphData> for Graph {
    type Error = Error;

    fn try_from(d: GraphData) -> Result<Self> {
        let g = parse_graph6(&d.graph6)?;
        if g.n != d.n {
            return Err(Error::Graph6(format!(
                "header says {} vertices, field says {}",
                g.n, d.n
            )));
        }
        Ok(g)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n = {}, edges = {})", self.n, self.edge_count())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds `{u, v}`; loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return;
        }
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.bits[v * self.words..(v + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        let mut c = Graph::complete(self.n);
        for (i, w) in c.bits.iter_mut().enumerate() {
            *w &= !self.bits[i];
        }
        c
    }

    /// Every valency equals the first.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Index of the first generator that does not preserve the edge set.
    pub fn first_violating_generator(&self, g: &PermGroup) -> Option<usize> {
        if g.degree() != self.n {
            return Some(0);
        }
        g.generators()
            .iter()
            .position(|s| self.edges().any(|(u, v)| !self.has_edge(s.apply(u), s.apply(v))))
    }

    pub fn is_invariant_under(&self, g: &PermGroup) -> bool {
        self.first_violating_generator(g).is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CayleyStatus {
    /// The supplied group contains a regular subgroup, so the graph is a Cayley graph.
    CayleyRelative {
        regular_subgroup: PermGroup,
    },
    /// No regular subgroup in the supplied group (exhaustive search).
    NonCayleyRelative,
    Unknown,
}

/// One orbital of `g`, indexed by the suborbit `Delta` of the stabilizer of 0 it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbital {
    /// Least point of the suborbit.
    pub representative: usize,
    pub length: usize,
    pub self_paired: bool,
    /// Representative of the paired suborbit.
    pub paired_with: usize,
}

/// An undirected orbital graph: a self-paired orbital or an orbital together with its pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalGraph {
    pub suborbits: Vec<usize>,
    pub valency: usize,
    pub edges: usize,
    pub graph: Graph,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cayley: Option<CayleyStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalReport {
    pub degree: usize,
    pub rank: usize,
    pub orbitals: Vec<Orbital>,
    pub graphs: Vec<OrbitalGraph>,
}

/// For each vertex `v` an element mapping 0 to `v`.
fn transversal_from_zero(g: &PermGroup) -> Vec<Permutation> {
    let n = g.degree();
    let mut reps: Vec<Option<Permutation>> = vec![None; n];
    reps[0] = Some(Permutation::identity(n));
    let mut queue = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for s in g.generators() {
            let w = s.apply(v);
            if reps[w].is_none() {
                reps[w] = Some(reps[v].as_ref().expect("visited") * s);
                queue.push(w);
            }
        }
    }
    reps.into_iter().map(|r| r.expect("transitive")).collect()
}

/// The orbitals of a transitive group and the undirected graphs they span.
pub fn orbital_graphs(g: &PermGroup) -> Result<OrbitalReport> {
    let subs = suborbits(g)?;
    let n = g.degree();
    let mut suborbit_of = vec![0u32; n];
    for (i, s) in subs.iter().enumerate() {
        for &x in s {
            suborbit_of[x] = i as u32;
        }
    }
    // label[v * n + x]: index of the orbital containing (v, x)
    let reps = transversal_from_zero(g);
    let mut label = vec![0u32; n * n];
    label.par_chunks_mut(n).zip(reps.par_iter()).for_each(|(row, u)| {
        for delta in 0..n {
            row[u.apply(delta)] = suborbit_of[delta];
        }
    });
    let orbitals: Vec<Orbital> = subs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, s)| {
            let paired = label[s[0] * n] as usize;
            Orbital {
                representative: s[0],
                length: s.len(),
                self_paired: paired == i,
                paired_with: subs[paired][0],
            }
        })
        .collect();
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for (i, o) in orbitals.iter().enumerate() {
        let idx = (i + 1) as u32;
        let pair = suborbit_of[o.paired_with];
        if pair >= idx {
            classes.push(if pair == idx { vec![idx] } else { vec![idx, pair] });
        }
    }
    let graphs = classes
        .par_iter()
        .map(|class| {
            let mut graph = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if class.contains(&label[u * n + v]) {
                        graph.add_edge(u, v);
                    }
                }
            }
            OrbitalGraph {
                suborbits: class.iter().map(|&i| subs[i as usize][0]).collect(),
                valency: graph.degree(0),
                edges: graph.edge_count(),
                graph,
                cayley: None,
            }
        })
        .collect();
    Ok(OrbitalReport {
        degree: n,
        rank: subs.len(),
        orbitals,
        graphs,
    })
}

/// For a 2-transitive group: the only invariant graphs are the empty and the complete graph.
pub fn theorem2_check(g: &PermGroup) -> Result<bool> {
    let subs = suborbits(g)?;
    if subs.len() != 2 {
        return Err(Error::NotTwoTransitive);
    }
    let report = orbital_graphs(g)?;
    let n = g.degree();
    Ok(report.graphs.len() == 1 && report.graphs[0].edges == n * (n - 1) / 2)
}

/// Cayley test relative to `g <= Aut(graph)`: a regular subgroup of `g` makes the graph a
/// Cayley graph; a refutation says nothing about automorphisms outside `g`.
pub fn cayley_relative_test(g: &PermGroup, graph: &Graph, mode: SearchMode, seed: u64) -> Result<CayleyStatus> {
    if let Some(index) = graph.first_violating_generator(g) {
        return Err(Error::NotInvariant { index });
    }
    Ok(match regular_subgroup_search(g, mode, seed)? {
        RegularSearch::Found { subgroup } => CayleyStatus::CayleyRelative {
            regular_subgroup: subgroup,
        },
        RegularSearch::Refuted => CayleyStatus::NonCayleyRelative,
        RegularSearch::Unknown => CayleyStatus::Unknown,
    })
}

pub const GRAPH6_MAX_ORDER: usize = 258_047;

pub fn export_graph6(graph: &Graph) -> Result<String> {
    let n = graph.n;
    if n > GRAPH6_MAX_ORDER {
        return Err(Error::Graph6(format!(
            "{n} vertices exceed the graph6 bound {GRAPH6_MAX_ORDER}"
        )));
    }
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.extend([(n >> 12) as u8 + 63, ((n >> 6) & 63) as u8 + 63, (n & 63) as u8 + 63]);
    }
    let mut acc = 0u8;
    let mut used = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | graph.has_edge(u, v) as u8;
            used += 1;
            if used == 6 {
                out.push(acc + 63);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push((acc << (6 - used)) + 63);
    }
    Ok(String::from_utf8(out).expect("printable ASCII"))
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6("byte outside 63..=126".into()));
    }
    let (n, body) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [b'~', b'~', ..] => return Err(Error::Graph6("orders above 258047 are not supported".into())),
        [b'~', a, b, c, rest @ ..] => (
            ((*a as usize - 63) << 12) | ((*b as usize - 63) << 6) | (*c as usize - 63),
            rest,
        ),
        [b'~', ..] => return Err(Error::Graph6("truncated size field".into())),
        [h, rest @ ..] => (*h as usize - 63, rest),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if body.len() != needed {
        return Err(Error::Graph6(format!(
            "expected {needed} data bytes for {n} vertices, got {}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    Ok(g)
}
