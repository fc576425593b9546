//! Dual graphs of exceptional curves: discrepancies of foliated surface
//! singularities, recognition of the canonical / log canonical patterns, and
//! Du Val (ADE) recognition for configurations of (−2)-curves.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dot;
use crate::linalg::{self, rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FsingError {
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("invariant vertex {0} has no z-index")]
    MissingZIndex(usize),
    #[error("more than one non-invariant vertex ({0})")]
    TooManyNonInvariant(usize),
    #[error("malformed graph: {0}")]
    Structure(String),
    #[error("not an ADE graph: {0}")]
    NotAde(String),
    #[error("DOT parse error on line {line}: {msg}")]
    Dot { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub self_int: i64,
    pub invariant: bool,
    pub z_index: Option<u32>,
}

impl Vertex {
    pub fn invariant(self_int: i64, z: u32) -> Self {
        Vertex {
            self_int,
            invariant: true,
            z_index: Some(z),
        }
    }

    pub fn non_invariant(self_int: i64) -> Self {
        Vertex {
            self_int,
            invariant: false,
            z_index: None,
        }
    }
}

/// Weighted dual graph with invariance flags and Z-indices. Parallel edges
/// are allowed and count towards the intersection number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

/// Rational discrepancies `a(C_i, F)`, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyVector {
    pub values: Vec<BigRational>,
}

impl fmt::Display for DiscrepancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalType {
    /// Hirzebruch–Jung chain of invariant curves with Z = (1, 2, .., 2).
    FChain,
    /// Two Z=1 (−2)-curves joined by a bad tail.
    BadTailChain,
    /// Chain of invariant curves with Z = 2.
    MinusTwoChain,
    /// Bad tail with two Z=1 (−2)-legs and a Z=2 chain attached.
    DType,
    /// Cycle of invariant curves with Z = 2.
    EllipticGorenstein,
}

impl CanonicalType {
    pub fn number(self) -> u8 {
        match self {
            CanonicalType::FChain => 1,
            CanonicalType::BadTailChain => 2,
            CanonicalType::MinusTwoChain => 3,
            CanonicalType::DType => 4,
            CanonicalType::EllipticGorenstein => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Canonical(CanonicalType),
    StrictLogCanonical {
        /// The unique non-invariant vertex.
        e0: usize,
        /// Number of F-chains hanging off `e0`.
        branches: usize,
        /// Whether the whole graph is a chain.
        chain_shaped: bool,
    },
    NotRecognized,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Canonical(t) => write!(f, "canonical (type {})", t.number()),
            Classification::StrictLogCanonical {
                branches,
                chain_shaped,
                ..
            } => write!(
                f,
                "strictly log canonical ({branches} branch{}, {})",
                if *branches == 1 { "" } else { "es" },
                if *chain_shaped { "chain" } else { "star" }
            ),
            Classification::NotRecognized => write!(f, "not recognized"),
        }
    }
}

impl DecoratedGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Self {
        DecoratedGraph { vertices, edges }
    }

    /// A chain `0 - 1 - .. - (k-1)`.
    pub fn chain(vertices: Vec<Vertex>) -> Self {
        let edges = (1..vertices.len()).map(|i| (i - 1, i)).collect();
        DecoratedGraph { vertices, edges }
    }

    /// A cycle `0 - 1 - .. - (k-1) - 0`; `k = 2` gives a double edge.
    pub fn cycle(vertices: Vec<Vertex>) -> Self {
        let k = vertices.len();
        let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        if k >= 2 {
            edges.push((k - 1, 0));
        }
        DecoratedGraph { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn validate(&self) -> Result<(), FsingError> {
        let n = self.vertices.len();
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(FsingError::Structure(format!(
                    "edge ({a}, {b}) out of range"
                )));
            }
            if a == b {
                return Err(FsingError::Structure(format!("self-loop at {a}")));
            }
        }
        Ok(())
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.self_int;
        }
        for &(a, b) in &self.edges {
            if a != b {
                m[a][b] += 1;
                m[b][a] += 1;
            }
        }
        m
    }

    /// Neighbour multiplicities.
    fn adjacency(&self) -> Vec<BTreeMap<usize, usize>> {
        let mut adj = vec![BTreeMap::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            *adj[a].entry(b).or_insert(0) += 1;
            *adj[b].entry(a).or_insert(0) += 1;
        }
        adj
    }

    fn degree(adj: &[BTreeMap<usize, usize>], v: usize) -> usize {
        adj[v].values().sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let adj = self.adjacency();
        components_of(&adj, &vec![true; n]).len() == 1
    }

    /// True for a connected 2-regular multigraph (length-2 cycles via a double edge).
    pub fn is_cycle(&self) -> bool {
        let n = self.vertices.len();
        if n < 2 || self.validate().is_err() || !self.is_connected() {
            return false;
        }
        let adj = self.adjacency();
        self.edges.len() == n && (0..n).all(|v| Self::degree(&adj, v) == 2)
    }

    /// `K_G · C_j`: `-2 + Z` on invariant curves, `-C²` on the non-invariant one.
    fn canonical_degrees(&self) -> Result<Vec<i64>, FsingError> {
        let non_inv = self.vertices.iter().filter(|v| !v.invariant).count();
        if non_inv > 1 {
            return Err(FsingError::TooManyNonInvariant(non_inv));
        }
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.invariant {
                    v.z_index
                        .map(|z| -2 + z as i64)
                        .ok_or(FsingError::MissingZIndex(i))
                } else {
                    Ok(-v.self_int)
                }
            })
            .collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let labels: Vec<(String, String)> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let z = v.z_index.map_or("-".to_string(), |z| z.to_string());
                (
                    i.to_string(),
                    format!("{},{},{}", v.self_int, u8::from(v.invariant), z),
                )
            })
            .collect();
        let edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        dot::write_graph(name, &labels, &edges)
    }

    /// Parses the DOT dialect written by [`DecoratedGraph::to_dot`]: vertex
    /// labels are `"self_int,invariant,z"` with `invariant` one of `1/0/true/false`
    /// and `z` an integer or `-`.
    pub fn from_dot(src: &str) -> Result<Self, FsingError> {
        let parsed = dot::parse_graph(src).map_err(|e| FsingError::Dot {
            line: e.line,
            msg: e.msg,
        })?;
        let mut vertices = Vec::with_capacity(parsed.nodes.len());
        for node in &parsed.nodes {
            let label = node.label.as_deref().ok_or_else(|| FsingError::Dot {
                line: node.line,
                msg: format!("vertex {} has no label", node.id),
            })?;
            vertices.push(parse_vertex_label(label).map_err(|msg| FsingError::Dot {
                line: node.line,
                msg,
            })?);
        }
        let g = DecoratedGraph {
            vertices,
            edges: parsed.edges,
        };
        g.validate()?;
        Ok(g)
    }
}

fn parse_vertex_label(label: &str) -> Result<Vertex, String> {
    let parts: Vec<&str> = label.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("label {label:?} is not \"self_int,invariant,z\""));
    }
    let self_int = parts[0]
        .parse::<i64>()
        .map_err(|_| format!("bad self-intersection {:?}", parts[0]))?;
    let invariant = match parts[1] {
        "1" | "true" | "inv" => true,
        "0" | "false" | "non" => false,
        other => return Err(format!("bad invariance flag {other:?}")),
    };
    let z_index = match parts[2] {
        "-" | "" => None,
        z => Some(z.parse::<u32>().map_err(|_| format!("bad z-index {z:?}"))?),
    };
    Ok(Vertex {
        self_int,
        invariant,
        z_index,
    })
}

fn components_of(adj: &[BTreeMap<usize, usize>], keep: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if !keep[start] || seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in adj[v].keys() {
                if keep[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Orders `subset` along a simple path if the induced subgraph is one.
fn path_order(adj: &[BTreeMap<usize, usize>], subset: &[usize]) -> Option<Vec<usize>> {
    let inside = |v: usize| subset.contains(&v);
    let deg = |v: usize| -> usize {
        adj[v]
            .iter()
            .filter(|(w, _)| inside(**w))
            .map(|(_, k)| *k)
            .sum()
    };
    if subset
        .iter()
        .any(|&v| deg(v) > 2 || adj[v].iter().any(|(w, &k)| inside(*w) && k > 1))
    {
        return None;
    }
    if subset.len() == 1 {
        return Some(subset.to_vec());
    }
    let start = *subset.iter().find(|&&v| deg(v) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = adj[cur].keys().copied().find(|&w| inside(w) && w != prev);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
                order.push(w);
            }
            None => break,
        }
        if order.len() > subset.len() {
            return None;
        }
    }
    (order.len() == subset.len()).then_some(order)
}

/// Exact discrepancies from `(K_G + Σ a_i C_i)·C_j = 0`, returned as `-a_i`.
pub fn solve_discrepancies(g: &DecoratedGraph) -> Result<DiscrepancyVector, FsingError> {
    g.validate()?;
    let b = g.canonical_degrees()?;
    let m: Vec<Vec<BigRational>> = g
        .intersection_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(rat).collect())
        .collect();
    if !linalg::is_negative_definite(&m) {
        return Err(FsingError::NotNegativeDefinite);
    }
    let rhs: Vec<BigRational> = b.iter().map(|&x| rat(-x)).collect();
    let a = linalg::solve(&m, &rhs).ok_or(FsingError::NotNegativeDefinite)?;
    // re-substitute
    let ma = linalg::mat_vec(&m, &a);
    for (j, (lhs, bj)) in ma.iter().zip(&b).enumerate() {
        let residual = lhs + rat(*bj);
        if !residual.is_zero() {
            return Err(FsingError::Structure(format!(
                "solver residual {residual} at vertex {j}"
            )));
        }
    }
    Ok(DiscrepancyVector {
        values: a.into_iter().map(|x| -x).collect(),
    })
}

fn is_f_chain(g: &DecoratedGraph, order: &[usize]) -> bool {
    let hj = order
        .iter()
        .all(|&v| g.vertices[v].invariant && g.vertices[v].self_int <= -2);
    if !hj {
        return false;
    }
    let zs: Vec<Option<u32>> = order.iter().map(|&v| g.vertices[v].z_index).collect();
    let pattern = |zs: &[Option<u32>]| zs[0] == Some(1) && zs[1..].iter().all(|z| *z == Some(2));
    let mut rev = zs.clone();
    rev.reverse();
    pattern(&zs) || pattern(&rev)
}

/// Z=1 end of an F-chain.
fn f_chain_head(g: &DecoratedGraph, order: &[usize]) -> usize {
    if g.vertices[order[0]].z_index == Some(1) {
        order[0]
    } else {
        *order.last().unwrap()
    }
}

fn recognize_canonical(
    g: &DecoratedGraph,
    adj: &[BTreeMap<usize, usize>],
) -> Option<CanonicalType> {
    let n = g.len();
    let all: Vec<usize> = (0..n).collect();
    let vx = |i: usize| &g.vertices[i];

    if g.is_cycle() && g.vertices.iter().all(|v| v.z_index == Some(2)) {
        return Some(CanonicalType::EllipticGorenstein);
    }

    if let Some(order) = path_order(adj, &all) {
        if is_f_chain(g, &order) {
            return Some(CanonicalType::FChain);
        }
        if order
            .iter()
            .all(|&v| vx(v).z_index == Some(2) && vx(v).self_int <= -2)
        {
            return Some(CanonicalType::MinusTwoChain);
        }
        if n == 3 {
            let (e1, e2, e3) = (vx(order[0]), vx(order[1]), vx(order[2]));
            let leg = |v: &Vertex| v.z_index == Some(1) && v.self_int == -2;
            if leg(e1) && leg(e3) && e2.z_index == Some(3) && e2.self_int <= -2 {
                return Some(CanonicalType::BadTailChain);
            }
        }
        return None;
    }

    // D type: a bad tail of degree 3 with two Z=1 (−2)-legs and a Z=2 chain.
    if g.edges.len() + 1 != n {
        return None;
    }
    let centers: Vec<usize> = (0..n)
        .filter(|&v| DecoratedGraph::degree(adj, v) == 3)
        .collect();
    if centers.len() != 1 || (0..n).any(|v| DecoratedGraph::degree(adj, v) > 3) {
        return None;
    }
    let c = centers[0];
    if vx(c).z_index != Some(3) || vx(c).self_int > -2 {
        return None;
    }
    let leg = |v: usize| {
        DecoratedGraph::degree(adj, v) == 1 && vx(v).z_index == Some(1) && vx(v).self_int == -2
    };
    let nbrs: Vec<usize> = adj[c].keys().copied().collect();
    let legs: Vec<usize> = nbrs.iter().copied().filter(|&v| leg(v)).collect();
    if legs.len() < 2 {
        return None;
    }
    let legs = &legs[..2];
    let rest: Vec<usize> = (0..n).filter(|v| *v != c && !legs.contains(v)).collect();
    let order = path_order(adj, &rest)?;
    let tail_ok = order
        .iter()
        .all(|&v| vx(v).z_index == Some(2) && vx(v).self_int <= -2);
    let attached_at_end =
        adj[c].contains_key(&order[0]) || adj[c].contains_key(order.last().unwrap());
    (tail_ok && attached_at_end).then_some(CanonicalType::DType)
}

fn recognize_strict_lc(
    g: &DecoratedGraph,
    adj: &[BTreeMap<usize, usize>],
    e0: usize,
) -> Option<Classification> {
    let n = g.len();
    let keep: Vec<bool> = (0..n).map(|v| v != e0).collect();
    let comps = components_of(adj, &keep);
    for comp in &comps {
        let order = path_order(adj, comp)?;
        if !is_f_chain(g, &order) {
            return None;
        }
        let head = f_chain_head(g, &order);
        // E0 meets the chain once, at its (−1)-F-curve.
        for &v in comp {
            let k = adj[e0].get(&v).copied().unwrap_or(0);
            let want = usize::from(v == head);
            if k != want {
                return None;
            }
        }
    }
    let branches = comps.len();
    let chain_shaped = branches <= 2;
    let others_hj = (0..n)
        .filter(|&v| v != e0)
        .all(|v| g.vertices[v].self_int <= -2);
    if g.vertices[e0].self_int == -1 && others_hj && !chain_shaped {
        // A minimal resolution over a smooth point ends with E0 as the last
        // (−1)-curve, which can only meet two earlier components.
        return None;
    }
    Some(Classification::StrictLogCanonical {
        e0,
        branches,
        chain_shaped,
    })
}

pub fn classify_foliated_singularity(g: &DecoratedGraph) -> Classification {
    if g.is_empty() || g.validate().is_err() || !g.is_connected() {
        return Classification::NotRecognized;
    }
    let adj = g.adjacency();
    let non_inv: Vec<usize> = (0..g.len()).filter(|&v| !g.vertices[v].invariant).collect();
    match non_inv.as_slice() {
        [] => recognize_canonical(g, &adj)
            .map(Classification::Canonical)
            .unwrap_or(Classification::NotRecognized),
        [e0] => recognize_strict_lc(g, &adj, *e0).unwrap_or(Classification::NotRecognized),
        _ => Classification::NotRecognized,
    }
}

/// Du Val types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AdeType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(k) => write!(f, "A{k}"),
            AdeType::D(k) => write!(f, "D{k}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

/// `[A1, A1, A3]` → `"2A1+A3"`; the empty multiset is `"smooth"`.
pub fn format_ade_multiset(types: &[AdeType]) -> String {
    if types.is_empty() {
        return "smooth".to_string();
    }
    let mut counts: BTreeMap<AdeType, usize> = BTreeMap::new();
    for t in types {
        *counts.entry(*t).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(t, k)| {
            if k == 1 {
                t.to_string()
            } else {
                format!("{k}{t}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Undecorated weighted graph (all vertices smooth rational curves).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    pub weights: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
}

impl WeightedGraph {
    /// Connected components as induced subgraphs, with the original vertex ids.
    pub fn components(&self) -> Vec<(Vec<usize>, WeightedGraph)> {
        let n = self.weights.len();
        let mut adj = vec![BTreeMap::new(); n];
        for &(a, b) in &self.edges {
            *adj[a].entry(b).or_insert(0usize) += 1;
            *adj[b].entry(a).or_insert(0usize) += 1;
        }
        components_of(&adj, &vec![true; n])
            .into_iter()
            .map(|comp| {
                let index: BTreeMap<usize, usize> =
                    comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let sub = WeightedGraph {
                    weights: comp.iter().map(|&v| self.weights[v]).collect(),
                    edges: self
                        .edges
                        .iter()
                        .filter(|(a, _)| index.contains_key(a))
                        .map(|(a, b)| (index[a], index[b]))
                        .collect(),
                };
                (comp, sub)
            })
            .collect()
    }
}

pub fn ade_classify(g: &WeightedGraph) -> Result<AdeType, FsingError> {
    let n = g.weights.len();
    if n == 0 {
        return Err(FsingError::NotAde("empty graph".into()));
    }
    if let Some(w) = g.weights.iter().find(|&&w| w != -2) {
        return Err(FsingError::NotAde(format!("vertex of weight {w}")));
    }
    let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for &(a, b) in &g.edges {
        if a >= n || b >= n || a == b {
            return Err(FsingError::NotAde(format!("bad edge ({a}, {b})")));
        }
        *adj[a].entry(b).or_insert(0) += 1;
        *adj[b].entry(a).or_insert(0) += 1;
    }
    if adj.iter().any(|m| m.values().any(|&k| k > 1)) {
        return Err(FsingError::NotAde("multiple edge".into()));
    }
    if components_of(&adj, &vec![true; n]).len() != 1 {
        return Err(FsingError::NotAde("disconnected".into()));
    }
    if g.edges.len() != n - 1 {
        return Err(FsingError::NotAde("contains a cycle".into()));
    }
    let deg: Vec<usize> = adj.iter().map(|m| m.len()).collect();
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    match branch.as_slice() {
        [] => Ok(AdeType::A(n)),
        [c] if deg[*c] == 3 => {
            let mut legs: Vec<usize> = adj[*c]
                .keys()
                .map(|&start| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (*c, start);
                    while let Some(&next) = adj[cur].keys().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match legs.as_slice() {
                [1, 1, r] => Ok(AdeType::D(r + 3)),
                [1, 2, 2] => Ok(AdeType::E6),
                [1, 2, 3] => Ok(AdeType::E7),
                [1, 2, 4] => Ok(AdeType::E8),
                other => Err(FsingError::NotAde(format!("legs {other:?}"))),
            }
        }
        _ => Err(FsingError::NotAde("branching pattern".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn f_chain(self_ints: &[i64]) -> DecoratedGraph {
        DecoratedGraph::chain(
            self_ints
                .iter()
                .enumerate()
                .map(|(i, &s)| Vertex::invariant(s, if i == 0 { 1 } else { 2 }))
                .collect(),
        )
    }

    #[test]
    fn single_vertex_discrepancy() {
        let g = DecoratedGraph::chain(vec![Vertex::invariant(-2, 1)]);
        assert_eq!(solve_discrepancies(&g).unwrap().values, vec![q(1, 2)]);
    }

    #[test]
    fn f_chain_terminal_discrepancy() {
        // [-2,-2]: det 3; [-3,-2]: det 5; [-2,-3,-2]: det 8.
        for (chain, det) in [(vec![-2, -2], 3), (vec![-3, -2], 5), (vec![-2, -3, -2], 8)] {
            let d = solve_discrepancies(&f_chain(&chain)).unwrap();
            assert_eq!(*d.values.last().unwrap(), q(1, det), "{chain:?}");
        }
    }

    #[test]
    fn z_two_cycle_has_zero_discrepancies() {
        let g = DecoratedGraph::cycle(vec![
            Vertex::invariant(-3, 2),
            Vertex::invariant(-2, 2),
            Vertex::invariant(-2, 2),
        ]);
        assert!(g.is_cycle());
        let d = solve_discrepancies(&g).unwrap();
        assert!(d.values.iter().all(Zero::is_zero));
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::Canonical(CanonicalType::EllipticGorenstein)
        );
    }

    #[test]
    fn all_minus_two_cycle_is_not_definite() {
        let g = DecoratedGraph::cycle(vec![Vertex::invariant(-2, 2); 4]);
        assert_eq!(
            solve_discrepancies(&g),
            Err(FsingError::NotNegativeDefinite)
        );
    }

    #[test]
    fn double_edge_cycle() {
        let g = DecoratedGraph::cycle(vec![Vertex::invariant(-3, 2), Vertex::invariant(-3, 2)]);
        assert_eq!(g.intersection_matrix(), vec![vec![-3, 2], vec![2, -3]]);
        assert!(g.is_cycle());
        let d = solve_discrepancies(&g).unwrap();
        assert!(d.values.iter().all(Zero::is_zero));
    }

    #[test]
    fn missing_z_index() {
        let g = DecoratedGraph::chain(vec![Vertex {
            self_int: -2,
            invariant: true,
            z_index: None,
        }]);
        assert_eq!(solve_discrepancies(&g), Err(FsingError::MissingZIndex(0)));
    }

    #[test]
    fn bad_tail_chain_discrepancies() {
        for mid in [-2, -3, -4] {
            let g = DecoratedGraph::chain(vec![
                Vertex::invariant(-2, 1),
                Vertex::invariant(mid, 3),
                Vertex::invariant(-2, 1),
            ]);
            assert_eq!(
                classify_foliated_singularity(&g),
                Classification::Canonical(CanonicalType::BadTailChain)
            );
            let d = solve_discrepancies(&g).unwrap();
            assert_eq!(d.values, vec![q(1, 2), q(0, 1), q(1, 2)]);
        }
    }

    #[test]
    fn d_type_discrepancies() {
        // legs 0,1 on the bad tail 2, then a Z=2 chain 3-4.
        let g = DecoratedGraph::new(
            vec![
                Vertex::invariant(-2, 1),
                Vertex::invariant(-2, 1),
                Vertex::invariant(-3, 3),
                Vertex::invariant(-2, 2),
                Vertex::invariant(-3, 2),
            ],
            vec![(0, 2), (1, 2), (2, 3), (3, 4)],
        );
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::Canonical(CanonicalType::DType)
        );
        let d = solve_discrepancies(&g).unwrap();
        assert_eq!(d.values, vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn f_chain_recognized_either_orientation() {
        let g = DecoratedGraph::chain(vec![
            Vertex::invariant(-2, 2),
            Vertex::invariant(-2, 2),
            Vertex::invariant(-3, 1),
        ]);
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::Canonical(CanonicalType::FChain)
        );
        assert_eq!(
            classify_foliated_singularity(&f_chain(&[-2, -2, -2])),
            Classification::Canonical(CanonicalType::FChain)
        );
    }

    #[test]
    fn minus_two_f_curve_chain() {
        let g = DecoratedGraph::chain(vec![Vertex::invariant(-2, 2), Vertex::invariant(-4, 2)]);
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::Canonical(CanonicalType::MinusTwoChain)
        );
        assert!(solve_discrepancies(&g)
            .unwrap()
            .values
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn strict_lc_single_branch() {
        let g = DecoratedGraph::chain(vec![
            Vertex::non_invariant(-1),
            Vertex::invariant(-2, 1),
            Vertex::invariant(-2, 2),
        ]);
        let c = classify_foliated_singularity(&g);
        assert_eq!(
            c,
            Classification::StrictLogCanonical {
                e0: 0,
                branches: 1,
                chain_shaped: true
            }
        );
        let d = solve_discrepancies(&g).unwrap();
        assert_eq!(d.values[0], q(-1, 1));
    }

    #[test]
    fn three_branches_on_minus_one_e0_rejected() {
        let mut v = vec![Vertex::non_invariant(-1)];
        v.extend([
            Vertex::invariant(-2, 1),
            Vertex::invariant(-3, 1),
            Vertex::invariant(-2, 1),
        ]);
        let g = DecoratedGraph::new(v.clone(), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::NotRecognized
        );
        // the same star with E0² = -3 is not constrained by the smooth-point argument
        v[0] = Vertex::non_invariant(-3);
        let g = DecoratedGraph::new(v, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::StrictLogCanonical {
                e0: 0,
                branches: 3,
                chain_shaped: false
            }
        );
    }

    #[test]
    fn e0_meeting_z2_curve_not_lc() {
        let g = DecoratedGraph::chain(vec![
            Vertex::invariant(-2, 1),
            Vertex::invariant(-2, 2),
            Vertex::non_invariant(-1),
        ]);
        assert_eq!(
            classify_foliated_singularity(&g),
            Classification::NotRecognized
        );
    }

    #[test]
    fn ade_examples() {
        let a3 = WeightedGraph {
            weights: vec![-2; 3],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(ade_classify(&a3).unwrap(), AdeType::A(3));
        let d4 = WeightedGraph {
            weights: vec![-2; 4],
            edges: vec![(0, 1), (0, 2), (0, 3)],
        };
        assert_eq!(ade_classify(&d4).unwrap(), AdeType::D(4));
        let tri = WeightedGraph {
            weights: vec![-2; 3],
            edges: vec![(0, 1), (1, 2), (2, 0)],
        };
        assert!(matches!(ade_classify(&tri), Err(FsingError::NotAde(_))));
        let e8 = WeightedGraph {
            weights: vec![-2; 8],
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)],
        };
        assert_eq!(ade_classify(&e8).unwrap(), AdeType::E8);
        let bad_weight = WeightedGraph {
            weights: vec![-3],
            edges: vec![],
        };
        assert!(ade_classify(&bad_weight).is_err());
        let double = WeightedGraph {
            weights: vec![-2, -2],
            edges: vec![(0, 1), (0, 1)],
        };
        assert!(ade_classify(&double).is_err());
    }

    #[test]
    fn multiset_formatting() {
        use AdeType::*;
        assert_eq!(format_ade_multiset(&[A(3), A(1), A(1)]), "2A1+A3");
        assert_eq!(format_ade_multiset(&[D(4), A(1), A(1), A(1)]), "3A1+D4");
        assert_eq!(format_ade_multiset(&[A(2), A(1)]), "A1+A2");
        assert_eq!(format_ade_multiset(&[]), "smooth");
    }

    #[test]
    fn dot_round_trip() {
        let g = DecoratedGraph::new(
            vec![Vertex::non_invariant(-1), Vertex::invariant(-2, 1)],
            vec![(0, 1)],
        );
        let text = g.to_dot("G");
        assert_eq!(DecoratedGraph::from_dot(&text).unwrap(), g);
    }

    #[test]
    fn dot_errors_carry_line() {
        let src = "graph G {\n  a [label=\"-2,1,1\"];\n  b [label=\"-2,maybe,1\"];\n}\n";
        match DecoratedGraph::from_dot(src) {
            Err(FsingError::Dot { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
