//! Schreier graphs of the degree-d mother group action on level n of a
//! spherically symmetric tree, built two independent ways: from the
//! generator action and from the edge-type criterion. Also the binary
//! projection that turns digit multiplicities into edge conductances.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::words::{beta_weight_inverse, DigitWord, TreeShape, WordError};
use crate::{rat, Rat};

/// Default guard on the vertex count of a built graph.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;

/// Action-based construction enumerates full symmetric groups per alphabet
/// size; it is gated to shapes with small entries and used as an oracle.
pub const ACTION_BOUND_LIMIT: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// ∏ m_i exceeds the configured vertex cap.
    CapExceeded { vertices: usize, cap: usize },
    /// Shape bound too large for generator enumeration.
    BoundTooLarge { bound: u32 },
    Word(WordError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::CapExceeded { vertices, cap } => {
                write!(f, "graph would have {vertices} vertices, above the cap {cap}")
            }
            BuildError::BoundTooLarge { bound } => {
                write!(f, "action builder limited to alphabet sizes <= {ACTION_BOUND_LIMIT}, got {bound}")
            }
            BuildError::Word(e) => write!(f, "{e}"),
        }
    }
}

impl From<WordError> for BuildError {
    fn from(e: WordError) -> Self {
        BuildError::Word(e)
    }
}

/// A mother-group generator: a degree t ∈ {-1,0,…,d} and one permutation
/// of [i] for each alphabet size i occurring in the shape.
#[derive(Debug, Clone)]
pub struct Generator {
    pub degree: i32,
    /// Permutation per alphabet size: `sigma[&m][x]` is the image of digit x.
    pub sigma: BTreeMap<u32, Vec<u8>>,
}

impl Generator {
    /// Apply to a length-n word. With k = 1 + ℓ_t(x): permutes digit x_k,
    /// leaves everything else unchanged. Fixed point when ℓ_t = +∞ or the
    /// permuted position falls beyond the word.
    pub fn apply(&self, x: &DigitWord, shape: &TreeShape) -> DigitWord {
        let k = match x.ell_position(self.degree) {
            Some(l) => (l + 1) as usize,
            None => return x.clone(),
        };
        if k >= x.len() {
            return x.clone();
        }
        let m = shape.m(k);
        let mut y = x.clone();
        if let Some(perm) = self.sigma.get(&m) {
            y.set_digit(k, perm[x.digit(k) as usize]);
        }
        y
    }
}

/// An edge of a Schreier graph. Endpoints are vertex indices; the words
/// differ in exactly one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub edge_type: i32,
    pub conductance: Rat,
}

/// A finite weighted graph: vertices are digit words, edges carry a type
/// tag and an exact rational conductance.
#[derive(Debug, Clone)]
pub struct Network {
    /// The digit-size sequence m̄ governing β-weights and conductances.
    pub shape: TreeShape,
    pub degree: i32,
    pub level: usize,
    /// Whether vertices are binary representatives of the π-projection.
    pub projected: bool,
    pub vertices: Vec<DigitWord>,
    pub edges: Vec<Edge>,
}

impl Network {
    /// Index of a word; vertices are stored in rank order (binary value
    /// order for projected graphs).
    pub fn index_of(&self, w: &DigitWord) -> usize {
        if self.projected {
            w.digits().iter().enumerate().fold(0usize, |acc, (i, &d)| acc | ((d as usize) << i))
        } else {
            w.rank(&self.shape)
        }
    }

    pub fn word(&self, v: usize) -> &DigitWord {
        &self.vertices[v]
    }

    /// The coordinate k(x,y) in which the endpoints of `e` differ.
    pub fn differing_coordinate(&self, e: &Edge) -> usize {
        let x = &self.vertices[e.u];
        let y = &self.vertices[e.v];
        (0..x.len()).find(|&i| x.digit(i) != y.digit(i)).expect("edge endpoints are equal")
    }

    /// z(x,y): the common part of the endpoint words strictly to the left
    /// of the differing coordinate.
    pub fn edge_prefix(&self, e: &Edge) -> DigitWord {
        let k = self.differing_coordinate(e);
        let x = &self.vertices[e.u];
        DigitWord::from_digits(x.digits()[k + 1..].to_vec())
    }

    /// Linear positions of all vertices (projected/binary graphs).
    pub fn linear_positions(&self) -> Result<Vec<u64>, WordError> {
        self.vertices.iter().map(|w| w.linear_position()).collect()
    }

    /// Hamming weight of every vertex.
    pub fn hamming_weights(&self) -> Vec<usize> {
        self.vertices.iter().map(|w| w.hamming_weight()).collect()
    }

    /// Adjacency lists as (neighbour, edge index) pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = alloc::vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }
}

/// The combinatorial edge criterion. Returns `None` when (x,y) is not an edge:
/// they differ in zero or >= 2 coordinates, or k > 0 with x_{k-1} = 0, or
/// more than d nonzero digits sit below k-1. Otherwise the type: -1 when
/// k = 0, else the count of nonzero digits below k-1.
pub fn edge_type(x: &DigitWord, y: &DigitWord, d: i32) -> Result<Option<i32>, WordError> {
    if x.len() != y.len() {
        return Err(WordError::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut k = None;
    for i in 0..x.len() {
        if x.digit(i) != y.digit(i) {
            if k.is_some() {
                return Ok(None);
            }
            k = Some(i);
        }
    }
    let Some(k) = k else { return Ok(None) };
    Ok(edge_type_at(x, k, d))
}

/// Criterion for words known to differ exactly at coordinate `k`.
fn edge_type_at(x: &DigitWord, k: usize, d: i32) -> Option<i32> {
    if k == 0 {
        return Some(-1);
    }
    if x.digit(k - 1) == 0 {
        return None;
    }
    let t = (0..k - 1).filter(|&i| x.digit(i) != 0).count() as i32;
    if t <= d {
        Some(t)
    } else {
        None
    }
}

fn check_cap(shape: &TreeShape, n: usize, cap: usize) -> Result<usize, BuildError> {
    let mut size = 1usize;
    for i in 0..n {
        size = size.checked_mul(shape.m(i) as usize).unwrap_or(usize::MAX);
        if size > cap {
            return Err(BuildError::CapExceeded { vertices: size, cap });
        }
    }
    Ok(size)
}

fn all_vertices(shape: &TreeShape, n: usize, count: usize) -> Vec<DigitWord> {
    (0..count).map(|r| DigitWord::from_rank(r, shape, n)).collect()
}

fn permutations(m: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..m as u8).collect();
    heap_permute(&mut cur, m as usize, &mut out);
    out
}

fn heap_permute(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(cur, k - 1, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// Every mother-group generator of degree <= d, with permutations ranging
/// over the full symmetric group for each alphabet size in the shape.
pub fn all_generators(d: i32, shape: &TreeShape, n: usize) -> Vec<Generator> {
    let sizes: BTreeSet<u32> = shape.entries()[..n].iter().copied().collect();
    let per_size: Vec<(u32, Vec<Vec<u8>>)> =
        sizes.into_iter().map(|m| (m, permutations(m))).collect();
    let mut tuples: Vec<BTreeMap<u32, Vec<u8>>> = alloc::vec![BTreeMap::new()];
    for (m, perms) in &per_size {
        let mut next = Vec::with_capacity(tuples.len() * perms.len());
        for t in &tuples {
            for p in perms {
                let mut t = t.clone();
                t.insert(*m, p.clone());
                next.push(t);
            }
        }
        tuples = next;
    }
    let mut gens = Vec::new();
    for t in -1..=d {
        for sigma in &tuples {
            gens.push(Generator { degree: t, sigma: sigma.clone() });
        }
    }
    gens
}

/// Build G_{d,m̄,n} from the generator action: one edge per orbit pair,
/// self-loops discarded, duplicates merged. Oracle for `build_from_criterion`.
pub fn build_from_action(d: i32, shape: &TreeShape, n: usize, cap: usize) -> Result<Network, BuildError> {
    assert!(n >= 1);
    if shape.bound() > ACTION_BOUND_LIMIT {
        return Err(BuildError::BoundTooLarge { bound: shape.bound() });
    }
    let count = check_cap(shape, n, cap)?;
    let vertices = all_vertices(shape, n, count);
    let gens = all_generators(d, shape, n);
    let mut seen: BTreeSet<(usize, usize, i32)> = BTreeSet::new();
    for x in &vertices {
        for g in &gens {
            let y = g.apply(x, shape);
            if y == *x {
                continue;
            }
            let (u, v) = (x.rank(shape), y.rank(shape));
            let key = (u.min(v), u.max(v), g.degree);
            seen.insert(key);
        }
    }
    let edges = seen
        .into_iter()
        .map(|(u, v, t)| Edge { u, v, edge_type: t, conductance: rat(1) })
        .collect();
    Ok(Network { shape: shape.clone(), degree: d, level: n, projected: false, vertices, edges })
}

/// Build G_{d,m̄,n} by scanning pairs that differ in one coordinate and
/// applying the edge-type criterion. The canonical builder.
pub fn build_from_criterion(d: i32, shape: &TreeShape, n: usize, cap: usize) -> Result<Network, BuildError> {
    assert!(n >= 1);
    let count = check_cap(shape, n, cap)?;
    let vertices = all_vertices(shape, n, count);
    let mut edges = Vec::new();
    let mut scale = alloc::vec![1usize; n];
    for i in 1..n {
        scale[i] = scale[i - 1] * shape.m(i - 1) as usize;
    }
    for (u, x) in vertices.iter().enumerate() {
        for k in 0..n {
            let Some(t) = edge_type_at(x, k, d) else { continue };
            for w in 0..shape.m(k) as u8 {
                if w <= x.digit(k) {
                    // each unordered pair once, from its smaller digit
                    continue;
                }
                let v = u + (w as usize - x.digit(k) as usize) * scale[k];
                edges.push(Edge { u, v, edge_type: t, conductance: rat(1) });
            }
        }
    }
    Ok(Network { shape: shape.clone(), degree: d, level: n, projected: false, vertices, edges })
}

/// Project a full-alphabet graph onto binary representatives. Self-loops
/// are dropped; a surviving edge (x,y) with x_k = 0, y_k ≠ 0 gets
/// conductance β^{-y} = ∏_{i: y_i≠0} (m_i - 1), the preimage count.
pub fn project_network(net: &Network) -> Network {
    let n = net.level;
    let vertices: Vec<DigitWord> = (0..1usize << n)
        .map(|r| DigitWord::from_digits((0..n).map(|i| ((r >> i) & 1) as u8).collect()))
        .collect();
    let mut merged: BTreeMap<(usize, usize, i32), Rat> = BTreeMap::new();
    for e in &net.edges {
        let px = net.vertices[e.u].project_binary();
        let py = net.vertices[e.v].project_binary();
        if px == py {
            continue;
        }
        let k = net.differing_coordinate(e);
        // orient so the second endpoint carries the extra nonzero digit
        let (pu, pv, heavy) = if px.digit(k) == 0 { (&px, &py, &py) } else { (&py, &px, &px) };
        let cond = beta_weight_inverse(heavy, &net.shape) * &e.conductance;
        let iu = pu
            .digits()
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &d)| acc | ((d as usize) << i));
        let iv = pv
            .digits()
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &d)| acc | ((d as usize) << i));
        let key = (iu.min(iv), iu.max(iv), e.edge_type);
        match merged.get(&key) {
            Some(existing) => debug_assert_eq!(existing, &cond),
            None => {
                merged.insert(key, cond);
            }
        }
    }
    let edges = merged
        .into_iter()
        .map(|((u, v, t), c)| Edge { u, v, edge_type: t, conductance: c })
        .collect();
    Network {
        shape: net.shape.clone(),
        degree: net.degree,
        level: n,
        projected: true,
        vertices,
        edges,
    }
}

/// Build the projected binary graph G_{d,2,n} with conductances from the
/// shape m̄ directly.
pub fn build_projected(d: i32, shape: &TreeShape, n: usize, cap: usize) -> Result<Network, BuildError> {
    if shape.is_binary() {
        let mut net = build_from_criterion(d, shape, n, cap)?;
        net.projected = true;
        return Ok(net);
    }
    // Enumerating the full-alphabet graph just to project it would hit the
    // cap early; instead scan binary pairs and apply the criterion, with
    // the projection conductance.
    if (1usize << n) > cap {
        return Err(BuildError::CapExceeded { vertices: 1 << n, cap });
    }
    let vertices: Vec<DigitWord> = (0..1usize << n)
        .map(|r| DigitWord::from_digits((0..n).map(|i| ((r >> i) & 1) as u8).collect()))
        .collect();
    let mut edges = Vec::new();
    for (u, x) in vertices.iter().enumerate() {
        for k in 0..n {
            if x.digit(k) != 0 {
                continue; // orient from the endpoint with x_k = 0
            }
            let Some(t) = edge_type_at(x, k, d) else { continue };
            let v = u | (1 << k);
            let y = &vertices[v];
            edges.push(Edge {
                u,
                v,
                edge_type: t,
                conductance: beta_weight_inverse(y, shape),
            });
        }
    }
    Ok(Network { shape: shape.clone(), degree: d, level: n, projected: true, vertices, edges })
}

/// Reachability of every vertex from vertex 0 (the all-zero word).
pub fn is_connected(net: &Network) -> bool {
    if net.vertices.is_empty() {
        return true;
    }
    let adj = net.adjacency();
    let mut seen = alloc::vec![false; net.vertices.len()];
    let mut stack = alloc::vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == net.vertices.len()
}
