//! Effective resistance, equilibrium voltages and flows on finite weighted
//! networks. The ground-truth oracle for all cutset bounds.
//!
//! Two modes: exact rational arithmetic (star-mesh elimination for the
//! resistance, dense Gaussian elimination for voltages) and floating point
//! (Jacobi-preconditioned conjugate gradient).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::schreier::Network;
use crate::Rat;

/// Absolute residual tolerance for the float solver, on the Jacobi
/// normalized system.
pub const CG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    EmptyBoundary,
    OverlappingBoundary,
    VertexOutOfRange { vertex: usize, n: usize },
    /// A and B are in different components (voltages undefined).
    Disconnected,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::EmptyBoundary => write!(f, "boundary sets must be nonempty"),
            SolveError::OverlappingBoundary => write!(f, "boundary sets overlap"),
            SolveError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
            SolveError::Disconnected => write!(f, "boundary sets are disconnected"),
        }
    }
}

/// A plain weighted graph; parallel edges are merged by conductance
/// addition on construction, self-loops dropped.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rat)>,
}

impl WeightedGraph {
    pub fn new(n: usize, raw: impl IntoIterator<Item = (usize, usize, Rat)>) -> Self {
        let mut merged: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (u, v, c) in raw {
            assert!(u < n && v < n, "edge endpoint out of range");
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            match merged.get_mut(&key) {
                Some(existing) => *existing += c,
                None => {
                    merged.insert(key, c);
                }
            }
        }
        WeightedGraph {
            n,
            edges: merged.into_iter().map(|((u, v), c)| (u, v, c)).collect(),
        }
    }

    pub fn from_network(net: &Network) -> Self {
        WeightedGraph::new(
            net.vertices.len(),
            net.edges.iter().map(|e| (e.u, e.v, e.conductance.clone())),
        )
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = alloc::vec![Vec::new(); self.n];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    /// Graph with one edge removed.
    pub fn without_edge(&self, edge: usize) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != edge)
            .map(|(_, e)| e.clone())
            .collect();
        WeightedGraph { n: self.n, edges }
    }
}

/// An effective resistance: finite exact value or +infinity (disconnected).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resistance {
    Finite(Rat),
    Infinite,
}

impl Resistance {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Resistance::Finite(r) => Some(r),
            Resistance::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Resistance::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Resistance::Infinite => f64::INFINITY,
        }
    }
}

/// Float-mode resistance with the achieved solver residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatResistance {
    pub value: f64, // f64::INFINITY when disconnected
    pub residual: f64,
}

/// Equilibrium voltages: 0 on A, 1 on B, harmonic at interior vertices.
#[derive(Debug, Clone)]
pub struct VoltageProfile<T> {
    pub values: Vec<T>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Signed flow per edge of a `WeightedGraph`, oriented with the stored
/// (u,v) pair: f(u,v) = (V_v - V_u) C_e, positive towards higher voltage.
#[derive(Debug, Clone)]
pub struct Flow<T> {
    pub per_edge: Vec<T>,
}

fn check_boundary(g: &WeightedGraph, a: &[usize], b: &[usize]) -> Result<(), SolveError> {
    if a.is_empty() || b.is_empty() {
        return Err(SolveError::EmptyBoundary);
    }
    for &v in a.iter().chain(b) {
        if v >= g.n {
            return Err(SolveError::VertexOutOfRange { vertex: v, n: g.n });
        }
    }
    for &v in a {
        if b.contains(&v) {
            return Err(SolveError::OverlappingBoundary);
        }
    }
    Ok(())
}

/// Star-mesh (Schur complement) elimination with min-degree pivoting.
/// Boundary sets are contracted to two super-nodes before solving.
pub fn effective_resistance_exact(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<Resistance, SolveError> {
    check_boundary(g, a, b)?;
    // contracted ids: 0 = A, 1 = B, interior 2..
    let mut id = alloc::vec![usize::MAX; g.n];
    for &v in a {
        id[v] = 0;
    }
    for &v in b {
        id[v] = 1;
    }
    let mut next = 2;
    for v in 0..g.n {
        if id[v] == usize::MAX {
            id[v] = next;
            next += 1;
        }
    }
    let mut adj: Vec<BTreeMap<usize, Rat>> = alloc::vec![BTreeMap::new(); next];
    for (u, v, c) in &g.edges {
        let (iu, iv) = (id[*u], id[*v]);
        if iu == iv {
            continue;
        }
        *adj[iu].entry(iv).or_insert_with(Rat::zero) += c.clone();
        *adj[iv].entry(iu).or_insert_with(Rat::zero) += c.clone();
    }
    let mut alive = alloc::vec![true; next];
    loop {
        // min-degree interior vertex
        let mut pick: Option<(usize, usize)> = None;
        for v in 2..next {
            if alive[v] {
                let deg = adj[v].len();
                if pick.map_or(true, |(_, d)| deg < d) {
                    pick = Some((v, deg));
                }
            }
        }
        let Some((v, _)) = pick else { break };
        alive[v] = false;
        let star: Vec<(usize, Rat)> = core::mem::take(&mut adj[v]).into_iter().collect();
        for (w, _) in &star {
            adj[*w].remove(&v);
        }
        if star.is_empty() {
            continue;
        }
        let total: Rat = star.iter().fold(Rat::zero(), |acc, (_, c)| acc + c);
        for i in 0..star.len() {
            for j in i + 1..star.len() {
                let (wi, ci) = &star[i];
                let (wj, cj) = &star[j];
                let c = ci.clone() * cj.clone() / total.clone();
                *adj[*wi].entry(*wj).or_insert_with(Rat::zero) += c.clone();
                *adj[*wj].entry(*wi).or_insert_with(Rat::zero) += c;
            }
        }
    }
    match adj[0].get(&1) {
        Some(c) if !c.is_zero() => Ok(Resistance::Finite(Rat::new(
            c.denom().clone(),
            c.numer().clone(),
        ))),
        _ => Ok(Resistance::Infinite),
    }
}

fn component_of(g: &WeightedGraph, seeds: &[usize]) -> Vec<bool> {
    let adj = g.adjacency();
    let mut seen = alloc::vec![false; g.n];
    let mut stack: Vec<usize> = seeds.to_vec();
    for &s in seeds {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Exact equilibrium voltages via dense rational Gaussian elimination.
/// Intended for graphs up to a few hundred vertices.
pub fn equilibrium_voltage_exact(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<VoltageProfile<Rat>, SolveError> {
    check_boundary(g, a, b)?;
    let reach = component_of(g, a);
    if !b.iter().any(|&v| reach[v]) {
        return Err(SolveError::Disconnected);
    }
    let mut kind = alloc::vec![0u8; g.n]; // 0 interior, 1 in A, 2 in B
    for &v in a {
        kind[v] = 1;
    }
    for &v in b {
        kind[v] = 2;
    }
    let interior: Vec<usize> = (0..g.n).filter(|&v| kind[v] == 0 && reach[v]).collect();
    let mut idx = alloc::vec![usize::MAX; g.n];
    for (i, &v) in interior.iter().enumerate() {
        idx[v] = i;
    }
    let m = interior.len();
    let mut mat = alloc::vec![alloc::vec![Rat::zero(); m]; m];
    let mut rhs = alloc::vec![Rat::zero(); m];
    for (u, v, c) in &g.edges {
        for (p, q) in [(*u, *v), (*v, *u)] {
            if kind[p] == 0 && reach[p] {
                let i = idx[p];
                mat[i][i] += c.clone();
                match kind[q] {
                    0 => mat[i][idx[q]] -= c.clone(),
                    1 => {}
                    _ => rhs[i] += c.clone(),
                }
            }
        }
    }
    // Gaussian elimination with partial (first nonzero) pivoting
    for col in 0..m {
        let pivot = (col..m).find(|&r| !mat[r][col].is_zero());
        let Some(p) = pivot else {
            // interior vertex not connected to the boundary inside the
            // component cannot happen; a zero column means a singular
            // system from a degenerate input
            return Err(SolveError::Disconnected);
        };
        mat.swap(col, p);
        rhs.swap(col, p);
        let inv = {
            let d = mat[col][col].clone();
            Rat::new(d.denom().clone(), d.numer().clone())
        };
        for j in col..m {
            let val = mat[col][j].clone() * inv.clone();
            mat[col][j] = val;
        }
        let r = rhs[col].clone() * inv;
        rhs[col] = r;
        for row in 0..m {
            if row != col && !mat[row][col].is_zero() {
                let factor = mat[row][col].clone();
                for j in col..m {
                    let sub = factor.clone() * mat[col][j].clone();
                    mat[row][j] -= sub;
                }
                let sub = factor * rhs[col].clone();
                rhs[row] -= sub;
            }
        }
    }
    let mut values = alloc::vec![Rat::zero(); g.n];
    for &v in b {
        values[v] = crate::rat(1);
    }
    for (i, &v) in interior.iter().enumerate() {
        values[v] = rhs[i].clone();
    }
    Ok(VoltageProfile { values, a: a.to_vec(), b: b.to_vec() })
}

fn fabs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

/// Float equilibrium voltages via conjugate gradient with Jacobi
/// preconditioning. Returns the profile and the achieved residual
/// (max-norm of the diagonally normalized residual).
pub fn equilibrium_voltage_float(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<(VoltageProfile<f64>, f64), SolveError> {
    check_boundary(g, a, b)?;
    let reach = component_of(g, a);
    if !b.iter().any(|&v| reach[v]) {
        return Err(SolveError::Disconnected);
    }
    let mut kind = alloc::vec![0u8; g.n];
    for &v in a {
        kind[v] = 1;
    }
    for &v in b {
        kind[v] = 2;
    }
    let interior: Vec<usize> = (0..g.n).filter(|&v| kind[v] == 0 && reach[v]).collect();
    let mut idx = alloc::vec![usize::MAX; g.n];
    for (i, &v) in interior.iter().enumerate() {
        idx[v] = i;
    }
    let m = interior.len();
    // CSR-ish assembly of the interior Laplacian
    let mut diag = alloc::vec![0.0f64; m];
    let mut rows: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); m];
    let mut rhs = alloc::vec![0.0f64; m];
    for (u, v, c) in &g.edges {
        let cf = c.to_f64().unwrap();
        for (p, q) in [(*u, *v), (*v, *u)] {
            if kind[p] == 0 && reach[p] {
                let i = idx[p];
                diag[i] += cf;
                match kind[q] {
                    0 => rows[i].push((idx[q], -cf)),
                    1 => {}
                    _ => rhs[i] += cf,
                }
            }
        }
    }
    let matvec = |x: &[f64], out: &mut [f64]| {
        for i in 0..m {
            let mut acc = diag[i] * x[i];
            for &(j, c) in &rows[i] {
                acc += c * x[j];
            }
            out[i] = acc;
        }
    };
    let mut x = alloc::vec![0.0f64; m];
    let mut r = rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = alloc::vec![0.0f64; m];
    let norm = |r: &[f64]| -> f64 {
        r.iter()
            .zip(&diag)
            .map(|(ri, di)| fabs(ri / di))
            .fold(0.0, f64::max)
    };
    let max_iter = 60 * m + 2000;
    let mut iter = 0;
    while norm(&r) > CG_TOLERANCE && iter < max_iter {
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        // periodic residual refresh against drift
        if iter % 256 == 255 {
            matvec(&x, &mut r);
            for i in 0..m {
                r[i] = rhs[i] - r[i];
            }
        }
        for i in 0..m {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
        iter += 1;
    }
    matvec(&x, &mut ap);
    for i in 0..m {
        r[i] = rhs[i] - ap[i];
    }
    let residual = norm(&r);
    let mut values = alloc::vec![0.0f64; g.n];
    for &v in b {
        values[v] = 1.0;
    }
    for (i, &v) in interior.iter().enumerate() {
        values[v] = x[i];
    }
    Ok((VoltageProfile { values, a: a.to_vec(), b: b.to_vec() }, residual))
}

/// Total current out of A under a unit potential gap: 1/Res(A,B).
fn current_out_of_a_exact(g: &WeightedGraph, volt: &VoltageProfile<Rat>) -> Rat {
    let in_a = membership(g.n, &volt.a);
    let mut current = Rat::zero();
    for (u, v, c) in &g.edges {
        if in_a[*u] && !in_a[*v] {
            current += volt.values[*v].clone() * c.clone();
        } else if in_a[*v] && !in_a[*u] {
            current += volt.values[*u].clone() * c.clone();
        }
    }
    current
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = alloc::vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Float effective resistance from the CG voltages.
pub fn effective_resistance_float(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<FloatResistance, SolveError> {
    match equilibrium_voltage_float(g, a, b) {
        Ok((volt, residual)) => {
            let in_a = membership(g.n, a);
            let mut current = 0.0;
            for (u, v, c) in &g.edges {
                let cf = c.to_f64().unwrap();
                if in_a[*u] && !in_a[*v] {
                    current += volt.values[*v] * cf;
                } else if in_a[*v] && !in_a[*u] {
                    current += volt.values[*u] * cf;
                }
            }
            Ok(FloatResistance { value: 1.0 / current, residual })
        }
        Err(SolveError::Disconnected) => Ok(FloatResistance { value: f64::INFINITY, residual: 0.0 }),
        Err(e) => Err(e),
    }
}

/// Equilibrium flow f(u,v) = (V_v - V_u) C_e per stored edge.
pub fn equilibrium_flow_exact(g: &WeightedGraph, volt: &VoltageProfile<Rat>) -> Flow<Rat> {
    Flow {
        per_edge: g
            .edges
            .iter()
            .map(|(u, v, c)| (volt.values[*v].clone() - volt.values[*u].clone()) * c.clone())
            .collect(),
    }
}

pub fn equilibrium_flow_float(g: &WeightedGraph, volt: &VoltageProfile<f64>) -> Flow<f64> {
    Flow {
        per_edge: g
            .edges
            .iter()
            .map(|(u, v, c)| (volt.values[*v] - volt.values[*u]) * c.to_f64().unwrap())
            .collect(),
    }
}

/// Exact resistance together with exact voltages; the voltage-derived
/// current must invert to the star-mesh value, which is asserted.
pub fn resistance_and_voltage_exact(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<(Rat, VoltageProfile<Rat>), SolveError> {
    let volt = equilibrium_voltage_exact(g, a, b)?;
    let current = current_out_of_a_exact(g, &volt);
    debug_assert!(!current.is_zero());
    let res = Rat::new(current.denom().clone(), current.numer().clone());
    Ok((res, volt))
}

/// Rayleigh monotonicity harness: deleting an edge never lowers Res(A,B).
pub fn resistance_monotonicity_check(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
    edge: usize,
) -> Result<bool, SolveError> {
    let before = effective_resistance_exact(g, a, b)?;
    let after = effective_resistance_exact(&g.without_edge(edge), a, b)?;
    Ok(match (&before, &after) {
        (_, Resistance::Infinite) => true,
        (Resistance::Infinite, Resistance::Finite(_)) => false,
        (Resistance::Finite(rb), Resistance::Finite(ra)) => ra >= rb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schreier::{build_from_criterion, DEFAULT_VERTEX_CAP};
    use crate::words::TreeShape;
    use crate::{rat, ratio};

    fn unit_path(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n - 1).map(|i| (i, i + 1, rat(1))))
    }

    #[test]
    fn path_resistance() {
        for n in [2usize, 5, 17] {
            let g = unit_path(n);
            let r = effective_resistance_exact(&g, &[0], &[n - 1]).unwrap();
            assert_eq!(r, Resistance::Finite(rat(n as i64 - 1)));
        }
    }

    #[test]
    fn triangle_resistance() {
        let g = WeightedGraph::new(3, [(0, 1, rat(1)), (1, 2, rat(1)), (0, 2, rat(1))]);
        let r = effective_resistance_exact(&g, &[0], &[1]).unwrap();
        assert_eq!(r, Resistance::Finite(ratio(2, 3)));
    }

    #[test]
    fn schreier_g123_resistance() {
        // series-parallel: 2 + (3 || 1) + 2 = 19/4 between linear
        // positions 0 and 7
        let shape = TreeShape::constant(2, 3).unwrap();
        let net = build_from_criterion(1, &shape, 3, DEFAULT_VERTEX_CAP).unwrap();
        let g = WeightedGraph::from_network(&net);
        let pos = net.linear_positions().unwrap();
        let a = (0..8).find(|&v| pos[v] == 0).unwrap();
        let b = (0..8).find(|&v| pos[v] == 7).unwrap();
        let r = effective_resistance_exact(&g, &[a], &[b]).unwrap();
        assert_eq!(r, Resistance::Finite(ratio(19, 4)));

        let (r2, volt) = resistance_and_voltage_exact(&g, &[a], &[b]).unwrap();
        assert_eq!(r2, ratio(19, 4));
        // flow through the chord equals its voltage drop (unit conductance)
        let chord = net.edges.iter().position(|e| e.edge_type == 1).unwrap();
        let flow = equilibrium_flow_exact(&g, &volt);
        let (u, v, _) = &g.edges[chord];
        assert_eq!(
            flow.per_edge[chord],
            volt.values[*v].clone() - volt.values[*u].clone()
        );
    }

    #[test]
    fn voltage_linear_on_path() {
        let g = unit_path(4);
        let volt = equilibrium_voltage_exact(&g, &[0], &[3]).unwrap();
        assert_eq!(volt.values, alloc::vec![rat(0), ratio(1, 3), ratio(2, 3), rat(1)]);
        let flow = equilibrium_flow_exact(&g, &volt);
        for f in &flow.per_edge {
            assert_eq!(f, &ratio(1, 3));
        }
    }

    #[test]
    fn voltage_symmetry() {
        // 4-cycle: the two interior vertices are swapped by an automorphism
        // fixing A and B, so they carry equal voltage
        let g = WeightedGraph::new(
            4,
            [(0, 1, rat(1)), (1, 3, rat(1)), (0, 2, rat(1)), (2, 3, rat(1))],
        );
        let volt = equilibrium_voltage_exact(&g, &[0], &[3]).unwrap();
        assert_eq!(volt.values[1], volt.values[2]);
    }

    #[test]
    fn harmonic_interior() {
        let g = WeightedGraph::new(
            5,
            [
                (0, 1, rat(2)),
                (1, 2, rat(3)),
                (2, 3, rat(1)),
                (1, 3, rat(5)),
                (3, 4, rat(1)),
            ],
        );
        let volt = equilibrium_voltage_exact(&g, &[0], &[4]).unwrap();
        let adj = g.adjacency();
        for v in 1..=3 {
            let mut num = Rat::zero();
            let mut den = Rat::zero();
            for &(w, e) in &adj[v] {
                num += volt.values[w].clone() * g.edges[e].2.clone();
                den += g.edges[e].2.clone();
            }
            assert_eq!(volt.values[v].clone() * den, num, "vertex {v} not harmonic");
        }
    }

    #[test]
    fn disconnected_and_overlap() {
        let g = WeightedGraph::new(4, [(0, 1, rat(1)), (2, 3, rat(1))]);
        assert_eq!(
            effective_resistance_exact(&g, &[0], &[2]).unwrap(),
            Resistance::Infinite
        );
        assert_eq!(
            equilibrium_voltage_exact(&g, &[0], &[2]).err(),
            Some(SolveError::Disconnected)
        );
        assert_eq!(
            effective_resistance_exact(&g, &[0], &[0, 2]),
            Err(SolveError::OverlappingBoundary)
        );
        assert_eq!(
            effective_resistance_exact(&g, &[], &[1]),
            Err(SolveError::EmptyBoundary)
        );
        let fr = effective_resistance_float(&g, &[0], &[2]).unwrap();
        assert_eq!(fr.value, f64::INFINITY);
    }

    #[test]
    fn float_matches_exact() {
        let shape = TreeShape::repeating(&[3, 2, 4], 5).unwrap();
        let net = build_from_criterion(2, &shape, 5, DEFAULT_VERTEX_CAP).unwrap();
        let g = WeightedGraph::from_network(&net);
        let exact = effective_resistance_exact(&g, &[0], &[g.n - 1]).unwrap();
        let float = effective_resistance_float(&g, &[0], &[g.n - 1]).unwrap();
        let ex = exact.finite().unwrap().to_f64().unwrap();
        assert!(fabs(float.value - ex) <= 1e-8 * ex);
        assert!(float.residual <= CG_TOLERANCE);
    }

    #[test]
    fn res_symmetric_and_scaling() {
        let g = WeightedGraph::new(
            5,
            [
                (0, 1, rat(2)),
                (1, 2, rat(3)),
                (2, 3, rat(1)),
                (1, 3, rat(5)),
                (3, 4, rat(1)),
                (0, 4, rat(2)),
            ],
        );
        let r_ab = effective_resistance_exact(&g, &[0], &[3]).unwrap();
        let r_ba = effective_resistance_exact(&g, &[3], &[0]).unwrap();
        assert_eq!(r_ab, r_ba);
        // scaling all resistances by c scales Res by c (conductances by 1/c)
        let scaled = WeightedGraph::new(
            g.n,
            g.edges.iter().map(|(u, v, c)| (*u, *v, c.clone() / rat(7))),
        );
        let r_scaled = effective_resistance_exact(&scaled, &[0], &[3]).unwrap();
        assert_eq!(
            r_scaled.finite().unwrap(),
            &(r_ab.finite().unwrap().clone() * rat(7))
        );
    }

    #[test]
    fn energy_identity_exact() {
        let g = WeightedGraph::new(
            4,
            [(0, 1, rat(1)), (1, 3, rat(2)), (0, 2, rat(3)), (2, 3, rat(1)), (1, 2, rat(1))],
        );
        let (res, volt) = resistance_and_voltage_exact(&g, &[0], &[3]).unwrap();
        let flow = equilibrium_flow_exact(&g, &volt);
        // energy = sum R_e f_e^2 = Res * I^2 with I = 1/Res
        let mut energy = Rat::zero();
        for (f, (_, _, c)) in flow.per_edge.iter().zip(&g.edges) {
            energy += f.clone() * f.clone() / c.clone();
        }
        let inv = Rat::new(res.denom().clone(), res.numer().clone());
        assert_eq!(energy, inv);
    }

    #[test]
    fn shrinking_b_never_decreases_res() {
        let g = WeightedGraph::new(
            6,
            [
                (0, 1, rat(1)),
                (1, 2, rat(1)),
                (2, 3, rat(1)),
                (1, 4, rat(1)),
                (4, 5, rat(1)),
                (3, 5, rat(1)),
            ],
        );
        let big = effective_resistance_exact(&g, &[0], &[3, 5]).unwrap();
        let small = effective_resistance_exact(&g, &[0], &[3]).unwrap();
        assert!(small.finite().unwrap() >= big.finite().unwrap());
    }

    #[test]
    fn monotonicity_harness() {
        let g = WeightedGraph::new(3, [(0, 1, rat(1)), (1, 2, rat(1)), (0, 2, rat(1))]);
        for e in 0..g.edges.len() {
            assert!(resistance_monotonicity_check(&g, &[0], &[2], e).unwrap());
        }
        // deleting a bridge: infinity >= finite
        let bridge = WeightedGraph::new(2, [(0, 1, rat(1))]);
        assert!(resistance_monotonicity_check(&bridge, &[0], &[1], 0).unwrap());
    }
}
