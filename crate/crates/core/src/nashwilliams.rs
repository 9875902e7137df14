//! Weighted Nash-Williams machinery: resistance allocations over
//! non-disjoint cutsets, the lower bound Σ C(S_i)^{-1} ≤ Res(A,B), the
//! proportional-weight allocation, and the voltage-level-set construction
//! that achieves equality.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Sub};

use num_traits::{ToPrimitive, Zero};

use crate::electric::{
    equilibrium_voltage_exact, equilibrium_voltage_float, SolveError, VoltageProfile,
    WeightedGraph,
};
use crate::Rat;

/// Scalar abstraction so the bound machinery runs in exact rational or
/// float mode with the same code.
pub trait Value:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rat(r: &Rat) -> Self;
    fn recip(&self) -> Self;
    /// `sum <= cap`, with a relative slack in float mode to absorb rounding.
    fn le_with_slack(sum: &Self, cap: &Self) -> bool;
    fn as_f64(&self) -> f64;
}

impl Value for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        crate::rat(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn recip(&self) -> Self {
        Rat::new(self.denom().clone(), self.numer().clone())
    }
    fn le_with_slack(sum: &Self, cap: &Self) -> bool {
        sum <= cap
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap()
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn le_with_slack(sum: &Self, cap: &Self) -> bool {
        *sum <= cap * (1.0 + 1e-9) + 1e-12
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

/// An edge set separating A from B. `label` carries the linear position â
/// for the mother-group cutset families.
#[derive(Debug, Clone)]
pub struct Cutset {
    pub id: usize,
    pub edges: BTreeSet<usize>,
    pub label: Option<u64>,
}

/// Partial resistances R_{e,i} >= 0 per (edge, cutset) pair; entries absent
/// from the map are zero.
#[derive(Debug, Clone)]
pub struct Allocation<T> {
    pub entries: BTreeMap<(usize, usize), T>,
}

impl<T: Value> Allocation<T> {
    pub fn empty() -> Self {
        Allocation { entries: BTreeMap::new() }
    }

    pub fn get(&self, edge: usize, cutset: usize) -> Option<&T> {
        self.entries.get(&(edge, cutset))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AllocationError {
    NegativeWeight { cutset: usize },
    NegativePartialResistance { edge: usize, cutset: usize },
    /// R_{e,i} > 0 for an edge outside S_i.
    EntryOutsideCutset { edge: usize, cutset: usize },
    /// Σ_i R_{e,i} > R_e.
    ExceedsEdgeResistance { edge: usize },
    WeightCountMismatch { cutsets: usize, weights: usize },
}

impl fmt::Display for AllocationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AllocationError::NegativeWeight { cutset } => {
                write!(f, "negative weight for cutset {cutset}")
            }
            AllocationError::NegativePartialResistance { edge, cutset } => {
                write!(f, "negative partial resistance at edge {edge}, cutset {cutset}")
            }
            AllocationError::EntryOutsideCutset { edge, cutset } => {
                write!(f, "allocation entry for edge {edge} outside cutset {cutset}")
            }
            AllocationError::ExceedsEdgeResistance { edge } => {
                write!(f, "allocated resistances exceed the resistance of edge {edge}")
            }
            AllocationError::WeightCountMismatch { cutsets, weights } => {
                write!(f, "{weights} weights for {cutsets} cutsets")
            }
        }
    }
}

/// True iff removing `cut` disconnects every vertex of A from every vertex
/// of B.
pub fn validate_cutset(g: &WeightedGraph, cut: &BTreeSet<usize>, a: &[usize], b: &[usize]) -> bool {
    let adj = g.adjacency();
    let mut seen = alloc::vec![false; g.n];
    let mut stack: Vec<usize> = a.to_vec();
    for &v in a {
        seen[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &(w, e) in &adj[v] {
            if cut.contains(&e) || seen[w] {
                continue;
            }
            seen[w] = true;
            stack.push(w);
        }
    }
    !b.iter().any(|&v| seen[v])
}

/// Check the allocation contract against a cutset collection.
pub fn validate_allocation<T: Value>(
    g: &WeightedGraph,
    cutsets: &[Cutset],
    alloc: &Allocation<T>,
) -> Result<(), AllocationError> {
    let by_id: BTreeMap<usize, &Cutset> = cutsets.iter().map(|c| (c.id, c)).collect();
    let mut per_edge: BTreeMap<usize, T> = BTreeMap::new();
    for (&(edge, cutset), r) in &alloc.entries {
        if r < &T::zero() {
            return Err(AllocationError::NegativePartialResistance { edge, cutset });
        }
        if !r.is_zero() {
            match by_id.get(&cutset) {
                Some(c) if c.edges.contains(&edge) => {}
                _ => return Err(AllocationError::EntryOutsideCutset { edge, cutset }),
            }
        }
        let entry = per_edge.entry(edge).or_insert_with(T::zero);
        *entry = entry.clone() + r.clone();
    }
    for (&edge, total) in &per_edge {
        let r_e = T::from_rat(&g.edges[edge].2).recip();
        if !T::le_with_slack(total, &r_e) {
            return Err(AllocationError::ExceedsEdgeResistance { edge });
        }
    }
    Ok(())
}

/// Split conductance C(S_i) = Σ_{e ∈ S_i} R_{e,i}^{-1}. `None` encodes
/// +infinity: an edge of S_i with zero allocated resistance.
pub fn split_conductance<T: Value>(cutset: &Cutset, alloc: &Allocation<T>) -> Option<T> {
    let mut c = T::zero();
    for &e in &cutset.edges {
        match alloc.get(e, cutset.id) {
            Some(r) if !r.is_zero() => c = c + r.recip(),
            _ => return None, // infinite conductance, zero contribution
        }
    }
    Some(c)
}

/// One row of a bound certificate.
#[derive(Debug, Clone)]
pub struct BoundRow<T> {
    pub cutset_id: usize,
    pub label: Option<u64>,
    pub size: usize,
    pub weight: Option<T>,
    /// `None` = infinite split conductance (contribution zero).
    pub split_conductance: Option<T>,
    pub contribution: T,
}

/// A certified lower bound: per-cutset split conductances, their inverse
/// sum, and optionally the solver's resistance for comparison.
#[derive(Debug, Clone)]
pub struct BoundReport<T> {
    pub rows: Vec<BoundRow<T>>,
    pub bound: T,
    pub solver_resistance: Option<T>,
}

impl<T: Value> BoundReport<T> {
    /// bound / Res, when the solver value is present and positive.
    pub fn gap_ratio(&self) -> Option<f64> {
        let res = self.solver_resistance.as_ref()?;
        if res.is_zero() {
            return None;
        }
        Some(self.bound.as_f64() / res.as_f64())
    }
}

/// The weighted Nash-Williams lower bound Σ_i C(S_i)^{-1} for a validated
/// allocation, with per-cutset detail.
pub fn wnw_bound<T: Value>(
    g: &WeightedGraph,
    cutsets: &[Cutset],
    alloc: &Allocation<T>,
    weights: Option<&[T]>,
    solver_resistance: Option<T>,
) -> Result<BoundReport<T>, AllocationError> {
    validate_allocation(g, cutsets, alloc)?;
    if let Some(w) = weights {
        if w.len() != cutsets.len() {
            return Err(AllocationError::WeightCountMismatch {
                cutsets: cutsets.len(),
                weights: w.len(),
            });
        }
    }
    let mut rows = Vec::with_capacity(cutsets.len());
    let mut bound = T::zero();
    for (i, cs) in cutsets.iter().enumerate() {
        let c = split_conductance(cs, alloc);
        let contribution = match &c {
            Some(c) if !c.is_zero() => c.recip(),
            _ => T::zero(),
        };
        bound = bound.clone() + contribution.clone();
        rows.push(BoundRow {
            cutset_id: cs.id,
            label: cs.label,
            size: cs.edges.len(),
            weight: weights.map(|w| w[i].clone()),
            split_conductance: c,
            contribution,
        });
    }
    Ok(BoundReport { rows, bound, solver_resistance })
}

/// Proportional allocation: R_{e,i} = R_e K_i / Σ_{S_j ∋ e} K_j. Edges
/// whose containing cutsets all have zero weight are dropped from every
/// allocation (permitted slack).
pub fn proportional_allocation<T: Value>(
    g: &WeightedGraph,
    cutsets: &[Cutset],
    weights: &[T],
) -> Result<Allocation<T>, AllocationError> {
    if weights.len() != cutsets.len() {
        return Err(AllocationError::WeightCountMismatch {
            cutsets: cutsets.len(),
            weights: weights.len(),
        });
    }
    for (i, w) in weights.iter().enumerate() {
        if w < &T::zero() {
            return Err(AllocationError::NegativeWeight { cutset: cutsets[i].id });
        }
    }
    let mut denom: BTreeMap<usize, T> = BTreeMap::new();
    for (cs, w) in cutsets.iter().zip(weights) {
        for &e in &cs.edges {
            let entry = denom.entry(e).or_insert_with(T::zero);
            *entry = entry.clone() + w.clone();
        }
    }
    let mut alloc = Allocation::empty();
    for (cs, w) in cutsets.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for &e in &cs.edges {
            let d = &denom[&e];
            let r_e = T::from_rat(&g.edges[e].2).recip();
            alloc.entries.insert((e, cs.id), r_e * w.clone() / d.clone());
        }
    }
    Ok(alloc)
}

/// The voltage level-set construction from the achievability proof:
/// cutsets are the edge sets crossing U_i = {V < a_i} for the distinct
/// voltage values a_i, weighted by the level gaps.
#[derive(Debug, Clone)]
pub struct OptimalConstruction<T> {
    pub cutsets: Vec<Cutset>,
    pub weights: Vec<T>,
    pub allocation: Allocation<T>,
    pub voltage: VoltageProfile<T>,
}

fn level_sets<T: Value>(
    g: &WeightedGraph,
    voltage: &VoltageProfile<T>,
    levels: &[T],
) -> (Vec<Cutset>, Vec<T>) {
    let mut cutsets = Vec::new();
    let mut weights = Vec::new();
    for i in 1..levels.len() {
        let a_i = &levels[i];
        let mut edges = BTreeSet::new();
        for (e, (u, v, _)) in g.edges.iter().enumerate() {
            let (lo, hi) = if voltage.values[*u] <= voltage.values[*v] {
                (&voltage.values[*u], &voltage.values[*v])
            } else {
                (&voltage.values[*v], &voltage.values[*u])
            };
            if lo < a_i && hi >= a_i {
                edges.insert(e);
            }
        }
        cutsets.push(Cutset { id: i - 1, edges, label: None });
        weights.push(levels[i].clone() - levels[i - 1].clone());
    }
    (cutsets, weights)
}

/// Exact-mode optimal allocation; `wnw_bound` of the result equals
/// Res(A,B) exactly.
pub fn optimal_allocation_exact(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<OptimalConstruction<Rat>, SolveError> {
    let voltage = equilibrium_voltage_exact(g, a, b)?;
    let mut levels: Vec<Rat> = voltage.values.clone();
    levels.sort();
    levels.dedup();
    let (cutsets, weights) = level_sets(g, &voltage, &levels);
    let allocation = proportional_allocation(g, &cutsets, &weights)
        .expect("level-set weights are nonnegative");
    Ok(OptimalConstruction { cutsets, weights, allocation, voltage })
}

/// Voltage values within this absolute distance are treated as one level
/// in float mode.
pub const LEVEL_CLUSTER_TOLERANCE: f64 = 1e-9;

/// Float-mode optimal allocation; the bound matches Res(A,B) to within the
/// solver tolerance.
pub fn optimal_allocation_float(
    g: &WeightedGraph,
    a: &[usize],
    b: &[usize],
) -> Result<OptimalConstruction<f64>, SolveError> {
    let (mut voltage, _residual) = equilibrium_voltage_float(g, a, b)?;
    // cluster nearly-equal voltages before forming distinct levels
    let mut sorted: Vec<f64> = voltage.values.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut levels: Vec<f64> = Vec::new();
    for v in sorted {
        match levels.last() {
            Some(&last) if v - last <= LEVEL_CLUSTER_TOLERANCE => {}
            _ => levels.push(v),
        }
    }
    // snap voltages onto their cluster representative
    for v in voltage.values.iter_mut() {
        let i = levels.partition_point(|l| *l <= *v);
        let cand = levels[i.saturating_sub(1)];
        if *v - cand <= LEVEL_CLUSTER_TOLERANCE {
            *v = cand;
        }
    }
    let (cutsets, weights) = level_sets(g, &voltage, &levels);
    let allocation = proportional_allocation(g, &cutsets, &weights)
        .expect("level-set weights are nonnegative");
    Ok(OptimalConstruction { cutsets, weights, allocation, voltage })
}

/// Partial sums of per-scale bounds, for the recurrence experiments.
pub fn divergence_series<T: Value>(bounds: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut acc = T::zero();
    bounds
        .into_iter()
        .map(|b| {
            acc = acc.clone() + b;
            acc.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electric::{effective_resistance_exact, Resistance};
    use crate::schreier::{build_from_criterion, DEFAULT_VERTEX_CAP};
    use crate::words::TreeShape;
    use crate::{rat, ratio};

    fn unit_path(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n - 1).map(|i| (i, i + 1, rat(1))))
    }

    fn single(id: usize, e: usize) -> Cutset {
        let mut edges = BTreeSet::new();
        edges.insert(e);
        Cutset { id, edges, label: None }
    }

    #[test]
    fn validate_cutset_examples() {
        let path = unit_path(5);
        for e in 0..4 {
            let mut s = BTreeSet::new();
            s.insert(e);
            assert!(validate_cutset(&path, &s, &[0], &[4]));
        }
        // G_{1,2,3}: one path edge is bypassed by the chord
        let shape = TreeShape::constant(2, 3).unwrap();
        let net = build_from_criterion(1, &shape, 3, DEFAULT_VERTEX_CAP).unwrap();
        let g = WeightedGraph::from_network(&net);
        let pos = net.linear_positions().unwrap();
        let a = (0..8).find(|&v| pos[v] == 0).unwrap();
        let b = (0..8).find(|&v| pos[v] == 7).unwrap();
        let edge_between = |p: u64, q: u64| {
            g.edges
                .iter()
                .position(|(u, v, _)| {
                    (pos[*u] == p && pos[*v] == q) || (pos[*u] == q && pos[*v] == p)
                })
                .unwrap()
        };
        let mid = edge_between(2, 3);
        let chord = edge_between(2, 5);
        let mut s = BTreeSet::new();
        s.insert(mid);
        assert!(!validate_cutset(&g, &s, &[a], &[b]));
        s.insert(chord);
        assert!(validate_cutset(&g, &s, &[a], &[b]));
    }

    #[test]
    fn split_conductance_examples() {
        let cs = single(0, 0);
        let mut alloc: Allocation<Rat> = Allocation::empty();
        alloc.entries.insert((0, 0), rat(1));
        assert_eq!(split_conductance(&cs, &alloc), Some(rat(1)));

        // two edges each allocated 1/2 -> C = 4
        let mut edges = BTreeSet::new();
        edges.insert(0);
        edges.insert(1);
        let cs2 = Cutset { id: 1, edges, label: None };
        let mut alloc2: Allocation<Rat> = Allocation::empty();
        alloc2.entries.insert((0, 1), ratio(1, 2));
        alloc2.entries.insert((1, 1), ratio(1, 2));
        assert_eq!(split_conductance(&cs2, &alloc2), Some(rat(4)));

        // a zero-allocated edge makes C infinite
        let mut alloc3: Allocation<Rat> = Allocation::empty();
        alloc3.entries.insert((0, 1), ratio(1, 2));
        assert_eq!(split_conductance(&cs2, &alloc3), None);
    }

    #[test]
    fn classical_nash_williams_on_path() {
        let n = 6;
        let g = unit_path(n);
        let cutsets: Vec<Cutset> = (0..n - 1).map(|e| single(e, e)).collect();
        let weights = alloc::vec![rat(1); n - 1];
        let alloc = proportional_allocation(&g, &cutsets, &weights).unwrap();
        let report = wnw_bound(&g, &cutsets, &alloc, Some(&weights), None).unwrap();
        assert_eq!(report.bound, rat(n as i64 - 1));
    }

    #[test]
    fn shared_edge_splits_in_half() {
        let g = unit_path(2);
        let cutsets = alloc::vec![single(0, 0), single(1, 0)];
        let weights = alloc::vec![rat(1), rat(1)];
        let alloc = proportional_allocation(&g, &cutsets, &weights).unwrap();
        assert_eq!(alloc.get(0, 0), Some(&ratio(1, 2)));
        assert_eq!(alloc.get(0, 1), Some(&ratio(1, 2)));
        // bound is unchanged: 1/2 + 1/2
        let report = wnw_bound(&g, &cutsets, &alloc, None, None).unwrap();
        assert_eq!(report.bound, rat(1));
    }

    #[test]
    fn negative_weight_rejected() {
        let g = unit_path(2);
        let cutsets = alloc::vec![single(0, 0)];
        assert_eq!(
            proportional_allocation(&g, &cutsets, &[rat(-1)]).unwrap_err(),
            AllocationError::NegativeWeight { cutset: 0 }
        );
    }

    #[test]
    fn invalid_allocation_rejected() {
        let g = unit_path(3);
        let cutsets = alloc::vec![single(0, 0)];
        let mut alloc: Allocation<Rat> = Allocation::empty();
        alloc.entries.insert((0, 0), rat(2)); // exceeds R_e = 1
        assert_eq!(
            wnw_bound(&g, &cutsets, &alloc, None, None).unwrap_err(),
            AllocationError::ExceedsEdgeResistance { edge: 0 }
        );
        let mut alloc2: Allocation<Rat> = Allocation::empty();
        alloc2.entries.insert((1, 0), ratio(1, 2)); // edge outside S_0
        assert_eq!(
            wnw_bound(&g, &cutsets, &alloc2, None, None).unwrap_err(),
            AllocationError::EntryOutsideCutset { edge: 1, cutset: 0 }
        );
    }

    #[test]
    fn optimal_on_path_and_triangle() {
        let g = unit_path(5);
        let opt = optimal_allocation_exact(&g, &[0], &[4]).unwrap();
        let report = wnw_bound(&g, &opt.cutsets, &opt.allocation, Some(&opt.weights), None).unwrap();
        assert_eq!(report.bound, rat(4));

        let tri = WeightedGraph::new(3, [(0, 1, rat(1)), (1, 2, rat(1)), (0, 2, rat(1))]);
        let opt = optimal_allocation_exact(&tri, &[0], &[1]).unwrap();
        let report = wnw_bound(&tri, &opt.cutsets, &opt.allocation, Some(&opt.weights), None).unwrap();
        assert_eq!(report.bound, ratio(2, 3));
    }

    #[test]
    fn optimal_on_g123() {
        let shape = TreeShape::constant(2, 3).unwrap();
        let net = build_from_criterion(1, &shape, 3, DEFAULT_VERTEX_CAP).unwrap();
        let g = WeightedGraph::from_network(&net);
        let pos = net.linear_positions().unwrap();
        let a = (0..8).find(|&v| pos[v] == 0).unwrap();
        let b = (0..8).find(|&v| pos[v] == 7).unwrap();
        let opt = optimal_allocation_exact(&g, &[a], &[b]).unwrap();
        let res = match effective_resistance_exact(&g, &[a], &[b]).unwrap() {
            Resistance::Finite(r) => r,
            _ => unreachable!(),
        };
        assert_eq!(res, ratio(19, 4));
        let report =
            wnw_bound(&g, &opt.cutsets, &opt.allocation, Some(&opt.weights), Some(res.clone()))
                .unwrap();
        assert_eq!(report.bound, res);
        // per-cutset identities from the achievability proof
        for (cs, k) in opt.cutsets.iter().zip(&opt.weights) {
            let c = split_conductance(cs, &opt.allocation).unwrap();
            assert_eq!(c.recip(), k.clone() * res.clone());
            assert!(validate_cutset(&g, &cs.edges, &[a], &[b]));
        }
        // for each flowing edge, the weights of its containing cutsets sum
        // to the voltage drop
        for (e, (u, v, _)) in g.edges.iter().enumerate() {
            let (lo, hi) = if opt.voltage.values[*u] <= opt.voltage.values[*v] {
                (&opt.voltage.values[*u], &opt.voltage.values[*v])
            } else {
                (&opt.voltage.values[*v], &opt.voltage.values[*u])
            };
            let total: Rat = opt
                .cutsets
                .iter()
                .zip(&opt.weights)
                .filter(|(cs, _)| cs.edges.contains(&e))
                .fold(rat(0), |acc, (_, k)| acc + k.clone());
            assert_eq!(total, hi.clone() - lo.clone());
        }
    }

    #[test]
    fn dropping_cutsets_never_increases_bound() {
        let g = unit_path(6);
        let opt = optimal_allocation_exact(&g, &[0], &[5]).unwrap();
        let full = wnw_bound(&g, &opt.cutsets, &opt.allocation, None, None).unwrap();
        for drop in 0..opt.cutsets.len() {
            let kept: Vec<Cutset> = opt
                .cutsets
                .iter()
                .filter(|c| c.id != drop)
                .cloned()
                .collect();
            let restricted = Allocation {
                entries: opt
                    .allocation
                    .entries
                    .iter()
                    .filter(|((_, cs), _)| *cs != drop)
                    .map(|(k, v)| (*k, v.clone()))
                    .collect(),
            };
            let partial = wnw_bound(&g, &kept, &restricted, None, None).unwrap();
            assert!(partial.bound <= full.bound);
        }
    }

    #[test]
    fn divergence_partial_sums() {
        let sums = divergence_series([rat(1), rat(2), rat(3)]);
        assert_eq!(sums, alloc::vec![rat(1), rat(3), rat(6)]);
    }

    #[test]
    fn float_optimal_matches_resistance() {
        let shape = TreeShape::repeating(&[3, 2, 4], 5).unwrap();
        let net = build_from_criterion(2, &shape, 5, DEFAULT_VERTEX_CAP).unwrap();
        let g = WeightedGraph::from_network(&net);
        let res = crate::electric::effective_resistance_float(&g, &[0], &[g.n - 1])
            .unwrap()
            .value;
        let opt = optimal_allocation_float(&g, &[0], &[g.n - 1]).unwrap();
        let report = wnw_bound(&g, &opt.cutsets, &opt.allocation, Some(&opt.weights), Some(res))
            .unwrap();
        let rel = (report.bound - res) / res;
        assert!(rel.abs() <= 1e-8, "relative gap {rel}");
    }
}
