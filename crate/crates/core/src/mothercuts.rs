//! The cutset family on the projected binary graphs: plain cutsets S_a cut
//! by linear position, enlarged cutsets S̄_a with a closed-form membership
//! rule, β-weight proportional allocation, exact and asymptotic split
//! conductances C_a, and the windowed lower-bound pipeline behind the
//! resistance and recurrence experiments.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::electric::{
    effective_resistance_exact, effective_resistance_float, FloatResistance, Resistance,
    SolveError, WeightedGraph,
};
use crate::nashwilliams::{Allocation, Cutset};
use crate::schreier::{build_projected, BuildError, Network};
use crate::words::{beta_weight, beta_weight_inverse, DigitWord, TreeShape};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MotherError {
    Build(BuildError),
    Solve(SolveError),
    /// theorem_bound window must satisfy 0 < s < t < n.
    WindowOutOfRange { s: u32, t: u32, level: usize },
    /// Cutset operations need a projected (binary-vertex) graph.
    NotProjected,
}

impl fmt::Display for MotherError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotherError::Build(e) => write!(f, "{e}"),
            MotherError::Solve(e) => write!(f, "{e}"),
            MotherError::WindowOutOfRange { s, t, level } => {
                write!(f, "window [2^{s}, 2^{t}) needs 0 < s < t < n = {level}")
            }
            MotherError::NotProjected => write!(f, "network is not a projected binary graph"),
        }
    }
}

impl From<BuildError> for MotherError {
    fn from(e: BuildError) -> Self {
        MotherError::Build(e)
    }
}

impl From<SolveError> for MotherError {
    fn from(e: SolveError) -> Self {
        MotherError::Solve(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutsetKind {
    Plain,
    Enlarged,
}

/// A cutset of the family, indexed by the binary word a / its linear
/// position â. Separates {v : v̂ < â} from {v : v̂ >= â}.
#[derive(Debug, Clone)]
pub struct MotherCutset {
    pub a: DigitWord,
    pub a_hat: u64,
    pub kind: CutsetKind,
    pub edges: Vec<usize>,
}

/// Per-edge data for fast membership tests: the endpoints oriented by
/// linear position, the differing coordinate, and the digit-match mask of
/// the enlarged-membership rule.
#[derive(Debug, Clone, Copy)]
struct EdgeMeta {
    edge_type: i32,
    lo_pos: u64,
    hi_pos: u64,
    /// bits of either endpoint word (they agree off position k; bit k is
    /// taken from the endpoint with the nonzero digit)
    bits: u64,
    /// positions that a must match: strictly above ℓ_{t-1}, excluding k
    mask: u64,
}

/// Membership engine over a projected binary graph: caches edge metadata
/// and the closed-form weight sums.
pub struct CutsetEngine<'a> {
    pub net: &'a Network,
    meta: Vec<EdgeMeta>,
    weight_sums: Vec<Rat>,
}

fn word_bits(w: &DigitWord) -> u64 {
    w.digits()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &d)| acc | ((d as u64) << i))
}

impl<'a> CutsetEngine<'a> {
    pub fn new(net: &'a Network) -> Result<Self, MotherError> {
        if !net.projected || net.level > 62 {
            return Err(MotherError::NotProjected);
        }
        let pos = net.linear_positions().map_err(|_| MotherError::NotProjected)?;
        let n = net.level;
        let full = (1u64 << n) - 1;
        let mut meta = Vec::with_capacity(net.edges.len());
        let mut weight_sums = Vec::with_capacity(net.edges.len());
        for e in &net.edges {
            let t = e.edge_type;
            let k = net.differing_coordinate(e);
            let (lo, hi) = if pos[e.u] < pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            // the endpoint with digit 1 at k; its bits are the common
            // digits with bit k set
            let heavy = if net.word(e.u).digit(k) != 0 { e.u } else { e.v };
            let bits = word_bits(net.word(heavy));
            let mask = if t >= 1 {
                // threshold ℓ_{t-1}, shared by both endpoints
                let thresh = net.word(heavy).ell_position(t - 1).unwrap();
                (u64::MAX << (thresh + 1)) & !(1u64 << k) & full
            } else {
                0
            };
            meta.push(EdgeMeta {
                edge_type: t,
                lo_pos: pos[lo],
                hi_pos: pos[hi],
                bits,
                mask,
            });
            weight_sums.push(weight_sum_closed_form(net, e, k, t));
        }
        Ok(CutsetEngine { net, meta, weight_sums })
    }

    fn member(&self, edge: usize, a_bits: u64, a_hat: u64) -> bool {
        let m = &self.meta[edge];
        if m.edge_type <= 0 {
            m.hi_pos == a_hat
        } else {
            (a_bits ^ m.bits) & m.mask == 0
        }
    }

    /// Edge indices of the enlarged cutset S̄_a.
    pub fn enlarged_edges(&self, a_hat: u64) -> Vec<usize> {
        let a_bits = a_hat ^ (a_hat >> 1);
        (0..self.meta.len())
            .filter(|&e| self.member(e, a_bits, a_hat))
            .collect()
    }

    /// Edge indices of the plain cutset S_a: edges with x̂ < â <= ŷ.
    pub fn plain_edges(&self, a_hat: u64) -> Vec<usize> {
        (0..self.meta.len())
            .filter(|&e| self.meta[e].lo_pos < a_hat && a_hat <= self.meta[e].hi_pos)
            .collect()
    }

    /// β^a for the word at linear position â.
    pub fn beta_of(&self, a_hat: u64) -> Rat {
        let a = DigitWord::from_linear_position(a_hat, self.net.level).unwrap();
        beta_weight(&a, &self.net.shape)
    }

    /// Closed-form Σ_{b : e ∈ S̄_b} β^b of an edge.
    pub fn weight_sum(&self, edge: usize) -> &Rat {
        &self.weight_sums[edge]
    }

    /// Exact split conductance C_a = Σ_{e ∈ S̄_a} R_{e,a}^{-1} with
    /// R_{e,a} = R_e β^a / Σ_{b : e ∈ S̄_b} β^b, the denominator summed
    /// over the full family.
    pub fn conductance(&self, a_hat: u64) -> Rat {
        let beta_a = self.beta_of(a_hat);
        let mut c = Rat::zero();
        for e in self.enlarged_edges(a_hat) {
            c += self.net.edges[e].conductance.clone() * self.weight_sums[e].clone();
        }
        c / beta_a
    }
}

/// The plain cutset S_a: all edges (x,y) with x̂ < â <= ŷ.
pub fn cutset_plain(a_hat: u64, net: &Network) -> Result<MotherCutset, MotherError> {
    let engine = CutsetEngine::new(net)?;
    Ok(MotherCutset {
        a: DigitWord::from_linear_position(a_hat, net.level).unwrap(),
        a_hat,
        kind: CutsetKind::Plain,
        edges: engine.plain_edges(a_hat),
    })
}

/// The enlarged cutset S̄_a, by the closed-form membership rule.
pub fn cutset_enlarged(a_hat: u64, net: &Network) -> Result<MotherCutset, MotherError> {
    let engine = CutsetEngine::new(net)?;
    Ok(MotherCutset {
        a: DigitWord::from_linear_position(a_hat, net.level).unwrap(),
        a_hat,
        kind: CutsetKind::Enlarged,
        edges: engine.enlarged_edges(a_hat),
    })
}

/// The enlarged-membership rule for a single (edge, a) pair: the unique
/// adjacent-position edge for types -1 and 0; for type t >= 1, a matches
/// the endpoint digits everywhere above ℓ_{t-1} except possibly at k.
pub fn enlarged_membership(net: &Network, edge: usize, a: &DigitWord) -> Result<bool, MotherError> {
    let engine = CutsetEngine::new(net)?;
    let a_hat = a.linear_position().map_err(|_| MotherError::NotProjected)?;
    Ok(engine.member(edge, word_bits(a), a_hat))
}

fn weight_sum_closed_form(net: &Network, e: &crate::schreier::Edge, k: usize, t: i32) -> Rat {
    let shape = &net.shape;
    let x = net.word(e.u);
    let y = net.word(e.v);
    if t <= 0 {
        // unique containing cutset: a is the endpoint with the larger
        // linear position, which is the one with the extra digit for
        // type 0 and either for type -1
        let pos_u = x.linear_position().unwrap();
        let pos_v = y.linear_position().unwrap();
        let hi = if pos_u > pos_v { x } else { y };
        return beta_weight(hi, shape);
    }
    let heavy = if x.digit(k) != 0 { x } else { y };
    let thresh = heavy.ell_position(t - 1).unwrap(); // ℓ_{t-1}
    let mut sum = shape.beta(k - 1); // forced one at ℓ_t = k - 1
    sum *= crate::rat(1) + shape.beta(k); // a_k free
    for i in (k + 1)..heavy.len() {
        if heavy.digit(i) != 0 {
            sum *= shape.beta(i);
        }
    }
    for i in 0..=(thresh as usize) {
        sum *= crate::rat(1) + shape.beta(i);
    }
    sum
}

/// Σ_{a : e ∈ S̄_a} β^a by the closed form.
pub fn weight_sum_over_cutsets(net: &Network, edge: usize) -> Result<Rat, MotherError> {
    if !net.projected {
        return Err(MotherError::NotProjected);
    }
    let e = &net.edges[edge];
    let k = net.differing_coordinate(e);
    Ok(weight_sum_closed_form(net, e, k, e.edge_type))
}

/// Σ_{a : e ∈ S̄_a} β^a by enumeration over every level-n word; the
/// independent oracle for the closed form.
pub fn weight_sum_brute(net: &Network, edge: usize) -> Result<Rat, MotherError> {
    let engine = CutsetEngine::new(net)?;
    let n = net.level;
    let mut sum = Rat::zero();
    for a_hat in 0..(1u64 << n) {
        let a_bits = a_hat ^ (a_hat >> 1);
        if engine.member(edge, a_bits, a_hat) {
            sum += engine.beta_of(a_hat);
        }
    }
    Ok(sum)
}

/// Exact C_a, through a fresh engine; use `CutsetEngine` directly for
/// sweeps.
pub fn cutset_conductance(a_hat: u64, net: &Network) -> Result<Rat, MotherError> {
    assert!(a_hat >= 1, "cutsets are indexed by â >= 1");
    Ok(CutsetEngine::new(net)?.conductance(a_hat))
}

/// The asymptotic form of C_a: β^{-a} ∏_{i < log2 â} (1 + β_i), with an
/// extra factor log2 â for degree 2. Used only for ratio tracking against
/// the exact value.
pub fn asymptotic_conductance(a_hat: u64, shape: &TreeShape, d: i32) -> f64 {
    assert!(a_hat >= 2);
    let n = 64 - a_hat.leading_zeros() as usize; // bits needed for â
    let a = DigitWord::from_linear_position(a_hat, n).unwrap();
    let mut value = beta_weight_inverse(&a, shape).to_f64().unwrap();
    let mut i = 0usize;
    while (1u64 << i) < a_hat {
        value *= 1.0 + shape.beta(i).to_f64().unwrap();
        i += 1;
    }
    if d >= 2 {
        value *= libm::log2(a_hat as f64);
    }
    value
}

/// Per-cutset detail row of a theorem-bound run.
#[derive(Debug, Clone)]
pub struct ConductanceRow {
    pub a_hat: u64,
    pub size: usize,
    pub exact: Rat,
    pub asymptotic: f64,
}

#[derive(Debug, Clone)]
pub enum SolverOutcome {
    Exact(Resistance),
    Float(FloatResistance),
}

impl SolverOutcome {
    pub fn to_f64(&self) -> f64 {
        match self {
            SolverOutcome::Exact(r) => r.to_f64(),
            SolverOutcome::Float(r) => r.value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    Exact,
    Float,
    None,
}

/// Result of the windowed lower-bound pipeline: cutsets for â in
/// [2^s, 2^t), β^a-proportional allocation with full-family denominators,
/// the bound Σ C_a^{-1}, and optionally the solver's Res(A,B).
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub degree: i32,
    pub s: u32,
    pub t: u32,
    pub level: usize,
    pub a_vertices: Vec<usize>,
    pub b_vertices: Vec<usize>,
    pub cutsets: Vec<Cutset>,
    pub allocation: Allocation<Rat>,
    pub rows: Vec<ConductanceRow>,
    pub bound: Rat,
    pub solver: Option<SolverOutcome>,
}

impl TheoremReport {
    pub fn gap_ratio(&self) -> Option<f64> {
        let res = self.solver.as_ref()?.to_f64();
        Some(self.bound.to_f64().unwrap() / res)
    }
}

/// Lower bound on Res({v̂ < 2^s}, {v̂ >= 2^t}) in G_{d,m̄,n} from the
/// enlarged cutsets with â in [2^s, 2^t), allocated proportionally to β^a.
pub fn theorem_bound(
    d: i32,
    shape: &TreeShape,
    s: u32,
    t: u32,
    n: usize,
    solver: SolverMode,
    cap: usize,
) -> Result<TheoremReport, MotherError> {
    if s == 0 || s >= t || t as usize >= n {
        return Err(MotherError::WindowOutOfRange { s, t, level: n });
    }
    let net = build_projected(d, shape, n, cap)?;
    let engine = CutsetEngine::new(&net)?;
    let g = WeightedGraph::from_network(&net);
    // vertices of the projected graph are in word-value order; recover
    // positions to slice A and B
    let pos = net.linear_positions().unwrap();
    let a_vertices: Vec<usize> = (0..g.n).filter(|&v| pos[v] < (1u64 << s)).collect();
    let b_vertices: Vec<usize> = (0..g.n).filter(|&v| pos[v] >= (1u64 << t)).collect();

    let mut cutsets = Vec::new();
    let mut allocation = Allocation::empty();
    let mut rows = Vec::new();
    let mut bound = Rat::zero();
    for (id, a_hat) in ((1u64 << s)..(1u64 << t)).enumerate() {
        let edges = engine.enlarged_edges(a_hat);
        let beta_a = engine.beta_of(a_hat);
        let mut c_a = Rat::zero();
        for &e in &edges {
            // R_{e,a} = R_e β^a / Σ_b β^b, with the full-family denominator
            let r_e = {
                let c = &net.edges[e].conductance;
                Rat::new(c.denom().clone(), c.numer().clone())
            };
            let r_ea = r_e * beta_a.clone() / engine.weight_sum(e).clone();
            c_a += net.edges[e].conductance.clone() * engine.weight_sum(e).clone();
            allocation.entries.insert((e, id), r_ea);
        }
        c_a /= beta_a;
        bound += Rat::new(c_a.denom().clone(), c_a.numer().clone());
        rows.push(ConductanceRow {
            a_hat,
            size: edges.len(),
            exact: c_a,
            asymptotic: asymptotic_conductance(a_hat, shape, d),
        });
        cutsets.push(Cutset {
            id,
            edges: edges.into_iter().collect::<BTreeSet<_>>(),
            label: Some(a_hat),
        });
    }
    let solver = match solver {
        SolverMode::Exact => Some(SolverOutcome::Exact(effective_resistance_exact(
            &g,
            &a_vertices,
            &b_vertices,
        )?)),
        SolverMode::Float => Some(SolverOutcome::Float(effective_resistance_float(
            &g,
            &a_vertices,
            &b_vertices,
        )?)),
        SolverMode::None => None,
    };
    Ok(TheoremReport {
        degree: d,
        s,
        t,
        level: n,
        a_vertices,
        b_vertices,
        cutsets,
        allocation,
        rows,
        bound,
        solver,
    })
}

/// One row of the recurrence experiment: the cumulative lower bound on
/// Res(root, {v̂ >= 2^t}) and its increment over the previous scale.
#[derive(Debug, Clone)]
pub struct RecurrenceRow {
    pub t: u32,
    pub cumulative: Rat,
    pub increment: Rat,
}

/// Recurrence evidence: partial sums Σ_{â < 2^t} C_â^{-1} for t up to
/// `max_t`, computed on a single truncation at level max_t + 2 (conductances
/// of cutsets with â < 2^t are already stable there). The shape must cover
/// at least max_t + 2 levels.
pub fn recurrence_experiment(
    d: i32,
    shape: &TreeShape,
    max_t: u32,
    cap: usize,
) -> Result<Vec<RecurrenceRow>, MotherError> {
    assert!((0..=2).contains(&d));
    let n = max_t as usize + 2;
    assert!(shape.len() >= n, "shape must cover {n} levels");
    let net = build_projected(d, shape, n, cap)?;
    let engine = CutsetEngine::new(&net)?;
    let mut rows = Vec::new();
    let mut cumulative = Rat::zero();
    for t in 1..=max_t {
        let mut increment = Rat::zero();
        for a_hat in (1u64 << (t - 1))..(1u64 << t) {
            let c = engine.conductance(a_hat);
            increment += Rat::new(c.denom().clone(), c.numer().clone());
        }
        cumulative += increment.clone();
        rows.push(RecurrenceRow { t, cumulative: cumulative.clone(), increment });
    }
    Ok(rows)
}

/// Exhaustive check of the membership lemma on a projected graph: for
/// every edge and every â, definitional S_a membership against the
/// closed-form criterion. Equivalence for types -1, 0 and 1 (with a ≠ x),
/// necessity only for type 2.
#[derive(Debug, Clone, Default)]
pub struct LemmaReport {
    pub edges_checked: usize,
    pub pairs_checked: u64,
    pub counterexamples: Vec<LemmaCounterexample>,
}

#[derive(Debug, Clone)]
pub struct LemmaCounterexample {
    pub edge: usize,
    pub a_hat: u64,
    pub edge_type: i32,
    pub definitional: bool,
    pub criterion: bool,
}

pub fn lemma_membership_check(net: &Network) -> Result<LemmaReport, MotherError> {
    let engine = CutsetEngine::new(net)?;
    let n = net.level;
    let mut report = LemmaReport::default();
    report.edges_checked = net.edges.len();
    for e in 0..net.edges.len() {
        let m = &engine.meta[e];
        for a_hat in 0..(1u64 << n) {
            let a_bits = a_hat ^ (a_hat >> 1);
            let definitional = m.lo_pos < a_hat && a_hat <= m.hi_pos;
            let criterion = engine.member(e, a_bits, a_hat);
            let ok = match m.edge_type {
                -1 | 0 => definitional == criterion,
                // type 1: equivalence except at a = x, where the criterion
                // holds but â = x̂ fails the strict inequality
                1 if a_hat == m.lo_pos => criterion && !definitional,
                1 => definitional == criterion,
                _ => !definitional || criterion, // type 2: necessity only
            };
            report.pairs_checked += 1;
            if !ok {
                report.counterexamples.push(LemmaCounterexample {
                    edge: e,
                    a_hat,
                    edge_type: m.edge_type,
                    definitional,
                    criterion,
                });
            }
        }
    }
    Ok(report)
}
