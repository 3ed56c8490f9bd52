//! The non-coding side: fractional multi-Steiner-tree packing, its dual,
//! generalized sparsity, and cut-tree packings.
//!
//! A session is a terminal set `S_i` (source plus sinks) with demand `d_i`.
//! The packing number `tau` is the largest rate such that every session can
//! route `tau * d_i` units over trees spanning `S_i` within edge capacities.

use std::collections::HashMap;

use log::warn;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::GapInstance;
use crate::lp::{self, LpError};
use crate::rational::{self, Rational};
use crate::steiner::{self, SteinerError};

/// Default cap on enumerated trees (LP columns) across all sessions.
pub const DEFAULT_TREE_LIMIT: usize = 5_000;
/// Largest vertex count for exhaustive cut enumeration.
pub const MAX_SPARSITY_VERTICES: usize = 22;
/// Default accuracy of the approximate solver.
pub const DEFAULT_EPSILON: f64 = 0.05;
const MAX_APPROX_PHASES: usize = 20_000;
/// Weights and edge lengths are rounded to multiples of `2^-ROUND_BITS` before certification.
const ROUND_BITS: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("session {0} has terminals in different components")]
    Disconnected(usize),
    #[error("{0}")]
    TooLarge(String),
    #[error("no cut separates any session")]
    NoCrossingCut,
    #[error("sum of d_i z_i is zero")]
    ZeroDenominator,
    #[error("embedding path for tree {tree} edge ({x}, {y}) is not a path in G: {reason}")]
    PathNotInGraph { tree: usize, x: u32, y: u32, reason: String },
    #[error("invalid cut-tree packing: {0}")]
    BadPacking(String),
    #[error("invalid packing instance: {0}")]
    Malformed(String),
}

/// A session's terminals and demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Demand {
    pub terminals: Vec<u32>,
    #[serde(default = "unit_demand")]
    pub demand: u64,
}

fn unit_demand() -> u64 {
    1
}

/// Undirected capacitated graph with multicast demands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingInstance {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub capacity: Vec<u64>,
    pub sessions: Vec<Demand>,
}

impl PackingInstance {
    pub fn new(
        n: usize,
        edges: Vec<(u32, u32)>,
        capacity: Vec<u64>,
        sessions: Vec<Demand>,
    ) -> Result<Self, PackingError> {
        if capacity.len() != edges.len() {
            return Err(PackingError::Malformed("one capacity per edge".into()));
        }
        if edges.iter().any(|&(u, v)| u as usize >= n || v as usize >= n || u == v) {
            return Err(PackingError::Malformed("edge endpoint out of range or loop".into()));
        }
        if capacity.contains(&0) {
            return Err(PackingError::Malformed("capacities must be positive".into()));
        }
        let mut sessions = sessions;
        for s in &mut sessions {
            if s.demand == 0 {
                return Err(PackingError::Malformed("demands must be positive".into()));
            }
            if s.terminals.iter().any(|&t| t as usize >= n) {
                return Err(PackingError::Malformed("terminal out of range".into()));
            }
            s.terminals.sort_unstable();
            s.terminals.dedup();
        }
        Ok(PackingInstance { n, edges, capacity, sessions })
    }

    /// Reads `{"n", "edges", "capacity"?, "sessions": [{"terminals", "demand"?}]}`;
    /// missing capacities and demands default to 1.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            edges: Vec<(u32, u32)>,
            capacity: Option<Vec<u64>>,
            sessions: Vec<Demand>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let capacity = raw.capacity.unwrap_or_else(|| vec![1; raw.edges.len()]);
        PackingInstance::new(raw.n, raw.edges, capacity, raw.sessions)
            .map_err(<serde_json::Error as serde::de::Error>::custom)
    }

    /// Unit capacities and demands; `S_i` is the source plus the sinks.
    pub fn from_gap(inst: &GapInstance) -> Self {
        let sessions = inst
            .sessions
            .iter()
            .map(|s| Demand {
                terminals: std::iter::once(s.source).chain(s.sinks.iter().copied()).collect(),
                demand: 1,
            })
            .collect();
        PackingInstance::new(inst.vertex_count(), inst.edges().to_vec(), vec![1; inst.edge_count()], sessions)
            .expect("gap instances are well formed")
    }

    fn nontrivial(&self) -> Vec<usize> {
        (0..self.sessions.len()).filter(|&i| self.sessions[i].terminals.len() > 1).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact { tree_limit: usize },
    Approx { epsilon: f64 },
}

impl Mode {
    pub fn exact() -> Self {
        Mode::Exact { tree_limit: DEFAULT_TREE_LIMIT }
    }

    pub fn approx() -> Self {
        Mode::Approx { epsilon: DEFAULT_EPSILON }
    }
}

/// The packing number: exact, bracketed, or unbounded when no session needs a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tau {
    Exact {
        #[serde(with = "crate::rational")]
        value: Rational,
    },
    Interval {
        #[serde(with = "crate::rational")]
        lo: Rational,
        #[serde(with = "crate::rational")]
        hi: Rational,
    },
    Unbounded,
}

impl Tau {
    pub fn lower(&self) -> Option<&Rational> {
        match self {
            Tau::Exact { value } => Some(value),
            Tau::Interval { lo, .. } => Some(lo),
            Tau::Unbounded => None,
        }
    }

    pub fn upper(&self) -> Option<&Rational> {
        match self {
            Tau::Exact { value } => Some(value),
            Tau::Interval { hi, .. } => Some(hi),
            Tau::Unbounded => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeWeight {
    pub session: usize,
    pub edges: Vec<usize>,
    #[serde(with = "crate::rational")]
    pub weight: Rational,
}

/// Dual prices `y` per edge and `z` per session, normalized so `sum d_i z_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSolution {
    #[serde(with = "crate::rational::vec")]
    pub y: Vec<Rational>,
    #[serde(with = "crate::rational::vec")]
    pub z: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactSimplex,
    MultiplicativeWeights,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingResult {
    pub tau: Tau,
    pub weights: Vec<TreeWeight>,
    pub dual: Option<DualSolution>,
    pub method: Method,
}

/// Max edge congestion `phi` after scaling each session's trees to carry
/// exactly `d_i`; `None` if a nontrivial session carries nothing.
pub fn congestion(inst: &PackingInstance, weights: &[TreeWeight]) -> Option<Rational> {
    let mut per_session = vec![Rational::zero(); inst.sessions.len()];
    for w in weights {
        per_session[w.session] += &w.weight;
    }
    if inst.nontrivial().iter().any(|&i| per_session[i].is_zero()) {
        return None;
    }
    let mut load = vec![Rational::zero(); inst.edges.len()];
    for w in weights {
        let share = &w.weight * rational::from_u64(inst.sessions[w.session].demand) / &per_session[w.session];
        for &e in &w.edges {
            load[e] += &share;
        }
    }
    Some(load.iter().zip(&inst.capacity).map(|(l, &c)| l / rational::from_u64(c)).max().unwrap_or_else(Rational::zero))
}

pub fn fractional_packing(inst: &PackingInstance, mode: Mode) -> Result<PackingResult, PackingError> {
    let active = inst.nontrivial();
    if active.is_empty() {
        return Ok(PackingResult { tau: Tau::Unbounded, weights: Vec::new(), dual: None, method: Method::Trivial });
    }
    for &i in &active {
        if !connected(inst, &inst.sessions[i].terminals) {
            return Err(PackingError::Disconnected(i));
        }
    }
    match mode {
        Mode::Exact { tree_limit } => exact_packing(inst, &active, tree_limit),
        Mode::Approx { epsilon } => approx_packing(inst, &active, epsilon),
    }
}

fn connected(inst: &PackingInstance, terminals: &[u32]) -> bool {
    let g = crate::graph::Csr::new(inst.n, &inst.edges, |_| true);
    let mut bfs = crate::graph::Bfs::new(inst.n);
    bfs.reach(&g, &terminals[..1]);
    terminals.iter().all(|&t| bfs.reached(t))
}

fn exact_packing(inst: &PackingInstance, active: &[usize], tree_limit: usize) -> Result<PackingResult, PackingError> {
    let mut columns: Vec<(usize, Vec<usize>)> = Vec::new();
    for &i in active {
        let remaining = tree_limit.saturating_sub(columns.len());
        let trees = steiner::enumerate_steiner_trees(inst.n, &inst.edges, &inst.sessions[i].terminals, remaining)
            .map_err(|e| match e {
                SteinerError::TooManyTrees(_) | SteinerError::SearchBudget(_) => {
                    PackingError::TooLarge(format!("more than {tree_limit} Steiner trees"))
                }
                other => other.into(),
            })?;
        columns.extend(trees.into_iter().map(|t| (i, t)));
    }
    // Variables: tau, then one weight per tree. Rows: sessions, then edges.
    let nv = 1 + columns.len();
    let rows = active.len() + inst.edges.len();
    let mut a = vec![vec![Rational::zero(); nv]; rows];
    let row_of: HashMap<usize, usize> = active.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    for (r, &i) in active.iter().enumerate() {
        a[r][0] = rational::from_u64(inst.sessions[i].demand);
    }
    for (col, (i, tree)) in columns.iter().enumerate() {
        a[row_of[i]][col + 1] = -Rational::one();
        for &e in tree {
            a[active.len() + e][col + 1] = Rational::one();
        }
    }
    let mut b = vec![Rational::zero(); rows];
    for (e, &c) in inst.capacity.iter().enumerate() {
        b[active.len() + e] = rational::from_u64(c);
    }
    let mut c = vec![Rational::zero(); nv];
    c[0] = Rational::one();
    let sol = lp::maximize(&c, &a, &b)?;

    let weights = columns
        .into_iter()
        .zip(sol.x.iter().skip(1))
        .filter(|(_, x)| x.is_positive())
        .map(|((session, edges), x)| TreeWeight { session, edges, weight: x.clone() })
        .collect();
    let mut z = vec![Rational::zero(); inst.sessions.len()];
    for (r, &i) in active.iter().enumerate() {
        z[i] = sol.duals[r].clone();
    }
    let y = sol.duals[active.len()..].to_vec();
    Ok(PackingResult {
        tau: Tau::Exact { value: sol.value },
        weights,
        dual: Some(DualSolution { y, z }),
        method: Method::ExactSimplex,
    })
}

fn to_dyadic(x: f64) -> Rational {
    let scaled = (x * (1u64 << ROUND_BITS) as f64).round();
    Rational::new(BigInt::from(scaled as u128), BigInt::from(1u64 << ROUND_BITS))
}

/// Upper bound `sum c_e y_e / sum d_i minST_i(y)` from edge lengths, exactly,
/// after rounding the lengths to integers.
fn dual_bound(inst: &PackingInstance, active: &[usize], lengths: &[f64]) -> Result<Option<Rational>, PackingError> {
    let top = lengths.iter().copied().fold(0.0f64, f64::max);
    if top <= 0.0 {
        return Ok(None);
    }
    let y: Vec<u128> = lengths.iter().map(|&l| (l / top * (1u64 << ROUND_BITS) as f64).round() as u128).collect();
    let num: u128 = y.iter().zip(&inst.capacity).map(|(&y, &c)| y * c as u128).sum();
    let mut den: u128 = 0;
    for &i in active {
        let s = &inst.sessions[i];
        let (w, _) =
            steiner::min_steiner_tree(inst.n, &inst.edges, &y, &s.terminals)?.ok_or(PackingError::Disconnected(i))?;
        den += w * s.demand as u128;
    }
    Ok((den > 0).then(|| Rational::new(BigInt::from(num), BigInt::from(den))))
}

/// Concurrent-flow multiplicative weights with a Dreyfus-Wagner oracle. The
/// reported interval is certified exactly: `lo` from the congestion of the
/// rounded packing, `hi` from a rounded dual.
fn approx_packing(inst: &PackingInstance, active: &[usize], epsilon: f64) -> Result<PackingResult, PackingError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(PackingError::Malformed(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let m = inst.edges.len() as f64;
    let delta = (1.0 + epsilon) / ((1.0 + epsilon) * m).powf(1.0 / epsilon);
    let cap: Vec<f64> = inst.capacity.iter().map(|&c| c as f64).collect();
    let mut length: Vec<f64> = cap.iter().map(|&c| delta / c).collect();
    let mut flow: HashMap<(usize, Vec<usize>), f64> = HashMap::new();

    let mut best_lo: Option<(Rational, Vec<TreeWeight>)> = None;
    let mut best_hi: Option<Rational> = None;
    let potential = |length: &[f64]| length.iter().zip(&cap).map(|(l, c)| l * c).sum::<f64>();

    for phase in 0..MAX_APPROX_PHASES {
        for &i in active {
            let s = &inst.sessions[i];
            let mut remaining = s.demand as f64;
            while remaining > 0.0 {
                let (_, tree) = steiner::min_steiner_tree(inst.n, &inst.edges, &length, &s.terminals)?
                    .ok_or(PackingError::Disconnected(i))?;
                let bottleneck = tree.iter().map(|&e| cap[e]).fold(f64::INFINITY, f64::min);
                let amount = remaining.min(bottleneck);
                for &e in &tree {
                    length[e] *= 1.0 + epsilon * amount / cap[e];
                }
                *flow.entry((i, tree)).or_insert(0.0) += amount;
                remaining -= amount;
            }
        }
        if let Some(hi) = dual_bound(inst, active, &length)? {
            if best_hi.as_ref().is_none_or(|b| hi < *b) {
                best_hi = Some(hi);
            }
        }
        let mut weights: Vec<TreeWeight> = flow
            .iter()
            .map(|((session, edges), &x)| TreeWeight { session: *session, edges: edges.clone(), weight: to_dyadic(x) })
            .filter(|w| w.weight.is_positive())
            .collect();
        weights.sort_by(|a, b| (a.session, &a.edges).cmp(&(b.session, &b.edges)));
        if let Some(phi) = congestion(inst, &weights) {
            let lo = phi.recip();
            if best_lo.as_ref().is_none_or(|(b, _)| lo > *b) {
                best_lo = Some((lo, weights));
            }
        }
        if let (Some((lo, _)), Some(hi)) = (&best_lo, &best_hi) {
            let target = hi * to_dyadic(1.0 - epsilon);
            if *lo >= target {
                break;
            }
        }
        if potential(&length) >= 1.0 && phase > 0 {
            warn!("multiplicative weights stopped before reaching the requested accuracy");
            break;
        }
    }
    let (lo, weights) = best_lo.ok_or_else(|| PackingError::TooLarge("solver produced no packing".into()))?;
    let hi = best_hi.ok_or_else(|| PackingError::TooLarge("solver produced no dual bound".into()))?;
    // Scale the packing to carry exactly lo * d_i per session.
    let mut totals = vec![Rational::zero(); inst.sessions.len()];
    for w in &weights {
        totals[w.session] += &w.weight;
    }
    let weights = weights
        .into_iter()
        .map(|w| {
            let scale = &lo * rational::from_u64(inst.sessions[w.session].demand) / &totals[w.session];
            TreeWeight { weight: w.weight * scale, ..w }
        })
        .collect();
    Ok(PackingResult { tau: Tau::Interval { lo, hi }, weights, dual: None, method: Method::MultiplicativeWeights })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualViolation {
    pub session: usize,
    pub tree: Vec<usize>,
    #[serde(with = "crate::rational")]
    pub weight: Rational,
    #[serde(with = "crate::rational")]
    pub required: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualReport {
    #[serde(with = "crate::rational")]
    pub objective: Rational,
    pub feasible: bool,
    pub violations: Vec<DualViolation>,
}

/// `sum c_e y_e / sum d_i z_i`, with every dual constraint checked through an
/// exact minimum Steiner tree per session.
pub fn dual_value(inst: &PackingInstance, y: &[Rational], z: &[Rational]) -> Result<DualReport, PackingError> {
    if y.len() != inst.edges.len() || z.len() != inst.sessions.len() {
        return Err(PackingError::Malformed("dual vector lengths do not match the instance".into()));
    }
    if y.iter().chain(z).any(|v| v.is_negative()) {
        return Err(PackingError::Malformed("dual values must be nonnegative".into()));
    }
    let num: Rational = y.iter().zip(&inst.capacity).map(|(y, &c)| y * rational::from_u64(c)).sum();
    let den: Rational = z.iter().zip(&inst.sessions).map(|(z, s)| z * rational::from_u64(s.demand)).sum();
    if den.is_zero() {
        return Err(PackingError::ZeroDenominator);
    }
    let mut violations = Vec::new();
    for (i, s) in inst.sessions.iter().enumerate() {
        if z[i].is_zero() {
            continue;
        }
        match steiner::min_steiner_tree(inst.n, &inst.edges, y, &s.terminals)? {
            Some((weight, tree)) if weight < z[i] => {
                violations.push(DualViolation { session: i, tree, weight, required: z[i].clone() })
            }
            Some(_) => {}
            // No tree spans the session, so its constraint is vacuous.
            None => {}
        }
    }
    Ok(DualReport { objective: num / den, feasible: violations.is_empty(), violations })
}

/// Dual constraint check by enumerating every minimal tree (cross-check for [`dual_value`]).
pub fn dual_feasible_by_enumeration(
    inst: &PackingInstance,
    y: &[Rational],
    z: &[Rational],
    limit: usize,
) -> Result<bool, PackingError> {
    for (i, s) in inst.sessions.iter().enumerate() {
        for tree in steiner::enumerate_steiner_trees(inst.n, &inst.edges, &s.terminals, limit)? {
            let w: Rational = tree.iter().map(|&e| &y[e]).sum();
            if w < z[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityResult {
    #[serde(with = "crate::rational")]
    pub psi: Rational,
    pub witness: Vec<u32>,
    pub cut_capacity: u64,
    pub crossing_demand: u64,
}

/// `Psi = min_U C(U, U') / D(U, U')` over cuts separating at least one
/// session, by enumerating every `U` containing vertex 0.
pub fn generalized_sparsity(inst: &PackingInstance) -> Result<SparsityResult, PackingError> {
    let n = inst.n;
    if n > MAX_SPARSITY_VERTICES {
        return Err(PackingError::TooLarge(format!(
            "{n} vertices exceed the cut enumeration limit of {MAX_SPARSITY_VERTICES}"
        )));
    }
    if n < 2 {
        return Err(PackingError::NoCrossingCut);
    }
    let edges: Vec<(u32, u32, u64)> =
        inst.edges.iter().zip(&inst.capacity).map(|(&(u, v), &c)| (1 << u, 1 << v, c)).collect();
    let sessions: Vec<(u32, u64)> = inst
        .sessions
        .iter()
        .filter(|s| s.terminals.len() > 1)
        .map(|s| (s.terminals.iter().fold(0u32, |m, &t| m | 1 << t), s.demand))
        .collect();
    let free = n - 1;
    let chunk_bits = free.min(10);
    let best = (0u32..1 << chunk_bits)
        .into_par_iter()
        .filter_map(|high| {
            let mut best: Option<(u64, u64, u32)> = None;
            for low in 0u32..1 << (free - chunk_bits) {
                let u = 1 | (low << 1) | (high << (1 + free - chunk_bits));
                let d: u64 =
                    sessions.iter().filter(|&&(mask, _)| u & mask != 0 && u & mask != mask).map(|&(_, d)| d).sum();
                if d == 0 {
                    continue;
                }
                let c: u64 = edges.iter().filter(|&&(a, b, _)| (u & a == 0) != (u & b == 0)).map(|&(_, _, c)| c).sum();
                if best.is_none_or(|b| better((c, d, u), b)) {
                    best = Some((c, d, u));
                }
            }
            best
        })
        .reduce_with(|a, b| if better(b, a) { b } else { a });
    let (c, d, u) = best.ok_or(PackingError::NoCrossingCut)?;
    Ok(SparsityResult {
        psi: Rational::new(BigInt::from(c), BigInt::from(d)),
        witness: (0..n as u32).filter(|&v| u >> v & 1 == 1).collect(),
        cut_capacity: c,
        crossing_demand: d,
    })
}

/// Smaller ratio `c/d` wins; ties go to the smaller vertex mask.
fn better(a: (u64, u64, u32), b: (u64, u64, u32)) -> bool {
    let lhs = a.0 as u128 * b.1 as u128;
    let rhs = b.0 as u128 * a.1 as u128;
    lhs < rhs || (lhs == rhs && a.2 < b.2)
}

/// `y_e = 1` on edges crossing the witness cut, `z_j = 1` on crossing sessions.
pub fn sparsity_dual(inst: &PackingInstance, s: &SparsityResult) -> (Vec<Rational>, Vec<Rational>) {
    let mut inside = vec![false; inst.n];
    for &v in &s.witness {
        inside[v as usize] = true;
    }
    let y = inst
        .edges
        .iter()
        .map(|&(u, v)| if inside[u as usize] != inside[v as usize] { Rational::one() } else { Rational::zero() })
        .collect();
    let z = inst
        .sessions
        .iter()
        .map(|sess| {
            let k = sess.terminals.iter().filter(|&&t| inside[t as usize]).count();
            if k > 0 && k < sess.terminals.len() {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    (y, z)
}

/// A tree on `V` whose edges are routed along paths of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddedTree {
    pub edges: Vec<(u32, u32)>,
    /// For each tree edge `(x, y)`, the edge indices of a path from `x` to `y` in `G`.
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutTreePacking {
    pub trees: Vec<EmbeddedTree>,
    #[serde(with = "crate::rational::vec")]
    pub lambda: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutTreeReport {
    #[serde(with = "crate::rational")]
    pub alpha: Rational,
    /// `L(u, v)` per edge of `G`.
    #[serde(with = "crate::rational::vec")]
    pub load: Vec<Rational>,
}

/// Smallest `alpha` with `c_uv >= L(u, v) / alpha` for every edge, where
/// `L(u, v)` sums `lambda_i C_i(x, y)` over tree edges routed through `(u, v)`
/// and `C_i(x, y)` is the capacity of the cut left by deleting `(x, y)` from `T_i`.
pub fn validate_cut_tree_packing(inst: &PackingInstance, p: &CutTreePacking) -> Result<CutTreeReport, PackingError> {
    let n = inst.n;
    if p.trees.len() != p.lambda.len() || p.trees.is_empty() {
        return Err(PackingError::BadPacking("need one weight per tree".into()));
    }
    if p.lambda.iter().any(|l| l.is_negative()) || p.lambda.iter().sum::<Rational>() != Rational::one() {
        return Err(PackingError::BadPacking("weights must be a distribution".into()));
    }
    let mut load = vec![Rational::zero(); inst.edges.len()];
    for (ti, (tree, lambda)) in p.trees.iter().zip(&p.lambda).enumerate() {
        if tree.edges.len() + 1 != n || tree.paths.len() != tree.edges.len() {
            return Err(PackingError::BadPacking(format!("tree {ti} must have n - 1 edges, each with a path")));
        }
        let adj = crate::graph::Csr::new(n, &tree.edges, |_| true);
        let mut bfs = crate::graph::Bfs::new(n);
        bfs.reach(&adj, &[0]);
        if (0..n as u32).any(|v| !bfs.reached(v)) {
            return Err(PackingError::BadPacking(format!("tree {ti} does not span V")));
        }
        for (k, (&(x, y), path)) in tree.edges.iter().zip(&tree.paths).enumerate() {
            check_path(inst, ti, x, y, path)?;
            // Side of x after deleting tree edge k.
            let side = crate::graph::Csr::new(n, &tree.edges, |e| e != k);
            bfs.reach(&side, &[x]);
            let cut: u64 = inst
                .edges
                .iter()
                .zip(&inst.capacity)
                .filter(|(&(u, v), _)| bfs.reached(u) != bfs.reached(v))
                .map(|(_, &c)| c)
                .sum();
            let mut used: Vec<usize> = path.clone();
            used.sort_unstable();
            used.dedup();
            for e in used {
                load[e] += lambda * rational::from_u64(cut);
            }
        }
    }
    let alpha =
        load.iter().zip(&inst.capacity).map(|(l, &c)| l / rational::from_u64(c)).max().unwrap_or_else(Rational::zero);
    Ok(CutTreeReport { alpha, load })
}

fn check_path(inst: &PackingInstance, tree: usize, x: u32, y: u32, path: &[usize]) -> Result<(), PackingError> {
    let err = |reason: String| PackingError::PathNotInGraph { tree, x, y, reason };
    let mut at = x;
    for &e in path {
        let &(a, b) = inst.edges.get(e).ok_or_else(|| err(format!("edge {e} does not exist")))?;
        at = if a == at {
            b
        } else if b == at {
            a
        } else {
            return Err(err(format!("edge {e} does not touch vertex {at}")));
        };
    }
    if at != y {
        return Err(err(format!("path ends at {at}")));
    }
    Ok(())
}

/// Floating-point view of a rational, for reporting.
pub fn approx(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn unit(n: usize, edges: &[(u32, u32)], sessions: &[&[u32]]) -> PackingInstance {
        PackingInstance::new(
            n,
            edges.to_vec(),
            vec![1; edges.len()],
            sessions.iter().map(|t| Demand { terminals: t.to_vec(), demand: 1 }).collect(),
        )
        .unwrap()
    }

    fn triangle() -> PackingInstance {
        unit(3, &[(0, 1), (1, 2), (0, 2)], &[&[0, 1, 2]])
    }

    #[test]
    fn exact_examples() {
        let r = fractional_packing(&triangle(), Mode::exact()).unwrap();
        assert_eq!(r.tau, Tau::Exact { value: ratio(3, 2) });
        assert_eq!(r.weights.len(), 3);
        assert!(r.weights.iter().all(|w| w.weight == ratio(1, 2)));
        let dual = r.dual.unwrap();
        let inst = triangle();
        let rep = dual_value(&inst, &dual.y, &dual.z).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.objective, ratio(3, 2));

        let path = unit(3, &[(0, 1), (1, 2)], &[&[0, 2]]);
        assert_eq!(fractional_packing(&path, Mode::exact()).unwrap().tau, Tau::Exact { value: ratio(1, 1) });

        let two_paths = unit(4, &[(0, 1), (1, 3), (0, 2), (2, 3)], &[&[0, 3]]);
        assert_eq!(fractional_packing(&two_paths, Mode::exact()).unwrap().tau, Tau::Exact { value: ratio(2, 1) });
    }

    #[test]
    fn trivial_and_disconnected() {
        let inst = unit(3, &[(0, 1)], &[&[2]]);
        assert_eq!(fractional_packing(&inst, Mode::exact()).unwrap().tau, Tau::Unbounded);
        let inst = unit(3, &[(0, 1)], &[&[0, 2]]);
        assert_eq!(fractional_packing(&inst, Mode::exact()), Err(PackingError::Disconnected(0)));
    }

    #[test]
    fn tree_limit_is_a_resource_error() {
        let r = fractional_packing(&triangle(), Mode::Exact { tree_limit: 2 });
        assert!(matches!(r, Err(PackingError::TooLarge(_))));
    }

    #[test]
    fn congestion_identity() {
        let inst = triangle();
        let r = fractional_packing(&inst, Mode::exact()).unwrap();
        assert_eq!(congestion(&inst, &r.weights).unwrap().recip(), ratio(3, 2));
    }

    #[test]
    fn approx_interval_brackets_exact() {
        let inst = unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)], &[&[0, 2, 3], &[1, 4]]);
        let exact = fractional_packing(&inst, Mode::exact()).unwrap();
        let Tau::Exact { value } = exact.tau else { panic!() };
        let r = fractional_packing(&inst, Mode::approx()).unwrap();
        let Tau::Interval { lo, hi } = &r.tau else { panic!() };
        assert!(*lo <= value && value <= *hi, "{lo} {value} {hi}");
        assert!(approx(lo) >= (1.0 - 0.05) * approx(hi) - 1e-9, "{lo} {hi}");
        assert_eq!(congestion(&inst, &r.weights).unwrap().recip(), *lo);
    }

    #[test]
    fn dual_examples() {
        let inst = triangle();
        let half = vec![ratio(1, 2); 3];
        let rep = dual_value(&inst, &half, &[ratio(1, 1)]).unwrap();
        assert_eq!(rep.objective, ratio(3, 2));
        assert!(rep.feasible);
        assert!(dual_feasible_by_enumeration(&inst, &half, &[ratio(1, 1)], 100).unwrap());
        let zero = vec![ratio(0, 1); 3];
        let rep = dual_value(&inst, &zero, &[ratio(1, 1)]).unwrap();
        assert!(!rep.feasible);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(dual_value(&inst, &half, &[ratio(0, 1)]), Err(PackingError::ZeroDenominator));
    }

    #[test]
    fn sparsity_examples() {
        let path = unit(3, &[(0, 1), (1, 2)], &[&[0, 2]]);
        let s = generalized_sparsity(&path).unwrap();
        assert_eq!(s.psi, ratio(1, 1));
        assert_eq!(s.witness, vec![0]);
        let s = generalized_sparsity(&triangle()).unwrap();
        assert_eq!(s.psi, ratio(2, 1));
        let inst = unit(3, &[(0, 1), (1, 2)], &[&[1]]);
        assert_eq!(generalized_sparsity(&inst), Err(PackingError::NoCrossingCut));

        let (y, z) = sparsity_dual(&triangle(), &generalized_sparsity(&triangle()).unwrap());
        let rep = dual_value(&triangle(), &y, &z).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.objective, ratio(2, 1));
    }

    #[test]
    fn sparsity_matches_naive_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let n = rng.gen_range(2..9);
            let edges: Vec<(u32, u32)> = (0..rng.gen_range(1..12))
                .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
                .filter(|(a, b)| a != b)
                .collect();
            if edges.is_empty() {
                continue;
            }
            let cap: Vec<u64> = edges.iter().map(|_| rng.gen_range(1..4)).collect();
            let sessions: Vec<Demand> = (0..rng.gen_range(1..4))
                .map(|_| Demand {
                    terminals: vec![rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)],
                    demand: rng.gen_range(1..3),
                })
                .collect();
            let inst = PackingInstance::new(n, edges.clone(), cap.clone(), sessions).unwrap();
            let mut naive: Option<Rational> = None;
            for u in 1u32..(1 << n) - 1 {
                let c: u64 =
                    edges.iter().zip(&cap).filter(|(&(a, b), _)| (u >> a & 1) != (u >> b & 1)).map(|(_, &c)| c).sum();
                let d: u64 = inst
                    .sessions
                    .iter()
                    .filter(|s| {
                        let k = s.terminals.iter().filter(|&&t| u >> t & 1 == 1).count();
                        k > 0 && k < s.terminals.len()
                    })
                    .map(|s| s.demand)
                    .sum();
                if d > 0 {
                    let r = ratio(c as i64, d as i64);
                    naive = Some(naive.map_or(r.clone(), |b: Rational| b.min(r)));
                }
            }
            match generalized_sparsity(&inst) {
                Ok(s) => assert_eq!(Some(s.psi), naive),
                Err(PackingError::NoCrossingCut) => assert!(naive.is_none()),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn cut_tree_examples() {
        let path = unit(3, &[(0, 1), (1, 2)], &[&[0, 2]]);
        let identity = CutTreePacking {
            trees: vec![EmbeddedTree { edges: vec![(0, 1), (1, 2)], paths: vec![vec![0], vec![1]] }],
            lambda: vec![ratio(1, 1)],
        };
        assert_eq!(validate_cut_tree_packing(&path, &identity).unwrap().alpha, ratio(1, 1));

        let tri = triangle();
        let one = CutTreePacking {
            trees: vec![EmbeddedTree { edges: vec![(0, 1), (1, 2)], paths: vec![vec![0], vec![1]] }],
            lambda: vec![ratio(1, 1)],
        };
        assert_eq!(validate_cut_tree_packing(&tri, &one).unwrap().alpha, ratio(2, 1));

        let leaving = CutTreePacking {
            trees: vec![EmbeddedTree { edges: vec![(0, 1), (1, 2)], paths: vec![vec![0], vec![7]] }],
            lambda: vec![ratio(1, 1)],
        };
        assert!(matches!(validate_cut_tree_packing(&tri, &leaving), Err(PackingError::PathNotInGraph { .. })));
        let wrong_end = CutTreePacking {
            trees: vec![EmbeddedTree { edges: vec![(0, 1), (1, 2)], paths: vec![vec![2], vec![1]] }],
            lambda: vec![ratio(1, 1)],
        };
        assert!(matches!(validate_cut_tree_packing(&tri, &wrong_end), Err(PackingError::PathNotInGraph { .. })));
    }

    #[test]
    fn instance_json_defaults() {
        let inst =
            PackingInstance::from_json(r#"{"n":3,"edges":[[0,1],[1,2],[0,2]],"sessions":[{"terminals":[2,0,1]}]}"#)
                .unwrap();
        assert_eq!(inst, triangle());
        assert!(PackingInstance::from_json(r#"{"n":2,"edges":[[0,5]],"sessions":[]}"#).is_err());
    }

    #[test]
    fn json_uses_exact_rationals() {
        let r = fractional_packing(&triangle(), Mode::exact()).unwrap();
        let text = serde_json::to_string(&r.tau).unwrap();
        assert_eq!(text, r#"{"kind":"exact","value":{"num":3,"den":2}}"#);
    }
}
