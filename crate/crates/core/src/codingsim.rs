//! The linear network-coding solution carried by a built gap instance.
//!
//! `S` sends codeword coordinate `j` to `w_j`; codeword trees copy it down to
//! their leaves; each active sink gadget scales what it receives by the
//! decoder's coefficients and sums it up towards the sink. Every edge carries
//! one linear functional of the message, so its entropy is `log |F|` bits.

use std::collections::HashMap;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::codes::{CodeError, CodeSpec, LinearLdc};
use crate::field::{FieldCtx, FieldElem};
use crate::instance::{GapInstance, Role};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::seed::{streams, SeedSplitter};

/// Largest `|F|^k` for which the entropy oracle enumerates messages.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("instance does not match the code: {0}")]
    Mismatch(String),
    #[error("sink {sink} of session {session} cannot decode from coordinates {coords:?}")]
    Undecodable { session: usize, sink: u32, coords: Vec<usize> },
    #[error("edge orientation has a cycle")]
    Cyclic,
    #[error("throughput needs a verified solution: {0}")]
    NotVerified(String),
}

/// How an edge's symbol is computed at its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    /// Tail is a source: `symbol = payload . x`.
    Encode,
    /// `symbol = sum coeff * symbol(in_edge)` over edges entering the tail.
    Linear(Vec<(usize, FieldElem)>),
}

/// Orientation and per-edge linear functionals over `F^k`.
#[derive(Clone, Debug)]
pub struct CodingSolution {
    pub field: FieldCtx,
    pub k: usize,
    /// `(tail, head)` for every edge, in instance edge order.
    pub orientation: Vec<(u32, u32)>,
    /// Rows of the coefficient matrix carried on each edge.
    pub payload: Vec<Vec<Vec<FieldElem>>>,
    /// Capacity scale `c*` in bits.
    pub scale: Rational,
    rules: Vec<Rule>,
}

impl CodingSolution {
    /// Zeroes edge `e` (payload and local rule).
    pub fn clear_edge(&mut self, e: usize) {
        self.payload[e].clear();
        self.rules[e] = Rule::Linear(Vec::new());
    }

    /// Replaces the functionals recorded on edge `e`; the local rule is unchanged.
    pub fn set_payload(&mut self, e: usize, rows: Vec<Vec<FieldElem>>) {
        self.payload[e] = rows;
    }

    pub fn with_scale(mut self, scale: Rational) -> Self {
        self.scale = scale;
        self
    }

    /// Bits per field symbol.
    pub fn symbol_bits(&self) -> u32 {
        self.field.degree()
    }

    pub fn export(&self) -> SolutionExport {
        SolutionExport {
            field_degree: self.field.degree(),
            k: self.k,
            scale: rational::Exact(self.scale.clone()),
            edges: self
                .orientation
                .iter()
                .zip(&self.payload)
                .enumerate()
                .map(|(edge, (&(tail, head), rows))| EdgeExport {
                    edge,
                    tail,
                    head,
                    rows: rows.iter().map(|r| r.iter().map(|x| x.bits()).collect()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeExport {
    pub edge: usize,
    pub tail: u32,
    pub head: u32,
    pub rows: Vec<Vec<u32>>,
}

/// Coefficient matrices per edge, for external audit.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionExport {
    pub field_degree: u32,
    pub k: usize,
    pub scale: rational::Exact,
    pub edges: Vec<EdgeExport>,
}

fn is_b_side(r: Role) -> bool {
    matches!(r, Role::B | Role::BTree | Role::BLeaf)
}

fn is_sink_side(r: Role) -> bool {
    matches!(r, Role::Sink | Role::SinkTree | Role::SinkLeaf)
}

/// Depth of every gadget vertex below its gadget root (`B` or `Sink`),
/// following only edges inside the gadget.
fn gadget_depths(inst: &GapInstance) -> Vec<u32> {
    let verts = inst.vertices();
    let inside = |u: u32, v: u32| {
        let (a, b) = (verts[u as usize], verts[v as usize]);
        a.group == b.group
            && ((is_b_side(a.role) && is_b_side(b.role)) || (is_sink_side(a.role) && is_sink_side(b.role)))
    };
    let g = crate::graph::Csr::new(verts.len(), inst.edges(), |e| {
        let (u, v) = inst.edges()[e];
        inside(u, v)
    });
    let mut depth = vec![u32::MAX; verts.len()];
    let mut queue = std::collections::VecDeque::new();
    for (v, vert) in verts.iter().enumerate() {
        if matches!(vert.role, Role::B | Role::Sink) {
            depth[v] = 0;
            queue.push_back(v as u32);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if depth[y as usize] == u32::MAX {
                depth[y as usize] = depth[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    depth
}

/// Directs every edge: source to `B`, down codeword trees, from codeword
/// side to sink side, and up sink trees.
fn orient(inst: &GapInstance) -> Result<Vec<(u32, u32)>, CodingError> {
    let verts = inst.vertices();
    let depth = gadget_depths(inst);
    inst.edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (verts[u as usize], verts[v as usize]);
            let down = |x: u32, y: u32| if depth[x as usize] <= depth[y as usize] { (x, y) } else { (y, x) };
            let dir = match (a.role, b.role) {
                (Role::Source, r) if is_b_side(r) => (u, v),
                (r, Role::Source) if is_b_side(r) => (v, u),
                (x, y) if is_b_side(x) && is_b_side(y) && a.group == b.group => down(u, v),
                (x, y) if is_sink_side(x) && is_sink_side(y) && a.group == b.group => {
                    let (p, c) = down(u, v);
                    (c, p)
                }
                (x, y) if is_b_side(x) && is_sink_side(y) => (u, v),
                (x, y) if is_sink_side(x) && is_b_side(y) => (v, u),
                _ => return Err(CodingError::Mismatch(format!("edge ({u}, {v}) joins {:?} and {:?}", a.role, b.role))),
            };
            if depth[dir.0 as usize] == u32::MAX && a.role != Role::Source && b.role != Role::Source {
                return Err(CodingError::Mismatch(format!("vertex {} is outside every gadget", dir.0)));
            }
            Ok(dir)
        })
        .collect()
}

/// Kahn order of the edges by their tails; `None` if the orientation has a cycle.
fn edge_order(n: usize, orientation: &[(u32, u32)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0u32; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(t, h)) in orientation.iter().enumerate() {
        indeg[h as usize] += 1;
        out[t as usize].push(e);
    }
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(orientation.len());
    let mut done = 0;
    while let Some(v) = stack.pop() {
        done += 1;
        for &e in &out[v as usize] {
            order.push(e);
            let h = orientation[e].1 as usize;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                stack.push(h as u32);
            }
        }
    }
    (done == n).then_some(order)
}

fn incoming(n: usize, orientation: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (e, &(_, h)) in orientation.iter().enumerate() {
        inc[h as usize].push(e);
    }
    inc
}

/// Decoder coefficients for `x_i` from exactly the coordinates `coords`,
/// indexed like `coords`.
fn sink_coefficients(code: &dyn LinearLdc, i: usize, coords: &[usize]) -> Option<Vec<FieldElem>> {
    let field = code.field();
    if let Some(plan) = code.plan_for_set(i, coords) {
        let eff = plan.effective_coefficients(field);
        let by_coord: HashMap<usize, FieldElem> = plan.coordinates.iter().copied().zip(eff).collect();
        return coords.iter().map(|j| by_coord.get(j).copied()).collect();
    }
    let cols: Vec<Vec<FieldElem>> = coords.iter().map(|&j| code.generator_column(j)).collect();
    linalg::solve_combination(field, &cols, &linalg::unit(code.message_len(), i))
}

/// Builds the canonical solution. Pruned sink gadgets carry nothing.
pub fn build_solution(inst: &GapInstance, code: &CodeSpec) -> Result<CodingSolution, CodingError> {
    let lin = code.linear()?;
    let field = *lin.field();
    let k = lin.message_len();
    let verts = inst.vertices();
    let n = verts.len();
    if inst.sessions.len() != k {
        return Err(CodingError::Mismatch(format!("{} sessions but k = {k}", inst.sessions.len())));
    }
    if let Some(v) = verts.iter().find(|v| is_b_side(v.role) && v.group as usize >= lin.codeword_len()) {
        return Err(CodingError::Mismatch(format!("coordinate {} beyond N = {}", v.group, lin.codeword_len())));
    }
    let orientation = orient(inst)?;
    let order = edge_order(n, &orientation).ok_or(CodingError::Cyclic)?;
    let inc = incoming(n, &orientation);

    // Active sink gadgets: group -> (session, sink root).
    let mut active: HashMap<u32, (usize, u32)> = HashMap::new();
    for (i, s) in inst.sessions.iter().enumerate() {
        for &t in &s.sinks {
            if verts[t as usize].role != Role::Sink {
                return Err(CodingError::Mismatch(format!("sink {t} is not a sink vertex")));
            }
            active.insert(verts[t as usize].group, (i, t));
        }
    }
    // Codeword coordinates entering each active gadget, in query-slot order.
    let mut gadget_inputs: HashMap<u32, Vec<(u32, usize, usize)>> = HashMap::new();
    for (e, &(t, h)) in orientation.iter().enumerate() {
        let (tv, hv) = (verts[t as usize], verts[h as usize]);
        if is_b_side(tv.role) && is_sink_side(hv.role) && active.contains_key(&hv.group) {
            let slot = if hv.role == Role::SinkLeaf { hv.label.unwrap_or(0) } else { 0 };
            gadget_inputs.entry(hv.group).or_default().push((slot, e, tv.group as usize));
        }
    }
    let mut edge_coeff: HashMap<usize, FieldElem> = HashMap::new();
    for (&group, &(i, sink)) in &active {
        let mut inputs = gadget_inputs.remove(&group).unwrap_or_default();
        inputs.sort_unstable();
        let coords: Vec<usize> = inputs.iter().map(|&(_, _, j)| j).collect();
        let coeffs = sink_coefficients(lin, i, &coords).ok_or_else(|| CodingError::Undecodable {
            session: i,
            sink,
            coords: coords.clone(),
        })?;
        for (&(_, e, _), c) in inputs.iter().zip(coeffs) {
            edge_coeff.insert(e, c);
        }
    }

    let mut rules = vec![Rule::Linear(Vec::new()); orientation.len()];
    let mut payload: Vec<Vec<Vec<FieldElem>>> = vec![Vec::new(); orientation.len()];
    for &e in &order {
        let (t, h) = orientation[e];
        let (tv, hv) = (verts[t as usize], verts[h as usize]);
        let rule = if tv.role == Role::Source {
            Rule::Encode
        } else if is_b_side(tv.role) && is_b_side(hv.role) {
            Rule::Linear(inc[t as usize].iter().map(|&x| (x, FieldElem::ONE)).collect())
        } else if is_b_side(tv.role) {
            match edge_coeff.get(&e) {
                Some(&c) => Rule::Linear(inc[t as usize].iter().map(|&x| (x, c)).collect()),
                None => Rule::Linear(Vec::new()),
            }
        } else if active.contains_key(&tv.group) {
            Rule::Linear(inc[t as usize].iter().map(|&x| (x, FieldElem::ONE)).collect())
        } else {
            Rule::Linear(Vec::new())
        };
        payload[e] = match &rule {
            Rule::Encode => vec![lin.generator_column(verts[h as usize].group as usize)],
            Rule::Linear(terms) => {
                let rows: Vec<&[FieldElem]> =
                    terms.iter().filter_map(|&(x, _)| payload[x].first().map(|r| r.as_slice())).collect();
                let coeffs: Vec<FieldElem> =
                    terms.iter().filter(|&&(x, _)| !payload[x].is_empty()).map(|&(_, c)| c).collect();
                if rows.is_empty() {
                    Vec::new()
                } else {
                    let row = linalg::combine(&field, &coeffs, &rows, k);
                    if row.iter().all(|x| x.is_zero()) {
                        Vec::new()
                    } else {
                        vec![row]
                    }
                }
            }
        };
        rules[e] = rule;
    }
    Ok(CodingSolution { field, k, orientation, payload, scale: rational::from_u64(field.degree() as u64), rules })
}

/// Outcome of [`verify_correctness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectnessReport {
    pub acyclic: bool,
    pub causal: bool,
    /// Every sink's received functional equals `e_i`.
    pub symbolic: bool,
    /// Every sink output the right symbol on every simulated message.
    pub simulated: bool,
    pub messages: u64,
    pub exhaustive: bool,
    pub failing_sinks: Vec<u32>,
}

impl CorrectnessReport {
    pub fn ok(&self) -> bool {
        self.acyclic && self.causal && self.symbolic && self.simulated
    }
}

fn message(field: &FieldCtx, k: usize, mut idx: u64) -> Vec<FieldElem> {
    let q = field.order();
    (0..k)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            field.elem(d).expect("digit below field order")
        })
        .collect()
}

fn sink_functional(sol: &CodingSolution, inc: &[usize]) -> Vec<FieldElem> {
    let rows: Vec<&[FieldElem]> = inc.iter().flat_map(|&e| sol.payload[e].iter().map(|r| r.as_slice())).collect();
    linalg::combine(&sol.field, &vec![FieldElem::ONE; rows.len()], &rows, sol.k)
}

/// Checks orientation, causality, and decoding at every sink.
///
/// Sinks are checked both symbolically and by running the local edge rules on
/// messages: all of `F^k` when `|F|^k <= exhaustive_limit`, otherwise
/// `random_messages` seeded draws.
pub fn verify_correctness(
    sol: &CodingSolution,
    inst: &GapInstance,
    exhaustive_limit: u64,
    random_messages: u64,
    seed: u64,
) -> CorrectnessReport {
    let n = inst.vertex_count();
    let field = sol.field;
    let order = edge_order(n, &sol.orientation);
    let acyclic = order.is_some();
    let order = order.unwrap_or_default();
    let inc = incoming(n, &sol.orientation);
    let mut out = vec![Vec::new(); n];
    for (e, &(t, _)) in sol.orientation.iter().enumerate() {
        out[t as usize].push(e);
    }
    let sources: std::collections::HashSet<u32> = inst.sessions.iter().map(|s| s.source).collect();

    let causal = (0..n as u32).into_par_iter().all(|v| {
        if sources.contains(&v) {
            return true;
        }
        let mut rows: Vec<Vec<FieldElem>> =
            inc[v as usize].iter().flat_map(|&e| sol.payload[e].iter().cloned()).collect();
        let before = linalg::rank(&field, &rows);
        for &e in &out[v as usize] {
            rows.extend(sol.payload[e].iter().cloned());
        }
        linalg::rank(&field, &rows) == before
    });

    let sinks: Vec<(usize, u32)> =
        inst.sessions.iter().enumerate().flat_map(|(i, s)| s.sinks.iter().map(move |&t| (i, t))).collect();
    let mut failing: Vec<u32> = sinks
        .iter()
        .filter(|&&(i, t)| sink_functional(sol, &inc[t as usize]) != linalg::unit(sol.k, i))
        .map(|&(_, t)| t)
        .collect();
    let symbolic = failing.is_empty();

    let total = (field.order() as u128).checked_pow(sol.k as u32).unwrap_or(u128::MAX);
    let exhaustive = total <= exhaustive_limit as u128;
    let messages = if exhaustive { total as u64 } else { random_messages };
    let splitter = SeedSplitter::new(seed);
    let simulated_failures: Vec<u32> = if !acyclic {
        Vec::new()
    } else {
        (0..messages)
            .into_par_iter()
            .map_init(
                || vec![FieldElem::ZERO; sol.orientation.len()],
                |symbols, idx| {
                    let x = if exhaustive {
                        message(&field, sol.k, idx)
                    } else {
                        let mut rng = splitter.rng(streams::MESSAGES, idx);
                        (0..sol.k).map(|_| field.random(&mut rng)).collect()
                    };
                    for &e in &order {
                        symbols[e] = match &sol.rules[e] {
                            Rule::Encode => {
                                sol.payload[e].first().map_or(FieldElem::ZERO, |r| linalg::dot(&field, r, &x))
                            }
                            Rule::Linear(terms) => terms
                                .iter()
                                .fold(FieldElem::ZERO, |acc, &(y, c)| field.add(acc, field.mul(c, symbols[y]))),
                        };
                    }
                    sinks
                        .iter()
                        .filter(|&&(i, t)| {
                            let out =
                                inc[t as usize].iter().fold(FieldElem::ZERO, |acc, &e| field.add(acc, symbols[e]));
                            out != x[i]
                        })
                        .map(|&(_, t)| t)
                        .collect::<Vec<u32>>()
                },
            )
            .flatten()
            .collect()
    };
    let simulated = acyclic && simulated_failures.is_empty();
    failing.extend(simulated_failures);
    failing.sort_unstable();
    failing.dedup();
    CorrectnessReport { acyclic, causal, symbolic, simulated, messages, exhaustive, failing_sinks: failing }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapacityReport {
    pub ok: bool,
    pub max_rank: usize,
    /// Largest per-edge entropy, in bits.
    pub max_entropy: rational::Exact,
    pub violations: Vec<usize>,
}

/// Per-edge entropy `rank * log |F|` against `c_e c*` with `c_e = 1`.
pub fn verify_capacity(sol: &CodingSolution, inst: &GapInstance) -> CapacityReport {
    let bits = sol.symbol_bits() as u64;
    let ranks: Vec<usize> = sol.payload.par_iter().map(|rows| linalg::rank(&sol.field, rows)).collect();
    let violations: Vec<usize> = ranks
        .iter()
        .enumerate()
        .filter(|&(e, &r)| e < inst.edge_count() && rational::from_u64(r as u64 * bits) > sol.scale)
        .map(|(e, _)| e)
        .collect();
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    CapacityReport {
        ok: violations.is_empty(),
        max_rank,
        max_entropy: rational::Exact(rational::from_u64(max_rank as u64 * bits)),
        violations,
    }
}

/// Shannon entropy in bits of `x -> (row . x)_rows` for uniform `x` in `F^k`,
/// by enumerating every message. `None` above [`ENUMERATION_LIMIT`] messages.
pub fn enumeration_entropy(field: &FieldCtx, rows: &[Vec<FieldElem>], k: usize) -> Option<f64> {
    let total = (field.order() as u128).checked_pow(k as u32)?;
    if total > ENUMERATION_LIMIT as u128 {
        return None;
    }
    let mut counts: HashMap<Vec<FieldElem>, u64> = HashMap::new();
    for idx in 0..total as u64 {
        let x = message(field, k, idx);
        *counts.entry(rows.iter().map(|r| linalg::dot(field, r, &x)).collect()).or_default() += 1;
    }
    let total = total as f64;
    Some(
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / total;
                -p * p.log2()
            })
            .sum(),
    )
}

/// Coding throughput, possibly unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Throughput {
    Finite(Rational),
    Unbounded,
}

/// Largest `a` with `H(m_i) = log |F| >= a d_i c*` for every session.
pub fn throughput(
    sol: &CodingSolution,
    inst: &GapInstance,
    correctness: &CorrectnessReport,
    capacity: &CapacityReport,
) -> Result<Throughput, CodingError> {
    if !correctness.ok() {
        return Err(CodingError::NotVerified(format!("correctness failed at sinks {:?}", correctness.failing_sinks)));
    }
    if !capacity.ok {
        return Err(CodingError::NotVerified(format!("capacity exceeded on edges {:?}", capacity.violations)));
    }
    if inst.sessions.is_empty() {
        return Ok(Throughput::Unbounded);
    }
    if sol.scale.is_zero() {
        return Ok(Throughput::Unbounded);
    }
    Ok(Throughput::Finite(rational::from_u64(sol.symbol_bits() as u64) / &sol.scale))
}

/// Builds, verifies, and returns the throughput of the canonical solution.
pub fn solve_and_verify(
    inst: &GapInstance,
    code: &CodeSpec,
    exhaustive_limit: u64,
    seed: u64,
) -> Result<(CodingSolution, CorrectnessReport, CapacityReport, Throughput), CodingError> {
    let sol = build_solution(inst, code)?;
    let correctness = verify_correctness(&sol, inst, exhaustive_limit, 1000, seed);
    let capacity = verify_capacity(&sol, inst);
    let a = throughput(&sol, inst, &correctness, &capacity)?;
    Ok((sol, correctness, capacity, a))
}

/// Uniformly random message.
pub fn random_message<R: Rng + ?Sized>(field: &FieldCtx, k: usize, rng: &mut R) -> Vec<FieldElem> {
    (0..k).map(|_| field.random(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{build_sampling_instance, build_tree_instance, tripartite_instance, Provenance};
    use crate::mvfamily::trivial_family;
    use crate::rational::ratio;

    fn hadamard_tree() -> (GapInstance, CodeSpec) {
        let code = CodeSpec::hadamard(2, ratio(1, 4)).unwrap();
        let (inst, _) = build_tree_instance(&code, 3).unwrap();
        (inst, code)
    }

    #[test]
    fn hadamard_sinks_receive_unit_functionals() {
        let (inst, code) = hadamard_tree();
        assert!(inst.sink_count() > 0);
        let sol = build_solution(&inst, &code).unwrap();
        let rep = verify_correctness(&sol, &inst, 1 << 16, 1000, 0);
        assert!(rep.ok(), "{rep:?}");
        assert!(rep.exhaustive);
        assert_eq!(rep.messages, 4);
        let cap = verify_capacity(&sol, &inst);
        assert!(cap.ok);
        assert_eq!(cap.max_rank, 1);
        assert_eq!(throughput(&sol, &inst, &rep, &cap).unwrap(), Throughput::Finite(ratio(1, 1)));
    }

    #[test]
    fn zeroed_sink_edge_fails() {
        let (inst, code) = hadamard_tree();
        let mut sol = build_solution(&inst, &code).unwrap();
        let t = inst.sessions[0].sinks[0];
        let e = sol.orientation.iter().position(|&(_, h)| h == t).unwrap();
        sol.clear_edge(e);
        let rep = verify_correctness(&sol, &inst, 1 << 16, 1000, 0);
        assert!(!rep.symbolic && !rep.simulated);
        assert!(rep.failing_sinks.contains(&t));
        let cap = verify_capacity(&sol, &inst);
        assert!(throughput(&sol, &inst, &rep, &cap).is_err());
    }

    #[test]
    fn rank_two_edge_violates_capacity() {
        let (inst, code) = hadamard_tree();
        let mut sol = build_solution(&inst, &code).unwrap();
        sol.set_payload(0, vec![linalg::unit(2, 0), linalg::unit(2, 1)]);
        let cap = verify_capacity(&sol, &inst);
        assert!(!cap.ok);
        assert_eq!(cap.violations, vec![0]);
        assert_eq!(cap.max_rank, 2);
    }

    #[test]
    fn doubled_scale_halves_throughput() {
        let (inst, code) = hadamard_tree();
        let sol = build_solution(&inst, &code).unwrap().with_scale(ratio(2, 1));
        let rep = verify_correctness(&sol, &inst, 1 << 16, 1000, 0);
        let cap = verify_capacity(&sol, &inst);
        assert_eq!(throughput(&sol, &inst, &rep, &cap).unwrap(), Throughput::Finite(ratio(1, 2)));
    }

    #[test]
    fn zero_sink_instance_labels_only_codeword_edges() {
        let code = CodeSpec::hadamard(2, ratio(0, 1)).unwrap();
        let (inst, _) = build_sampling_instance(&code, 1).unwrap();
        let sol = build_solution(&inst, &code).unwrap();
        assert!(sol.payload.iter().all(|p| p.len() == 1));
        assert_eq!(sol.payload.len(), 4);
    }

    #[test]
    fn zero_sessions_are_unbounded() {
        let code = CodeSpec::hadamard(1, ratio(0, 1)).unwrap();
        let inst = tripartite_instance(2, &[vec![]], Provenance::default()).unwrap();
        let sol = build_solution(&inst, &code).unwrap();
        let rep = verify_correctness(&sol, &inst, 16, 10, 0);
        let cap = verify_capacity(&sol, &inst);
        let mut empty = inst.clone();
        empty.sessions.clear();
        assert_eq!(throughput(&sol, &empty, &rep, &cap).unwrap(), Throughput::Unbounded);
        assert!(build_solution(&empty, &code).is_err());
    }

    #[test]
    fn mv_solution_over_gf4() {
        let code = CodeSpec::matching_vector(trivial_family(2, 3).unwrap(), ratio(1, 4)).unwrap();
        for build in [build_sampling_instance, build_tree_instance] {
            let (inst, _) = build(&code, 5).unwrap();
            let (sol, rep, cap, a) = solve_and_verify(&inst, &code, 1 << 16, 0).unwrap();
            assert!(rep.ok() && rep.exhaustive && rep.messages == 16);
            assert_eq!(cap.max_entropy.0, ratio(2, 1));
            assert_eq!(a, Throughput::Finite(ratio(1, 1)));
            assert_eq!(sol.scale, ratio(2, 1));
        }
    }

    #[test]
    fn mock_codes_have_no_solution() {
        let code = CodeSpec::mock_smooth(4, 16, 2, ratio(1, 4)).unwrap();
        let (inst, _) = build_tree_instance(&code, 1).unwrap();
        assert!(matches!(build_solution(&inst, &code), Err(CodingError::Code(CodeError::NotARealCode))));
    }

    #[test]
    fn rank_entropy_matches_enumeration() {
        for degree in [1, 2] {
            let f = FieldCtx::new(degree).unwrap();
            let mut rng = SeedSplitter::new(degree as u64).rng(0, 0);
            for rows in 0..3 {
                for _ in 0..10 {
                    let m: Vec<Vec<FieldElem>> = (0..rows).map(|_| random_message(&f, 2, &mut rng)).collect();
                    let h = enumeration_entropy(&f, &m, 2).unwrap();
                    let r = linalg::rank(&f, &m) as f64 * degree as f64;
                    assert!((h - r).abs() < 1e-9, "{h} vs {r}");
                }
            }
        }
        assert!(enumeration_entropy(&FieldCtx::new(8).unwrap(), &[], 3).is_none());
    }

    #[test]
    fn export_lists_every_edge() {
        let (inst, code) = hadamard_tree();
        let sol = build_solution(&inst, &code).unwrap();
        let ex = sol.export();
        assert_eq!(ex.edges.len(), inst.edge_count());
        let text = serde_json::to_string(&ex).unwrap();
        assert!(text.contains(r#""scale":{"num":1,"den":1}"#));
    }
}
