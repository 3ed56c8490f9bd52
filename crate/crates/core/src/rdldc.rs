//! Robust-distance LDCs: hypergraph matchings whose same-session hyperedges are
//! far apart in the intersection graph of all hyperedges.
//!
//! Distances count hyperedges: `dist(e, e) = 1` and two intersecting distinct
//! hyperedges are at distance 2. In the tripartite network built from a family,
//! sinks at hypergraph distance `l` are at graph distance `2(l - 1)`.

use std::collections::HashMap;

use log::warn;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{CodeError, CodeSpec};
use crate::codingsim::{self, CodingError, Throughput};
use crate::field::FieldElem;
use crate::graph::{Bfs, Csr};
use crate::instance::{
    self, gap_lower_bound, measure_params, tripartite_instance, ConditionReport, Distance, GapInstance, GapParams,
    InstanceError, Provenance, Status,
};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::seed::{streams, SeedSplitter};

/// Largest message space enumerated when the linear test for decodability fails.
pub const MAX_ENUMERATED_MESSAGES: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum RdError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error("hyperedge {0:?} is not in the hypergraph")]
    HyperedgeNotFound(Vec<usize>),
    #[error("family does not validate: {0}")]
    Unvalidated(String),
    #[error(
        "no valid family after {attempts} attempts (best: min |H_i| = {best_min_size}, min distance = {best_distance})"
    )]
    RetriesExhausted { attempts: usize, best_min_size: usize, best_distance: Distance },
}

/// `q`-uniform hypergraph matchings `H_1..H_k` over `N` codeword coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphMatchingFamily {
    pub q: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub matchings: Vec<Vec<Vec<usize>>>,
}

impl HypergraphMatchingFamily {
    pub fn k(&self) -> usize {
        self.matchings.len()
    }

    pub fn min_size(&self) -> usize {
        self.matchings.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn hyperedge_count(&self) -> usize {
        self.matchings.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Violations of q-uniformity, range, and disjointness within each `H_i`.
    pub fn structure_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut owner = vec![usize::MAX; self.n];
        for (i, h) in self.matchings.iter().enumerate() {
            for (j, e) in h.iter().enumerate() {
                if e.len() != self.q {
                    out.push(format!("H_{i}[{j}] has {} vertices, expected {}", e.len(), self.q));
                }
                for &v in e {
                    if v >= self.n {
                        out.push(format!("H_{i}[{j}] contains {v}, outside [0, {})", self.n));
                        continue;
                    }
                    if owner[v] == j {
                        out.push(format!("H_{i}[{j}] repeats vertex {v}"));
                    } else if owner[v] != usize::MAX {
                        out.push(format!("H_{i}[{j}] overlaps H_{i}[{}] at vertex {v}", owner[v]));
                    }
                    owner[v] = j;
                }
            }
            for e in h {
                for &v in e.iter().filter(|&&v| v < self.n) {
                    owner[v] = usize::MAX;
                }
            }
        }
        out
    }
}

/// Incidence graph of a hyperedge list: vertices `0..n`, then one node per hyperedge.
struct Incidence {
    n: usize,
    graph: Csr,
}

impl Incidence {
    fn new(n: usize, hyperedges: &[&[usize]]) -> Self {
        let edges: Vec<(u32, u32)> = hyperedges
            .iter()
            .enumerate()
            .flat_map(|(h, e)| e.iter().map(move |&v| (v as u32, (n + h) as u32)))
            .collect();
        Incidence { n, graph: Csr::new(n + hyperedges.len(), &edges, |_| true) }
    }

    fn node(&self, h: usize) -> u32 {
        (self.n + h) as u32
    }
}

/// Hops in the incidence graph between two hyperedge nodes, as a hyperedge count.
fn hyperedge_count(hops: Option<u64>) -> Distance {
    hops.map_or(Distance::Infinite, |d| Distance::Finite(d / 2 + 1))
}

/// Shortest chain of pairwise-intersecting hyperedges from `e` to `f` in `h`.
pub fn hypergraph_distance(h: &[Vec<usize>], e: &[usize], f: &[usize]) -> Result<Distance, RdError> {
    let key = |x: &[usize]| {
        let mut x = x.to_vec();
        x.sort_unstable();
        x
    };
    let find = |x: &[usize]| {
        let target = key(x);
        h.iter().position(|y| key(y) == target).ok_or(RdError::HyperedgeNotFound(x.to_vec()))
    };
    let (a, b) = (find(e)?, find(f)?);
    if a == b {
        return Ok(Distance::Finite(1));
    }
    let n = h.iter().flatten().max().map_or(0, |&v| v + 1);
    let refs: Vec<&[usize]> = h.iter().map(Vec::as_slice).collect();
    let inc = Incidence::new(n, &refs);
    let mut bfs = Bfs::new(inc.graph.vertex_count());
    let mut hops = None;
    let target = inc.node(b);
    bfs.bounded(&inc.graph, inc.node(a), u32::MAX, |v, d| {
        if v == target {
            hops = Some(d as u64);
        }
    });
    Ok(hyperedge_count(hops))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodabilityReport {
    pub ok: bool,
    /// Hyperedges decoded only by the enumeration fallback.
    pub by_enumeration: usize,
    pub violations: Vec<String>,
}

/// Every `H_i` is a matching and every `D` in `H_i` determines `x_i` from `C(x)|_D`.
/// Tries a linear functional on `D` first; if none exists and the message
/// space is small, enumerates all messages to look for any decoding function.
pub fn validate_matching_decodable(
    code: &CodeSpec,
    fam: &HypergraphMatchingFamily,
) -> Result<DecodabilityReport, RdError> {
    let lin = code.linear()?;
    let mut violations = fam.structure_violations();
    if fam.k() != lin.message_len() || fam.n != lin.codeword_len() {
        violations.push(format!(
            "family has k = {}, N = {} but the code has k = {}, N = {}",
            fam.k(),
            fam.n,
            lin.message_len(),
            lin.codeword_len()
        ));
        return Ok(DecodabilityReport { ok: false, by_enumeration: 0, violations });
    }
    let field = lin.field();
    let k = fam.k();
    let results: Vec<(usize, Vec<String>)> = fam
        .matchings
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            let mut enumerated = 0;
            let mut bad = Vec::new();
            let target = linalg::unit(k, i);
            for (j, d) in h.iter().enumerate() {
                if d.iter().any(|&v| v >= fam.n) {
                    continue;
                }
                let cols: Vec<Vec<FieldElem>> = d.iter().map(|&v| lin.generator_column(v)).collect();
                if linalg::solve_combination(field, &cols, &target).is_some() {
                    continue;
                }
                match determined_by_enumeration(field, &cols, i, k) {
                    Some(true) => enumerated += 1,
                    Some(false) => bad.push(format!("H_{i}[{j}] does not determine x_{i}")),
                    None => bad.push(format!("H_{i}[{j}]: x_{i} is not a linear function of the queried symbols")),
                }
            }
            (enumerated, bad)
        })
        .collect();
    let mut by_enumeration = 0;
    for (e, bad) in results {
        by_enumeration += e;
        violations.extend(bad);
    }
    Ok(DecodabilityReport { ok: violations.is_empty(), by_enumeration, violations })
}

/// Whether the restriction to the columns always determines `x_i`, over all
/// messages; `None` when the message space is too large to enumerate.
fn determined_by_enumeration(
    field: &crate::field::FieldCtx,
    cols: &[Vec<FieldElem>],
    i: usize,
    k: usize,
) -> Option<bool> {
    let size = field.order();
    let total = (size as u128).checked_pow(k as u32)?;
    if total > MAX_ENUMERATED_MESSAGES as u128 {
        return None;
    }
    let mut seen: HashMap<Vec<FieldElem>, FieldElem> = HashMap::new();
    let mut x = vec![FieldElem::ZERO; k];
    for idx in 0..total as u64 {
        let mut rest = idx;
        for xj in x.iter_mut() {
            *xj = field.elem(rest % size).expect("digit is below the field order");
            rest /= size;
        }
        let view: Vec<FieldElem> = cols.iter().map(|c| linalg::dot(field, c, &x)).collect();
        if *seen.entry(view).or_insert(x[i]) != x[i] {
            return Some(false);
        }
    }
    Some(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustReport {
    pub structure: Vec<String>,
    pub decodable: Status,
    pub decodability: Option<DecodabilityReport>,
    pub min_size: usize,
    #[serde(with = "crate::rational")]
    pub required_size: Rational,
    pub size_ok: bool,
    /// Minimum distance between distinct hyperedges of the same `H_i`.
    pub min_distance: Distance,
    pub d: f64,
    pub distance_ok: bool,
    /// Combinatorial cap `log k / log(delta k)` on achievable distance, when `delta k > 1`.
    pub distance_ceiling: Option<f64>,
}

impl RobustReport {
    pub fn passed(&self) -> bool {
        self.structure.is_empty() && self.decodable != Status::Fail && self.size_ok && self.distance_ok
    }

    fn summary(&self) -> String {
        let mut parts = self.structure.clone();
        if self.decodable == Status::Fail {
            parts.push("matching decodability fails".into());
        }
        if !self.size_ok {
            parts.push(format!("min |H_i| = {} < delta N = {}", self.min_size, rational::display(&self.required_size)));
        }
        if !self.distance_ok {
            parts.push(format!("min distance {} < d = {:.4}", self.min_distance, self.d));
        }
        parts.join("; ")
    }
}

/// Minimum same-session hyperedge distance over the union of all matchings.
pub fn min_session_distance(fam: &HypergraphMatchingFamily) -> Distance {
    let mut refs: Vec<&[usize]> = Vec::with_capacity(fam.hyperedge_count());
    let mut ranges = Vec::with_capacity(fam.k());
    for h in &fam.matchings {
        let start = refs.len();
        refs.extend(h.iter().filter(|e| e.iter().all(|&v| v < fam.n)).map(Vec::as_slice));
        ranges.push(start..refs.len());
    }
    let inc = Incidence::new(fam.n, &refs);
    let size = inc.graph.vertex_count();
    ranges
        .into_par_iter()
        .filter(|r| r.len() > 1)
        .map_init(
            || Bfs::new(size),
            |bfs, r| {
                let nodes: Vec<u32> = r.map(|h| inc.node(h)).collect();
                bfs.min_pairwise(&inc.graph, &nodes)
            },
        )
        .flatten()
        .min()
        .map_or(Distance::Infinite, |hops| hyperedge_count(Some(hops)))
}

/// Checks a family as a `(q, delta, d)` robust-distance LDC for `code`.
/// Decodability is checked for linear codes and reported as not checked for mock codes.
pub fn validate_robust_distance(
    code: &CodeSpec,
    fam: &HypergraphMatchingFamily,
    q: usize,
    delta: &Rational,
    d: f64,
) -> RobustReport {
    let mut structure = fam.structure_violations();
    if fam.q != q {
        structure.push(format!("family has rank {}, expected {q}", fam.q));
    }
    if fam.k() != code.k || fam.n != code.n {
        structure.push(format!("family has k = {}, N = {}; code has k = {}, N = {}", fam.k(), fam.n, code.k, code.n));
    }
    let decodability = if structure.is_empty() { validate_matching_decodable(code, fam).ok() } else { None };
    let decodable = match &decodability {
        Some(r) if r.ok => Status::Pass,
        Some(_) => Status::Fail,
        None if structure.is_empty() => Status::NotChecked,
        None => Status::Fail,
    };
    let required_size = delta * rational::from_u64(fam.n as u64);
    let min_size = fam.min_size();
    let size_ok = fam.k() > 0 && rational::from_u64(min_size as u64) >= required_size;
    let min_distance = min_session_distance(fam);
    let distance_ok = match min_distance {
        Distance::Infinite => true,
        Distance::Finite(l) => l as f64 >= d,
    };
    let dk = delta.to_f64().unwrap_or(0.0) * fam.k() as f64;
    let distance_ceiling = (dk > 1.0).then(|| (fam.k() as f64).log2() / dk.log2());
    if let Some(cap) = distance_ceiling {
        if d > cap {
            warn!("requested distance {d:.3} exceeds the combinatorial ceiling log k / log(delta k) = {cap:.3}");
        }
    }
    RobustReport {
        structure,
        decodable,
        decodability,
        min_size,
        required_size,
        size_ok,
        min_distance,
        d,
        distance_ok,
        distance_ceiling,
    }
}

/// Pruning threshold `log k / (log q + log log k)` of the conversion; the
/// denominator is floored at 1 so tiny parameters stay finite.
pub fn rd_threshold(k: usize, q: usize) -> f64 {
    let lk = (k as f64).log2();
    lk / ((q as f64).log2() + lk.log2().max(0.0)).max(1.0)
}

/// Target distance `log k / (2 (log q + log log k))`.
pub fn rd_distance(k: usize, q: usize) -> f64 {
    rd_threshold(k, q) / 2.0
}

/// Required matching size `max(1, floor(delta N log k / (4 q k)))`.
pub fn rd_required_size(code: &CodeSpec) -> usize {
    let dn = code.delta.to_f64().unwrap_or(0.0) * code.n as f64;
    let lk = (code.k as f64).log2();
    ((dn * lk / (4.0 * code.q as f64 * code.k as f64)).floor() as usize).max(1)
}

/// Reference size `delta N log k / (q k log log k)` that achieved sizes are compared with.
pub fn rd_reference_size(code: &CodeSpec) -> f64 {
    let dn = code.delta.to_f64().unwrap_or(0.0) * code.n as f64;
    let lk = (code.k as f64).log2();
    dn * lk / (code.q as f64 * code.k as f64 * lk.log2().max(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RdOutcome {
    pub family: HypergraphMatchingFamily,
    pub q: usize,
    /// Declared `delta'`: the required size over `N`.
    #[serde(with = "crate::rational")]
    pub delta: Rational,
    #[serde(with = "crate::rational")]
    pub achieved_delta: Rational,
    pub d: f64,
    pub achieved_distance: Distance,
    pub attempts: usize,
    /// Seed of the successful attempt.
    pub seed: u64,
    pub pruned: usize,
    /// Mean `|H_i|` over the reference size `delta N log k / (q k log log k)`.
    pub size_ratio: f64,
    pub report: RobustReport,
}

fn attempt_family(code: &CodeSpec, seed: u64) -> Result<(HypergraphMatchingFamily, usize), RdError> {
    let sets = instance::sample_decode_sets(code, seed)?;
    let flat: Vec<Vec<usize>> = sets.iter().flatten().cloned().collect();
    let prov = Provenance {
        code: None,
        seed,
        algorithm: "rd-sampling".into(),
        min_separation: None,
        config: Default::default(),
    };
    let mut inst = tripartite_instance(code.n, &sets, prov)?;
    let report = instance::prune_instance(&mut inst, rd_threshold(code.k, code.q));
    // Sinks are numbered after S and the N coordinate vertices, in set order.
    let first_sink = 1 + code.n;
    let matchings = inst
        .sessions
        .iter()
        .map(|s| s.sinks.iter().map(|&v| flat[v as usize - first_sink].clone()).collect())
        .collect();
    Ok((HypergraphMatchingFamily { q: code.q, n: code.n, matchings }, report.pruned))
}

/// Converts a smooth LDC into a robust-distance family by sampling decode sets,
/// pruning close same-session sinks, and reading off the survivors' coordinate
/// sets. Retries with derived seeds until the family validates.
pub fn ldc_to_rdldc(code: &CodeSpec, seed: u64, max_retries: usize) -> Result<RdOutcome, RdError> {
    instance::check_k(code)?;
    let splitter = SeedSplitter::new(seed);
    let d = rd_distance(code.k, code.q);
    let required = rd_required_size(code);
    let delta = Rational::new((required as i64).into(), (code.n as i64).into());
    let reference = rd_reference_size(code);
    let mut best: Option<(usize, Distance)> = None;
    let attempts = max_retries.max(1);
    for t in 0..attempts {
        let s = if t == 0 { seed } else { splitter.derive(streams::RETRY, t as u64) };
        let (family, pruned) = attempt_family(code, s)?;
        let report = validate_robust_distance(code, &family, code.q, &delta, d);
        if report.passed() {
            let mean = family.hyperedge_count() as f64 / family.k() as f64;
            return Ok(RdOutcome {
                achieved_delta: Rational::new((family.min_size() as i64).into(), (code.n as i64).into()),
                achieved_distance: report.min_distance,
                q: code.q,
                delta,
                d,
                attempts: t + 1,
                seed: s,
                pruned,
                size_ratio: if reference > 0.0 { mean / reference } else { 0.0 },
                report,
                family,
            });
        }
        let here = (report.min_size, report.min_distance);
        if best.is_none_or(|b| here > b) {
            best = Some(here);
        }
    }
    let (best_min_size, best_distance) = best.unwrap_or((0, Distance::Infinite));
    Err(RdError::RetriesExhausted { attempts, best_min_size, best_distance })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RdGapReport {
    pub params: GapParams,
    pub conditions: ConditionReport,
    #[serde(with = "crate::rational")]
    pub a: Rational,
    /// True when `a = 1` is taken from matching decodability instead of a verified simulation.
    pub a_assumed: bool,
    #[serde(with = "crate::rational")]
    pub bound: Rational,
    /// `a r / (f + 2m/b)` recomputed from the raw counts.
    #[serde(with = "crate::rational")]
    pub recomputed: Rational,
    /// Separation predicted from the family: `2 (l - 1)` for hypergraph distance `l`.
    pub predicted_b: Distance,
    pub d: f64,
    pub separation_ok: bool,
    /// `bound / min(delta k, d / q)`, the measured constant.
    pub ratio_to_min_form: Option<f64>,
}

impl RdGapReport {
    pub fn consistent(&self) -> bool {
        self.bound == self.recomputed && self.params.b == self.predicted_b && self.separation_ok
    }
}

/// Tripartite gap instance with one sink per hyperedge, after validating the
/// family as a `(q, delta, d)` robust-distance LDC.
pub fn build_rd_gap_instance(
    code: &CodeSpec,
    fam: &HypergraphMatchingFamily,
    delta: &Rational,
    d: f64,
) -> Result<(GapInstance, RdGapReport), RdError> {
    let report = validate_robust_distance(code, fam, fam.q, delta, d);
    if !report.passed() {
        return Err(RdError::Unvalidated(report.summary()));
    }
    let min_sep = ((d - 1.0).ceil().max(1.0)) as u64;
    let mut config = std::collections::BTreeMap::new();
    config.insert("delta".to_string(), rational::display(delta));
    config.insert("d".to_string(), format!("{d}"));
    let prov = Provenance {
        code: Some(code.descriptor().clone()),
        seed: 0,
        algorithm: "rd".into(),
        min_separation: Some(min_sep),
        config,
    };
    let inst = tripartite_instance(fam.n, &fam.matchings, prov)?;

    let (a, a_assumed) = if code.linear().is_ok() && inst.sink_count() > 0 {
        let (_, _, _, tp) = codingsim::solve_and_verify(&inst, code, 1 << 12, 0)?;
        match tp {
            Throughput::Finite(a) => (a, false),
            Throughput::Unbounded => (Rational::from_integer(1.into()), true),
        }
    } else {
        (Rational::from_integer(1.into()), true)
    };
    let (params, conditions) = measure_params(&inst, Some(a.clone()));
    let bound = gap_lower_bound(&params)?;
    let recomputed = if params.r == 0 {
        Rational::zero()
    } else {
        let f = rational::from_u64(params.f);
        let denom = match params.b {
            Distance::Finite(b) => f + rational::ratio(2, 1) * rational::from_u64(params.m) / rational::from_u64(b),
            Distance::Infinite => f,
        };
        &a * rational::from_u64(params.r) / denom
    };
    let predicted_b = match report.min_distance {
        Distance::Finite(l) => Distance::Finite(2 * (l - 1)),
        Distance::Infinite => Distance::Infinite,
    };
    let separation_ok = match params.b {
        Distance::Infinite => true,
        Distance::Finite(b) => b as f64 >= d - 1.0,
    };
    let min_form = (delta.to_f64().unwrap_or(0.0) * fam.k() as f64).min(d / fam.q as f64);
    let ratio_to_min_form = (min_form > 0.0).then(|| bound.to_f64().unwrap_or(f64::NAN) / min_form);
    Ok((
        inst,
        RdGapReport {
            params,
            conditions,
            a,
            a_assumed,
            bound,
            recomputed,
            predicted_b,
            d,
            separation_ok,
            ratio_to_min_form,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn distance_examples() {
        let h = vec![vec![1, 2], vec![2, 3]];
        assert_eq!(hypergraph_distance(&h, &[1, 2], &[3, 2]).unwrap(), Distance::Finite(2));
        assert_eq!(hypergraph_distance(&h, &[1, 2], &[1, 2]).unwrap(), Distance::Finite(1));
        let h = vec![vec![1, 2], vec![4, 5]];
        assert_eq!(hypergraph_distance(&h, &[1, 2], &[4, 5]).unwrap(), Distance::Infinite);
        assert!(matches!(hypergraph_distance(&h, &[1, 3], &[4, 5]), Err(RdError::HyperedgeNotFound(_))));
        let chain = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]];
        assert_eq!(hypergraph_distance(&chain, &[0, 1], &[3, 4]).unwrap(), Distance::Finite(4));
    }

    fn hadamard2() -> CodeSpec {
        CodeSpec::hadamard(2, ratio(1, 4)).unwrap()
    }

    #[test]
    fn hadamard_pairs_are_decodable() {
        // Coordinates are w in {0,1}^2; flipping bit for x_i is w ^ e_i.
        let code = hadamard2();
        let fam = HypergraphMatchingFamily {
            q: 2,
            n: 4,
            matchings: vec![vec![vec![0, 2], vec![1, 3]], vec![vec![0, 1], vec![2, 3]]],
        };
        let r = validate_matching_decodable(&code, &fam).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.by_enumeration, 0);
    }

    #[test]
    fn overlap_and_span_failures() {
        let code = hadamard2();
        let overlap = HypergraphMatchingFamily { q: 2, n: 4, matchings: vec![vec![vec![0, 2], vec![2, 3]], vec![]] };
        assert!(!validate_matching_decodable(&code, &overlap).unwrap().ok);
        // {0, 3} decodes x_0 + x_1, not x_0.
        let wrong = HypergraphMatchingFamily { q: 2, n: 4, matchings: vec![vec![vec![0, 3]], vec![]] };
        let r = validate_matching_decodable(&code, &wrong).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn robust_distance_examples() {
        let code = hadamard2();
        let single = HypergraphMatchingFamily { q: 2, n: 4, matchings: vec![vec![vec![0, 2]], vec![vec![0, 1]]] };
        let r = validate_robust_distance(&code, &single, 2, &ratio(1, 4), 10.0);
        assert_eq!(r.min_distance, Distance::Infinite);
        assert!(r.passed());
        assert!(!validate_robust_distance(&code, &single, 2, &ratio(1, 2), 10.0).passed());

        // Two hyperedges of H_0 joined through a hyperedge of H_1: distance 3.
        let joined =
            HypergraphMatchingFamily { q: 2, n: 4, matchings: vec![vec![vec![0, 2], vec![1, 3]], vec![vec![0, 1]]] };
        let r = validate_robust_distance(&code, &joined, 2, &ratio(1, 4), 3.0);
        assert_eq!(r.min_distance, Distance::Finite(3));
        assert!(r.passed());
        assert!(!validate_robust_distance(&code, &joined, 2, &ratio(1, 4), 4.0).passed());
    }

    #[test]
    fn enumeration_agrees_with_span() {
        let code = CodeSpec::hadamard(3, ratio(1, 8)).unwrap();
        let lin = code.linear().unwrap();
        let field = lin.field();
        for a in 0..8 {
            for b in 0..8 {
                if a == b {
                    continue;
                }
                let cols = vec![lin.generator_column(a), lin.generator_column(b)];
                for i in 0..3 {
                    let linear = linalg::solve_combination(field, &cols, &linalg::unit(3, i)).is_some();
                    assert_eq!(determined_by_enumeration(field, &cols, i, 3), Some(linear));
                }
            }
        }
    }

    #[test]
    fn conversion_contract_and_instance() {
        let code = CodeSpec::hadamard(4, ratio(1, 4)).unwrap();
        let out = ldc_to_rdldc(&code, 3, 64).unwrap();
        let again = validate_robust_distance(&code, &out.family, out.q, &out.delta, out.d);
        assert!(again.passed());
        assert_eq!(again.decodable, Status::Pass);
        let (inst, rep) = build_rd_gap_instance(&code, &out.family, &out.delta, out.d).unwrap();
        assert!(rep.conditions.all_hold(), "{:?}", rep.conditions);
        assert!(rep.consistent());
        assert!(!rep.a_assumed);
        assert_eq!(inst.sink_count(), out.family.hyperedge_count());
    }

    #[test]
    fn zero_radius_fails() {
        let code = CodeSpec::mock_smooth(8, 64, 2, ratio(0, 1)).unwrap();
        assert!(matches!(ldc_to_rdldc(&code, 1, 3), Err(RdError::RetriesExhausted { best_min_size: 0, .. })));
    }

    #[test]
    fn empty_family_gives_zero_bound() {
        let code = CodeSpec::mock_smooth(4, 16, 2, ratio(1, 4)).unwrap();
        let fam = HypergraphMatchingFamily { q: 2, n: 16, matchings: vec![vec![]; 4] };
        let (inst, rep) = build_rd_gap_instance(&code, &fam, &ratio(0, 1), 1.0).unwrap();
        assert_eq!(inst.sink_count(), 0);
        assert_eq!(rep.bound, ratio(0, 1));
    }

    #[test]
    fn family_json_round_trip() {
        let fam = HypergraphMatchingFamily { q: 2, n: 4, matchings: vec![vec![vec![0, 2]], vec![vec![0, 1]]] };
        let text = fam.to_json();
        assert_eq!(text, r#"{"q":2,"N":4,"matchings":[[[0,2]],[[0,1]]]}"#);
        assert_eq!(HypergraphMatchingFamily::from_json(&text).unwrap(), fam);
        assert!(HypergraphMatchingFamily::from_json(r#"{"q":2,"N":4,"matchings":[],"x":1}"#).is_err());
    }
}
