//! Locally decodable codes: Hadamard, matching-vector, and a mock smooth code.
//!
//! Real backends implement [`LinearLdc`]: every codeword coordinate is a linear
//! functional of the message (its generator column) and every decoder run is a
//! [`QueryPlan`], a linear combination of at most `q` queried coordinates.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{order_of_two_mod, FieldCtx, FieldElem, FieldError};
use crate::linalg;
use crate::mvfamily::{inner_mod, FamilyViolation, MatchingVectorFamily};
use crate::rational::{self, Rational};
use crate::seed::{streams, SeedSplitter};

/// Largest Hadamard message length (codeword length `2^k`).
pub const MAX_HADAMARD_K: usize = 24;
/// Largest randomness space the smoothness checker enumerates.
pub const MAX_ENUMERATED_RANDOMNESS: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("hadamard message length {0} exceeds {MAX_HADAMARD_K}")]
    MessageTooLong(usize),
    #[error("message length must be at least 1")]
    EmptyMessage,
    #[error("message has length {got}, expected {expected}")]
    MessageLength { got: usize, expected: usize },
    #[error("message index {0} out of range")]
    BadIndex(usize),
    #[error("mock_smooth is not a real code")]
    NotARealCode,
    #[error("decoding radius {delta} must lie in [0, 1/{q})")]
    BadRadius { delta: String, q: usize },
    #[error("|U| = {used} exceeds delta * N = {limit}")]
    TooManyUsed { used: usize, limit: String },
    #[error("no decoder randomness avoids the used set for index {0}")]
    NoAvoidingRandomness(usize),
    #[error("invalid matching-vector family: {0}")]
    BadFamily(String),
    #[error("v_{0} has additive order <= |S|, so decoder queries collide")]
    DegenerateQueries(usize),
    #[error("code parameters invalid: {0}")]
    BadParameters(String),
    #[error("S-decoding polynomial undefined: {0}")]
    BadDecodingSet(String),
    #[error("randomness space of size {0} is too large to enumerate")]
    RandomnessTooLarge(u64),
}

/// One decoder run: query `coordinates`, combine linearly, then multiply by `scaling`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryPlan {
    pub coordinates: Vec<usize>,
    pub coefficients: Vec<FieldElem>,
    pub scaling: FieldElem,
}

impl QueryPlan {
    /// Per-coordinate weights with the scaling folded in.
    pub fn effective_coefficients(&self, field: &FieldCtx) -> Vec<FieldElem> {
        self.coefficients.iter().map(|&c| field.mul(c, self.scaling)).collect()
    }

    pub fn evaluate(&self, field: &FieldCtx, word: impl Fn(usize) -> FieldElem) -> FieldElem {
        let sum = self
            .coordinates
            .iter()
            .zip(&self.coefficients)
            .fold(FieldElem::ZERO, |acc, (&j, &c)| field.add(acc, field.mul(c, word(j))));
        field.mul(sum, self.scaling)
    }
}

/// A linear code with a linear local decoder whose randomness can be enumerated.
pub trait LinearLdc: Sync {
    fn message_len(&self) -> usize;
    fn codeword_len(&self) -> usize;
    fn query_count(&self) -> usize;
    fn field(&self) -> &FieldCtx;
    /// Size of the decoder's randomness space; randomness values are `0..size`.
    fn randomness_size(&self) -> u64;
    fn query_plan(&self, i: usize, randomness: u64) -> Result<QueryPlan, CodeError>;
    /// Coordinate `j` as a linear functional of the message.
    fn generator_column(&self, j: usize) -> Vec<FieldElem>;

    fn encode_coordinate(&self, x: &[FieldElem], j: usize) -> FieldElem {
        linalg::dot(self.field(), &self.generator_column(j), x)
    }

    fn encode(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>, CodeError> {
        if x.len() != self.message_len() {
            return Err(CodeError::MessageLength { got: x.len(), expected: self.message_len() });
        }
        Ok((0..self.codeword_len()).map(|j| self.encode_coordinate(x, j)).collect())
    }

    /// The plan whose coordinate set equals `set`, if the decoder ever produces it.
    fn plan_for_set(&self, i: usize, set: &[usize]) -> Option<QueryPlan> {
        let wanted: HashSet<usize> = set.iter().copied().collect();
        (0..self.randomness_size()).find_map(|r| {
            let plan = self.query_plan(i, r).ok()?;
            let got: HashSet<usize> = plan.coordinates.iter().copied().collect();
            (got == wanted && got.len() == set.len()).then_some(plan)
        })
    }
}

/// Hadamard code over GF(2): coordinate `a` of the codeword is `<x, a>`.
///
/// Coordinates are indexed by `a` in `F_2^k` read as a `k`-bit integer whose most
/// significant bit is `a_1`.
#[derive(Clone, Debug)]
pub struct HadamardCode {
    k: usize,
    field: FieldCtx,
}

impl HadamardCode {
    pub fn new(k: usize) -> Result<Self, CodeError> {
        if k == 0 {
            return Err(CodeError::EmptyMessage);
        }
        if k > MAX_HADAMARD_K {
            return Err(CodeError::MessageTooLong(k));
        }
        Ok(HadamardCode { k, field: FieldCtx::new(1)? })
    }

    fn unit_mask(&self, i: usize) -> usize {
        1 << (self.k - 1 - i)
    }

    fn message_mask(&self, x: &[FieldElem]) -> usize {
        x.iter().enumerate().filter(|(_, v)| !v.is_zero()).fold(0, |acc, (t, _)| acc | self.unit_mask(t))
    }
}

impl LinearLdc for HadamardCode {
    fn message_len(&self) -> usize {
        self.k
    }

    fn codeword_len(&self) -> usize {
        1 << self.k
    }

    fn query_count(&self) -> usize {
        2
    }

    fn field(&self) -> &FieldCtx {
        &self.field
    }

    fn randomness_size(&self) -> u64 {
        1 << self.k
    }

    fn query_plan(&self, i: usize, randomness: u64) -> Result<QueryPlan, CodeError> {
        if i >= self.k {
            return Err(CodeError::BadIndex(i));
        }
        let w = randomness as usize % self.codeword_len();
        Ok(QueryPlan {
            coordinates: vec![w, w ^ self.unit_mask(i)],
            coefficients: vec![FieldElem::ONE, FieldElem::ONE],
            scaling: FieldElem::ONE,
        })
    }

    fn generator_column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.k).map(|t| if j & self.unit_mask(t) != 0 { FieldElem::ONE } else { FieldElem::ZERO }).collect()
    }

    fn encode_coordinate(&self, x: &[FieldElem], j: usize) -> FieldElem {
        let parity = (self.message_mask(x) & j).count_ones() & 1;
        if parity == 1 {
            FieldElem::ONE
        } else {
            FieldElem::ZERO
        }
    }

    fn encode(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>, CodeError> {
        if x.len() != self.k {
            return Err(CodeError::MessageLength { got: x.len(), expected: self.k });
        }
        let mask = self.message_mask(x);
        Ok((0..self.codeword_len())
            .map(|a| if (mask & a).count_ones() & 1 == 1 { FieldElem::ONE } else { FieldElem::ZERO })
            .collect())
    }

    fn plan_for_set(&self, i: usize, set: &[usize]) -> Option<QueryPlan> {
        let &first = set.first()?;
        let plan = self.query_plan(i, first as u64).ok()?;
        let mut a = plan.coordinates.clone();
        let mut b = set.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        (a == b).then_some(plan)
    }
}

/// Polynomial vanishing on `{g^s : s in S}` with value 1 at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SDecodingPoly {
    /// `a_0, ..., a_|S|`, lowest degree first.
    pub coefficients: Vec<FieldElem>,
}

impl SDecodingPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn evaluate(&self, field: &FieldCtx, x: FieldElem) -> FieldElem {
        self.coefficients.iter().rev().fold(FieldElem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// `P(x) = prod_{s in S} (x - g^s) / prod_{s in S} (1 - g^s)`, for `g` of order `m`.
pub fn s_decoding_polynomial(field: &FieldCtx, g: FieldElem, m: u64, s: &[u64]) -> Result<SDecodingPoly, CodeError> {
    if let Some(zero) = s.iter().find(|&&x| x % m == 0) {
        return Err(CodeError::BadDecodingSet(format!("{zero} = 0 mod {m}")));
    }
    let mut coeffs = vec![FieldElem::ONE];
    let mut norm = FieldElem::ONE;
    for &e in s {
        let root = field.pow(g, e % m);
        if root == FieldElem::ONE {
            return Err(CodeError::BadDecodingSet(format!("g^{e} = 1")));
        }
        // Multiply by (x + root); subtraction is addition in characteristic 2.
        let mut next = vec![FieldElem::ZERO; coeffs.len() + 1];
        for (d, &c) in coeffs.iter().enumerate() {
            next[d + 1] = field.add(next[d + 1], c);
            next[d] = field.add(next[d], field.mul(c, root));
        }
        coeffs = next;
        norm = field.mul(norm, field.add(FieldElem::ONE, root));
    }
    let inv = field.inv(norm)?;
    Ok(SDecodingPoly { coefficients: coeffs.into_iter().map(|c| field.mul(c, inv)).collect() })
}

/// Matching-vector code over GF(2^t): `C(e_i)` evaluates `z -> g^<u_i, z>` on `Z_m^h`.
///
/// Coordinates are points `z` of `Z_m^h` in lexicographic order, `z_1` most significant.
#[derive(Clone, Debug)]
pub struct MvCode {
    family: MatchingVectorFamily,
    field: FieldCtx,
    generator: FieldElem,
    poly: SDecodingPoly,
    /// `g^0, ..., g^(m-1)`.
    powers: Vec<FieldElem>,
    len: usize,
}

impl MvCode {
    pub fn new(family: MatchingVectorFamily) -> Result<Self, CodeError> {
        family.validate().map_err(|v: FamilyViolation| CodeError::BadFamily(v.to_string()))?;
        if family.is_empty() {
            return Err(CodeError::EmptyMessage);
        }
        let m = family.m;
        let len = (m as u128)
            .checked_pow(family.h as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| CodeError::BadParameters(format!("{m}^{} coordinates", family.h)))?
            as usize;
        let degree = order_of_two_mod(m)?;
        let field = FieldCtx::new(degree)?;
        let generator = field.subgroup_generator(m)?;
        let poly = s_decoding_polynomial(&field, generator, m, &family.s)?;
        let s = family.s.len() as u64;
        for (i, v) in family.v.iter().enumerate() {
            if (1..=s).any(|l| v.iter().all(|&c| (c * l) % m == 0)) {
                return Err(CodeError::DegenerateQueries(i));
            }
        }
        let powers = (0..m).map(|e| field.pow(generator, e)).collect();
        Ok(MvCode { family, field, generator, poly, powers, len })
    }

    pub fn family(&self) -> &MatchingVectorFamily {
        &self.family
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn decoding_poly(&self) -> &SDecodingPoly {
        &self.poly
    }

    pub fn point(&self, mut idx: usize) -> Vec<u64> {
        let m = self.family.m as usize;
        let mut z = vec![0; self.family.h];
        for slot in z.iter_mut().rev() {
            *slot = (idx % m) as u64;
            idx /= m;
        }
        z
    }

    pub fn index(&self, z: &[u64]) -> usize {
        let m = self.family.m as usize;
        z.iter().fold(0, |acc, &c| acc * m + c as usize)
    }
}

impl LinearLdc for MvCode {
    fn message_len(&self) -> usize {
        self.family.len()
    }

    fn codeword_len(&self) -> usize {
        self.len
    }

    fn query_count(&self) -> usize {
        self.family.s.len() + 1
    }

    fn field(&self) -> &FieldCtx {
        &self.field
    }

    fn randomness_size(&self) -> u64 {
        self.len as u64
    }

    fn query_plan(&self, i: usize, randomness: u64) -> Result<QueryPlan, CodeError> {
        if i >= self.family.len() {
            return Err(CodeError::BadIndex(i));
        }
        let m = self.family.m;
        let w = self.point(randomness as usize % self.len);
        let v = &self.family.v[i];
        let coordinates = (0..self.query_count() as u64)
            .map(|l| {
                let z: Vec<u64> = w.iter().zip(v).map(|(&a, &b)| (a + l * b) % m).collect();
                self.index(&z)
            })
            .collect();
        let exponent = inner_mod(&self.family.u[i], &w, m);
        let scaling = self.powers[((m - exponent) % m) as usize];
        Ok(QueryPlan { coordinates, coefficients: self.poly.coefficients.clone(), scaling })
    }

    fn generator_column(&self, j: usize) -> Vec<FieldElem> {
        let z = self.point(j);
        self.family.u.iter().map(|u| self.powers[inner_mod(u, &z, self.family.m) as usize]).collect()
    }

    fn plan_for_set(&self, i: usize, set: &[usize]) -> Option<QueryPlan> {
        // The base point w is one of the queried coordinates.
        let mut wanted = set.to_vec();
        wanted.sort_unstable();
        set.iter().find_map(|&w| {
            let plan = self.query_plan(i, w as u64).ok()?;
            let mut got = plan.coordinates.clone();
            got.sort_unstable();
            (got == wanted).then_some(plan)
        })
    }
}

/// Serializable description from which a [`CodeSpec`] can be rebuilt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum CodeDescriptor {
    Hadamard {
        k: usize,
        #[serde(with = "crate::rational")]
        delta: Rational,
    },
    MatchingVector {
        family: MatchingVectorFamily,
        #[serde(with = "crate::rational")]
        delta: Rational,
    },
    MockSmooth {
        k: usize,
        n: usize,
        q: usize,
        #[serde(with = "crate::rational")]
        delta: Rational,
    },
}

#[derive(Clone, Debug)]
pub enum Backend {
    Hadamard(HadamardCode),
    MatchingVector(Box<MvCode>),
    /// Random `q`-subsets with no reconstruction semantics; used for pruning statistics.
    MockSmooth,
}

/// A `(q, delta, q * delta)` locally decodable code together with its backend.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub k: usize,
    pub n: usize,
    pub q: usize,
    pub delta: Rational,
    pub epsilon: Rational,
    pub field: FieldCtx,
    pub backend: Backend,
    descriptor: CodeDescriptor,
}

fn check_radius(delta: &Rational, q: usize) -> Result<(), CodeError> {
    let ok = *delta >= rational::int(0) && delta * rational::from_u64(q as u64) < rational::int(1);
    if ok {
        Ok(())
    } else {
        Err(CodeError::BadRadius { delta: rational::display(delta), q })
    }
}

impl CodeSpec {
    pub fn hadamard(k: usize, delta: Rational) -> Result<Self, CodeError> {
        let code = HadamardCode::new(k)?;
        check_radius(&delta, 2)?;
        Ok(CodeSpec {
            k,
            n: code.codeword_len(),
            q: 2,
            epsilon: &delta * rational::int(2),
            field: code.field,
            descriptor: CodeDescriptor::Hadamard { k, delta: delta.clone() },
            delta,
            backend: Backend::Hadamard(code),
        })
    }

    pub fn matching_vector(family: MatchingVectorFamily, delta: Rational) -> Result<Self, CodeError> {
        let code = MvCode::new(family.clone())?;
        let q = code.query_count();
        check_radius(&delta, q)?;
        Ok(CodeSpec {
            k: code.message_len(),
            n: code.codeword_len(),
            q,
            epsilon: &delta * rational::from_u64(q as u64),
            field: code.field,
            descriptor: CodeDescriptor::MatchingVector { family, delta: delta.clone() },
            delta,
            backend: Backend::MatchingVector(Box::new(code)),
        })
    }

    pub fn mock_smooth(k: usize, n: usize, q: usize, delta: Rational) -> Result<Self, CodeError> {
        if k == 0 {
            return Err(CodeError::EmptyMessage);
        }
        if q == 0 || q > n {
            return Err(CodeError::BadParameters(format!("need 1 <= q <= N (q={q}, N={n})")));
        }
        check_radius(&delta, q)?;
        Ok(CodeSpec {
            k,
            n,
            q,
            epsilon: &delta * rational::from_u64(q as u64),
            field: FieldCtx::new(1)?,
            descriptor: CodeDescriptor::MockSmooth { k, n, q, delta: delta.clone() },
            delta,
            backend: Backend::MockSmooth,
        })
    }

    pub fn from_descriptor(d: &CodeDescriptor) -> Result<Self, CodeError> {
        match d {
            CodeDescriptor::Hadamard { k, delta } => CodeSpec::hadamard(*k, delta.clone()),
            CodeDescriptor::MatchingVector { family, delta } => {
                CodeSpec::matching_vector(family.clone(), delta.clone())
            }
            CodeDescriptor::MockSmooth { k, n, q, delta } => CodeSpec::mock_smooth(*k, *n, *q, delta.clone()),
        }
    }

    pub fn descriptor(&self) -> &CodeDescriptor {
        &self.descriptor
    }

    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::Hadamard(_) => "hadamard",
            Backend::MatchingVector(_) => "matching_vector",
            Backend::MockSmooth => "mock_smooth",
        }
    }

    /// The linear view of a real code; mock codes have none.
    pub fn linear(&self) -> Result<&dyn LinearLdc, CodeError> {
        match &self.backend {
            Backend::Hadamard(c) => Ok(c),
            Backend::MatchingVector(c) => Ok(c.as_ref()),
            Backend::MockSmooth => Err(CodeError::NotARealCode),
        }
    }

    pub fn encode(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>, CodeError> {
        self.linear()?.encode(x)
    }

    pub fn query_plan(&self, i: usize, randomness: u64) -> Result<QueryPlan, CodeError> {
        self.linear()?.query_plan(i, randomness)
    }

    /// Largest `|U|` with `|U| <= delta * N`.
    pub fn radius_budget(&self) -> usize {
        rational::floor_times(&self.delta, self.n as u64) as usize
    }
}

/// Outcome of [`check_perfect_smoothness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub uniform_marginals: bool,
    pub always_correct: bool,
    pub first_failure: Option<String>,
}

impl SmoothnessReport {
    pub fn is_smooth(&self) -> bool {
        self.uniform_marginals && self.always_correct
    }
}

/// Exact check of perfect smoothness by enumerating all decoder randomness.
///
/// Marginals are counted per query slot. Correctness is checked symbolically:
/// the plan's combined functional must equal `e_i`, which covers every message
/// by linearity.
pub fn check_perfect_smoothness(code: &dyn LinearLdc) -> Result<SmoothnessReport, CodeError> {
    let size = code.randomness_size();
    if size > MAX_ENUMERATED_RANDOMNESS {
        return Err(CodeError::RandomnessTooLarge(size));
    }
    let n = code.codeword_len();
    let k = code.message_len();
    let field = *code.field();
    let columns: Vec<Vec<FieldElem>> = (0..n).map(|j| code.generator_column(j)).collect();

    let mut report = SmoothnessReport { uniform_marginals: true, always_correct: true, first_failure: None };
    let fail = |report: &mut SmoothnessReport, msg: String| {
        if report.first_failure.is_none() {
            report.first_failure = Some(msg);
        }
    };

    for i in 0..k {
        let mut counts: Vec<Vec<u64>> = Vec::new();
        for r in 0..size {
            let plan = code.query_plan(i, r)?;
            if counts.is_empty() {
                counts = vec![vec![0; n]; plan.coordinates.len()];
            }
            for (slot, &j) in plan.coordinates.iter().enumerate() {
                counts[slot][j] += 1;
            }
            let coeffs = plan.effective_coefficients(&field);
            let cols: Vec<&[FieldElem]> = plan.coordinates.iter().map(|&j| columns[j].as_slice()).collect();
            let functional = linalg::combine(&field, &coeffs, &cols, k);
            if functional != linalg::unit(k, i) {
                report.always_correct = false;
                fail(&mut report, format!("index {i}, randomness {r}: decoder does not return x_{i}"));
            }
        }
        for (slot, c) in counts.iter().enumerate() {
            if !size.is_multiple_of(n as u64) || c.iter().any(|&x| x != size / n as u64) {
                report.uniform_marginals = false;
                fail(&mut report, format!("index {i}, query slot {slot}: marginal is not uniform"));
            }
        }
    }
    Ok(report)
}

/// Empirical decoding failures under random corruption.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialReport {
    pub trials: u64,
    pub failures: u64,
    pub corrupted: usize,
}

impl TrialReport {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

/// Runs `trials` independent decode attempts against codewords with
/// `floor(delta * N)` corrupted coordinates. Each corrupted coordinate takes a
/// uniformly random different symbol. Trial `t` draws from its own derived
/// stream, so the result is independent of the thread count.
pub fn corruption_trial(
    code: &dyn LinearLdc,
    delta: &Rational,
    trials: u64,
    seed: u64,
) -> Result<TrialReport, CodeError> {
    let q = code.query_count();
    check_radius(delta, q)?;
    if trials == 0 {
        return Err(CodeError::BadParameters("trials must be >= 1".into()));
    }
    let n = code.codeword_len();
    let k = code.message_len();
    let field = *code.field();
    let corrupted = rational::floor_times(delta, n as u64) as usize;
    let splitter = SeedSplitter::new(seed);

    let failures: Result<u64, CodeError> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = splitter.rng(streams::TRIALS, t);
            let x: Vec<FieldElem> = (0..k).map(|_| field.random(&mut rng)).collect();
            let mut word = code.encode(&x)?;
            for j in sample(&mut rng, n, corrupted) {
                let old = word[j];
                // Uniform over the other |F| - 1 symbols.
                let shift = rng.gen_range(1..field.order());
                word[j] = field.elem(old.bits() as u64 ^ shift).unwrap_or(old);
            }
            let i = rng.gen_range(0..k);
            let r = rng.gen_range(0..code.randomness_size());
            let plan = code.query_plan(i, r)?;
            Ok(u64::from(plan.evaluate(&field, |j| word[j]) != x[i]))
        })
        .sum();
    Ok(TrialReport { trials, failures: failures?, corrupted })
}

/// Coordinates already consumed while generating decode sets.
#[derive(Clone, Debug, Default)]
pub struct UsedSet {
    mask: Vec<bool>,
    count: usize,
}

impl UsedSet {
    pub fn new(n: usize) -> Self {
        UsedSet { mask: vec![false; n], count: 0 }
    }

    pub fn from_coords(n: usize, coords: &[usize]) -> Self {
        let mut s = UsedSet::new(n);
        s.extend(coords);
        s
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mask.get(j).copied().unwrap_or(false)
    }

    pub fn clear(&mut self) {
        self.mask.iter_mut().for_each(|b| *b = false);
        self.count = 0;
    }

    pub fn extend(&mut self, coords: &[usize]) {
        for &j in coords {
            if !self.mask[j] {
                self.mask[j] = true;
                self.count += 1;
            }
        }
    }
}

/// A decode set avoiding the used coordinates, with its reconstruction when the code is real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingSet {
    pub coordinates: Vec<usize>,
    pub plan: Option<QueryPlan>,
}

/// Finds a set `D` of at most `q` coordinates outside `used` from which `x_i`
/// is decodable on uncorrupted codewords.
///
/// Real codes scan decoder randomness in lexicographic order starting at a
/// seed-drawn point. Mock codes return a uniformly random `q`-subset of the
/// unused coordinates.
pub fn decode_avoiding(code: &CodeSpec, i: usize, used: &UsedSet, seed: u64) -> Result<AvoidingSet, CodeError> {
    if i >= code.k {
        return Err(CodeError::BadIndex(i));
    }
    if !rational::at_most_fraction(used.len(), &code.delta, code.n) {
        return Err(CodeError::TooManyUsed {
            used: used.len(),
            limit: rational::display(&(&code.delta * rational::from_u64(code.n as u64))),
        });
    }
    let mut rng = SeedSplitter::new(seed).rng(streams::DECODE, 0);
    match &code.backend {
        Backend::MockSmooth => {
            if code.n - used.len() < code.q {
                return Err(CodeError::NoAvoidingRandomness(i));
            }
            let mut picked = Vec::with_capacity(code.q);
            while picked.len() < code.q {
                let j = rng.gen_range(0..code.n);
                if !used.contains(j) && !picked.contains(&j) {
                    picked.push(j);
                }
            }
            Ok(AvoidingSet { coordinates: picked, plan: None })
        }
        _ => {
            let lin = code.linear()?;
            let start = rng.gen_range(0..lin.randomness_size());
            let plan = first_avoiding_plan(lin, i, used, start)?;
            Ok(AvoidingSet { coordinates: plan.coordinates.clone(), plan: Some(plan) })
        }
    }
}

/// Scans decoder randomness cyclically from `start` for a plan disjoint from `used`.
pub fn first_avoiding_plan(code: &dyn LinearLdc, i: usize, used: &UsedSet, start: u64) -> Result<QueryPlan, CodeError> {
    let size = code.randomness_size();
    for step in 0..size {
        let plan = code.query_plan(i, (start + step) % size)?;
        if plan.coordinates.iter().all(|&j| !used.contains(j)) {
            return Ok(plan);
        }
    }
    Err(CodeError::NoAvoidingRandomness(i))
}
