//! Matching-vector families over `Z_m^h`, canonical sets, a small exhaustive
//! family search, and the parameter chain that sizes asymptotic MV codes.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::prime_factors;
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MvError {
    #[error("a matching-vector family needs n >= 2 (got {0})")]
    FamilyTooSmall(usize),
    #[error("modulus must be at least 2 (got {0})")]
    ModulusTooSmall(u64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("search space m^h = {0} exceeds 10^6")]
    SearchTooLarge(u128),
    #[error("search budget exhausted after {0} candidates")]
    BudgetExhausted(u64),
    #[error("no family of size {target} exists for these parameters")]
    NoFamily { target: usize },
    #[error("parameter chain needs k >= 2 and t >= 2")]
    BadParameters,
}

/// Vectors `u_i, v_i` in `Z_m^h` with `<u_i, v_i> = 0` and `<u_i, v_j>` in `S` for `i != j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingVectorFamily {
    pub m: u64,
    pub h: usize,
    #[serde(rename = "S")]
    pub s: Vec<u64>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<u64>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<u64>>,
}

/// First broken condition found by [`MatchingVectorFamily::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyViolation {
    Shape(String),
    ZeroInS,
    /// `<u_i, v_i> != 0`.
    Diagonal {
        i: usize,
        value: u64,
    },
    /// `<u_i, v_j>` outside `S`.
    OffDiagonal {
        i: usize,
        j: usize,
        value: u64,
    },
}

impl std::fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyViolation::Shape(msg) => write!(f, "malformed family: {msg}"),
            FamilyViolation::ZeroInS => write!(f, "S contains 0"),
            FamilyViolation::Diagonal { i, value } => write!(f, "<u_{i}, v_{i}> = {value} != 0"),
            FamilyViolation::OffDiagonal { i, j, value } => {
                write!(f, "<u_{i}, v_{j}> = {value} is not in S")
            }
        }
    }
}

pub fn inner_mod(a: &[u64], b: &[u64], m: u64) -> u64 {
    a.iter().zip(b).fold(0u128, |acc, (x, y)| (acc + (*x as u128) * (*y as u128)) % m as u128) as u64
}

impl MatchingVectorFamily {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Checks both family conditions over all pairs; `O(n^2 h)`.
    pub fn validate(&self) -> Result<(), FamilyViolation> {
        if self.m < 2 {
            return Err(FamilyViolation::Shape(format!("modulus {} < 2", self.m)));
        }
        if self.u.len() != self.v.len() {
            return Err(FamilyViolation::Shape("|U| != |V|".into()));
        }
        if let Some(bad) =
            self.u.iter().chain(&self.v).find(|vec| vec.len() != self.h || vec.iter().any(|&c| c >= self.m))
        {
            return Err(FamilyViolation::Shape(format!("vector {bad:?} is not in Z_{}^{}", self.m, self.h)));
        }
        if self.s.iter().any(|&s| s % self.m == 0) {
            return Err(FamilyViolation::ZeroInS);
        }
        for (i, u) in self.u.iter().enumerate() {
            for (j, v) in self.v.iter().enumerate() {
                let value = inner_mod(u, v, self.m);
                if i == j {
                    if value != 0 {
                        return Err(FamilyViolation::Diagonal { i, value });
                    }
                } else if !self.s.contains(&value) {
                    return Err(FamilyViolation::OffDiagonal { i, j, value });
                }
            }
        }
        Ok(())
    }
}

/// `u_i = e_i`, `v_i = 1 - e_i` in `Z_m^n`, so every cross product is 1.
pub fn trivial_family(n: usize, m: u64) -> Result<MatchingVectorFamily, MvError> {
    if n < 2 {
        return Err(MvError::FamilyTooSmall(n));
    }
    if m < 2 {
        return Err(MvError::ModulusTooSmall(m));
    }
    let u = (0..n).map(|i| (0..n).map(|t| u64::from(t == i)).collect()).collect();
    let v = (0..n).map(|i| (0..n).map(|t| u64::from(t != i)).collect()).collect();
    Ok(MatchingVectorFamily { m, h: n, s: vec![1], u, v })
}

/// Nonzero residues of `Z_m` that are 0 or 1 modulo every prime factor of `m`.
pub fn canonical_set(m: u64) -> Result<Vec<u64>, MvError> {
    if m < 2 {
        return Err(MvError::ModulusTooSmall(m));
    }
    let primes = prime_factors(m);
    if primes.iter().product::<u64>() != m {
        return Err(MvError::NotSquarefree(m));
    }
    Ok((1..m).filter(|s| primes.iter().all(|p| s % p <= 1)).collect())
}

fn index_to_vector(mut idx: u64, m: u64, h: usize) -> Vec<u64> {
    let mut out = vec![0; h];
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    out
}

/// Depth-first search for an `S`-matching family of size `target_n`.
///
/// Candidate pairs `(u, v)` of nonzero vectors with `<u, v> = 0` are visited in
/// lexicographic order of `(index(u), index(v))`, and each examined pair costs
/// one unit of `budget`.
pub fn brute_force_family(
    m: u64,
    h: usize,
    s: &[u64],
    target_n: usize,
    budget: u64,
) -> Result<MatchingVectorFamily, MvError> {
    if m < 2 {
        return Err(MvError::ModulusTooSmall(m));
    }
    let space = (m as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
    if space > 1_000_000 {
        return Err(MvError::SearchTooLarge(space));
    }
    let space = space as u64;
    let vectors: Vec<Vec<u64>> = (0..space).map(|i| index_to_vector(i, m, h)).collect();
    let mut s_sorted: Vec<u64> = s.iter().map(|x| x % m).collect();
    s_sorted.sort_unstable();
    s_sorted.dedup();

    struct Search<'a> {
        m: u64,
        space: u64,
        vectors: &'a [Vec<u64>],
        s: &'a [u64],
        target: usize,
        budget: u64,
        spent: u64,
        chosen: Vec<(u64, u64)>,
    }

    impl Search<'_> {
        fn compatible(&self, u: u64, v: u64) -> bool {
            let (uu, vv) = (&self.vectors[u as usize], &self.vectors[v as usize]);
            self.chosen.iter().all(|&(cu, cv)| {
                self.s.contains(&inner_mod(uu, &self.vectors[cv as usize], self.m))
                    && self.s.contains(&inner_mod(&self.vectors[cu as usize], vv, self.m))
            })
        }

        fn run(&mut self, start: u64) -> Result<bool, MvError> {
            if self.chosen.len() >= self.target {
                return Ok(true);
            }
            for pair in start..self.space * self.space {
                if self.spent >= self.budget {
                    return Err(MvError::BudgetExhausted(self.spent));
                }
                self.spent += 1;
                let (u, v) = (pair / self.space, pair % self.space);
                if u == 0 || v == 0 {
                    continue;
                }
                if inner_mod(&self.vectors[u as usize], &self.vectors[v as usize], self.m) != 0 {
                    continue;
                }
                if !self.compatible(u, v) {
                    continue;
                }
                self.chosen.push((u, v));
                if self.run(pair + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
            }
            Ok(false)
        }
    }

    let mut search =
        Search { m, space, vectors: &vectors, s: &s_sorted, target: target_n, budget, spent: 0, chosen: Vec::new() };
    if !search.run(0)? {
        return Err(MvError::NoFamily { target: target_n });
    }
    let fam = MatchingVectorFamily {
        m,
        h,
        s: s_sorted.clone(),
        u: search.chosen.iter().map(|&(u, _)| vectors[u as usize].clone()).collect(),
        v: search.chosen.iter().map(|&(_, v)| vectors[v as usize].clone()).collect(),
    };
    debug_assert!(fam.validate().is_ok());
    Ok(fam)
}

/// Predicted code length `m^E`, exact when it fits comfortably in memory.
#[derive(Clone, Debug, PartialEq)]
pub enum PredictedLength {
    Exact(BigUint),
    TooLarge { log2: f64 },
}

/// Output of [`mv_parameters`].
#[derive(Clone, Debug)]
pub struct MvParameters {
    pub k: u64,
    pub t: u32,
    /// Smallest interval constant for which `[(c/2) t ln t, c t ln t]` holds `t` odd primes.
    pub interval_constant: f64,
    pub primes: Vec<u64>,
    pub m: BigUint,
    /// `|S| = 2^t - 1` for the canonical set.
    pub canonical_set_size: BigUint,
    pub queries: BigUint,
    /// Smallest `b` with `m | 2^b - 1`.
    pub field_degree: BigUint,
    pub w: u64,
    /// Message length after zero padding, `w^(w/t)`.
    pub padded_k: BigUint,
    pub padding_blowup: Rational,
    pub exponents: Vec<u32>,
    pub d: u64,
    /// Smallest integer constant with `h >= d`.
    pub h_constant: u64,
    pub h: u64,
    /// `binom(h, w)`, the family size.
    pub family_size: BigUint,
    /// `binom(h, <= d)`, the vector dimension.
    pub dimension: BigUint,
    pub predicted_length: PredictedLength,
}

impl MvParameters {
    /// `binom(h, w) >= k`.
    pub fn covers_message(&self) -> bool {
        self.family_size >= BigUint::from(self.k)
    }
}

fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize + 1;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for p in 2..n {
        if !composite[p] {
            if p > 2 {
                out.push(p as u64);
            }
            let mut q = p * p;
            while q < n {
                composite[q] = true;
                q += p;
            }
        }
    }
    out
}

/// Multiplicative order of 2 modulo an odd prime `p`.
fn order_of_two_prime(p: u64) -> u64 {
    let mut t = 1;
    let mut x = 2 % p;
    while x != 1 {
        x = x * 2 % p;
        t += 1;
    }
    t
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sum_{j <= d} binom(h, j)`.
pub fn binomial_prefix(h: u64, d: u64) -> BigUint {
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for j in 0..=d.min(h) {
        acc += &term;
        term = term * BigUint::from(h - j) / BigUint::from(j + 1);
    }
    acc
}

/// Bit budget above which the predicted length is reported only by its logarithm.
const EXACT_LENGTH_BITS: f64 = (1u64 << 20) as f64;

/// Walks the parameter chain that turns `(k, t)` into an MV code size.
pub fn mv_parameters(k: u64, t: u32) -> Result<MvParameters, MvError> {
    if k < 2 || t < 2 {
        return Err(MvError::BadParameters);
    }
    let tu = t as usize;
    let scale = t as f64 * (t as f64).ln();

    // Earliest window of t consecutive odd primes with last <= 2 * first.
    let mut limit = 64u64;
    let primes = loop {
        let odd = odd_primes_up_to(limit);
        if let Some(window) = odd.windows(tu).find(|w| w[tu - 1] <= 2 * w[0]) {
            break window.to_vec();
        }
        limit *= 2;
    };
    let interval_constant = primes[tu - 1] as f64 / scale;
    let m: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    let field_degree =
        primes.iter().map(|&p| BigUint::from(order_of_two_prime(p))).fold(BigUint::one(), |acc, o| acc.lcm(&o));

    let mut w = t as u64;
    let padded_k = loop {
        let padded = BigUint::from(w).pow((w / t as u64) as u32);
        if padded >= BigUint::from(k) {
            break padded;
        }
        w += t as u64;
    };
    let padding_blowup = Rational::new(padded_k.clone().into(), BigUint::from(k).into());

    // Smallest e >= 1 with p^(e t) > w.
    let exponents: Vec<u32> = primes
        .iter()
        .map(|&p| {
            let mut e = 1u32;
            while BigUint::from(p).pow(e * t) <= BigUint::from(w) {
                e += 1;
            }
            e
        })
        .collect();
    let d = primes.iter().zip(&exponents).map(|(&p, &e)| p.pow(e)).max().expect("t >= 2 primes");

    // h = ceil(c' * w^(1 + 1/t)) = smallest h with h^t >= c'^t w^(t+1).
    let ceil_h = |c: u64| -> u64 {
        let target = BigUint::from(c).pow(t) * BigUint::from(w).pow(t + 1);
        let root = target.nth_root(t);
        let h = if root.pow(t) == target { root } else { root + 1u32 };
        h.to_u64().expect("h fits in u64")
    };
    let mut h_constant = 1u64;
    while ceil_h(h_constant) < d {
        h_constant += 1;
    }
    let h = ceil_h(h_constant);

    let family_size = binomial(h, w);
    let dimension = binomial_prefix(h, d);
    let log2_m = primes.iter().map(|&p| (p as f64).log2()).sum::<f64>();
    let log2_len = dimension.to_f64().unwrap_or(f64::INFINITY) * log2_m;
    let predicted_length = if log2_len <= EXACT_LENGTH_BITS {
        let exp = dimension.to_u32().expect("bounded by the bit budget");
        PredictedLength::Exact(m.pow(exp))
    } else {
        PredictedLength::TooLarge { log2: log2_len }
    };

    Ok(MvParameters {
        k,
        t,
        interval_constant,
        primes,
        canonical_set_size: (BigUint::one() << t) - 1u32,
        queries: BigUint::one() << t,
        m,
        field_degree,
        w,
        padded_k,
        padding_blowup,
        exponents,
        d,
        h_constant,
        h,
        family_size,
        dimension,
        predicted_length,
    })
}

impl MvParameters {
    pub fn summary(&self) -> String {
        let len = match &self.predicted_length {
            PredictedLength::Exact(n) => format!("N has {} bits", n.bits()),
            PredictedLength::TooLarge { log2 } => format!("log2 N ~ {log2:.3e}"),
        };
        format!(
            "k={} t={} primes={:?} m={} w={} d={} h={} family={} dim={} blowup={} {}",
            self.k,
            self.t,
            self.primes,
            self.m,
            self.w,
            self.d,
            self.h,
            self.family_size,
            self.dimension,
            rational::display(&self.padding_blowup),
            len
        )
    }
}
