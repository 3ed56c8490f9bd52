//! Gap instances: a multicast network with co-located sources and a cut `F`.
//!
//! Two builders are provided. The sampling construction joins each kept decode
//! set directly to the codeword layer; the tree construction hangs a complete
//! binary tree under every codeword vertex and every sink, which keeps all
//! degrees at most 3 once the cut is removed.
//!
//! Logarithms in thresholds and probabilities are base 2.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use log::warn;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::codes::{decode_avoiding, CodeDescriptor, CodeError, CodeSpec, UsedSet};
use crate::graph::{Bfs, Csr};
use crate::rational::{self, Rational};
use crate::seed::{streams, SeedSplitter};

/// Refuse to build instances with more vertices than this.
pub const MAX_VERTICES: usize = 60_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("at least two sessions are required (k = {0})")]
    TooFewSessions(usize),
    #[error("instance would have {0} vertices, above the limit of {MAX_VERTICES}")]
    TooLarge(u128),
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("the certificate needs b >= 2, got {0}")]
    DistanceTooSmall(u64),
    #[error("f + 2m/b must be positive")]
    EmptyDenominator,
    #[error("instance has no sinks")]
    NoSinks,
    #[error("tree {index}: {reason}")]
    BadTree { index: usize, reason: String },
}

/// What a vertex is in the construction.
///
/// `group` is the codeword coordinate for `b*` roles and the sink gadget
/// number for `sink*` roles. `label` is the session on `b_leaf` and `sink`
/// vertices, and the query slot on `sink_leaf` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Source,
    B,
    BTree,
    BLeaf,
    Sink,
    SinkTree,
    SinkLeaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub role: Role,
    pub group: u32,
    pub label: Option<u32>,
}

impl Vertex {
    pub fn new(role: Role, group: u32, label: Option<u32>) -> Self {
        Vertex { role, group, label }
    }
}

/// A multicast session with unit demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub source: u32,
    pub sinks: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub code: Option<CodeDescriptor>,
    pub seed: u64,
    pub algorithm: String,
    /// Lower bound on same-session sink distance that the builder guarantees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_separation: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub config: BTreeMap<String, String>,
}

/// Undirected unit-capacity network, sessions sourced at `S`, and the cut `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    vertices: Vec<Vertex>,
    edges: Vec<(u32, u32)>,
    cut: Vec<usize>,
    cut_mask: Vec<bool>,
    pub sessions: Vec<Session>,
    pub provenance: Provenance,
}

impl GapInstance {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<(u32, u32)>,
        mut cut: Vec<usize>,
        sessions: Vec<Session>,
        provenance: Provenance,
    ) -> Result<Self, InstanceError> {
        let n = vertices.len() as u64;
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u as u64 >= n || v as u64 >= n || u == v) {
            return Err(InstanceError::Malformed(format!("edge ({u}, {v}) is a loop or out of range")));
        }
        cut.sort_unstable();
        cut.dedup();
        if let Some(&e) = cut.iter().find(|&&e| e >= edges.len()) {
            return Err(InstanceError::Malformed(format!("cut edge index {e} out of range")));
        }
        for s in &sessions {
            if let Some(&v) = std::iter::once(&s.source).chain(&s.sinks).find(|&&v| v as u64 >= n) {
                return Err(InstanceError::Malformed(format!("session vertex {v} out of range")));
            }
        }
        let mut cut_mask = vec![false; edges.len()];
        for &e in &cut {
            cut_mask[e] = true;
        }
        Ok(GapInstance { vertices, edges, cut, cut_mask, sessions, provenance })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn cut(&self) -> &[usize] {
        &self.cut
    }

    pub fn is_cut(&self, e: usize) -> bool {
        self.cut_mask[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn sink_count(&self) -> usize {
        self.sessions.iter().map(|s| s.sinks.len()).sum()
    }

    /// Adjacency of `G` with the cut removed.
    pub fn residual(&self) -> Csr {
        Csr::new(self.vertices.len(), &self.edges, |e| !self.cut_mask[e])
    }

    pub fn adjacency(&self) -> Csr {
        Csr::new(self.vertices.len(), &self.edges, |_| true)
    }

    /// Same instance with a different cut.
    pub fn with_cut(&self, cut: Vec<usize>) -> Result<Self, InstanceError> {
        GapInstance::new(self.vertices.clone(), self.edges.clone(), cut, self.sessions.clone(), self.provenance.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Graphviz rendering; cut edges are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gap {\n");
        for (id, v) in self.vertices.iter().enumerate() {
            let name = match v.role {
                Role::Source => "S".to_string(),
                Role::B => format!("w{}", v.group),
                Role::Sink => format!("v{}", v.group),
                _ => String::new(),
            };
            let shape = match v.role {
                Role::Source => "doublecircle",
                Role::B => "box",
                Role::Sink => "circle",
                _ => "point",
            };
            let _ = writeln!(out, "  {id} [label=\"{name}\", shape={shape}];");
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if self.cut_mask[e] {
                let _ = writeln!(out, "  {u} -- {v} [style=dashed];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: u64,
    role: Role,
    group: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<u32>,
}

struct VerticesJson<'a>(&'a [Vertex]);

impl Serialize for VerticesJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().enumerate().map(|(id, v)| VertexJson {
            id: id as u64,
            role: v.role,
            group: v.group,
            label: v.label,
        }))
    }
}

struct EdgesJson<'a>(&'a [(u32, u32)]);

impl Serialize for EdgesJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&(u, v)| [u, v]))
    }
}

impl Serialize for GapInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GapInstance", 5)?;
        st.serialize_field("vertices", &VerticesJson(&self.vertices))?;
        st.serialize_field("edges", &EdgesJson(&self.edges))?;
        st.serialize_field("cut", &self.cut)?;
        st.serialize_field("sessions", &self.sessions)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[u32; 2]>,
    cut: Vec<usize>,
    sessions: Vec<Session>,
    #[serde(default)]
    provenance: Provenance,
}

impl<'de> Deserialize<'de> for GapInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = InstanceJson::deserialize(d)?;
        for (idx, v) in raw.vertices.iter().enumerate() {
            if v.id != idx as u64 {
                return Err(D::Error::custom(format!("vertex ids must be 0..n in order (found {} at {idx})", v.id)));
            }
        }
        let vertices = raw.vertices.into_iter().map(|v| Vertex::new(v.role, v.group, v.label)).collect();
        let edges = raw.edges.into_iter().map(|[u, v]| (u, v)).collect();
        GapInstance::new(vertices, edges, raw.cut, raw.sessions, raw.provenance).map_err(D::Error::custom)
    }
}

/// Sink counts around pruning.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildReport {
    pub sinks_before: usize,
    pub sinks_after: usize,
    pub pruned: usize,
    pub threshold: f64,
    /// Largest integer distance at which close sinks are pruned.
    pub prune_depth: u32,
}

impl BuildReport {
    pub fn pruned_fraction(&self) -> f64 {
        if self.sinks_before == 0 {
            0.0
        } else {
            self.pruned as f64 / self.sinks_before as f64
        }
    }
}

fn log2(k: usize) -> f64 {
    (k as f64).log2()
}

/// `log k / log log k`, with the inner logarithm floored at 1 so small `k` stays finite.
pub fn sampling_threshold(k: usize) -> f64 {
    log2(k) / log2(k).log2().max(1.0)
}

/// `log k / 4`.
pub fn tree_threshold(k: usize) -> f64 {
    log2(k) / 4.0
}

/// Probability `min(1, log k / k)` of keeping a decode set as a sink.
pub fn sampling_probability(k: usize) -> f64 {
    (log2(k) / k as f64).min(1.0)
}

pub fn prune_depth(threshold: f64) -> u32 {
    threshold.max(0.0).floor() as u32
}

/// Disjoint decode sets for session `i`, drawn until `|U| > delta N`.
fn decode_sets(
    code: &CodeSpec,
    i: usize,
    splitter: &SeedSplitter,
    used: &mut UsedSet,
) -> Result<Vec<Vec<usize>>, InstanceError> {
    let mut sets = Vec::new();
    if code.delta.is_zero() {
        return Ok(sets);
    }
    let stream = splitter.child(streams::DECODE, i as u64);
    while rational::at_most_fraction(used.len(), &code.delta, code.n) {
        let d = decode_avoiding(code, i, used, stream.derive(0, sets.len() as u64))?;
        used.extend(&d.coordinates);
        sets.push(d.coordinates);
    }
    Ok(sets)
}

pub(crate) fn check_k(code: &CodeSpec) -> Result<(), InstanceError> {
    if code.k < 2 {
        return Err(InstanceError::TooFewSessions(code.k));
    }
    if code.delta.is_zero() {
        warn!("decoding radius is 0, so the instance has no sinks");
    }
    Ok(())
}

fn provenance(code: &CodeSpec, seed: u64, algorithm: &str, depth: u32) -> Provenance {
    Provenance {
        code: Some(code.descriptor().clone()),
        seed,
        algorithm: algorithm.to_string(),
        min_separation: Some(depth as u64 + 1),
        config: BTreeMap::new(),
    }
}

/// Tripartite network: `S`, one vertex per codeword coordinate, one sink per
/// set, each sink joined to the coordinates in its set.
pub fn tripartite_instance(
    n_coords: usize,
    sets: &[Vec<Vec<usize>>],
    provenance: Provenance,
) -> Result<GapInstance, InstanceError> {
    let sinks: usize = sets.iter().map(Vec::len).sum();
    let total = 1 + n_coords as u128 + sinks as u128;
    if total > MAX_VERTICES as u128 {
        return Err(InstanceError::TooLarge(total));
    }
    let mut vertices = Vec::with_capacity(total as usize);
    let mut edges = Vec::new();
    vertices.push(Vertex::new(Role::Source, 0, None));
    for j in 0..n_coords {
        vertices.push(Vertex::new(Role::B, j as u32, None));
        edges.push((0, 1 + j as u32));
    }
    let cut = (0..n_coords).collect();
    let mut sessions = Vec::with_capacity(sets.len());
    let mut gadget = 0u32;
    for (i, family) in sets.iter().enumerate() {
        let mut session = Session { source: 0, sinks: Vec::with_capacity(family.len()) };
        for d in family {
            let v = vertices.len() as u32;
            vertices.push(Vertex::new(Role::Sink, gadget, Some(i as u32)));
            gadget += 1;
            for &j in d {
                if j >= n_coords {
                    return Err(InstanceError::Malformed(format!("coordinate {j} out of range")));
                }
                edges.push((1 + j as u32, v));
            }
            session.sinks.push(v);
        }
        sessions.push(session);
    }
    GapInstance::new(vertices, edges, cut, sessions, provenance)
}

/// Per session, the disjoint decode sets kept with probability `min(1, log k / k)`.
pub(crate) fn sample_decode_sets(code: &CodeSpec, seed: u64) -> Result<Vec<Vec<Vec<usize>>>, InstanceError> {
    let splitter = SeedSplitter::new(seed);
    let p = sampling_probability(code.k);
    let mut used = UsedSet::new(code.n);
    let mut kept = Vec::with_capacity(code.k);
    for i in 0..code.k {
        used.clear();
        let mut coin = splitter.rng(streams::SAMPLE, i as u64);
        let sets = decode_sets(code, i, &splitter, &mut used)?;
        kept.push(sets.into_iter().filter(|_| coin.gen_bool(p)).collect::<Vec<_>>());
    }
    Ok(kept)
}

/// Sampling builder: sample decode sets as sinks with probability `min(1, log k / k)`,
/// then prune same-session sinks within `log k / log log k` in `G \ F`.
pub fn build_sampling_instance(code: &CodeSpec, seed: u64) -> Result<(GapInstance, BuildReport), InstanceError> {
    check_k(code)?;
    let threshold = sampling_threshold(code.k);
    let depth = prune_depth(threshold);
    let kept = sample_decode_sets(code, seed)?;
    let mut inst = tripartite_instance(code.n, &kept, provenance(code, seed, "sampling", depth))?;
    let report = prune_instance(&mut inst, threshold);
    Ok((inst, report))
}

/// Vertex layout of a heap-ordered complete binary tree with `leaves` leaves:
/// node `x` has children `2x+1`, `2x+2`; leaves are nodes `leaves-1 .. 2*leaves-1`.
fn tree_size(leaves: usize) -> usize {
    2 * leaves - 1
}

fn push_tree(
    vertices: &mut Vec<Vertex>,
    edges: &mut Vec<(u32, u32)>,
    leaves: usize,
    roles: [Role; 3],
    group: u32,
    root_label: Option<u32>,
    leaf_label: impl Fn(usize) -> u32,
) -> u32 {
    let base = vertices.len() as u32;
    let size = tree_size(leaves);
    for x in 0..size {
        let (role, label) = if x == 0 {
            (roles[0], root_label)
        } else if x >= leaves - 1 {
            (roles[2], Some(leaf_label(x + 1 - leaves)))
        } else {
            (roles[1], None)
        };
        vertices.push(Vertex::new(role, group, label));
        if x > 0 {
            edges.push((base + ((x as u32 - 1) / 2), base + x as u32));
        }
    }
    base
}

/// Tree builder: a complete binary tree with `k` randomly labelled leaves under
/// every codeword vertex, a `q`-leaf tree under every decode-set sink, and
/// pruning within `log k / 4`.
pub fn build_tree_instance(code: &CodeSpec, seed: u64) -> Result<(GapInstance, BuildReport), InstanceError> {
    check_k(code)?;
    let threshold = tree_threshold(code.k);
    let depth = prune_depth(threshold);
    let splitter = SeedSplitter::new(seed);
    let (k, n, q) = (code.k, code.n, code.q);

    let mut used = UsedSet::new(n);
    let mut all_sets = Vec::with_capacity(k);
    for i in 0..k {
        used.clear();
        all_sets.push(decode_sets(code, i, &splitter, &mut used)?);
    }
    let sinks: usize = all_sets.iter().map(Vec::len).sum();
    let total = 1 + n as u128 * tree_size(k) as u128 + sinks as u128 * tree_size(q) as u128;
    if total > MAX_VERTICES as u128 {
        return Err(InstanceError::TooLarge(total));
    }

    let mut vertices = Vec::with_capacity(total as usize);
    let mut edges = Vec::with_capacity(total as usize + sinks * q);
    vertices.push(Vertex::new(Role::Source, 0, None));
    let block = tree_size(k) as u32;
    // leaf_of[j * k + i] is the position among the leaves of T_{w_j} carrying label i.
    let mut leaf_of = vec![0u32; n * k];
    for j in 0..n {
        let mut labels: Vec<u32> = (0..k as u32).collect();
        labels.shuffle(&mut splitter.rng(streams::LABELS, j as u64));
        for (pos, &label) in labels.iter().enumerate() {
            leaf_of[j * k + label as usize] = pos as u32;
        }
        let root =
            push_tree(&mut vertices, &mut edges, k, [Role::B, Role::BTree, Role::BLeaf], j as u32, None, |pos| {
                labels[pos]
            });
        edges.push((0, root));
    }
    let cut: Vec<usize> = edges.iter().enumerate().filter(|(_, &(u, _))| u == 0).map(|(e, _)| e).collect();
    let b_leaf = |j: usize, i: usize| 1 + j as u32 * block + (k as u32 - 1) + leaf_of[j * k + i];

    let mut sessions = Vec::with_capacity(k);
    let mut gadget = 0u32;
    for (i, sets) in all_sets.iter().enumerate() {
        let mut session = Session { source: 0, sinks: Vec::with_capacity(sets.len()) };
        for d in sets {
            let root = if d.len() == 1 {
                let v = vertices.len() as u32;
                vertices.push(Vertex::new(Role::Sink, gadget, Some(i as u32)));
                v
            } else {
                push_tree(
                    &mut vertices,
                    &mut edges,
                    d.len(),
                    [Role::Sink, Role::SinkTree, Role::SinkLeaf],
                    gadget,
                    Some(i as u32),
                    |slot| slot as u32,
                )
            };
            let first_leaf = root + d.len() as u32 - 1;
            for (slot, &j) in d.iter().enumerate() {
                edges.push((b_leaf(j, i), first_leaf + slot as u32));
            }
            session.sinks.push(root);
            gadget += 1;
        }
        sessions.push(session);
    }
    let mut inst = GapInstance::new(vertices, edges, cut, sessions, provenance(code, seed, "tree", depth))?;
    let report = prune_instance(&mut inst, threshold);
    Ok((inst, report))
}

/// Removes, for each session and each surviving sink `u` in insertion order,
/// every other sink of the session within distance `floor(threshold)` of `u`
/// in `G \ F`. Afterwards all surviving same-session pairs are farther apart.
pub fn prune_instance(inst: &mut GapInstance, threshold: f64) -> BuildReport {
    let depth = prune_depth(threshold);
    let before = inst.sink_count();
    let g = inst.residual();
    let mut bfs = Bfs::new(inst.vertex_count());
    let mut slot = vec![u32::MAX; inst.vertex_count()];
    let mut pruned = 0;
    for session in &mut inst.sessions {
        for (idx, &v) in session.sinks.iter().enumerate() {
            slot[v as usize] = idx as u32;
        }
        let mut present = vec![true; session.sinks.len()];
        for (idx, &u) in session.sinks.iter().enumerate() {
            if !present[idx] {
                continue;
            }
            bfs.bounded(&g, u, depth, |v, _| {
                let s = slot[v as usize];
                if v != u && s != u32::MAX && present[s as usize] {
                    present[s as usize] = false;
                    pruned += 1;
                }
            });
        }
        for &v in &session.sinks {
            slot[v as usize] = u32::MAX;
        }
        let mut keep = present.into_iter();
        session.sinks.retain(|_| keep.next().unwrap_or(false));
    }
    BuildReport { sinks_before: before, sinks_after: before - pruned, pruned, threshold, prune_depth: depth }
}

/// Same-session sink pair at distance at most the probe depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosePair {
    pub session: usize,
    pub u: u32,
    pub v: u32,
    pub distance: u32,
}

/// All same-session sink pairs within `depth` of each other in `G \ F`, by
/// direct BFS from every sink.
pub fn close_sink_pairs(inst: &GapInstance, depth: u32) -> Vec<ClosePair> {
    let g = inst.residual();
    let n = inst.vertex_count();
    inst.sessions
        .par_iter()
        .enumerate()
        .map_init(
            || (Bfs::new(n), std::collections::HashMap::new()),
            |(bfs, index), (i, session)| {
                index.clear();
                for (pos, &v) in session.sinks.iter().enumerate() {
                    index.insert(v, pos);
                }
                let mut found = Vec::new();
                for (pos, &u) in session.sinks.iter().enumerate() {
                    bfs.bounded(&g, u, depth, |v, d| {
                        if matches!(index.get(&v), Some(&p) if p > pos) {
                            found.push(ClosePair { session: i, u, v, distance: d });
                        }
                    });
                }
                found
            },
        )
        .flatten()
        .collect()
}

/// Shortest-path distance that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Distance::Finite)
                .ok_or_else(|| D::Error::custom("distance must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(Distance::Infinite),
            other => Err(D::Error::custom(format!("bad distance {other}"))),
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// `(a, b, f, m, r)` of a gap instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapParams {
    #[serde(with = "crate::rational")]
    pub a: Rational,
    pub b: Distance,
    pub f: u64,
    pub m: u64,
    pub r: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotChecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    /// 1 to 6 for the gap-instance conditions, 0 for structural checks.
    pub index: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    /// No condition failed (unchecked ones are allowed).
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failed(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| c.status == Status::Fail)
    }

    fn push(&mut self, index: u8, name: &'static str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.conditions.push(ConditionResult { index, name, status, detail });
    }
}

/// Minimum distance in `G \ F` between two sinks of the same session.
pub fn sink_separation(inst: &GapInstance) -> Distance {
    let g = inst.residual();
    let n = inst.vertex_count();
    inst.sessions
        .par_iter()
        .filter(|s| s.sinks.len() > 1)
        .map_init(|| Bfs::new(n), |bfs, s| bfs.min_pairwise(&g, &s.sinks))
        .flatten()
        .min()
        .map_or(Distance::Infinite, Distance::Finite)
}

/// Measures `(a, b, f, m, r)` and checks the six gap-instance conditions.
/// `a` comes from a verified coding solution; without it condition 1 is not checked.
pub fn measure_params(inst: &GapInstance, a: Option<Rational>) -> (GapParams, ConditionReport) {
    let mut report = ConditionReport { conditions: Vec::new() };
    let n = inst.vertex_count();

    let mut structure = Vec::new();
    let full = inst.adjacency();
    let mut bfs = Bfs::new(n);
    if n > 0 {
        bfs.reach(&full, &[0]);
        if let Some(v) = (0..n as u32).find(|&v| !bfs.reached(v)) {
            structure.push(format!("G is disconnected (vertex {v} unreachable)"));
        }
    }
    let sources: std::collections::BTreeSet<u32> = inst.sessions.iter().map(|s| s.source).collect();
    if let Some(&e) = inst.cut().iter().find(|&&e| {
        let (u, v) = inst.edges[e];
        !sources.contains(&u) && !sources.contains(&v)
    }) {
        structure.push(format!("cut edge {e} is not incident to a source"));
    }
    let mut owner = std::collections::HashMap::new();
    for (i, s) in inst.sessions.iter().enumerate() {
        for &v in &s.sinks {
            if let Some(j) = owner.insert(v, i) {
                structure.push(format!("vertex {v} is a sink of sessions {j} and {i}"));
            }
            if v == s.source {
                structure.push(format!("session {i} has its source as a sink"));
            }
        }
    }
    report.push(0, "structure", structure.is_empty(), structure.join("; "));

    report.conditions.push(match &a {
        Some(a) => ConditionResult {
            index: 1,
            name: "coding throughput",
            status: if *a > Rational::zero() { Status::Pass } else { Status::Fail },
            detail: format!("a = {}", rational::display(a)),
        },
        None => ConditionResult {
            index: 1,
            name: "coding throughput",
            status: Status::NotChecked,
            detail: "no coding solution supplied".into(),
        },
    });

    let residual = inst.residual();
    let mut leaks = Vec::new();
    for &src in &sources {
        bfs.reach(&residual, &[src]);
        for (i, s) in inst.sessions.iter().enumerate().filter(|(_, s)| s.source == src) {
            if let Some(&t) = s.sinks.iter().find(|&&t| bfs.reached(t)) {
                leaks.push(format!("session {i}: sink {t} reachable from its source"));
            }
        }
    }
    report.push(2, "cut disconnects sources from sinks", leaks.is_empty(), leaks.join("; "));

    let b = sink_separation(inst);
    let required = inst.provenance.min_separation.unwrap_or(1).max(1);
    report.push(3, "sink separation", b >= Distance::Finite(required), format!("b = {b}, required >= {required}"));

    let f = inst.cut.len() as u64;
    let m = inst.edges.len() as u64;
    let r = inst.sink_count() as u64;
    report.push(4, "cut size", true, format!("f = {f}"));
    report.push(5, "sink count", true, format!("r = {r}"));
    report.push(6, "edge count", true, format!("m = {m}"));

    (GapParams { a: a.unwrap_or_else(Rational::zero), b, f, m, r }, report)
}

/// `a r / (f + 2m/b)`, or `a r / f` when `b` is infinite.
pub fn gap_lower_bound(p: &GapParams) -> Result<Rational, InstanceError> {
    if p.r == 0 {
        warn!("no sinks, so the gap bound is 0");
        return Ok(Rational::zero());
    }
    let mut denom = rational::from_u64(p.f);
    match p.b {
        Distance::Finite(0) => return Err(InstanceError::DistanceTooSmall(0)),
        Distance::Finite(b) => denom += rational::ratio(2, 1) * rational::from_u64(p.m) / rational::from_u64(b),
        Distance::Infinite => {}
    }
    if denom.is_zero() {
        return Err(InstanceError::EmptyDenominator);
    }
    Ok(&p.a * rational::from_u64(p.r) / denom)
}

/// Dual solution `(y, z)` of the Steiner packing LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(with = "crate::rational::vec")]
    pub y: Vec<Rational>,
    #[serde(with = "crate::rational::vec")]
    pub z: Vec<Rational>,
    #[serde(with = "crate::rational")]
    pub objective: Rational,
}

impl DualCertificate {
    /// `sum y_e / sum z_i` for unit capacities and demands.
    pub fn new(y: Vec<Rational>, z: Vec<Rational>) -> Result<Self, InstanceError> {
        let num: Rational = y.iter().sum();
        let den: Rational = z.iter().sum();
        if den.is_zero() {
            return Err(InstanceError::NoSinks);
        }
        Ok(DualCertificate { objective: num / den, y, z })
    }
}

/// `y_e = 1` on the cut and `2/b` elsewhere, `z_i = |R_i|`.
pub fn dual_certificate(inst: &GapInstance, params: &GapParams) -> Result<DualCertificate, InstanceError> {
    let off_cut = match params.b {
        Distance::Finite(b) if b < 2 => return Err(InstanceError::DistanceTooSmall(b)),
        Distance::Finite(b) => rational::ratio(2, b as i64),
        Distance::Infinite => Rational::zero(),
    };
    let y = (0..inst.edge_count()).map(|e| if inst.is_cut(e) { Rational::one() } else { off_cut.clone() }).collect();
    let z = inst.sessions.iter().map(|s| rational::from_u64(s.sinks.len() as u64)).collect();
    DualCertificate::new(y, z)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeViolation {
    pub tree: usize,
    pub session: usize,
    #[serde(with = "crate::rational")]
    pub weight: Rational,
    #[serde(with = "crate::rational")]
    pub required: Rational,
}

/// Checks `sum_{e in T} y_e >= z_i` on each supplied `(session, tree edges)`.
pub fn check_dual_on_trees(
    inst: &GapInstance,
    cert: &DualCertificate,
    trees: &[(usize, Vec<usize>)],
) -> Result<Vec<TreeViolation>, InstanceError> {
    let mut violations = Vec::new();
    for (index, (session, tree)) in trees.iter().enumerate() {
        let bad = |reason: String| InstanceError::BadTree { index, reason };
        let s = inst.sessions.get(*session).ok_or_else(|| bad(format!("no session {session}")))?;
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<u32, u32>, v: u32) -> u32 {
            let p = *parent.entry(v).or_insert(v);
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for &e in tree {
            let &(u, v) = inst.edges.get(e).ok_or_else(|| bad(format!("edge {e} out of range")))?;
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(bad("edges contain a cycle".into()));
            }
            parent.insert(ru, rv);
        }
        let terminals: Vec<u32> = std::iter::once(s.source).chain(s.sinks.iter().copied()).collect();
        if terminals.len() > 1 {
            let root = find(&mut parent, s.source);
            if tree.is_empty() || terminals.iter().any(|&t| find(&mut parent, t) != root) {
                return Err(bad("does not span the session's terminals".into()));
            }
            let vertices: Vec<u32> = parent.keys().copied().collect();
            if vertices.iter().any(|&v| find(&mut parent, v) != root) {
                return Err(bad("edges are not connected".into()));
            }
        }
        let weight: Rational = tree.iter().map(|&e| &cert.y[e]).sum();
        if weight < cert.z[*session] {
            violations.push(TreeViolation {
                tree: index,
                session: *session,
                weight,
                required: cert.z[*session].clone(),
            });
        }
    }
    Ok(violations)
}
