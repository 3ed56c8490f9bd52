//! Steiner trees in small graphs: exhaustive enumeration of minimal trees and
//! Dreyfus-Wagner minimum-weight trees.

use std::ops::Add;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteinerError {
    #[error("more than {0} Steiner trees")]
    TooManyTrees(usize),
    #[error("search exceeded {0} steps")]
    SearchBudget(u64),
    #[error("{0} terminals exceed the oracle limit of {MAX_ORACLE_TERMINALS}")]
    TooManyTerminals(usize),
    #[error("terminal {0} out of range")]
    BadTerminal(u32),
}

/// Largest terminal count for [`min_steiner_tree`].
pub const MAX_ORACLE_TERMINALS: usize = 14;
/// Search steps allowed per requested tree, and the floor and ceiling on the total.
const STEPS_PER_TREE: u64 = 200;
const MIN_SEARCH_BUDGET: u64 = 100_000;
const SEARCH_BUDGET: u64 = 20_000_000;

fn dedup_terminals(n: usize, terminals: &[u32]) -> Result<Vec<u32>, SteinerError> {
    let mut t = terminals.to_vec();
    t.sort_unstable();
    t.dedup();
    if let Some(&bad) = t.iter().find(|&&v| v as usize >= n) {
        return Err(SteinerError::BadTerminal(bad));
    }
    Ok(t)
}

struct Enumerator<'a> {
    edges: &'a [(u32, u32)],
    incident: Vec<Vec<usize>>,
    is_terminal: Vec<bool>,
    terminals: Vec<u32>,
    in_tree: Vec<bool>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    out: Vec<Vec<usize>>,
    limit: usize,
    steps: u64,
    budget: u64,
}

impl Enumerator<'_> {
    /// Terminals outside the tree are still reachable through non-excluded edges.
    fn terminals_reachable(&self) -> bool {
        let n = self.in_tree.len();
        let mut seen = self.in_tree.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&v| self.in_tree[v as usize]).collect();
        while let Some(x) = stack.pop() {
            for &e in &self.incident[x as usize] {
                if self.excluded[e] {
                    continue;
                }
                let (a, b) = self.edges[e];
                let y = if a == x { b } else { a };
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        self.terminals.iter().all(|&t| seen[t as usize])
    }

    /// Some non-terminal leaf has no edge left to grow through.
    fn dead_leaf(&self) -> bool {
        let mut degree = std::collections::HashMap::new();
        for &e in &self.chosen {
            let (a, b) = self.edges[e];
            *degree.entry(a).or_insert(0u32) += 1;
            *degree.entry(b).or_insert(0u32) += 1;
        }
        degree.iter().any(|(&v, &d)| {
            d == 1
                && !self.is_terminal[v as usize]
                && !self.incident[v as usize].iter().any(|&e| {
                    let (x, y) = self.edges[e];
                    !self.excluded[e] && self.in_tree[x as usize] != self.in_tree[y as usize]
                })
        })
    }

    fn candidate(&self) -> Option<usize> {
        self.chosen
            .iter()
            .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
            .chain(std::iter::once(self.terminals[0]))
            .flat_map(|v| self.incident[v as usize].iter().copied())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                !self.excluded[e] && self.in_tree[a as usize] != self.in_tree[b as usize]
            })
            .min()
    }

    fn emit(&mut self) -> Result<(), SteinerError> {
        if !self.terminals.iter().all(|&t| self.in_tree[t as usize]) {
            return Ok(());
        }
        let mut degree = std::collections::HashMap::new();
        for &e in &self.chosen {
            let (a, b) = self.edges[e];
            *degree.entry(a).or_insert(0) += 1;
            *degree.entry(b).or_insert(0) += 1;
        }
        if degree.iter().any(|(&v, &d)| d == 1 && !self.is_terminal[v as usize]) {
            return Ok(());
        }
        if self.out.len() == self.limit {
            return Err(SteinerError::TooManyTrees(self.limit));
        }
        let mut tree = self.chosen.clone();
        tree.sort_unstable();
        self.out.push(tree);
        Ok(())
    }

    fn search(&mut self) -> Result<(), SteinerError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(SteinerError::SearchBudget(self.budget));
        }
        if !self.terminals_reachable() || self.dead_leaf() {
            return Ok(());
        }
        // Any further edge would add a non-terminal leaf.
        if self.terminals.iter().all(|&t| self.in_tree[t as usize]) {
            return self.emit();
        }
        let Some(e) = self.candidate() else {
            return self.emit();
        };
        let (a, b) = self.edges[e];
        let new = if self.in_tree[a as usize] { b } else { a };
        self.in_tree[new as usize] = true;
        self.chosen.push(e);
        self.search()?;
        self.chosen.pop();
        self.in_tree[new as usize] = false;

        self.excluded[e] = true;
        self.search()?;
        self.excluded[e] = false;
        Ok(())
    }
}

/// Every tree whose leaves are all terminals and which contains all
/// terminals, as sorted edge-index lists. A single terminal yields the empty tree.
pub fn enumerate_steiner_trees(
    n: usize,
    edges: &[(u32, u32)],
    terminals: &[u32],
    limit: usize,
) -> Result<Vec<Vec<usize>>, SteinerError> {
    let terminals = dedup_terminals(n, terminals)?;
    if terminals.len() <= 1 {
        return Ok(vec![Vec::new()]);
    }
    let mut incident = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u != v {
            incident[u as usize].push(e);
            incident[v as usize].push(e);
        }
    }
    let mut is_terminal = vec![false; n];
    for &t in &terminals {
        is_terminal[t as usize] = true;
    }
    let mut in_tree = vec![false; n];
    in_tree[terminals[0] as usize] = true;
    let mut en = Enumerator {
        edges,
        incident,
        is_terminal,
        terminals,
        in_tree,
        excluded: vec![false; edges.len()],
        chosen: Vec::new(),
        out: Vec::new(),
        limit,
        steps: 0,
        budget: (limit as u64).saturating_mul(STEPS_PER_TREE).clamp(MIN_SEARCH_BUDGET, SEARCH_BUDGET),
    };
    en.search()?;
    let mut out = en.out;
    out.sort();
    Ok(out)
}

/// Nonnegative edge weights the Dreyfus-Wagner oracle can add and compare.
pub trait Weight: Clone + PartialOrd + for<'a> Add<&'a Self, Output = Self> {
    fn zero() -> Self;
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Weight for u128 {
    fn zero() -> Self {
        0
    }
}

impl Weight for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
}

#[derive(Clone, Copy)]
enum Back {
    None,
    Base,
    Merge(usize),
    Edge(usize, u32),
}

/// Minimum-weight tree spanning `terminals`, or `None` if they are disconnected.
/// Runs in `O(3^t n + 2^t n^2)` for `t` terminals.
pub fn min_steiner_tree<W: Weight>(
    n: usize,
    edges: &[(u32, u32)],
    weights: &[W],
    terminals: &[u32],
) -> Result<Option<(W, Vec<usize>)>, SteinerError> {
    let terminals = dedup_terminals(n, terminals)?;
    if terminals.len() <= 1 {
        return Ok(Some((W::zero(), Vec::new())));
    }
    if terminals.len() > MAX_ORACLE_TERMINALS {
        return Err(SteinerError::TooManyTerminals(terminals.len()));
    }
    let mut incident = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u != v {
            incident[u as usize].push(e);
            incident[v as usize].push(e);
        }
    }
    let root = terminals[0];
    let rest = &terminals[1..];
    let full = (1usize << rest.len()) - 1;
    let mut dp: Vec<Vec<Option<W>>> = vec![vec![None; n]; full + 1];
    let mut back = vec![vec![Back::None; n]; full + 1];

    for s in 1..=full {
        if s.is_power_of_two() {
            let t = rest[s.trailing_zeros() as usize] as usize;
            dp[s][t] = Some(W::zero());
            back[s][t] = Back::Base;
        } else {
            let low = s & s.wrapping_neg();
            let mut s1 = (s - 1) & s;
            while s1 > 0 {
                if s1 & low != 0 {
                    for v in 0..n {
                        if let (Some(a), Some(b)) = (&dp[s1][v], &dp[s ^ s1][v]) {
                            let c = a.clone() + b;
                            if dp[s][v].as_ref().is_none_or(|cur| c < *cur) {
                                dp[s][v] = Some(c);
                                back[s][v] = Back::Merge(s1);
                            }
                        }
                    }
                }
                s1 = (s1 - 1) & s;
            }
        }
        // Dijkstra over the current labels.
        let mut settled = vec![false; n];
        loop {
            let mut best: Option<usize> = None;
            for v in 0..n {
                if settled[v] || dp[s][v].is_none() {
                    continue;
                }
                if best.is_none_or(|b| dp[s][v] < dp[s][b]) {
                    best = Some(v);
                }
            }
            let Some(v) = best else { break };
            settled[v] = true;
            let dv = dp[s][v].clone().expect("label is set");
            for &e in &incident[v] {
                let (a, b) = edges[e];
                let u = if a as usize == v { b as usize } else { a as usize };
                if settled[u] {
                    continue;
                }
                let c = dv.clone() + &weights[e];
                if dp[s][u].as_ref().is_none_or(|cur| c < *cur) {
                    dp[s][u] = Some(c);
                    back[s][u] = Back::Edge(e, v as u32);
                }
            }
        }
    }
    if dp[full][root as usize].is_none() {
        return Ok(None);
    }
    let mut chosen = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((s, v)) = stack.pop() {
        match back[s][v as usize] {
            Back::None | Back::Base => {}
            Back::Merge(s1) => {
                stack.push((s1, v));
                stack.push((s ^ s1, v));
            }
            Back::Edge(e, u) => {
                chosen.push(e);
                stack.push((s, u));
            }
        }
    }
    let tree = clean_tree(n, edges, chosen, &terminals);
    let weight = tree.iter().fold(W::zero(), |acc, &e| acc + &weights[e]);
    Ok(Some((weight, tree)))
}

/// Spanning forest of the edge union with non-terminal leaves stripped.
fn clean_tree(n: usize, edges: &[(u32, u32)], mut chosen: Vec<usize>, terminals: &[u32]) -> Vec<usize> {
    chosen.sort_unstable();
    chosen.dedup();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    chosen.retain(|&e| {
        let (a, b) = edges[e];
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra == rb {
            false
        } else {
            parent[ra] = rb;
            true
        }
    });
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        is_terminal[t as usize] = true;
    }
    loop {
        let mut degree = vec![0u32; n];
        for &e in &chosen {
            degree[edges[e].0 as usize] += 1;
            degree[edges[e].1 as usize] += 1;
        }
        let before = chosen.len();
        chosen.retain(|&e| {
            let (a, b) = edges[e];
            !((degree[a as usize] == 1 && !is_terminal[a as usize])
                || (degree[b as usize] == 1 && !is_terminal[b as usize]))
        });
        if chosen.len() == before {
            return chosen;
        }
    }
}
