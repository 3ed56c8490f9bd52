//! Compact adjacency and breadth-first search for large sparse graphs.

use std::collections::VecDeque;

/// Compressed adjacency of an undirected graph, optionally with some edges removed.
#[derive(Clone, Debug)]
pub struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    /// Adjacency over `edges` keeping only those with `keep(index)`.
    pub fn new(n: usize, edges: &[(u32, u32)], keep: impl Fn(usize) -> bool) -> Self {
        let mut degree = vec![0u32; n + 1];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if keep(e) {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n] as usize];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if keep(e) {
                targets[fill[u as usize] as usize] = v;
                fill[u as usize] += 1;
                targets[fill[v as usize] as usize] = u;
                fill[v as usize] += 1;
            }
        }
        Csr { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }
}

/// Reusable BFS state; visited marks are reset in O(1) by bumping an epoch.
#[derive(Clone, Debug)]
pub struct Bfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    owner: Vec<u32>,
    epoch: u32,
    queue: VecDeque<u32>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs { stamp: vec![0; n], dist: vec![0; n], owner: vec![0; n], epoch: 0, queue: VecDeque::new() }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    fn seen(&self, v: u32) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    fn mark(&mut self, v: u32, d: u32, owner: u32) {
        self.stamp[v as usize] = self.epoch;
        self.dist[v as usize] = d;
        self.owner[v as usize] = owner;
    }

    /// Calls `visit(v, dist)` for every vertex within `max_depth` of `source`, source included.
    pub fn bounded(&mut self, g: &Csr, source: u32, max_depth: u32, mut visit: impl FnMut(u32, u32)) {
        self.next_epoch();
        self.mark(source, 0, 0);
        self.queue.push_back(source);
        while let Some(x) = self.queue.pop_front() {
            let dx = self.dist[x as usize];
            visit(x, dx);
            if dx == max_depth {
                continue;
            }
            for &y in g.neighbors(x) {
                if !self.seen(y) {
                    self.mark(y, dx + 1, 0);
                    self.queue.push_back(y);
                }
            }
        }
    }

    /// Marks everything reachable from `sources`; query with [`Bfs::reached`].
    pub fn reach(&mut self, g: &Csr, sources: &[u32]) {
        self.next_epoch();
        for &s in sources {
            if !self.seen(s) {
                self.mark(s, 0, 0);
                self.queue.push_back(s);
            }
        }
        while let Some(x) = self.queue.pop_front() {
            for &y in g.neighbors(x) {
                if !self.seen(y) {
                    self.mark(y, 0, 0);
                    self.queue.push_back(y);
                }
            }
        }
    }

    pub fn reached(&self, v: u32) -> bool {
        self.seen(v)
    }

    /// Minimum distance between two distinct members of `set`, or `None` if no
    /// two members are connected.
    ///
    /// Grows all members' balls together and inspects edges where two balls
    /// meet; stops once the current radius can no longer beat the best pair.
    pub fn min_pairwise(&mut self, g: &Csr, set: &[u32]) -> Option<u64> {
        self.next_epoch();
        let mut best = u64::MAX;
        for (idx, &s) in set.iter().enumerate() {
            if self.seen(s) {
                return Some(0);
            }
            self.mark(s, 0, idx as u32);
            self.queue.push_back(s);
        }
        while let Some(x) = self.queue.pop_front() {
            let dx = self.dist[x as usize] as u64;
            if 2 * dx >= best {
                break;
            }
            let ox = self.owner[x as usize];
            for &y in g.neighbors(x) {
                if self.seen(y) {
                    if self.owner[y as usize] != ox {
                        best = best.min(dx + self.dist[y as usize] as u64 + 1);
                    }
                } else {
                    self.mark(y, dx as u32 + 1, ox);
                    self.queue.push_back(y);
                }
            }
        }
        (best != u64::MAX).then_some(best)
    }
}
