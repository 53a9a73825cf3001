//! Random-graph laboratory: exhaustive counting of friendly equipartitions
//! at tiny sizes, Monte Carlo estimation, and a greedy swap search.
//!
//! An equipartition splits the vertices into parts whose sizes differ by at
//! most one; it is H-friendly when every vertex has at least `H` more
//! neighbors in its own part than in the other. Counts are over ordered
//! pairs `(A1, A2)`, so every unordered split contributes twice.

use thiserror::Error;

use crate::rng::{self, SplitMix64};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{what} too large: {value} exceeds {cap}")]
    TooLarge { what: &'static str, value: u64, cap: u64 },
    #[error("bad hex adjacency: {0}")]
    BadHex(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Labeled graph with an ordered equipartition and per-vertex margins
/// `deg(v, own part) - deg(v, other part)`.
#[derive(Debug, Clone)]
pub struct BisectionState {
    pub n2: usize,
    words: usize,
    adjacency: Vec<u64>, // row-major bit matrix, `words` u64 per row
    pub part_of: Vec<u8>, // 1 or 2
    pub margins: Vec<i32>,
}

impl BisectionState {
    pub fn empty(n2: usize) -> BisectionState {
        let words = n2.div_ceil(64);
        let mut s = BisectionState {
            n2,
            words,
            adjacency: vec![0; words * n2],
            part_of: default_partition(n2),
            margins: vec![0; n2],
        };
        s.recompute_margins();
        s
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.adjacency[i * self.words + j / 64] |= 1 << (j % 64);
        self.adjacency[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.row(v).iter().map(|w| w.count_ones()).sum()
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = (0..self.n2).map(|v| self.degree(v) as u64).sum();
        total / 2
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adjacency[v * self.words..(v + 1) * self.words]
    }

    /// Number of neighbors of `v` inside the vertex set given by `mask`.
    fn neighbors_in(&self, v: usize, mask: &[u64]) -> u32 {
        self.row(v).iter().zip(mask).map(|(r, m)| (r & m).count_ones()).sum()
    }

    /// Margins from scratch for the current partition.
    pub fn recompute_margins(&mut self) {
        let mask = partition_mask(&self.part_of, self.words);
        for v in 0..self.n2 {
            let own = self.neighbors_in(v, &mask[self.part_of[v] as usize - 1]);
            let deg = self.degree(v);
            self.margins[v] = 2 * own as i32 - deg as i32;
        }
    }

    pub fn min_margin(&self) -> i32 {
        self.margins.iter().copied().min().unwrap_or(0)
    }

    /// Swap the parts of `u` and `v` (which must lie in different parts),
    /// updating all margins incrementally.
    pub fn swap(&mut self, u: usize, v: usize) {
        debug_assert_ne!(self.part_of[u], self.part_of[v]);
        let adj_uv = self.has_edge(u, v) as i32;
        for w in 0..self.n2 {
            if w == u || w == v {
                continue;
            }
            let tu = self.has_edge(w, u) as i32;
            let tv = self.has_edge(w, v) as i32;
            // u leaves w's side or joins it; v the opposite
            let delta = if self.part_of[w] == self.part_of[u] {
                2 * (tv - tu)
            } else {
                2 * (tu - tv)
            };
            self.margins[w] += delta;
        }
        self.margins[u] = -self.margins[u] - 2 * adj_uv;
        self.margins[v] = -self.margins[v] - 2 * adj_uv;
        self.part_of.swap(u, v);
    }

    /// Graph with the same partition and complemented edges.
    pub fn complement(&self) -> BisectionState {
        let mut c = BisectionState::empty(self.n2);
        for i in 0..self.n2 {
            for j in (i + 1)..self.n2 {
                if !self.has_edge(i, j) {
                    c.set_edge(i, j);
                }
            }
        }
        c.part_of = self.part_of.clone();
        c.recompute_margins();
        c
    }

    /// Graph with vertices relabeled by `perm` (vertex `v` becomes
    /// `perm[v]`), keeping the canonical partition.
    pub fn relabel(&self, perm: &[usize]) -> BisectionState {
        let mut out = BisectionState::empty(self.n2);
        for i in 0..self.n2 {
            for j in (i + 1)..self.n2 {
                if self.has_edge(i, j) {
                    out.set_edge(perm[i], perm[j]);
                }
            }
        }
        out.recompute_margins();
        out
    }

    /// Lower-triangular adjacency bits, hex encoded.
    pub fn to_hex(&self) -> String {
        let bits = self.n2 * (self.n2 - 1) / 2;
        let mut bytes = vec![0u8; bits.div_ceil(8)];
        let mut b = 0usize;
        for i in 1..self.n2 {
            for j in 0..i {
                if self.has_edge(i, j) {
                    bytes[b / 8] |= 1 << (b % 8);
                }
                b += 1;
            }
        }
        bytes.iter().map(|x| format!("{x:02x}")).collect()
    }

    pub fn from_hex(n2: usize, hex: &str) -> Result<BisectionState> {
        let bits = n2 * (n2 - 1) / 2;
        let need = bits.div_ceil(8);
        if hex.len() != 2 * need {
            return Err(GraphError::BadHex(format!(
                "expected {} hex chars for n2 = {n2}, got {}",
                2 * need,
                hex.len()
            )));
        }
        let mut bytes = Vec::with_capacity(need);
        for i in 0..need {
            let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|e| GraphError::BadHex(e.to_string()))?;
            bytes.push(byte);
        }
        let mut s = BisectionState::empty(n2);
        let mut b = 0usize;
        for i in 1..n2 {
            for j in 0..i {
                if bytes[b / 8] >> (b % 8) & 1 == 1 {
                    s.set_edge(i, j);
                }
                b += 1;
            }
        }
        s.recompute_margins();
        Ok(s)
    }
}

fn default_partition(n2: usize) -> Vec<u8> {
    (0..n2).map(|v| if v < n2 / 2 { 1 } else { 2 }).collect()
}

fn partition_mask(part_of: &[u8], words: usize) -> [Vec<u64>; 2] {
    let mut masks = [vec![0u64; words], vec![0u64; words]];
    for (v, p) in part_of.iter().enumerate() {
        masks[*p as usize - 1][v / 64] |= 1 << (v % 64);
    }
    masks
}

/// Graph on `n2` vertices with each edge present independently with
/// probability 1/2, driven by the counter-based generator: edge `e` (in
/// lower-triangular order) is present iff the top bit of `at(seed, e)` is
/// set. Reproducible per seed, parallel-safe.
pub fn sample_gnp_half(n2: usize, seed: u64) -> BisectionState {
    let mut s = BisectionState::empty(n2);
    let mut e = 0u64;
    for i in 1..n2 {
        for j in 0..i {
            if rng::at(seed, e) >> 63 == 1 {
                s.set_edge(i, j);
            }
            e += 1;
        }
    }
    s.recompute_margins();
    s
}

pub const EXHAUSTIVE_VERTEX_CAP: usize = 12;

/// Visit every ordered equipartition as a bitmask for the first part; for
/// odd n2 both floor and ceil sizes are enumerated.
pub fn for_each_equipartition(n2: usize, mut visit: impl FnMut(u64)) {
    debug_assert!(n2 <= EXHAUSTIVE_VERTEX_CAP);
    let sizes: &[usize] =
        if n2.is_multiple_of(2) { &[n2 / 2] } else { &[n2 / 2, n2 / 2 + 1] };
    for &k in sizes {
        // Gosper's hack over k-subsets of n2 bits
        if k == 0 {
            visit(0);
            continue;
        }
        let mut mask: u64 = (1 << k) - 1;
        let limit: u64 = 1 << n2;
        while mask < limit {
            visit(mask);
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
}

/// Minimum margin of the bisection `(mask, complement)` on the graph.
pub fn min_margin_for(state: &BisectionState, mask: u64) -> i32 {
    let mut min = i32::MAX;
    for v in 0..state.n2 {
        let row = state.row(v)[0]; // n2 <= 12 fits one word
        let own_mask = if mask >> v & 1 == 1 { mask } else { !mask };
        let own = (row & own_mask).count_ones() as i32;
        let deg = row.count_ones() as i32;
        min = min.min(2 * own - deg);
    }
    min
}

/// Exact number of ordered H-friendly equipartitions of the graph.
pub fn count_friendly_exhaustive(state: &BisectionState, h: i32) -> Result<u64> {
    if state.n2 > EXHAUSTIVE_VERTEX_CAP {
        return Err(GraphError::TooLarge {
            what: "vertex count",
            value: state.n2 as u64,
            cap: EXHAUSTIVE_VERTEX_CAP as u64,
        });
    }
    let mut count = 0u64;
    for_each_equipartition(state.n2, |mask| {
        if min_margin_for(state, mask) >= h {
            count += 1;
        }
    });
    Ok(count)
}

#[derive(Debug, Clone, Copy)]
pub enum MomentMode {
    /// Average over every graph on `n2` vertices (needs `C(n2,2) <= 16`).
    ExhaustiveGraphs,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct EmpiricalMoment {
    pub mean: f64,
    pub stderr: f64,
    /// Exhaustive mode: exact numerator over `2^edge_bits`.
    pub exact: Option<(u64, u32)>,
}

/// Empirical expectation of the number of ordered H-friendly
/// equipartitions of a uniform random graph.
pub fn empirical_first_moment(n2: usize, h: i32, mode: MomentMode) -> Result<EmpiricalMoment> {
    let edges = (n2 * (n2 - 1) / 2) as u32;
    match mode {
        MomentMode::ExhaustiveGraphs => {
            if edges > 16 {
                return Err(GraphError::TooLarge {
                    what: "edge bits",
                    value: edges as u64,
                    cap: 16,
                });
            }
            let mut total = 0u64;
            for g in 0..(1u64 << edges) {
                let mut s = BisectionState::empty(n2);
                let mut b = 0;
                for i in 1..n2 {
                    for j in 0..i {
                        if g >> b & 1 == 1 {
                            s.set_edge(i, j);
                        }
                        b += 1;
                    }
                }
                total += count_friendly_exhaustive(&s, h)?;
            }
            Ok(EmpiricalMoment {
                mean: total as f64 / (1u64 << edges) as f64,
                stderr: 0.0,
                exact: Some((total, edges)),
            })
        }
        MomentMode::MonteCarlo { samples, seed } => {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in 0..samples {
                let g = sample_gnp_half(n2, seed.wrapping_add(i));
                let x = count_friendly_exhaustive(&g, h)? as f64;
                sum += x;
                sumsq += x * x;
            }
            let mean = sum / samples as f64;
            let var = (sumsq / samples as f64 - mean * mean).max(0.0);
            Ok(EmpiricalMoment {
                mean,
                stderr: (var / samples as f64).sqrt(),
                exact: None,
            })
        }
    }
}

/// Greedy pair-swap search for a partition maximizing the minimum margin.
/// Each step swaps the pair that most increases the minimum margin,
/// breaking plateau ties by shrinking the set of vertices attaining it
/// (candidate pairs touch a current minimum vertex); stops at a local
/// optimum of that lexicographic objective, with a step cap for the
/// plateau phase. Returns the best minimum margin over restarts.
pub fn local_search_max_margin(
    state: &BisectionState,
    restarts: usize,
    seed: u64,
) -> (i32, Vec<u8>) {
    let mut best_h = i32::MIN;
    let mut best_part = state.part_of.clone();
    let mut rng = SplitMix64::new(seed);
    for restart in 0..restarts.max(1) {
        let mut s = state.clone();
        if restart > 0 {
            s.part_of = random_partition(state.n2, &mut rng);
            s.recompute_margins();
        }
        let mut steps = 0usize;
        let step_cap = 16 * state.n2 + 64;
        // exact greedy over all pairs at small sizes; at scale, restrict
        // candidates to pairs touching a current minimum vertex
        let exhaustive_pairs = state.n2 <= 64;
        loop {
            let cur = score(&s);
            let firsts: Vec<usize> = if exhaustive_pairs {
                (0..s.n2).filter(|&v| s.part_of[v] == 1).collect()
            } else {
                (0..s.n2).filter(|&v| s.margins[v] == cur.0).take(16).collect()
            };
            let mut best_swap: Option<((i32, i32), usize, usize)> = None;
            for &u in &firsts {
                for v in 0..s.n2 {
                    if s.part_of[v] == s.part_of[u] {
                        continue;
                    }
                    // swap is an involution on the incremental margins, so
                    // trial moves cost no allocation
                    s.swap(u, v);
                    let m = score(&s);
                    s.swap(u, v);
                    if m > cur && best_swap.map(|(b, _, _)| m > b).unwrap_or(true) {
                        best_swap = Some((m, u, v));
                    }
                }
            }
            steps += 1;
            match best_swap {
                Some((_, u, v)) if steps <= step_cap => s.swap(u, v),
                _ => break,
            }
        }
        let h = s.min_margin();
        if h > best_h {
            best_h = h;
            best_part = s.part_of.clone();
        }
    }
    (best_h, best_part)
}

/// Lexicographic objective: minimum margin first, then fewer vertices
/// attaining it.
fn score(s: &BisectionState) -> (i32, i32) {
    let mut min = i32::MAX;
    let mut count = 0i32;
    for &m in &s.margins {
        match m.cmp(&min) {
            std::cmp::Ordering::Less => {
                min = m;
                count = 1;
            }
            std::cmp::Ordering::Equal => count += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    (min, -count)
}

fn random_partition(n2: usize, rng: &mut SplitMix64) -> Vec<u8> {
    // random balanced assignment by shuffling indices
    let mut idx: Vec<usize> = (0..n2).collect();
    for i in (1..n2).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        idx.swap(i, j);
    }
    let mut part = vec![2u8; n2];
    for v in idx.iter().take(n2 / 2) {
        part[*v] = 1;
    }
    part
}

/// CSV rows `(seed, n2, H, count_or_best)` for simulation outputs.
pub fn simulation_csv(rows: &[(u64, usize, i32, f64)]) -> String {
    let mut out = String::from("seed,n2,H,value\n");
    for (seed, n2, h, value) in rows {
        out.push_str(&format!("{seed},{n2},{h},{value}\n"));
    }
    out
}
