//! Finite simple graphs on dense vertex indices `0..n`, the named families
//! used as fixtures, and graph-level constructions.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{eig_sym, SymMatrix};
use crate::{Error, Result};

/// A finite simple graph. Equality is labeled equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    // sorted, each pair stored once with i < j
    edges: Vec<(usize, usize)>,
}

/// Row-major flattening of a vertex `(g, h)` of `G x H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductIndex {
    pub g_index: usize,
    pub h_index: usize,
    pub flat: usize,
}

impl ProductIndex {
    pub fn new(g_index: usize, h_index: usize, h_order: usize) -> Self {
        Self {
            g_index,
            h_index,
            flat: g_index * h_order + h_index,
        }
    }

    pub fn from_flat(flat: usize, h_order: usize) -> Self {
        Self {
            g_index: flat / h_order,
            h_index: flat % h_order,
            flat,
        }
    }
}

impl Graph {
    /// Builds a graph from an edge list. Pairs are unordered; repeated pairs
    /// collapse to one edge. Loops and out-of-range indices are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::param(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            if i == j {
                return Err(Error::param(format!("loop at vertex {i}")));
            }
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        Ok(Self::from_adjacency(n, adj))
    }

    fn from_adjacency(n: usize, adj: Vec<bool>) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if adj[i * n + j] {
                    edges.push((i, j));
                }
            }
        }
        Self { n, adj, edges }
    }

    fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = vec![false; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if f(i, j) {
                    adj[i * n + j] = true;
                    adj[j * n + i] = true;
                }
            }
        }
        Self::from_adjacency(n, adj)
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
            edges: Vec::new(),
        }
    }

    pub fn complete(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("complete graph needs at least one vertex"));
        }
        Ok(Self::from_fn(m, |_, _| true))
    }

    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::param("cycle needs at least three vertices"));
        }
        Self::new(m, (0..m).map(|i| (i, (i + 1) % m)))
    }

    pub fn path(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("path needs at least one vertex"));
        }
        Self::new(m, (1..m).map(|i| (i - 1, i)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_fn(a + b, |i, j| (i < a) != (j < a))
    }

    /// The `d`-dimensional hypercube `Q_d`.
    pub fn hypercube(d: usize) -> Result<Self> {
        if d > 16 {
            return Err(Error::param("hypercube dimension above 16"));
        }
        Ok(Self::from_fn(1 << d, |i, j| (i ^ j).count_ones() == 1))
    }

    /// Kneser graph `K_{n:r}`: the `r`-subsets of an `n`-set, adjacent when
    /// disjoint. Subsets are ordered lexicographically.
    pub fn kneser(n: usize, r: usize) -> Result<Self> {
        if r == 0 || n < 2 * r {
            return Err(Error::param("kneser graph requires r >= 1 and n >= 2r"));
        }
        if n > 30 {
            return Err(Error::param("kneser graph ground set above 30"));
        }
        let subsets = combinations(n, r);
        Ok(Self::from_fn(subsets.len(), |i, j| subsets[i] & subsets[j] == 0))
    }

    /// Even-weight binary strings of length `n`, adjacent at Hamming
    /// distance exactly `k`. Vertices are ordered by their integer value.
    pub fn hamming_h(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k % 2 != 0 {
            return Err(Error::param("hamming_h requires a positive even distance"));
        }
        if n == 0 || n > 20 {
            return Err(Error::param("hamming_h requires 1 <= n <= 20"));
        }
        let words: Vec<u32> = (0u32..(1 << n)).filter(|w| w.count_ones() % 2 == 0).collect();
        Ok(Self::from_fn(words.len(), |i, j| {
            (words[i] ^ words[j]).count_ones() as usize == k
        }))
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(i, j)| (i + off, j + off)));
        Graph::new(self.n + other.n, edges).expect("union of valid graphs")
    }

    /// Adds one new vertex adjacent to `anchor`.
    pub fn with_pendant(&self, anchor: usize) -> Result<Graph> {
        if anchor >= self.n {
            return Err(Error::param("pendant anchor out of range"));
        }
        let edges = self.edges.iter().copied().chain([(anchor, self.n)]);
        Graph::new(self.n + 1, edges)
    }

    /// Adds edges to a copy of this graph.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().copied().chain(extra))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adj[i * self.n + j])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// True when the graph has no edges.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn adjacency_matrix(&self) -> SymMatrix {
        let mut a = SymMatrix::zeros(self.n);
        for &(i, j) in &self.edges {
            a.set(i, j, 1.0);
        }
        a
    }

    pub fn complement(&self) -> Graph {
        Graph::from_fn(self.n, |i, j| !self.has_edge(i, j))
    }

    /// The spanning subgraph keeping only the given edges (which must be
    /// edges of `self`).
    pub fn spanning_subgraph(&self, keep: &[(usize, usize)]) -> Result<Graph> {
        for &(i, j) in keep {
            if !self.has_edge(i, j) {
                return Err(Error::param(format!("({i}, {j}) is not an edge")));
            }
        }
        Graph::new(self.n, keep.iter().copied())
    }

    /// The subgraph induced on `vertices`, relabelled `0..vertices.len()` in
    /// the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |a, b| self.has_edge(vertices[a], vertices[b]))
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    /// Isolated vertices are singleton components.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.degree(i) == 0).collect()
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of colors used by first-fit greedy coloring in index order; an
    /// upper bound on the chromatic number.
    pub fn greedy_color_count(&self) -> usize {
        let mut color = vec![usize::MAX; self.n];
        let mut used = 0;
        for v in 0..self.n {
            let mut taken = vec![false; self.n + 1];
            for u in self.neighbors(v) {
                if color[u] != usize::MAX {
                    taken[color[u]] = true;
                }
            }
            let c = taken.iter().position(|t| !t).unwrap_or(0);
            color[v] = c;
            used = used.max(c + 1);
        }
        used
    }

    /// True iff `A^k o I` and `A^k o A` are scalar multiples of `I` and `A`
    /// for every `k` in `0..=max_power`. The default power bound is the
    /// number of distinct adjacency eigenvalues.
    ///
    /// Walk counts are compared exactly: they are reduced modulo enough
    /// 62-bit primes that their product exceeds every walk count involved,
    /// so two counts agree modulo all primes only if they are equal.
    pub fn is_one_walk_regular(&self, max_power: Option<usize>) -> bool {
        let n = self.n;
        if n == 0 {
            return true;
        }
        let max_power = max_power.unwrap_or_else(|| self.distinct_eigenvalue_count());
        let delta = self.max_degree().max(2) as f64;
        let bits = max_power as f64 * libm::log2(delta) + 2.0;
        let prime_count = (libm::ceil(bits / 61.0) as usize).max(1);
        let primes = primes_above(1u64 << 61, prime_count);
        let neighbors: Vec<Vec<usize>> = (0..n).map(|i| self.neighbors(i).collect()).collect();

        for &p in &primes {
            // A^0 = I
            let mut power = vec![0u64; n * n];
            for i in 0..n {
                power[i * n + i] = 1;
            }
            for k in 0..=max_power {
                if !self.schur_conditions_hold(&power) {
                    return false;
                }
                if k == max_power {
                    break;
                }
                let mut next = vec![0u64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0u64;
                        for &l in &neighbors[j] {
                            acc = add_mod(acc, power[i * n + l], p);
                        }
                        next[i * n + j] = acc;
                    }
                }
                power = next;
            }
        }
        true
    }

    fn schur_conditions_hold(&self, power: &[u64]) -> bool {
        let n = self.n;
        let diag = power[0];
        if (0..n).any(|i| power[i * n + i] != diag) {
            return false;
        }
        match self.edges.first() {
            None => true,
            Some(&(a, b)) => {
                let on_edge = power[a * n + b];
                self.edges
                    .iter()
                    .all(|&(i, j)| power[i * n + j] == on_edge && power[j * n + i] == on_edge)
            }
        }
    }

    /// Distinct adjacency eigenvalues, clustered at `1e-7`.
    pub fn distinct_eigenvalue_count(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let spec = eig_sym(&self.adjacency_matrix()).expect("adjacency matrices are finite");
        let mut count = 1;
        for w in spec.eigenvalues.windows(2) {
            if w[0] - w[1] > 1e-7 {
                count += 1;
            }
        }
        count
    }
}

/// Categorical (tensor) product `G x H`: `(i, l) ~ (j, k)` iff `i ~ j` and
/// `l ~ k`. Vertices are flattened row-major as in [`ProductIndex`].
pub fn categorical_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.order();
    let n = g.order() * nh;
    let mut adj = vec![false; n * n];
    for &(i, j) in g.edges() {
        for &(l, k) in h.edges() {
            for (a, b) in [
                (ProductIndex::new(i, l, nh), ProductIndex::new(j, k, nh)),
                (ProductIndex::new(i, k, nh), ProductIndex::new(j, l, nh)),
            ] {
                adj[a.flat * n + b.flat] = true;
                adj[b.flat * n + a.flat] = true;
            }
        }
    }
    Graph::from_adjacency(n, adj)
}

fn combinations(n: usize, r: usize) -> Vec<u32> {
    fn extend(from: usize, n: usize, left: usize, mask: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in from..=n - left {
            extend(i + 1, n, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    extend(0, n, r, 0, &mut out);
    out
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn primes_above(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = start | 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3_pendant() -> Graph {
        Graph::complete(3).unwrap().with_pendant(0).unwrap()
    }

    #[test]
    fn complete_graphs() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!((k1.order(), k1.size()), (1, 0));
        assert_eq!(Graph::complete(4).unwrap().size(), 6);
        let k3 = Graph::complete(3).unwrap();
        assert!((0..3).all(|i| k3.degree(i) == 2));
        assert!(Graph::complete(0).is_err());
    }

    #[test]
    fn named_families() {
        let petersen = Graph::kneser(5, 2).unwrap();
        assert_eq!((petersen.order(), petersen.size()), (10, 15));
        assert!((0..10).all(|i| petersen.degree(i) == 3));
        assert_eq!(Graph::cycle(5).unwrap().size(), 5);
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::kneser(3, 2).is_err());
        assert!(Graph::hamming_h(4, 3).is_err());
        assert_eq!(Graph::path(4).unwrap().size(), 3);
        assert_eq!(Graph::hypercube(3).unwrap().size(), 12);
    }

    #[test]
    fn hamming_h_4_2_by_enumeration() {
        let h = Graph::hamming_h(4, 2).unwrap();
        let words: Vec<u32> = (0u32..16).filter(|w| w.count_ones() % 2 == 0).collect();
        assert_eq!(h.order(), 8);
        for a in 0..8 {
            for b in 0..8 {
                let d = (words[a] ^ words[b]).count_ones();
                assert_eq!(h.has_edge(a, b), d == 2);
            }
        }
    }

    #[test]
    fn product_examples() {
        let k2 = Graph::complete(2).unwrap();
        let p = categorical_product(&k2, &k2);
        assert_eq!(p.order(), 4);
        assert_eq!(p.edges(), &[(0, 3), (1, 2)]);
        assert!(!p.is_connected());

        let g = Graph::cycle(5).unwrap();
        let e = Graph::empty(3);
        let q = categorical_product(&g, &e);
        assert_eq!((q.order(), q.size()), (15, 0));

        let k3 = Graph::complete(3).unwrap();
        assert_eq!(categorical_product(&k3, &k3).size(), 18);
    }

    #[test]
    fn product_index_roundtrip() {
        for g in 0..4 {
            for h in 0..5 {
                let p = ProductIndex::new(g, h, 5);
                assert_eq!(ProductIndex::from_flat(p.flat, 5), p);
            }
        }
    }

    #[test]
    fn basic_predicates() {
        assert!(Graph::cycle(4).unwrap().is_bipartite());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        let u = Graph::complete(3).unwrap().disjoint_union(&Graph::empty(1));
        let comps = u.connected_components();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        assert!(Graph::empty(3).is_empty());
        assert!(!Graph::complete(2).unwrap().is_empty());
    }

    #[test]
    fn complement_involution() {
        let g = k3_pendant();
        assert_eq!(g.complement().complement(), g);
        assert_eq!(g.complement().size(), 6 - g.size());
    }

    #[test]
    fn one_walk_regularity() {
        assert!(Graph::kneser(5, 2).unwrap().is_one_walk_regular(None));
        assert!(Graph::cycle(6).unwrap().is_one_walk_regular(None));
        assert!(Graph::complete(5).unwrap().is_one_walk_regular(None));
        assert!(Graph::hypercube(3).unwrap().is_one_walk_regular(None));
        assert!(!k3_pendant().is_one_walk_regular(None));
        assert!(!Graph::path(3).unwrap().is_one_walk_regular(None));
    }

    #[test]
    fn walk_regularity_with_large_counts() {
        // 5-regular on 32 vertices with high powers forces several primes
        let q5 = Graph::hypercube(5).unwrap();
        assert!(q5.is_one_walk_regular(Some(40)));
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0u64..2000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime((1u64 << 61) - 1));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        let g = Graph::new(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.size(), 1);
    }
}
