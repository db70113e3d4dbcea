//! The comparison graph induced by a matrix, exact spanning tree counts through the
//! matrix-tree theorem, and a streaming spanning tree enumerator.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::PcMatrix;

/// Default upper bound on the number of spanning trees an enumeration may visit.
pub const DEFAULT_TREE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// `m_ij` for `i < j`.
    pub label: f64,
}

/// Labelled undirected graph with one edge per known comparison.
///
/// Edges are kept sorted by `(i, j)` with `i < j`, which fixes the enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl ComparisonGraph {
    pub fn induced_by(m: &PcMatrix) -> Self {
        let n = m.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if let Some(label) = m.get(i, j) {
                    edges.push(Edge { i, j, label });
                }
            }
        }
        Self { n, edges }
    }

    /// Unlabelled graph (labels set to 1) from vertex pairs.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<Edge> = pairs
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| Edge {
                i: a.min(b),
                j: a.max(b),
                label: 1.0,
            })
            .collect();
        edges.sort_by_key(|e| (e.i, e.j));
        edges.dedup_by_key(|e| (e.i, e.j));
        Self { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_pairs(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search_by_key(&key, |e| (e.i, e.j)).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let mut dsu = DisjointSets::new(self.n);
        let mut components = self.n;
        for e in &self.edges {
            if dsu.union(e.i, e.j) {
                components -= 1;
            }
        }
        components <= 1
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n;
        let mut cells = vec![0i64; n * n];
        for e in &self.edges {
            cells[e.i * n + e.j] -= 1;
            cells[e.j * n + e.i] -= 1;
            cells[e.i * n + e.i] += 1;
            cells[e.j * n + e.j] += 1;
        }
        LaplacianMatrix { n, cells }
    }

    /// Exact number of spanning trees: the (1,1) cofactor of the Laplacian.
    pub fn count_spanning_trees(&self) -> BigUint {
        if self.n <= 1 {
            return BigUint::one();
        }
        self.laplacian()
            .cofactor(0)
            .to_biguint()
            .expect("Laplacian cofactors are non-negative")
    }

    /// Fails with [`Error::DisconnectedGraph`] or [`Error::TreeCountExceedsCap`]; returns
    /// the tree count otherwise.
    pub fn check_enumerable(&self, cap: u64) -> Result<u64> {
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let count = self.count_spanning_trees();
        match count.to_u64() {
            Some(c) if c <= cap => Ok(c),
            _ => Err(Error::TreeCountExceedsCap {
                count: count.to_string(),
                cap,
            }),
        }
    }

    /// Streams every spanning tree exactly once, in a deterministic order.
    pub fn spanning_trees(&self, cap: u64) -> Result<SpanningTrees<'_>> {
        self.check_enumerable(cap)?;
        Ok(SpanningTrees::new(self))
    }
}

/// Graph Laplacian `D - A`; labels are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianMatrix {
    n: usize,
    cells: Vec<i64>,
}

impl LaplacianMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cells[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.cells.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }

    /// Diagonal cofactor: the determinant of the minor with row and column `k` removed.
    pub fn cofactor(&self, k: usize) -> BigInt {
        let idx: Vec<usize> = (0..self.n).filter(|&x| x != k).collect();
        let minor: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| BigInt::from(self.get(r, c))).collect())
            .collect();
        bareiss_determinant(minor)
    }
}

/// Fraction-free Gaussian elimination. Every intermediate value is a minor of the input,
/// so the divisions are exact.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A spanning tree as a sorted list of `(i, j)` vertex pairs with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Checks that `edges` form a spanning tree on `n` vertices.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        if n == 0 || edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges on {n} vertices", edges.len())));
        }
        let mut dsu = DisjointSets::new(n);
        for &(a, b) in &edges {
            if a == b || b >= n {
                return Err(Error::InvalidTree(format!("bad edge ({}, {})", a + 1, b + 1)));
            }
            if !dsu.union(a, b) {
                return Err(Error::InvalidTree(format!(
                    "edge ({}, {}) closes a cycle",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl fmt::Display for SpanningTree {
    /// Comma-separated 1-based edges, e.g. `1-2,2-3,1-4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}-{}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Include,
    Exclude,
    Done,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    edge: usize,
    next: Branch,
}

/// Include/exclude branching over the sorted edge list.
///
/// An edge is included when it joins two components of the current forest, and
/// excluded only when the forest plus the undecided edges still connects the graph
/// (i.e. the edge is not a bridge of what is left). Every branch taken therefore
/// leads to at least one tree.
pub struct SpanningTrees<'g> {
    graph: &'g ComparisonGraph,
    stack: Vec<Frame>,
    chosen: Vec<usize>,
    single_vertex: bool,
}

impl<'g> SpanningTrees<'g> {
    fn new(graph: &'g ComparisonGraph) -> Self {
        let single_vertex = graph.n == 1;
        let stack = if single_vertex {
            Vec::new()
        } else {
            vec![Frame {
                edge: 0,
                next: Branch::Include,
            }]
        };
        Self {
            graph,
            stack,
            chosen: Vec::with_capacity(graph.n.saturating_sub(1)),
            single_vertex,
        }
    }

    fn forest(&self) -> DisjointSets {
        let mut dsu = DisjointSets::new(self.graph.n);
        for &e in &self.chosen {
            let edge = self.graph.edges[e];
            dsu.union(edge.i, edge.j);
        }
        dsu
    }

    fn connected_with_rest(&self, from: usize) -> bool {
        let mut dsu = self.forest();
        let mut components = self.graph.n - self.chosen.len();
        for edge in &self.graph.edges[from..] {
            if dsu.union(edge.i, edge.j) {
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }

    fn emit(&self) -> SpanningTree {
        SpanningTree {
            n: self.graph.n,
            edges: self
                .chosen
                .iter()
                .map(|&e| (self.graph.edges[e].i, self.graph.edges[e].j))
                .collect(),
        }
    }
}

impl Iterator for SpanningTrees<'_> {
    type Item = SpanningTree;

    fn next(&mut self) -> Option<SpanningTree> {
        if self.single_vertex {
            self.single_vertex = false;
            return Some(SpanningTree {
                n: 1,
                edges: Vec::new(),
            });
        }
        let target = self.graph.n - 1;
        let m = self.graph.edges.len();
        loop {
            let top = self.stack.len().checked_sub(1)?;
            let edge = self.stack[top].edge;
            if edge >= m {
                self.stack[top].next = Branch::Done;
            }
            match self.stack[top].next {
                Branch::Include => {
                    self.stack[top].next = Branch::Exclude;
                    let Edge { i, j, .. } = self.graph.edges[edge];
                    let mut forest = self.forest();
                    if forest.find(i) != forest.find(j) {
                        self.chosen.push(edge);
                        if self.chosen.len() == target {
                            let tree = self.emit();
                            self.chosen.pop();
                            return Some(tree);
                        }
                        self.stack.push(Frame {
                            edge: edge + 1,
                            next: Branch::Include,
                        });
                    }
                }
                Branch::Exclude => {
                    self.stack[top].next = Branch::Done;
                    if self.connected_with_rest(edge + 1) {
                        self.stack.push(Frame {
                            edge: edge + 1,
                            next: Branch::Include,
                        });
                    }
                }
                Branch::Done => {
                    self.stack.pop();
                    // Returning from the include branch of the parent: undo it.
                    if let Some(parent) = self.stack.last() {
                        if parent.next == Branch::Exclude && self.chosen.last() == Some(&parent.edge) {
                            self.chosen.pop();
                        }
                    }
                }
            }
        }
    }
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_matrix;
    use std::collections::HashSet;

    fn ex2_graph() -> ComparisonGraph {
        let m = parse_matrix("1 2 ? 1/6\n1/2 1 5 1\n? 1/5 1 ?\n6 1 ? 1").unwrap();
        ComparisonGraph::induced_by(&m)
    }

    fn path(n: usize) -> ComparisonGraph {
        ComparisonGraph::from_pairs(n, (1..n).map(|i| (i - 1, i)))
    }

    #[test]
    fn induced_edges() {
        let g = ex2_graph();
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(g.edges()[1].label, 1.0 / 6.0);
        let single = ComparisonGraph::induced_by(&parse_matrix("1").unwrap());
        assert_eq!(single.n(), 1);
        assert!(single.edges().is_empty());
        assert!(single.is_connected());
    }

    #[test]
    fn laplacian_of_example() {
        assert_eq!(
            ex2_graph().laplacian().rows(),
            vec![
                vec![2, -1, 0, -1],
                vec![-1, 3, -1, -1],
                vec![0, -1, 1, 0],
                vec![-1, -1, 0, 2]
            ]
        );
        let l = ComparisonGraph::from_pairs(3, []).laplacian();
        assert!(l.rows().iter().flatten().all(|&x| x == 0));
        let l = ComparisonGraph::complete(4).laplacian();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l.get(i, j), if i == j { 3 } else { -1 });
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(ex2_graph().count_spanning_trees(), BigUint::from(3u32));
        assert_eq!(
            ComparisonGraph::complete(4).count_spanning_trees(),
            BigUint::from(16u32)
        );
        assert_eq!(path(6).count_spanning_trees(), BigUint::one());
        assert_eq!(
            ComparisonGraph::from_pairs(4, [(0, 1), (2, 3)]).count_spanning_trees(),
            BigUint::zero()
        );
        assert_eq!(ComparisonGraph::complete(1).count_spanning_trees(), BigUint::one());
    }

    #[test]
    fn cayley_for_large_complete_graph() {
        // 20^18 overflows u64.
        let expected = BigUint::from(20u32).pow(18);
        assert_eq!(ComparisonGraph::complete(20).count_spanning_trees(), expected);
    }

    #[test]
    fn cofactor_choice_does_not_matter() {
        let l = ex2_graph().laplacian();
        for k in 0..4 {
            assert_eq!(l.cofactor(k), BigInt::from(3));
        }
    }

    #[test]
    fn bareiss_with_pivoting() {
        let m = [[0, 2, 1], [1, 0, 3], [4, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        // 0*(0-3) - 2*(0-12) + 1*(1-0) = 25
        assert_eq!(bareiss_determinant(m), BigInt::from(25));
    }

    #[test]
    fn enumerates_example_trees() {
        let g = ex2_graph();
        let trees: Vec<String> = g
            .spanning_trees(DEFAULT_TREE_CAP)
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(trees, vec!["1-2,1-4,2-3", "1-2,2-3,2-4", "1-4,2-3,2-4"]);
    }

    #[test]
    fn enumerates_complete_and_path() {
        let g = ComparisonGraph::complete(4);
        let trees: HashSet<_> = g.spanning_trees(DEFAULT_TREE_CAP).unwrap().collect();
        assert_eq!(trees.len(), 16);
        let p = path(3);
        let trees: Vec<_> = p.spanning_trees(DEFAULT_TREE_CAP).unwrap().collect();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].edges(), &[(0, 1), (1, 2)]);
        let one: Vec<_> = ComparisonGraph::complete(1).spanning_trees(1).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert!(one[0].edges().is_empty());
    }

    #[test]
    fn enumeration_errors() {
        let g = ComparisonGraph::from_pairs(4, [(0, 1), (2, 3)]);
        assert!(matches!(g.spanning_trees(10), Err(Error::DisconnectedGraph)));
        match ComparisonGraph::complete(4).spanning_trees(15) {
            Err(Error::TreeCountExceedsCap { count, cap }) => {
                assert_eq!(count, "16");
                assert_eq!(cap, 15);
            }
            _ => panic!("expected cap error"),
        }
    }

    #[test]
    fn tree_validation() {
        assert!(SpanningTree::new(3, vec![(0, 1), (1, 2)]).is_ok());
        assert!(SpanningTree::new(3, vec![(0, 1)]).is_err());
        assert!(SpanningTree::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(SpanningTree::new(3, vec![(0, 1), (1, 3)]).is_err());
    }
}
