//! Directed acyclic graph primitives.
//!
//! Vertices are dense 1-based ids. An edge `(i, j)` points from `i` to `j`,
//! i.e. vertex `j` listens to vertex `i`. Graphs are immutable once built
//! except through [`Dag::add_edge`], which re-validates acyclicity.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

/// 1-based dense vertex id.
pub type Vertex = usize;

/// Default budget for [`Dag::enumerate_paths`].
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {from} -> {to} would close the cycle {}", fmt_cycle(cycle))]
    CycleDetected {
        from: Vertex,
        to: Vertex,
        /// Cycle witness as a closed vertex walk (first == last).
        cycle: Vec<Vertex>,
    },
    #[error("more than {0} paths between the requested endpoints")]
    PathBudgetExceeded(usize),
}

fn fmt_cycle(cycle: &[Vertex]) -> String {
    let parts: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
    parts.join(" -> ")
}

/// Sorted, deduplicated set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    /// All of `1..=n`.
    pub fn full(n: usize) -> Self {
        VertexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Inserts `v`; returns false if it was already present.
    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    /// Removes `v`; returns false if it was absent.
    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        for v in other.iter() {
            out.insert(v);
        }
        out
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn minus(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn with(&self, v: Vertex) -> VertexSet {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    pub fn without(&self, v: Vertex) -> VertexSet {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(mut v: Vec<Vertex>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<VertexSet> for Vec<Vertex> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Convenience constructor for [`VertexSet`] literals: `vset![1, 4, 7]`.
#[macro_export]
macro_rules! vset {
    () => { $crate::graph::VertexSet::new() };
    ($($v:expr),+ $(,)?) => { $crate::graph::VertexSet::from(vec![$($v),+]) };
}

/// Simple directed path. A single vertex is a zero-length path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Path(Vec<Vertex>);

impl TryFrom<Vec<Vertex>> for Path {
    type Error = &'static str;
    fn try_from(v: Vec<Vertex>) -> Result<Self, Self::Error> {
        if v.is_empty() {
            Err("a path has at least one vertex")
        } else {
            Ok(Path(v))
        }
    }
}

impl From<Path> for Vec<Vertex> {
    fn from(p: Path) -> Self {
        p.0
    }
}

impl Path {
    /// Panics if `vertices` is empty; edge validity is the caller's business.
    pub fn new(vertices: Vec<Vertex>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn start(&self) -> Vertex {
        self.0[0]
    }

    pub fn end(&self) -> Vertex {
        *self.0.last().unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero_length(&self) -> bool {
        self.0.len() == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, from: Vertex, to: Vertex) -> bool {
        self.edges().any(|e| e == (from, to))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Serialized form of [`Dag`]; deserialization re-runs full validation.
#[derive(Serialize, Deserialize)]
struct DagRepr {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
}

/// Simple directed acyclic graph over vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DagRepr", into = "DagRepr")]
pub struct Dag {
    n: usize,
    // Index 0 unused; adjacency lists kept sorted ascending.
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl TryFrom<DagRepr> for Dag {
    type Error = GraphError;
    fn try_from(repr: DagRepr) -> Result<Self, Self::Error> {
        Dag::from_edges(repr.vertex_count, &repr.edges)
    }
}

impl From<Dag> for DagRepr {
    fn from(d: Dag) -> Self {
        DagRepr {
            vertex_count: d.n,
            edges: d.edges(),
        }
    }
}

impl Dag {
    pub fn new(vertex_count: usize) -> Self {
        Dag {
            n: vertex_count,
            out: vec![Vec::new(); vertex_count + 1],
            inn: vec![Vec::new(); vertex_count + 1],
            edge_count: 0,
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut dag = Dag::new(vertex_count);
        for &(i, j) in edges {
            dag.add_edge(i, j)?;
        }
        Ok(dag)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    fn assert_vertex(&self, v: Vertex) {
        assert!(v >= 1 && v <= self.n, "vertex {v} out of range 1..={}", self.n);
    }

    /// Adds edge `from -> to`, rejecting self-loops, duplicates and cycles.
    pub fn add_edge(&mut self, from: Vertex, to: Vertex) -> Result<(), GraphError> {
        self.check_vertex(from)?;
        self.check_vertex(to)?;
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        if self.has_edge(from, to) {
            return Err(GraphError::DuplicateEdge(from, to));
        }
        if let Some(mut cycle) = self.find_path_vertices(to, from) {
            cycle.push(to);
            return Err(GraphError::CycleDetected { from, to, cycle });
        }
        let pos = self.out[from].binary_search(&to).unwrap_err();
        self.out[from].insert(pos, to);
        let pos = self.inn[to].binary_search(&from).unwrap_err();
        self.inn[to].insert(pos, from);
        self.edge_count += 1;
        Ok(())
    }

    // BFS path from `a` to `b` as a vertex list, if one exists.
    fn find_path_vertices(&self, a: Vertex, b: Vertex) -> Option<Vec<Vertex>> {
        if a == b {
            return Some(vec![a]);
        }
        let mut parent = vec![0usize; self.n + 1];
        let mut queue = VecDeque::from([a]);
        parent[a] = a;
        while let Some(u) = queue.pop_front() {
            for &w in &self.out[u] {
                if parent[w] == 0 {
                    parent[w] = u;
                    if w == b {
                        let mut path = vec![b];
                        let mut cur = b;
                        while cur != a {
                            cur = parent[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        from >= 1 && from <= self.n && self.out[from].binary_search(&to).is_ok()
    }

    /// All edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for v in 1..=self.n {
            for &w in &self.out[v] {
                out.push((v, w));
            }
        }
        out
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        self.assert_vertex(v);
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        self.assert_vertex(v);
        &self.inn[v]
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_neighbors(v).len()
    }

    /// The graph with every edge reversed.
    pub fn transpose(&self) -> Dag {
        let mut t = Dag::new(self.n);
        t.out = self.inn.clone();
        t.inn = self.out.clone();
        t.edge_count = self.edge_count;
        t
    }

    /// Vertices reachable from `v` by a path of length >= 1 (never contains
    /// `v` itself: the graph is acyclic).
    pub fn reachable_set(&self, v: Vertex) -> VertexSet {
        self.assert_vertex(v);
        self.reachable_from(&VertexSet::singleton(v))
    }

    /// Union of `reachable_set` over a seed set.
    pub fn reachable_from(&self, seeds: &VertexSet) -> VertexSet {
        let mut seen = vec![false; self.n + 1];
        let mut queue: VecDeque<Vertex> = seeds.iter().collect();
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            for &w in &self.out[u] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        VertexSet::from(out)
    }

    /// BFS distance (edge count) from `v` to every vertex; `None` if
    /// unreachable. Index 0 of the result is unused.
    pub fn bfs_distance(&self, v: Vertex) -> Vec<Option<usize>> {
        self.assert_vertex(v);
        let mut dist = vec![None; self.n + 1];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.out[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices with no in-edges.
    pub fn sources(&self) -> VertexSet {
        VertexSet((1..=self.n).filter(|&v| self.inn[v].is_empty()).collect())
    }

    /// Vertices with no out-edges.
    pub fn sinks(&self) -> VertexSet {
        VertexSet((1..=self.n).filter(|&v| self.out[v].is_empty()).collect())
    }

    /// Topological order; ties broken by ascending vertex id.
    pub fn topo_order(&self) -> Vec<Vertex> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut indeg: Vec<usize> = (0..=self.n).map(|v| self.inn[v].len()).collect();
        let mut ready: BinaryHeap<Reverse<Vertex>> =
            (1..=self.n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        debug_assert_eq!(order.len(), self.n);
        order
    }

    /// Longest-in-path layering: layer 0 holds the sources, and a vertex sits
    /// in layer k when its longest path from a source has k edges. Every edge
    /// goes from a lower layer to a strictly higher one.
    pub fn topo_layers(&self) -> Vec<VertexSet> {
        let mut depth = vec![0usize; self.n + 1];
        let mut max_depth = 0;
        for v in self.topo_order() {
            let d = self.inn[v]
                .iter()
                .map(|&u| depth[u] + 1)
                .max()
                .unwrap_or(0);
            depth[v] = d;
            max_depth = max_depth.max(d);
        }
        if self.n == 0 {
            return Vec::new();
        }
        let mut layers = vec![Vec::new(); max_depth + 1];
        for v in 1..=self.n {
            layers[depth[v]].push(v);
        }
        layers.into_iter().map(VertexSet::from).collect()
    }

    /// All simple paths `from -> to` in lexicographic order. `from == to`
    /// yields the single zero-length path. Fails once more than `cap` paths
    /// have been found.
    pub fn enumerate_paths(
        &self,
        from: Vertex,
        to: Vertex,
        cap: usize,
    ) -> Result<Vec<Path>, GraphError> {
        self.assert_vertex(from);
        self.assert_vertex(to);
        if from == to {
            return Ok(vec![Path::new(vec![from])]);
        }
        // Only descend into vertices that can still reach `to`.
        let mut feasible = vec![false; self.n + 1];
        feasible[to] = true;
        for v in self.transpose().reachable_set(to).iter() {
            feasible[v] = true;
        }
        if !feasible[from] {
            return Ok(Vec::new());
        }
        let mut paths = Vec::new();
        let mut stack = vec![from];
        self.dfs_paths(to, cap, &feasible, &mut stack, &mut paths)?;
        Ok(paths)
    }

    fn dfs_paths(
        &self,
        to: Vertex,
        cap: usize,
        feasible: &[bool],
        stack: &mut Vec<Vertex>,
        paths: &mut Vec<Path>,
    ) -> Result<(), GraphError> {
        let u = *stack.last().unwrap();
        if u == to {
            if paths.len() == cap {
                return Err(GraphError::PathBudgetExceeded(cap));
            }
            paths.push(Path::new(stack.clone()));
            return Ok(());
        }
        for &w in &self.out[u] {
            if feasible[w] {
                stack.push(w);
                self.dfs_paths(to, cap, feasible, stack, paths)?;
                stack.pop();
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset;

    // 7-vertex acyclic fixture used throughout the crate.
    fn acyclic7() -> Dag {
        Dag::from_edges(
            7,
            &[(1, 3), (3, 6), (2, 5), (4, 3), (4, 7), (5, 7), (2, 4), (2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn builds_valid_dags() {
        let d = acyclic7();
        assert_eq!(d.vertex_count(), 7);
        assert_eq!(d.edge_count(), 8);
        assert!(d.has_edge(2, 1));
        assert!(!d.has_edge(1, 2));

        let single = Dag::from_edges(1, &[]).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn rejects_cycles_self_loops_duplicates() {
        let err = Dag::from_edges(2, &[(1, 2), (2, 1)]).unwrap_err();
        match err {
            GraphError::CycleDetected { from, to, cycle } => {
                assert_eq!((from, to), (2, 1));
                assert_eq!(cycle.first(), cycle.last());
                assert!(cycle.len() >= 3);
            }
            other => panic!("expected CycleDetected, got {other:?}"),
        }
        assert_eq!(
            Dag::from_edges(2, &[(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
        assert_eq!(
            Dag::from_edges(2, &[(1, 2), (1, 2)]).unwrap_err(),
            GraphError::DuplicateEdge(1, 2)
        );
        assert_eq!(
            Dag::from_edges(2, &[(1, 3)]).unwrap_err(),
            GraphError::VertexOutOfRange(3, 2)
        );
    }

    #[test]
    fn longer_cycle_witness_is_closed_walk() {
        // 1 -> 2 -> 3, then 3 -> 1 closes a triangle.
        let mut d = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let err = d.add_edge(3, 1).unwrap_err();
        match err {
            GraphError::CycleDetected { cycle, .. } => {
                assert_eq!(cycle, vec![1, 2, 3, 1]);
            }
            other => panic!("expected CycleDetected, got {other:?}"),
        }
    }

    #[test]
    fn transpose_reverses_every_edge() {
        let t = acyclic7().transpose();
        let expected = Dag::from_edges(
            7,
            &[(3, 1), (6, 3), (5, 2), (3, 4), (7, 4), (7, 5), (4, 2), (1, 2)],
        )
        .unwrap();
        assert_eq!(t, expected);

        let empty = Dag::new(3);
        assert_eq!(empty.transpose(), empty);
    }

    #[test]
    fn reachability_excludes_start() {
        let d = acyclic7();
        assert_eq!(d.reachable_set(2), vset![1, 3, 4, 5, 6, 7]);
        assert_eq!(d.reachable_set(4), vset![3, 6, 7]);
        assert_eq!(d.reachable_set(6), vset![]);
        assert_eq!(d.reachable_from(&vset![1, 5]), vset![3, 6, 7]);
    }

    #[test]
    fn sources_and_sinks() {
        let d = acyclic7();
        assert_eq!(d.sources(), vset![2]);
        assert_eq!(d.sinks(), vset![6, 7]);

        let single = Dag::new(1);
        assert_eq!(single.sources(), vset![1]);
        assert_eq!(single.sinks(), vset![1]);

        let chain = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(chain.sources(), vset![1]);
        assert_eq!(chain.sinks(), vset![3]);
    }

    #[test]
    fn layering_by_longest_in_path() {
        let chain = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(chain.topo_layers(), vec![vset![1], vset![2], vset![3]]);

        assert_eq!(
            acyclic7().topo_layers(),
            vec![vset![2], vset![1, 4, 5], vset![3, 7], vset![6]]
        );

        let edgeless = Dag::new(3);
        assert_eq!(edgeless.topo_layers(), vec![vset![1, 2, 3]]);
    }

    #[test]
    fn topo_order_is_ascending_ready() {
        let d = acyclic7();
        let order = d.topo_order();
        assert_eq!(order, vec![2, 1, 4, 3, 5, 6, 7]);
        let pos: Vec<usize> = {
            let mut p = vec![0; 8];
            for (k, &v) in order.iter().enumerate() {
                p[v] = k;
            }
            p
        };
        for (i, j) in d.edges() {
            assert!(pos[i] < pos[j], "edge {i}->{j} violates order");
        }
    }

    #[test]
    fn path_enumeration_is_lexicographic() {
        let d = acyclic7();
        let paths = d.enumerate_paths(2, 7, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].vertices(), &[2, 4, 7]);
        assert_eq!(paths[1].vertices(), &[2, 5, 7]);

        let loopback = d.enumerate_paths(5, 5, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(loopback, vec![Path::new(vec![5])]);

        let unique = d.enumerate_paths(1, 6, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(unique.len(), 1);
        assert_eq!(unique[0].vertices(), &[1, 3, 6]);

        assert!(d.enumerate_paths(6, 1, DEFAULT_PATH_CAP).unwrap().is_empty());
    }

    #[test]
    fn path_cap_is_enforced() {
        let d = acyclic7();
        assert_eq!(
            d.enumerate_paths(2, 7, 1).unwrap_err(),
            GraphError::PathBudgetExceeded(1)
        );
        // Exactly at the cap is fine.
        assert_eq!(d.enumerate_paths(2, 7, 2).unwrap().len(), 2);
    }

    #[test]
    fn path_accessors() {
        let p = Path::new(vec![2, 4, 7]);
        assert_eq!(p.start(), 2);
        assert_eq!(p.end(), 7);
        assert_eq!(p.edge_count(), 2);
        assert!(p.contains_edge(4, 7));
        assert!(!p.contains_edge(7, 4));
        assert_eq!(p.to_string(), "2 -> 4 -> 7");
    }

    #[test]
    fn vertex_set_basics() {
        let mut s = vset![3, 1, 3, 2];
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert!(s.remove(1));
        assert!(!s.remove(1));
        assert_eq!(s.union(&vset![1]), vset![1, 2, 3, 5]);
        assert_eq!(s.intersect(&vset![2, 5, 9]), vset![2, 5]);
        assert_eq!(s.minus(&vset![2]), vset![3, 5]);
        assert!(vset![2, 5].is_subset(&s));
        assert_eq!(s.to_string(), "{2, 3, 5}");
    }

    #[test]
    fn dag_serde_round_trip() {
        let d = acyclic7();
        let json = serde_json::to_string(&d).unwrap();
        let back: Dag = serde_json::from_str(&json).unwrap();
        assert_eq!(d, back);

        // Deserialization re-validates.
        let bad = r#"{"vertex_count":2,"edges":[[1,2],[2,1]]}"#;
        assert!(serde_json::from_str::<Dag>(bad).is_err());
    }
}
