//! Vertex-disjoint path counts and minimum disconnecting sets.
//!
//! All routines reduce to unit-capacity max-flow on the vertex-split network:
//! every vertex v becomes an arc v_in -> v_out of capacity one, graph edges
//! become infinite arcs u_out -> w_in, path sources attach to v_in and path
//! targets drain from v_out. A vertex lying in both endpoint sets therefore
//! realizes a zero-length path through its own split arc, which is exactly
//! the counting convention used by the rank arguments in `checkers`.

use crate::graph::{Dag, Path, Vertex, VertexSet};

const INF: u32 = u32::MAX / 2;

/// A maximum family of mutually vertex-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    /// One path per used source, in the order sources were enabled.
    pub paths: Vec<Path>,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// The set of path start vertices.
    pub fn starts(&self) -> VertexSet {
        self.paths.iter().map(|p| p.start()).collect()
    }
}

// Residual network with incremental source enabling. Node ids: 0 = super
// source, 1 = super sink, v_in = 2v, v_out = 2v + 1.
struct FlowNet {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNet {
    fn build(g: &Dag, targets: &VertexSet, removed: &VertexSet) -> FlowNet {
        let n = g.vertex_count();
        let mut net = FlowNet {
            adj: vec![Vec::new(); 2 * n + 2],
            to: Vec::new(),
            cap: Vec::new(),
        };
        for v in 1..=n {
            if removed.contains(v) {
                continue;
            }
            net.add_arc(2 * v, 2 * v + 1, 1);
        }
        for (u, w) in g.edges() {
            if removed.contains(u) || removed.contains(w) {
                continue;
            }
            net.add_arc(2 * u + 1, 2 * w, INF);
        }
        for v in targets.iter() {
            if removed.contains(v) {
                continue;
            }
            net.add_arc(2 * v + 1, 1, INF);
        }
        net
    }

    fn add_arc(&mut self, a: usize, b: usize, cap: u32) {
        let k = self.to.len();
        self.to.push(b);
        self.cap.push(cap);
        self.to.push(a);
        self.cap.push(0);
        self.adj[a].push(k);
        self.adj[b].push(k + 1);
    }

    // Adds the unit arc source -> v_in and tries to push one unit of flow.
    // Returns whether the flow value increased.
    fn enable_source(&mut self, v: Vertex) -> bool {
        self.add_arc(0, 2 * v, 1);
        self.augment()
    }

    // One BFS augmentation from node 0 to node 1; unit increments only.
    fn augment(&mut self) -> bool {
        let mut prev_arc = vec![usize::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = vec![false; self.adj.len()];
        seen[0] = true;
        'bfs: while let Some(u) = queue.pop_front() {
            for &k in &self.adj[u] {
                let w = self.to[k];
                if self.cap[k] > 0 && !seen[w] {
                    seen[w] = true;
                    prev_arc[w] = k;
                    if w == 1 {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !seen[1] {
            return false;
        }
        let mut node = 1;
        while node != 0 {
            let k = prev_arc[node];
            self.cap[k] -= 1;
            self.cap[k ^ 1] += 1;
            node = self.to[k ^ 1];
        }
        true
    }

    // Flow carried by arc k (reverse arcs start empty, so their residual
    // capacity is exactly the pushed flow).
    fn flow(&self, k: usize) -> u32 {
        self.cap[k ^ 1]
    }

    // Vertices whose split arc crosses the minimum cut.
    fn cut_vertices(&self, g: &Dag, removed: &VertexSet) -> VertexSet {
        let mut seen = vec![false; self.adj.len()];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &k in &self.adj[u] {
                let w = self.to[k];
                if self.cap[k] > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (1..=g.vertex_count())
            .filter(|&v| !removed.contains(v) && seen[2 * v] && !seen[2 * v + 1])
            .collect()
    }

    // Follows positive flow out of v_out until the sink, collecting vertices.
    fn trace_path(&self, start: Vertex) -> Path {
        let mut verts = vec![start];
        let mut node = 2 * start + 1;
        loop {
            let k = self.adj[node]
                .iter()
                .copied()
                .find(|&k| k % 2 == 0 && self.flow(k) > 0)
                .expect("flow conservation");
            let w = self.to[k];
            if w == 1 {
                return Path::new(verts);
            }
            // w is some w_in; its split arc leads to w_out.
            verts.push(w / 2);
            node = w + 1;
        }
    }
}

/// Maximum number of mutually vertex-disjoint paths from `a` to `b`
/// (b_{a->b}). A vertex in both sets contributes a zero-length path.
pub fn disjoint_path_count(g: &Dag, a: &VertexSet, b: &VertexSet) -> usize {
    disjoint_path_count_excluding(g, a, b, &VertexSet::new())
}

/// Same as [`disjoint_path_count`] with the vertices in `removed` deleted
/// from the graph (and hence from both endpoint sets).
pub fn disjoint_path_count_excluding(
    g: &Dag,
    a: &VertexSet,
    b: &VertexSet,
    removed: &VertexSet,
) -> usize {
    let mut net = FlowNet::build(g, b, removed);
    let mut count = 0;
    for v in a.iter() {
        if !removed.contains(v) && net.enable_source(v) {
            count += 1;
        }
    }
    count
}

/// The lexicographically smallest minimum disconnecting set for `a -> b`:
/// a vertex set of size b_{a->b} meeting every path, including zero-length
/// ones (so any vertex of `a` ∩ `b` is always a member).
pub fn min_disconnecting_set(g: &Dag, a: &VertexSet, b: &VertexSet) -> VertexSet {
    let total = disjoint_path_count(g, a, b);
    let mut chosen = VertexSet::new();
    for v in 1..=g.vertex_count() {
        if chosen.len() == total {
            break;
        }
        // v belongs to some minimum disconnecting set extending `chosen`
        // exactly when deleting it lowers the residual path count.
        let count = disjoint_path_count_excluding(g, a, b, &chosen.with(v));
        if count + chosen.len() + 1 == total {
            chosen.insert(v);
        }
    }
    debug_assert_eq!(chosen.len(), total);
    chosen
}

/// A minimum disconnecting set read directly off the max-flow min cut.
/// Cheaper than [`min_disconnecting_set`] but with no tie-break guarantee.
pub fn min_cut_set(g: &Dag, a: &VertexSet, b: &VertexSet) -> VertexSet {
    let mut net = FlowNet::build(g, b, &VertexSet::new());
    for v in a.iter() {
        net.enable_source(v);
    }
    net.cut_vertices(g, &VertexSet::new())
}

/// Maximum vertex-disjoint path family from an *ordered* list of candidate
/// sources into `targets`. Sources are enabled one at a time in the given
/// order; once a source carries a path it keeps carrying one, so earlier
/// entries get priority. Duplicate candidates are ignored.
pub fn prioritized_path_family(
    g: &Dag,
    source_order: &[Vertex],
    targets: &VertexSet,
) -> PathFamily {
    let mut net = FlowNet::build(g, targets, &VertexSet::new());
    let mut enabled = VertexSet::new();
    let mut order = Vec::new();
    for &v in source_order {
        if enabled.insert(v) {
            net.enable_source(v);
            order.push(v);
        }
    }
    // Used sources = source arcs carrying flow; read them in enable order.
    let mut paths = Vec::new();
    for &v in &order {
        let used = net.adj[0]
            .iter()
            .any(|&k| k % 2 == 0 && net.to[k] == 2 * v && net.flow(k) > 0);
        if used {
            paths.push(net.trace_path(v));
        }
    }
    PathFamily { paths }
}
