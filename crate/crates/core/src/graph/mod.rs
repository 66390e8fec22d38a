//! Finite simple undirected graphs.
//!
//! Vertices are dense indices `0..vertex_count`. Adjacency lists are kept
//! sorted so that edge tests are a binary search and every traversal below is
//! deterministic.

mod canon;
pub mod dot;
mod iso;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::{canonical_form, canonical_form_with_cap, CanonicalCode, DEFAULT_CANON_CAP};
pub use iso::{find_isomorphism, for_each_induced_embedding, induced_embeddings};

pub type VertexId = usize;

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[VertexId; 2]", into = "[VertexId; 2]")]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl From<[VertexId; 2]> for Edge {
    fn from([u, v]: [VertexId; 2]) -> Self {
        Edge::new(u, v)
    }
}

impl From<Edge> for [VertexId; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// A simple path; consecutive vertices are adjacent in the host graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }
}

/// A simple cycle given by its cyclic vertex order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(pub Vec<VertexId>);

impl Cycle {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }
}

/// All shortest paths between two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesics {
    pub reachable: bool,
    pub paths: Vec<Path>,
}

/// Result of restricting a graph to a vertex subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_host[new] = old`
    pub to_host: Vec<VertexId>,
    /// old id -> new id
    pub from_host: BTreeMap<VertexId, VertexId>,
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    edges: Vec<Edge>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count())
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, deduplicating repeated edges.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::EdgeOutOfRange { u, v, vertex_count });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert(Edge::new(u, v));
        }
        Ok(Self::from_sorted_edges(vertex_count, set.into_iter().collect()))
    }

    /// `vertex_count` isolated vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); vertex_count],
            edges: Vec::new(),
        }
    }

    /// Caller guarantees the edges are valid, distinct and sorted.
    pub(crate) fn from_sorted_edges(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); vertex_count];
        for e in &edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.adj.len()
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v < self.adj.len()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub(crate) fn check_edge(&self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.has_edge(u, v) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(u, v))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Number of neighbours of `v`.
    pub fn valency(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    /// Breadth-first distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap() + 1;
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length, or `None` when `x` and `y` lie in different components.
    pub fn distance(&self, x: VertexId, y: VertexId) -> Result<Option<usize>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(Some(0));
        }
        Ok(self.bfs_distances(x)[y])
    }

    /// Every shortest path from `x` to `y`, in lexicographic order.
    ///
    /// Walks the breadth-first predecessor layers backwards from `y`, so only
    /// vertices on some geodesic are ever visited.
    pub fn geodesics(&self, x: VertexId, y: VertexId) -> Result<Geodesics> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let dist = self.bfs_distances(x);
        let Some(d) = dist[y] else {
            return Ok(Geodesics {
                reachable: false,
                paths: Vec::new(),
            });
        };
        let mut paths = Vec::new();
        let mut stack = vec![y];
        self.geodesics_back(&dist, d, &mut stack, &mut paths);
        paths.sort();
        Ok(Geodesics {
            reachable: true,
            paths,
        })
    }

    fn geodesics_back(&self, dist: &[Option<usize>], level: usize, stack: &mut Vec<VertexId>, out: &mut Vec<Path>) {
        if level == 0 {
            out.push(Path(stack.iter().rev().copied().collect()));
            return;
        }
        let cur = *stack.last().unwrap();
        for &w in &self.adj[cur] {
            if dist[w] == Some(level - 1) {
                stack.push(w);
                self.geodesics_back(dist, level - 1, stack, out);
                stack.pop();
            }
        }
    }

    /// Vertices adjacent to both endpoints of the edge `{u, v}`.
    pub fn triangles_on_edge(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_edge(u, v)?;
        Ok(self.common_neighbors(u, v))
    }

    pub(crate) fn common_neighbors(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub(crate) fn triangle_count(&self, e: Edge) -> usize {
        self.common_neighbors(e.0, e.1).len()
    }

    /// All simple cycles of length at most `max_len` through the edge `{u, v}`.
    ///
    /// Each cycle is reported once, as the vertex sequence of a `u`-to-`v`
    /// path that avoids the edge itself.
    pub fn simple_cycles_through_edge(&self, u: VertexId, v: VertexId, max_len: usize) -> Result<Vec<Cycle>> {
        self.check_edge(u, v)?;
        let mut out = Vec::new();
        if max_len < 3 {
            return Ok(out);
        }
        let to_v = self.bfs_distances(v);
        let mut on_path = vec![false; self.vertex_count()];
        let mut path = vec![u];
        on_path[u] = true;
        self.cycle_dfs(v, max_len - 1, &to_v, &mut on_path, &mut path, &mut out);
        out.sort();
        Ok(out)
    }

    fn cycle_dfs(
        &self,
        target: VertexId,
        max_edges: usize,
        to_target: &[Option<usize>],
        on_path: &mut [bool],
        path: &mut Vec<VertexId>,
        out: &mut Vec<Cycle>,
    ) {
        let cur = *path.last().unwrap();
        let used = path.len() - 1;
        for &w in &self.adj[cur] {
            if w == target {
                // the direct edge is the cycle's closing edge, not part of the path
                if used >= 1 {
                    let mut c = path.clone();
                    c.push(target);
                    out.push(Cycle(c));
                }
                continue;
            }
            if on_path[w] {
                continue;
            }
            match to_target[w] {
                Some(d) if used + 1 + d <= max_edges => {}
                _ => continue,
            }
            on_path[w] = true;
            path.push(w);
            self.cycle_dfs(target, max_edges, to_target, on_path, path, out);
            path.pop();
            on_path[w] = false;
        }
    }

    /// Subgraph induced on `vertices`, renumbered in ascending host order.
    pub fn induced_subgraph(&self, vertices: impl IntoIterator<Item = VertexId>) -> Result<InducedSubgraph> {
        let mut keep: Vec<VertexId> = vertices.into_iter().collect();
        keep.sort_unstable();
        keep.dedup();
        for &v in &keep {
            self.check_vertex(v)?;
        }
        let from_host: BTreeMap<VertexId, VertexId> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if w > v {
                    if let Some(&j) = from_host.get(&w) {
                        edges.push(Edge::new(i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        Ok(InducedSubgraph {
            graph: Graph::from_sorted_edges(keep.len(), edges),
            to_host: keep,
            from_host,
        })
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `sources` without entering `blocked`.
    #[cfg(test)]
    pub(crate) fn reachable_avoiding(&self, sources: impl IntoIterator<Item = VertexId>, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            if !blocked[s] && !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !blocked[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Appends a vertex joined to `neighbors`; returns its id.
    pub(crate) fn push_vertex(&mut self, neighbors: &[VertexId]) -> VertexId {
        let x = self.adj.len();
        self.adj.push(Vec::new());
        for &w in neighbors {
            debug_assert!(w < x);
            if self.adj[x].binary_search(&w).is_err() {
                let pos = self.adj[x].binary_search(&w).unwrap_err();
                self.adj[x].insert(pos, w);
                self.adj[w].push(x);
                let e = Edge::new(w, x);
                let pos = self.edges.binary_search(&e).unwrap_err();
                self.edges.insert(pos, e);
            }
        }
        x
    }
}

/// On-disk graph form: `{"vertex_count": N, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub edges: Vec<[VertexId; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertex_count: g.vertex_count(),
            edges: g.edges.iter().map(|&e| e.into()).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        Graph::new(j.vertex_count, j.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}
