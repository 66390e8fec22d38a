//! Block trees, convex hulls, gates and the path criterion for independence.
//!
//! Two edges are equivalent when they lie on a common simple cycle, so the
//! classes are the biconnected blocks and bridges are singletons. The block
//! tree joins every vertex to the classes containing it; hulls, gates and
//! separation are all read off that forest.

use std::collections::VecDeque;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Path, VertexId};
use crate::kclass::vertex_mask;

/// Biconnected blocks as edge lists; each list sorted, lists ordered by first edge.
pub fn edge_equivalence_classes(g: &Graph) -> Vec<Vec<Edge>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut classes = Vec::new();
    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(VertexId, VertexId, usize)> = Vec::new();
    for s in g.vertices() {
        if disc[s] != UNSEEN {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        stack.push((s, UNSEEN, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if let Some(&w) = g.neighbors(v).get(top.2) {
                top.2 += 1;
                if disc[w] == UNSEEN {
                    edge_stack.push(Edge::new(v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push(Edge::new(v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if let Some(&(u, _, _)) = stack.last() {
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    let closing = Edge::new(u, v);
                    let mut class = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        class.push(e);
                        if e == closing {
                            break;
                        }
                    }
                    class.sort_unstable();
                    classes.push(class);
                }
            }
        }
    }
    classes.sort_unstable();
    classes
}

/// A node of the block tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Vertex(VertexId),
    Class(usize),
}

/// Bipartite incidence between vertices and edge classes.
///
/// Node `v` is vertex `v`; node `vertex_count + i` is class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BlockTreeJson", into = "BlockTreeJson")]
pub struct BlockTree {
    vertex_count: usize,
    classes: Vec<Vec<Edge>>,
    incidence: Vec<(VertexId, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BlockTreeJson {
    vertex_count: usize,
    classes: Vec<Vec<Edge>>,
    incidence: Vec<(VertexId, usize)>,
}

impl TryFrom<BlockTreeJson> for BlockTree {
    type Error = Error;

    fn try_from(j: BlockTreeJson) -> Result<Self> {
        BlockTree::from_incidence(j.vertex_count, j.classes, j.incidence)
    }
}

impl From<BlockTree> for BlockTreeJson {
    fn from(t: BlockTree) -> Self {
        BlockTreeJson {
            vertex_count: t.vertex_count,
            classes: t.classes,
            incidence: t.incidence,
        }
    }
}

/// Convex hull of a vertex set in the block tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullResult {
    pub tree_nodes: Vec<TreeNode>,
    /// The parameter set together with every vertex of a class in the hull.
    pub vertex_set: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    InHull,
    Vertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Independence {
    pub independent: bool,
    /// A path from acl(B) to acl(C) that avoids acl(A), when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Path>,
}

pub fn build_g_tree(g: &Graph) -> BlockTree {
    let classes = edge_equivalence_classes(g);
    let mut incidence = Vec::new();
    for (i, class) in classes.iter().enumerate() {
        let mut vs: Vec<VertexId> = class.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
        vs.sort_unstable();
        vs.dedup();
        incidence.extend(vs.into_iter().map(|v| (v, i)));
    }
    incidence.sort_unstable();
    BlockTree::from_incidence(g.vertex_count(), classes, incidence).expect("block tree of a valid graph")
}

pub fn is_forest(t: &BlockTree) -> bool {
    t.is_forest()
}

impl BlockTree {
    /// Assembles a tree from raw parts; the result need not be a forest.
    pub fn from_incidence(vertex_count: usize, classes: Vec<Vec<Edge>>, incidence: Vec<(VertexId, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count + classes.len()];
        for &(v, c) in &incidence {
            if v >= vertex_count || c >= classes.len() {
                return Err(Error::BlockTree(format!("incidence ({v}, {c}) is out of range")));
            }
            adj[v].push(vertex_count + c);
            adj[vertex_count + c].push(v);
        }
        Ok(BlockTree {
            vertex_count,
            classes,
            incidence,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn classes(&self) -> &[Vec<Edge>] {
        &self.classes
    }

    pub fn incidence(&self) -> &[(VertexId, usize)] {
        &self.incidence
    }

    fn node(&self, t: TreeNode) -> usize {
        match t {
            TreeNode::Vertex(v) => v,
            TreeNode::Class(c) => self.vertex_count + c,
        }
    }

    fn tree_node(&self, i: usize) -> TreeNode {
        if i < self.vertex_count {
            TreeNode::Vertex(i)
        } else {
            TreeNode::Class(i - self.vertex_count)
        }
    }

    pub fn neighbors(&self, t: TreeNode) -> impl Iterator<Item = TreeNode> + '_ {
        self.adj[self.node(t)].iter().map(|&i| self.tree_node(i))
    }

    /// Vertices of class `c`, ascending.
    pub fn class_vertices(&self, c: usize) -> Vec<VertexId> {
        let mut vs = self.adj[self.vertex_count + c].clone();
        vs.sort_unstable();
        vs
    }

    /// Classes containing `v`, ascending.
    pub fn classes_of(&self, v: VertexId) -> Vec<usize> {
        let mut cs: Vec<usize> = self.adj[v].iter().map(|&i| i - self.vertex_count).collect();
        cs.sort_unstable();
        cs
    }

    /// Vertices lying in more than one class.
    pub fn cut_vertices(&self) -> Vec<VertexId> {
        (0..self.vertex_count).filter(|&v| self.adj[v].len() > 1).collect()
    }

    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.adj.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(v, c) in &self.incidence {
            let (a, b) = (find(&mut parent, v), find(&mut parent, self.vertex_count + c));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// The smallest subforest containing every vertex of `b`, taken per component.
    pub fn hull(&self, b: &[VertexId]) -> Result<HullResult> {
        let total = self.adj.len();
        let mut is_b = vec![false; total];
        for &v in b {
            if v >= self.vertex_count {
                return Err(Error::UnknownVertex {
                    vertex: v,
                    vertex_count: self.vertex_count,
                });
            }
            is_b[v] = true;
        }
        let mut in_hull = vec![false; total];
        let mut visited = vec![false; total];
        let mut parent = vec![usize::MAX; total];
        for root in (0..self.vertex_count).filter(|&v| is_b[v]) {
            if visited[root] {
                continue;
            }
            // rooted at a parameter vertex, a node is in the hull iff its subtree holds one
            let mut order = vec![root];
            visited[root] = true;
            let mut i = 0;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !visited[w] {
                        visited[w] = true;
                        parent[w] = u;
                        order.push(w);
                    }
                }
            }
            for &u in order.iter().rev() {
                if is_b[u] || in_hull[u] {
                    in_hull[u] = true;
                    if parent[u] != usize::MAX {
                        in_hull[parent[u]] = true;
                    }
                }
            }
        }
        let tree_nodes: Vec<TreeNode> = (0..total).filter(|&i| in_hull[i]).map(|i| self.tree_node(i)).collect();
        let mut in_set = is_b[..self.vertex_count].to_vec();
        for i in (self.vertex_count..total).filter(|&i| in_hull[i]) {
            for &v in &self.adj[i] {
                in_set[v] = true;
            }
        }
        let vertex_set = (0..self.vertex_count).filter(|&v| in_set[v]).collect();
        Ok(HullResult { tree_nodes, vertex_set })
    }

    /// The gate from `x` into the hull of `b`.
    pub fn gate(&self, x: VertexId, b: &[VertexId]) -> Result<Gate> {
        if b.is_empty() {
            return Err(Error::EmptySet);
        }
        if x >= self.vertex_count {
            return Err(Error::UnknownVertex {
                vertex: x,
                vertex_count: self.vertex_count,
            });
        }
        let hull = self.hull(b)?;
        let mut target = vec![false; self.vertex_count];
        for &v in &hull.vertex_set {
            target[v] = true;
        }
        if target[x] {
            return Ok(Gate::InHull);
        }
        // the nearest hull vertex in the tree is the unique entry point
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(u) = queue.pop_front() {
            if u < self.vertex_count && target[u] {
                return Ok(Gate::Vertex(u));
            }
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Err(Error::Disconnected { x })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g_tree {\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  v{v} [shape=circle, label=\"{v}\"];");
        }
        for c in 0..self.classes.len() {
            let _ = writeln!(out, "  c{c} [shape=box, label=\"C{c}\"];");
        }
        for &(v, c) in &self.incidence {
            let _ = writeln!(out, "  v{v} -- c{c};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn conv_m(g: &Graph, b: &[VertexId]) -> Result<HullResult> {
    build_g_tree(g).hull(b)
}

/// Algebraic closure, computed as the convex closure in the block tree.
pub fn acl(g: &Graph, a: &[VertexId]) -> Result<Vec<VertexId>> {
    Ok(conv_m(g, a)?.vertex_set)
}

pub fn gate(g: &Graph, x: VertexId, b: &[VertexId]) -> Result<Gate> {
    build_g_tree(g).gate(x, b)
}

/// Whether every path from acl(b) to acl(c) meets acl(a).
pub fn is_independent(g: &Graph, b: &[VertexId], a: &[VertexId], c: &[VertexId]) -> Result<Independence> {
    let tree = build_g_tree(g);
    independent_in(g, &tree, b, a, c)
}

/// [`is_independent`] against a prebuilt block tree of `g`.
pub fn independent_in(g: &Graph, tree: &BlockTree, b: &[VertexId], a: &[VertexId], c: &[VertexId]) -> Result<Independence> {
    let acl_b = vertex_mask(g, &tree.hull(b)?.vertex_set)?;
    let acl_a = vertex_mask(g, &tree.hull(a)?.vertex_set)?;
    let acl_c = vertex_mask(g, &tree.hull(c)?.vertex_set)?;
    let n = g.vertex_count();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for v in g.vertices().filter(|&v| acl_b[v] && !acl_a[v]) {
        seen[v] = true;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if acl_c[u] {
            let mut path = vec![u];
            let mut cur = u;
            while prev[cur] != usize::MAX {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Ok(Independence {
                independent: false,
                witness: Some(Path(path)),
            });
        }
        for &w in g.neighbors(u) {
            if !seen[w] && !acl_a[w] {
                seen[w] = true;
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    Ok(Independence {
        independent: true,
        witness: None,
    })
}
