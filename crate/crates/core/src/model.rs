//! Finite models: trees of Farey graphs, seeded generic growth, and the
//! triangle-count compliance report.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::build_g_tree;
use crate::error::{Error, Result};
use crate::farey::build_level;
use crate::graph::{Edge, Graph, VertexId};
use crate::kclass::is_in_k;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecNode {
    pub id: usize,
    pub level: u32,
}

/// Glue vertex `attach_u` of node `u`'s copy to vertex `attach_v` of node `v`'s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEdge {
    pub u: usize,
    pub v: usize,
    pub attach_u: VertexId,
    pub attach_v: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub nodes: Vec<SpecNode>,
    pub edges: Vec<SpecEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeModel {
    pub graph: Graph,
    /// Spec node of the first copy containing each vertex.
    pub copy_of: Vec<usize>,
    /// Id of each vertex inside that copy's Farey level.
    pub original_id: Vec<VertexId>,
    /// Per spec node (in spec order): local Farey id to model vertex.
    pub copies: Vec<Vec<VertexId>>,
    /// One entry per spec edge: the model vertex the two attachments became.
    pub identified: Vec<VertexId>,
}

impl TreeModel {
    /// Model vertices lying in node `i`'s copy (spec order index).
    pub fn copy_vertices(&self, i: usize) -> &[VertexId] {
        &self.copies[i]
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Replaces every spec node by a copy of its Farey level and identifies the
/// attachment vertices along spec edges.
pub fn build_tree_model(spec: &ModelSpec) -> Result<TreeModel> {
    let mut index = BTreeMap::new();
    for (i, node) in spec.nodes.iter().enumerate() {
        if index.insert(node.id, i).is_some() {
            return Err(Error::ModelSpec(format!("node {} listed twice", node.id)));
        }
        if node.level == 0 {
            return Err(Error::ModelSpec(format!("node {} has level 0", node.id)));
        }
    }
    let levels: Vec<Graph> = spec
        .nodes
        .iter()
        .map(|n| build_level(n.level).map(|f| f.into_graph()))
        .collect::<Result<_>>()?;
    let mut offset = Vec::with_capacity(levels.len() + 1);
    offset.push(0);
    for g in &levels {
        offset.push(offset.last().unwrap() + g.vertex_count());
    }
    let total = *offset.last().unwrap();

    let mut node_parent: Vec<usize> = (0..spec.nodes.len()).collect();
    let mut slot_parent: Vec<usize> = (0..total).collect();
    let mut glued = Vec::with_capacity(spec.edges.len());
    for e in &spec.edges {
        let lookup = |id: usize| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::ModelSpec(format!("edge mentions unknown node {id}")))
        };
        let (iu, iv) = (lookup(e.u)?, lookup(e.v)?);
        if iu == iv {
            return Err(Error::ModelSpec(format!("edge joins node {} to itself", e.u)));
        }
        for (id, i, a) in [(e.u, iu, e.attach_u), (e.v, iv, e.attach_v)] {
            if a >= levels[i].vertex_count() {
                return Err(Error::ModelSpec(format!(
                    "attachment {a} is outside node {id}'s level ({} vertices)",
                    levels[i].vertex_count()
                )));
            }
        }
        let (ru, rv) = (find(&mut node_parent, iu), find(&mut node_parent, iv));
        if ru == rv {
            return Err(Error::ModelSpec(format!("edge {}-{} closes a cycle", e.u, e.v)));
        }
        node_parent[ru] = rv;
        let (su, sv) = (offset[iu] + e.attach_u, offset[iv] + e.attach_v);
        let (a, b) = (find(&mut slot_parent, su), find(&mut slot_parent, sv));
        slot_parent[a] = b;
        glued.push(su);
    }

    let mut id_of_root = vec![usize::MAX; total];
    let mut copy_of = Vec::new();
    let mut original_id = Vec::new();
    let mut copies = Vec::with_capacity(levels.len());
    for (i, g) in levels.iter().enumerate() {
        let mut local = Vec::with_capacity(g.vertex_count());
        for v in g.vertices() {
            let r = find(&mut slot_parent, offset[i] + v);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = copy_of.len();
                copy_of.push(spec.nodes[i].id);
                original_id.push(v);
            }
            local.push(id_of_root[r]);
        }
        copies.push(local);
    }
    let edges = levels
        .iter()
        .zip(&copies)
        .flat_map(|(g, local)| g.edges().iter().map(move |e| (local[e.lo()], local[e.hi()])));
    let graph = Graph::new(copy_of.len(), edges)?;
    let identified = glued
        .into_iter()
        .map(|s| id_of_root[find(&mut slot_parent, s)])
        .collect();
    Ok(TreeModel {
        graph,
        copy_of,
        original_id,
        copies,
        identified,
    })
}

/// Compares the block tree of `m.graph` with the spec it came from: one
/// class per node holding exactly that copy's edges, and each vertex in
/// exactly the classes of the copies containing it. Returns the first
/// discrepancy.
pub fn classification_mismatch(m: &TreeModel) -> Option<String> {
    let tree = build_g_tree(&m.graph);
    if !tree.is_forest() {
        return Some("block tree is not a forest".into());
    }
    if tree.classes().len() != m.copies.len() {
        return Some(format!("{} classes for {} nodes", tree.classes().len(), m.copies.len()));
    }
    let mut class_of_node = Vec::with_capacity(m.copies.len());
    for (i, local) in m.copies.iter().enumerate() {
        let mut edges: Vec<Edge> = Vec::new();
        for &u in local {
            for &w in m.graph.neighbors(u) {
                if u < w && local.contains(&w) {
                    edges.push(Edge::new(u, w));
                }
            }
        }
        edges.sort_unstable();
        match tree.classes().iter().position(|c| *c == edges) {
            Some(c) => class_of_node.push(c),
            None => return Some(format!("copy {i} is not a single class")),
        }
    }
    for v in m.graph.vertices() {
        let mut want: Vec<usize> = (0..m.copies.len())
            .filter(|&i| m.copies[i].contains(&v))
            .map(|i| class_of_node[i])
            .collect();
        want.sort_unstable();
        if tree.classes_of(v) != want {
            return Some(format!("vertex {v} lies in classes {:?}, expected {want:?}", tree.classes_of(v)));
        }
    }
    None
}

/// Relative weights of the three one-point strong extensions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionWeights {
    pub isolated: f64,
    pub pendant: f64,
    pub apex: f64,
}

impl Default for ExtensionWeights {
    fn default() -> Self {
        ExtensionWeights {
            isolated: 0.2,
            pendant: 0.4,
            apex: 0.4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    Isolated,
    Pendant { to: VertexId },
    Apex { on: Edge },
}

/// Grows a graph from nothing by `steps` seeded strong one-point extensions.
/// Vertex `i` is the one added at step `i`. A kind with no available site
/// falls back to the next simpler kind.
pub fn build_generic(seed: u64, steps: usize, weights: ExtensionWeights) -> Result<(Graph, Vec<Extension>)> {
    let w = [weights.isolated, weights.pendant, weights.apex];
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::ModelSpec("extension weights must be finite and non-negative".into()));
    }
    let kinds = WeightedIndex::new(w).map_err(|e| Error::ModelSpec(format!("extension weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(0);
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut kind = kinds.sample(&mut rng);
        let open: Vec<Edge> = if kind == 2 {
            g.edges().iter().copied().filter(|&e| g.triangle_count(e) < 2).collect()
        } else {
            Vec::new()
        };
        if kind == 2 && open.is_empty() {
            kind = 1;
        }
        if kind == 1 && g.vertex_count() == 0 {
            kind = 0;
        }
        let ext = match kind {
            2 => Extension::Apex {
                on: *open.choose(&mut rng).unwrap(),
            },
            1 => Extension::Pendant {
                to: rng.gen_range(0..g.vertex_count()),
            },
            _ => Extension::Isolated,
        };
        match ext {
            Extension::Isolated => g.push_vertex(&[]),
            Extension::Pendant { to } => g.push_vertex(&[to]),
            Extension::Apex { on } => g.push_vertex(&[on.lo(), on.hi()]),
        };
        log.push(ext);
    }
    Ok((g, log))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TComplianceReport {
    pub edges_two_triangles: usize,
    pub edges_one_triangle: usize,
    pub edges_no_triangle: usize,
    pub edges_violating: Vec<Edge>,
    pub k_member: bool,
}

/// Sorts edges by triangle count; anything above two violates the axioms.
pub fn t_compliance(g: &Graph) -> TComplianceReport {
    let mut r = TComplianceReport {
        edges_two_triangles: 0,
        edges_one_triangle: 0,
        edges_no_triangle: 0,
        edges_violating: Vec::new(),
        k_member: is_in_k(g).member,
    };
    for &e in g.edges() {
        match g.triangle_count(e) {
            0 => r.edges_no_triangle += 1,
            1 => r.edges_one_triangle += 1,
            2 => r.edges_two_triangles += 1,
            _ => r.edges_violating.push(e),
        }
    }
    r
}
