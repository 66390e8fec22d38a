//! Free amalgams and amalgamation inside 𝒦.
//!
//! The amalgam `D` always starts as a copy of `C` with the same ids; vertices
//! of `B` outside the glued copy of `A` are appended after them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::kclass::{is_in_k, is_strong, RemovalReason};

/// Identifies a common induced subgraph `A`: `in_b[i]` and `in_c[i]` are the
/// same vertex of `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glue {
    pub in_b: Vec<VertexId>,
    pub in_c: Vec<VertexId>,
}

impl Glue {
    pub fn new(in_b: Vec<VertexId>, in_c: Vec<VertexId>) -> Self {
        Glue { in_b, in_c }
    }

    /// Glue along the same ids on both sides.
    pub fn identity(a: &[VertexId]) -> Self {
        Glue {
            in_b: a.to_vec(),
            in_c: a.to_vec(),
        }
    }

    fn validate(&self, b: &Graph, c: &Graph) -> Result<()> {
        if self.in_b.len() != self.in_c.len() {
            return Err(Error::GlueMismatch(format!(
                "{} vertices on the B side, {} on the C side",
                self.in_b.len(),
                self.in_c.len()
            )));
        }
        for (side, g, list) in [("B", b, &self.in_b), ("C", c, &self.in_c)] {
            let mut seen = vec![false; g.vertex_count()];
            for &v in list.iter() {
                g.check_vertex(v)?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::GlueMismatch(format!("vertex {v} repeated on the {side} side")));
                }
            }
        }
        for i in 0..self.in_b.len() {
            for j in i + 1..self.in_b.len() {
                let eb = b.has_edge(self.in_b[i], self.in_b[j]);
                let ec = c.has_edge(self.in_c[i], self.in_c[j]);
                if eb != ec {
                    return Err(Error::GlueMismatch(format!(
                        "B pair ({}, {}) and C pair ({}, {}) disagree on adjacency",
                        self.in_b[i], self.in_b[j], self.in_c[i], self.in_c[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `B`-vertex to `D`-vertex for the glued part; `D` ids are `C` ids there.
    fn initial_embedding(&self, b: &Graph) -> Vec<Option<VertexId>> {
        let mut embed = vec![None; b.vertex_count()];
        for (&vb, &vc) in self.in_b.iter().zip(&self.in_c) {
            embed[vb] = Some(vc);
        }
        embed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamResult {
    pub graph: Graph,
    /// `embed_b[v]` is the image of `B`-vertex `v`.
    pub embed_b: Vec<VertexId>,
    /// `embed_c[v]` is the image of `C`-vertex `v` (always `v`).
    pub embed_c: Vec<VertexId>,
    /// `(B-vertex, C-vertex)` pairs identified to respect the triangle bound.
    pub collapsed: Vec<(VertexId, VertexId)>,
    /// The order in which `B`-vertices outside `A` were added.
    pub readd_order: Vec<VertexId>,
}

/// `B ⊗_A C`: glue along `A`, no edges between the two remainders.
pub fn free_amalgam(b: &Graph, c: &Graph, glue: &Glue) -> Result<AmalgamResult> {
    glue.validate(b, c)?;
    let mut embed = glue.initial_embedding(b);
    let mut next = c.vertex_count();
    let mut readd_order = Vec::new();
    for v in b.vertices() {
        if embed[v].is_none() {
            embed[v] = Some(next);
            readd_order.push(v);
            next += 1;
        }
    }
    let embed_b: Vec<VertexId> = embed.into_iter().map(Option::unwrap).collect();
    let edges = c
        .edges()
        .iter()
        .map(|e| e.endpoints())
        .chain(b.edges().iter().map(|e| (embed_b[e.lo()], embed_b[e.hi()])));
    Ok(AmalgamResult {
        graph: Graph::new(next, edges)?,
        embed_b,
        embed_c: c.vertices().collect(),
        collapsed: Vec::new(),
        readd_order,
    })
}

/// Amalgamates two members of 𝒦 over a common strong subgraph so that the
/// result stays in 𝒦.
///
/// `B` is peeled down to `A` and rebuilt on top of `C` in reverse order. A
/// vertex that comes back as a triangle apex over an edge already carrying two
/// triangles is identified with the lowest-id apex of that edge not yet used
/// by the image of `B`.
pub fn amalgamate_in_k(b: &Graph, c: &Graph, glue: &Glue) -> Result<AmalgamResult> {
    glue.validate(b, c)?;
    if !is_in_k(b).member {
        return Err(Error::AmalgamPrecondition("B is not in 𝒦".into()));
    }
    if !is_in_k(c).member {
        return Err(Error::AmalgamPrecondition("C is not in 𝒦".into()));
    }
    let peel = match is_strong(&glue.in_b, b)?.peel() {
        Some(p) => p.clone(),
        None => return Err(Error::AmalgamPrecondition("A is not strong in B".into())),
    };
    if !is_strong(&glue.in_c, c)?.is_strong() {
        return Err(Error::AmalgamPrecondition("A is not strong in C".into()));
    }

    let mut d = c.clone();
    let mut embed = glue.initial_embedding(b);
    let mut in_image = vec![false; c.vertex_count()];
    for &v in &glue.in_c {
        in_image[v] = true;
    }
    let mut collapsed = Vec::new();
    let mut readd_order = Vec::new();
    for step in peel.steps.iter().rev() {
        let v = step.vertex;
        readd_order.push(v);
        let neighbors: Vec<VertexId> = match step.reason {
            RemovalReason::TriangleApex([p, q]) => vec![p, q],
            RemovalReason::ValencyLe1 => b.neighbors(v).iter().copied().filter(|&w| embed[w].is_some()).collect(),
        };
        let image: Vec<VertexId> = neighbors.iter().map(|&w| embed[w].expect("neighbour re-added earlier")).collect();
        if let [p, q] = image[..] {
            let apexes = d.common_neighbors(p, q);
            if apexes.len() >= 2 {
                let w = apexes
                    .into_iter()
                    .find(|&w| !in_image[w])
                    .expect("an edge of B cannot carry three triangles");
                embed[v] = Some(w);
                in_image[w] = true;
                collapsed.push((v, w));
                continue;
            }
        }
        let x = d.push_vertex(&image);
        embed[v] = Some(x);
        in_image.push(true);
    }
    Ok(AmalgamResult {
        graph: d,
        embed_b: embed.into_iter().map(Option::unwrap).collect(),
        embed_c: c.vertices().collect(),
        collapsed,
        readd_order,
    })
}
