//! Extending a map between ordered triangles edge by edge.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAutomorphism {
    /// `map[v]` is the image of `v`, if `v` is in the domain.
    pub map: Vec<Option<VertexId>>,
    /// Edges with exactly one endpoint in the domain.
    pub frontier: Vec<Edge>,
}

impl PartialAutomorphism {
    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(v).copied().flatten()
    }

    pub fn domain_size(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(v, m)| m.is_none_or(|w| w == v))
    }

    /// Total, bijective and edge-preserving in both directions.
    pub fn is_automorphism(&self, g: &Graph) -> bool {
        if !self.is_total() || self.map.len() != g.vertex_count() {
            return false;
        }
        let m: Vec<VertexId> = self.map.iter().map(|x| x.unwrap()).collect();
        let mut hit = vec![false; m.len()];
        for &w in &m {
            if std::mem::replace(&mut hit[w], true) {
                return false;
            }
        }
        g.edges().iter().all(|e| g.has_edge(m[e.lo()], m[e.hi()]))
    }
}

fn check_triangle(g: &Graph, t: [VertexId; 3]) -> Result<()> {
    for v in t {
        g.check_vertex(v)?;
    }
    let [a, b, c] = t;
    if !(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) {
        return Err(Error::InvalidPins(format!("{t:?} is not a triangle")));
    }
    Ok(())
}

/// Propagates `source[i] ↦ target[i]` across shared edges.
///
/// Over a mapped edge, the apexes not yet mapped go to the apexes not yet
/// used; this is forced when each side has at most one of them. Returns
/// `None` on any conflict: differing triangle counts, a lost injectivity, or
/// a broken adjacency with an already mapped vertex.
pub fn extend_triangle_map(
    g: &Graph,
    source: [VertexId; 3],
    target: [VertexId; 3],
) -> Result<Option<PartialAutomorphism>> {
    check_triangle(g, source)?;
    check_triangle(g, target)?;
    let n = g.vertex_count();
    let mut map: Vec<Option<VertexId>> = vec![None; n];
    let mut used = vec![false; n];
    let mut domain: Vec<VertexId> = Vec::new();
    let mut queue: VecDeque<(VertexId, VertexId)> = VecDeque::new();

    let assign = |v: VertexId,
                  w: VertexId,
                  map: &mut Vec<Option<VertexId>>,
                  used: &mut Vec<bool>,
                  domain: &mut Vec<VertexId>|
     -> bool {
        if used[w] {
            return false;
        }
        if domain.iter().any(|&x| g.has_edge(v, x) != g.has_edge(w, map[x].unwrap())) {
            return false;
        }
        map[v] = Some(w);
        used[w] = true;
        domain.push(v);
        true
    };

    for i in 0..3 {
        if !assign(source[i], target[i], &mut map, &mut used, &mut domain) {
            return Ok(None);
        }
    }
    queue.extend([(source[0], source[1]), (source[0], source[2]), (source[1], source[2])]);
    let mut done = std::collections::HashSet::new();
    while let Some((u, v)) = queue.pop_front() {
        if !done.insert(Edge::new(u, v)) {
            continue;
        }
        let (mu, mv) = (map[u].unwrap(), map[v].unwrap());
        let apexes = g.common_neighbors(u, v);
        let images = g.common_neighbors(mu, mv);
        if apexes.len() != images.len() {
            return Ok(None);
        }
        let mut fresh = Vec::new();
        for &w in &apexes {
            match map[w] {
                Some(mw) if !images.contains(&mw) => return Ok(None),
                Some(_) => {}
                None => fresh.push(w),
            }
        }
        let free: Vec<VertexId> = images.iter().copied().filter(|&w| !used[w]).collect();
        if fresh.len() != free.len() {
            return Ok(None);
        }
        if let ([w], [mw]) = (&fresh[..], &free[..]) {
            if !assign(*w, *mw, &mut map, &mut used, &mut domain) {
                return Ok(None);
            }
        }
        for &w in &apexes {
            if map[w].is_some() {
                queue.push_back((u, w));
                queue.push_back((v, w));
            }
        }
    }
    let frontier = g
        .edges()
        .iter()
        .copied()
        .filter(|e| map[e.lo()].is_some() != map[e.hi()].is_some())
        .collect();
    Ok(Some(PartialAutomorphism { map, frontier }))
}
