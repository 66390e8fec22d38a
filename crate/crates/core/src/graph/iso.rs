//! Pinned induced-subgraph embedding search.
//!
//! A backtracking matcher in the VF2 spirit: pattern vertices are matched in a
//! connectivity-first order, candidates come from the neighbourhood of an
//! already-matched pattern neighbour, and each candidate is checked for both
//! edges and non-edges against everything matched so far.

use std::ops::ControlFlow;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

const UNMAPPED: VertexId = VertexId::MAX;

struct Plan {
    order: Vec<VertexId>,
    /// For `order[i]`, a pattern neighbour placed earlier, if any.
    anchor: Vec<Option<VertexId>>,
    /// For `order[i]`, the earlier positions it must be checked against.
    earlier: Vec<Vec<(VertexId, bool)>>,
}

fn plan(pattern: &Graph, pinned: &[VertexId]) -> Plan {
    let n = pattern.vertex_count();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let place = |v: VertexId, order: &mut Vec<VertexId>, placed: &mut Vec<bool>, links: &mut Vec<usize>| {
        placed[v] = true;
        order.push(v);
        for &w in pattern.neighbors(v) {
            links[w] += 1;
        }
    };
    for &p in pinned {
        place(p, &mut order, &mut placed, &mut links);
    }
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                links[a]
                    .cmp(&links[b])
                    .then(pattern.degree(a).cmp(&pattern.degree(b)))
                    .then(b.cmp(&a))
            })
            .unwrap();
        place(next, &mut order, &mut placed, &mut links);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let anchor = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| pos[w] < i)
                .min_by_key(|&w| pos[w])
        })
        .collect();
    let earlier = order
        .iter()
        .enumerate()
        .map(|(i, &v)| order[..i].iter().map(|&w| (w, pattern.has_edge(v, w))).collect())
        .collect();
    Plan { order, anchor, earlier }
}

/// Visits every injective map `pattern -> host` that preserves edges and
/// non-edges and extends `pins` (pairs `(pattern vertex, host vertex)`).
/// The slice handed to `visit` is indexed by pattern vertex.
pub fn for_each_induced_embedding<F>(pattern: &Graph, host: &Graph, pins: &[(VertexId, VertexId)], mut visit: F) -> Result<()>
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    validate_pins(pattern, host, pins)?;
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(());
    }
    let pinned: Vec<VertexId> = pins.iter().map(|p| p.0).collect();
    let plan = plan(pattern, &pinned);
    let mut map = vec![UNMAPPED; pattern.vertex_count()];
    let mut used = vec![false; host.vertex_count()];
    let mut search = Search {
        pattern,
        host,
        plan: &plan,
        pins,
        map: &mut map,
        used: &mut used,
    };
    let _ = search.extend(0, &mut visit);
    Ok(())
}

/// Collects up to `limit` embeddings (all of them when `limit` is `None`).
pub fn induced_embeddings(
    pattern: &Graph,
    host: &Graph,
    pins: &[(VertexId, VertexId)],
    limit: Option<usize>,
) -> Result<Vec<Vec<VertexId>>> {
    let mut out = Vec::new();
    for_each_induced_embedding(pattern, host, pins, |m| {
        out.push(m.to_vec());
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// An isomorphism `g1 -> g2` extending `pin_map`, as `result[v1] = v2`.
pub fn find_isomorphism(g1: &Graph, g2: &Graph, pin_map: &[(VertexId, VertexId)]) -> Result<Option<Vec<VertexId>>> {
    validate_pins(g1, g2, pin_map)?;
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let mut d1: Vec<usize> = g1.vertices().map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = g2.vertices().map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(None);
    }
    Ok(induced_embeddings(g1, g2, pin_map, Some(1))?.pop())
}

fn validate_pins(pattern: &Graph, host: &Graph, pins: &[(VertexId, VertexId)]) -> Result<()> {
    let mut seen_p = vec![false; pattern.vertex_count()];
    let mut seen_h = vec![false; host.vertex_count()];
    for &(p, h) in pins {
        if p >= pattern.vertex_count() || h >= host.vertex_count() {
            return Err(Error::InvalidPins(format!("pin {p}->{h} out of range")));
        }
        if std::mem::replace(&mut seen_p[p], true) || std::mem::replace(&mut seen_h[h], true) {
            return Err(Error::InvalidPins(format!("pin {p}->{h} is not injective")));
        }
    }
    Ok(())
}

struct Search<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    plan: &'a Plan,
    pins: &'a [(VertexId, VertexId)],
    map: &'a mut Vec<VertexId>,
    used: &'a mut Vec<bool>,
}

impl Search<'_> {
    fn fits(&self, i: usize, v: VertexId, h: VertexId) -> bool {
        if self.used[h] || self.host.degree(h) < self.pattern.degree(v) {
            return false;
        }
        self.plan.earlier[i]
            .iter()
            .all(|&(w, adjacent)| self.host.has_edge(h, self.map[w]) == adjacent)
    }

    fn extend<F>(&mut self, i: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[VertexId]) -> ControlFlow<()>,
    {
        if i == self.plan.order.len() {
            return visit(self.map);
        }
        let v = self.plan.order[i];
        if i < self.pins.len() {
            let h = self.pins[i].1;
            if self.fits(i, v, h) {
                return self.descend(i, v, h, visit);
            }
            return ControlFlow::Continue(());
        }
        match self.plan.anchor[i] {
            Some(a) => {
                let host = self.host;
                for &h in host.neighbors(self.map[a]) {
                    if self.fits(i, v, h) {
                        self.descend(i, v, h, visit)?;
                    }
                }
            }
            None => {
                for h in self.host.vertices() {
                    if self.fits(i, v, h) {
                        self.descend(i, v, h, visit)?;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn descend<F>(&mut self, i: usize, v: VertexId, h: VertexId, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[VertexId]) -> ControlFlow<()>,
    {
        self.map[v] = h;
        self.used[h] = true;
        let r = self.extend(i + 1, visit);
        self.used[h] = false;
        self.map[v] = UNMAPPED;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{c4, lozenge};

    fn is_iso(g1: &Graph, g2: &Graph, m: &[VertexId]) -> bool {
        g1.vertices()
            .all(|u| g1.vertices().all(|v| g1.has_edge(u, v) == g2.has_edge(m[u], m[v])))
    }

    #[test]
    fn pinned_swap_on_lozenge() {
        let g = lozenge();
        let m = find_isomorphism(&g, &g, &[(0, 1), (1, 0)]).unwrap().unwrap();
        assert_eq!((m[0], m[1]), (1, 0));
        assert!(is_iso(&g, &g, &m));
        let all = induced_embeddings(&g, &g, &[(0, 1), (1, 0)], None).unwrap();
        assert_eq!(all.len(), 2, "2 and 3 are free");
    }

    #[test]
    fn size_mismatch_and_identity() {
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(find_isomorphism(&tri, &lozenge(), &[]).unwrap(), None);
        let g = lozenge();
        let pins: Vec<_> = g.vertices().map(|v| (v, v)).collect();
        assert_eq!(find_isomorphism(&g, &g, &pins).unwrap(), Some(vec![0, 1, 2, 3]));
        assert_eq!(find_isomorphism(&g, &c4(), &[]).unwrap(), None);
    }

    #[test]
    fn induced_means_non_edges_too() {
        // a path on 3 vertices is a subgraph of a triangle but not an induced one
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let tri = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(induced_embeddings(&p3, &tri, &[], None).unwrap().is_empty());
        // 2-0-3 and 2-1-3, each in both orientations
        let emb = induced_embeddings(&p3, &lozenge(), &[], None).unwrap();
        assert_eq!(emb.len(), 4);
    }

    #[test]
    fn bad_pins() {
        let g = lozenge();
        assert!(find_isomorphism(&g, &g, &[(0, 1), (1, 1)]).is_err());
        assert!(find_isomorphism(&g, &g, &[(0, 9)]).is_err());
    }
}
