//! Canonical labelling of small graphs with an ordered list of pinned vertices.
//!
//! Individualisation-refinement: the pins start as singleton cells in pin
//! order, the partition is refined to an equitable one, and the search tree
//! branches on the first smallest non-singleton cell. The canonical code is
//! the least adjacency code over all leaves. Automorphisms found at leaves with
//! equal codes prune sibling branches lying in one orbit of the stabiliser of
//! the current prefix.

use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::error::{Error, Result};

pub const DEFAULT_CANON_CAP: usize = 16;

const MAX_STORED_AUTOMORPHISMS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode {
    /// Vertex count, pin count, then the upper-triangle adjacency bits in canonical order.
    #[serde(with = "hex_bytes")]
    pub code: Vec<u8>,
    /// Canonical position of each pin.
    pub pin_images: Vec<usize>,
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        s.serialize_str(&hex)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd-length hex string"));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn canonical_form(g: &Graph, pins: &[VertexId]) -> Result<CanonicalCode> {
    canonical_form_with_cap(g, pins, DEFAULT_CANON_CAP)
}

pub fn canonical_form_with_cap(g: &Graph, pins: &[VertexId], cap: usize) -> Result<CanonicalCode> {
    canonical_labeling(g, pins, cap).map(|(code, _)| code)
}

/// Canonical code plus the labelling realising it (`labeling[position] = vertex`).
pub(crate) fn canonical_labeling(g: &Graph, pins: &[VertexId], cap: usize) -> Result<(CanonicalCode, Vec<VertexId>)> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::SizeCap { vertices: n, cap });
    }
    let mut seen = vec![false; n];
    for &p in pins {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPins(format!("pin {p} is out of range or repeated")));
        }
    }
    let mut cells: Vec<Vec<VertexId>> = pins.iter().map(|&p| vec![p]).collect();
    let rest: Vec<VertexId> = (0..n).filter(|&v| !seen[v]).collect();
    if !rest.is_empty() {
        cells.push(rest);
    }
    let mut search = Search {
        g,
        best: None,
        first: None,
        automorphisms: Vec::new(),
    };
    search.descend(cells, &mut Vec::new());
    let (code, labeling) = search.best.unwrap_or_default();
    let mut bytes = Vec::with_capacity(8 + code.len());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.extend_from_slice(&(pins.len() as u32).to_le_bytes());
    bytes.extend(code);
    Ok((
        CanonicalCode {
            code: bytes,
            pin_images: (0..pins.len()).collect(),
        },
        labeling,
    ))
}

/// Splits cells by neighbour counts into each splitter cell until stable.
/// Every decision depends only on counts and cell sizes, so the result is
/// equivariant under relabelling.
fn refine(g: &Graph, mut cells: Vec<Vec<VertexId>>) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut in_splitter = vec![false; n];
    let mut s = 0;
    while s < cells.len() {
        for &v in &cells[s] {
            in_splitter[v] = true;
        }
        let mut changed = false;
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(usize, VertexId)> = cell
                .iter()
                .map(|&v| (g.neighbors(v).iter().filter(|&&w| in_splitter[w]).count(), v))
                .collect();
            keyed.sort_unstable();
            if keyed.first().map(|k| k.0) == keyed.last().map(|k| k.0) {
                next.push(cell.clone());
                continue;
            }
            changed = true;
            let mut group = Vec::new();
            let mut key = keyed[0].0;
            for (k, v) in keyed {
                if k != key {
                    next.push(std::mem::take(&mut group));
                    key = k;
                }
                group.push(v);
            }
            next.push(group);
        }
        for &v in &cells[s] {
            in_splitter[v] = false;
        }
        cells = next;
        s = if changed { 0 } else { s + 1 };
    }
    cells
}

fn leaf_code(g: &Graph, labeling: &[VertexId]) -> Vec<u8> {
    let n = labeling.len();
    let mut bits = vec![0u8; (n * n.saturating_sub(1) / 2).div_ceil(8)];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(labeling[i], labeling[j]) {
                bits[k / 8] |= 1 << (k % 8);
            }
            k += 1;
        }
    }
    bits
}

struct Search<'g> {
    g: &'g Graph,
    best: Option<(Vec<u8>, Vec<VertexId>)>,
    first: Option<(Vec<u8>, Vec<VertexId>)>,
    automorphisms: Vec<Vec<VertexId>>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<Vec<VertexId>>, prefix: &mut Vec<VertexId>) {
        let cells = refine(self.g, cells);
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i);
        let Some(t) = target else {
            let labeling: Vec<VertexId> = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(labeling);
            return;
        };
        let mut explored: Vec<VertexId> = Vec::new();
        for &v in &cells[t] {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(vec![v]);
            child.push(cells[t].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[t + 1..]);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, labeling: Vec<VertexId>) {
        let code = leaf_code(self.g, &labeling);
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.0 == code {
                let mut gamma = vec![0; labeling.len()];
                for (pos, &v) in labeling.iter().enumerate() {
                    gamma[v] = reference.1[pos];
                }
                if self.automorphisms.len() < MAX_STORED_AUTOMORPHISMS && gamma.iter().enumerate().any(|(i, &x)| i != x) {
                    self.automorphisms.push(gamma);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), labeling.clone()));
        }
        if self.best.as_ref().is_none_or(|b| code < b.0) {
            self.best = Some((code, labeling));
        }
    }

    /// Whether `v` shares an orbit with an explored sibling under the known
    /// automorphisms that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[VertexId], explored: &[VertexId], v: VertexId) -> bool {
        let n = self.g.vertex_count();
        let mut parent: Vec<VertexId> = (0..n).collect();
        fn find(p: &mut [VertexId], mut x: VertexId) -> VertexId {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().any(|&p| gamma[p] != p) {
                continue;
            }
            any = true;
            for (x, &y) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{c4, lozenge};
    use crate::graph::find_isomorphism;

    fn relabel(g: &Graph, perm: &[VertexId]) -> Graph {
        Graph::new(g.vertex_count(), g.edges().iter().map(|e| (perm[e.lo()], perm[e.hi()]))).unwrap()
    }

    #[test]
    fn lozenge_relabelings_agree() {
        let g = lozenge();
        let base = canonical_form(&g, &[]).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [0, 3, 1, 2]] {
            assert_eq!(canonical_form(&relabel(&g, &perm), &[]).unwrap(), base);
        }
        assert_ne!(canonical_form(&c4(), &[]).unwrap(), base);
    }

    #[test]
    fn pins_distinguish_orbits() {
        let g = lozenge();
        let apexes = canonical_form(&g, &[2, 3]).unwrap();
        let spine = canonical_form(&g, &[0, 1]).unwrap();
        assert_ne!(apexes, spine);
        // brute force agrees: no isomorphism sends (2,3) to (0,1)
        assert_eq!(find_isomorphism(&g, &g, &[(2, 0), (3, 1)]).unwrap(), None);
        assert_eq!(canonical_form(&g, &[3, 2]).unwrap(), apexes);
    }

    #[test]
    fn highly_symmetric_graphs_finish() {
        let empty = Graph::empty(16);
        let k16 = Graph::new(16, (0..16).flat_map(|u| (u + 1..16).map(move |v| (u, v)))).unwrap();
        assert_ne!(canonical_form(&empty, &[]).unwrap(), canonical_form(&k16, &[]).unwrap());
        assert!(canonical_form(&Graph::empty(17), &[]).is_err());
    }

    #[test]
    fn labeling_realises_code() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let (code, lab) = canonical_labeling(&g, &[2], DEFAULT_CANON_CAP).unwrap();
        assert_eq!(lab[0], 2);
        let mut inv = vec![0; 6];
        for (pos, &v) in lab.iter().enumerate() {
            inv[v] = pos;
        }
        let relabeled = relabel(&g, &inv);
        let (code2, lab2) = canonical_labeling(&relabeled, &[0], DEFAULT_CANON_CAP).unwrap();
        assert_eq!(code, code2);
        assert_eq!(lab2[0], 0);
    }
}
