//! The expanded language: minimal triangulated cycle types and the predicates
//! built from them.
//!
//! A minimal triangulated cycle is a simple cycle with its chords that has
//! exactly two removable vertices. Inside the Farey graph these are the
//! triangle strips: unions of triangles along a path in the dual tree.

mod counting;
mod fingerprint;
mod predicates;
mod rigidity;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::build_level;
use crate::graph::{canonical_form, CanonicalCode, Edge, Graph, VertexId};
use crate::kclass::{is_in_k, removable_vertices};

pub use counting::{count_solutions, embeds_bounded, solutions, Atom, Refutation, Verdict};
pub use fingerprint::{qf_fingerprint, Bounds, EpsilonKey, Fingerprinter, PairAtoms, QfFingerprint, SubjectAtoms};
pub use predicates::{
    eval_d, eval_p_c, eval_p_delta, eval_y, p_delta_witnesses, DeltaSequence, EpsilonDescriptor, PDeltaWitness,
    YWitness,
};
pub use rigidity::{extend_triangle_map, PartialAutomorphism};

pub const CYCLE_VERTEX_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType {
    /// `lozenge`, or `strip<k>` followed by the fan/zigzag pattern of its pivots.
    pub name: String,
    pub graph: Graph,
    /// The two removable vertices.
    pub removable_pair: [VertexId; 2],
    /// Distance between the removable vertices inside the type.
    pub span: usize,
    /// Canonical code with the pair pinned, minimised over both pin orders.
    pub code: CanonicalCode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCatalog {
    pub max_vertices: usize,
    pub search_level: u32,
    /// Sorted by vertex count, then span, then name.
    pub types: Vec<CycleType>,
}

impl CycleCatalog {
    pub fn get(&self, name: &str) -> Result<&CycleType> {
        self.types
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::UnknownCycleType(name.to_string()))
    }

    /// Types grouped by span.
    pub fn by_span(&self) -> BTreeMap<usize, Vec<&CycleType>> {
        let mut out: BTreeMap<usize, Vec<&CycleType>> = BTreeMap::new();
        for t in &self.types {
            out.entry(t.span).or_default().push(t);
        }
        out
    }

    /// Parses a comma-separated list of type names; the empty string is the empty sequence.
    pub fn delta(&self, names: &str) -> Result<DeltaSequence> {
        let items = names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|n| self.get(n).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(DeltaSequence::new(items))
    }
}

/// Pinned code for an unordered pair: the smaller of the two pin orders.
pub(crate) fn pair_code(g: &Graph, x: VertexId, y: VertexId) -> Result<CanonicalCode> {
    let a = canonical_form(g, &[x, y])?;
    let b = canonical_form(g, &[y, x])?;
    Ok(a.min(b))
}

/// Every cycle type with at most `max_vertices` vertices, searched in the
/// smallest level that contains every strip of that size.
pub fn enumerate_cycle_types(max_vertices: usize) -> Result<CycleCatalog> {
    let level = max_vertices.saturating_sub(2).max(1) as u32;
    enumerate_cycle_types_at(max_vertices, level)
}

/// Strips of at most `max_vertices` vertices occurring in `F_level`.
pub fn enumerate_cycle_types_at(max_vertices: usize, level: u32) -> Result<CycleCatalog> {
    if max_vertices > CYCLE_VERTEX_CAP {
        return Err(Error::SizeCap {
            vertices: max_vertices,
            cap: CYCLE_VERTEX_CAP,
        });
    }
    let f = build_level(level)?;
    let g = f.graph();
    let max_triangles = max_vertices.saturating_sub(2);

    let mut triangles: Vec<[VertexId; 3]> = Vec::new();
    for &e in g.edges() {
        for w in g.common_neighbors(e.lo(), e.hi()) {
            if w > e.hi() {
                triangles.push([e.lo(), e.hi(), w]);
            }
        }
    }
    let index: HashMap<[VertexId; 3], usize> = triangles.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let tri_of = |a: VertexId, b: VertexId, c: VertexId| {
        let mut t = [a, b, c];
        t.sort_unstable();
        index[&t]
    };
    // dual tree: triangles sharing an edge, with the shared edge
    let mut dual: Vec<Vec<(usize, Edge)>> = vec![Vec::new(); triangles.len()];
    for &e in g.edges() {
        if let [p, q] = g.common_neighbors(e.lo(), e.hi())[..] {
            let (s, t) = (tri_of(e.lo(), e.hi(), p), tri_of(e.lo(), e.hi(), q));
            dual[s].push((t, e));
            dual[t].push((s, e));
        }
    }

    let mut found: BTreeMap<(usize, String), Vec<VertexId>> = BTreeMap::new();
    struct Walk {
        path: Vec<usize>,
        shared: Vec<Edge>,
        pivots: Vec<VertexId>,
    }
    fn pattern(pivots: &[VertexId]) -> String {
        let fwd: String = pivots.windows(2).map(|w| if w[0] == w[1] { 'f' } else { 'z' }).collect();
        let rev: String = fwd.chars().rev().collect();
        fwd.min(rev)
    }
    fn step(
        w: &mut Walk,
        dual: &[Vec<(usize, Edge)>],
        triangles: &[[VertexId; 3]],
        max_triangles: usize,
        found: &mut BTreeMap<(usize, String), Vec<VertexId>>,
    ) {
        let k = w.path.len();
        if k >= 2 {
            found.entry((k, pattern(&w.pivots))).or_insert_with(|| {
                let mut vs: Vec<VertexId> = w.path.iter().flat_map(|&t| triangles[t]).collect();
                vs.sort_unstable();
                vs.dedup();
                vs
            });
        }
        if k == max_triangles {
            return;
        }
        let cur = *w.path.last().unwrap();
        let prev = if k >= 2 { Some(w.path[k - 2]) } else { None };
        for &(next, e) in &dual[cur] {
            if Some(next) == prev {
                continue;
            }
            let pivot = w.shared.last().map(|&s| {
                if e.contains(s.lo()) {
                    s.lo()
                } else {
                    s.hi()
                }
            });
            w.path.push(next);
            w.shared.push(e);
            if let Some(p) = pivot {
                w.pivots.push(p);
            }
            step(w, dual, triangles, max_triangles, found);
            if pivot.is_some() {
                w.pivots.pop();
            }
            w.shared.pop();
            w.path.pop();
        }
    }
    for start in 0..triangles.len() {
        let mut w = Walk {
            path: vec![start],
            shared: Vec::new(),
            pivots: Vec::new(),
        };
        step(&mut w, &dual, &triangles, max_triangles, &mut found);
    }

    let mut by_code: BTreeMap<CanonicalCode, CycleType> = BTreeMap::new();
    for ((k, pat), vs) in found {
        let sub = g.induced_subgraph(vs)?.graph;
        let ty = cycle_type_from_graph(sub, strip_name(k, &pat))?;
        by_code.entry(ty.code.clone()).or_insert(ty);
    }
    let mut types: Vec<CycleType> = by_code.into_values().collect();
    types.sort_by(|a, b| {
        (a.graph.vertex_count(), a.span, &a.name).cmp(&(b.graph.vertex_count(), b.span, &b.name))
    });
    Ok(CycleCatalog {
        max_vertices,
        search_level: level,
        types,
    })
}

fn strip_name(triangles: usize, pattern: &str) -> String {
    match (triangles, pattern) {
        (2, _) => "lozenge".into(),
        (k, "") => format!("strip{k}"),
        (k, p) => format!("strip{k}-{p}"),
    }
}

/// Wraps a graph as a cycle type after checking it is in 𝒦 with exactly two
/// removable vertices.
pub fn cycle_type_from_graph(graph: Graph, name: String) -> Result<CycleType> {
    if !is_in_k(&graph).member {
        return Err(Error::UnknownCycleType(format!("{name}: not in 𝒦")));
    }
    let rem = removable_vertices(&graph, &[])?;
    let [x, y] = rem[..] else {
        return Err(Error::UnknownCycleType(format!("{name}: {} removable vertices", rem.len())));
    };
    let span = graph
        .distance(x, y)?
        .ok_or_else(|| Error::UnknownCycleType(format!("{name}: disconnected")))?;
    let code = pair_code(&graph, x, y)?;
    Ok(CycleType {
        name,
        graph,
        removable_pair: [x, y],
        span,
        code,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::tests::lozenge;
    use std::collections::BTreeSet;
    use std::sync::OnceLock;

    pub fn catalog() -> &'static CycleCatalog {
        static CAT: OnceLock<CycleCatalog> = OnceLock::new();
        CAT.get_or_init(|| enumerate_cycle_types(8).unwrap())
    }

    #[test]
    fn small_catalog() {
        let c = enumerate_cycle_types(4).unwrap();
        assert_eq!(c.types.len(), 1);
        let l = &c.types[0];
        assert_eq!((l.name.as_str(), l.span, l.removable_pair), ("lozenge", 2, [2, 3]));
        assert_eq!(l.graph, lozenge());
        let tri = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(cycle_type_from_graph(tri, "triangle".into()).is_err());
        assert!(enumerate_cycle_types(13).is_err());
    }

    #[test]
    fn every_type_is_minimal() {
        let c = catalog();
        for t in &c.types {
            assert!(is_in_k(&t.graph).member, "{}", t.name);
            assert_eq!(removable_vertices(&t.graph, &[]).unwrap().len(), 2, "{}", t.name);
            assert_eq!(t.graph.edge_count(), 2 * t.graph.vertex_count() - 3, "{}", t.name);
            assert!(t.span >= 2, "nothing has span 1");
        }
        // strips with k triangles: 1, 1, 2, 3, 6 types for k = 2..6
        let counts: Vec<usize> = (4..=8)
            .map(|n| c.types.iter().filter(|t| t.graph.vertex_count() == n).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 6]);
    }

    #[test]
    fn saturated_at_the_search_level() {
        let base = enumerate_cycle_types(7).unwrap();
        let more = enumerate_cycle_types_at(7, base.search_level + 1).unwrap();
        assert_eq!(base.types, more.types);
    }

    /// Independent oracle: connected vertex sets of F_4 that induce a graph in 𝒦 with
    /// 2v-3 edges and exactly two removable vertices.
    #[test]
    fn matches_subset_search() {
        let g = build_level(4).unwrap().into_graph();
        let max = 6;
        let mut codes = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut frontier: Vec<Vec<VertexId>> = g.vertices().map(|v| vec![v]).collect();
        while let Some(set) = frontier.pop() {
            if !seen.insert(set.clone()) {
                continue;
            }
            let sub = g.induced_subgraph(set.clone()).unwrap().graph;
            if set.len() >= 4 && sub.edge_count() == 2 * set.len() - 3 && is_in_k(&sub).member {
                let rem = removable_vertices(&sub, &[]).unwrap();
                if rem.len() == 2 {
                    codes.insert(pair_code(&sub, rem[0], rem[1]).unwrap());
                }
            }
            if set.len() < max {
                for &v in &set {
                    for &w in g.neighbors(v) {
                        if set.binary_search(&w).is_err() {
                            let mut next = set.clone();
                            next.insert(next.binary_search(&w).unwrap_err(), w);
                            frontier.push(next);
                        }
                    }
                }
            }
        }
        let cat: BTreeSet<CanonicalCode> = enumerate_cycle_types(max).unwrap().types.into_iter().map(|t| t.code).collect();
        assert_eq!(cat, codes);
    }

    #[test]
    fn delta_parsing() {
        let c = catalog();
        let d = c.delta("lozenge,lozenge").unwrap();
        assert_eq!(d.total_span(), 4);
        assert!(c.delta("").unwrap().is_empty());
        assert!(matches!(c.delta("nope"), Err(Error::UnknownCycleType(_))));
        // the lozenge and the fans strip3, strip4-f, strip5-ff, strip6-fff
        assert_eq!(c.by_span()[&2].len(), 5);
    }
}
