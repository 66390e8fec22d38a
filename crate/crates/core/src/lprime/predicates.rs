//! Evaluators for `P_C`, `P_δ`, `D_n` and `Y_ε`.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::{Serialize, Serializer};

use super::CycleType;
use crate::error::Result;
use crate::farey::build_level;
use crate::graph::{induced_embeddings, Graph, VertexId};

/// A finite sequence of cycle types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaSequence {
    pub items: Vec<CycleType>,
}

impl DeltaSequence {
    pub fn new(items: Vec<CycleType>) -> Self {
        DeltaSequence { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_span(&self) -> usize {
        self.items.iter().map(|c| c.span).sum()
    }

    pub fn names(&self) -> Vec<&str> {
        self.items.iter().map(|c| c.name.as_str()).collect()
    }
}

impl Serialize for DeltaSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            items: Vec<&'a str>,
            total_span: usize,
        }
        View {
            items: self.names(),
            total_span: self.total_span(),
        }
        .serialize(s)
    }
}

/// Connecting points `z_0 = x, ..., z_m = y` and, per link, the copy of the
/// cycle type (`copies[i][type vertex] = host vertex`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PDeltaWitness {
    pub connecting_points: Vec<VertexId>,
    pub copies: Vec<Vec<VertexId>>,
}

/// Three sequences and a Farey level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonDescriptor {
    pub d1: DeltaSequence,
    pub d2: DeltaSequence,
    pub d3: DeltaSequence,
    pub level: u32,
}

impl EpsilonDescriptor {
    pub fn total_length(&self) -> usize {
        self.d1.len() + self.d2.len() + self.d3.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YWitness {
    /// `x', y', z'`.
    pub primes: [VertexId; 3],
    /// Embedding of the Farey level sending `0, 1, 2` to the primes.
    pub extension: Vec<VertexId>,
    pub links: [PDeltaWitness; 3],
}

/// An induced copy of `c` in which `x` and `y` are the removable vertices.
pub fn eval_p_c(g: &Graph, c: &CycleType, x: VertexId, y: VertexId) -> Result<Option<Vec<VertexId>>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Ok(None);
    }
    let [p, q] = c.removable_pair;
    for pins in [[(p, x), (q, y)], [(p, y), (q, x)]] {
        if let Some(m) = induced_embeddings(&c.graph, g, &pins, Some(1))?.pop() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

pub fn eval_p_delta(g: &Graph, d: &DeltaSequence, x: VertexId, y: VertexId) -> Result<Option<PDeltaWitness>> {
    Ok(p_delta_witnesses(g, d, x, y, Some(1))?.pop())
}

/// Witnesses for `P_δ(x, y)`, up to `limit` of them.
///
/// A copy of a type with span `k` holds a path of length `k`, so the
/// distance clause forces `d(x, z_i)` to equal the span of the first `i`
/// links and `z_i` to lie on a geodesic. Only such points are tried.
pub fn p_delta_witnesses(
    g: &Graph,
    d: &DeltaSequence,
    x: VertexId,
    y: VertexId,
    limit: Option<usize>,
) -> Result<Vec<PDeltaWitness>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if d.is_empty() {
        return Ok(if x == y {
            vec![PDeltaWitness {
                connecting_points: vec![x],
                copies: Vec::new(),
            }]
        } else {
            Vec::new()
        });
    }
    let dx = g.bfs_distances(x);
    let total = d.total_span();
    if dx[y] != Some(total) {
        return Ok(Vec::new());
    }
    let dy = g.bfs_distances(y);
    let m = d.len();
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0);
    for c in &d.items {
        prefix.push(prefix.last().unwrap() + c.span);
    }
    let candidates: Vec<Vec<VertexId>> = (0..=m)
        .map(|i| {
            g.vertices()
                .filter(|&v| dx[v] == Some(prefix[i]) && dy[v] == Some(total - prefix[i]))
                .collect()
        })
        .collect();

    struct Search<'a> {
        g: &'a Graph,
        d: &'a DeltaSequence,
        candidates: Vec<Vec<VertexId>>,
        dead: Vec<Vec<bool>>,
        points: Vec<VertexId>,
        copies: Vec<Vec<VertexId>>,
        out: Vec<PDeltaWitness>,
        limit: Option<usize>,
    }
    impl Search<'_> {
        fn full(&self) -> bool {
            self.limit.is_some_and(|l| self.out.len() >= l)
        }

        /// Extends from `points.last()` at stage `i`; true if some witness was completed.
        fn go(&mut self, i: usize) -> Result<bool> {
            if i == self.d.len() {
                self.out.push(PDeltaWitness {
                    connecting_points: self.points.clone(),
                    copies: self.copies.clone(),
                });
                return Ok(true);
            }
            let from = *self.points.last().unwrap();
            let mut any = false;
            for k in 0..self.candidates[i + 1].len() {
                let z = self.candidates[i + 1][k];
                if self.dead[i + 1][k] {
                    continue;
                }
                let Some(copy) = eval_p_c(self.g, &self.d.items[i], from, z)? else {
                    continue;
                };
                self.points.push(z);
                self.copies.push(copy);
                let done = self.go(i + 1)?;
                self.points.pop();
                self.copies.pop();
                if done {
                    any = true;
                } else {
                    self.dead[i + 1][k] = true;
                }
                if self.full() {
                    break;
                }
            }
            Ok(any)
        }
    }
    let dead = candidates.iter().map(|c| vec![false; c.len()]).collect();
    let mut s = Search {
        g,
        d,
        candidates,
        dead,
        points: vec![x],
        copies: Vec::new(),
        out: Vec::new(),
        limit,
    };
    s.go(0)?;
    Ok(s.out)
}

/// Embeddings of `F_level` into `g` sending `0, 1, 2` to `x, y, z`
/// (`map[farey vertex] = host vertex`). Each one fixes an enumeration order.
pub fn eval_d(g: &Graph, level: u32, x: VertexId, y: VertexId, z: VertexId) -> Result<Vec<Vec<VertexId>>> {
    for v in [x, y, z] {
        g.check_vertex(v)?;
    }
    if x == y || y == z || x == z {
        return Ok(Vec::new());
    }
    let f = build_level(level)?;
    induced_embeddings(f.graph(), g, &[(0, x), (1, y), (2, z)], None)
}

/// Vertices `v` with `P_δ(u, v)`, with a witness each.
pub(crate) fn p_delta_targets(g: &Graph, d: &DeltaSequence, u: VertexId) -> Result<Vec<(VertexId, PDeltaWitness)>> {
    let du = g.bfs_distances(u);
    let span = d.total_span();
    let mut out = Vec::new();
    for v in g.vertices().filter(|&v| du[v] == Some(span)) {
        if let Some(w) = eval_p_delta(g, d, u, v)? {
            out.push((v, w));
        }
    }
    Ok(out)
}

pub fn eval_y(g: &Graph, e: &EpsilonDescriptor, x: VertexId, y: VertexId, z: VertexId) -> Result<Option<YWitness>> {
    let cx = p_delta_targets(g, &e.d1, x)?;
    let cy = p_delta_targets(g, &e.d2, y)?;
    let cz = p_delta_targets(g, &e.d3, z)?;
    let mut memo: HashMap<[VertexId; 3], Option<Vec<VertexId>>> = HashMap::new();
    for (xp, wx) in &cx {
        for (yp, wy) in cy.iter().filter(|(v, _)| g.has_edge(*xp, *v)) {
            for (zp, wz) in cz.iter().filter(|(v, _)| g.has_edge(*xp, *v) && g.has_edge(*yp, *v)) {
                let key = [*xp, *yp, *zp];
                if let Entry::Vacant(slot) = memo.entry(key) {
                    slot.insert(eval_d(g, e.level, *xp, *yp, *zp)?.into_iter().next());
                }
                if let Some(ext) = &memo[&key] {
                    return Ok(Some(YWitness {
                        primes: key,
                        extension: ext.clone(),
                        links: [wx.clone(), wy.clone(), wz.clone()],
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::tests::two_lozenges;
    use crate::farey::build_level;
    use crate::lprime::tests::catalog;
    use crate::model::{build_tree_model, ModelSpec, SpecEdge, SpecNode};

    fn lozenge_type() -> &'static CycleType {
        catalog().get("lozenge").unwrap()
    }

    /// Every tuple of intermediate points, no geodesic restriction.
    fn brute_p_delta(g: &Graph, d: &DeltaSequence, x: VertexId, y: VertexId) -> bool {
        if d.is_empty() {
            return x == y;
        }
        if g.distance(x, y).unwrap() != Some(d.total_span()) {
            return false;
        }
        fn go(g: &Graph, d: &DeltaSequence, i: usize, from: VertexId, y: VertexId) -> bool {
            if i + 1 == d.len() {
                return eval_p_c(g, &d.items[i], from, y).unwrap().is_some();
            }
            g.vertices()
                .any(|z| eval_p_c(g, &d.items[i], from, z).unwrap().is_some() && go(g, d, i + 1, z, y))
        }
        go(g, d, 0, x, y)
    }

    #[test]
    fn p_c_examples() {
        let f1 = build_level(1).unwrap().into_graph();
        let w = eval_p_c(&f1, lozenge_type(), 2, 3).unwrap().unwrap();
        let mut img = w.clone();
        img.sort_unstable();
        assert_eq!(img, vec![0, 1, 2, 3]);
        assert!(eval_p_c(&f1, lozenge_type(), 0, 1).unwrap().is_none());
        let f2 = build_level(2).unwrap().into_graph();
        let w = eval_p_c(&f2, lozenge_type(), 4, 1).unwrap().unwrap();
        let mut img = w.clone();
        img.sort_unstable();
        assert_eq!(img, vec![0, 1, 2, 4]);
        assert!(eval_p_c(&f2, lozenge_type(), 4, 4).unwrap().is_none());
    }

    #[test]
    fn p_c_is_symmetric() {
        let g = build_level(3).unwrap().into_graph();
        for t in catalog().types.iter().take(5) {
            for x in g.vertices() {
                for y in g.vertices() {
                    let a = eval_p_c(&g, t, x, y).unwrap().is_some();
                    let b = eval_p_c(&g, t, y, x).unwrap().is_some();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn p_delta_examples() {
        let cat = catalog();
        let g = two_lozenges();
        let empty = DeltaSequence::default();
        assert!(eval_p_delta(&g, &empty, 4, 4).unwrap().is_some());
        assert!(eval_p_delta(&g, &empty, 4, 5).unwrap().is_none());
        let ll = cat.delta("lozenge,lozenge").unwrap();
        let w = eval_p_delta(&g, &ll, 2, 6).unwrap().unwrap();
        assert_eq!(w.connecting_points, vec![2, 3, 6]);
        assert_eq!(g.distance(2, 6).unwrap(), Some(4));
        // distance 3 rules out a single lozenge
        let path_end = Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (3, 4)]).unwrap();
        assert_eq!(path_end.distance(2, 4).unwrap(), Some(3));
        assert!(eval_p_delta(&path_end, &cat.delta("lozenge").unwrap(), 2, 4).unwrap().is_none());
    }

    #[test]
    fn witnesses_replay() {
        let cat = catalog();
        let g = build_level(4).unwrap().into_graph();
        let deltas = ["lozenge", "lozenge,lozenge", "strip3", "lozenge,strip3"];
        for names in deltas {
            let d = cat.delta(names).unwrap();
            for x in [0, 2, 5] {
                for y in g.vertices() {
                    for w in p_delta_witnesses(&g, &d, x, y, None).unwrap() {
                        assert_eq!(w.connecting_points.first(), Some(&x));
                        assert_eq!(w.connecting_points.last(), Some(&y));
                        for (i, pair) in w.connecting_points.windows(2).enumerate() {
                            assert!(eval_p_c(&g, &d.items[i], pair[0], pair[1]).unwrap().is_some());
                            let copy = &w.copies[i];
                            let [p, q] = d.items[i].removable_pair;
                            let ends = [copy[p], copy[q]];
                            assert!(ends == [pair[0], pair[1]] || ends == [pair[1], pair[0]]);
                        }
                        assert_eq!(g.distance(x, y).unwrap(), Some(d.total_span()));
                    }
                }
            }
        }
    }

    #[test]
    fn interval_search_matches_brute_force() {
        let cat = catalog();
        let spec = ModelSpec {
            nodes: vec![SpecNode { id: 0, level: 2 }, SpecNode { id: 1, level: 1 }, SpecNode { id: 2, level: 1 }],
            edges: vec![
                SpecEdge { u: 0, v: 1, attach_u: 5, attach_v: 2 },
                SpecEdge { u: 1, v: 2, attach_u: 3, attach_v: 2 },
            ],
        };
        let g = build_tree_model(&spec).unwrap().graph;
        assert!(g.vertex_count() <= 30);
        for names in ["lozenge", "lozenge,lozenge", "strip3,lozenge", "lozenge,lozenge,lozenge"] {
            let d = cat.delta(names).unwrap();
            for x in g.vertices() {
                for y in g.vertices() {
                    assert_eq!(
                        eval_p_delta(&g, &d, x, y).unwrap().is_some(),
                        brute_p_delta(&g, &d, x, y),
                        "{names} {x} {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn d_examples() {
        let f1 = build_level(1).unwrap().into_graph();
        assert_eq!(eval_d(&f1, 1, 0, 1, 2).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert!(eval_d(&f1, 1, 2, 3, 0).unwrap().is_empty());
        let f3 = build_level(3).unwrap().into_graph();
        assert!(!eval_d(&f3, 1, 0, 1, 2).unwrap().is_empty());
        assert!(eval_d(&f3, 1, 0, 0, 2).unwrap().is_empty());
    }

    #[test]
    fn y_examples() {
        let g = two_lozenges();
        let e0 = EpsilonDescriptor {
            d1: DeltaSequence::default(),
            d2: DeltaSequence::default(),
            d3: DeltaSequence::default(),
            level: 1,
        };
        for (x, y, z) in [(0, 1, 2), (0, 1, 3), (2, 3, 0), (3, 4, 5), (0, 2, 3)] {
            assert_eq!(
                eval_y(&g, &e0, x, y, z).unwrap().is_some(),
                !eval_d(&g, 1, x, y, z).unwrap().is_empty()
            );
        }
        // z = 6 reaches the apex 3 of the first lozenge through the second one
        let e = EpsilonDescriptor {
            d3: catalog().delta("lozenge").unwrap(),
            ..e0.clone()
        };
        let w = eval_y(&g, &e, 0, 1, 6).unwrap().unwrap();
        assert_eq!(w.primes, [0, 1, 3]);
        // no copy of F_2 anywhere
        let e2 = EpsilonDescriptor { level: 2, ..e };
        assert!(eval_y(&g, &e2, 0, 1, 6).unwrap().is_none());
    }
}
