//! Membership in the class 𝒦 and the strong-subgraph relation, by peeling.
//!
//! A vertex is removable when it has valency at most 1, or valency 2 with
//! adjacent neighbours. Removability only ever grows as other vertices are
//! deleted, so greedy peeling in any order reaches the same remainder and
//! decides whether every induced subgraph has a removable vertex.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::decomp::edge_equivalence_classes;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

pub const BRUTE_FORCE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovalReason {
    #[serde(rename = "valency_le_1")]
    ValencyLe1,
    /// The two neighbours at the time of removal; they are adjacent.
    #[serde(rename = "triangle_apex")]
    TriangleApex([VertexId; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    pub vertex: VertexId,
    pub reason: RemovalReason,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelSequence {
    pub base: Vec<VertexId>,
    pub steps: Vec<PeelStep>,
}

impl PeelSequence {
    /// Checks the sequence against `g`: every step is removable when taken,
    /// the recorded reason is accurate, and only the base is left at the end.
    pub fn replay(&self, g: &Graph) -> Result<()> {
        let base = vertex_mask(g, &self.base)?;
        let mut alive = vec![true; g.vertex_count()];
        for (i, step) in self.steps.iter().enumerate() {
            let v = step.vertex;
            g.check_vertex(v)?;
            let bad = |why: &str| Err(Error::InvalidPins(format!("peel step {i} (vertex {v}): {why}")));
            if !alive[v] {
                return bad("already removed");
            }
            if base[v] {
                return bad("vertex is in the base");
            }
            let live: Vec<VertexId> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
            match step.reason {
                RemovalReason::ValencyLe1 if live.len() <= 1 => {}
                RemovalReason::TriangleApex([a, b]) if live == [a.min(b), a.max(b)] && g.has_edge(a, b) => {}
                _ => return bad("reason does not match the remaining graph"),
            }
            alive[v] = false;
        }
        if alive.iter().zip(&base).any(|(&a, &b)| a && !b) {
            return Err(Error::InvalidPins("peel sequence leaves non-base vertices".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    EdgeInThreeTriangles(Edge),
    /// The non-empty remainder on which peeling got stuck.
    NoRemovableVertex(Vec<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMembershipReport {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peel: Option<PeelSequence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

/// Outcome of testing `A ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    Strong(PeelSequence),
    NotStrong { stuck: Vec<VertexId> },
}

impl Strength {
    pub fn is_strong(&self) -> bool {
        matches!(self, Strength::Strong(_))
    }

    pub fn peel(&self) -> Option<&PeelSequence> {
        match self {
            Strength::Strong(p) => Some(p),
            Strength::NotStrong { .. } => None,
        }
    }
}

pub(crate) fn vertex_mask(g: &Graph, set: &[VertexId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.vertex_count()];
    for &v in set {
        g.check_vertex(v)?;
        mask[v] = true;
    }
    Ok(mask)
}

fn sorted_set(set: &[VertexId]) -> Vec<VertexId> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Removal reason for `v` in the graph induced on `alive`, if `v` is removable there.
fn removal_reason(g: &Graph, alive: &[bool], live_degree: usize, v: VertexId) -> Option<RemovalReason> {
    match live_degree {
        0 | 1 => Some(RemovalReason::ValencyLe1),
        2 => {
            let mut it = g.neighbors(v).iter().copied().filter(|&w| alive[w]);
            let (a, b) = (it.next()?, it.next()?);
            g.has_edge(a, b).then_some(RemovalReason::TriangleApex([a, b]))
        }
        _ => None,
    }
}

/// Vertices outside `protected` that are removable in `g`.
pub fn removable_vertices(g: &Graph, protected: &[VertexId]) -> Result<Vec<VertexId>> {
    let base = vertex_mask(g, protected)?;
    let alive = vec![true; g.vertex_count()];
    Ok(g.vertices()
        .filter(|&v| !base[v] && removal_reason(g, &alive, g.degree(v), v).is_some())
        .collect())
}

/// Greedy peeling that always removes the candidate with the least `key`.
/// Returns the steps and the stuck non-base remainder.
pub(crate) fn peel_by<K: Ord + Copy>(
    g: &Graph,
    base: &[bool],
    key: impl Fn(VertexId) -> K,
) -> (Vec<PeelStep>, Vec<VertexId>) {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queued = vec![false; n];
    let mut candidates = BTreeSet::new();
    for v in g.vertices() {
        if !base[v] && removal_reason(g, &alive, deg[v], v).is_some() {
            queued[v] = true;
            candidates.insert((key(v), v));
        }
    }
    let mut steps = Vec::new();
    while let Some((_, v)) = candidates.pop_first() {
        // removability is monotone under deletion, so a queued vertex stays removable
        let reason = removal_reason(g, &alive, deg[v], v).expect("queued vertex lost removability");
        steps.push(PeelStep { vertex: v, reason });
        alive[v] = false;
        for &w in g.neighbors(v) {
            if !alive[w] {
                continue;
            }
            deg[w] -= 1;
            if !base[w] && !queued[w] && removal_reason(g, &alive, deg[w], w).is_some() {
                queued[w] = true;
                candidates.insert((key(w), w));
            }
        }
    }
    let stuck = g.vertices().filter(|&v| alive[v] && !base[v]).collect();
    (steps, stuck)
}

/// First edge lying in three or more triangles.
pub(crate) fn overfull_edge(g: &Graph) -> Option<Edge> {
    g.edges().iter().copied().find(|e| g.triangle_count(*e) > 2)
}

pub fn is_in_k(g: &Graph) -> KMembershipReport {
    if let Some(e) = overfull_edge(g) {
        return KMembershipReport {
            member: false,
            peel: None,
            violation: Some(Violation::EdgeInThreeTriangles(e)),
        };
    }
    let (steps, stuck) = peel_by(g, &vec![false; g.vertex_count()], |v| v);
    if stuck.is_empty() {
        KMembershipReport {
            member: true,
            peel: Some(PeelSequence { base: Vec::new(), steps }),
            violation: None,
        }
    } else {
        KMembershipReport {
            member: false,
            peel: None,
            violation: Some(Violation::NoRemovableVertex(stuck)),
        }
    }
}

/// Decides `a ≤ b` by peeling `b` down to `a`, lowest id first.
pub fn is_strong(a: &[VertexId], b: &Graph) -> Result<Strength> {
    let base = vertex_mask(b, a)?;
    let (steps, stuck) = peel_by(b, &base, |v| v);
    Ok(if stuck.is_empty() {
        Strength::Strong(PeelSequence {
            base: sorted_set(a),
            steps,
        })
    } else {
        Strength::NotStrong { stuck }
    })
}

/// Exhaustive oracle: checks every non-empty induced subgraph for a removable vertex.
pub fn brute_force_k_check(g: &Graph) -> Result<bool> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap {
            vertices: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    for &e in g.edges() {
        if (adj[e.lo()] & adj[e.hi()]).count_ones() > 2 {
            return Ok(false);
        }
    }
    for set in 1u32..(1u32 << n) {
        let has_removable = (0..n).filter(|&v| set >> v & 1 == 1).any(|v| {
            let nb = adj[v] & set;
            match nb.count_ones() {
                0 | 1 => true,
                2 => {
                    let a = nb.trailing_zeros() as usize;
                    adj[a] & (nb & (nb - 1)) != 0
                }
                _ => false,
            }
        });
        if !has_removable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|removable_vertices(b, a)|`, defined only when `a ≤ b`.
pub fn count_removable_over(a: &[VertexId], b: &Graph) -> Result<usize> {
    match is_strong(a, b)? {
        Strength::Strong(_) => Ok(removable_vertices(b, a)?.len()),
        Strength::NotStrong { stuck } => Err(Error::NotStrong { stuck }),
    }
}

/// Two triangles on the edge `spine`, with apexes listed in chain order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lozenge {
    pub apexes: [VertexId; 2],
    pub spine: [VertexId; 2],
}

/// Decomposition `p_0, L_1, p_1, ..., L_k, p_k`. Each path is a vertex list
/// that starts or ends at the neighbouring lozenges' apexes; a path of one
/// vertex is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LozengeString {
    pub lozenges: Vec<Lozenge>,
    pub paths: Vec<Vec<VertexId>>,
}

/// Recognises a chain of lozenges joined apex-to-apex by (possibly empty) paths.
/// Requires at least one lozenge; a bare path is not a string.
pub fn is_string_of_lozenges(g: &Graph) -> Option<LozengeString> {
    if g.vertex_count() == 0 || g.components().len() != 1 {
        return None;
    }
    let blocks = edge_equivalence_classes(g);
    let mut block_vertices: Vec<Vec<VertexId>> = Vec::with_capacity(blocks.len());
    let mut blocks_of = vec![Vec::new(); g.vertex_count()];
    for (i, block) in blocks.iter().enumerate() {
        let vs: BTreeSet<VertexId> = block.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
        let vs: Vec<VertexId> = vs.into_iter().collect();
        let shape_ok = block.len() == 1 || (block.len() == 5 && vs.len() == 4);
        if !shape_ok {
            return None;
        }
        for &v in &vs {
            blocks_of[v].push(i);
        }
        block_vertices.push(vs);
    }
    if blocks.iter().all(|b| b.len() == 1) {
        return None;
    }
    let is_cut = |v: VertexId| blocks_of[v].len() > 1;
    if blocks_of.iter().any(|b| b.len() > 2) {
        return None;
    }
    let in_block_degree = |i: usize, v: VertexId| blocks[i].iter().filter(|e| e.contains(v)).count();
    for (i, vs) in block_vertices.iter().enumerate() {
        let cuts: Vec<VertexId> = vs.iter().copied().filter(|&v| is_cut(v)).collect();
        if cuts.len() > 2 {
            return None;
        }
        if blocks[i].len() == 5 && cuts.iter().any(|&v| in_block_degree(i, v) != 2) {
            return None;
        }
    }
    if removable_vertices(g, &[]).ok()?.len() != 2 {
        return None;
    }

    // walk the block-cut path from an end block
    let end = (0..blocks.len()).find(|&i| block_vertices[i].iter().filter(|&&v| is_cut(v)).count() <= 1)?;
    let mut order = vec![end];
    let mut entry: Vec<Option<VertexId>> = vec![None];
    let mut prev_cut = None;
    loop {
        let cur = *order.last().unwrap();
        let next_cut = block_vertices[cur]
            .iter()
            .copied()
            .find(|&v| is_cut(v) && Some(v) != prev_cut);
        let Some(c) = next_cut else { break };
        let next = *blocks_of[c].iter().find(|&&b| b != cur).unwrap();
        order.push(next);
        entry.push(Some(c));
        prev_cut = Some(c);
    }
    if order.len() != blocks.len() {
        return None;
    }

    let mut lozenges = Vec::new();
    let mut paths = Vec::new();
    let mut path: Vec<VertexId> = Vec::new();
    for (k, &b) in order.iter().enumerate() {
        let exit = order.get(k + 1).map(|_| entry[k + 1].unwrap());
        if blocks[b].len() == 1 {
            let e = blocks[b][0];
            let from = entry[k].unwrap_or_else(|| {
                // an end edge starts at its non-cut endpoint
                if Some(e.lo()) == exit {
                    e.hi()
                } else {
                    e.lo()
                }
            });
            let to = if e.lo() == from { e.hi() } else { e.lo() };
            if path.is_empty() {
                path.push(from);
            }
            path.push(to);
        } else {
            let vs = &block_vertices[b];
            let apexes: Vec<VertexId> = vs.iter().copied().filter(|&v| in_block_degree(b, v) == 2).collect();
            let spine: Vec<VertexId> = vs.iter().copied().filter(|&v| in_block_degree(b, v) == 3).collect();
            let first = match (entry[k], exit) {
                (Some(a), _) => a,
                (None, Some(x)) => if apexes[0] == x { apexes[1] } else { apexes[0] },
                (None, None) => apexes[0],
            };
            let second = if apexes[0] == first { apexes[1] } else { apexes[0] };
            if path.is_empty() {
                path.push(first);
            }
            paths.push(std::mem::take(&mut path));
            lozenges.push(Lozenge {
                apexes: [first, second],
                spine: [spine[0], spine[1]],
            });
            path.push(second);
        }
    }
    paths.push(path);
    Some(LozengeString { lozenges, paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::build_level;
    use crate::graph::tests::{c4, lozenge};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k4() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
        let n = rng.gen_range(1..=max_n);
        let p: f64 = rng.gen_range(0.1..0.7);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn removable_examples() {
        let f1 = build_level(1).unwrap();
        assert_eq!(removable_vertices(f1.graph(), &[]).unwrap(), vec![2, 3]);
        assert!(removable_vertices(&k4(), &[]).unwrap().is_empty());
        assert_eq!(removable_vertices(&Graph::empty(1), &[]).unwrap(), vec![0]);
        assert!(removable_vertices(&k4(), &[9]).is_err());
    }

    #[test]
    fn membership_examples() {
        for n in 1..=6 {
            let f = build_level(n).unwrap();
            let r = is_in_k(f.graph());
            assert!(r.member, "F_{n}");
            r.peel.unwrap().replay(f.graph()).unwrap();
        }
        let r = is_in_k(&c4());
        assert_eq!(r.violation, Some(Violation::NoRemovableVertex(vec![0, 1, 2, 3])));
        let three = Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        assert_eq!(
            is_in_k(&three).violation,
            Some(Violation::EdgeInThreeTriangles(Edge::new(0, 1)))
        );
    }

    #[test]
    fn strong_examples() {
        let f1 = build_level(1).unwrap();
        let g = f1.graph();
        assert!(is_strong(&[], g).unwrap().is_strong());
        let s = is_strong(&[0, 1], g).unwrap();
        let steps: Vec<VertexId> = s.peel().unwrap().steps.iter().map(|s| s.vertex).collect();
        assert_eq!(steps, vec![2, 3]);
        assert_eq!(s.peel().unwrap().steps[0].reason, RemovalReason::TriangleApex([0, 1]));
        assert_eq!(is_strong(&[2, 3], g).unwrap(), Strength::NotStrong { stuck: vec![0, 1] });
    }

    #[test]
    fn json_forms() {
        let s = is_strong(&[0, 1], &lozenge()).unwrap();
        let j = serde_json::to_value(s.peel().unwrap()).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"base": [0, 1], "steps": [
                {"vertex": 2, "reason": {"triangle_apex": [0, 1]}},
                {"vertex": 3, "reason": {"triangle_apex": [0, 1]}}]})
        );
        let p = is_in_k(&Graph::new(2, [(0, 1)]).unwrap()).peel.unwrap();
        assert_eq!(serde_json::to_value(p.steps[0]).unwrap()["reason"], "valency_le_1");
        let v = serde_json::to_value(is_in_k(&c4()).violation).unwrap();
        assert_eq!(v, serde_json::json!({"no_removable_vertex": [0, 1, 2, 3]}));
    }

    #[test]
    fn replay_rejects_forgeries() {
        let g = lozenge();
        let bogus = PeelSequence {
            base: vec![],
            steps: vec![PeelStep {
                vertex: 0,
                reason: RemovalReason::ValencyLe1,
            }],
        };
        assert!(bogus.replay(&g).is_err());
        let short = PeelSequence {
            base: vec![0, 1],
            steps: vec![PeelStep {
                vertex: 2,
                reason: RemovalReason::TriangleApex([0, 1]),
            }],
        };
        assert!(short.replay(&g).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert!(brute_force_k_check(build_level(2).unwrap().graph()).unwrap());
        assert!(!brute_force_k_check(&c4()).unwrap());
        assert!(brute_force_k_check(&Graph::empty(17)).is_err());
    }

    #[test]
    fn peeling_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3000 {
            let g = random_graph(&mut rng, 8);
            assert_eq!(is_in_k(&g).member, brute_force_k_check(&g).unwrap(), "{g:?}");
        }
    }

    #[test]
    fn peeling_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut graphs: Vec<Graph> = (1..=4).map(|n| build_level(n).unwrap().into_graph()).collect();
        graphs.extend((0..40).map(|_| random_graph(&mut rng, 9)));
        for g in &graphs {
            let expected = is_in_k(g).member;
            for _ in 0..100 {
                let mut prio: Vec<u32> = (0..g.vertex_count() as u32).collect();
                prio.shuffle(&mut rng);
                let (_, stuck) = peel_by(g, &vec![false; g.vertex_count()], |v| prio[v]);
                assert_eq!(stuck.is_empty() && overfull_edge(g).is_none(), expected);
            }
        }
    }

    #[test]
    fn count_removable_examples() {
        assert_eq!(count_removable_over(&[], build_level(2).unwrap().graph()).unwrap(), 4);
        assert_eq!(count_removable_over(&[0, 1], &lozenge()).unwrap(), 2);
        assert_eq!(count_removable_over(&[], &lozenge()).unwrap(), 2);
        assert!(matches!(count_removable_over(&[2, 3], &lozenge()), Err(Error::NotStrong { .. })));
    }

    /// A = {0, 1}, B = A plus 2, 4 and one vertex on {2, 4}: B∖A is a triangle,
    /// not a string of lozenges, yet only one vertex is removable over A.
    #[test]
    fn two_removables_fails_on_a_triangle_strip() {
        let f = build_level(3).unwrap();
        let g = f.graph();
        let v = g.vertices().find(|&v| f.parent_edge(v) == Some(Edge::new(2, 4))).unwrap();
        let b = g.induced_subgraph([0, 1, 2, 4, v]).unwrap();
        let a: Vec<VertexId> = [0, 1].iter().map(|x| b.from_host[x]).collect();
        assert!(is_strong(&a, &b.graph).unwrap().is_strong());
        assert_eq!(count_removable_over(&a, &b.graph).unwrap(), 1);
        let rest = b.graph.induced_subgraph([2, 3, 4]).unwrap().graph;
        assert!(is_string_of_lozenges(&rest).is_none());
        // adding the one removable vertex to A does not stay strong
        let x = removable_vertices(&b.graph, &a).unwrap()[0];
        let mut bigger = a.clone();
        bigger.push(x);
        assert_eq!(x, b.from_host[&v]);
        assert!(!is_strong(&bigger, &b.graph).unwrap().is_strong());
    }

    #[test]
    fn strings_of_lozenges() {
        let s = is_string_of_lozenges(&lozenge()).unwrap();
        assert_eq!(s.lozenges.len(), 1);
        assert_eq!(s.paths, vec![vec![2], vec![3]]);

        // lozenge 0..3 with apexes 2,3; path 3-4-5; lozenge 5,6,7,8 with apexes 5, 8
        let chain = Graph::new(
            9,
            [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (3, 4), (4, 5), (5, 6), (5, 7), (6, 7), (6, 8), (7, 8)],
        )
        .unwrap();
        let s = is_string_of_lozenges(&chain).unwrap();
        assert_eq!(s.lozenges.len(), 2);
        assert!(s.paths.contains(&vec![3, 4, 5]) || s.paths.contains(&vec![5, 4, 3]));

        assert!(is_string_of_lozenges(build_level(2).unwrap().graph()).is_none());
        assert!(is_string_of_lozenges(&Graph::new(3, [(0, 1), (1, 2)]).unwrap()).is_none());
        // attaching at a spine vertex is not allowed
        let spine = Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4)]).unwrap();
        assert!(is_string_of_lozenges(&spine).is_none());
        // pendant edges on both apexes
        let tails = Graph::new(6, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 5)]).unwrap();
        let s = is_string_of_lozenges(&tails).unwrap();
        assert_eq!(s.paths.len(), 2);
        assert!(s.paths.iter().all(|p| p.len() == 2));
    }
}
