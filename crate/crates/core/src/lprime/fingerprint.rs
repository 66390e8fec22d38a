//! Bounded quantifier-free types of a vertex over a parameter tuple.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::predicates::eval_d;
use super::{enumerate_cycle_types, CycleCatalog, CycleType, CYCLE_VERTEX_CAP};
use crate::error::{Error, Result};
use crate::farey::DEFAULT_LEVEL_CAP;
use crate::graph::{Graph, VertexId};
use crate::lprime::eval_p_c;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest cycle type, in vertices.
    pub max_cycle_vertices: usize,
    /// Longest `δ` in a `P_δ` atom.
    pub max_delta_len: usize,
    /// Largest total length of an `ε` in a `Y_ε` atom.
    pub max_epsilon_len: usize,
    /// Highest Farey level in a `Y_ε` atom; 0 drops them.
    pub max_level: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_cycle_vertices: 8,
            max_delta_len: 4,
            max_epsilon_len: 4,
            max_level: 2,
        }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        if self.max_cycle_vertices > CYCLE_VERTEX_CAP {
            return Err(Error::SizeCap {
                vertices: self.max_cycle_vertices,
                cap: CYCLE_VERTEX_CAP,
            });
        }
        if self.max_level > DEFAULT_LEVEL_CAP {
            return Err(Error::LevelCap {
                level: self.max_level,
                cap: DEFAULT_LEVEL_CAP,
            });
        }
        Ok(())
    }

    /// Componentwise `≤`.
    pub fn within(&self, other: &Bounds) -> bool {
        self.max_cycle_vertices <= other.max_cycle_vertices
            && self.max_delta_len <= other.max_delta_len
            && self.max_epsilon_len <= other.max_epsilon_len
            && self.max_level <= other.max_level
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EpsilonKey {
    pub d1: Vec<String>,
    pub d2: Vec<String>,
    pub d3: Vec<String>,
    pub level: u32,
}

/// Atoms relating the subject `b` to one parameter `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectAtoms {
    pub param: VertexId,
    pub equal: bool,
    pub adjacent: bool,
    /// Every bounded `δ` with `P_δ(b, a)`.
    pub deltas: BTreeSet<Vec<String>>,
}

/// Every bounded `ε` with `Y_ε(a, a', b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAtoms {
    pub first: VertexId,
    pub second: VertexId,
    pub epsilons: BTreeSet<EpsilonKey>,
}

/// The subject itself is not recorded, so two vertices have the same type
/// exactly when their fingerprints compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QfFingerprint {
    pub over: Vec<VertexId>,
    pub bounds: Bounds,
    pub subject: Vec<SubjectAtoms>,
    /// One entry per ordered pair of distinct positions in `over`.
    pub pairs: Vec<PairAtoms>,
}

impl QfFingerprint {
    /// The fingerprint the smaller `bounds` would have produced.
    pub fn restrict(&self, bounds: &Bounds, catalog: &CycleCatalog) -> Result<QfFingerprint> {
        if !bounds.within(&self.bounds) {
            return Err(Error::InvalidPins(format!("{bounds:?} exceed the computed {:?}", self.bounds)));
        }
        let mut size: HashMap<&str, usize> = HashMap::new();
        for t in &catalog.types {
            size.insert(&t.name, t.graph.vertex_count());
        }
        let fits = |d: &Vec<String>| -> Result<bool> {
            for name in d {
                let v = size.get(name.as_str()).ok_or_else(|| Error::UnknownCycleType(name.clone()))?;
                if *v > bounds.max_cycle_vertices {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut subject = self.subject.clone();
        for s in &mut subject {
            let mut kept = BTreeSet::new();
            for d in &s.deltas {
                if d.len() <= bounds.max_delta_len && fits(d)? {
                    kept.insert(d.clone());
                }
            }
            s.deltas = kept;
        }
        let mut pairs = self.pairs.clone();
        for p in &mut pairs {
            let mut kept = BTreeSet::new();
            for e in &p.epsilons {
                if e.level <= bounds.max_level
                    && e.d1.len() + e.d2.len() + e.d3.len() <= bounds.max_epsilon_len
                    && fits(&e.d1)?
                    && fits(&e.d2)?
                    && fits(&e.d3)?
                {
                    kept.insert(e.clone());
                }
            }
            p.epsilons = kept;
        }
        Ok(QfFingerprint {
            over: self.over.clone(),
            bounds: *bounds,
            subject,
            pairs,
        })
    }
}

/// Memoised `P_δ` sets between vertex pairs.
struct DeltaOracle<'a> {
    g: &'a Graph,
    types: Vec<&'a CycleType>,
    max_span: usize,
    dist: HashMap<VertexId, Rc<Vec<Option<usize>>>>,
    links: HashMap<(VertexId, VertexId), Rc<Vec<usize>>>,
}

type Seq = Vec<usize>;
type Seqs = BTreeSet<Seq>;

impl<'a> DeltaOracle<'a> {
    fn new(g: &'a Graph, types: Vec<&'a CycleType>) -> Self {
        let max_span = types.iter().map(|t| t.span).max().unwrap_or(0);
        DeltaOracle {
            g,
            types,
            max_span,
            dist: HashMap::new(),
            links: HashMap::new(),
        }
    }

    fn dist(&mut self, s: VertexId) -> Rc<Vec<Option<usize>>> {
        let g = self.g;
        self.dist.entry(s).or_insert_with(|| Rc::new(g.bfs_distances(s))).clone()
    }

    /// Indices of types `C` with span `d(u, v)` and `P_C(u, v)`.
    fn link_types(&mut self, u: VertexId, v: VertexId) -> Result<Rc<Vec<usize>>> {
        let key = (u.min(v), u.max(v));
        if let Some(t) = self.links.get(&key) {
            return Ok(t.clone());
        }
        let d = self.dist(u)[v];
        let mut out = Vec::new();
        for (i, ty) in self.types.iter().enumerate() {
            if Some(ty.span) == d && eval_p_c(self.g, ty, u, v)?.is_some() {
                out.push(i);
            }
        }
        let out = Rc::new(out);
        self.links.insert(key, out.clone());
        Ok(out)
    }

    /// Every `δ` of length at most `max_len` with `P_δ(s, t)`, as type indices.
    fn sequences(&mut self, s: VertexId, t: VertexId, max_len: usize) -> Result<Seqs> {
        if s == t {
            return Ok(BTreeSet::from([Vec::new()]));
        }
        let ds = self.dist(s);
        let dt = self.dist(t);
        let Some(total) = ds[t] else {
            return Ok(BTreeSet::new());
        };
        if self.max_span == 0 || total > max_len * self.max_span {
            return Ok(BTreeSet::new());
        }
        let mut interval: Vec<VertexId> = self
            .g
            .vertices()
            .filter(|&v| matches!((ds[v], dt[v]), (Some(a), Some(b)) if a + b == total))
            .collect();
        interval.sort_by_key(|&v| ds[v]);
        let mut memo: HashMap<(VertexId, usize), Rc<Seqs>> = HashMap::new();
        let out = self.suffixes(s, t, max_len, &ds, &interval, &mut memo)?;
        Ok((*out).clone())
    }

    fn suffixes(
        &mut self,
        u: VertexId,
        t: VertexId,
        r: usize,
        ds: &[Option<usize>],
        interval: &[VertexId],
        memo: &mut HashMap<(VertexId, usize), Rc<Seqs>>,
    ) -> Result<Rc<Seqs>> {
        if u == t {
            return Ok(Rc::new(BTreeSet::from([Vec::new()])));
        }
        if let Some(m) = memo.get(&(u, r)) {
            return Ok(m.clone());
        }
        let mut out = BTreeSet::new();
        if r > 0 {
            let du = ds[u].unwrap();
            let from_u = self.dist(u);
            for &v in interval {
                let dv = ds[v].unwrap();
                if dv <= du || dv - du > self.max_span || from_u[v] != Some(dv - du) {
                    continue;
                }
                let types = self.link_types(u, v)?;
                if types.is_empty() {
                    continue;
                }
                let rest = self.suffixes(v, t, r - 1, ds, interval, memo)?;
                for &ty in types.iter() {
                    for suf in rest.iter() {
                        let mut seq = Vec::with_capacity(suf.len() + 1);
                        seq.push(ty);
                        seq.extend_from_slice(suf);
                        out.insert(seq);
                    }
                }
            }
        }
        let out = Rc::new(out);
        memo.insert((u, r), out.clone());
        Ok(out)
    }

    fn names(&self, seq: &[usize]) -> Vec<String> {
        seq.iter().map(|&i| self.types[i].name.clone()).collect()
    }
}

/// Computes fingerprints of many subjects over one parameter tuple, sharing
/// the work that does not depend on the subject.
pub struct Fingerprinter<'a> {
    oracle: DeltaOracle<'a>,
    over: Vec<VertexId>,
    bounds: Bounds,
    /// Ordered triangles carrying a copy of `F_level`, with that level.
    d_triples: Vec<(u32, [VertexId; 3])>,
    /// Per parameter: `P_δ(a, u)` sets for the `u` that occur in `d_triples`.
    from_params: Vec<BTreeMap<VertexId, Seqs>>,
}

impl<'a> Fingerprinter<'a> {
    pub fn new(g: &'a Graph, over: &[VertexId], bounds: Bounds, catalog: &'a CycleCatalog) -> Result<Self> {
        bounds.validate()?;
        for &a in over {
            g.check_vertex(a)?;
        }
        let types = catalog
            .types
            .iter()
            .filter(|t| t.graph.vertex_count() <= bounds.max_cycle_vertices)
            .collect();
        let mut oracle = DeltaOracle::new(g, types);
        let mut d_triples = Vec::new();
        if over.len() >= 2 {
            for &e in g.edges() {
                for w in g.common_neighbors(e.lo(), e.hi()) {
                    if w < e.hi() {
                        continue;
                    }
                    let (a, b, c) = (e.lo(), e.hi(), w);
                    for t in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                        for level in 1..=bounds.max_level {
                            if eval_d(g, level, t[0], t[1], t[2])?.is_empty() {
                                break;
                            }
                            d_triples.push((level, t));
                        }
                    }
                }
            }
        }
        d_triples.sort_unstable();
        let mut from_params = Vec::with_capacity(over.len());
        for &a in over {
            let mut m = BTreeMap::new();
            for &(_, t) in &d_triples {
                for u in [t[0], t[1]] {
                    if let Entry::Vacant(slot) = m.entry(u) {
                        slot.insert(oracle.sequences(a, u, bounds.max_epsilon_len)?);
                    }
                }
            }
            from_params.push(m);
        }
        Ok(Fingerprinter {
            oracle,
            over: over.to_vec(),
            bounds,
            d_triples,
            from_params,
        })
    }

    pub fn fingerprint(&mut self, b: VertexId) -> Result<QfFingerprint> {
        self.oracle.g.check_vertex(b)?;
        let g = self.oracle.g;
        let mut subject = Vec::with_capacity(self.over.len());
        for &a in &self.over {
            let seqs = self.oracle.sequences(b, a, self.bounds.max_delta_len)?;
            subject.push(SubjectAtoms {
                param: a,
                equal: a == b,
                adjacent: g.has_edge(a, b),
                deltas: seqs.iter().map(|s| self.oracle.names(s)).collect(),
            });
        }

        let max_eps = self.bounds.max_epsilon_len;
        let mut to_subject: BTreeMap<VertexId, Seqs> = BTreeMap::new();
        for &(_, t) in &self.d_triples {
            if let Entry::Vacant(slot) = to_subject.entry(t[2]) {
                slot.insert(self.oracle.sequences(b, t[2], max_eps)?);
            }
        }
        let empty = BTreeSet::new();
        let mut pairs = Vec::new();
        for i in 0..self.over.len() {
            for j in 0..self.over.len() {
                if i == j {
                    continue;
                }
                let mut keys: BTreeSet<(u32, &Seq, &Seq, &Seq)> = BTreeSet::new();
                for &(level, [x, y, z]) in &self.d_triples {
                    let s1 = self.from_params[i].get(&x).unwrap_or(&empty);
                    let s2 = self.from_params[j].get(&y).unwrap_or(&empty);
                    let s3 = to_subject.get(&z).unwrap_or(&empty);
                    for d1 in s1 {
                        for d2 in s2.iter().filter(|d2| d1.len() + d2.len() <= max_eps) {
                            for d3 in s3.iter().filter(|d3| d1.len() + d2.len() + d3.len() <= max_eps) {
                                keys.insert((level, d1, d2, d3));
                            }
                        }
                    }
                }
                let epsilons = keys
                    .into_iter()
                    .map(|(level, d1, d2, d3)| EpsilonKey {
                        d1: self.oracle.names(d1),
                        d2: self.oracle.names(d2),
                        d3: self.oracle.names(d3),
                        level,
                    })
                    .collect();
                pairs.push(PairAtoms {
                    first: self.over[i],
                    second: self.over[j],
                    epsilons,
                });
            }
        }
        Ok(QfFingerprint {
            over: self.over.clone(),
            bounds: self.bounds,
            subject,
            pairs,
        })
    }
}

/// The bounded quantifier-free type of `b` over `a`.
pub fn qf_fingerprint(g: &Graph, a: &[VertexId], b: VertexId, bounds: &Bounds) -> Result<QfFingerprint> {
    bounds.validate()?;
    let catalog = enumerate_cycle_types(bounds.max_cycle_vertices)?;
    Fingerprinter::new(g, a, *bounds, &catalog)?.fingerprint(b)
}
