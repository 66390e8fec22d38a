//! The coloured Farey levels.
//!
//! Level 1 is a black edge `{0, 1}` with two apexes `2` and `3` joined by blue
//! edges. Each further level adds one vertex per blue edge, joins it to both
//! endpoints with blue edges, and turns every older edge black.
//!
//! Ids follow construction order, so the vertices of level `m` are exactly
//! `0..2^(m+1)` in every later level. Within a level, new vertices are created
//! per blue edge ordered by (creation index of the edge's newer endpoint,
//! older endpoint id).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::dot::{to_dot, DotAttributes};
use crate::graph::{Edge, Graph, VertexId};

pub const DEFAULT_LEVEL_CAP: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    Black,
    Blue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredFarey {
    graph: Graph,
    level: u32,
    birth_level: Vec<u32>,
    parent_edge: Vec<Option<Edge>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub vertices: u64,
    pub edges: u64,
    pub blue_edges: u64,
}

/// Closed-form sizes of level `n`, without building it.
pub fn level_counts(n: u32) -> Result<LevelCounts> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    if n > 61 {
        return Err(Error::LevelOverflow(n));
    }
    let vertices = 1u64 << (n + 1);
    Ok(LevelCounts {
        vertices,
        edges: (1u64 << (n + 2)) - 3,
        blue_edges: vertices,
    })
}

pub fn build_level(n: u32) -> Result<ColoredFarey> {
    build_level_with_cap(n, DEFAULT_LEVEL_CAP)
}

pub fn build_level_with_cap(n: u32, cap: u32) -> Result<ColoredFarey> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    if n > cap {
        return Err(Error::LevelCap { level: n, cap });
    }
    let total = 1usize << (n + 1);
    let mut edges = Vec::with_capacity((1usize << (n + 2)) - 3);
    let mut birth_level = Vec::with_capacity(total);
    let mut parent_edge = Vec::with_capacity(total);

    edges.extend([Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2), Edge::new(0, 3), Edge::new(1, 3)]);
    birth_level.extend([1; 4]);
    parent_edge.extend([None; 4]);
    // (newer endpoint, older endpoint)
    let mut blue: Vec<(VertexId, VertexId)> = vec![(2, 0), (2, 1), (3, 0), (3, 1)];

    for level in 2..=n {
        let mut next = Vec::with_capacity(blue.len() * 2);
        for &(a, u) in &blue {
            let v = birth_level.len();
            birth_level.push(level);
            parent_edge.push(Some(Edge::new(a, u)));
            edges.push(Edge::new(u, v));
            edges.push(Edge::new(a, v));
            next.push((v, a.min(u)));
            next.push((v, a.max(u)));
        }
        blue = next;
    }
    edges.sort_unstable();
    Ok(ColoredFarey {
        graph: Graph::from_sorted_edges(total, edges),
        level: n,
        birth_level,
        parent_edge,
    })
}

impl ColoredFarey {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn birth_level(&self, v: VertexId) -> u32 {
        self.birth_level[v]
    }

    pub fn birth_levels(&self) -> &[u32] {
        &self.birth_level
    }

    /// The blue edge `v` was attached to; `None` for the four level-1 vertices.
    pub fn parent_edge(&self, v: VertexId) -> Option<Edge> {
        self.parent_edge[v]
    }

    pub fn color(&self, e: Edge) -> EdgeColor {
        // the newer endpoint always carries the larger id
        if e.hi() >= 2 && self.birth_level[e.hi()] == self.level {
            EdgeColor::Blue
        } else {
            EdgeColor::Black
        }
    }

    pub fn edges_with_color(&self, color: EdgeColor) -> impl Iterator<Item = Edge> + '_ {
        self.graph.edges().iter().copied().filter(move |&e| self.color(e) == color)
    }

    /// The level-`m` Farey graph sitting inside this one, recoloured for level `m`.
    pub fn union_limit_view(&self, m: u32) -> Result<ColoredFarey> {
        if m == 0 {
            return Err(Error::ZeroLevel);
        }
        if m > self.level {
            return Err(Error::ViewLevel {
                requested: m,
                built: self.level,
            });
        }
        let keep = 1usize << (m + 1);
        let edges = self.graph.edges().iter().copied().filter(|e| e.hi() < keep).collect();
        Ok(ColoredFarey {
            graph: Graph::from_sorted_edges(keep, edges),
            level: m,
            birth_level: self.birth_level[..keep].to_vec(),
            parent_edge: self.parent_edge[..keep].to_vec(),
        })
    }

    pub fn to_json(&self) -> FareyJson {
        FareyJson {
            vertex_count: self.graph.vertex_count(),
            edges: self.graph.edges().iter().map(|&e| e.into()).collect(),
            level: self.level,
            colors: ColorLists {
                black: self.edges_with_color(EdgeColor::Black).map(Into::into).collect(),
                blue: self.edges_with_color(EdgeColor::Blue).map(Into::into).collect(),
            },
            birth_level: self.birth_level.clone(),
            parent_edge: self.parent_edge.iter().map(|p| p.map(Into::into)).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut attrs = DotAttributes::default();
        for &e in self.graph.edges() {
            let c = match self.color(e) {
                EdgeColor::Black => "black",
                EdgeColor::Blue => "blue",
            };
            attrs.edges.insert(e, vec![("color".into(), c.into())]);
        }
        to_dot(&self.graph, &format!("F{}", self.level), &attrs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorLists {
    pub black: Vec<[VertexId; 2]>,
    pub blue: Vec<[VertexId; 2]>,
}

/// The graph JSON plus colours and generation data; readable as a plain graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FareyJson {
    pub vertex_count: usize,
    pub edges: Vec<[VertexId; 2]>,
    pub level: u32,
    pub colors: ColorLists,
    pub birth_level: Vec<u32>,
    pub parent_edge: Vec<Option<[VertexId; 2]>>,
}
