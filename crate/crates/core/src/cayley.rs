//! Cayley graphs and Cayley complexes of finite presented groups.
//!
//! Vertices are the normal forms of a convergent system in shortlex order.
//! The edge for vertex `g` and generator number `k` has id `g * |X| + k`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygraph::Polygraph;
use crate::rewriting::{enumerate_normal_forms, Enumeration, Letter, RewriteError, RewritingSystem, Word};
use crate::snf;
use crate::words::{CellId, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("more than {0} normal forms, or the group is infinite")]
    InfiniteOrUnknown(usize),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub gen: CellId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGraph {
    /// Normal forms, rendered.
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

/// A 2-cell: relation `rel` traced from vertex `base`. Boundary entries are
/// `±(edge id + 1)`, negative when the edge is crossed backwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub base: usize,
    pub rel: CellId,
    pub boundary: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyComplex {
    pub graph: CayleyGraph,
    pub faces: Vec<Face>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    pub connected: bool,
    pub vertices: usize,
    pub edges: usize,
    /// `E - V + (number of components)`.
    pub cycle_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub h0_rank: usize,
    pub h1_rank: usize,
    /// Invariant factors of H1 greater than one.
    pub h1_torsion: Vec<BigInt>,
    pub h2_rank: usize,
    pub euler: i64,
}

struct Tables {
    forms: Vec<Word>,
    edges: Vec<Edge>,
    gens: usize,
}

fn tables(s: &RewritingSystem, cap: usize) -> Result<Tables, CayleyError> {
    let forms = match enumerate_normal_forms(s, cap)? {
        Enumeration::Finite(forms) => forms,
        Enumeration::MoreThanCap => return Err(CayleyError::InfiniteOrUnknown(cap)),
    };
    let index: HashMap<&Word, usize> = forms.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let alphabet = s.alphabet();
    let mut edges = Vec::with_capacity(forms.len() * alphabet.generators().len());
    for (src, g) in forms.iter().enumerate() {
        for (k, gen) in alphabet.generators().iter().enumerate() {
            let mut w = g.clone();
            w.push(Letter(2 * k as u32));
            let nf = s.normalize(&w)?;
            let dst = *index
                .get(&nf)
                .ok_or_else(|| CayleyError::InternalError(format!("`{}` is not a listed normal form", alphabet.render(&nf))))?;
            edges.push(Edge { src, dst, gen: gen.clone() });
        }
    }
    Ok(Tables { forms, edges, gens: alphabet.generators().len() })
}

fn graph_of(s: &RewritingSystem, t: &Tables) -> CayleyGraph {
    CayleyGraph {
        vertices: t.forms.iter().map(|w| s.alphabet().render(w)).collect(),
        edges: t.edges.clone(),
    }
}

pub fn build_graph(s: &RewritingSystem, cap: usize) -> Result<CayleyGraph, CayleyError> {
    let t = tables(s, cap)?;
    Ok(graph_of(s, &t))
}

/// Adds one face per vertex and relation of `p`, tracing the lhs forwards
/// and then the rhs backwards.
pub fn build_complex(p: &Polygraph, s: &RewritingSystem, cap: usize) -> Result<CayleyComplex, CayleyError> {
    let t = tables(s, cap)?;
    let alphabet = s.alphabet();
    let mut faces = Vec::new();
    for base in 0..t.forms.len() {
        for (rel, sphere) in p.rels() {
            let path = sphere.lhs.concat(&sphere.rhs.invert()).map_err(|e| CayleyError::InternalError(e.to_string()))?;
            let mut cur = base;
            let mut boundary = Vec::with_capacity(path.len());
            for l in path.letters() {
                let k = alphabet
                    .generators()
                    .iter()
                    .position(|g| *g == l.gen)
                    .ok_or_else(|| CayleyError::InternalError(format!("relation `{rel}` uses unknown `{}`", l.gen)))?;
                match l.sign {
                    Sign::Pos => {
                        let id = cur * t.gens + k;
                        boundary.push(id as i64 + 1);
                        cur = t.edges[id].dst;
                    }
                    Sign::Neg => {
                        let mut w = t.forms[cur].clone();
                        w.push(Letter(2 * k as u32 + 1));
                        let nf = s.normalize(&w)?;
                        let src = t.forms.iter().position(|f| *f == nf).ok_or_else(|| {
                            CayleyError::InternalError(format!("`{}` is not a listed normal form", alphabet.render(&nf)))
                        })?;
                        let id = src * t.gens + k;
                        if t.edges[id].dst != cur {
                            return Err(CayleyError::InternalError(format!("edge {id} does not end at vertex {cur}")));
                        }
                        boundary.push(-(id as i64 + 1));
                        cur = src;
                    }
                }
            }
            if cur != base {
                return Err(CayleyError::InternalError(format!("relation `{rel}` does not close at vertex {base}")));
            }
            faces.push(Face { base, rel: rel.clone(), boundary });
        }
    }
    Ok(CayleyComplex { graph: graph_of(s, &t), faces })
}

pub fn graph_invariants(g: &CayleyGraph) -> GraphInvariants {
    let n = g.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.src].push(e.dst);
        adj[e.dst].push(e.src);
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    GraphInvariants {
        connected: components <= 1,
        vertices: n,
        edges: g.edges.len(),
        cycle_rank: g.edges.len() + components - n,
    }
}

impl CayleyComplex {
    /// The graph as a complex without 2-cells.
    pub fn from_graph(graph: CayleyGraph) -> Self {
        CayleyComplex { graph, faces: Vec::new() }
    }

    pub fn euler(&self) -> i64 {
        self.graph.vertices.len() as i64 - self.graph.edges.len() as i64 + self.faces.len() as i64
    }

    /// `∂1`: one column per edge, `dst - src`.
    pub fn boundary1(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.graph.edges.len()]; self.graph.vertices.len()];
        for (j, e) in self.graph.edges.iter().enumerate() {
            m[e.dst][j] += BigInt::one();
            m[e.src][j] -= BigInt::one();
        }
        m
    }

    /// `∂2`: one column per face, summing signed edge crossings.
    pub fn boundary2(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.faces.len()]; self.graph.edges.len()];
        for (j, f) in self.faces.iter().enumerate() {
            for &r in &f.boundary {
                let i = r.unsigned_abs() as usize - 1;
                if r > 0 {
                    m[i][j] += BigInt::one();
                } else {
                    m[i][j] -= BigInt::one();
                }
            }
        }
        m
    }
}

pub fn homology(c: &CayleyComplex) -> HomologySummary {
    let (v, e, f) = (c.graph.vertices.len(), c.graph.edges.len(), c.faces.len());
    let rank1 = snf::rank(&c.boundary1());
    let d2 = snf::invariant_factors(&c.boundary2());
    let rank2 = d2.len();
    HomologySummary {
        h0_rank: v - rank1,
        h1_rank: e - rank1 - rank2,
        h1_torsion: d2.into_iter().filter(|d| !d.is_one()).collect(),
        h2_rank: f - rank2,
        euler: c.euler(),
    }
}

pub fn graph_to_dot(g: &CayleyGraph) -> String {
    let mut out = String::from("digraph cayley {\n");
    for (i, w) in g.vertices.iter().enumerate() {
        writeln!(out, "  {i} [label=\"{w}\"];").expect("writing to a String");
    }
    for e in &g.edges {
        writeln!(out, "  {} -> {} [label=\"{}\"];", e.src, e.dst, e.gen).expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: usize,
    word: String,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    id: usize,
    src: usize,
    dst: usize,
    gen: String,
}

#[derive(Serialize, Deserialize)]
struct JsonFace {
    base: usize,
    rel: String,
    boundary: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct JsonComplex {
    vertices: Vec<JsonVertex>,
    edges: Vec<JsonEdge>,
    faces: Vec<JsonFace>,
}

pub fn complex_to_json(c: &CayleyComplex) -> String {
    let doc = JsonComplex {
        vertices: c.graph.vertices.iter().enumerate().map(|(id, w)| JsonVertex { id, word: w.clone() }).collect(),
        edges: c
            .graph
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| JsonEdge { id, src: e.src, dst: e.dst, gen: e.gen.to_string() })
            .collect(),
        faces: c
            .faces
            .iter()
            .map(|f| JsonFace { base: f.base, rel: f.rel.to_string(), boundary: f.boundary.clone() })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Exports a graph in the complex schema, with no faces.
pub fn graph_to_json(g: &CayleyGraph) -> String {
    complex_to_json(&CayleyComplex::from_graph(g.clone()))
}

/// Reads the JSON export back, checking ids and references.
pub fn complex_from_json(text: &str) -> Result<CayleyComplex, CayleyError> {
    let bad = |m: String| CayleyError::Json(m);
    let doc: JsonComplex = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let n = doc.vertices.len();
    let mut vertices = Vec::with_capacity(n);
    for (i, v) in doc.vertices.into_iter().enumerate() {
        if v.id != i {
            return Err(bad(format!("vertex {i} has id {}", v.id)));
        }
        vertices.push(v.word);
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.into_iter().enumerate() {
        if e.id != i || e.src >= n || e.dst >= n {
            return Err(bad(format!("edge {i} is malformed")));
        }
        let gen = CellId::new(e.gen).map_err(|e| bad(e.to_string()))?;
        edges.push(Edge { src: e.src, dst: e.dst, gen });
    }
    let mut faces = Vec::with_capacity(doc.faces.len());
    for f in doc.faces {
        if f.base >= n || f.boundary.iter().any(|&r| r == 0 || r.unsigned_abs() as usize > edges.len()) {
            return Err(bad(format!("face at vertex {} is malformed", f.base)));
        }
        let rel = CellId::new(f.rel).map_err(|e| bad(e.to_string()))?;
        faces.push(Face { base: f.base, rel, boundary: f.boundary });
    }
    Ok(CayleyComplex { graph: CayleyGraph { vertices, edges }, faces })
}
