//! Brute-force ground truth, independent of the rewriting engine.
//!
//! Equality search works on freely reduced words. One step inserts a cyclic
//! permutation of a relator `l r'` (or of its inverse) at any position and
//! freely reduces; this covers replacing `l` by `r` anywhere, and the reverse.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::polygraph::Polygraph;
use crate::rewriting::{enumerate_normal_forms, Enumeration, RewriteError, RewritingSystem};
use crate::words::{CellId, Sign, ZigzagWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle needs a single 0-cell, found {0}")]
    MultiObject(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(CellId),
    #[error("group law violated: {0}")]
    LawViolation(String),
    #[error("more than {0} normal forms")]
    TooLarge(usize),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsVerdict {
    /// Reached after this many relator insertions.
    Equal(usize),
    NotWithinRadius,
}

/// Letters as `±(k + 1)` for generator number `k`.
type Code = Vec<i32>;

fn push_reduced(out: &mut Code, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn reduced(w: impl IntoIterator<Item = i32>) -> Code {
    let mut out = Vec::new();
    for l in w {
        push_reduced(&mut out, l);
    }
    out
}

fn inverse(w: &[i32]) -> Code {
    w.iter().rev().map(|l| -l).collect()
}

/// The search space of one presentation.
#[derive(Debug, Clone)]
pub struct Searcher {
    gens: Vec<CellId>,
    inserts: Vec<Code>,
}

impl Searcher {
    pub fn new(p: &Polygraph) -> Result<Self, OracleError> {
        let n0 = p.euler_data().n0;
        if n0 != 1 {
            return Err(OracleError::MultiObject(n0));
        }
        let gens: Vec<CellId> = p.gen_names().cloned().collect();
        let mut s = Searcher { gens, inserts: Vec::new() };
        for (_, sphere) in p.rels() {
            let l = s.encode(&sphere.lhs)?;
            let r = s.encode(&sphere.rhs)?;
            // Cyclically reduce l r'.
            let mut rel = reduced(l.iter().copied().chain(inverse(&r)));
            while rel.len() >= 2 && rel[0] == -rel[rel.len() - 1] {
                rel.pop();
                rel.remove(0);
            }
            for word in [rel.clone(), inverse(&rel)] {
                for k in 0..word.len() {
                    let rotated: Code = word[k..].iter().chain(&word[..k]).copied().collect();
                    if !s.inserts.contains(&rotated) {
                        s.inserts.push(rotated);
                    }
                }
            }
        }
        Ok(s)
    }

    fn encode(&self, w: &ZigzagWord) -> Result<Code, OracleError> {
        w.letters()
            .iter()
            .map(|l| {
                let k = self
                    .gens
                    .iter()
                    .position(|g| *g == l.gen)
                    .ok_or_else(|| OracleError::UnknownGenerator(l.gen.clone()))?;
                let code = k as i32 + 1;
                Ok(if l.sign == Sign::Pos { code } else { -code })
            })
            .collect()
    }

    /// Freely reduced encoding of `w`.
    fn state(&self, w: &ZigzagWord) -> Result<Code, OracleError> {
        Ok(reduced(self.encode(w)?))
    }

    fn neighbours(&self, w: &[i32], max_len: usize, mut visit: impl FnMut(Code) -> bool) -> bool {
        for i in 0..=w.len() {
            for ins in &self.inserts {
                let mut next = w[..i].to_vec();
                for &l in ins {
                    push_reduced(&mut next, l);
                }
                for &l in &w[i..] {
                    push_reduced(&mut next, l);
                }
                if next.len() <= max_len && visit(next) {
                    return true;
                }
            }
        }
        false
    }

    /// Breadth-first search from `u` for the free reduction of `v`.
    pub fn equal(&self, u: &ZigzagWord, v: &ZigzagWord, limits: BfsLimits) -> Result<BfsVerdict, OracleError> {
        let start = self.state(u)?;
        let goal = self.state(v)?;
        let max_len = limits.max_len.unwrap_or(2 * u.len().max(v.len()) + 2 * limits.radius);
        if start == goal {
            return Ok(BfsVerdict::Equal(0));
        }
        let mut seen: HashMap<Code, usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            let d = seen[&w];
            if d >= limits.radius {
                continue;
            }
            let mut found = false;
            self.neighbours(&w, max_len, |next| {
                if next == goal {
                    found = true;
                    return true;
                }
                if seen.len() < limits.max_states && !seen.contains_key(&next) {
                    seen.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
                false
            });
            if found {
                return Ok(BfsVerdict::Equal(d + 1));
            }
        }
        Ok(BfsVerdict::NotWithinRadius)
    }

    /// Every state reachable from `center` within `radius` steps and words
    /// of length at most `max_len`, with its distance.
    pub fn ball(&self, center: &ZigzagWord, radius: usize, max_len: usize, max_states: usize) -> Result<Ball, OracleError> {
        let start = self.state(center)?;
        let mut dist: HashMap<Code, usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            let d = dist[&w];
            if d >= radius {
                continue;
            }
            self.neighbours(&w, max_len, |next| {
                if dist.len() < max_states && !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
                false
            });
        }
        Ok(Ball { searcher: self.clone(), dist })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfsLimits {
    pub radius: usize,
    /// Defaults to `2 max(|u|, |v|) + 2 radius`.
    pub max_len: Option<usize>,
    pub max_states: usize,
}

impl BfsLimits {
    pub fn radius(radius: usize) -> Self {
        BfsLimits { radius, max_len: None, max_states: 2_000_000 }
    }
}

/// A precomputed search from one word, for many equality queries.
#[derive(Debug, Clone)]
pub struct Ball {
    searcher: Searcher,
    dist: HashMap<Code, usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn distance(&self, w: &ZigzagWord) -> Result<Option<usize>, OracleError> {
        Ok(self.dist.get(&self.searcher.state(w)?).copied())
    }
}

/// Decides `u = v` by search, within `radius` relator insertions.
pub fn bfs_equal(p: &Polygraph, u: &ZigzagWord, v: &ZigzagWord, radius: usize) -> Result<BfsVerdict, OracleError> {
    Searcher::new(p)?.equal(u, v, BfsLimits::radius(radius))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl MultiplicationTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, OracleError> {
        let n = table.len();
        let bad = |m: String| OracleError::LawViolation(m);
        if n == 0 {
            return Err(bad("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(bad("table is not square or not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| bad("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("({a} {b}) {c} differs from {a} ({b} {c})")));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| bad(format!("{a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(MultiplicationTable { table, identity, inverse })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Smallest `k >= 1` with `a^k` the identity.
    pub fn order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// Whether `x` generates the whole group under products and inverses.
pub fn closure_generates(t: &MultiplicationTable, x: &[usize]) -> bool {
    let n = t.size();
    let mut steps: Vec<usize> = x.to_vec();
    steps.extend(x.iter().map(|&g| t.inverse(g)));
    let mut seen = vec![false; n];
    seen[t.identity()] = true;
    let mut queue = VecDeque::from([t.identity()]);
    let mut count = 1;
    while let Some(a) = queue.pop_front() {
        for &g in &steps {
            let b = t.mul(a, g);
            if !seen[b] {
                seen[b] = true;
                count += 1;
                queue.push_back(b);
            }
        }
    }
    count == n
}

/// `table[i][j]` is the index of the normal form of `w_i w_j`.
pub fn table_from_normal_forms(s: &RewritingSystem, cap: usize) -> Result<MultiplicationTable, OracleError> {
    let forms = match enumerate_normal_forms(s, cap)? {
        Enumeration::Finite(f) => f,
        Enumeration::MoreThanCap => return Err(OracleError::TooLarge(cap)),
    };
    let index: HashMap<&Vec<_>, usize> = forms.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut table = Vec::with_capacity(forms.len());
    for a in &forms {
        let mut row = Vec::with_capacity(forms.len());
        for b in &forms {
            let w: Vec<_> = a.iter().chain(b).copied().collect();
            let nf = s.normalize(&w)?;
            let k = *index
                .get(&nf)
                .ok_or_else(|| OracleError::LawViolation(format!("`{}` is not a normal form", s.alphabet().render(&nf))))?;
            row.push(k);
        }
        table.push(row);
    }
    MultiplicationTable::new(table)
}
