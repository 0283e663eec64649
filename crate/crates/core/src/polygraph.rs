//! Fibered 2-polygraphs: 0-cells, 1-generators with endpoints, and relations
//! whose boundaries are 1-spheres.

use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::words::{self, CellId, Skeleton, WordError, ZigzagWord};

/// A pair of parallel words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sphere {
    pub lhs: ZigzagWord,
    pub rhs: ZigzagWord,
}

impl Sphere {
    pub fn new(lhs: ZigzagWord, rhs: ZigzagWord) -> Self {
        Sphere { lhs, rhs }
    }

    pub fn swap(self) -> Sphere {
        Sphere { lhs: self.rhs, rhs: self.lhs }
    }

    pub fn is_parallel(&self) -> bool {
        self.lhs.src() == self.rhs.src() && self.lhs.tgt() == self.rhs.tgt()
    }
}

impl fmt::Display for Sphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate name `{0}`")]
    DuplicateName(CellId),
    #[error("unknown cell `{0}`")]
    UnknownCell(CellId),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Syntax(#[from] crate::syntax::SyntaxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLevel {
    Zero,
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub level: CellLevel,
    pub cell: CellId,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.cell, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Cell counts `(n0, n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EulerData {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
}

impl EulerData {
    pub fn chi(&self) -> i64 {
        self.n0 as i64 - self.n1 as i64 + self.n2 as i64
    }
}

/// A fibered 2-polygraph. Declaration order is kept for rendering, but
/// equality ignores it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Polygraph {
    cells0: IndexSet<CellId>,
    gens: IndexMap<CellId, (CellId, CellId)>,
    rels: IndexMap<CellId, Sphere>,
}

impl Skeleton for Polygraph {
    fn endpoints(&self, gen: &CellId) -> Option<(&CellId, &CellId)> {
        self.gens.get(gen).map(|(s, t)| (s, t))
    }
}

impl Polygraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A polygraph with the single 0-cell `*` and the given loops.
    pub fn bouquet<I, S>(gens: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut p = Polygraph::new();
        let base = CellId::default_cell();
        p.add_cell(base.clone())?;
        for g in gens {
            p.add_gen(CellId::new(g)?, base.clone(), base.clone())?;
        }
        Ok(p)
    }

    pub fn add_cell(&mut self, name: CellId) -> Result<(), ModelError> {
        if !self.cells0.insert(name.clone()) {
            return Err(ModelError::DuplicateName(name));
        }
        Ok(())
    }

    /// Adds a generator without checking its endpoints; see [`Polygraph::validate`].
    pub fn add_gen(&mut self, name: CellId, src: CellId, tgt: CellId) -> Result<(), ModelError> {
        if self.gens.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        self.gens.insert(name, (src, tgt));
        Ok(())
    }

    pub fn add_rel(&mut self, name: CellId, sphere: Sphere) -> Result<(), ModelError> {
        if self.rels.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        self.rels.insert(name, sphere);
        Ok(())
    }

    /// Adds a relation given in word syntax.
    pub fn add_rel_text(&mut self, name: &str, lhs: &str, rhs: &str) -> Result<(), ModelError> {
        let lhs_letters = words::parse_letters(lhs)?;
        let rhs_letters = words::parse_letters(rhs)?;
        let (lhs, rhs) = self.type_sides(lhs_letters, rhs_letters, None)?;
        self.add_rel(CellId::new(name)?, Sphere::new(lhs, rhs))
    }

    pub(crate) fn remove_cell(&mut self, name: &CellId) -> bool {
        self.cells0.shift_remove(name)
    }

    pub(crate) fn remove_gen(&mut self, name: &CellId) -> Option<(CellId, CellId)> {
        self.gens.shift_remove(name)
    }

    pub(crate) fn remove_rel(&mut self, name: &CellId) -> Option<Sphere> {
        self.rels.shift_remove(name)
    }

    pub fn cells0(&self) -> impl Iterator<Item = &CellId> {
        self.cells0.iter()
    }

    pub fn gens(&self) -> impl Iterator<Item = (&CellId, &CellId, &CellId)> {
        self.gens.iter().map(|(g, (s, t))| (g, s, t))
    }

    pub fn gen_names(&self) -> impl Iterator<Item = &CellId> {
        self.gens.keys()
    }

    pub fn rels(&self) -> impl Iterator<Item = (&CellId, &Sphere)> {
        self.rels.iter()
    }

    pub fn has_cell(&self, name: &CellId) -> bool {
        self.cells0.contains(name)
    }

    pub fn has_gen(&self, name: &CellId) -> bool {
        self.gens.contains_key(name)
    }

    pub fn relation(&self, name: &CellId) -> Option<&Sphere> {
        self.rels.get(name)
    }

    pub fn euler_data(&self) -> EulerData {
        EulerData { n0: self.cells0.len(), n1: self.gens.len(), n2: self.rels.len() }
    }

    /// The unique 0-cell, when there is exactly one.
    pub fn single_cell(&self) -> Option<&CellId> {
        (self.cells0.len() == 1).then(|| &self.cells0[0])
    }

    /// Types a word given in word syntax. The empty word lives on the unique
    /// 0-cell, or on `at` when given.
    pub fn word(&self, text: &str) -> Result<ZigzagWord, ModelError> {
        let letters = words::parse_letters(text)?;
        self.type_word(letters, None)
    }

    pub fn word_at(&self, text: &str, at: &CellId) -> Result<ZigzagWord, ModelError> {
        let letters = words::parse_letters(text)?;
        self.type_word(letters, Some(at))
    }

    pub(crate) fn type_word(
        &self,
        letters: Vec<words::SignedLetter>,
        at: Option<&CellId>,
    ) -> Result<ZigzagWord, ModelError> {
        match (at, letters.is_empty()) {
            (Some(x), _) => Ok(ZigzagWord::new(self, letters, x.clone())?),
            (None, false) => Ok(ZigzagWord::infer(self, letters)?),
            (None, true) => match self.single_cell() {
                Some(x) => Ok(ZigzagWord::identity(x.clone())),
                None => Err(WordError::EmptyWithoutBase.into()),
            },
        }
    }

    /// Types the two sides of a relation, letting a nonempty side fix the
    /// endpoints of an empty one.
    pub(crate) fn type_sides(
        &self,
        lhs: Vec<words::SignedLetter>,
        rhs: Vec<words::SignedLetter>,
        at: Option<&CellId>,
    ) -> Result<(ZigzagWord, ZigzagWord), ModelError> {
        if at.is_none() && lhs.is_empty() && !rhs.is_empty() {
            let r = self.type_word(rhs, None)?;
            let l = ZigzagWord::identity(r.src().clone());
            return Ok((l, r));
        }
        let l = self.type_word(lhs, at)?;
        let r = if rhs.is_empty() && at.is_none() {
            ZigzagWord::identity(l.src().clone())
        } else {
            self.type_word(rhs, at.or(Some(l.src())))?
        };
        Ok((l, r))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (g, (s, t)) in &self.gens {
            for end in [s, t] {
                if !self.cells0.contains(end) {
                    violations.push(Violation {
                        level: CellLevel::One,
                        cell: g.clone(),
                        message: format!("unknown 0-cell `{end}`"),
                    });
                }
            }
        }
        for (r, sphere) in &self.rels {
            let mut sides_ok = true;
            for (side, word) in [("lhs", &sphere.lhs), ("rhs", &sphere.rhs)] {
                if let Err(e) = word.check(self) {
                    sides_ok = false;
                    violations.push(Violation {
                        level: CellLevel::Two,
                        cell: r.clone(),
                        message: format!("{side}: {e}"),
                    });
                } else if !self.cells0.contains(word.src()) {
                    sides_ok = false;
                    violations.push(Violation {
                        level: CellLevel::Two,
                        cell: r.clone(),
                        message: format!("{side}: unknown 0-cell `{}`", word.src()),
                    });
                }
            }
            if sides_ok && !sphere.is_parallel() {
                violations.push(Violation {
                    level: CellLevel::Two,
                    cell: r.clone(),
                    message: format!(
                        "not a 1-sphere: {} -> {} versus {} -> {}",
                        sphere.lhs.src(),
                        sphere.lhs.tgt(),
                        sphere.rhs.src(),
                        sphere.rhs.tgt()
                    ),
                });
            }
        }
        ValidationReport { violations }
    }

    /// First name of the form `{base}_{n}` (n ≥ 1) unused at the given level.
    pub fn fresh_name(&self, level: CellLevel, base: &str) -> CellId {
        (1..)
            .map(|n| CellId::new(format!("{base}_{n}")).expect("suffix keeps names valid"))
            .find(|c| match level {
                CellLevel::Zero => !self.cells0.contains(c),
                CellLevel::One => !self.gens.contains_key(c),
                CellLevel::Two => !self.rels.contains_key(c),
            })
            .expect("unbounded search")
    }
}
