//! Free-groupoid words: composable sequences of signed generator occurrences.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax;

/// Name of the 0-cell used by single-object presentations.
pub const DEFAULT_CELL: &str = "*";

/// Name of a cell at any level of a polygraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CellId(String);

impl CellId {
    /// Accepts identifiers `[A-Za-z][A-Za-z0-9_]*` and the reserved default 0-cell `*`.
    pub fn new(name: impl Into<String>) -> Result<Self, WordError> {
        let name = name.into();
        if name == DEFAULT_CELL || syntax::is_ident(&name) {
            Ok(CellId(name))
        } else {
            Err(WordError::InvalidName(name))
        }
    }

    pub fn default_cell() -> Self {
        CellId(DEFAULT_CELL.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CellId {
    type Error = WordError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        CellId::new(s)
    }
}

impl From<CellId> for String {
    fn from(c: CellId) -> String {
        c.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedLetter {
    pub gen: CellId,
    pub sign: Sign,
}

impl SignedLetter {
    pub fn pos(gen: CellId) -> Self {
        SignedLetter { gen, sign: Sign::Pos }
    }

    pub fn neg(gen: CellId) -> Self {
        SignedLetter { gen, sign: Sign::Neg }
    }

    pub fn inverse(&self) -> Self {
        SignedLetter { gen: self.gen.clone(), sign: self.sign.flip() }
    }

    pub fn cancels(&self, other: &SignedLetter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

impl fmt::Display for SignedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.gen),
            Sign::Neg => write!(f, "{}'", self.gen),
        }
    }
}

/// Anything that knows the endpoints of 1-generators.
pub trait Skeleton {
    fn endpoints(&self, gen: &CellId) -> Option<(&CellId, &CellId)>;

    /// Source and target 0-cells of a letter, swapped for inverse letters.
    fn letter_endpoints(&self, letter: &SignedLetter) -> Option<(&CellId, &CellId)> {
        let (s, t) = self.endpoints(&letter.gen)?;
        Some(match letter.sign {
            Sign::Pos => (s, t),
            Sign::Neg => (t, s),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid cell name `{0}`")]
    InvalidName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("letter {position} starts at `{found}` but the word is at `{expected}`")]
    EndpointMismatch { position: usize, expected: CellId, found: CellId },
    #[error("cannot compose: left word ends at `{left}`, right word starts at `{right}`")]
    NotComposable { left: CellId, right: CellId },
    #[error("the empty word needs an explicit 0-cell")]
    EmptyWithoutBase,
}

/// A 1-cell of the free groupoid: letters plus explicit endpoints.
///
/// The empty word at `x` is the identity on `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZigzagWord {
    letters: Vec<SignedLetter>,
    src: CellId,
    tgt: CellId,
}

impl ZigzagWord {
    pub fn identity(at: CellId) -> Self {
        ZigzagWord { letters: Vec::new(), src: at.clone(), tgt: at }
    }

    /// Types `letters` starting from the 0-cell `base`.
    pub fn new<S: Skeleton + ?Sized>(
        skeleton: &S,
        letters: Vec<SignedLetter>,
        base: CellId,
    ) -> Result<Self, WordError> {
        let mut cur = base.clone();
        for (position, letter) in letters.iter().enumerate() {
            let (s, t) = skeleton
                .letter_endpoints(letter)
                .ok_or_else(|| WordError::UnknownGenerator(letter.gen.to_string()))?;
            if *s != cur {
                return Err(WordError::EndpointMismatch {
                    position,
                    expected: cur,
                    found: s.clone(),
                });
            }
            cur = t.clone();
        }
        Ok(ZigzagWord { letters, src: base, tgt: cur })
    }

    /// Types a nonempty letter sequence, taking the source from its first letter.
    pub fn infer<S: Skeleton + ?Sized>(
        skeleton: &S,
        letters: Vec<SignedLetter>,
    ) -> Result<Self, WordError> {
        let first = letters.first().ok_or(WordError::EmptyWithoutBase)?;
        let (s, _) = skeleton
            .letter_endpoints(first)
            .ok_or_else(|| WordError::UnknownGenerator(first.gen.to_string()))?;
        let base = s.clone();
        Self::new(skeleton, letters, base)
    }

    /// Builds a word without consulting a skeleton. Callers must guarantee composability.
    pub(crate) fn from_parts(letters: Vec<SignedLetter>, src: CellId, tgt: CellId) -> Self {
        ZigzagWord { letters, src, tgt }
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.letters
    }

    pub fn src(&self) -> &CellId {
        &self.src
    }

    pub fn tgt(&self) -> &CellId {
        &self.tgt
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Re-checks composability and endpoints against a skeleton.
    pub fn check<S: Skeleton + ?Sized>(&self, skeleton: &S) -> Result<(), WordError> {
        let typed = Self::new(skeleton, self.letters.clone(), self.src.clone())?;
        if typed.tgt != self.tgt {
            return Err(WordError::EndpointMismatch {
                position: self.letters.len(),
                expected: self.tgt.clone(),
                found: typed.tgt,
            });
        }
        Ok(())
    }

    /// Free cancellation of adjacent `a a'` and `a' a` pairs.
    pub fn reduce(&self) -> ZigzagWord {
        let mut stack: Vec<SignedLetter> = Vec::with_capacity(self.letters.len());
        for letter in &self.letters {
            match stack.last() {
                Some(top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter.clone()),
            }
        }
        ZigzagWord { letters: stack, src: self.src.clone(), tgt: self.tgt.clone() }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Horizontal composition `u ∘₀ v`; not reduced.
    pub fn concat(&self, other: &ZigzagWord) -> Result<ZigzagWord, WordError> {
        if self.tgt != other.src {
            return Err(WordError::NotComposable {
                left: self.tgt.clone(),
                right: other.src.clone(),
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(ZigzagWord { letters, src: self.src.clone(), tgt: other.tgt.clone() })
    }

    pub fn invert(&self) -> ZigzagWord {
        ZigzagWord {
            letters: self.letters.iter().rev().map(SignedLetter::inverse).collect(),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
        }
    }

    pub fn mentions(&self, gen: &CellId) -> bool {
        self.letters.iter().any(|l| &l.gen == gen)
    }

    /// Substitutes `image` for every occurrence of `gen` (and its inverse for `gen'`).
    pub fn substitute(&self, gen: &CellId, image: &ZigzagWord) -> ZigzagWord {
        let inverse = image.invert();
        let mut letters = Vec::new();
        for l in &self.letters {
            if &l.gen == gen {
                match l.sign {
                    Sign::Pos => letters.extend_from_slice(image.letters()),
                    Sign::Neg => letters.extend_from_slice(inverse.letters()),
                }
            } else {
                letters.push(l.clone());
            }
        }
        ZigzagWord { letters, src: self.src.clone(), tgt: self.tgt.clone() }
    }
}

impl fmt::Display for ZigzagWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses word syntax (`a b' a^2`, `1`, or empty) into untyped letters.
pub fn parse_letters(text: &str) -> Result<Vec<SignedLetter>, syntax::SyntaxError> {
    let tokens = syntax::tokenize(text)?;
    let mut cursor = syntax::Cursor::new(text, &tokens);
    let letters = cursor.word()?;
    cursor.expect_end()?;
    Ok(letters)
}

/// A skeleton with one 0-cell `*` on which every named generator is a loop.
#[derive(Debug, Clone)]
pub struct Bouquet {
    base: CellId,
    gens: Vec<CellId>,
}

impl Bouquet {
    pub fn new(gens: impl IntoIterator<Item = CellId>) -> Self {
        Bouquet { base: CellId::default_cell(), gens: gens.into_iter().collect() }
    }

    pub fn base(&self) -> &CellId {
        &self.base
    }

    pub fn word(&self, letters: Vec<SignedLetter>) -> Result<ZigzagWord, WordError> {
        ZigzagWord::new(self, letters, self.base.clone())
    }
}

impl Skeleton for Bouquet {
    fn endpoints(&self, gen: &CellId) -> Option<(&CellId, &CellId)> {
        self.gens.contains(gen).then_some((&self.base, &self.base))
    }
}
