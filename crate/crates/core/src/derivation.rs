//! Free 2-cells: derivation trees and their boundaries.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::polygraph::{Polygraph, Sphere};
use crate::syntax::{self, Cursor, SyntaxError, TokenKind};
use crate::words::{CellId, Sign, SignedLetter, Skeleton, ZigzagWord};

/// A free 2-cell, built from relations with the two compositions,
/// identities, inverses and the cancellation units.
///
/// Subtrees are shared through `Arc`, so a derivation is really a DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Gen { rel: CellId, sign: Sign },
    /// `∘₀`: whiskering / side-by-side composition.
    Horiz(Arc<Derivation>, Arc<Derivation>),
    /// `∘₁`: sequential composition.
    Vert(Arc<Derivation>, Arc<Derivation>),
    Id(ZigzagWord),
    Inv(Arc<Derivation>),
    /// `λ_a : a' a ⇒ id`
    Lambda(CellId),
    /// `ρ_a : a a' ⇒ id`
    Rho(CellId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("unknown cell `{0}`")]
    UnknownCell(CellId),
    #[error("ill-typed derivation: {0}")]
    IllTyped(String),
}

impl Derivation {
    pub fn gen(rel: CellId, sign: Sign) -> Arc<Derivation> {
        Arc::new(Derivation::Gen { rel, sign })
    }

    pub fn horiz(left: Arc<Derivation>, right: Arc<Derivation>) -> Arc<Derivation> {
        Arc::new(Derivation::Horiz(left, right))
    }

    pub fn vert(first: Arc<Derivation>, second: Arc<Derivation>) -> Arc<Derivation> {
        Arc::new(Derivation::Vert(first, second))
    }

    pub fn id(word: ZigzagWord) -> Arc<Derivation> {
        Arc::new(Derivation::Id(word))
    }

    pub fn inv(d: Arc<Derivation>) -> Arc<Derivation> {
        Arc::new(Derivation::Inv(d))
    }

    pub fn lambda(gen: CellId) -> Arc<Derivation> {
        Arc::new(Derivation::Lambda(gen))
    }

    pub fn rho(gen: CellId) -> Arc<Derivation> {
        Arc::new(Derivation::Rho(gen))
    }

    /// `Id(prefix) ∘₀ d ∘₀ Id(suffix)`, omitting empty whiskers.
    pub fn whisker(prefix: ZigzagWord, d: Arc<Derivation>, suffix: ZigzagWord) -> Arc<Derivation> {
        let mut out = d;
        if !prefix.is_empty() {
            out = Derivation::horiz(Derivation::id(prefix), out);
        }
        if !suffix.is_empty() {
            out = Derivation::horiz(out, Derivation::id(suffix));
        }
        out
    }

    /// Relation and generator names mentioned anywhere in the tree.
    pub fn relations_used(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            if !seen.insert(d as *const Derivation) {
                continue;
            }
            match d {
                Derivation::Gen { rel, .. } => {
                    if !out.contains(rel) {
                        out.push(rel.clone());
                    }
                }
                Derivation::Horiz(a, b) | Derivation::Vert(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Derivation::Inv(a) => stack.push(a),
                Derivation::Id(_) | Derivation::Lambda(_) | Derivation::Rho(_) => {}
            }
        }
        out
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            if !seen.insert(d as *const Derivation) {
                continue;
            }
            match d {
                Derivation::Horiz(a, b) | Derivation::Vert(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Derivation::Inv(a) => stack.push(a),
                _ => {}
            }
        }
        seen.len()
    }
}

/// Computes the 1-sphere of a derivation. Vertical composition requires the
/// middle words to agree letter for letter.
pub fn boundary(p: &Polygraph, d: &Derivation) -> Result<Sphere, DerivationError> {
    let mut memo = HashMap::new();
    boundary_memo(p, d, &mut memo)
}

fn boundary_memo(
    p: &Polygraph,
    d: &Derivation,
    memo: &mut HashMap<*const Derivation, Sphere>,
) -> Result<Sphere, DerivationError> {
    let key = d as *const Derivation;
    if let Some(s) = memo.get(&key) {
        return Ok(s.clone());
    }
    let sphere = match d {
        Derivation::Gen { rel, sign } => {
            let s = p.relation(rel).ok_or_else(|| DerivationError::UnknownCell(rel.clone()))?.clone();
            match sign {
                Sign::Pos => s,
                Sign::Neg => s.swap(),
            }
        }
        Derivation::Horiz(a, b) => {
            let sa = boundary_memo(p, a, memo)?;
            let sb = boundary_memo(p, b, memo)?;
            let compose = |u: &ZigzagWord, v: &ZigzagWord| {
                u.concat(v).map_err(|e| DerivationError::IllTyped(format!("horizontal composition: {e}")))
            };
            Sphere::new(compose(&sa.lhs, &sb.lhs)?, compose(&sa.rhs, &sb.rhs)?)
        }
        Derivation::Vert(a, b) => {
            let sa = boundary_memo(p, a, memo)?;
            let sb = boundary_memo(p, b, memo)?;
            if sa.rhs != sb.lhs {
                return Err(DerivationError::IllTyped(format!(
                    "vertical composition: `{}` does not match `{}`",
                    sa.rhs, sb.lhs
                )));
            }
            Sphere::new(sa.lhs, sb.rhs)
        }
        Derivation::Id(w) => {
            for l in w.letters() {
                if !p.has_gen(&l.gen) {
                    return Err(DerivationError::UnknownCell(l.gen.clone()));
                }
            }
            if !p.has_cell(w.src()) {
                return Err(DerivationError::UnknownCell(w.src().clone()));
            }
            w.check(p).map_err(|e| DerivationError::IllTyped(e.to_string()))?;
            Sphere::new(w.clone(), w.clone())
        }
        Derivation::Inv(a) => boundary_memo(p, a, memo)?.swap(),
        Derivation::Lambda(g) | Derivation::Rho(g) => {
            let (s, t) = p.endpoints(g).ok_or_else(|| DerivationError::UnknownCell(g.clone()))?;
            let (s, t) = (s.clone(), t.clone());
            let plus = SignedLetter::pos(g.clone());
            let minus = SignedLetter::neg(g.clone());
            if matches!(d, Derivation::Lambda(_)) {
                Sphere::new(ZigzagWord::from_parts(vec![minus, plus], t.clone(), t.clone()), ZigzagWord::identity(t))
            } else {
                Sphere::new(ZigzagWord::from_parts(vec![plus, minus], s.clone(), s.clone()), ZigzagWord::identity(s))
            }
        }
    };
    memo.insert(key, sphere.clone());
    Ok(sphere)
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Gen { rel, sign } => {
                write!(f, "(gen {rel} {})", if *sign == Sign::Pos { "+" } else { "-" })
            }
            Derivation::Horiz(a, b) => write!(f, "(h {a} {b})"),
            Derivation::Vert(a, b) => write!(f, "(v {a} {b})"),
            Derivation::Id(w) if w.is_empty() => write!(f, "(id 1 @ {})", w.src()),
            Derivation::Id(w) => write!(f, "(id {w})"),
            Derivation::Inv(a) => write!(f, "(inv {a})"),
            Derivation::Lambda(g) => write!(f, "(lam {g})"),
            Derivation::Rho(g) => write!(f, "(rho {g})"),
        }
    }
}

/// Parses a derivation s-expression, typing `id` words against `p`.
pub fn parse_derivation(text: &str, p: &Polygraph) -> Result<Arc<Derivation>, SyntaxError> {
    let tokens = syntax::tokenize(text)?;
    let mut cursor = Cursor::new(text, &tokens);
    let d = sexpr(&mut cursor, p)?;
    cursor.expect_end()?;
    Ok(d)
}

pub(crate) fn sexpr(cursor: &mut Cursor<'_>, p: &Polygraph) -> Result<Arc<Derivation>, SyntaxError> {
    cursor.expect(&TokenKind::LParen)?;
    let (head, head_span) = cursor.ident()?;
    let d = match head.as_str() {
        "gen" => {
            let (rel, _) = cursor.ident()?;
            let sign = if cursor.eat(&TokenKind::Plus) {
                Sign::Pos
            } else if cursor.eat(&TokenKind::Minus) {
                Sign::Neg
            } else {
                return Err(cursor.unexpected("`+` or `-`"));
            };
            Derivation::gen(cell(rel), sign)
        }
        "h" | "v" => {
            let a = sexpr(cursor, p)?;
            let b = sexpr(cursor, p)?;
            if head == "h" {
                Derivation::horiz(a, b)
            } else {
                Derivation::vert(a, b)
            }
        }
        "inv" => Derivation::inv(sexpr(cursor, p)?),
        "lam" | "rho" => {
            let (g, _) = cursor.ident()?;
            if head == "lam" {
                Derivation::lambda(cell(g))
            } else {
                Derivation::rho(cell(g))
            }
        }
        "id" => {
            let span = cursor.span();
            let (letters, _) = cursor.word_spanned()?;
            let at = if cursor.eat(&TokenKind::At) { Some(cursor.cell_name()?.0) } else { None };
            let word = p
                .type_word(letters, at.as_ref())
                .map_err(|e| SyntaxError { span, message: e.to_string() })?;
            Derivation::id(word)
        }
        other => {
            return Err(SyntaxError { span: head_span, message: format!("unknown derivation head `{other}`") })
        }
    };
    cursor.expect(&TokenKind::RParen)?;
    Ok(d)
}

fn cell(name: String) -> CellId {
    CellId::new(name).expect("lexer identifiers are valid names")
}
