//! Tietze transformations on 2-polygraphs.
//!
//! Each step is checked against the polygraph it applies to. Scripts are
//! read from a line-oriented text format:
//!
//! ```text
//! T0 g : x -> y                     # new 0-cell y and generator g : x -> y
//! T1 c := b a [@ x] [AS r]          # new generator c and relation b a = c
//! T2 r2 [: a c = c b] WITNESS (v ...) | WITNESS auto
//! INV T0 y [VIA g]
//! INV T1 c [VIA r]
//! INV T2 r1 WITNESS (v ...) | WITNESS auto
//! ```

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::derivation::{self, boundary, Derivation, DerivationError};
use crate::polygraph::{CellLevel, Polygraph, Sphere};
use crate::rewriting::{self, CompletionLimits};
use crate::syntax::{self, Cursor, SyntaxError, TokenKind};
use crate::words::{CellId, SignedLetter, WordError, ZigzagWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TietzeStep {
    /// Adds the 0-cell `new_cell` and the generator `new_gen : at -> new_cell`.
    T0 { at: CellId, new_cell: CellId, new_gen: CellId },
    /// Adds the generator `new_gen` and the relation `w = new_gen`.
    T1 { w: ZigzagWord, new_gen: CellId, new_rel: CellId },
    /// Adds the relation proved by `d`; `declared`, when given, must match.
    T2 { d: Arc<Derivation>, new_rel: CellId, declared: Option<Sphere> },
    InvT0 { cell: CellId, gen: CellId },
    InvT1 { gen: CellId, rel: CellId },
    /// Removes `rel`, with `d` proving it from the remaining relations.
    InvT2 { rel: CellId, d: Arc<Derivation> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TietzeError {
    #[error("name `{0}` is already used")]
    NotFresh(CellId),
    #[error("unknown 0-cell `{0}`")]
    UnknownCell(CellId),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(CellId),
    #[error("unknown relation `{0}`")]
    UnknownRelation(CellId),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("derivation: {0}")]
    Derivation(#[from] DerivationError),
    #[error("boundary mismatch: the derivation proves {found}, expected {expected}")]
    BoundaryMismatch { expected: Box<Sphere>, found: Box<Sphere> },
    #[error("generator still used: `{gen}` occurs in relation `{rel}`")]
    GeneratorStillUsed { gen: CellId, rel: CellId },
    #[error("relation `{rel}` is not of the form w = {gen} with {gen} absent from w")]
    NotDefining { gen: CellId, rel: CellId },
    #[error("0-cell `{cell}` cannot be removed: {reason}")]
    CellStillUsed { cell: CellId, reason: String },
}

fn check_fresh(p: &Polygraph, level: CellLevel, name: &CellId) -> Result<(), TietzeError> {
    let taken = match level {
        CellLevel::Zero => p.has_cell(name),
        CellLevel::One => p.has_gen(name),
        CellLevel::Two => p.relation(name).is_some(),
    };
    if taken {
        Err(TietzeError::NotFresh(name.clone()))
    } else {
        Ok(())
    }
}

fn relation<'a>(p: &'a Polygraph, rel: &CellId) -> Result<&'a Sphere, TietzeError> {
    p.relation(rel).ok_or_else(|| TietzeError::UnknownRelation(rel.clone()))
}

fn endpoints(p: &Polygraph, gen: &CellId) -> Result<(CellId, CellId), TietzeError> {
    p.gens()
        .find(|(g, _, _)| *g == gen)
        .map(|(_, s, t)| (s.clone(), t.clone()))
        .ok_or_else(|| TietzeError::UnknownGenerator(gen.clone()))
}

fn without_relation(p: &Polygraph, rel: &CellId) -> Polygraph {
    let mut q = p.clone();
    q.remove_rel(rel);
    q
}

/// The word `w` of a defining relation `w = gen` (or `gen = w`).
pub fn defining_word(p: &Polygraph, gen: &CellId, rel: &CellId) -> Result<ZigzagWord, TietzeError> {
    let sphere = relation(p, rel)?;
    let (s, t) = endpoints(p, gen)?;
    let single = ZigzagWord::from_parts(vec![SignedLetter::pos(gen.clone())], s, t);
    if sphere.rhs == single && !sphere.lhs.mentions(gen) {
        Ok(sphere.lhs.clone())
    } else if sphere.lhs == single && !sphere.rhs.mentions(gen) {
        Ok(sphere.rhs.clone())
    } else {
        Err(TietzeError::NotDefining { gen: gen.clone(), rel: rel.clone() })
    }
}

/// Checks the side conditions of `step` against `p`.
pub fn verify(p: &Polygraph, step: &TietzeStep) -> Result<(), TietzeError> {
    match step {
        TietzeStep::T0 { at, new_cell, new_gen } => {
            if !p.has_cell(at) {
                return Err(TietzeError::UnknownCell(at.clone()));
            }
            check_fresh(p, CellLevel::Zero, new_cell)?;
            check_fresh(p, CellLevel::One, new_gen)
        }
        TietzeStep::T1 { w, new_gen, new_rel } => {
            w.check(p)?;
            if !p.has_cell(w.src()) {
                return Err(TietzeError::UnknownCell(w.src().clone()));
            }
            check_fresh(p, CellLevel::One, new_gen)?;
            check_fresh(p, CellLevel::Two, new_rel)
        }
        TietzeStep::T2 { d, new_rel, declared } => {
            check_fresh(p, CellLevel::Two, new_rel)?;
            let found = boundary(p, d)?;
            match declared {
                Some(expected) if *expected != found => {
                    Err(TietzeError::BoundaryMismatch { expected: Box::new(expected.clone()), found: Box::new(found) })
                }
                _ => Ok(()),
            }
        }
        TietzeStep::InvT0 { cell, gen } => {
            if !p.has_cell(cell) {
                return Err(TietzeError::UnknownCell(cell.clone()));
            }
            let (s, t) = endpoints(p, gen)?;
            if &t != cell || &s == cell {
                return Err(TietzeError::CellStillUsed {
                    cell: cell.clone(),
                    reason: format!("`{gen}` is not a generator into it from another 0-cell"),
                });
            }
            if let Some((g, _, _)) = p.gens().find(|(g, s, t)| *g != gen && (*s == cell || *t == cell)) {
                return Err(TietzeError::CellStillUsed {
                    cell: cell.clone(),
                    reason: format!("it is also an endpoint of `{g}`"),
                });
            }
            for (r, sphere) in p.rels() {
                if sphere.lhs.src() == cell || sphere.lhs.tgt() == cell {
                    return Err(TietzeError::CellStillUsed {
                        cell: cell.clone(),
                        reason: format!("it is an endpoint of relation `{r}`"),
                    });
                }
                if sphere.lhs.mentions(gen) || sphere.rhs.mentions(gen) {
                    return Err(TietzeError::GeneratorStillUsed { gen: gen.clone(), rel: r.clone() });
                }
            }
            Ok(())
        }
        TietzeStep::InvT1 { gen, rel } => {
            defining_word(p, gen, rel)?;
            for (r, sphere) in p.rels() {
                if r != rel && (sphere.lhs.mentions(gen) || sphere.rhs.mentions(gen)) {
                    return Err(TietzeError::GeneratorStillUsed { gen: gen.clone(), rel: r.clone() });
                }
            }
            Ok(())
        }
        TietzeStep::InvT2 { rel, d } => {
            let expected = relation(p, rel)?.clone();
            let found = boundary(&without_relation(p, rel), d)?;
            if found != expected {
                return Err(TietzeError::BoundaryMismatch { expected: Box::new(expected), found: Box::new(found) });
            }
            Ok(())
        }
    }
}

/// Verifies `step` and returns the transformed polygraph.
pub fn apply(p: &Polygraph, step: &TietzeStep) -> Result<Polygraph, TietzeError> {
    verify(p, step)?;
    let mut q = p.clone();
    let added = match step {
        TietzeStep::T0 { at, new_cell, new_gen } => q
            .add_cell(new_cell.clone())
            .and_then(|_| q.add_gen(new_gen.clone(), at.clone(), new_cell.clone())),
        TietzeStep::T1 { w, new_gen, new_rel } => {
            let single = ZigzagWord::from_parts(vec![SignedLetter::pos(new_gen.clone())], w.src().clone(), w.tgt().clone());
            q.add_gen(new_gen.clone(), w.src().clone(), w.tgt().clone())
                .and_then(|_| q.add_rel(new_rel.clone(), Sphere::new(w.clone(), single)))
        }
        TietzeStep::T2 { d, new_rel, declared } => {
            let sphere = match declared {
                Some(s) => s.clone(),
                None => boundary(p, d)?,
            };
            q.add_rel(new_rel.clone(), sphere)
        }
        TietzeStep::InvT0 { cell, gen } => {
            q.remove_gen(gen);
            q.remove_cell(cell);
            Ok(())
        }
        TietzeStep::InvT1 { gen, rel } => {
            q.remove_rel(rel);
            q.remove_gen(gen);
            Ok(())
        }
        TietzeStep::InvT2 { rel, .. } => {
            q.remove_rel(rel);
            Ok(())
        }
    };
    added.expect("names were checked fresh");
    Ok(q)
}

/// The step undoing `step`, where `p` is the polygraph `step` applies to.
///
/// Undoing an `InvT1` whose relation reads `gen = w` restores it as `w = gen`.
pub fn inverse(p: &Polygraph, step: &TietzeStep) -> Result<TietzeStep, TietzeError> {
    verify(p, step)?;
    Ok(match step {
        TietzeStep::T0 { new_cell, new_gen, .. } => TietzeStep::InvT0 { cell: new_cell.clone(), gen: new_gen.clone() },
        TietzeStep::T1 { new_gen, new_rel, .. } => TietzeStep::InvT1 { gen: new_gen.clone(), rel: new_rel.clone() },
        TietzeStep::T2 { d, new_rel, .. } => TietzeStep::InvT2 { rel: new_rel.clone(), d: d.clone() },
        TietzeStep::InvT0 { cell, gen } => {
            let (at, _) = endpoints(p, gen)?;
            TietzeStep::T0 { at, new_cell: cell.clone(), new_gen: gen.clone() }
        }
        TietzeStep::InvT1 { gen, rel } => {
            TietzeStep::T1 { w: defining_word(p, gen, rel)?, new_gen: gen.clone(), new_rel: rel.clone() }
        }
        TietzeStep::InvT2 { rel, d } => TietzeStep::T2 {
            d: d.clone(),
            new_rel: rel.clone(),
            declared: Some(relation(p, rel)?.clone()),
        },
    })
}

fn write_sphere(f: &mut fmt::Formatter<'_>, s: &Sphere) -> fmt::Result {
    write!(f, "{s}")?;
    if s.lhs.is_empty() && s.rhs.is_empty() {
        write!(f, " @ {}", s.lhs.src())?;
    }
    Ok(())
}

impl fmt::Display for TietzeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TietzeStep::T0 { at, new_cell, new_gen } => write!(f, "T0 {new_gen} : {at} -> {new_cell}"),
            TietzeStep::T1 { w, new_gen, new_rel } => {
                write!(f, "T1 {new_gen} := {w}")?;
                if w.is_empty() {
                    write!(f, " @ {}", w.src())?;
                }
                write!(f, " AS {new_rel}")
            }
            TietzeStep::T2 { d, new_rel, declared } => {
                write!(f, "T2 {new_rel}")?;
                if let Some(s) = declared {
                    f.write_str(" : ")?;
                    write_sphere(f, s)?;
                }
                write!(f, " WITNESS {d}")
            }
            TietzeStep::InvT0 { cell, gen } => write!(f, "INV T0 {cell} VIA {gen}"),
            TietzeStep::InvT1 { gen, rel } => write!(f, "INV T1 {gen} VIA {rel}"),
            TietzeStep::InvT2 { rel, d } => write!(f, "INV T2 {rel} WITNESS {d}"),
        }
    }
}

/// A step that failed inside a script, with the state it was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index}: {error}")]
pub struct StepFailure {
    pub index: usize,
    pub state: Polygraph,
    pub error: TietzeError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TietzeScript {
    pub steps: Vec<TietzeStep>,
}

impl TietzeScript {
    /// Applies every step in order; the result holds `p` and each later state.
    pub fn run(&self, p: &Polygraph) -> Result<Vec<Polygraph>, StepFailure> {
        let mut states = vec![p.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            let cur = states.last().expect("nonempty");
            match apply(cur, step) {
                Ok(next) => states.push(next),
                Err(error) => return Err(StepFailure { index, state: cur.clone(), error }),
            }
        }
        Ok(states)
    }

    /// The script undoing this one, when it applies to `p`.
    pub fn inverse(&self, p: &Polygraph) -> Result<TietzeScript, StepFailure> {
        let states = self.run(p)?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for (index, step) in self.steps.iter().enumerate().rev() {
            let inv = inverse(&states[index], step)
                .map_err(|error| StepFailure { index, state: states[index].clone(), error })?;
            steps.push(inv);
        }
        Ok(TietzeScript { steps })
    }

    /// Image of a word over `p` in the polygraph the script produces.
    /// Generators removed by `INV T1` are replaced by their defining words.
    pub fn transport(&self, p: &Polygraph, w: &ZigzagWord) -> Result<ZigzagWord, TietzeError> {
        w.check(p)?;
        if !p.has_cell(w.src()) {
            return Err(TietzeError::UnknownCell(w.src().clone()));
        }
        let mut state = p.clone();
        let mut w = w.clone();
        for step in &self.steps {
            match step {
                TietzeStep::InvT1 { gen, rel } => {
                    let image = defining_word(&state, gen, rel)?;
                    w = w.substitute(gen, &image);
                }
                TietzeStep::InvT0 { cell, gen } => {
                    if w.mentions(gen) {
                        return Err(TietzeError::UnknownGenerator(gen.clone()));
                    }
                    if w.src() == cell {
                        return Err(TietzeError::UnknownCell(cell.clone()));
                    }
                }
                _ => {}
            }
            state = apply(&state, step)?;
        }
        Ok(w)
    }
}

impl fmt::Display for TietzeScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptErrorKind {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Step(#[from] TietzeError),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("{0}")]
    Ambiguous(String),
}

/// A script line that could not be read or applied, with the state before it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ScriptError {
    pub line: usize,
    pub state: Polygraph,
    pub kind: ScriptErrorKind,
}

const STOP_WORDS: &[&str] = &["AS", "VIA", "WITNESS"];

/// Reads and runs a script against `p`. Words and derivations on each line
/// are typed against the state the line applies to.
pub fn run_script(p: &Polygraph, text: &str) -> Result<(TietzeScript, Vec<Polygraph>), ScriptError> {
    let fail = |line, state: &Polygraph, kind| ScriptError { line, state: state.clone(), kind };
    let tokens = syntax::tokenize(text).map_err(|e| fail(e.span.line, p, e.into()))?;
    let mut cursor = Cursor::new(text, &tokens).with_stop_words(STOP_WORDS);
    let mut script = TietzeScript::default();
    let mut states = vec![p.clone()];
    loop {
        cursor.skip_newlines();
        if cursor.at_end() {
            break;
        }
        let line = cursor.span().line;
        let state = states.last().expect("nonempty");
        let step = read_step(&mut cursor, state).map_err(|kind| fail(line, state, kind))?;
        let next = apply(state, &step).map_err(|e| fail(line, state, e.into()))?;
        script.steps.push(step);
        states.push(next);
    }
    Ok((script, states))
}

fn name(cursor: &mut Cursor<'_>) -> Result<CellId, SyntaxError> {
    cursor.cell_name().map(|(c, _)| c)
}

fn read_step(cursor: &mut Cursor<'_>, p: &Polygraph) -> Result<TietzeStep, ScriptErrorKind> {
    let inverse = cursor.eat_keyword("INV");
    let (head, span) = cursor.ident()?;
    let step = match (inverse, head.as_str()) {
        (false, "T0") => {
            let new_gen = name(cursor)?;
            cursor.expect(&TokenKind::Colon)?;
            let at = name(cursor)?;
            cursor.expect(&TokenKind::Arrow)?;
            let new_cell = name(cursor)?;
            TietzeStep::T0 { at, new_cell, new_gen }
        }
        (false, "T1") => {
            let new_gen = name(cursor)?;
            cursor.expect(&TokenKind::Assign)?;
            let word_span = cursor.span();
            let letters = cursor.word()?;
            let at = if cursor.eat(&TokenKind::At) { Some(name(cursor)?) } else { None };
            let w = p
                .type_word(letters, at.as_ref())
                .map_err(|e| SyntaxError { span: word_span, message: e.to_string() })?;
            let new_rel = if cursor.eat_keyword("AS") {
                name(cursor)?
            } else {
                p.fresh_name(CellLevel::Two, new_gen.as_str())
            };
            TietzeStep::T1 { w, new_gen, new_rel }
        }
        (false, "T2") => {
            let new_rel = name(cursor)?;
            let declared = if cursor.eat(&TokenKind::Colon) {
                let sphere_span = cursor.span();
                let lhs = cursor.word()?;
                cursor.expect(&TokenKind::Eq)?;
                let rhs = cursor.word()?;
                let at = if cursor.eat(&TokenKind::At) { Some(name(cursor)?) } else { None };
                let (lhs, rhs) = p
                    .type_sides(lhs, rhs, at.as_ref())
                    .map_err(|e| SyntaxError { span: sphere_span, message: e.to_string() })?;
                Some(Sphere::new(lhs, rhs))
            } else {
                None
            };
            let d = match witness(cursor, p)? {
                Some(d) => d,
                None => {
                    let goal = declared
                        .as_ref()
                        .ok_or_else(|| ScriptErrorKind::NoWitness("`WITNESS auto` needs the relation written out".into()))?;
                    synthesize(p, goal)?
                }
            };
            TietzeStep::T2 { d, new_rel, declared }
        }
        (true, "T0") => {
            let cell = name(cursor)?;
            let gen = if cursor.eat_keyword("VIA") {
                name(cursor)?
            } else {
                unique(p.gens().filter(|(_, _, t)| *t == &cell).map(|(g, _, _)| g.clone()), || {
                    format!("0-cell `{cell}` is not the target of exactly one generator")
                })?
            };
            TietzeStep::InvT0 { cell, gen }
        }
        (true, "T1") => {
            let gen = name(cursor)?;
            let rel = if cursor.eat_keyword("VIA") {
                name(cursor)?
            } else {
                let users = p
                    .rels()
                    .filter(|(_, s)| s.lhs.mentions(&gen) || s.rhs.mentions(&gen))
                    .map(|(r, _)| r.clone());
                unique(users, || format!("generator `{gen}` does not occur in exactly one relation"))?
            };
            TietzeStep::InvT1 { gen, rel }
        }
        (true, "T2") => {
            let rel = name(cursor)?;
            let d = match witness(cursor, p)? {
                Some(d) => d,
                None => {
                    let goal = relation(p, &rel)?.clone();
                    synthesize(&without_relation(p, &rel), &goal)?
                }
            };
            TietzeStep::InvT2 { rel, d }
        }
        (_, other) => {
            return Err(SyntaxError { span, message: format!("unknown step `{other}`") }.into());
        }
    };
    cursor.expect_line_end()?;
    Ok(step)
}

fn unique(mut it: impl Iterator<Item = CellId>, message: impl Fn() -> String) -> Result<CellId, ScriptErrorKind> {
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(ScriptErrorKind::Ambiguous(message())),
    }
}

/// `WITNESS (sexpr)` gives `Some`, `WITNESS auto` gives `None`.
fn witness(cursor: &mut Cursor<'_>, p: &Polygraph) -> Result<Option<Arc<Derivation>>, SyntaxError> {
    cursor.expect_keyword("WITNESS")?;
    if cursor.eat_keyword("auto") {
        return Ok(None);
    }
    derivation::sexpr(cursor, p).map(Some)
}

/// Searches for a derivation of `goal` over `p` by completing `p` with
/// tracked witnesses. Works even when completion gives up, as long as both
/// sides reach the same irreducible word.
pub fn synthesize(p: &Polygraph, goal: &Sphere) -> Result<Arc<Derivation>, ScriptErrorKind> {
    let no = |m: String| ScriptErrorKind::NoWitness(m);
    let (s, _) = rewriting::encode(p, None, true).map_err(|e| no(e.to_string()))?;
    let limits = CompletionLimits { max_rules: 1024, ..CompletionLimits::default() };
    let outcome = rewriting::complete(&s, limits).map_err(|e| no(e.to_string()))?;
    let system = outcome.system();
    let a = system.alphabet();
    let lhs = a.from_zigzag(&goal.lhs).map_err(|e| no(e.to_string()))?;
    let rhs = a.from_zigzag(&goal.rhs).map_err(|e| no(e.to_string()))?;
    let traced = |w| system.normal_form_derivation(w).map_err(|e| no(e.to_string()));
    let (nl, dl) = traced(&lhs)?.expect("witnesses are tracked");
    let (nr, dr) = traced(&rhs)?.expect("witnesses are tracked");
    if nl != nr {
        let mut m = format!("`{}` and `{}` have distinct irreducible forms", a.render(&nl), a.render(&nr));
        if let rewriting::CompletionOutcome::GaveUp { reason, .. } = &outcome {
            m.push_str(&format!(" (completion gave up: {reason})"));
        }
        return Err(no(m));
    }
    Ok(Derivation::vert(dl, Derivation::inv(dr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn c(s: &str) -> CellId {
        CellId::new(s).unwrap()
    }

    fn braid3() -> Polygraph {
        parse("< a, b | a b a = b a b >").unwrap()
    }

    const BRAID_SCRIPT: &str = "\
T1 c := b a
T2 r2 : a c = c b WITNESS (v (h (id a) (inv (gen c_1 +))) (v (gen r1 +) (h (gen c_1 +) (id b))))
INV T2 r1 WITNESS (v (h (id a) (gen c_1 +)) (v (gen r2 +) (h (gen c_1 -) (id b))))
";

    #[test]
    fn t1_adds_generator_and_definition() {
        let p = braid3();
        let step = TietzeStep::T1 { w: p.word("b a").unwrap(), new_gen: c("c"), new_rel: c("c_1") };
        let q = apply(&p, &step).unwrap();
        let mut expected = Polygraph::bouquet(["a", "b", "c"]).unwrap();
        expected.add_rel_text("r1", "a b a", "b a b").unwrap();
        expected.add_rel_text("c_1", "b a", "c").unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn braid_script_runs() {
        let (script, states) = run_script(&braid3(), BRAID_SCRIPT).unwrap();
        assert_eq!(script.steps.len(), 3);
        let mut after_t2 = Polygraph::bouquet(["a", "b", "c"]).unwrap();
        after_t2.add_rel_text("r1", "a b a", "b a b").unwrap();
        after_t2.add_rel_text("c_1", "b a", "c").unwrap();
        after_t2.add_rel_text("r2", "a c", "c b").unwrap();
        assert_eq!(states[2], after_t2);
        let mut last = Polygraph::bouquet(["a", "b", "c"]).unwrap();
        last.add_rel_text("c_1", "b a", "c").unwrap();
        last.add_rel_text("r2", "a c", "c b").unwrap();
        assert_eq!(states[3], last);
    }

    #[test]
    fn script_renders_and_rereads() {
        let (script, _) = run_script(&braid3(), BRAID_SCRIPT).unwrap();
        let (again, _) = run_script(&braid3(), &script.to_string()).unwrap();
        assert_eq!(script, again);
    }

    #[test]
    fn auto_witnesses() {
        let text = "T1 c := b a AS def\nT2 r2 : a c = c b WITNESS auto\nINV T2 r1 WITNESS auto\n";
        let (_, states) = run_script(&braid3(), text).unwrap();
        let last = states.last().unwrap();
        assert!(last.relation(&c("r1")).is_none());
        assert!(last.relation(&c("def")).is_some());
    }

    #[test]
    fn boundary_mismatch_is_reported() {
        let mut p = Polygraph::bouquet(["a", "b", "c"]).unwrap();
        p.add_rel_text("comm", "a b", "b a").unwrap();
        let step = TietzeStep::T2 {
            d: Derivation::gen(c("comm"), crate::Sign::Pos),
            new_rel: c("r2"),
            declared: Some(Sphere::new(p.word("a c").unwrap(), p.word("c b").unwrap())),
        };
        let err = verify(&p, &step).unwrap_err();
        assert!(err.to_string().contains("boundary mismatch"), "{err}");
    }

    #[test]
    fn inv_t1_refuses_used_generator() {
        let (_, states) = run_script(&braid3(), BRAID_SCRIPT).unwrap();
        let step = TietzeStep::InvT1 { gen: c("c"), rel: c("c_1") };
        let err = verify(&states[3], &step).unwrap_err();
        assert!(err.to_string().contains("generator still used"), "{err}");
    }

    #[test]
    fn inv_t1_transports_by_substitution() {
        let p = braid3();
        let text = "T1 c := b a\nINV T1 c\n";
        let (script, states) = run_script(&p, text).unwrap();
        assert_eq!(states[2], p);
        let mid = &states[1];
        let tail = TietzeScript { steps: script.steps[1..].to_vec() };
        let w = tail.transport(mid, &mid.word("c").unwrap()).unwrap();
        assert_eq!(w, p.word("b a").unwrap());
        let w = tail.transport(mid, &mid.word("a c'").unwrap()).unwrap();
        assert_eq!(w, p.word("a a' b'").unwrap());
    }

    #[test]
    fn transport_fixes_words_without_removed_generators() {
        let p = braid3();
        let (script, _) = run_script(&p, BRAID_SCRIPT).unwrap();
        assert_eq!(script.transport(&p, &p.word("a b a").unwrap()).unwrap(), p.word("a b a").unwrap());
        assert_eq!(script.transport(&p, &p.word("1").unwrap()).unwrap(), p.word("1").unwrap());
        let stranger = Polygraph::bouquet(["z"]).unwrap().word("z").unwrap();
        assert!(script.transport(&p, &stranger).is_err());
    }

    #[test]
    fn t0_and_its_inverse() {
        let p = braid3();
        let step = TietzeStep::T0 { at: CellId::default_cell(), new_cell: c("y"), new_gen: c("g") };
        let q = apply(&p, &step).unwrap();
        assert_eq!(q.euler_data().n0, 2);
        let back = apply(&q, &inverse(&p, &step).unwrap()).unwrap();
        assert_eq!(back, p);
        let (_, states) = run_script(&p, "T0 g : * -> y\nINV T0 y\n").unwrap();
        assert_eq!(states[2], p);
    }

    #[test]
    fn inv_t0_refuses_cell_in_use() {
        let mut p = braid3();
        p.add_cell(c("y")).unwrap();
        p.add_gen(c("g"), CellId::default_cell(), c("y")).unwrap();
        p.add_gen(c("h"), c("y"), c("y")).unwrap();
        let err = verify(&p, &TietzeStep::InvT0 { cell: c("y"), gen: c("g") }).unwrap_err();
        assert!(matches!(err, TietzeError::CellStillUsed { .. }));
    }

    #[test]
    fn euler_bookkeeping() {
        let p = braid3();
        let (_, states) = run_script(&p, "T1 c := b a\nT2 r2 : a c = c b WITNESS auto\nT0 g : * -> y\n").unwrap();
        let chi0 = p.euler_data().chi();
        let chi: Vec<i64> = states.iter().map(|s| s.euler_data().chi()).collect();
        assert_eq!(chi, [chi0, chi0, chi0 + 1, chi0 + 1]);
    }

    #[test]
    fn script_errors_carry_line_and_state() {
        let p = braid3();
        let err = run_script(&p, "T1 c := b a\nT1 c := a\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.state.has_gen(&c("c")));
        assert!(matches!(err.kind, ScriptErrorKind::Step(TietzeError::NotFresh(_))));
        let err = run_script(&p, "T9 x\n").unwrap_err();
        assert!(matches!(err.kind, ScriptErrorKind::Syntax(_)));
    }
}
