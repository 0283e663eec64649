//! Text format for presentations (`.plg` files).
//!
//! Two forms are accepted. The angle form `< a, b | a b a = b a b >` builds a
//! one-object polygraph on the 0-cell `*` with relations named `r1, r2, …`.
//! The block form names everything explicitly:
//!
//! ```text
//! polygraph
//! cells: x y
//! gen f : x -> y
//! rel r : f f' = 1
//! ```
//!
//! Without a `cells:` line the block has the single 0-cell `*`. A relation
//! with two empty sides is anchored with `rel r @ x : 1 = 1`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::polygraph::{ModelError, Polygraph, Sphere};
use crate::syntax::{self, Cursor, SourceSpan, SyntaxError, Token, TokenKind};
use crate::words::{CellId, SignedLetter, WordError, ZigzagWord, DEFAULT_CELL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{span}: duplicate name `{name}`")]
    DuplicateName { name: String, span: SourceSpan },
    #[error("{span}: unknown generator `{name}`")]
    UnknownGenerator { name: String, span: SourceSpan },
    #[error("{span}: unknown 0-cell `{name}`")]
    UnknownCell { name: String, span: SourceSpan },
    #[error("{span}: {message}")]
    EndpointMismatch { message: String, span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax(e) => e.span,
            ParseError::DuplicateName { span, .. }
            | ParseError::UnknownGenerator { span, .. }
            | ParseError::UnknownCell { span, .. }
            | ParseError::EndpointMismatch { span, .. } => *span,
        }
    }
}

pub fn parse(text: &str) -> Result<Polygraph, ParseError> {
    let tokens = syntax::tokenize(text)?;
    let first = tokens.iter().find(|t| t.kind != TokenKind::Newline);
    if matches!(first, Some(Token { kind: TokenKind::Lt, .. })) {
        let flat: Vec<Token> = tokens.into_iter().filter(|t| t.kind != TokenKind::Newline).collect();
        parse_angle(&mut Cursor::new(text, &flat))
    } else {
        parse_block(&mut Cursor::new(text, &tokens))
    }
}

fn parse_angle(cursor: &mut Cursor<'_>) -> Result<Polygraph, ParseError> {
    cursor.expect(&TokenKind::Lt)?;
    let mut p = Polygraph::new();
    let base = CellId::default_cell();
    p.add_cell(base.clone()).expect("fresh polygraph");
    loop {
        let (name, span) = cursor.ident()?;
        let gen = CellId::new(name.clone()).expect("identifier");
        p.add_gen(gen, base.clone(), base.clone())
            .map_err(|_| ParseError::DuplicateName { name, span })?;
        if !cursor.eat(&TokenKind::Comma) {
            break;
        }
    }
    cursor.expect(&TokenKind::Pipe)?;
    if !cursor.eat(&TokenKind::Gt) {
        let mut index = 1;
        loop {
            let (lhs, rhs, eq_span) = relation_sides(cursor, &p)?;
            let (lhs, rhs) = type_sides(&p, lhs, rhs, None, eq_span)?;
            let name = CellId::new(format!("r{index}")).expect("valid name");
            p.add_rel(name, Sphere::new(lhs, rhs)).expect("auto names are distinct");
            index += 1;
            if !cursor.eat(&TokenKind::Comma) {
                break;
            }
        }
        cursor.expect(&TokenKind::Gt)?;
    }
    cursor.expect_end()?;
    Ok(p)
}

fn parse_block(cursor: &mut Cursor<'_>) -> Result<Polygraph, ParseError> {
    cursor.skip_newlines();
    cursor.expect_keyword("polygraph")?;
    cursor.expect_line_end()?;
    cursor.skip_newlines();
    let mut p = Polygraph::new();
    if cursor.eat_keyword("cells") {
        cursor.expect(&TokenKind::Colon)?;
        while !cursor.at_end() && cursor.peek() != Some(&TokenKind::Newline) {
            let (cell, span) = cursor.cell_name()?;
            p.add_cell(cell.clone())
                .map_err(|_| ParseError::DuplicateName { name: cell.to_string(), span })?;
        }
        cursor.expect_line_end()?;
    } else {
        p.add_cell(CellId::default_cell()).expect("fresh polygraph");
    }
    loop {
        cursor.skip_newlines();
        if cursor.at_end() {
            break;
        }
        if cursor.eat_keyword("gen") {
            let (name, span) = cursor.ident()?;
            cursor.expect(&TokenKind::Colon)?;
            let src = known_cell(cursor, &p)?;
            cursor.expect(&TokenKind::Arrow)?;
            let tgt = known_cell(cursor, &p)?;
            cursor.expect_line_end()?;
            p.add_gen(CellId::new(name.clone()).expect("identifier"), src, tgt)
                .map_err(|_| ParseError::DuplicateName { name, span })?;
        } else if cursor.eat_keyword("rel") {
            let (name, span) = cursor.ident()?;
            let at = if cursor.eat(&TokenKind::At) { Some(known_cell(cursor, &p)?) } else { None };
            cursor.expect(&TokenKind::Colon)?;
            let (lhs, rhs, eq_span) = relation_sides(cursor, &p)?;
            cursor.expect_line_end()?;
            let (lhs, rhs) = type_sides(&p, lhs, rhs, at.as_ref(), eq_span)?;
            p.add_rel(CellId::new(name.clone()).expect("identifier"), Sphere::new(lhs, rhs))
                .map_err(|_| ParseError::DuplicateName { name, span })?;
        } else {
            return Err(cursor.unexpected("`gen` or `rel`").into());
        }
    }
    Ok(p)
}

fn known_cell(cursor: &mut Cursor<'_>, p: &Polygraph) -> Result<CellId, ParseError> {
    let (cell, span) = cursor.cell_name()?;
    if !p.has_cell(&cell) {
        return Err(ParseError::UnknownCell { name: cell.to_string(), span });
    }
    Ok(cell)
}

type SpannedWord = (Vec<SignedLetter>, Vec<SourceSpan>);

fn relation_sides(
    cursor: &mut Cursor<'_>,
    p: &Polygraph,
) -> Result<(SpannedWord, SpannedWord, SourceSpan), ParseError> {
    let lhs = checked_word(cursor, p)?;
    let eq_span = cursor.span();
    cursor.expect(&TokenKind::Eq)?;
    let rhs = checked_word(cursor, p)?;
    Ok((lhs, rhs, eq_span))
}

fn checked_word(cursor: &mut Cursor<'_>, p: &Polygraph) -> Result<SpannedWord, ParseError> {
    let (letters, spans) = cursor.word_spanned()?;
    for (l, span) in letters.iter().zip(&spans) {
        if !p.has_gen(&l.gen) {
            return Err(ParseError::UnknownGenerator { name: l.gen.to_string(), span: *span });
        }
    }
    Ok((letters, spans))
}

fn type_sides(
    p: &Polygraph,
    (lhs, lhs_spans): SpannedWord,
    (rhs, rhs_spans): SpannedWord,
    at: Option<&CellId>,
    eq_span: SourceSpan,
) -> Result<(ZigzagWord, ZigzagWord), ParseError> {
    for (letters, spans) in [(&lhs, &lhs_spans), (&rhs, &rhs_spans)] {
        if letters.is_empty() {
            continue;
        }
        if let Err(WordError::EndpointMismatch { position, expected, found }) =
            ZigzagWord::infer(p, letters.clone())
        {
            return Err(ParseError::EndpointMismatch {
                message: format!("letter starts at `{found}` but the word is at `{expected}`"),
                span: spans.get(position).copied().unwrap_or(eq_span),
            });
        }
    }
    let mismatch = |message: String| ParseError::EndpointMismatch { message, span: eq_span };
    let (l, r) = p.type_sides(lhs, rhs, at).map_err(|e| match e {
        ModelError::Word(WordError::EmptyWithoutBase) => {
            mismatch("a relation with two empty sides needs `@ cell`".to_string())
        }
        other => mismatch(format!("sides do not fit together: {other}")),
    })?;
    if l.src() != r.src() || l.tgt() != r.tgt() {
        return Err(mismatch(format!(
            "sides are not parallel: {} -> {} versus {} -> {}",
            l.src(),
            l.tgt(),
            r.src(),
            r.tgt()
        )));
    }
    Ok((l, r))
}

fn is_angle_renderable(p: &Polygraph) -> bool {
    let cells: Vec<_> = p.cells0().collect();
    cells.len() == 1
        && cells[0].as_str() == DEFAULT_CELL
        && p.euler_data().n1 > 0
        && p.gens().all(|(_, s, t)| s.as_str() == DEFAULT_CELL && t.as_str() == DEFAULT_CELL)
        && p.rels().enumerate().all(|(i, (name, _))| name.as_str() == format!("r{}", i + 1))
}

/// Canonical text for a valid polygraph; `parse(render(p)) == p`.
pub fn render(p: &Polygraph) -> String {
    let mut out = String::new();
    if is_angle_renderable(p) {
        let gens: Vec<_> = p.gen_names().map(CellId::as_str).collect();
        let rels: Vec<_> = p.rels().map(|(_, s)| s.to_string()).collect();
        if rels.is_empty() {
            let _ = writeln!(out, "< {} | >", gens.join(", "));
        } else {
            let _ = writeln!(out, "< {} | {} >", gens.join(", "), rels.join(", "));
        }
        return out;
    }
    out.push_str("polygraph\n");
    out.push_str("cells:");
    for c in p.cells0() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    for (g, s, t) in p.gens() {
        let _ = writeln!(out, "gen {g} : {s} -> {t}");
    }
    for (r, sphere) in p.rels() {
        if sphere.lhs.is_empty() && sphere.rhs.is_empty() {
            let _ = writeln!(out, "rel {r} @ {} : {sphere}", sphere.lhs.src());
        } else {
            let _ = writeln!(out, "rel {r} : {sphere}");
        }
    }
    out
}
