//! String rewriting over generators and their formal inverses.
//!
//! A group presentation becomes a monoid rewriting system on the alphabet
//! `x, x'` for every generator `x`, with the cancellation rules `x x' -> 1`
//! and `x' x -> 1` always present. Rules are oriented by a shortlex order.

mod completion;
mod critical;
mod enumerate;
mod trace;

use std::cmp::Ordering;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::derivation::Derivation;
use crate::polygraph::Polygraph;
use crate::syntax::{self, Cursor, SyntaxError, TokenKind};
use crate::words::{CellId, Sign, SignedLetter, ZigzagWord};

pub use completion::{complete, CompletionLimits, CompletionOutcome, GaveUpReason};
pub use critical::{critical_pairs, verify_convergent, CriticalPair, OverlapKind, Verdict};
pub use enumerate::{enumerate_normal_forms, word_equal, Enumeration};

/// Default cap on rewrite steps for a single normalization.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Index into an [`Alphabet`]: `2k` is generator `k`, `2k + 1` its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
}

pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rewriting needs a single 0-cell, found {0}")]
    MultiObjectUnsupported(usize),
    #[error("normalization exceeded {0} rewrite steps")]
    StepLimitExceeded(usize),
    #[error("the system is not certified convergent")]
    NotConvergent,
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("rule `{0}` is not shortlex-decreasing")]
    RuleNotDecreasing(String),
    #[error("precedence: {0}")]
    BadPrecedence(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<CellId>,
    base: CellId,
}

impl Alphabet {
    pub fn new(gens: Vec<CellId>) -> Self {
        Alphabet { gens, base: CellId::default_cell() }
    }

    /// Same letters, with words read as loops on `base`.
    pub fn with_base(mut self, base: CellId) -> Self {
        self.base = base;
        self
    }

    pub fn base(&self) -> &CellId {
        &self.base
    }

    pub fn generators(&self) -> &[CellId] {
        &self.gens
    }

    /// Number of letters, inverses included.
    pub fn len(&self) -> usize {
        2 * self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.len() as u32).map(Letter)
    }

    pub fn letter(&self, gen: &CellId, sign: Sign) -> Option<Letter> {
        let k = self.gens.iter().position(|g| g == gen)? as u32;
        Some(Letter(2 * k + u32::from(sign == Sign::Neg)))
    }

    pub fn signed(&self, l: Letter) -> SignedLetter {
        let gen = self.gens[l.generator()].clone();
        if l.is_inverse() {
            SignedLetter::neg(gen)
        } else {
            SignedLetter::pos(gen)
        }
    }

    pub fn name(&self, l: Letter) -> String {
        self.signed(l).to_string()
    }

    pub fn from_signed(&self, letters: &[SignedLetter]) -> Result<Word, RewriteError> {
        letters
            .iter()
            .map(|l| self.letter(&l.gen, l.sign).ok_or_else(|| RewriteError::UnknownLetter(l.to_string())))
            .collect()
    }

    pub fn from_zigzag(&self, w: &ZigzagWord) -> Result<Word, RewriteError> {
        self.from_signed(w.letters())
    }

    /// Parses word syntax (`a b' a^2`, `1`).
    pub fn parse_word(&self, text: &str) -> Result<Word, RewriteError> {
        self.from_signed(&crate::words::parse_letters(text)?)
    }

    /// The word as a loop on the base 0-cell.
    pub fn to_zigzag(&self, w: &[Letter]) -> ZigzagWord {
        let base = self.base.clone();
        ZigzagWord::from_parts(w.iter().map(|&l| self.signed(l)).collect(), base.clone(), base)
    }

    pub fn render(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let names: Vec<_> = w.iter().map(|&l| self.name(l)).collect();
        names.join(" ")
    }

    /// Free reduction on letter words.
    pub fn free_reduce(w: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        for &l in w {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }
}

/// Shortlex order: length first, then lexicographic by letter precedence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortlex {
    rank: Vec<u32>,
}

impl Shortlex {
    /// Generators in declaration order, then their inverses in the same order.
    pub fn standard(alphabet: &Alphabet) -> Self {
        let n = alphabet.gens.len();
        let mut rank = vec![0; alphabet.len()];
        for k in 0..n {
            rank[2 * k] = k as u32;
            rank[2 * k + 1] = (n + k) as u32;
        }
        Shortlex { rank }
    }

    /// Letters listed from least to greatest. Listing only generators puts the
    /// inverses after them in the same order.
    pub fn from_precedence(alphabet: &Alphabet, precedence: &[Letter]) -> Result<Self, RewriteError> {
        let mut order: Vec<Letter> = precedence.to_vec();
        if order.iter().all(|l| !l.is_inverse()) {
            order.extend(precedence.iter().map(|l| l.inverse()));
        }
        let mut rank = vec![u32::MAX; alphabet.len()];
        for (r, l) in order.iter().enumerate() {
            let slot = rank
                .get_mut(l.0 as usize)
                .ok_or_else(|| RewriteError::BadPrecedence(format!("letter {} out of range", l.0)))?;
            if *slot != u32::MAX {
                return Err(RewriteError::BadPrecedence(format!("`{}` listed twice", alphabet.name(*l))));
            }
            *slot = r as u32;
        }
        if let Some(missing) = rank.iter().position(|&r| r == u32::MAX) {
            return Err(RewriteError::BadPrecedence(format!(
                "`{}` is missing",
                alphabet.name(Letter(missing as u32))
            )));
        }
        Ok(Shortlex { rank })
    }

    /// Parses a comma-separated precedence such as `a,b,c` or `a,a',b,b'`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self, RewriteError> {
        let mut letters = Vec::new();
        for part in text.split(',') {
            let word = alphabet.parse_word(part.trim())?;
            if word.len() != 1 {
                return Err(RewriteError::BadPrecedence(format!("`{}` is not a single letter", part.trim())));
            }
            letters.push(word[0]);
        }
        Self::from_precedence(alphabet, &letters)
    }

    pub fn rank(&self, l: Letter) -> u32 {
        self.rank[l.0 as usize]
    }

    pub fn compare(&self, a: &[Letter], b: &[Letter]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                match self.rank(*x).cmp(&self.rank(*y)) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }

    /// Letters from least to greatest.
    pub fn precedence(&self) -> Vec<Letter> {
        let mut letters: Vec<Letter> = (0..self.rank.len() as u32).map(Letter).collect();
        letters.sort_by_key(|&l| self.rank(l));
        letters
    }

    /// Key whose natural order is this shortlex order.
    pub fn key(&self, w: &[Letter]) -> (usize, Vec<u32>) {
        (w.len(), w.iter().map(|&l| self.rank(l)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Rule { lhs, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Proven,
    Unknown,
}

/// One rewrite: rule `rule` applied at offset `pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Redex {
    pub pos: usize,
    pub rule: usize,
}

/// Oriented rules with a fixed shortlex order.
///
/// When built from a polygraph with witness tracking, every rule carries a
/// derivation whose boundary is `(lhs, rhs)` read as words on `*`.
#[derive(Debug, Clone)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    order: Shortlex,
    rules: Vec<Rule>,
    certificate: Certificate,
    witnesses: Option<Vec<Arc<Derivation>>>,
    by_first: Vec<Vec<usize>>,
    max_lhs: usize,
    max_steps: usize,
}

impl RewritingSystem {
    /// The cancellation rules for every generator, followed by `rules`
    /// (duplicates of cancellation rules are skipped).
    pub fn new(alphabet: Alphabet, order: Shortlex, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        let mut all = cancellation_rules(&alphabet);
        for r in rules {
            if !all.contains(&r) {
                all.push(r);
            }
        }
        Self::from_rules(alphabet, order, all, None)
    }

    pub(crate) fn from_rules(
        alphabet: Alphabet,
        order: Shortlex,
        rules: Vec<Rule>,
        witnesses: Option<Vec<Arc<Derivation>>>,
    ) -> Result<Self, RewriteError> {
        for r in &rules {
            if r.lhs.is_empty() || order.compare(&r.lhs, &r.rhs) != Ordering::Greater {
                return Err(RewriteError::RuleNotDecreasing(render_rule(&alphabet, r)));
            }
        }
        let mut s = RewritingSystem {
            alphabet,
            order,
            rules,
            certificate: Certificate::Unknown,
            witnesses,
            by_first: Vec::new(),
            max_lhs: 0,
            max_steps: DEFAULT_MAX_STEPS,
        };
        s.reindex();
        Ok(s)
    }

    fn reindex(&mut self) {
        self.by_first = vec![Vec::new(); self.alphabet.len()];
        for (i, r) in self.rules.iter().enumerate() {
            self.by_first[r.lhs[0].0 as usize].push(i);
        }
        self.max_lhs = self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0);
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> &Shortlex {
        &self.order
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn is_proven(&self) -> bool {
        self.certificate == Certificate::Proven
    }

    pub(crate) fn set_certificate(&mut self, c: Certificate) {
        self.certificate = c;
    }

    pub fn witnesses(&self) -> Option<&[Arc<Derivation>]> {
        self.witnesses.as_deref()
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// Rules other than the built-in cancellation rules.
    pub fn group_rules(&self) -> impl Iterator<Item = &Rule> {
        let cancel = cancellation_rules(&self.alphabet);
        self.rules.iter().filter(move |r| !cancel.contains(r))
    }

    /// Checks convergence and records the certificate.
    pub fn certify(&mut self) -> Result<Verdict, RewriteError> {
        let v = verify_convergent(self)?;
        self.certificate = if v == Verdict::Proven { Certificate::Proven } else { Certificate::Unknown };
        Ok(v)
    }

    /// Leftmost redex, lowest rule index among those starting there.
    pub fn first_redex(&self, w: &[Letter], from: usize) -> Option<Redex> {
        (from..w.len()).find_map(|pos| {
            self.by_first[w[pos].0 as usize]
                .iter()
                .find(|&&i| w[pos..].starts_with(&self.rules[i].lhs))
                .map(|&rule| Redex { pos, rule })
        })
    }

    /// Every redex of `w`, by position then rule index.
    pub fn redexes(&self, w: &[Letter]) -> Vec<Redex> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            for &rule in &self.by_first[w[pos].0 as usize] {
                if w[pos..].starts_with(&self.rules[rule].lhs) {
                    out.push(Redex { pos, rule });
                }
            }
        }
        out
    }

    pub fn rewrite_at(&self, w: &[Letter], redex: Redex) -> Word {
        let rule = &self.rules[redex.rule];
        let mut out = Vec::with_capacity(w.len() + rule.rhs.len());
        out.extend_from_slice(&w[..redex.pos]);
        out.extend_from_slice(&rule.rhs);
        out.extend_from_slice(&w[redex.pos + rule.lhs.len()..]);
        out
    }

    pub fn is_irreducible(&self, w: &[Letter]) -> bool {
        self.first_redex(w, 0).is_none()
    }

    /// Rewrites the leftmost redex (lowest rule index first) until irreducible.
    pub fn normalize(&self, w: &[Letter]) -> Result<Word, RewriteError> {
        let mut steps = 0;
        self.normalize_counted(w, &mut steps, self.max_steps, |_| {})
    }

    /// Normal form together with the redexes applied, in order.
    pub fn normalize_traced(&self, w: &[Letter]) -> Result<(Word, Vec<Redex>), RewriteError> {
        let mut steps = 0;
        let mut trace = Vec::new();
        let nf = self.normalize_counted(w, &mut steps, self.max_steps, |r| trace.push(r))?;
        Ok((nf, trace))
    }

    pub(crate) fn normalize_counted(
        &self,
        w: &[Letter],
        steps: &mut usize,
        limit: usize,
        mut on_step: impl FnMut(Redex),
    ) -> Result<Word, RewriteError> {
        let mut cur = w.to_vec();
        let mut from = 0;
        while let Some(redex) = self.first_redex(&cur, from) {
            if *steps >= limit {
                return Err(RewriteError::StepLimitExceeded(limit));
            }
            *steps += 1;
            on_step(redex);
            cur = self.rewrite_at(&cur, redex);
            from = redex.pos.saturating_sub(self.max_lhs.saturating_sub(1));
        }
        Ok(cur)
    }

    /// Derivation from `w` to its normal form, valid when witnesses are tracked.
    pub fn normal_form_derivation(&self, w: &[Letter]) -> Result<Option<(Word, Arc<Derivation>)>, RewriteError> {
        let Some(witnesses) = &self.witnesses else { return Ok(None) };
        let (nf, redexes) = self.normalize_traced(w)?;
        let d = trace::replay(&self.alphabet, w, &redexes, |i| (&self.rules[i], &witnesses[i]));
        Ok(Some((nf, d)))
    }

    /// `order: a < b < a' < b'` followed by one `lhs -> rhs` line per rule.
    pub fn to_text(&self) -> String {
        let mut out = String::from("order:");
        for (i, l) in self.order.precedence().into_iter().enumerate() {
            if i > 0 {
                out.push_str(" <");
            }
            let _ = write!(out, " {}", self.alphabet.name(l));
        }
        out.push('\n');
        for r in &self.rules {
            let _ = writeln!(out, "{}", render_rule(&self.alphabet, r));
        }
        out
    }

    /// Reads the format written by [`RewritingSystem::to_text`]. The result
    /// carries no certificate. Missing cancellation rules are supplied.
    pub fn from_text(text: &str) -> Result<Self, RewriteError> {
        let tokens = syntax::tokenize(text)?;
        let mut cursor = Cursor::new(text, &tokens);
        cursor.skip_newlines();
        cursor.expect_keyword("order")?;
        cursor.expect(&TokenKind::Colon)?;
        let mut listed: Vec<SignedLetter> = Vec::new();
        loop {
            let (name, _) = cursor.ident()?;
            let gen = CellId::new(name).expect("identifier");
            let sign = if cursor.eat(&TokenKind::Prime) { Sign::Neg } else { Sign::Pos };
            listed.push(SignedLetter { gen, sign });
            if !cursor.eat(&TokenKind::Lt) {
                break;
            }
        }
        cursor.expect_line_end()?;
        let mut gens: Vec<CellId> = Vec::new();
        for l in &listed {
            if !gens.contains(&l.gen) {
                gens.push(l.gen.clone());
            }
        }
        let alphabet = Alphabet::new(gens);
        let precedence = alphabet.from_signed(&listed)?;
        if precedence.len() != alphabet.len() {
            return Err(RewriteError::BadPrecedence(
                "the order must list every generator and its inverse exactly once".to_string(),
            ));
        }
        let order = Shortlex::from_precedence(&alphabet, &precedence)?;
        let mut rules = Vec::new();
        loop {
            cursor.skip_newlines();
            if cursor.at_end() {
                break;
            }
            let lhs = alphabet.from_signed(&cursor.word()?)?;
            cursor.expect(&TokenKind::Arrow)?;
            let rhs = alphabet.from_signed(&cursor.word()?)?;
            cursor.expect_line_end()?;
            rules.push(Rule::new(lhs, rhs));
        }
        // Cancellation rules are added only where the listed rules leave
        // their left side irreducible, so completed systems read back as is.
        let listed = Self::from_rules(alphabet.clone(), order.clone(), rules.clone(), None)?;
        let mut all: Vec<Rule> = cancellation_rules(&alphabet)
            .into_iter()
            .filter(|r| !rules.contains(r) && listed.is_irreducible(&r.lhs))
            .collect();
        all.extend(rules);
        Self::from_rules(alphabet, order, all, None)
    }
}

impl fmt::Display for RewritingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn render_rule(alphabet: &Alphabet, r: &Rule) -> String {
    format!("{} -> {}", alphabet.render(&r.lhs), alphabet.render(&r.rhs))
}

pub(crate) fn cancellation_rules(alphabet: &Alphabet) -> Vec<Rule> {
    (0..alphabet.gens.len() as u32)
        .flat_map(|k| {
            let (x, xi) = (Letter(2 * k), Letter(2 * k + 1));
            [Rule::new(vec![x, xi], vec![]), Rule::new(vec![xi, x], vec![])]
        })
        .collect()
}

/// What `encode` did with each relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeNote {
    Oriented { rel: CellId, rule: usize },
    Dropped { rel: CellId },
}

/// Turns a one-object polygraph into a rewriting system: the cancellation
/// rules, then each relation with both sides freely reduced and oriented
/// greater-to-smaller. Relations whose reduced sides coincide are dropped.
///
/// With `track` set, each rule carries a derivation over `p`.
pub fn encode(
    p: &Polygraph,
    order: Option<&Shortlex>,
    track: bool,
) -> Result<(RewritingSystem, Vec<EncodeNote>), RewriteError> {
    let n0 = p.euler_data().n0;
    if n0 != 1 {
        return Err(RewriteError::MultiObjectUnsupported(n0));
    }
    let base = p.single_cell().expect("one 0-cell").clone();
    let alphabet = Alphabet::new(p.gen_names().cloned().collect()).with_base(base);
    let order = match order {
        Some(o) => o.clone(),
        None => Shortlex::standard(&alphabet),
    };
    let mut rules = cancellation_rules(&alphabet);
    let mut witnesses: Vec<Arc<Derivation>> = if track {
        rules.iter().map(|r| trace::cancellation_witness(&alphabet, r)).collect()
    } else {
        Vec::new()
    };
    let mut notes = Vec::new();
    for (name, sphere) in p.rels() {
        let lhs = Alphabet::free_reduce(&alphabet.from_zigzag(&sphere.lhs)?);
        let rhs = Alphabet::free_reduce(&alphabet.from_zigzag(&sphere.rhs)?);
        let (big, small, flipped) = match order.compare(&lhs, &rhs) {
            Ordering::Equal => {
                notes.push(EncodeNote::Dropped { rel: name.clone() });
                continue;
            }
            Ordering::Greater => (lhs, rhs, false),
            Ordering::Less => (rhs, lhs, true),
        };
        let rule = Rule::new(big, small);
        if let Some(existing) = rules.iter().position(|r| *r == rule) {
            notes.push(EncodeNote::Oriented { rel: name.clone(), rule: existing });
            continue;
        }
        if track {
            let d = trace::relation_witness(&alphabet, name, sphere);
            witnesses.push(if flipped { Derivation::inv(d) } else { d });
        }
        notes.push(EncodeNote::Oriented { rel: name.clone(), rule: rules.len() });
        rules.push(rule);
    }
    let system = RewritingSystem::from_rules(alphabet, order, rules, track.then_some(witnesses))?;
    Ok((system, notes))
}
