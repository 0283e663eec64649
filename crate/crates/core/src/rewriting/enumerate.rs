//! Normal forms of a convergent system.

use super::{Letter, RewriteError, RewritingSystem, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    /// Every irreducible word, in shortlex order.
    Finite(Vec<Word>),
    /// More than the requested number of irreducible words exist.
    MoreThanCap,
}

impl Enumeration {
    pub fn forms(&self) -> &[Word] {
        match self {
            Enumeration::Finite(v) => v,
            Enumeration::MoreThanCap => &[],
        }
    }
}

/// Irreducible words, level by level. Each level extends the previous one by
/// a letter and keeps the words with no lhs as a suffix, which suffices
/// because prefixes of irreducible words are irreducible.
pub fn enumerate_normal_forms(s: &RewritingSystem, cap: usize) -> Result<Enumeration, RewriteError> {
    if !s.is_proven() {
        return Err(RewriteError::NotConvergent);
    }
    let letters: Vec<Letter> = s.order().precedence();
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    while !level.is_empty() {
        let mut next = Vec::new();
        for w in &level {
            for &l in &letters {
                let mut x = w.clone();
                x.push(l);
                if s.rules().iter().all(|r| !x.ends_with(&r.lhs)) {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > cap {
            return Ok(Enumeration::MoreThanCap);
        }
        level = next;
    }
    Ok(Enumeration::Finite(out))
}

/// Decides `u = v` by comparing normal forms.
pub fn word_equal(s: &RewritingSystem, u: &[Letter], v: &[Letter]) -> Result<bool, RewriteError> {
    if !s.is_proven() {
        return Err(RewriteError::NotConvergent);
    }
    Ok(s.normalize(u)? == s.normalize(v)?)
}
