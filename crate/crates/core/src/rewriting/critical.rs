//! Critical pairs and the local-confluence check.

use std::cmp::Ordering;

use super::{RewriteError, RewritingSystem, Rule, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    /// A proper suffix of the first lhs is a proper prefix of the second.
    Overlap { shared: usize },
    /// The second lhs occurs inside the first at `offset`.
    Inclusion { offset: usize },
}

/// A peak with its two one-step descendants. `left` rewrites with `first`
/// at offset 0; `right` rewrites with `second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub first: usize,
    pub second: usize,
    pub kind: OverlapKind,
    pub peak: Word,
    pub left: Word,
    pub right: Word,
}

/// Overlaps of `first` with `second`: `(kind, peak, left, right)`.
/// `same_rule` suppresses the trivial self-inclusion; `tie_ok` allows the
/// inclusion of an lhs of equal length, so that only one of the two roles
/// reports it.
pub(crate) fn overlaps(
    first: &Rule,
    second: &Rule,
    same_rule: bool,
    tie_ok: bool,
    mut emit: impl FnMut(OverlapKind, Word, Word, Word),
) {
    let (l1, r1) = (&first.lhs, &first.rhs);
    let (l2, r2) = (&second.lhs, &second.rhs);
    for shared in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - shared..] == l2[..shared] {
            let tail = &l2[shared..];
            let head = &l1[..l1.len() - shared];
            emit(
                OverlapKind::Overlap { shared },
                [l1.as_slice(), tail].concat(),
                [r1.as_slice(), tail].concat(),
                [head, r2.as_slice()].concat(),
            );
        }
    }
    let length_ok = l2.len() < l1.len() || (l2.len() == l1.len() && tie_ok);
    if !same_rule && length_ok {
        for offset in 0..=l1.len() - l2.len() {
            if l1[offset..offset + l2.len()] == l2[..] {
                emit(
                    OverlapKind::Inclusion { offset },
                    l1.clone(),
                    r1.clone(),
                    [&l1[..offset], r2.as_slice(), &l1[offset + l2.len()..]].concat(),
                );
            }
        }
    }
}

/// All critical pairs between rules `i` and `j` (in that role order).
pub(crate) fn pairs_between(rules: &[Rule], i: usize, j: usize, mut emit: impl FnMut(CriticalPair)) {
    overlaps(&rules[i], &rules[j], i == j, i < j, |kind, peak, left, right| {
        emit(CriticalPair { first: i, second: j, kind, peak, left, right })
    });
}

/// Every overlap and inclusion between left-hand sides, each once.
pub fn critical_pairs(s: &RewritingSystem) -> Vec<CriticalPair> {
    let rules = s.rules();
    let mut out = Vec::new();
    for i in 0..rules.len() {
        for j in 0..rules.len() {
            pairs_between(rules, i, j, |cp| out.push(cp));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    /// A critical pair whose descendants reach distinct normal forms.
    Refuted { peak: Word, left: Word, right: Word },
    /// A rule that does not decrease in the shortlex order.
    NotTerminating { rule: usize },
}

/// Checks termination (every rule decreases) and local confluence (every
/// critical pair joins), scanning peaks in shortlex order.
pub fn verify_convergent(s: &RewritingSystem) -> Result<Verdict, RewriteError> {
    for (i, r) in s.rules().iter().enumerate() {
        if r.lhs.is_empty() || s.order().compare(&r.lhs, &r.rhs) != Ordering::Greater {
            return Ok(Verdict::NotTerminating { rule: i });
        }
    }
    let mut pairs = critical_pairs(s);
    pairs.sort_by(|a, b| s.order().compare(&a.peak, &b.peak));
    for cp in pairs {
        let left = s.normalize(&cp.left)?;
        let right = s.normalize(&cp.right)?;
        if left != right {
            return Ok(Verdict::Refuted { peak: cp.peak, left, right });
        }
    }
    Ok(Verdict::Proven)
}
