//! Derivations replaying rewrite sequences.

use std::sync::Arc;

use crate::derivation::Derivation;
use crate::polygraph::Sphere;
use crate::words::{CellId, Sign};

use super::{Alphabet, Letter, Redex, Rule};

pub(super) fn cancellation_witness(alphabet: &Alphabet, rule: &Rule) -> Arc<Derivation> {
    let first = rule.lhs[0];
    let gen = alphabet.generators()[first.generator()].clone();
    if first.is_inverse() {
        Derivation::lambda(gen)
    } else {
        Derivation::rho(gen)
    }
}

/// `w ⇒ reduce(w)` by cancelling the leftmost pair each time; `None` when
/// `w` is already reduced.
pub(super) fn free_reduction(alphabet: &Alphabet, w: &[Letter]) -> Option<Arc<Derivation>> {
    let mut cur = w.to_vec();
    let mut steps: Vec<Arc<Derivation>> = Vec::new();
    while let Some(i) = cur.windows(2).position(|p| p[0].inverse() == p[1]) {
        let gen = alphabet.generators()[cur[i].generator()].clone();
        let unit = if cur[i].is_inverse() { Derivation::lambda(gen) } else { Derivation::rho(gen) };
        steps.push(Derivation::whisker(
            alphabet.to_zigzag(&cur[..i]),
            unit,
            alphabet.to_zigzag(&cur[i + 2..]),
        ));
        cur.drain(i..i + 2);
    }
    chain(steps)
}

/// Witness for a relation's rule before orientation: `reduce(lhs) ⇒ reduce(rhs)`.
pub(super) fn relation_witness(alphabet: &Alphabet, rel: &CellId, sphere: &Sphere) -> Arc<Derivation> {
    let lhs = alphabet.from_zigzag(&sphere.lhs).expect("relation letters are generators");
    let rhs = alphabet.from_zigzag(&sphere.rhs).expect("relation letters are generators");
    let mut d = Derivation::gen(rel.clone(), Sign::Pos);
    if let Some(r) = free_reduction(alphabet, &lhs) {
        d = Derivation::vert(Derivation::inv(r), d);
    }
    if let Some(r) = free_reduction(alphabet, &rhs) {
        d = Derivation::vert(d, r);
    }
    d
}

/// Vertical composite of a nonempty list of steps.
pub(super) fn chain(steps: Vec<Arc<Derivation>>) -> Option<Arc<Derivation>> {
    steps.into_iter().reduce(Derivation::vert)
}

/// Replays `redexes` starting from `w`; the identity on `w` when there are none.
pub(super) fn replay<'a>(
    alphabet: &Alphabet,
    w: &[Letter],
    redexes: &[Redex],
    rule: impl Fn(usize) -> (&'a Rule, &'a Arc<Derivation>),
) -> Arc<Derivation> {
    let mut cur = w.to_vec();
    let mut steps = Vec::with_capacity(redexes.len());
    for r in redexes {
        let (rule, witness) = rule(r.rule);
        let end = r.pos + rule.lhs.len();
        steps.push(step(alphabet, &cur[..r.pos], witness.clone(), &cur[end..]));
        cur.splice(r.pos..end, rule.rhs.iter().copied());
    }
    chain(steps).unwrap_or_else(|| identity(alphabet, w))
}

pub(super) fn step(
    alphabet: &Alphabet,
    prefix: &[Letter],
    d: Arc<Derivation>,
    suffix: &[Letter],
) -> Arc<Derivation> {
    Derivation::whisker(alphabet.to_zigzag(prefix), d, alphabet.to_zigzag(suffix))
}

pub(super) fn identity(alphabet: &Alphabet, w: &[Letter]) -> Arc<Derivation> {
    Derivation::id(alphabet.to_zigzag(w))
}

