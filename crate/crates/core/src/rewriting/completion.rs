//! Knuth-Bendix completion for string rewriting systems.
//!
//! Critical pairs are processed smallest peak first (shortlex, ties by
//! creation order). Each new rule inter-reduces the others: rules whose lhs it
//! rewrites are turned back into equations, rules whose rhs it rewrites are
//! renormalized. The run is deterministic.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use crate::derivation::Derivation;

use super::critical::{overlaps, verify_convergent, OverlapKind, Verdict};
use super::trace;
use super::{Alphabet, Certificate, Letter, Redex, RewriteError, RewritingSystem, Rule, Shortlex, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_lhs_len: usize,
    pub max_steps: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits { max_rules: 4096, max_lhs_len: 64, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaveUpReason {
    MaxRules(usize),
    MaxLhsLen(usize),
    MaxSteps(usize),
}

impl fmt::Display for GaveUpReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaveUpReason::MaxRules(n) => write!(f, "rule limit {n} reached"),
            GaveUpReason::MaxLhsLen(n) => write!(f, "a left-hand side longer than {n} was needed"),
            GaveUpReason::MaxSteps(n) => write!(f, "rewrite step limit {n} reached"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum CompletionOutcome {
    Converged(RewritingSystem),
    GaveUp { system: RewritingSystem, reason: GaveUpReason },
}

impl CompletionOutcome {
    pub fn system(&self) -> &RewritingSystem {
        match self {
            CompletionOutcome::Converged(s) | CompletionOutcome::GaveUp { system: s, .. } => s,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, CompletionOutcome::Converged(_))
    }
}

struct Entry {
    rule: Rule,
    witness: Option<Arc<Derivation>>,
    alive: bool,
}

#[derive(PartialEq, Eq)]
struct Pending {
    key: (usize, Vec<u32>, u64),
    first: usize,
    second: usize,
    kind: OverlapKind,
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Equation {
    lhs: Word,
    rhs: Word,
    witness: Option<Arc<Derivation>>,
}

struct Completer {
    alphabet: Alphabet,
    order: Shortlex,
    limits: CompletionLimits,
    track: bool,
    entries: Vec<Entry>,
    by_first: Vec<Vec<usize>>,
    max_lhs: usize,
    alive: usize,
    steps: usize,
    seq: u64,
    queue: BinaryHeap<Reverse<Pending>>,
    equations: Vec<Equation>,
}

type Step<T> = Result<T, GaveUpReason>;

impl Completer {
    fn new(s: &RewritingSystem, limits: CompletionLimits) -> Self {
        let track = s.witnesses().is_some();
        let mut c = Completer {
            alphabet: s.alphabet().clone(),
            order: s.order().clone(),
            limits,
            track,
            entries: Vec::new(),
            by_first: vec![Vec::new(); s.alphabet().len()],
            max_lhs: 0,
            alive: 0,
            steps: 0,
            seq: 0,
            queue: BinaryHeap::new(),
            equations: Vec::new(),
        };
        for (i, r) in s.rules().iter().enumerate() {
            c.equations.push(Equation {
                lhs: r.lhs.clone(),
                rhs: r.rhs.clone(),
                witness: s.witnesses().map(|w| w[i].clone()),
            });
        }
        // Earlier rules are added first.
        c.equations.reverse();
        c
    }

    fn first_redex(&self, w: &[Letter], from: usize) -> Option<Redex> {
        (from..w.len()).find_map(|pos| {
            self.by_first[w[pos].0 as usize]
                .iter()
                .find(|&&i| w[pos..].starts_with(&self.entries[i].rule.lhs))
                .map(|&rule| Redex { pos, rule })
        })
    }

    fn normalize(&mut self, w: &[Letter]) -> Step<(Word, Option<Arc<Derivation>>)> {
        let mut cur = w.to_vec();
        let mut from = 0;
        let mut redexes = Vec::new();
        while let Some(redex) = self.first_redex(&cur, from) {
            if self.steps >= self.limits.max_steps {
                return Err(GaveUpReason::MaxSteps(self.limits.max_steps));
            }
            self.steps += 1;
            let lhs_len = self.entries[redex.rule].rule.lhs.len();
            if self.track {
                redexes.push(redex);
            }
            cur.splice(redex.pos..redex.pos + lhs_len, self.entries[redex.rule].rule.rhs.iter().copied());
            from = redex.pos.saturating_sub(self.max_lhs.saturating_sub(1));
        }
        let d = self.track.then(|| {
            trace::replay(&self.alphabet, w, &redexes, |i| {
                let e = &self.entries[i];
                (&e.rule, e.witness.as_ref().expect("tracked"))
            })
        });
        Ok((cur, d))
    }

    fn push_pairs(&mut self, i: usize, j: usize) {
        let (a, b) = (&self.entries[i].rule, &self.entries[j].rule);
        let mut found = Vec::new();
        overlaps(a, b, i == j, i < j, |kind, peak, _, _| found.push((kind, peak)));
        for (kind, peak) in found {
            let key = (peak.len(), peak.iter().map(|&l| self.order.rank(l)).collect(), self.seq);
            self.seq += 1;
            self.queue.push(Reverse(Pending { key, first: i, second: j, kind }));
        }
    }

    fn pair_equation(&self, p: &Pending) -> Equation {
        let (a, b) = (&self.entries[p.first], &self.entries[p.second]);
        let (l1, l2) = (&a.rule.lhs, &b.rule.lhs);
        let (left, right, left_d, right_d) = match p.kind {
            OverlapKind::Overlap { shared } => {
                let tail = &l2[shared..];
                let head = &l1[..l1.len() - shared];
                let left = [a.rule.rhs.as_slice(), tail].concat();
                let right = [head, b.rule.rhs.as_slice()].concat();
                let ld = a.witness.as_ref().map(|w| trace::step(&self.alphabet, &[], w.clone(), tail));
                let rd = b.witness.as_ref().map(|w| trace::step(&self.alphabet, head, w.clone(), &[]));
                (left, right, ld, rd)
            }
            OverlapKind::Inclusion { offset } => {
                let prefix = &l1[..offset];
                let suffix = &l1[offset + l2.len()..];
                let right = [prefix, b.rule.rhs.as_slice(), suffix].concat();
                let rd = b.witness.as_ref().map(|w| trace::step(&self.alphabet, prefix, w.clone(), suffix));
                (a.rule.rhs.clone(), right, a.witness.clone(), rd)
            }
        };
        let witness = match (left_d, right_d) {
            (Some(l), Some(r)) => Some(Derivation::vert(Derivation::inv(l), r)),
            _ => None,
        };
        Equation { lhs: left, rhs: right, witness }
    }

    fn process(&mut self, eq: Equation) -> Step<()> {
        let (a, da) = self.normalize(&eq.lhs)?;
        let (b, db) = self.normalize(&eq.rhs)?;
        let witness = match (eq.witness, da, db) {
            (Some(w), Some(da), Some(db)) => Some(Derivation::vert(Derivation::inv(da), Derivation::vert(w, db))),
            _ => None,
        };
        match self.order.compare(&a, &b) {
            Ordering::Equal => Ok(()),
            Ordering::Greater => self.add_rule(Rule::new(a, b), witness),
            Ordering::Less => self.add_rule(Rule::new(b, a), witness.map(Derivation::inv)),
        }
    }

    fn add_rule(&mut self, rule: Rule, witness: Option<Arc<Derivation>>) -> Step<()> {
        if rule.lhs.len() > self.limits.max_lhs_len {
            return Err(GaveUpReason::MaxLhsLen(self.limits.max_lhs_len));
        }
        if self.alive >= self.limits.max_rules {
            return Err(GaveUpReason::MaxRules(self.limits.max_rules));
        }
        let id = self.entries.len();
        self.by_first[rule.lhs[0].0 as usize].push(id);
        self.max_lhs = self.max_lhs.max(rule.lhs.len());
        let new_lhs = rule.lhs.clone();
        self.entries.push(Entry { rule, witness, alive: true });
        self.alive += 1;

        for m in 0..id {
            if !self.entries[m].alive {
                continue;
            }
            if contains(&self.entries[m].rule.lhs, &new_lhs) {
                self.kill(m);
                let e = &self.entries[m];
                self.equations.push(Equation {
                    lhs: e.rule.lhs.clone(),
                    rhs: e.rule.rhs.clone(),
                    witness: e.witness.clone(),
                });
            } else if contains(&self.entries[m].rule.rhs, &new_lhs) {
                let rhs = self.entries[m].rule.rhs.clone();
                let (nf, d) = self.normalize(&rhs)?;
                let e = &mut self.entries[m];
                e.rule.rhs = nf;
                if let (Some(w), Some(d)) = (e.witness.take(), d) {
                    e.witness = Some(Derivation::vert(w, d));
                }
            }
        }
        for m in 0..=id {
            if self.entries[m].alive {
                self.push_pairs(id, m);
                if m != id {
                    self.push_pairs(m, id);
                }
            }
        }
        Ok(())
    }

    fn kill(&mut self, m: usize) {
        self.entries[m].alive = false;
        self.alive -= 1;
        let first = self.entries[m].rule.lhs[0].0 as usize;
        self.by_first[first].retain(|&i| i != m);
    }

    fn run(&mut self) -> Step<()> {
        loop {
            while let Some(eq) = self.equations.pop() {
                self.process(eq)?;
            }
            let Some(Reverse(p)) = self.queue.pop() else { return Ok(()) };
            if self.entries[p.first].alive && self.entries[p.second].alive {
                let eq = self.pair_equation(&p);
                self.equations.push(eq);
            }
        }
    }

    fn reseed(&mut self) {
        let live: Vec<usize> = (0..self.entries.len()).filter(|&i| self.entries[i].alive).collect();
        for &i in &live {
            for &j in &live {
                self.push_pairs(i, j);
            }
        }
    }

    fn system(&self) -> RewritingSystem {
        let live: Vec<&Entry> = self.entries.iter().filter(|e| e.alive).collect();
        let rules = live.iter().map(|e| e.rule.clone()).collect();
        let witnesses = self
            .track
            .then(|| live.iter().map(|e| e.witness.clone().expect("tracked")).collect());
        RewritingSystem::from_rules(self.alphabet.clone(), self.order.clone(), rules, witnesses)
            .expect("completion only adds decreasing rules")
    }
}

fn contains(haystack: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= haystack.len() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Runs Knuth-Bendix completion. Never loops forever: every limit in
/// `limits` is enforced.
pub fn complete(s: &RewritingSystem, limits: CompletionLimits) -> Result<CompletionOutcome, RewriteError> {
    let mut c = Completer::new(s, limits);
    loop {
        if let Err(reason) = c.run() {
            return Ok(CompletionOutcome::GaveUp { system: c.system(), reason });
        }
        let mut system = c.system();
        match verify_convergent(&system)? {
            Verdict::Proven => {
                system.set_certificate(Certificate::Proven);
                return Ok(CompletionOutcome::Converged(system));
            }
            Verdict::NotTerminating { .. } => unreachable!("completion only adds decreasing rules"),
            Verdict::Refuted { .. } => c.reseed(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::boundary;
    use crate::parser::parse;
    use crate::rewriting::{encode, enumerate_normal_forms};

    fn completed(text: &str, order: Option<&str>, track: bool) -> (crate::Polygraph, CompletionOutcome) {
        let p = parse(text).unwrap();
        let alphabet = Alphabet::new(p.gen_names().cloned().collect());
        let order = order.map(|o| Shortlex::parse(&alphabet, o).unwrap());
        let (s, _) = encode(&p, order.as_ref(), track).unwrap();
        let out = complete(&s, CompletionLimits::default()).unwrap();
        (p, out)
    }

    #[test]
    fn cyclic_group_of_order_five() {
        let (_, out) = completed("< a | a^5 = 1 >", None, false);
        let CompletionOutcome::Converged(s) = out else { panic!("did not converge") };
        // Every word up to length 10 lands on one of five normal forms.
        let mut forms = std::collections::BTreeSet::new();
        let letters: Vec<Letter> = s.alphabet().letters().collect();
        let mut frontier: Vec<Word> = vec![vec![]];
        for _ in 0..=10 {
            let mut next = Vec::new();
            for w in &frontier {
                forms.insert(s.normalize(w).unwrap());
                for &l in &letters {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            frontier = next;
        }
        assert_eq!(forms.len(), 5);
        let a = s.alphabet().letter(&crate::CellId::new("a").unwrap(), crate::Sign::Pos).unwrap();
        for k in 0..12 {
            let nf = s.normalize(&vec![a; k]).unwrap();
            assert_eq!(nf, s.normalize(&vec![a; k % 5]).unwrap());
        }
    }

    #[test]
    fn two_generator_braid_gives_up() {
        let p = parse("< a, b | a b a = b a b >").unwrap();
        let (s, _) = encode(&p, None, false).unwrap();
        let limits = CompletionLimits { max_rules: 50, ..CompletionLimits::default() };
        match complete(&s, limits).unwrap() {
            CompletionOutcome::GaveUp { reason, .. } => assert_eq!(reason, GaveUpReason::MaxRules(50)),
            CompletionOutcome::Converged(_) => panic!("converged"),
        }
    }

    #[test]
    fn step_limit_is_reported() {
        let p = parse("< a, b | a b a = b a b >").unwrap();
        let (s, _) = encode(&p, None, false).unwrap();
        let limits = CompletionLimits { max_steps: 10, ..CompletionLimits::default() };
        let out = complete(&s, limits).unwrap();
        assert!(matches!(out, CompletionOutcome::GaveUp { reason: GaveUpReason::MaxSteps(10), .. }));
    }

    #[test]
    fn completion_is_deterministic() {
        let (_, a) = completed("< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >", None, false);
        let (_, b) = completed("< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >", None, false);
        assert_eq!(a.system().to_text(), b.system().to_text());
    }

    #[test]
    fn tracked_witnesses_have_rule_boundaries() {
        let (p, out) = completed("< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >", None, true);
        let s = out.system();
        assert!(out.is_converged());
        let witnesses = s.witnesses().unwrap();
        for (rule, d) in s.rules().iter().zip(witnesses) {
            let sphere = boundary(&p, d).unwrap();
            assert_eq!(sphere.lhs, s.alphabet().to_zigzag(&rule.lhs));
            assert_eq!(sphere.rhs, s.alphabet().to_zigzag(&rule.rhs));
        }
        // The dihedral group of order ten.
        assert_eq!(enumerate_normal_forms(s, 100).unwrap().forms().len(), 10);
    }

    #[test]
    fn trivial_relator_collapses_cancellation_rules() {
        let (_, out) = completed("< a, b | a = 1 >", None, false);
        let CompletionOutcome::Converged(s) = out else { panic!("did not converge") };
        let w = |t| s.alphabet().parse_word(t).unwrap();
        assert_eq!(s.normalize(&w("a' b a a")).unwrap(), w("b"));
    }

    #[test]
    fn free_abelian_group_of_rank_two() {
        let (_, out) = completed("< a, b | a b = b a >", Some("a,a',b,b'"), false);
        let CompletionOutcome::Converged(s) = out else { panic!("did not converge") };
        let w = |t| s.alphabet().parse_word(t).unwrap();
        assert_eq!(s.group_rules().count(), 4);
        assert_eq!(s.normalize(&w("b' a b a' b a")).unwrap(), w("a b"));
    }

    #[test]
    fn free_abelian_group_diverges_under_standard_order() {
        // a b^n a' -> b^n for every n.
        let p = parse("< a, b | a b = b a >").unwrap();
        let (s, _) = encode(&p, None, false).unwrap();
        let limits = CompletionLimits { max_rules: 40, ..CompletionLimits::default() };
        let CompletionOutcome::GaveUp { system, .. } = complete(&s, limits).unwrap() else { panic!("converged") };
        let w = |t| system.alphabet().parse_word(t).unwrap();
        assert!(system.rules().contains(&Rule::new(w("a b b b a'"), w("b b b"))));
    }
}
