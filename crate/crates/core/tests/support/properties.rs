//! Property suites, runnable with any number of cases.

#![allow(dead_code)]

use std::sync::Arc;

use polygraph_core::derivation::{boundary, Derivation};
use polygraph_core::polygraph::CellLevel;
use polygraph_core::rewriting::{complete, encode, Alphabet, CompletionLimits, Letter, RewritingSystem};
use polygraph_core::tietze::{apply, inverse, TietzeStep};
use polygraph_core::words::{Bouquet, CellId, Sign, SignedLetter, ZigzagWord};
use polygraph_core::{parse, render, Polygraph, Sphere};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub type Suite = fn(u32) -> Result<(), String>;

pub const SUITES: [(&str, Suite); 5] = [
    ("free reduction idempotence and confluence", free_reduction),
    ("parser round-trip", parser_round_trip),
    ("derivation boundary laws", derivation_laws),
    ("Tietze inverse cancellation", tietze_inverse),
    ("normal-form uniqueness under random strategies", normal_form_uniqueness),
];

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn c(s: &str) -> CellId {
    CellId::new(s).unwrap()
}

fn letter(gens: &[CellId], k: u32) -> SignedLetter {
    let g = gens[(k / 2) as usize % gens.len()].clone();
    if k.is_multiple_of(2) {
        SignedLetter::pos(g)
    } else {
        SignedLetter::neg(g)
    }
}

fn bouquet_word(gens: &[CellId], letters: Vec<SignedLetter>) -> ZigzagWord {
    Bouquet::new(gens.iter().cloned()).word(letters).unwrap()
}

pub fn free_reduction(cases: u32) -> Result<(), String> {
    let gens = vec![c("a"), c("b"), c("c")];
    let strategy = (proptest::collection::vec(0u32..6, 0..24), proptest::collection::vec(any::<u32>(), 32));
    run(cases, strategy, |(codes, seeds)| {
        let letters: Vec<SignedLetter> = codes.iter().map(|&k| letter(&gens, k)).collect();
        let w = bouquet_word(&gens, letters.clone());
        let r = w.reduce();
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert!(r.is_reduced());
        // Cancel pairs in a seed-driven order.
        let mut cur = letters;
        let mut k = 0;
        loop {
            let spots: Vec<usize> = (0..cur.len().saturating_sub(1)).filter(|&i| cur[i].cancels(&cur[i + 1])).collect();
            if spots.is_empty() {
                break;
            }
            let i = spots[seeds[k % seeds.len()] as usize % spots.len()];
            cur.drain(i..i + 2);
            k += 1;
        }
        prop_assert_eq!(&cur[..], r.letters());
        let alphabet = Alphabet::new(gens.clone());
        let encoded = alphabet.from_zigzag(&w).unwrap();
        prop_assert_eq!(alphabet.to_zigzag(&Alphabet::free_reduce(&encoded)), r.clone());
        prop_assert!(w.concat(&w.invert()).unwrap().reduce().is_empty());
        Ok(())
    })
}

/// A random walk from `start`; returns the letters and the end cell.
fn walk(p: &Polygraph, start: &CellId, choices: &[u32]) -> (Vec<SignedLetter>, CellId) {
    let mut cur = start.clone();
    let mut out = Vec::new();
    for &ch in choices {
        let mut moves: Vec<(SignedLetter, CellId)> = Vec::new();
        for (g, s, t) in p.gens() {
            if *s == cur {
                moves.push((SignedLetter::pos(g.clone()), t.clone()));
            }
            if *t == cur {
                moves.push((SignedLetter::neg(g.clone()), s.clone()));
            }
        }
        if moves.is_empty() {
            break;
        }
        let (l, next) = moves.swap_remove(ch as usize % moves.len());
        out.push(l);
        cur = next;
    }
    (out, cur)
}

type RelSeed = (u32, Vec<u32>, Vec<u32>);

fn random_polygraph(ncells: usize, star: bool, gens: &[(u32, u32)], rels: &[RelSeed], seq_names: bool) -> Polygraph {
    let cells: Vec<CellId> = if ncells == 1 && star {
        vec![CellId::default_cell()]
    } else {
        ["x", "y", "z"][..ncells].iter().map(|s| c(s)).collect()
    };
    let mut p = Polygraph::new();
    for x in &cells {
        p.add_cell(x.clone()).unwrap();
    }
    for (k, (s, t)) in gens.iter().enumerate() {
        let name = c(["a", "b", "e", "f"][k]);
        p.add_gen(name, cells[*s as usize % ncells].clone(), cells[*t as usize % ncells].clone()).unwrap();
    }
    for (k, (start, lhs_choices, loop_choices)) in rels.iter().enumerate() {
        let start = cells[*start as usize % ncells].clone();
        let (lhs, end) = walk(&p, &start, lhs_choices);
        let (tail, _) = walk(&p, &end, loop_choices);
        let lhs = ZigzagWord::new(&p, lhs, start.clone()).unwrap();
        let tail = ZigzagWord::new(&p, tail, end.clone()).unwrap();
        let rhs = lhs.concat(&tail).unwrap().concat(&tail.invert()).unwrap();
        let name = if seq_names { format!("r{}", k + 1) } else { format!("rel_{k}") };
        p.add_rel(c(&name), Sphere::new(lhs, rhs)).unwrap();
    }
    p
}

pub fn parser_round_trip(cases: u32) -> Result<(), String> {
    let rel = (any::<u32>(), proptest::collection::vec(any::<u32>(), 0..6), proptest::collection::vec(any::<u32>(), 0..3));
    let strategy = (
        1usize..=3,
        any::<bool>(),
        proptest::collection::vec((any::<u32>(), any::<u32>()), 0..=4),
        proptest::collection::vec(rel, 0..4),
        any::<bool>(),
    );
    run(cases, strategy, |(ncells, star, gens, rels, seq)| {
        let p = random_polygraph(ncells, star, &gens, &rels, seq);
        prop_assert!(p.validate().is_valid());
        let text = render(&p);
        let q = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(render(&q), text);
        Ok(())
    })
}

/// A derivation built from a stream of choices, with its boundary worked
/// out by hand from the construction.
pub struct Built {
    pub d: Arc<Derivation>,
    pub src: Vec<SignedLetter>,
    pub tgt: Vec<SignedLetter>,
}

pub fn build_derivation(p: &Polygraph, ch: &mut impl Iterator<Item = u32>, depth: usize) -> Built {
    let gens: Vec<CellId> = p.gen_names().cloned().collect();
    let rels: Vec<(CellId, Sphere)> = p.rels().map(|(r, s)| (r.clone(), s.clone())).collect();
    let base = p.single_cell().expect("one 0-cell").clone();
    let word = |letters: &[SignedLetter]| ZigzagWord::new(p, letters.to_vec(), base.clone()).unwrap();
    let mut next = || ch.next().unwrap_or(0);
    let kind = if depth == 0 { next() % 4 } else { next() % 8 };
    match kind {
        0 if !rels.is_empty() => {
            let (r, s) = &rels[next() as usize % rels.len()];
            if next() % 2 == 0 {
                Built { d: Derivation::gen(r.clone(), Sign::Pos), src: s.lhs.letters().to_vec(), tgt: s.rhs.letters().to_vec() }
            } else {
                Built { d: Derivation::gen(r.clone(), Sign::Neg), src: s.rhs.letters().to_vec(), tgt: s.lhs.letters().to_vec() }
            }
        }
        0 | 1 => {
            let n = next() % 4;
            let letters: Vec<SignedLetter> = (0..n).map(|_| letter(&gens, next())).collect();
            Built { d: Derivation::id(word(&letters)), src: letters.clone(), tgt: letters }
        }
        2 => {
            let g = gens[next() as usize % gens.len()].clone();
            Built { d: Derivation::lambda(g.clone()), src: vec![SignedLetter::neg(g.clone()), SignedLetter::pos(g)], tgt: vec![] }
        }
        3 => {
            let g = gens[next() as usize % gens.len()].clone();
            Built { d: Derivation::rho(g.clone()), src: vec![SignedLetter::pos(g.clone()), SignedLetter::neg(g)], tgt: vec![] }
        }
        4 => {
            let a = build_derivation(p, ch, depth - 1);
            let b = build_derivation(p, ch, depth - 1);
            Built {
                d: Derivation::horiz(a.d, b.d),
                src: [a.src, b.src].concat(),
                tgt: [a.tgt, b.tgt].concat(),
            }
        }
        5 => {
            let a = build_derivation(p, ch, depth - 1);
            Built { d: Derivation::inv(a.d), src: a.tgt, tgt: a.src }
        }
        6 => {
            let a = build_derivation(p, ch, depth - 1);
            Built { d: Derivation::vert(a.d.clone(), Derivation::inv(a.d)), src: a.src.clone(), tgt: a.src }
        }
        _ => {
            let a = build_derivation(p, ch, depth - 1);
            let id = Derivation::id(word(&a.tgt));
            Built { d: Derivation::vert(a.d, id), src: a.src, tgt: a.tgt }
        }
    }
}

pub fn derivation_laws(cases: u32) -> Result<(), String> {
    let p = parse("< a, b, c | a b a = b a b, b a = c >").unwrap();
    let base = CellId::default_cell();
    let strategy = (proptest::collection::vec(any::<u32>(), 1..48), 0usize..5);
    run(cases, strategy, |(choices, depth)| {
        let b = build_derivation(&p, &mut choices.into_iter(), depth);
        let word = |l: &[SignedLetter]| ZigzagWord::new(&p, l.to_vec(), base.clone()).unwrap();
        let expected = Sphere::new(word(&b.src), word(&b.tgt));
        let s = boundary(&p, &b.d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&s, &expected);
        prop_assert_eq!(boundary(&p, &Derivation::inv(b.d.clone())).unwrap(), expected.clone().swap());
        prop_assert_eq!(boundary(&p, &Derivation::inv(Derivation::inv(b.d.clone()))).unwrap(), expected.clone());
        let unit = Derivation::id(word(&[]));
        prop_assert_eq!(boundary(&p, &Derivation::horiz(unit.clone(), b.d.clone())).unwrap(), expected.clone());
        prop_assert_eq!(boundary(&p, &Derivation::horiz(b.d.clone(), unit)).unwrap(), expected.clone());
        let loop_ = boundary(&p, &Derivation::vert(b.d.clone(), Derivation::inv(b.d.clone()))).unwrap();
        prop_assert_eq!(loop_, Sphere::new(expected.lhs.clone(), expected.lhs.clone()));
        // Vertical composition matches words literally.
        let twice = boundary(&p, &Derivation::vert(b.d.clone(), b.d.clone()));
        prop_assert_eq!(twice.is_ok(), expected.lhs == expected.rhs);
        Ok(())
    })
}

pub fn tietze_inverse(cases: u32) -> Result<(), String> {
    let golden: Vec<Polygraph> = ["< a | a^5 = 1 >", "< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >", "< i, j | i = j i j, j = i j i >", "< a, b | a b a = b a b >"]
        .iter()
        .map(|t| parse(t).unwrap())
        .collect();
    let strategy = (0usize..4, 0u32..5, proptest::collection::vec(any::<u32>(), 1..40));
    run(cases, strategy, |(pi, kind, choices)| {
        let p = &golden[pi];
        let gens: Vec<CellId> = p.gen_names().cloned().collect();
        let mut ch = choices.into_iter();
        let mut next = || ch.next().unwrap_or(0);
        let (start, step) = match kind {
            0 => {
                let step = TietzeStep::T0 {
                    at: CellId::default_cell(),
                    new_cell: p.fresh_name(CellLevel::Zero, "y"),
                    new_gen: p.fresh_name(CellLevel::One, "g"),
                };
                (p.clone(), step)
            }
            1 | 4 => {
                let n = next() % 5;
                let letters: Vec<SignedLetter> = (0..n).map(|_| letter(&gens, next())).collect();
                let t1 = TietzeStep::T1 {
                    w: bouquet_word(&gens, letters),
                    new_gen: p.fresh_name(CellLevel::One, "n"),
                    new_rel: p.fresh_name(CellLevel::Two, "d"),
                };
                if kind == 1 {
                    (p.clone(), t1)
                } else {
                    let TietzeStep::T1 { new_gen, new_rel, .. } = &t1 else { unreachable!() };
                    let step = TietzeStep::InvT1 { gen: new_gen.clone(), rel: new_rel.clone() };
                    (apply(p, &t1).unwrap(), step)
                }
            }
            _ => {
                let rest: Vec<u32> = std::iter::from_fn(|| Some(next())).take(40).collect();
                let b = build_derivation(p, &mut rest.into_iter(), 3);
                let rel = p.fresh_name(CellLevel::Two, "t");
                let declared = (kind == 2).then(|| boundary(p, &b.d).unwrap());
                let t2 = TietzeStep::T2 { d: b.d.clone(), new_rel: rel.clone(), declared };
                if kind != 3 {
                    (p.clone(), t2)
                } else {
                    (apply(p, &t2).unwrap(), TietzeStep::InvT2 { rel, d: b.d })
                }
            }
        };
        let q = apply(&start, &step).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let undo = inverse(&start, &step).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = apply(&q, &undo).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&back, &start);
        let (before, after) = (start.euler_data(), q.euler_data());
        let delta = (after.n0 as i64 - before.n0 as i64, after.n1 as i64 - before.n1 as i64, after.n2 as i64 - before.n2 as i64);
        let expected = match &step {
            TietzeStep::T0 { .. } => (1, 1, 0),
            TietzeStep::T1 { .. } => (0, 1, 1),
            TietzeStep::T2 { .. } => (0, 0, 1),
            TietzeStep::InvT0 { .. } => (-1, -1, 0),
            TietzeStep::InvT1 { .. } => (-1 + 1, -1, -1),
            TietzeStep::InvT2 { .. } => (0, 0, -1),
        };
        prop_assert_eq!(delta, expected);
        Ok(())
    })
}

fn completed(text: &str) -> RewritingSystem {
    let p = parse(text).unwrap();
    let (s, _) = encode(&p, None, false).unwrap();
    let out = complete(&s, CompletionLimits::default()).unwrap();
    assert!(out.is_converged(), "{text}");
    out.system().clone()
}

pub fn normal_form_uniqueness(cases: u32) -> Result<(), String> {
    let systems: Vec<RewritingSystem> = [
        "< a | a^5 = 1 >",
        "< r, s | r^5 = 1, s^2 = 1, r s r s = 1 >",
        "< i, j | i = j i j, j = i j i >",
        "< x, y | x^2 = 1, y^3 = 1, x y x y = 1 >",
    ]
    .iter()
    .map(|t| completed(t))
    .collect();
    let strategy = (0usize..4, proptest::collection::vec(any::<u32>(), 0..14), proptest::collection::vec(any::<u32>(), 1..32));
    run(cases, strategy, |(si, codes, seeds)| {
        let s = &systems[si];
        let n = s.alphabet().letters().count() as u32;
        let w: Vec<Letter> = codes.iter().map(|&k| Letter(k % n)).collect();
        let expected = s.normalize(&w).unwrap();
        let mut cur = w;
        let mut k = 0;
        loop {
            let redexes = s.redexes(&cur);
            if redexes.is_empty() {
                break;
            }
            let r = redexes[seeds[k % seeds.len()] as usize % redexes.len()];
            cur = s.rewrite_at(&cur, r);
            k += 1;
            prop_assert!(k < 100_000, "random strategy did not terminate");
        }
        prop_assert_eq!(cur, expected);
        Ok(())
    })
}
