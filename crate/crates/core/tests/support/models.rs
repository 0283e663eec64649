//! Concrete permutation groups, built without any rewriting, used to check
//! answers computed from presentations.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use polygraph_core::rewriting::{Alphabet, Letter};
use polygraph_core::{CellId, Polygraph, Sign, SignedLetter};

pub type Perm = Vec<usize>;

pub struct Model {
    pub gens: Vec<(CellId, Perm)>,
}

fn compose(f: &Perm, g: &Perm) -> Perm {
    // x -> f(g(x))
    g.iter().map(|&x| f[x]).collect()
}

fn invert(f: &Perm) -> Perm {
    let mut out = vec![0; f.len()];
    for (x, &y) in f.iter().enumerate() {
        out[y] = x;
    }
    out
}

impl Model {
    pub fn degree(&self) -> usize {
        self.gens[0].1.len()
    }

    fn perm(&self, l: &SignedLetter) -> Perm {
        let (_, p) = self.gens.iter().find(|(g, _)| *g == l.gen).expect("generator in model");
        match l.sign {
            Sign::Pos => p.clone(),
            Sign::Neg => invert(p),
        }
    }

    pub fn eval(&self, letters: &[SignedLetter]) -> Perm {
        let mut acc: Perm = (0..self.degree()).collect();
        for l in letters {
            acc = compose(&acc, &self.perm(l));
        }
        acc
    }

    pub fn eval_letters(&self, alphabet: &Alphabet, w: &[Letter]) -> Perm {
        let signed: Vec<SignedLetter> = w.iter().map(|&l| alphabet.signed(l)).collect();
        self.eval(&signed)
    }

    pub fn satisfies(&self, p: &Polygraph) -> bool {
        p.rels().all(|(_, s)| self.eval(s.lhs.letters()) == self.eval(s.rhs.letters()))
    }

    /// Size of the generated group.
    pub fn order(&self) -> usize {
        let id: Perm = (0..self.degree()).collect();
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for (_, g) in &self.gens {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len()
    }
}

fn c(s: &str) -> CellId {
    CellId::new(s).unwrap()
}

pub fn cyclic(n: usize) -> Model {
    Model { gens: vec![(c("a"), (0..n).map(|x| (x + 1) % n).collect())] }
}

pub fn dihedral5() -> Model {
    let r = (0..5).map(|x| (x + 1) % 5).collect();
    let s = (0..5).map(|x| (5 - x) % 5).collect();
    Model { gens: vec![(c("r"), r), (c("s"), s)] }
}

pub fn symmetric3() -> Model {
    Model { gens: vec![(c("x"), vec![1, 0, 2]), (c("y"), vec![1, 2, 0])] }
}

/// Quaternion units `±1, ±i, ±j, ±k`, indexed `2 * basis + negative`,
/// acting on themselves by left multiplication.
pub fn quaternion() -> Model {
    // basis product: (sign, basis) for 1, i, j, k
    const T: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mul = |a: usize, b: usize| {
        let (neg, basis) = T[a / 2][b / 2];
        2 * basis + ((a % 2 + b % 2 + neg as usize) % 2)
    };
    let left = |g: usize| (0..8).map(|x| mul(g, x)).collect();
    Model { gens: vec![(c("i"), left(2)), (c("j"), left(4))] }
}
