//! Random generators for ordinals, posets, word terms and powerset elements.
//!
//! Shared by the property sweeps in tests and by the `selftest` command.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::canon::{PkElem, QkElem};
use crate::ordinal::Ordinal;
use crate::words::WordTerm;
use crate::wqo::{Letter, PosetSpec};

/// Ordinal with exponent nesting at most `depth`, up to `terms` CNF terms and
/// coefficients up to `coeff`.
pub fn ordinal<R: Rng>(rng: &mut R, depth: usize, terms: usize, coeff: u64) -> Ordinal {
    if depth == 0 {
        return Ordinal::from(rng.gen_range(0..=coeff));
    }
    let n = rng.gen_range(0..=terms);
    let mut out = Ordinal::zero();
    for _ in 0..n {
        let e = ordinal(rng, depth - 1, terms, coeff);
        let c = rng.gen_range(1..=coeff.max(1));
        out = out.nat_add(&Ordinal::term(e, c));
    }
    out
}

/// Nonzero ordinal below `ω^{ω^k}`: exponents are below `ω^k`.
pub fn ordinal_below_ww<R: Rng>(rng: &mut R, k: u64, terms: usize, coeff: u64) -> Ordinal {
    loop {
        let n = rng.gen_range(1..=terms.max(1));
        let mut out = Ordinal::zero();
        for _ in 0..n {
            let mut e = Ordinal::zero();
            for j in 0..k {
                if rng.gen_bool(0.5) {
                    e = e.nat_add(&Ordinal::term(Ordinal::from(j), rng.gen_range(1..=coeff.max(1))));
                }
            }
            out = out.nat_add(&Ordinal::term(e, rng.gen_range(1..=coeff.max(1))));
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// Random quasi-order on `n` letters: each ordered pair related with
/// probability `density`, then closed.
pub fn poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> PosetSpec {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    PosetSpec::new("random", PosetSpec::default_names(n), &pairs).expect("valid relation")
}

/// Random partial order on `n` letters, acyclic by construction.
pub fn partial_order<R: Rng>(rng: &mut R, n: usize, density: f64) -> PosetSpec {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    PosetSpec::new("random", PosetSpec::default_names(n), &pairs).expect("valid relation")
}

pub fn finite_word<R: Rng>(rng: &mut R, letters: usize, min: usize, max: usize) -> Vec<Letter> {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| rng.gen_range(0..letters)).collect()
}

/// Normalized word term of level at most `level`, with at most `blocks`
/// top-level blocks per concatenation.
pub fn word<R: Rng>(rng: &mut R, letters: usize, level: usize, blocks: usize) -> WordTerm {
    let n = rng.gen_range(1..=blocks.max(1));
    let parts = (0..n)
        .map(|_| {
            if level > 0 && rng.gen_bool(0.5) {
                WordTerm::omega(word(rng, letters, level - 1, blocks))
            } else {
                WordTerm::Lit(rng.gen_range(0..letters))
            }
        })
        .collect();
    WordTerm::cat(parts)
}

/// Word term of level exactly `level`.
pub fn word_of_level<R: Rng>(rng: &mut R, letters: usize, level: usize, blocks: usize) -> WordTerm {
    loop {
        let w = word(rng, letters, level, blocks);
        if w.level() == level {
            return w;
        }
    }
}

/// Element of `P_k` over `letters` letters, with sets of at most `width`
/// members.
pub fn pk<R: Rng>(rng: &mut R, k: usize, letters: usize, width: usize) -> PkElem {
    if k == 0 {
        return PkElem::Letter(rng.gen_range(0..letters));
    }
    let n = rng.gen_range(1..=width.max(1));
    let set: BTreeSet<QkElem> = (0..n).map(|_| qk(rng, k, letters, width)).collect();
    PkElem::Set(set)
}

/// Element of `Q_k`: a tag `i < k` and an element of `P_i`.
pub fn qk<R: Rng>(rng: &mut R, k: usize, letters: usize, width: usize) -> QkElem {
    let tag = rng.gen_range(0..k);
    QkElem {
        tag,
        elem: pk(rng, tag, letters, width),
    }
}

/// Pair `(x, y)` with `x ≤ y` in `P_k`: `y` is `x` enlarged and with some
/// members replaced by larger ones.
pub fn pk_pair<R: Rng>(rng: &mut R, p: &PosetSpec, k: usize, width: usize) -> (PkElem, PkElem) {
    let x = pk(rng, k, p.len(), width);
    let y = grow_pk(rng, p, &x, k, width);
    (x, y)
}

fn grow_pk<R: Rng>(rng: &mut R, p: &PosetSpec, x: &PkElem, k: usize, width: usize) -> PkElem {
    match x {
        PkElem::Letter(a) => {
            let ups: Vec<Letter> = (0..p.len()).filter(|&b| p.leq(*a, b)).collect();
            PkElem::Letter(*ups.choose(rng).expect("reflexive"))
        }
        PkElem::Set(s) => {
            let mut out: BTreeSet<QkElem> = s
                .iter()
                .map(|q| QkElem {
                    tag: q.tag,
                    elem: grow_pk(rng, p, &q.elem, q.tag, width),
                })
                .collect();
            for _ in 0..rng.gen_range(0..=1) {
                out.insert(qk(rng, k, p.len(), width));
            }
            PkElem::Set(out)
        }
    }
}
