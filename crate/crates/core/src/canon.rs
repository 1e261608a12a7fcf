//! Iterated finite powersets `P_k`, `Q_k` and the canonical maps `φ` into
//! words, with the inverse decompositions for levels up to 2.
//!
//! `P_0(X) = X`, `Q_k(X) = ∐_{i<k} P_i(X)` and `P_k(X)` is the set of
//! nonempty finite subsets of `Q_k(X)` under `≤_m`. A set is sent to the
//! ω-power of the concatenation of its members' images.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::words::{canonical_omega, Address, EmbeddingWitness, WordTerm};
use crate::wqo::{Letter, PosetSpec};

/// Element of `P_k`: a letter at level 0, a nonempty set above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PkElem {
    Letter(Letter),
    Set(BTreeSet<QkElem>),
}

/// Element of `Q_k`: the summand index `tag < k` and a member of `P_tag`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QkElem {
    pub tag: usize,
    pub elem: PkElem,
}

/// Element of `P_k ∪ {∅}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pk0Elem {
    Empty,
    Elem(PkElem),
}

impl QkElem {
    pub fn new(tag: usize, elem: PkElem) -> Self {
        QkElem { tag, elem }
    }

    pub fn letter(x: Letter) -> Self {
        QkElem::new(0, PkElem::Letter(x))
    }
}

impl PkElem {
    pub fn set(members: impl IntoIterator<Item = QkElem>) -> Self {
        PkElem::Set(members.into_iter().collect())
    }

    /// Set of tagged letters.
    pub fn letters(xs: impl IntoIterator<Item = Letter>) -> Self {
        PkElem::set(xs.into_iter().map(QkElem::letter))
    }

    /// Least `k` with `self ∈ P_k`.
    pub fn min_level(&self) -> usize {
        match self {
            PkElem::Letter(_) => 0,
            PkElem::Set(s) => 1 + s.iter().map(|q| q.tag).max().unwrap_or(0),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a PosetSpec) -> impl fmt::Display + 'a {
        ShownPk { e: self, alphabet }
    }
}

struct ShownPk<'a> {
    e: &'a PkElem,
    alphabet: &'a PosetSpec,
}

impl fmt::Display for ShownPk<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            PkElem::Letter(x) if *x < self.alphabet.len() => write!(f, "{}", self.alphabet.name(*x)),
            PkElem::Letter(x) => write!(f, "#{x}"),
            PkElem::Set(s) => {
                write!(f, "{{")?;
                for (i, q) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", q.elem.display(self.alphabet))?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Checks that `e` lies in `P_k` over `alphabet`.
pub fn validate_pk(alphabet: &PosetSpec, k: usize, e: &PkElem) -> Result<()> {
    match (k, e) {
        (0, PkElem::Letter(x)) if *x < alphabet.len() => Ok(()),
        (0, _) => Err(Error::invalid("P_0 elements are letters of the alphabet")),
        (_, PkElem::Letter(_)) => Err(Error::invalid(format!("a letter is not an element of P_{k}"))),
        (_, PkElem::Set(s)) if s.is_empty() => Err(Error::invalid("P_k sets must be nonempty")),
        (_, PkElem::Set(s)) => s.iter().try_for_each(|q| validate_qk(alphabet, k, q)),
    }
}

pub fn validate_qk(alphabet: &PosetSpec, k: usize, q: &QkElem) -> Result<()> {
    if q.tag >= k {
        return Err(Error::invalid(format!("tag {} is not below {k}", q.tag)));
    }
    validate_pk(alphabet, q.tag, &q.elem)
}

/// `≤_m` on iterated powersets; different tags are incomparable.
pub fn leq_pk(p: &PosetSpec, a: &PkElem, b: &PkElem) -> bool {
    match (a, b) {
        (PkElem::Letter(x), PkElem::Letter(y)) => p.leq(*x, *y),
        (PkElem::Set(s), PkElem::Set(t)) => s.iter().all(|x| t.iter().any(|y| leq_qk(p, x, y))),
        _ => false,
    }
}

pub fn leq_qk(p: &PosetSpec, a: &QkElem, b: &QkElem) -> bool {
    a.tag == b.tag && leq_pk(p, &a.elem, &b.elem)
}

fn level_cap(k: usize) -> Result<()> {
    if k > 2 {
        return Err(Error::Unsupported(format!(
            "word images are produced only for k <= 2, got k = {k}"
        )));
    }
    Ok(())
}

fn phi_raw(e: &PkElem) -> WordTerm {
    match e {
        PkElem::Letter(x) => WordTerm::Lit(*x),
        PkElem::Set(s) => WordTerm::omega(WordTerm::cat(s.iter().map(|q| phi_raw(&q.elem)).collect())),
    }
}

/// `φ` on `P_k`; the members of a set are listed in their structural order.
pub fn phi(k: usize, e: &PkElem) -> Result<WordTerm> {
    level_cap(k)?;
    Ok(phi_raw(e))
}

pub fn phi_q(k: usize, q: &QkElem) -> Result<WordTerm> {
    level_cap(k)?;
    Ok(phi_raw(&q.elem))
}

/// `φ` on `Q_k^*`: concatenation of the images.
pub fn phi_list(k: usize, w: &[QkElem]) -> Result<WordTerm> {
    level_cap(k)?;
    Ok(WordTerm::cat(w.iter().map(|q| phi_raw(&q.elem)).collect()))
}

/// `φ` on `P_k ∪ {∅}` with `φ(∅) = ε`.
pub fn phi0(k: usize, e: &Pk0Elem) -> Result<WordTerm> {
    match e {
        Pk0Elem::Empty => {
            level_cap(k)?;
            Ok(WordTerm::Eps)
        }
        Pk0Elem::Elem(x) => phi(k, x),
    }
}

/// `φ` on `Q_k^* × (P_k ∪ {∅})`.
pub fn phi_pair(k: usize, w: &[QkElem], s: &Pk0Elem) -> Result<WordTerm> {
    Ok(WordTerm::cat(vec![phi_list(k, w)?, phi0(k, s)?]))
}

/// Witness that `φ(a)` embeds in `φ(b)` when `a ≤ b`.
///
/// Member `j` of the `r`-th copy of `a`'s body goes into copy `r·|a| + j` of
/// `b`'s body, inside a member of `b` above it.
pub fn phi_witness(p: &PosetSpec, k: usize, a: &PkElem, b: &PkElem) -> Result<EmbeddingWitness> {
    level_cap(k)?;
    validate_pk(p, k, a)?;
    validate_pk(p, k, b)?;
    if !leq_pk(p, a, b) {
        return Err(Error::invalid("phi_witness needs a <= b"));
    }
    Ok(phi_wit(p, a, b, Vec::new()))
}

fn phi_wit(p: &PosetSpec, a: &PkElem, b: &PkElem, base: Address) -> EmbeddingWitness {
    match (a, b) {
        (PkElem::Letter(_), PkElem::Letter(_)) => EmbeddingWitness::Letter(base),
        (PkElem::Set(s), PkElem::Set(t)) => {
            let t: Vec<&QkElem> = t.iter().collect();
            let mut parts = Vec::new();
            for (j, x) in s.iter().enumerate() {
                let m = t.iter().position(|y| leq_qk(p, x, y)).expect("a <= b");
                let mut at = base.clone();
                at.push(j as u64);
                if t.len() > 1 {
                    at.push(m as u64);
                }
                parts.push(phi_wit(p, &x.elem, &t[m].elem, at));
            }
            let body = if parts.len() == 1 {
                parts.pop().expect("one")
            } else {
                EmbeddingWitness::Cat(parts)
            };
            EmbeddingWitness::Periodic {
                prologue: Vec::new(),
                period: vec![body],
                node: base,
                shift: s.len() as u64,
            }
        }
        _ => unreachable!("comparable elements have the same shape"),
    }
}

fn letters_set(xs: &BTreeSet<Letter>) -> PkElem {
    PkElem::letters(xs.iter().copied())
}

/// Preimage under `φ` of a word of length below `ω^k`, up to equivalence.
pub fn decompose(s: &WordTerm, k: usize) -> Result<Vec<QkElem>> {
    level_cap(k)?;
    let s = s.normalize();
    let bound = crate::ordinal::Ordinal::omega_pow(crate::ordinal::Ordinal::from(k as u64));
    if s.length() >= bound {
        return Err(Error::invalid(format!("decompose needs length below w^{k}")));
    }
    let mut out = Vec::new();
    for b in s.blocks() {
        match b {
            WordTerm::Lit(x) => out.push(QkElem::letter(*x)),
            WordTerm::OmegaPow(body) => {
                let (_, tail) = canonical_omega(b)?;
                debug_assert_eq!(body.image(), tail);
                out.push(QkElem::new(1, letters_set(&tail)));
            }
            _ => unreachable!("normalized block"),
        }
    }
    Ok(out)
}

/// A length-ω segment `letters · v^ω` viewed as one letter of the auxiliary
/// alphabet: the letters and the set of `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct YLetter {
    word: Vec<Letter>,
    tail: BTreeSet<Letter>,
}

impl YLetter {
    fn flatten(&self) -> Vec<QkElem> {
        let mut out: Vec<QkElem> = self.word.iter().map(|&x| QkElem::letter(x)).collect();
        out.push(QkElem::new(1, letters_set(&self.tail)));
        out
    }
}

/// Preimage under `(w, S) ↦ φ(w)·φ(S)` of a word of length exactly `ω^k`.
pub fn decompose_eq(s: &WordTerm, k: usize) -> Result<(Vec<QkElem>, PkElem)> {
    level_cap(k)?;
    let s = s.normalize();
    let target = crate::ordinal::Ordinal::omega_pow(crate::ordinal::Ordinal::from(k as u64));
    if s.length() != target {
        return Err(Error::invalid(format!("decompose_eq needs length exactly w^{k}")));
    }
    match k {
        0 => match s {
            WordTerm::Lit(x) => Ok((Vec::new(), PkElem::Letter(x))),
            _ => unreachable!("length one"),
        },
        1 => {
            let (prefix, tail) = canonical_omega(&s)?;
            let w = prefix
                .letters()
                .expect("finite prefix")
                .into_iter()
                .map(QkElem::letter)
                .collect();
            Ok((w, letters_set(&tail)))
        }
        _ => {
            let (last, head) = s.blocks().split_last().expect("nonempty");
            let WordTerm::OmegaPow(c) = last else {
                unreachable!("length w^2 ends in an w-power")
            };
            let mut w = decompose(&WordTerm::cat(head.to_vec()), 2)?;
            // Cut the period into segments ending in an w-power.
            let mut segs = Vec::new();
            let mut pending = Vec::new();
            for b in c.blocks() {
                match b {
                    WordTerm::Lit(x) => pending.push(*x),
                    WordTerm::OmegaPow(v) => segs.push(YLetter {
                        word: std::mem::take(&mut pending),
                        tail: v.image(),
                    }),
                    _ => unreachable!("normalized block"),
                }
            }
            // As a sequence over Y: y_1 … y_n followed by (y_2 … y_n z_1)^ω
            // with z_1 = trail · y_1, or (y_1 … y_n)^ω without a trail.
            let (prefix, tail): (Vec<YLetter>, Vec<YLetter>) = if pending.is_empty() {
                (Vec::new(), segs)
            } else {
                let mut z1 = segs[0].clone();
                let mut word = pending;
                word.extend(z1.word);
                z1.word = word;
                let mut tail: Vec<YLetter> = segs[1..].to_vec();
                tail.push(z1);
                (vec![segs[0].clone()], tail)
            };
            for y in &prefix {
                w.extend(y.flatten());
            }
            let set: BTreeSet<QkElem> = tail.iter().flat_map(YLetter::flatten).collect();
            Ok((w, PkElem::Set(set)))
        }
    }
}
