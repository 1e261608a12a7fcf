//! Lower-bound constructions: peeling maximal elements and the maps `ψ_k`,
//! `ψ'_k` from iterated powersets of the remainder into words.
//!
//! With maximal elements `v_1, …, v_k` removed from `X` leaving `Y`:
//! `ψ_0(y) = y`, `ψ_{ℓ+1}(S) = (v_ℓ ψ_ℓ(T_1) … v_ℓ ψ_ℓ(T_r))^ω` for
//! `S = {T_1, …, T_r}`, where `v_0` is the empty word, and
//! `ψ'_k(S_1 … S_r) = v_k ψ_k(S_1) … v_k ψ_k(S_r)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::bounds::u_fun;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::words::{Address, EmbeddingWitness, WordTerm};
use crate::wqo::{finite_elements, h_shape, leq_elem, show_elem, HElem, HShape, Letter, PosetSpec, WpoElem, WpoTerm};

/// Element of `(P'_fin)^k(Y)` over the letters of a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowElem {
    Atom(Letter),
    Set(BTreeSet<PowElem>),
}

impl PowElem {
    pub fn set(xs: impl IntoIterator<Item = PowElem>) -> Self {
        PowElem::Set(xs.into_iter().collect())
    }

    pub fn atoms(xs: impl IntoIterator<Item = Letter>) -> Self {
        PowElem::set(xs.into_iter().map(PowElem::Atom))
    }

    /// Nesting depth `k`, if uniform.
    pub fn depth(&self) -> Option<usize> {
        match self {
            PowElem::Atom(_) => Some(0),
            PowElem::Set(s) => {
                let mut ds = s.iter().map(PowElem::depth);
                let first = ds.next()??;
                ds.all(|d| d == Some(first)).then_some(first + 1)
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a PosetSpec) -> impl fmt::Display + 'a {
        ShownPow { e: self, alphabet }
    }
}

struct ShownPow<'a> {
    e: &'a PowElem,
    alphabet: &'a PosetSpec,
}

impl fmt::Display for ShownPow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            PowElem::Atom(x) if *x < self.alphabet.len() => write!(f, "{}", self.alphabet.name(*x)),
            PowElem::Atom(x) => write!(f, "#{x}"),
            PowElem::Set(s) => {
                write!(f, "{{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", x.display(self.alphabet))?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// `≤_m` iterated; atoms compare in `p`.
pub fn leq_pow(p: &PosetSpec, a: &PowElem, b: &PowElem) -> bool {
    match (a, b) {
        (PowElem::Atom(x), PowElem::Atom(y)) => p.leq(*x, *y),
        (PowElem::Set(s), PowElem::Set(t)) => s.iter().all(|x| t.iter().any(|y| leq_pow(p, x, y))),
        _ => false,
    }
}

/// Higman's order on words over `(P'_fin)^k(Y)`.
pub fn leq_pow_word(p: &PosetSpec, a: &[PowElem], b: &[PowElem]) -> bool {
    let mut rest = b.iter();
    a.iter().all(|x| rest.by_ref().any(|y| leq_pow(p, x, y)))
}

/// An ambient order with designated elements `v_1, …, v_k`, each maximal
/// once the later ones are removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalDecomposition {
    pub ambient: WpoTerm,
    /// `v[i]` is `v_{i+1}`.
    pub v: Vec<WpoElem>,
}

/// A finite ambient order materialized as an alphabet, one letter per
/// equivalence class.
#[derive(Clone, Debug)]
pub struct Alphabet {
    pub poset: PosetSpec,
    pub elems: Vec<WpoElem>,
    /// Letter of each separator `v_i`.
    pub separators: Vec<Letter>,
    /// Letters of the remainder `Y`.
    pub rest: Vec<Letter>,
}

impl MaximalDecomposition {
    pub fn new(ambient: WpoTerm, v: Vec<WpoElem>) -> Self {
        MaximalDecomposition { ambient, v }
    }

    pub fn k(&self) -> usize {
        self.v.len()
    }

    /// Materializes a finite ambient; errors for infinite ones.
    pub fn alphabet(&self) -> Result<Alphabet> {
        let all = finite_elements(&self.ambient)
            .ok_or_else(|| Error::Unsupported(format!("{} is not a small finite order", self.ambient)))?;
        let t = &self.ambient;
        let mut elems: Vec<WpoElem> = Vec::new();
        for x in all {
            let mut dup = false;
            for y in &elems {
                if leq_elem(t, &x, y)? && leq_elem(t, y, &x)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                elems.push(x);
            }
        }
        let mut pairs = Vec::new();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                if i != j && leq_elem(t, x, y)? {
                    pairs.push((i, j));
                }
            }
        }
        let names = elems.iter().map(|x| show_elem(t, x)).collect::<Vec<_>>();
        let names = if names.iter().collect::<BTreeSet<_>>().len() == names.len() {
            names
        } else {
            PosetSpec::default_names(elems.len())
        };
        let poset = PosetSpec::new(format!("{t}"), names, &pairs)?;
        let letter_of = |v: &WpoElem| -> Result<Letter> {
            for (i, y) in elems.iter().enumerate() {
                if leq_elem(t, v, y)? && leq_elem(t, y, v)? {
                    return Ok(i);
                }
            }
            Err(Error::invalid(format!("{v} is not an element of {t}")))
        };
        let separators = self.v.iter().map(letter_of).collect::<Result<Vec<_>>>()?;
        let rest = (0..elems.len()).filter(|i| !separators.contains(i)).collect();
        Ok(Alphabet {
            poset,
            elems,
            separators,
            rest,
        })
    }

    /// Verifies maximality of each `v_i` by a sweep over a finite ambient.
    pub fn check(&self) -> Result<bool> {
        let a = self.alphabet()?;
        for (i, &v) in a.separators.iter().enumerate() {
            let later = &a.separators[i + 1..];
            if later.contains(&v) || !a.poset.is_maximal_excluding(v, later) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A maximal element of `t` outside `excluded` (in the order restricted to
/// the complement of `excluded`), when one is detectable.
fn peel(t: &WpoTerm, excluded: &[WpoElem]) -> Result<Option<WpoElem>> {
    Ok(match t {
        WpoTerm::Base(p) => {
            let ex: Vec<Letter> = excluded
                .iter()
                .filter_map(|x| match x {
                    WpoElem::Atom(a) => Some(*a),
                    _ => None,
                })
                .collect();
            let classes = p.classes();
            let ex_classes: Vec<usize> = ex.iter().map(|&a| classes[a]).collect();
            let ex_all: Vec<Letter> = (0..p.len()).filter(|a| ex_classes.contains(&classes[*a])).collect();
            (0..p.len())
                .rev()
                .filter(|&x| classes[x] == x && !ex_all.contains(&x))
                .find(|&x| p.is_maximal_excluding(x, &ex_all))
                .map(WpoElem::Atom)
        }
        WpoTerm::Singleton => (!excluded.contains(&WpoElem::Unit)).then_some(WpoElem::Unit),
        WpoTerm::DisjointUnion(ts) => {
            for (i, c) in ts.iter().enumerate().rev() {
                let inner: Vec<WpoElem> = excluded
                    .iter()
                    .filter_map(|x| match x {
                        WpoElem::Inj(j, y) if *j == i => Some((**y).clone()),
                        _ => None,
                    })
                    .collect();
                if let Some(x) = peel(c, &inner)? {
                    return Ok(Some(WpoElem::inj(i, x)));
                }
            }
            None
        }
        WpoTerm::H(beta) => match h_shape(beta)? {
            HShape::One => {
                let x = WpoElem::H(HElem::One);
                (!excluded.contains(&x)).then_some(x)
            }
            HShape::Union(comps) => comps
                .iter()
                .enumerate()
                .rev()
                .take_while(|(_, c)| **c == Ordinal::one())
                .map(|(i, _)| {
                    WpoElem::H(HElem::Part {
                        index: i,
                        elem: Box::new(HElem::One),
                    })
                })
                .find(|x| !excluded.contains(x)),
            _ => None,
        },
        _ => None,
    })
}

/// Peels `k` maximal elements, `v_k` first.
pub fn extract_maximals(t: &WpoTerm, k: usize) -> Result<MaximalDecomposition> {
    t.validate()?;
    let mut peeled: Vec<WpoElem> = Vec::new();
    for _ in 0..k {
        match peel(t, &peeled)? {
            Some(x) => peeled.push(x),
            None => {
                return Err(Error::invalid(format!(
                    "only {} maximal elements of {t} could be peeled, {k} requested",
                    peeled.len()
                )))
            }
        }
    }
    peeled.reverse();
    Ok(MaximalDecomposition::new(t.clone(), peeled))
}

fn level_cap(k: usize, max: usize) -> Result<()> {
    if k > max {
        return Err(Error::Unsupported(format!("level {k} exceeds the supported maximum {max}")));
    }
    Ok(())
}

fn check_depth(k: usize, s: &PowElem, a: &Alphabet) -> Result<()> {
    if s.depth() != Some(k) {
        return Err(Error::invalid(format!("expected an element of depth {k}")));
    }
    fn atoms_ok(s: &PowElem, a: &Alphabet) -> bool {
        match s {
            PowElem::Atom(x) => a.rest.contains(x),
            PowElem::Set(t) => !t.is_empty() && t.iter().all(|x| atoms_ok(x, a)),
        }
    }
    if !atoms_ok(s, a) {
        return Err(Error::invalid("atoms must be nonempty-set nested elements of the remainder Y"));
    }
    Ok(())
}

fn psi_raw(k: usize, a: &Alphabet, s: &PowElem) -> WordTerm {
    match s {
        PowElem::Atom(x) => WordTerm::Lit(*x),
        PowElem::Set(ts) => {
            let sep = (k >= 2).then(|| WordTerm::Lit(a.separators[k - 2]));
            let mut parts = Vec::new();
            for t in ts {
                if let Some(v) = &sep {
                    parts.push(v.clone());
                }
                parts.push(psi_raw(k - 1, a, t));
            }
            WordTerm::omega(WordTerm::cat(parts))
        }
    }
}

/// `ψ_k(S)` for `k ≤ 2`, as a word over `a.poset`.
pub fn psi(k: usize, d: &MaximalDecomposition, a: &Alphabet, s: &PowElem) -> Result<WordTerm> {
    level_cap(k, 2)?;
    if k >= 2 && d.k() < k - 1 {
        return Err(Error::invalid(format!("psi_{k} needs {} separators", k - 1)));
    }
    check_depth(k, s, a)?;
    Ok(psi_raw(k, a, s))
}

/// `ψ'_k(S_1 … S_r)` for `k ≤ 1`.
pub fn psi_star(k: usize, d: &MaximalDecomposition, a: &Alphabet, w: &[PowElem]) -> Result<WordTerm> {
    level_cap(k, 1)?;
    if d.k() < k {
        return Err(Error::invalid(format!("psi'_{k} needs {k} separators")));
    }
    let mut parts = Vec::new();
    for s in w {
        check_depth(k, s, a)?;
        if k >= 1 {
            parts.push(WordTerm::Lit(a.separators[k - 1]));
        }
        parts.push(psi_raw(k, a, s));
    }
    Ok(WordTerm::cat(parts))
}

/// Witness that `ψ_k(s)` embeds in `ψ_k(t)` for `s ≤ t`, `k ≤ 2`.
///
/// Member `j` of each copy of `s`'s body goes to its own copy of `t`'s body,
/// next to the separator in front of a member of `t` above it.
pub fn psi_witness(k: usize, a: &Alphabet, s: &PowElem, t: &PowElem) -> Result<EmbeddingWitness> {
    level_cap(k, 2)?;
    check_depth(k, s, a)?;
    check_depth(k, t, a)?;
    if !leq_pow(&a.poset, s, t) {
        return Err(Error::invalid("psi_witness needs s <= t"));
    }
    Ok(psi_wit(k, a, s, t, Vec::new()))
}

fn psi_wit(k: usize, a: &Alphabet, s: &PowElem, t: &PowElem, base: Address) -> EmbeddingWitness {
    match (s, t) {
        (PowElem::Atom(_), PowElem::Atom(_)) => EmbeddingWitness::Letter(base),
        (PowElem::Set(ss), PowElem::Set(ts)) => {
            let ts: Vec<&PowElem> = ts.iter().collect();
            let sep = k >= 2;
            let width = if sep { 2 } else { 1 };
            let cat_target = ts.len() * width > 1;
            let mut parts = Vec::new();
            for (j, x) in ss.iter().enumerate() {
                let m = ts.iter().position(|y| leq_pow(&a.poset, x, y)).expect("s <= t");
                let mut at = base.clone();
                at.push(j as u64);
                if sep {
                    let mut v = at.clone();
                    v.push((2 * m) as u64);
                    parts.push(EmbeddingWitness::Letter(v));
                }
                if cat_target {
                    at.push((width * m + width - 1) as u64);
                }
                parts.push(psi_wit(k - 1, a, x, ts[m], at));
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
                shift: ss.len() as u64,
            }
        }
        _ => unreachable!("comparable elements have the same shape"),
    }
}

/// The order witnessing the ω² lower bound at `β`, with its claimed value.
#[derive(Clone, Debug)]
pub struct LowerInstance {
    pub x: WpoTerm,
    pub claimed: Ordinal,
    /// For successor `β = β' + 1`: `H_{β'} ⊎ 1` with the point peeled.
    pub decomposition: Option<MaximalDecomposition>,
}

pub fn lowerbd_instance(beta: &Ordinal) -> Result<LowerInstance> {
    let claimed = u_fun(beta)?;
    if beta.is_zero() {
        return Ok(LowerInstance {
            x: WpoTerm::DisjointUnion(Vec::new()),
            claimed,
            decomposition: None,
        });
    }
    let x = WpoTerm::H(beta.clone());
    let decomposition = match beta.successor_split() {
        (true, Some(pred)) if pred.is_zero() => Some(extract_maximals(&x, 1)?),
        (true, Some(pred)) => {
            let ambient = WpoTerm::DisjointUnion(vec![WpoTerm::H(pred), WpoTerm::Singleton]);
            Some(extract_maximals(&ambient, 1)?)
        }
        _ => None,
    };
    Ok(LowerInstance {
        x,
        claimed,
        decomposition,
    })
}
