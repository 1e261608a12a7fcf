//! Well partial orders described by terms, their elements, and their types.

mod hfamily;
mod poset;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

pub use hfamily::{h_otype, h_shape, leq_h, some_h_elem, validate_h, HElem, HEmbedding, HShape, MAX_H_TERMS};
pub use poset::{Letter, PosetSpec};

use crate::bounds::h_fun;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WpoTerm {
    Base(Arc<PosetSpec>),
    Singleton,
    DisjointUnion(Vec<WpoTerm>),
    Product(Vec<WpoTerm>),
    /// Lexicographic product; the last factor is the most significant.
    LexProduct(Vec<WpoTerm>),
    /// Ordered sum: every element of an earlier summand lies below every
    /// element of a later one.
    OrderedSum(Vec<WpoTerm>),
    Star(Box<WpoTerm>),
    PfinNE(Box<WpoTerm>),
    Pfin(Box<WpoTerm>),
    H(Ordinal),
}

impl WpoTerm {
    pub fn base(spec: PosetSpec) -> Self {
        WpoTerm::Base(Arc::new(spec))
    }

    /// Checks the structural constraints of the term language.
    pub fn validate(&self) -> Result<()> {
        match self {
            WpoTerm::Base(_) | WpoTerm::Singleton => Ok(()),
            WpoTerm::H(b) => {
                if b.is_zero() {
                    Err(Error::invalid("H(0) is not part of the family"))
                } else {
                    Ok(())
                }
            }
            WpoTerm::LexProduct(ts) | WpoTerm::OrderedSum(ts) if ts.is_empty() => {
                Err(Error::invalid(format!("{self} needs at least one operand")))
            }
            WpoTerm::DisjointUnion(ts)
            | WpoTerm::Product(ts)
            | WpoTerm::LexProduct(ts)
            | WpoTerm::OrderedSum(ts) => ts.iter().try_for_each(WpoTerm::validate),
            WpoTerm::Star(t) | WpoTerm::PfinNE(t) | WpoTerm::Pfin(t) => t.validate(),
        }
    }
}

impl fmt::Display for WpoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, ts: &[WpoTerm]| {
            write!(f, "{name}(")?;
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")
        };
        match self {
            WpoTerm::Base(p) => write!(f, "Base({p})"),
            WpoTerm::Singleton => write!(f, "Singleton"),
            WpoTerm::DisjointUnion(ts) => list(f, "DisjointUnion", ts),
            WpoTerm::Product(ts) => list(f, "Product", ts),
            WpoTerm::LexProduct(ts) => list(f, "LexProduct", ts),
            WpoTerm::OrderedSum(ts) => list(f, "OrderedSum", ts),
            WpoTerm::Star(t) => write!(f, "Star({t})"),
            WpoTerm::PfinNE(t) => write!(f, "PfinNE({t})"),
            WpoTerm::Pfin(t) => write!(f, "Pfin({t})"),
            WpoTerm::H(b) => write!(f, "H({b})"),
        }
    }
}

/// An element of the order described by a [`WpoTerm`].
///
/// `Set` members are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WpoElem {
    Atom(Letter),
    Unit,
    Inj(usize, Box<WpoElem>),
    Tuple(Vec<WpoElem>),
    Word(Vec<WpoElem>),
    Set(Vec<WpoElem>),
    H(HElem),
}

impl WpoElem {
    pub fn set(mut xs: Vec<WpoElem>) -> Self {
        xs.sort();
        xs.dedup();
        WpoElem::Set(xs)
    }

    pub fn inj(i: usize, x: WpoElem) -> Self {
        WpoElem::Inj(i, Box::new(x))
    }
}

impl fmt::Display for WpoElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |f: &mut fmt::Formatter<'_>, open: &str, close: &str, xs: &[WpoElem]| {
            write!(f, "{open}")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "{close}")
        };
        match self {
            WpoElem::Atom(a) => write!(f, "@{a}"),
            WpoElem::Unit => write!(f, "()"),
            WpoElem::Inj(i, x) => write!(f, "in{i}({x})"),
            WpoElem::Tuple(xs) => seq(f, "(", ")", xs),
            WpoElem::Word(xs) => seq(f, "\"", "\"", xs),
            WpoElem::Set(xs) => seq(f, "{", "}", xs),
            WpoElem::H(h) => write!(f, "{h}"),
        }
    }
}

/// Human-readable rendering that resolves base atoms to their names.
pub fn show_elem(t: &WpoTerm, x: &WpoElem) -> String {
    match (t, x) {
        (WpoTerm::Base(p), WpoElem::Atom(a)) if *a < p.len() => p.name(*a).to_string(),
        (WpoTerm::DisjointUnion(ts) | WpoTerm::OrderedSum(ts), WpoElem::Inj(i, y)) if *i < ts.len() => {
            format!("in{i}({})", show_elem(&ts[*i], y))
        }
        (WpoTerm::Product(ts) | WpoTerm::LexProduct(ts), WpoElem::Tuple(ys)) if ys.len() == ts.len() => {
            let parts: Vec<_> = ts.iter().zip(ys).map(|(t, y)| show_elem(t, y)).collect();
            format!("({})", parts.join(", "))
        }
        (WpoTerm::Star(c), WpoElem::Word(ys)) => {
            let parts: Vec<_> = ys.iter().map(|y| show_elem(c, y)).collect();
            format!("\"{}\"", parts.join(" "))
        }
        (WpoTerm::Pfin(c) | WpoTerm::PfinNE(c), WpoElem::Set(ys)) => {
            let parts: Vec<_> = ys.iter().map(|y| show_elem(c, y)).collect();
            format!("{{{}}}", parts.join(", "))
        }
        _ => x.to_string(),
    }
}

fn shape_error(t: &WpoTerm, x: &WpoElem) -> Error {
    Error::invalid(format!("{x} is not an element of {t}"))
}

pub fn validate_elem(t: &WpoTerm, x: &WpoElem) -> Result<()> {
    match (t, x) {
        (WpoTerm::Base(p), WpoElem::Atom(a)) if *a < p.len() => Ok(()),
        (WpoTerm::Singleton, WpoElem::Unit) => Ok(()),
        (WpoTerm::DisjointUnion(ts) | WpoTerm::OrderedSum(ts), WpoElem::Inj(i, y)) if *i < ts.len() => {
            validate_elem(&ts[*i], y)
        }
        (WpoTerm::Product(ts) | WpoTerm::LexProduct(ts), WpoElem::Tuple(ys)) if ys.len() == ts.len() => {
            ts.iter().zip(ys).try_for_each(|(t, y)| validate_elem(t, y))
        }
        (WpoTerm::Star(c), WpoElem::Word(ys)) => ys.iter().try_for_each(|y| validate_elem(c, y)),
        (WpoTerm::Pfin(c) | WpoTerm::PfinNE(c), WpoElem::Set(ys)) => {
            if matches!(t, WpoTerm::PfinNE(_)) && ys.is_empty() {
                return Err(Error::invalid("PfinNE elements must be nonempty"));
            }
            if ys.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("set members must be sorted and distinct"));
            }
            ys.iter().try_for_each(|y| validate_elem(c, y))
        }
        (WpoTerm::H(b), WpoElem::H(h)) => validate_h(b, h),
        _ => Err(shape_error(t, x)),
    }
}

/// Decides `x ≤ y` in the order described by `t`.
pub fn leq_elem(t: &WpoTerm, x: &WpoElem, y: &WpoElem) -> Result<bool> {
    match (t, x, y) {
        (WpoTerm::Base(p), WpoElem::Atom(a), WpoElem::Atom(b)) if *a < p.len() && *b < p.len() => {
            Ok(p.leq(*a, *b))
        }
        (WpoTerm::Singleton, WpoElem::Unit, WpoElem::Unit) => Ok(true),
        (WpoTerm::DisjointUnion(ts), WpoElem::Inj(i, a), WpoElem::Inj(j, b)) if *i < ts.len() && *j < ts.len() => {
            Ok(i == j && leq_elem(&ts[*i], a, b)?)
        }
        (WpoTerm::OrderedSum(ts), WpoElem::Inj(i, a), WpoElem::Inj(j, b)) if *i < ts.len() && *j < ts.len() => {
            if i == j {
                leq_elem(&ts[*i], a, b)
            } else {
                Ok(i < j)
            }
        }
        (WpoTerm::Product(ts), WpoElem::Tuple(xs), WpoElem::Tuple(ys))
            if xs.len() == ts.len() && ys.len() == ts.len() =>
        {
            for ((t, a), b) in ts.iter().zip(xs).zip(ys) {
                if !leq_elem(t, a, b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (WpoTerm::LexProduct(ts), WpoElem::Tuple(xs), WpoElem::Tuple(ys))
            if xs.len() == ts.len() && ys.len() == ts.len() =>
        {
            for ((t, a), b) in ts.iter().zip(xs).zip(ys).rev() {
                let up = leq_elem(t, a, b)?;
                let down = leq_elem(t, b, a)?;
                match (up, down) {
                    (true, true) => continue,
                    (true, false) => return Ok(true),
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
        (WpoTerm::Star(c), WpoElem::Word(xs), WpoElem::Word(ys)) => {
            // Greedy leftmost matching is optimal for Higman's order.
            let mut rest = ys.iter();
            'outer: for a in xs {
                for b in rest.by_ref() {
                    if leq_elem(c, a, b)? {
                        continue 'outer;
                    }
                }
                return Ok(false);
            }
            Ok(true)
        }
        (WpoTerm::Pfin(c) | WpoTerm::PfinNE(c), WpoElem::Set(xs), WpoElem::Set(ys)) => {
            for a in xs {
                let mut found = false;
                for b in ys {
                    if leq_elem(c, a, b)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (WpoTerm::H(beta), WpoElem::H(a), WpoElem::H(b)) => leq_h(beta, a, b),
        _ => Err(Error::invalid(format!("shape mismatch comparing {x} and {y} in {t}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    UpperBound,
}

impl Exactness {
    fn and(self, other: Exactness) -> Exactness {
        if self == Exactness::Exact && other == Exactness::Exact {
            Exactness::Exact
        } else {
            Exactness::UpperBound
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => write!(f, "exact"),
            Exactness::UpperBound => write!(f, "upper bound"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OType {
    pub value: Ordinal,
    pub exactness: Exactness,
}

impl OType {
    fn exact(value: Ordinal) -> Self {
        OType {
            value,
            exactness: Exactness::Exact,
        }
    }

    fn bound(value: Ordinal) -> Self {
        OType {
            value,
            exactness: Exactness::UpperBound,
        }
    }
}

/// Maximal order type of `t`, tagged with whether the value is known exact
/// or only an upper bound.
pub fn o_eval(t: &WpoTerm) -> Result<OType> {
    t.validate()?;
    eval(t)
}

fn eval(t: &WpoTerm) -> Result<OType> {
    let fold = |ts: &[WpoTerm], init: Ordinal, op: fn(&Ordinal, &Ordinal) -> Ordinal, exact: bool| {
        let mut acc = if exact { OType::exact(init) } else { OType::bound(init) };
        for c in ts {
            let o = eval(c)?;
            acc.value = op(&acc.value, &o.value);
            acc.exactness = acc.exactness.and(o.exactness);
        }
        Ok::<_, Error>(acc)
    };
    Ok(match t {
        WpoTerm::Base(p) => OType::exact(Ordinal::from(p.class_count() as u64)),
        WpoTerm::Singleton => OType::exact(Ordinal::one()),
        WpoTerm::DisjointUnion(ts) => fold(ts, Ordinal::zero(), Ordinal::nat_add, true)?,
        WpoTerm::Product(ts) => fold(ts, Ordinal::one(), Ordinal::nat_mul, true)?,
        WpoTerm::LexProduct(ts) => fold(ts, Ordinal::one(), Ordinal::ord_mul, false)?,
        WpoTerm::OrderedSum(ts) => fold(ts, Ordinal::zero(), Ordinal::ord_add, false)?,
        WpoTerm::Star(c) => {
            let o = eval(c)?;
            OType {
                value: h_fun(&o.value),
                exactness: o.exactness,
            }
        }
        WpoTerm::H(b) => OType::exact(h_otype(b)?),
        WpoTerm::Pfin(c) => match c.as_ref() {
            WpoTerm::H(b) => OType::exact(b.two_pow()),
            _ => OType::bound(eval(c)?.value.two_pow()),
        },
        WpoTerm::PfinNE(c) => match c.as_ref() {
            WpoTerm::H(b) => OType::exact(b.two_pow().minus_one_plus()?),
            _ => OType::bound(eval(c)?.value.two_pow().minus_one_plus()?),
        },
    })
}

/// One-step expansion of `H(β)` into the term language, available for the
/// product and disjoint-union clauses and for finite `β`.
pub fn h_expand(beta: &Ordinal) -> Result<Option<WpoTerm>> {
    Ok(match h_shape(beta)? {
        HShape::One => Some(WpoTerm::Singleton),
        HShape::Lex(fs) => Some(WpoTerm::LexProduct(fs.into_iter().map(WpoTerm::H).collect())),
        HShape::Union(cs) => Some(WpoTerm::DisjointUnion(cs.into_iter().map(WpoTerm::H).collect())),
        HShape::Omega | HShape::Sum { .. } => None,
    })
}

/// Cap on the number of elements materialized per enumeration layer.
const LAYER_CAP: usize = 20_000;

/// All elements, when `t` is finite and small enough to list.
pub fn finite_elements(t: &WpoTerm) -> Option<Vec<WpoElem>> {
    let out = match t {
        WpoTerm::Base(p) => (0..p.len()).map(WpoElem::Atom).collect(),
        WpoTerm::Singleton => vec![WpoElem::Unit],
        WpoTerm::DisjointUnion(ts) | WpoTerm::OrderedSum(ts) => {
            let mut out = Vec::new();
            for (i, c) in ts.iter().enumerate() {
                out.extend(finite_elements(c)?.into_iter().map(|x| WpoElem::inj(i, x)));
            }
            out
        }
        WpoTerm::Product(ts) | WpoTerm::LexProduct(ts) => {
            let parts = ts.iter().map(finite_elements).collect::<Option<Vec<_>>>()?;
            cartesian(&parts, LAYER_CAP)?
        }
        WpoTerm::Star(c) => {
            let inner = finite_elements(c)?;
            if !inner.is_empty() {
                return None;
            }
            vec![WpoElem::Word(Vec::new())]
        }
        WpoTerm::Pfin(c) | WpoTerm::PfinNE(c) => {
            let inner = finite_elements(c)?;
            if inner.len() > 14 {
                return None;
            }
            let skip_empty = matches!(t, WpoTerm::PfinNE(_));
            subsets(&inner, inner.len())
                .into_iter()
                .filter(|s| !(skip_empty && s.is_empty()))
                .map(WpoElem::Set)
                .collect()
        }
        WpoTerm::H(b) => {
            let n = b.to_u64()?;
            if n == 1 {
                vec![WpoElem::H(HElem::One)]
            } else {
                (0..n as usize)
                    .map(|i| {
                        WpoElem::H(HElem::Part {
                            index: i,
                            elem: Box::new(HElem::One),
                        })
                    })
                    .collect()
            }
        }
    };
    Some(out)
}

fn cartesian(parts: &[Vec<WpoElem>], cap: usize) -> Option<Vec<WpoElem>> {
    let mut acc: Vec<Vec<WpoElem>> = vec![Vec::new()];
    for p in parts {
        if acc.len().saturating_mul(p.len()) > cap {
            return None;
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                p.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    Some(acc.into_iter().map(WpoElem::Tuple).collect())
}

/// Subsets of size at most `max`, ordered by size and then by index;
/// members sorted.
fn subsets(items: &[WpoElem], max: usize) -> Vec<Vec<WpoElem>> {
    fn go(items: &[WpoElem], start: usize, size: usize, cur: &mut Vec<WpoElem>, out: &mut Vec<Vec<WpoElem>>) {
        if cur.len() == size {
            let mut s = cur.clone();
            s.sort();
            s.dedup();
            out.push(s);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, size, cur, out);
            cur.pop();
            if out.len() > LAYER_CAP {
                return;
            }
        }
    }
    let mut out = Vec::new();
    for size in 0..=max.min(items.len()) {
        go(items, 0, size, &mut Vec::new(), &mut out);
        if out.len() > LAYER_CAP {
            break;
        }
    }
    out
}

/// Canonical finite family of ordinals used to sample indices: numbers up to
/// `d` and `ω^e·c` for family members `e`, nested `depth` times.
pub fn index_family(d: u64, depth: usize) -> Vec<Ordinal> {
    let mut fam: Vec<Ordinal> = (0..=d).map(Ordinal::from).collect();
    for _ in 0..depth {
        let mut next = fam.clone();
        for e in &fam {
            if e.is_zero() {
                continue;
            }
            for c in 1..=d.max(1) {
                next.push(Ordinal::term(e.clone(), c));
            }
        }
        next.sort();
        next.dedup();
        fam = next;
    }
    fam
}

fn h_elements_at(beta: &Ordinal, d: u64) -> Result<Vec<HElem>> {
    Ok(match h_shape(beta)? {
        HShape::One => vec![HElem::One],
        HShape::Omega => (1..=d.max(1))
            .flat_map(|k| (0..k).map(move |i| HElem::Level { k, i }))
            .collect(),
        HShape::Sum { bound } => {
            let mut out = Vec::new();
            for idx in index_family(d, 2).into_iter().filter(|i| *i < bound) {
                for x in h_elements_at(&Ordinal::omega_pow(idx.clone()), d)? {
                    out.push(HElem::Summand {
                        index: idx.clone(),
                        elem: Box::new(x),
                    });
                    if out.len() > LAYER_CAP {
                        return Ok(out);
                    }
                }
            }
            out
        }
        HShape::Lex(fs) => {
            let parts = fs
                .iter()
                .map(|f| h_elements_at(f, d))
                .collect::<Result<Vec<_>>>()?;
            let mut acc: Vec<Vec<HElem>> = vec![Vec::new()];
            for p in parts {
                let mut next = Vec::new();
                'grow: for prefix in &acc {
                    for x in &p {
                        let mut v = prefix.clone();
                        v.push(x.clone());
                        next.push(v);
                        if next.len() > LAYER_CAP {
                            break 'grow;
                        }
                    }
                }
                acc = next;
            }
            acc.into_iter().map(HElem::Lex).collect()
        }
        HShape::Union(cs) => {
            let mut out = Vec::new();
            for (i, c) in cs.iter().enumerate() {
                for x in h_elements_at(c, d)? {
                    out.push(HElem::Part {
                        index: i,
                        elem: Box::new(x),
                    });
                }
            }
            out
        }
    })
}

fn elements_at(t: &WpoTerm, d: u64) -> Result<Vec<WpoElem>> {
    if let Some(all) = finite_elements(t) {
        return Ok(all);
    }
    Ok(match t {
        WpoTerm::Base(_) | WpoTerm::Singleton => unreachable!("finite"),
        WpoTerm::DisjointUnion(ts) | WpoTerm::OrderedSum(ts) => {
            let mut out = Vec::new();
            for (i, c) in ts.iter().enumerate() {
                out.extend(elements_at(c, d)?.into_iter().map(|x| WpoElem::inj(i, x)));
            }
            out
        }
        WpoTerm::Product(ts) | WpoTerm::LexProduct(ts) => {
            let parts = ts.iter().map(|c| elements_at(c, d)).collect::<Result<Vec<_>>>()?;
            let mut acc: Vec<Vec<WpoElem>> = vec![Vec::new()];
            for p in parts {
                let mut next = Vec::new();
                'grow: for prefix in &acc {
                    for x in &p {
                        let mut v = prefix.clone();
                        v.push(x.clone());
                        next.push(v);
                        if next.len() > LAYER_CAP {
                            break 'grow;
                        }
                    }
                }
                acc = next;
            }
            acc.into_iter().map(WpoElem::Tuple).collect()
        }
        WpoTerm::Star(c) => {
            let letters = elements_at(c, d)?;
            let mut out = vec![Vec::new()];
            let mut frontier = vec![Vec::new()];
            for _ in 0..d {
                let mut next = Vec::new();
                for w in &frontier {
                    for x in &letters {
                        let mut v: Vec<WpoElem> = w.clone();
                        v.push(x.clone());
                        next.push(v);
                    }
                    if next.len() > LAYER_CAP {
                        break;
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
                if out.len() > LAYER_CAP {
                    break;
                }
            }
            out.into_iter().map(WpoElem::Word).collect()
        }
        WpoTerm::Pfin(c) | WpoTerm::PfinNE(c) => {
            let inner = elements_at(c, d)?;
            let skip_empty = matches!(t, WpoTerm::PfinNE(_));
            subsets(&inner, d as usize)
                .into_iter()
                .filter(|s| !(skip_empty && s.is_empty()))
                .map(WpoElem::Set)
                .collect()
        }
        WpoTerm::H(b) => h_elements_at(b, d)?.into_iter().map(WpoElem::H).collect(),
    })
}

/// Result of [`enumerate_elements`]; `short` is set when fewer elements
/// than requested exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub elements: Vec<WpoElem>,
    pub short: bool,
}

/// Fair enumeration of up to `budget` distinct elements, by increasing size.
pub fn enumerate_elements(t: &WpoTerm, budget: usize) -> Result<Enumeration> {
    t.validate()?;
    if let Some(all) = finite_elements(t) {
        let short = all.len() < budget;
        return Ok(Enumeration {
            elements: all.into_iter().take(budget).collect(),
            short,
        });
    }
    let mut seen = HashSet::new();
    let mut elements = Vec::new();
    for d in 1..=64u64 {
        for x in elements_at(t, d)? {
            if elements.len() >= budget {
                break;
            }
            if seen.insert(x.clone()) {
                elements.push(x);
            }
        }
        if elements.len() >= budget {
            break;
        }
    }
    let short = elements.len() < budget;
    Ok(Enumeration { elements, short })
}
