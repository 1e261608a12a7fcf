//! The family `H_β` of well partial orders with `o(H_β) = β`, its elements,
//! its order, and the embeddings `H_β ↪ H_β'` for `β ≤ β'`.
//!
//! The family is defined by five clauses:
//!
//! 1. `H_1` is a point.
//! 2. `H_ω = Σ_{k<ω} ∐_{i<k} 1`: level `k` is an antichain of size `k`.
//! 3. `H_{ω^{ω^γ}} = Σ_{δ<ω^γ} H_{ω^δ}` for `γ > 0`.
//! 4. `H_{ω^γ} = Π_i H_{ω^{ω^{δ_i}}}` (lexicographic) when
//!    `γ = ω^{δ_0} + … + ω^{δ_r}` is not a power of ω.
//! 5. `H_β = ∐_i H_{ω^{γ_i}}` when `β = ω^{γ_0} + … + ω^{γ_r}` is not a
//!    power of ω.
//!
//! In clause 4 the *last* factor is the most significant one, so the type of
//! the product is the ordinal product of the factor types in list order.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// Upper limit on expanded CNF multiplicities handled by the H family.
pub const MAX_H_TERMS: usize = 4096;

/// Which defining clause applies to `H_β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HShape {
    One,
    Omega,
    /// Ordered sum of `H_{ω^η}` over `η < bound`.
    Sum { bound: Ordinal },
    /// Lexicographic product; each entry is the index of the factor.
    Lex(Vec<Ordinal>),
    /// Disjoint union; each entry is the index of the component.
    Union(Vec<Ordinal>),
}

pub fn h_shape(beta: &Ordinal) -> Result<HShape> {
    if beta.is_zero() {
        return Err(Error::invalid("H_0 is empty and not part of the family"));
    }
    if !beta.is_power_of_omega() {
        let comps = beta
            .expanded_exponents(MAX_H_TERMS)?
            .into_iter()
            .map(Ordinal::omega_pow)
            .collect();
        return Ok(HShape::Union(comps));
    }
    let gamma = beta.leading_exponent().expect("nonzero");
    if gamma.is_zero() {
        return Ok(HShape::One);
    }
    if gamma.is_power_of_omega() {
        let inner = gamma.leading_exponent().expect("nonzero");
        if inner.is_zero() {
            return Ok(HShape::Omega);
        }
        return Ok(HShape::Sum {
            bound: gamma.clone(),
        });
    }
    let factors = gamma
        .expanded_exponents(MAX_H_TERMS)?
        .into_iter()
        .map(|d| Ordinal::omega_pow(Ordinal::omega_pow(d)))
        .collect();
    Ok(HShape::Lex(factors))
}

/// An element of some `H_β`, structured by the clause that builds it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HElem {
    One,
    /// Member `i` of the level-`k` antichain of `H_ω`.
    Level { k: u64, i: u64 },
    Summand { index: Ordinal, elem: Box<HElem> },
    Lex(Vec<HElem>),
    Part { index: usize, elem: Box<HElem> },
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HElem::One => write!(f, "*"),
            HElem::Level { k, i } => write!(f, "L{k}.{i}"),
            HElem::Summand { index, elem } => write!(f, "[{index}: {elem}]"),
            HElem::Lex(xs) => {
                write!(f, "<")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ">")
            }
            HElem::Part { index, elem } => write!(f, "#{index}:{elem}"),
        }
    }
}

pub fn validate_h(beta: &Ordinal, x: &HElem) -> Result<()> {
    let bad = || Error::invalid(format!("{x} is not an element of H({beta})"));
    match (h_shape(beta)?, x) {
        (HShape::One, HElem::One) => Ok(()),
        (HShape::Omega, HElem::Level { k, i }) if *k >= 1 && i < k => Ok(()),
        (HShape::Sum { bound }, HElem::Summand { index, elem }) if *index < bound => {
            validate_h(&Ordinal::omega_pow(index.clone()), elem)
        }
        (HShape::Lex(factors), HElem::Lex(xs)) if factors.len() == xs.len() => factors
            .iter()
            .zip(xs)
            .try_for_each(|(f, x)| validate_h(f, x)),
        (HShape::Union(comps), HElem::Part { index, elem }) if *index < comps.len() => {
            validate_h(&comps[*index], elem)
        }
        _ => Err(bad()),
    }
}

/// The order of `H_β`. Inputs are assumed valid; shape mismatches error.
pub fn leq_h(beta: &Ordinal, x: &HElem, y: &HElem) -> Result<bool> {
    let mismatch = || Error::invalid(format!("shape mismatch comparing {x} and {y} in H({beta})"));
    match (h_shape(beta)?, x, y) {
        (HShape::One, HElem::One, HElem::One) => Ok(true),
        (HShape::Omega, HElem::Level { k: k1, i: i1 }, HElem::Level { k: k2, i: i2 }) => {
            Ok(k1 < k2 || (k1 == k2 && i1 == i2))
        }
        (
            HShape::Sum { .. },
            HElem::Summand { index: a, elem: x },
            HElem::Summand { index: b, elem: y },
        ) => {
            if a != b {
                Ok(a < b)
            } else {
                leq_h(&Ordinal::omega_pow(a.clone()), x, y)
            }
        }
        (HShape::Lex(factors), HElem::Lex(xs), HElem::Lex(ys))
            if xs.len() == factors.len() && ys.len() == factors.len() =>
        {
            for ((f, x), y) in factors.iter().zip(xs).zip(ys).rev() {
                if x != y {
                    return leq_h(f, x, y);
                }
            }
            Ok(true)
        }
        (
            HShape::Union(comps),
            HElem::Part { index: a, elem: x },
            HElem::Part { index: b, elem: y },
        ) if *a < comps.len() => Ok(a == b && leq_h(&comps[*a], x, y)?),
        _ => Err(mismatch()),
    }
}

/// `o(H_β)` computed clause by clause.
pub fn h_otype(beta: &Ordinal) -> Result<Ordinal> {
    Ok(match h_shape(beta)? {
        HShape::One => Ordinal::one(),
        // Σ_{k<ω} k
        HShape::Omega => Ordinal::omega(),
        // Σ_{η<ω^γ} ω^η has type ω^{ω^γ}
        HShape::Sum { bound } => Ordinal::omega_pow(bound),
        HShape::Lex(factors) => factors
            .iter()
            .try_fold(Ordinal::one(), |acc, f| Ok::<_, Error>(acc.ord_mul(&h_otype(f)?)))?,
        HShape::Union(comps) => comps
            .iter()
            .try_fold(Ordinal::zero(), |acc, c| Ok::<_, Error>(acc.nat_add(&h_otype(c)?)))?,
    })
}

/// A fixed element of `H_β`.
pub fn some_h_elem(beta: &Ordinal) -> Result<HElem> {
    Ok(match h_shape(beta)? {
        HShape::One => HElem::One,
        HShape::Omega => HElem::Level { k: 1, i: 0 },
        HShape::Sum { .. } => HElem::Summand {
            index: Ordinal::zero(),
            elem: Box::new(HElem::One),
        },
        HShape::Lex(factors) => HElem::Lex(factors.iter().map(some_h_elem).collect::<Result<_>>()?),
        HShape::Union(comps) => HElem::Part {
            index: 0,
            elem: Box::new(some_h_elem(&comps[0])?),
        },
    })
}

/// The embedding `H_from ↪ H_to` for `from ≤ to`.
#[derive(Clone, Debug)]
pub struct HEmbedding {
    from: Ordinal,
    to: Ordinal,
}

impl HEmbedding {
    pub fn new(from: Ordinal, to: Ordinal) -> Result<Self> {
        if from.is_zero() {
            return Err(Error::invalid("H_0 is not part of the family"));
        }
        if from > to {
            return Err(Error::invalid(format!("cannot embed H({from}) into smaller H({to})")));
        }
        Ok(HEmbedding { from, to })
    }

    pub fn from(&self) -> &Ordinal {
        &self.from
    }

    pub fn to(&self) -> &Ordinal {
        &self.to
    }

    pub fn apply(&self, x: &HElem) -> Result<HElem> {
        validate_h(&self.from, x)?;
        embed(&self.from, &self.to, x)
    }
}

/// Splits an element of `H_β` into (component index, element of the
/// component `H_{ω^{γ_i}}`).
fn split_component(beta: &Ordinal, x: &HElem) -> Result<(usize, HElem)> {
    if beta.is_power_of_omega() {
        return Ok((0, x.clone()));
    }
    match x {
        HElem::Part { index, elem } => Ok((*index, (**elem).clone())),
        _ => Err(Error::invalid(format!("{x} is not an element of H({beta})"))),
    }
}

fn embed(from: &Ordinal, to: &Ordinal, x: &HElem) -> Result<HElem> {
    if from == to {
        return Ok(x.clone());
    }
    let comps = from.expanded_exponents(MAX_H_TERMS)?;
    let comps_to = to.expanded_exponents(MAX_H_TERMS)?;
    let (i, inner) = split_component(from, x)?;
    // First component where the CNFs differ; `from < to` forces the source
    // exponent to be smaller there.
    let diff = comps.iter().zip(&comps_to).position(|(a, b)| a != b);
    let (j, y) = match diff {
        Some(k) if i >= k => (k, embed_union(&comps[k..], &comps_to[k], i - k, &inner)?),
        _ => (i, inner),
    };
    if to.is_power_of_omega() {
        debug_assert_eq!(j, 0);
        Ok(y)
    } else {
        Ok(HElem::Part {
            index: j,
            elem: Box::new(y),
        })
    }
}

/// Factor list of an element of `H_{ω^a}` as seen by clause 4.
fn factors_of(a: &Ordinal, x: &HElem) -> Result<Vec<HElem>> {
    Ok(match h_shape(&Ordinal::omega_pow(a.clone()))? {
        HShape::One => Vec::new(),
        HShape::Lex(_) => match x {
            HElem::Lex(xs) => xs.clone(),
            _ => return Err(Error::invalid(format!("{x} is not a product element"))),
        },
        _ => vec![x.clone()],
    })
}

/// Reassembles factors into an element of `H_{ω^a}`.
fn from_factors(a: &Ordinal, mut xs: Vec<HElem>) -> Result<HElem> {
    Ok(match h_shape(&Ordinal::omega_pow(a.clone()))? {
        HShape::One => HElem::One,
        HShape::Lex(_) => HElem::Lex(xs),
        _ => xs.pop().expect("single factor"),
    })
}

/// `H_{ω^a} ↪ H_{ω^g}` for `a ≤ g`.
fn embed_pow(a: &Ordinal, g: &Ordinal, x: &HElem) -> Result<HElem> {
    if a == g {
        return Ok(x.clone());
    }
    debug_assert!(a < g);
    match h_shape(&Ordinal::omega_pow(g.clone()))? {
        HShape::Omega => Ok(HElem::Level { k: 1, i: 0 }),
        HShape::Sum { .. } => Ok(HElem::Summand {
            index: a.clone(),
            elem: Box::new(x.clone()),
        }),
        HShape::Lex(factors) => {
            let a_exps = a.expanded_exponents(MAX_H_TERMS)?;
            let g_exps = g.expanded_exponents(MAX_H_TERMS)?;
            let xs = factors_of(a, x)?;
            let common = a_exps.iter().zip(&g_exps).take_while(|(p, q)| p == q).count();
            let mut out: Vec<HElem> = xs[..common].to_vec();
            if common < a_exps.len() {
                // Cancel the shared least-significant factors and route the
                // rest of H_{ω^a} through a single summand of factor `common`.
                let rest = a_exps[common..].iter().fold(Ordinal::zero(), |acc, e| {
                    acc.ord_add(&Ordinal::omega_pow(e.clone()))
                });
                let sub = from_factors(&rest, xs[common..].to_vec())?;
                let target = Ordinal::omega_pow(g_exps[common].clone());
                out.push(embed_pow(&rest, &target, &sub)?);
                for f in &factors[common + 1..] {
                    out.push(some_h_elem(f)?);
                }
            } else {
                for f in &factors[common..] {
                    out.push(some_h_elem(f)?);
                }
            }
            Ok(HElem::Lex(out))
        }
        other => Err(Error::Invariant(format!("unexpected shape {other:?} for H(w^({g}))"))),
    }
}

/// Embeds the disjoint union `∐_i H_{ω^{comps[i]}}` (each `comps[i] < g`,
/// weakly decreasing) into `H_{ω^g}`, sending component `idx` element `x`.
fn embed_union(comps: &[Ordinal], g: &Ordinal, idx: usize, x: &HElem) -> Result<HElem> {
    if comps.len() == 1 {
        return embed_pow(&comps[0], g, x);
    }
    let top = comps[0].successor();
    match h_shape(&Ordinal::omega_pow(g.clone()))? {
        // Every component is a point: use one antichain level.
        HShape::Omega => Ok(HElem::Level {
            k: comps.len() as u64,
            i: idx as u64,
        }),
        HShape::Sum { .. } => Ok(HElem::Summand {
            index: top.clone(),
            elem: Box::new(embed_union(comps, &top, idx, x)?),
        }),
        HShape::Lex(_) => {
            let (succ, pred) = g.successor_split();
            if succ {
                // H_{ω^{δ+1}} = H_{ω^δ} · H_ω; the H_ω factor separates the
                // components into an antichain.
                let delta = pred.expect("successor");
                let y = embed_pow(&comps[idx], &delta, x)?;
                let mut out = factors_of(&delta, &y)?;
                out.push(HElem::Level {
                    k: comps.len() as u64,
                    i: idx as u64,
                });
                Ok(HElem::Lex(out))
            } else {
                let z = embed_union(comps, &top, idx, x)?;
                embed_pow(&top, g, &z)
            }
        }
        other => Err(Error::Invariant(format!("unexpected shape {other:?} for H(w^({g}))"))),
    }
}
