//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a list of `(exponent, coefficient)` pairs with strictly
//! decreasing exponents and positive coefficients, so structural equality is
//! ordinal equality. Every constructor normalizes; there are no lazy forms.
//!
//! Two families of operations are provided: the ordinary (non-commutative)
//! sum and product, and the natural (Hessenberg) sum ⊕ and product ⊗ that
//! govern the types of disjoint unions and cartesian products.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest finite exponent `n` for which `2^n` is materialized.
pub const MAX_TWO_POW_BITS: usize = 1 << 20;

/// One Cantor-normal-form summand `ω^exp · coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exp · coeff`; a zero coefficient yields 0.
    pub fn term(exp: Ordinal, coeff: impl Into<BigUint>) -> Self {
        let coeff = coeff.into();
        if coeff.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term { exp, coeff }],
        }
    }

    /// Builds an ordinal from terms in any order, merging equal exponents
    /// with the natural sum.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut map: BTreeMap<Ordinal, BigUint> = BTreeMap::new();
        for t in terms {
            if t.coeff.is_zero() {
                continue;
            }
            *map.entry(t.exp).or_insert_with(BigUint::zero) += t.coeff;
        }
        Ordinal {
            terms: map
                .into_iter()
                .rev()
                .map(|(exp, coeff)| Term { exp, coeff })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exp.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_nat().and_then(|n| n.to_u64())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    /// True for `ω^e` with coefficient one (including `1 = ω^0`).
    pub fn is_power_of_omega(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.coeff.is_one())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// The finite tail `n` in `ω·γ + n`.
    pub fn finite_part(&self) -> BigUint {
        match self.terms.last() {
            Some(t) if t.exp.is_zero() => t.coeff.clone(),
            _ => BigUint::zero(),
        }
    }

    /// The infinite head `ω·γ` in `ω·γ + n`.
    pub fn infinite_part(&self) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.exp.is_zero())
                .cloned()
                .collect(),
        }
    }

    /// Exponents of the Cantor normal form with multiplicity, i.e. the list
    /// `e_0 ≥ e_1 ≥ …` with `self = ω^{e_0} + ω^{e_1} + …`.
    ///
    /// Fails when the total multiplicity exceeds `limit`.
    pub fn expanded_exponents(&self, limit: usize) -> Result<Vec<Ordinal>> {
        let mut out = Vec::new();
        for t in &self.terms {
            let c = t
                .coeff
                .to_usize()
                .filter(|&c| out.len() + c <= limit)
                .ok_or_else(|| Error::invalid(format!("{self} has more than {limit} CNF terms")))?;
            out.extend(std::iter::repeat_n(t.exp.clone(), c));
        }
        Ok(out)
    }

    /// Total number of terms in the nested representation.
    pub fn size(&self) -> usize {
        self.terms.iter().map(|t| 1 + t.exp.size()).sum()
    }

    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal::term(exp, 1u32)
    }

    /// Natural (Hessenberg) sum: merge the term lists, adding coefficients of
    /// equal exponents.
    pub fn nat_add(&self, other: &Ordinal) -> Ordinal {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.exp.cmp(&b.exp) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(Term {
                        exp: a.exp.clone(),
                        coeff: &a.coeff + &b.coeff,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ordinal { terms: out }
    }

    /// Natural (Hessenberg) product: distribute fully with
    /// `ω^e ⊗ ω^f = ω^{e⊕f}`.
    pub fn nat_mul(&self, other: &Ordinal) -> Ordinal {
        Ordinal::from_terms(self.terms.iter().flat_map(|a| {
            other.terms.iter().map(move |b| Term {
                exp: a.exp.nat_add(&b.exp),
                coeff: &a.coeff * &b.coeff,
            })
        }))
    }

    /// Ordinary ordinal sum. Terms of `self` below the leading exponent of
    /// `other` are absorbed.
    pub fn ord_add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut out: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp > head.exp)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        let first = rest.next().expect("nonempty");
        match self.terms.get(out.len()) {
            Some(t) if t.exp == first.exp => out.push(Term {
                exp: first.exp.clone(),
                coeff: &t.coeff + &first.coeff,
            }),
            _ => out.push(first.clone()),
        }
        out.extend(rest.cloned());
        Ordinal { terms: out }
    }

    /// Ordinary ordinal product, left-distributing over the terms of `other`.
    pub fn ord_mul(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut acc = Ordinal::zero();
        for t in &other.terms {
            let piece = if t.exp.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coeff = &lead.coeff * &t.coeff;
                Ordinal { terms }
            } else {
                Ordinal::term(lead.exp.ord_add(&t.exp), t.coeff.clone())
            };
            acc = acc.ord_add(&piece);
        }
        acc
    }

    /// Ordinal exponentiation with base 2.
    ///
    /// Writing `self = ω·γ + n`, this is `ω^γ · 2^n`, where `γ` replaces each
    /// infinite exponent `a` by `-1 + a`.
    ///
    /// Panics if the finite part does not fit in a machine word.
    pub fn two_pow(&self) -> Ordinal {
        self.checked_two_pow()
            .expect("finite part of exponent too large for 2^n")
    }

    /// [`Ordinal::two_pow`], refusing finite parts above [`MAX_TWO_POW_BITS`].
    pub fn checked_two_pow(&self) -> Result<Ordinal> {
        let n = self
            .finite_part()
            .to_usize()
            .filter(|&n| n <= MAX_TWO_POW_BITS)
            .ok_or_else(|| Error::Unsupported(format!("2^({self}) has a finite factor too large to materialize")))?;
        let gamma = Ordinal {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.exp.is_zero())
                .map(|t| Term {
                    exp: t.exp.minus_one_plus().expect("nonzero exponent"),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        };
        Ok(Ordinal::term(gamma, BigUint::one() << n))
    }

    /// `-1 + self`: the predecessor for finite values, `self` otherwise.
    pub fn minus_one_plus(&self) -> Result<Ordinal> {
        if self.is_zero() {
            return Err(Error::invalid("-1 + 0 is undefined"));
        }
        if self.is_finite() {
            Ok(self.successor_split().1.expect("finite nonzero"))
        } else {
            Ok(self.clone())
        }
    }

    /// `(is_successor, predecessor)`; zero and limits report `(false, None)`.
    pub fn successor_split(&self) -> (bool, Option<Ordinal>) {
        if !self.is_successor() {
            return (false, None);
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor is nonzero");
        last.coeff -= 1u32;
        if last.coeff.is_zero() {
            terms.pop();
        }
        (true, Some(Ordinal { terms }))
    }

    pub fn successor(&self) -> Ordinal {
        self.ord_add(&Ordinal::one())
    }

    /// Whether `self = ε + k` for an epsilon number `ε` and finite `k`.
    ///
    /// No epsilon number is representable in this notation, so this is
    /// always false; it exists to keep the corresponding branch of the
    /// Higman type function explicit.
    pub fn is_epsilon_plus_finite(&self) -> bool {
        let head = self.infinite_part();
        match head.terms.as_slice() {
            // ε = ω^ε would require the exponent to equal the whole ordinal.
            [t] if t.coeff.is_one() => t.exp == head,
            _ => false,
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::term(Ordinal::zero(), n)
    }
}

impl From<BigUint> for Ordinal {
    fn from(n: BigUint) -> Self {
        Ordinal::term(Ordinal::zero(), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exp.cmp(&b.exp).then_with(|| a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            if t.exp.is_one() {
                write!(f, "w")?;
            } else if t.exp.is_finite() || t.exp == Ordinal::omega() {
                write!(f, "w^{}", t.exp)?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if !t.coeff.is_one() {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Ordinal {
    fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.exp.is_zero() && t.coeff.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> Ordinal {
        Ordinal::from(k)
    }

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn wp(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(n(0).cmp(&n(0)), Ordering::Equal);
        assert_eq!(w().cmp(&n(5)), Ordering::Greater);
        let a = wp(w()).ord_mul(&n(2)).ord_add(&n(1));
        let b = wp(w()).ord_mul(&n(3));
        assert!(a < b);
    }

    #[test]
    fn natural_operations() {
        assert_eq!(n(2).nat_add(&n(3)), n(5));
        let lhs = w().ord_add(&n(1)).nat_add(&w());
        assert_eq!(lhs, w().ord_mul(&n(2)).ord_add(&n(1)));
        assert_eq!(wp(w()).nat_mul(&n(4)), Ordinal::term(w(), 4u32));
        // ω ⊗ ω = ω^2 while (ω+1) ⊗ (ω+1) = ω^2 + ω·2 + 1
        let wp1 = w().successor();
        assert_eq!(
            wp1.nat_mul(&wp1),
            wp(n(2)).ord_add(&w().ord_mul(&n(2))).ord_add(&n(1))
        );
    }

    #[test]
    fn ordinary_operations() {
        assert_eq!(n(1).ord_add(&w()), w());
        assert_eq!(w().ord_add(&n(1)).to_string(), "w + 1");
        assert_eq!(wp(w()).ord_mul(&w()), wp(w().successor()));
        // (ω+1)·2 = ω·2 + 1
        assert_eq!(
            w().successor().ord_mul(&n(2)),
            w().ord_mul(&n(2)).successor()
        );
        // 2·ω = ω
        assert_eq!(n(2).ord_mul(&w()), w());
        assert_eq!(Ordinal::zero().ord_mul(&w()), Ordinal::zero());
    }

    #[test]
    fn omega_pow_examples() {
        assert_eq!(wp(n(0)), n(1));
        assert_eq!(wp(n(1)), w());
        assert_eq!(wp(w()).to_string(), "w^w");
    }

    #[test]
    fn two_pow_examples() {
        assert_eq!(n(5).two_pow(), n(32));
        assert_eq!(w().two_pow(), w());
        assert_eq!(wp(n(2)).two_pow(), wp(w()));
        // 2^(ω+3) = ω·8
        assert_eq!(w().ord_add(&n(3)).two_pow(), Ordinal::term(n(1), 8u32));
        assert_eq!(n(0).two_pow(), n(1));
    }

    #[test]
    fn minus_one_plus_examples() {
        assert_eq!(n(1).minus_one_plus().unwrap(), n(0));
        assert_eq!(n(32).minus_one_plus().unwrap(), n(31));
        assert_eq!(wp(w()).minus_one_plus().unwrap(), wp(w()));
        assert!(n(0).minus_one_plus().is_err());
    }

    #[test]
    fn successor_split_examples() {
        assert_eq!(w().successor().successor_split(), (true, Some(w())));
        assert_eq!(wp(n(2)).successor_split(), (false, None));
        assert_eq!(n(7).successor_split(), (true, Some(n(6))));
        assert_eq!(n(0).successor_split(), (false, None));
    }

    #[test]
    fn epsilon_guard_never_fires() {
        for o in [n(0), n(3), w(), wp(w()), wp(wp(w())).ord_add(&n(4))] {
            assert!(!o.is_epsilon_plus_finite());
        }
    }

    #[test]
    fn printing() {
        let o = Ordinal::term(wp(n(2)), 3u32)
            .ord_add(&w().ord_mul(&n(2)))
            .ord_add(&n(5));
        assert_eq!(o.to_string(), "w^(w^2)*3 + w*2 + 5");
        assert_eq!(Ordinal::term(w(), 2u32).ord_add(&n(1)).to_string(), "w^w*2 + 1");
        assert_eq!(n(0).to_string(), "0");
    }

    #[test]
    fn expanded_exponents_respects_limit() {
        let o = w().ord_mul(&n(3)).ord_add(&n(2));
        assert_eq!(o.expanded_exponents(10).unwrap(), vec![n(1), n(1), n(1), n(0), n(0)]);
        assert!(o.expanded_exponents(4).is_err());
    }
}
