//! Closed-form bounds on maximal order types of finite-image sequences.
//!
//! Everything here is a function of `β = o(X)` (and of the length bound
//! `α < ω^ω`), evaluated exactly with the ordinal module.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// Cap on the number of expanded CNF summands of `α`.
pub const MAX_ALPHA_TERMS: usize = 4096;

/// `o(X*)` as a function of `o(X)`.
pub fn h_fun(beta: &Ordinal) -> Ordinal {
    if beta.is_zero() {
        return Ordinal::one();
    }
    if let Some(n) = beta.as_nat() {
        return Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::from(n - 1u32)));
    }
    if beta.is_epsilon_plus_finite() {
        return Ordinal::omega_pow(Ordinal::omega_pow(beta.successor()));
    }
    Ordinal::omega_pow(Ordinal::omega_pow(beta.clone()))
}

/// `(p_k(β), q_k(β))` with `p_0 = β`, `q_k = ⊕_{i<k} p_i`, `p_k = -1 + 2^{q_k}`.
pub fn pq(k: usize, beta: &Ordinal) -> Result<(Ordinal, Ordinal)> {
    let mut p = beta.clone();
    let mut q = Ordinal::zero();
    for _ in 0..k {
        q = q.nat_add(&p);
        p = q.checked_two_pow()?.minus_one_plus()?;
    }
    Ok((p, q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fg {
    pub f: Ordinal,
    pub g: Ordinal,
    pub p_plus: Ordinal,
    pub g_plus: Ordinal,
}

pub fn fg(k: usize, beta: &Ordinal) -> Result<Fg> {
    let (p, q) = pq(k, beta)?;
    let f = h_fun(&q);
    let g = f.nat_mul(&p);
    let p_plus = Ordinal::one().ord_add(&p);
    let g_plus = f.nat_mul(&p_plus);
    Ok(Fg { f, g, p_plus, g_plus })
}

/// Upper bounds for sequences of length `< ω^k`, exactly `ω^k`, and
/// indecomposable of length `ω^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperOmegaK {
    pub finseq: Ordinal,
    pub finseqeq: Ordinal,
    pub indec: Ordinal,
}

pub fn upper_omega_k(k: usize, beta: &Ordinal) -> Result<UpperOmegaK> {
    let (p, q) = pq(k, beta)?;
    let f = h_fun(&q);
    Ok(UpperOmegaK {
        finseqeq: f.nat_mul(&p),
        finseq: f,
        indec: p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Length `< α`.
    Finseq,
    /// Length exactly `α`.
    Finseqeq,
}

/// Which formula produced an [`upper_alpha`] value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperFormula {
    Product,
    PrefixSum,
    Refined,
}

impl UpperFormula {
    pub fn describe(self) -> &'static str {
        match self {
            UpperFormula::Product => "natural product of g_k over the CNF terms of alpha",
            UpperFormula::PrefixSum => "natural sum over CNF prefixes of f_k times earlier g_k",
            UpperFormula::Refined => "refined finite-part bound",
        }
    }
}

/// Exponents `k_0 ≥ k_1 ≥ …` of `α = ω^{k_0} + ω^{k_1} + …`, one per summand.
fn alpha_exponents(alpha: &Ordinal) -> Result<Vec<usize>> {
    if alpha.is_zero() {
        return Err(Error::invalid("alpha must be at least 1"));
    }
    let mut out = Vec::new();
    for t in alpha.terms() {
        let k = t
            .exp
            .to_u64()
            .ok_or_else(|| Error::Unsupported(format!("alpha = {alpha} is not below w^w")))?;
        let c = t.coeff.to_string().parse::<usize>().unwrap_or(usize::MAX);
        if c > MAX_ALPHA_TERMS || out.len() + c > MAX_ALPHA_TERMS {
            return Err(Error::Unsupported(format!("alpha = {alpha} has too many CNF summands")));
        }
        out.extend(std::iter::repeat_n(k as usize, c));
    }
    Ok(out)
}

fn prefix_sum(ks: &[usize], beta: &Ordinal) -> Result<Ordinal> {
    let mut total = Ordinal::zero();
    let mut prod = Ordinal::one();
    for &k in ks {
        let x = fg(k, beta)?;
        total = total.nat_add(&x.f.nat_mul(&prod));
        prod = prod.nat_mul(&x.g);
    }
    Ok(total)
}

fn refined(ks: &[usize], beta: &Ordinal) -> Result<Option<Ordinal>> {
    let infinite: Vec<usize> = ks.iter().copied().filter(|&k| k > 0).collect();
    let ell = ks.len() - infinite.len();
    let Some((&kr, head)) = infinite.split_last() else {
        return Ok(None);
    };
    if ell == 0 {
        return Ok(None);
    }
    let mut total = prefix_sum(head, beta)?;
    let mut prod = Ordinal::one();
    for &k in head {
        prod = prod.nat_mul(&fg(k, beta)?.g);
    }
    let last = fg(kr, beta)?;
    total = total.nat_add(&last.g_plus.nat_mul(&prod));
    let prod_all = prod.nat_mul(&last.g);
    let mut power = Ordinal::one();
    for _ in 1..ell {
        power = power.nat_mul(beta);
        total = total.nat_add(&power.nat_mul(&prod_all));
    }
    Ok(Some(total))
}

/// Upper bound together with the formula that attains it.
pub fn upper_alpha_detail(alpha: &Ordinal, beta: &Ordinal, mode: Mode) -> Result<(Ordinal, UpperFormula)> {
    let ks = alpha_exponents(alpha)?;
    match mode {
        Mode::Finseqeq => {
            let mut prod = Ordinal::one();
            for &k in &ks {
                prod = prod.nat_mul(&fg(k, beta)?.g);
            }
            Ok((prod, UpperFormula::Product))
        }
        Mode::Finseq => {
            let plain = prefix_sum(&ks, beta)?;
            match refined(&ks, beta)? {
                Some(r) if r < plain => Ok((r, UpperFormula::Refined)),
                Some(r) if r == plain => Ok((r, UpperFormula::Refined)),
                _ => Ok((plain, UpperFormula::PrefixSum)),
            }
        }
    }
}

/// Upper bound on `o` of sequences of length `< α` (or `= α`) over a
/// well-quasi-order of type `β`; the least of the applicable formulas.
pub fn upper_alpha(alpha: &Ordinal, beta: &Ordinal, mode: Mode) -> Result<Ordinal> {
    Ok(upper_alpha_detail(alpha, beta, mode)?.0)
}

/// The lower-bound function: `u(0) = 1`, `u(β) = h(-1 + 2^{β-1})` at
/// successors and `ω^{ω^{2^β}}` at limits.
pub fn u_fun(beta: &Ordinal) -> Result<Ordinal> {
    if beta.is_zero() {
        return Ok(Ordinal::one());
    }
    match beta.successor_split() {
        (true, Some(pred)) => Ok(h_fun(&pred.checked_two_pow()?.minus_one_plus()?)),
        _ => Ok(Ordinal::omega_pow(Ordinal::omega_pow(beta.checked_two_pow()?))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Ordinal,
    /// The value is known to equal the true maximum over all `X` of type `β`.
    pub exact: bool,
}

/// Lower bounds for `α = ω²` (all sequences) and `α = ω` (indecomposable).
pub fn lower_report(alpha: &Ordinal, beta: &Ordinal) -> Result<LowerBound> {
    let w = Ordinal::omega();
    if *alpha == Ordinal::omega_pow(Ordinal::from(2)) {
        return Ok(LowerBound {
            value: u_fun(beta)?,
            exact: false,
        });
    }
    if *alpha != w {
        return Err(Error::Unsupported(format!("no lower bound is known for alpha = {alpha}")));
    }
    match beta.successor_split() {
        (true, Some(pred)) => Ok(LowerBound {
            value: pred.checked_two_pow()?.minus_one_plus()?,
            exact: false,
        }),
        _ if beta.is_zero() => Err(Error::invalid("the indecomposable lower bound needs beta > 0")),
        _ => Ok(LowerBound {
            value: beta.checked_two_pow()?.minus_one_plus()?,
            exact: true,
        }),
    }
}

/// All bounds applicable to a query `(α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub alpha: Ordinal,
    pub beta: Ordinal,
    pub upper_finseq: Ordinal,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_finseqeq: Option<Ordinal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_indec: Option<Ordinal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_finseq: Option<Ordinal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_indec: Option<Ordinal>,
    pub provenance: BTreeMap<String, String>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn report(alpha: &Ordinal, beta: &Ordinal) -> Result<BoundReport> {
    let mut prov = BTreeMap::new();
    let (upper_finseq, how) = upper_alpha_detail(alpha, beta, Mode::Finseq)?;
    let mut r = BoundReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        upper_finseq,
        upper_finseqeq: None,
        upper_indec: None,
        lower_finseq: None,
        lower_indec: None,
        provenance: BTreeMap::new(),
    };
    if alpha.is_power_of_omega() {
        let k = alpha_exponents(alpha)?[0];
        let u = upper_omega_k(k, beta)?;
        prov.insert("upper_finseq".into(), "h(q_k(beta)) bound for length below w^k".into());
        prov.insert("upper_finseqeq".into(), "g_k(beta) = h(q_k(beta)) (x) p_k(beta)".into());
        prov.insert("upper_indec".into(), "p_k(beta) = -1 + 2^q_k(beta)".into());
        r.upper_finseq = u.finseq;
        r.upper_finseqeq = Some(u.finseqeq);
        r.upper_indec = Some(u.indec);
    } else {
        prov.insert("upper_finseq".into(), how.describe().into());
    }
    if *alpha == Ordinal::omega_pow(Ordinal::from(2)) {
        r.lower_finseq = Some(lower_report(alpha, beta)?.value);
        prov.insert("lower_finseq".into(), "u(beta), realized by X = H_beta".into());
    }
    if *alpha == Ordinal::omega() && !beta.is_zero() {
        let lo = lower_report(alpha, beta)?;
        let note = if lo.exact {
            "-1 + 2^beta at limit beta; equals the upper bound"
        } else {
            "-1 + 2^(beta-1) at successor beta, by peeling a maximal element"
        };
        prov.insert("lower_indec".into(), note.into());
        r.lower_indec = Some(lo.value);
    }
    if let Some(lo) = &r.lower_finseq {
        if *lo > r.upper_finseq {
            return Err(Error::Invariant(format!("lower bound {lo} exceeds upper bound {}", r.upper_finseq)));
        }
    }
    if let (Some(lo), Some(up)) = (&r.lower_indec, &r.upper_indec) {
        if lo > up {
            return Err(Error::Invariant(format!("lower bound {lo} exceeds upper bound {up}")));
        }
    }
    r.provenance = prov;
    Ok(r)
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
    fn higman_cases() {
        assert_eq!(h_fun(&n(0)), n(1));
        assert_eq!(h_fun(&n(2)), wp(w()));
        assert_eq!(h_fun(&w()), wp(wp(w())));
        assert_eq!(h_fun(&n(1)), w());
    }

    #[test]
    fn pq_examples() {
        let b = wp(n(3)).ord_add(&n(1));
        assert_eq!(pq(1, &b).unwrap(), (b.two_pow().minus_one_plus().unwrap(), b.clone()));
        assert_eq!(pq(2, &n(2)).unwrap(), (n(31), n(5)));
        assert_eq!(pq(0, &w()).unwrap(), (w(), n(0)));
    }

    #[test]
    fn fg_examples() {
        let x = fg(1, &n(2)).unwrap();
        assert_eq!(x.f, wp(w()));
        assert_eq!(x.g, Ordinal::term(w(), 3u32));
        assert_eq!(x.p_plus, n(4));
        assert_eq!(x.g_plus, Ordinal::term(w(), 4u32));

        let b = w().successor();
        let x = fg(0, &b).unwrap();
        assert_eq!((x.f, x.g.clone(), x.p_plus.clone()), (n(1), b.clone(), b.clone()));
        assert_eq!(x.g_plus, b);

        let x = fg(1, &w()).unwrap();
        assert_eq!(x.f, wp(wp(w())));
        assert_eq!(x.g, wp(wp(w()).ord_add(&n(1))));
    }

    #[test]
    fn finite_beta_stays_in_finite_clause() {
        for b in 1..5 {
            let (_, q) = pq(2, &n(b)).unwrap();
            assert!(q.is_finite());
            let f = upper_omega_k(2, &n(b)).unwrap().finseq;
            let q = q.to_u64().unwrap();
            assert_eq!(f, wp(wp(n(q - 1))));
        }
    }

    #[test]
    fn upper_alpha_examples() {
        let a = w().successor();
        assert_eq!(upper_alpha(&a, &n(2), Mode::Finseq).unwrap(), Ordinal::term(w(), 4u32));
        let b = wp(n(3));
        assert_eq!(upper_alpha(&w(), &b, Mode::Finseq).unwrap(), h_fun(&b));
        let g = fg(1, &n(1)).unwrap().g;
        assert_eq!(
            upper_alpha(&Ordinal::term(n(1), 2u32), &n(1), Mode::Finseqeq).unwrap(),
            g.nat_mul(&g)
        );
        assert!(upper_alpha(&wp(w()), &n(2), Mode::Finseq).is_err());
        assert!(upper_alpha(&n(0), &n(2), Mode::Finseq).is_err());
    }

    #[test]
    fn u_examples() {
        assert_eq!(u_fun(&n(0)).unwrap(), n(1));
        assert_eq!(u_fun(&n(3)).unwrap(), wp(wp(n(2))));
        assert_eq!(u_fun(&w()).unwrap(), wp(wp(w())));
        assert_eq!(u_fun(&n(2)).unwrap(), w());
    }

    #[test]
    fn lower_examples() {
        let w2 = wp(n(2));
        assert_eq!(lower_report(&w2, &n(0)).unwrap().value, n(1));
        assert_eq!(lower_report(&w2, &w().successor()).unwrap().value, wp(wp(w())));
        let lo = lower_report(&w(), &w()).unwrap();
        assert_eq!(lo.value, w());
        assert!(lo.exact);
        assert!(lower_report(&w(), &n(0)).is_err());
        assert!(lower_report(&wp(n(3)), &n(2)).is_err());
    }

    #[test]
    fn report_examples() {
        let r = report(&wp(n(2)), &n(2)).unwrap();
        assert_eq!(r.upper_finseq, wp(wp(n(4))));
        assert_eq!(r.lower_finseq, Some(u_fun(&n(2)).unwrap()));

        let r = report(&w().successor(), &n(2)).unwrap();
        assert_eq!(r.upper_finseq, Ordinal::term(w(), 4u32));
        assert_eq!(r.lower_finseq, None);
        assert_eq!(r.provenance["upper_finseq"], "refined finite-part bound");
        assert!(r.to_json().contains("\"upper_finseq\": \"w^w*4\""));

        let r = report(&w(), &n(3)).unwrap();
        assert_eq!(r.upper_finseq, h_fun(&n(3)));
        assert_eq!(r.lower_indec, Some(n(3)));
    }
}
