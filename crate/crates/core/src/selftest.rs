//! Light randomized sweeps over the library, one suite per module.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::bounds::{lower_report, report, upper_omega_k};
use crate::canon::{leq_pk, phi, phi_witness};
use crate::error::Result;
use crate::gen;
use crate::lower::{extract_maximals, leq_pow_word, psi_star, PowElem};
use crate::ordinal::Ordinal;
use crate::syntax::parse_ordinal;
use crate::words::{embeds_exact, find_embedding, unfold_oracle, witness_check};
use crate::wqo::{enumerate_elements, leq_h, o_eval, HEmbedding, WpoElem, WpoTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    passed: usize,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { passed: 0, failed: 0 }
    }

    fn record(&mut self, outcome: Result<bool>) {
        match outcome {
            Ok(true) => self.passed += 1,
            _ => self.failed += 1,
        }
    }

    fn finish(self, name: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            passed: self.passed,
            failed: self.failed,
        }
    }
}

/// Runs every suite from `seed`.
pub fn run(seed: u64) -> Vec<SuiteReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    vec![
        ordinals(&mut rng),
        words(&mut rng),
        canon(&mut rng),
        lower(&mut rng),
        hfamily(&mut rng),
        bounds(&mut rng),
    ]
}

fn ordinals(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..300 {
        let a = gen::ordinal(rng, 3, 3, 4);
        let b = gen::ordinal(rng, 3, 3, 4);
        let c = gen::ordinal(rng, 3, 3, 4);
        t.record(Ok(a.nat_add(&b) == b.nat_add(&a)));
        t.record(Ok(a.nat_mul(&b.nat_add(&c)) == a.nat_mul(&b).nat_add(&a.nat_mul(&c))));
        t.record(Ok(a.ord_add(&b).ord_add(&c) == a.ord_add(&b.ord_add(&c))));
        t.record(Ok(a.ord_add(&b).two_pow() == a.two_pow().ord_mul(&b.two_pow())));
        t.record(parse_ordinal(&a.to_string()).map(|x| x == a));
    }
    t.finish("ordinal")
}

fn words(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..150 {
        let n = rng.gen_range(1..=3);
        let p = gen::poset(rng, n, 0.3);
        let s = gen::word(rng, n, 2, 3);
        let w = gen::word(rng, n, 2, 3);
        let outcome = (|| -> Result<bool> {
            let verdict = embeds_exact(&p, &s, &w)?;
            let found = find_embedding(&p, &s, &w)?;
            if verdict != found.is_some() {
                return Ok(false);
            }
            match found {
                Some(wit) => Ok(witness_check(&p, &s, &w, &wit)? && unfold_oracle(&p, &s, &w, 3)?),
                None => Ok(true),
            }
        })();
        t.record(outcome);
    }
    t.finish("words")
}

fn canon(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..150 {
        let n = rng.gen_range(1..=3);
        let p = gen::poset(rng, n, 0.3);
        let k = rng.gen_range(0..=2);
        let (x, y) = gen::pk_pair(rng, &p, k, 2);
        let outcome = (|| -> Result<bool> {
            if !leq_pk(&p, &x, &y) {
                return Ok(false);
            }
            let wit = phi_witness(&p, k, &x, &y)?;
            witness_check(&p, &phi(k, &x)?, &phi(k, &y)?, &wit)
        })();
        t.record(outcome);
    }
    t.finish("canon")
}

fn lower(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..5 {
        let ambient = WpoTerm::base(gen::partial_order(rng, 4, 0.4));
        let prepared = extract_maximals(&ambient, 1).and_then(|d| d.alphabet().map(|a| (d, a)));
        let Ok((d, a)) = prepared else {
            t.record(Ok(false));
            continue;
        };
        let random_word = |rng: &mut StdRng| -> Vec<PowElem> {
            let len = rng.gen_range(0..=3);
            (0..len)
                .map(|_| {
                    let m = rng.gen_range(1..=a.rest.len());
                    PowElem::atoms(a.rest.choose_multiple(rng, m).copied())
                })
                .collect()
        };
        for _ in 0..20 {
            let w = random_word(rng);
            let v = random_word(rng);
            let outcome = (|| -> Result<bool> {
                let image = embeds_exact(&a.poset, &psi_star(1, &d, &a, &w)?, &psi_star(1, &d, &a, &v)?)?;
                Ok(image == leq_pow_word(&a.poset, &w, &v))
            })();
            t.record(outcome);
        }
    }
    t.finish("lower")
}

fn hfamily(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..10 {
        let b = gen::ordinal_below_ww(rng, 2, 2, 3);
        let b2 = b.nat_add(&gen::ordinal(rng, 2, 2, 2));
        t.record(o_eval(&WpoTerm::H(b.clone())).map(|o| o.value == b));
        let outcome = (|| -> Result<bool> {
            let f = HEmbedding::new(b.clone(), b2.clone())?;
            let xs: Vec<_> = enumerate_elements(&WpoTerm::H(b.clone()), 8)?
                .elements
                .into_iter()
                .filter_map(|e| match e {
                    WpoElem::H(h) => Some(h),
                    _ => None,
                })
                .collect();
            for x in &xs {
                for y in &xs {
                    if leq_h(&b, x, y)? != leq_h(&b2, &f.apply(x)?, &f.apply(y)?)? {
                        return Ok(false);
                    }
                }
            }
            Ok(!xs.is_empty())
        })();
        t.record(outcome);
    }
    t.finish("hfamily")
}

fn bounds(rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for _ in 0..30 {
        let beta = gen::ordinal_below_ww(rng, 2, 2, 3);
        let outcome = (|| -> Result<bool> {
            let low = lower_report(&Ordinal::omega().nat_mul(&Ordinal::omega()), &beta)?;
            let up = upper_omega_k(2, &beta)?;
            report(&Ordinal::from(3u64), &beta)?;
            Ok(low.value <= up.finseq)
        })();
        t.record(outcome);
    }
    t.finish("bounds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for r in run(7) {
            assert!(r.ok(), "{r:?}");
            assert!(r.passed > 0, "{r:?}");
        }
    }
}
