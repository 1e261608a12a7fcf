use std::cmp::Ordering;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finseq::bounds::{h_fun, lower_report, upper_alpha, upper_omega_k, Mode};
use finseq::canon::{leq_pk, phi};
use finseq::gen;
use finseq::ordinal::Term;
use finseq::syntax::{parse_ordinal, parse_word};
use finseq::words::{
    canonical_omega, embeds_exact, equivalent, identity_witness, omega_of_set, witness_check, WordTerm,
};
use finseq::wqo::{enumerate_elements, leq_elem, o_eval, PosetSpec, WpoTerm};
use finseq::Ordinal;

fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..6).prop_map(Ordinal::from);
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop::collection::vec((inner, 1u64..5), 0..4)
            .prop_map(|ts| ts.into_iter().fold(Ordinal::zero(), |acc, (e, c)| acc.nat_add(&Ordinal::term(e, c))))
    })
}

/// Comparison of Cantor normal forms term by term.
fn cnf_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    fn term_cmp(x: &Term, y: &Term) -> Ordering {
        cnf_cmp(&x.exp, &y.exp).then_with(|| x.coeff.cmp(&y.coeff))
    }
    let (ta, tb) = (a.terms(), b.terms());
    for (x, y) in ta.iter().zip(tb) {
        match term_cmp(x, y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    ta.len().cmp(&tb.len())
}

fn arb_word(letters: usize, level: u32) -> impl Strategy<Value = WordTerm> {
    let leaf = (0..letters).prop_map(WordTerm::Lit);
    leaf.prop_recursive(level, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(WordTerm::cat),
            inner.prop_map(WordTerm::omega),
        ]
    })
    .prop_filter("level at most 2", |w| w.level() <= 2)
}

fn chain3() -> PosetSpec {
    PosetSpec::chain(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn order_matches_termwise_comparison(a in arb_ordinal(), b in arb_ordinal()) {
        prop_assert_eq!(a.cmp(&b), cnf_cmp(&a, &b));
    }

    #[test]
    fn ordinary_sum_laws(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        prop_assert_eq!(a.ord_add(&b).ord_add(&c), a.ord_add(&b.ord_add(&c)));
        prop_assert!(a.ord_add(&b) <= a.nat_add(&b));
        prop_assert!(a.ord_add(&b) >= b);
        prop_assert_eq!(a.ord_mul(&b.ord_add(&c)), a.ord_mul(&b).ord_add(&a.ord_mul(&c)));
    }

    #[test]
    fn product_associates(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        prop_assert_eq!(a.ord_mul(&b).ord_mul(&c), a.ord_mul(&b.ord_mul(&c)));
    }

    #[test]
    fn successor_and_predecessor(a in arb_ordinal()) {
        let s = a.successor();
        prop_assert_eq!(s.successor_split(), (true, Some(a.clone())));
        prop_assert_eq!(Ordinal::one().ord_add(&a).minus_one_plus().unwrap(), a.clone());
        prop_assert!(a.two_pow() >= a && !a.two_pow().is_zero());
        prop_assert_eq!(a.successor().two_pow(), a.two_pow().ord_mul(&Ordinal::from(2u64)));
    }

    #[test]
    fn printing_round_trips(a in arb_ordinal()) {
        prop_assert_eq!(parse_ordinal(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn h_is_monotone(a in arb_ordinal(), b in arb_ordinal()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(h_fun(&lo) <= h_fun(&hi));
    }

    #[test]
    fn word_terms_round_trip(w in arb_word(3, 3)) {
        let p = chain3();
        let text = w.display(&p).to_string();
        prop_assert_eq!(parse_word(&text, &p).unwrap(), w.normalize());
    }

    #[test]
    fn embedding_is_reflexive_and_monotone(s in arb_word(3, 3), t in arb_word(3, 3)) {
        let p = chain3();
        prop_assert!(embeds_exact(&p, &s, &s).unwrap());
        prop_assert!(witness_check(&p, &s, &s, &identity_witness(&s)).unwrap());
        let st = WordTerm::cat(vec![s.clone(), t.clone()]);
        prop_assert!(embeds_exact(&p, &s, &st).unwrap());
        prop_assert!(embeds_exact(&p, &t, &st).unwrap());
        for n in 1..3 {
            prop_assert!(embeds_exact(&p, &s.unfold(n), &s).unwrap());
        }
    }

    #[test]
    fn embedding_is_transitive(a in arb_word(2, 3), b in arb_word(2, 3), c in arb_word(2, 3)) {
        let p = PosetSpec::antichain(2);
        if embeds_exact(&p, &a, &b).unwrap() && embeds_exact(&p, &b, &c).unwrap() {
            prop_assert!(embeds_exact(&p, &a, &c).unwrap());
        }
    }

    #[test]
    fn canonical_omega_is_equivalent(u in prop::collection::vec(0usize..3, 0..4), v in prop::collection::vec(0usize..3, 1..4)) {
        let p = PosetSpec::antichain(3);
        let w = WordTerm::cat(vec![WordTerm::from_letters(&u), WordTerm::omega(WordTerm::from_letters(&v))]);
        let (prefix, tail) = canonical_omega(&w).unwrap();
        let c = WordTerm::cat(vec![prefix, omega_of_set(&tail)]);
        prop_assert!(equivalent(&p, &w, &c).unwrap());
    }
}

#[test]
fn phi_is_monotone_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..=2 {
        for _ in 0..100 {
            let p = gen::poset(&mut rng, 3, 0.3);
            let (a, b) = gen::pk_pair(&mut rng, &p, k, 2);
            assert!(leq_pk(&p, &a, &b));
            assert!(embeds_exact(&p, &phi(k, &a).unwrap(), &phi(k, &b).unwrap()).unwrap());
        }
    }
}

#[test]
fn order_terms_are_quasi_orders() {
    let terms = [
        "Star(Base(chain2))",
        "Pfin(Base(antichain2))",
        "LexProduct(Base(chain2), Base(antichain2))",
        "OrderedSum(H(3), H(w))",
        "H(w^2 + w)",
    ];
    for text in terms {
        let t = finseq::syntax::parse_wpo_term(text).unwrap();
        let xs = enumerate_elements(&t, 12).unwrap().elements;
        for x in &xs {
            assert!(leq_elem(&t, x, x).unwrap(), "{text}");
            for y in &xs {
                for z in &xs {
                    if leq_elem(&t, x, y).unwrap() && leq_elem(&t, y, z).unwrap() {
                        assert!(leq_elem(&t, x, z).unwrap(), "{text}");
                    }
                }
            }
        }
    }
}

#[test]
fn finite_word_types_follow_h() {
    for n in 1..=5 {
        let t = WpoTerm::Star(Box::new(WpoTerm::base(PosetSpec::antichain(n))));
        assert_eq!(o_eval(&t).unwrap().value, h_fun(&Ordinal::from(n as u64)));
    }
}

#[test]
fn bounds_are_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w2 = parse_ordinal("w^2").unwrap();
    for _ in 0..100 {
        let beta = gen::ordinal_below_ww(&mut rng, 2, 2, 3);
        let up = upper_omega_k(2, &beta).unwrap();
        assert!(lower_report(&w2, &beta).unwrap().value <= up.finseq);
        assert!(up.finseq <= up.finseqeq);
        assert_eq!(upper_alpha(&w2, &beta, Mode::Finseq).unwrap(), up.finseq);
        let up1 = upper_omega_k(1, &beta).unwrap();
        assert!(up1.finseq <= up.finseq);
    }
}

#[test]
fn generated_word_terms_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = PosetSpec::antichain(4);
    for _ in 0..1000 {
        let w = gen::word(&mut rng, 4, 2, 4);
        let text = w.display(&p).to_string();
        assert_eq!(parse_word(&text, &p).unwrap(), w, "{text}");
    }
}
