use proptest::prelude::*;

use codepth::classify::{binomial, classify_from_invariants, InvariantBundle, RingClass};
use codepth::field::{Field, PrimeField, Rationals};
use codepth::groebner::buchberger;
use codepth::poly::{Monomial, MonomialOrder, PolyRing, Polynomial, Ring};
use codepth::series::RationalSeries;

fn term_list() -> impl Strategy<Value = Vec<(i64, [u16; 3])>> {
    prop::collection::vec((-4i64..=4, [0u16..3, 0u16..3, 0u16..3]), 0..5)
}

fn build<F: Field>(ring: &Ring<F>, terms: &[(i64, [u16; 3])]) -> Polynomial<F> {
    let f = ring.field();
    Polynomial::from_terms(
        ring,
        terms.iter().map(|(c, e)| (f.from_i64(*c), Monomial::new(e.to_vec()))),
    )
}

fn gf7() -> Ring<PrimeField> {
    PolyRing::new(PrimeField::new(7).unwrap(), ["x", "y", "z"], MonomialOrder::DegRevLex)
}

fn qq() -> Ring<Rationals> {
    PolyRing::new(Rationals, ["x", "y", "z"], MonomialOrder::DegRevLex)
}

fn mul_poly(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_over_q(a in term_list(), b in term_list(), c in term_list()) {
        let r = qq();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&r), a.clone());
    }

    #[test]
    fn ring_axioms_over_f7(a in term_list(), b in term_list(), c in term_list()) {
        let r = gf7();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        // Frobenius: (Σ c·m)^7 = Σ c·m^7 since c^7 = c in F_7.
        let frobenius = Polynomial::from_terms(
            &r,
            a.terms().iter().map(|t| (t.coeff, Monomial::new(t.mono.exps().iter().map(|e| e * 7).collect()))),
        );
        prop_assert_eq!(a.pow(7), frobenius);
    }

    #[test]
    fn normal_form_is_idempotent(gens in prop::collection::vec(term_list(), 1..4), f in term_list(), g in term_list()) {
        let r = gf7();
        let gens: Vec<_> = gens.iter().map(|t| build(&r, t)).collect();
        let gb = buchberger(&r, &gens).unwrap();
        prop_assert!(gb.satisfies_buchberger_criterion());
        let f = build(&r, &f);
        let nf = gb.normal_form(&f);
        prop_assert_eq!(gb.normal_form(&nf), nf.clone());
        prop_assert!(gb.contains(&(&f - &nf)));
        for p in &gens {
            prop_assert!(gb.contains(p));
            prop_assert!(gb.contains(&(p * &build(&r, &g))));
        }
        for lm in nf.terms().iter().map(|t| &t.mono) {
            prop_assert!(gb.leading_monomials().iter().all(|m| !m.divides(lm)));
        }
    }

    #[test]
    fn reduction_keeps_the_series(
        num in prop::collection::vec(-3i64..=3, 1..4),
        den_tail in prop::collection::vec(-2i64..=2, 0..3),
        factor in -3i64..=3,
        shift in 0u32..3,
    ) {
        let mut den = vec![1];
        den.extend(den_tail);
        let common = [1, factor];
        let s = RationalSeries::new(shift, mul_poly(&num, &common), mul_poly(&den, &common));
        let plain = RationalSeries::new(shift, num, den);
        prop_assert_eq!(s.reduced().expand(12), plain.expand(12));
        prop_assert_eq!(s.expand(12), plain.expand(12));
        prop_assert!(s.same_function(&plain));
        prop_assert!(s.reduced().denominator.len() <= plain.denominator.len());
    }

    #[test]
    fn classifier_is_total(
        c in 0u32..6, e in 0u32..9, h in 0u32..4, l in 0i64..12, n in 1u64..8,
        betas in prop::array::uniform4(prop::option::of(0u64..400)),
        mus in prop::array::uniform2(prop::option::of(0u64..60)),
    ) {
        let b = InvariantBundle {
            c, e: e.max(c), h, l, n, m: l as u64 + n,
            beta2: betas[0], beta3: betas[1], beta4: betas[2], beta5: betas[3],
            mu_e_minus_2: mus[0], mu_e_minus_1: mus[1],
        };
        // Any outcome is fine as long as it is a value, not a panic.
        let _ = classify_from_invariants(&b);
    }

    #[test]
    fn canonical_invariants_round_trip(
        pick in 0usize..7, r in 2u32..6, e in 3u32..8, l in 1i64..8, n in 2u64..6, beta2 in 30u64..60,
    ) {
        let class = [
            RingClass::T,
            RingClass::B,
            RingClass::G(r),
            RingClass::H(0, 0),
            RingClass::H(1, 0),
            RingClass::H(3, 1),
            RingClass::H(2, 4),
        ][pick];
        let pqr = class.canonical_pqr().unwrap();
        let (ei, ni, b2) = (e as i64, n as i64, beta2 as i64);
        let b3 = ni + l * ei + b2 + binomial(ei - 1, 3) - pqr.p;
        let b4 = (ni - pqr.p) * ei + l * b2 + b3 + binomial(ei - 1, 4) - pqr.q;
        let mu2 = l + ni - pqr.r;
        let mu1 = if class == RingClass::T { mu2 + l * ni - 2 } else { mu2 + l * ni };
        prop_assume!(b3 >= 0 && b4 >= 0 && mu2 >= 0 && mu1 >= 0);
        let b = InvariantBundle {
            c: 3, e, h: 1, l, n, m: l as u64 + n,
            beta2: Some(beta2), beta3: Some(b3 as u64), beta4: Some(b4 as u64), beta5: None,
            mu_e_minus_2: Some(mu2 as u64), mu_e_minus_1: Some(mu1 as u64),
        };
        prop_assert_eq!(classify_from_invariants(&b).unwrap(), class);
    }

    #[test]
    fn class_strings_parse_back(c in 0u32..4, r in 0u32..9, p in 0u32..5, q in 0u32..9) {
        for class in [RingClass::C(c), RingClass::G(r), RingClass::H(p, q), RingClass::S, RingClass::T, RingClass::B] {
            prop_assert_eq!(class.to_string().parse::<RingClass>().unwrap(), class);
        }
    }
}
