use std::sync::OnceLock;

use proptest::prelude::*;

use padic_albanese::kz_local::{solve_local_kz, LogSeries};
use padic_albanese::ncseries::{GroupElement, LieElement};
use padic_albanese::overconvergent::MLFunction;
use padic_albanese::padics::{Branch, PadicNumber};
use padic_albanese::words::{lyndon_words, shuffle, witt_rank, Word};

const P: u64 = 7;
const N: i64 = 20;

fn q(x: i64) -> PadicNumber {
    PadicNumber::from_int(P, x, N)
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-100_000i64..100_000).prop_filter("nonzero", |x| *x != 0)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    (0..Word::count_up_to(max)).prop_map(Word::from_index)
}

fn zero_disk() -> &'static LogSeries {
    static G: OnceLock<LogSeries> = OnceLock::new();
    G.get_or_init(|| solve_local_kz(P, 4, 60, N).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultrametric_inequality(x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000, k in -3i64..3) {
        let a = q(x).shift(k);
        let b = q(y);
        let s = &a + &b;
        prop_assert!(s.valuation() >= a.valuation().min(b.valuation()));
        if a.valuation() != b.valuation() {
            prop_assert_eq!(s.valuation(), a.valuation().min(b.valuation()));
        }
    }

    #[test]
    fn rational_arithmetic_matches_integers(x in nonzero(), y in nonzero()) {
        let prod = &q(x) * &q(y);
        prop_assert!(prod.agreement(&q(x * y)) >= N);
        let back = prod.checked_div(&q(y)).unwrap();
        prop_assert!(back.agreement(&q(x)) >= N - 2 * padic_albanese::padics::vp_int(P, y));
    }

    #[test]
    fn log_is_a_homomorphism(x in nonzero(), y in nonzero(), a in -50i64..50) {
        let b = Branch::new(q(a));
        let lhs = (&q(x) * &q(y)).log(&b).unwrap();
        let rhs = &q(x).log(&b).unwrap() + &q(y).log(&b).unwrap();
        let vx = padic_albanese::padics::vp_int(P, x);
        let vy = padic_albanese::padics::vp_int(P, y);
        prop_assert!(lhs.agreement(&rhs) >= N - vx - vy - 1);
    }

    #[test]
    fn branch_difference_is_valuation(x in nonzero(), a in -50i64..50, b in -50i64..50) {
        let la = q(x).log(&Branch::new(q(a))).unwrap();
        let lb = q(x).log(&Branch::new(q(b))).unwrap();
        let v = padic_albanese::padics::vp_int(P, x);
        prop_assert!((&la - &lb).agreement(&q((a - b) * v)) >= N - v - 1);
    }

    #[test]
    fn exp_inverts_log_on_one_units(t in -100_000i64..100_000) {
        let x = &PadicNumber::one(P, N) + &q(t).shift(1);
        let back = x.log(&Branch::standard(P)).unwrap().exp().unwrap();
        prop_assert!(back.agreement(&x) >= N - 1);
    }

    #[test]
    fn teichmuller_is_fixed_by_frobenius(x in 1i64..10_000) {
        prop_assume!(x % 7 != 0);
        let w = q(x).teichmuller().unwrap();
        prop_assert!(w.pow(P).agreement(&w) >= N);
        prop_assert_eq!(w.residue_mod_p(), q(x).residue_mod_p());
    }

    #[test]
    fn shuffle_is_commutative(u in word(4), v in word(4)) {
        let uv = shuffle(&u, &v);
        prop_assert_eq!(&uv, &shuffle(&v, &u));
        let total: u64 = uv.values().sum();
        let (m, n) = (u.len() as u64, v.len() as u64);
        let binom = (1..=m).fold(1u64, |acc, i| acc * (n + i) / i);
        prop_assert_eq!(total, binom);
    }

    #[test]
    fn series_product_is_associative(a in prop::collection::vec(-50i64..50, 15),
                                     b in prop::collection::vec(-50i64..50, 15),
                                     c in prop::collection::vec(-50i64..50, 15)) {
        let mk = |v: &[i64]| GroupElement::from_dense(P, 3, N, v.iter().map(|&x| q(x)).collect()).unwrap();
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agreement(&r).unwrap() >= N);
    }

    #[test]
    fn exp_of_lie_element_is_grouplike(coeffs in prop::collection::vec(-50i64..50, 8)) {
        let basis: Vec<Word> = (1..=4).flat_map(lyndon_words).collect();
        prop_assert_eq!(basis.len(), 8);
        let mut x = GroupElement::zero(P, 4, N);
        for (w, c) in basis.iter().zip(&coeffs) {
            let l = LieElement::lyndon_bracket(w, P, 4, N).unwrap();
            x = x.add(&l.as_series().scale(&q(*c).shift(1))).unwrap();
        }
        let g = LieElement::new(x.clone()).unwrap().exp().unwrap();
        prop_assert!(g.is_grouplike(N - 2).is_grouplike);
        prop_assert!(g.log().unwrap().as_series().agreement(&x).unwrap() >= N - 2);
        let inv = g.inverse().unwrap();
        prop_assert!(g.mul(&inv).unwrap().agreement(&GroupElement::one(P, 4, N)).unwrap() >= N - 2);
    }

    #[test]
    fn ml_evaluation_is_multiplicative(a in prop::collection::vec(-50i64..50, 7),
                                       b in prop::collection::vec(-50i64..50, 7),
                                       z in -1000i64..1000) {
        prop_assume!((z - 1) % 7 != 0);
        // degrees <= 3 in z and in 1/(z-1), order 6: products stay exact
        let pad = |v: &[i64], len: usize| {
            let mut c: Vec<PadicNumber> = v.iter().map(|&x| q(x)).collect();
            c.resize(len, PadicNumber::zero(P));
            c
        };
        let mk = |v: &[i64]| MLFunction::from_parts(P, pad(&v[..4], 7), pad(&v[4..], 6), N).unwrap();
        let (f, g) = (mk(&a), mk(&b));
        let z = q(z);
        let fg = f.mul(&g).unwrap().eval(&z).unwrap();
        let prod = &f.eval(&z).unwrap() * &g.eval(&z).unwrap();
        prop_assert!(fg.agreement(&prod) >= N);
        let sum = f.add(&g).unwrap().eval(&z).unwrap();
        prop_assert!(sum.agreement(&(&f.eval(&z).unwrap() + &g.eval(&z).unwrap())) >= N);
    }

    #[test]
    fn local_solution_is_grouplike(t in 1i64..2000) {
        prop_assume!(t % 7 != 0);
        let z = q(t).shift(1);
        let g = zero_disk().eval(&z, &Branch::standard(P)).unwrap();
        prop_assert!(g.is_grouplike(N - 3).is_grouplike);
    }
}

#[test]
fn witt_rank_counts_lyndon_words() {
    for n in 1..=10 {
        assert_eq!(lyndon_words(n).len() as u64, witt_rank(n as u32), "n = {n}");
    }
}
