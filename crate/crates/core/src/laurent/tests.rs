use super::*;
use proptest::prelude::*;

fn p(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

#[test]
fn normalize_examples() {
    assert_eq!(p("2t^-1 - 3t").normalize(), p("3t^2 - 2"));
    assert_eq!(p("t - 2").normalize(), p("t - 2"));
    assert!(LaurentPoly::zero().normalize().is_zero());
}

#[test]
fn spans() {
    assert_eq!(p("t - 2").degree_span(), Span::Finite(1));
    assert_eq!(p("t^2 + t^-2").degree_span(), Span::Finite(4));
    assert_eq!(LaurentPoly::zero().degree_span(), Span::Infinite);
}

#[test]
fn reductions() {
    let r = p("t - 2").reduce_mod(2).unwrap();
    assert_eq!(r.to_string(), "t");
    assert_eq!(r.degree_span(), Span::Finite(0));
    assert_eq!(p("2t^2 - 3t + 2").reduce_mod(2).unwrap().to_string(), "t");
    assert_eq!(p("t^2 - t + 1").reduce_mod(3).unwrap().to_string(), "t^2 + 2t + 1");
    assert_eq!(p("t").reduce_mod(4), Err(LaurentError::NotPrime(4)));
}

#[test]
fn factor_examples() {
    let f = factor_over_z(&p("t^2 - 3t + 2")).unwrap();
    assert_eq!(f.flat(), vec![p("t - 2"), p("t - 1")]);
    let f = factor_over_z(&p("2t^2 - 5t + 2")).unwrap();
    assert_eq!(f.flat(), vec![p("t - 2"), p("2t - 1")]);
    assert!(factor_over_z(&p("t^2 - t + 1")).unwrap().is_irreducible());
    assert_eq!(factor_over_z(&LaurentPoly::zero()), Err(LaurentError::ZeroPolynomial));
}

#[test]
fn factor_tracks_unit_content_and_multiplicity() {
    let f = p("-6t^-2 + 12t^-1 - 6");
    let fac = factor_over_z(&f).unwrap();
    assert_eq!(fac.sign, -1);
    assert_eq!(fac.shift, -2);
    assert_eq!(fac.content, int(6));
    assert_eq!(fac.factors, vec![(p("t - 1"), 2)]);
    assert_eq!(fac.expand(), f);
    assert!(factor_over_z(&p("5t^3")).unwrap().factors.is_empty());
}

#[test]
fn monic_both_ends() {
    assert!(p("t^2 - 3t + 1").is_monic_both_ends().unwrap());
    assert!(!p("2t - 3").is_monic_both_ends().unwrap());
    assert!(!p("t - 2").is_monic_both_ends().unwrap());
    assert_eq!(LaurentPoly::zero().is_monic_both_ends(), Err(LaurentError::ZeroPolynomial));
}

#[test]
fn symmetric_forms() {
    assert_eq!(p("2t^2 - 3t + 2").symmetric_form().unwrap(), vec![int(-3), int(2)]);
    assert_eq!(p("t^2 - t + 1").symmetric_form().unwrap(), vec![int(-1), int(1)]);
    assert_eq!(p("t - 2").symmetric_form(), Err(LaurentError::NotSymmetric));
    assert_eq!(p("t^2 - 1").symmetric_form(), Err(LaurentError::NotSymmetric));
    assert_eq!(p("1").symmetric_form().unwrap(), vec![int(1)]);
}

#[test]
fn gcd_and_evaluate() {
    assert_eq!(gcd_many(&[p("t^2 - 3t + 2"), p("t - 1")]).unwrap(), p("t - 1"));
    assert_eq!(gcd_many(&[LaurentPoly::zero(), p("t - 2")]).unwrap(), p("t - 2"));
    assert_eq!(gcd_many(&[LaurentPoly::zero()]), Err(LaurentError::AllZero));
    assert_eq!(gcd_many(&[p("4t^3 - 4t^2"), p("6t^-1 - 6")]).unwrap(), p("t - 1"));
    let one = BigRational::one();
    assert_eq!(p("t^2 - t + 1").evaluate(&one).unwrap(), one);
    let half = BigRational::new(int(1), int(2));
    assert_eq!(p("t^-1 + t").evaluate(&half).unwrap(), BigRational::new(int(5), int(2)));
    assert_eq!(p("t^-1").evaluate(&BigRational::zero()), Err(LaurentError::EvaluateAtZero));
}

#[test]
fn text_forms() {
    assert_eq!(p("t^-1 + 1 + t"), LaurentPoly::from_terms([(-1, int(1)), (0, int(1)), (1, int(1))]));
    assert_eq!(p("2,-5,2"), p("2t^2 - 5t + 2"));
    assert_eq!(p("3*t^(-2) - t"), LaurentPoly::from_terms([(-2, int(3)), (1, int(-1))]));
    assert_eq!(p("2t^2 - 5t + 2").to_string(), "2t^2 - 5t + 2");
    assert_eq!(p("-t^-1 + 1").to_string(), "1 - t^-1");
    assert_eq!(LaurentPoly::zero().to_string(), "0");
    assert!("t +".parse::<LaurentPoly>().is_err());
    assert!("x".parse::<LaurentPoly>().is_err());
    assert!("1,,2".parse::<LaurentPoly>().is_err());
}

#[test]
fn exact_division() {
    let f = p("2t^2 - 5t + 2").shift(-3);
    assert_eq!(f.div_exact(&p("2t^-1 - 1")).unwrap(), p("t^-2 - 2t^-1"));
    assert!(f.div_exact(&p("t + 1")).is_none());
}

/// Small-degree oracle: searches integer coefficient boxes for a factor of
/// degree one or two and peels factors off until none remain.
fn brute_force_factors(f: &LaurentPoly) -> Vec<LaurentPoly> {
    let f = f.normalize();
    let content = f.content();
    let mut rest = f.scale(&BigInt::one()).div_exact(&LaurentPoly::constant(content)).unwrap();
    let mut out = Vec::new();
    'outer: loop {
        let Span::Finite(d) = rest.degree_span() else { break };
        if d == 0 {
            break;
        }
        let lc = rest.leading_coeff().unwrap().clone();
        let tc = rest.trailing_coeff().unwrap().clone();
        let bound: i64 = 16 * rest.terms().map(|(_, c)| c.abs()).sum::<BigInt>().to_i64().unwrap();
        let divisors = |n: &BigInt| -> Vec<i64> {
            let n = n.abs().to_i64().unwrap();
            (1..=n).filter(|k| n % k == 0).flat_map(|k| [k, -k]).collect()
        };
        for deg in 1..=2u64 {
            if 2 * deg > d {
                break;
            }
            for a in divisors(&lc).into_iter().filter(|a| *a > 0) {
                for c in divisors(&tc) {
                    let mids: Vec<i64> = if deg == 1 { vec![0] } else { (-bound..=bound).collect() };
                    for b in mids {
                        let cand = if deg == 1 {
                            LaurentPoly::from_descending(&[a, c])
                        } else {
                            LaurentPoly::from_descending(&[a, b, c])
                        };
                        if cand.content() != BigInt::one() {
                            continue;
                        }
                        if let Some(q) = rest.div_exact(&cand) {
                            out.push(cand);
                            rest = q.normalize();
                            continue 'outer;
                        }
                    }
                }
            }
        }
        out.push(rest.normalize());
        break;
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

#[test]
fn main_factorizer_agrees_with_box_search() {
    let samples = [
        "6t^4 + 5t^3 - 38t^2 + 5t + 6",
        "t^4 - 10t^2 + 1",
        "t^4 + 4",
        "4t^4 - 1",
        "t^4 + t^3 + t^2 + t + 1",
        "2t^4 - 7t^3 + 9t^2 - 7t + 2",
        "t^3 - 2",
        "9t^4 - 6t^2 + 1",
        "t^4 - 3t^3 + 3t^2 - 3t + 2",
        "12t^3 - 4t^2 - 3t + 1",
    ];
    for s in samples {
        let f = p(s);
        let ours = factor_over_z(&f).unwrap();
        assert_eq!(ours.expand(), f, "{s}");
        assert_eq!(ours.flat(), brute_force_factors(&f), "{s}");
    }
}

#[test]
fn high_degree_products_round_trip() {
    let fs = [p("t^6 + t + 1"), p("3t^5 - 7t^2 + 20"), p("t^4 - 10t^2 + 1"), p("t^2 + 1")];
    let prod = fs.iter().fold(LaurentPoly::one(), |acc, f| &acc * f);
    let got = factor_over_z(&prod).unwrap();
    let mut want = fs.to_vec();
    want.sort_by(|a, b| a.canonical_cmp(b));
    assert_eq!(got.flat(), want);
}

fn small_poly(max_deg: usize, max_coeff: i64) -> impl Strategy<Value = LaurentPoly> {
    (prop::collection::vec(-max_coeff..=max_coeff, 1..=max_deg + 1), -3i64..=3)
        .prop_map(|(c, s)| LaurentPoly::from_ascending(&c).shift(s))
}

proptest! {
    #[test]
    fn normalize_idempotent_and_span_invariant(f in small_poly(5, 9), k in -4i64..=4, neg in any::<bool>()) {
        let n = f.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        let mut g = f.shift(k);
        if neg { g = -g; }
        prop_assert_eq!(g.degree_span(), f.degree_span());
        prop_assert_eq!(g.normalize(), n);
    }

    #[test]
    fn reduction_is_multiplicative(f in small_poly(4, 9), g in small_poly(4, 9), pi in 0usize..4) {
        let prime = [2u64, 3, 5, 7][pi];
        let lhs = (&f * &g).reduce_mod(prime).unwrap();
        let rhs = f.reduce_mod(prime).unwrap().mul(&g.reduce_mod(prime).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monic_both_ends_is_multiplicative(f in small_poly(4, 3), g in small_poly(4, 3)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!(
            (&f * &g).is_monic_both_ends().unwrap(),
            f.is_monic_both_ends().unwrap() && g.is_monic_both_ends().unwrap()
        );
    }

    #[test]
    fn unit_at_one_survives_every_prime(g in small_poly(6, 9), pi in 0usize..6, minus in any::<bool>()) {
        let target = if minus { -1 } else { 1 };
        let f = &g + &LaurentPoly::constant(BigInt::from(target) - g.value_at_one());
        prop_assert!(f.value_at_one().abs().is_one());
        let prime = [2u64, 3, 5, 7, 11, 13][pi];
        prop_assert!(!f.reduce_mod(prime).unwrap().is_zero());
    }

    #[test]
    fn factorization_expands_back(f in small_poly(6, 20)) {
        prop_assume!(!f.is_zero());
        let fac = factor_over_z(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        for (q, _) in &fac.factors {
            prop_assert_eq!(q.normalize(), q.clone());
            prop_assert!(q.content().is_one());
        }
    }

    #[test]
    fn small_degree_factorization_matches_oracle(f in small_poly(4, 6)) {
        prop_assume!(!f.is_zero());
        let ours = factor_over_z(&f).unwrap().flat();
        prop_assert_eq!(ours, brute_force_factors(&f));
    }
}
