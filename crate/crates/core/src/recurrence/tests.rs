use super::*;
use proptest::prelude::*;

fn ints(w: &SequenceWindow) -> Vec<i64> {
    w.integers().unwrap().iter().map(|v| v.to_i64().unwrap()).collect()
}

fn aux(c: &[i64]) -> AuxPolynomial {
    AuxPolynomial::from_i64(c).unwrap()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn construction() {
    assert_eq!(aux(&[-2, 5, -2]), aux(&[2, -5, 2]));
    assert_eq!(aux(&[2, -5, 2]).degree(), 2);
    assert_eq!(aux(&[1, -3, 1]).to_string(), aux(&[1, -3, 1]).to_laurent().to_string());
    assert_eq!(aux(&[4, 2, -6]).primitive(), aux(&[2, 1, -3]));
    assert_eq!(aux(&[2, 1, -3]).reciprocal(), aux(&[-3, 1, 2]));
    assert_eq!(AuxPolynomial::parse(" 1, -1,-1").unwrap(), aux(&[1, -1, -1]));
    for bad in [&[3][..], &[0, 1, 1], &[1, 1, 0], &[]] {
        assert_eq!(AuxPolynomial::from_i64(bad), Err(RecurrenceError::InvalidPolynomial));
    }
    assert!(AuxPolynomial::parse("1,x").is_err());
}

#[test]
fn verdicts() {
    assert!(has_integer_biinfinite(&aux(&[1, -1, -1])).answer);
    assert!(!has_integer_biinfinite(&aux(&[2, -5, 2])).answer);
    assert!(!has_integer_biinfinite(&aux(&[2, -3, 2])).answer);
    let v = has_integer_biinfinite(&aux(&[2, -6, 4]));
    assert_eq!(v.witness_factor, Some(LaurentPoly::from_descending(&[1, -1])));
}

#[test]
fn witness_windows() {
    let fib = witness_sequence(&aux(&[1, -1, -1]), -5, 5).unwrap();
    assert_eq!(fib.base, -5);
    assert_eq!(ints(&fib), vec![-8, 5, -3, 2, -1, 1, 0, 1, 1, 2, 3]);
    assert_eq!(ints(&witness_sequence(&aux(&[1, -3, 1]), 0, 4).unwrap()), vec![1, 0, -1, -3, -8]);
    assert_eq!(ints(&witness_sequence(&aux(&[1, -3, 2]), -3, 3).unwrap()), vec![1; 7]);
    // windows away from the seed
    assert_eq!(ints(&witness_sequence(&aux(&[1, -1, -1]), 3, 5).unwrap()), vec![1, 2, 3]);
    assert_eq!(ints(&witness_sequence(&aux(&[1, -1, -1]), -5, -4).unwrap()), vec![-8, 5]);
    assert_eq!(witness_sequence(&aux(&[2, -5, 2]), 0, 3), Err(RecurrenceError::NoWitness));
    assert_eq!(witness_sequence(&aux(&[1, -1, -1]), 2, 1), Err(RecurrenceError::EmptyRange { lo: 2, hi: 1 }));
}

#[test]
fn propagation() {
    let f = aux(&[2, -5, 2]);
    let seed = SequenceWindow::from_i64(0, &[1, 2]);
    let fwd = propagate(&f, &seed, Direction::Forward, 4).unwrap();
    assert_eq!(fwd.produced, [4, 8, 16, 32].map(|v| rat(v, 1)).to_vec());
    assert_eq!(fwd.first_non_integral, None);
    let back = propagate(&f, &seed, Direction::Backward, 1).unwrap();
    assert_eq!(back.produced, vec![rat(1, 2)]);
    assert_eq!(back.first_non_integral, Some(1));
    assert_eq!(back.window.base, -1);

    let halves = propagate(&aux(&[1, -2]), &SequenceWindow::from_i64(0, &[1]), Direction::Backward, 3).unwrap();
    assert_eq!(halves.produced, vec![rat(1, 2), rat(1, 4), rat(1, 8)]);
    assert_eq!(halves.integral, vec![false; 3]);
    assert_eq!(halves.window.values, vec![rat(1, 8), rat(1, 4), rat(1, 2), rat(1, 1)]);
    assert_eq!(
        propagate(&f, &SequenceWindow::from_i64(0, &[1]), Direction::Forward, 1),
        Err(RecurrenceError::SeedLength { got: 1, expected: 2 })
    );
}

#[test]
fn shift_factors() {
    let w = SequenceWindow::from_i64(0, &[1, 2, 4, 8, 16, 32]);
    let y = apply_shift_factor(&LaurentPoly::from_descending(&[1, -2]), &w).unwrap();
    assert_eq!((y.base, y.len()), (0, 5));
    assert!(y.is_zero());
    let y = apply_shift_factor(&LaurentPoly::monomial(1, -1), &w).unwrap();
    assert_eq!((y.base, ints(&y)), (1, vec![1, 2, 4, 8, 16, 32]));
    let shifted = SequenceWindow::from_i64(0, &[2, 3, 5, 9, 17, 33]);
    let y = apply_shift_factor(&LaurentPoly::from_descending(&[1, -2]), &shifted).unwrap();
    assert_eq!((y.base, ints(&y)), (0, vec![-1; 5]));
    assert_eq!(apply_shift_factor(&LaurentPoly::one(), &shifted).unwrap(), shifted);
    let ones = SequenceWindow::from_i64(-2, &[1; 4]);
    assert!(apply_shift_factor(&LaurentPoly::from_descending(&[1, -1]), &ones).unwrap().is_zero());
    let short = SequenceWindow::from_i64(0, &[1, 2]);
    assert_eq!(
        apply_shift_factor(&LaurentPoly::from_descending(&[1, 0, -2]), &short),
        Err(RecurrenceError::WindowTooShort { len: 2, need: 3 })
    );
}

#[test]
fn minimal_recurrences() {
    let pow2 = SequenceWindow::from_i64(0, &[1, 2, 4, 8, 16, 32, 64]);
    assert_eq!(minimal_recurrence(&pow2, 3).unwrap(), Some(aux(&[1, -2])));
    let naturals = SequenceWindow::from_i64(0, &[0, 1, 2, 3, 4, 5, 6]);
    assert_eq!(minimal_recurrence(&naturals, 3).unwrap(), Some(aux(&[1, -2, 1])));
    let fib = witness_sequence(&aux(&[1, -1, -1]), -5, 5).unwrap();
    assert_eq!(minimal_recurrence(&fib, 1).unwrap(), None);
    assert_eq!(minimal_recurrence(&fib, 2).unwrap(), Some(aux(&[1, -1, -1])));
    let halves = SequenceWindow { base: 0, values: vec![rat(1, 1), rat(3, 2), rat(9, 4), rat(27, 8), rat(81, 16)] };
    assert_eq!(minimal_recurrence(&halves, 2).unwrap(), Some(aux(&[2, -3])));
    assert_eq!(minimal_recurrence(&SequenceWindow::from_i64(0, &[0; 5]), 2).unwrap(), None);
    assert_eq!(
        minimal_recurrence(&SequenceWindow::from_i64(0, &[1, 2, 3, 4]), 2),
        Err(RecurrenceError::WindowTooShort { len: 4, need: 5 })
    );
}

#[test]
fn serialization() {
    let w = SequenceWindow { base: -1, values: vec![rat(1, 2), rat(3, 1)] };
    assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"base":-1,"values":["1/2",3]}"#);
}

/// Every integer seed in a small box hits a fraction within `steps` steps
/// in one of the two directions.
fn bounded_oracle_rejects(f: &AuxPolynomial, bound: i64, steps: usize) -> bool {
    let d = f.degree();
    let mut seed = vec![-bound; d];
    loop {
        if seed.iter().any(|&x| x != 0) {
            let w = SequenceWindow::from_i64(0, &seed);
            let fwd = propagate(f, &w, Direction::Forward, steps).unwrap();
            let back = propagate(f, &w, Direction::Backward, steps).unwrap();
            if fwd.first_non_integral.is_none() && back.first_non_integral.is_none() {
                return false;
            }
        }
        let Some(i) = seed.iter().position(|&x| x < bound) else { return true };
        seed[i] += 1;
        seed[..i].iter_mut().for_each(|x| *x = -bound);
    }
}

#[test]
fn small_oracle_agreement() {
    for a in 1..=3i64 {
        for b in -3..=3i64 {
            for c in [-3i64, -2, -1, 1, 2, 3] {
                let Ok(f) = AuxPolynomial::from_i64(&[a, b, c]) else { continue };
                if f.primitive() != f {
                    continue;
                }
                let verdict = has_integer_biinfinite(&f).answer;
                assert_eq!(verdict, !bounded_oracle_rejects(&f, 4, 12), "{f}");
            }
        }
    }
}

fn small_aux() -> impl Strategy<Value = AuxPolynomial> {
    (1usize..=3, 1i64..=4, prop::collection::vec(-4i64..=4, 3), prop_oneof![-4i64..=-1, 1i64..=4]).prop_filter_map(
        "valid",
        |(d, lead, mid, tail)| {
            let mut c = vec![lead];
            c.extend_from_slice(&mid[..d - 1]);
            c.push(tail);
            AuxPolynomial::from_i64(&c).ok().map(|f| f.primitive())
        },
    )
}

proptest! {
    #[test]
    fn witnesses_solve_the_recurrence(f in small_aux(), lo in -12i64..0, len in 4i64..20) {
        match witness_sequence(&f, lo, lo + len) {
            Ok(w) => {
                prop_assert!(has_integer_biinfinite(&f).answer);
                prop_assert!(w.is_integral() && !w.is_zero());
                prop_assert!(apply_shift_factor(&f.to_laurent(), &w).unwrap().is_zero());
                let d = f.degree();
                let seed = w.slice(lo, lo + d as i64 - 1);
                let fwd = propagate(&f, &seed, Direction::Forward, 30).unwrap();
                let back = propagate(&f, &w.slice(lo + len - d as i64 + 1, lo + len), Direction::Backward, 30).unwrap();
                prop_assert!(fwd.first_non_integral.is_none() && back.first_non_integral.is_none());
            }
            Err(e) => {
                prop_assert_eq!(e, RecurrenceError::NoWitness);
                prop_assert!(!has_integer_biinfinite(&f).answer);
            }
        }
    }

    #[test]
    fn minimal_recurrence_divides(f in small_aux(), lo in -6i64..0) {
        if let Ok(w) = witness_sequence(&f, lo, lo + 12) {
            let g = minimal_recurrence(&w, 3).unwrap().expect("a degree <= 3 relation exists");
            prop_assert!(g.degree() <= f.degree());
            prop_assert!(f.to_laurent().div_exact(&g.to_laurent()).is_some());
        }
    }

    #[test]
    fn forward_then_backward_round_trips(f in small_aux(), seed in prop::collection::vec(-10i64..=10, 3), steps in 1usize..10) {
        let d = f.degree();
        let w = SequenceWindow::from_i64(5, &seed[..d]);
        let fwd = propagate(&f, &w, Direction::Forward, steps).unwrap();
        let tail = fwd.window.slice(fwd.window.last_index() - d as i64 + 1, fwd.window.last_index());
        let back = propagate(&f, &tail, Direction::Backward, steps).unwrap();
        prop_assert_eq!(back.window, fwd.window);
    }

    #[test]
    fn reciprocal_reverses(f in small_aux(), seed in prop::collection::vec(-10i64..=10, 3), steps in 1usize..8) {
        let d = f.degree();
        let w = SequenceWindow::from_i64(0, &seed[..d]);
        let back = propagate(&f, &w, Direction::Backward, steps).unwrap();
        let mut rev = w.values.clone();
        rev.reverse();
        let fwd = propagate(&f.reciprocal(), &SequenceWindow { base: 0, values: rev }, Direction::Forward, steps).unwrap();
        prop_assert_eq!(fwd.produced, back.produced);
    }
}
