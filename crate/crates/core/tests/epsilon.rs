use proptest::prelude::*;
use unfold_core::bform::{admissible_residues, epsilon_profile};
use unfold_core::certify::{triples, Filters};
use unfold_core::{AngleSystem, Error, GcdPolicy};

/// `k * {x / k}` for integer `x`.
fn frac_num(x: i64, k: i64) -> i64 {
    x.rem_euclid(k)
}

/// `k * t(ell)` summed over the angles, divided back out.
fn t_oracle(q: &[i64], k: i64, ell: i64) -> i64 {
    let s: i64 = q.iter().map(|&qi| frac_num(ell * qi, k)).sum();
    assert_eq!(s % k, 0);
    s / k
}

fn eps_oracle(q: &[i64], k: i64, a: i64) -> Vec<i64> {
    let b = 2 - a;
    q.iter()
        .map(|&qi| {
            let num = 2 * k - 2 * frac_num(qi, k) - frac_num(-a * qi, k) - frac_num(-b * qi, k);
            assert_eq!(num % k, 0, "non-integral eps");
            num / k
        })
        .collect()
}

fn tri(q1: i64, q2: i64, q3: i64) -> AngleSystem {
    AngleSystem::triangle(q1, q2, q3, GcdPolicy::Keep).unwrap()
}

#[test]
fn heptagonal_example() {
    let p = epsilon_profile(&tri(1, 2, 8), 6).unwrap();
    assert_eq!((p.a, p.b), (6, 7));
    assert_eq!(p.eps, vec![1, 0, -1]);
    assert_eq!(p.sum(), 0);
}

#[test]
fn equilateral_passes_preconditions() {
    let q = [1, 1, 1];
    let p = epsilon_profile(&tri(1, 1, 1), 1).unwrap();
    assert_eq!(p.eps, eps_oracle(&q, 3, 1));
    assert_eq!(p.eps, vec![0, 0, 0]);
}

#[test]
fn b_zero_is_rejected() {
    // a = 2 makes b = 0
    for (q, k) in [((1, 2, 8), 11), ((4, 5, 6), 15), ((1, 1, 1), 3)] {
        let err = epsilon_profile(&tri(q.0, q.1, q.2), 2).unwrap_err();
        assert!(
            matches!(err, Error::Hypothesis(_)),
            "{q:?} mod {k}: {err:?}"
        );
    }
}

#[test]
fn small_t_is_rejected() {
    // t(-10) = t(1) = 1 for (1,2,8;11)
    assert!(matches!(
        epsilon_profile(&tri(1, 2, 8), 10),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn all_admissible_pairs_up_to_60() {
    let mut checked = 0usize;
    for q in triples(60, Filters::NONE) {
        let qi: Vec<i64> = q.iter().map(|&x| x as i64).collect();
        let k: i64 = qi.iter().sum();
        let sys = tri(qi[0], qi[1], qi[2]);
        let admissible = admissible_residues(&sys);
        for a in 1..k {
            let b = (2 - a).rem_euclid(k);
            let ok = b != 0 && t_oracle(&qi, k, -a) > 1 && t_oracle(&qi, k, -b) > 1;
            assert_eq!(ok, admissible.contains(&(a as u64)), "{q:?} a={a}");
            match epsilon_profile(&sys, a) {
                Ok(p) => {
                    assert!(ok);
                    let eps = eps_oracle(&qi, k, a);
                    assert_eq!(p.eps, eps);
                    assert_eq!(
                        eps.iter().sum::<i64>(),
                        4 - t_oracle(&qi, k, -a) - t_oracle(&qi, k, -b)
                    );
                    for (e, q) in eps.iter().zip(&qi) {
                        assert!((-1..=1).contains(e));
                        if *e == -1 {
                            assert!(2 * q >= k);
                        }
                    }
                    checked += 1;
                }
                Err(e) => assert!(
                    !ok && matches!(e, Error::Hypothesis(_)),
                    "{q:?} a={a}: {e:?}"
                ),
            }
        }
    }
    assert!(checked > 1000);
}

proptest! {
    #[test]
    fn residue_of_a_is_all_that_matters(q1 in 1i64..30, q2 in 1i64..30, q3 in 1i64..30, a in 1i64..200) {
        let sys = tri(q1, q2, q3);
        let k = sys.k() as i64;
        let lhs = epsilon_profile(&sys, a);
        let rhs = epsilon_profile(&sys, a + 3 * k);
        prop_assert_eq!(lhs.is_ok(), rhs.is_ok());
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            prop_assert_eq!(l, r);
        }
    }
}
