use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::*;
use crate::exact::triangle;

const DIGITS: u32 = 60;

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn pt(v: [i64; 6]) -> ParamTuple {
    ParamTuple::from_ints(v)
}

fn prec() -> Prec {
    Prec::from_digits(DIGITS)
}

fn f(v: &Rational) -> Float {
    Float::with_val(prec().0, v)
}

fn small_q(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let v = Rational::from((rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)));
        if !nonzero || v != 0 {
            return v;
        }
    }
}

// ---------------------------------------------------------------- G^{-1}

#[test]
fn g_inverse_stirling_subset_is_log() {
    let g = g_inverse(&pt([0, 1, 0, 0, 0, 1]), 12).unwrap();
    assert!(g.is_pure_log());
    assert_eq!(g.log_coeff, q(1, 1));
}

#[test]
fn g_inverse_eulerian_is_log() {
    let g = g_inverse(&pt([0, 1, 1, 1, -1, 0]), 12).unwrap();
    assert!(g.is_pure_log());
    assert_eq!(g.log_coeff, q(1, 1));
    assert_eq!(g.var, GenVar::Rescaled);
}

#[test]
fn g_inverse_type_iv_not_applicable() {
    assert!(matches!(g_inverse(&pt([1, 0, -1, 0, 0, 1]), 4), Err(EgfError::NotApplicable(_))));
}

/// `G^{-1}(b) - G^{-1}(a)` from the truncated series and from a reference.
fn increments_agree(g: &GenSeries, a: &Rational, b: &Rational, reference: impl Fn(&Float) -> Float) {
    let (fa, fb) = (f(a), f(b));
    let lhs = Float::with_val(prec().0, g.eval(&fb) - g.eval(&fa));
    let rhs = Float::with_val(prec().0, reference(&fb) - reference(&fa));
    let err = Float::with_val(prec().0, &lhs - &rhs).abs();
    assert!(err < 1e-40, "{g}: {lhs} vs {rhs}");
}

#[test]
fn g_inverse_r1r1_matches_closed_form() {
    for (p, sigma) in [(pt([1, 1, 0, 1, 1, 0]), 1), (pt([-2, -2, 1, 3, 3, 0]), -1)] {
        let g = g_inverse(&p, 400).unwrap();
        increments_agree(&g, &q(1, 5), &q(2, 5), |x| {
            let s = sigma as f64;
            let inner = Float::with_val(x.prec(), (Float::with_val(x.prec(), x * s) + 1u32) / x);
            -Float::with_val(x.prec(), x.recip_ref()) + inner.ln() * s
        });
    }
}

#[test]
fn g_inverse_type_i_spivey_forms() {
    // 1 + r' = r with r = 1/2, and r = -1 with r' = 1/3
    let p = pt([1, 2, 0, -1, 2, 0]);
    let g = g_inverse(&p, 300).unwrap();
    increments_agree(&g, &q(1, 4), &q(1, 2), |x| {
        let r = Float::with_val(x.prec(), 0.5);
        -Float::with_val(x.prec(), x.pow(&r)).recip() / r
    });
    let p = pt([-3, 3, 0, 1, 3, 0]);
    let g = g_inverse(&p, 300).unwrap();
    increments_agree(&g, &q(1, 4), &q(1, 2), |x| {
        let rp = Float::with_val(x.prec(), 1) / 3u32;
        let e = Float::with_val(x.prec(), &rp + 1u32);
        let onex = Float::with_val(x.prec(), x + 1u32);
        (Float::with_val(x.prec(), 1) - Float::with_val(x.prec(), onex.pow(&e)).recip()) / e
    });
}

#[test]
fn g_inverse_type_ii_and_iii_forms() {
    // II with alpha = -beta: (1 - exp(-a' x / b)) / a'
    let g = g_inverse(&pt([-2, 2, 0, 3, 0, 0]), 200).unwrap();
    increments_agree(&g, &q(1, 3), &q(2, 3), |x| {
        (Float::with_val(x.prec(), 1) - Float::with_val(x.prec(), x * -1.5f64).exp()) / 3u32
    });
    // III with a' = b': exp(a / (b' x)) (b'/a^2 - 1/(a x)) - b'/a^2
    let g = g_inverse(&pt([1, 0, 0, 2, 2, 0]), 200).unwrap();
    increments_agree(&g, &q(1, 3), &q(2, 3), |x| {
        let e = Float::with_val(x.prec(), Float::with_val(x.prec(), x * 2u32).recip()).exp();
        let inv = Float::with_val(x.prec(), x.recip_ref());
        e * (Float::with_val(x.prec(), 2) - inv) - 2u32
    });
    // III with a = 0 and a' = -b': (log x) / b'
    let g = g_inverse(&pt([0, 0, 1, -3, 3, 0]), 20).unwrap();
    assert!(g.is_pure_log());
    assert_eq!(g.log_coeff, q(1, 3));
}

#[test]
fn g_inverse_type_iii_log_case() {
    // -a'/b' = 2 puts the excluded index at k = 1
    let g = g_inverse(&pt([3, 0, 0, -4, 2, 0]), 10).unwrap();
    assert_eq!(g.log_coeff, q(3, 2) / 2);
    assert!(g.terms.iter().all(|(e, _)| *e != 0));
}

/// `D(v) L(t)` against the termwise series increment.
#[test]
fn increment_series_matches_generalized_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 24 {
        let mut v: [Rational; 6] = std::array::from_fn(|_| small_q(&mut rng, false));
        match checked % 3 {
            0 => {
                v[1] = small_q(&mut rng, true);
                v[4] = small_q(&mut rng, true);
            }
            1 => {
                v[1] = small_q(&mut rng, true);
                v[4] = Rational::new();
            }
            _ => {
                v[1] = Rational::new();
                v[4] = small_q(&mut rng, true);
            }
        }
        let p = ParamTuple::from_array(v);
        let x0 = q(1, 3);
        let var = gen_var_at(&p, &x0);
        if p.classify() == RecType::I {
            let d = crate::params::derived_type_i(&p).unwrap();
            // the termwise sum needs |sigma X| < 1 to converge
            if var >= 1 || Rational::from(&var * 4) < 1 || (d.sigma < 0 && 1 - var.clone() < q(1, 4)) {
                continue;
            }
        }
        let t = q(1, 40);
        let l = delta_g::<Float>(&p, &var, 40, prec()).unwrap();
        let mut lt = Float::new(prec().0);
        for i in (0..=40).rev() {
            lt = lt * f(&t) + l.coeff(i);
        }
        let dv = g_inverse_derivative(&p, &var).unwrap().to_float(prec().0).unwrap();
        let lhs = lt * dv;
        let g = g_inverse(&p, 600).unwrap();
        let rhs = g.eval(&f(&Rational::from(&var + &t))) - g.eval(&f(&var));
        let err = Float::with_val(prec().0, &lhs - &rhs).abs();
        assert!(err < 1e-30, "{p}: {lhs} vs {rhs}");
        checked += 1;
    }
}

// ---------------------------------------------------------------- detection

#[test]
fn detection_examples() {
    assert_eq!(special_case_detect(&pt([0, 1, 1, 1, -1, 0])), SpecialCase::S3RpPlus1EqR);
    assert_eq!(special_case_detect(&pt([0, 1, 0, 0, 1, 0])), SpecialCase::NeuwirthRp0);
    assert_eq!(special_case_detect(&pt([1, 0, 0, 1, 1, 0])), SpecialCase::IIIApEqBp);
    assert_eq!(special_case_detect(&pt([1, 0, -1, 0, 0, 1])), SpecialCase::TypeIV);
    assert_eq!(special_case_detect(&pt([1, 1, -1, 1, 1, -1])), SpecialCase::R1R1);
    assert_eq!(special_case_detect(&pt([0, 1, 1, 2, -1, -1])), SpecialCase::NuEulerian);
    assert_eq!(special_case_detect(&pt([0, 1, 0, 2, 1, -2])), SpecialCase::NuWard);
    assert_eq!(special_case_detect(&pt([1, -1, 0, 0, 0, 1])), SpecialCase::IIAlphaEqMinusBeta);
    assert_eq!(special_case_detect(&pt([2, 3, -2, 5, 7, -12])), SpecialCase::None);
    // Eulerian also satisfies r = 0, -r' = 1
    assert_eq!(matching_cases(&pt([0, 1, 1, 1, -1, 0])), vec![SpecialCase::S3RpPlus1EqR, SpecialCase::NuEulerian]);
}

#[test]
fn tags_round_trip() {
    for c in SpecialCase::PRIORITY {
        assert_eq!(c.tag().parse::<SpecialCase>().unwrap(), c);
    }
    assert_eq!(serde_json::to_string(&SpecialCase::R1R1).unwrap(), "\"R1R1\"");
}

// ---------------------------------------------------------------- closed forms

#[test]
fn eulerian_closed_form_example() {
    let p = pt([0, 1, 1, 1, -1, 0]);
    let s = egf_closed_form(&p, SpecialCase::S3RpPlus1EqR, &q(1, 2), 3, Field::Exact).unwrap();
    let s = s.as_exact().unwrap();
    // P_n(1/2) = 1, 1, 3/2, 13/4
    assert_eq!(s, &QSeries::new(vec![q(1, 1), q(1, 1), q(3, 4), q(13, 24)], 3, ()));
}

#[test]
fn stirling_cycle_type_iv_example() {
    let p = pt([1, 0, -1, 0, 0, 1]);
    let s = egf_closed_form(&p, SpecialCase::TypeIV, &q(1, 1), 6, Field::Exact).unwrap();
    assert_eq!(s.as_exact().unwrap(), &QSeries::from_ints(&[1; 7], 6));
}

#[test]
fn trivial_tuple_gives_one() {
    let p = pt([2, 3, -2, 5, 7, -12]);
    let s = egf_general(&p, &q(1, 3), 8, Field::Exact).unwrap();
    assert_eq!(s.as_exact().unwrap(), &QSeries::one(8, ()));
}

#[test]
fn mismatch_and_none() {
    let p = pt([0, 1, 1, 1, -1, 0]);
    assert!(matches!(
        egf_closed_form(&p, SpecialCase::R1R1, &q(1, 2), 3, Field::Exact),
        Err(EgfError::CaseMismatch { .. })
    ));
    assert!(matches!(
        egf_closed_form(&p, SpecialCase::None, &q(1, 2), 3, Field::Exact),
        Err(EgfError::NotApplicable(_))
    ));
    assert!(matches!(
        egf_closed_form(&p, SpecialCase::S3RpPlus1EqR, &q(3, 2), 3, Field::Exact),
        Err(EgfError::DomainError(_))
    ));
}

/// A random member of each family. `branch` selects the `alpha = 0` (or
/// analogous) sub-branch of the formula where the family has one.
fn family_member(case: SpecialCase, branch: bool, rng: &mut ChaCha8Rng) -> ParamTuple {
    let mut v: [Rational; 6] = std::array::from_fn(|_| small_q(rng, false));
    let nz = |rng: &mut ChaCha8Rng| small_q(rng, true);
    let nu = Rational::from(rng.gen_range(1i64..=3));
    match case {
        SpecialCase::TypeIV => {
            v[1] = Rational::new();
            v[4] = Rational::new();
            if branch {
                v[0] = Rational::new();
                v[3] = Rational::new();
            }
        }
        SpecialCase::S3RpPlus1EqR => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            // alpha = beta (1 + alpha'/beta')
            if branch {
                v[3] = -v[4].clone();
            }
            v[0] = &v[1] * (Rational::from(&v[3] / &v[4]) + 1u32);
        }
        SpecialCase::S1REqMinus1 => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            v[0] = -v[1].clone();
            if branch {
                v[3] = -v[4].clone();
            }
        }
        SpecialCase::R1R1 => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            v[0] = v[1].clone();
            v[3] = v[4].clone();
        }
        SpecialCase::NeuwirthRp0 => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            v[3] = Rational::new();
            if branch {
                v[0] = Rational::new();
            }
        }
        SpecialCase::NuEulerian => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            v[0] = Rational::new();
            v[3] = -nu * &v[4];
        }
        SpecialCase::NuWard => {
            v[1] = nz(rng);
            v[4] = nz(rng);
            v[0] = Rational::new();
            v[3] = nu * &v[4];
        }
        SpecialCase::IIAlphaEqMinusBeta => {
            v[1] = nz(rng);
            v[4] = Rational::new();
            v[0] = -v[1].clone();
            if branch {
                v[3] = Rational::new();
            }
        }
        SpecialCase::IIAlphap0 => {
            v[1] = nz(rng);
            v[4] = Rational::new();
            v[3] = Rational::new();
            if branch {
                v[0] = Rational::new();
            }
        }
        SpecialCase::IIIApEqBp => {
            v[1] = Rational::new();
            v[4] = nz(rng);
            v[3] = v[4].clone();
            if branch {
                v[0] = Rational::new();
            }
        }
        SpecialCase::IIIAlpha0 => {
            v[1] = Rational::new();
            v[4] = nz(rng);
            v[0] = Rational::new();
            if branch {
                v[3] = -v[4].clone();
            }
        }
        SpecialCase::IIIAp0 => {
            v[1] = Rational::new();
            v[4] = nz(rng);
            v[3] = Rational::new();
            if branch {
                v[0] = Rational::new();
            }
        }
        SpecialCase::None => unreachable!(),
    }
    ParamTuple::from_array(v)
}

const ORDER: usize = 10;

#[test]
fn every_case_matches_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let xs = [q(1, 4), q(1, 3), q(1, 2)];
    for case in SpecialCase::PRIORITY {
        for branch in [false, true] {
            let mut done = 0;
            let mut attempts = 0;
            while done < 6 {
                attempts += 1;
                assert!(attempts < 400, "{case}: too many domain rejections");
                let p = family_member(case, branch, &mut rng);
                assert!(case.matches(&p), "{case} generator produced {p}");
                let x0 = xs[done % 3].clone();
                let got = match egf_closed_form(&p, case, &x0, ORDER, Field::Auto(prec())) {
                    Ok(s) => s,
                    Err(EgfError::DomainError(_)) => continue,
                    Err(e) => panic!("{case} {p} at {x0}: {e}"),
                };
                let want = egf_from_triangle(&p, &x0, ORDER);
                match got.as_exact() {
                    Some(s) => assert_eq!(s, &want, "{case} {p} at {x0}"),
                    None => {
                        let err = got.max_rel_error(&want, prec().0);
                        assert!(err < 1e-30, "{case} {p} at {x0}: rel err {err}");
                    }
                }
                done += 1;
            }
        }
    }
}

#[test]
fn overlapping_cases_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut overlaps = 0;
    let samples = [
        pt([0, 1, 1, 1, -1, 0]),
        pt([0, 2, 1, 2, -2, 3]),
        pt([-1, 1, 0, 0, 1, 0]),
        pt([-2, 2, 1, 0, 0, 3]),
        pt([0, 0, 1, 0, 2, 1]),
        pt([0, 0, 1, 3, 3, -1]),
    ];
    let mut tuples: Vec<ParamTuple> = samples.to_vec();
    for case in SpecialCase::PRIORITY {
        for _ in 0..20 {
            tuples.push(family_member(case, rng.gen(), &mut rng));
        }
    }
    for p in tuples {
        let cases = matching_cases(&p);
        if cases.len() < 2 {
            continue;
        }
        let x0 = q(1, 3);
        let results: Vec<_> = cases
            .iter()
            .filter_map(|c| egf_closed_form(&p, *c, &x0, 8, Field::Auto(prec())).ok().map(|s| (*c, s)))
            .collect();
        for w in results.windows(2) {
            let err = w[1].1.max_rel_error(w[0].1.as_exact().unwrap_or(&egf_from_triangle(&p, &x0, 8)), prec().0);
            assert!(err < 1e-30, "{p}: {} vs {}", w[0].0, w[1].0);
        }
        overlaps += 1;
    }
    assert!(overlaps >= 6, "only {overlaps} overlapping tuples");
}

#[test]
fn float_field_agrees_with_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in SpecialCase::PRIORITY {
        let p = family_member(case, false, &mut rng);
        let x0 = q(1, 3);
        let (Ok(fl), Ok(ex)) = (
            egf_closed_form(&p, case, &x0, 8, Field::Float(prec())),
            egf_closed_form(&p, case, &x0, 8, Field::Auto(prec())),
        ) else {
            continue;
        };
        assert!(!fl.is_exact());
        let want = egf_from_triangle(&p, &x0, 8);
        assert!(fl.max_rel_error(&want, prec().0) < 1e-30, "{case} {p}");
        assert!(ex.max_rel_error(&want, prec().0) < 1e-30, "{case} {p}");
    }
}

#[test]
fn general_assembly_matches_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut done = [0usize; 3];
    while done.iter().any(|&d| d < 10) {
        let mut v: [Rational; 6] = std::array::from_fn(|_| small_q(&mut rng, false));
        let which = rng.gen_range(0..3);
        match which {
            0 => {
                v[1] = small_q(&mut rng, true);
                v[4] = small_q(&mut rng, true);
            }
            1 => {
                v[1] = small_q(&mut rng, true);
                v[4] = Rational::new();
            }
            _ => {
                v[1] = Rational::new();
                v[4] = small_q(&mut rng, true);
            }
        }
        let p = ParamTuple::from_array(v);
        let x0 = [q(1, 4), q(1, 3), q(1, 2)][rng.gen_range(0..3)].clone();
        let got = match egf_general(&p, &x0, ORDER, Field::Exact) {
            Ok(s) => s,
            Err(EgfError::DomainError(_)) => continue,
            Err(e) => panic!("{p}: {e}"),
        };
        assert_eq!(got.as_exact().unwrap(), &egf_from_triangle(&p, &x0, ORDER), "{p} at {x0}");
        done[which] += 1;
    }
}

// ---------------------------------------------------------------- reference series

#[test]
fn pascal_row_sums() {
    let s = egf_from_triangle(&pt([0, 0, 1, 0, 0, 1]), &q(1, 1), 3);
    assert_eq!(s, QSeries::new(vec![q(1, 1), q(2, 1), q(2, 1), q(4, 3)], 3, ()));
}

#[test]
fn bell_numbers() {
    let s = egf_from_triangle(&pt([0, 1, 0, 0, 0, 1]), &q(1, 1), 4);
    let bell = [1, 1, 2, 5, 15];
    for (n, b) in bell.iter().enumerate() {
        let fact = crate::util::factorial(n as u32);
        assert_eq!(s.coeff(n), Rational::from((*b, 1)) / Rational::from(fact));
    }
}

#[test]
fn order_zero_is_one() {
    assert_eq!(egf_from_triangle(&pt([3, -1, 2, 1, 1, 1]), &q(1, 2), 0), QSeries::one(0, ()));
}

// ---------------------------------------------------------------- PDE residual

#[test]
fn pde_residual_vanishes() {
    for p in [pt([0, 1, 1, 1, -1, 0]), pt([1, 0, -1, 0, 0, 1]), pt([2, -3, 1, -1, 2, 5])] {
        let r = pde_residual(&p, 6);
        assert_eq!(r.len(), 6);
        assert!(r.iter().all(Poly::is_zero), "{p}");
    }
}

#[test]
fn pde_residual_detects_perturbation() {
    let t = triangle(&pt([0, 1, 1, 1, -1, 0]), 4);
    let polys: Vec<Poly> = (0..=4).map(|n| t.row_poly(n).unwrap()).collect();
    let perturbed = ParamTuple::from_array([q(0, 1), q(1, 1), q(1, 1), q(1, 1), q(-1, 1), q(1, 2)]);
    let r = pde_residual_with(&perturbed, &polys);
    assert!(!r[1].is_zero());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn rat() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=3).prop_map(|(a, b)| Rational::from((a, b)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pde_residual_zero_for_any_tuple(v in proptest::array::uniform6(rat())) {
            let p = ParamTuple::from_array(v);
            prop_assert!(pde_residual(&p, 5).iter().all(Poly::is_zero));
        }
    }
}
