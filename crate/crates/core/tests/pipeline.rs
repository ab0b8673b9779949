// Known triangles pushed through every module via the public API.

use gkp_core::degeneracy::{degeneracy_class, same_numbers, DegClass};
use gkp_core::egf::{
    egf_closed_form, egf_from_triangle, egf_general, pde_residual, special_case_detect, Field, SpecialCase,
};
use gkp_core::exact::{coeff_type_iv, row_poly_product_type_iv, triangle};
use gkp_core::params::derived_type_i;
use gkp_core::residue::{row_poly_residue, ResidueJob};
use gkp_core::series::Prec;
use gkp_core::{ParamTuple, Poly, RecType};
use rug::{Float, Rational};

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn close(v: &Float, want: &Rational) -> bool {
    let w = Float::with_val(v.prec(), want);
    let d = Float::with_val(v.prec(), v - &w).abs();
    d < Float::with_val(v.prec(), 1e-30) * Float::with_val(v.prec(), w.abs_ref())
}

fn ints(row: &[Rational]) -> Vec<i64> {
    row.iter().map(|c| c.to_f64() as i64).collect()
}

#[test]
fn eulerian_everywhere() {
    let p = ParamTuple::from_ints([0, 1, 1, 1, -1, 0]);
    assert_eq!(p.classify(), RecType::I);
    let d = derived_type_i(&p).unwrap();
    assert_eq!((d.r.clone(), d.rp.clone(), d.sigma), (q(0, 1), q(-1, 1), -1));

    let t = triangle(&p, 6);
    assert_eq!(ints(&t.rows[4]), [1, 11, 11, 1, 0]);
    assert_eq!(t.row_poly(3).unwrap(), Poly::from_ints(&[1, 4, 1]));

    let x0 = q(1, 2);
    let reference = egf_from_triangle(&p, &x0, 6);
    assert_eq!(special_case_detect(&p), SpecialCase::S3RpPlus1EqR);
    let closed = egf_closed_form(&p, SpecialCase::S3RpPlus1EqR, &x0, 6, Field::Exact).unwrap();
    assert_eq!(closed.as_exact().unwrap(), &reference);
    let general = egf_general(&p, &x0, 6, Field::Auto(Prec::from_digits(60))).unwrap();
    assert!(general.max_rel_error(&reference, 256) < 1e-30);
    assert!(pde_residual(&p, 6).iter().all(Poly::is_zero));

    let x = q(1, 3);
    let v = row_poly_residue(&ResidueJob::new(p.clone(), 4, x.clone())).unwrap();
    assert!(close(&v.value, &(q(1, 1) + q(11, 3) + q(11, 9) + q(1, 27))));
}

#[test]
fn stirling_subset_everywhere() {
    let p = ParamTuple::from_ints([0, 1, 0, 0, 0, 1]);
    assert_eq!(p.classify(), RecType::II);
    assert!(derived_type_i(&p).is_err());
    assert_eq!(ints(&triangle(&p, 4).rows[4]), [0, 1, 7, 6, 1]);

    // Bell numbers at x0 = 1 from the triangle
    let bell = egf_from_triangle(&p, &q(1, 1), 4);
    let fact = [1, 1, 2, 6, 24];
    let got: Vec<Rational> = (0..=4).map(|n| bell.coeff(n) * Rational::from(fact[n])).collect();
    assert_eq!(got, [1, 1, 2, 5, 15].map(|v| q(v, 1)));

    let v = row_poly_residue(&ResidueJob::new(p, 3, q(1, 2))).unwrap();
    assert!(close(&v.value, &q(11, 8)));
}

#[test]
fn type_iv_product_and_sums() {
    let cycles = ParamTuple::from_ints([1, 0, -1, 0, 0, 1]);
    assert_eq!(cycles.classify(), RecType::IV);
    assert_eq!(row_poly_product_type_iv(&cycles, 2).unwrap(), Poly::from_ints(&[0, 1, 1]));
    assert_eq!(coeff_type_iv(&cycles, 4, 2).unwrap(), 11);

    let pascal = ParamTuple::from_ints([0, 0, 1, 0, 0, 1]);
    assert_eq!(row_poly_product_type_iv(&pascal, 3).unwrap(), Poly::from_ints(&[1, 3, 3, 1]));
    assert_eq!(coeff_type_iv(&pascal, 5, 2).unwrap(), 10);
    assert!(row_poly_product_type_iv(&ParamTuple::from_ints([0, 1, 1, 1, -1, 0]), 2).is_err());
}

#[test]
fn trivial_and_binomial_families() {
    let trivial = ParamTuple::from_ints([2, 3, -2, 5, 7, -12]);
    assert_eq!(degeneracy_class(&trivial), DegClass::TrivialKernel);
    let t = triangle(&trivial, 6);
    for n in 1..=6 {
        assert!(t.rows[n].iter().all(|c| *c == 0));
    }
    let f = egf_from_triangle(&trivial, &q(1, 4), 6);
    assert!((1..=6).all(|i| f.coeff(i) == 0));

    let shifted = ParamTuple::from_ints([0, 1, 1, -1, 1, 1]);
    assert_eq!(degeneracy_class(&shifted).tag(), "BinomialScaled");
    assert!(same_numbers(&shifted, &ParamTuple::from_ints([0, 0, 1, 0, 0, 1]), 8));
    assert!(!same_numbers(&ParamTuple::from_ints([0, 1, 1, 1, -1, 0]), &ParamTuple::from_ints([0, 1, 0, 0, 0, 1]), 4));
}
