use proptest::prelude::*;

use nearly_kahler::catalog::cone::{cone_differential, cone_star, ConeForm, FormLink, SphereForm, SphereLink};
use nearly_kahler::catalog::octonion::Octonion;
use nearly_kahler::hitchin::tau;
use nearly_kahler::report::Report;
use nearly_kahler::s3xs3::{CyclicCoframe, DiagonalInvariantForm};
use nearly_kahler::{Gram, KForm, Rational, Result, Scalar};

fn q(n: i64, d: i64) -> Rational {
    <Rational as Scalar>::from_ratio(n, d)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=7, any::<bool>()).prop_map(|(n, d, s)| q(if s { n } else { -n }, d))
}

/// Random k-form on ℝⁿ with small rational coefficients.
fn form(n: usize, k: usize) -> impl Strategy<Value = KForm<Rational>> {
    let count = nearly_kahler::exterior::binomial(n, k);
    proptest::collection::vec(rational(), count).prop_map(move |cs| {
        let mut f = KForm::zero(n, k);
        for (idx, c) in combinations(n, k).into_iter().zip(&cs) {
            f = f.add(&KForm::term(n, &idx, c.clone()));
        }
        f
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes_on_s3xs3(a in (0usize..5).prop_flat_map(|k| form(6, k))) {
        let cf = CyclicCoframe::<Rational>::new().unwrap();
        let dd = cf.d(&cf.d(&a).unwrap()).unwrap();
        prop_assert!(dd.is_zero_within(0.0));
    }

    #[test]
    fn wedge_is_graded_commutative(a in form(6, 2), b in form(6, 3)) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn odd_forms_square_to_zero(a in form(6, 3)) {
        prop_assert!(a.wedge(&a).unwrap().is_zero_within(0.0));
    }

    #[test]
    fn hodge_star_is_an_involution_up_to_sign(k in 0usize..7, coeffs in proptest::collection::vec(rational(), 20)) {
        let vol = KForm::basis(6, &[0, 1, 2, 3, 4, 5]);
        let g = Gram::<Rational>::identity(6);
        let idx = combinations(6, k);
        let mut a = KForm::zero(6, k);
        for (i, m) in idx.iter().enumerate() {
            a = a.add(&KForm::term(6, m, coeffs[i % coeffs.len()].clone()));
        }
        let ss = a.hodge_star(&g, &vol, 0.0).unwrap().hodge_star(&g, &vol, 0.0).unwrap();
        let sign = if (k * (6 - k)) % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        prop_assert_eq!(ss, a.scale(&sign));
    }

    #[test]
    fn tau_is_the_quartic(l1 in nonzero_rational(), l2 in nonzero_rational(), l3 in nonzero_rational()) {
        let cf = CyclicCoframe::<Rational>::new().unwrap();
        let d = DiagonalInvariantForm::new(l1, l2, l3, 0.0).unwrap();
        let psi = cf.d(&d.omega()).unwrap().scale(&q(1, 3));
        let t = tau(&psi, &CyclicCoframe::<Rational>::vol()).unwrap();
        prop_assert_eq!(t.clone() * q(81, 1), d.tau_quartic());
        prop_assert_eq!(t * q(81, 1), d.quartic_product());
    }

    #[test]
    fn octonion_norm_is_multiplicative(x in proptest::collection::vec(rational(), 8), y in proptest::collection::vec(rational(), 8)) {
        let a = Octonion::from_components(&x);
        let b = Octonion::from_components(&y);
        prop_assert_eq!(a.mul(&b).norm2(), a.norm2() * b.norm2());
        // alternativity
        prop_assert_eq!(a.mul(&a.mul(&b)), a.mul(&a).mul(&b));
    }

    #[test]
    fn cone_d_squared_vanishes(a in form(6, 2), b in form(6, 3), p in 0i32..5, r in 0i32..5) {
        let cf = CyclicCoframe::<Rational>::new().unwrap();
        let d = |x: &KForm<Rational>| -> Result<KForm<Rational>> { cf.d(x) };
        let link = FormLink { d: &d, g: Gram::identity(6), vol: KForm::basis(6, &[0, 1, 2, 3, 4, 5]), tol: 0.0 };
        let mut c = ConeForm::new();
        c.push(&link, p, true, a);
        c.push(&link, r, false, b);
        let dd = cone_differential(&link, &cone_differential(&link, &c).unwrap()).unwrap();
        prop_assert_eq!(dd.max_abs(&link), 0.0);
        let dds = cone_differential(&link, &cone_differential(&link, &cone_star(&link, &c).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(dds.max_abs(&link), 0.0);
    }

    #[test]
    fn sphere_link_d_squared_vanishes(a in form(7, 4), b in form(7, 3), e in 0i32..5) {
        let link = SphereLink::<Rational>::new();
        let mut c = ConeForm::new();
        c.push(&link, e, false, SphereForm { a, b });
        let dd = cone_differential(&link, &cone_differential(&link, &c).unwrap()).unwrap();
        prop_assert_eq!(dd.max_abs(&link), 0.0);
    }

    #[test]
    fn report_round_trips(names in proptest::collection::vec("[a-z ]{1,12}", 1..6), fails in proptest::collection::vec(any::<bool>(), 6), x in -1e6f64..1e6) {
        let mut r = Report::new("prop", serde_json::json!({"x": x}), 1e-10);
        for (i, n) in names.iter().enumerate() {
            r.check(n, !fails[i], "condition");
        }
        r.scalar("x", x).residual("x", x.abs());
        let back = Report::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.overall(), r.overall());
        prop_assert_eq!(back.checks, r.checks);
    }
}
