use nearly_kahler::catalog::cone::cone_check;
use nearly_kahler::catalog::cp3::cp3_model;
use nearly_kahler::catalog::flag::flag_model;
use nearly_kahler::catalog::ledger_obata::ledger_obata_su2;
use nearly_kahler::catalog::{kahler_form, nk_from_omega};
use nearly_kahler::lie::ReductiveSpace;
use nearly_kahler::{Endo, Gram, KForm, QSqrt3, Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    <Rational as Scalar>::from_ratio(n, d)
}

/// d² = 0 on ω, dω and, when the structure builds, on φ; and the cone
/// verdict equals the nearly Kähler verdict.
fn exercise<S: Scalar>(space: &ReductiveSpace<S>, g: &Gram<S>, j: &Endo<S>) -> Option<bool> {
    let omega = kahler_form(g, j);
    let d = |a: &KForm<S>| space.ce_differential(a, 0.0);
    let dw = d(&omega).unwrap();
    assert!(d(&dw).unwrap().is_zero_within(0.0));
    let (s, nk) = nk_from_omega(space, &omega, 0.0).ok()?;
    assert!(d(&d(&s.phi).unwrap()).unwrap().is_zero_within(0.0));
    let cone = cone_check(&s, &d, 0.0).unwrap();
    assert_eq!(cone.cone_verdict, nk.verdict, "cone and nearly Kähler verdicts differ");
    Some(nk.verdict)
}

#[test]
fn flag_manifold_structures() {
    let m = flag_model().unwrap();
    let mut nk = 0;
    for signs in [[1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]] {
        for rst in [(1, 1, 1), (1, 1, 2), (1, 2, 3), (2, 1, 1)] {
            let g = m.metric(q(rst.0, 1), q(rst.1, 1), q(rst.2, 1));
            if exercise(&m.space, &g, &m.acs::<Rational>(signs)) == Some(true) {
                nk += 1;
                assert_eq!((signs, rst), ([1, 1, 1], (1, 1, 1)));
            }
        }
    }
    assert_eq!(nk, 1);
}

#[test]
fn cp3_structures() {
    let m = cp3_model().unwrap();
    let mut nk = Vec::new();
    for (sp, sv) in [(1, 1), (1, -1)] {
        for t in [q(1, 2), q(1, 3), q(2, 1), q(3, 2)] {
            if exercise(&m.space, &m.metric(t.clone()), &m.acs(sp, sv).unwrap()) == Some(true) {
                nk.push((sp, sv, t));
            }
        }
    }
    assert_eq!(nk.len(), 1);
    assert_eq!(nk[0].2, q(1, 2));
}

#[test]
fn ledger_obata_structure() {
    let m = ledger_obata_su2().unwrap();
    assert_eq!(exercise(&m.space, m.metric.gram(), &m.j), Some(true));
    let squashed = Gram::new(m.metric.gram().matrix().scale(&QSqrt3::from_i64(2)), 0.0).unwrap();
    // a homothetic metric stays nearly Kähler
    assert_eq!(exercise(&m.space, &squashed, &m.j), Some(true));
}
