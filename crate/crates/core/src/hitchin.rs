//! Stable forms in dimension six.
//!
//! From a pair `(ω, ψ)` and a reference volume form we build
//! `K(X) = A(ι_X ψ ∧ ψ)` where `A` inverts `v ↦ ι_v vol`, then
//! `τ₀ = tr(K²)/6`, `κ = √(−τ₀)`, `J = K/κ`, `g(X,Y) = ω(X,JY)` and
//! `φ(X,Y,Z) = −ψ(JX,Y,Z)`.
//!
//! Flipping `vol` flips `J` and `g`, so exactly one orientation makes `g`
//! positive. With this convention that orientation is `vol = −ω³/6`; see
//! [`SU3Candidate::oriented`].

use crate::error::{Error, Result};
use crate::exterior::{lambda5_to_vector, KForm};
use crate::linalg::{Endo, Gram, Matrix, Vector};
use crate::scalar::Scalar;

/// A pair of forms on a six-dimensional space plus a reference orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Candidate<S: Scalar> {
    pub omega: KForm<S>,
    pub psi: KForm<S>,
    pub vol: KForm<S>,
}

impl<S: Scalar> SU3Candidate<S> {
    pub fn new(omega: KForm<S>, psi: KForm<S>, vol: KForm<S>) -> Result<Self> {
        for (f, k) in [(&omega, 2), (&psi, 3), (&vol, 6)] {
            if f.dim() != 6 || f.degree() != k {
                return Err(Error::Dimension(format!("expected a {k}-form in dimension 6")));
            }
        }
        if vol.is_zero_within(0.0) {
            return Err(Error::Dimension("zero volume form".into()));
        }
        Ok(SU3Candidate { omega, psi, vol })
    }

    /// Candidate with `vol = −ω³/6`, the orientation for which `g` can be
    /// positive. Fails with `DegenerateOmega` when `ω³ = 0`.
    pub fn oriented(omega: KForm<S>, psi: KForm<S>, tol: f64) -> Result<Self> {
        let vol = omega_cubed(&omega)?.scale(&S::from_ratio(-1, 6));
        if vol.is_zero_within(tol) {
            return Err(Error::DegenerateOmega);
        }
        Self::new(omega, psi, vol)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> SU3Candidate<T> {
        SU3Candidate { omega: self.omega.map(f), psi: self.psi.map(f), vol: self.vol.map(f) }
    }
}

fn omega_cubed<S: Scalar>(omega: &KForm<S>) -> Result<KForm<S>> {
    omega.wedge(omega)?.wedge(omega)
}

/// `K` with `K(X) ⊗ vol = A(ι_X ψ ∧ ψ)`; column `a` is `K(X_a)`.
pub fn hitchin_k<S: Scalar>(psi: &KForm<S>, vol: &KForm<S>) -> Result<Endo<S>> {
    if psi.dim() != 6 || psi.degree() != 3 {
        return Err(Error::Dimension("hitchin_k needs a 3-form in dimension 6".into()));
    }
    let cols = (0..6)
        .map(|a| lambda5_to_vector(&psi.interior_basis(a).wedge(psi)?, vol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&cols))
}

/// `τ₀ = tr(K²)/6`; ψ is stable iff `τ₀ < 0`.
pub fn tau<S: Scalar>(psi: &KForm<S>, vol: &KForm<S>) -> Result<S> {
    let k = hitchin_k(psi, vol)?;
    Ok(k.mul(&k).trace() / S::from_i64(6))
}

/// Validated SU(3)-structure.
#[derive(Clone, Debug)]
pub struct SU3Structure<S: Scalar> {
    pub omega: KForm<S>,
    pub psi: KForm<S>,
    pub phi: KForm<S>,
    pub vol: KForm<S>,
    pub k: Endo<S>,
    pub j: Endo<S>,
    pub g: Gram<S>,
    pub kappa: S,
    pub tau0: S,
}

/// `φ(X,Y,Z) = −ψ(JX,Y,Z)`, checked against the other two slot placements
/// and against `ι_X ψ = ι_{JX} φ`.
pub fn phi_from<S: Scalar>(psi: &KForm<S>, j: &Endo<S>, tol: f64) -> Result<KForm<S>> {
    let n = psi.dim();
    if psi.degree() != 3 || j.rows() != n || !j.is_square() {
        return Err(Error::Dimension("phi_from needs a 3-form and a matching endomorphism".into()));
    }
    if !j.mul(j).add(&Matrix::identity(n)).is_zero_within(tol) {
        return Err(Error::NotComplexStructure);
    }
    let jx: Vec<Vector<S>> = (0..n).map(|a| j.column(a)).collect();
    let e = |a: usize| Vector::basis(n, a);
    let mut phi = KForm::zero(n, 3);
    for idx in itertools::Itertools::combinations(0..n, 3) {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        let p1 = -psi.evaluate(&[jx[a].clone(), e(b), e(c)])?;
        let p2 = -psi.evaluate(&[e(a), jx[b].clone(), e(c)])?;
        let p3 = -psi.evaluate(&[e(a), e(b), jx[c].clone()])?;
        if !(p1.clone() - p2).is_zero_within(tol) || !(p1.clone() - p3).is_zero_within(tol) {
            return Err(Error::SlotInconsistent);
        }
        if !p1.is_zero_within(0.0) {
            phi = phi.add(&KForm::term(n, &idx, p1));
        }
    }
    for (a, jxa) in jx.iter().enumerate().take(n) {
        if !psi.interior_basis(a).sub(&phi.interior(jxa)?).is_zero_within(tol) {
            return Err(Error::SlotInconsistent);
        }
    }
    Ok(phi)
}

/// Matrix `W` with `W[a][b] = ω(X_a, X_b)`.
pub fn two_form_matrix<S: Scalar>(omega: &KForm<S>) -> Matrix<S> {
    let n = omega.dim();
    Matrix::from_fn(n, n, |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Less => omega.coeff(&[a, b]),
        std::cmp::Ordering::Greater => -omega.coeff(&[b, a]),
        std::cmp::Ordering::Equal => S::zero(),
    })
}

/// Runs the stable-form construction, rejecting candidates in the order
/// stable ψ, type (1,1), nondegenerate ω, positive metric.
pub fn build_su3<S: Scalar>(c: &SU3Candidate<S>, tol: f64) -> Result<SU3Structure<S>> {
    let k = hitchin_k(&c.psi, &c.vol)?;
    let tau0 = k.mul(&k).trace() / S::from_i64(6);
    if tau0.sign_within(tol) != std::cmp::Ordering::Less {
        return Err(Error::NotStable { tau: tau0.to_f64() });
    }
    if !c.omega.wedge(&c.psi)?.is_zero_within(tol) {
        return Err(Error::NotType11);
    }
    if omega_cubed(&c.omega)?.is_zero_within(tol) {
        return Err(Error::DegenerateOmega);
    }
    let kappa = (-tau0.clone())
        .try_sqrt()
        .ok_or_else(|| Error::NotRepresentable(format!("√(−τ₀) with τ₀ = {:?}", tau0)))?;
    let j = k.scale(&(S::one() / kappa.clone()));
    if !j.mul(&j).add(&Matrix::identity(6)).is_zero_within(tol) {
        return Err(Error::NotComplexStructure);
    }
    let gm = two_form_matrix(&c.omega).mul(&j);
    if !gm.is_symmetric(tol) {
        return Err(Error::NotType11);
    }
    let g = Gram::new(gm, tol)?;
    if !g.is_positive_definite(tol) {
        return Err(Error::NotPositive);
    }
    let phi = phi_from(&c.psi, &j, tol)?;
    Ok(SU3Structure { omega: c.omega.clone(), psi: c.psi.clone(), phi, vol: c.vol.clone(), k, j, g, kappa, tau0 })
}

impl<S: Scalar> SU3Structure<S> {
    /// `max |K² − τ₀ Id|`.
    pub fn k_squared_defect(&self) -> f64 {
        self.k.mul(&self.k).sub(&Matrix::identity(6).scale(&self.tau0)).max_abs()
    }

    /// `ψ ∧ φ` as a multiple of `e_{0…5}`.
    pub fn psi_wedge_phi(&self) -> S {
        self.psi.wedge(&self.phi).expect("both forms live in dimension 6").top()
    }

    /// `ω³` as a multiple of `e_{0…5}`.
    pub fn omega_cubed(&self) -> S {
        omega_cubed(&self.omega).expect("dimension 6").top()
    }

    pub fn candidate(&self) -> SU3Candidate<S> {
        SU3Candidate { omega: self.omega.clone(), psi: self.psi.clone(), vol: self.vol.clone() }
    }
}

/// Residuals of the nearly Kähler system `dω = 3ψ`, `dφ = −2μ ω∧ω`.
#[derive(Clone, Debug)]
pub struct NKReport<S> {
    pub residual_r1: f64,
    pub residual_r2: f64,
    /// Least-squares fit of `dφ ≈ −2μ ω∧ω`.
    pub mu: S,
    pub verdict: bool,
}

/// Builds the structure and evaluates the system with the differential `d`.
pub fn nk_check<S: Scalar>(
    c: &SU3Candidate<S>,
    d: impl Fn(&KForm<S>) -> Result<KForm<S>>,
    tol: f64,
) -> Result<(SU3Structure<S>, NKReport<S>)> {
    let s = build_su3(c, tol)?;
    let report = nk_residuals(&s, d)?;
    let verdict = report.residual_r1 <= tol && report.residual_r2 <= tol;
    Ok((s, NKReport { verdict, ..report }))
}

/// Residuals only; `verdict` is left false for the caller to decide.
pub fn nk_residuals<S: Scalar>(s: &SU3Structure<S>, d: impl Fn(&KForm<S>) -> Result<KForm<S>>) -> Result<NKReport<S>> {
    let domega = d(&s.omega)?;
    let r1 = domega.sub(&s.psi.scale(&S::from_i64(3))).coeff_norm();
    let dphi = d(&s.phi)?;
    let w2 = s.omega.wedge(&s.omega)?;
    let mu = -dphi.coeff_dot(&w2) / (S::from_i64(2) * w2.coeff_dot(&w2));
    let r2 = dphi.add(&w2.scale(&(S::from_i64(2) * mu.clone()))).coeff_norm();
    Ok(NKReport { residual_r1: r1, residual_r2: r2, mu, verdict: false })
}

/// The standard pair on ℝ⁶: `ω = e₁₂ + e₃₄ + e₅₆`,
/// `ψ = e₁₃₅ − e₁₄₆ − e₂₃₆ − e₂₄₅` (0-based indices in code).
pub fn standard_pair<S: Scalar>() -> (KForm<S>, KForm<S>) {
    let one = S::one;
    let omega = KForm::from_terms(6, 2, [(&[0usize, 1][..], one()), (&[2, 3][..], one()), (&[4, 5][..], one())])
        .expect("valid indices");
    let psi = KForm::from_terms(
        6,
        3,
        [
            (&[0usize, 2, 4][..], one()),
            (&[0, 3, 5][..], -one()),
            (&[1, 2, 5][..], -one()),
            (&[1, 3, 4][..], -one()),
        ],
    )
    .expect("valid indices");
    (omega, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn vol() -> KForm<Q> {
        KForm::basis(6, &[0, 1, 2, 3, 4, 5])
    }

    #[test]
    fn decomposable_psi_has_zero_k() {
        let psi = KForm::<Q>::basis(6, &[0, 1, 2]);
        assert!(hitchin_k(&psi, &vol()).unwrap().is_zero_within(0.0));
        assert_eq!(tau(&psi, &vol()).unwrap(), Q::from_i64(0));
    }

    #[test]
    fn standard_psi_is_stable() {
        let (_, psi) = standard_pair::<Q>();
        let k = hitchin_k(&psi, &vol()).unwrap();
        let t = tau(&psi, &vol()).unwrap();
        assert_eq!(t, Q::from_i64(-4));
        assert_eq!(k.mul(&k), Matrix::identity(6).scale(&t));
        let s = Q::from_i64(3);
        let ks = hitchin_k(&psi.scale(&s), &vol()).unwrap();
        assert_eq!(ks, k.scale(&(s.clone() * s.clone())));
        assert_eq!(tau(&psi.scale(&s), &vol()).unwrap(), t * Q::from_i64(81));
    }

    #[test]
    fn standard_pair_builds_euclidean_structure() {
        let (omega, psi) = standard_pair::<Q>();
        // e123456 is the wrong orientation: g = −Id
        let wrong = SU3Candidate::new(omega.clone(), psi.clone(), vol()).unwrap();
        assert_eq!(build_su3(&wrong, 0.0).unwrap_err(), Error::NotPositive);
        let c = SU3Candidate::oriented(omega, psi, 0.0).unwrap();
        assert_eq!(c.vol, vol().neg());
        let s = build_su3(&c, 0.0).unwrap();
        assert_eq!(*s.g.matrix(), Matrix::identity(6));
        assert_eq!(s.j.column(0), Vector::basis(6, 1));
        assert_eq!(s.kappa, Q::from_i64(2));
        let want = KForm::from_terms(
            6,
            3,
            [
                (&[1usize, 2, 4][..], Q::from_i64(1)),
                (&[1, 3, 5][..], Q::from_i64(-1)),
                (&[0, 2, 5][..], Q::from_i64(1)),
                (&[0, 3, 4][..], Q::from_i64(1)),
            ],
        )
        .unwrap();
        assert_eq!(s.phi, want);
        assert!(s.phi.wedge(&s.omega).unwrap().is_zero_within(0.0));
        assert_eq!(phi_from(&s.psi, &s.j.neg(), 0.0).unwrap(), s.phi.neg());
        assert_eq!(s.k_squared_defect(), 0.0);
    }

    #[test]
    fn rejects_in_condition_order() {
        let (omega, psi) = standard_pair::<Q>();
        let dec = SU3Candidate::new(omega.clone(), KForm::basis(6, &[0, 1, 2]), vol()).unwrap();
        assert!(matches!(build_su3(&dec, 0.0), Err(Error::NotStable { .. })));
        let bad_type = SU3Candidate::new(omega.add(&KForm::basis(6, &[0, 2])), psi.clone(), vol()).unwrap();
        assert_eq!(build_su3(&bad_type, 0.0).unwrap_err(), Error::NotType11);
        let deg = SU3Candidate::new(KForm::basis(6, &[0, 1]), psi, vol()).unwrap();
        assert_eq!(build_su3(&deg, 0.0).unwrap_err(), Error::DegenerateOmega);
    }

    #[test]
    fn slot_inconsistency_detected() {
        let psi = KForm::<Q>::basis(6, &[0, 1, 2]);
        let (_, psi0) = standard_pair::<Q>();
        let c = SU3Candidate::oriented(standard_pair::<Q>().0, psi0, 0.0).unwrap();
        let j = build_su3(&c, 0.0).unwrap().j;
        assert_eq!(phi_from(&psi, &j, 0.0).unwrap_err(), Error::SlotInconsistent);
    }

    #[test]
    fn float_homogeneity() {
        let (omega, psi) = standard_pair::<f64>();
        let c = SU3Candidate::oriented(omega.clone(), psi.clone(), 1e-12).unwrap();
        let s1 = build_su3(&c, 1e-12).unwrap();
        let c2 = SU3Candidate::oriented(omega, psi.scale(&2.5), 1e-12).unwrap();
        let t2 = tau(&c2.psi, &c2.vol).unwrap();
        assert!((t2 - s1.tau0 * 2.5f64.powi(4)).abs() < 1e-9);
        let k2 = hitchin_k(&c2.psi, &c2.vol).unwrap();
        let j2 = k2.scale(&(1.0 / (-t2).sqrt()));
        assert!(j2.approx_eq(&s1.j, 1e-12));
    }
}
