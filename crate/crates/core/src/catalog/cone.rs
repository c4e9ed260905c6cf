//! Forms on the Riemannian cone `(M × ℝ⁺, r²g + dr²)` over a six-dimensional
//! link, written as sums of `rᵃ β` and `rᵃ dr∧α` with `β`, `α` link forms.
//!
//! With the orientation `dr ∧ vol_g` the cone Hodge star is, for a link
//! `k`-form,
//!
//! ```text
//! *(rᵃ β)      = (−1)ᵏ r^{a+6−2k} dr ∧ *β
//! *(rᵃ dr∧α)   =        r^{a+6−2k} *α
//! ```
//!
//! and `d(rᵃβ) = a r^{a−1} dr∧β + rᵃ dβ`, `d(rᵃ dr∧α) = −rᵃ dr∧dα`.

use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::hitchin::{build_su3, nk_residuals, standard_pair, SU3Candidate, SU3Structure};
use crate::linalg::{Gram, Matrix, Vector};
use crate::s3xs3::{check_exact, check_float, su3_admissible, CyclicCoframe, DiagonalInvariantForm};
use crate::scalar::{format_rational, QSqrt3, Rational, Scalar};

/// Exterior calculus on the link.
pub trait LinkGeometry {
    type Form: Clone + std::fmt::Debug;
    fn degree(&self, f: &Self::Form) -> usize;
    fn add(&self, a: &Self::Form, b: &Self::Form) -> Self::Form;
    fn scale_int(&self, a: &Self::Form, s: i64) -> Self::Form;
    fn d(&self, f: &Self::Form) -> Result<Self::Form>;
    fn star(&self, f: &Self::Form) -> Result<Self::Form>;
    fn max_abs(&self, f: &Self::Form) -> f64;
}

#[derive(Clone, Debug)]
pub struct ConeTerm<F> {
    pub a: i32,
    pub with_dr: bool,
    pub form: F,
}

#[derive(Clone, Debug)]
pub struct ConeForm<F> {
    pub terms: Vec<ConeTerm<F>>,
}

impl<F: Clone + std::fmt::Debug> ConeForm<F> {
    pub fn new() -> Self {
        ConeForm { terms: Vec::new() }
    }

    /// Adds a term, merging with an existing one of the same shape.
    pub fn push<L: LinkGeometry<Form = F>>(&mut self, link: &L, a: i32, with_dr: bool, form: F) {
        let k = link.degree(&form);
        if let Some(t) = self.terms.iter_mut().find(|t| t.a == a && t.with_dr == with_dr && link.degree(&t.form) == k) {
            t.form = link.add(&t.form, &form);
        } else {
            self.terms.push(ConeTerm { a, with_dr, form });
        }
    }

    pub fn term(&self, a: i32, with_dr: bool) -> Option<&F> {
        self.terms.iter().find(|t| t.a == a && t.with_dr == with_dr).map(|t| &t.form)
    }

    pub fn max_abs<L: LinkGeometry<Form = F>>(&self, link: &L) -> f64 {
        self.terms.iter().map(|t| link.max_abs(&t.form)).fold(0.0, f64::max)
    }
}

impl<F: Clone + std::fmt::Debug> Default for ConeForm<F> {
    fn default() -> Self {
        Self::new()
    }
}

/// `ρ = r² dr∧ω + r³ ψ`.
pub fn cone_three_form<L: LinkGeometry>(link: &L, omega: &L::Form, psi: &L::Form) -> ConeForm<L::Form> {
    let mut rho = ConeForm::new();
    rho.push(link, 2, true, omega.clone());
    rho.push(link, 3, false, psi.clone());
    rho
}

pub fn cone_differential<L: LinkGeometry>(link: &L, c: &ConeForm<L::Form>) -> Result<ConeForm<L::Form>> {
    let mut out = ConeForm::new();
    for t in &c.terms {
        if t.with_dr {
            out.push(link, t.a, true, link.scale_int(&link.d(&t.form)?, -1));
        } else {
            if t.a != 0 {
                out.push(link, t.a - 1, true, link.scale_int(&t.form, t.a as i64));
            }
            out.push(link, t.a, false, link.d(&t.form)?);
        }
    }
    Ok(out)
}

pub fn cone_star<L: LinkGeometry>(link: &L, c: &ConeForm<L::Form>) -> Result<ConeForm<L::Form>> {
    let mut out = ConeForm::new();
    for t in &c.terms {
        let k = link.degree(&t.form) as i32;
        let a = t.a + 6 - 2 * k;
        let s = link.star(&t.form)?;
        if t.with_dr {
            out.push(link, a, false, s);
        } else {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.push(link, a, true, link.scale_int(&s, sign));
        }
    }
    Ok(out)
}

/// Link given by ordinary forms on a six-dimensional space with a
/// differential, a metric and a unit volume form.
pub struct FormLink<'a, S: Scalar> {
    pub d: &'a dyn Fn(&KForm<S>) -> Result<KForm<S>>,
    pub g: Gram<S>,
    pub vol: KForm<S>,
    pub tol: f64,
}

impl<S: Scalar> LinkGeometry for FormLink<'_, S> {
    type Form = KForm<S>;
    fn degree(&self, f: &KForm<S>) -> usize {
        f.degree()
    }
    fn add(&self, a: &KForm<S>, b: &KForm<S>) -> KForm<S> {
        a.add(b)
    }
    fn scale_int(&self, a: &KForm<S>, s: i64) -> KForm<S> {
        a.scale(&S::from_i64(s))
    }
    fn d(&self, f: &KForm<S>) -> Result<KForm<S>> {
        (self.d)(f)
    }
    fn star(&self, f: &KForm<S>) -> Result<KForm<S>> {
        f.hodge_star(&self.g, &self.vol, self.tol)
    }
    fn max_abs(&self, f: &KForm<S>) -> f64 {
        f.max_abs()
    }
}

/// A form on the unit sphere `S⁶ ⊂ ℝ⁷` written as the restriction of
/// `ι_E A + B` with `A`, `B` constant forms on `ℝ⁷` and `E` the position
/// field.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereForm<S: Scalar> {
    pub a: KForm<S>,
    pub b: KForm<S>,
}

impl<S: Scalar> SphereForm<S> {
    /// `ι_E A`.
    pub fn radial(a: KForm<S>) -> Self {
        let k = a.degree() - 1;
        SphereForm { a, b: KForm::zero(7, k) }
    }

    /// Restriction of the constant form `B`.
    pub fn constant(b: KForm<S>) -> Self {
        let k = b.degree();
        SphereForm { a: KForm::zero(7, k + 1), b }
    }
}

/// The round unit sphere in ℝ⁷: `d(ι_E A) = (k+1) A` for a constant
/// `(k+1)`-form, and with `vol₇ = dr ∧ vol_{S⁶}`,
/// `*(ι_E A) = *₇A`, `*(B) = (−1)ᵏ ι_E *₇B`.
pub struct SphereLink<S>(PhantomData<S>);

impl<S: Scalar> SphereLink<S> {
    pub fn new() -> Self {
        SphereLink(PhantomData)
    }
}

impl<S: Scalar> Default for SphereLink<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl SphereLink<()> {
    fn star7<S: Scalar>(f: &KForm<S>) -> Result<KForm<S>> {
        f.hodge_star(&Gram::identity(7), &KForm::basis(7, &[0, 1, 2, 3, 4, 5, 6]), 0.0)
    }
}

impl<S: Scalar> LinkGeometry for SphereLink<S> {
    type Form = SphereForm<S>;
    fn degree(&self, f: &SphereForm<S>) -> usize {
        f.b.degree()
    }
    fn add(&self, x: &SphereForm<S>, y: &SphereForm<S>) -> SphereForm<S> {
        SphereForm { a: x.a.add(&y.a), b: x.b.add(&y.b) }
    }
    fn scale_int(&self, x: &SphereForm<S>, s: i64) -> SphereForm<S> {
        let s = S::from_i64(s);
        SphereForm { a: x.a.scale(&s), b: x.b.scale(&s) }
    }
    fn d(&self, f: &SphereForm<S>) -> Result<SphereForm<S>> {
        let k1 = f.a.degree() as i64;
        Ok(SphereForm { a: KForm::zero(7, f.b.degree() + 2), b: f.a.scale(&S::from_i64(k1)) })
    }
    fn star(&self, f: &SphereForm<S>) -> Result<SphereForm<S>> {
        let k = f.b.degree();
        let sign = S::from_i64(if k.is_multiple_of(2) { 1 } else { -1 });
        Ok(SphereForm { a: SphereLink::star7(&f.b)?.scale(&sign), b: SphereLink::star7(&f.a)? })
    }
    fn max_abs(&self, f: &SphereForm<S>) -> f64 {
        f.a.max_abs().max(f.b.max_abs())
    }
}

/// `ρ` at `r = 1` in the orthonormal co-frame `u₀ = dr`, `uᵢ = r eᵢ`,
/// as a 3-form on ℝ⁷. A term `rᵃ β` of link degree `k` contributes
/// `r^{a−k} β(u)`, so only scale-invariant terms survive all `r`.
pub fn u_expansion<S: Scalar>(c: &ConeForm<KForm<S>>) -> Result<(KForm<S>, bool)> {
    let shift = Matrix::from_fn(6, 7, |i, j| if j == i + 1 { S::one() } else { S::zero() });
    let mut out: Option<KForm<S>> = None;
    let mut scale_invariant = true;
    for t in &c.terms {
        let k = t.form.degree();
        scale_invariant &= t.a == k as i32;
        let mut f = t.form.pullback(&shift)?;
        if t.with_dr {
            f = KForm::basis(7, &[0]).wedge(&f)?;
        }
        out = Some(match out {
            None => f,
            Some(o) => o.add(&f),
        });
    }
    let out = out.ok_or_else(|| Error::Dimension("empty cone form".into()))?;
    Ok((out, scale_invariant))
}

/// `ι_{u_a}ρ ∧ ι_{u_b}ρ ∧ ρ = c·δ_ab·vol₇`; returns `c` when the identity
/// holds with a single constant.
pub fn g2_metric_constant<S: Scalar>(rho7: &KForm<S>, tol: f64) -> Result<Option<S>> {
    let mut c: Option<S> = None;
    for a in 0..7 {
        let ia = rho7.interior(&Vector::basis(7, a))?;
        for b in 0..7 {
            let ib = rho7.interior(&Vector::basis(7, b))?;
            let v = ia.wedge(&ib)?.wedge(rho7)?.top();
            if a != b {
                if !v.is_zero_within(tol) {
                    return Ok(None);
                }
            } else {
                match &c {
                    None => c = Some(v),
                    Some(c0) => {
                        if !(v - c0.clone()).is_zero_within(tol) {
                            return Ok(None);
                        }
                    }
                }
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConeReport {
    /// Homothety factor `ν² = ψ∧φ / (⅔ ω³)` applied to `(g, ω, ψ, φ)`.
    pub nu2: f64,
    pub d_rho_residual: f64,
    pub d_star_rho_residual: f64,
    pub d_rho_zero: bool,
    pub d_star_rho_zero: bool,
    pub cone_verdict: bool,
    pub nk_verdict: bool,
    pub agree: bool,
    /// Least-squares coefficient of `r⁴ ω∧ω` in `*ρ`.
    pub r4_coefficient: f64,
    pub r4_fit_residual: f64,
    /// `max |*ψ − φ|`: the `r³ dr` part of `*ρ` is `−r³ dr∧*ψ`.
    pub dr_part_minus_phi_deviation: f64,
    /// `μ/2` with `μ` of the structure as given, before rescaling.
    pub mu_over_two_unnormalized: f64,
}

/// Cone check of a homogeneous SU(3)-structure with link differential `d`.
/// The structure is first rescaled so that `ψ∧φ = ⅔ ω³`.
pub fn cone_check<S: Scalar>(
    s: &SU3Structure<S>,
    d: &dyn Fn(&KForm<S>) -> Result<KForm<S>>,
    tol: f64,
) -> Result<ConeReport> {
    let nk = nk_residuals(s, d)?;
    let nk_verdict = nk.residual_r1 <= tol && nk.residual_r2 <= tol;
    let w3 = s.omega_cubed();
    let nu2 = s.psi_wedge_phi() / (S::from_ratio(2, 3) * w3);
    if !nu2.is_positive_within(tol) {
        return Err(Error::NotPositive);
    }
    let omega = s.omega.scale(&nu2);
    let psi = s.psi.scale(&nu2);
    let phi = s.phi.scale(&nu2);
    let g = Gram::new(s.g.matrix().scale(&nu2), tol)?;
    let vol = omega.wedge(&omega)?.wedge(&omega)?.scale(&S::from_ratio(1, 6));
    let link = FormLink { d, g, vol, tol };

    let rho = cone_three_form(&link, &omega, &psi);
    let d_rho = cone_differential(&link, &rho)?;
    let star_rho = cone_star(&link, &rho)?;
    let d_star_rho = cone_differential(&link, &star_rho)?;
    let d_rho_residual = d_rho.max_abs(&link);
    let d_star_rho_residual = d_star_rho.max_abs(&link);
    let d_rho_zero = d_rho_residual <= tol;
    let d_star_rho_zero = d_star_rho_residual <= tol;

    let w2 = omega.wedge(&omega)?;
    let (r4_coefficient, r4_fit_residual) = match star_rho.term(4, false) {
        Some(f) => {
            let c = f.coeff_dot(&w2) / w2.coeff_dot(&w2);
            (c.to_f64(), f.sub(&w2.scale(&c)).max_abs())
        }
        None => (0.0, w2.max_abs()),
    };
    let dr_part_minus_phi_deviation = match star_rho.term(3, true) {
        Some(f) => f.neg().sub(&phi).max_abs(),
        None => phi.max_abs(),
    };
    let cone_verdict = d_rho_zero && d_star_rho_zero;
    Ok(ConeReport {
        nu2: nu2.to_f64(),
        d_rho_residual,
        d_star_rho_residual,
        d_rho_zero,
        d_star_rho_zero,
        cone_verdict,
        nk_verdict,
        agree: cone_verdict == nk_verdict,
        r4_coefficient,
        r4_fit_residual,
        dr_part_minus_phi_deviation,
        mu_over_two_unnormalized: nk.mu.to_f64() / 2.0,
    })
}

/// Cone over the round S⁶ with `ω = ι_E φ₀`, `ψ = φ₀|`, optionally with the
/// phase of `ψ + iφ` rotated by `(c, s)`, `c² + s² = 1`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SphereConeReport {
    pub phase: (String, String),
    pub d_rho_residual: f64,
    pub d_star_rho_residual: f64,
    /// `|dω − 3ψ|`.
    pub nk_residual: f64,
    pub cone_verdict: bool,
    pub nk_verdict: bool,
    pub agree: bool,
}

pub fn sphere_cone_check<S: Scalar>(c: S, s: S, tol: f64) -> Result<SphereConeReport> {
    let link = SphereLink::<S>::new();
    let phi0 = super::octonion::phi0::<S>();
    let omega = SphereForm::radial(phi0.clone());
    let psi0 = SphereForm::constant(phi0.clone());
    // φ on the sphere, up to sign, is the restriction of ι_E *₇φ₀
    let phi = SphereForm::radial(SphereLink::star7(&phi0)?);
    let psi = SphereForm { a: phi.a.scale(&s), b: psi0.b.scale(&c) };
    let rho = cone_three_form(&link, &omega, &psi);
    let d_rho = cone_differential(&link, &rho)?;
    let d_star_rho = cone_differential(&link, &cone_star(&link, &rho)?)?;
    let d_omega = <SphereLink<S> as LinkGeometry>::d(&link, &omega)?;
    let nk_residual = <SphereLink<S> as LinkGeometry>::max_abs(&link, &link.add(&d_omega, &link.scale_int(&psi, -3)));
    let d_rho_residual = d_rho.max_abs(&link);
    let d_star_rho_residual = d_star_rho.max_abs(&link);
    let cone_verdict = d_rho_residual <= tol && d_star_rho_residual <= tol;
    let nk_verdict = nk_residual <= tol;
    Ok(SphereConeReport {
        phase: (format!("{c:?}"), format!("{s:?}")),
        d_rho_residual,
        d_star_rho_residual,
        nk_residual,
        cone_verdict,
        nk_verdict,
        agree: cone_verdict == nk_verdict,
    })
}

/// The model 3-form in the co-frame `u₀ = dr`, `uᵢ = r eᵢ`:
/// `u₀₁₂ + u₀₃₄ + u₀₅₆ + u₁₃₅ − u₁₄₆ − u₂₃₆ − u₂₄₅` (1-based labels).
pub fn model_g2_form<S: Scalar>() -> KForm<S> {
    let one = S::one;
    KForm::from_terms(
        7,
        3,
        [
            (&[0usize, 1, 2][..], one()),
            (&[0, 3, 4][..], one()),
            (&[0, 5, 6][..], one()),
            (&[1, 3, 5][..], one()),
            (&[1, 4, 6][..], -one()),
            (&[2, 3, 6][..], -one()),
            (&[2, 4, 5][..], -one()),
        ],
    )
    .expect("valid indices")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Perturbation {
    pub label: String,
    pub report: ConeReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConeVerifyReport {
    pub model_expansion_matches: bool,
    pub model_scale_invariant: bool,
    /// `c` in `ι_Xρ ∧ ι_Yρ ∧ ρ = c g(X,Y) vol`.
    pub g2_constant: Option<String>,
    pub s3xs3_exact: ConeReport,
    pub s3xs3_float: ConeReport,
    pub d_squared_zero: bool,
    pub sphere: SphereConeReport,
    pub sphere_rotations: Vec<SphereConeReport>,
    pub perturbations: Vec<Perturbation>,
    pub verdict: bool,
}

fn s3xs3_with_psi(cf: &CyclicCoframe<f64>, l: [f64; 3], psi_of: impl Fn(&SU3Structure<f64>) -> KForm<f64>, tol: f64) -> Result<ConeReport> {
    let d = DiagonalInvariantForm::new(l[0], l[1], l[2], tol)?;
    let base = build_su3(&d.candidate(cf)?, tol)?;
    let psi = psi_of(&base);
    let s = build_su3(&SU3Candidate::oriented(base.omega.clone(), psi, tol)?, tol)?;
    cone_check(&s, &|a: &KForm<f64>| cf.d(a), tol)
}

/// Twenty non-nearly-Kähler SU(3)-structures on S³×S³: unequal diagonal
/// parameters, phase rotations `ψ ↦ cψ + sφ`, and rescalings of `ψ`.
pub fn s3xs3_perturbations(tol: f64) -> Result<Vec<Perturbation>> {
    let cf = CyclicCoframe::<f64>::new()?;
    let mut out = Vec::new();
    let triples = [
        [1.0, 1.0, 1.5],
        [1.0, 1.0, 0.8],
        [1.0, 1.2, 1.4],
        [0.9, 1.0, 1.1],
        [2.0, 1.0, 1.0],
        [1.0, 0.5, 1.0],
        [1.3, 1.1, 1.2],
        [1.0, 1.0, 1.05],
        [0.7, 1.0, 1.0],
        [1.1, 0.9, 1.0],
        [1.0, 1.0, 1.25],
        [1.0, 1.1, 1.0],
        [0.95, 1.05, 1.0],
    ];
    for l in triples {
        if out.len() == 10 {
            break;
        }
        let d = DiagonalInvariantForm::new(l[0], l[1], l[2], tol)?;
        if !su3_admissible(&d, tol) {
            continue;
        }
        let report = s3xs3_with_psi(&cf, l, |s| s.psi.clone(), tol)?;
        out.push(Perturbation { label: format!("lambda = {l:?}"), report });
    }
    for (c, s) in [(3.0, 4.0), (4.0, 3.0), (5.0, 12.0), (12.0, 5.0), (8.0, 15.0)] {
        let h = f64::hypot(c, s);
        let (c, s) = (c / h, s / h);
        let report = s3xs3_with_psi(&cf, [1.0; 3], |b| b.psi.scale(&c).add(&b.phi.scale(&s)), tol)?;
        out.push(Perturbation { label: format!("phase ({c:.4}, {s:.4})"), report });
    }
    for e in [0.1, 0.5, -0.2, 2.0, -0.5] {
        let report = s3xs3_with_psi(&cf, [1.0; 3], |b| b.psi.scale(&(1.0 + e)), tol)?;
        out.push(Perturbation { label: format!("psi scaled by {}", 1.0 + e), report });
    }
    Ok(out)
}

pub fn cone_verify(tol: f64) -> Result<ConeVerifyReport> {
    let (omega, psi) = standard_pair::<Rational>();
    let none = |_: &KForm<Rational>| -> Result<KForm<Rational>> { Err(Error::Dimension("no differential".into())) };
    let flat = FormLink { d: &none, g: Gram::identity(6), vol: KForm::basis(6, &[0, 1, 2, 3, 4, 5]), tol: 0.0 };
    let (rho7, model_scale_invariant) = u_expansion(&cone_three_form(&flat, &omega, &psi))?;
    let model_expansion_matches = rho7 == model_g2_form::<Rational>();
    let g2_constant = g2_metric_constant(&rho7, 0.0)?.map(|c| format_rational(&c));

    let cf = CyclicCoframe::<QSqrt3>::new()?;
    let (s, _) = check_exact(&DiagonalInvariantForm::uniform(QSqrt3::one())?)?;
    let dq = |a: &KForm<QSqrt3>| cf.d(a);
    let s3xs3_exact = cone_check(&s, &dq, 0.0)?;

    // d∘d on ρ and *ρ of the rescaled structure
    let nu2 = s.psi_wedge_phi() / (QSqrt3::from_ratio(2, 3) * s.omega_cubed());
    let w = s.omega.scale(&nu2);
    let link = FormLink {
        d: &dq,
        g: Gram::new(s.g.matrix().scale(&nu2), 0.0)?,
        vol: w.wedge(&w)?.wedge(&w)?.scale(&QSqrt3::from_ratio(1, 6)),
        tol: 0.0,
    };
    let rho = cone_three_form(&link, &w, &s.psi.scale(&nu2));
    let dd = |c: &ConeForm<KForm<QSqrt3>>| -> Result<f64> {
        Ok(cone_differential(&link, &cone_differential(&link, c)?)?.max_abs(&link))
    };
    let d_squared_zero = dd(&rho)? == 0.0 && dd(&cone_star(&link, &rho)?)? == 0.0;

    let cf_f = CyclicCoframe::<f64>::new()?;
    let (sf, _) = check_float(&DiagonalInvariantForm::uniform(1.0)?, tol)?;
    let s3xs3_float = cone_check(&sf, &|a: &KForm<f64>| cf_f.d(a), tol)?;

    let sphere = sphere_cone_check(Rational::one(), Rational::zero(), 0.0)?;
    let q = <Rational as Scalar>::from_ratio;
    let sphere_rotations = [(3, 4, 5), (4, 3, 5), (5, 12, 13), (-1, 0, 1)]
        .iter()
        .map(|&(c, s, h)| sphere_cone_check(q(c, h), q(s, h), 0.0))
        .collect::<Result<Vec<_>>>()?;
    let perturbations = s3xs3_perturbations(tol)?;

    let verdict = model_expansion_matches
        && model_scale_invariant
        && g2_constant.is_some()
        && s3xs3_exact.cone_verdict
        && s3xs3_exact.nk_verdict
        && s3xs3_float.cone_verdict
        && s3xs3_float.agree
        && d_squared_zero
        && sphere.cone_verdict
        && sphere.agree
        && sphere_rotations.iter().all(|r| r.agree && !r.cone_verdict)
        && perturbations.len() == 20
        && perturbations.iter().all(|p| p.report.agree && !p.report.cone_verdict);
    Ok(ConeVerifyReport {
        model_expansion_matches,
        model_scale_invariant,
        g2_constant,
        s3xs3_exact,
        s3xs3_float,
        d_squared_zero,
        sphere,
        sphere_rotations,
        perturbations,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_coframe_expansion() {
        let (omega, psi) = standard_pair::<Rational>();
        let zero = |_: &KForm<Rational>| -> Result<KForm<Rational>> { unreachable!() };
        let link = FormLink { d: &zero, g: Gram::identity(6), vol: KForm::basis(6, &[0, 1, 2, 3, 4, 5]), tol: 0.0 };
        let (rho7, invariant) = u_expansion(&cone_three_form(&link, &omega, &psi)).unwrap();
        assert!(invariant);
        let one = Rational::from_integer(1.into());
        let want = KForm::from_terms(
            7,
            3,
            [
                (&[0usize, 1, 2][..], one.clone()),
                (&[0, 3, 4][..], one.clone()),
                (&[0, 5, 6][..], one.clone()),
                (&[1, 3, 5][..], one.clone()),
                (&[1, 4, 6][..], -one.clone()),
                (&[2, 3, 6][..], -one.clone()),
                (&[2, 4, 5][..], -one),
            ],
        )
        .unwrap();
        assert_eq!(rho7, want);
        assert_eq!(g2_metric_constant(&rho7, 0.0).unwrap(), Some(Rational::from_integer(6.into())));
    }

    #[test]
    fn s3xs3_cone_is_torsion_free() {
        let cf = CyclicCoframe::<QSqrt3>::new().unwrap();
        let (s, _) = check_exact(&DiagonalInvariantForm::uniform(QSqrt3::one()).unwrap()).unwrap();
        let r = cone_check(&s, &|a: &KForm<QSqrt3>| cf.d(a), 0.0).unwrap();
        assert!(r.cone_verdict && r.nk_verdict, "{r:?}");
    }

    #[test]
    fn perturbed_s3xs3_fails() {
        let cf = CyclicCoframe::<f64>::new().unwrap();
        let d = DiagonalInvariantForm::new(1.0, 1.0, 1.5, 1e-12).unwrap();
        let s = build_su3(&d.candidate(&cf).unwrap(), 1e-10).unwrap();
        let r = cone_check(&s, &|a: &KForm<f64>| cf.d(a), 1e-10).unwrap();
        assert!(!r.cone_verdict && !r.nk_verdict);
    }

    #[test]
    fn full_verification() {
        let r = cone_verify(1e-10).unwrap();
        assert_eq!(r.perturbations.len(), 20);
        assert_eq!(r.g2_constant.as_deref(), Some("6"));
        assert!((r.s3xs3_exact.r4_coefficient - 0.5).abs() < 1e-12, "{:?}", r.s3xs3_exact);
        assert!(r.verdict, "{r:#?}");
    }

    #[test]
    fn sphere_cone() {
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        let r = sphere_cone_check(one, zero, 0.0).unwrap();
        assert!(r.cone_verdict && r.nk_verdict, "{r:?}");
        let r = sphere_cone_check(<Rational as Scalar>::from_ratio(3, 5), <Rational as Scalar>::from_ratio(4, 5), 0.0).unwrap();
        assert!(!r.cone_verdict && !r.nk_verdict);
    }
}
