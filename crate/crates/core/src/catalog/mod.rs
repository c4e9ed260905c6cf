//! Concrete homogeneous models and their verifications.
//!
//! Every model exposes its Lie algebra data together with the invariant
//! metric and almost complex structure, so the same structure can be fed
//! to the metric oracle (Nomizu connection, `(∇_X J)X = 0`) and to the
//! form oracle (`ψ = dω/3`, Hitchin's construction, `dφ ∝ ω∧ω`).

pub mod cone;
pub mod cp3;
pub mod flag;
pub mod ledger_obata;
pub mod octonion;
pub mod table;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exterior::KForm;
use crate::hitchin::{nk_check, NKReport, SU3Candidate, SU3Structure};
use crate::lie::{intrinsic_eta, nearly_kahler_nabla_j, ricci, InvariantMetric, ReductiveSpace};
use crate::s3xs3::{check_exact, CyclicCoframe, DiagonalInvariantForm};
use crate::linalg::{Endo, Gram};
use crate::scalar::{QSqrt3, Rational, Scalar};

/// `ω(X,Y) = g(JX,Y)`, so that `g(X,Y) = ω(X,JY)`.
pub fn kahler_form<S: Scalar>(g: &Gram<S>, j: &Endo<S>) -> KForm<S> {
    let n = g.dim();
    let w = j.transpose().mul(g.matrix());
    let mut omega = KForm::zero(n, 2);
    for a in 0..n {
        for b in a + 1..n {
            omega = omega.add(&KForm::term(n, &[a, b], w[(a, b)].clone()));
        }
    }
    omega
}

/// Form oracle on an invariant 2-form: `ψ = dω/3`, orientation from `ω³`,
/// then the nearly Kähler system with the invariant differential.
pub fn nk_from_omega<S: Scalar>(
    space: &ReductiveSpace<S>,
    omega: &KForm<S>,
    tol: f64,
) -> Result<(SU3Structure<S>, NKReport<S>)> {
    let psi = space.ce_differential(omega, tol)?.scale(&S::from_ratio(1, 3));
    let c = SU3Candidate::oriented(omega.clone(), psi, tol)?;
    nk_check(&c, |a| space.ce_differential(a, tol), tol)
}

/// Agreement of the metric and form oracles on one almost Hermitian
/// structure.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CrossOracle {
    pub nabla_jx_residual: f64,
    pub eta_skew_defect: f64,
    pub eta_parallel_defect: f64,
    /// Form oracle verdict; `false` also when Hitchin's construction fails.
    pub form_verdict: bool,
    /// Condition that stopped the form oracle, if any.
    pub form_failure: Option<String>,
    pub form_mu: Option<f64>,
    /// `min ‖J_Hitchin ∓ J‖`, the sign being the orientation ambiguity.
    pub j_deviation: Option<f64>,
    pub metric_verdict: bool,
    pub agree: bool,
}

/// Runs both oracles in floating point.
pub fn cross_oracle<S: Scalar>(
    space: &ReductiveSpace<S>,
    g: &Gram<S>,
    j: &Endo<S>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CrossOracle> {
    let space = space.map(Scalar::to_f64);
    let g = g.map(Scalar::to_f64);
    let j = j.map(Scalar::to_f64);
    let metric = InvariantMetric::new(&space, g.clone(), tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let def2 = nearly_kahler_nabla_j(&space, &metric, &j, samples, &mut rng, tol)?;
    let (eta, lc) = intrinsic_eta(&space, &metric, &j, tol)?;
    let skew = eta.skew_defect(&g);
    let parallel = eta.parallel_defect(&lc);
    let metric_verdict = def2.verdict && skew <= tol && parallel <= tol;

    let omega = kahler_form(&g, &j);
    let (form_verdict, form_failure, form_mu, j_deviation) = match nk_from_omega(&space, &omega, tol) {
        Ok((s, r)) => {
            let dev = s.j.sub(&j).max_abs().min(s.j.add(&j).max_abs());
            (r.verdict && dev <= tol.max(1e-9), None, Some(r.mu), Some(dev))
        }
        Err(e) => (false, Some(e.condition().to_string()), None, None),
    };
    Ok(CrossOracle {
        nabla_jx_residual: def2.residual,
        eta_skew_defect: skew,
        eta_parallel_defect: parallel,
        form_verdict,
        form_failure,
        form_mu,
        j_deviation,
        metric_verdict,
        agree: metric_verdict == form_verdict,
    })
}

/// A named catalog structure with its cross-oracle verdicts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NamedCrossOracle {
    pub name: String,
    pub oracle: CrossOracle,
}

/// Cross-oracle on every homogeneous nearly Kähler structure of the
/// catalog: S³×S³ as a group with the Hitchin metric, S³×S³ as
/// `SU(2)³/Δ` with the normal metric, the flag manifold with equal
/// scalings, and ℂP³ at fibre scaling ½.
pub fn catalog_cross_oracles(samples: usize, seed: u64, tol: f64) -> Result<Vec<NamedCrossOracle>> {
    let mut out = Vec::new();
    let cf = CyclicCoframe::<QSqrt3>::new()?;
    let (s, _) = check_exact(&DiagonalInvariantForm::uniform(QSqrt3::one())?)?;
    out.push(NamedCrossOracle {
        name: "S3xS3 (group, lambda = 1)".into(),
        oracle: cross_oracle(cf.space(), &s.g, &s.j, samples, seed, tol)?,
    });

    let lo = ledger_obata::ledger_obata_su2()?;
    out.push(NamedCrossOracle {
        name: "S3xS3 = SU(2)^3/SU(2)".into(),
        oracle: cross_oracle(&lo.space, lo.metric.gram(), &lo.j, samples, seed, tol)?,
    });

    let fm = flag::flag_model()?;
    let one = <Rational as Scalar>::one;
    out.push(NamedCrossOracle {
        name: "F3 (1,1,1)".into(),
        oracle: cross_oracle(&fm.space, &fm.metric(one(), one(), one()), &fm.acs::<Rational>([1, 1, 1]), samples, seed, tol)?,
    });

    let cp = cp3::cp3_model()?;
    let g = cp.metric(<Rational as Scalar>::from_ratio(1, 2));
    for (sp, sv) in [(1, 1), (1, -1)] {
        let j = cp.acs(sp, sv)?;
        let omega = kahler_form(&g, &j);
        if matches!(nk_from_omega(&cp.space, &omega, 0.0), Ok((_, r)) if r.verdict) {
            out.push(NamedCrossOracle {
                name: format!("CP3 t = 1/2 ({sp:+}, {sv:+})"),
                oracle: cross_oracle(&cp.space, &g, &j, samples, seed, tol)?,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EinsteinReport {
    pub scalar_curvature: f64,
    pub scalar_curvature_exact: String,
    pub einstein_deviation: f64,
    pub verdict: bool,
}

/// Ricci tensor of the nearly Kähler metric on S³×S³, exactly over `ℚ(√3)`.
pub fn s3xs3_einstein(tol: f64) -> Result<EinsteinReport> {
    let cf = CyclicCoframe::<QSqrt3>::new()?;
    let (s, _) = check_exact(&DiagonalInvariantForm::uniform(QSqrt3::one())?)?;
    let metric = InvariantMetric::new(cf.space(), s.g.clone(), 0.0)?;
    let r = ricci(cf.space(), &metric, 0.0)?;
    let scal = r.scalar_curvature.to_f64();
    Ok(EinsteinReport {
        scalar_curvature: scal,
        scalar_curvature_exact: r.scalar_curvature.to_string(),
        einstein_deviation: r.einstein_deviation,
        verdict: scal > 0.0 && r.einstein_deviation <= tol,
    })
}

pub(crate) fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_structure_passes_both_oracles() {
        let all = catalog_cross_oracles(8, 3, 1e-10).unwrap();
        assert_eq!(all.len(), 4);
        for n in &all {
            assert!(n.oracle.metric_verdict && n.oracle.form_verdict && n.oracle.agree, "{n:?}");
        }
    }

    #[test]
    fn s3xs3_is_einstein() {
        let r = s3xs3_einstein(1e-8).unwrap();
        assert!(r.verdict, "{r:?}");
        assert_eq!(r.einstein_deviation, 0.0);
    }
}
