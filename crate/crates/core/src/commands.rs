//! Report-producing entry points shared by the command line and the C ABI.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::catalog::cone::{cone_check, cone_verify};
use crate::catalog::cp3::{cp3_model, cp3_verify};
use crate::catalog::flag::{flag_model, flag_verify};
use crate::catalog::ledger_obata::{ledger_obata_rational, ledger_obata_verify, normal_gram};
use crate::catalog::octonion::s6_verify;
use crate::catalog::table::table_check;
use crate::catalog::{catalog_cross_oracles, cross_oracle, kahler_form, nk_from_omega, s3xs3_einstein};
use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::hitchin::{nk_check, tau, SU3Candidate};
use crate::report::Report;
use crate::s3xs3::{check_float, solve_nk, tau_identity, CyclicCoframe, DiagonalInvariantForm};
use crate::scalar::{QSqrt3, Rational, Scalar, DEFAULT_TOLERANCE};
use crate::spec_io::SpaceSpec;

/// The value `1/(2√3)` displayed for `μ` at `λ = 1`.
pub fn displayed_mu_at_one() -> QSqrt3 {
    QSqrt3::one() / (QSqrt3::from_i64(2) * QSqrt3::sqrt3())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Options {
    pub tolerance: f64,
    pub scalar: ScalarMode,
    pub seed: u64,
    /// Side of the flag grid `{1..n}³`.
    pub grid: i64,
    pub samples: usize,
    /// The S³×S³ sweep uses `λᵢ = k/den`, `0 < |k| ≤ max`.
    pub sweep_denominator: i64,
    pub sweep_max_numerator: i64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tolerance: DEFAULT_TOLERANCE,
            scalar: ScalarMode::Exact,
            seed: 0,
            grid: 4,
            samples: 100,
            sweep_denominator: 4,
            sweep_max_numerator: 20,
        }
    }
}

fn finish(mut r: Report, start: Instant, details: impl Serialize) -> Report {
    r.details = serde_json::to_value(details).expect("serializable");
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

fn inputs(o: &Options) -> serde_json::Value {
    serde_json::to_value(o).expect("serializable")
}

pub const SPACES: [&str; 6] = ["s3xs3", "flag", "cp3", "s6", "ledger-obata", "cone"];

pub fn verify(space: &str, o: &Options) -> Result<Report> {
    match space {
        "s3xs3" => verify_s3xs3(o),
        "flag" => verify_flag(o),
        "cp3" => verify_cp3(o),
        "s6" => verify_s6(o),
        "ledger-obata" => verify_ledger_obata(o),
        "cone" => verify_cone(o),
        other => Err(Error::Parse(format!("unknown space {other:?}; expected one of {}", SPACES.join(", ")))),
    }
}

pub fn verify_s3xs3(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify s3xs3", inputs(o), o.tolerance);
    let solve = solve_nk(o.sweep_denominator, o.sweep_max_numerator)?;
    r.check("solution family (λ,λ,λ), λ > 0", solve.verdict, "dω = 3ψ, dφ = −2μ ω∧ω uniqueness");
    r.check_detail(
        "sweep: every admissible non-equal triple has positive residual",
        solve.sweep.false_positives == 0 && solve.sweep.non_equal_positive_residual == solve.sweep.admissible_non_equal,
        "uniqueness",
        format!("{} admissible non-equal triples", solve.sweep.admissible_non_equal),
    );
    let tau = tau_identity(o.samples.max(1), o.seed)?;
    r.check_detail("81 τ₀ equals the quartic and its factorization", tau.verdict, "tau quartic identity", format!("{} samples", tau.samples));

    match o.scalar {
        ScalarMode::Exact => {
            let mu = displayed_mu_at_one();
            let mu_exact = solve.mu_at_one_exact.clone();
            r.scalar("mu", solve.mu_at_one).scalar("mu_exact", &mu_exact);
            r.residual("r1", solve.residual_r1_at_one).residual("r2", solve.residual_r2_at_one);
            let matches = (solve.mu_at_one - mu.to_f64()).abs() <= o.tolerance;
            r.check_detail(
                "mu at λ = 1 equals 1/(2√3)",
                matches,
                "displayed mu = 1/(2√3)",
                format!("computed {mu_exact} ≈ {:.12}, displayed ≈ {:.12}", solve.mu_at_one, mu.to_f64()),
            );
        }
        ScalarMode::Float => {
            let (_, nk) = check_float(&DiagonalInvariantForm::uniform(1.0)?, o.tolerance)?;
            r.scalar("mu", nk.mu).residual("r1", nk.residual_r1).residual("r2", nk.residual_r2);
            r.check("nearly Kähler at λ = 1 (float)", nk.verdict, "dω = 3ψ, dφ = −2μ ω∧ω");
            r.check_detail(
                "mu at λ = 1 equals 1/(2√3)",
                (nk.mu - displayed_mu_at_one().to_f64()).abs() <= o.tolerance,
                "displayed mu = 1/(2√3)",
                format!("computed {:.12}", nk.mu),
            );
        }
    }
    let einstein = s3xs3_einstein(1e-8)?;
    r.scalar("scal", einstein.scalar_curvature).residual("einstein", einstein.einstein_deviation);
    r.check("Einstein, scal > 0", einstein.verdict, "Ric = (scal/6) g");
    let lo = ledger_obata_verify(o.samples.min(50), o.seed, o.tolerance)?;
    r.check("SU(2)³/SU(2) normal metric is nearly Kähler", lo.verdict, "3-symmetric nearly Kähler");
    Ok(finish(r, start, json!({ "solve": solve, "tau_identity": tau, "einstein": einstein, "ledger_obata": lo })))
}

pub fn verify_ledger_obata(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify ledger-obata", inputs(o), o.tolerance);
    let lo = ledger_obata_verify(o.samples, o.seed, o.tolerance)?;
    r.check("S³ = Id and S is an automorphism", lo.s_cubed_identity && lo.s_is_automorphism, "order-three automorphism");
    r.check("J from S is 3-symmetric", lo.three_symmetric, "[Jx,Jy] = [x,y] mod h");
    r.check("normal metric S-invariant and naturally reductive", lo.normal_metric_invariant_under_s && lo.normal_metric_naturally_reductive, "naturally reductive");
    r.check("cross-oracle", lo.cross_oracle.agree && lo.cross_oracle.metric_verdict, "(∇_X J)X = 0 and form oracle agree");
    r.check_detail(
        "product-style metric q(Y−X)+q(X)",
        true,
        "",
        format!(
            "S-invariant: {}, naturally reductive: {}",
            lo.displayed_metric_invariant_under_s, lo.displayed_metric_naturally_reductive
        ),
    );
    r.residual("nabla_x_jx", lo.cross_oracle.nabla_jx_residual);
    Ok(finish(r, start, &lo))
}

pub fn verify_flag(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify flag", inputs(o), o.tolerance);
    let f = flag_verify(o.grid, o.samples.min(20), o.seed, o.tolerance)?;
    r.check("Jacobi and invariant summands", f.jacobi && f.summands_invariant, "lie-algebra");
    for b in &f.displayed_mixed {
        r.check_detail(&format!("displayed {}", b.name), b.holds, "displayed bracket family", &b.formula);
    }
    for b in f.oracle_mixed.iter().chain(&f.same_slot) {
        r.check_detail(&b.name, b.holds, "matrix commutator", &b.formula);
    }
    r.check_detail(
        "torus characters agree with the displayed ones as real representations",
        f.weights_match_displayed_up_to_sign_as_set,
        "isotropy characters",
        format!("literal match: {}", f.weights_match_displayed),
    );
    let canonical = f.acs.iter().find(|a| a.signs == [1, 1, 1]);
    r.check("canonical J is 3-symmetric", canonical.is_some_and(|a| a.three_symmetric), "3-symmetric");
    r.check_detail("grid: naturally reductive ⇔ r=s=t and nearly Kähler ⇔ r=s=t", f.grid_ok, "grid", format!("{} points", f.grid.len()));
    Ok(finish(r, start, &f))
}

pub fn verify_cp3(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify cp3", inputs(o), o.tolerance);
    let c = cp3_verify(o.samples.min(20), o.seed, o.tolerance)?;
    r.check_detail(
        "two irreducible summands of dimensions (4, 2)",
        c.splitting.summand_dims == vec![4, 2],
        "isotropy splitting",
        format!("{:?}", c.splitting.summand_dims),
    );
    r.check("four invariant almost complex structures", c.invariant_acs == 4, "invariant ACS");
    let nk_patterns = c.patterns.iter().filter(|p| !p.nk_zeros.is_empty()).count();
    let k_patterns = c.patterns.iter().filter(|p| !p.kahler_zeros.is_empty()).count();
    r.check("exactly one nearly Kähler scaling for one sign pattern", nk_patterns == 1 && c.t_nk.is_some(), "nearly Kähler scan");
    r.check("exactly one Kähler scaling for the opposite fibre sign", k_patterns == 1 && c.opposite_fiber_signs, "Kähler scan");
    let prec_ok = |p: Option<f64>| p.is_some_and(|p| p <= 1e-6);
    r.check("located to relative precision 1e-6", prec_ok(c.t_nk_relative_precision) && prec_ok(c.t_k_relative_precision), "scan precision");
    r.check("form oracle at t_NK", c.form_oracle_at_t_nk, "dω = 3ψ, dφ = −2μ ω∧ω");
    r.check("cross-oracle at t_NK", c.cross_oracle_at_t_nk.as_ref().is_some_and(|x| x.agree && x.metric_verdict), "(∇_X J)X = 0");
    r.scalar("t_nk", c.t_nk).scalar("t_k", c.t_k).scalar("t_nk_exact", &c.t_nk_exact).scalar("t_k_exact", &c.t_k_exact);
    r.scalar("ratio_k_over_nk", c.ratio_k_over_nk);
    Ok(finish(r, start, &c))
}

pub fn verify_s6(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify s6", inputs(o), o.tolerance);
    let s = s6_verify(o.samples, o.seed, o.tolerance)?;
    let id = &s.identities;
    r.check(
        "octonions alternative and normed on basis elements (exact)",
        id.alternative_on_basis && id.norm_multiplicative_on_basis && id.rules_hold_on_basis,
        "octonion identities",
    );
    r.check_detail(
        "alternativity and norm on random pairs",
        id.max_alternativity_defect <= 1e-12 && id.max_norm_defect <= 1e-12,
        "octonion identities",
        format!("{} pairs", id.random_pairs),
    );
    r.check_detail("SU(3)-structure builds at every sample", s.built == s.samples, "build_su3", format!("{}/{}", s.built, s.samples));
    r.check("Hitchin J = ± octonion J with one global sign", s.global_sign.is_some() && s.max_deviation <= o.tolerance, "J = P(x,·)");
    r.residual("j_deviation", s.max_deviation);
    let cone = cone_verify(o.tolerance)?;
    r.check("cone over S⁶ is torsion-free (exact)", cone.sphere.cone_verdict, "dρ = 0, d*ρ = 0");
    r.check("phase-rotated data fail on the cone", cone.sphere_rotations.iter().all(|x| !x.cone_verdict && x.agree), "cone ⇔ nearly Kähler");
    Ok(finish(r, start, json!({ "s6": s, "sphere_cone": cone.sphere, "rotations": cone.sphere_rotations })))
}

pub fn verify_cone(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("verify cone", inputs(o), o.tolerance);
    let c = cone_verify(o.tolerance)?;
    r.check("ρ in the u-basis is the seven-term model form", c.model_expansion_matches && c.model_scale_invariant, "u-basis expansion");
    r.check_detail("G₂ metric identity with one constant", c.g2_constant.is_some(), "ι_Xρ∧ι_Yρ∧ρ = c g(X,Y) vol", format!("c = {:?}", c.g2_constant));
    r.check("S³×S³: dρ = d*ρ = 0 exactly", c.s3xs3_exact.cone_verdict, "dρ = 0, d*ρ = 0");
    r.check("S³×S³: dρ = d*ρ = 0 in floating point", c.s3xs3_float.cone_verdict, "dρ = 0, d*ρ = 0");
    r.check("S⁶: dρ = d*ρ = 0 exactly", c.sphere.cone_verdict, "dρ = 0, d*ρ = 0");
    r.check("d∘d = 0 on cone forms", c.d_squared_zero, "d² = 0");
    let failing = c.perturbations.iter().filter(|p| !p.report.cone_verdict && !p.report.nk_verdict).count();
    r.check_detail("perturbed inputs fail both checks", failing == c.perturbations.len() && failing == 20, "cone ⇔ nearly Kähler", format!("{failing}/{}", c.perturbations.len()));
    r.scalar("r4_coefficient", c.s3xs3_exact.r4_coefficient).scalar("mu_over_two_unnormalized", c.s3xs3_exact.mu_over_two_unnormalized);
    r.residual("d_rho_float", c.s3xs3_float.d_rho_residual).residual("d_star_rho_float", c.s3xs3_float.d_star_rho_residual);
    Ok(finish(r, start, &c))
}

pub fn solve_s3xs3(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("solve-s3xs3", inputs(o), o.tolerance);
    let s = solve_nk(o.sweep_denominator, o.sweep_max_numerator)?;
    r.check("solution family", s.verdict, "uniqueness");
    r.scalar("family", &s.family).scalar("mu", s.mu_at_one).scalar("mu_exact", &s.mu_at_one_exact);
    r.scalar("admissible_non_equal", s.sweep.admissible_non_equal).scalar("false_positives", s.sweep.false_positives);
    r.residual("r1", s.residual_r1_at_one).residual("r2", s.residual_r2_at_one);
    Ok(finish(r, start, &s))
}

pub fn table(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("table", inputs(o), o.tolerance);
    let t = table_check()?;
    for row in &t.rows {
        r.check_detail(
            &format!("h = {}, g = {}", row.h, row.g),
            row.ok,
            "dim g − dim h = 6, h ⊂ su(3)",
            format!("{} − {} = {}  {}", row.dim_g, row.dim_h, row.codim, row.space),
        );
    }
    Ok(finish(r, start, &t))
}

/// Full pipeline on user data: the SU(3) construction from `omega` (and
/// `psi`, defaulting to `dω/3`), the nearly Kähler system, the metric oracle
/// when a metric is supplied, and optionally the cone.
pub fn check_spec(spec: &SpaceSpec, o: &Options, cone: bool) -> Result<Report> {
    let exact = o.scalar == ScalarMode::Exact && spec.is_exact();
    if exact {
        check_generic::<QSqrt3>(spec, o, cone, 0.0)
    } else {
        check_generic::<f64>(spec, o, cone, o.tolerance)
    }
}

fn check_generic<S: Scalar>(spec: &SpaceSpec, o: &Options, cone: bool, tol: f64) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("check", json!({ "name": spec.name, "options": o, "exact": S::EXACT }), o.tolerance);
    let space = spec.space::<S>()?;
    let omega = spec.form::<S>("omega")?.ok_or_else(|| Error::Parse("the document has no \"omega\" form".into()))?;
    if omega.dim() != 6 || omega.degree() != 2 {
        return Err(Error::Parse("\"omega\" must be a 2-form on a 6-dimensional m".into()));
    }
    r.check("omega invariant", space.is_invariant(&omega, tol), "isotropy-invariance");
    let psi = match spec.form::<S>("psi")? {
        Some(p) => p,
        None => space.ce_differential(&omega, tol)?.scale(&S::from_ratio(1, 3)),
    };
    let d = |a: &KForm<S>| space.ce_differential(a, tol);
    let cand = match SU3Candidate::oriented(omega, psi, tol) {
        Ok(c) => c,
        Err(e) => {
            r.error("SU(3)-structure", &e);
            return Ok(finish(r, start, serde_json::Value::Null));
        }
    };
    if let Ok(t) = tau(&cand.psi, &cand.vol) {
        r.scalar("tau0", t.to_f64());
    }
    let (s, nk) = match nk_check(&cand, d, tol) {
        Ok(x) => x,
        Err(e) => {
            r.error("SU(3)-structure", &e);
            return Ok(finish(r, start, serde_json::Value::Null));
        }
    };
    r.check("SU(3)-structure", true, "");
    r.scalar("kappa", s.kappa.to_f64()).scalar("mu", nk.mu.to_f64());
    r.residual("r1", nk.residual_r1).residual("r2", nk.residual_r2);
    r.check("nearly Kähler system", nk.verdict, "dω = 3ψ, dφ = −2μ ω∧ω");
    match spec.gram::<S>()? {
        Some(g) => {
            let x = cross_oracle(&space, &g, &s.j, o.samples.min(50), o.seed, o.tolerance)?;
            r.residual("nabla_x_jx", x.nabla_jx_residual);
            r.check("metric oracle (supplied metric, Hitchin J)", x.metric_verdict, "(∇_X J)X = 0");
            r.check("metric and form oracles agree", x.agree, "cross-oracle");
        }
        None => {
            r.not_applicable("metric oracle", "no metric supplied");
        }
    }
    if cone {
        let c = cone_check(&s, &d, tol)?;
        r.residual("d_rho", c.d_rho_residual).residual("d_star_rho", c.d_star_rho_residual);
        r.check("cone: dρ = 0 and d*ρ = 0", c.cone_verdict, "dρ = 0, d*ρ = 0");
        r.check("cone verdict agrees with the nearly Kähler system", c.agree, "cone ⇔ nearly Kähler");
    }
    Ok(finish(r, start, serde_json::Value::Null))
}

pub const EMITTABLE: [&str; 5] = ["s3xs3", "s3xs3-112", "flag", "cp3", "ledger-obata"];

/// Input documents for the catalog models.
pub fn emit(name: &str) -> Result<SpaceSpec> {
    let one = <Rational as Scalar>::one;
    match name {
        "s3xs3" | "s3xs3-112" => {
            let cf = CyclicCoframe::<Rational>::new()?;
            let l = if name == "s3xs3" { [1, 1, 1] } else { [1, 1, 2] };
            let d = DiagonalInvariantForm::new(
                Rational::from_i64(l[0]),
                Rational::from_i64(l[1]),
                Rational::from_i64(l[2]),
                0.0,
            )?;
            let omega = d.omega();
            Ok(SpaceSpec::from_space(&format!("S3xS3 lambda = {l:?}"), cf.space(), &[("omega", &omega)], None))
        }
        "flag" => {
            let m = flag_model()?;
            let g = m.metric(one(), one(), one());
            let omega = kahler_form(&g, &m.acs::<Rational>([1, 1, 1]));
            Ok(SpaceSpec::from_space("flag manifold SU(3)/T², r = s = t = 1", &m.space, &[("omega", &omega)], Some(&g)))
        }
        "cp3" => {
            let m = cp3_model()?;
            let g = m.metric(Rational::from_ratio(1, 2));
            for (sp, sv) in [(1, 1), (1, -1)] {
                let omega = kahler_form(&g, &m.acs(sp, sv)?);
                if matches!(nk_from_omega(&m.space, &omega, 0.0), Ok((_, rep)) if rep.verdict) {
                    return Ok(SpaceSpec::from_space(
                        &format!("CP3 = Sp(2)/U(1)Sp(1), t = 1/2, signs ({sp:+}, {sv:+})"),
                        &m.space,
                        &[("omega", &omega)],
                        Some(&g),
                    ));
                }
            }
            Err(Error::NotRepresentable("no nearly Kähler pattern at t = 1/2".into()))
        }
        "ledger-obata" => {
            let space = ledger_obata_rational()?;
            let g = normal_gram::<Rational>();
            Ok(SpaceSpec::from_space("S3xS3 = SU(2)^3/SU(2), normal metric", &space, &[], Some(&g)))
        }
        other => Err(Error::Parse(format!("unknown model {other:?}; expected one of {}", EMITTABLE.join(", ")))),
    }
}

/// Cross-oracle over the whole catalog, as a report.
pub fn cross_oracle_report(o: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut r = Report::new("cross-oracle", inputs(o), o.tolerance);
    let all = catalog_cross_oracles(o.samples.min(50), o.seed, o.tolerance)?;
    for n in &all {
        let x = &n.oracle;
        r.check_detail(
            &n.name,
            x.metric_verdict && x.form_verdict && x.agree,
            "(∇_X J)X = 0, η skew, ∇̄η = 0, form oracle",
            format!("∇J {:.1e}, skew {:.1e}, parallel {:.1e}", x.nabla_jx_residual, x.eta_skew_defect, x.eta_parallel_defect),
        );
    }
    Ok(finish(r, start, &all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emitted_documents_check() {
        let o = Options { samples: 5, ..Options::default() };
        for name in ["s3xs3", "flag", "cp3"] {
            let spec = SpaceSpec::from_json(&emit(name).unwrap().to_json()).unwrap();
            let r = check_spec(&spec, &o, name == "s3xs3").unwrap();
            assert_eq!(r.exit_code(), 0, "{}", r.render());
        }
        let bad = emit("s3xs3-112").unwrap();
        assert_eq!(check_spec(&bad, &o, false).unwrap().exit_code(), 1);
    }

    #[test]
    fn unknown_space_is_an_input_error() {
        assert!(matches!(verify("torus", &Options::default()), Err(Error::Parse(_))));
    }
}
