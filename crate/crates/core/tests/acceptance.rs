//! Acceptance suite: one line per criterion.
//!
//! Two clauses are known to fail against the displayed values and are kept
//! failing rather than loosened (see `KNOWN_UNATTAINABLE`). The run fails if
//! any other clause fails, or if a known-unattainable clause starts passing.

use std::process::ExitCode;
use std::time::Instant;

use nearly_kahler::catalog::cone::cone_verify;
use nearly_kahler::catalog::cp3::cp3_verify;
use nearly_kahler::catalog::flag::flag_verify;
use nearly_kahler::catalog::octonion::s6_verify;
use nearly_kahler::catalog::table::table_check;
use nearly_kahler::catalog::{catalog_cross_oracles, s3xs3_einstein};
use nearly_kahler::commands::displayed_mu_at_one;
use nearly_kahler::s3xs3::{solve_nk, tau_identity};
use nearly_kahler::Scalar;

const TOL: f64 = 1e-10;
const SEED: u64 = 20;

/// `(criterion, clause)` pairs that fail for a documented reason.
const KNOWN_UNATTAINABLE: [(u32, &str); 2] = [
    // computed μ(λ=1) = √3/18 = 1/(6√3)
    (1, "mu(1) = 1/(2√3)"),
    // matrix commutators give ⟨0,0,−conj(ab)⟩
    (3, "displayed mixed-slot brackets [a,b] = ⟨0,0,ab⟩"),
];

struct Criterion {
    id: u32,
    title: &'static str,
    clauses: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, clauses: Vec::new() }
    }

    fn clause(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.clauses.push((name.to_string(), ok, detail.into()));
    }

    fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.1)
    }
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "S3xS3 uniqueness");
    let start = Instant::now();
    match solve_nk(4, 20) {
        Ok(s) => {
            let secs = start.elapsed().as_secs_f64();
            c.clause("family {(λ,λ,λ), λ>0}", s.verdict && s.family == "(λ, λ, λ), λ > 0", &s.family);
            c.clause(
                "≥ 10⁴ admissible non-equal triples in [−5,5]³, all with positive residual",
                s.sweep.admissible_non_equal >= 10_000
                    && s.sweep.false_positives == 0
                    && s.sweep.non_equal_positive_residual == s.sweep.admissible_non_equal,
                format!("{} triples", s.sweep.admissible_non_equal),
            );
            let shown = displayed_mu_at_one().to_f64();
            c.clause(
                "mu(1) = 1/(2√3)",
                (s.mu_at_one - shown).abs() < 1e-10,
                format!("computed {} = {:.12}, displayed {shown:.12}", s.mu_at_one_exact, s.mu_at_one),
            );
            c.clause("runtime < 30 s", secs < 30.0, format!("{secs:.2} s"));
        }
        Err(e) => c.clause("solve", false, e.to_string()),
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "tau quartic identity");
    match tau_identity(500, SEED) {
        Ok(t) => {
            c.clause("81 τ₀ = quartic", t.quartic_matches == 500, format!("{}/500", t.quartic_matches));
            c.clause("81 τ₀ = factored quartic", t.product_matches == 500, format!("{}/500", t.product_matches));
        }
        Err(e) => c.clause("tau", false, e.to_string()),
    }
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "flag manifold");
    let start = Instant::now();
    match flag_verify(4, 10, SEED, TOL) {
        Ok(f) => {
            let secs = start.elapsed().as_secs_f64();
            c.clause(
                "displayed mixed-slot brackets [a,b] = ⟨0,0,ab⟩",
                f.displayed_mixed.iter().all(|b| b.holds),
                f.oracle_mixed.iter().map(|b| b.formula.clone()).collect::<Vec<_>>().join("; "),
            );
            c.clause("same-slot brackets [a,a'] = diag(iy,−iy,0)", f.same_slot.iter().all(|b| b.holds), "exact");
            let canon = f.acs.iter().find(|a| a.signs == [1, 1, 1]);
            c.clause("m⁺ 3-symmetric", canon.is_some_and(|a| a.three_symmetric), "exact");
            c.clause(
                "grid {1..4}³: naturally reductive ⇔ r=s=t, NK ⇔ r=s=t",
                f.grid_ok && f.grid.len() == 64,
                format!("{} points", f.grid.len()),
            );
            c.clause("runtime < 60 s", secs < 60.0, format!("{secs:.2} s"));
        }
        Err(e) => c.clause("flag", false, e.to_string()),
    }
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "CP3");
    match cp3_verify(10, SEED, TOL) {
        Ok(r) => {
            c.clause("summands (4,2)", r.splitting.summand_dims == vec![4, 2], format!("{:?}", r.splitting.summand_dims));
            let nk: Vec<_> = r.patterns.iter().filter(|p| !p.nk_zeros.is_empty()).collect();
            c.clause(
                "one NK scaling, one sign pattern",
                nk.len() == 1 && nk[0].nk_zeros.len() == 1,
                format!("t_NK = {:?} ({:?})", r.t_nk_exact, r.nk_pattern),
            );
            let k: Vec<_> = r.patterns.iter().filter(|p| !p.kahler_zeros.is_empty()).collect();
            c.clause(
                "distinct unique Kähler scaling, opposite fibre sign",
                k.len() == 1 && k[0].kahler_zeros.len() == 1 && r.opposite_fiber_signs && r.t_k != r.t_nk,
                format!("t_K = {:?} ({:?})", r.t_k_exact, r.kahler_pattern),
            );
            let p = |x: Option<f64>| x.is_some_and(|v| v <= 1e-6);
            c.clause(
                "relative precision 1e-6",
                p(r.t_nk_relative_precision) && p(r.t_k_relative_precision),
                format!("{:?}, {:?}", r.t_nk_relative_precision, r.t_k_relative_precision),
            );
        }
        Err(e) => c.clause("cp3", false, e.to_string()),
    }
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "cone / G2");
    match cone_verify(TOL) {
        Ok(r) => {
            let e = &r.s3xs3_exact;
            c.clause(
                "S3xS3 exact zeros",
                e.d_rho_residual == 0.0 && e.d_star_rho_residual == 0.0,
                format!("{} / {}", e.d_rho_residual, e.d_star_rho_residual),
            );
            c.clause(
                "S6 exact zeros",
                r.sphere.d_rho_residual == 0.0 && r.sphere.d_star_rho_residual == 0.0,
                "rational",
            );
            let f = &r.s3xs3_float;
            c.clause(
                "float residuals < 1e-10",
                f.d_rho_residual < 1e-10 && f.d_star_rho_residual < 1e-10,
                format!("{:.1e} / {:.1e}", f.d_rho_residual, f.d_star_rho_residual),
            );
            let failing = r.perturbations.iter().filter(|p| !p.report.cone_verdict && !p.report.nk_verdict).count();
            c.clause("20 perturbations fail both", r.perturbations.len() == 20 && failing == 20, format!("{failing}/20"));
            c.clause("u-basis expansion", r.model_expansion_matches, "seven terms");
        }
        Err(e) => c.clause("cone", false, e.to_string()),
    }
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "S6 octonionic structure");
    match s6_verify(100, SEED, TOL) {
        Ok(s) => {
            c.clause("100 structures built", s.built == 100, format!("{}/100", s.built));
            c.clause(
                "J = ± P(x,·), one global sign, < 1e-10",
                s.global_sign.is_some() && s.max_deviation < 1e-10,
                format!("sign {:?}, {:.1e}", s.global_sign, s.max_deviation),
            );
            c.clause(
                "alternative and normed on basis (exact)",
                s.identities.alternative_on_basis && s.identities.norm_multiplicative_on_basis,
                "exact",
            );
        }
        Err(e) => c.clause("s6", false, e.to_string()),
    }
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "cross-oracle consistency");
    match catalog_cross_oracles(20, SEED, TOL) {
        Ok(all) => {
            for n in &all {
                let x = &n.oracle;
                c.clause(
                    &n.name,
                    x.nabla_jx_residual < 1e-10
                        && x.eta_skew_defect < 1e-10
                        && x.eta_parallel_defect < 1e-10
                        && x.metric_verdict
                        && x.form_verdict
                        && x.agree,
                    format!("{:.1e}/{:.1e}/{:.1e}", x.nabla_jx_residual, x.eta_skew_defect, x.eta_parallel_defect),
                );
            }
            c.clause("four structures", all.len() == 4, format!("{}", all.len()));
        }
        Err(e) => c.clause("cross", false, e.to_string()),
    }
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "Einstein");
    match s3xs3_einstein(1e-8) {
        Ok(r) => {
            c.clause("scal > 0", r.scalar_curvature > 0.0, r.scalar_curvature_exact.clone());
            c.clause("Ric = (scal/6) g", r.einstein_deviation < 1e-8, format!("{:.1e}", r.einstein_deviation));
        }
        Err(e) => c.clause("ricci", false, e.to_string()),
    }
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::new(9, "(h, g) table");
    match table_check() {
        Ok(t) => {
            c.clause("8 rows", t.rows.len() == 8, format!("{}", t.rows.len()));
            c.clause("dim g − dim h = 6", t.rows.iter().all(|r| r.codim == 6 && r.dim_g == r.dim_h + 6), "all rows");
            c.clause("h allowed", t.rows.iter().all(|r| r.isotropy.is_some()), "all rows");
        }
        Err(e) => c.clause("table", false, e.to_string()),
    }
    c
}

fn main() -> ExitCode {
    let criteria = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut ok = true;
    for c in &criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        let failing: Vec<String> =
            c.clauses.iter().filter(|x| !x.1).map(|x| format!("{} ({})", x.0, x.2)).collect();
        if failing.is_empty() {
            println!("criterion {} [{verdict}] {}", c.id, c.title);
        } else {
            println!("criterion {} [{verdict}] {}: failing {}", c.id, c.title, failing.join("; "));
        }
        for (name, pass, _) in &c.clauses {
            let known = KNOWN_UNATTAINABLE.iter().any(|(id, n)| *id == c.id && n == name);
            if known && *pass {
                println!("  unexpected: known-unattainable clause now passes: {name}");
                ok = false;
            } else if !known && !pass {
                ok = false;
            }
        }
    }
    let known = KNOWN_UNATTAINABLE.len();
    if ok {
        println!("acceptance: all attainable clauses pass; {known} known-unattainable clauses fail as recorded");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
