//! Left-invariant forms on S³×S³ and the uniqueness of the nearly Kähler
//! structure among them.
//!
//! The co-frame is `(e₁,e₂,e₃,f₁,f₂,f₃)`, stored at indices `0..6`, with
//! `deᵢ = e_{i+1}∧e_{i+2}` and `dfᵢ = f_{i+1}∧f_{i+2}`. The reference
//! orientation is `vol = e₁₂₃∧f₁₂₃`.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::hitchin::{build_su3, nk_check, tau, NKReport, SU3Candidate, SU3Structure};
use crate::lie::{LieAlgebra, ReductiveSpace};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{format_rational, QSqrt3, Rational, Scalar};

/// `su(2) ⊕ su(2)` with `[X_i, X_{i+1}] = −X_{i+2}` in each factor.
pub fn coframe_algebra<S: Scalar>() -> LieAlgebra<S> {
    let labels = ["X1", "X2", "X3", "Y1", "Y2", "Y3"].iter().map(|s| s.to_string()).collect();
    let mut entries = Vec::new();
    for off in [0, 3] {
        for i in 0..3 {
            entries.push((off + i, off + (i + 1) % 3, off + (i + 2) % 3, -S::one()));
        }
    }
    LieAlgebra::from_sparse(labels, entries, 0.0).expect("su(2) ⊕ su(2) satisfies Jacobi")
}

/// The group S³×S³ with a cyclic co-frame.
#[derive(Clone, Debug)]
pub struct CyclicCoframe<S> {
    space: ReductiveSpace<S>,
}

impl<S: Scalar> CyclicCoframe<S> {
    /// Builds the model and checks the co-frame axioms.
    pub fn new() -> Result<Self> {
        let cf = CyclicCoframe { space: ReductiveSpace::group(coframe_algebra()) };
        if !cf.axioms_hold() {
            return Err(Error::NotReductive("co-frame axioms de_i = e_{i+1}∧e_{i+2} fail".into()));
        }
        Ok(cf)
    }

    pub fn space(&self) -> &ReductiveSpace<S> {
        &self.space
    }

    pub fn axioms_hold(&self) -> bool {
        (0..6).all(|a| {
            let off = a - a % 3;
            let i = a % 3;
            let want = KForm::basis(6, &[off + (i + 1) % 3, off + (i + 2) % 3]);
            self.space.ce_differential(&KForm::basis(6, &[a]), 0.0).map(|d| d == want).unwrap_or(false)
        })
    }

    pub fn d(&self, alpha: &KForm<S>) -> Result<KForm<S>> {
        self.space.ce_differential(alpha, 0.0)
    }

    pub fn vol() -> KForm<S> {
        KForm::basis(6, &[0, 1, 2, 3, 4, 5])
    }
}

/// `e_{i+1}∧e_{i+2}` for the factor starting at `off`.
fn cyclic_pair<S: Scalar>(off: usize, i: usize, c: S) -> KForm<S> {
    KForm::term(6, &[off + (i + 1) % 3, off + (i + 2) % 3], c)
}

/// `ω = Σ aᵢ e_{i+1}∧e_{i+2} + Σ bᵢ f_{i+1}∧f_{i+2} + Σ c_{ij} eᵢ∧fⱼ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ABCForm<S> {
    pub a: Vector<S>,
    pub b: Vector<S>,
    pub c: Matrix<S>,
}

impl<S: Scalar> ABCForm<S> {
    pub fn new(a: Vector<S>, b: Vector<S>, c: Matrix<S>) -> Result<Self> {
        if a.dim() != 3 || b.dim() != 3 || c.rows() != 3 || c.cols() != 3 {
            return Err(Error::Dimension("A, B are 3-vectors and C is 3×3".into()));
        }
        Ok(ABCForm { a, b, c })
    }

    pub fn omega(&self) -> KForm<S> {
        let mut w = KForm::zero(6, 2);
        for i in 0..3 {
            w = w.add(&cyclic_pair(0, i, self.a[i].clone())).add(&cyclic_pair(3, i, self.b[i].clone()));
            for j in 0..3 {
                w = w.add(&KForm::term(6, &[i, 3 + j], self.c[(i, j)].clone()));
            }
        }
        w
    }

    /// `ᵗA C B + det C`.
    pub fn stability_scalar(&self) -> S {
        self.a.dot(&self.c.apply(&self.b)) + self.c.det()
    }

    /// `ᵗA C` and `C B`.
    pub fn type_defect(&self) -> (Vector<S>, Vector<S>) {
        (self.c.transpose().apply(&self.a), self.c.apply(&self.b))
    }

    /// Components in the co-frame `e' = M e`, `f' = N f` for `M, N ∈ SO(3)`:
    /// `(M A, N B, M C ᵗN)`.
    pub fn change_frame(&self, m: &Matrix<S>, n: &Matrix<S>) -> Self {
        ABCForm { a: m.apply(&self.a), b: n.apply(&self.b), c: m.mul(&self.c).mul(&n.transpose()) }
    }
}

/// `ω` nondegenerate, via `ᵗACB + det C ≠ 0`.
pub fn nondegenerate<S: Scalar>(w: &ABCForm<S>, tol: f64) -> bool {
    !w.stability_scalar().is_zero_within(tol)
}

/// `ω = λ₁ e₁∧f₁ + λ₂ e₂∧f₂ + λ₃ e₃∧f₃` with all `λᵢ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalInvariantForm<S> {
    lambda: [S; 3],
}

impl<S: Scalar> DiagonalInvariantForm<S> {
    pub fn new(l1: S, l2: S, l3: S, tol: f64) -> Result<Self> {
        if [&l1, &l2, &l3].iter().any(|l| l.is_zero_within(tol)) {
            return Err(Error::Degenerate);
        }
        Ok(DiagonalInvariantForm { lambda: [l1, l2, l3] })
    }

    pub fn uniform(l: S) -> Result<Self> {
        Self::new(l.clone(), l.clone(), l, 0.0)
    }

    pub fn lambda(&self) -> &[S; 3] {
        &self.lambda
    }

    pub fn to_abc(&self) -> ABCForm<S> {
        let c = Matrix::from_fn(3, 3, |i, j| if i == j { self.lambda[i].clone() } else { S::zero() });
        ABCForm { a: Vector::zeros(3), b: Vector::zeros(3), c }
    }

    pub fn omega(&self) -> KForm<S> {
        self.to_abc().omega()
    }

    fn squares(&self) -> [S; 3] {
        self.lambda.clone().map(|l| l.clone() * l)
    }

    /// `λ₁⁴+λ₂⁴+λ₃⁴ − 2λ₁²λ₂² − 2λ₂²λ₃² − 2λ₁²λ₃²`, expected to be `81 τ₀`.
    pub fn tau_quartic(&self) -> S {
        let [x1, x2, x3] = self.squares();
        let two = S::from_i64(2);
        x1.clone() * x1.clone() + x2.clone() * x2.clone() + x3.clone() * x3.clone()
            - two.clone() * x1.clone() * x2.clone()
            - two.clone() * x2 * x3.clone()
            - two * x1 * x3
    }

    /// `(λ₁−λ₂−λ₃)(−λ₁+λ₂−λ₃)(−λ₁−λ₂+λ₃)(λ₁+λ₂+λ₃)`.
    pub fn quartic_product(&self) -> S {
        let [l1, l2, l3] = self.lambda.clone();
        (l1.clone() - l2.clone() - l3.clone())
            * (-l1.clone() + l2.clone() - l3.clone())
            * (-l1.clone() - l2.clone() + l3.clone())
            * (l1 + l2 + l3)
    }

    pub fn det(&self) -> S {
        self.lambda[0].clone() * self.lambda[1].clone() * self.lambda[2].clone()
    }

    /// `cᵢ = λᵢ²(λᵢ² − λ_{i+1}² − λ_{i+2}²)`.
    pub fn c_values(&self) -> [S; 3] {
        let x = self.squares();
        std::array::from_fn(|i| {
            x[i].clone() * (x[i].clone() - x[(i + 1) % 3].clone() - x[(i + 2) % 3].clone())
        })
    }

    /// `k` with `k² = −(λ₁⁴ + … − 2λ₁²λ₃²)`, when representable.
    pub fn k(&self) -> Option<S> {
        (-self.tau_quartic()).try_sqrt()
    }

    /// Candidate `(ω, ψ = dω/3)` oriented by `e₁₂₃∧f₁₂₃`.
    pub fn candidate(&self, cf: &CyclicCoframe<S>) -> Result<SU3Candidate<S>> {
        let omega = self.omega();
        let psi = cf.d(&omega)?.scale(&S::from_ratio(1, 3));
        SU3Candidate::new(omega, psi, CyclicCoframe::vol())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiagonalInvariantForm<T> {
        DiagonalInvariantForm { lambda: [f(&self.lambda[0]), f(&self.lambda[1]), f(&self.lambda[2])] }
    }
}

/// Both SU(3) conditions on the diagonal family, evaluated exactly:
/// quartic product negative and `λ₁λ₂λ₃ > 0`.
pub fn su3_admissible<S: Scalar>(d: &DiagonalInvariantForm<S>, tol: f64) -> bool {
    d.quartic_product().sign_within(tol) == Ordering::Less && d.det().sign_within(tol) == Ordering::Greater
}

fn abs<S: Scalar>(x: S) -> S {
    if x.sign_within(0.0) == Ordering::Less {
        -x
    } else {
        x
    }
}

/// `max |cᵢ − cⱼ|`; zero iff the λ-system has a common `c`.
pub fn nk_residual<S: Scalar>(d: &DiagonalInvariantForm<S>) -> S {
    let c = d.c_values();
    let mut best = S::zero();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let v = abs(c[i].clone() - c[j].clone());
        if (v.clone() - best.clone()).sign_within(0.0) == Ordering::Greater {
            best = v;
        }
    }
    best
}

/// Outcome of [`reduce_to_diagonal`]: `M C ᵗN = diag(λ)` with `M, N ∈ SO(3)`.
#[derive(Clone, Debug)]
pub struct Reduction<S> {
    pub diagonal: DiagonalInvariantForm<S>,
    pub m: Matrix<S>,
    pub n: Matrix<S>,
    /// True when the reduction used only signed permutations (exact).
    pub exact: bool,
    /// `max |ᵗM D N − C|`.
    pub reconstruction_error: f64,
}

/// Brings a type-(1,1) nondegenerate invariant 2-form to diagonal form.
///
/// The type condition `ᵗAC = CB = 0` and `det C ≠ 0` are checked exactly;
/// together they force `A = B = 0`. Monomial `C` is handled exactly with
/// signed permutations; otherwise a signed SVD in floating point is used.
pub fn reduce_to_diagonal<S: Scalar>(w: &ABCForm<S>, tol: f64) -> Result<Reduction<S>> {
    let (ac, cb) = w.type_defect();
    if !ac.is_zero_within(tol) || !cb.is_zero_within(tol) {
        return Err(Error::TypeConditionFails);
    }
    if w.c.det().is_zero_within(tol) {
        return Err(Error::Degenerate);
    }
    let (m, n, exact) = match monomial_frame(&w.c, tol) {
        Some(n) => (Matrix::identity(3), n, true),
        None => signed_svd(&w.c),
    };
    let d = m.mul(&w.c).mul(&n.transpose());
    let diagonal = DiagonalInvariantForm::new(d[(0, 0)].clone(), d[(1, 1)].clone(), d[(2, 2)].clone(), tol)?;
    let back = m.transpose().mul(&diagonal.to_abc().c).mul(&n);
    let reconstruction_error = back.sub(&w.c).max_abs();
    Ok(Reduction { diagonal, m, n, exact, reconstruction_error })
}

/// For `C` with one nonzero entry per row and column, a signed permutation
/// `N ∈ SO(3)` with `C ᵗN` diagonal.
fn monomial_frame<S: Scalar>(c: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let mut sigma = [0usize; 3];
    for (i, s) in sigma.iter_mut().enumerate() {
        let nz: Vec<usize> = (0..3).filter(|&j| !c[(i, j)].is_zero_within(tol)).collect();
        if nz.len() != 1 {
            return None;
        }
        *s = nz[0];
    }
    let mut n = Matrix::from_fn(3, 3, |j, k| if k == sigma[j] { S::one() } else { S::zero() });
    if n.det().sign_within(0.0) == Ordering::Less {
        for k in 0..3 {
            n[(0, k)] = -n[(0, k)].clone();
        }
    }
    Some(n)
}

fn signed_svd<S: Scalar>(c: &Matrix<S>) -> (Matrix<S>, Matrix<S>, bool) {
    let cf = nalgebra::Matrix3::from_fn(|i, j| c[(i, j)].to_f64());
    let svd = cf.svd(true, true);
    let mut u = svd.u.expect("requested U");
    let mut vt = svd.v_t.expect("requested Vᵀ");
    if u.determinant() < 0.0 {
        u.set_column(2, &(-u.column(2)));
    }
    if vt.determinant() < 0.0 {
        vt.set_row(2, &(-vt.row(2)));
    }
    let m = Matrix::from_fn(3, 3, |i, j| S::from_f64(u[(j, i)]));
    let n = Matrix::from_fn(3, 3, |i, j| S::from_f64(vt[(i, j)]));
    (m, n, false)
}

/// Exact comparison of `81 τ₀(dω/3)` with the quartic and its factored form
/// on random rational triples.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TauIdentity {
    pub samples: usize,
    pub quartic_matches: usize,
    pub product_matches: usize,
    pub first_mismatch: Option<[String; 3]>,
    pub verdict: bool,
}

pub fn tau_identity(samples: usize, seed: u64) -> Result<TauIdentity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cf = CyclicCoframe::<Rational>::new()?;
    let vol = CyclicCoframe::<Rational>::vol();
    let mut quartic_matches = 0;
    let mut product_matches = 0;
    let mut first_mismatch = None;
    for _ in 0..samples {
        let l: [Rational; 3] = std::array::from_fn(|_| {
            let mut p = 0;
            while p == 0 {
                p = rng.gen_range(-60..=60);
            }
            Rational::from_ratio(p, rng.gen_range(1..=17))
        });
        let d = DiagonalInvariantForm::new(l[0].clone(), l[1].clone(), l[2].clone(), 0.0)?;
        let psi = cf.d(&d.omega())?.scale(&Rational::from_ratio(1, 3));
        let t81 = tau(&psi, &vol)? * Rational::from_i64(81);
        let q = t81 == d.tau_quartic();
        let p = t81 == d.quartic_product();
        quartic_matches += q as usize;
        product_matches += p as usize;
        if !(q && p) && first_mismatch.is_none() {
            first_mismatch = Some(l.map(|x| format_rational(&x)));
        }
    }
    Ok(TauIdentity {
        samples,
        quartic_matches,
        product_matches,
        first_mismatch,
        verdict: quartic_matches == samples && product_matches == samples,
    })
}

/// Summary of the rational sweep.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct SweepStats {
    pub denominator: i64,
    pub max_numerator: i64,
    pub triples: usize,
    pub admissible: usize,
    pub admissible_equal: usize,
    pub admissible_non_equal: usize,
    /// Admissible, not all |λᵢ| equal, and `nk_residual > 0`.
    pub non_equal_positive_residual: usize,
    /// Admissible, not all |λᵢ| equal, and `nk_residual = 0`. Must be zero.
    pub false_positives: usize,
    /// Admissible with all |λᵢ| equal and `nk_residual = 0`.
    pub equal_zero_residual: usize,
}

/// Sweeps `λᵢ ∈ {k/den : 0 < |k| ≤ max}` exactly.
pub fn sweep(denominator: i64, max_numerator: i64) -> SweepStats {
    let values: Vec<Rational> = (-max_numerator..=max_numerator)
        .filter(|&k| k != 0)
        .map(|k| Rational::from_ratio(k, denominator))
        .collect();
    let partial: Vec<SweepStats> = values
        .par_iter()
        .map(|l1| {
            let mut s = SweepStats::default();
            for l2 in &values {
                for l3 in &values {
                    s.triples += 1;
                    let d = DiagonalInvariantForm::new(l1.clone(), l2.clone(), l3.clone(), 0.0)
                        .expect("grid excludes zero");
                    if !su3_admissible(&d, 0.0) {
                        continue;
                    }
                    s.admissible += 1;
                    let equal = abs(l1.clone()) == abs(l2.clone()) && abs(l2.clone()) == abs(l3.clone());
                    let zero = nk_residual(&d).is_zero_within(0.0);
                    match (equal, zero) {
                        (true, z) => {
                            s.admissible_equal += 1;
                            s.equal_zero_residual += z as usize;
                        }
                        (false, true) => {
                            s.admissible_non_equal += 1;
                            s.false_positives += 1;
                        }
                        (false, false) => {
                            s.admissible_non_equal += 1;
                            s.non_equal_positive_residual += 1;
                        }
                    }
                }
            }
            s
        })
        .collect();
    partial.into_iter().fold(
        SweepStats { denominator, max_numerator, ..Default::default() },
        |mut acc, s| {
            acc.triples += s.triples;
            acc.admissible += s.admissible;
            acc.admissible_equal += s.admissible_equal;
            acc.admissible_non_equal += s.admissible_non_equal;
            acc.non_equal_positive_residual += s.non_equal_positive_residual;
            acc.false_positives += s.false_positives;
            acc.equal_zero_residual += s.equal_zero_residual;
            acc
        },
    )
}

/// Exact check of two polynomial identities in `xᵢ = λᵢ²`:
///
/// * `2xᵢ² − Λxᵢ − cᵢ = 0` with `Λ = x₁+x₂+x₃`, so a common `c` makes every
///   `xᵢ` a root of `2x² − Λx − c`;
/// * `cᵢ − cⱼ = (xᵢ − xⱼ)(xᵢ + xⱼ − x_k)`.
///
/// Both sides have degree at most two in each variable, so agreement on the
/// grid `{1,2,3}³` proves the identities.
pub fn quadratic_identities_hold() -> bool {
    let q = |n: i64| Rational::from_i64(n);
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                let x = [q(a), q(b), q(c)];
                let lam = x[0].clone() + x[1].clone() + x[2].clone();
                let cv: Vec<Rational> = (0..3)
                    .map(|i| x[i].clone() * (x[i].clone() - x[(i + 1) % 3].clone() - x[(i + 2) % 3].clone()))
                    .collect();
                for i in 0..3 {
                    let root = q(2) * x[i].clone() * x[i].clone() - lam.clone() * x[i].clone() - cv[i].clone();
                    if root != q(0) {
                        return false;
                    }
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    let lhs = cv[i].clone() - cv[j].clone();
                    let rhs = (x[i].clone() - x[j].clone()) * (x[i].clone() + x[j].clone() - x[k].clone());
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A co-frame change by diagonal sign matrices in SO(3) relating two sign
/// patterns of the uniform solution.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SignCertificate {
    pub from: [i8; 3],
    pub to: [i8; 3],
    pub m_signs: [i8; 3],
    pub n_signs: [i8; 3],
    /// The block map `diag(M, N)` is a Lie algebra automorphism and carries
    /// one ω to the other.
    pub verified: bool,
}

const SO3_SIGNS: [[i8; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

/// Searches diagonal sign matrices `M, N ∈ SO(3)` with
/// `M diag(from) ᵗN = diag(to)` and verifies the result as an automorphism.
pub fn sign_certificate(from: [i8; 3], to: [i8; 3]) -> Option<SignCertificate> {
    let alg = coframe_algebra::<Rational>();
    let q = |s: i8| Rational::from_i64(s as i64);
    for m in SO3_SIGNS {
        for n in SO3_SIGNS {
            if (0..3).all(|i| m[i] * from[i] * n[i] == to[i]) {
                let p = Matrix::from_fn(6, 6, |i, j| {
                    if i != j {
                        q(0)
                    } else if i < 3 {
                        q(m[i])
                    } else {
                        q(n[i - 3])
                    }
                });
                let image = alg.change_basis(&p, alg.labels().to_vec(), 0.0).ok()?;
                let auto = image == alg;
                let w_from = DiagonalInvariantForm::new(q(from[0]), q(from[1]), q(from[2]), 0.0).ok()?.omega();
                let w_to = DiagonalInvariantForm::new(q(to[0]), q(to[1]), q(to[2]), 0.0).ok()?.omega();
                let carried = w_from.pullback(&p).ok()? == w_to;
                return Some(SignCertificate { from, to, m_signs: m, n_signs: n, verified: auto && carried });
            }
        }
    }
    None
}

/// Sign pattern of the uniform solution and whether the SU(3) construction
/// accepts it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SignPattern {
    pub signs: [i8; 3],
    pub positive_count: usize,
    pub admissible: bool,
    pub builds: bool,
}

/// Result of the uniqueness argument.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub family: String,
    pub trace: Vec<String>,
    pub identities_hold: bool,
    pub sweep: SweepStats,
    pub sign_patterns: Vec<SignPattern>,
    pub certificates: Vec<SignCertificate>,
    pub mu_at_one: f64,
    pub mu_at_one_exact: String,
    pub residual_r1_at_one: f64,
    pub residual_r2_at_one: f64,
    pub verdict: bool,
}

/// Nearly Kähler check of a diagonal form in `ℚ(√3)`.
pub fn check_exact(d: &DiagonalInvariantForm<QSqrt3>) -> Result<(SU3Structure<QSqrt3>, NKReport<QSqrt3>)> {
    let cf = CyclicCoframe::<QSqrt3>::new()?;
    let c = d.candidate(&cf)?;
    nk_check(&c, |a| cf.d(a), 0.0)
}

/// Nearly Kähler check of a diagonal form in floating point.
pub fn check_float(d: &DiagonalInvariantForm<f64>, tol: f64) -> Result<(SU3Structure<f64>, NKReport<f64>)> {
    let cf = CyclicCoframe::<f64>::new()?;
    let c = d.candidate(&cf)?;
    nk_check(&c, |a| cf.d(a), tol)
}

/// Runs the full uniqueness argument.
pub fn solve_nk(denominator: i64, max_numerator: i64) -> Result<SolveReport> {
    let identities_hold = quadratic_identities_hold();
    let sweep = sweep(denominator, max_numerator);

    let cf = CyclicCoframe::<QSqrt3>::new()?;
    let q = |s: i8| QSqrt3::from_i64(s as i64);
    let mut sign_patterns = Vec::new();
    for s0 in [1i8, -1] {
        for s1 in [1i8, -1] {
            for s2 in [1i8, -1] {
                let signs = [s0, s1, s2];
                let d = DiagonalInvariantForm::new(q(s0), q(s1), q(s2), 0.0)?;
                let builds = build_su3(&d.candidate(&cf)?, 0.0).is_ok();
                sign_patterns.push(SignPattern {
                    signs,
                    positive_count: signs.iter().filter(|&&s| s > 0).count(),
                    admissible: su3_admissible(&d, 0.0),
                    builds,
                });
            }
        }
    }
    let certificates: Vec<SignCertificate> = sign_patterns
        .iter()
        .filter(|p| p.builds && p.positive_count == 1)
        .filter_map(|p| sign_certificate([1, 1, 1], p.signs))
        .collect();

    let (_, nk) = check_exact(&DiagonalInvariantForm::uniform(QSqrt3::one())?)?;
    let trace = vec![
        "every λᵢ² is a root of 2x² − Λx − c with Λ = λ₁² + λ₂² + λ₃²".to_string(),
        "cᵢ − cⱼ = (xᵢ − xⱼ)(xᵢ + xⱼ − x_k) with xᵢ = λᵢ² > 0".to_string(),
        "two distinct root values x₁ ≠ x₂ = x₃ force x₁ + x₂ = Λ/2 = (x₁ + 2x₂)/2, so x₁ = 0".to_string(),
        "three distinct values are impossible for a quadratic, hence λ₁² = λ₂² = λ₃²".to_string(),
        "positivity keeps the sign patterns with λ₁λ₂λ₃ > 0: all positive or exactly one positive".to_string(),
        "the one-positive patterns are carried to the all-positive one by a rotation by π".to_string(),
    ];
    let patterns_ok = sign_patterns.iter().all(|p| p.builds == (p.positive_count == 3 || p.positive_count == 1));
    let verdict = identities_hold
        && sweep.false_positives == 0
        && sweep.equal_zero_residual == sweep.admissible_equal
        && patterns_ok
        && certificates.len() == 3
        && certificates.iter().all(|c| c.verified)
        && nk.verdict;
    Ok(SolveReport {
        family: "(λ, λ, λ), λ > 0".into(),
        trace,
        identities_hold,
        sweep,
        sign_patterns,
        certificates,
        mu_at_one: nk.mu.to_f64(),
        mu_at_one_exact: nk.mu.to_string(),
        residual_r1_at_one: nk.residual_r1,
        residual_r2_at_one: nk.residual_r2,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn diag(l: [i64; 3]) -> DiagonalInvariantForm<Q> {
        DiagonalInvariantForm::new(Q::from_i64(l[0]), Q::from_i64(l[1]), Q::from_i64(l[2]), 0.0).unwrap()
    }

    #[test]
    fn coframe_axioms() {
        let cf = CyclicCoframe::<Q>::new().unwrap();
        assert_eq!(cf.d(&KForm::basis(6, &[0])).unwrap(), KForm::basis(6, &[1, 2]));
        assert_eq!(cf.d(&KForm::basis(6, &[4])).unwrap(), KForm::basis(6, &[5, 3]));
    }

    #[test]
    fn d_omega_matches_three_psi() {
        let cf = CyclicCoframe::<Q>::new().unwrap();
        let d = diag([2, 3, 5]);
        let dw = cf.d(&d.omega()).unwrap();
        // λ₁(e₂₃∧f₁ − e₁∧f₂₃) + λ₂(e₃₁∧f₂ − e₂∧f₃₁) + λ₃(e₁₂∧f₃ − e₃∧f₁₂)
        let t = |idx: &[usize], c: i64| KForm::<Q>::term(6, idx, Q::from_i64(c));
        let want = t(&[1, 2, 3], 2)
            .sub(&t(&[0, 4, 5], 2))
            .add(&KForm::term(6, &[2, 0, 4], Q::from_i64(3)))
            .sub(&KForm::term(6, &[1, 5, 3], Q::from_i64(3)))
            .add(&t(&[0, 1, 5], 5))
            .sub(&t(&[2, 3, 4], 5));
        assert_eq!(dw, want);
    }

    #[test]
    fn tau_is_the_quartic() {
        let r = tau_identity(40, 7).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn admissibility_examples() {
        assert!(su3_admissible(&diag([1, 1, 1]), 0.0));
        assert_eq!(diag([1, 1, 1]).quartic_product(), Q::from_i64(-3));
        assert!(!su3_admissible(&diag([1, 1, 3]), 0.0));
        assert_eq!(diag([1, 1, 3]).quartic_product(), Q::from_i64(45));
        assert!(su3_admissible(&diag([-1, -1, 1]), 0.0));
        assert!(!su3_admissible(&diag([1, 1, -1]), 0.0));
    }

    #[test]
    fn residual_examples() {
        assert_eq!(nk_residual(&diag([3, 3, 3])), Q::from_i64(0));
        assert_eq!(diag([3, 3, 3]).c_values()[0], Q::from_i64(-81));
        assert_eq!(nk_residual(&diag([1, 1, 2])), Q::from_i64(12));
    }

    #[test]
    fn reduction_of_diagonal_and_monomial() {
        let r = reduce_to_diagonal(&diag([1, 2, 3]).to_abc(), 0.0).unwrap();
        assert!(r.exact);
        assert_eq!(r.diagonal, diag([1, 2, 3]));
        assert_eq!(r.m, Matrix::identity(3));
        assert_eq!(r.n, Matrix::identity(3));
        let c = Matrix::from_rows(vec![
            vec![Q::from_i64(0), Q::from_i64(2), Q::from_i64(0)],
            vec![Q::from_i64(3), Q::from_i64(0), Q::from_i64(0)],
            vec![Q::from_i64(0), Q::from_i64(0), Q::from_i64(5)],
        ]);
        let w = ABCForm::new(Vector::zeros(3), Vector::zeros(3), c.clone()).unwrap();
        let r = reduce_to_diagonal(&w, 0.0).unwrap();
        assert!(r.exact);
        assert_eq!(r.diagonal.det(), c.det());
        assert_eq!(r.reconstruction_error, 0.0);
    }

    #[test]
    fn type_condition_rejected() {
        let mut w = diag([1, 1, 1]).to_abc();
        w.a = Vector::basis(3, 0);
        assert_eq!(reduce_to_diagonal(&w, 0.0).unwrap_err(), Error::TypeConditionFails);
        let z = ABCForm::<Q>::new(Vector::zeros(3), Vector::zeros(3), Matrix::zeros(3, 3)).unwrap();
        assert_eq!(reduce_to_diagonal(&z, 0.0).unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn identities_and_certificates() {
        assert!(quadratic_identities_hold());
        let c = sign_certificate([1, 1, 1], [1, -1, -1]).unwrap();
        assert!(c.verified);
        assert!(sign_certificate([1, 1, 1], [-1, -1, -1]).is_none());
    }

    #[test]
    fn small_sweep_has_no_false_positive() {
        let s = sweep(2, 4);
        assert_eq!(s.triples, 512);
        assert_eq!(s.false_positives, 0);
        assert_eq!(s.equal_zero_residual, s.admissible_equal);
        assert!(s.admissible_non_equal > 0);
    }
}
