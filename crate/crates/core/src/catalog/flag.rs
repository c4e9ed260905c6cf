//! The flag manifold `SU(3)/T²`.
//!
//! `su(3)` is built from 3×3 complex matrices. The complement of the torus
//! is parametrized by
//!
//! ```text
//! ⟨a,b,c⟩ = [[ 0, −ā,  b],
//!            [ a,  0, −c̄],
//!            [−b̄,  c,  0]]
//! ```
//!
//! and the real basis is `H₁ = diag(i,−i,0)`, `H₂ = diag(0,i,−i)`,
//! `P₁ = ⟨1,0,0⟩`, `P₂ = ⟨i,0,0⟩`, `Q₁, Q₂`, `R₁, R₂` likewise. All structure
//! constants come from matrix commutators in exact Gaussian rationals.

use num::complex::Complex;
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cross_oracle, labels, CrossOracle};
use crate::error::Result;
use crate::lie::{check_3symmetric, is_naturally_reductive, is_subalgebra_mod_h, InvariantMetric, LieAlgebra, ReductiveSpace};
use crate::linalg::{Endo, Gram, Matrix};
use crate::scalar::{Rational, Scalar};

pub type Gauss = Complex<Rational>;
pub type CMat = [[Gauss; 3]; 3];

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn gauss(re: Rational, im: Rational) -> Gauss {
    Complex::new(re, im)
}

fn czero() -> Gauss {
    Complex::zero()
}

fn cmat_zero() -> CMat {
    std::array::from_fn(|_| std::array::from_fn(|_| czero()))
}

fn cmul(x: &CMat, y: &CMat) -> CMat {
    let mut out = cmat_zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = &out[i][j] + &x[i][k] * &y[k][j];
            }
        }
    }
    out
}

/// `[X, Y] = XY − YX`.
pub fn commutator(x: &CMat, y: &CMat) -> CMat {
    let a = cmul(x, y);
    let b = cmul(y, x);
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] - &b[i][j]))
}

/// The matrix `⟨a,b,c⟩`.
pub fn embed(a: &Gauss, b: &Gauss, c: &Gauss) -> CMat {
    let mut m = cmat_zero();
    m[1][0] = a.clone();
    m[0][1] = -a.conj();
    m[0][2] = b.clone();
    m[2][0] = -b.conj();
    m[2][1] = c.clone();
    m[1][2] = -c.conj();
    m
}

/// `diag(i y₀, i y₁, i y₂)`.
pub fn diag_imag(y: [Rational; 3]) -> CMat {
    let mut m = cmat_zero();
    for (i, v) in y.into_iter().enumerate() {
        m[i][i] = gauss(q(0, 1), v);
    }
    m
}

/// Splits an element of `su(3)` into torus coordinates `(t₁, t₂)` on
/// `(H₁, H₂)` and the slots `(a, b, c)`. `None` when the matrix is not of
/// that shape.
pub fn decompose(m: &CMat) -> Option<([Rational; 2], [Gauss; 3])> {
    let t1 = m[0][0].im.clone();
    let t2 = -m[2][2].im.clone();
    let abc = [m[1][0].clone(), m[0][2].clone(), m[2][1].clone()];
    let h = diag_imag([t1.clone(), t2.clone() - t1.clone(), -t2.clone()]);
    let rebuilt = embed(&abc[0], &abc[1], &abc[2]);
    let ok = (0..3).all(|i| (0..3).all(|j| &h[i][j] + &rebuilt[i][j] == m[i][j]));
    ok.then_some(([t1, t2], abc))
}

/// Real basis matrices in the order `H₁, H₂, P₁, P₂, Q₁, Q₂, R₁, R₂`.
pub fn basis_matrices() -> Vec<CMat> {
    let one = gauss(q(1, 1), q(0, 1));
    let i = gauss(q(0, 1), q(1, 1));
    let z = czero();
    let r = |n: i64| Rational::from_integer(n.into());
    vec![
        diag_imag([r(1), r(-1), r(0)]),
        diag_imag([r(0), r(1), r(-1)]),
        embed(&one, &z, &z),
        embed(&i, &z, &z),
        embed(&z, &one, &z),
        embed(&z, &i, &z),
        embed(&z, &z, &one),
        embed(&z, &z, &i),
    ]
}

fn coords(m: &CMat) -> Vec<Rational> {
    let ([t1, t2], [a, b, c]) = decompose(m).expect("commutators stay in su(3)");
    vec![t1, t2, a.re, a.im, b.re, b.im, c.re, c.im]
}

/// Flag manifold data over the rationals.
#[derive(Clone, Debug)]
pub struct FlagModel {
    pub space: ReductiveSpace<Rational>,
    /// Index pairs of `p`, `q`, `r` inside `m`.
    pub summands: [[usize; 2]; 3],
}

pub fn flag_model() -> Result<FlagModel> {
    let basis = basis_matrices();
    let mut entries = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for (k, v) in coords(&commutator(&basis[i], &basis[j])).into_iter().enumerate() {
                if !v.is_zero() {
                    entries.push((i, j, k, v));
                }
            }
        }
    }
    let alg = LieAlgebra::from_sparse(labels(&["H1", "H2", "P1", "P2", "Q1", "Q2", "R1", "R2"]), entries, 0.0)?;
    let space = ReductiveSpace::new(alg, vec![0, 1], (2..8).collect(), 0.0)?;
    Ok(FlagModel { space, summands: [[0, 1], [2, 3], [4, 5]] })
}

impl FlagModel {
    /// `J = σ_p J_p ⊕ σ_q J_q ⊕ σ_r J_r` with `J_a⟨a⟩ = ⟨ia⟩`.
    pub fn acs<S: Scalar>(&self, signs: [i8; 3]) -> Endo<S> {
        let mut j = Matrix::zeros(6, 6);
        for (s, [x, y]) in signs.iter().zip(self.summands) {
            let s = S::from_i64(*s as i64);
            j[(y, x)] = s.clone();
            j[(x, y)] = -s;
        }
        j
    }

    /// `g = r g_p + s g_q + t g_r` with `g_p(⟨a⟩,⟨a'⟩) = Re(a ā')`.
    pub fn metric<S: Scalar>(&self, r: S, s: S, t: S) -> Gram<S> {
        Gram::diagonal(&[r.clone(), r, s.clone(), s, t.clone(), t])
    }
}

/// One displayed bracket identity compared with the matrix commutator.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketFamily {
    pub name: String,
    pub formula: String,
    pub samples: usize,
    pub holds: bool,
}

fn sample_values() -> Vec<Gauss> {
    vec![
        gauss(q(1, 1), q(0, 1)),
        gauss(q(0, 1), q(1, 1)),
        gauss(q(1, 1), q(2, 1)),
        gauss(q(3, 2), q(-1, 3)),
        gauss(q(-2, 5), q(7, 4)),
    ]
}

fn slot(pos: usize, v: &Gauss) -> CMat {
    let z = czero();
    match pos {
        0 => embed(v, &z, &z),
        1 => embed(&z, v, &z),
        _ => embed(&z, &z, v),
    }
}

fn family(name: &str, formula: &str, f: impl Fn(&Gauss, &Gauss) -> (CMat, CMat)) -> BracketFamily {
    let vals = sample_values();
    let mut samples = 0;
    let mut holds = true;
    for x in &vals {
        for y in &vals {
            let (lhs, rhs) = f(x, y);
            samples += 1;
            holds &= lhs == rhs;
        }
    }
    BracketFamily { name: name.into(), formula: formula.into(), samples, holds }
}

/// Displayed mixed-slot family `[⟨a,0,0⟩,⟨0,b,0⟩] = ⟨0,0,ab⟩` and its
/// cyclic companions, read literally.
pub fn displayed_mixed_families() -> Vec<BracketFamily> {
    (0..3)
        .map(|p| {
            let (s, t) = ((p + 1) % 3, (p + 2) % 3);
            let names = ["a", "b", "c"];
            family(
                &format!("mixed-{}{}", names[p], names[s]),
                &format!("[{}, {}] = {} slot {}·{}", names[p], names[s], names[t], names[p], names[s]),
                |x, y| (commutator(&slot(p, x), &slot(s, y)), slot(t, &(x * y))),
            )
        })
        .collect()
}

/// The mixed-slot family as produced by the commutator:
/// `[⟨a,0,0⟩,⟨0,b,0⟩] = ⟨0,0,−\overline{ab}⟩` and cyclically.
pub fn oracle_mixed_families() -> Vec<BracketFamily> {
    (0..3)
        .map(|p| {
            let (s, t) = ((p + 1) % 3, (p + 2) % 3);
            let names = ["a", "b", "c"];
            family(
                &format!("mixed-{}{}", names[p], names[s]),
                &format!("[{}, {}] = {} slot −conj({}·{})", names[p], names[s], names[t], names[p], names[s]),
                |x, y| (commutator(&slot(p, x), &slot(s, y)), slot(t, &-(x * y).conj())),
            )
        })
        .collect()
}

/// Same-slot families: `[⟨a⟩,⟨a'⟩] = diag(iy,−iy,0)` with `y = 2 Im(a ā')`
/// (displayed); the other two slots give `diag(−iy,0,iy)` and
/// `diag(0,iy,−iy)` (derived from the matrices).
pub fn same_slot_families() -> Vec<BracketFamily> {
    let two_im = |x: &Gauss, y: &Gauss| (x * y.conj()).im * q(2, 1);
    let z = || q(0, 1);
    vec![
        family("same-a", "[a, a'] = diag(iy, −iy, 0), y = 2 Im(a ā')", |x, y| {
            let v = two_im(x, y);
            (commutator(&slot(0, x), &slot(0, y)), diag_imag([v.clone(), -v, z()]))
        }),
        family("same-b", "[b, b'] = diag(−iy, 0, iy), y = 2 Im(b b̄')", |x, y| {
            let v = two_im(x, y);
            (commutator(&slot(1, x), &slot(1, y)), diag_imag([-v.clone(), z(), v]))
        }),
        family("same-c", "[c, c'] = diag(0, iy, −iy), y = 2 Im(c c̄')", |x, y| {
            let v = two_im(x, y);
            (commutator(&slot(2, x), &slot(2, y)), diag_imag([z(), v.clone(), -v]))
        }),
    ]
}

/// Characters of the torus `diag(e^{ir}, e^{is}, e^{it})` on each slot,
/// as coefficient vectors of `(r, s, t)` normalized to sum zero.
pub fn slot_weights(model: &FlagModel) -> [[Rational; 3]; 3] {
    // ad(H) on the real pair (X₁, X₂) is w·[[0,−1],[1,0]]; H₁ ↔ (1,−1,0), H₂ ↔ (0,1,−1)
    std::array::from_fn(|k| {
        let [x, y] = model.summands[k];
        let w1 = model.space.isotropy(0)[(y, x)].clone();
        let w2 = model.space.isotropy(1)[(y, x)].clone();
        // w = (α, β, γ), α − β = w1, β − γ = w2, α + β + γ = 0
        let three = q(3, 1);
        let alpha = (q(2, 1) * &w1 + &w2) / &three;
        let beta = alpha.clone() - &w1;
        let gamma = beta.clone() - &w2;
        [alpha, beta, gamma]
    })
}

/// The displayed characters `s − t`, `t − r`, `r − s` for `a`, `b`, `c`.
pub fn displayed_weights() -> [[Rational; 3]; 3] {
    let r = |a: i64, b: i64, c: i64| [q(a, 1), q(b, 1), q(c, 1)];
    [r(0, 1, -1), r(-1, 0, 1), r(1, -1, 0)]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AcsCheck {
    pub signs: [i8; 3],
    pub integrable: bool,
    pub three_symmetric: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlagGridPoint {
    pub rst: [i64; 3],
    pub naturally_reductive: bool,
    pub nk_verdict: bool,
    pub cross_oracle: CrossOracle,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlagReport {
    pub jacobi: bool,
    pub summands_invariant: bool,
    pub displayed_mixed: Vec<BracketFamily>,
    pub oracle_mixed: Vec<BracketFamily>,
    pub same_slot: Vec<BracketFamily>,
    /// Torus characters per slot as `(r, s, t)` coefficients.
    pub weights: Vec<[String; 3]>,
    pub weights_match_displayed: bool,
    /// Agreement as real representations, i.e. up to sign and relabeling.
    pub weights_match_displayed_up_to_sign_as_set: bool,
    pub acs: Vec<AcsCheck>,
    pub grid: Vec<FlagGridPoint>,
    pub grid_ok: bool,
    /// All checks that do not depend on the displayed mixed-slot family.
    pub structure_ok: bool,
    pub verdict: bool,
}

/// Every check on the flag manifold over the grid `{1..n}³`.
pub fn flag_verify(n: i64, samples: usize, seed: u64, tol: f64) -> Result<FlagReport> {
    let model = flag_model()?;
    let space = &model.space;
    let summands_invariant = (0..2).all(|h| {
        let a = space.isotropy(h);
        (0..6).all(|r| (0..6).all(|c| r / 2 == c / 2 || a[(r, c)].is_zero()))
    });
    let weights = slot_weights(&model);
    let shown = displayed_weights();
    let neg = |w: &[Rational; 3]| w.clone().map(|x| -x);
    let weights_match_displayed = weights == shown;
    let as_set = weights.iter().all(|w| shown.iter().any(|d| d == w || *d == neg(w)))
        && shown.iter().all(|d| weights.iter().any(|w| d == w || *d == neg(w)));

    let mut acs = Vec::new();
    for signs in [[1, 1, 1], [1, 1, -1], [-1, 1, 1], [1, -1, 1]] {
        let j: Endo<Rational> = model.acs(signs);
        acs.push(AcsCheck {
            signs,
            integrable: is_subalgebra_mod_h(space, &j, 0.0)?,
            three_symmetric: check_3symmetric(space, &j, 0.0)?,
        });
    }
    let acs_ok = acs[0].three_symmetric && !acs[0].integrable && acs[1..].iter().all(|a| a.integrable);

    let points: Vec<[i64; 3]> =
        (1..=n).flat_map(|r| (1..=n).flat_map(move |s| (1..=n).map(move |t| [r, s, t]))).collect();
    let j: Endo<Rational> = model.acs([1, 1, 1]);
    let grid: Vec<FlagGridPoint> = points
        .par_iter()
        .map(|&[r, s, t]| -> Result<FlagGridPoint> {
            let z = |v: i64| <Rational as Scalar>::from_i64(v);
            let g = model.metric(z(r), z(s), z(t));
            let metric = InvariantMetric::new(space, g.clone(), 0.0)?;
            let nr = is_naturally_reductive(space, &metric, 0.0);
            let co = cross_oracle(space, &g, &j, samples, seed, tol)?;
            Ok(FlagGridPoint { rst: [r, s, t], naturally_reductive: nr, nk_verdict: co.form_verdict, cross_oracle: co })
        })
        .collect::<Result<_>>()?;
    let grid_ok = grid.iter().all(|p| {
        let diag = p.rst[0] == p.rst[1] && p.rst[1] == p.rst[2];
        p.naturally_reductive == diag && p.nk_verdict == diag && p.cross_oracle.agree
    });

    let displayed_mixed = displayed_mixed_families();
    let oracle_mixed = oracle_mixed_families();
    let same_slot = same_slot_families();
    let structure_ok = summands_invariant
        && oracle_mixed.iter().all(|f| f.holds)
        && same_slot.iter().all(|f| f.holds)
        && as_set
        && acs_ok
        && grid_ok;
    let verdict = structure_ok && displayed_mixed.iter().all(|f| f.holds);
    Ok(FlagReport {
        jacobi: true,
        summands_invariant,
        displayed_mixed,
        oracle_mixed,
        same_slot,
        weights: weights.iter().map(|w| w.clone().map(|x| x.to_string())).collect(),
        weights_match_displayed,
        weights_match_displayed_up_to_sign_as_set: as_set,
        acs,
        grid,
        grid_ok,
        structure_ok,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{intrinsic_eta, nomizu_levi_civita};

    #[test]
    fn same_slot_example() {
        let one = gauss(q(1, 1), q(0, 1));
        let i = gauss(q(0, 1), q(1, 1));
        let br = commutator(&slot(0, &one), &slot(0, &i));
        assert_eq!(br, diag_imag([q(-2, 1), q(2, 1), q(0, 1)]));
    }

    #[test]
    fn mixed_slot_example_from_matrices() {
        let one = gauss(q(1, 1), q(0, 1));
        let br = commutator(&slot(0, &one), &slot(1, &one));
        assert_eq!(br, slot(2, &gauss(q(-1, 1), q(0, 1))));
    }

    #[test]
    fn canonical_structure_is_three_symmetric() {
        let m = flag_model().unwrap();
        let j: Endo<Rational> = m.acs([1, 1, 1]);
        assert!(check_3symmetric(&m.space, &j, 0.0).unwrap());
        assert!(!is_subalgebra_mod_h(&m.space, &j, 0.0).unwrap());
        let k: Endo<Rational> = m.acs([1, 1, -1]);
        assert!(is_subalgebra_mod_h(&m.space, &k, 0.0).unwrap());
    }

    #[test]
    fn unequal_scalings_break_natural_reductivity() {
        let m = flag_model().unwrap();
        let g = InvariantMetric::new(&m.space, m.metric(q(1, 1), q(1, 1), q(2, 1)), 0.0).unwrap();
        assert!(!is_naturally_reductive(&m.space, &g, 0.0));
        let lc = nomizu_levi_civita(&m.space, &g, 0.0).unwrap();
        // U(P₁, R₁) = Λ(P₁)R₁ − ½[P₁,R₁]_m is proportional to t − r
        let half = q(1, 2);
        let u = lc.nabla(0, 4).sub(&m.space.bracket_m_basis(0, 4).scale(&half));
        assert!(!u.is_zero_within(0.0));

        let g = InvariantMetric::new(&m.space, m.metric(q(2, 1), q(1, 1), q(1, 1)), 0.0).unwrap();
        let (eta, _) = intrinsic_eta(&m.space, &g, &m.acs([1, 1, 1]), 0.0).unwrap();
        assert!(eta.skew_defect(g.gram()) > 0.0);
    }

    #[test]
    fn small_grid() {
        let r = flag_verify(2, 4, 7, 1e-10).unwrap();
        assert!(r.structure_ok, "{r:#?}");
        assert!(!r.displayed_mixed[0].holds);
    }
}
