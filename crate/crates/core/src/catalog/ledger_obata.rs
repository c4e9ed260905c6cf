//! S³×S³ as the 3-symmetric space `SU(2)³/Δ`.
//!
//! Basis of `su(2)³`: `hᵢ = (Xᵢ,Xᵢ,Xᵢ)` spans the diagonal, and
//! `uᵢ = (⅔,−⅓,−⅓)Xᵢ`, `wᵢ = (−⅓,⅔,−⅓)Xᵢ` span the complement
//! `{A + B + C = 0}`. The pair `(X,Y) = (A − C, B − C)` identifies the
//! complement with `su(2)²`, and the cyclic shift `(A,B,C) ↦ (B,C,A)` acts
//! there as `S(X,Y) = (Y − X, −X)`.

use serde::{Deserialize, Serialize};

use super::{cross_oracle, labels, CrossOracle};
use crate::error::Result;
use crate::lie::{
    acs_from_automorphism, check_3symmetric, is_naturally_reductive, InvariantMetric, LieAlgebra, OrderThreeSym,
    ReductiveSpace,
};
use crate::linalg::{Endo, Gram, Matrix};
use crate::scalar::{QSqrt3, Rational, Scalar};

/// `su(2)³` in the product basis `(X₁,X₂,X₃)` of each factor.
fn su2_cubed<S: Scalar>() -> LieAlgebra<S> {
    let mut names = Vec::new();
    let mut entries = Vec::new();
    for f in 0..3 {
        for i in 0..3 {
            names.push(format!("X{}^{}", i + 1, f + 1));
            entries.push((3 * f + i, 3 * f + (i + 1) % 3, 3 * f + (i + 2) % 3, -S::one()));
        }
    }
    LieAlgebra::from_sparse(names, entries, 0.0).expect("su(2)³ satisfies Jacobi")
}

/// The model: reductive space, order-three automorphism, normal metric and
/// canonical almost complex structure.
#[derive(Clone, Debug)]
pub struct LedgerObata<S> {
    pub space: ReductiveSpace<S>,
    pub sym: OrderThreeSym<S>,
    pub metric: InvariantMetric<S>,
    pub j: Endo<S>,
}

/// Weights of the displayed product-style metric
/// `q(Y − X, Y' − X') + q(X, X')` on the `(X,Y)` pair.
pub fn displayed_gram<S: Scalar>() -> Gram<S> {
    // (X,Y) ↦ q(Y−X) + q(X) = 2q(X) − 2q(X,Y) + q(Y)
    let m = Matrix::from_fn(6, 6, |a, b| {
        let (fa, ia) = (a / 3, a % 3);
        let (fb, ib) = (b / 3, b % 3);
        if ia != ib {
            return S::zero();
        }
        match (fa, fb) {
            (0, 0) => S::from_i64(2),
            (1, 1) => S::one(),
            _ => -S::one(),
        }
    });
    Gram::new(m, 0.0).expect("symmetric")
}

/// The metric induced by minus the Killing form of `su(2)³` on the complement:
/// `⟨u,u⟩ = ⟨w,w⟩ = ⅔`, `⟨u,w⟩ = −⅓` in each coordinate.
pub fn normal_gram<S: Scalar>() -> Gram<S> {
    let m = Matrix::from_fn(6, 6, |a, b| {
        if a % 3 != b % 3 {
            S::zero()
        } else if a / 3 == b / 3 {
            S::from_ratio(2, 3)
        } else {
            S::from_ratio(-1, 3)
        }
    });
    Gram::new(m, 0.0).expect("symmetric")
}

/// Builds the model over `ℚ(√3)` (the complex structure `J = (2S + 1)/√3`
/// needs `√3`).
pub fn ledger_obata_su2() -> Result<LedgerObata<QSqrt3>> {
    let base = su2_cubed::<QSqrt3>();
    let t = |n: i64| QSqrt3::from_ratio(n, 3);
    // columns: h₁..h₃, u₁..u₃, w₁..w₃ written in the product basis
    let p = Matrix::from_fn(9, 9, |row, col| {
        let (f, i) = (row / 3, row % 3);
        let (kind, k) = (col / 3, col % 3);
        if i != k {
            return QSqrt3::zero();
        }
        match kind {
            0 => QSqrt3::one(),
            1 => {
                if f == 0 {
                    t(2)
                } else {
                    t(-1)
                }
            }
            _ => {
                if f == 1 {
                    t(2)
                } else {
                    t(-1)
                }
            }
        }
    });
    let names = labels(&["h1", "h2", "h3", "u1", "u2", "u3", "w1", "w2", "w3"]);
    let alg = base.change_basis(&p, names, 0.0)?;
    let space = ReductiveSpace::new(alg, vec![0, 1, 2], (3..9).collect(), 0.0)?;

    // S u = −u − w, S w = u; m coordinates are (u₁,u₂,u₃,w₁,w₂,w₃)
    let s = Matrix::from_fn(6, 6, |r, c| {
        if r % 3 != c % 3 {
            return QSqrt3::zero();
        }
        match (r / 3, c / 3) {
            (0, 0) => -QSqrt3::one(),
            (1, 0) => -QSqrt3::one(),
            (0, 1) => QSqrt3::one(),
            _ => QSqrt3::zero(),
        }
    });
    let sym = OrderThreeSym::new(s, 0.0)?;
    let j = acs_from_automorphism(&sym, 0.0)?;
    let metric = InvariantMetric::new(&space, normal_gram(), 0.0)?;
    Ok(LedgerObata { space, sym, metric, j })
}

/// The automorphism induced by the cyclic shift, checked against the
/// bracket: `S[x,y] = [Sx,Sy]` on all of `su(2)³`.
pub fn shift_is_automorphism(model: &LedgerObata<QSqrt3>) -> bool {
    let alg = model.space.algebra();
    let mut full = Matrix::<QSqrt3>::identity(9);
    let s = model.sym.matrix();
    for r in 0..6 {
        for c in 0..6 {
            full[(3 + r, 3 + c)] = s[(r, c)].clone();
        }
    }
    (0..9).all(|a| {
        (0..9).all(|b| {
            let lhs = full.apply(&alg.bracket_basis(a, b));
            let rhs = alg.bracket(&full.column(a), &full.column(b));
            lhs == rhs
        })
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LedgerObataReport {
    pub dim_h: usize,
    pub dim_m: usize,
    pub s_cubed_identity: bool,
    pub s_is_automorphism: bool,
    pub s_matches_pair_formula: bool,
    pub three_symmetric: bool,
    pub normal_metric_invariant_under_s: bool,
    pub normal_metric_naturally_reductive: bool,
    /// The product-style metric `q(Y−X) + q(X)` read literally.
    pub displayed_metric_invariant_under_s: bool,
    pub displayed_metric_naturally_reductive: bool,
    pub cross_oracle: CrossOracle,
    pub verdict: bool,
}

fn s_invariant(s: &Endo<QSqrt3>, g: &Gram<QSqrt3>) -> bool {
    s.transpose().mul(g.matrix()).mul(s) == *g.matrix()
}

pub fn ledger_obata_verify(samples: usize, seed: u64, tol: f64) -> Result<LedgerObataReport> {
    let m = ledger_obata_su2()?;
    let s = m.sym.matrix();
    let s_cubed_identity = s.mul(s).mul(s) == Matrix::identity(6);
    // (X,Y) ↦ (Y − X, −X) on coefficient pairs (x, y) of x u + y w
    let s_matches_pair_formula = (0..6).all(|c| {
        let v = s.column(c);
        let (x, y) = if c < 3 { (QSqrt3::one(), QSqrt3::zero()) } else { (QSqrt3::zero(), QSqrt3::one()) };
        let i = c % 3;
        v[i] == y.clone() - x.clone() && v[3 + i] == -x && (0..6).all(|r| r % 3 == i || v[r] == QSqrt3::zero())
    });
    let three_symmetric = check_3symmetric(&m.space, &m.j, 0.0)?;
    let normal = normal_gram::<QSqrt3>();
    let displayed = displayed_gram::<QSqrt3>();
    let displayed_nr = match InvariantMetric::new(&m.space, displayed.clone(), 0.0) {
        Ok(g) => is_naturally_reductive(&m.space, &g, 0.0),
        Err(_) => false,
    };
    let report_cross = cross_oracle(&m.space, &normal, &m.j, samples, seed, tol)?;
    let normal_nr = is_naturally_reductive(&m.space, &m.metric, 0.0);
    let normal_s = s_invariant(s, &normal);
    let verdict = s_cubed_identity
        && shift_is_automorphism(&m)
        && s_matches_pair_formula
        && three_symmetric
        && normal_s
        && normal_nr
        && report_cross.metric_verdict
        && report_cross.agree;
    Ok(LedgerObataReport {
        dim_h: m.space.dim_h(),
        dim_m: m.space.dim_m(),
        s_cubed_identity,
        s_is_automorphism: shift_is_automorphism(&m),
        s_matches_pair_formula,
        three_symmetric,
        normal_metric_invariant_under_s: normal_s,
        normal_metric_naturally_reductive: normal_nr,
        displayed_metric_invariant_under_s: s_invariant(s, &displayed),
        displayed_metric_naturally_reductive: displayed_nr,
        cross_oracle: report_cross,
        verdict,
    })
}

/// Exact rational algebra data, for export.
pub fn ledger_obata_rational() -> Result<ReductiveSpace<Rational>> {
    let m = ledger_obata_su2()?;
    let entries: Vec<(usize, usize, usize, Rational)> = m
        .space
        .algebra()
        .sparse_entries(0.0)
        .into_iter()
        .map(|(i, j, k, v)| (i, j, k, v.as_rational().expect("rational structure constants")))
        .collect();
    let alg = LieAlgebra::from_sparse(m.space.algebra().labels().to_vec(), entries, 0.0)?;
    ReductiveSpace::new(alg, vec![0, 1, 2], (3..9).collect(), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_order_three() {
        let m = ledger_obata_su2().unwrap();
        assert_eq!((m.space.dim_h(), m.space.dim_m()), (3, 6));
        assert!(shift_is_automorphism(&m));
    }

    #[test]
    fn normal_metric_is_nearly_kahler() {
        let r = ledger_obata_verify(10, 1, 1e-10).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(r.cross_oracle.form_verdict);
        assert!(!r.displayed_metric_invariant_under_s);
    }
}
