//! ℂP³ as `Sp(2)/U(1)Sp(1)`.
//!
//! `sp(2)` is the algebra of quaternionic 2×2 matrices with `X* = −X`.
//! Basis, in order:
//!
//! * `h`: `diag(i,0)`, `diag(0,i)`, `diag(0,j)`, `diag(0,k)`;
//! * `p`: `[[0, q], [−q̄, 0]]` for `q = 1, i, j, k`;
//! * `v`: `diag(j,0)`, `diag(k,0)`.
//!
//! The metric family is `g_t = g_p + t·g_v` with both pieces the Euclidean
//! inner products of the coordinates above.

use serde::{Deserialize, Serialize};

use super::octonion::Quat;
use super::{cross_oracle, kahler_form, labels, nk_from_omega, CrossOracle};
use crate::error::{Error, Result};
use crate::lie::{nearly_kahler_nabla_j, InvariantMetric, LieAlgebra, ReductiveSpace};
use crate::linalg::{Endo, Gram, Matrix};
use crate::scalar::{format_rational, Rational, Scalar};

type Q = Rational;
type QMat = [[Quat<Q>; 2]; 2];

fn qzero() -> Quat<Q> {
    Quat::zero()
}

fn qmat_zero() -> QMat {
    std::array::from_fn(|_| std::array::from_fn(|_| qzero()))
}

fn qmul(x: &QMat, y: &QMat) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]))))
}

/// `[X, Y]` of quaternionic matrices.
pub fn qcommutator(x: &QMat, y: &QMat) -> QMat {
    let a = qmul(x, y);
    let b = qmul(y, x);
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].sub(&b[i][j])))
}

fn diag(slot: usize, q: Quat<Q>) -> QMat {
    let mut m = qmat_zero();
    m[slot][slot] = q;
    m
}

fn offdiag(q: Quat<Q>) -> QMat {
    let mut m = qmat_zero();
    m[1][0] = q.conj().neg();
    m[0][1] = q;
    m
}

/// Basis matrices in the order `h (4), p (4), v (2)`.
pub fn basis_matrices() -> Vec<QMat> {
    let u = Quat::<Q>::unit;
    vec![
        diag(0, u(1)),
        diag(1, u(1)),
        diag(1, u(2)),
        diag(1, u(3)),
        offdiag(u(0)),
        offdiag(u(1)),
        offdiag(u(2)),
        offdiag(u(3)),
        diag(0, u(2)),
        diag(0, u(3)),
    ]
}

fn coords(m: &QMat) -> Option<Vec<Q>> {
    let zero = <Q as Scalar>::zero();
    let (d0, d1, q) = (&m[0][0], &m[1][1], &m[0][1]);
    if d0.c[0] != zero || d1.c[0] != zero || m[1][0] != q.conj().neg() {
        return None;
    }
    Some(vec![
        d0.c[1].clone(),
        d1.c[1].clone(),
        d1.c[2].clone(),
        d1.c[3].clone(),
        q.c[0].clone(),
        q.c[1].clone(),
        q.c[2].clone(),
        q.c[3].clone(),
        d0.c[2].clone(),
        d0.c[3].clone(),
    ])
}

#[derive(Clone, Debug)]
pub struct CP3Model {
    pub space: ReductiveSpace<Q>,
    /// Indices of `p` and `v` inside `m`.
    pub p: [usize; 4],
    pub v: [usize; 2],
}

pub fn cp3_model() -> Result<CP3Model> {
    let basis = basis_matrices();
    let mut entries = Vec::new();
    for i in 0..10 {
        for j in i + 1..10 {
            let c = coords(&qcommutator(&basis[i], &basis[j]))
                .ok_or_else(|| Error::NotReductive("commutator left sp(2)".into()))?;
            for (k, v) in c.into_iter().enumerate() {
                if v != <Q as Scalar>::zero() {
                    entries.push((i, j, k, v));
                }
            }
        }
    }
    let names = labels(&["Hi", "Ki", "Kj", "Kk", "P1", "Pi", "Pj", "Pk", "Vj", "Vk"]);
    let alg = LieAlgebra::from_sparse(names, entries, 0.0)?;
    let space = ReductiveSpace::new(alg, vec![0, 1, 2, 3], (4..10).collect(), 0.0)?;
    Ok(CP3Model { space, p: [0, 1, 2, 3], v: [4, 5] })
}

/// Basis of `Hom_h(m_cols, m_rows)`: linear maps between two sets of
/// coordinates of `m` commuting with the isotropy action.
pub fn equivariant_maps<S: Scalar>(space: &ReductiveSpace<S>, rows: &[usize], cols: &[usize]) -> Vec<Matrix<S>> {
    let (r, c) = (rows.len(), cols.len());
    let unknowns = r * c;
    let mut eqs: Vec<Vec<S>> = Vec::new();
    for h in 0..space.dim_h() {
        let a = space.isotropy(h);
        let ar = a.submatrix(rows, rows);
        let ac = a.submatrix(cols, cols);
        // (A_r E − E A_c)_{ij} = Σ_k A_r[i,k] E[k,j] − Σ_k E[i,k] A_c[k,j]
        for i in 0..r {
            for j in 0..c {
                let mut row = vec![S::zero(); unknowns];
                for k in 0..r {
                    row[k * c + j] = row[k * c + j].clone() + ar[(i, k)].clone();
                }
                for k in 0..c {
                    row[i * c + k] = row[i * c + k].clone() - ac[(k, j)].clone();
                }
                eqs.push(row);
            }
        }
    }
    let m = Matrix::from_rows(eqs);
    m.nullspace(0.0)
        .into_iter()
        .map(|v| Matrix::from_fn(r, c, |i, j| v[i * c + j].clone()))
        .collect()
}

/// Commutant analysis of the isotropy representation on `m = p ⊕ v`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IsotropySplitting {
    pub summand_dims: Vec<usize>,
    pub commutant_dim: usize,
    pub block_commutant_dims: Vec<usize>,
    pub cross_hom_dims: Vec<usize>,
    /// Each block commutant is spanned by `Id` and one `K` with `K² = c·Id`, `c < 0`.
    pub blocks_are_fields: bool,
    pub irreducible_summands: usize,
}

/// The normalized complex structure `J = K/√(−c)` of a block commutant.
fn block_complex_structure(maps: &[Matrix<Q>]) -> Option<Matrix<Q>> {
    if maps.len() != 2 {
        return None;
    }
    let n = maps[0].rows();
    let nq = <Q as Scalar>::from_i64(n as i64);
    // remove the identity component so that tr K = 0
    let k = maps.iter().find_map(|m| {
        let k = m.sub(&Matrix::identity(n).scale(&(m.trace() / nq.clone())));
        (!k.is_zero_within(0.0)).then_some(k)
    })?;
    let k2 = k.mul(&k);
    let c = k2[(0, 0)].clone();
    if k2 != Matrix::identity(n).scale(&c) || c >= <Q as Scalar>::zero() {
        return None;
    }
    let root = (-c).try_sqrt()?;
    Some(k.scale(&(<Q as Scalar>::one() / root)))
}

pub fn isotropy_splitting(model: &CP3Model) -> IsotropySplitting {
    let all: Vec<usize> = (0..6).collect();
    let commutant_dim = equivariant_maps(&model.space, &all, &all).len();
    let pp = equivariant_maps(&model.space, &model.p, &model.p);
    let vv = equivariant_maps(&model.space, &model.v, &model.v);
    let pv = equivariant_maps(&model.space, &model.p, &model.v).len();
    let vp = equivariant_maps(&model.space, &model.v, &model.p).len();
    let blocks_are_fields = block_complex_structure(&pp).is_some() && block_complex_structure(&vv).is_some();
    let block_commutant_dims = vec![pp.len(), vv.len()];
    let consistent = commutant_dim == pp.len() + vv.len() + pv + vp;
    let irreducible_summands = if blocks_are_fields && pv == 0 && vp == 0 && consistent { 2 } else { 0 };
    IsotropySplitting {
        summand_dims: vec![model.p.len(), model.v.len()],
        commutant_dim,
        block_commutant_dims,
        cross_hom_dims: vec![pv, vp],
        blocks_are_fields,
        irreducible_summands,
    }
}

impl CP3Model {
    /// `(J_p, J_v)` normalized complex structures of the two block commutants.
    pub fn block_structures(&self) -> Result<(Matrix<Q>, Matrix<Q>)> {
        let jp = block_complex_structure(&equivariant_maps(&self.space, &self.p, &self.p));
        let jv = block_complex_structure(&equivariant_maps(&self.space, &self.v, &self.v));
        match (jp, jv) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::NotRepresentable("block commutant is not ℂ over ℚ".into())),
        }
    }

    /// `σ_p J_p ⊕ σ_v J_v`.
    pub fn acs(&self, sp: i8, sv: i8) -> Result<Endo<Q>> {
        let (jp, jv) = self.block_structures()?;
        let mut j = Matrix::zeros(6, 6);
        let s = |x: i8| <Q as Scalar>::from_i64(x as i64);
        for (a, &i) in self.p.iter().enumerate() {
            for (b, &k) in self.p.iter().enumerate() {
                j[(i, k)] = jp[(a, b)].clone() * s(sp);
            }
        }
        for (a, &i) in self.v.iter().enumerate() {
            for (b, &k) in self.v.iter().enumerate() {
                j[(i, k)] = jv[(a, b)].clone() * s(sv);
            }
        }
        Ok(j)
    }

    pub fn metric<S: Scalar>(&self, t: S) -> Gram<S> {
        Gram::diagonal(&[S::one(), S::one(), S::one(), S::one(), t.clone(), t])
    }
}

/// Largest component of `(∇_X J)X`, polarized over basis pairs.
pub fn nk_defect(space: &ReductiveSpace<f64>, j: &Endo<f64>, t: f64) -> f64 {
    let g = Gram::diagonal(&[1.0, 1.0, 1.0, 1.0, t, t]);
    let metric = match InvariantMetric::new(space, g, 1e-9) {
        Ok(m) => m,
        Err(_) => return f64::INFINITY,
    };
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    nearly_kahler_nabla_j(space, &metric, j, 0, &mut rng, 1e-9).map(|r| r.residual).unwrap_or(f64::INFINITY)
}

/// `|dω_t|` for `ω_t(X,Y) = g_t(JX,Y)`.
pub fn kahler_defect(space: &ReductiveSpace<f64>, j: &Endo<f64>, t: f64) -> f64 {
    let g = Gram::diagonal(&[1.0, 1.0, 1.0, 1.0, t, t]);
    space.differential_formula(&kahler_form(&g, j)).coeff_norm()
}

/// Minimizer of `f` on `[a, b]` by golden-section search, to relative
/// bracket width `rel`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..400 {
        if (b - a) <= rel * a.abs().max(b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    ((a + b) / 2.0, (b - a) / ((a + b) / 2.0))
}

/// Zeros of a nonnegative function located by a logarithmic scan and
/// golden-section refinement of each local minimum.
pub fn scan_zeros(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize, zero_tol: f64) -> Vec<(f64, f64)> {
    let ts: Vec<f64> = (0..=steps).map(|i| lo * (hi / lo).powf(i as f64 / steps as f64)).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut zeros = Vec::new();
    for i in 1..steps {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            let (t, width) = golden_section(f, ts[i - 1], ts[i + 1], 1e-13);
            if f(t) <= zero_tol && !zeros.iter().any(|&(z, _): &(f64, f64)| (z - t).abs() <= 1e-9 * t) {
                zeros.push((t, width));
            }
        }
    }
    zeros
}

/// Smallest-denominator rational within `eps` of `x` (Stern–Brocot search).
pub fn simple_rational(x: f64, eps: f64, max_den: i64) -> Option<Q> {
    for den in 1..=max_den {
        let num = (x * den as f64).round();
        if (num / den as f64 - x).abs() <= eps {
            return Some(Q::new((num as i64).into(), den.into()));
        }
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PatternScan {
    /// `(σ_p, σ_v)`; the global sign `−(σ_p, σ_v)` gives the same verdicts.
    pub signs: [i8; 2],
    pub nk_zeros: Vec<f64>,
    pub kahler_zeros: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CP3Report {
    pub splitting: IsotropySplitting,
    pub invariant_acs: usize,
    pub patterns: Vec<PatternScan>,
    pub t_nk: Option<f64>,
    pub t_k: Option<f64>,
    pub t_nk_relative_precision: Option<f64>,
    pub t_k_relative_precision: Option<f64>,
    /// Nearby small-denominator values confirmed in exact arithmetic.
    pub t_nk_exact: Option<String>,
    pub t_k_exact: Option<String>,
    pub ratio_k_over_nk: Option<f64>,
    pub nk_pattern: Option<[i8; 2]>,
    pub kahler_pattern: Option<[i8; 2]>,
    pub opposite_fiber_signs: bool,
    pub form_oracle_at_t_nk: bool,
    pub cross_oracle_at_t_nk: Option<CrossOracle>,
    pub verdict: bool,
}

fn exact_nk(model: &CP3Model, j: &Endo<Q>, t: &Q) -> bool {
    let Ok(metric) = InvariantMetric::new(&model.space, model.metric(t.clone()), 0.0) else {
        return false;
    };
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    nearly_kahler_nabla_j(&model.space, &metric, j, 0, &mut rng, 0.0).map(|r| r.verdict).unwrap_or(false)
}

fn exact_kahler(model: &CP3Model, j: &Endo<Q>, t: &Q) -> bool {
    let omega = kahler_form(&model.metric(t.clone()), j);
    model.space.differential_formula(&omega).is_zero_within(0.0)
}

/// Full ℂP³ verification: splitting, invariant structures and the fiber scan.
pub fn cp3_verify(samples: usize, seed: u64, tol: f64) -> Result<CP3Report> {
    let model = cp3_model()?;
    let splitting = isotropy_splitting(&model);
    // invariant ACS: J = a + bK on each block with J² = −1 forces a = 0, b = ±1
    let invariant_acs = if splitting.blocks_are_fields { 4 } else { 0 };
    let space_f = model.space.map(Scalar::to_f64);

    let mut patterns = Vec::new();
    for sv in [1i8, -1] {
        let j = model.acs(1, sv)?.map(Scalar::to_f64);
        // Kähler points also satisfy (∇_X J)X = 0; strict solutions need dω ≠ 0
        let nk: Vec<(f64, f64)> = scan_zeros(&|t| nk_defect(&space_f, &j, t), 1e-2, 1e2, 400, 1e-9)
            .into_iter()
            .filter(|&(t, _)| kahler_defect(&space_f, &j, t) > 1e-6)
            .collect();
        let kz = scan_zeros(&|t| kahler_defect(&space_f, &j, t), 1e-2, 1e2, 400, 1e-9);
        patterns.push((sv, nk, kz));
    }
    let nk_hits: Vec<(i8, (f64, f64))> =
        patterns.iter().flat_map(|(sv, nk, _)| nk.iter().map(move |z| (*sv, *z))).collect();
    let k_hits: Vec<(i8, (f64, f64))> =
        patterns.iter().flat_map(|(sv, _, kz)| kz.iter().map(move |z| (*sv, *z))).collect();

    let mut report = CP3Report {
        splitting: splitting.clone(),
        invariant_acs,
        patterns: patterns
            .iter()
            .map(|(sv, nk, kz)| PatternScan {
                signs: [1, *sv],
                nk_zeros: nk.iter().map(|z| z.0).collect(),
                kahler_zeros: kz.iter().map(|z| z.0).collect(),
            })
            .collect(),
        t_nk: None,
        t_k: None,
        t_nk_relative_precision: None,
        t_k_relative_precision: None,
        t_nk_exact: None,
        t_k_exact: None,
        ratio_k_over_nk: None,
        nk_pattern: None,
        kahler_pattern: None,
        opposite_fiber_signs: false,
        form_oracle_at_t_nk: false,
        cross_oracle_at_t_nk: None,
        verdict: false,
    };
    if let [(sv, (t, w))] = nk_hits[..] {
        report.t_nk = Some(t);
        report.t_nk_relative_precision = Some(w);
        report.nk_pattern = Some([1, sv]);
        let j = model.acs(1, sv)?;
        if let Some(q) = simple_rational(t, 1e-9 * t, 1000) {
            if exact_nk(&model, &j, &q) {
                report.t_nk_exact = Some(format_rational(&q));
            }
        }
        let g = model.metric(t);
        let jf = j.map(Scalar::to_f64);
        report.form_oracle_at_t_nk =
            nk_from_omega(&space_f, &kahler_form(&g, &jf), tol).map(|(_, r)| r.verdict).unwrap_or(false);
        let tq = report.t_nk_exact.as_deref().and_then(crate::scalar::parse_rational);
        if let Some(tq) = tq {
            report.cross_oracle_at_t_nk = Some(cross_oracle(&model.space, &model.metric(tq), &j, samples, seed, tol)?);
        }
    }
    if let [(sv, (t, w))] = k_hits[..] {
        report.t_k = Some(t);
        report.t_k_relative_precision = Some(w);
        report.kahler_pattern = Some([1, sv]);
        let j = model.acs(1, sv)?;
        if let Some(q) = simple_rational(t, 1e-9 * t, 1000) {
            if exact_kahler(&model, &j, &q) {
                report.t_k_exact = Some(format_rational(&q));
            }
        }
    }
    if let (Some(a), Some(b)) = (report.t_nk, report.t_k) {
        report.ratio_k_over_nk = Some(b / a);
    }
    report.opposite_fiber_signs = matches!((report.nk_pattern, report.kahler_pattern), (Some(a), Some(b)) if a[1] == -b[1]);
    report.verdict = splitting.irreducible_summands == 2
        && splitting.summand_dims == vec![4, 2]
        && invariant_acs == 4
        && report.opposite_fiber_signs
        && report.t_nk_relative_precision.is_some_and(|w| w <= 1e-6)
        && report.t_k_relative_precision.is_some_and(|w| w <= 1e-6)
        && report.form_oracle_at_t_nk
        && report.cross_oracle_at_t_nk.as_ref().is_some_and(|c| c.metric_verdict && c.agree);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_has_two_summands() {
        let m = cp3_model().unwrap();
        let s = isotropy_splitting(&m);
        assert_eq!(s.summand_dims, vec![4, 2]);
        assert_eq!(s.commutant_dim, 4);
        assert_eq!(s.irreducible_summands, 2);
    }

    #[test]
    fn fiber_scan() {
        let r = cp3_verify(4, 1, 1e-10).unwrap();
        assert!(r.verdict, "{r:#?}");
        assert_eq!(r.t_nk_exact.as_deref(), Some("1/2"));
        assert_eq!(r.t_k_exact.as_deref(), Some("1"));
    }
}
