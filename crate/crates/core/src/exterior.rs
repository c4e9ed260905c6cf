//! Dense exterior algebra Λ(V*) of an `n`-dimensional space, `n ≤ 8`.
//!
//! A k-form is stored as its C(n,k) coefficients on the basis monomials
//! `e_I = e_{i1} ∧ … ∧ e_{ik}`, `i1 < … < ik`, in lexicographic order. A
//! multi-index is carried internally as a bit mask. Every sign in this module
//! (wedge, interior product, Hodge star, evaluation) comes from
//! [`merge_sign`].
//!
//! Evaluation follows the determinant convention `e_I(X_{i1}, …, X_{ik}) = 1`.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{Gram, Matrix, Vector};
use crate::scalar::Scalar;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

struct Tables {
    /// masks[k] lists the k-subsets in lexicographic order.
    masks: Vec<Vec<u16>>,
    /// rank[mask] is the position of `mask` within masks[popcount(mask)].
    rank: Vec<u32>,
}

fn tables(n: usize) -> &'static Tables {
    static TABLES: OnceLock<Vec<Tables>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| {
                let mut rank = vec![0u32; 1 << n];
                let masks: Vec<Vec<u16>> = (0..=n)
                    .map(|k| {
                        (0..n)
                            .combinations(k)
                            .map(|c| c.iter().fold(0u16, |m, &i| m | (1 << i)))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                for list in &masks {
                    for (r, &m) in list.iter().enumerate() {
                        rank[m as usize] = r as u32;
                    }
                }
                Tables { masks, rank }
            })
            .collect()
    });
    &all[n]
}

fn masks(n: usize, k: usize) -> &'static [u16] {
    tables(n).masks.get(k).map_or(&[], Vec::as_slice)
}

/// Number of basis monomials of degree `k` in dimension `n`.
pub fn binomial(n: usize, k: usize) -> usize {
    masks(n, k).len()
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}`; zero when the index sets meet.
pub fn merge_sign(a: u16, b: u16) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

fn signed<S: Scalar>(s: i32, x: S) -> S {
    match s {
        1 => x,
        -1 => -x,
        _ => S::zero(),
    }
}

/// Sort a multi-index, returning its mask and the permutation sign
/// (zero if an index repeats).
pub fn canonical_mask(idx: &[usize]) -> (u16, i32) {
    let mut mask = 0u16;
    let mut sign = 1;
    for &i in idx {
        let bit = 1u16 << i;
        if mask & bit != 0 {
            return (0, 0);
        }
        sign *= merge_sign(mask, bit);
        mask |= bit;
    }
    (mask, sign)
}

/// Alternating k-form on an n-dimensional space.
#[derive(Clone, PartialEq)]
pub struct KForm<S> {
    n: usize,
    k: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> KForm<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        KForm { n, k, coeffs: vec![S::zero(); binomial(n, k)] }
    }

    /// The constant 0-form `c`.
    pub fn constant(n: usize, c: S) -> Self {
        let mut f = Self::zero(n, 0);
        f.coeffs[0] = c;
        f
    }

    /// Basis monomial `e_{idx[0]} ∧ e_{idx[1]} ∧ …` (indices in any order).
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        Self::term(n, idx, S::one())
    }

    /// `c · e_{idx}`, reordering the indices with the appropriate sign.
    pub fn term(n: usize, idx: &[usize], c: S) -> Self {
        assert!(idx.iter().all(|&i| i < n), "index out of range for dimension {n}");
        let mut f = Self::zero(n, idx.len());
        let (mask, sign) = canonical_mask(idx);
        if sign != 0 {
            let r = tables(n).rank[mask as usize] as usize;
            f.coeffs[r] = signed(sign, c);
        }
        f
    }

    /// Build from sparse `(multi-index, value)` entries, validating indices.
    pub fn from_terms<'a>(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (&'a [usize], S)>,
    ) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::Dimension(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let mut f = Self::zero(n, k);
        for (idx, c) in terms {
            if idx.len() != k || idx.iter().any(|&i| i >= n) {
                return Err(Error::Dimension(format!("multi-index {idx:?} invalid for a {k}-form in dimension {n}")));
            }
            f = f.add(&Self::term(n, idx, c));
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `e_{idx}` with the permutation sign applied.
    pub fn coeff(&self, idx: &[usize]) -> S {
        if idx.len() != self.k {
            return S::zero();
        }
        let (mask, sign) = canonical_mask(idx);
        signed(sign, self.coeff_mask(mask))
    }

    fn coeff_mask(&self, mask: u16) -> S {
        if mask.count_ones() as usize != self.k || (mask as usize) >= (1 << self.n) {
            return S::zero();
        }
        self.coeffs[tables(self.n).rank[mask as usize] as usize].clone()
    }

    /// Nonzero terms as (sorted multi-index, coefficient).
    pub fn terms(&self, tol: f64) -> Vec<(Vec<usize>, S)> {
        masks(self.n, self.k)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero_within(tol))
            .map(|(&m, c)| (mask_indices(m), c.clone()))
            .collect()
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Dimension(format!("forms on spaces of dimension {} and {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.n == o.n && self.k == o.k, "adding forms of different shapes");
        KForm {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        KForm { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        KForm { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within(tol))
    }

    /// Euclidean norm of the coefficient vector, as a float.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Coefficient dot product (Euclidean on monomials).
    pub fn coeff_dot(&self, o: &Self) -> S {
        self.coeffs.iter().zip(&o.coeffs).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Coefficient of the top monomial `e_{0…n−1}` (zero unless k = n).
    pub fn top(&self) -> S {
        if self.k == self.n {
            self.coeffs[0].clone()
        } else {
            S::zero()
        }
    }

    /// Exterior product; degree overflow yields the zero form of degree k+l.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = Self::zero(self.n, self.k + o.k);
        if self.k + o.k > self.n {
            return Ok(out);
        }
        let rank = &tables(self.n).rank;
        for (&ma, ca) in masks(self.n, self.k).iter().zip(&self.coeffs) {
            if ca.is_zero_within(0.0) {
                continue;
            }
            for (&mb, cb) in masks(self.n, o.k).iter().zip(&o.coeffs) {
                let s = merge_sign(ma, mb);
                if s == 0 || cb.is_zero_within(0.0) {
                    continue;
                }
                let r = rank[(ma | mb) as usize] as usize;
                let v = out.coeffs[r].clone() + signed(s, ca.clone() * cb.clone());
                out.coeffs[r] = v;
            }
        }
        Ok(out)
    }

    /// Interior product ι_v. A 0-form maps to the zero form.
    pub fn interior(&self, v: &Vector<S>) -> Result<Self> {
        if v.dim() != self.n {
            return Err(Error::Dimension(format!("vector of dimension {} on a form of dimension {}", v.dim(), self.n)));
        }
        if self.k == 0 {
            return Ok(Self::zero(self.n, 0));
        }
        let mut out = Self::zero(self.n, self.k - 1);
        let rank = &tables(self.n).rank;
        for (&m, c) in masks(self.n, self.k).iter().zip(&self.coeffs) {
            if c.is_zero_within(0.0) {
                continue;
            }
            for i in mask_indices(m) {
                if v[i].is_zero_within(0.0) {
                    continue;
                }
                let bit = 1u16 << i;
                let rest = m & !bit;
                // e_I = s · e_i ∧ e_rest
                let s = merge_sign(bit, rest);
                let r = rank[rest as usize] as usize;
                let val = out.coeffs[r].clone() + signed(s, c.clone() * v[i].clone());
                out.coeffs[r] = val;
            }
        }
        Ok(out)
    }

    /// ι along basis vector `X_i`.
    pub fn interior_basis(&self, i: usize) -> Self {
        self.interior(&Vector::basis(self.n, i)).expect("basis vector has matching dimension")
    }

    /// Evaluate on k vectors (determinant convention).
    pub fn evaluate(&self, vs: &[Vector<S>]) -> Result<S> {
        if vs.len() != self.k {
            return Err(Error::Dimension(format!("{} arguments for a {}-form", vs.len(), self.k)));
        }
        let mut acc = self.clone();
        for v in vs {
            acc = acc.interior(v)?;
        }
        // ι_{v_k} … ι_{v_1} α = α(v_1, …, v_k)
        Ok(acc.coeffs[0].clone())
    }

    /// Pullback along a linear map `M: W → V` given as an `n × m` matrix.
    pub fn pullback(&self, m: &Matrix<S>) -> Result<Self> {
        if m.rows() != self.n {
            return Err(Error::Dimension(format!("pullback matrix has {} rows for dimension {}", m.rows(), self.n)));
        }
        let new_n = m.cols();
        let mut out = Self::zero(new_n, self.k);
        for (r, &mj) in masks(new_n, self.k).iter().enumerate() {
            let cols = mask_indices(mj);
            let mut acc = S::zero();
            for (&mi, c) in masks(self.n, self.k).iter().zip(&self.coeffs) {
                if c.is_zero_within(0.0) {
                    continue;
                }
                acc = acc + c.clone() * m.submatrix(&mask_indices(mi), &cols).det();
            }
            out.coeffs[r] = acc;
        }
        Ok(out)
    }

    /// Inner product induced on Λᵏ by a cometric (inverse Gram), via minors.
    pub fn inner_with_cometric(&self, o: &Self, cometric: &Matrix<S>) -> S {
        let mut acc = S::zero();
        for (&ma, ca) in masks(self.n, self.k).iter().zip(&self.coeffs) {
            if ca.is_zero_within(0.0) {
                continue;
            }
            let ia = mask_indices(ma);
            for (&mb, cb) in masks(self.n, o.k).iter().zip(&o.coeffs) {
                if cb.is_zero_within(0.0) {
                    continue;
                }
                acc = acc + ca.clone() * cb.clone() * cometric.submatrix(&ia, &mask_indices(mb)).det();
            }
        }
        acc
    }

    /// Hodge star for the metric `g` (on vectors) and the unit volume form
    /// `vol`, characterized by `a ∧ *b = ⟨a,b⟩ vol`.
    pub fn hodge_star(&self, g: &Gram<S>, vol: &Self, tol: f64) -> Result<Self> {
        if g.dim() != self.n || vol.n != self.n || vol.k != self.n {
            return Err(Error::Dimension("Hodge star needs a Gram matrix and volume form of matching dimension".into()));
        }
        if !g.is_positive_definite(tol) {
            return Err(Error::NotPositiveDefinite);
        }
        let cometric = g.matrix().inverse(tol).ok_or(Error::NotPositiveDefinite)?;
        if !(vol.inner_with_cometric(vol, &cometric) - S::one()).is_zero_within(tol) {
            return Err(Error::NotUnitVolume);
        }
        let v0 = vol.top();
        let full: u16 = ((1u32 << self.n) - 1) as u16;
        let rank = &tables(self.n).rank;
        let mut out = Self::zero(self.n, self.n - self.k);
        for &mi in masks(self.n, self.k) {
            let e_i = KForm { n: self.n, k: self.k, coeffs: unit(self.n, self.k, mi) };
            let ip = e_i.inner_with_cometric(self, &cometric);
            if ip.is_zero_within(0.0) {
                continue;
            }
            let comp = full & !mi;
            let s = merge_sign(mi, comp);
            out.coeffs[rank[comp as usize] as usize] = signed(s, v0.clone() * ip);
        }
        Ok(out)
    }
}

fn unit<S: Scalar>(n: usize, k: usize, mask: u16) -> Vec<S> {
    let mut c = vec![S::zero(); binomial(n, k)];
    c[tables(n).rank[mask as usize] as usize] = S::one();
    c
}

/// The vector `v` with `ι_v vol = σ`, for an (n−1)-form σ and nonzero n-form vol.
pub fn lambda5_to_vector<S: Scalar>(sigma: &KForm<S>, vol: &KForm<S>) -> Result<Vector<S>> {
    let n = vol.dim();
    if sigma.dim() != n || vol.degree() != n || sigma.degree() + 1 != n {
        return Err(Error::Dimension(format!(
            "expected an {}-form and an {n}-form in dimension {n}",
            n.saturating_sub(1)
        )));
    }
    let v0 = vol.top();
    if v0.is_zero_within(0.0) {
        return Err(Error::Dimension("zero volume form".into()));
    }
    let full: u16 = ((1u32 << n) - 1) as u16;
    let mut v = Vector::zeros(n);
    for i in 0..n {
        let bit = 1u16 << i;
        let rest = full & !bit;
        // ι_{X_i} vol = s · v0 · e_rest
        let s = merge_sign(bit, rest);
        v[i] = signed(s, sigma.coeff_mask(rest) / v0.clone());
    }
    Ok(v)
}

impl<S: Scalar> fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms(0.0);
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(idx, c)| {
                let label: String = idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
                format!("{c:?}·e[{label}]")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn e(idx: &[usize]) -> KForm<Q> {
        KForm::basis(6, idx)
    }

    #[test]
    fn wedge_basis_cases() {
        assert_eq!(e(&[0]).wedge(&e(&[1])).unwrap(), e(&[0, 1]));
        assert!(e(&[0, 1]).wedge(&e(&[0, 1])).unwrap().is_zero_within(0.0));
        // reordering sign
        assert_eq!(e(&[1]).wedge(&e(&[0])).unwrap(), e(&[0, 1]).neg());
    }

    #[test]
    fn omega_cubed_is_six_volume() {
        let om = e(&[0, 1]).add(&e(&[2, 3])).add(&e(&[4, 5]));
        let cube = om.wedge(&om).unwrap().wedge(&om).unwrap();
        assert_eq!(cube, e(&[0, 1, 2, 3, 4, 5]).scale(&Q::from_i64(6)));
    }

    #[test]
    fn interior_examples() {
        let x1 = Vector::basis(6, 0);
        let x3 = Vector::basis(6, 2);
        assert_eq!(e(&[0, 1]).interior(&x1).unwrap(), e(&[1]));
        assert!(e(&[0, 1]).interior(&x3).unwrap().is_zero_within(0.0));
        let a = e(&[0, 2, 4]).sub(&e(&[0, 3, 5]));
        assert_eq!(a.interior(&x1).unwrap(), e(&[2, 4]).sub(&e(&[3, 5])));
        assert!(KForm::<Q>::constant(6, Q::from_i64(3)).interior(&x1).unwrap().is_zero_within(0.0));
    }

    #[test]
    fn evaluation_determinant_convention() {
        let a = e(&[0, 1]);
        let x = |i| Vector::basis(6, i);
        assert_eq!(a.evaluate(&[x(0), x(1)]).unwrap(), Q::from_i64(1));
        assert_eq!(a.evaluate(&[x(1), x(0)]).unwrap(), Q::from_i64(-1));
        let b = e(&[0, 2, 4]);
        assert_eq!(b.evaluate(&[x(2), x(0), x(4)]).unwrap(), Q::from_i64(-1));
    }

    #[test]
    fn hodge_euclidean() {
        let g = Gram::identity(6);
        let vol = e(&[0, 1, 2, 3, 4, 5]);
        let one = KForm::constant(6, Q::from_i64(1));
        assert_eq!(one.hodge_star(&g, &vol, 0.0).unwrap(), vol);
        assert_eq!(e(&[0]).hodge_star(&g, &vol, 0.0).unwrap(), e(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn hodge_rejects_degenerate() {
        let g = Gram::diagonal(&[Q::from_i64(1), Q::from_i64(0)]);
        let vol = KForm::basis(2, &[0, 1]);
        assert_eq!(KForm::<Q>::basis(2, &[0]).hodge_star(&g, &vol, 0.0), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn lambda5_examples() {
        let vol = e(&[0, 1, 2, 3, 4, 5]);
        let x1 = Vector::basis(6, 0);
        assert_eq!(lambda5_to_vector(&vol.interior(&x1).unwrap(), &vol).unwrap(), x1);
        assert!(lambda5_to_vector(&KForm::zero(6, 5), &vol).unwrap().is_zero_within(0.0));
        let s = vol
            .interior_basis(2)
            .scale(&Q::from_i64(2))
            .add(&vol.interior_basis(5).scale(&Q::from_i64(5)));
        let v = lambda5_to_vector(&s, &vol).unwrap();
        let mut want = Vector::zeros(6);
        want[2] = Q::from_i64(2);
        want[5] = Q::from_i64(5);
        assert_eq!(v, want);
    }

    #[test]
    fn pullback_by_permutation() {
        // swapping the first two basis vectors negates e12
        let mut p = Matrix::<Q>::identity(6);
        p[(0, 0)] = Q::from_i64(0);
        p[(1, 1)] = Q::from_i64(0);
        p[(0, 1)] = Q::from_i64(1);
        p[(1, 0)] = Q::from_i64(1);
        assert_eq!(e(&[0, 1]).pullback(&p).unwrap(), e(&[0, 1]).neg());
    }
}
