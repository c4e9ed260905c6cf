//! Lie algebras given by structure constants and reductive homogeneous
//! spaces `g = h ⊕ m`.
//!
//! Invariant tensors on `G/H` are represented by constant `ad(h)`-invariant
//! tensors on `m`; every computation below works on `m` in the coordinates of
//! the chosen basis of `m`.
//!
//! Conventions, fixed once here:
//!
//! * invariant exterior differential:
//!   `(dα)(X₀,…,X_p) = Σ_{i<j} (−1)^{i+j} α([Xᵢ,Xⱼ]_m, X₀,…,X̂ᵢ,…,X̂ⱼ,…,X_p)`;
//! * a connection is given by its Nomizu map `Λ: m → End(m)`, `Λ(X)Y = ∇_X Y`
//!   at the base point;
//! * curvature `R(X,Y) = [Λ(X),Λ(Y)] − Λ([X,Y]_m) − ad([X,Y]_h)|_m`, which is
//!   `∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}` for invariant connections.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::linalg::{Endo, Gram, Matrix, Vector};
use crate::scalar::Scalar;

/// Real Lie algebra with basis `X_0 … X_{d−1}` and
/// `[X_i, X_j] = Σ_k c[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    labels: Vec<String>,
    c: Vec<S>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds the algebra from sparse `(i, j, k, value)` entries. Entries are
    /// completed by antisymmetry; antisymmetry and the Jacobi identity are
    /// validated.
    pub fn from_sparse(labels: Vec<String>, entries: impl IntoIterator<Item = (usize, usize, usize, S)>, tol: f64) -> Result<Self> {
        let d = labels.len();
        let mut c = vec![S::zero(); d * d * d];
        let mut set = vec![false; d * d * d];
        for (i, j, k, v) in entries {
            if i >= d || j >= d || k >= d {
                return Err(Error::Dimension(format!("structure constant index ({i}, {j}, {k}) out of range {d}")));
            }
            if i == j {
                if !v.is_zero_within(tol) {
                    return Err(Error::NotAntisymmetric(i, j, k));
                }
                continue;
            }
            let a = (i * d + j) * d + k;
            let b = (j * d + i) * d + k;
            if set[a] && !(c[a].clone() - v.clone()).is_zero_within(tol) {
                return Err(Error::NotAntisymmetric(i, j, k));
            }
            c[a] = v.clone();
            c[b] = -v;
            set[a] = true;
            set[b] = true;
        }
        let alg = LieAlgebra { labels, c };
        if let Some((i, j, k)) = alg.jacobi_violation(tol) {
            return Err(Error::JacobiFails(i, j, k));
        }
        Ok(alg)
    }

    /// Raw constructor without validation; `c` is indexed `(i*d + j)*d + k`.
    pub fn from_dense_unchecked(labels: Vec<String>, c: Vec<S>) -> Self {
        assert_eq!(c.len(), labels.len().pow(3));
        LieAlgebra { labels, c }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        let d = self.dim();
        &self.c[(i * d + j) * d + k]
    }

    /// Nonzero constants with `i < j`.
    pub fn sparse_entries(&self, tol: f64) -> Vec<(usize, usize, usize, S)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let v = self.constant(i, j, k);
                    if !v.is_zero_within(tol) {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<S> {
        Vector::from_vec((0..self.dim()).map(|k| self.constant(i, j, k).clone()).collect())
    }

    pub fn bracket(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let d = self.dim();
        let mut out: Vector<S> = Vector::zeros(d);
        for i in 0..d {
            if x[i].is_zero_within(0.0) {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero_within(0.0) || i == j {
                    continue;
                }
                let f = x[i].clone() * y[j].clone();
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if !c.is_zero_within(0.0) {
                        out[k] = out[k].clone() + f.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(X_i)`.
    pub fn ad(&self, i: usize) -> Matrix<S> {
        let d = self.dim();
        Matrix::from_fn(d, d, |k, j| self.constant(i, j, k).clone())
    }

    /// First basis triple on which the Jacobi identity fails.
    pub fn jacobi_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let xi = Vector::basis(d, i);
                    let xj = Vector::basis(d, j);
                    let xk = Vector::basis(d, k);
                    let s = self
                        .bracket(&xi, &self.bracket(&xj, &xk))
                        .add(&self.bracket(&xj, &self.bracket(&xk, &xi)))
                        .add(&self.bracket(&xk, &self.bracket(&xi, &xj)));
                    if !s.is_zero_within(tol) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Express the algebra in a new basis whose vectors are the columns of
    /// `p` (old coordinates).
    pub fn change_basis(&self, p: &Matrix<S>, labels: Vec<String>, tol: f64) -> Result<Self> {
        let d = self.dim();
        let pinv = p.inverse(tol).ok_or_else(|| Error::Dimension("change of basis is singular".into()))?;
        let cols: Vec<Vector<S>> = (0..d).map(|j| p.column(j)).collect();
        let mut c = vec![S::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                let br = pinv.apply(&self.bracket(&cols[a], &cols[b]));
                for k in 0..d {
                    c[(a * d + b) * d + k] = br[k].clone();
                }
            }
        }
        Ok(LieAlgebra { labels, c })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra { labels: self.labels.clone(), c: self.c.iter().map(f).collect() }
    }
}

/// True iff the Jacobi identity holds on all basis triples.
pub fn check_jacobi<S: Scalar>(alg: &LieAlgebra<S>, tol: f64) -> bool {
    alg.jacobi_violation(tol).is_none()
}

/// Reductive splitting `g = h ⊕ m` with `[h,h] ⊂ h`, `[h,m] ⊂ m`.
#[derive(Clone, Debug)]
pub struct ReductiveSpace<S> {
    algebra: LieAlgebra<S>,
    h: Vec<usize>,
    m: Vec<usize>,
    /// [X_a, X_b]_m for m-positions a, b, in m coordinates.
    bm: Vec<Vector<S>>,
    /// [X_a, X_b]_h in h coordinates.
    bh: Vec<Vector<S>>,
    /// ad(h_i) restricted to m.
    iso: Vec<Matrix<S>>,
}

impl<S: Scalar> ReductiveSpace<S> {
    pub fn new(algebra: LieAlgebra<S>, h: Vec<usize>, m: Vec<usize>, tol: f64) -> Result<Self> {
        let d = algebra.dim();
        let mut seen = vec![false; d];
        for &i in h.iter().chain(&m) {
            if i >= d || seen[i] {
                return Err(Error::NotReductive(format!("h and m indices must partition 0..{d}")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotReductive(format!("h and m indices must partition 0..{d}")));
        }
        for &a in &h {
            for &b in &h {
                if m.iter().any(|&k| !algebra.constant(a, b, k).is_zero_within(tol)) {
                    return Err(Error::NotReductive(format!("[{}, {}] leaves h", algebra.labels[a], algebra.labels[b])));
                }
            }
            for &b in &m {
                if h.iter().any(|&k| !algebra.constant(a, b, k).is_zero_within(tol)) {
                    return Err(Error::NotReductive(format!("[{}, {}] leaves m", algebra.labels[a], algebra.labels[b])));
                }
            }
        }
        let n = m.len();
        let mut bm = Vec::with_capacity(n * n);
        let mut bh = Vec::with_capacity(n * n);
        for &a in &m {
            for &b in &m {
                bm.push(Vector::from_vec(m.iter().map(|&k| algebra.constant(a, b, k).clone()).collect()));
                bh.push(Vector::from_vec(h.iter().map(|&k| algebra.constant(a, b, k).clone()).collect()));
            }
        }
        let iso = h
            .iter()
            .map(|&a| Matrix::from_fn(n, n, |i, j| algebra.constant(a, m[j], m[i]).clone()))
            .collect();
        Ok(ReductiveSpace { algebra, h, m, bm, bh, iso })
    }

    /// A Lie group viewed as `G/{e}`.
    pub fn group(algebra: LieAlgebra<S>) -> Self {
        let m = (0..algebra.dim()).collect();
        Self::new(algebra, Vec::new(), m, 0.0).expect("trivial isotropy is always reductive")
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m
    }

    pub fn dim_m(&self) -> usize {
        self.m.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h.len()
    }

    /// `[X_a, X_b]_m` for basis vectors of m.
    pub fn bracket_m_basis(&self, a: usize, b: usize) -> &Vector<S> {
        &self.bm[a * self.dim_m() + b]
    }

    /// `[X_a, X_b]_h` in h coordinates.
    pub fn bracket_h_basis(&self, a: usize, b: usize) -> &Vector<S> {
        &self.bh[a * self.dim_m() + b]
    }

    fn bilinear(&self, x: &Vector<S>, y: &Vector<S>, table: &[Vector<S>], out_dim: usize) -> Vector<S> {
        let n = self.dim_m();
        let mut out = Vector::zeros(out_dim);
        for a in 0..n {
            if x[a].is_zero_within(0.0) {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero_within(0.0) {
                    continue;
                }
                out = out.add(&table[a * n + b].scale(&(x[a].clone() * y[b].clone())));
            }
        }
        out
    }

    pub fn bracket_m(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        self.bilinear(x, y, &self.bm, self.dim_m())
    }

    pub fn bracket_h(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        self.bilinear(x, y, &self.bh, self.dim_h())
    }

    /// Isotropy representation `ad(h_i)|_m`.
    pub fn isotropy(&self, i: usize) -> &Matrix<S> {
        &self.iso[i]
    }

    /// `ad(Σ cᵢ hᵢ)|_m`.
    pub fn isotropy_of(&self, h: &Vector<S>) -> Matrix<S> {
        let n = self.dim_m();
        (0..self.dim_h()).fold(Matrix::zeros(n, n), |acc, i| acc.add(&self.iso[i].scale(&h[i])))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ReductiveSpace<T> {
        ReductiveSpace {
            algebra: self.algebra.map(f),
            h: self.h.clone(),
            m: self.m.clone(),
            bm: self.bm.iter().map(|v| v.map(f)).collect(),
            bh: self.bh.iter().map(|v| v.map(f)).collect(),
            iso: self.iso.iter().map(|a| a.map(f)).collect(),
        }
    }

    /// Action of the endomorphism `A` on forms as a derivation,
    /// `(A·α)(X₁,…) = −Σ α(…, AXᵢ, …)`.
    fn derivation_action(a: &Matrix<S>, alpha: &KForm<S>) -> KForm<S> {
        let n = alpha.dim();
        let mut out = KForm::zero(n, alpha.degree());
        if alpha.degree() == 0 {
            return out;
        }
        for l in 0..n {
            let contracted = alpha.interior_basis(l);
            if contracted.is_zero_within(0.0) {
                continue;
            }
            for j in 0..n {
                let c = a[(l, j)].clone();
                if c.is_zero_within(0.0) {
                    continue;
                }
                let t = KForm::basis(n, &[j]).wedge(&contracted).expect("same dimension");
                out = out.sub(&t.scale(&c));
            }
        }
        out
    }

    /// True iff α is annihilated by every `ad(h_i)`.
    pub fn is_invariant(&self, alpha: &KForm<S>, tol: f64) -> bool {
        alpha.dim() == self.dim_m()
            && self.iso.iter().all(|a| Self::derivation_action(a, alpha).is_zero_within(tol))
    }

    /// Invariant exterior differential; rejects non-invariant input.
    pub fn ce_differential(&self, alpha: &KForm<S>, tol: f64) -> Result<KForm<S>> {
        if alpha.dim() != self.dim_m() {
            return Err(Error::Dimension(format!("form of dimension {} on m of dimension {}", alpha.dim(), self.dim_m())));
        }
        if !self.is_invariant(alpha, tol) {
            return Err(Error::NotInvariant);
        }
        Ok(self.differential_formula(alpha))
    }

    /// The alternating-sum formula applied without the invariance check.
    pub fn differential_formula(&self, alpha: &KForm<S>) -> KForm<S> {
        let n = self.dim_m();
        let k = alpha.degree();
        let mut out = KForm::zero(n, k + 1);
        if k + 1 > n {
            return out;
        }
        let contractions: Vec<KForm<S>> = (0..n).map(|l| alpha.interior_basis(l)).collect();
        let mut terms = Vec::new();
        for idx in itertools::Itertools::combinations(0..n, k + 1) {
            let mut val = S::zero();
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    let w = self.bracket_m_basis(idx[a], idx[b]);
                    let rest: Vec<usize> =
                        idx.iter().enumerate().filter(|&(p, _)| p != a && p != b).map(|(_, &i)| i).collect();
                    let mut acc = S::zero();
                    for l in 0..n {
                        if w[l].is_zero_within(0.0) {
                            continue;
                        }
                        acc = acc + w[l].clone() * contractions[l].coeff(&rest);
                    }
                    val = if (a + b) % 2 == 0 { val + acc } else { val - acc };
                }
            }
            if !val.is_zero_within(0.0) {
                terms.push((idx, val));
            }
        }
        for (idx, v) in terms {
            out = out.add(&KForm::term(n, &idx, v));
        }
        out
    }

    /// Invariant-metric check: `Aᵀ G + G A = 0` for every isotropy generator.
    pub fn is_metric_invariant(&self, g: &Gram<S>, tol: f64) -> bool {
        let gm = g.matrix();
        self.iso.iter().all(|a| a.transpose().mul(gm).add(&gm.mul(a)).is_zero_within(tol))
    }

    /// `[ad(hᵢ), E] = 0` for every isotropy generator.
    pub fn is_endo_invariant(&self, e: &Endo<S>, tol: f64) -> bool {
        self.iso.iter().all(|a| a.commutator(e).is_zero_within(tol))
    }
}

/// Invariant metric on `m`, validated against the isotropy action.
#[derive(Clone, Debug)]
pub struct InvariantMetric<S> {
    gram: Gram<S>,
}

impl<S: Scalar> InvariantMetric<S> {
    pub fn new(space: &ReductiveSpace<S>, gram: Gram<S>, tol: f64) -> Result<Self> {
        if gram.dim() != space.dim_m() {
            return Err(Error::Dimension("metric dimension differs from dim m".into()));
        }
        if !gram.is_positive_definite(tol) {
            return Err(Error::NotPositiveDefinite);
        }
        if !space.is_metric_invariant(&gram, tol) {
            return Err(Error::MetricNotInvariant);
        }
        Ok(InvariantMetric { gram })
    }

    pub fn gram(&self) -> &Gram<S> {
        &self.gram
    }

    pub fn inner(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        self.gram.inner(x, y)
    }
}

/// Endomorphism `S` of `m` with `S³ = Id` and no eigenvalue 1.
#[derive(Clone, Debug)]
pub struct OrderThreeSym<S> {
    s: Endo<S>,
}

impl<Sc: Scalar> OrderThreeSym<Sc> {
    pub fn new(s: Endo<Sc>, tol: f64) -> Result<Self> {
        let n = s.rows();
        let id = Matrix::identity(n);
        if !s.mul(&s).mul(&s).approx_eq(&id, tol) {
            return Err(Error::NotOrderThree);
        }
        if s.sub(&id).det().is_zero_within(tol) {
            return Err(Error::HasFixedVector);
        }
        Ok(OrderThreeSym { s })
    }

    pub fn matrix(&self) -> &Endo<Sc> {
        &self.s
    }
}

/// `J = (2/√3)(S + ½ Id)`, the root of `S = −½ Id + (√3/2) J`.
pub fn acs_from_automorphism<S: Scalar>(s: &OrderThreeSym<S>, tol: f64) -> Result<Endo<S>> {
    let n = s.s.rows();
    let sqrt3 = S::from_i64(3)
        .try_sqrt()
        .ok_or_else(|| Error::NotRepresentable("√3 is needed for J; use QSqrt3 or f64".into()))?;
    let half = S::from_ratio(1, 2);
    let j = s.s.add(&Matrix::identity(n).scale(&half)).scale(&(S::from_i64(2) / sqrt3));
    if !j.mul(&j).add(&Matrix::identity(n)).is_zero_within(tol) {
        return Err(Error::NotComplexStructure);
    }
    Ok(j)
}

/// Invariant connection through its Nomizu map.
#[derive(Clone, Debug)]
pub struct Connection<S> {
    /// lambda[a] is the matrix of `Λ(X_a)`; column b holds `∇_{X_a} X_b`.
    lambda: Vec<Matrix<S>>,
}

impl<S: Scalar> Connection<S> {
    pub fn from_nomizu(lambda: Vec<Matrix<S>>) -> Self {
        Connection { lambda }
    }

    /// The normal (canonical) connection, `Λ = 0`.
    pub fn normal(n: usize) -> Self {
        Connection { lambda: vec![Matrix::zeros(n, n); n] }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn nomizu_basis(&self, a: usize) -> &Matrix<S> {
        &self.lambda[a]
    }

    pub fn nomizu(&self, x: &Vector<S>) -> Matrix<S> {
        let n = self.dim();
        (0..n).fold(Matrix::zeros(n, n), |acc, a| acc.add(&self.lambda[a].scale(&x[a])))
    }

    /// `∇_{X_a} X_b`.
    pub fn nabla(&self, a: usize, b: usize) -> Vector<S> {
        self.lambda[a].column(b)
    }

    /// Torsion `T(X_a,X_b) = Λ(X_a)X_b − Λ(X_b)X_a − [X_a,X_b]_m`.
    pub fn torsion(&self, space: &ReductiveSpace<S>, a: usize, b: usize) -> Vector<S> {
        self.nabla(a, b).sub(&self.nabla(b, a)).sub(space.bracket_m_basis(a, b))
    }

    /// Largest metricity defect `g(Λ(X)Y,Z) + g(Y,Λ(X)Z)` over basis triples.
    pub fn metricity_defect(&self, g: &Gram<S>) -> f64 {
        let gm = g.matrix();
        self.lambda.iter().map(|l| l.transpose().mul(gm).add(&gm.mul(l)).max_abs()).fold(0.0, f64::max)
    }

    pub fn torsion_defect(&self, space: &ReductiveSpace<S>) -> f64 {
        let n = self.dim();
        let mut worst = 0f64;
        for a in 0..n {
            for b in 0..n {
                worst = worst.max(self.torsion(space, a, b).max_abs());
            }
        }
        worst
    }

    /// Curvature endomorphism `R(X_a, X_b)`.
    pub fn curvature(&self, space: &ReductiveSpace<S>, a: usize, b: usize) -> Matrix<S> {
        let la = &self.lambda[a];
        let lb = &self.lambda[b];
        la.commutator(lb)
            .sub(&self.nomizu(space.bracket_m_basis(a, b)))
            .sub(&space.isotropy_of(space.bracket_h_basis(a, b)))
    }

    /// Subtract a (1,2)-tensor given as endomorphisms `t[a] = T_{X_a}`.
    pub fn minus(&self, t: &[Matrix<S>]) -> Self {
        Connection { lambda: self.lambda.iter().zip(t).map(|(l, e)| l.sub(e)).collect() }
    }
}

/// Levi-Civita connection of an invariant metric via Nomizu's formula
/// `Λ(X)Y = ½[X,Y]_m + U(X,Y)`, `2g(U(X,Y),Z) = g([Z,X]_m,Y) + g(X,[Z,Y]_m)`.
pub fn nomizu_levi_civita<S: Scalar>(space: &ReductiveSpace<S>, g: &InvariantMetric<S>, tol: f64) -> Result<Connection<S>> {
    let n = space.dim_m();
    let gm = g.gram().matrix();
    let ginv = gm.inverse(tol).ok_or(Error::NotPositiveDefinite)?;
    let half = S::from_ratio(1, 2);
    let mut lambda = Vec::with_capacity(n);
    for a in 0..n {
        let mut l = Matrix::zeros(n, n);
        for b in 0..n {
            // lowered components of 2U(X_a, X_b)
            let low = Vector::from_vec(
                (0..n)
                    .map(|z| {
                        let zx = gm.apply(space.bracket_m_basis(z, a))[b].clone();
                        let zy = gm.apply(space.bracket_m_basis(z, b))[a].clone();
                        zx + zy
                    })
                    .collect(),
            );
            let u = ginv.apply(&low).scale(&half);
            let col = space.bracket_m_basis(a, b).scale(&half).add(&u);
            for i in 0..n {
                l[(i, b)] = col[i].clone();
            }
        }
        lambda.push(l);
    }
    Ok(Connection { lambda })
}

/// Result of evaluating `(∇_X J)X = 0`.
#[derive(Clone, Debug)]
pub struct NablaJReport {
    pub residual: f64,
    pub verdict: bool,
}

fn check_hermitian<S: Scalar>(space: &ReductiveSpace<S>, g: &InvariantMetric<S>, j: &Endo<S>, tol: f64) -> Result<()> {
    let n = space.dim_m();
    if j.rows() != n || !j.is_square() {
        return Err(Error::Dimension("J must be an endomorphism of m".into()));
    }
    if !j.mul(j).add(&Matrix::identity(n)).is_zero_within(tol) {
        return Err(Error::NotComplexStructure);
    }
    let gm = g.gram().matrix();
    if !j.transpose().mul(gm).mul(j).approx_eq(gm, tol) {
        return Err(Error::NotOrthogonal);
    }
    if !space.is_endo_invariant(j, tol) {
        return Err(Error::EndoNotInvariant);
    }
    Ok(())
}

/// `∇_{X_a} J = [Λ(X_a), J]` for every basis vector.
fn nabla_j<S: Scalar>(conn: &Connection<S>, j: &Endo<S>) -> Vec<Matrix<S>> {
    (0..conn.dim()).map(|a| conn.nomizu_basis(a).commutator(j)).collect()
}

/// Nearly Kähler condition `(∇_X J)X = 0`, evaluated on basis vectors, on
/// symmetrized basis pairs and on `samples` random vectors.
pub fn nearly_kahler_nabla_j<S: Scalar, R: Rng>(
    space: &ReductiveSpace<S>,
    g: &InvariantMetric<S>,
    j: &Endo<S>,
    samples: usize,
    rng: &mut R,
    tol: f64,
) -> Result<NablaJReport> {
    check_hermitian(space, g, j, tol)?;
    let conn = nomizu_levi_civita(space, g, tol)?;
    let n = space.dim_m();
    let dj = nabla_j(&conn, j);
    let mut residual = 0f64;
    for a in 0..n {
        for b in a..n {
            let v = dj[a].column(b).add(&dj[b].column(a));
            residual = residual.max(v.max_abs());
        }
    }
    let djf: Vec<Matrix<f64>> = dj.iter().map(|m| m.map(Scalar::to_f64)).collect();
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = Vector::from_vec(x);
        let mut acc = Matrix::zeros(n, n);
        for a in 0..n {
            acc = acc.add(&djf[a].scale(&x[a]));
        }
        residual = residual.max(acc.apply(&x).max_abs());
    }
    Ok(NablaJReport { residual, verdict: residual <= tol })
}

/// Intrinsic torsion `η_X = ½ J ∘ (∇_X J)` stored as `η[a] = η_{X_a}`.
#[derive(Clone, Debug)]
pub struct IntrinsicTorsion<S> {
    pub eta: Vec<Matrix<S>>,
}

impl<S: Scalar> IntrinsicTorsion<S> {
    pub fn eta_of(&self, x: &Vector<S>) -> Matrix<S> {
        let n = self.eta.len();
        (0..n).fold(Matrix::zeros(n, n), |acc, a| acc.add(&self.eta[a].scale(&x[a])))
    }

    /// Largest defect of total skew-symmetry of `(X,Y,Z) ↦ g(η_X Y, Z)`.
    pub fn skew_defect(&self, g: &Gram<S>) -> f64 {
        let n = self.eta.len();
        let gm = g.matrix();
        // t[a][b][c] = g(η_{X_a} X_b, X_c)
        let t: Vec<Matrix<S>> = self.eta.iter().map(|e| e.transpose().mul(gm)).collect();
        let mut worst = 0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let x = t[a][(b, c)].clone();
                    worst = worst.max((x.clone() + t[a][(c, b)].clone()).abs_f64());
                    worst = worst.max((x + t[b][(a, c)].clone()).abs_f64());
                }
            }
        }
        worst
    }

    /// Largest component of `∇̄η` with `∇̄ = ∇ − η`.
    pub fn parallel_defect(&self, lc: &Connection<S>) -> f64 {
        let n = self.eta.len();
        let bar = lc.minus(&self.eta);
        let mut worst = 0f64;
        for x in 0..n {
            let l = bar.nomizu_basis(x);
            for y in 0..n {
                for z in 0..n {
                    // (∇̄_X η)(Y,Z) = Λ̄(X)η(Y,Z) − η(Λ̄(X)Y, Z) − η(Y, Λ̄(X)Z)
                    let eyz = self.eta[y].column(z);
                    let mut v = l.apply(&eyz);
                    v = v.sub(&self.eta_of(&l.column(y)).column(z));
                    v = v.sub(&self.eta[y].apply(&l.column(z)));
                    worst = worst.max(v.max_abs());
                }
            }
        }
        worst
    }
}

/// `η_X = ½ J ∘ (∇_X J)` for the Levi-Civita connection of `g`.
pub fn intrinsic_eta<S: Scalar>(
    space: &ReductiveSpace<S>,
    g: &InvariantMetric<S>,
    j: &Endo<S>,
    tol: f64,
) -> Result<(IntrinsicTorsion<S>, Connection<S>)> {
    check_hermitian(space, g, j, tol)?;
    let conn = nomizu_levi_civita(space, g, tol)?;
    let half = S::from_ratio(1, 2);
    let eta = nabla_j(&conn, j).into_iter().map(|d| j.mul(&d).scale(&half)).collect();
    Ok((IntrinsicTorsion { eta }, conn))
}

/// Torsion and curvature of the normal connection as constant tensors:
/// `T̂(X,Y) = −[X,Y]_m`, `R̂_{X,Y} = [X,Y]_h`.
#[derive(Clone, Debug)]
pub struct NormalTensors<S> {
    n: usize,
    torsion: Vec<Vector<S>>,
    curvature: Vec<Vector<S>>,
}

impl<S: Scalar> NormalTensors<S> {
    pub fn torsion(&self, a: usize, b: usize) -> &Vector<S> {
        &self.torsion[a * self.n + b]
    }

    /// `h`-component of the curvature, in h coordinates.
    pub fn curvature(&self, a: usize, b: usize) -> &Vector<S> {
        &self.curvature[a * self.n + b]
    }

    pub fn torsion_vanishes(&self, tol: f64) -> bool {
        self.torsion.iter().all(|v| v.is_zero_within(tol))
    }

    pub fn curvature_vanishes(&self, tol: f64) -> bool {
        self.curvature.iter().all(|v| v.is_zero_within(tol))
    }
}

pub fn normal_torsion_curvature<S: Scalar>(space: &ReductiveSpace<S>) -> NormalTensors<S> {
    let n = space.dim_m();
    let mut torsion = Vec::with_capacity(n * n);
    let mut curvature = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            torsion.push(space.bracket_m_basis(a, b).scale(&-S::one()));
            curvature.push(space.bracket_h_basis(a, b).clone());
        }
    }
    NormalTensors { n, torsion, curvature }
}

/// `g([X,Y]_m, Z) = −g([X,Z]_m, Y)` on all basis triples.
pub fn is_naturally_reductive<S: Scalar>(space: &ReductiveSpace<S>, g: &InvariantMetric<S>, tol: f64) -> bool {
    naturally_reductive_violation(space, g, tol).is_none()
}

/// First basis triple violating natural reductivity.
pub fn naturally_reductive_violation<S: Scalar>(
    space: &ReductiveSpace<S>,
    g: &InvariantMetric<S>,
    tol: f64,
) -> Option<(usize, usize, usize)> {
    let n = space.dim_m();
    let gm = g.gram().matrix();
    for x in 0..n {
        for y in 0..n {
            let gxy = gm.apply(space.bracket_m_basis(x, y));
            for z in 0..n {
                let gxz = gm.apply(space.bracket_m_basis(x, z));
                if !(gxy[z].clone() + gxz[y].clone()).is_zero_within(tol) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

fn check_acs<S: Scalar>(space: &ReductiveSpace<S>, j: &Endo<S>, tol: f64) -> Result<()> {
    let n = space.dim_m();
    if j.rows() != n || !j.is_square() {
        return Err(Error::Dimension("J must be an endomorphism of m".into()));
    }
    if !j.mul(j).add(&Matrix::identity(n)).is_zero_within(tol) {
        return Err(Error::NotComplexStructure);
    }
    Ok(())
}

/// Brackets of `X − iJX` and `Y ∓ iJY` split into real parts, for basis X, Y:
/// returns `(Z, W, P, Q)` with
/// `[X − iJX, Y − iJY] = Z − iW` and `[X − iJX, Y + iJY] = P + iQ`,
/// each as an (m-part, h-part) pair.
#[allow(clippy::type_complexity)]
fn complex_brackets<S: Scalar>(
    space: &ReductiveSpace<S>,
    j: &Endo<S>,
    a: usize,
    b: usize,
) -> [(Vector<S>, Vector<S>); 4] {
    let n = space.dim_m();
    let x = Vector::basis(n, a);
    let y = Vector::basis(n, b);
    let jx = j.apply(&x);
    let jy = j.apply(&y);
    let br = |u: &Vector<S>, v: &Vector<S>| (space.bracket_m(u, v), space.bracket_h(u, v));
    let (xy_m, xy_h) = br(&x, &y);
    let (jj_m, jj_h) = br(&jx, &jy);
    let (jxy_m, jxy_h) = br(&jx, &y);
    let (xjy_m, xjy_h) = br(&x, &jy);
    [
        (xy_m.sub(&jj_m), xy_h.sub(&jj_h)),
        (jxy_m.add(&xjy_m), jxy_h.add(&xjy_h)),
        (xy_m.add(&jj_m), xy_h.add(&jj_h)),
        (xjy_m.sub(&jxy_m), xjy_h.sub(&jxy_h)),
    ]
}

/// Three-symmetric bracket conditions for `m⁺` the `+i`-eigenspace of `J`:
/// `[m⁺,m⁺] ⊂ m⁻`, `[m⁻,m⁻] ⊂ m⁺`, `[m⁺,m⁻] ⊂ h^ℂ`.
///
/// With `m⁺ = {X − iJX}` the first inclusion reads `Z_h = W_h = 0` and
/// `J Z_m + W_m = 0`; the second is its complex conjugate; the third reads
/// `P_m = Q_m = 0`.
pub fn check_3symmetric<S: Scalar>(space: &ReductiveSpace<S>, j: &Endo<S>, tol: f64) -> Result<bool> {
    check_acs(space, j, tol)?;
    let n = space.dim_m();
    for a in 0..n {
        for b in 0..n {
            let [(zm, zh), (wm, wh), (pm, _), (qm, _)] = complex_brackets(space, j, a, b);
            if !zh.is_zero_within(tol) || !wh.is_zero_within(tol) {
                return Ok(false);
            }
            if !j.apply(&zm).add(&wm).is_zero_within(tol) {
                return Ok(false);
            }
            if !pm.is_zero_within(tol) || !qm.is_zero_within(tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `m⁺ ⊕ h^ℂ` is a subalgebra, i.e. `[m⁺,m⁺]_m ⊂ m⁺`: the invariant almost
/// complex structure is integrable. In real terms `W_m = J Z_m`.
pub fn is_subalgebra_mod_h<S: Scalar>(space: &ReductiveSpace<S>, j: &Endo<S>, tol: f64) -> Result<bool> {
    check_acs(space, j, tol)?;
    let n = space.dim_m();
    for a in 0..n {
        for b in 0..n {
            let [(zm, _), (wm, _), _, _] = complex_brackets(space, j, a, b);
            if !wm.sub(&j.apply(&zm)).is_zero_within(tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ricci tensor and Einstein verdict of an invariant metric.
#[derive(Clone, Debug)]
pub struct RicciReport<S> {
    pub ricci: Matrix<S>,
    pub scalar_curvature: S,
    /// `max |Ric − (scal/n) g| / max |Ric|` (zero for flat metrics).
    pub einstein_deviation: f64,
    pub einstein: bool,
}

pub fn ricci<S: Scalar>(space: &ReductiveSpace<S>, g: &InvariantMetric<S>, tol: f64) -> Result<RicciReport<S>> {
    let n = space.dim_m();
    let conn = nomizu_levi_civita(space, g, tol)?;
    let curv: Vec<Matrix<S>> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| conn.curvature(space, a, b)).collect();
    // Ric(Y,Z) = tr(X ↦ R(X,Y)Z) = Σ_a [R(X_a,Y)Z]_a
    let ric = Matrix::from_fn(n, n, |y, z| (0..n).fold(S::zero(), |acc, a| acc + curv[a * n + y][(a, z)].clone()));
    let gm = g.gram().matrix();
    let ginv = gm.inverse(tol).ok_or(Error::NotPositiveDefinite)?;
    let scal = ginv.mul(&ric).trace();
    let model = gm.scale(&(scal.clone() / S::from_i64(n as i64)));
    let size = ric.max_abs();
    let einstein_deviation = if size == 0.0 { 0.0 } else { ric.sub(&model).max_abs() / size };
    Ok(RicciReport { ricci: ric, scalar_curvature: scal, einstein_deviation, einstein: einstein_deviation <= tol.max(1e-8) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{QSqrt3, Rational};

    type Q = Rational;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("X{}", i + 1)).collect()
    }

    /// su(2) with [X_i, X_{i+1}] = −X_{i+2}.
    pub(crate) fn su2() -> LieAlgebra<Q> {
        let e = (0..3).map(|i| (i, (i + 1) % 3, (i + 2) % 3, Q::from_i64(-1)));
        LieAlgebra::from_sparse(labels(3), e, 0.0).unwrap()
    }

    #[test]
    fn jacobi_examples() {
        assert!(check_jacobi(&su2(), 0.0));
        let ab = LieAlgebra::<Q>::from_sparse(labels(3), std::iter::empty(), 0.0).unwrap();
        assert!(check_jacobi(&ab, 0.0));
    }

    #[test]
    fn jacobi_detects_broken_four_dim_algebra() {
        // cyclic sum on (X1, X2, X4) is [X4, X3] = −X1
        let entries = vec![(0, 1, 2, Q::from_i64(1)), (2, 3, 0, Q::from_i64(1))];
        let err = LieAlgebra::from_sparse(labels(4), entries, 0.0).unwrap_err();
        assert_eq!(err, Error::JacobiFails(0, 1, 3));
    }

    #[test]
    fn antisymmetry_conflict_is_rejected() {
        let entries = vec![(0, 1, 2, Q::from_i64(1)), (1, 0, 2, Q::from_i64(1))];
        assert!(matches!(LieAlgebra::from_sparse(labels(3), entries, 0.0), Err(Error::NotAntisymmetric(..))));
    }

    #[test]
    fn ce_differential_on_su2() {
        let sp = ReductiveSpace::group(su2());
        let e1 = KForm::basis(3, &[0]);
        assert_eq!(sp.ce_differential(&e1, 0.0).unwrap(), KForm::basis(3, &[1, 2]));
        let c = KForm::constant(3, Q::from_i64(5));
        assert!(sp.ce_differential(&c, 0.0).unwrap().is_zero_within(0.0));
    }

    #[test]
    fn round_s3_ricci() {
        let sp = ReductiveSpace::group(su2());
        let g = InvariantMetric::new(&sp, Gram::identity(3), 0.0).unwrap();
        let r = ricci(&sp, &g, 0.0).unwrap();
        assert_eq!(r.scalar_curvature, Q::from_ratio(3, 2));
        assert_eq!(r.ricci, Matrix::identity(3).scale(&Q::from_ratio(1, 2)));
        assert!(r.einstein);
    }

    #[test]
    fn bi_invariant_metric_is_naturally_reductive() {
        let sp = ReductiveSpace::group(su2());
        let g = InvariantMetric::new(&sp, Gram::identity(3), 0.0).unwrap();
        assert!(is_naturally_reductive(&sp, &g, 0.0));
        let conn = nomizu_levi_civita(&sp, &g, 0.0).unwrap();
        // U = 0: ∇_X Y = ½[X,Y]
        assert_eq!(conn.nabla(0, 1), sp.bracket_m_basis(0, 1).scale(&Q::from_ratio(1, 2)));
        let skewed = InvariantMetric::new(&sp, Gram::diagonal(&[Q::from_i64(1), Q::from_i64(1), Q::from_i64(2)]), 0.0).unwrap();
        assert!(!is_naturally_reductive(&sp, &skewed, 0.0));
    }

    #[test]
    fn abelian_is_flat() {
        let ab = LieAlgebra::<Q>::from_sparse(labels(4), std::iter::empty(), 0.0).unwrap();
        let sp = ReductiveSpace::group(ab);
        let g = InvariantMetric::new(&sp, Gram::identity(4), 0.0).unwrap();
        let conn = nomizu_levi_civita(&sp, &g, 0.0).unwrap();
        assert_eq!(conn.metricity_defect(g.gram()), 0.0);
        assert!((0..4).all(|a| conn.nomizu_basis(a).is_zero_within(0.0)));
        let r = ricci(&sp, &g, 0.0).unwrap();
        assert!(r.ricci.is_zero_within(0.0));
        let nt = normal_torsion_curvature(&sp);
        assert!(nt.torsion_vanishes(0.0) && nt.curvature_vanishes(0.0));
    }

    #[test]
    fn kahler_flat_torus_nabla_j() {
        let ab = LieAlgebra::<Q>::from_sparse(labels(2), std::iter::empty(), 0.0).unwrap();
        let sp = ReductiveSpace::group(ab);
        let g = InvariantMetric::new(&sp, Gram::identity(2), 0.0).unwrap();
        let j = Matrix::from_rows(vec![vec![Q::from_i64(0), Q::from_i64(-1)], vec![Q::from_i64(1), Q::from_i64(0)]]);
        let mut rng = rand::thread_rng();
        let rep = nearly_kahler_nabla_j(&sp, &g, &j, 10, &mut rng, 0.0).unwrap();
        assert_eq!(rep.residual, 0.0);
        let (eta, _) = intrinsic_eta(&sp, &g, &j, 0.0).unwrap();
        assert!(eta.eta.iter().all(|e| e.is_zero_within(0.0)));
    }

    #[test]
    fn acs_from_rotation_blocks() {
        // rotation by 2π/3 in the plane, entries in Q(√3)
        let q = |a: i64, b: i64, den: i64| QSqrt3::new(Q::from_ratio(a, den), Q::from_ratio(b, den));
        let s = Matrix::from_rows(vec![vec![q(-1, 0, 2), q(0, -1, 2)], vec![q(0, 1, 2), q(-1, 0, 2)]]);
        let sym = OrderThreeSym::new(s, 0.0).unwrap();
        let j = acs_from_automorphism(&sym, 0.0).unwrap();
        let want = Matrix::from_rows(vec![vec![q(0, 0, 1), q(-1, 0, 1)], vec![q(1, 0, 1), q(0, 0, 1)]]);
        assert_eq!(j, want);
        assert!(OrderThreeSym::new(Matrix::<QSqrt3>::identity(2), 0.0).is_err());
    }

    #[test]
    fn order_three_rejects_non_cubic_root() {
        let s = Matrix::from_rows(vec![vec![Q::from_i64(0), Q::from_i64(-1)], vec![Q::from_i64(1), Q::from_i64(0)]]);
        assert_eq!(OrderThreeSym::new(s, 0.0).unwrap_err(), Error::NotOrderThree);
    }
}
