//! Quaternions, octonions by Cayley–Dickson doubling, the cross product on
//! imaginary octonions and the induced SU(3)-structures on S⁶.
//!
//! An octonion is a pair `(a, b)` of quaternions with
//! `(a,b)(c,d) = (ac − d̄b, da + bc̄)`. Components are ordered
//! `1, i, j, k, ℓ, iℓ, jℓ, kℓ` where `ℓ = (0,1)` and `qℓ = (0,q)`; the
//! imaginary units `i₁ … i₇` are components `1 … 7`, stored at indices
//! `0 … 6` of vectors in `ℝ⁷`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::hitchin::{build_su3, SU3Candidate, SU3Structure};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Rational, Scalar};

/// `w + x i + y j + z k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quat<S> {
    pub c: [S; 4],
}

impl<S: Scalar> Quat<S> {
    pub fn new(w: S, x: S, y: S, z: S) -> Self {
        Quat { c: [w, x, y, z] }
    }

    pub fn zero() -> Self {
        Quat { c: std::array::from_fn(|_| S::zero()) }
    }

    pub fn real(w: S) -> Self {
        Quat::new(w, S::zero(), S::zero(), S::zero())
    }

    /// Unit `1, i, j, k` for `n = 0 … 3`.
    pub fn unit(n: usize) -> Self {
        let mut q = Self::zero();
        q.c[n] = S::one();
        q
    }

    pub fn add(&self, o: &Self) -> Self {
        Quat { c: std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quat { c: std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()) }
    }

    pub fn neg(&self) -> Self {
        Quat { c: std::array::from_fn(|i| -self.c[i].clone()) }
    }

    pub fn scale(&self, s: &S) -> Self {
        Quat { c: std::array::from_fn(|i| self.c[i].clone() * s.clone()) }
    }

    pub fn conj(&self) -> Self {
        let [w, x, y, z] = self.c.clone();
        Quat::new(w, -x, -y, -z)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a1, b1, c1, d1] = self.c.clone();
        let [a2, b2, c2, d2] = o.c.clone();
        Quat::new(
            a1.clone() * a2.clone() - b1.clone() * b2.clone() - c1.clone() * c2.clone() - d1.clone() * d2.clone(),
            a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone() - d1.clone() * c2.clone(),
            a1.clone() * c2.clone() - b1.clone() * d2.clone() + c1.clone() * a2.clone() + d1.clone() * b2.clone(),
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }

    pub fn norm2(&self) -> S {
        self.c.iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Octonion<S> {
    pub a: Quat<S>,
    pub b: Quat<S>,
}

impl<S: Scalar> Octonion<S> {
    pub fn from_components(c: &[S]) -> Self {
        assert_eq!(c.len(), 8, "octonions have 8 components");
        Octonion {
            a: Quat::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()),
            b: Quat::new(c[4].clone(), c[5].clone(), c[6].clone(), c[7].clone()),
        }
    }

    pub fn components(&self) -> [S; 8] {
        std::array::from_fn(|i| if i < 4 { self.a.c[i].clone() } else { self.b.c[i - 4].clone() })
    }

    pub fn unit(n: usize) -> Self {
        let mut c = vec![S::zero(); 8];
        c[n] = S::one();
        Self::from_components(&c)
    }

    /// The imaginary octonion with coordinates `x` on `i₁ … i₇`.
    pub fn imaginary(x: &[S]) -> Self {
        let mut c = vec![S::zero()];
        c.extend_from_slice(x);
        Self::from_components(&c)
    }

    pub fn real_part(&self) -> S {
        self.a.c[0].clone()
    }

    pub fn imaginary_part(&self) -> Vector<S> {
        Vector::from_vec(self.components()[1..].to_vec())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Octonion {
            a: self.a.mul(&o.a).sub(&o.b.conj().mul(&self.b)),
            b: o.b.mul(&self.a).add(&self.b.mul(&o.a.conj())),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Octonion { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Octonion { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> Self {
        Octonion { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn conj(&self) -> Self {
        Octonion { a: self.a.conj(), b: self.b.neg() }
    }

    pub fn norm2(&self) -> S {
        self.a.norm2() + self.b.norm2()
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }
}

/// Two-fold cross product `P(x,y) = Im(x·y)` on `ℝ⁷`.
pub fn octonion_cross<S: Scalar>(x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
    Octonion::imaginary(x.as_slice()).mul(&Octonion::imaginary(y.as_slice())).imaginary_part()
}

/// `φ₀(x,y,z) = ⟨P(x,y), z⟩`.
pub fn phi0<S: Scalar>() -> KForm<S> {
    let mut phi = KForm::zero(7, 3);
    for a in 0..7 {
        for b in a + 1..7 {
            let p = octonion_cross::<S>(&Vector::basis(7, a), &Vector::basis(7, b));
            for c in b + 1..7 {
                if !p[c].is_zero_within(0.0) {
                    phi = phi.add(&KForm::term(7, &[a, b, c], p[c].clone()));
                }
            }
        }
    }
    phi
}

/// Matrix of `y ↦ P(x,y)` on `ℝ⁷`.
pub fn cross_matrix<S: Scalar>(x: &Vector<S>) -> Matrix<S> {
    let cols: Vec<Vector<S>> = (0..7).map(|b| octonion_cross(x, &Vector::basis(7, b))).collect();
    Matrix::from_columns(&cols)
}

/// Algebraic identities of the octonion table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OctonionIdentities {
    pub alternative_on_basis: bool,
    pub norm_multiplicative_on_basis: bool,
    pub rules_hold_on_basis: bool,
    pub random_pairs: usize,
    pub max_alternativity_defect: f64,
    pub max_norm_defect: f64,
    pub max_cross_defect: f64,
    /// Nonzero terms of `φ₀` as `(i, j, k, sign)` with 1-based indices.
    pub phi0_terms: Vec<(usize, usize, usize, i64)>,
}

fn alternativity_defect<S: Scalar>(x: &Octonion<S>, y: &Octonion<S>) -> f64 {
    let l = x.mul(&x.mul(y)).sub(&x.mul(x).mul(y)).max_abs();
    let r = y.mul(x).mul(x).sub(&y.mul(&x.mul(x))).max_abs();
    l.max(r)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if r > 0.1 {
            return v.into_iter().map(|t| t / r).collect();
        }
    }
}

pub fn octonion_identities(samples: usize, seed: u64) -> OctonionIdentities {
    type Q = Rational;
    let units: Vec<Octonion<Q>> = (0..8).map(Octonion::unit).collect();
    let mut alternative_on_basis = true;
    let mut norm_multiplicative_on_basis = true;
    for x in &units {
        for y in &units {
            alternative_on_basis &= alternativity_defect(x, y) == 0.0;
            norm_multiplicative_on_basis &= x.mul(y).norm2() == x.norm2() * y.norm2();
        }
    }
    // (i) 1·1 = 1, (ii) 1·x = x, (iii) x·x = −1, (iv) x ⊥ y ⇒ x·y = P(x,y)
    let one = &units[0];
    let mut rules = one.mul(one) == *one;
    for a in 1..8 {
        let x = &units[a];
        rules &= one.mul(x) == *x;
        rules &= x.mul(x) == one.neg();
        for (b, y) in units.iter().enumerate().skip(1) {
            if a != b {
                let xy = x.mul(y);
                rules &= xy.real_part() == <Q as Scalar>::zero();
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut alt, mut nrm, mut crs) = (0f64, 0f64, 0f64);
    for _ in 0..samples {
        let xv: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let yv: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let x = Octonion::from_components(&xv);
        let y = Octonion::from_components(&yv);
        alt = alt.max(alternativity_defect(&x, &y));
        nrm = nrm.max((x.mul(&y).norm2() - x.norm2() * y.norm2()).abs());
        let xi = Vector::from_vec(xv[1..].to_vec());
        let yi = Vector::from_vec(yv[1..].to_vec());
        let p = octonion_cross(&xi, &yi);
        let lhs = p.dot(&p);
        let rhs = xi.dot(&xi) * yi.dot(&yi) - xi.dot(&yi).powi(2);
        crs = crs.max((lhs - rhs).abs()).max(p.dot(&xi).abs()).max(p.dot(&yi).abs());
    }
    let phi0_terms = phi0::<Q>()
        .terms(0.0)
        .into_iter()
        .map(|(idx, v)| (idx[0] + 1, idx[1] + 1, idx[2] + 1, if v > <Q as Scalar>::zero() { 1 } else { -1 }))
        .collect();
    OctonionIdentities {
        alternative_on_basis,
        norm_multiplicative_on_basis,
        rules_hold_on_basis: rules,
        random_pairs: samples,
        max_alternativity_defect: alt,
        max_norm_defect: nrm,
        max_cross_defect: crs,
        phi0_terms,
    }
}

/// Orthonormal basis of `x^⊥` as the columns of a 7×6 matrix.
pub fn tangent_frame(x: &Vector<f64>) -> Matrix<f64> {
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    let mut basis: Vec<Vector<f64>> = vec![x.clone()];
    for &i in &order {
        let mut v = Vector::basis(7, i);
        for b in &basis {
            v = v.sub(&b.scale(&v.dot(b)));
        }
        let n = v.dot(&v).sqrt();
        if n > 1e-6 {
            basis.push(v.scale(&(1.0 / n)));
        }
        if basis.len() == 7 {
            break;
        }
    }
    Matrix::from_columns(&basis[1..])
}

/// The structure on `T_xS⁶` together with the octonionic `J`.
#[derive(Clone, Debug)]
pub struct S6Point {
    pub frame: Matrix<f64>,
    pub structure: SU3Structure<f64>,
    /// `y ↦ P(x,y)` in the frame.
    pub octonion_j: Matrix<f64>,
    /// `±1` with `J_Hitchin ≈ sign · J_octonion`.
    pub sign: i8,
    pub deviation: f64,
}

/// `ω_x = ι_xφ₀` and `ψ_x = φ₀` restricted to `x^⊥`, run through
/// Hitchin's construction.
pub fn s6_structure_at(x: &Vector<f64>, tol: f64) -> Result<S6Point> {
    if x.dim() != 7 || (x.dot(x) - 1.0).abs() > 1e-12 {
        return Err(Error::Dimension("s6_structure_at needs a unit vector in ℝ⁷".into()));
    }
    let frame = tangent_frame(x);
    let phi = phi0::<f64>();
    let omega = phi.interior(x)?.pullback(&frame)?;
    let psi = phi.pullback(&frame)?;
    let c = SU3Candidate::oriented(omega, psi, tol)?;
    let structure = build_su3(&c, tol)?;
    let octonion_j = frame.transpose().mul(&cross_matrix(x)).mul(&frame);
    let plus = structure.j.sub(&octonion_j).max_abs();
    let minus = structure.j.add(&octonion_j).max_abs();
    let (sign, deviation) = if plus <= minus { (1, plus) } else { (-1, minus) };
    Ok(S6Point { frame, structure, octonion_j, sign, deviation })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct S6Report {
    pub samples: usize,
    pub built: usize,
    pub max_deviation: f64,
    pub max_j_squared_defect: f64,
    /// The single global sign relating the two complex structures, if one.
    pub global_sign: Option<i8>,
    pub identities: OctonionIdentities,
    pub verdict: bool,
}

pub fn s6_verify(samples: usize, seed: u64, tol: f64) -> Result<S6Report> {
    let identities = octonion_identities(1000, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut built = 0;
    let mut max_deviation = 0f64;
    let mut max_j2 = 0f64;
    let mut signs = Vec::new();
    for _ in 0..samples {
        let x = Vector::from_vec(random_unit(&mut rng, 7));
        if let Ok(p) = s6_structure_at(&x, tol) {
            built += 1;
            max_deviation = max_deviation.max(p.deviation);
            max_j2 = max_j2.max(p.structure.j.mul(&p.structure.j).add(&Matrix::identity(6)).max_abs());
            signs.push(p.sign);
        }
    }
    let global_sign = match signs.first() {
        Some(&s) if signs.iter().all(|&t| t == s) => Some(s),
        _ => None,
    };
    let verdict = built == samples
        && max_deviation < tol
        && max_j2 < tol
        && global_sign.is_some()
        && identities.alternative_on_basis
        && identities.norm_multiplicative_on_basis
        && identities.rules_hold_on_basis
        && identities.max_alternativity_defect < 1e-12
        && identities.max_norm_defect < 1e-12;
    Ok(S6Report { samples, built, max_deviation, max_j_squared_defect: max_j2, global_sign, identities, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_table() {
        let p = octonion_cross::<Rational>(&Vector::basis(7, 0), &Vector::basis(7, 1));
        assert_eq!(p, Vector::basis(7, 2));
        let x = Vector::from_vec(vec![1.0, 2.0, 0.5, -1.0, 0.0, 3.0, 1.5]);
        assert!(octonion_cross(&x, &x).is_zero_within(1e-12));
    }

    #[test]
    fn identities() {
        let r = octonion_identities(200, 3);
        assert!(r.alternative_on_basis && r.norm_multiplicative_on_basis && r.rules_hold_on_basis);
        assert!(r.max_alternativity_defect < 1e-12 && r.max_norm_defect < 1e-12 && r.max_cross_defect < 1e-12);
        assert_eq!(r.phi0_terms.len(), 7);
    }

    #[test]
    fn structure_at_i1() {
        let x = Vector::basis(7, 0);
        let p = s6_structure_at(&x, 1e-10).unwrap();
        assert!(p.deviation < 1e-12);
    }

    #[test]
    fn random_points() {
        let r = s6_verify(20, 5, 1e-10).unwrap();
        assert!(r.verdict, "{r:?}");
    }
}
