use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("volume form does not have unit norm for the metric")]
    NotUnitVolume,
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFails(usize, usize, usize),
    #[error("structure constants are not antisymmetric at ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("decomposition is not reductive: {0}")]
    NotReductive(String),
    #[error("form is not invariant under the isotropy algebra")]
    NotInvariant,
    #[error("metric is not invariant under the isotropy algebra")]
    MetricNotInvariant,
    #[error("endomorphism is not invariant under the isotropy algebra")]
    EndoNotInvariant,
    #[error("J² ≠ −Id")]
    NotComplexStructure,
    #[error("J is not orthogonal for the metric")]
    NotOrthogonal,
    #[error("S³ ≠ Id")]
    NotOrderThree,
    #[error("1 is an eigenvalue of S (det(S − Id) = 0)")]
    HasFixedVector,
    #[error("psi is not stable: tau = {tau} is not negative")]
    NotStable { tau: f64 },
    #[error("omega is not of type (1,1): omega ∧ psi ≠ 0")]
    NotType11,
    #[error("omega is degenerate: omega ∧ omega ∧ omega = 0")]
    DegenerateOmega,
    #[error("induced metric g(X,Y) = omega(X,JY) is not positive definite")]
    NotPositive,
    #[error("psi is not of type (3,0)+(0,3): the slot placements of J disagree")]
    SlotInconsistent,
    #[error("value is not representable in the chosen scalar field: {0}")]
    NotRepresentable(String),
    #[error("type condition fails: tAC = 0 and CB = 0 required")]
    TypeConditionFails,
    #[error("degenerate form: det C = 0")]
    Degenerate,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short label of the violated condition, used in reports.
    pub fn condition(&self) -> &'static str {
        match self {
            Error::NotStable { .. } => "psi-stable (tau(psi) < 0)",
            Error::NotType11 => "omega-type-(1,1) (omega ∧ psi = 0)",
            Error::DegenerateOmega => "omega-nondegenerate (omega^3 ≠ 0)",
            Error::NotPositive => "metric-positive (omega(X,JY) > 0)",
            Error::SlotInconsistent => "phi-from-psi (iota_X psi = iota_JX phi)",
            Error::NotComplexStructure => "almost-complex (J² = −Id)",
            Error::HasFixedVector => "order-three-automorphism (1 not an eigenvalue)",
            Error::NotOrderThree => "order-three-automorphism (S³ = Id)",
            Error::JacobiFails(..) | Error::NotAntisymmetric(..) => "lie-algebra (Jacobi identity)",
            Error::NotReductive(_) => "reductive ([h,m] ⊂ m)",
            Error::NotInvariant | Error::MetricNotInvariant | Error::EndoNotInvariant => {
                "isotropy-invariance"
            }
            Error::TypeConditionFails => "type-(1,1) on S3xS3 (tAC = CB = 0)",
            Error::Degenerate => "nondegenerate (det C ≠ 0)",
            Error::NotPositiveDefinite | Error::NotSymmetric => "metric-positive-definite",
            Error::NotUnitVolume => "unit-volume",
            Error::NotOrthogonal => "hermitian (g(J·,J·) = g)",
            Error::NotRepresentable(_) => "scalar-field",
            Error::Dimension(_) | Error::Parse(_) => "input",
        }
    }
}
