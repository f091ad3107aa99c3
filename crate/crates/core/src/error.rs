use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("empty growth window")]
    EmptyWindow,
    #[error("missing Laurent coefficient R_{0}")]
    MissingCoefficient(i64),
    #[error("closed form is singular at z = {re}{im:+}i")]
    SingularShift { re: f64, im: f64 },
    #[error("chain blocked at step {step}")]
    Blocked { step: usize },
    #[error("subspaces are not complementary (dim xs = {xs_dim}, dim xr = {xr_dim}, ambient = {ambient})")]
    NotComplementary {
        xs_dim: usize,
        xr_dim: usize,
        ambient: usize,
    },
    #[error("operator is not invertible on the {0} subspace")]
    NotInvertibleOnSubspace(&'static str),
    #[error("|z| = {modulus} lies outside the annulus ({s}, {r})")]
    OutsideAnnulus { modulus: f64, s: f64, r: f64 },
    #[error("pencil is singular at contour node {k}")]
    SingularNode { k: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no analytic reference for {0}")]
    NoReference(String),
    #[error("no admissible random pencil after {attempts} draws")]
    ResampleLimitExceeded { attempts: usize },
    #[error("laurent expansion is empty")]
    EmptyExpansion,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
