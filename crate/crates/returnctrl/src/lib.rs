//! Return-method null control for a cubic-coupled two-component parabolic
//! system.
//!
//! The crate builds the explicit compactly supported reference trajectory
//! `(ū, v̄, h̄)`, solves the linearized coupled system with a θ-scheme and its
//! exact discrete adjoint, computes penalized weighted null controls by
//! conjugate gradient on the adjoint final datum, and drives the nonlinear
//! system to zero with a Picard iteration. A complex-valued quadratic variant
//! and the real quadratic obstruction are included.

// `!(x > 0.0)` is used on purpose to reject NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// stencil loops read clearer with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod hum;
pub mod io;
pub mod jet;
pub mod nonlinear;
pub mod pde;
pub mod quad;
pub mod scalar;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Which nonlinearity the reference trajectory is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Real-valued system with cubic coupling `u³`.
    Cubic,
    /// Complex-valued system with quadratic coupling `u²`.
    QuadraticComplex,
}

impl Kind {
    /// Exponent `p` of the coupling `u^p` in the second equation.
    pub fn power(self) -> i32 {
        match self {
            Kind::Cubic => 3,
            Kind::QuadraticComplex => 2,
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Kind::QuadraticComplex)
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(Kind::Cubic),
            "quadratic-complex" => Ok(Kind::QuadraticComplex),
            other => Err(Error::Config(format!(
                "unknown kind {other:?}, expected cubic or quadratic-complex"
            ))),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Cubic => "cubic",
            Kind::QuadraticComplex => "quadratic-complex",
        })
    }
}
