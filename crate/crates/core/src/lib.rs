//! Exact computation of normalized extremal quasimodular forms of depth at most 4.
//!
//! Everything is carried out in truncated formal Laurent series in `q^{1/2}`
//! over arbitrary-precision rationals; there is no floating point anywhere.
//! The crate is organised as follows:
//!
//! - [`series`]: the series kernel ([`HalfQSeries`]) with ring operations,
//!   inversion, normalized square roots and the derivation `D = q d/dq`.
//! - [`eisenstein`]: the classical generators `E2`, `E4`, `E6`, `Δ` and the
//!   Ramanujan differential system they satisfy.
//! - [`qm_space`]: quasimodular-form spaces as spaces of q-expansions,
//!   dimension formulas, echelonized (Miller-style) bases and the generic
//!   linear-algebra extremal solver.
//! - [`depth1`]: the constructive routes to the depth-1 extremal forms
//!   (two-term recursion, closed polynomial formula, coefficient recursion
//!   from the hypergeometric-type ODE) and the ODE verifiers.
//! - [`operators`]: the operator calculus (`ψ`, `Ψ(μ)`, `𝒟`, `ℱ`) on
//!   one-parameter families of series, verified at sampled integer `k`.
//! - [`audit`]: denominator prime-factor bounds, positivity checks and
//!   report generation.

pub mod audit;
pub mod depth1;
pub mod eisenstein;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod qm_space;
pub mod rat;
pub mod series;
pub mod suites;

pub use audit::{audit_form, audit_sweep, factor, AuditReport, PrimeFactorization};
pub use depth1::{normalized_depth1, FormClass, QmFormDescriptor, Route};
pub use eisenstein::GeneratorCache;
pub use error::{Error, Result};
pub use qm_space::{QmBasis, QmSpaceDescriptor};
pub use rat::Rat;
pub use series::HalfQSeries;

/// Outcome of an exact identity check, with the first failing half-step
/// exponent when the check does not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    /// Half-step exponent `u` of the first coefficient violating the identity.
    pub first_discrepancy: Option<i64>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            pass: true,
            first_discrepancy: None,
        }
    }

    pub fn fail_at(u: i64) -> Self {
        Verdict {
            pass: false,
            first_discrepancy: Some(u),
        }
    }

    /// Combine with another verdict, keeping the earliest discrepancy.
    pub fn and(self, other: Verdict) -> Verdict {
        if self.pass {
            other
        } else if other.pass {
            self
        } else {
            let u = match (self.first_discrepancy, other.first_discrepancy) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            Verdict {
                pass: false,
                first_discrepancy: u,
            }
        }
    }
}
