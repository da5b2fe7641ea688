//! Desk-scale laboratory for exponential sums and the Riemann zeta function on
//! the critical line.
//!
//! - [`expsum`]: compensated direct evaluation of the quadruple-phase sums,
//!   dyadic sums `Σ_{m∼M} e(T F(m/M))` and general curve sums.
//! - [`meanvalue`]: the twelfth-moment mean values `A_r(N, δ, Δ)` by windowed
//!   counting, exact kernel sums and Monte-Carlo quadrature, plus the
//!   Vinogradov-type counts `J_{s,2}(N)`.
//! - [`decouple`]: numerical probes of the `L⁶` parabola and bilinear `d = 4`
//!   decoupling inequalities.
//! - [`pairs`]: exact exponent-pair calculus (A/B processes, word search).
//! - [`planner`]: piecewise-affine exponent bounds in `α = log M / log T`,
//!   their envelope, exact coverage check and concrete `(N, R)` plans.
//! - [`zeta`]: `ζ(1/2 + it)` by Euler–Maclaurin and the approximate
//!   functional-equation main sum, with growth scans.

pub mod decouple;
pub mod error;
pub mod expsum;
pub mod meanvalue;
mod multiset;
pub mod pairs;
pub mod planner;
pub mod rational;
pub mod sampling;
pub mod summation;
pub mod zeta;

pub use error::{Error, Result};
pub use expsum::{ComplexValue, PhaseFunction, PhaseSpec};
pub use meanvalue::{CountResult, MeanValueSpec, Method};
pub use pairs::ExponentPair;
pub use planner::{PiecewiseBound, Plan, Regime, Scenario};
pub use rational::Rational;
pub use zeta::{GrowthScan, ZetaValue};
