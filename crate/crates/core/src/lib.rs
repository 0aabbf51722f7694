//! Exact computations in the variational bicomplex of a jet space.
//!
//! Expressions are differential polynomials with rational coefficients over
//! jet coordinates ([`symexpr`]). On top of them sit total derivatives and
//! bigraded forms ([`jetcalc`]), the Euler-Lagrange operator and Legendre
//! forms ([`varcalc`]), linear differential operators ([`linop`]), on-shell
//! reduction and ideal membership ([`onshell`]), Noether theory
//! ([`noether`]) and the model-file language ([`dsl`]).
//!
//! ```
//! use vps_core::dsl::{parse_model, print_expr};
//! use vps_core::varcalc::euler_lagrange;
//!
//! let model = parse_model(r#"
//!     model "oscillator" {
//!       independent t;
//!       dependent u;
//!       lagrangian L = 1/2*u_t^2 - 1/2*u^2;
//!     }
//! "#).unwrap();
//! let (_, l) = model.pick_lagrangian(None).unwrap();
//! let el = euler_lagrange(&model.bundle, l);
//! assert_eq!(print_expr(&model.bundle, el.component(0)), "-u[t,t] - u");
//! ```

pub mod convention;
pub mod dsl;
pub mod error;
pub mod jetcalc;
pub mod linop;
pub mod models;
pub mod noether;
pub mod onshell;
pub mod random;
pub mod selftest;
pub mod symexpr;
pub mod varcalc;

pub use error::{Error, Result};
