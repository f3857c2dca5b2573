//! Quantitative post-quantum readiness modelling.
//!
//! The crate is organised by concern:
//!
//! * [`assessment`] composite readiness scores, gap analysis, risk aggregation
//!   and the snapshot document that binds their inputs together.
//! * [`trajectory`] exponential transformation curves, timeline functions and
//!   rate fitting.
//! * [`optimizer`] a small expression language and a penalty/projected-gradient
//!   solver for resource allocation problems.
//! * [`inventory`] cryptographic asset classification, certificate parsing,
//!   TLS endpoint probing and derivation of the technical readiness matrix.
//!
//! Every scoring routine is a pure function over immutable values.

pub mod assessment;
pub mod inventory;
pub mod optimizer;
pub mod trajectory;

mod warning;

pub use warning::Warning;
