//! Snapshot store, score reports, command line and local HTTP API built on
//! [`quasar_core`].

pub mod api;
pub mod cli;
pub mod clock;
pub mod document;
pub mod error;
pub mod ops;
pub mod projection;
pub mod report;
pub mod store;

pub use clock::{Clock, FixedClock, SystemClock};
pub use error::{Error, Result};
