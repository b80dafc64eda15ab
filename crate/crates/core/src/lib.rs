//! Power sums of zeros of Cauchy-kernel sums, computed from pole data and
//! checked against an argument-principle oracle.

pub mod criterion;
pub mod error;
pub mod kernel;
pub mod nevanlinna;
pub mod oracle;
pub mod power_sums;
pub mod series;
pub mod value;

pub use error::{Error, Result};
pub use kernel::{KernelModel, KernelSpec, TruncationPolicy};
pub use value::ValueWithError;
