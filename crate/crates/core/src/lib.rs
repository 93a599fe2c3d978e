//! q-series and eta-quotient machinery for congruences of partitions with even
//! parts below odd parts.
//!
//! - [`series`]: truncated power series, eta products and named generating functions
//! - [`oracle`]: brute-force partition enumeration used as ground truth
//! - [`etaq`]: weight, character and cusp orders of eta quotients
//! - [`hecke`]: Hecke operators on q-expansions and the congruence families
//! - [`radu`]: Radu's finite check for `c_r(mn + t') ≡ 0 (mod u)`
//! - [`cli`]: the `etacong` command-line driver

pub mod arith;
pub mod cli;
pub mod error;
pub mod etaq;
pub mod hecke;
pub mod oracle;
pub mod radu;
pub mod series;

pub use error::{Error, Result};
pub use series::{CoefficientDomain, Series};
