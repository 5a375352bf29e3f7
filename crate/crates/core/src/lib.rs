//! Conformal capacity of ring domains.
//!
//! A doubly connected domain is mapped onto an annulus `q < |w| < 1` by
//! solving a boundary integral equation with the generalized Neumann kernel.
//! The capacity is then `2π / log(1/q)`. The crate also provides the special
//! functions behind the closed-form reference values, the elementary maps
//! that turn slit and half-plane geometries into ring domains, and the
//! hyperbolic and elliptic capacities of sets in the unit disk.
//!
//! ```
//! use ringcap::capacity::{cap_family, exact_oracle, Family};
//!
//! let fam = Family::TwoCircles { a: 4.0, r: 1.0 };
//! let report = cap_family(&fam, Some(256)).unwrap();
//! let exact = exact_oracle(&fam).unwrap();
//! assert!((report.value - exact).abs() < 1e-12 * exact);
//! ```

// Guards such as `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annmap;
pub mod bie;
pub mod boundary;
pub mod capacity;
pub mod error;
pub mod exec;
pub mod slitmap;
pub mod specfun;

pub use annmap::{annq, AnnulusMap, SolveOptions};
pub use error::{Error, Result};
pub use exec::Exec;
pub use num_complex::Complex64;
