//! Persistent cohomology with representative cocycles and the invariants built
//! on top of the cup product.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed exactly
//! over a prime field `Z/p`, with `p = 2` as the default.
//!
//! * [`complex`] filtered simplicial complexes and Vietoris–Rips filtrations.
//! * [`linalg`] sparse vectors and row reduction over `Z/p`.
//! * [`cohomology`] persistent cohomology barcodes with representative cocycles
//!   and class queries at any filtration value.
//! * [`cup`] cup products, supports of ℓ-fold products, the persistent
//!   cup-length diagram and invariant.
//! * [`invariants`] step-function invariants over the interval poset and their
//!   Möbius inversion.
//! * [`flags`] flags, the persistent cup module rank invariant and ℓ-cup
//!   barcodes.
//! * [`distances`] erosion and bottleneck distances.
//! * [`fixtures`] small hand-built filtrations and hardcoded invariants of
//!   Vietoris–Rips filtrations of infinite spaces.
//!
//! ```
//! use percup_core::{cohomology::persistent_cohomology, cup, fixtures, linalg::Field};
//!
//! let complex = fixtures::pinched_torus();
//! let barcode = persistent_cohomology(&complex, Field::Z2);
//! let diagram = cup::cup_length_diagram(&barcode)?;
//! let invariant = cup::invariant_from_diagram(&diagram);
//! assert_eq!(invariant.eval_scalar(2.0, 2.5), 2);
//! # Ok::<(), percup_core::Error>(())
//! ```

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod cohomology;
pub mod complex;
pub mod cup;
pub mod distances;
mod error;
pub mod fixtures;
pub mod flags;
pub mod invariants;
pub mod linalg;

pub use error::{Error, Result};
