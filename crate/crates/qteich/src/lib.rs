//! Finite-dimensional quantum Teichmüller theory at an odd root of unity.
//!
//! The crate provides, over the cyclic N-dimensional representation of the
//! Weyl pair `UP = q²PU`:
//!
//! * root-of-unity bookkeeping and Gauss sums ([`root`]),
//! * exact Weyl-monomial arithmetic and dense cyclic operators ([`linop`]),
//! * the cyclic quantum dilogarithm on the Fermat curve and the pentagon
//!   parameter transport ([`dilog`]),
//! * dotted triangulations of marked surfaces, their moves and walks
//!   ([`surface`]),
//! * Fermat-point coefficient systems and their mutation ([`coeff`]),
//! * the Ptolemy-groupoid operators `A`, `S`, `T` and mapping-class
//!   intertwiners ([`rep`]),
//! * the cyclic cluster algebra embedding and its compatibility with the
//!   groupoid action ([`cfalg`]),
//! * homology operators, polarizations, reduced intertwiners, and the
//!   small quantum group action ([`homology`]).

pub mod cfalg;
pub mod coeff;
pub mod dilog;
pub mod error;
pub mod homology;
pub mod linop;
pub mod rep;
pub mod root;
pub mod surface;

pub use error::{Error, Result};
pub use root::RootData;
