//! Exact rational machinery for Farkas-type theorems on polyhedral convex systems.

pub mod catalog;
pub mod convexfn;
pub mod error;
pub mod exactlp;
pub mod farkas;
pub mod limits;
pub mod optimal;
pub mod oracle;
pub mod ratgeom;
pub mod suite;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{QVec, Rational};
