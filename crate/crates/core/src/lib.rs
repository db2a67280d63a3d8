//! Exact Haar-state calculus for the free orthogonal, symmetric and
//! hyperoctahedral quantum groups, classification of their tracial central
//! states, and the weight-lattice combinatorics behind the compact Lie case.

pub mod cache;
pub mod central;
pub mod error;
pub mod fusion;
pub mod matrix;
mod modular;
pub mod partition;
pub mod rational;
pub mod roots;
pub mod suite;
pub mod tcs;
pub mod weingarten;

pub use error::{Error, Result};
pub use rational::Rational;
pub use weingarten::{Caps, Engine, QGFamily};
