//! Exact distribution arithmetic for the Kruglov operator `K`, the random
//! permutation operators `T_n` and their approximants `H_m`, plus norm
//! evaluators for Lorentz, Marcinkiewicz and exponential Orlicz spaces.

pub mod dist;
pub mod error;
pub mod operators;
pub mod spaces;
pub mod exactnum;
pub mod stepfn;
pub mod verify;

pub use dist::{Atom, DiscreteDistribution};
pub use error::{Error, Result};
pub use exactnum::{ExactRational, Scalar};
pub use stepfn::{Piece, StepFunction};
