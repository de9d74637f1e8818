//! Symbolic GF(2) Boolean functions and layered AES-128 equation systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`boolfn`]: truth tables and the Möbius transform between a truth table
//!   and the coefficient table of its algebraic normal form.
//! * [`anf`]: sparse ANF polynomials over a shared, segmented variable space.
//! * [`aes`]: per-bit ANF builders for every AES-128 sub-function and a
//!   byte-level reference cipher used as the verification oracle.
//! * [`system`]: the layered encryption and decryption systems, one stage of
//!   128 equations per cipher step, with fresh variables for every layer.
//! * [`serial`]: the one-file-per-bit monomial line format.

pub mod aes;
pub mod anf;
mod bits;
pub mod boolfn;
mod error;
pub mod serial;
pub mod system;

pub use crate::aes::{Block, RoundKeySchedule};
pub use crate::anf::{Anf, Assignment, Monomial, Segment, VarSpace};
pub use crate::bits::BitMask;
pub use crate::boolfn::TruthTable;
pub use crate::error::{Error, Result};
pub use crate::system::{Direction, EquationSystem, Stage, StageKind};
