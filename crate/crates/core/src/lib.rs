//! Exact and enclosure-based computation with univoque bases.
//!
//! Sequences are eventually periodic digit words or deterministic digit
//! streams; bases are rational enclosures produced by exact-sign bisection.

pub mod cantor;
pub mod components;
pub mod error;
pub mod expand;
pub mod matching;
pub mod rational;
pub mod seq;
pub mod solve;

pub use error::{Error, Result};
pub use rational::{Interval, Rational, Verdict};
pub use seq::{DigitStreamGenerator, EventuallyPeriodicWord, FiniteWord};
pub use solve::BaseEnclosure;
