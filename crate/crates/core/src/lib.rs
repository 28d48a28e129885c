//! Exact enumeration and popularity analysis of consecutive length-3
//! patterns in permutation avoidance classes.
//!
//! * [`perm`]: permutations, consecutive patterns, symmetries
//! * [`count`]: class sizes and pattern popularities (enumeration and DP)
//! * [`closed`]: closed forms and recurrences over big integers
//! * [`series`]: truncated exact power series, EGF identities, saddle bounds
//! * [`foata`]: the Foata bijection between involutions and `Av(123,132)`
//! * [`analysis`]: popularity sequences, limit estimates, class table
//! * [`cli`]: the `patpop` command line front end

pub mod error;
pub mod perm;
pub mod count;
pub mod closed;
pub mod series;
pub mod foata;
pub mod analysis;
pub mod cli;

pub use error::{Error, Result};
