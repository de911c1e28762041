//! Groundstate overlaps and boundary emptiness formation probabilities of
//! the periodic XXZ chain at Delta = -1/2, computed several independent ways.

use std::fmt;
use std::str::FromStr;

pub mod closed;
pub mod det;
pub mod error;
pub mod exact;
pub mod qkz;
pub mod scalar;
pub mod spin;
pub mod verify;

pub use error::{Error, Result};

/// Magnetisation label of the groundstate: +1 or -1 for odd N, 0 for even N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mu {
    Plus,
    Minus,
    Zero,
}

impl Mu {
    pub fn for_parity(n_sites: usize) -> &'static [Mu] {
        if n_sites % 2 == 1 {
            &[Mu::Plus, Mu::Minus]
        } else {
            &[Mu::Zero]
        }
    }

    /// Number of up spins in the groundstate sector.
    pub fn n_up(self, n_sites: usize) -> usize {
        match self {
            Mu::Plus => n_sites.div_ceil(2),
            Mu::Minus => n_sites / 2,
            Mu::Zero => n_sites / 2,
        }
    }

    pub fn valid_for(self, n_sites: usize) -> bool {
        match self {
            Mu::Zero => n_sites >= 2 && n_sites.is_multiple_of(2),
            _ => n_sites % 2 == 1,
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mu::Plus => "+",
            Mu::Minus => "-",
            Mu::Zero => "0",
        })
    }
}

impl FromStr for Mu {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" | "+1" | "1" => Ok(Mu::Plus),
            "minus" | "-" | "-1" => Ok(Mu::Minus),
            "zero" | "0" => Ok(Mu::Zero),
            _ => Err(Error::Parse(format!("unknown magnetisation {s:?}"))),
        }
    }
}
