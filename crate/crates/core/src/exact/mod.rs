//! Exact arithmetic: rationals, the cyclotomic field Q(q), Laurent polynomials.

mod cyc;
mod laurent;
pub mod sample;

pub use cyc::{fmt_rational, parse_rational, rat, rat_to_f64, CycQ};
pub use laurent::{Assignment, Monomial, MultiLaurent, VarId, VarKind};

pub type Rational = num_rational::BigRational;
