use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{rat, CycQ, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero rational with small numerator and denominator.
pub fn small_rational<R: Rng>(r: &mut R) -> Rational {
    loop {
        let n: i64 = r.gen_range(-23..=23);
        let d: i64 = r.gen_range(1..=13);
        if n != 0 && n.abs() != d {
            return rat(n, d);
        }
    }
}

/// `count` pairwise distinct random rationals avoiding 0, 1 and -1, and
/// avoiding x_i x_j = 1 between distinct entries.
pub fn distinct_rationals<R: Rng>(r: &mut R, count: usize) -> Vec<CycQ> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let x = small_rational(r);
        let clash = out.iter().any(|y| *y == x || *y == -x.clone() || (y * &x) == rat(1, 1));
        if !clash {
            out.push(x);
        }
    }
    out.into_iter().map(CycQ::from_rational).collect()
}
