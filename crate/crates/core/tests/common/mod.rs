//! Shared deterministic generators for the randomized suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use roughlat_core::exact::{Polynomial, Rational, RationalFunction};
use roughlat_core::lattice::{Elem, Space};
use roughlat_core::net::NetSpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den_max: i64) -> Rational {
    let n = rng.gen_range(lo..=hi);
    let d = rng.gen_range(1..=den_max);
    ratio(n, d)
}

pub fn rand_qvec(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Elem {
    Elem::qvec((0..dim).map(|_| rand_rational(rng, lo, hi, 4)).collect()).unwrap()
}

pub fn rand_nonneg_qvec(rng: &mut ChaCha8Rng, dim: usize, hi: i64) -> Elem {
    Elem::qvec((0..dim).map(|_| rand_rational(rng, 0, hi, 4)).collect()).unwrap()
}

/// A random eventually periodic net with small prefix and cycle.
pub fn rand_ep(rng: &mut ChaCha8Rng, dim: usize) -> NetSpec {
    let p = rng.gen_range(0..=3);
    let k = rng.gen_range(1..=4);
    let prefix = (0..p).map(|_| rand_qvec(rng, dim, -6, 6)).collect();
    let cycle = (0..k).map(|_| rand_qvec(rng, dim, -6, 6)).collect();
    NetSpec::eventually_periodic(Space::QVec(dim), prefix, cycle).unwrap()
}

/// `c + a / (n + b)` with small integers: convergent, pole-free from 1.
pub fn rand_hyperbola(rng: &mut ChaCha8Rng, decreasing: bool) -> RationalFunction {
    let c = rng.gen_range(-5i64..=5);
    let a = if decreasing {
        rng.gen_range(0i64..=5)
    } else {
        rng.gen_range(-5i64..=5)
    };
    let b = rng.gen_range(0i64..=4);
    let num = Polynomial::new(vec![rat(c * b + a), rat(c)]); // c(n+b) + a
    let den = Polynomial::new(vec![rat(b), rat(1)]);
    RationalFunction::new(num, den, 1).unwrap()
}

pub fn rand_rt(rng: &mut ChaCha8Rng, dim: usize) -> NetSpec {
    let coords = (0..dim).map(|_| rand_hyperbola(rng, false)).collect();
    NetSpec::rational_term(Space::QVec(dim), coords).unwrap()
}

pub fn rand_decreasing_rt(rng: &mut ChaCha8Rng, dim: usize) -> NetSpec {
    let coords = (0..dim).map(|_| rand_hyperbola(rng, true)).collect();
    NetSpec::rational_term(Space::QVec(dim), coords).unwrap()
}

pub fn rand_ppr(rng: &mut ChaCha8Rng, dim: usize) -> NetSpec {
    let k = rng.gen_range(1..=3);
    let cycle = (0..k).map(|_| rand_qvec(rng, dim, -5, 5)).collect();
    let decay = (0..dim).map(|_| rand_hyperbola(rng, false)).collect();
    NetSpec::periodic_plus_rational(Space::QVec(dim), cycle, decay).unwrap()
}

/// One of the three tail-decidable kinds, uniformly.
pub fn rand_decidable(rng: &mut ChaCha8Rng, dim: usize) -> NetSpec {
    match rng.gen_range(0..3) {
        0 => rand_ep(rng, dim),
        1 => rand_rt(rng, dim),
        _ => rand_ppr(rng, dim),
    }
}

/// A roughness that makes `x` a member: `limsup |net - x|` plus a random
/// nonnegative slack.
pub fn admissible_roughness(
    rng: &mut ChaCha8Rng,
    net: &NetSpec,
    x: &Elem,
) -> Option<Elem> {
    let tb = roughlat_core::net::limsup_abs_dev(net, x).ok()?;
    let mut coords = Vec::new();
    for l in &tb.limsup {
        match l {
            roughlat_core::exact::Limit::Finite(v) => {
                coords.push(v + rand_rational(rng, 0, 3, 3))
            }
            _ => return None,
        }
    }
    Some(Elem::qvec(coords).unwrap())
}
