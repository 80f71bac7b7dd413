use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// A univariate polynomial over the rationals, coefficients stored
/// lowest-degree first. The zero polynomial has an empty coefficient list;
/// otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `n` (the net index variable).
    pub fn var() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, n: i64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Rational::from_integer(BigInt::from(i)));
        }
        Polynomial::new(out)
    }

    /// `p(a*n + b)` for integers `a`, `b` (Horner on the affine argument).
    pub fn compose_affine(&self, a: i64, b: i64) -> Polynomial {
        let arg = Polynomial::new(vec![
            Rational::from_integer(BigInt::from(b)),
            Rational::from_integer(BigInt::from(a)),
        ]);
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&arg).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    /// Cauchy-style root bound: every real root `x` satisfies
    /// `|x| <= max(1, sum_{i<d} |a_i| / |a_d|)`. Returns 0 for constants.
    pub fn root_bound(&self) -> Rational {
        if self.coeffs.len() <= 1 {
            return Rational::zero();
        }
        let lead = self.coeffs.last().unwrap().abs();
        let mut sum = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            sum += c.abs();
        }
        let bound = sum / lead;
        if bound < Rational::one() {
            Rational::one()
        } else {
            bound
        }
    }

    /// Clears denominators: returns integer coefficients of `lcm * p` with
    /// `lcm > 0`, so signs and roots are preserved.
    pub fn cleared(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        self.coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect()
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, div: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&Polynomial::new(sub));
        }
        (Polynomial::new(quot), rem)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading().cloned() {
            a = a.scale(&(Rational::one() / lead));
        }
        a
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &Rational, deg: usize, first: bool) -> fmt::Result {
    let mag = c.abs();
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if deg == 0 {
        write!(f, "{}", mag)
    } else {
        if !mag.is_one() {
            write!(f, "{}", mag)?;
        }
        if deg == 1 {
            write!(f, "n")
        } else {
            write!(f, "n^{}", deg)
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            fmt_term(f, c, deg, first)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn trims_leading_zeros() {
        let q = Polynomial::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(q.degree(), Some(0));
        assert!(Polynomial::new(vec![rat(0)]).is_zero());
    }

    #[test]
    fn eval_and_arith() {
        let q = p(&[1, 2, 3]); // 3n^2 + 2n + 1
        assert_eq!(q.eval_int(2), rat(17));
        assert_eq!(q.add(&q.neg()), Polynomial::zero());
        assert_eq!(p(&[0, 1]).mul(&p(&[0, 1])), p(&[0, 0, 1]));
    }

    #[test]
    fn compose_affine_shifts() {
        // (n+1)^2 = n^2 + 2n + 1
        let sq = p(&[0, 0, 1]);
        assert_eq!(sq.compose_affine(1, 1), p(&[1, 2, 1]));
        // p(2n + 3) for p = n: 2n + 3
        assert_eq!(p(&[0, 1]).compose_affine(2, 3), p(&[3, 2]));
    }

    #[test]
    fn root_bound_covers_roots() {
        // (n-3)(n-5) = n^2 - 8n + 15: roots 3, 5; bound = 23
        let q = p(&[15, -8, 1]);
        assert!(q.root_bound() >= rat(5));
    }

    #[test]
    fn gcd_and_div_rem() {
        let a = p(&[-1, 0, 1]); // n^2 - 1
        let b = p(&[1, 1]); // n + 1
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(a.gcd(&b), b); // n + 1 is already monic
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[1, 4]).to_string(), "4n + 1");
        assert_eq!(p(&[-3, 0, 1]).to_string(), "n^2 - 3");
        assert_eq!(
            Polynomial::new(vec![ratio(1, 2)]).to_string(),
            "1/2"
        );
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
