use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};

/// A limit at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    PlusInfinity,
    MinusInfinity,
}

impl Limit {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Limit::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Limit::Finite(v) if v.is_zero())
    }

    /// `self <= bound` in the extended order.
    pub fn le_rational(&self, bound: &Rational) -> bool {
        match self {
            Limit::Finite(v) => v <= bound,
            Limit::PlusInfinity => false,
            Limit::MinusInfinity => true,
        }
    }

    pub fn max(self, other: Limit) -> Limit {
        match (self, other) {
            (Limit::PlusInfinity, _) | (_, Limit::PlusInfinity) => Limit::PlusInfinity,
            (Limit::MinusInfinity, x) | (x, Limit::MinusInfinity) => x,
            (Limit::Finite(a), Limit::Finite(b)) => Limit::Finite(a.max(b)),
        }
    }

    pub fn min(self, other: Limit) -> Limit {
        match (self, other) {
            (Limit::MinusInfinity, _) | (_, Limit::MinusInfinity) => Limit::MinusInfinity,
            (Limit::PlusInfinity, x) | (x, Limit::PlusInfinity) => x,
            (Limit::Finite(a), Limit::Finite(b)) => Limit::Finite(a.min(b)),
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(v) => write!(f, "{}", v),
            Limit::PlusInfinity => write!(f, "+inf"),
            Limit::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// Verdict of a universally quantified check over integer indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForallVerdict {
    True,
    /// The least violating index.
    FalseAt(u64),
}

impl ForallVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ForallVerdict::True)
    }
}

/// The eventual sign of a rational function at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

/// A quotient of polynomials in the net index `n`, guaranteed pole-free on
/// the integers `n >= valid_from`. Reduced by the polynomial gcd and
/// normalized so the denominator is monic.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
    valid_from: u64,
}

fn int_sign(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of an integer-coefficient polynomial at integer `n` (Horner).
fn sign_at(coeffs: &[BigInt], n: u64) -> i32 {
    let x = BigInt::from(n);
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    int_sign(&acc)
}

fn ceil_to_u64(r: &Rational) -> u64 {
    let c = r.ceil();
    let n = c.numer();
    if n.is_negative() {
        0
    } else {
        u64::try_from(n.clone()).unwrap_or(u64::MAX)
    }
}

impl RationalFunction {
    /// Builds `num/den` valid on integers `n >= valid_from`. Fails if the
    /// reduced denominator vanishes at any integer in the valid range.
    pub fn new(num: Polynomial, den: Polynomial, valid_from: u64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidConstruction(
                "rational function with zero denominator".into(),
            ));
        }
        if valid_from == 0 {
            return Err(Error::InvalidConstruction(
                "valid_from must be a positive index".into(),
            ));
        }
        let (num, den) = if num.is_zero() {
            (Polynomial::zero(), Polynomial::one())
        } else {
            let g = num.gcd(&den);
            let (n, rn) = num.div_rem(&g);
            let (d, rd) = den.div_rem(&g);
            debug_assert!(rn.is_zero() && rd.is_zero());
            let lead = d.leading().unwrap().clone();
            (n.scale(&(Rational::from_integer(1.into()) / &lead)), d.scale(&(Rational::from_integer(1.into()) / lead)))
        };
        // No integer pole at or past valid_from: all roots lie within the
        // Cauchy bound, so an exhaustive scan below it is a complete check.
        let cleared = den.cleared();
        if cleared.len() > 1 {
            let bound = ceil_to_u64(&den.root_bound());
            for n in valid_from..=bound.max(valid_from) {
                if sign_at(&cleared, n) == 0 {
                    return Err(Error::InvalidConstruction(format!(
                        "denominator vanishes at n = {}",
                        n
                    )));
                }
            }
        }
        Ok(RationalFunction {
            num,
            den,
            valid_from,
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction::new(p, Polynomial::one(), 1).expect("polynomials have no poles")
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn valid_from(&self) -> u64 {
        self.valid_from
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_constant() && self.num.is_constant() {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    pub fn eval(&self, n: u64) -> Result<Rational> {
        if n < self.valid_from {
            return Err(Error::Precondition {
                op: "rational function evaluation",
                detail: format!("index {} below valid_from {}", n, self.valid_from),
            });
        }
        let x = Rational::from_integer(BigInt::from(n));
        Ok(self.num.eval(&x) / self.den.eval(&x))
    }

    pub fn add(&self, other: &RationalFunction) -> Result<Self> {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
            self.valid_from.max(other.valid_from),
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
            valid_from: self.valid_from,
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<Self> {
        RationalFunction::new(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            self.valid_from.max(other.valid_from),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
            valid_from: self.valid_from,
        }
    }

    /// `f(a*n + b)` for a positive stride `a` and offset `b >= 0`; the result
    /// is valid wherever the substituted argument is.
    pub fn compose_affine(&self, a: i64, b: i64) -> Result<Self> {
        assert!(a > 0, "stride must be positive");
        // smallest n >= 1 with a*n + b >= valid_from
        let vf = self.valid_from as i64;
        let need = if b >= vf { 1 } else { (vf - b + a - 1) / a } as u64;
        RationalFunction::new(
            self.num.compose_affine(a, b),
            self.den.compose_affine(a, b),
            need.max(1),
        )
    }

    /// Exact limit as `n -> infinity`: 0 when the numerator degree is
    /// smaller, the ratio of leading coefficients when equal, a signed
    /// infinity otherwise.
    pub fn limit(&self) -> Limit {
        if self.num.is_zero() {
            return Limit::Finite(Rational::zero());
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        if dn < dd {
            Limit::Finite(Rational::zero())
        } else if dn == dd {
            Limit::Finite(self.num.leading().unwrap() / self.den.leading().unwrap())
        } else {
            let s = self.num.leading().unwrap().is_positive()
                == self.den.leading().unwrap().is_positive();
            if s {
                Limit::PlusInfinity
            } else {
                Limit::MinusInfinity
            }
        }
    }

    /// Decides `f(n) >= 0` for every integer `n >= n0`.
    ///
    /// The sign of `f(n)` equals the sign of `num(n) * den(n)`. All sign
    /// changes of that product polynomial happen below its Cauchy root
    /// bound, so the check evaluates exhaustively up to the bound and reads
    /// the leading coefficient beyond it.
    pub fn forall_nonneg(&self, n0: u64) -> Result<ForallVerdict> {
        if n0 < self.valid_from {
            return Err(Error::Precondition {
                op: "forall_n_nonneg",
                detail: format!("n0 = {} below valid_from {}", n0, self.valid_from),
            });
        }
        if self.num.is_zero() {
            return Ok(ForallVerdict::True);
        }
        let product = self.num.mul(&self.den);
        let cleared = product.cleared();
        let top = ceil_to_u64(&product.root_bound()).max(n0);
        for n in n0..=top {
            if sign_at(&cleared, n) < 0 {
                return Ok(ForallVerdict::FalseAt(n));
            }
        }
        if int_sign(cleared.last().unwrap()) < 0 {
            Ok(ForallVerdict::FalseAt(top + 1))
        } else {
            Ok(ForallVerdict::True)
        }
    }

    /// The constant sign of `f(n)` for every `n` past the root bound.
    pub fn eventual_sign(&self) -> Sign {
        if self.num.is_zero() {
            return Sign::Zero;
        }
        let s = int_sign(self.num.cleared().last().unwrap())
            * int_sign(self.den.cleared().last().unwrap());
        if s > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// All integer zeros `n >= n0` of `f` (there are finitely many unless
    /// `f` is identically zero, in which case `None`).
    pub fn integer_zeros_from(&self, n0: u64) -> Option<Vec<u64>> {
        if self.num.is_zero() {
            return None;
        }
        let cleared = self.num.cleared();
        if cleared.len() == 1 {
            return Some(Vec::new());
        }
        let top = ceil_to_u64(&self.num.root_bound());
        let mut out = Vec::new();
        for n in n0.max(self.valid_from)..=top.max(n0) {
            if n >= n0 && sign_at(&cleared, n) == 0 {
                out.push(n);
            }
        }
        Some(out)
    }

    /// An index past all turning points and poles: beyond it `f` is weakly
    /// monotone on the reals (hence on the integers).
    pub fn monotone_onset(&self) -> u64 {
        let deriv_num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let b1 = ceil_to_u64(&deriv_num.root_bound());
        let b2 = ceil_to_u64(&self.den.root_bound());
        let b3 = ceil_to_u64(&self.num.root_bound());
        (b1.max(b2).max(b3) + 1).max(self.valid_from)
    }

    /// Sign of the derivative past `monotone_onset`: `Positive` means
    /// eventually strictly increasing, `Zero` means constant.
    pub fn tail_direction(&self) -> Sign {
        let deriv_num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        if deriv_num.is_zero() {
            return Sign::Zero;
        }
        // denominator of f' is den^2 > 0
        if int_sign(deriv_num.cleared().last().unwrap()) > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Exact supremum of `{ f(n0 + step*i) : i >= 0 }` for `step >= 1`.
    pub fn sup_on_grid(&self, n0: u64, step: u64) -> Result<Limit> {
        self.extremum_on_grid(n0, step, true)
    }

    /// Exact infimum of `{ f(n0 + step*i) : i >= 0 }`.
    pub fn inf_on_grid(&self, n0: u64, step: u64) -> Result<Limit> {
        self.extremum_on_grid(n0, step, false)
    }

    fn extremum_on_grid(&self, n0: u64, step: u64, sup: bool) -> Result<Limit> {
        assert!(step >= 1);
        if n0 < self.valid_from {
            return Err(Error::Precondition {
                op: "grid extremum",
                detail: format!("start {} below valid_from {}", n0, self.valid_from),
            });
        }
        let onset = self.monotone_onset();
        let mut best: Option<Rational> = None;
        let mut n = n0;
        // exhaust the pre-monotone region plus one grid point beyond it
        loop {
            let v = self.eval(n)?;
            best = Some(match best {
                None => v,
                Some(b) => {
                    if sup {
                        b.max(v)
                    } else {
                        b.min(v)
                    }
                }
            });
            if n > onset {
                break;
            }
            n += step;
        }
        let best = best.unwrap();
        let toward = match self.tail_direction() {
            Sign::Zero => return Ok(Limit::Finite(best)),
            Sign::Positive => sup,
            Sign::Negative => !sup,
        };
        if !toward {
            // the tail moves away from the extremum; the scan already saw it
            return Ok(Limit::Finite(best));
        }
        match self.limit() {
            Limit::Finite(l) => Ok(Limit::Finite(if sup { best.max(l) } else { best.min(l) })),
            inf => Ok(inf),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let scaled = self.num.scale(&(Rational::from_integer(1.into()) / self.den.coeff(0)));
            return write!(f, "{}", scaled);
        }
        let num_simple = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        let den_simple = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if num_simple {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if den_simple {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({}, n >= {})", self, self.valid_from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn poly(coeffs: &[i64]) -> Polynomial {
        Polynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(num), poly(den), 1).unwrap()
    }

    #[test]
    fn limit_by_degree_comparison() {
        assert_eq!(rf(&[1, 2], &[0, 1]).limit(), Limit::Finite(rat(2))); // (2n+1)/n
        assert_eq!(rf(&[1], &[0, 1]).limit(), Limit::Finite(rat(0))); // 1/n
        assert_eq!(rf(&[1, 0, 1], &[0, 1]).limit(), Limit::PlusInfinity); // (n^2+1)/n
        assert_eq!(rf(&[0, 0, -1], &[0, 1]).limit(), Limit::MinusInfinity);
        assert_eq!(RationalFunction::zero().limit(), Limit::Finite(rat(0)));
    }

    #[test]
    fn forall_nonneg_examples() {
        // (n-3)/n from 1 fails first at 1, from 3 holds
        let f = rf(&[-3, 1], &[0, 1]);
        assert_eq!(f.forall_nonneg(1).unwrap(), ForallVerdict::FalseAt(1));
        assert_eq!(f.forall_nonneg(3).unwrap(), ForallVerdict::True);
        // (n+1)/n >= 0 for all n >= 1
        assert_eq!(
            rf(&[1, 1], &[0, 1]).forall_nonneg(1).unwrap(),
            ForallVerdict::True
        );
        // eventually negative
        assert_eq!(
            rf(&[3, -1], &[0, 1]).forall_nonneg(1).unwrap(),
            ForallVerdict::FalseAt(4)
        );
    }

    #[test]
    fn eventual_signs() {
        assert_eq!(rf(&[1], &[0, 1]).eventual_sign(), Sign::Positive); // 1/n
        assert_eq!(rf(&[3, -1], &[0, 1]).eventual_sign(), Sign::Negative); // (3-n)/n
        assert_eq!(RationalFunction::zero().eventual_sign(), Sign::Zero);
    }

    #[test]
    fn rejects_integer_poles() {
        // 1/(n-4) is invalid from 1 but fine from 5
        assert!(RationalFunction::new(poly(&[1]), poly(&[-4, 1]), 1).is_err());
        assert!(RationalFunction::new(poly(&[1]), poly(&[-4, 1]), 5).is_ok());
    }

    #[test]
    fn reduction_cancels_common_factors() {
        // (n^2 - 1)/(n + 1) reduces to n - 1
        let f = RationalFunction::new(poly(&[-1, 0, 1]), poly(&[1, 1]), 1).unwrap();
        assert_eq!(f.den().degree(), Some(0));
        assert_eq!(f.eval(5).unwrap(), rat(4));
    }

    #[test]
    fn grid_extrema() {
        // 1/n on n >= 1: sup = 1 (attained), inf = 0 (the limit)
        let f = rf(&[1], &[0, 1]);
        assert_eq!(f.sup_on_grid(1, 1).unwrap(), Limit::Finite(rat(1)));
        assert_eq!(f.inf_on_grid(1, 1).unwrap(), Limit::Finite(rat(0)));
        // (n^2+1)/n diverges upward; min at n=1 is 2
        let g = rf(&[1, 0, 1], &[0, 1]);
        assert_eq!(g.sup_on_grid(1, 1).unwrap(), Limit::PlusInfinity);
        assert_eq!(g.inf_on_grid(1, 1).unwrap(), Limit::Finite(rat(2)));
        // 1 - 1/n increases to 1, never attained: sup is the limit
        let h = rf(&[-1, 1], &[0, 1]);
        assert_eq!(h.sup_on_grid(1, 1).unwrap(), Limit::Finite(rat(1)));
        assert_eq!(h.inf_on_grid(1, 1).unwrap(), Limit::Finite(rat(0)));
        // odd grid only
        assert_eq!(f.sup_on_grid(3, 2).unwrap(), Limit::Finite(rat(1) / rat(3)));
    }

    #[test]
    fn integer_zeros() {
        let f = rf(&[-3, 1], &[0, 1]); // zero at 3
        assert_eq!(f.integer_zeros_from(1).unwrap(), vec![3]);
        assert_eq!(f.integer_zeros_from(4).unwrap(), Vec::<u64>::new());
        assert!(RationalFunction::zero().integer_zeros_from(1).is_none());
    }

    #[test]
    fn display_round_forms() {
        assert_eq!(rf(&[1, 4], &[0, 1]).to_string(), "(4n + 1)/n");
        assert_eq!(rf(&[1], &[0, 1]).to_string(), "1/n");
        assert_eq!(rf(&[2], &[1]).to_string(), "2");
    }
}
