use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// A continuous piecewise-linear function on `[0,1]`, stored as strictly
/// increasing breakpoints (first 0, last 1) with the value at each.
/// Between consecutive breakpoints the function interpolates linearly.
///
/// Representations are normalized: an interior breakpoint where the slope
/// does not change is dropped, so equal functions compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct PwLin {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl PwLin {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(Error::InvalidConstruction(
                "piecewise-linear function needs matching breakpoint/value lists of length >= 2"
                    .into(),
            ));
        }
        if !breakpoints.first().unwrap().is_zero() || *breakpoints.last().unwrap() != Rational::from_integer(1.into()) {
            return Err(Error::InvalidConstruction(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConstruction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let mut f = PwLin {
            breakpoints,
            values,
        };
        f.normalize();
        Ok(f)
    }

    pub fn constant(c: Rational) -> Self {
        PwLin {
            breakpoints: vec![Rational::zero(), Rational::from_integer(1.into())],
            values: vec![c.clone(), c],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn normalize(&mut self) {
        let mut i = 1;
        while i + 1 < self.breakpoints.len() {
            let s0 = slope(
                (&self.breakpoints[i - 1], &self.values[i - 1]),
                (&self.breakpoints[i], &self.values[i]),
            );
            let s1 = slope(
                (&self.breakpoints[i], &self.values[i]),
                (&self.breakpoints[i + 1], &self.values[i + 1]),
            );
            if s0 == s1 {
                self.breakpoints.remove(i);
                self.values.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t < &self.breakpoints[0] || t > self.breakpoints.last().unwrap() {
            return Err(Error::Precondition {
                op: "piecewise-linear evaluation",
                detail: format!("argument {} outside [0,1]", t),
            });
        }
        let i = match self.breakpoints.iter().position(|b| b >= t) {
            Some(0) => return Ok(self.values[0].clone()),
            Some(i) => i,
            None => unreachable!(),
        };
        if &self.breakpoints[i] == t {
            return Ok(self.values[i].clone());
        }
        let (t0, v0) = (&self.breakpoints[i - 1], &self.values[i - 1]);
        let (t1, v1) = (&self.breakpoints[i], &self.values[i]);
        Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
    }

    /// The union of both breakpoint grids.
    fn merged_grid(&self, other: &PwLin) -> Vec<Rational> {
        let mut grid: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        grid.sort();
        grid.dedup();
        grid
    }

    fn on_grid(&self, grid: &[Rational]) -> Vec<Rational> {
        grid.iter().map(|t| self.eval(t).unwrap()).collect()
    }

    fn zip_linear(&self, other: &PwLin, op: impl Fn(&Rational, &Rational) -> Rational) -> PwLin {
        let grid = self.merged_grid(other);
        let a = self.on_grid(&grid);
        let b = other.on_grid(&grid);
        let values = a.iter().zip(b.iter()).map(|(x, y)| op(x, y)).collect();
        let mut f = PwLin {
            breakpoints: grid,
            values,
        };
        f.normalize();
        f
    }

    pub fn add(&self, other: &PwLin) -> PwLin {
        self.zip_linear(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PwLin) -> PwLin {
        self.zip_linear(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PwLin {
        PwLin {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| -v.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> PwLin {
        let mut f = PwLin {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        };
        f.normalize();
        f
    }

    /// Pointwise join/meet. On each shared piece both functions are linear,
    /// so they cross at most once and the crossing point is rational; it is
    /// inserted as a breakpoint before taking the pointwise extremum.
    fn envelope(&self, other: &PwLin, upper: bool) -> PwLin {
        let grid = self.merged_grid(other);
        let a = self.on_grid(&grid);
        let b = other.on_grid(&grid);
        let mut points: Vec<(Rational, Rational)> = Vec::with_capacity(grid.len() + 4);
        for i in 0..grid.len() {
            let d = &a[i] - &b[i];
            if i > 0 {
                let dp = &a[i - 1] - &b[i - 1];
                if (dp.is_positive() && d.is_negative()) || (dp.is_negative() && d.is_positive()) {
                    // strict sign change inside the piece: rational crossing
                    let t0 = &grid[i - 1];
                    let t1 = &grid[i];
                    let tc = t0 + (t1 - t0) * &dp / (&dp - &d);
                    let vc = self.eval(&tc).unwrap();
                    points.push((tc, vc));
                }
            }
            let v = if (d.is_positive() || d.is_zero()) == upper {
                a[i].clone()
            } else {
                b[i].clone()
            };
            points.push((grid[i].clone(), v));
        }
        let (breakpoints, values) = points.into_iter().unzip();
        let mut f = PwLin {
            breakpoints,
            values,
        };
        f.normalize();
        f
    }

    pub fn join(&self, other: &PwLin) -> PwLin {
        self.envelope(other, true)
    }

    pub fn meet(&self, other: &PwLin) -> PwLin {
        self.envelope(other, false)
    }

    pub fn abs(&self) -> PwLin {
        self.join(&self.neg())
    }

    /// Pointwise order. On the merged grid both sides are linear between
    /// consecutive breakpoints, so comparing at the grid points is complete.
    pub fn leq(&self, other: &PwLin) -> bool {
        let grid = self.merged_grid(other);
        let a = self.on_grid(&grid);
        let b = other.on_grid(&grid);
        a.iter().zip(b.iter()).all(|(x, y)| x <= y)
    }

    fn piece_slopes(&self) -> Vec<Rational> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| slope((&t[0], &v[0]), (&t[1], &v[1])))
            .collect()
    }

    /// `sup |f| + sup |df/dt|` over `[0,1]`, both exact. The supremum of a
    /// piecewise-linear function is attained at a breakpoint.
    pub fn norm(&self) -> Rational {
        let sup = self
            .values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let steep = self
            .piece_slopes()
            .into_iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        sup + steep
    }
}

fn slope(p0: (&Rational, &Rational), p1: (&Rational, &Rational)) -> Rational {
    (p1.1 - p0.1) / (p1.0 - p0.0)
}

impl fmt::Display for PwLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pwlin{{")?;
        for (i, (t, v)) in self.breakpoints.iter().zip(self.values.iter()).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", t, v)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PwLin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
