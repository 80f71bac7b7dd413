//! The three concrete Riesz spaces and their exact lattice operations.

mod boxes;
mod pwlin;

pub use boxes::OrderBox;
pub use pwlin::PwLin;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};

/// Tag for one of the supported Riesz spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// `Q^dim` with the coordinatewise order (Dedekind complete).
    QVec(usize),
    /// `Q^2` with the lexicographic order (totally ordered, not complete).
    Lex,
    /// Continuous piecewise-linear functions on `[0,1]`, pointwise order.
    PwLin,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::QVec(d) => write!(f, "qvec {}", d),
            Space::Lex => write!(f, "lex"),
            Space::PwLin => write!(f, "pwlin"),
        }
    }
}

/// An element of one of the three spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Elem {
    QVec(Vec<Rational>),
    Lex(Rational, Rational),
    PwLin(PwLin),
}

impl Elem {
    pub fn qvec(coords: Vec<Rational>) -> Result<Elem> {
        if coords.is_empty() {
            return Err(Error::InvalidConstruction(
                "coordinate vector must be nonempty".into(),
            ));
        }
        Ok(Elem::QVec(coords))
    }

    pub fn scalar(v: Rational) -> Elem {
        Elem::QVec(vec![v])
    }

    pub fn lex(first: Rational, second: Rational) -> Elem {
        Elem::Lex(first, second)
    }

    pub fn pwlin(f: PwLin) -> Elem {
        Elem::PwLin(f)
    }

    pub fn space(&self) -> Space {
        match self {
            Elem::QVec(c) => Space::QVec(c.len()),
            Elem::Lex(..) => Space::Lex,
            Elem::PwLin(..) => Space::PwLin,
        }
    }

    /// The zero element of a space.
    pub fn zero(space: Space) -> Elem {
        match space {
            Space::QVec(d) => Elem::QVec(vec![Rational::zero(); d]),
            Space::Lex => Elem::Lex(Rational::zero(), Rational::zero()),
            Space::PwLin => Elem::PwLin(PwLin::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Elem::zero(self.space())
    }

    /// Coordinates for the coordinate-indexed spaces (QVec and Lex).
    pub fn coords(&self) -> Option<Vec<Rational>> {
        match self {
            Elem::QVec(c) => Some(c.clone()),
            Elem::Lex(a, b) => Some(vec![a.clone(), b.clone()]),
            Elem::PwLin(..) => None,
        }
    }

    pub fn as_pwlin(&self) -> Option<&PwLin> {
        match self {
            Elem::PwLin(f) => Some(f),
            _ => None,
        }
    }
}

fn check_same(op: &'static str, a: &Elem, b: &Elem) -> Result<()> {
    let _ = op;
    if a.space() != b.space() {
        return Err(Error::MixedSpace {
            left: a.space(),
            right: b.space(),
        });
    }
    Ok(())
}

/// Partial order: coordinatewise on QVec, lexicographic on Lex, pointwise
/// on PwLin.
pub fn leq(a: &Elem, b: &Elem) -> Result<bool> {
    check_same("leq", a, b)?;
    Ok(match (a, b) {
        (Elem::QVec(x), Elem::QVec(y)) => x.iter().zip(y.iter()).all(|(u, v)| u <= v),
        (Elem::Lex(x1, y1), Elem::Lex(x2, y2)) => x1 < x2 || (x1 == x2 && y1 <= y2),
        (Elem::PwLin(f), Elem::PwLin(g)) => f.leq(g),
        _ => unreachable!(),
    })
}

pub fn lt(a: &Elem, b: &Elem) -> Result<bool> {
    Ok(leq(a, b)? && a != b)
}

fn zip_coords(
    op: &'static str,
    a: &Elem,
    b: &Elem,
    f: impl Fn(&Rational, &Rational) -> Rational,
    g: impl Fn(&PwLin, &PwLin) -> PwLin,
) -> Result<Elem> {
    check_same(op, a, b)?;
    Ok(match (a, b) {
        (Elem::QVec(x), Elem::QVec(y)) => {
            Elem::QVec(x.iter().zip(y.iter()).map(|(u, v)| f(u, v)).collect())
        }
        (Elem::Lex(x1, y1), Elem::Lex(x2, y2)) => Elem::Lex(f(x1, x2), f(y1, y2)),
        (Elem::PwLin(p), Elem::PwLin(q)) => Elem::PwLin(g(p, q)),
        _ => unreachable!(),
    })
}

pub fn add(a: &Elem, b: &Elem) -> Result<Elem> {
    zip_coords("add", a, b, |u, v| u + v, PwLin::add)
}

pub fn sub(a: &Elem, b: &Elem) -> Result<Elem> {
    zip_coords("sub", a, b, |u, v| u - v, PwLin::sub)
}

pub fn neg(a: &Elem) -> Elem {
    match a {
        Elem::QVec(x) => Elem::QVec(x.iter().map(|u| -u.clone()).collect()),
        Elem::Lex(x, y) => Elem::Lex(-x.clone(), -y.clone()),
        Elem::PwLin(f) => Elem::PwLin(f.neg()),
    }
}

pub fn scale(c: &Rational, a: &Elem) -> Elem {
    match a {
        Elem::QVec(x) => Elem::QVec(x.iter().map(|u| u * c).collect()),
        Elem::Lex(x, y) => Elem::Lex(x * c, y * c),
        Elem::PwLin(f) => Elem::PwLin(f.scale(c)),
    }
}

/// Supremum of two elements. Lex is totally ordered, so the join is simply
/// the larger element.
pub fn join(a: &Elem, b: &Elem) -> Result<Elem> {
    check_same("join", a, b)?;
    Ok(match (a, b) {
        (Elem::QVec(x), Elem::QVec(y)) => Elem::QVec(
            x.iter()
                .zip(y.iter())
                .map(|(u, v)| u.max(v).clone())
                .collect(),
        ),
        (Elem::Lex(..), Elem::Lex(..)) => {
            if leq(a, b)? {
                b.clone()
            } else {
                a.clone()
            }
        }
        (Elem::PwLin(f), Elem::PwLin(g)) => Elem::PwLin(f.join(g)),
        _ => unreachable!(),
    })
}

pub fn meet(a: &Elem, b: &Elem) -> Result<Elem> {
    check_same("meet", a, b)?;
    Ok(match (a, b) {
        (Elem::QVec(x), Elem::QVec(y)) => Elem::QVec(
            x.iter()
                .zip(y.iter())
                .map(|(u, v)| u.min(v).clone())
                .collect(),
        ),
        (Elem::Lex(..), Elem::Lex(..)) => {
            if leq(a, b)? {
                a.clone()
            } else {
                b.clone()
            }
        }
        (Elem::PwLin(f), Elem::PwLin(g)) => Elem::PwLin(f.meet(g)),
        _ => unreachable!(),
    })
}

/// `|a| = a v (-a)`.
pub fn abs(a: &Elem) -> Elem {
    match a {
        Elem::QVec(x) => Elem::QVec(x.iter().map(|u| u.abs()).collect()),
        Elem::Lex(..) => {
            let theta = Elem::zero(Space::Lex);
            if leq(&theta, a).unwrap() {
                a.clone()
            } else {
                neg(a)
            }
        }
        Elem::PwLin(f) => Elem::PwLin(f.abs()),
    }
}

/// `a^+ = a v 0`.
pub fn pos_part(a: &Elem) -> Elem {
    join(a, &Elem::zero(a.space())).unwrap()
}

/// `a^- = (-a) v 0`.
pub fn neg_part(a: &Elem) -> Elem {
    join(&neg(a), &Elem::zero(a.space())).unwrap()
}

/// The norm used on the piecewise-linear space: `sup |f| + sup |df/dt|`.
pub fn pwlin_norm(f: &PwLin) -> Rational {
    f.norm()
}

/// Renders an element in its textual form: `(p/q, ...)` for QVec,
/// `lex(p/q, p/q)` for Lex, `pwlin{t:v, ...}` for PwLin.
impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::QVec(c) => {
                write!(f, "(")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", v)?;
                }
                write!(f, ")")
            }
            Elem::Lex(a, b) => write!(f, "lex({}, {})", a, b),
            Elem::PwLin(p) => write!(f, "{}", p),
        }
    }
}

/// Parses the textual element forms accepted by `Display`.
pub fn parse_elem(space: Space, s: &str) -> Result<Elem> {
    let s = s.trim();
    let bad = |msg: &str| Error::InvalidConstruction(format!("{}: `{}`", msg, s));
    match space {
        Space::QVec(d) => {
            let inner = s
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected `(p/q, ...)`"))?;
            let coords: Result<Vec<Rational>> =
                inner.split(',').map(parse_rational).collect();
            let coords = coords?;
            if coords.len() != d {
                return Err(Error::InvalidConstruction(format!(
                    "expected {} coordinates, found {}",
                    d,
                    coords.len()
                )));
            }
            Elem::qvec(coords)
        }
        Space::Lex => {
            let inner = s
                .strip_prefix("lex(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected `lex(p/q, p/q)`"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 2 {
                return Err(bad("expected two lex coordinates"));
            }
            Ok(Elem::lex(parse_rational(parts[0])?, parse_rational(parts[1])?))
        }
        Space::PwLin => {
            let inner = s
                .strip_prefix("pwlin{")
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| bad("expected `pwlin{t:v, ...}`"))?;
            let mut ts = Vec::new();
            let mut vs = Vec::new();
            for pair in inner.split(',') {
                let (t, v) = pair
                    .split_once(':')
                    .ok_or_else(|| bad("expected `t:v` pairs"))?;
                ts.push(parse_rational(t)?);
                vs.push(parse_rational(v)?);
            }
            Ok(Elem::PwLin(PwLin::new(ts, vs)?))
        }
    }
}
