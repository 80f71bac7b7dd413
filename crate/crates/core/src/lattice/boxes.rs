use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{self, Elem, Space};

/// An order interval `[lower, upper]`, possibly empty. Empty boxes carry
/// no bounds, only their space.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderBox {
    space: Space,
    bounds: Option<(Elem, Elem)>,
}

impl OrderBox {
    /// Builds `[lower, upper]`; the result is empty iff `lower <= upper`
    /// fails in the space's order.
    pub fn make(lower: Elem, upper: Elem) -> Result<OrderBox> {
        let space = lower.space();
        if lattice::leq(&lower, &upper)? {
            Ok(OrderBox {
                space,
                bounds: Some((lower, upper)),
            })
        } else {
            Ok(OrderBox {
                space,
                bounds: None,
            })
        }
    }

    pub fn empty(space: Space) -> OrderBox {
        OrderBox {
            space,
            bounds: None,
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn bounds(&self) -> Option<(&Elem, &Elem)> {
        self.bounds.as_ref().map(|(l, u)| (l, u))
    }

    pub fn contains(&self, e: &Elem) -> Result<bool> {
        if e.space() != self.space {
            return Err(Error::MixedSpace {
                left: self.space,
                right: e.space(),
            });
        }
        match &self.bounds {
            None => Ok(false),
            Some((l, u)) => Ok(lattice::leq(l, e)? && lattice::leq(e, u)?),
        }
    }

    /// `upper - lower`, defined only on the Dedekind complete coordinatewise
    /// space; the zero element for empty boxes.
    pub fn diameter(&self) -> Result<Elem> {
        match self.space {
            Space::QVec(_) => {}
            other => {
                return Err(Error::UnsupportedSpace {
                    op: "box diameter",
                    space: other,
                })
            }
        }
        match &self.bounds {
            None => Ok(Elem::zero(self.space)),
            Some((l, u)) => lattice::sub(u, l),
        }
    }

    /// Whether `other` is a subset of `self`.
    pub fn includes(&self, other: &OrderBox) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::MixedSpace {
                left: self.space,
                right: other.space,
            });
        }
        match (&self.bounds, &other.bounds) {
            (_, None) => Ok(true),
            (None, Some(_)) => Ok(false),
            (Some((l, u)), Some((lo, uo))) => {
                Ok(lattice::leq(l, lo)? && lattice::leq(uo, u)?)
            }
        }
    }

    pub fn intersect(&self, other: &OrderBox) -> Result<OrderBox> {
        if self.space != other.space {
            return Err(Error::MixedSpace {
                left: self.space,
                right: other.space,
            });
        }
        match (&self.bounds, &other.bounds) {
            (Some((l1, u1)), Some((l2, u2))) => {
                OrderBox::make(lattice::join(l1, l2)?, lattice::meet(u1, u2)?)
            }
            _ => Ok(OrderBox::empty(self.space)),
        }
    }
}

impl fmt::Display for OrderBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bounds {
            None => write!(f, "empty"),
            Some((l, u)) => write!(f, "[{}, {}]", l, u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn qv(coords: &[i64]) -> Elem {
        Elem::QVec(coords.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn make_and_membership() {
        let b = OrderBox::make(qv(&[1, 0]), qv(&[1, 1])).unwrap();
        assert!(!b.is_empty());
        assert_eq!(b.diameter().unwrap(), qv(&[0, 1]));
        assert!(b.contains(&qv(&[1, 0])).unwrap());
        assert!(b.contains(&qv(&[1, 1])).unwrap());
        assert!(!b.contains(&qv(&[0, 0])).unwrap());
    }

    #[test]
    fn crossed_bounds_give_empty() {
        let b = OrderBox::make(qv(&[3, 0]), qv(&[1, 1])).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.diameter().unwrap(), qv(&[0, 0]));
        assert!(!b.contains(&qv(&[2, 0])).unwrap());
    }

    #[test]
    fn center_membership() {
        // [c - r, c + r] contains c
        let c = qv(&[2, -1]);
        let r = qv(&[1, 1]);
        let b = OrderBox::make(
            crate::lattice::sub(&c, &r).unwrap(),
            crate::lattice::add(&c, &r).unwrap(),
        )
        .unwrap();
        assert!(b.contains(&c).unwrap());
        assert_eq!(b.diameter().unwrap(), crate::lattice::scale(&rat(2), &r));
    }

    #[test]
    fn inclusion_and_intersection() {
        let small = OrderBox::make(qv(&[1, 0]), qv(&[1, 1])).unwrap();
        let big = OrderBox::make(qv(&[0, -1]), qv(&[2, 2])).unwrap();
        assert!(big.includes(&small).unwrap());
        assert!(!small.includes(&big).unwrap());
        assert!(big.includes(&OrderBox::empty(Space::QVec(2))).unwrap());
        let apart = OrderBox::make(qv(&[9, 9]), qv(&[11, 11])).unwrap();
        assert!(big.intersect(&apart).unwrap().is_empty());
        assert_eq!(big.intersect(&small).unwrap(), small);
    }

    #[test]
    fn diameter_unsupported_off_qvec() {
        let b = OrderBox::make(
            Elem::lex(rat(0), rat(0)),
            Elem::lex(rat(1), rat(0)),
        )
        .unwrap();
        assert!(matches!(
            b.diameter(),
            Err(Error::UnsupportedSpace { .. })
        ));
    }
}
