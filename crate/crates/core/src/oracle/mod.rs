//! Independent brute-force reference checks. Everything here works from
//! raw term evaluation over finite windows — none of the class-based tail
//! analysis is consulted — so these results can referee the engine's
//! decisions on small instances.

use num_traits::Zero;

use crate::conv::{ConvergenceStructure, WitnessEvidence};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::lattice::{self, Elem};
use crate::net::{NetKind, NetSpec};
use crate::rough::{verify_rc, RcCertificate};

/// A finite rational grid: per-coordinate closed ranges walked at one
/// common step.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    ranges: Vec<(Rational, Rational)>,
    step: Rational,
}

impl GridSpec {
    pub fn new(ranges: Vec<(Rational, Rational)>, step: Rational) -> Result<GridSpec> {
        if ranges.is_empty() {
            return Err(Error::InvalidConstruction("empty grid".into()));
        }
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidConstruction(
                "grid range with lo > hi".into(),
            ));
        }
        if step <= Rational::zero() {
            return Err(Error::InvalidConstruction(
                "grid step must be positive".into(),
            ));
        }
        Ok(GridSpec { ranges, step })
    }

    pub fn ranges(&self) -> &[(Rational, Rational)] {
        &self.ranges
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    /// All grid points, in lexicographic scan order.
    pub fn points(&self) -> Vec<Elem> {
        let axes: Vec<Vec<Rational>> = self
            .ranges
            .iter()
            .map(|(lo, hi)| {
                let mut axis = Vec::new();
                let mut v = lo.clone();
                while &v <= hi {
                    axis.push(v.clone());
                    v += &self.step;
                }
                axis
            })
            .collect();
        let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for stem in &out {
                for v in axis {
                    let mut p = stem.clone();
                    p.push(v.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|coords| Elem::qvec(coords).expect("nonempty grid"))
            .collect()
    }
}

/// Verdict of a finite-window membership check. `Inconclusive` is an
/// honest answer: a finite window cannot settle a non-periodic tail, and
/// resolving it needs the class-based limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteVerdict {
    True,
    False,
    Inconclusive,
}

/// Checks `limsup |x_n - x| <= r` by the tail supremum over the window
/// `[horizon/2, horizon]`. For an eventually periodic net whose window
/// covers a whole cycle past the prefix, the window supremum is the exact
/// limsup and the verdict is exact; otherwise the window only samples the
/// tail and the verdict is `Inconclusive`.
pub fn brute_membership(
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
    horizon: u64,
) -> Result<BruteVerdict> {
    let (prefix_len, cycle_len) = match net.kind() {
        NetKind::EventuallyPeriodic { prefix, cycle } => {
            (prefix.len() as u64, Some(cycle.len() as u64))
        }
        NetKind::FiniteList { terms } => (0, Some(terms.len() as u64)),
        NetKind::ProductSum { .. } => {
            return Err(Error::IndexArity {
                op: "brute_membership",
            })
        }
        _ => (0, None),
    };
    if horizon < prefix_len.max(1) {
        return Err(Error::Precondition {
            op: "brute_membership",
            detail: format!(
                "horizon {} shorter than the prefix length {}",
                horizon, prefix_len
            ),
        });
    }
    let horizon = match net.finite_len() {
        Some(len) => horizon.min(len as u64),
        None => horizon,
    };
    let start = (horizon / 2).max(prefix_len + 1).min(horizon);
    let mut sup: Option<Elem> = None;
    for n in start..=horizon {
        let dev = lattice::abs(&lattice::sub(&net.term(n)?, x)?);
        sup = Some(match sup {
            None => dev,
            Some(s) => lattice::join(&s, &dev)?,
        });
    }
    let sup = sup.expect("window nonempty");
    let within = lattice::leq(&sup, r)?;
    let exact = match (net.kind(), cycle_len) {
        // a full cycle inside the window past the prefix makes the window
        // supremum the exact limsup
        (NetKind::EventuallyPeriodic { .. }, Some(k)) => horizon - start + 1 >= k,
        // a finite list is its own whole tail
        (NetKind::FiniteList { .. }, _) => true,
        _ => false,
    };
    if exact {
        Ok(if within {
            BruteVerdict::True
        } else {
            BruteVerdict::False
        })
    } else {
        Ok(BruteVerdict::Inconclusive)
    }
}

/// All grid points whose membership the window check confirms.
pub fn brute_limit_set(
    net: &NetSpec,
    r: &Elem,
    grid: &GridSpec,
    horizon: u64,
) -> Result<Vec<Elem>> {
    let mut out = Vec::new();
    for p in grid.points() {
        if brute_membership(net, &p, r, horizon)? == BruteVerdict::True {
            out.push(p);
        }
    }
    Ok(out)
}

/// Outcome of a finite existential witness search. `NotFoundInFamily` is
/// no refutation — the quantifier ranges over all nets, the family over
/// finitely many.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessSearch {
    Found(NetSpec),
    NotFoundInFamily,
}

/// Tries each candidate null witness in order, returning the first whose
/// certificate verifies.
pub fn witness_search(
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
    family: &[NetSpec],
    conv: &ConvergenceStructure,
) -> Result<WitnessSearch> {
    for candidate in family {
        let cert = match RcCertificate::new(
            candidate.clone(),
            WitnessEvidence::Direct,
            r.clone(),
            x.clone(),
            conv.clone(),
        ) {
            Ok(c) => c,
            Err(_) => continue,
        };
        match verify_rc(net, &cert) {
            Ok(v) if v.accepted() => return Ok(WitnessSearch::Found(candidate.clone())),
            _ => continue,
        }
    }
    Ok(WitnessSearch::NotFoundInFamily)
}

/// Enumerates the rough inequality of a certificate over a product net
/// assembled from two single-index factors and an arbitrary combination
/// rule. Used to referee product constructions (scalings, joins, meets)
/// whose nets have no symbolic class. Returns the first violating pair.
pub fn brute_pair_check(
    left: &NetSpec,
    right: &NetSpec,
    combine: &dyn Fn(&Elem, &Elem) -> Result<Elem>,
    cert: &RcCertificate,
    horizon: u64,
) -> Result<Option<(u64, u64)>> {
    for a in 1..=horizon {
        for b in 1..=horizon {
            let term = combine(&left.term(a)?, &right.term(b)?)?;
            let dev = lattice::abs(&lattice::sub(&term, &cert.target)?);
            let cap = lattice::add(&cert.witness.term_pair(a, b)?, &cert.roughness)?;
            if !lattice::leq(&dev, &cap)? {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, Polynomial, RationalFunction};
    use crate::lattice::Space;

    fn q1(v: i64) -> Elem {
        Elem::scalar(rat(v))
    }

    fn q2(a: i64, b: i64) -> Elem {
        Elem::qvec(vec![rat(a), rat(b)]).unwrap()
    }

    #[test]
    fn periodic_window_is_exact() {
        let net = NetSpec::eventually_periodic(
            Space::QVec(2),
            vec![],
            vec![q2(0, 0), q2(2, 1)],
        )
        .unwrap();
        assert_eq!(
            brute_membership(&net, &q2(1, 0), &q2(1, 1), 100).unwrap(),
            BruteVerdict::True
        );
        // a constant net displaced by 2r is not a member
        let c = NetSpec::constant(q1(0));
        assert_eq!(
            brute_membership(&c, &q1(4), &q1(1), 10).unwrap(),
            BruteVerdict::False
        );
    }

    #[test]
    fn rational_tail_is_inconclusive() {
        let net = NetSpec::rational_term(
            Space::QVec(1),
            vec![RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap()],
        )
        .unwrap();
        // finite windows cannot certify limsup = 0 against r = 0; the
        // class-based limit resolves it
        assert_eq!(
            brute_membership(&net, &q1(0), &q1(0), 100).unwrap(),
            BruteVerdict::Inconclusive
        );
        assert!(crate::rough::decide_rc(&net, &q1(0), &q1(0)).unwrap());
    }

    #[test]
    fn horizon_shorter_than_prefix_errors() {
        let net = NetSpec::eventually_periodic(
            Space::QVec(1),
            vec![q1(9); 8],
            vec![q1(0)],
        )
        .unwrap();
        assert!(brute_membership(&net, &q1(0), &q1(0), 4).is_err());
    }

    #[test]
    fn grid_enumeration() {
        let grid = GridSpec::new(
            vec![(rat(0), rat(1)), (rat(0), rat(1))],
            ratio(1, 2),
        )
        .unwrap();
        assert_eq!(grid.points().len(), 9);
        assert!(GridSpec::new(vec![(rat(1), rat(0))], rat(1)).is_err());
        assert!(GridSpec::new(vec![(rat(0), rat(1))], rat(0)).is_err());
    }

    #[test]
    fn brute_set_matches_ball_of_constant() {
        // constant c with r: grid over [c-2r, c+2r] recovers [c-r, c+r]
        let c = NetSpec::constant(q1(2));
        let grid = GridSpec::new(vec![(rat(0), rat(4))], ratio(1, 4)).unwrap();
        let pts = brute_limit_set(&c, &q1(1), &grid, 16).unwrap();
        assert!(pts.iter().all(|p| {
            let v = p.coords().unwrap()[0].clone();
            v >= rat(1) && v <= rat(3)
        }));
        assert_eq!(pts.len(), 9); // 1, 5/4, ..., 3
    }

    #[test]
    fn witness_search_finds_lex_witness() {
        // the lexicographic worked example, searched over (0, c/n)
        let one_over_n =
            RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap();
        let net = NetSpec::rational_term(
            Space::Lex,
            vec![one_over_n.clone(), one_over_n.clone()],
        )
        .unwrap();
        let family: Vec<NetSpec> = [2i64, 3, 1]
            .iter()
            .map(|&c| {
                NetSpec::rational_term(
                    Space::Lex,
                    vec![RationalFunction::zero(), one_over_n.scale(&rat(c))],
                )
                .unwrap()
            })
            .collect();
        let conv = ConvergenceStructure::monotone_decreasing(Space::Lex).unwrap();
        let found = witness_search(
            &net,
            &Elem::zero(Space::Lex),
            &Elem::lex(rat(1), rat(0)),
            &family,
            &conv,
        )
        .unwrap();
        assert_eq!(found, WitnessSearch::Found(family[0].clone()));
        // the oscillation at unit roughness needs nothing more than θ
        let cyc = NetSpec::eventually_periodic(
            Space::QVec(1),
            vec![],
            vec![q1(1), q1(-1)],
        )
        .unwrap();
        let conv = ConvergenceStructure::order(Space::QVec(1)).unwrap();
        let fam = vec![NetSpec::constant(q1(0))];
        assert_eq!(
            witness_search(&cyc, &q1(0), &q1(1), &fam, &conv).unwrap(),
            WitnessSearch::Found(fam[0].clone())
        );
        // no witness exists for the non-linearity counterexample
        let wide = NetSpec::eventually_periodic(
            Space::QVec(1),
            vec![],
            vec![q1(2), q1(-2)],
        )
        .unwrap();
        assert_eq!(
            witness_search(&wide, &q1(2), &q1(2), &fam, &conv).unwrap(),
            WitnessSearch::NotFoundInFamily
        );
    }
}
