use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{ForallVerdict, Limit};
use crate::lattice::{self, Elem, Space};
use crate::net::{netspec_from_views, NetKind, NetSpec};

/// Exact per-coordinate tail bounds of a deviation sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBound {
    pub limsup: Vec<Limit>,
    pub liminf: Vec<Limit>,
}

impl TailBound {
    /// `limsup <= r` coordinatewise; any infinite coordinate fails.
    pub fn within(&self, r: &Elem) -> Result<bool> {
        let coords = r.coords().ok_or(Error::UnsupportedSpace {
            op: "tail bound comparison",
            space: r.space(),
        })?;
        if coords.len() != self.limsup.len() {
            return Err(Error::Internal("tail bound arity mismatch".into()));
        }
        Ok(self
            .limsup
            .iter()
            .zip(coords.iter())
            .all(|(l, r)| l.le_rational(r)))
    }
}

fn decidable_views(op: &'static str, net: &NetSpec) -> Result<Vec<crate::net::scalar::ScalarSeq>> {
    match net.kind() {
        NetKind::EventuallyPeriodic { .. }
        | NetKind::RationalTerm { .. }
        | NetKind::PeriodicPlusRational { .. } => net.scalar_views(),
        _ => Err(Error::UndecidableClass {
            op,
            kind: net.kind_name().into(),
        }),
    }
}

/// Exact per-coordinate `limsup |x_n - x|` (and liminf), the Dedekind
/// complete characterization of rough convergence. Defined on the
/// coordinatewise space for the tail-decidable kinds.
pub fn limsup_abs_dev(net: &NetSpec, x: &Elem) -> Result<TailBound> {
    match net.space() {
        Space::QVec(_) => {}
        space => {
            return Err(Error::UnsupportedSpace {
                op: "limsup_abs_dev",
                space,
            })
        }
    }
    if net.space() != x.space() {
        return Err(Error::MixedSpace {
            left: net.space(),
            right: x.space(),
        });
    }
    let views = decidable_views("limsup_abs_dev", net)?;
    let coords = x.coords().unwrap();
    let mut limsup = Vec::with_capacity(views.len());
    let mut liminf = Vec::with_capacity(views.len());
    for (seq, c) in views.iter().zip(coords.iter()) {
        let devs: Vec<Limit> = seq
            .case_limits()
            .into_iter()
            .map(|l| match l {
                Limit::Finite(v) => Limit::Finite(num_traits::Signed::abs(&(v - c))),
                _ => Limit::PlusInfinity,
            })
            .collect();
        limsup.push(devs.iter().cloned().reduce(Limit::max).unwrap());
        liminf.push(devs.into_iter().reduce(Limit::min).unwrap());
    }
    Ok(TailBound { limsup, liminf })
}

/// The per-coordinate accumulation values of a tail-decidable net: the
/// limits of its residue-class subsequences.
pub(crate) fn accumulation_values(net: &NetSpec) -> Result<Vec<Vec<Limit>>> {
    let views = decidable_views("accumulation values", net)?;
    Ok(views.iter().map(|s| s.case_limits()).collect())
}

/// Outcome of an infimum computation for a verified-decreasing net.
#[derive(Clone, Debug, PartialEq)]
pub enum Infimum {
    Exists(Elem),
    DoesNotExist,
    Undecidable(String),
}

/// Decides whether the net is weakly decreasing, reporting the first rising
/// step `n` (from `n` to `n+1`) on failure.
pub fn is_decreasing(net: &NetSpec) -> Result<ForallVerdict> {
    match (net.space(), net.kind()) {
        (_, NetKind::FiniteList { terms }) => {
            for n in 0..terms.len().saturating_sub(1) {
                if !lattice::leq(&terms[n + 1], &terms[n])? {
                    return Ok(ForallVerdict::FalseAt(n as u64 + 1));
                }
            }
            Ok(ForallVerdict::True)
        }
        (_, NetKind::ProductSum { left, right }) => {
            // decreasing in the product preorder iff both factors decrease
            Ok(match (is_decreasing(left)?, is_decreasing(right)?) {
                (ForallVerdict::True, ForallVerdict::True) => ForallVerdict::True,
                (ForallVerdict::FalseAt(n), _) | (_, ForallVerdict::FalseAt(n)) => {
                    ForallVerdict::FalseAt(n)
                }
            })
        }
        (Space::PwLin, NetKind::EventuallyPeriodic { prefix, cycle }) => {
            // one pass over prefix, cycle, and the wraparound step decides
            let horizon = prefix.len() + cycle.len();
            for n in 1..=horizon as u64 {
                if !lattice::leq(&net.term(n + 1)?, &net.term(n)?)? {
                    return Ok(ForallVerdict::FalseAt(n));
                }
            }
            Ok(ForallVerdict::True)
        }
        (Space::PwLin, _) => Err(Error::UndecidableClass {
            op: "is_decreasing",
            kind: net.kind_name().into(),
        }),
        (Space::Lex, _) => net.lex_view()?.is_decreasing(),
        (Space::QVec(_), _) => {
            let views = net.scalar_views()?;
            let mut worst: Option<u64> = None;
            for v in &views {
                if let ForallVerdict::FalseAt(n) = v.is_decreasing()? {
                    worst = Some(worst.map_or(n, |w| w.min(n)));
                }
            }
            Ok(match worst {
                Some(n) => ForallVerdict::FalseAt(n),
                None => ForallVerdict::True,
            })
        }
    }
}

/// The infimum of a decreasing net, when it exists.
///
/// Coordinatewise spaces are Dedekind complete, so a decreasing net has an
/// infimum iff it is bounded below, and the infimum is the coordinatewise
/// limit. In the lexicographic plane the infimum exists iff the first
/// coordinate is eventually constant; a strictly descending first
/// coordinate leaves every `(limit, y)` a lower bound with none greatest.
pub fn infimum(net: &NetSpec) -> Result<Infimum> {
    match is_decreasing(net) {
        Ok(ForallVerdict::True) => {}
        Ok(ForallVerdict::FalseAt(n)) => {
            return Err(Error::Precondition {
                op: "infimum",
                detail: format!("net is not decreasing (rises at step {})", n),
            })
        }
        Err(Error::UndecidableClass { kind, .. }) => return Ok(Infimum::Undecidable(kind)),
        Err(e) => return Err(e),
    }
    match net.space() {
        Space::QVec(_) => {
            let views = net.scalar_views()?;
            let mut coords = Vec::with_capacity(views.len());
            for v in &views {
                match v.limit() {
                    Some(Limit::Finite(l)) => coords.push(l),
                    Some(Limit::MinusInfinity) => return Ok(Infimum::DoesNotExist),
                    Some(Limit::PlusInfinity) => {
                        return Err(Error::Internal(
                            "decreasing net diverging upward".into(),
                        ))
                    }
                    None => {
                        return Err(Error::Internal(
                            "decreasing net with split accumulation values".into(),
                        ))
                    }
                }
            }
            Ok(Infimum::Exists(crate::net::assemble_elem(
                net.space(),
                coords,
            )?))
        }
        Space::Lex => {
            let pair = net.lex_view()?;
            match pair.first.eventually_constant() {
                Some(a) => match pair.second.limit() {
                    Some(Limit::Finite(l)) => Ok(Infimum::Exists(Elem::lex(a, l))),
                    Some(Limit::MinusInfinity) => Ok(Infimum::DoesNotExist),
                    _ => Err(Error::Internal(
                        "decreasing lex net with divergent second coordinate".into(),
                    )),
                },
                // strictly descending first coordinate: no greatest lower bound
                None => Ok(Infimum::DoesNotExist),
            }
        }
        Space::PwLin => match net.kind() {
            NetKind::EventuallyPeriodic { cycle, .. } => {
                // decreasing and periodic forces a constant cycle
                Ok(Infimum::Exists(cycle[0].clone()))
            }
            _ => Ok(Infimum::Undecidable(net.kind_name().into())),
        },
    }
}

/// The canonical null witness for a rough-convergence claim: a weakly
/// decreasing net `y >= 0` with infimum zero and `|x_n - x| <= y_n + r`
/// for every `n`. Exists exactly when `limsup |x_n - x| <= r`, which makes
/// the class-based decision complete.
pub fn canonical_null_witness(net: &NetSpec, x: &Elem, r: &Elem) -> Result<NetSpec> {
    let space = net.space();
    match space {
        Space::QVec(_) => {}
        other => {
            return Err(Error::UnsupportedSpace {
                op: "canonical witness",
                space: other,
            })
        }
    }
    let views = decidable_views("canonical witness", net)?;
    let xc = x.coords().ok_or(Error::Internal("missing coords".into()))?;
    let rc = r.coords().ok_or(Error::Internal("missing coords".into()))?;
    let mut wit = Vec::with_capacity(views.len());
    for ((seq, xi), ri) in views.iter().zip(xc.iter()).zip(rc.iter()) {
        let dev = seq.add_const(&-xi.clone()).abs()?;
        wit.push(dev.null_dominator_above(ri)?);
    }
    netspec_from_views(space, wit)
}

/// Exact supremum of `|x_n|` over the whole net, when finite.
pub(crate) fn sup_abs(net: &NetSpec) -> Result<Option<Elem>> {
    let views = decidable_views("sup of absolute values", net)?;
    let mut coords = Vec::with_capacity(views.len());
    for v in &views {
        match v.abs()?.sup(1)? {
            Limit::Finite(s) => coords.push(s),
            Limit::PlusInfinity => return Ok(None),
            Limit::MinusInfinity => {
                return Err(Error::Internal("negative supremum of absolute values".into()))
            }
        }
    }
    Ok(Some(crate::net::assemble_elem(net.space(), coords)?))
}

/// Decides `lo <= term(n)` for all `n` (per class), reporting the first
/// violation. `lo`/`hi` bounds for box-confinement style checks.
pub(crate) fn forall_between(net: &NetSpec, lo: &Elem, hi: &Elem) -> Result<ForallVerdict> {
    match net.space() {
        Space::QVec(_) => {
            let views = net.scalar_views()?;
            let lc = lo.coords().unwrap();
            let hc = hi.coords().unwrap();
            let mut worst: Option<u64> = None;
            for ((v, l), h) in views.iter().zip(lc.iter()).zip(hc.iter()) {
                if let ForallVerdict::FalseAt(n) = v.add_const(&-l.clone()).forall_nonneg(1)? {
                    worst = Some(worst.map_or(n, |w| w.min(n)));
                }
                if let ForallVerdict::FalseAt(n) =
                    v.neg().add_const(h).forall_nonneg(1)?
                {
                    worst = Some(worst.map_or(n, |w| w.min(n)));
                }
            }
            Ok(match worst {
                Some(n) => ForallVerdict::FalseAt(n),
                None => ForallVerdict::True,
            })
        }
        Space::Lex => {
            let pair = net.lex_view()?;
            let (l1, l2) = match lo {
                Elem::Lex(a, b) => (a.clone(), b.clone()),
                _ => return Err(Error::Internal("lex bound expected".into())),
            };
            let (h1, h2) = match hi {
                Elem::Lex(a, b) => (a.clone(), b.clone()),
                _ => return Err(Error::Internal("lex bound expected".into())),
            };
            let above = crate::net::scalar::LexSeq {
                first: pair.first.add_const(&-l1),
                second: pair.second.add_const(&-l2),
            };
            if let ForallVerdict::FalseAt(n) = above.forall_nonneg(1)? {
                return Ok(ForallVerdict::FalseAt(n));
            }
            let below = crate::net::scalar::LexSeq {
                first: pair.first.neg().add_const(&h1),
                second: pair.second.neg().add_const(&h2),
            };
            below.forall_nonneg(1)
        }
        Space::PwLin => Err(Error::UnsupportedSpace {
            op: "forall_between",
            space: Space::PwLin,
        }),
    }
}

/// True when every coordinate of every tail class converges to zero, i.e.
/// the deviation net vanishes in the order sense.
pub(crate) fn converges_to(net: &NetSpec, x: &Elem) -> Result<bool> {
    let tb = limsup_abs_dev(net, x)?;
    Ok(tb
        .limsup
        .iter()
        .all(|l| matches!(l, Limit::Finite(v) if v.is_zero())))
}

/// Outcome of the universal domination check `|net_n - x| <= bound_n + slack`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Domination {
    Holds,
    FailsAt(u64),
    Undecidable(String),
}

/// Decides `|net(n) - x| <= bound(n) + slack` for every index, exactly.
///
/// For single-index class nets over the coordinate spaces the absolute
/// value unfolds into two signed inequalities per coordinate (or the
/// lexicographic rule). Finite lists verify over their horizon; periodic
/// piecewise-linear pairs verify over one aligned cycle pass, which is
/// complete by periodicity.
pub(crate) fn forall_dominated(
    net: &NetSpec,
    x: &Elem,
    bound: &NetSpec,
    slack: &Elem,
) -> Result<Domination> {
    if net.space() != bound.space() || net.space() != x.space() || net.space() != slack.space() {
        return Err(Error::MixedSpace {
            left: net.space(),
            right: bound.space(),
        });
    }
    if net.is_product() || bound.is_product() {
        return Err(Error::IndexArity {
            op: "forall_dominated",
        });
    }
    // bounded-horizon route: any finite operand fixes the horizon
    if net.is_finite() || bound.is_finite() {
        let h = match (net.finite_len(), bound.finite_len()) {
            (Some(a), Some(b)) => {
                if b < a {
                    return Err(Error::Precondition {
                        op: "forall_dominated",
                        detail: format!("bound horizon {} shorter than net horizon {}", b, a),
                    });
                }
                a
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        for n in 1..=h as u64 {
            let dev = lattice::abs(&lattice::sub(&net.term(n)?, x)?);
            let cap = lattice::add(&bound.term(n)?, slack)?;
            if !lattice::leq(&dev, &cap)? {
                return Ok(Domination::FailsAt(n));
            }
        }
        return Ok(Domination::Holds);
    }
    match net.space() {
        Space::QVec(_) => {
            let va = net.scalar_views()?;
            let vb = bound.scalar_views()?;
            let xc = x.coords().unwrap();
            let sc = slack.coords().unwrap();
            let mut worst: Option<u64> = None;
            for i in 0..va.len() {
                let dev = va[i].add_const(&-xc[i].clone());
                let cap = vb[i].add_const(&sc[i]);
                for side in [cap.sub(&dev)?, cap.add(&dev)?] {
                    if let ForallVerdict::FalseAt(n) = side.forall_nonneg(1)? {
                        worst = Some(worst.map_or(n, |w| w.min(n)));
                    }
                }
            }
            Ok(match worst {
                Some(n) => Domination::FailsAt(n),
                None => Domination::Holds,
            })
        }
        Space::Lex => {
            let (x1, x2) = match x {
                Elem::Lex(a, b) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            let (s1, s2) = match slack {
                Elem::Lex(a, b) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            let pair = net.lex_view()?;
            let dev = crate::net::scalar::LexSeq {
                first: pair.first.add_const(&-x1),
                second: pair.second.add_const(&-x2),
            }
            .abs()?;
            let cap = bound.lex_view()?;
            let diff = crate::net::scalar::LexSeq {
                first: cap.first.add_const(&s1).sub(&dev.first)?,
                second: cap.second.add_const(&s2).sub(&dev.second)?,
            };
            Ok(match diff.forall_nonneg(1)? {
                ForallVerdict::True => Domination::Holds,
                ForallVerdict::FalseAt(n) => Domination::FailsAt(n),
            })
        }
        Space::PwLin => {
            // both eventually periodic: one aligned pass decides
            let (pa, ka) = match net.kind() {
                NetKind::EventuallyPeriodic { prefix, cycle } => (prefix.len(), cycle.len()),
                _ => {
                    return Ok(Domination::Undecidable(net.kind_name().into()));
                }
            };
            let (pb, kb) = match bound.kind() {
                NetKind::EventuallyPeriodic { prefix, cycle } => (prefix.len(), cycle.len()),
                _ => {
                    return Ok(Domination::Undecidable(bound.kind_name().into()));
                }
            };
            let horizon = pa.max(pb) + num_integer::Integer::lcm(&ka, &kb);
            for n in 1..=horizon as u64 {
                let dev = lattice::abs(&lattice::sub(&net.term(n)?, x)?);
                let cap = lattice::add(&bound.term(n)?, slack)?;
                if !lattice::leq(&dev, &cap)? {
                    return Ok(Domination::FailsAt(n));
                }
            }
            Ok(Domination::Holds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Polynomial, RationalFunction};

    fn q1(v: i64) -> Elem {
        Elem::scalar(rat(v))
    }

    fn q2(a: i64, b: i64) -> Elem {
        Elem::qvec(vec![rat(a), rat(b)]).unwrap()
    }

    fn one_over_n() -> RationalFunction {
        RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap()
    }

    fn scaled(c: i64) -> RationalFunction {
        one_over_n().scale(&rat(c))
    }

    #[test]
    fn limsup_of_cycle_deviation() {
        // cycle {(0,0),(2,1)} around x=(1,0): limsup (1,1), liminf (1,0)
        let net = NetSpec::eventually_periodic(
            Space::QVec(2),
            vec![],
            vec![q2(0, 0), q2(2, 1)],
        )
        .unwrap();
        let tb = limsup_abs_dev(&net, &q2(1, 0)).unwrap();
        assert_eq!(tb.limsup, vec![Limit::Finite(rat(1)), Limit::Finite(rat(1))]);
        assert_eq!(tb.liminf, vec![Limit::Finite(rat(1)), Limit::Finite(rat(0))]);
        assert!(tb.within(&q2(1, 1)).unwrap());
        assert!(!tb.within(&q2(1, 0)).unwrap());
    }

    #[test]
    fn limsup_of_convergent_terms() {
        let net = NetSpec::rational_term(Space::QVec(2), vec![one_over_n(), one_over_n()])
            .unwrap();
        let tb = limsup_abs_dev(&net, &q2(0, 0)).unwrap();
        assert_eq!(tb.limsup, vec![Limit::Finite(rat(0)), Limit::Finite(rat(0))]);
        // scalar cycle {0,4} around 0 has limsup 4
        let c = NetSpec::eventually_periodic(Space::QVec(1), vec![], vec![q1(0), q1(4)])
            .unwrap();
        let tb = limsup_abs_dev(&c, &q1(0)).unwrap();
        assert_eq!(tb.limsup, vec![Limit::Finite(rat(4))]);
    }

    #[test]
    fn limsup_rejects_undecidable_kinds() {
        let fin = NetSpec::finite(Space::QVec(1), vec![q1(1)]).unwrap();
        assert!(matches!(
            limsup_abs_dev(&fin, &q1(0)),
            Err(Error::UndecidableClass { .. })
        ));
    }

    #[test]
    fn decreasing_examples() {
        let lex = NetSpec::rational_term(Space::Lex, vec![one_over_n(), one_over_n()]).unwrap();
        assert_eq!(is_decreasing(&lex).unwrap(), ForallVerdict::True);
        let cyc = NetSpec::eventually_periodic(Space::QVec(1), vec![], vec![q1(1), q1(-1)])
            .unwrap();
        assert_eq!(is_decreasing(&cyc).unwrap(), ForallVerdict::FalseAt(2));
        assert_eq!(
            is_decreasing(&NetSpec::constant(q1(3))).unwrap(),
            ForallVerdict::True
        );
    }

    #[test]
    fn lex_infimum_cases() {
        // (1/n, 1/n) decreasing but infimum does not exist
        let a = NetSpec::rational_term(Space::Lex, vec![one_over_n(), one_over_n()]).unwrap();
        assert_eq!(infimum(&a).unwrap(), Infimum::DoesNotExist);
        // (0, 2/n) decreases to (0,0)
        let b = NetSpec::rational_term(
            Space::Lex,
            vec![RationalFunction::zero(), scaled(2)],
        )
        .unwrap();
        assert_eq!(
            infimum(&b).unwrap(),
            Infimum::Exists(Elem::lex(rat(0), rat(0)))
        );
        // non-decreasing input is a precondition error
        let c = NetSpec::eventually_periodic(
            Space::Lex,
            vec![],
            vec![Elem::lex(rat(1), rat(0)), Elem::lex(rat(2), rat(0))],
        )
        .unwrap();
        assert!(matches!(infimum(&c), Err(Error::Precondition { .. })));
    }

    #[test]
    fn qvec_infimum_is_coordinatewise_limit() {
        let a = NetSpec::rational_term(Space::QVec(1), vec![one_over_n()]).unwrap();
        assert_eq!(infimum(&a).unwrap(), Infimum::Exists(q1(0)));
        // n decreasing? no: -n decreasing, unbounded below
        let down = NetSpec::rational_term(
            Space::QVec(1),
            vec![RationalFunction::from_poly(Polynomial::var().neg())],
        )
        .unwrap();
        assert_eq!(infimum(&down).unwrap(), Infimum::DoesNotExist);
    }

    #[test]
    fn canonical_witness_is_valid() {
        let net = NetSpec::eventually_periodic(
            Space::QVec(2),
            vec![q2(9, -9)],
            vec![q2(0, 0), q2(2, 1)],
        )
        .unwrap();
        let x = q2(1, 0);
        let r = q2(1, 1);
        let w = canonical_null_witness(&net, &x, &r).unwrap();
        assert_eq!(is_decreasing(&w).unwrap(), ForallVerdict::True);
        assert_eq!(
            infimum(&w).unwrap(),
            Infimum::Exists(Elem::zero(Space::QVec(2)))
        );
        for n in 1..=40 {
            let dev = lattice::abs(&lattice::sub(&net.term(n).unwrap(), &x).unwrap());
            let bound = lattice::add(&w.term(n).unwrap(), &r).unwrap();
            assert!(lattice::leq(&dev, &bound).unwrap(), "n={}", n);
        }
    }

    #[test]
    fn sup_abs_examples() {
        let net = NetSpec::rational_term(Space::QVec(1), vec![one_over_n()]).unwrap();
        assert_eq!(sup_abs(&net).unwrap(), Some(q1(1)));
        let unbounded = NetSpec::rational_term(
            Space::QVec(1),
            vec![RationalFunction::from_poly(Polynomial::var())],
        )
        .unwrap();
        assert_eq!(sup_abs(&unbounded).unwrap(), None);
    }
}
