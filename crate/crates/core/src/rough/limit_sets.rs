//! Operations on rough limit-point sets: inclusion and diameter laws,
//! subnet inclusion, the boundedness correspondence, convexity and
//! closedness, membership transfer under positive operators, and the
//! demonstrations around non-unique limits.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::conv::{
    verify_with_evidence, ConvergenceStructure, OrderConvWitness, Verdict, WitnessEvidence,
};
use crate::error::{Error, Result};
use crate::exact::{ForallVerdict, Rational};
use crate::lattice::{self, Elem, Space};
use crate::net::{self, Domination, NetKind, NetSpec};
use crate::rough::{canonical_certificate, decide_rc, limit_set, verify_rc, RcCertificate};

#[derive(Clone, Debug, PartialEq)]
pub enum InclusionVerdict {
    Included,
    CounterexampleFound(Elem),
}

/// Checks the monotonicity of limit sets in the roughness degree:
/// `L^{r1}` must sit inside `L^{r2}` whenever `r1 <= r2`.
pub fn inclusion_check(net: &NetSpec, r1: &Elem, r2: &Elem) -> Result<InclusionVerdict> {
    if !lattice::leq(r1, r2)? {
        return Err(Error::Precondition {
            op: "inclusion_check",
            detail: "r1 must be ≤ r2".into(),
        });
    }
    let small = limit_set(net, r1)?;
    let big = limit_set(net, r2)?;
    if big.interval.includes(&small.interval)? {
        return Ok(InclusionVerdict::Included);
    }
    let (lo, hi) = small.interval.bounds().expect("non-included set is nonempty");
    let witness = if !big.interval.contains(lo)? {
        lo.clone()
    } else {
        hi.clone()
    };
    Ok(InclusionVerdict::CounterexampleFound(witness))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterReport {
    pub diameter: Elem,
    pub bound_ok: bool,
}

/// The diameter of the limit set never exceeds `2r` (and equals it for
/// constant nets). Empty sets report the zero diameter.
pub fn diameter_check(net: &NetSpec, r: &Elem) -> Result<DiameterReport> {
    let ls = limit_set(net, r)?;
    let diameter = ls.interval.diameter()?;
    let cap = lattice::scale(&Rational::from_integer(2.into()), r);
    let bound_ok = lattice::leq(&diameter, &cap)?;
    Ok(DiameterReport { diameter, bound_ok })
}

/// Limit points of a net are limit points of each arithmetic subsequence:
/// checks `L^r(net) ⊆ L^r(subsequence)` as boxes.
pub fn subnet_inclusion_check(
    net: &NetSpec,
    stride: u64,
    offset: u64,
    r: &Elem,
) -> Result<InclusionVerdict> {
    let full = limit_set(net, r)?;
    let sub = limit_set(&net::subseq_arith(net, stride, offset)?, r)?;
    if sub.interval.includes(&full.interval)? {
        Ok(InclusionVerdict::Included)
    } else {
        let (lo, hi) = full.interval.bounds().expect("nonempty");
        let witness = if !sub.interval.contains(lo)? {
            lo.clone()
        } else {
            hi.clone()
        };
        Ok(InclusionVerdict::CounterexampleFound(witness))
    }
}

/// From order boundedness to a nonempty limit set: returns the roughness
/// `r = sup |x_n|` together with a verified certificate that `θ` is an
/// `r`-limit point.
pub fn bounded_to_nonempty(net: &NetSpec) -> Result<(Elem, RcCertificate)> {
    let r = net::sup_abs(net)?.ok_or(Error::Precondition {
        op: "bounded_to_nonempty",
        detail: "the net is not order bounded".into(),
    })?;
    let theta = Elem::zero(net.space());
    if !decide_rc(net, &theta, &r)? {
        return Err(Error::Internal(
            "θ escaped the limit set at the supremum roughness".into(),
        ));
    }
    let cert = canonical_certificate(net, &theta, &r)?;
    Ok((r, cert))
}

/// From a nonempty limit set to an order bound: a member `x` with a
/// decreasing witness `y` bounds the whole net by `y_1 + r + |x|`.
pub fn nonempty_to_bounded(
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
    witness: &NetSpec,
) -> Result<Elem> {
    match net::is_decreasing(witness)? {
        ForallVerdict::True => {}
        ForallVerdict::FalseAt(n) => {
            return Err(Error::Precondition {
                op: "nonempty_to_bounded",
                detail: format!("witness rises at step {}", n),
            })
        }
    }
    match net::forall_dominated(net, x, witness, r)? {
        Domination::Holds => {}
        Domination::FailsAt(n) => {
            return Err(Error::Precondition {
                op: "nonempty_to_bounded",
                detail: format!("membership inequality fails at n={}", n),
            })
        }
        Domination::Undecidable(kind) => {
            return Err(Error::UndecidableClass {
                op: "nonempty_to_bounded",
                kind,
            })
        }
    }
    let bound = lattice::add(
        &lattice::add(&witness.term(1)?, r)?,
        &lattice::abs(x),
    )?;
    // |x_n| <= bound for every n
    let verdict = match net.space() {
        Space::Lex => {
            let theta = Elem::zero(net.space());
            net::forall_dominated(net, &theta, &NetSpec::constant(theta.clone()), &bound)?
        }
        _ => net::forall_between(net, &lattice::neg(&bound), &bound).map(|v| match v {
            ForallVerdict::True => Domination::Holds,
            ForallVerdict::FalseAt(n) => Domination::FailsAt(n),
        })?,
    };
    match verdict {
        Domination::Holds => Ok(bound),
        Domination::FailsAt(n) => Err(Error::Internal(format!(
            "derived bound fails at n={}",
            n
        ))),
        Domination::Undecidable(kind) => Err(Error::UndecidableClass {
            op: "nonempty_to_bounded",
            kind,
        }),
    }
}

/// Convex combination of members: `γ w1 + (1-γ) w2` belongs to the limit
/// set at the blended roughness `γ r1 + (1-γ) r2`. Returns the combined
/// member after confirming all three memberships.
pub fn convex_combine(
    net: &NetSpec,
    w1: &Elem,
    r1: &Elem,
    w2: &Elem,
    r2: &Elem,
    gamma: &Rational,
) -> Result<Elem> {
    if gamma.is_negative() || gamma > &Rational::from_integer(1.into()) {
        return Err(Error::Precondition {
            op: "convex_combine",
            detail: "γ must lie in [0, 1]".into(),
        });
    }
    if !decide_rc(net, w1, r1)? {
        return Err(Error::Precondition {
            op: "convex_combine",
            detail: "w1 is not a member at roughness r1".into(),
        });
    }
    if !decide_rc(net, w2, r2)? {
        return Err(Error::Precondition {
            op: "convex_combine",
            detail: "w2 is not a member at roughness r2".into(),
        });
    }
    let co = Rational::from_integer(1.into()) - gamma;
    let blend = lattice::add(&lattice::scale(gamma, w1), &lattice::scale(&co, w2))?;
    let blend_r = lattice::add(&lattice::scale(gamma, r1), &lattice::scale(&co, r2))?;
    if decide_rc(net, &blend, &blend_r)? {
        Ok(blend)
    } else {
        Err(Error::Internal(
            "convex combination escaped the blended limit set".into(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClosednessVerdict {
    MemberConfirmed,
    Violation,
}

/// Closedness of the limit set: a net of members that order-converges to
/// `z` keeps `z` inside. Every term of the approach net is verified a
/// member (exactly, over the whole class), then `z`'s membership is
/// decided.
pub fn closedness_check(
    net: &NetSpec,
    r: &Elem,
    approach: &NetSpec,
) -> Result<ClosednessVerdict> {
    let ls = limit_set(net, r)?;
    let (lo, hi) = match ls.interval.bounds() {
        Some(b) => b,
        None => {
            return Err(Error::Precondition {
                op: "closedness_check",
                detail: "the limit set is empty, no approach net can live in it".into(),
            })
        }
    };
    match net::forall_between(approach, lo, hi)? {
        ForallVerdict::True => {}
        ForallVerdict::FalseAt(n) => {
            return Err(Error::Precondition {
                op: "closedness_check",
                detail: format!("approach term {} is not a member", n),
            })
        }
    }
    // the approach must order-converge: its tail classes share one limit
    let acc = net::accumulation_values(approach)?;
    let mut coords = Vec::with_capacity(acc.len());
    for vals in &acc {
        let first = &vals[0];
        if vals.iter().any(|v| v != first) {
            return Err(Error::Precondition {
                op: "closedness_check",
                detail: "the approach net does not converge".into(),
            });
        }
        match first {
            crate::exact::Limit::Finite(v) => coords.push(v.clone()),
            _ => {
                return Err(Error::Precondition {
                    op: "closedness_check",
                    detail: "the approach net diverges".into(),
                })
            }
        }
    }
    let z = crate::net::assemble_elem(approach.space(), coords)?;
    if decide_rc(net, &z, r)? {
        Ok(ClosednessVerdict::MemberConfirmed)
    } else {
        Ok(ClosednessVerdict::Violation)
    }
}

/// Membership of every point of an order-bounded set: when the net is
/// confined to `[-e, e]`, any `x` with `|x| <= e` is an `r`-limit point
/// for every `r >= 2e`, witnessed by the zero net.
pub fn bounded_set_membership(
    e: &Elem,
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
) -> Result<Verdict> {
    let space = net.space();
    let theta = Elem::zero(space);
    if !lattice::leq(&theta, e)? {
        return Err(Error::Precondition {
            op: "bounded_set_membership",
            detail: "the bound e must be ≥ θ".into(),
        });
    }
    match net::forall_dominated(net, &theta, &NetSpec::constant(theta.clone()), e)? {
        Domination::Holds => {}
        Domination::FailsAt(n) => {
            return Err(Error::Precondition {
                op: "bounded_set_membership",
                detail: format!("confinement |x_n| ≤ e fails at n={}", n),
            })
        }
        Domination::Undecidable(kind) => {
            return Err(Error::UndecidableClass {
                op: "bounded_set_membership",
                kind,
            })
        }
    }
    if !lattice::leq(&lattice::abs(x), e)? {
        return Err(Error::Precondition {
            op: "bounded_set_membership",
            detail: "|x| ≤ e fails".into(),
        });
    }
    let two_e = lattice::scale(&Rational::from_integer(2.into()), e);
    if !lattice::leq(&two_e, r)? {
        return Err(Error::Precondition {
            op: "bounded_set_membership",
            detail: "r ≥ 2e fails".into(),
        });
    }
    let conv = match space {
        Space::PwLin => ConvergenceStructure::pwlin_norm(),
        _ => ConvergenceStructure::order(space)?,
    };
    let cert = RcCertificate::new(
        NetSpec::constant(theta.clone()),
        WitnessEvidence::Direct,
        r.clone(),
        x.clone(),
        conv,
    )?;
    verify_rc(net, &cert)
}

/// An order-convergent net admits its limit as a rough limit point at
/// every nonnegative roughness, reusing the same dominating witness.
pub fn o_limit_membership(
    net: &NetSpec,
    x: &Elem,
    dominating: &NetSpec,
    r: &Elem,
) -> Result<Verdict> {
    let conv = ConvergenceStructure::order(net.space())?;
    let ev = WitnessEvidence::Order(OrderConvWitness {
        dominating: dominating.clone(),
    });
    match verify_with_evidence(&conv, net, x, &ev)? {
        Verdict::Accept => {}
        other => {
            return Err(Error::Precondition {
                op: "o_limit_membership",
                detail: format!("order convergence did not verify ({})", other),
            })
        }
    }
    let cert = RcCertificate::new(
        dominating.clone(),
        WitnessEvidence::Direct,
        r.clone(),
        x.clone(),
        conv,
    )?;
    verify_rc(net, &cert)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitSetComparison {
    Equal,
    Difference(Elem),
}

/// Nets whose termwise deviation vanishes share every rough limit set.
pub fn equal_limit_sets_check(
    x_net: &NetSpec,
    w_net: &NetSpec,
    r: &Elem,
) -> Result<LimitSetComparison> {
    let diff = net::net_sub(x_net, w_net)?;
    let theta = Elem::zero(x_net.space());
    if !net::converges_to(&diff, &theta)? {
        return Err(Error::Precondition {
            op: "equal_limit_sets_check",
            detail: "the deviation net does not converge to θ".into(),
        });
    }
    let a = limit_set(x_net, r)?;
    let b = limit_set(w_net, r)?;
    if a.interval == b.interval {
        return Ok(LimitSetComparison::Equal);
    }
    let witness = [&a.interval, &b.interval]
        .iter()
        .filter_map(|i| i.bounds())
        .flat_map(|(lo, hi)| [lo.clone(), hi.clone()])
        .find(|p| {
            let ia = a.interval.contains(p).unwrap_or(false);
            let ib = b.interval.contains(p).unwrap_or(false);
            ia != ib
        });
    Ok(LimitSetComparison::Difference(witness.unwrap_or(theta)))
}

/// An entrywise-nonnegative rational matrix acting on the coordinatewise
/// space: the positive operators of the final theorem.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<RatMatrix> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidConstruction("empty matrix".into()));
        }
        let w = rows[0].len();
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::InvalidConstruction(
                "ragged matrix rows".into(),
            ));
        }
        Ok(RatMatrix { rows })
    }

    pub fn identity(n: usize) -> RatMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::from_integer(1.into())
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RatMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn out_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn in_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn nonnegative_entrywise(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::PositivityRequired { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        let coords = match x {
            Elem::QVec(c) => c,
            _ => {
                return Err(Error::UnsupportedSpace {
                    op: "matrix application",
                    space: x.space(),
                })
            }
        };
        if coords.len() != self.in_dim() {
            return Err(Error::MixedSpace {
                left: Space::QVec(self.in_dim()),
                right: x.space(),
            });
        }
        let out = self
            .rows
            .iter()
            .map(|row| row.iter().zip(coords.iter()).map(|(a, b)| a * b).sum())
            .collect();
        Elem::qvec(out)
    }

    /// Applies the operator to every term; linear maps preserve every net
    /// class, with rational-function coordinates combined linearly.
    pub fn apply_net(&self, net: &NetSpec) -> Result<NetSpec> {
        let space = Space::QVec(self.out_dim());
        let map_terms = |terms: &[Elem]| -> Result<Vec<Elem>> {
            terms.iter().map(|t| self.apply(t)).collect()
        };
        let map_fns =
            |fns: &[crate::exact::RationalFunction]| -> Result<Vec<crate::exact::RationalFunction>> {
                self.rows
                    .iter()
                    .map(|row| {
                        let mut acc = crate::exact::RationalFunction::zero();
                        for (c, f) in row.iter().zip(fns.iter()) {
                            acc = acc.add(&f.scale(c))?;
                        }
                        Ok(acc)
                    })
                    .collect()
            };
        match net.kind() {
            NetKind::FiniteList { terms } => NetSpec::finite(space, map_terms(terms)?),
            NetKind::EventuallyPeriodic { prefix, cycle } => {
                NetSpec::eventually_periodic(space, map_terms(prefix)?, map_terms(cycle)?)
            }
            NetKind::RationalTerm { prefix, coords } => {
                NetSpec::rational_term_with_prefix(space, map_terms(prefix)?, map_fns(coords)?)
            }
            NetKind::PeriodicPlusRational {
                prefix,
                cycle,
                decay,
            } => NetSpec::periodic_plus_rational_with_prefix(
                space,
                map_terms(prefix)?,
                map_terms(cycle)?,
                map_fns(decay)?,
            ),
            NetKind::ProductSum { left, right } => {
                NetSpec::product_sum(self.apply_net(left)?, self.apply_net(right)?)
            }
            NetKind::Interleaved { a, b, selector } => NetSpec::interleaved(
                self.apply_net(a)?,
                self.apply_net(b)?,
                selector.clone(),
            ),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", v)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Membership transfer under a positive operator: `x ∈ L^r(net)` implies
/// `Tx ∈ L^{Tr}(T net)`.
pub fn operator_image_check(
    t: &RatMatrix,
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
) -> Result<Verdict> {
    t.nonnegative_entrywise()?;
    if !decide_rc(net, x, r)? {
        return Err(Error::Precondition {
            op: "operator_image_check",
            detail: "x is not a member before applying the operator".into(),
        });
    }
    let image_net = t.apply_net(net)?;
    let image_x = t.apply(x)?;
    let image_r = t.apply(r)?;
    if decide_rc(&image_net, &image_x, &image_r)? {
        Ok(Verdict::Accept)
    } else {
        Ok(Verdict::Reject(
            "image membership failed (positivity transfer violated)".into(),
        ))
    }
}

/// A roughly convergent net that stays above `x + r` converges plainly to
/// `x + r`: the shifted deviation `x_n - x - r` is squeezed between zero
/// and the certificate's witness.
pub fn shifted_c_check(
    net: &NetSpec,
    x: &Elem,
    r: &Elem,
    cert: &RcCertificate,
) -> Result<Verdict> {
    if &cert.target != x || &cert.roughness != r {
        return Err(Error::Precondition {
            op: "shifted_c_check",
            detail: "certificate data differs from the claimed shift".into(),
        });
    }
    match verify_rc(net, cert)? {
        Verdict::Accept => {}
        other => {
            return Err(Error::Precondition {
                op: "shifted_c_check",
                detail: format!("certificate did not verify ({})", other),
            })
        }
    }
    let shift = lattice::add(x, r)?;
    // x + r <= x_n for every n
    let diff = net::net_sub(net, &NetSpec::constant(shift.clone()))?;
    let lower_ok = match net.space() {
        Space::Lex => {
            let pair = diff.lex_view()?;
            crate::net::scalar::LexSeq {
                first: pair.first,
                second: pair.second,
            }
            .forall_nonneg(1)?
        }
        _ => {
            let views = diff.scalar_views()?;
            let mut verdict = ForallVerdict::True;
            for v in &views {
                if let ForallVerdict::FalseAt(n) = v.forall_nonneg(1)? {
                    verdict = match verdict {
                        ForallVerdict::True => ForallVerdict::FalseAt(n),
                        ForallVerdict::FalseAt(m) => ForallVerdict::FalseAt(m.min(n)),
                    };
                }
            }
            verdict
        }
    };
    if let ForallVerdict::FalseAt(n) = lower_ok {
        return Err(Error::Precondition {
            op: "shifted_c_check",
            detail: format!("lower bound x + r ≤ x_n fails at n={}", n),
        });
    }
    // θ <= x_n - (x + r) <= witness_n, and the witness is c-null, so the
    // squeezed deviation order-converges to zero
    let dominating = match &cert.evidence {
        WitnessEvidence::Direct => cert.witness.clone(),
        WitnessEvidence::Order(w) => w.dominating.clone(),
        _ => {
            return Err(Error::UnsupportedCombination {
                op: "shifted_c_check",
                detail: "shift transfer needs monotone or order evidence".into(),
            })
        }
    };
    let conv = ConvergenceStructure::order(net.space())?;
    verify_with_evidence(
        &conv,
        net,
        &shift,
        &WitnessEvidence::Order(OrderConvWitness { dominating }),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConeReport {
    /// For strictly positive roughness the positive cone fails to be
    /// rough-closed: the zero net lives in the cone, yet `-r` is one of
    /// its rough limit points.
    NotClosed { net: NetSpec, outside_member: Elem },
    /// At roughness zero limit sets are singletons and the cone is closed.
    Closed,
}

pub fn cone_closedness_demo(space: Space, r: &Elem) -> Result<ConeReport> {
    match space {
        Space::QVec(_) => {}
        other => {
            return Err(Error::UnsupportedSpace {
                op: "cone_closedness_demo",
                space: other,
            })
        }
    }
    let theta = Elem::zero(space);
    if !lattice::leq(&theta, r)? {
        return Err(Error::Precondition {
            op: "cone_closedness_demo",
            detail: "roughness must be ≥ θ".into(),
        });
    }
    if r == &theta {
        return Ok(ConeReport::Closed);
    }
    let net = NetSpec::constant(theta.clone());
    let member = lattice::neg(r);
    if !decide_rc(&net, &member, r)? {
        return Err(Error::Internal(
            "-r escaped the constant net's limit set".into(),
        ));
    }
    if lattice::leq(&theta, &member)? {
        return Err(Error::Internal("-r unexpectedly in the cone".into()));
    }
    Ok(ConeReport::NotClosed {
        net,
        outside_member: member,
    })
}
