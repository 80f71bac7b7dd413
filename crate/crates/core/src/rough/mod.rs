//! Rough convergence certificates, their verification and class-based
//! decision, and the exact computation of rough limit-point sets.
//!
//! A certificate asserts `|x_n - target| <= witness_n + roughness` for
//! every index, with the witness converging to zero in the certificate's
//! background convergence. Verification re-derives both halves exactly; on
//! the Dedekind complete coordinatewise space the separate decision
//! procedure asks `limsup |x_n - target| <= roughness` instead, and the
//! two routes agree.

mod limit_sets;
mod transforms;

pub use limit_sets::{
    bounded_set_membership, bounded_to_nonempty, closedness_check, cone_closedness_demo,
    convex_combine, diameter_check, equal_limit_sets_check, inclusion_check,
    nonempty_to_bounded, o_limit_membership, operator_image_check, shifted_c_check,
    subnet_inclusion_check, ClosednessVerdict, ConeReport, DiameterReport, InclusionVerdict,
    LimitSetComparison, RatMatrix,
};
pub use transforms::{
    canonical_certificate, cert_abs, cert_from_c, cert_interleave, cert_join, cert_join_const,
    cert_meet, cert_meet_const, cert_neg, cert_perturb, cert_pos, cert_scale, cert_subseq,
    cert_sum, cert_tail_extend,
};


use crate::conv::{verify_with_evidence, ConvergenceStructure, Verdict, WitnessEvidence};
use crate::error::{Error, Result};
use crate::exact::Limit;
use crate::lattice::{self, Elem, OrderBox, Space};
use crate::net::{self, Domination, NetKind, NetSpec};

/// A rough-convergence certificate: the claimed limit point, the roughness
/// degree, the null witness with its convergence evidence, and the
/// background convergence everything is read against.
#[derive(Clone, Debug, PartialEq)]
pub struct RcCertificate {
    pub witness: NetSpec,
    pub evidence: WitnessEvidence,
    pub roughness: Elem,
    pub target: Elem,
    pub conv: ConvergenceStructure,
}

impl RcCertificate {
    pub fn new(
        witness: NetSpec,
        evidence: WitnessEvidence,
        roughness: Elem,
        target: Elem,
        conv: ConvergenceStructure,
    ) -> Result<RcCertificate> {
        let space = conv.space();
        if witness.space() != space || roughness.space() != space || target.space() != space {
            return Err(Error::MixedSpace {
                left: space,
                right: witness.space(),
            });
        }
        let theta = Elem::zero(space);
        if !lattice::leq(&theta, &roughness)? {
            return Err(Error::InvalidConstruction(
                "roughness must be ≥ θ".into(),
            ));
        }
        Ok(RcCertificate {
            witness,
            evidence,
            roughness,
            target,
            conv,
        })
    }
}

/// Verifies a certificate against its net: the witness must converge to
/// zero under the certificate's convergence, and the rough domination
/// inequality must hold at every index.
pub fn verify_rc(net: &NetSpec, cert: &RcCertificate) -> Result<Verdict> {
    if net.space() != cert.conv.space() {
        return Err(Error::MixedSpace {
            left: net.space(),
            right: cert.conv.space(),
        });
    }
    if net.is_product() != cert.witness.is_product() {
        return Err(Error::IndexArity { op: "verify_rc" });
    }
    let theta = Elem::zero(net.space());
    match verify_with_evidence(&cert.conv, &cert.witness, &theta, &cert.evidence)? {
        Verdict::Accept => {}
        Verdict::Reject(r) => return Ok(Verdict::Reject(format!("witness: {}", r))),
        Verdict::Undecidable(r) => return Ok(Verdict::Undecidable(format!("witness: {}", r))),
    }
    if net.is_product() {
        return product_domination(net, cert);
    }
    match net::forall_dominated(net, &cert.target, &cert.witness, &cert.roughness)? {
        Domination::Holds => Ok(Verdict::Accept),
        Domination::FailsAt(n) => Ok(Verdict::Reject(format!("inequality fails at n={}", n))),
        Domination::Undecidable(kind) => Ok(Verdict::Undecidable(kind)),
    }
}

/// Exact check of `|L(a) + R(b) - target| <= WL(a) + WR(b) + r` over all
/// index pairs. The absolute value splits into two signed inequalities,
/// each of which separates into independent suprema of the two factors.
fn product_domination(net: &NetSpec, cert: &RcCertificate) -> Result<Verdict> {
    let space = net.space();
    match space {
        Space::QVec(_) => {}
        other => {
            return Ok(Verdict::Undecidable(format!(
                "product-index verification on {}",
                other
            )))
        }
    }
    let (nl, nr) = match net.kind() {
        NetKind::ProductSum { left, right } => (left, right),
        _ => unreachable!(),
    };
    let (wl, wr) = match cert.witness.kind() {
        NetKind::ProductSum { left, right } => (left, right),
        _ => unreachable!(),
    };
    let vl = nl.scalar_views()?;
    let vr = nr.scalar_views()?;
    let vwl = wl.scalar_views()?;
    let vwr = wr.scalar_views()?;
    let xs = cert.target.coords().unwrap();
    let rs = cert.roughness.coords().unwrap();
    for i in 0..vl.len() {
        for sign in [1i64, -1] {
            // sign * (L + R - x) <= WL + WR + r
            let (a, b) = if sign == 1 {
                (vl[i].sub(&vwl[i])?, vr[i].sub(&vwr[i])?)
            } else {
                (vl[i].neg().sub(&vwl[i])?, vr[i].neg().sub(&vwr[i])?)
            };
            let bound = if sign == 1 {
                &xs[i] + &rs[i]
            } else {
                &rs[i] - &xs[i]
            };
            let total = match (a.sup(1)?, b.sup(1)?) {
                (Limit::Finite(u), Limit::Finite(v)) => Limit::Finite(u + v),
                (Limit::MinusInfinity, _) | (_, Limit::MinusInfinity) => Limit::MinusInfinity,
                _ => Limit::PlusInfinity,
            };
            if !total.le_rational(&bound) {
                return Ok(Verdict::Reject(format!(
                    "product inequality fails in coordinate {}",
                    i + 1
                )));
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Class-based decision of rough order-convergence on the coordinatewise
/// space: membership is exactly `limsup |x_n - x| <= r`.
pub fn decide_rc(net: &NetSpec, x: &Elem, r: &Elem) -> Result<bool> {
    match net.space() {
        Space::QVec(_) => {}
        space => {
            return Err(Error::UnsupportedSpace {
                op: "decide_rc (use verify_rc with a certificate)",
                space,
            })
        }
    }
    let theta = Elem::zero(net.space());
    if !lattice::leq(&theta, r)? {
        return Err(Error::Precondition {
            op: "decide_rc",
            detail: "roughness must be ≥ θ".into(),
        });
    }
    let tb = net::limsup_abs_dev(net, x)?;
    tb.within(r)
}

/// The set of rough limit points of a net as an exact order interval.
#[derive(Clone, Debug, PartialEq)]
pub struct RoughLimitSet {
    /// The order interval realizing the set (possibly empty).
    pub interval: OrderBox,
    /// Human-readable note on the decision route.
    pub basis: String,
}

/// Computes the rough limit-point set exactly. Per coordinate, with
/// accumulation values `A_1..A_k` of the tail classes, a point `x` belongs
/// iff `max_j |A_j - x| <= r`, so the set is the box
/// `[max_j A_j - r, min_j A_j + r]` (empty when the bounds cross, or when
/// some tail class diverges).
pub fn limit_set(net: &NetSpec, r: &Elem) -> Result<RoughLimitSet> {
    let space = net.space();
    match space {
        Space::QVec(_) => {}
        other => {
            return Err(Error::UnsupportedSpace {
                op: "limit_set",
                space: other,
            })
        }
    }
    let theta = Elem::zero(space);
    if !lattice::leq(&theta, r)? {
        return Err(Error::Precondition {
            op: "limit_set",
            detail: "roughness must be ≥ θ".into(),
        });
    }
    let acc = net::accumulation_values(net)?;
    let rc = r.coords().unwrap();
    let mut lo = Vec::with_capacity(acc.len());
    let mut hi = Vec::with_capacity(acc.len());
    let classes = acc.first().map_or(0, |c| c.len());
    for (vals, ri) in acc.iter().zip(rc.iter()) {
        let mut max_v: Option<crate::exact::Rational> = None;
        let mut min_v: Option<crate::exact::Rational> = None;
        for v in vals {
            match v {
                Limit::Finite(v) => {
                    max_v = Some(max_v.map_or(v.clone(), |m| m.max(v.clone())));
                    min_v = Some(min_v.map_or(v.clone(), |m| m.min(v.clone())));
                }
                _ => {
                    return Ok(RoughLimitSet {
                        interval: OrderBox::empty(space),
                        basis: "unbounded: a tail class diverges, so no point is within any \
                                roughness of the tail"
                            .into(),
                    })
                }
            }
        }
        lo.push(max_v.unwrap() - ri);
        hi.push(min_v.unwrap() + ri);
    }
    let interval = OrderBox::make(Elem::qvec(lo)?, Elem::qvec(hi)?)?;
    Ok(RoughLimitSet {
        interval,
        basis: format!(
            "limsup criterion over {} accumulation value(s) per coordinate",
            classes
        ),
    })
}

/// Verifies plain fullification convergence: by definition it is rough
/// convergence at roughness zero, so the certificate must carry `r = θ`
/// and match the claimed structure and limit.
pub fn fullification_verify(
    c: &ConvergenceStructure,
    net: &NetSpec,
    x: &Elem,
    cert: &RcCertificate,
) -> Result<Verdict> {
    if &cert.conv != c {
        return Err(Error::Precondition {
            op: "fullification_verify",
            detail: format!("certificate is for {}, not {}", cert.conv, c),
        });
    }
    if &cert.target != x {
        return Err(Error::Precondition {
            op: "fullification_verify",
            detail: "certificate target differs from the claimed limit".into(),
        });
    }
    if !cert.roughness.is_zero() {
        return Err(Error::Precondition {
            op: "fullification_verify",
            detail: "fullification demands roughness θ".into(),
        });
    }
    verify_rc(net, cert)
}
