//! Concrete convergence structures: order convergence, monotone-decreasing
//! convergence, and norm convergence on the piecewise-linear space, each
//! with witness-checked verification and (where the space permits) a
//! class-based decision procedure.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{ForallVerdict, Limit, RationalFunction};
use crate::lattice::{self, Elem, PwLin, Space};
use crate::net::{self, Domination, Infimum, NetKind, NetSpec};

/// The named convergences the engine implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvName {
    OrderConv,
    MonotoneDecreasingConv,
    PwLinNormConv,
}

impl fmt::Display for ConvName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvName::OrderConv => write!(f, "order"),
            ConvName::MonotoneDecreasingConv => write!(f, "monotone"),
            ConvName::PwLinNormConv => write!(f, "pwlin-norm"),
        }
    }
}

/// Hypothesis flags the certificate transformers require of a background
/// convergence; each transformer checks them at entry so a construction
/// can never be applied outside its assumptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub verify: bool,
    pub decide: bool,
    pub linear: bool,
    pub full: bool,
    pub lattice: bool,
    pub additive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceStructure {
    name: ConvName,
    space: Space,
}

impl ConvergenceStructure {
    pub fn order(space: Space) -> Result<ConvergenceStructure> {
        match space {
            Space::QVec(_) | Space::Lex => Ok(ConvergenceStructure {
                name: ConvName::OrderConv,
                space,
            }),
            Space::PwLin => Err(Error::UnsupportedSpace {
                op: "order convergence",
                space,
            }),
        }
    }

    pub fn monotone_decreasing(space: Space) -> Result<ConvergenceStructure> {
        match space {
            Space::QVec(_) | Space::Lex => Ok(ConvergenceStructure {
                name: ConvName::MonotoneDecreasingConv,
                space,
            }),
            Space::PwLin => Err(Error::UnsupportedSpace {
                op: "monotone-decreasing convergence",
                space,
            }),
        }
    }

    pub fn pwlin_norm() -> ConvergenceStructure {
        ConvergenceStructure {
            name: ConvName::PwLinNormConv,
            space: Space::PwLin,
        }
    }

    pub fn name(&self) -> ConvName {
        self.name
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Order convergence on the coordinatewise space satisfies every
    /// structural hypothesis the transformers use. On the lexicographic plane
    /// scalar multiplication is not order continuous (`t_n * x` has no
    /// infimum when `x` has a positive head), so linearity is withheld
    /// there; the other dominator-algebra properties survive. The
    /// monotone convergence carries none of the structural flags.
    pub fn capabilities(&self) -> Capabilities {
        match (self.name, self.space) {
            (ConvName::OrderConv, Space::QVec(_)) => Capabilities {
                verify: true,
                decide: true,
                linear: true,
                full: true,
                lattice: true,
                additive: true,
            },
            (ConvName::OrderConv, _) => Capabilities {
                verify: true,
                decide: false,
                linear: false,
                full: true,
                lattice: true,
                additive: true,
            },
            (ConvName::MonotoneDecreasingConv, space) => Capabilities {
                verify: true,
                decide: matches!(space, Space::QVec(_)),
                linear: false,
                full: false,
                lattice: false,
                additive: false,
            },
            (ConvName::PwLinNormConv, _) => Capabilities {
                verify: true,
                decide: false,
                linear: true,
                full: false,
                lattice: false,
                additive: true,
            },
        }
    }
}

impl fmt::Display for ConvergenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.name, self.space)
    }
}

/// The dominating net certifying an order-convergence claim.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderConvWitness {
    pub dominating: NetSpec,
}

/// How a net's convergence claim is certified.
///
/// `Direct` claims the net itself carries the evidence (a monotone claim,
/// or exact periodicity for the norm convergence). `TailFrom` invokes the
/// tail axiom: the claim is certified from some index on, which extends to
/// the whole net. `Product` certifies a product-indexed sum to zero
/// factorwise.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessEvidence {
    Direct,
    Order(OrderConvWitness),
    NormFormula { formula: RationalFunction },
    TailFrom { from: u64, inner: Box<WitnessEvidence> },
    Product(Box<WitnessEvidence>, Box<WitnessEvidence>),
}

/// Outcome of a verification: `Reject` refutes the specific claim or
/// witness; `Undecidable` flags a class the engine cannot analyze, which
/// is distinct from refutation because convergence claims are existential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
    Undecidable(String),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject(reason) => write!(f, "reject: {}", reason),
            Verdict::Undecidable(class) => write!(f, "undecidable: {}", class),
        }
    }
}

/// Verifies `net -> x` under the structure `c` using an explicit witness
/// where the definition demands one (order convergence). The monotone
/// convergence ignores the witness.
pub fn conv_verify(
    c: &ConvergenceStructure,
    net: &NetSpec,
    x: &Elem,
    w: Option<&OrderConvWitness>,
) -> Result<Verdict> {
    match c.name {
        ConvName::OrderConv => {
            let w = w.ok_or(Error::Precondition {
                op: "conv_verify",
                detail: "order convergence requires a dominating witness".into(),
            })?;
            verify_with_evidence(c, net, x, &WitnessEvidence::Order(w.clone()))
        }
        _ => verify_with_evidence(c, net, x, &WitnessEvidence::Direct),
    }
}

/// The general verification engine behind `conv_verify`, accepting the
/// richer evidence forms certificates carry.
pub fn verify_with_evidence(
    c: &ConvergenceStructure,
    net: &NetSpec,
    x: &Elem,
    ev: &WitnessEvidence,
) -> Result<Verdict> {
    if net.space() != c.space || x.space() != c.space {
        return Err(Error::MixedSpace {
            left: c.space,
            right: net.space(),
        });
    }
    match ev {
        WitnessEvidence::TailFrom { from, inner } => {
            let tail = net::tail(net, *from)?;
            verify_with_evidence(c, &tail, x, inner)
        }
        WitnessEvidence::Product(left_ev, right_ev) => {
            let (l, r) = match net.kind() {
                NetKind::ProductSum { left, right } => (left, right),
                _ => {
                    return Err(Error::IndexArity {
                        op: "verify_with_evidence",
                    })
                }
            };
            if !x.is_zero() {
                return Ok(Verdict::Undecidable(
                    "product evidence applies to null limits only".into(),
                ));
            }
            let theta = Elem::zero(c.space);
            match verify_with_evidence(c, l, &theta, left_ev)? {
                Verdict::Accept => {}
                other => return Ok(prefixed(other, "left factor")),
            }
            match verify_with_evidence(c, r, &theta, right_ev)? {
                Verdict::Accept => Ok(Verdict::Accept),
                other => Ok(prefixed(other, "right factor")),
            }
        }
        WitnessEvidence::Order(w) => match c.name {
            ConvName::OrderConv => verify_order(net, x, w),
            // a dominating witness is simply ignored by the monotone check
            ConvName::MonotoneDecreasingConv => verify_monotone(net, x),
            ConvName::PwLinNormConv => Ok(Verdict::Undecidable(
                "norm convergence takes formula evidence".into(),
            )),
        },
        WitnessEvidence::Direct => match c.name {
            // a net that is itself decreasing to x order-converges to x
            ConvName::OrderConv | ConvName::MonotoneDecreasingConv => verify_monotone(net, x),
            ConvName::PwLinNormConv => verify_norm_periodic(net, x),
        },
        WitnessEvidence::NormFormula { formula } => match c.name {
            ConvName::PwLinNormConv => verify_norm_formula(net, x, formula),
            _ => Ok(Verdict::Undecidable(
                "formula evidence applies to the norm convergence only".into(),
            )),
        },
    }
}

fn prefixed(v: Verdict, who: &str) -> Verdict {
    match v {
        Verdict::Accept => Verdict::Accept,
        Verdict::Reject(r) => Verdict::Reject(format!("{}: {}", who, r)),
        Verdict::Undecidable(r) => Verdict::Undecidable(format!("{}: {}", who, r)),
    }
}

fn verify_monotone(net: &NetSpec, x: &Elem) -> Result<Verdict> {
    match net::is_decreasing(net) {
        Ok(ForallVerdict::True) => {}
        Ok(ForallVerdict::FalseAt(n)) => {
            return Ok(Verdict::Reject(format!("not decreasing at step {}", n)))
        }
        Err(Error::UndecidableClass { kind, .. }) => return Ok(Verdict::Undecidable(kind)),
        Err(e) => return Err(e),
    }
    match net::infimum(net)? {
        Infimum::Exists(v) if &v == x => Ok(Verdict::Accept),
        Infimum::Exists(v) => Ok(Verdict::Reject(format!(
            "infimum {} differs from the claimed limit {}",
            v, x
        ))),
        Infimum::DoesNotExist => Ok(Verdict::Reject("infimum does not exist".into())),
        Infimum::Undecidable(kind) => Ok(Verdict::Undecidable(kind)),
    }
}

fn verify_order(net: &NetSpec, x: &Elem, w: &OrderConvWitness) -> Result<Verdict> {
    let dom = &w.dominating;
    if dom.space() != net.space() {
        return Err(Error::MixedSpace {
            left: net.space(),
            right: dom.space(),
        });
    }
    match net::is_decreasing(dom) {
        Ok(ForallVerdict::True) => {}
        Ok(ForallVerdict::FalseAt(n)) => {
            return Ok(Verdict::Reject(format!(
                "dominating net rises at step {}",
                n
            )))
        }
        Err(Error::UndecidableClass { kind, .. }) => return Ok(Verdict::Undecidable(kind)),
        Err(e) => return Err(e),
    }
    let theta = Elem::zero(net.space());
    match net::infimum(dom)? {
        Infimum::Exists(v) if v == theta => {}
        Infimum::Exists(_) => {
            return Ok(Verdict::Reject(
                "dominating net does not decrease to zero".into(),
            ))
        }
        Infimum::DoesNotExist => {
            return Ok(Verdict::Reject("dominating net has no infimum".into()))
        }
        Infimum::Undecidable(kind) => return Ok(Verdict::Undecidable(kind)),
    }
    match net::forall_dominated(net, x, dom, &theta)? {
        Domination::Holds => Ok(Verdict::Accept),
        Domination::FailsAt(n) => Ok(Verdict::Reject(format!("domination fails at n={}", n))),
        Domination::Undecidable(kind) => Ok(Verdict::Undecidable(kind)),
    }
}

/// Exact norm-convergence check for eventually periodic piecewise-linear
/// nets: the tail deviation norms repeat, so they vanish iff every cycle
/// element equals the limit.
fn verify_norm_periodic(net: &NetSpec, x: &Elem) -> Result<Verdict> {
    match net.kind() {
        NetKind::EventuallyPeriodic { cycle, .. } => {
            for (i, e) in cycle.iter().enumerate() {
                if e != x {
                    return Ok(Verdict::Reject(format!(
                        "periodic deviation does not vanish (cycle entry {})",
                        i
                    )));
                }
            }
            Ok(Verdict::Accept)
        }
        _ => Ok(Verdict::Undecidable(format!(
            "{} net needs norm-formula evidence",
            net.kind_name()
        ))),
    }
}

fn verify_norm_formula(net: &NetSpec, x: &Elem, formula: &RationalFunction) -> Result<Verdict> {
    let terms = match net.kind() {
        NetKind::FiniteList { terms } => terms,
        _ => {
            return Ok(Verdict::Undecidable(format!(
                "norm-formula evidence verifies finite families, not {}",
                net.kind_name()
            )))
        }
    };
    let xf = x.as_pwlin().ok_or(Error::UnsupportedSpace {
        op: "norm verification",
        space: x.space(),
    })?;
    for (i, f) in terms.iter().enumerate() {
        let n = i as u64 + 1;
        let g = f.as_pwlin().expect("space checked");
        if g.sub(xf).norm() != formula.eval(n)? {
            return Ok(Verdict::Reject(format!("norm formula mismatch at n={}", n)));
        }
    }
    if formula.limit() == Limit::Finite(num_traits::Zero::zero()) {
        Ok(Verdict::Accept)
    } else {
        Ok(Verdict::Reject(
            "norm formula does not vanish at infinity".into(),
        ))
    }
}

/// Class-based decision, complete on the coordinatewise space: for order
/// convergence it asks the deviation's limsup to vanish (which equals
/// verification under the canonical tail-sup witness); for the monotone
/// convergence it asks for decrease to the exact infimum.
pub fn conv_decide(c: &ConvergenceStructure, net: &NetSpec, x: &Elem) -> Result<bool> {
    match c.space {
        Space::QVec(_) => {}
        space => {
            return Err(Error::UnsupportedSpace {
                op: "conv_decide",
                space,
            })
        }
    }
    match c.name {
        ConvName::OrderConv => net::converges_to(net, x),
        ConvName::MonotoneDecreasingConv => {
            match net::is_decreasing(net)? {
                ForallVerdict::FalseAt(_) => return Ok(false),
                ForallVerdict::True => {}
            }
            match net::infimum(net)? {
                Infimum::Exists(v) => Ok(&v == x),
                Infimum::DoesNotExist => Ok(false),
                Infimum::Undecidable(kind) => Err(Error::UndecidableClass {
                    op: "conv_decide",
                    kind,
                }),
            }
        }
        ConvName::PwLinNormConv => Err(Error::UnsupportedSpace {
            op: "conv_decide",
            space: Space::PwLin,
        }),
    }
}

/// Outcome of the bounded-horizon norm-formula consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormConsistency {
    ConsistentUpTo(u64),
    Inconsistent(u64),
}

/// Verifies `||f_n - x|| = formula(n)` exactly for `n = 1..=horizon` over
/// an explicitly constructed family; convergence of the family then reads
/// off `formula`'s limit.
pub fn pwlin_norm_conv_check(
    family: &[PwLin],
    x: &PwLin,
    formula: &RationalFunction,
    horizon: u64,
) -> Result<NormConsistency> {
    if (family.len() as u64) < horizon {
        return Err(Error::Precondition {
            op: "pwlin_norm_conv_check",
            detail: format!(
                "family supplies {} functions, horizon asks {}",
                family.len(),
                horizon
            ),
        });
    }
    for n in 1..=horizon {
        let dev = family[n as usize - 1].sub(x);
        if lattice::pwlin_norm(&dev) != formula.eval(n)? {
            return Ok(NormConsistency::Inconsistent(n));
        }
    }
    Ok(NormConsistency::ConsistentUpTo(horizon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, Polynomial};

    fn q1(v: i64) -> Elem {
        Elem::scalar(rat(v))
    }

    fn one_over_n() -> RationalFunction {
        RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap()
    }

    fn lex_rt(c1: Option<i64>, c2: i64) -> NetSpec {
        // (c1/n or 0, c2/n)
        let f1 = match c1 {
            Some(c) => one_over_n().scale(&rat(c)),
            None => RationalFunction::zero(),
        };
        NetSpec::rational_term(Space::Lex, vec![f1, one_over_n().scale(&rat(c2))]).unwrap()
    }

    #[test]
    fn monotone_lex_example() {
        let c = ConvergenceStructure::monotone_decreasing(Space::Lex).unwrap();
        let theta = Elem::zero(Space::Lex);
        // (1/n, 1/n) is decreasing but has no infimum
        let v = conv_verify(&c, &lex_rt(Some(1), 1), &theta, None).unwrap();
        assert_eq!(v, Verdict::Reject("infimum does not exist".into()));
        // (0, 2/n) decreases to the origin
        let v = conv_verify(&c, &lex_rt(None, 2), &theta, None).unwrap();
        assert_eq!(v, Verdict::Accept);
    }

    #[test]
    fn order_self_domination() {
        let c = ConvergenceStructure::order(Space::QVec(1)).unwrap();
        let net = NetSpec::rational_term(Space::QVec(1), vec![one_over_n()]).unwrap();
        let w = OrderConvWitness {
            dominating: net.clone(),
        };
        assert_eq!(
            conv_verify(&c, &net, &q1(0), Some(&w)).unwrap(),
            Verdict::Accept
        );
        assert!(matches!(
            conv_verify(&c, &net, &q1(0), None),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn order_rejects_bad_witness() {
        let c = ConvergenceStructure::order(Space::QVec(1)).unwrap();
        let net = NetSpec::eventually_periodic(Space::QVec(1), vec![], vec![q1(1), q1(-1)])
            .unwrap();
        // constant zero witness cannot dominate the oscillation
        let w = OrderConvWitness {
            dominating: NetSpec::constant(q1(0)),
        };
        match conv_verify(&c, &net, &q1(0), Some(&w)).unwrap() {
            Verdict::Reject(r) => assert!(r.contains("domination fails")),
            other => panic!("expected rejection, got {:?}", other),
        }
        // a rising witness is rejected for monotonicity
        let w = OrderConvWitness {
            dominating: net.clone(),
        };
        match conv_verify(&c, &net, &q1(0), Some(&w)).unwrap() {
            Verdict::Reject(r) => assert!(r.contains("rises")),
            other => panic!("expected rejection, got {:?}", other),
        }
    }

    #[test]
    fn decide_matches_examples() {
        let c = ConvergenceStructure::order(Space::QVec(1)).unwrap();
        let cyc = NetSpec::eventually_periodic(Space::QVec(1), vec![], vec![q1(1), q1(-1)])
            .unwrap();
        assert!(!conv_decide(&c, &cyc, &q1(0)).unwrap());
        let c2 = ConvergenceStructure::order(Space::QVec(2)).unwrap();
        let pair = NetSpec::rational_term(Space::QVec(2), vec![one_over_n(), one_over_n()])
            .unwrap();
        assert!(conv_decide(&c2, &pair, &Elem::qvec(vec![rat(0), rat(0)]).unwrap()).unwrap());
        let cst = NetSpec::constant(q1(3));
        assert!(conv_decide(&c, &cst, &q1(3)).unwrap());
    }

    #[test]
    fn tail_evidence_extends() {
        // rises at the very first step, but decreases to 5 from index 2 on
        let net = NetSpec::eventually_periodic(
            Space::QVec(1),
            vec![q1(1), q1(9)],
            vec![q1(5)],
        )
        .unwrap();
        let c = ConvergenceStructure::monotone_decreasing(Space::QVec(1)).unwrap();
        assert!(matches!(
            conv_verify(&c, &net, &q1(5), None).unwrap(),
            Verdict::Reject(_)
        ));
        let ev = WitnessEvidence::TailFrom {
            from: 2,
            inner: Box::new(WitnessEvidence::Direct),
        };
        assert_eq!(
            verify_with_evidence(&c, &net, &q1(5), &ev).unwrap(),
            Verdict::Accept
        );
    }

    #[test]
    fn norm_formula_mode() {
        let c = ConvergenceStructure::pwlin_norm();
        // family (1/n) * 1 with formula 1/n: norms match and vanish
        let fam: Vec<Elem> = (1..=20)
            .map(|n| Elem::pwlin(PwLin::constant(ratio(1, n))))
            .collect();
        let net = NetSpec::finite(Space::PwLin, fam).unwrap();
        let theta = Elem::zero(Space::PwLin);
        let ev = WitnessEvidence::NormFormula {
            formula: one_over_n(),
        };
        assert_eq!(
            verify_with_evidence(&c, &net, &theta, &ev).unwrap(),
            Verdict::Accept
        );
        // constant nonzero family fails the vanishing requirement
        let fam: Vec<Elem> = (1..=5).map(|_| Elem::pwlin(PwLin::constant(rat(1)))).collect();
        let net = NetSpec::finite(Space::PwLin, fam).unwrap();
        let ev = WitnessEvidence::NormFormula {
            formula: RationalFunction::constant(rat(1)),
        };
        assert!(matches!(
            verify_with_evidence(&c, &net, &theta, &ev).unwrap(),
            Verdict::Reject(_)
        ));
    }

    #[test]
    fn norm_check_function() {
        // f_n = x + 1/n: sup-norm deviation 1/n, slope deviation 0
        let x = PwLin::constant(rat(2));
        let fam: Vec<PwLin> = (1..=50)
            .map(|n| PwLin::constant(rat(2) + ratio(1, n)))
            .collect();
        assert_eq!(
            pwlin_norm_conv_check(&fam, &x, &one_over_n(), 50).unwrap(),
            NormConsistency::ConsistentUpTo(50)
        );
        let wrong = RationalFunction::constant(ratio(1, 2));
        assert_eq!(
            pwlin_norm_conv_check(&fam, &x, &wrong, 50).unwrap(),
            NormConsistency::Inconsistent(1)
        );
        assert!(pwlin_norm_conv_check(&fam, &x, &one_over_n(), 60).is_err());
        // a constant family deviates by zero against the zero formula
        let same: Vec<PwLin> = (1..=20).map(|_| x.clone()).collect();
        assert_eq!(
            pwlin_norm_conv_check(&same, &x, &RationalFunction::zero(), 20).unwrap(),
            NormConsistency::ConsistentUpTo(20)
        );
    }

    #[test]
    fn verdict_serialization() {
        assert_eq!(Verdict::Accept.to_string(), "accept");
        assert_eq!(
            Verdict::Reject("infimum does not exist".into()).to_string(),
            "reject: infimum does not exist"
        );
        assert_eq!(
            Verdict::Undecidable("finite-list".into()).to_string(),
            "undecidable: finite-list"
        );
    }
}
