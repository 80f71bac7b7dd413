//! Certificate transformers realizing the convergence-preserving
//! constructions: sums and scalings over product indices, lattice
//! operations, perturbations, interleavings, subsequences, and tail
//! extension. Each transformer builds exactly the witness its underlying
//! proof exhibits — none of them searches.

use num_traits::Signed;

use crate::conv::{
    verify_with_evidence, ConvergenceStructure, ConvName, OrderConvWitness, Verdict,
    WitnessEvidence,
};
use crate::error::{Error, Result};
use crate::exact::{ForallVerdict, Limit, Rational};
use crate::lattice::{self, Elem, Space};
use crate::net::{self, Domination, NetSpec};
use crate::rough::RcCertificate;

fn require(conv: &ConvergenceStructure, flag: &'static str, op: &'static str) -> Result<()> {
    let caps = conv.capabilities();
    let ok = match flag {
        "linear" => caps.linear,
        "full" => caps.full,
        "lattice" => caps.lattice,
        "additive" => caps.additive,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::CapabilityMismatch {
            op,
            required: flag,
            conv: conv.to_string(),
        })
    }
}

fn same_conv(a: &RcCertificate, b: &RcCertificate, op: &'static str) -> Result<()> {
    if a.conv != b.conv {
        return Err(Error::Precondition {
            op,
            detail: format!(
                "certificates carry different convergences ({} vs {})",
                a.conv, b.conv
            ),
        });
    }
    Ok(())
}

/// Sum certificate over the product index: witnesses add, targets add,
/// roughness degrees add.
pub fn cert_sum(c1: &RcCertificate, c2: &RcCertificate) -> Result<RcCertificate> {
    same_conv(c1, c2, "cert_sum")?;
    require(&c1.conv, "linear", "cert_sum")?;
    RcCertificate::new(
        net::net_product_sum(&c1.witness, &c2.witness)?,
        WitnessEvidence::Product(
            Box::new(c1.evidence.clone()),
            Box::new(c2.evidence.clone()),
        ),
        lattice::add(&c1.roughness, &c2.roughness)?,
        lattice::add(&c1.target, &c2.target)?,
        c1.conv.clone(),
    )
}

fn scale_evidence(ev: &WitnessEvidence, m: &Rational) -> Result<WitnessEvidence> {
    Ok(match ev {
        WitnessEvidence::Direct => WitnessEvidence::Direct,
        WitnessEvidence::Order(w) => WitnessEvidence::Order(OrderConvWitness {
            dominating: net::net_scale(m, &w.dominating)?,
        }),
        WitnessEvidence::TailFrom { from, inner } => WitnessEvidence::TailFrom {
            from: *from,
            inner: Box::new(scale_evidence(inner, m)?),
        },
        _ => {
            return Err(Error::UnsupportedCombination {
                op: "cert_scale",
                detail: "cannot scale this evidence form".into(),
            })
        }
    })
}

/// Scaling certificate over the product index `(scalar, net)`: given the
/// scalar net's limit `t` and a slack `rho >= 0` with `|t_g| <= |t| + rho`
/// for all `g`, the scaled net converges roughly to `t*x` with roughness
/// `(|t| + rho) * r`. The witness is the proof's
/// `|t_g - t|*|x| + (|t| + rho)*u_a`, as a product-indexed sum.
pub fn cert_scale(
    cert: &RcCertificate,
    t_net: &NetSpec,
    rho: &Rational,
) -> Result<RcCertificate> {
    require(&cert.conv, "linear", "cert_scale")?;
    if t_net.space() != Space::QVec(1) {
        return Err(Error::Precondition {
            op: "cert_scale",
            detail: "the scalar net must live in qvec 1".into(),
        });
    }
    if rho.is_negative() {
        return Err(Error::Precondition {
            op: "cert_scale",
            detail: "rho must be nonnegative".into(),
        });
    }
    let tv = &t_net.scalar_views()?[0];
    let t = match tv.limit() {
        Some(Limit::Finite(t)) => t,
        _ => {
            return Err(Error::Precondition {
                op: "cert_scale",
                detail: "the scalar net does not converge".into(),
            })
        }
    };
    let m = t.abs() + rho;
    // |t_g| <= m for every index
    let slack = tv.abs()?.neg().add_const(&m);
    if let ForallVerdict::FalseAt(g) = slack.forall_nonneg(1)? {
        return Err(Error::Precondition {
            op: "cert_scale",
            detail: format!("|t_{}| exceeds |t| + rho", g),
        });
    }
    // left factor: |t_g - t| * |x| over the scalar index
    let dev = tv.add_const(&-t.clone()).abs()?;
    let x_abs = lattice::abs(&cert.target);
    let coords = x_abs.coords().ok_or(Error::UnsupportedSpace {
        op: "cert_scale",
        space: cert.target.space(),
    })?;
    let left_views: Result<Vec<_>> = coords.iter().map(|c| Ok(dev.scale(c))).collect();
    let left = crate::net::netspec_from_views(cert.target.space(), left_views?)?;
    let left_ev = WitnessEvidence::Order(OrderConvWitness {
        dominating: net::canonical_null_witness(
            &left,
            &Elem::zero(left.space()),
            &Elem::zero(left.space()),
        )?,
    });
    let right = net::net_scale(&m, &cert.witness)?;
    let right_ev = scale_evidence(&cert.evidence, &m)?;
    RcCertificate::new(
        net::net_product_sum(&left, &right)?,
        WitnessEvidence::Product(Box::new(left_ev), Box::new(right_ev)),
        lattice::scale(&m, &cert.roughness),
        lattice::scale(&t, &cert.target),
        cert.conv.clone(),
    )
}

/// Promotes a plain convergence proof to a rough certificate at any
/// nonnegative roughness: the witness is the convergence's own dominating
/// data.
pub fn cert_from_c(
    c: &ConvergenceStructure,
    net: &NetSpec,
    x: &Elem,
    ev: &WitnessEvidence,
    r: Elem,
) -> Result<RcCertificate> {
    match verify_with_evidence(c, net, x, ev)? {
        Verdict::Accept => {}
        other => {
            return Err(Error::Precondition {
                op: "cert_from_c",
                detail: format!("the convergence claim did not verify ({})", other),
            })
        }
    }
    let (witness, evidence) = match (c.name(), ev) {
        (ConvName::OrderConv, WitnessEvidence::Order(w)) => {
            // the dominating net is itself a null witness
            (w.dominating.clone(), WitnessEvidence::Direct)
        }
        (ConvName::OrderConv | ConvName::MonotoneDecreasingConv, WitnessEvidence::Direct) => {
            // the net decreases to x, so x_n - x is the canonical witness
            (
                net::net_sub(net, &NetSpec::constant(x.clone()))?,
                WitnessEvidence::Direct,
            )
        }
        (ConvName::PwLinNormConv, WitnessEvidence::NormFormula { formula }) => {
            // ||f_n - x|| = || |f_n - x| ||: slopes only flip sign at kinks
            let len = net.finite_len().ok_or(Error::UndecidableClass {
                op: "cert_from_c",
                kind: net.kind_name().into(),
            })?;
            let mut terms = Vec::with_capacity(len);
            for n in 1..=len as u64 {
                terms.push(lattice::abs(&lattice::sub(&net.term(n)?, x)?));
            }
            (
                NetSpec::finite(Space::PwLin, terms)?,
                WitnessEvidence::NormFormula {
                    formula: formula.clone(),
                },
            )
        }
        _ => {
            return Err(Error::UnsupportedCombination {
                op: "cert_from_c",
                detail: "unsupported convergence/evidence pairing".into(),
            })
        }
    };
    RcCertificate::new(witness, evidence, r, x.clone(), c.clone())
}

/// Transfers a certificate across a uniformly bounded perturbation: if the
/// certified net stays within `t` of the observed net at every index, the
/// observed net inherits the certificate at roughness `r + t`.
pub fn cert_perturb(
    cert: &RcCertificate,
    certified_net: &NetSpec,
    observed_net: &NetSpec,
    t: &Elem,
) -> Result<RcCertificate> {
    let theta = Elem::zero(cert.target.space());
    if !lattice::leq(&theta, t)? {
        return Err(Error::Precondition {
            op: "cert_perturb",
            detail: "perturbation bound must be ≥ θ".into(),
        });
    }
    let diff = net::net_sub(observed_net, certified_net)?;
    match net::forall_dominated(&diff, &theta, &NetSpec::constant(theta.clone()), t)? {
        Domination::Holds => {}
        Domination::FailsAt(n) => {
            return Err(Error::Precondition {
                op: "cert_perturb",
                detail: format!("perturbation bound fails at n={}", n),
            })
        }
        Domination::Undecidable(kind) => {
            return Err(Error::UndecidableClass {
                op: "cert_perturb",
                kind,
            })
        }
    }
    RcCertificate::new(
        cert.witness.clone(),
        cert.evidence.clone(),
        lattice::add(&cert.roughness, t)?,
        cert.target.clone(),
        cert.conv.clone(),
    )
}

fn lattice_unary(
    cert: &RcCertificate,
    op: &'static str,
    target: Elem,
) -> Result<RcCertificate> {
    require(&cert.conv, "lattice", op)?;
    RcCertificate::new(
        cert.witness.clone(),
        cert.evidence.clone(),
        cert.roughness.clone(),
        target,
        cert.conv.clone(),
    )
}

/// `|x_n| -> |x|` at the same roughness (lattice property of rough
/// convergence): the witness transfers unchanged.
pub fn cert_abs(cert: &RcCertificate) -> Result<RcCertificate> {
    lattice_unary(cert, "cert_abs", lattice::abs(&cert.target))
}

pub fn cert_pos(cert: &RcCertificate) -> Result<RcCertificate> {
    lattice_unary(cert, "cert_pos", lattice::pos_part(&cert.target))
}

pub fn cert_neg(cert: &RcCertificate) -> Result<RcCertificate> {
    lattice_unary(cert, "cert_neg", lattice::neg_part(&cert.target))
}

pub fn cert_join_const(cert: &RcCertificate, y: &Elem) -> Result<RcCertificate> {
    lattice_unary(cert, "cert_join_const", lattice::join(&cert.target, y)?)
}

pub fn cert_meet_const(cert: &RcCertificate, y: &Elem) -> Result<RcCertificate> {
    lattice_unary(cert, "cert_meet_const", lattice::meet(&cert.target, y)?)
}

fn lattice_binary(
    c1: &RcCertificate,
    c2: &RcCertificate,
    op: &'static str,
    target: Elem,
) -> Result<RcCertificate> {
    same_conv(c1, c2, op)?;
    require(&c1.conv, "additive", op)?;
    RcCertificate::new(
        net::net_product_sum(&c1.witness, &c2.witness)?,
        WitnessEvidence::Product(
            Box::new(c1.evidence.clone()),
            Box::new(c2.evidence.clone()),
        ),
        lattice::add(&c1.roughness, &c2.roughness)?,
        target,
        c1.conv.clone(),
    )
}

/// `(x_a v y_b) -> x v y` over the product index with roughness `r + t`;
/// the witness is the summed pair `z_a + w_b` from the proof's chain
/// `|x_a v y_b - x v y| <= |x_a - x| + |y_b - y|`.
pub fn cert_join(c1: &RcCertificate, c2: &RcCertificate) -> Result<RcCertificate> {
    let target = lattice::join(&c1.target, &c2.target)?;
    lattice_binary(c1, c2, "cert_join", target)
}

pub fn cert_meet(c1: &RcCertificate, c2: &RcCertificate) -> Result<RcCertificate> {
    let target = lattice::meet(&c1.target, &c2.target)?;
    lattice_binary(c1, c2, "cert_meet", target)
}

fn dominator_of(witness: &NetSpec, ev: &WitnessEvidence) -> Result<NetSpec> {
    match ev {
        // a Direct null witness is decreasing, hence dominates itself
        WitnessEvidence::Direct => Ok(witness.clone()),
        WitnessEvidence::Order(w) => Ok(w.dominating.clone()),
        _ => Err(Error::UnsupportedCombination {
            op: "cert_interleave",
            detail: "interleaving needs monotone or order evidence".into(),
        }),
    }
}

/// Certificate for a net picking each term from one of two nets that both
/// roughly converge to the same point with the same roughness: the witness
/// is the join of the two witnesses.
pub fn cert_interleave(
    c1: &RcCertificate,
    c2: &RcCertificate,
    mask: &[bool],
) -> Result<RcCertificate> {
    same_conv(c1, c2, "cert_interleave")?;
    require(&c1.conv, "full", "cert_interleave")?;
    require(&c1.conv, "lattice", "cert_interleave")?;
    if c1.target != c2.target {
        return Err(Error::Precondition {
            op: "cert_interleave",
            detail: "the two certificates claim different limits".into(),
        });
    }
    if c1.roughness != c2.roughness {
        return Err(Error::Precondition {
            op: "cert_interleave",
            detail: "the two certificates carry different roughness".into(),
        });
    }
    let _ = mask;
    let witness = net::net_join(&c1.witness, &c2.witness)?;
    let evidence = match (&c1.evidence, &c2.evidence) {
        (WitnessEvidence::Direct, WitnessEvidence::Direct) => WitnessEvidence::Direct,
        (e1, e2) => WitnessEvidence::Order(OrderConvWitness {
            dominating: net::net_join(&dominator_of(&c1.witness, e1)?, &dominator_of(&c2.witness, e2)?)?,
        }),
    };
    RcCertificate::new(
        witness,
        evidence,
        c1.roughness.clone(),
        c1.target.clone(),
        c1.conv.clone(),
    )
}

fn subseq_evidence(ev: &WitnessEvidence, stride: u64, offset: u64) -> Result<WitnessEvidence> {
    Ok(match ev {
        WitnessEvidence::Direct => WitnessEvidence::Direct,
        WitnessEvidence::Order(w) => WitnessEvidence::Order(OrderConvWitness {
            dominating: net::subseq_arith(&w.dominating, stride, offset)?,
        }),
        WitnessEvidence::NormFormula { formula } => WitnessEvidence::NormFormula {
            formula: formula.compose_affine(stride as i64, offset as i64)?,
        },
        _ => {
            return Err(Error::UnsupportedCombination {
                op: "cert_subseq",
                detail: "cannot reindex this evidence form".into(),
            })
        }
    })
}

/// Restriction of a certificate to an arithmetic subsequence (the subnet
/// axiom): witness and evidence are reindexed alongside the net.
pub fn cert_subseq(cert: &RcCertificate, stride: u64, offset: u64) -> Result<RcCertificate> {
    RcCertificate::new(
        net::subseq_arith(&cert.witness, stride, offset)?,
        subseq_evidence(&cert.evidence, stride, offset)?,
        cert.roughness.clone(),
        cert.target.clone(),
        cert.conv.clone(),
    )
}

/// Extends a certificate for `tail(net, from)` to the whole net (the tail
/// axiom): the spliced witness reads `|x_n - target|` on the skipped head
/// and the tail witness afterwards, with tail evidence.
pub fn cert_tail_extend(
    tail_cert: &RcCertificate,
    net: &NetSpec,
    from: u64,
) -> Result<RcCertificate> {
    if from == 0 {
        return Err(Error::IndexZero);
    }
    let mut head = Vec::with_capacity(from as usize - 1);
    for n in 1..from {
        head.push(lattice::abs(&lattice::sub(&net.term(n)?, &tail_cert.target)?));
    }
    let witness = net::prepend_terms(&head, &tail_cert.witness)?;
    RcCertificate::new(
        witness,
        WitnessEvidence::TailFrom {
            from,
            inner: Box::new(tail_cert.evidence.clone()),
        },
        tail_cert.roughness.clone(),
        tail_cert.target.clone(),
        tail_cert.conv.clone(),
    )
}

/// The canonical certificate on the coordinatewise space: its witness is
/// the decreasing dominator built from the tail analysis, so it verifies
/// exactly when the class decision accepts membership.
pub fn canonical_certificate(net: &NetSpec, x: &Elem, r: &Elem) -> Result<RcCertificate> {
    let conv = ConvergenceStructure::order(net.space())?;
    RcCertificate::new(
        net::canonical_null_witness(net, x, r)?,
        WitnessEvidence::Direct,
        r.clone(),
        x.clone(),
        conv,
    )
}
