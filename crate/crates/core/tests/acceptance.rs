//! Acceptance suite: one test per shipped criterion, each printing its
//! pass line. Every tolerance here is exact rational equality or an exact
//! order comparison; the only numeric thresholds are wall-clock budgets.

mod common;

use std::time::Instant;

use common::*;
use rand::Rng;

use roughlat_core::conv::{
    conv_verify, ConvergenceStructure, NormConsistency, Verdict, WitnessEvidence,
};
use roughlat_core::exact::{Limit, Polynomial, Rational, RationalFunction};
use roughlat_core::lattice::{self, Elem, PwLin, Space};
use roughlat_core::net::{self, NetSpec};
use roughlat_core::oracle::{brute_limit_set, brute_membership, BruteVerdict, GridSpec};
use roughlat_core::rough::{
    bounded_to_nonempty, canonical_certificate, cert_subseq, cert_tail_extend, closedness_check,
    cone_closedness_demo, convex_combine, decide_rc, diameter_check, equal_limit_sets_check,
    inclusion_check, limit_set, nonempty_to_bounded, o_limit_membership, operator_image_check,
    subnet_inclusion_check, verify_rc, ClosednessVerdict, ConeReport, InclusionVerdict,
    LimitSetComparison, RatMatrix, RcCertificate,
};

fn one_over_n() -> RationalFunction {
    RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap()
}

/// The worked piecewise-linear function: 0 on [0,1/2], 2t-1 on [1/2,1].
fn ramp() -> PwLin {
    PwLin::new(
        vec![rat(0), ratio(1, 2), rat(1)],
        vec![rat(0), rat(0), rat(1)],
    )
    .unwrap()
}

#[test]
fn criterion_1_pwlin_norm_family() {
    let started = Instant::now();
    let f = ramp();
    let family: Vec<PwLin> = (1..=100i64)
        .map(|n| f.sub(&PwLin::constant(ratio(1, n))).abs())
        .collect();
    // ||f_n - f|| = (4n + 1)/n exactly for n = 1..100
    let formula = RationalFunction::new(
        Polynomial::new(vec![rat(1), rat(4)]),
        Polynomial::var(),
        1,
    )
    .unwrap();
    for (i, fam) in family.iter().enumerate() {
        let n = i as i64 + 1;
        assert_eq!(
            lattice::pwlin_norm(&fam.sub(&f)),
            (rat(4 * n) + rat(1)) / rat(n),
            "norm mismatch at n = {}",
            n
        );
    }
    assert_eq!(
        roughlat_core::conv::pwlin_norm_conv_check(&family, &f, &formula, 100).unwrap(),
        NormConsistency::ConsistentUpTo(100)
    );
    // the norms converge to 4, not 0: no norm convergence
    assert_eq!(formula.limit(), Limit::Finite(rat(4)));
    assert_ne!(formula.limit(), Limit::Finite(rat(0)));
    // yet rough convergence at the constant roughness 4 holds, with the
    // norm-null witness (1/n) * 1
    let net = NetSpec::finite(
        Space::PwLin,
        family.iter().cloned().map(Elem::pwlin).collect(),
    )
    .unwrap();
    let witness = NetSpec::finite(
        Space::PwLin,
        (1..=100i64)
            .map(|n| Elem::pwlin(PwLin::constant(ratio(1, n))))
            .collect(),
    )
    .unwrap();
    let cert = RcCertificate::new(
        witness,
        WitnessEvidence::NormFormula {
            formula: one_over_n(),
        },
        Elem::pwlin(PwLin::constant(rat(4))),
        Elem::pwlin(f),
        ConvergenceStructure::pwlin_norm(),
    )
    .unwrap();
    assert_eq!(verify_rc(&net, &cert).unwrap(), Verdict::Accept);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    println!(
        "criterion 1 (piecewise-linear norm family, n = 1..100): PASS in {:?}",
        elapsed
    );
}

/// The pointwise deviation |f_n - f| <= (1/n) * 1 is stronger than the
/// norm picture suggests: even roughness zero is certified by the same
/// norm-null witness. Recorded alongside the stated claim.
#[test]
fn pwlin_family_pointwise_bound_admits_zero_roughness() {
    let f = ramp();
    let family: Vec<Elem> = (1..=100i64)
        .map(|n| Elem::pwlin(f.sub(&PwLin::constant(ratio(1, n))).abs()))
        .collect();
    let net = NetSpec::finite(Space::PwLin, family).unwrap();
    let witness = NetSpec::finite(
        Space::PwLin,
        (1..=100i64)
            .map(|n| Elem::pwlin(PwLin::constant(ratio(1, n))))
            .collect(),
    )
    .unwrap();
    let cert = RcCertificate::new(
        witness,
        WitnessEvidence::NormFormula {
            formula: one_over_n(),
        },
        Elem::pwlin(PwLin::zero()),
        Elem::pwlin(f),
        ConvergenceStructure::pwlin_norm(),
    )
    .unwrap();
    assert_eq!(verify_rc(&net, &cert).unwrap(), Verdict::Accept);
}

#[test]
fn criterion_2_lexicographic_example() {
    let net = NetSpec::rational_term(Space::Lex, vec![one_over_n(), one_over_n()]).unwrap();
    let mono = ConvergenceStructure::monotone_decreasing(Space::Lex).unwrap();
    let theta = Elem::zero(Space::Lex);
    assert_eq!(
        conv_verify(&mono, &net, &theta, None).unwrap(),
        Verdict::Reject("infimum does not exist".into())
    );
    let witness = NetSpec::rational_term(
        Space::Lex,
        vec![RationalFunction::zero(), one_over_n().scale(&rat(2))],
    )
    .unwrap();
    let cert = RcCertificate::new(
        witness,
        WitnessEvidence::Direct,
        Elem::lex(rat(1), rat(0)),
        theta,
        mono,
    )
    .unwrap();
    assert_eq!(verify_rc(&net, &cert).unwrap(), Verdict::Accept);
    println!("criterion 2 (lexicographic example): PASS");
}

#[test]
fn criterion_3_nonlinearity_example() {
    let q1 = Space::QVec(1);
    let factor = |v: i64| {
        NetSpec::eventually_periodic(
            q1,
            vec![],
            vec![Elem::scalar(rat(v)), Elem::scalar(rat(-v))],
        )
        .unwrap()
    };
    // each factor accepts x = 1 at roughness 2 = 2 max{x, y}
    assert!(decide_rc(&factor(1), &Elem::scalar(rat(1)), &Elem::scalar(rat(2))).unwrap());
    // the synchronized sum {2, -2} fails against x = 2 at the same roughness
    assert!(!decide_rc(&factor(2), &Elem::scalar(rat(2)), &Elem::scalar(rat(2))).unwrap());
    println!("criterion 3 (failure of linearity at fixed roughness): PASS");
}

#[test]
fn criterion_4_diameter_bound() {
    let mut rng = rng(101);
    for case in 0..1000 {
        let net = rand_ep(&mut rng, 3);
        let r = rand_nonneg_qvec(&mut rng, 3, 4);
        let rep = diameter_check(&net, &r).unwrap();
        assert!(rep.bound_ok, "case {}: diameter {} exceeds 2r", case, rep.diameter);
        let cap = lattice::scale(&rat(2), &r);
        assert!(lattice::leq(&rep.diameter, &cap).unwrap());
    }
    // tightness: constant nets attain the bound exactly
    for _ in 0..200 {
        let c = rand_qvec(&mut rng, 3, -9, 9);
        let r = rand_nonneg_qvec(&mut rng, 3, 4);
        let rep = diameter_check(&NetSpec::constant(c), &r).unwrap();
        assert!(rep.bound_ok);
        assert_eq!(rep.diameter, lattice::scale(&rat(2), &r));
    }
    println!("criterion 4 (diameter ≤ 2r on 1000 random nets, tight on constants): PASS");
}

#[test]
fn criterion_5_inclusion_monotonicity() {
    let mut rng = rng(102);
    for case in 0..500 {
        let net = rand_decidable(&mut rng, 2);
        let r1 = rand_nonneg_qvec(&mut rng, 2, 3);
        let r2 = lattice::add(&r1, &rand_nonneg_qvec(&mut rng, 2, 3)).unwrap();
        assert_eq!(
            inclusion_check(&net, &r1, &r2).unwrap(),
            InclusionVerdict::Included,
            "case {}",
            case
        );
    }
    println!("criterion 5 (roughness monotonicity on 500 random pairs): PASS");
}

#[test]
fn criterion_6_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = rng(103);
    for case in 0..200 {
        let dim = rng.gen_range(1..=3);
        let net = rand_ep(&mut rng, dim);
        let x = rand_qvec(&mut rng, dim, -4, 4);
        let r = rand_nonneg_qvec(&mut rng, dim, 4);
        let (p, k) = match net.kind() {
            roughlat_core::net::NetKind::EventuallyPeriodic { prefix, cycle } => {
                (prefix.len() as u64, cycle.len() as u64)
            }
            _ => unreachable!(),
        };
        let horizon = (p + 2 * k).max(8) * 2;
        let brute = brute_membership(&net, &x, &r, horizon).unwrap();
        let engine = decide_rc(&net, &x, &r).unwrap();
        let agree = matches!(
            (brute, engine),
            (BruteVerdict::True, true) | (BruteVerdict::False, false)
        );
        assert!(agree, "case {}: oracle and engine disagree", case);
    }
    for case in 0..50 {
        let net = rand_ep(&mut rng, 2);
        let r = rand_nonneg_qvec(&mut rng, 2, 3);
        let ls = limit_set(&net, &r).unwrap();
        let (lo, hi) = match ls.interval.bounds() {
            Some((lo, hi)) => (lo.coords().unwrap(), hi.coords().unwrap()),
            None => (vec![rat(-2), rat(-2)], vec![rat(2), rat(2)]),
        };
        let ranges = lo
            .iter()
            .zip(hi.iter())
            .map(|(l, h)| (l - rat(1), h + rat(1)))
            .collect();
        let grid = GridSpec::new(ranges, ratio(1, 2)).unwrap();
        let brute = brute_limit_set(&net, &r, &grid, 64).unwrap();
        let from_box: Vec<Elem> = grid
            .points()
            .into_iter()
            .filter(|pt| ls.interval.contains(pt).unwrap())
            .collect();
        assert_eq!(brute, from_box, "case {}", case);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {:?}", elapsed);
    println!(
        "criterion 6 (oracle equivalence, 200 memberships + 50 grids): PASS in {:?}",
        elapsed
    );
}

#[test]
fn criterion_7_convergence_axioms_for_rough_convergence() {
    let mut rng = rng(104);
    let conv = ConvergenceStructure::order(Space::QVec(2)).unwrap();
    // (1) constant nets accept at every nonnegative roughness
    for _ in 0..300 {
        let c = rand_qvec(&mut rng, 2, -9, 9);
        let r = rand_nonneg_qvec(&mut rng, 2, 5);
        let cert = RcCertificate::new(
            NetSpec::constant(Elem::zero(Space::QVec(2))),
            WitnessEvidence::Direct,
            r,
            c.clone(),
            conv.clone(),
        )
        .unwrap();
        assert_eq!(verify_rc(&NetSpec::constant(c), &cert).unwrap(), Verdict::Accept);
    }
    // (2) arithmetic subsequences preserve acceptance
    let mut done = 0;
    while done < 300 {
        let netv = rand_decidable(&mut rng, 2);
        let x = rand_qvec(&mut rng, 2, -3, 3);
        let Some(r) = admissible_roughness(&mut rng, &netv, &x) else {
            continue;
        };
        let cert = canonical_certificate(&netv, &x, &r).unwrap();
        let stride = rng.gen_range(1..=4u64);
        let offset = rng.gen_range(0..=3u64);
        let sub = net::subseq_arith(&netv, stride, offset).unwrap();
        let sub_cert = cert_subseq(&cert, stride, offset).unwrap();
        assert_eq!(verify_rc(&sub, &sub_cert).unwrap(), Verdict::Accept);
        done += 1;
    }
    // (3) tail acceptance extends to the whole net via the spliced witness
    let mut done = 0;
    while done < 300 {
        let netv = rand_decidable(&mut rng, 2);
        let x = rand_qvec(&mut rng, 2, -3, 3);
        let Some(r) = admissible_roughness(&mut rng, &netv, &x) else {
            continue;
        };
        let cert = canonical_certificate(&netv, &x, &r).unwrap();
        let junk: Vec<Elem> = (0..rng.gen_range(1..=3))
            .map(|_| rand_qvec(&mut rng, 2, -30, 30))
            .collect();
        let from = junk.len() as u64 + 1;
        let spoiled = net::override_initial(&netv, &junk).unwrap();
        let tail_cert = cert_subseq(&cert, 1, from - 1).unwrap();
        assert_eq!(
            verify_rc(&net::tail(&spoiled, from).unwrap(), &tail_cert).unwrap(),
            Verdict::Accept
        );
        let full = cert_tail_extend(&tail_cert, &spoiled, from).unwrap();
        assert_eq!(verify_rc(&spoiled, &full).unwrap(), Verdict::Accept);
        done += 1;
    }
    println!("criterion 7 (convergence axioms, 300 instances each): PASS");
}

#[test]
fn criterion_8_limit_set_theorems() {
    let mut rng = rng(105);
    // subnet inclusion on random nets and strides
    for _ in 0..100 {
        let net = rand_decidable(&mut rng, 2);
        let r = rand_nonneg_qvec(&mut rng, 2, 3);
        let stride = rng.gen_range(1..=4u64);
        let offset = rng.gen_range(0..=3u64);
        assert_eq!(
            subnet_inclusion_check(&net, stride, offset, &r).unwrap(),
            InclusionVerdict::Included
        );
    }
    // convexity: 100 random blends of two members
    let mut done = 0;
    while done < 100 {
        let net = rand_decidable(&mut rng, 2);
        let w1 = rand_qvec(&mut rng, 2, -3, 3);
        let w2 = rand_qvec(&mut rng, 2, -3, 3);
        let (Some(r1), Some(r2)) = (
            admissible_roughness(&mut rng, &net, &w1),
            admissible_roughness(&mut rng, &net, &w2),
        ) else {
            continue;
        };
        let gamma = ratio(rng.gen_range(0..=8), 8);
        convex_combine(&net, &w1, &r1, &w2, &r2, &gamma).unwrap();
        done += 1;
    }
    // closedness along a boundary approach
    let mut done = 0;
    while done < 50 {
        let net = rand_decidable(&mut rng, 2);
        let r = rand_nonneg_qvec(&mut rng, 2, 3);
        let ls = limit_set(&net, &r).unwrap();
        let Some((lo, hi)) = ls.interval.bounds() else {
            continue;
        };
        // z_k = hi - (hi - lo)/k climbs from lo to the corner hi
        let (lo_c, hi_c) = (lo.coords().unwrap(), hi.coords().unwrap());
        let coords: Vec<RationalFunction> = lo_c
            .iter()
            .zip(hi_c.iter())
            .map(|(l, h)| {
                RationalFunction::new(
                    Polynomial::new(vec![l - h, h.clone()]),
                    Polynomial::var(),
                    1,
                )
                .unwrap()
            })
            .collect();
        let approach = NetSpec::rational_term(Space::QVec(2), coords).unwrap();
        assert_eq!(
            closedness_check(&net, &r, &approach).unwrap(),
            ClosednessVerdict::MemberConfirmed
        );
        done += 1;
    }
    // boundedness round trip
    for _ in 0..100 {
        let net = rand_decidable(&mut rng, 2);
        let (r, cert) = bounded_to_nonempty(&net).unwrap();
        assert_eq!(verify_rc(&net, &cert).unwrap(), Verdict::Accept);
        let theta = Elem::zero(Space::QVec(2));
        let bound = nonempty_to_bounded(&net, &theta, &r, &cert.witness).unwrap();
        // the derived bound is itself an order bound for the net
        assert!(net::limsup_abs_dev(&net, &theta)
            .unwrap()
            .within(&bound)
            .unwrap());
    }
    // equal limit sets under vanishing perturbations
    for _ in 0..100 {
        let net = rand_decidable(&mut rng, 2);
        let r = rand_nonneg_qvec(&mut rng, 2, 3);
        let wobble =
            NetSpec::rational_term(Space::QVec(2), vec![one_over_n(), one_over_n()]).unwrap();
        let w_net = net::net_add(&net, &wobble).unwrap();
        assert_eq!(
            equal_limit_sets_check(&net, &w_net, &r).unwrap(),
            LimitSetComparison::Equal
        );
    }
    // positive operators transfer membership: 50 of each shape
    for dim in [2usize, 3] {
        let mut done = 0;
        while done < 50 {
            let net = rand_decidable(&mut rng, dim);
            let x = rand_qvec(&mut rng, dim, -3, 3);
            let Some(r) = admissible_roughness(&mut rng, &net, &x) else {
                continue;
            };
            let rows: Vec<Vec<Rational>> = (0..dim)
                .map(|_| (0..dim).map(|_| rand_rational(&mut rng, 0, 3, 2)).collect())
                .collect();
            let t = RatMatrix::new(rows).unwrap();
            assert_eq!(
                operator_image_check(&t, &net, &x, &r).unwrap(),
                Verdict::Accept
            );
            done += 1;
        }
    }
    // order-convergent nets admit their limit at 100 random roughness draws
    let mut done = 0;
    while done < 100 {
        let net = rand_decreasing_rt(&mut rng, 2);
        let x = match net::infimum(&net).unwrap() {
            net::Infimum::Exists(x) => x,
            _ => continue,
        };
        let dominating = net::net_sub(&net, &NetSpec::constant(x.clone())).unwrap();
        let r = rand_nonneg_qvec(&mut rng, 2, 5);
        assert_eq!(
            o_limit_membership(&net, &x, &dominating, &r).unwrap(),
            Verdict::Accept
        );
        done += 1;
    }
    println!("criterion 8 (limit-set theorem suite): PASS");
}

#[test]
fn criterion_9_non_uniqueness_and_cone() {
    let r = Elem::qvec(vec![rat(1), rat(1)]).unwrap();
    let theta = Elem::zero(Space::QVec(2));
    let ls = limit_set(&NetSpec::constant(theta.clone()), &r).unwrap();
    let (lo, hi) = ls.interval.bounds().unwrap();
    assert_eq!(lo, &lattice::neg(&r));
    assert_eq!(hi, &r);
    assert_ne!(lo, hi, "the set must not collapse to a point");
    match cone_closedness_demo(Space::QVec(2), &r).unwrap() {
        ConeReport::NotClosed {
            net,
            outside_member,
        } => {
            assert_eq!(outside_member, lattice::neg(&r));
            assert!(decide_rc(&net, &outside_member, &r).unwrap());
            assert!(!lattice::leq(&theta, &outside_member).unwrap());
        }
        ConeReport::Closed => panic!("positive roughness cannot keep the cone closed"),
    }
    println!("criterion 9 (non-uniqueness and cone demonstration): PASS");
}
