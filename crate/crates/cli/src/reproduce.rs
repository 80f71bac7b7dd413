//! End-to-end reproduction of the worked examples: the piecewise-linear
//! norm family, the lexicographic plane, the failure of linearity, and the
//! limit-set computations, each checked against its expected verdict.

use roughlat_core::conv::{pwlin_norm_conv_check, ConvName, NormConsistency, Verdict, WitnessEvidence};
use roughlat_core::exact::{rat, ratio, Limit, Polynomial, RationalFunction};
use roughlat_core::lattice::{Elem, PwLin, Space};
use roughlat_core::net::NetSpec;
use roughlat_core::rough::{verify_rc, RcCertificate};

use crate::scenario::{parse_scenario, run_conv_verify, run_scenario};

pub struct BundledScenario {
    pub name: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[BundledScenario] = &[
    BundledScenario {
        name: "lex-rough-accept",
        text: include_str!("../scenarios/lex_rough_accept.scn"),
    },
    BundledScenario {
        name: "nonlinearity-factor",
        text: include_str!("../scenarios/nonlinearity_factor.scn"),
    },
    BundledScenario {
        name: "nonlinearity-sum",
        text: include_str!("../scenarios/nonlinearity_sum.scn"),
    },
    BundledScenario {
        name: "limit-set-box",
        text: include_str!("../scenarios/limit_set_box.scn"),
    },
    BundledScenario {
        name: "limit-set-empty",
        text: include_str!("../scenarios/limit_set_empty.scn"),
    },
    BundledScenario {
        name: "oracle-window",
        text: include_str!("../scenarios/oracle_window.scn"),
    },
    BundledScenario {
        name: "transform-abs",
        text: include_str!("../scenarios/transform_abs.scn"),
    },
];

fn ramp() -> PwLin {
    PwLin::new(
        vec![rat(0), ratio(1, 2), rat(1)],
        vec![rat(0), rat(0), rat(1)],
    )
    .unwrap()
}

/// The norm family: `||f_n - f|| = (4n + 1)/n` exactly for `n = 1..=100`,
/// so the norms tend to 4 and the family is not norm convergent; rough
/// convergence at the constant function 4 is certified nonetheless.
fn pwlin_norm_family() -> Result<(), String> {
    let f = ramp();
    let family: Vec<PwLin> = (1..=100i64)
        .map(|n| f.sub(&PwLin::constant(ratio(1, n))).abs())
        .collect();
    let formula = RationalFunction::new(
        Polynomial::new(vec![rat(1), rat(4)]),
        Polynomial::var(),
        1,
    )
    .unwrap();
    match pwlin_norm_conv_check(&family, &f, &formula, 100).map_err(|e| e.to_string())? {
        NormConsistency::ConsistentUpTo(100) => {}
        other => return Err(format!("norm formula check came back {:?}", other)),
    }
    if formula.limit() != Limit::Finite(rat(4)) {
        return Err("the norm formula must tend to 4".into());
    }
    let net = NetSpec::finite(
        Space::PwLin,
        family.into_iter().map(Elem::pwlin).collect(),
    )
    .map_err(|e| e.to_string())?;
    let witness = NetSpec::finite(
        Space::PwLin,
        (1..=100i64)
            .map(|n| Elem::pwlin(PwLin::constant(ratio(1, n))))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let one_over_n =
        RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap();
    let cert = RcCertificate::new(
        witness,
        WitnessEvidence::NormFormula { formula: one_over_n },
        Elem::pwlin(PwLin::constant(rat(4))),
        Elem::pwlin(f),
        roughlat_core::conv::ConvergenceStructure::pwlin_norm(),
    )
    .map_err(|e| e.to_string())?;
    match verify_rc(&net, &cert).map_err(|e| e.to_string())? {
        Verdict::Accept => Ok(()),
        other => Err(format!("expected accept, got {}", other)),
    }
}

/// The monotone structure rejects `(1/n, 1/n) -> (0,0)` on the
/// lexicographic plane for the exact reason: the infimum does not exist.
fn lex_monotone_rejection() -> Result<(), String> {
    let one_over_n =
        RationalFunction::new(Polynomial::one(), Polynomial::var(), 1).unwrap();
    let net = NetSpec::rational_term(Space::Lex, vec![one_over_n.clone(), one_over_n])
        .map_err(|e| e.to_string())?;
    let verdict = run_conv_verify(
        Space::Lex,
        ConvName::MonotoneDecreasingConv,
        &net,
        &Elem::zero(Space::Lex),
        None,
    )?;
    let expected = Verdict::Reject("infimum does not exist".into());
    if verdict == expected {
        Ok(())
    } else {
        Err(format!("expected `{}`, got `{}`", expected, verdict))
    }
}

pub struct ReproItem {
    pub name: &'static str,
    pub run: fn() -> Result<(), String>,
}

pub fn coded_items() -> Vec<ReproItem> {
    vec![
        ReproItem {
            name: "pwlin-norm-family",
            run: pwlin_norm_family,
        },
        ReproItem {
            name: "lex-monotone-rejection",
            run: lex_monotone_rejection,
        },
    ]
}

/// Runs every reproduction; returns the number of failures.
pub fn reproduce_all(list_only: bool) -> usize {
    let mut failures = 0;
    for item in coded_items() {
        if list_only {
            println!("{}", item.name);
            continue;
        }
        match (item.run)() {
            Ok(()) => println!("PASS {}", item.name),
            Err(msg) => {
                println!("FAIL {}: {}", item.name, msg);
                failures += 1;
            }
        }
    }
    for bundled in BUNDLED {
        if list_only {
            println!("{}", bundled.name);
            continue;
        }
        let outcome = parse_scenario(bundled.text)
            .map_err(|e| e.to_string())
            .and_then(|s| run_scenario(&s).map(|rep| (s, rep)));
        match outcome {
            Ok((s, rep)) => match rep.matches {
                Some(true) => println!("PASS {}", bundled.name),
                Some(false) => {
                    println!(
                        "FAIL {}: expected `{}`, got `{}`",
                        bundled.name,
                        s.expect.as_deref().unwrap_or(""),
                        rep.output
                    );
                    failures += 1;
                }
                None => {
                    println!("FAIL {}: bundled scenario carries no expectation", bundled.name);
                    failures += 1;
                }
            },
            Err(msg) => {
                println!("FAIL {}: {}", bundled.name, msg);
                failures += 1;
            }
        }
    }
    failures
}
