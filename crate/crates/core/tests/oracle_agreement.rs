//! Engine/oracle agreement: the class-based decision must coincide with
//! brute-force window checks wherever those are exact.

mod common;

use common::*;
use rand::Rng;

use roughlat_core::lattice::Elem;
use roughlat_core::net::NetKind;
use roughlat_core::oracle::{brute_limit_set, brute_membership, BruteVerdict, GridSpec};
use roughlat_core::rough::{decide_rc, limit_set};

#[test]
fn decide_matches_exact_brute_membership() {
    let mut rng = rng(41);
    for case in 0..200 {
        let dim = rng.gen_range(1..=3);
        let net = rand_ep(&mut rng, dim);
        let x = rand_qvec(&mut rng, dim, -4, 4);
        let r = rand_nonneg_qvec(&mut rng, dim, 4);
        let (p, k) = match net.kind() {
            NetKind::EventuallyPeriodic { prefix, cycle } => {
                (prefix.len() as u64, cycle.len() as u64)
            }
            _ => unreachable!(),
        };
        // horizon comfortably past prefix + 2 cycles keeps the window exact
        let horizon = (p + 2 * k).max(8) * 2;
        let brute = brute_membership(&net, &x, &r, horizon).unwrap();
        let engine = decide_rc(&net, &x, &r).unwrap();
        match brute {
            BruteVerdict::True => assert!(engine, "case {}", case),
            BruteVerdict::False => assert!(!engine, "case {}", case),
            BruteVerdict::Inconclusive => panic!("exact window came back inconclusive"),
        }
    }
}

#[test]
fn brute_limit_set_equals_box_on_grid() {
    let mut rng = rng(42);
    for case in 0..50 {
        let net = rand_ep(&mut rng, 2);
        let r = rand_nonneg_qvec(&mut rng, 2, 3);
        let ls = limit_set(&net, &r).unwrap();
        // a grid blanketing the box with margin, or a fixed window when empty
        let (lo, hi) = match ls.interval.bounds() {
            Some((lo, hi)) => (lo.coords().unwrap(), hi.coords().unwrap()),
            None => (
                vec![rat(-2), rat(-2)],
                vec![rat(2), rat(2)],
            ),
        };
        let ranges = lo
            .iter()
            .zip(hi.iter())
            .map(|(l, h)| (l - rat(1), h + rat(1)))
            .collect();
        let grid = GridSpec::new(ranges, ratio(1, 2)).unwrap();
        let horizon = 64;
        let brute: Vec<Elem> = brute_limit_set(&net, &r, &grid, horizon).unwrap();
        let from_box: Vec<Elem> = grid
            .points()
            .into_iter()
            .filter(|p| ls.interval.contains(p).unwrap())
            .collect();
        assert_eq!(brute, from_box, "case {} net {}", case, net);
    }
}
