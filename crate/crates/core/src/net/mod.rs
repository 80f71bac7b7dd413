//! Symbolic naturally-indexed sequences (the nets of the engine), their
//! class-preserving combinators, and the exact tail analysis.

mod analysis;
mod combinators;
pub(crate) mod scalar;

pub use analysis::{
    canonical_null_witness, infimum, is_decreasing, limsup_abs_dev, Infimum, TailBound,
};
pub(crate) use analysis::{
    accumulation_values, converges_to, forall_between, forall_dominated, sup_abs, Domination,
};
pub use combinators::{
    interleave, net_abs, net_add, net_join, net_meet, net_neg, net_product_sum, net_scale,
    net_scale_net, net_sub, override_initial, prepend_terms, subseq_arith, tail,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalFunction};
use crate::lattice::{Elem, Space};
use scalar::{LexSeq, ScalarSeq};

/// A symbolic sequence over one of the three spaces.
///
/// `FiniteList` is a bounded-horizon stand-in, admissible only where an
/// operation explicitly verifies over a finite range. The other kinds
/// describe the whole infinite sequence, and every tail question about
/// them is decidable. `RationalTerm` and `PeriodicPlusRational` carry an
/// optional explicit prefix that overrides finitely many initial terms:
/// absolute-value and envelope combinators materialize such prefixes, and
/// the tail-splice construction of the convergence axioms needs them.
#[derive(Clone, Debug, PartialEq)]
pub enum NetKind {
    FiniteList {
        terms: Vec<Elem>,
    },
    /// `prefix` then `cycle` repeated; the first post-prefix term is
    /// `cycle[0]`.
    EventuallyPeriodic {
        prefix: Vec<Elem>,
        cycle: Vec<Elem>,
    },
    /// Termwise rational functions of the index, one per coordinate.
    RationalTerm {
        prefix: Vec<Elem>,
        coords: Vec<RationalFunction>,
    },
    /// `cycle[(n-1) mod k] + decay(n)` (absolute cycle phase).
    PeriodicPlusRational {
        prefix: Vec<Elem>,
        cycle: Vec<Elem>,
        decay: Vec<RationalFunction>,
    },
    /// Product-indexed sum `left(a) + right(b)` over pairs `(a, b)`.
    ProductSum {
        left: Box<NetSpec>,
        right: Box<NetSpec>,
    },
    /// `a(n)` where the periodic selector is true, `b(n)` elsewhere.
    Interleaved {
        a: Box<NetSpec>,
        b: Box<NetSpec>,
        selector: Vec<bool>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetSpec {
    space: Space,
    kind: NetKind,
}

fn check_terms(space: Space, terms: &[Elem]) -> Result<()> {
    for t in terms {
        if t.space() != space {
            return Err(Error::MixedSpace {
                left: space,
                right: t.space(),
            });
        }
    }
    Ok(())
}

fn coord_count(space: Space) -> Option<usize> {
    match space {
        Space::QVec(d) => Some(d),
        Space::Lex => Some(2),
        Space::PwLin => None,
    }
}

fn check_term_functions(space: Space, fns: &[RationalFunction], prefix: usize) -> Result<()> {
    match coord_count(space) {
        Some(d) if fns.len() == d => {}
        Some(d) => {
            return Err(Error::InvalidConstruction(format!(
                "expected {} coordinate formulas, found {}",
                d,
                fns.len()
            )))
        }
        None => {
            return Err(Error::UnsupportedSpace {
                op: "rational-term net",
                space,
            })
        }
    }
    for f in fns {
        if f.valid_from() as usize > prefix + 1 {
            return Err(Error::InvalidConstruction(format!(
                "term formula `{}` is only valid from index {}; supply a longer prefix",
                f,
                f.valid_from()
            )));
        }
    }
    Ok(())
}

impl NetSpec {
    pub fn finite(space: Space, terms: Vec<Elem>) -> Result<NetSpec> {
        if terms.is_empty() {
            return Err(Error::InvalidConstruction(
                "finite net needs at least one term".into(),
            ));
        }
        check_terms(space, &terms)?;
        Ok(NetSpec {
            space,
            kind: NetKind::FiniteList { terms },
        })
    }

    pub fn eventually_periodic(space: Space, prefix: Vec<Elem>, cycle: Vec<Elem>) -> Result<NetSpec> {
        if cycle.is_empty() {
            return Err(Error::InvalidConstruction("cycle must be nonempty".into()));
        }
        check_terms(space, &prefix)?;
        check_terms(space, &cycle)?;
        Ok(NetSpec {
            space,
            kind: NetKind::EventuallyPeriodic { prefix, cycle },
        })
    }

    pub fn constant(value: Elem) -> NetSpec {
        NetSpec::eventually_periodic(value.space(), Vec::new(), vec![value]).unwrap()
    }

    pub fn rational_term(space: Space, coords: Vec<RationalFunction>) -> Result<NetSpec> {
        NetSpec::rational_term_with_prefix(space, Vec::new(), coords)
    }

    pub fn rational_term_with_prefix(
        space: Space,
        prefix: Vec<Elem>,
        coords: Vec<RationalFunction>,
    ) -> Result<NetSpec> {
        check_terms(space, &prefix)?;
        check_term_functions(space, &coords, prefix.len())?;
        Ok(NetSpec {
            space,
            kind: NetKind::RationalTerm { prefix, coords },
        })
    }

    pub fn periodic_plus_rational(
        space: Space,
        cycle: Vec<Elem>,
        decay: Vec<RationalFunction>,
    ) -> Result<NetSpec> {
        NetSpec::periodic_plus_rational_with_prefix(space, Vec::new(), cycle, decay)
    }

    pub fn periodic_plus_rational_with_prefix(
        space: Space,
        prefix: Vec<Elem>,
        cycle: Vec<Elem>,
        decay: Vec<RationalFunction>,
    ) -> Result<NetSpec> {
        if cycle.is_empty() {
            return Err(Error::InvalidConstruction("cycle must be nonempty".into()));
        }
        check_terms(space, &prefix)?;
        check_terms(space, &cycle)?;
        check_term_functions(space, &decay, prefix.len())?;
        Ok(NetSpec {
            space,
            kind: NetKind::PeriodicPlusRational {
                prefix,
                cycle,
                decay,
            },
        })
    }

    pub fn product_sum(left: NetSpec, right: NetSpec) -> Result<NetSpec> {
        if left.space != right.space {
            return Err(Error::MixedSpace {
                left: left.space,
                right: right.space,
            });
        }
        if left.is_product() || right.is_product() {
            return Err(Error::IndexArity {
                op: "product-sum construction",
            });
        }
        let space = left.space;
        Ok(NetSpec {
            space,
            kind: NetKind::ProductSum {
                left: Box::new(left),
                right: Box::new(right),
            },
        })
    }

    pub fn interleaved(a: NetSpec, b: NetSpec, selector: Vec<bool>) -> Result<NetSpec> {
        if a.space != b.space {
            return Err(Error::MixedSpace {
                left: a.space,
                right: b.space,
            });
        }
        if selector.is_empty() {
            return Err(Error::InvalidConstruction(
                "interleave selector must be nonempty".into(),
            ));
        }
        if a.is_product() || b.is_product() {
            return Err(Error::IndexArity { op: "interleave" });
        }
        let space = a.space;
        Ok(NetSpec {
            space,
            kind: NetKind::Interleaved {
                a: Box::new(a),
                b: Box::new(b),
                selector,
            },
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn kind(&self) -> &NetKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            NetKind::FiniteList { .. } => "finite-list",
            NetKind::EventuallyPeriodic { .. } => "eventually-periodic",
            NetKind::RationalTerm { .. } => "rational-term",
            NetKind::PeriodicPlusRational { .. } => "periodic-plus-rational",
            NetKind::ProductSum { .. } => "product-sum",
            NetKind::Interleaved { .. } => "interleaved",
        }
    }

    /// Indexed by pairs rather than single naturals.
    pub fn is_product(&self) -> bool {
        matches!(self.kind, NetKind::ProductSum { .. })
    }

    /// Bounded-horizon data only.
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, NetKind::FiniteList { .. })
    }

    pub fn finite_len(&self) -> Option<usize> {
        match &self.kind {
            NetKind::FiniteList { terms } => Some(terms.len()),
            _ => None,
        }
    }

    /// The term at a single index `n >= 1`.
    pub fn term(&self, n: u64) -> Result<Elem> {
        if n == 0 {
            return Err(Error::IndexZero);
        }
        match &self.kind {
            NetKind::FiniteList { terms } => terms
                .get(n as usize - 1)
                .cloned()
                .ok_or_else(|| Error::Precondition {
                    op: "term",
                    detail: format!("index {} beyond the finite horizon {}", n, terms.len()),
                }),
            NetKind::EventuallyPeriodic { prefix, cycle } => {
                if (n as usize) <= prefix.len() {
                    Ok(prefix[n as usize - 1].clone())
                } else {
                    let i = (n as usize - prefix.len() - 1) % cycle.len();
                    Ok(cycle[i].clone())
                }
            }
            NetKind::RationalTerm { prefix, coords } => {
                if (n as usize) <= prefix.len() {
                    Ok(prefix[n as usize - 1].clone())
                } else {
                    assemble_elem(
                        self.space,
                        coords
                            .iter()
                            .map(|f| f.eval(n))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
            }
            NetKind::PeriodicPlusRational {
                prefix,
                cycle,
                decay,
            } => {
                if (n as usize) <= prefix.len() {
                    Ok(prefix[n as usize - 1].clone())
                } else {
                    let base = &cycle[((n - 1) % cycle.len() as u64) as usize];
                    let dec = assemble_elem(
                        self.space,
                        decay
                            .iter()
                            .map(|f| f.eval(n))
                            .collect::<Result<Vec<_>>>()?,
                    )?;
                    crate::lattice::add(base, &dec)
                }
            }
            NetKind::ProductSum { .. } => Err(Error::IndexArity { op: "term" }),
            NetKind::Interleaved { a, b, selector } => {
                if selector[((n - 1) % selector.len() as u64) as usize] {
                    a.term(n)
                } else {
                    b.term(n)
                }
            }
        }
    }

    /// The term at a product index `(a, b)`, both `>= 1`.
    pub fn term_pair(&self, na: u64, nb: u64) -> Result<Elem> {
        match &self.kind {
            NetKind::ProductSum { left, right } => {
                crate::lattice::add(&left.term(na)?, &right.term(nb)?)
            }
            _ => Err(Error::IndexArity { op: "term_pair" }),
        }
    }

    /// Coordinate projections onto the scalar kernel. Defined for the
    /// tail-decidable kinds over the coordinate spaces.
    pub(crate) fn scalar_views(&self) -> Result<Vec<ScalarSeq>> {
        let d = coord_count(self.space).ok_or(Error::UndecidableClass {
            op: "scalar projection",
            kind: "piecewise-linear net".into(),
        })?;
        match &self.kind {
            NetKind::FiniteList { .. } | NetKind::ProductSum { .. } => {
                Err(Error::UndecidableClass {
                    op: "scalar projection",
                    kind: self.kind_name().into(),
                })
            }
            NetKind::EventuallyPeriodic { prefix, cycle } => {
                let k = cycle.len();
                let p = prefix.len();
                (0..d)
                    .map(|i| {
                        let pf: Vec<Rational> =
                            prefix.iter().map(|e| e.coords().unwrap()[i].clone()).collect();
                        // relative cycle phase -> absolute case phase
                        let cases: Vec<RationalFunction> = (0..k)
                            .map(|j| {
                                let src = (j + k - (p % k)) % k;
                                RationalFunction::constant(
                                    cycle[src].coords().unwrap()[i].clone(),
                                )
                            })
                            .collect();
                        ScalarSeq::assemble(pf, cases)
                    })
                    .collect()
            }
            NetKind::RationalTerm { prefix, coords } => (0..d)
                .map(|i| {
                    let pf: Vec<Rational> =
                        prefix.iter().map(|e| e.coords().unwrap()[i].clone()).collect();
                    ScalarSeq::assemble(pf, vec![coords[i].clone()])
                })
                .collect(),
            NetKind::PeriodicPlusRational {
                prefix,
                cycle,
                decay,
            } => (0..d)
                .map(|i| {
                    let pf: Vec<Rational> =
                        prefix.iter().map(|e| e.coords().unwrap()[i].clone()).collect();
                    let cases: Result<Vec<RationalFunction>> = cycle
                        .iter()
                        .map(|c| {
                            decay[i].add(&RationalFunction::constant(
                                c.coords().unwrap()[i].clone(),
                            ))
                        })
                        .collect();
                    ScalarSeq::assemble(pf, cases?)
                })
                .collect(),
            NetKind::Interleaved { a, b, selector } => {
                let va = a.scalar_views()?;
                let vb = b.scalar_views()?;
                (0..d)
                    .map(|i| interleave_views(&va[i], &vb[i], selector))
                    .collect()
            }
        }
    }

    pub(crate) fn lex_view(&self) -> Result<LexSeq> {
        let mut v = self.scalar_views()?;
        if v.len() != 2 || self.space != Space::Lex {
            return Err(Error::UnsupportedSpace {
                op: "lex projection",
                space: self.space,
            });
        }
        let second = v.pop().unwrap();
        let first = v.pop().unwrap();
        Ok(LexSeq { first, second })
    }
}

fn interleave_views(a: &ScalarSeq, b: &ScalarSeq, selector: &[bool]) -> Result<ScalarSeq> {
    let p = a.prefix_len().max(b.prefix_len());
    let k = lcm3(a.period(), b.period(), selector.len());
    let a = a.materialize_to(p)?;
    let b = b.materialize_to(p)?;
    let mut prefix = Vec::with_capacity(p);
    for n in 1..=p as u64 {
        let pick_a = selector[((n - 1) % selector.len() as u64) as usize];
        prefix.push(if pick_a { a.term(n)? } else { b.term(n)? });
    }
    let cases = (0..k)
        .map(|j| {
            // case j applies at indices n == j+1 (mod k)
            if selector[j % selector.len()] {
                a.cases()[j % a.period()].clone()
            } else {
                b.cases()[j % b.period()].clone()
            }
        })
        .collect();
    ScalarSeq::assemble(prefix, cases)
}

fn lcm3(a: usize, b: usize, c: usize) -> usize {
    use num_integer::Integer;
    a.lcm(&b).lcm(&c)
}

pub(crate) fn assemble_elem(space: Space, coords: Vec<Rational>) -> Result<Elem> {
    match space {
        Space::QVec(d) => {
            if coords.len() != d {
                return Err(Error::Internal("coordinate arity mismatch".into()));
            }
            Elem::qvec(coords)
        }
        Space::Lex => {
            if coords.len() != 2 {
                return Err(Error::Internal("lex arity mismatch".into()));
            }
            let mut it = coords.into_iter();
            Ok(Elem::lex(it.next().unwrap(), it.next().unwrap()))
        }
        Space::PwLin => Err(Error::Internal(
            "piecewise-linear elements have no coordinates".into(),
        )),
    }
}

/// Rebuilds a public net from per-coordinate scalar views, recovering the
/// tightest matching kind. Fails when the views mix distinct non-constant
/// cases in a way none of the public kinds expresses.
pub(crate) fn netspec_from_views(space: Space, views: Vec<ScalarSeq>) -> Result<NetSpec> {
    let p = views.iter().map(|v| v.prefix_len()).max().unwrap_or(0);
    let k = views
        .iter()
        .map(|v| v.period())
        .fold(1usize, |acc, x| num_integer::Integer::lcm(&acc, &x));
    let views: Vec<ScalarSeq> = views
        .into_iter()
        .map(|v| v.materialize_to(p).and_then(|v| v.widened(k)))
        .collect::<Result<_>>()?;
    let mut prefix = Vec::with_capacity(p);
    for n in 1..=p as u64 {
        let coords: Result<Vec<Rational>> = views.iter().map(|v| v.term(n)).collect();
        prefix.push(assemble_elem(space, coords?)?);
    }
    // all cases constant: eventually periodic
    if views
        .iter()
        .all(|v| v.cases().iter().all(|f| f.as_constant().is_some()))
    {
        // absolute case phase -> relative cycle phase
        let cycle: Result<Vec<Elem>> = (0..k)
            .map(|i| {
                let j = (p + i) % k;
                let coords: Vec<Rational> = views
                    .iter()
                    .map(|v| v.cases()[j].as_constant().unwrap())
                    .collect();
                assemble_elem(space, coords)
            })
            .collect();
        return NetSpec::eventually_periodic(space, prefix, cycle?);
    }
    if k == 1 {
        let coords: Vec<RationalFunction> =
            views.iter().map(|v| v.cases()[0].clone()).collect();
        return NetSpec::rational_term_with_prefix(space, prefix, coords);
    }
    // constant offsets around a shared rational tail: periodic-plus-rational
    let mut cycle_coords: Vec<Vec<Rational>> = vec![Vec::new(); k];
    let mut decay = Vec::with_capacity(views.len());
    let mut ppr_fits = true;
    'outer: for v in views.iter() {
        let base = &v.cases()[0];
        decay.push(base.clone());
        for (j, f) in v.cases().iter().enumerate() {
            match f.sub(base)?.as_constant() {
                Some(c) => cycle_coords[j].push(c),
                None => {
                    ppr_fits = false;
                    break 'outer;
                }
            }
        }
    }
    if ppr_fits {
        let cycle: Result<Vec<Elem>> = cycle_coords
            .into_iter()
            .map(|coords| assemble_elem(space, coords))
            .collect();
        return NetSpec::periodic_plus_rational_with_prefix(space, prefix, cycle?, decay);
    }
    // distinct non-constant tails per residue: express the periodic case
    // schedule as nested interleavings of rational-term nets, each total
    // past a long enough prefix
    let need: u64 = views
        .iter()
        .flat_map(|v| v.cases().iter().map(|f| f.valid_from()))
        .max()
        .unwrap_or(1);
    if need > p as u64 + 1 {
        let widened: Result<Vec<_>> = views
            .iter()
            .map(|v| v.materialize_to(need as usize - 1))
            .collect();
        return netspec_from_views(space, widened?);
    }
    let mut acc: Option<NetSpec> = None;
    for j in 0..k {
        let coords: Vec<RationalFunction> =
            views.iter().map(|v| v.cases()[j].clone()).collect();
        let piece = NetSpec::rational_term_with_prefix(space, prefix.clone(), coords)?;
        acc = Some(match acc {
            None => piece,
            Some(rest) => {
                let mask: Vec<bool> = (0..k).map(|i| i == j).collect();
                NetSpec::interleaved(piece, rest, mask)?
            }
        });
    }
    Ok(acc.expect("at least one case"))
}

impl fmt::Display for NetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[Elem]) -> fmt::Result {
            write!(f, "[")?;
            for (i, e) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, "]")
        }
        fn formulas(f: &mut fmt::Formatter<'_>, fns: &[RationalFunction]) -> fmt::Result {
            write!(f, "(")?;
            for (i, g) in fns.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", g)?;
            }
            write!(f, ")")
        }
        match &self.kind {
            NetKind::FiniteList { terms } => {
                write!(f, "list ")?;
                list(f, terms)
            }
            NetKind::EventuallyPeriodic { prefix, cycle } => {
                write!(f, "periodic ")?;
                if !prefix.is_empty() {
                    write!(f, "prefix=")?;
                    list(f, prefix)?;
                    write!(f, " ")?;
                }
                write!(f, "cycle=")?;
                list(f, cycle)
            }
            NetKind::RationalTerm { prefix, coords } => {
                write!(f, "rational ")?;
                if !prefix.is_empty() {
                    write!(f, "prefix=")?;
                    list(f, prefix)?;
                    write!(f, " ")?;
                }
                formulas(f, coords)
            }
            NetKind::PeriodicPlusRational {
                prefix,
                cycle,
                decay,
            } => {
                write!(f, "periodic+rational ")?;
                if !prefix.is_empty() {
                    write!(f, "prefix=")?;
                    list(f, prefix)?;
                    write!(f, " ")?;
                }
                write!(f, "cycle=")?;
                list(f, cycle)?;
                write!(f, " decay=")?;
                formulas(f, decay)
            }
            NetKind::ProductSum { left, right } => {
                write!(f, "product-sum ({}) + ({})", left, right)
            }
            NetKind::Interleaved { a, b, selector } => {
                write!(f, "interleave mask=[")?;
                for (i, s) in selector.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", if *s { 1 } else { 0 })?;
                }
                write!(f, "] a=({}) b=({})", a, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, Polynomial};

    fn sc(v: i64) -> Elem {
        Elem::scalar(rat(v))
    }

    fn one_over_n() -> RationalFunction {
        RationalFunction::new(
            Polynomial::one(),
            Polynomial::var(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn term_evaluation_per_kind() {
        let q1 = Space::QVec(1);
        let ep = NetSpec::eventually_periodic(q1, vec![], vec![sc(1), sc(-1)]).unwrap();
        assert_eq!(ep.term(3).unwrap(), sc(1));
        let rt = NetSpec::rational_term(
            Space::Lex,
            vec![one_over_n(), one_over_n()],
        )
        .unwrap();
        assert_eq!(rt.term(4).unwrap(), Elem::lex(ratio(1, 4), ratio(1, 4)));
        let ppr = NetSpec::periodic_plus_rational(q1, vec![sc(0), sc(4)], vec![one_over_n()])
            .unwrap();
        assert_eq!(ppr.term(2).unwrap(), Elem::scalar(rat(4) + ratio(1, 2)));
        assert_eq!(ppr.term(3).unwrap(), Elem::scalar(ratio(1, 3)));
        assert!(ep.term(0).is_err());
    }

    #[test]
    fn interleave_all_true_is_left() {
        let q1 = Space::QVec(1);
        let a = NetSpec::rational_term(q1, vec![one_over_n()]).unwrap();
        let b = NetSpec::constant(sc(9));
        let z = NetSpec::interleaved(a.clone(), b, vec![true]).unwrap();
        for n in 1..=12 {
            assert_eq!(z.term(n).unwrap(), a.term(n).unwrap());
        }
    }

    #[test]
    fn product_sum_terms() {
        let q1 = Space::QVec(1);
        let a = NetSpec::constant(sc(2));
        let b = NetSpec::rational_term(q1, vec![one_over_n()]).unwrap();
        let p = NetSpec::product_sum(a, b).unwrap();
        assert_eq!(p.term_pair(7, 2).unwrap(), Elem::scalar(rat(2) + ratio(1, 2)));
        assert!(p.term(1).is_err());
    }

    #[test]
    fn views_round_trip_through_reconstruction() {
        let q2 = Space::QVec(2);
        let net = NetSpec::periodic_plus_rational(
            q2,
            vec![
                Elem::qvec(vec![rat(0), rat(1)]).unwrap(),
                Elem::qvec(vec![rat(2), rat(-1)]).unwrap(),
            ],
            vec![one_over_n(), one_over_n()],
        )
        .unwrap();
        let views = net.scalar_views().unwrap();
        let back = netspec_from_views(q2, views).unwrap();
        for n in 1..=16 {
            assert_eq!(back.term(n).unwrap(), net.term(n).unwrap(), "n={}", n);
        }
    }

    #[test]
    fn display_forms() {
        let q2 = Space::QVec(2);
        let net = NetSpec::eventually_periodic(
            q2,
            vec![Elem::qvec(vec![rat(0), rat(0)]).unwrap()],
            vec![Elem::qvec(vec![rat(2), rat(1)]).unwrap()],
        )
        .unwrap();
        assert_eq!(net.to_string(), "periodic prefix=[(0, 0)] cycle=[(2, 1)]");
        let rt = NetSpec::rational_term(Space::Lex, vec![one_over_n(), one_over_n()]).unwrap();
        assert_eq!(rt.to_string(), "rational (1/n, 1/n)");
    }
}
