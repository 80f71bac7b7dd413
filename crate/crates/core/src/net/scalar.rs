//! Scalar decision kernel.
//!
//! Every decidable net class projects, coordinate by coordinate, onto a
//! `ScalarSeq`: finitely many explicit initial terms followed by a periodic
//! schedule of rational-function cases. The form is closed under sums,
//! scaling, absolute values, pointwise extrema, shifts, prepends, and
//! arithmetic subsequences, and every tail question (for-all sign, supremum,
//! limsup, monotonicity) reduces to finitely many rational-function
//! decisions, so all answers are exact.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ForallVerdict, Limit, Rational, RationalFunction, Sign};

/// `term(n) = prefix[n-1]` for `n <= prefix.len()`, otherwise
/// `cases[(n-1) mod cases.len()]` evaluated at `n` (absolute phase).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct ScalarSeq {
    prefix: Vec<Rational>,
    cases: Vec<RationalFunction>,
}

impl ScalarSeq {
    pub fn assemble(prefix: Vec<Rational>, cases: Vec<RationalFunction>) -> Result<ScalarSeq> {
        if cases.is_empty() {
            return Err(Error::Internal("scalar sequence with no cases".into()));
        }
        let s = ScalarSeq { prefix, cases };
        for j in 0..s.cases.len() {
            if s.first_active(j, 1) < s.cases[j].valid_from() {
                return Err(Error::Internal(format!(
                    "case {} active before its valid range",
                    j
                )));
            }
        }
        Ok(s)
    }

    #[cfg(test)]
    pub fn constant(c: Rational) -> ScalarSeq {
        ScalarSeq {
            prefix: Vec::new(),
            cases: vec![RationalFunction::constant(c)],
        }
    }

    #[cfg(test)]
    pub fn from_function(f: RationalFunction) -> Result<ScalarSeq> {
        if f.valid_from() > 1 {
            return Err(Error::InvalidConstruction(
                "net term formula must be valid from index 1".into(),
            ));
        }
        ScalarSeq::assemble(Vec::new(), vec![f])
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cases.len()
    }

    pub fn cases(&self) -> &[RationalFunction] {
        &self.cases
    }

    /// Smallest index `n >= from`, past the prefix, with `(n-1) mod K == j`.
    fn first_active(&self, j: usize, from: u64) -> u64 {
        let k = self.cases.len() as u64;
        let lo = from.max(self.prefix.len() as u64 + 1);
        let rem = (lo - 1) % k;
        let j = j as u64;
        if rem <= j {
            lo + (j - rem)
        } else {
            lo + (k - rem + j)
        }
    }

    pub fn term(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(Error::IndexZero);
        }
        if n as usize <= self.prefix.len() {
            return Ok(self.prefix[n as usize - 1].clone());
        }
        let j = ((n - 1) % self.cases.len() as u64) as usize;
        self.cases[j].eval(n)
    }

    /// Rewrites with a longer explicit prefix (same sequence).
    pub fn materialize_to(&self, p: usize) -> Result<ScalarSeq> {
        if p <= self.prefix.len() {
            return Ok(self.clone());
        }
        let mut prefix = self.prefix.clone();
        for n in self.prefix.len() + 1..=p {
            prefix.push(self.term(n as u64)?);
        }
        ScalarSeq::assemble(prefix, self.cases.clone())
    }

    /// Rewrites with period `k` (a multiple of the current period).
    pub fn widened(&self, k: usize) -> Result<ScalarSeq> {
        debug_assert!(k.is_multiple_of(self.cases.len()));
        let cases = (0..k).map(|j| self.cases[j % self.cases.len()].clone()).collect();
        ScalarSeq::assemble(self.prefix.clone(), cases)
    }

    fn aligned_with(&self, other: &ScalarSeq) -> Result<(ScalarSeq, ScalarSeq)> {
        let p = self.prefix.len().max(other.prefix.len());
        let k = lcm(self.cases.len(), other.cases.len());
        Ok((
            self.materialize_to(p)?.widened(k)?,
            other.materialize_to(p)?.widened(k)?,
        ))
    }

    fn zip(
        &self,
        other: &ScalarSeq,
        term_op: impl Fn(&Rational, &Rational) -> Rational,
        case_op: impl Fn(&RationalFunction, &RationalFunction) -> Result<RationalFunction>,
    ) -> Result<ScalarSeq> {
        let (a, b) = self.aligned_with(other)?;
        let prefix = a
            .prefix
            .iter()
            .zip(b.prefix.iter())
            .map(|(x, y)| term_op(x, y))
            .collect();
        let cases: Result<Vec<_>> = a
            .cases
            .iter()
            .zip(b.cases.iter())
            .map(|(f, g)| case_op(f, g))
            .collect();
        ScalarSeq::assemble(prefix, cases?)
    }

    pub fn add(&self, other: &ScalarSeq) -> Result<ScalarSeq> {
        self.zip(other, |x, y| x + y, RationalFunction::add)
    }

    pub fn sub(&self, other: &ScalarSeq) -> Result<ScalarSeq> {
        self.zip(other, |x, y| x - y, RationalFunction::sub)
    }

    pub fn mul(&self, other: &ScalarSeq) -> Result<ScalarSeq> {
        self.zip(other, |x, y| x * y, RationalFunction::mul)
    }

    pub fn neg(&self) -> ScalarSeq {
        ScalarSeq {
            prefix: self.prefix.iter().map(|x| -x.clone()).collect(),
            cases: self.cases.iter().map(|f| f.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ScalarSeq {
        ScalarSeq {
            prefix: self.prefix.iter().map(|x| x * c).collect(),
            cases: self.cases.iter().map(|f| f.scale(c)).collect(),
        }
    }

    pub fn add_const(&self, c: &Rational) -> ScalarSeq {
        ScalarSeq {
            prefix: self.prefix.iter().map(|x| x + c).collect(),
            cases: self
                .cases
                .iter()
                .map(|f| f.add(&RationalFunction::constant(c.clone())).expect("adding a constant"))
                .collect(),
        }
    }

    /// An index bound past which every case has constant sign, is monotone,
    /// and (pairwise, if requested) dominance between cases is settled.
    fn settle_bound(&self) -> u64 {
        let mut n = self.prefix.len() as u64;
        for f in &self.cases {
            n = n.max(f.monotone_onset());
        }
        n
    }

    /// `|term(n)|` termwise: the sign of each case is eventually constant,
    /// so the pre-settled region is materialized and each tail case flipped
    /// as needed.
    pub fn abs(&self) -> Result<ScalarSeq> {
        let settled = self.settle_bound();
        let base = self.materialize_to(settled as usize)?;
        let prefix = base.prefix.iter().map(|x| x.abs()).collect();
        let cases = base
            .cases
            .iter()
            .map(|f| match f.eventual_sign() {
                Sign::Positive | Sign::Zero => f.clone(),
                Sign::Negative => f.neg(),
            })
            .collect();
        ScalarSeq::assemble(prefix, cases)
    }

    fn extremum_with(&self, other: &ScalarSeq, upper: bool) -> Result<ScalarSeq> {
        let (a, b) = self.aligned_with(other)?;
        let settled = a.settle_bound().max(b.settle_bound()).max(
            a.cases
                .iter()
                .zip(b.cases.iter())
                .map(|(f, g)| f.sub(g).map(|d| d.monotone_onset()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0),
        );
        let a = a.materialize_to(settled as usize)?;
        let b = b.materialize_to(settled as usize)?;
        let prefix = a
            .prefix
            .iter()
            .zip(b.prefix.iter())
            .map(|(x, y)| if (x >= y) == upper { x.clone() } else { y.clone() })
            .collect();
        let cases: Result<Vec<_>> = a
            .cases
            .iter()
            .zip(b.cases.iter())
            .map(|(f, g)| {
                let pick_f = match f.sub(g)?.eventual_sign() {
                    Sign::Positive | Sign::Zero => upper,
                    Sign::Negative => !upper,
                };
                Ok(if pick_f { f.clone() } else { g.clone() })
            })
            .collect();
        ScalarSeq::assemble(prefix, cases?)
    }

    pub fn max(&self, other: &ScalarSeq) -> Result<ScalarSeq> {
        self.extremum_with(other, true)
    }

    pub fn min(&self, other: &ScalarSeq) -> Result<ScalarSeq> {
        self.extremum_with(other, false)
    }

    /// `term'(n) = term(n + k)`.
    pub fn shift_left(&self, k: u64) -> Result<ScalarSeq> {
        if k == 0 {
            return Ok(self.clone());
        }
        let kk = self.cases.len();
        let prefix = if (k as usize) < self.prefix.len() {
            self.prefix[k as usize..].to_vec()
        } else {
            Vec::new()
        };
        let cases: Result<Vec<_>> = (0..kk)
            .map(|j| self.cases[(j + k as usize) % kk].compose_affine(1, k as i64))
            .collect();
        ScalarSeq::assemble(prefix, cases?)
    }

    /// `term'(n) = terms[n-1]` for `n <= terms.len()`, else shifted `self`.
    pub fn prepend(&self, terms: &[Rational]) -> Result<ScalarSeq> {
        if terms.is_empty() {
            return Ok(self.clone());
        }
        let k = terms.len();
        let kk = self.cases.len();
        let mut prefix = terms.to_vec();
        prefix.extend(self.prefix.iter().cloned());
        let cases: Result<Vec<_>> = (0..kk)
            .map(|j| {
                let src = ((j + kk - (k % kk)) % kk + kk) % kk;
                self.cases[src].compose_affine(1, -(k as i64))
            })
            .collect();
        ScalarSeq::assemble(prefix, cases?)
    }

    /// `term'(m) = term(stride*m + offset)` with `stride >= 1`, `offset >= 0`.
    pub fn subseq(&self, stride: u64, offset: u64) -> Result<ScalarSeq> {
        if stride == 0 {
            return Err(Error::Precondition {
                op: "arithmetic subsequence",
                detail: "stride must be >= 1".into(),
            });
        }
        let kk = self.cases.len() as u64;
        let p = self.prefix.len() as u64;
        // indices m whose image lands in the explicit prefix
        let p_new = if stride + offset > p {
            0
        } else {
            (p - offset) / stride
        };
        let mut prefix = Vec::with_capacity(p_new as usize);
        for m in 1..=p_new {
            prefix.push(self.term(stride * m + offset)?);
        }
        let cases: Result<Vec<_>> = (0..kk)
            .map(|j| {
                let rep = stride * (j + 1) + offset;
                let src = ((rep - 1) % kk) as usize;
                self.cases[src].compose_affine(stride as i64, offset as i64)
            })
            .collect();
        // image of indices past the new prefix may still touch source prefix
        // values when stride*m + offset <= p; p_new excludes exactly those.
        ScalarSeq::assemble(prefix, cases?)
    }

    /// Decides `term(n) >= 0` for all `n >= from`, reporting the least
    /// violating index.
    pub fn forall_nonneg(&self, from: u64) -> Result<ForallVerdict> {
        let from = from.max(1);
        for n in from..=self.prefix.len() as u64 {
            if self.prefix[n as usize - 1].is_negative() {
                return Ok(ForallVerdict::FalseAt(n));
            }
        }
        let k = self.cases.len() as u64;
        let mut worst: Option<u64> = None;
        for j in 0..self.cases.len() {
            let start = self.first_active(j, from);
            let g = self.cases[j].compose_affine(k as i64, start as i64 - k as i64)?;
            if let ForallVerdict::FalseAt(i) = g.forall_nonneg(1)? {
                let n = start + k * (i - 1);
                worst = Some(worst.map_or(n, |w| w.min(n)));
            }
        }
        Ok(match worst {
            Some(n) => ForallVerdict::FalseAt(n),
            None => ForallVerdict::True,
        })
    }

    /// Exact supremum of `{term(n) : n >= from}`.
    pub fn sup(&self, from: u64) -> Result<Limit> {
        self.extremum(from, true)
    }

    /// Exact infimum of `{term(n) : n >= from}`.
    #[cfg(test)]
    pub fn inf(&self, from: u64) -> Result<Limit> {
        self.extremum(from, false)
    }

    fn extremum(&self, from: u64, upper: bool) -> Result<Limit> {
        let from = from.max(1);
        let mut best: Option<Limit> = None;
        let mut push = |l: Limit| {
            best = Some(match best.take() {
                None => l,
                Some(b) => {
                    if upper {
                        b.max(l)
                    } else {
                        b.min(l)
                    }
                }
            });
        };
        for n in from..=self.prefix.len() as u64 {
            push(Limit::Finite(self.prefix[n as usize - 1].clone()));
        }
        let k = self.cases.len() as u64;
        for j in 0..self.cases.len() {
            let start = self.first_active(j, from);
            let l = if upper {
                self.cases[j].sup_on_grid(start, k)?
            } else {
                self.cases[j].inf_on_grid(start, k)?
            };
            push(l);
        }
        Ok(best.expect("at least one case"))
    }

    pub fn case_limits(&self) -> Vec<Limit> {
        self.cases.iter().map(|f| f.limit()).collect()
    }

    pub fn limsup(&self) -> Limit {
        self.case_limits()
            .into_iter()
            .reduce(Limit::max)
            .expect("at least one case")
    }

    pub fn liminf(&self) -> Limit {
        self.case_limits()
            .into_iter()
            .reduce(Limit::min)
            .expect("at least one case")
    }

    /// The limit of the sequence when it exists (limsup and liminf agree),
    /// including divergence to a signed infinity.
    pub fn limit(&self) -> Option<Limit> {
        let up = self.limsup();
        if up == self.liminf() {
            Some(up)
        } else {
            None
        }
    }

    /// The eventual constant value, when the tail is literally constant.
    pub fn eventually_constant(&self) -> Option<Rational> {
        let c = self.cases[0].as_constant()?;
        for f in &self.cases[1..] {
            if f.as_constant()? != c {
                return None;
            }
        }
        Some(c)
    }

    /// The difference sequence `term(n) - term(n+1)`.
    pub fn step_decrease(&self) -> Result<ScalarSeq> {
        let shifted = self.shift_left(1)?;
        self.sub(&shifted)
    }

    /// Decides weak decrease; `FalseAt(n)` means the step from `n` to `n+1`
    /// rises.
    pub fn is_decreasing(&self) -> Result<ForallVerdict> {
        self.step_decrease()?.forall_nonneg(1)
    }

    /// All indices where the sequence vanishes, or `None` when it vanishes
    /// on a whole residue class (infinitely often). Used by the
    /// lexicographic comparison rules.
    pub fn zeros_from(&self, from: u64) -> Result<Option<Vec<u64>>> {
        let from = from.max(1);
        let mut out: Vec<u64> = Vec::new();
        for n in from..=self.prefix.len() as u64 {
            if self.prefix[n as usize - 1].is_zero() {
                out.push(n);
            }
        }
        let k = self.cases.len() as u64;
        for j in 0..self.cases.len() {
            let start = self.first_active(j, from);
            let g = self.cases[j].compose_affine(k as i64, start as i64 - k as i64)?;
            match g.integer_zeros_from(1) {
                None => return Ok(None),
                Some(zs) => out.extend(zs.into_iter().map(|i| start + k * (i - 1))),
            }
        }
        out.sort_unstable();
        Ok(Some(out))
    }

    /// A weakly decreasing sequence `D >= 0` with `D -> 0` and
    /// `term(n) <= D(n) + floor` for every `n`. Exists whenever every case
    /// converges to a finite limit `<= floor`; the tail is a single rational
    /// function, so the result stays in the simplest decidable class.
    pub fn null_dominator_above(&self, floor: &Rational) -> Result<ScalarSeq> {
        let mut tail = RationalFunction::zero();
        let mut settle = self.settle_bound().max(self.prefix.len() as u64);
        for f in &self.cases {
            let l = match f.limit() {
                Limit::Finite(l) => l,
                _ => {
                    return Err(Error::Precondition {
                        op: "null dominator",
                        detail: "sequence diverges".into(),
                    })
                }
            };
            if &l > floor {
                return Err(Error::Precondition {
                    op: "null dominator",
                    detail: format!("case limit {} exceeds the floor {}", l, floor),
                });
            }
            let g = f.sub(&RationalFunction::constant(l))?;
            settle = settle.max(g.monotone_onset());
            let piece = match g.eventual_sign() {
                Sign::Zero => continue,
                Sign::Positive => g,
                Sign::Negative => g.neg(),
            };
            settle = settle.max(piece.valid_from());
            tail = tail.add(&piece)?;
        }
        let mut d = tail.eval(settle + 1)?;
        let mut prefix = vec![Rational::zero(); settle as usize];
        for n in (1..=settle).rev() {
            let need = self.term(n)? - floor;
            if need > d {
                d = need;
            }
            if d.is_negative() {
                d = Rational::zero();
            }
            prefix[n as usize - 1] = d.clone();
        }
        ScalarSeq::assemble(prefix, vec![tail])
    }
}

fn lcm(a: usize, b: usize) -> usize {
    num_integer::Integer::lcm(&a, &b)
}

/// Lexicographic pair helpers: a lex-space sequence is a pair of scalar
/// sequences compared by the rule `(a1,b1) <= (a2,b2)` iff `a1 < a2` or
/// `a1 = a2` and `b1 <= b2`.
pub(crate) struct LexSeq {
    pub first: ScalarSeq,
    pub second: ScalarSeq,
}

impl LexSeq {
    /// Decides `(first(n), second(n)) >= (0,0)` lexicographically for all
    /// `n >= from`: the first coordinate must be nonnegative everywhere and
    /// the second nonnegative wherever the first vanishes.
    pub fn forall_nonneg(&self, from: u64) -> Result<ForallVerdict> {
        if let ForallVerdict::FalseAt(n) = self.first.forall_nonneg(from)? {
            return Ok(ForallVerdict::FalseAt(n));
        }
        let mut worst: Option<u64> = None;
        match self.first.zeros_from(from)? {
            Some(zeros) => {
                for n in zeros {
                    if self.second.term(n)?.is_negative() {
                        worst = Some(n);
                        break;
                    }
                }
            }
            None => {
                // at least one whole residue class vanishes: check the
                // second coordinate on each such class, and the remaining
                // isolated zeros explicitly
                let (f, s) = (&self.first, &self.second);
                let (f, s) = {
                    let (a, b) = f.aligned_with(s)?;
                    (a, b)
                };
                for n in from.max(1)..=f.prefix_len() as u64 {
                    if f.term(n)?.is_zero() && s.term(n)?.is_negative() {
                        worst = Some(worst.map_or(n, |w| w.min(n)));
                    }
                }
                let k = f.period() as u64;
                for j in 0..f.period() {
                    let start = f.first_active(j, from);
                    let sg = s.cases()[j].compose_affine(k as i64, start as i64 - k as i64)?;
                    if f.cases()[j].is_zero() {
                        if let ForallVerdict::FalseAt(i) = sg.forall_nonneg(1)? {
                            let n = start + k * (i - 1);
                            worst = Some(worst.map_or(n, |w| w.min(n)));
                        }
                    } else {
                        let fg = f.cases()[j].compose_affine(k as i64, start as i64 - k as i64)?;
                        for i in fg.integer_zeros_from(1).expect("nonzero case") {
                            let n = start + k * (i - 1);
                            if s.term(n)?.is_negative() {
                                worst = Some(worst.map_or(n, |w| w.min(n)));
                            }
                        }
                    }
                }
            }
        }
        Ok(match worst {
            Some(n) => ForallVerdict::FalseAt(n),
            None => ForallVerdict::True,
        })
    }

    /// Lexicographic absolute value, termwise: flips the pair wherever it
    /// is lex-negative. The flip pattern is eventually per-case constant.
    pub fn abs(&self) -> Result<LexSeq> {
        let (f, s) = self.first.aligned_with(&self.second)?;
        let settle = f.settle_bound().max(s.settle_bound());
        let f = f.materialize_to(settle as usize)?;
        let s = s.materialize_to(settle as usize)?;
        let mut pf = Vec::with_capacity(f.prefix_len());
        let mut ps = Vec::with_capacity(s.prefix_len());
        for n in 1..=f.prefix_len() as u64 {
            let a = f.term(n)?;
            let b = s.term(n)?;
            if a.is_negative() || (a.is_zero() && b.is_negative()) {
                pf.push(-a);
                ps.push(-b);
            } else {
                pf.push(a);
                ps.push(b);
            }
        }
        let mut cf = Vec::with_capacity(f.period());
        let mut cs = Vec::with_capacity(s.period());
        for (a, b) in f.cases().iter().zip(s.cases().iter()) {
            // past the settle bound the sign of each case is constant
            let negate = match a.eventual_sign() {
                Sign::Negative => true,
                Sign::Positive => false,
                Sign::Zero => b.eventual_sign() == Sign::Negative,
            };
            if negate {
                cf.push(a.neg());
                cs.push(b.neg());
            } else {
                cf.push(a.clone());
                cs.push(b.clone());
            }
        }
        Ok(LexSeq {
            first: ScalarSeq::assemble(pf, cf)?,
            second: ScalarSeq::assemble(ps, cs)?,
        })
    }

    /// Decides weak lexicographic decrease, reporting the first rising step.
    pub fn is_decreasing(&self) -> Result<ForallVerdict> {
        let d = LexSeq {
            first: self.first.step_decrease()?,
            second: self.second.step_decrease()?,
        };
        d.forall_nonneg(1)
    }

    fn extremum_with(&self, other: &LexSeq, upper: bool) -> Result<LexSeq> {
        let p = [&self.first, &self.second, &other.first, &other.second]
            .iter()
            .map(|s| s.prefix_len())
            .max()
            .unwrap();
        let k = [&self.first, &self.second, &other.first, &other.second]
            .iter()
            .fold(1usize, |acc, s| lcm(acc, s.period()));
        let f1 = self.first.materialize_to(p)?.widened(k)?;
        let s1 = self.second.materialize_to(p)?.widened(k)?;
        let f2 = other.first.materialize_to(p)?.widened(k)?;
        let s2 = other.second.materialize_to(p)?.widened(k)?;
        let mut settle = f1
            .settle_bound()
            .max(s1.settle_bound())
            .max(f2.settle_bound())
            .max(s2.settle_bound());
        for j in 0..k {
            settle = settle.max(f1.cases[j].sub(&f2.cases[j])?.monotone_onset());
            settle = settle.max(s1.cases[j].sub(&s2.cases[j])?.monotone_onset());
        }
        let f1 = f1.materialize_to(settle as usize)?;
        let s1 = s1.materialize_to(settle as usize)?;
        let f2 = f2.materialize_to(settle as usize)?;
        let s2 = s2.materialize_to(settle as usize)?;
        let mut pf = Vec::with_capacity(f1.prefix_len());
        let mut ps = Vec::with_capacity(f1.prefix_len());
        for n in 0..f1.prefix_len() {
            let (a1, b1) = (&f1.prefix[n], &s1.prefix[n]);
            let (a2, b2) = (&f2.prefix[n], &s2.prefix[n]);
            let first_leq = a1 < a2 || (a1 == a2 && b1 <= b2);
            let pick_first = first_leq != upper;
            if pick_first {
                pf.push(a1.clone());
                ps.push(b1.clone());
            } else {
                pf.push(a2.clone());
                ps.push(b2.clone());
            }
        }
        let mut cf = Vec::with_capacity(k);
        let mut cs = Vec::with_capacity(k);
        for j in 0..k {
            // past the settle bound the comparison outcome is per-case fixed
            let pick_first = match f1.cases[j].sub(&f2.cases[j])?.eventual_sign() {
                Sign::Positive => upper,
                Sign::Negative => !upper,
                Sign::Zero => match s1.cases[j].sub(&s2.cases[j])?.eventual_sign() {
                    Sign::Positive | Sign::Zero => upper,
                    Sign::Negative => !upper,
                },
            };
            if pick_first {
                cf.push(f1.cases[j].clone());
                cs.push(s1.cases[j].clone());
            } else {
                cf.push(f2.cases[j].clone());
                cs.push(s2.cases[j].clone());
            }
        }
        Ok(LexSeq {
            first: ScalarSeq::assemble(pf, cf)?,
            second: ScalarSeq::assemble(ps, cs)?,
        })
    }

    pub fn max(&self, other: &LexSeq) -> Result<LexSeq> {
        self.extremum_with(other, true)
    }

    pub fn min(&self, other: &LexSeq) -> Result<LexSeq> {
        self.extremum_with(other, false)
    }
}
