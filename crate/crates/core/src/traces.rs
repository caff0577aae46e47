//! Integral trace calculus for SL2.
//!
//! The trace of any word in `A_1, …, A_n ∈ SL2` is an integer polynomial in
//! the `2^n - 1` traces `t_S = tr(A_{j1} ⋯ A_{jm})` of increasing products.
//! [`TraceCalculus`] computes that polynomial by rewriting with consequences of
//! Cayley–Hamilton:
//!
//! * `tr(u g⁻¹) = tr(u) tr(g) - tr(u g)`
//! * `tr(u g g) = tr(u g) tr(g) - tr(u)`
//! * `tr(g u g v) = tr(g u) tr(g v) - tr(u v⁻¹)`
//! * `tr(x y z) = tr(x) tr(yz) + tr(y) tr(xz) + tr(z) tr(xy) - tr(x) tr(y) tr(z) - tr(x z y)`
//!
//! Each rule strictly lowers `(length, inverse letters, order inversions)` of
//! the cyclic word being rewritten, so rewriting terminates.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::ValuedRational;
use crate::matrix::Sl2Matrix;
use crate::words::{evaluate, Letter, Word};

/// Default number of rule applications allowed per top-level request.
pub const DEFAULT_REWRITE_BUDGET: usize = 2_000_000;

/// A fundamental trace variable `t_S`, stored as the bit set of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceVar(u32);

impl TraceVar {
    /// Variable for a nonempty set of 0-based generator indices.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mask = indices.iter().fold(0u32, |m, &i| m | (1 << i));
        assert!(mask != 0, "empty index set");
        Self(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Generator indices in increasing order (0-based).
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    /// The increasing product word whose trace this variable is.
    pub fn word(self) -> Word {
        Word::from_letters(self.indices().into_iter().map(Letter::pos).collect())
    }

    /// All `2^n - 1` variables, ordered by size then lexicographically.
    pub fn all(rank: usize) -> Vec<TraceVar> {
        assert!(rank < 32, "rank too large for the trace calculus");
        let mut v: Vec<TraceVar> = (1u32..(1 << rank)).map(TraceVar).collect();
        v.sort();
        v
    }

    pub fn name(self, rank: usize) -> String {
        let sep = if rank >= 10 { "_" } else { "" };
        let parts: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        format!("t{}", parts.join(sep))
    }
}

impl Ord for TraceVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .count_ones()
            .cmp(&other.0.count_ones())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for TraceVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A product of variables, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<TraceVar>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: TraceVar) -> Self {
        Self(vec![v])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[TraceVar] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort();
        Monomial(v)
    }
}

impl Ord for Monomial {
    // Constant last; otherwise by degree, then lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0.is_empty(), other.0.is_empty()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => self
                .0
                .len()
                .cmp(&other.0.len())
                .then_with(|| self.0.cmp(&other.0)),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An integer polynomial in the fundamental trace variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TracePolynomial {
    rank: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TracePolynomial {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: i64) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    pub fn var(rank: usize, v: TraceVar) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank.max(other.rank));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Value at the given fundamental traces.
    pub fn evaluate(&self, traces: &FundamentalTraceVector) -> ValuedRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for v in &m.0 {
                term *= traces.get(*v).value();
            }
            acc += term;
        }
        ValuedRational::new(acc, traces.context())
    }
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.0.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let mut first = true;
            let mut k = 0;
            while k < m.0.len() {
                let v = m.0[k];
                let run = m.0[k..].iter().take_while(|&&x| x == v).count();
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&v.name(self.rank))?;
                if run > 1 {
                    write!(f, "^{run}")?;
                }
                k += run;
            }
        }
        Ok(())
    }
}

/// The traces of all increasing products of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalTraceVector {
    rank: usize,
    entries: Vec<(TraceVar, ValuedRational)>,
    // index by mask
    lookup: Vec<usize>,
}

impl FundamentalTraceVector {
    pub fn from_entries(rank: usize, entries: Vec<(TraceVar, ValuedRational)>) -> Self {
        let mut lookup = vec![usize::MAX; 1 << rank];
        for (i, (v, _)) in entries.iter().enumerate() {
            lookup[v.mask() as usize] = i;
        }
        assert!(
            lookup[1..].iter().all(|&i| i != usize::MAX),
            "incomplete trace vector"
        );
        Self {
            rank,
            entries,
            lookup,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[(TraceVar, ValuedRational)] {
        &self.entries
    }

    pub fn get(&self, v: TraceVar) -> &ValuedRational {
        &self.entries[self.lookup[v.mask() as usize]].1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn context(&self) -> crate::field::PrimeContext {
        self.entries[0].1.context()
    }

    /// `t1=…`, one line per variable.
    pub fn to_lines(&self) -> Vec<(String, String)> {
        self.entries
            .iter()
            .map(|(v, x)| (v.name(self.rank), x.to_string()))
            .collect()
    }
}

pub fn trace_of_word(assignment: &[Sl2Matrix], w: &Word) -> Result<ValuedRational> {
    Ok(evaluate(w, assignment)?.trace())
}

pub fn fundamental_traces(assignment: &[Sl2Matrix]) -> FundamentalTraceVector {
    let rank = assignment.len();
    assert!(rank >= 1, "at least one generator is needed");
    let entries = TraceVar::all(rank)
        .into_iter()
        .map(|v| {
            let t = trace_of_word(assignment, &v.word()).expect("all generators assigned");
            (v, t)
        })
        .collect();
    FundamentalTraceVector::from_entries(rank, entries)
}

fn inverse_count(w: &[Letter]) -> usize {
    w.iter().filter(|l| l.inverse).count()
}

/// Memo key: cyclic rotations of `w` and `w⁻¹` (same trace), preferring
/// fewer inverse letters, then lexicographically least.
fn canonical_key(w: &Word) -> Word {
    let inv = w.inverse();
    let mut best: Option<Word> = None;
    for base in [w, &inv] {
        for k in 0..base.len() {
            let r = base.rotate(k);
            let better = match &best {
                None => true,
                Some(b) => {
                    (inverse_count(r.letters()), r.letters())
                        < (inverse_count(b.letters()), b.letters())
                }
            };
            if better {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

fn order_inversions(w: &[Letter]) -> usize {
    let mut n = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i].generator > w[j].generator {
                n += 1;
            }
        }
    }
    n
}

/// Termination measure on canonical keys.
fn measure(key: &Word) -> (usize, usize, usize) {
    (
        key.len(),
        inverse_count(key.letters()),
        order_inversions(key.letters()),
    )
}

/// Shared memo of trace polynomials, keyed by canonical cyclic words.
/// Concurrent users may insert the same key; the values agree.
#[derive(Debug)]
pub struct TraceCalculus {
    rank: usize,
    budget: usize,
    memo: RwLock<HashMap<Word, Arc<TracePolynomial>>>,
}

impl TraceCalculus {
    pub fn new(rank: usize) -> Self {
        Self::with_budget(rank, DEFAULT_REWRITE_BUDGET)
    }

    pub fn with_budget(rank: usize, budget: usize) -> Self {
        assert!(rank < 32, "rank too large for the trace calculus");
        Self {
            rank,
            budget,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn trace_polynomial(&self, w: &Word) -> Result<TracePolynomial> {
        if w.rank_needed() > self.rank {
            return Err(Error::UnknownGenerator(format!(
                "generator #{} in a rank-{} calculus",
                w.rank_needed(),
                self.rank
            )));
        }
        let mut steps = 0;
        Ok((*self.tr(w, &mut steps)?).clone())
    }

    fn tr(&self, w: &Word, steps: &mut usize) -> Result<Arc<TracePolynomial>> {
        let w = w.cyclic_reduce();
        if w.is_empty() {
            return Ok(Arc::new(TracePolynomial::constant(self.rank, 2)));
        }
        let key = canonical_key(&w);
        if let Some(p) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(p.clone());
        }
        *steps += 1;
        if *steps > self.budget {
            return Err(Error::ReductionCapExceeded(self.budget));
        }
        let poly = Arc::new(self.rewrite(&key, steps)?);
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| poly.clone());
        Ok(poly)
    }

    fn sub(&self, parent: &Word, child: Word, steps: &mut usize) -> Result<Arc<TracePolynomial>> {
        let reduced = child.cyclic_reduce();
        debug_assert!(reduced.is_empty() || measure(&canonical_key(&reduced)) < measure(parent));
        self.tr(&reduced, steps)
    }

    fn letter_trace(&self, g: usize) -> TracePolynomial {
        TracePolynomial::var(self.rank, TraceVar::from_indices(&[g]))
    }

    fn rewrite(&self, key: &Word, steps: &mut usize) -> Result<TracePolynomial> {
        let l = key.letters();
        let n = l.len();
        let slice = |a: usize, b: usize| Word::from_letters(l[a..b].to_vec());

        // tr(u g⁻¹) = tr(u) tr(g) - tr(u g)
        if let Some(i) = l.iter().position(|x| x.inverse) {
            let w = key.rotate(i + 1);
            let lw = w.letters();
            let g = lw[n - 1].generator;
            let u = Word::from_letters(lw[..n - 1].to_vec());
            let ug = u.concat(&Word::from_letters(vec![Letter::pos(g)]));
            let tu = self.sub(key, u, steps)?;
            let tug = self.sub(key, ug, steps)?;
            return Ok(tu.mul(&self.letter_trace(g)).sub(&tug));
        }

        // tr(u g g) = tr(u g) tr(g) - tr(u), cyclically adjacent repeats.
        if n >= 2 {
            if let Some(i) = (0..n).find(|&i| l[i] == l[(i + 1) % n]) {
                let w = key.rotate(i + 2);
                let lw = w.letters();
                let g = lw[n - 1].generator;
                let u = Word::from_letters(lw[..n - 2].to_vec());
                let ug = Word::from_letters(lw[..n - 1].to_vec());
                let tug = self.sub(key, ug, steps)?;
                let tu = self.sub(key, u, steps)?;
                return Ok(tug.mul(&self.letter_trace(g)).sub(&tu));
            }
        }

        // tr(g u g v) = tr(g u) tr(g v) - tr(u v⁻¹)
        for i in 0..n {
            if let Some(j) = (i + 1..n).find(|&j| l[j] == l[i]) {
                let gu = slice(i, j);
                let u = slice(i + 1, j);
                let mut gv = slice(j, n);
                gv = gv.concat(&slice(0, i));
                let v = Word::from_letters(gv.letters()[1..].to_vec());
                let uv = u.concat(&v.inverse());
                let a = self.sub(key, gu, steps)?;
                let b = self.sub(key, gv, steps)?;
                let c = self.sub(key, uv, steps)?;
                return Ok(a.mul(&b).sub(&c));
            }
        }

        // Distinct positive letters; the key starts at the smallest one.
        match (1..n).find(|&i| l[i - 1].generator > l[i].generator) {
            None => {
                let indices: Vec<usize> = l.iter().map(|x| x.generator).collect();
                Ok(TracePolynomial::var(
                    self.rank,
                    TraceVar::from_indices(&indices),
                ))
            }
            Some(i) => {
                // Descent between positions i-1 and i: y = l[i-1], z = l[i],
                // x = the rest read cyclically from i+1.
                let y = slice(i - 1, i);
                let z = slice(i, i + 1);
                let x = slice(i + 1, n).concat(&slice(0, i - 1));
                let tx = self.sub(key, x.clone(), steps)?;
                let ty = self.sub(key, y.clone(), steps)?;
                let tz = self.sub(key, z.clone(), steps)?;
                let tyz = self.sub(key, y.concat(&z), steps)?;
                let txz = self.sub(key, x.concat(&z), steps)?;
                let txy = self.sub(key, x.concat(&y), steps)?;
                let txzy = self.sub(key, x.concat(&z).concat(&y), steps)?;
                Ok(tx
                    .mul(&tyz)
                    .add(&ty.mul(&txz))
                    .add(&tz.mul(&txy))
                    .sub(&tx.mul(&ty).mul(&tz))
                    .sub(&txzy))
            }
        }
    }
}

/// Trace polynomial of a word over generators `0..rank`, using a fresh memo.
pub fn trace_polynomial(w: &Word, rank: usize) -> Result<TracePolynomial> {
    TraceCalculus::new(rank).trace_polynomial(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeContext;
    use crate::matrix::Matrix2;
    use crate::words::Presentation;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn sl2(e: [(i64, i64); 4]) -> Sl2Matrix {
        Sl2Matrix::from_fractions(e, ctx(3)).unwrap()
    }

    fn sl2z_pair() -> Vec<Sl2Matrix> {
        vec![
            sl2([(1, 1), (1, 1), (0, 1), (1, 1)]),
            sl2([(1, 1), (0, 1), (1, 1), (1, 1)]),
        ]
    }

    fn poly_text(w: &str, rank: usize) -> String {
        let p = Presentation::free(rank);
        trace_polynomial(&p.parse_word(w).unwrap(), rank)
            .unwrap()
            .to_string()
    }

    #[test]
    fn trace_of_word_examples() {
        let asg = sl2z_pair();
        assert_eq!(
            trace_of_word(&asg, &Word::empty()).unwrap().to_string(),
            "2"
        );
        assert_eq!(
            trace_of_word(&asg, &Word::from_signed(&[1, 2]))
                .unwrap()
                .to_string(),
            "3"
        );
        let d = vec![sl2([(3, 1), (0, 1), (0, 1), (1, 3)])];
        assert_eq!(
            trace_of_word(&d, &Word::from_signed(&[1]))
                .unwrap()
                .to_string(),
            "10/3"
        );
    }

    #[test]
    fn fundamental_trace_examples() {
        let ft = fundamental_traces(&sl2z_pair());
        let lines: Vec<String> = ft
            .to_lines()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        assert_eq!(lines, ["t1=2", "t2=2", "t12=3"]);
        let ft = fundamental_traces(&[sl2([(3, 1), (0, 1), (0, 1), (1, 3)])]);
        assert_eq!(ft.len(), 1);
        assert_eq!(ft.entries()[0].1.to_string(), "10/3");
        let names: Vec<String> = TraceVar::all(3).iter().map(|v| v.name(3)).collect();
        assert_eq!(names, ["t1", "t2", "t3", "t12", "t13", "t23", "t123"]);
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(poly_text("a b", 2), "t12");
        assert_eq!(poly_text("a a", 2), "t1^2 - 2");
        assert_eq!(
            poly_text("a b a' b'", 2),
            "t1^2 + t2^2 + t12^2 - t1*t2*t12 - 2"
        );
        assert_eq!(poly_text("1", 2), "2");
        assert_eq!(poly_text("a'", 2), "t1");
        assert_eq!(poly_text("b a", 2), "t12");
        assert_eq!(poly_text("a b'", 2), "-t12 + t1*t2");
        assert_eq!(
            poly_text("c b a", 3),
            "-t123 + t1*t23 + t2*t13 + t3*t12 - t1*t2*t3"
        );
    }

    #[test]
    fn commutator_on_sl2z_pair() {
        let p = Presentation::free(2);
        let poly = trace_polynomial(&p.parse_word("a b a' b'").unwrap(), 2).unwrap();
        let ft = fundamental_traces(&sl2z_pair());
        assert_eq!(poly.evaluate(&ft).to_string(), "3");
    }

    #[test]
    fn square_identity_numeric() {
        // tr(A²) = tr(A)² - 2 on 20 matrices.
        let poly = trace_polynomial(&Word::from_signed(&[1, 1]), 1).unwrap();
        for k in 1..=20i64 {
            let a = [sl2([(k, 1), (1, 1), (k * k - 1, 1), (k, 1)])];
            let ft = fundamental_traces(&a);
            assert_eq!(
                poly.evaluate(&ft),
                trace_of_word(&a, &Word::from_signed(&[1, 1])).unwrap()
            );
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        let calc = TraceCalculus::with_budget(3, 5);
        let w = Word::from_signed(&[1, 2, 3, -1, -2, -3, 1, 3, 2]);
        assert_eq!(
            calc.trace_polynomial(&w),
            Err(Error::ReductionCapExceeded(5))
        );
    }

    #[test]
    fn rank_mismatch() {
        assert!(matches!(
            trace_polynomial(&Word::from_signed(&[3]), 2),
            Err(Error::UnknownGenerator(_))
        ));
    }

    fn word(rank: usize, max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, any::<bool>()), 0..=max).prop_map(|v| {
            Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
                .free_reduce()
        })
    }

    fn element() -> impl Strategy<Value = Sl2Matrix> {
        prop::array::uniform3((-6i64..7, 1i64..5)).prop_map(|e| {
            let c = ctx(5);
            let q = |(n, d): (i64, i64)| BigRational::new(n.into(), d.into());
            let up = |x| {
                Sl2Matrix::new(Matrix2::new(
                    [
                        BigRational::one(),
                        x,
                        BigRational::zero(),
                        BigRational::one(),
                    ],
                    c,
                ))
                .unwrap()
            };
            let lo = |x| {
                Sl2Matrix::new(Matrix2::new(
                    [
                        BigRational::one(),
                        BigRational::zero(),
                        x,
                        BigRational::one(),
                    ],
                    c,
                ))
                .unwrap()
            };
            &(&up(q(e[0])) * &lo(q(e[1]))) * &up(q(e[2]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn polynomial_matches_matrix_trace(w in word(3, 9), asg in prop::array::uniform3(element())) {
            let poly = trace_polynomial(&w, 3).unwrap();
            let ft = fundamental_traces(&asg);
            prop_assert_eq!(poly.evaluate(&ft), trace_of_word(&asg, &w).unwrap());
        }

        #[test]
        fn inverse_and_rotation_invariance(w in word(3, 8), k in 0usize..8) {
            let calc = TraceCalculus::new(3);
            let p = calc.trace_polynomial(&w).unwrap();
            prop_assert_eq!(&calc.trace_polynomial(&w.inverse()).unwrap(), &p);
            prop_assert_eq!(&calc.trace_polynomial(&w.rotate(k)).unwrap(), &p);
        }

        #[test]
        fn integral_traces_stay_integral(w in word(2, 10), asg in prop::array::uniform2(element())) {
            let ft = fundamental_traces(&asg);
            if ft.entries().iter().all(|(_, t)| t.valuation().is_nonnegative()) {
                prop_assert!(trace_of_word(&asg, &w).unwrap().valuation().is_nonnegative());
            }
        }
    }
}
