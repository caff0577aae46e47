//! Whole-representation classification.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{PrimeContext, Valuation, ValuedRational};
use crate::isometry::{discriminant, rational_eigenlines, ProjectivePoint};
use crate::matrix::{Matrix2, Sl2Matrix};
use crate::traces::{fundamental_traces, FundamentalTraceVector};
use crate::tree::{LatticeBasis, TreeVertex};
use crate::words::{ball, evaluate, Presentation, Word};

/// Default number of saturation rounds for the fixed-lattice search.
pub const DEFAULT_SATURATION_CAP: usize = 64;

/// A homomorphism from a presented group to SL2(Q), given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    presentation: Presentation,
    assignment: Vec<Sl2Matrix>,
    ctx: PrimeContext,
}

impl Representation {
    pub fn new(
        presentation: Presentation,
        assignment: Vec<Sl2Matrix>,
        ctx: PrimeContext,
    ) -> Result<Self> {
        if assignment.len() != presentation.rank() {
            return Err(Error::Validation(format!(
                "{} generators declared, {} matrices given",
                presentation.rank(),
                assignment.len()
            )));
        }
        if let Some(m) = assignment.iter().find(|m| m.context() != ctx) {
            return Err(Error::ContextMismatch(ctx.p(), m.context().p()));
        }
        for r in presentation.relators() {
            if !evaluate(r, &assignment)?.is_identity() {
                return Err(Error::Validation(format!(
                    "relator ≠ identity: {}",
                    presentation.format_word(r)
                )));
            }
        }
        Ok(Self {
            presentation,
            assignment,
            ctx,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn assignment(&self) -> &[Sl2Matrix] {
        &self.assignment
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    pub fn rank(&self) -> usize {
        self.assignment.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.presentation.generators()[i]
    }

    pub fn evaluate(&self, w: &Word) -> Result<Sl2Matrix> {
        evaluate(w, &self.assignment)
    }

    pub fn fundamental_traces(&self) -> FundamentalTraceVector {
        fundamental_traces(&self.assignment)
    }

    /// `γ ↦ h ρ(γ) h⁻¹`.
    pub fn conjugate_by(&self, h: &Sl2Matrix) -> Self {
        Self {
            presentation: self.presentation.clone(),
            assignment: self.assignment.iter().map(|g| g.conjugate_by(h)).collect(),
            ctx: self.ctx,
        }
    }
}

/// Boundedness test on fundamental traces. The witness is the first
/// increasing product whose trace has negative valuation.
pub fn is_bounded(rep: &Representation) -> (bool, Option<Word>) {
    if rep.rank() == 0 {
        return (true, None);
    }
    let ft = rep.fundamental_traces();
    match ft
        .entries()
        .iter()
        .find(|(_, t)| !t.valuation().is_nonnegative())
    {
        Some((v, _)) => (false, Some(v.word())),
        None => (true, None),
    }
}

/// A fixed vertex together with the conjugation that makes the
/// representation integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCertificate {
    pub vertex: TreeVertex,
    /// Columns span a lattice in the fixed class.
    pub conjugator: Matrix2,
    /// `M⁻¹ ρ(γᵢ) M`, all entrywise integral.
    pub conjugated: Vec<Sl2Matrix>,
}

/// Grow the standard lattice under the generators until it is stable.
/// Returns `SaturationCapExceeded` if it does not stabilize in `cap` rounds,
/// which is what happens for unbounded representations.
pub fn saturate(rep: &Representation, cap: usize) -> Result<TreeVertex> {
    let ctx = rep.context();
    let one = BigRational::from_integer(1.into());
    let standard = [
        [one.clone(), BigRational::zero()],
        [BigRational::zero(), one],
    ];
    let mut lattice = LatticeBasis::from_columns(&standard, ctx)?;
    for _ in 0..cap {
        let cols = lattice.columns(ctx);
        let mut all = cols.clone();
        for g in rep.assignment() {
            let [a, b, c, d] = g.matrix().raw();
            for [x, y] in &cols {
                all.push([a * x + b * y, c * x + d * y]);
            }
        }
        let next = LatticeBasis::from_columns(&all, ctx)?;
        if next == lattice {
            return Ok(lattice.vertex(ctx));
        }
        lattice = next;
    }
    Err(Error::SaturationCapExceeded(cap))
}

/// Conjugate by the vertex matrix and check every generator is integral.
pub fn certify_vertex(rep: &Representation, vertex: &TreeVertex) -> Option<LatticeCertificate> {
    let m = vertex.matrix();
    let m_inv = m.inverse().expect("vertex matrices are invertible");
    let mut conjugated = Vec::with_capacity(rep.rank());
    for g in rep.assignment() {
        let c = &(&m_inv * g.matrix()) * &m;
        if !c.is_integral() {
            return None;
        }
        conjugated.push(Sl2Matrix::new(c).expect("conjugation keeps det 1"));
    }
    Some(LatticeCertificate {
        vertex: vertex.clone(),
        conjugator: m,
        conjugated,
    })
}

pub fn fixed_lattice_certificate(rep: &Representation, cap: usize) -> Result<LatticeCertificate> {
    if !is_bounded(rep).0 {
        return Err(Error::NotBounded);
    }
    let vertex = saturate(rep, cap)?;
    certify_vertex(rep, &vertex).ok_or(Error::SaturationCapExceeded(cap))
}

/// Common invariant line over Q, if any.
pub fn is_reducible_over_f(rep: &Representation) -> (bool, Option<ProjectivePoint>) {
    let gens = rep.assignment();
    let Some(g) = gens.iter().find(|g| !g.is_central()) else {
        let x = ProjectivePoint::from_rationals(
            &BigRational::from_integer(1.into()),
            &BigRational::zero(),
        );
        return (true, x);
    };
    for line in rational_eigenlines(g).lines() {
        if gens.iter().all(|h| line.is_invariant_under(h)) {
            return (true, Some(line));
        }
    }
    (false, None)
}

/// Incrementally row-reduced span inside Q⁴.
#[derive(Default)]
struct Span {
    rows: Vec<([BigRational; 4], usize)>,
}

impl Span {
    /// Adds `v` if it is independent; returns whether it was added.
    fn insert(&mut self, mut v: [BigRational; 4]) -> bool {
        for (row, pivot) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone() / &row[*pivot];
                for k in 0..4 {
                    v[k] -= &row[k] * &f;
                }
            }
        }
        match (0..4).find(|&k| !v[k].is_zero()) {
            Some(pivot) => {
                self.rows.push((v, pivot));
                true
            }
            None => false,
        }
    }
}

/// Dimension of the Q-algebra generated by the generator matrices.
pub fn algebra_dimension(rep: &Representation) -> usize {
    let mut span = Span::default();
    let id = Matrix2::identity(rep.context());
    span.insert(id.raw().clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in rep.assignment() {
                let prod = g.matrix() * m;
                if span.insert(prod.raw().clone()) {
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    span.rows.len()
}

/// Flat key-value classification summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub bounded: bool,
    pub fixed_lattice: Option<TreeVertex>,
    pub unbounded_witness: Option<Word>,
    pub reducible_over_f: bool,
    pub invariant_line: Option<ProjectivePoint>,
    /// Reducible over the p-adic completion; differs from `reducible_over_f`
    /// only for abelian images with irrational eigenvalues.
    pub reducible_over_completion: bool,
    pub absolutely_irreducible: bool,
    pub algebra_dimension: usize,
    pub zariski_dense: bool,
    pub length_abelian: bool,
    /// `μ(γᵢ) = 2 v(λ(γᵢ))` for the eigen-character on the invariant line.
    pub character: Option<Vec<i64>>,
}

impl ClassificationReport {
    /// `key=value` lines; strings quoted, absent optionals omitted.
    pub fn to_kv(&self, presentation: &Presentation) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("bounded", self.bounded.to_string());
        if let Some(v) = &self.fixed_lattice {
            kv("fixed_lattice", format!("\"{v}\""));
        }
        if let Some(w) = &self.unbounded_witness {
            kv(
                "unbounded_witness",
                format!("\"{}\"", presentation.format_word(w)),
            );
        }
        kv("reducible_over_F", self.reducible_over_f.to_string());
        if let Some(l) = &self.invariant_line {
            kv("invariant_line", format!("\"{l}\""));
        }
        kv(
            "reducible_over_completion",
            self.reducible_over_completion.to_string(),
        );
        kv(
            "absolutely_irreducible",
            self.absolutely_irreducible.to_string(),
        );
        kv("algebra_dimension", self.algebra_dimension.to_string());
        kv("zariski_dense", self.zariski_dense.to_string());
        if self.bounded {
            kv(
                "zariski_note",
                "\"not defined for bounded representations\"".into(),
            );
        }
        kv("length_abelian", self.length_abelian.to_string());
        if let Some(mu) = &self.character {
            let parts: Vec<String> = presentation
                .generators()
                .iter()
                .zip(mu)
                .map(|(g, m)| format!("{g}:{m}"))
                .collect();
            kv("character", format!("\"{}\"", parts.join(",")));
        }
        out
    }
}

fn character(rep: &Representation, line: &ProjectivePoint) -> Vec<i64> {
    rep.assignment()
        .iter()
        .map(|g| {
            let lambda = line.eigenvalue(g).expect("line is invariant");
            match lambda.valuation() {
                Valuation::Finite(v) => 2 * v,
                Valuation::Infinity => unreachable!("eigenvalues of SL2 elements are nonzero"),
            }
        })
        .collect()
}

pub fn classify(rep: &Representation, saturation_cap: usize) -> Result<ClassificationReport> {
    let (bounded, unbounded_witness) = is_bounded(rep);
    let fixed_lattice = if bounded {
        Some(fixed_lattice_certificate(rep, saturation_cap)?.vertex)
    } else {
        None
    };
    let (reducible_over_f, invariant_line) = is_reducible_over_f(rep);
    let dim = algebra_dimension(rep);
    let reducible_over_completion = reducible_over_f
        || (dim <= 2
            && rep
                .assignment()
                .iter()
                .find(|g| !g.is_central())
                .is_some_and(|g| discriminant(g).is_padic_square().unwrap_or(false)));
    let character = invariant_line.as_ref().map(|l| character(rep, l));
    Ok(ClassificationReport {
        bounded,
        fixed_lattice,
        unbounded_witness,
        reducible_over_f,
        invariant_line,
        reducible_over_completion,
        absolutely_irreducible: dim == 4,
        algebra_dimension: dim,
        zariski_dense: !bounded && !reducible_over_completion,
        length_abelian: bounded || reducible_over_completion,
        character,
    })
}

/// Whether two unbounded irreducible representations have equal
/// fundamental traces, which decides conjugacy over Q.
pub fn conjugacy_test(rep1: &Representation, rep2: &Representation) -> Result<bool> {
    if rep1.context() != rep2.context() {
        return Err(Error::ContextMismatch(
            rep1.context().p(),
            rep2.context().p(),
        ));
    }
    if rep1.presentation() != rep2.presentation() {
        return Err(Error::ShapeMismatch(
            "representations of different presentations".into(),
        ));
    }
    if is_bounded(rep1).0 {
        return Err(Error::PreconditionNotMet(
            "first representation is bounded".into(),
        ));
    }
    if is_reducible_over_f(rep1).0 {
        return Err(Error::PreconditionNotMet(
            "first representation is reducible".into(),
        ));
    }
    Ok(rep1.fundamental_traces() == rep2.fundamental_traces())
}

/// Traces of `[u, v] = u v u⁻¹ v⁻¹` for nonempty ball words with
/// `|u| + |v| ≤ max_len`.
pub fn commutator_trace_scan(
    rep: &Representation,
    max_len: usize,
) -> Result<Vec<(Word, ValuedRational)>> {
    if max_len < 2 {
        return Err(Error::PreconditionNotMet(
            "scan length must be at least 2".into(),
        ));
    }
    let words: Vec<(Word, Sl2Matrix)> = ball(rep.presentation(), max_len - 1)
        .into_iter()
        .filter(|w| !w.is_empty())
        .map(|w| {
            let m = rep.evaluate(&w)?;
            Ok((w, m))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (u, mu) in &words {
        for (v, mv) in &words {
            if u.len() + v.len() > max_len {
                continue;
            }
            let c = &(&(mu * mv) * &mu.inverse()) * &mv.inverse();
            let w = u
                .concat(v)
                .concat(&u.inverse())
                .concat(&v.inverse())
                .free_reduce();
            out.push((w, c.trace()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::surface_relator;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn m(e: [(i64, i64); 4], p: u64) -> Sl2Matrix {
        Sl2Matrix::from_fractions(e, ctx(p)).unwrap()
    }

    fn rep(gens: Vec<Sl2Matrix>, p: u64) -> Representation {
        Representation::new(Presentation::free(gens.len()), gens, ctx(p)).unwrap()
    }

    fn sl2z(p: u64) -> Representation {
        rep(
            vec![
                m([(1, 1), (1, 1), (0, 1), (1, 1)], p),
                m([(1, 1), (0, 1), (1, 1), (1, 1)], p),
            ],
            p,
        )
    }

    fn diag3() -> Sl2Matrix {
        m([(3, 1), (0, 1), (0, 1), (1, 3)], 3)
    }

    #[test]
    fn boundedness_examples() {
        assert_eq!(is_bounded(&sl2z(3)), (true, None));
        assert_eq!(
            is_bounded(&rep(vec![diag3()], 3)),
            (false, Some(Word::from_signed(&[1])))
        );
        assert!(is_bounded(&rep(vec![Sl2Matrix::identity(ctx(3))], 3)).0);
    }

    #[test]
    fn certificate_examples() {
        let cert = fixed_lattice_certificate(&sl2z(3), DEFAULT_SATURATION_CAP).unwrap();
        assert_eq!(cert.vertex.to_string(), "(0; 0)");
        let h = diag3();
        let conj = sl2z(3).conjugate_by(&h);
        let cert = fixed_lattice_certificate(&conj, DEFAULT_SATURATION_CAP).unwrap();
        for g in conj.assignment() {
            assert_eq!(crate::tree::act(g, &cert.vertex), cert.vertex);
        }
        assert!(cert.conjugated.iter().all(|g| g.matrix().is_integral()));
        assert_eq!(
            fixed_lattice_certificate(&rep(vec![diag3()], 3), DEFAULT_SATURATION_CAP),
            Err(Error::NotBounded)
        );
        // The image of the origin under h is fixed as well.
        let v = crate::tree::act(&h, &TreeVertex::origin(ctx(3)));
        assert_eq!(v.to_string(), "(2; 0)");
        assert!(certify_vertex(&conj, &v).is_some());
    }

    #[test]
    fn saturation_diverges_when_unbounded() {
        let r = rep(vec![diag3(), m([(1, 1), (0, 1), (1, 1), (1, 1)], 3)], 3);
        assert_eq!(saturate(&r, 10), Err(Error::SaturationCapExceeded(10)));
    }

    #[test]
    fn reducibility_examples() {
        let upper = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 3), (0, 1), (0, 1), (3, 1)], 3),
            ],
            3,
        );
        let (red, line) = is_reducible_over_f(&upper);
        assert!(red);
        assert_eq!(line.unwrap().to_string(), "[1 : 0]");
        assert_eq!(is_reducible_over_f(&sl2z(3)), (false, None));
        let rot = rep(vec![m([(0, 1), (1, 1), (-1, 1), (0, 1)], 3)], 3);
        assert_eq!(is_reducible_over_f(&rot), (false, None));
    }

    #[test]
    fn algebra_dimension_examples() {
        assert_eq!(
            algebra_dimension(&rep(vec![Sl2Matrix::identity(ctx(3))], 3)),
            1
        );
        assert_eq!(algebra_dimension(&rep(vec![diag3()], 3)), 2);
        assert_eq!(algebra_dimension(&sl2z(3)), 4);
        let upper = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 3), (0, 1), (0, 1), (3, 1)], 3),
            ],
            3,
        );
        assert_eq!(algebra_dimension(&upper), 3);
    }

    #[test]
    fn classify_examples() {
        let p = Presentation::free(2);
        let r = classify(&sl2z(3), DEFAULT_SATURATION_CAP).unwrap();
        assert!(
            r.bounded
                && !r.reducible_over_f
                && r.absolutely_irreducible
                && !r.zariski_dense
                && r.length_abelian
        );
        let kv = r.to_kv(&p);
        assert!(kv.contains("bounded=true\nfixed_lattice=\"(0; 0)\"\n"));
        assert!(kv.contains("absolutely_irreducible=true\n"));

        let r = classify(&rep(vec![diag3()], 3), DEFAULT_SATURATION_CAP).unwrap();
        assert!(r
            .to_kv(&Presentation::free(1))
            .starts_with("bounded=false\nunbounded_witness=\"a\"\n"));

        let upper = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 3), (0, 1), (0, 1), (3, 1)], 3),
            ],
            3,
        );
        let r = classify(&upper, DEFAULT_SATURATION_CAP).unwrap();
        assert!(!r.bounded && r.reducible_over_f && r.length_abelian);
        assert_eq!(r.character, Some(vec![2, -2]));
        assert!(r.to_kv(&p).contains("character=\"a:2,b:-2\""));

        let mixed = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 1), (0, 1), (1, 1), (1, 1)], 3),
            ],
            3,
        );
        let r = classify(&mixed, DEFAULT_SATURATION_CAP).unwrap();
        assert!(!r.bounded && !r.reducible_over_f && r.algebra_dimension == 4 && r.zariski_dense);
    }

    #[test]
    fn quadratic_torus_case() {
        // Companion matrix of x² - x/3 + 1: irreducible over Q, unbounded,
        // abelian. Its discriminant 1/9 - 4 = -35/9 is a 3-adic square
        // exactly when -35 ≡ 1 mod 3, which holds.
        let g = Sl2Matrix::new(Matrix2::new(
            [
                BigRational::zero(),
                BigRational::from_integer((-1).into()),
                BigRational::from_integer(1.into()),
                BigRational::new(1.into(), 3.into()),
            ],
            ctx(3),
        ))
        .unwrap();
        let r = classify(&rep(vec![g], 3), DEFAULT_SATURATION_CAP).unwrap();
        assert!(!r.bounded && !r.reducible_over_f && r.algebra_dimension == 2);
        assert!(r.reducible_over_completion && r.length_abelian && !r.zariski_dense);
    }

    #[test]
    fn surface_relator_checked() {
        let a = m([(2, 1), (0, 1), (0, 1), (1, 2)], 3);
        let b = m([(1, 1), (1, 1), (0, 1), (1, 1)], 3);
        let id = Sl2Matrix::identity(ctx(3));
        let pres = Presentation::surface(2).unwrap();
        assert!(matches!(
            Representation::new(
                pres.clone(),
                vec![a.clone(), b.clone(), id.clone(), id],
                ctx(3)
            ),
            Err(Error::Validation(_))
        ));
        // [A, B][B, A B] = 1.
        let ab = &a * &b;
        assert!(Representation::new(pres, vec![a, b.clone(), b, ab], ctx(3)).is_ok());
        assert_eq!(surface_relator(2).len(), 8);
    }

    #[test]
    fn conjugacy_examples() {
        let r = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 1), (0, 1), (1, 1), (1, 1)], 3),
            ],
            3,
        );
        let h = m([(1, 1), (5, 1), (0, 1), (1, 1)], 3);
        assert_eq!(conjugacy_test(&r, &r.conjugate_by(&h)), Ok(true));
        let swapped = rep(
            vec![r.assignment()[0].inverse(), r.assignment()[1].clone()],
            3,
        );
        assert_ne!(
            r.fundamental_traces()
                .get(crate::traces::TraceVar::from_indices(&[0, 1])),
            swapped
                .fundamental_traces()
                .get(crate::traces::TraceVar::from_indices(&[0, 1]))
        );
        assert_eq!(conjugacy_test(&r, &swapped), Ok(false));
        assert!(matches!(
            conjugacy_test(&sl2z(3), &sl2z(3)),
            Err(Error::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn commutator_scan_examples() {
        let scan = commutator_trace_scan(&sl2z(3), 2).unwrap();
        let ab = scan
            .iter()
            .find(|(w, _)| *w == Word::from_signed(&[1, 2, -1, -2]))
            .unwrap();
        assert_eq!(ab.1.to_string(), "3");
        let upper = rep(
            vec![
                m([(3, 1), (1, 1), (0, 1), (1, 3)], 3),
                m([(1, 3), (0, 1), (0, 1), (3, 1)], 3),
            ],
            3,
        );
        assert!(commutator_trace_scan(&upper, 4)
            .unwrap()
            .iter()
            .all(|(_, t)| t.to_string() == "2"));
        assert!(commutator_trace_scan(&upper, 1).is_err());
    }

    fn small() -> impl Strategy<Value = BigRational> {
        (-4i64..5, 0u32..3).prop_map(|(n, k)| BigRational::new(n.into(), 3i64.pow(k).into()))
    }

    fn element() -> impl Strategy<Value = Sl2Matrix> {
        prop::array::uniform3(small()).prop_map(|[x, y, z]| {
            let c = ctx(3);
            let one = BigRational::from_integer(1.into());
            let up = |x: BigRational| {
                Sl2Matrix::new(Matrix2::new(
                    [one.clone(), x, BigRational::zero(), one.clone()],
                    c,
                ))
                .unwrap()
            };
            let lo = |x: BigRational| {
                Sl2Matrix::new(Matrix2::new(
                    [one.clone(), BigRational::zero(), x, one.clone()],
                    c,
                ))
                .unwrap()
            };
            &(&up(x) * &lo(y)) * &up(z)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn report_invariants(a in element(), b in element()) {
            let r = classify(&rep(vec![a, b], 3), DEFAULT_SATURATION_CAP).unwrap();
            prop_assert_eq!(r.bounded, r.fixed_lattice.is_some());
            prop_assert_eq!(!r.bounded, r.unbounded_witness.is_some());
            prop_assert!(!(r.absolutely_irreducible && r.reducible_over_f));
            prop_assert!(!(!r.bounded && !r.reducible_over_completion && !r.absolutely_irreducible));
        }

        #[test]
        fn reducible_means_commutators_have_trace_two(x in small(), y in small(), k in 0u32..3) {
            let c = ctx(3);
            let lam = BigRational::new(3i64.pow(k).into(), 1.into());
            let one = BigRational::from_integer(1.into());
            let a = Sl2Matrix::new(Matrix2::new([lam.clone(), x, BigRational::zero(), lam.recip()], c)).unwrap();
            let b = Sl2Matrix::new(Matrix2::new([one.clone(), y, BigRational::zero(), one], c)).unwrap();
            let r = rep(vec![a, b], 3);
            prop_assert!(is_reducible_over_f(&r).0);
            for (_, t) in commutator_trace_scan(&r, 5).unwrap() {
                prop_assert!(t.to_string() == "2");
            }
        }

        #[test]
        fn integral_generators_are_bounded(e in prop::array::uniform2(prop::array::uniform3(-5i64..6))) {
            let c = ctx(3);
            let gens: Vec<Sl2Matrix> = e.iter().map(|[x, y, z]| {
                let f = |v: i64| BigRational::from_integer(v.into());
                let one = f(1);
                let up = |x| Sl2Matrix::new(Matrix2::new([one.clone(), x, BigRational::zero(), one.clone()], c)).unwrap();
                let lo = |x| Sl2Matrix::new(Matrix2::new([one.clone(), BigRational::zero(), x, one.clone()], c)).unwrap();
                &(&up(f(*x)) * &lo(f(*y))) * &up(f(*z))
            }).collect();
            let r = classify(&rep(gens, 3), DEFAULT_SATURATION_CAP).unwrap();
            prop_assert!(r.bounded);
            prop_assert_eq!(r.fixed_lattice.unwrap().to_string(), "(0; 0)");
        }
    }
}
