//! How a single element of SL2(Q) moves the tree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rational_sqrt, PrimeContext, ValuedRational};
use crate::matrix::Sl2Matrix;
use crate::tree::{act, distance, geodesic, reduce_mod_power, TreeVertex};

/// `ℓ(g) = -2 min(0, v(tr g))`.
pub fn translation_length(g: &Sl2Matrix) -> u64 {
    (-2 * g.trace().loc_min()) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Elliptic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub length: u64,
}

pub fn classify_isometry(g: &Sl2Matrix) -> IsometryClass {
    let length = translation_length(g);
    let kind = if length == 0 {
        IsometryKind::Elliptic
    } else {
        IsometryKind::Hyperbolic
    };
    IsometryClass { kind, length }
}

/// `d(x, g·x)`.
pub fn displacement(g: &Sl2Matrix, x: &TreeVertex) -> u64 {
    distance(x, &act(g, x)).expect("same context")
}

/// A vertex fixed by an elliptic element.
///
/// Starting from the origin, jump to the midpoint of `[x, g·x]`; the
/// displacement is even (types are preserved) and drops at every step.
pub fn fixed_vertex(g: &Sl2Matrix) -> Result<TreeVertex> {
    let length = translation_length(g);
    if length != 0 {
        return Err(Error::NotElliptic(length));
    }
    let mut x = TreeVertex::origin(g.context());
    let mut gx = act(g, &x);
    let mut d = distance(&x, &gx)?;
    let cap = d / 2 + 4;
    for _ in 0..cap {
        if d == 0 {
            return Ok(x);
        }
        let path = geodesic(&x, &gx)?;
        x = path[(d / 2) as usize].clone();
        gx = act(g, &x);
        let next = distance(&x, &gx)?;
        if next >= d {
            return Err(Error::IterationCapExceeded(format!(
                "displacement did not decrease ({d} -> {next})"
            )));
        }
        d = next;
    }
    if d == 0 {
        Ok(x)
    } else {
        Err(Error::IterationCapExceeded(format!(
            "midpoint iteration exceeded {cap} steps"
        )))
    }
}

/// A window of the axis of a hyperbolic element. `g` maps `vertices[i]` to
/// `vertices[i + length]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisSegment {
    pub vertices: Vec<TreeVertex>,
    pub length: u64,
}

impl AxisSegment {
    /// Index shift induced by the element along the listed vertices.
    pub fn translation_image_offset(&self) -> u64 {
        self.length
    }

    pub fn to_text(&self) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        format!(
            "translation_length={}\nvertices={}\n",
            self.length,
            vs.join(",")
        )
    }
}

/// At least `window · ℓ` edges of the axis around the projection of the origin.
pub fn axis_segment(g: &Sl2Matrix, window: u32) -> Result<AxisSegment> {
    let length = translation_length(g);
    if length == 0 {
        return Err(Error::NotHyperbolic);
    }
    let window = window.max(1);
    let origin = TreeVertex::origin(g.context());
    let image = act(g, &origin);
    let d = distance(&origin, &image)?;
    // [x, g·x] runs through the projection of x onto the axis.
    let q = geodesic(&origin, &image)?[((d - length) / 2) as usize].clone();
    let k = window.div_ceil(2) as i64;
    let start = act(&g.pow(-k), &q);
    let mut vertices = vec![start.clone()];
    let mut cur = start;
    for _ in 0..2 * k {
        let next = act(g, &cur);
        let path = geodesic(&cur, &next)?;
        vertices.extend(path.into_iter().skip(1));
        cur = next;
    }
    Ok(AxisSegment { vertices, length })
}

/// A point `[x : y]` of P¹(Q) with coprime integer coordinates, first
/// nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    x: BigInt,
    y: BigInt,
}

impl ProjectivePoint {
    /// Line through `(x, y)`; `None` for the zero vector.
    pub fn from_rationals(x: &BigRational, y: &BigRational) -> Option<Self> {
        if x.is_zero() && y.is_zero() {
            return None;
        }
        let l = x.denom().lcm(y.denom());
        let mut xi = x.numer() * (&l / x.denom());
        let mut yi = y.numer() * (&l / y.denom());
        let g = xi.gcd(&yi);
        xi /= &g;
        yi /= &g;
        if xi.is_negative() || (xi.is_zero() && yi.is_negative()) {
            xi = -xi;
            yi = -yi;
        }
        Some(Self { x: xi, y: yi })
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn vector(&self) -> [BigRational; 2] {
        [
            BigRational::from_integer(self.x.clone()),
            BigRational::from_integer(self.y.clone()),
        ]
    }

    /// Whether `g` maps this line to itself.
    pub fn is_invariant_under(&self, g: &Sl2Matrix) -> bool {
        let [a, b, c, d] = g.matrix().raw();
        let [x, y] = self.vector();
        let gx = a * &x + b * &y;
        let gy = c * &x + d * &y;
        (&gx * &y - &gy * &x).is_zero()
    }

    /// Eigenvalue of `g` on this line; `None` when the line is not invariant.
    pub fn eigenvalue(&self, g: &Sl2Matrix) -> Option<ValuedRational> {
        if !self.is_invariant_under(g) {
            return None;
        }
        let [a, b, c, d] = g.matrix().raw();
        let [x, y] = self.vector();
        let lambda = if !x.is_zero() {
            (a * &x + b * &y) / &x
        } else {
            (c * &x + d * &y) / &y
        };
        Some(ValuedRational::new(lambda, g.context()))
    }

    /// The vertex at level `k` on the ray toward this end: `(k, x/y mod p^k)`
    /// when `y ≠ 0`, and `(-k, 0)` for `[1 : 0]`.
    pub fn ray_vertex(&self, k: i64, ctx: PrimeContext) -> TreeVertex {
        if self.y.is_zero() {
            return TreeVertex::new(-k, BigRational::zero(), ctx).expect("zero center");
        }
        let slope = BigRational::new(self.x.clone(), self.y.clone());
        let center = reduce_mod_power(&slope, k, ctx);
        TreeVertex::new(k, center, ctx).expect("reduced centers lie in Z[1/p]")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.x, self.y)
    }
}

/// Eigenlines of an SL2 element that are defined over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eigenlines {
    None,
    One(ProjectivePoint),
    Two(ProjectivePoint, ProjectivePoint),
    All,
}

impl Eigenlines {
    pub fn lines(&self) -> Vec<ProjectivePoint> {
        match self {
            Eigenlines::None | Eigenlines::All => Vec::new(),
            Eigenlines::One(l) => vec![l.clone()],
            Eigenlines::Two(l, m) => vec![l.clone(), m.clone()],
        }
    }
}

/// Kernel line of `g - λ I` for a rational eigenvalue of a non-central `g`.
fn kernel_line(g: &Sl2Matrix, lambda: &BigRational) -> ProjectivePoint {
    let [a, b, c, d] = g.matrix().raw();
    let a = a - lambda;
    let d = d - lambda;
    if !a.is_zero() || !b.is_zero() {
        ProjectivePoint::from_rationals(b, &-a).expect("nonzero row")
    } else {
        ProjectivePoint::from_rationals(&-d, c).expect("nonzero row")
    }
}

pub fn rational_eigenlines(g: &Sl2Matrix) -> Eigenlines {
    if g.is_central() {
        return Eigenlines::All;
    }
    let t = g.matrix().trace();
    let disc = &t * &t - BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    if disc.is_zero() {
        return Eigenlines::One(kernel_line(g, &(&t / &two)));
    }
    match rational_sqrt(&disc) {
        None => Eigenlines::None,
        Some(root) => {
            // Eigenline of (t + √disc)/2 first.
            let l1 = kernel_line(g, &((&t + &root) / &two));
            let l2 = kernel_line(g, &((&t - &root) / &two));
            Eigenlines::Two(l1, l2)
        }
    }
}

/// `tr(g)^2 - 4`.
pub fn discriminant(g: &Sl2Matrix) -> ValuedRational {
    let t = g.trace();
    &t * &t - ValuedRational::from_integer(4, g.context())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix2;
    use crate::tree::{tree_ball, DEFAULT_MAX_NODES};
    use num_traits::One;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn sl2(e: [(i64, i64); 4], p: u64) -> Sl2Matrix {
        Sl2Matrix::from_fractions(e, ctx(p)).unwrap()
    }

    fn vx(n: i64, c: i64, p: u64) -> TreeVertex {
        TreeVertex::new(n, BigRational::from_integer(c.into()), ctx(p)).unwrap()
    }

    fn pp(x: i64, y: i64) -> ProjectivePoint {
        ProjectivePoint::from_rationals(
            &BigRational::from_integer(x.into()),
            &BigRational::from_integer(y.into()),
        )
        .unwrap()
    }

    /// Oracle: minimum displacement over a ball of the tree.
    fn min_displacement(g: &Sl2Matrix, center: &TreeVertex, radius: u32) -> u64 {
        tree_ball(center, radius, DEFAULT_MAX_NODES)
            .unwrap()
            .vertices
            .iter()
            .map(|x| displacement(g, x))
            .min()
            .unwrap()
    }

    #[test]
    fn translation_length_examples() {
        let g = sl2([(3, 1), (0, 1), (0, 1), (1, 3)], 3);
        assert_eq!(translation_length(&g), 2);
        assert_eq!(min_displacement(&g, &TreeVertex::origin(ctx(3)), 6), 2);
        assert_eq!(
            translation_length(&sl2([(2, 1), (1, 1), (1, 1), (1, 1)], 3)),
            0
        );
        assert_eq!(
            translation_length(&sl2([(9, 1), (0, 1), (0, 1), (1, 9)], 3)),
            4
        );
    }

    #[test]
    fn classify_examples() {
        let rot = sl2([(0, 1), (1, 1), (-1, 1), (0, 1)], 3);
        assert_eq!(classify_isometry(&rot).kind, IsometryKind::Elliptic);
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let c = classify_isometry(&sl2([(pi, 1), (0, 1), (0, 1), (1, pi)], p));
            assert_eq!(
                c,
                IsometryClass {
                    kind: IsometryKind::Hyperbolic,
                    length: 2
                }
            );
        }
        assert_eq!(
            classify_isometry(&Sl2Matrix::identity(ctx(3))).kind,
            IsometryKind::Elliptic
        );
    }

    #[test]
    fn fixed_vertex_examples() {
        let rot = sl2([(0, 1), (1, 1), (-1, 1), (0, 1)], 3);
        assert_eq!(fixed_vertex(&rot).unwrap(), TreeVertex::origin(ctx(3)));
        let g = sl2([(1, 1), (0, 1), (1, 9), (1, 1)], 3);
        let x = fixed_vertex(&g).unwrap();
        assert_eq!(act(&g, &x), x);
        // Conjugating [[1,0],[1,1]] by h = diag(3, 1/3) transports its fixed
        // origin to act(h, origin) = (2; 0).
        assert_eq!(x, vx(2, 0, 3));
        let minus = sl2([(-1, 1), (0, 1), (0, 1), (-1, 1)], 3);
        assert_eq!(fixed_vertex(&minus).unwrap(), TreeVertex::origin(ctx(3)));
        let hyp = sl2([(3, 1), (0, 1), (0, 1), (1, 3)], 3);
        assert_eq!(fixed_vertex(&hyp), Err(Error::NotElliptic(2)));
    }

    #[test]
    fn axis_examples() {
        let g = sl2([(3, 1), (0, 1), (0, 1), (1, 3)], 3);
        let ax = axis_segment(&g, 2).unwrap();
        let levels: Vec<i64> = ax.vertices.iter().map(|v| v.level()).collect();
        assert_eq!(levels, [-2, -1, 0, 1, 2]);
        assert!(ax
            .vertices
            .iter()
            .all(|v| v.center().is_zero() && displacement(&g, v) == 2));
        assert_eq!(act(&g, &ax.vertices[0]), ax.vertices[2]);

        let g9 = sl2([(9, 1), (0, 1), (0, 1), (1, 9)], 3);
        let ax = axis_segment(&g9, 1).unwrap();
        assert_eq!(ax.vertices.len(), 9);
        for w in ax.vertices.windows(2) {
            assert_eq!(distance(&w[0], &w[1]).unwrap(), 1);
        }
        assert!(ax.vertices.iter().all(|v| displacement(&g9, v) == 4));
        assert_eq!(ax.translation_image_offset(), 4);
        assert_eq!(
            axis_segment(&Sl2Matrix::identity(ctx(3)), 1),
            Err(Error::NotHyperbolic)
        );
        assert_eq!(
            axis_segment(&g, 1).unwrap().to_text(),
            "translation_length=2\nvertices=(-2; 0),(-1; 0),(0; 0),(1; 0),(2; 0)\n"
        );
    }

    #[test]
    fn eigenline_examples() {
        let u = sl2([(1, 1), (1, 1), (0, 1), (1, 1)], 3);
        assert_eq!(rational_eigenlines(&u), Eigenlines::One(pp(1, 0)));
        let d = sl2([(3, 1), (0, 1), (0, 1), (1, 3)], 3);
        assert_eq!(rational_eigenlines(&d), Eigenlines::Two(pp(1, 0), pp(0, 1)));
        let rot = sl2([(0, 1), (1, 1), (-1, 1), (0, 1)], 3);
        assert_eq!(rational_eigenlines(&rot), Eigenlines::None);
        assert_eq!(
            rational_eigenlines(&Sl2Matrix::identity(ctx(3))),
            Eigenlines::All
        );
        let m = sl2([(-1, 1), (0, 1), (5, 1), (-1, 1)], 3);
        assert_eq!(rational_eigenlines(&m), Eigenlines::One(pp(0, 1)));
        // [[2,1],[1,1]]: discriminant 5, irrational eigenvalues.
        assert_eq!(
            rational_eigenlines(&sl2([(2, 1), (1, 1), (1, 1), (1, 1)], 3)),
            Eigenlines::None
        );
        assert_eq!(pp(-2, 4), pp(1, -2));
        assert_eq!(pp(0, -3).to_string(), "[0 : 1]");
    }

    fn element(p: u64, entries: [(i64, u32, i32); 3]) -> Sl2Matrix {
        let c = ctx(p);
        let q = |(n, d, e): (i64, u32, i32)| {
            BigRational::new(n.into(), (d as i64 * 2 + 1).into()) * c.power(e as i64)
        };
        let up = |x: BigRational| {
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
        let lo = |x: BigRational| {
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
        &(&up(q(entries[0])) * &lo(q(entries[1]))) * &up(q(entries[2]))
    }

    fn entry() -> impl Strategy<Value = (i64, u32, i32)> {
        (-9i64..10, 0u32..3, -2i32..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn conjugation_invariance(pi in 0usize..3, g in prop::array::uniform3(entry()), h in prop::array::uniform3(entry())) {
            let p = [2u64, 3, 5][pi];
            let (g, h) = (element(p, g), element(p, h));
            prop_assert_eq!(translation_length(&g.conjugate_by(&h)), translation_length(&g));
        }

        #[test]
        fn fixed_vertices_are_fixed(pi in 0usize..3, g in prop::array::uniform3(entry())) {
            let g = element([2u64, 3, 5][pi], g);
            prop_assume!(translation_length(&g) == 0);
            let x = fixed_vertex(&g).unwrap();
            prop_assert_eq!(act(&g, &x), x);
        }

        #[test]
        fn axis_vertices_have_minimal_displacement(pi in 0usize..3, g in prop::array::uniform3(entry()), w in 1u32..4) {
            let g = element([2u64, 3, 5][pi], g);
            let l = translation_length(&g);
            prop_assume!(l > 0);
            let ax = axis_segment(&g, w).unwrap();
            prop_assert!(ax.vertices.len() as u64 > u64::from(w) * l);
            for v in &ax.vertices {
                prop_assert_eq!(displacement(&g, v), l);
            }
            // g shifts the window by ℓ positions.
            for i in 0..ax.vertices.len() - l as usize {
                prop_assert_eq!(&act(&g, &ax.vertices[i]), &ax.vertices[i + l as usize]);
            }
        }

        #[test]
        fn axis_equivariance(g in prop::array::uniform3(entry()), h in prop::array::uniform3(entry())) {
            let (g, h) = (element(3, g), element(3, h));
            let l = translation_length(&g);
            prop_assume!(l > 0);
            let conj = g.conjugate_by(&h);
            for v in axis_segment(&g, 2).unwrap().vertices {
                prop_assert_eq!(displacement(&conj, &act(&h, &v)), l);
            }
        }

        #[test]
        fn eigenlines_consistent(pi in 0usize..3, g in prop::array::uniform3(entry())) {
            let g = element([2u64, 3, 5][pi], g);
            let lines = rational_eigenlines(&g);
            for l in lines.lines() {
                prop_assert!(l.is_invariant_under(&g));
            }
            let disc = discriminant(&g);
            if lines != Eigenlines::None && lines != Eigenlines::All {
                prop_assert!(disc.is_rational_square());
                if !disc.is_zero() {
                    prop_assert!(disc.is_padic_square().unwrap());
                }
            }
        }

        #[test]
        fn axis_reaches_eigenline_ends(pi in 0usize..2, k in 1i64..3, h in prop::array::uniform3(entry())) {
            let p = [2u64, 3][pi];
            let c = ctx(p);
            let h = element(p, h);
            let g = Sl2Matrix::diagonal(&c.power(k), c).conjugate_by(&h);
            let l = translation_length(&g);
            prop_assert_eq!(l, 2 * k as u64);
            let Eigenlines::Two(e1, e2) = rational_eigenlines(&g) else {
                return Err(TestCaseError::fail("diagonalizable over Q"));
            };
            for end in [e1, e2] {
                for level in 30..34 {
                    prop_assert_eq!(displacement(&g, &end.ray_vertex(level, c)), l);
                }
            }
        }
    }
}
