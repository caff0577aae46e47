//! The Bruhat–Tits tree of SL2 over (Q, v_p).
//!
//! A vertex is a homothety class of Z_(p)-lattices in Q². Every class has a
//! unique representative spanned by the columns of `[[p^n, c], [0, 1]]` with
//! `c ∈ Z[1/p]` and `0 ≤ c < p^n`; [`TreeVertex`] stores exactly `(n, c)`.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{
    format_rational, int_valuation, parse_rational, rational_valuation, PrimeContext, Valuation,
};
use crate::matrix::{Matrix2, Sl2Matrix};

/// Default cap on the number of vertices [`tree_ball`] will build.
pub const DEFAULT_MAX_NODES: usize = 100_000;

/// Canonical representative of `y` modulo `p^a Z_(p)` in `Z[1/p] ∩ [0, p^a)`.
pub(crate) fn reduce_mod_power(y: &BigRational, a: i64, ctx: PrimeContext) -> BigRational {
    if y.is_zero() {
        return BigRational::zero();
    }
    let p = ctx.p_big();
    let k = int_valuation(y.denom(), &p);
    let m = y.denom() / p.pow(k as u32);
    // Scale by p^e so that both the modulus and the numerator are integral.
    let e = k.max(-a).max(0);
    let modulus_exp = a + e;
    if modulus_exp <= 0 {
        return BigRational::zero();
    }
    let modulus = p.pow(modulus_exp as u32);
    let num = y.numer() * p.pow((e - k) as u32);
    let m_inv = m
        .mod_floor(&modulus)
        .modinv(&modulus)
        .expect("cofactor is prime to p");
    let scaled = (num * m_inv).mod_floor(&modulus);
    BigRational::new(scaled, p.pow(e as u32))
}

/// Column-echelon form over Z_(p): the lattice spanned by
/// `(p^top, 0)` and `(offset, p^bottom)`, with `offset` reduced mod `p^top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LatticeBasis {
    pub top: i64,
    pub offset: BigRational,
    pub bottom: i64,
}

impl LatticeBasis {
    /// Echelon basis of the Z_(p)-span of arbitrary column vectors.
    pub fn from_columns(cols: &[[BigRational; 2]], ctx: PrimeContext) -> Result<Self> {
        let p = ctx.p_big();
        // Pivot on a bottom entry of minimal valuation; the elimination
        // multipliers then lie in Z_(p).
        let pivot = cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c[1].is_zero())
            .min_by_key(|(_, c)| rational_valuation(&c[1], &p))
            .map(|(i, _)| i)
            .ok_or(Error::SingularMatrix)?;
        let [px, py] = &cols[pivot];
        let mut top: Option<(Valuation, BigRational)> = None;
        for (i, c) in cols.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let x = &c[0] - &(&c[1] / py) * px;
            if x.is_zero() {
                continue;
            }
            let v = rational_valuation(&x, &p);
            if top.as_ref().is_none_or(|(best, _)| v < *best) {
                top = Some((v, x));
            }
        }
        let (top_v, _) = top.ok_or(Error::SingularMatrix)?;
        let top = top_v.finite().expect("nonzero");
        let bottom = rational_valuation(py, &p).finite().expect("nonzero");
        // Scale the pivot column by a unit so its bottom entry is p^bottom.
        let unit = py / ctx.power(bottom);
        let offset = reduce_mod_power(&(px / &unit), top, ctx);
        Ok(Self {
            top,
            offset,
            bottom,
        })
    }

    pub fn columns(&self, ctx: PrimeContext) -> Vec<[BigRational; 2]> {
        vec![
            [ctx.power(self.top), BigRational::zero()],
            [self.offset.clone(), ctx.power(self.bottom)],
        ]
    }

    /// Homothety class.
    pub fn vertex(&self, ctx: PrimeContext) -> TreeVertex {
        let level = self.top - self.bottom;
        let center = reduce_mod_power(&(&self.offset / ctx.power(self.bottom)), level, ctx);
        TreeVertex { level, center, ctx }
    }
}

/// A vertex of the tree in canonical `(level, center)` form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    level: i64,
    center: BigRational,
    ctx: PrimeContext,
}

impl TreeVertex {
    /// The class of the standard lattice Z_(p)².
    pub fn origin(ctx: PrimeContext) -> Self {
        Self {
            level: 0,
            center: BigRational::zero(),
            ctx,
        }
    }

    /// Canonicalizes an arbitrary `(level, center)` pair.
    pub fn new(level: i64, center: BigRational, ctx: PrimeContext) -> Result<Self> {
        let p = ctx.p_big();
        // Centers must lie in Z[1/p].
        let mut d = center.denom().clone();
        while d.is_multiple_of(&p) {
            d /= &p;
        }
        if !d.is_one() {
            return Err(Error::InvalidVertex(format!(
                "center {} is not in Z[1/{}]",
                format_rational(&center),
                ctx
            )));
        }
        let center = reduce_mod_power(&center, level, ctx);
        Ok(Self { level, center, ctx })
    }

    /// Parses the literal `"(n; c)"`.
    pub fn parse(text: &str, ctx: PrimeContext) -> Result<Self> {
        let bad = || Error::InvalidVertex(text.to_string());
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (n, c) = inner.split_once(';').ok_or_else(bad)?;
        let level: i64 = n.trim().parse().map_err(|_| bad())?;
        let center = parse_rational(c).map_err(|_| bad())?;
        if center.is_negative() {
            return Err(bad());
        }
        let v = Self::new(level, center.clone(), ctx)?;
        if v.center != center {
            return Err(Error::InvalidVertex(format!(
                "{text} is not canonical; use {v}"
            )));
        }
        Ok(v)
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn context(&self) -> PrimeContext {
        self.ctx
    }

    /// `[[p^n, c], [0, 1]]`, whose columns span the representative lattice.
    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(
            [
                self.ctx.power(self.level),
                self.center.clone(),
                BigRational::zero(),
                BigRational::one(),
            ],
            self.ctx,
        )
    }

    /// Orbit type under SL2: the level mod 2.
    pub fn vertex_type(&self) -> u8 {
        self.level.rem_euclid(2) as u8
    }

    /// Parent first, then the p children ordered by residue digit.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let mut out = Vec::with_capacity(self.ctx.p() as usize + 1);
        out.push(self.parent());
        out.extend(self.children());
        out
    }

    /// `(n - 1, c mod p^(n-1))`.
    pub fn parent(&self) -> TreeVertex {
        let level = self.level - 1;
        TreeVertex {
            level,
            center: reduce_mod_power(&self.center, level, self.ctx),
            ctx: self.ctx,
        }
    }

    /// `(n + 1, c + d p^n)` for `d = 0, …, p - 1`.
    pub fn children(&self) -> impl Iterator<Item = TreeVertex> + '_ {
        let step = self.ctx.power(self.level);
        (0..self.ctx.p()).map(move |d| TreeVertex {
            level: self.level + 1,
            center: &self.center + &step * BigRational::from_integer(BigInt::from(d)),
            ctx: self.ctx,
        })
    }

    /// The ancestor at a lower level: `(k, c mod p^k)`.
    fn truncate(&self, k: i64) -> TreeVertex {
        debug_assert!(k <= self.level);
        TreeVertex {
            level: k,
            center: reduce_mod_power(&self.center, k, self.ctx),
            ctx: self.ctx,
        }
    }

    fn meet_level(&self, other: &TreeVertex) -> i64 {
        let diff = &self.center - &other.center;
        let m = self.level.min(other.level);
        match rational_valuation(&diff, &self.ctx.p_big()) {
            Valuation::Finite(v) => v.min(m),
            Valuation::Infinity => m,
        }
    }

    fn check_context(&self, other: &TreeVertex) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx.p(), other.ctx.p()))
        }
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.level, format_rational(&self.center))
    }
}

/// Homothety class of the lattice spanned by the columns of `m`.
pub fn canonical_vertex(m: &Matrix2) -> Result<TreeVertex> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let [a, b, c, d] = m.raw();
    let cols = [[a.clone(), c.clone()], [b.clone(), d.clone()]];
    Ok(LatticeBasis::from_columns(&cols, m.context())?.vertex(m.context()))
}

/// Tree distance from the closed-form level/center formula.
pub fn distance(u: &TreeVertex, v: &TreeVertex) -> Result<u64> {
    u.check_context(v)?;
    let m = u.meet_level(v);
    Ok((u.level + v.level - 2 * m) as u64)
}

/// Tree distance from elementary divisors: for `N = M_u^-1 M_v`, the
/// distance is `v(det N) - 2 min v(N_ij)`.
pub fn distance_elementary(u: &TreeVertex, v: &TreeVertex) -> Result<u64> {
    u.check_context(v)?;
    let n = &u.matrix().inverse()? * &v.matrix();
    let det_v = rational_valuation(&n.det(), &u.ctx.p_big())
        .finite()
        .expect("invertible");
    let min_v = n.min_valuation().finite().expect("nonzero matrix");
    Ok((det_v - 2 * min_v) as u64)
}

/// The vertex path from `u` to `v`, both ends included.
pub fn geodesic(u: &TreeVertex, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
    u.check_context(v)?;
    let m = u.meet_level(v);
    let mut path: Vec<TreeVertex> = (m..=u.level).rev().map(|k| u.truncate(k)).collect();
    path.extend((m + 1..=v.level).map(|k| v.truncate(k)));
    Ok(path)
}

/// Image of a vertex under an element of SL2.
pub fn act(g: &Sl2Matrix, v: &TreeVertex) -> TreeVertex {
    act_matrix(g.matrix(), v)
}

pub(crate) fn act_matrix(g: &Matrix2, v: &TreeVertex) -> TreeVertex {
    canonical_vertex(&(g * &v.matrix())).expect("invertible matrices preserve lattices")
}

/// An unordered pair of adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    ends: [TreeVertex; 2],
}

impl TreeEdge {
    pub fn new(u: TreeVertex, v: TreeVertex) -> Result<Self> {
        if distance(&u, &v)? != 1 {
            return Err(Error::InvalidVertex(format!(
                "{u} and {v} are not adjacent"
            )));
        }
        let ends = if u <= v { [u, v] } else { [v, u] };
        Ok(Self { ends })
    }

    pub fn endpoints(&self) -> &[TreeVertex; 2] {
        &self.ends
    }
}

/// Whether `g` fixes the edge. SL2 preserves vertex types, so an edge is
/// never inverted and fixing it means fixing both endpoints.
pub fn edge_fixed_by(g: &Sl2Matrix, e: &TreeEdge) -> bool {
    e.ends.iter().all(|v| &act(g, v) == v)
}

/// A finite ball of the tree, with vertices in breadth-first order.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub center: TreeVertex,
    pub radius: u32,
    pub vertices: Vec<TreeVertex>,
    /// Index pairs into `vertices`; the first index is the vertex nearer the center.
    pub edges: Vec<(usize, usize)>,
    /// Distance of each vertex from the center.
    pub depth: Vec<u32>,
}

/// Number of vertices within distance `radius` of any vertex.
pub fn ball_vertex_count(p: u64, radius: u32) -> u128 {
    let p = p as u128;
    let mut total: u128 = 1;
    let mut sphere: u128 = p + 1;
    for _ in 0..radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(p);
    }
    total
}

pub fn tree_ball(center: &TreeVertex, radius: u32, max_nodes: usize) -> Result<TreeBall> {
    let count = ball_vertex_count(center.ctx.p(), radius);
    if count > max_nodes as u128 {
        return Err(Error::CapExceeded(format!(
            "ball of radius {radius} has {count} vertices, cap is {max_nodes}"
        )));
    }
    let mut vertices = vec![center.clone()];
    let mut depth = vec![0u32];
    let mut came_from: Vec<Option<usize>> = vec![None];
    let mut edges = Vec::with_capacity(count as usize - 1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        for nb in vertices[i].neighbors() {
            if came_from[i].is_some_and(|j| vertices[j] == nb) {
                continue;
            }
            let j = vertices.len();
            vertices.push(nb);
            depth.push(depth[i] + 1);
            came_from.push(Some(i));
            edges.push((i, j));
            queue.push_back(j);
        }
    }
    Ok(TreeBall {
        center: center.clone(),
        radius,
        vertices,
        edges,
        depth,
    })
}

impl TreeBall {
    /// Undirected DOT graph labelled by canonical vertex text.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{v}\"];");
        }
        for (i, j) in &self.edges {
            let _ = writeln!(out, "  v{i} -- v{j};");
        }
        out.push_str("}\n");
        out
    }

    pub fn index_of(&self, v: &TreeVertex) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    /// Adjacency lists over vertex indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}
