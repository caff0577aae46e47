//! Fixtures shared by the benchmarks.

use sl2tree_core::{Presentation, PrimeContext, Representation, Sl2Matrix};

fn m(e: [(i64, i64); 4], ctx: PrimeContext) -> Sl2Matrix {
    Sl2Matrix::from_fractions(e, ctx).expect("det 1 fixture")
}

/// An unbounded irreducible two-generator representation over p = 3.
pub fn free_pair() -> Representation {
    let ctx = PrimeContext::new(3).expect("3 is prime");
    let a = m([(3, 1), (1, 1), (0, 1), (1, 3)], ctx);
    let b = m([(1, 1), (0, 1), (1, 1), (1, 1)], ctx);
    Representation::new(Presentation::free(2), vec![a, b], ctx).expect("free group")
}

/// Genus-2 surface group representation `(A, B, B, A B)`.
pub fn genus_two() -> Representation {
    let ctx = PrimeContext::new(3).expect("3 is prime");
    let a = m([(3, 1), (1, 1), (0, 1), (1, 3)], ctx);
    let b = m([(1, 1), (0, 1), (2, 1), (1, 1)], ctx);
    let ab = &a * &b;
    Representation::new(
        Presentation::surface(2).expect("genus 2"),
        vec![a, b.clone(), b, ab],
        ctx,
    )
    .expect("relator holds")
}
