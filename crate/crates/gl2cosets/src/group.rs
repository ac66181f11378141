//! Elements of GL2(F_p): arithmetic, enumeration, dense packing.

use crate::context::{Fp2, PrimeContext, ProjPoint};
use crate::error::Error;

/// Largest prime for which the whole group is enumerated: packed element
/// keys a*p^3 + b*p^2 + c*p + d must fit in u32.
pub const MAX_ENUM_PRIME: u64 = 251;

/// Matrix [[a, b], [c, d]] over F_p. Field order gives lexicographic
/// comparison on (a, b, c, d), the canonical element order everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Mat {
    pub const fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Mat { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat::new(1, 0, 0, 1)
    }

    /// Dense key a*p^3 + b*p^2 + c*p + d.
    #[inline]
    pub fn pack(&self, p: u32) -> usize {
        let p = p as usize;
        ((self.a as usize * p + self.b as usize) * p + self.c as usize) * p + self.d as usize
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }
}

impl PrimeContext {
    #[inline]
    pub fn mat_mul(&self, m: Mat, n: Mat) -> Mat {
        Mat::new(
            self.add(self.mul(m.a, n.a), self.mul(m.b, n.c)),
            self.add(self.mul(m.a, n.b), self.mul(m.b, n.d)),
            self.add(self.mul(m.c, n.a), self.mul(m.d, n.c)),
            self.add(self.mul(m.c, n.b), self.mul(m.d, n.d)),
        )
    }

    #[inline]
    pub fn mat_det(&self, m: Mat) -> u32 {
        self.sub(self.mul(m.a, m.d), self.mul(m.b, m.c))
    }

    #[inline]
    pub fn mat_trace(&self, m: Mat) -> u32 {
        self.add(m.a, m.d)
    }

    /// Inverse via the adjugate; panics if the matrix is singular.
    pub fn mat_inv(&self, m: Mat) -> Mat {
        let det = self.mat_det(m);
        debug_assert!(det != 0, "singular matrix");
        let di = self.inv(det);
        Mat::new(
            self.mul(m.d, di),
            self.mul(self.neg(m.b), di),
            self.mul(self.neg(m.c), di),
            self.mul(m.a, di),
        )
    }

    pub fn mat_pow(&self, m: Mat, mut e: u64) -> Mat {
        let mut base = m;
        let mut acc = Mat::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(acc, base);
            }
            base = self.mat_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Moebius action of an invertible matrix on P^1(F_{p^2}).
    pub fn mat_act(&self, m: Mat, pt: ProjPoint) -> ProjPoint {
        let (a, b, c, d) = (
            self.fp2_embed(m.a),
            self.fp2_embed(m.b),
            self.fp2_embed(m.c),
            self.fp2_embed(m.d),
        );
        match pt {
            ProjPoint::Infinity => self.proj(a, c),
            ProjPoint::Finite(z) => {
                let num = self.fp2_add(self.fp2_mul(a, z), b);
                let den = self.fp2_add(self.fp2_mul(c, z), d);
                self.proj(num, den)
            }
        }
    }

    /// All invertible matrices in lexicographic (a, b, c, d) order.
    pub fn enumerate_group(&self) -> Result<Vec<Mat>, Error> {
        let p = self.p;
        if (p as u64) > MAX_ENUM_PRIME {
            return Err(Error::TooLarge { p: p as u64, bound: MAX_ENUM_PRIME, what: "group enumeration" });
        }
        let order = self.group_order() as usize;
        let mut out = Vec::with_capacity(order);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let m = Mat::new(a, b, c, d);
                        if self.mat_det(m) != 0 {
                            out.push(m);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), order);
        Ok(out)
    }

    /// |GL2(F_p)| = (p^2 - 1)(p^2 - p).
    pub fn group_order(&self) -> u64 {
        let p = self.p as u64;
        (p * p - 1) * (p * p - p)
    }

    /// Order of the element as a group element.
    pub fn mat_order(&self, m: Mat) -> u64 {
        let mut acc = m;
        let mut k = 1u64;
        while acc != Mat::identity() {
            acc = self.mat_mul(acc, m);
            k += 1;
        }
        k
    }

    /// Embedding of F_{p^2}^x as the nonsplit torus { [x, lambda y; y, x] }.
    pub fn mat_of_fp2(&self, g: Fp2) -> Mat {
        Mat::new(g.x, self.mul(self.lambda, g.y), g.y, g.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx7() -> PrimeContext {
        PrimeContext::build(7).unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        for (p, n) in [(3u64, 48usize), (5, 480), (7, 2016)] {
            let ctx = PrimeContext::build(p).unwrap();
            let g = ctx.enumerate_group().unwrap();
            assert_eq!(g.len(), n);
            assert_eq!(g.len() as u64, ctx.group_order());
            // Lexicographic order, no duplicates.
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn packing_is_injective_and_monotone() {
        let ctx = ctx7();
        let g = ctx.enumerate_group().unwrap();
        let keys: Vec<usize> = g.iter().map(|m| m.pack(7)).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(*keys.last().unwrap() < 7usize.pow(4));
    }

    #[test]
    fn nonsplit_torus_embedding_is_multiplicative() {
        let ctx = ctx7();
        let a = Fp2::new(2, 3);
        let b = Fp2::new(5, 1);
        assert_eq!(
            ctx.mat_mul(ctx.mat_of_fp2(a), ctx.mat_of_fp2(b)),
            ctx.mat_of_fp2(ctx.fp2_mul(a, b))
        );
        // The embedded determinant is the field norm.
        assert_eq!(ctx.mat_det(ctx.mat_of_fp2(a)), ctx.fp2_norm(a));
    }

    proptest! {
        #[test]
        fn group_axioms_hold(seed in 0u32..2016, seed2 in 0u32..2016) {
            let ctx = ctx7();
            let g = ctx.enumerate_group().unwrap();
            let m = g[seed as usize % g.len()];
            let n = g[seed2 as usize % g.len()];
            prop_assert_eq!(ctx.mat_mul(m, ctx.mat_inv(m)), Mat::identity());
            prop_assert_eq!(ctx.mat_mul(ctx.mat_inv(m), m), Mat::identity());
            prop_assert_eq!(
                ctx.mat_inv(ctx.mat_mul(m, n)),
                ctx.mat_mul(ctx.mat_inv(n), ctx.mat_inv(m))
            );
            prop_assert_eq!(ctx.mat_det(ctx.mat_mul(m, n)), ctx.mul(ctx.mat_det(m), ctx.mat_det(n)));
        }

        #[test]
        fn moebius_action_is_compatible_with_multiplication(seed in 0u32..2016, seed2 in 0u32..2016, zx in 0u32..7, zy in 0u32..7) {
            let ctx = ctx7();
            let g = ctx.enumerate_group().unwrap();
            let m = g[seed as usize % g.len()];
            let n = g[seed2 as usize % g.len()];
            let pt = ProjPoint::Finite(Fp2::new(zx, zy));
            // (mn) z = m (n z); note functions act on the left.
            prop_assert_eq!(ctx.mat_act(ctx.mat_mul(m, n), pt), ctx.mat_act(m, ctx.mat_act(n, pt)));
        }
    }

    #[test]
    fn element_orders_divide_group_order() {
        let ctx = PrimeContext::build(3).unwrap();
        let g = ctx.enumerate_group().unwrap();
        for m in g {
            assert_eq!(ctx.group_order() % ctx.mat_order(m), 0);
        }
    }
}
