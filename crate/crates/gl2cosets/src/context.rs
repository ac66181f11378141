//! Prime-field context: arithmetic tables for F_p and F_{p^2} = F_p(sqrt(lambda)).
//!
//! All canonical choices are fixed here once per prime:
//! * `lambda` is the least positive quadratic non-residue mod p,
//! * `gen_fp` is the least positive primitive root mod p,
//! * `gen_fp2` is the lexicographically least pair (x, y), meaning x + y*sqrt(lambda),
//!   of multiplicative order p^2 - 1.

use crate::error::Error;

/// Largest prime for which contexts are built; the discrete-log table over
/// F_{p^2} has p^2 entries, which stays a few megabytes under this bound.
pub const MAX_CONTEXT_PRIME: u64 = 1000;

/// Element x + y*sqrt(lambda) of F_{p^2}, with x, y reduced residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    pub x: u32,
    pub y: u32,
}

impl Fp2 {
    pub const fn new(x: u32, y: u32) -> Self {
        Fp2 { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Whether the element lies in the base field F_p.
    pub fn is_base(&self) -> bool {
        self.y == 0
    }
}

/// Point of the projective line P^1(F_{p^2}) in normalized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Infinity,
    Finite(Fp2),
}

#[derive(Debug, Clone)]
pub struct PrimeContext {
    pub p: u32,
    /// Least positive quadratic non-residue mod p.
    pub lambda: u32,
    /// Least positive primitive root mod p.
    pub gen_fp: u32,
    /// Lexicographically least generator of the cyclic group F_{p^2}^x.
    pub gen_fp2: Fp2,
    inv_tab: Vec<u32>,
    legendre_tab: Vec<i8>,
    sqrt_tab: Vec<u32>,
    dlog_fp: Vec<u32>,
    dlog_fp2: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeContext {
    pub fn build(p: u64) -> Result<Self, Error> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime { p });
        }
        if p > MAX_CONTEXT_PRIME {
            return Err(Error::TooLarge { p, bound: MAX_CONTEXT_PRIME, what: "field tables" });
        }
        let p = p as u32;
        let pu = p as u64;

        // Legendre symbol table: mark squares of 1..p-1.
        let mut legendre_tab = vec![-1i8; p as usize];
        legendre_tab[0] = 0;
        let mut sqrt_tab = vec![u32::MAX; p as usize];
        for r in 0..=(p - 1) / 2 {
            let sq = ((r as u64 * r as u64) % pu) as u32;
            if sq != 0 {
                legendre_tab[sq as usize] = 1;
            }
            // r runs over the smaller of the two roots exactly once per square.
            sqrt_tab[sq as usize] = r;
        }

        let lambda = (2..p)
            .find(|&a| legendre_tab[a as usize] == -1)
            .expect("odd prime has a non-residue");

        let mut inv_tab = vec![0u32; p as usize];
        for x in 1..p {
            inv_tab[x as usize] = pow_mod(x, pu - 2, p);
        }

        let fp_factors = prime_factors(pu - 1);
        let gen_fp = (2..p)
            .find(|&g| fp_factors.iter().all(|&q| pow_mod(g, (pu - 1) / q, p) != 1))
            .expect("odd prime has a primitive root");

        let mut dlog_fp = vec![u32::MAX; p as usize];
        let mut acc = 1u32;
        for k in 0..(p - 1) {
            dlog_fp[acc as usize] = k;
            acc = ((acc as u64 * gen_fp as u64) % pu) as u32;
        }
        debug_assert_eq!(acc, 1);

        let mut ctx = PrimeContext {
            p,
            lambda,
            gen_fp,
            gen_fp2: Fp2::new(0, 0),
            inv_tab,
            legendre_tab,
            sqrt_tab,
            dlog_fp,
            dlog_fp2: Vec::new(),
        };

        let n2 = pu * pu - 1;
        let fp2_factors = prime_factors(n2);
        let mut gen_fp2 = None;
        'search: for x in 0..p {
            for y in 0..p {
                let g = Fp2::new(x, y);
                if g.is_zero() {
                    continue;
                }
                if fp2_factors.iter().all(|&q| !ctx.fp2_pow(g, n2 / q).eq(&Fp2::new(1, 0))) {
                    gen_fp2 = Some(g);
                    break 'search;
                }
            }
        }
        let gen_fp2 = gen_fp2.expect("F_{p^2}^x is cyclic");
        ctx.gen_fp2 = gen_fp2;

        let mut dlog_fp2 = vec![u32::MAX; (p as usize) * (p as usize)];
        let mut acc = Fp2::new(1, 0);
        for k in 0..n2 {
            dlog_fp2[(acc.x as usize) * (p as usize) + acc.y as usize] = k as u32;
            acc = ctx.fp2_mul(acc, gen_fp2);
        }
        debug_assert_eq!(acc, Fp2::new(1, 0));
        ctx.dlog_fp2 = dlog_fp2;

        Ok(ctx)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0, "inverse of zero");
        self.inv_tab[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(a, e, self.p)
    }

    /// Legendre symbol of `a` as -1, 0, 1.
    #[inline]
    pub fn legendre(&self, a: u32) -> i8 {
        self.legendre_tab[a as usize]
    }

    /// Least square root of `a` (the one in 0..=(p-1)/2), if `a` is a square.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let r = self.sqrt_tab[a as usize];
        if r == u32::MAX { None } else { Some(r) }
    }

    /// Discrete log of nonzero `a` base `gen_fp`.
    #[inline]
    pub fn dlog(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.dlog_fp[a as usize]
    }

    /// Discrete log of nonzero `g` base `gen_fp2`.
    #[inline]
    pub fn dlog2(&self, g: Fp2) -> u64 {
        debug_assert!(!g.is_zero());
        self.dlog_fp2[(g.x as usize) * (self.p as usize) + g.y as usize] as u64
    }

    // ----- F_{p^2} arithmetic -----

    #[inline]
    pub fn fp2_embed(&self, a: u32) -> Fp2 {
        Fp2::new(a, 0)
    }

    #[inline]
    pub fn fp2_add(&self, a: Fp2, b: Fp2) -> Fp2 {
        Fp2::new(self.add(a.x, b.x), self.add(a.y, b.y))
    }

    #[inline]
    pub fn fp2_neg(&self, a: Fp2) -> Fp2 {
        Fp2::new(self.neg(a.x), self.neg(a.y))
    }

    /// (x1 + y1 s)(x2 + y2 s) with s^2 = lambda.
    #[inline]
    pub fn fp2_mul(&self, a: Fp2, b: Fp2) -> Fp2 {
        let x = self.add(self.mul(a.x, b.x), self.mul(self.lambda, self.mul(a.y, b.y)));
        let y = self.add(self.mul(a.x, b.y), self.mul(a.y, b.x));
        Fp2::new(x, y)
    }

    /// Frobenius conjugate x - y*sqrt(lambda); coincides with the p-th power.
    #[inline]
    pub fn fp2_conj(&self, a: Fp2) -> Fp2 {
        Fp2::new(a.x, self.neg(a.y))
    }

    /// Norm to F_p: x^2 - lambda y^2.
    #[inline]
    pub fn fp2_norm(&self, a: Fp2) -> u32 {
        self.sub(self.mul(a.x, a.x), self.mul(self.lambda, self.mul(a.y, a.y)))
    }

    pub fn fp2_inv(&self, a: Fp2) -> Fp2 {
        debug_assert!(!a.is_zero());
        let n_inv = self.inv(self.fp2_norm(a));
        let c = self.fp2_conj(a);
        Fp2::new(self.mul(c.x, n_inv), self.mul(c.y, n_inv))
    }

    pub fn fp2_pow(&self, a: Fp2, mut e: u64) -> Fp2 {
        let mut base = a;
        let mut acc = Fp2::new(1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fp2_mul(acc, base);
            }
            base = self.fp2_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Normalized quotient a/b in P^1: (a : b) with b = 0 mapping to Infinity.
    pub fn proj(&self, a: Fp2, b: Fp2) -> ProjPoint {
        if b.is_zero() {
            debug_assert!(!a.is_zero(), "(0 : 0) is not a projective point");
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(self.fp2_mul(a, self.fp2_inv(b)))
        }
    }
}

fn pow_mod(a: u32, mut e: u64, p: u32) -> u32 {
    let pu = p as u64;
    let mut base = a as u64 % pu;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % pu;
        }
        base = base * base % pu;
        e >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes_and_two() {
        for p in [0u64, 1, 2, 4, 9, 15, 21] {
            assert!(PrimeContext::build(p).is_err(), "p = {p}");
        }
    }

    #[test]
    fn canonical_choices_small_primes() {
        // (p, lambda, gen_fp)
        for (p, lambda, g) in [(3, 2, 2), (5, 2, 2), (7, 3, 3), (11, 2, 2), (13, 2, 2), (17, 3, 3), (19, 2, 2)] {
            let ctx = PrimeContext::build(p).unwrap();
            assert_eq!(ctx.lambda, lambda, "lambda for p = {p}");
            assert_eq!(ctx.gen_fp, g, "generator for p = {p}");
        }
    }

    #[test]
    fn gen_fp2_is_lex_least_generator() {
        let ctx = PrimeContext::build(3).unwrap();
        assert_eq!(ctx.gen_fp2, Fp2::new(1, 1));
        // Every earlier pair has smaller order.
        for (x, y) in [(0u32, 1u32), (0, 2), (1, 0)] {
            let g = Fp2::new(x, y);
            let mut acc = g;
            let mut ord = 1;
            while acc != Fp2::new(1, 0) {
                acc = ctx.fp2_mul(acc, g);
                ord += 1;
            }
            assert!(ord < 8, "({x},{y}) has order {ord}");
        }
    }

    #[test]
    fn dlog_tables_invert_powers() {
        let ctx = PrimeContext::build(13).unwrap();
        for x in 1..13 {
            assert_eq!(ctx.pow(ctx.gen_fp, ctx.dlog(x) as u64), x);
        }
        for x in 0..13u32 {
            for y in 0..13u32 {
                let g = Fp2::new(x, y);
                if g.is_zero() {
                    continue;
                }
                assert_eq!(ctx.fp2_pow(ctx.gen_fp2, ctx.dlog2(g)), g);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_frobenius_is_p_power() {
        let ctx = PrimeContext::build(7).unwrap();
        for x1 in 0..7 {
            for y1 in 0..7 {
                let a = Fp2::new(x1, y1);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(ctx.fp2_conj(a), ctx.fp2_pow(a, 7));
                assert_eq!(ctx.fp2_norm(a), {
                    let n = ctx.fp2_mul(a, ctx.fp2_conj(a));
                    assert_eq!(n.y, 0);
                    n.x
                });
                let b = Fp2::new((x1 + 3) % 7, (y1 + 5) % 7);
                if !b.is_zero() {
                    assert_eq!(ctx.fp2_norm(ctx.fp2_mul(a, b)), ctx.mul(ctx.fp2_norm(a), ctx.fp2_norm(b)));
                }
            }
        }
    }

    #[test]
    fn sqrt_returns_least_root() {
        let ctx = PrimeContext::build(17).unwrap();
        for a in 0..17u32 {
            match ctx.sqrt(a) {
                Some(r) => {
                    assert_eq!(ctx.mul(r, r), a);
                    assert!(r <= 8);
                }
                None => assert_eq!(ctx.legendre(a), -1),
            }
        }
    }
}
