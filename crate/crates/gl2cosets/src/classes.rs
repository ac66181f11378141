//! Conjugacy classes of GL2(F_p).
//!
//! The p^2 - 1 classes fall into four families, parametrized canonically:
//! * Scalar x: the central element diag(x, x), size 1;
//! * Unipotent x: class of [x, 1; 0, x], size p^2 - 1;
//! * Split {x, y} with x < y: class of diag(x, y), size p(p + 1);
//! * NonSplit (x, y) with 1 <= y <= (p-1)/2: class of [x, lambda y; y, x]
//!   (eigenvalues x +- y sqrt(lambda)), size p(p - 1).
//!
//! Classification of an arbitrary element goes through trace t and
//! determinant n: the discriminant t^2 - 4n is zero exactly for the scalar
//! and unipotent families, a nonzero square for split, a non-square for
//! nonsplit. Canonical parameters are recovered by the quadratic formula.

use crate::context::PrimeContext;
use crate::group::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjClassId {
    Scalar { x: u32 },
    Unipotent { x: u32 },
    Split { x: u32, y: u32 },
    NonSplit { x: u32, y: u32 },
}

impl PrimeContext {
    pub fn classify(&self, m: Mat) -> ConjClassId {
        if m.is_scalar() {
            return ConjClassId::Scalar { x: m.a };
        }
        let t = self.mat_trace(m);
        let n = self.mat_det(m);
        let disc = self.sub(self.mul(t, t), self.mul(4 % self.p, n));
        let half = self.inv(2 % self.p);
        if disc == 0 {
            return ConjClassId::Unipotent { x: self.mul(t, half) };
        }
        match self.sqrt(disc) {
            Some(s) => {
                let r1 = self.mul(self.add(t, s), half);
                let r2 = self.mul(self.sub(t, s), half);
                ConjClassId::Split { x: r1.min(r2), y: r1.max(r2) }
            }
            None => {
                let x = self.mul(t, half);
                // lambda y^2 = x^2 - n, and x^2 - n is lambda times a square
                // exactly when the discriminant is a non-square.
                let yy = self.mul(self.sub(self.mul(x, x), n), self.inv(self.lambda));
                let y = self.sqrt(yy).expect("nonsplit class has lambda * square");
                debug_assert!(y != 0);
                ConjClassId::NonSplit { x, y }
            }
        }
    }

    pub fn class_rep(&self, id: ConjClassId) -> Mat {
        match id {
            ConjClassId::Scalar { x } => Mat::new(x, 0, 0, x),
            ConjClassId::Unipotent { x } => Mat::new(x, 1, 0, x),
            ConjClassId::Split { x, y } => Mat::new(x, 0, 0, y),
            ConjClassId::NonSplit { x, y } => Mat::new(x, self.mul(self.lambda, y), y, x),
        }
    }

    pub fn class_size(&self, id: ConjClassId) -> u64 {
        let p = self.p as u64;
        match id {
            ConjClassId::Scalar { .. } => 1,
            ConjClassId::Unipotent { .. } => p * p - 1,
            ConjClassId::Split { .. } => p * (p + 1),
            ConjClassId::NonSplit { .. } => p * (p - 1),
        }
    }

    /// Trace and determinant of the class.
    pub fn class_trace_det(&self, id: ConjClassId) -> (u32, u32) {
        match id {
            ConjClassId::Scalar { x } => (self.add(x, x), self.mul(x, x)),
            ConjClassId::Unipotent { x } => (self.add(x, x), self.mul(x, x)),
            ConjClassId::Split { x, y } => (self.add(x, y), self.mul(x, y)),
            ConjClassId::NonSplit { x, y } => (
                self.add(x, x),
                self.sub(self.mul(x, x), self.mul(self.lambda, self.mul(y, y))),
            ),
        }
    }

    /// All classes in canonical order: scalars, unipotents, split (lex),
    /// nonsplit (lex). The position of each id agrees with `class_index`.
    pub fn class_list(&self) -> Vec<ConjClassId> {
        let p = self.p;
        let mut out = Vec::with_capacity((p as usize) * (p as usize) - 1);
        for x in 1..p {
            out.push(ConjClassId::Scalar { x });
        }
        for x in 1..p {
            out.push(ConjClassId::Unipotent { x });
        }
        for x in 1..p {
            for y in (x + 1)..p {
                out.push(ConjClassId::Split { x, y });
            }
        }
        for x in 0..p {
            for y in 1..=(p - 1) / 2 {
                out.push(ConjClassId::NonSplit { x, y });
            }
        }
        debug_assert_eq!(out.len(), (p as usize) * (p as usize) - 1);
        out
    }

    /// Index of the class in `class_list` order, by closed-form arithmetic.
    pub fn class_index(&self, id: ConjClassId) -> usize {
        let p = self.p as usize;
        match id {
            ConjClassId::Scalar { x } => x as usize - 1,
            ConjClassId::Unipotent { x } => (p - 1) + x as usize - 1,
            ConjClassId::Split { x, y } => {
                let (x, y) = (x as usize, y as usize);
                // pairs (x', y') with x' < x, then (x, y') with x < y' < y
                let before = (x - 1) * (2 * p - 2 - x) / 2;
                2 * (p - 1) + before + (y - x - 1)
            }
            ConjClassId::NonSplit { x, y } => {
                let half = (p - 1) / 2;
                2 * (p - 1) + (p - 1) * (p - 2) / 2 + (x as usize) * half + (y as usize - 1)
            }
        }
    }
}

/// Class partition of an enumerated group: canonical list, sizes, and a
/// dense element-to-class lookup over packed keys.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub list: Vec<ConjClassId>,
    pub sizes: Vec<u64>,
    pub reps: Vec<Mat>,
    /// class index per packed element key; u32::MAX for singular keys.
    pub class_of: Vec<u32>,
}

impl ClassData {
    pub fn build(ctx: &PrimeContext, group: &[Mat]) -> Self {
        let list = ctx.class_list();
        let sizes: Vec<u64> = list.iter().map(|&c| ctx.class_size(c)).collect();
        let reps: Vec<Mat> = list.iter().map(|&c| ctx.class_rep(c)).collect();
        let p = ctx.p as usize;
        let mut class_of = vec![u32::MAX; p * p * p * p];
        let mut census = vec![0u64; list.len()];
        for &m in group {
            let idx = ctx.class_index(ctx.classify(m));
            class_of[m.pack(ctx.p)] = idx as u32;
            census[idx] += 1;
        }
        debug_assert_eq!(census, sizes, "class census disagrees with size formulas");
        ClassData { list, sizes, reps, class_of }
    }

    #[inline]
    pub fn of(&self, ctx: &PrimeContext, m: Mat) -> usize {
        self.class_of[m.pack(ctx.p)] as usize
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::PrimeContext;

    #[test]
    fn classify_canonical_forms() {
        let ctx = PrimeContext::build(7).unwrap();
        assert_eq!(ctx.classify(Mat::identity()), ConjClassId::Scalar { x: 1 });
        assert_eq!(ctx.classify(Mat::new(1, 1, 0, 1)), ConjClassId::Unipotent { x: 1 });
        assert_eq!(ctx.classify(Mat::new(2, 0, 0, 5)), ConjClassId::Split { x: 2, y: 5 });
        assert_eq!(ctx.classify(Mat::new(0, ctx.lambda, 1, 0)), ConjClassId::NonSplit { x: 0, y: 1 });
        // Lower-triangular unipotent lands in the same class.
        assert_eq!(ctx.classify(Mat::new(3, 0, 5, 3)), ConjClassId::Unipotent { x: 3 });
    }

    #[test]
    fn class_list_indexing_roundtrip() {
        for p in [3u64, 5, 7, 19] {
            let ctx = PrimeContext::build(p).unwrap();
            let list = ctx.class_list();
            assert_eq!(list.len() as u64, p * p - 1);
            for (i, &id) in list.iter().enumerate() {
                assert_eq!(ctx.class_index(id), i);
                assert_eq!(ctx.classify(ctx.class_rep(id)), id, "rep of {id:?}");
            }
            let total: u64 = list.iter().map(|&c| ctx.class_size(c)).sum();
            assert_eq!(total, ctx.group_order());
        }
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let ctx = PrimeContext::build(5).unwrap();
        let group = ctx.enumerate_group().unwrap();
        for &id in &ctx.class_list() {
            let r = ctx.class_rep(id);
            for &g in &group {
                let conj = ctx.mat_mul(ctx.mat_mul(g, r), ctx.mat_inv(g));
                assert_eq!(ctx.classify(conj), id);
            }
        }
    }

    #[test]
    fn census_matches_size_formulas() {
        for p in [3u64, 5, 7] {
            let ctx = PrimeContext::build(p).unwrap();
            let group = ctx.enumerate_group().unwrap();
            let data = ClassData::build(&ctx, &group);
            // Sizes are asserted inside build (debug); re-count here for release runs.
            let mut census = vec![0u64; data.len()];
            for &m in &group {
                census[data.of(&ctx, m)] += 1;
            }
            assert_eq!(census, data.sizes);
        }
    }

    #[test]
    fn orbit_oracle_agrees_with_classifier() {
        // Independent route: the literal conjugation orbit of each canonical
        // representative must coincide with the set carrying its class index.
        let ctx = PrimeContext::build(3).unwrap();
        let group = ctx.enumerate_group().unwrap();
        let data = ClassData::build(&ctx, &group);
        for (i, &rep) in data.reps.iter().enumerate() {
            let mut orbit: Vec<usize> = group
                .iter()
                .map(|&g| ctx.mat_mul(ctx.mat_mul(g, rep), ctx.mat_inv(g)).pack(ctx.p))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            assert_eq!(orbit.len() as u64, data.sizes[i]);
            for key in orbit {
                assert_eq!(data.class_of[key] as usize, i);
            }
        }
    }
}
