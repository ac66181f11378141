//! Operators between permutation modules Z[G/H].
//!
//! The operator of a double coset HgK sends xH to the sum of xwK over the
//! right K-cosets wK inside HgK. Its matrix entry at (row j, column i) is
//! 1 exactly when r_i^-1 c_j lies in HgK, where r_i are the G/H
//! representatives and c_j the G/K representatives; every column sums to
//! deg(HgK). Since the supports of distinct double cosets partition the
//! cells, any G-equivariant map decomposes uniquely in this basis, and the
//! decomposition doubles as an equivariance check: the matrix must be
//! constant on each double coset's cells.

use crate::context::PrimeContext;
use crate::error::Error;
use crate::group::Mat;
use crate::matrix::IntMatrix;
use crate::subgroups::{CosetSpace, DoubleCosets, Subgroup, SubgroupLabel};
use num_bigint::BigInt;

#[derive(Debug, Clone)]
pub struct CosetOperator {
    pub source: SubgroupLabel,
    pub target: SubgroupLabel,
    /// rows = |G/target|, cols = |G/source|.
    pub matrix: IntMatrix,
}

/// Operator of the double coset with the given id in H\G/K, as a map
/// Z[G/H] -> Z[G/K].
pub fn operator_of_double_coset(
    ctx: &PrimeContext,
    src: &CosetSpace,
    tgt: &CosetSpace,
    dc: &DoubleCosets,
    coset_id: usize,
) -> CosetOperator {
    debug_assert_eq!(src.label, dc.left);
    debug_assert_eq!(tgt.label, dc.right);
    let mut m = IntMatrix::zeros(tgt.len(), src.len());
    for i in 0..src.len() {
        let ri = src.rep_inv[i];
        for (j, &cj) in tgt.reps.iter().enumerate() {
            if dc.id_of(ctx, ctx.mat_mul(ri, cj)) == coset_id {
                m.set(j, i, BigInt::from(1));
            }
        }
    }
    CosetOperator { source: src.label, target: tgt.label, matrix: m }
}

/// Operator of the double coset H*1*K containing the identity.
pub fn unit_operator(
    ctx: &PrimeContext,
    src: &CosetSpace,
    tgt: &CosetSpace,
    dc: &DoubleCosets,
) -> CosetOperator {
    operator_of_double_coset(ctx, src, tgt, dc, dc.id_of(ctx, Mat::identity()))
}

/// Composition "first then second"; the matrix is second * first.
pub fn compose(first: &CosetOperator, second: &CosetOperator) -> Result<CosetOperator, Error> {
    if first.target != second.source {
        return Err(Error::DimMismatch {
            left: format!("target {}", first.target),
            right: format!("source {}", second.source),
        });
    }
    Ok(CosetOperator {
        source: first.source,
        target: second.target,
        matrix: second.matrix.mul(&first.matrix)?,
    })
}

/// The operator |G|(1 - pr_G) on Z[G/H]: |G| I - |H| J. It kills the
/// all-ones vector (the trivial component) and scales every other
/// irreducible component by |G|.
pub fn averaging_matrix(ctx: &PrimeContext, space: &CosetSpace) -> IntMatrix {
    let n = space.len();
    let g_order = BigInt::from(ctx.group_order());
    let h_order = BigInt::from(ctx.group_order() / n as u64);
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { &g_order - &h_order } else { -&h_order };
            m.set(i, j, v);
        }
    }
    m
}

/// Decomposes a G-equivariant map Z[G/H] -> Z[G/K] in the double-coset
/// operator basis: one coefficient per coset of H\G/K. Fails if the matrix
/// is not constant on some coset's cells (i.e. not equivariant).
pub fn theta_coefficients(
    ctx: &PrimeContext,
    op: &CosetOperator,
    src: &CosetSpace,
    tgt: &CosetSpace,
    dc: &DoubleCosets,
) -> Result<Vec<BigInt>, Error> {
    let mut coeffs: Vec<Option<BigInt>> = vec![None; dc.len()];
    for i in 0..src.len() {
        let ri = src.rep_inv[i];
        for (j, &cj) in tgt.reps.iter().enumerate() {
            let id = dc.id_of(ctx, ctx.mat_mul(ri, cj));
            let v = op.matrix.get(j, i);
            match &coeffs[id] {
                None => coeffs[id] = Some(v.clone()),
                Some(prev) if prev == v => {}
                Some(prev) => {
                    return Err(Error::NotEquivariant {
                        coset: id,
                        a: prev.to_string(),
                        b: v.to_string(),
                    })
                }
            }
        }
    }
    Ok(coeffs.into_iter().map(|c| c.expect("every double coset has cells")).collect())
}

/// Product expansion of HaK x KbM into H\G/M double cosets:
///
///   HaK x KbM = (deg(KbM)/|K|) * sum over k in K of
///               (deg(HaK)/deg(H akb M)) * H akb M,
///
/// evaluated by counting, per target coset D, the k in K with akb in D:
/// coeff(D) = deg(HaK) * deg(KbM) * count / (|K| * deg(D)). Every division
/// is checked exact; fractional intermediate terms always sum to integers.
pub fn expand_product(
    ctx: &PrimeContext,
    h: &Subgroup,
    k: &Subgroup,
    m: &Subgroup,
    a: Mat,
    b: Mat,
    dc_hm: &DoubleCosets,
) -> Result<Vec<BigInt>, Error> {
    let deg_hak = crate::subgroups::degree(ctx, h, a, k);
    let deg_kbm = crate::subgroups::degree(ctx, k, b, m);
    let mut counts = vec![0u64; dc_hm.len()];
    for &x in &k.elements {
        let axb = ctx.mat_mul(ctx.mat_mul(a, x), b);
        counts[dc_hm.id_of(ctx, axb)] += 1;
    }
    let k_order = k.order();
    counts
        .iter()
        .zip(&dc_hm.cosets)
        .map(|(&cnt, coset)| {
            let num = deg_hak * deg_kbm * cnt;
            let den = k_order * coset.degree;
            if num % den != 0 {
                return Err(Error::Invalid(format!(
                    "product formula gave non-integral coefficient {num}/{den}"
                )));
            }
            Ok(BigInt::from(num / den))
        })
        .collect()
}

/// The three maps of the permutation-module sequence
///
///   0 <- Z[G/G] <- Z[G/B] <- Z[G/N] <- Z[G/N'] <- 0
///
/// together with the spaces they act on. The middle map folds in the
/// averaging operator |G|(1 - pr_G) so that the composition with the
/// left map vanishes identically.
#[derive(Debug, Clone)]
pub struct SequenceOps {
    pub to_point: CosetOperator,
    pub norm_to_borel: CosetOperator,
    pub nonsplit_to_norm: CosetOperator,
}

pub fn sequence_operators(
    ctx: &PrimeContext,
    group: &[Mat],
    borel: &Subgroup,
    norm: &Subgroup,
    nonsplit_norm: &Subgroup,
    full: &Subgroup,
    sp_full: &CosetSpace,
    sp_borel: &CosetSpace,
    sp_norm: &CosetSpace,
    sp_nonsplit: &CosetSpace,
) -> Result<SequenceOps, Error> {
    let dc_bg = DoubleCosets::build(ctx, group, borel, full);
    let to_point = unit_operator(ctx, sp_borel, sp_full, &dc_bg);

    let dc_nb = DoubleCosets::build(ctx, group, norm, borel);
    let theta_nb = unit_operator(ctx, sp_norm, sp_borel, &dc_nb);
    let avg = averaging_matrix(ctx, sp_borel);
    let norm_to_borel = CosetOperator {
        source: theta_nb.source,
        target: theta_nb.target,
        matrix: avg.mul(&theta_nb.matrix)?,
    };

    let dc_npn = DoubleCosets::build(ctx, group, nonsplit_norm, norm);
    let nonsplit_to_norm = unit_operator(ctx, sp_nonsplit, sp_norm, &dc_npn);

    Ok(SequenceOps { to_point, norm_to_borel, nonsplit_to_norm })
}

/// Ranks expected for the sequence maps: 1, p, (p^2 - p)/2.
pub fn expected_sequence_ranks(p: u64) -> (usize, usize, usize) {
    (1, p as usize, ((p * p - p) / 2) as usize)
}

pub fn is_zero_matrix(m: &IntMatrix) -> bool {
    m.is_zero()
}

/// Column sums of an operator matrix; for a single double-coset operator
/// these all equal deg(HgK).
pub fn column_sums(op: &CosetOperator) -> Vec<BigInt> {
    (0..op.matrix.cols).map(|j| op.matrix.column_sum(j)).collect()
}
