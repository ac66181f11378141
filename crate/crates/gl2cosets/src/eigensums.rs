//! Eigenvalues of double-coset operators via character sums, and the exact
//! integer-matrix route they are checked against.
//!
//! Everything revolves around two operators on Z[G/N'] and Z[G/N] (N the
//! split-torus normalizer, N' the nonsplit one):
//!
//!  * theta(N sigma_{-1} N) with sigma_{-1} = [1 1; 1 -1], whose eigenvalue
//!    on an irreducible component chi is a character sum over the single
//!    coset sigma_{-1} N;
//!  * the pairing N'N then NN' (and its mirror NN' then N'N), whose
//!    eigenvalue on chi is (p^2-1)/4 for the trivial character and
//!    p - lambda_chi(N sigma_{-1} N)^2 otherwise.
//!
//! The determinant table groups the pairing eigenvalues by character family;
//! each family's product is a plain integer even when individual eigenvalues
//! are irrational, so the table entries are exact big integers.

use crate::characters::{
    alpha_value, expected_decomposition, phi_value, CharTable, IrredCharacter,
};
use crate::classes::{ClassData, ConjClassId};
use crate::context::{Fp2, PrimeContext};
use crate::error::Error;
use crate::group::Mat;
use crate::matrix::IntMatrix;
use crate::permmod::{compose, unit_operator};
use crate::subgroups::{degree, CosetSpace, DoubleCosets, Subgroup, SubgroupLabel};
use crate::{round_to_integer, CheckItem, IMAG_TOL, ROUND_TOL};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Number of elements of the coset sigma_{-1} N in the given conjugacy
/// class: 0 for scalars, otherwise 2 (1 + legendre(tr^2 - 2 det)).
pub fn sigma_minus_one_class_count(ctx: &PrimeContext, class: ConjClassId) -> u64 {
    match class {
        ConjClassId::Scalar { .. } => 0,
        _ => {
            let (t, n) = ctx.class_trace_det(class);
            let d = ctx.sub(ctx.mul(t, t), ctx.add(n, n));
            (2 * (1 + ctx.legendre(d) as i64)) as u64
        }
    }
}

/// Class census of sigma_{-1} N over the canonical class list.
pub fn sigma_minus_one_census(ctx: &PrimeContext) -> Vec<u64> {
    ctx.class_list()
        .into_iter()
        .map(|c| sigma_minus_one_class_count(ctx, c))
        .collect()
}

/// Eigenvalue of theta(N sigma_{-1} N) on the chi-component, from the class
/// census: (1 / (4(p-1))) sum_c census(c) conj(chi(c)).
pub fn sigma_eigenvalue_census(
    ctx: &PrimeContext,
    table: &CharTable,
    census: &[u64],
    irred_idx: usize,
) -> Complex64 {
    let mut acc = Complex64::zero();
    for (c, &count) in census.iter().enumerate() {
        if count > 0 {
            acc += count as f64 * table.value(irred_idx, c).conj();
        }
    }
    acc / (4.0 * (ctx.p as f64 - 1.0))
}

/// Eigenvalue of theta(N sigma_{-1} N) on the component ps(a, -a):
/// (1/2) sum_{d in F_p^x} alpha(d) legendre(1 + d^2).
pub fn sigma_eigenvalue_principal(ctx: &PrimeContext, a: u32) -> Complex64 {
    let mut acc = Complex64::zero();
    for d in 1..ctx.p {
        let l = ctx.legendre(ctx.add(1, ctx.mul(d, d)));
        if l != 0 {
            acc += l as f64 * alpha_value(ctx, a, d);
        }
    }
    acc / 2.0
}

/// Eigenvalue of theta(N sigma_{-1} N) on the component cusp(j):
/// -(1 / (2(p-1))) sum over gamma in F_{p^2}^x of
/// phi(gamma) legendre(gamma^2 + conj(gamma)^2).
pub fn sigma_eigenvalue_cuspidal(ctx: &PrimeContext, j: u32) -> Complex64 {
    let mut acc = Complex64::zero();
    for x in 0..ctx.p {
        for y in 0..ctx.p {
            if x == 0 && y == 0 {
                continue;
            }
            // gamma^2 + conj(gamma)^2 = 2(x^2 + lambda y^2)
            let s = ctx.add(ctx.mul(x, x), ctx.mul(ctx.lambda, ctx.mul(y, y)));
            let l = ctx.legendre(ctx.add(s, s));
            if l != 0 {
                acc += l as f64 * phi_value(ctx, j, Fp2::new(x, y));
            }
        }
    }
    -acc / (2.0 * (ctx.p as f64 - 1.0))
}

/// Eigenvalue of theta(N sigma_{-1} N) on the quadratic Steinberg twist
/// st((p-1)/2), present for p = 1 mod 4:
/// (1/4) sum_d legendre(d) legendre(1 + d^2)
///   - (1 / (4(p-1))) sum_gamma legendre(norm gamma) legendre(gamma^2 + conj(gamma)^2).
pub fn sigma_eigenvalue_quadratic_steinberg(ctx: &PrimeContext) -> f64 {
    let mut first = 0.0;
    for d in 1..ctx.p {
        first +=
            ctx.legendre(d) as f64 * ctx.legendre(ctx.add(1, ctx.mul(d, d))) as f64;
    }
    let mut second = 0.0;
    for x in 0..ctx.p {
        for y in 0..ctx.p {
            if x == 0 && y == 0 {
                continue;
            }
            let g = Fp2::new(x, y);
            let s = ctx.add(ctx.mul(x, x), ctx.mul(ctx.lambda, ctx.mul(y, y)));
            second +=
                ctx.legendre(ctx.fp2_norm(g)) as f64 * ctx.legendre(ctx.add(s, s)) as f64;
        }
    }
    first / 4.0 - second / (4.0 * (ctx.p as f64 - 1.0))
}

/// Validated Legendre-weighted character sum for a principal-series
/// component ps(a, p-1-a) of C[G/N'].  Accepts exactly the indices in
/// the selection set (a even mod p-1, with a and 2a nonzero mod p-1)
/// and rejects everything else.
pub fn legendre_sum(ctx: &PrimeContext, a: u32) -> Result<Complex64, Error> {
    let n = ctx.p - 1;
    let a = a % n;
    if a % 2 != 0 {
        return Err(Error::BadCharacter {
            reason: format!("index {a} is odd mod {n}: component absent from C[G/N']"),
        });
    }
    if a == 0 || (2 * a) % n == 0 {
        return Err(Error::BadCharacter {
            reason: format!(
                "index {a} gives a degenerate pair mod {n}, not a principal-series component"
            ),
        });
    }
    Ok(sigma_eigenvalue_principal(ctx, a))
}

/// Validated Soto-Andrade sum for a cuspidal component cusp(j) of
/// C[G/N'].  Accepts exactly the indices in the selection set and
/// rejects everything else (including valid cuspidal indices whose
/// component does not appear in the decomposition).
pub fn soto_andrade_sum(ctx: &PrimeContext, j: u32) -> Result<Complex64, Error> {
    let n2 = ctx.p as u64 * ctx.p as u64 - 1;
    let j64 = j as u64 % n2;
    if j64 % (ctx.p as u64 + 1) == 0 {
        return Err(Error::BadCharacter {
            reason: format!("index {j64} is a multiple of p+1: not a cuspidal parameter"),
        });
    }
    if !crate::characters::selected_cuspidal(ctx, j64) {
        return Err(Error::BadCharacter {
            reason: format!("cusp({j64}) does not appear in C[G/N']"),
        });
    }
    Ok(sigma_eigenvalue_cuspidal(ctx, j64 as u32))
}

/// Validated eigenvalue sum for the quadratic Steinberg twist, the
/// component st((p-1)/2) of C[G/N'] that exists only for p = 1 mod 4.
pub fn quadratic_steinberg_sum(ctx: &PrimeContext) -> Result<f64, Error> {
    if ctx.p % 4 != 1 {
        return Err(Error::BadCharacter {
            reason: format!(
                "p = {} is 3 mod 4: the quadratic Steinberg twist is absent from C[G/N']",
                ctx.p
            ),
        });
    }
    Ok(sigma_eigenvalue_quadratic_steinberg(ctx))
}

/// Pairing eigenvalue on a component of C[G/N']: (p^2-1)/4 on the trivial
/// character, p - lambda^2 on every other component.
pub fn pairing_eigenvalue(p: u64, irred: IrredCharacter, lambda_sigma: Complex64) -> Complex64 {
    if irred == (IrredCharacter::LinearTwist { alpha: 0 }) {
        Complex64::new(((p * p - 1) / 4) as f64, 0.0)
    } else {
        p as f64 - lambda_sigma * lambda_sigma
    }
}

/// One irreducible component of C[G/N'] with its operator eigenvalues on
/// the character-sum route.
#[derive(Debug, Clone)]
pub struct ComponentEigen {
    pub irred: IrredCharacter,
    pub dim: u64,
    /// theta(N sigma_{-1} N) eigenvalue, census route.
    pub lambda_sigma: Complex64,
    /// Same eigenvalue from the family-specific sum, where one exists.
    pub lambda_family: Option<Complex64>,
    /// Pairing eigenvalue.
    pub lambda_pair: Complex64,
}

/// Character-sum eigenvalues for every component of C[G/N'], with the
/// family-specific sums cross-checked against the census route.
pub fn component_eigenvalues(
    ctx: &PrimeContext,
    table: &CharTable,
) -> Result<Vec<ComponentEigen>, Error> {
    let selected = expected_decomposition(ctx, SubgroupLabel::NonsplitNorm)
        .expect("nonsplit norm has a product-form decomposition");
    let census = sigma_minus_one_census(ctx);
    let p = ctx.p as u64;
    let mut out = Vec::with_capacity(selected.len());
    for irred in selected {
        let idx = table
            .position(irred)
            .ok_or_else(|| Error::Invalid(format!("{} not in the character table", irred.label())))?;
        let lambda_sigma = sigma_eigenvalue_census(ctx, table, &census, idx);
        if lambda_sigma.im.abs() > IMAG_TOL {
            return Err(Error::NotReal { imag: lambda_sigma.im });
        }
        let lambda_family = match irred {
            IrredCharacter::LinearTwist { .. } => None,
            IrredCharacter::SteinbergTwist { .. } => {
                Some(Complex64::new(sigma_eigenvalue_quadratic_steinberg(ctx), 0.0))
            }
            IrredCharacter::Principal { alpha, .. } => Some(sigma_eigenvalue_principal(ctx, alpha)),
            IrredCharacter::Cuspidal { phi } => Some(sigma_eigenvalue_cuspidal(ctx, phi)),
        };
        if let Some(f) = lambda_family {
            if (f - lambda_sigma).norm() > ROUND_TOL {
                return Err(Error::Invalid(format!(
                    "{}: census eigenvalue {} and family sum {} disagree",
                    irred.label(),
                    lambda_sigma.re,
                    f.re
                )));
            }
        }
        out.push(ComponentEigen {
            irred,
            dim: irred.dim(p),
            lambda_sigma,
            lambda_family,
            lambda_pair: pairing_eigenvalue(p, irred, lambda_sigma),
        });
    }
    Ok(out)
}

/// b^e as a big integer.
pub fn bigint_pow(b: i64, e: u64) -> BigInt {
    let base = BigInt::from(b);
    let mut r = BigInt::one();
    for _ in 0..e {
        r *= &base;
    }
    r
}

/// Determinant of the pairing operator split by character family. Family
/// products of eigenvalues are plain integers (the component sets are
/// closed under the relevant Galois actions), so each column is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table2Row {
    pub p: u64,
    pub det_trivial: BigInt,
    pub det_principal: BigInt,
    pub det_cuspidal: BigInt,
    /// Present exactly when p = 1 mod 4.
    pub det_steinberg: Option<BigInt>,
    pub det_total: BigInt,
}

impl Table2Row {
    /// Assembles the table row from pairing eigenvalues, one per component
    /// of C[G/N']. Each family product must round to an integer within the
    /// crate tolerances.
    pub fn assemble(p: u64, comps: &[(IrredCharacter, Complex64)]) -> Result<Table2Row, Error> {
        let mut trivial = Complex64::one();
        let mut principal = Complex64::one();
        let mut cuspidal = Complex64::one();
        let mut steinberg: Option<Complex64> = None;
        for &(irred, lambda) in comps {
            match irred {
                IrredCharacter::LinearTwist { .. } => trivial *= lambda,
                IrredCharacter::Principal { .. } => principal *= lambda,
                IrredCharacter::Cuspidal { .. } => cuspidal *= lambda,
                IrredCharacter::SteinbergTwist { .. } => {
                    steinberg = Some(steinberg.unwrap_or_else(Complex64::one) * lambda)
                }
            }
        }
        let as_int = |z: Complex64| -> Result<i64, Error> {
            if z.im.abs() > IMAG_TOL {
                return Err(Error::NotReal { imag: z.im });
            }
            round_to_integer(z.re)
        };
        let det_trivial = BigInt::from(as_int(trivial)?);
        let det_principal = bigint_pow(as_int(principal)?, p + 1);
        let det_cuspidal = bigint_pow(as_int(cuspidal)?, p - 1);
        let det_steinberg = match steinberg {
            Some(v) => Some(bigint_pow(as_int(v)?, p)),
            None => None,
        };
        let mut det_total = &det_trivial * &det_principal * &det_cuspidal;
        if let Some(v) = &det_steinberg {
            det_total *= v;
        }
        Ok(Table2Row { p, det_trivial, det_principal, det_cuspidal, det_steinberg, det_total })
    }

    pub fn from_components(p: u64, comps: &[ComponentEigen]) -> Result<Table2Row, Error> {
        let pairs: Vec<(IrredCharacter, Complex64)> =
            comps.iter().map(|c| (c.irred, c.lambda_pair)).collect();
        Table2Row::assemble(p, &pairs)
    }
}

/// "2^83 * 3^15 * 7"-style rendering; factors found by trial division over
/// primes up to `limit`, any remaining cofactor appended as-is.
pub fn factored_string(n: &BigInt, limit: u64) -> String {
    if n.is_zero() {
        return "0".to_string();
    }
    let (factors, cofactor) = IntMatrix::factor_abs(n, limit);
    let mut parts: Vec<String> = factors
        .iter()
        .map(|&(q, e)| if e == 1 { q.to_string() } else { format!("{q}^{e}") })
        .collect();
    if !cofactor.is_one() {
        parts.push(cofactor.to_string());
    }
    let body = if parts.is_empty() { "1".to_string() } else { parts.join(" * ") };
    if n.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// Class census of the products {k h : k in K, h in H}. When either factor
/// is the full group the census is uniform: |other| copies of every class.
pub fn product_class_census(
    ctx: &PrimeContext,
    classes: &ClassData,
    k: &Subgroup,
    h: &Subgroup,
) -> Vec<u64> {
    if k.label == SubgroupLabel::Full || h.label == SubgroupLabel::Full {
        let other = if k.label == SubgroupLabel::Full { h.order() } else { k.order() };
        return classes.sizes.iter().map(|&s| s * other).collect();
    }
    let mut census = vec![0u64; classes.len()];
    for &x in &k.elements {
        for &y in &h.elements {
            census[classes.of(ctx, ctx.mat_mul(x, y))] += 1;
        }
    }
    census
}

/// Eigenvalue of the composite "HK then KH" on Z[G/H] for every
/// irreducible chi:
/// (deg(HK)/|H|) (deg(KH)/|K|) sum_{k in K, h in H} conj(chi(k h)).
pub fn trace_pair_eigenvalues(
    ctx: &PrimeContext,
    table: &CharTable,
    classes: &ClassData,
    h: &Subgroup,
    k: &Subgroup,
) -> Vec<Complex64> {
    let census = product_class_census(ctx, classes, k, h);
    let deg_hk = degree(ctx, h, Mat::identity(), k) as f64;
    let deg_kh = degree(ctx, k, Mat::identity(), h) as f64;
    let factor = deg_hk / h.order() as f64 * deg_kh / k.order() as f64;
    (0..table.irreds.len())
        .map(|i| {
            let mut acc = Complex64::zero();
            for (c, &count) in census.iter().enumerate() {
                if count > 0 {
                    acc += count as f64 * table.value(i, c).conj();
                }
            }
            factor * acc
        })
        .collect()
}

/// Exact eigenvalue on the all-ones vector: every row sum must agree.
pub fn eigenvalue_on_ones(m: &IntMatrix) -> Result<BigInt, Error> {
    if m.rows != m.cols || m.rows == 0 {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let lambda = m.row_sum(0);
    for i in 1..m.rows {
        if m.row_sum(i) != lambda {
            return Err(Error::Invalid(format!(
                "row sums differ: the all-ones vector is not an eigenvector (rows 0 and {i})"
            )));
        }
    }
    Ok(lambda)
}

/// Exact eigenvalue on e_0 - e_1, which must be an eigenvector.
pub fn eigenvalue_on_difference(m: &IntMatrix) -> Result<BigInt, Error> {
    if m.rows != m.cols || m.rows < 2 {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let w: Vec<BigInt> = (0..m.rows).map(|i| m.get(i, 0) - m.get(i, 1)).collect();
    let lambda = w[0].clone();
    let ok = w[1] == -&lambda && w.iter().skip(2).all(|x| x.is_zero());
    if !ok {
        return Err(Error::Invalid(
            "e0 - e1 is not an eigenvector of this operator".to_string(),
        ));
    }
    Ok(lambda)
}

/// Per-class action counts on a coset space: result[c][j] is the number of
/// g in class c with g . (coset 0) = coset j. One pass over the group.
pub fn class_action_accumulation(
    ctx: &PrimeContext,
    group: &[Mat],
    classes: &ClassData,
    space: &CosetSpace,
) -> Vec<Vec<u32>> {
    let mut acc = vec![vec![0u32; space.len()]; classes.len()];
    let base = space.reps[0];
    for &g in group {
        let c = classes.of(ctx, g);
        let j = space.index_of(ctx, ctx.mat_mul(g, base));
        acc[c][j] += 1;
    }
    acc
}

/// Projection of e_0 onto the chi-isotypic component,
/// (chi(1)/|G|) sum_c conj(chi(c)) (class action of c applied to e_0).
/// Nonzero whenever chi occurs in the permutation module.
pub fn isotypic_vector(
    ctx: &PrimeContext,
    table: &CharTable,
    irred_idx: usize,
    accum: &[Vec<u32>],
) -> Vec<Complex64> {
    let n = accum[0].len();
    let mut v = vec![Complex64::zero(); n];
    for (c, row) in accum.iter().enumerate() {
        let w = table.value(irred_idx, c).conj();
        for (j, &count) in row.iter().enumerate() {
            if count > 0 {
                v[j] += count as f64 * w;
            }
        }
    }
    let scale = table.dims[irred_idx] as f64 / ctx.group_order() as f64;
    for x in &mut v {
        *x *= scale;
    }
    v
}

/// Rayleigh-style eigenvalue extraction: lambda = (M v)_i / v_i at the
/// largest coordinate, with the residual ||M v - lambda v|| checked.
pub fn approx_eigenvalue(m: &IntMatrix, v: &[Complex64], tol: f64) -> Result<Complex64, Error> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if m.cols != v.len() {
        return Err(Error::DimMismatch {
            left: format!("{} columns", m.cols),
            right: format!("{} vector entries", v.len()),
        });
    }
    let mut w = vec![Complex64::zero(); m.rows];
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = m.get(i, j);
            if !e.is_zero() {
                w[i] += e.to_f64().expect("operator entry fits f64") * v[j];
            }
        }
    }
    let (imax, vmax) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty vector");
    if vmax.norm() < 1e-9 {
        return Err(Error::Invalid("projected vector is numerically zero".to_string()));
    }
    let lambda = w[imax] / vmax;
    let residual = v
        .iter()
        .zip(&w)
        .map(|(&x, &y)| (y - lambda * x).norm())
        .fold(0.0f64, f64::max);
    if residual > tol * (1.0 + lambda.norm()) {
        return Err(Error::Invalid(format!(
            "projected vector is not an eigenvector: residual {residual:.3e}"
        )));
    }
    Ok(lambda)
}

/// Integer-matrix route for the pairing operator on Z[G/N']: the exact
/// determinant and per-component eigenvalues read off isotypic vectors.
#[derive(Debug, Clone)]
pub struct PairingMatrixRoute {
    pub det: BigInt,
    pub lambda_trivial: BigInt,
    pub lambdas: Vec<(IrredCharacter, Complex64)>,
}

pub fn pairing_matrix_route(
    ctx: &PrimeContext,
    group: &[Mat],
    classes: &ClassData,
    table: &CharTable,
    nonsplit_norm: &Subgroup,
    split_norm: &Subgroup,
) -> Result<PairingMatrixRoute, Error> {
    let sp_np = CosetSpace::build(ctx, group, nonsplit_norm);
    let sp_n = CosetSpace::build(ctx, group, split_norm);
    let dc_fwd = DoubleCosets::build(ctx, group, nonsplit_norm, split_norm);
    let dc_bwd = DoubleCosets::build(ctx, group, split_norm, nonsplit_norm);
    let fwd = unit_operator(ctx, &sp_np, &sp_n, &dc_fwd);
    let bwd = unit_operator(ctx, &sp_n, &sp_np, &dc_bwd);
    let pairing = compose(&fwd, &bwd)?;
    let det = pairing.matrix.determinant()?;
    let lambda_trivial = eigenvalue_on_ones(&pairing.matrix)?;
    let accum = class_action_accumulation(ctx, group, classes, &sp_np);
    let selected = expected_decomposition(ctx, SubgroupLabel::NonsplitNorm)
        .expect("nonsplit norm has a product-form decomposition");
    let mut lambdas = Vec::with_capacity(selected.len());
    for irred in selected {
        let idx = table
            .position(irred)
            .ok_or_else(|| Error::Invalid(format!("{} not in the character table", irred.label())))?;
        let v = isotypic_vector(ctx, table, idx, &accum);
        let lambda = approx_eigenvalue(&pairing.matrix, &v, ROUND_TOL)?;
        lambdas.push((irred, lambda));
    }
    Ok(PairingMatrixRoute { det, lambda_trivial, lambdas })
}

/// Margin of the nonvanishing bound: every non-trivial component must have
/// lambda_sigma^2 != p, i.e. a nonzero pairing eigenvalue.
pub fn nonvanishing_check(p: u64, comps: &[ComponentEigen]) -> CheckItem {
    let mut min_margin = f64::INFINITY;
    let mut witness = String::new();
    for c in comps {
        let margin = c.lambda_pair.norm();
        if margin < min_margin {
            min_margin = margin;
            witness = c.irred.label();
        }
    }
    CheckItem::new(
        format!("nonvanishing.p{p}"),
        min_margin > ROUND_TOL,
        format!("min |pairing eigenvalue| = {min_margin:.6} at {witness}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharTable;
    use crate::subgroups::{sigma, GroupData, SubgroupLabel};

    fn setup(p: u64) -> (GroupData, CharTable) {
        let data = GroupData::build(p).unwrap();
        let table = CharTable::build(&data.ctx);
        (data, table)
    }

    #[test]
    fn census_matches_enumeration() {
        for p in [3u64, 5, 7] {
            let data = GroupData::build(p).unwrap();
            let ctx = &data.ctx;
            let norm = data.subgroup(SubgroupLabel::SplitNorm);
            let s = sigma(ctx.p - 1);
            let mut brute = vec![0u64; data.classes.len()];
            for &n in &norm.elements {
                brute[data.classes.of(ctx, ctx.mat_mul(s, n))] += 1;
            }
            assert_eq!(brute, sigma_minus_one_census(ctx), "p={p}");
            let total: u64 = brute.iter().sum();
            assert_eq!(total, norm.order(), "p={p}");
        }
    }

    #[test]
    fn trivial_component_eigenvalues() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            let census = sigma_minus_one_census(&ctx);
            let triv = table.position(IrredCharacter::LinearTwist { alpha: 0 }).unwrap();
            let lam = sigma_eigenvalue_census(&ctx, &table, &census, triv);
            assert!((lam.re - (p as f64 - 1.0) / 2.0).abs() < 1e-9, "p={p}");
            assert!(lam.im.abs() < 1e-12);
        }
    }

    #[test]
    fn family_sums_match_census_route() {
        for p in [3u64, 5, 7, 13] {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            let comps = component_eigenvalues(&ctx, &table).unwrap();
            for c in &comps {
                if let Some(f) = c.lambda_family {
                    assert!(
                        (f - c.lambda_sigma).norm() < 1e-9,
                        "p={p} {}: census {} family {}",
                        c.irred.label(),
                        c.lambda_sigma,
                        f
                    );
                }
            }
        }
    }

    #[test]
    fn validated_sums_enforce_selection_sets() {
        let ctx = PrimeContext::build(13).unwrap();

        // Principal family: even indices strictly between 0 and (p-1)/2
        // (up to the a <-> p-1-a symmetry) are the only legal inputs.
        let ok = legendre_sum(&ctx, 4).unwrap();
        assert!((ok - sigma_eigenvalue_principal(&ctx, 4)).norm() < 1e-12);
        assert!(legendre_sum(&ctx, 3).is_err(), "odd index must be rejected");
        assert!(legendre_sum(&ctx, 0).is_err(), "trivial pair must be rejected");
        assert!(legendre_sum(&ctx, 6).is_err(), "quadratic index must be rejected");

        // Cuspidal family: the selection set for p = 13 starts at j = 12.
        let ok = soto_andrade_sum(&ctx, 12).unwrap();
        assert!((ok - sigma_eigenvalue_cuspidal(&ctx, 12)).norm() < 1e-12);
        assert!(soto_andrade_sum(&ctx, 14).is_err(), "p+1 | j is not cuspidal");
        assert!(soto_andrade_sum(&ctx, 1).is_err(), "cusp(1) is not selected");
        assert!(soto_andrade_sum(&ctx, 24).is_err(), "cusp(24) is not selected");

        // Quadratic Steinberg twist needs p = 1 mod 4.
        assert!(quadratic_steinberg_sum(&ctx).is_ok());
        let ctx7 = PrimeContext::build(7).unwrap();
        assert!(quadratic_steinberg_sum(&ctx7).is_err());
    }

    #[test]
    fn hand_checked_sigma_eigenvalues() {
        // p = 3: the single cuspidal component has eigenvalue 1.
        let ctx = PrimeContext::build(3).unwrap();
        let table = CharTable::build(&ctx);
        let comps = component_eigenvalues(&ctx, &table).unwrap();
        let cusp = comps
            .iter()
            .find(|c| matches!(c.irred, IrredCharacter::Cuspidal { .. }))
            .unwrap();
        assert!((cusp.lambda_sigma.re - 1.0).abs() < 1e-9);
        assert!((cusp.lambda_pair.re - 2.0).abs() < 1e-9);

        // p = 7: the single principal-series component, alpha of order 3,
        // has eigenvalue 2, pairing eigenvalue 3.
        let ctx = PrimeContext::build(7).unwrap();
        let lam = sigma_eigenvalue_principal(&ctx, 2);
        assert!((lam.re - 2.0).abs() < 1e-9 && lam.im.abs() < 1e-9);

        // p = 13: alpha of order 6 gives -3, alpha of order 3 gives -1;
        // pairing eigenvalues 4 and 12.
        let ctx = PrimeContext::build(13).unwrap();
        let lam6 = sigma_eigenvalue_principal(&ctx, 2);
        let lam3 = sigma_eigenvalue_principal(&ctx, 4);
        assert!((lam6.re + 3.0).abs() < 1e-9 && lam6.im.abs() < 1e-9);
        assert!((lam3.re + 1.0).abs() < 1e-9 && lam3.im.abs() < 1e-9);

        // p = 5: quadratic Steinberg twist has pairing eigenvalue 4.
        let ctx = PrimeContext::build(5).unwrap();
        let lam = sigma_eigenvalue_quadratic_steinberg(&ctx);
        assert!((5.0 - lam * lam - 4.0).abs() < 1e-9, "lambda = {lam}");
    }

    #[test]
    fn determinant_table_small_primes() {
        let expected: [(u64, i64, i64, u64, i64, u64, Option<(i64, u64)>); 3] = [
            // (p, trivial, principal base, exp, cuspidal base, exp, steinberg)
            (3, 2, 1, 4, 2, 2, None),
            (5, 6, 1, 6, 1, 4, Some((4, 5))),
            (7, 12, 3, 8, 8, 6, None),
        ];
        for (p, tv, wb, we, xb, xe, st) in expected {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            let comps = component_eigenvalues(&ctx, &table).unwrap();
            let row = Table2Row::from_components(p, &comps).unwrap();
            assert_eq!(row.det_trivial, BigInt::from(tv), "p={p} trivial");
            assert_eq!(row.det_principal, bigint_pow(wb, we), "p={p} principal");
            // The cuspidal family product can only be pinned up to sign
            // when the exponent is even; compare the even power.
            assert_eq!(row.det_cuspidal, bigint_pow(xb as i64, xe), "p={p} cuspidal");
            match st {
                None => assert!(row.det_steinberg.is_none(), "p={p}"),
                Some((b, e)) => {
                    assert_eq!(row.det_steinberg, Some(bigint_pow(b, e)), "p={p}")
                }
            }
            let mut total = &row.det_trivial * &row.det_principal * &row.det_cuspidal;
            if let Some(v) = &row.det_steinberg {
                total *= v;
            }
            assert_eq!(row.det_total, total);
        }
    }

    #[test]
    fn factored_rendering() {
        assert_eq!(factored_string(&BigInt::from(6144), 50), "2^11 * 3");
        assert_eq!(factored_string(&BigInt::from(-12), 50), "-2^2 * 3");
        assert_eq!(factored_string(&BigInt::from(1), 50), "1");
        assert_eq!(factored_string(&BigInt::from(97 * 4), 10), "2^2 * 97");
    }

    #[test]
    fn trace_pair_closed_forms() {
        for p in [3u64, 5, 7] {
            let (data, table) = setup(p);
            let ctx = &data.ctx;
            let b = data.subgroup(SubgroupLabel::Borel);
            let g = data.subgroup(SubgroupLabel::Full);
            let n = data.subgroup(SubgroupLabel::SplitNorm);
            let np = data.subgroup(SubgroupLabel::NonsplitNorm);
            let triv = table.position(IrredCharacter::LinearTwist { alpha: 0 }).unwrap();
            let stein = table.position(IrredCharacter::SteinbergTwist { alpha: 0 }).unwrap();

            // Through the full group: p+1 on the trivial component, 0 else.
            let bg = trace_pair_eigenvalues(ctx, &table, &data.classes, b, g);
            for (i, lam) in bg.iter().enumerate() {
                let expect = if i == triv { p as f64 + 1.0 } else { 0.0 };
                assert!((lam - expect).norm() < 1e-8, "p={p} BG chi {i}: {lam}");
            }

            // B and N: 2p on trivial, p - 1 on Steinberg, 0 else. The
            // Steinberg value follows from sum_{b in B} conj(chi(b)) = |B|
            // and the omega-coset census; the exact matrix route and the
            // trace identity (total one-count of the forward operator)
            // pin it independently.
            let bn = trace_pair_eigenvalues(ctx, &table, &data.classes, b, n);
            for (i, lam) in bn.iter().enumerate() {
                let expect = if i == triv {
                    2.0 * p as f64
                } else if i == stein {
                    (p - 1) as f64
                } else {
                    0.0
                };
                assert!((lam - expect).norm() < 1e-8, "p={p} BN chi {i}: {lam}");
            }

            // N' and N: (p^2-1)/4 on trivial, p - lambda^2 on the other
            // components of C[G/N'], 0 outside that module.
            let pair = trace_pair_eigenvalues(ctx, &table, &data.classes, np, n);
            let comps = component_eigenvalues(ctx, &table).unwrap();
            for (i, lam) in pair.iter().enumerate() {
                let expect = comps
                    .iter()
                    .find(|c| table.position(c.irred) == Some(i))
                    .map(|c| c.lambda_pair)
                    .unwrap_or_else(Complex64::zero);
                assert!((lam - expect).norm() < 1e-8, "p={p} pairing chi {i}: {lam} vs {expect}");
            }

            // Product census is symmetric in the two factors.
            let kh = product_class_census(ctx, &data.classes, n, b);
            let hk = product_class_census(ctx, &data.classes, b, n);
            assert_eq!(kh, hk, "p={p}");
        }
    }

    #[test]
    fn full_group_census_shortcut_matches_brute() {
        for p in [3u64, 5] {
            let data = GroupData::build(p).unwrap();
            let ctx = &data.ctx;
            let b = data.subgroup(SubgroupLabel::Borel);
            let census = product_class_census(ctx, &data.classes, data.subgroup(SubgroupLabel::Full), b);
            let mut brute = vec![0u64; data.classes.len()];
            for &x in &data.group {
                for &y in &b.elements {
                    brute[data.classes.of(ctx, ctx.mat_mul(x, y))] += 1;
                }
            }
            assert_eq!(census, brute, "p={p}");
        }
    }

    #[test]
    fn matrix_route_agrees_with_sums() {
        for p in [3u64, 5, 7] {
            let (data, table) = setup(p);
            let ctx = &data.ctx;
            let route = pairing_matrix_route(
                ctx,
                &data.group,
                &data.classes,
                &table,
                data.subgroup(SubgroupLabel::NonsplitNorm),
                data.subgroup(SubgroupLabel::SplitNorm),
            )
            .unwrap();
            assert_eq!(route.lambda_trivial, BigInt::from((p * p - 1) / 4), "p={p}");
            assert!(route.det > BigInt::from(0), "p={p} det {}", route.det);

            let comps = component_eigenvalues(ctx, &table).unwrap();
            assert_eq!(route.lambdas.len(), comps.len());
            for ((ir, lam_m), c) in route.lambdas.iter().zip(&comps) {
                assert_eq!(*ir, c.irred);
                assert!(
                    (lam_m - c.lambda_pair).norm() < 1e-6,
                    "p={p} {}: matrix {} sums {}",
                    ir.label(),
                    lam_m,
                    c.lambda_pair
                );
            }

            // Determinants agree between the exact matrix and the
            // family-product assembly.
            let row = Table2Row::from_components(p, &comps).unwrap();
            assert_eq!(row.det_total, route.det, "p={p}");

            // Same assembly from matrix-route eigenvalues.
            let row_m = Table2Row::assemble(p, &route.lambdas).unwrap();
            assert_eq!(row_m, row, "p={p}");
        }
    }

    #[test]
    fn ones_and_difference_extraction() {
        let data = GroupData::build(5).unwrap();
        let ctx = &data.ctx;
        let b = data.subgroup(SubgroupLabel::Borel);
        let n = data.subgroup(SubgroupLabel::SplitNorm);
        let g = data.subgroup(SubgroupLabel::Full);
        let sp_b = CosetSpace::build(ctx, &data.group, b);
        let sp_n = CosetSpace::build(ctx, &data.group, n);
        let sp_g = CosetSpace::build(ctx, &data.group, g);

        // B -> N -> B composite: 2p on ones, p - 1 on e0 - e1.  The
        // difference eigenvalue is pinned by a trace identity: the
        // backward operator is the transpose of the forward one, so the
        // composite is F^T F with trace = (number of ones in F) =
        // (p+1) columns * column sum p = p(p+1), and the spectrum
        // 2p (once) + lambda (p times) forces lambda = p - 1.
        let dc_bn = DoubleCosets::build(ctx, &data.group, b, n);
        let dc_nb = DoubleCosets::build(ctx, &data.group, n, b);
        let fwd = unit_operator(ctx, &sp_b, &sp_n, &dc_bn);
        let bwd = unit_operator(ctx, &sp_n, &sp_b, &dc_nb);
        let m = compose(&fwd, &bwd).unwrap().matrix;
        assert_eq!(eigenvalue_on_ones(&m).unwrap(), BigInt::from(10));
        assert_eq!(eigenvalue_on_difference(&m).unwrap(), BigInt::from(4));

        // G -> B -> G composite is the 1x1 matrix [p+1].
        let dc_gb = DoubleCosets::build(ctx, &data.group, g, b);
        let dc_bg = DoubleCosets::build(ctx, &data.group, b, g);
        let fwd = unit_operator(ctx, &sp_g, &sp_b, &dc_gb);
        let bwd = unit_operator(ctx, &sp_b, &sp_g, &dc_bg);
        let m = compose(&fwd, &bwd).unwrap().matrix;
        assert_eq!(eigenvalue_on_ones(&m).unwrap(), BigInt::from(6));

        // B -> G -> B composite: p+1 on ones, 0 on e0 - e1.
        let fwd = unit_operator(ctx, &sp_b, &sp_g, &dc_bg);
        let bwd = unit_operator(ctx, &sp_g, &sp_b, &dc_gb);
        let m = compose(&fwd, &bwd).unwrap().matrix;
        assert_eq!(eigenvalue_on_ones(&m).unwrap(), BigInt::from(6));
        assert_eq!(eigenvalue_on_difference(&m).unwrap(), BigInt::from(0));
    }

    #[test]
    fn nonvanishing_margins() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            let comps = component_eigenvalues(&ctx, &table).unwrap();
            let item = nonvanishing_check(p, &comps);
            assert!(item.pass, "p={p}: {}", item.detail);
        }
    }
}
