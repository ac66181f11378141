//! Ordinary character table of GL2(F_p) and decomposition of permutation
//! characters.
//!
//! The p^2 - 1 irreducible characters come in four families, parametrized
//! by multiplicative characters alpha of F_p^x (index a: alpha = chi_a with
//! chi_a(gen_fp^k) = e^(2 pi i a k / (p-1))) and phi of F_{p^2}^x (index
//! mod p^2 - 1):
//!
//! family          | dim  | scalar x        | unipotent x   | split x,y               | nonsplit (x,y), norm n
//! lin(a)          | 1    | a(x^2)          | a(x^2)        | a(xy)                   | a(n)
//! st(a)           | p    | p a(x^2)        | 0             | a(xy)                   | -a(n)
//! ps(a,b), a != b | p+1  | (p+1) a(x)b(x)  | a(x)b(x)      | a(x)b(y) + a(y)b(x)     | 0
//! cusp(j)         | p-1  | (p-1) phi(x)    | -phi(x)       | 0                       | -(phi(g) + phi(g^p))
//!
//! with ps(a,b) = ps(b,a) and cusp(j) = cusp(j*p), whence the canonical
//! forms a < b and j = min(j, j*p mod p^2-1); cusp requires phi^p != phi,
//! i.e. (p+1) does not divide j.

use crate::classes::ConjClassId;
use crate::context::{Fp2, PrimeContext};
use crate::error::Error;
use crate::subgroups::CosetSpace;
use crate::{CheckItem, IMAG_TOL, ROUND_TOL};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Character of a cyclic group of the given order, sending a fixed
/// generator's k-th power to e^(2 pi i * index * k / modulus).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicativeCharacter {
    pub modulus: u64,
    pub index: u64,
}

impl MultiplicativeCharacter {
    pub fn value_at_log(&self, k: u64) -> Complex64 {
        let r = (self.index % self.modulus) as u128 * (k % self.modulus) as u128;
        let r = (r % self.modulus as u128) as f64;
        Complex64::from_polar(1.0, TAU * r / self.modulus as f64)
    }

    pub fn is_trivial(&self) -> bool {
        self.index % self.modulus == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrredCharacter {
    /// One-dimensional: alpha composed with the determinant.
    LinearTwist { alpha: u32 },
    /// Steinberg twisted by alpha(det).
    SteinbergTwist { alpha: u32 },
    /// Principal series attached to the unordered pair {alpha, beta}, alpha < beta.
    Principal { alpha: u32, beta: u32 },
    /// Cuspidal attached to phi (index mod p^2 - 1) with phi^p != phi,
    /// canonicalized to min(j, j p mod p^2 - 1).
    Cuspidal { phi: u32 },
}

impl IrredCharacter {
    pub fn dim(&self, p: u64) -> u64 {
        match self {
            IrredCharacter::LinearTwist { .. } => 1,
            IrredCharacter::SteinbergTwist { .. } => p,
            IrredCharacter::Principal { .. } => p + 1,
            IrredCharacter::Cuspidal { .. } => p - 1,
        }
    }

    pub fn label(&self) -> String {
        match self {
            IrredCharacter::LinearTwist { alpha } => format!("lin({alpha})"),
            IrredCharacter::SteinbergTwist { alpha } => format!("st({alpha})"),
            IrredCharacter::Principal { alpha, beta } => format!("ps({alpha},{beta})"),
            IrredCharacter::Cuspidal { phi } => format!("cusp({phi})"),
        }
    }
}

/// Full character table over the canonical class list.
#[derive(Debug, Clone)]
pub struct CharTable {
    pub irreds: Vec<IrredCharacter>,
    pub dims: Vec<u64>,
    pub classes: Vec<ConjClassId>,
    pub class_sizes: Vec<u64>,
    values: Vec<Complex64>,
}

impl CharTable {
    pub fn build(ctx: &PrimeContext) -> Self {
        let p = ctx.p;
        let mut irreds = Vec::new();
        for alpha in 0..p - 1 {
            irreds.push(IrredCharacter::LinearTwist { alpha });
        }
        for alpha in 0..p - 1 {
            irreds.push(IrredCharacter::SteinbergTwist { alpha });
        }
        for alpha in 0..p - 1 {
            for beta in alpha + 1..p - 1 {
                irreds.push(IrredCharacter::Principal { alpha, beta });
            }
        }
        let n2 = (p as u64) * (p as u64) - 1;
        for j in 1..n2 {
            if j % (p as u64 + 1) == 0 {
                continue; // phi^p = phi: not cuspidal
            }
            if j * (p as u64) % n2 >= j {
                irreds.push(IrredCharacter::Cuspidal { phi: j as u32 });
            }
        }
        debug_assert_eq!(irreds.len() as u64, (p as u64) * (p as u64) - 1);

        let classes = ctx.class_list();
        let class_sizes: Vec<u64> = classes.iter().map(|&c| ctx.class_size(c)).collect();
        let dims: Vec<u64> = irreds.iter().map(|ir| ir.dim(p as u64)).collect();
        let mut values = Vec::with_capacity(irreds.len() * classes.len());
        for ir in &irreds {
            for &c in &classes {
                values.push(char_value(ctx, *ir, c));
            }
        }
        CharTable { irreds, dims, classes, class_sizes, values }
    }

    #[inline]
    pub fn value(&self, irred_idx: usize, class_idx: usize) -> Complex64 {
        self.values[irred_idx * self.classes.len() + class_idx]
    }

    pub fn position(&self, ir: IrredCharacter) -> Option<usize> {
        self.irreds.iter().position(|&x| x == ir)
    }

    /// <chi_i, chi_j> over the group.
    pub fn inner(&self, ctx: &PrimeContext, i: usize, j: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..self.classes.len() {
            acc += self.class_sizes[c] as f64 * self.value(i, c) * self.value(j, c).conj();
        }
        acc / ctx.group_order() as f64
    }
}

/// Value of chi_alpha on x in F_p^x.
pub fn alpha_value(ctx: &PrimeContext, alpha: u32, x: u32) -> Complex64 {
    MultiplicativeCharacter { modulus: ctx.p as u64 - 1, index: alpha as u64 }
        .value_at_log(ctx.dlog(x) as u64)
}

/// Value of chi_phi on g in F_{p^2}^x.
pub fn phi_value(ctx: &PrimeContext, phi: u32, g: Fp2) -> Complex64 {
    let n2 = (ctx.p as u64) * (ctx.p as u64) - 1;
    MultiplicativeCharacter { modulus: n2, index: phi as u64 }.value_at_log(ctx.dlog2(g))
}

/// Value of the irreducible character on a conjugacy class.
pub fn char_value(ctx: &PrimeContext, ir: IrredCharacter, class: ConjClassId) -> Complex64 {
    let p = ctx.p;
    match ir {
        IrredCharacter::LinearTwist { alpha } => match class {
            ConjClassId::Scalar { x } | ConjClassId::Unipotent { x } => {
                alpha_value(ctx, alpha, ctx.mul(x, x))
            }
            ConjClassId::Split { x, y } => alpha_value(ctx, alpha, ctx.mul(x, y)),
            ConjClassId::NonSplit { x, y } => {
                alpha_value(ctx, alpha, ctx.fp2_norm(Fp2::new(x, y)))
            }
        },
        IrredCharacter::SteinbergTwist { alpha } => match class {
            ConjClassId::Scalar { x } => p as f64 * alpha_value(ctx, alpha, ctx.mul(x, x)),
            ConjClassId::Unipotent { .. } => Complex64::new(0.0, 0.0),
            ConjClassId::Split { x, y } => alpha_value(ctx, alpha, ctx.mul(x, y)),
            ConjClassId::NonSplit { x, y } => {
                -alpha_value(ctx, alpha, ctx.fp2_norm(Fp2::new(x, y)))
            }
        },
        IrredCharacter::Principal { alpha, beta } => match class {
            ConjClassId::Scalar { x } => {
                (p as f64 + 1.0) * alpha_value(ctx, alpha, x) * alpha_value(ctx, beta, x)
            }
            ConjClassId::Unipotent { x } => alpha_value(ctx, alpha, x) * alpha_value(ctx, beta, x),
            ConjClassId::Split { x, y } => {
                alpha_value(ctx, alpha, x) * alpha_value(ctx, beta, y)
                    + alpha_value(ctx, alpha, y) * alpha_value(ctx, beta, x)
            }
            ConjClassId::NonSplit { .. } => Complex64::new(0.0, 0.0),
        },
        IrredCharacter::Cuspidal { phi } => match class {
            ConjClassId::Scalar { x } => (p as f64 - 1.0) * phi_value(ctx, phi, ctx.fp2_embed(x)),
            ConjClassId::Unipotent { x } => -phi_value(ctx, phi, ctx.fp2_embed(x)),
            ConjClassId::Split { .. } => Complex64::new(0.0, 0.0),
            ConjClassId::NonSplit { x, y } => {
                let g = Fp2::new(x, y);
                -(phi_value(ctx, phi, g) + phi_value(ctx, phi, ctx.fp2_conj(g)))
            }
        },
    }
}

/// First orthogonality relations and the dimension sum, with tolerances.
pub fn orthogonality_check(ctx: &PrimeContext, table: &CharTable) -> Vec<CheckItem> {
    let n = table.irreds.len();
    let mut max_err: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let v = table.inner(ctx, i, j);
            let expect = if i == j { 1.0 } else { 0.0 };
            let err = (v - expect).norm();
            if err > max_err {
                max_err = err;
            }
        }
    }
    let dim_sq: u64 = table.dims.iter().map(|d| d * d).sum();
    vec![
        CheckItem::new(
            "characters.orthogonality",
            max_err <= ROUND_TOL,
            format!("max |<chi_i, chi_j> - delta_ij| = {max_err:.2e} over {n} characters"),
        ),
        CheckItem::new(
            "characters.dimension_sum",
            dim_sq == ctx.group_order(),
            format!("sum of dim^2 = {dim_sq}, |G| = {}", ctx.group_order()),
        ),
    ]
}

/// Character of the permutation module Z[G/H]: fixed cosets per class.
pub fn perm_character(ctx: &PrimeContext, space: &CosetSpace, classes: &[ConjClassId]) -> Vec<u64> {
    classes
        .iter()
        .map(|&cl| {
            let g = ctx.class_rep(cl);
            (0..space.len())
                .filter(|&i| space.index_of(ctx, ctx.mat_mul(g, space.reps[i])) == i)
                .count() as u64
        })
        .collect()
}

/// Multiplicities of each irreducible in a permutation character, by inner
/// product; imaginary parts and rounding errors are checked against the
/// crate tolerances.
pub fn decompose(
    ctx: &PrimeContext,
    table: &CharTable,
    perm: &[u64],
) -> Result<Vec<u64>, Error> {
    let n_classes = table.classes.len();
    if perm.len() != n_classes {
        return Err(Error::DimMismatch {
            left: format!("{} classes", n_classes),
            right: format!("{} permutation character values", perm.len()),
        });
    }
    let order = ctx.group_order() as f64;
    table
        .irreds
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..n_classes {
                acc += table.class_sizes[c] as f64 * perm[c] as f64 * table.value(i, c).conj();
            }
            acc /= order;
            if acc.im.abs() > IMAG_TOL {
                return Err(Error::NotReal { imag: acc.im });
            }
            let m = acc.re.round();
            if (acc.re - m).abs() > ROUND_TOL || m < 0.0 {
                return Err(Error::NotAnInteger { value: acc.re });
            }
            Ok(m as u64)
        })
        .collect()
}

/// Predicate: alpha (index a mod p-1) restricted to squares is trivial,
/// i.e. alpha^((p-1)/2) = 1, i.e. a is even.
pub fn alpha_even(ctx: &PrimeContext, a: u32) -> bool {
    (a as u64 * ((ctx.p as u64 - 1) / 2)) % (ctx.p as u64 - 1) == 0
}

/// Expected decomposition of C[G/H] for H = G, B, N, N'. Returns pairs
/// (irreducible, multiplicity 1); for other subgroups there is no
/// product-form expectation and None is returned.
pub fn expected_decomposition(
    ctx: &PrimeContext,
    label: crate::subgroups::SubgroupLabel,
) -> Option<Vec<IrredCharacter>> {
    use crate::subgroups::SubgroupLabel::*;
    let p = ctx.p;
    let trivial = IrredCharacter::LinearTwist { alpha: 0 };
    let steinberg = IrredCharacter::SteinbergTwist { alpha: 0 };
    match label {
        Full => Some(vec![trivial]),
        Borel => Some(vec![trivial, steinberg]),
        NonsplitNorm | SplitNorm => {
            let mut out = vec![trivial];
            if p % 4 == 1 {
                // alpha = the quadratic character, index (p-1)/2.
                out.push(IrredCharacter::SteinbergTwist { alpha: (p - 1) / 2 });
            }
            // ps(a, a^-1) with a even (alpha(-1) = 1), a^2 != 1.
            for a in 1..p - 1 {
                let inv_a = p - 1 - a;
                if a < inv_a && alpha_even(ctx, a) {
                    out.push(IrredCharacter::Principal { alpha: a, beta: inv_a });
                }
            }
            // cusp(j) with phi^(p+1) = 1, phi^((p+1)/2) != 1, phi^(p-1) != 1.
            let n2 = (p as u64) * (p as u64) - 1;
            for j in 1..n2 {
                if j % (p as u64 + 1) == 0 {
                    continue;
                }
                if j * (p as u64) % n2 < j {
                    continue; // not the canonical orbit representative
                }
                if selected_cuspidal(ctx, j) {
                    out.push(IrredCharacter::Cuspidal { phi: j as u32 });
                }
            }
            if label == SplitNorm {
                out.push(steinberg);
            }
            out.sort();
            Some(out)
        }
        _ => None,
    }
}

/// phi = chi_j on F_{p^2}^x satisfies phi^(p+1) = 1, phi^((p+1)/2) != 1,
/// and phi^(p-1) != 1.
pub fn selected_cuspidal(ctx: &PrimeContext, j: u64) -> bool {
    let p = ctx.p as u64;
    let n2 = p * p - 1;
    j * (p + 1) % n2 == 0 && j * ((p + 1) / 2) % n2 != 0 && j * (p - 1) % n2 != 0
}

/// Principal-series pairs ps(a, -a) occurring in C[G/N'], canonical form.
pub fn selected_principal_pairs(ctx: &PrimeContext) -> Vec<IrredCharacter> {
    let p = ctx.p;
    let mut out = Vec::new();
    for a in 1..p - 1 {
        let b = p - 1 - a;
        if a < b && alpha_even(ctx, a) {
            out.push(IrredCharacter::Principal { alpha: a, beta: b });
        }
    }
    out
}

/// Selected cuspidal characters of C[G/N'], canonical orbit representatives.
pub fn selected_cuspidals(ctx: &PrimeContext) -> Vec<IrredCharacter> {
    let p = ctx.p as u64;
    let n2 = p * p - 1;
    (1..n2)
        .filter(|&j| j % (p + 1) != 0 && j * p % n2 >= j && selected_cuspidal(ctx, j))
        .map(|j| IrredCharacter::Cuspidal { phi: j as u32 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::{GroupData, SubgroupLabel, ALL_LABELS};

    #[test]
    fn dimension_sums_are_exact() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            assert_eq!(table.irreds.len() as u64, p * p - 1);
            let dim_sq: u64 = table.dims.iter().map(|d| d * d).sum();
            assert_eq!(dim_sq, ctx.group_order(), "p={p}");
            // Identity column carries the dimensions.
            let id_class = ctx.class_index(crate::classes::ConjClassId::Scalar { x: 1 });
            for (i, &d) in table.dims.iter().enumerate() {
                let v = table.value(i, id_class);
                assert!((v.re - d as f64).abs() < 1e-9 && v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonality_small_primes() {
        for p in [3u64, 5, 7, 11] {
            let ctx = PrimeContext::build(p).unwrap();
            let table = CharTable::build(&ctx);
            for item in orthogonality_check(&ctx, &table) {
                assert!(item.pass, "p={p}: {}: {}", item.name, item.detail);
            }
        }
    }

    #[test]
    fn known_zero_patterns() {
        let ctx = PrimeContext::build(7).unwrap();
        let table = CharTable::build(&ctx);
        for (i, ir) in table.irreds.iter().enumerate() {
            for (c, cl) in table.classes.iter().enumerate() {
                let v = table.value(i, c);
                match (ir, cl) {
                    (IrredCharacter::SteinbergTwist { .. }, ConjClassId::Unipotent { .. })
                    | (IrredCharacter::Principal { .. }, ConjClassId::NonSplit { .. })
                    | (IrredCharacter::Cuspidal { .. }, ConjClassId::Split { .. }) => {
                        assert!(v.norm() < 1e-12, "{ir:?} at {cl:?}");
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn character_parity_conditions() {
        // alpha^((p-1)/2) = 1 iff alpha(-1) = 1; phi^(p+1) = 1 iff phi is
        // trivial on the base field.
        for p in [5u64, 7, 13] {
            let ctx = PrimeContext::build(p).unwrap();
            let pm1 = (p - 1) as u32;
            for a in 0..pm1 {
                let at_minus_one = alpha_value(&ctx, a, ctx.p - 1);
                let trivial_on_squares = alpha_even(&ctx, a);
                assert_eq!(
                    (at_minus_one.re - 1.0).abs() < 1e-9,
                    trivial_on_squares,
                    "p={p} a={a}"
                );
            }
            let n2 = p * p - 1;
            for j in 0..n2 {
                let phi_order_divides = j * (p + 1) % n2 == 0;
                let trivial_on_base = (1..ctx.p)
                    .all(|x| (phi_value(&ctx, j as u32, ctx.fp2_embed(x)) - 1.0).norm() < 1e-9);
                assert_eq!(phi_order_divides, trivial_on_base, "p={p} j={j}");
            }
        }
    }

    #[test]
    fn permutation_characters_and_decompositions() {
        for p in [3u64, 5, 7] {
            let data = GroupData::build(p).unwrap();
            let ctx = &data.ctx;
            let table = CharTable::build(ctx);
            for &label in &ALL_LABELS {
                let space = CosetSpace::build(ctx, &data.group, data.subgroup(label));
                let perm = perm_character(ctx, &space, &table.classes);
                // Value at the identity is the number of cosets.
                let id_class = ctx.class_index(crate::classes::ConjClassId::Scalar { x: 1 });
                assert_eq!(perm[id_class] as usize, space.len());
                let mults = decompose(ctx, &table, &perm).unwrap();
                // Dimension bookkeeping.
                let total: u64 = mults
                    .iter()
                    .zip(&table.dims)
                    .map(|(&m, &d)| m * d)
                    .sum();
                assert_eq!(total as usize, space.len(), "p={p} {label}");
                // Trivial character appears exactly once (transitive action).
                let triv = table.position(IrredCharacter::LinearTwist { alpha: 0 }).unwrap();
                assert_eq!(mults[triv], 1);

                if let Some(expected) = expected_decomposition(ctx, label) {
                    let got: Vec<IrredCharacter> = table
                        .irreds
                        .iter()
                        .zip(&mults)
                        .filter(|&(_, &m)| m > 0)
                        .map(|(&ir, _)| ir)
                        .collect();
                    let mut expected = expected;
                    expected.sort();
                    let mut got = got;
                    got.sort();
                    assert_eq!(got, expected, "p={p} {label}");
                    // All multiplicities are 1 for these subgroups.
                    assert!(mults.iter().all(|&m| m <= 1), "p={p} {label}");
                }
            }
        }
    }

    #[test]
    fn split_torus_has_higher_multiplicity() {
        let data = GroupData::build(5).unwrap();
        let ctx = &data.ctx;
        let table = CharTable::build(ctx);
        let space = CosetSpace::build(ctx, &data.group, data.subgroup(SubgroupLabel::SplitTorus));
        let perm = perm_character(ctx, &space, &table.classes);
        let mults = decompose(ctx, &table, &perm).unwrap();
        assert!(mults.iter().any(|&m| m >= 2));
    }

    #[test]
    fn permutation_character_identity() {
        // 1_{N'} + 1_B = 1_N + 1_G on every class.
        for p in [3u64, 5, 7] {
            let data = GroupData::build(p).unwrap();
            let ctx = &data.ctx;
            let classes = ctx.class_list();
            let chi = |label| {
                let space = CosetSpace::build(ctx, &data.group, data.subgroup(label));
                perm_character(ctx, &space, &classes)
            };
            let lhs1 = chi(SubgroupLabel::NonsplitNorm);
            let lhs2 = chi(SubgroupLabel::Borel);
            let rhs1 = chi(SubgroupLabel::SplitNorm);
            let rhs2 = chi(SubgroupLabel::Full);
            for c in 0..classes.len() {
                assert_eq!(lhs1[c] + lhs2[c], rhs1[c] + rhs2[c], "p={p} class {c}");
            }
        }
    }

    #[test]
    fn nonsplit_norm_components_p5_and_p13() {
        // p = 5: trivial + quadratic Steinberg twist + one cuspidal.
        let ctx = PrimeContext::build(5).unwrap();
        let exp = expected_decomposition(&ctx, SubgroupLabel::NonsplitNorm).unwrap();
        assert_eq!(exp.len(), 3);
        assert!(exp.contains(&IrredCharacter::LinearTwist { alpha: 0 }));
        assert!(exp.contains(&IrredCharacter::SteinbergTwist { alpha: 2 }));
        assert_eq!(selected_principal_pairs(&ctx).len(), 0);
        assert_eq!(selected_cuspidals(&ctx).len(), 1);

        // p = 13: 2 principal-series pairs, 3 cuspidal orbits, quadratic twist.
        let ctx = PrimeContext::build(13).unwrap();
        assert_eq!(selected_principal_pairs(&ctx).len(), 2);
        assert_eq!(selected_cuspidals(&ctx).len(), 3);
        let dims: u64 = expected_decomposition(&ctx, SubgroupLabel::NonsplitNorm)
            .unwrap()
            .iter()
            .map(|ir| ir.dim(13))
            .sum();
        assert_eq!(dims, 13 * 12 / 2);
    }
}
