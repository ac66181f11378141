//! Subgroups of GL2(F_p) defined as stabilizers on P^1(F_{p^2}), their
//! coset spaces, and double-coset partitions.
//!
//! Each subgroup is the stabilizer of a point or an unordered pair of
//! points of P^1(F_{p^2}):
//! * B (Borel): point at infinity;
//! * C (split Cartan): ordered pair (infinity, 0), i.e. both fixed;
//! * N: the unordered pair {infinity, 0}, the normalizer of C;
//! * C' (nonsplit Cartan): ordered pair (sqrt(lambda), -sqrt(lambda));
//! * N': the unordered pair, the normalizer of C';
//! * C'' (a second split Cartan, conjugate to C): ordered pair (1, -1);
//! * N'': its normalizer.
//!
//! Explicit matrix shapes (upper-triangular, diagonal, monomial, ...) are
//! not used to build anything; they are asserted as cross-checks.

use crate::classes::ClassData;
use crate::context::{Fp2, PrimeContext, ProjPoint};
use crate::error::Error;
use crate::group::Mat;
use crate::CheckItem;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupLabel {
    Full,
    Borel,
    SplitTorus,
    SplitNorm,
    NonsplitTorus,
    NonsplitNorm,
    AltSplitTorus,
    AltSplitNorm,
}

pub const ALL_LABELS: [SubgroupLabel; 8] = [
    SubgroupLabel::Full,
    SubgroupLabel::Borel,
    SubgroupLabel::SplitTorus,
    SubgroupLabel::SplitNorm,
    SubgroupLabel::NonsplitTorus,
    SubgroupLabel::NonsplitNorm,
    SubgroupLabel::AltSplitTorus,
    SubgroupLabel::AltSplitNorm,
];

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubgroupLabel::Full => "G",
            SubgroupLabel::Borel => "B",
            SubgroupLabel::SplitTorus => "C",
            SubgroupLabel::SplitNorm => "N",
            SubgroupLabel::NonsplitTorus => "C'",
            SubgroupLabel::NonsplitNorm => "N'",
            SubgroupLabel::AltSplitTorus => "C''",
            SubgroupLabel::AltSplitNorm => "N''",
        };
        f.write_str(s)
    }
}

impl SubgroupLabel {
    /// The fixed data: a single fixed point, an ordered fixed pair, or an
    /// unordered stabilized pair.
    fn stabilizer_kind(&self, ctx: &PrimeContext) -> StabKind {
        let p = ctx.p;
        let inf = ProjPoint::Infinity;
        let zero = ProjPoint::Finite(Fp2::new(0, 0));
        let sqrt_l = ProjPoint::Finite(Fp2::new(0, 1));
        let msqrt_l = ProjPoint::Finite(Fp2::new(0, p - 1));
        let one = ProjPoint::Finite(Fp2::new(1, 0));
        let mone = ProjPoint::Finite(Fp2::new(p - 1, 0));
        match self {
            SubgroupLabel::Full => StabKind::Everything,
            SubgroupLabel::Borel => StabKind::Point(inf),
            SubgroupLabel::SplitTorus => StabKind::OrderedPair(inf, zero),
            SubgroupLabel::SplitNorm => StabKind::UnorderedPair(inf, zero),
            SubgroupLabel::NonsplitTorus => StabKind::OrderedPair(sqrt_l, msqrt_l),
            SubgroupLabel::NonsplitNorm => StabKind::UnorderedPair(sqrt_l, msqrt_l),
            SubgroupLabel::AltSplitTorus => StabKind::OrderedPair(one, mone),
            SubgroupLabel::AltSplitNorm => StabKind::UnorderedPair(one, mone),
        }
    }

    pub fn order(&self, ctx: &PrimeContext) -> u64 {
        let p = ctx.p as u64;
        match self {
            SubgroupLabel::Full => (p * p - 1) * (p * p - p),
            SubgroupLabel::Borel => p * (p - 1) * (p - 1),
            SubgroupLabel::SplitTorus | SubgroupLabel::AltSplitTorus => (p - 1) * (p - 1),
            SubgroupLabel::SplitNorm | SubgroupLabel::AltSplitNorm => 2 * (p - 1) * (p - 1),
            SubgroupLabel::NonsplitTorus => p * p - 1,
            SubgroupLabel::NonsplitNorm => 2 * (p * p - 1),
        }
    }
}

enum StabKind {
    Everything,
    Point(ProjPoint),
    OrderedPair(ProjPoint, ProjPoint),
    UnorderedPair(ProjPoint, ProjPoint),
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    pub label: SubgroupLabel,
    /// Elements in lexicographic order.
    pub elements: Vec<Mat>,
    member: Vec<bool>,
}

impl Subgroup {
    pub fn build(ctx: &PrimeContext, group: &[Mat], label: SubgroupLabel) -> Self {
        let kind = label.stabilizer_kind(ctx);
        let elements: Vec<Mat> = group
            .iter()
            .copied()
            .filter(|&m| match kind {
                StabKind::Everything => true,
                StabKind::Point(a) => ctx.mat_act(m, a) == a,
                StabKind::OrderedPair(a, b) => ctx.mat_act(m, a) == a && ctx.mat_act(m, b) == b,
                StabKind::UnorderedPair(a, b) => {
                    let (ma, mb) = (ctx.mat_act(m, a), ctx.mat_act(m, b));
                    (ma == a && mb == b) || (ma == b && mb == a)
                }
            })
            .collect();
        let p = ctx.p as usize;
        let mut member = vec![false; p * p * p * p];
        for m in &elements {
            member[m.pack(ctx.p)] = true;
        }
        Subgroup { label, elements, member }
    }

    #[inline]
    pub fn contains(&self, ctx: &PrimeContext, m: Mat) -> bool {
        self.member[m.pack(ctx.p)]
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
}

/// deg(H g K) = [H : H n gKg^-1], the number of right K-cosets in HgK.
pub fn degree(ctx: &PrimeContext, h: &Subgroup, g: Mat, k: &Subgroup) -> u64 {
    let g_inv = ctx.mat_inv(g);
    let stab = h
        .elements
        .iter()
        .filter(|&&x| k.contains(ctx, ctx.mat_mul(ctx.mat_mul(g_inv, x), g)))
        .count() as u64;
    debug_assert!(h.order() % stab == 0);
    h.order() / stab
}

/// Coset space G/H: canonical representatives (lexicographically least
/// member of each coset) plus a dense element-to-coset index.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    pub label: SubgroupLabel,
    pub reps: Vec<Mat>,
    pub rep_inv: Vec<Mat>,
    index_of: Vec<u32>,
}

impl CosetSpace {
    pub fn build(ctx: &PrimeContext, group: &[Mat], h: &Subgroup) -> Self {
        let p = ctx.p as usize;
        let mut index_of = vec![u32::MAX; p * p * p * p];
        let mut reps = Vec::new();
        for &g in group {
            if index_of[g.pack(ctx.p)] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g);
            for &x in &h.elements {
                index_of[ctx.mat_mul(g, x).pack(ctx.p)] = idx;
            }
        }
        debug_assert_eq!(reps.len() as u64, group.len() as u64 / h.order());
        let rep_inv = reps.iter().map(|&r| ctx.mat_inv(r)).collect();
        CosetSpace { label: h.label, reps, rep_inv, index_of }
    }

    /// Index of the coset gH.
    #[inline]
    pub fn index_of(&self, ctx: &PrimeContext, g: Mat) -> usize {
        let i = self.index_of[g.pack(ctx.p)];
        debug_assert!(i != u32::MAX);
        i as usize
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct DoubleCoset {
    /// Lexicographically least element.
    pub rep: Mat,
    /// Number of group elements in the double coset.
    pub size: u64,
    /// Number of right K-cosets, size / |K|.
    pub degree: u64,
}

/// Partition of G into H\G/K double cosets, with a dense element-to-coset id.
#[derive(Debug, Clone)]
pub struct DoubleCosets {
    pub left: SubgroupLabel,
    pub right: SubgroupLabel,
    pub cosets: Vec<DoubleCoset>,
    id_of: Vec<u32>,
}

impl DoubleCosets {
    pub fn build(ctx: &PrimeContext, group: &[Mat], h: &Subgroup, k: &Subgroup) -> Self {
        let p = ctx.p as usize;
        let mut id_of = vec![u32::MAX; p * p * p * p];
        // When either side is the full group the partition is the single
        // double coset G; skip the |H| * |K| product scan.
        if h.order() == group.len() as u64 || k.order() == group.len() as u64 {
            for &g in group {
                id_of[g.pack(ctx.p)] = 0;
            }
            let size = group.len() as u64;
            let cosets =
                vec![DoubleCoset { rep: group[0], size, degree: size / k.order() }];
            return DoubleCosets { left: h.label, right: k.label, cosets, id_of };
        }
        let mut cosets = Vec::new();
        for &g in group {
            if id_of[g.pack(ctx.p)] != u32::MAX {
                continue;
            }
            let id = cosets.len() as u32;
            let mut size = 0u64;
            for &x in &h.elements {
                let xg = ctx.mat_mul(x, g);
                for &y in &k.elements {
                    let key = ctx.mat_mul(xg, y).pack(ctx.p);
                    if id_of[key] == u32::MAX {
                        id_of[key] = id;
                        size += 1;
                    }
                }
            }
            debug_assert_eq!(size % k.order(), 0);
            cosets.push(DoubleCoset { rep: g, size, degree: size / k.order() });
        }
        DoubleCosets { left: h.label, right: k.label, cosets, id_of }
    }

    /// Id of the double coset HgK.
    #[inline]
    pub fn id_of(&self, ctx: &PrimeContext, g: Mat) -> usize {
        let i = self.id_of[g.pack(ctx.p)];
        debug_assert!(i != u32::MAX);
        i as usize
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
}

/// The matrix sigma_t = [1, 1; 1, t].
pub fn sigma(t: u32) -> Mat {
    Mat::new(1, 1, 1, t)
}

/// Canonical label of the double coset N sigma_t N: t and t^-1 give the
/// same coset, so the label is min(t, t^-1), with 0 for t = 0.
pub fn sigma_class(ctx: &PrimeContext, t: u32) -> u32 {
    if t == 0 { 0 } else { t.min(ctx.inv(t)) }
}

/// N\G/N structure: each non-N double coset tagged by its canonical t.
#[derive(Debug, Clone)]
pub struct SigmaCosets {
    /// Id of the double coset N (containing the identity).
    pub id_n: usize,
    /// Canonical t -> double coset id, for t in F_p - {1} up to t ~ t^-1.
    pub by_t: Vec<(u32, usize)>,
}

impl SigmaCosets {
    /// Tags the N\G/N partition with sigma_t labels, checking that the
    /// labeled cosets exhaust the partition and respect t ~ t^-1.
    pub fn build(ctx: &PrimeContext, dc: &DoubleCosets) -> Result<Self, Error> {
        let id_n = dc.id_of(ctx, Mat::identity());
        let mut by_t: Vec<(u32, usize)> = Vec::new();
        for t in 0..ctx.p {
            if t == 1 {
                continue;
            }
            let id = dc.id_of(ctx, sigma(t));
            if id == id_n {
                return Err(Error::Invalid(format!("sigma_{t} fell into the trivial double coset")));
            }
            let canon = sigma_class(ctx, t);
            if t == canon {
                by_t.push((t, id));
            } else if by_t.iter().find(|&&(tt, _)| tt == canon).map(|&(_, i)| i) != Some(id) {
                return Err(Error::Invalid(format!("sigma_{t} and sigma_{canon} landed in different double cosets")));
            }
        }
        let mut ids: Vec<usize> = by_t.iter().map(|&(_, i)| i).collect();
        ids.push(id_n);
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != dc.len() {
            return Err(Error::Invalid(format!(
                "sigma labels cover {} of {} double cosets",
                ids.len(),
                dc.len()
            )));
        }
        Ok(SigmaCosets { id_n, by_t })
    }
}

/// Per-prime bundle of the group, its class partition, and all eight
/// stabilizer subgroups.
#[derive(Debug, Clone)]
pub struct GroupData {
    pub ctx: PrimeContext,
    pub group: Vec<Mat>,
    pub classes: ClassData,
    subgroups: Vec<Subgroup>,
}

impl GroupData {
    pub fn build(p: u64) -> Result<Self, Error> {
        let ctx = PrimeContext::build(p)?;
        let group = ctx.enumerate_group()?;
        let classes = ClassData::build(&ctx, &group);
        let subgroups = ALL_LABELS.iter().map(|&l| Subgroup::build(&ctx, &group, l)).collect();
        Ok(GroupData { ctx, group, classes, subgroups })
    }

    pub fn subgroup(&self, label: SubgroupLabel) -> &Subgroup {
        &self.subgroups[ALL_LABELS.iter().position(|&l| l == label).unwrap()]
    }
}

/// Order, shape, decomposition, and normalizer checks for all subgroups.
///
/// `brute_normalizers` additionally compares N, N', N'' against literal
/// normalizer enumerations over the whole group (quadratic in |G|; meant
/// for small primes).
pub fn structural_checks(data: &GroupData, brute_normalizers: bool) -> Vec<CheckItem> {
    let ctx = &data.ctx;
    let p = ctx.p;
    let mut items = Vec::new();

    for &label in &ALL_LABELS {
        let sg = data.subgroup(label);
        let expect = label.order(ctx);
        items.push(CheckItem::new(
            format!("order({label})"),
            sg.order() == expect,
            format!("computed {} expected {}", sg.order(), expect),
        ));
    }

    // Explicit shapes, as cross-checks of the stabilizer route.
    let shape_checks: Vec<(SubgroupLabel, Box<dyn Fn(Mat) -> bool>)> = vec![
        (SubgroupLabel::Borel, Box::new(|m: Mat| m.c == 0)),
        (SubgroupLabel::SplitTorus, Box::new(|m: Mat| m.b == 0 && m.c == 0)),
        (SubgroupLabel::SplitNorm, Box::new(|m: Mat| (m.b == 0 && m.c == 0) || (m.a == 0 && m.d == 0))),
        {
            let lambda = ctx.lambda;
            let pp = p;
            (
                SubgroupLabel::NonsplitTorus,
                Box::new(move |m: Mat| m.a == m.d && m.b == (lambda as u64 * m.c as u64 % pp as u64) as u32),
            )
        },
        (SubgroupLabel::AltSplitTorus, Box::new(|m: Mat| m.a == m.d && m.b == m.c)),
    ];
    for (label, pred) in shape_checks {
        let sg = data.subgroup(label);
        let ok = sg.elements.iter().all(|&m| pred(m))
            && data.group.iter().filter(|&&m| pred(m)).count() == sg.elements.len();
        items.push(CheckItem::new(format!("shape({label})"), ok, "stabilizer set equals explicit matrix shape"));
    }

    // Index-2 decompositions N = C u wC with an involution w swapping the
    // two stabilized points; w = [0,1;1,0] for N, diag(1,-1) for N', N''.
    let omega = Mat::new(0, 1, 1, 0);
    let omega_alt = Mat::new(1, 0, 0, p - 1);
    for (norm, torus, w) in [
        (SubgroupLabel::SplitNorm, SubgroupLabel::SplitTorus, omega),
        (SubgroupLabel::NonsplitNorm, SubgroupLabel::NonsplitTorus, omega_alt),
        (SubgroupLabel::AltSplitNorm, SubgroupLabel::AltSplitTorus, omega_alt),
    ] {
        let n = data.subgroup(norm);
        let c = data.subgroup(torus);
        let w_ok = n.contains(ctx, w) && !c.contains(ctx, w);
        let mut coset: Vec<Mat> = c.elements.iter().map(|&m| ctx.mat_mul(w, m)).collect();
        let mut rest: Vec<Mat> =
            n.elements.iter().copied().filter(|&m| !c.contains(ctx, m)).collect();
        coset.sort_unstable();
        rest.sort_unstable();
        let ok = w_ok && coset == rest && n.order() == 2 * c.order();
        items.push(CheckItem::new(
            format!("decomposition({norm} = {torus} u w*{torus})"),
            ok,
            format!("w = [{},{};{},{}]", w.a, w.b, w.c, w.d),
        ));
    }

    // Subgroup closure (multiplication stays inside), skipping G itself.
    for &label in &ALL_LABELS[1..] {
        let sg = data.subgroup(label);
        let ok = sg.elements.iter().all(|&m| {
            sg.elements.iter().all(|&n2| sg.contains(ctx, ctx.mat_mul(m, n2)))
        });
        items.push(CheckItem::new(format!("closure({label})"), ok, "closed under multiplication"));
    }

    // Normalizer checks: every element of N normalizes C (and the index is
    // 2); brute enumeration over G for small primes.
    for (norm, torus) in [
        (SubgroupLabel::SplitNorm, SubgroupLabel::SplitTorus),
        (SubgroupLabel::NonsplitNorm, SubgroupLabel::NonsplitTorus),
        (SubgroupLabel::AltSplitNorm, SubgroupLabel::AltSplitTorus),
    ] {
        let n = data.subgroup(norm);
        let c = data.subgroup(torus);
        let normalizes = n.elements.iter().all(|&g| {
            let gi = ctx.mat_inv(g);
            c.elements.iter().all(|&x| c.contains(ctx, ctx.mat_mul(ctx.mat_mul(g, x), gi)))
        });
        let contains = c.elements.iter().all(|&x| n.contains(ctx, x));
        let mut ok = normalizes && contains && n.order() == 2 * c.order();
        let mut detail = format!("{norm} normalizes {torus}, index 2");
        if brute_normalizers {
            let brute: Vec<Mat> = data
                .group
                .iter()
                .copied()
                .filter(|&g| {
                    let gi = ctx.mat_inv(g);
                    c.elements.iter().all(|&x| c.contains(ctx, ctx.mat_mul(ctx.mat_mul(g, x), gi)))
                })
                .collect();
            ok = ok && brute == n.elements;
            detail = format!("{detail}; brute-force normalizer matches");
        }
        items.push(CheckItem::new(format!("normalizer({torus}) = {norm}"), ok, detail));
    }

    items
}
