//! Per-prime computation cache shared by the individual checks.

use std::cell::OnceCell;
use std::collections::BTreeMap;

use gl2cosets::characters::CharTable;
use gl2cosets::eigensums::{component_eigenvalues, pairing_matrix_route, ComponentEigen, PairingMatrixRoute};
use gl2cosets::subgroups::{CosetSpace, DoubleCosets, GroupData, SubgroupLabel, ALL_LABELS};
use gl2cosets::{Error, PrimeContext};

use crate::config::Mode;

/// Everything that requires enumerating the group.
pub struct Enumerated {
    pub data: GroupData,
    pub spaces: BTreeMap<SubgroupLabel, CosetSpace>,
    dcosets: std::cell::RefCell<BTreeMap<(SubgroupLabel, SubgroupLabel), std::rc::Rc<DoubleCosets>>>,
}

impl Enumerated {
    /// The double-coset partition H\G/K, built once and cached.
    pub fn dc(&self, h: SubgroupLabel, k: SubgroupLabel) -> std::rc::Rc<DoubleCosets> {
        let mut map = self.dcosets.borrow_mut();
        map.entry((h, k))
            .or_insert_with(|| {
                std::rc::Rc::new(DoubleCosets::build(
                    &self.data.ctx,
                    &self.data.group,
                    self.data.subgroup(h),
                    self.data.subgroup(k),
                ))
            })
            .clone()
    }

    pub fn space(&self, l: SubgroupLabel) -> &CosetSpace {
        &self.spaces[&l]
    }
}

/// Cached per-prime state. Built once, then threaded through the checks in
/// dependency order.
pub struct Session {
    pub p: u64,
    pub mode: Mode,
    pub ctx: PrimeContext,
    pub table: CharTable,
    pub enumerated: Option<Enumerated>,
    components: OnceCell<Result<Vec<ComponentEigen>, String>>,
    matrix_route: OnceCell<Result<PairingMatrixRoute, String>>,
}

impl Session {
    pub fn build(p: u64, mode: Mode) -> Result<Session, Error> {
        let (ctx, enumerated) = if mode.uses_matrix() {
            let data = GroupData::build(p)?;
            let spaces: BTreeMap<SubgroupLabel, CosetSpace> = ALL_LABELS
                .iter()
                .map(|&l| (l, CosetSpace::build(&data.ctx, &data.group, data.subgroup(l))))
                .collect();
            let ctx = data.ctx.clone();
            (ctx, Some(Enumerated { data, spaces, dcosets: Default::default() }))
        } else {
            (PrimeContext::build(p)?, None)
        };
        let table = CharTable::build(&ctx);
        Ok(Session {
            p,
            mode,
            ctx,
            table,
            enumerated,
            components: OnceCell::new(),
            matrix_route: OnceCell::new(),
        })
    }

    /// Character-sum eigenvalues of every component of C[G/N'], cached.
    pub fn components(&self) -> &Result<Vec<ComponentEigen>, String> {
        self.components.get_or_init(|| {
            component_eigenvalues(&self.ctx, &self.table).map_err(|e| e.to_string())
        })
    }

    /// Exact matrix route through the pairing operator, cached. Errors when
    /// the session was built without enumeration (charsum mode).
    pub fn matrix_route(&self) -> &Result<PairingMatrixRoute, String> {
        self.matrix_route.get_or_init(|| {
            let en = self
                .enumerated
                .as_ref()
                .ok_or_else(|| "matrix route requires group enumeration (mode matrix/both)".to_string())?;
            pairing_matrix_route(
                &en.data.ctx,
                &en.data.group,
                &en.data.classes,
                &self.table,
                en.data.subgroup(SubgroupLabel::NonsplitNorm),
                en.data.subgroup(SubgroupLabel::SplitNorm),
            )
            .map_err(|e| e.to_string())
        })
    }
}
