//! Skeletal data of fusion, module and bimodule categories.

mod check;
mod fsym;
mod fusion;
mod gauge;

pub use check::{
    check_normalization, verify_pentagons, verify_unitarity, FamilyResidual, PentagonReport,
    UnitarityReport, PENTAGON_FAMILIES,
};
pub use fsym::{block_matrix, FKey, FSymbols, FTable, Family, FusionContext, Layout, Space};
pub(crate) use fsym::key;
pub use fusion::{compute_fp_dims, compute_module_dims, FusionRules, Tensor3};
pub use gauge::{apply_gauge, GaugeTransform, Vertex};

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A fusion category: fusion rules, associator and FP dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct SkeletalCategory {
    pub name: Option<String>,
    pub fusion: FusionRules,
    /// `F0` for the left category, `F4` when used as the right category.
    pub f: FSymbols,
    pub fp_dims: Vec<f64>,
}

impl SkeletalCategory {
    pub fn new(name: Option<String>, fusion: FusionRules, f: FSymbols) -> Result<Self> {
        let fp_dims = compute_fp_dims(&fusion)?;
        Ok(SkeletalCategory {
            name,
            fusion,
            f,
            fp_dims,
        })
    }

    pub fn rank(&self) -> usize {
        self.fusion.rank()
    }

    /// Sum of squared FP dimensions.
    pub fn fpdim(&self) -> f64 {
        self.fp_dims.iter().map(|d| d * d).sum()
    }
}

/// A left module category over `category`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleData {
    pub category: SkeletalCategory,
    pub rank: usize,
    /// `N^{xa}_c = dim Hom(x > a, c)`.
    pub action: Tensor3,
    pub f1: FSymbols,
    pub dims: Vec<f64>,
}

impl ModuleData {
    pub fn new(category: SkeletalCategory, action: Tensor3, f1: FSymbols) -> Result<Self> {
        let [rc, rank, rank2] = action.dims();
        if rc != category.rank() || rank != rank2 {
            return Err(Error::ShapeMismatch(format!(
                "left action of shape {:?} for a rank {} category",
                action.dims(),
                category.rank()
            )));
        }
        for a in 0..rank {
            for c in 0..rank {
                if action.get(0, a, c) != usize::from(a == c) {
                    return Err(Error::InconsistentAction(format!(
                        "unit does not act trivially on module label {a}"
                    )));
                }
            }
        }
        let dims = compute_module_dims(&action, &category.fp_dims)?;
        Ok(ModuleData {
            category,
            rank,
            action,
            f1,
            dims,
        })
    }
}

/// Right category `D` acting on the module, `N^{b c}_f = dim Hom(b < c, f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RightAction {
    pub category: SkeletalCategory,
    pub action: Tensor3,
}

/// A `(C, D)`-bimodule category. Absent tensors are empty.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleData {
    pub module: ModuleData,
    pub right: Option<RightAction>,
    pub f2: FSymbols,
    pub f3: FSymbols,
    pub tolerance: f64,
}

impl BimoduleData {
    pub fn from_module(module: ModuleData) -> Self {
        BimoduleData {
            module,
            right: None,
            f2: FSymbols::new(),
            f3: FSymbols::new(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_right(
        module: ModuleData,
        right: SkeletalCategory,
        action: Tensor3,
        f2: FSymbols,
        f3: FSymbols,
    ) -> Result<Self> {
        let m = module.rank;
        if action.dims() != [m, right.rank(), m] {
            return Err(Error::ShapeMismatch(format!(
                "right action of shape {:?} for module rank {m} and right rank {}",
                action.dims(),
                right.rank()
            )));
        }
        for b in 0..m {
            for f in 0..m {
                if action.get(b, 0, f) != usize::from(b == f) {
                    return Err(Error::InconsistentAction(format!(
                        "right unit does not act trivially on module label {b}"
                    )));
                }
            }
        }
        Ok(BimoduleData {
            module,
            right: Some(RightAction {
                category: right,
                action,
            }),
            f2,
            f3,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn left(&self) -> &SkeletalCategory {
        &self.module.category
    }

    pub fn right_category(&self) -> Option<&SkeletalCategory> {
        self.right.as_ref().map(|r| &r.category)
    }

    pub fn context(&self) -> FusionContext<'_> {
        FusionContext {
            c: &self.module.category.fusion,
            left: &self.module.action,
            right: self.right.as_ref().map(|r| &r.action),
            d: self.right.as_ref().map(|r| &r.category.fusion),
        }
    }

    /// The stored tensor of a family, `None` when the family does not apply.
    pub fn fsym(&self, fam: Family) -> Option<&FSymbols> {
        match fam {
            Family::F0 => Some(&self.module.category.f),
            Family::F1 => Some(&self.module.f1),
            Family::F2 => self.right.as_ref().map(|_| &self.f2),
            Family::F3 => self.right.as_ref().map(|_| &self.f3),
            Family::F4 => self.right.as_ref().map(|r| &r.category.f),
        }
    }

    pub fn fsym_mut(&mut self, fam: Family) -> Option<&mut FSymbols> {
        match fam {
            Family::F0 => Some(&mut self.module.category.f),
            Family::F1 => Some(&mut self.module.f1),
            Family::F2 => self.right.as_ref().map(|_| &mut self.f2),
            Family::F3 => self.right.as_ref().map(|_| &mut self.f3),
            Family::F4 => self.right.as_mut().map(|r| &mut r.category.f),
        }
    }

    /// Whether the tensor of a family is provided.
    pub fn has(&self, fam: Family) -> bool {
        self.fsym(fam).is_some_and(|f| !f.is_empty())
    }

    /// Lowered-index view of a family; fails when the family is absent.
    pub fn table(&self, fam: Family) -> Result<FTable<'_>> {
        let sym = self
            .fsym(fam)
            .filter(|f| !f.is_empty())
            .ok_or_else(|| Error::InvalidData(format!("{fam} is not provided")))?;
        FTable::with_inverse(&self.context(), fam, sym)
    }
}
