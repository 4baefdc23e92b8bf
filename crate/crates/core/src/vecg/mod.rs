//! Pointed fusion categories `Vec_G^phi` and their classical representation data.

mod classical;
mod group;

pub use classical::{classical_irreps, crosscheck_vecg, ClassicalIrrep, CrossCheckReport, CLASSICAL_ORDER_BOUND};
pub(crate) use group::CocycleFile;
pub use group::{gen_vecg, Cocycle, FiniteGroup};
