//! Small categories and bimodules used in examples and tests.

use crate::dualdata::assemble_dual;
use crate::error::Result;
use crate::linalg::c;
use crate::repdecomp::DEFAULT_SEED;
use crate::skeletal::{key, BimoduleData, FSymbols, FusionRules, ModuleData, SkeletalCategory, Tensor3};
use crate::vecg::{gen_vecg, Cocycle, FiniteGroup};

/// The golden ratio.
pub fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Fibonacci category, labels `1, τ`.
pub fn fibonacci() -> SkeletalCategory {
    let fusion = FusionRules::from_entries(
        2,
        vec![0, 1],
        &[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 1]],
    )
    .expect("fibonacci rules");
    let p = phi();
    let mut f = FSymbols::new();
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    for e in 0..2 {
                        for ff in 0..2 {
                            let allowed = fusion.n(a, b, e) > 0
                                && fusion.n(e, cc, d) > 0
                                && fusion.n(b, cc, ff) > 0
                                && fusion.n(a, ff, d) > 0;
                            if !allowed {
                                continue;
                            }
                            let v = if [a, b, cc, d] == [1, 1, 1, 1] {
                                match (e, ff) {
                                    (0, 0) => 1.0 / p,
                                    (1, 1) => -1.0 / p,
                                    _ => p.powf(-0.5),
                                }
                            } else {
                                1.0
                            };
                            f.insert(key(a, b, cc, d, 0, e, 0, 0, ff, 0), c(v));
                        }
                    }
                }
            }
        }
    }
    SkeletalCategory::new(Some("Fib".into()), fusion, f).expect("fibonacci dims")
}

/// A category acting on itself by fusion.
pub fn regular_module(cat: &SkeletalCategory) -> Result<ModuleData> {
    ModuleData::new(cat.clone(), cat.fusion.tensor().clone(), cat.f.clone())
}

/// `Vec_G` on `Vec` for a bundled group name.
pub fn vecg_module(group: &str) -> Result<ModuleData> {
    let g = FiniteGroup::by_name(group)?;
    gen_vecg(&g, &Cocycle::trivial(g.order()))
}

/// `Vec_{Z2xZ2}` on `Vec` twisted by the symplectic cocycle.
pub fn klein_twisted_module() -> Result<ModuleData> {
    gen_vecg(&FiniteGroup::klein(), &Cocycle::klein_symplectic())
}

fn pointed(name: &str, group: &FiniteGroup) -> Result<SkeletalCategory> {
    let m = gen_vecg(group, &Cocycle::trivial(group.order()))?;
    let mut cat = m.category;
    cat.name = Some(name.into());
    Ok(cat)
}

/// `(Vec_Z2, Vec, Vec)`: the right category is too small.
pub fn failure_mode_1() -> Result<BimoduleData> {
    let module = vecg_module("Z2")?;
    let d = pointed("Vec", &FiniteGroup::cyclic(1))?;
    let action = Tensor3::from_entries([1, 1, 1], &[[0, 0, 0, 1]])?;
    let mut f2 = FSymbols::new();
    for g in 0..2 {
        f2.insert(key(g, 0, 0, 0, 0, 0, 0, 0, 0, 0), c(1.0));
    }
    let mut f3 = FSymbols::new();
    f3.insert(key(0, 0, 0, 0, 0, 0, 0, 0, 0, 0), c(1.0));
    BimoduleData::with_right(module, d, action, f2, f3)
}

/// `(Vec_Z2, Vec, Vec_Z2)` with every symbol `+1`: both labels carry the trivial irrep.
pub fn failure_mode_2() -> Result<BimoduleData> {
    let module = vecg_module("Z2")?;
    let d = pointed("Vec_Z2", &FiniteGroup::cyclic(2))?;
    let action = Tensor3::from_entries([1, 2, 1], &[[0, 0, 0, 1], [0, 1, 0, 1]])?;
    let mut f2 = FSymbols::new();
    let mut f3 = FSymbols::new();
    for g in 0..2 {
        for h in 0..2 {
            f2.insert(key(g, 0, h, 0, 0, 0, 0, 0, 0, 0), c(1.0));
            f3.insert(key(0, g, h, 0, 0, 0, 0, 0, g ^ h, 0), c(1.0));
        }
    }
    BimoduleData::with_right(module, d, action, f2, f3)
}

/// The assembled `(Vec_S3, Vec, Rep S3)` restricted to the subgroup `{e, (12)}`.
///
/// The two-dimensional irrep then labels the reducible representation `1 + sign`.
pub fn failure_mode_3() -> Result<BimoduleData> {
    let s3 = assemble_dual(&vecg_module("S3")?, DEFAULT_SEED)?;
    let g = FiniteGroup::symmetric3();
    // lexicographic index 1 is the transposition swapping the last two points
    let t = 1;
    debug_assert_eq!(g.mul(t, t), 0);
    let mut f2 = FSymbols::new();
    for (k, v) in s3.f2.iter() {
        if k.a == 0 || k.a == t {
            let mut k2 = *k;
            k2.a = usize::from(k.a == t);
            f2.insert(k2, *v);
        }
    }
    let module = vecg_module("Z2")?;
    let mut out = s3.clone();
    out.module = module;
    out.f2 = f2;
    Ok(out)
}

/// `(Vec_Z2, Vec, Rep Z2)` as produced by the dual construction.
pub fn rep_z2_bimodule() -> Result<BimoduleData> {
    assemble_dual(&vecg_module("Z2")?, DEFAULT_SEED)
}
