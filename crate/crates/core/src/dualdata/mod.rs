//! The dual category and the bimodule associators read off from representations.

use std::collections::BTreeMap;

use crate::annular::{build_algebra, AnnAlgebra, TubeLabel};
use crate::error::{Error, Result};
use crate::linalg::{c, identity_residual, inverse, polar_unitary, CMat, ZERO};
use crate::repdecomp::{all_intertwiners, decompose, Decomposition, Intertwiner, Irrep};
use crate::skeletal::{
    block_matrix, compute_fp_dims, key, verify_pentagons, verify_unitarity, BimoduleData, FSymbols, Family,
    FusionContext, FusionRules, ModuleData, SkeletalCategory, Tensor3,
};

const PRUNE: f64 = 1e-14;
/// Largest raw unitarity defect of an F4 block that polar rescaling may absorb.
pub const F4_RESCALE_LIMIT: f64 = 1e-6;

pub type IntertwinerTable = BTreeMap<(usize, usize, usize), Vec<Intertwiner>>;

/// `N^f_{b < c}`: sector dimensions of each irrep.
pub fn right_action(alg: &AnnAlgebra, irreps: &[Irrep]) -> Tensor3 {
    let m = alg.module_rank();
    let mut t = Tensor3::zeros([m, irreps.len(), m]);
    for (cc, r) in irreps.iter().enumerate() {
        for b in 0..m {
            for f in 0..m {
                t.set(b, cc, f, r.sector_dim(b, f) as u32);
            }
        }
    }
    t
}

/// Replace each block by `(M^T)^-1`, turning lowered symbols into F-symbols.
fn raise(ctx: &FusionContext, fam: Family, lowered: &FSymbols) -> Result<FSymbols> {
    let mut out = FSymbols::new();
    for (block, layout) in ctx.blocks(fam) {
        let m = block_matrix(lowered, block, &layout);
        let raised = inverse(&m.transpose()).ok_or_else(|| Error::SingularBlock {
            family: fam.to_string(),
            block,
        })?;
        out.set_block(block, &layout, &raised, PRUNE);
    }
    Ok(out)
}

/// `F2` from the graded matrix elements of the irreps.
pub fn compute_f2(alg: &AnnAlgebra, irreps: &[Irrep], ctx: &FusionContext) -> Result<FSymbols> {
    let dc = &alg.c_dims;
    let mm = &alg.m_dims;
    let mut lowered = FSymbols::new();
    for (cc, irrep) in irreps.iter().enumerate() {
        for (i, t) in alg.basis.iter().enumerate() {
            // inner boundary (b, f), outer (e, d), strand a
            let TubeLabel { a: b, b: f, c: e, d, x: a, alpha, beta: nu } = *t;
            let w = dc[a].sqrt() * (mm[b] * mm[d] / (mm[e] * mm[f])).powf(0.25);
            for mu in 0..irrep.sector_dim(b, f) {
                let col = irrep.position(b, mu, f).expect("sector label");
                for be in 0..irrep.sector_dim(e, d) {
                    let row = irrep.position(e, be, d).expect("sector label");
                    let v = irrep.rep.matrices[i][(row, col)] / w;
                    if v.norm() > PRUNE {
                        lowered.insert(key(a, b, cc, d, alpha, e, be, mu, f, nu), v);
                    }
                }
            }
        }
    }
    for (block, _) in ctx.blocks(Family::F2) {
        if !lowered.has_block(block) {
            return Err(Error::GradingMismatch(format!(
                "no matrix element feeds F2 block {block:?}"
            )));
        }
    }
    raise(ctx, Family::F2, &lowered)
}

/// `F3` from the components of the intertwiners in graded bases.
pub fn compute_f3(irreps: &[Irrep], table: &IntertwinerTable, ctx: &FusionContext) -> Result<FSymbols> {
    let mut lowered = FSymbols::new();
    for (&(b, cc, f), maps) in table {
        let dcc = irreps[cc].dim();
        for x in maps {
            for (kj, lf) in irreps[f].grading.iter().enumerate() {
                let (m, nu, d) = (lf.b, lf.mu, lf.f);
                for (ka, lb) in irreps[b].grading.iter().enumerate() {
                    if lb.b != m {
                        continue;
                    }
                    let (al, e) = (lb.mu, lb.f);
                    for (kb, lc) in irreps[cc].grading.iter().enumerate() {
                        if lc.b != e || lc.f != d {
                            continue;
                        }
                        let v = x.matrix[(ka * dcc + kb, kj)];
                        if v.norm() > PRUNE {
                            lowered.insert(key(m, b, cc, d, al, e, lc.mu, x.alpha, f, nu), v);
                        }
                    }
                }
            }
        }
    }
    raise(ctx, Family::F3, &lowered)
}

/// `F4` as overlaps of the two recoupling trees, polar-rescaled per block.
pub fn compute_f4(irreps: &[Irrep], table: &IntertwinerTable, ctx: &FusionContext) -> Result<FSymbols> {
    let dim = |a: usize| irreps[a].dim();
    let none = Vec::new();
    let maps = |a, b, cc| table.get(&(a, b, cc)).unwrap_or(&none);
    let mut out = FSymbols::new();
    for (block, layout) in ctx.blocks(Family::F4) {
        let [b, cc, g, d] = block;
        let left: Vec<CMat> = layout
            .rows
            .iter()
            .map(|&[al, e, be]| {
                let xbc = &maps(b, cc, e)[al].matrix;
                let xeg = &maps(e, g, d)[be].matrix;
                xbc.kronecker(&CMat::identity(dim(g), dim(g))) * xeg
            })
            .collect();
        let right: Vec<CMat> = layout
            .cols
            .iter()
            .map(|&[mu, f, nu]| {
                let xcg = &maps(cc, g, f)[mu].matrix;
                let xbf = &maps(b, f, d)[nu].matrix;
                CMat::identity(dim(b), dim(b)).kronecker(xcg) * xbf
            })
            .collect();
        let dd = c(dim(d) as f64);
        let raw = CMat::from_fn(left.len(), right.len(), |i, j| {
            let l = &left[i];
            let r = &right[j];
            let mut s = ZERO;
            for (p, q) in r.iter().zip(l.iter()) {
                s += p.conj() * q;
            }
            s / dd
        });
        let fixed = if !layout.is_square() {
            return Err(Error::PipelineInconsistent(format!("F4 block {block:?} is not square")));
        } else {
            let defect = identity_residual(&(&raw * raw.adjoint()));
            if defect >= F4_RESCALE_LIMIT {
                return Err(Error::PipelineInconsistent(format!(
                    "F4 block {block:?} is {defect:e} away from unitary"
                )));
            }
            polar_unitary(&raw)?
        };
        out.set_block(block, &layout, &fixed, PRUNE);
    }
    Ok(out)
}

/// Every intermediate of the dual construction.
#[derive(Clone, Debug)]
pub struct DualPipeline {
    pub algebra: AnnAlgebra,
    pub decomposition: Decomposition,
    pub intertwiners: IntertwinerTable,
    pub data: BimoduleData,
}

impl DualPipeline {
    pub fn irreps(&self) -> &[Irrep] {
        &self.decomposition.irreps
    }
}

/// Decompose, read off `F2`, `F3`, `F4`, and validate the result.
pub fn run_pipeline(module: &ModuleData, seed: u64) -> Result<DualPipeline> {
    let algebra = build_algebra(module)?;
    let decomposition = decompose(&algebra, seed)?;
    let irreps = &decomposition.irreps;
    let action = right_action(&algebra, irreps);
    let table = all_intertwiners(&algebra.maps, irreps)?;

    let r = irreps.len();
    let mut n4 = Tensor3::zeros([r, r, r]);
    for (&(a, b, cc), xs) in &table {
        n4.set(a, b, cc, xs.len() as u32);
    }
    let fusion = FusionRules::new(n4, decomposition.dual.clone())?;

    let ctx = FusionContext {
        c: &module.category.fusion,
        left: &module.action,
        right: Some(&action),
        d: Some(&fusion),
    };
    let f2 = compute_f2(&algebra, irreps, &ctx)?;
    let f3 = compute_f3(irreps, &table, &ctx)?;
    let f4 = compute_f4(irreps, &table, &ctx)?;

    let name = module.category.name.as_ref().map(|n| format!("dual of {n}"));
    let dual = SkeletalCategory::new(name, fusion, f4)?;
    let data = BimoduleData::with_right(module.clone(), dual, action, f2, f3)?;
    validate(&data)?;
    Ok(DualPipeline {
        algebra,
        decomposition,
        intertwiners: table,
        data,
    })
}

fn validate(data: &BimoduleData) -> Result<()> {
    let dims = compute_fp_dims(&data.right_category().expect("dual present").fusion)?;
    let fd: f64 = dims.iter().map(|d| d * d).sum();
    let fc = data.left().fpdim();
    if (fd - fc).abs() > 1e-8 * fc {
        return Err(Error::PipelineInconsistent(format!("FPdim of the dual is {fd}, expected {fc}")));
    }
    let u = verify_unitarity(data);
    if !u.pass {
        return Err(Error::PipelineInconsistent(format!(
            "unitarity residual {:e}, non-square blocks {:?}",
            u.max_residual(),
            u.nonsquare
        )));
    }
    let p = verify_pentagons(data)?;
    if !p.pass {
        let worst = p
            .families
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("families checked");
        return Err(Error::PipelineInconsistent(format!(
            "pentagon {} residual {:e} at {}",
            worst.name,
            worst.residual,
            worst.witness.as_deref().unwrap_or("?")
        )));
    }
    Ok(())
}

/// The invertible `(C, C*_M)`-bimodule built on `module`.
pub fn assemble_dual(module: &ModuleData, seed: u64) -> Result<BimoduleData> {
    run_pipeline(module, seed).map(|p| p.data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repdecomp::DEFAULT_SEED;
    use crate::vecg::{gen_vecg, Cocycle, FiniteGroup};

    #[test]
    fn z2_dual_is_rep_z2() {
        let g = FiniteGroup::cyclic(2);
        let m = gen_vecg(&g, &Cocycle::trivial(2)).unwrap();
        let d = assemble_dual(&m, DEFAULT_SEED).unwrap();
        let right = d.right_category().unwrap();
        assert_eq!(right.rank(), 2);
        for (_, v) in right.f.iter() {
            assert!((v - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn s3_dual_fusion() {
        let g = FiniteGroup::symmetric3();
        let m = gen_vecg(&g, &Cocycle::trivial(6)).unwrap();
        let d = assemble_dual(&m, DEFAULT_SEED).unwrap();
        let fus = &d.right_category().unwrap().fusion;
        assert_eq!((0..3).map(|cc| fus.n(2, 2, cc)).collect::<Vec<_>>(), vec![1, 1, 1]);
    }
}
