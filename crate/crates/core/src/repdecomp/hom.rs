use std::collections::BTreeMap;

use super::{Irrep, Rep};
use crate::annular::{Sparse, WhaMaps};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, max_abs, phase_fix, column_space, CMat, C64, ZERO};

/// `Delta(Lambda)` with the antipode already applied to the first leg.
#[derive(Clone, Debug)]
pub struct HaarPairs {
    /// `(S(t_i), j, z)` for each term `z t_i (x) t_j`.
    pub terms: Vec<(Sparse, usize, C64)>,
}

impl HaarPairs {
    pub fn new(maps: &WhaMaps) -> Self {
        let delta = maps.coproduct(&maps.haar).expect("haar integral belongs to the algebra");
        HaarPairs {
            terms: delta
                .terms
                .into_iter()
                .map(|(i, j, z)| (maps.antipode[i].clone(), j, z))
                .collect(),
        }
    }
}

/// `X_M = sum rho_W(S(Lambda_1)) M rho_V(Lambda_2)`, a module map `V -> W`.
pub(crate) fn average(v: &Rep, w: &Rep, pairs: &HaarPairs, m: &CMat) -> CMat {
    let mut out = CMat::zeros(w.dim(), v.dim());
    for (s1, j, z) in &pairs.terms {
        out += w.apply_sparse(s1) * m * &v.matrices[*j] * *z;
    }
    out
}

/// Matrix of `M -> X_M` on column-major vectorizations.
fn averaging_matrix(v: &Rep, w: &Rep, pairs: &HaarPairs) -> CMat {
    let k = v.dim() * w.dim();
    let mut out = CMat::zeros(k, k);
    for (s1, j, z) in &pairs.terms {
        out += v.matrices[*j].transpose().kronecker(&w.apply_sparse(s1)) * *z;
    }
    out
}

/// Rank of the averaging map, checked against its trace.
fn averaging_rank(v: &Rep, w: &Rep, pairs: &HaarPairs) -> Result<(usize, CMat)> {
    let phi = averaging_matrix(v, w, pairs);
    let tr: C64 = (0..phi.nrows()).map(|i| phi[(i, i)]).sum();
    let (_, range) = column_space(&phi, 1e-6);
    let rank = range.ncols();
    let rounded = tr.re.round();
    if (tr.re - rounded).abs() > 0.01 || tr.im.abs() > 0.01 || rounded as i64 != rank as i64 {
        return Err(Error::RankAmbiguous { value: tr.re });
    }
    Ok((rank, range))
}

/// `dim Hom(V, W)` as the rank of the Haar averaging map.
pub fn hom_dim(pairs: &HaarPairs, v: &Rep, w: &Rep) -> Result<usize> {
    averaging_rank(v, w, pairs).map(|(r, _)| r)
}

/// The (generally non-unital) action of `Delta` on `V (x) W`, `V` index major.
pub fn tensor_rep(maps: &WhaMaps, v: &Rep, w: &Rep) -> Rep {
    let d = v.dim() * w.dim();
    let matrices = maps
        .coproduct
        .iter()
        .map(|delta| {
            let mut m = CMat::zeros(d, d);
            for &(i, j, z) in &delta.terms {
                m += v.matrices[j].kronecker(&w.matrices[i]) * z;
            }
            m
        })
        .collect();
    Rep { matrices }
}

/// `V ⊠ W`: the image of `Delta(1)` in `V (x) W` with its action.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub rep: Rep,
    /// Isometry from the truncated space into `V (x) W`.
    pub embedding: CMat,
}

pub fn tensor_module(maps: &WhaMaps, v: &Rep, w: &Rep) -> TensorModule {
    let full = tensor_rep(maps, v, w);
    let p = full.apply(&maps.unit);
    let (vals, vecs) = eigh(&p);
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.5).collect();
    let mut q = CMat::from_fn(p.nrows(), keep.len(), |r, j| vecs[(r, keep[j])]);
    for j in 0..q.ncols() {
        let mut col = q.columns(j, 1).into_owned();
        phase_fix(&mut col);
        q.set_column(j, &col.column(0));
    }
    TensorModule {
        rep: full.restrict(&q),
        embedding: q,
    }
}

/// Isometric module map `V_c -> V_a (x) V_b`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub alpha: usize,
    pub matrix: CMat,
}

fn unit_map(irreps: &[Irrep], a: usize, b: usize, c_: usize) -> Intertwiner {
    let (da, db, dc) = (irreps[a].dim(), irreps[b].dim(), irreps[c_].dim());
    let triv = &irreps[0];
    let mut x = CMat::zeros(da * db, dc);
    for (k, l) in irreps[c_].grading.iter().enumerate() {
        let row = if a == 0 {
            triv.position(l.b, 0, l.b).expect("trivial irrep has every diagonal sector") * db + k
        } else {
            k * db + triv.position(l.f, 0, l.f).expect("trivial irrep has every diagonal sector")
        };
        x[(row, k)] = c(1.0);
    }
    Intertwiner {
        a,
        b,
        c: c_,
        alpha: 0,
        matrix: x,
    }
}

fn intertwiners_into(pairs: &HaarPairs, irreps: &[Irrep], w: &Rep, a: usize, b: usize, c_: usize) -> Result<Vec<Intertwiner>> {
    if (a == 0 && b == c_) || (b == 0 && a == c_) {
        return Ok(vec![unit_map(irreps, a, b, c_)]);
    }
    if a == 0 || b == 0 {
        return Ok(Vec::new());
    }
    let v = &irreps[c_].rep;
    let (rank, range) = averaging_rank(v, w, pairs)?;
    let (dw, dv) = (w.dim(), v.dim());
    let scale = c((dv as f64).sqrt());
    Ok((0..rank)
        .map(|alpha| {
            let mut x = CMat::from_fn(dw, dv, |r, k| range[(r + k * dw, alpha)] * scale);
            phase_fix(&mut x);
            Intertwiner {
                a,
                b,
                c: c_,
                alpha,
                matrix: x,
            }
        })
        .collect())
}

/// Orthonormal basis of `Hom(V_c, V_a ⊠ V_b)`; trivial-unit cases use the canonical map.
pub fn intertwiners(maps: &WhaMaps, irreps: &[Irrep], a: usize, b: usize, c_: usize) -> Result<Vec<Intertwiner>> {
    let pairs = HaarPairs::new(maps);
    let w = tensor_rep(maps, &irreps[a].rep, &irreps[b].rep);
    intertwiners_into(&pairs, irreps, &w, a, b, c_)
}

/// Intertwiners for every triple, keyed by `(a, b, c)`.
pub fn all_intertwiners(maps: &WhaMaps, irreps: &[Irrep]) -> Result<BTreeMap<(usize, usize, usize), Vec<Intertwiner>>> {
    let pairs = HaarPairs::new(maps);
    let r = irreps.len();
    let mut out = BTreeMap::new();
    for a in 0..r {
        for b in 0..r {
            let w = tensor_rep(maps, &irreps[a].rep, &irreps[b].rep);
            for c_ in 0..r {
                out.insert((a, b, c_), intertwiners_into(&pairs, irreps, &w, a, b, c_)?);
            }
        }
    }
    Ok(out)
}

/// Residual of `rho(Lambda_2 S(Lambda_1)) = dim V / (eps(1) d_V) rho(g^-1)`.
pub fn grouplike_trace_residual(maps: &WhaMaps, v: &Rep, d_v: f64) -> f64 {
    let n = maps.dim;
    let mut elt = vec![ZERO; n];
    for (s1, j, z) in &HaarPairs::new(maps).terms {
        let mut tj = vec![ZERO; n];
        tj[*j] = *z;
        let s: Vec<C64> = {
            let mut d = vec![ZERO; n];
            for &(k, w) in s1 {
                d[k] += w;
            }
            d
        };
        for (acc, p) in elt.iter_mut().zip(maps.mul_dense(&tj, &s)) {
            *acc += p;
        }
    }
    let eps1 = maps.counit_dense(&maps.unit.to_dense());
    let lhs = v.apply_dense(&elt);
    let rhs = v.apply(&maps.grouplike_inv) * (c(v.dim() as f64) / (eps1 * d_v));
    max_abs(&(lhs - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annular::build_algebra;
    use crate::repdecomp::{decompose, DEFAULT_SEED};
    use crate::vecg::{gen_vecg, Cocycle, FiniteGroup};

    #[test]
    fn s3_pi_squared() {
        let g = FiniteGroup::symmetric3();
        let alg = build_algebra(&gen_vecg(&g, &Cocycle::trivial(6)).unwrap()).unwrap();
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        let counts: Vec<usize> = (0..3)
            .map(|c_| intertwiners(&alg.maps, &d.irreps, 2, 2, c_).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 1]);
        let w = tensor_rep(&alg.maps, &d.irreps[2].rep, &d.irreps[2].rep);
        for c_ in 0..3 {
            for x in intertwiners(&alg.maps, &d.irreps, 2, 2, c_).unwrap() {
                let m = &x.matrix;
                let dc = d.irreps[c_].dim();
                assert!(max_abs(&(m.adjoint() * m - CMat::identity(dc, dc))) < 1e-10);
                for (i, r) in d.irreps[c_].rep.matrices.iter().enumerate() {
                    assert!(max_abs(&(&w.matrices[i] * m - m * r)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn tensor_with_trivial_keeps_dimension() {
        let g = FiniteGroup::symmetric3();
        let alg = build_algebra(&gen_vecg(&g, &Cocycle::trivial(6)).unwrap()).unwrap();
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        let t = tensor_module(&alg.maps, &d.irreps[2].rep, &d.irreps[0].rep);
        assert_eq!(t.rep.dim(), 2);
        assert!(t.rep.residuals(&alg.maps).max() < 1e-10);
    }
}
