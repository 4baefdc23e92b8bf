use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::group::{gen_vecg, Cocycle, FiniteGroup};
use crate::annular::TubeLabel;
use crate::dualdata::run_pipeline;
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, identity_residual, max_abs, sqrt_pd, trace, CMat, C64};
use crate::skeletal::{block_matrix, Family};

/// Largest group handled by [`classical_irreps`].
pub const CLASSICAL_ORDER_BOUND: usize = 48;

#[derive(Clone, Debug)]
pub struct ClassicalIrrep {
    /// `matrices[g]` is the unitary matrix of group element `g`.
    pub matrices: Vec<CMat>,
    pub character: Vec<C64>,
}

impl ClassicalIrrep {
    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }
}

fn regular(g: &FiniteGroup) -> Vec<CMat> {
    let n = g.order();
    (0..n)
        .map(|x| CMat::from_fn(n, n, |r, k| c(if g.mul(x, k) == r { 1.0 } else { 0.0 })))
        .collect()
}

fn char_pair(n: usize, a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() / c(n as f64)
}

/// Irreducible unitary representations by splitting the regular representation
/// with a random group-averaged Hermitian matrix.
pub fn classical_irreps(group: &FiniteGroup, seed: u64) -> Result<Vec<ClassicalIrrep>> {
    let n = group.order();
    if n > CLASSICAL_ORDER_BOUND {
        return Err(Error::InvalidGroup(format!(
            "order {n} exceeds the classical oracle bound {CLASSICAL_ORDER_BOUND}"
        )));
    }
    let reg = regular(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=crate::repdecomp::RETRY_BUDGET {
        let h = CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let h = &h + h.adjoint();
        let mut x = CMat::zeros(n, n);
        for r in &reg {
            x += r * &h * r.adjoint();
        }
        let (vals, vecs) = eigh(&x);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            match groups.last_mut() {
                Some(g) if (vals[k] - vals[*g.last().expect("nonempty")]).abs() < 1e-7 => g.push(k),
                _ => groups.push(vec![k]),
            }
        }
        let mut out: Vec<ClassicalIrrep> = Vec::new();
        let mut ok = true;
        for g in groups {
            let q = CMat::from_fn(n, g.len(), |r, j| vecs[(r, g[j])]);
            let matrices: Vec<CMat> = reg.iter().map(|r| q.adjoint() * r * &q).collect();
            let character: Vec<C64> = matrices.iter().map(trace).collect();
            if (char_pair(n, &character, &character) - c(1.0)).norm() > 1e-6 {
                ok = false;
                break;
            }
            if !out.iter().any(|o| char_pair(n, &o.character, &character).norm() > 0.5) {
                out.push(ClassicalIrrep { matrices, character });
            }
        }
        if ok && out.iter().map(|r| r.dim() * r.dim()).sum::<usize>() == n {
            out.sort_by(|a, b| {
                let key = |r: &ClassicalIrrep| {
                    let ch: Vec<(i64, i64)> = r
                        .character
                        .iter()
                        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                        .collect();
                    (r.dim(), std::cmp::Reverse(ch))
                };
                key(a).cmp(&key(b))
            });
            return Ok(out);
        }
    }
    Err(Error::DegenerateSpectrum {
        retries: crate::repdecomp::RETRY_BUDGET,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub group: String,
    pub dims: Vec<usize>,
    /// `permutation[a]` is the classical irrep matching dual label `a`.
    pub permutation: Vec<usize>,
    pub character_residual: f64,
    /// How far the `F2` blocks `g -> F2[g,*,c,*]` are from unitary representations.
    pub f2_rep_residual: f64,
    /// Residual of a unitary intertwiner between the `F2` blocks and the classical
    /// irrep with the same trace.
    pub f2_equivalence_residual: f64,
    /// `(rho_a(g) (x) rho_b(g)) W = W rho_c(g)` with `W` read from `F3`.
    pub clebsch_gordan_residual: f64,
    /// `sum_g rho_c(g)_{ij} conj(rho_c'(g)_{kl}) = |G|/dim c δδδ` on the `F2` blocks.
    pub matrix_element_residual: f64,
}

impl CrossCheckReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.character_residual,
            self.f2_rep_residual,
            self.f2_equivalence_residual,
            self.clebsch_gordan_residual,
            self.matrix_element_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Compare the dual pipeline on `(Vec_G, Vec)` against classical representation theory.
pub fn crosscheck_vecg(group: &FiniteGroup, seed: u64) -> Result<CrossCheckReport> {
    let n = group.order();
    let module = gen_vecg(group, &Cocycle::trivial(n))?;
    let pipe = run_pipeline(&module, seed)?;
    let classical = classical_irreps(group, seed)?;
    let irreps = pipe.irreps();
    if irreps.len() != classical.len() {
        return Err(Error::MismatchedRank {
            pipeline: irreps.len(),
            classical: classical.len(),
        });
    }

    let tube = |g: usize| {
        pipe.algebra
            .index_of(&TubeLabel { a: 0, b: 0, c: 0, d: 0, x: g, alpha: 0, beta: 0 })
            .expect("Vec_G tube")
    };
    let mut permutation = Vec::with_capacity(irreps.len());
    let mut character_residual = 0.0f64;
    for ir in irreps {
        let chi: Vec<C64> = (0..n).map(|g| ir.character[tube(g)]).collect();
        let (best, res) = classical
            .iter()
            .enumerate()
            .map(|(k, cl)| {
                let r = chi.iter().zip(&cl.character).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                (k, r)
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("at least the trivial irrep");
        permutation.push(best);
        character_residual = character_residual.max(res);
    }
    let mut seen = permutation.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != permutation.len() {
        return Err(Error::MismatchedRank {
            pipeline: irreps.len(),
            classical: seen.len(),
        });
    }

    let data = &pipe.data;
    let ctx = data.context();
    let rho = |g: usize, cc: usize| {
        let b = [g, 0, cc, 0];
        block_matrix(&data.f2, b, &ctx.layout(Family::F2, b))
    };
    let r = irreps.len();
    let mut f2_rep_residual = 0.0f64;
    let mut f2_equivalence_residual = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC1A5);
    for cc in 0..r {
        for g in 0..n {
            let m = rho(g, cc);
            f2_rep_residual = f2_rep_residual.max(identity_residual(&(&m * m.adjoint())));
            for h in 0..n {
                f2_rep_residual = f2_rep_residual.max(max_abs(&(&m * rho(h, cc) - rho(group.mul(g, h), cc))));
            }
        }
        let trace_of_blocks: Vec<C64> = (0..n).map(|g| trace(&rho(g, cc))).collect();
        let cl = classical
            .iter()
            .min_by(|x, y| {
                let dist = |k: &ClassicalIrrep| {
                    k.character.iter().zip(&trace_of_blocks).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
                };
                dist(x).total_cmp(&dist(y))
            })
            .expect("at least the trivial irrep");
        let d = cl.dim();
        if d != irreps[cc].dim() {
            f2_equivalence_residual = f64::INFINITY;
            continue;
        }
        let y = CMat::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let mut u = CMat::zeros(d, d);
        for g in 0..n {
            u += rho(g, cc) * &y * cl.matrices[g].adjoint();
        }
        let (_, ri) = sqrt_pd(&(u.adjoint() * &u))?;
        let u = u * ri;
        for g in 0..n {
            f2_equivalence_residual = f2_equivalence_residual.max(max_abs(&(rho(g, cc) * &u - &u * &cl.matrices[g])));
        }
    }

    let mut clebsch_gordan_residual = 0.0f64;
    for a in 0..r {
        for b in 0..r {
            let blk = [0, a, b, 0];
            let layout = ctx.layout(Family::F3, blk);
            let f3 = block_matrix(&data.f3, blk, &layout);
            for cc in 0..r {
                let dc = irreps[cc].dim();
                for mu in 0..ctx.n(crate::skeletal::Space::D, crate::skeletal::Space::D, a, b, cc) {
                    let w = CMat::from_fn(layout.rows.len(), dc, |row, k| {
                        let j = layout.cols.iter().position(|col| *col == [mu, cc, k]).expect("column");
                        f3[(row, j)]
                    });
                    for g in 0..n {
                        let t = rho(g, a).kronecker(&rho(g, b));
                        clebsch_gordan_residual = clebsch_gordan_residual.max(max_abs(&(&t * &w - &w * rho(g, cc))));
                    }
                }
            }
        }
    }

    let mut matrix_element_residual = 0.0f64;
    for c1 in 0..r {
        for c2 in 0..r {
            let (d1, d2) = (irreps[c1].dim(), irreps[c2].dim());
            for i in 0..d1 {
                for j in 0..d1 {
                    for k in 0..d2 {
                        for l in 0..d2 {
                            let s: C64 = (0..n).map(|g| rho(g, c1)[(i, j)] * rho(g, c2)[(k, l)].conj()).sum();
                            let want = if c1 == c2 && i == k && j == l { n as f64 / d1 as f64 } else { 0.0 };
                            matrix_element_residual = matrix_element_residual.max((s - c(want)).norm());
                        }
                    }
                }
            }
        }
    }

    Ok(CrossCheckReport {
        group: group.name().to_string(),
        dims: pipe.decomposition.dims(),
        permutation,
        character_residual,
        f2_rep_residual,
        f2_equivalence_residual,
        clebsch_gordan_residual,
        matrix_element_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_characters() {
        let irr = classical_irreps(&FiniteGroup::cyclic(2), 7).unwrap();
        assert_eq!(irr.len(), 2);
        assert!((irr[0].character[1] - c(1.0)).norm() < 1e-12);
        assert!((irr[1].character[1] + c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn s3_dims() {
        let irr = classical_irreps(&FiniteGroup::symmetric3(), 7).unwrap();
        assert_eq!(irr.iter().map(|r| r.dim()).collect::<Vec<_>>(), vec![1, 1, 2]);
    }

    #[test]
    fn z4_fourier() {
        let irr = classical_irreps(&FiniteGroup::cyclic(4), 7).unwrap();
        assert_eq!(irr.len(), 4);
        let i = C64::new(0.0, 1.0);
        for k in 0..4 {
            let want: Vec<C64> = (0..4).map(|g| i.powu((k * g) as u32)).collect();
            assert!(irr.iter().any(|r| r.character.iter().zip(&want).all(|(x, y)| (x - y).norm() < 1e-9)));
        }
    }

    #[test]
    fn bound_enforced() {
        assert!(classical_irreps(&FiniteGroup::cyclic(49), 0).is_err());
    }
}
