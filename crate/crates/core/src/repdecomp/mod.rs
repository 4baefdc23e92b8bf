//! Irreducible *-representations of the tube algebra.

mod hom;

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use hom::{
    all_intertwiners, grouplike_trace_residual, hom_dim, intertwiners, tensor_module, tensor_rep, HaarPairs, Intertwiner,
    TensorModule,
};

use crate::annular::{AlgElement, AnnAlgebra, WhaMaps};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, max_abs, phase_fix, sqrt_pd, trace, CMat, C64, ZERO};

pub const DEFAULT_SEED: u64 = 0x5EED;
/// Random commutant elements tried after the first before giving up.
pub const RETRY_BUDGET: usize = 8;
const CLUSTER_GAP: f64 = 1e-7;

/// A representation given by the images of the basis tubes.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    pub matrices: Vec<CMat>,
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.nrows())
    }

    pub(crate) fn apply_dense(&self, u: &[C64]) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (m, z) in self.matrices.iter().zip(u) {
            if *z != ZERO {
                out += m * *z;
            }
        }
        out
    }

    pub(crate) fn apply_sparse(&self, u: &[(usize, C64)]) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for &(i, z) in u {
            out += &self.matrices[i] * z;
        }
        out
    }

    pub fn apply(&self, u: &AlgElement) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (i, z) in u.iter() {
            out += &self.matrices[i] * z;
        }
        out
    }

    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(trace).collect()
    }

    /// Conjugate by an isometry `q`: `q^dag rho q`.
    pub fn restrict(&self, q: &CMat) -> Rep {
        let qa = q.adjoint();
        Rep {
            matrices: self.matrices.iter().map(|m| &qa * m * q).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let (d1, d2) = (self.dim(), other.dim());
        Rep {
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| {
                    let mut m = CMat::zeros(d1 + d2, d1 + d2);
                    m.view_mut((0, 0), (d1, d1)).copy_from(a);
                    m.view_mut((d1, d1), (d2, d2)).copy_from(b);
                    m
                })
                .collect(),
        }
    }

    /// How far this is from a unital *-representation.
    pub fn residuals(&self, maps: &WhaMaps) -> RepResiduals {
        let n = maps.dim;
        let mut multiplicative = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let prod = self.apply_sparse(&maps.product[i * n + j]);
                multiplicative = multiplicative.max(max_abs(&(&self.matrices[i] * &self.matrices[j] - prod)));
            }
        }
        let star = (0..n)
            .map(|i| max_abs(&(self.apply_sparse(&maps.star[i]) - self.matrices[i].adjoint())))
            .fold(0.0, f64::max);
        let d = self.dim();
        let unit = max_abs(&(self.apply(&maps.unit) - CMat::identity(d, d)));
        RepResiduals {
            multiplicative,
            star,
            unit,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RepResiduals {
    pub multiplicative: f64,
    pub star: f64,
    pub unit: f64,
}

impl RepResiduals {
    pub fn max(&self) -> f64 {
        self.multiplicative.max(self.star).max(self.unit)
    }
}

/// Basis vector `|b, mu, f>`: the `mu`-th vector of sector `(b, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SectorLabel {
    pub b: usize,
    pub mu: usize,
    pub f: usize,
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub id: usize,
    pub rep: Rep,
    /// Label of each basis vector, sorted by `(b, f, mu)`.
    pub grading: Vec<SectorLabel>,
    pub character: Vec<C64>,
}

impl Irrep {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.id == 0
    }

    pub fn position(&self, b: usize, mu: usize, f: usize) -> Option<usize> {
        self.grading.iter().position(|l| *l == SectorLabel { b, mu, f })
    }

    /// Number of basis vectors in sector `(b, f)`.
    pub fn sector_dim(&self, b: usize, f: usize) -> usize {
        self.grading.iter().filter(|l| l.b == b && l.f == f).count()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub irreps: Vec<Irrep>,
    /// `dual[a]` is the irrep whose character is `chi_a o S`.
    pub dual: Vec<usize>,
    pub seed: u64,
    /// Random commutant elements drawn before the spectrum separated.
    pub attempts: usize,
}

impl Decomposition {
    pub fn rank(&self) -> usize {
        self.irreps.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim()).collect()
    }
}

/// `chi(u)` for a character vector.
pub fn character(chi: &[C64], u: &AlgElement) -> C64 {
    u.iter().map(|(i, z)| z * chi[i]).sum()
}

/// `<chi_V o S . chi_W, Lambda>`; equals `dim Hom(V, W)` for representations.
pub fn schur_pair(pairs: &HaarPairs, chi_v: &[C64], chi_w: &[C64]) -> C64 {
    pairs
        .terms
        .iter()
        .map(|(s1, j, z)| {
            let sv: C64 = s1.iter().map(|(k, w)| w * chi_v[*k]).sum();
            z * sv * chi_w[*j]
        })
        .sum()
}

/// Regular representation, orthonormal for `<u, v> = lambda(u^* v)`.
pub fn regular_rep(maps: &WhaMaps) -> Result<Rep> {
    let n = maps.dim;
    let gram = CMat::from_fn(n, n, |i, j| {
        let mut ti = vec![ZERO; n];
        let mut tj = vec![ZERO; n];
        ti[i] = c(1.0);
        tj[j] = c(1.0);
        let p = maps.mul_dense(&maps.star_dense(&ti), &tj);
        p.iter().zip(&maps.haar_measure).map(|(a, b)| a * b).sum()
    });
    let (r, ri) = sqrt_pd(&gram)?;
    let mut matrices = Vec::with_capacity(n);
    for i in 0..n {
        let l = maps.left_regular(&AlgElement::basis(n, i))?;
        matrices.push(&r * l * &ri);
    }
    Ok(Rep { matrices })
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    &m + m.adjoint()
}

/// Split `rho` by the eigenspaces of a random element of its commutant.
fn split(rho: &Rep, pairs: &HaarPairs, h: &CMat) -> Option<Vec<Rep>> {
    let x = hom::average(rho, rho, pairs, h);
    let (vals, vecs) = eigh(&x);
    let n = vals.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match groups.last_mut() {
            Some(g) if (vals[k] - vals[*g.last().expect("nonempty")]).abs() < CLUSTER_GAP => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let q = CMat::from_fn(n, g.len(), |r, j| vecs[(r, g[j])]);
        let sub = rho.restrict(&q);
        // invariance of the eigenspace
        let leak = rho
            .matrices
            .iter()
            .zip(&sub.matrices)
            .map(|(m, s)| max_abs(&(m * &q - &q * s)))
            .fold(0.0, f64::max);
        let chi = sub.character();
        let selfpair = schur_pair(pairs, &chi, &chi);
        if leak > 1e-8 || (selfpair - c(1.0)).norm() > 1e-6 {
            return None;
        }
        out.push(sub);
    }
    Some(out)
}

fn trivial_rep(alg: &AnnAlgebra) -> (Rep, Vec<SectorLabel>) {
    let rm = alg.module_rank();
    let matrices = alg
        .basis
        .iter()
        .map(|t| {
            let mut m = CMat::zeros(rm, rm);
            if t.a == t.b && t.c == t.d && t.alpha == t.beta {
                m[(t.c, t.a)] = c(alg.c_dims[t.x].sqrt());
            }
            m
        })
        .collect();
    let labels = (0..rm).map(|b| SectorLabel { b, mu: 0, f: b }).collect();
    (Rep { matrices }, labels)
}

/// Rotate `rho` into a basis adapted to the sectors `p_{b,f}`.
fn graded(alg: &AnnAlgebra, rho: &Rep) -> Result<(Rep, Vec<SectorLabel>)> {
    let rm = alg.module_rank();
    let d = rho.dim();
    let mut cols: Vec<CMat> = Vec::with_capacity(d);
    let mut labels = Vec::with_capacity(d);
    for b in 0..rm {
        for f in 0..rm {
            let p = &rho.matrices[alg.projector_index(b, f)];
            let (vals, vecs) = eigh(p);
            let mut mu = 0;
            for (k, v) in vals.iter().enumerate() {
                if *v > 0.5 {
                    let mut col = vecs.columns(k, 1).into_owned();
                    phase_fix(&mut col);
                    cols.push(col);
                    labels.push(SectorLabel { b, mu, f });
                    mu += 1;
                }
            }
        }
    }
    if cols.len() != d {
        return Err(Error::GradingMismatch(format!(
            "sector projectors cover {} of {d} dimensions",
            cols.len()
        )));
    }
    let q = CMat::from_fn(d, d, |r, j| cols[j][(r, 0)]);
    Ok((rho.restrict(&q), labels))
}

fn round_char(chi: &[C64]) -> Vec<(i64, i64)> {
    chi.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// All irreducible *-representations, graded, trivial one first.
pub fn decompose(alg: &AnnAlgebra, seed: u64) -> Result<Decomposition> {
    let maps = &alg.maps;
    let n = maps.dim;
    let pairs = HaarPairs::new(maps);
    let regular = regular_rep(maps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hs: Vec<CMat> = (0..=RETRY_BUDGET).map(|_| random_hermitian(&mut rng, n)).collect();

    let mut pieces = None;
    let mut attempts = 0;
    for h in &hs {
        attempts += 1;
        if let Some(p) = split(&regular, &pairs, h) {
            pieces = Some(p);
            break;
        }
    }
    let pieces = pieces.ok_or(Error::DegenerateSpectrum { retries: RETRY_BUDGET })?;

    // group into isomorphism classes
    let mut classes: Vec<(Rep, Vec<C64>, usize)> = Vec::new();
    for p in pieces {
        let chi = p.character();
        match classes
            .iter_mut()
            .find(|(_, kept, _)| schur_pair(&pairs, kept, &chi).re > 0.5)
        {
            Some(cl) => cl.2 += 1,
            None => classes.push((p, chi, 1)),
        }
    }
    let total: usize = classes.iter().map(|(r, _, _)| r.dim() * r.dim()).sum();
    if total != n {
        return Err(Error::DecompositionFailure(format!(
            "irrep dimensions squared sum to {total}, algebra has dimension {n}"
        )));
    }
    if let Some((r, _, m)) = classes.iter().find(|(r, _, m)| *m != r.dim()) {
        return Err(Error::DecompositionFailure(format!(
            "an irrep of dimension {} occurs {m} times in the regular representation",
            r.dim()
        )));
    }

    let trivial: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, (_, chi, _))| (character(chi, &maps.haar) - c(1.0)).norm() < 1e-6)
        .map(|(k, _)| k)
        .collect();
    if trivial.len() != 1 {
        return Err(Error::DecompositionFailure(format!(
            "{} irreps take value 1 on the Haar integral",
            trivial.len()
        )));
    }

    let mut built: Vec<(bool, Rep, Vec<SectorLabel>)> = Vec::with_capacity(classes.len());
    for (k, (rep, _, _)) in classes.iter().enumerate() {
        if k == trivial[0] {
            let (r, l) = trivial_rep(alg);
            built.push((true, r, l));
        } else {
            let (r, l) = graded(alg, rep)?;
            built.push((false, r, l));
        }
    }
    let mut keyed: Vec<_> = built
        .into_iter()
        .map(|(t, r, l)| {
            let chi = r.character();
            (t, r.dim(), l, round_char(&chi), r, chi)
        })
        .collect();
    keyed.sort_by(|x, y| match (x.0, y.0) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => (x.1, &x.2, &x.3).cmp(&(y.1, &y.2, &y.3)),
    });
    let irreps: Vec<Irrep> = keyed
        .into_iter()
        .enumerate()
        .map(|(id, (_, _, grading, _, rep, character))| Irrep {
            id,
            rep,
            grading,
            character,
        })
        .collect();

    let mut dual = Vec::with_capacity(irreps.len());
    for a in &irreps {
        let chi_s: Vec<C64> = (0..n)
            .map(|i| maps.antipode[i].iter().map(|(k, z)| z * a.character[*k]).sum())
            .collect();
        let found = irreps.iter().position(|b| {
            b.character
                .iter()
                .zip(&chi_s)
                .all(|(x, y)| (x - y).norm() < 1e-6)
        });
        match found {
            Some(b) => dual.push(b),
            None => {
                return Err(Error::DecompositionFailure(format!(
                    "no irrep has the character of the dual of irrep {}",
                    a.id
                )))
            }
        }
    }
    Ok(Decomposition {
        irreps,
        dual,
        seed,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annular::build_algebra;
    use crate::vecg::{gen_vecg, Cocycle, FiniteGroup};

    fn vecg(name: &str) -> AnnAlgebra {
        let g = FiniteGroup::by_name(name).unwrap();
        build_algebra(&gen_vecg(&g, &Cocycle::trivial(g.order())).unwrap()).unwrap()
    }

    #[test]
    fn z2_has_trivial_and_sign() {
        let alg = vecg("Z2");
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        assert_eq!(d.dims(), vec![1, 1]);
        let g = alg.index_of(&crate::annular::TubeLabel { a: 0, b: 0, c: 0, d: 0, x: 1, alpha: 0, beta: 0 });
        let sign = &d.irreps[1].character;
        assert!((sign[g.unwrap()] + c(1.0)).norm() < 1e-12);
        assert_eq!(d.dual, vec![0, 1]);
    }

    #[test]
    fn irreps_are_star_reps() {
        let alg = vecg("S3");
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        assert_eq!(d.dims(), vec![1, 1, 2]);
        for r in &d.irreps {
            assert!(r.rep.residuals(&alg.maps).max() < 1e-10);
        }
    }

    #[test]
    fn character_table_is_orthonormal() {
        let alg = vecg("Q8");
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        let pairs = HaarPairs::new(&alg.maps);
        for a in &d.irreps {
            for b in &d.irreps {
                let want = if a.id == b.id { 1.0 } else { 0.0 };
                assert!((schur_pair(&pairs, &a.character, &b.character) - c(want)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn reducible_pairs_to_two() {
        let alg = vecg("Z2");
        let d = decompose(&alg, DEFAULT_SEED).unwrap();
        let pairs = HaarPairs::new(&alg.maps);
        let sum = d.irreps[0].rep.direct_sum(&d.irreps[1].rep).character();
        assert!((schur_pair(&pairs, &sum, &sum) - c(2.0)).norm() < 1e-9);
    }

    #[test]
    fn seed_changes_nothing_observable() {
        let alg = vecg("S3");
        let a = decompose(&alg, 1).unwrap();
        let b = decompose(&alg, 2).unwrap();
        for (x, y) in a.irreps.iter().zip(&b.irreps) {
            let diff = x.character.iter().zip(&y.character).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-9);
        }
    }
}
