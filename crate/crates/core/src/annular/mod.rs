//! The module annular (tube) algebra `Ann(C, M)` and its weak Hopf structure.

mod wha;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

pub use wha::{verify_wha, AxiomCheck, WhaReport};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64, ZERO};
use crate::skeletal::{key, FTable, Family, FusionContext, ModuleData};

pub const PRUNE: f64 = 1e-12;

/// Basis tube: inner boundary `a` (bottom) and `b` (top), outer boundary `c`, `d`,
/// a `C`-strand `x` with `alpha: x > a -> c` and `beta: x > b -> d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TubeLabel {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub x: usize,
    pub alpha: usize,
    pub beta: usize,
}

/// Sparse element of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    dim: usize,
    coeffs: BTreeMap<usize, C64>,
}

impl AlgElement {
    pub fn zero(dim: usize) -> Self {
        AlgElement {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = AlgElement::zero(dim);
        e.coeffs.insert(i, c(1.0));
        e
    }

    pub fn from_dense(v: &[C64]) -> Self {
        let mut e = AlgElement::zero(v.len());
        for (i, z) in v.iter().enumerate() {
            if z.norm() > PRUNE {
                e.coeffs.insert(i, *z);
            }
        }
        e
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (usize, C64)>) -> Self {
        let mut v = vec![ZERO; dim];
        for (i, z) in terms {
            v[i] += z;
        }
        AlgElement::from_dense(&v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> C64 {
        self.coeffs.get(&i).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.coeffs.iter().map(|(i, z)| (*i, *z))
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim];
        for (i, z) in &self.coeffs {
            v[*i] = *z;
        }
        v
    }

    pub fn scale(&self, s: C64) -> Self {
        AlgElement::from_terms(self.dim, self.iter().map(|(i, z)| (i, z * s)))
    }

    pub fn add(&self, other: &AlgElement) -> Result<Self> {
        check_dim(self.dim, other)?;
        Ok(AlgElement::from_terms(self.dim, self.iter().chain(other.iter())))
    }

    pub fn sub(&self, other: &AlgElement) -> Result<Self> {
        self.add(&other.scale(c(-1.0)))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, z| m.max(z.norm()))
    }
}

fn check_dim(dim: usize, u: &AlgElement) -> Result<()> {
    if u.dim != dim {
        return Err(Error::AlgebraMismatch {
            expected: dim,
            found: u.dim,
        });
    }
    Ok(())
}

/// A formal sum `sum c t_i (x) t_j` of basis tensors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sweedler {
    pub terms: Vec<(usize, usize, C64)>,
}

impl Sweedler {
    /// The sum as explicit `(left, right)` pairs, coefficient folded into the left leg.
    pub fn pairs(&self, dim: usize) -> Vec<(AlgElement, AlgElement)> {
        self.terms
            .iter()
            .map(|&(i, j, z)| (AlgElement::basis(dim, i).scale(z), AlgElement::basis(dim, j)))
            .collect()
    }

    fn from_map(m: BTreeMap<(usize, usize), C64>) -> Self {
        Sweedler {
            terms: m
                .into_iter()
                .filter(|(_, z)| z.norm() > PRUNE)
                .map(|((i, j), z)| (i, j, z))
                .collect(),
        }
    }
}

/// Sparse column: list of `(basis index, coefficient)`.
pub type Sparse = Vec<(usize, C64)>;

/// Structure constants of the weak Hopf algebra.
#[derive(Clone, Debug)]
pub struct WhaMaps {
    pub dim: usize,
    pub module_rank: usize,
    /// `product[i * dim + j] = t_i t_j`, with `t_i` the outer tube.
    pub product: Vec<Sparse>,
    pub unit: AlgElement,
    pub coproduct: Vec<Sweedler>,
    pub counit: Vec<C64>,
    /// `antipode[i] = S(t_i)`.
    pub antipode: Vec<Sparse>,
    /// `star[i] = t_i^*`; extended antilinearly.
    pub star: Vec<Sparse>,
    pub haar: AlgElement,
    pub haar_measure: Vec<C64>,
    pub grouplike: AlgElement,
    pub grouplike_inv: AlgElement,
}

impl WhaMaps {
    fn check(&self, u: &AlgElement) -> Result<()> {
        check_dim(self.dim, u)
    }

    pub(crate) fn mul_dense(&self, u: &[C64], v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, ui) in u.iter().enumerate() {
            if *ui == ZERO {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if *vj == ZERO {
                    continue;
                }
                for &(k, z) in &self.product[i * n + j] {
                    out[k] += ui * vj * z;
                }
            }
        }
        out
    }

    pub(crate) fn linear_dense(cols: &[Sparse], u: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; u.len()];
        for (i, ui) in u.iter().enumerate() {
            if *ui == ZERO {
                continue;
            }
            for &(k, z) in &cols[i] {
                out[k] += ui * z;
            }
        }
        out
    }

    pub(crate) fn antipode_dense(&self, u: &[C64]) -> Vec<C64> {
        WhaMaps::linear_dense(&self.antipode, u)
    }

    pub(crate) fn star_dense(&self, u: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = u.iter().map(|z| z.conj()).collect();
        WhaMaps::linear_dense(&self.star, &conj)
    }

    pub(crate) fn counit_dense(&self, u: &[C64]) -> C64 {
        u.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn multiply(&self, u: &AlgElement, v: &AlgElement) -> Result<AlgElement> {
        self.check(u)?;
        self.check(v)?;
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, ui) in u.iter() {
            for (j, vj) in v.iter() {
                for &(k, z) in &self.product[i * n + j] {
                    out[k] += ui * vj * z;
                }
            }
        }
        Ok(AlgElement::from_dense(&out))
    }

    pub fn coproduct(&self, u: &AlgElement) -> Result<Sweedler> {
        self.check(u)?;
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (i, ui) in u.iter() {
            for &(k, l, z) in &self.coproduct[i].terms {
                *acc.entry((k, l)).or_insert(ZERO) += ui * z;
            }
        }
        Ok(Sweedler::from_map(acc))
    }

    pub fn counit(&self, u: &AlgElement) -> Result<C64> {
        self.check(u)?;
        Ok(u.iter().map(|(i, z)| z * self.counit[i]).sum())
    }

    pub fn antipode(&self, u: &AlgElement) -> Result<AlgElement> {
        self.check(u)?;
        Ok(AlgElement::from_dense(&self.antipode_dense(&u.to_dense())))
    }

    pub fn star(&self, u: &AlgElement) -> Result<AlgElement> {
        self.check(u)?;
        Ok(AlgElement::from_dense(&self.star_dense(&u.to_dense())))
    }

    pub fn haar(&self) -> AlgElement {
        self.haar.clone()
    }

    pub fn haar_measure(&self, u: &AlgElement) -> Result<C64> {
        self.check(u)?;
        Ok(u.iter().map(|(i, z)| z * self.haar_measure[i]).sum())
    }

    pub fn grouplike(&self, inverse: bool) -> AlgElement {
        if inverse {
            self.grouplike_inv.clone()
        } else {
            self.grouplike.clone()
        }
    }

    /// `eps(1_(1) x) 1_(2)`.
    pub(crate) fn pi_left(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, j, z) in self.unit_coproduct() {
            let mut ti = vec![ZERO; self.dim];
            ti[i] = c(1.0);
            out[j] += z * self.counit_dense(&self.mul_dense(&ti, x));
        }
        out
    }

    /// `1_(1) eps(x 1_(2))`.
    pub(crate) fn pi_right(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        for (i, j, z) in self.unit_coproduct() {
            let mut tj = vec![ZERO; self.dim];
            tj[j] = c(1.0);
            out[i] += z * self.counit_dense(&self.mul_dense(x, &tj));
        }
        out
    }

    pub(crate) fn unit_coproduct(&self) -> Vec<(usize, usize, C64)> {
        self.coproduct(&self.unit).expect("unit belongs to the algebra").terms
    }

    pub fn pi_l(&self, u: &AlgElement) -> Result<AlgElement> {
        self.check(u)?;
        Ok(AlgElement::from_dense(&self.pi_left(&u.to_dense())))
    }

    pub fn pi_r(&self, u: &AlgElement) -> Result<AlgElement> {
        self.check(u)?;
        Ok(AlgElement::from_dense(&self.pi_right(&u.to_dense())))
    }

    /// Matrix of left multiplication by `u` in the tube basis.
    pub fn left_regular(&self, u: &AlgElement) -> Result<CMat> {
        self.check(u)?;
        let n = self.dim;
        let mut m = CMat::zeros(n, n);
        for (i, ui) in u.iter() {
            for j in 0..n {
                for &(k, z) in &self.product[i * n + j] {
                    m[(k, j)] += ui * z;
                }
            }
        }
        Ok(m)
    }
}

/// The tube algebra of a module category, with its picture basis.
#[derive(Clone, Debug)]
pub struct AnnAlgebra {
    pub basis: Vec<TubeLabel>,
    index: HashMap<TubeLabel, usize>,
    pub maps: WhaMaps,
    pub c_dims: Vec<f64>,
    pub m_dims: Vec<f64>,
}

impl AnnAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn module_rank(&self) -> usize {
        self.maps.module_rank
    }

    pub fn index_of(&self, t: &TubeLabel) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn element(&self, t: &TubeLabel) -> Option<AlgElement> {
        self.index_of(t).map(|i| AlgElement::basis(self.dim(), i))
    }

    /// Index of the idempotent `p_{a,b} = tube(a,b -> a,b; unit)`.
    pub fn projector_index(&self, a: usize, b: usize) -> usize {
        self.index[&TubeLabel {
            a,
            b,
            c: a,
            d: b,
            x: 0,
            alpha: 0,
            beta: 0,
        }]
    }

    /// Structure constants as JSON, for debugging.
    pub fn dump_json(&self) -> serde_json::Value {
        let n = self.dim();
        let sparse = |s: &Sparse| -> Vec<serde_json::Value> {
            s.iter()
                .map(|(k, z)| serde_json::json!([k, [z.re, z.im]]))
                .collect()
        };
        let product: Vec<_> = (0..n * n)
            .filter(|ij| !self.maps.product[*ij].is_empty())
            .map(|ij| serde_json::json!({"outer": ij / n, "inner": ij % n, "terms": sparse(&self.maps.product[ij])}))
            .collect();
        serde_json::json!({
            "basis": self.basis,
            "product": product,
            "counit": self.maps.counit.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "antipode": self.maps.antipode.iter().map(sparse).collect::<Vec<_>>(),
            "star": self.maps.star.iter().map(sparse).collect::<Vec<_>>(),
        })
    }
}

/// Build `Ann(C, M)` with all of its weak Hopf structure maps.
pub fn build_algebra(module: &ModuleData) -> Result<AnnAlgebra> {
    let ctx = FusionContext {
        c: &module.category.fusion,
        left: &module.action,
        right: None,
        d: None,
    };
    let f1 = FTable::with_inverse(&ctx, Family::F1, &module.f1)?;
    let rc = module.category.rank();
    let rm = module.rank;
    let nm = |x: usize, a: usize, cc: usize| module.action.get(x, a, cc);
    let dc = &module.category.fp_dims;
    let mm = &module.dims;
    let dual = module.category.fusion.duals();
    let rk = rm as f64;

    let mut basis = Vec::new();
    for a in 0..rm {
        for b in 0..rm {
            for cc in 0..rm {
                for d in 0..rm {
                    for x in 0..rc {
                        for alpha in 0..nm(x, a, cc) {
                            for beta in 0..nm(x, b, d) {
                                basis.push(TubeLabel { a, b, c: cc, d, x, alpha, beta });
                            }
                        }
                    }
                }
            }
        }
    }
    let n = basis.len();
    let index: HashMap<TubeLabel, usize> = basis.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let idx = |a, b, cc, d, x, alpha, beta| index[&TubeLabel { a, b, c: cc, d, x, alpha, beta }];

    let mut by_inner: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in basis.iter().enumerate() {
        by_inner.entry((t.a, t.b)).or_default().push(i);
    }

    let mut product = vec![Sparse::new(); n * n];
    for (j, t) in basis.iter().enumerate() {
        let Some(outers) = by_inner.get(&(t.c, t.d)) else { continue };
        for &i in outers {
            let tp = basis[i];
            let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
            for y in 0..rc {
                for ze in 0..module.category.fusion.n(tp.x, t.x, y) {
                    let w = (dc[t.x] * dc[tp.x] / dc[y]).sqrt();
                    for mu in 0..nm(y, t.a, tp.c) {
                        let fa = f1.f(&key(tp.x, t.x, t.a, tp.c, ze, y, mu, t.alpha, t.c, tp.alpha));
                        if fa == ZERO {
                            continue;
                        }
                        for nu in 0..nm(y, t.b, tp.d) {
                            let fb = f1.fi(&key(tp.x, t.x, t.b, tp.d, ze, y, nu, t.beta, t.d, tp.beta));
                            let k = idx(t.a, t.b, tp.c, tp.d, y, mu, nu);
                            *acc.entry(k).or_insert(ZERO) += fa * fb * w;
                        }
                    }
                }
            }
            product[i * n + j] = acc.into_iter().filter(|(_, z)| z.norm() > PRUNE).collect();
        }
    }

    let unit = AlgElement::from_terms(
        n,
        (0..rm).flat_map(|a| (0..rm).map(move |b| (a, b))).map(|(a, b)| (idx(a, b, a, b, 0, 0, 0), c(1.0))),
    );

    let mut coproduct = Vec::with_capacity(n);
    for t in &basis {
        let w = 1.0 / dc[t.x].sqrt();
        let mut acc = BTreeMap::new();
        for e in 0..rm {
            for f in 0..rm {
                for mu in 0..nm(t.x, e, f) {
                    let left = idx(e, t.b, f, t.d, t.x, mu, t.beta);
                    let right = idx(t.a, e, t.c, f, t.x, t.alpha, mu);
                    *acc.entry((left, right)).or_insert(ZERO) += c(w);
                }
            }
        }
        coproduct.push(Sweedler::from_map(acc));
    }

    let counit: Vec<C64> = basis
        .iter()
        .map(|t| {
            if t.alpha == t.beta && t.a == t.b && t.c == t.d {
                c(dc[t.x].sqrt())
            } else {
                ZERO
            }
        })
        .collect();

    let mut antipode = Vec::with_capacity(n);
    let mut star = Vec::with_capacity(n);
    for t in &basis {
        let xb = dual[t.x];
        let mut s = BTreeMap::new();
        let ws = mm[t.b] * dc[t.x] / mm[t.d];
        for mu in 0..nm(xb, t.d, t.b) {
            for nu in 0..nm(xb, t.c, t.a) {
                let v = ws
                    * f1.f(&key(xb, t.x, t.a, t.a, 0, 0, 0, t.alpha, t.c, nu))
                    * f1.fi(&key(xb, t.x, t.b, t.b, 0, 0, 0, t.beta, t.d, mu));
                *s.entry(idx(t.d, t.c, t.b, t.a, xb, mu, nu)).or_insert(ZERO) += v;
            }
        }
        antipode.push(s.into_iter().filter(|(_, z): &(usize, C64)| z.norm() > PRUNE).collect());
        let mut st = BTreeMap::new();
        let wt = dc[t.x] * (mm[t.a] * mm[t.b] / (mm[t.c] * mm[t.d])).sqrt();
        for mu in 0..nm(xb, t.c, t.a) {
            for nu in 0..nm(xb, t.d, t.b) {
                let v = wt
                    * f1.f(&key(xb, t.x, t.b, t.b, 0, 0, 0, t.beta, t.d, nu))
                    * f1.fi(&key(xb, t.x, t.a, t.a, 0, 0, 0, t.alpha, t.c, mu));
                *st.entry(idx(t.c, t.d, t.a, t.b, xb, mu, nu)).or_insert(ZERO) += v;
            }
        }
        star.push(st.into_iter().filter(|(_, z): &(usize, C64)| z.norm() > PRUNE).collect());
    }

    let haar = AlgElement::from_terms(
        n,
        basis.iter().enumerate().filter_map(|(i, t)| {
            (t.a == t.b && t.c == t.d && t.alpha == t.beta)
                .then(|| (i, c(dc[t.x].sqrt() / (mm[t.a] * mm[t.c] * rk))))
        }),
    );
    let haar_measure: Vec<C64> = basis
        .iter()
        .map(|t| {
            if t.alpha == 0 && t.beta == 0 && t.x == 0 && t.a == t.c && t.b == t.d {
                c(rk * mm[t.a] * mm[t.a])
            } else {
                ZERO
            }
        })
        .collect();
    let pairs = || (0..rm).flat_map(|a| (0..rm).map(move |b| (a, b)));
    let grouplike = AlgElement::from_terms(n, pairs().map(|(a, b)| (idx(a, b, a, b, 0, 0, 0), c(mm[a] / mm[b]))));
    let grouplike_inv = AlgElement::from_terms(n, pairs().map(|(a, b)| (idx(a, b, a, b, 0, 0, 0), c(mm[b] / mm[a]))));

    Ok(AnnAlgebra {
        basis,
        index,
        maps: WhaMaps {
            dim: n,
            module_rank: rm,
            product,
            unit,
            coproduct,
            counit,
            antipode,
            star,
            haar,
            haar_measure,
            grouplike,
            grouplike_inv,
        },
        c_dims: dc.clone(),
        m_dims: mm.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::linalg::c;

    #[test]
    fn dimensions() {
        let cases = [
            (bundled::vecg_module("Z2").unwrap(), 2),
            (bundled::vecg_module("S3").unwrap(), 6),
            (bundled::regular_module(&bundled::vecg_module("Z2").unwrap().category).unwrap(), 8),
            (bundled::regular_module(&bundled::fibonacci()).unwrap(), 13),
        ];
        for (m, dim) in cases {
            assert_eq!(build_algebra(&m).unwrap().dim(), dim);
        }
    }

    #[test]
    fn z2_haar_is_the_average() {
        let alg = build_algebra(&bundled::vecg_module("Z2").unwrap()).unwrap();
        let lam = alg.maps.haar().to_dense();
        for z in lam {
            assert!((z - c(0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn group_tubes_multiply_like_the_group() {
        let g = crate::vecg::FiniteGroup::symmetric3();
        let alg = build_algebra(&bundled::vecg_module("S3").unwrap()).unwrap();
        let t = |x| alg.element(&TubeLabel { a: 0, b: 0, c: 0, d: 0, x, alpha: 0, beta: 0 }).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                let p = alg.maps.multiply(&t(x), &t(y)).unwrap();
                assert_eq!(p.sub(&t(g.mul(x, y))).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn identity_antipode_is_rejected() {
        let alg = build_algebra(&bundled::vecg_module("Z3").unwrap()).unwrap();
        assert!(wha::verify_wha(&alg.maps, 1e-9).pass);
        let mut maps = alg.maps.clone();
        maps.antipode = (0..maps.dim).map(|i| vec![(i, c(1.0))]).collect();
        let r = wha::verify_wha(&maps, 1e-9);
        assert!(!r.pass);
        assert!(r.first_failure.unwrap().contains("antipode"));
    }
}
