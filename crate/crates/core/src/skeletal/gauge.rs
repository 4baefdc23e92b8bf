use std::collections::BTreeMap;

use super::fsym::{block_matrix, Family, FusionContext, Layout, Space};
use super::BimoduleData;
use crate::error::{Error, Result};
use crate::linalg::{identity_residual, CMat};

/// Kind of fusion space `Hom(x*y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    /// `C x C -> C`
    CC,
    /// `C > M -> M`
    CM,
    /// `M < D -> M`
    MD,
    /// `D x D -> D`
    DD,
}

impl Vertex {
    fn of(s: Space, t: Space) -> Vertex {
        match (s, t) {
            (Space::C, Space::C) => Vertex::CC,
            (Space::C, Space::M) => Vertex::CM,
            (Space::M, Space::D) => Vertex::MD,
            (Space::D, Space::D) => Vertex::DD,
            _ => unreachable!("no fusion space between {s:?} and {t:?}"),
        }
    }
}

/// Unitary basis changes of fusion spaces; spaces not listed keep their basis.
///
/// The new basis vector `i` of `Hom(x*y, z)` is `sum_j U[i, j] old_j`.
#[derive(Clone, Debug, Default)]
pub struct GaugeTransform {
    mats: BTreeMap<(Vertex, [usize; 3]), CMat>,
}

impl GaugeTransform {
    pub fn identity() -> Self {
        GaugeTransform::default()
    }

    pub fn set(&mut self, vertex: Vertex, labels: [usize; 3], u: CMat) {
        self.mats.insert((vertex, labels), u);
    }

    pub fn get(&self, vertex: Vertex, labels: [usize; 3]) -> Option<&CMat> {
        self.mats.get(&(vertex, labels))
    }

    fn validate(&self, ctx: &FusionContext) -> Result<()> {
        for ((v, [x, y, z]), u) in &self.mats {
            let n = match v {
                Vertex::CC => ctx.n(Space::C, Space::C, *x, *y, *z),
                Vertex::CM => ctx.n(Space::C, Space::M, *x, *y, *z),
                Vertex::MD => ctx.n(Space::M, Space::D, *x, *y, *z),
                Vertex::DD => ctx.n(Space::D, Space::D, *x, *y, *z),
            };
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "gauge on {v:?} {:?} is {}x{}, space has dimension {n}",
                    [x, y, z],
                    u.nrows(),
                    u.ncols()
                )));
            }
            if identity_residual(&(u * u.adjoint())) > 1e-9 {
                return Err(Error::InvalidData(format!("gauge on {v:?} {:?} is not unitary", [x, y, z])));
            }
        }
        Ok(())
    }

    fn factor(&self, v: Vertex, labels: [usize; 3], i: usize, j: usize) -> crate::linalg::C64 {
        match self.mats.get(&(v, labels)) {
            Some(u) => u[(i, j)],
            None => crate::linalg::c(if i == j { 1.0 } else { 0.0 }),
        }
    }

    fn block_gauges(&self, fam: Family, block: [usize; 4], layout: &Layout) -> (CMat, CMat) {
        let [sa, sb, sc] = fam.inputs();
        let se = sa.prod(sb);
        let sf = sb.prod(sc);
        let [a, b, c, d] = block;
        let (vab, vec_, vbc, vaf) = (Vertex::of(sa, sb), Vertex::of(se, sc), Vertex::of(sb, sc), Vertex::of(sa, sf));
        let rows = &layout.rows;
        let cols = &layout.cols;
        let ul = CMat::from_fn(rows.len(), rows.len(), |i, j| {
            let [al, e, be] = rows[i];
            let [al0, e0, be0] = rows[j];
            if e != e0 {
                return crate::linalg::ZERO;
            }
            self.factor(vab, [a, b, e], al, al0) * self.factor(vec_, [e, c, d], be, be0)
        });
        let ur = CMat::from_fn(cols.len(), cols.len(), |i, j| {
            let [mu, f, nu] = cols[i];
            let [mu0, f0, nu0] = cols[j];
            if f != f0 {
                return crate::linalg::ZERO;
            }
            self.factor(vbc, [b, c, f], mu, mu0) * self.factor(vaf, [a, f, d], nu, nu0)
        });
        (ul, ur)
    }
}

/// Change the basis of every fusion space; each F block becomes `U_L F U_R^dag`.
pub fn apply_gauge(data: &BimoduleData, g: &GaugeTransform) -> Result<BimoduleData> {
    let ctx = data.context();
    g.validate(&ctx)?;
    let mut out = data.clone();
    for fam in Family::ALL {
        if !data.has(fam) {
            continue;
        }
        let sym = data.fsym(fam).expect("present");
        let target = out.fsym_mut(fam).expect("present");
        for (block, layout) in ctx.blocks(fam) {
            let (ul, ur) = g.block_gauges(fam, block, &layout);
            let m = ul * block_matrix(sym, block, &layout) * ur.adjoint();
            target.set_block(block, &layout, &m, 0.0);
        }
    }
    Ok(out)
}
