use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::fusion::{FusionRules, Tensor3};
use crate::error::{Error, Result};
use crate::linalg::{inverse, CMat, C64, ZERO};

/// Which label set a strand belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Space {
    C,
    M,
    D,
}

impl Space {
    /// Label set of the fusion product of a strand in `self` with one in `other`.
    pub fn prod(self, other: Space) -> Space {
        match (self, other) {
            (Space::C, Space::C) => Space::C,
            (Space::D, Space::D) => Space::D,
            _ => Space::M,
        }
    }
}

/// The five associator tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    F0,
    F1,
    F2,
    F3,
    F4,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::F0, Family::F1, Family::F2, Family::F3, Family::F4];

    /// Label sets of the three incoming strands `a, b, c`.
    pub fn inputs(self) -> [Space; 3] {
        use Space::*;
        match self {
            Family::F0 => [C, C, C],
            Family::F1 => [C, C, M],
            Family::F2 => [C, M, D],
            Family::F3 => [M, D, D],
            Family::F4 => [D, D, D],
        }
    }

    pub fn from_inputs(s: [Space; 3]) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.inputs() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::F0 => "f0",
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index of one F-symbol entry: `F[a,b,c,d; alpha,e,beta; mu,f,nu]`.
///
/// Rows of a block are `(alpha, e, beta)` with `alpha: a*b -> e`, `beta: e*c -> d`;
/// columns are `(mu, f, nu)` with `mu: b*c -> f`, `nu: a*f -> d`.
/// Multiplicity indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FKey {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub alpha: usize,
    pub e: usize,
    pub beta: usize,
    pub mu: usize,
    pub f: usize,
    pub nu: usize,
}

impl FKey {
    pub fn new(block: [usize; 4], row: [usize; 3], col: [usize; 3]) -> Self {
        FKey {
            a: block[0],
            b: block[1],
            c: block[2],
            d: block[3],
            alpha: row[0],
            e: row[1],
            beta: row[2],
            mu: col[0],
            f: col[1],
            nu: col[2],
        }
    }

    pub fn block(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn row(&self) -> [usize; 3] {
        [self.alpha, self.e, self.beta]
    }

    pub fn col(&self) -> [usize; 3] {
        [self.mu, self.f, self.nu]
    }
}

/// Formats as the file key `a,b,c,d|α,e,β|μ,f,ν` with 1-based multiplicities.
impl fmt::Display for FKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}|{},{},{}|{},{},{}",
            self.a,
            self.b,
            self.c,
            self.d,
            self.alpha + 1,
            self.e,
            self.beta + 1,
            self.mu + 1,
            self.f,
            self.nu + 1
        )
    }
}

impl std::str::FromStr for FKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let nums: Vec<usize> = s
            .split(['|', ','])
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad key {s:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        let groups: Vec<usize> = s.split('|').map(|g| g.split(',').count()).collect();
        if nums.len() != 10 || groups != [4, 3, 3] {
            return Err(format!("bad key {s:?}: expected a,b,c,d|α,e,β|μ,f,ν"));
        }
        let m = |i: usize| {
            nums[i]
                .checked_sub(1)
                .ok_or_else(|| format!("bad key {s:?}: multiplicities are 1-based"))
        };
        Ok(FKey::new(
            [nums[0], nums[1], nums[2], nums[3]],
            [m(4)?, nums[5], m(6)?],
            [m(7)?, nums[8], m(9)?],
        ))
    }
}

/// Sparse F-symbol tensor. An empty tensor means "not provided".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FSymbols {
    entries: BTreeMap<FKey, C64>,
}

impl FSymbols {
    pub fn new() -> Self {
        FSymbols::default()
    }

    pub fn insert(&mut self, key: FKey, value: C64) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &FKey) -> C64 {
        self.entries.get(key).copied().unwrap_or(ZERO)
    }

    pub fn contains(&self, key: &FKey) -> bool {
        self.entries.contains_key(key)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FKey, &C64)> {
        self.entries.iter()
    }

    pub fn has_block(&self, block: [usize; 4]) -> bool {
        let lo = FKey::new(block, [0; 3], [0; 3]);
        self.entries
            .range(lo..)
            .next()
            .is_some_and(|(k, _)| k.block() == block)
    }

    /// Write a dense block back, dropping entries with modulus below `prune`.
    pub fn set_block(&mut self, block: [usize; 4], layout: &Layout, m: &CMat, prune: f64) {
        for (i, r) in layout.rows.iter().enumerate() {
            for (j, cc) in layout.cols.iter().enumerate() {
                let key = FKey::new(block, *r, *cc);
                if m[(i, j)].norm() > prune {
                    self.entries.insert(key, m[(i, j)]);
                } else {
                    self.entries.remove(&key);
                }
            }
        }
    }
}

impl FromIterator<(FKey, C64)> for FSymbols {
    fn from_iter<T: IntoIterator<Item = (FKey, C64)>>(iter: T) -> Self {
        FSymbols {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Row and column labels of one F block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    pub rows: Vec<[usize; 3]>,
    pub cols: Vec<[usize; 3]>,
}

impl Layout {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }
}

/// Multiplicity lookups for all four kinds of fusion space.
#[derive(Clone, Copy)]
pub struct FusionContext<'a> {
    pub c: &'a FusionRules,
    pub left: &'a Tensor3,
    pub right: Option<&'a Tensor3>,
    pub d: Option<&'a FusionRules>,
}

impl<'a> FusionContext<'a> {
    pub fn rank(&self, s: Space) -> usize {
        match s {
            Space::C => self.c.rank(),
            Space::M => self.left.dims()[1],
            Space::D => self.d.map_or(0, |d| d.rank()),
        }
    }

    /// `dim Hom(x*y, z)` where `x` lives in `s` and `y` in `t`.
    #[inline]
    pub fn n(&self, s: Space, t: Space, x: usize, y: usize, z: usize) -> usize {
        match (s, t) {
            (Space::C, Space::C) => self.c.n(x, y, z),
            (Space::C, Space::M) => self.left.get(x, y, z),
            (Space::M, Space::D) => self.right.map_or(0, |r| r.get(x, y, z)),
            (Space::D, Space::D) => self.d.map_or(0, |d| d.n(x, y, z)),
            _ => 0,
        }
    }

    pub fn layout(&self, fam: Family, block: [usize; 4]) -> Layout {
        let [sa, sb, sc] = fam.inputs();
        let se = sa.prod(sb);
        let sf = sb.prod(sc);
        let [a, b, c, d] = block;
        let mut out = Layout::default();
        for e in 0..self.rank(se) {
            for al in 0..self.n(sa, sb, a, b, e) {
                for be in 0..self.n(se, sc, e, c, d) {
                    out.rows.push([al, e, be]);
                }
            }
        }
        for f in 0..self.rank(sf) {
            for mu in 0..self.n(sb, sc, b, c, f) {
                for nu in 0..self.n(sa, sf, a, f, d) {
                    out.cols.push([mu, f, nu]);
                }
            }
        }
        out
    }

    /// All blocks `(a,b,c,d)` of a family with a nonempty layout.
    pub fn blocks(&self, fam: Family) -> Vec<([usize; 4], Layout)> {
        let [sa, sb, sc] = fam.inputs();
        let sd = sa.prod(sb).prod(sc);
        let mut out = Vec::new();
        for a in 0..self.rank(sa) {
            for b in 0..self.rank(sb) {
                for c in 0..self.rank(sc) {
                    for d in 0..self.rank(sd) {
                        let l = self.layout(fam, [a, b, c, d]);
                        if !l.is_empty() {
                            out.push(([a, b, c, d], l));
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether every label of the key is within range and every vertex allowed.
    pub fn allows(&self, fam: Family, k: &FKey) -> bool {
        let [sa, sb, sc] = fam.inputs();
        let se = sa.prod(sb);
        let sf = sb.prod(sc);
        let sd = se.prod(sc);
        k.a < self.rank(sa)
            && k.b < self.rank(sb)
            && k.c < self.rank(sc)
            && k.d < self.rank(sd)
            && k.e < self.rank(se)
            && k.f < self.rank(sf)
            && k.alpha < self.n(sa, sb, k.a, k.b, k.e)
            && k.beta < self.n(se, sc, k.e, k.c, k.d)
            && k.mu < self.n(sb, sc, k.b, k.c, k.f)
            && k.nu < self.n(sa, sf, k.a, k.f, k.d)
    }
}

pub fn block_matrix(sym: &FSymbols, block: [usize; 4], layout: &Layout) -> CMat {
    CMat::from_fn(layout.rows.len(), layout.cols.len(), |i, j| {
        sym.get(&FKey::new(block, layout.rows[i], layout.cols[j]))
    })
}

/// F-symbols of one family together with the lowered (inverse) symbols.
///
/// `inv(k)` is the entry `(F^-1)[col, row]` of the block, so that
/// `sum_{col} F[row; col] inv[row'; col] = delta(row, row')`.
pub struct FTable<'a> {
    pub family: Family,
    sym: &'a FSymbols,
    inv: BTreeMap<FKey, C64>,
}

impl<'a> FTable<'a> {
    /// Checks that every allowed block is present; no inverse.
    pub fn forward(ctx: &FusionContext, family: Family, sym: &'a FSymbols) -> Result<Self> {
        for (block, _) in ctx.blocks(family) {
            if !sym.has_block(block) {
                return Err(Error::MissingBlock {
                    family: family.to_string(),
                    block,
                });
            }
        }
        Ok(FTable {
            family,
            sym,
            inv: BTreeMap::new(),
        })
    }

    pub fn with_inverse(ctx: &FusionContext, family: Family, sym: &'a FSymbols) -> Result<Self> {
        let mut t = FTable::forward(ctx, family, sym)?;
        for (block, layout) in ctx.blocks(family) {
            if !layout.is_square() {
                return Err(Error::BlockShape {
                    family: family.to_string(),
                    block,
                    rows: layout.rows.len(),
                    cols: layout.cols.len(),
                });
            }
            let m = block_matrix(sym, block, &layout);
            let mi = inverse(&m).ok_or_else(|| Error::SingularBlock {
                family: family.to_string(),
                block,
            })?;
            for (i, r) in layout.rows.iter().enumerate() {
                for (j, cc) in layout.cols.iter().enumerate() {
                    t.inv.insert(FKey::new(block, *r, *cc), mi[(j, i)]);
                }
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn f(&self, k: &FKey) -> C64 {
        self.sym.get(k)
    }

    #[inline]
    pub fn fi(&self, k: &FKey) -> C64 {
        self.inv.get(k).copied().unwrap_or(ZERO)
    }
}

/// Shorthand for building keys in hot loops.
#[inline]
pub(crate) fn key(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    alpha: usize,
    e: usize,
    beta: usize,
    mu: usize,
    f: usize,
    nu: usize,
) -> FKey {
    FKey {
        a,
        b,
        c,
        d,
        alpha,
        e,
        beta,
        mu,
        f,
        nu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_text_round_trip() {
        let k = FKey::new([1, 0, 2, 3], [0, 1, 1], [2, 0, 0]);
        let s = k.to_string();
        assert_eq!(s, "1,0,2,3|1,1,2|3,0,1");
        assert_eq!(s.parse::<FKey>().unwrap(), k);
    }

    #[test]
    fn zero_multiplicity_is_rejected() {
        assert!("0,0,0,0|0,0,1|1,0,1".parse::<FKey>().is_err());
        assert!("0,0,0|1,0,1|1,0,1".parse::<FKey>().is_err());
    }

    #[test]
    fn family_spaces() {
        assert_eq!(Family::from_inputs([Space::C, Space::M, Space::D]), Some(Family::F2));
        assert_eq!(Space::C.prod(Space::M), Space::M);
        assert_eq!(Space::M.prod(Space::D), Space::M);
    }
}
