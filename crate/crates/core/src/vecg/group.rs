use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use crate::skeletal::{
    key, FSymbols, FusionRules, ModuleData, SkeletalCategory, Tensor3,
};

/// A finite group given by its multiplication table, identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupFile", into = "GroupFile")]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    name: String,
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupFile> for FiniteGroup {
    type Error = Error;

    fn try_from(f: GroupFile) -> Result<Self> {
        FiniteGroup::from_table(&f.name, f.table)
    }
}

impl From<FiniteGroup> for GroupFile {
    fn from(g: FiniteGroup) -> Self {
        GroupFile {
            name: g.name,
            table: g.table,
        }
    }
}

impl FiniteGroup {
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup(format!("{name}: table is not an n x n table over 0..n")));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup(format!("{name}: 0 is not the identity")));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let inv: Vec<usize> = (0..n).filter(|&h| table[g][h] == 0).collect();
            if inv.len() != 1 || table[inv[0]][g] != 0 {
                return Err(Error::InvalidGroup(format!("{name}: element {g} has no unique inverse")));
            }
            inverse[g] = inv[0];
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(Error::InvalidGroup(format!(
                            "{name}: associativity fails at ({g},{h},{k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            table,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        FiniteGroup::from_table(&format!("Z{n}"), table).expect("cyclic group")
    }

    /// `Z2 x Z2`; element `(a, b)` has index `2a + b`.
    pub fn klein() -> Self {
        let table = (0..4).map(|g| (0..4).map(|h| g ^ h).collect()).collect();
        FiniteGroup::from_table("Z2xZ2", table).expect("klein group")
    }

    fn permutations(name: &str, n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        // all permutations in lexicographic order, identity first
        let mut cur: Vec<usize> = (0..n).collect();
        while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
            perms.push(cur.clone());
        }
        let pos = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| pos(&(0..n).map(|i| p[q[i]]).collect()))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(name, table).expect("symmetric group")
    }

    pub fn symmetric3() -> Self {
        FiniteGroup::permutations("S3", 3)
    }

    pub fn symmetric4() -> Self {
        FiniteGroup::permutations("S4", 4)
    }

    /// Dihedral group of the square; `r^k s^j` has index `k + 4j`.
    pub fn dihedral4() -> Self {
        let table = (0..8)
            .map(|g| {
                (0..8)
                    .map(|h| {
                        let (k, j) = (g % 4, g / 4);
                        let (l, m) = (h % 4, h / 4);
                        let rot = if j == 0 { k + l } else { k + 4 - l } % 4;
                        rot + 4 * ((j + m) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("D4", table).expect("dihedral group")
    }

    /// Quaternion group, elements ordered `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit quaternions as (w, x, y, z)
        let units: [[i32; 4]; 8] = [
            [1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 0],
            [0, 0, 1, 0], [0, 0, -1, 0], [0, 0, 0, 1], [0, 0, 0, -1],
        ];
        let mul = |p: [i32; 4], q: [i32; 4]| {
            [
                p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
                p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
                p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
                p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
            ]
        };
        let table = units
            .iter()
            .map(|p| {
                units
                    .iter()
                    .map(|q| units.iter().position(|u| *u == mul(*p, *q)).expect("closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("Q8", table).expect("quaternion group")
    }

    /// One of the bundled groups: `Zn`, `Z2xZ2`, `S3`, `S4`, `D4`, `Q8`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "Z2xZ2" | "Z2×Z2" | "V4" => Ok(FiniteGroup::klein()),
            "S3" => Ok(FiniteGroup::symmetric3()),
            "S4" => Ok(FiniteGroup::symmetric4()),
            "D4" => Ok(FiniteGroup::dihedral4()),
            "Q8" => Ok(FiniteGroup::quaternion()),
            _ => match name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n >= 1 => Ok(FiniteGroup::cyclic(n)),
                _ => Err(Error::InvalidGroup(format!("unknown group {name:?}"))),
            },
        }
    }

    pub fn fusion_rules(&self) -> FusionRules {
        FusionRules::from_table(&self.table, &self.inverse).expect("group fusion rules are unital")
    }
}

/// Normalized 2-cocycle with values in the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    values: Vec<Vec<C64>>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CocycleFile {
    pub values: Vec<Vec<[f64; 2]>>,
}

impl Cocycle {
    pub fn trivial(order: usize) -> Self {
        Cocycle {
            values: vec![vec![c(1.0); order]; order],
        }
    }

    pub fn new(group: &FiniteGroup, values: Vec<Vec<C64>>) -> Result<Self> {
        let n = group.order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCocycle(format!("expected a {n} x {n} table")));
        }
        for g in 0..n {
            for h in 0..n {
                if (values[g][h].norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidCocycle(format!("phi({g},{h}) is not a phase")));
                }
            }
            if (values[0][g] - c(1.0)).norm() > 1e-12 || (values[g][0] - c(1.0)).norm() > 1e-12 {
                return Err(Error::InvalidCocycle(format!("not normalized at {g}")));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let l = values[g][h] * values[group.mul(g, h)][k];
                    let r = values[g][group.mul(h, k)] * values[h][k];
                    if (l - r).norm() > 1e-12 {
                        return Err(Error::InvalidCocycle(format!(
                            "cocycle identity fails at ({g},{h},{k})"
                        )));
                    }
                }
            }
        }
        Ok(Cocycle { values })
    }

    /// `phi((a,b),(c,d)) = (-1)^(b c)` on `Z2 x Z2`.
    pub fn klein_symplectic() -> Self {
        let g = FiniteGroup::klein();
        let values = (0..4)
            .map(|x| (0..4).map(|y| c(if (x & 1) * (y >> 1) == 1 { -1.0 } else { 1.0 })).collect())
            .collect();
        Cocycle::new(&g, values).expect("symplectic cocycle")
    }

    pub fn value(&self, g: usize, h: usize) -> C64 {
        self.values[g][h]
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|z| (z - c(1.0)).norm() < 1e-12)
    }

    pub(crate) fn to_file(&self) -> CocycleFile {
        CocycleFile {
            values: self.values.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub(crate) fn from_file(group: &FiniteGroup, f: CocycleFile) -> Result<Self> {
        Cocycle::new(
            group,
            f.values.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect(),
        )
    }
}

/// `(F0, F1)` for `Vec_G` acting on `Vec`, twisted by `phi`.
pub fn gen_vecg(group: &FiniteGroup, phi: &Cocycle) -> Result<ModuleData> {
    let n = group.order();
    if phi.order() != n {
        return Err(Error::InvalidCocycle(format!(
            "cocycle of order {} for a group of order {n}",
            phi.order()
        )));
    }
    let mut f0 = FSymbols::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let e = group.mul(a, b);
                let f = group.mul(b, cc);
                let d = group.mul(e, cc);
                f0.insert(key(a, b, cc, d, 0, e, 0, 0, f, 0), c(1.0));
            }
        }
    }
    let mut f1 = FSymbols::new();
    for g in 0..n {
        for h in 0..n {
            f1.insert(key(g, h, 0, 0, 0, group.mul(g, h), 0, 0, 0, 0), phi.value(g, h));
        }
    }
    let mut action = Tensor3::zeros([n, 1, 1]);
    for g in 0..n {
        action.set(g, 0, 0, 1);
    }
    let name = if phi.is_trivial() {
        format!("Vec_{}", group.name())
    } else {
        format!("Vec_{} (twisted)", group.name())
    };
    let cat = SkeletalCategory::new(Some(name), group.fusion_rules(), f0)?;
    ModuleData::new(cat, action, f1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_orders() {
        for (name, n) in [("Z2", 2), ("Z5", 5), ("Z2xZ2", 4), ("S3", 6), ("S4", 24), ("D4", 8), ("Q8", 8)] {
            assert_eq!(FiniteGroup::by_name(name).unwrap().order(), n, "{name}");
        }
        assert!(FiniteGroup::by_name("A5").is_err());
    }

    #[test]
    fn s3_is_not_abelian() {
        let g = FiniteGroup::symmetric3();
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
    }

    #[test]
    fn q8_has_single_involution() {
        let g = FiniteGroup::quaternion();
        let inv: Vec<usize> = (1..8).filter(|&x| g.mul(x, x) == 0).collect();
        assert_eq!(inv, vec![1]);
    }

    #[test]
    fn broken_table_rejected() {
        let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(FiniteGroup::from_table("bad", t).is_err());
    }

    #[test]
    fn non_cocycle_rejected() {
        let g = FiniteGroup::cyclic(3);
        let mut v = vec![vec![c(1.0); 3]; 3];
        v[1][1] = c(-1.0);
        assert!(matches!(Cocycle::new(&g, v), Err(Error::InvalidCocycle(_))));
    }

    #[test]
    fn module_dim_is_sqrt_order() {
        let m = gen_vecg(&FiniteGroup::symmetric3(), &Cocycle::trivial(6)).unwrap();
        assert!((m.dims[0] - 6f64.sqrt()).abs() < 1e-12);
    }
}
