//! JSON files for skeletal data, groups and cocycles.
//!
//! A skeletal file looks like
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "category_c": { "name": "Vec_Z2", "rank": 2, "dual": [0, 1], "fusion": [[0, 0, 0, 1], ...] },
//!   "module": { "rank": 1, "left_action": [[0, 0, 0, 1], [1, 0, 0, 1]] },
//!   "f0": { "0,0,0,0|1,0,1|1,0,1": [1.0, 0.0], ... },
//!   "tolerance": 1e-9
//! }
//! ```
//!
//! Fusion and action entries are `[x, y, z, N]` with `N > 0`. Symbol keys are
//! `a,b,c,d|α,e,β|μ,f,ν` with 0-based labels and 1-based multiplicities; absent
//! keys are zero. `category_d`, `module.right_action` and `f2`..`f4` are
//! present together or not at all.

use std::collections::BTreeMap;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::skeletal::{
    check_normalization, BimoduleData, FKey, FSymbols, Family, FusionRules, ModuleData, SkeletalCategory,
    Tensor3,
};
use crate::vecg::{Cocycle, CocycleFile, FiniteGroup};

pub const FORMAT_VERSION: u32 = 1;

/// Entries of a loaded file may deviate from the normalized gauge by this much.
const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub dual: Vec<usize>,
    pub fusion: Vec<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub rank: usize,
    pub left_action: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_action: Option<Vec<[usize; 4]>>,
}

/// Symbols as a key-ordered map, written in [`FKey`] order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolMap(pub Vec<(FKey, [f64; 2])>);

impl Serialize for SymbolMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(&k.to_string(), v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for SymbolMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, [f64; 2]>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let key: FKey = k.parse().map_err(serde::de::Error::custom)?;
            if !v.iter().all(|x| x.is_finite()) {
                return Err(serde::de::Error::custom(format!("entry {k} is not finite")));
            }
            out.push((key, v));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(SymbolMap(out))
    }
}

impl From<&FSymbols> for SymbolMap {
    fn from(f: &FSymbols) -> Self {
        SymbolMap(f.iter().map(|(k, v)| (*k, [v.re, v.im])).collect())
    }
}

impl From<&SymbolMap> for FSymbols {
    fn from(m: &SymbolMap) -> Self {
        m.0.iter().map(|(k, [re, im])| (*k, C64::new(*re, *im))).collect()
    }
}

/// The on-disk form of a [`BimoduleData`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletalFile {
    pub format_version: u32,
    pub category_c: CategoryFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_d: Option<CategoryFile>,
    pub module: ModuleFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<SymbolMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<SymbolMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<SymbolMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f3: Option<SymbolMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f4: Option<SymbolMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn category_file(cat: &SkeletalCategory) -> CategoryFile {
    CategoryFile {
        name: cat.name.clone(),
        rank: cat.rank(),
        dual: cat.fusion.duals().to_vec(),
        fusion: cat.fusion.tensor().entries(),
    }
}

fn category(f: &CategoryFile, sym: Option<&SymbolMap>) -> Result<SkeletalCategory> {
    if f.dual.len() != f.rank {
        return Err(Error::InvalidData(format!("dual has {} entries for rank {}", f.dual.len(), f.rank)));
    }
    let fusion = FusionRules::from_entries(f.rank, f.dual.clone(), &f.fusion)?;
    SkeletalCategory::new(f.name.clone(), fusion, sym.map(FSymbols::from).unwrap_or_default())
}

fn symbols(f: &FSymbols) -> Option<SymbolMap> {
    (!f.is_empty()).then(|| SymbolMap::from(f))
}

impl SkeletalFile {
    pub fn from_data(data: &BimoduleData) -> Self {
        let right = data.right.as_ref();
        SkeletalFile {
            format_version: FORMAT_VERSION,
            category_c: category_file(data.left()),
            category_d: right.map(|r| category_file(&r.category)),
            module: ModuleFile {
                rank: data.module.rank,
                left_action: data.module.action.entries(),
                right_action: right.map(|r| r.action.entries()),
            },
            f0: symbols(&data.left().f),
            f1: symbols(&data.module.f1),
            f2: right.and_then(|_| symbols(&data.f2)),
            f3: right.and_then(|_| symbols(&data.f3)),
            f4: right.and_then(|r| symbols(&r.category.f)),
            tolerance: Some(data.tolerance),
        }
    }

    /// Builds the data, checking shapes, key ranges and the unit normalization.
    pub fn to_data(&self) -> Result<BimoduleData> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidData(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let c = category(&self.category_c, self.f0.as_ref())?;
        let m = self.module.rank;
        let left = Tensor3::from_entries([c.rank(), m, m], &self.module.left_action)?;
        let module = ModuleData::new(c, left, self.f1.as_ref().map(FSymbols::from).unwrap_or_default())?;
        let mut data = match (&self.category_d, &self.module.right_action) {
            (Some(df), Some(ra)) => {
                let d = category(df, self.f4.as_ref())?;
                let right = Tensor3::from_entries([m, d.rank(), m], ra)?;
                let f2 = self.f2.as_ref().map(FSymbols::from).unwrap_or_default();
                let f3 = self.f3.as_ref().map(FSymbols::from).unwrap_or_default();
                BimoduleData::with_right(module, d, right, f2, f3)?
            }
            (None, None) => {
                if self.f2.is_some() || self.f3.is_some() || self.f4.is_some() {
                    return Err(Error::InvalidData("f2, f3 or f4 given without category_d".into()));
                }
                BimoduleData::from_module(module)
            }
            _ => {
                return Err(Error::InvalidData(
                    "category_d and module.right_action must be given together".into(),
                ))
            }
        };
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidData(format!("tolerance {t} is not positive")));
            }
            data.tolerance = t;
        }
        let ctx = data.context();
        for fam in Family::ALL {
            if let Some(sym) = data.fsym(fam) {
                if let Some((k, _)) = sym.iter().find(|(k, _)| !ctx.allows(fam, k)) {
                    return Err(Error::InvalidData(format!("{fam}: key {k} is not allowed by the fusion rules")));
                }
            }
        }
        if let Some((fam, k)) = check_normalization(&data, NORMALIZATION_TOL).into_iter().next() {
            return Err(Error::NotNormalized {
                family: fam.to_string(),
                key: k.to_string(),
            });
        }
        Ok(data)
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let text = e.to_string();
        let suffix = format!(" at line {line} column {column}");
        Error::Parse {
            line,
            column,
            message: text.strip_suffix(&suffix).unwrap_or(&text).to_string(),
        }
    })
}

/// Two-space indented JSON with arrays of scalars kept on one line.
#[derive(Default)]
struct LeafFormatter {
    // (is_array, compact, undecided, nonempty)
    stack: Vec<(bool, bool, bool, bool)>,
    in_key: bool,
}

impl LeafFormatter {
    fn newline<W: ?Sized + std::io::Write>(w: &mut W, depth: usize) -> std::io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..depth {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn before_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W, container: bool) -> std::io::Result<()> {
        if self.in_key {
            return Ok(());
        }
        let depth = self.stack.len();
        if let Some(top) = self.stack.last_mut() {
            if top.0 && top.2 {
                top.2 = false;
                top.1 = !container;
                if container {
                    Self::newline(w, depth)?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! leaf {
    ($($name:ident($t:ty)),*) => {
        $(fn $name<W: ?Sized + std::io::Write>(&mut self, w: &mut W, v: $t) -> std::io::Result<()> {
            self.before_value(w, false)?;
            CompactFormatter.$name(w, v)
        })*
    };
}

impl Formatter for LeafFormatter {
    leaf!(
        write_bool(bool), write_i8(i8), write_i16(i16), write_i32(i32), write_i64(i64),
        write_u8(u8), write_u16(u16), write_u32(u32), write_u64(u64),
        write_f32(f32), write_f64(f64), write_number_str(&str)
    );

    fn write_null<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.before_value(w, false)?;
        w.write_all(b"null")
    }

    fn begin_string<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.before_value(w, false)?;
        w.write_all(b"\"")
    }

    fn begin_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.before_value(w, true)?;
        self.stack.push((true, true, false, false));
        w.write_all(b"[")
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        let depth = self.stack.len();
        let top = self.stack.last_mut().expect("inside an array");
        top.3 = true;
        if first {
            top.2 = true;
            Ok(())
        } else if top.1 {
            w.write_all(b", ")
        } else {
            w.write_all(b",")?;
            Self::newline(w, depth)
        }
    }

    fn end_array_value<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        Ok(())
    }

    fn end_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        let (_, compact, _, nonempty) = self.stack.pop().expect("inside an array");
        if nonempty && !compact {
            Self::newline(w, self.stack.len())?;
        }
        w.write_all(b"]")
    }

    fn begin_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.before_value(w, true)?;
        self.stack.push((false, false, false, false));
        w.write_all(b"{")
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        let depth = self.stack.len();
        self.stack.last_mut().expect("inside an object").3 = true;
        self.in_key = true;
        if !first {
            w.write_all(b",")?;
        }
        Self::newline(w, depth)
    }

    fn end_object_key<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        self.in_key = false;
        Ok(())
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        Ok(())
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        let (_, _, _, nonempty) = self.stack.pop().expect("inside an object");
        if nonempty {
            Self::newline(w, self.stack.len())?;
        }
        w.write_all(b"}")
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, LeafFormatter::default());
    v.serialize(&mut ser).expect("serializable");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn from_json(text: &str) -> Result<BimoduleData> {
    parse_json::<SkeletalFile>(text)?.to_data()
}

/// Canonical text: fixed key order, shortest round-trip floats, trailing newline.
pub fn to_json(data: &BimoduleData) -> String {
    pretty(&SkeletalFile::from_data(data))
}

pub fn load(path: impl AsRef<Path>) -> Result<BimoduleData> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn save(data: &BimoduleData, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(data))?;
    Ok(())
}

/// `{"name": ..., "table": [[...], ...]}` with the identity at index 0.
pub fn group_from_json(text: &str) -> Result<FiniteGroup> {
    parse_json(text)
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    pretty(g)
}

/// `{"values": [[[re, im], ...], ...]}`, indexed like the group table.
pub fn cocycle_from_json(group: &FiniteGroup, text: &str) -> Result<Cocycle> {
    Cocycle::from_file(group, parse_json::<CocycleFile>(text)?)
}

pub fn cocycle_to_json(phi: &Cocycle) -> String {
    pretty(&phi.to_file())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn module_round_trip() {
        let m = bundled::vecg_module("S3").unwrap();
        let data = BimoduleData::from_module(m);
        let text = to_json(&data);
        let back = from_json(&text).unwrap();
        assert_eq!(back, data);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn bimodule_round_trip() {
        let data = bundled::failure_mode_2().unwrap();
        let text = to_json(&data);
        assert_eq!(to_json(&from_json(&text).unwrap()), text);
    }

    #[test]
    fn parse_error_has_position() {
        match from_json("{\n  \"format_version\": 1,\n  oops\n}") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let data = BimoduleData::from_module(bundled::vecg_module("Z2").unwrap());
        let text = to_json(&data).replace("\"0,0,0,0|1,0,1|1,0,1\": [1.0,", "\"0,0,0,0|1,0,1|1,0,1\": [-1.0,");
        assert!(matches!(from_json(&text), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn rejects_out_of_range_key() {
        let data = BimoduleData::from_module(bundled::vecg_module("Z2").unwrap());
        let text = to_json(&data).replace("\"f1\": {", "\"f1\": {\n    \"0,0,0,0|1,0,1|1,1,1\": [0.5, 0.0],");
        assert!(matches!(from_json(&text), Err(Error::InvalidData(_))));
    }

    #[test]
    fn group_and_cocycle_files() {
        let g = FiniteGroup::klein();
        let g2 = group_from_json(&group_to_json(&g)).unwrap();
        assert_eq!(g, g2);
        let phi = Cocycle::klein_symplectic();
        let back = cocycle_from_json(&g, &cocycle_to_json(&phi)).unwrap();
        assert_eq!(back, phi);
        let bad = "{\"values\": [[[1,0],[1,0]],[[1,0],[0.5,0]]]}";
        assert!(cocycle_from_json(&FiniteGroup::cyclic(2), bad).is_err());
    }
}
