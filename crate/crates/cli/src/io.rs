//! JSON instance files: parsing with full validation, and writers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use supercomb::selection::{PartialMap, SelectionInstance, SoftnessInstance};
use supercomb::setfam::normalize_family_traced;
use supercomb::{Codomain, FiniteSpace, GroundSet, PointMap, SetValuedMap, Strictness, Subbase, SubsetMask};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: malformed JSON: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}:{line}:{column}: schema error: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: at {location}: {message}")]
    Invariant {
        path: PathBuf,
        location: String,
        message: String,
    },
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io { .. } => "io",
            InputError::Parse { .. } => "parse",
            InputError::Schema { .. } => "schema",
            InputError::Invariant { .. } => "invariant",
        }
    }
}

fn invariant(path: &Path, location: &str, message: impl ToString) -> InputError {
    InputError::Invariant {
        path: path.to_path_buf(),
        location: location.to_string(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubbaseFile {
    pub n: usize,
    pub subbase: Vec<Vec<i64>>,
    #[serde(default)]
    pub strictness: Strictness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<usize>>,
}

/// A point given by index or by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Name(String),
}

/// Map values keyed by point name, or listed in point order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values<T> {
    List(Vec<T>),
    Named(BTreeMap<String, T>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodomainSpec {
    Size(usize),
    Space(SpaceFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub values: Values<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<CodomainSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetMapFile {
    pub values: Values<Vec<usize>>,
}

/// Bundle for `select` (uses `phi`, optionally `A` and `g`) and for
/// `check-soft` (uses `f`, `A`, `k` and `h`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub space: SpaceFile,
    pub subbase: SubbaseFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Values<Vec<usize>>>,
    #[serde(rename = "A", default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<PointRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Values<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<MapFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Values<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Values<usize>>,
}

pub fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn from_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column, message) = (e.line(), e.column(), e.to_string());
        let path = path.to_path_buf();
        match e.classify() {
            serde_json::error::Category::Data => InputError::Schema {
                path,
                line,
                column,
                message,
            },
            _ => InputError::Parse {
                path,
                line,
                column,
                message,
            },
        }
    })
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    from_json(path, &read(path)?)
}

pub fn subbase_from_file(path: &Path, file: &SubbaseFile) -> Result<(Subbase, Vec<String>), InputError> {
    let ground = GroundSet::new(file.n).map_err(|e| invariant(path, "n", e))?;
    let (family, notes) = normalize_family_traced(&file.subbase, ground).map_err(|e| invariant(path, "subbase", e))?;
    Ok((Subbase::new(family, file.strictness), notes))
}

pub fn space_from_file(path: &Path, file: &SpaceFile) -> Result<FiniteSpace, InputError> {
    let n = file.points.len();
    let mut opens = Vec::with_capacity(file.opens.len());
    for (i, open) in file.opens.iter().enumerate() {
        if let Some(&p) = open.iter().find(|&&p| p >= n) {
            return Err(invariant(path, &format!("opens[{i}]"), format!("point index {p} out of range")));
        }
        opens.push(SubsetMask::from_points(open.iter().copied()));
    }
    FiniteSpace::new(file.points.clone(), opens).map_err(|e| invariant(path, "opens", e))
}

fn resolve(path: &Path, space: &FiniteSpace, location: &str, p: &PointRef) -> Result<usize, InputError> {
    match p {
        PointRef::Index(i) if *i < space.len() => Ok(*i),
        PointRef::Index(i) => Err(invariant(path, location, format!("point index {i} out of range"))),
        PointRef::Name(name) => space
            .index_of(name)
            .ok_or_else(|| invariant(path, location, format!("unknown point {name:?}"))),
    }
}

/// Resolves values to a per-point table; missing points are `None`.
fn partial_table<T: Clone>(
    path: &Path,
    names: &[String],
    location: &str,
    values: &Values<T>,
) -> Result<Vec<Option<T>>, InputError> {
    match values {
        Values::List(list) => {
            if list.len() != names.len() {
                return Err(invariant(path, location, format!("expected {} values, found {}", names.len(), list.len())));
            }
            Ok(list.iter().cloned().map(Some).collect())
        }
        Values::Named(map) => {
            let mut out = vec![None; names.len()];
            for (key, v) in map {
                let i = names
                    .iter()
                    .position(|n| n == key)
                    .ok_or_else(|| invariant(path, location, format!("unknown point {key:?}")))?;
                out[i] = Some(v.clone());
            }
            Ok(out)
        }
    }
}

fn total_table<T: Clone>(path: &Path, names: &[String], location: &str, values: &Values<T>) -> Result<Vec<T>, InputError> {
    partial_table(path, names, location, values)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| invariant(path, location, format!("no value for point {:?}", names[i]))))
        .collect()
}

fn index_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A map on the ground points `0..n` (keys `"0"`, `"1"`, ... when named).
pub fn point_map_from_file(path: &Path, file: &MapFile, n: Option<usize>) -> Result<PointMap, InputError> {
    let n = match (n, &file.values) {
        (Some(n), _) => n,
        (None, Values::List(l)) => l.len(),
        (None, Values::Named(m)) => m.len(),
    };
    let values = total_table(path, &index_names(n), "values", &file.values)?;
    let codomain = match &file.codomain {
        Some(CodomainSpec::Size(m)) => Codomain::Discrete(GroundSet::new(*m).map_err(|e| invariant(path, "codomain", e))?),
        Some(CodomainSpec::Space(s)) => Codomain::Space(space_from_file(path, s)?),
        None => {
            let m = values.iter().max().map_or(1, |v| v + 1);
            Codomain::Discrete(GroundSet::new(m).map_err(|e| invariant(path, "codomain", e))?)
        }
    };
    PointMap::new(values, codomain).map_err(|e| invariant(path, "values", e))
}

pub fn parse_map(path: &Path) -> Result<PointMap, InputError> {
    point_map_from_file(path, &load::<MapFile>(path)?, None)
}

pub fn parse_subbase(path: &Path) -> Result<(Subbase, Vec<String>), InputError> {
    subbase_from_file(path, &load::<SubbaseFile>(path)?)
}

pub fn parse_space(path: &Path) -> Result<FiniteSpace, InputError> {
    space_from_file(path, &load::<SpaceFile>(path)?)
}

struct Bundle {
    space: FiniteSpace,
    sb: Subbase,
    a: SubsetMask,
}

fn bundle(path: &Path, file: &InstanceFile) -> Result<Bundle, InputError> {
    let space = space_from_file(path, &file.space)?;
    let (sb, _) = subbase_from_file(path, &file.subbase)?;
    let mut a = SubsetMask::EMPTY;
    for (i, p) in file.a.iter().enumerate() {
        a = a.with(resolve(path, &space, &format!("A[{i}]"), p)?);
    }
    Ok(Bundle { space, sb, a })
}

pub fn selection_from_file(path: &Path, file: &InstanceFile) -> Result<SelectionInstance, InputError> {
    let Bundle { space, sb, a } = bundle(path, file)?;
    let names = space.names().to_vec();
    let phi_values = file.phi.as_ref().ok_or_else(|| invariant(path, "phi", "missing set-valued map"))?;
    let ground = sb.ground();
    let raw = total_table(path, &names, "phi", phi_values)?;
    let mut values = Vec::with_capacity(raw.len());
    for (i, set) in raw.iter().enumerate() {
        if let Some(&p) = set.iter().find(|&&p| p >= ground.len()) {
            return Err(invariant(path, &format!("phi.{}", names[i]), format!("point {p} out of range")));
        }
        values.push(SubsetMask::from_points(set.iter().copied()));
    }
    let phi = SetValuedMap::new(ground, values).map_err(|e| invariant(path, "phi", e))?;
    let g: PartialMap = match &file.g {
        Some(v) => partial_table(path, &names, "g", v)?,
        None => vec![None; names.len()],
    };
    SelectionInstance::new(space, a, g, phi, sb).map_err(|e| invariant(path, "instance", e))
}

pub fn softness_from_file(path: &Path, file: &InstanceFile) -> Result<(PointMap, Subbase, SoftnessInstance), InputError> {
    let Bundle { space, sb, a } = bundle(path, file)?;
    let names = space.names().to_vec();
    let f_file = file.f.as_ref().ok_or_else(|| invariant(path, "f", "missing map f"))?;
    let f = point_map_from_file(path, f_file, Some(sb.ground().len()))?;
    let k_values = file.k.as_ref().ok_or_else(|| invariant(path, "k", "missing map k"))?;
    let k = PointMap::new(total_table(path, &names, "k", k_values)?, f.codomain().clone())
        .map_err(|e| invariant(path, "k", e))?;
    let h: PartialMap = match &file.h {
        Some(v) => partial_table(path, &names, "h", v)?,
        None => vec![None; names.len()],
    };
    let inst = SoftnessInstance::new(&f, space, a, k, h).map_err(|e| invariant(path, "instance", e))?;
    Ok((f, sb, inst))
}

/// Any instance file, recognized by its top-level keys.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Subbase(Subbase),
    Space(FiniteSpace),
    Map(PointMap),
    Selection(SelectionInstance),
    Softness(PointMap, Subbase, SoftnessInstance),
}

pub fn parse_instance(path: &Path) -> Result<Instance, InputError> {
    let text = read(path)?;
    let value: serde_json::Value = from_json(path, &text)?;
    let has = |k: &str| value.get(k).is_some();
    if has("subbase") && has("n") {
        Ok(Instance::Subbase(subbase_from_file(path, &from_json(path, &text)?)?.0))
    } else if has("points") {
        Ok(Instance::Space(space_from_file(path, &from_json(path, &text)?)?))
    } else if has("space") {
        let file: InstanceFile = from_json(path, &text)?;
        if file.f.is_some() {
            let (f, sb, inst) = softness_from_file(path, &file)?;
            Ok(Instance::Softness(f, sb, inst))
        } else {
            Ok(Instance::Selection(selection_from_file(path, &file)?))
        }
    } else if has("values") {
        Ok(Instance::Map(point_map_from_file(path, &from_json(path, &text)?, None)?))
    } else {
        Err(InputError::Schema {
            path: path.to_path_buf(),
            line: 1,
            column: 1,
            message: "unrecognized instance file".into(),
        })
    }
}

pub fn subbase_to_file(sb: &Subbase) -> SubbaseFile {
    SubbaseFile {
        n: sb.ground().len(),
        subbase: sb
            .members()
            .iter()
            .map(|m| m.points().map(|p| p as i64).collect())
            .collect(),
        strictness: sb.strictness(),
    }
}

pub fn space_to_file(space: &FiniteSpace) -> SpaceFile {
    SpaceFile {
        points: space.names().to_vec(),
        opens: space.opens().iter().map(|o| o.to_vec()).collect(),
    }
}

fn named<T: Clone>(names: &[String], values: impl Iterator<Item = (usize, T)>) -> Values<T> {
    Values::Named(values.map(|(i, v)| (names[i].clone(), v)).collect())
}

fn codomain_spec(c: &Codomain) -> CodomainSpec {
    match c {
        Codomain::Discrete(g) => CodomainSpec::Size(g.len()),
        Codomain::Space(s) => CodomainSpec::Space(space_to_file(s)),
    }
}

pub fn map_to_file(f: &PointMap) -> MapFile {
    MapFile {
        values: Values::List(f.values().to_vec()),
        codomain: Some(codomain_spec(f.codomain())),
    }
}

pub fn selection_to_file(inst: &SelectionInstance) -> InstanceFile {
    let names = inst.space.names();
    InstanceFile {
        space: space_to_file(&inst.space),
        subbase: subbase_to_file(&inst.sb),
        phi: Some(named(names, inst.phi.values().iter().map(|v| v.to_vec()).enumerate())),
        a: inst.a.points().map(|p| PointRef::Name(names[p].clone())).collect(),
        g: (!inst.a.is_empty())
            .then(|| named(names, inst.g.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))))),
        f: None,
        k: None,
        h: None,
    }
}

pub fn softness_to_file(f: &PointMap, sb: &Subbase, inst: &SoftnessInstance) -> InstanceFile {
    let names = inst.space.names();
    InstanceFile {
        space: space_to_file(&inst.space),
        subbase: subbase_to_file(sb),
        phi: None,
        a: inst.a.points().map(|p| PointRef::Name(names[p].clone())).collect(),
        g: None,
        f: Some(map_to_file(f)),
        k: Some(named(names, inst.k.values().iter().copied().enumerate())),
        h: (!inst.a.is_empty())
            .then(|| named(names, inst.h.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))))),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}
