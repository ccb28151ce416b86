use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::chain_engine::{ParityTable, SimplicialComplexDesc, Vertex};
use crate::equivariant_models::NodeClass;
use crate::group_data::{CompactGroupDesc, FormalInclusion, GroupInclusion};
use crate::linalg::Q;
use crate::strat_model::{Cover, HypersurfaceDecl, IsotropySpec, IsotropyType, KFixture, Monodromy};

pub const SCHEMA_VERSION: &str = "equires-scenario/1";

/// Default total degree bound for Borel computations.
pub const DEFAULT_MAX_DEGREE: usize = 12;
/// Default character box `[-6, 6]^r`.
pub const DEFAULT_WINDOW: [i64; 2] = [-6, 6];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: String,
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub groups: BTreeMap<String, CompactGroupDesc>,
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    pub strata: StrataSpec,
    /// The same action with one extra interior blow-up; its tables must
    /// agree with those of `strata`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blown_up: Option<StrataSpec>,
    #[serde(default)]
    pub computations: Computations,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k_classes: Vec<NamedClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Expectations>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub simplices: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    /// `[source vertex, target vertex]` pairs.
    pub pairs: Vec<[Vertex; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrataSpec {
    pub ambient: String,
    pub types: Vec<TypeSpec>,
    #[serde(default)]
    pub covers: Vec<CoverSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSpec {
    pub id: String,
    pub group: String,
    pub complex: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub monodromy: Vec<MonodromyEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<HypersurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_theory: Option<KFixture>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub interior_blowup: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyEdge {
    pub edge: [Vertex; 2],
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceSpec {
    pub id: String,
    pub complex: String,
    pub target: String,
    pub map: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub lower: String,
    pub upper: String,
    #[serde(default)]
    pub lattice_map: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_map: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal: Option<FormalInclusion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Computations {
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default = "default_window")]
    pub window: [i64; 2],
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

fn default_window() -> [i64; 2] {
    DEFAULT_WINDOW
}

impl Default for Computations {
    fn default() -> Self {
        Computations { max_degree: DEFAULT_MAX_DEGREE, window: DEFAULT_WINDOW }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedClass {
    pub name: String,
    pub classes: Vec<NodeClass>,
}

/// Reference values. Degree-indexed tables are compared on the common
/// prefix; window-dependent values only when the run uses `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub window: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delocalized: Option<ParityTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_theory: Option<KFixture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chern_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub membership: Vec<Membership>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Membership {
    pub class: String,
    pub member: bool,
}

/// Strict parse: syntax errors carry line and column, schema errors the
/// JSON path, and every id reference is resolved.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = match serde_path_to_error::deserialize(de) {
        Ok(f) => f,
        Err(err) => {
            let path = err.path().to_string();
            let inner = err.into_inner();
            let (line, column) = (inner.line(), inner.column());
            return Err(match inner.classify() {
                serde_json::error::Category::Syntax | serde_json::error::Category::Eof => {
                    ScenarioError::Syntax { line, column, message: inner.to_string() }
                }
                _ => ScenarioError::Schema { path, line, column, message: inner.to_string() },
            });
        }
    };
    if file.version != SCHEMA_VERSION {
        return Err(ScenarioError::Version(file.version));
    }
    file.resolve_references()?;
    file.spec()?;
    if let Some(b) = &file.blown_up {
        file.build_spec(b, "blown_up")?;
    }
    Ok(file)
}

pub fn emit_scenario(file: &ScenarioFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("scenario serializes");
    s.push('\n');
    s
}

fn dangling(path: String, kind: &'static str, id: &str) -> ScenarioError {
    ScenarioError::Dangling { path, kind, id: id.to_string() }
}

impl ScenarioFile {
    fn resolve_references(&self) -> Result<(), ScenarioError> {
        self.resolve_strata(&self.strata, "strata")?;
        if let Some(b) = &self.blown_up {
            self.resolve_strata(b, "blown_up")?;
        }
        let ids: BTreeSet<&str> = self.k_classes.iter().map(|c| c.name.as_str()).collect();
        if let Some(e) = &self.expectations {
            for (i, m) in e.membership.iter().enumerate() {
                if !ids.contains(m.class.as_str()) {
                    return Err(dangling(format!("expectations.membership[{i}].class"), "class", &m.class));
                }
            }
        }
        Ok(())
    }

    fn resolve_strata(&self, s: &StrataSpec, root: &str) -> Result<(), ScenarioError> {
        if !self.groups.contains_key(&s.ambient) {
            return Err(dangling(format!("{root}.ambient"), "group", &s.ambient));
        }
        let types: BTreeSet<&str> = s.types.iter().map(|t| t.id.as_str()).collect();
        for (i, t) in s.types.iter().enumerate() {
            let at = format!("{root}.types[{i}]");
            if !self.groups.contains_key(&t.group) {
                return Err(dangling(format!("{at}.group"), "group", &t.group));
            }
            if !self.complexes.contains_key(&t.complex) {
                return Err(dangling(format!("{at}.complex"), "complex", &t.complex));
            }
            for (j, h) in t.hypersurfaces.iter().enumerate() {
                let ah = format!("{at}.hypersurfaces[{j}]");
                if !self.complexes.contains_key(&h.complex) {
                    return Err(dangling(format!("{ah}.complex"), "complex", &h.complex));
                }
                if !types.contains(h.target.as_str()) {
                    return Err(dangling(format!("{ah}.target"), "type", &h.target));
                }
                if !self.maps.contains_key(&h.map) {
                    return Err(dangling(format!("{ah}.map"), "map", &h.map));
                }
            }
        }
        for (i, c) in s.covers.iter().enumerate() {
            for (field, id) in [("lower", &c.lower), ("upper", &c.upper)] {
                if !types.contains(id.as_str()) {
                    return Err(dangling(format!("{root}.covers[{i}].{field}"), "type", id));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<IsotropySpec, ScenarioError> {
        self.build_spec(&self.strata, "strata")
    }

    pub fn blown_up_spec(&self) -> Result<Option<IsotropySpec>, ScenarioError> {
        self.blown_up.as_ref().map(|b| self.build_spec(b, "blown_up")).transpose()
    }

    fn complex(&self, id: &str, path: String) -> Result<SimplicialComplexDesc, ScenarioError> {
        let c = self.complexes.get(id).ok_or_else(|| dangling(path.clone(), "complex", id))?;
        SimplicialComplexDesc::from_simplices(c.simplices.clone())
            .map_err(|e| ScenarioError::Invalid { path: format!("complexes.{id}"), message: e.to_string() })
    }

    fn build_spec(&self, s: &StrataSpec, root: &str) -> Result<IsotropySpec, ScenarioError> {
        let group = |id: &str, path: String| self.groups.get(id).cloned().ok_or_else(|| dangling(path, "group", id));
        let mut types = Vec::with_capacity(s.types.len());
        for (i, t) in s.types.iter().enumerate() {
            let at = format!("{root}.types[{i}]");
            let complex = self.complex(&t.complex, format!("{at}.complex"))?;
            let mut monodromy = Monodromy::trivial();
            for (j, m) in t.monodromy.iter().enumerate() {
                monodromy.set(m.edge[0], m.edge[1], m.matrix.clone()).map_err(|e| ScenarioError::Invalid {
                    path: format!("{at}.monodromy[{j}]"),
                    message: e.to_string(),
                })?;
            }
            let mut hypersurfaces = Vec::with_capacity(t.hypersurfaces.len());
            for (j, h) in t.hypersurfaces.iter().enumerate() {
                let ah = format!("{at}.hypersurfaces[{j}]");
                let simplices = self.complexes.get(&h.complex).ok_or_else(|| dangling(format!("{ah}.complex"), "complex", &h.complex))?;
                let map = self.maps.get(&h.map).ok_or_else(|| dangling(format!("{ah}.map"), "map", &h.map))?;
                let mut vertex_map = BTreeMap::new();
                for [a, b] in &map.pairs {
                    if vertex_map.insert(*a, *b).is_some() {
                        return Err(ScenarioError::Invalid {
                            path: format!("maps.{}", h.map),
                            message: format!("vertex {a} is mapped twice"),
                        });
                    }
                }
                hypersurfaces.push(HypersurfaceDecl {
                    id: h.id.clone(),
                    simplices: simplices.simplices.clone(),
                    target: h.target.clone(),
                    vertex_map,
                });
            }
            types.push(IsotropyType {
                id: t.id.clone(),
                group: group(&t.group, format!("{at}.group"))?,
                dim: t.dim,
                complex,
                monodromy,
                hypersurfaces,
                k_theory: t.k_theory,
                interior_blowup: t.interior_blowup,
            });
        }
        let group_of = |id: &str| types.iter().find(|t| t.id == id).map(|t| t.group.clone());
        let mut covers = Vec::with_capacity(s.covers.len());
        for (i, c) in s.covers.iter().enumerate() {
            let path = format!("{root}.covers[{i}]");
            let upper = group_of(&c.upper).ok_or_else(|| dangling(format!("{path}.upper"), "type", &c.upper))?;
            let lower = group_of(&c.lower).ok_or_else(|| dangling(format!("{path}.lower"), "type", &c.lower))?;
            covers.push(Cover {
                lower: c.lower.clone(),
                upper: c.upper.clone(),
                inclusion: GroupInclusion {
                    source: upper,
                    target: lower,
                    lattice_map: c.lattice_map.clone(),
                    lie_map: c.lie_map.clone(),
                    formal: c.formal.clone(),
                },
            });
        }
        Ok(IsotropySpec { ambient: group(&s.ambient, format!("{root}.ambient"))?, types, covers })
    }
}

/// Schema form of an isotropy spec. Complexes are named `Z_<type>` and
/// `H_<hypersurface>`, maps `psi_<hypersurface>`; each type gets a group of
/// its own id.
pub fn strata_from_spec(
    spec: &IsotropySpec,
    groups: &mut BTreeMap<String, CompactGroupDesc>,
    complexes: &mut BTreeMap<String, ComplexSpec>,
    maps: &mut BTreeMap<String, MapSpec>,
    prefix: &str,
) -> StrataSpec {
    let ambient = format!("{prefix}ambient");
    groups.insert(ambient.clone(), spec.ambient.clone());
    let mut types = Vec::with_capacity(spec.types.len());
    for t in &spec.types {
        let group = format!("{prefix}{}", t.id);
        groups.insert(group.clone(), t.group.clone());
        let complex = format!("{prefix}Z_{}", t.id);
        complexes.insert(complex.clone(), ComplexSpec { simplices: t.complex.maximal_simplices() });
        let hypersurfaces = t
            .hypersurfaces
            .iter()
            .map(|h| {
                let c = format!("{prefix}H_{}", h.id);
                let m = format!("{prefix}psi_{}", h.id);
                complexes.insert(c.clone(), ComplexSpec { simplices: h.simplices.clone() });
                maps.insert(m.clone(), MapSpec { pairs: h.vertex_map.iter().map(|(&a, &b)| [a, b]).collect() });
                HypersurfaceSpec { id: h.id.clone(), complex: c, target: h.target.clone(), map: m }
            })
            .collect();
        types.push(TypeSpec {
            id: t.id.clone(),
            group,
            complex,
            dim: t.dim,
            monodromy: t.monodromy.edges().map(|(&(a, b), m)| MonodromyEdge { edge: [a, b], matrix: m.clone() }).collect(),
            hypersurfaces,
            k_theory: t.k_theory,
            interior_blowup: t.interior_blowup,
        });
    }
    let covers = spec
        .covers
        .iter()
        .map(|c| CoverSpec {
            lower: c.lower.clone(),
            upper: c.upper.clone(),
            lattice_map: c.inclusion.lattice_map.clone(),
            lie_map: c.inclusion.lie_map.clone(),
            formal: c.inclusion.formal.clone(),
        })
        .collect();
    StrataSpec { ambient, types, covers }
}
