use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::monodromy::Monodromy;
use super::StratError;
use crate::chain_engine::{SimplicialComplexDesc, Vertex};
use crate::group_data::{CompactGroupDesc, GroupInclusion};

/// Ranks of `K^0` and `K^1` of a node complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KFixture {
    pub k0: usize,
    pub k1: usize,
}

/// A boundary hypersurface of a resolved stratum quotient together with its
/// fibration onto the quotient of a deeper type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceDecl {
    pub id: String,
    /// Simplices spanning the hypersurface (closed under faces on use).
    pub simplices: Vec<Vec<Vertex>>,
    pub target: String,
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyType {
    pub id: String,
    pub group: CompactGroupDesc,
    /// Dimension of the stratum quotient.
    pub dim: usize,
    /// Resolved quotient of the stratum closure; one tower node per
    /// connected component.
    pub complex: SimplicialComplexDesc,
    pub monodromy: Monodromy,
    pub hypersurfaces: Vec<HypersurfaceDecl>,
    pub k_theory: Option<KFixture>,
    /// The type arises from blowing up an interior submanifold of a stratum
    /// rather than from a change of isotropy, so its group may equal the
    /// group above it.
    pub interior_blowup: bool,
}

/// A covering relation `lower ≺ upper`, witnessed by the inclusion of the
/// upper type's group into the lower type's group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub lower: String,
    pub upper: String,
    pub inclusion: GroupInclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropySpec {
    pub ambient: CompactGroupDesc,
    pub types: Vec<IsotropyType>,
    pub covers: Vec<Cover>,
}

impl IsotropySpec {
    pub fn type_index(&self, id: &str) -> Option<usize> {
        self.types.iter().position(|t| t.id == id)
    }
}

/// The partial order on isotropy types with composite inclusions.
#[derive(Clone, Debug)]
pub struct TypeOrder {
    pub ids: Vec<String>,
    /// `(lower, upper) -> group(upper) ⊂ group(lower)` for every strict pair.
    inclusions: BTreeMap<(usize, usize), GroupInclusion>,
    pub root: usize,
    /// Length of the longest chain from a type up to the generic type.
    pub depth: Vec<usize>,
}

impl TypeOrder {
    pub fn build(spec: &IsotropySpec) -> Result<TypeOrder, StratError> {
        let n = spec.types.len();
        let ids: Vec<String> = spec.types.iter().map(|t| t.id.clone()).collect();
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id) {
                return Err(StratError::DuplicateId(id.clone()));
            }
        }
        let index = |id: &str| spec.type_index(id).ok_or_else(|| StratError::UnknownType(id.to_string()));
        let mut up: Vec<Vec<(usize, &GroupInclusion)>> = vec![Vec::new(); n];
        for c in &spec.covers {
            let (l, u) = (index(&c.lower)?, index(&c.upper)?);
            if l == u {
                return Err(StratError::Cyclic(c.lower.clone()));
            }
            c.inclusion.validate()?;
            if c.inclusion.source != spec.types[u].group || c.inclusion.target != spec.types[l].group {
                return Err(StratError::InclusionMismatch {
                    lower: c.lower.clone(),
                    upper: c.upper.clone(),
                    reason: "inclusion must run from the upper type's group into the lower type's group".into(),
                });
            }
            up[l].push((u, &c.inclusion));
        }
        // topological order, upper types first
        let mut order = Vec::with_capacity(n);
        let mut state = vec![0u8; n];
        fn visit(v: usize, up: &[Vec<(usize, &GroupInclusion)>], state: &mut [u8], order: &mut Vec<usize>, ids: &[String]) -> Result<(), StratError> {
            match state[v] {
                2 => return Ok(()),
                1 => return Err(StratError::Cyclic(ids[v].clone())),
                _ => {}
            }
            state[v] = 1;
            for &(u, _) in &up[v] {
                visit(u, up, state, order, ids)?;
            }
            state[v] = 2;
            order.push(v);
            Ok(())
        }
        for v in 0..n {
            visit(v, &up, &mut state, &mut order, &ids)?;
        }
        let maximal: Vec<usize> = (0..n).filter(|&v| up[v].is_empty()).collect();
        let root = match maximal.as_slice() {
            [r] => *r,
            [] => return Err(StratError::NoGenericType),
            many => return Err(StratError::MultipleGeneric(many.iter().map(|&i| ids[i].clone()).collect())),
        };
        let mut inclusions: BTreeMap<(usize, usize), GroupInclusion> = BTreeMap::new();
        let mut depth = vec![0usize; n];
        for &l in &order {
            for &(m, cover) in &up[l] {
                depth[l] = depth[l].max(depth[m] + 1);
                let mut candidates: Vec<(usize, GroupInclusion)> = vec![(m, cover.clone())];
                for (&(lo, u), inc) in &inclusions {
                    if lo == m {
                        candidates.push((u, inc.then(cover)?));
                    }
                }
                for (u, inc) in candidates {
                    match inclusions.get(&(l, u)) {
                        Some(existing) if !same_inclusion(existing, &inc) => {
                            return Err(StratError::PathDependent { lower: ids[l].clone(), upper: ids[u].clone() })
                        }
                        Some(_) => {}
                        None => {
                            inclusions.insert((l, u), inc);
                        }
                    }
                }
            }
        }
        Ok(TypeOrder { ids, inclusions, root, depth })
    }

    /// Strict order `a ≺ b` (a has the larger group).
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.inclusions.contains_key(&(a, b))
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// Inclusion `group(upper) ⊂ group(lower)` for `lower ≺ upper`.
    pub fn inclusion(&self, lower: usize, upper: usize) -> Option<&GroupInclusion> {
        self.inclusions.get(&(lower, upper))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.inclusions.keys().copied()
    }

    /// Elements of `set` with nothing of `set` strictly below them.
    pub fn minimal(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().copied().filter(|&a| !set.iter().any(|&b| self.less(b, a))).collect()
    }
}

/// Equality of inclusions as maps (ignoring whether the Lie map was given
/// explicitly or derived).
pub fn same_inclusion(a: &GroupInclusion, b: &GroupInclusion) -> bool {
    if a.source != b.source || a.target != b.target {
        return false;
    }
    match (&a.formal, &b.formal) {
        (Some(x), Some(y)) => x == y,
        (None, None) => a.lattice_map == b.lattice_map && a.lie_matrix() == b.lie_matrix(),
        _ => false,
    }
}
