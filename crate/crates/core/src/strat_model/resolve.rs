use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::spec::{IsotropySpec, TypeOrder};
use super::tower::{ResolutionTower, TowerEdge, TowerNode};
use super::StratError;
use crate::chain_engine::{SimplicialComplexDesc, SimplicialMapDesc};
use crate::corner_poset::{
    lift_ifs_under_blowup, validate_ifs, Center, FacePoset, InteriorComponent, IteratedFibrationDesc,
};

/// One round of the resolution: all minimal remaining types are blown up
/// simultaneously. Posets are those of the root quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionRound {
    pub index: usize,
    pub types: Vec<String>,
    pub nodes: Vec<String>,
    pub before: FacePoset,
    pub after: FacePoset,
    pub fibrations: IteratedFibrationDesc,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResolutionTrace {
    pub rounds: Vec<ResolutionRound>,
}

pub fn canonical_resolution(spec: &IsotropySpec) -> Result<(ResolutionTower, ResolutionTrace), StratError> {
    let mut spec = spec.clone();
    spec.types.sort_by(|a, b| a.id.cmp(&b.id));
    spec.covers.sort_by(|a, b| (&a.lower, &a.upper).cmp(&(&b.lower, &b.upper)));
    let spec = &spec;
    spec.ambient.validate()?;
    let order = TypeOrder::build(spec)?;
    for t in &spec.types {
        t.group.validate()?;
        if let Some(d) = t.complex.dim() {
            if d != t.dim {
                return Err(StratError::DimensionMismatch { type_id: t.id.clone(), declared: t.dim, complex: d });
            }
        } else {
            return Err(StratError::EmptyComplex(t.id.clone()));
        }
        t.monodromy.validate(&t.group, &t.complex)?;
    }

    // nodes: the root, then the components of every other type (types by id)
    let mut type_seq: Vec<usize> = (0..spec.types.len()).filter(|&i| i != order.root).collect();
    type_seq.sort_by(|&a, &b| spec.types[a].id.cmp(&spec.types[b].id));
    type_seq.insert(0, order.root);
    let mut nodes = Vec::new();
    let mut components: BTreeMap<usize, Vec<(usize, SimplicialComplexDesc)>> = BTreeMap::new();
    for &ti in &type_seq {
        let t = &spec.types[ti];
        let comps = if ti == order.root { vec![t.complex.clone()] } else { t.complex.components() };
        let many = comps.len() > 1;
        for (ci, comp) in comps.into_iter().enumerate() {
            components.entry(ti).or_default().push((nodes.len(), comp.clone()));
            nodes.push(TowerNode {
                id: if many { format!("{}#{}", t.id, ci) } else { t.id.clone() },
                type_id: t.id.clone(),
                type_index: ti,
                group: t.group.clone(),
                monodromy: t.monodromy.restrict(&comp),
                complex: comp,
                depth: order.depth[ti],
                k_theory: t.k_theory,
                interior_blowup: t.interior_blowup,
            });
        }
    }
    let node_of = |ti: usize, v: usize| components[&ti].iter().find(|(_, c)| c.contains(&[v])).map(|(n, _)| *n);

    let mut edges = Vec::new();
    let mut edge_ids = BTreeSet::new();
    for &ti in &type_seq {
        let t = &spec.types[ti];
        let mut decls: Vec<_> = t.hypersurfaces.iter().collect();
        decls.sort_by(|a, b| a.id.cmp(&b.id));
        for h in decls {
            let bad = |reason: String| StratError::BadHypersurface { id: h.id.clone(), reason };
            if !edge_ids.insert(h.id.clone()) {
                return Err(StratError::DuplicateId(h.id.clone()));
            }
            let hyp = SimplicialComplexDesc::from_simplices(&h.simplices)?;
            if hyp.is_empty() || !hyp.is_subcomplex_of(&t.complex) {
                return Err(bad(format!("not a nonempty subcomplex of the complex of `{}`", t.id)));
            }
            let target_type = spec.type_index(&h.target).ok_or_else(|| StratError::UnknownType(h.target.clone()))?;
            if !order.less(target_type, ti) {
                return Err(bad(format!("target type `{}` is not below `{}`", h.target, t.id)));
            }
            let map = SimplicialMapDesc::new(h.vertex_map.clone());
            let target_complex = &spec.types[target_type].complex;
            map.validate(&hyp, target_complex)?;
            let verts = hyp.vertices();
            let source = node_of(ti, verts[0]).expect("vertex of the complex");
            if verts.iter().any(|&v| node_of(ti, v) != Some(source)) {
                return Err(bad("spans several components".into()));
            }
            let target = node_of(target_type, map.vertex(verts[0]).unwrap()).expect("image vertex");
            if verts.iter().any(|&v| node_of(target_type, map.vertex(v).unwrap()) != Some(target)) {
                return Err(bad("image spans several components".into()));
            }
            let restricted = SimplicialMapDesc::new(verts.iter().map(|&v| (v, map.vertex(v).unwrap())).collect());
            edges.push(TowerEdge {
                id: h.id.clone(),
                source,
                target,
                hypersurface: hyp,
                map: restricted,
                inclusion: order.inclusion(target_type, ti).expect("strict pair").clone(),
            });
        }
    }

    let root_node = 0;
    let tower = ResolutionTower {
        ambient: spec.ambient.clone(),
        nodes,
        edges,
        root: root_node,
        type_ids: order.ids.clone(),
        type_order: order.pairs().collect(),
    };
    let trace = resolution_rounds(&tower, &order)?;
    Ok((tower, trace))
}

fn resolution_rounds(tower: &ResolutionTower, order: &TypeOrder) -> Result<ResolutionTrace, StratError> {
    let root_dim = tower.nodes[tower.root].complex.dim().unwrap_or(0);
    let mut remaining: BTreeSet<usize> = (0..order.ids.len()).filter(|&t| t != order.root).collect();
    let mut poset = FacePoset::boundaryless(&tower.nodes[tower.root].id);
    let mut ifs = IteratedFibrationDesc::default();
    let mut trace = ResolutionTrace::default();
    while !remaining.is_empty() {
        let minimal = order.minimal(&remaining);
        check_disjoint(tower, &minimal)?;
        let round_nodes: Vec<usize> = (0..tower.nodes.len()).filter(|&n| minimal.contains(&tower.nodes[n].type_index)).collect();
        let mut comps = Vec::new();
        let mut ff_codim = BTreeMap::new();
        for &n in &round_nodes {
            let node = &tower.nodes[n];
            let meets: BTreeSet<String> = tower.edges_from(n).map(|(_, e)| tower.nodes[e.target].id.clone()).collect();
            comps.push(InteriorComponent { id: node.id.clone(), meets });
            let c = root_dim.saturating_sub(node.complex.dim().unwrap_or(0));
            ff_codim.insert(node.id.clone(), c.saturating_sub(1));
        }
        let center = Center::Interior { components: comps };
        let transversal: BTreeSet<String> = poset.hypersurfaces.iter().cloned().collect();
        let (after, lifted) = lift_ifs_under_blowup(&poset, &ifs, &center, &transversal, &ff_codim)?;
        let violations = validate_ifs(&after, &lifted);
        if let Some(v) = violations.first() {
            return Err(StratError::RoundStructure { round: trace.rounds.len() + 1, detail: format!("{v:?}") });
        }
        let mut types: Vec<String> = minimal.iter().map(|&t| order.ids[t].clone()).collect();
        types.sort();
        trace.rounds.push(ResolutionRound {
            index: trace.rounds.len() + 1,
            types,
            nodes: round_nodes.iter().map(|&n| tower.nodes[n].id.clone()).collect(),
            before: poset,
            after: after.clone(),
            fibrations: lifted.clone(),
        });
        poset = after;
        ifs = lifted;
        remaining = remaining.difference(&minimal).copied().collect();
    }
    Ok(trace)
}

/// Types blown up together must have pairwise disjoint hypersurfaces in
/// every node.
fn check_disjoint(tower: &ResolutionTower, types: &BTreeSet<usize>) -> Result<(), StratError> {
    for n in 0..tower.nodes.len() {
        let hs: Vec<&TowerEdge> =
            tower.edges_from(n).map(|(_, e)| e).filter(|e| types.contains(&tower.nodes[e.target].type_index)).collect();
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                let (ta, tb) = (tower.nodes[a.target].type_index, tower.nodes[b.target].type_index);
                if ta != tb && !a.hypersurface.intersection(&b.hypersurface).is_empty() {
                    return Err(StratError::IntersectingRound {
                        first: tower.type_ids[ta].clone(),
                        second: tower.type_ids[tb].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}
