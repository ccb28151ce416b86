use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::spec::same_inclusion;
use super::tower::{ResolutionTower, TowerEdge};
use crate::chain_engine::{SimplicialComplexDesc, Vertex};
use crate::corner_poset::{validate_ifs, Compatibility, Face, FacePoset, Fibration, IteratedFibrationDesc};
use crate::group_data::GroupError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: String,
    pub detail: String,
}

fn violation(code: &str, detail: String) -> Violation {
    Violation { code: code.into(), detail }
}

/// Boundary face poset of one node with the fibration structure induced by
/// the tower edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeSkeleton {
    pub node: String,
    pub poset: FacePoset,
    pub fibrations: IteratedFibrationDesc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub edge: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSkeleton {
    pub nodes: Vec<NodeSkeleton>,
    pub incidence: Vec<Incidence>,
}

pub fn quotient_skeleton(tower: &ResolutionTower) -> QuotientSkeleton {
    let nodes = (0..tower.nodes.len()).map(|n| node_skeleton(tower, n)).collect();
    let incidence = tower
        .edges
        .iter()
        .map(|e| Incidence { edge: e.id.clone(), source: tower.nodes[e.source].id.clone(), target: tower.nodes[e.target].id.clone() })
        .collect();
    QuotientSkeleton { nodes, incidence }
}

fn fiber_dim(tower: &ResolutionTower, e: &TowerEdge) -> usize {
    let h = e.hypersurface.dim().unwrap_or(0);
    h.saturating_sub(tower.nodes[e.target].complex.dim().unwrap_or(0))
}

fn node_skeleton(tower: &ResolutionTower, n: usize) -> NodeSkeleton {
    let node = &tower.nodes[n];
    let edges: Vec<&TowerEdge> = tower.edges_from(n).map(|(_, e)| e).collect();
    let mut faces = vec![Face { id: node.id.clone(), codim: 0, contains: BTreeSet::new() }];
    for e in &edges {
        faces.push(Face { id: e.id.clone(), codim: 1, contains: [e.id.clone()].into() });
    }
    // higher faces: components of intersections, grown one hypersurface at a time
    let mut frontier: Vec<(Vec<usize>, SimplicialComplexDesc)> =
        edges.iter().enumerate().map(|(i, e)| (vec![i], e.hypersurface.clone())).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (set, cx) in &frontier {
            let last = *set.last().unwrap();
            for (j, e) in edges.iter().enumerate().skip(last + 1) {
                let meet = cx.intersection(&e.hypersurface);
                if meet.is_empty() {
                    continue;
                }
                let mut s = set.clone();
                s.push(j);
                let comps = meet.components();
                let many = comps.len() > 1;
                let contains: BTreeSet<String> = s.iter().map(|&k| edges[k].id.clone()).collect();
                let base: Vec<&str> = s.iter().map(|&k| edges[k].id.as_str()).collect();
                for (ci, _) in comps.iter().enumerate() {
                    let id = if many { format!("{}#{ci}", base.join("∩")) } else { base.join("∩") };
                    faces.push(Face { id, codim: s.len(), contains: contains.clone() });
                }
                next.push((s, meet));
            }
        }
        frontier = next;
    }
    let mut poset = FacePoset { hypersurfaces: edges.iter().map(|e| e.id.clone()).collect(), faces, intersections: Vec::new() };
    poset.normalize();

    let mut fibrations = IteratedFibrationDesc::default();
    for e in &edges {
        fibrations.fibrations.insert(e.id.clone(), Fibration { base: tower.nodes[e.target].id.clone(), codim: fiber_dim(tower, e) });
    }
    for a in &edges {
        for b in &edges {
            if a.id == b.id || fiber_dim(tower, a) >= fiber_dim(tower, b) {
                continue;
            }
            let meet = a.hypersurface.intersection(&b.hypersurface);
            if meet.is_empty() {
                continue;
            }
            if let Some(via) = connecting_edge(tower, a, b, &meet) {
                fibrations.compatibilities.push(Compatibility {
                    lower: a.id.clone(),
                    upper: b.id.clone(),
                    map: via.id.clone(),
                    from: tower.nodes[a.target].id.clone(),
                    to: tower.nodes[b.target].id.clone(),
                });
            }
        }
    }
    fibrations.compatibilities.sort_by(|x, y| (&x.lower, &x.upper).cmp(&(&y.lower, &y.upper)));
    NodeSkeleton { node: node.id.clone(), poset, fibrations }
}

/// The edge out of `target(a)` into `target(b)` whose hypersurface contains
/// the image of `H_a ∩ H_b`.
fn connecting_edge<'a>(tower: &'a ResolutionTower, a: &TowerEdge, b: &TowerEdge, meet: &SimplicialComplexDesc) -> Option<&'a TowerEdge> {
    tower.edges_from(a.target).map(|(_, e)| e).find(|e| {
        e.target == b.target && meet.all_simplices().all(|s| a.map.image_set(s).is_some_and(|img| e.hypersurface.contains(&img)))
    })
}

pub fn validate_tower(tower: &ResolutionTower) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, node) in tower.nodes.iter().enumerate() {
        if let Err(e) = node.group.validate() {
            out.push(violation("group", format!("node `{}`: {e}", node.id)));
        }
        if let Err(e) = node.monodromy.validate(&node.group, &node.complex) {
            out.push(violation("monodromy", format!("node `{}`: {e}", node.id)));
        }
        if i != tower.root && !node.complex.is_connected() {
            out.push(violation("component", format!("node `{}` is not connected", node.id)));
        }
    }
    for e in &tower.edges {
        let (s, t) = (&tower.nodes[e.source], &tower.nodes[e.target]);
        if !e.hypersurface.is_subcomplex_of(&s.complex) {
            out.push(violation("hypersurface", format!("`{}` is not a subcomplex of `{}`", e.id, s.id)));
        }
        if let Err(err) = e.map.validate(&e.hypersurface, &t.complex) {
            out.push(violation("map", format!("`{}`: {err}", e.id)));
        }
        if !tower.below(e.target, e.source) {
            out.push(violation("order", format!("edge `{}` does not point to a deeper type", e.id)));
        }
        if e.inclusion.source != s.group || e.inclusion.target != t.group {
            out.push(violation("inclusion", format!("edge `{}` inclusion does not match the node groups", e.id)));
        }
        if !e.inclusion.is_strict() && !t.interior_blowup {
            out.push(violation("isotropy", format!("edge `{}` points to a node with equal isotropy", e.id)));
        }
        if let Err(err) = e.inclusion.validate().and_then(|_| e.inclusion.restrict_poly().map(|_| ())) {
            out.push(violation("coefficients", format!("edge `{}`: {err}", e.id)));
        }
        match e.inclusion.restrict_rep() {
            Ok(_) | Err(GroupError::Unsupported(_)) => {}
            Err(err) => out.push(violation("coefficients", format!("edge `{}`: {err}", e.id))),
        }
    }
    for n in 0..tower.nodes.len() {
        let edges: Vec<&TowerEdge> = tower.edges_from(n).map(|(_, e)| e).collect();
        for (i, a) in edges.iter().enumerate() {
            for b in &edges[i + 1..] {
                let meet = a.hypersurface.intersection(&b.hypersurface);
                if meet.is_empty() {
                    continue;
                }
                let (ta, tb) = (tower.nodes[a.target].type_index, tower.nodes[b.target].type_index);
                if ta == tb || !(tower.type_order.contains(&(ta, tb)) || tower.type_order.contains(&(tb, ta))) {
                    out.push(violation(
                        "incomparable",
                        format!("`{}` and `{}` intersect but their types are not comparable", a.id, b.id),
                    ));
                    continue;
                }
                let (upper, lower) = if tower.type_order.contains(&(tb, ta)) { (*a, *b) } else { (*b, *a) };
                check_triangle(tower, upper, lower, &meet, &mut out);
            }
        }
        let sk = node_skeleton(tower, n);
        for v in validate_ifs(&sk.poset, &sk.fibrations) {
            out.push(violation("fibration", format!("node `{}`: {v:?}", sk.node)));
        }
    }
    out
}

/// `upper` fibers over a node of higher type than `lower`; on `H_upper ∩
/// H_lower` the fibration of `lower` must factor through an edge out of
/// `target(upper)`, both on vertices and on group inclusions.
fn check_triangle(tower: &ResolutionTower, upper: &TowerEdge, lower: &TowerEdge, meet: &SimplicialComplexDesc, out: &mut Vec<Violation>) {
    let Some(via) = connecting_edge(tower, upper, lower, meet) else {
        out.push(violation(
            "triangle",
            format!("no fibration from `{}` to `{}` closes the triangle at `{}` ∩ `{}`", tower.nodes[upper.target].id, tower.nodes[lower.target].id, upper.id, lower.id),
        ));
        return;
    };
    let vertices: Vec<Vertex> = meet.vertices();
    let commutes = vertices.iter().all(|&v| {
        let through = upper.map.vertex(v).and_then(|w| via.map.vertex(w));
        through.is_some() && through == lower.map.vertex(v)
    });
    if !commutes {
        out.push(violation("triangle", format!("`{}` ∘ `{}` differs from `{}` on their intersection", via.id, upper.id, lower.id)));
    }
    match upper.inclusion.then(&via.inclusion) {
        Ok(comp) if same_inclusion(&comp, &lower.inclusion) => {}
        _ => out.push(violation("functoriality", format!("inclusions along `{}`, `{}` and `{}` do not compose", upper.id, via.id, lower.id))),
    }
}

/// Tower edges grouped by source node id (used in reports).
pub fn edge_table(tower: &ResolutionTower) -> BTreeMap<String, Vec<String>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for e in &tower.edges {
        out.entry(tower.nodes[e.source].id.clone()).or_default().push(e.id.clone());
    }
    out
}
