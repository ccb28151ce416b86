use std::collections::{BTreeSet, HashMap};

use super::monodromy::Monodromy;
use super::spec::KFixture;
use crate::chain_engine::{Simplex, SimplicialComplexDesc, SimplicialMapDesc, Vertex};
use crate::group_data::{CompactGroupDesc, GroupInclusion};

/// A resolved quotient: the root `Z` or a resolved stratum quotient `Z_I`
/// (one connected component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerNode {
    pub id: String,
    pub type_id: String,
    pub type_index: usize,
    pub group: CompactGroupDesc,
    pub complex: SimplicialComplexDesc,
    pub monodromy: Monodromy,
    pub depth: usize,
    pub k_theory: Option<KFixture>,
    pub interior_blowup: bool,
}

/// Fibration `psi_H: H -> Z_target` of a boundary hypersurface of the source
/// node, decorated by the inclusion of the source group into the target
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerEdge {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub hypersurface: SimplicialComplexDesc,
    pub map: SimplicialMapDesc,
    pub inclusion: GroupInclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTower {
    pub ambient: CompactGroupDesc,
    pub nodes: Vec<TowerNode>,
    pub edges: Vec<TowerEdge>,
    pub root: usize,
    pub type_ids: Vec<String>,
    /// Strict type order as `(lower, upper)` pairs of type indices.
    pub type_order: BTreeSet<(usize, usize)>,
}

impl ResolutionTower {
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn edges_from(&self, n: usize) -> impl Iterator<Item = (usize, &TowerEdge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == n)
    }

    /// `type(a) ≺ type(b)` for nodes `a`, `b`.
    pub fn below(&self, a: usize, b: usize) -> bool {
        self.type_order.contains(&(self.nodes[a].type_index, self.nodes[b].type_index))
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Boundary classes: every non-root node.
    pub fn boundary_classes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| i != self.root).collect()
    }

    /// A set of boundary classes is closed below when it contains every
    /// node whose type lies below the type of one of its members.
    pub fn is_closed_below(&self, set: &BTreeSet<usize>) -> bool {
        !set.contains(&self.root) && set.iter().all(|&n| (0..self.nodes.len()).all(|m| !self.below(m, n) || set.contains(&m)))
    }

    /// Barycentric subdivision of every node complex, with induced
    /// hypersurfaces, fibrations and monodromy.
    pub fn subdivide(&self) -> ResolutionTower {
        let sds: Vec<(SimplicialComplexDesc, Vec<Simplex>)> = self.nodes.iter().map(|n| n.complex.barycentric_subdivision()).collect();
        let index: Vec<HashMap<&Simplex, Vertex>> =
            sds.iter().map(|(_, labels)| labels.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let nodes = self
            .nodes
            .iter()
            .zip(&sds)
            .map(|(n, (sd, labels))| TowerNode {
                complex: sd.clone(),
                monodromy: n.monodromy.pull_back(sd, n.group.character_len(), |v| labels[v][0]),
                ..n.clone()
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (sd, labels) = &sds[e.source];
                let verts: BTreeSet<Vertex> = (0..labels.len()).filter(|&v| e.hypersurface.contains(&labels[v])).collect();
                let hypersurface = sd.induced(&verts);
                let vertex_map = verts
                    .iter()
                    .map(|&v| {
                        let img = e.map.image_set(&labels[v]).expect("edge maps are total on their hypersurface");
                        (v, index[e.target][&img])
                    })
                    .collect();
                TowerEdge { hypersurface, map: SimplicialMapDesc::new(vertex_map), ..e.clone() }
            })
            .collect();
        ResolutionTower { nodes, edges, ..self.clone() }
    }
}
