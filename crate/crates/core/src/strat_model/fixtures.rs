//! Small isotropy specs used by tests and the scenario catalogue.

use std::collections::BTreeMap;

use super::monodromy::Monodromy;
use super::spec::{Cover, HypersurfaceDecl, IsotropySpec, IsotropyType};
use crate::chain_engine::{SimplicialComplexDesc, Vertex};
use crate::group_data::{CompactGroupDesc, GroupInclusion};

pub fn complex(simplices: &[&[Vertex]]) -> SimplicialComplexDesc {
    SimplicialComplexDesc::from_simplices(simplices.iter().map(|s| s.to_vec())).expect("fixture complex")
}

pub fn hyp(id: &str, simplices: &[&[Vertex]], target: &str, map: &[(Vertex, Vertex)]) -> HypersurfaceDecl {
    HypersurfaceDecl {
        id: id.into(),
        simplices: simplices.iter().map(|s| s.to_vec()).collect(),
        target: target.into(),
        vertex_map: map.iter().copied().collect::<BTreeMap<_, _>>(),
    }
}

pub fn isotropy_type(id: &str, group: CompactGroupDesc, complex: SimplicialComplexDesc, hypersurfaces: Vec<HypersurfaceDecl>) -> IsotropyType {
    IsotropyType {
        id: id.into(),
        group,
        dim: complex.dim().unwrap_or(0),
        complex,
        monodromy: Monodromy::trivial(),
        hypersurfaces,
        k_theory: None,
        interior_blowup: false,
    }
}

pub fn cover(spec_types: &[IsotropyType], lower: &str, upper: &str, lattice_map: Vec<Vec<i64>>) -> Cover {
    let group = |id: &str| spec_types.iter().find(|t| t.id == id).expect("fixture type").group.clone();
    Cover { lower: lower.into(), upper: upper.into(), inclusion: GroupInclusion::abelian(group(upper), group(lower), lattice_map) }
}

/// `T^1` rotating `S^2`: the quotient is an interval whose endpoints are
/// the two fixed points.
pub fn rotation_sphere() -> IsotropySpec {
    let types = vec![
        isotropy_type(
            "free",
            CompactGroupDesc::trivial(),
            complex(&[&[0, 1]]),
            vec![hyp("north", &[&[0]], "fixed", &[(0, 0)]), hyp("south", &[&[1]], "fixed", &[(1, 1)])],
        ),
        isotropy_type("fixed", CompactGroupDesc::torus(1), complex(&[&[0], &[1]]), vec![]),
    ];
    let covers = vec![cover(&types, "fixed", "free", vec![])];
    IsotropySpec { ambient: CompactGroupDesc::torus(1), types, covers }
}

/// `T^2` acting factorwise on `S^2 x S^2`. The quotient square has its four
/// corners blown up, giving an octagon with sides alternating between the
/// edge strata (`a`: first factor fixed, `b`: second factor fixed) and the
/// front faces over the fixed points.
pub fn torus_on_s2xs2() -> IsotropySpec {
    let t = CompactGroupDesc::torus;
    let tris: Vec<Vec<Vertex>> = (0..8).map(|i| vec![i, (i + 1) % 8, 8]).collect();
    let octagon = SimplicialComplexDesc::from_simplices(tris).expect("octagon");
    // fixed points: 0 = bl, 1 = br, 2 = tr, 3 = tl
    let root = vec![
        hyp("bottom", &[&[0, 1]], "a", &[(0, 0), (1, 1)]),
        hyp("corner_br", &[&[1, 2]], "fixed", &[(1, 1), (2, 1)]),
        hyp("right", &[&[2, 3]], "b", &[(2, 0), (3, 1)]),
        hyp("corner_tr", &[&[3, 4]], "fixed", &[(3, 2), (4, 2)]),
        hyp("top", &[&[4, 5]], "a", &[(4, 2), (5, 3)]),
        hyp("corner_tl", &[&[5, 6]], "fixed", &[(5, 3), (6, 3)]),
        hyp("left", &[&[6, 7]], "b", &[(6, 2), (7, 3)]),
        hyp("corner_bl", &[&[7, 0]], "fixed", &[(7, 0), (0, 0)]),
    ];
    // a: bottom [bl, br] and top [tr, tl]; b: right [br, tr] and left [tl, bl]
    let a = vec![
        hyp("a_bl", &[&[0]], "fixed", &[(0, 0)]),
        hyp("a_br", &[&[1]], "fixed", &[(1, 1)]),
        hyp("a_tr", &[&[2]], "fixed", &[(2, 2)]),
        hyp("a_tl", &[&[3]], "fixed", &[(3, 3)]),
    ];
    let b = vec![
        hyp("b_br", &[&[0]], "fixed", &[(0, 1)]),
        hyp("b_tr", &[&[1]], "fixed", &[(1, 2)]),
        hyp("b_tl", &[&[2]], "fixed", &[(2, 3)]),
        hyp("b_bl", &[&[3]], "fixed", &[(3, 0)]),
    ];
    let types = vec![
        isotropy_type("free", CompactGroupDesc::trivial(), octagon, root),
        isotropy_type("a", t(1), complex(&[&[0, 1], &[2, 3]]), a),
        isotropy_type("b", t(1), complex(&[&[0, 1], &[2, 3]]), b),
        isotropy_type("fixed", t(2), complex(&[&[0], &[1], &[2], &[3]]), vec![]),
    ];
    let covers = vec![
        cover(&types, "a", "free", vec![]),
        cover(&types, "b", "free", vec![]),
        cover(&types, "fixed", "a", vec![vec![1, 0]]),
        cover(&types, "fixed", "b", vec![vec![0, 1]]),
    ];
    IsotropySpec { ambient: t(2), types, covers }
}
