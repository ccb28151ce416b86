use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{KClassPresentation, ModelError};
use crate::chain_engine::{constraint_defect, tower_coboundary, TowerCoefficients};
use crate::group_data::{borel_fiber, chern_of_rep, Poly};
use crate::linalg::{Matrix, Rational};
use crate::strat_model::ResolutionTower;

/// Image of a K^0 class: on each node the constant Borel-valued 0-cochain
/// `ch(τ_n)`, truncated to total degree `max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernImage {
    pub max_degree: u32,
    pub nodes: BTreeMap<String, Poly>,
    /// Violated equalizer constraints (zero for a valid class).
    pub defect: usize,
    pub closed: bool,
}

impl ChernImage {
    /// Degree-0 value per node.
    pub fn degree_zero(&self) -> BTreeMap<String, Rational> {
        self.nodes.iter().map(|(n, p)| (n.clone(), p.coeff(&vec![0; p.nvars()]))).collect()
    }
}

/// Coordinates of the image in the form-degree-0 cochains of every piece.
fn cochains(tower: &ResolutionTower, coeff: &TowerCoefficients, polys: &[Poly]) -> Vec<Vec<Vec<Rational>>> {
    coeff
        .degrees
        .iter()
        .map(|&d| {
            tower
                .nodes
                .iter()
                .zip(polys)
                .map(|(n, p)| {
                    let coords = borel_fiber(&n.group).piece(d).coords(p);
                    (0..n.complex.count(0)).flat_map(|_| coords.iter().cloned()).collect()
                })
                .collect()
        })
        .collect()
}

fn images(tower: &ResolutionTower, k: &KClassPresentation, max_degree: u32) -> Result<Vec<Poly>, ModelError> {
    let full = k.complete(tower)?;
    tower.nodes.iter().map(|n| Ok(chern_of_rep(&n.group, &full.classes[&n.id], max_degree)?)).collect()
}

pub fn chern_character(tower: &ResolutionTower, k: &KClassPresentation, max_degree: u32) -> Result<ChernImage, ModelError> {
    let polys = images(tower, k, max_degree)?;
    let coeff = TowerCoefficients::borel(tower, max_degree as usize)?;
    let values = cochains(tower, &coeff, &polys);
    let mut defect = 0;
    let mut closed = true;
    for (piece, v) in values.iter().enumerate() {
        defect += constraint_defect(tower, &coeff, piece, 0, v);
        closed &= tower_coboundary(tower, &coeff, piece, 0, v).iter().all(|x| x.is_zero());
    }
    if defect > 0 {
        return Err(ModelError::ConstraintViolation(defect));
    }
    let nodes = tower.nodes.iter().zip(polys).map(|(n, p)| (n.id.clone(), p)).collect();
    Ok(ChernImage { max_degree, nodes, defect, closed })
}

/// Rank of the span of the Chern images of `classes` in cohomology. The
/// images are closed 0-cochains and nothing bounds in form degree 0, so
/// this is the rank of the cochain vectors themselves.
pub fn chern_rank(tower: &ResolutionTower, classes: &[KClassPresentation], max_degree: u32) -> Result<usize, ModelError> {
    let coeff = TowerCoefficients::borel(tower, max_degree as usize)?;
    let mut columns = Vec::with_capacity(classes.len());
    for k in classes {
        let polys = images(tower, k, max_degree)?;
        let v: Vec<Rational> = cochains(tower, &coeff, &polys).into_iter().flatten().flatten().collect();
        columns.push(v);
    }
    let rows = columns.first().map_or(0, |c| c.len());
    let mut m = Matrix::zeros(rows, columns.len());
    for (j, c) in columns.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant_models::{reduced_cartan_cohomology, reduced_k_theory};
    use crate::group_data::{Character, VirtualCharacter};
    use crate::linalg::{rat, rat_frac};
    use crate::strat_model::fixtures::rotation_sphere;
    use crate::strat_model::{canonical_resolution, KFixture};

    fn sphere() -> ResolutionTower {
        let mut spec = rotation_sphere();
        for t in &mut spec.types {
            t.k_theory = Some(KFixture { k0: 1, k1: 0 });
        }
        canonical_resolution(&spec).unwrap().0
    }

    fn poles(n: VirtualCharacter, s: VirtualCharacter) -> KClassPresentation {
        KClassPresentation { classes: [("fixed#0".to_string(), n), ("fixed#1".to_string(), s)].into() }
    }

    #[test]
    fn exponential_at_north_pole() {
        let t = sphere();
        let one = VirtualCharacter::single(Character(vec![0]));
        let img = chern_character(&t, &poles(VirtualCharacter::single(Character(vec![1])), one.clone()), 8).unwrap();
        let north = &img.nodes["fixed#0"];
        for (k, c) in [(0, rat(1)), (1, rat(1)), (2, rat_frac(1, 2)), (3, rat_frac(1, 6)), (4, rat_frac(1, 24))] {
            assert_eq!(north.coeff(&[k]), c);
        }
        assert_eq!(img.nodes["fixed#1"], Poly::one(1));
        assert!(img.closed);
        assert_eq!(img.degree_zero().values().collect::<Vec<_>>(), [&rat(1); 3]);
        let unit = chern_character(&t, &poles(one.clone(), one), 8).unwrap();
        assert!(unit.nodes.values().all(|p| p.terms().count() == 1));
    }

    #[test]
    fn window_basis_spans_even_cohomology() {
        let t = sphere();
        let k = reduced_k_theory(&t, -2, 2).unwrap();
        let even: usize = reduced_cartan_cohomology(&t, 8).unwrap().even();
        assert_eq!(chern_rank(&t, &k.basis, 8).unwrap(), even);
        assert_eq!(even, 9);
    }
}
