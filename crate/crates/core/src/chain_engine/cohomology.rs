use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplexDesc;
use super::local_system::{twisted_coboundary, LocalSystem};
use super::ChainError;
use crate::linalg::{Matrix, Subspace};

/// Ranks of a graded cohomology group, indexed by total degree `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyTable {
    pub ranks: Vec<usize>,
}

impl CohomologyTable {
    pub fn new(ranks: Vec<usize>) -> Self {
        CohomologyTable { ranks }
    }

    pub fn get(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn even(&self) -> usize {
        self.ranks.iter().step_by(2).sum()
    }

    pub fn odd(&self) -> usize {
        self.ranks.iter().skip(1).step_by(2).sum()
    }

    pub fn parity(&self) -> ParityTable {
        ParityTable { even: self.even(), odd: self.odd() }
    }

    pub fn truncated(&self, max: usize) -> CohomologyTable {
        CohomologyTable { ranks: self.ranks.iter().take(max + 1).copied().collect() }
    }
}

/// Ranks collapsed to even and odd total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityTable {
    pub even: usize,
    pub odd: usize,
}

/// One bigraded piece of a slice: cochains of form degree `form_degree`
/// with coefficients in strand `strand` (of coefficient degree
/// `coeff_degree`), cut out by the constraints.
#[derive(Clone, Debug)]
pub struct SlicePart {
    pub strand: usize,
    pub form_degree: usize,
    pub coeff_degree: u32,
    /// Constrained subspace of the ambient cochain space.
    pub space: Subspace,
    /// Differential into the form-degree-`p+1` part of the same strand, in
    /// subspace coordinates on both sides.
    pub differential: Matrix,
}

impl SlicePart {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// All parts of total degree `degree`.
#[derive(Clone, Debug)]
pub struct TowerComplexSlice {
    pub degree: usize,
    pub parts: Vec<SlicePart>,
}

impl TowerComplexSlice {
    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }
}

/// A cochain complex in a single coefficient piece, given by constrained
/// spaces `E_p` and differentials between them.
pub(crate) struct Strand {
    pub coeff_degree: u32,
    pub spaces: Vec<Subspace>,
    pub differentials: Vec<Matrix>,
}

impl Strand {
    /// Restricts ambient differentials `d_p` to the constrained spaces. The
    /// constraints are assumed to form a subcomplex; this is checked.
    pub fn restrict(coeff_degree: u32, spaces: Vec<Subspace>, ambient: &[Matrix]) -> Result<Strand, ChainError> {
        let mut differentials = Vec::with_capacity(spaces.len());
        for (p, e) in spaces.iter().enumerate() {
            let image = ambient[p].mul(&e.basis);
            let next = match spaces.get(p + 1) {
                Some(n) => n,
                None => {
                    if !image.is_zero() {
                        return Err(ChainError::Inconsistent("differential leaves the top form degree".into()));
                    }
                    differentials.push(Matrix::zeros(0, e.dim()));
                    continue;
                }
            };
            let coords = next.coordinates(&image);
            if next.basis.mul(&coords) != image {
                return Err(ChainError::NotSubcomplex { form_degree: p, coeff_degree });
            }
            differentials.push(coords);
        }
        Ok(Strand { coeff_degree, spaces, differentials })
    }
}

pub(crate) fn slices_from_strands(strands: Vec<Strand>, max_degree: usize) -> Vec<TowerComplexSlice> {
    let mut slices: Vec<TowerComplexSlice> =
        (0..=max_degree).map(|degree| TowerComplexSlice { degree, parts: Vec::new() }).collect();
    for (k, s) in strands.into_iter().enumerate() {
        for (p, (space, differential)) in s.spaces.into_iter().zip(s.differentials).enumerate() {
            let n = p + s.coeff_degree as usize;
            if n <= max_degree {
                slices[n].parts.push(SlicePart {
                    strand: k,
                    form_degree: p,
                    coeff_degree: s.coeff_degree,
                    space,
                    differential,
                });
            }
        }
    }
    slices
}

/// Ranks `dim ker d_n - rank d_(n-1)` for each slice, after checking that
/// consecutive differentials compose to zero.
pub fn cohomology(slices: &[TowerComplexSlice]) -> Result<CohomologyTable, ChainError> {
    let mut by_key: HashMap<(usize, usize), &SlicePart> = HashMap::new();
    for s in slices {
        for part in &s.parts {
            by_key.insert((part.strand, part.form_degree), part);
        }
    }
    let mut rank_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&key, part) in &by_key {
        if let Some(next) = by_key.get(&(key.0, key.1 + 1)) {
            if next.differential.cols() != part.differential.rows() {
                return Err(ChainError::Inconsistent("slice differentials are not composable".into()));
            }
            if !next.differential.mul(&part.differential).is_zero() {
                return Err(ChainError::DSquaredNonzero { degree: key.1 + part.coeff_degree as usize });
            }
        }
        rank_of.insert(key, part.differential.rank());
    }
    let ranks = slices
        .iter()
        .map(|s| {
            s.parts
                .iter()
                .map(|part| {
                    let out = rank_of[&(part.strand, part.form_degree)];
                    let inc = part.form_degree.checked_sub(1).and_then(|q| rank_of.get(&(part.strand, q))).copied().unwrap_or(0);
                    part.dim() - out - inc
                })
                .sum()
        })
        .collect();
    Ok(CohomologyTable { ranks })
}

/// Cohomology of `X` with coefficients in `L`, in total degrees
/// `0..=max_degree` (total degree = form degree + piece degree).
pub fn twisted_cohomology(
    x: &SimplicialComplexDesc,
    l: &LocalSystem,
    max_degree: usize,
) -> Result<CohomologyTable, ChainError> {
    if l.pieces().is_empty() {
        return Err(ChainError::EmptyWindow);
    }
    l.validate(x)?;
    let top = x.dim().map_or(0, |d| d + 1);
    let mut strands = Vec::new();
    for (k, &(q, dim)) in l.pieces().iter().enumerate() {
        if q as usize > max_degree {
            continue;
        }
        let ambient: Vec<Matrix> = (0..top).map(|p| twisted_coboundary(x, l, k, p)).collect();
        let spaces = (0..top).map(|p| Subspace::full(x.count(p) * dim)).collect();
        strands.push(Strand::restrict(q, spaces, &ambient)?);
    }
    cohomology(&slices_from_strands(strands, max_degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn constant_q() -> LocalSystem {
        LocalSystem::constant(vec![(0, 1)])
    }

    #[test]
    fn interval_and_circle_constant() {
        let interval = SimplicialComplexDesc::from_simplices([[0, 1]]).unwrap();
        assert_eq!(twisted_cohomology(&interval, &constant_q(), 1).unwrap().ranks, vec![1, 0]);
        let circle = SimplicialComplexDesc::from_simplices([[0, 1], [1, 2], [0, 2]]).unwrap();
        assert_eq!(twisted_cohomology(&circle, &constant_q(), 1).unwrap().ranks, vec![1, 1]);
    }

    #[test]
    fn circle_with_sign_monodromy() {
        let circle = SimplicialComplexDesc::from_simplices([[0, 1], [1, 2], [0, 2]]).unwrap();
        let mut l = constant_q();
        l.set_edge(0, 2, vec![Matrix::from_i64(&[vec![-1]], 1)]).unwrap();
        assert_eq!(twisted_cohomology(&circle, &l, 1).unwrap().ranks, vec![0, 0]);
        // oracle: the 3x3 coboundary has full rank
        let d = twisted_coboundary(&circle, &l, 0, 0);
        assert_eq!(d.rank(), 3);
    }

    #[test]
    fn zero_differential_table() {
        let part = |strand, p, dim: usize, rows: usize| SlicePart {
            strand,
            form_degree: p,
            coeff_degree: 0,
            space: Subspace::full(dim),
            differential: Matrix::zeros(rows, dim),
        };
        let slices = vec![
            TowerComplexSlice { degree: 0, parts: vec![part(0, 0, 2, 3)] },
            TowerComplexSlice { degree: 1, parts: vec![part(0, 1, 3, 0)] },
        ];
        assert_eq!(cohomology(&slices).unwrap().ranks, vec![2, 3]);
    }

    #[test]
    fn detects_nonzero_square() {
        let mut d0 = Matrix::zeros(1, 1);
        d0.set(0, 0, rat(1));
        let slices = vec![
            TowerComplexSlice {
                degree: 0,
                parts: vec![SlicePart { strand: 0, form_degree: 0, coeff_degree: 0, space: Subspace::full(1), differential: d0.clone() }],
            },
            TowerComplexSlice {
                degree: 1,
                parts: vec![SlicePart { strand: 0, form_degree: 1, coeff_degree: 0, space: Subspace::full(1), differential: d0 }],
            },
        ];
        assert!(matches!(cohomology(&slices), Err(ChainError::DSquaredNonzero { .. })));
    }

    #[test]
    fn graded_fiber_totals() {
        // circle with fiber Q[u] through degree 4: (1+t)(1+t^2+t^4)
        let circle = SimplicialComplexDesc::from_simplices([[0, 1], [1, 2], [0, 2]]).unwrap();
        let l = LocalSystem::constant(vec![(0, 1), (2, 1), (4, 1)]);
        assert_eq!(twisted_cohomology(&circle, &l, 4).unwrap().ranks, vec![1, 1, 1, 1, 1]);
    }
}
