//! Graded commutative rings given by generators in even degrees and
//! homogeneous relations, with exact per-degree bases.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{monomials_of_degree, Monomial, Poly};
use super::GroupError;
use crate::linalg::{Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedRingDesc {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<Poly>,
}

impl GradedRingDesc {
    /// Polynomial ring on `rank` generators of degree 2.
    pub fn polynomial(rank: usize) -> Self {
        GradedRingDesc {
            generators: (1..=rank).map(|i| Generator { name: format!("u{i}"), degree: 2 }).collect(),
            relations: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        for g in &self.generators {
            if g.degree < 2 || g.degree % 2 != 0 {
                return Err(GroupError::BadGeneratorDegree { name: g.name.clone(), degree: g.degree });
            }
        }
        let w = self.weights();
        for (i, r) in self.relations.iter().enumerate() {
            if r.nvars() != self.rank() {
                return Err(GroupError::BadRelation { index: i, reason: "wrong number of variables".into() });
            }
            let Some((e, _)) = r.terms().next() else {
                continue;
            };
            let d = Poly::weighted_degree(e, &w);
            if d == 0 {
                return Err(GroupError::BadRelation { index: i, reason: "relation in degree 0".into() });
            }
            if !r.is_homogeneous(&w, d) {
                return Err(GroupError::BadRelation { index: i, reason: "not homogeneous".into() });
            }
        }
        Ok(())
    }

    pub fn piece(&self, d: u32) -> GradedPiece {
        let w = self.weights();
        let monomials = monomials_of_degree(&w, d);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for r in &self.relations {
            let Some((e, _)) = r.terms().next() else {
                continue;
            };
            let rd = Poly::weighted_degree(e, &w);
            if rd > d {
                continue;
            }
            for m in monomials_of_degree(&w, d - rd) {
                let mut mono = Poly::zero(self.rank());
                mono.add_term(m, Rational::from_integer(1.into()));
                let prod = mono.mul(r);
                let mut row = vec![Rational::zero(); monomials.len()];
                for (e, c) in prod.terms() {
                    row[index[e]] = c.clone();
                }
                rows.push(row);
            }
        }
        let (rref, pivots) = if rows.is_empty() {
            (Matrix::zeros(0, monomials.len()), Vec::new())
        } else {
            let (m, p) = Matrix::from_rows(rows).rref();
            (m.select_rows(&(0..p.len()).collect::<Vec<_>>()), p)
        };
        let basis = (0..monomials.len()).filter(|i| !pivots.contains(i)).collect();
        GradedPiece { degree: d, monomials, index, relations: rref, pivots, basis }
    }

    pub fn dim(&self, d: u32) -> usize {
        if !d.is_multiple_of(2) {
            return 0;
        }
        if self.relations.is_empty() {
            return monomials_of_degree(&self.weights(), d).len();
        }
        self.piece(d).dim()
    }

    /// Dimensions in degrees `0..=max`.
    pub fn hilbert(&self, max: u32) -> Vec<usize> {
        (0..=max).map(|d| self.dim(d)).collect()
    }
}

/// A fixed-degree piece of a graded ring: monomials of that degree modulo
/// the relation multiples, with the non-pivot monomials as basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: Matrix,
    pivots: Vec<usize>,
    basis: Vec<usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomials(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|&i| &self.monomials[i]).collect()
    }

    /// Coordinates of the degree-`degree` component of `p` in the quotient
    /// basis.
    pub fn coords(&self, p: &Poly) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (e, c) in p.terms() {
            if let Some(&i) = self.index.get(e) {
                v[i] += c;
            }
        }
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = v[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (j, x) in self.relations.row(r).iter().enumerate() {
                if !x.is_zero() {
                    v[j] -= &f * x;
                }
            }
        }
        self.basis.iter().map(|&i| v[i].clone()).collect()
    }
}

/// Graded ring homomorphism given by images of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub domain: GradedRingDesc,
    pub codomain: GradedRingDesc,
    pub images: Vec<Poly>,
}

impl RingMap {
    pub fn new(domain: GradedRingDesc, codomain: GradedRingDesc, images: Vec<Poly>) -> Result<Self, GroupError> {
        if images.len() != domain.rank() {
            return Err(GroupError::DimensionMismatch(format!(
                "{} generator images for a ring with {} generators",
                images.len(),
                domain.rank()
            )));
        }
        let w = codomain.weights();
        for (g, img) in domain.generators.iter().zip(&images) {
            if img.nvars() != codomain.rank() {
                return Err(GroupError::DimensionMismatch(format!(
                    "image of {} has {} variables, codomain has {}",
                    g.name,
                    img.nvars(),
                    codomain.rank()
                )));
            }
            if !img.is_homogeneous(&w, g.degree) {
                return Err(GroupError::NotGraded(g.name.clone()));
            }
        }
        let map = RingMap { domain, codomain, images };
        // relations must land in the codomain ideal
        for r in &map.domain.relations {
            let Some((e, _)) = r.terms().next() else {
                continue;
            };
            let d = Poly::weighted_degree(e, &map.domain.weights());
            let img = map.apply(r);
            if map.codomain.piece(d).coords(&img).iter().any(|x| !x.is_zero()) {
                return Err(GroupError::RelationNotPreserved);
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &GradedRingDesc) -> Self {
        let n = ring.rank();
        RingMap { domain: ring.clone(), codomain: ring.clone(), images: (0..n).map(|i| Poly::var(n, i)).collect() }
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        p.substitute(&self.images, self.codomain.rank())
    }

    /// Matrix of the map on degree-`d` pieces (codomain dim x domain dim).
    pub fn matrix(&self, d: u32) -> Matrix {
        let src = self.domain.piece(d);
        let dst = self.codomain.piece(d);
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for (j, mono) in src.basis_monomials().into_iter().enumerate() {
            let mut p = Poly::zero(self.domain.rank());
            p.add_term(mono.clone(), Rational::from_integer(1.into()));
            for (i, c) in dst.coords(&self.apply(&p)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> RingMap {
        assert_eq!(self.codomain, other.domain, "composable ring maps");
        RingMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            images: self.images.iter().map(|p| other.apply(p)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn polynomial_ring_dims() {
        let r = GradedRingDesc::polynomial(2);
        assert_eq!(r.hilbert(6), vec![1, 0, 2, 0, 3, 0, 4]);
        assert_eq!(GradedRingDesc::polynomial(0).hilbert(4), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn quotient_ring_dims() {
        // Q[a, b] / (a b), both in degree 2: Hilbert series 1 + 2t^2 + 2t^4 + ...
        let mut r = GradedRingDesc::polynomial(2);
        r.relations.push(Poly::var(2, 0).mul(&Poly::var(2, 1)));
        r.validate().unwrap();
        assert_eq!(r.hilbert(8), vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn degree_four_generator() {
        let r = GradedRingDesc {
            generators: vec![Generator { name: "u".into(), degree: 2 }, Generator { name: "c".into(), degree: 4 }],
            relations: vec![],
        };
        assert_eq!(r.hilbert(8), vec![1, 0, 1, 0, 2, 0, 2, 0, 3]);
    }

    #[test]
    fn rejects_odd_generators() {
        let r = GradedRingDesc { generators: vec![Generator { name: "x".into(), degree: 3 }], relations: vec![] };
        assert!(r.validate().is_err());
    }

    #[test]
    fn map_matrix_diagonal() {
        let target = GradedRingDesc::polynomial(2);
        let source = GradedRingDesc::polynomial(1);
        let u = Poly::var(1, 0);
        let map = RingMap::new(target, source, vec![u.clone(), u]).unwrap();
        // degree 4 basis of Q[u1,u2]: u1^2, u1 u2, u2^2 -> u^2 each
        let m = map.matrix(4);
        assert_eq!(m, Matrix::from_i64(&[vec![1, 1, 1]], 3));
        assert_eq!(map.matrix(0).get(0, 0), &rat(1));
    }
}
