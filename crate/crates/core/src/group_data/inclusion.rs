use serde::{Deserialize, Serialize};

use super::group::{borel_fiber, rep_ring, Character, CompactGroupDesc, RepRingDesc, VirtualCharacter};
use super::poly::Poly;
use super::ring::RingMap;
use super::GroupError;
use crate::linalg::{Matrix, Rational, Q};

/// An inclusion `source ⊂ target` of compact groups.
///
/// `lattice_map` sends target characters to source characters: rows are
/// indexed by source character coordinates, columns by target character
/// coordinates. `lie_map` is the Lie algebra inclusion on torus parts
/// (rows: target torus rank, columns: source torus rank); when omitted it is
/// the transpose of the torus block of `lattice_map`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInclusion {
    pub source: CompactGroupDesc,
    pub target: CompactGroupDesc,
    #[serde(default)]
    pub lattice_map: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_map: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal: Option<FormalInclusion>,
}

/// Restriction data supplied directly when either group is formal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalInclusion {
    /// Images of the target Borel generators, as polynomials in the source
    /// Borel generators.
    pub poly_images: Vec<Poly>,
    /// Images of the target basis characters (formal targets only).
    #[serde(default)]
    pub rep_images: Vec<VirtualCharacter>,
}

impl GroupInclusion {
    pub fn identity(k: &CompactGroupDesc) -> Self {
        let n = k.character_len();
        let formal = k.formal.as_ref().map(|f| FormalInclusion {
            poly_images: (0..f.borel.rank()).map(|i| Poly::var(f.borel.rank(), i)).collect(),
            rep_images: (0..f.rep.basis.len()).map(|i| VirtualCharacter::single(Character(vec![i as i64]))).collect(),
        });
        GroupInclusion {
            source: k.clone(),
            target: k.clone(),
            lattice_map: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
            lie_map: None,
            formal,
        }
    }

    /// Abelian inclusion from a lattice map alone.
    pub fn abelian(source: CompactGroupDesc, target: CompactGroupDesc, lattice_map: Vec<Vec<i64>>) -> Self {
        GroupInclusion { source, target, lattice_map, lie_map: None, formal: None }
    }

    fn uses_formal(&self) -> bool {
        self.source.is_formal() || self.target.is_formal()
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        self.source.validate()?;
        self.target.validate()?;
        if self.uses_formal() {
            let f = self.formal.as_ref().ok_or(GroupError::MissingFormalInclusion)?;
            if f.poly_images.len() != borel_fiber(&self.target).rank() {
                return Err(GroupError::DimensionMismatch("formal poly_images length".into()));
            }
            if self.target.is_formal() {
                let n = rep_ring(&self.target).window(0, 0).len();
                if f.rep_images.len() != n {
                    return Err(GroupError::DimensionMismatch("formal rep_images length".into()));
                }
            }
            self.restrict_poly()?;
            return Ok(());
        }
        let (rs, rt) = (self.source.character_len(), self.target.character_len());
        if self.lattice_map.len() != rs || self.lattice_map.iter().any(|row| row.len() != rt) {
            return Err(GroupError::DimensionMismatch(format!(
                "lattice_map must be {rs}x{rt} for {} ⊂ {}",
                self.source, self.target
            )));
        }
        let (ts, tt) = (self.source.torus_rank, self.target.torus_rank);
        for (jf, &mj) in self.target.finite_part.iter().enumerate() {
            let j = tt + jf;
            for (i, row) in self.lattice_map.iter().enumerate() {
                let ok = if i < ts {
                    row[j] == 0
                } else {
                    let mi = self.source.finite_part[i - ts] as i64;
                    (mj as i64 * row[j]).rem_euclid(mi) == 0
                };
                if !ok {
                    return Err(GroupError::IllDefinedLatticeMap { row: i, col: j });
                }
            }
        }
        if let Some(lie) = &self.lie_map {
            if lie.len() != tt || lie.iter().any(|row| row.len() != ts) {
                return Err(GroupError::DimensionMismatch(format!("lie_map must be {tt}x{ts}")));
            }
            if lie != &self.derived_lie_map() {
                return Err(GroupError::IncompatibleLieMap);
            }
        }
        Ok(())
    }

    fn derived_lie_map(&self) -> Vec<Vec<Q>> {
        let (ts, tt) = (self.source.torus_rank, self.target.torus_rank);
        (0..tt).map(|j| (0..ts).map(|i| Q(Rational::from_integer(self.lattice_map[i][j].into()))).collect()).collect()
    }

    pub fn lie_matrix(&self) -> Matrix {
        let lie = self.lie_map.clone().unwrap_or_else(|| self.derived_lie_map());
        Matrix::from_rows(lie.into_iter().map(|r| r.into_iter().map(|q| q.0).collect()).collect())
    }

    /// Restriction `S(k_target*) -> S(k_source*)` of invariant polynomials.
    pub fn restrict_poly(&self) -> Result<RingMap, GroupError> {
        let dom = borel_fiber(&self.target);
        let cod = borel_fiber(&self.source);
        if self.uses_formal() {
            let f = self.formal.as_ref().ok_or(GroupError::MissingFormalInclusion)?;
            return RingMap::new(dom, cod, f.poly_images.clone());
        }
        let (ts, tt) = (self.source.torus_rank, self.target.torus_rank);
        let lie = self.lie_map.clone().unwrap_or_else(|| self.derived_lie_map());
        if lie.len() != tt || lie.iter().any(|r| r.len() != ts) {
            return Err(GroupError::DimensionMismatch(format!("lie_map must be {tt}x{ts}")));
        }
        let images = lie
            .iter()
            .map(|row| {
                if ts == 0 {
                    Poly::zero(0)
                } else {
                    Poly::linear(&row.iter().map(|q| q.0.clone()).collect::<Vec<_>>())
                }
            })
            .collect();
        RingMap::new(dom, cod, images)
    }

    /// Restriction `R(target) -> R(source)` of representations.
    pub fn restrict_rep(&self) -> Result<RepMap, GroupError> {
        let domain = rep_ring(&self.target);
        let codomain = rep_ring(&self.source);
        let kind = if self.target.is_formal() {
            let f = self.formal.as_ref().ok_or(GroupError::MissingFormalInclusion)?;
            RepMapKind::Images(f.rep_images.clone())
        } else if self.source.is_formal() {
            return Err(GroupError::Unsupported("restriction from an abelian group to a formal subgroup".into()));
        } else {
            let (rs, rt) = (self.source.character_len(), self.target.character_len());
            if self.lattice_map.len() != rs || self.lattice_map.iter().any(|row| row.len() != rt) {
                return Err(GroupError::DimensionMismatch(format!("lattice_map must be {rs}x{rt}")));
            }
            RepMapKind::Lattice(self.lattice_map.clone())
        };
        Ok(RepMap { domain, codomain, kind })
    }

    /// The inclusion `self.source ⊂ outer.target` through `self.target`.
    pub fn then(&self, outer: &GroupInclusion) -> Result<GroupInclusion, GroupError> {
        if self.target != outer.source {
            return Err(GroupError::NotComposable);
        }
        if !self.uses_formal() && !outer.uses_formal() {
            let rows = self.lattice_map.len();
            let cols = outer.target.character_len();
            let mid = self.target.character_len();
            let mut l = vec![vec![0i64; cols]; rows];
            for (i, row) in l.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = (0..mid).map(|k| self.lattice_map[i][k] * outer.lattice_map[k][j]).sum();
                }
            }
            let lie_map = match (&self.lie_map, &outer.lie_map) {
                (None, None) => None,
                _ => {
                    let m = outer.lie_matrix().mul(&self.lie_matrix());
                    Some((0..m.rows()).map(|i| m.row(i).iter().cloned().map(Q).collect()).collect())
                }
            };
            return Ok(GroupInclusion { source: self.source.clone(), target: outer.target.clone(), lattice_map: l, lie_map, formal: None });
        }
        let poly = self.restrict_poly()?;
        let outer_poly = outer.restrict_poly()?;
        let poly_images = outer_poly.then(&poly).images;
        let rep_images = if outer.target.is_formal() {
            let inner = self.restrict_rep()?;
            let outer_rep = outer.restrict_rep()?;
            outer_rep
                .domain
                .window(0, 0)
                .iter()
                .map(|c| inner.apply_virtual(&outer_rep.apply(c)?))
                .collect::<Result<_, _>>()?
        } else {
            Vec::new()
        };
        Ok(GroupInclusion {
            source: self.source.clone(),
            target: outer.target.clone(),
            lattice_map: Vec::new(),
            lie_map: None,
            formal: Some(FormalInclusion { poly_images, rep_images }),
        })
    }

    /// False when the inclusion is an isomorphism of a group onto itself.
    pub fn is_strict(&self) -> bool {
        if self.source != self.target {
            return true;
        }
        if self.uses_formal() {
            return self.formal.as_ref().is_some_and(|f| {
                let id = GroupInclusion::identity(&self.source);
                id.formal.as_ref() != Some(f)
            });
        }
        let n = self.source.character_len();
        let m = Matrix::from_i64(&self.lattice_map, n);
        match m.inverse() {
            Some(inv) => (0..n).any(|i| (0..n).any(|j| !inv.get(i, j).is_integer())),
            None => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepMapKind {
    Lattice(Vec<Vec<i64>>),
    Images(Vec<VirtualCharacter>),
}

/// Ring map between representation rings, from `domain` to `codomain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMap {
    pub domain: RepRingDesc,
    pub codomain: RepRingDesc,
    pub kind: RepMapKind,
}

impl RepMap {
    pub fn apply(&self, c: &Character) -> Result<VirtualCharacter, GroupError> {
        let c = self.domain.normalize(c)?;
        match &self.kind {
            RepMapKind::Lattice(l) => {
                let img: Vec<i64> = l.iter().map(|row| row.iter().zip(&c.0).map(|(a, b)| a * b).sum()).collect();
                Ok(VirtualCharacter::single(self.codomain.normalize(&Character(img))?))
            }
            RepMapKind::Images(imgs) => Ok(imgs[c.0[0] as usize].clone()),
        }
    }

    pub fn apply_virtual(&self, v: &VirtualCharacter) -> Result<VirtualCharacter, GroupError> {
        let mut out = VirtualCharacter::zero();
        for (c, n) in v.terms() {
            out = out.add(&self.apply(c)?.scale(n));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn t(n: usize) -> CompactGroupDesc {
        CompactGroupDesc::torus(n)
    }

    #[test]
    fn trivial_subgroup_of_circle() {
        let i = GroupInclusion::abelian(t(0), t(1), vec![]);
        i.validate().unwrap();
        let p = i.restrict_poly().unwrap();
        assert_eq!(p.matrix(2).rows(), 0);
        assert_eq!(p.matrix(0), Matrix::identity(1));
        let r = i.restrict_rep().unwrap();
        for n in -3..=3 {
            assert_eq!(r.apply(&Character(vec![n])).unwrap(), VirtualCharacter::single(Character(vec![])));
        }
    }

    #[test]
    fn diagonal_circle() {
        let i = GroupInclusion::abelian(t(1), t(2), vec![vec![1, 1]]);
        i.validate().unwrap();
        let p = i.restrict_poly().unwrap();
        let u = Poly::var(1, 0);
        assert_eq!(p.images, vec![u.clone(), u]);
        let r = i.restrict_rep().unwrap();
        assert_eq!(r.apply(&Character(vec![2, -5])).unwrap(), VirtualCharacter::single(Character(vec![-3])));
    }

    #[test]
    fn first_factor_circle() {
        let i = GroupInclusion::abelian(t(1), t(2), vec![vec![1, 0]]);
        let p = i.restrict_poly().unwrap();
        assert_eq!(p.images, vec![Poly::var(1, 0), Poly::zero(1)]);
    }

    #[test]
    fn sign_subgroup_of_circle() {
        let i = GroupInclusion::abelian(CompactGroupDesc::cyclic(2), t(1), vec![vec![1]]);
        i.validate().unwrap();
        let r = i.restrict_rep().unwrap();
        assert_eq!(r.apply(&Character(vec![3])).unwrap(), VirtualCharacter::single(Character(vec![1])));
        assert_eq!(r.apply(&Character(vec![-4])).unwrap(), VirtualCharacter::single(Character(vec![0])));
    }

    #[test]
    fn lattice_shape_and_well_definedness() {
        assert!(GroupInclusion::abelian(t(1), t(2), vec![vec![1]]).validate().is_err());
        // Z/2 -> Z/3 characters: 2 * 1 is not 0 mod 3
        let bad = GroupInclusion::abelian(CompactGroupDesc::cyclic(3), CompactGroupDesc::cyclic(2), vec![vec![1]]);
        assert!(matches!(bad.validate(), Err(GroupError::IllDefinedLatticeMap { .. })));
        // a torus coordinate cannot receive a finite character
        let bad = GroupInclusion::abelian(t(1), CompactGroupDesc::cyclic(2), vec![vec![1]]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn explicit_lie_map_must_agree() {
        let mut i = GroupInclusion::abelian(t(1), t(2), vec![vec![1, 1]]);
        i.lie_map = Some(vec![vec![Q(rat(1))], vec![Q(rat(1))]]);
        i.validate().unwrap();
        i.lie_map = Some(vec![vec![Q(rat(1))], vec![Q(rat(2))]]);
        assert!(matches!(i.validate(), Err(GroupError::IncompatibleLieMap)));
    }

    #[test]
    fn strictness() {
        assert!(!GroupInclusion::identity(&t(2)).is_strict());
        assert!(GroupInclusion::abelian(t(1), t(2), vec![vec![1, 0]]).is_strict());
        // swap of factors is an automorphism
        assert!(!GroupInclusion::abelian(t(2), t(2), vec![vec![0, 1], vec![1, 0]]).is_strict());
    }
}
