use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::ring::GradedRingDesc;
use super::GroupError;

/// A compact group `T^r x Z/m_1 x ... x Z/m_k`, or a formal group whose
/// coefficient rings are supplied directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactGroupDesc {
    pub torus_rank: usize,
    #[serde(default)]
    pub finite_part: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal: Option<FormalOverride>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalOverride {
    pub borel: GradedRingDesc,
    pub rep: FormalRepRing,
}

/// Finite rep-ring basis with explicit structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalRepRing {
    pub basis: Vec<String>,
    pub unit: usize,
    pub product: Vec<ProductEntry>,
    pub augmentation: Vec<i64>,
    /// Chern images of the basis characters in the Borel fiber.
    #[serde(default)]
    pub chern: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    pub result: Vec<(usize, i64)>,
}

impl CompactGroupDesc {
    pub fn torus(rank: usize) -> Self {
        CompactGroupDesc { torus_rank: rank, finite_part: Vec::new(), formal: None }
    }

    pub fn trivial() -> Self {
        Self::torus(0)
    }

    pub fn cyclic(m: u64) -> Self {
        CompactGroupDesc { torus_rank: 0, finite_part: vec![m], formal: None }
    }

    pub fn is_formal(&self) -> bool {
        self.formal.is_some()
    }

    /// Number of coordinates of a character (torus weights, then finite residues).
    pub fn character_len(&self) -> usize {
        self.torus_rank + self.finite_part.len()
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if let Some(&m) = self.finite_part.iter().find(|&&m| m < 2) {
            return Err(GroupError::BadInvariantFactor(m));
        }
        if let Some(f) = &self.formal {
            f.borel.validate()?;
            if f.borel.dim(0) != 1 {
                return Err(GroupError::BadFormal("degree-0 piece must be one-dimensional".into()));
            }
            RepRingDesc::Formal(f.rep.clone()).validate()?;
        }
        Ok(())
    }
}

impl fmt::Display for CompactGroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.formal.is_some() {
            return write!(f, "formal");
        }
        let mut parts = Vec::new();
        if self.torus_rank > 0 {
            parts.push(format!("T^{}", self.torus_rank));
        }
        for m in &self.finite_part {
            parts.push(format!("Z/{m}"));
        }
        if parts.is_empty() {
            write!(f, "{{e}}")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A basis character. For abelian groups: torus weights followed by finite
/// residues in `[0, m)`. For formal groups: a single basis index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

/// Integer combination of basis characters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<(Character, i64)>", into = "Vec<(Character, i64)>")]
pub struct VirtualCharacter(pub BTreeMap<Character, i64>);

impl From<Vec<(Character, i64)>> for VirtualCharacter {
    fn from(v: Vec<(Character, i64)>) -> Self {
        Self::from_terms(v)
    }
}

impl From<VirtualCharacter> for Vec<(Character, i64)> {
    fn from(v: VirtualCharacter) -> Self {
        v.0.into_iter().collect()
    }
}

impl VirtualCharacter {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(c: Character) -> Self {
        Self::from_terms([(c, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Character, i64)>) -> Self {
        let mut v = Self::zero();
        for (c, n) in terms {
            v.add_term(c, n);
        }
        v
    }

    pub fn add_term(&mut self, c: Character, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.0.entry(c.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, &n) in &other.0 {
            out.add_term(c.clone(), n);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.0.iter().map(|(c, &n)| (c.clone(), n * k)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Character, i64)> {
        self.0.iter().map(|(c, &n)| (c, n))
    }
}

/// The representation ring of a group, as a free abelian group on a
/// character basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepRingDesc {
    Abelian { torus_rank: usize, finite_part: Vec<u64> },
    Formal(FormalRepRing),
}

impl RepRingDesc {
    pub fn trivial_character(&self) -> Character {
        match self {
            RepRingDesc::Abelian { torus_rank, finite_part } => Character(vec![0; torus_rank + finite_part.len()]),
            RepRingDesc::Formal(f) => Character(vec![f.unit as i64]),
        }
    }

    pub fn one(&self) -> VirtualCharacter {
        VirtualCharacter::single(self.trivial_character())
    }

    /// Checks shape and reduces finite residues.
    pub fn normalize(&self, c: &Character) -> Result<Character, GroupError> {
        match self {
            RepRingDesc::Abelian { torus_rank, finite_part } => {
                if c.0.len() != torus_rank + finite_part.len() {
                    return Err(GroupError::BadCharacter(c.clone()));
                }
                let mut out = c.0.clone();
                for (k, &m) in finite_part.iter().enumerate() {
                    out[torus_rank + k] = out[torus_rank + k].rem_euclid(m as i64);
                }
                Ok(Character(out))
            }
            RepRingDesc::Formal(f) => {
                if c.0.len() != 1 || c.0[0] < 0 || c.0[0] as usize >= f.basis.len() {
                    return Err(GroupError::BadCharacter(c.clone()));
                }
                Ok(c.clone())
            }
        }
    }

    pub fn augmentation(&self, c: &Character) -> i64 {
        match self {
            RepRingDesc::Abelian { .. } => 1,
            RepRingDesc::Formal(f) => f.augmentation[c.0[0] as usize],
        }
    }

    pub fn augment(&self, v: &VirtualCharacter) -> i64 {
        v.terms().map(|(c, n)| n * self.augmentation(c)).sum()
    }

    pub fn product(&self, a: &Character, b: &Character) -> Result<VirtualCharacter, GroupError> {
        match self {
            RepRingDesc::Abelian { .. } => {
                let sum = Character(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                Ok(VirtualCharacter::single(self.normalize(&sum)?))
            }
            RepRingDesc::Formal(f) => {
                let (i, j) = (a.0[0] as usize, b.0[0] as usize);
                let entry = f
                    .product
                    .iter()
                    .find(|e| (e.left == i && e.right == j) || (e.left == j && e.right == i))
                    .ok_or_else(|| GroupError::BadFormal(format!("no product entry for ({i}, {j})")))?;
                Ok(VirtualCharacter::from_terms(entry.result.iter().map(|&(k, n)| (Character(vec![k as i64]), n))))
            }
        }
    }

    pub fn multiply(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter, GroupError> {
        let mut out = VirtualCharacter::zero();
        for (ca, na) in a.terms() {
            for (cb, nb) in b.terms() {
                out = out.add(&self.product(ca, cb)?.scale(na * nb));
            }
        }
        Ok(out)
    }

    /// Basis characters with torus weights in `[lo, hi]^r` and every finite
    /// residue; all basis elements for formal rings.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Character> {
        match self {
            RepRingDesc::Abelian { torus_rank, finite_part } => {
                let mut out = vec![Vec::new()];
                for _ in 0..*torus_rank {
                    out = out.into_iter().flat_map(|c| (lo..=hi).map(move |w| [c.clone(), vec![w]].concat())).collect();
                }
                for &m in finite_part {
                    out = out.into_iter().flat_map(|c| (0..m as i64).map(move |w| [c.clone(), vec![w]].concat())).collect();
                }
                out.into_iter().map(Character).collect()
            }
            RepRingDesc::Formal(f) => (0..f.basis.len() as i64).map(|i| Character(vec![i])).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let RepRingDesc::Formal(f) = self else {
            return Ok(());
        };
        let n = f.basis.len();
        if f.unit >= n || f.augmentation.len() != n {
            return Err(GroupError::BadFormal("unit or augmentation out of range".into()));
        }
        if f.augmentation[f.unit] != 1 {
            return Err(GroupError::BadFormal("augmentation of the unit must be 1".into()));
        }
        let basis: Vec<Character> = self.window(0, 0);
        for a in &basis {
            if self.product(&basis[f.unit], a)? != VirtualCharacter::single(a.clone()) {
                return Err(GroupError::BadFormal("unit is not multiplicative identity".into()));
            }
            for b in &basis {
                let ab = self.product(a, b)?;
                if self.augment(&ab) != self.augmentation(a) * self.augmentation(b) {
                    return Err(GroupError::BadFormal("augmentation is not multiplicative".into()));
                }
                for c in &basis {
                    let left = self.multiply(&ab, &VirtualCharacter::single(c.clone()))?;
                    let right = self.multiply(&VirtualCharacter::single(a.clone()), &self.product(b, c)?)?;
                    if left != right {
                        return Err(GroupError::BadFormal("product is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Fiber of the Borel bundle: invariant polynomials on the Lie algebra.
/// Abelian groups act trivially on their Lie algebra, so this is the full
/// polynomial ring on the torus rank; the finite part has zero Lie algebra.
pub fn borel_fiber(k: &CompactGroupDesc) -> GradedRingDesc {
    match &k.formal {
        Some(f) => f.borel.clone(),
        None => GradedRingDesc::polynomial(k.torus_rank),
    }
}

pub fn rep_ring(k: &CompactGroupDesc) -> RepRingDesc {
    match &k.formal {
        Some(f) => RepRingDesc::Formal(f.rep.clone()),
        None => RepRingDesc::Abelian { torus_rank: k.torus_rank, finite_part: k.finite_part.clone() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borel_fiber_examples() {
        assert_eq!(borel_fiber(&CompactGroupDesc::torus(1)).hilbert(4), vec![1, 0, 1, 0, 1]);
        assert_eq!(borel_fiber(&CompactGroupDesc::cyclic(2)).hilbert(4), vec![1, 0, 0, 0, 0]);
        assert_eq!(borel_fiber(&CompactGroupDesc::torus(2)).dim(4), 3);
    }

    #[test]
    fn rep_ring_examples() {
        let r = rep_ring(&CompactGroupDesc::torus(1));
        let t = |n| Character(vec![n]);
        assert_eq!(r.product(&t(2), &t(-5)).unwrap(), VirtualCharacter::single(t(-3)));

        let z2 = rep_ring(&CompactGroupDesc::cyclic(2));
        let s = Character(vec![1]);
        assert_eq!(z2.window(-3, 3).len(), 2);
        assert_eq!(z2.product(&s, &s).unwrap(), z2.one());

        let mixed = rep_ring(&CompactGroupDesc { torus_rank: 1, finite_part: vec![2], formal: None });
        assert_eq!(mixed.window(-1, 1).len(), 6);
        assert_eq!(mixed.normalize(&Character(vec![3, 5])).unwrap(), Character(vec![3, 1]));
        assert!(mixed.normalize(&Character(vec![3])).is_err());
    }

    #[test]
    fn invariant_factors_checked() {
        assert!(CompactGroupDesc { torus_rank: 0, finite_part: vec![1], formal: None }.validate().is_err());
        assert!(CompactGroupDesc::cyclic(3).validate().is_ok());
    }

    #[test]
    fn identity_not_isomorphism() {
        let a = CompactGroupDesc { torus_rank: 0, finite_part: vec![2, 3], formal: None };
        let b = CompactGroupDesc::cyclic(6);
        assert_ne!(a, b);
    }

    pub(crate) fn z2_formal() -> FormalRepRing {
        FormalRepRing {
            basis: vec!["1".into(), "sgn".into()],
            unit: 0,
            product: vec![
                ProductEntry { left: 0, right: 0, result: vec![(0, 1)] },
                ProductEntry { left: 0, right: 1, result: vec![(1, 1)] },
                ProductEntry { left: 1, right: 1, result: vec![(0, 1)] },
            ],
            augmentation: vec![1, 1],
            chern: vec![],
        }
    }

    #[test]
    fn formal_rep_ring_validation() {
        let good = RepRingDesc::Formal(z2_formal());
        good.validate().unwrap();
        let mut bad = z2_formal();
        bad.augmentation = vec![1, 2];
        assert!(RepRingDesc::Formal(bad).validate().is_err());
    }
}
