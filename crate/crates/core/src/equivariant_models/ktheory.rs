use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::chain_engine::{twisted_cohomology, zero_cocycles, LocalSystem, TowerCoefficients};
use crate::group_data::{rep_ring, Character, VirtualCharacter};
use crate::linalg::Rational;
use crate::strat_model::ResolutionTower;

/// Serialized form of one node's class: a formal difference of characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeClass {
    pub node: String,
    #[serde(default)]
    pub plus: Vec<Character>,
    #[serde(default)]
    pub minus: Vec<Character>,
}

/// A K^0 class given by its rank components: a virtual representation of
/// the isotropy group on each node. Nodes left out are filled in from the
/// nodes they fiber over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KClassPresentation {
    pub classes: BTreeMap<String, VirtualCharacter>,
}

impl KClassPresentation {
    pub fn from_entries(entries: &[NodeClass]) -> Self {
        let mut classes: BTreeMap<String, VirtualCharacter> = BTreeMap::new();
        for e in entries {
            let v = classes.entry(e.node.clone()).or_insert_with(VirtualCharacter::zero);
            for c in &e.plus {
                v.add_term(c.clone(), 1);
            }
            for c in &e.minus {
                v.add_term(c.clone(), -1);
            }
        }
        KClassPresentation { classes }
    }

    /// Normal form: one entry per node, characters sorted, common summands
    /// cancelled.
    pub fn to_entries(&self) -> Vec<NodeClass> {
        self.classes
            .iter()
            .map(|(node, v)| {
                let mut plus = Vec::new();
                let mut minus = Vec::new();
                for (c, n) in v.terms() {
                    let side = if n > 0 { &mut plus } else { &mut minus };
                    side.extend(std::iter::repeat_n(c.clone(), n.unsigned_abs() as usize));
                }
                NodeClass { node: node.clone(), plus, minus }
            })
            .collect()
    }

    /// Fills in missing nodes by restriction and checks every edge.
    pub fn complete(&self, tower: &ResolutionTower) -> Result<KClassPresentation, ModelError> {
        for id in self.classes.keys() {
            if tower.node_index(id).is_none() {
                return Err(ModelError::UnknownNode(id.clone()));
            }
        }
        let mut values: Vec<Option<VirtualCharacter>> = tower
            .nodes
            .iter()
            .map(|n| {
                let ring = rep_ring(&n.group);
                self.classes
                    .get(&n.id)
                    .map(|v| -> Result<VirtualCharacter, ModelError> {
                        let mut out = VirtualCharacter::zero();
                        for (c, k) in v.terms() {
                            out.add_term(ring.normalize(c)?, k);
                        }
                        Ok(out)
                    })
                    .transpose()
            })
            .collect::<Result<_, _>>()?;
        let mut order: Vec<usize> = (0..tower.nodes.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(tower.nodes[i].depth));
        for &n in &order {
            for (_, e) in tower.edges_from(n) {
                let target = values[e.target].clone().ok_or_else(|| ModelError::MissingK(tower.nodes[e.target].id.clone()))?;
                let pulled = e.inclusion.restrict_rep()?.apply_virtual(&target)?;
                match &values[n] {
                    None => values[n] = Some(pulled),
                    Some(v) if *v != pulled => return Err(ModelError::Incompatible { edge: e.id.clone() }),
                    Some(_) => {}
                }
            }
        }
        let classes = tower
            .nodes
            .iter()
            .zip(values)
            .map(|(n, v)| v.map(|v| (n.id.clone(), v)).ok_or_else(|| ModelError::MissingK(n.id.clone())))
            .collect::<Result<_, _>>()?;
        Ok(KClassPresentation { classes })
    }

    pub fn is_member(&self, tower: &ResolutionTower) -> Result<bool, ModelError> {
        match self.complete(tower) {
            Ok(_) => Ok(true),
            Err(ModelError::Incompatible { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn augmentations(&self, tower: &ResolutionTower) -> BTreeMap<String, i64> {
        tower
            .nodes
            .iter()
            .filter_map(|n| self.classes.get(&n.id).map(|v| (n.id.clone(), rep_ring(&n.group).augment(v))))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryTable {
    pub k0: usize,
    pub k1: usize,
    /// Classes spanning the rank part of K^0 over the window.
    pub basis: Vec<KClassPresentation>,
}

fn acyclic(x: &crate::chain_engine::SimplicialComplexDesc) -> Result<bool, ModelError> {
    let top = x.dim().unwrap_or(0);
    let h = twisted_cohomology(x, &LocalSystem::constant(vec![(0, 1)]), top)?;
    Ok(h.get(0) == 1 && h.ranks.iter().skip(1).all(|&r| r == 0))
}

/// Window ranks of `K^0` and `K^1`. The rank components are cut out by the
/// edge constraints; the remaining fixture generators of each node restrict
/// to zero on its (acyclic) hypersurfaces and contribute freely.
pub fn reduced_k_theory(tower: &ResolutionTower, lo: i64, hi: i64) -> Result<KTheoryTable, ModelError> {
    for n in &tower.nodes {
        if n.k_theory.is_none() {
            return Err(ModelError::MissingK(n.id.clone()));
        }
        if !n.monodromy.is_trivial() {
            return Err(ModelError::Unsupported(format!("K-theory over `{}` with nontrivial monodromy", n.id)));
        }
        if !n.complex.is_connected() {
            return Err(ModelError::Unsupported(format!("K-theory over the disconnected node `{}`", n.id)));
        }
    }
    for e in &tower.edges {
        if !acyclic(&e.hypersurface)? {
            return Err(ModelError::Unsupported(format!("K-theory with the non-contractible hypersurface `{}`", e.id)));
        }
    }
    let coeff = TowerCoefficients::rep(tower, lo, hi)?;
    let cycles = zero_cocycles(tower, &coeff, 0)?;
    let mut k0 = cycles.len();
    let mut k1 = 0;
    for (n, w) in tower.nodes.iter().zip(&coeff.windows) {
        let k = n.k_theory.expect("checked above");
        if k.k0 == 0 {
            return Err(ModelError::Unsupported(format!("node `{}` has no rank generator", n.id)));
        }
        k0 += (k.k0 - 1) * w.len();
        k1 += k.k1 * w.len();
    }
    let basis = cycles
        .iter()
        .map(|c| {
            let scale = c.iter().flatten().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let mut classes = BTreeMap::new();
            for ((node, w), values) in tower.nodes.iter().zip(&coeff.windows).zip(c) {
                let mut v = VirtualCharacter::zero();
                // constant on the connected node: read the first vertex
                for (ch, x) in w.iter().zip(values.iter()) {
                    let x: Rational = x * Rational::from_integer(scale.clone());
                    if !x.is_zero() {
                        v.add_term(ch.clone(), x.to_integer().to_i64().expect("small coefficient"));
                    }
                }
                classes.insert(node.id.clone(), v);
            }
            KClassPresentation { classes }
        })
        .collect();
    Ok(KTheoryTable { k0, k1, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strat_model::canonical_resolution;
    use crate::strat_model::fixtures::rotation_sphere;
    use crate::strat_model::KFixture;

    fn sphere() -> ResolutionTower {
        let mut spec = rotation_sphere();
        for t in &mut spec.types {
            t.k_theory = Some(KFixture { k0: 1, k1: 0 });
        }
        canonical_resolution(&spec).unwrap().0
    }

    fn class(n: &str, s: &str, ns: i64) -> KClassPresentation {
        let mut k = KClassPresentation::default();
        k.classes.insert(n.into(), VirtualCharacter::single(Character(vec![1])));
        k.classes.insert(s.into(), VirtualCharacter::from_terms([(Character(vec![0]), ns)]));
        k
    }

    #[test]
    fn sphere_window_ranks() {
        let t = sphere();
        let k = reduced_k_theory(&t, -2, 2).unwrap();
        assert_eq!((k.k0, k.k1), (9, 0));
        assert_eq!(k.basis.len(), 9);
        for b in &k.basis {
            assert!(b.is_member(&t).unwrap());
        }
    }

    #[test]
    fn membership_by_augmentation() {
        let t = sphere();
        assert!(class("fixed#0", "fixed#1", 1).is_member(&t).unwrap());
        assert!(!class("fixed#0", "fixed#1", 2).is_member(&t).unwrap());
        let done = class("fixed#0", "fixed#1", 1).complete(&t).unwrap();
        assert_eq!(done.classes["free"], VirtualCharacter::single(Character(vec![])));
    }

    #[test]
    fn normal_form_cancels() {
        let k = KClassPresentation::from_entries(&[NodeClass {
            node: "x".into(),
            plus: vec![Character(vec![2]), Character(vec![1]), Character(vec![1])],
            minus: vec![Character(vec![2])],
        }]);
        let e = k.to_entries();
        assert_eq!(e[0].plus, vec![Character(vec![1]), Character(vec![1])]);
        assert!(e[0].minus.is_empty());
        assert_eq!(KClassPresentation::from_entries(&e), k);
    }

    #[test]
    fn missing_data() {
        let t = canonical_resolution(&rotation_sphere()).unwrap().0;
        assert!(matches!(reduced_k_theory(&t, -1, 1), Err(ModelError::MissingK(_))));
        let mut k = KClassPresentation::default();
        k.classes.insert("fixed#0".into(), VirtualCharacter::zero());
        assert!(matches!(k.complete(&t), Err(ModelError::MissingK(_))));
    }
}
