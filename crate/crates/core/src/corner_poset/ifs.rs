use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::poset::{blowup_face_poset, Center, Face, FacePoset, HypId};
use super::PosetError;

/// Fibration `phi_H: H -> Y_H` of one boundary hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fibration {
    pub base: String,
    /// Fiber dimension of `phi_H`.
    pub codim: usize,
}

/// Compatibility map `psi: Y_lower -> Y_upper` for an intersecting pair
/// with `codim(phi_lower) < codim(phi_upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Compatibility {
    pub lower: HypId,
    pub upper: HypId,
    pub map: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IteratedFibrationDesc {
    pub fibrations: BTreeMap<HypId, Fibration>,
    #[serde(default)]
    pub compatibilities: Vec<Compatibility>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IfsViolation {
    MissingFibration { hypersurface: HypId },
    UnknownHypersurface { hypersurface: HypId },
    EqualCodimension { first: HypId, second: HypId },
    MissingCompatibility { lower: HypId, upper: HypId },
    WrongCompatibility { lower: HypId, upper: HypId },
    TriangleMismatch { hypersurfaces: [HypId; 3] },
}

impl IteratedFibrationDesc {
    pub fn compatibility(&self, lower: &str, upper: &str) -> Option<&Compatibility> {
        self.compatibilities.iter().find(|c| c.lower == lower && c.upper == upper)
    }
}

pub fn validate_ifs(poset: &FacePoset, ifs: &IteratedFibrationDesc) -> Vec<IfsViolation> {
    let mut out = Vec::new();
    for h in &poset.hypersurfaces {
        if !ifs.fibrations.contains_key(h) {
            out.push(IfsViolation::MissingFibration { hypersurface: h.clone() });
        }
    }
    for h in ifs.fibrations.keys() {
        if !poset.hypersurfaces.contains(h) {
            out.push(IfsViolation::UnknownHypersurface { hypersurface: h.clone() });
        }
    }
    let hyps: Vec<&HypId> = poset.hypersurfaces.iter().filter(|h| ifs.fibrations.contains_key(*h)).collect();
    let ordered = |a: &HypId, b: &HypId| -> Option<(HypId, HypId)> {
        let (ca, cb) = (ifs.fibrations[a].codim, ifs.fibrations[b].codim);
        match ca.cmp(&cb) {
            std::cmp::Ordering::Less => Some((a.clone(), b.clone())),
            std::cmp::Ordering::Greater => Some((b.clone(), a.clone())),
            std::cmp::Ordering::Equal => None,
        }
    };
    for (i, a) in hyps.iter().enumerate() {
        for b in &hyps[i + 1..] {
            if !poset.intersect(a, b) {
                continue;
            }
            let Some((lo, hi)) = ordered(a, b) else {
                out.push(IfsViolation::EqualCodimension { first: (*a).clone(), second: (*b).clone() });
                continue;
            };
            match ifs.compatibility(&lo, &hi) {
                None => out.push(IfsViolation::MissingCompatibility { lower: lo, upper: hi }),
                Some(c) if c.from != ifs.fibrations[&lo].base || c.to != ifs.fibrations[&hi].base => {
                    out.push(IfsViolation::WrongCompatibility { lower: lo, upper: hi })
                }
                _ => {}
            }
        }
    }
    // triangles: psi_23 . psi_12 and psi_13 run between the same bases
    for f in poset.faces.iter().filter(|f| f.codim >= 3) {
        let mut members: Vec<&HypId> = f.contains.iter().filter(|h| ifs.fibrations.contains_key(*h)).collect();
        members.sort_by_key(|h| ifs.fibrations[*h].codim);
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                for k in j + 1..members.len() {
                    let (a, b, c) = (members[i], members[j], members[k]);
                    let (Some(ab), Some(bc), Some(ac)) =
                        (ifs.compatibility(a, b), ifs.compatibility(b, c), ifs.compatibility(a, c))
                    else {
                        continue;
                    };
                    if ab.to != bc.from || ab.from != ac.from || bc.to != ac.to {
                        out.push(IfsViolation::TriangleMismatch { hypersurfaces: [a.clone(), b.clone(), c.clone()] });
                    }
                }
            }
        }
    }
    out
}

/// The structure induced on the base `Y_H`: its boundary hypersurfaces are
/// the images of `H ∩ K` for intersecting `K` with larger fiber dimension,
/// fibering over `Y_K` by the compatibility maps. Returns the face poset of
/// `Y_H` (labelled by the `K`) together with the structure.
pub fn induced_ifs_on_base(
    poset: &FacePoset,
    ifs: &IteratedFibrationDesc,
    h: &str,
) -> Result<(FacePoset, IteratedFibrationDesc), PosetError> {
    let fib_h = ifs.fibrations.get(h).ok_or_else(|| PosetError::UnknownHypersurface(h.into()))?;
    let above: BTreeSet<HypId> = poset
        .hypersurfaces
        .iter()
        .filter(|k| poset.intersect(h, k) && ifs.fibrations.get(*k).is_some_and(|f| f.codim > fib_h.codim))
        .cloned()
        .collect();
    let mut faces: Vec<Face> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<HypId>> = BTreeSet::new();
    for f in poset.faces.iter().filter(|f| f.contains.contains(h)) {
        let contains: BTreeSet<HypId> = f.contains.intersection(&above).cloned().collect();
        if !seen.insert(contains.clone()) {
            continue;
        }
        let id = match contains.len() {
            0 => fib_h.base.clone(),
            1 => contains.iter().next().unwrap().clone(),
            _ => format!("{}∩{}", h, contains.iter().cloned().collect::<Vec<_>>().join("∩")),
        };
        faces.push(Face { id, codim: contains.len(), contains });
    }
    let mut base = FacePoset { hypersurfaces: above.iter().cloned().collect(), faces, intersections: Vec::new() };
    base.normalize();
    base.validate()?;

    let mut induced = IteratedFibrationDesc::default();
    for k in &above {
        let c = ifs.compatibility(h, k).ok_or_else(|| PosetError::Invalid(format!("no compatibility map for `{h}`, `{k}`")))?;
        induced
            .fibrations
            .insert(k.clone(), Fibration { base: c.to.clone(), codim: ifs.fibrations[k].codim - fib_h.codim - 1 });
    }
    for c in &ifs.compatibilities {
        if above.contains(&c.lower) && above.contains(&c.upper) && base.intersect(&c.lower, &c.upper) {
            induced.compatibilities.push(c.clone());
        }
    }
    Ok((base, induced))
}

/// Lifts a structure under a blow-up. Hypersurfaces meeting the center
/// must be transversal to the fibers; each front face fibers over its
/// center component with the fiber dimension given in `ff_codim`.
pub fn lift_ifs_under_blowup(
    poset: &FacePoset,
    ifs: &IteratedFibrationDesc,
    center: &Center,
    transversal: &BTreeSet<HypId>,
    ff_codim: &BTreeMap<HypId, usize>,
) -> Result<(FacePoset, IteratedFibrationDesc), PosetError> {
    let meeting: Vec<(HypId, BTreeSet<HypId>)> = match center {
        Center::Face { id, .. } => {
            let f = poset.face(id).ok_or_else(|| PosetError::UnknownFace(id.clone()))?;
            vec![(format!("ff:{id}"), f.contains.clone())]
        }
        Center::Interior { components } => components.iter().map(|c| (c.id.clone(), c.meets.clone())).collect(),
    };
    for (_, meets) in &meeting {
        if let Some(h) = meets.iter().find(|h| !transversal.contains(*h)) {
            return Err(PosetError::NotTransversal(h.clone()));
        }
    }
    let blown = blowup_face_poset(poset, center)?.poset;
    let mut out = ifs.clone();
    for (ff, _) in &meeting {
        let codim = *ff_codim.get(ff).ok_or_else(|| PosetError::Invalid(format!("no fiber dimension for `{ff}`")))?;
        out.fibrations.insert(ff.clone(), Fibration { base: ff.trim_start_matches("ff:").to_string(), codim });
    }
    for (ff, _) in &meeting {
        for h in blown.hypersurfaces.iter().filter(|h| blown.intersect(ff, h)) {
            let (Some(a), Some(b)) = (out.fibrations.get(ff), out.fibrations.get(h)) else {
                continue;
            };
            let (lo, hi) = if a.codim < b.codim { (ff, h) } else if b.codim < a.codim { (h, ff) } else { continue };
            if out.compatibility(lo, hi).is_none() {
                let (from, to) = (out.fibrations[lo].base.clone(), out.fibrations[hi].base.clone());
                out.compatibilities.push(Compatibility {
                    lower: lo.clone(),
                    upper: hi.clone(),
                    map: format!("{from}->{to}"),
                    from,
                    to,
                });
            }
        }
    }
    out.compatibilities.sort_by(|a, b| (&a.lower, &a.upper).cmp(&(&b.lower, &b.upper)));
    Ok((blown, out))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures;
    use super::super::poset::InteriorComponent;
    use super::*;

    fn sphere_blown_up() -> (FacePoset, IteratedFibrationDesc) {
        let sphere = FacePoset::boundaryless("S2");
        let center = Center::Interior {
            components: vec![
                InteriorComponent { id: "N".into(), meets: BTreeSet::new() },
                InteriorComponent { id: "S".into(), meets: BTreeSet::new() },
            ],
        };
        let codims = [("N".to_string(), 1), ("S".to_string(), 1)].into();
        lift_ifs_under_blowup(&sphere, &IteratedFibrationDesc::default(), &center, &BTreeSet::new(), &codims).unwrap()
    }

    #[test]
    fn appendix_sphere_structure() {
        let (poset, ifs) = sphere_blown_up();
        assert_eq!(poset.hypersurfaces.len(), 2);
        assert_eq!(ifs.fibrations["N"].base, "N");
        assert!(validate_ifs(&poset, &ifs).is_empty());
        let (base, induced) = induced_ifs_on_base(&poset, &ifs, "N").unwrap();
        assert!(base.hypersurfaces.is_empty());
        assert!(induced.fibrations.is_empty());
    }

    #[test]
    fn equal_codimension_violation() {
        let sq = fixtures::square();
        let mut ifs = fixtures::square_product_ifs();
        ifs.fibrations.get_mut("left").unwrap().codim = 1;
        ifs.fibrations.get_mut("bottom").unwrap().codim = 1;
        let v = validate_ifs(&sq, &ifs);
        assert!(v.iter().any(|x| matches!(x, IfsViolation::EqualCodimension { .. })));
    }

    #[test]
    fn square_corner_tower() {
        let (poset, ifs) = fixtures::square_corner_tower();
        assert!(validate_ifs(&poset, &ifs).is_empty());
        let mut broken = ifs.clone();
        broken.compatibilities.pop();
        assert!(validate_ifs(&poset, &broken).iter().any(|x| matches!(x, IfsViolation::MissingCompatibility { .. })));
    }

    #[test]
    fn induced_on_deepest_fibration() {
        let (poset, ifs) = fixtures::square_corner_tower();
        // the side hypersurface has the smallest fiber dimension and sees the front face
        let (base, induced) = induced_ifs_on_base(&poset, &ifs, "bottom").unwrap();
        assert_eq!(base.hypersurfaces, vec!["ff:bl".to_string()]);
        assert_eq!(induced.fibrations.len(), 1);
        assert!(validate_ifs(&base, &induced).is_empty());
    }

    #[test]
    fn transversality_required() {
        let sq = fixtures::square();
        let ifs = fixtures::square_product_ifs();
        let codims = [("ff:bl".to_string(), 1)].into();
        let err = lift_ifs_under_blowup(&sq, &ifs, &Center::face("bl"), &BTreeSet::new(), &codims).unwrap_err();
        assert!(matches!(err, PosetError::NotTransversal(_)));
    }
}
