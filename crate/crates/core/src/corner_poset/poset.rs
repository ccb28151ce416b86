use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PosetError;

pub type HypId = String;

/// A face: a connected component of an intersection of `codim` boundary
/// hypersurfaces, recorded by the set of hypersurfaces containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Face {
    pub id: String,
    pub codim: usize,
    pub contains: BTreeSet<HypId>,
}

/// Declared decomposition of the intersection of two faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intersection {
    pub faces: [String; 2],
    pub components: Vec<String>,
}

/// Face poset of a manifold with corners. The codimension-one face of a
/// hypersurface carries the hypersurface id; the manifold itself is the
/// unique codimension-zero face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacePoset {
    pub hypersurfaces: Vec<HypId>,
    pub faces: Vec<Face>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intersections: Vec<Intersection>,
}

impl FacePoset {
    /// A manifold without boundary.
    pub fn boundaryless(id: &str) -> Self {
        FacePoset {
            hypersurfaces: Vec::new(),
            faces: vec![Face { id: id.into(), codim: 0, contains: BTreeSet::new() }],
            intersections: Vec::new(),
        }
    }

    /// Poset generated by the given higher-codimension faces: the
    /// manifold, one face per hypersurface and the listed corners.
    pub fn from_corners(manifold: &str, hypersurfaces: &[&str], corners: &[(&str, &[&str])]) -> Self {
        let mut faces = vec![Face { id: manifold.into(), codim: 0, contains: BTreeSet::new() }];
        for h in hypersurfaces {
            faces.push(Face { id: (*h).into(), codim: 1, contains: [h.to_string()].into() });
        }
        for (id, c) in corners {
            faces.push(Face { id: (*id).into(), codim: c.len(), contains: c.iter().map(|s| s.to_string()).collect() });
        }
        let mut p = FacePoset { hypersurfaces: hypersurfaces.iter().map(|s| s.to_string()).collect(), faces, intersections: Vec::new() };
        p.normalize();
        p
    }

    /// Sorts hypersurfaces and faces (by codimension, then id).
    pub fn normalize(&mut self) {
        self.hypersurfaces.sort();
        self.faces.sort_by(|a, b| (a.codim, &a.id).cmp(&(b.codim, &b.id)));
    }

    pub fn face(&self, id: &str) -> Option<&Face> {
        self.faces.iter().find(|f| f.id == id)
    }

    pub fn manifold(&self) -> &Face {
        self.faces.iter().find(|f| f.codim == 0).expect("validated poset has a codimension-0 face")
    }

    pub fn faces_of_codim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.codim == k)
    }

    pub fn max_codim(&self) -> usize {
        self.faces.iter().map(|f| f.codim).max().unwrap_or(0)
    }

    /// Faces contained in `f` (including `f`).
    pub fn faces_within<'a>(&'a self, f: &'a Face) -> impl Iterator<Item = &'a Face> {
        self.faces.iter().filter(move |g| g.contains.is_superset(&f.contains))
    }

    /// Whether the closures of two distinct hypersurfaces meet.
    pub fn intersect(&self, a: &str, b: &str) -> bool {
        a != b && self.faces.iter().any(|f| f.contains.contains(a) && f.contains.contains(b))
    }

    /// Whether two faces meet: some face lies in both.
    pub fn faces_meet(&self, a: &Face, b: &Face) -> bool {
        let union: BTreeSet<&HypId> = a.contains.union(&b.contains).collect();
        self.faces.iter().any(|g| union.iter().all(|h| g.contains.contains(*h)))
    }

    pub fn validate(&self) -> Result<(), PosetError> {
        let hyps: BTreeSet<&HypId> = self.hypersurfaces.iter().collect();
        if hyps.len() != self.hypersurfaces.len() {
            return Err(PosetError::Invalid("duplicate hypersurface id".into()));
        }
        let mut ids = BTreeSet::new();
        for f in &self.faces {
            if !ids.insert(&f.id) {
                return Err(PosetError::Invalid(format!("duplicate face id `{}`", f.id)));
            }
            if f.contains.len() != f.codim {
                return Err(PosetError::Invalid(format!(
                    "face `{}` has codimension {} but lies in {} hypersurfaces",
                    f.id,
                    f.codim,
                    f.contains.len()
                )));
            }
            if let Some(h) = f.contains.iter().find(|h| !hyps.contains(h)) {
                return Err(PosetError::UnknownHypersurface(h.clone()));
            }
        }
        if self.faces.iter().filter(|f| f.codim == 0).count() != 1 {
            return Err(PosetError::Invalid("exactly one face of codimension 0 is required".into()));
        }
        for h in &self.hypersurfaces {
            let own: Vec<&Face> = self.faces.iter().filter(|f| f.codim == 1 && f.contains.contains(h)).collect();
            if own.len() != 1 || own[0].id != *h {
                return Err(PosetError::Invalid(format!("hypersurface `{h}` needs exactly one codimension-1 face with its id")));
            }
        }
        for x in &self.intersections {
            let (a, b) = (self.lookup(&x.faces[0])?, self.lookup(&x.faces[1])?);
            if !a.contains.is_disjoint(&b.contains) {
                return Err(PosetError::Invalid(format!("intersection of `{}` and `{}` is not transversal", a.id, b.id)));
            }
            let union: BTreeSet<HypId> = a.contains.union(&b.contains).cloned().collect();
            for c in &x.components {
                let g = self.lookup(c)?;
                if g.contains != union || g.codim != a.codim + b.codim {
                    return Err(PosetError::Invalid(format!(
                        "component `{c}` of `{}` ∩ `{}` does not have additive codimension",
                        a.id, b.id
                    )));
                }
            }
        }
        Ok(())
    }

    fn lookup(&self, id: &str) -> Result<&Face, PosetError> {
        self.face(id).ok_or_else(|| PosetError::UnknownFace(id.into()))
    }

    /// Renames hypersurfaces (and their faces) by `f`.
    pub fn relabel(&self, f: &BTreeMap<HypId, HypId>) -> FacePoset {
        let map = |h: &HypId| f.get(h).cloned().unwrap_or_else(|| h.clone());
        let mut p = FacePoset {
            hypersurfaces: self.hypersurfaces.iter().map(map).collect(),
            faces: self
                .faces
                .iter()
                .map(|face| Face {
                    id: if face.codim == 1 { map(&face.id) } else { face.id.clone() },
                    codim: face.codim,
                    contains: face.contains.iter().map(map).collect(),
                })
                .collect(),
            intersections: self.intersections.clone(),
        };
        p.normalize();
        p
    }
}

/// Action of a group on the boundary hypersurfaces by generating
/// permutations (unlisted ids are fixed).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceAction {
    pub generators: Vec<BTreeMap<HypId, HypId>>,
}

impl HypersurfaceAction {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn image(g: &BTreeMap<HypId, HypId>, h: &HypId) -> HypId {
        g.get(h).cloned().unwrap_or_else(|| h.clone())
    }

    /// Checks that every generator is a bijection of the hypersurfaces which
    /// permutes the faces (as sets of containing hypersurfaces).
    pub fn validate(&self, poset: &FacePoset) -> Result<(), PosetError> {
        let hyps: BTreeSet<&HypId> = poset.hypersurfaces.iter().collect();
        let mut profile: BTreeMap<&BTreeSet<HypId>, usize> = BTreeMap::new();
        for f in &poset.faces {
            *profile.entry(&f.contains).or_default() += 1;
        }
        for (i, g) in self.generators.iter().enumerate() {
            let images: BTreeSet<HypId> = poset.hypersurfaces.iter().map(|h| Self::image(g, h)).collect();
            if g.keys().chain(g.values()).any(|h| !hyps.contains(h)) || images.len() != hyps.len() {
                return Err(PosetError::NotPreserving(format!("generator {i} is not a permutation of the hypersurfaces")));
            }
            let mut moved: BTreeMap<BTreeSet<HypId>, usize> = BTreeMap::new();
            for f in &poset.faces {
                *moved.entry(f.contains.iter().map(|h| Self::image(g, h)).collect()).or_default() += 1;
            }
            if moved.iter().any(|(k, n)| profile.get(k) != Some(n)) {
                return Err(PosetError::NotPreserving(format!("generator {i} does not preserve the faces")));
            }
        }
        Ok(())
    }

    /// Orbits of hypersurfaces, each sorted, ordered by smallest member.
    pub fn orbits(&self, poset: &FacePoset) -> Vec<Vec<HypId>> {
        let mut seen: BTreeSet<HypId> = BTreeSet::new();
        let mut out = Vec::new();
        let mut hyps = poset.hypersurfaces.clone();
        hyps.sort();
        for h in &hyps {
            if seen.contains(h) {
                continue;
            }
            let mut orbit: BTreeSet<HypId> = [h.clone()].into();
            let mut frontier = vec![h.clone()];
            while let Some(x) = frontier.pop() {
                for g in &self.generators {
                    let y = Self::image(g, &x);
                    if orbit.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            seen.extend(orbit.iter().cloned());
            out.push(orbit.into_iter().collect());
        }
        out
    }
}

/// Invariant partition of the hypersurfaces into blocks of pairwise
/// disjoint hypersurfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<BTreeSet<HypId>>,
}

/// Failure of the partition condition: an orbit of hypersurfaces, two of
/// which intersect. Blocks must be unions of orbits, so no partition exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionWitness {
    pub orbit: Vec<HypId>,
    pub first: HypId,
    pub second: HypId,
}

pub fn check_intersection_free(
    poset: &FacePoset,
    action: &HypersurfaceAction,
) -> Result<Result<Partition, IntersectionWitness>, PosetError> {
    action.validate(poset)?;
    let orbits = action.orbits(poset);
    for orbit in &orbits {
        for (i, a) in orbit.iter().enumerate() {
            if let Some(b) = orbit[i + 1..].iter().find(|b| poset.intersect(a, b)) {
                return Ok(Err(IntersectionWitness { orbit: orbit.clone(), first: a.clone(), second: b.clone() }));
            }
        }
    }
    let n = orbits.len();
    let conflict: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && orbits[i].iter().any(|a| orbits[j].iter().any(|b| poset.intersect(a, b)))).collect())
        .collect();
    // smallest number of colors, first coloring in lexicographic order
    let mut colors = vec![0usize; n];
    let mut k = 1;
    while n > 0 && !color(&conflict, &mut colors, 0, k) {
        k += 1;
    }
    let mut blocks: Vec<BTreeSet<HypId>> = vec![BTreeSet::new(); if n == 0 { 0 } else { k }];
    for (i, orbit) in orbits.iter().enumerate() {
        blocks[colors[i]].extend(orbit.iter().cloned());
    }
    blocks.retain(|b| !b.is_empty());
    Ok(Ok(Partition { blocks }))
}

fn color(conflict: &[Vec<bool>], colors: &mut [usize], i: usize, k: usize) -> bool {
    if i == colors.len() {
        return true;
    }
    // color classes are opened in order, which removes symmetric duplicates
    let open = colors[..i].iter().max().map_or(0, |m| m + 1);
    for c in 0..k.min(open + 1) {
        if (0..i).all(|j| !(conflict[i][j] && colors[j] == c)) {
            colors[i] = c;
            if color(conflict, colors, i + 1, k) {
                return true;
            }
        }
    }
    false
}

/// A blow-up center: a boundary face, or an interior p-submanifold given by
/// its components and the hypersurfaces each component meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Face { id: String, #[serde(default)] separating: bool },
    Interior { components: Vec<InteriorComponent> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteriorComponent {
    pub id: String,
    #[serde(default)]
    pub meets: BTreeSet<HypId>,
}

impl Center {
    pub fn face(id: &str) -> Self {
        Center::Face { id: id.into(), separating: false }
    }

    /// Ids of the front faces the blow-up creates.
    pub fn front_faces(&self) -> Vec<HypId> {
        match self {
            Center::Face { id, .. } => vec![format!("ff:{id}")],
            Center::Interior { components } => components.iter().map(|c| c.id.clone()).collect(),
        }
    }
}

/// Result of a blow-up: the new poset and the lift of each old face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub poset: FacePoset,
    pub lift: BTreeMap<String, Vec<String>>,
}

pub fn blowup_face_poset(poset: &FacePoset, center: &Center) -> Result<BlowUp, PosetError> {
    poset.validate()?;
    let mut faces: Vec<Face> = Vec::new();
    let mut lift: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut hypersurfaces = poset.hypersurfaces.clone();
    match center {
        Center::Face { id, separating } => {
            let f = poset.lookup(id)?;
            if f.codim < 2 {
                return Err(PosetError::TrivialCenter(id.clone()));
            }
            if *separating {
                return Err(PosetError::Separating(id.clone()));
            }
            let ff = format!("ff:{id}");
            if poset.face(&ff).is_some() {
                return Err(PosetError::Invalid(format!("front face id `{ff}` already in use")));
            }
            hypersurfaces.push(ff.clone());
            let c = &f.contains;
            let proper: Vec<BTreeSet<HypId>> = subsets(c).into_iter().filter(|s| s.len() < c.len()).collect();
            for g in &poset.faces {
                if !g.contains.is_superset(c) {
                    faces.push(g.clone());
                    lift.insert(g.id.clone(), vec![g.id.clone()]);
                    continue;
                }
                let rest: BTreeSet<HypId> = g.contains.difference(c).cloned().collect();
                for s in &proper {
                    let mut contains: BTreeSet<HypId> = [ff.clone()].into();
                    contains.extend(s.iter().cloned());
                    contains.extend(rest.iter().cloned());
                    let new_id = if g.id == *id && s.is_empty() {
                        ff.clone()
                    } else {
                        let tag: Vec<&str> = s.iter().map(|h| h.as_str()).collect();
                        format!("{ff}|{}|{}", g.id, tag.join(","))
                    };
                    if s.is_empty() {
                        // the preimage of g is a fibration over g by a closed simplex
                        lift.insert(g.id.clone(), vec![new_id.clone()]);
                    }
                    faces.push(Face { id: new_id, codim: contains.len(), contains });
                }
            }
        }
        Center::Interior { components } => {
            for g in &poset.faces {
                faces.push(g.clone());
                lift.insert(g.id.clone(), vec![g.id.clone()]);
            }
            for comp in components {
                if poset.face(&comp.id).is_some() || hypersurfaces.contains(&comp.id) {
                    return Err(PosetError::Invalid(format!("front face id `{}` already in use", comp.id)));
                }
                if let Some(h) = comp.meets.iter().find(|h| !poset.hypersurfaces.contains(h)) {
                    return Err(PosetError::UnknownHypersurface(h.clone()));
                }
                hypersurfaces.push(comp.id.clone());
                for g in &poset.faces {
                    if !g.contains.is_subset(&comp.meets) {
                        continue;
                    }
                    let mut contains = g.contains.clone();
                    contains.insert(comp.id.clone());
                    let new_id = if g.codim == 0 { comp.id.clone() } else { format!("{}|{}", comp.id, g.id) };
                    faces.push(Face { id: new_id, codim: contains.len(), contains });
                }
            }
        }
    }
    let mut out = FacePoset { hypersurfaces, faces, intersections: Vec::new() };
    out.normalize();
    out.validate()?;
    Ok(BlowUp { poset: out, lift })
}

fn subsets(s: &BTreeSet<HypId>) -> Vec<BTreeSet<HypId>> {
    let v: Vec<&HypId> = s.iter().collect();
    (0u64..(1 << v.len()))
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, h)| (*h).clone()).collect())
        .collect()
}

/// Boundary faces in blow-up order: decreasing codimension, ties by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupOrder {
    pub centers: Vec<String>,
    /// Faces of equal codimension are pairwise disjoint once all deeper
    /// faces have been blown up, so their relative order is immaterial.
    pub order_independent: bool,
}

pub fn total_boundary_blowup_order(poset: &FacePoset) -> BlowupOrder {
    let mut faces: Vec<&Face> = poset.faces.iter().filter(|f| f.codim >= 1).collect();
    faces.sort_by(|a, b| (std::cmp::Reverse(a.codim), &a.id).cmp(&(std::cmp::Reverse(b.codim), &b.id)));
    let order_independent = simulate(poset).is_ok_and(|(_, ok)| ok);
    BlowupOrder { centers: faces.into_iter().map(|f| f.id.clone()).collect(), order_independent }
}

fn simulate(poset: &FacePoset) -> Result<(FacePoset, bool), PosetError> {
    let order = {
        let mut faces: Vec<&Face> = poset.faces.iter().filter(|f| f.codim >= 2).collect();
        faces.sort_by(|a, b| (std::cmp::Reverse(a.codim), &a.id).cmp(&(std::cmp::Reverse(b.codim), &b.id)));
        faces.into_iter().map(|f| f.id.clone()).collect::<Vec<_>>()
    };
    let mut cur = poset.clone();
    let mut independent = true;
    let mut k = usize::MAX;
    for id in order {
        let codim = poset.face(&id).map_or(0, |f| f.codim);
        if codim != k {
            k = codim;
            let same: Vec<&Face> = cur.faces.iter().filter(|f| f.codim == k && poset.face(&f.id).is_some_and(|o| o.codim == k)).collect();
            for (i, a) in same.iter().enumerate() {
                if same[i + 1..].iter().any(|b| cur.faces_meet(a, b)) {
                    independent = false;
                }
            }
        }
        cur = blowup_face_poset(&cur, &Center::face(&id))?.poset;
    }
    Ok((cur, independent))
}

/// Applies the total boundary blow-up and lifts the action: front faces
/// are permuted as their centers are.
pub fn apply_total_boundary_blowup(
    poset: &FacePoset,
    action: &HypersurfaceAction,
) -> Result<(FacePoset, HypersurfaceAction), PosetError> {
    action.validate(poset)?;
    let (out, _) = simulate(poset)?;
    let mut generators = Vec::new();
    for g in &action.generators {
        let mut lifted = g.clone();
        for f in poset.faces.iter().filter(|f| f.codim >= 2) {
            let image: BTreeSet<HypId> = f.contains.iter().map(|h| HypersurfaceAction::image(g, h)).collect();
            let targets: Vec<&Face> = poset.faces.iter().filter(|x| x.contains == image).collect();
            if targets.len() != 1 {
                return Err(PosetError::AmbiguousFace(f.id.clone()));
            }
            if targets[0].id != f.id {
                lifted.insert(format!("ff:{}", f.id), format!("ff:{}", targets[0].id));
            }
        }
        generators.push(lifted);
    }
    let action = HypersurfaceAction { generators };
    action.validate(&out)?;
    Ok((out, action))
}
