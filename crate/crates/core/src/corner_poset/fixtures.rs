//! Small posets used in tests and examples.

use std::collections::BTreeMap;

use super::ifs::{Compatibility, Fibration, IteratedFibrationDesc};
use super::poset::{blowup_face_poset, Center, FacePoset, HypersurfaceAction};

fn perm(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub fn square() -> FacePoset {
    FacePoset::from_corners(
        "sq",
        &["bottom", "left", "right", "top"],
        &[("bl", &["bottom", "left"]), ("br", &["bottom", "right"]), ("tl", &["top", "left"]), ("tr", &["top", "right"])],
    )
}

/// Triangle with the rotation permuting its sides cyclically.
pub fn triangle_z3() -> (FacePoset, HypersurfaceAction) {
    let p = FacePoset::from_corners("tri", &["a", "b", "c"], &[("ab", &["a", "b"]), ("bc", &["b", "c"]), ("ca", &["c", "a"])]);
    (p, HypersurfaceAction { generators: vec![perm(&[("a", "b"), ("b", "c"), ("c", "a")])] })
}

/// Interval with the reflection swapping its endpoints.
pub fn interval_z2() -> (FacePoset, HypersurfaceAction) {
    let p = FacePoset::from_corners("I", &["p", "q"], &[]);
    (p, HypersurfaceAction { generators: vec![perm(&[("p", "q"), ("q", "p")])] })
}

pub fn disk() -> FacePoset {
    FacePoset::from_corners("D", &["circle"], &[])
}

/// Octagon with sides `s0..s7` and vertices `v{i} = s{i} ∩ s{i+1}`.
pub fn octagon() -> FacePoset {
    let sides: Vec<String> = (0..8).map(|i| format!("s{i}")).collect();
    let verts: Vec<(String, [String; 2])> = (0..8).map(|i| (format!("v{i}"), [sides[i].clone(), sides[(i + 1) % 8].clone()])).collect();
    let side_refs: Vec<&str> = sides.iter().map(|s| s.as_str()).collect();
    let vert_refs: Vec<[&str; 2]> = verts.iter().map(|(_, c)| [c[0].as_str(), c[1].as_str()]).collect();
    let corners: Vec<(&str, &[&str])> = verts.iter().zip(&vert_refs).map(|((id, _), c)| (id.as_str(), c.as_slice())).collect();
    FacePoset::from_corners("oct", &side_refs, &corners)
}

/// Product structure on the square: vertical sides fiber trivially over
/// themselves, horizontal sides collapse to points.
pub fn square_product_ifs() -> IteratedFibrationDesc {
    let mut ifs = IteratedFibrationDesc::default();
    for (h, codim) in [("left", 0), ("right", 0), ("bottom", 1), ("top", 1)] {
        ifs.fibrations.insert(h.into(), Fibration { base: format!("Y_{h}"), codim });
    }
    for lo in ["left", "right"] {
        for hi in ["bottom", "top"] {
            ifs.compatibilities.push(Compatibility {
                lower: lo.into(),
                upper: hi.into(),
                map: format!("Y_{lo}->Y_{hi}"),
                from: format!("Y_{lo}"),
                to: format!("Y_{hi}"),
            });
        }
    }
    ifs
}

/// A corner `[0,1)^2` with its vertex blown up: two sides fibering over
/// themselves and a front face fibering over the vertex.
pub fn square_corner_tower() -> (FacePoset, IteratedFibrationDesc) {
    let quadrant = FacePoset::from_corners("Q", &["bottom", "left"], &[("bl", &["bottom", "left"])]);
    let poset = blowup_face_poset(&quadrant, &Center::face("bl")).expect("corner blow-up").poset;
    let mut ifs = IteratedFibrationDesc::default();
    ifs.fibrations.insert("bottom".into(), Fibration { base: "Y_bottom".into(), codim: 0 });
    ifs.fibrations.insert("left".into(), Fibration { base: "Y_left".into(), codim: 0 });
    ifs.fibrations.insert("ff:bl".into(), Fibration { base: "corner".into(), codim: 1 });
    for side in ["bottom", "left"] {
        ifs.compatibilities.push(Compatibility {
            lower: side.into(),
            upper: "ff:bl".into(),
            map: format!("Y_{side}->corner"),
            from: format!("Y_{side}"),
            to: "corner".into(),
        });
    }
    (poset, ifs)
}
