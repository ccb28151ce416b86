use std::collections::BTreeMap;

use super::schema::{
    strata_from_spec, Computations, Expectations, Membership, NamedClass, ScenarioFile, SCHEMA_VERSION,
};
use super::ScenarioError;
use crate::chain_engine::ParityTable;
use crate::equivariant_models::NodeClass;
use crate::group_data::{Character, CompactGroupDesc};
use crate::strat_model::fixtures::{complex, cover, hyp, isotropy_type, rotation_sphere, torus_on_s2xs2};
use crate::strat_model::{IsotropySpec, KFixture};

pub const CATALOGUE: [&str; 8] = [
    "rotation_sphere",
    "rotation_sphere_with_trivial_H",
    "antipodal_circle",
    "reflection_circle",
    "trivial_action",
    "torus_on_s3",
    "torus_on_s2xs2",
    "blowup_invariance_pair",
];

const CIRCLE: &[&[usize]] = &[&[0, 1], &[1, 2], &[0, 2]];
const SQUARE: &[&[usize]] = &[&[0, 1, 2], &[0, 2, 3]];
const POINT: KFixture = KFixture { k0: 1, k1: 0 };
const LOOP: KFixture = KFixture { k0: 1, k1: 1 };

/// Coefficients of `p(t) q(t)` through degree `max`.
pub fn series_product(p: &[usize], q: &[usize], max: usize) -> Vec<usize> {
    (0..=max).map(|n| (0..=n).map(|i| p.get(i).unwrap_or(&0) * q.get(n - i).unwrap_or(&0)).sum()).collect()
}

fn with_k(mut spec: IsotropySpec, k: &[(&str, KFixture)]) -> IsotropySpec {
    for t in &mut spec.types {
        t.k_theory = k.iter().find(|(id, _)| *id == t.id).map(|&(_, f)| f);
    }
    spec
}

struct Draft {
    id: &'static str,
    description: &'static str,
    spec: IsotropySpec,
    blown_up: Option<IsotropySpec>,
    computations: Computations,
    k_classes: Vec<NamedClass>,
    expectations: Option<Expectations>,
}

impl Draft {
    fn new(id: &'static str, description: &'static str, spec: IsotropySpec, max_degree: usize, window: [i64; 2]) -> Self {
        Draft {
            id,
            description,
            spec,
            blown_up: None,
            computations: Computations { max_degree, window },
            k_classes: Vec::new(),
            expectations: Some(Expectations {
                window,
                rounds: None,
                cohomology: None,
                delocalized: None,
                k_theory: None,
                chern_rank: None,
                membership: Vec::new(),
            }),
        }
    }

    fn expect(&mut self) -> &mut Expectations {
        self.expectations.as_mut().expect("draft expectations")
    }

    fn finish(self) -> ScenarioFile {
        let (mut groups, mut complexes, mut maps) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
        let strata = strata_from_spec(&self.spec, &mut groups, &mut complexes, &mut maps, "");
        let blown_up = self.blown_up.map(|b| strata_from_spec(&b, &mut groups, &mut complexes, &mut maps, "blown_up."));
        ScenarioFile {
            version: SCHEMA_VERSION.into(),
            id: self.id.into(),
            description: self.description.into(),
            groups,
            complexes,
            maps,
            strata,
            blown_up,
            computations: self.computations,
            k_classes: self.k_classes,
            expectations: self.expectations,
        }
    }
}

fn param<'a>(params: &'a BTreeMap<String, String>, allowed: &[&str]) -> Result<Option<&'a str>, ScenarioError> {
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(ScenarioError::InvalidParams(format!("unknown parameter `{k}`")));
    }
    Ok(allowed.first().and_then(|k| params.get(*k)).map(String::as_str))
}

/// Builds a catalogue scenario with its reference values. The only
/// parameter is `base=circle|square` for `trivial_action`.
pub fn generate_catalogue(name: &str, params: &BTreeMap<String, String>) -> Result<ScenarioFile, ScenarioError> {
    let draft = match name {
        "rotation_sphere" => {
            param(params, &[])?;
            rotation_sphere_draft()
        }
        "rotation_sphere_with_trivial_H" => {
            param(params, &[])?;
            sphere_with_trivial_h()
        }
        "antipodal_circle" => {
            param(params, &[])?;
            antipodal_circle()
        }
        "reflection_circle" => {
            param(params, &[])?;
            reflection_circle()
        }
        "trivial_action" => match param(params, &["base"])?.unwrap_or("circle") {
            "circle" => trivial_action(true),
            "square" => trivial_action(false),
            other => return Err(ScenarioError::InvalidParams(format!("base must be circle or square, not `{other}`"))),
        },
        "torus_on_s3" => {
            param(params, &[])?;
            torus_on_s3()
        }
        "torus_on_s2xs2" => {
            param(params, &[])?;
            s2xs2()
        }
        "blowup_invariance_pair" => {
            param(params, &[])?;
            blowup_pair()
        }
        other => return Err(ScenarioError::UnknownScenario(other.into())),
    };
    Ok(draft.finish())
}

fn sphere_class(name: &str, south: usize) -> NamedClass {
    NamedClass {
        name: name.into(),
        classes: vec![
            NodeClass { node: "fixed#0".into(), plus: vec![Character(vec![1])], minus: vec![] },
            NodeClass { node: "fixed#1".into(), plus: vec![Character(vec![0]); south], minus: vec![] },
        ],
    }
}

fn rotation_sphere_draft() -> Draft {
    let spec = with_k(rotation_sphere(), &[("free", POINT), ("fixed", POINT)]);
    let mut d = Draft::new("rotation_sphere", "T^1 rotating S^2 about an axis", spec, 8, [-2, 2]);
    d.k_classes = vec![sphere_class("t_and_1", 1), sphere_class("t_and_2", 2)];
    let e = d.expect();
    e.rounds = Some(1);
    e.cohomology = Some(vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
    e.delocalized = Some(ParityTable { even: 9, odd: 0 });
    e.k_theory = Some(KFixture { k0: 9, k1: 0 });
    e.chern_rank = Some(9);
    e.membership = vec![
        Membership { class: "t_and_1".into(), member: true },
        Membership { class: "t_and_2".into(), member: false },
    ];
    d
}

fn sphere_with_trivial_h() -> Draft {
    // G = T^2 with the second factor H acting trivially: every isotropy
    // group contains H
    let t = CompactGroupDesc::torus;
    let types = vec![
        isotropy_type(
            "free",
            t(1),
            complex(&[&[0, 1]]),
            vec![hyp("north", &[&[0]], "fixed", &[(0, 0)]), hyp("south", &[&[1]], "fixed", &[(1, 1)])],
        ),
        isotropy_type("fixed", t(2), complex(&[&[0], &[1]]), vec![]),
    ];
    let covers = vec![cover(&types, "fixed", "free", vec![vec![0, 1]])];
    let spec = with_k(IsotropySpec { ambient: t(2), types, covers }, &[("free", POINT), ("fixed", POINT)]);
    let mut d = Draft::new(
        "rotation_sphere_with_trivial_H",
        "T^2 on S^2 where the first factor rotates and the second acts trivially",
        spec,
        8,
        [-2, 2],
    );
    let e = d.expect();
    e.rounds = Some(1);
    e.cohomology = Some(vec![1, 0, 3, 0, 5, 0, 7, 0, 9]);
    e.k_theory = Some(KFixture { k0: 45, k1: 0 });
    d
}

fn single(id: &str, group: CompactGroupDesc, ambient: CompactGroupDesc, simplices: &[&[usize]], k: KFixture) -> IsotropySpec {
    let mut ty = isotropy_type(id, group, complex(simplices), vec![]);
    ty.k_theory = Some(k);
    IsotropySpec { ambient, types: vec![ty], covers: vec![] }
}

fn antipodal_circle() -> Draft {
    let spec = single("free", CompactGroupDesc::trivial(), CompactGroupDesc::cyclic(2), CIRCLE, LOOP);
    let mut d = Draft::new("antipodal_circle", "Z/2 acting freely on S^1 by the antipodal map", spec, 4, [-2, 2]);
    let e = d.expect();
    e.rounds = Some(0);
    e.cohomology = Some(vec![1, 1, 0, 0, 0]);
    e.delocalized = Some(ParityTable { even: 1, odd: 1 });
    e.k_theory = Some(KFixture { k0: 1, k1: 1 });
    d
}

fn reflection_circle() -> Draft {
    let z2 = CompactGroupDesc::cyclic(2);
    let types = vec![
        isotropy_type(
            "free",
            CompactGroupDesc::trivial(),
            complex(&[&[0, 1]]),
            vec![hyp("east", &[&[0]], "poles", &[(0, 0)]), hyp("west", &[&[1]], "poles", &[(1, 1)])],
        ),
        isotropy_type("poles", z2.clone(), complex(&[&[0], &[1]]), vec![]),
    ];
    let covers = vec![cover(&types, "poles", "free", vec![])];
    let spec = with_k(IsotropySpec { ambient: z2, types, covers }, &[("free", POINT), ("poles", POINT)]);
    let mut d = Draft::new("reflection_circle", "Z/2 acting on S^1 by a reflection", spec, 4, [-2, 2]);
    let e = d.expect();
    e.rounds = Some(1);
    e.cohomology = Some(vec![1, 0, 0, 0, 0]);
    e.delocalized = Some(ParityTable { even: 3, odd: 0 });
    e.k_theory = Some(KFixture { k0: 3, k1: 0 });
    d
}

fn trivial_action(circle: bool) -> Draft {
    let (simplices, k, base) = if circle { (CIRCLE, LOOP, vec![1, 1]) } else { (SQUARE, POINT, vec![1]) };
    let t1 = CompactGroupDesc::torus(1);
    let spec = single("fixed", t1.clone(), t1, simplices, k);
    let description = if circle { "T^1 acting trivially on S^1" } else { "T^1 acting trivially on a square" };
    let mut d = Draft::new("trivial_action", description, spec, 12, [-2, 2]);
    // H(M) times 1/(1 - t^2)
    let fiber: Vec<usize> = (0..=12).map(|n| usize::from(n % 2 == 0)).collect();
    let e = d.expect();
    e.rounds = Some(0);
    e.cohomology = Some(series_product(&base, &fiber, 12));
    e.delocalized = Some(ParityTable { even: 5, odd: if circle { 5 } else { 0 } });
    e.k_theory = Some(KFixture { k0: 5, k1: if circle { 5 } else { 0 } });
    d
}

fn torus_on_s3() -> Draft {
    // |z1|^2 + |z2|^2 = 1; the quotient interval runs from z1 = 0 (first
    // factor fixes the orbit) to z2 = 0
    let t = CompactGroupDesc::torus;
    let types = vec![
        isotropy_type(
            "free",
            CompactGroupDesc::trivial(),
            complex(&[&[0, 1]]),
            vec![hyp("z1_zero", &[&[0]], "a", &[(0, 0)]), hyp("z2_zero", &[&[1]], "b", &[(1, 0)])],
        ),
        isotropy_type("a", t(1), complex(&[&[0]]), vec![]),
        isotropy_type("b", t(1), complex(&[&[0]]), vec![]),
    ];
    let covers = vec![cover(&types, "a", "free", vec![]), cover(&types, "b", "free", vec![])];
    let spec = with_k(IsotropySpec { ambient: t(2), types, covers }, &[("free", POINT), ("a", POINT), ("b", POINT)]);
    let mut d = Draft::new("torus_on_s3", "T^2 acting on S^3 in C^2 factorwise", spec, 8, [-2, 2]);
    let e = d.expect();
    e.rounds = Some(1);
    e.cohomology = Some(vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
    e.delocalized = Some(ParityTable { even: 9, odd: 0 });
    e.k_theory = Some(KFixture { k0: 9, k1: 0 });
    e.chern_rank = Some(9);
    d
}

fn s2xs2() -> Draft {
    let spec = with_k(torus_on_s2xs2(), &[("free", POINT), ("a", POINT), ("b", POINT), ("fixed", POINT)]);
    let mut d = Draft::new("torus_on_s2xs2", "T^2 acting factorwise on S^2 x S^2", spec, 6, [-1, 1]);
    // ((1 + t^2) / (1 - t^2))^2
    let e = d.expect();
    e.rounds = Some(2);
    e.cohomology = Some(vec![1, 0, 4, 0, 8, 0, 12]);
    d
}

fn blowup_pair() -> Draft {
    let t1 = CompactGroupDesc::torus(1);
    let plain = single("m", t1.clone(), t1.clone(), SQUARE, POINT);
    // annulus: inner triangle 0 1 2, outer triangle 3 4 5
    let annulus: &[&[usize]] = &[&[0, 1, 3], &[1, 3, 4], &[1, 2, 4], &[2, 4, 5], &[0, 2, 5], &[0, 3, 5]];
    let mut center = isotropy_type("center", t1.clone(), complex(&[&[0]]), vec![]);
    center.interior_blowup = true;
    let types = vec![
        isotropy_type("m", t1.clone(), complex(annulus), vec![hyp("inner", CIRCLE, "center", &[(0, 0), (1, 0), (2, 0)])]),
        center,
    ];
    let covers = vec![cover(&types, "center", "m", vec![vec![1]])];
    let mut d = Draft::new(
        "blowup_invariance_pair",
        "T^1 acting trivially on a disk, with and without its center blown up",
        plain,
        8,
        [-2, 2],
    );
    d.blown_up = Some(with_k(IsotropySpec { ambient: t1, types, covers }, &[("m", LOOP), ("center", POINT)]));
    let fiber: Vec<usize> = (0..=8).map(|n| usize::from(n % 2 == 0)).collect();
    let e = d.expect();
    e.rounds = Some(0);
    e.cohomology = Some(fiber);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios_cli::{emit_scenario, parse_scenario};

    #[test]
    fn every_name_round_trips() {
        for name in CATALOGUE {
            let s = generate_catalogue(name, &BTreeMap::new()).unwrap();
            let back = parse_scenario(&emit_scenario(&s)).unwrap();
            assert_eq!(back, s, "{name}");
            assert_eq!(back.spec().unwrap().types.len(), s.spec().unwrap().types.len());
        }
    }

    #[test]
    fn params_are_checked() {
        let p = |k: &str, v: &str| BTreeMap::from([(k.to_string(), v.to_string())]);
        assert!(generate_catalogue("trivial_action", &p("base", "square")).is_ok());
        assert!(matches!(generate_catalogue("trivial_action", &p("base", "torus")), Err(ScenarioError::InvalidParams(_))));
        assert!(matches!(generate_catalogue("rotation_sphere", &p("base", "circle")), Err(ScenarioError::InvalidParams(_))));
        assert!(matches!(generate_catalogue("klein_bottle", &BTreeMap::new()), Err(ScenarioError::UnknownScenario(_))));
    }

    #[test]
    fn product_series() {
        assert_eq!(series_product(&[1, 1], &[1, 0, 1, 0, 1], 4), [1, 1, 1, 1, 1]);
    }
}
