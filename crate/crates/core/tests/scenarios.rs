use std::collections::BTreeMap;

use equires::scenarios_cli::{
    emit_scenario, generate_catalogue, parse_scenario, render, run, Command, Format, Overrides, RunStatus, ScenarioError,
    ScenarioFile, CATALOGUE,
};

fn catalogue(name: &str) -> ScenarioFile {
    generate_catalogue(name, &BTreeMap::new()).unwrap()
}

fn sphere_text() -> String {
    emit_scenario(&catalogue("rotation_sphere"))
}

#[test]
fn emitted_catalogue_parses_back() {
    for name in CATALOGUE {
        let s = catalogue(name);
        assert_eq!(parse_scenario(&emit_scenario(&s)).unwrap(), s, "{name}");
    }
    let s = parse_scenario(&sphere_text()).unwrap();
    let spec = s.spec().unwrap();
    assert_eq!(spec.types.len(), 2);
    assert_eq!(spec.types.iter().map(|t| t.hypersurfaces.len()).sum::<usize>(), 2);
}

#[test]
fn every_catalogue_scenario_validates_and_matches() {
    for name in CATALOGUE {
        let r = run(&catalogue(name), Command::All, Overrides::default()).unwrap();
        assert!(r.validation.is_empty(), "{name}: {:?}", r.validation);
        assert_eq!(r.status, RunStatus::Ok, "{name}: {:?}", r.checks);
        assert!(!r.checks.is_empty());
    }
}

#[test]
fn reports_are_deterministic() {
    for name in CATALOGUE {
        let file = catalogue(name);
        let a = run(&file, Command::All, Overrides::default()).unwrap();
        let b = run(&parse_scenario(&emit_scenario(&file)).unwrap(), Command::All, Overrides::default()).unwrap();
        for f in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(render(&a, f), render(&b, f), "{name}");
        }
    }
}

#[test]
fn truncated_file_reports_position() {
    let text = sphere_text();
    let cut = &text[..text.len() / 2];
    match parse_scenario(cut) {
        Err(ScenarioError::Syntax { line, column, .. }) => assert!(line > 1 && column > 0),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected_with_a_path() {
    let text = sphere_text().replacen("\"dim\": 1", "\"dim\": 1, \"colour\": \"red\"", 1);
    match parse_scenario(&text) {
        Err(ScenarioError::Schema { path, message, .. }) => {
            assert!(path.starts_with("strata.types[0]"), "{path}");
            assert!(message.contains("colour"));
        }
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn wrong_types_are_schema_errors() {
    let text = sphere_text().replacen("\"torus_rank\": 1", "\"torus_rank\": \"one\"", 1);
    assert!(matches!(parse_scenario(&text), Err(ScenarioError::Schema { path, .. }) if path.contains("torus_rank")));
}

#[test]
fn dangling_group_is_named() {
    let mut file = catalogue("rotation_sphere");
    file.strata.types[1].group = "SU2".into();
    match parse_scenario(&emit_scenario(&file)) {
        Err(ScenarioError::Dangling { path, kind, id }) => {
            assert_eq!((path.as_str(), kind, id.as_str()), ("strata.types[1].group", "group", "SU2"));
        }
        other => panic!("expected a dangling reference, got {other:?}"),
    }
}

#[test]
fn dangling_targets_and_maps_are_named() {
    let mut file = catalogue("rotation_sphere");
    file.strata.types[0].hypersurfaces[0].target = "nowhere".into();
    let e = parse_scenario(&emit_scenario(&file)).unwrap_err();
    assert!(e.to_string().contains("nowhere"), "{e}");

    let mut file = catalogue("rotation_sphere");
    file.strata.types[0].hypersurfaces[1].map = "psi_missing".into();
    assert!(matches!(parse_scenario(&emit_scenario(&file)), Err(ScenarioError::Dangling { kind: "map", .. })));

    let mut file = catalogue("rotation_sphere");
    file.expectations.as_mut().unwrap().membership[0].class = "ghost".into();
    assert!(matches!(parse_scenario(&emit_scenario(&file)), Err(ScenarioError::Dangling { kind: "class", .. })));
}

#[test]
fn version_is_checked() {
    let text = sphere_text().replacen("equires-scenario/1", "equires-scenario/0", 1);
    assert!(matches!(parse_scenario(&text), Err(ScenarioError::Version(_))));
}

#[test]
fn bad_simplices_are_invalid() {
    let mut file = catalogue("rotation_sphere");
    file.complexes.get_mut("Z_free").unwrap().simplices.push(vec![2, 2]);
    assert!(matches!(parse_scenario(&emit_scenario(&file)), Err(ScenarioError::Invalid { .. })));
}

#[test]
fn blowup_pair_reports_two_equal_tables() {
    let r = run(&catalogue("blowup_invariance_pair"), Command::Cohomology, Overrides::default()).unwrap();
    let blown = r.blown_up.as_ref().unwrap();
    assert_eq!(r.tables.cohomology, blown.cohomology);
    assert!(r.checks.iter().any(|c| c.name == "blown_up.cohomology" && c.ok));
}

#[test]
fn csv_has_a_header_and_one_row_per_degree() {
    let r = run(&catalogue("rotation_sphere"), Command::Cohomology, Overrides::default()).unwrap();
    let csv = render(&r, Format::Csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("section,key,value"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("cohomology,")).count(), 9);
}
