use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::schema::ScenarioFile;
use super::ScenarioError;
use crate::chain_engine::{CohomologyTable, ParityTable};
use crate::equivariant_models::{
    chern_character, chern_rank, delocalized_cohomology, reduced_cartan_cohomology, reduced_k_theory, KClassPresentation,
    ModelError,
};
use crate::strat_model::{canonical_resolution, edge_table, validate_tower, IsotropySpec, KFixture, ResolutionTower, ResolutionTrace, Violation};

pub const ENGINE_VERSION: &str = concat!("equires ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Resolve,
    Cohomology,
    Deloc,
    Ktheory,
    Chern,
    All,
    Validate,
}

impl Command {
    pub const ALL: [Command; 7] =
        [Command::Resolve, Command::Cohomology, Command::Deloc, Command::Ktheory, Command::Chern, Command::All, Command::Validate];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Cohomology => "cohomology",
            Command::Deloc => "deloc",
            Command::Ktheory => "ktheory",
            Command::Chern => "chern",
            Command::All => "all",
            Command::Validate => "validate",
        }
    }

    fn includes(self, part: Command) -> bool {
        self == part || self == Command::All
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Command-line replacements for the scenario's computation settings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub max_degree: Option<usize>,
    pub window: Option<[i64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Mismatch,
    Invalid,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::Mismatch => 1,
            RunStatus::Invalid => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tables {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delocalized: Option<ParityTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_theory: Option<KFixture>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chern_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chern_defect: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub membership: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub engine: String,
    pub scenario: String,
    pub command: Command,
    pub max_degree: usize,
    pub window: [i64; 2],
    pub status: RunStatus,
    pub nodes: Vec<String>,
    pub edges: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ResolutionTrace>,
    pub validation: Vec<Violation>,
    pub tables: Tables,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blown_up: Option<Tables>,
    pub checks: Vec<Check>,
    /// Computations or checks that were not carried out, with the reason.
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

fn check<T: PartialEq + fmt::Debug>(checks: &mut Vec<Check>, name: &str, expected: &T, actual: &T) {
    checks.push(Check { name: name.into(), expected: format!("{expected:?}"), actual: format!("{actual:?}"), ok: expected == actual });
}

struct Resolved {
    tower: ResolutionTower,
    trace: ResolutionTrace,
    violations: Vec<Violation>,
}

fn resolve(spec: &IsotropySpec, tag: &str) -> Result<Resolved, Violation> {
    match canonical_resolution(spec) {
        Ok((tower, trace)) => {
            let mut violations = validate_tower(&tower);
            if !tag.is_empty() {
                for v in &mut violations {
                    v.detail = format!("{tag}: {}", v.detail);
                }
            }
            Ok(Resolved { tower, trace, violations })
        }
        Err(e) => Err(Violation { code: "resolution".into(), detail: if tag.is_empty() { e.to_string() } else { format!("{tag}: {e}") } }),
    }
}

/// Computation failures that only mean "not available for this scenario".
fn soft(e: ModelError, what: &str, notes: &mut Vec<String>) -> Result<(), ModelError> {
    match e {
        ModelError::MissingK(_) | ModelError::Unsupported(_) => {
            notes.push(format!("{what} skipped: {e}"));
            Ok(())
        }
        e => Err(e),
    }
}

fn compute(
    tower: &ResolutionTower,
    file: &ScenarioFile,
    command: Command,
    max_degree: usize,
    [lo, hi]: [i64; 2],
    notes: &mut Vec<String>,
) -> Result<Tables, ModelError> {
    let mut t = Tables::default();
    if command.includes(Command::Cohomology) {
        t.cohomology = Some(reduced_cartan_cohomology(tower, max_degree)?);
    }
    if command.includes(Command::Deloc) {
        t.delocalized = Some(delocalized_cohomology(tower, lo, hi)?.parity);
    }
    if command.includes(Command::Ktheory) || command.includes(Command::Chern) {
        match reduced_k_theory(tower, lo, hi) {
            Ok(k) => {
                if command.includes(Command::Ktheory) {
                    t.k_theory = Some(KFixture { k0: k.k0, k1: k.k1 });
                    for c in &file.k_classes {
                        t.membership.insert(c.name.clone(), KClassPresentation::from_entries(&c.classes).is_member(tower)?);
                    }
                }
                if command.includes(Command::Chern) {
                    let mut defect = 0;
                    for b in &k.basis {
                        match chern_character(tower, b, max_degree as u32) {
                            Ok(img) => defect += img.defect,
                            Err(ModelError::ConstraintViolation(n)) => defect += n,
                            Err(e) => return Err(e),
                        }
                    }
                    t.chern_defect = Some(defect);
                    t.chern_rank = Some(chern_rank(tower, &k.basis, max_degree as u32)?);
                }
            }
            Err(e) => soft(e, "K-theory", notes)?,
        }
    }
    Ok(t)
}

/// Resolve, validate, compute what `command` asks for and compare with the
/// scenario's expectations. Invalid scenarios are reported without any
/// computed tables.
pub fn run(file: &ScenarioFile, command: Command, overrides: Overrides) -> Result<RunReport, ScenarioError> {
    let max_degree = overrides.max_degree.unwrap_or(file.computations.max_degree);
    let window = overrides.window.unwrap_or(file.computations.window);
    let wrap = |source| ScenarioError::Model { scenario: file.id.clone(), source };
    let spec = file.spec()?;
    let blown_spec = file.blown_up_spec()?;
    let mut report = RunReport {
        engine: ENGINE_VERSION.into(),
        scenario: file.id.clone(),
        command,
        max_degree,
        window,
        status: RunStatus::Ok,
        nodes: Vec::new(),
        edges: BTreeMap::new(),
        trace: None,
        validation: Vec::new(),
        tables: Tables::default(),
        blown_up: None,
        checks: Vec::new(),
        notes: Vec::new(),
    };
    if window[0] > window[1] {
        return Err(ScenarioError::Invalid { path: "computations.window".into(), message: format!("empty window {window:?}") });
    }

    let main = resolve(&spec, "");
    let blown = blown_spec.as_ref().map(|b| resolve(b, "blown_up"));
    for r in std::iter::once(&main).chain(blown.iter()) {
        match r {
            Ok(r) => report.validation.extend(r.violations.iter().cloned()),
            Err(v) => report.validation.push(v.clone()),
        }
    }
    let Ok(main) = main else {
        report.status = RunStatus::Invalid;
        return Ok(report);
    };
    report.nodes = main.tower.nodes.iter().map(|n| n.id.clone()).collect();
    report.edges = edge_table(&main.tower);
    if command.includes(Command::Resolve) {
        report.trace = Some(main.trace.clone());
    }
    if !report.validation.is_empty() {
        report.status = RunStatus::Invalid;
        return Ok(report);
    }

    let expect = file.expectations.as_ref();
    let window_matches = expect.is_some_and(|e| e.window == window);
    if let Some(e) = expect {
        if !window_matches {
            report.notes.push(format!("window-dependent expectations skipped: they assume {:?}", e.window));
        }
        if let (Some(rounds), true) = (e.rounds, matches!(command, Command::Resolve | Command::Validate | Command::All)) {
            check(&mut report.checks, "rounds", &rounds, &main.trace.rounds.len());
        }
    }

    report.tables = compute(&main.tower, file, command, max_degree, window, &mut report.notes).map_err(wrap)?;
    if let Some(Ok(b)) = &blown {
        let mut notes = Vec::new();
        let reduced = match command {
            Command::All => Command::All,
            Command::Cohomology | Command::Deloc => command,
            _ => Command::Validate,
        };
        if reduced != Command::Validate {
            let mut tables = compute(&b.tower, file, reduced, max_degree, window, &mut notes).map_err(wrap)?;
            // classes name nodes of the main tower only
            tables.membership.clear();
            report.notes.extend(notes.into_iter().map(|n| format!("blown_up: {n}")));
            let t = &report.tables;
            if let (Some(x), Some(y)) = (&t.cohomology, &tables.cohomology) {
                check(&mut report.checks, "blown_up.cohomology", &x.ranks, &y.ranks);
            }
            if let (Some(x), Some(y)) = (&t.delocalized, &tables.delocalized) {
                check(&mut report.checks, "blown_up.delocalized", x, y);
            }
            if let (Some(x), Some(y)) = (&t.k_theory, &tables.k_theory) {
                check(&mut report.checks, "blown_up.k_theory", x, y);
            }
            report.blown_up = Some(tables);
        }
    }

    let t = &report.tables;
    let mut checks = Vec::new();
    if let Some(defect) = t.chern_defect {
        check(&mut checks, "chern.defect", &0, &defect);
    }
    if let Some(e) = expect {
        if let (Some(want), Some(got)) = (&e.cohomology, &t.cohomology) {
            let n = want.len().min(got.ranks.len());
            check(&mut checks, "cohomology", &want[..n].to_vec(), &got.ranks[..n].to_vec());
        }
        if window_matches {
            if let (Some(want), Some(got)) = (&e.delocalized, &t.delocalized) {
                check(&mut checks, "delocalized", want, got);
            }
            if let (Some(want), Some(got)) = (&e.k_theory, &t.k_theory) {
                check(&mut checks, "k_theory", want, got);
            }
            if let (Some(want), Some(got)) = (&e.chern_rank, &t.chern_rank) {
                if e.cohomology.as_ref().is_some_and(|c| c.len() == max_degree + 1) {
                    check(&mut checks, "chern_rank", want, got);
                } else {
                    report.notes.push("chern_rank expectation skipped: it assumes a different degree bound".into());
                }
            }
            if command.includes(Command::Ktheory) {
                for m in &e.membership {
                    check(&mut checks, &format!("membership.{}", m.class), &m.member, &t.membership.get(&m.class).copied().unwrap_or(!m.member));
                }
            }
        }
        if e.k_theory.is_some() && t.k_theory.is_none() && command.includes(Command::Ktheory) {
            checks.push(Check { name: "k_theory".into(), expected: format!("{:?}", e.k_theory), actual: "unavailable".into(), ok: false });
        }
    }
    report.checks.extend(checks);
    if report.failed_checks().next().is_some() {
        report.status = RunStatus::Mismatch;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios_cli::generate_catalogue;

    fn catalogue(name: &str) -> ScenarioFile {
        generate_catalogue(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn sphere_cohomology_run() {
        let r = run(&catalogue("rotation_sphere"), Command::Cohomology, Overrides::default()).unwrap();
        assert_eq!(r.status, RunStatus::Ok);
        assert_eq!(r.tables.cohomology.unwrap().ranks, [1, 0, 2, 0, 2, 0, 2, 0, 2]);
        assert!(r.tables.k_theory.is_none());
    }

    #[test]
    fn mutated_tower_fails_validation() {
        let mut s = catalogue("rotation_sphere");
        // the south pole now lands on a vertex the fixed complex lacks
        s.maps.get_mut("psi_south").unwrap().pairs = vec![[1, 7]];
        let r = run(&s, Command::Validate, Overrides::default()).unwrap();
        assert_eq!(r.status, RunStatus::Invalid);
        assert!(!r.validation.is_empty());
        assert!(r.tables == Tables::default());
    }

    #[test]
    fn wrong_expectation_is_a_mismatch() {
        let mut s = catalogue("rotation_sphere");
        s.expectations.as_mut().unwrap().cohomology = Some(vec![1, 0, 3]);
        let r = run(&s, Command::Cohomology, Overrides::default()).unwrap();
        assert_eq!(r.status, RunStatus::Mismatch);
        assert_eq!(r.failed_checks().count(), 1);
    }

    #[test]
    fn overrides_skip_window_checks() {
        let o = Overrides { max_degree: Some(4), window: Some([-1, 1]) };
        let r = run(&catalogue("rotation_sphere"), Command::All, o).unwrap();
        assert_eq!(r.status, RunStatus::Ok);
        assert_eq!(r.tables.k_theory, Some(KFixture { k0: 5, k1: 0 }));
        assert!(r.checks.iter().all(|c| c.name != "k_theory"));
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn command_names() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
        }
        assert!("plot".parse::<Command>().is_err());
    }
}
