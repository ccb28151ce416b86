//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the summary is always printed; exits nonzero if any fails.

mod common;

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{betti, int_rows, q, rank, series_mul, torus_fiber, Q};
use equires::chain_engine::{equalizer_complex, les_check, TowerCoefficients};
use equires::corner_poset::fixtures::triangle_z3;
use equires::corner_poset::{apply_total_boundary_blowup, check_intersection_free};
use equires::equivariant_models::{
    chern_character, delocalized_cohomology, reduced_cartan_cohomology, reduced_k_theory, KClassPresentation,
};
use equires::group_data::{chern_of_rep, rep_ring, Character, CompactGroupDesc, GroupInclusion, Poly, VirtualCharacter};
use equires::scenarios_cli::{generate_catalogue, run, Command, Overrides, RunStatus, ScenarioFile, CATALOGUE};
use equires::strat_model::{canonical_resolution, validate_tower, KFixture, ResolutionTower};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (usize, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalogue(name: &str) -> ScenarioFile {
    generate_catalogue(name, &BTreeMap::new()).expect("catalogue scenario")
}

fn catalogue_with(name: &str, key: &str, value: &str) -> ScenarioFile {
    generate_catalogue(name, &BTreeMap::from([(key.to_string(), value.to_string())])).expect("catalogue scenario")
}

fn tower(file: &ScenarioFile) -> ResolutionTower {
    canonical_resolution(&file.spec().expect("spec")).expect("resolution").0
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Equalizer of `(f_N, f_S, a_0, a_1)` over the sphere quotient, written
/// out by hand: `a_0 = f_N(0)`, `a_1 = f_S(0)` on the free interval.
fn sphere_oracle(max: usize) -> Vec<usize> {
    (0..=max)
        .map(|n| {
            if n == 0 {
                // unknowns f_N, f_S, a_0, a_1; constraints then d
                let c = int_rows(&[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
                let d = int_rows(&[&[0, 0, -1, 1]]);
                4 - rank(&[c, d].concat())
            } else if n == 1 {
                // one edge cochain, image of the constrained 0-cochains
                let c = int_rows(&[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
                let d = int_rows(&[&[0, 0, -1, 1]]);
                let image = rank(&[c.clone(), d].concat()) - rank(&c);
                1 - image
            } else if n % 2 == 0 {
                // u^(n/2) at each pole; the free node has no positive degrees
                2
            } else {
                0
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let r = run(&catalogue("rotation_sphere"), Command::Cohomology, Overrides { max_degree: Some(8), window: None }).map_err(err)?;
    let got = r.tables.cohomology.ok_or("no table")?.ranks;
    let want = sphere_oracle(8);
    ensure(want == [1, 0, 2, 0, 2, 0, 2, 0, 2], || format!("oracle gave {want:?}"))?;
    ensure(got == want, || format!("engine {got:?}, oracle {want:?}"))?;
    ensure(r.status == RunStatus::Ok, || format!("status {:?}", r.status))?;
    Ok(format!("ranks {got:?}"))
}

/// Classes on `(N, S, free)` with characters in `[-n, n]` at each pole;
/// compatibility means both augmentations equal the free value.
fn augmentation_kernel(n: i64) -> usize {
    let w = (2 * n + 1) as usize;
    let mut rows = vec![vec![Q::zero(); 2 * w + 1]; 2];
    for i in 0..w {
        rows[0][i] = q(1);
        rows[1][w + i] = q(1);
    }
    rows[0][2 * w] = q(-1);
    rows[1][2 * w] = q(-1);
    2 * w + 1 - rank(&rows)
}

fn criterion_2() -> Outcome {
    let file = catalogue("rotation_sphere");
    let r = run(&file, Command::Ktheory, Overrides { max_degree: None, window: Some([-2, 2]) }).map_err(err)?;
    let k = r.tables.k_theory.ok_or("no K table")?;
    let want = augmentation_kernel(2);
    ensure(want == 2 * 5 - 1, || format!("oracle gave {want}"))?;
    ensure(k == KFixture { k0: want, k1: 0 }, || format!("K = {k:?}, oracle ({want}, 0)"))?;
    let t = tower(&file);
    let class = |south: i64| {
        let mut c = KClassPresentation::default();
        c.classes.insert("fixed#0".into(), VirtualCharacter::single(Character(vec![1])));
        c.classes.insert("fixed#1".into(), VirtualCharacter::from_terms([(Character(vec![0]), south)]));
        c
    };
    for south in [1, 2] {
        let c = class(south);
        let aug = c.augmentations(&t);
        let oracle = aug["fixed#0"] == aug["fixed#1"];
        let engine = c.is_member(&t).map_err(err)?;
        ensure(engine == oracle && oracle == (south == 1), || format!("(t,{south}): engine {engine}, oracle {oracle}"))?;
    }
    ensure(r.tables.membership.get("t_and_1") == Some(&true) && r.tables.membership.get("t_and_2") == Some(&false), || {
        format!("report membership {:?}", r.tables.membership)
    })?;
    Ok(format!("K^0 {} K^1 {}, (t,1) in, (t,2) out", k.k0, k.k1))
}

fn criterion_3() -> Outcome {
    let file = catalogue("rotation_sphere");
    let t = tower(&file);
    let deloc = delocalized_cohomology(&t, -2, 2).map_err(err)?.parity;
    ensure(deloc.odd == 0 && deloc.even == 9, || format!("delocalized {deloc:?}"))?;
    let basis = reduced_k_theory(&t, -2, 2).map_err(err)?.basis;
    for b in &basis {
        let img = chern_character(&t, b, 8).map_err(err)?;
        ensure(img.defect == 0 && img.closed, || format!("defect {} closed {}", img.defect, img.closed))?;
    }
    let cartan = reduced_cartan_cohomology(&t, 8).map_err(err)?;
    let r = run(&file, Command::Chern, Overrides { max_degree: Some(8), window: Some([-2, 2]) }).map_err(err)?;
    let chern = r.tables.chern_rank.ok_or("no chern rank")?;
    ensure(chern == cartan.even() && chern == 9, || format!("chern rank {chern}, even Cartan {}", cartan.even()))?;
    ensure(r.tables.chern_defect == Some(0), || format!("defect {:?}", r.tables.chern_defect))?;
    Ok(format!("H^even {} H^odd {}, chern rank {chern}", deloc.even, deloc.odd))
}

fn criterion_4() -> Outcome {
    let file = catalogue("antipodal_circle");
    let r = run(&file, Command::All, Overrides::default()).map_err(err)?;
    let got = r.tables.cohomology.ok_or("no table")?.ranks;
    let circle = betti(&file.complexes["Z_free"].simplices);
    ensure(circle == [1, 1], || format!("oracle H(S^1) = {circle:?}"))?;
    ensure(got[..2] == circle[..] && got[2..].iter().all(|&x| x == 0), || format!("engine {got:?}"))?;
    let k = r.tables.k_theory.ok_or("no K table")?;
    let fixture = file.strata.types[0].k_theory.ok_or("no fixture")?;
    ensure(k == fixture, || format!("K {k:?}, fixture {fixture:?}"))?;
    Ok(format!("Cartan {:?}, K ({}, {})", &got[..2], k.k0, k.k1))
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    for base in ["circle", "square"] {
        let file = catalogue_with("trivial_action", "base", base);
        let r = run(&file, Command::Cohomology, Overrides { max_degree: Some(12), window: None }).map_err(err)?;
        let got = r.tables.cohomology.ok_or("no table")?.ranks;
        let want = series_mul(&betti(&file.complexes["Z_fixed"].simplices), &torus_fiber(1, 12), 12);
        ensure(got == want, || format!("{base}: engine {got:?}, oracle {want:?}"))?;
        lines.push(format!("{base} {got:?}"));
    }
    Ok(lines.join("; "))
}

fn criterion_6() -> Outcome {
    let file = catalogue("blowup_invariance_pair");
    let plain = tower(&file);
    let blown = canonical_resolution(&file.blown_up_spec().map_err(err)?.ok_or("no blown-up spec")?).map_err(err)?.0;
    ensure(blown.nodes.len() == plain.nodes.len() + 1, || "blow-up should add one node".into())?;
    let a = reduced_cartan_cohomology(&plain, 8).map_err(err)?;
    let b = reduced_cartan_cohomology(&blown, 8).map_err(err)?;
    ensure(a == b, || format!("{:?} vs {:?}", a.ranks, b.ranks))?;
    let (da, db) = (delocalized_cohomology(&plain, -2, 2).map_err(err)?, delocalized_cohomology(&blown, -2, 2).map_err(err)?);
    ensure(da.parity == db.parity, || format!("delocalized {:?} vs {:?}", da.parity, db.parity))?;
    let r = run(&file, Command::Cohomology, Overrides::default()).map_err(err)?;
    ensure(r.status == RunStatus::Ok, || format!("run status {:?}", r.status))?;
    Ok(format!("both {:?}", a.ranks))
}

fn closed_below_sets(t: &ResolutionTower) -> Vec<BTreeSet<usize>> {
    let n = t.nodes.len();
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<BTreeSet<usize>>())
        .filter(|s| t.is_closed_below(s))
        .collect()
}

fn criterion_7() -> Outcome {
    let mut pairs = 0;
    for name in ["rotation_sphere", "torus_on_s2xs2"] {
        let t = tower(&catalogue(name));
        let coeff = TowerCoefficients::borel(&t, 6).map_err(err)?;
        let sets = closed_below_sets(&t);
        for small in &sets {
            for large in sets.iter().filter(|l| l.len() == small.len() + 1 && small.is_subset(l)) {
                let rep = les_check(&t, &coeff, small, large, 6).map_err(err)?;
                ensure(rep.is_exact(), || format!("{name}: {small:?} ⊂ {large:?} has defects"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} adjacent pairs exact"))
}

fn criterion_8() -> Outcome {
    let file = catalogue("torus_on_s2xs2");
    let (t, trace) = canonical_resolution(&file.spec().map_err(err)?).map_err(err)?;
    ensure(trace.rounds.len() == 2, || format!("{} rounds", trace.rounds.len()))?;
    let v = validate_tower(&t);
    ensure(v.is_empty(), || format!("violations {v:?}"))?;
    // ((1 + t^2) / (1 - t^2))^2
    let h_s2 = [1, 0, 1];
    let sphere = series_mul(&h_s2, &torus_fiber(1, 6), 6);
    let want = series_mul(&sphere, &sphere, 6);
    let got = reduced_cartan_cohomology(&t, 6).map_err(err)?.ranks;
    ensure(want == [1, 0, 4, 0, 8, 0, 12], || format!("oracle gave {want:?}"))?;
    ensure(got == want, || format!("engine {got:?}, oracle {want:?}"))?;
    Ok(format!("2 rounds, valid, ranks {got:?}"))
}

fn criterion_9() -> Outcome {
    let (poset, action) = triangle_z3();
    let before = check_intersection_free(&poset, &action).map_err(err)?;
    ensure(before.is_err(), || "triangle sides should meet within an orbit".into())?;
    let (blown, action) = apply_total_boundary_blowup(&poset, &action).map_err(err)?;
    let after = check_intersection_free(&blown, &action).map_err(err)?;
    ensure(after.is_ok(), || format!("still intersecting: {after:?}"))?;
    Ok("fails before total boundary blow-up, passes after".into())
}

fn d_squared(t: &ResolutionTower, coeff: &TowerCoefficients, max: usize) -> Result<usize, String> {
    let slices = equalizer_complex(t, coeff, max).map_err(err)?;
    let parts: BTreeMap<(usize, usize), &equires::chain_engine::SlicePart> =
        slices.iter().flat_map(|s| s.parts.iter()).map(|p| ((p.strand, p.form_degree), p)).collect();
    let mut checked = 0;
    for (&(k, p), part) in &parts {
        if let Some(next) = parts.get(&(k, p + 1)) {
            ensure(next.differential.mul(&part.differential).is_zero(), || format!("d^2 != 0 at strand {k}, form degree {p}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn torus_inclusion() -> impl Strategy<Value = (GroupInclusion, GroupInclusion)> {
    (1usize..=2, 0usize..=1, 0usize..=1)
        .prop_flat_map(|(a, db, dc)| {
            let (b, c) = (a + db, a + db + dc);
            (
                Just((a, b, c)),
                prop::collection::vec(prop::collection::vec(-2i64..=2, b), a),
                prop::collection::vec(prop::collection::vec(-2i64..=2, c), b),
            )
        })
        .prop_map(|((a, b, c), l1, l2)| {
            let t = CompactGroupDesc::torus;
            (GroupInclusion::abelian(t(a), t(b), l1), GroupInclusion::abelian(t(b), t(c), l2))
        })
        .prop_filter("inclusions", |(i, j)| i.validate().is_ok() && j.validate().is_ok())
}

fn criterion_10() -> Outcome {
    let mut slices = 0;
    let mut subdivided = 0;
    for name in CATALOGUE {
        let files = if name == "trivial_action" {
            vec![catalogue_with(name, "base", "circle"), catalogue_with(name, "base", "square")]
        } else {
            vec![catalogue(name)]
        };
        for file in files {
            let mut towers = vec![tower(&file)];
            if let Some(b) = file.blown_up_spec().map_err(err)? {
                towers.push(canonical_resolution(&b).map_err(err)?.0);
            }
            for t in towers {
                let max = if t.nodes.len() > 4 { 4 } else { 6 };
                let coeff = TowerCoefficients::borel(&t, max).map_err(err)?;
                slices += d_squared(&t, &coeff, max)?;
                let fine = t.subdivide();
                let (a, b) = (reduced_cartan_cohomology(&t, max).map_err(err)?, reduced_cartan_cohomology(&fine, max).map_err(err)?);
                ensure(a == b, || format!("{name}: subdivision changed {:?} to {:?}", a.ranks, b.ranks))?;
                let (a, b) = (delocalized_cohomology(&t, -1, 1).map_err(err)?, delocalized_cohomology(&fine, -1, 1).map_err(err)?);
                ensure(a.parity == b.parity, || format!("{name}: subdivision changed delocalized ranks"))?;
                subdivided += 1;
            }
        }
    }

    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let inclusions = Cell::new(0);
    runner
        .run(&(torus_inclusion(), prop::collection::vec(-3i64..=3, 4)), |((i, j), w)| {
            let composite = i.then(&j).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let (ri, rj, rc) = (i.restrict_poly().unwrap(), j.restrict_poly().unwrap(), composite.restrict_poly().unwrap());
            prop_assert_eq!(&rj.then(&ri).images, &rc.images);
            let chi = Character(w[..j.target.character_len()].to_vec());
            let two_step = i.restrict_rep().unwrap().apply_virtual(&j.restrict_rep().unwrap().apply(&chi).unwrap()).unwrap();
            prop_assert_eq!(two_step, composite.restrict_rep().unwrap().apply(&chi).unwrap());
            inclusions.set(inclusions.get() + 1);
            Ok(())
        })
        .map_err(|e| format!("functoriality: {e}"))?;

    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let pairs = Cell::new(0);
    runner
        .run(&(1usize..=2, prop::collection::vec(-3i64..=3, 4)), |(r, w)| {
            let k = CompactGroupDesc::torus(r);
            let (a, b) = (Character(w[..r].to_vec()), Character(w[2..2 + r].to_vec()));
            let ring = rep_ring(&k);
            let ch = |v: &VirtualCharacter| chern_of_rep(&k, v, 8).unwrap();
            let product = ch(&ring.product(&a, &b).unwrap());
            let weights = vec![2; r];
            let expected: Poly = ch(&VirtualCharacter::single(a)).mul(&ch(&VirtualCharacter::single(b))).truncate(&weights, 8);
            prop_assert_eq!(product, expected);
            pairs.set(pairs.get() + 1);
            Ok(())
        })
        .map_err(|e| format!("chern ring map: {e}"))?;
    let (inclusions, pairs) = (inclusions.get(), pairs.get());
    ensure(inclusions == 100 && pairs == 100, || format!("ran {inclusions} inclusions, {pairs} pairs"))?;
    Ok(format!(
        "d^2 = 0 on {slices} slice pairs, {subdivided} towers subdivision-invariant, {inclusions} inclusions, {pairs} monomial pairs"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, criterion_1, Duration::from_secs(5)),
        (2, criterion_2, Duration::from_secs(5)),
        (3, criterion_3, Duration::from_secs(10)),
        (4, criterion_4, Duration::from_secs(300)),
        (5, criterion_5, Duration::from_secs(300)),
        (6, criterion_6, Duration::from_secs(300)),
        (7, criterion_7, Duration::from_secs(300)),
        (8, criterion_8, Duration::from_secs(60)),
        (9, criterion_9, Duration::from_secs(300)),
        (10, criterion_10, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (n, f, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(msg) if elapsed <= limit => format!("PASS criterion {n}: {msg} ({:.2} s)", elapsed.as_secs_f64()),
            Ok(msg) => format!("FAIL criterion {n}: {msg}, but took {:.2} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs()),
            Err(msg) => format!("FAIL criterion {n}: {msg} ({:.2} s)", elapsed.as_secs_f64()),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
