//! Acceptance checks. Prints one PASS/FAIL line per criterion, plus FINDING
//! lines for formula disagreements that are reported rather than asserted,
//! and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use kcoal_cli::{cmd_retable, cmd_verify, retable_rows, Format, GraphSample, SweepRange, TargetChoice};
use kcoal_core::family::{build_family, Family, FamilySpec};
use kcoal_core::graph::{laplacian, Graph};
use kcoal_core::indices::{
    kemeny_constant, kirchhoff_index, multiplicative_dk, verify, IndexKind, Verdict, VerifyTarget,
};
use kcoal_core::linalg::{sym_eigen, Matrix, SymMatrix};
use kcoal_core::resistance::{
    closed_form, rd_kcoal_complete, resistance_oracle, resistance_via_block_split, ResistanceMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn sweep(family: Family, ranges: &[&str]) -> SweepRange {
    let mut s = SweepRange::defaults(family, 1e-9);
    for r in ranges {
        s.set(r).expect("valid range");
    }
    s
}

fn criterion_1_specs() -> Vec<FamilySpec> {
    let s = SweepRange { canonical: true, ..sweep(Family::KCoalComplete, &["p1=1..12", "p2=1..12", "k=1..12"]) };
    s.specs(&GraphSample::default())
}

/// The family sweeps of criterion 2, with 20 random `G` on at most 8 vertices.
fn criterion_2_specs() -> Vec<FamilySpec> {
    let sample = GraphSample { count: 20, max_order: 8, seed: 2024 };
    [
        sweep(Family::Windmill, &["n=2..6", "t=2..5"]),
        sweep(Family::Pineapple, &["p=2..8", "q=1..6"]),
        sweep(Family::Dandelion, &["n=1..15", "l=1..15"]),
        sweep(Family::BipartiteStar, &["p=1..6", "q=1..6", "n=1..6"]),
        sweep(Family::BipartiteComplete, &["p=1..6", "q=1..6", "n=1..6"]),
        sweep(Family::JoinCoal, &["p=1..6", "k=1..4"]),
        sweep(Family::StarJoinCoal, &["p=2..6"]),
    ]
    .iter()
    .flat_map(|s| s.specs(&sample))
    .collect()
}

fn closed_vs_oracle(specs: &[FamilySpec]) -> Result<(f64, String), String> {
    let mut worst = (0.0, String::new());
    for s in specs {
        let g = build_family(s).map_err(|e| format!("{s}: {e}"))?;
        let oracle = resistance_oracle(&g).map_err(|e| format!("{s}: {e}"))?;
        let closed = closed_form(s).map_err(|e| format!("{s}: {e}"))?;
        let (dev, _) = closed.max_deviation(&oracle).map_err(|e| format!("{s}: {e}"))?;
        if dev > worst.0 || worst.1.is_empty() {
            worst = (dev, s.to_string());
        }
    }
    Ok(worst)
}

fn c1() -> Outcome {
    let start = Instant::now();
    let specs = criterion_1_specs();
    let (dev, at) = closed_vs_oracle(&specs)?;
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("{} tuples, max deviation {dev:.3e} at {at}, {secs:.1}s", specs.len());
    if dev <= 1e-9 && secs < 60.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c2() -> Outcome {
    let specs = criterion_2_specs();
    let mut lines = Vec::new();
    let mut ok = true;
    for fam in [
        Family::Windmill,
        Family::Pineapple,
        Family::Dandelion,
        Family::BipartiteStar,
        Family::BipartiteComplete,
        Family::JoinCoal,
        Family::StarJoinCoal,
    ] {
        let of: Vec<FamilySpec> = specs.iter().filter(|s| s.family() == fam).cloned().collect();
        let (dev, _) = closed_vs_oracle(&of)?;
        ok &= dev <= 1e-9 && !of.is_empty();
        lines.push(format!("{fam} {} tuples max {dev:.1e}", of.len()));
    }
    let detail = lines.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c3() -> Outcome {
    let r = rd_kcoal_complete(3, 2, 1).map_err(|e| e.to_string())?;
    // Vertex 0 is the identified vertex, 1 and 2 finish the triangle, 3 is the pendant.
    let checks = [((0, 3), 1.0), ((0, 1), 2.0 / 3.0), ((1, 2), 2.0 / 3.0), ((1, 3), 5.0 / 3.0), ((2, 3), 5.0 / 3.0)];
    let worst = checks.iter().map(|&((i, j), v)| (r.get(i, j) - v).abs()).fold(0.0, f64::max);
    let detail = format!("r(v*,u2)={}, r(K3)={}, r(rest,u2)={}, max error {worst:.1e}", r.get(0, 3), r.get(1, 2), r.get(1, 3));
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c4() -> Outcome {
    let specs: Vec<FamilySpec> = sweep(Family::Windmill, &["n=2..6", "t=2..5"]).specs(&GraphSample::default());
    let mut worst: f64 = 0.0;
    for s in &specs {
        for index in [IndexKind::Kirchhoff, IndexKind::Kemeny] {
            let rep = verify(VerifyTarget::Index(index), s, 1e-9).map_err(|e| format!("{s}: {e}"))?;
            worst = worst.max(rep.abs_diff);
        }
    }
    let kf = verify(VerifyTarget::Index(IndexKind::Kirchhoff), &FamilySpec::Windmill { n: 2, t: 2 }, 1e-9).unwrap();
    let km = verify(VerifyTarget::Index(IndexKind::Kemeny), &FamilySpec::Windmill { n: 2, t: 2 }, 1e-9).unwrap();
    let desk = (kf.formula_value - 28.0 / 3.0).abs() <= 1e-12 && (km.formula_value - 4.0).abs() <= 1e-12;
    let detail = format!("{} tuples x 2 indices, max |formula - definition| {worst:.1e}, (2,2) gives {} and {}", specs.len(), kf.formula_value, km.formula_value);
    if worst <= 1e-9 && desk {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c5(findings: &mut Vec<String>) -> Outcome {
    let specs = sweep(Family::Dandelion, &["n=1..15", "l=1..15"]).specs(&GraphSample::default());
    for s in &specs {
        let g = build_family(s).map_err(|e| e.to_string())?;
        let d = g.distance_matrix().ok_or("dandelion must be connected")?;
        let r = closed_form(s).map_err(|e| e.to_string())?;
        for (i, row) in d.iter().enumerate() {
            for (j, &dij) in row.iter().enumerate() {
                if r.get(i, j) != dij as f64 {
                    return Err(format!("{s}: r({i},{j}) = {} but distance is {dij}", r.get(i, j)));
                }
            }
        }
    }
    let mut recorded = Vec::new();
    for index in [IndexKind::Kirchhoff, IndexKind::Kemeny] {
        let mut mismatches = Vec::new();
        for s in &specs {
            let rep = verify(VerifyTarget::Index(index), s, 1e-9).map_err(|e| format!("{s}: {e}"))?;
            if rep.verdict == Verdict::Mismatch {
                mismatches.push(rep);
            }
        }
        recorded.push(format!("{index}: {}/{} match", specs.len() - mismatches.len(), specs.len()));
        if let Some(first) = mismatches.first() {
            findings.push(format!(
                "dandelion {index} formula disagrees with the definition on {} of {} tuples, e.g. {} formula {} vs {}",
                mismatches.len(),
                specs.len(),
                first.spec,
                first.formula_value,
                first.oracle_value
            ));
        }
    }
    Ok(format!("R equals BFS distances exactly on {} tuples; verdicts {}", specs.len(), recorded.join(", ")))
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("valid edges")
}

fn nonzero_reciprocal_sum(values: &[f64]) -> f64 {
    values[1..].iter().map(|v| 1.0 / v).sum()
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut kf_err, mut kappa_err, mut rstar_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    let count = 64;
    for trial in 0..count {
        let n = 2 + trial % 11;
        let g = random_connected(&mut rng, n, [0.15, 0.35, 0.6][trial % 3]);
        let r = resistance_oracle(&g).map_err(|e| e.to_string())?;
        let mu = sym_eigen(&laplacian(&g)).values;
        kf_err = kf_err.max((kirchhoff_index(&r) - n as f64 * nonzero_reciprocal_sum(mu.as_slice())).abs());

        let d: Vec<f64> = g.degrees().iter().map(|&x| x as f64).collect();
        let mut nl = Matrix::identity(n, n);
        for (u, v) in g.edges() {
            nl[(u, v)] = -1.0 / (d[u] * d[v]).sqrt();
            nl[(v, u)] = nl[(u, v)];
        }
        let lambda = sym_eigen(&SymMatrix::new(nl).map_err(|e| e.to_string())?).values;
        let kappa = kemeny_constant(&g, &r).map_err(|e| e.to_string())?;
        kappa_err = kappa_err.max((kappa - nonzero_reciprocal_sum(lambda.as_slice())).abs());
        let rstar = multiplicative_dk(&g, &r).map_err(|e| e.to_string())?;
        rstar_err = rstar_err.max((rstar - 2.0 * g.size() as f64 * kappa).abs());
    }
    let detail = format!("{count} graphs: Kf err {kf_err:.1e}, kemeny err {kappa_err:.1e}, R*-2m.kemeny err {rstar_err:.1e}");
    if kf_err <= 1e-8 && kappa_err <= 1e-8 && rstar_err <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c7(findings: &mut Vec<String>) -> Outcome {
    let mut problems = Vec::new();
    for (spec, formula, oracle) in [
        (FamilySpec::Pineapple { p: 3, q: 1 }, 29.0 / 3.0, 19.0 / 3.0),
        (FamilySpec::KCoalComplete { p1: 3, p2: 2, k: 1 }, 16.0 / 3.0, 19.0 / 3.0),
    ] {
        let rep = verify(VerifyTarget::Index(IndexKind::Kirchhoff), &spec, 1e-9).map_err(|e| e.to_string())?;
        let ok = rep.verdict == Verdict::Mismatch
            && (rep.formula_value - formula).abs() <= 1e-12
            && (rep.oracle_value - oracle).abs() <= 1e-9;
        if !ok {
            problems.push(format!("{spec}: {rep:?}"));
        }
        findings.push(format!("{spec} kirchhoff formula {} vs oracle {}", rep.formula_value, rep.oracle_value));
    }
    let rows = retable_rows().map_err(|e| e.to_string())?;
    let row18 = rows.iter().find(|r| (r.p1, r.p2, r.k) == (2, 2, 2)).ok_or("row (2,2,2) missing")?;
    if !((row18.re_computed - 2.0).abs() <= 1e-9 && row18.re_printed == 4.0) {
        problems.push(format!("row (2,2,2): {row18:?}"));
    }
    let again = retable_rows().map_err(|e| e.to_string())?;
    let drift = rows.iter().zip(&again).map(|(a, b)| (a.re_computed - b.re_computed).abs()).fold(0.0, f64::max);
    let first = cmd_retable(Format::Csv).map_err(|e| e.to_string())?;
    let second = cmd_retable(Format::Csv).map_err(|e| e.to_string())?;
    if drift > 1e-9 || first != second {
        problems.push("retable output differs between runs".into());
    }
    let off = rows.iter().filter(|r| r.diff.abs() > 0.005).count();
    findings.push(format!("{off} of {} tabulated RE values differ from the eigensolve by more than rounding", rows.len()));
    let detail = format!("pineapple(3,1) and kcoal(3,2,1) reported as mismatches, row (2,2,2) RE {} vs printed {}", row18.re_computed, row18.re_printed);
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(problems.join("; "))
    }
}

fn c8() -> Outcome {
    let mut checked = 0;
    let mut check = |r: &ResistanceMatrix, what: &dyn std::fmt::Display| -> Result<(), String> {
        checked += 1;
        r.check_metric(1e-9).map_err(|e| format!("{what}: {e:?}"))
    };
    for s in criterion_1_specs().iter().chain(&criterion_2_specs()) {
        let g = build_family(s).map_err(|e| e.to_string())?;
        check(&closed_form(s).map_err(|e| e.to_string())?, s)?;
        check(&resistance_oracle(&g).map_err(|e| e.to_string())?, s)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let n = 2 + trial % 11;
        let g = random_connected(&mut rng, n, 0.3);
        check(&resistance_oracle(&g).map_err(|e| e.to_string())?, &format!("random graph {trial}"))?;
        let tail = [trial % n];
        let split = resistance_via_block_split(&g, &tail).map_err(|e| e.to_string())?;
        check(&split, &format!("block split {trial}"))?;
    }
    Ok(format!("{checked} matrices from the closed, oracle and block {{1}}-inverse routes"))
}

fn c9() -> Outcome {
    let s = SweepRange { canonical: true, ..sweep(Family::KCoalComplete, &["p1=1..12", "p2=1..12", "k=1..12"]) };
    let sample = GraphSample::default();
    let mut outputs = Vec::new();
    for (jobs, format) in [(1, Format::Csv), (8, Format::Csv), (1, Format::Json), (3, Format::Json)] {
        outputs.push(cmd_verify(&s, TargetChoice::All, &sample, jobs, format).map_err(|e| e.to_string())?.body);
    }
    let same = outputs[0] == outputs[1] && outputs[2] == outputs[3];
    let rows = outputs[0].lines().count() - 1;
    let detail = format!("{rows} report rows; CSV 1 vs 8 threads and JSON 1 vs 3 threads byte-identical: {same}");
    if same {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let mut findings = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("closed form vs oracle for K_p1 o_k K_p2, p1 <= 12", c1()),
        ("closed form vs oracle for the other families", c2()),
        ("kite spot values", c3()),
        ("windmill Kirchhoff and Kemeny formulas", c4()),
        ("dandelion distances and formula verdicts", c5(&mut findings)),
        ("spectral identities on random graphs", c6()),
        ("known discrepancies reported as findings", c7(&mut findings)),
        ("metric properties of every route", c8()),
        ("verify output independent of thread count", c9()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    for f in &findings {
        println!("FINDING: {f}");
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
