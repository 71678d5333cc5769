//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use qudit_algebra::cyclo::{totient, CycloScalar};
use qudit_algebra::identities::{find_check, run_all, run_check, run_suite, Suite, Target};
use qudit_algebra::lattice::{
    a_dagger_from_uv, edge_powers_from_uv, make_a, make_a_dagger, make_u, make_v,
    matrix_unit_schwinger, matrix_unit_shift, position_x, proj_p, proj_r, proj_script_p,
    proj_script_r, u_from_shift, LatticeConfig, Mode, Mutation,
};
use qudit_algebra::matrix::OperatorMatrix;
use qudit_algebra::tensor::{
    conjugate_by_flatten, coproduct_a_dagger, coproduct_u, flat_generators, flatten_permutation,
    ProductLatticeConfig,
};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// `(d, (d1, d2) for product lattices, name, pass, residual)`.
type CheckRow = (u64, Option<(u64, u64)>, String, bool, String);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qudit-algebra"))
        .args(args)
        .output()
        .expect("spawn qudit-algebra")
}

const SWEEP_EXACT: &[&str] = &[
    "verify",
    "--d",
    "2..8",
    "--suites",
    "all",
    "--mode",
    "exact",
    "--deterministic",
];
const SWEEP_FLOAT: &[&str] = &[
    "verify",
    "--d",
    "2..8",
    "--suites",
    "all",
    "--mode",
    "float",
    "--tol",
    "1e-10",
    "--deterministic",
];

fn exact(d: usize) -> LatticeConfig {
    LatticeConfig::new(d, Mode::Exact).unwrap()
}

fn float(d: usize) -> LatticeConfig {
    LatticeConfig::new(d, Mode::Float).unwrap()
}

/// Every check of a parsed report.
fn checks(report: &Value) -> Vec<CheckRow> {
    let mut out = Vec::new();
    for run in report["runs"].as_array().unwrap() {
        let d = run["d"].as_u64().unwrap();
        let factors = run
            .get("d1")
            .map(|d1| (d1.as_u64().unwrap(), run["d2"].as_u64().unwrap()));
        for suite in run["suites"].as_array().unwrap() {
            for c in suite["checks"].as_array().unwrap() {
                out.push((
                    d,
                    factors,
                    c["name"].as_str().unwrap().to_string(),
                    c["pass"].as_bool().unwrap(),
                    c["max_residual"].as_str().unwrap().to_string(),
                ));
            }
        }
    }
    out
}

fn run_sweep(args: &[&str]) -> Result<(Output, Value, Duration), String> {
    let start = Instant::now();
    let out = cli(args);
    let elapsed = start.elapsed();
    let report: Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    Ok((out, report, elapsed))
}

fn criterion_1() -> Outcome {
    let (out, report, elapsed) = run_sweep(SWEEP_EXACT)?;
    ensure(out.status.code() == Some(0), || {
        format!("exit status {:?}", out.status.code())
    })?;
    let all = checks(&report);
    let lattice_ds: Vec<u64> = all.iter().filter(|c| c.1.is_none()).map(|c| c.0).collect();
    for d in 2..=8 {
        ensure(lattice_ds.contains(&d), || {
            format!("no checks ran at d = {d}")
        })?;
    }
    for s in Suite::ALL {
        let prefix = format!("{}.", s.name());
        ensure(all.iter().any(|c| c.2.starts_with(&prefix)), || {
            format!("suite {} missing", s.name())
        })?;
    }
    if let Some(bad) = all.iter().find(|c| !c.3 || c.4 != "0") {
        return Err(format!(
            "{} at d = {} pass = {} residual = {}",
            bad.2, bad.0, bad.3, bad.4
        ));
    }
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} checks, all residuals exactly 0, {:.2?}",
        all.len(),
        elapsed
    ))
}

/// Every named constructor at lattice size `d`, in the given mode.
fn constructors(cfg: &LatticeConfig) -> Vec<(String, OperatorMatrix)> {
    let d = cfg.d();
    let mut ops = vec![
        ("a".to_string(), make_a(cfg)),
        ("a_dagger".to_string(), make_a_dagger(cfg)),
        ("U".to_string(), make_u(cfg)),
        ("V".to_string(), make_v(cfg)),
        ("X".to_string(), position_x(cfg).unwrap()),
    ];
    for n in 0..=d {
        ops.push((format!("P:{n}"), proj_p(cfg, n).unwrap()));
        ops.push((format!("R:{n}"), proj_r(cfg, n).unwrap()));
    }
    for n in 0..d as i64 {
        ops.push((format!("sP:{n}"), proj_script_p(cfg, n)));
        ops.push((format!("sR:{n}"), proj_script_r(cfg, n)));
    }
    for m in 0..d {
        for n in 0..d {
            ops.push((
                format!("e:{m},{n} shift"),
                matrix_unit_shift(cfg, m, n).unwrap(),
            ));
            ops.push((
                format!("e:{m},{n} schwinger"),
                matrix_unit_schwinger(cfg, m, n).unwrap(),
            ));
        }
    }
    ops
}

fn criterion_2() -> Outcome {
    let (out, float_report, _) = run_sweep(SWEEP_FLOAT)?;
    ensure(out.status.code() == Some(0), || {
        format!("float exit status {:?}", out.status.code())
    })?;
    let (_, exact_report, _) = run_sweep(SWEEP_EXACT)?;
    let verdicts = |r: &Value| {
        checks(r)
            .into_iter()
            .map(|c| (c.0, c.1, c.2, c.3))
            .collect::<Vec<_>>()
    };
    let (f, e) = (verdicts(&float_report), verdicts(&exact_report));
    ensure(f == e, || "exact and float verdicts differ".to_string())?;
    ensure(f.iter().all(|c| c.3), || "a float check failed".to_string())?;

    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for d in 2..=8 {
        for ((name, x), (_, y)) in constructors(&exact(d))
            .into_iter()
            .zip(constructors(&float(d)))
        {
            let r = x.to_float().max_residual(&y).unwrap();
            ensure(r <= 1e-10, || {
                format!("{name} at d = {d}: exact vs float differ by {r:e}")
            })?;
            worst = worst.max(r);
            compared += 1;
        }
    }
    for (d1, d2) in [(2, 2), (2, 3), (3, 2), (4, 3), (3, 5)] {
        let pe = ProductLatticeConfig::new(d1, d2, Mode::Exact).unwrap();
        let pf = ProductLatticeConfig::new(d1, d2, Mode::Float).unwrap();
        for (x, y) in [
            (
                coproduct_a_dagger(&pe).unwrap(),
                coproduct_a_dagger(&pf).unwrap(),
            ),
            (coproduct_u(&pe).unwrap(), coproduct_u(&pf).unwrap()),
            (
                flatten_permutation(&pe).unwrap(),
                flatten_permutation(&pf).unwrap(),
            ),
        ] {
            let r = x.to_float().max_residual(&y).unwrap();
            ensure(r <= 1e-10, || {
                format!("product {d1}x{d2}: exact vs float differ by {r:e}")
            })?;
            worst = worst.max(r);
            compared += 1;
        }
    }
    Ok(format!(
        "{} float checks pass; {compared} constructors agree, worst {worst:e}",
        f.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for d in [4usize, 6, 8] {
        let degree = CycloScalar::zero(d as u64).modulus().degree();
        ensure(degree as u64 == totient(d as u64) && degree < d, || {
            format!("d = {d}: scalars reduced modulo a degree-{degree} polynomial")
        })?;
        for report in run_all(&exact(d)).map_err(|e| e.to_string())? {
            if let Some(bad) = report.results.iter().find(|r| !r.pass) {
                return Err(format!("{} failed at d = {d}", bad.name));
            }
            total += report.total();
        }
    }
    Ok(format!(
        "{total} exact checks pass at d = 4, 6, 8 (field degrees 2, 2, 4)"
    ))
}

fn criterion_4() -> Outcome {
    for d in 2..=6 {
        let cfg = exact(d);
        for m in 0..d {
            for n in 0..d {
                let standard = OperatorMatrix::unit(d, cfg.field(), m, n);
                ensure(matrix_unit_shift(&cfg, m, n).unwrap() == standard, || {
                    format!("shift e_{m}{n} at d = {d}")
                })?;
                ensure(
                    matrix_unit_schwinger(&cfg, m, n).unwrap() == standard,
                    || format!("schwinger e_{m}{n} at d = {d}"),
                )?;
            }
        }
    }
    let mut products = 0;
    for d in 2..=4 {
        let cfg = exact(d);
        let zero = cfg.zeros();
        for (unit, label) in [
            (
                matrix_unit_shift as fn(&LatticeConfig, usize, usize) -> _,
                "shift",
            ),
            (matrix_unit_schwinger, "schwinger"),
        ] {
            let e = |m, n| unit(&cfg, m, n).unwrap();
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            let lhs = e(i, j).matmul(&e(k, l)).unwrap();
                            let rhs = if j == k { e(i, l) } else { zero.clone() };
                            ensure(lhs == rhs, || {
                                format!("{label} e_{i}{j} e_{k}{l} at d = {d}")
                            })?;
                            products += 1;
                        }
                    }
                }
            }
        }
    }
    let report =
        run_suite(Suite::MatrixUnits, &Target::Lattice(exact(4))).map_err(|e| e.to_string())?;
    let product_check = report
        .results
        .iter()
        .find(|r| r.name == "matrix_units.shift_product")
        .unwrap();
    ensure(
        product_check.instances == 256 && report.all_passed(),
        || {
            format!(
                "matrix_units suite at d = 4: {} quadruples",
                product_check.instances
            )
        },
    )?;
    Ok(format!(
        "units agree for d <= 6; {products} products exact for d <= 4 (256 at d = 4)"
    ))
}

fn criterion_5() -> Outcome {
    for d in 2..=8 {
        let cfg = exact(d);
        let (u, v) = (make_u(&cfg), make_v(&cfg));
        ensure(
            a_dagger_from_uv(&cfg, &u, &v).unwrap() == make_a_dagger(&cfg),
            || format!("a† from (U, V) at d = {d}"),
        )?;
        let (zero, one) = (cfg.field().zero(), cfg.field().one());
        let cyclic = OperatorMatrix::from_fn(d, cfg.field(), |m, n| {
            if m == (n + 1) % d {
                one.clone()
            } else {
                zero.clone()
            }
        })
        .unwrap();
        ensure(
            u_from_shift(&cfg, &make_a_dagger(&cfg)).unwrap() == cyclic,
            || format!("U from a† at d = {d}"),
        )?;
        let (up, down) = edge_powers_from_uv(&cfg, &u, &v).unwrap();
        let k = d as u32 - 1;
        ensure(
            up == make_a_dagger(&cfg).matpow(k) && down == make_a(&cfg).matpow(k),
            || format!("edge powers at d = {d}"),
        )?;
    }
    Ok("a† = U - script P_0 U, U = a† + a^(d-1) and edge powers exact for d = 2..8".to_string())
}

fn criterion_6() -> Outcome {
    // the flat generators live in Q(zeta_D), the coproducts in Q(zeta_lcm(d1, d2));
    // `equals` compares exactly after lifting both into a common field
    for (d1, d2) in [(2, 2), (2, 3), (4, 3), (3, 5)] {
        let p = ProductLatticeConfig::new(d1, d2, Mode::Exact).unwrap();
        let (ad, u) = flat_generators(&p);
        ensure(
            conjugate_by_flatten(&p, &ad)
                .unwrap()
                .equals(&coproduct_a_dagger(&p).unwrap(), 0.0)
                == Ok(true),
            || format!("S a† S† != Delta(a†) for {d1}x{d2}"),
        )?;
        ensure(
            conjugate_by_flatten(&p, &u)
                .unwrap()
                .equals(&coproduct_u(&p).unwrap(), 0.0)
                == Ok(true),
            || format!("S U S† != Delta(U) for {d1}x{d2}"),
        )?;
    }
    // 4 x 3 picture: points 1..=12 numbered row by row
    let arrows = [
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 10),
        (10, 11),
        (11, 12),
    ];
    let p = ProductLatticeConfig::new(4, 3, Mode::Exact).unwrap();
    let delta = coproduct_a_dagger(&p).unwrap();
    for col in 0..12 {
        let successor = arrows
            .iter()
            .find(|(from, _)| from - 1 == col)
            .map(|(_, to)| to - 1);
        for row in 0..12 {
            let entry = delta.get(row, col);
            let expected = if successor == Some(row) {
                p.field().one()
            } else {
                p.field().zero()
            };
            ensure(entry == expected, || {
                format!("Delta(a†) entry ({row}, {col}) = {entry}")
            })?;
        }
    }
    Ok("flattening intertwines a† and U for 2x2, 2x3, 4x3, 3x5; 4x3 arrows match".to_string())
}

fn criterion_7() -> Outcome {
    let cfg = exact(4).with_mutation(Some(Mutation::ClockRootSquared));
    let result = run_check(
        find_check("schwinger.VU_eq_qUV").unwrap(),
        &Target::Lattice(cfg.clone()),
    )
    .map_err(|e| e.to_string())?;
    ensure(!result.pass && result.max_residual > 0.0, || {
        "mutated clock still satisfies VU = qUV".to_string()
    })?;
    let failing: usize = run_all(&cfg)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.failed)
        .sum();
    let out = cli(&[
        "verify",
        "--d",
        "4",
        "--mode",
        "exact",
        "--mutate",
        "clock-root-squared",
    ]);
    ensure(out.status.code() == Some(1), || {
        format!("mutated run exit status {:?}", out.status.code())
    })?;
    Ok(format!(
        "q -> q^2 in V at d = 4: {failing} checks fail, VU = qUV residual {:.6}, exit status 1",
        result.max_residual
    ))
}

fn criterion_8() -> Outcome {
    let (first, _, _) = run_sweep(SWEEP_EXACT)?;
    let (second, _, _) = run_sweep(SWEEP_EXACT)?;
    ensure(!first.stdout.is_empty(), || "empty report".to_string())?;
    ensure(first.stdout == second.stdout, || {
        "reports differ".to_string()
    })?;
    Ok(format!(
        "two runs produced identical {}-byte reports",
        first.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 exact sweep d = 2..8", criterion_1),
        ("2 float sweep and exact/float agreement", criterion_2),
        ("3 composite d", criterion_3),
        ("4 matrix units", criterion_4),
        ("5 conversion round trip", criterion_5),
        ("6 tensor isomorphism", criterion_6),
        ("7 negative control", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = 0;
    for (label, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("criterion {label}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {label}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
