//! Acceptance criteria, one pass/fail line each. Runs as a plain binary
//! (`harness = false`) and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gellmann_pauli::basis::{
    classification_table, compose, decompose, fast_decompose, generator_in_pauli,
    pauli_in_generators, sector_block, SectorPart,
};
use gellmann_pauli::cli;
use gellmann_pauli::gellmann::{all_indices, generator, Family, GeneratorIndex};
use gellmann_pauli::matrix::{rank, ComplexMatrix, IntMatrix};
use gellmann_pauli::pauli::{enumerate_strings, materialize, PauliString};
use gellmann_pauli::su::{
    build_element, exponentiate, extract_params, free_parameter_breakdown, free_parameter_count,
    Convention, SuParameters,
};
use gellmann_pauli::verify::{random_hermitian, random_params};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Id, title, check, time budget in seconds.
type Criterion = (&'static str, &'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn idx(n: usize, flat: usize) -> GeneratorIndex {
    GeneratorIndex::from_flat(n, flat).unwrap()
}

fn string(s: &str) -> PauliString {
    s.parse().unwrap()
}

/// The eight groups for su(8), transcribed form by form.
const TABLE_M3: [(&str, [usize; 4], [usize; 4]); 7] = [
    ("D-D-OD", [8, 21, 30, 35], [36, 49, 58, 63]),
    ("D-OD-D", [9, 16, 31, 34], [37, 44, 59, 62]),
    ("D-OD-OD", [10, 15, 32, 33], [38, 43, 60, 61]),
    ("OD-D-D", [11, 18, 24, 29], [39, 46, 52, 57]),
    ("OD-D-OD", [12, 17, 25, 28], [40, 45, 53, 56]),
    ("OD-OD-D", [13, 20, 22, 27], [41, 48, 50, 55]),
    ("OD-OD-OD", [14, 19, 23, 26], [42, 47, 51, 54]),
];

fn ac1_table() -> Outcome {
    let table = classification_table(3).map_err(|e| e.to_string())?;
    ensure(table.len() == 8, || format!("{} forms", table.len()))?;
    let mut seen: Vec<usize> = Vec::new();
    for (form, cell) in &table {
        seen.extend(&cell.real);
        seen.extend(&cell.imaginary);
        seen.extend(&cell.diagonal);
        if form.is_all_diagonal() {
            ensure(cell.diagonal == (1..=7).collect::<Vec<_>>(), || {
                format!("D-D-D diagonal {:?}", cell.diagonal)
            })?;
            continue;
        }
        let (_, real, imag) = TABLE_M3
            .iter()
            .find(|(f, _, _)| *f == form.to_ascii())
            .ok_or_else(|| format!("unexpected form {form}"))?;
        ensure(
            cell.real == real.to_vec() && cell.imaginary == imag.to_vec(),
            || {
                format!(
                    "{form}: real {:?} imaginary {:?}",
                    cell.real, cell.imaginary
                )
            },
        )?;
    }
    seen.sort_unstable();
    ensure(seen == (1..=63).collect::<Vec<_>>(), || {
        "indices not a partition of 1..=63".into()
    })?;

    let text = cli::run(["gellmann-pauli", "table", "--m", "3"]);
    ensure(text.code == 0, || text.stderr.clone())?;
    for (form, real, imag) in TABLE_M3 {
        let pretty = form.replace('-', "⊗");
        let list = |xs: [usize; 4]| xs.map(|x| format!("X{x}")).join(", ");
        let block = format!(
            "{pretty} form generator:\n  Real part      : {}\n  Imaginary part : {}",
            list(real),
            list(imag)
        );
        ensure(text.stdout.contains(&block), || {
            format!("text output lacks\n{block}")
        })?;
    }

    let json = cli::run(["gellmann-pauli", "--format", "json", "table", "--m", "3"]);
    let value: serde_json::Value = serde_json::from_str(&json.stdout).map_err(|e| e.to_string())?;
    let forms = value["forms"].as_array().ok_or("no forms array")?;
    for (form, real, imag) in TABLE_M3 {
        let row = forms
            .iter()
            .find(|r| r["form"] == form)
            .ok_or_else(|| format!("json lacks {form}"))?;
        ensure(
            row["real"] == serde_json::json!(real) && row["imaginary"] == serde_json::json!(imag),
            || format!("json row {row}"),
        )?;
    }
    Ok("8 groups, 63 indices, text and JSON".into())
}

fn ac2_expansions() -> Outcome {
    let q = 0.25;
    let expected: [(usize, [(&str, f64); 4]); 5] = [
        (1, [("IIZ", q), ("ZII", q), ("IZI", q), ("ZZZ", q)]),
        (8, [("IIX", q), ("IZX", q), ("ZIX", q), ("ZZX", q)]),
        (21, [("IIX", q), ("IZX", -q), ("ZIX", q), ("ZZX", -q)]),
        (30, [("IIX", q), ("IZX", q), ("ZIX", -q), ("ZZX", -q)]),
        (35, [("IIX", q), ("IZX", -q), ("ZIX", -q), ("ZZX", q)]),
    ];
    let mut worst = 0.0f64;
    for (flat, terms) in expected {
        let d = generator_in_pauli(&idx(8, flat)).map_err(|e| e.to_string())?;
        ensure(d.len() == 4, || format!("X{flat} has {} terms", d.len()))?;
        for (s, c) in terms {
            worst = worst.max((d.get(&string(s)) - Complex64::new(c, 0.0)).norm());
        }
    }
    ensure(worst <= 1e-15, || {
        format!("generator expansion error {worst:e}")
    })?;

    let forward: [(&str, [f64; 4]); 4] = [
        ("IIX", [1.0, 1.0, 1.0, 1.0]),
        ("IZX", [1.0, -1.0, 1.0, -1.0]),
        ("ZIX", [1.0, 1.0, -1.0, -1.0]),
        ("ZZX", [1.0, -1.0, -1.0, 1.0]),
    ];
    for (s, coeffs) in forward {
        let e = pauli_in_generators(&string(s)).map_err(|e| e.to_string())?;
        ensure(e.len() == 4, || format!("{s} has {} generators", e.len()))?;
        for (flat, c) in [8, 21, 30, 35].into_iter().zip(coeffs) {
            worst = worst.max((e.get(flat) - c).abs());
        }
    }
    ensure(worst <= 1e-15, || {
        format!("forward equation error {worst:e}")
    })?;
    Ok(format!(
        "5 expansions, 4 forward equations, max error {worst:e}"
    ))
}

fn ac3_block() -> Outcome {
    let g = IntMatrix::from_rows(&[
        vec![1, 1, 1, 1],
        vec![1, -1, 1, -1],
        vec![1, 1, -1, -1],
        vec![1, -1, -1, 1],
    ])
    .unwrap();
    let b =
        sector_block(&"D-D-OD".parse().unwrap(), SectorPart::Real).map_err(|e| e.to_string())?;
    ensure(b.forward == g, || format!("g = {:?}", b.forward.to_rows()))?;
    let rows: Vec<String> = b.rows.iter().map(ToString::to_string).collect();
    let cols: Vec<usize> = b.columns.iter().map(GeneratorIndex::flat).collect();
    ensure(
        rows == ["IIX", "IZX", "ZIX", "ZZX"] && cols == [8, 21, 30, 35],
        || format!("rows {rows:?} columns {cols:?}"),
    )?;
    // Stated inverse is g/4.
    ensure(b.inverse == g && b.inverse_denominator == 4, || {
        format!(
            "inverse {:?} / {}",
            b.inverse.to_rows(),
            b.inverse_denominator
        )
    })?;
    ensure(&g * &g == IntMatrix::scaled_identity(4, 4), || {
        "g·g != 4I".into()
    })?;
    // h = g/2: h·h = g·g/4 = I and h is symmetric.
    ensure(g.is_symmetric(), || "g not symmetric".into())?;
    let h = b.normalized();
    for r in 0..4 {
        for c in 0..4 {
            let hh: f64 = (0..4).map(|k| h[r][k] * h[k][c]).sum();
            let want = if r == c { 1.0 } else { 0.0 };
            ensure(hh == want && h[r][c] == h[c][r], || {
                format!("h·h[{r}][{c}] = {hh}")
            })?;
        }
    }
    Ok("g, inverse g/4, h = g/2 symmetric and self-inverse".into())
}

fn ac4_ziy() -> Outcome {
    let (z, i, n) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    );
    let printed = vec![
        vec![z, n, z, z, z, z, z, z],
        vec![i, z, z, z, z, z, z, z],
        vec![z, z, z, n, z, z, z, z],
        vec![z, z, i, z, z, z, z, z],
        vec![z, z, z, z, z, i, z, z],
        vec![z, z, z, z, n, z, z, z],
        vec![z, z, z, z, z, z, z, i],
        vec![z, z, z, z, z, z, n, z],
    ];
    let want = ComplexMatrix::from_rows(&printed).unwrap();
    let got = materialize(&string("ZIY")).map_err(|e| e.to_string())?;
    ensure(got == want, || format!("materialized\n{got:?}"))?;
    Ok("64 entries equal".into())
}

fn ac5_counting() -> Outcome {
    ensure(free_parameter_count(8) == Ok(63), || {
        "count(8) != 63".into()
    })?;
    ensure(free_parameter_breakdown(8) == Ok((7, 28, 28)), || {
        "breakdown(8) != 7+28+28".into()
    })?;
    for n in 2..=64usize {
        let (d, a, b) = free_parameter_breakdown(n).map_err(|e| e.to_string())?;
        ensure(d == n - 1 && a + b == n * (n - 1) && a == b, || {
            format!("n = {n}: {d}+{a}+{b}")
        })?;
        ensure(free_parameter_count(n) == Ok(n * n - 1), || {
            format!("n = {n}")
        })?;
        ensure(
            SuParameters::zeros(n).unwrap().to_flat().len() == n * n - 1,
            || format!("n = {n} vector"),
        )?;
    }
    Ok("63 = 7+28+28; n^2-1 for n in 2..=64".into())
}

fn ac6_one_to_one() -> Outcome {
    let strings: Vec<PauliString> = enumerate_strings(3, None)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let identity = PauliString::identity(3).unwrap();
    let mut rows = Vec::new();
    let mut worst_identity = 0.0f64;
    for g in all_indices(8).map_err(|e| e.to_string())? {
        let sparse = generator_in_pauli(&g).map_err(|e| e.to_string())?;
        // Projection of the dense matrix as a second route.
        let dense = decompose(&generator(&g)).map_err(|e| e.to_string())?;
        ensure(sparse.max_abs_diff(&dense) <= 1e-15, || {
            format!("{g}: routes disagree")
        })?;
        worst_identity = worst_identity
            .max(sparse.get(&identity).norm())
            .max(dense.get(&identity).norm());
        rows.push(
            strings
                .iter()
                .map(|p| {
                    let c = sparse.get(p);
                    ensure(c.im == 0.0, || format!("{g} {p}: complex coefficient")).unwrap();
                    c.re
                })
                .collect::<Vec<f64>>(),
        );
    }
    let r = rank(&rows, 1e-9);
    ensure(r == 63, || format!("rank {r}"))?;
    ensure(worst_identity <= 1e-15, || {
        format!("identity coefficient {worst_identity:e}")
    })?;
    Ok(format!(
        "rank {r}, identity coefficient max {worst_identity:e}"
    ))
}

fn ac7_fast_vs_naive() -> Outcome {
    let mut worst = 0.0f64;
    for p in enumerate_strings(3, None).map_err(|e| e.to_string())? {
        let m = materialize(&p).unwrap();
        let (fast, naive) = (fast_decompose(&m).unwrap(), decompose(&m).unwrap());
        worst = worst.max(fast.max_abs_diff(&naive));
        ensure(
            fast.len() == 1 && fast.get(&p) == Complex64::new(1.0, 0.0),
            || format!("{p}"),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=5 {
        for _ in 0..100 {
            let h = random_hermitian(1 << m, &mut rng);
            let (fast, naive) = (fast_decompose(&h).unwrap(), decompose(&h).unwrap());
            worst = worst.max(fast.max_abs_diff(&naive));
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("64 strings + 500 Hermitian, max error {worst:e}"))
}

fn ac8_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let h = random_hermitian(8, &mut rng);
        let back = compose(&decompose(&h).unwrap()).unwrap();
        worst = worst.max(back.max_abs_diff(&h));
    }
    ensure(worst <= 1e-12, || {
        format!("compose∘decompose error {worst:e}")
    })?;
    for _ in 0..1000 {
        let p = random_params(8, &mut rng);
        let back = extract_params(&build_element(&p).unwrap()).map_err(|e| e.to_string())?;
        ensure(back.to_flat() == p.to_flat(), || {
            "parameters changed in round trip".into()
        })?;
    }
    Ok(format!(
        "1000 matrices (max error {worst:e}), 1000 parameter vectors exact"
    ))
}

fn ac9_unitary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let id = ComplexMatrix::identity(8);
    let (mut unit, mut det) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let u = exponentiate(&random_params(8, &mut rng), Convention::PhysicsUnitary).unwrap();
        unit = unit.max((&u.adjoint() * &u).max_abs_diff(&id));
        det = det.max((u.determinant() - Complex64::new(1.0, 0.0)).norm());
    }
    ensure(unit <= 1e-10 && det <= 1e-10, || {
        format!("‖U†U−I‖ {unit:e}, |det−1| {det:e}")
    })?;
    Ok(format!("‖U†U−I‖ {unit:e}, |det U−1| {det:e}"))
}

fn ac10_derivative() -> Outcome {
    let h = 1e-5;
    let id = ComplexMatrix::identity(8);
    let mut worst = 0.0f64;
    for g in all_indices(8).map_err(|e| e.to_string())? {
        let mut values = vec![0.0; 63];
        values[g.flat() - 1] = h;
        let p = SuParameters::from_flat(8, &values).unwrap();
        let step = exponentiate(&p, Convention::Literal).unwrap();
        let fd = (&step - &id).scale_real(1.0 / h);
        worst = worst.max(fd.max_abs_diff(&generator(&g)));
    }
    ensure(worst <= 1e-4, || format!("max error {worst:e}"))?;
    Ok(format!("63 directions, max error {worst:e}"))
}

fn y_parity_violations(m: usize, dense_check: bool) -> Result<usize, String> {
    let n = 1 << m;
    let mut checked = 0;
    for g in all_indices(n).map_err(|e| e.to_string())? {
        let want_odd = match g.family() {
            Family::Diagonal => continue,
            Family::SymmetricReal => false,
            Family::AntisymmetricImaginary => true,
        };
        let d = if dense_check {
            decompose(&generator(&g)).unwrap()
        } else {
            generator_in_pauli(&g).unwrap()
        };
        ensure(!d.is_empty(), || format!("{g}: empty support"))?;
        for (p, _) in d.iter() {
            ensure((p.y_count() % 2 == 1) == want_odd, || {
                format!("{g}: {p} has {} Y", p.y_count())
            })?;
        }
        checked += 1;
    }
    Ok(checked)
}

fn ac11_y_parity() -> Outcome {
    let m3 = y_parity_violations(3, true)?;
    let m3s = y_parity_violations(3, false)?;
    let m4 = y_parity_violations(4, false)?;
    ensure(m3 == 56 && m3s == 56 && m4 == 240, || {
        format!("checked {m3}/{m3s}/{m4}")
    })?;
    Ok(format!("{m3} generators at m = 3, {m4} at m = 4"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC1", "classification table for m = 3", ac1_table, 1),
        ("AC2", "expansion goldens", ac2_expansions, 1),
        ("AC3", "D⊗D⊗OD real block", ac3_block, 1),
        ("AC4", "ZIY matrix", ac4_ziy, 1),
        ("AC5", "parameter counting", ac5_counting, 1),
        ("AC6", "one-to-one change of basis", ac6_one_to_one, 1),
        ("AC7", "fast vs naive decomposition", ac7_fast_vs_naive, 30),
        ("AC8", "round trips", ac8_roundtrip, 30),
        ("AC9", "group membership", ac9_unitary, 30),
        ("AC10", "derivative at the identity", ac10_derivative, 30),
        ("AC11", "real/imaginary Y parity", ac11_y_parity, 30),
    ];
    let mut failures = 0;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= Duration::from_secs(budget) {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget} s"))
            }
        });
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.clone())
            }
        };
        println!("[{tag}] {id} {name}: {detail} ({elapsed:.2?})");
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
