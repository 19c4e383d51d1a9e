//! Invariant suites run by `gellmann-pauli verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{
    compose, decompose, fast_decompose, generator_in_pauli, pauli_in_generators, SectorBlock,
};
use crate::error::{Error, Result};
use crate::gellmann::{all_indices, generator, orthogonal_diagonal_basis, Family};
use crate::matrix::{hs_inner, rank, ComplexMatrix, IntMatrix};
use crate::pauli::{enumerate_strings, PauliString};
use crate::su::{build_element, exponentiate, extract_params, Convention, SuParameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Orthogonality,
    Roundtrip,
    Rank,
    IdentityFree,
    Unitarity,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "orthogonality" => Ok(Suite::Orthogonality),
            "roundtrip" => Ok(Suite::Roundtrip),
            "rank" => Ok(Suite::Rank),
            "identity-free" => Ok(Suite::IdentityFree),
            "unitarity" => Ok(Suite::Unitarity),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    /// Overrides every per-check threshold when set.
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured quantity: an error, a rank, or a count.
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub m: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(m: usize, checks: Vec<Check>) -> Self {
        Self {
            m,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Check {
    Check {
        name: name.into(),
        passed: value <= threshold,
        value,
        threshold,
    }
}

fn exactly(name: impl Into<String>, value: usize, expected: usize) -> Check {
    Check {
        name: name.into(),
        passed: value == expected,
        value: value as f64,
        threshold: expected as f64,
    }
}

pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        m[(r, r)].re = rng.gen_range(-1.0..1.0);
        for c in r + 1..dim {
            let z = num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    m
}

pub fn random_params(n: usize, rng: &mut impl Rng) -> SuParameters {
    let values: Vec<f64> = (0..n * n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SuParameters::from_flat(n, &values).expect("length matches n")
}

fn check_m(m: usize) -> Result<usize> {
    if m == 0 || m > 6 {
        return Err(Error::invalid(format!(
            "verify supports 1 <= m <= 6, got {m}"
        )));
    }
    Ok(1 << m)
}

/// Pauli strings pairwise orthogonal with norm² 2^m; off-diagonal
/// generators orthogonal within their family; the orthogonal diagonal
/// basis has a diagonal Gram matrix.
pub fn orthogonality(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = check_m(opts.m)?;
    let tol = opts.tolerance.unwrap_or(1e-12);
    let strings = enumerate_strings(opts.m, None)?;
    let mut worst = 0.0f64;
    for p in &strings {
        for q in &strings {
            // Structured Tr(P† Q): only equal flip masks overlap.
            let ip: num_complex::Complex64 = if p.flip_mask() != q.flip_mask() {
                num_complex::Complex64::new(0.0, 0.0)
            } else {
                (0..n as u64)
                    .map(|r| p.entry(r).1.conj() * q.entry(r).1)
                    .sum()
            };
            let want = if p == q { n as f64 } else { 0.0 };
            worst = worst.max((ip - want).norm());
        }
    }
    let mut checks = vec![at_most("pauli strings orthonormal up to 2^m", worst, tol)];

    let indices = all_indices(n)?;
    let mut worst = 0.0f64;
    for fam in [Family::SymmetricReal, Family::AntisymmetricImaginary] {
        let xs: Vec<_> = indices
            .iter()
            .filter(|i| i.family() == fam)
            .map(generator)
            .collect();
        for (a, xa) in xs.iter().enumerate() {
            for (b, xb) in xs.iter().enumerate() {
                let want = if a == b { 2.0 } else { 0.0 };
                worst = worst.max((hs_inner(xa, xb)? - want).norm());
            }
        }
    }
    checks.push(at_most(
        "off-diagonal generators orthogonal in family",
        worst,
        tol,
    ));

    let basis = orthogonal_diagonal_basis(n)?;
    let mut worst = 0.0f64;
    for (a, xa) in basis.iter().enumerate() {
        for (b, xb) in basis.iter().enumerate() {
            let want = if a == b { 2.0 } else { 0.0 };
            worst = worst.max((hs_inner(xa, xb)? - want).norm());
        }
    }
    checks.push(at_most("orthogonal diagonal basis Gram", worst, tol));
    Ok(checks)
}

/// compose(decompose(M)) = M, fast path = projection, and parameter round trip.
pub fn roundtrip(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = check_m(opts.m)?;
    let tol = opts.tolerance.unwrap_or(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut recompose, mut fast_vs_naive, mut params) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..opts.trials {
        let m = random_hermitian(n, &mut rng);
        let d = decompose(&m)?;
        recompose = recompose.max(compose(&d)?.max_abs_diff(&m));
        fast_vs_naive = fast_vs_naive.max(fast_decompose(&m)?.max_abs_diff(&d));

        let p = random_params(n, &mut rng);
        let back = extract_params(&build_element(&p)?)?;
        let diff = p
            .to_flat()
            .iter()
            .zip(back.to_flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        params = params.max(diff);
    }
    Ok(vec![
        at_most("compose(decompose(M)) = M", recompose, tol),
        at_most("fast_decompose = decompose", fast_vs_naive, tol),
        at_most("extract(build(p)) = p", params, 0.0),
    ])
}

/// Coefficient matrix of all generators over the non-identity strings.
pub fn coefficient_rows(m: usize) -> Result<Vec<Vec<f64>>> {
    let n = check_m(m)?;
    let strings: Vec<PauliString> = enumerate_strings(m, None)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    all_indices(n)?
        .iter()
        .map(|idx| {
            let d = generator_in_pauli(idx)?;
            Ok(strings.iter().map(|p| d.get(p).re).collect())
        })
        .collect()
}

/// Full rank of the generator/string coefficient matrix, and the two
/// expansions inverting each other.
pub fn rank_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = check_m(opts.m)?;
    let rows = coefficient_rows(opts.m)?;
    let r = rank(&rows, 1e-12);
    let mut worst = 0.0f64;
    for idx in all_indices(n)? {
        let mut total = vec![0.0; n * n - 1];
        for (p, c) in generator_in_pauli(&idx)?.iter() {
            for (g, v) in pauli_in_generators(p)?.iter() {
                total[g.flat() - 1] += c.re * v;
            }
        }
        for (i, t) in total.iter().enumerate() {
            let want = if i + 1 == idx.flat() { 1.0 } else { 0.0 };
            worst = worst.max((t - want).abs());
        }
    }
    Ok(vec![
        exactly("coefficient matrix rank", r, n * n - 1),
        at_most(
            "pauli_in_generators ∘ generator_in_pauli = id",
            worst,
            opts.tolerance.unwrap_or(1e-12),
        ),
    ])
}

/// No generator has a component along the all-identity string.
pub fn identity_free(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = check_m(opts.m)?;
    let id = PauliString::identity(opts.m)?;
    let worst = all_indices(n)?
        .iter()
        .map(|idx| generator_in_pauli(idx).map(|d| d.get(&id).norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(vec![at_most(
        "identity coefficient of every generator",
        worst,
        opts.tolerance.unwrap_or(1e-15),
    )])
}

/// `exp(iH)` for random parameters is unitary with unit determinant.
pub fn unitarity(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = check_m(opts.m)?;
    let tol = opts.tolerance.unwrap_or(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut unitary, mut det) = (0.0f64, 0.0f64);
    let id = ComplexMatrix::identity(n);
    for _ in 0..opts.trials {
        let u = exponentiate(&random_params(n, &mut rng), Convention::PhysicsUnitary)?;
        unitary = unitary.max((&u.adjoint() * &u).max_abs_diff(&id));
        det = det.max((u.determinant() - 1.0).norm());
    }
    Ok(vec![
        at_most("max |U†U - I|", unitary, tol),
        at_most("max |det U - 1|", det, tol),
    ])
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    let checks = match suite {
        Suite::Orthogonality => orthogonality(opts)?,
        Suite::Roundtrip => roundtrip(opts)?,
        Suite::Rank => rank_suite(opts)?,
        Suite::IdentityFree => identity_free(opts)?,
        Suite::Unitarity => unitarity(opts)?,
        Suite::All => {
            let mut all = orthogonality(opts)?;
            all.extend(roundtrip(opts)?);
            all.extend(rank_suite(opts)?);
            all.extend(identity_free(opts)?);
            all.extend(unitarity(opts)?);
            all
        }
    };
    Ok(Report::new(opts.m, checks))
}

/// Orthogonality of a sector block read back from JSON: `g gᵀ = size · I`
/// for off-diagonal blocks, `inverse · g = denominator · I` for any block.
pub fn block(forward: &IntMatrix, inverse: &IntMatrix, denominator: u64) -> Vec<Check> {
    let size = forward.rows();
    let mut checks = Vec::new();
    if forward.rows() == forward.cols()
        && inverse.rows() == forward.cols()
        && inverse.cols() == forward.rows()
    {
        let prod = inverse * forward;
        checks.push(Check {
            name: format!("inverse · g = {denominator}·I"),
            passed: prod == IntMatrix::scaled_identity(size, denominator as i64),
            value: 0.0,
            threshold: 0.0,
        });
        if *inverse == forward.transpose() {
            let gram = forward * &forward.transpose();
            checks.push(Check {
                name: format!("g · gᵀ = {denominator}·I"),
                passed: gram == IntMatrix::scaled_identity(size, denominator as i64),
                value: 0.0,
                threshold: 0.0,
            });
        }
    } else {
        checks.push(Check {
            name: "block shapes agree".into(),
            passed: false,
            value: 0.0,
            threshold: 0.0,
        });
    }
    checks
}

/// Checks carried by a computed block.
pub fn sector(b: &SectorBlock) -> Vec<Check> {
    block(&b.forward, &b.inverse, b.inverse_denominator)
}
