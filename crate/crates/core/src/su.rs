//! Parameterization of su(n) and exponentiation to SU(n).
//!
//! An element is fixed by `n - 1` diagonal reals `psi`, and `n(n-1)/2`
//! reals each for the real (`a`) and imaginary (`b`) parts of the upper
//! triangle. Entry `(j, k)` with `j < k` is `a_t - i b_t`, entry `(k, j)` is
//! `a_t + i b_t`, where `t` is the row-major pair number. The last diagonal
//! entry is implied: `psi_n = -(psi_1 + ... + psi_{n-1})`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{generator_count, pair_count, Family, GeneratorIndex, Position};
use crate::matrix::{ComplexMatrix, I};

/// Default absolute tolerance for accepting a matrix as Hermitian and traceless.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuParameters {
    pub n: usize,
    pub psi: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SuParameters {
    pub fn zeros(n: usize) -> Result<Self> {
        free_parameter_count(n)?;
        Ok(Self {
            n,
            psi: vec![0.0; n - 1],
            a: vec![0.0; pair_count(n)],
            b: vec![0.0; pair_count(n)],
        })
    }

    /// Parameters in flat generator order: `psi`, then `a`, then `b`.
    pub fn from_flat(n: usize, values: &[f64]) -> Result<Self> {
        let total = free_parameter_count(n)?;
        if values.len() != total {
            return Err(Error::invalid(format!(
                "expected {total} parameters for n = {n}, got {}",
                values.len()
            )));
        }
        let (psi, rest) = values.split_at(n - 1);
        let (a, b) = rest.split_at(pair_count(n));
        Ok(Self {
            n,
            psi: psi.to_vec(),
            a: a.to_vec(),
            b: b.to_vec(),
        })
    }

    /// The unit vector along one generator direction.
    pub fn unit(idx: &GeneratorIndex) -> Self {
        let mut p = Self::zeros(idx.n()).expect("generator index carries a valid n");
        p.to_flat_mut(idx.flat(), 1.0);
        p
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.psi
            .iter()
            .chain(&self.a)
            .chain(&self.b)
            .copied()
            .collect()
    }

    fn to_flat_mut(&mut self, flat: usize, value: f64) {
        let (d, p) = (self.n - 1, pair_count(self.n));
        match flat {
            f if f <= d => self.psi[f - 1] = value,
            f if f <= d + p => self.a[f - d - 1] = value,
            f => self.b[f - d - p - 1] = value,
        }
    }

    pub fn implied_last_diagonal(&self) -> f64 {
        -self.psi.iter().sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        free_parameter_count(self.n)?;
        let p = pair_count(self.n);
        if self.psi.len() != self.n - 1 || self.a.len() != p || self.b.len() != p {
            return Err(Error::invalid(format!(
                "n = {} needs {} psi, {p} a and {p} b values; got {}, {}, {}",
                self.n,
                self.n - 1,
                self.psi.len(),
                self.a.len(),
                self.b.len()
            )));
        }
        if self.to_flat().iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("parameters must be finite"));
        }
        Ok(())
    }
}

/// Number of real degrees of freedom of su(n): `n^2 - 1`.
pub fn free_parameter_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid(format!("su(n) needs n >= 2, got {n}")));
    }
    Ok(generator_count(n))
}

/// The same count split as `(diagonal, real off-diagonal, imaginary off-diagonal)`.
pub fn free_parameter_breakdown(n: usize) -> Result<(usize, usize, usize)> {
    free_parameter_count(n)?;
    Ok((n - 1, pair_count(n), pair_count(n)))
}

pub fn build_element(p: &SuParameters) -> Result<ComplexMatrix> {
    p.validate()?;
    let n = p.n;
    let mut g = ComplexMatrix::zeros(n);
    for (i, &psi) in p.psi.iter().enumerate() {
        g[(i, i)] = Complex64::new(psi, 0.0);
    }
    g[(n - 1, n - 1)] = Complex64::new(p.implied_last_diagonal(), 0.0);
    let mut t = 0;
    for j in 0..n {
        for k in j + 1..n {
            g[(j, k)] = Complex64::new(p.a[t], -p.b[t]);
            g[(k, j)] = Complex64::new(p.a[t], p.b[t]);
            t += 1;
        }
    }
    Ok(g)
}

/// The three structural conditions on a Hermitian traceless matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuCondition {
    /// (i) diagonal entries are real
    RealDiagonal,
    /// (ii) the diagonal sums to zero
    Traceless,
    /// (iii) the upper triangle is the conjugate of the lower
    ConjugateTriangles,
}

impl SuCondition {
    pub const ALL: [SuCondition; 3] = [
        SuCondition::RealDiagonal,
        SuCondition::Traceless,
        SuCondition::ConjugateTriangles,
    ];

    pub fn numeral(self) -> &'static str {
        match self {
            SuCondition::RealDiagonal => "i",
            SuCondition::Traceless => "ii",
            SuCondition::ConjugateTriangles => "iii",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SuCondition::RealDiagonal => "diagonal entries are real",
            SuCondition::Traceless => "trace is zero",
            SuCondition::ConjugateTriangles => "upper triangle conjugates the lower",
        }
    }
}

impl fmt::Display for SuCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.numeral(), self.description())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub condition: SuCondition,
    pub violation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuReport {
    pub tolerance: f64,
    pub checks: Vec<ConditionCheck>,
}

impl SuReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, condition: SuCondition) -> &ConditionCheck {
        self.checks
            .iter()
            .find(|c| c.condition == condition)
            .expect("report covers every condition")
    }
}

fn condition_violation(m: &ComplexMatrix, condition: SuCondition) -> f64 {
    let n = m.dim();
    match condition {
        SuCondition::RealDiagonal => (0..n).map(|i| m[(i, i)].im.abs()).fold(0.0, f64::max),
        SuCondition::Traceless => (0..n).map(|i| m[(i, i)].re).sum::<f64>().abs(),
        SuCondition::ConjugateTriangles => {
            let mut worst = 0.0f64;
            for j in 0..n {
                for k in j + 1..n {
                    worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
                }
            }
            worst
        }
    }
}

pub fn check_su_conditions(m: &ComplexMatrix) -> SuReport {
    check_su_conditions_with_tolerance(m, HERMITICITY_TOLERANCE)
}

pub fn check_su_conditions_with_tolerance(m: &ComplexMatrix, tolerance: f64) -> SuReport {
    let checks = SuCondition::ALL
        .iter()
        .map(|&condition| {
            let violation = condition_violation(m, condition);
            ConditionCheck {
                condition,
                violation,
                passed: violation <= tolerance,
            }
        })
        .collect();
    SuReport { tolerance, checks }
}

pub fn extract_params(m: &ComplexMatrix) -> Result<SuParameters> {
    extract_params_with_tolerance(m, HERMITICITY_TOLERANCE)
}

/// Reads `psi`, `a`, `b` back off a Hermitian traceless matrix. The first
/// failed condition is reported by name.
pub fn extract_params_with_tolerance(m: &ComplexMatrix, tolerance: f64) -> Result<SuParameters> {
    let report = check_su_conditions_with_tolerance(m, tolerance);
    if let Some(fail) = report.first_failure() {
        return Err(Error::ContractViolation {
            condition: fail.condition,
            violation: fail.violation,
        });
    }
    let n = m.dim();
    let mut p = SuParameters::zeros(n)?;
    for i in 0..n - 1 {
        p.psi[i] = m[(i, i)].re;
    }
    let mut t = 0;
    for j in 0..n {
        for k in j + 1..n {
            p.a[t] = m[(j, k)].re;
            p.b[t] = -m[(j, k)].im;
            t += 1;
        }
    }
    Ok(p)
}

/// How a parameter vector is mapped to the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `exp(H)` with `H` Hermitian: positive definite, not unitary.
    Literal,
    /// `exp(iH)`: unitary with unit determinant.
    #[default]
    PhysicsUnitary,
}

pub fn exponentiate(p: &SuParameters, convention: Convention) -> Result<ComplexMatrix> {
    let h = build_element(p)?;
    Ok(match convention {
        Convention::Literal => h.exp(),
        Convention::PhysicsUnitary => h.scale(I).exp(),
    })
}

/// Coefficient of one generator in `p`.
pub fn coefficient(p: &SuParameters, idx: &GeneratorIndex) -> f64 {
    let n = p.n;
    match (idx.family(), idx.position()) {
        (Family::Diagonal, Position::Diagonal(i)) => p.psi[i - 1],
        (Family::SymmetricReal, _) => p.a[idx.flat() - n],
        (_, _) => p.b[idx.flat() - n - pair_count(n)],
    }
}
