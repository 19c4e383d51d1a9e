//! Change of basis between the su(2^m) generators and Pauli strings.
//!
//! Pauli coefficients come from the Hilbert–Schmidt projection
//! `c_P = Tr(P M) / 2^m`, which is exact because distinct strings are
//! orthogonal with `Tr(P P) = 2^m`.
//!
//! A generator at pair `(j, k)` touches rows `r = j-1` and `c = k-1`, so it
//! only overlaps strings whose flip mask is `r ^ c`. That groups the
//! off-diagonal generators and strings into sectors of `2^(m-1)` each, one
//! per D/OD form and real/imaginary part, related by a ±1 matrix.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gellmann::{self, Family, GeneratorIndex, Position};
use crate::matrix::{ComplexMatrix, IntMatrix, I, ZERO};
use crate::pauli::{
    check_dense_cap, enumerate_strings, quarter_turn, FormTag, PauliString, DEFAULT_DENSE_CAP,
    MAX_STRUCTURED_QUBITS,
};
use crate::su::{extract_params_with_tolerance, SuParameters, HERMITICITY_TOLERANCE};

/// Coefficients with magnitude below this are dropped from decompositions.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// A linear combination of Pauli strings of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    m: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl Decomposition {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_STRUCTURED_QUBITS {
            return Err(Error::invalid(format!("qubit count {m} outside 1..=63")));
        }
        Ok(Self {
            m,
            terms: BTreeMap::new(),
        })
    }

    /// Collects terms, summing repeated strings. Every string must have
    /// length `m`.
    pub fn from_terms(
        m: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Result<Self> {
        let mut d = Self::new(m)?;
        for (p, c) in terms {
            d.add(p, c)?;
        }
        Ok(d)
    }

    pub fn add(&mut self, p: PauliString, c: Complex64) -> Result<()> {
        if p.num_qubits() != self.m {
            return Err(Error::invalid(format!(
                "string {p} has length {}, decomposition has {}",
                p.num_qubits(),
                self.m
            )));
        }
        *self.terms.entry(p).or_insert(ZERO) += c;
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `p`; zero when absent.
    pub fn get(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or(ZERO)
    }

    /// Terms in canonical string order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|p| (self.get(p) - other.get(p)).norm())
            .fold(0.0, f64::max)
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
        self
    }
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `Tr(P M)` using the single nonzero per row of `P`.
fn trace_with(p: &PauliString, m: &ComplexMatrix) -> Complex64 {
    (0..m.dim() as u64)
        .map(|r| {
            let (c, v) = p.entry(r);
            v * m[(c as usize, r as usize)]
        })
        .sum()
}

/// Pauli coefficients by projecting onto each of the `4^m` strings in turn.
pub fn decompose(m: &ComplexMatrix) -> Result<Decomposition> {
    let q = qubits_for_dim(m.dim())?;
    let scale = 1.0 / m.dim() as f64;
    let mut d = Decomposition::new(q)?;
    for flip in 0..m.dim() as u64 {
        for z in 0..m.dim() as u64 {
            let p = PauliString::from_masks(q, flip, z)?;
            let c = trace_with(&p, m) * scale;
            d.terms.insert(p, c);
        }
    }
    Ok(d.prune())
}

/// Unnormalized Walsh–Hadamard transform:
/// `out[z] = sum_r (-1)^popcount(r & z) v[r]`.
pub(crate) fn walsh_hadamard(v: &mut [Complex64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Same result as [`decompose`] in `O(m 4^m)`.
///
/// For a flip mask `f`, `Tr(P M) = (-i)^popcount(f & z) * sum_r
/// (-1)^popcount(r & z) M[r ^ f][r]`, which is a Walsh–Hadamard transform
/// of the `f`-shifted band evaluated at `z`. Flip masks run in parallel.
pub fn fast_decompose(m: &ComplexMatrix) -> Result<Decomposition> {
    let q = qubits_for_dim(m.dim())?;
    let dim = m.dim();
    let scale = 1.0 / dim as f64;
    let bands: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|f| {
            let mut band: Vec<Complex64> = (0..dim).map(|r| m[(r ^ f, r)]).collect();
            walsh_hadamard(&mut band);
            band
        })
        .collect();
    let mut d = Decomposition::new(q)?;
    for (f, band) in bands.into_iter().enumerate() {
        for (z, sum) in band.into_iter().enumerate() {
            let phase = quarter_turn(3 * (f & z).count_ones());
            let c = phase * sum * scale;
            if c.norm() >= PRUNE_THRESHOLD {
                d.terms
                    .insert(PauliString::from_masks(q, f as u64, z as u64)?, c);
            }
        }
    }
    Ok(d)
}

pub fn compose(d: &Decomposition) -> Result<ComplexMatrix> {
    compose_with_cap(d, DEFAULT_DENSE_CAP)
}

pub fn compose_with_cap(d: &Decomposition, cap: usize) -> Result<ComplexMatrix> {
    check_dense_cap("compose", d.m, cap)?;
    let dim = 1usize << d.m;
    let mut out = ComplexMatrix::zeros(dim);
    for (p, &c) in &d.terms {
        for r in 0..dim as u64 {
            let (col, v) = p.entry(r);
            out[(r as usize, col as usize)] += c * v;
        }
    }
    Ok(out)
}

fn generator_qubits(idx: &GeneratorIndex) -> Result<usize> {
    let n = idx.n();
    if !n.is_power_of_two() {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(n.trailing_zeros() as usize)
}

/// The D/OD form that all Pauli terms of a generator share.
pub fn generator_form(idx: &GeneratorIndex) -> Result<FormTag> {
    let m = generator_qubits(idx)?;
    let flip = match idx.position() {
        Position::Diagonal(_) => 0,
        Position::Pair(j, k) => ((j - 1) ^ (k - 1)) as u64,
    };
    FormTag::from_mask(m, flip)
}

/// Pauli expansion of one generator.
///
/// Equal to `decompose(generator(idx))`, but only the `2^m` strings that
/// can overlap the generator are visited.
pub fn generator_in_pauli(idx: &GeneratorIndex) -> Result<Decomposition> {
    let m = generator_qubits(idx)?;
    let n = idx.n() as u64;
    let scale = 1.0 / n as f64;
    let mut d = Decomposition::new(m)?;
    match idx.position() {
        Position::Diagonal(i) => {
            // Tr(P (E_aa - E_bb)) = P_aa - P_bb
            let (a, b) = (i as u64 - 1, n - 1);
            for z in 1..n {
                let p = PauliString::from_masks(m, 0, z)?;
                let c = p.entry(a).1 - p.entry(b).1;
                d.terms.insert(p, c * scale);
            }
        }
        Position::Pair(j, k) => {
            let (r, c) = (j as u64 - 1, k as u64 - 1);
            // Entries of the generator at (r, c) and (c, r).
            let (upper, lower) = match idx.family() {
                Family::SymmetricReal => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
                _ => (-I, I),
            };
            for z in 0..n {
                let p = PauliString::from_masks(m, r ^ c, z)?;
                // Tr(P X) = P[r][c] X[c][r] + P[c][r] X[r][c]
                let coeff = p.entry(r).1 * lower + p.entry(c).1 * upper;
                d.terms.insert(p, coeff * scale);
            }
        }
    }
    Ok(d.prune())
}

/// Real coefficients over the generators of su(n).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorExpansion {
    n: usize,
    coeffs: BTreeMap<GeneratorIndex, f64>,
}

impl GeneratorExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of generator `flat`; zero when absent.
    pub fn get(&self, flat: usize) -> f64 {
        GeneratorIndex::from_flat(self.n, flat)
            .ok()
            .and_then(|idx| self.coeffs.get(&idx).copied())
            .unwrap_or(0.0)
    }

    /// Terms in flat index order.
    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorIndex, &f64)> {
        self.coeffs.iter()
    }

    /// Nonzero coefficients of a parameter vector.
    pub fn from_params(p: &SuParameters) -> Result<Self> {
        p.validate()?;
        let coeffs = p
            .to_flat()
            .into_iter()
            .enumerate()
            .filter(|(_, v)| v.abs() >= PRUNE_THRESHOLD)
            .map(|(i, v)| Ok((GeneratorIndex::from_flat(p.n, i + 1)?, v)))
            .collect::<Result<_>>()?;
        Ok(Self { n: p.n, coeffs })
    }

    pub fn to_params(&self) -> SuParameters {
        let mut values = vec![0.0; gellmann::generator_count(self.n)];
        for (idx, &v) in &self.coeffs {
            values[idx.flat() - 1] = v;
        }
        SuParameters::from_flat(self.n, &values).expect("expansion carries a valid n")
    }

    /// `sum_i c_i X_i` as a dense matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for (idx, &c) in &self.coeffs {
            let x = gellmann::generator(idx);
            out = &out + &x.scale_real(c);
        }
        out
    }
}

/// Expansion of a Hermitian traceless matrix over the generators.
pub fn decompose_generators(m: &ComplexMatrix) -> Result<GeneratorExpansion> {
    decompose_generators_with_tolerance(m, HERMITICITY_TOLERANCE)
}

pub fn decompose_generators_with_tolerance(
    m: &ComplexMatrix,
    tolerance: f64,
) -> Result<GeneratorExpansion> {
    GeneratorExpansion::from_params(&extract_params_with_tolerance(m, tolerance)?)
}

/// Expansion of a non-identity Pauli string over the `4^m - 1` generators.
///
/// Off-diagonal strings split into ±1 multiples of the `2^(m-1)`
/// generators on their flip-mask pairs. A diagonal string `P` solves
/// `P = sum_i c_i (E_ii - E_nn)` with `c_i = P_ii`, which is exact because
/// `P` is traceless.
pub fn pauli_in_generators(p: &PauliString) -> Result<GeneratorExpansion> {
    if p.is_identity() {
        return Err(Error::OutOfSpan(format!("the identity string {p}")));
    }
    let m = p.num_qubits();
    check_dense_cap("pauli_in_generators", m, DEFAULT_DENSE_CAP)?;
    let n = 1usize << m;
    let mut coeffs = BTreeMap::new();
    if p.is_diagonal() {
        for i in 1..n {
            let c = p.entry(i as u64 - 1).1.re;
            coeffs.insert(GeneratorIndex::diagonal(n, i)?, c);
        }
    } else {
        let f = p.flip_mask();
        let imaginary = p.y_count() % 2 == 1;
        for r in (0..n as u64).filter(|&r| r < r ^ f) {
            let c = r ^ f;
            let (j, k) = (r as usize + 1, c as usize + 1);
            let v = p.entry(r).1;
            let (idx, coeff) = if imaginary {
                // v (E_rc) - v (E_cr) with v = s(-i) is s times the antisymmetric generator.
                (GeneratorIndex::antisymmetric(n, j, k)?, (I * v).re)
            } else {
                (GeneratorIndex::symmetric(n, j, k)?, v.re)
            };
            coeffs.insert(idx, coeff);
        }
    }
    Ok(GeneratorExpansion { n, coeffs })
}

/// Which half of a sector a block covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorPart {
    /// Symmetric real generators, strings with an even number of `Y`.
    Real,
    /// Antisymmetric imaginary generators, strings with an odd number of `Y`.
    Imaginary,
    /// All-D form: diagonal strings against the diagonal generators.
    Diagonal,
}

impl SectorPart {
    pub fn name(self) -> &'static str {
        match self {
            SectorPart::Real => "real",
            SectorPart::Imaginary => "imaginary",
            SectorPart::Diagonal => "diagonal",
        }
    }
}

/// The integer matrix relating one sector's generators and strings.
///
/// `strings = forward · generators` (row `s` holds the generator
/// coefficients of `rows[s]`), and
/// `generators = (inverse / inverse_denominator) · strings`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock {
    pub form: FormTag,
    pub part: SectorPart,
    pub rows: Vec<PauliString>,
    pub columns: Vec<GeneratorIndex>,
    pub forward: IntMatrix,
    pub inverse: IntMatrix,
    pub inverse_denominator: u64,
}

impl SectorBlock {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `forward / sqrt(size)`. For off-diagonal sectors this is orthogonal.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        self.forward.to_f64_rows(1.0 / (self.size() as f64).sqrt())
    }

    /// `forward · forwardᵀ`.
    pub fn gram(&self) -> IntMatrix {
        &self.forward * &self.forward.transpose()
    }
}

/// The change-of-basis block for one form and part.
///
/// The all-D form has no ±1 block: the request is answered with the
/// diagonal sector (`part == SectorPart::Diagonal`) instead, whatever
/// `part` was asked for.
pub fn sector_block(form: &FormTag, part: SectorPart) -> Result<SectorBlock> {
    let m = form.num_qubits();
    check_dense_cap("sector_block", m, DEFAULT_DENSE_CAP)?;
    if form.is_all_diagonal() || part == SectorPart::Diagonal {
        if !form.is_all_diagonal() {
            return Err(Error::invalid(format!(
                "form {form} has off-diagonal factors; ask for the real or imaginary part"
            )));
        }
        return diagonal_sector(m);
    }
    let n = 1usize << m;
    let f = form.flip_mask();
    let odd_y = part == SectorPart::Imaginary;
    let rows: Vec<PauliString> = enumerate_strings(m, Some(form))?
        .into_iter()
        .filter(|p| (p.y_count() % 2 == 1) == odd_y)
        .collect();
    let mut columns = (0..n as u64)
        .filter(|&r| r < r ^ f)
        .map(|r| {
            let (j, k) = (r as usize + 1, (r ^ f) as usize + 1);
            if odd_y {
                GeneratorIndex::antisymmetric(n, j, k)
            } else {
                GeneratorIndex::symmetric(n, j, k)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    columns.sort();

    let mut forward = IntMatrix::zeros(rows.len(), columns.len());
    for (s, p) in rows.iter().enumerate() {
        let expansion = pauli_in_generators(p)?;
        for (t, idx) in columns.iter().enumerate() {
            forward[(s, t)] = expansion.coeffs.get(idx).copied().unwrap_or(0.0).round() as i64;
        }
    }
    let inverse = forward.transpose();
    Ok(SectorBlock {
        form: *form,
        part,
        rows,
        columns,
        forward,
        inverse,
        inverse_denominator: 1 << (m - 1),
    })
}

/// Diagonal strings against `X_1..X_{n-1}`. The generators here are not
/// orthogonal, so the inverse is not the transpose; its entries are
/// `P_ii - P_nn` over the denominator `2^m`.
pub fn diagonal_sector(m: usize) -> Result<SectorBlock> {
    check_dense_cap("diagonal_sector", m, DEFAULT_DENSE_CAP)?;
    let n = 1usize << m;
    let form = FormTag::from_mask(m, 0)?;
    let rows: Vec<PauliString> = enumerate_strings(m, Some(&form))?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let columns = (1..n)
        .map(|i| GeneratorIndex::diagonal(n, i))
        .collect::<Result<Vec<_>>>()?;
    let mut forward = IntMatrix::zeros(rows.len(), columns.len());
    let mut inverse = IntMatrix::zeros(columns.len(), rows.len());
    for (s, p) in rows.iter().enumerate() {
        let last = p.entry(n as u64 - 1).1.re as i64;
        for t in 0..columns.len() {
            let diag = p.entry(t as u64).1.re as i64;
            forward[(s, t)] = diag;
            inverse[(t, s)] = diag - last;
        }
    }
    Ok(SectorBlock {
        form,
        part: SectorPart::Diagonal,
        rows,
        columns,
        forward,
        inverse,
        inverse_denominator: n as u64,
    })
}

/// Flat generator indices of one form, split by part.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorIndices {
    pub real: Vec<usize>,
    pub imaginary: Vec<usize>,
    pub diagonal: Vec<usize>,
}

pub type ClassificationTable = BTreeMap<FormTag, SectorIndices>;

/// Every generator index of su(2^m), grouped by form and part. Lists are
/// ascending; forms come in mask order.
pub fn classification_table(m: usize) -> Result<ClassificationTable> {
    if m == 0 {
        return Err(Error::invalid("classification_table needs m >= 1"));
    }
    check_dense_cap("classification_table", m, DEFAULT_DENSE_CAP)?;
    let n = 1usize << m;
    let mut table: ClassificationTable = (0..n as u64)
        .map(|f| FormTag::from_mask(m, f).map(|t| (t, SectorIndices::default())))
        .collect::<Result<_>>()?;
    for idx in gellmann::all_indices(n)? {
        let cell = table
            .get_mut(&generator_form(&idx)?)
            .expect("every mask has a row");
        match idx.family() {
            Family::Diagonal => cell.diagonal.push(idx.flat()),
            Family::SymmetricReal => cell.real.push(idx.flat()),
            Family::AntisymmetricImaginary => cell.imaginary.push(idx.flat()),
        }
    }
    Ok(table)
}
