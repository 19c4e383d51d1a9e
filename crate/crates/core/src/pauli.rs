//! Pauli strings in mask form.
//!
//! A string over `{I, X, Y, Z}` of length `m` is stored as its labels plus
//! two `m`-bit masks. Label `q` (0 = leftmost tensor factor) maps to bit
//! `m - 1 - q`, so the leftmost factor is the most significant bit of a row
//! index. The materialized matrix has one nonzero per row: row `r` hits
//! column `r ^ flip_mask` with value `(-i)^y_count * (-1)^popcount(r & z_mask)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Widest string the mask representation accepts.
pub const MAX_STRUCTURED_QUBITS: usize = 63;

/// Default cap on `m` for anything that allocates a dense `2^m x 2^m` matrix.
pub const DEFAULT_DENSE_CAP: usize = 12;

/// Checks that a dense `2^m` operation fits under `cap`.
pub(crate) fn check_dense_cap(what: &'static str, m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::ResourceLimit {
            what,
            requested: m,
            limit: cap,
        });
    }
    Ok(())
}

/// Ordered `I < X < Y < Z`, which gives the canonical base-4 string order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn is_diagonal(self) -> bool {
        matches!(self, PauliLabel::I | PauliLabel::Z)
    }

    pub fn factor(self) -> Factor {
        if self.is_diagonal() {
            Factor::D
        } else {
            Factor::OD
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLabel::I => 'I',
            PauliLabel::X => 'X',
            PauliLabel::Y => 'Y',
            PauliLabel::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLabel::I),
            'X' => Some(PauliLabel::X),
            'Y' => Some(PauliLabel::Y),
            'Z' => Some(PauliLabel::Z),
            _ => None,
        }
    }

    fn from_bits(flip: bool, z: bool) -> Self {
        match (flip, z) {
            (false, false) => PauliLabel::I,
            (true, false) => PauliLabel::X,
            (true, true) => PauliLabel::Y,
            (false, true) => PauliLabel::Z,
        }
    }
}

/// Tensor product of single-qubit Pauli matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    labels: Vec<PauliLabel>,
    flip_mask: u64,
    z_mask: u64,
    y_count: u32,
}

impl PauliString {
    pub fn new(labels: Vec<PauliLabel>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::invalid("a Pauli string needs at least one label"));
        }
        if m > MAX_STRUCTURED_QUBITS {
            return Err(Error::ResourceLimit {
                what: "Pauli string",
                requested: m,
                limit: MAX_STRUCTURED_QUBITS,
            });
        }
        let (mut flip_mask, mut z_mask, mut y_count) = (0u64, 0u64, 0u32);
        for (q, &label) in labels.iter().enumerate() {
            let bit = 1u64 << (m - 1 - q);
            match label {
                PauliLabel::I => {}
                PauliLabel::X => flip_mask |= bit,
                PauliLabel::Z => z_mask |= bit,
                PauliLabel::Y => {
                    flip_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
            }
        }
        Ok(Self {
            labels,
            flip_mask,
            z_mask,
            y_count,
        })
    }

    /// Rebuilds a string from its masks. Bits at or above `m` are rejected.
    pub fn from_masks(m: usize, flip_mask: u64, z_mask: u64) -> Result<Self> {
        if m == 0 || m > MAX_STRUCTURED_QUBITS {
            return Err(Error::invalid(format!("qubit count {m} outside 1..=63")));
        }
        if (flip_mask | z_mask) >> m != 0 {
            return Err(Error::invalid(format!(
                "mask bits set above qubit count {m}"
            )));
        }
        let labels = (0..m)
            .map(|q| {
                let bit = 1u64 << (m - 1 - q);
                PauliLabel::from_bits(flip_mask & bit != 0, z_mask & bit != 0)
            })
            .collect();
        Self::new(labels)
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(vec![PauliLabel::I; m])
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn flip_mask(&self) -> u64 {
        self.flip_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn y_count(&self) -> u32 {
        self.y_count
    }

    pub fn is_identity(&self) -> bool {
        self.flip_mask == 0 && self.z_mask == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.flip_mask == 0
    }

    /// Exponent `k` such that the entry in row `row` is `i^k`.
    pub fn phase_exponent(&self, row: u64) -> u32 {
        // (-i)^y = i^(3y); each set bit of row & z contributes a factor -1 = i^2.
        (3 * self.y_count + 2 * (row & self.z_mask).count_ones()) % 4
    }

    /// Column and value of the single nonzero entry in `row`.
    pub fn entry(&self, row: u64) -> (u64, Complex64) {
        (row ^ self.flip_mask, quarter_turn(self.phase_exponent(row)))
    }

    pub fn form(&self) -> FormTag {
        FormTag {
            m: self.num_qubits(),
            flip_mask: self.flip_mask,
        }
    }
}

/// `i^k` for `k` in 0..4.
pub(crate) fn quarter_turn(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.labels
            .len()
            .cmp(&other.labels.len())
            .then_with(|| self.labels.cmp(&other.labels))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .trim()
            .chars()
            .map(|c| {
                PauliLabel::from_char(c.to_ascii_uppercase()).ok_or_else(|| {
                    Error::Parse(format!("'{c}' is not one of I, X, Y, Z in \"{s}\""))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }
}

pub fn make_string(labels: &[PauliLabel]) -> Result<PauliString> {
    PauliString::new(labels.to_vec())
}

/// Dense matrix of `p` under the default cap.
pub fn materialize(p: &PauliString) -> Result<ComplexMatrix> {
    materialize_with_cap(p, DEFAULT_DENSE_CAP)
}

pub fn materialize_with_cap(p: &PauliString, cap: usize) -> Result<ComplexMatrix> {
    let m = p.num_qubits();
    check_dense_cap("materialize", m, cap)?;
    let dim = 1usize << m;
    let mut out = ComplexMatrix::zeros(dim);
    for row in 0..dim as u64 {
        let (col, value) = p.entry(row);
        out[(row as usize, col as usize)] = value;
    }
    Ok(out)
}

/// Per-factor diagonal / off-diagonal classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    D,
    OD,
}

/// A D/OD pattern over `m` factors, stored as the flip mask it induces.
///
/// Ordered by mask value, so for three factors the order is D⊗D⊗D,
/// D⊗D⊗OD, D⊗OD⊗D, ..., OD⊗OD⊗OD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormTag {
    m: usize,
    flip_mask: u64,
}

impl FormTag {
    pub fn new(pattern: &[Factor]) -> Result<Self> {
        let m = pattern.len();
        if m == 0 || m > MAX_STRUCTURED_QUBITS {
            return Err(Error::invalid(format!("form length {m} outside 1..=63")));
        }
        let flip_mask = pattern.iter().enumerate().fold(0u64, |acc, (q, f)| {
            if *f == Factor::OD {
                acc | 1 << (m - 1 - q)
            } else {
                acc
            }
        });
        Ok(Self { m, flip_mask })
    }

    pub fn from_mask(m: usize, flip_mask: u64) -> Result<Self> {
        if m == 0 || m > MAX_STRUCTURED_QUBITS || flip_mask >> m != 0 {
            return Err(Error::invalid(format!(
                "flip mask {flip_mask:#b} does not fit {m} factors"
            )));
        }
        Ok(Self { m, flip_mask })
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn flip_mask(&self) -> u64 {
        self.flip_mask
    }

    pub fn pattern(&self) -> Vec<Factor> {
        (0..self.m)
            .map(|q| {
                if self.flip_mask >> (self.m - 1 - q) & 1 == 1 {
                    Factor::OD
                } else {
                    Factor::D
                }
            })
            .collect()
    }

    pub fn is_all_diagonal(&self) -> bool {
        self.flip_mask == 0
    }

    pub fn off_diagonal_count(&self) -> u32 {
        self.flip_mask.count_ones()
    }

    /// ASCII form joined by `-`, e.g. `D-D-OD`.
    pub fn to_ascii(&self) -> String {
        self.join("-")
    }

    fn join(&self, sep: &str) -> String {
        self.pattern()
            .iter()
            .map(|f| match f {
                Factor::D => "D",
                Factor::OD => "OD",
            })
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join("⊗"))
    }
}

impl FromStr for FormTag {
    type Err = Error;

    /// Accepts `D`/`OD` tokens with optional `-`, `⊗`, `,` or whitespace
    /// separators: `DD-OD`, `D-D-OD` and `D⊗D⊗OD` all parse the same.
    fn from_str(s: &str) -> Result<Self> {
        let mut pattern = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            match c.to_ascii_uppercase() {
                'D' => pattern.push(Factor::D),
                'O' => match chars.next().map(|d| d.to_ascii_uppercase()) {
                    Some('D') => pattern.push(Factor::OD),
                    _ => return Err(Error::Parse(format!("expected 'OD' in form \"{s}\""))),
                },
                '-' | '⊗' | ',' | '*' => {}
                w if w.is_whitespace() => {}
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected '{other}' in form \"{s}\""
                    )))
                }
            }
        }
        if pattern.is_empty() {
            return Err(Error::Parse(format!("empty form \"{s}\"")));
        }
        FormTag::new(&pattern)
    }
}

pub fn classify_form(p: &PauliString) -> FormTag {
    p.form()
}

/// All Pauli strings of length `m` (or only those of `form`), in canonical
/// order: base-4 with `I=0, X=1, Y=2, Z=3`, leftmost factor most significant.
pub fn enumerate_strings(m: usize, form: Option<&FormTag>) -> Result<Vec<PauliString>> {
    if m == 0 {
        return Err(Error::invalid("enumerate_strings needs m >= 1"));
    }
    if let Some(f) = form {
        if f.num_qubits() != m {
            return Err(Error::invalid(format!(
                "form {f} has {} factors, expected {m}",
                f.num_qubits()
            )));
        }
    }
    // Each position draws from {I, Z} or {X, Y}; nesting those choices in
    // label order keeps the filtered list in canonical order.
    let choices: Vec<&[PauliLabel]> = (0..m)
        .map(|q| match form.map(|f| f.pattern()[q]) {
            None => &PauliLabel::ALL[..],
            Some(Factor::D) => &[PauliLabel::I, PauliLabel::Z][..],
            Some(Factor::OD) => &[PauliLabel::X, PauliLabel::Y][..],
        })
        .collect();
    let total: usize = choices.iter().map(|c| c.len()).product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; m];
    for _ in 0..total {
        let labels = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
        out.push(PauliString::new(labels)?);
        for q in (0..m).rev() {
            digits[q] += 1;
            if digits[q] < choices[q].len() {
                break;
            }
            digits[q] = 0;
        }
    }
    Ok(out)
}
