//! JSON file formats.
//!
//! * matrix: `{"dim": 8, "entries": [[re, im], ...]}`, `dim * dim` pairs row-major
//! * Pauli decomposition: `{"m": 3, "terms": [{"string": "ZIY", "re": .., "im": ..}]}`
//! * generator expansion: `{"n": 8, "terms": [{"generator": "X8", ..., "value": ..}]}`
//! * parameters: `{"n": 8, "psi": [..], "a": [..], "b": [..]}`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::basis::{ClassificationTable, Decomposition, GeneratorExpansion, SectorBlock};
use crate::error::{Error, Result};
use crate::gellmann::{GeneratorIndex, Position};
use crate::matrix::ComplexMatrix;
use crate::pauli::PauliString;
use crate::su::SuParameters;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m
                .entries()
                .iter()
                .map(|z| [z.re + 0.0, z.im + 0.0])
                .collect(),
        }
    }
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        let data = f
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        ComplexMatrix::from_row_major(f.dim, data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub string: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub m: usize,
    pub terms: Vec<PauliTerm>,
}

impl From<&Decomposition> for DecompositionFile {
    fn from(d: &Decomposition) -> Self {
        Self {
            m: d.num_qubits(),
            terms: d
                .iter()
                .map(|(p, c)| PauliTerm {
                    string: p.to_string(),
                    re: c.re + 0.0,
                    im: c.im + 0.0,
                })
                .collect(),
        }
    }
}

impl TryFrom<DecompositionFile> for Decomposition {
    type Error = Error;

    fn try_from(f: DecompositionFile) -> Result<Self> {
        let terms = f
            .terms
            .iter()
            .map(|t| Ok((t.string.parse::<PauliString>()?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Decomposition::from_terms(f.m, terms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTerm {
    pub generator: String,
    pub family: String,
    pub position: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorExpansionFile {
    pub n: usize,
    pub terms: Vec<GeneratorTerm>,
}

impl From<&GeneratorExpansion> for GeneratorExpansionFile {
    fn from(e: &GeneratorExpansion) -> Self {
        Self {
            n: e.n(),
            terms: e
                .iter()
                .map(|(idx, &value)| GeneratorTerm {
                    generator: idx.to_string(),
                    family: idx.family().name().to_string(),
                    position: position_vec(idx),
                    value: value + 0.0,
                })
                .collect(),
        }
    }
}

impl GeneratorExpansionFile {
    /// Parameters equivalent to the listed terms. `generator` is the
    /// authoritative field; repeated generators are summed.
    pub fn to_params(&self) -> Result<SuParameters> {
        let mut p = SuParameters::zeros(self.n)?;
        let mut values = p.to_flat();
        for t in &self.terms {
            let idx = GeneratorIndex::parse(self.n, &t.generator)?;
            values[idx.flat() - 1] += t.value;
        }
        p = SuParameters::from_flat(self.n, &values)?;
        Ok(p)
    }
}

pub fn position_vec(idx: &GeneratorIndex) -> Vec<usize> {
    match idx.position() {
        Position::Diagonal(i) => vec![i],
        Position::Pair(j, k) => vec![j, k],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub form: String,
    pub real: Vec<usize>,
    pub imaginary: Vec<usize>,
    pub diagonal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFile {
    pub m: usize,
    pub forms: Vec<TableRow>,
}

impl TableFile {
    pub fn new(m: usize, table: &ClassificationTable) -> Self {
        Self {
            m,
            forms: table
                .iter()
                .map(|(form, cell)| TableRow {
                    form: form.to_ascii(),
                    real: cell.real.clone(),
                    imaginary: cell.imaginary.clone(),
                    diagonal: cell.diagonal.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFile {
    pub form: String,
    pub part: String,
    pub rows: Vec<String>,
    pub columns: Vec<usize>,
    /// Pauli column = g · generator column.
    pub g: Vec<Vec<i64>>,
    /// Generator column = inverse / inverse_denominator · Pauli column.
    pub inverse: Vec<Vec<i64>>,
    pub inverse_denominator: u64,
    /// Scale that makes `g` orthogonal; absent for the diagonal sector.
    pub normalized_scale: Option<f64>,
}

impl From<&SectorBlock> for BlockFile {
    fn from(b: &SectorBlock) -> Self {
        let diagonal = b.part == crate::basis::SectorPart::Diagonal;
        Self {
            form: b.form.to_ascii(),
            part: b.part.name().to_string(),
            rows: b.rows.iter().map(ToString::to_string).collect(),
            columns: b.columns.iter().map(GeneratorIndex::flat).collect(),
            g: b.forward.to_rows(),
            inverse: b.inverse.to_rows(),
            inverse_denominator: b.inverse_denominator,
            normalized_scale: (!diagonal).then(|| 1.0 / (b.size() as f64).sqrt()),
        }
    }
}

/// Anything the CLI accepts as an operator.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorInput {
    Matrix(ComplexMatrix),
    Parameters(SuParameters),
    Pauli(Decomposition),
    Generators(GeneratorExpansionFile),
}

/// Reads one of the JSON formats, telling them apart by their keys.
pub fn parse_operator(text: &str) -> Result<OperatorInput> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let has = |k: &str| value.get(k).is_some();
    let decode_err = |e: serde_json::Error| Error::Parse(e.to_string());
    if has("entries") {
        let f: MatrixFile = serde_json::from_value(value).map_err(decode_err)?;
        Ok(OperatorInput::Matrix(f.try_into()?))
    } else if has("psi") {
        let p: SuParameters = serde_json::from_value(value).map_err(decode_err)?;
        p.validate()?;
        Ok(OperatorInput::Parameters(p))
    } else if has("m") && has("terms") {
        let f: DecompositionFile = serde_json::from_value(value).map_err(decode_err)?;
        Ok(OperatorInput::Pauli(f.try_into()?))
    } else if has("n") && has("terms") {
        let f: GeneratorExpansionFile = serde_json::from_value(value).map_err(decode_err)?;
        Ok(OperatorInput::Generators(f))
    } else {
        Err(Error::Parse(
            "expected a matrix, parameter, or decomposition JSON object".into(),
        ))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}
