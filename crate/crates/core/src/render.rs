//! Human-readable text output.
//!
//! Values that are dyadic rationals (everything the generators, Pauli
//! strings and sector blocks produce) print exactly, e.g. `-1/4` or `i/2`;
//! anything else falls back to six decimals.

use num_complex::Complex64;

use crate::basis::{
    ClassificationTable, Decomposition, GeneratorExpansion, SectorBlock, SectorPart,
};
use crate::matrix::ComplexMatrix;

const MAX_DENOMINATOR_BITS: u32 = 24;

/// `(numerator, denominator)` when `x` is `p / 2^k` for small `k`.
fn dyadic(x: f64) -> Option<(i64, u64)> {
    for k in 0..=MAX_DENOMINATOR_BITS {
        let den = 1u64 << k;
        let scaled = x * den as f64;
        if scaled.fract() == 0.0 && scaled.abs() < 1e15 {
            return Some((scaled as i64, den));
        }
    }
    None
}

fn trim_decimal(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    match dyadic(x) {
        Some((p, 1)) => p.to_string(),
        Some((p, q)) => format!("{p}/{q}"),
        None => trim_decimal(x),
    }
}

fn format_imaginary(y: f64) -> String {
    match dyadic(y) {
        Some((1, 1)) => "i".to_string(),
        Some((-1, 1)) => "-i".to_string(),
        Some((p, 1)) => format!("{p}i"),
        Some((1, q)) => format!("i/{q}"),
        Some((-1, q)) => format!("-i/{q}"),
        Some((p, q)) => format!("{p}i/{q}"),
        None => format!("{}i", trim_decimal(y)),
    }
}

pub fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format_real(z.re),
        (true, false) => format_imaginary(z.im),
        (false, false) => {
            let im = format_imaginary(z.im);
            if im.starts_with('-') {
                format!("{}{im}", format_real(z.re))
            } else {
                format!("{}+{im}", format_real(z.re))
            }
        }
    }
}

fn aligned(cells: &[Vec<String>]) -> String {
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn matrix(m: &ComplexMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.dim())
        .map(|r| m.row(r).iter().map(|&z| format_complex(z)).collect())
        .collect();
    aligned(&cells)
}

pub fn int_rows(rows: &[Vec<i64>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    aligned(&cells)
}

pub fn decomposition(d: &Decomposition) -> String {
    if d.is_empty() {
        return format!("0  (no terms, m = {})", d.num_qubits());
    }
    let coeffs: Vec<String> = d.iter().map(|(_, &c)| format_complex(c)).collect();
    let width = coeffs.iter().map(|c| c.chars().count()).max().unwrap_or(1);
    d.iter()
        .zip(&coeffs)
        .map(|((p, _), c)| format!("{c:>width$}  {p}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn generator_expansion(e: &GeneratorExpansion) -> String {
    if e.is_empty() {
        return format!("0  (no terms, n = {})", e.n());
    }
    let coeffs: Vec<String> = e.iter().map(|(_, &c)| format_real(c)).collect();
    let width = coeffs.iter().map(|c| c.chars().count()).max().unwrap_or(1);
    e.iter()
        .zip(&coeffs)
        .map(|((idx, _), c)| format!("{c:>width$}  {idx}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn index_list(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| format!("X{i}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One group per form, real and imaginary parts on separate lines.
pub fn table(t: &ClassificationTable) -> String {
    let mut out = Vec::new();
    for (form, cell) in t {
        out.push(format!("{form} form generator:"));
        if !cell.diagonal.is_empty() {
            out.push(format!("  Diagonal       : {}", index_list(&cell.diagonal)));
        }
        if !cell.real.is_empty() {
            out.push(format!("  Real part      : {}", index_list(&cell.real)));
        }
        if !cell.imaginary.is_empty() {
            out.push(format!(
                "  Imaginary part : {}",
                index_list(&cell.imaginary)
            ));
        }
    }
    out.join("\n")
}

fn scale_label(size: usize) -> String {
    let root = (size as f64).sqrt().round() as usize;
    if root * root == size {
        format!("g/{root}")
    } else {
        format!("g/√{size}")
    }
}

pub fn block(b: &SectorBlock) -> String {
    let rows: Vec<String> = b.rows.iter().map(ToString::to_string).collect();
    let cols: Vec<String> = b.columns.iter().map(ToString::to_string).collect();
    let mut out = vec![
        format!("{} form, {} part", b.form, b.part.name()),
        format!("strings    : {}", rows.join(" ")),
        format!("generators : {}", cols.join(" ")),
        String::new(),
        "strings = g · generators, g =".to_string(),
        int_rows(&b.forward.to_rows()),
        String::new(),
    ];
    if b.part == SectorPart::Diagonal {
        out.push(format!(
            "generators = 1/{} · inverse · strings, inverse =",
            b.inverse_denominator
        ));
        out.push(int_rows(&b.inverse.to_rows()));
    } else {
        out.push(format!(
            "generators = 1/{} · gᵀ · strings",
            b.inverse_denominator
        ));
        let gram_ok =
            b.gram() == crate::matrix::IntMatrix::scaled_identity(b.size(), b.size() as i64);
        out.push(format!(
            "g · gᵀ = {}·I: {}",
            b.size(),
            if gram_ok { "yes" } else { "no" }
        ));
        let symmetric = b.forward.is_symmetric();
        out.push(format!(
            "normalized h = {}: orthogonal, {}",
            scale_label(b.size()),
            if symmetric {
                "symmetric, self-inverse"
            } else {
                "not symmetric (h⁻¹ = hᵀ)"
            }
        ));
    }
    out.join("\n")
}
