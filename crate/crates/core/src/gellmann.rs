//! The `n^2 - 1` generators of su(n) as produced by differentiating the
//! general Hermitian traceless element at the origin.
//!
//! Flat indices run `1..=n^2-1`:
//!
//! * `1..=n-1`: diagonal `E_ii - E_nn`
//! * next `n(n-1)/2`: symmetric real `E_jk + E_kj`
//! * last `n(n-1)/2`: antisymmetric imaginary `-i E_jk + i E_kj`
//!
//! Off-diagonal pairs `(j, k)`, `j < k`, are numbered row-major over the
//! strict upper triangle. Positions are 1-based throughout.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hs_inner, ComplexMatrix, I, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Diagonal,
    SymmetricReal,
    AntisymmetricImaginary,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Diagonal => "diagonal",
            Family::SymmetricReal => "symmetric",
            Family::AntisymmetricImaginary => "antisymmetric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Diagonal(usize),
    Pair(usize, usize),
}

/// A generator label: dimension, flat index, and decoded family/position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorIndex {
    n: usize,
    flat: usize,
    family: Family,
    position: Position,
}

pub fn generator_count(n: usize) -> usize {
    n * n - 1
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// 1-based row-major rank of `(j, k)` in the strict upper triangle.
fn pair_rank(n: usize, j: usize, k: usize) -> usize {
    (j - 1) * (2 * n - j) / 2 + (k - j)
}

fn pair_from_rank(n: usize, mut t: usize) -> (usize, usize) {
    let mut j = 1;
    while t > n - j {
        t -= n - j;
        j += 1;
    }
    (j, j + t)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("su(n) needs n >= 2, got {n}")));
    }
    Ok(())
}

fn check_pair(n: usize, j: usize, k: usize) -> Result<()> {
    if !(1 <= j && j < k && k <= n) {
        return Err(Error::invalid(format!(
            "pair ({j},{k}) must satisfy 1 <= j < k <= {n}"
        )));
    }
    Ok(())
}

impl GeneratorIndex {
    /// Decodes a flat index.
    pub fn from_flat(n: usize, flat: usize) -> Result<Self> {
        check_dim(n)?;
        let total = generator_count(n);
        if flat == 0 || flat > total {
            return Err(Error::invalid(format!(
                "generator index {flat} outside 1..={total} for n = {n}"
            )));
        }
        let pairs = pair_count(n);
        let (family, position) = if flat < n {
            (Family::Diagonal, Position::Diagonal(flat))
        } else if flat < n + pairs {
            let (j, k) = pair_from_rank(n, flat - (n - 1));
            (Family::SymmetricReal, Position::Pair(j, k))
        } else {
            let (j, k) = pair_from_rank(n, flat - (n - 1) - pairs);
            (Family::AntisymmetricImaginary, Position::Pair(j, k))
        };
        Ok(Self {
            n,
            flat,
            family,
            position,
        })
    }

    pub fn diagonal(n: usize, i: usize) -> Result<Self> {
        check_dim(n)?;
        if i == 0 || i >= n {
            return Err(Error::invalid(format!(
                "diagonal position {i} outside 1..={}",
                n - 1
            )));
        }
        Self::from_flat(n, i)
    }

    pub fn symmetric(n: usize, j: usize, k: usize) -> Result<Self> {
        check_dim(n)?;
        check_pair(n, j, k)?;
        Self::from_flat(n, n - 1 + pair_rank(n, j, k))
    }

    pub fn antisymmetric(n: usize, j: usize, k: usize) -> Result<Self> {
        check_dim(n)?;
        check_pair(n, j, k)?;
        Self::from_flat(n, n - 1 + pair_count(n) + pair_rank(n, j, k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flat(&self) -> usize {
        self.flat
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn position(&self) -> Position {
        self.position
    }

    /// Parses `8`, `X8`, `diag:3`, `sym:1,2` or `anti:1,2`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot read generator \"{s}\""));
        if let Some((family, pos)) = s.split_once(':') {
            let nums = pos
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return match (family.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
                ("diag", [i]) => Self::diagonal(n, *i),
                ("sym", [j, k]) => Self::symmetric(n, *j, *k),
                ("anti", [j, k]) => Self::antisymmetric(n, *j, *k),
                _ => Err(bad()),
            };
        }
        let digits = s.strip_prefix(['X', 'x']).unwrap_or(s);
        let flat = digits.parse::<usize>().map_err(|_| bad())?;
        Self::from_flat(n, flat)
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.flat)
    }
}

pub fn index_to_position(n: usize, flat: usize) -> Result<GeneratorIndex> {
    GeneratorIndex::from_flat(n, flat)
}

/// Inverse of [`index_to_position`].
pub fn pair_to_index(n: usize, family: Family, position: Position) -> Result<usize> {
    let idx = match (family, position) {
        (Family::Diagonal, Position::Diagonal(i)) => GeneratorIndex::diagonal(n, i)?,
        (Family::SymmetricReal, Position::Pair(j, k)) => GeneratorIndex::symmetric(n, j, k)?,
        (Family::AntisymmetricImaginary, Position::Pair(j, k)) => {
            GeneratorIndex::antisymmetric(n, j, k)?
        }
        _ => {
            return Err(Error::invalid(format!(
                "{} generators do not take position {position:?}",
                family.name()
            )))
        }
    };
    Ok(idx.flat)
}

/// All indices for `n`, in flat order.
pub fn all_indices(n: usize) -> Result<Vec<GeneratorIndex>> {
    check_dim(n)?;
    (1..=generator_count(n))
        .map(|flat| GeneratorIndex::from_flat(n, flat))
        .collect()
}

pub fn generator(idx: &GeneratorIndex) -> ComplexMatrix {
    let n = idx.n;
    let mut x = ComplexMatrix::zeros(n);
    match idx.position {
        Position::Diagonal(i) => {
            x[(i - 1, i - 1)] = ONE;
            x[(n - 1, n - 1)] = -ONE;
        }
        Position::Pair(j, k) => {
            let (upper, lower) = match idx.family {
                Family::SymmetricReal => (ONE, ONE),
                _ => (-I, I),
            };
            x[(j - 1, k - 1)] = upper;
            x[(k - 1, j - 1)] = lower;
        }
    }
    x
}

pub fn all_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    Ok(all_indices(n)?.iter().map(generator).collect())
}

/// Divides by the Hilbert–Schmidt norm. The zero matrix is returned as is.
pub fn normalize(x: &ComplexMatrix) -> ComplexMatrix {
    let norm = hs_inner(x, x).map(|z| z.re.sqrt()).unwrap_or(0.0);
    if norm == 0.0 {
        x.clone()
    } else {
        x.scale_real(1.0 / norm)
    }
}

/// Coefficients over the diagonal generators `X_1..X_{n-1}` of the `l`-th
/// orthogonal diagonal element `diag(1,..,1,-l,0,..,0)` (with `l` ones).
pub fn orthogonal_diagonal_combination(n: usize, l: usize) -> Result<Vec<f64>> {
    check_dim(n)?;
    if l == 0 || l >= n {
        return Err(Error::invalid(format!("level {l} outside 1..={}", n - 1)));
    }
    // sum_{i<=l} (E_ii - E_nn) - l (E_{l+1} - E_nn); the E_nn terms cancel.
    let mut coeffs = vec![0.0; n - 1];
    coeffs[..l].fill(1.0);
    if l + 1 < n {
        coeffs[l] = -(l as f64);
    }
    Ok(coeffs)
}

/// `n - 1` pairwise orthogonal traceless diagonal matrices, each a linear
/// combination of the diagonal generators and scaled to Hilbert–Schmidt
/// norm² 2 (the norm of the off-diagonal generators).
pub fn orthogonal_diagonal_basis(n: usize) -> Result<Vec<ComplexMatrix>> {
    check_dim(n)?;
    let diagonals: Vec<ComplexMatrix> = (1..n)
        .map(|i| generator(&GeneratorIndex::from_flat(n, i).expect("valid diagonal index")))
        .collect();
    (1..n)
        .map(|l| {
            let coeffs = orthogonal_diagonal_combination(n, l)?;
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut acc = ComplexMatrix::zeros(n);
            for (c, d) in coeffs.iter().zip(&diagonals) {
                if *c != 0.0 {
                    acc = &acc + &d.scale_real(*c);
                }
            }
            Ok(acc.scale_real(scale))
        })
        .collect()
}

/// Max-norm of `(exp(hX) - I)/h - X`, the forward-difference error of the
/// derivative of `t -> exp(tX)` at `t = 0`.
pub fn derivative_check(x: &ComplexMatrix, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!(
            "step h must be positive and finite, got {h}"
        )));
    }
    let step = x.scale_real(h).exp();
    let fd = (&step - &ComplexMatrix::identity(x.dim())).scale(Complex64::new(1.0 / h, 0.0));
    Ok(fd.max_abs_diff(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{rank, ZERO};
    use crate::pauli::materialize;

    fn pauli_sum(terms: &[(f64, &str)]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(8);
        for (c, s) in terms {
            acc = &acc + &materialize(&s.parse().unwrap()).unwrap().scale_real(*c);
        }
        acc
    }

    #[test]
    fn x1_is_sum_of_four_z_strings() {
        let x1 = generator(&GeneratorIndex::from_flat(8, 1).unwrap());
        let mut want = [ZERO; 8];
        want[0] = ONE;
        want[7] = -ONE;
        assert_eq!(x1, ComplexMatrix::from_diagonal(&want));
        let oracle = pauli_sum(&[(0.25, "IIZ"), (0.25, "ZII"), (0.25, "IZI"), (0.25, "ZZZ")]);
        assert_eq!(x1, oracle);
    }

    #[test]
    fn su2_x3_is_sigma_y() {
        let x3 = generator(&GeneratorIndex::from_flat(2, 3).unwrap());
        assert_eq!(x3, materialize(&"Y".parse().unwrap()).unwrap());
        let all = all_generators(2).unwrap();
        assert_eq!(all[0], materialize(&"Z".parse().unwrap()).unwrap());
        assert_eq!(all[1], materialize(&"X".parse().unwrap()).unwrap());
    }

    #[test]
    fn x8_matches_pauli_oracle() {
        let x8 = generator(&GeneratorIndex::from_flat(8, 8).unwrap());
        let oracle = pauli_sum(&[(0.25, "IIX"), (0.25, "IZX"), (0.25, "ZIX"), (0.25, "ZZX")]);
        assert_eq!(x8, oracle);
    }

    #[test]
    fn pair_layout_is_consistent_with_the_block_grouping() {
        // Oracle: solve IIX, IZX, ZIX, ZZX (all materialized independently)
        // for the four generators they combine. With the 4x4 ±1 block being
        // self-inverse up to 1/4, each generator is a signed quarter-sum, and
        // its single nonzero upper entry reveals its position.
        let signs = [
            (8, [1.0, 1.0, 1.0, 1.0]),
            (21, [1.0, -1.0, 1.0, -1.0]),
            (30, [1.0, 1.0, -1.0, -1.0]),
            (35, [1.0, -1.0, -1.0, 1.0]),
        ];
        let strings = ["IIX", "IZX", "ZIX", "ZZX"];
        for (flat, s) in signs {
            let terms: Vec<(f64, &str)> =
                s.iter().zip(strings).map(|(c, p)| (c / 4.0, p)).collect();
            let m = pauli_sum(&terms);
            let (r, c) = (0..8)
                .flat_map(|r| (r + 1..8).map(move |c| (r, c)))
                .find(|&(r, c)| m[(r, c)] != ZERO)
                .unwrap();
            let idx = index_to_position(8, flat).unwrap();
            assert_eq!(idx.family(), Family::SymmetricReal);
            assert_eq!(idx.position(), Position::Pair(r + 1, c + 1), "X{flat}");
            assert_eq!(generator(&idx), m);
        }
    }

    #[test]
    fn index_decoding_examples() {
        let idx = index_to_position(8, 36).unwrap();
        assert_eq!(idx.family(), Family::AntisymmetricImaginary);
        assert_eq!(idx.position(), Position::Pair(1, 2));
        assert_eq!(
            index_to_position(8, 7).unwrap().position(),
            Position::Diagonal(7)
        );
        assert_eq!(
            index_to_position(8, 63).unwrap().position(),
            Position::Pair(7, 8)
        );
        assert!(index_to_position(8, 0).is_err());
        assert!(index_to_position(8, 64).is_err());
        assert!(index_to_position(1, 1).is_err());
    }

    #[test]
    fn index_roundtrip_over_full_range() {
        for n in 2..=12 {
            for idx in all_indices(n).unwrap() {
                assert_eq!(
                    pair_to_index(n, idx.family(), idx.position()).unwrap(),
                    idx.flat()
                );
            }
        }
        assert!(pair_to_index(8, Family::Diagonal, Position::Pair(1, 2)).is_err());
        assert!(pair_to_index(8, Family::SymmetricReal, Position::Pair(2, 2)).is_err());
        assert!(pair_to_index(8, Family::Diagonal, Position::Diagonal(8)).is_err());
    }

    #[test]
    fn parse_accepts_flat_and_family_forms() {
        assert_eq!(GeneratorIndex::parse(8, "X8").unwrap().flat(), 8);
        assert_eq!(GeneratorIndex::parse(8, "21").unwrap().flat(), 21);
        assert_eq!(GeneratorIndex::parse(8, "sym:1,2").unwrap().flat(), 8);
        assert_eq!(GeneratorIndex::parse(8, "anti:7,8").unwrap().flat(), 63);
        assert_eq!(GeneratorIndex::parse(8, "diag:3").unwrap().flat(), 3);
        assert!(GeneratorIndex::parse(8, "X64").is_err());
        assert!(GeneratorIndex::parse(8, "sym:2,1").is_err());
        assert!(GeneratorIndex::parse(8, "foo").is_err());
    }

    #[test]
    fn family_counts_hermiticity_and_trace() {
        for n in 2..=9 {
            let idx = all_indices(n).unwrap();
            assert_eq!(idx.len(), n * n - 1);
            let count = |f| idx.iter().filter(|i| i.family() == f).count();
            assert_eq!(count(Family::Diagonal), n - 1);
            assert_eq!(count(Family::SymmetricReal), n * (n - 1) / 2);
            assert_eq!(count(Family::AntisymmetricImaginary), n * (n - 1) / 2);
            for i in &idx {
                let x = generator(i);
                assert_eq!(x.adjoint(), x);
                assert!(x.trace().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn off_diagonal_generators_are_orthogonal_within_family() {
        let idx = all_indices(8).unwrap();
        for fam in [Family::SymmetricReal, Family::AntisymmetricImaginary] {
            let xs: Vec<_> = idx
                .iter()
                .filter(|i| i.family() == fam)
                .map(generator)
                .collect();
            for (a, xa) in xs.iter().enumerate() {
                for (b, xb) in xs.iter().enumerate() {
                    let want = if a == b { 2.0 } else { 0.0 };
                    assert_eq!(hs_inner(xa, xb).unwrap(), Complex64::new(want, 0.0));
                }
            }
        }
        let x8 = generator(&idx[7]);
        assert_eq!(hs_inner(&x8, &x8).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn su3_generators_are_independent() {
        // Flatten each generator into 2n² reals and eliminate.
        let rows: Vec<Vec<f64>> = all_generators(3)
            .unwrap()
            .iter()
            .map(|x| x.entries().iter().flat_map(|z| [z.re, z.im]).collect())
            .collect();
        assert_eq!(rows.len(), 8);
        assert_eq!(rank(&rows, 1e-12), 8);
    }

    #[test]
    fn orthogonal_diagonal_basis_examples() {
        let b2 = orthogonal_diagonal_basis(2).unwrap();
        assert_eq!(b2, vec![ComplexMatrix::from_diagonal(&[ONE, -ONE])]);

        let b3 = orthogonal_diagonal_basis(3).unwrap();
        assert_eq!(b3.len(), 2);
        assert_eq!(hs_inner(&b3[0], &b3[1]).unwrap(), ZERO);
        let c2 = b3[1][(0, 0)].re;
        assert!((b3[1][(2, 2)].re + 2.0 * c2).abs() < 1e-15);
        assert_eq!(b3[1][(1, 1)], b3[1][(0, 0)]);

        for n in [4, 8] {
            let basis = orthogonal_diagonal_basis(n).unwrap();
            assert_eq!(basis.len(), n - 1);
            for (a, xa) in basis.iter().enumerate() {
                assert!(xa.is_diagonal(0.0));
                assert!(xa.trace().norm() < 1e-12);
                for (b, xb) in basis.iter().enumerate() {
                    let g = hs_inner(xa, xb).unwrap();
                    let want = if a == b { 2.0 } else { 0.0 };
                    assert!(
                        (g - Complex64::new(want, 0.0)).norm() < 1e-12,
                        "gram[{a}][{b}] = {g}"
                    );
                }
                // l ones, then -l, then zeros.
                let l = a + 1;
                let head = xa[(0, 0)].re;
                for i in 0..l {
                    assert!((xa[(i, i)].re - head).abs() < 1e-15);
                }
                assert!((xa[(l, l)].re + l as f64 * head).abs() < 1e-12);
                for i in l + 1..n {
                    assert_eq!(xa[(i, i)], ZERO);
                }
            }
        }
    }

    #[test]
    fn normalize_gives_unit_norm() {
        let x = generator(&GeneratorIndex::from_flat(8, 42).unwrap());
        let u = normalize(&x);
        assert!((hs_inner(&u, &u).unwrap().re - 1.0).abs() < 1e-15);
        let z = ComplexMatrix::zeros(3);
        assert_eq!(normalize(&z), z);
    }

    #[test]
    fn derivative_check_examples() {
        for flat in [1, 42] {
            let x = generator(&GeneratorIndex::from_flat(8, flat).unwrap());
            let err = derivative_check(&x, 1e-5).unwrap();
            assert!(err <= 1e-4, "X{flat}: {err}");
            // Forward difference error is about h/2 * ||X²||.
            assert!(err > 1e-7, "X{flat}: suspiciously small error {err}");
        }
        assert_eq!(
            derivative_check(&ComplexMatrix::zeros(8), 1e-5).unwrap(),
            0.0
        );
        assert!(derivative_check(&ComplexMatrix::zeros(2), 0.0).is_err());
        assert!(derivative_check(&ComplexMatrix::zeros(2), -1.0).is_err());
    }
}
