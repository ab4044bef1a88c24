use std::fmt;

use crate::error::{Error, Result};

/// Relative pivot threshold below which `solve_linear` reports singularity.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Dense row-major matrix of finite doubles.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows, rejecting ragged input and non-finite entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    left: (i, row.len()),
                    right: (i, cols),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(RealMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn column(values: &[f64]) -> Self {
        RealMatrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    pub fn row_vector(values: &[f64]) -> Self {
        RealMatrix {
            rows: 1,
            cols: values.len(),
            data: values.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Elementwise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "hadamard")?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |self - other|`, infinite on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn approx_eq(&self, other: &Self, atol: f64) -> bool {
        self.max_abs_diff(other) <= atol
    }

    /// First entry whose deviation exceeds `atol`.
    pub fn first_deviation(&self, other: &Self, atol: f64) -> Option<(usize, usize)> {
        if self.dims() != other.dims() {
            return Some((0, 0));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| (a - b).abs() > atol)
            .map(|p| (p / self.cols, p % self.cols))
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        solve_linear(self, rhs)
    }

    /// Matrix exponential via a truncated Taylor series with scaling and
    /// squaring. Adequate for small well-scaled matrices.
    pub fn expm_taylor(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "expm",
                left: self.dims(),
                right: self.dims(),
            });
        }
        let norm = self.max_abs() * self.rows as f64;
        let mut squarings = 0;
        let mut scaled = self.clone();
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as i32;
            scaled = self.scale(0.5f64.powi(squarings));
        }
        let n = self.rows;
        let mut sum = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..40 {
            term = term.mul(&scaled)?.scale(1.0 / k as f64);
            sum = sum.add(&term)?;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum)?;
        }
        Ok(sum)
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| format!("{x}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Solves `a · X = b` with partial pivoting.
///
/// A pivot smaller than [`PIVOT_THRESHOLD`] times the largest magnitude of
/// its column in the original matrix is treated as singular.
pub fn solve_linear(a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
    if !a.is_square() || a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            op: "solve_linear",
            left: a.dims(),
            right: b.dims(),
        });
    }
    let n = a.rows;
    let m = b.cols;
    let column_scale: Vec<f64> = (0..n)
        .map(|j| (0..n).fold(0.0f64, |acc, i| acc.max(a[(i, j)].abs())))
        .collect();
    let mut lu = a.clone();
    let mut x = b.clone();

    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, lu[(r, col)].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if column_scale[col] == 0.0 || pivot < PIVOT_THRESHOLD * column_scale[col] {
            return Err(Error::Singular { column: col, pivot });
        }
        if pivot_row != col {
            for j in 0..n {
                lu.data.swap(col * n + j, pivot_row * n + j);
            }
            for j in 0..m {
                x.data.swap(col * m + j, pivot_row * m + j);
            }
        }
        let p = lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] / p;
            if factor == 0.0 {
                continue;
            }
            lu[(r, col)] = 0.0;
            for j in col + 1..n {
                let v = lu[(col, j)];
                lu[(r, j)] -= factor * v;
            }
            for j in 0..m {
                let v = x[(col, j)];
                x[(r, j)] -= factor * v;
            }
        }
    }

    for col in (0..n).rev() {
        let p = lu[(col, col)];
        for j in 0..m {
            let mut acc = x[(col, j)];
            for k in col + 1..n {
                acc -= lu[(col, k)] * x[(k, j)];
            }
            x[(col, j)] = acc / p;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_identity_and_scaled_identity() {
        let b = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(solve_linear(&RealMatrix::identity(2), &b).unwrap(), b);
        let half = solve_linear(&RealMatrix::identity(3).scale(2.0), &RealMatrix::identity(3)).unwrap();
        assert!(half.approx_eq(&RealMatrix::identity(3).scale(0.5), 1e-15));
    }

    #[test]
    fn solve_upper_triangular_by_back_substitution() {
        let a = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let x = solve_linear(&a, &RealMatrix::column(&[1.0, 0.0])).unwrap();
        assert_eq!(x, RealMatrix::column(&[1.0, 0.0]));
    }

    #[test]
    fn solve_needs_pivoting() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let x = solve_linear(&a, &RealMatrix::column(&[2.0, 3.0])).unwrap();
        assert_eq!(x, RealMatrix::column(&[3.0, 2.0]));
    }

    #[test]
    fn singular_is_reported() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&a, &RealMatrix::column(&[1.0, 1.0])),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            solve_linear(&RealMatrix::zeros(2, 2), &RealMatrix::column(&[1.0, 1.0])),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            RealMatrix::from_rows(&[vec![1.0, f64::NAN]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn taylor_exponential_of_absorbing_chain() {
        let q = RealMatrix::from_rows(&[vec![-1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let p = q.expm_taylor().unwrap();
        let e = (-1.0f64).exp();
        let expected = RealMatrix::from_rows(&[vec![e, 1.0 - e], vec![0.0, 1.0]]).unwrap();
        assert!(p.approx_eq(&expected, 1e-13));
    }
}
