//! Dense complex matrix kernel.
//!
//! Every operator in the crate is, at a fixed momentum, a small square
//! [`CMatrix`]. Dimension is a runtime value so 2×2, 4×4 and the doubled
//! 8×8 blocks used for exponential derivatives share one type. Singular value
//! and Hermitian eigen decompositions are delegated to `nalgebra`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Entry-wise equality tolerance for norm-O(10) matrices.
pub const EQ_TOL: f64 = 1e-9;
/// Relative singular-value cutoff for nullspaces.
pub const NULLSPACE_TOL: f64 = 1e-8;

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})[", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![ONE; dim])
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Row-major construction; `rows.len()` fixes the dimension.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in {dim}x{dim} matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// `[[a, b], [c, d]]` from four equal-sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.dim;
        assert!(b.dim == n && c.dim == n && d.dim == n, "block size mismatch");
        Self::from_fn(2 * n, |r, col| {
            let blk = match (r < n, col < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(r % n, col % n)]
        })
    }

    /// Extracts the `n×n` block at block position (`br`, `bc`) of a `2n×2n` matrix.
    pub fn block(&self, br: usize, bc: usize) -> Self {
        assert!(self.dim.is_multiple_of(2), "block extraction needs an even dimension");
        let n = self.dim / 2;
        Self::from_fn(n, |r, c| self[(br * n + r, bc * n + c)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Max row sum of moduli.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise distance.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in dist");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.dist(&self.adjoint())
    }

    /// `‖A A† − 1‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        (self * &self.adjoint()).dist(&Self::identity(self.dim))
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        if scale == 0.0 || !self.is_finite() {
            return Err(Error::SingularMatrix);
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a[(col, col)].inv();
            for c in 0..n {
                a[(col, c)] *= p;
                inv[(col, c)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] -= f * ac;
                    inv[(r, c)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| self[(r / m, c / m)] * other[(r % m, c % m)])
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self::from_fn(m.nrows(), |r, c| m[(r, c)]))
    }

    /// Row-major flattening, as used for vectorized linear maps.
    pub fn to_vec(&self) -> Vec<C64> {
        self.data.clone()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        -&self
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Mul<C64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: C64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: f64) -> CMatrix {
        self.scale_re(rhs)
    }
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// The argument is scaled so its infinity norm is at most 1/2; the series is
/// summed until the next term drops below 1e-18 of the partial sum.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim();
    let norm = m.norm_inf();
    let squarings = if norm > 0.5 {
        libm::ceil(libm::log2(norm / 0.5)) as i32
    } else {
        0
    };
    let scaled = m.scale_re(libm::ldexp(1.0, -squarings));
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        sum += &term;
        if term.norm_inf() <= 1e-18 * sum.norm_inf() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(sum)
}

/// Rectangular complex matrix, row-major. Holds stacked linear constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl RectMatrix {
    pub fn new(cols: usize) -> Self {
        Self {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[C64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: data.to_vec(),
        })
    }

    pub fn push_row(&mut self, row: &[C64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        // nalgebra's thin SVD only yields min(r, c) right vectors; pad to square.
        let rows = self.rows.max(self.cols);
        let mut m = DMatrix::zeros(rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self.data[r * self.cols + c];
            }
        }
        m
    }
}

impl From<&CMatrix> for RectMatrix {
    fn from(m: &CMatrix) -> Self {
        Self {
            rows: m.dim(),
            cols: m.dim(),
            data: m.to_vec(),
        }
    }
}

/// Right nullspace of a matrix together with its full singular spectrum.
#[derive(Clone, Debug)]
pub struct Nullspace {
    /// Orthonormal basis vectors.
    pub vectors: Vec<Vec<C64>>,
    /// Singular values in descending order (length = column count).
    pub singular_values: Vec<f64>,
    /// Input was identically zero; `vectors` is the standard basis.
    pub rank_zero: bool,
}

impl Nullspace {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// σ_min / σ_max, or 0 for the zero matrix.
    pub fn smallest_ratio(&self) -> f64 {
        let max = self.sigma_max();
        if max == 0.0 {
            0.0
        } else {
            self.sigma_min() / max
        }
    }
}

/// Right singular vectors whose singular values fall below `tol · σ_max`.
pub fn svd_nullspace(m: &RectMatrix, tol: f64) -> Result<Nullspace> {
    assert!(tol > 0.0, "nullspace tolerance must be positive");
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::DimensionMismatch("empty constraint matrix".into()));
    }
    if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = m.cols;
    if m.data.iter().all(|z| *z == ZERO) {
        let vectors = (0..n)
            .map(|i| {
                let mut v = vec![ZERO; n];
                v[i] = ONE;
                v
            })
            .collect();
        return Ok(Nullspace {
            vectors,
            singular_values: vec![0.0; n],
            rank_zero: true,
        });
    }
    let svd = m.to_nalgebra().svd(false, true);
    let v_t = svd.v_t.ok_or(Error::NonFinite)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let cutoff = tol * singular_values[0];
    let vectors = order
        .iter()
        .filter(|&&i| svd.singular_values[i] < cutoff)
        .map(|&i| (0..n).map(|c| v_t[(i, c)].conj()).collect())
        .collect();
    Ok(Nullspace {
        vectors,
        singular_values,
        rank_zero: false,
    })
}

/// Minimum-norm least-squares solution of `A·x ≈ b`.
pub fn least_squares(a: &RectMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} right-hand entries for {} rows",
            b.len(),
            a.rows
        )));
    }
    let mut rhs = DMatrix::zeros(a.rows.max(a.cols), 1);
    for (i, v) in b.iter().enumerate() {
        rhs[(i, 0)] = *v;
    }
    let svd = a.to_nalgebra().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let x = svd.solve(&rhs, eps).map_err(|_| Error::NonFinite)?;
    Ok(x.column(0).iter().copied().collect())
}

/// Unitary factor `U` of the polar decomposition `m = U·H`.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let svd = m.to_nalgebra().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= 1e-10 * smax {
        return Err(Error::NoUnitaryRepresentative);
    }
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::NoUnitaryRepresentative),
    };
    CMatrix::from_nalgebra(&(u * v_t))
}

/// Condition number σ_max/σ_min (infinite for singular input).
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = m.to_nalgebra().singular_values();
    let (max, min) = (s.max(), s.min());
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(m.to_nalgebra());
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}
