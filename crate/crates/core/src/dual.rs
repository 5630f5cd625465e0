//! Dual matrices `A + εA₀` with `ε² = 0`, stored as a pair of dense real
//! matrices of identical shape.
//!
//! Every product truncates the `ε²` term, so
//! `(A + εA₀)(B + εB₀) = AB + ε(AB₀ + A₀B)`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix used throughout the crate.
pub type Matrix = DMatrix<f64>;

/// Numerical tolerances shared by every predicate.
///
/// `rank_rel_tol` is relative to the largest singular value. Two matrices
/// compare equal when `‖x − y‖_F ≤ eq_atol + eq_rtol · max(‖x‖_F, ‖y‖_F)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rank_rel_tol: f64,
    pub eq_atol: f64,
    pub eq_rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            eq_atol: 1e-10,
            eq_rtol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel_tol: f64, eq_atol: f64, eq_rtol: f64) -> Result<Self> {
        for (name, v) in [
            ("rank_rel_tol", rank_rel_tol),
            ("eq_atol", eq_atol),
            ("eq_rtol", eq_rtol),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "tolerance {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self {
            rank_rel_tol,
            eq_atol,
            eq_rtol,
        })
    }

    /// Same tolerance for the absolute and relative equality terms.
    pub fn with_eq(eq: f64) -> Self {
        Self {
            eq_atol: eq,
            eq_rtol: eq,
            ..Self::default()
        }
    }

    /// Equality bound for a difference between operands of the given norms.
    pub fn bound(&self, norm_x: f64, norm_y: f64) -> f64 {
        self.eq_atol + self.eq_rtol * norm_x.max(norm_y)
    }
}

/// Sign selector for [`dm_add`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// An `m×n` dual matrix `real + ε·dual`.
#[derive(Clone, PartialEq)]
pub struct DualMatrix {
    real: Matrix,
    dual: Matrix,
}

impl DualMatrix {
    /// Builds a dual matrix, rejecting mismatched shapes, empty shapes and
    /// non-finite entries.
    pub fn new(real: Matrix, dual: Matrix) -> Result<Self> {
        if real.shape() != dual.shape() {
            return Err(Error::Dimension {
                op: "DualMatrix::new",
                left: real.shape(),
                right: dual.shape(),
            });
        }
        if real.nrows() == 0 || real.ncols() == 0 {
            return Err(Error::Dimension {
                op: "DualMatrix::new (empty)",
                left: real.shape(),
                right: dual.shape(),
            });
        }
        check_finite("real", &real)?;
        check_finite("dual", &dual)?;
        Ok(Self { real, dual })
    }

    /// A real matrix viewed as a dual matrix with zero dual part.
    pub fn from_real(real: Matrix) -> Result<Self> {
        let dual = Matrix::zeros(real.nrows(), real.ncols());
        Self::new(real, dual)
    }

    /// Row-major construction; both parts must have rows of equal length.
    pub fn from_rows(real: &[&[f64]], dual: &[&[f64]]) -> Result<Self> {
        Self::new(matrix_from_rows(real)?, matrix_from_rows(dual)?)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            real: Matrix::zeros(rows, cols),
            dual: Matrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            real: Matrix::identity(n, n),
            dual: Matrix::zeros(n, n),
        }
    }

    /// Pure dual scalar `ε·value` as a 1×1 matrix.
    pub fn epsilon(value: f64) -> Self {
        Self {
            real: Matrix::zeros(1, 1),
            dual: Matrix::from_element(1, 1, value),
        }
    }

    /// Internal constructor for results of arithmetic on validated operands.
    pub(crate) fn from_parts(real: Matrix, dual: Matrix) -> Self {
        debug_assert_eq!(real.shape(), dual.shape());
        Self { real, dual }
    }

    pub fn rows(&self) -> usize {
        self.real.nrows()
    }

    pub fn cols(&self) -> usize {
        self.real.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.real.shape()
    }

    pub fn real(&self) -> &Matrix {
        &self.real
    }

    pub fn dual(&self) -> &Matrix {
        &self.dual
    }

    pub fn into_parts(self) -> (Matrix, Matrix) {
        (self.real, self.dual)
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        dm_add(self, other, Sign::Plus)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        dm_add(self, other, Sign::Minus)
    }

    /// Dual product with the `ε²` term dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::Dimension {
                op: "dm_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let real = &self.real * &other.real;
        let dual = &self.real * &other.dual + &self.dual * &other.real;
        Ok(Self::from_parts(real, dual))
    }

    pub fn transpose(&self) -> Self {
        Self::from_parts(self.real.transpose(), self.dual.transpose())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(&self.real * factor, &self.dual * factor)
    }

    /// Root-sum-square of the Frobenius norms of both parts.
    pub fn norm(&self) -> f64 {
        self.real.norm().hypot(self.dual.norm())
    }

    /// Joint Frobenius distance `‖x − y‖` over both parts.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Two-part tolerance comparison; see [`Tolerances`].
    pub fn approx_eq(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        self.same_shape(other, "dm_approx_eq")?;
        let real_ok = (&self.real - &other.real).norm()
            <= tol.bound(self.real.norm(), other.real.norm());
        let dual_ok = (&self.dual - &other.dual).norm()
            <= tol.bound(self.dual.norm(), other.dual.norm());
        Ok(real_ok && dual_ok)
    }
}

/// Componentwise `x ± y`.
pub fn dm_add(x: &DualMatrix, y: &DualMatrix, sign: Sign) -> Result<DualMatrix> {
    x.same_shape(y, "dm_add")?;
    let (real, dual) = match sign {
        Sign::Plus => (&x.real + &y.real, &x.dual + &y.dual),
        Sign::Minus => (&x.real - &y.real, &x.dual - &y.dual),
    };
    Ok(DualMatrix::from_parts(real, dual))
}

pub fn dm_mul(x: &DualMatrix, y: &DualMatrix) -> Result<DualMatrix> {
    x.mul(y)
}

pub fn dm_transpose(x: &DualMatrix) -> DualMatrix {
    x.transpose()
}

pub fn dm_approx_eq(x: &DualMatrix, y: &DualMatrix, tol: &Tolerances) -> Result<bool> {
    x.approx_eq(y, tol)
}

/// Row-major real matrix from nested slices.
pub fn matrix_from_rows(rows: &[&[f64]]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::Dimension {
            op: "matrix_from_rows",
            left: (nrows, ncols),
            right: (1, bad.len()),
        });
    }
    Ok(Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn check_finite(part: &'static str, m: &Matrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite {
                    part,
                    row: i,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

impl fmt::Debug for DualMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualMatrix")
            .field("shape", &self.shape())
            .field("real", &self.real.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
            .field("dual", &self.dual.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
            .finish()
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, m: &Matrix) -> fmt::Result {
    f.write_str("(")?;
    for (i, row) in m.row_iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            let v = v + 0.0;
            match f.precision() {
                Some(p) => write!(f, "{v:.p$}")?,
                None => write!(f, "{v}")?,
            }
        }
    }
    f.write_str(")")
}

/// Row-major, in the form `(1, 0; 0, 0) + ε(-1, 0; 0, 0)`. Honors `{:.N}`.
impl fmt::Display for DualMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.real)?;
        f.write_str(" + ε")?;
        write_rows(f, &self.dual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(rows: &[&[f64]]) -> Matrix {
        matrix_from_rows(rows).unwrap()
    }

    #[test]
    fn display_is_row_major() {
        let x = DualMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 0.5]], &[&[-0.0, 3.0], &[4.0, 0.0]]).unwrap();
        assert_eq!(x.to_string(), "(1, 2; 0, 0.5) + ε(0, 3; 4, 0)");
        assert_eq!(format!("{x:.1}"), "(1.0, 2.0; 0.0, 0.5) + ε(0.0, 3.0; 4.0, 0.0)");
    }

    #[test]
    fn doubling_and_cancellation() {
        let f1 = fixtures::f1();
        let twice = f1.add(&f1).unwrap();
        assert_eq!(twice.real(), &m(&[&[2.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(twice.dual(), &m(&[&[2.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(f1.sub(&f1).unwrap(), DualMatrix::zeros(2, 2));
    }

    #[test]
    fn fixture_difference() {
        let d = fixtures::f8().sub(&fixtures::f6()).unwrap();
        assert_eq!(d.real(), &Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 2.0, 0.0])));
        assert_eq!(
            d.dual(),
            &m(&[&[0.0, -8.0, 0.0], &[-4.0, -2.0, -1.0], &[0.0, -3.0, 0.0]])
        );
    }

    #[test]
    fn product_truncates_epsilon_squared() {
        let f1 = fixtures::f1();
        let sq = f1.mul(&f1).unwrap();
        assert_eq!(sq.real(), &m(&[&[1.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(sq.dual(), &m(&[&[2.0, 0.0], &[0.0, 0.0]]));

        let f2 = fixtures::f2();
        assert_eq!(DualMatrix::identity(2).mul(&f2).unwrap(), f2);

        let p = DualMatrix::epsilon(1.0).mul(&DualMatrix::epsilon(2.0)).unwrap();
        assert_eq!(p, DualMatrix::zeros(1, 1));
    }

    #[test]
    fn transpose_of_fixture() {
        assert_eq!(fixtures::f1().transpose(), fixtures::f1());
        let t = fixtures::f6().transpose();
        assert_eq!(t.real(), fixtures::f6().real());
        assert_eq!(
            t.dual(),
            &m(&[&[1.0, 4.0, 7.0], &[2.0, 0.0, 0.0], &[3.0, 0.0, 0.0]])
        );
    }

    #[test]
    fn approx_eq_defaults() {
        let tol = Tolerances::default();
        let f1 = fixtures::f1();
        assert!(f1.approx_eq(&f1, &tol).unwrap());
        assert!(!f1.approx_eq(&fixtures::f2(), &tol).unwrap());
        let nudged = DualMatrix::new(
            f1.real().add_scalar(1e-14),
            f1.dual().add_scalar(-1e-14),
        )
        .unwrap();
        assert!(f1.approx_eq(&nudged, &tol).unwrap());
    }

    #[test]
    fn shape_errors() {
        let a = DualMatrix::zeros(2, 2);
        let b = DualMatrix::zeros(2, 3);
        assert!(matches!(a.add(&b), Err(Error::Dimension { .. })));
        assert!(matches!(b.mul(&b), Err(Error::Dimension { .. })));
        assert!(a.approx_eq(&b, &Tolerances::default()).is_err());
        assert!(matches!(
            DualMatrix::new(Matrix::zeros(2, 2), Matrix::zeros(2, 1)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let mut real = Matrix::zeros(2, 2);
        real[(1, 0)] = f64::NAN;
        assert!(matches!(
            DualMatrix::new(real, Matrix::zeros(2, 2)),
            Err(Error::NonFinite { part: "real", row: 1, col: 0 })
        ));
        let mut dual = Matrix::zeros(1, 1);
        dual[(0, 0)] = f64::INFINITY;
        assert!(DualMatrix::new(Matrix::zeros(1, 1), dual).is_err());
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::new(-1.0, 0.0, 0.0).is_err());
        assert!(Tolerances::new(0.0, f64::NAN, 0.0).is_err());
        assert_eq!(Tolerances::new(1e-10, 1e-10, 1e-9).unwrap(), Tolerances::default());
    }
}
