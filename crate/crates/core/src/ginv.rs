//! Dual generalized inverses.
//!
//! * MPDGI `Âᵖ = A† − εA†A₀A†` exists for every dual matrix.
//! * DMPGI `Â† = A† + εR` is the unique solution of the four dual Penrose
//!   equations and exists iff `(I − AA†)A₀(I − A†A) = 0`, with
//!
//! ```text
//! R = −A†A₀A† + (AᵀA)†A₀ᵀ(I − AA†) + (I − A†A)A₀ᵀ(AAᵀ)†
//! ```
//!
//! Each inverse has a second, SVD-block route used as a cross-check.

use crate::dual::{DualMatrix, Matrix, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, scale_cols, scale_rows, SvdFactors};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GinvKind {
    Mpdgi,
    Dmpgi,
}

/// Which construction produced [`GinvResult::value`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GinvRoute {
    Formula,
    SvdBlocks,
}

#[derive(Clone, Debug)]
pub struct GinvResult {
    pub kind: GinvKind,
    /// `None` when the DMPGI does not exist.
    pub value: Option<DualMatrix>,
    pub exists: bool,
    /// `R` for the DMPGI, `R_p = −A†A₀A†` for the MPDGI.
    pub correction: Option<Matrix>,
    pub penrose_residuals: Option<[f64; 4]>,
    pub route: GinvRoute,
    /// `‖(I − AA†)A₀(I − A†A)‖_F`.
    pub projector_residual: f64,
    /// Distance between the formula and SVD-block routes.
    pub route_discrepancy: Option<f64>,
}

impl GinvResult {
    pub fn value(&self) -> Option<&DualMatrix> {
        self.value.as_ref()
    }

    pub fn into_value(self) -> Option<DualMatrix> {
        self.value
    }
}

/// Verdicts of the two existence conditions for the DMPGI.
#[derive(Clone, Debug, PartialEq)]
pub struct ExistenceReport {
    /// Decided by the projector condition.
    pub exists: bool,
    pub projector_residual: f64,
    pub projector_bound: f64,
    /// `rk([[A₀, A], [A, 0]])`.
    pub block_rank: usize,
    pub real_rank: usize,
    /// `block_rank == 2·real_rank`.
    pub rank_condition: bool,
    pub routes_agree: bool,
}

/// Real-part factorization shared by every inverse of one dual matrix.
struct Prepared {
    f: SvdFactors,
    a_pinv: Matrix,
}

impl Prepared {
    fn new(a: &Matrix, tol: &Tolerances) -> Result<Self> {
        let f = linalg::svd(a, tol)?;
        let a_pinv = linalg::pinv_from(&f);
        Ok(Self { f, a_pinv })
    }

    fn projector_residual(&self, a: &Matrix, a0: &Matrix) -> f64 {
        let (m, n) = a.shape();
        let left = Matrix::identity(m, m) - a * &self.a_pinv;
        let right = Matrix::identity(n, n) - &self.a_pinv * a;
        (left * a0 * right).norm()
    }

    /// Compact-formula correction `R`.
    fn correction(&self, a: &Matrix, a0: &Matrix) -> Matrix {
        let (m, n) = a.shape();
        let ap = &self.a_pinv;
        // (AᵀA)† = A†A†ᵀ and (AAᵀ)† = A†ᵀA† keep the rank rule of A itself.
        let ata_pinv = ap * ap.transpose();
        let aat_pinv = ap.transpose() * ap;
        let a0t = a0.transpose();
        -(ap * a0 * ap)
            + ata_pinv * &a0t * (Matrix::identity(m, m) - a * ap)
            + (Matrix::identity(n, n) - ap * a) * a0t * aat_pinv
    }

    /// `T₁⁻¹` and `Uᵀ·A₀·V` for the block routes.
    fn basis_parts(&self, a0: &Matrix) -> (Vec<f64>, Matrix) {
        let r = self.f.rank;
        let t_inv: Vec<f64> = self.f.sigma[..r].iter().map(|s| 1.0 / s).collect();
        let y = self.f.u.transpose() * a0 * &self.f.v;
        (t_inv, y)
    }

    /// Dual part from its `n×m` basis coordinates `Z`: `V·Z·Uᵀ`.
    fn unrotate(&self, z: &Matrix) -> Matrix {
        &self.f.v * z * self.f.u.transpose()
    }
}

/// Moore-Penrose dual generalized inverse.
pub fn mpdgi(x: &DualMatrix, tol: &Tolerances) -> Result<GinvResult> {
    let (a, a0) = (x.real(), x.dual());
    let p = Prepared::new(a, tol)?;
    let rp = -(&p.a_pinv * a0 * &p.a_pinv);
    let value = DualMatrix::from_parts(p.a_pinv.clone(), rp.clone());
    let blocks = mpdgi_blocks(&p, a0);
    let discrepancy = (value.dual() - blocks).norm();
    let residuals = penrose_residuals(x, &value)?;
    Ok(GinvResult {
        kind: GinvKind::Mpdgi,
        value: Some(value),
        exists: true,
        correction: Some(rp),
        penrose_residuals: Some(residuals),
        route: GinvRoute::Formula,
        projector_residual: p.projector_residual(a, a0),
        route_discrepancy: Some(discrepancy),
    })
}

fn mpdgi_blocks(p: &Prepared, a0: &Matrix) -> Matrix {
    let r = p.f.rank;
    let (t_inv, y) = p.basis_parts(a0);
    let (m, n) = a0.shape();
    let mut z = Matrix::zeros(n, m);
    let a1 = y.view((0, 0), (r, r)).into_owned();
    z.view_mut((0, 0), (r, r))
        .copy_from(&(-scale_cols(&scale_rows(&a1, &t_inv), &t_inv)));
    p.unrotate(&z)
}

/// MPDGI through the SVD block form `V·[−T₁⁻¹A₁T₁⁻¹, 0; 0, 0]·Uᵀ`.
pub fn mpdgi_svd_blocks(x: &DualMatrix, tol: &Tolerances) -> Result<DualMatrix> {
    let p = Prepared::new(x.real(), tol)?;
    let dual = mpdgi_blocks(&p, x.dual());
    Ok(DualMatrix::from_parts(p.a_pinv, dual))
}

fn existence(p: &Prepared, x: &DualMatrix, tol: &Tolerances) -> Result<ExistenceReport> {
    let (a, a0) = (x.real(), x.dual());
    let (m, n) = a.shape();
    let projector_residual = p.projector_residual(a, a0);
    let projector_bound = tol.eq_atol + tol.eq_rtol * a0.norm();
    let exists = projector_residual <= projector_bound;

    let mut block = Matrix::zeros(2 * m, 2 * n);
    block.view_mut((0, 0), (m, n)).copy_from(a0);
    block.view_mut((0, n), (m, n)).copy_from(a);
    block.view_mut((m, 0), (m, n)).copy_from(a);
    let block_rank = linalg::rank(&block, tol)?;
    let real_rank = p.f.rank;
    let rank_condition = block_rank == 2 * real_rank;
    let routes_agree = rank_condition == exists;
    if !routes_agree {
        log::warn!(
            "DMPGI existence routes disagree: projector residual {projector_residual:e} (bound {projector_bound:e}) \
             vs block rank {block_rank} against 2·rk(A) = {}",
            2 * real_rank
        );
    }
    Ok(ExistenceReport {
        exists,
        projector_residual,
        projector_bound,
        block_rank,
        real_rank,
        rank_condition,
        routes_agree,
    })
}

/// Existence test for the DMPGI: the projector condition decides, the
/// block-rank condition is reported alongside.
pub fn dmpgi_exists(x: &DualMatrix, tol: &Tolerances) -> Result<ExistenceReport> {
    let p = Prepared::new(x.real(), tol)?;
    existence(&p, x, tol)
}

/// Cheap existence verdict (projector condition only).
pub fn has_dmpgi(x: &DualMatrix, tol: &Tolerances) -> Result<bool> {
    let p = Prepared::new(x.real(), tol)?;
    let bound = tol.eq_atol + tol.eq_rtol * x.dual().norm();
    Ok(p.projector_residual(x.real(), x.dual()) <= bound)
}

/// Correction term `R` of the compact formula (meaningful only when the
/// DMPGI exists).
pub fn dmpgi_correction(x: &DualMatrix, tol: &Tolerances) -> Result<Matrix> {
    let p = Prepared::new(x.real(), tol)?;
    Ok(p.correction(x.real(), x.dual()))
}

fn dmpgi_blocks(p: &Prepared, a0: &Matrix) -> Matrix {
    let r = p.f.rank;
    let (t_inv, y) = p.basis_parts(a0);
    let (m, n) = a0.shape();
    let t_inv2: Vec<f64> = t_inv.iter().map(|t| t * t).collect();
    let a1 = y.view((0, 0), (r, r)).into_owned();
    let a2 = y.view((0, r), (r, n - r)).into_owned();
    let a3 = y.view((r, 0), (m - r, r)).into_owned();
    let mut z = Matrix::zeros(n, m);
    z.view_mut((0, 0), (r, r))
        .copy_from(&(-scale_cols(&scale_rows(&a1, &t_inv), &t_inv)));
    z.view_mut((0, r), (r, m - r))
        .copy_from(&scale_rows(&a3.transpose(), &t_inv2));
    z.view_mut((r, 0), (n - r, r))
        .copy_from(&scale_cols(&a2.transpose(), &t_inv2));
    p.unrotate(&z)
}

/// DMPGI through the SVD block form
/// `V·[−T₁⁻¹A₁T₁⁻¹, T₁⁻²A₃ᵀ; A₂ᵀT₁⁻², 0]·Uᵀ`; `None` if it does not exist.
pub fn dmpgi_svd_blocks(x: &DualMatrix, tol: &Tolerances) -> Result<Option<DualMatrix>> {
    let p = Prepared::new(x.real(), tol)?;
    let bound = tol.eq_atol + tol.eq_rtol * x.dual().norm();
    if p.projector_residual(x.real(), x.dual()) > bound {
        return Ok(None);
    }
    let dual = dmpgi_blocks(&p, x.dual());
    Ok(Some(DualMatrix::from_parts(p.a_pinv, dual)))
}

/// Dual Moore-Penrose generalized inverse. Absence is reported through
/// `exists = false`, not as an error.
pub fn dmpgi(x: &DualMatrix, tol: &Tolerances) -> Result<GinvResult> {
    let (a, a0) = (x.real(), x.dual());
    let p = Prepared::new(a, tol)?;
    let report = existence(&p, x, tol)?;
    if !report.exists {
        return Ok(GinvResult {
            kind: GinvKind::Dmpgi,
            value: None,
            exists: false,
            correction: None,
            penrose_residuals: None,
            route: GinvRoute::Formula,
            projector_residual: report.projector_residual,
            route_discrepancy: None,
        });
    }
    let r = p.correction(a, a0);
    let value = DualMatrix::from_parts(p.a_pinv.clone(), r.clone());
    let blocks = dmpgi_blocks(&p, a0);
    let discrepancy = (value.dual() - &blocks).norm();
    if discrepancy > 1e-9 * (1.0 + value.norm()) {
        log::warn!("DMPGI formula and SVD-block routes differ by {discrepancy:e}");
    }
    let residuals = penrose_residuals(x, &value)?;
    Ok(GinvResult {
        kind: GinvKind::Dmpgi,
        value: Some(value),
        exists: true,
        correction: Some(r),
        penrose_residuals: Some(residuals),
        route: GinvRoute::Formula,
        projector_residual: report.projector_residual,
        route_discrepancy: Some(discrepancy),
    })
}

/// The DMPGI value or `None`; convenience for predicate code.
pub fn dmpgi_value(x: &DualMatrix, tol: &Tolerances) -> Result<Option<DualMatrix>> {
    let (a, a0) = (x.real(), x.dual());
    let p = Prepared::new(a, tol)?;
    let bound = tol.eq_atol + tol.eq_rtol * a0.norm();
    if p.projector_residual(a, a0) > bound {
        return Ok(None);
    }
    let r = p.correction(a, a0);
    Ok(Some(DualMatrix::from_parts(p.a_pinv, r)))
}

/// The MPDGI value; convenience for predicate code.
pub fn mpdgi_value(x: &DualMatrix, tol: &Tolerances) -> Result<DualMatrix> {
    let ap = linalg::pinv(x.real(), tol)?;
    let rp = -(&ap * x.dual() * &ap);
    Ok(DualMatrix::from_parts(ap, rp))
}

/// Norms of the defects of the four dual Penrose equations
/// `ÂX̂Â = Â`, `X̂ÂX̂ = X̂`, `ÂX̂ = (ÂX̂)ᵀ`, `X̂Â = (X̂Â)ᵀ`, evaluated in dual
/// arithmetic. Each norm covers both parts.
pub fn penrose_residuals(x: &DualMatrix, cand: &DualMatrix) -> Result<[f64; 4]> {
    if cand.shape() != (x.cols(), x.rows()) {
        return Err(Error::Dimension {
            op: "penrose_residuals",
            left: x.shape(),
            right: cand.shape(),
        });
    }
    let ax = x.mul(cand)?;
    let xa = cand.mul(x)?;
    Ok([
        ax.mul(x)?.distance(x)?,
        xa.mul(cand)?.distance(cand)?,
        ax.distance(&ax.transpose())?,
        xa.distance(&xa.transpose())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use crate::dual::matrix_from_rows;
    use crate::fixtures;

    fn m(rows: &[&[f64]]) -> Matrix {
        matrix_from_rows(rows).unwrap()
    }

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_diagonal(&DVector::from_row_slice(d))
    }

    fn close(x: &Matrix, y: &Matrix, eps: f64) -> bool {
        (x - y).norm() <= eps
    }

    #[test]
    fn mpdgi_fixtures() {
        let tol = Tolerances::default();
        for f in [fixtures::f1(), fixtures::f2()] {
            let r = mpdgi(&f, &tol).unwrap();
            assert!(r.exists);
            let v = r.value().unwrap();
            assert!(close(v.real(), &m(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-15));
            assert!(close(v.dual(), &m(&[&[-1.0, 0.0], &[0.0, 0.0]]), 1e-15));
        }
        let r = mpdgi(&fixtures::f8(), &tol).unwrap();
        let v = r.value().unwrap();
        assert!(close(v.real(), &diag(&[1.0, 0.5, 0.0]), 1e-14));
        assert!(close(v.dual(), &m(&[&[-1.0, 3.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.0]]), 1e-14));
        assert!(r.route_discrepancy.unwrap() < 1e-13);
    }

    #[test]
    fn mpdgi_of_real_matrix_is_pinv() {
        let tol = Tolerances::default();
        let x = DualMatrix::from_real(m(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]])).unwrap();
        let v = mpdgi(&x, &tol).unwrap().into_value().unwrap();
        assert!(close(v.real(), &linalg::pinv(x.real(), &tol).unwrap(), 0.0));
        assert_eq!(v.dual(), &Matrix::zeros(2, 3));
        let d = dmpgi(&x, &tol).unwrap().into_value().unwrap();
        assert!(v.approx_eq(&d, &tol).unwrap());
    }

    #[test]
    fn existence_verdicts() {
        let tol = Tolerances::default();
        let f2 = dmpgi_exists(&fixtures::f2(), &tol).unwrap();
        assert!(!f2.exists);
        assert!((f2.projector_residual - 1.0).abs() < 1e-15);
        assert!(f2.routes_agree);

        let f6 = dmpgi_exists(&fixtures::f6(), &tol).unwrap();
        assert!(f6.exists && f6.routes_agree);
        assert_eq!((f6.block_rank, f6.real_rank), (2, 1));

        let eps = DualMatrix::new(Matrix::zeros(2, 2), m(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        let r = dmpgi_exists(&eps, &tol).unwrap();
        assert!(!r.exists && r.routes_agree);
    }

    #[test]
    fn dmpgi_fixtures() {
        let tol = Tolerances::default();
        let r = dmpgi(&fixtures::f6(), &tol).unwrap();
        let v = r.value().unwrap();
        assert!(close(v.real(), &diag(&[1.0, 0.0, 0.0]), 1e-14));
        assert!(close(v.dual(), &m(&[&[-1.0, 4.0, 7.0], &[2.0, 0.0, 0.0], &[3.0, 0.0, 0.0]]), 1e-13));
        assert!(r.penrose_residuals.unwrap().iter().all(|&e| e <= 1e-12));

        // Independently evaluated; zero Penrose residuals confirm it.
        let r = dmpgi(&fixtures::f8(), &tol).unwrap();
        let v = r.value().unwrap();
        assert!(close(v.real(), &diag(&[1.0, 0.5, 0.0]), 1e-14));
        assert!(close(v.dual(), &m(&[&[-1.0, 3.0, 7.0], &[0.0, 0.5, -0.75], &[3.0, -0.25, 0.0]]), 1e-13));
        assert!(r.route_discrepancy.unwrap() < 1e-12);

        let id = dmpgi(&DualMatrix::identity(3), &tol).unwrap();
        assert_eq!(id.value().unwrap(), &DualMatrix::identity(3));
    }

    #[test]
    fn absent_dmpgi_is_a_value() {
        let r = dmpgi(&fixtures::f2(), &Tolerances::default()).unwrap();
        assert!(!r.exists);
        assert!(r.value.is_none() && r.penrose_residuals.is_none() && r.correction.is_none());
        assert!(dmpgi_svd_blocks(&fixtures::f2(), &Tolerances::default()).unwrap().is_none());
    }

    #[test]
    fn penrose_residual_oracle() {
        let tol = Tolerances::default();
        let f6 = fixtures::f6();
        let d = dmpgi(&f6, &tol).unwrap().into_value().unwrap();
        assert!(penrose_residuals(&f6, &d).unwrap().iter().all(|&e| e <= 1e-12));

        let f1 = fixtures::f1();
        let p = mpdgi(&f1, &tol).unwrap().into_value().unwrap();
        assert!(penrose_residuals(&f1, &p).unwrap().iter().all(|&e| e <= 1e-12));

        // F2 has no DMPGI; its MPDGI misses the first equation by exactly 1.
        let f2 = fixtures::f2();
        let p = mpdgi(&f2, &tol).unwrap().into_value().unwrap();
        let res = penrose_residuals(&f2, &p).unwrap();
        assert!(res[0] > 0.5);
        assert!((res[0] - 1.0).abs() < 1e-15);

        assert!(penrose_residuals(&f6, &DualMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn double_inverse_returns_input() {
        let tol = Tolerances::default();
        for f in [fixtures::f3(), fixtures::f6(), fixtures::f7(), fixtures::f8()] {
            let d = dmpgi_value(&f, &tol).unwrap().unwrap();
            let dd = dmpgi_value(&d, &tol).unwrap().unwrap();
            assert!(dd.approx_eq(&f, &tol).unwrap());
        }
    }
}
