//! Real-matrix kernels: SVD with full orthogonal factors, Moore-Penrose
//! inverse, numerical rank, the real star order and the simultaneous
//! decomposition of a star-ordered pair.

use nalgebra::DVector;

use crate::dual::{Matrix, Tolerances};
use crate::error::{Error, Result};

/// Full SVD `a = u · diag(sigma) · vᵀ` with square orthogonal `u`, `v`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: Matrix,
    /// Nonincreasing, length `min(m, n)`.
    pub sigma: Vec<f64>,
    pub v: Matrix,
    /// Count of singular values above `rank_rel_tol · sigma[0]`.
    pub rank: usize,
}

impl SvdFactors {
    /// Leading `rank` singular values (the diagonal of `T₁`).
    pub fn leading(&self) -> &[f64] {
        &self.sigma[..self.rank]
    }

    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut s = Matrix::zeros(m, n);
        for (i, &x) in self.sigma.iter().enumerate() {
            s[(i, i)] = x;
        }
        &self.u * s * self.v.transpose()
    }
}

fn rank_from_sigma(sigma: &[f64], rel_tol: f64) -> usize {
    match sigma.first() {
        Some(&top) if top > 0.0 => sigma.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthogonal `d×d` matrix whose leading columns reproduce `cols` (which must
/// be close to orthonormal) and whose trailing columns span the complement.
pub(crate) fn complete_basis(cols: &Matrix) -> Matrix {
    let (d, k) = cols.shape();
    let mut aug = Matrix::zeros(d, k + d);
    aug.columns_mut(0, k).copy_from(cols);
    aug.columns_mut(k, d).fill_with_identity();
    let qr = aug.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..k.min(d) {
        if r[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
        }
    }
    q
}

/// Singular value decomposition with singular values sorted descending.
pub fn svd(a: &Matrix, tol: &Tolerances) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(SvdFactors {
            u: Matrix::identity(m, m),
            sigma: Vec::new(),
            v: Matrix::identity(n, n),
            rank: 0,
        });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("svd input has non-finite entries".into()));
    }
    let fa = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let dec = fa.svd().map_err(|e| {
        Error::Numerical(format!(
            "svd of {m}x{n} matrix did not converge ({e:?}, ‖a‖_F = {:e})",
            a.norm()
        ))
    })?;
    let (fu, fv, sv) = (dec.U(), dec.V(), dec.S().column_vector());

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| sv[i].max(0.0)).collect();
    let src = |j: usize| if j < k { order[j] } else { j };
    let u = Matrix::from_fn(m, m, |i, j| fu[(i, src(j))]);
    let v = Matrix::from_fn(n, n, |i, j| fv[(i, src(j))]);

    let rank = rank_from_sigma(&sigma, tol.rank_rel_tol);
    let f = SvdFactors { u, v, sigma, rank };
    let err = (f.reconstruct() - a).norm();
    if err > 1e-10 * (1.0 + a.norm()) {
        return Err(Error::Numerical(format!(
            "svd of {m}x{n} matrix has reconstruction error {err:e}"
        )));
    }
    Ok(f)
}

/// Numerical rank.
pub fn rank(a: &Matrix, tol: &Tolerances) -> Result<usize> {
    Ok(svd(a, tol)?.rank)
}

/// Moore-Penrose inverse `V · diag(σ⁺) · Uᵀ`, inverting only the singular
/// values counted by the rank rule.
pub fn pinv(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let f = svd(a, tol)?;
    Ok(pinv_from(&f))
}

pub(crate) fn pinv_from(f: &SvdFactors) -> Matrix {
    let r = f.rank;
    let v1 = f.v.columns(0, r);
    let u1 = f.u.columns(0, r);
    let inv = DVector::from_iterator(r, f.sigma[..r].iter().map(|s| 1.0 / s));
    v1 * Matrix::from_diagonal(&inv) * u1.transpose()
}

/// `diag(d) · m`.
pub fn scale_rows(m: &Matrix, d: &[f64]) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)])
}

/// `m · diag(d)`.
pub fn scale_cols(m: &Matrix, d: &[f64]) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j])
}

/// Frobenius norms of the four real Penrose defects
/// `AXA−A`, `XAX−X`, `AX−(AX)ᵀ`, `XA−(XA)ᵀ`.
pub fn real_penrose_residuals(a: &Matrix, x: &Matrix) -> Result<[f64; 4]> {
    if x.shape() != (a.ncols(), a.nrows()) {
        return Err(Error::Dimension {
            op: "real_penrose_residuals",
            left: a.shape(),
            right: x.shape(),
        });
    }
    let ax = a * x;
    let xa = x * a;
    Ok([
        (&ax * a - a).norm(),
        (&xa * x - x).norm(),
        (&ax - ax.transpose()).norm(),
        (&xa - xa.transpose()).norm(),
    ])
}

fn same_shape(a: &Matrix, b: &Matrix, op: &'static str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// `‖x − y‖_F` together with the equality bound for the pair.
pub(crate) fn eq_residual(x: &Matrix, y: &Matrix, tol: &Tolerances) -> (f64, f64) {
    ((x - y).norm(), tol.bound(x.norm(), y.norm()))
}

/// Residuals of `AᵀA = AᵀB` and `AAᵀ = BAᵀ`, each paired with its bound.
pub fn star_residuals_real(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<[(f64, f64); 2]> {
    same_shape(a, b, "star_leq_real")?;
    let at = a.transpose();
    Ok([
        eq_residual(&(&at * a), &(&at * b), tol),
        eq_residual(&(a * &at), &(b * &at), tol),
    ])
}

/// Real star order `a ≤* b` via `AᵀA = AᵀB` and `AAᵀ = BAᵀ`.
pub fn star_leq_real(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<bool> {
    Ok(star_residuals_real(a, b, tol)?
        .iter()
        .all(|(r, bound)| r <= bound))
}

/// Real star order via `A†A = A†B` and `AA† = BA†`.
pub fn star_leq_real_pinv(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<bool> {
    same_shape(a, b, "star_leq_real_pinv")?;
    let ap = pinv(a, tol)?;
    let (r1, b1) = eq_residual(&(&ap * a), &(&ap * b), tol);
    let (r2, b2) = eq_residual(&(a * &ap), &(b * &ap), tol);
    Ok(r1 <= b1 && r2 <= b2)
}

/// Shared orthogonal frame of a star-ordered pair:
/// `a = U·diag(T₁, 0, 0)·Vᵀ`, `b = U·diag(T₁, T₂, 0)·Vᵀ`.
#[derive(Clone, Debug)]
pub struct StarDecomposition {
    pub u: Matrix,
    pub v: Matrix,
    /// Positive diagonal of `T₁`.
    pub t1: Vec<f64>,
    /// Positive diagonal of `T₂`.
    pub t2: Vec<f64>,
    pub split_rows: [usize; 3],
    pub split_cols: [usize; 3],
}

impl StarDecomposition {
    /// Assembles a frame from its parts, checking that the splits match.
    pub fn new(u: Matrix, v: Matrix, t1: Vec<f64>, t2: Vec<f64>) -> Result<Self> {
        let (m, n) = (u.nrows(), v.nrows());
        let (a, r) = (t1.len(), t2.len());
        if u.ncols() != m || v.ncols() != n || a + r > m.min(n) {
            return Err(Error::Dimension {
                op: "StarDecomposition::new",
                left: u.shape(),
                right: v.shape(),
            });
        }
        Ok(Self {
            u,
            v,
            t1,
            t2,
            split_rows: [a, r, m - a - r],
            split_cols: [a, r, n - a - r],
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u.nrows(), self.v.nrows())
    }

    /// `(rank a, rank b)`.
    pub fn ranks(&self) -> (usize, usize) {
        (self.t1.len(), self.t1.len() + self.t2.len())
    }

    fn diag_in_basis(&self, with_t2: bool) -> Matrix {
        let (m, n) = self.shape();
        let mut s = Matrix::zeros(m, n);
        for (i, &t) in self.t1.iter().enumerate() {
            s[(i, i)] = t;
        }
        if with_t2 {
            let a = self.t1.len();
            for (i, &t) in self.t2.iter().enumerate() {
                s[(a + i, a + i)] = t;
            }
        }
        s
    }

    /// `U·diag(T₁,0,0)·Vᵀ`.
    pub fn lower(&self) -> Matrix {
        self.from_basis(&self.diag_in_basis(false))
    }

    /// `U·diag(T₁,T₂,0)·Vᵀ`.
    pub fn upper(&self) -> Matrix {
        self.from_basis(&self.diag_in_basis(true))
    }

    /// `Uᵀ·x·V`.
    pub fn to_basis(&self, x: &Matrix) -> Matrix {
        self.u.transpose() * x * &self.v
    }

    /// `U·y·Vᵀ`.
    pub fn from_basis(&self, y: &Matrix) -> Matrix {
        &self.u * y * self.v.transpose()
    }

    pub fn to_blocks(&self, x: &Matrix) -> Result<BlockGrid> {
        to_blocks(x, self)
    }

    pub fn from_blocks(&self, grid: &BlockGrid) -> Result<Matrix> {
        from_blocks(grid, self)
    }
}

/// Simultaneous decomposition of a pair with `a ≤* b`.
///
/// `U₁, V₁, T₁` come from the SVD of `a`, `U₂, V₂, T₂` from the SVD of the
/// residual `b − a`; the remaining columns complete both bases. Fails if the
/// pair is not star ordered or if the residual leaks into `a`'s row or
/// column space.
pub fn star_decompose(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<StarDecomposition> {
    let res = star_residuals_real(a, b, tol)?;
    if res.iter().any(|(r, bound)| r > bound) {
        return Err(Error::OrderViolation {
            what: "real parts are not star ordered".into(),
            residuals: res.iter().map(|(r, _)| *r).collect(),
        });
    }
    let (m, n) = a.shape();
    let fa = svd(a, tol)?;
    let ra = fa.rank;
    let u1 = fa.u.columns(0, ra).into_owned();
    let v1 = fa.v.columns(0, ra).into_owned();

    let d = b - a;
    let fd = svd(&d, tol)?;
    let scale = fa.sigma.first().copied().unwrap_or(0.0).max(fd.sigma.first().copied().unwrap_or(0.0));
    let rd = fd.sigma.iter().filter(|&&s| s > tol.rank_rel_tol * scale).count();

    let leak_cols = (u1.transpose() * &d).norm();
    let leak_rows = (&d * &v1).norm();
    let leak_bound = tol.bound(a.norm(), b.norm());
    if leak_cols > leak_bound || leak_rows > leak_bound {
        return Err(Error::OrderViolation {
            what: "b − a overlaps the column or row space of a".into(),
            residuals: vec![leak_cols, leak_rows],
        });
    }

    let mut uc = Matrix::zeros(m, ra + rd);
    uc.columns_mut(0, ra).copy_from(&u1);
    uc.columns_mut(ra, rd).copy_from(&fd.u.columns(0, rd));
    let mut vc = Matrix::zeros(n, ra + rd);
    vc.columns_mut(0, ra).copy_from(&v1);
    vc.columns_mut(ra, rd).copy_from(&fd.v.columns(0, rd));

    StarDecomposition::new(
        complete_basis(&uc),
        complete_basis(&vc),
        fa.sigma[..ra].to_vec(),
        fd.sigma[..rd].to_vec(),
    )
}

/// 3×3 partition of a matrix expressed in a [`StarDecomposition`] basis.
///
/// Blocks are numbered 1–9 row-major, so block 5 is the `(b−a)×(b−a)`
/// centre and block 9 the trailing null-space corner.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGrid {
    pub split_rows: [usize; 3],
    pub split_cols: [usize; 3],
    blocks: Vec<Matrix>,
}

impl BlockGrid {
    pub fn zeros(split_rows: [usize; 3], split_cols: [usize; 3]) -> Self {
        let blocks = (0..9)
            .map(|k| Matrix::zeros(split_rows[k / 3], split_cols[k % 3]))
            .collect();
        Self {
            split_rows,
            split_cols,
            blocks,
        }
    }

    /// Partitions a basis-coordinate matrix by the given splits.
    pub fn from_basis(y: &Matrix, split_rows: [usize; 3], split_cols: [usize; 3]) -> Result<Self> {
        let (m, n) = (split_rows.iter().sum(), split_cols.iter().sum());
        if y.shape() != (m, n) {
            return Err(Error::Dimension {
                op: "BlockGrid::from_basis",
                left: y.shape(),
                right: (m, n),
            });
        }
        let ro = [0, split_rows[0], split_rows[0] + split_rows[1]];
        let co = [0, split_cols[0], split_cols[0] + split_cols[1]];
        let blocks = (0..9)
            .map(|k| {
                let (i, j) = (k / 3, k % 3);
                y.view((ro[i], co[j]), (split_rows[i], split_cols[j])).into_owned()
            })
            .collect();
        Ok(Self {
            split_rows,
            split_cols,
            blocks,
        })
    }

    /// Block `k` in 1..=9.
    pub fn block(&self, k: usize) -> &Matrix {
        &self.blocks[k - 1]
    }

    pub fn set_block(&mut self, k: usize, value: Matrix) -> Result<()> {
        let expected = self.blocks[k - 1].shape();
        if value.shape() != expected {
            return Err(Error::Dimension {
                op: "BlockGrid::set_block",
                left: value.shape(),
                right: expected,
            });
        }
        self.blocks[k - 1] = value;
        Ok(())
    }

    pub fn block_mut(&mut self, k: usize) -> &mut Matrix {
        &mut self.blocks[k - 1]
    }

    /// Reassembles the basis-coordinate matrix.
    pub fn assemble(&self) -> Matrix {
        let (m, n) = (self.split_rows.iter().sum(), self.split_cols.iter().sum());
        let mut y = Matrix::zeros(m, n);
        let ro = [0, self.split_rows[0], self.split_rows[0] + self.split_rows[1]];
        let co = [0, self.split_cols[0], self.split_cols[0] + self.split_cols[1]];
        for k in 0..9 {
            let (i, j) = (k / 3, k % 3);
            y.view_mut((ro[i], co[j]), (self.split_rows[i], self.split_cols[j]))
                .copy_from(&self.blocks[k]);
        }
        y
    }
}

/// Partition of `Uᵀ·x·V` by the decomposition's splits.
pub fn to_blocks(x: &Matrix, dec: &StarDecomposition) -> Result<BlockGrid> {
    if x.shape() != dec.shape() {
        return Err(Error::Dimension {
            op: "to_blocks",
            left: x.shape(),
            right: dec.shape(),
        });
    }
    BlockGrid::from_basis(&dec.to_basis(x), dec.split_rows, dec.split_cols)
}

/// Inverse of [`to_blocks`].
pub fn from_blocks(grid: &BlockGrid, dec: &StarDecomposition) -> Result<Matrix> {
    if grid.split_rows != dec.split_rows || grid.split_cols != dec.split_cols {
        return Err(Error::Dimension {
            op: "from_blocks",
            left: (grid.split_rows.iter().sum(), grid.split_cols.iter().sum()),
            right: dec.shape(),
        });
    }
    Ok(dec.from_basis(&grid.assemble()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::matrix_from_rows;
    use crate::fixtures;

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_diagonal(&DVector::from_row_slice(d))
    }

    fn orthogonality_defect(q: &Matrix) -> f64 {
        (q.transpose() * q - Matrix::identity(q.ncols(), q.ncols())).norm()
    }

    #[test]
    fn svd_of_diagonals() {
        let tol = Tolerances::default();
        let f = svd(&diag(&[1.0, 0.0, 0.0]), &tol).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.sigma, vec![1.0, 0.0, 0.0]);

        let f = svd(&diag(&[1.0, 2.0, 0.0]), &tol).unwrap();
        assert_eq!(f.rank, 2);
        assert!((f.sigma[0] - 2.0).abs() < 1e-15 && (f.sigma[1] - 1.0).abs() < 1e-15);
        assert!(orthogonality_defect(&f.u) < 1e-12);
        assert!((f.reconstruct() - diag(&[1.0, 2.0, 0.0])).norm() < 1e-12);

        assert_eq!(svd(&Matrix::zeros(3, 4), &tol).unwrap().rank, 0);
    }

    #[test]
    fn svd_rectangular_full_factors() {
        let a = matrix_from_rows(&[&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 6.0, 8.5]]).unwrap();
        let f = svd(&a, &Tolerances::default()).unwrap();
        assert_eq!(f.u.shape(), (2, 2));
        assert_eq!(f.v.shape(), (4, 4));
        assert!(orthogonality_defect(&f.v) < 1e-12);
        assert!((f.reconstruct() - &a).norm() <= 1e-10 * a.norm());
        assert_eq!(f.rank, 2);
    }

    #[test]
    fn pinv_examples() {
        let tol = Tolerances::default();
        let p = pinv(&diag(&[1.0, 2.0, 0.0]), &tol).unwrap();
        assert!((p - diag(&[1.0, 0.5, 0.0])).norm() < 1e-15);
        assert_eq!(pinv(&Matrix::zeros(2, 3), &tol).unwrap(), Matrix::zeros(3, 2));

        let c = std::f64::consts::FRAC_1_SQRT_2;
        let q = matrix_from_rows(&[&[c, -c], &[c, c]]).unwrap();
        assert!((pinv(&q, &tol).unwrap() - q.transpose()).norm() < 1e-14);
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerances::default();
        assert_eq!(rank(&diag(&[1.0, 0.0, 0.0]), &tol).unwrap(), 1);
        assert_eq!(rank(&Matrix::from_element(3, 3, 1.0), &tol).unwrap(), 1);

        // [[A₀, A], [A, 0]] for the F6 fixture: 2·rk(A)
        let f6 = fixtures::f6();
        let mut block = Matrix::zeros(6, 6);
        block.view_mut((0, 0), (3, 3)).copy_from(f6.dual());
        block.view_mut((0, 3), (3, 3)).copy_from(f6.real());
        block.view_mut((3, 0), (3, 3)).copy_from(f6.real());
        assert_eq!(rank(&block, &tol).unwrap(), 2);
    }

    #[test]
    fn real_star_order_examples() {
        let tol = Tolerances::default();
        let a = diag(&[1.0, 0.0, 0.0]);
        let b = diag(&[1.0, 1.0, 0.0]);
        assert!(star_leq_real(&a, &b, &tol).unwrap());
        assert!(star_leq_real(&a, &a, &tol).unwrap());
        assert!(!star_leq_real(&b, &a, &tol).unwrap());
        assert!(star_leq_real_pinv(&a, &b, &tol).unwrap());
        assert!(!star_leq_real_pinv(&b, &a, &tol).unwrap());
        assert!(star_leq_real(&a, &Matrix::zeros(2, 2), &tol).is_err());
    }

    #[test]
    fn decompose_canonical_pair() {
        let tol = Tolerances::default();
        let a = diag(&[1.0, 0.0, 0.0]);
        let b = diag(&[1.0, 2.0, 0.0]);
        let dec = star_decompose(&a, &b, &tol).unwrap();
        assert_eq!(dec.t1, vec![1.0]);
        assert_eq!(dec.t2, vec![2.0]);
        assert_eq!(dec.split_rows, [1, 1, 1]);
        assert!((dec.u.abs() - Matrix::identity(3, 3)).norm() < 1e-12);
        assert!((dec.lower() - &a).norm() < 1e-12);
        assert!((dec.upper() - &b).norm() < 1e-12);

        let same = star_decompose(&b, &b, &tol).unwrap();
        assert!(same.t2.is_empty());
        assert_eq!(same.ranks(), (2, 2));
    }

    #[test]
    fn decompose_rejects_unordered_pair() {
        let err = star_decompose(&diag(&[1.0, 1.0, 0.0]), &diag(&[1.0, 0.0, 0.0]), &Tolerances::default())
            .unwrap_err();
        assert!(matches!(err, Error::OrderViolation { .. }));
    }

    #[test]
    fn blocks_of_fixture_dual_part() {
        let tol = Tolerances::default();
        let f6 = fixtures::f6();
        let dec = star_decompose(&diag(&[1.0, 0.0, 0.0]), &diag(&[1.0, 2.0, 0.0]), &tol).unwrap();
        // the decomposition may flip signs of matching U/V columns; fix the frame explicitly
        let dec = StarDecomposition::new(Matrix::identity(3, 3), Matrix::identity(3, 3), dec.t1, dec.t2).unwrap();
        let g = to_blocks(f6.dual(), &dec).unwrap();
        let expect = [1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 7.0, 0.0, 0.0];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(g.block(k + 1)[(0, 0)], *e, "block {}", k + 1);
        }
        assert!((from_blocks(&g, &dec).unwrap() - f6.dual()).norm() < 1e-15);

        let z = to_blocks(&Matrix::zeros(3, 3), &dec).unwrap();
        assert_eq!(z, BlockGrid::zeros([1, 1, 1], [1, 1, 1]));
    }

    #[test]
    fn grid_split_mismatch_is_an_error() {
        let dec = StarDecomposition::new(Matrix::identity(3, 3), Matrix::identity(3, 3), vec![1.0], vec![]).unwrap();
        let g = BlockGrid::zeros([1, 1, 1], [1, 1, 1]);
        assert!(from_blocks(&g, &dec).is_err());
        assert!(to_blocks(&Matrix::zeros(2, 3), &dec).is_err());
        let mut g = g;
        assert!(g.set_block(5, Matrix::zeros(2, 1)).is_err());
    }
}
