//! Dense symmetric linear algebra on top of `nalgebra`, plus the structured
//! inverses used to derive closed-form resistances: Schur-complement block
//! inversion, the block {1}-inverse of a partitioned Laplacian, the shifted
//! group inverse and the explicit inverse of `rI - sJ`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};

pub type Matrix = DMatrix<f64>;

/// Residual tolerance for inverse identities, scaled by the max-norm of the
/// matrices involved.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Condition-number threshold above which a matrix is treated as singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Eigenvalues below this are treated as zero when testing connectivity.
pub const CONNECTIVITY_EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: entries ({i},{j}) and ({j},{i}) differ by {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{what} is singular (condition estimate {cond:e})")]
    Singular { what: &'static str, cond: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("row {row} of the off-diagonal block is neither all -1 nor all 0")]
    ColumnPattern { row: usize },
    #[error("graph is disconnected (second-smallest Laplacian eigenvalue {lambda2:e})")]
    Disconnected { lambda2: f64 },
}

/// A dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Wraps `m` after checking it is square and symmetric to
    /// `1e-12 * max(1, |m_ij|)`.
    pub fn new(m: Matrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        for i in 0..m.nrows() {
            for j in i + 1..m.ncols() {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > 1e-12 * m[(i, j)].abs().max(1.0) || diff.is_nan() {
                    return Err(LinalgError::NotSymmetric { i, j, diff });
                }
            }
        }
        Ok(Self(m))
    }

    /// Averages `m` with its transpose. For matrices that are symmetric up to
    /// rounding, such as products of symmetric factors.
    pub fn symmetrize(m: Matrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let t = m.transpose();
        Ok(Self((m + t) * 0.5))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    /// Builds the matrix from its upper triangle; `f` is called for `i <= j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize) -> Self {
        Self(Matrix::from_element(n, n, 1.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.0.amax()
    }

    /// Symmetric submatrix on `rows x rows`.
    pub fn principal(&self, rows: &[usize]) -> Self {
        Self(self.0.select_rows(rows).select_columns(rows))
    }

    /// Reorders rows and columns so that old index `perm[i]` becomes `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.principal(perm)
    }

    /// Plain-text dump: one row per line, entries separated by single spaces,
    /// 17 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in self.0.row_iter() {
            let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

impl std::ops::Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: Self) -> SymMatrix {
        SymMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: Self) -> SymMatrix {
        SymMatrix(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        SymMatrix(&self.0 * rhs)
    }
}

/// Eigenpairs with eigenvalues in ascending order; `vectors` holds the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub fn sym_eigen(m: &SymMatrix) -> SymEigen {
    let n = m.dim();
    let eig = SymmetricEigen::new(m.0.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = eig.eigenvectors.select_columns(&order);
    SymEigen { values, vectors }
}

/// Checks that `m` is symmetric before decomposing it.
pub fn sym_eigen_checked(m: Matrix) -> Result<SymEigen, LinalgError> {
    Ok(sym_eigen(&SymMatrix::new(m)?))
}

fn norm1(m: &Matrix) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Dense inverse via LU, rejecting matrices whose 1-norm condition estimate
/// exceeds [`SINGULAR_COND`].
pub fn checked_inverse(m: &Matrix, what: &'static str) -> Result<Matrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.nrows() == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(LinalgError::Singular { what, cond: f64::INFINITY })?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > SINGULAR_COND {
        return Err(LinalgError::Singular { what, cond });
    }
    Ok(inv)
}

/// Inverse of the block matrix `[[C0, C1], [C2, C3]]` through the Schur
/// complement `P = C3 - C2 C0^{-1} C1`.
///
/// The leading block is returned as `C0^{-1} + C0^{-1} C1 P^{-1} C2 C0^{-1}`,
/// which equals `(C0 - C1 C3^{-1} C2)^{-1}` whenever `C3` is invertible but
/// only requires `C0` and `P` to be.
pub fn block_inverse(c0: &Matrix, c1: &Matrix, c2: &Matrix, c3: &Matrix) -> Result<Matrix, LinalgError> {
    let (a, b) = (c0.nrows(), c3.nrows());
    if c0.ncols() != a || c3.ncols() != b || c1.shape() != (a, b) || c2.shape() != (b, a) {
        return Err(LinalgError::DimensionMismatch(format!(
            "blocks {:?} {:?} / {:?} {:?} do not tile a square matrix",
            c0.shape(),
            c1.shape(),
            c2.shape(),
            c3.shape()
        )));
    }
    let c0_inv = checked_inverse(c0, "leading block C0")?;
    let p = c3 - c2 * &c0_inv * c1;
    let p_inv = checked_inverse(&p, "Schur complement P")?;

    let upper_right = -(&c0_inv * c1 * &p_inv);
    let lower_left = -(&p_inv * c2 * &c0_inv);
    let upper_left = &c0_inv - &upper_right * c2 * &c0_inv;

    let mut out = Matrix::zeros(a + b, a + b);
    out.view_mut((0, 0), (a, a)).copy_from(&upper_left);
    out.view_mut((0, a), (a, b)).copy_from(&upper_right);
    out.view_mut((a, 0), (b, a)).copy_from(&lower_left);
    out.view_mut((a, a), (b, b)).copy_from(&p_inv);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseKind {
    /// `M X M = M`.
    OneInverse,
    /// `M X M = M`, `X M X = X`, `M X = X M`.
    GroupInverse,
    OrdinaryInverse,
}

/// A generalized inverse together with the identities it is claimed to satisfy.
#[derive(Debug, Clone)]
pub struct GenInverse {
    pub matrix: SymMatrix,
    pub kind: InverseKind,
}

/// Max-abs residuals of the three group-inverse identities.
#[derive(Debug, Clone, Copy)]
pub struct InverseResiduals {
    /// `|M X M - M|`
    pub mxm: f64,
    /// `|X M X - X|`
    pub xmx: f64,
    /// `|M X - X M|`
    pub commute: f64,
}

impl GenInverse {
    pub fn residuals(&self, m: &SymMatrix) -> InverseResiduals {
        let (m, x) = (&m.0, &self.matrix.0);
        let mx = m * x;
        let xm = x * m;
        InverseResiduals {
            mxm: (&mx * m - m).amax(),
            xmx: (&xm * x - x).amax(),
            commute: (&mx - &xm).amax(),
        }
    }

    /// Whether the identities promised by `kind` hold for `m` within
    /// [`IDENTITY_TOL`] scaled by the larger max-norm.
    pub fn satisfies(&self, m: &SymMatrix) -> bool {
        let scale = m.max_norm().max(self.matrix.max_norm()).max(1.0);
        let tol = IDENTITY_TOL * scale * scale;
        let r = self.residuals(m);
        match self.kind {
            InverseKind::OneInverse => r.mxm <= tol,
            InverseKind::GroupInverse | InverseKind::OrdinaryInverse => {
                r.mxm <= tol && r.xmx <= tol && r.commute <= tol
            }
        }
    }
}

/// Group inverse of a symmetric matrix. For symmetric matrices this is the
/// Moore-Penrose inverse, assembled from eigenpairs with `|λ|` above
/// `1e-9 * max(1, max |λ|)`.
pub fn symmetric_group_inverse(m: &SymMatrix) -> SymMatrix {
    let eig = sym_eigen(m);
    let scale = eig.values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let mut out = Matrix::zeros(m.dim(), m.dim());
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > CONNECTIVITY_EIGEN_TOL * scale {
            let v = eig.vectors.column(i);
            out += (v * v.transpose()) / lambda;
        }
    }
    SymMatrix::symmetrize(out).expect("square by construction")
}

/// {1}-inverse of the partitioned Laplacian `[[L1, L2], [L2ᵀ, L3]]` in which
/// every row of `L2` (column of `L2ᵀ`) is all `-1` or all `0`:
/// `blockdiag(L1^{-1}, S^#)` with `S = L3 - L2ᵀ L1^{-1} L2`.
pub fn one_inverse_block(l1: &SymMatrix, l2: &Matrix, l3: &SymMatrix) -> Result<GenInverse, LinalgError> {
    let (a, b) = (l1.dim(), l3.dim());
    if l2.shape() != (a, b) {
        return Err(LinalgError::DimensionMismatch(format!(
            "L2 is {:?}, expected ({a}, {b})",
            l2.shape()
        )));
    }
    for (row, r) in l2.row_iter().enumerate() {
        let all = |target: f64| r.iter().all(|&x| (x - target).abs() <= 1e-12);
        if !(all(-1.0) || all(0.0)) {
            return Err(LinalgError::ColumnPattern { row });
        }
    }
    let l1_inv = checked_inverse(&l1.0, "leading block L1")?;
    let schur = SymMatrix::symmetrize(&l3.0 - l2.transpose() * &l1_inv * l2)?;
    let schur_sharp = symmetric_group_inverse(&schur);

    let mut x = Matrix::zeros(a + b, a + b);
    x.view_mut((0, 0), (a, a)).copy_from(&l1_inv);
    x.view_mut((a, a), (b, b)).copy_from(&schur_sharp.0);
    Ok(GenInverse {
        matrix: SymMatrix::symmetrize(x)?,
        kind: InverseKind::OneInverse,
    })
}

/// `(L + aI)^{-1} - (1/(a n)) J`, the group inverse of `L + aI - (a/n) J`
/// for a Laplacian `L` of order `n`.
pub fn shifted_group_inverse(l: &SymMatrix, a: f64) -> Result<SymMatrix, LinalgError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(LinalgError::InvalidParameter(format!("shift a = {a} must be positive")));
    }
    let n = l.dim();
    let shifted = &l.0 + Matrix::identity(n, n) * a;
    let inv = checked_inverse(&shifted, "L + aI")?;
    SymMatrix::symmetrize(inv - Matrix::from_element(n, n, 1.0 / (a * n as f64)))
}

/// Explicit `(rI_n - sJ_n)^{-1} = (1/r) I + s / (r (r - n s)) J`.
pub fn ri_minus_sj_inverse(r: f64, s: f64, n: usize) -> Result<SymMatrix, LinalgError> {
    if n == 0 {
        return Err(LinalgError::InvalidParameter("dimension must be positive".into()));
    }
    if !(r > 0.0 && r.is_finite() && s.is_finite()) {
        return Err(LinalgError::InvalidParameter(format!("need finite r > 0, got r = {r}, s = {s}")));
    }
    let gap = r - n as f64 * s;
    if gap.abs() <= 1e-12 * r.max((n as f64 * s).abs()) {
        return Err(LinalgError::Singular { what: "rI - sJ", cond: f64::INFINITY });
    }
    let off = s / (r * gap);
    Ok(SymMatrix::from_upper_fn(n, |i, j| if i == j { 1.0 / r + off } else { off }))
}

/// Group inverse `L^#` of a connected-graph Laplacian via the rank-one shift
/// `L^# = (L + J/n)^{-1} - J/n`.
pub fn laplacian_pseudoinverse(l: &SymMatrix) -> Result<GenInverse, LinalgError> {
    let n = l.dim();
    if n == 0 {
        return Err(LinalgError::InvalidParameter("empty Laplacian".into()));
    }
    if n > 1 {
        let lambda2 = sym_eigen(l).values[1];
        if lambda2 < CONNECTIVITY_EIGEN_TOL {
            return Err(LinalgError::Disconnected { lambda2 });
        }
    }
    let j = Matrix::from_element(n, n, 1.0 / n as f64);
    let inv = checked_inverse(&(&l.0 + &j), "L + J/n")?;
    Ok(GenInverse {
        matrix: SymMatrix::symmetrize(inv - j)?,
        kind: InverseKind::GroupInverse,
    })
}
