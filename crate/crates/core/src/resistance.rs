//! Resistance-distance matrices.
//!
//! Two independent routes: [`resistance_oracle`] goes through the Laplacian
//! group inverse of an explicit graph, while the `rd_*` constructors fill
//! in the closed-form block values for each coalescence family. Both produce
//! matrices in the canonical vertex order of [`crate::family::build_family`].

use nalgebra::DMatrix;

use crate::family::{Family, FamilySpec};
use crate::graph::{laplacian, Graph, GraphError};
use crate::linalg::{
    checked_inverse, laplacian_pseudoinverse, one_inverse_block, GenInverse, InverseKind, LinalgError,
    SymMatrix,
};

/// Slack allowed on the metric checks and on negative off-diagonal entries.
pub const METRIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResistanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("generalized inverse gives r[{i}][{j}] = {value:e} < 0; not a {{1}}-inverse of a connected Laplacian")]
    InconsistentInverse { i: usize, j: usize, value: f64 },
    #[error("matrices have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Laplacian group inverse of an explicit graph.
    Oracle,
    /// Some other generalized inverse of the Laplacian.
    GeneralizedInverse(InverseKind),
    /// Closed-form block values for the named family.
    ClosedForm(Family),
}

/// Symmetric, zero-diagonal matrix of pairwise effective resistances (ohms,
/// every edge 1 Ω).
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceMatrix {
    entries: SymMatrix,
    provenance: Provenance,
}

/// First violated metric property, if any.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Negative { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
    NotFinite { i: usize, j: usize },
}

impl ResistanceMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &SymMatrix {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Largest entrywise absolute difference, with the position where it
    /// occurs (first in row-major upper-triangle order on ties).
    pub fn max_deviation(&self, other: &Self) -> Result<(f64, (usize, usize)), ResistanceError> {
        if self.dim() != other.dim() {
            return Err(ResistanceError::DimensionMismatch(self.dim(), other.dim()));
        }
        let n = self.dim();
        let mut best = (0.0, (0, n.min(2) - 1));
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - other.get(i, j)).abs();
                if d > best.0 || d.is_nan() {
                    best = (d, (i, j));
                }
            }
        }
        Ok(best)
    }

    /// Reorders vertices so that old vertex `perm[i]` becomes `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { entries: self.entries.permuted(perm), provenance: self.provenance }
    }

    /// Symmetry, zero diagonal, nonnegativity and the triangle inequality,
    /// each within `tol`.
    pub fn check_metric(&self, tol: f64) -> Result<(), MetricViolation> {
        let n = self.dim();
        for i in 0..n {
            if self.get(i, i).abs() > tol {
                return Err(MetricViolation::NonzeroDiagonal { i });
            }
            for j in 0..n {
                let v = self.get(i, j);
                if !v.is_finite() {
                    return Err(MetricViolation::NotFinite { i, j });
                }
                if (v - self.get(j, i)).abs() > tol {
                    return Err(MetricViolation::Asymmetric { i, j });
                }
                if v < -tol {
                    return Err(MetricViolation::Negative { i, j });
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let rik = self.get(i, k);
                for j in 0..n {
                    let excess = self.get(i, j) - rik - self.get(k, j);
                    if excess > tol {
                        return Err(MetricViolation::Triangle { i, j, k, excess });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `r_ij = h_ii + h_jj - h_ij - h_ji` for a {1}-inverse or group inverse `H`
/// of a connected-graph Laplacian.
pub fn resistance_from_generalized_inverse(h: &GenInverse) -> Result<ResistanceMatrix, ResistanceError> {
    let m = &h.matrix;
    let entries = SymMatrix::from_upper_fn(m.dim(), |i, j| {
        if i == j {
            0.0
        } else {
            m.get(i, i) + m.get(j, j) - m.get(i, j) - m.get(j, i)
        }
    });
    let n = entries.dim();
    for i in 0..n {
        for j in i + 1..n {
            let value = entries.get(i, j);
            if value < -METRIC_TOL || !value.is_finite() {
                return Err(ResistanceError::InconsistentInverse { i, j, value });
            }
        }
    }
    let provenance = match h.kind {
        InverseKind::GroupInverse => Provenance::Oracle,
        kind => Provenance::GeneralizedInverse(kind),
    };
    Ok(ResistanceMatrix { entries, provenance })
}

/// Resistances of a connected graph through its Laplacian group inverse.
pub fn resistance_oracle(g: &Graph) -> Result<ResistanceMatrix, ResistanceError> {
    let h = laplacian_pseudoinverse(&laplacian(g))?;
    let mut r = resistance_from_generalized_inverse(&h)?;
    r.provenance = Provenance::Oracle;
    Ok(r)
}

/// Resistances through the block {1}-inverse of the Laplacian partitioned as
/// (everything else, `tail`). Every vertex outside `tail` must be adjacent to
/// all of `tail` or to none of it.
pub fn resistance_via_block_split(g: &Graph, tail: &[usize]) -> Result<ResistanceMatrix, ResistanceError> {
    let n = g.order();
    let mut in_tail = vec![false; n];
    for &v in tail {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
        }
        in_tail[v] = true;
    }
    let head: Vec<usize> = (0..n).filter(|&v| !in_tail[v]).collect();
    if head.is_empty() || head.len() + tail.len() != n {
        return Err(GraphError::InvalidParameter(
            "split needs a nonempty head and a tail without repeats".into(),
        )
        .into());
    }
    let perm: Vec<usize> = head.iter().chain(tail).copied().collect();
    let l = laplacian(g).permuted(&perm);
    let a = head.len();
    let l2 = l.as_matrix().view((0, a), (a, n - a)).into_owned();
    let x = one_inverse_block(&l.principal(&(0..a).collect::<Vec<_>>()), &l2, &l.principal(&(a..n).collect::<Vec<_>>()))?;
    let r = resistance_from_generalized_inverse(&x)?;
    let mut inverse = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    Ok(r.permuted(&inverse))
}

/// Fills a resistance matrix block by block. `entry(bi, li, bj, lj)` gives
/// the value between local vertex `li` of block `bi` and local vertex `lj`
/// of block `bj`, and is only called with `bi <= bj` on distinct vertices.
fn from_blocks(
    sizes: &[usize],
    family: Family,
    entry: impl Fn(usize, usize, usize, usize) -> f64,
) -> ResistanceMatrix {
    let locate: Vec<(usize, usize)> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| (0..s).map(move |l| (b, l)))
        .collect();
    let entries = SymMatrix::from_upper_fn(locate.len(), |i, j| {
        if i == j {
            return 0.0;
        }
        let ((bi, li), (bj, lj)) = (locate[i], locate[j]);
        entry(bi, li, bj, lj)
    });
    ResistanceMatrix { entries, provenance: Provenance::ClosedForm(family) }
}

fn f(x: usize) -> f64 {
    x as f64
}

/// `K_{p1} ∘_k K_{p2}`, blocks (identified, `K_{p1}` rest, `K_{p2}` rest).
pub fn rd_kcoal_complete(p1: usize, p2: usize, k: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::KCoalComplete { p1, p2, k };
    spec.validate()?;
    Ok(kcoal_values(&spec, p1, p2, k))
}

fn kcoal_values(spec: &FamilySpec, p1: usize, p2: usize, k: usize) -> ResistanceMatrix {
    let t = p1 + p2 - k;
    let (p1f, p2f, kf, tf) = (f(p1), f(p2), f(k), f(t));
    let identified = 2.0 / tf;
    let id_left = ((kf + 1.0) * f(p2 - k) + 2.0 * p1f * kf) / (kf * p1f * tf);
    let id_right = ((kf + 1.0) * f(p1 - k) + 2.0 * p2f * kf) / (kf * p2f * tf);
    let left = 2.0 / p1f;
    let across = (p1f + p2f) * (kf + 1.0) / (kf * p1f * p2f);
    let right = 2.0 / p2f;
    from_blocks(&spec.block_sizes(), spec.family(), |bi, _, bj, _| match (bi, bj) {
        (0, 0) => identified,
        (0, 1) => id_left,
        (0, 2) => id_right,
        (1, 1) => left,
        (1, 2) => across,
        _ => right,
    })
}

/// Windmill `W_{n+1}^t`, blocks (center, blade 0, blade 1, ...).
pub fn rd_windmill(n: usize, t: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::Windmill { n, t };
    spec.validate()?;
    Ok(windmill_values(&spec, n))
}

fn windmill_values(spec: &FamilySpec, n: usize) -> ResistanceMatrix {
    let near = 2.0 / f(n + 1);
    let far = 4.0 / f(n + 1);
    from_blocks(&spec.block_sizes(), spec.family(), |bi, _, bj, _| {
        if bi == 0 || bi == bj {
            near
        } else {
            far
        }
    })
}

/// `(L(G) + aI)^{-1}`; positive definite for any `G` when `a > 0`.
fn shifted_inverse(g: &Graph, a: f64) -> Result<DMatrix<f64>, ResistanceError> {
    let n = g.order();
    let m = laplacian(g).as_matrix() + DMatrix::identity(n, n) * a;
    Ok(checked_inverse(&m, "L(G) + aI")?)
}

/// `K_p ∘_k (G ∨ K_k)`, blocks (identified `K_k`, `K_p` rest, `G`).
pub fn rd_join_coalescence(p: usize, k: usize, g: &Graph) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::JoinCoal { p, k, g: g.clone() };
    spec.validate()?;
    let x = shifted_inverse(g, f(k))?;
    let (pf, kf, nf) = (f(p), f(k), f(g.order()));
    let identified = 2.0 / (pf + nf);
    let id_left = (kf * (2.0 * pf + nf) + nf) / (kf * pf * (pf + nf));
    let id_g = (kf - 1.0) / (kf * (pf + nf));
    let left = 2.0 / pf;
    let left_g = (kf + 1.0) / (kf * pf);
    Ok(from_blocks(&spec.block_sizes(), spec.family(), |bi, li, bj, lj| match (bi, bj) {
        (0, 0) => identified,
        (0, 1) => id_left,
        (0, 2) => id_g + x[(lj, lj)],
        (1, 1) => left,
        (1, 2) => left_g + x[(lj, lj)],
        _ => quadratic(&x, li, lj),
    }))
}

/// `K_{1,p-1} ∘_1 (G ∨ K_1)`, blocks (center, leaves, `G`).
pub fn rd_star_coalescence(p: usize, g: &Graph) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::StarJoinCoal { p, g: g.clone() };
    spec.validate()?;
    let x = shifted_inverse(g, 1.0)?;
    Ok(from_blocks(&spec.block_sizes(), spec.family(), |bi, li, bj, lj| match (bi, bj) {
        (0, 1) => 1.0,
        (0, 2) => x[(lj, lj)],
        (1, 1) => 2.0,
        (1, 2) => 1.0 + x[(lj, lj)],
        _ => quadratic(&x, li, lj),
    }))
}

fn quadratic(x: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    x[(i, i)] + x[(j, j)] - 2.0 * x[(i, j)]
}

/// `K_{p,q} ∘_1 K_{1,n}`, blocks (identified, rest of `p` side, `q` side, leaves).
pub fn rd_bipartite_star(p: usize, q: usize, n: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::BipartiteStar { p, q, n };
    spec.validate()?;
    let (pf, qf) = (f(p), f(q));
    let same_p = 2.0 / qf;
    let across = (pf + qf - 1.0) / (pf * qf);
    let same_q = 2.0 / pf;
    Ok(from_blocks(&spec.block_sizes(), spec.family(), |bi, _, bj, _| match (bi, bj) {
        (0, 1) | (1, 1) => same_p,
        (0, 2) | (1, 2) => across,
        (0, 3) => 1.0,
        (1, 3) => (qf + 2.0) / qf,
        (2, 2) => same_q,
        (2, 3) => (qf * (pf + 1.0) + (pf - 1.0)) / (pf * qf),
        _ => 2.0,
    }))
}

/// `K_{p,q} ∘_1 K_n`, blocks (identified, rest of `p` side, `q` side, `K_n` rest).
pub fn rd_bipartite_complete(p: usize, q: usize, n: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::BipartiteComplete { p, q, n };
    spec.validate()?;
    let (pf, qf, nf) = (f(p), f(q), f(n));
    let same_p = 2.0 / qf;
    let across = (pf + qf - 1.0) / (pf * qf);
    let same_q = 2.0 / pf;
    Ok(from_blocks(&spec.block_sizes(), spec.family(), |bi, _, bj, _| match (bi, bj) {
        (0, 1) | (1, 1) => same_p,
        (0, 2) | (1, 2) => across,
        (0, 3) | (3, 3) => 2.0 / nf,
        (1, 3) => 2.0 * (qf + nf) / (qf * nf),
        (2, 2) => same_q,
        _ => (qf * (nf + 2.0 * pf) + nf * (pf - 1.0)) / (nf * pf * qf),
    }))
}

/// Pineapple `K_p^q`, blocks (identified, `K_p` rest, pendants).
pub fn rd_pineapple(p: usize, q: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::Pineapple { p, q };
    spec.validate()?;
    Ok(pineapple_values(&spec, p))
}

fn pineapple_values(spec: &FamilySpec, p: usize) -> ResistanceMatrix {
    let pf = f(p);
    from_blocks(&spec.block_sizes(), spec.family(), |bi, _, bj, _| match (bi, bj) {
        (0, 1) | (1, 1) => 2.0 / pf,
        (0, 2) => 1.0,
        (1, 2) => (pf + 2.0) / pf,
        _ => 2.0,
    })
}

/// Dandelion `D(n, l)`, blocks (path from the center, leaves).
pub fn rd_dandelion(n: usize, l: usize) -> Result<ResistanceMatrix, ResistanceError> {
    let spec = FamilySpec::Dandelion { n, l };
    spec.validate()?;
    Ok(from_blocks(&spec.block_sizes(), spec.family(), |bi, li, bj, lj| match (bi, bj) {
        (0, 0) => f(li.abs_diff(lj)),
        (0, 1) => f(li + 1),
        _ => 2.0,
    }))
}

/// Closed-form resistance matrix for any family, in the vertex order of
/// [`crate::family::build_family`].
pub fn closed_form(spec: &FamilySpec) -> Result<ResistanceMatrix, ResistanceError> {
    spec.validate()?;
    let r = match *spec {
        FamilySpec::KCoalComplete { p1, p2, k } => rd_kcoal_complete(p1, p2, k)?,
        FamilySpec::Windmill { n, t } => rd_windmill(n, t)?,
        FamilySpec::Rose3 => windmill_values(spec, 2),
        FamilySpec::JoinCoal { p, k, ref g } => rd_join_coalescence(p, k, g)?,
        FamilySpec::StarJoinCoal { p, ref g } => rd_star_coalescence(p, g)?,
        FamilySpec::BipartiteStar { p, q, n } => rd_bipartite_star(p, q, n)?,
        FamilySpec::BipartiteComplete { p, q, n } => rd_bipartite_complete(p, q, n)?,
        FamilySpec::Pineapple { p, q } => rd_pineapple(p, q)?,
        FamilySpec::Kite { p } => kcoal_values(spec, p, 2, 1),
        FamilySpec::Dandelion { n, l } => rd_dandelion(n, l)?,
    };
    Ok(r)
}
