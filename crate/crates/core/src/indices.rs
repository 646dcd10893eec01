//! Resistance-based graph indices, computed two ways: from their definitions
//! over a resistance matrix, and from the printed closed-form formulas for
//! the coalescence families. [`verify`] compares the two.

use std::fmt;
use std::str::FromStr;

use crate::family::{build_family, Family, FamilySpec};
use crate::graph::{Graph, GraphError};
use crate::linalg::sym_eigen;
use crate::rational::Q;
use crate::resistance::{closed_form, resistance_oracle, ResistanceError, ResistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexKind {
    Kirchhoff,
    Kemeny,
    AdditiveDk,
    MultiplicativeDk,
    MixedDk,
    ResistanceEnergy,
}

impl IndexKind {
    pub const ALL: [IndexKind; 6] = [
        IndexKind::Kirchhoff,
        IndexKind::Kemeny,
        IndexKind::AdditiveDk,
        IndexKind::MultiplicativeDk,
        IndexKind::MixedDk,
        IndexKind::ResistanceEnergy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Kirchhoff => "kirchhoff",
            IndexKind::Kemeny => "kemeny",
            IndexKind::AdditiveDk => "additive_dk",
            IndexKind::MultiplicativeDk => "multiplicative_dk",
            IndexKind::MixedDk => "mixed_dk",
            IndexKind::ResistanceEnergy => "resistance_energy",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IndexKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| IndexError::UnknownIndex(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Definition,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexValue {
    pub index: IndexKind,
    pub value: f64,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error(transparent)]
    Resistance(#[from] ResistanceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has no edges")]
    NoEdges,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("resistance matrix is {r}x{r} but the graph has {n} vertices")]
    DimensionMismatch { r: usize, n: usize },
    #[error("no closed-form {index} formula for the {family} family")]
    Unsupported { index: IndexKind, family: Family },
    #[error("closed-form {index} formula divides by zero at {spec}")]
    UndefinedFormula { index: IndexKind, spec: String },
    #[error("closed-form {index} formula overflows at {spec}")]
    Overflow { index: IndexKind, spec: String },
    #[error("unknown index `{0}`")]
    UnknownIndex(String),
}

/// Sum of `r_ij` over unordered pairs.
pub fn kirchhoff_index(r: &ResistanceMatrix) -> f64 {
    pair_sum(r, |_, _| 1.0)
}

fn pair_sum(r: &ResistanceMatrix, weight: impl Fn(usize, usize) -> f64) -> f64 {
    let n = r.dim();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| weight(i, j) * r.get(i, j))
        .sum()
}

fn degrees_for(g: &Graph, r: &ResistanceMatrix) -> Result<Vec<f64>, IndexError> {
    if r.dim() != g.order() {
        return Err(IndexError::DimensionMismatch { r: r.dim(), n: g.order() });
    }
    Ok(g.degrees().into_iter().map(|d| d as f64).collect())
}

/// `(1/4m) Σ d_i d_j r_ij` over ordered pairs `(i, j)`.
pub fn kemeny_constant(g: &Graph, r: &ResistanceMatrix) -> Result<f64, IndexError> {
    let d = degrees_for(g, r)?;
    if g.size() == 0 {
        return Err(IndexError::NoEdges);
    }
    let ordered = 2.0 * pair_sum(r, |i, j| d[i] * d[j]);
    Ok(ordered / (4.0 * g.size() as f64))
}

/// `Σ_{i<j} (d_i + d_j) r_ij`.
pub fn additive_dk(g: &Graph, r: &ResistanceMatrix) -> Result<f64, IndexError> {
    let d = degrees_for(g, r)?;
    Ok(pair_sum(r, |i, j| d[i] + d[j]))
}

/// `Σ_{i<j} d_i d_j r_ij`.
pub fn multiplicative_dk(g: &Graph, r: &ResistanceMatrix) -> Result<f64, IndexError> {
    let d = degrees_for(g, r)?;
    Ok(pair_sum(r, |i, j| d[i] * d[j]))
}

/// `Σ_{i<j} (d_i/d_j + d_j/d_i) r_ij`; undefined with an isolated vertex.
pub fn mixed_dk(g: &Graph, r: &ResistanceMatrix) -> Result<f64, IndexError> {
    let d = degrees_for(g, r)?;
    if let Some(v) = d.iter().position(|&x| x == 0.0) {
        return Err(IndexError::IsolatedVertex(v));
    }
    Ok(pair_sum(r, |i, j| d[i] / d[j] + d[j] / d[i]))
}

/// Sum of the absolute eigenvalues of the resistance matrix.
pub fn resistance_energy(r: &ResistanceMatrix) -> f64 {
    sym_eigen(r.entries()).values.iter().map(|v| v.abs()).sum()
}

pub fn definition_value(index: IndexKind, g: &Graph, r: &ResistanceMatrix) -> Result<f64, IndexError> {
    match index {
        IndexKind::Kirchhoff => Ok(kirchhoff_index(r)),
        IndexKind::Kemeny => kemeny_constant(g, r),
        IndexKind::AdditiveDk => additive_dk(g, r),
        IndexKind::MultiplicativeDk => multiplicative_dk(g, r),
        IndexKind::MixedDk => mixed_dk(g, r),
        IndexKind::ResistanceEnergy => Ok(resistance_energy(r)),
    }
}

/// All six indices by definition, in [`IndexKind::ALL`] order.
pub fn all_definition_values(g: &Graph, r: &ResistanceMatrix) -> Result<Vec<IndexValue>, IndexError> {
    IndexKind::ALL
        .into_iter()
        .map(|index| {
            Ok(IndexValue { index, value: definition_value(index, g, r)?, route: Route::Definition })
        })
        .collect()
}

/// Indices for which a closed-form formula exists for `family`.
pub fn supported_indices(family: Family) -> &'static [IndexKind] {
    use IndexKind::*;
    match family {
        Family::KCoalComplete | Family::Kite => &[Kirchhoff, Kemeny, AdditiveDk, MultiplicativeDk, MixedDk],
        Family::Windmill | Family::Rose3 | Family::Pineapple | Family::Dandelion => &[Kirchhoff, Kemeny],
        _ => &[],
    }
}

/// Exact value of the printed closed-form formula for `index` on `spec`.
///
/// The formulas are evaluated as printed, including the ones that disagree
/// with the definition. A term whose leading multiplicity `(p1 - k)` or
/// `(p2 - k)` is zero sums over an empty vertex block and contributes zero.
pub fn paper_formula_exact(index: IndexKind, spec: &FamilySpec) -> Result<num_rational::Ratio<i128>, IndexError> {
    spec.validate()?;
    let family = spec.family();
    if !supported_indices(family).contains(&index) {
        return Err(IndexError::Unsupported { index, family });
    }
    let q = match *spec {
        FamilySpec::KCoalComplete { p1, p2, k } => kcoal_formula(index, p1, p2, k),
        FamilySpec::Kite { p } => kcoal_formula(index, p, 2, 1),
        FamilySpec::Windmill { n, t } => windmill_formula(index, n, t),
        FamilySpec::Rose3 => windmill_formula(index, 2, 3),
        FamilySpec::Pineapple { p, q } => pineapple_formula(index, p, q),
        FamilySpec::Dandelion { n, l } => dandelion_formula(index, n, l),
        _ => unreachable!("filtered by supported_indices"),
    };
    match q {
        Q::Val(v) => Ok(v),
        Q::DivByZero => Err(IndexError::UndefinedFormula { index, spec: spec.to_string() }),
        Q::Overflow => Err(IndexError::Overflow { index, spec: spec.to_string() }),
    }
}

pub fn paper_formula(index: IndexKind, spec: &FamilySpec) -> Result<f64, IndexError> {
    let v = paper_formula_exact(index, spec)?;
    Ok(*v.numer() as f64 / *v.denom() as f64)
}

fn unless_empty(block: usize, term: impl FnOnce() -> Q) -> Q {
    if block == 0 {
        Q::from(0)
    } else {
        term()
    }
}

fn kcoal_formula(index: IndexKind, p1u: usize, p2u: usize, ku: usize) -> Q {
    let (p1, p2, k) = (Q::int(p1u), Q::int(p2u), Q::int(ku));
    let t = p1 + p2 - k;
    let (left, right) = (p1u - ku, p2u - ku);

    // Shared by the Kemeny and multiplicative degree-Kirchhoff formulas.
    let bracket = || {
        (t - 1) / t
            * (p1 * (t - 1) * (p2 * k * (k - 1) + (p2 - 1) * (p2 - k) * ((k + 1) * (p1 - k) + 2 * p2 * k))
                + p2 * (p1 - 1) * (p1 - k) * (2 * p1 * k + (p2 - k) * (k + 1)))
            + p1 * (p2 - k) * (p2 - 1).pow(2) * (p2 - k - 1)
            + (p1 - k) * (p1 - 1) * (p2 * k * (p1 - k - 1) * (p1 - 1) + (p2 - k) * (p2 - 1) * (p1 + p2) * (k + 1))
                / k
    };

    match index {
        IndexKind::Kirchhoff => {
            let paired = unless_empty(right, || {
                (p1 - k)
                    * (p2 - k)
                    * (k + 1)
                    * (p1 * (k + t)
                        + p2
                        + p2 * k / (k + 1)
                        + p2 * k * (p1 * k + p1 * t - t) / ((p2 - k) * (k + 1)))
            });
            (paired + k * p1 * (p2 - k) * (p2 * (t + 2 * k) - t * (k + 1) + k * p2 * (k - 1))) / (k * p1 * p2 * t)
        }
        IndexKind::Kemeny => {
            let choose2 = |x: Q| x * (x - 1) / 2;
            let m = choose2(p1) + choose2(p2) - choose2(k);
            bracket() / (2 * m * p1 * p2)
        }
        IndexKind::MultiplicativeDk => bracket() / (p1 * p2),
        IndexKind::AdditiveDk => {
            (2 * p1 * k * (k - 1) * (t - 1) + k * (p1 - k) * (2 * t - 2) * (2 * t + p2 - k)) / (p1 * t)
                + (p1 - k) * (p2 - k) * (p1 + p2 - 2) * (p1 + p2) * (k + 1) / (k * p1 * p2)
                + (p2 - k) * (p1 + 2 * p2 - k - 2) * ((k + 1) * (p1 - k) + 2 * p2 * k) / (p2 * t)
                + (2 * p2 * (p1 - k) * (p1 - k - 1) * (p1 - 1) + 2 * p1 * (p2 - k) * (p2 - k - 1) * (p2 - 1))
                    / (p1 * p2)
        }
        IndexKind::MixedDk => {
            2 * k * (k - 1) / t
                + unless_empty(left, || {
                    (p1 - k) * ((t - 1).pow(2) + (p1 - 1).pow(2)) * (k * (2 * t) + (p2 - k))
                        / (p1 * (p1 - 1) * t * (t - 1))
                })
                + unless_empty(right, || {
                    (p2 - k) * ((t - 1).pow(2) + (p2 - 1).pow(2)) * ((k + 1) * (p1 - k) + 2 * p2 * k)
                        / (p2 * (p2 - 1) * t * (t - 1))
                })
                + 2 * (p1 - k) * (p1 - k - 1) / p1
                + 2 * (p2 - k) * (p2 - k - 1) / p2
                + unless_empty(left.min(right), || {
                    (p1 - k) * (p2 - k) * ((p1 - 1).pow(2) + (p2 - 1).pow(2)) * (p1 + p2) * (k + 1)
                        / (k * p1 * p2 * (p1 - 1) * (p2 - 1))
                })
        }
        IndexKind::ResistanceEnergy => unreachable!(),
    }
}

fn windmill_formula(index: IndexKind, n: usize, t: usize) -> Q {
    let (n, t) = (Q::int(n), Q::int(t));
    match index {
        IndexKind::Kirchhoff => (2 * n.pow(2) * t.pow(2) - n.pow(2) * t + n * t) / (n + 1),
        _ => n.pow(2) * (2 * t - 1) / (n + 1),
    }
}

fn pineapple_formula(index: IndexKind, p: usize, q: usize) -> Q {
    let (p, q) = (Q::int(p), Q::int(q));
    match index {
        IndexKind::Kirchhoff => q * (p + q + 3) + p + 1 - 2 / p * (q + 1),
        _ => {
            (p.pow(4) - p.pow(3) + p.pow(3) * q + 3 * p.pow(2) * q + 2 * p * q.pow(2) - 3 * p.pow(2) - 7 * p * q
                + 7 * p
                + 4 * q
                - 2)
                / (p * (p - 1) + 2 * q)
        }
    }
}

fn dandelion_formula(index: IndexKind, n: usize, l: usize) -> Q {
    let (n, l) = (Q::int(n), Q::int(l));
    match index {
        IndexKind::Kirchhoff => (l.pow(2) * (3 * n - 2 * l + 2) + l * (5 - 9 * n) + 6 * (n.pow(2) - 1)) / 6,
        _ => {
            ((n + 1) * (2 * l.pow(2) - 1) + 2 * n * (n - 3 * l)) / (2 * (n - 1))
                + l * (5 - 2 * l.pow(2)) / (3 * (n - 1))
        }
    }
}

/// What a verification compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerifyTarget {
    /// Closed-form resistance matrix against the oracle, entrywise.
    Resistance,
    Index(IndexKind),
}

impl VerifyTarget {
    pub fn name(self) -> &'static str {
        match self {
            VerifyTarget::Resistance => "resistance",
            VerifyTarget::Index(k) => k.name(),
        }
    }
}

impl fmt::Display for VerifyTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifyTarget {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "resistance" {
            Ok(VerifyTarget::Resistance)
        } else {
            s.parse().map(VerifyTarget::Index)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

/// One formula-versus-definition comparison.
///
/// For [`VerifyTarget::Resistance`] the two values are the closed-form and
/// oracle entries at the position of largest deviation, so `abs_diff` is the
/// max entrywise deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub spec: FamilySpec,
    pub target: VerifyTarget,
    pub formula_value: f64,
    pub oracle_value: f64,
    pub abs_diff: f64,
    /// `abs_diff / |oracle_value|`, or `abs_diff` when the oracle value is 0.
    pub rel_diff: f64,
    pub tol: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl VerificationReport {
    fn new(spec: &FamilySpec, target: VerifyTarget, formula_value: f64, oracle_value: f64, tol: f64) -> Self {
        let abs_diff = (formula_value - oracle_value).abs();
        let rel_diff = if oracle_value == 0.0 { abs_diff } else { abs_diff / oracle_value.abs() };
        let verdict = if abs_diff <= tol * oracle_value.abs().max(1.0) {
            Verdict::Match
        } else {
            Verdict::Mismatch
        };
        let note = spec
            .graph_param()
            .filter(|g| !g.is_connected())
            .map(|_| "G disconnected".to_string());
        Self {
            spec: spec.clone(),
            target,
            formula_value,
            oracle_value,
            abs_diff,
            rel_diff,
            tol,
            verdict,
            note,
        }
    }
}

/// Compares the closed form for `target` on `spec` against the definition
/// evaluated on the oracle resistance matrix of the built graph.
pub fn verify(target: VerifyTarget, spec: &FamilySpec, tol: f64) -> Result<VerificationReport, IndexError> {
    let g = build_family(spec)?;
    let oracle = resistance_oracle(&g)?;
    let (formula, reference) = match target {
        VerifyTarget::Resistance => {
            let closed = closed_form(spec)?;
            let (_, (i, j)) = closed.max_deviation(&oracle)?;
            (closed.get(i, j), oracle.get(i, j))
        }
        VerifyTarget::Index(index) => (paper_formula(index, spec)?, definition_value(index, &g, &oracle)?),
    };
    Ok(VerificationReport::new(spec, target, formula, reference, tol))
}
