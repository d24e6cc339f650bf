//! The Gelfand–Cetlin ladder: eigenvalues of trailing principal blocks.
//!
//! For `ξ ∈ H(n)` and `0 ≤ j < n`, `λ_{j1} ≥ … ≥ λ_{j(n−j)}` are the
//! eigenvalues of the bottom-right `(n−j)×(n−j)` block of `ξ`. On `so(3)*`
//! the ladder is `(‖ξ‖, ξ₃)`, indexed as `(0,1)` and `(1,1)`.

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{self, AlgebraElement, AlgebraKind, DualElement, Repr};
use crate::linalg::{self, CMatrix, I};
use crate::tolerance::Tolerances;

/// Position `(j, k)` in the ladder, `k` counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LadderIndex {
    pub j: usize,
    pub k: usize,
}

impl LadderIndex {
    pub fn new(j: usize, k: usize) -> Self {
        Self { j, k }
    }

    fn check(self, kind: AlgebraKind) -> Result<()> {
        let ok = match kind {
            AlgebraKind::Unitary(n) => self.j < n && self.k >= 1 && self.k <= n - self.j,
            AlgebraKind::So3 => self.j <= 1 && self.k == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                kind,
                j: self.j,
                k: self.k,
            })
        }
    }

    /// Whether the component belongs to the small (G-invariant) block.
    pub fn is_small(self) -> bool {
        self.j == 0
    }
}

/// All ladder indices in flat order `(0,1..n), (1,1..n−1), …, (n−1,1)`.
pub fn ladder(kind: AlgebraKind) -> Vec<LadderIndex> {
    match kind {
        AlgebraKind::So3 => vec![LadderIndex::new(0, 1), LadderIndex::new(1, 1)],
        AlgebraKind::Unitary(n) => (0..n)
            .flat_map(|j| (1..=n - j).map(move |k| LadderIndex::new(j, k)))
            .collect(),
    }
}

/// The triangular array of ladder values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcPattern {
    pub kind: AlgebraKind,
    pub rows: Vec<Vec<f64>>,
}

impl GcPattern {
    pub fn get(&self, idx: LadderIndex) -> f64 {
        self.rows[idx.j][idx.k - 1]
    }

    /// Components in flat enumeration order.
    pub fn flat(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest violation of `rows[j][k] ≥ rows[j+1][k] ≥ rows[j][k+1]` and of
    /// the descending order within rows; zero when the pattern interlaces.
    pub fn interlacing_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        match self.kind {
            AlgebraKind::So3 => {
                worst = worst.max(self.rows[1][0].abs() - self.rows[0][0]);
            }
            AlgebraKind::Unitary(_) => {
                for row in &self.rows {
                    for w in row.windows(2) {
                        worst = worst.max(w[1] - w[0]);
                    }
                }
                for pair in self.rows.windows(2) {
                    let (upper, lower) = (&pair[0], &pair[1]);
                    for (k, &x) in lower.iter().enumerate() {
                        worst = worst.max(x - upper[k]);
                        worst = worst.max(upper[k + 1] - x);
                    }
                }
            }
        }
        worst.max(0.0)
    }

    pub fn max_difference(&self, other: &GcPattern) -> f64 {
        self.flat()
            .iter()
            .zip(other.flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Trailing `(n−j)×(n−j)` block, as an element of `u(n−j)*`.
pub fn corner_project(xi: &DualElement, j: usize) -> Result<DualElement> {
    match xi.repr() {
        Repr::Vector(_) if j == 0 => Ok(xi.clone()),
        Repr::Vector(_) => Err(Error::IndexOutOfRange {
            kind: xi.kind(),
            j,
            k: 0,
        }),
        Repr::Matrix(m) => {
            let n = m.nrows();
            if j >= n {
                return Err(Error::IndexOutOfRange {
                    kind: xi.kind(),
                    j,
                    k: 0,
                });
            }
            let block = m.view((j, j), (n - j, n - j)).into_owned();
            Ok(DualElement::from_hermitian_unchecked(block, n - j))
        }
    }
}

fn corner(m: &CMatrix, j: usize) -> CMatrix {
    let n = m.nrows();
    m.view((j, j), (n - j, n - j)).into_owned()
}

pub fn gc_pattern(xi: &DualElement) -> GcPattern {
    let rows = match xi.repr() {
        Repr::Vector(v) => vec![vec![v.norm()], vec![v[2]]],
        Repr::Matrix(m) => (0..m.nrows())
            .map(|j| linalg::eigvalsh_desc(&corner(m, j)))
            .collect(),
    };
    GcPattern {
        kind: xi.kind(),
        rows,
    }
}

/// Differential `d_ξ λ_{jk}` as an algebra element: `i (0_j ⊕ v v*)` with
/// `v` the unit eigenvector of the trailing block for its `k`-th eigenvalue.
pub fn grad_lambda(xi: &DualElement, idx: LadderIndex) -> Result<AlgebraElement> {
    grad_lambda_with(xi, idx, &Tolerances::default())
}

pub fn grad_lambda_with(xi: &DualElement, idx: LadderIndex, tol: &Tolerances) -> Result<AlgebraElement> {
    idx.check(xi.kind())?;
    let threshold = Tolerances::scaled(tol.gap, xi.norm());
    match xi.repr() {
        Repr::Vector(v) => {
            if idx.j == 1 {
                return Ok(AlgebraElement::so3(Vector3::z()));
            }
            let r = v.norm();
            if r <= threshold {
                return Err(Error::DegenerateEigenvalue { j: 0, k: 1, gap: r });
            }
            Ok(AlgebraElement::so3(v / r))
        }
        Repr::Matrix(m) => {
            let n = m.nrows();
            let eig = linalg::eigh_desc(&corner(m, idx.j));
            let gap = eig.gap_at(idx.k - 1);
            if gap <= threshold {
                return Err(Error::DegenerateEigenvalue {
                    j: idx.j,
                    k: idx.k,
                    gap,
                });
            }
            let p = linalg::outer(&eig.vector(idx.k - 1)).map(|z| z * I);
            Ok(AlgebraElement::from_skew_unchecked(linalg::pad_trailing(&p, n), n))
        }
    }
}

/// All ladder gradients in flat order.
pub fn all_gradients(xi: &DualElement) -> Result<Vec<AlgebraElement>> {
    ladder(xi.kind())
        .into_iter()
        .map(|idx| grad_lambda(xi, idx))
        .collect()
}

/// `b × dim g` matrix whose rows are the ladder gradients in the orthonormal
/// basis of the algebra.
pub fn jacobian(xi: &DualElement) -> Result<DMatrix<f64>> {
    let grads = all_gradients(xi)?;
    let kind = xi.kind();
    let mut jac = DMatrix::zeros(grads.len(), kind.dim());
    for (a, g) in grads.iter().enumerate() {
        jac.set_row(a, &g.coords().transpose());
    }
    Ok(jac)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongRegularityReport {
    pub is_strongly_regular: bool,
    pub min_row_gap: f64,
    pub min_column_gap: f64,
    pub jacobian_rank: usize,
    pub failed_constraints: Vec<String>,
}

pub fn is_strongly_regular(xi: &DualElement) -> StrongRegularityReport {
    is_strongly_regular_with(xi, &Tolerances::default())
}

/// Checks the strict row chains `λ_{j1} > … > λ_{j(n−j)}`, the strict column
/// chains `λ_{0k} > λ_{1k} > … > λ_{(n−k)k}` and surjectivity of the ladder
/// differential.
pub fn is_strongly_regular_with(xi: &DualElement, tol: &Tolerances) -> StrongRegularityReport {
    let threshold = Tolerances::scaled(tol.gap, xi.norm());
    let pattern = gc_pattern(xi);
    let mut failed = Vec::new();
    let (min_row_gap, min_column_gap) = match xi.kind() {
        AlgebraKind::So3 => {
            let r = pattern.rows[0][0];
            let col = r - pattern.rows[1][0].abs();
            if r <= threshold {
                failed.push("row[0]".to_string());
            }
            if col <= threshold {
                failed.push("column[1]".to_string());
            }
            (r, col)
        }
        AlgebraKind::Unitary(n) => {
            let mut min_row = f64::INFINITY;
            for (j, row) in pattern.rows.iter().enumerate() {
                let gap = row.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
                if gap <= threshold {
                    failed.push(format!("row[{j}]"));
                }
                min_row = min_row.min(gap);
            }
            let mut min_col = f64::INFINITY;
            for k in 1..=n {
                let column: Vec<f64> = (0..=n - k).map(|j| pattern.rows[j][k - 1]).collect();
                let gap = column.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
                if gap <= threshold {
                    failed.push(format!("column[{k}]"));
                }
                min_col = min_col.min(gap);
            }
            (min_row, min_col)
        }
    };
    let b = xi.kind().big_rank();
    let jacobian_rank = match jacobian(xi) {
        Ok(jac) => linalg::numeric_rank(&jac, tol.rank),
        Err(_) => 0,
    };
    if jacobian_rank < b {
        failed.push("jacobian-rank".to_string());
    }
    StrongRegularityReport {
        is_strongly_regular: failed.is_empty(),
        min_row_gap,
        min_column_gap,
        jacobian_rank,
        failed_constraints: failed,
    }
}

pub(crate) fn require_strongly_regular(xi: &DualElement) -> Result<()> {
    let report = is_strongly_regular(xi);
    if report.is_strongly_regular {
        Ok(())
    } else {
        Err(Error::NotStronglyRegular(report.failed_constraints.join(", ")))
    }
}

/// Rank of `d λ_int` restricted to the coadjoint orbit tangent space
/// `{[η, ξ] : η ∈ g}`. Equal to `u` on the strongly regular locus.
pub fn orbit_integrability_rank(xi: &DualElement) -> Result<usize> {
    require_strongly_regular(xi)?;
    let kind = xi.kind();
    let basis = lie::algebra_basis(kind);
    let tangents: Vec<DualElement> = basis
        .iter()
        .map(|e| lie::ad_star(e, xi))
        .collect::<Result<_>>()?;
    let int: Vec<AlgebraElement> = ladder(kind)
        .into_iter()
        .filter(|idx| !idx.is_small())
        .map(|idx| grad_lambda(xi, idx))
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(int.len(), basis.len());
    for (a, g) in int.iter().enumerate() {
        for (i, t) in tangents.iter().enumerate() {
            m[(a, i)] = lie::pair(g, t)?;
        }
    }
    Ok(linalg::numeric_rank(&m, Tolerances::default().rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    #[test]
    fn ladder_cardinality_and_order() {
        for n in 1..7 {
            let l = ladder(AlgebraKind::Unitary(n));
            assert_eq!(l.len(), n * (n + 1) / 2);
            assert_eq!(l[0], LadderIndex::new(0, 1));
            assert_eq!(*l.last().unwrap(), LadderIndex::new(n - 1, 1));
        }
        let l = ladder(AlgebraKind::Unitary(3));
        let expected = [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1)];
        for (idx, (j, k)) in l.iter().zip(expected) {
            assert_eq!((idx.j, idx.k), (j, k));
        }
    }

    #[test]
    fn corner_projection() {
        let xi = DualElement::diagonal(&[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(corner_project(&xi, 0).unwrap(), xi);
        let c = corner_project(&xi, 1).unwrap();
        assert_eq!(c.kind(), AlgebraKind::Unitary(2));
        assert!(c.distance(&DualElement::diagonal(&[5.0, 6.0]).unwrap()).unwrap() < 1e-15);
        assert!(matches!(corner_project(&xi, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn diagonal_pattern() {
        let a = [4.0, 2.5, 1.0, -3.0];
        let xi = DualElement::diagonal(&a).unwrap();
        let p = gc_pattern(&xi);
        for idx in ladder(xi.kind()) {
            assert_eq!(p.get(idx), a[idx.j + idx.k - 1]);
        }
    }

    #[test]
    fn gradient_of_diagonal() {
        let xi = DualElement::diagonal(&[3.0, 1.0]).unwrap();
        let g = grad_lambda(&xi, LadderIndex::new(0, 1)).unwrap();
        let m = g.matrix().unwrap();
        assert!((m[(0, 0)] - I).norm() < 1e-15);
        assert!(m[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn gradient_rejects_bad_index_and_degeneracy() {
        let xi = DualElement::diagonal(&[3.0, 1.0]).unwrap();
        assert!(matches!(
            grad_lambda(&xi, LadderIndex::new(1, 2)),
            Err(Error::IndexOutOfRange { .. })
        ));
        let scalar = DualElement::diagonal(&[2.0, 2.0, 2.0]).unwrap();
        assert!(matches!(jacobian(&scalar), Err(Error::DegenerateEigenvalue { .. })));
    }

    #[test]
    fn diagonal_jacobian_is_rank_deficient() {
        // λ_11 = ξ_22 and λ_02 have the same gradient i E_22 at diagonal points.
        let xi = DualElement::diagonal(&[2.0, -1.0]).unwrap();
        let jac = jacobian(&xi).unwrap();
        assert_eq!(linalg::numeric_rank(&jac, 1e-8), 2);
        let report = is_strongly_regular(&xi);
        assert!(!report.is_strongly_regular);
        assert_eq!(report.failed_constraints, vec!["jacobian-rank".to_string()]);
    }

    #[test]
    fn random_points_have_full_rank() {
        let mut s = Sampler::new(3);
        let kind = AlgebraKind::Unitary(3);
        for _ in 0..10 {
            let xi = s.gaussian_dual(kind);
            assert_eq!(linalg::numeric_rank(&jacobian(&xi).unwrap(), 1e-8), 6);
        }
    }

    #[test]
    fn so3_classification() {
        let pole = DualElement::so3(Vector3::new(0.0, 0.0, 1.0));
        let r = is_strongly_regular(&pole);
        assert!(!r.is_strongly_regular);
        assert_eq!(r.jacobian_rank, 1);
        let good = DualElement::so3(Vector3::new(1.0, 0.0, 1.0));
        let r = is_strongly_regular(&good);
        assert!(r.is_strongly_regular, "{r:?}");
        assert_eq!(r.jacobian_rank, 2);
        assert_eq!(orbit_integrability_rank(&good).unwrap(), 1);
        assert!(!is_strongly_regular(&DualElement::zero(AlgebraKind::So3)).is_strongly_regular);
    }

    #[test]
    fn integrability_rank_equals_u() {
        let mut s = Sampler::new(17);
        for n in 2..5 {
            let kind = AlgebraKind::Unitary(n);
            let xi = s.strongly_regular_dual(kind);
            assert_eq!(orbit_integrability_rank(&xi).unwrap(), kind.int_rank());
        }
    }

    #[test]
    fn integrability_rank_requires_strong_regularity() {
        let xi = DualElement::diagonal(&[2.0, -1.0]).unwrap();
        assert!(matches!(
            orbit_integrability_rank(&xi),
            Err(Error::NotStronglyRegular(_))
        ));
    }
}
