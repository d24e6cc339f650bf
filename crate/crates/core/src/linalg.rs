//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Descending eigendecomposition of a Hermitian matrix.
///
/// Eigenvectors are the columns of `vectors`, normalised so that the entry
/// of largest modulus in each column is real and positive.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }

    /// Smallest distance from eigenvalue `k` to its neighbours; infinite for
    /// a 1×1 block.
    pub fn gap_at(&self, k: usize) -> f64 {
        let mut gap = f64::INFINITY;
        if k > 0 {
            gap = gap.min(self.values[k - 1] - self.values[k]);
        }
        if k + 1 < self.values.len() {
            gap = gap.min(self.values[k] - self.values[k + 1]);
        }
        gap
    }

    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn eigh_desc(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex64::from(norm);
        }
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
        vectors.set_column(dst, &col);
    }
    HermitianEigen { values, vectors }
}

pub fn eigvalsh_desc(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `v v*` for a column vector `v`.
pub fn outer(v: &DVector<Complex64>) -> CMatrix {
    v * v.adjoint()
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn skew_defect(m: &CMatrix) -> f64 {
    (m + m.adjoint()).norm()
}

pub fn unitary_defect(m: &CMatrix) -> f64 {
    (m * m.adjoint() - CMatrix::identity(m.nrows(), m.ncols())).norm()
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// `exp(i H)` for Hermitian `H`, computed spectrally.
pub fn exp_i_hermitian(h: &CMatrix) -> CMatrix {
    let eig = eigh_desc(h);
    let phases = CMatrix::from_diagonal(&DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&x| Complex64::from_polar(1.0, x)),
    ));
    &eig.vectors * phases * eig.vectors.adjoint()
}

/// Embeds `block` into the trailing corner of an `n × n` zero matrix.
pub fn pad_trailing(block: &CMatrix, n: usize) -> CMatrix {
    let m = block.nrows();
    let mut out = CMatrix::zeros(n, n);
    out.view_mut((n - m, n - m), (m, m)).copy_from(block);
    out
}

fn rank_cutoff(singular: &DVector<f64>, rel_tol: f64) -> f64 {
    let smax = singular.iter().copied().fold(0.0, f64::max);
    (rel_tol * smax).max(1e-13)
}

/// Numeric rank: singular values below `rel_tol · σ_max` count as zero.
pub fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let cutoff = rank_cutoff(&sv, rel_tol);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (r, c) = m.shape();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    if r == 0 {
        return DMatrix::identity(c, c);
    }
    let rows = r.max(c);
    let mut square = DMatrix::zeros(rows, c);
    square.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let cutoff = rank_cutoff(&svd.singular_values, rel_tol);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(c, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Frobenius distance.
pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_and_fixes_phase() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(3.0, 0.0),
            ],
        );
        let eig = eigh_desc(&m);
        assert_eq!(eig.values, vec![3.0, 1.0]);
        let v0 = eig.vector(0);
        assert!((v0[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&m, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-12);
        assert!((k.transpose() * &k - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(numeric_rank(&DMatrix::zeros(3, 3), 1e-8), 0);
    }
}
