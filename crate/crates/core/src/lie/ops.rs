use nalgebra::{DVector, Rotation3, Vector3};
use num_complex::Complex64;

use super::{AlgebraElement, AlgebraKind, DualElement, GroupElement, GroupRepr, Repr};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, I};
use crate::tolerance::Tolerances;

/// Invariant pairing `g ⊗ g* → R`: `−i tr(η ξ)` for `u(n)`, dot product for
/// `so(3)`.
pub fn pair(eta: &AlgebraElement, xi: &DualElement) -> Result<f64> {
    eta.kind().ensure_same(xi.kind())?;
    Ok(match (eta.repr(), xi.repr()) {
        (Repr::Matrix(a), Repr::Matrix(b)) => {
            let n = a.nrows();
            let mut tr = Complex64::new(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    tr += a[(p, q)] * b[(q, p)];
                }
            }
            (-I * tr).re
        }
        (Repr::Vector(a), Repr::Vector(b)) => a.dot(b),
        _ => unreachable!("kinds checked"),
    })
}

/// Lie bracket on the algebra: commutator, or cross product on `so(3)`.
pub fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.kind().ensure_same(b.kind())?;
    Ok(match (a.repr(), b.repr()) {
        (Repr::Matrix(x), Repr::Matrix(y)) => {
            AlgebraElement::from_skew_unchecked(linalg::commutator(x, y), x.nrows())
        }
        (Repr::Vector(x), Repr::Vector(y)) => AlgebraElement::so3(x.cross(y)),
        _ => unreachable!("kinds checked"),
    })
}

/// `{f, g}(ξ) = ⟨[d f, d g], ξ⟩` for functions with differentials `df`, `dg`
/// at `ξ`.
pub fn lie_poisson_bracket(df: &AlgebraElement, dg: &AlgebraElement, xi: &DualElement) -> Result<f64> {
    pair(&bracket(df, dg)?, xi)
}

/// Infinitesimal coadjoint action `d/dt Ad*_{exp tη} ξ |_{t=0} = [η, ξ]`.
pub fn ad_star(eta: &AlgebraElement, xi: &DualElement) -> Result<DualElement> {
    eta.kind().ensure_same(xi.kind())?;
    Ok(match (eta.repr(), xi.repr()) {
        (Repr::Matrix(a), Repr::Matrix(b)) => {
            DualElement::from_hermitian_unchecked(linalg::commutator(a, b), a.nrows())
        }
        (Repr::Vector(a), Repr::Vector(b)) => DualElement::so3(a.cross(b)),
        _ => unreachable!("kinds checked"),
    })
}

pub fn adjoint_act(g: &GroupElement, eta: &AlgebraElement) -> Result<AlgebraElement> {
    g.kind().ensure_same(eta.kind())?;
    Ok(match (g.repr(), eta.repr()) {
        (GroupRepr::Unitary(u), Repr::Matrix(a)) => {
            AlgebraElement::from_skew_unchecked(u * a * u.adjoint(), u.nrows())
        }
        (GroupRepr::Rotation(r), Repr::Vector(v)) => AlgebraElement::so3(r * v),
        _ => unreachable!("kinds checked"),
    })
}

/// `Ad*_g ξ = g ξ g⁻¹` (rotation of the vector for `so(3)`).
pub fn coadjoint_act(g: &GroupElement, xi: &DualElement) -> Result<DualElement> {
    g.kind().ensure_same(xi.kind())?;
    Ok(match (g.repr(), xi.repr()) {
        (GroupRepr::Unitary(u), Repr::Matrix(a)) => {
            let defect = linalg::unitary_defect(u);
            if defect > 1e-8 * (u.nrows() as f64).sqrt() {
                return Err(Error::NotUnitary { defect });
            }
            let m = u * a * u.adjoint();
            let m = (&m + m.adjoint()).scale(0.5);
            DualElement::from_hermitian_unchecked(m, u.nrows())
        }
        (GroupRepr::Rotation(r), Repr::Vector(v)) => DualElement::so3(r * v),
        _ => unreachable!("kinds checked"),
    })
}

pub fn exp_algebra(eta: &AlgebraElement) -> GroupElement {
    match eta.repr() {
        Repr::Matrix(a) => {
            // a = i h with h Hermitian
            let h = a.map(|z| -I * z);
            GroupElement::from_unitary_unchecked(linalg::exp_i_hermitian(&h))
        }
        Repr::Vector(v) => GroupElement::from_rotation_unchecked(Rotation3::new(*v).into_inner()),
    }
}

/// Orthonormal real basis of the algebra.
pub fn algebra_basis(kind: AlgebraKind) -> Vec<AlgebraElement> {
    (0..kind.dim())
        .map(|a| {
            let mut c = vec![0.0; kind.dim()];
            c[a] = 1.0;
            AlgebraElement::from_coords(kind, &c).expect("dimension matches")
        })
        .collect()
}

/// Basis of the dual, pairing to the identity against [`algebra_basis`].
pub fn dual_basis(kind: AlgebraKind) -> Vec<DualElement> {
    (0..kind.dim())
        .map(|a| {
            let mut c = vec![0.0; kind.dim()];
            c[a] = 1.0;
            DualElement::from_coords(kind, &c).expect("dimension matches")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub is_regular: bool,
    pub min_eigen_gap: f64,
    pub centralizer_dim: usize,
}

pub fn regularity(xi: &DualElement) -> RegularityReport {
    regularity_with(xi, &Tolerances::default())
}

pub fn regularity_with(xi: &DualElement, tol: &Tolerances) -> RegularityReport {
    let threshold = Tolerances::scaled(tol.gap, xi.norm());
    match xi.repr() {
        Repr::Vector(v) => {
            let r = v.norm();
            let dim = if r > threshold { 1 } else { 3 };
            RegularityReport {
                is_regular: dim == 1,
                min_eigen_gap: r,
                centralizer_dim: dim,
            }
        }
        Repr::Matrix(m) => {
            let values = linalg::eigvalsh_desc(m);
            let min_gap = values
                .windows(2)
                .map(|w| w[0] - w[1])
                .fold(f64::INFINITY, f64::min);
            let mut dim = 0;
            let mut run = 1;
            for w in values.windows(2) {
                if w[0] - w[1] <= threshold {
                    run += 1;
                } else {
                    dim += run * run;
                    run = 1;
                }
            }
            dim += run * run;
            RegularityReport {
                is_regular: dim == values.len(),
                min_eigen_gap: min_gap,
                centralizer_dim: dim,
            }
        }
    }
}

pub fn centralizer_basis(xi: &DualElement) -> Result<Vec<AlgebraElement>> {
    centralizer_basis_with(xi, &Tolerances::default())
}

/// Basis of the centralizer `g_ξ` of a regular `ξ`: `{i v_k v_k*}` over the
/// descending eigenvectors, or `{ξ/‖ξ‖}` on `so(3)`.
pub fn centralizer_basis_with(xi: &DualElement, tol: &Tolerances) -> Result<Vec<AlgebraElement>> {
    let threshold = Tolerances::scaled(tol.gap, xi.norm());
    match xi.repr() {
        Repr::Vector(v) => {
            let r = v.norm();
            if r <= threshold {
                return Err(Error::NotRegular { gap: r });
            }
            Ok(vec![AlgebraElement::so3(v / r)])
        }
        Repr::Matrix(m) => {
            let eig = linalg::eigh_desc(m);
            let gap = eig.min_gap();
            if gap <= threshold {
                return Err(Error::NotRegular { gap });
            }
            let n = m.nrows();
            Ok((0..n)
                .map(|k| {
                    let p = linalg::outer(&eig.vector(k));
                    AlgebraElement::from_skew_unchecked(p.map(|z| z * I), n)
                })
                .collect())
        }
    }
}

/// Representative of the coadjoint orbit in the closed fundamental chamber:
/// descending diagonal matrix, or `(0, 0, ‖ξ‖)` on `so(3)`.
pub fn sweeping(xi: &DualElement) -> DualElement {
    match xi.repr() {
        Repr::Vector(v) => DualElement::so3(Vector3::new(0.0, 0.0, v.norm())),
        Repr::Matrix(m) => {
            let values = linalg::eigvalsh_desc(m);
            let d = DVector::from_iterator(values.len(), values.into_iter().map(Complex64::from));
            DualElement::from_hermitian_unchecked(CMatrix::from_diagonal(&d), m.nrows())
        }
    }
}
