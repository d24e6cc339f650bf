//! Reference computations that avoid the library's own eigen paths.
#![allow(dead_code)]

use gelfand_cetlin::lie::{self, Repr};
use gelfand_cetlin::linalg::CMatrix;
use gelfand_cetlin::{AlgebraKind, DualElement, LadderIndex};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_symmetric(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() < 1e-15 * a.norm().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Descending eigenvalues of a Hermitian matrix through its real
/// embedding `[[A, −B], [B, A]]`, whose spectrum is doubled.
pub fn hermitian_eigvals(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(i + n, j + n)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
        }
    }
    jacobi_symmetric(r).into_iter().step_by(2).collect()
}

/// Ladder value straight from its definition.
pub fn ladder_value(xi: &DualElement, idx: LadderIndex) -> f64 {
    match xi.repr() {
        Repr::Vector(v) => {
            if idx.j == 0 {
                v.norm()
            } else {
                v[2]
            }
        }
        Repr::Matrix(m) => {
            let n = m.nrows();
            let block = m.view((idx.j, idx.j), (n - idx.j, n - idx.j)).into_owned();
            hermitian_eigvals(&block)[idx.k - 1]
        }
    }
}

/// Central-difference gradient of a ladder value in orthonormal dual
/// coordinates; equals the algebra coordinates of the exact gradient.
pub fn fd_gradient(xi: &DualElement, idx: LadderIndex, h: f64) -> DVector<f64> {
    let kind = xi.kind();
    let c = xi.coords();
    DVector::from_fn(kind.dim(), |a, _| {
        let mut plus = c.clone();
        let mut minus = c.clone();
        plus[a] += h;
        minus[a] -= h;
        let fp = ladder_value(&DualElement::from_coords(kind, plus.as_slice()).unwrap(), idx);
        let fm = ladder_value(&DualElement::from_coords(kind, minus.as_slice()).unwrap(), idx);
        (fp - fm) / (2.0 * h)
    })
}

/// Lie–Poisson bracket of two ladder values from finite-difference gradients.
pub fn fd_poisson(xi: &DualElement, a: LadderIndex, b: LadderIndex, h: f64) -> f64 {
    let kind = xi.kind();
    let ga = lie::AlgebraElement::from_coords(kind, fd_gradient(xi, a, h).as_slice()).unwrap();
    let gb = lie::AlgebraElement::from_coords(kind, fd_gradient(xi, b, h).as_slice()).unwrap();
    lie::lie_poisson_bracket(&ga, &gb, xi).unwrap()
}

/// Rotation by `angle` about `axis` (Rodrigues).
pub fn rodrigues(axis: Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let k = axis.normalize();
    let kx = Matrix3::new(0.0, -k[2], k[1], k[2], 0.0, -k[0], -k[1], k[0], 0.0);
    Matrix3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

pub fn u(n: usize) -> AlgebraKind {
    AlgebraKind::unitary(n).unwrap()
}
