use nalgebra::{DVector, Matrix3, Vector3};
use num_complex::Complex64;

use super::AlgebraKind;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, I};
use crate::tolerance::Tolerances;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Storage shared by algebra and dual elements.
#[derive(Clone, Debug, PartialEq)]
pub enum Repr {
    Matrix(CMatrix),
    Vector(Vector3<f64>),
}

impl Repr {
    fn norm(&self) -> f64 {
        match self {
            Repr::Matrix(m) => m.norm(),
            Repr::Vector(v) => v.norm(),
        }
    }

    fn zip(&self, other: &Repr, f: impl Fn(f64, f64) -> f64) -> Repr {
        match (self, other) {
            (Repr::Matrix(a), Repr::Matrix(b)) => Repr::Matrix(a.zip_map(b, |x, y| {
                Complex64::new(f(x.re, y.re), f(x.im, y.im))
            })),
            (Repr::Vector(a), Repr::Vector(b)) => Repr::Vector(a.zip_map(b, f)),
            _ => unreachable!("kinds checked by caller"),
        }
    }

    fn scale(&self, s: f64) -> Repr {
        match self {
            Repr::Matrix(m) => Repr::Matrix(m.scale(s)),
            Repr::Vector(v) => Repr::Vector(v * s),
        }
    }
}

macro_rules! vector_space_ops {
    ($ty:ident) => {
        impl $ty {
            pub fn kind(&self) -> AlgebraKind {
                self.kind
            }

            pub fn repr(&self) -> &Repr {
                &self.repr
            }

            pub fn matrix(&self) -> Option<&CMatrix> {
                match &self.repr {
                    Repr::Matrix(m) => Some(m),
                    Repr::Vector(_) => None,
                }
            }

            pub fn vector(&self) -> Option<&Vector3<f64>> {
                match &self.repr {
                    Repr::Vector(v) => Some(v),
                    Repr::Matrix(_) => None,
                }
            }

            /// Frobenius norm (Euclidean for `so(3)`).
            pub fn norm(&self) -> f64 {
                self.repr.norm()
            }

            pub fn scale(&self, s: f64) -> Self {
                Self {
                    kind: self.kind,
                    repr: self.repr.scale(s),
                }
            }

            pub fn try_add(&self, other: &Self) -> Result<Self> {
                self.kind.ensure_same(other.kind)?;
                Ok(Self {
                    kind: self.kind,
                    repr: self.repr.zip(&other.repr, |a, b| a + b),
                })
            }

            pub fn try_sub(&self, other: &Self) -> Result<Self> {
                self.kind.ensure_same(other.kind)?;
                Ok(Self {
                    kind: self.kind,
                    repr: self.repr.zip(&other.repr, |a, b| a - b),
                })
            }

            pub fn distance(&self, other: &Self) -> Result<f64> {
                Ok(self.try_sub(other)?.norm())
            }

            /// Coordinates in the orthonormal real basis returned by
            /// `algebra_basis` / `dual_basis`.
            pub fn coords(&self) -> DVector<f64> {
                match &self.repr {
                    Repr::Vector(v) => DVector::from_column_slice(v.as_slice()),
                    Repr::Matrix(m) => Self::matrix_coords(m),
                }
            }

            pub fn from_coords(kind: AlgebraKind, coords: &[f64]) -> Result<Self> {
                if coords.len() != kind.dim() {
                    return Err(Error::Dimension {
                        expected: kind.dim(),
                        actual: coords.len(),
                    });
                }
                let repr = match kind {
                    AlgebraKind::So3 => Repr::Vector(Vector3::from_column_slice(coords)),
                    AlgebraKind::Unitary(n) => Repr::Matrix(Self::matrix_from_coords(n, coords)),
                };
                Ok(Self { kind, repr })
            }
        }
    };
}

/// An element of the Lie algebra: skew-Hermitian matrix or `R³`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    kind: AlgebraKind,
    repr: Repr,
}

/// A point of the dual of the Lie algebra: Hermitian matrix or `R³`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement {
    kind: AlgebraKind,
    repr: Repr,
}

vector_space_ops!(AlgebraElement);
vector_space_ops!(DualElement);

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Dimension {
            expected: m.nrows().max(1),
            actual: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidValue("non-finite matrix entry".into()));
    }
    Ok(m.nrows())
}

impl AlgebraElement {
    /// Validates skew-Hermitian structure and projects away the residue.
    pub fn skew_hermitian(m: CMatrix) -> Result<Self> {
        let n = check_square(&m)?;
        let defect = linalg::skew_defect(&m);
        if defect > Tolerances::scaled(Tolerances::default().structure, m.norm()) {
            return Err(Error::NotSkewHermitian { defect });
        }
        Ok(Self::from_skew_unchecked((&m - m.adjoint()).scale(0.5), n))
    }

    pub fn so3(v: Vector3<f64>) -> Self {
        Self {
            kind: AlgebraKind::So3,
            repr: Repr::Vector(v),
        }
    }

    /// `i·h` for a Hermitian matrix `h`.
    pub fn i_times(h: &CMatrix) -> Result<Self> {
        let eta = h.map(|z| z * I);
        Self::skew_hermitian(eta)
    }

    pub(crate) fn from_skew_unchecked(m: CMatrix, n: usize) -> Self {
        Self {
            kind: AlgebraKind::Unitary(n),
            repr: Repr::Matrix(m),
        }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        let repr = match kind {
            AlgebraKind::So3 => Repr::Vector(Vector3::zeros()),
            AlgebraKind::Unitary(n) => Repr::Matrix(CMatrix::zeros(n, n)),
        };
        Self { kind, repr }
    }

    fn matrix_coords(m: &CMatrix) -> DVector<f64> {
        let n = m.nrows();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            out.push(m[(k, k)].im);
        }
        for k in 0..n {
            for l in (k + 1)..n {
                out.push((m[(k, l)].re - m[(l, k)].re) * SQRT_HALF);
                out.push((m[(k, l)].im + m[(l, k)].im) * SQRT_HALF);
            }
        }
        DVector::from_vec(out)
    }

    fn matrix_from_coords(n: usize, c: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Complex64::new(0.0, c[k]);
        }
        let mut a = n;
        for k in 0..n {
            for l in (k + 1)..n {
                let (x, y) = (c[a] * SQRT_HALF, c[a + 1] * SQRT_HALF);
                m[(k, l)] = Complex64::new(x, y);
                m[(l, k)] = Complex64::new(-x, y);
                a += 2;
            }
        }
        m
    }
}

impl DualElement {
    /// Validates Hermitian structure and symmetrises away the residue.
    pub fn hermitian(m: CMatrix) -> Result<Self> {
        let n = check_square(&m)?;
        let defect = linalg::hermitian_defect(&m);
        if defect > Tolerances::scaled(Tolerances::default().structure, m.norm()) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self::from_hermitian_unchecked((&m + m.adjoint()).scale(0.5), n))
    }

    /// Real diagonal matrix `diag(values)`.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                actual: 0,
            });
        }
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::from(x)));
        Self::hermitian(CMatrix::from_diagonal(&d))
    }

    pub fn so3(v: Vector3<f64>) -> Self {
        Self {
            kind: AlgebraKind::So3,
            repr: Repr::Vector(v),
        }
    }

    pub(crate) fn from_hermitian_unchecked(m: CMatrix, n: usize) -> Self {
        Self {
            kind: AlgebraKind::Unitary(n),
            repr: Repr::Matrix(m),
        }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        let repr = match kind {
            AlgebraKind::So3 => Repr::Vector(Vector3::zeros()),
            AlgebraKind::Unitary(n) => Repr::Matrix(CMatrix::zeros(n, n)),
        };
        Self { kind, repr }
    }

    fn matrix_coords(m: &CMatrix) -> DVector<f64> {
        let n = m.nrows();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            out.push(m[(k, k)].re);
        }
        for k in 0..n {
            for l in (k + 1)..n {
                out.push(-(m[(k, l)].im - m[(l, k)].im) * SQRT_HALF);
                out.push((m[(k, l)].re + m[(l, k)].re) * SQRT_HALF);
            }
        }
        DVector::from_vec(out)
    }

    fn matrix_from_coords(n: usize, c: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Complex64::new(c[k], 0.0);
        }
        let mut a = n;
        for k in 0..n {
            for l in (k + 1)..n {
                let (x, y) = (c[a + 1] * SQRT_HALF, c[a] * SQRT_HALF);
                m[(k, l)] = Complex64::new(x, -y);
                m[(l, k)] = Complex64::new(x, y);
                a += 2;
            }
        }
        m
    }
}

/// Storage for group elements.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupRepr {
    Unitary(CMatrix),
    Rotation(Matrix3<f64>),
}

/// An element of `U(n)` or `SO(3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    kind: AlgebraKind,
    repr: GroupRepr,
}

impl GroupElement {
    pub fn unitary(m: CMatrix) -> Result<Self> {
        let n = check_square(&m)?;
        let defect = linalg::unitary_defect(&m);
        if defect > Tolerances::default().structure * (n as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self::from_unitary_unchecked(m))
    }

    pub fn rotation(r: Matrix3<f64>) -> Result<Self> {
        let defect = (r * r.transpose() - Matrix3::identity()).norm();
        if defect > Tolerances::default().structure * 3.0 || (r.determinant() - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self {
            kind: AlgebraKind::So3,
            repr: GroupRepr::Rotation(r),
        })
    }

    pub(crate) fn from_unitary_unchecked(m: CMatrix) -> Self {
        Self {
            kind: AlgebraKind::Unitary(m.nrows()),
            repr: GroupRepr::Unitary(m),
        }
    }

    pub(crate) fn from_rotation_unchecked(r: Matrix3<f64>) -> Self {
        Self {
            kind: AlgebraKind::So3,
            repr: GroupRepr::Rotation(r),
        }
    }

    pub fn identity(kind: AlgebraKind) -> Self {
        let repr = match kind {
            AlgebraKind::So3 => GroupRepr::Rotation(Matrix3::identity()),
            AlgebraKind::Unitary(n) => GroupRepr::Unitary(CMatrix::identity(n, n)),
        };
        Self { kind, repr }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn repr(&self) -> &GroupRepr {
        &self.repr
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        self.kind.ensure_same(other.kind)?;
        let repr = match (&self.repr, &other.repr) {
            (GroupRepr::Unitary(a), GroupRepr::Unitary(b)) => GroupRepr::Unitary(a * b),
            (GroupRepr::Rotation(a), GroupRepr::Rotation(b)) => GroupRepr::Rotation(a * b),
            _ => unreachable!("kinds checked"),
        };
        Ok(GroupElement {
            kind: self.kind,
            repr,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let repr = match &self.repr {
            GroupRepr::Unitary(a) => GroupRepr::Unitary(a.adjoint()),
            GroupRepr::Rotation(r) => GroupRepr::Rotation(r.transpose()),
        };
        GroupElement {
            kind: self.kind,
            repr,
        }
    }

    /// Frobenius distance between the representing matrices.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        self.kind.ensure_same(other.kind)?;
        Ok(match (&self.repr, &other.repr) {
            (GroupRepr::Unitary(a), GroupRepr::Unitary(b)) => (a - b).norm(),
            (GroupRepr::Rotation(a), GroupRepr::Rotation(b)) => (a - b).norm(),
            _ => unreachable!("kinds checked"),
        })
    }

    pub fn distance_to_identity(&self) -> f64 {
        self.distance(&GroupElement::identity(self.kind))
            .expect("same kind")
    }
}
