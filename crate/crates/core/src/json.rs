//! JSON encodings.
//!
//! * algebra kind: `{"kind": "unitary", "n": 3}` or `{"kind": "so3"}`
//! * algebra / dual element: `{"kind": "unitary", "n": 2, "re": [...], "im": [...]}`
//!   with row-major entries, or `{"kind": "so3", "vec": [x, y, z]}`
//! * torus element: `{"kind": ..., "n": ..., "angles": [...]}`
//! * product space: `{"kind": ..., "n": ..., "factors": [[...], ...]}`
//!
//! The `parse_*` functions are the entry points for untrusted input; they
//! never panic.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamiltonian::ProductSpace;
use crate::lie::{AlgebraElement, AlgebraKind, DualElement, Repr};
use crate::linalg::CMatrix;
use crate::torus::TorusElement;

/// Largest matrix size accepted from JSON.
pub const MAX_N: usize = 64;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum KindJson {
    Unitary { n: usize },
    So3,
}

impl TryFrom<KindJson> for AlgebraKind {
    type Error = Error;

    fn try_from(k: KindJson) -> Result<Self> {
        match k {
            KindJson::So3 => Ok(AlgebraKind::So3),
            KindJson::Unitary { n } if n > MAX_N => {
                Err(Error::InvalidKind(format!("n = {n} exceeds {MAX_N}")))
            }
            KindJson::Unitary { n } => AlgebraKind::unitary(n),
        }
    }
}

impl From<AlgebraKind> for KindJson {
    fn from(k: AlgebraKind) -> Self {
        match k {
            AlgebraKind::So3 => KindJson::So3,
            AlgebraKind::Unitary(n) => KindJson::Unitary { n },
        }
    }
}

impl Serialize for AlgebraKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KindJson::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        AlgebraKind::try_from(KindJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ElementJson {
    Unitary { n: usize, re: Vec<f64>, im: Vec<f64> },
    So3 { vec: [f64; 3] },
}

impl ElementJson {
    fn from_repr(repr: &Repr) -> Self {
        match repr {
            Repr::Vector(v) => ElementJson::So3 {
                vec: [v[0], v[1], v[2]],
            },
            Repr::Matrix(m) => {
                let n = m.nrows();
                let mut re = Vec::with_capacity(n * n);
                let mut im = Vec::with_capacity(n * n);
                for p in 0..n {
                    for q in 0..n {
                        re.push(m[(p, q)].re);
                        im.push(m[(p, q)].im);
                    }
                }
                ElementJson::Unitary { n, re, im }
            }
        }
    }

    fn into_parts(self) -> Result<Parts> {
        match self {
            ElementJson::So3 { vec } => {
                if vec.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidValue("non-finite vector entry".into()));
                }
                Ok(Parts::Vector(Vector3::from(vec)))
            }
            ElementJson::Unitary { n, re, im } => {
                if n == 0 || n > MAX_N {
                    return Err(Error::InvalidKind(format!("n = {n} outside 1..={MAX_N}")));
                }
                let len = n * n;
                for v in [&re, &im] {
                    if v.len() != len {
                        return Err(Error::Dimension {
                            expected: len,
                            actual: v.len(),
                        });
                    }
                }
                let m = CMatrix::from_fn(n, n, |p, q| Complex64::new(re[p * n + q], im[p * n + q]));
                Ok(Parts::Matrix(m))
            }
        }
    }
}

enum Parts {
    Matrix(CMatrix),
    Vector(Vector3<f64>),
}

impl Serialize for DualElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson::from_repr(self.repr()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = ElementJson::deserialize(d)?.into_parts().map_err(D::Error::custom)?;
        match parts {
            Parts::Vector(v) => Ok(DualElement::so3(v)),
            Parts::Matrix(m) => DualElement::hermitian(m).map_err(D::Error::custom),
        }
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson::from_repr(self.repr()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = ElementJson::deserialize(d)?.into_parts().map_err(D::Error::custom)?;
        match parts {
            Parts::Vector(v) => Ok(AlgebraElement::so3(v)),
            Parts::Matrix(m) => AlgebraElement::skew_hermitian(m).map_err(D::Error::custom),
        }
    }
}

pub fn parse_kind(s: &str) -> Result<AlgebraKind> {
    Ok(serde_json::from_str(s)?)
}

pub fn parse_dual(s: &str) -> Result<DualElement> {
    Ok(serde_json::from_str(s)?)
}

pub fn parse_algebra(s: &str) -> Result<AlgebraElement> {
    Ok(serde_json::from_str(s)?)
}

pub fn parse_torus(s: &str) -> Result<TorusElement> {
    Ok(serde_json::from_str(s)?)
}

pub fn parse_product_space(s: &str) -> Result<ProductSpace> {
    Ok(serde_json::from_str(s)?)
}

pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}
