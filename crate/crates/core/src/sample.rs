//! Seeded random sampling of algebra, dual and group elements.

use nalgebra::{DVector, Matrix3, UnitQuaternion, Vector3, Quaternion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gc;
use crate::lie::{self, AlgebraElement, AlgebraKind, DualElement, GroupElement};
use crate::linalg::CMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    /// Hermitian matrix with independent standard Gaussian entries.
    Gaussian,
    /// `U diag(spectrum) U*` for a Haar-random `U`.
    SpectrumFixed(Vec<f64>),
}

pub fn sample_dual(kind: AlgebraKind, seed: u64, ensemble: &Ensemble) -> Result<DualElement> {
    let mut s = Sampler::new(seed);
    match ensemble {
        Ensemble::Gaussian => Ok(s.gaussian_dual(kind)),
        Ensemble::SpectrumFixed(spec) => s.spectrum_dual(kind, spec),
    }
}

/// Deterministic random source. Not meant to be shared across threads;
/// derive one per task from a seed instead.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn angle(&mut self) -> f64 {
        self.uniform(0.0, std::f64::consts::TAU)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    pub fn unit_vector(&mut self, n: usize) -> DVector<Complex64> {
        loop {
            let v = DVector::from_fn(n, |_, _| self.complex_normal());
            let norm = v.norm();
            if norm > 1e-6 {
                return v / Complex64::from(norm);
            }
        }
    }

    fn ginibre(&mut self, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| self.complex_normal())
    }

    fn hermitian_matrix(&mut self, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for p in 0..n {
            m[(p, p)] = Complex64::from(self.normal());
            for q in (p + 1)..n {
                let z = self.complex_normal() * std::f64::consts::FRAC_1_SQRT_2;
                m[(p, q)] = z;
                m[(q, p)] = z.conj();
            }
        }
        m
    }

    pub fn gaussian_dual(&mut self, kind: AlgebraKind) -> DualElement {
        match kind {
            AlgebraKind::So3 => DualElement::so3(self.vector3()),
            AlgebraKind::Unitary(n) => DualElement::from_hermitian_unchecked(self.hermitian_matrix(n), n),
        }
    }

    /// Random dual element with prescribed spectrum (`[r]`, the radius, on `so(3)`).
    pub fn spectrum_dual(&mut self, kind: AlgebraKind, spectrum: &[f64]) -> Result<DualElement> {
        match kind {
            AlgebraKind::So3 => {
                let [r] = spectrum else {
                    return Err(Error::Dimension {
                        expected: 1,
                        actual: spectrum.len(),
                    });
                };
                let v = self.vector3();
                Ok(DualElement::so3(v.normalize() * *r))
            }
            AlgebraKind::Unitary(n) => {
                if spectrum.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        actual: spectrum.len(),
                    });
                }
                let d = DualElement::diagonal(spectrum)?;
                lie::coadjoint_act(&self.group(kind), &d)
            }
        }
    }

    fn vector3(&mut self) -> Vector3<f64> {
        loop {
            let v = Vector3::new(self.normal(), self.normal(), self.normal());
            if v.norm() > 1e-6 {
                return v;
            }
        }
    }

    pub fn algebra(&mut self, kind: AlgebraKind) -> AlgebraElement {
        match kind {
            AlgebraKind::So3 => AlgebraElement::so3(self.vector3()),
            AlgebraKind::Unitary(n) => {
                let h = self.hermitian_matrix(n);
                AlgebraElement::from_skew_unchecked(h.map(|z| z * crate::linalg::I), n)
            }
        }
    }

    /// Haar-distributed group element.
    pub fn group(&mut self, kind: AlgebraKind) -> GroupElement {
        match kind {
            AlgebraKind::So3 => {
                let q = Quaternion::new(self.normal(), self.normal(), self.normal(), self.normal());
                let r: Matrix3<f64> = UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner();
                GroupElement::from_rotation_unchecked(r)
            }
            AlgebraKind::Unitary(n) => {
                let qr = self.ginibre(n).qr();
                let (q, r) = (qr.q(), qr.r());
                let mut u = q;
                for k in 0..n {
                    let d = r[(k, k)];
                    let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::from(1.0) };
                    let mut col = u.column_mut(k);
                    col *= phase;
                }
                GroupElement::from_unitary_unchecked(u)
            }
        }
    }

    /// Gaussian sample conditioned on strong regularity.
    pub fn strongly_regular_dual(&mut self, kind: AlgebraKind) -> DualElement {
        loop {
            let xi = self.gaussian_dual(kind);
            if gc::is_strongly_regular(&xi).is_strongly_regular {
                return xi;
            }
        }
    }

    /// Random real combination of the centralizer basis of a regular `ξ`.
    pub fn centralizer_element(&mut self, xi: &DualElement) -> Result<AlgebraElement> {
        let basis = lie::centralizer_basis(xi)?;
        let mut eta = AlgebraElement::zero(xi.kind());
        for b in &basis {
            eta = eta.try_add(&b.scale(self.normal()))?;
        }
        Ok(eta)
    }

    pub fn angles(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.angle()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn deterministic_in_seed() {
        let kind = AlgebraKind::Unitary(3);
        let a = sample_dual(kind, 42, &Ensemble::Gaussian).unwrap();
        let b = sample_dual(kind, 42, &Ensemble::Gaussian).unwrap();
        let c = sample_dual(kind, 43, &Ensemble::Gaussian).unwrap();
        assert_eq!(a, b);
        assert!(a.distance(&c).unwrap() > 1e-3);
    }

    #[test]
    fn spectrum_fixed_has_spectrum() {
        let kind = AlgebraKind::Unitary(3);
        for seed in 0..10 {
            let xi = sample_dual(kind, seed, &Ensemble::SpectrumFixed(vec![5.0, 2.0, 1.0])).unwrap();
            let ev = linalg::eigvalsh_desc(xi.matrix().unwrap());
            for (x, y) in ev.iter().zip([5.0, 2.0, 1.0]) {
                assert!((x - y).abs() < 1e-10);
            }
        }
        assert!(sample_dual(kind, 0, &Ensemble::SpectrumFixed(vec![1.0])).is_err());
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut s = Sampler::new(0);
        for n in 1..6 {
            let g = s.group(AlgebraKind::Unitary(n));
            let crate::lie::GroupRepr::Unitary(u) = g.repr() else { panic!() };
            assert!(linalg::unitary_defect(u) < 1e-12);
        }
        let r = s.group(AlgebraKind::So3);
        let crate::lie::GroupRepr::Rotation(m) = r.repr() else { panic!() };
        assert!((m.determinant() - 1.0).abs() < 1e-12);
    }
}
