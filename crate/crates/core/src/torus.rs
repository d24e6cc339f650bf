//! The big-torus action on the strongly regular locus of the dual.
//!
//! Component `a` of the torus acts by the Hamiltonian flow of `λ_a`. Since
//! `d λ_a = i (0 ⊕ v v*)` is constant along its own flow, the flow is exact
//! conjugation `ξ ↦ e^{tη} ξ e^{−tη}` with `η = d_ξ λ_a`; the RK4 path
//! integrates `ξ' = [d_ξ λ_a, ξ]` and serves as a cross-check.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gc::{self, LadderIndex};
use crate::lie::{self, AlgebraElement, AlgebraKind, DualElement, GroupElement, GroupRepr, Repr};
use crate::linalg;
use crate::tolerance::Tolerances;

pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance on the circle `R / 2πZ`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A point of `T_big = T_small × T_int`: `b` angles in `[0, 2π)`, the first
/// `ℓ` forming the small block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TorusJson", into = "TorusJson")]
pub struct TorusElement {
    kind: AlgebraKind,
    angles: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct TorusJson {
    #[serde(flatten)]
    kind: AlgebraKind,
    angles: Vec<f64>,
}

impl TryFrom<TorusJson> for TorusElement {
    type Error = Error;

    fn try_from(j: TorusJson) -> Result<Self> {
        TorusElement::new(j.kind, j.angles)
    }
}

impl From<TorusElement> for TorusJson {
    fn from(t: TorusElement) -> Self {
        TorusJson {
            kind: t.kind,
            angles: t.angles,
        }
    }
}

impl TorusElement {
    pub fn new(kind: AlgebraKind, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != kind.big_rank() {
            return Err(Error::Dimension {
                expected: kind.big_rank(),
                actual: angles.len(),
            });
        }
        if angles.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidValue("non-finite angle".into()));
        }
        Ok(Self {
            kind,
            angles: angles.into_iter().map(reduce_angle).collect(),
        })
    }

    pub fn identity(kind: AlgebraKind) -> Self {
        Self {
            kind,
            angles: vec![0.0; kind.big_rank()],
        }
    }

    pub fn from_blocks(kind: AlgebraKind, small: &[f64], int: &[f64]) -> Result<Self> {
        if small.len() != kind.rank() {
            return Err(Error::Dimension {
                expected: kind.rank(),
                actual: small.len(),
            });
        }
        Self::new(kind, small.iter().chain(int).copied().collect())
    }

    /// Small block set to `small`, intermediate block zero.
    pub fn pad_small(kind: AlgebraKind, small: &[f64]) -> Result<Self> {
        Self::from_blocks(kind, small, &vec![0.0; kind.int_rank()])
    }

    /// Small block zero, intermediate block set to `int`.
    pub fn pad_int(kind: AlgebraKind, int: &[f64]) -> Result<Self> {
        Self::from_blocks(kind, &vec![0.0; kind.rank()], int)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn small_block(&self) -> &[f64] {
        &self.angles[..self.kind.rank()]
    }

    pub fn int_block(&self) -> &[f64] {
        &self.angles[self.kind.rank()..]
    }

    pub fn compose(&self, other: &TorusElement) -> Result<TorusElement> {
        self.kind.ensure_same(other.kind)?;
        Self::new(
            self.kind,
            self.angles.iter().zip(&other.angles).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn inverse(&self) -> TorusElement {
        Self::new(self.kind, self.angles.iter().map(|a| -a).collect()).expect("same length")
    }

    /// Largest circular distance over components.
    pub fn distance(&self, other: &TorusElement) -> Result<f64> {
        self.kind.ensure_same(other.kind)?;
        Ok(self
            .angles
            .iter()
            .zip(&other.angles)
            .map(|(a, b)| circular_distance(*a, *b))
            .fold(0.0, f64::max))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowMethod {
    ClosedForm,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub method: FlowMethod,
    /// RK4 step size.
    pub step: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            method: FlowMethod::ClosedForm,
            step: 0.01,
        }
    }
}

impl FlowConfig {
    pub fn rk4(step: f64) -> Self {
        Self {
            method: FlowMethod::Rk4,
            step,
        }
    }
}

/// Hamiltonian vector field of `λ_idx` at `ξ`: `[d_ξ λ_idx, ξ]`.
pub fn generating_vector_dual(xi: &DualElement, idx: LadderIndex) -> Result<DualElement> {
    lie::ad_star(&gc::grad_lambda(xi, idx)?, xi)
}

/// Flow of `λ_idx` for time `t` starting at a strongly regular `ξ`.
pub fn flow_dual(xi: &DualElement, idx: LadderIndex, t: f64, cfg: &FlowConfig) -> Result<DualElement> {
    gc::require_strongly_regular(xi)?;
    match cfg.method {
        FlowMethod::ClosedForm => closed_flow(xi, idx, t),
        FlowMethod::Rk4 => rk4_flow(xi, idx, t, cfg.step),
    }
}

// `d_ξ λ_idx` is constant along its own flow, so the flow is a conjugation.
fn closed_flow(xi: &DualElement, idx: LadderIndex, t: f64) -> Result<DualElement> {
    let eta = gc::grad_lambda(xi, idx)?;
    lie::coadjoint_act(&lie::exp_algebra(&eta.scale(t)), xi)
}

fn rk4_flow(xi: &DualElement, idx: LadderIndex, t: f64, step: f64) -> Result<DualElement> {
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(Error::InvalidValue(format!("rk4 step must be positive, got {step}")));
    }
    if t == 0.0 {
        return Ok(xi.clone());
    }
    let steps = (t.abs() / step).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let field = |x: &DualElement| generating_vector_dual(x, idx);
    let mut x = xi.clone();
    for s in 0..steps {
        let k1 = field(&x)?;
        let k2 = field(&x.try_add(&k1.scale(h / 2.0))?)?;
        let k3 = field(&x.try_add(&k2.scale(h / 2.0))?)?;
        let k4 = field(&x.try_add(&k3.scale(h))?)?;
        let incr = k1
            .try_add(&k2.scale(2.0))?
            .try_add(&k3.scale(2.0))?
            .try_add(&k4)?
            .scale(h / 6.0);
        x = x.try_add(&incr)?;
        if !gc::is_strongly_regular(&x).is_strongly_regular {
            return Err(Error::LeftStrongRegularLocus {
                t: h * (s + 1) as f64,
            });
        }
    }
    Ok(x)
}

/// Applies the flows of the ladder components for the given times, in the
/// given order of flat indices (flat enumeration order when `None`).
pub fn flow_composite(xi: &DualElement, times: &[f64], order: Option<&[usize]>) -> Result<DualElement> {
    let ladder = gc::ladder(xi.kind());
    if times.len() != ladder.len() {
        return Err(Error::Dimension {
            expected: ladder.len(),
            actual: times.len(),
        });
    }
    let default_order: Vec<usize> = (0..ladder.len()).collect();
    let order = order.unwrap_or(&default_order);
    if order.iter().any(|&a| a >= ladder.len()) {
        return Err(Error::IndexOutOfRange {
            kind: xi.kind(),
            j: order.iter().copied().max().unwrap_or(0),
            k: 0,
        });
    }
    // the flows preserve the ladder, hence strong regularity
    gc::require_strongly_regular(xi)?;
    let mut x = xi.clone();
    for &a in order {
        if times[a] != 0.0 {
            x = closed_flow(&x, ladder[a], times[a])?;
        }
    }
    Ok(x)
}

pub fn act_torus_dual(xi: &DualElement, theta: &TorusElement) -> Result<DualElement> {
    xi.kind().ensure_same(theta.kind())?;
    flow_composite(xi, theta.angles(), None)
}

/// Coordinates of `η ∈ g_ξ` in the basis `{d_ξ λ_{01}, …, d_ξ λ_{0ℓ}}`.
pub fn kappa(xi: &DualElement, eta: &AlgebraElement) -> Result<Vec<f64>> {
    xi.kind().ensure_same(eta.kind())?;
    let tol = Tolerances::default();
    let defect = lie::ad_star(eta, xi)?.norm();
    if defect > tol.commute * xi.norm().max(1.0) * eta.norm().max(1.0) {
        return Err(Error::NotInCentralizer { defect });
    }
    let basis = lie::centralizer_basis(xi)?;
    // the basis is orthonormal
    let ec = eta.coords();
    let x: Vec<f64> = basis.iter().map(|b| b.coords().dot(&ec)).collect();
    let mut recon = AlgebraElement::zero(xi.kind());
    for (b, c) in basis.iter().zip(&x) {
        recon = recon.try_add(&b.scale(*c))?;
    }
    let residual = recon.distance(eta)?;
    if residual > 1e-9 * eta.norm().max(1.0) {
        return Err(Error::NotInCentralizer { defect: residual });
    }
    Ok(x)
}

/// The isomorphism `G_ξ → T_small` integrating `kappa`.
pub fn tau(xi: &DualElement, g: &GroupElement) -> Result<TorusElement> {
    xi.kind().ensure_same(g.kind())?;
    let kind = xi.kind();
    let moved = lie::coadjoint_act(g, xi)?;
    let defect = moved.distance(xi)?;
    if defect > Tolerances::default().commute * xi.norm().max(1.0) {
        return Err(Error::NotInStabilizer { defect });
    }
    let small = match (xi.repr(), g.repr()) {
        (Repr::Vector(v), GroupRepr::Rotation(r)) => {
            let axis = v / v.norm();
            let skew: Matrix3<f64> = (r - r.transpose()) * 0.5;
            let sin = axis.dot(&nalgebra::Vector3::new(skew[(2, 1)], skew[(0, 2)], skew[(1, 0)]));
            let cos = (r.trace() - 1.0) / 2.0;
            vec![sin.atan2(cos)]
        }
        (Repr::Matrix(m), GroupRepr::Unitary(u)) => {
            let regular = lie::regularity(xi);
            if !regular.is_regular {
                return Err(Error::NotRegular {
                    gap: regular.min_eigen_gap,
                });
            }
            let eig = linalg::eigh_desc(m);
            (0..m.nrows())
                .map(|k| {
                    let v = eig.vector(k);
                    (v.adjoint() * u * &v)[(0, 0)].arg()
                })
                .collect()
        }
        _ => unreachable!("kinds checked"),
    };
    let theta = TorusElement::pad_small(kind, &small)?;
    let basis = lie::centralizer_basis(xi)?;
    let mut eta = AlgebraElement::zero(kind);
    for (b, x) in basis.iter().zip(theta.small_block()) {
        eta = eta.try_add(&b.scale(*x))?;
    }
    let residual = lie::exp_algebra(&eta).distance(g)?;
    if residual > 1e-9 * (kind.size() as f64).sqrt() {
        return Err(Error::NotInStabilizer { defect: residual });
    }
    Ok(theta)
}

/// `b` minus the rank of the Hamiltonian directions `{[d_ξ λ_a, ξ]}`: the
/// dimension of the identity component of the torus stabilizer of `ξ`.
pub fn torus_stabilizer_dim_dual(xi: &DualElement) -> Result<usize> {
    gc::require_strongly_regular(xi)?;
    let kind = xi.kind();
    let ladder = gc::ladder(kind);
    let mut m = DMatrix::zeros(ladder.len(), kind.dim());
    for (a, idx) in ladder.iter().enumerate() {
        m.set_row(a, &generating_vector_dual(xi, *idx)?.coords().transpose());
    }
    Ok(ladder.len() - linalg::numeric_rank(&m, Tolerances::default().rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;
    use nalgebra::Vector3;

    #[test]
    fn torus_element_validation() {
        let kind = AlgebraKind::Unitary(3);
        assert!(TorusElement::new(kind, vec![0.0; 5]).is_err());
        let t = TorusElement::new(kind, vec![TAU, -1.0, 7.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.angles()[0], 0.0);
        assert!((t.angles()[1] - (TAU - 1.0)).abs() < 1e-15);
        assert!(t.angles().iter().all(|a| (0.0..TAU).contains(a)));
        assert_eq!(t.small_block().len(), 3);
        assert_eq!(t.int_block().len(), 3);
        let id = TorusElement::identity(kind);
        assert!(t.compose(&t.inverse()).unwrap().distance(&id).unwrap() < 1e-12);
    }

    #[test]
    fn flow_time_zero_is_identity() {
        let mut s = Sampler::new(2);
        let xi = s.strongly_regular_dual(AlgebraKind::Unitary(3));
        for idx in gc::ladder(xi.kind()) {
            let out = flow_dual(&xi, idx, 0.0, &FlowConfig::default()).unwrap();
            assert!(out.distance(&xi).unwrap() < 1e-14);
        }
    }

    #[test]
    fn so3_int_flow_rotates_about_z() {
        let xi = DualElement::so3(Vector3::new(1.0, 0.0, 1.0));
        let t = 0.7;
        let out = flow_dual(&xi, LadderIndex::new(1, 1), t, &FlowConfig::default()).unwrap();
        let expected = Vector3::new(t.cos(), t.sin(), 1.0);
        assert!((out.vector().unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn flow_requires_strong_regularity() {
        let xi = DualElement::diagonal(&[2.0, -1.0]).unwrap();
        assert!(matches!(
            flow_dual(&xi, LadderIndex::new(0, 1), 1.0, &FlowConfig::default()),
            Err(Error::NotStronglyRegular(_))
        ));
    }

    #[test]
    fn rk4_reports_leaving_the_locus() {
        // At h = √6 one RK4 step of the λ_11 flow on u(2) halves the
        // off-diagonal entry, so the iterate collapses onto the diagonal
        // matrices, where the ladder differential drops rank.
        let m = crate::linalg::CMatrix::from_row_slice(
            2,
            2,
            &[1.0, 0.5, 0.5, -1.0].map(num_complex::Complex64::from),
        );
        let xi = DualElement::hermitian(m).unwrap();
        let h = 6f64.sqrt();
        let out = flow_dual(&xi, LadderIndex::new(1, 1), 60.0 * h, &FlowConfig::rk4(h));
        assert!(matches!(out, Err(Error::LeftStrongRegularLocus { .. })), "{out:?}");
        let bad = rk4_flow(&xi, LadderIndex::new(1, 1), 1.0, -1.0);
        assert!(matches!(bad, Err(Error::InvalidValue(_))));
    }

    #[test]
    fn kappa_basics() {
        let mut s = Sampler::new(8);
        let xi = s.strongly_regular_dual(AlgebraKind::Unitary(3));
        let g2 = gc::grad_lambda(&xi, LadderIndex::new(0, 2)).unwrap();
        let x = kappa(&xi, &g2).unwrap();
        for (i, v) in x.iter().enumerate() {
            assert!((v - if i == 1 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
        let zero = kappa(&xi, &AlgebraElement::zero(xi.kind())).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-15));
        let off = s.algebra(xi.kind());
        assert!(matches!(kappa(&xi, &off), Err(Error::NotInCentralizer { .. })));
    }

    #[test]
    fn tau_basics() {
        let mut s = Sampler::new(12);
        let xi = s.strongly_regular_dual(AlgebraKind::Unitary(3));
        let kind = xi.kind();
        let t = tau(&xi, &GroupElement::identity(kind)).unwrap();
        assert!(t.distance(&TorusElement::identity(kind)).unwrap() < 1e-12);
        let g = s.group(kind);
        assert!(matches!(tau(&xi, &g), Err(Error::NotInStabilizer { .. })));

        let so3 = DualElement::so3(Vector3::new(0.0, 2.0, 0.0));
        let rot = lie::exp_algebra(&AlgebraElement::so3(Vector3::new(0.0, 1.3, 0.0)));
        let t = tau(&so3, &rot).unwrap();
        assert!((t.angles()[0] - 1.3).abs() < 1e-12);
        assert_eq!(t.angles()[1], 0.0);
    }

    #[test]
    fn stabilizer_dims() {
        let mut s = Sampler::new(13);
        let xi = s.strongly_regular_dual(AlgebraKind::Unitary(2));
        assert_eq!(torus_stabilizer_dim_dual(&xi).unwrap(), 2);
        let so3 = DualElement::so3(Vector3::new(1.0, 0.0, 1.0));
        assert_eq!(torus_stabilizer_dim_dual(&so3).unwrap(), 1);
        let bad = DualElement::diagonal(&[1.0, 0.0]).unwrap();
        assert!(torus_stabilizer_dim_dual(&bad).is_err());
    }

    #[test]
    fn torus_json() {
        let t = TorusElement::new(AlgebraKind::Unitary(2), vec![0.5, 1.0, 2.0]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"kind":"unitary","n":2,"angles":[0.5,1.0,2.0]}"#);
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<TorusElement>(r#"{"kind":"so3","angles":[1.0]}"#).is_err());
    }
}
