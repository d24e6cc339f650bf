//! Gelfand–Cetlin integrable systems on `u(n)*` and `so(3)*`.
//!
//! The crate is organised in four layers:
//!
//! * [`lie`]: the compact Lie algebra, its dual, the invariant pairing,
//!   adjoint and coadjoint actions and the Lie–Poisson bracket.
//! * [`gc`]: the eigenvalue ladder of trailing principal blocks, its exact
//!   gradients, strong regularity and Jacobian rank analysis.
//! * [`torus`]: the big-torus action generated by the ladder on the
//!   strongly regular locus, together with the maps `kappa` and `tau`
//!   identifying a coadjoint stabilizer with the small torus.
//! * [`hamiltonian`]: products of regular coadjoint orbits, their moment
//!   maps, the lifted torus action and the comparison of the nonabelian
//!   and abelian symplectic quotients at sampled level points.
//!
//! JSON encodings of the public data types live in [`json`].

pub mod error;
pub mod gc;
pub mod hamiltonian;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod sample;
pub mod tolerance;
pub mod torus;

pub use error::{Error, Result};
pub use hamiltonian::{
    LevelKind, OrbitSpec, ProductPoint, ProductSpace, ReductionReport, TangentVector,
};
pub use gc::{GcPattern, LadderIndex, StrongRegularityReport};
pub use lie::{AlgebraElement, AlgebraKind, DualElement, GroupElement, RegularityReport};
pub use sample::{sample_dual, Ensemble, Sampler};
pub use tolerance::Tolerances;
pub use torus::{FlowConfig, FlowMethod, TorusElement};
