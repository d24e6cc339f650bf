//! Compact Lie algebras `u(n)` and `so(3)`, their duals and groups.
//!
//! `u(n)*` is identified with Hermitian matrices through the pairing
//! `⟨η, ξ⟩ = −i tr(η ξ)`; `so(3)` and its dual are both `R³` with the dot
//! product, cross product as bracket and rotations as coadjoint action.

mod element;
mod kind;
mod ops;

pub use element::{AlgebraElement, DualElement, GroupElement, GroupRepr, Repr};
pub use kind::AlgebraKind;
pub use ops::{
    ad_star, adjoint_act, algebra_basis, bracket, centralizer_basis, centralizer_basis_with,
    coadjoint_act, dual_basis, exp_algebra, lie_poisson_bracket, pair, regularity,
    regularity_with, sweeping, RegularityReport,
};
