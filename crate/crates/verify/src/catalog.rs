//! Every invariant the suites check, with its default tolerance.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    GcCheck,
    Brackets,
    Flows,
    Torus,
    Reduce,
    So3Demo,
    All,
}

impl SuiteName {
    pub const CONCRETE: [SuiteName; 6] = [
        SuiteName::GcCheck,
        SuiteName::Brackets,
        SuiteName::Flows,
        SuiteName::Torus,
        SuiteName::Reduce,
        SuiteName::So3Demo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::GcCheck => "gc-check",
            SuiteName::Brackets => "brackets",
            SuiteName::Flows => "flows",
            SuiteName::Torus => "torus",
            SuiteName::Reduce => "reduce",
            SuiteName::So3Demo => "so3-demo",
            SuiteName::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteName> {
        SuiteName::CONCRETE
            .into_iter()
            .chain([SuiteName::All])
            .find(|n| n.as_str() == s)
    }
}

impl std::fmt::Display for SuiteName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Invariant {
    pub id: &'static str,
    pub suite: SuiteName,
    /// Zero for counting invariants (number of violations).
    pub tolerance: f64,
    /// The mathematical statement the check instantiates.
    pub statement: &'static str,
}

const fn inv(id: &'static str, suite: SuiteName, tolerance: f64, statement: &'static str) -> Invariant {
    Invariant {
        id,
        suite,
        tolerance,
        statement,
    }
}

use SuiteName::*;

pub const CATALOG: &[Invariant] = &[
    inv("ladder-cardinality", GcCheck, 0.0, "the ladder has n(n+1)/2 components"),
    inv("interlacing", GcCheck, 1e-10, "eigenvalues of nested trailing blocks interlace (Cauchy)"),
    inv("top-row-invariance", GcCheck, 1e-9, "the top ladder row is invariant under the coadjoint action"),
    inv("ladder-lipschitz", GcCheck, 1e-12, "ladder values are 1-Lipschitz in the operator norm (Weyl)"),
    inv("gradient-fd", GcCheck, 1e-6, "closed-form ladder gradients agree with central differences"),
    inv("lattice", GcCheck, 1e-9, "exp(2π·dλ) is the identity: ladder gradients lie in the integral lattice"),
    inv("jacobian-rank", GcCheck, 0.0, "the ladder differential is surjective on the strongly regular locus"),
    inv("integrability-rank", GcCheck, 0.0, "the intermediate ladder is a completely integrable system on each regular orbit"),
    inv("bracket-antisymmetry", Brackets, 1e-10, "the Lie-Poisson bracket is antisymmetric"),
    inv("bracket-jacobi", Brackets, 1e-10, "the Lie-Poisson bracket satisfies the Jacobi identity"),
    inv("pairing-invariance", Brackets, 1e-10, "the pairing is invariant under the adjoint and coadjoint actions"),
    inv("ladder-commutativity", Brackets, 1e-8, "the ladder is a moment map for a Poisson torus action: its components Poisson-commute"),
    inv("ladder-commutativity-fd", Brackets, 1e-6, "ladder components Poisson-commute (finite-difference gradients)"),
    inv("flow-conservation", Flows, 1e-8, "every ladder value is conserved by every ladder flow"),
    inv("period-closed-form", Flows, 1e-9, "ladder flows are 2π-periodic (closed form)"),
    inv("period-rk4", Flows, 1e-5, "ladder flows are 2π-periodic (rk4 integration)"),
    inv("rk4-agreement", Flows, 1e-6, "the closed-form flow agrees with rk4 integration"),
    inv("torus-periodicity", Torus, 1e-8, "every coordinate circle of the big torus acts with period 2π"),
    inv("torus-additivity", Torus, 1e-7, "the big torus acts: θ₂·(θ₁·ξ) = (θ₁+θ₂)·ξ"),
    inv("order-independence", Torus, 1e-8, "ladder flows commute, so composition order is irrelevant"),
    inv("kappa-recovery", Torus, 1e-10, "the top-row gradients form a basis of the coadjoint stabilizer algebra"),
    inv("tau-homomorphism", Torus, 1e-8, "the stabilizer of ξ is isomorphic to the small torus as a group"),
    inv("tau-compatibility", Torus, 1e-7, "the stabilizer and the small torus act identically on ξ"),
    inv("level-residual", Reduce, 1e-8, "the solved point lies on the level set of the moment map"),
    inv("moment-equivariance", Reduce, 1e-10, "the moment map is equivariant for the group action"),
    inv("torus-equivariance", Reduce, 1e-7, "the ladder composed with the moment map is a moment map for the lifted torus action"),
    inv("dimension-identity", Reduce, 0.0, "dim ker dμ − ℓ = dim ker dλ_M − b at level points"),
    inv("kernel-codimension", Reduce, 0.0, "the intermediate torus fills the gap: dim ker dλ_M − dim ker dμ = u"),
    inv("freeness-equivalence", Reduce, 0.0, "the stabilizer acts freely on the level set iff the big torus acts freely on its level set"),
    inv("degenerate-stabilizers", Reduce, 0.0, "on a single orbit at its own moment both stabilizers have dimension ℓ"),
    inv("collective-identity", Reduce, 1e-6, "on the level set, g·m equals the small-torus action of τ(g) on m"),
    inv("saturation", Reduce, 1e-6, "the intermediate torus carries the torus level set onto the group level set, uniquely"),
    inv("ambiguous-saturation", Reduce, 0.0, "the intermediate torus acts freely: saturation has a unique solution"),
    inv("form-welldef", Reduce, 1e-7, "the symplectic form descends identically through both quotients"),
    inv("so3-classification", So3Demo, 0.0, "points on the rotation axis are not strongly regular, generic points are"),
    inv("so3-rotation-flow", So3Demo, 1e-9, "the flow of the third coordinate is rotation about the third axis"),
    inv("so3-rotation-rk4", So3Demo, 1e-7, "rk4 integration of the third-coordinate flow matches the rotation"),
    inv("so3-level-solving", So3Demo, 0.0, "two spheres of radii 1 and 2 reach exactly the targets allowed by the triangle inequality"),
    inv("so3-bookkeeping", So3Demo, 0.0, "dimension bookkeeping for two spheres: dim ker dμ = 1, dim ker dλ_M = 2"),
];

pub fn lookup(id: &str) -> Option<&'static Invariant> {
    CATALOG.iter().find(|i| i.id == id)
}

pub fn for_suite(suite: SuiteName) -> impl Iterator<Item = &'static Invariant> {
    CATALOG.iter().filter(move |i| i.suite == suite)
}

pub fn ids() -> Vec<&'static str> {
    CATALOG.iter().map(|i| i.id).collect()
}
