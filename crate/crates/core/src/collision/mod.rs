//! Binary collisions in the plane and the two collision operators: the
//! continuous one, evaluated by quadrature as a reference, and the lattice
//! operator Q^h on hZ^2.

mod density;
mod discrete;
mod geometry;
mod kernel;
mod lattice;
mod reference;

pub use density::{Maxwellian, MaxwellianMixture, VelocityDensity};
pub use discrete::{
    collision_invariants, q_discrete, CollisionInvariants, DiscreteOperator, Domain,
};
pub use geometry::{post_collision, CollisionPair, LatticeCollision, Vec2};
pub use kernel::KernelSpec;
pub use lattice::{to_lattice, LatticeDistribution, Sampling};
pub use reference::{
    angular_mean, g_eval, q_reference, q_reference_detailed, GValue, QuadratureConfig,
    ReferenceValue,
};

pub(crate) use lattice::index_radius_sq;
