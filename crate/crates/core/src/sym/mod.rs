//! Exact symbolic verification with κ as an indeterminate.

pub mod geometry;
pub mod mechanics;
pub mod ring;
pub mod suite;

pub use geometry::{
    killing_residuals, lie_derivative_metric, measure_lie_derivative, vf_commutator, SymMetric,
    VectorField2,
};
pub use mechanics::{
    geodesic_hamiltonian, hamiltonian, noether_j, noether_kinetic, noether_p1, noether_p2,
    poisson_bracket, potential,
};
pub use ring::{EvalPoint, Exponents, RawMonomial, RawSum, RingElement, Var};
pub use suite::{run_identity_suite, IdentityCheck, SuiteReport};
