//! Solver library for quadratic fermionic Lindbladians in one dimension.
//!
//! The library treats open free-fermion chains whose Lindblad generator is
//! quadratic: a Hermitian hopping matrix plus linear loss/gain jump
//! operators. It computes non-equilibrium steady states, normal modes, and
//! occupation dynamics by three mutually validating routes:
//!
//! * an adjoint-fermion normal-mode decomposition ([`thirdq`]) feeding the
//!   steady-state and mode observables ([`ness`]) and the interference
//!   expansion of occupation dynamics ([`dynamics`]);
//! * damping-matrix propagation of the correlation matrix ([`damping`]);
//! * a momentum-space equation-of-motion solver for periodic chains
//!   ([`kspace`]).
//!
//! A dense brute-force representation at small sizes ([`oracle`]) pins
//! every sign and normalization convention. The flagship application is
//! the dissipative SSH chain, whose site occupations relax through a
//! traveling crossover front (chiral damping) even though neither the
//! steady state nor any single normal mode distinguishes the chain ends:
//! the asymmetry lives entirely in the interference between normal-mode
//! pairs.

pub mod damping;
pub mod dynamics;
pub mod error;
pub mod kspace;
pub mod linalg;
pub mod majorana;
pub mod model;
pub mod ness;
pub mod oracle;
pub mod thirdq;

pub use error::{Error, Result};
pub use model::{
    build_general_jumps, build_ssh_hamiltonian, build_ssh_model, build_standard_jumps,
    BoundaryCondition, HamiltonianSpec, JumpOperatorSpec, ModelSpec, SshParams,
};
pub use ness::OccupationProfile;
pub use thirdq::{decompose_ssh, RapidityDecomposition, StructureMatrix};
