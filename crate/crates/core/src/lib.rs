//! Single-photon scattering and bound states of a giant two-level atom coupled
//! at two or `N + 1` points to an infinite coupled-resonator waveguide.
//!
//! * [`model`]: parameters, lattices and real-space Hamiltonians.
//! * [`numerics`]: adaptive quadrature, bracketed root finding, dense
//!   symmetric eigensolver.
//! * [`scattering`]: reflection and transmission from closed forms, from the
//!   dressed-mode linear system, and from a finite-lattice oracle.
//! * [`boundstates`]: bound-state energies from the momentum-space
//!   transcendental equations and from real-space diagonalization, photon
//!   distributions, localization classification and the critical coupling.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundstates;
pub mod error;
pub mod model;
pub mod numerics;
pub mod scattering;

pub use error::{Error, Result};
pub use model::{
    build_real_space_hamiltonian, dispersion, outgoing_wave_hamiltonian, Boundary, CouplingCase, Dispersion,
    Lattice, ModelParams,
};
