//! Numerical kernels shared by the scattering and bound-state code.

mod eigen;
mod linear;
mod quadrature;
mod roots;

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use linear::solve_complex;
pub use quadrature::{integrate, integrate_removable, QuadratureSpec};
pub use roots::{find_root_bracketed, geometric_ladder, RootSpec};
