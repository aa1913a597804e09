//! Independent reference computations.

pub mod crank_nicolson;
pub mod fd_eigen;
pub mod fourier;
pub mod interface;

pub use crank_nicolson::{crank_nicolson, CnSolution};
pub use fd_eigen::{fd_eigenvalues, fd_eigenvalues_raw, fd_eigenvector};
pub use fourier::fourier_solution;
pub use interface::{
    assemble_system, dn_bruteforce, dn_switchform, dn_via_det, en_det, interface_solution, psi_discrete, GlobalRelationSystem,
    InterfacePartition, LambdaFactors,
};
