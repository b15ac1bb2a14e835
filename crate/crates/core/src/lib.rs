//! Exact-arithmetic lattices with finite-group actions.
//!
//! The crate builds root systems and their Weyl-group lattices in exact
//! rational coordinates, computes group cohomology of integral lattices in
//! degrees 0 through 2 together with the restriction-kernel invariants
//! Sha^1_omega and Sha^2_omega, and ships an executable verification suite
//! for the lattice-theoretic facts the library is organized around:
//! permutation resolutions of weight lattices in types A and C, nonvanishing
//! obstructions for the remaining types, and an explicit family where the
//! two obstructions diverge.
//!
//! All arithmetic is exact: `BigInt` matrices everywhere, `BigRational`
//! ambient coordinates at root-system construction time, no floating point.

pub mod cohomology;
pub mod error;
pub mod glattice;
pub mod group;
pub mod jsonio;
pub mod matrix;
pub mod rational;
pub mod roots;
pub mod scenarios;

pub use error::Error;
pub use matrix::{
    cokernel_invariants, kernel_basis, quotient_group, smith_normal_form, AbelianGroupInvariants,
    IntMatrix, SmithDecomposition,
};
