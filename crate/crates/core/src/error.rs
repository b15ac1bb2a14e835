//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group too large: closure exceeded cap {0}")]
    GroupTooLarge(usize),

    #[error("element of infinite order")]
    InfiniteOrder,

    #[error("subgroup cap exceeded: {0}")]
    SubgroupCapExceeded(usize),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generator is not unimodular")]
    NotUnimodular,

    #[error("{0}")]
    Membership(String),

    #[error("map is not equivariant: violated by generator {0}")]
    NotEquivariant(usize),

    #[error("homomorphism property violated at generator {gen} times element {element}")]
    NotAHomomorphism { gen: usize, element: usize },

    #[error("invalid Dynkin type: {0}")]
    InvalidDynkinType(String),

    #[error("invalid node subset: {0}")]
    InvalidIndices(String),

    #[error("excluded type: {0}")]
    ExcludedType(String),

    #[error("subgroup is not elementary abelian of exponent 2")]
    NotElementaryAbelianTwo,

    #[error("memory guard exceeded: needs {needed} entries, guard is {guard}")]
    MemoryGuard { needed: u128, guard: u128 },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("rational system has no solution")]
    RationalSolve,

    #[error("matrix is not integral")]
    NotIntegral,

    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
}
