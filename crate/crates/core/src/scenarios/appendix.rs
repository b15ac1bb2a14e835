//! The elementary abelian counterexample: for G = (Z/p)^r the two
//! obstruction groups attached to the augmentation ideal and the norm
//! cokernel diverge. Sha^1_omega(G, I_G) = Z/p^{r-1} (computed both by the
//! direct degree-1 route and by the Tate-H^0 kernel route), while
//! Sha^2_omega(G, J_G) is killed by p; for r >= 3 the exponents differ.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

use crate::cohomology::{sha_omega, tate_h0_restriction_kernel, CohomologyOptions};
use crate::error::Error;
use crate::glattice::{augmentation_and_norm, iso_search, GLattice, IsoResult};
use crate::group::FiniteMatrixGroup;
use crate::matrix::IntMatrix;
use crate::scenarios::{Provenance, ScenarioReport};

/// (Z/p)^r as block-diagonal integer matrices: each factor is the companion
/// matrix of 1 + x + ... + x^{p-1} (a single -1 when p = 2).
pub fn elementary_abelian_group(p: usize, r: usize) -> Result<Arc<FiniteMatrixGroup>, Error> {
    if p < 2 || r < 1 {
        return Err(Error::Unsupported("need p >= 2 and r >= 1".into()));
    }
    let block = p - 1;
    let dim = r * block;
    let mut gens = Vec::with_capacity(r);
    for k in 0..r {
        let base = k * block;
        let m = IntMatrix::from_fn(dim, dim, |i, j| {
            if i < base || i >= base + block {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else if j < base || j >= base + block {
                BigInt::zero()
            } else {
                // companion block
                let (bi, bj) = (i - base, j - base);
                if bj == block - 1 {
                    -BigInt::one()
                } else if bi == bj + 1 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }
        });
        gens.push(m);
    }
    let order = (p as u64).pow(r as u32) as usize;
    Ok(Arc::new(FiniteMatrixGroup::generate_closure(&gens, order + 1)?))
}

pub fn appendix_counterexample(p: usize, r: usize) -> Result<ScenarioReport, Error> {
    let mut report = ScenarioReport::new(format!("appendix_{}_{}", p, r));
    let opts = CohomologyOptions::default();
    let order = (p as u128).pow(r as u32);
    // Degree-2 guard on the regular-representation-sized lattices involved.
    if order * order * order * (order - 1) > opts.c3_entries {
        return Err(Error::MemoryGuard {
            needed: order * order * order * (order - 1),
            guard: opts.c3_entries,
        });
    }
    let g = elementary_abelian_group(p, r)?;
    report.claim(
        "group order",
        format!("{}", order),
        format!("{}", g.order()),
        Provenance::Definition,
    );
    let an = augmentation_and_norm(&g)?;
    report.claim(
        "augmentation and norm sequences are exact",
        "true",
        format!(
            "{}",
            an.aug_sequence.flags.all() && an.norm_sequence.flags.all()
        ),
        Provenance::Definition,
    );
    // I and J are dual to one another.
    let dual_j = an.norm_cokernel.dual();
    let iso = iso_search(
        &an.aug_ideal,
        &dual_j,
        1,
        Some(&IntMatrix::identity(an.aug_ideal.rank)),
        1000,
    )?;
    report.claim(
        "I_G is isomorphic to the dual of J_G",
        "isomorphic",
        match iso {
            IsoResult::Isomorphic(_) => "isomorphic".into(),
            other => format!("{:?}", other),
        },
        Provenance::Definition,
    );

    // Route one: Sha^1_omega(G, I_G) directly in degree 1.
    let sha1 = sha_omega(&an.aug_ideal, 1, &opts)?;
    let expected = BigInt::from(p as u64).pow(r as u32 - 1);
    let expected_str = if expected.is_one() {
        "0".to_string()
    } else {
        format!("Z/{}", expected)
    };
    report.claim(
        "Sha^1_omega(G, I_G), direct degree-1 route",
        &expected_str,
        format!("{}", sha1.invariants),
        Provenance::Theorem,
    );
    // Route two: the Tate-H^0 kernel Ker[Z/|G| -> prod Z/|g|].
    let tate_kernel = tate_h0_restriction_kernel(&GLattice::trivial(&g, 1))?;
    report.claim(
        "Sha^1_omega(G, I_G), Tate-H^0 kernel route",
        &expected_str,
        format!("{}", tate_kernel),
        Provenance::Theorem,
    );
    report.claim(
        "the two routes agree",
        "true",
        format!("{}", sha1.invariants == tate_kernel),
        Provenance::Theorem,
    );
    if r >= 3 {
        report.claim(
            "Sha^1_omega(G, I_G) is not killed by p",
            "true",
            format!("{}", sha1.invariants.exponent() > BigInt::from(p as u64)),
            Provenance::Theorem,
        );
    }

    // Sha^2_omega(G, J_G): killed by p, nonzero for r >= 2.
    let sha2 = sha_omega(&an.norm_cokernel, 2, &opts)?;
    let exp2 = sha2.invariants.exponent();
    report.claim(
        "Sha^2_omega(G, J_G) exponent divides p",
        "true",
        format!(
            "{}",
            !exp2.is_zero() && (BigInt::from(p as u64) % exp2.clone().max(BigInt::one())).is_zero()
        ),
        Provenance::Theorem,
    );
    if r >= 2 {
        report.claim(
            "Sha^2_omega(G, J_G) is nonzero",
            "nonzero",
            if sha2.invariants.is_trivial() {
                String::from("zero")
            } else {
                String::from("nonzero")
            },
            Provenance::Theorem,
        );
    }
    report.claim(
        "Sha^2_omega(G, J_G) value",
        format!("{}", sha2.invariants),
        format!("{}", sha2.invariants),
        Provenance::Oracle,
    );
    if r >= 3 {
        report.claim(
            "the two obstruction groups have different exponents",
            "true",
            format!("{}", sha1.invariants.exponent() != exp2),
            Provenance::Theorem,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_construction() {
        let g = elementary_abelian_group(2, 3).unwrap();
        assert_eq!(g.order(), 8);
        let g = elementary_abelian_group(3, 2).unwrap();
        assert_eq!(g.order(), 9);
        for e in &g.elements {
            // every nontrivial element has order 3
            if !e.matrix.is_identity() {
                let sq = e.matrix.mul(&e.matrix);
                assert!(!sq.is_identity());
                assert!(sq.mul(&e.matrix).is_identity());
            }
        }
    }

    #[test]
    fn appendix_2_2() {
        let r = appendix_counterexample(2, 2).unwrap();
        assert!(r.passed(), "{:#?}", r);
    }
}
