//! The permutation resolutions of the weight lattices in types A and C:
//! exact sequences 0 -> Z -> sum Z e_i -> P(A_n) -> 0 and
//! 0 -> sum Z g_i -> sum (Z a_i + Z b_i) -> P(C_n) -> 0, with exactness,
//! permutation-kernel certification, and the vanishing sweep of Sha^1 over
//! all subgroups.

use num_bigint::BigInt;
use num_traits::One;
use std::sync::Arc;

use crate::cohomology::{sha_omega, CohomologyOptions};
use crate::error::Error;
use crate::glattice::{
    is_permutation_basis, iso_search, transport_lattice, EquivariantMap, GLattice, IsoResult,
    LatticeExactSequence, PermBasisResult,
};
use crate::group::FiniteMatrixGroup;
use crate::matrix::{kernel_basis, IntMatrix};
use crate::roots::{build, lattice_pair, DynkinType, Family};
use crate::scenarios::{Provenance, ScenarioReport};

/// The middle permutation group of the type-A resolution: S_{n+1} as
/// permutation matrices, generated by the A_n simple reflections.
fn symmetric_group(n: usize) -> Result<Arc<FiniteMatrixGroup>, Error> {
    let rs = build(DynkinType::new(Family::A, n)?)?;
    let gens: Vec<IntMatrix> = rs
        .weyl_gens_ambient
        .iter()
        .map(|m| m.to_int_matrix())
        .collect::<Result<_, _>>()?;
    Ok(Arc::new(FiniteMatrixGroup::generate_closure(&gens, 1_000_000)?))
}

/// 0 -> Z -> sum_{i=1}^{n+1} Z e_i -> P(A_n) -> 0 over W = S_{n+1},
/// obtained by dualizing the root-lattice sequence whose outer map is the
/// coefficient sum.
pub fn build_an_sequence(n: usize) -> Result<LatticeExactSequence, Error> {
    if n < 1 {
        return Err(Error::Unsupported("an_sequence needs n >= 1".into()));
    }
    let rs = build(DynkinType::new(Family::A, n)?)?;
    let group = symmetric_group(n)?;
    let middle = GLattice::natural(&group);
    let q = GLattice::from_generator_actions(&group, &rs.weyl_gens_root_basis)?;
    let inner = rs.simple_roots.to_int_matrix()?;
    let trivial = GLattice::trivial(&group, 1);
    let sum_row = IntMatrix::from_fn(1, n + 1, |_, _| BigInt::one());
    let q_sequence = LatticeExactSequence::new(
        EquivariantMap::new(q, middle.clone(), inner)?,
        EquivariantMap::new(middle, trivial, sum_row)?,
    )?;
    q_sequence.dualize()
}

/// The root-lattice sequence of type B_n over W(B_n) = W(C_n):
/// 0 -> Q(B_n) -> sum (Z a_i + Z b_i) -> sum Z c_i -> 0 with e_i = a_i - b_i.
fn b_table_sequence(n: usize) -> Result<LatticeExactSequence, Error> {
    let rs = build(DynkinType::new(Family::B, n)?)?;
    let gens: Vec<IntMatrix> = rs
        .weyl_gens_ambient
        .iter()
        .map(|m| m.to_int_matrix())
        .collect::<Result<_, _>>()?;
    let group = Arc::new(FiniteMatrixGroup::generate_closure(&gens, 1_000_000)?);
    // Middle: basis a_1..a_n, b_1..b_n. The transposition s_i swaps the
    // i-th and (i+1)-st pairs; the sign reflection s_n swaps a_n and b_n.
    let perm2 = |f: &dyn Fn(usize) -> usize| -> IntMatrix {
        IntMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if r == f(c) {
                BigInt::one()
            } else {
                BigInt::from(0)
            }
        })
    };
    let mut middle_gens: Vec<IntMatrix> = Vec::new();
    for i in 0..n - 1 {
        let f = move |c: usize| -> usize {
            let (idx, is_b) = if c < n { (c, false) } else { (c - n, true) };
            let target = if idx == i {
                i + 1
            } else if idx == i + 1 {
                i
            } else {
                idx
            };
            if is_b {
                target + n
            } else {
                target
            }
        };
        middle_gens.push(perm2(&f));
    }
    let f = move |c: usize| -> usize {
        if c == n - 1 {
            2 * n - 1
        } else if c == 2 * n - 1 {
            n - 1
        } else {
            c
        }
    };
    middle_gens.push(perm2(&f));
    let middle = GLattice::from_generator_actions(&group, &middle_gens)?;
    // Right side: Z c_1 .. Z c_n with the S_n quotient permutation.
    let mut right_gens: Vec<IntMatrix> = Vec::new();
    for i in 0..n - 1 {
        right_gens.push(IntMatrix::from_fn(n, n, |r, c| {
            let target = if c == i {
                i + 1
            } else if c == i + 1 {
                i
            } else {
                c
            };
            if r == target {
                BigInt::one()
            } else {
                BigInt::from(0)
            }
        }));
    }
    right_gens.push(IntMatrix::identity(n));
    let right = GLattice::from_generator_actions(&group, &right_gens)?;
    // Q(B_n) = Z^n in the epsilon basis: the natural lattice.
    let q = GLattice::natural(&group);
    // Inner: e_i -> a_i - b_i.
    let inner = IntMatrix::from_fn(2 * n, n, |r, c| {
        if r == c {
            BigInt::one()
        } else if r == c + n {
            -BigInt::one()
        } else {
            BigInt::from(0)
        }
    });
    // Outer: a_i, b_i -> c_i.
    let outer = IntMatrix::from_fn(n, 2 * n, |r, c| {
        if c == r || c == r + n {
            BigInt::one()
        } else {
            BigInt::from(0)
        }
    });
    LatticeExactSequence::new(
        EquivariantMap::new(q, middle.clone(), inner)?,
        EquivariantMap::new(middle, right, outer)?,
    )
}

/// 0 -> sum Z g_i -> sum (Z alpha_i + Z beta_i) -> P(C_n) -> 0 over W(C_n),
/// the dual of the B_n root-lattice sequence. In the dual bases the left map
/// sends g_i to alpha_i + beta_i and the outer map sends alpha_i to h_i and
/// beta_i to -h_i.
pub fn build_cn_sequence(n: usize) -> Result<LatticeExactSequence, Error> {
    if n < 2 {
        return Err(Error::Unsupported("cn_sequence needs n >= 2".into()));
    }
    b_table_sequence(n)?.dualize()
}

/// Sweep Sha^1_omega(G', target) over every subgroup G' of the sequence's
/// group; returns the number of subgroups checked, all with vanishing Sha.
fn sha1_vanishing_sweep(target: &GLattice) -> Result<(usize, usize), Error> {
    let opts = CohomologyOptions::default();
    let subs = target.group.all_subgroups(100_000)?;
    let mut zero = 0;
    for sub in &subs {
        let restricted = target.restrict(sub)?;
        let sha = sha_omega(&restricted, 1, &opts)?;
        if sha.invariants.is_trivial() {
            zero += 1;
        }
    }
    Ok((zero, subs.len()))
}

pub fn an_sequence_report(n: usize) -> Result<ScenarioReport, Error> {
    let mut report = ScenarioReport::new(format!("an_sequence_n{}", n));
    let seq = build_an_sequence(n)?;
    report.claim(
        "sequence 0 -> Z -> Z^{n+1} -> P(A_n) -> 0 is exact and equivariant",
        "injective, exact at middle, surjective",
        flags_string(&seq),
        Provenance::Theorem,
    );
    report.claim(
        "middle lattice rank",
        format!("{}", n + 1),
        format!("{}", seq.inner.target.rank),
        Provenance::Definition,
    );
    report.claim(
        "target rank",
        format!("{}", n),
        format!("{}", seq.outer.target.rank),
        Provenance::Definition,
    );
    // The left map sends 1 to the sum of the basis vectors.
    let ones = IntMatrix::from_fn(n + 1, 1, |_, _| BigInt::one());
    report.claim(
        "left map sends 1 to the sum of the e_i",
        "true",
        format!("{}", seq.inner.matrix == ones),
        Provenance::Theorem,
    );
    // Middle is a permutation lattice on the nose.
    let perm = seq.inner.target.action.iter().all(|a| {
        (0..a.rows()).all(|i| (0..a.cols()).filter(|&j| a.at(i, j).is_one()).count() == 1)
    });
    report.claim(
        "middle action is by permutation matrices",
        "true",
        format!("{}", perm),
        Provenance::Definition,
    );
    // Kernel of the surjection is the rank-1 trivial lattice, a permutation
    // lattice on the nose.
    let ker = kernel_basis(&seq.outer.matrix);
    let ker_lat = seq.outer.source.sublattice_with_action(&ker)?;
    match is_permutation_basis(&ker_lat, 1) {
        PermBasisResult::Found(orbits) => report.claim(
            "kernel has a permutation basis at bound 1",
            "1 vectors",
            format!("{} vectors", orbits.iter().map(|o| o.len()).sum::<usize>()),
            Provenance::Oracle,
        ),
        PermBasisResult::NotPermutation(why) => report.claim(
            "kernel has a permutation basis at bound 1",
            "found",
            format!("not a permutation lattice: {}", why),
            Provenance::Oracle,
        ),
        PermBasisResult::Inconclusive(why) => report.inconclusive("kernel permutation basis", why),
    }
    if n <= 3 {
        let (zero, total) = sha1_vanishing_sweep(&seq.outer.target)?;
        report.claim(
            format!("Sha^1_omega(G', P(A_{})) = 0 for all {} subgroups", n, total),
            format!("{} of {}", total, total),
            format!("{} of {}", zero, total),
            Provenance::Theorem,
        );
    }
    if n == 3 {
        // The target is the weight lattice: identify it with the artifact's
        // P(A_3) in the fundamental-weight basis.
        let rs = build(DynkinType::new(Family::A, 3)?)?;
        let pair = lattice_pair(&rs, 1_000_000)?;
        let p_transported = transport_lattice(&pair.p, &seq.outer.target.group)?;
        let iso = iso_search(
            &seq.outer.target,
            &p_transported,
            2,
            Some(&IntMatrix::identity(3)),
            200_000,
        )?;
        match iso {
            IsoResult::Isomorphic(_) => report.claim(
                "target is W-isomorphic to the weight lattice P(A_3)",
                "isomorphic",
                "isomorphic",
                Provenance::Oracle,
            ),
            IsoResult::NotIsomorphic(why) => report.claim(
                "target is W-isomorphic to the weight lattice P(A_3)",
                "isomorphic",
                format!("not isomorphic: {}", why),
                Provenance::Oracle,
            ),
            IsoResult::Inconclusive(why) => report.inconclusive("P(A_3) identification", why),
        }
    }
    Ok(report)
}

pub fn cn_sequence_report(n: usize) -> Result<ScenarioReport, Error> {
    let mut report = ScenarioReport::new(format!("cn_sequence_n{}", n));
    let seq = build_cn_sequence(n)?;
    report.claim(
        "sequence 0 -> sum Z g_i -> sum(Z a_i + Z b_i) -> P(C_n) -> 0 is exact",
        "injective, exact at middle, surjective",
        flags_string(&seq),
        Provenance::Theorem,
    );
    // Inner map: g_i -> alpha_i + beta_i; outer: alpha_i -> h_i, beta_i -> -h_i.
    let inner_expect = IntMatrix::from_fn(2 * n, n, |r, c| {
        if r == c || r == c + n {
            BigInt::one()
        } else {
            BigInt::from(0)
        }
    });
    let outer_expect = IntMatrix::from_fn(n, 2 * n, |r, c| {
        if c == r {
            BigInt::one()
        } else if c == r + n {
            -BigInt::one()
        } else {
            BigInt::from(0)
        }
    });
    report.claim(
        "left map sends g_i to alpha_i + beta_i",
        "true",
        format!("{}", seq.inner.matrix == inner_expect),
        Provenance::Theorem,
    );
    report.claim(
        "outer map sends alpha_i to h_i and beta_i to -h_i",
        "true",
        format!("{}", seq.outer.matrix == outer_expect),
        Provenance::Theorem,
    );
    // Sign elements act on the h-basis by h_i -> (-1)^{c_i} h_i: the target
    // action consists of signed permutation matrices.
    let signed = seq.outer.target.action.iter().all(|a| {
        (0..a.rows()).all(|i| {
            (0..a.cols())
                .filter(|&j| a.at(i, j).is_one() || *a.at(i, j) == -BigInt::one())
                .count()
                == 1
        })
    });
    report.claim(
        "target acts by signed permutations of the h-basis",
        "true",
        format!("{}", signed),
        Provenance::Theorem,
    );
    // Kernel has a permutation basis at bound 1.
    let ker = kernel_basis(&seq.outer.matrix);
    let ker_lat = seq.outer.source.sublattice_with_action(&ker)?;
    match is_permutation_basis(&ker_lat, 1) {
        PermBasisResult::Found(orbits) => {
            let total: usize = orbits.iter().map(|o| o.len()).sum();
            report.claim(
                "kernel has a permutation basis at bound 1",
                format!("{} vectors", n),
                format!("{} vectors", total),
                Provenance::Oracle,
            );
        }
        PermBasisResult::NotPermutation(why) => report.claim(
            "kernel has a permutation basis at bound 1",
            "found",
            format!("not a permutation lattice: {}", why),
            Provenance::Oracle,
        ),
        PermBasisResult::Inconclusive(why) => report.inconclusive("kernel permutation basis", why),
    }
    if n <= 3 {
        let (zero, total) = sha1_vanishing_sweep(&seq.outer.target)?;
        report.claim(
            format!("Sha^1_omega(G', P(C_{})) = 0 for all {} subgroups", n, total),
            format!("{} of {}", total, total),
            format!("{} of {}", zero, total),
            Provenance::Theorem,
        );
    }
    Ok(report)
}

pub fn flags_string(seq: &LatticeExactSequence) -> String {
    let mut parts = Vec::new();
    if seq.flags.injective {
        parts.push("injective");
    }
    if seq.flags.exact_at_middle {
        parts.push("exact at middle");
    }
    if seq.flags.surjective {
        parts.push("surjective");
    }
    if parts.len() == 3 {
        "injective, exact at middle, surjective".into()
    } else {
        format!("only: {}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn an_small() {
        let seq = build_an_sequence(1).unwrap();
        assert!(seq.flags.all());
        assert_eq!(seq.inner.target.rank, 2);
        assert_eq!(seq.outer.target.rank, 1);
        let seq = build_an_sequence(2).unwrap();
        assert!(seq.flags.all());
    }

    #[test]
    fn an_report_n2() {
        let r = an_sequence_report(2).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn cn_small() {
        let seq = build_cn_sequence(2).unwrap();
        assert!(seq.flags.all());
        assert_eq!(seq.inner.source.rank, 2);
        assert_eq!(seq.inner.target.rank, 4);
        assert_eq!(seq.outer.target.rank, 2);
        let r = cn_sequence_report(2).unwrap();
        assert!(r.passed(), "{:?}", r);
    }
}
