//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and holding the stated runtime budget. Expected values marked as frozen
//! were computed once by the corresponding independent oracle (enumeration,
//! closed form, or first-run regression) and pinned here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use weylat::cohomology::{
    h1, h1_by_definition, h1_cyclic_invariants, h2, h2_by_definition, sha_omega,
    tate_h0_cyclic_invariants, CohomologyOptions,
};
use weylat::glattice::{
    augmentation_and_norm, iso_search, permutation_lattice, regular_lattice, GLattice, IsoResult,
};
use weylat::group::FiniteMatrixGroup;
use weylat::matrix::{smith_normal_form, AbelianGroupInvariants, IntMatrix};
use weylat::roots::{build, dual_data, lattice_pair, DynkinType};
use weylat::scenarios::{run_scenario, Status};

fn params() -> BTreeMap<String, String> {
    BTreeMap::new()
}

fn announce(criterion: &str, elapsed: Duration, budget: Duration, detail: &str) {
    println!(
        "acceptance {}: PASS in {:.2?} (budget {:?}) — {}",
        criterion, elapsed, budget, detail
    );
    assert!(
        elapsed <= budget,
        "{} exceeded its runtime budget: {:.2?} > {:?}",
        criterion,
        elapsed,
        budget
    );
}

fn klein_group() -> Arc<FiniteMatrixGroup> {
    let a = IntMatrix::from_rows_i64(&[vec![-1, 0], vec![0, 1]]);
    let b = IntMatrix::from_rows_i64(&[vec![1, 0], vec![0, -1]]);
    Arc::new(FiniteMatrixGroup::generate_closure(&[a, b], 100).unwrap())
}

#[test]
fn criterion_01_sha1_of_augmentation_ideal() {
    let t0 = Instant::now();
    let g = klein_group();
    let an = augmentation_and_norm(&g).unwrap();
    let sha = sha_omega(&an.aug_ideal, 1, &CohomologyOptions::default()).unwrap();
    assert_eq!(sha.invariants, AbelianGroupInvariants::cyclic(2));
    announce(
        "criterion 01 (Sha^1 of the Klein augmentation ideal is Z/2)",
        t0.elapsed(),
        Duration::from_secs(1),
        "exact invariant match",
    );
}

#[test]
fn criterion_02_claim72_c3() {
    let t0 = Instant::now();
    let report = run_scenario("claim72_c3", &params()).unwrap();
    assert_eq!(report.status, Status::Pass, "{:#?}", report);
    // The bit-exact matrix claims and the J_H identification are individual
    // claims inside the report; all must have matched.
    assert!(report
        .claims
        .iter()
        .any(|c| c.description.starts_with("action of a") && c.computed == "exact matrix match"));
    assert!(report
        .claims
        .iter()
        .any(|c| c.description.starts_with("action of b") && c.computed == "exact matrix match"));
    assert!(report
        .claims
        .iter()
        .any(|c| c.description.contains("isomorphic to J_H")
            && c.computed.contains("isomorphic via the stated correspondence")));
    announce(
        "criterion 02 (C3 action matrices bit-exact; Q(C3)|_H = J_H certified)",
        t0.elapsed(),
        Duration::from_secs(1),
        "scenario claim72_c3 passes",
    );
}

#[test]
fn criterion_03_claim72_d4() {
    let t0 = Instant::now();
    let report = run_scenario("claim72_d4", &params()).unwrap();
    assert_eq!(report.status, Status::Pass, "{:#?}", report);
    assert!(report
        .claims
        .iter()
        .any(|c| c.description.contains("decomposes as Z a1") && c.computed == "true"));
    assert!(report
        .claims
        .iter()
        .any(|c| c.description == "J is isomorphic to J_H" && c.computed == "isomorphic"));
    assert!(report
        .claims
        .iter()
        .any(|c| c.description == "witness class order" && c.computed == "2"));
    announce(
        "criterion 03 (D4 decomposition, J = J_H, Sha^1(H, P(D4)) nonzero with order-2 witness)",
        t0.elapsed(),
        Duration::from_secs(5),
        "scenario claim72_d4 passes",
    );
}

#[test]
fn criterion_04_prop71_types() {
    let t0 = Instant::now();
    for t in ["B3", "B4", "D4", "D5", "F4", "E6"] {
        let report = run_scenario(&format!("prop71_{}", t), &params()).unwrap();
        assert_eq!(report.status, Status::Pass, "{}: {:#?}", t, report);
        assert!(
            report
                .claims
                .iter()
                .any(|c| c.description.contains("is nonzero") && c.computed == "nonzero"),
            "{} lacks a nonvanishing claim",
            t
        );
    }
    announce(
        "criterion 04 (nonzero Sha^1(H, P(t)) for B3, B4, D4, D5, F4, E6)",
        t0.elapsed(),
        Duration::from_secs(60),
        "all six types pass with exact sequences verified",
    );
}

#[test]
fn criterion_05_resolutions_and_sweeps() {
    let t0 = Instant::now();
    for n in 1..=4 {
        let report = run_scenario(&format!("an_sequence_n{}", n), &params()).unwrap();
        assert_eq!(report.status, Status::Pass, "A_{}: {:#?}", n, report);
    }
    for n in 2..=4 {
        let report = run_scenario(&format!("cn_sequence_n{}", n), &params()).unwrap();
        assert_eq!(report.status, Status::Pass, "C_{}: {:#?}", n, report);
    }
    announce(
        "criterion 05 (resolutions exact for A n=1..4, C n=2..4; kernels permutation; Sha sweeps vanish)",
        t0.elapsed(),
        Duration::from_secs(60),
        "all sequence scenarios pass",
    );
}

#[test]
fn criterion_06_g2_vanishing() {
    let t0 = Instant::now();
    let report = run_scenario("g2_vanishing", &params()).unwrap();
    assert_eq!(report.status, Status::Pass, "{:#?}", report);
    assert!(report
        .claims
        .iter()
        .any(|c| c.description == "number of subgroups of W(G2)" && c.computed == "16"));
    announce(
        "criterion 06 (Sha^1(H', P(G2)) = 0 for all 16 subgroups)",
        t0.elapsed(),
        Duration::from_secs(5),
        "all subgroups vanish",
    );
}

#[test]
fn criterion_07_lemma83_bruteforce() {
    let t0 = Instant::now();
    let report = run_scenario("lemma83_n3", &params()).unwrap();
    assert_eq!(report.status, Status::Pass, "{:#?}", report);
    // Frozen enumeration counts, computed once by this brute-force oracle:
    // 14 subgroup classes of index <= 6 in W(C3), exactly 2 admissible
    // surjections (one W-set structure), each certified isomorphic to the
    // standard sequence.
    let get = |desc: &str| -> String {
        report
            .claims
            .iter()
            .find(|c| c.description == desc)
            .unwrap_or_else(|| panic!("missing claim {:?}", desc))
            .computed
            .clone()
    };
    assert_eq!(get("subgroup classes of index at most 2n"), "14");
    assert_eq!(get("number of admissible surjections found"), "2");
    assert_eq!(get("number of W-set structures admitting a surjection"), "1");
    assert_eq!(
        get("every enumerated surjection is isomorphic to the standard sequence"),
        "true"
    );
    announce(
        "criterion 07 (brute-force surjection sweep: zero counterexamples, counts frozen)",
        t0.elapsed(),
        Duration::from_secs(600),
        "2 surjections, 1 structure, all certified",
    );
}

#[test]
fn criterion_08_appendix_counterexample() {
    let t0 = Instant::now();
    let r22 = run_scenario("appendix_2_2", &params()).unwrap();
    assert_eq!(r22.status, Status::Pass, "{:#?}", r22);
    let r23 = run_scenario("appendix_2_3", &params()).unwrap();
    assert_eq!(r23.status, Status::Pass, "{:#?}", r23);
    let find = |r: &weylat::scenarios::ScenarioReport, desc: &str| -> String {
        r.claims
            .iter()
            .find(|c| c.description == desc)
            .unwrap_or_else(|| panic!("missing claim {:?}", desc))
            .computed
            .clone()
    };
    assert_eq!(find(&r22, "Sha^1_omega(G, I_G), direct degree-1 route"), "Z/2");
    assert_eq!(find(&r22, "Sha^1_omega(G, I_G), Tate-H^0 kernel route"), "Z/2");
    assert_eq!(find(&r23, "Sha^1_omega(G, I_G), direct degree-1 route"), "Z/4");
    assert_eq!(find(&r23, "Sha^1_omega(G, I_G), Tate-H^0 kernel route"), "Z/4");
    assert_eq!(find(&r23, "Sha^2_omega(G, J_G) exponent divides p"), "true");
    assert_eq!(
        find(&r23, "the two obstruction groups have different exponents"),
        "true"
    );
    // Frozen first-run regression values for the degree-2 groups.
    assert_eq!(find(&r22, "Sha^2_omega(G, J_G) value"), "Z/2");
    assert_eq!(find(&r23, "Sha^2_omega(G, J_G) value"), "Z/2 + Z/2 + Z/2");
    announce(
        "criterion 08 (appendix family: Z/2 and Z/4 on both routes; degree-2 group killed by 2)",
        t0.elapsed(),
        Duration::from_secs(300),
        "exponent mismatch at r = 3 confirmed",
    );
}

#[test]
fn criterion_09_pgl2_section() {
    let t0 = Instant::now();
    let report = run_scenario("pgl2_section", &params()).unwrap();
    assert_eq!(report.status, Status::Pass, "{:#?}", report);
    announce(
        "criterion 09 (PGL2 rational section identity, symbolic and at 5 points)",
        t0.elapsed(),
        Duration::from_secs(1),
        "pi(section(t)) = t",
    );
}

// ---------------------------------------------------------------------------
// Criterion 10: the property suites.

#[test]
fn criterion_10a_snf_random_matrices() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for case in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-50..=50)).collect();
        let a = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]));
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "case {}", case);
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), a, "case {}", case);
        // The tracked inverses certify unimodularity of the transforms.
        assert!(s.u.mul(&s.u_inv).is_identity(), "case {}", case);
        assert!(s.v.mul(&s.v_inv).is_identity(), "case {}", case);
        for i in 0..s.rank.saturating_sub(1) {
            let di = s.d.at(i, i);
            let dj = s.d.at(i + 1, i + 1);
            assert!(!di.is_negative() && !di.is_zero());
            assert!((dj % di).is_zero(), "case {}: divisibility", case);
        }
    }
    announce(
        "criterion 10a (SNF reconstruction and divisibility on 1000 random matrices)",
        t0.elapsed(),
        Duration::from_secs(300),
        "all decompositions verified",
    );
}

#[test]
fn criterion_10b_cyclic_closed_form_corpus() {
    let t0 = Instant::now();
    // 50+ cases: cyclic groups of several orders acting on assorted small
    // lattices; the torsion-quotient engine, the definitional bar kernels,
    // and the cyclic closed forms must agree in degrees 1 and 2.
    let opts = CohomologyOptions::default();
    let mut cases = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for order in [2usize, 3, 4, 5, 6] {
        let cycle = IntMatrix::from_fn(order, order, |i, j| {
            if i == (j + 1) % order {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let g = Arc::new(FiniteMatrixGroup::generate_closure(&[cycle], 2 * order).unwrap());
        let gen = g.generators[0];
        let natural = GLattice::natural(&g);
        let mut lattices = vec![
            natural.clone(),
            natural.dual(),
            GLattice::trivial(&g, 2),
            augmentation_and_norm(&g).unwrap().aug_ideal,
            augmentation_and_norm(&g).unwrap().norm_cokernel,
        ];
        // Conjugates of the natural lattice by random unimodular matrices:
        // same cohomology, different matrices.
        for _ in 0..5 {
            let mut t = IntMatrix::identity(order);
            for _ in 0..6 {
                let i = rng.gen_range(0..order);
                let mut j = rng.gen_range(0..order);
                while j == i {
                    j = rng.gen_range(0..order);
                }
                let c = rng.gen_range(-2i64..=2);
                // t <- t with row op (stays unimodular)
                let mut e = IntMatrix::identity(order);
                e.set(i, j, BigInt::from(c));
                t = t.mul(&e);
            }
            let tinv = t.inverse_unimodular();
            let conj: Vec<IntMatrix> = (0..g.order())
                .map(|k| t.mul(natural.action_of(k)).mul(&tinv))
                .collect();
            lattices.push(GLattice {
                group: Arc::clone(&g),
                rank: order,
                action: conj,
            });
        }
        for m in &lattices {
            let h1_t = h1(m).invariants;
            assert_eq!(h1_t, h1_cyclic_invariants(m, gen), "order {}", order);
            assert_eq!(h1_t, h1_by_definition(m), "order {}", order);
            let h2_t = h2(m, &opts).unwrap().invariants;
            assert_eq!(h2_t, tate_h0_cyclic_invariants(m, gen), "order {}", order);
            assert_eq!(h2_t, h2_by_definition(m), "order {}", order);
            cases += 1;
        }
    }
    assert!(cases >= 50, "corpus too small: {}", cases);
    announce(
        "criterion 10b (cyclic closed form vs resolution agreement)",
        t0.elapsed(),
        Duration::from_secs(300),
        &format!("{} corpus cases agree in degrees 1 and 2", cases),
    );
}

#[test]
fn criterion_10c_permutation_vanishing_sweep() {
    let t0 = Instant::now();
    // All subgroup pairs of W(C3), deduplicated by conjugacy (conjugation
    // induces isomorphisms on both sides of every claim checked here).
    let rs = build(DynkinType::parse("C3").unwrap()).unwrap();
    let gens: Vec<IntMatrix> = rs
        .weyl_gens_ambient
        .iter()
        .map(|m| m.to_int_matrix().unwrap())
        .collect();
    let g = Arc::new(FiniteMatrixGroup::generate_closure(&gens, 1_000_000).unwrap());
    assert_eq!(g.order(), 48);
    let subs = g.all_subgroups(100_000).unwrap();
    let mut class_reps: BTreeMap<Vec<usize>, weylat::group::Subgroup> = BTreeMap::new();
    for s in &subs {
        class_reps.entry(s.conjugacy_key()).or_insert_with(|| s.clone());
    }
    let reps: Vec<_> = class_reps.into_values().collect();
    println!(
        "sweep: {} subgroups in {} conjugacy classes",
        subs.len(),
        reps.len()
    );

    // Degree-1 sweep: H^1(G', Z[G/G'']) = 0 for every pair of classes, and
    // the dual lattice has the same action matrices (permutation duals).
    let mut h1_checked = 0;
    for outer in &reps {
        let perm = permutation_lattice(&g, outer).lattice;
        let dual = perm.dual();
        for k in 0..g.order() {
            assert_eq!(perm.action[k], dual.action[k], "dual of a permutation lattice");
        }
        for inner in &reps {
            let restricted = perm.restrict(inner).unwrap();
            assert!(
                h1(&restricted).invariants.is_trivial(),
                "H^1 nonzero for |G'|={} index {}",
                inner.order(),
                g.order() / outer.order()
            );
            h1_checked += 1;
        }
    }

    // Degree-2 sweep: Sha^2_omega(G', Z[G/G'']) = 0 for every pair within
    // the work guard. Cyclic G' are zero outright: the product of
    // restrictions includes the identity restriction to G' itself, so the
    // kernel is trivial without computation.
    let sweep_opts = CohomologyOptions {
        c3_entries: 10_000_000,
        work: 350_000_000,
    };
    let mut sha2_zero = 0;
    let mut sha2_cyclic = 0;
    let mut sha2_skipped = 0;
    for outer in &reps {
        let perm = permutation_lattice(&g, outer).lattice;
        for inner in &reps {
            if inner.is_cyclic() {
                sha2_cyclic += 1;
                continue;
            }
            let restricted = perm.restrict(inner).unwrap();
            match sha_omega(&restricted, 2, &sweep_opts) {
                Ok(sha) => {
                    assert!(
                        sha.invariants.is_trivial(),
                        "Sha^2 nonzero for |G'|={} rank {}",
                        inner.order(),
                        perm.rank
                    );
                    sha2_zero += 1;
                }
                Err(weylat::Error::MemoryGuard { .. }) => {
                    sha2_skipped += 1;
                }
                Err(e) => panic!("unexpected error: {}", e),
            }
        }
    }
    // Coverage frozen from the first run: the guard admits the bulk of the
    // pairs and every computed value vanished.
    assert!(
        sha2_zero >= 300,
        "degree-2 coverage regressed: only {} pairs computed",
        sha2_zero
    );
    announce(
        "criterion 10c (permutation vanishing sweep over subgroup pairs of W(C3))",
        t0.elapsed(),
        Duration::from_secs(300),
        &format!(
            "H^1 zero on {} pairs; Sha^2 zero on {} pairs ({} cyclic-trivial, {} guard-skipped)",
            h1_checked, sha2_zero, sha2_cyclic, sha2_skipped
        ),
    );
}

#[test]
fn criterion_10d_duality_rank_at_most_four() {
    let t0 = Instant::now();
    let mut checked = 0;
    for name in [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "F4", "G2",
    ] {
        let rs = build(DynkinType::parse(name).unwrap()).unwrap();
        let dual_rs = dual_data(&rs).unwrap();
        let pair = lattice_pair(&rs, 1_000_000).unwrap();
        let p_dual =
            GLattice::from_generator_actions(&pair.group, &dual_rs.weyl_gens_weight_basis).unwrap();
        let q0 = pair.q.dual();
        match iso_search(&p_dual, &q0, 2, None, 200_000).unwrap() {
            IsoResult::Isomorphic(_) => checked += 1,
            other => panic!("{}: {:?}", name, other),
        }
    }
    announce(
        "criterion 10d (weight lattice of the dual system = dual of the root lattice, rank <= 4)",
        t0.elapsed(),
        Duration::from_secs(300),
        &format!("{} types verified by explicit equivariant isomorphism", checked),
    );
}

// A small extra: the degree-2 engine agrees with the definitional kernel
// route on permutation and regular lattices of a noncyclic group.
#[test]
fn criterion_10e_degree2_engine_cross_check() {
    let t0 = Instant::now();
    let g = klein_group();
    let opts = CohomologyOptions::default();
    let reg = regular_lattice(&g);
    let an = augmentation_and_norm(&g).unwrap();
    for m in [&reg, &an.aug_ideal, &an.norm_cokernel, &GLattice::trivial(&g, 1)] {
        assert_eq!(h2(m, &opts).unwrap().invariants, h2_by_definition(m));
        assert_eq!(h1(m).invariants, h1_by_definition(m));
    }
    announce(
        "criterion 10e (torsion-quotient engine matches definitional kernels, noncyclic case)",
        t0.elapsed(),
        Duration::from_secs(300),
        "regular, augmentation, norm-cokernel and trivial lattices agree",
    );
}
