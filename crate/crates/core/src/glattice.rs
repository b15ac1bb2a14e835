//! Lattices with an action of a finite matrix group and their algebra:
//! permutation lattices, duals, direct sums, restriction, fixed sublattices,
//! augmentation and norm lattices, equivariant maps, exact sequences,
//! bounded isomorphism search, and rational character decomposition for
//! elementary abelian 2-groups.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

use crate::error::Error;
use crate::matrix::{
    cokernel_invariants, kernel_basis, same_lattice, solve_exact, IntMatrix,
};
use crate::group::{FiniteMatrixGroup, Subgroup};

/// A lattice of finite rank with an action of a finite matrix group: one
/// unimodular integer matrix per group element, indexed in the group's
/// canonical element order.
#[derive(Clone, Debug)]
pub struct GLattice {
    pub group: Arc<FiniteMatrixGroup>,
    pub rank: usize,
    pub action: Vec<IntMatrix>,
}

impl GLattice {
    /// Build a lattice from actions of the group generators, extending along
    /// the group's factorization words and verifying the homomorphism
    /// property on generators x elements.
    pub fn from_generator_actions(
        group: &Arc<FiniteMatrixGroup>,
        gen_actions: &[IntMatrix],
    ) -> Result<Self, Error> {
        let rank = if gen_actions.is_empty() {
            return Err(Error::DimensionMismatch("no generator actions".into()));
        } else {
            gen_actions[0].rows()
        };
        for a in gen_actions {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::DimensionMismatch("action matrices must be square".into()));
            }
            if !a.is_unimodular() {
                return Err(Error::NotUnimodular);
            }
        }
        let action = group.transport(gen_actions)?;
        Ok(GLattice {
            group: Arc::clone(group),
            rank,
            action,
        })
    }

    /// The lattice on which each group element acts by its own matrix.
    pub fn natural(group: &Arc<FiniteMatrixGroup>) -> Self {
        GLattice {
            group: Arc::clone(group),
            rank: group.dim,
            action: group.elements.iter().map(|e| e.matrix.clone()).collect(),
        }
    }

    /// Rank-n lattice with trivial action.
    pub fn trivial(group: &Arc<FiniteMatrixGroup>, rank: usize) -> Self {
        GLattice {
            group: Arc::clone(group),
            rank,
            action: (0..group.order()).map(|_| IntMatrix::identity(rank)).collect(),
        }
    }

    pub fn action_of(&self, element: usize) -> &IntMatrix {
        &self.action[element]
    }

    /// Exhaustive homomorphism check over generators x elements.
    pub fn verify_action(&self) -> Result<(), Error> {
        let g = &self.group;
        if !self.action[g.identity_index()].is_identity() {
            return Err(Error::NotAHomomorphism {
                gen: usize::MAX,
                element: g.identity_index(),
            });
        }
        for (gi, &s) in g.generators.iter().enumerate() {
            for e in 0..g.order() {
                let se = g.product_index(s, e);
                if self.action[s].mul(&self.action[e]) != self.action[se] {
                    return Err(Error::NotAHomomorphism { gen: gi, element: e });
                }
            }
        }
        Ok(())
    }

    /// Dual lattice: g acts by the transpose of the action of g^{-1}.
    pub fn dual(&self) -> GLattice {
        let action = (0..self.group.order())
            .map(|i| self.action[self.group.inverse_index(i)].transpose())
            .collect();
        GLattice {
            group: Arc::clone(&self.group),
            rank: self.rank,
            action,
        }
    }

    /// Block-diagonal direct sum; errors unless both lattices share a group.
    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice, Error> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::DimensionMismatch("direct sum over different groups".into()));
        }
        let action = (0..self.group.order())
            .map(|i| IntMatrix::block_diag(&[&self.action[i], &other.action[i]]))
            .collect();
        Ok(GLattice {
            group: Arc::clone(&self.group),
            rank: self.rank + other.rank,
            action,
        })
    }

    /// Restrict the action to a subgroup, materialized as its own group.
    pub fn restrict(&self, sub: &Subgroup) -> Result<GLattice, Error> {
        if !Arc::ptr_eq(&sub.parent, &self.group) && !same_group(&sub.parent, &self.group) {
            return Err(Error::NotASubgroup("subgroup of a different group".into()));
        }
        let h = Arc::new(sub.to_group(&self.group)?);
        let action = h
            .elements
            .iter()
            .map(|e| {
                let idx = self
                    .group
                    .index_of(&e.matrix)
                    .expect("subgroup element not in parent");
                self.action[idx].clone()
            })
            .collect();
        Ok(GLattice {
            group: h,
            rank: self.rank,
            action,
        })
    }

    /// Basis (columns) of the sublattice fixed by the given elements'
    /// action; saturated because it is the kernel of a map to a free module.
    pub fn fixed_sublattice_of(&self, element_indices: &[usize]) -> IntMatrix {
        if element_indices.is_empty() {
            return IntMatrix::identity(self.rank);
        }
        let blocks = element_indices
            .iter()
            .map(|&i| self.action[i].sub(&IntMatrix::identity(self.rank)))
            .collect::<Vec<_>>();
        crate::matrix::kernel_of_row_blocks(self.rank, blocks.into_iter())
    }

    pub fn fixed_sublattice(&self, sub: &Subgroup) -> IntMatrix {
        // Generators suffice: fixed by generators implies fixed by the group.
        let gens: Vec<usize> = sub
            .generators
            .iter()
            .map(|&i| {
                if same_group(&self.group, &sub.parent) {
                    i
                } else {
                    self.group
                        .index_of(sub.parent.matrix(i))
                        .expect("subgroup element not in the lattice's group")
                }
            })
            .collect();
        self.fixed_sublattice_of(&gens)
    }

    pub fn fixed_sublattice_whole(&self) -> IntMatrix {
        let gens: Vec<usize> = self.group.generators.clone();
        self.fixed_sublattice_of(&gens)
    }

    /// Norm operator N = sum over all group elements of action(g).
    pub fn norm_operator(&self) -> IntMatrix {
        let mut n = IntMatrix::zeros(self.rank, self.rank);
        for a in &self.action {
            n = n.add(a);
        }
        n
    }

    /// Character of the rationalized representation: trace of every element.
    pub fn trace_vector(&self) -> Vec<BigInt> {
        self.action
            .iter()
            .map(|a| {
                let mut t = BigInt::zero();
                for i in 0..a.rows() {
                    t += a.at(i, i);
                }
                t
            })
            .collect()
    }

    /// The sublattice spanned by the given basis columns, as a lattice in its
    /// own right; errors when the action does not preserve the span.
    pub fn sublattice_with_action(&self, basis: &IntMatrix) -> Result<GLattice, Error> {
        assert_eq!(basis.rows(), self.rank);
        let mut action = Vec::with_capacity(self.group.order());
        for a in &self.action {
            let img = a.mul(basis);
            let x = solve_exact(basis, &img)
                .ok_or_else(|| Error::Membership("action does not preserve the sublattice".into()))?;
            action.push(x);
        }
        Ok(GLattice {
            group: Arc::clone(&self.group),
            rank: basis.cols(),
            action,
        })
    }
}

/// Same materialized group: same dimension and the same canonical element set.
pub fn same_group(a: &Arc<FiniteMatrixGroup>, b: &Arc<FiniteMatrixGroup>) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    a.dim == b.dim
        && a.order() == b.order()
        && a.elements
            .iter()
            .zip(b.elements.iter())
            .all(|(x, y)| x.key == y.key)
}

/// Move a lattice to an isomorphic group materialization whose generator
/// list corresponds entry by entry (e.g. the same Weyl group closed in a
/// different basis). The generator correspondence is validated by the
/// transport homomorphism check.
pub fn transport_lattice(m: &GLattice, target: &Arc<FiniteMatrixGroup>) -> Result<GLattice, Error> {
    if target.generators.len() != m.group.generators.len() {
        return Err(Error::DimensionMismatch("generator count mismatch".into()));
    }
    let gen_actions: Vec<IntMatrix> = m
        .group
        .generators
        .iter()
        .map(|&g| m.action[g].clone())
        .collect();
    GLattice::from_generator_actions(target, &gen_actions)
}

/// A permutation lattice Z[G/H] together with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct CosetLattice {
    pub lattice: GLattice,
    /// Sorted element-index lists, one per coset (= basis vector).
    pub cosets: Vec<Vec<usize>>,
    /// Minimal representative of each coset.
    pub transversal: Vec<usize>,
    /// Stabilizer of the basis vector of coset 0.
    pub point_stabilizer: Subgroup,
}

/// The coset lattice Z[G/H]: rank [G:H], every action matrix a 0/1
/// permutation matrix, basis indexed by left cosets.
pub fn permutation_lattice(group: &Arc<FiniteMatrixGroup>, sub: &Subgroup) -> CosetLattice {
    let (cosets, transversal) = group.left_cosets(sub);
    let n = cosets.len();
    let mut coset_of = vec![usize::MAX; group.order()];
    for (ci, coset) in cosets.iter().enumerate() {
        for &x in coset {
            coset_of[x] = ci;
        }
    }
    let action: Vec<IntMatrix> = (0..group.order())
        .map(|g| {
            let mut m = IntMatrix::zeros(n, n);
            for c in 0..n {
                let img = coset_of[group.product_index(g, transversal[c])];
                m.set(img, c, BigInt::one());
            }
            m
        })
        .collect();
    let stab_indices: Vec<usize> = (0..group.order())
        .filter(|&g| coset_of[group.product_index(g, transversal[0])] == 0)
        .collect();
    let stab_gens = stab_indices.clone();
    let point_stabilizer = Subgroup {
        parent: Arc::clone(group),
        indices: stab_indices,
        generators: stab_gens,
    };
    CosetLattice {
        lattice: GLattice {
            group: Arc::clone(group),
            rank: n,
            action,
        },
        cosets,
        transversal,
        point_stabilizer,
    }
}

/// The regular representation Z[G].
pub fn regular_lattice(group: &Arc<FiniteMatrixGroup>) -> GLattice {
    permutation_lattice(group, &group.trivial_subgroup()).lattice
}

/// A map of lattices over the same group, equivariance verified on the
/// group's generators (which implies it for every element).
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: GLattice,
    pub target: GLattice,
    pub matrix: IntMatrix,
}

impl EquivariantMap {
    pub fn new(source: GLattice, target: GLattice, matrix: IntMatrix) -> Result<Self, Error> {
        if !same_group(&source.group, &target.group) {
            return Err(Error::DimensionMismatch("map between lattices of different groups".into()));
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(Error::DimensionMismatch("map matrix has wrong shape".into()));
        }
        for (gi, &g) in source.group.generators.iter().enumerate() {
            if matrix.mul(&source.action[g]) != target.action[g].mul(&matrix) {
                return Err(Error::NotEquivariant(gi));
            }
        }
        Ok(EquivariantMap {
            source,
            target,
            matrix,
        })
    }

    /// Contravariant dual: a map target^0 -> source^0 given by the transpose.
    pub fn dual(&self) -> EquivariantMap {
        EquivariantMap {
            source: self.target.dual(),
            target: self.source.dual(),
            matrix: self.matrix.transpose(),
        }
    }
}

/// Exactness flags of a two-map sequence P2 -> P1 -> M.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExactnessFlags {
    pub injective: bool,
    pub exact_at_middle: bool,
    pub surjective: bool,
}

impl ExactnessFlags {
    pub fn all(&self) -> bool {
        self.injective && self.exact_at_middle && self.surjective
    }
}

/// A pair of equivariant maps inner: P2 -> P1 and outer: P1 -> M with
/// verified exactness flags.
#[derive(Clone, Debug)]
pub struct LatticeExactSequence {
    pub inner: EquivariantMap,
    pub outer: EquivariantMap,
    pub flags: ExactnessFlags,
}

impl LatticeExactSequence {
    pub fn new(inner: EquivariantMap, outer: EquivariantMap) -> Result<Self, Error> {
        if !same_group(&inner.target.group, &outer.source.group)
            || inner.target.rank != outer.source.rank
        {
            return Err(Error::DimensionMismatch("sequence maps do not compose".into()));
        }
        let flags = check_exact(&inner, &outer);
        Ok(LatticeExactSequence { inner, outer, flags })
    }

    /// Dual sequence: M^0 -> P1^0 -> P2^0 with transposed maps.
    pub fn dualize(&self) -> Result<LatticeExactSequence, Error> {
        LatticeExactSequence::new(self.outer.dual(), self.inner.dual())
    }
}

/// Compute the exactness flags: injectivity of inner, image(inner) equal to
/// kernel(outer) as sublattices, surjectivity of outer.
pub fn check_exact(inner: &EquivariantMap, outer: &EquivariantMap) -> ExactnessFlags {
    let injective = kernel_basis(&inner.matrix).cols() == 0;
    let ker = kernel_basis(&outer.matrix);
    let exact_at_middle = same_lattice(&ker, &inner.matrix);
    let surjective = cokernel_invariants(&outer.matrix).is_trivial();
    ExactnessFlags {
        injective,
        exact_at_middle,
        surjective,
    }
}

/// Augmentation ideal and norm cokernel of a finite group, with their
/// defining exact sequences over the regular representation.
#[derive(Clone, Debug)]
pub struct AugmentationNorm {
    /// Kernel of Z[H] -> Z (coefficient sum), basis e_h - e_1 for h != 1.
    pub aug_ideal: GLattice,
    /// Cokernel of Z -> Z[H] (norm), basis the classes of e_h for h != 1.
    pub norm_cokernel: GLattice,
    /// 0 -> I_H -> Z[H] -> Z -> 0.
    pub aug_sequence: LatticeExactSequence,
    /// 0 -> Z -> Z[H] -> J_H -> 0.
    pub norm_sequence: LatticeExactSequence,
    /// Basis indices: position i of either rank-(|H|-1) lattice corresponds
    /// to the group element `nontrivial[i]`.
    pub nontrivial: Vec<usize>,
}

pub fn augmentation_and_norm(group: &Arc<FiniteMatrixGroup>) -> Result<AugmentationNorm, Error> {
    let n = group.order();
    let reg = regular_lattice(group);
    let id = group.identity_index();
    let nontrivial: Vec<usize> = (0..n).filter(|&i| i != id).collect();
    let r = n - 1;

    // I_H action on basis v_h = e_h - e_1:  g(v_h) = e_{gh} - e_g = v_{gh} - v_g
    // (terms v_1 read as 0).
    let pos = |e: usize| nontrivial.iter().position(|&x| x == e);
    let i_action: Vec<IntMatrix> = (0..n)
        .map(|g| {
            let mut m = IntMatrix::zeros(r, r);
            for (col, &h) in nontrivial.iter().enumerate() {
                let gh = group.product_index(g, h);
                if let Some(p) = pos(gh) {
                    m.set(p, col, BigInt::one());
                }
                if let Some(p) = pos(g) {
                    let v = m.at(p, col) - BigInt::one();
                    m.set(p, col, v);
                }
            }
            m
        })
        .collect();
    let aug_ideal = GLattice {
        group: Arc::clone(group),
        rank: r,
        action: i_action,
    };

    // J_H action on classes w_h (h != 1): g(w_h) = w_{gh}, with w_1 read as
    // -sum of all w_k.
    let j_action: Vec<IntMatrix> = (0..n)
        .map(|g| {
            let mut m = IntMatrix::zeros(r, r);
            for (col, &h) in nontrivial.iter().enumerate() {
                let gh = group.product_index(g, h);
                match pos(gh) {
                    Some(p) => m.set(p, col, BigInt::one()),
                    None => {
                        for p in 0..r {
                            m.set(p, col, -BigInt::one());
                        }
                    }
                }
            }
            m
        })
        .collect();
    let norm_cokernel = GLattice {
        group: Arc::clone(group),
        rank: r,
        action: j_action,
    };

    // Sequences.
    let triv = GLattice::trivial(group, 1);
    let incl = IntMatrix::from_fn(n, r, |row, col| {
        let h = nontrivial[col];
        if row == h {
            BigInt::one()
        } else if row == id {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let aug_row = IntMatrix::from_fn(1, n, |_, _| BigInt::one());
    let aug_sequence = LatticeExactSequence::new(
        EquivariantMap::new(aug_ideal.clone(), reg.clone(), incl)?,
        EquivariantMap::new(reg.clone(), triv.clone(), aug_row)?,
    )?;

    let norm_col = IntMatrix::from_fn(n, 1, |_, _| BigInt::one());
    let proj = IntMatrix::from_fn(r, n, |row, col| {
        if col == nontrivial[row] {
            BigInt::one()
        } else if col == id {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let norm_sequence = LatticeExactSequence::new(
        EquivariantMap::new(triv, reg.clone(), norm_col)?,
        EquivariantMap::new(reg, norm_cokernel.clone(), proj)?,
    )?;

    Ok(AugmentationNorm {
        aug_ideal,
        norm_cokernel,
        aug_sequence,
        norm_sequence,
        nontrivial,
    })
}

/// Result of the bounded equivariant isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoResult {
    Isomorphic(IntMatrix),
    /// A genuine invariant differs; the string names it.
    NotIsomorphic(String),
    /// The bounded search was exhausted without a verdict.
    Inconclusive(String),
}

impl IsoResult {
    pub fn found(&self) -> Option<&IntMatrix> {
        match self {
            IsoResult::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
}

fn verify_iso(m: &GLattice, n: &GLattice, t: &IntMatrix) -> bool {
    if t.rows() != n.rank || t.cols() != m.rank || !t.is_unimodular() {
        return false;
    }
    (0..m.group.order()).all(|g| t.mul(&m.action[g]) == n.action[g].mul(t))
}

/// Search for a unimodular equivariant map M -> N.
///
/// An optional hint is tried first. Otherwise the integral solution space of
/// the equivariance constraints is computed and combinations with
/// coefficients bounded by `bound` are scanned for a unimodular one, up to
/// `enum_cap` candidates. "Not isomorphic" is only reported from an honest
/// invariant mismatch (trace character, or fixed-rank / first-cohomology
/// invariants over cyclic subgroups), never from search exhaustion.
pub fn iso_search(
    m: &GLattice,
    n: &GLattice,
    bound: i64,
    hint: Option<&IntMatrix>,
    enum_cap: u64,
) -> Result<IsoResult, Error> {
    if !same_group(&m.group, &n.group) {
        return Err(Error::DimensionMismatch("iso_search over different groups".into()));
    }
    if m.rank != n.rank {
        return Err(Error::DimensionMismatch("iso_search between different ranks".into()));
    }
    if let Some(h) = hint {
        if verify_iso(m, n, h) {
            return Ok(IsoResult::Isomorphic(h.clone()));
        }
    }
    if m.rank == 0 {
        return Ok(IsoResult::Isomorphic(IntMatrix::zeros(0, 0)));
    }
    // Identity shortcut.
    let id = IntMatrix::identity(m.rank);
    if verify_iso(m, n, &id) {
        return Ok(IsoResult::Isomorphic(id));
    }

    // Invariant prefilter: the trace character decides rational isomorphism.
    if m.trace_vector() != n.trace_vector() {
        return Ok(IsoResult::NotIsomorphic("trace character differs".into()));
    }
    // Integral invariants over cyclic subgroups: fixed rank and the
    // first-cohomology invariants ker N / im(g - 1).
    let group = Arc::clone(&m.group);
    for sub in group.cyclic_subgroups() {
        let fm = m.fixed_sublattice(&sub).cols();
        let fnn = n.fixed_sublattice(&sub).cols();
        if fm != fnn {
            return Ok(IsoResult::NotIsomorphic(format!(
                "fixed rank differs on a cyclic subgroup of order {}",
                sub.order()
            )));
        }
        if let Some(&g) = sub.generators.first() {
            let hm = crate::cohomology::h1_cyclic_invariants(m, g);
            let hn = crate::cohomology::h1_cyclic_invariants(n, g);
            if hm != hn {
                return Ok(IsoResult::NotIsomorphic(format!(
                    "first cohomology differs on a cyclic subgroup of order {}",
                    sub.order()
                )));
            }
        }
    }

    // Equivariance constraints on a rank x rank unknown T, vectorized
    // row-major: T A_s - B_s T = 0 for each generator s.
    let r = m.rank;
    let mut rows: Vec<IntMatrix> = Vec::new();
    for &s in m.group.generators.iter() {
        let a = &m.action[s];
        let b = &n.action[s];
        let mut block = IntMatrix::zeros(r * r, r * r);
        for i in 0..r {
            for j in 0..r {
                let row = i * r + j;
                for k in 0..r {
                    // coefficient of T[i,k]: A_s[k,j]
                    let c1 = block.at(row, i * r + k) + a.at(k, j);
                    block.set(row, i * r + k, c1);
                    // coefficient of T[k,j]: -B_s[i,k]
                    let c2 = block.at(row, k * r + j) - b.at(i, k);
                    block.set(row, k * r + j, c2);
                }
            }
        }
        rows.push(block);
    }
    let hom_basis = crate::matrix::kernel_of_row_blocks(r * r, rows.into_iter());
    let d = hom_basis.cols();
    if d == 0 {
        return Ok(IsoResult::NotIsomorphic("equivariant hom space is zero".into()));
    }
    let total: u64 = {
        let per = 2 * bound as u64 + 1;
        let mut t: u64 = 1;
        for _ in 0..d {
            t = t.saturating_mul(per);
        }
        t
    };
    if total > enum_cap {
        return Ok(IsoResult::Inconclusive(format!(
            "search space {} exceeds cap {} (hom dimension {}, bound {})",
            total, enum_cap, d, bound
        )));
    }
    // Odometer over coefficient vectors in [-bound, bound]^d.
    let mut coeff = vec![-bound; d];
    loop {
        if coeff.iter().any(|&c| c != 0) {
            let mut t = IntMatrix::zeros(r, r);
            for (k, &c) in coeff.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let col = hom_basis.column(k);
                for i in 0..r {
                    for j in 0..r {
                        let v = t.at(i, j) + BigInt::from(c) * &col[i * r + j];
                        t.set(i, j, v);
                    }
                }
            }
            if verify_iso(m, n, &t) {
                return Ok(IsoResult::Isomorphic(t));
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return Ok(IsoResult::Inconclusive(format!(
                    "no unimodular equivariant map with coefficients bounded by {}",
                    bound
                )));
            }
            if coeff[k] < bound {
                coeff[k] += 1;
                break;
            }
            coeff[k] = -bound;
            k += 1;
        }
    }
}

/// A character of an elementary abelian 2-group, recorded by its signs on a
/// fixed independent generating set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TwoTorsionCharacter {
    /// true = the generator acts by -1 in this character.
    pub signs: Vec<bool>,
}

impl TwoTorsionCharacter {
    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| !s)
    }
}

/// Rational character decomposition of a lattice under an elementary abelian
/// 2-subgroup: simultaneous eigenspace splitting over Q, computed with
/// integer kernels of (action(g) -/+ 1).
#[derive(Clone, Debug)]
pub struct CharacterDecomposition {
    /// Independent generating elements of A used to label characters.
    pub basis_elements: Vec<usize>,
    /// (character, multiplicity) pairs with multiplicity > 0, sorted.
    pub multiplicities: Vec<(TwoTorsionCharacter, usize)>,
}

impl CharacterDecomposition {
    pub fn multiplicity_of(&self, signs: &[bool]) -> usize {
        self.multiplicities
            .iter()
            .find(|(c, _)| c.signs == signs)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

pub fn rational_character_decomposition(
    m: &GLattice,
    a: &Subgroup,
) -> Result<CharacterDecomposition, Error> {
    let p = &a.parent;
    for &i in &a.indices {
        for &j in &a.indices {
            if p.product_index(i, j) != p.product_index(j, i) {
                return Err(Error::NotElementaryAbelianTwo);
            }
        }
        if p.product_index(i, i) != p.identity_index() {
            return Err(Error::NotElementaryAbelianTwo);
        }
    }
    // Greedy F2-independent generating subset.
    let mut basis: Vec<usize> = Vec::new();
    let mut spanned: Vec<usize> = vec![p.identity_index()];
    for &g in &a.indices {
        if g == p.identity_index() || spanned.contains(&g) {
            continue;
        }
        let mut new_span = spanned.clone();
        for &s in &spanned {
            new_span.push(p.product_index(s, g));
        }
        basis.push(g);
        spanned = new_span;
    }
    if spanned.len() != a.order() {
        return Err(Error::NotElementaryAbelianTwo);
    }

    let k = basis.len();
    let mut multiplicities = Vec::new();
    let mut total = 0;
    for mask in 0..(1usize << k) {
        let signs: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
        let blocks: Vec<IntMatrix> = (0..k)
            .map(|i| {
                let act = m.action_of(group_index_in(m, a, basis[i]));
                let id = IntMatrix::identity(m.rank);
                if signs[i] {
                    act.add(&id)
                } else {
                    act.sub(&id)
                }
            })
            .collect();
        let eig = crate::matrix::kernel_of_row_blocks(m.rank, blocks.into_iter());
        let mult = eig.cols();
        total += mult;
        if mult > 0 {
            multiplicities.push((TwoTorsionCharacter { signs }, mult));
        }
    }
    if total != m.rank {
        return Err(Error::NotElementaryAbelianTwo);
    }
    multiplicities.sort();
    Ok(CharacterDecomposition {
        basis_elements: basis,
        multiplicities,
    })
}

// A Subgroup's indices refer to its parent; the lattice may be over that
// parent or over a re-materialization of the same elements.
fn group_index_in(m: &GLattice, a: &Subgroup, idx: usize) -> usize {
    if same_group(&m.group, &a.parent) {
        idx
    } else {
        m.group
            .index_of(a.parent.matrix(idx))
            .expect("subgroup element not in the lattice's group")
    }
}

/// Result of searching for a basis permuted by the group.
#[derive(Clone, Debug)]
pub enum PermBasisResult {
    /// Orbits of vectors whose union is a Z-basis permuted by the action.
    Found(Vec<Vec<Vec<BigInt>>>),
    /// An invariant certifies that no permutation basis exists at any bound.
    NotPermutation(String),
    /// Nothing found within the coordinate bound.
    Inconclusive(String),
}

/// Search for a Z-basis permuted by the group among vectors with coordinates
/// in [-bound, bound].
pub fn is_permutation_basis(m: &GLattice, bound: i64) -> PermBasisResult {
    if m.rank == 0 {
        return PermBasisResult::Found(vec![]);
    }
    // A permutation lattice of positive rank has a nonzero fixed vector
    // (sum over any orbit), so fixed rank 0 rules it out entirely.
    if m.fixed_sublattice_whole().cols() == 0 {
        return PermBasisResult::NotPermutation(
            "fixed sublattice is zero but the rank is positive".into(),
        );
    }

    let r = m.rank;
    let total = (2 * bound as u64 + 1).pow(r as u32);
    if total > 5_000_000 {
        return PermBasisResult::Inconclusive("coordinate enumeration too large".into());
    }
    let mut orbits: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<BigInt>> = std::collections::BTreeSet::new();
    let mut coord = vec![-bound; r];
    'outer: loop {
        let v: Vec<BigInt> = coord.iter().map(|&c| BigInt::from(c)).collect();
        if v.iter().any(|x| !x.is_zero()) && !seen.contains(&v) {
            let mut orbit: Vec<Vec<BigInt>> = Vec::new();
            let mut ok = true;
            for a in &m.action {
                let w = a.mul_vec(&v);
                if !orbit.contains(&w) {
                    if orbit.len() == r {
                        ok = false;
                        break;
                    }
                    orbit.push(w);
                }
            }
            if ok {
                orbit.sort();
                for w in &orbit {
                    seen.insert(w.clone());
                }
                if !orbits.contains(&orbit) {
                    orbits.push(orbit);
                }
            } else {
                seen.insert(v);
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                break 'outer;
            }
            if coord[k] < bound {
                coord[k] += 1;
                break;
            }
            coord[k] = -bound;
            k += 1;
        }
    }
    // Backtracking over orbit subsets whose total size is the rank, accepting
    // the first unimodular union.
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, vec![], 0)];
    while let Some((start, chosen, size)) = stack.pop() {
        if size == r {
            let mut cols: Vec<Vec<BigInt>> = Vec::new();
            for &i in &chosen {
                for w in &orbits[i] {
                    cols.push(w.clone());
                }
            }
            let basis = IntMatrix::from_columns(r, &cols);
            if basis.is_unimodular() {
                let out: Vec<Vec<Vec<BigInt>>> = chosen.iter().map(|&i| orbits[i].clone()).collect();
                return PermBasisResult::Found(out);
            }
            continue;
        }
        for i in (start..orbits.len()).rev() {
            let s = orbits[i].len();
            if size + s <= r {
                let mut c = chosen.clone();
                c.push(i);
                stack.push((i + 1, c, size + s));
            }
        }
    }
    PermBasisResult::Inconclusive(format!("no permuted basis with coordinates within {}", bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::matrix::quotient_group;

    fn mi(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows)
    }

    fn z2_group() -> Arc<FiniteMatrixGroup> {
        Arc::new(FiniteMatrixGroup::generate_closure(&[mi(&[vec![-1]])], 10).unwrap())
    }

    fn klein_group() -> Arc<FiniteMatrixGroup> {
        let a = mi(&[vec![-1, 0], vec![0, 1]]);
        let b = mi(&[vec![1, 0], vec![0, -1]]);
        Arc::new(FiniteMatrixGroup::generate_closure(&[a, b], 100).unwrap())
    }

    #[test]
    fn permutation_lattice_shapes() {
        let g = klein_group();
        let whole = g.whole_subgroup();
        let triv = permutation_lattice(&g, &whole);
        assert_eq!(triv.lattice.rank, 1);
        let reg = permutation_lattice(&g, &g.trivial_subgroup());
        assert_eq!(reg.lattice.rank, 4);
        for a in &reg.lattice.action {
            for i in 0..4 {
                let ones = (0..4).filter(|&j| a.at(i, j).is_one()).count();
                assert_eq!(ones, 1);
            }
        }
        reg.lattice.verify_action().unwrap();
    }

    #[test]
    fn dual_of_permutation_is_same_matrices() {
        let g = klein_group();
        let reg = regular_lattice(&g);
        let dual = reg.dual();
        for i in 0..g.order() {
            assert_eq!(reg.action[i], dual.action[i]);
        }
        let dd = dual.dual();
        for i in 0..g.order() {
            assert_eq!(reg.action[i], dd.action[i]);
        }
    }

    #[test]
    fn direct_sum_and_restrict() {
        let g = klein_group();
        let t1 = GLattice::trivial(&g, 1);
        let t2 = GLattice::trivial(&g, 1);
        let s = t1.direct_sum(&t2).unwrap();
        assert_eq!(s.rank, 2);
        for a in &s.action {
            assert!(a.is_identity());
        }
        let nat = GLattice::natural(&g);
        let whole = g.whole_subgroup();
        let r = nat.restrict(&whole).unwrap();
        assert_eq!(r.rank, nat.rank);
        assert_eq!(r.group.order(), 4);
        let triv = nat.restrict(&g.trivial_subgroup()).unwrap();
        assert_eq!(triv.group.order(), 1);
        assert!(triv.action[0].is_identity());
    }

    #[test]
    fn fixed_sublattices() {
        let g = klein_group();
        let reg = regular_lattice(&g);
        let fix = reg.fixed_sublattice_whole();
        assert_eq!(fix.cols(), 1);
        let col = fix.column(0);
        assert!(col.iter().all(|x| x.abs().is_one()));
        assert!(col.iter().all(|x| x == &col[0]));
        let all = reg.fixed_sublattice(&g.trivial_subgroup());
        assert_eq!(all.cols(), 4);
    }

    #[test]
    fn augmentation_and_norm_basics() {
        let g = z2_group();
        let an = augmentation_and_norm(&g).unwrap();
        assert_eq!(an.aug_ideal.rank, 1);
        assert_eq!(an.norm_cokernel.rank, 1);
        assert!(an.aug_sequence.flags.all());
        assert!(an.norm_sequence.flags.all());
        // J for Z/2 is the sign lattice.
        let nontriv = an.nontrivial[0];
        assert_eq!(an.norm_cokernel.action[nontriv], mi(&[vec![-1]]));
        // I and J are dual.
        let dual_j = an.norm_cokernel.dual();
        let iso = iso_search(&an.aug_ideal, &dual_j, 2, None, 100_000).unwrap();
        assert!(iso.found().is_some());
    }

    #[test]
    fn augmentation_klein_action_table() {
        // J_H for H = (Z/2)^2 with basis classes (a, b, ab):
        // h sends its own class to -(sum of all three).
        let g = klein_group();
        let an = augmentation_and_norm(&g).unwrap();
        for (col, &h) in an.nontrivial.iter().enumerate() {
            let act = &an.norm_cokernel.action[h];
            for row in 0..3 {
                assert_eq!(act.at(row, col), &-BigInt::one());
            }
        }
        an.aug_ideal.verify_action().unwrap();
        an.norm_cokernel.verify_action().unwrap();
        // I and J dual in rank 3 as well; the standard pairing makes the
        // identity matrix an equivariant isomorphism I -> dual(J).
        let dual_j = an.norm_cokernel.dual();
        let iso = iso_search(&an.aug_ideal, &dual_j, 1, Some(&IntMatrix::identity(3)), 1000).unwrap();
        assert!(iso.found().is_some());
        // rank 0 for the trivial group
        let t = Arc::new(FiniteMatrixGroup::trivial(1));
        let an0 = augmentation_and_norm(&t).unwrap();
        assert_eq!(an0.aug_ideal.rank, 0);
        assert_eq!(an0.norm_cokernel.rank, 0);
    }

    #[test]
    fn exactness_flags_counterexamples() {
        let g = z2_group();
        let reg = regular_lattice(&g);
        let triv = GLattice::trivial(&g, 1);
        let zero = EquivariantMap::new(reg.clone(), triv.clone(), IntMatrix::zeros(1, 2)).unwrap();
        let inner = EquivariantMap::new(
            triv.clone(),
            reg.clone(),
            IntMatrix::from_fn(2, 1, |_, _| BigInt::one()),
        )
        .unwrap();
        let flags = check_exact(&inner, &zero);
        assert!(!flags.surjective);
        let aug = EquivariantMap::new(
            reg.clone(),
            triv.clone(),
            IntMatrix::from_fn(1, 2, |_, _| BigInt::one()),
        )
        .unwrap();
        let flags = check_exact(&inner, &aug);
        assert!(flags.injective);
        assert!(!flags.exact_at_middle);
    }

    #[test]
    fn equivariance_violation_detected() {
        let g = z2_group();
        let sign = GLattice::from_generator_actions(&g, &[mi(&[vec![-1]])]).unwrap();
        let triv = GLattice::trivial(&g, 1);
        let bad = EquivariantMap::new(sign, triv, IntMatrix::identity(1));
        assert!(matches!(bad, Err(Error::NotEquivariant(0))));
    }

    #[test]
    fn iso_search_basics() {
        let g = z2_group();
        let triv = GLattice::trivial(&g, 1);
        let sign = GLattice::from_generator_actions(&g, &[mi(&[vec![-1]])]).unwrap();
        match iso_search(&triv, &triv, 1, None, 1000).unwrap() {
            IsoResult::Isomorphic(t) => assert!(t.is_identity()),
            other => panic!("expected identity, got {:?}", other),
        }
        match iso_search(&triv, &sign, 2, None, 1000).unwrap() {
            IsoResult::NotIsomorphic(_) => {}
            other => panic!("expected not-isomorphic, got {:?}", other),
        }
    }

    #[test]
    fn dual_reverses_composition() {
        let g = klein_group();
        let reg = regular_lattice(&g);
        let triv = GLattice::trivial(&g, 1);
        let f = EquivariantMap::new(
            reg.clone(),
            triv.clone(),
            IntMatrix::from_fn(1, 4, |_, _| BigInt::one()),
        )
        .unwrap();
        let gmap = EquivariantMap::new(
            triv.clone(),
            reg.clone(),
            IntMatrix::from_fn(4, 1, |_, _| BigInt::one()),
        )
        .unwrap();
        let fg = f.matrix.mul(&gmap.matrix);
        assert_eq!(fg.transpose(), gmap.dual().matrix.mul(&f.dual().matrix));
    }

    #[test]
    fn character_decomposition_regular_klein() {
        let g = klein_group();
        let reg = regular_lattice(&g);
        let a = g.whole_subgroup();
        let dec = rational_character_decomposition(&reg, &a).unwrap();
        assert_eq!(dec.multiplicities.len(), 4);
        for (_, mult) in &dec.multiplicities {
            assert_eq!(*mult, 1);
        }
        let dec0 = rational_character_decomposition(&reg, &g.trivial_subgroup()).unwrap();
        assert_eq!(dec0.multiplicities.len(), 1);
        assert_eq!(dec0.multiplicities[0].1, 4);
        assert!(dec0.multiplicities[0].0.is_trivial());
    }

    #[test]
    fn character_decomposition_rejects_non_two_torsion() {
        let r = mi(&[vec![0, -1], vec![1, 0]]); // order 4
        let g = Arc::new(FiniteMatrixGroup::generate_closure(&[r], 10).unwrap());
        let nat = GLattice::natural(&g);
        let a = g.whole_subgroup();
        assert!(rational_character_decomposition(&nat, &a).is_err());
    }

    #[test]
    fn permutation_basis_search() {
        let g = klein_group();
        let reg = regular_lattice(&g);
        match is_permutation_basis(&reg, 1) {
            PermBasisResult::Found(orbits) => {
                let total: usize = orbits.iter().map(|o| o.len()).sum();
                assert_eq!(total, 4);
            }
            other => panic!("expected found, got {:?}", other),
        }
        let z2 = z2_group();
        let sign = GLattice::from_generator_actions(&z2, &[mi(&[vec![-1]])]).unwrap();
        match is_permutation_basis(&sign, 1) {
            PermBasisResult::NotPermutation(_) => {}
            other => panic!("expected not-permutation, got {:?}", other),
        }
    }

    #[test]
    fn quotient_of_lattice_pair_has_connection_order() {
        let ambient = IntMatrix::identity(2);
        let sub = mi(&[vec![2, 0], vec![0, 2]]);
        let q = quotient_group(&ambient, &sub).unwrap();
        assert_eq!(q.invariants.order().unwrap(), BigInt::from(4));
    }
}
