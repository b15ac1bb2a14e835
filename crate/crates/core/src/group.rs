//! Finite groups presented by integer matrix generators.
//!
//! Elements are stored as matrices (not abstract permutations) so the same
//! element can act on several lattices through base change. A canonical byte
//! key per matrix gives O(1) dedup and a deterministic element order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::error::Error;
use crate::matrix::IntMatrix;

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A group element: a unimodular square integer matrix plus its canonical key.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: IntMatrix,
    pub key: Vec<u8>,
}

impl GroupElement {
    pub fn new(matrix: IntMatrix) -> Self {
        let key = matrix.canonical_key();
        GroupElement { matrix, key }
    }
}

/// A finite group of unimodular integer matrices, materialized as a closed
/// element set sorted by canonical key.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    pub dim: usize,
    pub elements: Vec<GroupElement>,
    /// Indices (into `elements`) of the generators, in the order given.
    pub generators: Vec<usize>,
    /// BFS factorization: `factor[i] = Some((g, p))` means
    /// `elements[i] = elements[p] * gen_g`; `None` marks the identity.
    factor: Vec<Option<(usize, usize)>>,
    index: BTreeMap<Vec<u8>, usize>,
    identity: usize,
    inverse: Vec<usize>,
    /// Multiplication table (row-major i * order + j), built for small groups.
    mult: Option<Vec<u32>>,
}

const MULT_TABLE_MAX_ORDER: usize = 512;

impl FiniteMatrixGroup {
    /// Closure of the given generator matrices under multiplication.
    /// Errors if the closure exceeds `cap`.
    pub fn generate_closure(gen_mats: &[IntMatrix], cap: usize) -> Result<Self, Error> {
        if gen_mats.is_empty() {
            return Err(Error::DimensionMismatch("no generators".into()));
        }
        let dim = gen_mats[0].rows();
        for g in gen_mats {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(
                    "generators must be square of equal dimension".into(),
                ));
            }
            if !g.is_unimodular() {
                return Err(Error::NotUnimodular);
            }
        }

        // BFS closure with temporary insertion-order indices.
        let id = IntMatrix::identity(dim);
        let mut mats: Vec<IntMatrix> = vec![id.clone()];
        let mut fact: Vec<Option<(usize, usize)>> = vec![None];
        let mut seen: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        seen.insert(id.canonical_key(), 0);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        while let Some(p) = queue.pop_front() {
            for (gi, g) in gen_mats.iter().enumerate() {
                let prod = mats[p].mul(g);
                let key = prod.canonical_key();
                if !seen.contains_key(&key) {
                    let idx = mats.len();
                    if idx >= cap {
                        return Err(Error::GroupTooLarge(cap));
                    }
                    seen.insert(key, idx);
                    mats.push(prod);
                    fact.push(Some((gi, p)));
                    queue.push_back(idx);
                }
            }
        }

        // Sort by canonical key and remap factorization data.
        let order = mats.len();
        let mut perm: Vec<usize> = (0..order).collect();
        perm.sort_by(|&a, &b| mats[a].canonical_key().cmp(&mats[b].canonical_key()));
        let mut new_of_old = vec![0usize; order];
        for (new, &old) in perm.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut elements = Vec::with_capacity(order);
        let mut factor = vec![None; order];
        let mut index = BTreeMap::new();
        for (new, &old) in perm.iter().enumerate() {
            let e = GroupElement::new(mats[old].clone());
            index.insert(e.key.clone(), new);
            elements.push(e);
            factor[new] = fact[old].map(|(g, p)| (g, new_of_old[p]));
        }
        let identity = *index.get(&IntMatrix::identity(dim).canonical_key()).unwrap();
        let generators: Vec<usize> = gen_mats
            .iter()
            .map(|g| *index.get(&g.canonical_key()).unwrap())
            .collect();

        let mut group = FiniteMatrixGroup {
            dim,
            elements,
            generators,
            factor,
            index,
            identity,
            inverse: vec![],
            mult: None,
        };
        group.inverse = (0..order)
            .map(|i| {
                let inv = group.elements[i].matrix.inverse_unimodular();
                *group.index.get(&inv.canonical_key()).expect("closed group")
            })
            .collect();
        if order <= MULT_TABLE_MAX_ORDER {
            let mut table = vec![0u32; order * order];
            for i in 0..order {
                for j in 0..order {
                    let prod = group.elements[i].matrix.mul(&group.elements[j].matrix);
                    table[i * order + j] =
                        *group.index.get(&prod.canonical_key()).expect("closed") as u32;
                }
            }
            group.mult = Some(table);
        }
        Ok(group)
    }

    pub fn trivial(dim: usize) -> Self {
        Self::generate_closure(&[IntMatrix::identity(dim)], 2).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.elements[i].matrix
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(&m.canonical_key()).copied()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn product_index(&self, i: usize, j: usize) -> usize {
        if let Some(t) = &self.mult {
            t[i * self.order() + j] as usize
        } else {
            let prod = self.elements[i].matrix.mul(&self.elements[j].matrix);
            self.index_of(&prod).expect("closed group")
        }
    }

    /// Extend a map on the generators multiplicatively to all elements,
    /// following the BFS factorization words. The extension is verified to be
    /// a homomorphism (generator x element exhaustion); a violation means the
    /// generator images do not satisfy the group's relations.
    pub fn transport(&self, gen_images: &[IntMatrix]) -> Result<Vec<IntMatrix>, Error> {
        assert_eq!(gen_images.len(), self.generators.len());
        let target_dim = gen_images[0].rows();
        let order = self.order();
        let mut out: Vec<Option<IntMatrix>> = vec![None; order];
        out[self.identity] = Some(IntMatrix::identity(target_dim));
        // elements[i] = elements[p] * gen_g; resolve recursively.
        fn resolve(
            i: usize,
            factor: &[Option<(usize, usize)>],
            gen_images: &[IntMatrix],
            out: &mut Vec<Option<IntMatrix>>,
        ) -> IntMatrix {
            if let Some(m) = &out[i] {
                return m.clone();
            }
            let (g, p) = factor[i].expect("only identity lacks a factorization");
            let pm = resolve(p, factor, gen_images, out);
            let m = pm.mul(&gen_images[g]);
            out[i] = Some(m.clone());
            m
        }
        for i in 0..order {
            resolve(i, &self.factor, gen_images, &mut out);
        }
        let images: Vec<IntMatrix> = out.into_iter().map(|m| m.unwrap()).collect();
        // Homomorphism check on generators x elements.
        for (gi, &g) in self.generators.iter().enumerate() {
            for e in 0..order {
                let ge = self.product_index(g, e);
                if images[g].mul(&images[e]) != images[ge] {
                    return Err(Error::NotAHomomorphism { gen: gi, element: e });
                }
            }
        }
        Ok(images)
    }

    /// Subgroup generated by the given element indices (closure inside self).
    pub fn subgroup_from_generators(self: &Arc<Self>, gens: &[usize]) -> Subgroup {
        let mut set = BTreeSet::new();
        set.insert(self.identity);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(self.identity);
        while let Some(p) = queue.pop_front() {
            for &g in gens {
                let q = self.product_index(p, g);
                if set.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        Subgroup {
            parent: Arc::clone(self),
            indices: set.into_iter().collect(),
            generators: gens.to_vec(),
        }
    }

    pub fn whole_subgroup(self: &Arc<Self>) -> Subgroup {
        let gens = self.generators.clone();
        Subgroup {
            parent: Arc::clone(self),
            indices: (0..self.order()).collect(),
            generators: gens,
        }
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup {
            parent: Arc::clone(self),
            indices: vec![self.identity],
            generators: vec![],
        }
    }

    /// All subgroups of the form <g>, deduplicated, including the trivial one.
    pub fn cyclic_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for g in 0..self.order() {
            let sub = if g == self.identity {
                self.trivial_subgroup()
            } else {
                self.subgroup_from_generators(&[g])
            };
            if seen.insert(sub.indices.clone()) {
                out.push(sub);
            }
        }
        out.sort_by(|a, b| a.indices.cmp(&b.indices));
        out
    }

    /// All subgroups, found by closing every generating subset of size <= 3.
    /// This is complete for every group this crate materializes (and in
    /// general for groups all of whose subgroups are 3-generated).
    pub fn all_subgroups(self: &Arc<Self>, cap: usize) -> Result<Vec<Subgroup>, Error> {
        let n = self.order();
        let mut seen: BTreeMap<Vec<usize>, Subgroup> = BTreeMap::new();
        let triv = self.trivial_subgroup();
        seen.insert(triv.indices.clone(), triv);
        let push = |sub: Subgroup, seen: &mut BTreeMap<Vec<usize>, Subgroup>| -> Result<(), Error> {
            if !seen.contains_key(&sub.indices) {
                if seen.len() >= cap {
                    return Err(Error::SubgroupCapExceeded(cap));
                }
                seen.insert(sub.indices.clone(), sub);
            }
            Ok(())
        };
        for a in 0..n {
            push(self.subgroup_from_generators(&[a]), &mut seen)?;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                push(self.subgroup_from_generators(&[a, b]), &mut seen)?;
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    push(self.subgroup_from_generators(&[a, b, c]), &mut seen)?;
                }
            }
        }
        Ok(seen.into_values().collect())
    }

    /// Left cosets of a subgroup: returns (cosets, transversal) where each
    /// coset is a sorted index list and transversal[i] is the minimal
    /// representative of coset i. Cosets are ordered by their representative.
    pub fn left_cosets(&self, sub: &Subgroup) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut assigned = vec![usize::MAX; self.order()];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut transversal = Vec::new();
        for g in 0..self.order() {
            if assigned[g] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = sub
                .indices
                .iter()
                .map(|&h| self.product_index(g, h))
                .collect();
            coset.sort_unstable();
            coset.dedup();
            let id = cosets.len();
            for &x in &coset {
                assigned[x] = id;
            }
            transversal.push(coset[0]);
            cosets.push(coset);
        }
        (cosets, transversal)
    }
}

/// Three-valued answer for subgroup containment between two materialized
/// groups.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubgroupRelation {
    Subgroup,
    NotSubgroup,
    /// Matrix dimension mismatch: the groups do not share an ambient space.
    Incomparable,
}

/// Is every element of `h` an element of `g`?
pub fn is_subgroup_of(h: &FiniteMatrixGroup, g: &FiniteMatrixGroup) -> SubgroupRelation {
    if h.dim != g.dim {
        return SubgroupRelation::Incomparable;
    }
    if h.elements.iter().all(|e| g.index.contains_key(&e.key)) {
        SubgroupRelation::Subgroup
    } else {
        SubgroupRelation::NotSubgroup
    }
}

/// Least m >= 1 with g^m = identity; errors after `cap` iterations.
pub fn element_order(g: &IntMatrix, cap: usize) -> Result<usize, Error> {
    assert_eq!(g.rows(), g.cols());
    let id = IntMatrix::identity(g.rows());
    let mut p = g.clone();
    for m in 1..=cap {
        if p == id {
            return Ok(m);
        }
        p = p.mul(g);
    }
    Err(Error::InfiniteOrder)
}

/// A subgroup of a materialized group, stored as a sorted index set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub parent: Arc<FiniteMatrixGroup>,
    /// Sorted element indices into the parent group.
    pub indices: Vec<usize>,
    /// Generating indices used to build this subgroup (may be empty for the
    /// trivial subgroup).
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_cyclic(&self) -> bool {
        self.indices
            .iter()
            .any(|&g| self.parent.subgroup_from_generators(&[g]).order() == self.order())
    }

    /// Materialize this subgroup as a standalone group. Generators are kept
    /// so factorization words use them (needed by cohomology).
    pub fn to_group(&self, parent: &Arc<FiniteMatrixGroup>) -> Result<FiniteMatrixGroup, Error> {
        let gens: Vec<IntMatrix> = if self.generators.is_empty() {
            vec![IntMatrix::identity(parent.dim)]
        } else {
            self.generators
                .iter()
                .map(|&i| parent.matrix(i).clone())
                .collect()
        };
        let g = FiniteMatrixGroup::generate_closure(&gens, parent.order() + 1)?;
        debug_assert_eq!(g.order(), self.order());
        Ok(g)
    }

    /// The conjugate subgroup g H g^{-1}.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let p = &self.parent;
        let ginv = p.inverse_index(g);
        let mut idx: Vec<usize> = self
            .indices
            .iter()
            .map(|&h| p.product_index(p.product_index(g, h), ginv))
            .collect();
        idx.sort_unstable();
        let gens: Vec<usize> = self
            .generators
            .iter()
            .map(|&h| p.product_index(p.product_index(g, h), ginv))
            .collect();
        Subgroup {
            parent: Arc::clone(p),
            indices: idx,
            generators: gens,
        }
    }

    /// Canonical key of the conjugacy class of this subgroup: the minimal
    /// index vector among all conjugates.
    pub fn conjugacy_key(&self) -> Vec<usize> {
        let mut best = self.indices.clone();
        for g in 0..self.parent.order() {
            let c = self.conjugate(g);
            if c.indices < best {
                best = c.indices;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows)
    }

    #[test]
    fn closure_identity_only() {
        let g = FiniteMatrixGroup::generate_closure(&[IntMatrix::identity(3)], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn closure_z2_squared_diagonal() {
        let a = mi(&[vec![-1, 0], vec![0, 1]]);
        let b = mi(&[vec![1, 0], vec![0, -1]]);
        let g = FiniteMatrixGroup::generate_closure(&[a, b], 100).unwrap();
        assert_eq!(g.order(), 4);
        let g = Arc::new(g);
        assert_eq!(g.cyclic_subgroups().len(), 4);
        assert_eq!(g.all_subgroups(100).unwrap().len(), 5);
    }

    #[test]
    fn closure_cap() {
        // Z/6 generated by a rotation companion matrix, cap too small.
        let r = mi(&[vec![0, -1], vec![1, 1]]); // order 6
        let e = FiniteMatrixGroup::generate_closure(&[r.clone()], 3);
        assert!(matches!(e, Err(Error::GroupTooLarge(3))));
        let g = FiniteMatrixGroup::generate_closure(&[r], 10).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn element_orders() {
        assert_eq!(element_order(&IntMatrix::identity(4), 10).unwrap(), 1);
        let neg = mi(&[vec![-1, 0], vec![0, -1]]);
        assert_eq!(element_order(&neg, 10).unwrap(), 2);
        let shear = mi(&[vec![1, 1], vec![0, 1]]);
        assert!(matches!(element_order(&shear, 50), Err(Error::InfiniteOrder)));
    }

    #[test]
    fn z4_subgroups() {
        let r = mi(&[vec![0, -1], vec![1, 0]]); // order 4
        let g = Arc::new(FiniteMatrixGroup::generate_closure(&[r], 10).unwrap());
        assert_eq!(g.order(), 4);
        let subs = g.all_subgroups(100).unwrap();
        assert_eq!(subs.len(), 3); // 1, Z/2, Z/4
        for s in &subs {
            assert_eq!(g.order() % s.order(), 0);
        }
    }

    #[test]
    fn subgroup_relation() {
        let neg = mi(&[vec![-1, 0], vec![0, -1]]);
        let r = mi(&[vec![0, -1], vec![1, 0]]);
        let z2 = FiniteMatrixGroup::generate_closure(&[neg], 10).unwrap();
        let z4 = FiniteMatrixGroup::generate_closure(&[r], 10).unwrap();
        assert_eq!(is_subgroup_of(&z2, &z4), SubgroupRelation::Subgroup);
        assert_eq!(is_subgroup_of(&z4, &z2), SubgroupRelation::NotSubgroup);
        let z2_dim3 = FiniteMatrixGroup::generate_closure(
            &[mi(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]])],
            10,
        )
        .unwrap();
        assert_eq!(is_subgroup_of(&z2_dim3, &z4), SubgroupRelation::Incomparable);
    }

    #[test]
    fn closure_idempotent() {
        let r = mi(&[vec![0, -1], vec![1, 1]]);
        let g = FiniteMatrixGroup::generate_closure(&[r], 10).unwrap();
        let mats: Vec<IntMatrix> = g.elements.iter().map(|e| e.matrix.clone()).collect();
        let g2 = FiniteMatrixGroup::generate_closure(&mats, 10).unwrap();
        assert_eq!(g.order(), g2.order());
        for e in &g.elements {
            assert!(g2.contains(&e.matrix));
        }
    }

    #[test]
    fn transport_and_homomorphism_check() {
        // Z/2 x Z/2 as diagonal matrices; transport to a permutation rep.
        let a = mi(&[vec![-1, 0], vec![0, 1]]);
        let b = mi(&[vec![1, 0], vec![0, -1]]);
        let g = FiniteMatrixGroup::generate_closure(&[a, b], 100).unwrap();
        // Valid: swap coordinates 0,1 resp. 2,3 of Z^4.
        let p1 = mi(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        let p2 = mi(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
        let imgs = g.transport(&[p1, p2]).unwrap();
        assert_eq!(imgs.len(), 4);
        // Invalid: an order-4 image for an order-2 generator violates relations.
        let r = mi(&[vec![0, -1], vec![1, 0]]);
        let bad = g.transport(&[r, mi(&[vec![1, 0], vec![0, -1]])]);
        assert!(bad.is_err());
    }

    #[test]
    fn cosets() {
        let r = mi(&[vec![0, -1], vec![1, 1]]); // Z/6
        let g = Arc::new(FiniteMatrixGroup::generate_closure(&[r], 10).unwrap());
        let sq = g.product_index(g.generators[0], g.generators[0]);
        let h = g.subgroup_from_generators(&[sq]); // order 3
        assert_eq!(h.order(), 3);
        let (cosets, transversal) = g.left_cosets(&h);
        assert_eq!(cosets.len(), 2);
        assert_eq!(transversal.len(), 2);
        let total: usize = cosets.iter().map(|c| c.len()).sum();
        assert_eq!(total, 6);
    }
}
