//! Group cohomology of lattices in degrees 0 to 2 (plus Tate degree 0),
//! restriction maps, and the restriction-kernel invariants Sha^1_omega and
//! Sha^2_omega.
//!
//! The cochain model is the normalized bar complex indexed by the nontrivial
//! group elements. The engine rests on an exact-arithmetic shortcut: for a
//! finite group every positive-degree cocycle class is killed by the group
//! order (the explicit homotopy `|G| f = d(sigma f)` with
//! `(sigma f)(g_1,...,g_{n-1}) = sum_h f(g_1,...,g_{n-1},h)`), so
//!
//!   H^n(G, M)  =  torsion part of  C^n / im(d^{n-1}),
//!
//! because a cochain with a torsion class is automatically a cocycle (its
//! differential is torsion in a free module, hence zero). Degrees 1 and 2
//! therefore never touch the degree-3 cochain space. The definitional routes
//! through kernels of d^1 and d^2 are kept alongside for cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::glattice::GLattice;
use crate::group::Subgroup;
use crate::matrix::{
    image_basis, kernel_basis, quotient_group, solve_exact, AbelianGroupInvariants, IntMatrix,
    QuotientGroup,
};

/// Resource guards for cohomology jobs. `c3_entries` bounds |G|^3 * rank for
/// degree-2 jobs (the size of the degree-3 cochain space the definitional
/// route would need); `work` bounds the elimination effort
/// (|C^1|^2 * |C^2| for degree 2).
#[derive(Clone, Copy, Debug)]
pub struct CohomologyOptions {
    pub c3_entries: u128,
    pub work: u128,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions {
            c3_entries: 10_000_000,
            work: 1_500_000_000,
        }
    }
}

/// A finitely generated abelian group H = Z^gens / im(relations), with class
/// arithmetic through the quotient presentation.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub invariants: AbelianGroupInvariants,
    /// Relation matrix: gens x (number of relations).
    pub relations: IntMatrix,
    quot: QuotientGroup,
}

impl PresentedGroup {
    pub fn new(gens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), gens);
        let quot = quotient_group(&IntMatrix::identity(gens), &relations)
            .expect("identity ambient always contains the relations");
        PresentedGroup {
            invariants: quot.invariants.clone(),
            relations,
            quot,
        }
    }

    pub fn gens(&self) -> usize {
        self.relations.rows()
    }

    pub fn class_of(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.quot.class_of(v).expect("identity ambient")
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.class_of(v).iter().all(|x| x.is_zero())
    }

    pub fn generator_rep(&self, i: usize) -> Vec<BigInt> {
        self.quot.generator_rep(i)
    }

    pub fn coordinate_orders(&self) -> Vec<BigInt> {
        self.quot.coordinate_orders()
    }
}

/// Kernel of a map of presented groups given on generators, with
/// well-definedness (relations into relations) verified.
///
/// Returns the kernel as a presented subquotient: a basis of the sublattice
/// L = preimage of the target relations, modulo the source relations, plus
/// representatives in the source generator coordinates.
pub struct PresentedKernel {
    pub invariants: AbelianGroupInvariants,
    /// Representatives in source-generator coordinates of each invariant
    /// factor generator, paired with its order (0 = infinite).
    pub witnesses: Vec<(Vec<BigInt>, BigInt)>,
}

pub fn kernel_of_presented_maps(
    source: &PresentedGroup,
    maps: &[(IntMatrix, &PresentedGroup)],
) -> PresentedKernel {
    let g = source.gens();
    for (f, target) in maps {
        assert_eq!(f.cols(), g);
        assert_eq!(f.rows(), target.gens());
        // Well-definedness: every source relation maps into the target
        // relation lattice.
        let img = f.mul(&source.relations);
        for c in 0..img.cols() {
            let col = IntMatrix::from_columns(img.rows(), &[img.column(c)]);
            assert!(
                solve_exact(&target.relations, &col).is_some()
                    || col.is_zero()
                    || target.gens() == 0,
                "map of presented groups is not well-defined"
            );
        }
    }
    // L = { x in Z^g : F_i x in im(R_i) for all i }: kernel of the stacked
    // [F_i | -R_i] blocks, projected to the x part.
    let total_rel: usize = maps.iter().map(|(_, t)| t.relations.cols()).sum();
    let width = g + total_rel;
    let mut blocks: Vec<IntMatrix> = Vec::new();
    let mut rel_offset = g;
    for (f, target) in maps {
        let r = &target.relations;
        let mut block = IntMatrix::zeros(f.rows(), width);
        for i in 0..f.rows() {
            for j in 0..g {
                block.set(i, j, f.at(i, j).clone());
            }
            for j in 0..r.cols() {
                block.set(i, rel_offset + j, -r.at(i, j));
            }
        }
        rel_offset += r.cols();
        blocks.push(block);
    }
    let ker = crate::matrix::kernel_of_row_blocks(width, blocks.into_iter());
    // Project to the x part and take a basis of the projected lattice.
    let proj = IntMatrix::from_fn(g, ker.cols(), |i, j| ker.at(i, j).clone());
    let l_basis = image_basis(&proj);
    // Kernel group = L / im(source relations); the relations lie in L by
    // well-definedness.
    let quot = quotient_group(&l_basis, &source.relations)
        .expect("source relations lie in the kernel lattice");
    let invariants = quot.invariants.clone();
    let orders = quot.coordinate_orders();
    let mut witnesses = Vec::new();
    for (i, ord) in orders.iter().enumerate() {
        witnesses.push((quot.generator_rep(i), ord.clone()));
    }
    PresentedKernel {
        invariants,
        witnesses,
    }
}

/// The normalized bar-cochain bookkeeping for one lattice: slot layout and
/// the differentials as explicit row blocks.
pub struct BarComplex<'a> {
    pub m: &'a GLattice,
    /// Indices of the nontrivial group elements; slot i of C^1 is nt[i].
    pub nt: Vec<usize>,
}

impl<'a> BarComplex<'a> {
    pub fn new(m: &'a GLattice) -> Self {
        let id = m.group.identity_index();
        let nt: Vec<usize> = (0..m.group.order()).filter(|&i| i != id).collect();
        BarComplex { m, nt }
    }

    pub fn rank(&self) -> usize {
        self.m.rank
    }

    pub fn c1_dim(&self) -> usize {
        self.nt.len() * self.m.rank
    }

    pub fn c2_dim(&self) -> usize {
        self.nt.len() * self.nt.len() * self.m.rank
    }

    fn slot_of(&self, element: usize) -> Option<usize> {
        self.nt.iter().position(|&x| x == element)
    }

    /// d^0 as a (m*r) x r matrix: block i is action(g_i) - I.
    pub fn d0_matrix(&self) -> IntMatrix {
        let r = self.m.rank;
        let mut d = IntMatrix::zeros(self.c1_dim(), r);
        for (i, &g) in self.nt.iter().enumerate() {
            let a = self.m.action_of(g);
            for x in 0..r {
                for y in 0..r {
                    let mut v = a.at(x, y).clone();
                    if x == y {
                        v -= BigInt::one();
                    }
                    d.set(i * r + x, y, v);
                }
            }
        }
        d
    }

    /// d^1 as a (m^2 r) x (m r) matrix:
    /// (d f)(g,h) = g f(h) - f(gh) + f(g).
    pub fn d1_matrix(&self) -> IntMatrix {
        let r = self.m.rank;
        let mlen = self.nt.len();
        let mut d = IntMatrix::zeros(self.c2_dim(), self.c1_dim());
        for (i, &g) in self.nt.iter().enumerate() {
            let ag = self.m.action_of(g);
            for (j, &h) in self.nt.iter().enumerate() {
                let row0 = (i * mlen + j) * r;
                // + action(g) at slot j
                for x in 0..r {
                    for y in 0..r {
                        if !ag.at(x, y).is_zero() {
                            let v = d.at(row0 + x, j * r + y) + ag.at(x, y);
                            d.set(row0 + x, j * r + y, v);
                        }
                    }
                }
                // - I at slot gh (skip when gh = identity: normalized cochains)
                let gh = self.m.group.product_index(g, h);
                if let Some(k) = self.slot_of(gh) {
                    for x in 0..r {
                        let v = d.at(row0 + x, k * r + x) - BigInt::one();
                        d.set(row0 + x, k * r + x, v);
                    }
                }
                // + I at slot g
                for x in 0..r {
                    let v = d.at(row0 + x, i * r + x) + BigInt::one();
                    d.set(row0 + x, i * r + x, v);
                }
            }
        }
        d
    }

    /// Apply d^1 to a 1-cochain vector.
    pub fn apply_d1(&self, f: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(f.len(), self.c1_dim());
        let r = self.m.rank;
        let mlen = self.nt.len();
        let mut out = vec![BigInt::zero(); self.c2_dim()];
        for (i, &g) in self.nt.iter().enumerate() {
            let ag = self.m.action_of(g);
            for (j, &h) in self.nt.iter().enumerate() {
                let base = (i * mlen + j) * r;
                let gfh = ag.mul_vec(&f[j * r..(j + 1) * r]);
                for x in 0..r {
                    out[base + x] = gfh[x].clone() + &f[i * r + x];
                }
                let gh = self.m.group.product_index(g, h);
                if let Some(k) = self.slot_of(gh) {
                    for x in 0..r {
                        out[base + x] -= &f[k * r + x];
                    }
                }
            }
        }
        out
    }

    /// Apply d^2 to a 2-cochain vector:
    /// (d f)(g,h,k) = g f(h,k) - f(gh,k) + f(g,hk) - f(g,h).
    pub fn apply_d2(&self, f: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(f.len(), self.c2_dim());
        let r = self.m.rank;
        let mlen = self.nt.len();
        let mut out = vec![BigInt::zero(); mlen * mlen * mlen * r];
        let pair = |i: usize, j: usize| (i * mlen + j) * r;
        for (i, &g) in self.nt.iter().enumerate() {
            let ag = self.m.action_of(g);
            for (j, &h) in self.nt.iter().enumerate() {
                let gh = self.m.group.product_index(g, h);
                let gh_slot = self.slot_of(gh);
                for (k, &kk) in self.nt.iter().enumerate() {
                    let base = ((i * mlen + j) * mlen + k) * r;
                    let ghk = self.m.group.product_index(h, kk);
                    let gfhk = ag.mul_vec(&f[pair(j, k)..pair(j, k) + r]);
                    for x in 0..r {
                        out[base + x] = gfhk[x].clone() - &f[pair(i, j) + x];
                    }
                    if let Some(s) = gh_slot {
                        for x in 0..r {
                            out[base + x] -= &f[pair(s, k) + x];
                        }
                    }
                    if let Some(s) = self.slot_of(ghk) {
                        for x in 0..r {
                            out[base + x] += &f[pair(i, s) + x];
                        }
                    }
                }
            }
        }
        out
    }
}

/// A cohomology group with a presentation that supports induced maps:
/// classes live on the pivot coordinates of the echelonized coboundary
/// image, H = Lambda / im(pivot coboundaries).
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: u8,
    pub tate: bool,
    pub invariants: AbelianGroupInvariants,
    /// Cochain-space dimension of the degree (0 for H^0 presentations).
    pub cochain_dim: usize,
    /// Pivot coordinate indices into the cochain space.
    pub pivot_rows: Vec<usize>,
    /// Echelon basis of the coboundary image (cochain_dim x ra).
    pub echelon: IntMatrix,
    /// Basis of Lambda (ra x ra) in pivot coordinates.
    pub lambda: IntMatrix,
    /// The presented quotient Lambda-coords / relations.
    pub presented: PresentedGroup,
}

impl CohomologyGroup {
    /// Class of a cocycle given as a cochain vector, in presented-group
    /// generator coordinates (Lambda coordinates). Errors when the vector is
    /// not a torsion class representative (not in the saturated image).
    pub fn lambda_coords_of(&self, cochain: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        assert_eq!(cochain.len(), self.cochain_dim);
        let z: Vec<BigInt> = self.pivot_rows.iter().map(|&i| cochain[i].clone()).collect();
        let zc = IntMatrix::from_columns(z.len(), &[z]);
        let lam = solve_exact(&self.lambda, &zc)
            .ok_or_else(|| Error::Membership("cochain is not a torsion-class representative".into()))?;
        // Consistency: the lift of these pivot coordinates must reproduce the
        // cochain, otherwise it is not in the rational image at all.
        let lifted = self.lift_lambda(&lam.column(0));
        if lifted != cochain {
            return Err(Error::Membership("cochain is not in the rational coboundary span".into()));
        }
        Ok(lam.column(0))
    }

    /// Cochain lift of a Lambda-coordinate vector.
    pub fn lift_lambda(&self, lam: &[BigInt]) -> Vec<BigInt> {
        let z = self.lambda.mul_vec(lam);
        self.lift_pivot(&z)
    }

    /// Cochain with the given pivot coordinates, extended through the
    /// rational image span (integral by the construction of Lambda).
    fn lift_pivot(&self, z: &[BigInt]) -> Vec<BigInt> {
        use crate::rational::{Rat, RatMatrix};
        let ra = self.pivot_rows.len();
        assert_eq!(z.len(), ra);
        if ra == 0 {
            return vec![BigInt::zero(); self.cochain_dim];
        }
        // Solve E_p c = z (E_p is the pivot-row square of the echelon basis).
        let ep = RatMatrix::from_fn(ra, ra, |i, j| {
            Rat::from_integer(self.echelon.at(self.pivot_rows[i], j).clone())
        });
        let zc = RatMatrix::from_fn(ra, 1, |i, _| Rat::from_integer(z[i].clone()));
        let c = ep.solve(&zc).expect("pivot block is invertible");
        let e = RatMatrix::from_int(&self.echelon);
        let x = e.mul(&c);
        let mut out = Vec::with_capacity(self.cochain_dim);
        for i in 0..self.cochain_dim {
            let v = x.at(i, 0);
            assert!(v.is_integer(), "lift is not integral; Lambda is wrong");
            out.push(v.to_integer());
        }
        out
    }

    /// Representative cochain of the i-th invariant-factor generator.
    pub fn generator_cochain(&self, i: usize) -> Vec<BigInt> {
        let lam = self.presented.generator_rep(i);
        self.lift_lambda(&lam)
    }

    pub fn exponent(&self) -> BigInt {
        self.invariants.exponent()
    }
}

/// Column echelon basis of the image of `a` (no row transforms), keeping the
/// matrix tall-and-thin throughout. Returns (echelon, pivot_rows).
fn column_echelon(a: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let n = a.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..a.cols()).map(|c| a.column(c)).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut done: Vec<Vec<BigInt>> = Vec::new();
    let mut row = 0;
    while row < n && !cols.is_empty() {
        // Reduce the current row across remaining columns to a single nonzero.
        loop {
            let mut piv: Option<usize> = None;
            for (j, col) in cols.iter().enumerate() {
                if col[row].is_zero() {
                    continue;
                }
                match piv {
                    None => piv = Some(j),
                    Some(p) => {
                        if col[row].magnitude() < cols[p][row].magnitude() {
                            piv = Some(j);
                        }
                    }
                }
            }
            let Some(p) = piv else { break };
            let mut others = false;
            for j in 0..cols.len() {
                if j == p || cols[j][row].is_zero() {
                    continue;
                }
                others = true;
                let q = crate::matrix::div_round_pub(&cols[j][row], &cols[p][row]);
                if !q.is_zero() {
                    let (cp, cj) = split_two(&mut cols, p, j);
                    for i in row..n {
                        if !cp[i].is_zero() {
                            cj[i] = &cj[i] - &q * &cp[i];
                        }
                    }
                }
            }
            if !others {
                // p is the pivot column for this row.
                let col = cols.remove(p);
                pivots.push(row);
                done.push(col);
                break;
            }
        }
        row += 1;
    }
    (IntMatrix::from_columns(n, &done), pivots)
}

fn split_two<T>(v: &mut [T], i: usize, j: usize) -> (&T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&b[0], &mut a[j])
    }
}

/// Torsion part of Z^N / im(d), pivot-compressed, as a CohomologyGroup.
///
/// Lambda = { z in Z^ra : the rational image vector with pivot coordinates z
/// is integral } and H = Lambda / im(pivot rows of the echelon basis).
fn torsion_of_coker(d: &IntMatrix, degree: u8, tate: bool) -> CohomologyGroup {
    use crate::rational::{Rat, RatMatrix};
    let n = d.rows();
    let (echelon, pivot_rows) = column_echelon(d);
    let ra = pivot_rows.len();
    if ra == 0 {
        let presented = PresentedGroup::new(0, IntMatrix::zeros(0, 0));
        return CohomologyGroup {
            degree,
            tate,
            invariants: AbelianGroupInvariants::trivial(),
            cochain_dim: n,
            pivot_rows,
            echelon,
            lambda: IntMatrix::zeros(0, 0),
            presented,
        };
    }
    // E_p^{-1} as rational, then integrality constraints from non-pivot rows.
    let ep = RatMatrix::from_fn(ra, ra, |i, j| {
        Rat::from_integer(echelon.at(pivot_rows[i], j).clone())
    });
    let ep_inv = ep.inverse().expect("pivot block invertible");
    // Lambda: refine Z^ra by each constraint row (non-pivot row of E * E_p^{-1}).
    let mut lambda_cols: Vec<Vec<BigInt>> = (0..ra)
        .map(|i| {
            let mut v = vec![BigInt::zero(); ra];
            v[i] = BigInt::one();
            v
        })
        .collect();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_rows.iter().copied().collect();
    for row in 0..n {
        if pivot_set.contains(&row) {
            continue;
        }
        // v = E[row,:] * E_p^{-1}
        let mut v: Vec<Rat> = vec![Rat::zero(); ra];
        for j in 0..ra {
            if echelon.at(row, j).is_zero() {
                continue;
            }
            let coeff = Rat::from_integer(echelon.at(row, j).clone());
            for k in 0..ra {
                if !ep_inv.at(j, k).is_zero() {
                    v[k] += &coeff * ep_inv.at(j, k);
                }
            }
        }
        // modulus = lcm of denominators
        let mut modulus = BigInt::one();
        for x in &v {
            modulus = modulus.lcm(x.denom());
        }
        if modulus.is_one() {
            continue;
        }
        let u: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(modulus.clone())).to_integer()).collect();
        // Refine: { y in current Lambda : u . y = 0 mod modulus }.
        // Work with t_j = u . col_j plus a virtual column carrying modulus.
        let k = lambda_cols.len();
        let mut t: Vec<BigInt> = lambda_cols
            .iter()
            .map(|col| {
                let mut s = BigInt::zero();
                for i in 0..ra {
                    if !u[i].is_zero() && !col[i].is_zero() {
                        s += &u[i] * &col[i];
                    }
                }
                s
            })
            .collect();
        t.push(modulus.clone());
        lambda_cols.push(vec![BigInt::zero(); ra]);
        // Gcd-eliminate to a single nonzero t, then drop that column.
        loop {
            let mut piv = usize::MAX;
            for (j, x) in t.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if piv == usize::MAX || x.magnitude() < t[piv].magnitude() {
                    piv = j;
                }
            }
            if piv == usize::MAX {
                // all zero: constraint vacuous on this lattice
                lambda_cols.pop();
                break;
            }
            let mut others = false;
            for j in 0..t.len() {
                if j == piv || t[j].is_zero() {
                    continue;
                }
                others = true;
                let q = crate::matrix::div_round_pub(&t[j], &t[piv]);
                if !q.is_zero() {
                    t[j] = &t[j] - &q * &t[piv];
                    let (cp, cj) = split_two(&mut lambda_cols, piv, j);
                    for i in 0..ra {
                        if !cp[i].is_zero() {
                            cj[i] = &cj[i] - &q * &cp[i];
                        }
                    }
                }
            }
            if !others {
                t.remove(piv);
                lambda_cols.remove(piv);
                break;
            }
        }
        debug_assert_eq!(lambda_cols.len(), k);
    }
    let lambda = IntMatrix::from_columns(ra, &lambda_cols);
    // Relations: pivot rows of the echelon columns, in Lambda coordinates.
    let ep_int = IntMatrix::from_fn(ra, ra, |i, j| echelon.at(pivot_rows[i], j).clone());
    let rel = solve_exact(&lambda, &ep_int).expect("image lies in Lambda");
    let presented = PresentedGroup::new(ra, rel);
    CohomologyGroup {
        degree,
        tate,
        invariants: presented.invariants.clone(),
        cochain_dim: n,
        pivot_rows,
        echelon,
        lambda,
        presented,
    }
}

/// H^0: the invariants of the fixed sublattice (free of its rank).
pub fn h0(m: &GLattice) -> AbelianGroupInvariants {
    AbelianGroupInvariants::free(m.fixed_sublattice_whole().cols())
}

/// Tate H^0 = M^G / N M with a presentation over the fixed basis.
pub struct TateH0 {
    pub invariants: AbelianGroupInvariants,
    /// Fixed-sublattice basis (rank x f).
    pub fixed_basis: IntMatrix,
    pub presented: PresentedGroup,
}

pub fn tate_h0(m: &GLattice) -> TateH0 {
    let fixed = m.fixed_sublattice_whole();
    let norm = m.norm_operator();
    // Norm image lies in the fixed sublattice.
    let rel = solve_exact(&fixed, &norm).expect("norm image is fixed");
    let presented = PresentedGroup::new(fixed.cols(), rel);
    TateH0 {
        invariants: presented.invariants.clone(),
        fixed_basis: fixed,
        presented,
    }
}

/// H^1(G, M) = torsion of C^1 / im(d^0).
pub fn h1(m: &GLattice) -> CohomologyGroup {
    let bar = BarComplex::new(m);
    let d0 = bar.d0_matrix();
    torsion_of_coker(&d0, 1, false)
}

/// H^2(G, M) = torsion of C^2 / im(d^1), guarded by the options.
pub fn h2(m: &GLattice, opts: &CohomologyOptions) -> Result<CohomologyGroup, Error> {
    let bar = BarComplex::new(m);
    let order = m.group.order() as u128;
    let needed = order * order * order * (m.rank as u128);
    if needed > opts.c3_entries {
        return Err(Error::MemoryGuard {
            needed,
            guard: opts.c3_entries,
        });
    }
    let c1 = bar.c1_dim() as u128;
    let c2 = bar.c2_dim() as u128;
    let work = c1 * c1 * c2;
    if work > opts.work {
        return Err(Error::MemoryGuard {
            needed: work,
            guard: opts.work,
        });
    }
    let d1 = bar.d1_matrix();
    let h = torsion_of_coker(&d1, 2, false);
    // Every reported generator really is a cocycle: d^2 kills its lift.
    for i in 0..h.presented.coordinate_orders().len() {
        let rep = h.generator_cochain(i);
        let dd = bar.apply_d2(&rep);
        debug_assert!(dd.iter().all(|x| x.is_zero()), "torsion class is not a cocycle");
        let _ = dd;
    }
    Ok(h)
}

/// Definitional H^1 = ker d^1 / im d^0, for cross-checks.
pub fn h1_by_definition(m: &GLattice) -> AbelianGroupInvariants {
    let bar = BarComplex::new(m);
    let d1 = bar.d1_matrix();
    let z = kernel_basis(&d1);
    let d0 = bar.d0_matrix();
    let rel = solve_exact(&z, &d0).expect("coboundaries are cocycles");
    PresentedGroup::new(z.cols(), rel).invariants
}

/// Definitional H^2 = ker d^2 / im d^1, for cross-checks on small instances.
pub fn h2_by_definition(m: &GLattice) -> AbelianGroupInvariants {
    let bar = BarComplex::new(m);
    let r = m.rank;
    let mlen = bar.nt.len();
    let c2 = bar.c2_dim();
    // Stream the rows of d^2 in blocks by (i, j, k).
    let blocks = (0..mlen * mlen * mlen).map(move |t| {
        let i = t / (mlen * mlen);
        let j = (t / mlen) % mlen;
        let k = t % mlen;
        let g = bar.nt[i];
        let h = bar.nt[j];
        let kk = bar.nt[k];
        let ag = m.action_of(g);
        let mut block = IntMatrix::zeros(r, c2);
        let pair = |a: usize, b: usize| (a * mlen + b) * r;
        for x in 0..r {
            for y in 0..r {
                if !ag.at(x, y).is_zero() {
                    let v = block.at(x, pair(j, k) + y) + ag.at(x, y);
                    block.set(x, pair(j, k) + y, v);
                }
            }
            let v = block.at(x, pair(i, j) + x) - BigInt::one();
            block.set(x, pair(i, j) + x, v);
        }
        let gh = m.group.product_index(g, h);
        if gh != m.group.identity_index() {
            let s = bar.nt.iter().position(|&e| e == gh).unwrap();
            for x in 0..r {
                let v = block.at(x, pair(s, k) + x) - BigInt::one();
                block.set(x, pair(s, k) + x, v);
            }
        }
        let hk = m.group.product_index(h, kk);
        if hk != m.group.identity_index() {
            let s = bar.nt.iter().position(|&e| e == hk).unwrap();
            for x in 0..r {
                let v = block.at(x, pair(i, s) + x) + BigInt::one();
                block.set(x, pair(i, s) + x, v);
            }
        }
        block
    });
    let z = crate::matrix::kernel_of_row_blocks(c2, blocks);
    let bar2 = BarComplex::new(m);
    let d1 = bar2.d1_matrix();
    let rel = solve_exact(&z, &d1).expect("coboundaries are cocycles");
    PresentedGroup::new(z.cols(), rel).invariants
}

// Norm of the cyclic subgroup generated by a group element: the sum of the
// action over the element's order in the group (not the order of its action
// matrix, which can be smaller when the action is unfaithful).
fn cyclic_norm(m: &GLattice, generator: usize) -> IntMatrix {
    let group = &m.group;
    let mut n = IntMatrix::identity(m.rank);
    let mut p = m.action_of(generator).clone();
    let mut e = generator;
    while e != group.identity_index() {
        n = n.add(&p);
        p = p.mul(m.action_of(generator));
        e = group.product_index(e, generator);
    }
    n
}

/// Closed-form H^1 invariants for a cyclic group: ker N / im(g - 1).
pub fn h1_cyclic_invariants(m: &GLattice, generator: usize) -> AbelianGroupInvariants {
    let r = m.rank;
    let id = IntMatrix::identity(r);
    let g = m.action_of(generator);
    let n = cyclic_norm(m, generator);
    let ker = kernel_basis(&n);
    let gm1 = g.sub(&id);
    let rel = solve_exact(&ker, &gm1).expect("im(g-1) lies in ker N");
    PresentedGroup::new(ker.cols(), rel).invariants
}

/// Closed-form Tate H^0 invariants for a cyclic group: M^C / N M.
pub fn tate_h0_cyclic_invariants(m: &GLattice, generator: usize) -> AbelianGroupInvariants {
    let r = m.rank;
    let g = m.action_of(generator);
    let fixed = crate::matrix::kernel_of_row_blocks(
        r,
        std::iter::once(g.sub(&IntMatrix::identity(r))),
    );
    let n = cyclic_norm(m, generator);
    let rel = solve_exact(&fixed, &n).expect("norm image fixed");
    PresentedGroup::new(fixed.cols(), rel).invariants
}

/// A map of cohomology groups on presented generators, with the spaces it
/// connects.
pub struct CohomologyMap {
    pub matrix: IntMatrix,
    pub source_invariants: AbelianGroupInvariants,
    pub target_invariants: AbelianGroupInvariants,
}

/// Slots (cochain coordinate indices) of the restriction of a degree-d
/// cochain on `m` to the subgroup with the given nontrivial elements of the
/// restricted lattice's group.
fn restriction_coordinate_map(
    bar: &BarComplex<'_>,
    restricted: &GLattice,
    degree: u8,
) -> Vec<usize> {
    // For each cochain coordinate of the restricted complex, the coordinate
    // index in the big complex.
    let r = bar.rank();
    let sub_bar = BarComplex::new(restricted);
    let pos_in_big: Vec<usize> = sub_bar
        .nt
        .iter()
        .map(|&e| {
            let mat = restricted.group.matrix(e);
            let big = bar.m.group.index_of(mat).expect("subgroup element in parent");
            bar.slot_of(big).expect("nontrivial stays nontrivial")
        })
        .collect();
    let msub = sub_bar.nt.len();
    let mbig = bar.nt.len();
    let mut map = Vec::new();
    match degree {
        1 => {
            for i in 0..msub {
                for x in 0..r {
                    map.push(pos_in_big[i] * r + x);
                }
            }
        }
        2 => {
            for i in 0..msub {
                for j in 0..msub {
                    for x in 0..r {
                        map.push((pos_in_big[i] * mbig + pos_in_big[j]) * r + x);
                    }
                }
            }
        }
        _ => panic!("restriction defined for degrees 1 and 2"),
    }
    map
}

/// Restriction map H^d(G, M) -> H^d(H, M|_H) by literal cochain restriction,
/// returned on presented generators together with both presentations.
pub fn restriction(
    m: &GLattice,
    sub: &Subgroup,
    degree: u8,
    opts: &CohomologyOptions,
) -> Result<(CohomologyGroup, CohomologyGroup, CohomologyMap), Error> {
    let source = match degree {
        1 => h1(m),
        2 => h2(m, opts)?,
        _ => return Err(Error::Unsupported("restriction degree must be 1 or 2".into())),
    };
    let restricted = m.restrict(sub)?;
    let target = match degree {
        1 => h1(&restricted),
        2 => h2(&restricted, opts)?,
        _ => unreachable!(),
    };
    let map = restriction_on_presented(m, &source, &restricted, &target, degree)?;
    Ok((source, target, map))
}

fn restriction_on_presented(
    m: &GLattice,
    source: &CohomologyGroup,
    restricted: &GLattice,
    target: &CohomologyGroup,
    degree: u8,
) -> Result<CohomologyMap, Error> {
    let bar = BarComplex::new(m);
    let coords = restriction_coordinate_map(&bar, restricted, degree);
    let g = source.presented.gens();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(g);
    for i in 0..g {
        // Lift the i-th Lambda basis vector, restrict, express in the target.
        let mut lam = vec![BigInt::zero(); g];
        lam[i] = BigInt::one();
        let cochain = source.lift_lambda(&lam);
        let sub_cochain: Vec<BigInt> = coords.iter().map(|&c| cochain[c].clone()).collect();
        let tc = target.lambda_coords_of(&sub_cochain)?;
        cols.push(tc);
    }
    let matrix = IntMatrix::from_columns(target.presented.gens(), &cols);
    // Well-definedness: source relations land in target relations.
    let img = matrix.mul(&source.presented.relations);
    for c in 0..img.cols() {
        let col = IntMatrix::from_columns(img.rows(), &[img.column(c)]);
        if target.presented.gens() > 0
            && solve_exact(&target.presented.relations, &col).is_none()
            && !col.is_zero()
        {
            return Err(Error::Membership("restriction not well-defined".into()));
        }
    }
    Ok(CohomologyMap {
        matrix,
        source_invariants: source.invariants.clone(),
        target_invariants: target.invariants.clone(),
    })
}

/// Result of a Sha computation: the kernel invariants plus a witness cochain
/// for the largest invariant factor (when nonzero).
pub struct ShaResult {
    pub degree: u8,
    pub invariants: AbelianGroupInvariants,
    /// A cochain representative of a generator of the last invariant factor
    /// together with its order, when the group is nonzero.
    pub witness: Option<(Vec<BigInt>, BigInt)>,
}

/// Sha^d_omega(G, M): kernel of the product of restriction maps to all
/// cyclic subgroups (deduplicated; the trivial subgroup contributes nothing).
pub fn sha_omega(m: &GLattice, degree: u8, opts: &CohomologyOptions) -> Result<ShaResult, Error> {
    let source = match degree {
        1 => h1(m),
        2 => h2(m, opts)?,
        _ => return Err(Error::Unsupported("sha_omega degree must be 1 or 2".into())),
    };
    if source.invariants.is_trivial() {
        return Ok(ShaResult {
            degree,
            invariants: AbelianGroupInvariants::trivial(),
            witness: None,
        });
    }
    let cyclics = m.group.cyclic_subgroups();
    let mut targets: Vec<(IntMatrix, PresentedGroup)> = Vec::new();
    for c in &cyclics {
        if c.order() == 1 {
            continue;
        }
        let restricted = m.restrict(c)?;
        let target = match degree {
            1 => h1(&restricted),
            2 => h2(&restricted, opts)?,
            _ => unreachable!(),
        };
        if target.invariants.is_trivial() {
            continue;
        }
        let map = restriction_on_presented(m, &source, &restricted, &target, degree)?;
        targets.push((map.matrix, target.presented));
    }
    let map_refs: Vec<(IntMatrix, &PresentedGroup)> = targets
        .iter()
        .map(|(f, p)| (f.clone(), p))
        .collect();
    let ker = kernel_of_presented_maps(&source.presented, &map_refs);
    let witness = ker
        .witnesses
        .last()
        .map(|(lam, ord)| (source.lift_lambda(lam), ord.clone()));
    Ok(ShaResult {
        degree,
        invariants: ker.invariants,
        witness,
    })
}

/// Kernel of the Tate-H^0 restriction product over cyclic subgroups:
/// Ker[ M^G/N_G M -> prod_C M^C/N_C M ], the degree-0 avatar used to
/// cross-check Sha^1 of augmentation ideals.
pub fn tate_h0_restriction_kernel(m: &GLattice) -> Result<AbelianGroupInvariants, Error> {
    let source = tate_h0(m);
    let cyclics = m.group.cyclic_subgroups();
    let mut targets: Vec<(IntMatrix, PresentedGroup)> = Vec::new();
    for c in &cyclics {
        if c.order() == 1 {
            continue;
        }
        let restricted = m.restrict(c)?;
        let t = tate_h0(&restricted);
        if t.invariants.is_trivial() {
            continue;
        }
        // Map induced by the inclusion of fixed sublattices.
        let src_in_target = solve_exact(&t.fixed_basis, &source.fixed_basis)
            .expect("G-fixed vectors are C-fixed");
        targets.push((src_in_target, t.presented));
    }
    let map_refs: Vec<(IntMatrix, &PresentedGroup)> = targets
        .iter()
        .map(|(f, p)| (f.clone(), p))
        .collect();
    let ker = kernel_of_presented_maps(&source.presented, &map_refs);
    Ok(ker.invariants)
}
