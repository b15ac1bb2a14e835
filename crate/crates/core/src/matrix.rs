//! Dense matrices of arbitrary-precision integers and the normal-form
//! machinery built on them: Smith normal form, integer kernels, cokernel
//! invariants and quotient presentations.
//!
//! Everything here is exact. There is no floating point anywhere in the
//! crate and no modular shortcuts: entries are `BigInt` and all
//! transformations are unimodular.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        for col in cols {
            assert_eq!(col.len(), dim, "column length mismatch");
        }
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.at(r, c).is_one()
                    } else {
                        self.at(r, c).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() && !v[k].is_zero() {
                        s += self.at(i, k) * &v[k];
                    }
                }
                s
            })
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.at(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Canonical byte encoding of dimensions plus entries. Two matrices get
    /// equal keys exactly when they are equal.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.data.len() * 2);
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for x in &self.data {
            let (sign, bytes) = x.to_bytes_le();
            out.push(match sign {
                num_bigint::Sign::Minus => 0,
                num_bigint::Sign::NoSign => 1,
                num_bigint::Sign::Plus => 2,
            });
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
        out
    }

    /// `|det|` computed from the Smith normal form.
    pub fn abs_det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "abs_det of non-square matrix");
        let snf = smith_normal_form(self);
        let mut d = BigInt::one();
        for i in 0..self.rows {
            d *= snf.d.at(i, i);
        }
        d
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.abs_det().is_one()
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> IntMatrix {
        let snf = smith_normal_form(self);
        assert!(
            snf.d.is_identity(),
            "inverse_unimodular on a non-unimodular matrix"
        );
        // U*A*V = I  =>  A^{-1} = V*U
        snf.v.mul(&snf.u)
    }
}

/// Smith decomposition `U * A * V = D` with `U`, `V` unimodular and `D`
/// diagonal with the divisibility chain d1 | d2 | ... The inverses of the
/// transforms are tracked alongside, so `A = u_inv * D * v_inv`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

struct SnfWork {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    // row_i -> row_i + q*row_j on A and U; inverse op on u_inv columns.
    fn row_add(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.a.cols() {
            if self.a.at(j, c).is_zero() {
                continue;
            }
            let v = self.a.at(i, c) + q * self.a.at(j, c);
            self.a.set(i, c, v);
        }
        for c in 0..self.u.cols() {
            if self.u.at(j, c).is_zero() {
                continue;
            }
            let v = self.u.at(i, c) + q * self.u.at(j, c);
            self.u.set(i, c, v);
        }
        for r in 0..self.u_inv.rows() {
            if self.u_inv.at(r, i).is_zero() {
                continue;
            }
            let v = self.u_inv.at(r, j) - q * self.u_inv.at(r, i);
            self.u_inv.set(r, j, v);
        }
    }

    fn col_add(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.a.rows() {
            if self.a.at(r, j).is_zero() {
                continue;
            }
            let v = self.a.at(r, i) + q * self.a.at(r, j);
            self.a.set(r, i, v);
        }
        for r in 0..self.v.rows() {
            if self.v.at(r, j).is_zero() {
                continue;
            }
            let v = self.v.at(r, i) + q * self.v.at(r, j);
            self.v.set(r, i, v);
        }
        for c in 0..self.v_inv.cols() {
            if self.v_inv.at(i, c).is_zero() {
                continue;
            }
            let v = self.v_inv.at(j, c) - q * self.v_inv.at(i, c);
            self.v_inv.set(j, c, v);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let (x, y) = (self.a.at(i, c).clone(), self.a.at(j, c).clone());
            self.a.set(i, c, y);
            self.a.set(j, c, x);
        }
        for c in 0..self.u.cols() {
            let (x, y) = (self.u.at(i, c).clone(), self.u.at(j, c).clone());
            self.u.set(i, c, y);
            self.u.set(j, c, x);
        }
        for r in 0..self.u_inv.rows() {
            let (x, y) = (self.u_inv.at(r, i).clone(), self.u_inv.at(r, j).clone());
            self.u_inv.set(r, i, y);
            self.u_inv.set(r, j, x);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let (x, y) = (self.a.at(r, i).clone(), self.a.at(r, j).clone());
            self.a.set(r, i, y);
            self.a.set(r, j, x);
        }
        for r in 0..self.v.rows() {
            let (x, y) = (self.v.at(r, i).clone(), self.v.at(r, j).clone());
            self.v.set(r, i, y);
            self.v.set(r, j, x);
        }
        for c in 0..self.v_inv.cols() {
            let (x, y) = (self.v_inv.at(i, c).clone(), self.v_inv.at(j, c).clone());
            self.v_inv.set(i, c, y);
            self.v_inv.set(j, c, x);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            let v = -self.a.at(i, c);
            self.a.set(i, c, v);
        }
        for c in 0..self.u.cols() {
            let v = -self.u.at(i, c);
            self.u.set(i, c, v);
        }
        for r in 0..self.u_inv.rows() {
            let v = -self.u_inv.at(r, i);
            self.u_inv.set(r, i, v);
        }
    }
}

/// Smith normal form with full transform data.
///
/// Pivot rule: smallest nonzero absolute value in the working submatrix,
/// ties broken by lowest (row, col), so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = SnfWork {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };

    let mut k = 0;
    'outer: while k < m.min(n) {
        loop {
            // Pivot: minimal |entry| over the submatrix, lowest (row, col)
            // on ties. Re-picked after every pass to keep quotients small.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    if w.a.at(i, j).is_zero() {
                        continue;
                    }
                    match &pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if w.a.at(i, j).magnitude() < w.a.at(*pi, *pj).magnitude() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'outer };
            w.row_swap(k, pi);
            w.col_swap(k, pj);

            // Clear column k with nearest-quotient reductions; restart with
            // a fresh pivot as soon as a remainder survives.
            let mut dirty = false;
            for i in (k + 1)..m {
                if w.a.at(i, k).is_zero() {
                    continue;
                }
                let q = -div_round(w.a.at(i, k), w.a.at(k, k));
                w.row_add(i, k, &q);
                if !w.a.at(i, k).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in (k + 1)..n {
                if w.a.at(k, j).is_zero() {
                    continue;
                }
                let q = -div_round(w.a.at(k, j), w.a.at(k, k));
                w.col_add(j, k, &q);
                if !w.a.at(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear. Refine the pivot until it divides
            // the whole remaining submatrix; this yields the divisibility
            // chain directly and keeps later quotients small.
            let mut refine: Option<usize> = None;
            'scan: for i in (k + 1)..m {
                for j in (k + 1)..n {
                    if !(w.a.at(i, j) % w.a.at(k, k)).is_zero() {
                        refine = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = refine {
                // Fold row i into the pivot row and keep reducing.
                w.row_add(k, i, &BigInt::one());
                continue;
            }
            break;
        }
        if w.a.at(k, k).is_negative() {
            w.row_negate(k);
        }
        k += 1;
    }
    let rank = k;

    // Enforce the divisibility chain d_i | d_{i+1}.
    loop {
        let mut fixed = true;
        for i in 0..rank.saturating_sub(1) {
            let di = w.a.at(i, i).clone();
            let dj = w.a.at(i + 1, i + 1).clone();
            if (&dj % &di).is_zero() {
                continue;
            }
            fixed = false;
            // Put d_{i+1} into column i, then re-clear the 2x2 block.
            w.col_add(i, i + 1, &BigInt::one());
            loop {
                let a_ii = w.a.at(i, i).clone();
                let a_ji = w.a.at(i + 1, i).clone();
                if a_ji.is_zero() {
                    break;
                }
                if a_ii.is_zero() || (!a_ji.is_zero() && a_ji.abs() < a_ii.abs()) {
                    w.row_swap(i, i + 1);
                    continue;
                }
                let q = -div_round(&a_ji, &a_ii);
                w.row_add(i + 1, i, &q);
            }
            let q = -(w.a.at(i, i + 1) / w.a.at(i, i));
            w.col_add(i + 1, i, &q);
            // The division is exact here, so the block is diagonal again.
            debug_assert!(w.a.at(i, i + 1).is_zero());
            if w.a.at(i, i).is_negative() {
                w.row_negate(i);
            }
            if w.a.at(i + 1, i + 1).is_negative() {
                w.row_negate(i + 1);
            }
        }
        if fixed {
            break;
        }
    }

    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        d: w.a,
        rank,
    }
}

/// Basis of the integer kernel `{x : A x = 0}`, as matrix columns.
///
/// Computed by streaming the rows of `A` through a gcd-elimination pass;
/// the result is a genuine lattice basis (the kernel of a map to a free
/// module is saturated).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel_of_row_blocks(a.cols(), std::iter::once(a.clone()))
}

/// Kernel of a tall matrix presented as a stream of row blocks, so the full
/// matrix never has to be materialized. All blocks must have `cols` columns.
pub fn kernel_of_row_blocks(cols: usize, blocks: impl Iterator<Item = IntMatrix>) -> IntMatrix {
    // Columns of `k` span the kernel of the rows seen so far.
    let mut k: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            let mut v = vec![BigInt::zero(); cols];
            v[i] = BigInt::one();
            v
        })
        .collect();

    for block in blocks {
        assert_eq!(block.cols(), cols);
        for r in 0..block.rows() {
            if k.is_empty() {
                return IntMatrix::zeros(cols, 0);
            }
            // t_j = row . k_j
            let mut t: Vec<BigInt> = k
                .iter()
                .map(|col| {
                    let mut s = BigInt::zero();
                    for c in 0..cols {
                        let a = block.at(r, c);
                        if !a.is_zero() && !col[c].is_zero() {
                            s += a * &col[c];
                        }
                    }
                    s
                })
                .collect();
            if t.iter().all(|x| x.is_zero()) {
                continue;
            }
            // Reduce until a single nonzero remains, then drop that column.
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
                let mut others = false;
                for j in 0..t.len() {
                    if j == piv || t[j].is_zero() {
                        continue;
                    }
                    others = true;
                    let q = div_round(&t[j], &t[piv]);
                    if !q.is_zero() {
                        t[j] = &t[j] - &q * &t[piv];
                        let (kp, kj) = borrow_two(&mut k, piv, j);
                        for c in 0..cols {
                            if !kp[c].is_zero() {
                                kj[c] = &kj[c] - &q * &kp[c];
                            }
                        }
                    }
                    if t[j].is_zero() {
                        continue;
                    }
                }
                if !others {
                    k.remove(piv);
                    break;
                }
            }
        }
    }
    IntMatrix::from_columns(cols, &k)
}

/// Rounded division (nearest quotient) for gcd-style eliminations.
pub fn div_round_pub(a: &BigInt, b: &BigInt) -> BigInt {
    div_round(a, b)
}

// Rounded division used by the gcd elimination; keeps remainders at most
// half the pivot so the loop terminates quickly.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.sign() == b.sign()) || a.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn borrow_two<T>(v: &mut [T], i: usize, j: usize) -> (&T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&b[0], &mut a[j])
    }
}

/// Invariant factors of a finitely generated abelian group: a free rank and
/// a divisibility chain of torsion factors, each > 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        AbelianGroupInvariants {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants {
            free_rank: rank,
            torsion: vec![],
        }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroupInvariants {
                free_rank: 0,
                torsion: vec![BigInt::from(n)],
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Exponent of the group: 0 when infinite, 1 when trivial, otherwise the
    /// largest invariant factor.
    pub fn exponent(&self) -> BigInt {
        if self.free_rank > 0 {
            BigInt::zero()
        } else {
            self.torsion.last().cloned().unwrap_or_else(BigInt::one)
        }
    }

    /// Order of the group; None when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{}", t)).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of `Z^rows / colspan(A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianGroupInvariants {
    let snf = smith_normal_form(a);
    let mut torsion = Vec::new();
    for i in 0..snf.rank {
        let d = snf.d.at(i, i);
        if !d.is_one() {
            torsion.push(d.clone());
        }
    }
    AbelianGroupInvariants {
        free_rank: a.rows() - snf.rank,
        torsion,
    }
}

/// Solve `A X = B` exactly over the integers. Returns None when no integral
/// solution exists.
pub fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul(b);
    let mut y = IntMatrix::zeros(a.cols(), b.cols());
    for c in 0..b.cols() {
        for i in 0..a.rows() {
            if i < snf.rank {
                let d = snf.d.at(i, i);
                let (q, r) = ub.at(i, c).div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y.set(i, c, q);
            } else if !ub.at(i, c).is_zero() {
                return None;
            }
        }
    }
    Some(snf.v.mul(&y))
}

/// Basis (as columns) of the column span of `A`, i.e. of the image lattice.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let cols: Vec<Vec<BigInt>> = (0..snf.rank)
        .map(|i| {
            let mut col = snf.u_inv.column(i);
            for x in col.iter_mut() {
                *x *= snf.d.at(i, i);
            }
            col
        })
        .collect();
    IntMatrix::from_columns(a.rows(), &cols)
}

/// Basis of the saturation of the column span of `A`: the smallest
/// direct-summand sublattice containing it.
pub fn saturation_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let cols: Vec<Vec<BigInt>> = (0..snf.rank).map(|i| snf.u_inv.column(i)).collect();
    IntMatrix::from_columns(a.rows(), &cols)
}

/// Do the two column spans define the same sublattice?
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    solve_exact(a, b).is_some() && solve_exact(b, a).is_some()
}

/// A finitely generated abelian group presented as ambient lattice modulo a
/// sublattice, with projection data onto canonical cyclic/free coordinates.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub invariants: AbelianGroupInvariants,
    ambient: IntMatrix,
    /// Transform from ambient coordinates to diagonalized relation coordinates.
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Diagonal of the relation SNF, padded with zeros up to ambient rank.
    diag: Vec<BigInt>,
}

impl QuotientGroup {
    /// Coordinates of the class of `v` (an ambient-space vector): one entry
    /// per nontrivial invariant, torsion entries reduced to `[0, d)`.
    /// Errors when `v` is not in the span of the ambient basis.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        let vm = IntMatrix::from_columns(v.len(), &[v.to_vec()]);
        let w = solve_exact(&self.ambient, &vm)
            .ok_or_else(|| Error::Membership("vector not in ambient lattice".into()))?;
        let y = self.u.mul(&w);
        let mut out = Vec::new();
        for (i, d) in self.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let c = y.at(i, 0);
            if d.is_zero() {
                out.push(c.clone());
            } else {
                out.push(c.mod_floor(d));
            }
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> Result<bool, Error> {
        Ok(self.class_of(v)?.iter().all(|x| x.is_zero()))
    }

    /// An ambient-space representative of the generator of the i-th
    /// nontrivial invariant (in the order reported by `class_of`).
    pub fn generator_rep(&self, i: usize) -> Vec<BigInt> {
        let mut seen = 0;
        for (j, d) in self.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            if seen == i {
                let e = self.u_inv.column(j);
                let em = IntMatrix::from_columns(e.len(), &[e]);
                return self.ambient.mul(&em).column(0);
            }
            seen += 1;
        }
        panic!("generator index out of range");
    }

    /// Order of each reported coordinate (0 for the free ones).
    pub fn coordinate_orders(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Quotient of the lattice spanned by `ambient_basis` columns by the lattice
/// spanned by `sub_basis` columns.
pub fn quotient_group(ambient_basis: &IntMatrix, sub_basis: &IntMatrix) -> Result<QuotientGroup, Error> {
    assert_eq!(ambient_basis.rows(), sub_basis.rows());
    let x = solve_exact(ambient_basis, sub_basis)
        .ok_or_else(|| Error::Membership("sub not contained in ambient".into()))?;
    let snf = smith_normal_form(&x);
    let n = ambient_basis.cols();
    let mut diag = vec![BigInt::zero(); n];
    for i in 0..snf.rank {
        diag[i] = snf.d.at(i, i).clone();
    }
    let mut torsion = Vec::new();
    let mut free_rank = 0;
    for d in &diag {
        if d.is_zero() {
            free_rank += 1;
        } else if !d.is_one() {
            torsion.push(d.clone());
        }
    }
    Ok(QuotientGroup {
        invariants: AbelianGroupInvariants { free_rank, torsion },
        ambient: ambient_basis.clone(),
        u: snf.u,
        u_inv: snf.u_inv,
        diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows)
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        // U*A*V = D
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        // inverses really are inverses
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        // reconstruct A = U^{-1} D V^{-1}
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), *a);
        // unimodularity
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        // diagonal, nonnegative, divisibility chain
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.at(i, j).is_zero());
                }
            }
        }
        for i in 0..s.rank.saturating_sub(1) {
            let di = s.d.at(i, i);
            let dj = s.d.at(i + 1, i + 1);
            assert!(!di.is_negative() && !dj.is_negative());
            assert!((dj % di).is_zero(), "divisibility broken in {:?}", s.d);
        }
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let s = smith_normal_form(&a);
        assert!(s.d.is_identity());
        check_snf(&a);
    }

    #[test]
    fn snf_2468() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d.at(0, 0), &BigInt::from(2));
        assert_eq!(s.d.at(1, 1), &BigInt::from(4));
        check_snf(&a);
        // |det A| = product of invariant factors
        assert_eq!(a.abs_det(), BigInt::from(8));
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d.at(0, 0), &BigInt::from(1));
        assert_eq!(s.d.at(1, 1), &BigInt::from(6));
        check_snf(&a);
    }

    #[test]
    fn snf_zero_and_empty() {
        check_snf(&IntMatrix::zeros(3, 2));
        check_snf(&IntMatrix::zeros(0, 4));
        check_snf(&IntMatrix::zeros(4, 0));
    }

    #[test]
    fn kernel_identity_empty() {
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_of_ones_row() {
        let a = m(&[vec![1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        assert!(
            (col[0] == BigInt::one() && col[1] == -BigInt::one())
                || (col[0] == -BigInt::one() && col[1] == BigInt::one())
        );
    }

    #[test]
    fn kernel_rank_and_membership() {
        let a = m(&[vec![2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        // Columns independent: kernel of the kernel basis is empty.
        assert_eq!(kernel_basis(&k.transpose()).cols(), 1); // row space has rank 2 in Z^3... sanity
        let s = smith_normal_form(&k);
        assert_eq!(s.rank, 2);
        // Saturated: invariant factors of the basis are 1.
        for i in 0..s.rank {
            assert!(s.d.at(i, i).is_one());
        }
    }

    #[test]
    fn kernel_matches_snf_route() {
        // Cross-check the streaming kernel against the SNF-derived kernel.
        let cases = vec![
            m(&[vec![2, 4, 6], vec![1, 1, 1]]),
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![3, 6, 9, 12], vec![2, 4, 6, 8], vec![1, 0, 1, 0]]),
        ];
        for a in cases {
            let k1 = kernel_basis(&a);
            let s = smith_normal_form(&a);
            let idx: Vec<usize> = (s.rank..a.cols()).collect();
            let k2 = s.v.select_columns(&idx);
            assert!(a.mul(&k1).is_zero());
            assert!(a.mul(&k2).is_zero());
            assert!(same_lattice(&k1, &k2));
        }
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel_invariants(&IntMatrix::identity(4)).is_trivial());
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(cokernel_invariants(&z), AbelianGroupInvariants::free(1));
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let inv = cokernel_invariants(&a);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn cokernel_invariant_under_permutation() {
        let a = m(&[vec![4, 1, 0], vec![2, 0, 6], vec![0, 3, 2]]);
        let base = cokernel_invariants(&a);
        // swap rows 0,2 and cols 1,2
        let b = m(&[vec![0, 2, 3], vec![2, 6, 0], vec![4, 0, 1]]);
        assert_eq!(base, cokernel_invariants(&b));
    }

    #[test]
    fn quotient_examples() {
        let ambient = IntMatrix::identity(2);
        let q = quotient_group(&ambient, &ambient).unwrap();
        assert!(q.invariants.is_trivial());

        let two = m(&[vec![2, 0], vec![0, 2]]);
        let q = quotient_group(&ambient, &two).unwrap();
        assert_eq!(q.invariants.torsion, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(q.invariants.free_rank, 0);

        let z = IntMatrix::identity(1);
        let eight = m(&[vec![8]]);
        let q = quotient_group(&z, &eight).unwrap();
        assert_eq!(q.invariants, AbelianGroupInvariants::cyclic(8));
        // class arithmetic
        let c = q.class_of(&[BigInt::from(3)]).unwrap();
        assert_eq!(c, vec![BigInt::from(3)]);
        assert!(q.is_zero_class(&[BigInt::from(16)]).unwrap());
        let g = q.generator_rep(0);
        assert!(!q.is_zero_class(&g).unwrap());
    }

    #[test]
    fn quotient_membership_error() {
        let ambient = m(&[vec![2, 0], vec![0, 2]]);
        let sub = IntMatrix::identity(2);
        assert!(quotient_group(&ambient, &sub).is_err());
    }

    #[test]
    fn quotient_class_of_sub_columns_zero() {
        let ambient = IntMatrix::identity(3);
        let sub = m(&[vec![2, 1, 0], vec![0, 3, 0], vec![4, 0, 5]]);
        let q = quotient_group(&ambient, &sub).unwrap();
        for c in 0..sub.cols() {
            assert!(q.is_zero_class(&sub.column(c)).unwrap());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[vec![1, 2], vec![3, 5]]); // det = -1
        let inv = a.inverse_unimodular();
        assert!(a.mul(&inv).is_identity());
        let b = m(&[vec![5], vec![12]]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        // no integral solution
        let a2 = m(&[vec![2]]);
        let b2 = m(&[vec![3]]);
        assert!(solve_exact(&a2, &b2).is_none());
    }

    #[test]
    fn saturation() {
        let a = m(&[vec![2], vec![4]]);
        let s = saturation_basis(&a);
        assert_eq!(s.cols(), 1);
        let col = s.column(0);
        assert_eq!(col[0].abs() * BigInt::from(2), col[1].abs() * BigInt::one() * 1);
        // span contains (2,4) with index 2
        let q = quotient_group(&s, &a).unwrap();
        assert_eq!(q.invariants, AbelianGroupInvariants::cyclic(2));
    }

    // Determinantal-divisor oracle: d_1 ... d_k equals the gcd of all k x k
    // minors. Brute-forced for sizes <= 4.
    fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
        fn combis(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combis(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut v = vec![first];
                        v.append(&mut rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        fn det_small(a: &IntMatrix) -> BigInt {
            let n = a.rows();
            if n == 0 {
                return BigInt::one();
            }
            let mut s = BigInt::zero();
            // Laplace along the first row.
            for j in 0..n {
                if a.at(0, j).is_zero() {
                    continue;
                }
                let sub = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                    a.at(r + 1, if c < j { c } else { c + 1 }).clone()
                });
                let term = a.at(0, j) * det_small(&sub);
                if j % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            s
        }
        let mut g = BigInt::zero();
        for rset in combis(a.rows(), k) {
            for cset in combis(a.cols(), k) {
                let sub = IntMatrix::from_fn(k, k, |r, c| a.at(rset[r], cset[c]).clone());
                g = g.gcd(&det_small(&sub));
            }
        }
        g
    }

    #[test]
    fn snf_matches_determinantal_divisors() {
        // Deterministic pseudo-random small matrices.
        let mut seed: u64 = 0x9E3779B97F4A7C15;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _case in 0..50 {
            let rows = 1 + (next() % 4) as usize;
            let cols = 1 + (next() % 4) as usize;
            let entries: Vec<i64> = (0..rows * cols).map(|_| (next() % 21) as i64 - 10).collect();
            let a = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]));
            check_snf(&a);
            let s = smith_normal_form(&a);
            let mut prod = BigInt::one();
            for k in 1..=s.rank {
                prod *= s.d.at(k - 1, k - 1);
                assert_eq!(prod, minor_gcd(&a, k), "k={} a={:?}", k, a);
            }
            if s.rank < rows.min(cols) {
                assert!(minor_gcd(&a, s.rank + 1).is_zero());
            }
        }
    }
}
