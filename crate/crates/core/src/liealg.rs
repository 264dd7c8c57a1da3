//! Exact linear algebra over the rationals for antisymmetric forms:
//! bases of `so(A)`, congruence normalization to the block canonical form,
//! structure constants, and the adjoint-trace formulas feeding the Nakayama
//! computation. Rank and solving use plain Gaussian elimination; with exact
//! arithmetic there are no pivot-magnitude concerns.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::freealg::{format_scalar, parse_scalar, s_int, Scalar};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix has inconsistent row lengths")]
    Ragged,
    #[error("matrix is not invertible")]
    Singular,
    #[error("element outside the span of the basis")]
    NotInSpan,
    #[error("not a subalgebra: commutator escapes the span")]
    NotSubalgebra,
    #[error("bad rational entry: {0}")]
    BadEntry(String),
    #[error("internal solver inconsistency: {0}")]
    Internal(String),
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Elementary matrix unit `e_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        m[(i, j)] = Scalar::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<QMatrix, LieError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LieError::Ragged);
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| s_int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&s_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> QMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self[(i, j)] != -self[(j, i)].clone() {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// Copies the block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> QMatrix {
        let mut out = QMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.cols);
        for i in 0..self.rows {
            red.add_row(self.row(i).to_vec());
        }
        red.rank()
    }

    pub fn inverse(&self) -> Result<QMatrix, LieError> {
        if !self.is_square() {
            return Err(LieError::NotSquare);
        }
        let n = self.rows;
        // eliminate on [self | I]
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        for col in 0..n {
            let pivot = (col..n).find(|&i| !aug[(i, col)].is_zero()).ok_or(LieError::Singular)?;
            if pivot != col {
                for j in 0..2 * n {
                    let tmp = aug[(pivot, j)].clone();
                    aug[(pivot, j)] = aug[(col, j)].clone();
                    aug[(col, j)] = tmp;
                }
            }
            let inv = {
                let p = aug[(col, col)].clone();
                Scalar::one() / p
            };
            for j in 0..2 * n {
                let v = aug[(col, j)].clone() * &inv;
                aug[(col, j)] = v;
            }
            for i in 0..n {
                if i != col && !aug[(i, col)].is_zero() {
                    let factor = aug[(i, col)].clone();
                    for j in 0..2 * n {
                        let sub = aug[(col, j)].clone() * &factor;
                        aug[(i, j)] -= sub;
                    }
                }
            }
        }
        Ok(aug.block(0, n, n, 2 * n))
    }

    /// Row-major flattening, the coordinate convention used by every solver
    /// in this module.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> QMatrix {
        assert_eq!(data.len(), rows * cols);
        QMatrix { rows, cols, data }
    }

    pub fn to_rational_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_scalar).collect())
            .collect()
    }

    pub fn from_rational_strings(rows: &[Vec<String>]) -> Result<QMatrix, LieError> {
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for cell in row {
                r.push(parse_scalar(cell).map_err(|_| LieError::BadEntry(cell.clone()))?);
            }
            out.push(r);
        }
        QMatrix::from_rows(out)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Incremental reduced row echelon form. Rows are inserted one at a time and
/// kept fully reduced against each other, so the nullspace can be read off
/// directly. Deterministic: pivots are leftmost columns, free columns keep
/// their natural order.
pub struct RowReducer {
    ncols: usize,
    /// sorted by pivot column; each row is normalized to 1 at its pivot and
    /// has zeros at every other pivot column
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> RowReducer {
        RowReducer { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the current basis; if a nonzero residual is left
    /// it becomes a new pivot row. Returns true when the row was independent.
    pub fn add_row(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.ncols);
        self.reduce_in_place(&mut row);
        let Some(pivot) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = Scalar::one() / row[pivot].clone();
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        // back-substitute into the existing rows to keep full reduction
        for (_, existing) in self.rows.iter_mut() {
            if !existing[pivot].is_zero() {
                let factor = existing[pivot].clone();
                for (e, n) in existing.iter_mut().zip(row.iter()) {
                    if !n.is_zero() {
                        *e -= factor.clone() * n;
                    }
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        true
    }

    pub fn reduce_in_place(&self, row: &mut [Scalar]) {
        for (pivot, basis_row) in &self.rows {
            if !row[*pivot].is_zero() {
                let factor = row[*pivot].clone();
                for (r, b) in row.iter_mut().zip(basis_row.iter()) {
                    if !b.is_zero() {
                        *r -= factor.clone() * b;
                    }
                }
            }
        }
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        let mut r = row.to_vec();
        self.reduce_in_place(&mut r);
        r.iter().all(|v| v.is_zero())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// The stored reduced rows, sorted by pivot column.
    pub fn rows_iter(&self) -> impl Iterator<Item = (usize, &[Scalar])> {
        self.rows.iter().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Canonical nullspace basis: one vector per free column, entry 1 at the
    /// free column and the pivot entries filled by back-substitution.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let pivot_set: Vec<usize> = self.pivots();
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.binary_search(&free).is_ok() {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (pivot, row) in &self.rows {
                if !row[free].is_zero() {
                    v[*pivot] = -row[free].clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// Equality of row spans, used to compare two subspace computations.
    pub fn same_span(&self, other: &RowReducer) -> bool {
        self.rank() == other.rank()
            && self.rows.iter().all(|(_, r)| other.contains(r))
    }
}

/// Solves membership in the span of a fixed vector list, tracking the
/// combination coefficients.
pub struct SpanSolver {
    dim: usize,
    count: usize,
    /// (pivot, reduced vector, coords in the original list), fully reduced
    rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)>,
}

impl SpanSolver {
    /// `vectors` must be linearly independent.
    pub fn new(vectors: &[Vec<Scalar>]) -> Result<SpanSolver, LieError> {
        let dim = vectors.first().map_or(0, |v| v.len());
        let count = vectors.len();
        let mut solver = SpanSolver { dim, count, rows: Vec::new() };
        for (idx, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(LieError::Ragged);
            }
            let mut coords = vec![Scalar::zero(); count];
            coords[idx] = Scalar::one();
            let mut vec = v.clone();
            solver.reduce_tracking(&mut vec, &mut coords);
            let Some(pivot) = vec.iter().position(|x| !x.is_zero()) else {
                return Err(LieError::Internal("dependent basis vector".into()));
            };
            let inv = Scalar::one() / vec[pivot].clone();
            for x in vec.iter_mut() {
                *x *= &inv;
            }
            for x in coords.iter_mut() {
                *x *= &inv;
            }
            for (_, evec, ecoords) in solver.rows.iter_mut() {
                if !evec[pivot].is_zero() {
                    let f = evec[pivot].clone();
                    for (e, n) in evec.iter_mut().zip(vec.iter()) {
                        if !n.is_zero() {
                            *e -= f.clone() * n;
                        }
                    }
                    for (e, n) in ecoords.iter_mut().zip(coords.iter()) {
                        if !n.is_zero() {
                            *e -= f.clone() * n;
                        }
                    }
                }
            }
            let at = solver.rows.partition_point(|(p, _, _)| *p < pivot);
            solver.rows.insert(at, (pivot, vec, coords));
        }
        Ok(solver)
    }

    fn reduce_tracking(&self, vec: &mut [Scalar], coords: &mut [Scalar]) {
        for (pivot, bvec, bcoords) in &self.rows {
            if !vec[*pivot].is_zero() {
                let f = vec[*pivot].clone();
                for (x, b) in vec.iter_mut().zip(bvec.iter()) {
                    if !b.is_zero() {
                        *x -= f.clone() * b;
                    }
                }
                for (x, b) in coords.iter_mut().zip(bcoords.iter()) {
                    if !b.is_zero() {
                        *x -= f.clone() * b;
                    }
                }
            }
        }
    }

    /// Coordinates of `v` in the original vector list, if `v` lies in the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim);
        let mut vec = v.to_vec();
        let mut coords = vec![Scalar::zero(); self.count];
        self.reduce_tracking(&mut vec, &mut coords);
        if vec.iter().all(|x| x.is_zero()) {
            Some(coords.into_iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

/// Solved data for `so(A) = { M : MA = (MA)^T }`.
pub struct LieData {
    pub a: QMatrix,
    pub basis: Vec<QMatrix>,
    pub rank_s: usize,
    solver: SpanSolver,
}

impl LieData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    pub fn coords(&self, m: &QMatrix) -> Result<Vec<Scalar>, LieError> {
        self.solver.coords(&m.vectorize()).ok_or(LieError::NotInSpan)
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.solver.coords(&m.vectorize()).is_some()
    }

    pub fn from_coords(&self, coords: &[Scalar]) -> QMatrix {
        let r = self.size();
        let mut m = QMatrix::zeros(r, r);
        for (c, b) in coords.iter().zip(self.basis.iter()) {
            if !c.is_zero() {
                m = m.add(&b.scale(c));
            }
        }
        m
    }
}

/// The block canonical antisymmetric matrix: `s` diagonal blocks
/// `[[0,1],[-1,0]]` followed by zeros.
pub fn block_matrix(r: usize, s: usize) -> QMatrix {
    assert!(2 * s <= r);
    let mut b = QMatrix::zeros(r, r);
    for i in 0..s {
        b[(2 * i, 2 * i + 1)] = Scalar::one();
        b[(2 * i + 1, 2 * i)] = -Scalar::one();
    }
    b
}

/// Detects the block canonical form, returning `s`.
pub fn is_block_canonical(a: &QMatrix) -> Option<usize> {
    if !a.is_square() {
        return None;
    }
    let r = a.nrows();
    let mut s = 0;
    while 2 * s + 1 < r && a[(2 * s, 2 * s + 1)].is_one() {
        s += 1;
    }
    if *a == block_matrix(r, s) {
        Some(s)
    } else {
        None
    }
}

/// Expected dimension of `so(A)` for an `r x r` antisymmetric matrix of
/// rank `2s`.
pub fn so_dimension(r: usize, s: usize) -> usize {
    (r - 2 * s) * r + 2 * s * s + s
}

/// Solves `M A = (M A)^T` for the canonical basis of `so(A)`.
///
/// For the block canonical matrix the basis is structured: first the solved
/// basis of `so(B')` on the symplectic block, then the matrix units `e_ij`
/// with `j` in the zero block, in row-major order. For a general
/// antisymmetric matrix the basis comes from the reduced row echelon
/// nullspace with the matrix entries ordered row-major.
pub fn so_basis(a: &QMatrix) -> Result<LieData, LieError> {
    if !a.is_square() {
        return Err(LieError::NotSquare);
    }
    if !a.is_antisymmetric() {
        return Err(LieError::NotAntisymmetric);
    }
    let r = a.nrows();
    let rank = a.rank();
    if !rank.is_multiple_of(2) {
        return Err(LieError::Internal("antisymmetric matrix with odd rank".into()));
    }
    let s = rank / 2;

    let basis: Vec<QMatrix> = if let Some(s_blk) = is_block_canonical(a) {
        debug_assert_eq!(s_blk, s);
        let two_s = 2 * s;
        let bp = a.block(0, two_s, 0, two_s);
        let mut basis: Vec<QMatrix> = solve_so_nullspace(&bp)
            .into_iter()
            .map(|m| {
                let mut full = QMatrix::zeros(r, r);
                for i in 0..two_s {
                    for j in 0..two_s {
                        full[(i, j)] = m[(i, j)].clone();
                    }
                }
                full
            })
            .collect();
        for i in 0..r {
            for j in two_s..r {
                basis.push(QMatrix::unit(r, i, j));
            }
        }
        basis
    } else {
        solve_so_nullspace(a)
    };

    if basis.len() != so_dimension(r, s) {
        return Err(LieError::Internal(format!(
            "so(A) dimension {} does not match the rank-{} formula {}",
            basis.len(),
            2 * s,
            so_dimension(r, s)
        )));
    }
    for m in &basis {
        let ma = m.mul(a);
        if ma != ma.transpose() {
            return Err(LieError::Internal("basis element fails M A = (M A)^T".into()));
        }
    }
    let vectors: Vec<Vec<Scalar>> = basis.iter().map(|m| m.vectorize()).collect();
    let solver = SpanSolver::new(&vectors)?;
    Ok(LieData { a: a.clone(), basis, rank_s: s, solver })
}

fn solve_so_nullspace(a: &QMatrix) -> Vec<QMatrix> {
    let r = a.nrows();
    let mut red = RowReducer::new(r * r);
    // (MA)_{pq} = (MA)_{qp} for p < q, unknowns M_{ik} row-major
    for p in 0..r {
        for q in (p + 1)..r {
            let mut row = vec![Scalar::zero(); r * r];
            for k in 0..r {
                row[p * r + k] += a[(k, q)].clone();
                row[q * r + k] -= a[(k, p)].clone();
            }
            red.add_row(row);
        }
    }
    red.nullspace()
        .into_iter()
        .map(|v| QMatrix::from_vec(r, r, v))
        .collect()
}

/// Result of skew Gram-Schmidt: `p * a * p^T = b` with `b` block canonical.
pub struct Congruence {
    pub p: QMatrix,
    pub b: QMatrix,
    pub s: usize,
}

/// Normalizes an antisymmetric matrix by congruence over the rationals.
/// The transform is a general invertible matrix, not an orthogonal one.
pub fn congruence_normalize(a: &QMatrix) -> Result<Congruence, LieError> {
    if !a.is_square() {
        return Err(LieError::NotSquare);
    }
    if !a.is_antisymmetric() {
        return Err(LieError::NotAntisymmetric);
    }
    let r = a.nrows();
    let pairing = |u: &[Scalar], v: &[Scalar]| -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..r {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if !a[(i, j)].is_zero() && !v[j].is_zero() {
                    acc += u[i].clone() * &a[(i, j)] * &v[j];
                }
            }
        }
        acc
    };

    let mut remaining: Vec<Vec<Scalar>> = (0..r)
        .map(|i| {
            let mut e = vec![Scalar::zero(); r];
            e[i] = Scalar::one();
            e
        })
        .collect();
    let mut paired: Vec<Vec<Scalar>> = Vec::new();
    let mut s = 0;
    loop {
        let mut found = None;
        'search: for i in 0..remaining.len() {
            for j in (i + 1)..remaining.len() {
                if !pairing(&remaining[i], &remaining[j]).is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = found else { break };
        let u = remaining.remove(i);
        let mut v = remaining.remove(j - 1);
        let omega = pairing(&u, &v);
        let inv = Scalar::one() / omega;
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // make the rest orthogonal to the new hyperbolic pair
        for w in remaining.iter_mut() {
            let wu = pairing(w, &u);
            let wv = pairing(w, &v);
            for k in 0..r {
                let adj = wu.clone() * &v[k] - wv.clone() * &u[k];
                w[k] += adj;
            }
        }
        paired.push(u);
        paired.push(v);
        s += 1;
    }
    paired.extend(remaining);
    let p = QMatrix::from_rows(paired)?;
    let b = p.mul(a).mul(&p.transpose());
    let expected = block_matrix(r, s);
    if b != expected {
        return Err(LieError::Internal("congruence did not reach the block form".into()));
    }
    if a.rank() != 2 * s {
        return Err(LieError::Internal("rank does not match the pair count".into()));
    }
    Ok(Congruence { p, b, s })
}

/// Structure constants of the solved basis: `[M_i, M_j]` expressed in the
/// basis, for `i < j`.
pub struct StructureConstants {
    pub dim: usize,
    /// indexed by pairs `i < j` in lexicographic order
    pub table: Vec<((usize, usize), Vec<Scalar>)>,
}

impl StructureConstants {
    pub fn get(&self, i: usize, j: usize) -> Option<&[Scalar]> {
        self.table
            .binary_search_by(|((a, b), _)| (*a, *b).cmp(&(i, j)))
            .ok()
            .map(|idx| self.table[idx].1.as_slice())
    }
}

pub fn structure_constants(l: &LieData) -> Result<StructureConstants, LieError> {
    let d = l.dim();
    let mut table = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
    for i in 0..d {
        for j in (i + 1)..d {
            let comm = matrix_bracket(&l.basis[i], &l.basis[j]);
            let coords = l.coords(&comm).map_err(|_| LieError::NotSubalgebra)?;
            table.push(((i, j), coords));
        }
    }
    Ok(StructureConstants { dim: d, table })
}

pub fn matrix_bracket(m: &QMatrix, n: &QMatrix) -> QMatrix {
    m.mul(n).sub(&n.mul(m))
}

/// Trace of the adjoint action of `m` on `so(A)`, computed from the solved
/// basis: the sum over basis elements of the diagonal coordinate of
/// `[m, M_i]`.
pub fn ad_trace(l: &LieData, m: &QMatrix) -> Result<Scalar, LieError> {
    // reject elements outside the span up front
    l.coords(m)?;
    let mut total = Scalar::zero();
    for (i, basis_elt) in l.basis.iter().enumerate() {
        let comm = matrix_bracket(m, basis_elt);
        let coords = l.coords(&comm).map_err(|_| LieError::NotSubalgebra)?;
        total += coords[i].clone();
    }
    Ok(total)
}

/// The scalar shift of the Nakayama automorphism on a Lie generator:
/// `2 tr(M) + tr(ad M)`. On the block canonical form this collapses to
/// `(2 - 2s) tr(M)`.
pub fn phi_eta_matrix(l: &LieData, m: &QMatrix) -> Result<Scalar, LieError> {
    Ok(s_int(2) * m.trace() + ad_trace(l, m)?)
}

/// Closed form for the adjoint trace on the block canonical form:
/// `(r - 2s) tr(M) - r tr(M22)` with `M22` the lower-right zero-block part.
pub fn ad_trace_closed_form(r: usize, s: usize, m: &QMatrix) -> Scalar {
    let m22_trace: Scalar = (2 * s..r).map(|i| m[(i, i)].clone()).sum();
    s_int((r - 2 * s) as i64) * m.trace() - s_int(r as i64) * m22_trace
}
