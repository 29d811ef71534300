//! Exact integer linear algebra: Hermite and Smith normal forms, Bareiss
//! determinants, primitivity and lattice indices.

use crate::int::Int;
use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u * a = h`, `|det u| = 1`, each row's pivot strictly
/// right of the pivot above, positive pivots, and entries above a pivot in
/// `[0, pivot)`. Zero rows, if any, sit at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut r = 0;
    for c in 0..a.cols() {
        if r == n {
            break;
        }
        if !eliminate_below(&mut h, &mut u, r, c) {
            continue;
        }
        reduce_above(&mut h, &mut u, r, c);
        r += 1;
    }
    (h, u)
}

/// Euclid on column `c` restricted to rows `r..`; leaves a positive pivot at
/// `(r, c)` and zeros below it. Returns false if the column is already zero.
pub(crate) fn eliminate_below(h: &mut IntMatrix, u: &mut IntMatrix, r: usize, c: usize) -> bool {
    let n = h.rows();
    loop {
        let mut piv: Option<usize> = None;
        for i in r..n {
            if h[(i, c)].is_zero() {
                continue;
            }
            match piv {
                Some(p) if h[(p, c)].abs() <= h[(i, c)].abs() => {}
                _ => piv = Some(i),
            }
        }
        let Some(p) = piv else { return false };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        let mut clean = true;
        for i in r + 1..n {
            if h[(i, c)].is_zero() {
                continue;
            }
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
            if !h[(i, c)].is_zero() {
                clean = false;
            }
        }
        if clean {
            if h[(r, c)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            return true;
        }
    }
}

pub(crate) fn reduce_above(h: &mut IntMatrix, u: &mut IntMatrix, r: usize, c: usize) {
    for i in 0..r {
        let q = -h[(i, c)].div_floor(&h[(r, c)]);
        h.add_row_multiple(i, r, &q);
        u.add_row_multiple(i, r, &q);
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> Result<Int> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    Ok(det_rows(&a.to_rows()))
}

/// Determinant of a square matrix given as rows (or, equivalently, columns).
pub fn det_rows(rows: &[Vec<Int>]) -> Int {
    let n = rows.len();
    match n {
        0 => return Int::ONE,
        1 => return rows[0][0].clone(),
        2 => return &(&rows[0][0] * &rows[1][1]) - &(&rows[0][1] * &rows[1][0]),
        _ => {}
    }
    let mut m: Vec<Vec<Int>> = rows.to_vec();
    let mut negate = false;
    let mut prev = Int::ONE;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Int::ZERO,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Smith normal form of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariant_factors: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Computes unimodular `left`, `right` with `left * a * right` diagonal.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_columns(t, pj);
        right.swap_columns(t, pj);
        loop {
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    left.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_column_multiple(j, t, &q);
                    right.add_column_multiple(j, t, &q);
                }
            }
            let mut smaller: Option<(usize, usize)> = None;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    smaller = Some((i, t));
                    break;
                }
            }
            if smaller.is_none() {
                for j in t + 1..cols {
                    if !d[(t, j)].is_zero() {
                        smaller = Some((t, j));
                        break;
                    }
                }
            }
            if let Some((i, j)) = smaller {
                // remainder is smaller than the pivot: move it there
                if j == t {
                    d.swap_rows(t, i);
                    left.swap_rows(t, i);
                } else {
                    d.swap_columns(t, j);
                    right.swap_columns(t, j);
                }
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[(i, j)].mod_floor(&d[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &Int::ONE);
                    left.add_row_multiple(t, i, &Int::ONE);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..t).map(|i| d[(i, i)].clone()).collect();
    SmithForm {
        invariant_factors,
        left,
        right,
    }
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn make_primitive(v: &[Int]) -> Result<Vec<Int>> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if g.is_one() {
        return Ok(v.to_vec());
    }
    Ok(v.iter().map(|x| x.div_exact(&g)).collect())
}

/// Gcd of all entries (zero for the zero vector).
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::ZERO;
    for x in v {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    g
}

/// In-place primitivization; leaves the zero vector untouched.
pub(crate) fn primitivize(v: &mut [Int]) {
    let g = content(v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    rank_of_vectors(&a.to_rows())
}

/// Rank of a family of equally long vectors.
pub fn rank_of_vectors(vectors: &[Vec<Int>]) -> usize {
    let Some(width) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<Int>> = vectors.to_vec();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            let (top, rest) = m.split_at_mut(i);
            for (x, y) in rest[0][c..width].iter_mut().zip(&top[r][c..width]) {
                *x = &(&*x * &a) - &(y * &b);
            }
            primitivize(&mut m[i]);
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Index of the sublattice spanned by the columns of `a` in `Z^rows`.
pub fn lattice_index(a: &IntMatrix) -> Result<Int> {
    let n = a.rows();
    let (h, _) = hermite_normal_form(&a.transpose());
    let mut index = Int::ONE;
    let mut found = 0;
    for i in 0..h.rows().min(n) {
        match h.row(i).iter().find(|x| !x.is_zero()) {
            Some(p) => {
                index = &index * p;
                found += 1;
            }
            None => break,
        }
    }
    if found < n {
        return Err(Error::RankDeficient { expected: n, found });
    }
    Ok(index)
}

/// Primality by trial division; characteristics here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether `columns` (exactly `n` vectors of length `n`) form a basis of
/// `k^n` for a field of characteristic `p` (`p = 0` or prime).
pub fn is_basis_modulo(columns: &[Vec<Int>], p: u64) -> Result<bool> {
    let n = columns.first().map_or(0, Vec::len);
    if columns.len() != n || columns.iter().any(|c| c.len() != n) {
        return Err(Error::Dimension(format!(
            "expected {n} vectors of length {n}, got {}",
            columns.len()
        )));
    }
    if p != 0 && !is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    Ok(det_is_unit_mod(&det_rows(columns), p))
}

#[inline]
pub(crate) fn det_is_unit_mod(det: &Int, p: u64) -> bool {
    if p == 0 {
        !det.is_zero()
    } else {
        !det.mod_floor(&Int::from(p)).is_zero()
    }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> Result<IntMatrix> {
    if !u.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let (h, v) = hermite_normal_form(u);
    if h != IntMatrix::identity(u.rows()) {
        return Err(Error::NotUnimodular);
    }
    Ok(v)
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let snf = smith_normal_form(a);
    let lb = snf.left.apply(b);
    let r = snf.rank();
    let mut y = vec![Int::ZERO; a.cols()];
    for i in 0..a.rows() {
        if i < r {
            let d = &snf.invariant_factors[i];
            if !lb[i].mod_floor(d).is_zero() {
                return Ok(None);
            }
            y[i] = lb[i].div_exact(d);
        } else if !lb[i].is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.right.apply(&y)))
}
