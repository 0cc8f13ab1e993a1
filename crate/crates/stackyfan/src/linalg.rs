//! Internal exact linear algebra on row-major `BigInt` / `BigRational`
//! matrices. Everything here is plumbing shared by the lattice and cone
//! layers; nothing is exposed outside the crate.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

pub(crate) type IntMat = Vec<Vec<Int>>;

pub(crate) fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn transpose(m: &[Vec<Int>]) -> IntMat {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub(crate) fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> IntMat {
    a.iter()
        .map(|row| {
            let mut out = vec![Int::zero(); if b.is_empty() { 0 } else { b[0].len() }];
            for (coeff, brow) in row.iter().zip(b.iter()) {
                if coeff.is_zero() {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(brow.iter()) {
                    *o += coeff * v;
                }
            }
            out
        })
        .collect()
}

fn row_sub_scaled(m: &mut [Vec<Int>], dst: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row.iter()) {
        *d -= q * s;
    }
}

fn row_negate(m: &mut [Vec<Int>], i: usize) {
    for v in m[i].iter_mut() {
        *v = -v.clone();
    }
}

/// In-place row Hermite normal form. Pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, pivot rows first ordered by pivot column, zero
/// rows at the bottom. Returns the rank. When `u` is given it starts as the
/// identity and accumulates the unimodular row transform.
fn hnf_in_place(m: &mut IntMat, mut u: Option<&mut IntMat>) -> usize {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[i][j].is_zero()
                    && best.is_none_or(|b| m[i][j].magnitude() < m[b][j].magnitude())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            if let Some(u) = u.as_deref_mut() {
                u.swap(r, b);
            }
            let mut clean = true;
            for i in r + 1..rows {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = &m[i][j] / &m[r][j];
                row_sub_scaled(m, i, r, &q);
                if let Some(u) = u.as_deref_mut() {
                    row_sub_scaled(u, i, r, &q);
                }
                if !m[i][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[r][j].is_zero() {
            continue;
        }
        if m[r][j].is_negative() {
            row_negate(m, r);
            if let Some(u) = u.as_deref_mut() {
                row_negate(u, r);
            }
        }
        for k in 0..r {
            let q = m[k][j].div_floor(&m[r][j]);
            row_sub_scaled(m, k, r, &q);
            if let Some(u) = u.as_deref_mut() {
                row_sub_scaled(u, k, r, &q);
            }
        }
        r += 1;
    }
    r
}

/// Canonical HNF basis of the row span: zero rows stripped.
pub(crate) fn hnf(mut rows: IntMat) -> IntMat {
    let rank = hnf_in_place(&mut rows, None);
    rows.truncate(rank);
    rows
}

pub(crate) fn rational_rank(rows: &[Vec<Int>]) -> usize {
    let mut m = rows.to_vec();
    hnf_in_place(&mut m, None)
}

/// Basis of the integer left kernel `{ c : c * M = 0 }`. The rows of the
/// transform aligned with zero rows of the HNF form a basis of the full
/// kernel sublattice of Z^rows, which is saturated.
pub(crate) fn left_kernel(rows: &[Vec<Int>]) -> IntMat {
    let mut m = rows.to_vec();
    let mut u = identity(rows.len());
    let rank = hnf_in_place(&mut m, Some(&mut u));
    u.split_off(rank)
}

/// Basis of the integer right kernel `{ w : M * w^T = 0 }`.
pub(crate) fn right_kernel(rows: &[Vec<Int>]) -> IntMat {
    left_kernel(&transpose(rows))
}

/// Solve `x * A = t` over the rationals for independent rows of `A`.
/// Returns `None` when the system is inconsistent (t outside the row span).
pub(crate) fn solve_rational(a: &[Vec<Int>], target: &[Rat]) -> Option<Vec<Rat>> {
    let r = a.len();
    let d = target.len();
    debug_assert!(a.iter().all(|row| row.len() == d));
    // Augmented system on the transpose: d equations in r unknowns.
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|j| {
            let mut row: Vec<Rat> = (0..r).map(|i| Rat::from_integer(a[i][j].clone())).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivot_row_of_col = vec![usize::MAX; r];
    let mut cur = 0;
    for col in 0..r {
        let Some(p) = (cur..d).find(|&i| !m[i][col].is_zero()) else {
            return None; // dependent rows; callers guarantee independence
        };
        m.swap(cur, p);
        let inv = m[cur][col].clone();
        for v in m[cur].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..d {
            if i != cur && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let src = m[cur].clone();
                for (dst, s) in m[i].iter_mut().zip(src.iter()) {
                    *dst = &*dst - &f * s;
                }
            }
        }
        pivot_row_of_col[col] = cur;
        cur += 1;
    }
    // Consistency: remaining rows must have a zero right-hand side.
    for row in m.iter().skip(cur) {
        if !row[r].is_zero() {
            return None;
        }
    }
    Some((0..r).map(|col| m[pivot_row_of_col[col]][r].clone()).collect())
}

/// Smith normal form of a square integer matrix, tracking only the inverse
/// of the column transform: returns `(diag, winv)` with `U * A * V = D`,
/// `winv = V^{-1}`. Diagonal entries are non-negative with the divisibility
/// chain normalized; zeros (if any) come last.
pub(crate) fn snf_with_col_inverse(mut a: IntMat) -> (Vec<Int>, IntMat) {
    let k = a.len();
    debug_assert!(a.iter().all(|row| row.len() == k));
    let mut winv = identity(k);

    // column ops on `a` mirrored as row ops on winv (inverse transform)
    fn col_swap(a: &mut IntMat, winv: &mut IntMat, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        winv.swap(i, j);
    }
    fn col_sub_scaled(a: &mut IntMat, winv: &mut IntMat, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let s = row[src].clone();
            row[dst] -= q * &s;
        }
        // (I + q e_{src,dst}) * winv
        let add = winv[dst].clone();
        for (w, v) in winv[src].iter_mut().zip(add.iter()) {
            *w += q * v;
        }
    }
    fn col_add(a: &mut IntMat, winv: &mut IntMat, dst: usize, src: usize) {
        let minus_one = -Int::one();
        col_sub_scaled(a, winv, dst, src, &minus_one);
    }

    fn sweep(a: &mut IntMat, winv: &mut IntMat, from: usize) {
        let k = a.len();
        for t in from..k {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..k {
                    for j in t..k {
                        if !a[i][j].is_zero()
                            && best.is_none_or(|(bi, bj)| {
                                a[i][j].magnitude() < a[bi][bj].magnitude()
                            })
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { return };
                a.swap(t, bi);
                col_swap(a, winv, t, bj);
                for i in t + 1..k {
                    if !a[i][t].is_zero() {
                        let q = &a[i][t] / &a[t][t];
                        row_sub_scaled(a, i, t, &q);
                    }
                }
                for j in t + 1..k {
                    if !a[t][j].is_zero() {
                        let q = &a[t][j] / &a[t][t];
                        col_sub_scaled(a, winv, j, t, &q);
                    }
                }
                let dirty = (t + 1..k).any(|i| !a[i][t].is_zero())
                    || (t + 1..k).any(|j| !a[t][j].is_zero());
                if !dirty {
                    break;
                }
            }
            if a[t][t].is_negative() {
                row_negate(a, t);
            }
        }
    }

    sweep(&mut a, &mut winv, 0);
    // Divisibility chain d_i | d_j for i < j.
    loop {
        let mut fix: Option<(usize, usize)> = None;
        'scan: for i in 0..k {
            for j in i + 1..k {
                if !a[i][i].is_zero() && !a[j][j].is_zero() && !(&a[j][j] % &a[i][i]).is_zero() {
                    fix = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = fix else { break };
        col_add(&mut a, &mut winv, i, j);
        sweep(&mut a, &mut winv, i);
    }
    let diag = (0..k).map(|t| a[t][t].clone()).collect();
    (diag, winv)
}
