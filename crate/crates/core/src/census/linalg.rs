//! Dense matrices over a field, stored as rows.

use alloc::vec;
use alloc::vec::Vec;

use super::field::{Field, Ring};
use super::poly;

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<F: Ring>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

pub fn transpose<E: Clone>(a: &[Vec<E>]) -> Matrix<E> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<F: Ring>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

/// Row vector times matrix.
pub fn vec_mat<F: Ring>(f: &F, v: &[F::Elem], b: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![f.zero(); cols];
    for (x, row) in v.iter().zip(b) {
        if f.is_zero(x) {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o = f.add(o, &f.mul(x, y));
        }
    }
    out
}

/// `g(M)` by Horner's rule.
pub fn poly_matrix<F: Ring>(f: &F, g: &[F::Elem], m: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    let n = m.len();
    let mut acc: Matrix<F::Elem> = vec![vec![f.zero(); n]; n];
    for c in g.iter().rev() {
        acc = mat_mul(f, &acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = f.add(&row[i], c);
        }
    }
    acc
}

/// Reduced row echelon form, returning the nonzero rows and pivot columns.
pub fn rref<F: Field>(f: &F, a: &[Vec<F::Elem>]) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, i);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let k = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(x, &f.mul(&k, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : A x = 0}`, in reduced form.
pub fn nullspace<F: Field>(f: &F, a: &[Vec<F::Elem>], cols: usize) -> Matrix<F::Elem> {
    let (r, pivots) = rref(f, a);
    let mut out = Vec::new();
    let mut pi = 0;
    for free in 0..cols {
        if pi < pivots.len() && pivots[pi] == free {
            pi += 1;
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = f.neg(&row[free]);
        }
        out.push(v);
    }
    rref(f, &out).0
}

/// Basis of `{x : x A = 0}`.
pub fn left_kernel<F: Field>(f: &F, a: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    nullspace(f, &transpose(a), a.len())
}

/// Coordinates of `v` with respect to an echelon basis, or `None` when `v` is
/// outside the span.
pub fn coordinates<F: Field>(
    f: &F,
    basis: &[Vec<F::Elem>],
    pivots: &[usize],
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let coords: Vec<F::Elem> = pivots.iter().map(|&c| v[c].clone()).collect();
    let back = vec_mat(f, &coords, basis);
    (back == v).then_some(coords)
}

/// Pivot columns of a matrix already in reduced echelon form.
pub fn pivots_of<F: Ring>(f: &F, basis: &[Vec<F::Elem>]) -> Vec<usize> {
    basis.iter().map(|row| row.iter().position(|x| !f.is_zero(x)).expect("nonzero row")).collect()
}

/// Characteristic polynomial via reduction to Hessenberg form.
pub fn charpoly<F: Field>(f: &F, a: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let n = a.len();
    let mut h = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !f.is_zero(&h[i][m - 1])) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = f.inv(&h[m][m - 1]).expect("nonzero");
        for j in m + 1..n {
            if f.is_zero(&h[j][m - 1]) {
                continue;
            }
            let u = f.mul(&h[j][m - 1], &inv);
            let row_m = h[m].clone();
            for (x, y) in h[j].iter_mut().zip(&row_m) {
                *x = f.sub(x, &f.mul(&u, y));
            }
            for row in h.iter_mut() {
                let t = f.mul(&u, &row[j]);
                row[m] = f.add(&row[m], &t);
            }
        }
    }
    let mut ps: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for m in 1..=n {
        let lin = vec![f.neg(&h[m - 1][m - 1]), f.one()];
        let mut pm = poly::mul(f, &lin, &ps[m - 1]);
        let mut t = f.one();
        for i in 1..m {
            t = f.mul(&t, &h[m - i][m - i - 1]);
            let c = f.mul(&t, &h[m - i - 1][m - 1]);
            pm = poly::sub(f, &pm, &poly::scale(f, &ps[m - i - 1], &c));
        }
        ps.push(pm);
    }
    ps.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::field::PrimeField;

    #[test]
    fn charpoly_small() {
        let f = PrimeField::new(101);
        // triangular, charpoly (x - 1)(x + 1)(x - 3)
        let a = vec![vec![1, 2, 0], vec![0, 100, 7], vec![0, 0, 3]];
        let cp = charpoly(&f, &a);
        assert_eq!(cp, vec![3, 100, 98, 1]);
        let dense = vec![vec![2, 7, 1, 3], vec![5, 0, 9, 4], vec![8, 8, 1, 0], vec![3, 6, 2, 5]];
        let cp = charpoly(&f, &dense);
        // Cayley-Hamilton
        let z = poly_matrix(&f, &cp, &dense);
        assert!(z.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn kernels_and_coordinates() {
        let f = PrimeField::new(7);
        let a = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ker = nullspace(&f, &a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s = (v[0] + 2 * v[1] + 3 * v[2]) % 7;
            assert_eq!(s, 0);
        }
        let lk = left_kernel(&f, &a);
        assert_eq!(lk, vec![vec![1, 3]]);
        let (basis, piv) = rref(&f, &a);
        assert_eq!(coordinates(&f, &basis, &piv, &[3, 6, 2]), Some(vec![3]));
        assert_eq!(coordinates(&f, &basis, &piv, &[3, 6, 1]), None);
    }
}
