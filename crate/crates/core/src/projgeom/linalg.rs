//! Small dense linear algebra over a `FieldSpec`. Matrices are row-major
//! `Vec<Vec<FieldElement>>`; all sizes in this crate are at most 8x8 apart
//! from the occasional rank check on a spanning set.

use crate::gf::{FieldElement, FieldSpec};

pub type Vector = Vec<FieldElement>;
pub type Matrix = Vec<Vector>;

pub fn zero_matrix(rows: usize, cols: usize) -> Matrix {
    vec![vec![FieldElement::ZERO; cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zero_matrix(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = FieldElement::ONE;
    }
    m
}

pub fn dot(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn scale(f: &FieldSpec, c: FieldElement, v: &[FieldElement]) -> Vector {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn add_vec(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(f: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(f, row, col)).collect())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(f: &FieldSpec, v: &[FieldElement], m: &Matrix) -> Vector {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![FieldElement::ZERO; cols];
    for (i, &c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(&m[i]) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// `u M v^T`.
pub fn bilinear(f: &FieldSpec, gram: &Matrix, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
    dot(f, &vec_mat(f, u, gram), v)
}

/// Reduces `m` in place to reduced row echelon form, drops zero rows and
/// returns the pivot columns.
pub fn rref(f: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv_nz(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(f: &FieldSpec, m: &Matrix) -> usize {
    let mut w = m.clone();
    rref(f, &mut w).len()
}

/// Basis of `{x : M x^T = 0}` for a matrix with `cols` columns.
pub fn nullspace(f: &FieldSpec, m: &Matrix, cols: usize) -> Matrix {
    let mut w = m.clone();
    let pivots = rref(f, &mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![FieldElement::ZERO; cols];
            v[fc] = FieldElement::ONE;
            for (row, &pc) in w.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

pub fn inverse(f: &FieldSpec, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, id)| r.iter().copied().chain(id).collect())
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(f: &FieldSpec, m: &Matrix) -> FieldElement {
    let n = m.len();
    let mut w = m.clone();
    let mut det = FieldElement::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return FieldElement::ZERO;
        };
        if p != c {
            w.swap(p, c);
            det = f.neg(det);
        }
        det = f.mul(det, w[c][c]);
        let inv = f.inv_nz(w[c][c]);
        for i in c + 1..n {
            if w[i][c].is_zero() {
                continue;
            }
            let k = f.mul(w[i][c], inv);
            let pivot_row = w[c].clone();
            for (x, &y) in w[i].iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(k, y));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldSpec::new(5).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vector>();
        let m = vec![e(&[1, 2, 3, 4]), e(&[2, 4, 1, 1])];
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &m {
                assert!(dot(&f, r, v).is_zero());
            }
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let f = FieldSpec::new(7).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vector>();
        let m = vec![e(&[1, 2, 0]), e(&[3, 1, 4]), e(&[0, 5, 6])];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        assert!(!determinant(&f, &m).is_zero());
        let sing = vec![e(&[1, 2]), e(&[2, 4])];
        assert!(inverse(&f, &sing).is_none());
        assert!(determinant(&f, &sing).is_zero());
    }
}
