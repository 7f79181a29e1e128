//! Small exact linear algebra over GF(q²): row reduction, 4×4 inverses and
//! products, and the alternating trilinear "cross product" of three vectors
//! in 4-space. Everything is Gaussian elimination with exact field inverses.

use crate::field::{Felt, Field};
use crate::Result;

pub type Vec4 = [Felt; 4];
pub type Mat4 = [[Felt; 4]; 4];

/// Rank of an n×4 coordinate matrix.
pub fn rank(f: &Field, rows: &[Vec4]) -> usize {
    let mut m: Vec<Vec4> = rows.to_vec();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != f.zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = f.inv(m[rank][col]).expect("pivot is nonzero");
        for c in 0..4 {
            m[rank][c] = f.mul(m[rank][c], inv);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != f.zero() {
                let factor = m[r][col];
                for c in 0..4 {
                    m[r][c] = f.sub(m[r][c], f.mul(factor, m[rank][c]));
                }
            }
        }
        rank += 1;
        if rank == m.len() || rank == 4 {
            break;
        }
    }
    rank
}

pub fn identity(f: &Field) -> Mat4 {
    let mut m = [[f.zero(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn mat_mul(f: &Field, a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[f.zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = f.zero();
            for (k, brow) in b.iter().enumerate() {
                s = f.add(s, f.mul(a[i][k], brow[j]));
            }
            out[i][j] = s;
        }
    }
    out
}

/// Row vector times matrix.
pub fn row_mul(f: &Field, v: &Vec4, m: &Mat4) -> Vec4 {
    let mut out = [f.zero(); 4];
    for (j, o) in out.iter_mut().enumerate() {
        let mut s = f.zero();
        for (k, row) in m.iter().enumerate() {
            s = f.add(s, f.mul(v[k], row[j]));
        }
        *o = s;
    }
    out
}

/// Gauss–Jordan inverse; errors on a singular matrix.
pub fn mat_inv(f: &Field, m: &Mat4) -> Result<Mat4> {
    let mut a = *m;
    let mut b = identity(f);
    for col in 0..4 {
        let pivot = (col..4)
            .find(|&r| a[r][col] != f.zero())
            .ok_or(crate::Error::SingularMatrix)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = f.inv(a[col][col])?;
        for c in 0..4 {
            a[col][c] = f.mul(a[col][c], inv);
            b[col][c] = f.mul(b[col][c], inv);
        }
        for r in 0..4 {
            if r != col && a[r][col] != f.zero() {
                let factor = a[r][col];
                for c in 0..4 {
                    a[r][c] = f.sub(a[r][c], f.mul(factor, a[col][c]));
                    b[r][c] = f.sub(b[r][c], f.mul(factor, b[col][c]));
                }
            }
        }
    }
    Ok(b)
}

/// Componentwise Frobenius of a matrix.
pub fn mat_frob(f: &Field, m: &Mat4) -> Mat4 {
    let mut out = *m;
    for row in out.iter_mut() {
        for c in row.iter_mut() {
            *c = f.frobenius(*c);
        }
    }
    out
}

pub fn transpose(m: &Mat4) -> Mat4 {
    let mut out = *m;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i];
        }
    }
    out
}

fn det3(f: &Field, m: [[Felt; 3]; 3]) -> Felt {
    let mut s = f.zero();
    s = f.add(s, f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1]))));
    s = f.sub(s, f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0]))));
    s = f.add(s, f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0]))));
    s
}

/// Coefficient vector of the hyperplane spanned by three independent rows:
/// the signed 3×3 minors, so that `dot(u, v) = 0` for each input row v.
pub fn hyperplane_through(f: &Field, a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let mut out = [f.zero(); 4];
    for (j, o) in out.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let minor = det3(
            f,
            [
                [a[cols[0]], a[cols[1]], a[cols[2]]],
                [b[cols[0]], b[cols[1]], b[cols[2]]],
                [c[cols[0]], c[cols[1]], c[cols[2]]],
            ],
        );
        *o = if j % 2 == 0 { minor } else { f.neg(minor) };
    }
    out
}

pub fn dot(f: &Field, a: &Vec4, b: &Vec4) -> Felt {
    let mut s = f.zero();
    for k in 0..4 {
        s = f.add(s, f.mul(a[k], b[k]));
    }
    s
}

/// Basis of {v : v·rowᵢ = 0 for all i}, by row reduction of the functional
/// matrix and back-substitution on the free coordinates.
pub fn kernel(f: &Field, rows: &[Vec4]) -> Vec<Vec4> {
    let mut m: Vec<Vec4> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..4 {
        if r >= m.len() {
            break;
        }
        if let Some(pr) = (r..m.len()).find(|&i| m[i][col] != f.zero()) {
            m.swap(r, pr);
            let inv = f.inv(m[r][col]).expect("pivot nonzero");
            for c in 0..4 {
                m[r][c] = f.mul(m[r][c], inv);
            }
            for i in 0..m.len() {
                if i != r && m[i][col] != f.zero() {
                    let factor = m[i][col];
                    for c in 0..4 {
                        m[i][c] = f.sub(m[i][c], f.mul(factor, m[r][c]));
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..4 {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = [f.zero(); 4];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[row][free]);
        }
        basis.push(v);
    }
    basis
}
