//! Semilinear collineations of H(3,q²): validated matrix-plus-automorphism
//! pairs, the setwise stabilizer of {P,Q,S}, constructive transitivity on
//! noncollinear pairs and on perspective triples, and the classicality test.
//!
//! A collineation acts on a point by applying its field automorphism
//! componentwise, then the matrix (row vector times matrix), then
//! normalizing.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constructions;
use crate::error::Error;
use crate::field::{Felt, Field};
use crate::hermitian::Hermitian;
use crate::invariants;
use crate::mat::{self, Mat4};
use crate::projective::{PointSet, ProjPoint};
use crate::Result;

/// An invertible semilinear map preserving the Hermitian form up to a
/// nonzero scalar: M·U·(M^q)^T = λ·U.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collineation {
    matrix: Mat4,
    frob_power: u32,
}

impl Collineation {
    /// Validate and build. The matrix must satisfy the form-preservation
    /// identity; `frob_power` counts p-power automorphism steps in [0, 2e).
    pub fn new(h: &Hermitian, matrix: Mat4, frob_power: u32) -> Result<Collineation> {
        let f = h.field();
        let u = h.gram();
        let conj_t = mat::transpose(&mat::mat_frob(f, &matrix));
        let w = mat::mat_mul(f, &mat::mat_mul(f, &matrix, &u), &conj_t);
        // w must be λ·U with λ = w[0][3] ≠ 0
        let lambda = w[0][3];
        if lambda == f.zero() {
            return Err(Error::NotUnitary);
        }
        for i in 0..4 {
            for j in 0..4 {
                if w[i][j] != f.mul(lambda, u[i][j]) {
                    return Err(Error::NotUnitary);
                }
            }
        }
        Ok(Collineation { matrix, frob_power: frob_power % (2 * f.e()) })
    }

    pub fn identity(h: &Hermitian) -> Collineation {
        Collineation { matrix: mat::identity(h.field()), frob_power: 0 }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn frob_power(&self) -> u32 {
        self.frob_power
    }

    /// Image of a point: componentwise automorphism, then the matrix, then
    /// normalization. Preserves isotropy and collinearity.
    pub fn apply(&self, h: &Hermitian, x: &ProjPoint) -> ProjPoint {
        let f = h.field();
        let twisted = x.coords().map(|c| f.frobenius_p(c, self.frob_power));
        let raw = mat::row_mul(f, &twisted, &self.matrix);
        ProjPoint::normalize(f, raw).expect("collineations are invertible")
    }

    pub fn apply_set(&self, h: &Hermitian, s: &PointSet) -> PointSet {
        PointSet::from_points(s.iter().map(|x| self.apply(h, x)).collect())
    }

    /// `self` followed by `other`.
    pub fn then(&self, h: &Hermitian, other: &Collineation) -> Collineation {
        let f = h.field();
        // x^(φ1) M1 ↦ (x^(φ1) M1)^(φ2) M2 = x^(φ1+φ2) · M1^(φ2) M2
        let mut m1_twisted = self.matrix;
        for row in m1_twisted.iter_mut() {
            for c in row.iter_mut() {
                *c = f.frobenius_p(*c, other.frob_power);
            }
        }
        Collineation {
            matrix: mat::mat_mul(f, &m1_twisted, &other.matrix),
            frob_power: (self.frob_power + other.frob_power) % (2 * f.e()),
        }
    }

    pub fn inverse(&self, h: &Hermitian) -> Collineation {
        let f = h.field();
        let inv_pow = (2 * f.e() - self.frob_power) % (2 * f.e());
        let mut m = mat::mat_inv(f, &self.matrix).expect("collineations are invertible");
        for row in m.iter_mut() {
            for c in row.iter_mut() {
                *c = f.frobenius_p(*c, inv_pow);
            }
        }
        Collineation { matrix: m, frob_power: inv_pow }
    }

    /// Projective canonical key: matrix scaled so its first nonzero entry is
    /// 1, flattened to labels, plus the automorphism power.
    pub fn canonical_key(&self, f: &Field) -> ([u32; 16], u32) {
        let flat: Vec<Felt> = self.matrix.iter().flatten().copied().collect();
        let lead = flat.iter().find(|&&c| c != f.zero()).expect("nonzero matrix");
        let inv = f.inv(*lead).expect("lead nonzero");
        let mut key = [0u32; 16];
        for (slot, &c) in key.iter_mut().zip(flat.iter()) {
            *slot = f.mul(c, inv).index();
        }
        (key, self.frob_power)
    }

    pub fn encode(&self, f: &Field) -> CollineationFile {
        CollineationFile {
            matrix: self.matrix.iter().flatten().map(|&c| f.coeffs(c)).collect(),
            frob_power: self.frob_power,
        }
    }
}

/// File form of a collineation: 16 row-major coefficient vectors plus the
/// automorphism power.
#[derive(Serialize, Deserialize)]
pub struct CollineationFile {
    pub matrix: Vec<Vec<u64>>,
    pub frob_power: u32,
}

impl CollineationFile {
    /// Rebuild against a surface, re-validating the form preservation.
    pub fn decode(&self, h: &Hermitian) -> Result<Collineation> {
        let f = h.field();
        if self.matrix.len() != 16 {
            return Err(Error::Serialization("matrix must have 16 entries".into()));
        }
        let mut m = [[f.zero(); 4]; 4];
        for (i, coeffs) in self.matrix.iter().enumerate() {
            m[i / 4][i % 4] = f.from_coeffs(coeffs)?;
        }
        Collineation::new(h, m, self.frob_power)
    }
}

/// The matrix of the pointwise {P,Q,S}-stabilizer attached to a parameter x
/// with x + x^q = 2x^{q+1}: identity corners, symmetric (x, 1−x) middle block.
fn pointwise_matrix(f: &Field, x: Felt) -> Mat4 {
    let (z, o) = (f.zero(), f.one());
    let y = f.sub(o, x);
    [[o, z, z, z], [z, x, y, z], [z, y, x, z], [z, z, z, o]]
}

/// The two displayed involutions generating the S₃ on {P,Q,S}: `m1` swaps P
/// and Q; `m2` acts as the cycle (P S Q).
fn involution_m1(f: &Field) -> Mat4 {
    let (z, o) = (f.zero(), f.one());
    [[z, z, z, o], [z, o, z, z], [z, z, o, z], [o, z, z, z]]
}

fn involution_m2(f: &Field) -> Mat4 {
    let (z, o) = (f.zero(), f.one());
    let m = f.neg(o);
    [[z, z, z, o], [z, z, m, m], [z, m, z, m], [o, o, o, o]]
}

/// The full setwise stabilizer D of {P,Q,S} in PΓU(4,q): the q+1 pointwise
/// matrices, times the 2e automorphism powers, times the S₃ generated by the
/// two involutions. Deduplicated projectively; |D| = 12(q+1)·log_p(q).
pub fn stabilizer_pqs(h: &Hermitian) -> Vec<Collineation> {
    let f = h.field();
    let m1 = involution_m1(f);
    let m2 = involution_m2(f);
    // coset representatives of S₃: e, m1, m2, m2², m1m2, m1m2²
    let m2sq = mat::mat_mul(f, &m2, &m2);
    let reps = [
        mat::identity(f),
        m1,
        m2,
        m2sq,
        mat::mat_mul(f, &m1, &m2),
        mat::mat_mul(f, &m1, &m2sq),
    ];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in f.trace_eq_double_norm() {
        let base = pointwise_matrix(f, x);
        for rep in &reps {
            let matrix = mat::mat_mul(f, &base, rep);
            for j in 0..(2 * f.e()) {
                let g = Collineation::new(h, matrix, j).expect("stabilizer element");
                if seen.insert(g.canonical_key(f)) {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// A collineation with g(A) = P and g(B) = Q, built from a basis whose Gram
/// matrix is exactly U: u₃ = A, u₀ = B rescaled so h(u₀, u₃) = 1, and an
/// orthogonal basis of ⟨A,B⟩^⊥ rescaled to norm −1 via `solve_norm`.
/// Linear part only. Errors on collinear input.
pub fn map_pair_to_standard(h: &Hermitian, a: &ProjPoint, b: &ProjPoint) -> Result<Collineation> {
    let f = h.field();
    if !h.is_isotropic(a) || !h.is_isotropic(b) {
        return Err(Error::NotOnSurface);
    }
    let c = h.h_points(b, a);
    if c == f.zero() {
        return Err(Error::CollinearInput);
    }
    let u3 = a.coords();
    let cinv = f.inv(c)?;
    let u0 = b.coords().map(|t| f.mul(cinv, t));

    // ⟨A,B⟩^⊥: kernel of the two perp functionals
    let gram = h.gram();
    let functional = |p: &[Felt; 4]| {
        let pq = p.map(|t| f.frobenius(t));
        let mut u = [f.zero(); 4];
        for (i, slot) in u.iter_mut().enumerate() {
            let mut s = f.zero();
            for k in 0..4 {
                s = f.add(s, f.mul(gram[i][k], pq[k]));
            }
            *slot = s;
        }
        u
    };
    let basis = mat::kernel(f, &[functional(&u3), functional(&u0)]);
    debug_assert_eq!(basis.len(), 2);

    // first anisotropic vector of the perp plane
    let w = {
        let (b0, b1) = (basis[0], basis[1]);
        if h.h_eval(&b0, &b0) != f.zero() {
            b0
        } else if h.h_eval(&b1, &b1) != f.zero() {
            b1
        } else {
            // h(b0+cb1, b0+cb1) = trace(c^q·h(b0,b1)); pick c making it nonzero
            let cross = h.h_eval(&b0, &b1);
            let c = f
                .elements()
                .find(|&c| f.trace(f.mul(f.frobenius(c), cross)) != f.zero())
                .expect("the perp plane is nondegenerate");
            let mut v = b0;
            for k in 0..4 {
                v[k] = f.add(v[k], f.mul(c, b1[k]));
            }
            v
        }
    };
    let rescale_to_minus_one = |v: [Felt; 4]| -> Result<[Felt; 4]> {
        let n = h.h_eval(&v, &v);
        debug_assert!(f.in_subfield(n) && n != f.zero());
        let s = f.solve_norm(f.neg(f.inv(n)?))?;
        Ok(v.map(|t| f.mul(s, t)))
    };
    let w1 = rescale_to_minus_one(w)?;
    // second basis vector: perp of A, B and w1
    let rest = mat::kernel(f, &[functional(&u3), functional(&u0), functional(&w1)]);
    debug_assert_eq!(rest.len(), 1);
    let w2 = rescale_to_minus_one(rest[0])?;

    let v: Mat4 = [u0, w1, w2, u3];
    let m = mat::mat_inv(f, &v)?;
    let g = Collineation::new(h, m, 0)?;
    debug_assert_eq!(g.apply(h, a), h.p_point());
    debug_assert_eq!(g.apply(h, b), h.q_point());
    Ok(g)
}

/// A collineation with g(A) = P, g(B) = Q, g(C) = S, for a perspective
/// triple: after the pair map, the image of C is (1,u,v,w) with w ∈ GF(q)*;
/// a unitary rotation of the middle plane moves (u,v) onto the diagonal
/// vector (m,m) with N(m) = w, and a diagonal gauge finishes.
/// Errors on non-perspective input.
pub fn map_triple_to_standard(
    h: &Hermitian,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
) -> Result<Collineation> {
    let f = h.field();
    if !invariants::in_perspective(h, a, b, c)? {
        return Err(Error::NotInPerspective);
    }
    let g1 = map_pair_to_standard(h, a, b)?;
    let c1 = g1.apply(h, c);
    let cc = c1.coords();
    // noncollinear with P forces a unit leading coordinate
    debug_assert_eq!(cc[0], f.one());
    let (u, v, w) = (cc[1], cc[2], cc[3]);
    // perspective and isotropy force w ∈ GF(q)* and N(u) + N(v) = 2w
    debug_assert!(f.in_subfield(w) && w != f.zero());
    debug_assert_eq!(f.add(f.norm(u), f.norm(v)), f.mul(f.scalar(2), w));

    let m = f.solve_norm(w)?;
    // unitary 2×2 sending (u,v) to (m,m): both rows extend to orthogonal
    // bases with the same Gram diag(2w, 2w)
    let bmat = [[u, v], [f.neg(f.frobenius(v)), f.frobenius(u)]];
    let cmat = [[m, m], [f.neg(f.frobenius(m)), f.frobenius(m)]];
    let det = f.add(f.norm(u), f.norm(v));
    let det_inv = f.inv(det)?;
    let badj = [
        [f.mul(bmat[1][1], det_inv), f.mul(f.neg(bmat[0][1]), det_inv)],
        [f.mul(f.neg(bmat[1][0]), det_inv), f.mul(bmat[0][0], det_inv)],
    ];
    let mut t0 = [[f.zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = f.zero();
            for (k, crow) in cmat.iter().enumerate() {
                s = f.add(s, f.mul(badj[i][k], crow[j]));
            }
            t0[i][j] = s;
        }
    }
    let (z, o) = (f.zero(), f.one());
    let rotate: Mat4 = [
        [o, z, z, z],
        [z, t0[0][0], t0[0][1], z],
        [z, t0[1][0], t0[1][1], z],
        [z, z, z, o],
    ];
    let gauge: Mat4 = [
        [m, z, z, z],
        [z, o, z, z],
        [z, z, o, z],
        [z, z, z, f.inv(f.frobenius(m))?],
    ];
    let g2 = Collineation::new(h, rotate, 0)?;
    let g3 = Collineation::new(h, gauge, 0)?;
    let g = g1.then(h, &g2).then(h, &g3);
    assert_eq!(g.apply(h, a), h.p_point());
    assert_eq!(g.apply(h, b), h.q_point());
    assert_eq!(g.apply(h, c), h.s_point());
    Ok(g)
}

/// Whether a q²+1 point set is equivalent to the Hermitian Veronesean under
/// the collineation group: canonicalize one perspective triple to (P,Q,S),
/// then compare the image against every standard form, across every field
/// automorphism twist. Errors when the set has the wrong size or contains no
/// perspective triple (a classical set always contains one).
pub fn is_classical(h: &Hermitian, s: &PointSet) -> Result<bool> {
    let f = h.field();
    let expected = (f.order() + 1) as usize;
    if s.len() != expected {
        return Err(Error::WrongCardinality { expected, got: s.len() });
    }
    let pts = s.points();
    let mut triple: Option<(usize, usize, usize)> = None;
    'scan: for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for k in (j + 1)..pts.len() {
                if let Ok(true) = invariants::in_perspective(h, &pts[i], &pts[j], &pts[k]) {
                    triple = Some((i, j, k));
                    break 'scan;
                }
            }
        }
    }
    let (i, j, k) = triple.ok_or(Error::NoPerspectiveTriple)?;
    let g = map_triple_to_standard(h, &pts[i], &pts[j], &pts[k])?;
    let image = g.apply_set(h, s);

    let standards: Vec<PointSet> = f
        .trace_eq_double_norm()
        .into_iter()
        .map(|x| constructions::standard_form(h, x).expect("admissible x"))
        .collect();
    for twist in 0..(2 * f.e()) {
        let twisted = PointSet::from_points(
            image
                .iter()
                .map(|p| {
                    ProjPoint::normalize(f, p.coords().map(|c| f.frobenius_p(c, twist)))
                        .expect("nonzero")
                })
                .collect(),
        );
        if standards.iter().any(|sf| sf.same_set(&twisted)) {
            return Ok(true);
        }
    }
    Ok(false)
}
