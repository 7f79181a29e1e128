//! The Segre invariant of a noncollinear surface triple and the two
//! predicates built on it: in-perspective (invariant lies in GF(q)) and
//! degenerate-plane (invariant has trace zero). Closed forms on the
//! parametrised families live here as well.
//!
//! The raw invariant value depends on the chosen representatives; only its
//! GF(q)*-coset is well defined, and reordering the triple twists it by
//! Frobenius. Both flags below are invariant under those actions, so all
//! decision logic goes through the flags. (The classical ratio form of the
//! invariant, h(A,B)h(B,C)h(C,A) / h(B,A)h(C,B)h(A,C), is fully
//! representative-independent but carries no extra information for the
//! subfield and trace flags, so it is not exposed.)

use crate::error::Error;
use crate::field::{Felt, Field};
use crate::hermitian::Hermitian;
use crate::projective::ProjPoint;
use crate::Result;

/// The Segre invariant h(A,B)·h(B,C)·h(C,A) of a noncollinear triple,
/// with its representative-independent flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegreValue {
    /// Product for the normalized representatives; coset data only.
    pub value: Felt,
    /// value ∈ GF(q); invariant under rescaling and reordering.
    pub in_subfield: bool,
    /// trace(value) = 0; invariant under rescaling and reordering.
    pub trace_zero: bool,
}

/// Compute the Segre invariant. Errors when the points are not all on the
/// surface or some pair is collinear (the invariant would be 0 and the
/// predicates are stated for noncollinear triples).
pub fn segre(h: &Hermitian, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<SegreValue> {
    let f = h.field();
    if !(h.is_isotropic(a) && h.is_isotropic(b) && h.is_isotropic(c)) {
        return Err(Error::NotOnSurface);
    }
    let hab = h.h_points(a, b);
    let hbc = h.h_points(b, c);
    let hca = h.h_points(c, a);
    if hab == f.zero() || hbc == f.zero() || hca == f.zero() {
        return Err(Error::CollinearPair);
    }
    let value = f.mul(f.mul(hab, hbc), hca);
    Ok(SegreValue {
        value,
        in_subfield: f.in_subfield(value),
        trace_zero: f.trace(value) == f.zero(),
    })
}

/// A triangle is in perspective iff its Segre invariant lies in GF(q).
pub fn in_perspective(h: &Hermitian, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<bool> {
    Ok(segre(h, a, b, c)?.in_subfield)
}

/// A noncollinear triple spans a degenerate plane iff its Segre invariant has
/// trace zero. (Rank-2 triples, which span only a line, also land here; they
/// never span a nondegenerate plane.)
///
/// Debug builds cross-check every call against the independent geometric
/// oracle below, guarding the form and index conventions.
pub fn degenerate_plane(
    h: &Hermitian,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
) -> Result<bool> {
    let flag = segre(h, a, b, c)?.trace_zero;
    debug_assert_eq!(flag, degenerate_plane_oracle(h, a, b, c)?);
    Ok(flag)
}

/// Independent geometric oracle for [`degenerate_plane`]: the triple fails to
/// span a nondegenerate plane iff it has rank < 3 or the pole of its plane
/// lies on the plane.
pub fn degenerate_plane_oracle(
    h: &Hermitian,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
) -> Result<bool> {
    let f = h.field();
    match h.plane_of(a, b, c) {
        None => Ok(true),
        Some(u) => {
            let pole = h.pole_of_plane(&u)?;
            Ok(crate::mat::dot(f, &pole.coords(), &u) == f.zero())
        }
    }
}

/// Independent geometric oracle for [`in_perspective`]: the three planes
/// ⟨A^⊥ ∩ B^⊥, C⟩, ⟨B^⊥ ∩ C^⊥, A⟩, ⟨C^⊥ ∩ A^⊥, B⟩ intersect in a line,
/// i.e. their three functionals span a space of rank at most 2.
///
/// Presumes a genuine triangle: the triple must span a plane. Triples on a
/// common secant line have trace-zero invariant and are never in perspective.
pub fn in_perspective_oracle(
    h: &Hermitian,
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
) -> Result<bool> {
    let f = h.field();
    let plane = |x: &ProjPoint, y: &ProjPoint, through: &ProjPoint| -> Result<[Felt; 4]> {
        // X^⊥ has functional U (X^q)^T; their intersection is a line, spanned
        // by two independent points; the plane is that line joined to `through`.
        let gram = h.gram();
        let functional = |p: &ProjPoint| {
            let pq = p.coords().map(|c| f.frobenius(c));
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
        let ux = functional(x);
        let uy = functional(y);
        // X^⊥ ∩ Y^⊥ is the line spanned by the kernel of the 2×4 system
        let basis = crate::mat::kernel(f, &[ux, uy]);
        debug_assert_eq!(basis.len(), 2);
        Ok(crate::mat::hyperplane_through(f, &basis[0], &basis[1], &through.coords()))
    };
    let pa = plane(&b.clone(), &c.clone(), a)?;
    let pb = plane(&c.clone(), &a.clone(), b)?;
    let pc = plane(&a.clone(), &b.clone(), c)?;
    // planes share a line iff the functionals span rank ≤ 2
    let rank = crate::mat::rank(f, &[pa, pb, pc]);
    Ok(rank <= 2)
}

/// Closed form of the invariant [P,R₁,R₂] on the parametrised family:
/// trace(α)(t₁^{q+1} − 2t₁t₂^q + t₂^{q+1}) + trace((t₁−t₂)²β^q).
/// Requires t₁ ≠ t₂.
pub fn segre_p_r1_r2(f: &Field, alpha: Felt, beta: Felt, t1: Felt, t2: Felt) -> Result<Felt> {
    if t1 == t2 {
        return Err(Error::EqualParameters);
    }
    let two = f.scalar(2);
    let mid = f.mul(two, f.mul(t1, f.frobenius(t2)));
    let quad = f.sub(f.add(f.norm(t1), f.norm(t2)), mid);
    let d = f.sub(t1, t2);
    let tail = f.trace(f.mul(f.mul(d, d), f.frobenius(beta)));
    Ok(f.add(f.mul(f.trace(alpha), quad), tail))
}

/// Closed form of trace([R₁,R₂,R₃]) on the parametrised family, stated for
/// t₂, t₃ ∈ GF(q) and a pairwise distinct triple:
/// (t₂−t₃)²·trace(α+β)·trace(G(t₂, conj)·G(t₃, plain)) with the two quadratic
/// factors as displayed. Agrees with the generic invariant in vanishing.
pub fn trace_r1_r2_r3(
    f: &Field,
    alpha: Felt,
    beta: Felt,
    t1: Felt,
    t2: Felt,
    t3: Felt,
) -> Result<Felt> {
    if !f.in_subfield(t2) || !f.in_subfield(t3) {
        return Err(Error::ParameterNotInSubfield);
    }
    if t1 == t2 || t1 == t3 || t2 == t3 {
        return Err(Error::EqualParameters);
    }
    let two = f.scalar(2);
    let ta = f.trace(alpha);
    let bq = f.frobenius(beta);
    // first factor: (t₁^{q+1} − 2 t₂ t₁^q + t₂²)·trace(α) + trace(β^q (t₁−t₂)²)
    let d2 = f.sub(t1, t2);
    let quad2 = f.add(
        f.sub(f.norm(t1), f.mul(two, f.mul(t2, f.frobenius(t1)))),
        f.mul(t2, t2),
    );
    let g2 = f.add(f.mul(quad2, ta), f.trace(f.mul(bq, f.mul(d2, d2))));
    // second factor: (t₁^{q+1} − 2 t₁ t₃ + t₃²)·trace(α) + trace(β^q (t₁−t₃)²)
    let d3 = f.sub(t1, t3);
    let quad3 = f.add(f.sub(f.norm(t1), f.mul(two, f.mul(t1, t3))), f.mul(t3, t3));
    let g3 = f.add(f.mul(quad3, ta), f.trace(f.mul(bq, f.mul(d3, d3))));
    let dt = f.sub(t2, t3);
    Ok(f.mul(f.mul(f.mul(dt, dt), f.trace(f.add(alpha, beta))), f.trace(f.mul(g2, g3))))
}
