//! The fixed Hermitian form, the surface H(3,q²), collinearity, totally
//! isotropic lines, and the correspondence from a line through a point of a
//! set to the set itself.
//!
//! The form is h(X,Y) = X₀Y₃^q + X₃Y₀^q − X₁Y₁^q − X₂Y₂^q throughout, with
//! 0-based coordinate indexing.

use std::sync::OnceLock;

use crate::error::Error;
use crate::field::{Felt, Field};
use crate::mat::{self, Mat4, Vec4};
use crate::projective::{PointSet, ProjPoint};
use crate::Result;

/// Cache the full pairwise h-table only while n² stays desk-sized.
const PAIR_CACHE_MAX_POINTS: usize = 4096;

struct SurfaceData {
    points: Vec<ProjPoint>,
    /// Flattened n×n table of h-value labels, when the surface is small.
    pair: Option<Vec<u32>>,
}

/// The Hermitian surface H(3,q²) over its field, with cached enumeration.
pub struct Hermitian {
    field: Field,
    surface: OnceLock<SurfaceData>,
}

impl Hermitian {
    pub fn new(field: Field) -> Hermitian {
        Hermitian { field, surface: OnceLock::new() }
    }

    /// Standard construction for a given q = p^e.
    pub fn for_q(p: u64, e: u32) -> Result<Hermitian> {
        Ok(Hermitian::new(Field::new(p, e)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Gram matrix U of the form: antidiagonal 1s in the corners, −1s in the
    /// middle.
    pub fn gram(&self) -> Mat4 {
        let f = &self.field;
        let (z, o, m) = (f.zero(), f.one(), f.neg(f.one()));
        [[z, z, z, o], [z, m, z, z], [z, z, m, z], [o, z, z, z]]
    }

    /// The form on raw representatives. Representative-dependent; the
    /// predicates built on it are not.
    #[inline]
    pub fn h_eval(&self, x: &Vec4, y: &Vec4) -> Felt {
        let f = &self.field;
        let mut s = f.mul(x[0], f.frobenius(y[3]));
        s = f.add(s, f.mul(x[3], f.frobenius(y[0])));
        s = f.sub(s, f.mul(x[1], f.frobenius(y[1])));
        s = f.sub(s, f.mul(x[2], f.frobenius(y[2])));
        s
    }

    pub fn h_points(&self, x: &ProjPoint, y: &ProjPoint) -> Felt {
        self.h_eval(&x.coords(), &y.coords())
    }

    /// Surface membership: h(X,X) = 0.
    #[inline]
    pub fn is_isotropic(&self, x: &ProjPoint) -> bool {
        let c = x.coords();
        self.h_eval(&c, &c) == self.field.zero()
    }

    /// Collinearity on the surface: both points isotropic and h(X,Y) = 0.
    /// Symmetric; errors on non-isotropic input.
    pub fn collinear(&self, x: &ProjPoint, y: &ProjPoint) -> Result<bool> {
        if !self.is_isotropic(x) || !self.is_isotropic(y) {
            return Err(Error::NotOnSurface);
        }
        Ok(self.h_points(x, y) == self.field.zero())
    }

    fn surface_data(&self) -> &SurfaceData {
        self.surface.get_or_init(|| {
            let points = self.enumerate_points();
            let n = points.len();
            let pair = if n <= PAIR_CACHE_MAX_POINTS {
                let mut table = vec![0u32; n * n];
                for i in 0..n {
                    let ci = points[i].coords();
                    for j in 0..n {
                        table[i * n + j] =
                            self.h_eval(&ci, &points[j].coords()).index();
                    }
                }
                Some(table)
            } else {
                None
            };
            SurfaceData { points, pair }
        })
    }

    /// Generate the surface in canonical point order. The leading-coordinate
    /// cases are emitted in ascending lexicographic order directly.
    fn enumerate_points(&self) -> Vec<ProjPoint> {
        let f = &self.field;
        let mut pts = Vec::new();
        // (0,0,0,1)
        pts.push(ProjPoint::normalize(f, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap());
        // (0,0,1,c) is never isotropic: h = −N(1) = −1
        // (0,1,b,c): isotropic iff N(b) = −1, c free
        let minus_one = f.neg(f.one());
        for b in f.elements() {
            if f.norm(b) != minus_one {
                continue;
            }
            for c in f.elements() {
                pts.push(ProjPoint::normalize(f, [f.zero(), f.one(), b, c]).unwrap());
            }
        }
        // (1,a,b,c): isotropic iff trace(c) = N(a) + N(b)
        // group the c's by trace value once
        let mut by_trace: Vec<Vec<Felt>> = vec![Vec::new(); f.order() as usize];
        for c in f.elements() {
            by_trace[f.trace(c).index() as usize].push(c);
        }
        for a in f.elements() {
            let na = f.norm(a);
            for b in f.elements() {
                let target = f.add(na, f.norm(b));
                for &c in &by_trace[target.index() as usize] {
                    pts.push(ProjPoint::normalize(f, [f.one(), a, b, c]).unwrap());
                }
            }
        }
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]), "canonical order");
        let q = f.q();
        debug_assert_eq!(pts.len() as u64, (q * q + 1) * (q * q * q + 1));
        pts
    }

    /// All points of H(3,q²) in canonical order; count (q²+1)(q³+1).
    pub fn surface(&self) -> &[ProjPoint] {
        &self.surface_data().points
    }

    pub fn surface_set(&self) -> PointSet {
        PointSet::from_points(self.surface().to_vec())
    }

    /// Index of a surface point in the canonical enumeration.
    pub fn point_id(&self, p: &ProjPoint) -> Option<usize> {
        self.surface_data().points.binary_search(p).ok()
    }

    /// Whether the pairwise h-table is cached for this surface size.
    pub fn has_pair_table(&self) -> bool {
        self.surface_data().pair.is_some()
    }

    /// h-value of two surface points by id, from the cache when present.
    #[inline]
    pub fn pair_value(&self, i: usize, j: usize) -> Felt {
        let data = self.surface_data();
        match &data.pair {
            Some(table) => self
                .field
                .elt(table[i * data.points.len() + j] as u64)
                .expect("cached label"),
            None => self.h_points(&data.points[i], &data.points[j]),
        }
    }

    /// The q+1 totally isotropic lines through a surface point, each returned
    /// as its q²+1 points in canonical order. Errors on non-isotropic input.
    pub fn ti_lines_through(&self, p: &ProjPoint) -> Result<Vec<PointSet>> {
        if !self.is_isotropic(p) {
            return Err(Error::NotOnSurface);
        }
        let f = &self.field;
        let partners: Vec<ProjPoint> = self
            .surface()
            .iter()
            .copied()
            .filter(|y| y != p && self.h_points(y, p) == f.zero())
            .collect();
        let mut used = std::collections::BTreeSet::new();
        let mut lines = Vec::new();
        for y in &partners {
            if used.contains(y) {
                continue;
            }
            let mut line_pts = vec![*p];
            for t in f.elements() {
                let mut raw = [f.zero(); 4];
                for k in 0..4 {
                    raw[k] = f.add(y.coords()[k], f.mul(t, p.coords()[k]));
                }
                let z = ProjPoint::normalize(f, raw)?;
                used.insert(z);
                line_pts.push(z);
            }
            lines.push(PointSet::from_points(line_pts));
        }
        debug_assert_eq!(lines.len() as u64, f.q() + 1);
        Ok(lines)
    }

    // ---- the standard line and its parametrisation ----

    /// The distinguished point P(0,0,0,1).
    pub fn p_point(&self) -> ProjPoint {
        let f = &self.field;
        ProjPoint::normalize(f, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap()
    }

    /// The distinguished point Q(1,0,0,0).
    pub fn q_point(&self) -> ProjPoint {
        let f = &self.field;
        ProjPoint::normalize(f, [f.one(), f.zero(), f.zero(), f.zero()]).unwrap()
    }

    /// The distinguished point S(1,1,1,1).
    pub fn s_point(&self) -> ProjPoint {
        let f = &self.field;
        ProjPoint::normalize(f, [f.one(); 4]).unwrap()
    }

    /// The totally isotropic line spanned by P and (0,1,ω,0), as a point set.
    pub fn standard_line(&self) -> PointSet {
        let f = &self.field;
        let mut pts = vec![self.p_point()];
        for t in f.elements() {
            pts.push(self.standard_line_point(t));
        }
        PointSet::from_points(pts)
    }

    /// The point (0,1,ω,2t^q) of the standard line, parametrised so that the
    /// partner extraction of the parametrised families reads off directly.
    pub fn standard_line_point(&self, t: Felt) -> ProjPoint {
        let f = &self.field;
        let two_tq = f.mul(f.scalar(2), f.frobenius(t));
        ProjPoint::normalize(f, [f.zero(), f.one(), f.omega(), two_tq]).unwrap()
    }

    /// The correspondence from a totally isotropic line `ell` through `p` to
    /// the set `s`: the line point `p` maps to `p`, and every other line
    /// point maps to its unique collinear partner in `s` minus `p`.
    ///
    /// Errors carry the witness line point when a partner is missing or
    /// ambiguous, and the shared partner when the map fails to be injective.
    pub fn f_ell_map(
        &self,
        s: &PointSet,
        p: &ProjPoint,
        ell: &PointSet,
    ) -> Result<Vec<(ProjPoint, ProjPoint)>> {
        debug_assert!(s.contains(p) && ell.contains(p));
        let f = &self.field;
        let mut pairs = Vec::with_capacity(ell.len());
        let mut seen = std::collections::BTreeSet::new();
        for y in ell.iter() {
            if y == p {
                pairs.push((*y, *p));
                continue;
            }
            let mut partner: Option<ProjPoint> = None;
            for z in s.iter().filter(|z| *z != p) {
                if self.h_points(y, z) == f.zero() {
                    match partner {
                        None => partner = Some(*z),
                        Some(first) => {
                            return Err(Error::AmbiguousCollinearPartner {
                                line_point: *y,
                                first,
                                second: *z,
                            })
                        }
                    }
                }
            }
            let z = partner.ok_or(Error::NoCollinearPartner { line_point: *y })?;
            if !seen.insert(z) {
                return Err(Error::NotInjective { partner: z });
            }
            pairs.push((*y, z));
        }
        Ok(pairs)
    }

    // ---- planes and poles ----

    /// Coefficient vector of the plane through three points, when they span
    /// one (rank 3); `None` otherwise.
    pub fn plane_of(&self, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Option<Vec4> {
        let f = &self.field;
        let u = mat::hyperplane_through(f, &a.coords(), &b.coords(), &c.coords());
        if u.iter().all(|&x| x == f.zero()) {
            None
        } else {
            Some(u)
        }
    }

    /// The pole of a plane under the polarity of the form: the point N with
    /// h(Y,N) = 0 exactly on the plane.
    pub fn pole_of_plane(&self, u: &Vec4) -> Result<ProjPoint> {
        let f = &self.field;
        let inv = mat::mat_inv(f, &self.gram())?;
        // U (N^q)^T = u^T  =>  N = ((U^-1) u)^frobenius, read as a row
        let mut nq = [f.zero(); 4];
        for (i, slot) in nq.iter_mut().enumerate() {
            let mut s = f.zero();
            for k in 0..4 {
                s = f.add(s, f.mul(inv[i][k], u[k]));
            }
            *slot = s;
        }
        ProjPoint::normalize(f, nq.map(|x| f.frobenius(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3() -> Hermitian {
        Hermitian::for_q(3, 1).unwrap()
    }

    fn pt(f: &Field, idx: [u64; 4]) -> ProjPoint {
        ProjPoint::from_indices(f, idx).unwrap()
    }

    #[test]
    fn form_values() {
        let h = h3();
        let f = h.field();
        let p = h.p_point();
        let q = h.q_point();
        assert_eq!(h.h_points(&p, &q), f.one());
        let s = h.s_point();
        assert_eq!(h.h_points(&s, &s), f.zero(), "S is isotropic at q = 3");
        // hermitian symmetry h(X,Y) = h(Y,X)^q on a sample
        for (i, x) in h.surface().iter().step_by(17).enumerate() {
            for y in h.surface().iter().step_by(23).skip(i % 3) {
                assert_eq!(h.h_points(x, y), f.frobenius(h.h_points(y, x)));
            }
        }
    }

    #[test]
    fn gram_matrix_reproduces_the_form() {
        let h = h3();
        let f = h.field();
        let u = h.gram();
        for x in h.surface().iter().step_by(13) {
            for y in h.surface().iter().step_by(19) {
                // X U (Y^q)^T
                let yq = y.coords().map(|c| f.frobenius(c));
                let mut s = f.zero();
                for i in 0..4 {
                    for k in 0..4 {
                        s = f.add(s, f.mul(f.mul(x.coords()[i], u[i][k]), yq[k]));
                    }
                }
                assert_eq!(s, h.h_points(x, y));
            }
        }
    }

    #[test]
    fn isotropy_examples() {
        let h = h3();
        let f = h.field();
        assert!(h.is_isotropic(&h.p_point()));
        assert!(!h.is_isotropic(&pt(f, [1, 0, 0, 1])), "trace(1) = 2 ≠ 0");
        // (1,a,b,c) with trace(c) = N(a) + N(b) is isotropic
        let a = f.elt(4).unwrap();
        let b = f.elt(7).unwrap();
        let target = f.add(f.norm(a), f.norm(b));
        let c = f.elements().find(|&c| f.trace(c) == target).unwrap();
        assert!(h.is_isotropic(&ProjPoint::normalize(f, [f.one(), a, b, c]).unwrap()));
    }

    #[test]
    fn surface_counts() {
        for (p, e, expect) in [(3u64, 1u32, 280usize), (5, 1, 3276), (7, 1, 17200)] {
            let h = Hermitian::for_q(p, e).unwrap();
            assert_eq!(h.surface().len(), expect);
            let q = h.field().q();
            assert_eq!(expect as u64, (q * q + 1) * (q * q * q + 1));
        }
    }

    #[test]
    fn surface_matches_brute_force_filter() {
        let h = h3();
        let f = h.field();
        let mut brute = Vec::new();
        // every point of PG(3,9) by leading-one form
        let mut raws: Vec<[Felt; 4]> = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    raws.push([f.one(), a, b, c]);
                }
            }
        }
        for b in f.elements() {
            for c in f.elements() {
                raws.push([f.zero(), f.one(), b, c]);
            }
        }
        for c in f.elements() {
            raws.push([f.zero(), f.zero(), f.one(), c]);
        }
        raws.push([f.zero(), f.zero(), f.zero(), f.one()]);
        assert_eq!(raws.len(), 820); // (9^4−1)/(9−1)
        for raw in raws {
            let p = ProjPoint::normalize(f, raw).unwrap();
            if h.is_isotropic(&p) {
                brute.push(p);
            }
        }
        brute.sort();
        assert_eq!(brute.as_slice(), h.surface());
        assert!(h.surface().iter().all(|p| h.is_isotropic(p)));
    }

    #[test]
    fn predicates_are_representative_independent() {
        let h = h3();
        let f = h.field();
        for p in h.surface().iter().step_by(29) {
            for scale in f.elements().skip(1) {
                let scaled = p.coords().map(|c| f.mul(scale, c));
                let same = ProjPoint::normalize(f, scaled).unwrap();
                assert_eq!(same, *p);
            }
        }
    }

    #[test]
    fn collinearity() {
        let h = h3();
        let f = h.field();
        let p = h.p_point();
        let q = h.q_point();
        let w = ProjPoint::normalize(f, [f.zero(), f.one(), f.omega(), f.zero()]).unwrap();
        assert!(h.collinear(&p, &w).unwrap());
        assert!(!h.collinear(&p, &q).unwrap());
        assert!(h.collinear(&p, &p).unwrap());
        let off = pt(f, [1, 0, 0, 1]);
        assert_eq!(h.collinear(&p, &off), Err(Error::NotOnSurface));
    }

    #[test]
    fn ti_lines() {
        let h = h3();
        let f = h.field();
        let p = h.p_point();
        let lines = h.ti_lines_through(&p).unwrap();
        assert_eq!(lines.len() as u64, f.q() + 1);
        let standard = h.standard_line();
        assert!(lines.iter().any(|l| l.same_set(&standard)));
        for line in &lines {
            assert_eq!(line.len() as u64, f.q() * f.q() + 1);
            assert!(line.contains(&p));
            for x in line.iter() {
                assert!(h.is_isotropic(x));
                for y in line.iter() {
                    assert_eq!(h.h_points(x, y), f.zero());
                }
            }
        }
        // for a spread of surface points, the union of the TI lines minus the
        // point itself is exactly its collinear partner set
        for base in h.surface().iter().step_by(37).chain([&p]) {
            let lines = h.ti_lines_through(base).unwrap();
            assert_eq!(lines.len() as u64, f.q() + 1);
            let mut union: Vec<ProjPoint> = lines
                .iter()
                .flat_map(|l| l.iter().copied())
                .filter(|x| x != base)
                .collect();
            union.sort();
            union.dedup();
            let partners: Vec<ProjPoint> = h
                .surface()
                .iter()
                .copied()
                .filter(|y| y != base && h.h_points(y, base) == f.zero())
                .collect();
            assert_eq!(union, partners);
        }
        assert_eq!(h.ti_lines_through(&pt(f, [1, 0, 0, 1])), Err(Error::NotOnSurface));
    }

    #[test]
    fn standard_line_parametrisation() {
        let h = h3();
        let f = h.field();
        let line = h.standard_line();
        for t in f.elements() {
            assert!(line.contains(&h.standard_line_point(t)));
        }
        // distinct t give distinct points
        let mut pts: Vec<ProjPoint> = f.elements().map(|t| h.standard_line_point(t)).collect();
        pts.sort();
        pts.dedup();
        assert_eq!(pts.len() as u64, f.order());
    }

    #[test]
    fn f_ell_error_witnesses() {
        let h = h3();
        let f = h.field();
        let p = h.p_point();
        let ell = h.standard_line();
        // a set with two points collinear with the same line point
        let y = h.standard_line_point(f.zero()); // (0,1,ω,0)
        let partners: Vec<ProjPoint> = h
            .surface()
            .iter()
            .copied()
            .filter(|z| !ell.contains(z) && h.h_points(&y, z) == f.zero())
            .take(2)
            .collect();
        let s = PointSet::from_points(vec![p, partners[0], partners[1]]);
        match h.f_ell_map(&s, &p, &ell) {
            Err(Error::AmbiguousCollinearPartner { line_point, .. }) => {
                assert_eq!(line_point, y)
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
        // a set with no partner for some line point
        let lonely = PointSet::from_points(vec![p, partners[0]]);
        assert!(matches!(
            h.f_ell_map(&lonely, &p, &ell),
            Err(Error::NoCollinearPartner { .. })
        ));
    }

    #[test]
    fn pole_of_plane() {
        let h = h3();
        let f = h.field();
        // plane X0 = 0 has functional (1,0,0,0); its pole must satisfy
        // h(Y, N) = 0 exactly when Y0 = 0
        let u = [f.one(), f.zero(), f.zero(), f.zero()];
        let pole = h.pole_of_plane(&u).unwrap();
        for y in h.surface().iter().step_by(7) {
            let on_plane = y.coords()[0] == f.zero();
            assert_eq!(h.h_points(y, &pole) == f.zero(), on_plane);
        }
    }
}
