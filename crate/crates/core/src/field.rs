//! Table-driven arithmetic in GF(q²) with its distinguished index-2 subfield GF(q).
//!
//! A [`Field`] is GF(p^{2e}) built once from a canonical defining polynomial;
//! every element is identified by its coefficient label in `[0, q²)` (the
//! little-endian base-p encoding of its coordinate vector over GF(p)), so
//! labels agree across runs and across implementations that pick the same
//! polynomial. Multiplication, inversion and addition are O(1) via
//! discrete-log / Zech-logarithm tables.
//!
//! The relative maps to GF(q) are `trace(x) = x + x^q`, `norm(x) = x^{q+1}`,
//! and the Frobenius `x ↦ x^q` fixes exactly the subfield.

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Table-size cap: q² ≤ 2²⁰.
pub const MAX_ORDER: u128 = 1 << 20;

const LOG_ZERO: u32 = u32::MAX;
const ZECH_ZERO: u32 = u32::MAX;

/// An element of GF(q²), identified by its canonical label.
///
/// Elements are plain 8-byte values; all arithmetic goes through the owning
/// [`Field`]. Two elements are equal iff their labels (and fields) are equal.
/// Ordering is by label, which is the canonical element order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Felt {
    pub(crate) idx: u32,
    pub(crate) fid: u32,
}

impl Felt {
    /// Canonical integer label in `[0, q²)`.
    pub fn index(self) -> u32 {
        self.idx
    }
}

/// Construction parameters of a field: characteristic, exponent and the
/// defining polynomial for GF(q²) = GF(p)[x]/(f).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u64,
    pub e: u32,
    /// Monic irreducible of degree 2e over GF(p); coefficients in ascending
    /// degree order, so `irreducible[2e] == 1`.
    pub irreducible: Vec<u64>,
}

/// GF(p^{2e}) with all operation tables built at construction.
///
/// Immutable after construction and safe to share across threads.
pub struct Field {
    id: u32,
    params: FieldParams,
    q: u64,
    q2: u64,
    /// dlog of each nonzero label; `LOG_ZERO` for the zero element.
    log: Vec<u32>,
    /// `exp[k] = label of g^k` for k in [0, 2(q²−1)), doubled to skip a mod.
    exp: Vec<u32>,
    /// `zech[k] = dlog(1 + g^k)`, or `ZECH_ZERO` when 1 + g^k = 0.
    zech: Vec<u32>,
    /// Frobenius table: label of x^q per label.
    frob: Vec<u32>,
    /// dlog of −1, i.e. (q²−1)/2.
    neg_shift: u32,
    /// Least-label element with norm −1 (the ω of the parametrised families).
    omega: u32,
    /// Least-label nonzero element of trace zero (the {1, ξ} basis element).
    trace_zero_unit: u32,
    /// All labels x with x + x^q = 2 x^{q+1}, ascending.
    trace_eq_double_norm: Vec<u32>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.params.p)
            .field("e", &self.params.e)
            .field("irreducible", &self.params.irreducible)
            .finish()
    }
}

// ---- polynomial helpers over GF(p), used only during construction ----

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Degree of a coefficient vector, treating the zero polynomial as degree 0.
fn poly_degree(a: &[u64]) -> usize {
    a.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = poly_degree(m);
    let mut r = a.to_vec();
    while poly_degree(&r) >= dm && r.iter().any(|&c| c != 0) {
        let dr = poly_degree(&r);
        if dr < dm {
            break;
        }
        let lead = r[dr];
        let shift = dr - dm;
        for k in 0..=dm {
            let sub = (lead * m[k]) % p;
            r[k + shift] = (r[k + shift] + p * p - sub) % p;
        }
    }
    r.truncate(dm.max(1));
    r.resize(dm.max(1), 0);
    r
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=half the degree.
/// Exhaustive and exact at desk scale.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = poly_degree(f);
    if d == 0 {
        return false;
    }
    for dd in 1..=(d / 2) {
        // enumerate monic divisor candidates of degree dd
        let count = p.pow(dd as u32);
        for n in 0..count {
            let mut g = vec![0u64; dd + 1];
            let mut m = n;
            for c in g.iter_mut().take(dd) {
                *c = m % p;
                m /= p;
            }
            g[dd] = 1;
            if poly_is_zero(&poly_rem(p, f, &g)) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible of degree `d` over GF(p),
/// scanning non-leading coefficient vectors in little-endian label order.
fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    let count = p.checked_pow(d as u32).expect("desk-scale field");
    for n in 0..count {
        let mut f = vec![0u64; d + 1];
        let mut m = n;
        for c in f.iter_mut().take(d) {
            *c = m % p;
            m /= p;
        }
        f[d] = 1;
        if poly_is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over GF(p)")
}

fn coeffs_to_label(p: u64, a: &[u64]) -> u64 {
    let mut label = 0u64;
    for &c in a.iter().rev() {
        label = label * p + c;
    }
    label
}

fn label_to_coeffs(p: u64, deg: usize, mut label: u64) -> Vec<u64> {
    let mut out = vec![0u64; deg];
    for c in out.iter_mut() {
        *c = label % p;
        label /= p;
    }
    out
}

impl Field {
    /// Build GF(p^{2e}) with the canonical (lexicographically least)
    /// defining polynomial.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let q2 = (p as u128).checked_pow(2 * e).ok_or(Error::FieldTooLarge(u128::MAX))?;
        if q2 > MAX_ORDER {
            return Err(Error::FieldTooLarge(q2));
        }
        let irreducible = least_irreducible(p, 2 * e as usize);
        Self::with_irreducible(p, e, irreducible)
    }

    /// Build GF(p^{2e}) from an explicit defining polynomial. The polynomial
    /// is validated (monic, degree 2e, irreducible) before any table work.
    pub fn with_irreducible(p: u64, e: u32, irreducible: Vec<u64>) -> Result<Field> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let deg = 2 * e as usize;
        let q2_128 = (p as u128).pow(2 * e);
        if q2_128 > MAX_ORDER {
            return Err(Error::FieldTooLarge(q2_128));
        }
        if irreducible.len() != deg + 1
            || irreducible[deg] != 1
            || irreducible.iter().any(|&c| c >= p)
        {
            return Err(Error::BadPolynomialDegree {
                expected: deg,
                got: poly_degree(&irreducible),
            });
        }
        if !poly_is_irreducible(p, &irreducible) {
            return Err(Error::ReduciblePolynomial { p });
        }

        let q2 = q2_128 as u64;
        let q = p.pow(e);
        let n = (q2 - 1) as usize;

        // Find the least-label multiplicative generator, then fill exp/log.
        let mul = |a: u64, b: u64| -> u64 {
            let pa = label_to_coeffs(p, deg, a);
            let pb = label_to_coeffs(p, deg, b);
            let prod = poly_rem(p, &poly_mul(p, &pa, &pb), &irreducible);
            coeffs_to_label(p, &prod)
        };
        let mut log = vec![LOG_ZERO; q2 as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut generator_found = false;
        for cand in 2..q2 {
            let mut seen = 1usize;
            let mut x = cand;
            while x != 1 {
                x = mul(x, cand);
                seen += 1;
                if seen > n {
                    break;
                }
            }
            if seen == n {
                let mut x = 1u64;
                for (k, slot) in exp.iter_mut().take(n).enumerate() {
                    *slot = x as u32;
                    log[x as usize] = k as u32;
                    x = mul(x, cand);
                }
                generator_found = true;
                break;
            }
        }
        assert!(generator_found, "every finite field has a generator");
        for k in 0..n {
            exp[n + k] = exp[k];
        }

        // Zech logarithms: zech[k] = dlog(1 + g^k), sentinel when zero.
        let add_labels = |a: u64, b: u64| -> u64 {
            let pa = label_to_coeffs(p, deg, a);
            let pb = label_to_coeffs(p, deg, b);
            let sum: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
            coeffs_to_label(p, &sum)
        };
        let mut zech = vec![0u32; n];
        for (k, z) in zech.iter_mut().enumerate() {
            let s = add_labels(1, exp[k] as u64);
            *z = if s == 0 { ZECH_ZERO } else { log[s as usize] };
        }

        // Frobenius x ↦ x^q.
        let mut frob = vec![0u32; q2 as usize];
        for label in 1..q2 {
            let k = log[label as usize] as u64;
            frob[label as usize] = exp[((k * q) % n as u64) as usize];
        }

        // Field identity is a content hash of the parameters, so elements of
        // two Field instances built from the same descriptor interoperate.
        let id = {
            let mut hasher = std::collections::hash_map::DefaultHasher::new();
            (p, e, &irreducible).hash(&mut hasher);
            hasher.finish() as u32
        };
        let mut field = Field {
            id,
            params: FieldParams { p, e, irreducible },
            q,
            q2,
            log,
            exp,
            zech,
            frob,
            neg_shift: (n / 2) as u32,
            omega: 0,
            trace_zero_unit: 0,
            trace_eq_double_norm: Vec::new(),
        };

        // Distinguished elements, all least-label for reproducibility.
        let minus_one = field.neg(field.one());
        field.omega = (0..q2)
            .find(|&i| {
                let x = field.felt(i as u32);
                x != field.zero() && field.norm(x) == minus_one
            })
            .expect("norm is onto GF(q)*") as u32;
        field.trace_zero_unit = (1..q2)
            .find(|&i| field.trace(field.felt(i as u32)) == field.zero())
            .expect("trace has a nonzero kernel") as u32;
        let two = field.add(field.one(), field.one());
        field.trace_eq_double_norm = (0..q2)
            .filter(|&i| {
                let x = field.felt(i as u32);
                field.trace(x) == field.mul(two, field.norm(x))
            })
            .map(|i| i as u32)
            .collect();

        Ok(field)
    }

    fn felt(&self, idx: u32) -> Felt {
        Felt { idx, fid: self.id }
    }

    fn check(&self, a: Felt) {
        assert!(
            a.fid == self.id,
            "element of field #{} used with field #{} (GF({}^{}))",
            a.fid,
            self.id,
            self.params.p,
            2 * self.params.e
        );
    }

    // ---- parameters ----

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn e(&self) -> u32 {
        self.params.e
    }

    /// Subfield order q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Field order q².
    pub fn order(&self) -> u64 {
        self.q2
    }

    // ---- element construction ----

    pub fn zero(&self) -> Felt {
        self.felt(0)
    }

    pub fn one(&self) -> Felt {
        self.felt(1)
    }

    /// Element by canonical label.
    pub fn elt(&self, idx: u64) -> Result<Felt> {
        if idx < self.q2 {
            Ok(self.felt(idx as u32))
        } else {
            Err(Error::ElementOutOfRange { idx, order: self.q2 })
        }
    }

    /// Embedding of the prime field: `scalar(k)` is k·1.
    pub fn scalar(&self, k: u64) -> Felt {
        self.felt((k % self.params.p) as u32)
    }

    /// Element from its coordinate vector over GF(p) (ascending degree).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Felt> {
        let deg = 2 * self.params.e as usize;
        if coeffs.len() != deg {
            return Err(Error::BadCoefficientVector { expected: deg, got: coeffs.len() });
        }
        if coeffs.iter().any(|&c| c >= self.params.p) {
            return Err(Error::ElementOutOfRange { idx: coeffs_to_label(self.params.p, coeffs), order: self.q2 });
        }
        Ok(self.felt(coeffs_to_label(self.params.p, coeffs) as u32))
    }

    /// Coordinate vector over GF(p), ascending degree.
    pub fn coeffs(&self, a: Felt) -> Vec<u64> {
        self.check(a);
        label_to_coeffs(self.params.p, 2 * self.params.e as usize, a.idx as u64)
    }

    /// All q² elements in canonical label order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.q2).map(move |i| self.felt(i as u32))
    }

    /// The q subfield elements in canonical label order.
    pub fn subfield_elements(&self) -> impl Iterator<Item = Felt> + '_ {
        self.elements().filter(move |&x| self.in_subfield(x))
    }

    // ---- arithmetic ----

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        self.check(a);
        self.check(b);
        if a.idx == 0 {
            return b;
        }
        if b.idx == 0 {
            return a;
        }
        let (la, lb) = (self.log[a.idx as usize], self.log[b.idx as usize]);
        // a + b = g^la (1 + g^(lb-la)); la + zech < 2(q²−1), covered by exp
        let n = (self.q2 - 1) as u32;
        let d = (lb + n - la) % n;
        let z = self.zech[d as usize];
        if z == ZECH_ZERO {
            return self.zero();
        }
        self.felt(self.exp[(la + z) as usize])
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        self.check(a);
        if a.idx == 0 {
            return a;
        }
        let la = self.log[a.idx as usize];
        self.felt(self.exp[(la + self.neg_shift) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        self.check(a);
        self.check(b);
        if a.idx == 0 || b.idx == 0 {
            return self.zero();
        }
        let (la, lb) = (self.log[a.idx as usize], self.log[b.idx as usize]);
        self.felt(self.exp[(la + lb) as usize])
    }

    /// Multiplicative inverse. Errors on zero or a mixed-field operand.
    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.fid != self.id {
            return Err(Error::MixedFields);
        }
        if a.idx == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = (self.q2 - 1) as u32;
        let la = self.log[a.idx as usize];
        Ok(self.felt(self.exp[((n - la) % n) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Felt, mut n: u64) -> Felt {
        self.check(a);
        if a.idx == 0 {
            return if n == 0 { self.one() } else { self.zero() };
        }
        n %= self.q2 - 1;
        let la = self.log[a.idx as usize] as u64;
        self.felt(self.exp[((la * n) % (self.q2 - 1)) as usize])
    }

    // ---- the maps to the subfield ----

    /// Frobenius x ↦ x^q; an involution fixing exactly GF(q).
    #[inline]
    pub fn frobenius(&self, a: Felt) -> Felt {
        self.check(a);
        self.felt(self.frob[a.idx as usize])
    }

    /// p-power Frobenius x ↦ x^{p^k}, the generic field automorphism.
    pub fn frobenius_p(&self, a: Felt, k: u32) -> Felt {
        self.check(a);
        let n = self.q2 - 1;
        if a.idx == 0 {
            return a;
        }
        let mut power = 1u64;
        for _ in 0..(k % (2 * self.params.e)) {
            power = (power * self.params.p) % n;
        }
        let la = self.log[a.idx as usize] as u64;
        self.felt(self.exp[((la * power) % n) as usize])
    }

    /// Relative trace x + x^q, landing in GF(q).
    #[inline]
    pub fn trace(&self, a: Felt) -> Felt {
        self.add(a, self.frobenius(a))
    }

    /// Relative norm x^{q+1}, landing in GF(q).
    #[inline]
    pub fn norm(&self, a: Felt) -> Felt {
        self.mul(a, self.frobenius(a))
    }

    /// Subfield membership: x ∈ GF(q) iff x = x^q.
    #[inline]
    pub fn in_subfield(&self, a: Felt) -> bool {
        self.check(a);
        self.frob[a.idx as usize] == a.idx
    }

    /// Whether a subfield element is a square *in GF(q)*. Zero counts as a
    /// square. Errors when the argument is outside GF(q).
    pub fn is_square_in_subfield(&self, a: Felt) -> Result<bool> {
        if a.fid != self.id {
            return Err(Error::MixedFields);
        }
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield);
        }
        if a.idx == 0 {
            return Ok(true);
        }
        // GF(q)* is generated by g^(q+1); x = g^(m(q+1)) is a square in GF(q)
        // iff m is even (q odd).
        let la = self.log[a.idx as usize] as u64;
        debug_assert_eq!(la % (self.q + 1), 0);
        Ok((la / (self.q + 1)).is_multiple_of(2))
    }

    /// Deterministic solution of N(x) = a for a ∈ GF(q)*: the least-label x
    /// among the q+1 solutions.
    pub fn solve_norm(&self, a: Felt) -> Result<Felt> {
        if a.fid != self.id {
            return Err(Error::MixedFields);
        }
        if a.idx == 0 {
            return Err(Error::NormOfZero);
        }
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield);
        }
        let n = self.q2 - 1;
        let la = self.log[a.idx as usize] as u64;
        debug_assert_eq!(la % (self.q + 1), 0);
        // N(g^k) = g^(k(q+1)); solutions are k0 + j(q−1), j = 0..q.
        let k0 = la / (self.q + 1);
        let best = (0..=self.q)
            .map(|j| self.exp[((k0 + j * (self.q - 1)) % n) as usize])
            .min()
            .expect("q+1 solutions");
        Ok(self.felt(best))
    }

    // ---- distinguished elements ----

    /// Least-label ω with N(ω) = −1 (so ω^{q+1} + 1 = 0).
    pub fn omega(&self) -> Felt {
        self.felt(self.omega)
    }

    /// Least-label nonzero ξ with trace(ξ) = 0; {1, ξ} is a GF(q)-basis.
    pub fn trace_zero_unit(&self) -> Felt {
        self.felt(self.trace_zero_unit)
    }

    /// The q+1 elements x with x + x^q = 2 x^{q+1}, ascending by label.
    pub fn trace_eq_double_norm(&self) -> Vec<Felt> {
        self.trace_eq_double_norm.iter().map(|&i| self.felt(i)).collect()
    }

    /// Coordinates of `a` in the basis {1, ξ}: a = c0 + c1·ξ with c0, c1 ∈ GF(q).
    pub fn basis_coords(&self, a: Felt) -> (Felt, Felt) {
        // trace(a) = 2 c0; a − c0 = c1 ξ.
        let inv2 = self.inv(self.scalar(2)).expect("q odd");
        let c0 = self.mul(inv2, self.trace(a));
        let c1 = self
            .div(self.sub(a, c0), self.trace_zero_unit())
            .expect("ξ is nonzero");
        debug_assert!(self.in_subfield(c0) && self.in_subfield(c1));
        (c0, c1)
    }

    /// Inverse of [`basis_coords`]: c0 + c1·ξ.
    pub fn from_basis_coords(&self, c0: Felt, c1: Felt) -> Felt {
        self.add(c0, self.mul(c1, self.trace_zero_unit()))
    }

    /// Pretty coefficient form, e.g. `2+x` in GF(9); used in diagnostics.
    pub fn coeff_string(&self, a: Felt) -> String {
        let cs = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &c) in cs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => format!("{c}"),
                (1, _) => var,
                _ => format!("{c}{var}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: schoolbook polynomial arithmetic mod (p, f).
    struct Naive {
        p: u64,
        f: Vec<u64>,
        deg: usize,
    }

    impl Naive {
        fn of(field: &Field) -> Naive {
            Naive {
                p: field.p(),
                f: field.params().irreducible.clone(),
                deg: 2 * field.e() as usize,
            }
        }

        fn add(&self, a: u64, b: u64) -> u64 {
            let pa = label_to_coeffs(self.p, self.deg, a);
            let pb = label_to_coeffs(self.p, self.deg, b);
            let sum: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % self.p).collect();
            coeffs_to_label(self.p, &sum)
        }

        fn mul(&self, a: u64, b: u64) -> u64 {
            let pa = label_to_coeffs(self.p, self.deg, a);
            let pb = label_to_coeffs(self.p, self.deg, b);
            let prod = poly_rem(self.p, &poly_mul(self.p, &pa, &pb), &self.f);
            coeffs_to_label(self.p, &prod)
        }

        fn pow(&self, a: u64, mut n: u64) -> u64 {
            let mut acc = 1u64;
            let mut base = a;
            while n > 0 {
                if n & 1 == 1 {
                    acc = self.mul(acc, base);
                }
                base = self.mul(base, base);
                n >>= 1;
            }
            acc
        }
    }

    fn gf9() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn canonical_polynomial_gf9_is_x2_plus_1() {
        // x² + 1 is the least monic irreducible over GF(3), so the generator
        // x plays the role of i with i² = −1.
        let f = gf9();
        assert_eq!(f.params().irreducible, vec![1, 0, 1]);
    }

    #[test]
    fn matches_naive_oracle_exhaustively() {
        for (p, e) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            let oracle = Naive::of(&f);
            let q2 = f.order();
            for a in 0..q2 {
                let fa = f.elt(a).unwrap();
                assert_eq!(
                    f.frobenius(fa).index() as u64,
                    oracle.pow(a, f.q()),
                    "frobenius mismatch at {a} in GF({p}^{})",
                    2 * e
                );
                for b in 0..q2 {
                    let fb = f.elt(b).unwrap();
                    assert_eq!(f.add(fa, fb).index() as u64, oracle.add(a, b));
                    assert_eq!(f.mul(fa, fb).index() as u64, oracle.mul(a, b));
                }
                if a != 0 {
                    let inv = f.inv(fa).unwrap();
                    assert_eq!(oracle.mul(a, inv.index() as u64), 1);
                }
            }
        }
    }

    #[test]
    fn gf9_hand_values() {
        let f = gf9();
        let i = f.elt(3).unwrap(); // the generator x of GF(9): i² = −1
        let two = f.scalar(2);
        assert_eq!(f.mul(i, i), two, "i·i = 2");
        assert_eq!(f.inv(two).unwrap(), two, "inv(2) = 2 since 2·2 = 4 = 1");
        assert_eq!(f.frobenius(i), f.elt(6).unwrap(), "i^3 = 2i");
        assert_eq!(f.trace(i), f.zero(), "trace(i) = i − i = 0");
        assert_eq!(f.trace(f.one()), two, "trace(1) = 2");
        assert_eq!(f.trace(f.zero()), f.zero());
        assert_eq!(f.frobenius(f.zero()), f.zero());
        assert_eq!(f.frobenius(f.one()), f.one());
        let one_plus_i = f.elt(4).unwrap();
        assert_eq!(f.norm(one_plus_i), two, "(1+i)(1−i) = 2");
        assert_eq!(f.norm(f.one()), f.one());
        assert_eq!(f.norm(f.zero()), f.zero());
    }

    #[test]
    fn identity_and_zero_cases() {
        let f = gf9();
        for a in f.elements() {
            assert_eq!(f.add(a, f.zero()), a);
            assert_eq!(f.mul(a, f.one()), a);
            assert_eq!(f.add(a, f.neg(a)), f.zero());
        }
    }

    #[test]
    fn inversion_of_zero_is_an_error() {
        let f = gf9();
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    #[should_panic(expected = "used with field")]
    fn mixed_field_add_panics() {
        let f = gf9();
        let g = Field::new(5, 1).unwrap();
        let _ = f.add(f.one(), g.one());
    }

    #[test]
    fn mixed_field_inv_is_an_error() {
        let f = gf9();
        let g = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(g.one()), Err(Error::MixedFields));
    }

    #[test]
    fn squares_in_subfield() {
        let f = gf9();
        assert!(!f.is_square_in_subfield(f.scalar(2)).unwrap(), "2 is not a square mod 3");
        assert!(f.is_square_in_subfield(f.zero()).unwrap());
        assert!(f.is_square_in_subfield(f.one()).unwrap());
        let i = f.elt(3).unwrap();
        assert_eq!(f.is_square_in_subfield(i), Err(Error::NotInSubfield));
        // exhaustive cross-check against direct squaring, a few fields
        for (p, e) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            let squares: std::collections::BTreeSet<u32> = f
                .subfield_elements()
                .map(|b| f.mul(b, b).index())
                .collect();
            for a in f.subfield_elements() {
                assert_eq!(
                    f.is_square_in_subfield(a).unwrap(),
                    squares.contains(&a.index()),
                    "squareness mismatch at {} in GF({})",
                    a.index(),
                    f.q()
                );
            }
        }
    }

    #[test]
    fn solve_norm_least_solution() {
        let f = gf9();
        let two = f.scalar(2);
        let x = f.solve_norm(two).unwrap();
        assert_eq!(x, f.elt(4).unwrap(), "least solution of N(x) = 2 is 1+i");
        assert_eq!(f.norm(x), two);
        assert_eq!(f.solve_norm(f.one()).unwrap(), f.one());
        assert_eq!(f.solve_norm(f.zero()), Err(Error::NormOfZero));
        assert_eq!(f.solve_norm(f.elt(3).unwrap()), Err(Error::NotInSubfield));
    }

    #[test]
    fn norm_fibres_have_size_q_plus_1() {
        // every a ∈ GF(q)* has exactly q+1 preimages under the norm
        for (p, e) in [(3u64, 1u32), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            for a in f.subfield_elements().filter(|&a| a != f.zero()) {
                let count = f.elements().filter(|&x| f.norm(x) == a).count() as u64;
                assert_eq!(count, f.q() + 1);
                let least = f.solve_norm(a).unwrap();
                assert_eq!(
                    least,
                    f.elements().find(|&x| f.norm(x) == a).unwrap(),
                    "solve_norm must return the least preimage"
                );
            }
        }
    }

    #[test]
    fn enumerate_with_predicates() {
        let f = gf9();
        let trace_zero: Vec<u32> = f
            .elements()
            .filter(|&x| f.trace(x) == f.zero())
            .map(|x| x.index())
            .collect();
        assert_eq!(trace_zero, vec![0, 3, 6], "kernel of trace is {{0, i, 2i}}");
        assert_eq!(f.elements().count() as u64, f.order());
        let sols: Vec<u32> = f.trace_eq_double_norm().iter().map(|x| x.index()).collect();
        assert_eq!(sols, vec![0, 1, 5, 8], "x + x^q = 2x^{{q+1}} has roots 0, 1, 2+i, 2+2i");
    }

    #[test]
    fn x_solution_count_is_q_plus_1() {
        for (p, e) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            assert_eq!(
                f.trace_eq_double_norm().len() as u64,
                f.q() + 1,
                "q = {}",
                f.q()
            );
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_fixing_the_subfield() {
        let f = Field::new(3, 2).unwrap(); // q = 9
        let fixed = f.elements().filter(|&x| f.frobenius(x) == x).count() as u64;
        assert_eq!(fixed, f.q());
        for a in f.elements() {
            assert_eq!(f.frobenius(f.frobenius(a)), a);
            assert!(f.in_subfield(f.trace(a)));
            assert!(f.in_subfield(f.norm(a)));
            assert_eq!(f.trace(a), f.trace(f.frobenius(a)));
        }
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(5) {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            }
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let f3 = gf9();
        for a in f3.elements() {
            for b in f3.elements() {
                assert_eq!(f3.norm(f3.mul(a, b)), f3.mul(f3.norm(a), f3.norm(b)));
            }
        }
        // randomised at larger q
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(7u64, 1u32), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            for _ in 0..500 {
                let a = f.elt(rng.random_range(0..f.order())).unwrap();
                let b = f.elt(rng.random_range(0..f.order())).unwrap();
                assert_eq!(f.norm(f.mul(a, b)), f.mul(f.norm(a), f.norm(b)));
            }
        }
    }

    #[test]
    fn trace_form_is_nondegenerate() {
        // a ↦ (trace(a), trace(a·ξ)) is injective: the only element with both
        // traces zero is 0.
        for (p, e) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            let w = f.trace_zero_unit();
            let kernel: Vec<u32> = f
                .elements()
                .filter(|&a| f.trace(a) == f.zero() && f.trace(f.mul(a, w)) == f.zero())
                .map(|a| a.index())
                .collect();
            assert_eq!(kernel, vec![0]);
        }
    }

    #[test]
    fn distinguished_elements() {
        let f = gf9();
        assert_eq!(f.omega().index(), 4, "least ω with N(ω) = −1 is 1+i");
        assert_eq!(f.trace_zero_unit().index(), 3, "least nonzero trace-zero element is i");
        assert_eq!(f.norm(f.omega()), f.neg(f.one()));
        for (p, e) in [(5u64, 1u32), (7, 1), (3, 2)] {
            let f = Field::new(p, e).unwrap();
            assert_eq!(f.norm(f.omega()), f.neg(f.one()));
            assert_eq!(f.trace(f.trace_zero_unit()), f.zero());
        }
    }

    #[test]
    fn basis_coords_roundtrip() {
        let f = Field::new(5, 1).unwrap();
        for a in f.elements() {
            let (c0, c1) = f.basis_coords(a);
            assert_eq!(f.from_basis_coords(c0, c1), a);
        }
    }

    #[test]
    fn construction_validation() {
        assert_eq!(Field::new(2, 1).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(Field::new(9, 1).unwrap_err(), Error::NotOddPrime(9));
        assert_eq!(Field::new(3, 0).unwrap_err(), Error::ZeroExponent);
        assert!(matches!(Field::new(3, 7), Err(Error::FieldTooLarge(_))));
        // x² + 2 = (x+1)(x+2) over GF(3)
        assert_eq!(
            Field::with_irreducible(3, 1, vec![2, 0, 1]).unwrap_err(),
            Error::ReduciblePolynomial { p: 3 }
        );
        assert!(matches!(
            Field::with_irreducible(3, 1, vec![1, 0, 0, 1]),
            Err(Error::BadPolynomialDegree { .. })
        ));
    }

    #[test]
    fn serialized_descriptor_roundtrip() {
        let f = Field::new(3, 2).unwrap();
        let json = serde_json::to_string(f.params()).unwrap();
        let params: FieldParams = serde_json::from_str(&json).unwrap();
        let g = Field::with_irreducible(params.p, params.e, params.irreducible).unwrap();
        assert_eq!(g.params(), f.params());
        // element roundtrip through coefficient vectors
        for a in f.elements().step_by(11) {
            let coeffs = f.coeffs(a);
            assert_eq!(g.from_coeffs(&coeffs).unwrap().index(), a.index());
        }
    }
}
