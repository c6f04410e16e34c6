//! Prime fields and their small extensions.
//!
//! Elements of `F_{p^e}` are encoded as integers `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! standing for the residue class of `c_0 + c_1 t + ... + c_{e-1} t^{e-1}` modulo the
//! field's defining polynomial. Prime-field elements therefore encode identically in
//! every extension.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// A field element in the integer encoding described above.
pub type Elem = u16;

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_ORDER: u32 = 1 << 16;

/// Serializable description of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u16,
    pub e: u32,
    /// Monic defining polynomial, low coefficient first. `[0, 1]` for prime fields.
    pub modulus: Vec<u16>,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u16>,
    /// `exp[k] = t^k`, length `q - 1`. Empty for prime fields.
    exp: Vec<Elem>,
    /// Discrete log of nonzero elements; `log[0]` unused.
    log: Vec<u32>,
    inv: Vec<Elem>,
    /// `floor(2^16 / p)`, for reducing values below `2^16` without division.
    barrett: u16,
    /// Full addition and multiplication tables for extension fields with `q <= 256`.
    add_table: Vec<Elem>,
    mul_table: Vec<Elem>,
}

/// Largest extension field order that gets full arithmetic tables.
const TABLE_ORDER: u32 = 256;

/// A finite field `F_{p^e}` with `p < 2^8` and `p^e <= 2^16`.
///
/// Cheap to clone; all clones share the same lookup tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.e == other.0.e)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `x mod p` for `x < 2^16`, given `m = floor(2^16 / p)`. The quotient estimate is at most
/// one too small, so a single correction suffices. Written in 16-bit lanes so the loops
/// that call it vectorize on baseline x86-64.
#[inline(always)]
fn reduce16(x: u16, p: u16, m: u16) -> u16 {
    let q = ((x as u32 * m as u32) >> 16) as u16;
    let r = x.wrapping_sub(q.wrapping_mul(p));
    let t = r.wrapping_sub(p);
    if (t as i16) < 0 {
        r
    } else {
        t
    }
}

fn pow_u32(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u16) -> Result<Field, FieldError> {
        Field::new(p, 1)
    }

    /// `F_{p^e}` with the canonical defining polynomial (see [`canonical_modulus`]).
    pub fn new(p: u16, e: u32) -> Result<Field, FieldError> {
        let pp = p as u32;
        if !is_prime(pp) || pp >= 256 {
            return Err(FieldError::NotPrime(p as u32));
        }
        if e == 0 {
            return Err(FieldError::BadDegree(e));
        }
        let q = (pp as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(FieldError::TooLarge { p: pp, e });
        };
        let q = q as u32;
        if e == 1 {
            let inv = (0..pp)
                .map(|a| if a == 0 { 0 } else { pow_u32(a as u64, (pp - 2) as u64, pp as u64) as Elem })
                .collect();
            return Ok(Field(Arc::new(Inner {
                p: pp,
                e,
                q,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
                inv,
                barrett: ((1 << 16) / pp) as u16,
                add_table: Vec::new(),
                mul_table: Vec::new(),
            })));
        }
        let (modulus, exp) = canonical_modulus(pp, e);
        let mut log = vec![0u32; q as usize];
        for (k, &a) in exp.iter().enumerate() {
            log[a as usize] = k as u32;
        }
        let mut inv = vec![0 as Elem; q as usize];
        for a in 1..q as usize {
            let l = log[a];
            inv[a] = exp[((q - 1 - l) % (q - 1)) as usize];
        }
        let mut field = Inner {
            p: pp,
            e,
            q,
            modulus,
            exp,
            log,
            inv,
            barrett: ((1 << 16) / pp) as u16,
            add_table: Vec::new(),
            mul_table: Vec::new(),
        };
        if q <= TABLE_ORDER {
            let slow = Field(Arc::new(field));
            let (add_table, mul_table) = (0..q * q)
                .map(|k| {
                    let (a, b) = ((k / q) as Elem, (k % q) as Elem);
                    (slow.add(a, b), slow.mul(a, b))
                })
                .unzip();
            field = Arc::into_inner(slow.0).expect("sole owner");
            field.add_table = add_table;
            field.mul_table = mul_table;
        }
        Ok(Field(Arc::new(field)))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let f = Field::new(spec.p, spec.e)?;
        if f.0.modulus != spec.modulus {
            return Err(FieldError::NonCanonicalModulus);
        }
        Ok(f)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p as u16, e: self.0.e, modulus: self.0.modulus.clone() }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Reduces an integer into the prime subfield.
    #[inline]
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a as u32 + b as u32;
            return if s >= p { (s - p) as Elem } else { s as Elem };
        }
        if !self.0.add_table.is_empty() {
            return self.0.add_table[a as usize * self.0.q as usize + b as usize];
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            return if a == 0 { 0 } else { (p - a as u32) as Elem };
        }
        let mut a = a as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.e {
            let d = (p - a % p) % p;
            out += d * place;
            place *= p;
            a /= p;
        }
        out as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.e == 1 {
            return self.reduce(a * b);
        }
        if !self.0.mul_table.is_empty() {
            return self.0.mul_table[a as usize * self.0.q as usize + b as usize];
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.0.log[a as usize] + self.0.log[b as usize]) % (self.0.q - 1);
        self.0.exp[l as usize]
    }

    /// `x mod p` for a prime field and `x < 2^16`.
    #[inline]
    fn reduce(&self, x: u16) -> Elem {
        reduce16(x, self.0.p as u16, self.0.barrett)
    }

    /// Multiplicative inverse; `inv(0) = 0`.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.0.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: Elem) -> Elem {
        // Frobenius has order e, so its inverse is the (e-1)-fold iterate.
        self.pow(a, (self.0.p as u64).pow(self.0.e - 1))
    }

    /// `dst[k] += c * src[k]` for all `k`.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        if c == 0 {
            return;
        }
        if self.0.e == 1 {
            let (p, m) = (self.0.p as u16, self.0.barrett);
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = reduce16(d.wrapping_add(c.wrapping_mul(s)), p, m);
            }
        } else if !self.0.mul_table.is_empty() {
            let q = self.0.q as usize;
            let mul_row = &self.0.mul_table[c as usize * q..(c as usize + 1) * q];
            let add = &self.0.add_table;
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = add[*d as usize * q + mul_row[s as usize] as usize];
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    /// `Σ a[k] b[k]`.
    #[inline]
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        if self.0.e == 1 {
            let sum: u64 = a.iter().zip(b).map(|(&x, &y)| x as u32 as u64 * y as u64).sum();
            return (sum % self.0.p as u64) as Elem;
        }
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `v[k] *= c`.
    #[inline]
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        if self.0.e == 1 {
            let (p, m) = (self.0.p as u16, self.0.barrett);
            for x in v.iter_mut() {
                *x = reduce16(x.wrapping_mul(c), p, m);
            }
        } else {
            for x in v.iter_mut() {
                *x = self.mul(*x, c);
            }
        }
    }

    /// Coefficients `(c_0, ..., c_{e-1})` of an element over the prime field.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut a = a as u32;
        (0..self.0.e)
            .map(|_| {
                let d = a % self.0.p;
                a /= self.0.p;
                d
            })
            .collect()
    }

    /// Image of the generator `t` of this field's defining polynomial.
    pub fn generator(&self) -> Elem {
        if self.0.e == 1 {
            // Any primitive root would do; the prime field has no `t`.
            return 1;
        }
        self.0.p as Elem
    }

    /// Embedding `F_{p^e} -> F_{p^E}` for `e | E`, given as the table of images.
    pub fn embedding_into(&self, big: &Field) -> Result<Vec<Elem>, FieldError> {
        if self.0.p != big.0.p || !big.0.e.is_multiple_of(self.0.e) {
            return Err(FieldError::NoEmbedding);
        }
        if self.0.e == 1 {
            return Ok((0..self.0.q as Elem).collect());
        }
        // find a root of our defining polynomial inside `big`
        let root = (0..big.0.q as Elem)
            .find(|&a| {
                let mut acc: Elem = 0;
                for &c in self.0.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, a), c as Elem);
                }
                acc == 0
            })
            .ok_or(FieldError::NoEmbedding)?;
        let mut table = Vec::with_capacity(self.0.q as usize);
        for a in 0..self.0.q as Elem {
            let mut acc: Elem = 0;
            for &c in self.digits(a).iter().rev() {
                acc = big.add(big.mul(acc, root), c as Elem);
            }
            table.push(acc);
        }
        Ok(table)
    }
}

/// Lexicographically first monic primitive polynomial of degree `e` over `F_p`,
/// comparing `(c_{e-1}, ..., c_0)`. Returns the polynomial and the power table of `t`.
pub fn canonical_modulus(p: u32, e: u32) -> (Vec<u16>, Vec<Elem>) {
    let q = p.pow(e);
    let top = p.pow(e - 1);
    for code in 0..q {
        let mut lower = vec![0u32; e as usize];
        let mut c = code;
        for slot in lower.iter_mut() {
            *slot = c % p;
            c /= p;
        }
        if lower[0] == 0 {
            continue;
        }
        // multiply-by-t on the integer encoding
        let times_t = |a: u32| -> u32 {
            let lead = a / top;
            let mut shifted = (a % top) * p;
            if lead != 0 {
                let mut place = 1u32;
                let mut out = 0u32;
                for k in 0..e as usize {
                    let d = (shifted / place) % p;
                    let nd = (d + p - (lead * lower[k]) % p) % p;
                    out += nd * place;
                    place *= p;
                }
                shifted = out;
            }
            shifted
        };
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut a = 1u32;
        let mut primitive = true;
        for k in 0..(q - 1) {
            if k > 0 && a == 1 {
                primitive = false;
                break;
            }
            exp.push(a as Elem);
            a = times_t(a);
        }
        if primitive && a == 1 {
            let mut modulus: Vec<u16> = lower.iter().map(|&d| d as u16).collect();
            modulus.push(1);
            return (modulus, exp);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_int(-1), 4);
    }

    #[test]
    fn division_free_reduction_is_exact() {
        for p in (2..256u32).filter(|&p| is_prime(p)) {
            let m = ((1 << 16) / p) as u16;
            for x in 0..p * p {
                assert_eq!(reduce16(x as u16, p as u16, m) as u32, x % p, "p = {p}, x = {x}");
            }
        }
    }

    #[test]
    fn tables_match_slow_arithmetic() {
        let fast = Field::new(3, 4).unwrap();
        let slow = Field::new(3, 6).unwrap();
        assert!(!fast.0.mul_table.is_empty());
        assert!(slow.0.mul_table.is_empty());
        for a in 0..81 {
            for b in 0..81 {
                let via_log = if a == 0 || b == 0 {
                    0
                } else {
                    fast.0.exp[((fast.0.log[a as usize] + fast.0.log[b as usize]) % 80) as usize]
                };
                assert_eq!(fast.mul(a, b), via_log);
                let digitwise: u32 =
                    (0..4).map(|i| ((a / 3u16.pow(i) + b / 3u16.pow(i)) % 3) as u32 * 3u32.pow(i)).sum();
                assert_eq!(fast.add(a, b) as u32, digitwise);
            }
        }
        let mut v = vec![5, 7, 80];
        fast.axpy(&mut v, 2, &[1, 2, 3]);
        assert_eq!(v, vec![fast.add(5, fast.mul(2, 1)), fast.add(7, fast.mul(2, 2)), fast.add(80, fast.mul(2, 3))]);
    }

    #[test]
    fn rejects_composite_and_large() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(257).is_err());
        assert!(Field::new(3, 11).is_err());
    }

    #[test]
    fn extension_field_axioms() {
        for (p, e) in [(2u16, 3u32), (3, 2), (5, 2), (2, 4)] {
            let f = Field::new(p, e).unwrap();
            let q = f.order() as Elem;
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.pow(f.pth_root(a), p as u64), a);
                for b in 0..q {
                    // distributivity against a fixed third element
                    let c = (a + 1) % q;
                    assert_eq!(f.mul(c, f.add(a, b)), f.add(f.mul(c, a), f.mul(c, b)));
                }
            }
        }
    }

    #[test]
    fn canonical_moduli() {
        // t^2 + 2t + 2 is the first primitive quadratic over F_3 in this ordering
        let (m, _) = canonical_modulus(3, 2);
        assert_eq!(m, vec![2, 1, 1]);
        let (m, _) = canonical_modulus(2, 3);
        assert_eq!(m, vec![1, 1, 0, 1]);
    }

    #[test]
    fn embeddings_are_ring_maps() {
        let small = Field::new(3, 2).unwrap();
        let big = Field::new(3, 4).unwrap();
        let emb = small.embedding_into(&big).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(emb[small.mul(a, b) as usize], big.mul(emb[a as usize], emb[b as usize]));
                assert_eq!(emb[small.add(a, b) as usize], big.add(emb[a as usize], emb[b as usize]));
            }
        }
        assert!(small.embedding_into(&Field::new(3, 3).unwrap()).is_err());
    }
}
