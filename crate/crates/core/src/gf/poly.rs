//! Univariate polynomials over a [`Field`], with complete factorization.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, Field};

/// Polynomial with coefficients stored low degree first; never has trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    /// The monomial `t`.
    pub fn t(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![0, 1] }
    }

    /// `t - c`.
    pub fn linear(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![field.neg(c), 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        let mut c = self.coeffs.clone();
        self.field.scale(&mut c, inv);
        Poly::new(&self.field, c)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| f.add(*self.coeffs.get(k).unwrap_or(&0), *other.coeffs.get(k).unwrap_or(&0))).collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| f.sub(*self.coeffs.get(k).unwrap_or(&0), *other.coeffs.get(k).unwrap_or(&0))).collect();
        Poly::new(f, c)
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let mut v = self.coeffs.clone();
        self.field.scale(&mut v, c);
        Poly::new(&self.field, v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            f.axpy(&mut out[k..k + other.coeffs.len()], a, &other.coeffs);
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![0; r.len() - dd];
        let inv = f.inv(d.lead());
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            if c != 0 {
                q[k] = c;
                f.axpy(&mut r[k..k + dd + 1], f.neg(c), &d.coeffs);
            }
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let g = self.gcd(other);
        self.mul(other).divrem(&g).0.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| f.mul(a, f.from_int(k as i64))).collect();
        Poly::new(f, c)
    }

    /// `self^n mod m`.
    pub fn powmod(&self, mut n: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            n >>= 1;
        }
        acc
    }

    /// `self^(q^k) mod m` by repeated q-th powering.
    fn frobenius_mod(&self, k: usize, m: &Poly) -> Poly {
        let q = self.field.order() as u64;
        let mut acc = self.rem(m);
        for _ in 0..k {
            acc = acc.powmod(q, m);
        }
        acc
    }

    /// For `self = g(t^p)` returns `g^{1/p}` coefficientwise, i.e. the p-th root.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let c = self.coeffs.iter().step_by(p).map(|&a| f.pth_root(a)).collect();
        Poly::new(f, c)
    }

    fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Whether a monic polynomial of positive degree is irreducible.
    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let fs = self.monic().factor();
                fs.len() == 1 && fs[0].1 == 1
            }
        }
    }

    /// Complete factorization of a nonzero polynomial into monic irreducibles with
    /// multiplicities, sorted by degree then coefficients. The leading coefficient is dropped.
    pub fn factor(&self) -> Vec<(Poly, usize)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (sqf, mult) in self.monic().squarefree_decomposition() {
            for (deg, part) in sqf.distinct_degree() {
                for g in part.equal_degree(deg) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
        // merge equal factors from different squarefree layers (cannot happen, but keep output canonical)
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in out {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        merged
    }

    /// Yun-style squarefree decomposition for a monic polynomial in characteristic p.
    fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let p = f.p() as usize;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (g, m) in self.pth_root().squarefree_decomposition() {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if !z.is_one() {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if !c.is_one() {
            for (g, m) in c.monic().pth_root().squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Vec<(usize, Poly)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut rest = self.clone();
        let t = Poly::t(f);
        let mut h = t.clone();
        let mut deg = 0;
        while let Some(rd) = rest.degree() {
            if rd == 0 {
                break;
            }
            deg += 1;
            if 2 * deg > rd {
                out.push((rd, rest.clone()));
                break;
            }
            h = h.frobenius_mod(1, &rest);
            let g = h.sub(&t).gcd(&rest);
            if !g.is_one() {
                rest = rest.divrem(&g).0;
                h = h.rem(&rest);
                out.push((deg, g));
            }
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus) of a monic squarefree product of
    /// irreducibles of degree `d`.
    fn equal_degree(&self, d: usize) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.clone()];
        }
        let f = &self.field;
        let q = f.order() as u64;
        // seeded from the input so factorization is a pure function
        let seed = self.coeffs.iter().fold(0xcbf29ce484222325u64, |h, &c| (h ^ c as u64).wrapping_mul(0x100000001b3));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let a = Poly::new(f, (0..n).map(|_| rng.gen_range(0..q) as Elem).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if q % 2 == 1 {
                let e = (q.pow(d as u32) - 1) / 2;
                a.powmod(e, self).sub(&Poly::one(f))
            } else {
                // trace map a + a^2 + ... + a^(2^(k d - 1)) with q = 2^k
                let k = f.degree() as usize * d;
                let mut acc = a.rem(self);
                let mut term = acc.clone();
                for _ in 1..k {
                    term = term.mul(&term).rem(self);
                    acc = acc.add(&term);
                }
                acc
            };
            let g = b.gcd(self);
            if let Some(gd) = g.degree() {
                if gd > 0 && gd < n {
                    let h = self.divrem(&g).0.monic();
                    let mut out = g.equal_degree(d);
                    out.extend(h.equal_degree(d));
                    return out;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(f: &Field, fs: &[(Poly, usize)]) -> Poly {
        fs.iter().fold(Poly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m as u64)))
    }

    #[test]
    fn factor_small_examples() {
        let f = Field::prime(3).unwrap();
        let p = Poly::from_ints(&f, &[-1, 0, 1]);
        let fs = p.factor();
        assert_eq!(fs, vec![(Poly::from_ints(&f, &[1, 1]), 1), (Poly::from_ints(&f, &[-1, 1]), 1)]);
        let cube = Poly::from_ints(&f, &[0, 0, 0, 1]);
        assert_eq!(cube.factor(), vec![(Poly::t(&f), 3)]);
    }

    #[test]
    fn factor_inseparable_powers() {
        let f = Field::prime(3).unwrap();
        // (t^2+1)^3 (t+1)^4
        let g = Poly::from_ints(&f, &[1, 0, 1]).pow(3).mul(&Poly::from_ints(&f, &[1, 1]).pow(4));
        let fs = g.factor();
        assert_eq!(product(&f, &fs), g);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(h, m)| h.degree() == Some(2) && *m == 3));
    }

    #[test]
    fn factor_over_extensions_and_char_two() {
        for (p, e) in [(2u16, 1u32), (2, 2), (3, 2), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            let q = f.order() as i64;
            // t^q - t splits into all linear factors
            let mut c = vec![0i64; q as usize + 1];
            c[q as usize] = 1;
            c[1] = -1;
            let g = Poly::from_ints(&f, &c);
            let fs = g.factor();
            assert_eq!(fs.len(), q as usize);
            assert!(fs.iter().all(|(h, m)| h.degree() == Some(1) && *m == 1));
        }
    }

    #[test]
    fn xgcd_bezout() {
        let f = Field::prime(5).unwrap();
        let a = Poly::from_ints(&f, &[1, 2, 0, 1]);
        let b = Poly::from_ints(&f, &[3, 1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
