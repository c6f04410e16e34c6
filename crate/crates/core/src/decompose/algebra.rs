//! Finite-dimensional associative algebras given by structure constants, with the
//! Jacobson radical computed by the iterated trace-form refinement that works in
//! positive characteristic.

use crate::error::DecomposeError;
use crate::gf::{Echelon, Elem, Field, Mat};

/// An algebra with basis `b_0 .. b_{n-1}`; `mult[k][j]` holds the coordinates of `b_k b_j`.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    field: Field,
    mult: Vec<Vec<Vec<Elem>>>,
    one: Vec<Elem>,
}

impl AlgebraTable {
    pub fn new(field: Field, mult: Vec<Vec<Vec<Elem>>>, one: Vec<Elem>) -> AlgebraTable {
        AlgebraTable { field, mult, one }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.one.len()
    }

    pub fn one(&self) -> &[Elem] {
        &self.one
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![0; n];
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    f.axpy(&mut out, f.mul(ak, bj), &self.mult[k][j]);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_matrix(&self, a: &[Elem]) -> Mat {
        let n = self.dim();
        let cols: Vec<Vec<Elem>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.mul(a, &e)
            })
            .collect();
        Mat::from_columns(&self.field, n, &cols)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|k| (0..k).all(|j| self.mult[k][j] == self.mult[j][k]))
    }

    /// Basis of the Jacobson radical.
    ///
    /// Works over the prime field: with `A` acting on itself by left multiplication on an
    /// `N`-dimensional `F_p`-space, set `I_{-1} = A` and
    /// `I_i = { a in I_{i-1} : g_i(ab) = 0 for all b }` where
    /// `g_i(a) = (Tr(lift(a)^{p^i}) mod p^{i+1}) / p^i` on integer lifts. Each `g_i` is linear on
    /// `I_{i-1}` and `I_l` with `l = floor(log_p N)` is the radical.
    pub fn radical(&self) -> Result<Vec<Vec<Elem>>, DecomposeError> {
        let f = &self.field;
        let p = f.p() as u64;
        let e = f.degree() as usize;
        let n = self.dim();
        let big_n = n * e;
        if n == 0 {
            return Ok(Vec::new());
        }
        let prime = Field::prime(f.p() as u16)?;
        // Integer regular representation over F_p of the F_p-basis element t^i b_k.
        let basis_elem = |idx: usize| -> Vec<Elem> {
            let mut v = vec![0; n];
            v[idx / e] = (p as u32).pow((idx % e) as u32) as Elem;
            v
        };
        let regular = |a: &[Elem]| -> Vec<Vec<u64>> {
            let mut m = vec![vec![0u64; big_n]; big_n];
            for col in 0..big_n {
                let prod = self.mul(a, &basis_elem(col));
                for (k, &c) in prod.iter().enumerate() {
                    for (i, d) in f.digits(c).into_iter().enumerate() {
                        m[k * e + i][col] = d as u64;
                    }
                }
            }
            m
        };
        let to_field = |v: &[Elem]| -> Vec<Elem> {
            // F_p coordinates (t^i b_k) -> F_q coordinates
            (0..n)
                .map(|k| {
                    (0..e).fold(0 as Elem, |acc, i| {
                        let digit = v[k * e + i] as u64 * (p as u32).pow(i as u32) as u64;
                        f.add(acc, digit as Elem)
                    })
                })
                .collect()
        };
        let mut l = 0;
        while (p as usize).pow(l as u32 + 1) <= big_n {
            l += 1;
        }
        // Current ideal, as F_p-vectors of length N.
        let mut ideal: Vec<Vec<Elem>> = (0..big_n)
            .map(|k| {
                let mut v = vec![0; big_n];
                v[k] = 1;
                v
            })
            .collect();
        for i in 0..=l {
            if ideal.is_empty() {
                break;
            }
            let modulus = p.pow(i as u32 + 1);
            let exponent = p.pow(i as u32);
            let g = |a_fp: &[Elem]| -> Elem {
                let m = regular(&to_field(a_fp));
                let tr = int_matrix_power_trace(&m, exponent, modulus);
                ((tr / exponent) % p) as Elem
            };
            let values: Vec<Elem> = ideal.iter().map(|u| g(u)).collect();
            // Coordinates of u*b in the basis of the current ideal.
            let basis_mat = Mat::from_columns(&prime, big_n, &ideal);
            let (_, piv) = basis_mat.transpose().rref();
            let square = basis_mat.select_rows(&piv);
            let inv = square
                .inverse()
                .ok_or_else(|| DecomposeError::RadicalAlgorithmFailure("ideal basis lost independence".into()))?;
            let mut rows: Vec<Vec<Elem>> = Vec::with_capacity(ideal.len());
            for u in &ideal {
                let uq = to_field(u);
                let row: Vec<Elem> = (0..big_n)
                    .map(|b| {
                        let prod = self.mul(&uq, &basis_elem(b));
                        let fp = from_field(f, &prod, e);
                        let sel: Vec<Elem> = piv.iter().map(|&r| fp[r]).collect();
                        let coords = inv.mul_vec(&sel);
                        prime.dot(&coords, &values)
                    })
                    .collect();
                rows.push(row);
            }
            // a = Σ λ_u u lies in I_i iff λ^T G = 0
            let gmat = Mat::from_columns(&prime, big_n, &rows);
            let lambdas = gmat.nullspace();
            ideal = lambdas
                .iter()
                .map(|lam| {
                    let mut v = vec![0; big_n];
                    for (c, u) in lam.iter().zip(&ideal) {
                        prime.axpy(&mut v, *c, u);
                    }
                    v
                })
                .collect();
        }
        let mut ech = Echelon::new(f, n);
        for v in &ideal {
            ech.insert(to_field(v));
        }
        Ok(ech.sorted_basis())
    }

    /// The quotient by a two-sided ideal given by a basis.
    pub fn quotient(&self, ideal: &[Vec<Elem>]) -> Quotient {
        let n = self.dim();
        let mut ech = Echelon::new(&self.field, n);
        for v in ideal {
            ech.insert(v.clone());
        }
        let mut is_pivot = vec![false; n];
        for &p in ech.pivots() {
            is_pivot[p] = true;
        }
        let complement: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let project = |v: &[Elem]| -> Vec<Elem> {
            let mut w = v.to_vec();
            ech.reduce(&mut w);
            complement.iter().map(|&c| w[c]).collect()
        };
        let mult =
            complement.iter().map(|&a| complement.iter().map(|&b| project(&self.mult[a][b])).collect()).collect();
        let one = project(&self.one);
        Quotient { table: AlgebraTable::new(self.field.clone(), mult, one), complement, ideal: ech }
    }
}

/// `A / I` with basis the images of the standard vectors not hit by pivots of `I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub table: AlgebraTable,
    pub complement: Vec<usize>,
    ideal: Echelon,
}

impl Quotient {
    /// The canonical preimage (zero on pivot coordinates of the ideal).
    pub fn lift(&self, q: &[Elem], ambient: usize) -> Vec<Elem> {
        let mut v = vec![0; ambient];
        for (&c, &x) in self.complement.iter().zip(q) {
            v[c] = x;
        }
        v
    }

    pub fn project(&self, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        self.ideal.reduce(&mut w);
        self.complement.iter().map(|&c| w[c]).collect()
    }
}

fn from_field(f: &Field, v: &[Elem], e: usize) -> Vec<Elem> {
    let mut out = vec![0; v.len() * e];
    for (k, &c) in v.iter().enumerate() {
        for (i, d) in f.digits(c).into_iter().enumerate() {
            out[k * e + i] = d as Elem;
        }
    }
    out
}

/// `Tr(m^exponent) mod modulus` over the integers.
fn int_matrix_power_trace(m: &[Vec<u64>], exponent: u64, modulus: u64) -> u64 {
    let n = m.len();
    let mul = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; n]; n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r][k];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r][c] = (out[r][c] + x * b[k][c]) % modulus;
                }
            }
        }
        out
    };
    let mut acc: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| (r == c) as u64).collect()).collect();
    let mut base: Vec<Vec<u64>> = m.iter().map(|row| row.iter().map(|&x| x % modulus).collect()).collect();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    (0..n).fold(0, |t, k| (t + acc[k][k]) % modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Structure constants of a matrix algebra spanned by the given matrices (assumed closed
    /// under products and containing the identity).
    fn from_matrices(field: &Field, mats: &[Mat]) -> AlgebraTable {
        let n = mats.len();
        let flat: Vec<Vec<Elem>> = mats.iter().map(|m| m.data().to_vec()).collect();
        let len = flat[0].len();
        let basis = Mat::from_columns(field, len, &flat);
        let coords = |m: &Mat| -> Vec<Elem> {
            let sol = basis.solve(m.data());
            sol.particular.expect("closed under products")
        };
        let mult = (0..n).map(|k| (0..n).map(|j| coords(&mats[k].mul(&mats[j]))).collect()).collect();
        let one = coords(&Mat::identity(field, mats[0].rows()));
        AlgebraTable::new(field.clone(), mult, one)
    }

    fn unit(field: &Field, n: usize, r: usize, c: usize) -> Mat {
        Mat::from_fn(field, n, n, |a, b| (a == r && b == c) as Elem)
    }

    #[test]
    fn full_matrix_algebra_is_semisimple() {
        let f = Field::prime(2).unwrap();
        let mats: Vec<Mat> = (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| unit(&f, 2, r, c)).collect();
        let a = from_matrices(&f, &mats);
        assert!(a.radical().unwrap().is_empty());
        assert!(!a.is_commutative());
    }

    #[test]
    fn upper_triangular_radical() {
        let f = Field::prime(3).unwrap();
        let mats = vec![unit(&f, 2, 0, 0), unit(&f, 2, 1, 1), unit(&f, 2, 0, 1)];
        let a = from_matrices(&f, &mats);
        let j = a.radical().unwrap();
        assert_eq!(j, vec![vec![0, 0, 1]]);
        let q = a.quotient(&j);
        assert_eq!(q.table.dim(), 2);
        assert!(q.table.is_commutative());
    }

    #[test]
    fn group_algebra_of_cyclic_p_group() {
        // F_p[C_p]: the plain trace form vanishes identically, yet the radical has codim 1.
        for p in [2u16, 3, 5] {
            let f = Field::prime(p).unwrap();
            let n = p as usize;
            let g = Mat::from_fn(&f, n, n, |r, c| (r == (c + 1) % n) as Elem);
            let mats: Vec<Mat> = (0..n).map(|k| g.pow(k as u64)).collect();
            let a = from_matrices(&f, &mats);
            assert_eq!(a.radical().unwrap().len(), n - 1, "p = {p}");
        }
    }

    #[test]
    fn truncated_polynomials() {
        // F_p[t]/(t^k) for k up to 10, p = 2: radical = (t)
        let f = Field::prime(2).unwrap();
        for k in 1..=10usize {
            let t = Mat::from_fn(&f, k, k, |r, c| (r == c + 1) as Elem);
            let mats: Vec<Mat> = (0..k).map(|i| t.pow(i as u64)).collect();
            let a = from_matrices(&f, &mats);
            assert_eq!(a.radical().unwrap().len(), k - 1, "k = {k}");
        }
    }

    #[test]
    fn product_of_field_and_dual_numbers_over_extension() {
        let f = Field::new(3, 2).unwrap();
        // diag(F, F[t]/t^2) inside 3x3 matrices
        let e0 = unit(&f, 3, 0, 0);
        let e1 = unit(&f, 3, 1, 1).add(&unit(&f, 3, 2, 2));
        let nil = unit(&f, 3, 2, 1);
        let a = from_matrices(&f, &[e0, e1, nil]);
        let j = a.radical().unwrap();
        assert_eq!(j, vec![vec![0, 0, 1]]);
    }

    #[test]
    fn integer_power_trace() {
        let m = vec![vec![1, 1], vec![0, 1]];
        // [[1,3],[0,1]] has trace 2
        assert_eq!(int_matrix_power_trace(&m, 3, 1000), 2);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(int_matrix_power_trace(&m, 2, 7), 2);
    }
}
