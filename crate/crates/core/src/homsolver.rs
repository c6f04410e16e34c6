//! Maps `V -> V ⊗ W` for a cyclic diagram module `V` and a column module `W`, described by
//! binomial coefficients, together with the summand criterion built on them.
//!
//! A graded map `f: V -> V ⊗ W` is fixed by `f(v_00) = Σ_t a_t v_{0,t} ⊗ w_{0,-t}`. The
//! tuple `(a_0 .. a_n)` gives a map exactly when the binomial equations attached to the
//! tops of the columns of `V` vanish.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::SkewDiagram;
use crate::error::HomSolverError;
use crate::gf::{Elem, Field, Mat};
use crate::module::{Action, AlgebraParams, ColumnModuleSpec, Degree, GradedModule};

/// `C(j, l) mod p`, computed digit by digit in base `p`.
pub fn binom_lucas(mut j: u64, mut l: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    while l > 0 {
        let (jd, ld) = (j % p, l % p);
        if ld > jd {
            return 0;
        }
        acc = acc * small_binom(jd, ld, p) % p;
        j /= p;
        l /= p;
    }
    acc as u32
}

/// `C(a, b) mod p` for `b <= a < p`, where the factorials are invertible.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 0..b {
        num = num * (a - k) % p;
        den = den * (k + 1) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `C(j, l) mod p` with `C(j, l) = 0` for negative `l`.
fn binom_signed(j: u64, l: i64, p: u32) -> u32 {
    if l < 0 {
        0
    } else {
        binom_lucas(j, l as u64, p)
    }
}

/// Smallest `e` with `p^e >= x` (zero for `x <= 1`).
pub fn ceil_log(p: u32, x: u64) -> u32 {
    let mut e = 0;
    let mut pow = 1u64;
    while pow < x {
        pow = pow.saturating_mul(p as u64);
        e += 1;
    }
    e
}

/// The straight shape of a cyclic module generated in degree `(0,0)`, read off its blocks.
pub fn cyclic_shape(v: &GradedModule) -> Result<SkewDiagram, HomSolverError> {
    if v.blocks().iter().any(|b| b.dim != 1) || v.dim() == 0 {
        return Err(HomSolverError::NotCyclic);
    }
    let mut columns: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for b in v.blocks() {
        columns.entry(b.degree.i).or_default().push(b.degree.j);
    }
    let min_i = *columns.keys().next().expect("nonempty");
    let min_j = v.blocks().iter().map(|b| b.degree.j).min().expect("nonempty");
    let mut heights = Vec::new();
    for (k, (&i, js)) in columns.iter().enumerate() {
        if i != min_i + k as i32 {
            return Err(HomSolverError::NotCyclic);
        }
        let lo = *js.iter().min().expect("nonempty");
        let hi = *js.iter().max().expect("nonempty");
        if lo != min_j || (hi - lo + 1) as usize != js.len() {
            return Err(HomSolverError::NotCyclic);
        }
        heights.push(js.len() as u32);
    }
    if heights.windows(2).any(|w| w[0] < w[1]) {
        return Err(HomSolverError::NotCyclic);
    }
    // every cell must be reached from the corner
    for b in v.blocks() {
        let d = b.degree;
        for act in [Action::X, Action::Y] {
            if v.dim_at(d + act.step()) == 1 && v.action(act, d).is_some_and(|m| m.is_zero()) {
                return Err(HomSolverError::NotCyclic);
            }
        }
    }
    if (min_i, min_j) != (0, 0) {
        return Err(HomSolverError::NotGeneratedAtOrigin);
    }
    Ok(SkewDiagram::partition(&heights).expect("heights are weakly decreasing"))
}

/// One binomial equation: the top of column `i` sits at row `j`, and `t` indexes the
/// coefficient of `v_{i,j-t} ⊗ w_{0,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationIndex {
    pub i: u32,
    pub j: u32,
    pub t: u32,
}

/// The linear system whose solutions are the graded maps `V -> V ⊗ W`.
#[derive(Clone, Debug)]
pub struct HomSystem {
    pub shape: SkewDiagram,
    pub w: ColumnModuleSpec,
    pub field: Field,
    /// One row per equation, one column per coefficient `a_0 .. a_n`.
    pub matrix: Mat,
    pub equations: Vec<EquationIndex>,
    /// Coefficients `a_t` whose term `v_{0,t} ⊗ w_{0,-t}` vanishes because `t` is past the
    /// top of column 0; they are fixed to zero so solutions match maps one to one.
    pub pinned: Vec<u32>,
}

impl HomSystem {
    pub fn num_coeffs(&self) -> usize {
        self.w.n as usize + 1
    }

    /// Whether `coeffs` satisfies every binomial equation.
    pub fn is_solution(&self, coeffs: &[Elem]) -> bool {
        coeffs.len() == self.num_coeffs() && self.matrix.mul_vec(coeffs).iter().all(|&v| v == 0)
    }

    fn with_pins(&self) -> Mat {
        let n = self.num_coeffs();
        let pins = Mat::from_fn(&self.field, self.pinned.len(), n, |r, c| u16::from(self.pinned[r] as usize == c));
        self.matrix.vstack(&pins)
    }

    /// Reduced basis of the solution space (pinned coordinates are zero).
    pub fn solution_basis(&self) -> Vec<Vec<Elem>> {
        let null = self.with_pins().nullspace();
        if null.is_empty() {
            return null;
        }
        let m = Mat::from_vec(&self.field, null.len(), self.num_coeffs(), null.concat());
        let (r, pivots) = m.rref();
        (0..pivots.len()).map(|k| r.row(k).to_vec()).collect()
    }

    pub fn solution_dim(&self) -> usize {
        self.num_coeffs() - self.with_pins().rank()
    }

    /// Whether some solution has a nonzero last coefficient.
    pub fn last_coeff_free(&self) -> bool {
        let n = self.num_coeffs();
        let pinned = self.with_pins();
        let last = Mat::from_fn(&self.field, 1, n, |_, c| u16::from(c == n - 1));
        pinned.vstack(&last).rank() > pinned.rank()
    }
}

/// Builds the binomial system for `V -> V ⊗ W`.
pub fn build_hom_system(v: &GradedModule, w: ColumnModuleSpec) -> Result<HomSystem, HomSolverError> {
    let shape = cyclic_shape(v)?;
    let field = v.field().clone();
    let p = field.p();
    let n = w.n as usize;
    let m = w.top;
    let mut rows = Vec::new();
    let mut equations = Vec::new();
    for (i, &j) in shape.column_heights().iter().enumerate() {
        for t in 1..=j.min(m) {
            let row: Vec<Elem> =
                (0..=n).map(|k| binom_signed(j as u64, j as i64 - t as i64 - k as i64, p) as Elem).collect();
            rows.push(row);
            equations.push(EquationIndex { i: i as u32, j, t });
        }
    }
    let matrix = Mat::from_vec(&field, rows.len(), n + 1, rows.concat());
    let top = shape.num_rows() as u32;
    let pinned = (top..=w.n).collect();
    Ok(HomSystem { shape, w, field, matrix, equations, pinned })
}

/// The vectors `v_{i,j} = x^i y^j v_00` of a cyclic module, keyed by `(i, j)`.
fn cyclic_vectors(v: &GradedModule) -> BTreeMap<(u32, u32), Vec<Elem>> {
    let x = v.x_matrix();
    let y = v.y_matrix();
    let mut out = BTreeMap::new();
    let mut start = vec![0; v.dim()];
    start[v.block(Degree::ZERO).expect("generator at origin").offset] = 1;
    let mut col = start;
    let mut i = 0;
    while col.iter().any(|&c| c != 0) {
        let mut cur = col.clone();
        let mut j = 0;
        while cur.iter().any(|&c| c != 0) {
            out.insert((i, j), cur.clone());
            cur = y.mul_vec(&cur);
            j += 1;
        }
        col = x.mul_vec(&col);
        i += 1;
    }
    out
}

/// Basis position of `w_{0,q}` in the column module.
fn column_index(w: &GradedModule, q: i64) -> Option<usize> {
    w.block(Degree::new(0, q as i32)).map(|b| b.offset)
}

/// Image `f(v_{i,j})` in `V ⊗ W` of the map with coefficients `coeffs`, via
/// `f(v_{i,j}) = Σ_l a_l Σ_k C(j,k) v_{i,k+l} ⊗ w_{0,j-k-l}`.
pub fn apply_map(
    v: &GradedModule,
    w: ColumnModuleSpec,
    coeffs: &[Elem],
    target: (u32, u32),
) -> Result<Vec<Elem>, HomSolverError> {
    let system = build_hom_system(v, w)?;
    if !system.is_solution(coeffs) {
        return Err(HomSolverError::CoeffsNotASolution);
    }
    let wm = GradedModule::column_module(w, v.params())?;
    let vecs = cyclic_vectors(v);
    let idx = v.tensor_index(&wm);
    Ok(image_of(v, &wm, &vecs, &idx, coeffs, target))
}

fn image_of(
    v: &GradedModule,
    wm: &GradedModule,
    vecs: &BTreeMap<(u32, u32), Vec<Elem>>,
    idx: &crate::module::TensorIndex,
    coeffs: &[Elem],
    (i, j): (u32, u32),
) -> Vec<Elem> {
    let f = v.field();
    let p = f.p();
    let mut out = vec![0; v.dim() * wm.dim()];
    for (l, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for k in 0..=j {
            let b = binom_lucas(j as u64, k as u64, p);
            if b == 0 {
                continue;
            }
            let Some(vv) = vecs.get(&(i, k + l as u32)) else { continue };
            let Some(wi) = column_index(wm, j as i64 - k as i64 - l as i64) else { continue };
            let c = f.mul(a, b as Elem);
            for (u, &e) in vv.iter().enumerate() {
                if e != 0 {
                    let pos = idx.index(u, wi);
                    out[pos] = f.add(out[pos], f.mul(c, e));
                }
            }
        }
    }
    out
}

/// Dense matrix (columns indexed by the basis of `V`) of the map with the given coefficients.
pub fn map_matrix(v: &GradedModule, w: ColumnModuleSpec, coeffs: &[Elem]) -> Result<Mat, HomSolverError> {
    let system = build_hom_system(v, w)?;
    if !system.is_solution(coeffs) {
        return Err(HomSolverError::CoeffsNotASolution);
    }
    let wm = GradedModule::column_module(w, v.params())?;
    let vecs = cyclic_vectors(v);
    let idx = v.tensor_index(&wm);
    let mut columns = vec![Vec::new(); v.dim()];
    for (&(i, j), vec) in &vecs {
        let u = vec.iter().position(|&e| e != 0).expect("nonzero basis vector");
        columns[u] = image_of(v, &wm, &vecs, &idx, coeffs, (i, j));
    }
    Ok(Mat::from_columns(v.field(), v.dim() * wm.dim(), &columns))
}

/// `Σ_k a_k C(j, n+k) mod p`, the weight of row `j`.
pub fn row_weight(coeffs: &[Elem], n: u32, j: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let s = coeffs
        .iter()
        .enumerate()
        .map(|(k, &a)| a as u64 * binom_lucas(j, n as u64 + k as u64, p) as u64 % p64)
        .sum::<u64>();
    (s % p64) as u32
}

/// `Σ_j length(j) · row_weight(j) mod p` over the rows of the diagram.
pub fn rowsum(shape: &SkewDiagram, coeffs: &[Elem], n: u32, p: u32) -> u32 {
    let s: u64 = shape
        .row_lengths()
        .iter()
        .enumerate()
        .map(|(j, &len)| len as u64 % p as u64 * row_weight(coeffs, n, j as u64, p) as u64)
        .sum();
    (s % p as u64) as u32
}

/// `Σ_{j<h} row_weight(j)` evaluated directly.
pub fn column_sum(coeffs: &[Elem], n: u32, h: u64, p: u32) -> u32 {
    let s: u64 = (0..h).map(|j| row_weight(coeffs, n, j, p) as u64).sum();
    (s % p as u64) as u32
}

/// The same sum via the hockey-stick identity: `Σ_k a_k C(h, n+k+1) mod p`.
pub fn hockey_stick(coeffs: &[Elem], n: u32, h: u64, p: u32) -> u32 {
    let s: u64 =
        coeffs.iter().enumerate().map(|(k, &a)| a as u64 * binom_lucas(h, n as u64 + k as u64 + 1, p) as u64).sum();
    (s % p as u64) as u32
}

/// Outcome of the summand test for `W` inside `V ⊗ V*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub h: u64,
    pub n: u32,
    pub g: u32,
    /// `Σ_k a_k C(h, n+k+1) mod p` for the witness solution.
    pub c: u32,
    /// Weighted row sum for the witness solution.
    pub rowsum: u32,
    pub bn_ok: bool,
    pub verdict: bool,
    pub solution_basis: Vec<Vec<Elem>>,
}

/// Decides whether the column `W = (n, n)` splits off `V ⊗ V*` through the pairing of
/// maps `V -> V ⊗ W`. `h` defaults to the height of column 0.
pub fn criterion(v: &GradedModule, w: ColumnModuleSpec, h: Option<u64>) -> Result<CriterionReport, HomSolverError> {
    if w.n != w.top {
        return Err(HomSolverError::PreconditionViolation(format!(
            "the criterion needs a column centred at zero, got n={} top={}",
            w.n, w.top
        )));
    }
    let system = build_hom_system(v, w)?;
    let p = system.field.p();
    let h = h.unwrap_or(system.shape.num_rows() as u64);
    let g = ceil_log(p, h).max(ceil_log(p, w.dim() as u64));
    let basis = system.solution_basis();
    let sums: Vec<u32> = basis.iter().map(|a| rowsum(&system.shape, a, w.n, p)).collect();
    let witness = sums.iter().position(|&s| s != 0).unwrap_or(0);
    let (c, rs) = match basis.get(witness) {
        Some(a) => (hockey_stick(a, w.n, h, p), sums[witness]),
        None => (0, 0),
    };
    let bn_ok = system.last_coeff_free();
    Ok(CriterionReport { h, n: w.n, g, c, rowsum: rs, bn_ok, verdict: bn_ok && rs != 0, solution_basis: basis })
}

/// The composite `W -> V ⊗ V* -> W` built from the maps with coefficients `a` and `b`
/// through evaluation and coevaluation, as explicit matrices.
#[derive(Clone, Debug)]
pub struct PairingComposite {
    /// `W -> V ⊗ V*`, columns indexed by the basis of `W`.
    pub into: Mat,
    /// `V ⊗ V* -> W`.
    pub out: Mat,
    /// The scalar by which `out ∘ into` acts on `W`.
    pub scalar: Elem,
}

/// Builds the pairing composite for `W = (n, n)`, identifying `W* ≅ W` by
/// `w_{0,-t} <-> (-1)^{n-t} w^{0,t}`.
pub fn pairing_composite(
    v: &GradedModule,
    w: ColumnModuleSpec,
    a: &[Elem],
    b: &[Elem],
) -> Result<PairingComposite, HomSolverError> {
    let wm = GradedModule::column_module(w, v.params())?;
    let fa = map_matrix(v, w, a)?;
    let gb = map_matrix(v, w, b)?;
    let field = v.field().clone();
    let vd = v.dual();
    let vw = v.tensor_index(&wm);
    let vv = v.tensor_index(&vd);
    let dual_pos: Vec<usize> = v
        .blocks()
        .iter()
        .flat_map(|blk| {
            let off = vd.block(-blk.degree).expect("dual block").offset;
            (0..blk.dim).map(move |k| off + k)
        })
        .collect();
    let nv = v.dim();
    let nt = nv * nv;
    let nw = wm.dim();
    let n = w.n as i64;
    let mut into = Mat::zeros(&field, nt, nw);
    for t in -n..=n {
        // column of w_{0,-t}; pairing with it reads the w_{0,t} coefficient
        let src = column_index(&wm, -t).expect("column degree");
        let paired = column_index(&wm, t).expect("column degree");
        let sign = if (n - t) % 2 == 0 { 1 } else { field.neg(1) };
        for bi in 0..nv {
            for u in 0..nv {
                let e = fa.get(vw.index(u, paired), bi);
                if e != 0 {
                    let r = vv.index(u, dual_pos[bi]);
                    into.set(r, src, field.add(into.get(r, src), field.mul(sign, e)));
                }
            }
        }
    }
    let mut out = Mat::zeros(&field, nw, nt);
    for u in 0..nv {
        for bi in 0..nv {
            let c = vv.index(u, dual_pos[bi]);
            for wq in 0..nw {
                let e = gb.get(vw.index(bi, wq), u);
                if e != 0 {
                    out.set(wq, c, field.add(out.get(wq, c), e));
                }
            }
        }
    }
    let comp = out.mul(&into);
    let base = column_index(&wm, -n).expect("generator");
    let scalar = comp.get(base, base);
    Ok(PairingComposite { into, out, scalar })
}

/// Residue class of a height relative to `h` modulo `p^g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residue {
    Zero,
    H,
}

fn residue(x: u64, h: u64, modulus: u64) -> Option<Residue> {
    let r = x % modulus;
    if r == 0 {
        Some(Residue::Zero)
    } else if r == h % modulus {
        Some(Residue::H)
    } else {
        None
    }
}

/// `length · Σ_{j1 <= j < j2} row_weight(j) mod p`, summed directly.
pub fn block_sum(j1: u64, j2: u64, length: u64, coeffs: &[Elem], n: u32, p: u32) -> u32 {
    let s: u64 = (j1..j2).map(|j| row_weight(coeffs, n, j, p) as u64).sum();
    ((s % p as u64) * (length % p as u64) % p as u64) as u32
}

/// Closed form for [`block_sum`] over blocks whose ends are `0` or `h` modulo `p^g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSumForm {
    pub h: u64,
    pub g: u32,
    pub p: u32,
    /// `Σ_{j<h} row_weight(j)`.
    pub c: u32,
    /// `Σ_{j<p^g} row_weight(j) = Σ_k a_k C(p^g, n+k+1)`. Zero when `2n+1 < p^g`;
    /// at `2n+1 = p^g` it is `a_n`, since `C(p^g, p^g) = 1`.
    pub period: u32,
}

impl BlockSumForm {
    /// Requires `2n+1 <= p^g` so that row weights are `p^g`-periodic.
    pub fn new(coeffs: &[Elem], n: u32, h: u64, g: u32, p: u32) -> Option<Self> {
        let modulus = (p as u64).checked_pow(g)?;
        if 2 * n as u64 + 1 > modulus || h > modulus {
            return None;
        }
        let c = hockey_stick(coeffs, n, h, p);
        let period = hockey_stick(coeffs, n, modulus, p);
        Some(Self { h, g, p, c, period })
    }

    /// Zero when the residues agree, `c·length` going from `0` to `h` and `-c·length`
    /// going back, plus `period·length` for every full period crossed. `None` when an end
    /// is neither `0` nor `h` modulo `p^g`.
    pub fn predict(&self, j1: u64, j2: u64, length: u64) -> Option<u32> {
        let modulus = (self.p as u64).pow(self.g);
        let partial = |j: u64| {
            residue(j, self.h, modulus).map(|r| match r {
                Residue::Zero => 0,
                Residue::H => self.c as i64,
            })
        };
        let periods = (j2 / modulus) as i64 - (j1 / modulus) as i64;
        let s = periods * self.period as i64 + partial(j2)? - partial(j1)?;
        let p = self.p as i64;
        Some((s.rem_euclid(p) * (length % self.p as u64) as i64 % p) as u32)
    }
}

/// Both sides of the row-sum identity for a family diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowsumLedger {
    /// `Σ_j length(j) · row_weight(j) mod p`.
    pub lhs: u32,
    /// Signed sum of `rowlength` over descending columns, reduced mod `p`.
    pub rhs_factor: u32,
    /// The same signed sum as an integer.
    pub rhs_factor_int: i64,
    pub c: u32,
    /// `Σ_j length(j) mod p^g` (the dimension).
    pub length_total_mod: u64,
    /// `h · rhs_factor_int mod p^g`.
    pub h_times_rhs_mod: u64,
}

impl RowsumLedger {
    pub fn identity_holds(&self, p: u32) -> bool {
        self.lhs as u64 == self.c as u64 * self.rhs_factor as u64 % p as u64
    }

    pub fn congruence_holds(&self) -> bool {
        self.length_total_mod == self.h_times_rhs_mod
    }
}

/// Splits the weighted row sum of `shape` into the blocks of equal-length rows.
///
/// Each descending column `i` owns the rows from the height of the next descending column
/// (zero if none) up to its own height; they all have length `rowlength(i)`. A block
/// contributes `+rowlength(i)` when its ends are `0 -> h` modulo `p^g`, `-rowlength(i)` for
/// `h -> 0`, and nothing otherwise.
pub fn rowsum_ledger(
    shape: &SkewDiagram,
    coeffs: &[Elem],
    n: u32,
    h: u64,
    g: u32,
    p: u32,
) -> Result<RowsumLedger, HomSolverError> {
    let modulus = (p as u64).pow(g);
    let heights = shape.column_heights();
    if heights.iter().any(|&x| residue(x as u64, h, modulus).is_none()) {
        return Err(HomSolverError::ColumnResidueViolation { h, modulus });
    }
    let stats = shape.stats();
    let desc: Vec<usize> = stats.descending.iter().copied().collect();
    let mut signed: i64 = 0;
    for (k, &i) in desc.iter().enumerate() {
        let j2 = heights[i] as u64;
        let j1 = desc.get(k + 1).map_or(0, |&nx| heights[nx] as u64);
        let len = stats.rowlength[&i] as i64;
        match (residue(j1, h, modulus), residue(j2, h, modulus)) {
            (Some(Residue::Zero), Some(Residue::H)) if !h.is_multiple_of(modulus) => signed += len,
            (Some(Residue::H), Some(Residue::Zero)) if !h.is_multiple_of(modulus) => signed -= len,
            _ => {}
        }
    }
    let lhs = rowsum(shape, coeffs, n, p);
    let c = hockey_stick(coeffs, n, h, p);
    let rhs_factor = signed.rem_euclid(p as i64) as u32;
    let total: u64 = shape.row_lengths().iter().map(|&l| l as u64).sum();
    Ok(RowsumLedger {
        lhs,
        rhs_factor,
        rhs_factor_int: signed,
        c,
        length_total_mod: total % modulus,
        h_times_rhs_mod: (h as i128 * signed as i128).rem_euclid(modulus as i128) as u64,
    })
}

/// Evidence that a column `W` splits off `V ⊗ V*` for one family diagram `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummandCheck {
    pub criterion: CriterionReport,
    pub ledger: RowsumLedger,
    /// Multiplicity of `W` in `V ⊗ V*` found by the decomposer, when it was run.
    pub decomposition_multiplicity: Option<usize>,
}

impl FamilySummandCheck {
    pub fn holds(&self) -> bool {
        self.criterion.verdict && self.decomposition_multiplicity.is_none_or(|m| m > 0)
    }
}

/// Checks that `W` splits off `V ⊗ V*` for a family diagram `V` whose columns are `0` or
/// `h` modulo `p^g`, given that it splits off `V_h ⊗ V_h*`. When `dim(V)^2 <= decompose_cap`
/// the decomposer confirms the summand independently.
pub fn check_family_summand(
    v_h: &GradedModule,
    w: ColumnModuleSpec,
    v: &GradedModule,
    decompose_cap: usize,
) -> Result<FamilySummandCheck, HomSolverError> {
    let column = cyclic_shape(v_h)?;
    if column.num_columns() != 1 {
        return Err(HomSolverError::PreconditionViolation("V_h must be a single column".into()));
    }
    let h = column.num_rows() as u64;
    let base = criterion(v_h, w, Some(h))?;
    if !base.verdict {
        return Err(HomSolverError::PreconditionViolation("W is not detected as a summand of V_h ⊗ V_h*".into()));
    }
    let shape = cyclic_shape(v)?;
    let p = v.field().p();
    if (shape.size() as u64).is_multiple_of(p as u64) {
        return Err(HomSolverError::PreconditionViolation(format!("dim V = {} is divisible by {p}", shape.size())));
    }
    let modulus = (p as u64).pow(ceil_log(p, h).max(ceil_log(p, w.dim() as u64)));
    if let Some(bad) = shape.column_heights().iter().find(|&&x| residue(x as u64, h, modulus).is_none()) {
        return Err(HomSolverError::PreconditionViolation(format!(
            "column of height {bad} is neither 0 nor {h} modulo {modulus}"
        )));
    }
    let report = criterion(v, w, Some(h))?;
    let witness = report
        .solution_basis
        .iter()
        .find(|a| rowsum(&shape, a, w.n, p) != 0)
        .or(report.solution_basis.first())
        .cloned()
        .unwrap_or_else(|| vec![0; w.n as usize + 1]);
    let ledger = rowsum_ledger(&shape, &witness, w.n, h, report.g, p)?;
    let decomposition_multiplicity = if v.dim() * v.dim() <= decompose_cap {
        let wm = GradedModule::column_module(w, v.params())?;
        let m = v.tensor(&v.dual())?;
        Some(crate::decompose::summand_multiplicity(&wm, &m)?)
    } else {
        None
    };
    Ok(FamilySummandCheck { criterion: report, ledger, decomposition_multiplicity })
}

/// Which way the family condition is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyVariant {
    /// Column heights are `0` or `h` modulo `p^g`.
    Columns,
    /// Row lengths are `0` or `h` modulo `p^g` (the transpose of a column diagram).
    Rows,
}

/// A random straight diagram with columns in `{0, h} + p^g Z`, between one and
/// `max_columns` columns, total size coprime to `p` and at most `max_dim`, with the smallest
/// algebra parameters that fit it. The rows variant transposes the result.
pub fn family_diagram<R: Rng>(
    rng: &mut R,
    p: u32,
    h: u64,
    g: u32,
    max_columns: usize,
    max_dim: u64,
    variant: FamilyVariant,
) -> (SkewDiagram, AlgebraParams) {
    let modulus = (p as u64).pow(g);
    let allowed: Vec<u64> = (1..=max_dim).filter(|&x| x % modulus == 0 || x % modulus == h % modulus).collect();
    loop {
        let ncols = rng.gen_range(1..=max_columns);
        let mut heights: Vec<u64> = (0..ncols).map(|_| *allowed.choose(rng).expect("nonempty")).collect();
        heights.sort_unstable_by(|a, b| b.cmp(a));
        let total: u64 = heights.iter().sum();
        if total > max_dim || total.is_multiple_of(p as u64) {
            continue;
        }
        let heights: Vec<u32> = heights.iter().map(|&x| x as u32).collect();
        let d = SkewDiagram::partition(&heights).expect("sorted heights");
        let d = match variant {
            FamilyVariant::Columns => d,
            FamilyVariant::Rows => d.transpose().expect("straight shapes transpose"),
        };
        let s = ceil_log(p, d.num_rows() as u64);
        let r = ceil_log(p, d.num_columns() as u64);
        let params = AlgebraParams::new(p as u16, r, s).expect("valid parameters");
        return (d, params);
    }
}
