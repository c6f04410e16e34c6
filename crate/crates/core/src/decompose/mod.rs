//! Decomposition of graded modules into indecomposable graded summands.
//!
//! Splitting works inside the algebra `E` of degree-preserving endomorphisms. A random
//! element whose minimal polynomial has two coprime factors yields a Fitting idempotent.
//! When sampling finds none, the Jacobson radical of `E` decides: a one-dimensional
//! semisimple quotient certifies indecomposability, a field quotient of degree `e` asks for
//! scalars in `F_{q^e}`, and anything else yields an idempotent modulo the radical that is
//! lifted by Newton iteration.

pub mod algebra;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::SkewDiagram;
use crate::error::DecomposeError;
use crate::gf::{Elem, Field, FieldSpec, Mat, Poly};
use crate::hom::{hom_space, GradedMap, HomSpace};
use crate::module::{Degree, GradedModule};

pub use algebra::{AlgebraTable, Quotient};

/// Tuning knobs for [`decompose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Random endomorphisms tried before falling back to the radical computation.
    pub samples: usize,
    /// Largest extension degree of the prime field allowed.
    pub ext_cap: u32,
    /// Run independent branches on the rayon pool.
    pub parallel: bool,
    /// Largest module dimension accepted; `None` is unbounded.
    pub max_dim: Option<usize>,
}

impl DecomposeOptions {
    /// Fails when a module of dimension `dim` is above `max_dim`.
    pub fn check_size(&self, dim: usize) -> Result<(), DecomposeError> {
        match self.max_dim {
            Some(cap) if dim > cap => Err(DecomposeError::SizeCapExceeded { dim, cap }),
            _ => Ok(()),
        }
    }
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { samples: 32, ext_cap: 4, parallel: true, max_dim: None }
    }
}

/// Degree-zero endomorphism algebra with coordinates and structure constants.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    basis: Vec<GradedMap>,
    /// Flattened positions `(block, row, col)` whose values determine an element.
    positions: Vec<(usize, usize, usize)>,
    /// Maps values at `positions` to coordinates.
    to_coords: Mat,
    field: Field,
}

impl EndAlgebra {
    /// Builds coordinates for the span of `maps` (which must be linearly independent).
    pub fn from_basis(field: &Field, basis: Vec<GradedMap>) -> EndAlgebra {
        let n = basis.len();
        let mut index = Vec::new();
        if let Some(first) = basis.first() {
            for (k, m) in first.blocks.iter().enumerate() {
                if let Some(m) = m {
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            index.push((k, r, c));
                        }
                    }
                }
            }
        }
        let flat: Vec<Vec<Elem>> = basis.iter().map(flatten).collect();
        let len = index.len();
        let rows = Mat::from_vec(field, n, len, flat.concat());
        let (_, pivots) = rows.rref();
        assert_eq!(pivots.len(), n, "endomorphism basis is linearly dependent");
        let square = rows.select_columns(&pivots);
        let to_coords = square.inverse().expect("pivot minor is invertible").transpose();
        let positions = pivots.iter().map(|&p| index[p]).collect();
        EndAlgebra { basis, positions, to_coords, field: field.clone() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GradedMap] {
        &self.basis
    }

    fn entry(m: &GradedMap, (k, r, c): (usize, usize, usize)) -> Elem {
        m.blocks[k].as_ref().map_or(0, |b| b.get(r, c))
    }

    /// Coordinates of an element known to lie in the span.
    pub fn coords(&self, m: &GradedMap) -> Vec<Elem> {
        let v: Vec<Elem> = self.positions.iter().map(|&pos| EndAlgebra::entry(m, pos)).collect();
        self.to_coords.mul_vec(&v)
    }

    pub fn element(&self, coords: &[Elem]) -> GradedMap {
        let mut out = self.basis[0].scaled(0);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.add_scaled(*c, b);
        }
        out
    }

    /// Structure constants for composition: `b_k · b_j = b_k ∘ b_j`.
    pub fn table(&self) -> AlgebraTable {
        let f = &self.field;
        let n = self.dim();
        let mult = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let v: Vec<Elem> = self
                            .positions
                            .iter()
                            .map(|&(blk, r, c)| {
                                let (Some(a), Some(b)) = (&self.basis[k].blocks[blk], &self.basis[j].blocks[blk])
                                else {
                                    return 0;
                                };
                                (0..a.cols()).fold(0, |acc, q| f.add(acc, f.mul(a.get(r, q), b.get(q, c))))
                            })
                            .collect();
                        self.to_coords.mul_vec(&v)
                    })
                    .collect()
            })
            .collect();
        let id = GradedMap {
            shift: Degree::ZERO,
            blocks: self.basis[0].blocks.iter().map(|b| b.as_ref().map(|m| Mat::identity(f, m.rows()))).collect(),
        };
        AlgebraTable::new(f.clone(), mult, self.coords(&id))
    }
}

fn flatten(m: &GradedMap) -> Vec<Elem> {
    m.blocks.iter().flatten().flat_map(|b| b.data().iter().copied()).collect()
}

/// Basis of the degree-zero endomorphisms of `m`.
pub fn end_algebra(m: &GradedModule) -> Result<EndAlgebra, DecomposeError> {
    let space = hom_space(m, m, Degree::ZERO)?;
    Ok(EndAlgebra::from_basis(m.field(), space.basis()))
}

/// Outcome of the radical-based test on an endomorphism algebra.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// `E / J` is the ground field: the module is indecomposable.
    Local { end_dim: usize, radical_dim: usize },
    /// A nontrivial idempotent of `E`.
    Idempotent(GradedMap),
    /// `E / J` is a field of the given degree over the working field.
    NeedsExtension(u32),
}

/// Result of a single splitting attempt.
#[derive(Clone, Debug)]
pub enum SplitResult {
    Split(GradedModule, GradedModule),
    Indecomposable(Certificate),
}

fn min_poly_of_map(field: &Field, theta: &GradedMap) -> Poly {
    theta.blocks.iter().flatten().fold(Poly::one(field), |acc, b| acc.lcm(&b.min_poly()))
}

/// `e(t)` with `e ≡ 1 mod f^a` and `e ≡ 0 mod (μ / f^a)` for the first factor `f^a` of `μ`.
fn fitting_polynomial(mu: &Poly, factors: &[(Poly, usize)]) -> Poly {
    let (f1, a1) = &factors[0];
    let head = f1.pow(*a1 as u64);
    let (rest, _) = mu.divrem(&head);
    let (_, _, v) = head.xgcd(&rest);
    v.mul(&rest).rem(mu)
}

fn eval_on_map(theta: &GradedMap, poly: &Poly) -> GradedMap {
    GradedMap {
        shift: theta.shift,
        blocks: theta.blocks.iter().map(|b| b.as_ref().map(|m| m.eval_poly(poly))).collect(),
    }
}

fn compose_endos(a: &GradedMap, b: &GradedMap) -> GradedMap {
    // a ∘ b for degree-zero endomorphisms with the same block layout
    GradedMap {
        shift: Degree::ZERO,
        blocks: a.blocks.iter().zip(&b.blocks).map(|(x, y)| Some(x.as_ref()?.mul(y.as_ref()?))).collect(),
    }
}

fn is_idempotent(e: &GradedMap) -> bool {
    compose_endos(e, e) == *e
}

/// Newton iteration `e <- 3e^2 - 2e^3`, which converges when `e^2 - e` is nilpotent.
pub fn lift_idempotent(field: &Field, e: &GradedMap) -> Result<GradedMap, DecomposeError> {
    let mut e = e.clone();
    for _ in 0..64 {
        if is_idempotent(&e) {
            return Ok(e);
        }
        let e2 = compose_endos(&e, &e);
        let e3 = compose_endos(&e2, &e);
        let mut next = e2.scaled(field.from_int(3));
        next.add_scaled(field.from_int(-2), &e3);
        e = next;
    }
    Err(DecomposeError::RadicalAlgorithmFailure("idempotent lifting did not converge".into()))
}

fn is_nilpotent_endo(h: &GradedMap) -> bool {
    h.blocks.iter().flatten().all(|b| b.pow(b.rows() as u64).is_zero())
}

/// Tries to find a nontrivial idempotent of `End_0` or certifies that none exists.
fn find_idempotent<R: Rng>(
    field: &Field,
    ends: &HomSpace,
    samples: usize,
    rng: &mut R,
) -> Result<Certificate, DecomposeError> {
    if ends.dim() <= 1 {
        return Ok(Certificate::Local { end_dim: ends.dim(), radical_dim: 0 });
    }
    for _ in 0..samples {
        let theta = ends.random_element(rng);
        let mu = min_poly_of_map(field, &theta);
        let factors = mu.factor();
        if factors.len() >= 2 {
            let e = eval_on_map(&theta, &fitting_polynomial(&mu, &factors));
            debug_assert!(is_idempotent(&e));
            return Ok(Certificate::Idempotent(e));
        }
    }
    radical_certificate(field, &ends.basis(), rng)
}

fn radical_certificate<R: Rng>(field: &Field, ends: &[GradedMap], rng: &mut R) -> Result<Certificate, DecomposeError> {
    let alg = EndAlgebra::from_basis(field, ends.to_vec());
    let table = alg.table();
    let radical = table.radical()?;
    let quotient = table.quotient(&radical);
    let qdim = quotient.table.dim();
    if qdim == 1 {
        return Ok(Certificate::Local { end_dim: alg.dim(), radical_dim: radical.len() });
    }
    let commutative = quotient.table.is_commutative();
    let q = field.order();
    for _ in 0..256 {
        let elem: Vec<Elem> = (0..qdim).map(|_| rng.gen_range(0..q) as Elem).collect();
        let lm = quotient.table.left_matrix(&elem);
        let mu = lm.min_poly();
        let factors = mu.factor();
        if factors.len() >= 2 {
            // evaluate the Fitting polynomial at the element inside the quotient
            let poly = fitting_polynomial(&mu, &factors);
            let mut acc = vec![0; qdim];
            let mut power = quotient.table.one().to_vec();
            for &c in poly.coeffs() {
                field.axpy(&mut acc, c, &power);
                power = quotient.table.mul(&power, &elem);
            }
            let lifted = alg.element(&quotient.lift(&acc, alg.dim()));
            let e = lift_idempotent(field, &lifted)?;
            return Ok(Certificate::Idempotent(e));
        }
        if commutative && factors.len() == 1 && factors[0].1 == 1 && factors[0].0.degree() == Some(qdim) {
            return Ok(Certificate::NeedsExtension(qdim as u32));
        }
    }
    Err(DecomposeError::RadicalAlgorithmFailure(format!(
        "semisimple quotient of dimension {qdim} yielded no idempotent"
    )))
}

/// A piece of the input module: the summand itself and maps back and forth to the input
/// module.
#[derive(Clone, Debug)]
struct Part {
    module: GradedModule,
    incl: GradedMap,
    proj: GradedMap,
}

fn column_space_basis(m: &Mat) -> Mat {
    let (_, pivots) = m.rref();
    m.select_columns(&pivots)
}

/// One certified indecomposable piece in recursion order.
#[derive(Clone, Debug)]
struct Leaf {
    module: GradedModule,
    incl: GradedMap,
    proj: GradedMap,
}

fn branch_seed(seed: u64, path: &[u8]) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for &b in path {
        h = splitmix(h ^ (b as u64 + 1));
    }
    splitmix(h ^ path.len() as u64)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

enum Branch {
    Leaves(Vec<Leaf>),
    NeedsExtension(u32),
}

fn decompose_part(
    input: &GradedModule,
    part: Part,
    path: Vec<u8>,
    seed: u64,
    opts: &DecomposeOptions,
) -> Result<Branch, DecomposeError> {
    let field = part.module.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(branch_seed(seed, &path));
    let ends = hom_space(&part.module, &part.module, Degree::ZERO)?;
    match find_idempotent(&field, &ends, opts.samples, &mut rng)? {
        Certificate::Local { .. } => {
            Ok(Branch::Leaves(vec![Leaf { module: part.module, incl: part.incl, proj: part.proj }]))
        }
        Certificate::NeedsExtension(e) => Ok(Branch::NeedsExtension(e)),
        Certificate::Idempotent(e) => {
            let (a, b) = split_part(input, &part, &e)?;
            let (pa, pb) = (child(&path, 0), child(&path, 1));
            let (ra, rb) = if opts.parallel && a.module.dim() + b.module.dim() > 24 {
                rayon::join(|| decompose_part(input, a, pa, seed, opts), || decompose_part(input, b, pb, seed, opts))
            } else {
                (decompose_part(input, a, pa, seed, opts), decompose_part(input, b, pb, seed, opts))
            };
            match (ra?, rb?) {
                (Branch::Leaves(mut x), Branch::Leaves(y)) => {
                    x.extend(y);
                    Ok(Branch::Leaves(x))
                }
                (Branch::NeedsExtension(e1), Branch::NeedsExtension(e2)) => Ok(Branch::NeedsExtension(lcm(e1, e2))),
                (Branch::NeedsExtension(e), _) | (_, Branch::NeedsExtension(e)) => Ok(Branch::NeedsExtension(e)),
            }
        }
    }
}

fn child(path: &[u8], bit: u8) -> Vec<u8> {
    let mut p = path.to_vec();
    p.push(bit);
    p
}

/// Splits a part along a nontrivial idempotent `e` into `im e` and `im (1 - e)`.
fn split_part(input: &GradedModule, part: &Part, e: &GradedMap) -> Result<(Part, Part), DecomposeError> {
    let field = part.module.field();
    let mut halves = Vec::with_capacity(2);
    for take_image in [true, false] {
        let mut bases = BTreeMap::new();
        let mut idems = Vec::new();
        for (blk, eb) in part.module.blocks().iter().zip(&e.blocks) {
            let eb = eb.as_ref().expect("endomorphism blocks are present");
            let p = if take_image { eb.clone() } else { Mat::identity(field, blk.dim).sub(eb) };
            bases.insert(blk.degree, column_space_basis(&p));
            idems.push(p);
        }
        let sub = part.module.restrict(&bases)?;
        let incl = GradedMap {
            shift: Degree::ZERO,
            blocks: sub.blocks().iter().map(|b| Some(bases[&b.degree].clone())).collect(),
        };
        let proj = GradedMap {
            shift: Degree::ZERO,
            blocks: part
                .module
                .blocks()
                .iter()
                .zip(&idems)
                .map(|(blk, p)| {
                    let basis = &bases[&blk.degree];
                    if basis.cols() == 0 {
                        return None;
                    }
                    let left = crate::module::left_inverse(basis).expect("basis has full rank");
                    Some(left.mul(p))
                })
                .collect(),
        };
        let new_incl = incl.then(&part.incl, &sub, &part.module);
        let new_proj = part.proj.then(&proj, input, &part.module);
        halves.push(Part { module: sub, incl: new_incl, proj: new_proj });
    }
    let second = halves.pop().expect("two halves");
    let first = halves.pop().expect("two halves");
    Ok((first, second))
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Canonical description of a summand, independent of its position in the grading.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SummandLabel {
    pub dim: usize,
    /// Degrees translated so the smallest `i` and `j` are zero, with block dimensions.
    pub degrees: Vec<(Degree, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
}

impl SummandLabel {
    pub fn name(&self) -> String {
        match &self.diagram {
            Some(d) => format!("D[{d}]"),
            None => format!("M{}", self.dim),
        }
    }
}

/// An isomorphism class of indecomposable summands.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GradedModule,
    pub multiplicity: usize,
    /// One projector on the input module per copy; they are orthogonal idempotents.
    pub projectors: Vec<GradedMap>,
    /// Degree shift of each copy relative to `module`, which sits at the origin.
    pub shifts: Vec<Degree>,
    pub label: SummandLabel,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Field the decomposition was computed over (possibly an extension of `F_p`).
    pub field: Field,
    pub seed: u64,
    /// The input module after scalar extension to `field`.
    pub input: GradedModule,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    /// Summand dimensions with multiplicity, ascending.
    pub fn dims(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.summands.iter().flat_map(|s| std::iter::repeat_n(s.module.dim(), s.multiplicity)).collect();
        out.sort_unstable();
        out
    }

    pub fn extension_degree(&self) -> u32 {
        self.field.degree()
    }

    /// Summands whose dimension is not divisible by `p`.
    pub fn non_negligible(&self) -> Vec<&Summand> {
        let p = self.field.p() as usize;
        self.summands.iter().filter(|s| s.module.dim() % p != 0).collect()
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            input: InputRef { label: self.input.label().map(str::to_string), dim: self.input.dim() },
            field: self.field.spec(),
            summands: self
                .summands
                .iter()
                .map(|s| SummandJson {
                    dim: s.module.dim(),
                    multiplicity: s.multiplicity,
                    degrees: s.label.degrees.iter().map(|(d, n)| [d.i as i64, d.j as i64, *n as i64]).collect(),
                    diagram: s.label.diagram.clone(),
                })
                .collect(),
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub dim: usize,
    pub multiplicity: usize,
    /// `[i, j, block dimension]` after translating to the origin.
    pub degrees: Vec<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub input: InputRef,
    pub field: FieldSpec,
    pub summands: Vec<SummandJson>,
    pub seed: u64,
}

/// Decomposes `m` into indecomposable graded summands, extending scalars when needed.
pub fn decompose(m: &GradedModule, seed: u64, opts: &DecomposeOptions) -> Result<Decomposition, DecomposeError> {
    opts.check_size(m.dim())?;
    let p = m.field().p();
    let mut e = m.field().degree();
    loop {
        let field = if e == m.field().degree() { m.field().clone() } else { Field::new(p as u16, e)? };
        let input = m.extend_scalars(&field)?;
        match decompose_over(&input, seed, opts)? {
            Branch::Leaves(leaves) => return group_leaves(input, leaves, seed),
            Branch::NeedsExtension(k) => {
                let next = e * k;
                if next > opts.ext_cap {
                    return Err(DecomposeError::ExtensionCapExceeded { p, needed: next, cap: opts.ext_cap });
                }
                log::warn!("splitting requires F_{p}^{next}; extending scalars");
                e = next;
            }
        }
    }
}

fn decompose_over(input: &GradedModule, seed: u64, opts: &DecomposeOptions) -> Result<Branch, DecomposeError> {
    if input.dim() == 0 {
        return Ok(Branch::Leaves(Vec::new()));
    }
    let id = GradedMap::identity(input);
    let root = Part { module: input.clone(), incl: id.clone(), proj: id };
    decompose_part(input, root, Vec::new(), seed, opts)
}

/// Smallest `(i, j)` corner of the support.
fn corner(m: &GradedModule) -> Degree {
    let i = m.blocks().iter().map(|b| b.degree.i).min().unwrap_or(0);
    let j = m.blocks().iter().map(|b| b.degree.j).min().unwrap_or(0);
    Degree::new(i, j)
}

fn group_leaves(input: GradedModule, leaves: Vec<Leaf>, seed: u64) -> Result<Decomposition, DecomposeError> {
    let field = input.field().clone();
    let mut classes: Vec<(Leaf, Vec<(GradedMap, Degree)>)> = Vec::new();
    for leaf in leaves {
        let projector = leaf.proj.then(&leaf.incl, &input, &leaf.module);
        let mut placed = false;
        for (rep, copies) in classes.iter_mut() {
            if let Some(shift) = indecomposables_isomorphic(&rep.module, &leaf.module)? {
                copies.push((projector.clone(), shift));
                placed = true;
                break;
            }
        }
        if !placed {
            // representatives sit with their lowest corner at the origin
            let at = corner(&leaf.module);
            let module = leaf.module.shifted(-at);
            classes.push((Leaf { module, ..leaf }, vec![(projector, at)]));
        }
    }
    let mut summands = Vec::with_capacity(classes.len());
    for (rep, copies) in classes {
        let label = label_for(&rep.module)?;
        summands.push(Summand {
            module: rep.module,
            multiplicity: copies.len(),
            shifts: copies.iter().map(|c| c.1).collect(),
            projectors: copies.into_iter().map(|c| c.0).collect(),
            label,
        });
    }
    summands.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(Decomposition { field, seed, input, summands })
}

/// Shift `s` with `b ≅ a⟨s⟩` (degrees of `b` = degrees of `a` + `s`) if the normalized
/// degree data agree.
fn aligning_shift(a: &GradedModule, b: &GradedModule) -> Option<Degree> {
    if a.dim() != b.dim() || a.normalized_degrees() != b.normalized_degrees() {
        return None;
    }
    Some(corner(b) - corner(a))
}

/// For indecomposable `a` (with local endomorphism ring) and any `b`: the shift of an
/// isomorphism `a⟨s⟩ ≅ b`, if one exists.
pub fn indecomposables_isomorphic(a: &GradedModule, b: &GradedModule) -> Result<Option<Degree>, DecomposeError> {
    let Some(s) = aligning_shift(a, b) else { return Ok(None) };
    let there = hom_space(a, b, s)?;
    if there.dim() == 0 {
        return Ok(None);
    }
    let back = hom_space(b, a, -s)?;
    for f in there.basis() {
        for g in back.basis() {
            if !is_nilpotent_endo(&f.then(&g, a, b)) {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Whether `a ≅ b` up to a global degree shift.
pub fn is_isomorphic(a: &GradedModule, b: &GradedModule) -> Result<bool, DecomposeError> {
    if a.params() != b.params() || a.field() != b.field() {
        return Ok(false);
    }
    let Some(s) = aligning_shift(a, b) else { return Ok(false) };
    if a.dim() == 0 {
        return Ok(true);
    }
    let space = hom_space(a, b, s)?;
    if space.dim() == 0 {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1_5015);
    for _ in 0..32 {
        let f = space.random_element(&mut rng);
        if f.blocks.iter().all(|m| m.as_ref().is_some_and(|m| m.rank() == m.rows())) {
            return Ok(true);
        }
    }
    // Inconclusive sampling: compare the decompositions exactly.
    let opts = DecomposeOptions { parallel: false, ..DecomposeOptions::default() };
    let da = decompose(a, 0, &opts)?;
    let db = decompose(b, 0, &opts)?;
    if da.field != db.field || da.summands.len() != db.summands.len() {
        return Ok(false);
    }
    let mut used = vec![false; db.summands.len()];
    for sa in &da.summands {
        let mut found = false;
        for (k, sb) in db.summands.iter().enumerate() {
            if !used[k]
                && sa.multiplicity == sb.multiplicity
                && indecomposables_isomorphic(&sa.module, &sb.module)?.is_some()
            {
                used[k] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scalar part of an endomorphism of an indecomposable module whose endomorphism ring
/// modulo its radical is the ground field: the unique eigenvalue.
fn scalar_part(field: &Field, h: &GradedMap) -> Elem {
    let p = field.p() as usize;
    for b in h.blocks.iter().flatten() {
        if b.rows() % p != 0 {
            let n = field.from_int(b.rows() as i64);
            return field.mul(b.trace(), field.inv(n));
        }
    }
    let b = h.blocks.iter().flatten().next().expect("nonzero module");
    let factors = b.min_poly().factor();
    match factors.first() {
        Some((f, _)) if f.degree() == Some(1) => field.neg(f.coeffs()[0]),
        _ => 0,
    }
}

/// Number of summands of `m` isomorphic to `w⟨s⟩` for some shift `s`, computed as the rank
/// of the composition pairing `Hom(w, m) × Hom(m, w) -> End(w)/rad = k`. `w` must be
/// indecomposable with split local endomorphism ring.
pub fn summand_multiplicity(w: &GradedModule, m: &GradedModule) -> Result<usize, DecomposeError> {
    let field = w.field();
    let mut total = 0;
    let wdeg: Vec<(Degree, usize)> = w.blocks().iter().map(|b| (b.degree, b.dim)).collect();
    let mut shifts: Vec<Degree> = crate::hom::candidate_shifts(w, m);
    shifts.retain(|&s| wdeg.iter().all(|&(d, n)| m.dim_at(d + s) >= n));
    for s in shifts {
        let there = hom_space(w, m, s)?;
        if there.dim() == 0 {
            continue;
        }
        let back = hom_space(m, w, -s)?;
        if back.dim() == 0 {
            continue;
        }
        let fs = there.basis();
        let gs = back.basis();
        let pairing = Mat::from_fn(field, fs.len(), gs.len(), |i, j| scalar_part(field, &fs[i].then(&gs[j], w, m)));
        total += pairing.rank();
    }
    Ok(total)
}

/// One splitting step on a module.
pub fn split_once<R: Rng>(m: &GradedModule, rng: &mut R, samples: usize) -> Result<SplitResult, DecomposeError> {
    let ends = hom_space(m, m, Degree::ZERO)?;
    match find_idempotent(m.field(), &ends, samples, rng)? {
        Certificate::Idempotent(e) => {
            let id = GradedMap::identity(m);
            let part = Part { module: m.clone(), incl: id.clone(), proj: id };
            let (a, b) = split_part(m, &part, &e)?;
            Ok(SplitResult::Split(a.module, b.module))
        }
        other => Ok(SplitResult::Indecomposable(other)),
    }
}

/// Radical-based certificate: local, an explicit idempotent, or a required extension.
pub fn indecomposability_certificate<R: Rng>(m: &GradedModule, rng: &mut R) -> Result<Certificate, DecomposeError> {
    let ends = end_algebra(m)?.basis;
    if ends.len() <= 1 {
        return Ok(Certificate::Local { end_dim: ends.len(), radical_dim: 0 });
    }
    radical_certificate(m.field(), &ends, rng)
}

/// Labels a summand and, when all its degrees are one-dimensional and form a skew shape,
/// names the diagram it is isomorphic to.
fn label_for(m: &GradedModule) -> Result<SummandLabel, DecomposeError> {
    let degrees = m.normalized_degrees();
    let diagram = match diagram_candidate(&degrees) {
        Some(d) => {
            let cand =
                GradedModule::from_diagram(&d, m.params()).ok().map(|c| c.extend_scalars(m.field())).transpose()?;
            match cand {
                Some(c) if indecomposables_isomorphic(m, &c)?.is_some() => Some(d.render()),
                _ => None,
            }
        }
        None => None,
    };
    Ok(SummandLabel { dim: m.dim(), degrees, diagram })
}

fn diagram_candidate(degrees: &[(Degree, usize)]) -> Option<SkewDiagram> {
    if degrees.iter().any(|&(_, n)| n != 1) {
        return None;
    }
    let mut columns: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for (d, _) in degrees {
        columns.entry(d.i).or_default().push(d.j);
    }
    let ncols = columns.len() as i32;
    if columns.keys().copied().ne(0..ncols) {
        return None;
    }
    let mut lambda = Vec::new();
    let mut mu = Vec::new();
    for rows in columns.values() {
        let lo = *rows.iter().min()?;
        let hi = *rows.iter().max()?;
        if (hi - lo + 1) as usize != rows.len() {
            return None;
        }
        lambda.push((hi + 1) as u32);
        mu.push(lo as u32);
    }
    SkewDiagram::new(lambda, mu).ok()
}

#[cfg(test)]
mod tests;
