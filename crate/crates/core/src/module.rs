//! Graded modules over `k[x,y]/(x^{p^r}, y^{p^s})` with primitive coproduct.
//!
//! A module is stored as a list of nonzero homogeneous components ("blocks"), sorted by
//! degree with the row index `j` major. `x` maps block `d` to block `d + (1,0)` and `y`
//! to `d + (0,1)`; each block keeps those two maps as small dense matrices. The global
//! basis is the concatenation of the blocks in order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::SkewDiagram;
use crate::error::ModuleError;
use crate::gf::{Elem, Field, FieldSpec, Mat};

/// A bidegree `(i, j)`: `i` counts `x`-steps (columns) and `j` counts `y`-steps (rows).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Degree {
    pub i: i32,
    pub j: i32,
}

impl Degree {
    pub const ZERO: Degree = Degree { i: 0, j: 0 };
    pub const X: Degree = Degree { i: 1, j: 0 };
    pub const Y: Degree = Degree { i: 0, j: 1 };

    pub const fn new(i: i32, j: i32) -> Degree {
        Degree { i, j }
    }

    pub fn total(self) -> i32 {
        self.i + self.j
    }
}

impl std::ops::Neg for Degree {
    type Output = Degree;

    fn neg(self) -> Degree {
        Degree::new(-self.i, -self.j)
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.i + o.i, self.j + o.j)
    }
}

impl std::ops::Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.i - o.i, self.j - o.j)
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.i).cmp(&(other.j, other.i))
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The group scheme `alpha_p(r, s)`: `x` has nilpotency order `p^r`, `y` has `p^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub p: u16,
    pub r: u32,
    pub s: u32,
}

impl AlgebraParams {
    pub fn new(p: u16, r: u32, s: u32) -> Result<AlgebraParams, ModuleError> {
        Field::prime(p)?;
        let params = AlgebraParams { p, r, s };
        if params.x_order().is_none() || params.y_order().is_none() {
            return Err(ModuleError::BadData(format!("p^r or p^s overflows for {params:?}")));
        }
        Ok(params)
    }

    /// `p^r`, the nilpotency order of `x`.
    pub fn x_order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.r)
    }

    /// `p^s`, the nilpotency order of `y`.
    pub fn y_order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.s)
    }

    pub fn prime_field(&self) -> Field {
        Field::prime(self.p).expect("validated prime")
    }
}

/// A single-column module `W` with `x = 0`, spanning degrees `(0,-n) .. (0,top)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnModuleSpec {
    pub n: u32,
    pub top: u32,
}

impl ColumnModuleSpec {
    pub fn new(n: u32, top: u32) -> ColumnModuleSpec {
        ColumnModuleSpec { n, top }
    }

    pub fn dim(&self) -> usize {
        (self.n + self.top + 1) as usize
    }
}

/// One homogeneous component together with the outgoing `x` and `y` maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub degree: Degree,
    pub dim: usize,
    pub offset: usize,
    /// `x: block -> block(degree + (1,0))`, absent when that block is zero.
    pub x: Option<Mat>,
    /// `y: block -> block(degree + (0,1))`, absent when that block is zero.
    pub y: Option<Mat>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedModule {
    params: AlgebraParams,
    field: Field,
    blocks: Vec<Block>,
    dim: usize,
    label: Option<String>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule(dim {}, {} blocks", self.dim, self.blocks.len())?;
        if let Some(l) = &self.label {
            write!(f, ", {l}")?;
        }
        write!(f, ")")
    }
}

/// Which generator a block map belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    X,
    Y,
}

impl Action {
    pub fn step(self) -> Degree {
        match self {
            Action::X => Degree::X,
            Action::Y => Degree::Y,
        }
    }
}

impl GradedModule {
    /// Assembles a module from per-degree dimensions and block maps. Maps are looked up by
    /// source degree; missing maps are zero. Zero-dimensional degrees are dropped.
    pub fn from_parts(
        params: AlgebraParams,
        field: Field,
        dims: BTreeMap<Degree, usize>,
        mut x: BTreeMap<Degree, Mat>,
        mut y: BTreeMap<Degree, Mat>,
    ) -> Result<GradedModule, ModuleError> {
        if field.p() != params.p as u32 {
            return Err(ModuleError::ParamsMismatch);
        }
        let dims: BTreeMap<Degree, usize> = dims.into_iter().filter(|&(_, n)| n > 0).collect();
        let mut blocks = Vec::with_capacity(dims.len());
        let mut offset = 0;
        for (&degree, &dim) in &dims {
            let take = |maps: &mut BTreeMap<Degree, Mat>, step: Degree| -> Result<Option<Mat>, ModuleError> {
                let target = dims.get(&(degree + step)).copied();
                match (maps.remove(&degree), target) {
                    (Some(m), Some(t)) => {
                        if m.rows() != t || m.cols() != dim {
                            return Err(ModuleError::BadData(format!("map out of {degree} has wrong shape")));
                        }
                        Ok(Some(m))
                    }
                    (Some(m), None) if m.is_zero() => Ok(None),
                    (Some(_), None) => Err(ModuleError::NotGraded),
                    (None, Some(t)) => Ok(Some(Mat::zeros(&field, t, dim))),
                    (None, None) => Ok(None),
                }
            };
            let bx = take(&mut x, Degree::X)?;
            let by = take(&mut y, Degree::Y)?;
            blocks.push(Block { degree, dim, offset, x: bx, y: by });
            offset += dim;
        }
        if x.values().chain(y.values()).any(|m| !m.is_zero()) {
            return Err(ModuleError::NotGraded);
        }
        let m = GradedModule { params, field, blocks, dim: offset, label: None };
        m.check_invariants()?;
        Ok(m)
    }

    /// Builds a module from dense action matrices and one degree per basis vector. The
    /// basis is reordered into block order (stable within a degree).
    pub fn from_dense(
        params: AlgebraParams,
        field: Field,
        degrees: &[Degree],
        x: &Mat,
        y: &Mat,
    ) -> Result<GradedModule, ModuleError> {
        let n = degrees.len();
        if x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n {
            return Err(ModuleError::BadData("action matrices must be square of size dim".into()));
        }
        let mut positions: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for (k, &d) in degrees.iter().enumerate() {
            positions.entry(d).or_default().push(k);
        }
        for (act, mat) in [(Action::X, x), (Action::Y, y)] {
            for c in 0..n {
                for r in 0..n {
                    if mat.get(r, c) != 0 && degrees[r] != degrees[c] + act.step() {
                        return Err(ModuleError::NotGraded);
                    }
                }
            }
        }
        let dims = positions.iter().map(|(&d, v)| (d, v.len())).collect();
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for (&d, src) in &positions {
            for (act, mat, out) in [(Action::X, x, &mut xs), (Action::Y, y, &mut ys)] {
                if let Some(dst) = positions.get(&(d + act.step())) {
                    out.insert(d, mat.select_rows(dst).select_columns(src));
                }
            }
        }
        GradedModule::from_parts(params, field, dims, xs, ys)
    }

    /// The module spanned by the cells of a diagram; `x` moves right and `y` moves up.
    pub fn from_diagram(d: &SkewDiagram, params: AlgebraParams) -> Result<GradedModule, ModuleError> {
        if !d.validate_for(params.p as u32, params.r, params.s) {
            return Err(ModuleError::InvalidDiagramForParams { p: params.p, r: params.r, s: params.s });
        }
        let field = params.prime_field();
        let cells: Vec<Degree> = d.cells().into_iter().map(|(i, j)| Degree::new(i as i32, j as i32)).collect();
        let dims = cells.iter().map(|&c| (c, 1)).collect::<BTreeMap<_, _>>();
        let one = Mat::from_vec(&field, 1, 1, vec![1]);
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for &c in &cells {
            if dims.contains_key(&(c + Degree::X)) {
                xs.insert(c, one.clone());
            }
            if dims.contains_key(&(c + Degree::Y)) {
                ys.insert(c, one.clone());
            }
        }
        let mut m = GradedModule::from_parts(params, field, dims, xs, ys)?;
        m.label = Some(d.render());
        Ok(m)
    }

    /// A column with `x = 0` and `y` a single Jordan chain from `(0,-n)` up to `(0,top)`.
    pub fn column_module(spec: ColumnModuleSpec, params: AlgebraParams) -> Result<GradedModule, ModuleError> {
        let dim = spec.dim() as u64;
        let bound = params.y_order().unwrap_or(u64::MAX);
        if dim > bound {
            return Err(ModuleError::ColumnTooTall { dim, bound });
        }
        let d = SkewDiagram::column(spec.dim() as u32);
        let mut m = GradedModule::from_diagram(&d, params)
            .map_err(|_| ModuleError::ColumnTooTall { dim, bound })?
            .shifted(Degree::new(0, -(spec.n as i32)));
        m.label = Some(format!("W(n={},top={})", spec.n, spec.top));
        Ok(m)
    }

    /// The one-dimensional trivial module in degree zero.
    pub fn trivial(params: AlgebraParams) -> GradedModule {
        let mut m = GradedModule::from_diagram(&SkewDiagram::column(1), params).expect("a single cell always fits");
        m.label = Some("k".into());
        m
    }

    /// The zero module.
    pub fn zero(params: AlgebraParams, field: Field) -> GradedModule {
        GradedModule { params, field, blocks: Vec::new(), dim: 0, label: None }
    }

    pub fn params(&self) -> AlgebraParams {
        self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> GradedModule {
        self.label = Some(label.into());
        self
    }

    pub fn block_index(&self, d: Degree) -> Option<usize> {
        self.blocks.binary_search_by(|b| b.degree.cmp(&d)).ok()
    }

    pub fn block(&self, d: Degree) -> Option<&Block> {
        self.block_index(d).map(|k| &self.blocks[k])
    }

    pub fn dim_at(&self, d: Degree) -> usize {
        self.block(d).map_or(0, |b| b.dim)
    }

    /// The map of `x` or `y` out of degree `d`, if both ends are nonzero.
    pub fn action(&self, act: Action, d: Degree) -> Option<&Mat> {
        let b = self.block(d)?;
        match act {
            Action::X => b.x.as_ref(),
            Action::Y => b.y.as_ref(),
        }
    }

    /// Degree of every basis vector, in basis order.
    pub fn degrees(&self) -> Vec<Degree> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.degree, b.dim)).collect()
    }

    /// Sorted list of `(degree, dim)` with degrees translated so the minimum is at the origin.
    pub fn normalized_degrees(&self) -> Vec<(Degree, usize)> {
        let Some(min_i) = self.blocks.iter().map(|b| b.degree.i).min() else {
            return Vec::new();
        };
        let min_j = self.blocks.iter().map(|b| b.degree.j).min().unwrap_or(0);
        let shift = Degree::new(-min_i, -min_j);
        self.blocks.iter().map(|b| (b.degree + shift, b.dim)).collect()
    }

    fn dense(&self, act: Action) -> Mat {
        let mut out = Mat::zeros(&self.field, self.dim, self.dim);
        for b in &self.blocks {
            let map = match act {
                Action::X => b.x.as_ref(),
                Action::Y => b.y.as_ref(),
            };
            if let Some(m) = map {
                let t = self.block(b.degree + act.step()).expect("target block exists");
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        out.set(t.offset + r, b.offset + c, m.get(r, c));
                    }
                }
            }
        }
        out
    }

    /// Dense matrix of `x` in the global basis.
    pub fn x_matrix(&self) -> Mat {
        self.dense(Action::X)
    }

    /// Dense matrix of `y` in the global basis.
    pub fn y_matrix(&self) -> Mat {
        self.dense(Action::Y)
    }

    /// Checks `xy = yx`, `x^{p^r} = 0` and `y^{p^s} = 0`, block by block.
    pub fn check_invariants(&self) -> Result<(), ModuleError> {
        for b in &self.blocks {
            let d = b.degree;
            let target = d + Degree::X + Degree::Y;
            let Some(t) = self.block(target) else { continue };
            let via_x = match (b.x.as_ref(), self.action(Action::Y, d + Degree::X)) {
                (Some(a), Some(c)) => c.mul(a),
                _ => Mat::zeros(&self.field, t.dim, b.dim),
            };
            let via_y = match (b.y.as_ref(), self.action(Action::X, d + Degree::Y)) {
                (Some(a), Some(c)) => c.mul(a),
                _ => Mat::zeros(&self.field, t.dim, b.dim),
            };
            if via_x != via_y {
                return Err(ModuleError::InvariantViolation(format!("x and y do not commute at {d}")));
            }
        }
        for (act, order) in [(Action::X, self.params.x_order()), (Action::Y, self.params.y_order())] {
            let order = order.unwrap_or(u64::MAX);
            for b in &self.blocks {
                if !self.power_vanishes(act, b.degree, order) {
                    return Err(ModuleError::InvariantViolation(format!(
                        "{act:?}^{order} is nonzero on degree {}",
                        b.degree
                    )));
                }
            }
        }
        Ok(())
    }

    fn power_vanishes(&self, act: Action, start: Degree, order: u64) -> bool {
        let mut d = start;
        let mut acc: Option<Mat> = None;
        for _ in 0..order {
            let Some(step) = self.action(act, d) else { return true };
            let next = match acc {
                None => step.clone(),
                Some(a) => step.mul(&a),
            };
            if next.is_zero() {
                return true;
            }
            acc = Some(next);
            d = d + act.step();
        }
        false
    }

    fn ensure_compatible(&self, other: &GradedModule) -> Result<(), ModuleError> {
        if self.params != other.params || self.field != other.field {
            return Err(ModuleError::ParamsMismatch);
        }
        Ok(())
    }

    /// Degree translation.
    pub fn shifted(&self, by: Degree) -> GradedModule {
        let mut out = self.clone();
        for b in &mut out.blocks {
            b.degree = b.degree + by;
        }
        out
    }

    /// Block-diagonal sum; the basis of each degree lists `self` first.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule, ModuleError> {
        self.ensure_compatible(other)?;
        GradedModule::direct_sum_all(self.params, &self.field, &[self, other])
    }

    pub fn direct_sum_all(
        params: AlgebraParams,
        field: &Field,
        parts: &[&GradedModule],
    ) -> Result<GradedModule, ModuleError> {
        for m in parts {
            if m.params != params || &m.field != field {
                return Err(ModuleError::ParamsMismatch);
            }
        }
        let mut dims: BTreeMap<Degree, usize> = BTreeMap::new();
        for m in parts {
            for b in &m.blocks {
                *dims.entry(b.degree).or_default() += b.dim;
            }
        }
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for (&d, &n) in &dims {
            for act in [Action::X, Action::Y] {
                let Some(&t) = dims.get(&(d + act.step())) else { continue };
                let mut mat = Mat::zeros(field, t, n);
                let (mut ro, mut co) = (0, 0);
                for m in parts {
                    let src = m.dim_at(d);
                    let dst = m.dim_at(d + act.step());
                    if let Some(a) = m.action(act, d) {
                        place(&mut mat, a, ro, co);
                    }
                    ro += dst;
                    co += src;
                }
                match act {
                    Action::X => xs.insert(d, mat),
                    Action::Y => ys.insert(d, mat),
                };
            }
        }
        GradedModule::from_parts(params, field.clone(), dims, xs, ys)
    }

    /// Tensor product with `x` acting as `x ⊗ 1 + 1 ⊗ x` (likewise `y`).
    ///
    /// The basis of degree `d` lists the pairs `(u, v)` grouped by the degree pair
    /// `(deg u, deg v)` in block order of `self`, with `u` major inside each group.
    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule, ModuleError> {
        self.ensure_compatible(other)?;
        let layout = TensorLayout::new(self, other);
        let field = &self.field;
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for (&d, pieces) in &layout.pieces {
            for act in [Action::X, Action::Y] {
                let target = d + act.step();
                let Some(&tdim) = layout.dims.get(&target) else { continue };
                let sdim = layout.dims[&d];
                let mut mat = Mat::zeros(field, tdim, sdim);
                for piece in pieces {
                    let (ba, bb) = (&self.blocks[piece.a], &other.blocks[piece.b]);
                    if let Some(ax) = self.action(act, ba.degree) {
                        let t = layout.offset(ba.degree + act.step(), bb.degree);
                        place_kron_identity(&mut mat, ax, bb.dim, t, piece.offset);
                    }
                    if let Some(bx) = other.action(act, bb.degree) {
                        let t = layout.offset(ba.degree, bb.degree + act.step());
                        place_identity_kron(&mut mat, ba.dim, bx, t, piece.offset);
                    }
                }
                match act {
                    Action::X => xs.insert(d, mat),
                    Action::Y => ys.insert(d, mat),
                };
            }
        }
        let mut m = GradedModule::from_parts_unchecked(self.params, field.clone(), layout.dims, xs, ys);
        m.label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("({a})x({b})")),
            _ => None,
        };
        debug_assert!(m.check_invariants().is_ok());
        Ok(m)
    }

    /// Position of basis vector `u ⊗ v` of `self.tensor(other)` for global basis indices
    /// `u` of `self` and `v` of `other`.
    pub fn tensor_index(&self, other: &GradedModule) -> TensorIndex {
        let layout = TensorLayout::new(self, other);
        let mut block_start = BTreeMap::new();
        let mut offset = 0;
        for (&d, &n) in &layout.dims {
            block_start.insert(d, offset);
            offset += n;
        }
        let starts = layout.lookup.iter().map(|(&(da, db), &o)| ((da, db), block_start[&(da + db)] + o)).collect();
        let locate = |m: &GradedModule| m.blocks.iter().flat_map(|b| (0..b.dim).map(move |k| (b.degree, k))).collect();
        TensorIndex {
            starts,
            left: locate(self),
            right: locate(other),
            right_dims: other.blocks.iter().map(|b| (b.degree, b.dim)).collect(),
        }
    }

    /// Contragredient module: negated degrees and `x` acting by `-x^T`.
    ///
    /// Each block of the dual keeps the basis order of the corresponding block of `self`
    /// (the dual basis).
    pub fn dual(&self) -> GradedModule {
        let dims = self.blocks.iter().map(|b| (-b.degree, b.dim)).collect();
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for b in &self.blocks {
            // x on the dual goes from -(d) to -(d) + e1 = -(d - e1); it is minus the
            // transpose of x: (d - e1) -> d.
            for act in [Action::X, Action::Y] {
                if let Some(a) = self.action(act, b.degree - act.step()) {
                    let m = a.transpose().neg();
                    match act {
                        Action::X => xs.insert(-b.degree, m),
                        Action::Y => ys.insert(-b.degree, m),
                    };
                }
            }
        }
        let mut m = GradedModule::from_parts_unchecked(self.params, self.field.clone(), dims, xs, ys);
        m.label = self.label.as_ref().map(|l| format!("({l})*"));
        m
    }

    fn from_parts_unchecked(
        params: AlgebraParams,
        field: Field,
        dims: BTreeMap<Degree, usize>,
        mut xs: BTreeMap<Degree, Mat>,
        mut ys: BTreeMap<Degree, Mat>,
    ) -> GradedModule {
        let mut blocks = Vec::with_capacity(dims.len());
        let mut offset = 0;
        for (&degree, &dim) in &dims {
            if dim == 0 {
                continue;
            }
            let x = dims
                .get(&(degree + Degree::X))
                .filter(|&&t| t > 0)
                .map(|&t| xs.remove(&degree).unwrap_or_else(|| Mat::zeros(&field, t, dim)));
            let y = dims
                .get(&(degree + Degree::Y))
                .filter(|&&t| t > 0)
                .map(|&t| ys.remove(&degree).unwrap_or_else(|| Mat::zeros(&field, t, dim)));
            blocks.push(Block { degree, dim, offset, x, y });
            offset += dim;
        }
        GradedModule { params, field, blocks, dim: offset, label: None }
    }

    /// The submodule (or any module-compatible subspace image) with the given per-degree
    /// bases. `bases[d]` has full column rank and its span must be stable under `x`, `y`.
    pub fn restrict(&self, bases: &BTreeMap<Degree, Mat>) -> Result<GradedModule, ModuleError> {
        let mut lefts = BTreeMap::new();
        for (&d, b) in bases {
            if b.cols() == 0 {
                continue;
            }
            if b.rows() != self.dim_at(d) {
                return Err(ModuleError::BadData(format!("basis for degree {d} has wrong length")));
            }
            let left = left_inverse(b)
                .ok_or_else(|| ModuleError::BadData(format!("basis for degree {d} is not linearly independent")))?;
            lefts.insert(d, left);
        }
        let dims: BTreeMap<Degree, usize> = bases.iter().map(|(&d, b)| (d, b.cols())).collect();
        let mut xs = BTreeMap::new();
        let mut ys = BTreeMap::new();
        for (&d, b) in bases {
            if b.cols() == 0 {
                continue;
            }
            for act in [Action::X, Action::Y] {
                let Some(a) = self.action(act, d) else { continue };
                let image = a.mul(b);
                let target = d + act.step();
                match (bases.get(&target), lefts.get(&target)) {
                    (Some(tb), Some(l)) => {
                        let coords = l.mul(&image);
                        if tb.mul(&coords) != image {
                            return Err(ModuleError::InvariantViolation(format!(
                                "subspace is not stable under {act:?} at {d}"
                            )));
                        }
                        match act {
                            Action::X => xs.insert(d, coords),
                            Action::Y => ys.insert(d, coords),
                        };
                    }
                    _ if image.is_zero() => {}
                    _ => {
                        return Err(ModuleError::InvariantViolation(format!(
                            "subspace is not stable under {act:?} at {d}"
                        )))
                    }
                }
            }
        }
        let m = GradedModule::from_parts_unchecked(self.params, self.field.clone(), dims, xs, ys);
        debug_assert!(m.check_invariants().is_ok());
        Ok(m)
    }

    /// Extends the base field along an embedding of `self.field()` into `big`.
    pub fn extend_scalars(&self, big: &Field) -> Result<GradedModule, ModuleError> {
        if big == &self.field {
            return Ok(self.clone());
        }
        let emb = self.field.embedding_into(big)?;
        let map = |m: &Mat| Mat::from_fn(big, m.rows(), m.cols(), |r, c| emb[m.get(r, c) as usize]);
        let mut out = self.clone();
        out.field = big.clone();
        for b in &mut out.blocks {
            b.x = b.x.as_ref().map(map);
            b.y = b.y.as_ref().map(map);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> ModuleJson {
        let triplets = |m: Mat| {
            let mut out = Vec::new();
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let v = m.get(r, c);
                    if v != 0 {
                        out.push((r, c, v));
                    }
                }
            }
            out
        };
        ModuleJson {
            params: self.params,
            field: self.field.spec(),
            basis: self.degrees().iter().map(|d| [d.i, d.j]).collect(),
            x: triplets(self.x_matrix()),
            y: triplets(self.y_matrix()),
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: &ModuleJson) -> Result<GradedModule, ModuleError> {
        let field = Field::from_spec(&json.field)?;
        let n = json.basis.len();
        let degrees: Vec<Degree> = json.basis.iter().map(|&[i, j]| Degree::new(i, j)).collect();
        let dense = |trips: &[(usize, usize, Elem)]| -> Result<Mat, ModuleError> {
            let mut m = Mat::zeros(&field, n, n);
            for &(r, c, v) in trips {
                if r >= n || c >= n || v as u32 >= field.order() {
                    return Err(ModuleError::BadData(format!("entry ({r},{c},{v}) out of range")));
                }
                m.set(r, c, v);
            }
            Ok(m)
        };
        let mut m = GradedModule::from_dense(json.params, field.clone(), &degrees, &dense(&json.x)?, &dense(&json.y)?)?;
        m.label = json.label.clone();
        Ok(m)
    }
}

/// Serialized module: one degree per basis vector and sparse `(row, col, value)` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub params: AlgebraParams,
    pub field: FieldSpec,
    pub basis: Vec<[i32; 2]>,
    #[serde(rename = "X")]
    pub x: Vec<(usize, usize, Elem)>,
    #[serde(rename = "Y")]
    pub y: Vec<(usize, usize, Elem)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Basis lookup for a tensor product; see [`GradedModule::tensor_index`].
#[derive(Clone, Debug)]
pub struct TensorIndex {
    starts: BTreeMap<(Degree, Degree), usize>,
    left: Vec<(Degree, usize)>,
    right: Vec<(Degree, usize)>,
    right_dims: BTreeMap<Degree, usize>,
}

impl TensorIndex {
    pub fn index(&self, u: usize, v: usize) -> usize {
        let (da, ka) = self.left[u];
        let (db, kb) = self.right[v];
        self.starts[&(da, db)] + ka * self.right_dims[&db] + kb
    }
}

struct Piece {
    a: usize,
    b: usize,
    offset: usize,
}

/// Position of each `block_a ⊗ block_b` inside the blocks of a tensor product.
struct TensorLayout {
    dims: BTreeMap<Degree, usize>,
    pieces: BTreeMap<Degree, Vec<Piece>>,
    lookup: BTreeMap<(Degree, Degree), usize>,
}

impl TensorLayout {
    fn new(a: &GradedModule, b: &GradedModule) -> TensorLayout {
        let mut pieces: BTreeMap<Degree, Vec<Piece>> = BTreeMap::new();
        let mut dims: BTreeMap<Degree, usize> = BTreeMap::new();
        let mut lookup = BTreeMap::new();
        for (ia, ba) in a.blocks.iter().enumerate() {
            for (ib, bb) in b.blocks.iter().enumerate() {
                let d = ba.degree + bb.degree;
                let n = dims.entry(d).or_default();
                lookup.insert((ba.degree, bb.degree), *n);
                pieces.entry(d).or_default().push(Piece { a: ia, b: ib, offset: *n });
                *n += ba.dim * bb.dim;
            }
        }
        TensorLayout { dims, pieces, lookup }
    }

    fn offset(&self, da: Degree, db: Degree) -> usize {
        self.lookup[&(da, db)]
    }
}

fn place(dst: &mut Mat, src: &Mat, ro: usize, co: usize) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            dst.set(ro + r, co + c, src.get(r, c));
        }
    }
}

/// Writes `a ⊗ I_n` at the given offsets.
fn place_kron_identity(dst: &mut Mat, a: &Mat, n: usize, ro: usize, co: usize) {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let v = a.get(r, c);
            if v != 0 {
                for k in 0..n {
                    dst.set(ro + r * n + k, co + c * n + k, v);
                }
            }
        }
    }
}

/// Writes `I_n ⊗ b` at the given offsets.
fn place_identity_kron(dst: &mut Mat, n: usize, b: &Mat, ro: usize, co: usize) {
    let f = dst.field().clone();
    for k in 0..n {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                let v = b.get(r, c);
                if v != 0 {
                    let (rr, cc) = (ro + k * b.rows() + r, co + k * b.cols() + c);
                    let old = dst.get(rr, cc);
                    dst.set(rr, cc, f.add(old, v));
                }
            }
        }
    }
}

/// A matrix `L` with `L * b = I` for `b` of full column rank.
pub fn left_inverse(b: &Mat) -> Option<Mat> {
    let k = b.cols();
    let (_, pivots) = b.transpose().rref();
    if pivots.len() < k {
        return None;
    }
    // rows `pivots` of b form an invertible k x k block
    let square = b.select_rows(&pivots);
    let inv = square.inverse()?;
    let mut out = Mat::zeros(b.field(), k, b.rows());
    for (col, &row) in pivots.iter().enumerate() {
        for r in 0..k {
            out.set(r, row, inv.get(r, col));
        }
    }
    Some(out)
}
