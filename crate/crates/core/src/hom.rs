//! Spaces of graded module maps.
//!
//! A graded map `f: A -> B` of shift `s` sends degree `d` of `A` into degree `d + s` of
//! `B` and commutes with `x` and `y`. The main solver walks the blocks of `A` in order of
//! total degree. On each block the values of `f` on the image of `x` and `y` are forced by
//! the blocks below; the remaining directions ("generators") get fresh unknowns, and every
//! linear relation among the incoming images becomes a linear constraint on the unknowns.
//! The Hom space is the solution space of those constraints.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::ModuleError;
use crate::gf::{Echelon, Elem, Field, Mat};
use crate::module::{Action, Degree, GradedModule};

/// A graded map, stored as one matrix per block of the source (absent when the target
/// degree is zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub shift: Degree,
    pub blocks: Vec<Option<Mat>>,
}

impl GradedMap {
    pub fn zero(a: &GradedModule, b: &GradedModule, shift: Degree) -> GradedMap {
        let blocks = a
            .blocks()
            .iter()
            .map(|blk| {
                let t = b.dim_at(blk.degree + shift);
                (t > 0).then(|| Mat::zeros(a.field(), t, blk.dim))
            })
            .collect();
        GradedMap { shift, blocks }
    }

    pub fn identity(a: &GradedModule) -> GradedMap {
        GradedMap {
            shift: Degree::ZERO,
            blocks: a.blocks().iter().map(|blk| Some(Mat::identity(a.field(), blk.dim))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|m| m.is_zero())
    }

    /// Matrix of the map in the global bases of `a` and `b`.
    pub fn to_dense(&self, a: &GradedModule, b: &GradedModule) -> Mat {
        let mut out = Mat::zeros(a.field(), b.dim(), a.dim());
        for (blk, m) in a.blocks().iter().zip(&self.blocks) {
            let Some(m) = m else { continue };
            let t = b.block(blk.degree + self.shift).expect("target block exists");
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    out.set(t.offset + r, blk.offset + c, m.get(r, c));
                }
            }
        }
        out
    }

    /// Reads a graded map out of a dense matrix, ignoring entries outside the graded pattern.
    pub fn from_dense(dense: &Mat, a: &GradedModule, b: &GradedModule, shift: Degree) -> GradedMap {
        let blocks = a
            .blocks()
            .iter()
            .map(|blk| {
                let t = b.block(blk.degree + shift)?;
                Some(Mat::from_fn(a.field(), t.dim, blk.dim, |r, c| dense.get(t.offset + r, blk.offset + c)))
            })
            .collect();
        GradedMap { shift, blocks }
    }

    /// `g ∘ f` where `f: a -> b` is `self`.
    pub fn then(&self, g: &GradedMap, a: &GradedModule, b: &GradedModule) -> GradedMap {
        let blocks = a
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(blk, f)| {
                let f = f.as_ref()?;
                let mid = b.block_index(blk.degree + self.shift)?;
                let g = g.blocks[mid].as_ref()?;
                Some(g.mul(f))
            })
            .collect();
        GradedMap { shift: self.shift + g.shift, blocks }
    }

    pub fn add_scaled(&mut self, c: Elem, other: &GradedMap) {
        assert_eq!(self.shift, other.shift);
        for (m, o) in self.blocks.iter_mut().zip(&other.blocks) {
            if let (Some(m), Some(o)) = (m, o) {
                m.add_scaled(c, o);
            }
        }
    }

    pub fn scaled(&self, c: Elem) -> GradedMap {
        GradedMap { shift: self.shift, blocks: self.blocks.iter().map(|m| m.as_ref().map(|m| m.scaled(c))).collect() }
    }

    /// Block-wise trace; only meaningful for shift zero endomorphisms.
    pub fn trace(&self, field: &Field) -> Elem {
        self.blocks.iter().flatten().fold(0, |acc, m| field.add(acc, m.trace()))
    }

    /// Checks that the map commutes with `x` and `y`.
    pub fn is_homomorphism(&self, a: &GradedModule, b: &GradedModule) -> bool {
        for (k, blk) in a.blocks().iter().enumerate() {
            for act in [Action::X, Action::Y] {
                let d = blk.degree;
                let t = b.dim_at(d + self.shift + act.step());
                if t == 0 {
                    continue;
                }
                let zero = || Mat::zeros(a.field(), t, blk.dim);
                // f(x v)
                let lhs = match (a.action(act, d), a.block_index(d + act.step())) {
                    (Some(ax), Some(k2)) => self.blocks[k2].as_ref().map_or_else(zero, |f2| f2.mul(ax)),
                    _ => zero(),
                };
                // x f(v)
                let rhs = match (&self.blocks[k], b.action(act, d + self.shift)) {
                    (Some(f), Some(bx)) => bx.mul(f),
                    _ => zero(),
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// How one source block of a map is rebuilt from the blocks below it.
#[derive(Clone, Debug)]
struct Recipe {
    /// Incoming columns `(action, source block, column)` whose images form a basis prefix.
    incoming: Vec<(Action, usize, usize)>,
    /// Action of `x` and `y` on the target, into this block's target degree.
    target_x: Option<Mat>,
    target_y: Option<Mat>,
    /// Inverse of `[incoming | standard generators]`.
    binv: Mat,
    generators: usize,
    first_param: usize,
}

/// A parametrised family of graded maps together with the subspace of admissible
/// parameters. Each parameter vector fixes the map on the generators of every block and
/// the rest follows by propagating along `x` and `y`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    field: Field,
    shift: Degree,
    /// Source block indices in propagation order.
    order: Vec<usize>,
    recipes: Vec<Option<Recipe>>,
    targets: Vec<usize>,
    /// Basis of admissible parameter vectors.
    solutions: Vec<Vec<Elem>>,
    num_params: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.solutions.len()
    }

    pub fn shift(&self) -> Degree {
        self.shift
    }

    fn materialize(&self, pi: &[Elem]) -> GradedMap {
        let f = &self.field;
        let mut blocks: Vec<Option<Mat>> = vec![None; self.recipes.len()];
        for &k in &self.order {
            let Some(recipe) = &self.recipes[k] else { continue };
            let t = self.targets[k];
            let n = recipe.binv.rows();
            // columns of the map evaluated on the basis [incoming | generators]
            let mut values = Mat::zeros(f, t, n);
            let mut pushed: Vec<(Action, usize, Mat)> = Vec::new();
            for (col, &(act, sk, c)) in recipe.incoming.iter().enumerate() {
                let bx = match act {
                    Action::X => recipe.target_x.as_ref(),
                    Action::Y => recipe.target_y.as_ref(),
                };
                let (Some(bx), Some(prev)) = (bx, blocks[sk].as_ref()) else {
                    continue;
                };
                if !pushed.iter().any(|(a, k, _)| *a == act && *k == sk) {
                    pushed.push((act, sk, bx.mul(prev)));
                }
                let image = &pushed.iter().find(|(a, k, _)| *a == act && *k == sk).expect("just pushed").2;
                for r in 0..t {
                    values.set(r, col, image.get(r, c));
                }
            }
            let offset = recipe.incoming.len();
            for g in 0..recipe.generators {
                for r in 0..t {
                    values.set(r, offset + g, pi[recipe.first_param + g * t + r]);
                }
            }
            blocks[k] = Some(values.mul(&recipe.binv));
        }
        GradedMap { shift: self.shift, blocks }
    }

    /// The `k`-th basis map.
    pub fn basis_map(&self, k: usize) -> GradedMap {
        self.materialize(&self.solutions[k])
    }

    pub fn basis(&self) -> Vec<GradedMap> {
        (0..self.dim()).map(|k| self.basis_map(k)).collect()
    }

    /// `Σ coeffs[k] · basis_map(k)`.
    pub fn combination(&self, coeffs: &[Elem]) -> GradedMap {
        assert_eq!(coeffs.len(), self.dim());
        let mut pi = vec![0; self.num_params];
        for (c, sol) in coeffs.iter().zip(&self.solutions) {
            self.field.axpy(&mut pi, *c, sol);
        }
        self.materialize(&pi)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> GradedMap {
        let q = self.field.order();
        let coeffs: Vec<Elem> = (0..self.dim()).map(|_| rng.gen_range(0..q) as Elem).collect();
        self.combination(&coeffs)
    }
}

/// The unknowns of the solver. Forms are kept in terms of the live unknowns only: each
/// constraint eliminates one live unknown, which is recorded as a combination of the
/// unknowns that were live at that moment.
struct Unknowns {
    field: Field,
    /// Parameter id of each live slot.
    live: Vec<usize>,
    total: usize,
    /// `param = Σ coef · other`, in elimination order.
    rules: Vec<(usize, Vec<(usize, Elem)>)>,
}

/// Substitution that removes one live slot, moving the last slot into its place.
struct Elimination {
    slot: usize,
    last: usize,
    row: Vec<Elem>,
}

impl Elimination {
    fn apply(&self, f: &Field, form: &mut Vec<Elem>) {
        if self.slot >= form.len() {
            return;
        }
        if form[self.slot] != 0 {
            let c = f.neg(form[self.slot]);
            if form.len() < self.row.len() {
                form.resize(self.row.len(), 0);
            }
            f.axpy(&mut form[..self.row.len()], c, &self.row);
        }
        form[self.slot] = form.get(self.last).copied().unwrap_or(0);
        form.truncate(self.last);
    }
}

impl Unknowns {
    fn width(&self) -> usize {
        self.live.len()
    }

    /// Adds `count` fresh unknowns with consecutive ids; returns the first id.
    fn fresh(&mut self, count: usize) -> usize {
        let first = self.total;
        self.live.extend(first..first + count);
        self.total += count;
        first
    }

    /// Imposes `v · π = 0` on the live slots. Returns the substitution to apply to every
    /// form still in use, or `None` when `v` vanishes.
    fn impose(&mut self, mut v: Vec<Elem>) -> Option<Elimination> {
        let f = &self.field;
        let slot = v.iter().rposition(|&c| c != 0)?;
        v.truncate(slot + 1);
        let inv = f.inv(v[slot]);
        f.scale(&mut v, inv);
        let rule =
            v[..slot].iter().enumerate().filter(|&(_, &c)| c != 0).map(|(q, &c)| (self.live[q], f.neg(c))).collect();
        self.rules.push((self.live[slot], rule));
        let last = self.live.len() - 1;
        self.live.swap_remove(slot);
        Some(Elimination { slot, last, row: v })
    }

    /// One full parameter vector per remaining live unknown.
    fn solutions(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        self.live
            .iter()
            .map(|&id| {
                let mut pi = vec![0; self.total];
                pi[id] = 1;
                for (param, rule) in self.rules.iter().rev() {
                    pi[*param] = rule.iter().fold(0, |acc, &(q, c)| f.add(acc, f.mul(c, pi[q])));
                }
                pi
            })
            .collect()
    }
}

/// Per-block parametrised values: `form[r * n + c]` is the coefficient row of entry `(r, c)`.
type Form = Vec<Vec<Elem>>;

/// The space of graded maps `a -> b` raising degrees by `shift`.
pub fn hom_space(a: &GradedModule, b: &GradedModule, shift: Degree) -> Result<HomSpace, ModuleError> {
    if a.params() != b.params() || a.field() != b.field() {
        return Err(ModuleError::ParamsMismatch);
    }
    let field = a.field().clone();
    let nblocks = a.blocks().len();
    let mut order: Vec<usize> = (0..nblocks).collect();
    order.sort_by_key(|&k| (a.blocks()[k].degree.total(), k));

    let targets: Vec<usize> = a.blocks().iter().map(|blk| b.dim_at(blk.degree + shift)).collect();
    // Number of later blocks that read each block's form.
    let mut readers: Vec<usize> = a
        .blocks()
        .iter()
        .map(|blk| {
            [Degree::X, Degree::Y]
                .iter()
                .filter(|&&step| a.block_index(blk.degree + step).is_some_and(|j| targets[j] > 0))
                .count()
        })
        .collect();
    let mut forms: Vec<Option<Form>> = vec![None; nblocks];
    let mut recipes: Vec<Option<Recipe>> = vec![None; nblocks];
    let mut unknowns = Unknowns { field: field.clone(), live: Vec::new(), total: 0, rules: Vec::new() };

    for &k in &order {
        let blk = &a.blocks()[k];
        let (d, n, t) = (blk.degree, blk.dim, targets[k]);
        if t == 0 {
            continue;
        }
        // Incoming images and the forced values of the map on them.
        let mut s_cols: Vec<Vec<Elem>> = Vec::new();
        let mut origins: Vec<(Action, usize, usize)> = Vec::new();
        let mut r_forms: Vec<Form> = Vec::new(); // per incoming column, per target row
        let mut sources = Vec::new();
        for act in [Action::X, Action::Y] {
            let src = d - act.step();
            let (Some(ax), Some(sk)) = (a.action(act, src), a.block_index(src)) else { continue };
            sources.push(sk);
            let bx = b.action(act, src + shift);
            let t_src = targets[sk];
            for c in 0..ax.cols() {
                s_cols.push(ax.column(c));
                origins.push((act, sk, c));
                let mut col_forms = vec![vec![0; unknowns.width()]; t];
                if let (Some(bx), Some(prev)) = (bx, forms[sk].as_ref()) {
                    let n_src = a.blocks()[sk].dim;
                    for (r, out) in col_forms.iter_mut().enumerate() {
                        for q in 0..t_src {
                            let coef = bx.get(r, q);
                            if coef != 0 {
                                let src_row = &prev[q * n_src + c];
                                field.axpy(&mut out[..src_row.len()], coef, src_row);
                            }
                        }
                    }
                }
                r_forms.push(col_forms);
            }
        }
        for sk in sources {
            readers[sk] -= 1;
            if readers[sk] == 0 {
                forms[sk] = None;
            }
        }
        let m = s_cols.len();
        let s = Mat::from_columns(&field, n, &s_cols);
        let (rref, pivots) = s.rref();
        // Relations among the incoming images force constraints.
        if pivots.len() < m {
            let mut is_pivot = vec![false; m];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            for free in (0..m).filter(|&c| !is_pivot[c]) {
                // z = e_free - Σ rref[i][free] e_{pivot_i}
                for r in 0..t {
                    let mut v = r_forms[free][r].clone();
                    v.resize(unknowns.width(), 0);
                    for (i, &pc) in pivots.iter().enumerate() {
                        let coef = rref.get(i, free);
                        if coef != 0 {
                            let src = &r_forms[pc][r];
                            field.axpy(&mut v[..src.len()], field.neg(coef), src);
                        }
                    }
                    if let Some(elim) = unknowns.impose(v) {
                        let rows = forms.iter_mut().flatten().chain(r_forms.iter_mut()).flatten();
                        rows.for_each(|row| elim.apply(&field, row));
                    }
                }
            }
        }
        // Complete the pivot columns to a basis with standard vectors.
        let mut ech = Echelon::new(&field, n);
        let mut basis_cols: Vec<Vec<Elem>> = Vec::with_capacity(n);
        for &pc in &pivots {
            ech.insert(s_cols[pc].clone());
            basis_cols.push(s_cols[pc].clone());
        }
        let mut generators = 0;
        for e in 0..n {
            if basis_cols.len() == n {
                break;
            }
            let mut v = vec![0; n];
            v[e] = 1;
            if ech.insert(v.clone()) {
                basis_cols.push(v);
                generators += 1;
            }
        }
        let binv = Mat::from_columns(&field, n, &basis_cols).inverse().expect("basis is invertible");
        let first_slot = unknowns.width();
        let first_param = unknowns.fresh(generators * t);
        let width = unknowns.width();
        let mut form: Form = vec![vec![0; width]; t * n];
        for r in 0..t {
            for c in 0..n {
                let row = &mut form[r * n + c];
                for (i, &pc) in pivots.iter().enumerate() {
                    let coef = binv.get(i, c);
                    if coef != 0 {
                        let src = &r_forms[pc][r];
                        field.axpy(&mut row[..src.len()], coef, src);
                    }
                }
                for g in 0..generators {
                    let coef = binv.get(pivots.len() + g, c);
                    let idx = first_slot + g * t + r;
                    row[idx] = field.add(row[idx], coef);
                }
            }
        }
        // Where x or y kills the whole block in A, it must kill the image in B too.
        for act in [Action::X, Action::Y] {
            if a.block_index(d + act.step()).is_some() {
                continue;
            }
            let Some(bx) = b.action(act, d + shift) else { continue };
            for r in 0..bx.rows() {
                for c in 0..n {
                    let mut v = vec![0; unknowns.width()];
                    for q in 0..t {
                        let coef = bx.get(r, q);
                        if coef != 0 {
                            let src = &form[q * n + c];
                            field.axpy(&mut v[..src.len()], coef, src);
                        }
                    }
                    if let Some(elim) = unknowns.impose(v) {
                        let rows = forms.iter_mut().flatten().flatten().chain(form.iter_mut());
                        rows.for_each(|row| elim.apply(&field, row));
                    }
                }
            }
        }
        if readers[k] > 0 {
            forms[k] = Some(form);
        }
        recipes[k] = Some(Recipe {
            incoming: pivots.iter().map(|&pc| origins[pc]).collect(),
            target_x: b.action(Action::X, d - Degree::X + shift).cloned(),
            target_y: b.action(Action::Y, d - Degree::Y + shift).cloned(),
            binv,
            generators,
            first_param,
        });
    }
    let solutions = unknowns.solutions();
    Ok(HomSpace { field, shift, order, recipes, targets, solutions, num_params: unknowns.total })
}

/// Basis of the graded Hom space as explicit maps.
pub fn graded_hom_basis(a: &GradedModule, b: &GradedModule, shift: Degree) -> Result<Vec<GradedMap>, ModuleError> {
    Ok(hom_space(a, b, shift)?.basis())
}

/// Reference solver: the nullspace of the full intertwining system in the unknown block
/// entries. Quadratic in the dimensions; intended for cross-checking.
pub fn dense_hom_basis(a: &GradedModule, b: &GradedModule, shift: Degree) -> Result<Vec<GradedMap>, ModuleError> {
    if a.params() != b.params() || a.field() != b.field() {
        return Err(ModuleError::ParamsMismatch);
    }
    let field = a.field();
    // unknown offsets per source block
    let mut offsets = Vec::new();
    let mut total = 0;
    for blk in a.blocks() {
        offsets.push(total);
        total += b.dim_at(blk.degree + shift) * blk.dim;
    }
    let var = |k: usize, r: usize, c: usize| offsets[k] + r * a.blocks()[k].dim + c;
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for (k, blk) in a.blocks().iter().enumerate() {
        let d = blk.degree;
        for act in [Action::X, Action::Y] {
            let t = b.dim_at(d + shift + act.step());
            if t == 0 {
                continue;
            }
            let ax = a.action(act, d);
            let k2 = a.block_index(d + act.step());
            let bx = b.action(act, d + shift);
            let t0 = b.dim_at(d + shift);
            // entry (r, c) of f_{d+e} a_x - b_x f_d
            for r in 0..t {
                for c in 0..blk.dim {
                    let mut eq = vec![0; total];
                    if let (Some(ax), Some(k2)) = (ax, k2) {
                        for q in 0..ax.rows() {
                            let v = ax.get(q, c);
                            if v != 0 {
                                let idx = var(k2, r, q);
                                eq[idx] = field.add(eq[idx], v);
                            }
                        }
                    }
                    if let Some(bx) = bx {
                        for q in 0..t0 {
                            let v = bx.get(r, q);
                            if v != 0 {
                                let idx = var(k, q, c);
                                eq[idx] = field.sub(eq[idx], v);
                            }
                        }
                    }
                    if eq.iter().any(|&v| v != 0) {
                        rows.push(eq);
                    }
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..total)
            .map(|k| {
                let mut v = vec![0; total];
                v[k] = 1;
                v
            })
            .collect()
    } else {
        let flat: Vec<Elem> = rows.iter().flatten().copied().collect();
        Mat::from_vec(field, rows.len(), total, flat).nullspace()
    };
    Ok(null
        .into_iter()
        .map(|v| {
            let blocks = a
                .blocks()
                .iter()
                .enumerate()
                .map(|(k, blk)| {
                    let t = b.dim_at(blk.degree + shift);
                    (t > 0).then(|| Mat::from_fn(field, t, blk.dim, |r, c| v[var(k, r, c)]))
                })
                .collect();
            GradedMap { shift, blocks }
        })
        .collect())
}

/// Dimension of the span of some graded maps, compared entrywise.
pub fn span_dim(maps: &[GradedMap]) -> usize {
    let Some(first) = maps.iter().flat_map(|m| m.blocks.iter().flatten()).next() else {
        return 0;
    };
    let field = first.field().clone();
    let flat: Vec<Vec<Elem>> =
        maps.iter().map(|m| m.blocks.iter().flatten().flat_map(|b| b.data().iter().copied()).collect()).collect();
    let n = flat.first().map_or(0, |v| v.len());
    let mut ech = Echelon::new(&field, n);
    for v in flat {
        ech.insert(v);
    }
    ech.dim()
}

/// The degree shifts `s` for which some degree of `a + s` meets a degree of `b`.
pub fn candidate_shifts(a: &GradedModule, b: &GradedModule) -> Vec<Degree> {
    let mut out: BTreeMap<Degree, ()> = BTreeMap::new();
    for ba in a.blocks() {
        for bb in b.blocks() {
            out.insert(bb.degree - ba.degree, ());
        }
    }
    out.into_keys().collect()
}
