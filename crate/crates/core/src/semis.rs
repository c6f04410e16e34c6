//! Bookkeeping in the semisimplification: dropping negligible summands and tabulating
//! tensor products of a set of non-negligible indecomposables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, indecomposables_isomorphic, DecomposeOptions, Decomposition};
use crate::error::SemisError;
use crate::gf::Field;
use crate::module::GradedModule;

/// A module is negligible when its dimension is divisible by the characteristic.
pub fn is_negligible(m: &GradedModule) -> bool {
    m.dim().is_multiple_of(m.field().p() as usize)
}

#[derive(Clone, Debug)]
pub struct SimpleObject {
    pub label: String,
    pub module: GradedModule,
    /// The diagram the object is isomorphic to, when known.
    pub diagram: Option<String>,
}

/// Pairwise non-isomorphic, non-negligible indecomposables.
#[derive(Clone, Debug, Default)]
pub struct SimpleSet {
    objects: Vec<SimpleObject>,
    closure_verified: bool,
}

impl SimpleSet {
    pub fn new() -> SimpleSet {
        SimpleSet::default()
    }

    /// Adds an object after checking it is non-negligible, indecomposable and new.
    pub fn push(&mut self, label: impl Into<String>, module: GradedModule, seed: u64) -> Result<(), SemisError> {
        let label = label.into();
        if is_negligible(&module) {
            return Err(SemisError::NotSimple(label));
        }
        let d = decompose(&module, seed, &DecomposeOptions::default())?;
        if d.dims().len() != 1 {
            return Err(SemisError::NotSimple(label));
        }
        if let Some(other) = self.find(&module)? {
            return Err(SemisError::DuplicateObject(self.objects[other].label.clone(), label));
        }
        let diagram = d.summands[0].label.diagram.clone();
        self.objects.push(SimpleObject { label, module, diagram });
        self.closure_verified = false;
        Ok(())
    }

    pub fn objects(&self) -> &[SimpleObject] {
        &self.objects
    }

    pub fn labels(&self) -> Vec<String> {
        self.objects.iter().map(|o| o.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Whether every non-negligible summand of every pairwise tensor product is listed.
    pub fn closure_verified(&self) -> bool {
        self.closure_verified
    }

    /// Index of a listed object isomorphic to `m` up to a degree shift.
    pub fn find(&self, m: &GradedModule) -> Result<Option<usize>, SemisError> {
        for (k, obj) in self.objects.iter().enumerate() {
            let field = common_field(obj.module.field(), m.field())?;
            let a = over(&obj.module, &field)?;
            let b = over(m, &field)?;
            if a.dim() == b.dim() && indecomposables_isomorphic(&a, &b)?.is_some() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// `V{dim}`, primed until unused.
    fn fresh_label(&self, dim: usize) -> String {
        let mut label = format!("V{dim}");
        while self.objects.iter().any(|o| o.label == label) {
            label.push('\'');
        }
        label
    }
}

/// The smallest field containing both.
fn common_field(a: &Field, b: &Field) -> Result<Field, SemisError> {
    let (x, y) = (a.degree(), b.degree());
    if x % y == 0 {
        return Ok(a.clone());
    }
    if y % x == 0 {
        return Ok(b.clone());
    }
    let lcm = x / gcd(x, y) * y;
    Field::new(a.p() as u16, lcm).map_err(|e| SemisError::Module(e.into()))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn over(m: &GradedModule, field: &Field) -> Result<GradedModule, SemisError> {
    if m.field() == field {
        Ok(m.clone())
    } else {
        Ok(m.extend_scalars(field)?)
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Add unmatched non-negligible summands to the set instead of failing.
    pub auto_extend: bool,
    /// Largest set size reached by auto-extension.
    pub cap: usize,
    pub seed: u64,
    pub decompose: DecomposeOptions,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { auto_extend: false, cap: 16, seed: 0, decompose: DecomposeOptions::default() }
    }
}

/// A non-negligible summand that matched no object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unmatched {
    pub left: String,
    pub right: String,
    pub dim: usize,
    pub multiplicity: usize,
}

/// The tensor products of a set of objects with negligible summands dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTable {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub diagrams: Vec<Option<String>>,
    /// `cells[a][b]` lists `(object index, multiplicity)` by ascending index.
    pub cells: Vec<Vec<Vec<(usize, usize)>>>,
    pub closure_verified: bool,
    pub unmatched: Vec<Unmatched>,
    pub p: u32,
}

/// Seed for one cell, derived from the two labels so cells do not depend on evaluation order.
fn cell_seed(seed: u64, a: &str, b: &str) -> u64 {
    let mut h = seed ^ 0x243F_6A88_85A3_08D3;
    for byte in a.bytes().chain([0xff]).chain(b.bytes()) {
        h = mix(h ^ byte as u64);
    }
    h
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn decompose_pair(set: &SimpleSet, a: usize, b: usize, opts: &TableOptions) -> Result<Decomposition, SemisError> {
    let (x, y) = (&set.objects[a], &set.objects[b]);
    opts.decompose.check_size(x.module.dim() * y.module.dim())?;
    let field = common_field(x.module.field(), y.module.field())?;
    let product = over(&x.module, &field)?.tensor(&over(&y.module, &field)?)?;
    let seed = cell_seed(opts.seed, &x.label, &y.label);
    Ok(decompose(&product, seed, &opts.decompose)?)
}

/// Tabulates `a ⊗ b` for every pair in the set. With `auto_extend`, unmatched summands
/// join the set until it closes or reaches `cap` objects; the set is updated in place.
pub fn mult_table(set: &mut SimpleSet, opts: &TableOptions) -> Result<MultTable, SemisError> {
    let p = set.objects.first().map_or(2, |o| o.module.field().p());
    let mut cells: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut unmatched = Vec::new();
    loop {
        let n = set.len();
        let pending: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).filter(|k| !cells.contains_key(k)).collect();
        if pending.is_empty() {
            break;
        }
        let frozen = &*set;
        let results: Vec<Result<Decomposition, SemisError>> = if opts.decompose.parallel {
            pending.par_iter().map(|&(a, b)| decompose_pair(frozen, a, b, opts)).collect()
        } else {
            pending.iter().map(|&(a, b)| decompose_pair(frozen, a, b, opts)).collect()
        };
        for (&(a, b), result) in pending.iter().zip(results) {
            let d = result?;
            let mut cell: BTreeMap<usize, usize> = BTreeMap::new();
            for summand in d.non_negligible() {
                let index = match set.find(&summand.module)? {
                    Some(k) => Some(k),
                    None if opts.auto_extend && set.len() < opts.cap => {
                        let label = set.fresh_label(summand.module.dim());
                        let diagram = summand.label.diagram.clone();
                        set.objects.push(SimpleObject { label, module: summand.module.clone(), diagram });
                        Some(set.len() - 1)
                    }
                    None if opts.auto_extend => None,
                    None => {
                        return Err(SemisError::UnmatchedNonNegligibleSummand {
                            left: set.objects[a].label.clone(),
                            right: set.objects[b].label.clone(),
                            dim: summand.module.dim(),
                        })
                    }
                };
                match index {
                    Some(k) => *cell.entry(k).or_insert(0) += summand.multiplicity,
                    None => unmatched.push(Unmatched {
                        left: set.objects[a].label.clone(),
                        right: set.objects[b].label.clone(),
                        dim: summand.module.dim(),
                        multiplicity: summand.multiplicity,
                    }),
                }
            }
            cells.insert((a, b), cell.into_iter().collect());
        }
    }
    // every cell among the objects is filled; summands past the cap are listed as unmatched
    let n = set.len();
    let closure_verified = unmatched.is_empty();
    set.closure_verified = closure_verified;
    let cell_at = |a: usize, b: usize| cells[&(a.min(b), a.max(b))].clone();
    Ok(MultTable {
        labels: set.labels(),
        dims: set.objects.iter().map(|o| o.module.dim()).collect(),
        diagrams: set.objects.iter().map(|o| o.diagram.clone()).collect(),
        cells: (0..n).map(|a| (0..n).map(|b| cell_at(a, b)).collect()).collect(),
        closure_verified,
        unmatched,
        p,
    })
}

impl MultTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The cell as `(label, multiplicity)` pairs.
    pub fn cell(&self, a: usize, b: usize) -> Vec<(String, usize)> {
        self.cells[a][b].iter().map(|&(k, m)| (self.labels[k].clone(), m)).collect()
    }

    /// `N_{ab}^c` for all `a, b, c`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u32>>> {
        let n = self.len();
        let mut out = vec![vec![vec![0u32; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for &(c, m) in &self.cells[a][b] {
                    out[a][b][c] = m as u32;
                }
            }
        }
        out
    }

    /// Cell text such as `k + V5 + 2*V7`, or `0` when everything is negligible. Summands
    /// left out by the object cap appear as `[dim]`.
    pub fn cell_text(&self, a: usize, b: usize) -> String {
        let term = |name: String, m: usize| if m == 1 { name } else { format!("{m}*{name}") };
        let (la, lb) = (&self.labels[a], &self.labels[b]);
        let parts: Vec<String> = self.cells[a][b]
            .iter()
            .map(|&(k, m)| term(self.labels[k].clone(), m))
            .chain(
                self.unmatched
                    .iter()
                    .filter(|u| (&u.left, &u.right) == (la, lb) || (&u.left, &u.right) == (lb, la))
                    .map(|u| term(format!("[{}]", u.dim), u.multiplicity)),
            )
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Aligned text table with objects along both axes.
    pub fn render_ascii(&self) -> String {
        let n = self.len();
        let mut grid: Vec<Vec<String>> =
            vec![std::iter::once(String::new()).chain(self.labels.iter().cloned()).collect()];
        for a in 0..n {
            grid.push(std::iter::once(self.labels[a].clone()).chain((0..n).map(|b| self.cell_text(a, b))).collect());
        }
        let widths: Vec<usize> =
            (0..=n).map(|c| grid.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
        let rule: String = widths.iter().map(|w| "-".repeat(w + 2)).collect::<Vec<_>>().join("+");
        let mut out = String::new();
        for (r, row) in grid.iter().enumerate() {
            let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!(" {cell:<w$} ")).collect();
            let _ = writeln!(out, "{}", line.join("|").trim_end());
            if r == 0 {
                let _ = writeln!(out, "{rule}");
            }
        }
        if !self.closure_verified {
            let _ = writeln!(out, "(not closed: {} unmatched summand classes, shown as [dim])", self.unmatched.len());
        }
        out
    }

    pub fn to_json(&self) -> TableJson {
        let n = self.len();
        let mut cells = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let key = format!("{},{}", self.labels[a], self.labels[b]);
                let entries = self.cells[a][b]
                    .iter()
                    .map(|&(k, m)| CellEntry { label: self.labels[k].clone(), mult: m })
                    .collect();
                cells.insert(key, entries);
            }
        }
        TableJson {
            objects: (0..n)
                .map(|a| ObjectJson {
                    label: self.labels[a].clone(),
                    dim: self.dims[a],
                    diagram: self.diagrams[a].clone(),
                })
                .collect(),
            cells,
            closure_verified: self.closure_verified,
            unmatched: self.unmatched.clone(),
        }
    }

    /// Structure constants up to relabelling.
    pub fn fingerprint(&self) -> Fingerprint {
        grothendieck_fingerprint(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub label: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub label: String,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub objects: Vec<ObjectJson>,
    /// Keyed by `"a,b"`.
    pub cells: BTreeMap<String, Vec<CellEntry>>,
    pub closure_verified: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unmatched: Vec<Unmatched>,
}

/// Integer structure constants of a based ring, with objects sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub labels: Vec<String>,
    /// `constants[a][b][c] = N_{ab}^c`.
    pub constants: Vec<Vec<Vec<u32>>>,
}

/// Structure constants of a table, canonicalised by sorting labels.
pub fn grothendieck_fingerprint(t: &MultTable) -> Fingerprint {
    Fingerprint::new(t.labels.clone(), t.structure_constants())
}

impl Fingerprint {
    /// Sorts the objects by label.
    pub fn new(labels: Vec<String>, constants: Vec<Vec<Vec<u32>>>) -> Fingerprint {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let constants = order
            .iter()
            .map(|&a| order.iter().map(|&b| order.iter().map(|&c| constants[a][b][c]).collect()).collect())
            .collect();
        Fingerprint { labels: order.iter().map(|&a| labels[a].clone()).collect(), constants }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// A bijection `sigma` of objects with `N_{ab}^c = M_{σa σb}^{σc}`, by exhaustive search
    /// with pruning on partial assignments.
    pub fn isomorphism_to(&self, other: &Fingerprint) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        // objects can only correspond when their rows have the same multiset of entries
        let signature = |f: &Fingerprint, a: usize| {
            let mut v: Vec<u32> = f.constants[a].iter().flatten().copied().collect();
            v.sort_unstable();
            let mut self_square = f.constants[a][a].clone();
            self_square.sort_unstable();
            (v, self_square)
        };
        let mine: Vec<_> = (0..n).map(|a| signature(self, a)).collect();
        let theirs: Vec<_> = (0..n).map(|a| signature(other, a)).collect();
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn consistent(x: &Fingerprint, y: &Fingerprint, sigma: &[usize], upto: usize) -> bool {
            // every triple among assigned objects that involves the newest one
            let last = upto;
            for a in 0..=upto {
                for b in 0..=upto {
                    for c in 0..=upto {
                        if a != last && b != last && c != last {
                            continue;
                        }
                        if x.constants[a][b][c] != y.constants[sigma[a]][sigma[b]][sigma[c]] {
                            return false;
                        }
                    }
                }
            }
            true
        }
        fn search(
            x: &Fingerprint,
            y: &Fingerprint,
            k: usize,
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
            candidates: &dyn Fn(usize, usize) -> bool,
        ) -> bool {
            if k == x.len() {
                return true;
            }
            for t in 0..x.len() {
                if used[t] || !candidates(k, t) {
                    continue;
                }
                sigma[k] = t;
                used[t] = true;
                if consistent(x, y, sigma, k) && search(x, y, k + 1, sigma, used, candidates) {
                    return true;
                }
                used[t] = false;
            }
            sigma[k] = usize::MAX;
            false
        }
        let candidates = |a: usize, t: usize| mine[a] == theirs[t];
        search(self, other, 0, &mut sigma, &mut used, &candidates).then_some(sigma)
    }

    pub fn equivalent(&self, other: &Fingerprint) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// `Σ_e N_{ab}^e N_{ec}^d = Σ_f N_{bc}^f N_{af}^d` for all `a, b, c, d`.
    pub fn is_associative(&self) -> bool {
        let n = self.len();
        let k = &self.constants;
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    (0..n).all(|d| {
                        let left: u32 = (0..n).map(|e| k[a][b][e] * k[e][c][d]).sum();
                        let right: u32 = (0..n).map(|f| k[b][c][f] * k[a][f][d]).sum();
                        left == right
                    })
                })
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.constants[a][b] == self.constants[b][a]))
    }
}

#[cfg(test)]
mod tests;
