//! Skew partition diagrams and their row/column statistics.
//!
//! A diagram is a finite set of cells `(i, j)` (column `i`, row `j`). Column `i`
//! occupies rows `mu_i .. lambda_i`; both sequences are weakly decreasing, which is
//! exactly the condition for "move right" and "move up" to commute on cells.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewDiagram {
    /// Top (exclusive) row of each column.
    lambda: Vec<u32>,
    /// Bottom row of each column.
    mu: Vec<u32>,
}

impl fmt::Debug for SkewDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewDiagram({})", self.render())
    }
}

impl fmt::Display for SkewDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn parse_list(text: &str) -> Result<Vec<u32>, DiagramError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u32>().map_err(|_| DiagramError::MalformedText(format!("bad entry {t:?}")))
        })
        .collect()
}

fn weakly_decreasing(v: &[u32]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

impl SkewDiagram {
    /// Straight or skew shape from `lambda` and an optional `mu` (zero-padded).
    pub fn new(lambda: Vec<u32>, mu: Vec<u32>) -> Result<SkewDiagram, DiagramError> {
        if lambda.is_empty() || lambda.contains(&0) {
            return Err(DiagramError::MalformedText("lambda must be a nonempty list of positive integers".into()));
        }
        if mu.len() > lambda.len() {
            return Err(DiagramError::MalformedText("mu is longer than lambda".into()));
        }
        if !weakly_decreasing(&lambda) {
            return Err(DiagramError::NotWeaklyDecreasing(lambda));
        }
        let mut mu = mu;
        mu.resize(lambda.len(), 0);
        if !weakly_decreasing(&mu) {
            return Err(DiagramError::NotWeaklyDecreasing(mu));
        }
        if let Some(k) = (0..lambda.len()).find(|&k| mu[k] >= lambda[k]) {
            return Err(DiagramError::MuNotStrictlyBelowLambda(k));
        }
        Ok(SkewDiagram { lambda, mu })
    }

    /// Straight shape with the given column heights.
    pub fn partition(heights: &[u32]) -> Result<SkewDiagram, DiagramError> {
        SkewDiagram::new(heights.to_vec(), Vec::new())
    }

    /// A single column of `h` cells.
    pub fn column(h: u32) -> SkewDiagram {
        SkewDiagram::partition(&[h]).expect("positive column height")
    }

    /// A single row of `w` cells.
    pub fn row(w: u32) -> SkewDiagram {
        SkewDiagram::partition(&vec![1; w as usize]).expect("positive row length")
    }

    /// Parses `l1,l2,...[/m1,m2,...]`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<SkewDiagram, DiagramError> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(DiagramError::MalformedText("empty diagram".into()));
        }
        let mut parts = cleaned.split('/');
        let lambda = parse_list(parts.next().unwrap_or_default())?;
        let mu = match parts.next() {
            Some(m) => parse_list(m)?,
            None => Vec::new(),
        };
        if parts.next().is_some() {
            return Err(DiagramError::MalformedText("more than one '/'".into()));
        }
        SkewDiagram::new(lambda, mu)
    }

    /// Canonical text: `mu` is omitted when zero, otherwise written at full length.
    pub fn render(&self) -> String {
        let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.mu.iter().all(|&m| m == 0) {
            join(&self.lambda)
        } else {
            format!("{}/{}", join(&self.lambda), join(&self.mu))
        }
    }

    /// ASCII picture, top row first, `#` per cell.
    pub fn picture(&self) -> String {
        let top = self.num_rows();
        let mut out = String::new();
        for j in (0..top).rev() {
            let line: String =
                (0..self.num_columns()).map(|i| if self.contains(i as i64, j as i64) { '#' } else { '.' }).collect();
            out.push_str(line.trim_end_matches('.'));
            out.push('\n');
        }
        out
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn num_columns(&self) -> usize {
        self.lambda.len()
    }

    /// Number of rows spanned (index of the highest row plus one).
    pub fn num_rows(&self) -> usize {
        self.lambda[0] as usize
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        if i < 0 || j < 0 || i as usize >= self.lambda.len() {
            return false;
        }
        let i = i as usize;
        (self.mu[i] as i64) <= j && j < self.lambda[i] as i64
    }

    /// Cells in column-major order.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, (&l, &m)) in self.lambda.iter().zip(&self.mu).enumerate() {
            for j in m..l {
                out.push((i as u32, j));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.lambda.iter().zip(&self.mu).map(|(&l, &m)| (l - m) as usize).sum()
    }

    /// Number of cells in column `i`.
    pub fn height(&self, i: usize) -> u32 {
        self.lambda.get(i).map_or(0, |&l| l - self.mu[i])
    }

    /// Number of cells in row `j`.
    pub fn length(&self, j: u32) -> u32 {
        self.lambda.iter().zip(&self.mu).filter(|(&l, &m)| m <= j && j < l).count() as u32
    }

    pub fn column_heights(&self) -> Vec<u32> {
        (0..self.num_columns()).map(|i| self.height(i)).collect()
    }

    pub fn row_lengths(&self) -> Vec<u32> {
        (0..self.num_rows() as u32).map(|j| self.length(j)).collect()
    }

    /// Whether this is a straight shape (cyclic module generated at the origin).
    pub fn is_straight(&self) -> bool {
        self.mu.iter().all(|&m| m == 0)
    }

    /// True iff every column has at most `p^s` cells and every row at most `p^r`.
    pub fn validate_for(&self, p: u32, r: u32, s: u32) -> bool {
        let col_bound = (p as u64).saturating_pow(s);
        let row_bound = (p as u64).saturating_pow(r);
        self.column_heights().iter().all(|&h| h as u64 <= col_bound)
            && self.row_lengths().iter().all(|&l| l as u64 <= row_bound)
    }

    /// Edge-connectivity of the cell set.
    pub fn is_connected(&self) -> bool {
        let cells: BTreeSet<(i64, i64)> = self.cells().into_iter().map(|(i, j)| (i as i64, j as i64)).collect();
        let Some(&start) = cells.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((i, j)) = queue.pop_front() {
            for n in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
                if cells.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == cells.len()
    }

    /// Residues of the column heights modulo `modulus`, one per column.
    pub fn columns_mod(&self, modulus: u64) -> Vec<u64> {
        self.column_heights().iter().map(|&h| h as u64 % modulus).collect()
    }

    /// Mirror in the diagonal: rows become columns.
    pub fn transpose(&self) -> Result<SkewDiagram, DiagramError> {
        let rows = self.num_rows() as u32;
        let mut lambda = Vec::new();
        let mut mu = Vec::new();
        for j in 0..rows {
            let start = self.mu.iter().filter(|&&m| m > j).count() as u32;
            let end = self.lambda.iter().filter(|&&l| l > j).count() as u32;
            if start >= end {
                return Err(DiagramError::MalformedText("transpose would have an empty column".into()));
            }
            lambda.push(end);
            mu.push(start);
        }
        SkewDiagram::new(lambda, mu)
    }

    /// Rotation by 180 degrees, re-anchored at the origin.
    pub fn rotate(&self) -> SkewDiagram {
        let top = self.lambda[0];
        let lambda: Vec<u32> = self.mu.iter().rev().map(|&m| top - m).collect();
        let mu: Vec<u32> = self.lambda.iter().rev().map(|&l| top - l).collect();
        let floor = *mu.iter().min().unwrap_or(&0);
        SkewDiagram::new(lambda.iter().map(|l| l - floor).collect(), mu.iter().map(|m| m - floor).collect())
            .expect("rotation of a skew shape is a skew shape")
    }

    pub fn stats(&self) -> DiagramStats {
        DiagramStats::of(self)
    }
}

impl FromStr for SkewDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SkewDiagram::parse(s)
    }
}

/// Row and column statistics used by the row-sum bookkeeping.
///
/// `height`/`length` count cells. A column `i` is descending when the column to its
/// left is strictly taller (a virtual column `-1` of infinite height makes column 0
/// descending); its `rowlength` is the length of its top row. `floor(j)` is the highest
/// row strictly longer than row `j` (`-1` if none) and `roof(j)` the highest row of the
/// same length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramStats {
    pub length: Vec<u32>,
    pub height: Vec<u32>,
    pub col: BTreeMap<u32, usize>,
    pub rowlength: BTreeMap<usize, u32>,
    pub floor: Vec<i64>,
    pub roof: Vec<u32>,
    pub descending: BTreeSet<usize>,
}

impl DiagramStats {
    fn of(d: &SkewDiagram) -> DiagramStats {
        let length = d.row_lengths();
        let height = d.column_heights();
        let mut col = BTreeMap::new();
        let mut descending = BTreeSet::new();
        let mut rowlength = BTreeMap::new();
        for (i, &h) in height.iter().enumerate() {
            let left_taller = i == 0 || height[i - 1] > h;
            if left_taller {
                descending.insert(i);
            }
            if i == 0 || height[i - 1] != h {
                col.entry(h).or_insert(i);
            }
            if left_taller && h > 0 {
                rowlength.insert(i, d.length(d.mu[i] + h - 1));
            }
        }
        let rows = length.len();
        let floor =
            (0..rows).map(|j| (0..rows).rev().find(|&k| length[k] > length[j]).map_or(-1, |k| k as i64)).collect();
        let roof = (0..rows)
            .map(|j| (0..rows).rev().find(|&k| length[k] == length[j]).expect("row j itself qualifies") as u32)
            .collect();
        DiagramStats { length, height, col, rowlength, floor, roof, descending }
    }
}
