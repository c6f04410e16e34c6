#![allow(dead_code)]

use rand::Rng;
use repx::diagram::SkewDiagram;
use repx::homsolver::ceil_log;
use repx::module::{AlgebraParams, GradedModule};

pub fn params(p: u16, r: u32, s: u32) -> AlgebraParams {
    AlgebraParams::new(p, r, s).unwrap()
}

pub fn diag(text: &str, p: u16, r: u32, s: u32) -> GradedModule {
    GradedModule::from_diagram(&SkewDiagram::parse(text).unwrap(), params(p, r, s)).unwrap()
}

/// Smallest parameters over `p` that admit every shape.
pub fn fitting_params(p: u16, shapes: &[&SkewDiagram]) -> AlgebraParams {
    let widest = shapes.iter().flat_map(|d| d.row_lengths()).max().unwrap_or(1);
    let tallest = shapes.iter().flat_map(|d| d.column_heights()).max().unwrap_or(1);
    params(p, ceil_log(p as u32, widest as u64), ceil_log(p as u32, tallest as u64))
}

/// Straight shape with up to `max_columns` columns of height at most `max_height`.
pub fn random_partition<R: Rng>(rng: &mut R, max_columns: usize, max_height: u32) -> SkewDiagram {
    let k = rng.gen_range(1..=max_columns);
    let mut heights: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=max_height)).collect();
    heights.sort_unstable_by(|a, b| b.cmp(a));
    SkewDiagram::partition(&heights).unwrap()
}

/// Skew shape (possibly disconnected) with up to `max_columns` columns.
pub fn random_skew<R: Rng>(rng: &mut R, max_columns: usize, max_height: u32) -> SkewDiagram {
    let k = rng.gen_range(1..=max_columns);
    let mut lambda: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=max_height)).collect();
    lambda.sort_unstable_by(|a, b| b.cmp(a));
    let mut mu: Vec<u32> = lambda.iter().map(|&l| rng.gen_range(0..l)).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    for i in 0..k {
        mu[i] = mu[i].min(lambda[i] - 1);
    }
    // clamping may break monotonicity of mu; restore it from the right
    for i in (0..k.saturating_sub(1)).rev() {
        mu[i] = mu[i].max(mu[i + 1]);
    }
    SkewDiagram::new(lambda.clone(), mu).unwrap_or_else(|_| SkewDiagram::partition(&lambda).unwrap())
}

/// Connected skew shape: consecutive columns overlap in at least one row.
pub fn random_connected<R: Rng>(rng: &mut R, max_columns: usize, max_height: u32) -> SkewDiagram {
    loop {
        let d = random_skew(rng, max_columns, max_height);
        if d.is_connected() {
            return d;
        }
    }
}

pub fn prime<R: Rng>(rng: &mut R, choices: &[u16]) -> u16 {
    choices[rng.gen_range(0..choices.len())]
}
