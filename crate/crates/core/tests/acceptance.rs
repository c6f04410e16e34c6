//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with its runtime.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{diag, fitting_params, params, prime, random_connected, random_partition, random_skew};
use repx::campaign::{run_campaign, CampaignConfig, CampaignReport};
use repx::decompose::{decompose, indecomposability_certificate, is_isomorphic, Certificate, DecomposeOptions};
use repx::diagram::SkewDiagram;
use repx::hom::graded_hom_basis;
use repx::homsolver::{
    binom_lucas, block_sum, build_hom_system, ceil_log, column_sum, hockey_stick, BlockSumForm, FamilyVariant,
};
use repx::module::{ColumnModuleSpec, Degree, GradedModule};
use repx::semis::{mult_table, MultTable, SimpleSet, TableOptions};

type Verdict = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn sorted_dims(m: &GradedModule, seed: u64) -> Result<Vec<usize>, String> {
    let d = decompose(m, seed, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    Ok(d.dims())
}

/// Column `V_5` tensor its dual over `alpha_3(0,2)`.
fn golden_decomposition_columns() -> Verdict {
    let v5 = diag("5", 3, 0, 2);
    let d = decompose(&v5.tensor(&v5.dual()).unwrap(), 0, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    ensure(d.dims() == [1, 3, 5, 7, 9], || format!("dims {:?}", d.dims()))?;
    ensure(d.summands.iter().all(|s| s.multiplicity == 1), || "a multiplicity above 1".into())?;
    ensure(d.extension_degree() == 1, || format!("extension degree {}", d.extension_degree()))?;
    Ok(format!("dims {:?}, e = 1", d.dims()))
}

fn column_table() -> Result<MultTable, String> {
    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 0, 2)), 0).map_err(|e| e.to_string())?;
    set.push("V5", diag("5", 3, 0, 2), 0).map_err(|e| e.to_string())?;
    set.push("V7", diag("7", 3, 0, 2), 0).map_err(|e| e.to_string())?;
    mult_table(&mut set, &TableOptions::default()).map_err(|e| e.to_string())
}

fn golden_table_columns(tables: &mut Vec<MultTable>) -> Verdict {
    let t = column_table()?;
    let expected = [["k", "V5", "V7"], ["V5", "k + V5 + V7", "V5"], ["V7", "V5", "k"]];
    for a in 0..3 {
        for b in 0..3 {
            ensure(t.cell_text(a, b) == expected[a][b], || {
                format!("{} x {} = {}, expected {}", t.labels[a], t.labels[b], t.cell_text(a, b), expected[a][b])
            })?;
        }
    }
    ensure(t.closure_verified, || "table not closed".into())?;
    tables.push(t);
    Ok("3x3 table matches cell for cell".into())
}

/// The ten-cell staircase over `alpha_3(1,1)` and the five-object table it generates.
fn golden_staircase(tables: &mut Vec<MultTable>) -> Verdict {
    let v = diag("6,6,4,3,1/5,3,2,0,0", 3, 1, 1);
    let vv = decompose(&v.tensor(&v).unwrap(), 0, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    let mut kept: Vec<usize> = vv.non_negligible().iter().map(|s| s.module.dim()).collect();
    kept.sort_unstable();
    ensure(kept == [1, 10, 16, 34], || format!("non-negligible dims {kept:?}"))?;
    ensure(vv.non_negligible().iter().all(|s| s.multiplicity == 1), || "repeated summand".into())?;

    let mut set = SimpleSet::new();
    set.push("k", GradedModule::trivial(params(3, 1, 1)), 0).map_err(|e| e.to_string())?;
    set.push("V", v, 0).map_err(|e| e.to_string())?;
    let opts = TableOptions { auto_extend: true, ..TableOptions::default() };
    let t = mult_table(&mut set, &opts).map_err(|e| e.to_string())?;
    ensure(t.closure_verified && t.len() == 5, || format!("{} objects, closed {}", t.len(), t.closure_verified))?;
    let by_dim = |d: usize| (2..5).find(|&i| t.dims[i] == d).ok_or(format!("no object of dim {d}"));
    let (k, vi) = (0usize, 1usize);
    let (v10, v16, v34) = (by_dim(10)?, by_dim(16)?, by_dim(34)?);
    let one = |x: usize| vec![(x, 1)];
    let mut vv_cell = vec![(k, 1), (v10, 1), (v16, 1), (v34, 1)];
    vv_cell.sort_unstable();
    let mut expected = vec![((vi, vi), vv_cell)];
    for i in [v10, v16, v34] {
        expected.push(((vi, i), one(vi)));
        expected.push(((i, i), one(k)));
        expected.push(((k, i), one(i)));
    }
    expected.push(((k, vi), one(vi)));
    expected.push(((v10, v16), one(v34)));
    expected.push(((v10, v34), one(v16)));
    expected.push(((v16, v34), one(v10)));
    for ((a, b), cell) in &expected {
        for (x, y) in [(*a, *b), (*b, *a)] {
            ensure(&t.cells[x][y] == cell, || format!("{} x {} = {}", t.labels[x], t.labels[y], t.cell_text(x, y)))?;
        }
    }
    tables.push(t);
    Ok("V x V keeps {1, 10, 16, 34}; 5x5 table matches".into())
}

fn golden_hook() -> Verdict {
    let v = diag("7,2,2", 3, 1, 2);
    let dual = sorted_dims(&v.tensor(&v.dual()).unwrap(), 0)?;
    ensure(dual == [1, 3, 9, 9, 46, 53], || format!("V x V* dims {dual:?}"))?;
    let square = sorted_dims(&v.tensor(&v).unwrap(), 0)?;
    ensure(square == [3, 9, 9, 23, 25, 52], || format!("V x V dims {square:?}"))?;
    Ok(format!("V x V* {dual:?}, V x V {square:?}"))
}

fn family_campaigns(campaigns: &mut Vec<CampaignReport>) -> Verdict {
    let mut summary = Vec::new();
    for variant in [FamilyVariant::Columns, FamilyVariant::Rows] {
        let config = CampaignConfig::benson(variant, 100, 2024);
        let report = run_campaign(&config, true);
        let v5_everywhere = report.reports.iter().all(|r| r.checks.iter().any(|c| c.w_dim == 5 && c.criterion));
        ensure(v5_everywhere && report.clean(), || {
            format!(
                "{variant:?}: {} counterexamples, first {:?}",
                report.counterexamples.len(),
                report.counterexamples.first()
            )
        })?;
        let eligible = report.reports.iter().filter(|r| r.dim * r.dim <= 3600).count();
        ensure(report.decomposed == eligible, || {
            format!("{variant:?}: decomposed {} of {eligible}", report.decomposed)
        })?;
        let confirmed =
            report.reports.iter().filter(|r| r.decomposed()).all(|r| {
                [5, 7].iter().all(|&w| r.checks.iter().any(|c| c.w_dim == w && c.decomposition == Some(true)))
            });
        ensure(confirmed, || format!("{variant:?}: decomposition missed V5 or V7"))?;
        summary.push(format!("{variant:?} {}/{} ({} decomposed)", report.passed, report.trials, report.decomposed));
        campaigns.push(report);
    }
    Ok(summary.join(", "))
}

fn hom_space_cross_check() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let p = prime(&mut rng, &[2, 3, 5]);
        let v_shape = random_partition(&mut rng, 4, 7);
        let n = rng.gen_range(0..=4u32);
        let m = rng.gen_range(0..=5u32);
        let spec = ColumnModuleSpec::new(n, m);
        let column = SkewDiagram::column(spec.dim() as u32);
        let params = fitting_params(p, &[&v_shape, &column]);
        let v = GradedModule::from_diagram(&v_shape, params).unwrap();
        let w = GradedModule::column_module(spec, params).unwrap();
        let system = build_hom_system(&v, spec).map_err(|e| e.to_string())?;
        let homs = graded_hom_basis(&v, &v.tensor(&w).unwrap(), Degree::ZERO).map_err(|e| e.to_string())?;
        if system.solution_dim() != homs.len() {
            mismatches.push(format!(
                "{} p={p} n={n} m={m}: {} vs {}",
                v_shape.render(),
                system.solution_dim(),
                homs.len()
            ));
        }
    }
    ensure(mismatches.is_empty(), || format!("{} mismatches, first {}", mismatches.len(), mismatches[0]))?;
    Ok("200/200 solution dimensions agree".into())
}

/// Rows `0..=max_j` of Pascal's triangle in exact integers, reduced mod `p`.
fn pascal_mod_p(max_j: usize, max_l: usize, p: u32) -> Vec<Vec<u32>> {
    let mut row = vec![BigUint::from(1u32)];
    let mut out = Vec::with_capacity(max_j + 1);
    for j in 0..=max_j {
        out.push((0..=max_l).map(|l| row.get(l).map_or(0, |x| (x % p).to_u32().unwrap())).collect());
        let mut next = vec![BigUint::from(1u32); j + 2];
        for k in 1..=j {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
    }
    out
}

fn binomial_identities(campaigns: &[CampaignReport]) -> Verdict {
    // congruent tops agree on every bottom below the modulus
    let mut cases = 0u64;
    for p in [2u32, 3, 5] {
        for g in 0..=3u32 {
            let q = p.pow(g) as usize;
            let top = 3 * q;
            let table = pascal_mod_p(top, q, p);
            for h in 0..=top {
                for j in (h % q.max(1)..=top).step_by(q.max(1)) {
                    for l in 0..q {
                        let exact = (table[j][l], table[h][l]);
                        let lucas = (binom_lucas(j as u64, l as u64, p), binom_lucas(h as u64, l as u64, p));
                        ensure(exact.0 == exact.1 && lucas == exact, || {
                            format!("C({j},{l}) vs C({h},{l}) mod {p}: exact {exact:?}, lucas {lucas:?}")
                        })?;
                        cases += 1;
                    }
                }
            }
        }
    }

    // block sums against their closed forms
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut boundary = 0;
    for _ in 0..500 {
        let p = prime(&mut rng, &[3, 5]) as u32;
        let n = rng.gen_range(0..=4u32);
        let h = rng.gen_range(1..=40u64);
        let g = ceil_log(p, h).max(ceil_log(p, 2 * n as u64 + 1));
        let q = (p as u64).pow(g);
        let a: Vec<u16> = (0..=n).map(|_| rng.gen_range(0..p) as u16).collect();
        let form = BlockSumForm::new(&a, n, h, g, p).ok_or("block form rejected its own parameters")?;
        ensure(form.c == hockey_stick(&a, n, h, p), || format!("p={p} n={n} h={h} a={a:?}: c mismatch"))?;
        // a full period contributes nothing unless W fills it exactly
        if 2 * n as u64 + 1 < q {
            ensure(form.period == 0, || format!("p={p} n={n} g={g} a={a:?}: period sum {}", form.period))?;
        } else {
            boundary += 1;
        }
        let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..6u64) * q + if rng.gen_bool(0.5) { h % q } else { 0 };
        let (mut j1, mut j2) = (pick(&mut rng), pick(&mut rng));
        if j1 > j2 {
            std::mem::swap(&mut j1, &mut j2);
        }
        let length = rng.gen_range(1..=12u64);
        let direct = block_sum(j1, j2, length, &a, n, p);
        let closed = form.predict(j1, j2, length);
        ensure(closed == Some(direct), || {
            format!("p={p} n={n} h={h} a={a:?} {j1}..{j2} x{length}: {direct} vs {closed:?}")
        })?;
    }

    // row-sum identity and length congruence on every campaign diagram
    let mut diagrams = 0;
    for report in campaigns {
        for r in &report.reports {
            ensure(r.error.is_none() && r.checks.iter().all(|c| c.identities), || {
                format!("trial {} ({}) seed {}: {:?} {:?}", r.index, r.diagram, r.seed, r.error, r.checks)
            })?;
            diagrams += 1;
        }
    }
    ensure(diagrams > 0, || "no campaign diagrams to check".into())?;
    Ok(format!("{cases} binomial cases, 500 block sums ({boundary} with 2n+1 = p^g), {diagrams} campaign diagrams"))
}

fn property_suites(tables: &[MultTable]) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    for _ in 0..100 {
        let p = prime(&mut rng, &[2, 3, 5]);
        let (a, b) = (random_skew(&mut rng, 4, 6), random_skew(&mut rng, 3, 4));
        let params = fitting_params(p, &[&a, &b]);
        let ma = GradedModule::from_diagram(&a, params).unwrap();
        let mb = GradedModule::from_diagram(&b, params).unwrap();
        for m in [&ma, &ma.dual(), &ma.tensor(&mb).unwrap()] {
            m.check_invariants().map_err(|e| format!("{} over p={p}: {e}", a.render()))?;
        }
    }

    for k in 0..50 {
        let p = prime(&mut rng, &[2, 3, 5]);
        let (a, b) = (random_skew(&mut rng, 3, 4), random_skew(&mut rng, 3, 3));
        let params = fitting_params(p, &[&a, &b]);
        let ma = GradedModule::from_diagram(&a, params).unwrap();
        let mb = GradedModule::from_diagram(&b, params).unwrap();
        let m =
            if k % 2 == 0 { ma.tensor(&mb).unwrap() } else { ma.tensor(&mb.dual()).unwrap().direct_sum(&ma).unwrap() };
        let opts = DecomposeOptions::default();
        let first = decompose(&m, 1, &opts).map_err(|e| e.to_string())?;
        let second = decompose(&m, 2, &opts).map_err(|e| e.to_string())?;
        let classes = |d: &repx::decompose::Decomposition| {
            let mut v: Vec<(usize, usize, String)> =
                d.summands.iter().map(|s| (s.module.dim(), s.multiplicity, format!("{:?}", s.label.degrees))).collect();
            v.sort();
            v
        };
        ensure(classes(&first) == classes(&second), || {
            format!("{} x {} p={p}: seeds disagree", a.render(), b.render())
        })?;
        let parts: Vec<GradedModule> =
            first.summands.iter().flat_map(|s| s.shifts.iter().map(|&sh| s.module.shifted(sh))).collect();
        let refs: Vec<&GradedModule> = parts.iter().collect();
        let resum = GradedModule::direct_sum_all(m.params(), &first.field, &refs).map_err(|e| e.to_string())?;
        let input = m.extend_scalars(&first.field).map_err(|e| e.to_string())?;
        ensure(is_isomorphic(&resum, &input).map_err(|e| e.to_string())?, || {
            format!("{} x {} p={p}: summands do not resum to the input", a.render(), b.render())
        })?;
    }

    for _ in 0..100 {
        let p = prime(&mut rng, &[2, 3, 5]);
        let d = random_connected(&mut rng, 5, 6);
        let m = GradedModule::from_diagram(&d, fitting_params(p, &[&d])).unwrap();
        let cert = indecomposability_certificate(&m, &mut rng).map_err(|e| e.to_string())?;
        ensure(matches!(cert, Certificate::Local { .. }), || format!("{} p={p}: {cert:?}", d.render()))?;
    }

    ensure(!tables.is_empty(), || "no closed tables to check".into())?;
    for t in tables {
        let f = t.fingerprint();
        ensure(t.closure_verified && f.is_associative(), || format!("table {:?} not associative", t.labels))?;
        for a in 0..t.len() {
            for b in 0..t.len() {
                let kept: usize = t.cells[a][b].iter().map(|&(c, m)| m * t.dims[c]).sum();
                let p = t.p as usize;
                ensure((t.dims[a] * t.dims[b]) % p == kept % p, || {
                    format!("{} x {} dimension", t.labels[a], t.labels[b])
                })?;
            }
        }
    }

    let mut sums = 0;
    for p in [3u32, 5] {
        let table = pascal_mod_p(201, 14, p);
        for h in 0..=200u64 {
            for n in 0..=6u32 {
                let a: Vec<u16> = (0..=n).map(|_| rng.gen_range(0..p) as u16).collect();
                let exact_direct: u32 = (0..h as usize)
                    .map(|j| (0..=n as usize).map(|k| a[k] as u32 * table[j][n as usize + k]).sum::<u32>())
                    .sum::<u32>()
                    % p;
                let exact_closed: u32 =
                    (0..=n as usize).map(|k| a[k] as u32 * table[h as usize][n as usize + k + 1]).sum::<u32>() % p;
                let ours = (column_sum(&a, n, h, p), hockey_stick(&a, n, h, p));
                ensure(exact_direct == exact_closed && ours == (exact_direct, exact_closed), || {
                    format!("p={p} h={h} n={n} a={a:?}: exact {exact_direct}/{exact_closed}, ours {ours:?}")
                })?;
                sums += 1;
            }
        }
    }
    Ok(format!(
        "100 modules, 50 decompositions x2, 100 connected shapes, {} tables, {sums} hockey sticks",
        tables.len()
    ))
}

fn report(line: &str) {
    // written straight to stderr so the lines survive output capture
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let mut tables = Vec::new();
    let mut campaigns = Vec::new();
    let mut failures = Vec::new();
    let mut check = |id: usize, name: &str, budget: Duration, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match &result {
            Ok(detail) => report(&format!("PASS [{id}] {name} ({elapsed:.2?}): {detail}")),
            Err(why) => {
                report(&format!("FAIL [{id}] {name} ({elapsed:.2?}): {why}"));
                failures.push(id);
            }
        }
    };
    let secs = Duration::from_secs;
    check(1, "column tensor dual decomposition", secs(1), &mut golden_decomposition_columns);
    check(2, "three-object column table", secs(1), &mut || golden_table_columns(&mut tables));
    check(3, "staircase square and five-object table", secs(10), &mut || golden_staircase(&mut tables));
    check(4, "hook tensor decompositions", secs(30), &mut golden_hook);
    check(5, "column and row family campaigns", secs(600), &mut || family_campaigns(&mut campaigns));
    check(6, "binomial system vs graded Hom space", Duration::MAX, &mut hom_space_cross_check);
    check(7, "binomial identity suite", Duration::MAX, &mut || binomial_identities(&campaigns));
    check(8, "property suites", Duration::MAX, &mut || property_suites(&tables));
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
