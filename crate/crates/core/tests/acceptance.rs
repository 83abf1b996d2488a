//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use percup_core::cohomology::{persistent_cohomology, Barcode, ClassQuery};
use percup_core::complex::{
    build_vr, DistanceMatrix, FilteredComplex, Metric, MetricInput, Simplex,
};
use percup_core::cup::{
    cup_length_diagram, cup_length_of_image, image_cup_length_invariant, invariant_from_diagram,
    support, CupLengthDiagram,
};
use percup_core::distances::{bottleneck, erosion};
use percup_core::flags::{cup_length_via_lcup, lcup_barcode, phi_rank};
use percup_core::invariants::{mobius_invert, mobius_sum, Codomain, StepInvariant};
use percup_core::{fixtures, linalg::Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

/// Random Vietoris–Rips filtrations on at most 7 points, plus random
/// monotone filtrations of the 3×3 torus so that nonzero products occur.
fn random_instances() -> Vec<FilteredComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for k in 0..120 {
        let n = rng.gen_range(3..=7);
        let max_dim = rng.gen_range(1..=3);
        let input = if k % 2 == 0 {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..i).map(|_| f64::from(rng.gen_range(1u8..=5))).collect())
                .collect();
            MetricInput::Distances(DistanceMatrix::from_lower_triangular(&rows).unwrap())
        } else {
            let coords = (0..n)
                .map(|_| {
                    (0..2)
                        .map(|_| f64::from(rng.gen_range(0u8..=10)) / 4.0)
                        .collect()
                })
                .collect();
            MetricInput::Points {
                coords,
                metric: if k % 4 == 1 {
                    Metric::LInfinity
                } else {
                    Metric::Euclidean
                },
            }
        };
        out.push(build_vr(&input, max_dim, f64::INFINITY).unwrap());
    }
    let torus = fixtures::pinched_torus();
    for _ in 0..40 {
        let mut values: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (s, _) in torus.simplices() {
            // The pinching triangle [0,3,6] tends to arrive late so that the
            // product of the two loops survives on some interval.
            let top = if s.vertices() == [0, 3, 6] { 7 } else { 4 };
            let own = f64::from(rng.gen_range(0u8..=top));
            let faces = s.facets().map(|f| values[f.vertices()]).fold(own, f64::max);
            values.insert(s.vertices().to_vec(), faces);
        }
        let pairs = values
            .into_iter()
            .map(|(v, t)| (Simplex::new(v).unwrap(), t))
            .collect();
        out.push(FilteredComplex::from_explicit(pairs).unwrap());
    }
    out
}

/// `(degree, birth, death)` bars of persistent homology by reducing the
/// boundary matrix over Z/2 with columns in filtration order.
fn homology_bars(c: &FilteredComplex) -> Vec<(usize, f64, f64)> {
    let n = c.len();
    let mut cols: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            let mut col: Vec<usize> = c.facets_of(j).to_vec();
            col.sort_unstable();
            col
        })
        .collect();
    let mut low_owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut paired = vec![false; n];
    let mut bars = Vec::new();
    for j in 0..n {
        while let Some(&low) = cols[j].last() {
            match low_owner.get(&low) {
                Some(&k) => {
                    let other = cols[k].clone();
                    cols[j] = symmetric_difference(&cols[j], &other);
                }
                None => break,
            }
        }
        if let Some(&low) = cols[j].last() {
            low_owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            if c.value(low) < c.value(j) {
                bars.push((c.dim_of(low), c.value(low), c.value(j)));
            }
        }
    }
    for (i, &done) in paired.iter().enumerate() {
        if !done {
            bars.push((c.dim_of(i), c.value(i), f64::INFINITY));
        }
    }
    bars.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    bars
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// The pinched-torus case list, with the bar of `α` open at 3.
fn pinched_torus_expected(t: f64, s: f64) -> u32 {
    if (2.0..3.0).contains(&t) && s < 3.0 {
        2
    } else if ((0.0..=2.0).contains(&t) && s < 3.0) || (t >= 1.0 && s >= 3.0) {
        1
    } else {
        0
    }
}

fn half_open(d: &CupLengthDiagram) -> Vec<(f64, f64, usize)> {
    d.half_open_entries()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let c = fixtures::pinched_torus();
    let bc = persistent_cohomology(&c, Field::Z2);
    let d = cup_length_diagram(&bc).map_err(|e| e.to_string())?;
    let inf = f64::INFINITY;
    let expected = vec![(0.0, 3.0, 1), (1.0, inf, 1), (2.0, 3.0, 2), (2.0, inf, 1)];
    ensure(half_open(&d) == expected, || {
        format!("diagram {:?}", half_open(&d))
    })?;
    let inv = invariant_from_diagram(&d);
    let points = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, inf];
    let mut checked = 0;
    for (k, &t) in points.iter().enumerate().take(points.len() - 1) {
        for &s in &points[k..] {
            let got = inv.eval_scalar(t, s);
            ensure(got == pinched_torus_expected(t, s), || {
                format!("cup([{t},{s}]) = {got}")
            })?;
            ensure(
                cup_length_of_image(&c, Field::Z2, t, s) as u32 == got,
                || format!("oracle disagrees at [{t},{s}]"),
            )?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("diagram matches; {checked} intervals checked"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let c = fixtures::two_disks();
    let bc = persistent_cohomology(&c, Field::Z2);
    let d = cup_length_diagram(&bc).map_err(|e| e.to_string())?;
    ensure(half_open(&d) == vec![(0.0, 2.0, 1), (1.0, 3.0, 1)], || {
        format!("diagram {:?}", half_open(&d))
    })?;
    let dgm = mobius_invert(&invariant_from_diagram(&d));
    let v = dgm.at(1.0, 1.0);
    ensure(v == vec![-1], || {
        format!("Möbius inversion at [1,1] is {v:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("diagram matches; Möbius inversion at [1,1] = -1".into())
}

struct Run<'a> {
    barcode: Barcode<'a>,
    diagram: CupLengthDiagram,
    invariant: StepInvariant,
}

fn criterion_3(instances: &[FilteredComplex]) -> (Check, Vec<Run<'_>>) {
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut nontrivial = 0;
    for (k, c) in instances.iter().enumerate() {
        let bc = persistent_cohomology(c, Field::Z2);
        let diagram = match cup_length_diagram(&bc) {
            Ok(d) => d,
            Err(e) => return (Err(format!("instance {k}: {e}")), runs),
        };
        let invariant = invariant_from_diagram(&diagram);
        let oracle = image_cup_length_invariant(c, Field::Z2);
        if invariant != oracle {
            return (
                Err(format!("instance {k}: diagram route and oracle disagree")),
                runs,
            );
        }
        if invariant.cells().any(|(_, v)| v[0] >= 2) {
            nontrivial += 1;
        }
        runs.push(Run {
            barcode: bc,
            diagram,
            invariant,
        });
    }
    let vr = instances.len() - 40;
    let check = within(start.elapsed(), Duration::from_secs(60)).map(|_| {
        format!("{vr} VR + 40 torus filtrations agree; {nontrivial} with cup-length >= 2")
    });
    (check, runs)
}

fn random_step_invariant(rng: &mut ChaCha8Rng, codomain: Codomain) -> StepInvariant {
    let m = rng.gen_range(0..6);
    let mut grid: Vec<f64> = Vec::new();
    let mut x = 0.0;
    for _ in 0..m {
        x += f64::from(rng.gen_range(1u8..4)) / 2.0;
        grid.push(x);
    }
    StepInvariant::from_fn(grid, codomain, |_, _, out| {
        for v in out.iter_mut() {
            *v = rng.gen_range(0..5);
        }
    })
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shapes = [
        Codomain::Scalar,
        Codomain::Matrix { rows: 3, cols: 2 },
        Codomain::Sequence(3),
    ];
    let count = 1200;
    for k in 0..count {
        let inv = random_step_invariant(&mut rng, shapes[k % shapes.len()]);
        let back = mobius_sum(&mobius_invert(&inv)).map_err(|e| format!("case {k}: {e}"))?;
        ensure(back == inv, || format!("case {k}: roundtrip differs"))?;
    }
    Ok(format!("{count} random invariants roundtrip"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let a =
        erosion(&fixtures::vr_torus_cup(), &fixtures::vr_wedge_cup()).map_err(|e| e.to_string())?;
    ensure((a.value - PI / 3.0).abs() < 1e-9, || {
        format!("cup erosion {}", a.value)
    })?;
    let b = erosion(
        &fixtures::vr_torus_wedge_sphere3_rank(),
        &fixtures::vr_s1s2_wedge_s1_rank(),
    )
    .map_err(|e| e.to_string())?;
    ensure((b.value - PI / 3.0).abs() < 1e-9, || {
        format!("rank erosion {}", b.value)
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{:.10} and {:.10}", a.value, b.value))
}

fn criterion_6() -> Check {
    let c = fixtures::pinched_torus();
    let bc = persistent_cohomology(&c, Field::Z2);
    let two = lcup_barcode(&bc, 2, 2)
        .map_err(|e| e.to_string())?
        .intervals();
    ensure(two == vec![(2.0, 3.0)], || {
        format!("ℓ=2, p=2 barcode {two:?}")
    })?;
    let one = lcup_barcode(&bc, 2, 1)
        .map_err(|e| e.to_string())?
        .intervals();
    ensure(one.is_empty(), || format!("ℓ=2, p=1 barcode {one:?}"))?;
    Ok("ℓ=2: p=2 gives {[2,3)}, p=1 empty".into())
}

fn perturbed_vr(
    rng: &mut ChaCha8Rng,
    delta: f64,
) -> (FilteredComplex, FilteredComplex, FilteredComplex) {
    let n = rng.gen_range(4..=6);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..i)
                .map(|_| f64::from(rng.gen_range(2u8..=8)) / 2.0)
                .collect()
        })
        .collect();
    let noisy: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|d| d + delta * f64::from(rng.gen_range(-4i8..=4)) / 4.0)
                .collect()
        })
        .collect();
    let vr = |rows: &[Vec<f64>]| {
        build_vr(
            &MetricInput::Distances(DistanceMatrix::from_lower_triangular(rows).unwrap()),
            3,
            f64::INFINITY,
        )
        .unwrap()
    };
    let base = vr(&rows);
    let shifted = base.map_values(|v| v + delta);
    (base, shifted, vr(&noisy))
}

fn invariants_of(c: &FilteredComplex) -> Result<(StepInvariant, StepInvariant), String> {
    let bc = persistent_cohomology(c, Field::Z2);
    let cup = invariant_from_diagram(&cup_length_diagram(&bc).map_err(|e| e.to_string())?);
    let rank = phi_rank(&bc, Some(3)).map_err(|e| e.to_string())?;
    Ok((cup, rank))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for k in 0..60 {
        for delta in [0.1, 0.5, 1.0] {
            let (base, shifted, noisy) = perturbed_vr(&mut rng, delta);
            let (cup0, rank0) = invariants_of(&base)?;
            for other in [&shifted, &noisy] {
                let (cup1, rank1) = invariants_of(other)?;
                let dc = erosion(&cup0, &cup1).map_err(|e| e.to_string())?.value;
                let dr = erosion(&rank0, &rank1).map_err(|e| e.to_string())?.value;
                ensure(dc <= delta + 1e-12 && dr <= delta + 1e-12, || {
                    format!("fixture {k}, δ={delta}: cup {dc}, rank {dr}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} shifted or perturbed pairs within δ"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut strict = 0;
    let count = 60;
    for k in 0..count {
        let (a, _, _) = perturbed_vr(&mut rng, 0.0);
        let (b, _, _) = perturbed_vr(&mut rng, 0.0);
        let (cup_a, rank_a) = invariants_of(&a)?;
        let (cup_b, rank_b) = invariants_of(&b)?;
        let dc = erosion(&cup_a, &cup_b).map_err(|e| e.to_string())?.value;
        let dr = erosion(&rank_a, &rank_b).map_err(|e| e.to_string())?.value;
        ensure(dc <= dr, || format!("pair {k}: cup {dc} > rank {dr}"))?;
        if dc < dr {
            strict += 1;
        }
    }
    Ok(format!("{count} pairs; {strict} strict"))
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn criterion_9(runs: &[Run<'_>]) -> Check {
    let mut tuples = 0;
    for (k, run) in runs.iter().enumerate() {
        let bc = &run.barcode;
        let mut q = ClassQuery::new(bc);
        for rec in &run.diagram.products {
            let direct = support(&mut q, &rec.bars).map_err(|e| format!("instance {k}: {e}"))?;
            ensure(direct == rec.support, || {
                format!(
                    "instance {k}: support of {:?} recomputed differently",
                    rec.bars
                )
            })?;
            if rec.bars.len() > 1 {
                for p in permutations(&rec.bars) {
                    let s = support(&mut q, &p).map_err(|e| format!("instance {k}: {e}"))?;
                    ensure(s == direct, || {
                        format!("instance {k}: support of {p:?} differs from {:?}", rec.bars)
                    })?;
                }
            }
            if let Some(s) = direct {
                let right = rec
                    .bars
                    .iter()
                    .map(|&b| bc.bars[b].interval.hi)
                    .min()
                    .unwrap();
                let left = rec
                    .bars
                    .iter()
                    .map(|&b| bc.bars[b].interval.lo)
                    .max()
                    .unwrap();
                ensure(s.hi == right && s.lo >= left, || {
                    format!("instance {k}: support {s:?} against intersection [{left}, {right}]")
                })?;
            }
            tuples += 1;
        }
    }
    Ok(format!("{tuples} enumerated products checked"))
}

fn criterion_10(runs: &[Run<'_>]) -> Check {
    for (k, run) in runs.iter().enumerate() {
        let via = cup_length_via_lcup(&run.barcode).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(via == run.invariant, || {
            format!("instance {k}: ℓ-cup route differs")
        })?;
    }
    Ok(format!("{} instances agree", runs.len()))
}

fn criterion_11(runs: &[Run<'_>]) -> Check {
    for (k, run) in runs.iter().enumerate() {
        let mut ours: Vec<(usize, f64, f64)> = run
            .barcode
            .bars
            .iter()
            .map(|b| (b.degree, b.birth, b.death))
            .collect();
        ours.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
        });
        let theirs = homology_bars(run.barcode.complex);
        ensure(ours == theirs, || {
            format!("instance {k}: {ours:?} vs {theirs:?}")
        })?;
    }
    Ok(format!("{} instances agree", runs.len()))
}

fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn cost(x: &(f64, f64), y: &(f64, f64)) -> f64 {
        match (x.1.is_infinite(), y.1.is_infinite()) {
            (true, true) => (x.0 - y.0).abs(),
            (false, false) => (x.0 - y.0).abs().max((x.1 - y.1).abs()),
            _ => f64::INFINITY,
        }
    }
    fn diag(x: &(f64, f64)) -> f64 {
        (x.1 - x.0) / 2.0
    }
    fn go(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>) -> f64 {
        if i == a.len() {
            return b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(y, _)| diag(y))
                .fold(0.0, f64::max);
        }
        let mut best = diag(&a[i]).max(go(i + 1, a, b, used));
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(cost(&a[i], &b[j]).max(go(i + 1, a, b, used)));
                used[j] = false;
            }
        }
        best
    }
    go(0, a, b, &mut vec![false; b.len()])
}

fn criterion_12() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let count = 250;
    let bars = |rng: &mut ChaCha8Rng| -> Vec<(f64, f64)> {
        let n = rng.gen_range(0..=6);
        (0..n)
            .map(|_| {
                let b = f64::from(rng.gen_range(0u8..10)) / 2.0;
                let d = if rng.gen_bool(0.15) {
                    f64::INFINITY
                } else {
                    b + f64::from(rng.gen_range(1u8..8)) / 2.0
                };
                (b, d)
            })
            .collect()
    };
    for k in 0..count {
        let a = bars(&mut rng);
        let b = bars(&mut rng);
        let fast = bottleneck(&a, &b);
        let slow = brute_bottleneck(&a, &b);
        ensure(fast == slow, || {
            format!("pair {k}: {a:?} vs {b:?}: {fast} != {slow}")
        })?;
    }
    Ok(format!("{count} random pairs agree"))
}

fn main() -> ExitCode {
    let instances = random_instances();
    let mut results: Vec<(u32, &str, Check)> = vec![
        (1, "pinched torus diagram and invariant", criterion_1()),
        (
            2,
            "two-disk diagram and negative Möbius value",
            criterion_2(),
        ),
    ];
    let (c3, runs) = criterion_3(&instances);
    results.push((3, "tropical Möbius against the image-ring oracle", c3));
    results.push((4, "Möbius roundtrip", criterion_4()));
    results.push((5, "erosion distances equal π/3", criterion_5()));
    results.push((6, "ℓ-cup barcodes of the pinched torus", criterion_6()));
    results.push((7, "shift stability", criterion_7()));
    results.push((8, "cup erosion bounded by rank erosion", criterion_8()));
    results.push((9, "support symmetry and right ends", criterion_9(&runs)));
    results.push((10, "cup-length from ℓ-cup barcodes", criterion_10(&runs)));
    results.push((
        11,
        "barcodes against boundary reduction",
        criterion_11(&runs),
    ));
    results.push((12, "bottleneck against brute force", criterion_12()));
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
