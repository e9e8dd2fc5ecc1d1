//! Acceptance gate: one line per criterion, then a single assertion.
//!
//! Run with `cargo test -p clusterdet --test acceptance -- --nocapture`.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use clusterdet::hyper::{self, ExactDecoratedLine, PointConfig};
use clusterdet::laurent::LaurentPoly;
use clusterdet::mutation::{exchange_graph, mutate_matrix, verify_laurent, Seed};
use clusterdet::polygon;
use clusterdet::type_a::{self, TypeAAlgebra};
use clusterdet::type_d::TypeDAlgebra;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn baur_marsh() -> Outcome {
    let start = Instant::now();
    for n in 0..=5 {
        let c = TypeAAlgebra::new(n).unwrap().verify_bm().unwrap();
        ensure(c.holds(), || format!("n = {n}: det = {}, expected {}", c.computed, c.expected))?;
    }
    within(start, Duration::from_secs(60), "symbolic n = 0..5")?;
    let symbolic = start.elapsed();
    let start = Instant::now();
    let c = hyper::numeric_bm_check(10, 42);
    within(start, Duration::from_secs(1), "numeric n = 10")?;
    ensure(c.relative_residual < 1e-9, || format!("numeric residual {}", c.relative_residual))?;
    Ok(format!("symbolic n=0..5 in {symbolic:?}; numeric n=10 residual {:.1e}", c.relative_residual))
}

fn cayley_menger() -> Outcome {
    let start = Instant::now();
    for n in [2, 3] {
        let c = TypeAAlgebra::new(n).unwrap().verify_cm().unwrap();
        ensure(c.det_pm.is_zero(), || format!("n = {n}: det(PM) = {}", c.det_pm))?;
        ensure(c.det_cm.is_zero(), || format!("n = {n}: det(CM) = {}", c.det_cm))?;
    }
    let (nonzero, total) = TypeAAlgebra::new(2).unwrap().pm_minor_census(4).unwrap();
    ensure(total == 25 && nonzero == 0, || format!("{nonzero} of {total} 4x4 minors nonzero"))?;
    within(start, Duration::from_secs(120), "criterion")?;
    Ok(format!("det(PM) = det(CM) = 0 for n=2,3; 25/25 minors vanish; {:?}", start.elapsed()))
}

fn type_d_determinant() -> Outcome {
    let start = Instant::now();
    for n in [4, 5, 6] {
        let c = TypeDAlgebra::new(n).unwrap().verify_d().unwrap();
        ensure(c.holds(), || format!("n = {n}: det = {}, expected {}", c.computed, c.expected))?;
    }
    within(start, Duration::from_secs(120), "criterion")?;
    Ok(format!("n=4,5,6 in {:?}", start.elapsed()))
}

fn prop34() -> Outcome {
    let mut pairs = 0;
    for n in [4, 5, 6] {
        let alg = TypeDAlgebra::new(n).unwrap();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let (a, b) = alg.prop34(i, j).unwrap();
                ensure(a && b, || format!("n = {n}, ({i},{j}): {a} {b}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, both equalities"))
}

fn tridiagonal() -> Outcome {
    let (mut pairs, mut printed) = (0, 0);
    for n in [4, 5] {
        let alg = TypeAAlgebra::new(n).unwrap();
        for i in 1..=n {
            for j in i..=n {
                let c = alg.tridiag_check(i, j).unwrap();
                ensure(c.balanced, || format!("n = {n}, ({i},{j}): det = {}", c.det))?;
                pairs += 1;
                printed += usize::from(c.printed);
            }
        }
    }
    Ok(format!(
        "balanced form det = x_(i-1,j+1) * monomial holds for {pairs}/{pairs}; \
         monomial on the other side holds for {printed}/{pairs} (i = j only)"
    ))
}

fn golden_matrix() -> Outcome {
    let b = TypeDAlgebra::new(3).unwrap().star_exchange_matrix().unwrap();
    let rows: Vec<String> = ["x_0_1", "x_0_2", "x_0_3", "x_2_3", "x_3_1", "x_1_2"].map(String::from).to_vec();
    let cols: Vec<String> = rows[..3].to_vec();
    let b = b.reordered(&rows, &cols).ok_or("labels missing")?;
    let golden = vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]];
    ensure(b.b == golden, || format!("got {:?}", b.b))?;
    Ok("6x3 matrix matches entry for entry".into())
}

fn mutation_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let starts: Vec<Seed> = vec![
        TypeAAlgebra::new(2).unwrap().star_seed(),
        TypeAAlgebra::new(3).unwrap().star_seed(),
        TypeDAlgebra::new(4).unwrap().star_seed().unwrap(),
    ];
    let mut current = starts.clone();
    for step in 0..1000 {
        let s = &mut current[step % 3];
        let k = rng.gen_range(0..s.n_mutable());
        let next = s.mutate(k).map_err(|e| e.to_string())?;
        ensure(next.mutate(k).unwrap() == *s, || format!("involution fails at step {step}"))?;
        *s = next;
    }
    let mut flips = 0;
    let all = polygon::enumerate_triangulations(3);
    ensure(all.len() == 14, || format!("{} hexagon triangulations", all.len()))?;
    for t in &all {
        let b = t.exchange_matrix();
        for (k, a) in t.inner().enumerate() {
            let (flipped, new_arc) = t.flip(a).unwrap();
            let mut mu = mutate_matrix(&b, k);
            mu.rows[k] = new_arc.name();
            mu.cols[k] = new_arc.name();
            let target = flipped.exchange_matrix().reordered(&mu.rows, &mu.cols).ok_or("labels")?;
            ensure(mu == target, || format!("flip of {a} in {}", t.to_json()))?;
            flips += 1;
        }
    }
    let a3 = exchange_graph(&starts[1], 1000).map_err(|e| e.to_string())?;
    let d4 = verify_laurent(&starts[2], 4).map_err(|e| e.to_string())?;
    Ok(format!(
        "1000 involution steps; {flips} flips agree; A3 BFS {} seeds and D4 depth 4 ({} mutations) without inexact division",
        a3.num_seeds, d4.mutations
    ))
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

fn census() -> Outcome {
    for n in 1..=3 {
        let c = exchange_graph(&TypeAAlgebra::new(n).unwrap().star_seed(), 1000).map_err(|e| e.to_string())?;
        ensure(c.num_mutable_variables == n * (n + 3) / 2 && c.num_seeds == catalan(n + 1), || {
            format!("A{n}: {} variables, {} seeds", c.num_mutable_variables, c.num_seeds)
        })?;
    }
    for n in [4, 5] {
        let alg = TypeDAlgebra::new(n).unwrap();
        let distinct: HashSet<LaurentPoly> = alg.inner_values().into_iter().map(|(_, v)| v).collect();
        ensure(distinct.len() == n * n, || format!("D{n}: {} distinct variables", distinct.len()))?;
    }
    Ok("A1..A3 variable and seed counts; D4, D5 give 16 and 25 distinct variables".into())
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut samples = 0;
    for n in 0..=8 {
        let alg = TypeAAlgebra::new(n).unwrap();
        for _ in 0..100 {
            let s = type_a::plucker_specialize(&alg, &mut rng).map_err(|e| e.to_string())?;
            let c = type_a::verify_bm_plucker(&alg, &s).map_err(|e| e.to_string())?;
            ensure(c.holds(), || format!("n = {n}, sample {:?}: det {} vs {}", s.matrix, c.det, c.expected))?;
            samples += 1;
        }
    }
    let mut decorations = 0;
    for n in 0..=6 {
        for _ in 0..20 {
            let d = ExactDecoratedLine::random(n + 3, &mut rng);
            ensure(hyper::ptolemy_holds_exact(&d.table()), || format!("Ptolemy fails for {}", d.to_json()))?;
            decorations += 1;
        }
    }
    Ok(format!("{samples} integer samples n<=8; {decorations} exact decorations n<=6"))
}

fn euclidean() -> Outcome {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let collinear = PointConfig::from_integers(&[&[0, 0], &[1, 0], &[2, 0]]).unwrap();
    let d = hyper::heron_cm_det(&collinear).unwrap();
    ensure(d.is_zero(), || format!("collinear: {d}"))?;
    let right = PointConfig::from_integers(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
    let d = hyper::heron_cm_det(&right).unwrap();
    ensure(d == q(-4), || format!("right triangle: {d}"))?;
    let square = PointConfig::from_integers(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap();
    let d = hyper::cayley_menger_det(&square, false).unwrap();
    ensure(d.is_zero(), || format!("concyclic square: {d}"))?;
    Ok("0 for collinear, -4 for the unit right triangle, 0 for the concyclic square".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Baur–Marsh determinant", baur_marsh),
        ("Cayley–Menger cluster matrix", cayley_menger),
        ("type D determinant", type_d_determinant),
        ("plain/notched sum relation", prop34),
        ("tridiagonal identity", tridiagonal),
        ("once-punctured triangle exchange matrix", golden_matrix),
        ("mutation engine", mutation_engine),
        ("census", census),
        ("oracle agreement", oracles),
        ("Euclidean examples", euclidean),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL  {name}: {detail} [{t:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
