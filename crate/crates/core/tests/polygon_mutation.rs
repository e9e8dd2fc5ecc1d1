use std::collections::BTreeSet;

use clusterdet::mutation::{exchange_graph, mutate_matrix, verify_laurent, Seed};
use clusterdet::polygon::{self, ChordArc, ExchangeMatrix, PolygonTriangulation};
use clusterdet::type_a::TypeAAlgebra;
use clusterdet::type_d::TypeDAlgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Non-crossing test written from scratch: chords (a,b), (c,d) with a<b, c<d
/// cross when exactly one of c, d lies strictly between a and b and they
/// share no endpoint.
fn chords_cross(x: (usize, usize), y: (usize, usize)) -> bool {
    let inside = |v: usize| x.0 < v && v < x.1;
    let shared = x.0 == y.0 || x.0 == y.1 || x.1 == y.0 || x.1 == y.1;
    !shared && (inside(y.0) != inside(y.1))
}

/// Counts n-element non-crossing sets of diagonals of the (n+3)-gon.
fn brute_force_triangulations(n: usize) -> usize {
    let m = n + 3;
    let diags: Vec<(usize, usize)> =
        (0..m).flat_map(|a| (a + 2..m).map(move |b| (a, b))).filter(|&(a, b)| !(a == 0 && b == m - 1)).collect();
    let mut count = 0;
    let k = diags.len();
    let mut stack: Vec<usize> = Vec::new();
    fn go(start: usize, k: usize, n: usize, diags: &[(usize, usize)], stack: &mut Vec<usize>, count: &mut usize) {
        if stack.len() == n {
            *count += 1;
            return;
        }
        for i in start..k {
            if stack.iter().all(|&s| !chords_cross(diags[s], diags[i])) {
                stack.push(i);
                go(i + 1, k, n, diags, stack, count);
                stack.pop();
            }
        }
    }
    go(0, k, n, &diags, &mut stack, &mut count);
    count
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[test]
fn triangulation_counts_match_brute_force() {
    for n in 0..=5 {
        let found = polygon::enumerate_triangulations(n);
        let unique: BTreeSet<String> = found.iter().map(PolygonTriangulation::to_json).collect();
        assert_eq!(unique.len(), found.len());
        assert_eq!(found.len(), brute_force_triangulations(n), "n = {n}");
        assert_eq!(found.len(), catalan(n + 1), "n = {n}");
    }
}

#[test]
fn crossing_agrees_with_oracle() {
    let m = 7;
    let arcs: Vec<ChordArc> =
        (0..m).flat_map(|a| (a + 1..m).map(move |b| ChordArc::new(a, b).unwrap())).collect();
    for &x in &arcs {
        for &y in &arcs {
            assert_eq!(polygon::crossing(x, y), chords_cross(x.endpoints(), y.endpoints()), "{x} {y}");
        }
    }
}

fn renamed(b: &ExchangeMatrix, k: usize, label: String) -> ExchangeMatrix {
    let mut out = b.clone();
    out.rows[k] = label.clone();
    out.cols[k] = label;
    out
}

#[test]
fn flips_are_mutations_on_the_hexagon() {
    let all = polygon::enumerate_triangulations(3);
    assert_eq!(all.len(), 14);
    let mut checked = 0;
    for t in &all {
        let b = t.exchange_matrix();
        for (k, a) in t.inner().enumerate() {
            let (flipped, new_arc) = t.flip(a).unwrap();
            let mu = renamed(&mutate_matrix(&b, k), k, new_arc.name());
            let target = flipped.exchange_matrix().reordered(&mu.rows, &mu.cols).unwrap();
            assert_eq!(mu, target, "flip of {a}");
            checked += 1;
        }
    }
    assert_eq!(checked, 42);
}

/// Walks flips from the star, mutating alongside, and compares every
/// mutated cluster variable with the closed-form expansion.
#[test]
fn mutation_reproduces_ptolemy_expansions() {
    for n in 1..=4 {
        let alg = TypeAAlgebra::new(n).unwrap();
        let start = alg.star_triangulation();
        let mut queue = vec![(start.clone(), alg.star_seed(), start.inner().collect::<Vec<_>>())];
        let mut seen = BTreeSet::from([start.to_json()]);
        while let Some((t, seed, labels)) = queue.pop() {
            for k in 0..n {
                let (next, new_arc) = t.flip(labels[k]).unwrap();
                let s = seed.mutate(k).unwrap();
                assert_eq!(&s.cluster()[k], alg.arc(new_arc), "n = {n}, arc {new_arc}");
                if seen.insert(next.to_json()) {
                    let mut l = labels.clone();
                    l[k] = new_arc;
                    queue.push((next, s, l));
                }
            }
        }
        assert_eq!(seen.len(), catalan(n + 1));
    }
}

fn assert_involution_walk(start: &Seed, steps: usize, rng: &mut ChaCha8Rng) {
    let mut seed = start.clone();
    for _ in 0..steps {
        let k = rng.gen_range(0..seed.n_mutable());
        let next = seed.mutate(k).unwrap();
        assert_eq!(next.mutate(k).unwrap(), seed);
        seed = next;
    }
}

#[test]
fn mutation_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    assert_involution_walk(&TypeAAlgebra::new(2).unwrap().star_seed(), 334, &mut rng);
    assert_involution_walk(&TypeAAlgebra::new(3).unwrap().star_seed(), 333, &mut rng);
    assert_involution_walk(&TypeDAlgebra::new(4).unwrap().star_seed().unwrap(), 333, &mut rng);
}

#[test]
fn type_a_census() {
    for (n, seeds, vars) in [(1, 2, 2), (2, 5, 5), (3, 14, 9), (4, 42, 14)] {
        let c = exchange_graph(&TypeAAlgebra::new(n).unwrap().star_seed(), 1000).unwrap();
        assert_eq!((c.num_seeds, c.num_mutable_variables), (seeds, vars), "n = {n}");
        assert_eq!(vars, n * (n + 3) / 2);
        assert_eq!(seeds, catalan(n + 1));
    }
}

#[test]
fn laurent_phenomenon_in_small_types() {
    let a3 = exchange_graph(&TypeAAlgebra::new(3).unwrap().star_seed(), 1000).unwrap();
    assert_eq!(a3.num_seeds, 14);
    let d4 = verify_laurent(&TypeDAlgebra::new(4).unwrap().star_seed().unwrap(), 4).unwrap();
    assert!(d4.seeds_visited > 1 && d4.mutations > 0);
}

#[test]
fn a3_laurent_to_depth_six() {
    let r = verify_laurent(&TypeAAlgebra::new(3).unwrap().star_seed(), 6).unwrap();
    assert_eq!(r.seeds_visited, 14);
    assert_eq!(verify_laurent(&TypeAAlgebra::new(3).unwrap().star_seed(), 0).unwrap().mutations, 0);
}
