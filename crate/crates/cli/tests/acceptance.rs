//! The release gate: one test per acceptance criterion, each printing a
//! single pass/fail line. Budgets are asserted with wall-clock timers.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::cheeger::{
    cheeger_brute, cheeger_function_bound, median_interval, path_median_extract, tan_loop, tv,
    GraphFunction, WeightedGraph,
};
use spectra_core::homology::{betti, persistence};
use spectra_core::significance::{
    certified_weak_significant, classify_surface, degree_obstruction, verify_surface_certificate,
    SurfaceCertificate, SurfaceClass,
};
use spectra_core::spaces::{gen_dyck, gen_rayleigh, gen_rp, gen_torus, DyckParams, FMode, Mat3};
use spectra_core::spectrum::{index_of, index_spectrum, kr2_sweep};
use spectra_core::symcx::{CochainClass, SymmetricComplex};
use spectra_core::value::Value;

fn gate(criterion: usize, name: &str, budget: Option<Duration>, body: impl FnOnce()) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let in_budget = budget.map_or(true, |b| elapsed <= b);
    let ok = result.is_ok() && in_budget;
    println!(
        "criterion {} ({}): {} [{:.1}s]",
        criterion,
        name,
        if ok { "pass" } else { "fail" },
        elapsed.as_secs_f64()
    );
    if let Err(e) = result {
        resume_unwind(e);
    }
    assert!(in_budget, "criterion {} exceeded its time budget", criterion);
}

fn diag123() -> Mat3 {
    let z = Value::zero;
    [
        [Value::one(), z(), z()],
        [z(), Value::from_int(2), z()],
        [z(), z(), Value::from_int(3)],
    ]
}

#[test]
fn criterion_1_linear_calibration() {
    gate(1, "linear calibration", Some(Duration::from_secs(60)), || {
        let errors = |level: u32| -> Vec<f64> {
            let c = gen_rayleigh(&diag123(), level).unwrap();
            let report = index_spectrum(&c, 3);
            report
                .index_values
                .iter()
                .zip([1.0, 2.0, 3.0])
                .map(|(v, want)| (v.as_ref().unwrap().to_f64() - want).abs() / want)
                .collect()
        };
        let coarse = errors(3);
        for (i, e) in coarse.iter().enumerate() {
            assert!(*e <= 0.05, "value {} off by {:.4}", i + 1, e);
        }
        let fine = errors(4);
        for (c, f) in coarse.iter().zip(&fine) {
            assert!(f <= c, "refinement increased the error: {} > {}", f, c);
        }
    });
}

#[test]
fn criterion_2_exact_index_constants() {
    gate(2, "exact index constants", Some(Duration::from_secs(10)), || {
        let rp2 = gen_rp(2, FMode::Constant(Value::zero())).unwrap();
        let w = CochainClass::covering_class(&rp2);
        assert_eq!(index_of(&rp2, &rp2.full_subcomplex(), &w), 3);

        let rp3 = gen_rp(3, FMode::Constant(Value::zero())).unwrap();
        let w = CochainClass::covering_class(&rp3);
        assert_eq!(index_of(&rp3, &rp3.full_subcomplex(), &w), 4);

        let fx = gen_dyck(&DyckParams::combinatorial()).unwrap();
        let w = CochainClass::covering_class(&fx.complex);
        assert_eq!(index_of(&fx.complex, &fx.dyck_witness, &w), 3);
    });
}

#[test]
fn criterion_3_counterexample_reproduction() {
    gate(3, "counterexample reproduction", Some(Duration::from_secs(120)), || {
        let fx = gen_dyck(&DyckParams::combinatorial()).unwrap();
        let c = &fx.complex;
        let f_max = c.levels().last().unwrap().clone();
        let r = fx.r_level.clone();

        // (a) the spectrum collapses to the endpoints
        let report = index_spectrum(c, 4);
        assert_eq!(
            report.index_values,
            vec![
                Some(Value::zero()),
                Some(Value::zero()),
                Some(Value::zero()),
                Some(f_max.clone()),
            ]
        );

        // (b) the certificate verifies at r and loses containment below
        let cert = SurfaceCertificate {
            witness: fx.rp2_witness.clone(),
            level: r.clone(),
            claimed_class: SurfaceClass::new(1, false),
            claims_essential: true,
        };
        assert!(verify_surface_certificate(c, &cert).unwrap().all_pass());
        let mut below: Vec<Value> = c.levels().iter().filter(|t| **t < r).cloned().collect();
        below.push(&r - &Value::from_ratio(1, 1000));
        for level in below {
            let mut lowered = cert.clone();
            lowered.level = level.clone();
            let verdict = verify_surface_certificate(c, &lowered).unwrap();
            assert!(!verdict.containment, "containment held at {}", level);
        }

        // (c) no map of nonzero degree from the small class to the large one
        let small = classify_surface(c, &fx.rp2_witness).unwrap();
        let large = classify_surface(c, &fx.dyck_witness).unwrap();
        assert!(degree_obstruction(&small, &large));

        // (d) homology certifies nothing strictly between the endpoints
        let certified = certified_weak_significant(&persistence(c));
        for (_, level) in &certified {
            assert!(
                *level <= Value::zero() || *level >= f_max,
                "certified level {} inside the gap",
                level
            );
        }
    });
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<Value> {
    (0..n)
        .map(|_| Value::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=8)))
        .collect()
}

#[test]
fn criterion_4_certified_levels_are_spectrum_values() {
    gate(4, "certified levels are spectrum values", Some(Duration::from_secs(60)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [1usize, 2] {
            for _ in 0..10 {
                let n = if dim == 1 { 4 } else { 6 };
                let c = gen_rp(dim, FMode::PerVertex(random_values(&mut rng, n))).unwrap();
                let report = index_spectrum(&c, dim + 1);
                let values: Vec<&Value> =
                    report.index_values.iter().flatten().collect();
                for (p, level) in certified_weak_significant(&persistence(&c)) {
                    assert!(
                        values.contains(&&level),
                        "certified ({}, {}) is not a spectrum value",
                        p,
                        level
                    );
                }
            }
        }
    });
}

fn fixture_suite() -> Vec<SymmetricComplex> {
    let rp1_values: Vec<Value> = ["0.2", "0.4", "0.5", "0.9"]
        .iter()
        .map(|s| Value::parse(s).unwrap())
        .collect();
    vec![
        gen_rp(1, FMode::PerVertex(rp1_values)).unwrap(),
        gen_rp(2, FMode::Constant(Value::parse("0.7").unwrap())).unwrap(),
        gen_rp(3, FMode::Constant(Value::zero())).unwrap(),
        gen_torus(FMode::Constant(Value::zero())).unwrap(),
        gen_dyck(&DyckParams::combinatorial()).unwrap().complex,
    ]
}

#[test]
fn criterion_5_lipschitz_stability() {
    gate(5, "stability under perturbation", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let delta = Value::from_ratio(1, 20);
        for c in fixture_suite() {
            let k = c.dimension() + 1;
            let base_spectrum = index_spectrum(&c, k);
            let base_cert = certified_weak_significant(&persistence(&c));
            for _ in 0..20 {
                let values: Vec<Value> = c
                    .vertex_values()
                    .iter()
                    .map(|v| v + &(&delta * &Value::from_ratio(rng.gen_range(-16..=16), 16)))
                    .collect();
                let moved = c.with_values(values).unwrap();
                let spectrum = index_spectrum(&moved, k);
                for (a, b) in base_spectrum.index_values.iter().zip(&spectrum.index_values) {
                    match (a, b) {
                        (Some(a), Some(b)) => assert!((a - b).abs() <= delta),
                        (None, None) => {}
                        _ => panic!("a finite value became infinite or vice versa"),
                    }
                }
                // certified levels are deduplicated per dimension, so a
                // perturbation may split one level into several; stability
                // means each side stays within delta of the other
                let cert = certified_weak_significant(&persistence(&moved));
                for dim in 0..=c.dimension() {
                    let a: Vec<&Value> = base_cert
                        .iter()
                        .filter(|(d, _)| *d == dim)
                        .map(|(_, v)| v)
                        .collect();
                    let b: Vec<&Value> =
                        cert.iter().filter(|(d, _)| *d == dim).map(|(_, v)| v).collect();
                    assert_eq!(a.is_empty(), b.is_empty());
                    for x in &a {
                        assert!(
                            b.iter().any(|y| (*x - *y).abs() <= delta),
                            "base certified level {} lost",
                            x
                        );
                    }
                    for y in &b {
                        assert!(
                            a.iter().any(|x| (*x - *y).abs() <= delta),
                            "certified level {} appeared from nowhere",
                            y
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_6_property_suites() {
    gate(6, "monotonicity, sweep agreement, alive counts", None, || {
        // index monotonicity and subadditivity on 100 random pairs
        let rp3 = gen_rp(3, FMode::Constant(Value::zero())).unwrap();
        let w = CochainClass::covering_class(&rp3);
        let tets = rp3.simplices_of_dim(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let big: Vec<_> = tets.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let small: Vec<_> = big.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
            let a = rp3.face_closure(&small);
            let b = rp3.face_closure(&big);
            let other: Vec<_> = tets.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let d = rp3.face_closure(&other);
            let ia = index_of(&rp3, &a, &w);
            let ib = index_of(&rp3, &b, &w);
            assert!(ia <= ib, "monotonicity failed");
            let union: Vec<_> = b.members.iter().chain(&d.members).copied().collect();
            let iu = index_of(&rp3, &rp3.face_closure(&union), &w);
            assert!(iu <= ib + index_of(&rp3, &d, &w), "subadditivity failed");
        }

        // the sweep value equals the second spectrum value on every fixture
        for c in fixture_suite() {
            let report = index_spectrum(&c, 2.min(c.dimension() + 1));
            match kr2_sweep(&c) {
                Ok((level, witness)) => {
                    assert!(witness.holonomy(&c));
                    assert_eq!(report.index_values[1].as_ref(), Some(&level));
                }
                Err(_) => {
                    // trivial cover: the index never reaches 2
                    if report.index_values.len() > 1 {
                        assert_eq!(report.index_values[1], None);
                    }
                }
            }
        }

        // alive bar counts against the direct rank computation
        let mut checked = 0;
        while checked < 25 {
            let c = gen_rp(2, FMode::PerVertex(random_values(&mut rng, 6))).unwrap();
            let diagram = persistence(&c);
            let levels = c.levels().to_vec();
            let t = &levels[rng.gen_range(0..levels.len())];
            let sub = c.sublevel(t);
            for p in 0..=2 {
                assert_eq!(diagram.alive_at(p, t), betti(&c, &sub, p));
            }
            checked += 1;
        }
    });
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> WeightedGraph {
    loop {
        let n = rng.gen_range(3..=max_n);
        let mut edges = Vec::new();
        for v in 1..n as u32 {
            let u = rng.gen_range(0..v);
            edges.push((u, v, Value::from_ratio(rng.gen_range(1..=5), 1)));
        }
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen_bool(0.3) && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
                    edges.push((u, v, Value::from_ratio(rng.gen_range(1..=5), 1)));
                }
            }
        }
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        let measures: Vec<Value> = raw.iter().map(|&m| Value::from_ratio(m, total)).collect();
        if let Ok(g) = WeightedGraph::new(measures, edges) {
            return g;
        }
    }
}

fn corpus_graphs() -> Vec<(WeightedGraph, Value)> {
    let q = |n: i64, d: i64| Value::from_ratio(n, d);
    let c4 = WeightedGraph::new(
        vec![q(1, 4); 4],
        vec![
            (0, 1, Value::one()),
            (1, 2, Value::one()),
            (2, 3, Value::one()),
            (0, 3, Value::one()),
        ],
    )
    .unwrap();
    let k3 = WeightedGraph::new(
        vec![q(1, 3); 3],
        vec![(0, 1, Value::one()), (0, 2, Value::one()), (1, 2, Value::one())],
    )
    .unwrap();
    let bridged = WeightedGraph::new(
        vec![q(1, 6); 6],
        vec![
            (0, 1, Value::one()),
            (0, 2, Value::one()),
            (1, 2, Value::one()),
            (3, 4, Value::one()),
            (3, 5, Value::one()),
            (4, 5, Value::one()),
            (2, 3, Value::one()),
        ],
    )
    .unwrap();
    vec![
        (c4, Value::from_int(4)),
        (k3, Value::from_int(6)),
        (bridged, Value::from_int(2)),
    ]
}

fn indicator_minimum(g: &WeightedGraph) -> Value {
    let n = g.vertex_count();
    let mut best: Option<Value> = None;
    for mask in 1u32..(1 << (n - 1)) {
        let mut vals = vec![Value::from_int(-1); n];
        for i in 1..n {
            if mask >> (i - 1) & 1 == 1 {
                vals[i] = Value::one();
            }
        }
        let u = GraphFunction::new(g, vals).unwrap();
        let e = cheeger_function_bound(g, &u).unwrap().energy;
        best = Some(match best {
            Some(b) => b.min(e),
            None => e,
        });
    }
    best.unwrap()
}

fn median_zero_unit(g: &WeightedGraph, rng: &mut ChaCha8Rng) -> Option<GraphFunction> {
    let vals: Vec<Value> = (0..g.vertex_count())
        .map(|_| Value::from_ratio(rng.gen_range(-10..=10), rng.gen_range(1..=4)))
        .collect();
    let u = GraphFunction::new(g, vals).ok()?;
    let (lo, _) = median_interval(g, &u);
    let u = GraphFunction {
        values: u.values.iter().map(|v| v - &lo).collect(),
    };
    let norm = u.l1_norm(g);
    if norm.is_zero() {
        return None;
    }
    let scale = norm.recip();
    Some(GraphFunction {
        values: u.values.iter().map(|v| v * &scale).collect(),
    })
}

#[test]
fn criterion_7_cheeger_identity() {
    gate(7, "cheeger identity at graph scale", Some(Duration::from_secs(60)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut graphs: Vec<(WeightedGraph, Option<Value>)> = corpus_graphs()
            .into_iter()
            .map(|(g, h)| (g, Some(h)))
            .collect();
        for _ in 0..50 {
            graphs.push((random_graph(&mut rng, 10), None));
        }
        for (g, expected) in &graphs {
            let (h, _) = cheeger_brute(g).unwrap();
            if let Some(e) = expected {
                assert_eq!(&h, e);
            }
            assert_eq!(indicator_minimum(g), h, "indicator minimum disagrees");
        }

        let mut checked = 0;
        while checked < 100 {
            let g = random_graph(&mut rng, 8);
            let (h, _) = cheeger_brute(&g).unwrap();
            let Some(u) = median_zero_unit(&g, &mut rng) else { continue };
            if u.is_constant() {
                continue;
            }
            assert!(tv(&g, &u) >= h, "lower bound failed");
            let b = cheeger_function_bound(&g, &u).unwrap();
            assert!(b.subset_ratio <= b.energy, "rounding lost ground");
            checked += 1;
        }
    });
}

#[test]
fn criterion_8_median_machinery() {
    gate(8, "median machinery", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let half = Value::from_ratio(1, 2);
        for _ in 0..100 {
            let g = random_graph(&mut rng, 8);
            let vals: Vec<Value> = (0..g.vertex_count())
                .map(|_| Value::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
                .collect();
            let u = GraphFunction::new(&g, vals).unwrap();
            let (lo, hi) = median_interval(&g, &u);
            // grid scan: Σ m|u-c| over vertex values is minimized exactly
            // on the median interval
            let cost = |c: &Value| -> Value {
                u.values
                    .iter()
                    .zip(g.measures())
                    .fold(Value::zero(), |acc, (v, m)| acc + &(v - c).abs() * m)
            };
            let mut grid = u.values.clone();
            grid.sort();
            grid.dedup();
            let best = grid.iter().map(&cost).min().unwrap();
            for c in &grid {
                let inside = *c >= lo && *c <= hi;
                assert_eq!(cost(c) == best, inside, "scan minimizer mismatch at {}", c);
                let mass_le = u
                    .values
                    .iter()
                    .zip(g.measures())
                    .filter(|(v, _)| *v <= c)
                    .fold(Value::zero(), |acc, (_, m)| acc + m.clone());
                let mass_ge = u
                    .values
                    .iter()
                    .zip(g.measures())
                    .filter(|(v, _)| *v >= c)
                    .fold(Value::zero(), |acc, (_, m)| acc + m.clone());
                assert_eq!(mass_le >= half && mass_ge >= half, inside);
            }
        }

        let mut checked = 0;
        while checked < 50 {
            let g = random_graph(&mut rng, 8);
            let Some(u) = median_zero_unit(&g, &mut rng) else { continue };
            if u.is_constant() {
                continue;
            }
            let path = tan_loop(&g, &u, rng.gen_range(0..5)).unwrap();
            let (_, verdict) = path_median_extract(&g, &path).unwrap();
            assert!(verdict, "extraction missed the median step");
            checked += 1;
        }
    });
}
