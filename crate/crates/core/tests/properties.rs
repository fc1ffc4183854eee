mod common;

use common::{determinant, inverse_iteration_residual, Uniform};
use num_rational::Ratio;
use proptest::prelude::*;
use rgg_core::bounds::c_d_feasible;
use rgg_core::experiments::{emit_csv, run_trials, CsvTable, ExperimentConfig, ExperimentRecord};
use rgg_core::geometry::{make_grid, sample_uniform, RadiusSchedule};
use rgg_core::graph::{build_rgg, symmetrize, transition_matrix, GeometricGraph};
use rgg_core::spectra::{walk_spectrum, EigenConfig};
use rgg_core::Error;

fn rows(m: &rgg_core::DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.order()).map(|i| m.row(i).to_vec()).collect()
}

/// A connected geometric graph on `n` uniform points.
fn connected_rgg(n: usize, d: usize, r: f64, seed: &mut u64) -> GeometricGraph<f64> {
    loop {
        *seed += 1;
        let x = sample_uniform::<f64>(n, d, *seed).unwrap();
        let g = build_rgg(&x, r).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

#[test]
fn walk_eigenvalues_have_small_residuals() {
    let cfg = EigenConfig::default();
    let mut seed = 100;
    for (n, r) in [(40, 0.35), (120, 0.2), (512, 0.1)] {
        let g = connected_rgg(n, 2, r, &mut seed);
        let s = walk_spectrum(&g, &cfg).unwrap();
        let m = rows(symmetrize(&g).unwrap().as_dense());
        let step = (n / 16).max(1);
        for (k, &lambda) in s.values().iter().enumerate().step_by(step) {
            let res = inverse_iteration_residual(&m, lambda, k as u64);
            assert!(
                res <= 1e-9,
                "n = {n}, lambda_{k} = {lambda}: residual {res:e}"
            );
        }
    }
}

#[test]
fn eigenvalue_sum_matches_trace() {
    let cfg = EigenConfig::default();
    let mut rng = Uniform::new(31);
    for n in [5, 17, 64, 200] {
        let mut a = rgg_core::DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.range(-1.0, 1.0);
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        let sym = rgg_core::SymmetricMatrix::new(a.clone()).unwrap();
        let s = rgg_core::spectra::eigenvalues_symmetric(&sym, &cfg).unwrap();
        let sum: f64 = s.values().iter().sum();
        assert!((sum - a.trace()).abs() <= 1e-10 * n as f64, "n = {n}");
        let frob: f64 = a.as_slice().iter().map(|x| x * x).sum();
        let sq: f64 = s.values().iter().map(|x| x * x).sum();
        assert!((frob - sq).abs() <= 1e-10 * frob);
    }
}

/// Roots of `det(P - x I)` on `[-1, 1]` by sign changes on a fine grid and
/// bisection. Only simple roots show up; instances where all `n` are found
/// are compared as multisets.
#[test]
fn small_spectra_match_characteristic_polynomial() {
    let cfg = EigenConfig::default();
    let mut seed = 900;
    let mut full = 0;
    for i in 0..60 {
        let n = 3 + i % 6;
        let g = connected_rgg(n, 2, 0.6, &mut seed);
        let p = rows(transition_matrix(&g).unwrap().as_dense());
        let charpoly = |x: f64| {
            let shifted = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| p[r][c] - if r == c { x } else { 0.0 })
                        .collect()
                })
                .collect();
            determinant(shifted)
        };
        let grid = 20_000;
        let xs: Vec<f64> = (0..=grid)
            .map(|k| -1.0005 + 2.001 * k as f64 / grid as f64)
            .collect();
        let mut roots = Vec::new();
        for w in xs.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (charpoly(lo), charpoly(hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo.signum() == fhi.signum() || fhi == 0.0 {
                continue;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if charpoly(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        let s = walk_spectrum(&g, &cfg).unwrap();
        for root in &roots {
            let nearest = s
                .values()
                .iter()
                .map(|v| (v - root).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-8, "root {root} not in {:?}", s.values());
        }
        if roots.len() == n {
            full += 1;
            roots.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in roots.iter().zip(s.values()) {
                assert!((a - b).abs() <= 1e-8);
            }
        }
    }
    assert!(full >= 10, "only {full} instances had simple spectra");
}

#[test]
fn spectrum_is_invariant_under_relabelling() {
    let cfg = EigenConfig::default();
    let mut seed = 50;
    let mut rng = Uniform::new(51);
    for _ in 0..10 {
        let g = connected_rgg(150, 2, 0.2, &mut seed);
        let n = g.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.index(i + 1));
        }
        let mut lists = vec![Vec::new(); n];
        for u in 0..n {
            lists[perm[u]] = g.neighbours(u).iter().map(|&v| perm[v]).collect();
        }
        let h = GeometricGraph::from_adjacency(2, g.radius(), lists).unwrap();
        let (a, b) = (
            walk_spectrum(&g, &cfg).unwrap(),
            walk_spectrum(&h, &cfg).unwrap(),
        );
        let diff = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-10, "{diff:e}");
    }
}

#[test]
fn walk_spectra_lie_in_unit_interval() {
    let cfg = EigenConfig::default();
    let mut seed = 7;
    for _ in 0..10 {
        let g = connected_rgg(200, 2, 0.15, &mut seed);
        let s = walk_spectrum(&g, &cfg).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-10);
        assert!(s
            .values()
            .iter()
            .all(|v| (-1.0 - 1e-10..=1.0 + 1e-10).contains(v)));
        assert!(
            s.values()[1] < 1.0 - 1e-10,
            "connected graph has a simple top eigenvalue"
        );
    }
    let grid = make_grid::<f64>(12, 2).unwrap();
    let s = walk_spectrum(&build_rgg(&grid, 0.2).unwrap(), &cfg).unwrap();
    assert!((s.values()[0] - 1.0).abs() < 1e-10);
}

#[test]
fn single_precision_path_runs() {
    let grid = make_grid::<f32>(6, 2).unwrap();
    let g = build_rgg(&grid, 0.3f32).unwrap();
    let s = walk_spectrum(
        &g,
        &EigenConfig::<f32> {
            tol: 1e-6,
            max_sweeps: 30,
        },
    )
    .unwrap();
    assert!((s.values()[0] - 1.0).abs() < 1e-5);
    assert_eq!(s.len(), 36);
}

#[test]
fn feasible_c_d_is_exact_over_rationals() {
    let r = |a: i64, b: i64| Ratio::new(a, b);
    // q = 0: min((1 + t/8) - 1, |(1 - t/8) - 1|) = t/8, so c_d = 1.
    for t in [r(1, 2), r(1, 1), r(8, 1), r(20, 3)] {
        assert_eq!(c_d_feasible(t, r(0, 1), 2).unwrap(), r(1, 1));
    }
    // t = 8, q = 1/4, d = 1: shrink 1/2, upper 3, lower 1, c_d = 1.
    assert_eq!(c_d_feasible(r(8, 1), r(1, 4), 1).unwrap(), r(1, 1));
    // t = 4, q = 1/4, d = 2: shrink 1/4, upper 5, lower 1, c_d = 2.
    assert_eq!(c_d_feasible(r(4, 1), r(1, 4), 2).unwrap(), r(2, 1));
    let f = c_d_feasible(0.3f64, 0.1, 3).unwrap();
    let exact = c_d_feasible(r(3, 10), r(1, 10), 3).unwrap();
    assert!((f - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-12);
    assert!(matches!(
        c_d_feasible(r(1, 1), r(1, 2), 2),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        c_d_feasible(r(0, 1), r(0, 1), 2),
        Err(Error::Domain(_))
    ));
}

#[test]
fn emit_csv_writes_metadata_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        sides: vec![8],
        trials: 3,
        master_seed: 4242,
        t_grid: vec![0.5, 2.0],
        ..Default::default()
    };
    let records = run_trials(&cfg).unwrap().records();
    let path = dir.path().join("out.csv");
    emit_csv(&records, &cfg.echo(), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let table = CsvTable::parse(&text).unwrap();
    assert_eq!(table.meta_value("seed"), Some("4242"));
    assert!(table.meta_value("tool").is_some());
    let back = ExperimentRecord::parse_csv(&text).unwrap();
    assert_eq!(back.len(), records.len());
    for (a, b) in back.iter().zip(&records) {
        assert_eq!(a.hs_dist.to_bits(), b.hs_dist.to_bits());
        assert_eq!(a.w1_dist.to_bits(), b.w1_dist.to_bits());
        assert_eq!(a.r.to_bits(), b.r.to_bits());
    }

    let empty: Vec<ExperimentRecord> = Vec::new();
    assert!(matches!(
        emit_csv(&empty, &[], &dir.path().join("e.csv")),
        Err(Error::Empty(_))
    ));
    let missing = dir.path().join("no/such/dir/out.csv");
    match emit_csv(&records, &[], &missing) {
        Err(Error::Io { path, .. }) => assert!(path.contains("no/such/dir")),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}

#[test]
fn default_schedule_rarely_disconnects() {
    let cfg = ExperimentConfig {
        sides: vec![16],
        trials: 50,
        master_seed: 99,
        ..Default::default()
    };
    let set = run_trials(&cfg).unwrap();
    let (disconnected, total) = set.disconnected_counts()[&(2, 16)];
    assert_eq!(total, 50);
    assert!((disconnected as f64) < 0.1 * total as f64);
    assert!(set.schedule_warnings().is_empty());
    for r in set.records().iter().filter(|r| r.connected) {
        assert!(r.mean_gap <= r.hs_dist + 1e-12);
        assert!(r.w1_dist >= 0.0);
        assert_eq!(r.m_over_r, r.m_n / r.r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radius_decreases_past_threshold(c in 0.2f64..4.0, beta in 1.0f64..3.0, d in 1usize..6, n in 8u32..200_000) {
        let s = RadiusSchedule::new(c, beta).unwrap();
        let n = (n as f64).max(s.monotone_threshold().ceil());
        prop_assert!(s.radius(n + 1.0, d).unwrap() < s.radius(n, d).unwrap());
    }
}
