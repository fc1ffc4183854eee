//! Times the stages of one trial: `cargo run --release -p rgg-core --example timing -- 64`.

use std::time::Instant;

use rgg_core::geometry::{make_grid, sample_uniform, RadiusSchedule};
use rgg_core::graph::build_rgg;
use rgg_core::matching::bottleneck_matching;
use rgg_core::spectra::{walk_spectrum, EigenConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let side: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(32);
    let n = side * side;
    let r = RadiusSchedule::<f64>::default_for(2).radius(n as f64, 2)?;
    let grid = make_grid::<f64>(side, 2)?;
    let x = sample_uniform::<f64>(n, 2, 1)?;

    let t = Instant::now();
    let g = build_rgg(&x, r)?;
    println!(
        "build_rgg      n={n} r={r:.4} edges={} {:?}",
        g.edge_count(),
        t.elapsed()
    );
    let t = Instant::now();
    let m = bottleneck_matching(&x, &grid)?;
    println!("matching       M_n={:.5} {:?}", m.bottleneck(), t.elapsed());
    stages(&g);
    let t = Instant::now();
    let s = walk_spectrum(&g, &EigenConfig::default())?;
    println!("walk_spectrum  top={:.12} {:?}", s.values()[0], t.elapsed());
    Ok(())
}

fn stages(g: &rgg_core::graph::GeometricGraph<f64>) {
    use rgg_core::spectra::{tridiagonal_eigenvalues, tridiagonalize};
    let t = Instant::now();
    let m = rgg_core::graph::symmetrize(g).unwrap();
    println!("  symmetrize {:?}", t.elapsed());
    let mut a = m.as_dense().as_slice().to_vec();
    let t = Instant::now();
    let (d, e) = tridiagonalize(&mut a, g.len());
    println!("  tridiagonalize {:?}", t.elapsed());
    let t = Instant::now();
    tridiagonal_eigenvalues(d, &e, &EigenConfig::default()).unwrap();
    println!("  ql {:?}", t.elapsed());
}
