//! Timing grid for the multiplication modes. Emits CSV rows
//! `p,r,d,mode,nanos,crt_retries` (d = degree of each factor) and prints
//! log-log slope estimates of runtime versus d per mode.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use skewpoly::evalinterp::NormalBasisCtx;
use skewpoly::fastmult::{self, FastCtx};
use skewpoly::modmult;
use skewpoly::skew;
use skewpoly::tower::Tower;

pub struct Options {
    pub p: u64,
    pub r: usize,
    pub ds: Vec<usize>,
    pub modes: Vec<String>,
    pub reps: usize,
    pub seed: u64,
    pub csv_path: String,
    pub parallel: bool,
}

pub fn run(opts: &Options) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let t = Tower::random(opts.p, opts.r, &mut rng).map_err(|e| e.to_string())?;
    let mut fctx = FastCtx::new(&t).map_err(|e| e.to_string())?;
    fctx.parallel = opts.parallel;
    if opts.parallel {
        println!("note: --parallel times wall-clock over threaded per-modulus products");
    }
    let nbctx = NormalBasisCtx::new(&t).map_err(|e| e.to_string())?;
    let mut csv = String::from("p,r,d,mode,nanos,crt_retries\n");
    let mut points: Vec<(String, f64, f64)> = Vec::new(); // (mode, ln d, ln nanos)
    for &d in &opts.ds {
        let a = skew::rand_skew(&t, d, &mut rng);
        let b = skew::rand_skew(&t, d, &mut rng);
        for mode in &opts.modes {
            if mode == "small" && 2 * d >= t.r() {
                return Err(format!(
                    "mode=small needs 2d < r (d={d}, r={})",
                    t.r()
                ));
            }
            let mut nanos: Vec<u128> = Vec::with_capacity(opts.reps);
            let mut retries = 0u32;
            // one discarded warmup plus the measured repetitions
            for rep in 0..=opts.reps {
                let start = Instant::now();
                let rep_retries = match mode.as_str() {
                    "naive" => {
                        let _ = skew::mul_naive(&t, &a, &b);
                        0
                    }
                    "cyclic" => {
                        let _ = modmult::mod_mul_cyclic(&t, &nbctx, &a, &b);
                        0
                    }
                    "small" => {
                        let _ = fastmult::mult_small_degree(&t, &nbctx, &a, &b)
                            .map_err(|e| e.to_string())?;
                        0
                    }
                    "crt" => {
                        let (_, stats) = fastmult::mult_crt_with_opts(
                            &t,
                            &a,
                            &b,
                            &mut rng,
                            &fctx.lifts,
                            false,
                            opts.parallel,
                        );
                        stats.retries()
                    }
                    "auto" => {
                        let (_, stats) =
                            fastmult::multiply_with_stats(&t, &fctx, &a, &b, &mut rng);
                        stats.retries()
                    }
                    other => return Err(format!("unknown bench mode '{other}'")),
                };
                let elapsed = start.elapsed().as_nanos();
                if rep > 0 {
                    nanos.push(elapsed);
                    retries += rep_retries;
                }
            }
            nanos.sort_unstable();
            let median = nanos[nanos.len() / 2];
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                opts.p, opts.r, d, mode, median, retries
            ));
            points.push((mode.clone(), (d as f64).ln(), (median.max(1) as f64).ln()));
        }
    }
    std::fs::write(&opts.csv_path, &csv).map_err(|e| e.to_string())?;
    println!("wrote {} ({} rows)", opts.csv_path, opts.ds.len() * opts.modes.len());
    for mode in &opts.modes {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|(m, _, _)| m == mode)
            .map(|(_, x, y)| (*x, *y))
            .collect();
        if pts.len() >= 2 {
            println!(
                "slope[{mode}] of runtime vs d at p={} r={}: {:.2}",
                opts.p,
                opts.r,
                slope(&pts)
            );
        }
    }
    Ok(())
}

/// Least-squares slope of y on x.
pub fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    cov / var
}
