use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pmeans::geometry::CirclePoint;
use pmeans::gibbs::tv_grid;
use pmeans::schedules::{Alpha, Beta, PowerKappa, Schedule};
use pmeans::simulator::{run_trajectories, Algorithm, Initial, SimConfig};
use pmeans::stats::{kolmogorov_survival, ks_statistic};
use pmeans::CircleMeasure;

fn benchmark() -> CircleMeasure {
    CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35]).unwrap()
}

fn finals(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, n: usize) -> Vec<f64> {
    run_trajectories(m, s, cfg, n).unwrap().iter().map(|r| r.final_position.theta()).collect()
}

fn two_sample_pvalue(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    kolmogorov_survival(ne.sqrt() * d)
}

fn histogram(xs: &[f64], bins: usize) -> Vec<f64> {
    let mut h = vec![0.0; bins];
    for x in xs {
        let k = (((x + PI) / TAU) * bins as f64).floor() as usize;
        h[k.min(bins - 1)] += bins as f64 / xs.len() as f64;
    }
    h
}

#[test]
fn sharp_kernel_makes_z_match_x() {
    let m = benchmark();
    let base = Schedule::new(Alpha::Power { c1: 1.0, r1: 1.0, c: 1.0 }, Beta::Constant(3.0), None).unwrap();
    let sharp = base.with_kappa(PowerKappa { c2: 1e6, r3: 1.0, k: 0.01 }).unwrap();
    let x = SimConfig::new(Algorithm::X, 2.0, 20.0, vec![20.0], 31).unwrap();
    let z = SimConfig::new(Algorithm::Z, 2.0, 20.0, vec![20.0], 32).unwrap();
    let p = two_sample_pvalue(&finals(&m, &base, &x, 4000), &finals(&m, &sharp, &z, 4000));
    assert!(p > 1e-3, "two-sample KS p = {p}");
}

#[test]
fn diffusion_variant_tracks_jump_process_for_small_alpha() {
    let m = benchmark();
    let s = Schedule::new(Alpha::Constant(0.01), Beta::Constant(2.0), None).unwrap();
    let x = SimConfig::new(Algorithm::X, 2.0, 10.0, vec![10.0], 41).unwrap();
    let xt = SimConfig::new(Algorithm::XTilde, 2.0, 10.0, vec![10.0], 42).unwrap();
    let a = histogram(&finals(&m, &s, &x, 4000), 12);
    let b = histogram(&finals(&m, &s, &xt, 4000), 12);
    let tv = tv_grid(&a, &b).unwrap();
    assert!(tv < 0.1, "TV = {tv}");
}

#[test]
fn diffusion_variant_contracts_to_a_single_atom() {
    // Against one atom at 0 the p = 2 drift is an Ornstein–Uhlenbeck pull with
    // stationary variance 1/(2β), up to the Euler factor 1/(1 − β dt/2).
    let m = CircleMeasure::empirical_uniform(&[0.0]).unwrap();
    let beta = 10.0;
    let dt = 1e-3;
    let s = Schedule::new(Alpha::Constant(1.0), Beta::Constant(beta), None).unwrap();
    let cfg = SimConfig::new(Algorithm::XTilde, 2.0, 5.0, vec![5.0], 51).unwrap().with_euler_dt(dt).unwrap();
    let xs = finals(&m, &s, &cfg, 4000);
    let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    let target = 1.0 / (2.0 * beta) / (1.0 - beta * dt / 2.0);
    let sd = target * (2.0 / xs.len() as f64).sqrt();
    assert!((var - target).abs() < 4.0 * sd, "variance {var} vs {target}");
}

#[test]
fn frozen_start_stays_fixed_without_time() {
    let m = benchmark();
    let s = Schedule::annealing(1.0, 1.0).unwrap();
    let cfg = SimConfig::new(Algorithm::X, 2.0, 1e-300, vec![1e-300], 1).unwrap().with_initial(Initial::Fixed(CirclePoint::wrap(1.0)));
    let rec = run_trajectories(&m, &s, &cfg, 4).unwrap();
    for r in rec {
        assert!((r.final_position.theta() - 1.0).abs() < 1e-100);
    }
}

fn cdf_of(m: &CircleMeasure) -> impl Fn(f64) -> f64 {
    let n = 1 << 14;
    let h = TAU / n as f64;
    let dens: Vec<f64> = (0..=n).map(|i| m.density(CirclePoint::wrap(-PI + i as f64 * h)).unwrap()).collect();
    let mut acc = vec![0.0; n + 1];
    for i in 0..n {
        acc[i + 1] = acc[i] + 0.5 * (dens[i] + dens[i + 1]) * h / TAU;
    }
    let total = acc[n];
    move |x: f64| {
        let u = (x + PI) / h;
        let i = (u.floor() as usize).min(n - 1);
        let f = u - i as f64;
        (acc[i] + f * (acc[i + 1] - acc[i])) / total
    }
}

#[test]
fn measure_samplers_follow_their_densities() {
    let measures = [
        benchmark(),
        CircleMeasure::trig_poly(vec![0.5, 0.2], vec![0.3, 0.0]).unwrap(),
        CircleMeasure::piecewise_linear(vec![0.5, 2.0, 0.2, 1.3]).unwrap(),
        CircleMeasure::uniform(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for m in &measures {
        let xs: Vec<f64> = (0..20_000).map(|_| m.sample(&mut rng).theta()).collect();
        let d = ks_statistic(&xs, cdf_of(m));
        let p = kolmogorov_survival((xs.len() as f64).sqrt() * d);
        assert!(p > 1e-3, "{:?}: KS p = {p}", m.kind());
    }
}
