//! End-to-end acceptance checks. Runs without the test harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use latvar::geometry::{gamma_prime_zero, isotropic_covariogram, Rotation, Shape};
use latvar::lattice::{lattice_constant, Lattice};
use latvar::spectral::{hankel_transform, k2hat_closed, k2hat_numeric, spectral_density, Interpolation, RadialProfile};
use latvar::variance::{mean_count, monte_carlo, phi_profile, variance_isotropic, variance_spectral, MonteCarloSummary};

type Check = Result<String, String>;

struct Outcome {
    id: usize,
    title: &'static str,
    result: Check,
    elapsed: Duration,
    limit: Option<f64>,
}

fn run(id: usize, title: &'static str, limit: Option<f64>, f: impl FnOnce() -> Check) -> Outcome {
    let t = Instant::now();
    let result = f();
    Outcome { id, title, result, elapsed: t.elapsed(), limit }
}

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn frac_var(l: f64) -> f64 {
    let f = l - l.floor();
    f * (1.0 - f)
}

fn grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step).round() as usize;
    (1..=n).map(|i| i as f64 * step).collect()
}

// Hurwitz zeta ζ(s, a) by Euler–Maclaurin with 40 explicit terms.
fn hurwitz(s: f64, a: f64) -> f64 {
    let n = 40.0;
    let mut sum: f64 = (0..40).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = n + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // B_{2j} / (2j)!
    let coef = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0];
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (j, c) in coef.iter().enumerate() {
        sum += c * rising * power;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power /= x * x;
    }
    sum
}

struct McCache {
    cube: Vec<(usize, f64, MonteCarloSummary<f64>)>,
    disk: Vec<(f64, MonteCarloSummary<f64>)>,
}

fn criterion_1() -> Check {
    let z1 = Lattice::<f64>::integer(1);
    let mut worst: f64 = 0.0;
    for (k, &l) in [0.3, 1.0, 2.7, 10.5].iter().enumerate() {
        let iv = Shape::cuboid(&[l / 2.0]).unwrap();
        let v = variance_spectral(&z1, &iv, 1.0, &Rotation::identity(1), 1e-9).map_err(|e| e.to_string())?;
        let err = (v.value - frac_var(l)).abs();
        worst = worst.max(err);
        ensure(err <= 1e-6, format!("ℓ={l}: spectral {} vs {}", v.value, frac_var(l)))?;
        let mc = monte_carlo(&z1, &iv, 1.0, false, 10_000, 100 + k as u64).map_err(|e| e.to_string())?.variance;
        ensure(
            (mc.value - frac_var(l)).abs() <= 3.0 * mc.uncertainty,
            format!("ℓ={l}: MC {} ± {} vs {}", mc.value, mc.uncertainty, frac_var(l)),
        )?;
    }
    Ok(format!("max spectral error {worst:.1e}"))
}

fn criterion_2() -> Check {
    let c1 = lattice_constant(&Lattice::<f64>::integer(1), 1e-14).map_err(|e| e.to_string())?.value;
    let e1 = (c1 - 1.0 / 12.0).abs();
    ensure(e1 <= 1e-10, format!("C_Z1 = {c1}"))?;
    let zeta = hurwitz(1.5, 1.0);
    let beta = 4f64.powf(-1.5) * (hurwitz(1.5, 0.25) - hurwitz(1.5, 0.75));
    let oracle = zeta * beta / PI.powi(3);
    let c2 = lattice_constant(&Lattice::<f64>::integer(2), 1e-14).map_err(|e| e.to_string())?.value;
    let e2 = (c2 - oracle).abs();
    ensure(e2 <= 1e-8, format!("C_Z2 = {c2} vs {oracle}"))?;
    Ok(format!("|C_Z1 − 1/12| = {e1:.1e}, |C_Z2 − ζβ/π³| = {e2:.1e}"))
}

fn criterion_3() -> Check {
    let mut worst: f64 = 0.0;
    for d in [2usize, 3] {
        let z = Lattice::<f64>::integer(d);
        let cube = Shape::unit_cube(d).unwrap();
        for &r in &[1.3, 2.7] {
            let v = variance_spectral(&z, &cube, r, &Rotation::identity(d), 1e-9).map_err(|e| e.to_string())?;
            let oracle = (r * r + frac_var(r)).powi(d as i32) - (r * r).powi(d as i32);
            let err = (v.value - oracle).abs();
            worst = worst.max(err);
            ensure(err <= 1e-6, format!("d={d} r={r}: {} vs {oracle}", v.value))?;
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

fn criterion_4(cache: &mut McCache) -> Check {
    let z2 = Lattice::<f64>::integer(2);
    let disk = Shape::ball(2, 1.0).unwrap();
    let mut lines = Vec::new();
    for (k, &r) in [2.0, 5.0, 10.0].iter().enumerate() {
        let mc = monte_carlo(&z2, &disk, r, true, 100_000, 400 + k as u64).map_err(|e| e.to_string())?;
        let se = mc.variance.uncertainty;
        let iso = variance_isotropic(&z2, &disk, r, 0.5 * se).map_err(|e| e.to_string())?;
        let z = (iso.value - mc.variance.value).abs() / se;
        ensure(z <= 3.0, format!("r={r}: isotropic {} vs MC {} ± {se}", iso.value, mc.variance.value))?;
        lines.push(format!("r={r}: {:.4} vs {:.4} ({z:.2} se)", iso.value, mc.variance.value));
        cache.disk.push((r, mc));
    }
    Ok(lines.join("; "))
}

struct Profiles {
    disk: Vec<f64>,
    ball: Vec<f64>,
}

fn criterion_5(profiles: &mut Profiles) -> Check {
    let mut lines = Vec::new();
    let cases = [
        ("disk", Shape::ball(2, 1.0).unwrap(), 200.0, 0.01, 0.02),
        ("ball", Shape::ball(3, 1.0).unwrap(), 200.0, 0.01, 0.02),
        ("square", Shape::unit_cube(2).unwrap(), 100.0, 0.05, 0.05),
    ];
    let mut failure = None;
    for (name, shape, r_max, tol, within) in cases {
        let z = Lattice::<f64>::integer(shape.dim());
        let p = phi_profile(&z, &shape, &grid(0.05, r_max), tol).map_err(|e| e.to_string())?;
        let mean = *p.running_mean.last().unwrap();
        lines.push(format!("{name}: {mean:.5}"));
        if (mean - 1.0).abs() > within && failure.is_none() {
            failure = Some(format!("{name}: running mean {mean} at r={r_max}"));
        }
        match name {
            "disk" => profiles.disk = p.phi,
            "ball" => profiles.ball = p.phi,
            _ => {}
        }
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(format!("running means {}", lines.join(", "))),
    }
}

fn criterion_6(profiles: &Profiles) -> Check {
    let max2 = profiles.disk.iter().cloned().fold(0.0, f64::max);
    let max3 = profiles.ball.iter().cloned().fold(0.0, f64::max);
    ensure(!profiles.disk.is_empty() && !profiles.ball.is_empty(), "profiles missing".into())?;
    ensure(max2 <= 2.05 && max3 <= 2.05, format!("max Φ: disk {max2}, ball {max3}"))?;
    Ok(format!("max Φ: disk {max2:.4}, ball {max3:.4}"))
}

fn criterion_7() -> Check {
    // κ_0..κ_3
    let kappa = [1.0, 2.0, PI, 4.0 * PI / 3.0];
    let shapes = [
        (Shape::ball(2, 1.0).unwrap(), 2.0 * PI),
        (Shape::ball(3, 1.0).unwrap(), 4.0 * PI),
        (Shape::unit_cube(2).unwrap(), 4.0),
        (Shape::unit_cube(3).unwrap(), 6.0),
    ];
    let mut worst: f64 = 0.0;
    for (shape, area) in shapes {
        let d = shape.dim();
        let expect = -(kappa[d - 1] / (d as f64 * kappa[d])) * area;
        let h = 1e-4 * shape.bounding_radius();
        let slope = (isotropic_covariogram(&shape, h) - isotropic_covariogram(&shape, 0.0)) / h;
        let rel = (slope / expect - 1.0).abs();
        worst = worst.max(rel);
        ensure(rel <= 0.01, format!("{shape:?}: slope {slope} vs {expect}"))?;
        ensure(
            (gamma_prime_zero(&shape) - expect).abs() <= 1e-12 * expect.abs(),
            format!("{shape:?}: gamma_prime_zero {}", gamma_prime_zero(&shape)),
        )?;
    }
    let g = gamma_prime_zero(&Shape::ball(3, 1.0).unwrap());
    ensure((g + PI).abs() <= 1e-12, format!("unit ball d=3: {g}"))?;
    Ok(format!("max relative slope error {worst:.1e}; unit ball d=3 → {g}"))
}

fn criterion_8() -> Check {
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        let k0 = k2hat_numeric(0.0f64, d).map_err(|e| e.to_string())?;
        ensure((k0.re - 1.0).hypot(k0.im) <= 1e-6, format!("d={d}: K̂₂(0) = {k0}"))?;
        for &tau in &[0.1, 0.25, 0.5] {
            let n = k2hat_numeric(tau, d).map_err(|e| e.to_string())?;
            let c = k2hat_closed(tau, d).map_err(|e| e.to_string())?;
            let diff = (n - c).norm();
            worst = worst.max(diff);
            ensure(diff <= 1e-6, format!("d={d} τ={tau}: {n} vs {c}"))?;
        }
    }
    let mut min_abs = f64::INFINITY;
    for d in 1..=3 {
        for i in -500..=500 {
            let c = k2hat_closed(i as f64 * 0.01, d).map_err(|e| e.to_string())?;
            min_abs = min_abs.min(c.norm());
        }
    }
    ensure(min_abs > 0.0, "K̂₂ vanishes on the grid".into())?;
    Ok(format!("max |numeric − closed| {worst:.1e}; min |K̂₂| on [−5,5] {min_abs:.3e}"))
}

fn criterion_9() -> Check {
    let ball = Shape::ball(3, 1.0).unwrap();
    let t: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
    let cov = RadialProfile::sample(t, f64::NEG_INFINITY, Interpolation::CubicSpline, |x| {
        isotropic_covariogram(&ball, x)
    })
    .map_err(|e| e.to_string())?;
    let mut rho: Vec<f64> = (0..5000).map(|i| i as f64 * 0.01).collect();
    rho.extend((0..=5000).map(|i| 50.0 + i as f64 * 0.05));
    let mut dens = Vec::with_capacity(rho.len());
    let mut forward_err: f64 = 0.0;
    for &p in &rho {
        let v = hankel_transform(&cov, p, 3).map_err(|e| e.to_string())?;
        forward_err = forward_err.max((v - spectral_density(&ball, p)).abs());
        dens.push(v);
    }
    let spec = RadialProfile::with_interpolation(rho, dens, -4.0, Interpolation::CubicSpline)
        .map_err(|e| e.to_string())?
        .fit_mean_tail(150.0);
    let mut worst: f64 = 0.0;
    for i in 0..=36 {
        let x = i as f64 * 0.05;
        let back = hankel_transform(&spec, x, 3).map_err(|e| e.to_string())?;
        worst = worst.max((back - isotropic_covariogram(&ball, x)).abs());
    }
    ensure(forward_err <= 1e-6, format!("forward transform off by {forward_err}"))?;
    ensure(worst <= 1e-6, format!("round trip off by {worst}"))?;
    Ok(format!("forward {forward_err:.1e}, round trip sup error {worst:.1e} on [0, 1.8]"))
}

fn criterion_10(cache: &mut McCache) -> Check {
    for d in [2usize, 3] {
        let z = Lattice::<f64>::integer(d);
        let cube = Shape::unit_cube(d).unwrap();
        for (k, &r) in [1.3, 2.7].iter().enumerate() {
            let mc = monte_carlo(&z, &cube, r, false, 10_000, 300 + 10 * d as u64 + k as u64)
                .map_err(|e| e.to_string())?;
            cache.cube.push((d, r, mc));
        }
    }
    let mut worst: f64 = 0.0;
    let mut check = |label: String, expect: f64, s: &MonteCarloSummary<f64>| -> Result<(), String> {
        let z = (s.mean_count - expect).abs() / s.mean_se.max(f64::MIN_POSITIVE);
        let exact = s.mean_se == 0.0 && s.mean_count == expect;
        if !exact {
            worst = worst.max(z);
        }
        ensure(exact || z <= 3.0, format!("{label}: {} ± {} vs {expect}", s.mean_count, s.mean_se))
    };
    for (d, r, s) in &cache.cube {
        let z = Lattice::<f64>::integer(*d);
        check(format!("cube d={d} r={r}"), mean_count(&z, &Shape::unit_cube(*d).unwrap(), *r), s)?;
    }
    let z2 = Lattice::<f64>::integer(2);
    let disk = Shape::ball(2, 1.0).unwrap();
    for (r, s) in &cache.disk {
        check(format!("disk r={r}"), mean_count(&z2, &disk, *r), s)?;
    }
    // the Cesàro scenarios at moderate dilation
    for (k, (shape, r, n)) in [
        (Shape::ball(2, 1.0).unwrap(), 40.0, 10_000u64),
        (Shape::ball(3, 1.0).unwrap(), 8.0, 10_000),
        (Shape::unit_cube(2).unwrap(), 25.0, 10_000),
    ]
    .into_iter()
    .enumerate()
    {
        let z = Lattice::<f64>::integer(shape.dim());
        let s = monte_carlo(&z, &shape, r, true, n, 500 + k as u64).map_err(|e| e.to_string())?;
        check(format!("{shape:?} r={r}"), mean_count(&z, &shape, r), &s)?;
    }
    Ok(format!("largest deviation {worst:.2} se over {} scenarios", cache.cube.len() + cache.disk.len() + 3))
}

fn criterion_11() -> Check {
    let render = || -> Result<String, String> {
        let z2 = Lattice::<f64>::integer(2);
        let disk = Shape::ball(2, 1.0).unwrap();
        let mut out = String::from("r,mean,var_mc,mc_se,phi,phi_runmean\n");
        let radii = [1.5, 2.5, 4.0];
        let p = phi_profile(&z2, &disk, &radii, 0.01).map_err(|e| e.to_string())?;
        for (i, &r) in radii.iter().enumerate() {
            let mc = monte_carlo(&z2, &disk, r, true, 2_000, 77).map_err(|e| e.to_string())?;
            out += &format!(
                "{r:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                mc.mean_count, mc.variance.value, mc.variance.uncertainty, p.phi[i], p.running_mean[i]
            );
        }
        Ok(out)
    };
    let a = render()?;
    let b = render()?;
    ensure(a == b, "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let mut cache = McCache { cube: Vec::new(), disk: Vec::new() };
    let mut profiles = Profiles { disk: Vec::new(), ball: Vec::new() };
    let outcomes = vec![
        run(1, "1D exactness", Some(5.0), criterion_1),
        run(2, "lattice constants", Some(10.0), criterion_2),
        run(3, "box factorization", None, criterion_3),
        run(4, "isotropic triangulation", Some(60.0), || criterion_4(&mut cache)),
        run(5, "Cesàro law", Some(120.0), || criterion_5(&mut profiles)),
        run(6, "boundedness", None, || criterion_6(&profiles)),
        run(7, "covariogram slope", None, criterion_7),
        run(8, "Tauberian kernels", Some(30.0), criterion_8),
        run(9, "Hankel round trip", None, criterion_9),
        run(10, "mean law", None, || criterion_10(&mut cache)),
        run(11, "reproducibility", None, criterion_11),
    ];
    let mut failed = 0;
    for o in &outcomes {
        let secs = o.elapsed.as_secs_f64();
        let slow = o.limit.is_some_and(|l| secs >= l);
        let (status, detail) = match (&o.result, slow) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over the {:.0} s budget", o.limit.unwrap())),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{}] {detail} ({secs:.2} s)", o.id, o.title);
    }
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
