//! End-to-end acceptance checks. Runs as a plain binary and prints one line
//! per criterion; exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use bv_plateau::bv_curve::{completed_curve, mollify_sequence, Builtin, ClosedPolyline, Curve, Side};
use bv_plateau::homogeneous::{graph_area_term, relaxed_area, singular_term, total_variation_du, ExtensionParams};
use bv_plateau::plateau::{
    jacobian_tv_minimize, make_disk_mesh_with_angles, winding_area, winding_area_grid,
    PlateauOptions,
};
use bv_plateau::relaxation_lab::{slicing_check, strict_convergence_report, RecoveryOptions, SequenceReport};
use bv_plateau::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, ok: bool, detail: String) {
        self.0.push(Check { name: name.into(), ok, detail });
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.add(name, ok, format!("{got:.12} vs {want:.12}"));
    }

    fn rel(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol * want.abs();
        self.add(name, ok, format!("{got:.12} vs {want:.12}"));
    }
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- oracles

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton on P_n.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_{B_ℓ} √(1+|∇u|²) dx` with ∇u from central differences of
/// `x ↦ γ(x/|x|)`, Gauss-Legendre in the radius and midpoint in the angle.
fn graph_area_oracle(curve: &Curve, ell: f64, n_theta: usize) -> f64 {
    let u = |x: Vec2| curve.evaluate(x.y.atan2(x.x), Side::Right);
    let gl = gauss_legendre(24);
    let mut total = 0.0;
    for i in 0..n_theta {
        let t = (i as f64 + 0.5) * 2.0 * PI / n_theta as f64;
        let dir = Vec2::new(t.cos(), t.sin());
        let mut radial = 0.0;
        for &(xi, wi) in &gl {
            let r = 0.5 * ell * (xi + 1.0);
            let x = dir * r;
            let step = 1e-5 * r;
            let ex = Vec2::new(step, 0.0);
            let ey = Vec2::new(0.0, step);
            let dx = (u(x + ex) - u(x - ex)) * (0.5 / step);
            let dy = (u(x + ey) - u(x - ey)) * (0.5 / step);
            let g2 = dx.norm_sq() + dy.norm_sq();
            radial += 0.5 * ell * wi * r * (1.0 + g2).sqrt();
        }
        total += radial * 2.0 * PI / n_theta as f64;
    }
    total
}

fn shoelace(poly: &ClosedPolyline) -> f64 {
    let v = poly.vertices();
    0.5 * v.windows(2).map(|w| w[0].cross(w[1])).sum::<f64>()
}

fn figure_eight() -> ClosedPolyline {
    ClosedPolyline::new(
        [(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0., 0.), (0., -1.), (-1., -1.), (-1., 0.)]
            .iter()
            .map(|&(x, y)| Vec2::new(x, y))
            .collect(),
    )
}

fn pentagram() -> ClosedPolyline {
    ClosedPolyline::new((0..5).map(|i| Vec2::from_angle(0.3 + 4.0 * PI * i as f64 / 5.0)).collect())
}

fn random_polyline(rng: &mut ChaCha8Rng) -> ClosedPolyline {
    loop {
        let n = rng.gen_range(3..=10);
        let v: Vec<Vec2> = (0..n).map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let p = ClosedPolyline::new(v);
        let shortest = p.vertices().windows(2).map(|w| w[0].dist(w[1])).fold(f64::INFINITY, f64::min);
        if shortest > 0.1 {
            return p;
        }
    }
}

// ---------------------------------------------------------------- criteria

fn vortex(c: &mut Checks) {
    let v = Builtin::Vortex.curve();
    let p = ExtensionParams::default();
    let exact = PI * (SQRT_2 + (1.0 + SQRT_2).ln());
    let g = graph_area_term(&v, &p);
    c.rel("graph area closed form", g, exact, 1e-6);
    c.rel("graph area vs 2-D quadrature", g, graph_area_oracle(&v, 1.0, 64), 1e-6);
    let t = Instant::now();
    let report = relaxed_area(&v, &p, &PlateauOptions { h: 0.02, ..Default::default() }).unwrap();
    let secs = t.elapsed().as_secs_f64();
    c.close("plateau lower", report.plateau.lower, PI, 1e-3);
    c.add("plateau upper <= 1.05 pi", report.plateau.upper <= 1.05 * PI, format!("{:.6}", report.plateau.upper));
    c.add("h = 0.02 within 5 min", secs <= 300.0, format!("{secs:.1}s"));
    c.rel("relaxed area lower", report.relaxed_area_lower, exact + PI, 1e-3);
}

fn triple(c: &mut Checks) {
    let t = Builtin::Triple.curve();
    let tv = t.total_variation();
    let exact = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * b.max(1.0);
    c.add(
        "TV decomposition (0,3,0,3)",
        exact(tv.ac_mass, 0.0) && exact(tv.jump_mass, 3.0) && exact(tv.cantor_mass, 0.0) && exact(tv.total, 3.0),
        format!("{tv:?}"),
    );
    let poly = completed_curve(&t, 1024);
    c.add("completed curve is the triangle", poly.open_vertices().len() == 3, format!("{} vertices", poly.open_vertices().len()));
    c.close("completed length", poly.length(), 3.0, 1e-9);
    let r = relaxed_area(&t, &ExtensionParams::default(), &PlateauOptions::default()).unwrap();
    let lower = PI + 3.0 + 3f64.sqrt() / 4.0;
    c.close("relaxed area lower", r.relaxed_area_lower, lower, 1e-6);
    c.add("relaxed area upper within 5%", r.relaxed_area_upper <= 1.05 * lower, format!("{:.6}", r.relaxed_area_upper));
    c.add(
        "plateau upper within 5%",
        r.plateau.upper <= 1.05 * 3f64.sqrt() / 4.0,
        format!("{:.9}", r.plateau.upper),
    );
}

fn constant(c: &mut Checks) {
    let k = Builtin::Constant.curve();
    for ell in [1.0, 2.0, 3.5] {
        let r = relaxed_area(&k, &ExtensionParams::with_radius(ell), &PlateauOptions::default()).unwrap();
        c.add(&format!("relaxed area = pi l^2 (l={ell})"), r.relaxed_area_lower == PI * ell * ell && r.relaxed_area_upper == PI * ell * ell, format!("{}", r.relaxed_area_upper));
        c.add(&format!("plateau [0,0] (l={ell})"), r.plateau.lower == 0.0 && r.plateau.upper == 0.0, String::new());
        c.add(&format!("singular terms 0 (l={ell})"), r.singular_term == 0.0 && total_variation_du(&k, &r.params) == 0.0, String::new());
    }
}

fn winding_exactness(c: &mut Checks) {
    let mut worst = 0.0f64;
    let mut grid_ok = true;
    let mut simple = true;
    for n in 3..=64 {
        let poly = ClosedPolyline::regular(n, 1.0);
        let exact = n as f64 / 2.0 * (2.0 * PI / n as f64).sin();
        let w = winding_area(&poly).unwrap();
        worst = worst.max((w - exact).abs());
        simple &= rel_eq(w, shoelace(&poly).abs(), 1e-12);
        let g = winding_area_grid(&poly, 256, n as u64);
        grid_ok &= g.agrees_with(w, 3.0);
    }
    c.add("n-gons within 1e-12", worst <= 1e-12, format!("max error {worst:e}"));
    c.add("n-gons match the shoelace area", simple, String::new());
    let f8 = figure_eight();
    let w = winding_area(&f8).unwrap();
    c.close("figure-eight", w, 2.0, 1e-12);
    let g = winding_area_grid(&f8, 512, 99);
    grid_ok &= g.agrees_with(w, 3.0);
    c.add("grid oracle within 3 sigma", grid_ok, format!("figure-eight grid {:.4} ± {:.4}", g.value, g.std_error));
}

fn invariance(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut curves = vec![figure_eight(), pentagram(), completed_curve(&Builtin::Vortex.curve(), 97)];
    curves.extend((0..10).map(|_| random_polyline(&mut rng)));
    let (mut rot, mut rev, mut rigid, mut reparam, mut dil) = (true, true, true, true, true);
    for poly in &curves {
        let w = winding_area(poly).unwrap();
        let n = poly.open_vertices().len();
        for s in 0..n {
            rot &= winding_area(&poly.rotated(s)).unwrap() == w;
        }
        rev &= winding_area(&poly.reversed()).unwrap() == w;
        let (a, b) = (0.7f64, Vec2::new(3.0, -2.0));
        let moved = poly.map(|p| Vec2::new(a.cos() * p.x - a.sin() * p.y, a.sin() * p.x + a.cos() * p.y) + b);
        rigid &= rel_eq(winding_area(&moved).unwrap(), w, 1e-12);
        // monotone reparametrization: extra vertices along the segments
        let mut refined = Vec::new();
        for s in poly.vertices().windows(2) {
            for t in [0.0, 0.25, 0.6] {
                refined.push(s[0].lerp(s[1], t));
            }
        }
        reparam &= rel_eq(winding_area(&ClosedPolyline::new(refined)).unwrap(), w, 1e-12);
        dil &= rel_eq(winding_area(&poly.map(|p| p * 2.5)).unwrap(), 6.25 * w, 1e-12);
    }
    c.add("vertex rotation (bitwise)", rot, String::new());
    c.add("orientation reversal (bitwise)", rev, String::new());
    c.add("rigid motion (1e-12 rel)", rigid, String::new());
    c.add("monotone reparametrization (1e-12 rel)", reparam, String::new());
    c.add("dilation scales by c^2", dil, String::new());
    let opts = PlateauOptions { h: 0.1, ..Default::default() };
    let t = Builtin::Triple.curve();
    let r1 = relaxed_area(&t, &ExtensionParams::with_radius(1.0), &opts).unwrap();
    let r3 = relaxed_area(&t, &ExtensionParams::with_radius(3.0), &opts).unwrap();
    c.add("plateau certificate identical for l=1 and l=3", r1.plateau == r3.plateau, String::new());
}

fn degree_bound(c: &mut Checks) {
    let opts = PlateauOptions { h: 0.1, max_iters: 400, ..Default::default() };
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut check = |poly: &ClosedPolyline| {
        if poly.is_degenerate() {
            return;
        }
        let angles = bv_plateau::plateau::boundary_angles_for(poly, opts.h);
        let mesh = make_disk_mesh_with_angles(opts.h, &angles).unwrap();
        let seen = ClosedPolyline::new(mesh.boundary_loop.iter().map(|&i| poly.point_at(mesh.vertices[i].angle())).collect());
        let lower = winding_area(&seen).unwrap();
        let run = jacobian_tv_minimize(poly, &mesh, &opts.delta_schedule, opts.max_iters).unwrap();
        worst = worst.min(run.upper - lower);
        if run.upper < lower - 1e-9 {
            failures += 1;
        }
    };
    for b in Builtin::ALL {
        check(&completed_curve(&b.curve(), 1024));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        check(&random_polyline(&mut rng));
    }
    c.add("upper >= winding area - 1e-9 (5 builtins, 50 random)", failures == 0, format!("min slack {worst:e}"));
}

fn slicing(c: &mut Checks) {
    let p = ExtensionParams::default();
    let v = slicing_check(&Builtin::Vortex.curve(), &p, 0.5, 256).unwrap();
    c.add("vortex eps=0.5", v.relative_error < 1e-3, format!("rel error {:e}", v.relative_error));
    let t = slicing_check(&Builtin::Triple.curve(), &p, 0.0, 256).unwrap();
    c.add("triple point eps=0", t.relative_error < 1e-3, format!("rel error {:e}", t.relative_error));
}

fn strict_convergence(c: &mut Checks, coarse: &SequenceReport, fine: &SequenceReport) {
    let tvs: Vec<f64> = coarse.rows.iter().map(|r| r.tv).collect();
    let l1: Vec<f64> = coarse.rows.iter().map(|r| r.l1_error).collect();
    c.add("TV(phi_k) nondecreasing and <= 3", coarse.tv_nondecreasing && coarse.tv_bounded, format!("{tvs:?}"));
    c.add("TV(phi_k) -> 3", coarse.final_tv_error < 1e-12, format!("{:e}", coarse.final_tv_error));
    c.add("L1 error strictly decreasing", l1.windows(2).all(|w| w[1] < w[0]), l1.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", "));
    let last = fine.rows.last().unwrap();
    c.add(
        "area at k=32, h=0.02 within 5%",
        fine.final_area_error <= 0.05,
        format!("{:.6} vs {:.6}", last.area, fine.area_target),
    );
}

fn rescaling(c: &mut Checks, triple: &SequenceReport) {
    let v = strict_convergence_report(
        &Builtin::Vortex.curve(),
        &ExtensionParams::default(),
        &[2, 8, 32],
        &RecoveryOptions { h: 0.05, ..Default::default() },
    )
    .unwrap();
    for (name, rep) in [("vortex", &v), ("triple", triple)] {
        for row in rep.rows.iter().filter(|r| [2, 8, 32].contains(&r.k)) {
            c.add(
                &format!("{name} k={}", row.k),
                rel_eq(row.jacobian_tv, row.filler_tv, 1e-3),
                format!("{:.9} vs {:.9}", row.jacobian_tv, row.filler_tv),
            );
        }
    }
}

fn cantor(c: &mut Checks) {
    let k = Builtin::CantorArc.curve();
    let tv = k.total_variation();
    c.add(
        "TV decomposition (0,0,pi/2,pi/2)",
        tv.ac_mass.abs() < 1e-12 && tv.jump_mass.abs() < 1e-12 && (tv.cantor_mass - FRAC_PI_2).abs() < 1e-12 && (tv.total - FRAC_PI_2).abs() < 1e-12,
        format!("({:.6}, {:.6}, {:.6}, {:.6})", tv.ac_mass, tv.jump_mass, tv.cantor_mass, tv.total),
    );
    c.close("Cantor mass pi/2", tv.cantor_mass, FRAC_PI_2, 1e-12);
    for ell in [1.0, 2.0] {
        let s = singular_term(&k, &ExtensionParams::with_radius(ell));
        c.close(&format!("singular term l*pi/2 (l={ell})"), s, ell * FRAC_PI_2, 1e-12);
    }
    let poly = completed_curve(&k, 4096);
    c.close("completed length pi/2 + chord", poly.length(), FRAC_PI_2 + SQRT_2, 1e-6);
    let tvs: Vec<f64> = [1, 2, 4, 8, 16].iter().map(|&j| mollify_sequence(&k, j).total_variation()).collect();
    c.add("mollified TV constant", tvs.iter().all(|t| (t - tvs[0]).abs() < 1e-12), format!("{:.9}", tvs[0]));
    c.add("mollified TV = pi/2", tvs.iter().all(|t| (t - FRAC_PI_2).abs() < 1e-12), format!("{:.9}", tvs[0]));
}

type Criterion<'a> = Box<dyn Fn(&mut Checks) + 'a>;

fn main() -> ExitCode {
    let triple_coarse = || {
        strict_convergence_report(
            &Builtin::Triple.curve(),
            &ExtensionParams::default(),
            &[2, 4, 8, 16, 32],
            &RecoveryOptions { h: 0.05, ..Default::default() },
        )
        .unwrap()
    };
    let triple_fine = || {
        strict_convergence_report(
            &Builtin::Triple.curve(),
            &ExtensionParams::default(),
            &[32],
            &RecoveryOptions { h: 0.02, ..Default::default() },
        )
        .unwrap()
    };
    let coarse = std::cell::OnceCell::new();

    let criteria: Vec<(&str, Criterion)> = vec![
        ("vortex datum", Box::new(vortex)),
        ("triple-point datum", Box::new(triple)),
        ("constant datum", Box::new(constant)),
        ("winding-area exactness", Box::new(winding_exactness)),
        ("invariance suite", Box::new(invariance)),
        ("degree lower bound", Box::new(degree_bound)),
        ("slicing identity", Box::new(slicing)),
        ("strict-convergence harness", Box::new(|c: &mut Checks| strict_convergence(c, coarse.get_or_init(triple_coarse), &triple_fine()))),
        ("rescaling identity", Box::new(|c: &mut Checks| rescaling(c, coarse.get_or_init(triple_coarse)))),
        ("Cantor handling", Box::new(cantor)),
    ];

    let mut all_ok = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut checks = Checks::default();
        run(&mut checks);
        let ok = checks.0.iter().all(|c| c.ok);
        all_ok &= ok;
        let summary: Vec<String> = checks
            .0
            .iter()
            .map(|c| {
                let mark = if c.ok { "ok" } else { "FAILED" };
                if c.detail.is_empty() { format!("{} {mark}", c.name) } else { format!("{} {mark} [{}]", c.name, c.detail) }
            })
            .collect();
        println!(
            "criterion {:>2} {}: {title} ({:.1}s); {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            summary.join("; ")
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
