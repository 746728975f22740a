//! Acceptance suite: one test per acceptance criterion, each printing a single PASS/FAIL line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rumin_slice::chain_file::load_chain;
use rumin_slice::cli;
use rumin_slice::exterior::{blades_of_grade, comass, Covector, Kind, Multivector};
use rumin_slice::heis::{koranyi_dist, HeisParams, Point};
use rumin_slice::parser::parse_form_expr;
use rumin_slice::region::{AffineFn, ScaledAffine};
use rumin_slice::scalar::{q_int, Q};
use rumin_slice::slicing::{
    band_trend, coarea_sweep, default_band_widths, generic_levels, slice, slice_direct, Side,
};
use rumin_slice::verify::{verify_lemmas, Report};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Writes straight to stderr so the line shows up even when the test harness captures output.
fn verdict(criterion: u32, ok: bool, detail: String) {
    let _ = writeln!(std::io::stderr(), "{} criterion {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn lemma_report(n: usize) -> &'static Report {
    static REPORTS: [OnceLock<Report>; 2] = [OnceLock::new(), OnceLock::new()];
    REPORTS[n - 1].get_or_init(|| verify_lemmas(n, 2024, 50).expect("valid n"))
}

/// Each tally must pass with `cases` seeded cases per degree it covers.
fn tallies_pass(names: &[(usize, &str, usize)], cases: usize) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(n, name, degrees) in names {
        let t = lemma_report(n).tally(name).expect("tally present");
        ok &= t.ok() && t.total == cases * degrees;
        parts.push(format!("n={n} {t}"));
    }
    (ok, parts.join("; "))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["rumin-slice"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cube_x() -> (rumin_slice::currents::SimplicialCurrent, AffineFn) {
    let cube = load_chain(&fixture("cube.json")).unwrap();
    let x = AffineFn::coordinate(cube.params(), 0);
    (cube, x)
}

#[test]
fn criterion_01_rumin_complex_exactness() {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in ["1", "2"] {
        let (code, out, _) = run_cli(&["verify-complex", "--n", n, "--seed", "7", "--count", "100"]);
        let headline = out.contains("dc∘dc = 0: 100/100 exact");
        let all_degrees = out.lines().filter(|l| l.contains("at degree")).all(|l| l.starts_with("PASS"));
        ok &= code == 0 && headline && all_degrees;
        parts.push(format!("n={n} exit {code}, headline {}", if headline { "100/100" } else { "missing" }));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 60.0;
    verdict(1, ok, format!("{} in {secs:.1} s", parts.join(", ")));
}

#[test]
fn criterion_02_leibniz_defect_battery() {
    let (ok, detail) = tallies_pass(
        &[
            (2, "Leibniz defect k<n", 2),
            (1, "Leibniz defect k=n", 1),
            (2, "Leibniz defect k=n", 1),
            (1, "Leibniz defect k>n", 2),
            (2, "Leibniz defect k>n", 3),
        ],
        50,
    );
    verdict(2, ok, detail);
}

#[test]
fn criterion_03_lift_product_rule() {
    let (ok, detail) = tallies_pass(&[(1, "script_l product rule", 1), (2, "script_l product rule", 1)], 50);
    verdict(3, ok, detail);
}

#[test]
fn criterion_04_defect_membership() {
    let (ok, detail) = tallies_pass(
        &[
            (1, "defect in J^(n+1), theta-free ω", 1),
            (1, "defect in J^(n+1), ω = θ∧β", 1),
            (2, "defect in J^(n+1), theta-free ω", 1),
            (2, "defect in J^(n+1), ω = θ∧β", 1),
        ],
        50,
    );
    verdict(4, ok, detail);
}

#[test]
fn criterion_05_d_well_defined() {
    let (ok, detail) = tallies_pass(&[(1, "D invariant under I^n", 1), (2, "D invariant under I^n", 1)], 50);
    verdict(5, ok, format!("{detail} (20 ideal elements per case)"));
}

#[test]
fn criterion_06_slicing_exactness() {
    let (cube, x) = cube_x();
    let boundary = cube.boundary().unwrap();
    let levels = generic_levels(&cube, &x, 20);
    let (mut p1, mut p2, mut p3) = (0, 0, 0);
    for t in &levels {
        let plus = slice(&cube, &x, t, Side::Plus).unwrap();
        let minus = slice(&cube, &x, t, Side::Minus).unwrap();
        if plus.slice.same_chain(&minus.slice) && plus.chain_agrees && minus.chain_agrees && plus.residual == 0.0 {
            p1 += 1;
        }
        let on_level = plus.slice.simplices().iter().all(|s| {
            s.vertices.iter().all(|v| x.eval(v) == *t && cube.simplices().iter().any(|c| c.contains(v)))
        });
        if on_level && !plus.slice.is_empty() {
            p2 += 1;
        }
        let of_boundary = slice_direct(&boundary, &x, t, Side::Plus).unwrap();
        if plus.slice.boundary().unwrap().same_chain(&of_boundary.neg()) {
            p3 += 1;
        }
    }
    let total = levels.len();
    verdict(
        6,
        total == 20 && p1 == total && p2 == total && p3 == total,
        format!("P1 {p1}/{total}, P2 {p2}/{total}, P3 {p3}/{total} exact"),
    );
}

#[test]
fn criterion_07_coarea() {
    let (cube, x) = cube_x();
    let equality = coarea_sweep(&cube, &ScaledAffine::exact(x), 0.0, 1.0, 100).unwrap();
    let p = cube.params();
    let diag = ScaledAffine {
        base: AffineFn::new(vec![q_int(1), q_int(1), q_int(0)], q_int(0)),
        scale: std::f64::consts::FRAC_1_SQRT_2,
    };
    assert_eq!(p.n(), 1);
    let strict = coarea_sweep(&cube, &diag, 0.0, std::f64::consts::SQRT_2, 100).unwrap();
    let ok = (equality.ratio - 1.0).abs() <= 1e-3 && strict.ratio <= 1.0 + 1e-2;
    verdict(
        7,
        ok,
        format!("f = x ratio {:.12}, f = (x+y)/√2 ratio {:.12}", equality.ratio, strict.ratio),
    );
}

#[test]
fn criterion_08_band_bound_trend() {
    let (cube, x) = cube_x();
    let hs = default_band_widths();
    let cube_trend = band_trend(&cube, &ScaledAffine::exact(x), 0.3, &hs).unwrap();
    let square = load_chain(&fixture("square_h2.json")).unwrap();
    let x1 = AffineFn::coordinate(square.params(), 0);
    let square_trend = band_trend(&square, &ScaledAffine::exact(x1), 0.3, &hs).unwrap();
    let ok = cube_trend.final_excess() <= 1e-3 && square_trend.final_excess() <= 1e-3;
    let fmt = |t: &rumin_slice::slicing::BandTrend| {
        t.points.iter().map(|p| format!("{:.2e}", p.excess)).collect::<Vec<_>>().join(" ")
    };
    verdict(
        8,
        ok,
        format!("cube excess [{}], H^2 square excess [{}]", fmt(&cube_trend), fmt(&square_trend)),
    );
}

#[test]
fn criterion_09_metric_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut triangle_ok = true;
    let mut symmetric = true;
    for i in 0..10_000 {
        let n = 1 + i % 2;
        let params = HeisParams::new(n).unwrap();
        let mut point = || {
            let c: Vec<f64> = (0..params.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
            Point::from_coords(params, &c).unwrap()
        };
        let (p, q, r, g) = (point(), point(), point(), point());
        let d = koranyi_dist(&p, &q).unwrap();
        let moved = koranyi_dist(&g.mul(&p).unwrap(), &g.mul(&q).unwrap()).unwrap();
        worst = worst.max((moved - d).abs() / d.max(1.0));
        let s: f64 = rng.random_range(0.1..3.0);
        let scaled = koranyi_dist(&p.dilate(&s).unwrap(), &q.dilate(&s).unwrap()).unwrap();
        worst = worst.max((scaled - s * d).abs() / (s * d).max(1.0));
        symmetric &= (koranyi_dist(&q, &p).unwrap() - d).abs() <= 1e-12 * d.max(1.0);
        let via = koranyi_dist(&p, &r).unwrap() + koranyi_dist(&r, &q).unwrap();
        triangle_ok &= d <= via + 1e-12 * via.max(1.0);
    }
    let vertical = Point::from_coords(HeisParams::new(1).unwrap(), &[q_int(0), q_int(0), q_int(1)]).unwrap();
    let pow4_ok = vertical.koranyi_norm_pow4() == q_int(16);
    verdict(
        9,
        worst <= 1e-12 && triangle_ok && symmetric && pow4_ok,
        format!(
            "10^4 samples: worst invariance/homogeneity error {worst:.2e}, symmetric {symmetric}, triangle {triangle_ok}, ‖(0,0,1)‖⁴ = 16 {pow4_ok}"
        ),
    );
}

fn random_covector(params: HeisParams, k: usize, rng: &mut ChaCha8Rng) -> Covector<f64> {
    let mut w = Multivector::<f64>::zero(params, k, Kind::Covector);
    for b in blades_of_grade(params.dim(), k) {
        w.add_term(b, rng.sample(StandardNormal));
    }
    w
}

#[test]
fn criterion_10_algebra_suite() {
    let mut star_ok = true;
    for n in 1..=2 {
        let params = HeisParams::new(n).unwrap();
        for k in 0..=params.dim() {
            for b in blades_of_grade(params.dim(), k) {
                let mut e = Multivector::<Q>::zero(params, k, Kind::Covector);
                e.add_term(b, q_int(1));
                star_ok &= e.hodge_star().hodge_star() == e;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut per_degree = Vec::new();
    for n in 1..=2usize {
        let params = HeisParams::new(n).unwrap();
        let mut sum = Multivector::<f64>::zero(params, 1, Kind::Covector);
        for j in 0..2 * n {
            sum.add_term(1 << j, 1.0);
        }
        for k in (0..params.dim()).filter(|&k| k != n) {
            let mut degree_worst: f64 = 0.0;
            for _ in 0..200 {
                let w = random_covector(params, k, &mut rng);
                let c = comass(&w, 8).unwrap();
                let w = w.scale(&(1.0 / c));
                let value = comass(&sum.wedge(&w).unwrap(), 8).unwrap();
                degree_worst = degree_worst.max(value);
            }
            per_degree.push(format!("n={n} k={k}: {degree_worst:.4}"));
            worst = worst.max(degree_worst);
        }
    }
    verdict(
        10,
        star_ok && worst <= 1.0 + 1e-6,
        format!(
            "** = id on all blades {star_ok}; max comass of Σ dw_j ∧ ω over comass-1 ω: {} (bound 1 + 1e-6)",
            per_degree.join(", ")
        ),
    );
}

#[test]
fn criterion_11_middle_degree_scope_guard() {
    let chain = fixture("vertical_square.json");
    let chain = chain.to_str().unwrap();
    let exe = env!("CARGO_BIN_EXE_rumin-slice");
    let coarea = Command::new(exe)
        .args(["coarea", "--chain", chain, "--f", "x1", "--a", "0", "--b", "1", "--grid", "10"])
        .output()
        .unwrap();
    let report = Command::new(exe).args(["report", "--chain", chain, "--f", "x1"]).output().unwrap();
    let coarea_err = String::from_utf8_lossy(&coarea.stderr);
    let report_out = String::from_utf8_lossy(&report.stdout);
    let report_err = String::from_utf8_lossy(&report.stderr);
    let ok = coarea.status.code() == Some(2)
        && coarea_err.contains("scope error")
        && coarea_err.contains("middle-degree case is open")
        && report.status.code() == Some(2)
        && report_out.contains("P4 SCOPE")
        && report_err.contains("scope error");
    verdict(
        11,
        ok,
        format!(
            "coarea exit {:?}, report exit {:?}: {}",
            coarea.status.code(),
            report.status.code(),
            coarea_err.trim()
        ),
    );
}

#[test]
fn criterion_12_parser_and_io() {
    let corpus = std::fs::read_to_string(fixture("forms.txt")).unwrap();
    let (mut passed, mut total) = (0, 0);
    for line in corpus.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (n, expr) = line.split_once(':').unwrap();
        let params = HeisParams::new(n.trim().parse().unwrap()).unwrap();
        total += 1;
        let form = parse_form_expr(expr, params).unwrap();
        if parse_form_expr(&form.to_string(), params).unwrap() == form {
            passed += 1;
        }
    }
    let cube = load_chain(&fixture("cube.json")).unwrap();
    let mass_ok = cube.mass_exact() == Some(q_int(1));

    let cube_path = fixture("cube.json");
    let square_path = fixture("square_h2.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify-complex", "--n", "1", "--seed", "3", "--count", "10"],
        vec!["verify-lemmas", "--n", "2", "--seed", "3", "--count", "3"],
        vec!["coarea", "--chain", cube_path.to_str().unwrap(), "--f", "x1", "--a", "0", "--b", "1", "--grid", "20"],
        vec!["report", "--chain", square_path.to_str().unwrap(), "--f", "x1 + y2/2"],
    ];
    let mut identical = true;
    for args in &runs {
        let first = run_cli(args);
        let second = run_cli(args);
        identical &= first == second && first.0 == 0;
    }
    verdict(
        12,
        passed == 50 && total == 50 && mass_ok && identical,
        format!(
            "round trip {passed}/{total}, cube mass exactly 1: {mass_ok}, repeated reports byte-identical: {identical}"
        ),
    );
}
