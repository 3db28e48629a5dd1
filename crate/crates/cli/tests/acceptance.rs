//! Acceptance criteria 1-10, one test each. Every test prints a single
//! `PASS criterion N` or `FAIL criterion N` line (run with `--nocapture` to
//! see them) and then asserts every sub-check at its stated tolerance.

use std::process::Command;
use std::time::{Duration, Instant};

use blocking_curves::census::{
    blocking_census, brute_force_count, brute_force_density, line_union_table, nb_from_census,
    nb_from_table, nb_inclusion_exclusion, nb_ns_from_census, nb_ns_from_table,
    point_count_histogram_exact, CurvePredicate, EngineOptions, FrequencyTable,
};
use blocking_curves::formulas::{
    lambda_q, nu_ratio, skew_expectation_asymptotic, skew_expectation_exact,
    smooth_density_main_term, BoundsReport,
};
use blocking_curves::gf::field_of_order;
use blocking_curves::interp::{evaluation_matrix, rank_mod_q, run_trials};
use blocking_curves::pg2::{baer_subplanes, Plane};
use blocking_curves::poly::HomogPoly;
use blocking_curves::rational::ExactRational;
use blocking_curves::reference::{
    line_union_rows, nb_published_rational, CONIC_BLOCKING_Q2_PUBLISHED,
};
use blocking_curves::smooth::{is_smooth_exact, is_smooth_oracle};
use blocking_curves::stats::{
    chi_square_gof, mc_blocking_proportion, mc_k_point_lines, mc_line_intersection, mc_moments,
    mc_point_count, mc_skew_lines, mc_smooth, mc_unipoly_roots, sample_rng, McConfig,
};
use rand::Rng;
use serde::Serialize;

const MC_BUDGET: Duration = Duration::from_secs(300);

/// Sub-check results for one criterion.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, got: T) {
        let ok = expected == got;
        let name = if ok {
            name.to_string()
        } else {
            format!("{name}: expected {expected:?}, got {got:?}")
        };
        self.check(name, ok);
    }

    fn finish(self, n: u32, title: &str) {
        let failed: Vec<&str> = self
            .0
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(s, _)| s.as_str())
            .collect();
        if failed.is_empty() {
            println!("PASS criterion {n}: {title} ({} checks)", self.0.len());
        } else {
            println!("FAIL criterion {n}: {title}; failed: {}", failed.join("; "));
        }
        assert!(failed.is_empty(), "criterion {n} failed: {failed:?}");
    }
}

fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d)
}

fn single() -> EngineOptions {
    EngineOptions::with_threads(1)
}

fn bcurves(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bcurves"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn criterion_01_line_union_tables() {
    let mut c = Checks::default();
    for q in [2u32, 3, 4] {
        let start = Instant::now();
        let (code, csv) = bcurves(&[
            "table",
            "--q",
            &q.to_string(),
            "--format",
            "csv",
            "--threads",
            "1",
        ]);
        let elapsed = start.elapsed();
        c.eq(&format!("q={q} exit code"), 0, code);
        let rows: Vec<(u32, u32, u64)> = FrequencyTable::from_csv(q, &csv)
            .map(|t| {
                t.rows()
                    .iter()
                    .map(|r| (r.k, r.points, r.frequency))
                    .collect()
            })
            .unwrap_or_default();
        c.eq(
            &format!("q={q} rows"),
            line_union_rows(q).unwrap().to_vec(),
            rows,
        );
        if q == 4 {
            c.check(
                format!("q=4 single-threaded in {elapsed:?} < 60 s"),
                elapsed < Duration::from_secs(60),
            );
        }
    }
    c.finish(1, "line-union tables bit-exact");
}

#[test]
fn criterion_02_exact_constants() {
    let mut c = Checks::default();
    let expected = [(2u64, rat(1, 2)), (3, rat(1336688, 1594323))];
    let big4: ExactRational = "2112952233969/2199023255552".parse().unwrap();
    for (q, nb) in expected.into_iter().chain([(4, big4)]) {
        let f = field_of_order(q).unwrap();
        let ie = nb_inclusion_exclusion(&f, &single()).unwrap();
        let start = Instant::now();
        let census = blocking_census(&f, &single()).unwrap();
        let elapsed = start.elapsed();
        let from_census = nb_from_census(&census);
        c.eq(&format!("q={q} inclusion-exclusion"), &nb, &ie);
        c.eq(&format!("q={q} census"), &nb, &from_census);
        c.eq(&format!("q={q} engines agree"), &ie, &from_census);
        if q == 4 {
            c.check(
                format!("q=4 census in {elapsed:?} < 120 s"),
                elapsed < Duration::from_secs(120),
            );
        }
    }
    c.finish(2, "exact nb(2), nb(3), nb(4) from both engines");
}

#[test]
fn criterion_03_brute_force_ground_truth() {
    let mut c = Checks::default();
    let f2 = field_of_order(2).unwrap();
    let opts = single();
    let (hits, total) = brute_force_count(&f2, 3, CurvePredicate::Blocking, &opts).unwrap();
    c.eq("cubics enumerated", 1024, total);
    c.eq("cubics blocking", 512, hits);
    let hist = point_count_histogram_exact(&f2, 3, &opts).unwrap();
    let binom = [1u64, 7, 21, 35, 35, 21, 7, 1];
    for (t, b) in binom.iter().enumerate() {
        c.eq(
            &format!("cubics with {t} points"),
            8 * b,
            hist.get(&(t as u32)).copied().unwrap_or(0),
        );
    }
    for line in 0..7 {
        let p = brute_force_density(&f2, 3, CurvePredicate::SkewTo(line), &opts).unwrap();
        c.eq(&format!("line {line} skew proportion"), rat(1, 8), p);
    }
    let conics = brute_force_density(&f2, 2, CurvePredicate::Blocking, &opts).unwrap();
    let (n, d) = CONIC_BLOCKING_Q2_PUBLISHED;
    c.eq("conics blocking", rat(n as i64, d as i64), conics);
    c.finish(3, "brute force over F_2");
}

#[test]
fn criterion_04_bounds_sandwich() {
    let mut c = Checks::default();
    for q in [2u32, 3, 4] {
        let b = BoundsReport::new(q, nb_published_rational(q));
        c.check(
            format!("q={q}: {} <= {:?} <= {}", b.lower, b.exact, b.upper),
            b.holds(),
        );
    }
    let b2 = BoundsReport::new(2, None);
    c.eq("q=2 lower", rat(29, 64), b2.lower);
    c.eq("q=2 upper", rat(35, 64), b2.upper);
    let l11 = lambda_q(11, &rat(10, 11)).unwrap();
    c.check(
        format!("lambda_11(10/11) = {} > 0.994", l11.to_decimal(8)),
        l11 > rat(994, 1000),
    );
    let qs = [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16];
    let lower: Vec<ExactRational> = qs
        .iter()
        .map(|&q| lambda_q(q, &rat(q as i64 - 1, q as i64)).unwrap())
        .collect();
    c.check(
        "lambda_q(1-1/q) strictly increasing",
        lower.windows(2).all(|w| w[0] < w[1]),
    );
    c.finish(4, "two-sided bound on nb(q)");
}

#[test]
fn criterion_05_census_minima() {
    let mut c = Checks::default();
    let f3 = field_of_order(3).unwrap();
    let f4 = field_of_order(4).unwrap();
    c.eq(
        "q=3 minimum nontrivial size",
        Some(6),
        blocking_census(&f3, &single())
            .unwrap()
            .min_nontrivial_size(),
    );
    let census = blocking_census(&f4, &single()).unwrap();
    c.eq(
        "q=4 minimum nontrivial size",
        Some(7),
        census.min_nontrivial_size(),
    );
    c.eq(
        "q=4 size-7 nontrivial count",
        Some(&360),
        census.nontrivial_by_size.get(&7),
    );
    let mut baer: Vec<u64> = baer_subplanes(&f4)
        .unwrap()
        .iter()
        .map(|s| s.as_mask().unwrap())
        .collect();
    baer.sort_unstable();
    c.eq("Baer subplanes enumerated", 360, baer.len());
    c.check(
        "size-7 sets are exactly the Baer subplanes",
        census.smallest_nontrivial == baer,
    );
    c.finish(5, "blocking-set census against finite geometry");
}

#[test]
fn criterion_06_independence_of_point_conditions() {
    let mut c = Checks::default();
    let s = run_trials(&[2, 3, 4, 5, 7, 8, 9], 10_000, 20, 6, 0).unwrap();
    c.eq("trials run", 10_000, s.trials);
    c.check(
        format!("{} of {} trials full rank", s.independent, s.trials),
        s.independent == s.trials,
    );
    c.check("rank ladders valid", s.ladder_ok == s.trials);

    let plane = Plane::new(&field_of_order(3).unwrap());
    let line: Vec<usize> = plane.line(0).incidence.iter().collect();
    c.eq("four points on a line", 4, line.len());
    c.eq(
        "collinear control rank on conics",
        3,
        rank_mod_q(&evaluation_matrix(&plane, &line, 2).unwrap()),
    );

    for q in [2u64, 3, 4, 5] {
        let f = field_of_order(q).unwrap();
        let plane = Plane::new(&f);
        let qq = q as u32;
        for d in [2 * qq - 1, 2 * qq, 3 * qq] {
            let bad = (0..plane.size())
                .filter(|&t| {
                    let h = HomogPoly::homma_kim(&f, d, plane.point(t)).unwrap();
                    let zeros = h.point_set(&plane);
                    zeros.len() != (qq * qq + qq) as usize || zeros.contains(t)
                })
                .count();
            c.eq(
                &format!("q={q} d={d} targets off by more than the target"),
                0,
                bad,
            );
        }
    }
    c.finish(6, "point conditions are independent");
}

fn timed<T>(c: &mut Checks, name: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    c.check(
        format!("{name} in {elapsed:?} < 5 min"),
        elapsed < MC_BUDGET,
    );
    out
}

#[test]
fn criterion_07_monte_carlo_suite() {
    let mut c = Checks::default();

    let p = timed(&mut c, "blocking q=3 d=5", || {
        mc_blocking_proportion(&McConfig::new(3, 5, 100_000, 7).with_threads(4)).unwrap()
    });
    let target = 257635.0 / 1594323.0;
    c.check(
        format!(
            "blocking {:.5} ± {:.5} vs {target:.6}",
            p.estimate, p.stderr
        ),
        (p.estimate - target).abs() <= 3.0 * p.stderr,
    );

    let line = timed(&mut c, "line q=16 d=16", || {
        mc_line_intersection(&McConfig::new(16, 16, 100_000, 7).with_threads(4), 0).unwrap()
    });
    c.check(
        format!(
            "line chi-square {:.3} vs {:.3}",
            line.verdict.statistic, line.verdict.threshold
        ),
        line.verdict.pass,
    );

    let roots = timed(&mut c, "roots q=25", || {
        mc_unipoly_roots(25, 100_000, 7, 4).unwrap()
    });
    c.check(
        format!(
            "roots chi-square {:.3} vs {:.3}",
            roots.verdict.statistic, roots.verdict.threshold
        ),
        roots.verdict.pass,
    );

    let skew = timed(&mut c, "skew q=9 d=9", || {
        mc_skew_lines(&McConfig::new(9, 9, 10_000, 7).with_threads(4)).unwrap()
    });
    let target = 91.0 * (8.0f64 / 9.0).powi(10);
    c.check(
        format!(
            "skew mean {:.4} ± {:.4} vs {target:.4}",
            skew.mean, skew.stderr
        ),
        (skew.mean - target).abs() <= 3.0 * skew.stderr,
    );

    for q in [9u32, 16, 25, 49] {
        let exact = skew_expectation_exact(q, q).unwrap().to_f64();
        let gap = (exact - skew_expectation_asymptotic(q)).abs();
        c.check(
            format!("q={q} |exact - asymptotic| = {gap:.4} < 1/q"),
            gap < 1.0 / q as f64,
        );
    }
    c.finish(7, "Monte Carlo distributional suite");
}

#[test]
fn criterion_08_smoothness() {
    let mut c = Checks::default();
    let f2 = field_of_order(2).unwrap();
    let agree = |f: &HomogPoly, i: u64| -> bool {
        let exact = is_smooth_exact(f, &mut sample_rng(8, i));
        let depth = f.degree().saturating_sub(1).pow(2).max(1);
        match (exact, is_smooth_oracle(f, depth)) {
            (Ok(a), Ok(b)) => a.smooth == b.smooth,
            (Err(a), Err(b)) => a.to_string() == b.to_string(),
            _ => false,
        }
    };
    let conics = (0u64..64)
        .filter(|&code| {
            let coeffs = (0..6)
                .map(|b| blocking_curves::gf::Fe(((code >> b) & 1) as u32))
                .collect();
            agree(&HomogPoly::new(&f2, 2, coeffs).unwrap(), code)
        })
        .count();
    c.eq("conics over F_2 agreeing", 64, conics);

    let fields = [f2.clone(), field_of_order(3).unwrap()];
    let mut disagreements = 0;
    for i in 0..500u64 {
        let mut rng = sample_rng(80, i);
        let spec = &fields[rng.random_range(0..2)];
        let d = rng.random_range(1..=3);
        let f = loop {
            let f = HomogPoly::random(spec, d, &mut rng);
            if !f.is_zero() {
                break f;
            }
        };
        disagreements += !agree(&f, 1000 + i) as u32;
    }
    c.eq("random curves disagreeing", 0, disagreements);

    let s = mc_smooth(&McConfig::new(4, 9, 10_000, 8).with_threads(4)).unwrap();
    let target = smooth_density_main_term(4);
    c.eq("main term at q=4", rat(2835, 4096), target.clone());
    c.check(
        format!(
            "q=4 d=9 smooth density {:.4} within 0.02 of {:.4}",
            s.smooth.estimate,
            target.to_f64()
        ),
        (s.smooth.estimate - target.to_f64()).abs() <= 0.02,
    );
    c.finish(8, "smoothness test against the oracle");
}

#[test]
fn criterion_09_property_substitutes() {
    let mut c = Checks::default();
    for q in [2u32, 3, 4] {
        let f = field_of_order(q as u64).unwrap();
        let table = line_union_table(&f, &single()).unwrap();
        let census = blocking_census(&f, &single()).unwrap();
        c.eq(
            &format!("q={q} exact nb"),
            nb_published_rational(q),
            Some(nb_from_table(&table)),
        );
        let nb = nb_from_table(&table);
        let ns = nb_ns_from_table(&table);
        c.eq(
            &format!("q={q} nb_ns routes"),
            &ns,
            &nb_ns_from_census(&census),
        );
        let one = ExactRational::one();
        let ratio = (&one - &ns) / (&one - &nb);
        c.check(
            format!(
                "q={q} (1 - nb_ns)/(1 - nb) = {} in (0, 1)",
                ratio.to_decimal(6)
            ),
            ratio > ExactRational::zero() && ratio < one,
        );
        let n = q * q + q + 1;
        let nus: Vec<ExactRational> = (0..=n).map(|t| nu_ratio(q, t).unwrap()).collect();
        c.check(
            format!("q={q} nu ratio decreasing in t"),
            nus.windows(2).all(|w| w[0] > w[1]),
        );
    }

    // Negative controls: each test must reject when its hypothesis fails.
    let f2 = field_of_order(2).unwrap();
    let conics = brute_force_density(&f2, 2, CurvePredicate::Blocking, &single()).unwrap();
    c.check(
        "conics over F_2 do not reach the cubic density 1/2",
        conics != rat(1, 2),
    );
    let plane = Plane::new(&field_of_order(3).unwrap());
    let line: Vec<usize> = plane.line(0).incidence.iter().collect();
    c.check(
        "collinear points lose rank on conics",
        rank_mod_q(&evaluation_matrix(&plane, &line, 2).unwrap()) < line.len(),
    );
    let lines = mc_point_count(&McConfig::new(3, 1, 20_000, 9).with_threads(4)).unwrap();
    c.check(
        format!(
            "lines over F_3 reject the point-count law ({:.1})",
            lines.verdict.statistic
        ),
        !lines.law_applies && !lines.verdict.pass,
    );
    let uniform: Vec<f64> = vec![1.0 / 18.0; 18];
    let roots = mc_unipoly_roots(16, 20_000, 9, 4).unwrap();
    c.check(
        "root counts reject a uniform law",
        !chi_square_gof(&roots.histogram, &uniform).pass,
    );
    c.finish(9, "finite-field substitutes for the limit statements");
}

fn same_across_threads<T: Serialize>(c: &mut Checks, name: &str, f: impl Fn(usize) -> T) {
    let outs: Vec<String> = [1usize, 2, 8]
        .iter()
        .map(|&t| serde_json::to_string(&f(t)).unwrap())
        .collect();
    c.check(
        format!("{name} identical for 1, 2, 8 threads"),
        outs.windows(2).all(|w| w[0] == w[1]),
    );
}

#[test]
fn criterion_10_determinism() {
    let mut c = Checks::default();
    for q in [2u64, 3, 4] {
        let f = field_of_order(q).unwrap();
        let e = |t| EngineOptions::with_threads(t);
        same_across_threads(&mut c, &format!("q={q} table"), |t| {
            line_union_table(&f, &e(t)).unwrap()
        });
        same_across_threads(&mut c, &format!("q={q} census"), |t| {
            blocking_census(&f, &e(t)).unwrap()
        });
        same_across_threads(&mut c, &format!("q={q} inclusion-exclusion"), |t| {
            nb_inclusion_exclusion(&f, &e(t)).unwrap()
        });
    }
    let f3 = field_of_order(3).unwrap();
    same_across_threads(&mut c, "brute-force histogram", |t| {
        point_count_histogram_exact(&f3, 3, &EngineOptions::with_threads(t)).unwrap()
    });

    let cfg = |q, d, t| McConfig::new(q, d, 3_000, 10).with_threads(t);
    same_across_threads(&mut c, "mc blocking", |t| {
        mc_blocking_proportion(&cfg(3, 5, t)).unwrap()
    });
    same_across_threads(&mut c, "mc point count", |t| {
        mc_point_count(&cfg(3, 5, t)).unwrap()
    });
    same_across_threads(&mut c, "mc line", |t| {
        mc_line_intersection(&cfg(5, 5, t), 3).unwrap()
    });
    same_across_threads(&mut c, "mc skew", |t| mc_skew_lines(&cfg(4, 4, t)).unwrap());
    same_across_threads(&mut c, "mc k-point", |t| {
        mc_k_point_lines(&cfg(4, 4, t), 1).unwrap()
    });
    same_across_threads(&mut c, "mc smooth", |t| mc_smooth(&cfg(3, 4, t)).unwrap());
    same_across_threads(&mut c, "mc roots", |t| {
        mc_unipoly_roots(9, 3_000, 10, t).unwrap()
    });
    same_across_threads(&mut c, "mc moments", |t| {
        mc_moments(&cfg(3, 4, t), 4).unwrap()
    });
    same_across_threads(&mut c, "interp trials", |t| {
        run_trials(&[2, 3, 4], 500, 12, 10, t).unwrap()
    });

    let outs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|t| {
            bcurves(&[
                "mc",
                "--kind",
                "skew",
                "--q",
                "3",
                "--d",
                "3",
                "--samples",
                "2000",
                "--threads",
                t,
                "--format",
                "json",
            ])
            .1
        })
        .collect();
    c.check(
        "cli mc output identical for 1, 2, 8 threads",
        outs.windows(2).all(|w| w[0] == w[1]),
    );
    c.finish(10, "determinism across thread counts");
}
