//! End-to-end checks of the `entkit` binary: exit codes, determinism and figure round-trips.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::PathBuf;
use std::process::{Command, Output};

use entkit::channel::{self, closed_form};
use entkit::cloning;
use entkit::protocols;
use entkit::statezoo::MixedFamily;

fn entkit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_entkit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("ENTKIT_THREADS", t),
        None => cmd.env_remove("ENTKIT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = entkit(args, None);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("entkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn measure_prints_twelve_significant_digits() {
    assert_eq!(stdout(&["measure", "--state", "werner:F=0.75", "--kind", "concurrence"]), "0.5\n");
    assert_eq!(stdout(&["measure", "--state", "bell:1", "--kind", "negativity"]), "1\n");
    assert_eq!(stdout(&["measure", "--state", "nmems:p=0.3", "--kind", "concurrence"]), "0\n");
    assert_eq!(stdout(&["measure", "--state", "werner:F=0.6", "--kind", "entropy_linear"]), "0.782222222222\n");
    let eof = stdout(&["measure", "--state", "mjwk:C=0.5", "--kind", "eof"]);
    let expected = entkit::measures::eof_from_concurrence(0.5);
    assert!((eof.trim().parse::<f64>().unwrap() - expected).abs() < 1e-11);
}

#[test]
fn measure_reads_inline_matrices() {
    let path = scratch("singlet.json");
    let h = 0.5;
    let rows = serde_json::json!([
        [[0, 0], [0, 0], [0, 0], [0, 0]],
        [[0, 0], [h, 0], [-h, 0], [0, 0]],
        [[0, 0], [-h, 0], [h, 0], [0, 0]],
        [[0, 0], [0, 0], [0, 0], [0, 0]]
    ]);
    std::fs::write(&path, rows.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["measure", "--matrix", p, "--kind", "concurrence"]), "1\n");
    assert_eq!(stdout(&["measure", "--matrix", p, "--dims", "2,2", "--kind", "entropy_vn"]), "0\n");
}

#[test]
fn exit_codes_follow_the_contract() {
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], 0),
        (&["measure", "--state", "werner:F=0.1", "--kind", "concurrence"], 3),
        (&["measure", "--state", "werner:F=x", "--kind", "concurrence"], 2),
        (&["measure", "--state", "werner:F=0.5", "--kind", "purity"], 2),
        (&["measure", "--state", "ghz3", "--kind", "concurrence"], 3),
        (&["measure", "--matrix", "/nonexistent/entkit.json", "--kind", "concurrence"], 2),
        (&["figure", "6.1"], 2),
        (&["figure", "3.1", "--steps", "1"], 2),
        (&["protocol", "cdc", "--family", "nope", "--theta", "0.5"], 2),
        (&["protocol", "cdc", "--family", "ghz"], 2),
        (&["protocol", "cdc", "--family", "qutrit_ghz", "--theta", "1.0471975512"], 3),
        (&["protocol", "secret-share", "--c2", "0.3"], 3),
        (&["protocol", "secret-share", "--c2", "0.6", "--alice", "sideways"], 2),
        (&["bogus"], 2),
    ];
    for (args, code) in cases {
        let out = entkit(args, None);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if *code != 0 {
            assert!(!out.stderr.is_empty(), "{args:?} should explain itself on stderr");
        }
    }
    assert_eq!(entkit(&["figure", "3.1", "--steps", "3"], Some("zero")).status.code(), Some(2));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let runs: &[&[&str]] = &[
        &["figure", "4.3", "--steps", "40"],
        &["figure", "5.6", "--steps", "25"],
        &[
            "protocol",
            "cdc",
            "--family",
            "ghz4",
            "--theta",
            "0.6",
            "--epsilon",
            "0.9",
            "--montecarlo",
            "50000",
            "--seed",
            "11",
        ],
        &["protocol", "secret-share", "--c2", "0.6667", "--montecarlo", "30000", "--seed", "3"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut files = Vec::new();
        for (t, threads) in [Some("1"), Some("4"), None].into_iter().enumerate() {
            let path = scratch(&format!("det-{k}-{t}"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_str().unwrap().to_string();
            full.extend(["--out", &p]);
            let out = entkit(&full, threads);
            assert_eq!(out.status.code(), Some(0), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
            assert!(out.stdout.is_empty());
            files.push(std::fs::read(&path).unwrap());
        }
        assert!(files.windows(2).all(|w| w[0] == w[1]), "{args:?} differs across runs");
    }
}

#[test]
fn protocol_transcripts() {
    let ghz = json(&["protocol", "cdc", "--family", "ghz", "--theta", "0.7854"]);
    assert!((ghz["run"]["bits_transmitted_avg"].as_f64().unwrap() - 2.0).abs() < 1e-4);
    assert!((ghz["run"]["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert!((ghz["average"]["success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-4);

    let w3 = json(&["protocol", "cdc", "--family", "w3", "--theta", "0.7854"]);
    assert_eq!(w3["run"]["maximally_entangled"], false);
    let c = w3["run"]["shared_concurrence"].as_f64().unwrap();
    // The angle passed on the command line, not π/4 itself.
    let theta: f64 = "0.7854".parse().unwrap();
    assert!((c - protocols::w3_shared_concurrence(theta)).abs() < 1e-12);

    let ss = json(&["protocol", "secret-share", "--c2", "0.6667"]);
    let q = 4.0 * 0.6667 * (1.0 - 0.6667) / 2.0;
    assert!((ss["run"]["success_probability"].as_f64().unwrap() - q).abs() < 1e-12);
    assert!((q - 4.0 / 9.0).abs() < 1e-4);

    let mc = json(&[
        "protocol",
        "cdc",
        "--family",
        "pati:l=0.5",
        "--theta",
        "1.1071487177940904",
        "--montecarlo",
        "200000",
        "--seed",
        "5",
    ]);
    let exact = mc["montecarlo"]["exact_success"].as_f64().unwrap();
    let empirical = mc["montecarlo"]["empirical_success"].as_f64().unwrap();
    assert!((exact - 0.4).abs() < 1e-12);
    // Five standard deviations of a binomial proportion at p = 0.4, n = 2·10⁵.
    assert!((empirical - exact).abs() < 5.0 * (0.24f64 / 2e5).sqrt());

    let wit = json(&["protocol", "secret-share", "--c", "0.9", "--lambda1", "0.5"]);
    assert_eq!(wit["witness"]["entangled"], true);

    let four = json(&[
        "protocol",
        "cdc",
        "--family",
        "w4",
        "--theta",
        "0.7853981633974483",
        "--epsilon",
        "0.7853981633974483",
        "--paul",
        "0",
    ]);
    assert!((four["run"]["amplitude_concurrence"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

/// Parsed figure CSV: header plus numeric rows.
fn figure(id: &str, steps: usize) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = stdout(&["figure", id, "--steps", &steps.to_string()]);
    assert!(!text.contains('\r'), "{id}: LF line endings only");
    assert!(text.ends_with('\n'));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    let rows: Vec<Vec<f64>> =
        rdr.records().map(|r| r.unwrap().iter().map(|x| x.parse::<f64>().unwrap()).collect()).collect();
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = field.split(['e', 'E']).next().unwrap();
        let significant = mantissa.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count();
        assert!(significant <= 12, "{id}: '{field}' has more than 12 significant digits");
    }
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {header:?}"))
}

/// Tolerance for values that went through 12-significant-digit printing.
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + b.abs())
}

#[test]
fn channel_figures_round_trip_against_closed_forms() {
    let (h, rows) = figure("3.1", 101);
    assert_eq!(h, ["p", "concurrence", "N", "M"]);
    let mut sign_changes = (None, None);
    for w in rows.windows(2) {
        if w[0][1] > 1e-12 && w[1][1] <= 1e-12 {
            sign_changes.0 = Some(w[1][0]);
        }
        if w[0][2] > 1.0 + 1e-9 && w[1][2] <= 1.0 + 1e-9 {
            sign_changes.1 = Some(w[1][0]);
        }
    }
    assert_eq!(sign_changes, (Some(0.3), Some(0.25)));
    for r in &rows {
        let cf = closed_form(&MixedFamily::Nmems { p: r[0] });
        assert!(close(r[1], cf.concurrence) && close(r[2], cf.n_value) && close(r[3], cf.m_value), "{r:?}");
        assert!(r[3] <= 1.0 + 1e-10);
    }

    let (h, rows) = figure("3.2", 51);
    assert_eq!(h, ["C", "f_werner", "f_mjwk"]);
    for r in &rows {
        assert!(close(r[1], (2.0 + r[0]) / 3.0));
        assert!(close(r[2], closed_form(&MixedFamily::Mjwk { c: r[0] }).fidelity_opt));
        assert!(r[1] >= r[2] - 1e-12);
    }

    let (h, rows) = figure("3.3", 51);
    let (mw, mm, fm) = (col(&h, "M_werner"), col(&h, "M_mjwk"), col(&h, "f_mjwk"));
    for r in &rows {
        let w = closed_form(&MixedFamily::Werner { f: (1.0 + r[0]) / 2.0 });
        let m = closed_form(&MixedFamily::Mjwk { c: r[0] });
        assert!(close(r[mw], w.m_value) && close(r[mm], m.m_value) && close(r[fm], m.fidelity_opt));
    }

    let (h, rows) = figure("3.4", 61);
    assert_eq!(h, ["M", "F_werner", "f_werner", "gamma_wei", "f_wei"]);
    for r in &rows {
        assert!(close(r[2], (1.0 + (r[0] / 2.0).sqrt()) / 2.0));
        let wei = entkit::cli::wei_sweep_member(r[3]);
        assert!(close(r[4], closed_form(&wei).fidelity_opt));
        assert!(close(2.0 * r[3] * r[3], r[0]));
        assert!(r[2] >= r[4] - 1e-12, "Werner is at least as good at equal M: {r:?}");
    }

    let (h, rows) = figure("3.5", 51);
    let (sw, sm) = (col(&h, "SL_werner"), col(&h, "SL_mjwk"));
    for r in &rows {
        let w = closed_form(&MixedFamily::Werner { f: (1.0 + r[0]) / 2.0 });
        let m = closed_form(&MixedFamily::Mjwk { c: r[0] });
        assert!(close(r[sw], w.linear_entropy) && close(r[sm], m.linear_entropy));
        assert!(close(r[col(&h, "f_mjwk")], m.fidelity_from_linear_entropy.unwrap()), "{r:?}");
    }
}

#[test]
fn cloning_figures_round_trip_against_the_library() {
    let (h, rows) = figure("4.1", 50);
    assert_eq!(h, ["d", "entropy_gap"]);
    assert!((rows.last().unwrap()[0] - 0.5).abs() < 1e-15 && rows[0][0] > 0.0);
    for r in &rows {
        let joint = cloning::qutrit_cloned_pair(r[0]).unwrap().joint;
        assert!(close(r[1], cloning::dense_coding_entropy_gap(&joint).unwrap()));
    }

    let lo = cloning::non_optimal_filter_lower_bound();
    let (h, rows) = figure("4.2", 20);
    assert_eq!(h, ["d", "singlet_fraction", "fidelity"]);
    for r in &rows {
        assert!(r[0] > lo && r[0] <= 0.5);
        assert!(close(r[2], channel::fidelity_from_singlet_fraction(r[1], 3)));
    }

    let (h, rows) = figure("4.3", 20);
    assert_eq!(h, ["d", "chi_undistilled", "chi_distilled"]);
    for r in &rows {
        let joint = cloning::qutrit_cloned_pair(r[0]).unwrap().joint;
        assert!(close(r[1], cloning::dense_coding_capacity(&joint).unwrap()));
    }
}

#[test]
fn protocol_figures_round_trip_against_closed_forms() {
    let (h, rows) = figure("5.1", 81);
    assert_eq!(h, ["theta", "bits_ghz_class_1", "bits_ghz_class_2"]);
    for r in &rows {
        let curve = if r[0] <= FRAC_PI_4 { 1.0 + 2.0 * r[0].sin().powi(2) } else { 1.0 + 2.0 * r[0].cos().powi(2) };
        assert!(close(r[1], curve) && close(r[2], curve), "{r:?}");
    }

    let (_, rows) = figure("5.2", 40);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    for r in &rows {
        assert!(close(r[0], (1.0 / r[1]).atan()));
        assert!(close(r[2], 2.0 * r[1] * r[1] / (1.0 + r[1] * r[1])));
    }

    let (_, rows) = figure("5.3", 41);
    for r in &rows {
        assert!(r[0] >= FRAC_PI_4 - 1e-12 && r[0] <= FRAC_PI_2 + 1e-12);
        assert!((r[1] - (2.0 * r[0]).sin().abs()).abs() < 1e-10);
    }

    let (h, rows) = figure("5.4", 21);
    assert_eq!(h, ["theta", "epsilon", "C1"]);
    assert_eq!(rows.len(), 21 * 21);
    for r in &rows {
        // Where Alice's filter is a valid unitary the closed form applies directly; past that
        // boundary she concentrates onto the other amplitude, so the smaller Schmidt weight wins.
        if r[0].tan() * r[1].tan() <= 1.0 {
            assert!((r[2] - protocols::ghz4_amplitude_concurrence(r[0], r[1])).abs() < 1e-10, "{r:?}");
        }
        let small = (r[0].sin() * r[1].sin()).min(r[0].cos() * r[1].cos());
        assert!((r[2] - 2.0 * small * small).abs() < 1e-10, "{r:?}");
    }

    let (_, rows) = figure("5.5", 41);
    for r in &rows {
        assert!((r[1] - protocols::w3_shared_concurrence(r[0])).abs() < 1e-10, "{r:?}");
        assert!(r[1] < 1.0);
    }

    let (_, rows) = figure("5.6", 21);
    for r in &rows {
        assert!((r[2] - protocols::w4_shared_concurrence(r[0], r[1])).abs() < 1e-10, "{r:?}");
        assert!(r[2] < 1.0);
    }
}

#[test]
fn figure_rows_are_sorted_by_parameter() {
    for id in entkit::cli::FIGURE_IDS {
        let (_, rows) = figure(id, 7);
        let key = |r: &Vec<f64>| if matches!(id, "5.4" | "5.6") { vec![r[0], r[1]] } else { vec![r[0]] };
        assert!(rows.windows(2).all(|w| key(&w[0]) < key(&w[1])), "{id}");
    }
}
