use difflab::diffeo::Manifold;
use difflab::experiments::{self, Experiment, ExperimentReport, Format, Params};
use difflab::Error;

/// Small parameter sets so the whole file runs in a few seconds.
fn quick(exp: Experiment, seed: u64) -> Params {
    let mut p = Params { seed, ..Params::default() };
    match exp {
        Experiment::SeparatedFamily => {
            p.trials = Some(3);
            p.depth = Some(10);
        }
        Experiment::WienerYoung => {
            p.trials = Some(4);
            p.depth = Some(10);
        }
        Experiment::BvDiscontinuity => {
            p.manifold = Some(Manifold::Circle);
        }
        Experiment::AcContinuity => p.k = Some(1),
        Experiment::ChangeOfVariables => p.trials = Some(4),
        Experiment::VariationInvariance => p.trials = Some(6),
    }
    p
}

fn run(exp: Experiment, seed: u64) -> ExperimentReport {
    experiments::run(exp, &quick(exp, seed)).unwrap()
}

#[test]
fn csv_headers_match_golden_files() {
    for exp in Experiment::ALL {
        let path = format!("{}/tests/golden/{}.header", env!("CARGO_MANIFEST_DIR"), exp.name());
        let golden = std::fs::read_to_string(&path).unwrap();
        let csv = run(exp, 1).to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), golden.trim_end(), "{exp}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for exp in Experiment::ALL {
        let a = run(exp, 5);
        let b = run(exp, 5);
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap(), "{exp}");
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap(), "{exp}");
    }
}

#[test]
fn seeds_change_sampled_rows() {
    let a = run(Experiment::SeparatedFamily, 1).to_csv().unwrap();
    let b = run(Experiment::SeparatedFamily, 2).to_csv().unwrap();
    assert_ne!(a, b);
}

#[test]
fn small_runs_pass() {
    for exp in Experiment::ALL {
        let r = run(exp, 3);
        assert!(r.pass(), "{exp}:\n{}", r.to_csv().unwrap());
    }
}

#[test]
fn json_has_report_shape() {
    let r = run(Experiment::WienerYoung, 1);
    let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
    assert_eq!(v["experiment"], "wiener-young");
    assert_eq!(v["params"]["depth"], 10);
    assert_eq!(v["params"]["radix"], 4);
    assert_eq!(v["pass"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["kind"], "zero");
    assert_eq!(rows[0]["variation"], 0.0);
    assert!(rows.iter().all(|row| row["pass"] == true));
}

#[test]
fn verdicts_follow_from_columns() {
    let r = run(Experiment::SeparatedFamily, 4);
    let err = r.values("abs_error");
    let thr = r.values("threshold");
    assert_eq!(r.rows.len(), 3 + 1 + 3);
    for (i, row) in r.rows.iter().enumerate() {
        assert_eq!(row.pass, err[i].unwrap() < thr[i].unwrap());
    }
    let r = run(Experiment::VariationInvariance, 4);
    for (i, row) in r.rows.iter().enumerate() {
        let worst = ["oracle_gap", "composition", "additivity", "scaling", "shift"]
            .iter()
            .map(|c| r.values(c)[i].unwrap())
            .fold(0.0, f64::max);
        assert_eq!(row.pass, worst < 1e-7);
    }
}

#[test]
fn separated_family_targets() {
    let r = run(Experiment::SeparatedFamily, 1);
    let kinds: Vec<String> = r.rows.iter().map(|row| row.cells[0].render()).collect();
    let targets = r.values("target");
    for (k, t) in kinds.iter().zip(&targets) {
        let want = match k.as_str() {
            "single" => 1.0,
            "self" => 0.0,
            _ => 2.0,
        };
        assert_eq!(t.unwrap(), want);
    }
    for s in r.values("structural").iter().zip(&targets) {
        assert!((s.0.unwrap() - s.1.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn bv_discontinuity_columns() {
    let r = run(Experiment::BvDiscontinuity, 1);
    assert_eq!(r.rows.len(), 10);
    // rotations have log-derivative exactly zero
    assert!(r.values("log_fn_bv").iter().all(|v| v.unwrap() == 0.0));
    for (h, s) in r.values("h").iter().zip(r.values("sup_term")) {
        let chord = 2.0 * (std::f64::consts::PI * h.unwrap()).sin();
        assert!((s.unwrap() - chord).abs() < 1e-12);
    }
    let eps = r.values("epsilon")[0].unwrap();
    assert!((eps - 1.0).abs() < 1e-12);
}

#[test]
fn separation_failures_are_errors() {
    let p = Params { trials: Some(40), depth: Some(1), ..Params::default() };
    assert!(matches!(experiments::run(Experiment::SeparatedFamily, &p), Err(Error::Misalignment(_))));
    let p = Params { depth: Some(6), ..Params::default() };
    assert!(matches!(experiments::run(Experiment::BvDiscontinuity, &p), Err(Error::Misalignment(_))));
    let p = Params { tol: -1.0, ..Params::default() };
    assert!(matches!(experiments::run(Experiment::WienerYoung, &p), Err(Error::Parameter(_))));
}

#[test]
fn experiment_names_round_trip() {
    for exp in Experiment::ALL {
        assert_eq!(exp.name().parse::<Experiment>().unwrap(), exp);
    }
    assert!("no-such-thing".parse::<Experiment>().is_err());
}
