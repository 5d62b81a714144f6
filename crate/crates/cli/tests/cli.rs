use std::process::Command;

use proptest::prelude::*;
use quarticles::expr::{parse_state, recipe_expression};
use quarticles_core::catalog::{phase_state, StateRecipe};
use quarticles_core::RayRelation;
use serde_json::Value;

fn quarticles(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quarticles"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = quarticles(&full);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).expect("valid json")
}

#[test]
fn catalog_recipes_round_trip_through_text() {
    for m in 3..=5 {
        for recipe in [
            StateRecipe::PsiS { m, n: m },
            StateRecipe::PsiA { m, n: m },
            StateRecipe::PsiD { m, n: m },
        ] {
            let text = recipe_expression(&recipe, m).unwrap().to_string();
            let reparsed = parse_state(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let evaluated = reparsed.evaluate(Some(m)).unwrap();
            let direct = recipe.build(m).unwrap();
            assert!(
                matches!(direct.ray_compare(&evaluated, 1e-10).unwrap(), RayRelation::Proportional(_)),
                "{recipe:?} via {text}"
            );
            assert_eq!(parse_state(&reparsed.to_string()).unwrap().to_string(), text);
        }
    }
}

#[test]
fn exit_codes_for_the_regression_corpus() {
    let corpus: &[(&[&str], i32)] = &[
        (&["state", "eval", "S(2,3)A(1,2)|0,1,2>"], 0),
        (&["state", "eval", "|0,1> + exp(i 1.0472)|1,0>"], 0),
        (&["prob", "|0,1> + |1,0>", "--atoms", "Q1=1", "--given", "Q2=2"], 0),
        (&["discern", "|0,1> + exp(i 1.0472)|1,0>", "--pair", "1,2"], 0),
        (&["verify", "iff", "--trials", "20"], 0),
        (&["verify", "phase", "--steps", "4"], 0),
        (&["reproduce", "claims", "--m", "3"], 0),
        (&["state", "eval", "A(1,2)|0,0>"], 2),
        (&["state", "eval", "S(1,2|0,1>"], 2),
        (&["state", "eval", "|0,5>", "--d", "3"], 2),
        (&["prob", "|0,1>", "--atoms", "Q3=1"], 2),
        (&["prob", "|0,1>", "--atoms", "Q1=9"], 2),
        (&["discern", "|0,1>", "--pair", "1"], 2),
        (&["verify", "iff", "--n", "1"], 2),
        (&["reproduce", "claims", "--m", "2"], 2),
        (&["--format", "csv", "verify", "iff", "--trials", "2"], 2),
        (&["frobnicate"], 2),
        (&[], 2),
        (&["--help"], 0),
    ];
    for (args, expected) in corpus {
        let (code, _, err) = quarticles(args);
        assert_eq!(code, *expected, "{args:?}: {err}");
        if *expected == 2 {
            assert!(!err.is_empty(), "{args:?} should explain itself on stderr");
        }
    }
}

#[test]
fn json_reports_parse_back() {
    let v = json(&["verify", "iff", "--trials", "30", "--seed", "7"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "verify iff");
    assert_eq!(v["violations"], 0);
    assert_eq!(v["ok"], true);
    assert!(v.get("timing").is_none());

    let v = json(&["reproduce", "claims", "--m", "3"]);
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 5);
}

#[test]
fn phase_state_at_a_third_of_pi_is_discernible() {
    let v = json(&["discern", "|0,1> + exp(i 1.0471975511965976)|1,0>", "--pair", "1,2"]);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["indiscernible"], false);
    assert!(verdict["witness"]["abs_diff"].as_f64().unwrap() > 1e-6);
}

#[test]
fn all_discernible_report_witnesses_every_pair() {
    let v = json(&["discern", "S(2,3)A(1,2)|0,1,2> + S(1,3)A(2,3)|0,1,2> + S(1,2)A(3,1)|0,1,2>"]);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 3);
    for verdict in verdicts {
        assert_eq!(verdict["character"], "neither");
        assert!(verdict["witness"].is_object());
    }
}

#[test]
fn csv_lists_probability_rows() {
    let (code, out, _) = quarticles(&["--format", "csv", "prob", "S(2,3)A(1,2)|0,1,2>", "--atoms", "Q1=1", "--pair", "1,2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("slot,eigenvalue,value_ij,value_ji,abs_diff"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[1], "1");
    assert!((first[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    assert!((first[3].parse::<f64>().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn identical_arguments_give_identical_json() {
    let args = ["--format", "json", "discern", "|0,1> + 0.5|1,0>", "--seed", "3"];
    assert_eq!(quarticles(&args).1, quarticles(&args).1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_expressions_match_the_catalog(theta in 0.0f64..std::f64::consts::TAU) {
        let text = format!("|0,1> + exp(i {theta:?})|1,0>");
        let k = parse_state(&text).unwrap().evaluate(Some(2)).unwrap();
        let direct = phase_state(theta, 2).unwrap();
        prop_assert!(matches!(direct.ray_compare(&k, 1e-10).unwrap(), RayRelation::Proportional(_)));
    }

    #[test]
    fn display_is_a_fixed_point(labels in proptest::collection::vec(0usize..3, 2..4), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let ket = labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        let text = format!("{re:?}|{ket}> + {im:?}i S(1,2)|{ket}>");
        if let Ok(e) = parse_state(&text) {
            let once = e.to_string();
            prop_assert_eq!(parse_state(&once).unwrap().to_string(), once);
        }
    }
}
