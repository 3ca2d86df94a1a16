use fano_casebook::{document, load, load_str, manifest, parse_doc, to_json, CaseError, Mechanism, CASE_IDS};

#[test]
fn documents_round_trip_byte_for_byte() {
    for id in CASE_IDS {
        let text = document(id).unwrap();
        let doc = parse_doc(text).unwrap();
        assert_eq!(to_json(&doc), text, "case {id}");
    }
}

#[test]
fn every_case_loads() {
    for id in CASE_IDS {
        if let Err(e) = load(id) {
            panic!("case {id}: {e}");
        }
    }
}

#[test]
fn manifest_lists_every_case_once() {
    let m = manifest().unwrap();
    assert_eq!(m.len(), 26);
    for e in &m {
        if e.mechanism == Mechanism::BetaPullback {
            let parent = e.parent.as_deref().unwrap();
            assert!(CASE_IDS.contains(&parent), "{} has parent {parent}", e.id);
        }
    }
    let degenerations: Vec<_> = m.iter().filter(|e| e.mechanism == Mechanism::Degeneration).map(|e| e.id.as_str()).collect();
    assert_eq!(degenerations, ["2.21", "3.13"]);
}

#[test]
fn unknown_case_is_reported() {
    assert_eq!(load("9.99").unwrap_err(), CaseError::Unknown("9.99".into()));
}

const MU: &str = r#"{"numerator": "3", "denominator": "a"}"#;

const SMALL: &str = r#"{
  "id": "x",
  "description": "projective plane",
  "mechanism": "beta",
  "dim": 2,
  "variables": ["a"],
  "basis": ["H"],
  "intersections": {"H.H": "1"},
  "canonical": {"H": "-3"},
  "polarization": {"H": "a"},
  "expected": {"Ln": "a^2", "mu": "LN"}
}"#;

#[test]
fn wrong_volume_is_rejected() {
    let text = SMALL.replace("\"LN\"", MU).replace("\"a^2\"", "\"2*a^2\"");
    assert!(matches!(load_str(&text), Err(CaseError::TensorCheck { .. })));
}

#[test]
fn consistent_table_passes_the_gate() {
    let text = SMALL.replace("\"LN\"", MU);
    let case = load_str(&text).unwrap();
    assert!(case.variety.is_some());
}

#[test]
fn missing_entries_are_zero() {
    let text = SMALL.replace("\"LN\"", MU).replace("\"basis\": [\"H\"]", "\"basis\": [\"H\", \"G\"]");
    let case = load_str(&text).unwrap();
    let v = case.variety.unwrap();
    assert_eq!(v.form.entry(&[1, 1]), fano_symbolic::q(0));
}

#[test]
fn curve_arity_is_checked() {
    let text = SMALL.replace("\"LN\"", MU).replace("\"dim\": 2,", "\"dim\": 2, \"curves\": {\"l\": [\"1\", \"0\"]},");
    assert!(matches!(load_str(&text), Err(CaseError::Invalid { .. })));
}

#[test]
fn unknown_fields_are_rejected() {
    let text = SMALL.replace("\"LN\"", MU).replace("\"dim\": 2,", "\"dim\": 2, \"colour\": 1,");
    assert!(matches!(load_str(&text), Err(CaseError::Json(_))));
}

mod properties {
    use std::collections::BTreeMap;

    use fano_casebook::rename_identifiers;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn swapping_twice_restores_the_text(words in proptest::collection::vec(prop_oneof!["a1", "a2", "a12", "b", "2", "u"], 1..8)) {
            let text = words.join(" + ");
            let swap = BTreeMap::from([("a1".to_string(), "a2".to_string()), ("a2".to_string(), "a1".to_string())]);
            let once = rename_identifiers(&text, &swap);
            prop_assert_eq!(rename_identifiers(&once, &swap), text.clone());
            prop_assert_eq!(once.matches("a12").count(), text.matches("a12").count());
        }
    }
}
