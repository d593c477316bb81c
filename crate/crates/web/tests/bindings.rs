use quatsculpt_web::{sculpture_json, verify_json, walk_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn sculpture_has_eight_wireframes() {
    let v = parse(&sculpture_json(&[1.0, 1.0, 1.0, 1.0], 0.8).unwrap());
    let parts = v["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 8);
    assert_eq!(parts[2]["element"], "i");
    for p in parts {
        assert_eq!(p["vertices"].as_array().unwrap().len(), 42 * 3);
        assert_eq!(p["edges"].as_array().unwrap().len() % 2, 0);
    }
    assert!(v["min_edge"].as_f64().unwrap() >= 0.8);
    assert_eq!(v["pole"][0], 0.5);
}

#[test]
fn bad_pole_is_rejected() {
    assert!(sculpture_json(&[1.0, 0.0], 0.8).is_err());
    assert!(sculpture_json(&[0.0; 4], 0.8).is_err());
    assert!(sculpture_json(&[1.0, 0.0, 0.0, 0.0], 0.8).is_ok());
}

#[test]
fn walks() {
    let v = parse(&walk_json("j", "i j k").unwrap());
    assert_eq!(v["end"], "-j");
    assert_eq!(v["visited"].as_array().unwrap().len(), 4);
    assert_eq!(parse(&walk_json("1", "").unwrap())["end"], "1");
    assert!(walk_json("1", "-1").is_err());
    assert!(walk_json("q", "i").is_err());
}

#[test]
fn verify_reports_q8() {
    let v = parse(&verify_json(&[0.3, -0.4, 0.5, 0.7]).unwrap());
    assert_eq!(v["is_exactly_q8"], true);
    assert_eq!(v["symmetry_count"], 8);
    assert_eq!(v["chirality"], "metachiral");
}
