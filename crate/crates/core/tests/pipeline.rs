//! Cross-module checks through the public API only.

use ltlab::cache::Cache;
use ltlab::congruence::verify_congruences;
use ltlab::formalmod::{verify_formal_module, TieBreak};
use ltlab::hypersurface::{count_points, on_hypersurface, Convention, HyperParams};
use ltlab::lfunc::{char_sums, char_sums_cached, conjecture_report};

#[test]
fn cached_sums_equal_fresh_sums() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let params = HyperParams::new(3, 2, 2).unwrap();
    let fresh = char_sums(&params, Convention::Full).unwrap();
    let cold = char_sums_cached(&params, Convention::Full, Some(&cache)).unwrap();
    let warm = char_sums_cached(&params, Convention::Full, Some(&cache)).unwrap();
    assert_eq!(fresh, cold);
    assert_eq!(cold, warm);
}

#[test]
fn point_count_matches_membership_test() {
    let params = HyperParams::new(2, 2, 1).unwrap();
    let field = params.point_field().unwrap();
    let mut n = 0;
    for a in field.elements() {
        for b in field.elements() {
            if on_hypersurface(&field, 2, 2, &[a, b], Convention::Full).unwrap() {
                n += 1;
            }
        }
    }
    assert_eq!(n, count_points(&params).unwrap());
}

#[test]
fn conventions_agree_on_primitive_sums_for_even_q() {
    let full = conjecture_report(2, 3, 2, Convention::Full, None).unwrap();
    let art = conjecture_report(2, 3, 2, Convention::ArtinSchreier, None).unwrap();
    assert!(full.all_match && art.all_match);
}

#[test]
fn reports_serialize_without_floats() {
    let f = verify_formal_module(2, 2, 1, None, None, 9).unwrap();
    let c = verify_congruences(2, 2, 1, None, None, 9, TieBreak::Least).unwrap();
    for text in [serde_json::to_string(&f).unwrap(), serde_json::to_string(&c).unwrap()] {
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(!has_float(&v), "{text}");
    }
}

fn has_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_f64(),
        serde_json::Value::Array(a) => a.iter().any(has_float),
        serde_json::Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}
