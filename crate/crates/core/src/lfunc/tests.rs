use super::*;
use crate::ffield::make_field_over;

fn primitive_values(q: u32, h: u32, n: u32) -> Vec<CyclotomicInteger> {
    char_sums(&HyperParams::new(q, h, n).unwrap(), Convention::ArtinSchreier)
        .unwrap()
        .into_iter()
        .filter(|r| r.primitive)
        .map(|r| r.value)
        .collect()
}

#[test]
fn char_sum_examples() {
    let p221 = primitive_values(2, 2, 1);
    assert_eq!(p221.len(), 2);
    assert!(p221.iter().all(|v| v.as_integer() == Some(4)));
    assert!(primitive_values(2, 2, 2).iter().all(|v| v.as_integer() == Some(-8)));
    for (q, h, n) in [(2u32, 2u32, 2u32), (3, 2, 1), (2, 3, 1)] {
        let params = HyperParams::new(q, h, n).unwrap();
        let rec = char_sum(&params, Fe::ZERO, Convention::Full).unwrap();
        assert!(!rec.primitive);
        assert_eq!(rec.value.as_integer(), Some(params.space_size(h - 1) as i128));
    }
}

#[test]
fn single_and_batch_sums_agree() {
    let params = HyperParams::new(3, 2, 2).unwrap();
    let field = params.char_field().unwrap();
    let all = char_sums(&params, Convention::Full).unwrap();
    for (lambda, rec) in field.elements().zip(&all) {
        assert_eq!(char_sum(&params, lambda, Convention::Full).unwrap(), *rec);
        assert_eq!(rec.lambda_in(&field).unwrap(), lambda);
    }
}

#[test]
fn predicted_examples() {
    assert_eq!(predicted_s(2, 2, 1).unwrap(), 4);
    assert_eq!(predicted_s(2, 2, 2).unwrap(), -8);
    assert_eq!(predicted_s(2, 3, 1).unwrap(), 64);
    assert_eq!(predicted_s(2, 3, 2).unwrap(), 512);
    assert_eq!(predicted_s(3, 3, 2).unwrap(), 19683);
    assert_eq!(predicted_s(2, 4, 2).unwrap(), -262144);
    // h = 1: c = -1 and every S_n is 1
    assert_eq!(predicted_s(2, 1, 3).unwrap(), 1);
    assert_eq!(primitive_values(2, 1, 3)[0].as_integer(), Some(1));
    assert!(predicted_s(2, 2, 0).is_err());
}

#[test]
fn conjecture_small_cases() {
    let r = conjecture_report(2, 2, 2, Convention::ArtinSchreier, None).unwrap();
    assert!(r.all_match && r.orbit_invariant && r.reformulation_consistent);
    let prim: Vec<&LambdaRow> = r.per_lambda.iter().filter(|x| x.primitive).collect();
    assert_eq!(prim.len(), 2);
    for row in prim {
        assert_eq!(row.sums, vec![Value::from(4), Value::from(-8)]);
        let f = row.reformulation.as_ref().unwrap();
        assert_eq!(f.implied_eigenvalue.as_deref(), Some("-2"));
        assert_eq!(f.implied_dimension.as_deref(), Some("-1"));
        assert!(!f.eigenvalue_equals_unsigned_statement);
        assert_eq!(row.l_coefficients.coefficients.len(), 3);
    }

    let r = conjecture_report(2, 3, 1, Convention::Full, None).unwrap();
    let prim: Vec<&LambdaRow> = r.per_lambda.iter().filter(|x| x.primitive).collect();
    assert_eq!(prim.len(), 6);
    assert!(prim.iter().all(|row| row.sums == vec![Value::from(64)]));
    assert!(r.all_match);

    let r = conjecture_report(3, 2, 2, Convention::Full, None).unwrap();
    assert!(r.all_match && r.orbit_invariant);
    for row in r.per_lambda.iter().filter(|x| x.primitive) {
        assert_eq!(row.sums, vec![Value::from(9), Value::from(-27)]);
    }
    // imprimitive rows carry no prediction
    for row in r.per_lambda.iter().filter(|x| !x.primitive) {
        assert!(row.predicted.is_none() && row.matches.is_none());
    }
}

#[test]
fn both_conventions_agree_on_primitive_sums() {
    for (q, h, n) in [(3u32, 2u32, 2u32), (3, 3, 1), (2, 3, 2)] {
        let params = HyperParams::new(q, h, n).unwrap();
        let a = char_sums(&params, Convention::Full).unwrap();
        let b = char_sums(&params, Convention::ArtinSchreier).unwrap();
        let field = params.char_field().unwrap();
        for (lambda, ra) in field.elements().zip(&a) {
            // the full convention sums psi_{-lambda} when h is odd
            let other = if h % 2 == 1 { field.neg(lambda) } else { lambda };
            assert_eq!(ra.value, b[other.0 as usize].value);
        }
    }
}

#[test]
fn zeta_consistency_examples() {
    for (q, h, n, expect) in [(2u32, 2u32, 1u32, Some(16i64)), (2, 2, 2, None), (2, 3, 1, Some(512)), (3, 2, 1, Some(81))] {
        for conv in [Convention::Full, Convention::ArtinSchreier] {
            let z = zeta_consistency(q, h, n, conv).unwrap();
            assert!(z.consistent, "{z:?}");
            assert_eq!(z.character_side, Value::from(z.count_points));
            assert!(z.brute_count.is_some());
            if let Some(e) = expect {
                assert_eq!(z.count_points as i64, e);
            }
        }
    }
}

#[test]
fn sums_are_frobenius_orbit_invariant_even_when_irrational() {
    // (3,1,2): psi of F_3 characters, sums over F_9 -- includes nonprimitive
    for (q, h, n) in [(3u32, 2u32, 1u32), (3, 2, 2), (3, 3, 1), (5, 2, 1)] {
        let params = HyperParams::new(q, h, n).unwrap();
        let field = make_field_over(q, h).unwrap();
        let recs = char_sums(&params, Convention::ArtinSchreier).unwrap();
        for (lambda, rec) in field.elements().zip(&recs) {
            let img = field.frobenius(lambda, 1);
            assert_eq!(rec.value, recs[img.0 as usize].value);
        }
    }
}

#[test]
fn cached_records_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let params = HyperParams::new(2, 2, 2).unwrap();
    let cold = char_sums_cached(&params, Convention::Full, Some(&cache)).unwrap();
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 4);
    let warm = char_sums_cached(&params, Convention::Full, Some(&cache)).unwrap();
    assert_eq!(cold, warm);
    // a different convention is a different key
    char_sums_cached(&params, Convention::ArtinSchreier, Some(&cache)).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 8);
}

#[test]
fn report_serializes_with_exact_numbers() {
    let r = conjecture_report(2, 2, 2, Convention::Full, None).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["all_match"], Value::Bool(true));
    assert_eq!(v["N"], Value::from(2));
    assert_eq!(v["per_lambda"].as_array().unwrap().len(), 4);
    assert!(no_floats(&v));
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(o) => o.values().all(no_floats),
        _ => true,
    }
}
