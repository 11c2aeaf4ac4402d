use lucasdep::pipeline::certificate::to_canonical_json;
use lucasdep::pipeline::{prove, replay, validate, ProofCertificate, ProveConfig};

fn pairs(c: &ProofCertificate) -> Vec<(i64, i64)> {
    c.solutions.iter().map(|s| (s.m, s.n)).collect()
}

#[test]
fn k3_certificate_round_trip() {
    let cfg = ProveConfig::default();
    let certs = prove(3, 3, &cfg).unwrap();
    let c = &certs[0];
    assert_eq!(pairs(c), vec![(0, 7)]);
    assert!(validate(c).is_empty(), "{:?}", validate(c));
    assert!(replay(c, None).unwrap().is_empty());
    assert_eq!(c.large_k_branch.as_ref().map(|r| r.final_k_bound), Some(933));
    assert!(c.discrepancies.iter().any(|d| d.contains("(3, 0, 6)")));
    let red = c.reduction.as_ref().unwrap();
    assert!(red.m_first <= 935);
    assert_eq!(c.n_bound_final, red.n_final);
    assert!(c.searched.n_max as u64 >= c.n_bound_final);

    let text = to_canonical_json(&certs).unwrap();
    let back: Vec<ProofCertificate> = serde_json::from_str(&text).unwrap();
    assert_eq!(to_canonical_json(&back).unwrap(), text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    let mut short = back[0].clone();
    short.searched.n_max = 100;
    assert!(validate(&short).iter().any(|p| p.contains("below the bound")));
    let mut skipped = back[0].clone();
    skipped.reduction.as_mut().unwrap().branch_b.remove(3);
    assert!(!validate(&skipped).is_empty());
}

#[test]
fn k2_has_the_classical_solution() {
    let certs = prove(2, 2, &ProveConfig::default()).unwrap();
    assert_eq!(pairs(&certs[0]), vec![(0, 3)]);
    assert!(certs[0].large_k_branch.is_some());
    assert!(validate(&certs[0]).is_empty());
}

#[test]
fn rejects_out_of_range() {
    assert!(prove(1, 3, &ProveConfig::default()).is_err());
    assert!(prove(5, 4, &ProveConfig::default()).is_err());
    assert!(prove(999, 1001, &ProveConfig::default()).is_err());
}

/// About 80 s per k.
#[test]
#[ignore]
fn no_solutions_for_k_4_to_10() {
    for c in prove(4, 10, &ProveConfig::default()).unwrap() {
        assert!(c.solutions.is_empty(), "k = {}: {:?}", c.k, pairs(&c));
        assert!(validate(&c).is_empty());
    }
}
