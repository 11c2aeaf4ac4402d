//! Proof certificates: what was bounded, reduced and searched for one k.

use serde::{Deserialize, Serialize};

use crate::bounds::HeightPolicy;
use crate::error::Result;
use crate::mdep::{SearchWindow, Witness};

use super::large_k::LargeKRecord;
use super::reduce::{replay_pass, Reduction};
use super::LinearForm;

/// L_m = base^s and L_n = base^t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub m: i64,
    pub n: i64,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub k: usize,
    pub policy: HeightPolicy,
    /// Bound on n from the linear forms, before reduction.
    pub n_bound_initial: Option<String>,
    pub n_bound_checks: Vec<(String, bool)>,
    pub nonvanishing: Vec<LinearForm>,
    /// Solutions with n <= 50.
    pub small_n_solutions: Vec<Solution>,
    pub large_k_branch: Option<LargeKRecord>,
    pub reduction: Option<Reduction>,
    pub m_bound_after_lll: Option<u64>,
    pub n_bound_final: u64,
    pub searched: SearchWindow,
    pub solutions: Vec<Solution>,
    pub external_axioms: Vec<String>,
    pub discrepancies: Vec<String>,
}

/// Printed values that the computation does not reproduce.
pub fn discrepancies(c: &ProofCertificate) -> Vec<String> {
    let mut out = Vec::new();
    if c.k == 3 && c.solutions.iter().any(|s| (s.m, s.n) == (0, 7)) {
        out.push("printed (k, m, n) = (3, 0, 6); the solution is (3, 0, 7) with L_7 = 64 = 2^6, L_0 = 2".into());
    }
    if c.policy == HeightPolicy::Nominal {
        out.push(format!(
            "A_2 = 1 for 2 alpha - 1 is below k h(2 alpha - 1) (about {:.2}); the certified policy uses A_2 = k log 3",
            c.k as f64 * 2f64.ln()
        ));
    }
    if let Some(r) = &c.reduction {
        let a1 = &r.branch_a[0];
        if a1.enlargements > 0 {
            out.push(format!("first branch (a) pass: delta^2 <= T^2 + S at C = 6e194, passes at C = {}", a1.c));
        }
        if a1.eta_names.len() == 3 {
            out.push(format!("first branch (a) pass: S = {} (printed 2.22e130), T = {}", a1.s, a1.t));
        }
        if r.m_first > 891 {
            out.push(format!("first branch (a) pass gives m <= {} (printed m < 891)", r.m_first));
        }
        let b1 = r.branch_b.iter().map(|e| 2 * e.first_half_n).max().unwrap_or(0);
        if b1 > 4356 {
            out.push(format!("first branch (b) passes give n <= {b1} (printed n <= 4356)"));
        }
        if r.n_final >= 1600 {
            out.push(format!("final bound n <= {} (printed n < 1600)", r.n_final));
        }
    }
    out
}

/// Structural checks; returns the violated ones.
pub fn validate(c: &ProofCertificate) -> Vec<String> {
    let mut bad = Vec::new();
    let w = &c.searched;
    if w.k_min != c.k || w.k_max != c.k {
        bad.push(format!("search window covers k in [{}, {}], not {}", w.k_min, w.k_max, c.k));
    }
    if (w.n_max as u64) < c.n_bound_final {
        bad.push(format!("searched n <= {} below the bound {}", w.n_max, c.n_bound_final));
    }
    if w.m_min != 0 {
        bad.push(format!("searched m >= {}, not m >= 0", w.m_min));
    }
    for s in &c.solutions {
        if !(s.m >= w.m_min && s.m < s.n && s.n <= w.n_max && s.m != 1) {
            bad.push(format!("solution (m, n) = ({}, {}) outside the window", s.m, s.n));
        }
    }
    for s in &c.small_n_solutions {
        if !c.solutions.contains(s) {
            bad.push(format!("small-n solution ({}, {}) missing from the final search", s.m, s.n));
        }
    }
    if !c.n_bound_checks.iter().all(|(_, ok)| *ok) {
        bad.push("a step of the bound on n fails".into());
    }
    if let Some(r) = &c.reduction {
        if Some(r.m_final) != c.m_bound_after_lll {
            bad.push("m bound differs from the last branch (a) pass".into());
        }
        let a = &r.branch_a;
        if a.is_empty() || a[0].height_bound != r.m_first || a.last().map(|p| p.height_bound) != Some(r.m_final) {
            bad.push("branch (a) records disagree with the m bounds".into());
        }
        for w in a.windows(2) {
            let m = w[0].height_bound;
            let expect_c3 = (38 * m).to_string();
            let n = (m * m).to_string();
            if w[1].c3 != expect_c3 || w[1].coefficient_bounds.first() != Some(&n) {
                bad.push(format!("pass {} does not start from m <= {m}", w[1].label));
            }
            if w[1].height_bound >= m {
                bad.push(format!("pass {} does not improve m", w[1].label));
            }
        }
        let ms: Vec<i64> = r.branch_b.iter().map(|e| e.m).collect();
        let expect: Vec<i64> = std::iter::once(0).chain(2..=r.m_first as i64).collect();
        if ms != expect {
            bad.push("branch (b) does not cover m in {0} and [2, m bound]".into());
        }
        let n_b = r.branch_b.iter().filter(|e| e.open).map(|e| e.n_bound()).max().unwrap_or(0);
        if n_b != r.n_b {
            bad.push(format!("branch (b) bound {} differs from the entries ({n_b})", r.n_b));
        }
        if let Some(last) = r.branch_b_binding.last() {
            if 2 * last.height_bound != r.n_b {
                bad.push("binding branch (b) record differs from the bound".into());
            }
        }
        let n_final = [50, 196, r.m_final * r.m_final, r.n_b].into_iter().max().expect("nonempty");
        if n_final != r.n_final || n_final != c.n_bound_final {
            bad.push(format!("final bound {} is not max(50, 14^2, m^2, n_b) = {n_final}", c.n_bound_final));
        }
    }
    bad
}

/// Recomputes every fully recorded lattice pass; returns the labels that
/// do not reproduce.
pub fn replay(c: &ProofCertificate, cache_dir: Option<&std::path::Path>) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    if let Some(r) = &c.reduction {
        for p in r.branch_a.iter().chain(&r.branch_b_binding) {
            if !replay_pass(c.k, p, cache_dir)? {
                bad.push(format!("{} {:?}", p.label, p.lucas_index));
            }
        }
    }
    Ok(bad)
}

/// JSON array with keys in sorted order.
pub fn to_canonical_json(certs: &[ProofCertificate]) -> Result<String> {
    let v = serde_json::to_value(certs)?;
    Ok(serde_json::to_string_pretty(&v)?)
}
