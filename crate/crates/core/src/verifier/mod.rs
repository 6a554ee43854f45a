//! Seeded numeric checks of the inequalities, identities and worked
//! examples relating the entropy functionals.
//!
//! Every trial draws its instance from a ChaCha8 generator seeded by
//! `(seed, claim id, trial index)`, so a single report can be reproduced
//! with [`verify_trial`]. Trials run in parallel; reports always come back
//! in catalog and trial order.

mod claims;
mod examples;
mod gen;
mod report;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrature::Integrator;

pub use claims::{EXACT_TOL, GAP_FLOOR};
pub use examples::{run_examples, EXAMPLE_TOL, NON_INVARIANCE_GAP};
pub use report::{write_csv, Relation, Status, VerificationReport, REPORT_SCHEMA};

type Checker = fn(&mut claims::Trial) -> Result<()>;

/// One entry of the catalog.
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    checker: Checker,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).finish_non_exhaustive()
    }
}

const CATALOG: &[Claim] = &[
    Claim {
        id: "prop-entropy-max",
        statement: "S_ν(η,s) ≤ log ν(s), with equality for the uniform measure",
        checker: claims::entropy_max,
    },
    Claim {
        id: "lemma-finite-form",
        statement: "log η(s) - (1/η(s))∫ q log q dν equals the probability form of η/η(s)",
        checker: claims::finite_form,
    },
    Claim {
        id: "weight-constant",
        statement: "a constant weight a ≥ 0 has entropy log ν(s)",
        checker: claims::weight_constant,
    },
    Claim {
        id: "weight-agreement",
        statement: "weight form of φ equals finite form of e^{-φ}ν",
        checker: claims::weight_agreement,
    },
    Claim {
        id: "prop-supnorm-bounds",
        statement: "sup_g ρ(gA) ≤ c inf_g ν(gA); ξ = cν gives dρ/dξ ≤ 1 and ρ(A) ≤ ξ(A)",
        checker: claims::supnorm_bounds,
    },
    Claim {
        id: "lemma-nonnegativity",
        statement: "an information measure with mass at least one has entropy ≥ 0",
        checker: claims::nonnegativity,
    },
    Claim {
        id: "thm-general-inequality",
        statement: "S_ξ(ρ,A) ≤ S_μG(ρ,A) ≤ S_μG(μG,A)",
        checker: claims::general_inequality,
    },
    Claim {
        id: "thm-relative-symmetry",
        statement: "S_μH(ξ,H) ≤ S_μG(ξ,A) for H ≤ A ≤ G, strict when A ≠ H",
        checker: claims::relative_symmetry,
    },
    Claim {
        id: "lemma-discrete-counting",
        statement: "S(D_n) = log 2n, increasing along subgroup chains",
        checker: claims::discrete_counting,
    },
    Claim {
        id: "prop-nested-subgroups",
        statement: "S_ν(μH,H) = log ν(H) ≤ log ν(G)",
        checker: claims::nested_subgroups,
    },
    Claim {
        id: "prop-invariance",
        statement: "S_μG(ρ,A) ≤ S_μG(μG,A) = S_μG(μG,gA)",
        checker: claims::invariance,
    },
    Claim {
        id: "cor-invariance",
        statement: "S_μG(ρ,gA) ≤ S_μG(μG,A)",
        checker: claims::invariance_corollary,
    },
    Claim {
        id: "lemma-change-reference",
        statement: "S_ν(ρ) = S_μ(ρ) - (1/ρ(s))∫ log(dμ/dν) dρ",
        checker: claims::change_reference,
    },
    Claim {
        id: "entropic-gap",
        statement: "S_μG(ρ,A) - S_ξ(ρ,A) = -(1/ρ(A))∫ log(dξ/dμG) dρ ≥ 0",
        checker: claims::entropic_gap,
    },
    Claim {
        id: "prop-entropy-concave",
        statement: "entropy is concave on the simplex",
        checker: claims::concavity,
    },
];

/// The claim catalog, in run order.
pub fn catalog() -> &'static [Claim] {
    CATALOG
}

pub fn claim(id: &str) -> Result<&'static Claim> {
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

/// Seed of the generator for one trial.
pub fn trial_seed(seed: u64, claim_id: &str, trial: u64) -> u64 {
    // FNV-1a over the id, then splitmix64 finalization of the mix
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in claim_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h.rotate_left(17) ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs a single trial of a claim.
pub fn verify_trial(claim_id: &str, seed: u64, trial: u64, tol: f64) -> Result<Vec<VerificationReport>> {
    let c = claim(claim_id)?;
    check_tol(tol)?;
    Ok(run_trial(c, seed, trial, tol))
}

fn run_trial(c: &Claim, seed: u64, trial: u64, tol: f64) -> Vec<VerificationReport> {
    let mut t = claims::Trial {
        id: c.id,
        index: trial,
        tol,
        rng: ChaCha8Rng::seed_from_u64(trial_seed(seed, c.id, trial)),
        cfg: Integrator::default().with_exec(Exec::Sequential),
        out: Vec::new(),
    };
    if let Err(e) = (c.checker)(&mut t) {
        t.out.push(VerificationReport::errored(c.id, "evaluation", &e));
    }
    t.out.into_iter().map(|r| r.with_trial(trial, seed)).collect()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must be positive, got {tol}")))
    }
}

/// Runs `trials` seeded instances of one claim.
pub fn verify(claim_id: &str, trials: u64, seed: u64, tol: f64) -> Result<Vec<VerificationReport>> {
    verify_with(claim_id, trials, seed, tol, Exec::default())
}

pub fn verify_with(claim_id: &str, trials: u64, seed: u64, tol: f64, exec: Exec) -> Result<Vec<VerificationReport>> {
    let c = claim(claim_id)?;
    check_tol(tol)?;
    if trials == 0 {
        return Ok(vec![VerificationReport::skipped(c.id, "all", "no trials requested").with_trial(0, seed)]);
    }
    let runs = exec.map_range(trials as usize, |i| run_trial(c, seed, i as u64, tol));
    Ok(runs.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimSummary {
    pub claim_id: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Smallest slack over non-skipped reports; `None` when all were skipped.
    pub worst_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub schema: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub tolerance: f64,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub claims: Vec<ClaimSummary>,
    #[serde(skip)]
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    pub fn from_reports(reports: Vec<VerificationReport>, seed: u64, trials: u64, tolerance: f64) -> Summary {
        let mut by_claim: BTreeMap<&str, usize> = BTreeMap::new();
        let mut claims: Vec<ClaimSummary> = Vec::new();
        for r in &reports {
            let k = *by_claim.entry(r.claim_id.as_str()).or_insert_with(|| {
                claims.push(ClaimSummary {
                    claim_id: r.claim_id.clone(),
                    passed: 0,
                    failed: 0,
                    skipped: 0,
                    worst_slack: None,
                });
                claims.len() - 1
            });
            let c = &mut claims[k];
            match r.status {
                Status::Pass => c.passed += 1,
                Status::Fail => c.failed += 1,
                Status::Skipped => c.skipped += 1,
            }
            if !r.is_skipped() {
                let s = if r.slack.is_nan() { f64::NEG_INFINITY } else { r.slack };
                c.worst_slack = Some(c.worst_slack.map_or(s, |w| w.min(s)));
            }
        }
        let count = |f: fn(&ClaimSummary) -> usize| claims.iter().map(f).sum();
        Summary {
            schema: REPORT_SCHEMA,
            seed,
            trials,
            tolerance,
            passed: count(|c| c.passed),
            failed: count(|c| c.failed),
            skipped: count(|c| c.skipped),
            claims,
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Every catalog claim followed by the worked examples.
pub fn run_all(seed: u64, trials: u64, tol: f64) -> Result<Summary> {
    run_all_with(seed, trials, tol, Exec::default())
}

pub fn run_all_with(seed: u64, trials: u64, tol: f64, exec: Exec) -> Result<Summary> {
    check_tol(tol)?;
    if trials == 0 {
        log::warn!("trials = 0: every claim is skipped");
    }
    let mut reports = Vec::new();
    for c in CATALOG {
        reports.extend(verify_with(c.id, trials, seed, tol, exec)?);
    }
    if trials > 0 {
        reports.extend(run_examples().into_iter().map(|r| r.with_trial(0, seed)));
    }
    Ok(Summary::from_reports(reports, seed, trials, tol))
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    schema: &'static str,
    reports: &'a [VerificationReport],
}

/// A single JSON document holding the reports.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(&ReportDocument {
        schema: REPORT_SCHEMA,
        reports,
    })
    .expect("reports serialize")
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    #[serde(flatten)]
    summary: &'a Summary,
    reports: &'a [VerificationReport],
}

/// The summary and every report as one JSON document.
pub fn summary_to_json(summary: &Summary) -> String {
    serde_json::to_string_pretty(&SummaryDocument {
        summary,
        reports: &summary.reports,
    })
    .expect("summary serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_unique() {
        let mut ids: Vec<&str> = catalog().iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), catalog().len());
        assert!(matches!(claim("nope"), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn every_claim_passes_a_few_trials() {
        for c in catalog() {
            let reports = verify(c.id, 12, 7, 1e-8).unwrap();
            for r in &reports {
                assert!(r.passed || r.is_skipped(), "{r:?}");
            }
            assert!(reports.iter().any(|r| r.passed), "{} never checked anything", c.id);
        }
    }

    #[test]
    fn trials_reproduce() {
        let all = verify("thm-general-inequality", 6, 3, 1e-8).unwrap();
        let one = verify_trial("thm-general-inequality", 3, 4, 1e-8).unwrap();
        let from_all: Vec<_> = all.into_iter().filter(|r| r.trial == 4).collect();
        assert_eq!(from_all, one);
        assert_ne!(trial_seed(0, "a", 0), trial_seed(0, "b", 0));
        assert_ne!(trial_seed(0, "a", 0), trial_seed(0, "a", 1));
    }

    #[test]
    fn examples_pass() {
        let reports = run_examples();
        assert!(reports.len() >= 3);
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn zero_trials_skip() {
        let s = run_all(0, 0, 1e-8).unwrap();
        assert_eq!(s.passed + s.failed, 0);
        assert_eq!(s.skipped, catalog().len());
        assert!(s.all_passed());
    }

    #[test]
    fn json_carries_schema() {
        let r = verify("weight-constant", 1, 0, 1e-8).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&reports_to_json(&r)).unwrap();
        assert_eq!(doc["schema"], REPORT_SCHEMA);
        assert_eq!(doc["reports"].as_array().unwrap().len(), r.len());
    }
}
