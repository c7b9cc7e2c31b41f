//! Claim runners: each binds one inequality or construction to a
//! reproducible computation and returns a [`VerificationReport`].

mod combinatorial;
mod kruglov_claims;
mod params;
mod report;
mod space_claims;

pub use combinatorial::{
    cmd_corollary10, cmd_corollary13, cmd_lemma5, cmd_lemma6, cmd_lemma7, cmd_remark, lemma6_sides, lemma7_witness,
};
pub use kruglov_claims::{cmd_lemma2, cmd_theorem1, cmd_theorem8, keystone, Keystone};
pub use params::{parse_vectors, show_vector, Params};
pub use report::{EvidenceRow, Relation, ReportBuilder, Verdict, VerificationReport};
pub use space_claims::{all_ones_quantiles, cmd_corollary12, cmd_criterion, orlicz_ratios};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Claim identifiers accepted by [`run_claim`], in `all` order.
pub const CLAIMS: &[&str] = &[
    "lemma5",
    "lemma6",
    "lemma7",
    "remark-counterexample",
    "lemma2",
    "theorem1",
    "criterion",
    "theorem8",
    "corollary12",
    "corollary13",
    "corollary10",
];

pub fn run_claim(id: &str, params: &Params) -> Result<VerificationReport> {
    match id {
        "lemma5" => cmd_lemma5(params),
        "lemma6" => cmd_lemma6(params),
        "lemma7" => cmd_lemma7(params),
        "remark" | "remark-counterexample" => cmd_remark(params),
        "lemma2" => cmd_lemma2(params),
        "theorem1" => cmd_theorem1(params),
        "criterion" => cmd_criterion(params),
        "theorem8" => cmd_theorem8(params),
        "corollary12" => cmd_corollary12(params),
        "corollary13" => cmd_corollary13(params),
        "corollary10" => cmd_corollary10(params),
        _ => Err(Error::InvalidArgument(format!(
            "unknown claim {id:?}; expected one of {} or all",
            CLAIMS.join(", ")
        ))),
    }
}

/// Runs `id`, or every claim for `all`.
pub fn run(id: &str, params: &Params) -> Result<Vec<VerificationReport>> {
    if id == "all" {
        CLAIMS.iter().map(|c| run_claim(c, params)).collect()
    } else {
        Ok(vec![run_claim(id, params)?])
    }
}

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub(crate) fn random_int_vector(rng: &mut ChaCha8Rng, n: usize, cap: u64) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::int(rng.gen_range(0..=cap) as i64)).collect()
}

/// Exhaustive `τ` set for comparing ccdfs: midpoints between adjacent atom
/// values of all inputs, plus one point below and one above.
pub(crate) fn tau_candidates(dists: &[&DiscreteDistribution]) -> Vec<Scalar> {
    let mut values: Vec<Scalar> = dists
        .iter()
        .flat_map(|d| d.atoms().iter().map(|a| a.value.clone()))
        .collect();
    values.sort_by(|a, b| a.cmp_num(b));
    values.dedup_by(|a, b| a.cmp_num(b) == std::cmp::Ordering::Equal);
    let mut taus = Vec::with_capacity(values.len() + 1);
    if let (Some(lo), Some(hi)) = (values.first(), values.last()) {
        taus.push(lo - &Scalar::one());
        for w in values.windows(2) {
            taus.push((&w[0] + &w[1]) * Scalar::ratio(1, 2));
        }
        taus.push(hi + &Scalar::one());
    }
    taus
}

/// Worst `τ` for `ccdf_upper(lhs, τ) <= factor · ccdf_lower(rhs, τ)`: the
/// tail of `lhs` counts against the claim and that of `rhs` is dropped.
pub(crate) struct CcdfScan {
    pub tau: Scalar,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub checked: usize,
    pub violations: usize,
}

pub(crate) fn ccdf_scan(lhs: &DiscreteDistribution, rhs: &DiscreteDistribution, factor: &Scalar) -> CcdfScan {
    let taus = tau_candidates(&[lhs, rhs]);
    let mut worst: Option<(Scalar, Scalar, Scalar, Scalar)> = None;
    let mut violations = 0;
    for tau in &taus {
        let l = lhs.ccdf(tau).1;
        let r = factor * &rhs.ccdf(tau).0;
        let gap = &l - &r;
        if gap.is_positive() {
            violations += 1;
        }
        if worst.as_ref().map_or(true, |w| gap > w.0) {
            worst = Some((gap, tau.clone(), l, r));
        }
    }
    let (_, tau, l, r) = worst.unwrap_or((Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()));
    CcdfScan {
        tau,
        lhs: l,
        rhs: r,
        checked: taus.len(),
        violations,
    }
}
