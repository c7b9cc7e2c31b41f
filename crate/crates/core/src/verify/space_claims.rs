use rayon::prelude::*;

use super::params::Params;
use super::report::{EvidenceRow, ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::exactnum::{warm_tables, Scalar};
use crate::operators::t_n_dist;
use crate::spaces::{dyadic_gauge_sum, kruglov_criterion, log_in_lorentz, norm_orlicz, ConcaveGauge, OrliczYoung, GAUGE_GRID};
use crate::stepfn::StepFunction;

pub fn cmd_criterion(p: &Params) -> Result<VerificationReport> {
    let gauges: Vec<String> = match p.raw("gauge") {
        Some(s) => s.split(';').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect(),
        None => vec!["power:1".into(), "power:1/2".into(), "triple-log".into()],
    };
    let grid: usize = p.get("grid", GAUGE_GRID)?;
    let tol: f64 = p.get("tol", 1e-12)?;
    let mut b = ReportBuilder::new(
        "criterion",
        "Kruglov criterion: K is bounded on Λ_φ iff sup_{0<t≤1} Σ_k φ(t^k/k!)/φ(t) < ∞",
    );
    b.param("gauges", gauges.join(";")).param("grid", grid).param("tol", tol);
    for spec in &gauges {
        let phi: ConcaveGauge = spec.parse()?;
        let est = kruglov_criterion(&phi, grid, tol);
        let is_identity = matches!(&phi, ConcaveGauge::Power(a) if a.exact_eq(&Scalar::one()).unwrap_or(false));
        if is_identity {
            b.row(EvidenceRow::eq(
                format!("{phi} criterion equals e - 1"),
                Scalar::Approx(est.value),
                Scalar::Approx(std::f64::consts::E - 1.0),
                Scalar::Approx(1e-6),
            ));
            b.row(EvidenceRow::eq(format!("{phi} argmax at t = 1"), Scalar::Approx(est.argmax), Scalar::one(), Scalar::zero()));
        } else if est.value.is_finite() {
            b.row(EvidenceRow::info(
                format!("{phi} criterion finite, argmax t={:.6e}", est.argmax),
                Scalar::Approx(est.value),
                Scalar::Approx(crate::spaces::DIVERGENCE_CAP),
            ));
        } else {
            b.inconclusive(format!("{phi}: running supremum passed the divergence cap"));
        }
        if !est.certified {
            b.inconclusive(format!("{phi}: series tail not certified at every grid point"));
        }
        let (d20, d40) = (dyadic_gauge_sum(&phi, 20), dyadic_gauge_sum(&phi, 40));
        b.row(EvidenceRow::info(format!("{phi} dyadic sums N=20, N=40"), Scalar::Approx(d20), Scalar::Approx(d40)));
        b.row(EvidenceRow::info(
            format!("{phi} norm of log2(2/t) in the Lorentz space, N=40"),
            Scalar::Approx(log_in_lorentz(&phi, 40)),
            Scalar::Approx(log_in_lorentz(&phi, 20)),
        ));
    }
    Ok(b.finish())
}

/// Decreasing rearrangements of `T_n 1` for each `n`.
pub fn all_ones_quantiles(ns: &[usize]) -> Result<Vec<StepFunction>> {
    ns.par_iter().map(|&n| t_n_dist(&vec![Scalar::one(); n])?.quantile()).collect()
}

/// `‖q‖_{M_p} / ‖1‖_{M_p}` for each `q`.
pub fn orlicz_ratios(p: f64, quantiles: &[StepFunction], tol: f64) -> Result<Vec<f64>> {
    let m = OrliczYoung::new(p)?;
    let one = norm_orlicz(&StepFunction::constant(Scalar::one()), &m, tol)?;
    quantiles.par_iter().map(|q| Ok(norm_orlicz(q, &m, tol)? / one)).collect()
}

/// Start of the longest strictly increasing suffix.
pub fn increasing_from(v: &[f64]) -> usize {
    let mut i = v.len().saturating_sub(1);
    while i > 0 && v[i - 1] < v[i] {
        i -= 1;
    }
    i
}

pub fn cmd_corollary12(p: &Params) -> Result<VerificationReport> {
    let ps: Vec<f64> = p.list("p", &[1.0, 2.0])?;
    let default_n: Vec<usize> = (6..=11).map(|k| 1usize << k).collect();
    let ns: Vec<usize> = p.list("n", &default_n)?;
    let tol: f64 = p.get("tol", 1e-12)?;
    if ns.len() < 2 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n list must be strictly increasing with at least two entries".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| n > 4096) {
        return Err(Error::Budget(format!("n = {n} exceeds 4096")));
    }
    let mut b = ReportBuilder::new(
        "corollary12",
        "Corollary 12: ‖T_n‖ on the exponential Orlicz space M_p is unbounded for p ≥ 2 and bounded for p ≤ 1",
    );
    b.param("p", ps.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
        .param("n", ns.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .param("tol", tol);
    warm_tables(*ns.last().unwrap());
    let quantiles = all_ones_quantiles(&ns)?;
    for &q in &ps {
        let rho = orlicz_ratios(q, &quantiles, tol)?;
        for (n, r) in ns.iter().zip(&rho) {
            b.row(EvidenceRow::info(format!("p={q} n={n} rho"), Scalar::Approx(*r), Scalar::one()));
        }
        if q >= 2.0 {
            let i0 = increasing_from(&rho);
            b.row(EvidenceRow::check(
                format!("p={q} rho strictly increasing from n={} ({} of {} points)", ns[i0], ns.len() - i0, ns.len()),
                i0 <= ns.len() / 2,
            ));
        } else if q <= 1.0 {
            let half = ns.len().div_ceil(2);
            let head = rho[..half].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let all = rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            b.row(EvidenceRow::le(
                format!("p={q} max rho over all n stays at the first-half max"),
                Scalar::Approx(all),
                Scalar::Approx(head),
                Scalar::Approx(1e-6),
            ));
        } else {
            b.inconclusive(format!("p={q} lies strictly between 1 and 2; ratios recorded only"));
        }
    }
    Ok(b.finish())
}
