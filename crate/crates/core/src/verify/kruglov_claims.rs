use rayon::prelude::*;

use super::params::{show_vector, Params};
use super::report::{EvidenceRow, ReportBuilder, VerificationReport};
use super::ccdf_scan;
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::exactnum::{warm_tables, Scalar};
use crate::operators::{
    h_m_dist, kruglov_dist, kruglov_dist_pruned, kruglov_iterate, repeat_vector, support_iteration, t_n_dist,
    DEFAULT_PRUNE, DEFAULT_TAIL_TOL,
};
use crate::spaces::{build_epsilon_gauge, EpsilonGauge, NormSpec, DEFAULT_TOL};
use crate::stepfn::StepFunction;

pub fn cmd_lemma2(p: &Params) -> Result<VerificationReport> {
    let n_steps: usize = p.get("n", 200)?;
    let iterates: usize = p.get("iterates", 6)?;
    let tail_tol: f64 = p.get("tail-tol", DEFAULT_TAIL_TOL)?;
    if n_steps < 2 {
        return Err(Error::InvalidArgument("need at least 2 steps".into()));
    }
    let mut b = ReportBuilder::new("lemma2", "Lemma 2: a_1 = 1/e, a_{k+1} = e^{a_k − 1} increases to 1; a_k = mes{t: K^k 1(t) = 0}");
    b.param("n_steps", n_steps).param("iterates", iterates).param("tail_tol", tail_tol);
    let a = support_iteration(n_steps);
    b.row(EvidenceRow::check(
        "a_1 equals exp(-1) bitwise",
        a[0].to_bits() == (-1.0f64).exp().to_bits(),
    ));
    let drops = a.windows(2).filter(|w| !(w[1] > w[0])).count();
    b.row(EvidenceRow::check(format!("strictly increasing over {n_steps} steps ({drops} non-increases)"), drops == 0));
    b.row(EvidenceRow::check("bounded by 1", a.iter().all(|&x| x < 1.0)));
    if let Some(k) = a.iter().position(|&x| x > 0.99) {
        b.note(format!("first step above 0.99: k = {}", k + 1));
    }
    if n_steps >= 200 {
        b.row(EvidenceRow::ge("a_200 > 0.99", Scalar::Approx(a[199]), Scalar::Approx(0.99), Scalar::zero()));
    }
    let laws: Vec<(usize, DiscreteDistribution)> = (1..=iterates.min(n_steps))
        .into_par_iter()
        .map(|k| Ok((k, kruglov_iterate(k, tail_tol, DEFAULT_PRUNE)?)))
        .collect::<Result<_>>()?;
    for (k, law) in laws {
        let tol = if k <= 4 { 1e-9 } else { 1e-6 };
        let at_zero = law.mass_at(&Scalar::zero());
        b.row(EvidenceRow::eq(
            format!("k={k} mass of K^k 1 at zero (tail {:.1e})", law.tail()),
            at_zero,
            Scalar::Approx(a[k - 1]),
            Scalar::Approx(tol + law.tail()),
        ));
    }
    Ok(b.finish())
}

/// Worst excess of `K g_ε` over `g_ε / ε` in the submajorization order,
/// together with the slack it must stay under.
pub struct Keystone {
    pub excess: Scalar,
    pub tau: Scalar,
    pub slack: f64,
    pub missing_mean: f64,
}

/// `g_ε` is rounded up onto a `1/grid` lattice before `K` is applied; the
/// mass `K` loses to truncation and pruning is bounded through its mean,
/// which `K` preserves.
pub fn keystone(g: &EpsilonGauge, grid: u64, tail_tol: f64, prune: f64) -> Result<Keystone> {
    let up = DiscreteDistribution::law_of(&g.density).round_up_to_grid(grid);
    let kg = kruglov_dist_pruned(&up, tail_tol, Some(prune))?;
    let missing_mean = (up.mean().to_f64() - kg.mean().to_f64()).max(0.0);
    let lhs = kg.quantile_tail_at_zero()?;
    let rhs = g.density.scale(&g.epsilon.powi(-1));
    let (excess, tau) = StepFunction::majorization_excess(&rhs, &lhs);
    let e = g.epsilon.to_f64();
    let slack = e.powi(g.n_max as i32 + 1) / (1.0 - e) + missing_mean + g.missing_l1() / e;
    Ok(Keystone { excess, tau, slack, missing_mean })
}

/// `g_ε(0+) / g_δ(0+)` using only the terms `n <= level`.
fn head_ratio(iterates: &[DiscreteDistribution], eps: f64, delta: f64, level: usize) -> f64 {
    let (mut num, mut den) = (1.0, 1.0);
    for (i, d) in iterates.iter().take(level).enumerate() {
        let h0 = d.max_value().map_or(0.0, Scalar::to_f64);
        num += eps.powi(i as i32 + 1) * h0;
        den += delta.powi(i as i32 + 1) * h0;
    }
    num / den
}

pub fn cmd_theorem1(p: &Params) -> Result<VerificationReport> {
    let eps = p.scalar_list("eps", &["1/10", "1/5", "3/10"])?;
    let n_max: usize = p.get("n", 6)?;
    let tail_tol: f64 = p.get("tail-tol", DEFAULT_TAIL_TOL)?;
    let prune: f64 = p.get("prune", DEFAULT_PRUNE)?;
    let grid: u64 = p.get("grid", 4096)?;
    let mut b = ReportBuilder::new(
        "theorem1",
        "Theorem 1: ψ_ε(t) = ∫_0^t Σ ε^n (K^n 1)^* defines Marcinkiewicz spaces M_{ψ_ε} invariant under K, pairwise non-equivalent",
    );
    b.param("eps", eps.iter().map(Scalar::to_string).collect::<Vec<_>>().join(","))
        .param("n_max", n_max)
        .param("tail_tol", tail_tol)
        .param("prune", prune)
        .param("grid", grid);
    let gauges: Vec<EpsilonGauge> = eps
        .par_iter()
        .map(|e| build_epsilon_gauge(e, n_max, tail_tol, prune))
        .collect::<Result<_>>()?;
    for g in &gauges {
        let label = format!("eps={}", g.epsilon);
        b.row(EvidenceRow::check(
            format!("{label} gauge increasing, concave, zero at zero"),
            g.gauge.check_invariants().is_ok(),
        ));
        let psi1 = g.gauge.eval_f64(1.0);
        b.row(EvidenceRow::eq(
            format!("{label} psi(1) against geometric total less truncated mass"),
            Scalar::Approx(psi1),
            Scalar::Approx(g.geometric_total() - g.missing_l1()),
            Scalar::Approx(1e-9),
        ));
        b.row(EvidenceRow::info(
            format!("{label} truncated L1 mass of the iterates"),
            Scalar::Approx(g.missing_l1()),
            Scalar::Approx(g.remainder_bound),
        ));
        let k = keystone(g, grid, tail_tol, prune)?;
        b.row(EvidenceRow::le(
            format!("{label} K g submajorized by g/eps (worst tau={}, missing mean {:.2e})", k.tau, k.missing_mean),
            k.excess,
            Scalar::zero(),
            Scalar::Approx(k.slack),
        ));
    }
    for (i, gi) in gauges.iter().enumerate() {
        for gj in &gauges[i + 1..] {
            let (small, big) = if gi.epsilon < gj.epsilon { (gi, gj) } else { (gj, gi) };
            let label = format!("eps={} delta={}", small.epsilon, big.epsilon);
            let mut points = small.density.breakpoints();
            points.extend(big.density.breakpoints());
            let (mut worst_t, mut worst_gap) = (0.0, f64::NEG_INFINITY);
            for t in points.iter().map(Scalar::to_f64).filter(|t| *t > 0.0) {
                let gap = small.gauge.eval_f64(t) - big.gauge.eval_f64(t);
                if gap > worst_gap {
                    worst_gap = gap;
                    worst_t = t;
                }
            }
            b.row(EvidenceRow::le(
                format!("{label} psi_eps <= psi_delta (worst t={worst_t:.6e})"),
                Scalar::Approx(small.gauge.eval_f64(worst_t)),
                Scalar::Approx(big.gauge.eval_f64(worst_t)),
                Scalar::Approx(1e-12),
            ));
            let (e, d) = (small.epsilon.to_f64(), big.epsilon.to_f64());
            let levels: Vec<usize> = (n_max.saturating_sub(2).max(1)..=n_max).collect();
            let ratios: Vec<f64> = levels.iter().map(|&l| head_ratio(&small.iterates, e, d, l)).collect();
            for (w, l) in ratios.windows(2).zip(&levels[1..]) {
                b.row(EvidenceRow::check(
                    format!("{label} g_eps(0+)/g_delta(0+) decreases at level {l}: {:.6e} -> {:.6e}", w[0], w[1]),
                    w[1] < w[0],
                ));
            }
        }
    }
    Ok(b.finish())
}

pub fn theorem8_default_battery() -> &'static str {
    "1;1,2;3,1,0,2;1,1,1,1;5,0,0,1"
}

pub fn cmd_theorem8(p: &Params) -> Result<VerificationReport> {
    let battery = match p.vectors("a")? {
        Some(v) => v,
        None => super::parse_vectors(p.raw("battery").unwrap_or(theorem8_default_battery()))?,
    };
    let ns: Vec<usize> = p.list("n", &[1, 2, 3, 4, 6, 8, 12])?;
    let spaces: Vec<NormSpec> = match p.raw("space") {
        Some(s) => s.split(';').map(str::parse).collect::<Result<_>>()?,
        None => ["l1", "lorentz:power:1/2", "marcinkiewicz:power:1/2", "orlicz:1"]
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?,
    };
    let m_max: usize = p.get("m-max", 8)?;
    let budget: usize = p.get("budget", 32)?;
    let tail_tol: f64 = p.get("tail-tol", DEFAULT_TAIL_TOL)?;
    let tol: f64 = p.get("tol", DEFAULT_TOL)?;
    if let Some(n) = ns.iter().find(|&&n| n == 0 || n > 12) {
        return Err(Error::Budget(format!("n = {n} outside 1..=12")));
    }
    let mut b = ReportBuilder::new(
        "theorem8",
        "Theorem 8: for symmetric E, ‖T_n x‖_E ≤ C ‖Kx‖_E uniformly in n, and ‖Kx‖_E ≥ e^{-1} ‖x‖_E",
    );
    b.param("battery", battery.iter().map(|a| show_vector(a)).collect::<Vec<_>>().join(";"))
        .param("n", ns.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .param("spaces", spaces.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"))
        .param("m_max", m_max)
        .param("budget", budget)
        .param("tail_tol", tail_tol)
        .param("tol", tol);
    warm_tables(budget.max(12));
    let inv_e = (-1.0f64).exp();
    let twelve = Scalar::int(12);
    let three = Scalar::int(3);

    for a in &battery {
        let f = StepFunction::from_vector(a)?;
        let label = show_vector(a);
        let k = kruglov_dist(&DiscreteDistribution::law_of(&f), tail_tol)?;
        let qk = k.quantile_tail_at_zero()?;
        let k2 = k.scale_values(&Scalar::int(2));
        let norms_f: Vec<f64> = spaces.iter().map(|s| s.eval(&f, tol)).collect::<Result<_>>()?;
        for (s, nf) in spaces.iter().zip(&norms_f) {
            let nk = s.eval(&qk, tol)?;
            let rel = if s.is_iterative() { 2.0 * tol } else { 1e-12 };
            b.row(EvidenceRow::ge(
                format!("a={label} {s} Kruglov lower bound"),
                Scalar::Approx(nk),
                Scalar::Approx(inv_e * nf),
                Scalar::Approx(inv_e * nf * rel + 1e-15),
            ));
        }
        let per_n: Vec<Vec<EvidenceRow>> = ns
            .par_iter()
            .map(|&n| -> Result<Vec<EvidenceRow>> {
                let mut rows = Vec::new();
                let x = f.average_vector(n)?;
                let t = t_n_dist(&x)?;
                let qt = t.quantile()?;
                for (s, nf) in spaces.iter().zip(&norms_f) {
                    let nt = s.eval(&qt, tol)?;
                    let nk = s.eval(&qk, tol)?;
                    let (rt, rk) = if *nf == 0.0 { (0.0, 0.0) } else { (nt / nf, nk / nf) };
                    rows.push(EvidenceRow::info(
                        format!("a={label} n={n} {s} r_T={rt:.6} r_K={rk:.6}"),
                        Scalar::Approx(nt),
                        Scalar::Approx(nk),
                    ));
                    if matches!(s, NormSpec::L1) {
                        rows.push(EvidenceRow::eq(
                            format!("a={label} n={n} T_n preserves the L1 norm"),
                            qt.l1_norm(),
                            f.l1_norm(),
                            Scalar::zero(),
                        ));
                    }
                }
                let mut m = 1;
                while m <= m_max && n * m <= budget {
                    let h = h_m_dist(&x, m)?.quantile()?;
                    let tnm = t_n_dist(&repeat_vector(&x, m))?.quantile()?;
                    for s in &spaces {
                        let nh = s.eval(&h, tol)?;
                        let ntm = s.eval(&tnm, tol)?;
                        let rel = if s.is_iterative() { 2.0 * tol } else { 1e-12 };
                        rows.push(EvidenceRow::le(
                            format!("a={label} n={n} m={m} {s} H_m bounded by 3 T_nm"),
                            Scalar::Approx(nh),
                            Scalar::Approx(3.0 * ntm),
                            Scalar::Approx(3.0 * ntm * rel + 1e-15),
                        ));
                    }
                    let scan = ccdf_scan(&h_m_dist(&x, m)?, &t_n_dist(&repeat_vector(&x, m))?, &three);
                    rows.push(EvidenceRow::le(
                        format!("a={label} n={n} m={m} distribution of H_m against 3 T_nm (tau={})", scan.tau),
                        scan.lhs,
                        scan.rhs,
                        Scalar::zero(),
                    ));
                    m *= 2;
                }
                let scan = ccdf_scan(&t, &k2, &twelve);
                rows.push(EvidenceRow::le(
                    format!("a={label} n={n} distribution of T_n against 12 (2K) (tau={})", scan.tau),
                    scan.lhs,
                    scan.rhs,
                    Scalar::zero(),
                ));
                Ok(rows)
            })
            .collect::<Result<_>>()?;
        b.rows(per_n.into_iter().flatten());
    }
    b.note("Kruglov laws use the lower bound with unrepresented mass placed at zero");
    Ok(b.finish())
}
