//! The Lorentz-space criterion `M = sup_t φ(t)^{-1} Σ_k φ(t^k/k!)` and the
//! dyadic sums that accompany it.

use rayon::prelude::*;

use super::gauge::ConcaveGauge;

pub const DIVERGENCE_CAP: f64 = 1e6;
/// Terms evaluated per grid point before giving up on certification.
pub const MAX_TERMS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionEstimate {
    /// Estimated `M`; `+∞` once the running maximum passed the cap.
    pub value: f64,
    pub argmax: f64,
    /// Whether every grid point's series tail was certified below tolerance.
    pub certified: bool,
}

/// `(Σ_k φ(t^k/k!) / φ(t), certified)`, with tail certified by
/// `φ(u) <= φ(u_0) u / u_0` for `u <= u_0`.
fn series_ratio(phi: &ConcaveGauge, t: f64, tol: f64, cap: f64) -> (f64, bool) {
    let phi_t = phi.eval_f64(t);
    let ln_t = t.ln();
    let mut ln_u = 0.0;
    let mut sum = 0.0;
    for k in 1..=MAX_TERMS {
        ln_u += ln_t - (k as f64).ln();
        let u = ln_u.exp();
        if u == 0.0 {
            return (sum, true);
        }
        let term = phi.eval_f64(u) / phi_t;
        sum += term;
        if sum > cap {
            return (f64::INFINITY, true);
        }
        let next = u * t / (k as f64 + 1.0);
        let rest = next / (1.0 - t / (k as f64 + 2.0));
        if term / u * rest <= tol * sum {
            return (sum, true);
        }
    }
    (sum, false)
}

/// Grid points `j / grid_size` plus the dyadic points `2^{-j}`, `j <= 60`.
pub fn criterion_grid(grid_size: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (1..=grid_size).map(|j| j as f64 / grid_size as f64).collect();
    pts.extend((1..=60).map(|j| 0.5f64.powi(j)));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

pub fn kruglov_criterion(phi: &ConcaveGauge, grid_size: usize, series_tol: f64) -> CriterionEstimate {
    kruglov_criterion_capped(phi, grid_size, series_tol, DIVERGENCE_CAP)
}

pub fn kruglov_criterion_capped(phi: &ConcaveGauge, grid_size: usize, series_tol: f64, cap: f64) -> CriterionEstimate {
    let grid = criterion_grid(grid_size.max(64));
    let values: Vec<(f64, bool)> = grid
        .par_iter()
        .map(|&t| series_ratio(phi, t, series_tol, cap))
        .collect();
    let mut best = CriterionEstimate {
        value: 0.0,
        argmax: grid[0],
        certified: true,
    };
    for (&t, &(v, ok)) in grid.iter().zip(&values) {
        best.certified &= ok;
        if v >= best.value {
            best.value = v;
            best.argmax = t;
        }
    }
    best
}

/// `Σ_{k=1}^N φ(2^{-k})`.
pub fn dyadic_gauge_sum(phi: &ConcaveGauge, n: usize) -> f64 {
    (1..=n).map(|k| phi.eval_f64(0.5f64.powi(k as i32))).sum()
}

/// `Σ_{k=1}^N (k+1)(φ(2^{1-k}) - φ(2^{-k}))`, bounding `‖log_2(2/t)‖` in `Λ_φ`.
pub fn log_in_lorentz(phi: &ConcaveGauge, n: usize) -> f64 {
    (1..=n)
        .map(|k| {
            let hi = phi.eval_f64(0.5f64.powi(k as i32 - 1));
            let lo = phi.eval_f64(0.5f64.powi(k as i32));
            (k as f64 + 1.0) * (hi - lo)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_gauge_gives_e_minus_one() {
        let g: ConcaveGauge = "power:1".parse().unwrap();
        let est = kruglov_criterion(&g, 1024, 1e-14);
        assert!((est.value - (std::f64::consts::E - 1.0)).abs() < 1e-6);
        assert_eq!(est.argmax, 1.0);
        assert!(est.certified);
    }

    #[test]
    fn square_root_gauge_matches_direct_series() {
        let g: ConcaveGauge = "power:1/2".parse().unwrap();
        let est = kruglov_criterion(&g, 1024, 1e-14);
        let mut f = 1.0f64;
        let direct: f64 = (1..60)
            .map(|k| {
                f *= k as f64;
                1.0 / f.sqrt()
            })
            .sum();
        assert!((est.value - direct).abs() < 1e-9, "{} vs {direct}", est.value);
        assert_eq!(est.argmax, 1.0);
        assert!(est.value >= 1.0);
    }

    #[test]
    fn cap_reports_infinity() {
        let g: ConcaveGauge = "power:1/2".parse().unwrap();
        let est = kruglov_criterion_capped(&g, 64, 1e-12, 1.5);
        assert!(est.value.is_infinite());
    }

    #[test]
    fn dyadic_sums() {
        let id: ConcaveGauge = "power:1".parse().unwrap();
        assert!((dyadic_gauge_sum(&id, 60) - 1.0).abs() < 1e-15);
        let half: ConcaveGauge = "power:1/2".parse().unwrap();
        let r = 0.5f64.sqrt();
        let partial = r * (1.0 - r.powi(20)) / (1.0 - r);
        assert!((dyadic_gauge_sum(&half, 20) - partial).abs() < 1e-12);
        assert!((dyadic_gauge_sum(&half, 40) - (1.0 + 2f64.sqrt())).abs() < 1e-3);
        let mut prev = 0.0;
        for n in 1..30 {
            let s = log_in_lorentz(&id, n);
            assert!(s >= prev);
            prev = s;
        }
        assert!((log_in_lorentz(&id, 80) - 3.0).abs() < 1e-12);
        assert!(log_in_lorentz(&half, 40) <= 2.0 + 2.415);
    }
}
