//! The family `ψ_ε(t) = ∫_0^t g_ε` with `g_ε = Σ_{n<=n_max} ε^n h_n`, where
//! `h_n` is the decreasing rearrangement of `K^n 1` and `h_0 = 1`.

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::operators::kruglov_dist_pruned;
use crate::stepfn::StepFunction;

use super::gauge::ConcaveGauge;

pub struct EpsilonGauge {
    pub epsilon: Scalar,
    pub n_max: usize,
    pub gauge: ConcaveGauge,
    pub density: StepFunction,
    /// Laws of `K^n 1` for `n = 1..=n_max`.
    pub iterates: Vec<DiscreteDistribution>,
    /// `ε^{n_max+1} / (1 - ε)`: L1 mass of the dropped terms.
    pub remainder_bound: f64,
}

impl EpsilonGauge {
    /// `Σ_{n<=n_max} ε^n`, the value `ψ_ε(1)` would take with exact `h_n`.
    pub fn geometric_total(&self) -> f64 {
        let e = self.epsilon.to_f64();
        (1.0 - e.powi(self.n_max as i32 + 1)) / (1.0 - e)
    }

    /// `Σ ε^n · (1 - ‖h_n‖_1)`: how far the computed density falls short of
    /// the geometric total because of truncated iterates.
    pub fn missing_l1(&self) -> f64 {
        let e = self.epsilon.to_f64();
        self.iterates
            .iter()
            .enumerate()
            .map(|(i, d)| e.powi(i as i32 + 1) * (1.0 - d.mean().to_f64()).max(0.0))
            .sum()
    }
}

pub fn build_epsilon_gauge(epsilon: &Scalar, n_max: usize, tail_tol: f64, prune: f64) -> Result<EpsilonGauge> {
    if !epsilon.is_positive() || epsilon.cmp_num(&Scalar::one()) != std::cmp::Ordering::Less {
        return Err(Error::InvalidArgument(format!("ε = {epsilon} outside (0,1)")));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    let mut density = StepFunction::constant(Scalar::one());
    let mut iterates = Vec::with_capacity(n_max);
    let mut law = DiscreteDistribution::delta(Scalar::one());
    let mut weight = Scalar::one();
    for _ in 1..=n_max {
        law = kruglov_dist_pruned(&law, tail_tol, Some(prune))?;
        weight = &weight * epsilon;
        let h = law.quantile_tail_at_zero()?;
        density = density.zip_with(&h.scale(&weight), |a, b| a + b);
        iterates.push(law.clone());
    }
    let e = epsilon.to_f64();
    let gauge = ConcaveGauge::tabulated(density.clone(), format!("eps-family:{epsilon}:{n_max}"))?;
    Ok(EpsilonGauge {
        epsilon: epsilon.clone(),
        n_max,
        gauge,
        density,
        iterates,
        remainder_bound: e.powi(n_max as i32 + 1) / (1.0 - e),
    })
}
