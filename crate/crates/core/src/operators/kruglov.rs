//! The Kruglov operator: compound Poisson law with rate one,
//! `Kμ = Σ_n e^{-1}/n! · μ^{*n}`, truncated with a certified tail.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::dist::lattice::{common_grid, FloatPmf};
use crate::dist::{Atom, DiscreteDistribution};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_PRUNE: f64 = 1e-15;

/// Upper bound on `Σ_{n>N} 1/(e·n!)`: the geometric majorant
/// `1/(e(N+1)!) · (N+2)/(N+1)`.
pub fn poisson_tail_bound(n: usize) -> f64 {
    let mut f = 1.0f64;
    for k in 1..=n + 1 {
        f *= k as f64;
    }
    let b = (-1.0f64).exp() / f * (n as f64 + 2.0) / (n as f64 + 1.0);
    // absorb rounding in the factorial product
    b * (1.0 + 1e-12)
}

/// Smallest `N` whose truncated Poisson tail is certified below `tail_tol`,
/// together with that bound.
pub fn truncation_level(tail_tol: f64) -> Result<(usize, f64)> {
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tail_tol must be positive, got {tail_tol}")));
    }
    let mut n = 0;
    loop {
        let b = poisson_tail_bound(n);
        if b < tail_tol {
            return Ok((n, b));
        }
        n += 1;
    }
}

/// `Kμ` with series truncation below `tail_tol`; see [`kruglov_dist_pruned`].
pub fn kruglov_dist(mu: &DiscreteDistribution, tail_tol: f64) -> Result<DiscreteDistribution> {
    kruglov_dist_pruned(mu, tail_tol, None)
}

/// `Kμ`; atoms of mass below `prune` (if given) are moved to the tail.
///
/// The output tail bounds the truncated Poisson weight plus `μ.tail`: with
/// `t = μ.tail`, the unrepresented part of `μ^{*n}` has mass at most `n·t`
/// and `Σ n/(e·n!) = 1`.
pub fn kruglov_dist_pruned(
    mu: &DiscreteDistribution,
    tail_tol: f64,
    prune: Option<f64>,
) -> Result<DiscreteDistribution> {
    let (levels, bound) = truncation_level(tail_tol)?;
    for a in mu.atoms() {
        if !a.value.is_exact() {
            return Err(Error::Inexact("atom value"));
        }
        if a.value.is_negative() {
            return Err(Error::InvalidArgument("Kruglov operator expects nonnegative values".into()));
        }
    }
    let tail = mu.tail() + bound;

    let weights: Vec<f64> = std::iter::successors(Some((-1.0f64).exp()), {
        let mut k = 0u32;
        move |w| {
            k += 1;
            Some(w / k as f64)
        }
    })
    .take(levels + 1)
    .collect();

    if let Some(l) = common_grid(&[mu], levels.max(1)) {
        if let Some(base) = FloatPmf::from_dist(mu, &l) {
            return Ok(lattice_kruglov(&base, &weights, tail, prune, &l));
        }
    }

    let mut atoms = vec![Atom::new(Scalar::zero(), Scalar::Approx(weights[0]))];
    let mut power = DiscreteDistribution::delta(Scalar::zero());
    for w in &weights[1..] {
        power = power.convolve(mu);
        atoms.extend(
            power
                .atoms()
                .iter()
                .map(|a| Atom::new(a.value.clone(), Scalar::Approx(a.mass.to_f64() * w))),
        );
    }
    let out = DiscreteDistribution::from_unsorted(atoms, tail);
    Ok(match prune {
        Some(theta) => out.prune(theta),
        None => out,
    })
}

fn lattice_kruglov(
    base: &FloatPmf,
    weights: &[f64],
    tail: f64,
    prune: Option<f64>,
    l: &BigInt,
) -> DiscreteDistribution {
    let mut acc = FloatPmf::delta(0);
    acc.masses[0] = weights[0];
    let mut power = FloatPmf::delta(0);
    for &w in &weights[1..] {
        power = power.convolve(base);
        acc.add_scaled(&power, w);
    }
    let mut tail = tail;
    let mut range = None;
    if let Some(theta) = prune {
        let (mass, _, r) = acc.prune(theta);
        tail += mass;
        let lf = l.to_f64().unwrap_or(f64::INFINITY);
        range = r.map(|(a, b)| (a as f64 / lf, b as f64 / lf));
    } else {
        acc.trim();
    }
    acc.into_dist(l, tail).with_pruned_range(range)
}

/// Law of `K^n 1`, pruning at `prune` after every application.
pub fn kruglov_iterate(n: usize, tail_tol: f64, prune: f64) -> Result<DiscreteDistribution> {
    if n == 0 {
        return Err(Error::InvalidArgument("iteration count must be >= 1".into()));
    }
    let mut d = DiscreteDistribution::delta(Scalar::one());
    for _ in 0..n {
        d = kruglov_dist_pruned(&d, tail_tol, Some(prune))?;
    }
    Ok(d)
}

/// `a_1 = 1/e`, `a_{k+1} = e^{a_k - 1}`: the mass of `K^k 1` at zero.
pub fn support_iteration(n: usize) -> Vec<f64> {
    std::iter::successors(Some((-1.0f64).exp()), |a| Some((a - 1.0).exp()))
        .take(n)
        .collect()
}
