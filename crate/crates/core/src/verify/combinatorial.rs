use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use super::params::{parse_vectors, show_vector, Params};
use super::report::{EvidenceRow, ReportBuilder, VerificationReport};
use super::{ccdf_scan, random_int_vector, rng, DEFAULT_SEED};
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, rational_from_uint, warm_tables, Scalar};
use crate::operators::{a_n_matrix_dist, h_m_dist, repeat_vector, t_n_dist};
use crate::spaces::NormSpec;
use crate::stepfn::StepFunction;

/// Largest `n · m` for the exact `T_{nm}` check.
pub const LEMMA5_BUDGET: usize = 16;

pub fn cmd_lemma5(p: &Params) -> Result<VerificationReport> {
    let n_max: usize = p.get("n", 4)?;
    let m_max: usize = p.get("m-max", 4)?;
    let trials: usize = p.get("trials", 100)?;
    let cap: u64 = p.get("value-cap", 8)?;
    let seed: u64 = p.get("seed", DEFAULT_SEED)?;
    if n_max * m_max > LEMMA5_BUDGET {
        return Err(Error::Budget(format!(
            "n_max * m_max = {} exceeds the exact T_nm budget of {LEMMA5_BUDGET}",
            n_max * m_max
        )));
    }
    let mut b = ReportBuilder::new("lemma5", "Lemma 5: mes{t: H_m a(t) > τ} ≤ 3 mes{t: T_{nm} b(t) > τ}");
    b.param("n_max", n_max).param("m_max", m_max).param("trials", trials).param("value_cap", cap).param("seed", seed);
    warm_tables(n_max * m_max);

    let three = Scalar::int(3);
    let mut checked = 0;
    for n in 1..=n_max {
        let mut r = rng(seed, n as u64);
        let vectors: Vec<Vec<Scalar>> = (0..trials).map(|_| random_int_vector(&mut r, n, cap)).collect();
        for m in 1..=m_max {
            let scans: Vec<(usize, super::CcdfScan)> = vectors
                .par_iter()
                .enumerate()
                .map(|(i, a)| {
                    let h = h_m_dist(a, m)?;
                    let t = t_n_dist(&repeat_vector(a, m))?;
                    Ok((i, ccdf_scan(&h, &t, &three)))
                })
                .collect::<Result<_>>()?;
            checked += scans.iter().map(|s| s.1.checked).sum::<usize>();
            let violations: usize = scans.iter().map(|s| s.1.violations).sum();
            let (i, worst) = scans
                .into_iter()
                .max_by(|x, y| (&x.1.lhs - &x.1.rhs).cmp_num(&(&y.1.lhs - &y.1.rhs)))
                .expect("trials >= 1");
            b.row(EvidenceRow::le(
                format!("n={n} m={m} a={} tau={} (worst of {trials}; {violations} violations)", show_vector(&vectors[i]), worst.tau),
                worst.lhs,
                worst.rhs,
                Scalar::zero(),
            ));
        }
    }
    b.note(format!("{checked} exact (a, m, τ) comparisons"));
    Ok(b.finish())
}

/// `(n-k)!/n!` and `2 (k-1)!/n^k`.
pub fn lemma6_sides(n: usize, k: usize) -> (BigRational, BigRational) {
    let lhs = BigRational::new(factorial(n - k).into(), factorial(n).into());
    let rhs = BigRational::new(
        (factorial(k - 1) * BigUint::from(2u32)).into(),
        BigUint::from(n).pow(k as u32).into(),
    );
    (lhs, rhs)
}

pub fn cmd_lemma6(p: &Params) -> Result<VerificationReport> {
    let n_max: usize = p.get("n", 200)?;
    if n_max < 4 {
        return Err(Error::InvalidArgument("n_max must be >= 4".into()));
    }
    let mut b = ReportBuilder::new("lemma6", "Lemma 6: (n−k)!/n! ≤ 2 (k−1)!/n^k for n ≥ 4, k ≤ n");
    b.param("n_max", n_max);
    warm_tables(n_max);
    let rows: Vec<EvidenceRow> = (4..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut worst: Option<(BigRational, usize, BigRational, BigRational)> = None;
            let mut violations = 0;
            for k in 1..=n {
                let (l, r) = lemma6_sides(n, k);
                if l > r {
                    violations += 1;
                }
                let ratio = &l / &r;
                if worst.as_ref().map_or(true, |w| ratio > w.0) {
                    worst = Some((ratio, k, l, r));
                }
            }
            let (_, k, l, r) = worst.expect("n >= 4");
            EvidenceRow::le(
                format!("n={n} worst k={k} ({violations} violations over k=1..{n})"),
                Scalar::Exact(l),
                Scalar::Exact(r),
                Scalar::zero(),
            )
        })
        .collect();
    b.rows(rows);
    Ok(b.finish())
}

pub fn lemma7_default_cases() -> Vec<Vec<Scalar>> {
    parse_vectors("1;1,1;1,2;1,1,1;1,2,3").expect("static cases")
}

/// First `m <= m_max` for which `ccdf(T_n a) <= 12 ccdf(2 H_m a)` at every `τ`.
pub fn lemma7_witness(a: &[Scalar], m_max: usize) -> Result<Option<usize>> {
    let t = t_n_dist(a)?;
    let twelve = Scalar::int(12);
    for m in 1..=m_max {
        let h2 = h_m_dist(a, m)?.scale_values(&Scalar::int(2));
        if ccdf_scan(&t, &h2, &twelve).violations == 0 {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

pub fn cmd_lemma7(p: &Params) -> Result<VerificationReport> {
    let m_max: usize = p.get("m-max", 64)?;
    let cases = match (p.vectors("a")?, p.raw("n")) {
        (Some(v), _) => v,
        (None, Some(_)) => p
            .list::<usize>("n", &[])?
            .into_iter()
            .map(|n| vec![Scalar::one(); n])
            .collect(),
        (None, None) => lemma7_default_cases(),
    };
    if let Some(a) = cases.iter().find(|a| a.len() > 12) {
        return Err(Error::Budget(format!("vector of length {} exceeds n <= 12", a.len())));
    }
    let mut b = ReportBuilder::new("lemma7", "Lemma 7: mes{t: T_n a(t) > τ} ≤ 12 mes{t: 2 H_m a(t) > τ} for every sufficiently large m");
    b.param("m_max", m_max)
        .param("cases", cases.iter().map(|a| show_vector(a)).collect::<Vec<_>>().join(";"));
    let twelve = Scalar::int(12);
    let results: Vec<(Vec<Scalar>, Option<usize>)> = cases
        .par_iter()
        .map(|a| Ok((a.clone(), lemma7_witness(a, m_max)?)))
        .collect::<Result<_>>()?;
    let mut missing = Vec::new();
    for (a, witness) in results {
        let label = show_vector(&a);
        match witness {
            Some(m) => {
                let t = t_n_dist(&a)?;
                let h2 = h_m_dist(&a, m)?.scale_values(&Scalar::int(2));
                let s = ccdf_scan(&t, &h2, &twelve);
                b.row(EvidenceRow::le(format!("a={label} witness m={m} tau={}", s.tau), s.lhs, s.rhs, Scalar::zero()));
                for later in [2 * m, 4 * m] {
                    let h2 = h_m_dist(&a, later)?.scale_values(&Scalar::int(2));
                    let s = ccdf_scan(&t, &h2, &twelve);
                    b.row(EvidenceRow::info(
                        format!("a={label} consistency m={later} tau={} violations={}", s.tau, s.violations),
                        s.lhs,
                        s.rhs,
                    ));
                }
            }
            None => missing.push(label),
        }
    }
    if !missing.is_empty() {
        b.inconclusive(format!("no witness m <= {m_max} for {}", missing.join(", ")));
    }
    Ok(b.finish())
}

pub fn cmd_remark(p: &Params) -> Result<VerificationReport> {
    let ns: Vec<usize> = p.list("n", &[1, 2, 3, 4, 5, 6, 7, 8])?;
    if let Some(n) = ns.iter().find(|&&n| n == 0 || n > 10) {
        return Err(Error::Budget(format!("n = {n} outside 1..=10")));
    }
    let mut b = ReportBuilder::new(
        "remark-counterexample",
        "Remark after Lemma 7: mes{t: T_n a(t) = n} = 1/n! while mes{t: H_n a(t) = n} = 1/n^n",
    );
    b.param("n", ns.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    let mut prev_ratio: Option<Scalar> = None;
    for &n in &ns {
        let ones = vec![Scalar::one(); n];
        let top = Scalar::int(n as i64);
        let t_mass = t_n_dist(&ones)?.mass_at(&top);
        let h_mass = h_m_dist(&ones, n)?.mass_at(&top);
        let nf = rational_from_uint(&factorial(n));
        let nn = rational_from_uint(&BigUint::from(n).pow(n as u32));
        b.row(EvidenceRow::eq(format!("n={n} T_n mass at n"), t_mass, Scalar::Exact(nf.recip()), Scalar::zero()));
        b.row(EvidenceRow::eq(format!("n={n} H_n mass at n"), h_mass, Scalar::Exact(nn.recip()), Scalar::zero()));
        let ratio = Scalar::Exact(&nf / &nn);
        if let Some(prev) = &prev_ratio {
            b.row(EvidenceRow::le(format!("n={n} n!/n^n decreasing"), ratio.clone(), prev.clone(), Scalar::zero()));
        }
        prev_ratio = Some(ratio);
    }
    Ok(b.finish())
}

/// `(Σ_{i∈U} r_i)^p` and `Σ_{i∈U} r_i^p` over the subset encoded by `mask`.
fn subset_sides(r: &[Scalar], p: u32, mask: u32) -> (Scalar, Scalar) {
    let mut s = Scalar::zero();
    let mut s_p = Scalar::zero();
    for (i, v) in r.iter().enumerate() {
        if mask >> i & 1 == 1 {
            s = &s + v;
            s_p = &s_p + &v.powi(p as i32);
        }
    }
    (s.powi(p as i32), s_p)
}

pub fn cmd_corollary13(p: &Params) -> Result<VerificationReport> {
    let ps: Vec<f64> = p.list("p", &[2.0, 3.0])?;
    let n_max: usize = p.get("n", 12)?;
    let trials: usize = p.get("trials", 20)?;
    let cap: u64 = p.get("value-cap", 8)?;
    let seed: u64 = p.get("seed", DEFAULT_SEED)?;
    if n_max == 0 || n_max > 20 {
        return Err(Error::Budget(format!("n = {n_max} outside 1..=20 for exhaustive subsets")));
    }
    if let Some(q) = ps.iter().find(|&&q| !(q >= 1.0)) {
        return Err(Error::InvalidArgument(format!("p = {q} must be >= 1")));
    }
    let mut b = ReportBuilder::new("corollary13", "Corollary 13: (T_n y^{1/p})^p ≥ T_n y");
    b.param("p", ps.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
        .param("n", n_max)
        .param("trials", trials)
        .param("value_cap", cap)
        .param("seed", seed);
    let mut r = rng(seed, 13);
    // y_i = r_i^p with rational r_i, so integer p gives exact arithmetic
    let roots: Vec<Vec<Scalar>> = (0..trials)
        .map(|_| {
            (0..n_max)
                .map(|_| Scalar::ratio(r.gen_range(0..=cap) as i64, r.gen_range(1..=cap.max(1)) as i64))
                .collect()
        })
        .collect();
    for &q in &ps {
        let rows: Vec<EvidenceRow> = roots
            .par_iter()
            .enumerate()
            .map(|(trial, rv)| {
                let masks = 0u32..(1u32 << rv.len());
                let (mut violations, mut worst): (usize, Option<(f64, u32, Scalar, Scalar)>) = (0, None);
                for mask in masks {
                    let (lhs, rhs) = if q.fract() == 0.0 {
                        subset_sides(rv, q as u32, mask)
                    } else {
                        let (s, s_p) = (0..rv.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .fold((0.0, 0.0), |(a, c), i| {
                                let v = rv[i].to_f64();
                                (a + v, c + v.powf(q))
                            });
                        (Scalar::Approx(s.powf(q)), Scalar::Approx(s_p))
                    };
                    let slack = if lhs.is_exact() { 0.0 } else { 1e-12 * rhs.to_f64().abs() };
                    if (&lhs + &Scalar::Approx(slack)) < rhs {
                        violations += 1;
                    }
                    let ratio = if rhs.is_zero() { f64::INFINITY } else { lhs.to_f64() / rhs.to_f64() };
                    if mask.count_ones() >= 2 && worst.as_ref().map_or(true, |w| ratio < w.0) {
                        worst = Some((ratio, mask, lhs, rhs));
                    }
                }
                let (_, mask, lhs, rhs) = worst.unwrap_or((1.0, 0, Scalar::zero(), Scalar::zero()));
                let slack = if lhs.is_exact() { Scalar::zero() } else { Scalar::Approx(1e-12 * rhs.to_f64().abs()) };
                let subset: Vec<usize> = (0..rv.len()).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                EvidenceRow::ge(
                    format!("p={q} trial={trial} y^(1/p)={} tightest U={subset:?} ({violations} violations)", show_vector(rv)),
                    lhs,
                    rhs,
                    slack,
                )
            })
            .collect();
        b.rows(rows);
    }
    Ok(b.finish())
}

/// `(‖Σ_{k<=n} x*_k χ_k‖, (1/n) Σ_{k>n} x*_k)` for an `n × n` matrix.
pub fn corollary10_bracket(x: &[Vec<Scalar>], norm: &NormSpec, tol: f64) -> Result<(f64, Scalar)> {
    let n = x.len();
    let mut entries: Vec<Scalar> = x.iter().flatten().map(Scalar::abs).collect();
    entries.sort_by(|a, b| b.cmp_num(a));
    let head = StepFunction::from_vector(&entries[..n])?;
    let rest: Scalar = entries[n..].iter().sum::<Scalar>() * Scalar::ratio(1, n as i64);
    Ok((norm.eval(&head, tol)?, rest))
}

pub fn cmd_corollary10(p: &Params) -> Result<VerificationReport> {
    let n: usize = p.get("n", 3)?;
    let space: NormSpec = p.get("space", "lorentz:power:1/2".parse()?)?;
    let seed: u64 = p.get("seed", DEFAULT_SEED)?;
    let cap: u64 = p.get("value-cap", 8)?;
    let tol: f64 = p.get("tol", 1e-9)?;
    let mut b = ReportBuilder::new(
        "corollary10",
        "Corollary 10: ‖A_n x‖_E ≤ C(‖Σ x_k^* χ‖_E + (1/n) Σ_{k=n+1}^{n²} x_k^*), x_k^* the decreasing permutation of the sequence",
    );
    b.param("n", n).param("space", &space).param("seed", seed);
    let mut matrices: Vec<(String, Vec<Vec<Scalar>>)> = Vec::new();
    if let Some(m) = p.vectors("matrix")? {
        matrices.push(("given".into(), m));
    } else {
        let diag = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::int(i as i64 + 1) } else { Scalar::zero() }).collect())
            .collect();
        let mut r = rng(seed, 10);
        let random = (0..n).map(|_| random_int_vector(&mut r, n, cap)).collect();
        matrices.push(("diagonal".into(), diag));
        matrices.push(("all-ones".into(), vec![vec![Scalar::one(); n]; n]));
        matrices.push(("zero".into(), vec![vec![Scalar::zero(); n]; n]));
        matrices.push(("random".into(), random));
    }
    for (label, x) in &matrices {
        let law: DiscreteDistribution = a_n_matrix_dist(x)?;
        let lhs = space.eval(&law.quantile()?, tol)?;
        let (head, rest) = corollary10_bracket(x, &space, tol)?;
        let bracket = head + rest.to_f64();
        let ratio = if bracket == 0.0 { 0.0 } else { lhs / bracket };
        b.row(EvidenceRow::info(
            format!("{label} matrix ratio={ratio:.6}"),
            Scalar::Approx(lhs),
            Scalar::Approx(bracket),
        ));
    }
    b.inconclusive("diagnostic only: the constant C is not specified, so ratios are recorded without a verdict");
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma6_examples() {
        let (l, r) = lemma6_sides(4, 2);
        assert_eq!((l.to_string(), r.to_string()), ("1/12".into(), "1/8".into()));
        let (l, r) = lemma6_sides(4, 1);
        assert_eq!((l.to_string(), r.to_string()), ("1/4".into(), "1/2".into()));
    }

    #[test]
    fn lemma5_hand_example() {
        let a = vec![Scalar::one()];
        let h = h_m_dist(&a, 2).unwrap();
        let t = t_n_dist(&repeat_vector(&a, 2)).unwrap();
        let s = ccdf_scan(&h, &t, &Scalar::int(3));
        assert_eq!(s.violations, 0);
        assert_eq!(h.ccdf(&Scalar::ratio(3, 2)).0.exact_eq(&Scalar::ratio(1, 4)), Ok(true));
        assert_eq!(t.ccdf(&Scalar::ratio(1, 2)).0.exact_eq(&Scalar::ratio(1, 2)), Ok(true));
    }

    #[test]
    fn lemma7_zero_vector() {
        assert_eq!(lemma7_witness(&[Scalar::zero(), Scalar::zero()], 4).unwrap(), Some(1));
    }

    #[test]
    fn corollary13_two_ones() {
        let (l, r) = subset_sides(&[Scalar::one(), Scalar::one()], 2, 0b11);
        assert_eq!(l.exact_eq(&Scalar::int(4)), Ok(true));
        assert_eq!(r.exact_eq(&Scalar::int(2)), Ok(true));
        let (l, r) = subset_sides(&[Scalar::one(), Scalar::one()], 2, 0);
        assert!(l.is_zero() && r.is_zero());
    }

    #[test]
    fn corollary10_zero_matrix() {
        let z = vec![vec![Scalar::zero(); 2]; 2];
        let (head, rest) = corollary10_bracket(&z, &NormSpec::L1, 1e-9).unwrap();
        assert_eq!(head, 0.0);
        assert!(rest.is_zero());
    }
}
