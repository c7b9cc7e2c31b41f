//! One PASS/FAIL line per acceptance criterion; the test fails if any does.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kruglov::exactnum::Scalar;
use kruglov::operators::{h_m_dist, kruglov_dist, kruglov_iterate, support_iteration, t_n_bruteforce, t_n_dist};
use kruglov::spaces::{build_epsilon_gauge, kruglov_criterion, ConcaveGauge, NormSpec};
use kruglov::verify::{self, keystone, lemma7_witness, Params, Verdict};
use kruglov::{Atom, DiscreteDistribution, StepFunction};

type Outcome = Result<String, String>;

const TOL: f64 = 1e-9;

fn rational_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| Scalar::ratio(rng.gen_range(0..=8), rng.gen_range(1..=4)))
        .collect()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed.as_secs() < limit_s, format!("took {elapsed:?}, limit {limit_s} s"))
}

fn claim_passes(id: &str) -> Outcome {
    let t = Instant::now();
    let r = verify::run_claim(id, &Params::new()).map_err(|e| e.to_string())?;
    ensure(
        r.verdict == Verdict::Pass,
        format!("verdict {} with {} violated rows", r.verdict, r.violations()),
    )?;
    Ok(format!("{} rows, {:?}", r.evidence.len(), t.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=7 {
        for _ in 0..50 {
            let a = rational_vector(&mut rng, n);
            let fast = t_n_dist(&a).map_err(|e| e.to_string())?;
            let slow = t_n_bruteforce(&a).map_err(|e| e.to_string())?;
            ensure(fast.exact_eq(&slow) == Ok(true), format!("mismatch at {a:?}"))?;
        }
    }
    within(t.elapsed(), 60)?;
    Ok(format!("300 vectors, {:?}", t.elapsed()))
}

fn remark_formulas() -> Outcome {
    for n in 1..=8usize {
        let ones = vec![Scalar::one(); n];
        let top = Scalar::int(n as i64);
        let nf: i64 = (1..=n as i64).product();
        let nn = (n as i64).pow(n as u32);
        let t = t_n_dist(&ones).unwrap().mass_at(&top);
        let h = h_m_dist(&ones, n).unwrap().mass_at(&top);
        ensure(t.exact_eq(&Scalar::ratio(1, nf)) == Ok(true), format!("T_n mass at n={n} is {t}"))?;
        ensure(h.exact_eq(&Scalar::ratio(1, nn)) == Ok(true), format!("H_n mass at n={n} is {h}"))?;
    }
    Ok("n = 1..8".into())
}

fn l1_isometries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut count = 0;
    for n in 1..=8 {
        for _ in 0..3 {
            let a = rational_vector(&mut rng, n);
            let mean: Scalar = a.iter().sum::<Scalar>() * Scalar::ratio(1, n as i64);
            let t = t_n_dist(&a).unwrap().mean();
            ensure(t.exact_eq(&mean) == Ok(true), format!("T_n mean {t} vs {mean}"))?;
            for m in 1..=8 {
                if n * m > 24 {
                    break;
                }
                let h = h_m_dist(&a, m).unwrap().mean();
                ensure(h.exact_eq(&mean) == Ok(true), format!("H_m mean {h} vs {mean} (m={m})"))?;
                count += 1;
            }
        }
    }
    let laws = [
        DiscreteDistribution::delta(Scalar::one()),
        DiscreteDistribution::law_of(&StepFunction::from_vector(&[Scalar::int(0), Scalar::int(1)]).unwrap()),
        DiscreteDistribution::law_of(&StepFunction::from_vector(&[Scalar::int(1), Scalar::int(2), Scalar::int(3)]).unwrap()),
        DiscreteDistribution::law_of(&StepFunction::from_vector(&[Scalar::ratio(1, 3), Scalar::int(5)]).unwrap()),
    ];
    for mu in &laws {
        let k = kruglov_dist(mu, 1e-12).unwrap();
        let (a, b) = (k.mean().to_f64(), mu.mean().to_f64());
        ensure((a - b).abs() <= 1e-10, format!("K mean {a} vs {b}"))?;
    }
    Ok(format!("{count} (a, m) pairs exact, {} Kruglov laws", laws.len()))
}

fn lemma7_witnesses() -> Outcome {
    let mut table = Vec::new();
    for a in verify::parse_vectors("1;1,1;1,2;1,1,1;1,2,3").unwrap() {
        let m = lemma7_witness(&a, 64).map_err(|e| e.to_string())?;
        let m = m.ok_or_else(|| format!("no witness for {}", verify::show_vector(&a)))?;
        table.push(format!("{}->{m}", verify::show_vector(&a)));
    }
    let r = verify::run_claim("lemma7", &Params::new()).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Pass, "report not passing")?;
    Ok(table.join(" "))
}

fn poisson_identity() -> Outcome {
    let k = kruglov_dist(&DiscreteDistribution::delta(Scalar::one()), 1e-12).unwrap();
    let mut expected = (-1.0f64).exp();
    let mut worst = 0.0f64;
    for j in 0..=15 {
        if j > 0 {
            expected /= j as f64;
        }
        let got = k.mass_at(&Scalar::int(j)).to_f64();
        worst = worst.max((got - expected).abs());
    }
    ensure(worst <= 1e-12, format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn lemma2_cross_check() -> Outcome {
    let a = support_iteration(6);
    ensure(a[0] == (-1.0f64).exp(), "a_1 differs from exp(-1)")?;
    let mut worst = Vec::new();
    for k in 1..=6 {
        let law = kruglov_iterate(k, 1e-12, 1e-15).unwrap();
        let err = (law.mass_at(&Scalar::zero()).to_f64() - a[k - 1]).abs();
        let tol = if k <= 4 { 1e-9 } else { 1e-6 };
        ensure(err <= tol, format!("k={k} error {err:e}"))?;
        worst.push(format!("{err:.0e}"));
    }
    Ok(format!("errors {}", worst.join(",")))
}

fn char_fn_identity() -> Outcome {
    let laws = [
        DiscreteDistribution::delta(Scalar::one()),
        DiscreteDistribution::new(
            vec![Atom::new(Scalar::zero(), Scalar::ratio(1, 2)), Atom::new(Scalar::one(), Scalar::ratio(1, 2))],
            0.0,
        )
        .unwrap(),
        DiscreteDistribution::law_of(&StepFunction::from_vector(&[Scalar::int(1), Scalar::int(2), Scalar::int(3)]).unwrap()),
    ];
    let mut worst = 0.0f64;
    for mu in &laws {
        let k = kruglov_dist(mu, 1e-12).unwrap();
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let (phi_k, tail) = k.char_fn(t);
            let (phi_mu, _) = mu.char_fn(t);
            let diff = (phi_k - (phi_mu - Complex64::new(1.0, 0.0)).exp()).norm();
            ensure(diff <= 2.0 * tail, format!("t={t}: {diff:e} > 2 * {tail:e}"))?;
            worst = worst.max(diff / tail);
        }
    }
    Ok(format!("max |diff|/tail = {worst:.3}"))
}

fn kruglov_lower_bound() -> Outcome {
    let spaces: Vec<NormSpec> = ["l1", "lorentz:power:1/2", "marcinkiewicz:power:1/2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let inv_e = (-1.0f64).exp();
    let mut worst = f64::INFINITY;
    for a in verify::parse_vectors("1;1,2;3,1,0,2;1,1,1,1;5,0,0,1").unwrap() {
        let f = StepFunction::from_vector(&a).unwrap();
        let qk = kruglov_dist(&DiscreteDistribution::law_of(&f), 1e-12)
            .unwrap()
            .quantile_tail_at_zero()
            .unwrap();
        for s in &spaces {
            let (nk, nf) = (s.eval(&qk, TOL).unwrap(), s.eval(&f, TOL).unwrap());
            ensure(nk >= inv_e * nf * (1.0 - 2.0 * TOL), format!("{s} on {a:?}: {nk} < {nf}/e"))?;
            worst = worst.min(nk / nf);
        }
    }
    Ok(format!("min ratio {worst:.6} vs 1/e = {inv_e:.6}"))
}

fn criterion_value() -> Outcome {
    let id = kruglov_criterion(&"power:1".parse::<ConcaveGauge>().unwrap(), 1024, 1e-12);
    let half = kruglov_criterion(&"power:1/2".parse::<ConcaveGauge>().unwrap(), 1024, 1e-12);
    let e1 = std::f64::consts::E - 1.0;
    ensure((id.value - e1).abs() <= 1e-6, format!("power:1 gives {}", id.value))?;
    ensure(half.value.is_finite(), "power:1/2 diverged")?;
    ensure(id.argmax == 1.0 && half.argmax == 1.0, format!("argmax {} and {}", id.argmax, half.argmax))?;
    Ok(format!("power:1 -> {:.9}, power:1/2 -> {:.6}", id.value, half.value))
}

fn theorem1_keystone() -> Outcome {
    let t = Instant::now();
    let mut details = Vec::new();
    for eps in ["1/10", "1/5", "3/10"] {
        let e = Scalar::parse(eps).unwrap();
        let g = build_epsilon_gauge(&e, 6, 1e-12, 1e-15).map_err(|e| e.to_string())?;
        let k = keystone(&g, 4096, 1e-12, 1e-15).map_err(|e| e.to_string())?;
        let ef = e.to_f64();
        let allowed = ef.powi(7) / (1.0 - ef) + k.missing_mean + g.missing_l1() / ef;
        ensure(k.slack <= allowed * (1.0 + 1e-12), "slack exceeds the allowed bound")?;
        ensure(k.excess.to_f64() <= k.slack, format!("eps={eps}: excess {} > {}", k.excess, k.slack))?;
        details.push(format!("eps={eps} excess {:.1e}", k.excess.to_f64()));
    }
    within(t.elapsed(), 300)?;
    Ok(format!("{}, {:?}", details.join(", "), t.elapsed()))
}

fn corollary12_dichotomy() -> Outcome {
    let t = Instant::now();
    let ns: Vec<usize> = (6..=11).map(|k| 1 << k).collect();
    let q = verify::all_ones_quantiles(&ns).map_err(|e| e.to_string())?;
    let rho2 = verify::orlicz_ratios(2.0, &q, 1e-12).map_err(|e| e.to_string())?;
    let rho1 = verify::orlicz_ratios(1.0, &q, 1e-12).map_err(|e| e.to_string())?;
    ensure(rho2.windows(2).all(|w| w[0] < w[1]), format!("rho_2 not increasing: {rho2:?}"))?;
    let drift = rho1.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - rho1[0];
    ensure(drift <= 1e-6, format!("rho_1 running max drifts by {drift:e}"))?;
    within(t.elapsed(), 300)?;
    Ok(format!(
        "rho_2 {:.3} -> {:.3}, rho_1 drift {drift:.1e}, {:?}",
        rho2[0],
        rho2[rho2.len() - 1],
        t.elapsed()
    ))
}

/// 30 step functions: equal-piece vectors and uneven rational partitions.
fn axiom_battery() -> Vec<StepFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    (0..30)
        .map(|i| {
            let n = rng.gen_range(1..=8);
            if i % 2 == 0 {
                StepFunction::from_vector(&rational_vector(&mut rng, n)).unwrap()
            } else {
                let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
                let total: i64 = weights.iter().sum();
                let pieces = weights
                    .iter()
                    .map(|&w| kruglov::Piece::new(Scalar::ratio(w, total), Scalar::ratio(rng.gen_range(0..=9), rng.gen_range(1..=3))))
                    .collect();
                StepFunction::new(pieces).unwrap()
            }
        })
        .collect()
}

fn norm_axioms() -> Outcome {
    let specs: Vec<NormSpec> = [
        "l1",
        "linf",
        "explog",
        "lorentz:power:1/2",
        "lorentz:triple-log",
        "marcinkiewicz:power:1/2",
        "marcinkiewicz:power:1/3",
        "orlicz:0.5",
        "orlicz:1",
        "orlicz:2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let battery = axiom_battery();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checks = 0;
    for x in &battery {
        let mut shuffled = x.pieces().to_vec();
        shuffled.shuffle(&mut rng);
        let perm = StepFunction::new(shuffled).unwrap();
        let lowered = x
            .pieces()
            .iter()
            .map(|p| kruglov::Piece::new(p.len.clone(), &p.val * &Scalar::ratio(rng.gen_range(0..=4), 4)))
            .collect();
        let lowered = StepFunction::new(lowered).unwrap();
        let averaged = StepFunction::from_vector(&x.rearrange().average_vector(2).unwrap()).unwrap();
        for s in &specs {
            let nx = s.eval(x, TOL).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 2.0 * TOL * b.abs().max(a.abs()) + 1e-15;
            ensure(s.eval(&perm, TOL).unwrap() == nx, format!("{s}: rearrangement changed the norm"))?;
            for c in [Scalar::ratio(1, 2), Scalar::int(3), Scalar::ratio(7, 5)] {
                let ncx = s.eval(&x.scale(&c), TOL).unwrap();
                ensure(close(ncx, c.to_f64() * nx), format!("{s}: homogeneity {ncx} vs {c}*{nx}"))?;
            }
            let nl = s.eval(&lowered, TOL).unwrap();
            ensure(nl <= nx * (1.0 + 2.0 * TOL) + 1e-15, format!("{s}: lattice {nl} > {nx}"))?;
            for tau in [Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::int(2), Scalar::int(3)] {
                let nd = s.eval(&x.dilate(&tau).unwrap(), TOL).unwrap();
                let bound = tau.to_f64().max(1.0) * nx;
                ensure(nd <= bound * (1.0 + 2.0 * TOL) + 1e-15, format!("{s}: dilation by {tau} gives {nd} > {bound}"))?;
            }
            if matches!(s, NormSpec::Lorentz(_) | NormSpec::Marcinkiewicz(_)) {
                let na = s.eval(&averaged, TOL).unwrap();
                ensure(na <= nx * (1.0 + 2.0 * TOL) + 1e-15, format!("{s}: submajorization {na} > {nx}"))?;
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (case, evaluator) pairs"))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("oracle-equivalence", oracle_equivalence),
        ("remark-formulas", remark_formulas),
        ("l1-isometries", l1_isometries),
        ("lemma5-scan", || {
            let t = Instant::now();
            let r = claim_passes("lemma5")?;
            within(t.elapsed(), 300).map(|_| r)
        }),
        ("lemma6-scan", || {
            let t = Instant::now();
            let r = claim_passes("lemma6")?;
            within(t.elapsed(), 10).map(|_| r)
        }),
        ("lemma7-witness", lemma7_witnesses),
        ("poisson-identity", poisson_identity),
        ("lemma2-cross-check", lemma2_cross_check),
        ("char-fn-identity", char_fn_identity),
        ("kruglov-lower-bound", kruglov_lower_bound),
        ("criterion-value", criterion_value),
        ("theorem1-keystone", theorem1_keystone),
        ("corollary13-scan", || claim_passes("corollary13")),
        ("corollary12-dichotomy", corollary12_dichotomy),
        ("norm-axioms", norm_axioms),
    ];
    let mut failed = Vec::new();
    println!();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
