use proptest::prelude::*;

use kruglov::exactnum::Scalar;
use kruglov::operators::{h_m_dist, kruglov_dist, t_n_bruteforce, t_n_dist};
use kruglov::spaces::NormSpec;
use kruglov::{Atom, DiscreteDistribution, Piece, StepFunction};

fn rational() -> impl Strategy<Value = Scalar> {
    (0i64..=12, 1i64..=5).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn signed_rational() -> impl Strategy<Value = Scalar> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn vector(max_len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(rational(), 1..=max_len)
}

/// Step function with uneven rational piece lengths.
fn step_function() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((1i64..=6, signed_rational()), 1..=6).prop_map(|parts| {
        let total: i64 = parts.iter().map(|p| p.0).sum();
        StepFunction::new(parts.into_iter().map(|(w, v)| Piece::new(Scalar::ratio(w, total), v)).collect()).unwrap()
    })
}

fn law() -> impl Strategy<Value = DiscreteDistribution> {
    law_in(-6..=6)
}

fn law_in(values: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec((values, 1i64..=4), 1..=4).prop_map(|parts| {
        let total: i64 = parts.iter().map(|p| p.1).sum();
        let atoms = parts.into_iter().map(|(v, w)| Atom::new(Scalar::int(v), Scalar::ratio(w, total))).collect();
        DiscreteDistribution::new(atoms, 0.0).unwrap()
    })
}

fn mean_of(a: &[Scalar]) -> Scalar {
    a.iter().sum::<Scalar>() * Scalar::ratio(1, a.len() as i64)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sum_matches_pairwise_addition(xs in prop::collection::vec(signed_rational(), 0..20)) {
        let folded = xs.iter().fold(Scalar::zero(), |acc, x| &acc + x);
        prop_assert_eq!(xs.iter().sum::<Scalar>().exact_eq(&folded), Ok(true));
    }

    #[test]
    fn convolution_commutes_and_associates(a in law(), b in law(), c in law()) {
        prop_assert_eq!(a.convolve(&b).exact_eq(&b.convolve(&a)), Ok(true));
        prop_assert_eq!(a.convolve(&b).convolve(&c).exact_eq(&a.convolve(&b.convolve(&c))), Ok(true));
        prop_assert_eq!((a.convolve(&b).mean() - a.mean() - b.mean()).is_zero(), true);
    }

    #[test]
    fn ccdf_is_non_increasing(d in law(), taus in prop::collection::vec(signed_rational(), 2..8)) {
        let mut taus = taus;
        taus.sort_by(|x, y| x.cmp_num(y));
        for w in taus.windows(2) {
            prop_assert!(d.ccdf(&w[1]).0 <= d.ccdf(&w[0]).0);
        }
    }

    #[test]
    fn quantile_of_law_is_rearrangement(x in step_function()) {
        let q = DiscreteDistribution::law_of(&x).quantile().unwrap();
        prop_assert!(q.same_pieces(&x.rearrange()));
        prop_assert_eq!(StepFunction::equimeasurable(&q, &x), Ok(true));
        prop_assert!(q.is_non_increasing());
    }

    #[test]
    fn char_fn_bounded_by_one(d in law(), t in -10.0f64..10.0) {
        let (z, tail) = d.char_fn(t);
        prop_assert!(z.norm() <= 1.0 + 1e-12);
        prop_assert_eq!(tail, 0.0);
    }

    #[test]
    fn t_n_matches_enumeration(a in vector(5)) {
        prop_assert_eq!(t_n_dist(&a).unwrap().exact_eq(&t_n_bruteforce(&a).unwrap()), Ok(true));
    }

    #[test]
    fn t_n_and_h_m_preserve_mean(a in vector(6), m in 1usize..=3) {
        let mean = mean_of(&a);
        prop_assert_eq!(t_n_dist(&a).unwrap().mean().exact_eq(&mean), Ok(true));
        prop_assert_eq!(h_m_dist(&a, m).unwrap().mean().exact_eq(&mean), Ok(true));
        prop_assert_eq!(t_n_dist(&a).unwrap().total_mass().exact_eq(&Scalar::one()), Ok(true));
    }

    #[test]
    fn kruglov_keeps_mass_and_mean(d in law_in(0..=6)) {
        let k = kruglov_dist(&d, 1e-12).unwrap();
        let mass = k.total_mass().to_f64();
        prop_assert!(mass <= 1.0 + 1e-12 && mass + k.tail() >= 1.0 - 1e-12);
        prop_assert!((k.mean().to_f64() - d.mean().to_f64()).abs() <= 1e-10 * (1.0 + d.mean().to_f64().abs()) * 10.0);
    }

    #[test]
    fn rounding_up_dominates(x in step_function(), grid in 1u64..=16) {
        let d = DiscreteDistribution::law_of(&x);
        let up = d.round_up_to_grid(grid);
        prop_assert_eq!(up.total_mass().exact_eq(&Scalar::one()), Ok(true));
        prop_assert!(up.mean() >= d.mean());
        prop_assert!((up.mean() - d.mean()) <= Scalar::ratio(1, grid as i64));
    }

    #[test]
    fn averaging_is_submajorized(x in step_function(), n in 1usize..=4) {
        let avg = StepFunction::from_vector(&x.abs().average_vector(n).unwrap()).unwrap();
        prop_assert!(StepFunction::submajorizes(&x, &avg, &Scalar::zero()));
        let (excess, _) = StepFunction::majorization_excess(&x, &avg);
        prop_assert!(!excess.is_positive());
    }

    #[test]
    fn norms_are_subadditive(x in step_function(), y in step_function()) {
        let sum = x.zip_with(&y, |a, b| a + b);
        for spec in ["l1", "linf", "lorentz:power:1/2", "marcinkiewicz:power:1/2", "orlicz:1", "orlicz:2"] {
            let s: NormSpec = spec.parse().unwrap();
            let (nx, ny, ns) = (s.eval(&x, 1e-10).unwrap(), s.eval(&y, 1e-10).unwrap(), s.eval(&sum, 1e-10).unwrap());
            prop_assert!(ns <= (nx + ny) * (1.0 + 4e-10) + 1e-12, "{} {} > {} + {}", spec, ns, nx, ny);
        }
    }

    #[test]
    fn dilation_preserves_or_scales_l1(x in step_function(), p in 1i64..=6, q in 1i64..=6) {
        let tau = Scalar::ratio(p, q);
        let d = x.dilate(&tau).unwrap();
        let expected = if tau > Scalar::one() {
            None
        } else {
            Some(&x.l1_norm() * &tau)
        };
        if let Some(e) = expected {
            prop_assert_eq!(d.l1_norm().exact_eq(&e), Ok(true));
        } else {
            prop_assert!(d.l1_norm() <= &x.l1_norm() * &tau);
        }
    }
}
