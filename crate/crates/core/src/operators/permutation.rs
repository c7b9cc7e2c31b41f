//! Random-permutation operators: `T_n` by derangement-weighted subset sums,
//! a brute-force enumeration oracle, the matrix form of `A_n`, and `H_m`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dist::{Atom, DiscreteDistribution};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, common_denominator, derangements, factorial, Scalar};
use crate::stepfn::{Piece, StepFunction};

/// Largest `n` for which permutations are enumerated.
pub const ENUMERATION_LIMIT: usize = 8;

fn check_nonnegative(a: &[Scalar]) -> Result<()> {
    for (index, v) in a.iter().enumerate() {
        if v.is_negative() {
            return Err(Error::NegativeEntry {
                index,
                value: v.to_string(),
            });
        }
    }
    Ok(())
}

fn exact_entries(a: &[Scalar]) -> Result<Vec<&BigRational>> {
    a.iter()
        .map(|v| v.as_exact().ok_or(Error::Inexact("vector entry")))
        .collect()
}

/// `counts[k][s]`: number of `k`-element subsets of the scaled vector with
/// sum `s`. Rows are sparse so that vectors with few distinct sums stay
/// `O(n^2)` regardless of the lattice span.
pub struct SubsetSumTable {
    pub counts: Vec<BTreeMap<u64, BigUint>>,
    /// Lattice denominator: entry `a_i` is stored as `a_i * scale`.
    pub scale: BigInt,
}

impl SubsetSumTable {
    pub fn build(a: &[Scalar]) -> Result<Self> {
        check_nonnegative(a)?;
        let exact = exact_entries(a)?;
        let scale = common_denominator(exact.iter().copied());
        let l = BigRational::from_integer(scale.clone());
        let weights: Vec<u64> = exact
            .iter()
            .map(|r| {
                (*r * &l)
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::Budget("scaled entry exceeds 64 bits".into()))
            })
            .collect::<Result<_>>()?;
        weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::Budget("scaled sum exceeds 64 bits".into()))?;

        // equal entries are folded in together, j of c copies in C(c, j) ways
        let mut groups: BTreeMap<u64, usize> = BTreeMap::new();
        for &w in &weights {
            *groups.entry(w).or_insert(0) += 1;
        }
        let n = a.len();
        let mut counts: Vec<BTreeMap<u64, BigUint>> = vec![BTreeMap::new(); n + 1];
        counts[0].insert(0, BigUint::from(1u32));
        let mut used = 0;
        for (&w, &c) in &groups {
            let binoms: Vec<BigUint> = (0..=c).map(|j| binomial(c, j)).collect();
            let mut next: Vec<BTreeMap<u64, BigUint>> = vec![BTreeMap::new(); n + 1];
            for k in 0..=used {
                for (&s, x) in &counts[k] {
                    for (j, b) in binoms.iter().enumerate() {
                        *next[k + j].entry(s + j as u64 * w).or_insert_with(BigUint::zero) += x * b;
                    }
                }
            }
            counts = next;
            used += c;
        }
        Ok(SubsetSumTable { counts, scale })
    }
}

/// Law of `A_n a` under a uniformly random permutation of `n` symbols.
pub fn t_n_dist(a: &[Scalar]) -> Result<DiscreteDistribution> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty vector".into()));
    }
    let table = SubsetSumTable::build(a)?;
    let mut by_sum: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (k, row) in table.counts.iter().enumerate() {
        let d = derangements(n - k);
        if d.is_zero() {
            continue;
        }
        for (&s, c) in row {
            *by_sum.entry(s).or_insert_with(BigUint::zero) += c * &d;
        }
    }
    let nf = BigInt::from(factorial(n));
    let atoms = by_sum
        .into_iter()
        .map(|(s, c)| {
            let c = BigInt::from(c);
            let g = c.gcd(&nf);
            Atom::new(
                Scalar::Exact(BigRational::new(BigInt::from(s), table.scale.clone())),
                Scalar::Exact(BigRational::new_raw(&c / &g, &nf / &g)),
            )
        })
        .collect();
    Ok(DiscreteDistribution::from_sorted(atoms, 0.0))
}

fn guard_enumeration(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("empty input".into()));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::Budget(format!(
            "enumerating {n}! permutations exceeds the n <= {ENUMERATION_LIMIT} limit"
        )));
    }
    Ok(())
}

/// Values `Σ_{π(i)=i} a_i` over all permutations in lexicographic order.
fn fixed_point_sums(a: &[Scalar]) -> Vec<Scalar> {
    let n = a.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            p.iter()
                .enumerate()
                .filter(|&(i, &v)| i == v)
                .map(|(i, _)| &a[i])
                .sum()
        })
        .collect()
}

fn uniform_law(values: Vec<Scalar>) -> DiscreteDistribution {
    let w = Scalar::Exact(BigRational::new(1.into(), BigInt::from(values.len())));
    let atoms = values.into_iter().map(|v| Atom::new(v, w.clone())).collect();
    DiscreteDistribution::from_unsorted(atoms, 0.0)
}

/// Same law as [`t_n_dist`], by enumerating every permutation.
pub fn t_n_bruteforce(a: &[Scalar]) -> Result<DiscreteDistribution> {
    guard_enumeration(a.len())?;
    check_nonnegative(a)?;
    Ok(uniform_law(fixed_point_sums(a)))
}

/// `T_n x = C_{n!} A_n B_n x`: `n!` equal pieces in lexicographic order.
pub fn t_n_stepfn(x: &StepFunction, n: usize) -> Result<StepFunction> {
    guard_enumeration(n)?;
    if !x.is_nonnegative() {
        return Err(Error::InvalidArgument("T_n requires a nonnegative function".into()));
    }
    let b = x.average_vector(n)?;
    let values = fixed_point_sums(&b);
    let len = Scalar::Exact(BigRational::new(1.into(), BigInt::from(values.len())));
    StepFunction::new(values.into_iter().map(|v| Piece::new(len.clone(), v)).collect())
}

/// Law of `Σ_i x[i][π(i)]` over uniform `π`.
pub fn a_n_matrix_dist(x: &[Vec<Scalar>]) -> Result<DiscreteDistribution> {
    let n = x.len();
    guard_enumeration(n)?;
    for (i, row) in x.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!("row {i} has length {}, expected {n}", row.len())));
        }
        check_nonnegative(row)?;
    }
    let values: Vec<Scalar> = (0..n)
        .permutations(n)
        .map(|p| p.iter().enumerate().map(|(i, &j)| &x[i][j]).sum())
        .collect();
    Ok(uniform_law(values))
}

/// Each `a_i` repeated `m` times.
pub fn repeat_vector(a: &[Scalar], m: usize) -> Vec<Scalar> {
    a.iter()
        .flat_map(|v| std::iter::repeat(v.clone()).take(m))
        .collect()
}

/// Law of `H_m f_a`: the `m`-fold convolution of the law of `σ_{1/m} f_a`.
pub fn h_m_dist(a: &[Scalar], m: usize) -> Result<DiscreteDistribution> {
    let n = a.len();
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("H_m needs n >= 1 and m >= 1".into()));
    }
    check_nonnegative(a)?;
    let nm = (n * m) as i64;
    let mut atoms: Vec<Atom> = a
        .iter()
        .map(|v| Atom::new(v.clone(), Scalar::ratio(1, nm)))
        .collect();
    if m > 1 {
        atoms.push(Atom::new(Scalar::zero(), Scalar::ratio(m as i64 - 1, m as i64)));
    }
    let g = DiscreteDistribution::new(atoms, 0.0)?;
    Ok(g.power_convolve(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn show(x: &DiscreteDistribution) -> Vec<(String, String)> {
        x.atoms()
            .iter()
            .map(|a| (a.value.to_string(), a.mass.to_string()))
            .collect()
    }

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn t_n_small_cases() {
        assert_eq!(show(&t_n_dist(&v(&[1])).unwrap()), pairs(&[("1", "1")]));
        assert_eq!(
            show(&t_n_dist(&v(&[1, 1, 1])).unwrap()),
            pairs(&[("0", "1/3"), ("1", "1/2"), ("3", "1/6")])
        );
        assert_eq!(show(&t_n_bruteforce(&v(&[1, 2])).unwrap()), pairs(&[("0", "1/2"), ("3", "1/2")]));
        assert_eq!(show(&t_n_bruteforce(&v(&[0, 0, 0])).unwrap()), pairs(&[("0", "1")]));
        assert!(t_n_dist(&v(&[1, -1])).is_err());
        assert!(t_n_bruteforce(&v(&[1; 9])).is_err());
    }

    #[test]
    fn subset_table_rows_sum_to_binomials() {
        let t = SubsetSumTable::build(&v(&[1, 2, 2, 5, 0])).unwrap();
        for (k, row) in t.counts.iter().enumerate() {
            let total: BigUint = row.values().sum();
            assert_eq!(total, crate::exactnum::binomial(5, k));
        }
        assert_eq!(t.counts[0][&0], BigUint::from(1u32));
    }

    #[test]
    fn all_ones_top_atom() {
        for n in 1..=10usize {
            let d = t_n_dist(&vec![Scalar::one(); n]).unwrap();
            let top = d.mass_at(&Scalar::int(n as i64));
            let expected = Scalar::Exact(BigRational::new(1.into(), BigInt::from(factorial(n))));
            assert_eq!(top.exact_eq(&expected), Ok(true));
        }
    }

    #[test]
    fn stepfn_matches_dist() {
        let x = StepFunction::new(vec![
            Piece::new(Scalar::ratio(1, 3), Scalar::int(3)),
            Piece::new(Scalar::ratio(2, 3), Scalar::int(1)),
        ])
        .unwrap();
        for n in 1..=5 {
            let t = t_n_stepfn(&x, n).unwrap();
            let via_dist = t_n_dist(&x.average_vector(n).unwrap()).unwrap();
            assert!(DiscreteDistribution::law_of(&t).exact_eq(&via_dist).unwrap());
            assert_eq!(t.integral().exact_eq(&x.integral()), Ok(true));
        }
        let t1 = t_n_stepfn(&x, 1).unwrap();
        assert!(t1.same_pieces(&StepFunction::constant(x.integral())));
    }

    #[test]
    fn matrix_cases() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| v(r)).collect::<Vec<_>>();
        let d = a_n_matrix_dist(&m(&[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(show(&d), pairs(&[("5", "1")]));
        let d = a_n_matrix_dist(&m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap();
        assert_eq!(show(&d), pairs(&[("3", "1")]));
        let diag = m(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 5]]);
        assert!(a_n_matrix_dist(&diag).unwrap().exact_eq(&t_n_dist(&v(&[2, 1, 5])).unwrap()).unwrap());
    }

    #[test]
    fn h_m_cases() {
        let d = h_m_dist(&v(&[1, 2]), 1).unwrap();
        assert_eq!(show(&d), pairs(&[("1", "1/2"), ("2", "1/2")]));
        let d = h_m_dist(&v(&[1, 2]), 2).unwrap();
        assert_eq!(
            show(&d),
            pairs(&[("0", "1/4"), ("1", "1/4"), ("2", "5/16"), ("3", "1/8"), ("4", "1/16")])
        );
        for n in 1..=6usize {
            let d = h_m_dist(&vec![Scalar::one(); n], n).unwrap();
            let top = d.mass_at(&Scalar::int(n as i64));
            assert_eq!(top.exact_eq(&Scalar::Exact(BigRational::new(1.into(), BigInt::from(n).pow(n as u32)))), Ok(true));
        }
    }

    #[test]
    fn repeat_cases() {
        assert_eq!(repeat_vector(&v(&[1, 2]), 2), v(&[1, 1, 2, 2]));
        assert_eq!(repeat_vector(&v(&[1, 2]), 1), v(&[1, 2]));
    }
}
