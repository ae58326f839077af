//! Degree bookkeeping for `Z̲ ⊗ B_{C_p}S^1` and the two homology relations.
//!
//! The Lewis splitting gives generators `e_k` with `|e_k| = ⊕_{0≤i<k} λ^{i-k}`.
//! The homology suspension of `e_{p^i}` is `t_i`, and the relation
//! `θ t_i = 0` comes from comparing `K(Z̲, λ)` with `K(Z̲, 2)` along `[θ]`,
//! where `H_*(CP^∞)` has divided power generators `β_{(i)} = γ_{p^i}(β_1)`.

use serde::{Deserialize, Serialize};

use crate::grading::{
    coefficient_degree, e_degree, lambda_degree, mult_gap, t_degree, theta_coeff_exponent,
    theta_degree, GradingError, Prime, RODegree, VanishingVerdict,
};

/// `(k, |e_k|)` for `0 ≤ k ≤ k_max`.
pub fn splitting_table(p: Prime, k_max: u64) -> Vec<(u64, RODegree)> {
    (0..=k_max).map(|k| (k, e_degree(p, k))).collect()
}

/// Degree of the homology suspension of `e_{p^i}`: `|e_{p^i}| - λ`.
pub fn suspension_degree(p: Prime, i: u32) -> Result<RODegree, GradingError> {
    if i < 1 {
        return Err(GradingError::IndexTooSmall(i));
    }
    Ok(e_degree(p, p.pow(i)? as u64) - lambda_degree())
}

/// Integer degree `2j` of the divided power `γ_j(β_1) ∈ H_*(CP^∞)`.
pub fn kz2_generator_degree(j: u64) -> i64 {
    2 * j as i64
}

/// `|β_{(i)}| = 2p^i`.
pub fn beta_degree(p: Prime, i: u32) -> Result<i64, GradingError> {
    Ok(kz2_generator_degree(p.pow(i)? as u64))
}

/// Whether `β_{(i-1)}^p` and `p·β_{(i)}` sit in the same degree.
pub fn beta_power_relation_holds(p: Prime, i: u32) -> Result<bool, GradingError> {
    if i < 1 {
        return Err(GradingError::IndexTooSmall(i));
    }
    Ok(i64::from(p.get()) * beta_degree(p, i - 1)? == beta_degree(p, i)?)
}

/// One row of the multiplication-lemma check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultGapRow {
    pub i: u32,
    pub gap: RODegree,
    /// `λ - 2` exactly when `i = 0`, zero afterwards.
    pub expected: RODegree,
    pub pass: bool,
}

/// `p·|e_{p^i}| - |e_{p^{i+1}}|` for `0 ≤ i ≤ i_max`: the coefficient in
/// `e_{p^i}^p = c·e_{p^{i+1}}` is `θ` at `i = 0` and a unit otherwise.
pub fn mult_gap_table(p: Prime, i_max: u32) -> Result<Vec<MultGapRow>, GradingError> {
    (0..=i_max)
        .map(|i| {
            let gap = mult_gap(p, i)?;
            let expected = if i == 0 { theta_degree() } else { RODegree::ZERO };
            Ok(MultGapRow { i, gap, expected, pass: gap == expected })
        })
        .collect()
}

/// Tally of coefficient-degree verdicts over `0 ≤ i ≤ i_max`, `0 ≤ j < p^{i+1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSweep {
    pub pass: u64,
    pub flagged: u64,
    pub fail: u64,
    /// `(i, j)` of every flagged coefficient.
    pub flagged_at: Vec<(u32, u64)>,
    pub failed_at: Vec<(u32, u64)>,
}

pub fn coefficient_sweep(p: Prime, i_max: u32) -> Result<CoefficientSweep, GradingError> {
    let mut sweep = CoefficientSweep::default();
    for i in 0..=i_max {
        for j in 0..p.pow(i + 1)? as u64 {
            match coefficient_degree(p, i, j)?.1 {
                VanishingVerdict::Pass => sweep.pass += 1,
                VanishingVerdict::PassWithFlag => {
                    sweep.flagged += 1;
                    sweep.flagged_at.push((i, j));
                }
                VanishingVerdict::Fail => {
                    sweep.fail += 1;
                    sweep.failed_at.push((i, j));
                }
            }
        }
    }
    Ok(sweep)
}

/// One row of the `[θ]_*(e_{p^i})` coefficient lint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintRow {
    pub i: u32,
    /// `|e_{p^i}| - |β_{(i)}|`.
    pub required: RODegree,
    pub forced_exponent: i64,
    pub printed_exponent: i64,
    pub exponent_matches: bool,
    /// Restriction of the coefficient `p^{i-1} θ / u_λ^m`: `p^{i-1}·p`,
    /// since `res θ = p` and `res u_λ = 1`.
    pub restricted_coefficient: u128,
    /// `[p]_* res(e_{p^i}) = p^i β_{(i)}`.
    pub expected_restriction: u128,
    pub restriction_pass: bool,
}

/// Rows `1 ≤ i ≤ i_max` comparing the `u_λ` exponent forced by degrees with
/// the printed one, plus the restriction check (which does not see the
/// exponent at all).
pub fn lint_theta_coefficients(p: Prime, i_max: u32) -> Result<Vec<LintRow>, GradingError> {
    let pp = u128::from(p.get());
    (1..=i_max)
        .map(|i| {
            let exp = theta_coeff_exponent(p, i)?;
            let overflow = GradingError::Overflow { p: p.get(), exponent: i };
            let restricted = pp.checked_pow(i - 1).and_then(|x| x.checked_mul(pp)).ok_or(overflow.clone())?;
            let expected = pp.checked_pow(i).ok_or(overflow)?;
            Ok(LintRow {
                i,
                required: exp.required,
                forced_exponent: exp.forced,
                printed_exponent: exp.printed_value,
                exponent_matches: !exp.mismatch,
                restricted_coefficient: restricted,
                expected_restriction: expected,
                restriction_pass: restricted == expected,
            })
        })
        .collect()
}

/// Suspension degrees versus the stated `|t_i|`, for `1 ≤ i ≤ i_max`.
pub fn suspension_matches_t(p: Prime, i_max: u32) -> Result<Vec<(u32, RODegree, bool)>, GradingError> {
    (1..=i_max)
        .map(|i| {
            let s = suspension_degree(p, i)?;
            Ok((i, s, s == t_degree(p, i)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::rho;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(
            splitting_table(p(3), 3),
            vec![
                (0, RODegree::new(0, 0)),
                (1, RODegree::new(0, 2)),
                (2, RODegree::new(0, 4)),
                (3, RODegree::new(2, 6)),
            ]
        );
        assert_eq!(splitting_table(p(2), 2)[2], (2, 2 * rho(p(2))));
        assert_eq!(splitting_table(p(5), 25)[25], (25, RODegree::new(10, 50)));
        assert_eq!(splitting_table(p(5), 25)[25].1, 10 * rho(p(5)));
    }

    #[test]
    fn suspension_examples() {
        assert_eq!(suspension_degree(p(3), 1).unwrap(), RODegree::new(2, 4));
        assert_eq!(suspension_degree(p(3), 2).unwrap(), RODegree::new(6, 16));
        assert_eq!(suspension_degree(p(2), 1).unwrap(), RODegree::new(2, 2));
        assert!(suspension_degree(p(2), 0).is_err());
    }

    #[test]
    fn kz2_degrees() {
        assert_eq!(kz2_generator_degree(1), 2);
        assert_eq!(beta_degree(p(3), 1).unwrap(), 6);
        for pr in [2, 3, 5, 7] {
            for i in 1..=6 {
                assert!(beta_power_relation_holds(p(pr), i).unwrap());
            }
        }
    }

    #[test]
    fn lint_rows() {
        let rows = lint_theta_coefficients(p(3), 2).unwrap();
        assert_eq!(rows[0].required, RODegree::new(-4, 0));
        assert_eq!((rows[0].forced_exponent, rows[0].printed_exponent), (1, 5));
        assert_eq!(rows[1].required, RODegree::new(-12, 0));
        assert_eq!((rows[1].forced_exponent, rows[1].printed_exponent), (5, 17));
        assert!(rows.iter().all(|r| !r.exponent_matches && r.restriction_pass));
    }

    #[test]
    fn mult_gap_rows() {
        let rows = mult_gap_table(p(5), 4).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert_eq!(rows[0].gap, theta_degree());
    }

    #[test]
    fn coefficient_sweep_never_fails() {
        let s = coefficient_sweep(p(3), 1).unwrap();
        assert_eq!(s.fail, 0);
        assert_eq!(s.pass + s.flagged, 3 + 9);
        // all i = 0 coefficients have zero fixed dimension
        assert!(s.flagged_at.contains(&(0, 2)));
    }
}
