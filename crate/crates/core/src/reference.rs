//! Classical reference series, each built from a list of free generators.
//!
//! Nothing here goes through the expression/lens pipeline, so these series
//! serve as independent targets for it.

use crate::grading::Prime;
use crate::series::{from_generators, GeneratorSpec, GradedDimSeries, SeriesError};

/// Positions `i ≥ start` with `2p^i - 2 ≤ n`, paired with `p^i`.
fn milnor_indices(p: Prime, start: u32, n: i64) -> impl Iterator<Item = (u32, i64)> {
    (start..)
        .map_while(move |i| p.pow(i).ok().map(|pi| (i, pi)))
        .take_while(move |&(_, pi)| pi.checked_mul(2).is_some_and(|d| d - 2 <= n.max(0)))
}

/// `ξ_i` (polynomial, `2p^i - 2`, `i ≥ 1`) and `τ_i` (exterior, `2p^i - 1`,
/// `i ≥ 0`), everything of degree at most `n`.
pub fn milnor_generators(p: Prime, n: i64) -> Vec<GeneratorSpec> {
    let mut gens = Vec::new();
    for (i, pi) in milnor_indices(p, 0, n) {
        if i >= 1 && 2 * pi - 2 <= n {
            gens.push(GeneratorSpec::polynomial(format!("xi{i}"), 2 * pi - 2));
        }
        if 2 * pi - 1 <= n {
            gens.push(GeneratorSpec::exterior(format!("tau{i}"), 2 * pi - 1));
        }
    }
    gens
}

/// Dimensions of the dual Steenrod algebra `A_* = F_p[ξ_i] ⊗ Λ(τ_i)`.
pub fn milnor_series(p: Prime, n: i64) -> GradedDimSeries {
    from_generators(&milnor_generators(p, n), n).expect("milnor generators are valid")
}

/// `ξ_i` in degree `2^i - 1`, `i ≥ 1`: the mod 2 dual Steenrod algebra in
/// its classical presentation.
pub fn milnor_generators_p2_classical(n: i64) -> Vec<GeneratorSpec> {
    (1..63)
        .map(|i| (i, (1i64 << i) - 1))
        .take_while(|&(_, d)| d <= n)
        .map(|(i, d)| GeneratorSpec::polynomial(format!("xi{i}"), d))
        .collect()
}

pub fn milnor_series_p2_classical(n: i64) -> Result<GradedDimSeries, SeriesError> {
    from_generators(&milnor_generators_p2_classical(n), n)
}

/// `ξ_i` and `τ_i` for `i ≥ 1` only: mod p homology of `Z ⊗ Z`.
pub fn hz_modp_generators(p: Prime, n: i64) -> Vec<GeneratorSpec> {
    milnor_generators(p, n).into_iter().filter(|g| g.name != "tau0").collect()
}

pub fn hz_modp_series(p: Prime, n: i64) -> GradedDimSeries {
    from_generators(&hz_modp_generators(p, n), n).expect("generators are valid")
}

pub fn b_generator() -> GeneratorSpec {
    GeneratorSpec::polynomial("b", 2)
}

/// `F_p[b]` with `|b| = 2`.
pub fn b_polynomial(n: i64) -> GradedDimSeries {
    from_generators(&[b_generator()], n).expect("b is valid")
}

/// Generators of `A_* ⊗ F_p[b]`, the phi-lens target.
pub fn milnor_b_generators(p: Prime, n: i64) -> Vec<GeneratorSpec> {
    let mut gens = milnor_generators(p, n);
    gens.push(b_generator());
    gens
}

/// Cells of `cofib(Σ^{|t_i|} S^0[t_i] --p·t_i--> S^0[t_i])` through `n`.
///
/// `S^0[t_i]` has a cell at each `j|t_i|`; the shifted copy contributes
/// `(j + 1)|t_i|` again, moved up one degree by the cofiber.
pub fn classical_zz_factor_cells(p: Prime, i: u32, n: i64) -> Vec<i64> {
    let t = match p.pow(i) {
        Ok(pi) if i >= 1 => 2 * pi - 2,
        _ => return vec![0],
    };
    let base = (0..).map(|j| j * t).take_while(|&d| d <= n);
    let shifted = (1..).map(|j| j * t + 1).take_while(|&d| d <= n);
    let mut out: Vec<i64> = base.chain(shifted).collect();
    out.sort_unstable();
    out
}

/// Cells of the classical decomposition of `Z_(p) ⊗ Z_(p)` over `Z_(p)`,
/// the Minkowski sum of the per-factor cells over all `i ≥ 1`, through `n`.
pub fn classical_zz_cells(p: Prime, n: i64) -> Vec<i64> {
    let mut acc = vec![0i64];
    for i in 1.. {
        let factor = classical_zz_factor_cells(p, i, n);
        if factor.len() == 1 {
            break;
        }
        let mut next = Vec::with_capacity(acc.len() * 2);
        for &a in &acc {
            next.extend(factor.iter().map(|&b| a + b).filter(|&d| d <= n));
        }
        acc = next;
    }
    acc.sort_unstable();
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::GeneratorSpec;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn milnor_examples() {
        assert_eq!(milnor_series(p(3), 5).to_dense(0, 5), vec![1, 1, 0, 0, 1, 2]);
        assert_eq!(milnor_series(p(2), 3).to_dense(0, 3), vec![1, 1, 1, 2]);
        assert_eq!(milnor_series(p(5), 8).get(8), 1);
    }

    #[test]
    fn classical_p2_examples() {
        let s = milnor_series_p2_classical(4).unwrap();
        assert_eq!(s.to_dense(0, 4), vec![1, 1, 1, 2, 2]);
        assert_eq!(milnor_series_p2_classical(0).unwrap().to_dense(0, 0), vec![1]);
    }

    #[test]
    fn hz_examples() {
        assert_eq!(hz_modp_series(p(3), 5).to_dense(0, 5), vec![1, 0, 0, 0, 1, 1]);
        assert_eq!(hz_modp_series(p(2), 2).get(2), 1);
        let tau0 = from_generators(&[GeneratorSpec::exterior("tau0", 1)], 40).unwrap();
        for pr in [2, 3, 5] {
            assert_eq!(hz_modp_series(p(pr), 40).tensor(&tau0).unwrap(), milnor_series(p(pr), 40));
        }
    }

    #[test]
    fn b_and_cells() {
        assert_eq!(b_polynomial(4).to_dense(0, 4), vec![1, 0, 1, 0, 1]);
        assert_eq!(classical_zz_factor_cells(p(3), 1, 9), vec![0, 4, 5, 8, 9]);
        assert_eq!(classical_zz_cells(p(3), 9), vec![0, 4, 5, 8, 9]);
        assert_eq!(classical_zz_cells(p(3), 0), vec![0]);
    }

    #[test]
    fn generator_lists_stay_below_n() {
        for pr in [2, 3, 5, 7] {
            for n in [0, 1, 3, 17, 100] {
                assert!(milnor_generators(p(pr), n).iter().all(|g| g.degree <= n));
            }
        }
        let names: Vec<_> = milnor_generators(p(3), 17).into_iter().map(|g| g.name).collect();
        assert_eq!(names, ["tau0", "xi1", "tau1", "xi2", "tau2"]);
    }
}
