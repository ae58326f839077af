//! The two dimension-counting functors applied to a [`SpectrumExpr`].
//!
//! * [`Lens::Underlying`]: forget the action and count mod-p homology of the
//!   underlying spectrum. Degrees are read off `RODegree::underlying`.
//! * [`Lens::Phi`]: geometric fixed points, counted as an `F_p[b]`-basis of
//!   `(Z̲ ⊗ e)^{ΦC_p}`, equivalently the dimension of `F_p ⊗ e^{ΦC_p}`.
//!   Degrees are read off `RODegree::fixed`.
//!
//! Atom rules:
//!
//! | atom        | underlying     | phi            |
//! |-------------|----------------|----------------|
//! | `S^d`       | `u`            | `f`            |
//! | `Σ^d Cθ`    | `u`, `u + 1`   | `f - 1`, `f`   |
//! | `Σ^d M(p)`  | `u`, `u + 1`   | `f`, `f + 1`   |
//!
//! `Cθ` is a Moore spectrum underlying. On fixed points `θ` becomes the
//! zero map `S^{-2} → S^0`, since it is a transfer, so `Φ Cθ = S^0 ⊕ S^{-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{BlockError, SpectrumExpr};
use crate::grading::RODegree;
use crate::series::{GradedDimSeries, SeriesError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lens {
    Underlying,
    Phi,
}

impl Lens {
    pub const ALL: [Lens; 2] = [Lens::Underlying, Lens::Phi];

    pub fn degree(self, d: RODegree) -> i64 {
        match self {
            Lens::Underlying => d.underlying,
            Lens::Phi => d.fixed,
        }
    }

    /// Cell degrees of an atom, `None` for composite nodes.
    pub fn atom_cells(self, atom: &SpectrumExpr) -> Option<Vec<i64>> {
        match (self, atom) {
            (_, SpectrumExpr::Unit) => Some(vec![0]),
            (_, SpectrumExpr::Sphere { degree }) => Some(vec![self.degree(*degree)]),
            (Lens::Underlying, SpectrumExpr::CTheta { degree } | SpectrumExpr::Moore { degree }) => {
                Some(vec![degree.underlying, degree.underlying + 1])
            }
            (Lens::Phi, SpectrumExpr::CTheta { degree }) => Some(vec![degree.fixed - 1, degree.fixed]),
            (Lens::Phi, SpectrumExpr::Moore { degree }) => Some(vec![degree.fixed, degree.fixed + 1]),
            _ => None,
        }
    }
}

impl fmt::Display for Lens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lens::Underlying => "underlying",
            Lens::Phi => "phi",
        })
    }
}

impl std::str::FromStr for Lens {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "underlying" => Ok(Lens::Underlying),
            "phi" => Ok(Lens::Phi),
            _ => Err(format!("unknown lens {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Dimension series of `expr` through lens degree `n`.
pub fn eval(expr: &SpectrumExpr, lens: Lens, n: i64) -> Result<GradedDimSeries, EvalError> {
    let expanded = expr.expand(lens, n)?;
    let out = eval_expanded(&expanded, lens, n)?;
    Ok(out.truncate(n))
}

/// Evaluates an expanded expression; the result is exact through at least
/// `n` (and carries truncation exactly `n`).
fn eval_expanded(expr: &SpectrumExpr, lens: Lens, n: i64) -> Result<GradedDimSeries, EvalError> {
    match expr {
        SpectrumExpr::Sum { terms } => {
            let lb = expr.lens_lower_bound(lens).unwrap_or(0);
            let mut acc = GradedDimSeries::zero(lb, n);
            for t in terms {
                acc = acc.sum(&eval_expanded(t, lens, n)?)?;
            }
            Ok(acc)
        }
        SpectrumExpr::Tensor { factors } => {
            let lbs: Option<Vec<i64>> = factors.iter().map(|f| f.lens_lower_bound(lens)).collect();
            let Some(lbs) = lbs else {
                return Ok(GradedDimSeries::zero(0, n));
            };
            let negative: i64 = lbs.iter().map(|&lb| lb.min(0)).sum();
            // Every factor is evaluated far enough up that the negative cells
            // of all the others cannot pull in unknown classes.
            let reach = n - negative;
            let mut acc = GradedDimSeries::unit(reach);
            for f in factors {
                acc = acc.tensor(&eval_expanded(f, lens, reach)?)?.truncate(reach);
            }
            Ok(acc.truncate(n))
        }
        SpectrumExpr::FreeNorm { .. }
        | SpectrumExpr::TTheta { .. }
        | SpectrumExpr::DsaFactor { .. }
        | SpectrumExpr::DsaModel { .. } => eval_expanded(&expr.expand(lens, n)?, lens, n),
        atom => {
            let cells = lens.atom_cells(atom).expect("atoms have a cell rule");
            let lb = cells.iter().copied().min().unwrap_or(0);
            Ok(GradedDimSeries::from_degrees(lb, n, cells)?)
        }
    }
}

/// Outcome of one degreewise comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub equal: bool,
    pub first_mismatch: Option<i64>,
}

impl Comparison {
    pub fn of(lhs: &GradedDimSeries, rhs: &GradedDimSeries) -> Self {
        let first_mismatch = lhs.first_mismatch(rhs);
        Comparison { equal: first_mismatch.is_none(), first_mismatch }
    }
}

/// Verdicts on the three hypotheses of the equivalence-detection criterion
/// for a map of bounded-below `Z̲`-modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    /// (i) underlying dimensions agree.
    pub underlying: Comparison,
    /// (ii) geometric fixed point dimensions are finite and agree.
    pub phi: Comparison,
    /// (iii) both sides are graded-free over `F_p[b]`. Every phi count here
    /// is already a count of `F_p[b]`-basis elements, so this holds by
    /// construction.
    pub free_over_b: bool,
}

impl DetectionReport {
    pub fn all_pass(&self) -> bool {
        self.underlying.equal && self.phi.equal && self.free_over_b
    }
}

/// Checks hypotheses (i)–(iii) for `lhs` against reference series for the
/// target's underlying and phi dimensions, through degree `n`.
pub fn check_detect_hypotheses(
    lhs: &SpectrumExpr,
    rhs_underlying: &GradedDimSeries,
    rhs_phi: &GradedDimSeries,
    n: i64,
) -> Result<DetectionReport, EvalError> {
    let under = eval(lhs, Lens::Underlying, n)?;
    let phi = eval(lhs, Lens::Phi, n)?;
    Ok(DetectionReport {
        underlying: Comparison::of(&under, &rhs_underlying.truncate(n)),
        phi: Comparison::of(&phi, &rhs_phi.truncate(n)),
        free_over_b: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{lambda_degree, Prime};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ctheta_on_fixed_points() {
        let s = eval(&SpectrumExpr::CTheta { degree: RODegree::ZERO }, Lens::Phi, 5).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(-1, 1), (0, 1)]);
        assert_eq!(s.lower_bound(), -1);
    }

    #[test]
    fn model_examples() {
        let m = SpectrumExpr::DsaModel { p: p(3) };
        assert_eq!(eval(&m, Lens::Phi, 6).unwrap().to_dense(0, 6), vec![1, 1, 1, 1, 2, 3, 3]);
        assert_eq!(
            eval(&m, Lens::Underlying, 10).unwrap().to_dense(0, 10),
            vec![1, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0]
        );
    }

    #[test]
    fn sum_and_tensor_are_additive_and_multiplicative() {
        let a = SpectrumExpr::DsaFactor { p: p(3), i: 1 };
        let b = SpectrumExpr::CTheta { degree: RODegree::new(2, 4) };
        for lens in Lens::ALL {
            let ea = eval(&a, lens, 30).unwrap();
            let eb = eval(&b, lens, 30).unwrap();
            let sum = eval(&SpectrumExpr::sum(vec![a.clone(), b.clone()]), lens, 30).unwrap();
            assert_eq!(sum, ea.sum(&eb).unwrap());
            let prod = eval(&SpectrumExpr::tensor(vec![a.clone(), b.clone()]), lens, 30).unwrap();
            assert_eq!(prod, ea.tensor(&eb).unwrap());
        }
    }

    #[test]
    fn tensor_with_negative_phi_cells() {
        // Φ(Cθ ⊗ Cθ) has cells -2, -1, -1, 0.
        let c = SpectrumExpr::CTheta { degree: RODegree::ZERO };
        let s = eval(&SpectrumExpr::tensor(vec![c.clone(), c]), Lens::Phi, 0).unwrap();
        assert_eq!(s.to_dense(-2, 0), vec![1, 2, 1]);
        // A negative factor must not lose the other factor's top cells.
        let high = SpectrumExpr::sphere(RODegree::new(4, 4));
        let c = SpectrumExpr::CTheta { degree: RODegree::ZERO };
        let s = eval(&SpectrumExpr::tensor(vec![c, high]), Lens::Phi, 3).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(3, 1)]);
    }

    #[test]
    fn detection_hypotheses() {
        let n = 10;
        let unit = GradedDimSeries::unit(n);
        let r = check_detect_hypotheses(&SpectrumExpr::Unit, &unit, &unit, n).unwrap();
        assert!(r.all_pass());

        let s = SpectrumExpr::sphere(lambda_degree());
        let r = check_detect_hypotheses(&s, &unit.shift(2), &unit, n).unwrap();
        assert!(r.underlying.equal);
        assert!(r.phi.equal);

        let r = check_detect_hypotheses(&s, &unit, &unit, n).unwrap();
        assert!(!r.underlying.equal);
        assert_eq!(r.underlying.first_mismatch, Some(0));
    }

    #[test]
    fn lens_parse() {
        assert_eq!("phi".parse::<Lens>().unwrap(), Lens::Phi);
        assert!("both".parse::<Lens>().is_err());
    }
}
