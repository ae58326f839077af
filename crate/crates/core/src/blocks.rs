//! Cell-complex expressions for the `C_p`-spectra in the dual Steenrod
//! algebra model.
//!
//! A [`SpectrumExpr`] is a finite description of a (possibly infinite)
//! wedge/smash of spheres, `Cθ` cells and Moore spectra. The infinite pieces,
//! the free algebra `S^0[N t_i]` and the countable tensor product over `i`,
//! are kept as named nodes and only expanded against a lens and a top degree.
//! Expansion is sound because every infinite sum has summand degrees going
//! to `+∞` in both lenses.
//!
//! The tree serializes to JSON with an `"op"` tag, which is also the format
//! the CLI reads expression files in.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{norm_degree, t_degree, GradingError, Prime, RODegree};
use crate::lenses::Lens;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("free norm algebra on a class of {lens} degree {degree} does not converge")]
    Divergent { lens: Lens, degree: i64 },
    #[error("cell enumeration exceeded {0} cells")]
    TooManyCells(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SpectrumExpr {
    /// The sphere `S^0`.
    Unit,
    Sphere { degree: RODegree },
    /// `Σ^d Cθ`.
    CTheta { degree: RODegree },
    /// `Σ^d M(p)`.
    Moore { degree: RODegree },
    Sum { terms: Vec<SpectrumExpr> },
    Tensor { factors: Vec<SpectrumExpr> },
    /// `S^0[N t_i]`, the free algebra on the norm class.
    FreeNorm { p: Prime, i: u32 },
    /// `T_θ(t_i)`.
    TTheta { p: Prime, i: u32 },
    /// `X_i = S^0 ⊕ (S^0[N t_i] ⊗ T_θ(t_i))`.
    DsaFactor { p: Prime, i: u32 },
    /// `X = ⊗_{i ≥ 1} X_i`.
    DsaModel { p: Prime },
}

impl SpectrumExpr {
    pub fn sphere(degree: RODegree) -> Self {
        SpectrumExpr::Sphere { degree }
    }

    pub fn sum(terms: Vec<SpectrumExpr>) -> Self {
        SpectrumExpr::Sum { terms }
    }

    pub fn tensor(factors: Vec<SpectrumExpr>) -> Self {
        SpectrumExpr::Tensor { factors }
    }

    /// Replaces the named infinite nodes by finite expressions that agree
    /// with them through lens degree `n`.
    pub fn expand(&self, lens: Lens, n: i64) -> Result<SpectrumExpr, BlockError> {
        use SpectrumExpr::*;
        Ok(match self {
            Unit | Sphere { .. } | CTheta { .. } | Moore { .. } => self.clone(),
            Sum { terms } => Sum {
                terms: terms.iter().map(|t| t.expand(lens, n)).collect::<Result<_, _>>()?,
            },
            Tensor { factors } => Tensor {
                factors: factors.iter().map(|f| f.expand(lens, n)).collect::<Result<_, _>>()?,
            },
            FreeNorm { p, i } => free_norm(*p, *i, lens, n)?,
            TTheta { p, i } => t_theta(*p, *i)?,
            DsaFactor { p, i } => dsa_factor(*p, *i)?.expand(lens, n)?,
            DsaModel { p } => dsa_model(*p, lens, n)?.expand(lens, n)?,
        })
    }

    /// Lowest lens degree of a cell, or `None` for the zero spectrum.
    ///
    /// Only meaningful on expanded expressions; the named infinite nodes are
    /// all connective with a bottom cell in degree 0.
    pub fn lens_lower_bound(&self, lens: Lens) -> Option<i64> {
        use SpectrumExpr::*;
        match self {
            Sum { terms } => terms.iter().filter_map(|t| t.lens_lower_bound(lens)).min(),
            Tensor { factors } => factors
                .iter()
                .map(|f| f.lens_lower_bound(lens))
                .try_fold(0, |acc, lb| lb.map(|lb| acc + lb)),
            FreeNorm { .. } | DsaFactor { .. } | DsaModel { .. } => Some(0),
            TTheta { p, i } => t_theta(*p, *i).ok().and_then(|e| e.lens_lower_bound(lens)),
            atom => lens.atom_cells(atom).and_then(|cells| cells.iter().copied().min()),
        }
    }
}

/// `T_θ(t_i) = ⊕_{j=1}^{p-1} Σ^{j|t_i|} Cθ ⊕ Σ^{|N t_i|} M(p)`.
pub fn t_theta(p: Prime, i: u32) -> Result<SpectrumExpr, BlockError> {
    let t = t_degree(p, i)?;
    let mut terms: Vec<SpectrumExpr> = (1..i64::from(p.get()))
        .map(|j| SpectrumExpr::CTheta { degree: j * t })
        .collect();
    terms.push(SpectrumExpr::Moore { degree: norm_degree(p, i)? });
    Ok(SpectrumExpr::Sum { terms })
}

/// The spheres `S^{k|N t_i|}`, `k ≥ 0`, whose lens degree is at most `n`.
pub fn free_norm(p: Prime, i: u32, lens: Lens, n: i64) -> Result<SpectrumExpr, BlockError> {
    let step = norm_degree(p, i)?;
    let lens_step = lens.degree(step);
    if lens_step <= 0 {
        return Err(BlockError::Divergent { lens, degree: lens_step });
    }
    if n < lens_step {
        return Ok(SpectrumExpr::Unit);
    }
    let terms = (0..)
        .take_while(|k| k * lens_step <= n)
        .map(|k| SpectrumExpr::sphere(k * step))
        .collect();
    Ok(SpectrumExpr::Sum { terms })
}

/// `X_i = S^0 ⊕ (S^0[N t_i] ⊗ T_θ(t_i))` with its named parts unexpanded.
pub fn dsa_factor(p: Prime, i: u32) -> Result<SpectrumExpr, BlockError> {
    t_degree(p, i)?;
    Ok(SpectrumExpr::sum(vec![
        SpectrumExpr::Unit,
        SpectrumExpr::tensor(vec![SpectrumExpr::FreeNorm { p, i }, SpectrumExpr::TTheta { p, i }]),
    ]))
}

/// Lens degree of the lowest positive cell of `X_i`.
///
/// Underlying: the bottom cell of `Σ^{|t_i|}Cθ`, at `2p^i - 2`. Geometric
/// fixed points: the `-1` cell of the same summand, at `2p^{i-1} - 1`.
pub fn first_positive_cell(p: Prime, i: u32, lens: Lens) -> Result<i64, BlockError> {
    let t = t_degree(p, i)?;
    Ok(match lens {
        Lens::Underlying => t.underlying,
        Lens::Phi => t.fixed - 1,
    })
}

/// The largest `i` such that `X_i` has a positive cell of lens degree at
/// most `n`; factors past it contribute only the unit.
pub fn i_max(p: Prime, lens: Lens, n: i64) -> Result<u32, BlockError> {
    let mut i = 0;
    while first_positive_cell(p, i + 1, lens)? <= n {
        i += 1;
    }
    Ok(i)
}

/// `⊗_{i=1}^{i_max} X_i`, the finite part of the model visible through
/// degree `n`. Empty tensor (the unit) when no factor reaches `n`.
pub fn dsa_model(p: Prime, lens: Lens, n: i64) -> Result<SpectrumExpr, BlockError> {
    let top = i_max(p, lens, n)?;
    if top == 0 {
        return Ok(SpectrumExpr::Unit);
    }
    Ok(SpectrumExpr::Tensor {
        factors: (1..=top).map(|i| SpectrumExpr::DsaFactor { p, i }).collect(),
    })
}

/// Upper limit on the size of a cell multiset.
pub const MAX_CELLS: usize = 5_000_000;

/// The multiset of lens degrees of cells, at most `n`, sorted.
///
/// Tensor products are the Minkowski sum of the factor multisets. This walks
/// cells directly, independently of [`crate::lenses::eval`].
pub fn cells(expr: &SpectrumExpr, lens: Lens, n: i64) -> Result<Vec<i64>, BlockError> {
    let expanded = expr.expand(lens, n)?;
    let mut out = cells_expanded(&expanded, lens, n)?;
    out.sort_unstable();
    Ok(out)
}

fn cells_expanded(expr: &SpectrumExpr, lens: Lens, n: i64) -> Result<Vec<i64>, BlockError> {
    use SpectrumExpr::*;
    match expr {
        Sum { terms } => {
            let mut out = Vec::new();
            for t in terms {
                out.extend(cells_expanded(t, lens, n)?);
                if out.len() > MAX_CELLS {
                    return Err(BlockError::TooManyCells(MAX_CELLS));
                }
            }
            Ok(out)
        }
        Tensor { factors } => {
            let lbs: Option<Vec<i64>> = factors.iter().map(|f| f.lens_lower_bound(lens)).collect();
            let Some(lbs) = lbs else { return Ok(Vec::new()) };
            let negative: i64 = lbs.iter().map(|&lb| lb.min(0)).sum();
            let mut acc = vec![0i64];
            for (f, &lb) in factors.iter().zip(&lbs) {
                // room for the other factors' negative cells
                let reach = n - (negative - lb.min(0));
                let fc = cells_expanded(f, lens, reach)?;
                let mut next = Vec::new();
                for &a in &acc {
                    for &b in &fc {
                        next.push(a + b);
                    }
                    if next.len() > MAX_CELLS {
                        return Err(BlockError::TooManyCells(MAX_CELLS));
                    }
                }
                acc = next;
            }
            acc.retain(|&d| d <= n);
            Ok(acc)
        }
        FreeNorm { .. } | TTheta { .. } | DsaFactor { .. } | DsaModel { .. } => {
            cells_expanded(&expr.expand(lens, n)?, lens, n)
        }
        atom => Ok(lens
            .atom_cells(atom)
            .expect("atoms have a cell rule")
            .into_iter()
            .filter(|&d| d <= n)
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn ctheta(f: i64, u: i64) -> SpectrumExpr {
        SpectrumExpr::CTheta { degree: RODegree::new(f, u) }
    }

    fn moore(f: i64, u: i64) -> SpectrumExpr {
        SpectrumExpr::Moore { degree: RODegree::new(f, u) }
    }

    #[test]
    fn t_theta_shapes() {
        assert_eq!(
            t_theta(p(3), 1).unwrap(),
            SpectrumExpr::sum(vec![ctheta(2, 4), ctheta(4, 8), moore(4, 12)])
        );
        assert_eq!(t_theta(p(2), 1).unwrap(), SpectrumExpr::sum(vec![ctheta(2, 2), moore(2, 4)]));
        let SpectrumExpr::Sum { terms } = t_theta(p(5), 1).unwrap() else { panic!() };
        assert_eq!(terms.len(), 5);
        for (j, t) in terms.iter().take(4).enumerate() {
            let j = j as i64 + 1;
            assert_eq!(*t, ctheta(2 * j, 8 * j));
        }
        assert_eq!(terms[4], moore(8, 40));
        assert!(t_theta(p(5), 0).is_err());
    }

    #[test]
    fn free_norm_truncation() {
        let SpectrumExpr::Sum { terms } = free_norm(p(3), 1, Lens::Underlying, 30).unwrap() else {
            panic!()
        };
        let degrees: Vec<_> = terms
            .iter()
            .map(|t| match t {
                SpectrumExpr::Sphere { degree } => *degree,
                _ => panic!(),
            })
            .collect();
        assert_eq!(degrees, vec![RODegree::new(0, 0), RODegree::new(4, 12), RODegree::new(8, 24)]);
        let SpectrumExpr::Sum { terms } = free_norm(p(3), 1, Lens::Phi, 30).unwrap() else {
            panic!()
        };
        assert_eq!(terms.len(), 8);
        assert_eq!(free_norm(p(3), 1, Lens::Underlying, 11).unwrap(), SpectrumExpr::Unit);
        assert_eq!(free_norm(p(7), 2, Lens::Phi, 0).unwrap(), SpectrumExpr::Unit);
    }

    #[test]
    fn model_factor_counts() {
        assert_eq!(i_max(p(3), Lens::Underlying, 10).unwrap(), 1);
        assert_eq!(i_max(p(3), Lens::Phi, 10).unwrap(), 2);
        assert_eq!(i_max(p(5), Lens::Underlying, 7).unwrap(), 0);
        assert_eq!(dsa_model(p(5), Lens::Underlying, 7).unwrap(), SpectrumExpr::Unit);
        assert_eq!(
            dsa_model(p(3), Lens::Phi, 10).unwrap(),
            SpectrumExpr::tensor(vec![
                SpectrumExpr::DsaFactor { p: p(3), i: 1 },
                SpectrumExpr::DsaFactor { p: p(3), i: 2 },
            ])
        );
    }

    #[test]
    fn cell_examples() {
        assert_eq!(cells(&SpectrumExpr::Unit, Lens::Underlying, 5).unwrap(), vec![0]);
        let tt = t_theta(p(3), 1).unwrap();
        assert_eq!(cells(&tt, Lens::Underlying, 13).unwrap(), vec![4, 5, 8, 9, 12, 13]);
        assert_eq!(cells(&tt, Lens::Phi, 5).unwrap(), vec![1, 2, 3, 4, 4, 5]);
    }

    #[test]
    fn factor_cells_underlying() {
        let f = SpectrumExpr::DsaFactor { p: p(3), i: 1 };
        assert_eq!(cells(&f, Lens::Underlying, 20).unwrap(), vec![0, 4, 5, 8, 9, 12, 13, 16, 17, 20]);
    }

    #[test]
    fn tensor_with_negative_cells_is_exact() {
        // Σ^{-1}-ish factor: Cθ in degree 0 has a Φ-cell at -1.
        let e = SpectrumExpr::tensor(vec![ctheta(0, 0), SpectrumExpr::sphere(RODegree::new(3, 3))]);
        assert_eq!(cells(&e, Lens::Phi, 2).unwrap(), vec![2]);
        assert_eq!(e.lens_lower_bound(Lens::Phi), Some(2));
    }

    #[test]
    fn json_tree_round_trip() {
        let e = SpectrumExpr::tensor(vec![
            SpectrumExpr::DsaModel { p: p(3) },
            SpectrumExpr::sum(vec![SpectrumExpr::Unit, SpectrumExpr::sphere(RODegree::new(1, 1))]),
        ]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"op":"tensor","factors":[{"op":"dsa_model","p":3},{"op":"sum","terms":[{"op":"unit"},{"op":"sphere","degree":{"fixed":1,"underlying":1}}]}]}"#
        );
        assert_eq!(serde_json::from_str::<SpectrumExpr>(&json).unwrap(), e);
        assert!(serde_json::from_str::<SpectrumExpr>(r#"{"op":"dsa_model","p":4}"#).is_err());
    }
}
