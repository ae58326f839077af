//! Degree arithmetic on the p-local `RO(C_p)` lattice.
//!
//! After p-localization every representation sphere `S^{λ^k}` with `(k, p) = 1`
//! is identified with `S^λ`, so a virtual representation is determined by two
//! integers: the dimension of its fixed subspace and its total real
//! dimension. [`RODegree`] stores exactly that pair. For odd `p` the
//! difference `underlying - fixed` is always even, since the only nontrivial
//! irreducible is the 2-dimensional `λ`. For `p = 2` the sign representation
//! `σ = (0, 1)` makes every integer pair reachable.
//!
//! The named constants here are the ones the dual Steenrod algebra
//! computation keeps reaching for: `λ`, the regular representation `ρ`,
//! the degree of `θ: S^{λ-2} → S^0` and of the Thom class `u_λ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("index i must be at least 1, got {0}")]
    IndexTooSmall(u32),
    #[error("coefficient index j = {j} is out of range 0..{bound}")]
    CoefficientOutOfRange { j: u64, bound: u64 },
    #[error("degree arithmetic overflowed for p = {p}, exponent {exponent}")]
    Overflow { p: u32, exponent: u32 },
}

/// A prime number `p ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, GradingError> {
        if is_prime(u64::from(p)) {
            Ok(Prime(p))
        } else {
            Err(GradingError::NotPrime(u64::from(p)))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `p^e` as a signed degree, failing on overflow.
    pub fn pow(self, e: u32) -> Result<i64, GradingError> {
        i64::from(self.0).checked_pow(e).ok_or(GradingError::Overflow { p: self.0, exponent: e })
    }
}

impl TryFrom<u32> for Prime {
    type Error = GradingError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for Prime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p: u32 = s.trim().parse().map_err(|_| format!("{s:?} is not an integer"))?;
        Prime::new(p).map_err(|_| format!("{p} is not prime"))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A point `(fixed, underlying)` of the p-local `RO(C_p)` degree lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RODegree {
    pub fixed: i64,
    pub underlying: i64,
}

impl RODegree {
    pub const ZERO: RODegree = RODegree { fixed: 0, underlying: 0 };

    pub const fn new(fixed: i64, underlying: i64) -> Self {
        RODegree { fixed, underlying }
    }

    /// The trivial representation of dimension `n`.
    pub const fn trivial(n: i64) -> Self {
        RODegree { fixed: n, underlying: n }
    }

    /// Whether this degree is a combination of `1` and `λ` (odd `p`), or of
    /// `1` and `σ` (`p = 2`).
    pub fn is_admissible(self, p: Prime) -> bool {
        !p.is_odd() || (self.underlying - self.fixed) % 2 == 0
    }
}

impl fmt::Display for RODegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.fixed, self.underlying)
    }
}

impl Add for RODegree {
    type Output = RODegree;
    fn add(self, rhs: RODegree) -> RODegree {
        RODegree::new(self.fixed + rhs.fixed, self.underlying + rhs.underlying)
    }
}

impl AddAssign for RODegree {
    fn add_assign(&mut self, rhs: RODegree) {
        *self = *self + rhs;
    }
}

impl Sub for RODegree {
    type Output = RODegree;
    fn sub(self, rhs: RODegree) -> RODegree {
        RODegree::new(self.fixed - rhs.fixed, self.underlying - rhs.underlying)
    }
}

impl Neg for RODegree {
    type Output = RODegree;
    fn neg(self) -> RODegree {
        RODegree::new(-self.fixed, -self.underlying)
    }
}

impl Mul<RODegree> for i64 {
    type Output = RODegree;
    fn mul(self, rhs: RODegree) -> RODegree {
        RODegree::new(self * rhs.fixed, self * rhs.underlying)
    }
}

/// The regular representation `ρ_{C_p}`: one fixed line, total dimension `p`.
pub fn rho(p: Prime) -> RODegree {
    RODegree::new(1, i64::from(p.get()))
}

/// `λ`: the plane rotated by `e^{2πi/p}`.
pub const fn lambda_degree() -> RODegree {
    RODegree::new(0, 2)
}

/// The sign representation of `C_2`.
pub const fn sigma_degree() -> RODegree {
    RODegree::new(0, 1)
}

/// Degree of `θ: S^{λ-2} → S^0`, i.e. `λ - 2`.
pub const fn theta_degree() -> RODegree {
    RODegree::new(-2, 0)
}

/// Degree of the Thom class `u_λ ∈ π_{λ-2} Z̲`.
pub const fn u_lambda_degree() -> RODegree {
    RODegree::new(-2, 0)
}

fn require_positive(i: u32) -> Result<(), GradingError> {
    if i < 1 {
        Err(GradingError::IndexTooSmall(i))
    } else {
        Ok(())
    }
}

/// Degree `2p^{i-1}ρ - λ` of the generator `t_i`.
pub fn t_degree(p: Prime, i: u32) -> Result<RODegree, GradingError> {
    require_positive(i)?;
    Ok(2 * p.pow(i - 1)? * rho(p) - lambda_degree())
}

/// Degree `(2p^i - 2)ρ` of the norm `N(t_i)`.
///
/// The norm sends an underlying degree `n` to `nρ`, so this is
/// `t_degree(p, i).underlying · ρ`.
pub fn norm_degree(p: Prime, i: u32) -> Result<RODegree, GradingError> {
    let t = t_degree(p, i)?;
    Ok(t.underlying * rho(p))
}

/// `|N(t_i)| - p·|t_i|`. Always `λ - 2`, which is why `p·N(t_i)` is the
/// transfer `θ·t_i^p`.
pub fn norm_transfer_gap(p: Prime, i: u32) -> Result<RODegree, GradingError> {
    let t = t_degree(p, i)?;
    Ok(norm_degree(p, i)? - i64::from(p.get()) * t)
}

/// Degree of the Lewis generator `e_k`, the sum of `λ^{i-k}` over `0 ≤ i < k`.
///
/// A summand `λ^m` is the trivial 2-plane when `p | m` and collapses to `λ`
/// otherwise, so the fixed dimension is `2⌊k/p⌋` and the total is `2k`.
pub fn e_degree(p: Prime, k: u64) -> RODegree {
    let k = i64::try_from(k).expect("e_degree index exceeds i64");
    let p = i64::from(p.get());
    RODegree::new(2 * (k / p), 2 * k)
}

/// `p·|e_{p^i}| - |e_{p^{i+1}}|`: `λ - 2` at `i = 0` and zero afterwards.
pub fn mult_gap(p: Prime, i: u32) -> Result<RODegree, GradingError> {
    let lo = p.pow(i)? as u64;
    let hi = p.pow(i + 1)? as u64;
    Ok(i64::from(p.get()) * e_degree(p, lo) - e_degree(p, hi))
}

/// Where a coefficient degree falls relative to the region in which
/// `π_⋆ Z̲` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanishingVerdict {
    /// Positive underlying and positive fixed dimension.
    Pass,
    /// Positive underlying dimension but zero fixed dimension.
    PassWithFlag,
    Fail,
}

impl VanishingVerdict {
    pub fn classify(d: RODegree) -> Self {
        match (d.underlying > 0, d.fixed) {
            (true, f) if f > 0 => VanishingVerdict::Pass,
            (true, 0) => VanishingVerdict::PassWithFlag,
            _ => VanishingVerdict::Fail,
        }
    }
}

impl fmt::Display for VanishingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VanishingVerdict::Pass => "PASS",
            VanishingVerdict::PassWithFlag => "PASS-WITH-FLAG",
            VanishingVerdict::Fail => "FAIL",
        })
    }
}

/// Degree of the coefficient `c_{i,j}` in `e_{p^i}^p = Σ c_{i,j} e_j`,
/// for `j < p^{i+1}`, with its vanishing-region verdict.
pub fn coefficient_degree(
    p: Prime,
    i: u32,
    j: u64,
) -> Result<(RODegree, VanishingVerdict), GradingError> {
    let bound = p.pow(i + 1)? as u64;
    if j >= bound {
        return Err(GradingError::CoefficientOutOfRange { j, bound });
    }
    let d = i64::from(p.get()) * e_degree(p, p.pow(i)? as u64) - e_degree(p, j);
    Ok((d, VanishingVerdict::classify(d)))
}

/// The `u_λ` exponent in the coefficient of `[θ]_*(e_{p^i})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaExponent {
    /// Coefficient degree `|e_{p^i}| - |β_{(i)}|` the exponent has to hit.
    pub required: RODegree,
    /// The unique `m` with `|θ| + m·|u_λ| = required`.
    pub forced: i64,
    /// The printed exponent `p^i(p-1) - 1`.
    pub printed_value: i64,
    pub mismatch: bool,
}

/// Solves for the `u_λ` exponent under the convention "coefficient =
/// `θ·u_λ^m`" and reports it next to the printed value.
///
/// The two are returned side by side; neither is adopted.
pub fn theta_coeff_exponent(p: Prime, i: u32) -> Result<ThetaExponent, GradingError> {
    require_positive(i)?;
    let pi = p.pow(i)?;
    let required = e_degree(p, pi as u64) - RODegree::trivial(2 * pi);
    let forced = solve_u_lambda_exponent(theta_degree(), required)
        .expect("coefficient degree is always a θ·u_λ multiple");
    let printed_value = pi * (i64::from(p.get()) - 1) - 1;
    Ok(ThetaExponent { required, forced, printed_value, mismatch: forced != printed_value })
}

/// `m` with `base + m·|u_λ| = target`, if one exists.
pub fn solve_u_lambda_exponent(base: RODegree, target: RODegree) -> Option<i64> {
    let u = u_lambda_degree();
    let diff = target - base;
    // u_λ has zero underlying dimension, so the underlying parts must agree.
    if diff.underlying != 0 || diff.fixed % u.fixed != 0 {
        return None;
    }
    Some(diff.fixed / u.fixed)
}
