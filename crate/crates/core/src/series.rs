//! Integer-graded dimension series, truncated at a top degree.
//!
//! A [`GradedDimSeries`] records how many basis elements a graded vector
//! space has in each degree up to its truncation `N`. Every operation states
//! the range on which its output is exact; the stored truncation is always
//! that range's upper end, so series can be combined without silently
//! dropping classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Count = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(i64, i64),
    #[error("generator degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("exterior generator must have exponent bound 1, got {0}")]
    ExteriorBound(u32),
    #[error("relation {0} is empty or has a zero exponent")]
    DegenerateRelation(usize),
    #[error("relation {relation} refers to generator {generator}, but only {count} exist")]
    UnknownGenerator { relation: usize, generator: usize, count: usize },
    #[error("dimension count overflowed in degree {0}")]
    Overflow(i64),
}

/// Dimension counts by degree, zero entries omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedDimSeries {
    counts: BTreeMap<i64, Count>,
    lower_bound: i64,
    truncation: i64,
}

impl PartialEq for GradedDimSeries {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation && self.counts == other.counts
    }
}

impl Eq for GradedDimSeries {}

impl GradedDimSeries {
    /// The zero series with the given bounds.
    pub fn zero(lower_bound: i64, truncation: i64) -> Self {
        GradedDimSeries { counts: BTreeMap::new(), lower_bound, truncation }
    }

    /// One class in degree 0.
    pub fn unit(truncation: i64) -> Self {
        Self::monomial(0, truncation)
    }

    /// One class in degree `d`.
    pub fn monomial(degree: i64, truncation: i64) -> Self {
        let mut s = Self::zero(degree, truncation);
        s.add_count(degree, 1).expect("single count");
        s
    }

    /// Builds a series from `(degree, count)` pairs. Entries outside
    /// `[lower_bound, truncation]` are dropped; repeated degrees add up.
    pub fn from_counts<I>(lower_bound: i64, truncation: i64, entries: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (i64, Count)>,
    {
        let mut s = Self::zero(lower_bound, truncation);
        for (d, c) in entries {
            if d >= lower_bound {
                s.add_count(d, c)?;
            }
        }
        Ok(s)
    }

    /// Dense counts for degrees `lower_bound..=truncation`.
    pub fn from_dense(lower_bound: i64, counts: &[Count]) -> Self {
        let truncation = lower_bound + counts.len() as i64 - 1;
        let entries = counts.iter().enumerate().map(|(k, &c)| (lower_bound + k as i64, c));
        Self::from_counts(lower_bound, truncation, entries).expect("no overflow from distinct degrees")
    }

    /// Counts a multiset of degrees.
    pub fn from_degrees<I>(lower_bound: i64, truncation: i64, degrees: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = i64>,
    {
        Self::from_counts(lower_bound, truncation, degrees.into_iter().map(|d| (d, 1)))
    }

    fn add_count(&mut self, degree: i64, c: Count) -> Result<(), SeriesError> {
        if c == 0 || degree > self.truncation {
            return Ok(());
        }
        debug_assert!(degree >= self.lower_bound);
        let slot = self.counts.entry(degree).or_insert(0);
        *slot = slot.checked_add(c).ok_or(SeriesError::Overflow(degree))?;
        Ok(())
    }

    pub fn lower_bound(&self) -> i64 {
        self.lower_bound
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn get(&self, degree: i64) -> Count {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// Nonzero `(degree, count)` pairs in increasing degree.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Count)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Lowest degree carrying a class.
    pub fn min_degree(&self) -> Option<i64> {
        self.counts.keys().next().copied()
    }

    pub fn total(&self) -> Count {
        self.counts.values().sum()
    }

    /// Counts on `from..=to`, zeros included.
    pub fn to_dense(&self, from: i64, to: i64) -> Vec<Count> {
        (from..=to).map(|d| self.get(d)).collect()
    }

    /// Forgets everything above `n`. A larger `n` leaves the series unchanged.
    pub fn truncate(&self, n: i64) -> Self {
        let truncation = self.truncation.min(n);
        let counts = self.counts.range(..=truncation).map(|(&d, &c)| (d, c)).collect();
        GradedDimSeries { counts, lower_bound: self.lower_bound, truncation }
    }

    /// Replaces the declared lower bound with a smaller one.
    pub fn with_lower_bound(mut self, lower_bound: i64) -> Self {
        self.lower_bound = self.lower_bound.min(lower_bound);
        self
    }

    /// Degreewise sum; exact on the common truncation.
    pub fn sum(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.truncation != other.truncation {
            return Err(SeriesError::TruncationMismatch(self.truncation, other.truncation));
        }
        let mut out = Self::zero(self.lower_bound.min(other.lower_bound), self.truncation);
        for (d, c) in self.iter().chain(other.iter()) {
            out.add_count(d, c)?;
        }
        Ok(out)
    }

    /// Translates every class up by `d`. The truncation stays put, so classes
    /// pushed past it are dropped.
    pub fn shift(&self, d: i64) -> Self {
        let mut out = Self::zero(self.lower_bound + d, self.truncation);
        for (k, c) in self.iter() {
            out.add_count(k + d, c).expect("shift preserves counts");
        }
        out
    }

    /// Graded tensor product (convolution of counts).
    ///
    /// Exact through `min(T_a + min(lb_b, 0), T_b + min(lb_a, 0))`, which is
    /// the truncation of the result: a factor with classes in negative
    /// degrees pulls unknown high-degree classes of the other factor down.
    pub fn tensor(&self, other: &Self) -> Result<Self, SeriesError> {
        let truncation = (self.truncation + other.lower_bound.min(0))
            .min(other.truncation + self.lower_bound.min(0));
        let mut out = Self::zero(self.lower_bound + other.lower_bound, truncation);
        for (da, ca) in self.iter() {
            for (db, cb) in other.iter() {
                let d = da + db;
                if d > truncation {
                    break;
                }
                let c = ca.checked_mul(cb).ok_or(SeriesError::Overflow(d))?;
                out.add_count(d, c)?;
            }
        }
        Ok(out)
    }

    /// Tensor product of a list of series, starting from the unit.
    pub fn tensor_all<'a, I>(truncation: i64, factors: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = &'a GradedDimSeries>,
    {
        factors.into_iter().try_fold(Self::unit(truncation), |acc, f| acc.tensor(f))
    }

    /// Lowest degree in the shared range where the two series differ.
    ///
    /// The range is `[min lower bound, min truncation]`.
    pub fn first_mismatch(&self, other: &Self) -> Option<i64> {
        let top = self.truncation.min(other.truncation);
        self.counts
            .keys()
            .chain(other.counts.keys())
            .copied()
            .filter(|&d| d <= top && self.get(d) != other.get(d))
            .min()
    }
}

impl fmt::Display for GradedDimSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}} (≤ {})", entries.join(", "), self.truncation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Polynomial,
    Exterior,
}

/// One generator of a free graded-commutative algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
    pub kind: GeneratorKind,
    /// Largest allowed exponent; `None` means unbounded.
    pub exponent_bound: Option<u32>,
}

impl GeneratorSpec {
    pub fn polynomial(name: impl Into<String>, degree: i64) -> Self {
        GeneratorSpec { name: name.into(), degree, kind: GeneratorKind::Polynomial, exponent_bound: None }
    }

    /// A polynomial generator `x` with `x^{bound+1} = 0`.
    pub fn truncated(name: impl Into<String>, degree: i64, bound: u32) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
            kind: GeneratorKind::Polynomial,
            exponent_bound: Some(bound),
        }
    }

    pub fn exterior(name: impl Into<String>, degree: i64) -> Self {
        GeneratorSpec { name: name.into(), degree, kind: GeneratorKind::Exterior, exponent_bound: Some(1) }
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.degree <= 0 {
            return Err(SeriesError::NonPositiveDegree(self.degree));
        }
        if self.kind == GeneratorKind::Exterior && self.exponent_bound != Some(1) {
            return Err(SeriesError::ExteriorBound(self.exponent_bound.unwrap_or(u32::MAX)));
        }
        Ok(())
    }

    /// Largest exponent with degree at most `n`.
    fn max_exponent(&self, n: i64) -> u32 {
        let by_degree = if n < 0 { 0 } else { u32::try_from(n / self.degree).unwrap_or(u32::MAX) };
        self.exponent_bound.map_or(by_degree, |b| b.min(by_degree))
    }
}

/// A monomial `∏ x_g^{e_g}` that generates part of the relation ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRelation {
    pub factors: Vec<(usize, u32)>,
}

impl MonomialRelation {
    pub fn new(factors: Vec<(usize, u32)>) -> Self {
        MonomialRelation { factors }
    }

    /// Whether a monomial with these exponents is divisible by the relation.
    pub fn kills(&self, exponents: &[u32]) -> bool {
        self.factors.iter().all(|&(g, e)| exponents.get(g).copied().unwrap_or(0) >= e)
    }

    fn validate(&self, index: usize, generators: usize) -> Result<(), SeriesError> {
        if self.factors.is_empty() || self.factors.iter().any(|&(_, e)| e == 0) {
            return Err(SeriesError::DegenerateRelation(index));
        }
        if let Some(&(g, _)) = self.factors.iter().find(|&&(g, _)| g >= generators) {
            return Err(SeriesError::UnknownGenerator { relation: index, generator: g, count: generators });
        }
        Ok(())
    }
}

/// Dimension series of the free graded-commutative algebra on `gens`,
/// through degree `n`.
pub fn from_generators(gens: &[GeneratorSpec], n: i64) -> Result<GradedDimSeries, SeriesError> {
    for g in gens {
        g.validate()?;
    }
    if n < 0 {
        return Ok(GradedDimSeries::zero(0, n));
    }
    let len = n as usize + 1;
    let mut dense: Vec<Count> = vec![0; len];
    dense[0] = 1;
    for g in gens.iter().filter(|g| g.degree <= n) {
        let step = g.degree as usize;
        match g.exponent_bound {
            None => {
                // multiply by 1 / (1 - x^d)
                for k in step..len {
                    dense[k] = dense[k]
                        .checked_add(dense[k - step])
                        .ok_or(SeriesError::Overflow(k as i64))?;
                }
            }
            Some(_) => {
                // multiply by 1 + x^d + ... + x^{bound·d}
                let old = dense.clone();
                for e in 1..=g.max_exponent(n) as usize {
                    let shift = e * step;
                    for k in shift..len {
                        dense[k] = dense[k]
                            .checked_add(old[k - shift])
                            .ok_or(SeriesError::Overflow(k as i64))?;
                    }
                }
            }
        }
    }
    Ok(GradedDimSeries::from_dense(0, &dense))
}

/// A surviving monomial of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub degree: i64,
    pub exponents: Vec<u32>,
}

/// Every monomial of degree at most `n` that survives all relations.
///
/// Depth-first over generators; a branch is cut as soon as its partial
/// monomial exceeds `n` or is divisible by a relation, since extending it
/// can only keep both properties.
pub fn enumerate_monomials(
    gens: &[GeneratorSpec],
    rels: &[MonomialRelation],
    n: i64,
) -> Result<Vec<Monomial>, SeriesError> {
    for g in gens {
        g.validate()?;
    }
    for (k, r) in rels.iter().enumerate() {
        r.validate(k, gens.len())?;
    }
    let mut out = Vec::new();
    if n >= 0 {
        let mut exps = vec![0u32; gens.len()];
        walk(gens, rels, n, 0, 0, &mut exps, &mut out);
    }
    Ok(out)
}

fn walk(
    gens: &[GeneratorSpec],
    rels: &[MonomialRelation],
    n: i64,
    pos: usize,
    degree: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == gens.len() {
        out.push(Monomial { degree, exponents: exps.clone() });
        return;
    }
    let g = &gens[pos];
    for e in 0..=g.max_exponent(n - degree) {
        exps[pos] = e;
        if e > 0 && rels.iter().any(|r| r.kills(exps)) {
            break;
        }
        walk(gens, rels, n, pos + 1, degree + i64::from(e) * g.degree, exps, out);
    }
    exps[pos] = 0;
}

/// Dimension series of `k[gens] / (rels)` through degree `n`, for monomial
/// relations.
pub fn from_presentation(
    gens: &[GeneratorSpec],
    rels: &[MonomialRelation],
    n: i64,
) -> Result<GradedDimSeries, SeriesError> {
    let monomials = enumerate_monomials(gens, rels, n)?;
    GradedDimSeries::from_degrees(0, n, monomials.into_iter().map(|m| m.degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sum_shift() {
        let u = GradedDimSeries::unit(10);
        assert_eq!(u.sum(&u).unwrap().iter().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(u.shift(5).iter().collect::<Vec<_>>(), vec![(5, 1)]);
        let neg = u.shift(-1);
        assert_eq!(neg.iter().collect::<Vec<_>>(), vec![(-1, 1)]);
        assert_eq!(neg.lower_bound(), -1);
        assert_eq!(u.shift(11).total(), 0);
    }

    #[test]
    fn sum_requires_matching_truncation() {
        let a = GradedDimSeries::unit(10);
        let b = GradedDimSeries::unit(11);
        assert_eq!(a.sum(&b), Err(SeriesError::TruncationMismatch(10, 11)));
    }

    #[test]
    fn tensor_small_cases() {
        let ext = from_generators(&[GeneratorSpec::exterior("x", 1)], 10).unwrap();
        let t = ext.tensor(&ext).unwrap();
        assert_eq!(t.to_dense(0, 3), vec![1, 2, 1, 0]);
        let poly = from_generators(&[GeneratorSpec::polynomial("b", 2)], 8).unwrap();
        let t = poly.tensor(&poly).unwrap();
        assert_eq!(t.to_dense(0, 8), vec![1, 0, 2, 0, 3, 0, 4, 0, 5]);
        assert_eq!(GradedDimSeries::unit(8).tensor(&poly).unwrap(), poly);
    }

    #[test]
    fn tensor_with_negative_degrees_shrinks_truncation() {
        let a = GradedDimSeries::monomial(-1, 10);
        let b = GradedDimSeries::monomial(0, 10);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.truncation(), 9);
        assert_eq!(t.lower_bound(), -1);
    }

    #[test]
    fn generator_examples() {
        let s = from_generators(&[GeneratorSpec::exterior("x", 1)], 5).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        let s = from_generators(&[GeneratorSpec::polynomial("x", 2)], 6).unwrap();
        assert_eq!(s.to_dense(0, 6), vec![1, 0, 1, 0, 1, 0, 1]);
        let s = from_generators(
            &[GeneratorSpec::polynomial("t", 4), GeneratorSpec::exterior("x", 5)],
            10,
        )
        .unwrap();
        assert_eq!(s.iter().map(|(d, _)| d).collect::<Vec<_>>(), vec![0, 4, 5, 8, 9]);
        assert!(s.iter().all(|(_, c)| c == 1));
        // generators above the truncation contribute only the unit
        let s = from_generators(&[GeneratorSpec::polynomial("y", 50)], 10).unwrap();
        assert_eq!(s, GradedDimSeries::unit(10));
    }

    #[test]
    fn generator_errors() {
        assert_eq!(
            from_generators(&[GeneratorSpec::polynomial("z", 0)], 4),
            Err(SeriesError::NonPositiveDegree(0))
        );
        let mut bad = GeneratorSpec::exterior("e", 3);
        bad.exponent_bound = Some(2);
        assert_eq!(from_generators(&[bad], 4), Err(SeriesError::ExteriorBound(2)));
    }

    #[test]
    fn presentation_example_p3_factor_one() {
        let gens = [
            GeneratorSpec::truncated("d", 2, 2),
            GeneratorSpec::polynomial("xi", 4),
            GeneratorSpec::exterior("sigma", 1),
            GeneratorSpec::exterior("tau", 5),
        ];
        let rels = [
            MonomialRelation::new(vec![(0, 1), (3, 1)]),
            MonomialRelation::new(vec![(0, 2), (2, 1)]),
            MonomialRelation::new(vec![(2, 1), (3, 1)]),
        ];
        let s = from_presentation(&gens, &rels, 5).unwrap();
        assert_eq!(s.to_dense(0, 5), vec![1, 1, 1, 1, 2, 2]);
        assert_eq!(from_presentation(&gens, &[], 20).unwrap(), from_generators(&gens, 20).unwrap());
    }

    #[test]
    fn presentation_killing_sole_generator() {
        let gens = [GeneratorSpec::polynomial("x", 3)];
        let rels = [MonomialRelation::new(vec![(0, 1)])];
        assert_eq!(from_presentation(&gens, &rels, 12).unwrap(), GradedDimSeries::unit(12));
    }

    #[test]
    fn presentation_errors() {
        let gens = [GeneratorSpec::polynomial("x", 3)];
        assert_eq!(
            from_presentation(&gens, &[MonomialRelation::new(vec![])], 5),
            Err(SeriesError::DegenerateRelation(0))
        );
        assert_eq!(
            from_presentation(&gens, &[MonomialRelation::new(vec![(4, 1)])], 5),
            Err(SeriesError::UnknownGenerator { relation: 0, generator: 4, count: 1 })
        );
    }

    #[test]
    fn first_mismatch_reports_lowest_degree() {
        let a = GradedDimSeries::from_dense(0, &[1, 0, 1, 1]);
        let b = GradedDimSeries::from_dense(0, &[1, 0, 2, 0]);
        assert_eq!(a.first_mismatch(&b), Some(2));
        assert_eq!(a.first_mismatch(&a), None);
    }

    #[test]
    fn overflow_is_an_error() {
        let big = GradedDimSeries::from_counts(0, 0, [(0, Count::MAX)]).unwrap();
        assert_eq!(big.sum(&GradedDimSeries::unit(0)), Err(SeriesError::Overflow(0)));
        assert_eq!(big.tensor(&big), Err(SeriesError::Overflow(0)));
    }
}
