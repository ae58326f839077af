//! The two monomial bases behind the fixed-point dimension count.
//!
//! `V = Λ(τ_i : i ≥ 0) ⊗ F_p[b]` and
//! `W = F_p[d_(i)] ⊗ Λ(σ_j, τ_k : j ≥ 0, k ≥ 1) / (d_(i)^p, d_(i-1)τ_i,
//! d_(i)^{p-1}σ_i, σ_{i-1}τ_i)` with `|σ_i| = |τ_i| = 2p^i - 1`, `|b| = 2`
//! and `|d_(i)| = 2p^i`.
//!
//! Both are indexed by quadruples `(I, J, K, K')`:
//!
//! ```text
//! M_{I,J,K} = (∏ b^{a_i p^i}) τ_J (∏ b^{κ_i (p-1) p^i}) τ_{K'}
//! N_{I,J,K} = d_I σ_J (∏ d_(i)^{(κ_i - κ'_i)(p-1)}) τ_{K'[1]}
//! ```
//!
//! where `K'[1]` shifts `K'` up one position. [`check_bijection`] verifies
//! that this really is a degree-preserving bijection onto bases of `V` and
//! `W`, computing `W` both from the claimed basis and from its relations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{i_max, SpectrumExpr};
use crate::grading::{GradingError, Prime};
use crate::lenses::{eval, EvalError, Lens};
use crate::series::{
    enumerate_monomials, from_generators, from_presentation, GeneratorSpec, GradedDimSeries,
    MonomialRelation, SeriesError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
}

/// A quadruple `(I, J, K, K')` of finitely supported sequences. Positions
/// past the end of a vector are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIndex {
    /// `a_i ∈ [0, p-2]`.
    pub a: Vec<u32>,
    /// `ε_i`.
    pub eps: Vec<bool>,
    /// `κ_i`.
    pub kappa: Vec<bool>,
    /// `κ'_i`, only where `κ_i = 1`.
    pub kappa_prime: Vec<bool>,
}

/// `(p^i, a_i, ε_i, κ_i, κ'_i)` at one position.
type Term = (i64, u32, bool, bool, bool);

/// One admissible choice `(a, ε, κ, κ', degree)` at a position.
type Slot = (u32, bool, bool, bool, i64);

fn at<T: Copy + Default>(v: &[T], i: usize) -> T {
    v.get(i).copied().unwrap_or_default()
}

impl MonomialIndex {
    fn len(&self) -> usize {
        self.a.len().max(self.eps.len()).max(self.kappa.len()).max(self.kappa_prime.len())
    }

    /// Checks the admissibility conditions. `disjoint` toggles the
    /// requirement that `I` and `J` avoid the support of `K`.
    pub fn validate(&self, p: Prime, disjoint: bool) -> Result<(), BijectionError> {
        for i in 0..self.len() {
            let (a, e, k, kp) = (at(&self.a, i), at(&self.eps, i), at(&self.kappa, i), at(&self.kappa_prime, i));
            if a > p.get() - 2 {
                return Err(BijectionError::InvalidIndex(format!("a_{i} = {a} exceeds p - 2")));
            }
            if kp && !k {
                return Err(BijectionError::InvalidIndex(format!("κ'_{i} = 1 but κ_{i} = 0")));
            }
            if disjoint && k && (a > 0 || e) {
                return Err(BijectionError::InvalidIndex(format!("position {i} is in the support of K and of I or J")));
            }
        }
        Ok(())
    }

    fn terms(&self, p: Prime) -> Result<Vec<Term>, BijectionError> {
        (0..self.len())
            .map(|i| {
                let pi = p.pow(i as u32)?;
                Ok((pi, at(&self.a, i), at(&self.eps, i), at(&self.kappa, i), at(&self.kappa_prime, i)))
            })
            .collect()
    }

    /// Degree of `M_{I,J,K}` in `V`.
    pub fn degree_m(&self, p: Prime) -> Result<i64, BijectionError> {
        self.validate(p, true)?;
        self.degree_m_unchecked(p)
    }

    fn degree_m_unchecked(&self, p: Prime) -> Result<i64, BijectionError> {
        let q = i64::from(p.get());
        Ok(self
            .terms(p)?
            .into_iter()
            .map(|(pi, a, e, k, kp)| {
                2 * i64::from(a) * pi
                    + i64::from(e) * (2 * pi - 1)
                    + i64::from(k) * 2 * (q - 1) * pi
                    + i64::from(kp) * (2 * pi - 1)
            })
            .sum())
    }

    /// Degree of `N_{I,J,K}` in `W`.
    pub fn degree_n(&self, p: Prime) -> Result<i64, BijectionError> {
        self.validate(p, true)?;
        self.degree_n_unchecked(p)
    }

    fn degree_n_unchecked(&self, p: Prime) -> Result<i64, BijectionError> {
        let q = i64::from(p.get());
        Ok(self
            .terms(p)?
            .into_iter()
            .map(|(pi, a, e, k, kp)| {
                2 * i64::from(a) * pi
                    + i64::from(e) * (2 * pi - 1)
                    + (i64::from(k) - i64::from(kp)) * 2 * (q - 1) * pi
                    + i64::from(kp) * (2 * q * pi - 1)
            })
            .sum())
    }

    /// `M_{I,J,K}` as `(b exponent, τ exponents by position)`.
    pub fn m_monomial(&self, p: Prime) -> (u64, Vec<u32>) {
        let q = u64::from(p.get());
        let mut b = 0;
        let mut tau = vec![0; self.len()];
        for (i, t) in tau.iter_mut().enumerate() {
            let pi = q.pow(i as u32);
            b += u64::from(at(&self.a, i)) * pi;
            if at(&self.kappa, i) {
                b += (q - 1) * pi;
            }
            *t = u32::from(at(&self.eps, i)) + u32::from(at(&self.kappa_prime, i));
        }
        (b, tau)
    }

    /// Exponents of `N_{I,J,K}` in the generator order of `layout`.
    pub fn n_exponents(&self, p: Prime, layout: &WLayout) -> Vec<u32> {
        let mut exps = vec![0; layout.generators.len()];
        for i in 0..self.len() {
            let k = at(&self.kappa, i);
            let kp = at(&self.kappa_prime, i);
            let d = at(&self.a, i) + if k && !kp { p.get() - 1 } else { 0 };
            exps[layout.d(i)] += d;
            exps[layout.sigma(i)] += u32::from(at(&self.eps, i));
            exps[layout.tau(i + 1)] += u32::from(kp);
        }
        exps
    }
}

/// Number of positions `i` with `2p^i - 1 ≤ n`; indices supported beyond
/// them have degree above `n`.
pub fn positions(p: Prime, n: i64) -> usize {
    (0u32..)
        .map_while(|i| p.pow(i).ok())
        .take_while(|&pi| 2 * pi - 1 <= n)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub enforce_disjoint_support: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { enforce_disjoint_support: true }
    }
}

/// All admissible indices whose `M`-degree is at most `n`.
pub fn enumerate_indices(p: Prime, n: i64, opts: EnumerationOptions) -> Result<Vec<MonomialIndex>, BijectionError> {
    let len = positions(p, n);
    let mut choices: Vec<Vec<Slot>> = Vec::with_capacity(len);
    let q = i64::from(p.get());
    for i in 0..len {
        let pi = p.pow(i as u32)?;
        let mut here = Vec::new();
        for k in [false, true] {
            for kp in [false, true] {
                if kp && !k {
                    continue;
                }
                for a in 0..=p.get() - 2 {
                    for e in [false, true] {
                        if opts.enforce_disjoint_support && k && (a > 0 || e) {
                            continue;
                        }
                        let deg = 2 * i64::from(a) * pi
                            + i64::from(e) * (2 * pi - 1)
                            + i64::from(k) * 2 * (q - 1) * pi
                            + i64::from(kp) * (2 * pi - 1);
                        here.push((a, e, k, kp, deg));
                    }
                }
            }
        }
        choices.push(here);
    }
    let mut out = Vec::new();
    let mut current = MonomialIndex {
        a: vec![0; len],
        eps: vec![false; len],
        kappa: vec![false; len],
        kappa_prime: vec![false; len],
    };
    fill(&choices, 0, 0, n, &mut current, &mut out);
    Ok(out)
}

fn fill(
    choices: &[Vec<Slot>],
    pos: usize,
    degree: i64,
    n: i64,
    current: &mut MonomialIndex,
    out: &mut Vec<MonomialIndex>,
) {
    if pos == choices.len() {
        out.push(current.clone());
        return;
    }
    for &(a, e, k, kp, d) in &choices[pos] {
        if degree + d > n {
            continue;
        }
        current.a[pos] = a;
        current.eps[pos] = e;
        current.kappa[pos] = k;
        current.kappa_prime[pos] = kp;
        fill(choices, pos + 1, degree + d, n, current, out);
    }
}

/// Generator order for `W`: `d_(i)`, `σ_i` for every position, then `τ_k`
/// for `k ≥ 1`.
#[derive(Debug, Clone)]
pub struct WLayout {
    pub positions: usize,
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<MonomialRelation>,
}

impl WLayout {
    /// Positions `0..=positions(p, n)`, one beyond the support bound, so
    /// `τ_{i+1}` exists for every position `i` an index can use.
    pub fn new(p: Prime, n: i64) -> Result<Self, BijectionError> {
        let len = positions(p, n) + 1;
        let mut generators = Vec::with_capacity(3 * len);
        for i in 0..len {
            let pi = p.pow(i as u32)?;
            generators.push(GeneratorSpec::truncated(format!("d{i}"), 2 * pi, p.get() - 1));
            generators.push(GeneratorSpec::exterior(format!("sigma{i}"), 2 * pi - 1));
        }
        for k in 1..=len {
            let pk = p.pow(k as u32)?;
            generators.push(GeneratorSpec::exterior(format!("tau{k}"), 2 * pk - 1));
        }
        let mut layout = WLayout { positions: len, generators, relations: Vec::new() };
        for i in 0..len {
            layout.relations.push(MonomialRelation::new(vec![(layout.d(i), p.get() - 1), (layout.sigma(i), 1)]));
        }
        for k in 1..=len {
            layout.relations.push(MonomialRelation::new(vec![(layout.d(k - 1), 1), (layout.tau(k), 1)]));
            layout.relations.push(MonomialRelation::new(vec![(layout.sigma(k - 1), 1), (layout.tau(k), 1)]));
        }
        Ok(layout)
    }

    pub fn d(&self, i: usize) -> usize {
        2 * i
    }

    pub fn sigma(&self, i: usize) -> usize {
        2 * i + 1
    }

    pub fn tau(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.positions, "τ_{k} is outside the layout");
        2 * self.positions + k - 1
    }
}

/// Generators of `V = Λ(τ_i : i ≥ 0) ⊗ F_p[b]` through degree `n`.
pub fn v_generators(p: Prime, n: i64) -> Result<Vec<GeneratorSpec>, BijectionError> {
    let mut gens = Vec::new();
    for i in 0..positions(p, n) {
        gens.push(GeneratorSpec::exterior(format!("tau{i}"), 2 * p.pow(i as u32)? - 1));
    }
    gens.push(GeneratorSpec::polynomial("b", 2));
    Ok(gens)
}

/// Counts of `M_{I,J,K}` by degree.
pub fn enumerate_v(p: Prime, n: i64) -> Result<GradedDimSeries, BijectionError> {
    enumerate_v_with(p, n, EnumerationOptions::default())
}

pub fn enumerate_v_with(p: Prime, n: i64, opts: EnumerationOptions) -> Result<GradedDimSeries, BijectionError> {
    let idx = enumerate_indices(p, n, opts)?;
    let degrees = idx.iter().map(|x| x.degree_m_unchecked(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(GradedDimSeries::from_degrees(0, n, degrees)?)
}

/// Counts of `N_{I,J,K}` by degree.
pub fn enumerate_w_basis(p: Prime, n: i64) -> Result<GradedDimSeries, BijectionError> {
    let idx = enumerate_indices(p, n, EnumerationOptions::default())?;
    let degrees = idx.iter().map(|x| x.degree_n_unchecked(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(GradedDimSeries::from_degrees(0, n, degrees)?)
}

/// Dimensions of `W` computed from its relations.
pub fn enumerate_w_presentation(p: Prime, n: i64) -> Result<GradedDimSeries, BijectionError> {
    let layout = WLayout::new(p, n)?;
    Ok(from_presentation(&layout.generators, &layout.relations, n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub first_mismatch_degree: Option<i64>,
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn pass(name: &str) -> Self {
        CheckOutcome { name: name.into(), pass: true, first_mismatch_degree: None, detail: None }
    }

    fn fail(name: &str, degree: Option<i64>, detail: String) -> Self {
        CheckOutcome { name: name.into(), pass: false, first_mismatch_degree: degree, detail: Some(detail) }
    }

    fn series(name: &str, lhs: &GradedDimSeries, rhs: &GradedDimSeries) -> Self {
        match lhs.first_mismatch(rhs) {
            None => Self::pass(name),
            Some(d) => Self::fail(name, Some(d), format!("degree {d}: {} vs {}", lhs.get(d), rhs.get(d))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub prime: Prime,
    pub max_degree: i64,
    pub indices: usize,
    pub checks: Vec<CheckOutcome>,
}

impl BijectionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn check_bijection(p: Prime, n: i64) -> Result<BijectionReport, BijectionError> {
    check_bijection_with(p, n, EnumerationOptions::default())
}

/// Runs the four checks:
///
/// 1. `|M_{I,J,K}| = |N_{I,J,K}|` for every enumerated index;
/// 2. the `M` count equals the free-algebra series of `V`;
/// 3. the `N` count equals the presentation series of `W`;
/// 4. `N_{I,J,K}` hits every surviving monomial of `W` exactly once.
pub fn check_bijection_with(p: Prime, n: i64, opts: EnumerationOptions) -> Result<BijectionReport, BijectionError> {
    let idx = enumerate_indices(p, n, opts)?;

    let mut degree_check = CheckOutcome::pass("degree_m = degree_n");
    for x in &idx {
        let (dm, dn) = (x.degree_m_unchecked(p)?, x.degree_n_unchecked(p)?);
        if dm != dn {
            degree_check = CheckOutcome::fail(
                "degree_m = degree_n",
                Some(dm.min(dn)),
                format!("index {x:?}: M-degree {dm}, N-degree {dn}"),
            );
            break;
        }
    }

    let m_counts = GradedDimSeries::from_degrees(
        0,
        n,
        idx.iter().map(|x| x.degree_m_unchecked(p)).collect::<Result<Vec<_>, _>>()?,
    )?;
    let n_degrees: Vec<i64> = idx.iter().map(|x| x.degree_n_unchecked(p)).collect::<Result<_, _>>()?;
    let n_counts = GradedDimSeries::from_degrees(0, n, n_degrees.iter().copied())?;
    let v_free = from_generators(&v_generators(p, n)?, n)?;
    let layout = WLayout::new(p, n)?;
    let w_monomials = enumerate_monomials(&layout.generators, &layout.relations, n)?;
    let w_pres = GradedDimSeries::from_degrees(0, n, w_monomials.iter().map(|m| m.degree))?;

    let mut from_indices: Vec<(i64, Vec<u32>)> = idx
        .iter()
        .zip(&n_degrees)
        .filter(|(_, &d)| d <= n)
        .map(|(x, &d)| (d, x.n_exponents(p, &layout)))
        .collect();
    let mut from_relations: Vec<(i64, Vec<u32>)> =
        w_monomials.into_iter().map(|m| (m.degree, m.exponents)).collect();
    from_indices.sort();
    from_relations.sort();
    let hit_check = match from_indices.iter().zip(&from_relations).position(|(a, b)| a != b) {
        None if from_indices.len() == from_relations.len() => CheckOutcome::pass("N-basis hits W monomials once"),
        found => {
            let k = found.unwrap_or(from_indices.len().min(from_relations.len()));
            let degree = [from_indices.get(k), from_relations.get(k)]
                .into_iter()
                .flatten()
                .map(|(d, _)| *d)
                .min();
            let describe = |m: Option<&(i64, Vec<u32>)>| {
                m.map_or("nothing".to_string(), |(_, e)| monomial_string(&layout.generators, e))
            };
            CheckOutcome::fail(
                "N-basis hits W monomials once",
                degree,
                format!(
                    "sorted position {k}: index side has {}, relation side has {}",
                    describe(from_indices.get(k)),
                    describe(from_relations.get(k))
                ),
            )
        }
    };

    Ok(BijectionReport {
        prime: p,
        max_degree: n,
        indices: idx.len(),
        checks: vec![
            degree_check,
            CheckOutcome::series("M-basis counts V", &m_counts, &v_free),
            CheckOutcome::series("N-basis counts W", &n_counts, &w_pres),
            hit_check,
        ],
    })
}

/// `F_p[d_(i-1), ξ_i] ⊗ Λ(σ_{i-1}, τ_i) / (d^p, dτ, d^{p-1}σ, στ)`, the
/// fixed-point dimensions of the single factor `X_i`. Generator order is
/// `d, ξ, σ, τ`.
pub fn factor_presentation(
    p: Prime,
    i: u32,
) -> Result<(Vec<GeneratorSpec>, Vec<MonomialRelation>), BijectionError> {
    if i < 1 {
        return Err(GradingError::IndexTooSmall(i).into());
    }
    let lo = p.pow(i - 1)?;
    let hi = p.pow(i)?;
    let gens = vec![
        GeneratorSpec::truncated(format!("d{}", i - 1), 2 * lo, p.get() - 1),
        GeneratorSpec::polynomial(format!("xi{i}"), 2 * hi - 2),
        GeneratorSpec::exterior(format!("sigma{}", i - 1), 2 * lo - 1),
        GeneratorSpec::exterior(format!("tau{i}"), 2 * hi - 1),
    ];
    let rels = vec![
        MonomialRelation::new(vec![(0, 1), (3, 1)]),
        MonomialRelation::new(vec![(0, p.get() - 1), (2, 1)]),
        MonomialRelation::new(vec![(2, 1), (3, 1)]),
    ];
    Ok((gens, rels))
}

/// Three computations of `F_p ⊗ X^{ΦC_p}` through degree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Tensor product of the per-factor presentations.
    pub per_factor: GradedDimSeries,
    /// Phi-lens evaluation of the model `X`.
    pub model_phi: GradedDimSeries,
    /// `N`-basis count of `W`, tensored with `F_p[ξ_n : n ≥ 1]`.
    pub n_basis: GradedDimSeries,
}

impl Closure {
    pub fn all_equal(&self) -> bool {
        self.per_factor == self.model_phi && self.model_phi == self.n_basis
    }
}

pub fn closure_series(p: Prime, n: i64) -> Result<Closure, BijectionError> {
    let top = i_max(p, Lens::Phi, n).map_err(EvalError::from)?;
    let factors = (1..=top)
        .map(|i| {
            let (g, r) = factor_presentation(p, i)?;
            Ok(from_presentation(&g, &r, n)?)
        })
        .collect::<Result<Vec<_>, BijectionError>>()?;
    let per_factor = GradedDimSeries::tensor_all(n, &factors)?;
    let xis: Vec<GeneratorSpec> = (1u32..)
        .map_while(|i| p.pow(i).ok().map(|pi| (i, 2 * pi - 2)))
        .take_while(|&(_, d)| d <= n)
        .map(|(i, d)| GeneratorSpec::polynomial(format!("xi{i}"), d))
        .collect();
    let n_basis = enumerate_w_basis(p, n)?.tensor(&from_generators(&xis, n)?)?;
    let model_phi = eval(&SpectrumExpr::DsaModel { p }, Lens::Phi, n)?;
    Ok(Closure { per_factor, model_phi, n_basis })
}

/// One entry of a monomial listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListingEntry {
    pub degree: i64,
    pub index: MonomialIndex,
    pub m: String,
    pub n: String,
}

/// Up to `limit` indices with their `M` and `N` monomials, by degree.
pub fn monomial_listing(p: Prime, n: i64, limit: usize) -> Result<Vec<ListingEntry>, BijectionError> {
    let layout = WLayout::new(p, n)?;
    let mut idx = enumerate_indices(p, n, EnumerationOptions::default())?;
    idx.sort_by_cached_key(|x| x.degree_m_unchecked(p).unwrap_or(i64::MAX));
    idx.into_iter()
        .take(limit)
        .map(|x| {
            let (b, tau) = x.m_monomial(p);
            let mut m = String::new();
            if b > 0 {
                write!(m, "b^{b}").unwrap();
            }
            for (i, &e) in tau.iter().enumerate() {
                for _ in 0..e {
                    if !m.is_empty() {
                        m.push(' ');
                    }
                    write!(m, "tau{i}").unwrap();
                }
            }
            if m.is_empty() {
                m.push('1');
            }
            let n_str = monomial_string(&layout.generators, &x.n_exponents(p, &layout));
            Ok(ListingEntry { degree: x.degree_m_unchecked(p)?, index: x, m, n: n_str })
        })
        .collect()
}

fn monomial_string(gens: &[GeneratorSpec], exps: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}
