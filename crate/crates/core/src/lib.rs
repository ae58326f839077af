//! Exact degree arithmetic and graded-dimension counting for the
//! `C_p`-equivariant dual Steenrod algebra.
//!
//! The crate models `Z̲_(p) ⊗ Z̲_(p)` as a tensor product of cell complexes
//! `X_i = S^0 ⊕ (S^0[N t_i] ⊗ T_θ(t_i))` and checks, degree by degree, that
//! the model has the right size both on underlying spectra and on geometric
//! fixed points. Everything is integer arithmetic; there are no tolerances.
//!
//! * [`grading`]: the `(fixed, underlying)` degree lattice and named degrees.
//! * [`series`]: truncated dimension series, free algebras, monomial quotients.
//! * [`blocks`]: the expression grammar and the model `X`.
//! * [`lenses`]: underlying and geometric-fixed-point dimension counts.
//! * [`reference`]: classical series (`A_*`, `F_p[b]`, ...) from generators.
//! * [`bsone`]: Lewis splitting degrees and the `θ`-coefficient lint.
//! * [`bijection`]: the `V`/`W` monomial bases and their correspondence.
//! * [`cli`]: the `cpsteenrod` command.
//!
//! ```
//! use cpsteenrod::grading::Prime;
//! use cpsteenrod::blocks::SpectrumExpr;
//! use cpsteenrod::lenses::{eval, Lens};
//! use cpsteenrod::reference::hz_modp_series;
//!
//! let p = Prime::new(3).unwrap();
//! let model = eval(&SpectrumExpr::DsaModel { p }, Lens::Underlying, 60).unwrap();
//! assert_eq!(model, hz_modp_series(p, 60));
//! ```

pub mod bijection;
pub mod blocks;
pub mod bsone;
pub mod cli;
pub mod grading;
pub mod lenses;
pub mod reference;
pub mod series;
