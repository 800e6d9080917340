//! Exact computations around the Frobenius endomorphism of polynomial rings
//! over prime fields.
//!
//! The crate provides, bottom up:
//!
//! * [`ring`] — sparse multivariate polynomial arithmetic over `F_p`,
//!   Frobenius powers and exact division;
//! * [`groebner`] — Buchberger's algorithm and the ideal decision procedures
//!   (membership, containment, equality) plus bracket powers `I^[p^e]`;
//! * [`frobenius`] — the free basis of `R` over its subring of `p^e`-th
//!   powers, Cartier projections, `p^e`-th root ideals and the splitting
//!   composite `F^e ∘ π_e`;
//! * [`diffop`] — the level-`e` differential operator algebra
//!   `D^(e) = End_{R^{p^e}}(R)` as an explicit matrix algebra, with the
//!   Morita maps `Φ`/`Ψ`, the left ideal `J_e`, level embeddings and the
//!   Frobenius twist;
//! * [`localized`] — the localization `R_f` as a unit module over the
//!   twisted polynomial ring, fractional submodules, Frobenius pullback
//!   chains, generation witnesses and root certificates.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod diffop;
pub mod error;
pub mod frobenius;
pub mod groebner;
pub mod linalg;
pub mod localized;
pub mod ring;
pub mod sample;

pub use diffop::{
    ann_je, de_orbit, is_de_stable, matrix_orbit, phi_map, psi_inverse, psi_map, AnnJe, DiffOp,
    DualElement,
};
pub use error::Error;
pub use frobenius::{
    cartier_project, decompose, recompose, root_ideal, splitting_compose, FrobeniusBasis,
    FrobeniusDecomposition,
};
pub use groebner::{Ideal, MonomialOrder};
pub use localized::{
    apply_operator, chain_report, de_generated, generation_witness, is_unit_submodule, root_check,
    ChainReport, FracSubmodule, LocalizedElement, RootCheck, UnitCertificate, UnitStructure,
    Witness,
};
pub use ring::{exact_divide, Limits, Monomial, Polynomial, RingContext};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
