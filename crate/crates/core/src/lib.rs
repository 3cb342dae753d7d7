//! Differential Chow forms and their generalizations, including
//! differential resultants, over `Q` and `Q(t)`.

pub mod algelim;
pub mod chow;
pub mod diffring;
pub mod error;
pub mod field;
pub mod quasivariety;
pub mod ranking;
pub mod reduction;
pub mod verify;

pub use chow::{ChowForm, GenericShape};
pub use diffring::{DerVar, DiffPoly, Monomial, Order, Ring, RingContext, VarKind};
pub use error::{Error, Result};
pub use field::{BaseField, Coeff};
pub use ranking::{RankDecomposition, Ranking, RankingKind};
pub use reduction::{charset, DiffChain, DimOrder, ReductionCertificate};
pub use verify::{Check, CheckStatus, VerificationReport};
