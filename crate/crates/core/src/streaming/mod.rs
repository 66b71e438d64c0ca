//! Constant-memory machinery: banded LDL, windowed products, and the
//! rational-function processors built from them.

pub mod banded_inv;
pub mod banded_prod;
pub mod ldl;
pub mod rational;

pub use banded_inv::StreamingBandedInvProcessor;
pub use banded_prod::StreamingBandedProdProcessor;
pub use ldl::{dense_ldl, LDLFactorization, PivotPolicy, StreamingLDLProcessor};
pub use rational::{
    lanczos_fa_lm, lanczos_fa_lm_audited, lanczos_or_lm, lanczos_or_lm_audited, termwise_or_lm,
    BandedRationalProcessor,
};
