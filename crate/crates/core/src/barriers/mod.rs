//! Barrier profiles, explicit sandwich constants, and parameter classification.

mod classify;
mod ledger;
mod model;
mod profile;

pub use classify::{classify, classify_scalar_algebraic, Advisory, Verdict, VerdictStatus};
pub use ledger::{
    alg_regime_ledger, exp_regime_ledger, ConstantsLedger, Regime, ALG_ALPHA_SMALL, ALG_BETA_ABOVE_ALPHA,
    ALG_BETA_BUDGET, EXP_BETA_BUDGET, EXP_LAMBDA_THRESHOLD, EXP_MU_THRESHOLD, M1_ORDER, M2_ORDER,
};
pub use model::{sigma_index, Exponents, Problem, SourceKind, SourceModel, TheoremTag};
pub use profile::{
    barrier_derivative, barrier_operator_ratio, barrier_operator_value, check_sandwich, eval_barrier,
    sandwich_coefficients, BarrierProfile, Family, SandwichCheck,
};
