//! The Γ main term, the singular-integral identity, the cascade
//! `Mk -> A1 -> A2 -> A3`, and the verification harness.

mod integral;
mod main_term;
mod verify;

pub use integral::{singular_integral_check, SingularIntegralCheck, MAX_WINDOW};
pub use main_term::{log_gamma_ratio, main_term, MainTerm};
pub use verify::{
    approx_a1, approx_a2, approx_a3, regime_label, scan, verify, HalfMedians, ScanFailure, ScanReport, ScanSummary,
    VerificationRecord, VerifyConfig, SPLIT_TOL, VERIFY_CSV_HEADER,
};
