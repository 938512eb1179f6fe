//! Closed-form solutions and end-to-end verification of candidate solutions.

mod bubble;
mod verify;

pub use bubble::{aubin_talenti, verify_cor3, BubbleCertificate, ClosedFormKind, ClosedFormSolution};
pub use verify::{verify_solution, SolutionCertificate};
