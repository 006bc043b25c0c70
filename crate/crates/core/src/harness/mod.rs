//! Experiment orchestration: Galois certification of walk products,
//! surveys over walk lengths, certification times, the decay of
//! non-regular elements, and the abelian counterexample.

pub mod galois;
pub mod survey;
pub mod torus;

pub use galois::{
    certify_state, default_prime_floor, galois_certify, galois_certify_modular, galois_certify_poly, GaloisOutcome,
    PrimeBudget,
};
pub use survey::{
    decay_estimate, estimate_tau, nonreg_decay, survey, tau_median, trial_index, DecayEstimate, NonregRow, SurveyResult,
    SurveyRow, SurveySpec, TauSample, TrialRecord,
};
pub use torus::{central_trinomials, return_probability, torus_demo, torus_limit, TorusMode, TorusRow};
