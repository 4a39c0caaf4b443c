//! Analytical engine for two-alternative voting games between antagonistic
//! agent types: majority-vote analysis, exact finite-n outcome
//! distributions, equilibrium verification, a truthful threshold mechanism,
//! questionnaire-based parameter elicitation, and indistinguishability
//! experiments.

pub mod discrete;
pub mod elicitation;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod impossibility;
pub mod majority;
pub mod mechanism;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    informed_majority_decision, majority_count, minority_count, validate_instance, AgentType,
    Alternative, Configuration, Instance, Signal, SignalModel, SymmetricProfile, UtilityFunction,
    ValidationReport, VotingStrategy, WorldState,
};
