//! Questionnaire processing: recover the signal-model parameters and the
//! mechanism threshold from agents' posterior and peer-prediction answers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanism::Report;
use crate::model::{AgentType, Alternative, Signal, SignalModel};

/// One agent's questionnaire answers. The counterfactual fields answer
/// "suppose you had received the opposite signal".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuestionnaireResponse {
    /// Preferred alternative if the state were known to be L.
    pub preference_in_l: Alternative,
    pub declared_signal: Signal,
    /// Pr[peer's signal = l | own signal].
    pub peer_l_prediction: f64,
    /// Pr[state = L | own signal].
    pub posterior_l: f64,
    pub counterfactual_peer_l_prediction: f64,
    pub counterfactual_posterior_l: f64,
}

/// Parameters recovered from a single response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveredParameters {
    pub delta: f64,
    pub p_l_given_h: f64,
    pub p_l_given_l: f64,
    pub threshold: f64,
}

/// Inverts the questionnaire: from the two posteriors and the two peer
/// predictions, recover the signal-frequency gap, the conditional l
/// probabilities, and the mechanism threshold.
pub fn recover_parameters(resp: &QuestionnaireResponse) -> Result<RecoveredParameters> {
    // Orient actual vs counterfactual answers by the declared signal.
    let (peer_l, post_l, peer_h, post_h) = match resp.declared_signal {
        Signal::L => (
            resp.peer_l_prediction,
            resp.posterior_l,
            resp.counterfactual_peer_l_prediction,
            resp.counterfactual_posterior_l,
        ),
        Signal::H => (
            resp.counterfactual_peer_l_prediction,
            resp.counterfactual_posterior_l,
            resp.peer_l_prediction,
            resp.posterior_l,
        ),
    };
    let post_gap = post_l - post_h;
    if post_gap.abs() < 1e-15 {
        return Err(Error::DegenerateSignal);
    }
    let delta = (peer_l - peer_h) / post_gap;
    let p_l_given_h = peer_l - post_l * delta;
    let p_l_given_l = peer_l + (1.0 - post_l) * delta;
    if delta <= 0.0 {
        return Err(Error::InconsistentResponse(format!(
            "recovered signal gap {delta} is not positive"
        )));
    }
    for (name, v) in [("P_l_given_H", p_l_given_h), ("P_l_given_L", p_l_given_l)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InconsistentResponse(format!(
                "recovered {name} = {v} lies outside [0, 1]"
            )));
        }
    }
    Ok(RecoveredParameters {
        delta,
        p_l_given_h,
        p_l_given_l,
        threshold: p_l_given_l / (1.0 + delta),
    })
}

/// Builds the Bayes-consistent response of an agent with the given signal.
pub fn synthesize_response(
    sm: &SignalModel,
    signal: Signal,
    agent_type: AgentType,
) -> QuestionnaireResponse {
    let posterior_l = |s: Signal| {
        let num = (1.0 - sm.mu()) * sm.prob(s, crate::model::WorldState::L);
        let den = num + sm.mu() * sm.prob(s, crate::model::WorldState::H);
        num / den
    };
    let peer_l = |s: Signal| sm.p_l_given_h() + posterior_l(s) * sm.delta();
    QuestionnaireResponse {
        preference_in_l: agent_type.preferred_alternative(crate::model::WorldState::L),
        declared_signal: signal,
        peer_l_prediction: peer_l(signal),
        posterior_l: posterior_l(signal),
        counterfactual_peer_l_prediction: peer_l(signal.other()),
        counterfactual_posterior_l: posterior_l(signal.other()),
    }
}

/// Outcome of turning questionnaire responses into mechanism reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationResult {
    pub reports: Vec<Report>,
    /// Indices of responses excluded for failing parameter recovery.
    pub excluded: Vec<usize>,
    /// True when all recovered signal gaps agree pairwise within 1e-6;
    /// disagreement flags an incoherent population without resolving it.
    pub deltas_consistent: bool,
}

/// Converts responses to mechanism reports: the type is inferred from the
/// state-L preference, the signal is passed through, the threshold comes
/// from parameter recovery. Unrecoverable responses are excluded.
pub fn aggregate_reports(responses: &[QuestionnaireResponse]) -> Result<AggregationResult> {
    if responses.is_empty() {
        return Err(Error::EmptyReports);
    }
    let mut reports = Vec::new();
    let mut excluded = Vec::new();
    let mut deltas = Vec::new();
    for (i, resp) in responses.iter().enumerate() {
        match recover_parameters(resp) {
            Ok(params) => {
                let declared_type = match resp.preference_in_l {
                    Alternative::A => AgentType::TypeL,
                    Alternative::R => AgentType::TypeH,
                };
                reports.push(Report::new(
                    declared_type,
                    resp.declared_signal,
                    params.threshold,
                )?);
                deltas.push(params.delta);
            }
            Err(_) => excluded.push(i),
        }
    }
    if reports.is_empty() {
        return Err(Error::AllResponsesInconsistent);
    }
    let d_min = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
    let d_max = deltas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(AggregationResult {
        reports,
        excluded,
        deltas_consistent: d_max - d_min <= 1e-6,
    })
}
