//! The anonymous threshold mechanism: report collection, majority-type
//! identification, median threshold, state assessment, and outcome
//! selection, plus its critical proportion and inequality certificates.

use serde::{Deserialize, Serialize};

use crate::discrete::{binomial, hoeffding_bound};
use crate::error::{Error, Result};
use crate::model::{AgentType, Alternative, Configuration, Signal, SignalModel, WorldState};

/// One agent's report: declared type, declared signal, and a threshold
/// value for the state assessment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub declared_type: AgentType,
    pub declared_signal: Signal,
    pub threshold_value: f64,
}

impl Report {
    pub fn new(declared_type: AgentType, declared_signal: Signal, threshold_value: f64) -> Result<Self> {
        if !(threshold_value > 0.0 && threshold_value < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold {threshold_value} must lie strictly inside (0, 1)"
            )));
        }
        Ok(Report {
            declared_type,
            declared_signal,
            threshold_value,
        })
    }
}

/// Full audit trail of one mechanism run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanismTrace {
    pub identified_majority: AgentType,
    /// True when the type plurality was an exact tie (broken to TypeH).
    pub majority_tie_broken: bool,
    pub collective_threshold: f64,
    pub l_frequency: f64,
    pub assessed_state: WorldState,
    pub output: Alternative,
}

/// Threshold every agent should report: P_l^L / (P_l^L + P_h^H),
/// equivalently P_l^L / (1 + delta).
pub fn ideal_threshold(sm: &SignalModel) -> f64 {
    sm.p_l_given_l() / (sm.p_l_given_l() + sm.p_h_given_h())
}

/// Critical majority proportion of the threshold mechanism: 1/(delta + 1).
pub fn theta_star(sm: &SignalModel) -> f64 {
    1.0 / (sm.delta() + 1.0)
}

/// One inequality of the certificate: its description, truth value, and
/// slack (positive means strictly satisfied).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub description: String,
    pub holds: bool,
    pub slack: f64,
}

impl InequalityCheck {
    fn strictly_less(description: &str, lhs: f64, rhs: f64) -> InequalityCheck {
        InequalityCheck {
            description: description.to_string(),
            holds: lhs < rhs,
            slack: rhs - lhs,
        }
    }
}

/// Certificate of the separation inequalities between signal frequencies
/// and the threshold, both for truthful populations and against extreme
/// minority misreports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCertificate {
    pub threshold: f64,
    /// Population-level chains: P_l^H < delta < P_l^L and the complementary
    /// P_h^L < 1 - delta < P_h^H.
    pub truthful_chains: Vec<InequalityCheck>,
    /// Strategic chains, present when alpha exceeds 1/(delta + 1): the
    /// minority's extreme misreports cannot move the expected l-frequency
    /// across the threshold.
    pub strategic_chains: Option<Vec<InequalityCheck>>,
}

impl FrequencyCertificate {
    pub fn all_hold(&self) -> bool {
        self.truthful_chains.iter().all(|c| c.holds)
            && self
                .strategic_chains
                .as_ref()
                .map_or(true, |v| v.iter().all(|c| c.holds))
    }

    pub fn min_slack(&self) -> f64 {
        self.truthful_chains
            .iter()
            .chain(self.strategic_chains.iter().flatten())
            .map(|c| c.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the separation inequalities for a model and majority fraction.
pub fn check_frequency_inequalities(sm: &SignalModel, alpha: f64) -> FrequencyCertificate {
    let d = ideal_threshold(sm);
    let truthful = vec![
        InequalityCheck::strictly_less("P_l^H < threshold", sm.p_l_given_h(), d),
        InequalityCheck::strictly_less("threshold < P_l^L", d, sm.p_l_given_l()),
        InequalityCheck::strictly_less("P_h^L < 1 - threshold", sm.p_h_given_l(), 1.0 - d),
        InequalityCheck::strictly_less("1 - threshold < P_h^H", 1.0 - d, sm.p_h_given_h()),
    ];
    let strategic = if alpha > theta_star(sm) {
        Some(vec![
            InequalityCheck::strictly_less("threshold < alpha P_l^L", d, alpha * sm.p_l_given_l()),
            InequalityCheck::strictly_less(
                "alpha P_l^H + (1 - alpha) < threshold",
                alpha * sm.p_l_given_h() + (1.0 - alpha),
                d,
            ),
            InequalityCheck::strictly_less(
                "alpha P_h^L + (1 - alpha) < 1 - threshold",
                alpha * sm.p_h_given_l() + (1.0 - alpha),
                1.0 - d,
            ),
            InequalityCheck::strictly_less(
                "1 - threshold < alpha P_h^H",
                1.0 - d,
                alpha * sm.p_h_given_h(),
            ),
        ])
    } else {
        None
    };
    FrequencyCertificate {
        threshold: d,
        truthful_chains: truthful,
        strategic_chains: strategic,
    }
}

/// Runs the mechanism on a list of reports.
///
/// Steps: plurality of declared types (exact tie broken to TypeH); lower
/// median of reported thresholds; state assessed L iff the l-report
/// frequency strictly exceeds the collective threshold; output is the
/// identified majority's preferred alternative in the assessed state.
pub fn run_mechanism(reports: &[Report]) -> Result<MechanismTrace> {
    if reports.is_empty() {
        return Err(Error::EmptyReports);
    }
    let n = reports.len();
    let h_types = reports
        .iter()
        .filter(|r| r.declared_type == AgentType::TypeH)
        .count();
    let l_types = n - h_types;
    let majority_tie_broken = h_types == l_types;
    let identified_majority = if h_types >= l_types {
        AgentType::TypeH
    } else {
        AgentType::TypeL
    };

    let mut thresholds: Vec<f64> = reports.iter().map(|r| r.threshold_value).collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).expect("thresholds are finite"));
    // Lower median: the ceil(n/2)-th order statistic.
    let collective_threshold = thresholds[n.div_ceil(2) - 1];

    let l_signals = reports
        .iter()
        .filter(|r| r.declared_signal == Signal::L)
        .count();
    let l_frequency = l_signals as f64 / n as f64;
    let assessed_state = if l_frequency > collective_threshold {
        WorldState::L
    } else {
        WorldState::H
    };
    Ok(MechanismTrace {
        identified_majority,
        majority_tie_broken,
        collective_threshold,
        l_frequency,
        assessed_state,
        output: identified_majority.preferred_alternative(assessed_state),
    })
}

/// The report a truthful agent of the given type submits.
pub fn truthful_map(agent_type: AgentType, signal: Signal, sm: &SignalModel) -> Report {
    Report {
        declared_type: agent_type,
        declared_signal: signal,
        threshold_value: ideal_threshold(sm),
    }
}

/// Exact probability that the mechanism outputs the informed majority
/// decision under all-truthful reporting, with the concentration bound it
/// is guaranteed to clear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthfulSuccess {
    pub exact: f64,
    /// 1 - 2 exp(-2 c^2 n) with c = min(P_l^L - threshold, threshold -
    /// P_l^H) / 3; can be negative at small n (vacuous).
    pub bound: f64,
    pub success_given_h: f64,
    pub success_given_l: f64,
}

/// Computes [`TruthfulSuccess`] by exact binomial tails of the l-report
/// count against n * threshold.
pub fn truthful_success_probability(config: &Configuration, n: u64) -> TruthfulSuccess {
    let sm = config.signal_model();
    let d = ideal_threshold(sm);
    let cut = d * n as f64;
    // State L: success iff #l strictly exceeds n * threshold.
    let bin_l = binomial(n, sm.p_l_given_l()).expect("valid probability");
    let success_given_l = bin_l.upper_tail(cut, 0.0);
    // State H: success iff #l does not exceed it.
    let bin_h = binomial(n, sm.p_l_given_h()).expect("valid probability");
    let success_given_h = 1.0 - bin_h.upper_tail(cut, 0.0);
    let mu = sm.mu();
    let c = (sm.p_l_given_l() - d).min(d - sm.p_l_given_h()) / 3.0;
    TruthfulSuccess {
        exact: mu * success_given_h + (1.0 - mu) * success_given_l,
        bound: 1.0 - 2.0 * hoeffding_bound(n, c),
        success_given_h,
        success_given_l,
    }
}
