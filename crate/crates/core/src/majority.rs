//! Majority-vote analytics: vote margins, expected shares, the optimal
//! majority strategy, the critical threshold, and exact finite-n outcome
//! probabilities of the majority vote mechanism.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discrete::{binomial, convolved_upper_tail};
use crate::model::{
    informed_majority_decision, Alternative, Configuration, Instance, Signal, SignalModel,
    SymmetricProfile, VotingStrategy, WorldState,
};

/// Expected vote margins toward A in states H and L.
///
/// Returns `(margin_H, margin_L)` where `margin_H = P_h^H * delta_h -
/// P_l^H * delta_l` and `margin_L = P_h^L * delta_h - P_l^L * delta_l`.
pub fn margins(strategy: &VotingStrategy, sm: &SignalModel) -> (f64, f64) {
    let d_h = sm.p_h_given_h() * strategy.delta_h() - sm.p_l_given_h() * strategy.delta_l();
    let d_l = sm.p_h_given_l() * strategy.delta_h() - sm.p_l_given_l() * strategy.delta_l();
    (d_h, d_l)
}

/// Expected per-agent vote shares `(p_A^H, p_R^L)` of the informed majority
/// decision in each state, for a single-type population playing `strategy`.
pub fn expected_shares(strategy: &VotingStrategy, sm: &SignalModel) -> (f64, f64) {
    let (d_h, d_l) = margins(strategy, sm);
    (0.5 + d_h, 0.5 - d_l)
}

/// The strategy maximizing the minimum of the two expected shares, for a
/// majority preferring A in state H.
pub fn optimal_strategy(sm: &SignalModel) -> VotingStrategy {
    let sum_h = sm.p_h_given_l() + sm.p_h_given_h();
    let sum_l = sm.p_l_given_l() + sm.p_l_given_h();
    if sum_h <= 1.0 {
        VotingStrategy::new(0.5 * sum_h / sum_l, 0.5).unwrap()
    } else {
        VotingStrategy::new(0.5, 0.5 * sum_l / sum_h).unwrap()
    }
}

/// The maximized minimum expected share at the optimal strategy.
pub fn m_value(sm: &SignalModel) -> f64 {
    let sum_h = sm.p_h_given_l() + sm.p_h_given_h();
    if sum_h <= 1.0 {
        sm.p_l_given_l() / (sm.p_l_given_l() + sm.p_l_given_h())
    } else {
        sm.p_h_given_h() / (sm.p_h_given_l() + sm.p_h_given_h())
    }
}

/// Critical majority proportion for the majority vote mechanism: 1/(2M).
pub fn theta_maj(sm: &SignalModel) -> f64 {
    1.0 / (2.0 * m_value(sm))
}

/// Summary of the majority-vote analysis of a signal model, stated for a
/// majority preferring A in state H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorityVoteAnalysis {
    pub optimal_strategy: VotingStrategy,
    pub m_value: f64,
    pub theta_maj: f64,
    pub shares_at_optimum: (f64, f64),
}

impl MajorityVoteAnalysis {
    pub fn for_model(sm: &SignalModel) -> MajorityVoteAnalysis {
        let strategy = optimal_strategy(sm);
        MajorityVoteAnalysis {
            optimal_strategy: strategy,
            m_value: m_value(sm),
            theta_maj: theta_maj(sm),
            shares_at_optimum: expected_shares(&strategy, sm),
        }
    }
}

/// The optimal strategy of the majority type in `config`. When the majority
/// is the type preferring A in state L, the model is mirrored (states,
/// signals, and alternatives relabelled) instead of duplicating formulas.
pub fn optimal_strategy_for_majority(config: &Configuration) -> VotingStrategy {
    match config.majority_type() {
        crate::model::AgentType::TypeH => optimal_strategy(config.signal_model()),
        crate::model::AgentType::TypeL => {
            optimal_strategy(&config.signal_model().mirrored()).mirrored()
        }
    }
}

/// Per-agent probability of voting A in `state` under `strategy`.
pub fn vote_a_probability(strategy: &VotingStrategy, sm: &SignalModel, state: WorldState) -> f64 {
    sm.prob(Signal::L, state) * strategy.beta_l() + sm.prob(Signal::H, state) * strategy.beta_h()
}

/// Exact probability that A wins the majority vote in `state`, with the
/// one-half tie rule, for `majority_count` majority-type agents and
/// `n - majority_count` minority agents playing their profile strategies.
pub fn exact_outcome(
    n: u64,
    majority_count: u64,
    profile: &SymmetricProfile,
    config: &Configuration,
    state: WorldState,
) -> f64 {
    assert!(majority_count <= n, "majority_count exceeds n");
    let sm = config.signal_model();
    let maj_type = config.majority_type();
    let q_maj = vote_a_probability(&profile.strategy_for(maj_type), sm, state);
    let q_min = vote_a_probability(&profile.strategy_for(maj_type.other()), sm, state);
    let maj = binomial(majority_count, q_maj).expect("valid vote probability");
    let min = binomial(n - majority_count, q_min).expect("valid vote probability");
    convolved_upper_tail(&maj, &min, n as f64 / 2.0, 0.5)
}

/// Probability the informed majority decision wins, mixed over the prior.
pub fn winning_probability_imd(
    n: u64,
    majority_count: u64,
    profile: &SymmetricProfile,
    config: &Configuration,
) -> f64 {
    let mu = config.signal_model().mu();
    let mut total = 0.0;
    for (state, weight) in [(WorldState::H, mu), (WorldState::L, 1.0 - mu)] {
        let p_a = exact_outcome(n, majority_count, profile, config, state);
        let p_imd = match informed_majority_decision(config, state) {
            Alternative::A => p_a,
            Alternative::R => 1.0 - p_a,
        };
        total += weight * p_imd;
    }
    total
}

/// Empirical outcome frequencies from `trials` seeded Monte Carlo elections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub trials: u64,
    pub state_h_trials: u64,
    pub a_wins_given_h: u64,
    pub a_wins_given_l: u64,
}

impl SimulationResult {
    pub fn freq_a_given_h(&self) -> f64 {
        if self.state_h_trials == 0 {
            f64::NAN
        } else {
            self.a_wins_given_h as f64 / self.state_h_trials as f64
        }
    }

    pub fn freq_a_given_l(&self) -> f64 {
        let l_trials = self.trials - self.state_h_trials;
        if l_trials == 0 {
            f64::NAN
        } else {
            self.a_wins_given_l as f64 / l_trials as f64
        }
    }

    pub fn freq_a(&self) -> f64 {
        (self.a_wins_given_h + self.a_wins_given_l) as f64 / self.trials as f64
    }
}

/// Monte Carlo estimate of the election outcome; deterministic given `seed`.
pub fn simulate_election(
    instance: &Instance,
    profile: &SymmetricProfile,
    trials: u64,
    seed: u64,
) -> SimulationResult {
    assert!(trials >= 1, "at least one trial required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sm = instance.configuration().signal_model();
    let n = instance.n();
    let mut result = SimulationResult {
        trials,
        state_h_trials: 0,
        a_wins_given_h: 0,
        a_wins_given_l: 0,
    };
    for _ in 0..trials {
        let state = if rng.gen::<f64>() < sm.mu() {
            WorldState::H
        } else {
            WorldState::L
        };
        let p_h = sm.prob(Signal::H, state);
        let mut a_votes = 0u64;
        for u in instance.utilities() {
            let strategy = profile.strategy_for(u.owner_type());
            let signal = if rng.gen::<f64>() < p_h {
                Signal::H
            } else {
                Signal::L
            };
            if rng.gen::<f64>() < strategy.beta(signal) {
                a_votes += 1;
            }
        }
        let a_wins = match (2 * a_votes).cmp(&n) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => rng.gen::<bool>(),
        };
        if state == WorldState::H {
            result.state_h_trials += 1;
            if a_wins {
                result.a_wins_given_h += 1;
            }
        } else if a_wins {
            result.a_wins_given_l += 1;
        }
    }
    result
}
