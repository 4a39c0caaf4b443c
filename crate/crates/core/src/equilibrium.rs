//! Ex-ante utilities, utility-difference identities, explicit deviation
//! constructions, and epsilon-strong Bayes Nash equilibrium verification
//! over a structured deviation space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::discrete::hoeffding_bound;
use crate::error::{Error, Result};
use crate::majority::{exact_outcome, expected_shares, optimal_strategy};
use crate::model::{
    AgentType, Configuration, Instance, SignalModel, SymmetricProfile, UtilityFunction,
    VotingStrategy, WorldState,
};

/// Probability that a mechanism outputs A, per world state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub lambda_a_h: f64,
    pub lambda_a_l: f64,
}

impl OutcomeDistribution {
    pub fn new(lambda_a_h: f64, lambda_a_l: f64) -> Result<Self> {
        for (name, v) in [("lambda_A_H", lambda_a_h), ("lambda_A_L", lambda_a_l)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must lie in [0, 1]"
                )));
            }
        }
        Ok(OutcomeDistribution {
            lambda_a_h,
            lambda_a_l,
        })
    }

    /// Outcome of the majority vote under a symmetric profile.
    pub fn of_majority_vote(
        n: u64,
        majority_count: u64,
        profile: &SymmetricProfile,
        config: &Configuration,
    ) -> OutcomeDistribution {
        OutcomeDistribution {
            lambda_a_h: exact_outcome(n, majority_count, profile, config, WorldState::H),
            lambda_a_l: exact_outcome(n, majority_count, profile, config, WorldState::L),
        }
    }

    pub fn lambda_r_h(&self) -> f64 {
        1.0 - self.lambda_a_h
    }

    pub fn lambda_r_l(&self) -> f64 {
        1.0 - self.lambda_a_l
    }
}

/// Expected utility of an agent before signals are realized.
pub fn ex_ante_utility(agent: &UtilityFunction, outcome: &OutcomeDistribution, mu: f64) -> f64 {
    use crate::model::{Alternative::*, WorldState::*};
    mu * (outcome.lambda_a_h * agent.value(H, A) as f64
        + (1.0 - outcome.lambda_a_h) * agent.value(H, R) as f64)
        + (1.0 - mu)
            * (outcome.lambda_a_l * agent.value(L, A) as f64
                + (1.0 - outcome.lambda_a_l) * agent.value(L, R) as f64)
}

/// Ex-ante utility change when the outcome shifts from `from` to `to`,
/// expressed through the per-state utility gaps.
///
/// For an agent preferring A in state H this is
/// `mu * (lambda_A_H' - lambda_A_H) * dv_H - (1-mu) * (lambda_A_L' -
/// lambda_A_L) * dv_L`; for the antagonistic type the two terms swap signs.
pub fn utility_difference(
    agent: &UtilityFunction,
    from: &OutcomeDistribution,
    to: &OutcomeDistribution,
    mu: f64,
) -> f64 {
    let dv_h = agent.delta_v(WorldState::H) as f64;
    let dv_l = agent.delta_v(WorldState::L) as f64;
    let shift_h = to.lambda_a_h - from.lambda_a_h;
    let shift_l = to.lambda_a_l - from.lambda_a_l;
    match agent.owner_type() {
        AgentType::TypeH => mu * shift_h * dv_h - (1.0 - mu) * shift_l * dv_l,
        AgentType::TypeL => -mu * shift_h * dv_h + (1.0 - mu) * shift_l * dv_l,
    }
}

/// The majority mixture that absorbs the minority's expected vote impact:
/// play the negation of the minority strategy with probability
/// `(1 - alpha)/alpha` and the optimal strategy otherwise, collapsed to a
/// single equivalent strategy by mixing the per-signal vote probabilities.
pub fn counter_strategy_profile(
    minority_strategy: &VotingStrategy,
    sm: &SignalModel,
    alpha: f64,
) -> Result<VotingStrategy> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must exceed 1/2"
        )));
    }
    let w = (1.0 - alpha) / alpha;
    let neg = minority_strategy.negated();
    let opt = optimal_strategy(sm);
    VotingStrategy::from_betas(
        w * neg.beta_l() + (1.0 - w) * opt.beta_l(),
        w * neg.beta_h() + (1.0 - w) * opt.beta_h(),
    )
}

/// Which world states a deterministic minority vote can flip against the
/// majority's expected shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flippability {
    /// Voting R drags the expected A share in state H to 1/2 or below.
    FlipsStateH,
    /// Voting A drags the expected R share in state L to 1/2 or below.
    FlipsStateL,
    /// Either deterministic vote flips its state.
    Both,
    /// Neither state can be flipped by the minority alone.
    Unflippable,
}

/// The minority's most aggressive deterministic response and what it can
/// flip, stated for a majority preferring A in state H (mirror first for
/// the other orientation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggressiveMinority {
    pub strategy: VotingStrategy,
    pub flippability: Flippability,
}

pub fn best_aggressive_minority(
    majority_strategy: &VotingStrategy,
    sm: &SignalModel,
    alpha: f64,
) -> AggressiveMinority {
    let (p_a_h, p_r_l) = expected_shares(majority_strategy, sm);
    let flips_l = alpha * p_r_l <= 0.5; // minority all-A outvotes R in state L
    let flips_h = alpha * p_a_h <= 0.5; // minority all-R outvotes A in state H
    // Expected total share of the majority-preferred alternative per state,
    // for each candidate minority vote.
    let worst_share_all_a = (alpha * p_a_h + (1.0 - alpha)).min(alpha * p_r_l);
    let worst_share_all_r = (alpha * p_a_h).min(alpha * p_r_l + (1.0 - alpha));
    let prefer_all_a = worst_share_all_a <= worst_share_all_r;
    let (strategy, flippability) = match (flips_l, flips_h) {
        (true, false) => (VotingStrategy::always_a(), Flippability::FlipsStateL),
        (false, true) => (VotingStrategy::always_r(), Flippability::FlipsStateH),
        (true, true) => (
            if prefer_all_a {
                VotingStrategy::always_a()
            } else {
                VotingStrategy::always_r()
            },
            Flippability::Both,
        ),
        (false, false) => (
            if prefer_all_a {
                VotingStrategy::always_a()
            } else {
                VotingStrategy::always_r()
            },
            Flippability::Unflippable,
        ),
    };
    AggressiveMinority {
        strategy,
        flippability,
    }
}

/// True iff the outcome shift admits no win-win: neither type clears the
/// epsilon gain while the other weakly gains.
pub fn no_win_win_check(
    outcome_from: &OutcomeDistribution,
    outcome_to: &OutcomeDistribution,
    type_h_agent: &UtilityFunction,
    type_l_agent: &UtilityFunction,
    mu: f64,
    epsilon: f64,
) -> bool {
    let du_h = utility_difference(type_h_agent, outcome_from, outcome_to, mu);
    let du_l = utility_difference(type_l_agent, outcome_from, outcome_to, mu);
    let h_leads = du_h > epsilon && du_l >= 0.0;
    let l_leads = du_l > epsilon && du_h >= 0.0;
    !(h_leads || l_leads)
}

/// Guarantee level when the majority proportion clears the majority-vote
/// threshold: `2 B^2 exp(-2 c^2 floor(alpha n))` with
/// `c = (alpha M - 1/2)/3`.
pub fn secure_profile_epsilon(alpha: f64, m: f64, b: u32, n: u64) -> f64 {
    let c = (alpha * m - 0.5) / 3.0;
    2.0 * (b as f64).powi(2) * hoeffding_bound(crate::model::majority_count(alpha, n), c)
}

/// Gain floor of the counter-strategy deviation: `B exp(-2 c^2 n)` with
/// `c = (2 alpha - 1)(M - 1/2)/2`.
pub fn counter_deviation_epsilon(alpha: f64, m: f64, b: u32, n: u64) -> f64 {
    let c = 0.5 * (2.0 * alpha - 1.0) * (m - 0.5);
    b as f64 * hoeffding_bound(n, c)
}

/// Nonexistence margin below the majority-vote threshold:
/// `min(mu, 1-mu)/4 - 2 B^2 exp(-2 c^2 n)` with
/// `c = (2 alpha - 1) min(M - 1/2, 1/2 - alpha M)/2`.
///
/// Can be negative at small n, in which case the nonexistence claim is
/// vacuous and callers must not assert it.
pub fn nonexistence_epsilon(alpha: f64, m: f64, mu: f64, b: u32, n: u64) -> f64 {
    let c = 0.5 * (2.0 * alpha - 1.0) * (m - 0.5).min(0.5 - alpha * m);
    0.25 * mu.min(1.0 - mu) - 2.0 * (b as f64).powi(2) * hoeffding_bound(n, c)
}

/// Coalitions the verifier searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coalition {
    AllMinority,
    AllMajority,
    AllAgents,
}

/// A profitable coalition deviation found by the verifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationWitness {
    pub coalition: Coalition,
    pub deviation: SymmetricProfile,
    pub outcome_from: OutcomeDistribution,
    pub outcome_to: OutcomeDistribution,
    /// Ex-ante utility gain per distinct (type, utility table) group among
    /// coalition members.
    pub group_gains: Vec<(UtilityFunction, f64)>,
    pub min_gain: f64,
    pub max_gain: f64,
}

/// Verdict of the structured equilibrium search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumVerdict {
    pub is_epsilon_equilibrium: bool,
    pub epsilon: f64,
    /// Grid step of the searched deviation space; the verdict only covers
    /// type-symmetric deviations on this grid plus the counter-strategy
    /// constructions.
    pub grid_step: f64,
    pub witness: Option<DeviationWitness>,
}

fn grid_strategies(step: f64) -> Vec<f64> {
    let mut vals = Vec::new();
    let mut v = -0.5;
    while v < 0.5 - 1e-12 {
        vals.push(v);
        v += step;
    }
    vals.push(0.5);
    vals
}

/// Groups coalition members by utility table, with multiplicity.
fn coalition_groups(instance: &Instance, coalition: Coalition) -> Vec<UtilityFunction> {
    let maj_type = instance.configuration().majority_type();
    let mut seen: HashMap<UtilityFunction, ()> = HashMap::new();
    let mut groups = Vec::new();
    for u in instance.utilities() {
        let included = match coalition {
            Coalition::AllMinority => u.owner_type() != maj_type,
            Coalition::AllMajority => u.owner_type() == maj_type,
            Coalition::AllAgents => true,
        };
        if included && seen.insert(*u, ()).is_none() {
            groups.push(*u);
        }
    }
    groups
}

fn witness_if_profitable(
    instance: &Instance,
    coalition: Coalition,
    from: &OutcomeDistribution,
    deviation: SymmetricProfile,
    epsilon: f64,
) -> Option<DeviationWitness> {
    let config = instance.configuration();
    let to = OutcomeDistribution::of_majority_vote(
        instance.n(),
        instance.majority_count(),
        &deviation,
        config,
    );
    let mu = config.signal_model().mu();
    let groups = coalition_groups(instance, coalition);
    if groups.is_empty() {
        return None;
    }
    let mut gains = Vec::with_capacity(groups.len());
    let mut min_gain = f64::INFINITY;
    let mut max_gain = f64::NEG_INFINITY;
    for g in groups {
        let gain = utility_difference(&g, from, &to, mu);
        min_gain = min_gain.min(gain);
        max_gain = max_gain.max(gain);
        gains.push((g, gain));
    }
    if min_gain >= -1e-12 && max_gain > epsilon {
        Some(DeviationWitness {
            coalition,
            deviation,
            outcome_from: *from,
            outcome_to: to,
            group_gains: gains,
            min_gain,
            max_gain,
        })
    } else {
        None
    }
}

/// Searches type-symmetric coalition deviations for a profitable one.
///
/// Families searched, in deterministic lexicographic grid order:
/// (a) all minority agents jointly switch to any grid strategy;
/// (b) all majority agents jointly switch to any grid strategy or to the
///     counter-strategy mixture against any grid minority strategy;
/// (c) all agents jointly switch to a pair of grid strategies, screened by
///     the no-win-win test before full evaluation.
///
/// A `true` verdict means no witness exists in this restricted space at the
/// recorded grid step, not a proof over all deviations.
pub fn verify_epsilon_strong_bne(
    instance: &Instance,
    profile: &SymmetricProfile,
    epsilon: f64,
    grid_step: f64,
) -> EquilibriumVerdict {
    assert!(grid_step > 0.0 && grid_step <= 0.5, "grid step in (0, 1/2]");
    let config = instance.configuration();
    let sm = config.signal_model();
    let maj_type = config.majority_type();
    let n = instance.n();
    let k = instance.majority_count();
    let from = OutcomeDistribution::of_majority_vote(n, k, profile, config);
    let grid = grid_strategies(grid_step);
    let verdict_ok = |witness| EquilibriumVerdict {
        is_epsilon_equilibrium: witness_is_none(&witness),
        epsilon,
        grid_step,
        witness,
    };

    // Family (a): minority coalition, any grid strategy.
    if instance.minority_count() > 0 {
        for &dl in &grid {
            for &dh in &grid {
                let s = VotingStrategy::new(dl, dh).unwrap();
                let dev = profile.with_strategy_for(maj_type.other(), s);
                if let Some(w) =
                    witness_if_profitable(instance, Coalition::AllMinority, &from, dev, epsilon)
                {
                    return verdict_ok(Some(w));
                }
            }
        }
    }

    // Family (b): majority coalition, grid strategies plus counter-strategy
    // mixtures against each grid minority strategy.
    let mut majority_candidates: Vec<VotingStrategy> = Vec::new();
    for &dl in &grid {
        for &dh in &grid {
            majority_candidates.push(VotingStrategy::new(dl, dh).unwrap());
        }
    }
    for &dl in &grid {
        for &dh in &grid {
            let presumed = VotingStrategy::new(dl, dh).unwrap();
            if let Ok(cs) = counter_strategy_profile(&presumed, sm, config.alpha()) {
                majority_candidates.push(cs);
            }
        }
    }
    for s in majority_candidates {
        let dev = profile.with_strategy_for(maj_type, s);
        if let Some(w) =
            witness_if_profitable(instance, Coalition::AllMajority, &from, dev, epsilon)
        {
            return verdict_ok(Some(w));
        }
    }

    // Family (c): grand coalition over pairs of grid strategies, screened.
    let type_h_repr = instance
        .utilities()
        .iter()
        .find(|u| u.owner_type() == AgentType::TypeH)
        .copied()
        .unwrap_or_else(|| UtilityFunction::unit(AgentType::TypeH));
    let type_l_repr = instance
        .utilities()
        .iter()
        .find(|u| u.owner_type() == AgentType::TypeL)
        .copied()
        .unwrap_or_else(|| UtilityFunction::unit(AgentType::TypeL));
    let mu = sm.mu();
    for &maj_dl in &grid {
        for &maj_dh in &grid {
            let maj_s = VotingStrategy::new(maj_dl, maj_dh).unwrap();
            for &min_dl in &grid {
                for &min_dh in &grid {
                    let min_s = VotingStrategy::new(min_dl, min_dh).unwrap();
                    let dev = SymmetricProfile::new(
                        if maj_type == AgentType::TypeL { maj_s } else { min_s },
                        if maj_type == AgentType::TypeH { maj_s } else { min_s },
                    );
                    let to = OutcomeDistribution::of_majority_vote(n, k, &dev, config);
                    if no_win_win_check(&from, &to, &type_h_repr, &type_l_repr, mu, epsilon) {
                        continue;
                    }
                    if let Some(w) = witness_if_profitable(
                        instance,
                        Coalition::AllAgents,
                        &from,
                        dev,
                        epsilon,
                    ) {
                        return verdict_ok(Some(w));
                    }
                }
            }
        }
    }

    EquilibriumVerdict {
        is_epsilon_equilibrium: true,
        epsilon,
        grid_step,
        witness: None,
    }
}

fn witness_is_none(w: &Option<DeviationWitness>) -> bool {
    w.is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majority::{m_value, vote_a_probability};
    use crate::model::Alternative;
    use proptest::prelude::*;

    fn table1() -> SignalModel {
        SignalModel::new(0.5, 0.75, 0.5).unwrap()
    }

    fn type_h_table() -> UtilityFunction {
        UtilityFunction::new(AgentType::TypeH, 0, 5, 1, 0).unwrap()
    }

    fn type_l_table() -> UtilityFunction {
        UtilityFunction::new(AgentType::TypeL, 1, 0, 0, 5).unwrap()
    }

    fn example4_outcomes() -> (OutcomeDistribution, OutcomeDistribution) {
        let from = OutcomeDistribution::new(27.0 / 32.0, 0.5).unwrap();
        let to = OutcomeDistribution::new(7.0 / 27.0, 7.0 / 27.0).unwrap();
        (from, to)
    }

    #[test]
    fn ex_ante_utility_degenerate_outcomes() {
        let agent = type_h_table();
        let always_a = OutcomeDistribution::new(1.0, 1.0).unwrap();
        let sure = OutcomeDistribution::new(1.0, 0.0).unwrap();
        let never = OutcomeDistribution::new(0.0, 0.0).unwrap();
        assert!((ex_ante_utility(&agent, &sure, 0.5) - 3.0).abs() < 1e-15);
        assert!((ex_ante_utility(&agent, &never, 0.5) - 2.5).abs() < 1e-15);
        assert!((ex_ante_utility(&agent, &always_a, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn utility_difference_matches_example_fractions() {
        let (from, to) = example4_outcomes();
        let du_h = utility_difference(&type_h_table(), &from, &to, 0.5);
        let du_l = utility_difference(&type_l_table(), &from, &to, 0.5);
        assert!((du_h - 535.0 / 1728.0).abs() < 1e-12);
        assert!((du_l - 2317.0 / 1728.0).abs() < 1e-12);
        assert_eq!(utility_difference(&type_h_table(), &from, &from, 0.5), 0.0);
    }

    #[test]
    fn counter_strategy_examples() {
        let sm = table1();
        // Minority always-A at alpha = 0.9: mixture of always-R (weight 1/9)
        // and the optimal strategy.
        let cs = counter_strategy_profile(&VotingStrategy::always_a(), &sm, 0.9).unwrap();
        assert!((cs.beta_l() - 0.0).abs() < 1e-12);
        assert!((cs.beta_h() - (8.0 / 9.0) * 0.8).abs() < 1e-12);
        // Neutral minority at alpha -> 1 recovers the optimal strategy.
        let cs = counter_strategy_profile(&VotingStrategy::neutral(), &sm, 1.0 - 1e-12).unwrap();
        let opt = optimal_strategy(&sm);
        assert!((cs.beta_l() - opt.beta_l()).abs() < 1e-9);
        assert!((cs.beta_h() - opt.beta_h()).abs() < 1e-9);
        assert!(counter_strategy_profile(&VotingStrategy::neutral(), &sm, 0.4).is_err());
    }

    proptest! {
        #[test]
        fn counter_strategy_absorbs_minority_share(
            dl in -0.5f64..0.5,
            dh in -0.5f64..0.5,
            alpha in 0.51f64..0.99,
        ) {
            let sm = table1();
            let minority = VotingStrategy::new(dl, dh).unwrap();
            let cs = counter_strategy_profile(&minority, &sm, alpha).unwrap();
            let m = m_value(&sm);
            let expect = (2.0 * alpha - 1.0) * (m - 0.5) + 0.5;
            // Total A share in H and R share in L, over both groups.
            for state in [WorldState::H, WorldState::L] {
                let total_a = alpha * vote_a_probability(&cs, &sm, state)
                    + (1.0 - alpha) * vote_a_probability(&minority, &sm, state);
                let imd_share = if state == WorldState::H { total_a } else { 1.0 - total_a };
                prop_assert!((imd_share - expect).abs() < 1e-12);
            }
        }

        #[test]
        fn utility_difference_consistent_with_ex_ante(
            (lah, lal, lah2, lal2) in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
            mu in 0.01f64..0.99,
        ) {
            let from = OutcomeDistribution::new(lah, lal).unwrap();
            let to = OutcomeDistribution::new(lah2, lal2).unwrap();
            for agent in [type_h_table(), type_l_table()] {
                let direct = ex_ante_utility(&agent, &to, mu) - ex_ante_utility(&agent, &from, mu);
                let via_diff = utility_difference(&agent, &from, &to, mu);
                prop_assert!((direct - via_diff).abs() < 1e-12);
            }
        }

        #[test]
        fn antisymmetry_for_identical_gap_tables(
            (lah, lal, lah2, lal2) in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
            mu in 0.01f64..0.99,
        ) {
            let from = OutcomeDistribution::new(lah, lal).unwrap();
            let to = OutcomeDistribution::new(lah2, lal2).unwrap();
            // Same per-state gaps, opposite types.
            let h = UtilityFunction::new(AgentType::TypeH, 0, 2, 3, 0).unwrap();
            let l = UtilityFunction::new(AgentType::TypeL, 2, 0, 0, 3).unwrap();
            let sum = utility_difference(&h, &from, &to, mu)
                + utility_difference(&l, &from, &to, mu);
            prop_assert!(sum.abs() < 1e-12);
        }
    }

    #[test]
    fn aggressive_minority_cases() {
        let sm = table1();
        let opt = optimal_strategy(&sm);
        // alpha = 0.8: both 0.8 * 0.6 = 0.48 <= 1/2; tie broken to always-A.
        let a = best_aggressive_minority(&opt, &sm, 0.8);
        assert_eq!(a.flippability, Flippability::Both);
        assert_eq!(a.strategy, VotingStrategy::always_a());
        // alpha = 0.9: 0.54 > 1/2 in both states.
        let a = best_aggressive_minority(&opt, &sm, 0.9);
        assert_eq!(a.flippability, Flippability::Unflippable);
        // Neutral majority: every deterministic vote flips a state.
        let a = best_aggressive_minority(&VotingStrategy::neutral(), &sm, 0.8);
        assert_eq!(a.flippability, Flippability::Both);
    }

    #[test]
    fn no_win_win_examples() {
        let (from, to) = example4_outcomes();
        assert!(!no_win_win_check(&from, &to, &type_h_table(), &type_l_table(), 0.5, 0.1));
        assert!(no_win_win_check(&from, &from, &type_h_table(), &type_l_table(), 0.5, 0.1));
    }

    fn instance(alpha_h: f64, n: u64, b_unit: bool) -> Instance {
        let config = Configuration::new(table1(), 1.0 - alpha_h, alpha_h).unwrap();
        let (maj_u, min_u) = if b_unit {
            (
                UtilityFunction::unit(AgentType::TypeH),
                UtilityFunction::unit(AgentType::TypeL),
            )
        } else {
            (type_h_table(), type_l_table())
        };
        Instance::homogeneous(config, n, maj_u, min_u).unwrap()
    }

    #[test]
    fn strong_majority_profile_is_secure() {
        // alpha = 0.9 > 5/6; optimal majority with neutral minority forms an
        // epsilon-equilibrium at the computed guarantee level.
        let inst = instance(0.9, 21, false);
        let profile = SymmetricProfile::new(
            VotingStrategy::neutral(),
            optimal_strategy(&table1()),
        );
        let eps = secure_profile_epsilon(0.9, 0.6, inst.utility_bound(), 21);
        let verdict = verify_epsilon_strong_bne(&inst, &profile, eps, 0.25);
        assert!(verdict.is_epsilon_equilibrium, "witness: {:?}", verdict.witness);
    }

    #[test]
    fn weak_majority_high_imd_profile_has_minority_witness() {
        // alpha = 0.8 < 5/6: if the profile nearly guarantees the IMD, the
        // minority coalition can deterministically flip a state and gain.
        let inst = instance(0.8, 101, true);
        let profile = SymmetricProfile::new(
            optimal_strategy(&table1()).mirrored(),
            optimal_strategy(&table1()),
        );
        // Actually make the IMD near-certain: minority cooperating with the
        // informative vote.
        let coop = SymmetricProfile::new(
            VotingStrategy::informative(),
            VotingStrategy::informative(),
        );
        let _ = profile;
        let eps = nonexistence_epsilon(0.8, 0.6, 0.5, 1, 101).max(0.0);
        let verdict = verify_epsilon_strong_bne(&inst, &coop, eps, 0.5);
        assert!(!verdict.is_epsilon_equilibrium);
        let w = verdict.witness.unwrap();
        assert_eq!(w.coalition, Coalition::AllMinority);
        assert!(w.max_gain > eps);
    }

    #[test]
    fn failing_imd_profile_has_majority_witness() {
        // Majority plays against its own interest (always the IMD's
        // opponent in expectation): the majority coalition deviation to an
        // informative-ish grid strategy is profitable.
        let inst = instance(0.9, 1001, true);
        let bad = SymmetricProfile::new(
            VotingStrategy::neutral(),
            VotingStrategy::always_r(),
        );
        let eps = counter_deviation_epsilon(0.9, 0.6, 1, 1001);
        let verdict = verify_epsilon_strong_bne(&inst, &bad, eps, 0.5);
        assert!(!verdict.is_epsilon_equilibrium);
        let w = verdict.witness.unwrap();
        assert!(matches!(w.coalition, Coalition::AllMinority | Coalition::AllMajority));
        assert!(w.max_gain > eps);
    }

    #[test]
    fn verifier_is_deterministic() {
        let inst = instance(0.8, 31, true);
        let profile = SymmetricProfile::new(
            VotingStrategy::informative(),
            VotingStrategy::informative(),
        );
        let v1 = verify_epsilon_strong_bne(&inst, &profile, 0.01, 0.25);
        let v2 = verify_epsilon_strong_bne(&inst, &profile, 0.01, 0.25);
        assert_eq!(v1, v2);
    }

    #[test]
    fn epsilon_constants_match_closed_forms() {
        let c6: f64 = (0.9 * 0.6 - 0.5) / 3.0;
        assert!(
            (secure_profile_epsilon(0.9, 0.6, 5, 101)
                - 50.0 * (-2.0 * c6 * c6 * 90.0).exp())
            .abs()
                < 1e-12
        );
        let c7: f64 = 0.5 * (2.0 * 0.8 - 1.0) * 0.1;
        assert!(
            (counter_deviation_epsilon(0.8, 0.6, 3, 1001)
                - 3.0 * (-2.0 * c7 * c7 * 1001.0).exp())
            .abs()
                < 1e-12
        );
        let c8 = 0.5 * (2.0 * 0.8 - 1.0) * 0.02f64;
        assert!(
            (nonexistence_epsilon(0.8, 0.6, 0.5, 1, 1001)
                - (0.125 - 2.0 * (-2.0 * c8 * c8 * 1001.0).exp()))
            .abs()
                < 1e-12
        );
        // The nonexistence margin can be negative at small n; callers must
        // treat that as a vacuous claim.
        assert!(nonexistence_epsilon(0.8, 0.6, 0.5, 5, 1001) < 0.0);
    }

    #[test]
    fn informed_majority_decision_consistency() {
        // Sanity link between the outcome wrapper and the decision helper.
        let config = Configuration::new(table1(), 0.1, 0.9).unwrap();
        assert_eq!(
            crate::model::informed_majority_decision(&config, WorldState::H),
            Alternative::A
        );
    }
}
