//! World model, agents, utilities, and strategy representations shared by
//! every analytical module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the type-fraction sum invariant.
pub const FRACTION_TOL: f64 = 1e-12;

/// The two possible world states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WorldState {
    L,
    H,
}

impl WorldState {
    pub fn other(self) -> WorldState {
        match self {
            WorldState::L => WorldState::H,
            WorldState::H => WorldState::L,
        }
    }
}

/// Private signals, correlated with the world state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    #[serde(rename = "l")]
    L,
    #[serde(rename = "h")]
    H,
}

impl Signal {
    pub fn other(self) -> Signal {
        match self {
            Signal::L => Signal::H,
            Signal::H => Signal::L,
        }
    }
}

/// The two alternatives put to the vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alternative {
    A,
    R,
}

impl Alternative {
    pub fn other(self) -> Alternative {
        match self {
            Alternative::A => Alternative::R,
            Alternative::R => Alternative::A,
        }
    }
}

/// Agent types with antagonistic contingent preferences.
///
/// A `TypeL` agent prefers `A` in state `L` and `R` in state `H`; a `TypeH`
/// agent has the opposite preference in each state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentType {
    #[serde(rename = "L")]
    TypeL,
    #[serde(rename = "H")]
    TypeH,
}

impl AgentType {
    pub fn other(self) -> AgentType {
        match self {
            AgentType::TypeL => AgentType::TypeH,
            AgentType::TypeH => AgentType::TypeL,
        }
    }

    /// The alternative this type prefers once the state is revealed.
    pub fn preferred_alternative(self, state: WorldState) -> Alternative {
        match (self, state) {
            (AgentType::TypeL, WorldState::L) => Alternative::A,
            (AgentType::TypeL, WorldState::H) => Alternative::R,
            (AgentType::TypeH, WorldState::L) => Alternative::R,
            (AgentType::TypeH, WorldState::H) => Alternative::A,
        }
    }
}

/// Prior over states plus the conditional signal probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    mu: f64,
    p_h_given_h: f64,
    p_h_given_l: f64,
}

impl SignalModel {
    /// Builds a signal model. Requires every probability strictly inside
    /// (0, 1) and positively correlated signals (`delta > 0`).
    pub fn new(mu: f64, p_h_given_h: f64, p_h_given_l: f64) -> Result<Self> {
        for (name, v) in [
            ("mu", mu),
            ("p_h_given_H", p_h_given_h),
            ("p_h_given_L", p_h_given_l),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must lie strictly inside (0, 1)"
                )));
            }
        }
        if p_h_given_h <= p_h_given_l {
            return Err(Error::InvalidParameter(format!(
                "signals must be positively correlated: p_h_given_H = {p_h_given_h} \
                 <= p_h_given_L = {p_h_given_l}"
            )));
        }
        Ok(SignalModel {
            mu,
            p_h_given_h,
            p_h_given_l,
        })
    }

    /// Prior probability of state `H`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn p_h_given_h(&self) -> f64 {
        self.p_h_given_h
    }

    pub fn p_h_given_l(&self) -> f64 {
        self.p_h_given_l
    }

    pub fn p_l_given_h(&self) -> f64 {
        1.0 - self.p_h_given_h
    }

    pub fn p_l_given_l(&self) -> f64 {
        1.0 - self.p_h_given_l
    }

    /// Probability of receiving `signal` in `state`.
    pub fn prob(&self, signal: Signal, state: WorldState) -> f64 {
        match (signal, state) {
            (Signal::H, WorldState::H) => self.p_h_given_h(),
            (Signal::H, WorldState::L) => self.p_h_given_l(),
            (Signal::L, WorldState::H) => self.p_l_given_h(),
            (Signal::L, WorldState::L) => self.p_l_given_l(),
        }
    }

    /// The cross-state signal-frequency gap, positive by construction.
    pub fn delta(&self) -> f64 {
        self.p_h_given_h - self.p_h_given_l
    }

    /// The model with states, signals, and alternatives relabelled so that
    /// the roles of the two types swap. Used to reuse majority-type formulas
    /// when the majority is `TypeL`.
    pub fn mirrored(&self) -> SignalModel {
        SignalModel {
            mu: 1.0 - self.mu,
            p_h_given_h: self.p_l_given_l(),
            p_h_given_l: self.p_l_given_h(),
        }
    }
}

/// Type fractions on top of a signal model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    signal_model: SignalModel,
    alpha_l: f64,
    alpha_h: f64,
}

impl Configuration {
    pub fn new(signal_model: SignalModel, alpha_l: f64, alpha_h: f64) -> Result<Self> {
        if (alpha_l + alpha_h - 1.0).abs() > FRACTION_TOL {
            return Err(Error::InvalidParameter(format!(
                "type fractions must sum to 1, got {alpha_l} + {alpha_h}"
            )));
        }
        if alpha_l.max(alpha_h) <= 0.5 {
            return Err(Error::InvalidParameter(
                "a clear majority requires max(alpha_L, alpha_H) > 1/2".into(),
            ));
        }
        Ok(Configuration {
            signal_model,
            alpha_l,
            alpha_h,
        })
    }

    pub fn signal_model(&self) -> &SignalModel {
        &self.signal_model
    }

    pub fn alpha_l(&self) -> f64 {
        self.alpha_l
    }

    pub fn alpha_h(&self) -> f64 {
        self.alpha_h
    }

    /// The majority proportion, strictly above one half.
    pub fn alpha(&self) -> f64 {
        self.alpha_l.max(self.alpha_h)
    }

    pub fn majority_type(&self) -> AgentType {
        if self.alpha_h >= self.alpha_l {
            AgentType::TypeH
        } else {
            AgentType::TypeL
        }
    }

    pub fn fraction_of(&self, t: AgentType) -> f64 {
        match t {
            AgentType::TypeL => self.alpha_l,
            AgentType::TypeH => self.alpha_h,
        }
    }
}

/// The decision favored by the majority type if the world state were known.
pub fn informed_majority_decision(config: &Configuration, state: WorldState) -> Alternative {
    config.majority_type().preferred_alternative(state)
}

/// Bounded integer utilities for a single agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UtilityFunction {
    owner_type: AgentType,
    v_l_a: u32,
    v_l_r: u32,
    v_h_a: u32,
    v_h_r: u32,
}

impl UtilityFunction {
    pub fn new(owner_type: AgentType, v_l_a: u32, v_l_r: u32, v_h_a: u32, v_h_r: u32) -> Result<Self> {
        let u = UtilityFunction {
            owner_type,
            v_l_a,
            v_l_r,
            v_h_a,
            v_h_r,
        };
        if !u.respects_type() {
            return Err(Error::InvalidParameter(format!(
                "utility table {u:?} contradicts the strict preference of {owner_type:?}"
            )));
        }
        Ok(u)
    }

    fn respects_type(&self) -> bool {
        match self.owner_type {
            AgentType::TypeL => self.v_l_a > self.v_l_r && self.v_h_r > self.v_h_a,
            AgentType::TypeH => self.v_l_r > self.v_l_a && self.v_h_a > self.v_h_r,
        }
    }

    pub fn owner_type(&self) -> AgentType {
        self.owner_type
    }

    pub fn value(&self, state: WorldState, alt: Alternative) -> u32 {
        match (state, alt) {
            (WorldState::L, Alternative::A) => self.v_l_a,
            (WorldState::L, Alternative::R) => self.v_l_r,
            (WorldState::H, Alternative::A) => self.v_h_a,
            (WorldState::H, Alternative::R) => self.v_h_r,
        }
    }

    /// |v(state, A) - v(state, R)|, at least 1 by the strict-preference rule.
    pub fn delta_v(&self, state: WorldState) -> u32 {
        self.value(state, Alternative::A)
            .abs_diff(self.value(state, Alternative::R))
    }

    /// Largest entry of the table.
    pub fn bound(&self) -> u32 {
        self.v_l_a.max(self.v_l_r).max(self.v_h_a).max(self.v_h_r)
    }

    /// Unit-payoff table (every payoff in {0, 1}) for the given type.
    pub fn unit(owner_type: AgentType) -> UtilityFunction {
        match owner_type {
            AgentType::TypeL => UtilityFunction::new(owner_type, 1, 0, 0, 1).unwrap(),
            AgentType::TypeH => UtilityFunction::new(owner_type, 0, 1, 1, 0).unwrap(),
        }
    }
}

/// Number of majority-type agents in a population of `n` with majority
/// fraction `alpha`, i.e. floor(alpha * n) guarded against float roundoff.
pub fn majority_count(alpha: f64, n: u64) -> u64 {
    (alpha * n as f64 + 1e-9).floor() as u64
}

/// ceil((1 - alpha) n); algebraically always equals `n - majority_count`.
pub fn minority_count(alpha: f64, n: u64) -> u64 {
    n - majority_count(alpha, n)
}

/// A concrete population: a configuration, a size, and per-agent utilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    configuration: Configuration,
    n: u64,
    utilities: Vec<UtilityFunction>,
}

impl Instance {
    pub fn new(configuration: Configuration, n: u64, utilities: Vec<UtilityFunction>) -> Result<Self> {
        let instance = Instance {
            configuration,
            n,
            utilities,
        };
        let report = validate_instance(&instance);
        if report.is_valid() {
            Ok(instance)
        } else {
            Err(Error::InvalidParameter(report.violations.join("; ")))
        }
    }

    /// Builds an instance with uniform per-type utility tables.
    pub fn homogeneous(
        configuration: Configuration,
        n: u64,
        majority_utility: UtilityFunction,
        minority_utility: UtilityFunction,
    ) -> Result<Self> {
        let maj = majority_count(configuration.alpha(), n);
        let maj_type = configuration.majority_type();
        let mut utilities = Vec::with_capacity(n as usize);
        for i in 0..n {
            if i < maj {
                utilities.push(majority_utility);
            } else {
                utilities.push(minority_utility);
            }
        }
        debug_assert_eq!(majority_utility.owner_type(), maj_type);
        Instance::new(configuration, n, utilities)
    }

    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn utilities(&self) -> &[UtilityFunction] {
        &self.utilities
    }

    pub fn majority_count(&self) -> u64 {
        majority_count(self.configuration.alpha(), self.n)
    }

    pub fn minority_count(&self) -> u64 {
        self.n - self.majority_count()
    }

    /// Largest utility entry across all agents.
    pub fn utility_bound(&self) -> u32 {
        self.utilities.iter().map(|u| u.bound()).max().unwrap_or(0)
    }
}

/// Outcome of [`validate_instance`]: the list of violated invariants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of an instance and reports failures.
pub fn validate_instance(instance: &Instance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let config = &instance.configuration;

    if (config.alpha_l + config.alpha_h - 1.0).abs() > FRACTION_TOL {
        report.violations.push(format!(
            "type fractions must sum to 1: alpha_L + alpha_H = {}",
            config.alpha_l + config.alpha_h
        ));
    }
    if instance.n == 0 {
        report.violations.push("agent count must be positive".into());
    }
    if instance.utilities.len() as u64 != instance.n {
        report.violations.push(format!(
            "expected {} utility tables, found {}",
            instance.n,
            instance.utilities.len()
        ));
    }
    for (i, u) in instance.utilities.iter().enumerate() {
        if !u.respects_type() {
            report.violations.push(format!(
                "agent {i}: utility table violates the strict preference of {:?}",
                u.owner_type()
            ));
        }
    }
    let maj_type = config.majority_type();
    let maj_in_pop = instance
        .utilities
        .iter()
        .filter(|u| u.owner_type() == maj_type)
        .count() as u64;
    let expected = majority_count(config.alpha(), instance.n);
    if instance.utilities.len() as u64 == instance.n && maj_in_pop != expected {
        report.violations.push(format!(
            "majority-type count must be floor(alpha * n) = {expected}, found {maj_in_pop}"
        ));
    }
    report
}

/// A per-signal randomized vote, parameterized as deviations from 1/2.
///
/// `beta_l = 1/2 - delta_l` and `beta_h = 1/2 + delta_h` are the vote-A
/// probabilities upon signals `l` and `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VotingStrategy {
    delta_l: f64,
    delta_h: f64,
}

impl VotingStrategy {
    pub fn new(delta_l: f64, delta_h: f64) -> Result<Self> {
        for (name, v) in [("delta_l", delta_l), ("delta_h", delta_h)] {
            if !(-0.5..=0.5).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must lie in [-1/2, 1/2]"
                )));
            }
        }
        Ok(VotingStrategy { delta_l, delta_h })
    }

    pub fn from_betas(beta_l: f64, beta_h: f64) -> Result<Self> {
        VotingStrategy::new(0.5 - beta_l, beta_h - 0.5)
    }

    /// Votes for the alternative matching the signal.
    pub fn informative() -> VotingStrategy {
        VotingStrategy::new(0.5, 0.5).unwrap()
    }

    /// Votes uniformly at random regardless of the signal.
    pub fn neutral() -> VotingStrategy {
        VotingStrategy::new(0.0, 0.0).unwrap()
    }

    /// Deterministically votes A on every signal.
    pub fn always_a() -> VotingStrategy {
        VotingStrategy::new(-0.5, 0.5).unwrap()
    }

    /// Deterministically votes R on every signal.
    pub fn always_r() -> VotingStrategy {
        VotingStrategy::new(0.5, -0.5).unwrap()
    }

    /// Votes A with probability `p` on every signal.
    pub fn uninformative(p: f64) -> Result<VotingStrategy> {
        VotingStrategy::from_betas(p, p)
    }

    pub fn delta_l(&self) -> f64 {
        self.delta_l
    }

    pub fn delta_h(&self) -> f64 {
        self.delta_h
    }

    pub fn beta_l(&self) -> f64 {
        0.5 - self.delta_l
    }

    pub fn beta_h(&self) -> f64 {
        0.5 + self.delta_h
    }

    pub fn beta(&self, signal: Signal) -> f64 {
        match signal {
            Signal::L => self.beta_l(),
            Signal::H => self.beta_h(),
        }
    }

    /// The strategy with both deviations negated, i.e. the counter strategy
    /// that cancels this strategy's expected effect on the votes.
    pub fn negated(&self) -> VotingStrategy {
        VotingStrategy {
            delta_l: -self.delta_l,
            delta_h: -self.delta_h,
        }
    }

    /// Swaps the two deviations.
    pub fn swapped(&self) -> VotingStrategy {
        VotingStrategy {
            delta_l: self.delta_h,
            delta_h: self.delta_l,
        }
    }

    /// The same voting behavior read through the mirrored model's
    /// relabelling of states and signals: if this strategy is stated in
    /// mirrored coordinates, `mirrored()` states it in the original ones
    /// (an involution, so the converse holds too).
    pub fn mirrored(&self) -> VotingStrategy {
        VotingStrategy {
            delta_l: -self.delta_h,
            delta_h: -self.delta_l,
        }
    }
}

/// One voting strategy per agent type, applied symmetrically within a type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricProfile {
    #[serde(rename = "strategy_for_L")]
    pub strategy_for_l: VotingStrategy,
    #[serde(rename = "strategy_for_H")]
    pub strategy_for_h: VotingStrategy,
}

impl SymmetricProfile {
    pub fn new(strategy_for_l: VotingStrategy, strategy_for_h: VotingStrategy) -> Self {
        SymmetricProfile {
            strategy_for_l,
            strategy_for_h,
        }
    }

    pub fn strategy_for(&self, t: AgentType) -> VotingStrategy {
        match t {
            AgentType::TypeL => self.strategy_for_l,
            AgentType::TypeH => self.strategy_for_h,
        }
    }

    pub fn with_strategy_for(&self, t: AgentType, s: VotingStrategy) -> SymmetricProfile {
        let mut p = *self;
        match t {
            AgentType::TypeL => p.strategy_for_l = s,
            AgentType::TypeH => p.strategy_for_h = s,
        }
        p
    }
}

/// One utility table in the JSON file schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilityFileEntry {
    #[serde(rename = "type")]
    pub agent_type: AgentType,
    #[serde(rename = "vLA")]
    pub v_l_a: u32,
    #[serde(rename = "vLR")]
    pub v_l_r: u32,
    #[serde(rename = "vHA")]
    pub v_h_a: u32,
    #[serde(rename = "vHR")]
    pub v_h_r: u32,
}

/// Flat on-disk schema for configurations and instances. `n` and
/// `utilities` are optional so the same format serves config-only files;
/// when `n` is given without `utilities`, unit utility tables are assumed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub mu: f64,
    #[serde(rename = "p_h_given_H")]
    pub p_h_given_h: f64,
    #[serde(rename = "p_h_given_L")]
    pub p_h_given_l: f64,
    #[serde(rename = "alpha_L")]
    pub alpha_l: f64,
    #[serde(rename = "alpha_H")]
    pub alpha_h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<UtilityFileEntry>>,
}

impl InstanceFile {
    pub fn configuration(&self) -> Result<Configuration> {
        let sm = SignalModel::new(self.mu, self.p_h_given_h, self.p_h_given_l)?;
        Configuration::new(sm, self.alpha_l, self.alpha_h)
    }

    /// Builds the instance when `n` is present; config-only files yield an
    /// error naming the missing field.
    pub fn instance(&self) -> Result<Instance> {
        let config = self.configuration()?;
        let n = self.n.ok_or_else(|| {
            Error::InvalidParameter("field \"n\" is required to build an instance".into())
        })?;
        match &self.utilities {
            Some(entries) => {
                let utilities = entries
                    .iter()
                    .map(|e| UtilityFunction::new(e.agent_type, e.v_l_a, e.v_l_r, e.v_h_a, e.v_h_r))
                    .collect::<Result<Vec<_>>>()?;
                Instance::new(config, n, utilities)
            }
            None => {
                let maj = config.majority_type();
                Instance::homogeneous(
                    config,
                    n,
                    UtilityFunction::unit(maj),
                    UtilityFunction::unit(maj.other()),
                )
            }
        }
    }

    pub fn from_configuration(config: &Configuration) -> InstanceFile {
        let sm = config.signal_model();
        InstanceFile {
            mu: sm.mu(),
            p_h_given_h: sm.p_h_given_h(),
            p_h_given_l: sm.p_h_given_l(),
            alpha_l: config.alpha_l(),
            alpha_h: config.alpha_h(),
            n: None,
            utilities: None,
        }
    }

    pub fn from_instance(instance: &Instance) -> InstanceFile {
        let mut file = InstanceFile::from_configuration(instance.configuration());
        file.n = Some(instance.n());
        file.utilities = Some(
            instance
                .utilities()
                .iter()
                .map(|u| UtilityFileEntry {
                    agent_type: u.owner_type(),
                    v_l_a: u.value(WorldState::L, Alternative::A),
                    v_l_r: u.value(WorldState::L, Alternative::R),
                    v_h_a: u.value(WorldState::H, Alternative::A),
                    v_h_r: u.value(WorldState::H, Alternative::R),
                })
                .collect(),
        );
        file
    }
}
