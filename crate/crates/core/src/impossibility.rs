//! Indistinguishability experiments: the deviation construction whose two
//! environments produce report-count distributions with matching moments,
//! exact TVD decay measurements, analytic approximation bounds, and the
//! revelation-style wrapper for simulated equilibrium strategies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discrete::{binomial, convolve, tvd, CountDistribution};
use crate::error::{Error, Result};
use crate::model::{majority_count, AgentType, Signal, UtilityFunction, WorldState};

/// Parameters of the two-environment deviation construction.
///
/// The signal model is pinned to the symmetric premise `P_h^H = 1/2 +
/// delta/2`, `P_h^L = 1/2 - delta/2`; the minority deviators report h with
/// probability `q` in one environment and `1 - q` in the other, where `q`
/// is chosen so the expected report counts coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationExperiment {
    alpha: f64,
    delta: f64,
    n: u64,
    q: f64,
}

impl DeviationExperiment {
    pub fn new(alpha: f64, delta: f64, n: u64) -> Result<Self> {
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must lie in (1/2, 1)"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} must lie in (0, 1)"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let maj = majority_count(alpha, n);
        let min = n - maj;
        if min == 0 {
            return Err(Error::Construction(
                "the construction needs at least one minority agent".into(),
            ));
        }
        let q = (1.0 - delta * maj as f64 / min as f64) / 2.0;
        if !(0.0..=0.5 + 1e-12).contains(&q) {
            return Err(Error::Construction(format!(
                "q = {q} falls outside [0, 1/2]; alpha must not exceed 1/(delta + 1)"
            )));
        }
        Ok(DeviationExperiment {
            alpha,
            delta,
            n,
            q: q.min(0.5),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The minority's h-report probability in the first environment.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn majority_count(&self) -> u64 {
        majority_count(self.alpha, self.n)
    }

    pub fn minority_count(&self) -> u64 {
        self.n - self.majority_count()
    }
}

/// The h-report count distributions of the two environments:
/// `C1 = Bin(maj, 1/2 + delta/2) + Bin(min, q)` and
/// `C2 = Bin(maj, 1/2 - delta/2) + Bin(min, 1 - q)`.
pub fn counting_distributions(exp: &DeviationExperiment) -> (CountDistribution, CountDistribution) {
    let maj = exp.majority_count();
    let min = exp.minority_count();
    let x1 = binomial(maj, 0.5 + exp.delta / 2.0).expect("valid probability");
    let y1 = binomial(min, exp.q).expect("valid probability");
    let x2 = binomial(maj, 0.5 - exp.delta / 2.0).expect("valid probability");
    let y2 = binomial(min, 1.0 - exp.q).expect("valid probability");
    (convolve(&x1, &y1), convolve(&x2, &y2))
}

/// One row of the TVD decay table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvdRow {
    pub n: u64,
    pub exact_tvd: f64,
    /// Analytic bound assembled from the Gaussian-approximation pieces.
    pub bound: f64,
    pub tvd_sqrt_n: f64,
    /// Integer part of the per-component mean shift.
    pub mean_shift_integer: u64,
    /// Fractional part of the per-component mean shift, the only part that
    /// contributes to the shifted-Gaussian term.
    pub mean_shift_fraction: f64,
}

/// Analytic upper bound on tvd(C1, C2): each of the four binomials is
/// approximated by a discretized Gaussian at cost 7.6/sigma, and the two
/// resulting Gaussian pairs differ by a pure mean shift whose fractional
/// part costs r/(sigma * sqrt(2 pi)).
fn analytic_bound(exp: &DeviationExperiment) -> (f64, u64, f64) {
    let maj = exp.majority_count() as f64;
    let min = exp.minority_count() as f64;
    let var_x = maj * (0.25 - exp.delta * exp.delta / 4.0);
    let var_y = min * exp.q * (1.0 - exp.q);
    let shift = maj * exp.delta; // equals min * (1 - 2q) by construction
    let k = shift.floor();
    let r = shift - k;
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    let mut bound = 2.0 * 7.6 / var_x.sqrt();
    if var_y > 0.0 {
        bound += 2.0 * 7.6 / var_y.sqrt();
        bound += r / (var_y.sqrt() * sqrt_2pi);
    }
    bound += r / (var_x.sqrt() * sqrt_2pi);
    (bound, k as u64, r)
}

/// Exact TVD between the two environments across a grid of population
/// sizes, with the analytic bound alongside.
pub fn tvd_decay_experiment(alpha: f64, delta: f64, n_values: &[u64]) -> Result<Vec<TvdRow>> {
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let exp = DeviationExperiment::new(alpha, delta, n)?;
        let (c1, c2) = counting_distributions(&exp);
        let exact_tvd = tvd(&c1, &c2);
        let (bound, k, r) = analytic_bound(&exp);
        rows.push(TvdRow {
            n,
            exact_tvd,
            bound,
            tvd_sqrt_n: exact_tvd * (n as f64).sqrt(),
            mean_shift_integer: k,
            mean_shift_fraction: r,
        });
    }
    Ok(rows)
}

/// Output-probability gap of a mechanism between the two environments,
/// with the TVD that bounds it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub gap: f64,
    pub tvd: f64,
}

/// Computes `|Pr_{C1}[output = A] - Pr_{C2}[output = A]|` for a mechanism
/// given as a count -> Pr[A] map over the h-report count.
pub fn indistinguishability_gap(
    exp: &DeviationExperiment,
    mechanism: impl Fn(i64) -> f64,
) -> GapReport {
    let (c1, c2) = counting_distributions(exp);
    let pr = |d: &CountDistribution| {
        let mut total = 0.0;
        for (i, &p) in d.probs().iter().enumerate() {
            total += p * mechanism(d.offset() + i as i64);
        }
        total
    };
    GapReport {
        gap: (pr(&c1) - pr(&c2)).abs(),
        tvd: tvd(&c1, &c2),
    }
}

/// Result of auditing the two deviation profiles' utility effect on agents
/// preferring A in state H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationAudit {
    /// Probability the mechanism outputs the informed majority decision
    /// under all-truthful reporting (exact, over the signal draw).
    pub imd_truthful_probability: f64,
    /// Whether the audited mechanism is close enough to the ideal premise
    /// (IMD with probability 1) for the case analysis to apply.
    pub precondition_ok: bool,
    /// Utility gain from the first deviation profile in state H.
    pub gain_profile_a: f64,
    /// Utility gain from the second deviation profile in state L.
    pub gain_profile_b: f64,
    /// min(mu, 1 - mu)/4, the increment at least one profile must clear
    /// when the environments are close (TVD <= 1/4).
    pub epsilon: f64,
    pub tvd: f64,
    pub some_profile_clears: bool,
}

/// Audits the case analysis: against a mechanism that reliably outputs the
/// IMD on truthful reports, at least one of the two deviation profiles
/// raises the utility of agents preferring A in state H by at least
/// `min(mu, 1 - mu)/4` whenever the environments are within TVD 1/4.
pub fn deviation_utility_audit(
    exp: &DeviationExperiment,
    mechanism: impl Fn(i64) -> f64,
    type_h_utility: &UtilityFunction,
    mu: f64,
) -> DeviationAudit {
    let n = exp.n();
    // All-truthful h-report counts per state under the symmetric premise.
    let truthful_h = binomial(n, 0.5 + exp.delta / 2.0).expect("valid probability");
    let truthful_l = binomial(n, 0.5 - exp.delta / 2.0).expect("valid probability");
    let pr_a = |d: &CountDistribution| {
        let mut total = 0.0;
        for (i, &p) in d.probs().iter().enumerate() {
            total += p * mechanism(d.offset() + i as i64);
        }
        total
    };
    let imd_truthful_probability = mu * pr_a(&truthful_h) + (1.0 - mu) * (1.0 - pr_a(&truthful_l));
    let precondition_ok = imd_truthful_probability > 0.99;

    let (c1, c2) = counting_distributions(exp);
    let dv_h = type_h_utility.delta_v(WorldState::H) as f64;
    let dv_l = type_h_utility.delta_v(WorldState::L) as f64;
    // Profile A misleads the mechanism in environment H toward A; profile B
    // symmetric in L toward R. The ideal-mechanism premise makes the
    // truthful baseline yield zero utility from the disfavored alternative.
    let gain_profile_a = mu * pr_a(&c1) * dv_h;
    let gain_profile_b = (1.0 - mu) * (1.0 - pr_a(&c2)) * dv_l;
    let epsilon = 0.25 * mu.min(1.0 - mu);
    let dist = tvd(&c1, &c2);
    DeviationAudit {
        imd_truthful_probability,
        precondition_ok,
        gain_profile_a,
        gain_profile_b,
        epsilon,
        tvd: dist,
        some_profile_clears: gain_profile_a.max(gain_profile_b) >= epsilon,
    }
}

/// Wraps a mechanism into a direct one over declared (type, signal) pairs:
/// each agent's report is sampled from the given per-(type, signal) report
/// distribution, then the base mechanism runs on the sampled reports.
/// Deterministic given the seed.
pub fn revelation_wrapper<R, O>(
    base: impl Fn(&[R], &mut ChaCha8Rng) -> O,
    profile: impl Fn(AgentType, Signal, &mut ChaCha8Rng) -> R,
) -> impl Fn(&[(AgentType, Signal)], u64) -> O {
    move |declarations, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reports: Vec<R> = declarations
            .iter()
            .map(|&(t, s)| profile(t, s, &mut rng))
            .collect();
        base(&reports, &mut rng)
    }
}

/// Convenience: a seeded Bernoulli draw for stochastic report profiles.
pub fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}
