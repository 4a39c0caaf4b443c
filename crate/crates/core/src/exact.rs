//! Exact-rational brute-force oracle used to certify the floating-point
//! engine in tests. Everything here is big-integer arithmetic; it is slow
//! and only meant for small populations (n up to ~12 for full election
//! enumeration, n up to a few hundred for pmf checks).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Shorthand constructor for a rational from machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion for comparisons against the float engine.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational representable as f64")
}

/// Exact pmf of Bin(n, num/den) as a vector indexed by k, via big-integer
/// binomial coefficients.
pub fn binomial_rational(n: u64, num: u64, den: u64) -> Vec<BigRational> {
    let p = BigRational::new(BigInt::from(num), BigInt::from(den));
    binomial_rational_p(n, &p)
}

/// Exact pmf of Bin(n, p) for an arbitrary rational p in [0, 1].
pub fn binomial_rational_p(n: u64, p: &BigRational) -> Vec<BigRational> {
    let q = BigRational::one() - p;
    let mut coeff = BigInt::one();
    let mut out = Vec::with_capacity(n as usize + 1);
    // p^k and q^(n-k) built incrementally.
    let mut p_pow = BigRational::one();
    let mut q_pows = vec![BigRational::one(); n as usize + 1];
    for i in (0..n as usize).rev() {
        q_pows[i] = q_pows[i + 1].clone() * q.clone();
    }
    for k in 0..=n {
        let term = BigRational::from(coeff.clone()) * p_pow.clone() * q_pows[k as usize].clone();
        out.push(term);
        if k < n {
            coeff = coeff * BigInt::from(n - k) / BigInt::from(k + 1);
            p_pow *= p.clone();
        }
    }
    out
}

/// Convolution of two pmf vectors, both with support starting at 0.
pub fn convolve_rational(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, pa) in a.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            out[i + j] += pa.clone() * pb.clone();
        }
    }
    out
}

/// Pr[X > t] + (1/2) Pr[X = t] for a pmf with support 0..len-1, where the
/// threshold is t = t_num_twice / 2 (so half-integer thresholds are exact).
pub fn upper_tail_half(pmf: &[BigRational], t_num_twice: i64) -> BigRational {
    let half = ratio(1, 2);
    let mut tail = BigRational::zero();
    for (k, p) in pmf.iter().enumerate() {
        let twice_k = 2 * k as i64;
        if twice_k > t_num_twice {
            tail += p.clone();
        } else if twice_k == t_num_twice {
            tail += half.clone() * p.clone();
        }
    }
    tail
}

/// Exact probability that alternative A wins a majority vote with the
/// one-half tie rule, by exhaustive enumeration of all 2^n signal vectors
/// and an exact vote-count recursion per vector.
///
/// `p_l` is Pr[signal = l] in the realized state; `betas[i] = (beta_l,
/// beta_h)` is agent i's vote-A probability per signal.
pub fn exact_election_prob_a(p_l: &BigRational, betas: &[(BigRational, BigRational)]) -> BigRational {
    let n = betas.len();
    assert!(n <= 20, "exhaustive oracle limited to small n");
    let p_h = BigRational::one() - p_l;
    let mut total = BigRational::zero();
    for mask in 0u64..(1u64 << n) {
        // Signal vector: bit i set means agent i received h.
        let mut sig_prob = BigRational::one();
        // Vote-count pmf over A-votes, built agent by agent.
        let mut counts = vec![BigRational::one()];
        for (i, (beta_l, beta_h)) in betas.iter().enumerate() {
            let got_h = mask >> i & 1 == 1;
            sig_prob *= if got_h { p_h.clone() } else { p_l.clone() };
            let beta = if got_h { beta_h.clone() } else { beta_l.clone() };
            let not = BigRational::one() - beta.clone();
            let mut next = vec![BigRational::zero(); counts.len() + 1];
            for (k, c) in counts.iter().enumerate() {
                next[k] += c.clone() * not.clone();
                next[k + 1] += c.clone() * beta.clone();
            }
            counts = next;
        }
        total += sig_prob * upper_tail_half(&counts, n as i64);
    }
    total
}
