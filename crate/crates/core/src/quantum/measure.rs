use rand::Rng;

use super::state::{Register, Registers, StateVector};
use crate::error::{structural, Result};

/// Probability that counts as a certain measurement outcome.
pub const DETERMINISTIC_THRESHOLD: f64 = 1.0 - 1e-9;

/// Outcome distribution of one register.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: usize) -> f64 {
        self.probs.get(outcome).copied().unwrap_or(0.0)
    }

    /// The outcome with probability at least `threshold`, if any.
    pub fn deterministic(&self, threshold: f64) -> Option<usize> {
        self.probs.iter().position(|&p| p >= threshold)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total: f64 = self.probs.iter().sum();
        let mut r = rng.gen::<f64>() * total;
        for (i, &p) in self.probs.iter().enumerate() {
            if r < p {
                return i;
            }
            r -= p;
        }
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

/// Marginal distribution of one register of a two-register state.
pub fn measure_register(state: &StateVector, register: Register) -> Result<Distribution> {
    if state.registers() != Registers::Two {
        return Err(structural("measure_register needs a two-register state"));
    }
    state.check_norm()?;
    let n = state.n();
    let mut probs = vec![0.0; n];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let outcome = match register {
            Register::First => i / n,
            Register::Second => i % n,
        };
        probs[outcome] += a.norm_sqr();
    }
    Ok(Distribution { probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::quantum::Registers;
    use num_complex::Complex64;
    use rand::SeedableRng;

    #[test]
    fn product_state_is_deterministic() {
        let s = StateVector::basis_pair(5, 3, 2).unwrap();
        let d = measure_register(&s, Register::First).unwrap();
        assert_eq!(d.deterministic(DETERMINISTIC_THRESHOLD), Some(3));
        let d = measure_register(&s, Register::Second).unwrap();
        assert_eq!(d.deterministic(DETERMINISTIC_THRESHOLD), Some(2));
    }

    #[test]
    fn uniform_state_is_not() {
        let amps = vec![Complex64::new(0.5, 0.0); 4];
        let s = StateVector::from_amplitudes(2, Registers::Two, amps).unwrap();
        let d = measure_register(&s, Register::First).unwrap();
        assert!((d.probability(0) - 0.5).abs() < 1e-15 && (d.probability(1) - 0.5).abs() < 1e-15);
        assert_eq!(d.deterministic(DETERMINISTIC_THRESHOLD), None);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let ones = (0..10_000).filter(|_| d.sample(&mut rng) == 1).count();
        assert!((4_700..5_300).contains(&ones));
    }

    #[test]
    fn norm_violation_is_integrity_error() {
        let amps = vec![Complex64::new(0.6, 0.0); 4];
        let s = StateVector::from_raw(2, Registers::Two, amps).unwrap();
        assert!(matches!(measure_register(&s, Register::First), Err(Error::Integrity(_))));
        let one = StateVector::basis(2, 0).unwrap();
        assert!(measure_register(&one, Register::First).is_err());
    }
}
