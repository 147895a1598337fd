use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use super::NORM_TOLERANCE;
use crate::error::{structural, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Registers {
    One,
    Two,
}

/// One of the two `G`-valued registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    First,
    Second,
}

/// Unit-norm amplitudes over `G` (dimension `n`) or `G × G` (dimension `n²`).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    registers: Registers,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|index⟩` in one register.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::Range { index, size: n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n,
            registers: Registers::One,
            amps,
        })
    }

    /// `|x⟩|y⟩`.
    pub fn basis_pair(n: usize, x: usize, y: usize) -> Result<Self> {
        for index in [x, y] {
            if index >= n {
                return Err(Error::Range { index, size: n });
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps[x * n + y] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n,
            registers: Registers::Two,
            amps,
        })
    }

    /// Wraps amplitudes, rejecting a wrong dimension or a non-unit norm.
    pub fn from_amplitudes(n: usize, registers: Registers, amps: Vec<Complex64>) -> Result<Self> {
        let state = StateVector::from_raw(n, registers, amps)?;
        state.check_norm()?;
        Ok(state)
    }

    /// Wraps amplitudes and rescales them to unit norm.
    pub fn normalized(n: usize, registers: Registers, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(structural("cannot normalize a zero vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_raw(n, registers, amps)
    }

    pub(crate) fn from_raw(n: usize, registers: Registers, amps: Vec<Complex64>) -> Result<Self> {
        let dim = match registers {
            Registers::One => n,
            Registers::Two => n * n,
        };
        if amps.len() != dim {
            return Err(structural(format!(
                "expected {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        Ok(StateVector {
            n,
            registers,
            amps,
        })
    }

    /// `a ⊗ b` for two one-register states.
    pub fn product(a: &StateVector, b: &StateVector) -> Result<Self> {
        if a.registers != Registers::One || b.registers != Registers::One || a.n != b.n {
            return Err(structural("product needs two one-register states over the same group"));
        }
        let amps = a
            .amps
            .iter()
            .flat_map(|&x| b.amps.iter().map(move |&y| x * y))
            .collect();
        StateVector::from_amplitudes(a.n, Registers::Two, amps)
    }

    /// Haar-like random state from independent Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, registers: Registers, rng: &mut R) -> Self {
        let dim = match registers {
            Registers::One => n,
            Registers::Two => n * n,
        };
        let amps = (0..dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        StateVector::normalized(n, registers, amps).expect("nonzero with probability one")
    }

    /// Group order `n` of each register.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn registers(&self) -> Registers {
        self.registers
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_norm(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() <= NORM_TOLERANCE {
            Ok(())
        } else {
            Err(Error::Integrity(format!("state norm² is {norm}, expected 1")))
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude difference.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        max_distance(&self.amps, &other.amps)
    }

    pub fn scaled(&self, factor: Complex64) -> Vec<Complex64> {
        self.amps.iter().map(|a| a * factor).collect()
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// `[[re, im], …]`.
    pub fn to_json(&self) -> Value {
        complex_json(&self.amps)
    }
}

pub(crate) fn max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, crate::par::nan_max)
}

pub(crate) fn complex_json(values: &[Complex64]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|c| serde_json::json!([c.re, c.im]))
            .collect(),
    )
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn basis_and_product() {
        let a = StateVector::basis(3, 2).unwrap();
        let b = StateVector::basis(3, 1).unwrap();
        let ab = StateVector::product(&a, &b).unwrap();
        assert_eq!(ab, StateVector::basis_pair(3, 2, 1).unwrap());
        assert_eq!(ab.amplitude(7), Complex64::new(1.0, 0.0));
        assert!(StateVector::basis(3, 3).is_err());
    }

    #[test]
    fn norm_is_enforced() {
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            StateVector::from_amplitudes(2, Registers::One, amps.clone()),
            Err(Error::Integrity(_))
        ));
        let s = StateVector::normalized(2, Registers::One, amps).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let r = StateVector::random(4, Registers::Two, &mut rng);
        assert_eq!(r.dim(), 16);
        assert!(r.check_norm().is_ok());
    }
}
