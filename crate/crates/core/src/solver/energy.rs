use crate::{Error, Result};

/// Shape of the energy density `e(r)`, where `r = |grad u|^2`.
#[derive(Debug, Clone, Copy)]
pub enum EnergyKind {
    /// `e(r) = r`
    Linear,
    /// `e(r) = r^(p+1) / (p+1)`, so `e'(r) = r^p`
    Power(f64),
    /// `e(r) = log(1 + r)`
    Log,
    Custom {
        e: fn(f64) -> f64,
        e_prime: fn(f64) -> f64,
    },
}

/// Energy density `scale * e(r)`; `e'` sets the nonlinear diffusivity.
#[derive(Debug, Clone, Copy)]
pub struct EnergyDensity {
    pub kind: EnergyKind,
    pub scale: f64,
}

impl EnergyDensity {
    pub fn linear() -> Self {
        Self { kind: EnergyKind::Linear, scale: 1.0 }
    }

    pub fn power(p: f64) -> Self {
        Self { kind: EnergyKind::Power(p), scale: 1.0 }
    }

    pub fn log() -> Self {
        Self { kind: EnergyKind::Log, scale: 1.0 }
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, EnergyKind::Linear)
    }

    pub fn e(&self, r: f64) -> f64 {
        self.scale
            * match self.kind {
                EnergyKind::Linear => r,
                EnergyKind::Power(p) => r.powf(p + 1.0) / (p + 1.0),
                EnergyKind::Log => r.ln_1p(),
                EnergyKind::Custom { e, .. } => e(r),
            }
    }

    pub fn e_prime(&self, r: f64) -> f64 {
        self.scale
            * match self.kind {
                EnergyKind::Linear => 1.0,
                EnergyKind::Power(p) => r.powf(p),
                EnergyKind::Log => 1.0 / (1.0 + r),
                EnergyKind::Custom { e_prime, .. } => e_prime(r),
            }
    }

    /// `e'(r)`, rejecting negative or non-finite values. `e'(0) = 0` is
    /// allowed (degenerate diffusion of the power law).
    pub fn diffusivity(&self, r: f64) -> Result<f64> {
        let v = self.e_prime(r);
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::NonparabolicEnergy { r, value: v })
        }
    }

    /// Checks `e' >= 0` on a logarithmic sample of `[0, r_max]`.
    pub fn check_parabolic(&self, r_max: f64) -> Result<()> {
        self.diffusivity(0.0)?;
        let mut r = 1e-8;
        while r <= r_max {
            self.diffusivity(r)?;
            r *= 2.0;
        }
        self.diffusivity(r_max).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_and_derivatives() {
        for e in [EnergyDensity::linear(), EnergyDensity::power(1.0), EnergyDensity::power(2.5), EnergyDensity::log()] {
            for r in [0.1, 0.7, 2.0] {
                let h = 1e-6;
                let fd = (e.e(r + h) - e.e(r - h)) / (2.0 * h);
                assert!((fd - e.e_prime(r)).abs() < 1e-8);
            }
            e.check_parabolic(100.0).unwrap();
        }
        assert_eq!(EnergyDensity::power(1.0).e_prime(0.0), 0.0);
        assert_eq!(EnergyDensity::linear().scaled(3.0).e_prime(5.0), 3.0);
    }

    #[test]
    fn negative_diffusivity_is_rejected() {
        let bad = EnergyDensity { kind: EnergyKind::Custom { e: |r| -r, e_prime: |_| -1.0 }, scale: 1.0 };
        assert!(matches!(bad.check_parabolic(1.0), Err(Error::NonparabolicEnergy { .. })));
    }
}
