//! Physical constants and nanodiamond parameters.
//!
//! All Hamiltonians in this crate are expressed as H/ħ in angular-frequency
//! units (rad/s). That keeps matrix entries in the 1e9–1e12 range, far from
//! floating-point extremes; conversion helpers to GHz and kelvin live here.
//!
//! The constants are plain `f64`: raw SI inputs like the inertia moments
//! (~5e-44 kg·m²) do not survive narrower formats, so the generic scalar
//! enters only at the assembly boundary, where everything is a rate in
//! rad/s.

use crate::Real;

/// Physical constants and inertia moments defining the Hamiltonian scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Zero-field splitting D of the NV⁻ ground-state triplet, rad/s.
    pub d_zfs: f64,
    /// NV⁻ electron g-factor, dimensionless.
    pub g: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Principal inertia moment I1 = I2, kg·m².
    pub i1: f64,
    /// Principal inertia moment I3 (symmetry axis), kg·m².
    pub i3: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub kb: f64,
}

impl Default for SystemParams {
    /// Parameters of a 1 nm tetrahedral nanodiamond carrying one NV⁻ center:
    /// D = 2π·2.87 GHz, g = 2.0028, I1 = 5.06e-44 kg·m², I3 = 3.11e-44 kg·m²,
    /// with CODATA values for μB, ħ and kB.
    fn default() -> Self {
        Self {
            d_zfs: 2.0 * std::f64::consts::PI * 2.87e9,
            g: 2.0028,
            mu_b: 9.274_010_078_3e-24,
            i1: 5.06e-44,
            i3: 3.11e-44,
            hbar: 1.054_571_817e-34,
            kb: 1.380_649e-23,
        }
    }
}

impl SystemParams {
    /// Rotational angular-frequency scale ħ/(2 I1), rad/s (≈ 1.04e9 for the
    /// default parameters).
    pub fn rotational_scale(&self) -> f64 {
        self.hbar / (2.0 * self.i1)
    }

    /// (ħ/2)(1/I3 − 1/I1), the symmetric-top anisotropy rate in rad/s.
    pub fn anisotropy_rate(&self) -> f64 {
        0.5 * (self.hbar / self.i3 - self.hbar / self.i1)
    }

    /// Zeeman rate g·μB/ħ in rad/(s·T) (≈ 1.76e11 for the defaults).
    pub fn larmor_rate(&self) -> f64 {
        self.g * self.mu_b / self.hbar
    }

    /// Field where the spin levels m = 0 and m = −1 cross: ħD/(gμB),
    /// ≈ 0.1024 T for the defaults.
    pub fn crossing_field(&self) -> f64 {
        self.d_zfs / self.larmor_rate()
    }

    /// kB·T/ħ in rad/s; Gibbs weights are exp(−Δω / thermal_rate).
    pub fn thermal_rate(&self, temperature: f64) -> f64 {
        self.kb * temperature / self.hbar
    }

    /// Angular frequency expressed as a temperature, ħω/kB in kelvin.
    pub fn omega_as_kelvin(&self, omega: f64) -> f64 {
        self.hbar * omega / self.kb
    }
}

/// Angular frequency (rad/s) to ordinary frequency in GHz: ω/(2π·10⁹).
pub fn to_ghz<T: Real>(omega: T) -> T {
    omega / (T::two_pi() * T::from_f64(1e9).unwrap())
}
