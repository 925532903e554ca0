//! Thermal states, reduced density matrices, entanglement entropy,
//! negativity, and fidelity.
//!
//! The full Hilbert space factorizes as rotor ⊗ spin with the spin label
//! fastest (see [`crate::basis::BasisSet`]); every partial trace and the
//! partial transpose below rely on that layout, so they also accept bare
//! matrices whose dimension is a multiple of three.

use std::sync::Arc;

use num_complex::Complex;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::hamiltonian::{hermiticity_deviation, HERMITICITY_REL_TOL};
use crate::params::SystemParams;
use crate::spectra::{eigh, eigh_values, Spectrum};
use crate::{CMatrix, CVector, Real};

/// Absolute tolerance on |tr ρ − 1|, stated for f64 (epsilon-scaled for
/// other scalars).
pub const DENSITY_TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of ρ above −PSD_FLOOR are clamped to zero; anything below is
/// a positivity violation and raises an error. Stated for f64.
pub const PSD_FLOOR: f64 = 1e-12;
/// Gibbs weights below this (relative to the largest) are dropped.
const WEIGHT_CUTOFF: f64 = 1e-16;

/// Hermitian, unit-trace operator on the truncated Hilbert space or on the
/// 3-dimensional spin factor (`basis` = `None`).
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: Real> {
    mat: CMatrix<T>,
    basis: Option<Arc<BasisSet>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validate Hermiticity and unit trace. Positivity is checked wherever
    /// the spectrum of ρ is actually computed (entropy, fidelity).
    pub fn new(mat: CMatrix<T>, basis: Option<Arc<BasisSet>>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        if let Some(b) = &basis {
            if b.dim() != mat.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: b.dim(),
                    got: mat.nrows(),
                });
            }
        }
        let dev = hermiticity_deviation(&mat);
        if dev > crate::scaled_tol::<T>(HERMITICITY_REL_TOL) {
            // entries of a density matrix are bounded by 1, so an absolute
            // comparison against the Hermiticity tolerance is the right scale
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tolerance: HERMITICITY_REL_TOL,
            });
        }
        let trace_dev = trace_re(&mat) - T::one();
        if trace_dev.abs() > crate::scaled_tol::<T>(DENSITY_TRACE_TOL) {
            return Err(Error::NotUnitTrace(trace_dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { mat, basis })
    }

    /// Projector |v⟩⟨v| / ⟨v|v⟩ onto a pure state.
    pub fn pure(v: &CVector<T>, basis: Option<Arc<BasisSet>>) -> Result<Self> {
        let norm_sq = v.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
        if norm_sq <= T::zero() {
            return Err(Error::NotUnitTrace(-1.0));
        }
        let mat = (v * v.adjoint()).map(|z| z.unscale(norm_sq));
        Self::new(mat, basis)
    }

    /// The maximally mixed state 1/dim.
    pub fn maximally_mixed(dim: usize, basis: Option<Arc<BasisSet>>) -> Result<Self> {
        let w = T::one() / T::from_usize(dim).unwrap();
        Self::new(CMatrix::<T>::identity(dim, dim).map(|z| z.scale(w)), basis)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn basis(&self) -> Option<&Arc<BasisSet>> {
        self.basis.as_ref()
    }

    pub fn trace(&self) -> T {
        trace_re(&self.mat)
    }

    /// Ascending eigenvalues of ρ; errors if any falls below −[`PSD_FLOOR`].
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let vals = eigh_values(&self.mat);
        check_psd(&vals)?;
        Ok(vals)
    }
}

fn trace_re<T: Real>(mat: &CMatrix<T>) -> T {
    let mut t = T::zero();
    for i in 0..mat.nrows() {
        t += mat[(i, i)].re;
    }
    t
}

fn check_psd<T: Real>(vals: &[T]) -> Result<()> {
    if let Some(&lo) = vals.first() {
        if lo < -crate::scaled_tol::<T>(PSD_FLOOR) {
            return Err(Error::NotPositiveSemidefinite(
                lo.to_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    Ok(())
}

/// Gibbs state ρ = Σᵢ wᵢ |Ψᵢ⟩⟨Ψᵢ| with wᵢ ∝ exp(−ħ(ωᵢ−ω₀)/kB T) from an
/// already-solved spectrum. T = 0 is special-cased to the ground-state
/// projector (degenerate ground states are flagged by the spectrum; the
/// projector then depends on basis conventions).
pub fn thermal_state<T: Real>(
    spectrum: &Spectrum<T>,
    temperature: f64,
    params: &SystemParams,
) -> Result<DensityMatrix<T>> {
    if temperature < 0.0 {
        return Err(Error::NegativeTemperature(temperature));
    }
    let basis = spectrum.basis().cloned();
    if temperature == 0.0 {
        return DensityMatrix::pure(&spectrum.state(0), basis);
    }
    let rate = params.thermal_rate(temperature);
    let omega0 = spectrum.eigenvalue(0).to_f64().expect("finite eigenvalue");
    let mut weights = Vec::new();
    for (i, omega) in spectrum.eigenvalues().iter().enumerate() {
        let omega = omega.to_f64().expect("finite eigenvalue");
        let w = (-(omega - omega0) / rate).exp();
        if w >= WEIGHT_CUTOFF {
            weights.push((i, w));
        }
    }
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let n = spectrum.len();
    let mut scaled = CMatrix::<T>::zeros(n, weights.len());
    for (col, &(i, w)) in weights.iter().enumerate() {
        let root = T::from_f64((w / total).sqrt()).unwrap();
        for row in 0..n {
            scaled[(row, col)] = spectrum.eigenvectors()[(row, i)].scale(root);
        }
    }
    let mat = &scaled * scaled.adjoint();
    DensityMatrix::new(mat, basis)
}

fn split_dim(dim: usize) -> Result<usize> {
    if dim % 3 != 0 || dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 3 * dim.div_ceil(3).max(1),
            got: dim,
        });
    }
    Ok(dim / 3)
}

/// Partial trace over the rotor indices, leaving the 3×3 spin factor
/// (kK in the body frame, mS in the space frame).
pub fn reduce_to_spin<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let rotor = split_dim(rho.dim())?;
    let mut out = CMatrix::<T>::zeros(3, 3);
    for s in 0..3 {
        for sp in 0..3 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for r in 0..rotor {
                acc += rho.mat[(3 * r + s, 3 * r + sp)];
            }
            out[(s, sp)] = acc;
        }
    }
    DensityMatrix::new(out, None)
}

/// Partial trace over the spin index, leaving the rotor factor.
pub fn reduce_to_rotor<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let rotor = split_dim(rho.dim())?;
    let mut out = CMatrix::<T>::zeros(rotor, rotor);
    for r in 0..rotor {
        for rp in 0..rotor {
            let mut acc = Complex::new(T::zero(), T::zero());
            for s in 0..3 {
                acc += rho.mat[(3 * r + s, 3 * rp + s)];
            }
            out[(r, rp)] = acc;
        }
    }
    DensityMatrix::new(out, None)
}

/// Reduced 3×3 spin state of a pure full-space vector.
pub fn reduce_vector_to_spin<T: Real>(v: &CVector<T>) -> Result<DensityMatrix<T>> {
    let rotor = split_dim(v.len())?;
    let norm_sq = v.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
    let mut out = CMatrix::<T>::zeros(3, 3);
    for s in 0..3 {
        for sp in 0..3 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for r in 0..rotor {
                acc += v[3 * r + s] * v[3 * r + sp].conj();
            }
            out[(s, sp)] = acc.unscale(norm_sq);
        }
    }
    DensityMatrix::new(out, None)
}

/// Reduced rotor state of a pure full-space vector.
pub fn reduce_vector_to_rotor<T: Real>(v: &CVector<T>) -> Result<DensityMatrix<T>> {
    let rotor = split_dim(v.len())?;
    let norm_sq = v.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
    let mut out = CMatrix::<T>::zeros(rotor, rotor);
    for r in 0..rotor {
        for rp in 0..rotor {
            let mut acc = Complex::new(T::zero(), T::zero());
            for s in 0..3 {
                acc += v[3 * r + s] * v[3 * rp + s].conj();
            }
            out[(r, rp)] = acc.unscale(norm_sq);
        }
    }
    DensityMatrix::new(out, None)
}

/// Von Neumann entropy −Σ λ log₂ λ in bits, with 0·log 0 = 0 and the
/// eigenvalues clamped to [0, 1] before the logarithm.
pub fn entanglement_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let vals = rho.eigenvalues()?;
    let mut s = T::zero();
    for v in vals {
        let v = v.clamp(T::zero(), T::one());
        if v > T::zero() {
            s -= v * v.log2();
        }
    }
    Ok(s)
}

/// Transpose the spin indices of a full-space density matrix. Hermiticity
/// and trace are preserved; positivity generally is not.
pub fn partial_transpose_spin<T: Real>(rho: &DensityMatrix<T>) -> Result<CMatrix<T>> {
    let rotor = split_dim(rho.dim())?;
    let n = rho.dim();
    let mut out = CMatrix::<T>::zeros(n, n);
    for r in 0..rotor {
        for rp in 0..rotor {
            for s in 0..3 {
                for sp in 0..3 {
                    out[(3 * r + s, 3 * rp + sp)] = rho.mat[(3 * r + sp, 3 * rp + s)];
                }
            }
        }
    }
    Ok(out)
}

/// Both equivalent negativity formulas, for cross-checking.
#[derive(Debug, Clone, Copy)]
pub struct NegativityForms<T> {
    /// Σ |λ| over the negative eigenvalues of ρ^{T_S}.
    pub negative_sum: T,
    /// (‖ρ^{T_S}‖₁ − 1)/2.
    pub trace_norm_form: T,
}

pub fn negativity_forms<T: Real>(rho: &DensityMatrix<T>) -> Result<NegativityForms<T>> {
    let pt = partial_transpose_spin(rho)?;
    let vals = eigh_values(&pt);
    let mut neg = T::zero();
    let mut abs_sum = T::zero();
    for v in vals {
        abs_sum += v.abs();
        if v < T::zero() {
            neg -= v;
        }
    }
    let half = T::from_f64(0.5).unwrap();
    Ok(NegativityForms {
        negative_sum: neg,
        trace_norm_form: (abs_sum - T::one()) * half,
    })
}

/// Entanglement negativity of the spin–rotor bipartition: the absolute sum
/// of negative eigenvalues of the partial transpose. The trace-norm form is
/// evaluated alongside and must agree to 1e-10.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let forms = negativity_forms(rho)?;
    let delta = (forms.negative_sum - forms.trace_norm_form).abs();
    if delta > crate::scaled_tol::<T>(1e-10) {
        return Err(Error::Inconsistent {
            quantity: "negativity",
            delta: delta.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(forms.negative_sum)
}

/// Uhlmann fidelity (tr √(√ρ σ √ρ))², clamped to [0, 1]. Reduces to the
/// squared overlap for pure states.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let (vals, vecs) = eigh(&rho.mat);
    check_psd(&vals)?;
    let n = rho.dim();
    // √ρ = V diag(√λ⁺) V†
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let root = v.max(T::zero()).sqrt().sqrt(); // λ^(1/4) on each side
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)].scale(root);
        }
    }
    let sqrt_rho = &scaled * scaled.adjoint();
    let inner = &sqrt_rho * &sigma.mat * &sqrt_rho;
    let inner_vals = eigh_values(&inner);
    let mut root_sum = T::zero();
    for v in inner_vals {
        root_sum += v.max(T::zero()).sqrt();
    }
    Ok((root_sum * root_sum).clamp(T::zero(), T::one()))
}

/// Squared overlap |⟨a|b⟩|² of two pure states, normalized defensively.
pub fn fidelity_pure<T: Real>(a: &CVector<T>, b: &CVector<T>) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na = a.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
    let nb = b.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
    let mut dot = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b.iter()) {
        dot += x.conj() * y;
    }
    Ok((dot.re * dot.re + dot.im * dot.im) / (na * nb))
}

/// Entanglement numbers of the two lowest eigenstates of one spectrum.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementReport<T> {
    /// Spin entropy of the ground state, bits.
    pub entropy_ground: T,
    /// Spin entropy of the first excited state, bits.
    pub entropy_first_excited: T,
    /// Negativity of the (pure) ground state.
    pub negativity: T,
    /// Ground level within the degeneracy tolerance of the next level;
    /// entanglement numbers then depend on basis conventions.
    pub ground_degenerate: bool,
    /// Same flag for the first excited level.
    pub excited_degenerate: bool,
}

/// Compute the [`EntanglementReport`] of a solved spectrum.
pub fn entanglement_report<T: Real>(
    spectrum: &Spectrum<T>,
    rel_tol: T,
) -> Result<EntanglementReport<T>> {
    if spectrum.len() < 2 {
        return Err(Error::NotEnoughLevels {
            requested: 2,
            dimension: spectrum.len(),
        });
    }
    let ground = spectrum.state(0);
    let excited = spectrum.state(1);
    let entropy_ground = entanglement_entropy(&reduce_vector_to_spin(&ground)?)?;
    let entropy_first_excited = entanglement_entropy(&reduce_vector_to_spin(&excited)?)?;
    let rho = DensityMatrix::pure(&ground, spectrum.basis().cloned())?;
    let negativity = negativity(&rho)?;
    Ok(EntanglementReport {
        entropy_ground,
        entropy_first_excited,
        negativity,
        ground_degenerate: spectrum.is_degenerate(0, rel_tol),
        excited_degenerate: spectrum.is_degenerate(1, rel_tol),
    })
}
