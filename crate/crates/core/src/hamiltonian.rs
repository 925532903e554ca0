//! Assembly of the spin-rotor Hamiltonians as Hermitian matrices.
//!
//! Everything is expressed as H/ħ in rad/s. The body-frame Hamiltonian is
//! H = H₀ + V with
//!
//! ```text
//! H₀/ħ = D·kK² + (ħ/2I1)·[J(J+1) + 2·kJ·kK + Ĵ′₊K̂′₋ + Ĵ′₋K̂′₊]
//!        + (ħ/2)(1/I3 − 1/I1)·(kJ+kK)²
//! V/ħ  = −(g·μB·B/ħ) · Σᵢ K̂′ᵢ (ê′ᵢ·e₃)
//! ```
//!
//! where the direction-cosine rotor elements come from the analytical
//! D⁽¹⁾ integrals in [`crate::angular`] and K̂ = −Ŝ with K = 1. The constant
//! Ŝ² term is dropped throughout. The space-frame Hamiltonian is
//! D·(Ŝ₃′)² plus the rotor diagonal plus the exactly diagonal Zeeman term.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;

use crate::angular::{d1_matrix_element, d1_matrix_element_0mu, ladder_coeff, Ladder};
use crate::basis::{BasisSet, Frame, Ket};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::{CMatrix, Real};

/// Relative tolerance on ‖M − M†‖_max for accepting a matrix as Hermitian,
/// stated for f64 and applied at the equivalent ulp count for other scalars.
pub const HERMITICITY_REL_TOL: f64 = 1e-12;

/// A validated Hermitian operator on a truncated basis (or on the bare
/// 3-dimensional spin space when `basis` is `None`).
#[derive(Debug, Clone)]
pub struct HermitianOperator<T: Real> {
    mat: CMatrix<T>,
    basis: Option<Arc<BasisSet>>,
}

impl<T: Real> HermitianOperator<T> {
    /// Wrap a matrix, validating squareness, basis dimension, and
    /// Hermiticity to [`HERMITICITY_REL_TOL`] relative to the largest entry.
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
        let scale = matrix_scale(&mat);
        let deviation = hermiticity_deviation(&mat);
        let tol = crate::scaled_tol::<T>(HERMITICITY_REL_TOL);
        if deviation > tol * scale {
            let dev = deviation.to_f64().unwrap_or(f64::NAN);
            let scl = scale.to_f64().unwrap_or(f64::NAN).max(f64::MIN_POSITIVE);
            return Err(Error::NotHermitian {
                deviation: dev / scl,
                tolerance: HERMITICITY_REL_TOL,
            });
        }
        Ok(Self { mat, basis })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    pub fn basis(&self) -> Option<&Arc<BasisSet>> {
        self.basis.as_ref()
    }
}

fn cmag<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Largest entrywise magnitude ‖M − M†‖_max.
pub fn hermiticity_deviation<T: Real>(mat: &CMatrix<T>) -> T {
    let mut dev = T::zero();
    for i in 0..mat.nrows() {
        for j in i..mat.ncols() {
            let d = cmag(mat[(i, j)] - mat[(j, i)].conj());
            dev = dev.max(d);
        }
    }
    dev
}

fn matrix_scale<T: Real>(mat: &CMatrix<T>) -> T {
    mat.iter().fold(T::zero(), |acc, z| acc.max(cmag(*z)))
}

// ---------------------------------------------------------------------------
// body frame
// ---------------------------------------------------------------------------

/// Matrix element of H₀/ħ between body-frame kets, rad/s. Conserves J, mJ
/// and kJ + kK; off-diagonal terms are the Ĵ′±K̂′∓ ladder products.
fn h0_body_element(p: &SystemParams, bra: &Ket, ket: &Ket) -> f64 {
    if bra.ang != ket.ang || bra.m != ket.m {
        return 0.0;
    }
    let rot = p.rotational_scale();
    if bra.k == ket.k && bra.spin == ket.spin {
        let j = f64::from(ket.ang);
        let k = f64::from(ket.k);
        let s = f64::from(ket.spin);
        return p.d_zfs * s * s
            + rot * (j * (j + 1.0) + 2.0 * k * s)
            + p.anisotropy_rate() * (k + s) * (k + s);
    }
    if bra.k == ket.k + 1 && bra.spin == ket.spin - 1 {
        let cj: f64 = ladder_coeff(ket.ang, ket.k, Ladder::Raise).expect("valid ket");
        let ck: f64 = ladder_coeff(1, ket.spin, Ladder::Lower).expect("valid ket");
        return rot * cj * ck;
    }
    if bra.k == ket.k - 1 && bra.spin == ket.spin + 1 {
        let cj: f64 = ladder_coeff(ket.ang, ket.k, Ladder::Lower).expect("valid ket");
        let ck: f64 = ladder_coeff(1, ket.spin, Ladder::Raise).expect("valid ket");
        return rot * cj * ck;
    }
    0.0
}

/// Matrix element of V/(ħB) between body-frame kets, in rad/(s·T), so that
/// V = B times this. Grouping the direction cosines of Eq-style spherical
/// components gives K̂·e₃ = −D⁽¹⁾₁₀ K̂′₋/√2 + D⁽¹⁾₋₁₀ K̂′₊/√2 + D⁽¹⁾₀₀ K̂′₃,
/// and V/ħ = −(gμB B/ħ)·K̂·e₃. Conserves mJ and kJ + kK.
fn zeeman_body_element(p: &SystemParams, bra: &Ket, ket: &Ket) -> f64 {
    if bra.m != ket.m {
        return 0.0;
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let coupling = match bra.spin - ket.spin {
        // kK lowered by K̂′₋, rotor index raised by μ = +1
        -1 => {
            let d: f64 = d1_matrix_element(bra.ang, bra.m, bra.k, 1, ket.ang, ket.m, ket.k)
                .expect("valid kets");
            let ck: f64 = ladder_coeff(1, ket.spin, Ladder::Lower).expect("valid ket");
            -inv_sqrt2 * d * ck
        }
        // kK raised by K̂′₊, rotor index lowered by μ = −1
        1 => {
            let d: f64 = d1_matrix_element(bra.ang, bra.m, bra.k, -1, ket.ang, ket.m, ket.k)
                .expect("valid kets");
            let ck: f64 = ladder_coeff(1, ket.spin, Ladder::Raise).expect("valid ket");
            inv_sqrt2 * d * ck
        }
        0 => {
            let d: f64 = d1_matrix_element(bra.ang, bra.m, bra.k, 0, ket.ang, ket.m, ket.k)
                .expect("valid kets");
            d * f64::from(ket.spin)
        }
        _ => return 0.0,
    };
    -p.larmor_rate() * coupling
}

/// Matrix of H₀/ħ in the body-frame basis, rad/s.
pub fn assemble_h0_body<T: Real>(
    basis: &Arc<BasisSet>,
    params: &SystemParams,
) -> Result<HermitianOperator<T>> {
    basis.check_frame(Frame::Body)?;
    assemble_dense(basis, |bra, ket| {
        T::from_f64(h0_body_element(params, bra, ket)).unwrap()
    })
}

/// Matrix of V/ħ at magnetic field `field` (tesla, nonnegative) in the
/// body-frame basis, rad/s.
pub fn assemble_v_body<T: Real>(
    basis: &Arc<BasisSet>,
    params: &SystemParams,
    field: T,
) -> Result<HermitianOperator<T>> {
    basis.check_frame(Frame::Body)?;
    check_field(field)?;
    assemble_dense(basis, |bra, ket| {
        T::from_f64(zeeman_body_element(params, bra, ket)).unwrap() * field
    })
}

/// Matrix of (H₀ + V)/ħ in the body-frame basis, rad/s.
pub fn assemble_body<T: Real>(
    basis: &Arc<BasisSet>,
    params: &SystemParams,
    field: T,
) -> Result<HermitianOperator<T>> {
    basis.check_frame(Frame::Body)?;
    check_field(field)?;
    assemble_dense(basis, |bra, ket| {
        T::from_f64(h0_body_element(params, bra, ket)).unwrap()
            + T::from_f64(zeeman_body_element(params, bra, ket)).unwrap() * field
    })
}

fn check_field<T: Real>(field: T) -> Result<()> {
    if field < T::zero() {
        return Err(Error::NegativeField(field.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

fn assemble_dense<T: Real>(
    basis: &Arc<BasisSet>,
    element: impl Fn(&Ket, &Ket) -> T,
) -> Result<HermitianOperator<T>> {
    let n = basis.dim();
    let mut mat = CMatrix::<T>::zeros(n, n);
    for i in 0..n {
        let bra = basis.ket(i);
        for j in 0..n {
            let ket = basis.ket(j);
            let v = element(&bra, &ket);
            if v != T::zero() {
                mat[(i, j)] = Complex::new(v, T::zero());
            }
        }
    }
    HermitianOperator::new(mat, Some(basis.clone()))
}

// ---------------------------------------------------------------------------
// spin reference
// ---------------------------------------------------------------------------

/// H_S/ħ = D·Ŝz² + (gμB B/ħ)·Ŝz for a resting NV⁻ center, on the spin basis
/// ordered mS ∈ {−1, 0, +1}.
pub fn assemble_spin_reference<T: Real>(
    params: &SystemParams,
    field: T,
) -> HermitianOperator<T> {
    let b = field.to_f64().expect("finite field");
    let mut mat = CMatrix::<T>::zeros(3, 3);
    for (idx, m) in (-1..=1i32).enumerate() {
        let m = f64::from(m);
        let value = params.d_zfs * m * m + params.larmor_rate() * b * m;
        mat[(idx, idx)] = Complex::new(T::from_f64(value).unwrap(), T::zero());
    }
    HermitianOperator::new(mat, None).expect("diagonal matrix is Hermitian")
}

// ---------------------------------------------------------------------------
// space frame
// ---------------------------------------------------------------------------

/// Sparse action of the body-axis spin projection Ŝ₃′ = Σᵢ Ŝᵢ (eᵢ·ê′₃) on a
/// space-frame ket, as (bra ket, coefficient) pairs with L′ ≤ `lmax`.
///
/// In spherical form Ŝ₃′ = D⁽¹⁾₀₀ Ŝ₃ + (−D⁽¹⁾₀₁ Ŝ₋ + D⁽¹⁾₀,₋₁ Ŝ₊)/√2; each
/// term shifts mL by μ and mS by −μ, conserving both mL + mS and kL.
fn s3p_action(ket: Ket, lmax: u32) -> Vec<(Ket, f64)> {
    let mut out = Vec::new();
    for mu in -1..=1i32 {
        let spin = ket.spin - mu;
        if spin.abs() > 1 {
            continue;
        }
        let spin_factor = match mu {
            0 => f64::from(ket.spin),
            1 => {
                -std::f64::consts::FRAC_1_SQRT_2
                    * ladder_coeff::<f64>(1, ket.spin, Ladder::Lower).expect("valid ket")
            }
            _ => {
                std::f64::consts::FRAC_1_SQRT_2
                    * ladder_coeff::<f64>(1, ket.spin, Ladder::Raise).expect("valid ket")
            }
        };
        if spin_factor == 0.0 {
            continue;
        }
        let m = ket.m + mu;
        let lo = ket.ang.saturating_sub(1);
        for ang in lo..=(ket.ang + 1).min(lmax) {
            if m.unsigned_abs() > ang || ket.k.unsigned_abs() > ang {
                continue;
            }
            let d: f64 = d1_matrix_element_0mu(ang, m, ket.k, mu, ket.ang, ket.m, ket.k)
                .expect("valid kets");
            if d != 0.0 {
                out.push((
                    Ket {
                        ang,
                        m,
                        k: ket.k,
                        spin,
                    },
                    d * spin_factor,
                ));
            }
        }
    }
    out
}

/// One column of (Ŝ₃′)² restricted to L ≤ `cutoff`, computed by applying
/// Ŝ₃′ twice with the intermediate sum running over the buffer cutoff + 1.
/// Exact for all retained elements since Ŝ₃′ couples |ΔL| ≤ 1.
fn s3p_square_column(ket: Ket, cutoff: u32) -> HashMap<Ket, f64> {
    let mut acc: HashMap<Ket, f64> = HashMap::new();
    for (mid, c1) in s3p_action(ket, cutoff + 1) {
        for (out, c2) in s3p_action(mid, cutoff) {
            *acc.entry(out).or_insert(0.0) += c2 * c1;
        }
    }
    acc
}

fn space_rotor_diag(p: &SystemParams, ket: &Ket) -> f64 {
    let l = f64::from(ket.ang);
    let k = f64::from(ket.k);
    p.rotational_scale() * l * (l + 1.0) + p.anisotropy_rate() * k * k
}

/// Matrix of H/ħ in the space-frame basis at field `field`, rad/s:
/// D·(Ŝ₃′)² + rotor diagonal + (gμB B/ħ)·mS.
///
/// Assembled as constant + B·linear through the same element expressions as
/// the block form, so the two paths agree bit for bit.
pub fn assemble_space_frame<T: Real>(
    basis: &Arc<BasisSet>,
    params: &SystemParams,
    field: T,
) -> Result<HermitianOperator<T>> {
    basis.check_frame(Frame::Space)?;
    check_field(field)?;
    let n = basis.dim();
    let mut constant = CMatrix::<T>::zeros(n, n);
    let mut linear = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let ket = basis.ket(j);
        constant[(j, j)] = Complex::new(
            T::from_f64(space_rotor_diag(params, &ket)).unwrap(),
            T::zero(),
        );
        linear[(j, j)] = Complex::new(
            T::from_f64(params.larmor_rate() * f64::from(ket.spin)).unwrap(),
            T::zero(),
        );
        for (bra, val) in s3p_square_column(ket, basis.cutoff()) {
            if let Some(i) = basis.index_of(&bra) {
                constant[(i, j)] +=
                    Complex::new(T::from_f64(params.d_zfs * val).unwrap(), T::zero());
            }
        }
    }
    let mat = CMatrix::<T>::from_fn(n, n, |i, j| constant[(i, j)] + linear[(i, j)].scale(field));
    HermitianOperator::new(mat, Some(basis.clone()))
}

// ---------------------------------------------------------------------------
// field-linear block form
// ---------------------------------------------------------------------------

/// One conserved-label block of H(B) = constant + B·linear.
#[derive(Debug, Clone)]
pub struct FieldBlock<T: Real> {
    /// Conserved label: mJ (body) or mL + mS (space).
    pub label: i32,
    /// Positions of the block rows/columns in the full basis ordering.
    pub indices: Vec<usize>,
    /// Field-independent part, rad/s.
    pub constant: CMatrix<T>,
    /// Field-proportional part, rad/(s·T).
    pub linear: CMatrix<T>,
}

/// The Hamiltonian split into conserved-label blocks, each linear in the
/// magnetic field. Assembled once per basis; sweeps over B reuse it, which
/// cuts the diagonalization cost by roughly the number of blocks.
#[derive(Debug, Clone)]
pub struct FieldHamiltonian<T: Real> {
    basis: Arc<BasisSet>,
    params: SystemParams,
    blocks: Vec<FieldBlock<T>>,
}

impl<T: Real> FieldHamiltonian<T> {
    pub fn new(basis: &Arc<BasisSet>, params: &SystemParams) -> Result<Self> {
        let blocks = match basis.frame() {
            Frame::Body => body_blocks(basis, params),
            Frame::Space => space_blocks(basis, params),
        };
        Ok(Self {
            basis: basis.clone(),
            params: *params,
            blocks,
        })
    }

    pub fn basis(&self) -> &Arc<BasisSet> {
        &self.basis
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn blocks(&self) -> &[FieldBlock<T>] {
        &self.blocks
    }

    /// Assemble the dense matrix at one field value by scattering the
    /// blocks; entries between different blocks are exactly zero.
    pub fn dense_at(&self, field: T) -> Result<HermitianOperator<T>> {
        check_field(field)?;
        let n = self.basis.dim();
        let mut mat = CMatrix::<T>::zeros(n, n);
        for block in &self.blocks {
            for (a, &ia) in block.indices.iter().enumerate() {
                for (b, &ib) in block.indices.iter().enumerate() {
                    mat[(ia, ib)] = block.constant[(a, b)] + block.linear[(a, b)].scale(field);
                }
            }
        }
        HermitianOperator::new(mat, Some(self.basis.clone()))
    }
}

fn body_blocks<T: Real>(basis: &Arc<BasisSet>, p: &SystemParams) -> Vec<FieldBlock<T>> {
    basis
        .blocks()
        .iter()
        .map(|b| {
            let n = b.indices.len();
            let mut constant = CMatrix::<T>::zeros(n, n);
            let mut linear = CMatrix::<T>::zeros(n, n);
            for (a, &ia) in b.indices.iter().enumerate() {
                let bra = basis.ket(ia);
                for (c, &ic) in b.indices.iter().enumerate() {
                    let ket = basis.ket(ic);
                    let h0 = h0_body_element(p, &bra, &ket);
                    if h0 != 0.0 {
                        constant[(a, c)] = Complex::new(T::from_f64(h0).unwrap(), T::zero());
                    }
                    let w = zeeman_body_element(p, &bra, &ket);
                    if w != 0.0 {
                        linear[(a, c)] = Complex::new(T::from_f64(w).unwrap(), T::zero());
                    }
                }
            }
            FieldBlock {
                label: b.label,
                indices: b.indices.clone(),
                constant,
                linear,
            }
        })
        .collect()
}

fn space_blocks<T: Real>(basis: &Arc<BasisSet>, p: &SystemParams) -> Vec<FieldBlock<T>> {
    // basis index -> (block number, position inside the block)
    let mut pos = vec![(usize::MAX, usize::MAX); basis.dim()];
    for (bi, b) in basis.blocks().iter().enumerate() {
        for (q, &i) in b.indices.iter().enumerate() {
            pos[i] = (bi, q);
        }
    }
    let mut blocks: Vec<FieldBlock<T>> = basis
        .blocks()
        .iter()
        .map(|b| {
            let n = b.indices.len();
            FieldBlock {
                label: b.label,
                indices: b.indices.clone(),
                constant: CMatrix::<T>::zeros(n, n),
                linear: CMatrix::<T>::zeros(n, n),
            }
        })
        .collect();

    for j in 0..basis.dim() {
        let ket = basis.ket(j);
        let (bj, qj) = pos[j];
        blocks[bj].constant[(qj, qj)] = Complex::new(
            T::from_f64(space_rotor_diag(p, &ket)).unwrap(),
            T::zero(),
        );
        blocks[bj].linear[(qj, qj)] = Complex::new(
            T::from_f64(p.larmor_rate() * f64::from(ket.spin)).unwrap(),
            T::zero(),
        );
        for (bra, val) in s3p_square_column(ket, basis.cutoff()) {
            if let Some(i) = basis.index_of(&bra) {
                let (bi, qi) = pos[i];
                debug_assert_eq!(bi, bj, "S3' squared must conserve the block label");
                blocks[bj].constant[(qi, qj)] +=
                    Complex::new(T::from_f64(p.d_zfs * val).unwrap(), T::zero());
            }
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn h0_diagonal_examples() {
        let p = params();
        let basis = BasisSet::body(1);
        let h0 = assemble_h0_body::<f64>(&basis, &p).unwrap();
        let at = |ket: Ket| h0.matrix()[(
            basis.index_of(&ket).unwrap(),
            basis.index_of(&ket).unwrap(),
        )]
        .re;
        // |0 0 0, 1 0⟩: every term vanishes with the S² constant dropped
        assert_eq!(
            at(Ket {
                ang: 0,
                m: 0,
                k: 0,
                spin: 0
            }),
            0.0
        );
        // |1 0 0, 1 1⟩: D + ħ/I1 + (ħ/2)(1/I3 − 1/I1)
        let want = p.d_zfs + p.hbar / p.i1 + p.anisotropy_rate();
        assert_relative_eq!(
            at(Ket {
                ang: 1,
                m: 0,
                k: 0,
                spin: 1
            }),
            want,
            max_relative = 1e-14
        );
    }

    #[test]
    fn h0_ladder_example() {
        let p = params();
        let basis = BasisSet::body(1);
        let h0 = assemble_h0_body::<f64>(&basis, &p).unwrap();
        let i = basis
            .index_of(&Ket {
                ang: 1,
                m: 0,
                k: 1,
                spin: 0,
            })
            .unwrap();
        let j = basis
            .index_of(&Ket {
                ang: 1,
                m: 0,
                k: 0,
                spin: 1,
            })
            .unwrap();
        assert_relative_eq!(h0.matrix()[(i, j)].re, p.hbar / p.i1, max_relative = 1e-14);
        assert_relative_eq!(h0.matrix()[(j, i)].re, p.hbar / p.i1, max_relative = 1e-14);
    }

    #[test]
    fn h0_conserves_k_sum() {
        let p = params();
        let basis = BasisSet::body(3);
        let h0 = assemble_h0_body::<f64>(&basis, &p).unwrap();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let (bra, ket) = (basis.ket(i), basis.ket(j));
                if bra.k + bra.spin != ket.k + ket.spin {
                    assert_eq!(h0.matrix()[(i, j)], Complex::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn v_vanishes_at_zero_field_and_off_mj() {
        let p = params();
        let basis = BasisSet::body(2);
        let v0 = assemble_v_body(&basis, &p, 0.0).unwrap();
        assert!(v0.matrix().iter().all(|z| *z == Complex::new(0.0, 0.0)));
        let v = assemble_v_body(&basis, &p, 0.5).unwrap();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                if basis.ket(i).m != basis.ket(j).m {
                    assert_eq!(v.matrix()[(i, j)], Complex::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn v_is_linear_in_the_field() {
        let p = params();
        let basis = BasisSet::body(2);
        let v1 = assemble_v_body(&basis, &p, 0.25).unwrap();
        let v2 = assemble_v_body(&basis, &p, 0.5).unwrap();
        for (a, b) in v1.matrix().iter().zip(v2.matrix().iter()) {
            assert_eq!(a.scale(2.0), *b);
        }
    }

    #[test]
    fn negative_field_rejected() {
        let p = params();
        let basis = BasisSet::body(1);
        assert!(assemble_v_body(&basis, &p, -0.1).is_err());
        assert!(assemble_body(&basis, &p, -0.1).is_err());
    }

    #[test]
    fn wrong_frame_rejected() {
        let p = params();
        let space = BasisSet::space(1);
        assert!(assemble_h0_body::<f64>(&space, &p).is_err());
        let body = BasisSet::body(1);
        assert!(assemble_space_frame(&body, &p, 0.0f64).is_err());
    }

    #[test]
    fn spin_reference_levels() {
        let p = params();
        let h = assemble_spin_reference::<f64>(&p, 0.0);
        let mut diag: Vec<f64> = (0..3).map(|i| h.matrix()[(i, i)].re).collect();
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(diag[0], 0.0);
        assert_relative_eq!(diag[1], p.d_zfs, max_relative = 1e-15);
        assert_relative_eq!(diag[2], p.d_zfs, max_relative = 1e-15);
        // at 0.2 T the diagonal is {D − gμB B/ħ, 0, D + gμB B/ħ} in mS order
        let h = assemble_spin_reference::<f64>(&p, 0.2);
        let z = p.larmor_rate() * 0.2;
        assert_relative_eq!(h.matrix()[(0, 0)].re, p.d_zfs - z, max_relative = 1e-14);
        assert_eq!(h.matrix()[(1, 1)].re, 0.0);
        assert_relative_eq!(h.matrix()[(2, 2)].re, p.d_zfs + z, max_relative = 1e-14);
    }

    #[test]
    fn space_zeeman_is_exactly_diagonal() {
        let p = params();
        let basis = BasisSet::space(2);
        let h0 = assemble_space_frame::<f64>(&basis, &p, 0.0).unwrap();
        let h = assemble_space_frame(&basis, &p, 0.4).unwrap();
        let z = p.larmor_rate() * 0.4;
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let diff = h.matrix()[(i, j)] - h0.matrix()[(i, j)];
                if i == j {
                    let want = z * f64::from(basis.ket(i).spin);
                    assert_relative_eq!(diff.re, want, max_relative = 1e-13, epsilon = 1e-3);
                } else {
                    assert_eq!(diff, Complex::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn assembled_operators_are_hermitian() {
        let p = params();
        let body = BasisSet::body(3);
        let space = BasisSet::space(3);
        for &b in &[0.0, 0.1, 0.5, 1.0] {
            let h = assemble_body(&body, &p, b).unwrap();
            let dev = hermiticity_deviation(h.matrix());
            assert!(dev <= 1e-12 * matrix_scale(h.matrix()));
            let hs = assemble_space_frame(&space, &p, b).unwrap();
            let dev = hermiticity_deviation(hs.matrix());
            assert!(dev <= 1e-12 * matrix_scale(hs.matrix()));
        }
    }

    #[test]
    fn block_and_dense_assembly_agree_exactly() {
        let p = params();
        for basis in [BasisSet::body(3), BasisSet::space(3)] {
            let fh = FieldHamiltonian::<f64>::new(&basis, &p).unwrap();
            let dense = fh.dense_at(0.3).unwrap();
            let direct = match basis.frame() {
                Frame::Body => assemble_body(&basis, &p, 0.3).unwrap(),
                Frame::Space => assemble_space_frame(&basis, &p, 0.3).unwrap(),
            };
            assert_eq!(dense.matrix(), direct.matrix());
        }
    }

    #[test]
    fn cross_block_elements_are_zero() {
        let p = params();
        let basis = BasisSet::body(2);
        let h = assemble_body(&basis, &p, 0.7).unwrap();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let li = basis.block_label(&basis.ket(i));
                let lj = basis.block_label(&basis.ket(j));
                if li != lj {
                    assert_eq!(h.matrix()[(i, j)], Complex::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn non_hermitian_matrix_rejected() {
        let mut mat = CMatrix::<f64>::zeros(2, 2);
        mat[(0, 1)] = Complex::new(1.0, 0.0);
        assert!(HermitianOperator::new(mat, None).is_err());
    }
}
