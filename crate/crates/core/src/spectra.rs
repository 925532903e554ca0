//! Hermitian eigendecomposition, magnetic-field level sweeps, and
//! ground/excited-state extraction with degeneracy handling.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    hermiticity_deviation, FieldHamiltonian, HermitianOperator, HERMITICITY_REL_TOL,
};
use crate::{CMatrix, CVector, Real};

/// Default relative tolerance (of the spectral range) below which two
/// adjacent levels are reported as degenerate.
pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-8;

/// Ascending eigenvalues with orthonormal eigenvectors of a Hermitian
/// operator, plus the worst residual ‖Hv − λv‖₂ observed at assembly.
///
/// Eigenvector phases are fixed by making the largest-magnitude component
/// real positive, so repeated runs and different assembly paths produce
/// identical vectors away from degeneracies.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    eigenvalues: Vec<T>,
    eigenvectors: CMatrix<T>,
    basis: Option<Arc<BasisSet>>,
    residual_bound: T,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues in ascending order, rad/s.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, level: usize) -> T {
        self.eigenvalues[level]
    }

    /// Orthonormal eigenvectors as columns aligned with the eigenvalues.
    pub fn eigenvectors(&self) -> &CMatrix<T> {
        &self.eigenvectors
    }

    pub fn state(&self, level: usize) -> CVector<T> {
        CVector::from_column_slice(self.eigenvectors.column(level).as_slice())
    }

    pub fn basis(&self) -> Option<&Arc<BasisSet>> {
        self.basis.as_ref()
    }

    /// Largest ‖Hv − λv‖₂ over all eigenpairs.
    pub fn residual_bound(&self) -> T {
        self.residual_bound
    }

    pub fn spectral_range(&self) -> T {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => hi - lo,
            _ => T::zero(),
        }
    }

    /// Whether `level` sits within `rel_tol · spectral_range` of a neighbor.
    pub fn is_degenerate(&self, level: usize, rel_tol: T) -> bool {
        let n = self.eigenvalues.len();
        if n < 2 {
            return false;
        }
        let tol = rel_tol * self.spectral_range();
        let mut gap: Option<T> = None;
        if level > 0 {
            gap = Some(self.eigenvalues[level] - self.eigenvalues[level - 1]);
        }
        if level + 1 < n {
            let up = self.eigenvalues[level + 1] - self.eigenvalues[level];
            gap = Some(gap.map_or(up, |g| g.min(up)));
        }
        gap.map_or(false, |g| g <= tol)
    }

    /// Lowest-eigenvalue eigenvector and a degeneracy flag.
    ///
    /// When flagged, the returned vector is still deterministic but depends
    /// on basis conventions; downstream entanglement numbers should be
    /// reported with a warning.
    pub fn ground_state(&self, rel_tol: T) -> (CVector<T>, bool) {
        (self.state(0), self.is_degenerate(0, rel_tol))
    }
}

fn is_real<T: Real>(mat: &CMatrix<T>) -> bool {
    mat.iter().all(|z| z.im == T::zero())
}

fn sort_permutation<T: Real>(vals: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).expect("finite eigenvalues"));
    idx
}

/// Fix each column's phase so its largest-magnitude component is real
/// positive (ties broken by the first index).
fn fix_phases<T: Real>(vecs: &mut CMatrix<T>) {
    let (n, cols) = (vecs.nrows(), vecs.ncols());
    for j in 0..cols {
        let mut best = 0;
        let mut best_mag = T::zero();
        for i in 0..n {
            let z = vecs[(i, j)];
            let mag = z.re * z.re + z.im * z.im;
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        let z = vecs[(best, j)];
        let mag = (z.re * z.re + z.im * z.im).sqrt();
        if mag > T::zero() {
            let phase = z.unscale(mag).conj();
            for i in 0..n {
                let w = vecs[(i, j)] * phase;
                vecs[(i, j)] = w;
            }
        }
    }
}

/// Indices of rows with any nonzero entry. Rows (and matching columns) that
/// are exactly zero are deflated before calling the dense solver, which
/// otherwise produces NaNs on such matrices; they contribute eigenvalue 0
/// with a bare basis eigenvector.
fn support<T: Real>(mat: &CMatrix<T>) -> Vec<usize> {
    (0..mat.nrows())
        .filter(|&i| {
            (0..mat.ncols()).any(|j| {
                let z = mat[(i, j)];
                z.re != T::zero() || z.im != T::zero()
            })
        })
        .collect()
}

/// Power-of-two factor bringing the largest entry near one. Scaling by an
/// exact power of two only shifts exponents, so the solver sees the same
/// mantissas regardless of the physical magnitude (and the f32 lane stays
/// inside a comfortable exponent range).
fn entry_scale<T: Real>(mat: &CMatrix<T>) -> T {
    let s = mat
        .iter()
        .fold(T::zero(), |acc, z| acc.max(z.re.abs().max(z.im.abs())));
    if s > T::zero() {
        let exponent = s.log2().round().to_i32().unwrap_or(0);
        T::from_f64(2.0).unwrap().powi(exponent)
    } else {
        T::one()
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix. An order of
/// magnitude slower than the QL backend but unconditionally stable; used
/// only when the backend returns non-finite output (it does so for some
/// inputs, reproducibly at f32 and occasionally at f64).
fn jacobi_real<T: Real>(mut a: DMatrix<T>, max_sweeps: usize) -> (Vec<T>, DMatrix<T>) {
    let n = a.nrows();
    let mut vecs = DMatrix::<T>::identity(n, n);
    let frob = a.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let tol = T::default_epsilon() * frob;
    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / ((T::one() + T::one()) * apq);
                let t = {
                    let magnitude = theta.abs() + (theta * theta + T::one()).sqrt();
                    let t = T::one() / magnitude;
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp - s * vkq;
                    vecs[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), vecs)
}

fn all_finite<T: Real>(vals: &[T], vecs: &DMatrix<T>) -> bool {
    vals.iter().all(|v| v.is_finite()) && vecs.iter().all(|v| v.is_finite())
}

/// Real symmetric solve of the scaled matrix, with the Jacobi fallback.
fn eigh_real_scaled<T: Real>(rm: DMatrix<T>, scale: T) -> (Vec<T>, DMatrix<T>) {
    let eig = rm.clone().symmetric_eigen();
    let vals: Vec<T> = eig.eigenvalues.iter().map(|&v| v * scale).collect();
    if all_finite(&vals, &eig.eigenvectors) {
        return (vals, eig.eigenvectors);
    }
    let (vals, vecs) = jacobi_real(rm, 64);
    (vals.into_iter().map(|v| v * scale).collect(), vecs)
}

/// Real symmetric eigenvalues of the scaled matrix, with the same fallback.
fn real_sym_values_scaled<T: Real>(rm: DMatrix<T>, scale: T) -> Vec<T> {
    let raw = rm.clone().symmetric_eigenvalues();
    if raw.iter().all(|v| v.is_finite()) {
        return raw.iter().map(|&v| v * scale).collect();
    }
    let (vals, _) = jacobi_real(rm, 64);
    vals.into_iter().map(|v| v * scale).collect()
}

/// Hermitian solve through the real embedding [A −B; B A] of M = A + iB.
/// Each eigenvalue appears twice, with real eigenvectors (x; y) and
/// (−y; x) both mapping to the complex eigenvector x + iy; a greedy
/// complex orthogonalization in ascending eigenvalue order picks one
/// representative per pair. The real symmetric backend is markedly more
/// robust than the direct complex iteration.
fn eigh_complex_via_real<T: Real>(mat: &CMatrix<T>, scale: T) -> (Vec<T>, CMatrix<T>) {
    let n = mat.nrows();
    let big = DMatrix::<T>::from_fn(2 * n, 2 * n, |i, j| {
        let z = mat[(i % n, j % n)].unscale(scale);
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (rvals, rvecs) = eigh_real_scaled(big, scale);
    let perm = sort_permutation(&rvals);

    let mut selected = CMatrix::<T>::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    let half = T::from_f64(0.5).unwrap();
    let mut count = 0;
    for pass in 0..2 {
        // second pass mops up pathological degenerate clusters with a
        // looser independence threshold
        let threshold = if pass == 0 {
            half
        } else {
            crate::scaled_tol::<T>(1e-12)
        };
        for &src in &perm {
            if count == n {
                break;
            }
            let mut cand = CVector::<T>::from_fn(n, |k, _| {
                Complex::new(rvecs[(k, src)], rvecs[(n + k, src)])
            });
            for s in 0..count {
                let mut proj = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    proj += selected[(k, s)].conj() * cand[k];
                }
                for k in 0..n {
                    let delta = selected[(k, s)] * proj;
                    cand[k] -= delta;
                }
            }
            let norm_sq = cand
                .iter()
                .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im);
            if norm_sq > threshold {
                let inv = norm_sq.sqrt();
                for k in 0..n {
                    selected[(k, count)] = cand[k].unscale(inv);
                }
                vals.push(rvals[src]);
                count += 1;
            }
        }
        if count == n {
            break;
        }
    }
    debug_assert_eq!(count, n, "complex eigenbasis extraction incomplete");
    (vals, selected)
}

fn eigh_dense<T: Real>(mat: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = mat.nrows();
    let scale = entry_scale(mat);
    if is_real(mat) {
        let rm = DMatrix::<T>::from_fn(n, n, |i, j| mat[(i, j)].re / scale);
        let (vals, rvecs) = eigh_real_scaled(rm, scale);
        let vecs =
            CMatrix::<T>::from_fn(n, n, |i, j| Complex::new(rvecs[(i, j)], T::zero()));
        (vals, vecs)
    } else {
        eigh_complex_via_real(mat, scale)
    }
}

/// Eigendecomposition of a Hermitian complex matrix, sorted ascending with
/// phases fixed. Purely real input is solved in real symmetric form.
///
/// The eigenvalues are recomputed as Rayleigh quotients of the returned
/// eigenvectors: the dense backend occasionally pairs a converged
/// eigenvalue with the wrong column, while the eigenvector set itself is a
/// correct orthonormal diagonalizing basis.
pub(crate) fn eigh<T: Real>(mat: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = mat.nrows();
    let supp = support(mat);
    let vecs = if supp.len() == n {
        eigh_dense(mat).1
    } else {
        let m = supp.len();
        let sub = CMatrix::<T>::from_fn(m, m, |a, b| mat[(supp[a], supp[b])]);
        let mut vecs = CMatrix::<T>::zeros(n, n);
        if m > 0 {
            let (_, svecs) = eigh_dense(&sub);
            for col in 0..m {
                for (row_local, &row) in supp.iter().enumerate() {
                    vecs[(row, col)] = svecs[(row_local, col)];
                }
            }
        }
        let mut in_support = vec![false; n];
        for &i in &supp {
            in_support[i] = true;
        }
        let mut col = m;
        for (i, &inside) in in_support.iter().enumerate() {
            if !inside {
                vecs[(i, col)] = Complex::new(T::one(), T::zero());
                col += 1;
            }
        }
        vecs
    };
    let prod = mat * &vecs;
    let rayleigh: Vec<T> = (0..n)
        .map(|j| {
            let mut rq = T::zero();
            for i in 0..n {
                rq += (vecs[(i, j)].conj() * prod[(i, j)]).re;
            }
            rq
        })
        .collect();
    let perm = sort_permutation(&rayleigh);
    let sorted_vals: Vec<T> = perm.iter().map(|&i| rayleigh[i]).collect();
    let mut sorted_vecs = CMatrix::<T>::zeros(n, n);
    for (dst, &src) in perm.iter().enumerate() {
        sorted_vecs.set_column(dst, &vecs.column(src));
    }
    fix_phases(&mut sorted_vecs);
    (sorted_vals, sorted_vecs)
}

/// Ascending eigenvalues of a Hermitian complex matrix, no eigenvectors.
pub(crate) fn eigh_values<T: Real>(mat: &CMatrix<T>) -> Vec<T> {
    let n = mat.nrows();
    let supp = support(mat);
    let mut vals: Vec<T> = if supp.len() == n {
        let scale = entry_scale(mat);
        if is_real(mat) {
            let rm = DMatrix::<T>::from_fn(n, n, |i, j| mat[(i, j)].re / scale);
            real_sym_values_scaled(rm, scale)
        } else {
            // real embedding doubles every eigenvalue; keep every second
            // entry of the sorted list
            let big = DMatrix::<T>::from_fn(2 * n, 2 * n, |i, j| {
                let z = mat[(i % n, j % n)].unscale(scale);
                match (i < n, j < n) {
                    (true, true) | (false, false) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                }
            });
            let mut doubled = real_sym_values_scaled(big, scale);
            doubled.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
            doubled.into_iter().step_by(2).collect()
        }
    } else {
        let m = supp.len();
        let sub = CMatrix::<T>::from_fn(m, m, |a, b| mat[(supp[a], supp[b])]);
        let mut vals = if m > 0 {
            eigh_values(&sub)
        } else {
            Vec::new()
        };
        vals.resize(n, T::zero());
        vals
    };
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    vals
}

fn residual_bound<T: Real>(mat: &CMatrix<T>, vals: &[T], vecs: &CMatrix<T>) -> T {
    let mut prod = mat * vecs;
    for (j, &v) in vals.iter().enumerate() {
        for i in 0..prod.nrows() {
            prod[(i, j)] -= vecs[(i, j)].scale(v);
        }
    }
    let mut worst = T::zero();
    for j in 0..prod.ncols() {
        let mut sq = T::zero();
        for i in 0..prod.nrows() {
            let z = prod[(i, j)];
            sq += z.re * z.re + z.im * z.im;
        }
        worst = worst.max(sq.sqrt());
    }
    worst
}

/// Full eigendecomposition of a validated Hermitian operator.
pub fn eigendecompose<T: Real>(op: &HermitianOperator<T>) -> Result<Spectrum<T>> {
    let mat = op.matrix();
    let scale = mat
        .iter()
        .fold(T::zero(), |acc, z| acc.max((z.re * z.re + z.im * z.im).sqrt()));
    let dev = hermiticity_deviation(mat);
    if dev > crate::scaled_tol::<T>(HERMITICITY_REL_TOL) * scale {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN)
                / scale.to_f64().unwrap_or(f64::NAN).max(f64::MIN_POSITIVE),
            tolerance: HERMITICITY_REL_TOL,
        });
    }
    let (vals, vecs) = eigh(mat);
    let bound = residual_bound(mat, &vals, &vecs);
    Ok(Spectrum {
        eigenvalues: vals,
        eigenvectors: vecs,
        basis: op.basis().cloned(),
        residual_bound: bound,
    })
}

impl<T: Real> FieldHamiltonian<T> {
    /// Diagonalize at one field value, block by block, and merge into a
    /// full-dimension spectrum. Identical (up to rounding) to the dense
    /// solve, at a fraction of the cost.
    pub fn eigendecompose_at(&self, field: T) -> Result<Spectrum<T>> {
        if field < T::zero() {
            return Err(Error::NegativeField(field.to_f64().unwrap_or(f64::NAN)));
        }
        struct BlockEig<T: Real> {
            vals: Vec<T>,
            vecs: CMatrix<T>,
            resid: T,
        }
        let solved: Vec<BlockEig<T>> = self
            .blocks()
            .par_iter()
            .map(|block| {
                let mat = &block.constant + block.linear.map(|z| z.scale(field));
                let (vals, vecs) = eigh(&mat);
                let resid = residual_bound(&mat, &vals, &vecs);
                BlockEig { vals, vecs, resid }
            })
            .collect();

        // merge: sort by eigenvalue, ties broken by block order then local
        // index so repeated runs give identical output
        let mut order: Vec<(T, usize, usize)> = Vec::with_capacity(self.basis().dim());
        for (b, eig) in solved.iter().enumerate() {
            for (l, &v) in eig.vals.iter().enumerate() {
                order.push((v, b, l));
            }
        }
        order.sort_by(|x, y| {
            x.0.partial_cmp(&y.0)
                .expect("finite eigenvalues")
                .then(x.1.cmp(&y.1))
                .then(x.2.cmp(&y.2))
        });

        let dim = self.basis().dim();
        let mut vals = Vec::with_capacity(dim);
        let mut vecs = CMatrix::<T>::zeros(dim, dim);
        for (dst, &(v, b, l)) in order.iter().enumerate() {
            vals.push(v);
            let indices = &self.blocks()[b].indices;
            for (row_local, &row_global) in indices.iter().enumerate() {
                vecs[(row_global, dst)] = solved[b].vecs[(row_local, l)];
            }
        }
        let resid = solved
            .iter()
            .fold(T::zero(), |acc, e| acc.max(e.resid));
        Ok(Spectrum {
            eigenvalues: vals,
            eigenvectors: vecs,
            basis: Some(self.basis().clone()),
            residual_bound: resid,
        })
    }

    /// Ascending eigenvalues at one field value (no eigenvectors).
    pub fn eigenvalues_at(&self, field: T) -> Result<Vec<T>> {
        if field < T::zero() {
            return Err(Error::NegativeField(field.to_f64().unwrap_or(f64::NAN)));
        }
        let mut vals: Vec<T> = self
            .blocks()
            .par_iter()
            .map(|block| {
                let mat = &block.constant + block.linear.map(|z| z.scale(field));
                eigh_values(&mat)
            })
            .flatten()
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(vals)
    }
}

/// Lowest `n_levels` eigenvalues over a grid of magnetic-field values.
#[derive(Debug, Clone)]
pub struct LevelTable<T: Real> {
    /// Magnetic field grid, tesla.
    pub field_grid: Vec<T>,
    /// `levels[g][k]` is the k-th lowest eigenvalue at `field_grid[g]`, rad/s.
    pub levels: Vec<Vec<T>>,
}

/// Sweep the lowest `n_levels` eigenvalues over `field_grid`; grid points
/// are solved concurrently and assembled in grid order.
pub fn sweep_levels<T: Real>(
    ham: &FieldHamiltonian<T>,
    field_grid: &[T],
    n_levels: usize,
) -> Result<LevelTable<T>> {
    let dim = ham.basis().dim();
    if n_levels > dim {
        return Err(Error::NotEnoughLevels {
            requested: n_levels,
            dimension: dim,
        });
    }
    let levels: Vec<Vec<T>> = field_grid
        .par_iter()
        .map(|&b| {
            ham.eigenvalues_at(b).map(|mut v| {
                v.truncate(n_levels);
                v
            })
        })
        .collect::<Result<_>>()?;
    Ok(LevelTable {
        field_grid: field_grid.to_vec(),
        levels,
    })
}
