//! Sanity properties of the entanglement measures on random and constructed
//! states: product states carry no entanglement, maximal entanglement hits
//! the bounds, Schmidt symmetry, local-unitary invariance, and agreement of
//! the two negativity formulas.


use nalgebra::DMatrix;
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nvrotor::states::{
    entanglement_entropy, negativity, negativity_forms, partial_transpose_spin,
    reduce_vector_to_rotor, reduce_vector_to_spin, thermal_state, DensityMatrix,
};
use nvrotor::{BasisSet, CMatrix64, CVector64, FieldHamiltonian, SystemParams};

fn random_vector(rng: &mut StdRng, dim: usize) -> CVector64 {
    let v = CVector64::from_fn(dim, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let n = v.norm();
    v.map(|z| z / Complex::new(n, 0.0))
}

fn random_product(rng: &mut StdRng, rotor_dim: usize) -> CVector64 {
    let rotor = random_vector(rng, rotor_dim);
    let spin = random_vector(rng, 3);
    let mut v = CVector64::zeros(3 * rotor_dim);
    for r in 0..rotor_dim {
        for s in 0..3 {
            v[3 * r + s] = rotor[r] * spin[s];
        }
    }
    v
}

fn random_unitary3(rng: &mut StdRng) -> DMatrix<Complex<f64>> {
    let a = DMatrix::<Complex<f64>>::from_fn(3, 3, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    a.qr().q()
}

#[test]
fn product_states_carry_no_entanglement() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..100 {
        let v = random_product(&mut rng, 45);
        let rho = DensityMatrix::pure(&v, None).unwrap();
        let n = negativity(&rho).unwrap();
        assert!(n.abs() <= 1e-10, "negativity {} on a product state", n);
        let s = entanglement_entropy(&reduce_vector_to_spin(&v).unwrap()).unwrap();
        assert!(s.abs() <= 1e-10, "entropy {} on a product state", s);
    }
}

#[test]
fn maximally_entangled_states_hit_the_bounds() {
    let mut rng = StdRng::seed_from_u64(43);
    let rotor_dim = 25;
    for _ in 0..20 {
        // three orthonormal rotor vectors from a QR factorization
        let a = DMatrix::<Complex<f64>>::from_fn(rotor_dim, 3, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let q = a.qr().q();
        let w = Complex::new(1.0 / 3.0f64.sqrt(), 0.0);
        let mut v = CVector64::zeros(3 * rotor_dim);
        for s in 0..3 {
            for r in 0..rotor_dim {
                v[3 * r + s] += q[(r, s)] * w;
            }
        }
        let rho = DensityMatrix::pure(&v, None).unwrap();
        let n = negativity(&rho).unwrap();
        assert!((n - 1.0).abs() <= 1e-10, "negativity {}", n);
        let s = entanglement_entropy(&reduce_vector_to_spin(&v).unwrap()).unwrap();
        assert!((s - 3.0f64.log2()).abs() <= 1e-10, "entropy {}", s);
    }
}

#[test]
fn schmidt_symmetry_of_pure_states() {
    let mut rng = StdRng::seed_from_u64(47);
    for _ in 0..100 {
        let v = random_vector(&mut rng, 3 * 30);
        let s_spin = entanglement_entropy(&reduce_vector_to_spin(&v).unwrap()).unwrap();
        let s_rotor = entanglement_entropy(&reduce_vector_to_rotor(&v).unwrap()).unwrap();
        assert!(
            (s_spin - s_rotor).abs() <= 1e-10,
            "spin {} vs rotor {}",
            s_spin,
            s_rotor
        );
        assert!(s_spin >= 0.0 && s_spin <= 3.0f64.log2() + 1e-12);
    }
}

#[test]
fn negativity_is_invariant_under_spin_unitaries() {
    let p = SystemParams::default();
    let basis = BasisSet::body(1);
    let fh = FieldHamiltonian::<f64>::new(&basis, &p).unwrap();
    let spec = fh.eigendecompose_at(0.3).unwrap();
    let thermal = thermal_state(&spec, 5e-3, &p).unwrap();
    let pure = DensityMatrix::pure(&spec.state(0), Some(basis.clone())).unwrap();

    let mut rng = StdRng::seed_from_u64(53);
    for rho in [&thermal, &pure] {
        let n0 = negativity(rho).unwrap();
        let rotor_dim = rho.dim() / 3;
        for _ in 0..10 {
            let u = random_unitary3(&mut rng);
            let mut big = CMatrix64::zeros(rho.dim(), rho.dim());
            for r in 0..rotor_dim {
                for s in 0..3 {
                    for sp in 0..3 {
                        big[(3 * r + s, 3 * r + sp)] = u[(s, sp)];
                    }
                }
            }
            let rotated = &big * rho.matrix() * big.adjoint();
            let rotated = DensityMatrix::new(rotated, None).unwrap();
            let n = negativity(&rotated).unwrap();
            assert!(
                (n - n0).abs() <= 1e-10,
                "negativity changed {} -> {}",
                n0,
                n
            );
        }
    }
}

#[test]
fn negativity_formulas_agree_on_mixed_states() {
    let mut rng = StdRng::seed_from_u64(59);
    for _ in 0..20 {
        // random rank-4 mixture
        let dim = 3 * 12;
        let mut mat = CMatrix64::zeros(dim, dim);
        let mut probs = [0.0f64; 4];
        let mut total = 0.0;
        for p in probs.iter_mut() {
            *p = rng.gen_range(0.05..1.0);
            total += *p;
        }
        for p in probs.iter_mut() {
            *p /= total;
        }
        for &p in &probs {
            let v = random_vector(&mut rng, dim);
            mat += (&v * v.adjoint()).map(|z| z * Complex::new(p, 0.0));
        }
        let rho = DensityMatrix::new(mat, None).unwrap();
        let forms = negativity_forms(&rho).unwrap();
        assert!(
            (forms.negative_sum - forms.trace_norm_form).abs() <= 1e-10,
            "{} vs {}",
            forms.negative_sum,
            forms.trace_norm_form
        );
    }
}

#[test]
fn partial_transpose_preserves_trace_and_hermiticity() {
    let mut rng = StdRng::seed_from_u64(61);
    let v = random_vector(&mut rng, 3 * 15);
    let rho = DensityMatrix::pure(&v, None).unwrap();
    let pt = partial_transpose_spin(&rho).unwrap();
    let mut trace = Complex::new(0.0, 0.0);
    for i in 0..pt.nrows() {
        trace += pt[(i, i)];
    }
    assert!((trace.re - 1.0).abs() < 1e-13 && trace.im.abs() < 1e-15);
    let dev = nvrotor::hamiltonian::hermiticity_deviation(&pt);
    assert!(dev < 1e-14);
}

#[test]
fn thermal_negativity_of_near_identity_vanishes() {
    let p = SystemParams::default();
    let basis = BasisSet::body(1);
    let fh = FieldHamiltonian::<f64>::new(&basis, &p).unwrap();
    let spec = fh.eigendecompose_at(0.5).unwrap();
    let rho = thermal_state(&spec, 1e5, &p).unwrap();
    let n = negativity(&rho).unwrap();
    assert!(n <= 1e-6, "negativity {} of a near-identity state", n);
}
