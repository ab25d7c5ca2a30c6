//! Seeded random matrices and states for sampling and property tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;
use super::state::{BlochVector, DensityMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n).hermitian_part()
}

/// `G G†` for a Ginibre `G`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    (&g * &g.adjoint()).hermitian_part()
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Haar-random pure state vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let v = random_pure_vector(rng, n);
    DensityMatrix::new(ComplexMatrix::outer(&v, &v)).expect("pure state is a valid density matrix")
}

/// Hilbert–Schmidt random mixed state.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let m = random_psd(rng, n);
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("normalized PSD matrix is a valid state")
}

/// Random probability vector (flat Dirichlet).
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random diagonal state.
pub fn random_diagonal_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    DensityMatrix::diagonal(&random_probabilities(rng, n)).expect("probabilities form a state")
}

/// Uniform sample from the Bloch ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let dir = random_direction(rng);
    let r = rng.random::<f64>().cbrt();
    BlochVector::new(r * dir[0], r * dir[1], r * dir[2]).expect("inside unit ball")
}

/// Uniform direction on the unit sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
