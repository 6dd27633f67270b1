//! Seeded random states and unitaries for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, ComplexMatrix, C64};
use crate::phasespace::PrimeDim;
use crate::states::{DensityState, PureVector};

pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state in C^n.
pub fn haar_pure(rng: &mut impl Rng, n: usize) -> PureVector {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    PureVector::normalized(v).expect("gaussian vector is nonzero")
}

/// Random real unit vector in R^n.
pub fn real_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Ginibre-induced mixed state of rank `rank` on `Π dims`.
pub fn ginibre_state(rng: &mut impl Rng, dims: &[usize], rank: usize) -> DensityState {
    let n: usize = dims.iter().product();
    let g: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..rank).map(|_| gaussian(rng)).collect())
        .collect();
    let mut m = ComplexMatrix::from_fn(n, |i, j| (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum());
    let tr = m.trace().re;
    m = m.scale_re(1.0 / tr);
    // Exact Hermitian symmetrization against roundoff.
    let herm = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let pd = dims
        .iter()
        .map(|&d| PrimeDim::new(d as u64).expect("odd prime"))
        .collect();
    DensityState::from_parts(pd, herm).expect("shape is consistent")
}

/// Mixed state with a random rank in `1..=n`, sometimes pure.
pub fn random_state(rng: &mut impl Rng, dims: &[usize]) -> DensityState {
    let n: usize = dims.iter().product();
    let rank = rng.random_range(1..=n);
    ginibre_state(rng, dims, rank)
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = haar_pure(&mut rng(9), 5);
        let b = haar_pure(&mut rng(9), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn ginibre_states_validate() {
        let mut r = rng(1);
        for _ in 0..20 {
            let s = random_state(&mut r, &[3, 3]);
            DensityState::new(s.dims(), s.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(&mut rng(3), 7);
        assert!((&u * &u.adjoint()).approx_eq(&ComplexMatrix::identity(7), 1e-12));
    }
}
