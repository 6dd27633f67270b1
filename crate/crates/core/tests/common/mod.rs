//! Reference implementations written directly from the operator
//! definitions, kept separate from the library's contraction code.

#![allow(dead_code)]

use std::f64::consts::PI;

use mana_lab::linalg::{ComplexMatrix, C64};
use mana_lab::states::DensityState;

fn omega(d: usize, a: i64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * a.rem_euclid(d as i64) as f64 / d as f64)
}

/// `τ^b` with `τ = −e^{iπ/d}`.
fn tau(d: usize, b: i64) -> C64 {
    let b = b.rem_euclid(2 * d as i64);
    C64::from_polar(1.0, PI * b as f64 / d as f64) * if b % 2 == 0 { 1.0 } else { -1.0 }
}

/// `D_{k,l} = τ^{kl} X^k Z^l` with `X^k Z^l |j⟩ = ω^{lj} |j+k⟩`.
pub fn weyl(d: usize, k: i64, l: i64) -> ComplexMatrix {
    let (k, l) = (k.rem_euclid(d as i64), l.rem_euclid(d as i64));
    let phase = tau(d, k * l);
    ComplexMatrix::from_fn(d, |row, col| {
        if (col as i64 + k).rem_euclid(d as i64) == row as i64 {
            phase * omega(d, l * col as i64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `(A_{k,l})_{m,n} = [m + n ≡ 2k] ω^{l(m−n)}`.
pub fn point_op(d: usize, k: i64, l: i64) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |m, n| {
        if (m as i64 + n as i64 - 2 * k).rem_euclid(d as i64) == 0 {
            omega(d, l * (m as i64 - n as i64))
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn tuples(dims: &[usize]) -> Vec<Vec<(i64, i64)>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..d as i64 {
                for l in 0..d as i64 {
                    let mut t = prefix.clone();
                    t.push((k, l));
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

fn kron_all(ops: Vec<ComplexMatrix>) -> ComplexMatrix {
    ops.into_iter()
        .reduce(|a, b| a.kron(&b))
        .expect("at least one factor")
}

/// Wigner values in `(k₁, l₁, k₂, l₂, …)` row-major order.
pub fn wigner(rho: &DensityState) -> Vec<f64> {
    let dims = rho.dims();
    let norm: f64 = dims.iter().map(|&d| d as f64).product();
    tuples(&dims)
        .into_iter()
        .map(|t| {
            let a = kron_all(
                t.iter()
                    .zip(&dims)
                    .map(|(&(k, l), &d)| point_op(d, k, l))
                    .collect(),
            );
            rho.matrix().trace_product(&a).re / norm
        })
        .collect()
}

pub fn mana(rho: &DensityState) -> f64 {
    wigner(rho).iter().map(|w| w.abs()).sum::<f64>().ln()
}

/// `|tr(ρ D)|²` over every Weyl representative.
pub fn weyl_weights(rho: &DensityState) -> Vec<f64> {
    let dims = rho.dims();
    tuples(&dims)
        .into_iter()
        .map(|t| {
            let p = kron_all(
                t.iter()
                    .zip(&dims)
                    .map(|(&(k, l), &d)| weyl(d, k, l))
                    .collect(),
            );
            rho.matrix().trace_product(&p).norm_sqr()
        })
        .collect()
}

/// `ln(Σ tr²(ρP) / Σ tr⁴(ρP))` of the whole state.
pub fn global_sre2_ratio(rho: &DensityState) -> f64 {
    let w = weyl_weights(rho);
    let q2: f64 = w.iter().sum();
    let q4: f64 = w.iter().map(|x| x * x).sum();
    (q2 / q4).ln()
}

pub fn purity(rho: &DensityState) -> f64 {
    let m = rho.matrix();
    m.trace_product(m).re
}
