//! Clifford gates and generalized discrete beamsplitters `B_G`.

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, C64};
use crate::phasespace::{operators, weyl, PhasePoint, PrimeDim};
use crate::states::{basis, tensor, DensityState, Side};

/// An invertible 2×2 matrix `G = ((α, β), (γ, δ))` over Z_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BeamsplitterSpec {
    dim: PrimeDim,
    alpha: usize,
    beta: usize,
    gamma: usize,
    delta: usize,
    det: usize,
    g: usize,
}

impl BeamsplitterSpec {
    pub fn new(dim: PrimeDim, m: [[i64; 2]; 2]) -> Result<Self> {
        let [[a, b], [cc, d]] = m;
        let det = dim.reduce(a * d - b * cc);
        let g = dim.inv(det as i64).ok_or(Error::SingularG(dim.get()))?;
        Ok(Self {
            dim,
            alpha: dim.reduce(a),
            beta: dim.reduce(b),
            gamma: dim.reduce(cc),
            delta: dim.reduce(d),
            det,
            g,
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    /// `[[α, β], [γ, δ]]` reduced mod d.
    pub fn matrix(&self) -> [[usize; 2]; 2] {
        [[self.alpha, self.beta], [self.gamma, self.delta]]
    }

    pub fn det(&self) -> usize {
        self.det
    }

    /// `(det G)^{-1} mod d`.
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn beta_delta_nonzero(&self) -> bool {
        self.beta != 0 && self.delta != 0
    }

    /// Controlled-SUM, control on `a`: `G = ((1, d-1), (0, 1))`.
    pub fn csum(dim: PrimeDim) -> Self {
        Self::new(dim, [[1, dim.get() as i64 - 1], [0, 1]]).expect("det 1")
    }

    pub fn swap(dim: PrimeDim) -> Self {
        Self::new(dim, [[0, 1], [1, 0]]).expect("det -1")
    }

    /// The four qutrit matrices G₁…G₄ (G₁ is CSUM₃).
    pub fn qutrit_family() -> [Self; 4] {
        let d3 = PrimeDim::new(3).expect("3 is prime");
        QUTRIT_G.map(|m| Self::new(d3, m).expect("invertible"))
    }

    /// `i`-th qutrit matrix, 1-based.
    pub fn qutrit(i: usize) -> Option<Self> {
        (1..=4).contains(&i).then(|| Self::qutrit_family()[i - 1])
    }

    /// Output computational indices for input `(j₁, j₂)`.
    pub fn map_basis(&self, j1: usize, j2: usize) -> (usize, usize) {
        let d = self.dim;
        let (g, a, b, cc, dd) = (
            self.g as i64,
            self.alpha as i64,
            self.beta as i64,
            self.gamma as i64,
            self.delta as i64,
        );
        let (j1, j2) = (j1 as i64, j2 as i64);
        (
            d.reduce(g * (dd * j1 - cc * j2)),
            d.reduce(g * (a * j2 - b * j1)),
        )
    }
}

pub const QUTRIT_G: [[[i64; 2]; 2]; 4] = [
    [[1, 2], [0, 1]],
    [[1, 0], [2, 1]],
    [[0, 1], [1, 2]],
    [[2, 1], [1, 0]],
];

/// Dense d²×d² permutation matrix of `B_G`.
pub fn beamsplitter(spec: &BeamsplitterSpec) -> ComplexMatrix {
    let d = spec.dim.get();
    let mut m = ComplexMatrix::zeros(d * d);
    for j1 in 0..d {
        for j2 in 0..d {
            let (o1, o2) = spec.map_basis(j1, j2);
            m[(o1 * d + o2, j1 * d + j2)] = c(1.0, 0.0);
        }
    }
    m
}

pub const GATE_NAMES: &[&str] = &["z", "phase", "fourier", "csum", "swap"];

/// Clifford generators. `csum` and `swap` are two-qudit gates.
pub fn clifford_gate(dim: PrimeDim, name: &str) -> Result<ComplexMatrix> {
    let d = dim.get();
    let gate = match name {
        "z" => weyl(dim, dim.point(0, 1)),
        "phase" => {
            let diag: Vec<C64> = (0..d as i64).map(|j| dim.tau_pow(j * j)).collect();
            ComplexMatrix::diagonal(&diag)
        }
        "fourier" => {
            let s = 1.0 / (d as f64).sqrt();
            ComplexMatrix::from_fn(d, |k, j| dim.omega_pow((j * k) as i64) * s)
        }
        "csum" => beamsplitter(&BeamsplitterSpec::csum(dim)),
        "swap" => beamsplitter(&BeamsplitterSpec::swap(dim)),
        other => return Err(Error::UnknownGate(other.into())),
    };
    Ok(gate)
}

/// Weyl index map under `B_G (D_{p1} ⊗ D_{p2}) B_G†`.
pub fn conjugate_weyl(
    spec: &BeamsplitterSpec,
    p1: PhasePoint,
    p2: PhasePoint,
) -> (PhasePoint, PhasePoint) {
    let d = spec.dim;
    let (g, a, b, cc, dd) = (
        spec.g as i64,
        spec.alpha as i64,
        spec.beta as i64,
        spec.gamma as i64,
        spec.delta as i64,
    );
    let (k1, l1, k2, l2) = (p1.k as i64, p1.l as i64, p2.k as i64, p2.l as i64);
    (
        d.point(g * (dd * k1 - cc * k2), a * l1 + b * l2),
        d.point(g * (a * k2 - b * k1), dd * l2 + cc * l1),
    )
}

/// Phase-point operators transform with the same index map as Weyl
/// operators, with no phase.
pub fn conjugate_point_ops(
    spec: &BeamsplitterSpec,
    p1: PhasePoint,
    p2: PhasePoint,
) -> (PhasePoint, PhasePoint) {
    conjugate_weyl(spec, p1, p2)
}

/// `B_G† (A_{k,l} ⊗ 1) B_G` (side a) or `B_G† (1 ⊗ A_{k,l}) B_G` (side b),
/// assembled from its Weyl series
///
/// side a: `(1/d) Σ ω^{lm-kn} D_{αm, gδn} ⊗ D_{βm, -gγn}`
/// side b: `(1/d) Σ ω^{lm-kn} D_{γm, -gβn} ⊗ D_{δm, gαn}`
pub fn heisenberg_pullback(spec: &BeamsplitterSpec, side: Side, pt: PhasePoint) -> ComplexMatrix {
    let d = spec.dim;
    let (g, a, b, cc, dd) = (
        spec.g as i64,
        spec.alpha as i64,
        spec.beta as i64,
        spec.gamma as i64,
        spec.delta as i64,
    );
    weyl_series(d, pt, |m, n| match side {
        Side::A => (d.point(a * m, g * dd * n), d.point(b * m, -g * cc * n)),
        Side::B => (d.point(cc * m, -g * b * n), d.point(dd * m, g * a * n)),
    })
}

/// `(1/d) Σ_{m,n} ω^{lm-kn} D_{f(m,n).0} ⊗ D_{f(m,n).1}`.
pub(crate) fn weyl_series(
    d: PrimeDim,
    pt: PhasePoint,
    f: impl Fn(i64, i64) -> (PhasePoint, PhasePoint),
) -> ComplexMatrix {
    let ops = operators(d);
    let n2 = d.get() * d.get();
    let mut acc = ComplexMatrix::zeros(n2);
    let (k, l) = (pt.k as i64, pt.l as i64);
    for m in 0..d.get() as i64 {
        for n in 0..d.get() as i64 {
            let (q1, q2) = f(m, n);
            let term = ops.weyl_ops[q1.index(d)].kron(&ops.weyl_ops[q2.index(d)]);
            acc = &acc + &term.scale(d.omega_pow(l * m - k * n));
        }
    }
    acc.scale_re(1.0 / d.get() as f64)
}

/// Dense `B_G† (A ⊗ 1) B_G` / `B_G† (1 ⊗ A) B_G`.
pub fn dense_pullback(spec: &BeamsplitterSpec, side: Side, pt: PhasePoint) -> ComplexMatrix {
    let d = spec.dim.get();
    let a = operators(spec.dim).point_ops[pt.index(spec.dim)].clone();
    let id = ComplexMatrix::identity(d);
    let local = match side {
        Side::A => a.kron(&id),
        Side::B => id.kron(&a),
    };
    let bs = beamsplitter(spec);
    &(&bs.adjoint() * &local) * &bs
}

/// Computational index whose population `tr((ρ⊗|0⟩⟨0|) B_G†(A_{k,l})B_G)`
/// reads out: `k(gδ)^{-1}` on side a, `-k(gβ)^{-1}` on side b.
pub fn readout_index(spec: &BeamsplitterSpec, side: Side, k: usize) -> Result<usize> {
    if !spec.beta_delta_nonzero() {
        return Err(Error::BetaDeltaZero);
    }
    let d = spec.dim;
    let (g, k) = (spec.g as i64, k as i64);
    let idx = match side {
        Side::A => k * d.inv(g * spec.delta as i64).expect("nonzero") as i64,
        Side::B => -k * d.inv(g * spec.beta as i64).expect("nonzero") as i64,
    };
    Ok(d.reduce(idx))
}

/// `tr((ρ ⊗ |0⟩⟨0|) B_G† (A_{k,l} on side) B_G)` by dense evaluation.
pub fn readout_expectation(
    rho: &DensityState,
    spec: &BeamsplitterSpec,
    side: Side,
    pt: PhasePoint,
) -> Result<f64> {
    if !spec.beta_delta_nonzero() {
        return Err(Error::BetaDeltaZero);
    }
    if rho.subsystems() != 1 || rho.dims()[0] != spec.dim.get() {
        return Err(Error::DimensionMismatch(
            "expected a single qudit of the beamsplitter dimension".into(),
        ));
    }
    let zero = DensityState::pure(&basis(spec.dim.get(), 0))?;
    let input = tensor(rho, &zero);
    Ok(input
        .matrix()
        .trace_product(&dense_pullback(spec, side, pt))
        .re)
}
