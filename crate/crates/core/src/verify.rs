//! Named verification suites run by `mana-lab verify`.
//!
//! Each suite returns a list of checks with the largest deviation seen and
//! the pair of values where it occurred.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::circuits::{
    beamsplitter, clifford_gate, conjugate_point_ops, dense_pullback, heisenberg_pullback,
    readout_expectation, readout_index, weyl_series, BeamsplitterSpec,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{l1_magic, mana, mutual_mana, purity_bound, sre_alpha};
use crate::oracles::{self, linspace, MagicState, OracleId, Quantity};
use crate::phasespace::{operators, reconstruct, wigner, PrimeDim};
use crate::random::{haar_pure, haar_unitary, random_state, real_unit, rng, StateRng};
use crate::search::{
    default_grid, max_mana_coherent, mutual_mana_coherent_equals_mana, nonlocal_search,
    NonlocalConfig, PhaseVector, DEFAULT_REFINE,
};
use crate::states::{
    basis, enumerate_stabilizer_pure, partial_trace, tensor, DensityState, PureVector, Side,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Thm1,
    Appg,
    WignerAxioms,
    CliffordInvariance,
    Additivity,
    Table1,
    Oracles,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Prop5,
        Suite::Thm1,
        Suite::Appg,
        Suite::WignerAxioms,
        Suite::CliffordInvariance,
        Suite::Additivity,
        Suite::Table1,
        Suite::Oracles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Prop4 => "prop4",
            Suite::Prop5 => "prop5",
            Suite::Thm1 => "thm1",
            Suite::Appg => "appg",
            Suite::WignerAxioms => "wigner-axioms",
            Suite::CliffordInvariance => "clifford-invariance",
            Suite::Additivity => "additivity",
            Suite::Table1 => "table1",
            Suite::Oracles => "oracles",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "suite",
                name: s.into(),
            })
    }
}

/// One verified property: worst deviation and where it happened.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
    pub samples: usize,
    /// `(expected, actual)` at the worst sample.
    pub worst: Option<(f64, f64)>,
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: max deviation {:.3e} (tol {:.1e}, {} samples)",
            self.name, self.max_dev, self.tol, self.samples
        )?;
        if !self.pass {
            if let Some((e, a)) = self.worst {
                write!(f, "; expected {e:.12}, got {a:.12}")?;
            }
        }
        if let Some(note) = &self.note {
            write!(f, "; {note}")?;
        }
        Ok(())
    }
}

/// Accumulates deviations for one [`Check`].
#[derive(Clone, Debug)]
pub struct Tracker {
    name: String,
    tol: f64,
    max_dev: f64,
    samples: usize,
    worst: Option<(f64, f64)>,
    note: Option<String>,
}

impl Tracker {
    pub fn new(name: impl Into<String>, tol: f64) -> Self {
        Self {
            name: name.into(),
            tol,
            max_dev: 0.0,
            samples: 0,
            worst: None,
            note: None,
        }
    }

    /// Records `|expected − actual|`.
    pub fn equal(&mut self, expected: f64, actual: f64) {
        self.record((expected - actual).abs(), expected, actual);
    }

    /// Records how far `value` exceeds `bound` (zero when below).
    pub fn at_most(&mut self, value: f64, bound: f64) {
        self.record((value - bound).max(0.0), bound, value);
    }

    pub fn matrices(&mut self, expected: &ComplexMatrix, actual: &ComplexMatrix) {
        let dev = expected.max_abs_diff(actual);
        self.record(dev, 0.0, dev);
    }

    fn record(&mut self, dev: f64, expected: f64, actual: f64) {
        self.samples += 1;
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        if self.worst.is_none() || dev > self.max_dev {
            self.max_dev = dev;
            self.worst = Some((expected, actual));
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn finish(self) -> Check {
        Check {
            pass: self.max_dev <= self.tol,
            name: self.name,
            max_dev: self.max_dev,
            tol: self.tol,
            samples: self.samples,
            worst: self.worst,
            note: self.note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (trials {}, seed {})",
            self.suite, self.trials, self.seed
        )?;
        for check in &self.checks {
            writeln!(f, "  {check}")?;
        }
        let n_fail = self.failures().count();
        if n_fail == 0 {
            write!(f, "{}: all {} checks passed", self.suite, self.checks.len())
        } else {
            write!(
                f,
                "{}: {n_fail} of {} checks FAILED",
                self.suite,
                self.checks.len()
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Tolerance for checks whose bound is not fixed by the suite itself.
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 42,
            tol: 1e-10,
        }
    }
}

/// Entrywise tolerance for operator identities.
pub const OPERATOR_TOL: f64 = 1e-12;
/// Closed-form comparison tolerance.
pub const ORACLE_TOL: f64 = 1e-9;
/// Grid points per axis for curve comparisons.
pub const CURVE_POINTS: usize = 101;
/// Acceptable offset of a located noise threshold.
pub const THRESHOLD_TOL: f64 = 1e-3;
pub const NONLOCAL_PRODUCT_TOL: f64 = 1e-6;
pub const SUBADDITIVITY_SLACK: f64 = 1e-4;

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut r = rng(opts.seed);
    let checks = match suite {
        Suite::Prop1 => prop1(&mut r, opts)?,
        Suite::Prop2 => prop2()?,
        Suite::Prop3 => prop3(&mut r, opts)?,
        Suite::Prop4 => prop4(&mut r, opts)?,
        Suite::Prop5 => prop5(&mut r, opts)?,
        Suite::Thm1 => thm1(&mut r, opts)?,
        Suite::Appg => appg(&mut r, opts)?,
        Suite::WignerAxioms => wigner_axioms(&mut r, opts)?,
        Suite::CliffordInvariance => clifford_invariance(&mut r, opts)?,
        Suite::Additivity => additivity(&mut r, opts)?,
        Suite::Table1 => table1()?,
        Suite::Oracles => oracle_suite(&mut r)?,
    };
    Ok(SuiteReport {
        suite,
        trials: opts.trials,
        seed: opts.seed,
        checks,
    })
}

fn dim(d: u64) -> PrimeDim {
    PrimeDim::new(d).expect("odd prime")
}

fn prop1(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d in [3usize, 5] {
        let mut t = Tracker::new(format!("mana <= purity bound (d={d})"), opts.tol);
        for _ in 0..opts.trials {
            let rho = random_state(r, &[d]);
            t.at_most(mana(&rho)?, purity_bound(&rho));
        }
        checks.push(t.finish());
    }
    Ok(checks)
}

/// Side-b Weyl series with the index pattern `D_{−γm, gβn} ⊗ D_{−δm, −gαn}`.
pub fn negated_side_b_series(
    spec: &BeamsplitterSpec,
    pt: crate::phasespace::PhasePoint,
) -> ComplexMatrix {
    let d = spec.dim();
    let [[a, b], [c, dd]] = spec.matrix().map(|row| row.map(|x| x as i64));
    let g = spec.g() as i64;
    weyl_series(d, pt, |m, n| {
        (d.point(-c * m, g * b * n), d.point(-dd * m, -g * a * n))
    })
}

/// Side-b population index `k(gβ)^{-1}` without the sign.
pub fn unsigned_side_b_index(spec: &BeamsplitterSpec, k: usize) -> Result<usize> {
    if !spec.beta_delta_nonzero() {
        return Err(Error::BetaDeltaZero);
    }
    let d = spec.dim();
    let gb = d.reduce(spec.g() as i64 * spec.matrix()[0][1] as i64);
    Ok(d.reduce(k as i64 * d.inv(gb as i64).expect("nonzero") as i64))
}

fn prop2() -> Result<Vec<Check>> {
    let d3 = dim(3);
    let ops = operators(d3);
    let mut index_map = Tracker::new("B_G (A ⊗ A) B_G† index map", OPERATOR_TOL);
    let mut side_a = Tracker::new("side a Weyl series", OPERATOR_TOL);
    let mut side_b = Tracker::new("side b Weyl series", OPERATOR_TOL);
    let mut unsigned_b = Tracker::new("side b Weyl series, negated index pattern", OPERATOR_TOL)
        .note("equals the pullback of A_{-k,-l}");
    for spec in BeamsplitterSpec::qutrit_family() {
        let bs = beamsplitter(&spec);
        for p1 in d3.points() {
            for p2 in d3.points() {
                let dense = ops.point_ops[p1.index(d3)]
                    .kron(&ops.point_ops[p2.index(d3)])
                    .conjugate_by(&bs);
                let (q1, q2) = conjugate_point_ops(&spec, p1, p2);
                let mapped = ops.point_ops[q1.index(d3)].kron(&ops.point_ops[q2.index(d3)]);
                index_map.matrices(&dense, &mapped);
            }
            side_a.matrices(
                &dense_pullback(&spec, Side::A, p1),
                &heisenberg_pullback(&spec, Side::A, p1),
            );
            let dense_b = dense_pullback(&spec, Side::B, p1);
            side_b.matrices(&dense_b, &heisenberg_pullback(&spec, Side::B, p1));
            unsigned_b.matrices(&dense_b, &negated_side_b_series(&spec, p1));
        }
    }
    Ok(vec![
        index_map.finish(),
        side_a.finish(),
        side_b.finish(),
        unsigned_b.finish(),
    ])
}

fn prop3(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let d3 = dim(3);
    let mut side_a = Tracker::new("side a reads rho_{j0 j0}", opts.tol);
    let mut side_b = Tracker::new("side b reads rho_{j1 j1}, j1 = -k(g beta)^-1", opts.tol);
    let mut unsigned_b = Tracker::new("side b reads rho_{j1 j1}, j1 = k(g beta)^-1", opts.tol);
    let specs: Vec<BeamsplitterSpec> = BeamsplitterSpec::qutrit_family()
        .into_iter()
        .filter(|s| s.beta_delta_nonzero())
        .collect();
    for _ in 0..opts.trials {
        let rho = random_state(r, &[3]);
        let pop = |j: usize| rho.matrix()[(j, j)].re;
        for spec in &specs {
            for pt in d3.points() {
                let a = readout_expectation(&rho, spec, Side::A, pt)?;
                side_a.equal(pop(readout_index(spec, Side::A, pt.k)?), a);
                let b = readout_expectation(&rho, spec, Side::B, pt)?;
                side_b.equal(pop(readout_index(spec, Side::B, pt.k)?), b);
                unsigned_b.equal(pop(unsigned_side_b_index(spec, pt.k)?), b);
            }
        }
    }
    Ok(vec![side_a.finish(), side_b.finish(), unsigned_b.finish()])
}

fn random_local_clifford(r: &mut StateRng, d: PrimeDim) -> Result<ComplexMatrix> {
    let names = ["z", "phase", "fourier"];
    let mut u = ComplexMatrix::identity(d.get());
    for _ in 0..4 {
        let g = clifford_gate(d, names[r.random_range(0..names.len())])?;
        u = &g * &u;
    }
    Ok(u)
}

fn prop4(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let d3 = dim(3);
    let mut product = Tracker::new("mutual mana of product states is 0", opts.tol);
    let mut local = Tracker::new("mutual mana invariant under local Clifford", opts.tol);
    for _ in 0..opts.trials {
        let rho = tensor(&random_state(r, &[3]), &random_state(r, &[3]));
        product.equal(0.0, mutual_mana(&rho)?);
        let joint = random_state(r, &[3, 3]);
        let u = random_local_clifford(r, d3)?.kron(&random_local_clifford(r, d3)?);
        local.equal(mutual_mana(&joint)?, mutual_mana(&joint.evolve(&u)?)?);
    }
    Ok(vec![product.finish(), local.finish()])
}

/// Beamsplitters with βδ ≠ 0 used for a dimension.
fn applicable_specs(d: PrimeDim) -> Result<Vec<BeamsplitterSpec>> {
    if d.get() == 3 {
        return Ok(BeamsplitterSpec::qutrit_family()
            .into_iter()
            .filter(|s| s.beta_delta_nonzero())
            .collect());
    }
    let n = d.get() as i64;
    let mut specs = vec![BeamsplitterSpec::csum(d)];
    for m in [[[1, 2], [3, 1]], [[2, 1], [1, 3]], [[0, 1], [n - 1, 2]]] {
        let spec = BeamsplitterSpec::new(d, m)?;
        if spec.beta_delta_nonzero() {
            specs.push(spec);
        }
    }
    Ok(specs)
}

fn prop5(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d in [3u64, 5] {
        let pd = dim(d);
        let half_log = 0.5 * (d as f64).ln();
        let mut equal = Tracker::new(
            format!("mutual mana of B_G output = Mana (d={d})"),
            opts.tol,
        );
        let mut bound = Tracker::new(format!("mutual mana <= (1/2) ln d (d={d})"), opts.tol);
        let specs = applicable_specs(pd)?;
        for _ in 0..opts.trials {
            let thetas: Vec<f64> = (1..d).map(|_| r.random::<f64>() * TAU).collect();
            let theta = PhaseVector::new(pd, thetas)?;
            for spec in &specs {
                let (mutual, m) = mutual_mana_coherent_equals_mana(pd, &theta, spec)?;
                equal.equal(m, mutual);
                bound.at_most(mutual, half_log);
            }
        }
        let search = max_mana_coherent(pd, default_grid(pd), DEFAULT_REFINE)?;
        let attain_tol = if d == 3 { 1e-8 } else { 1e-6 };
        let mut attain = Tracker::new(
            format!("maximum over phases attains (1/2) ln d (d={d})"),
            attain_tol,
        );
        attain.equal(half_log, search.best_value);
        checks.extend([
            equal.finish(),
            bound.finish(),
            attain
                .note(format!("search best {:.10}", search.best_value))
                .finish(),
        ]);
    }
    Ok(checks)
}

fn thm1(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let d3 = dim(3);
    let specs = applicable_specs(d3)?;
    let bss: Vec<ComplexMatrix> = specs.iter().map(beamsplitter).collect();
    let zero = DensityState::pure(&basis(3, 0))?;
    let mut equal = Tracker::new("mutual mana of output = Mana(rho)", opts.tol);
    let mut marginals = Tracker::new("output marginals have zero mana", opts.tol);
    for _ in 0..opts.trials {
        let rho = random_state(r, &[3]);
        let m = mana(&rho)?;
        let input = tensor(&rho, &zero);
        for bs in &bss {
            let out = input.evolve(bs)?;
            equal.equal(m, mutual_mana(&out)?);
            for side in [Side::A, Side::B] {
                marginals.at_most(mana(&partial_trace(&out, side)?)?, 0.0);
            }
        }
    }
    Ok(vec![equal.finish(), marginals.finish()])
}

fn haar_product(r: &mut StateRng) -> Result<DensityState> {
    let psi: PureVector = haar_pure(r, 3).kron(&haar_pure(r, 3));
    DensityState::from_pure(&psi, &[3, 3])
}

fn appg(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let full = NonlocalConfig {
        seed: opts.seed,
        ..NonlocalConfig::default()
    };
    let light = NonlocalConfig {
        restarts: 8,
        ..full
    };

    let mut product = Tracker::new("pure product states reach 0", NONLOCAL_PRODUCT_TOL);
    for _ in 0..opts.trials.min(20) {
        product.at_most(nonlocal_search(&haar_product(r)?, &full)?.value, 0.0);
    }

    let stabs = enumerate_stabilizer_pure(dim(3))?;
    let csum = beamsplitter(&BeamsplitterSpec::csum(dim(3)));
    let mut stab = Tracker::new("stabilizer inputs stop at the initial value", opts.tol);
    for i in 0..opts.trials.min(stabs.len() * stabs.len()) {
        let (s, t) = (&stabs[i % stabs.len()], &stabs[(i * 5 + 1) % stabs.len()]);
        let mut rho = DensityState::from_pure(&s.kron(t), &[3, 3])?;
        if i % 2 == 1 {
            rho = rho.evolve(&csum)?;
        }
        let res = nonlocal_search(&rho, &full)?;
        stab.at_most(res.value, 0.0);
        stab.at_most(res.evaluations as f64, 1.0);
    }

    let mut upper = Tracker::new("upper bound <= Mana(rho_ab)", 1e-12);
    let mut invariance = Tracker::new("local unitary rotation does not raise the bound", opts.tol)
        .note("bound of V rho V† against Mana(V rho V†) and the bound of rho");
    for _ in 0..opts.trials.min(10) {
        let rho = random_state(r, &[3, 3]);
        upper.at_most(nonlocal_search(&rho, &light)?.value, mana(&rho)?);
        let v = haar_unitary(r, 3).kron(&haar_unitary(r, 3));
        let rotated = rho.evolve(&v)?;
        invariance.at_most(nonlocal_search(&rotated, &light)?.value, mana(&rotated)?);
    }

    let mut sub = Tracker::new("subadditivity on tensor pairs", SUBADDITIVITY_SLACK);
    for _ in 0..opts.trials.min(10) {
        let rho = DensityState::from_pure(&haar_pure(r, 9), &[3, 3])?;
        let sigma = DensityState::from_pure(&haar_pure(r, 9), &[3, 3])?;
        let joint = tensor(&rho, &sigma);
        let parts = nonlocal_search(&rho, &light)?.value + nonlocal_search(&sigma, &light)?.value;
        sub.at_most(nonlocal_search(&joint, &light)?.value, parts);
    }
    Ok(vec![
        product.finish(),
        stab.finish(),
        upper.finish(),
        invariance.finish(),
        sub.finish(),
    ])
}

fn wigner_axioms(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let d3 = dim(3);
    let ops = operators(d3);
    let mut real = Tracker::new("realness", opts.tol);
    let mut norm = Tracker::new("normalization", opts.tol);
    let mut roundtrip = Tracker::new("reconstruction roundtrip", opts.tol);
    let mut covariance = Tracker::new("displacement covariance", opts.tol);
    let mut hudson = Tracker::new("stabilizer states are nonnegative", opts.tol);

    let stabs: Vec<DensityState> = enumerate_stabilizer_pure(d3)?
        .iter()
        .map(DensityState::pure)
        .collect::<Result<_>>()?;
    let randoms: Vec<DensityState> = (0..opts.trials).map(|_| random_state(r, &[3])).collect();
    for (i, rho) in stabs.iter().chain(&randoms).enumerate() {
        for a in &ops.point_ops {
            real.at_most(rho.matrix().trace_product(a).im.abs() / 3.0, 0.0);
        }
        let w = wigner(rho)?;
        norm.equal(1.0, w.sum());
        let back = reconstruct(&w)?;
        roundtrip.matrices(rho.matrix(), back.matrix());
        for pt in d3.points() {
            let moved = rho.evolve(&ops.weyl_ops[pt.index(d3)])?;
            let expected = w.displaced(pt.k as i64, pt.l as i64);
            let got = wigner(&moved)?;
            for (e, g) in expected.values().iter().zip(got.values()) {
                covariance.equal(*e, *g);
            }
        }
        if i < stabs.len() {
            hudson.at_most(0.0, w.min());
        }
    }
    Ok(vec![
        real.finish(),
        norm.finish(),
        roundtrip.finish(),
        covariance.finish(),
        hudson.finish(),
    ])
}

fn clifford_invariance(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let d3 = dim(3);
    let mut checks = Vec::new();
    let single: Vec<(String, ComplexMatrix)> = ["z", "phase", "fourier"]
        .iter()
        .map(|g| Ok((g.to_string(), clifford_gate(d3, g)?)))
        .collect::<Result<_>>()?;
    let pair: Vec<(String, ComplexMatrix)> = BeamsplitterSpec::qutrit_family()
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("B_G{}", i + 1), beamsplitter(s)))
        .collect();
    for (gates, dims) in [(single, vec![3usize]), (pair, vec![3, 3])] {
        for (name, u) in gates {
            let mut m = Tracker::new(format!("mana under {name}"), opts.tol);
            let mut s = Tracker::new(format!("SRE2 under {name}"), opts.tol);
            let mut l = Tracker::new(format!("L1 magic under {name}"), opts.tol);
            for _ in 0..opts.trials {
                let rho = random_state(r, &dims);
                let out = rho.evolve(&u)?;
                m.equal(mana(&rho)?, mana(&out)?);
                s.equal(sre_alpha(&rho, 2.0)?, sre_alpha(&out, 2.0)?);
                l.equal(l1_magic(&rho)?, l1_magic(&out)?);
            }
            checks.extend([m.finish(), s.finish(), l.finish()]);
        }
    }
    Ok(checks)
}

fn additivity(r: &mut StateRng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut m = Tracker::new("mana additive on tensor pairs", opts.tol);
    let mut s = Tracker::new("SRE2 additive on tensor pairs", opts.tol);
    let mut l = Tracker::new("L1 magic multiplicative on tensor pairs", opts.tol);
    let mut convex = Tracker::new("mana convex on mixtures", opts.tol);
    for i in 0..opts.trials {
        let db = if i % 2 == 0 { 3 } else { 5 };
        let a = random_state(r, &[3]);
        let b = random_state(r, &[db]);
        let ab = tensor(&a, &b);
        m.equal(mana(&a)? + mana(&b)?, mana(&ab)?);
        s.equal(
            sre_alpha(&a, 2.0)? + sre_alpha(&b, 2.0)?,
            sre_alpha(&ab, 2.0)?,
        );
        l.equal(l1_magic(&a)?.ln() + l1_magic(&b)?.ln(), l1_magic(&ab)?.ln());
        let c = random_state(r, &[3]);
        let lambda: f64 = r.random();
        convex.at_most(
            mana(&a.mix(&c, lambda)?)?,
            lambda * mana(&a)? + (1.0 - lambda) * mana(&c)?,
        );
    }
    Ok(vec![m.finish(), s.finish(), l.finish(), convex.finish()])
}

fn compare(t: &mut Tracker, id: OracleId) -> Result<()> {
    let cmp = oracles::oracle_vs_numeric(&id, f64::INFINITY)?;
    t.equal(cmp.closed, cmp.numeric);
    Ok(())
}

fn table1() -> Result<Vec<Check>> {
    let grid = linspace(0.0, 1.0, CURVE_POINTS);
    let mut checks = Vec::new();
    for quantity in Quantity::ALL {
        for state in MagicState::ALL {
            let mut t = Tracker::new(format!("table cell {quantity} / {state}"), ORACLE_TOL);
            for &p in &grid {
                compare(&mut t, OracleId::Table1 { quantity, state, p })?;
            }
            checks.push(t.finish());
        }
    }
    Ok(checks)
}

fn oracle_suite(r: &mut StateRng) -> Result<Vec<Check>> {
    let mut ex1 = Tracker::new("ex1 on random real states", 1e-10);
    for _ in 0..200 {
        let mu = real_unit(r, 3);
        compare(
            &mut ex1,
            OracleId::Ex1 {
                mu: [mu[0], mu[1], mu[2]],
                p: r.random(),
            },
        )?;
    }
    let mut ex2 = Tracker::new("ex2 on random phases", 1e-10);
    for _ in 0..200 {
        let (theta1, theta2) = (r.random::<f64>() * TAU, r.random::<f64>() * TAU);
        compare(
            &mut ex2,
            OracleId::Ex2 {
                theta1,
                theta2,
                p: r.random(),
            },
        )?;
    }
    let mut ex3 = Tracker::new("ex3 grid", ORACLE_TOL);
    let mut ex4 = Tracker::new("ex4 grid", ORACLE_TOL);
    for p in linspace(0.0, 1.0, 21) {
        for lambda in linspace(0.0, FRAC_1_SQRT_2, 21) {
            compare(&mut ex3, OracleId::Ex3 { lambda, p })?;
        }
        for theta in linspace(0.0, FRAC_PI_2, 21) {
            compare(&mut ex4, OracleId::Ex4 { theta, p })?;
        }
    }
    let mut checks = vec![ex1.finish(), ex2.finish(), ex3.finish(), ex4.finish()];
    for quantity in Quantity::ALL {
        let mut e5 = Tracker::new(format!("ex5 {quantity} curve"), ORACLE_TOL);
        for lambda in linspace(0.0, FRAC_1_SQRT_2, CURVE_POINTS) {
            compare(&mut e5, OracleId::Ex5 { quantity, lambda })?;
        }
        let mut e6 = Tracker::new(format!("ex6 {quantity} curve"), ORACLE_TOL);
        for theta in linspace(0.0, FRAC_PI_2, CURVE_POINTS) {
            compare(&mut e6, OracleId::Ex6 { quantity, theta })?;
        }
        checks.extend([e5.finish(), e6.finish()]);
    }
    let mut ml1 = Tracker::new("ml1_h curve", ORACLE_TOL);
    let mut msre = Tracker::new("msre2_h curve", ORACLE_TOL);
    for p in linspace(0.0, 1.0, CURVE_POINTS) {
        compare(&mut ml1, OracleId::Ml1H { p })?;
        compare(&mut msre, OracleId::Msre2H { p })?;
    }
    checks.extend([ml1.finish(), msre.finish()]);
    for state in MagicState::ALL {
        let mut t = Tracker::new(format!("p_crit({state})"), THRESHOLD_TOL);
        compare(&mut t, OracleId::PCrit { state })?;
        checks.push(t.finish());
    }
    Ok(checks)
}
