//! Scalar magic and correlation measures. All logarithms are natural;
//! [`LogBase`] converts at the reporting boundary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasespace::{local_expectations, wigner, Family};
use crate::search::{nonlocal_search, NonlocalConfig};
use crate::states::{partial_trace, DensityState, Side, EIGEN_FLOOR};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    /// Re-expresses a natural-log quantity in this base.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
            LogBase::Ten => nats / std::f64::consts::LN_10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "e" | "natural" | "ln" => Ok(LogBase::Natural),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(format!("unknown log base `{other}` (expected e, 2 or 10)")),
        }
    }
}

/// `ln Σ|W_ρ|`.
pub fn mana(rho: &DensityState) -> Result<f64> {
    Ok(wigner(rho)?.abs_sum().ln())
}

/// Total weight of the negative Wigner entries.
pub fn sum_negativity(rho: &DensityState) -> Result<f64> {
    Ok(wigner(rho)?.sum_negativity())
}

/// `½ ln(D·tr ρ²)` with D the total dimension; an upper bound on mana.
pub fn purity_bound(rho: &DensityState) -> f64 {
    let total = rho.matrix().dim() as f64;
    0.5 * (total * rho.purity()).ln()
}

fn marginals(rho_ab: &DensityState) -> Result<(DensityState, DensityState)> {
    Ok((
        partial_trace(rho_ab, Side::A)?,
        partial_trace(rho_ab, Side::B)?,
    ))
}

/// `Mana(ρ_ab) − Mana(ρ_a) − Mana(ρ_b)`.
pub fn mutual_mana(rho_ab: &DensityState) -> Result<f64> {
    let (a, b) = marginals(rho_ab)?;
    Ok(mana(rho_ab)? - mana(&a)? - mana(&b)?)
}

/// `|tr(ρ ⊗_s D_{p_s})|` over every Weyl representative.
fn weyl_spectrum(rho: &DensityState) -> Result<Vec<f64>> {
    let dims = rho.prime_dims()?;
    Ok(local_expectations(rho.matrix(), &dims, Family::Weyl)
        .iter()
        .map(|c| c.norm())
        .collect())
}

/// Stabilizer α-Rényi entropy
/// `1/(1−α) ln Σ_P (|tr ρP|² / (D tr ρ²))^α − ln D`.
pub fn sre_alpha(rho: &DensityState, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(Error::AlphaOne);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha = {alpha} must be positive"
        )));
    }
    let total = rho.matrix().dim() as f64;
    let norm = total * rho.purity();
    let moment: f64 = weyl_spectrum(rho)?
        .iter()
        .map(|a| (a * a / norm).powf(alpha))
        .sum();
    Ok(moment.ln() / (1.0 - alpha) - total.ln())
}

pub fn mutual_sre(rho_ab: &DensityState, alpha: f64) -> Result<f64> {
    let (a, b) = marginals(rho_ab)?;
    Ok(sre_alpha(rho_ab, alpha)? - sre_alpha(&a, alpha)? - sre_alpha(&b, alpha)?)
}

/// `Σ |tr(ρ D)|` over the Weyl representatives (no logarithm).
pub fn l1_magic(rho: &DensityState) -> Result<f64> {
    Ok(weyl_spectrum(rho)?.iter().sum())
}

/// `ln M(ρ_ab) − ln M(ρ_a) − ln M(ρ_b)` for the L¹ magic M.
pub fn mutual_l1(rho_ab: &DensityState) -> Result<f64> {
    let (a, b) = marginals(rho_ab)?;
    Ok(l1_magic(rho_ab)?.ln() - l1_magic(&a)?.ln() - l1_magic(&b)?.ln())
}

pub fn von_neumann_entropy(rho: &DensityState) -> Result<f64> {
    let mut s = 0.0;
    for ev in rho.matrix().eigvalsh() {
        if ev < EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(ev));
        }
        if ev > 0.0 {
            s -= ev * ev.ln();
        }
    }
    Ok(s.max(0.0))
}

/// `S(ρ_a) + S(ρ_b) − S(ρ_ab)`.
pub fn mutual_information(rho_ab: &DensityState) -> Result<f64> {
    let (a, b) = marginals(rho_ab)?;
    Ok(von_neumann_entropy(&a)? + von_neumann_entropy(&b)? - von_neumann_entropy(rho_ab)?)
}

/// Smallest mana found over sampled local-unitary orbits of `rho_ab`.
/// Never exceeds `mana(rho_ab)` since the identity is always a candidate.
pub fn nonlocal_mana_upper(rho_ab: &DensityState, restarts: usize, seed: u64) -> Result<f64> {
    if rho_ab.subsystems() != 2 {
        return Err(Error::NotBipartite(rho_ab.subsystems()));
    }
    let config = NonlocalConfig {
        restarts,
        seed,
        ..NonlocalConfig::default()
    };
    Ok(nonlocal_search(rho_ab, &config)?.value)
}

/// Measures selectable by name in a [`MeasureReport`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureKind {
    Mana,
    SumNegativity,
    PurityBound,
    MutualMana,
    Sre(f64),
    MutualSre(f64),
    L1,
    MutualL1,
    Entropy,
    MutualInformation,
    NonlocalMana,
}

impl MeasureKind {
    /// Report key; L¹ yields two keys, the raw sum and its logarithm.
    pub fn name(self) -> String {
        match self {
            MeasureKind::Mana => "mana".into(),
            MeasureKind::SumNegativity => "sum_negativity".into(),
            MeasureKind::PurityBound => "purity_bound".into(),
            MeasureKind::MutualMana => "mutual_mana".into(),
            MeasureKind::Sre(a) => format!("sre{a}"),
            MeasureKind::MutualSre(a) => format!("mutual_sre{a}"),
            MeasureKind::L1 => "l1".into(),
            MeasureKind::MutualL1 => "mutual_l1".into(),
            MeasureKind::Entropy => "entropy".into(),
            MeasureKind::MutualInformation => "mutual_information".into(),
            MeasureKind::NonlocalMana => "nonlocal_mana".into(),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let alpha = |rest: &str| -> std::result::Result<f64, String> {
            rest.parse::<f64>()
                .map_err(|_| format!("bad Renyi order in `{s}`"))
        };
        Ok(match s {
            "mana" => MeasureKind::Mana,
            "sum_negativity" | "negativity" => MeasureKind::SumNegativity,
            "purity_bound" => MeasureKind::PurityBound,
            "mutual_mana" | "mmana" => MeasureKind::MutualMana,
            "l1" => MeasureKind::L1,
            "mutual_l1" | "ml1" => MeasureKind::MutualL1,
            "entropy" => MeasureKind::Entropy,
            "mutual_information" | "mi" => MeasureKind::MutualInformation,
            "nonlocal_mana" | "nonlocal" => MeasureKind::NonlocalMana,
            _ => {
                if let Some(rest) = s
                    .strip_prefix("mutual_sre")
                    .or_else(|| s.strip_prefix("msre"))
                {
                    MeasureKind::MutualSre(alpha(rest)?)
                } else if let Some(rest) = s.strip_prefix("sre") {
                    MeasureKind::Sre(alpha(rest)?)
                } else {
                    return Err(format!("unknown measure `{s}`"));
                }
            }
        })
    }
}

/// Named measure values for one state, all logarithms in `base`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub state_id: String,
    pub base: LogBase,
    /// In request order; serialized as a JSON object.
    #[serde(serialize_with = "as_map")]
    pub values: Vec<(String, f64)>,
}

fn as_map<S: serde::Serializer>(
    values: &[(String, f64)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(values.iter().map(|(k, v)| (k, v)))
}

fn insert(values: &mut Vec<(String, f64)>, name: String, value: f64) {
    if !values.iter().any(|(k, _)| *k == name) {
        values.push((name, value));
    }
}

/// Restarts and seed used when a report asks for nonlocal mana.
#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub base: LogBase,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            base: LogBase::Natural,
            restarts: 32,
            seed: 42,
        }
    }
}

impl MeasureReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn compute(
        state_id: &str,
        rho: &DensityState,
        kinds: &[MeasureKind],
        opts: ReportOptions,
    ) -> Result<Self> {
        let base = opts.base;
        let mut values = Vec::new();
        for &kind in kinds {
            let logged = |v: f64| base.convert(v);
            match kind {
                MeasureKind::Mana => {
                    insert(&mut values, kind.name(), logged(mana(rho)?));
                }
                MeasureKind::SumNegativity => {
                    insert(&mut values, kind.name(), sum_negativity(rho)?);
                }
                MeasureKind::PurityBound => {
                    insert(&mut values, kind.name(), logged(purity_bound(rho)));
                }
                MeasureKind::MutualMana => {
                    insert(&mut values, kind.name(), logged(mutual_mana(rho)?));
                }
                MeasureKind::Sre(a) => {
                    insert(&mut values, kind.name(), logged(sre_alpha(rho, a)?));
                }
                MeasureKind::MutualSre(a) => {
                    insert(&mut values, kind.name(), logged(mutual_sre(rho, a)?));
                }
                MeasureKind::L1 => {
                    let raw = l1_magic(rho)?;
                    insert(&mut values, "l1".into(), raw);
                    insert(&mut values, "log_l1".into(), logged(raw.ln()));
                }
                MeasureKind::MutualL1 => {
                    insert(&mut values, kind.name(), logged(mutual_l1(rho)?));
                }
                MeasureKind::Entropy => {
                    insert(&mut values, kind.name(), logged(von_neumann_entropy(rho)?));
                }
                MeasureKind::MutualInformation => {
                    insert(&mut values, kind.name(), logged(mutual_information(rho)?));
                }
                MeasureKind::NonlocalMana => {
                    let v = nonlocal_mana_upper(rho, opts.restarts, opts.seed)?;
                    insert(&mut values, kind.name(), logged(v));
                }
            }
        }
        Ok(Self {
            state_id: state_id.into(),
            base,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{beamsplitter, BeamsplitterSpec};
    use crate::phasespace::PrimeDim;
    use crate::random::{random_state, rng};
    use crate::states::{
        basis, enumerate_stabilizer_pure, named_state, noisy_mix, tensor, PureVector,
    };

    fn d3() -> PrimeDim {
        PrimeDim::new(3).unwrap()
    }

    fn csum_out(psi: &PureVector) -> DensityState {
        let input = DensityState::from_pure(&psi.kron(&basis(3, 0)), &[3, 3]).unwrap();
        input
            .evolve(&beamsplitter(&BeamsplitterSpec::csum(d3())))
            .unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_mana() {
        let rho = DensityState::maximally_mixed(&[3]).unwrap();
        assert!(mana(&rho).unwrap().abs() < 1e-12);
        assert!(purity_bound(&rho).abs() < 1e-12);
        assert!((l1_magic(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strange_and_t_state_mana() {
        let s = DensityState::pure(&named_state("strange", &[]).unwrap()).unwrap();
        assert!((mana(&s).unwrap() - (5.0f64 / 3.0).ln()).abs() < 1e-12);
        let t = DensityState::pure(&named_state("t", &[]).unwrap()).unwrap();
        let expect = ((1.0 + 4.0 * (std::f64::consts::PI / 9.0).cos()) / 3.0).ln();
        assert!((mana(&t).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_states_are_free() {
        for psi in enumerate_stabilizer_pure(d3()).unwrap() {
            let rho = DensityState::pure(&psi).unwrap();
            assert!(mana(&rho).unwrap().abs() < 1e-12);
            assert!(sre_alpha(&rho, 2.0).unwrap().abs() < 1e-12);
            assert!((l1_magic(&rho).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn t_state_l1() {
        let t = DensityState::pure(&named_state("t", &[]).unwrap()).unwrap();
        assert!((l1_magic(&t).unwrap() - (1.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn csum_of_strange_converts_mana() {
        let out = csum_out(&named_state("strange", &[]).unwrap());
        assert!((mutual_mana(&out).unwrap() - (5.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn entangled_zero_mutual_mana() {
        let out = csum_out(&named_state("phi_lambda", &[1.0 / 3f64.sqrt()]).unwrap());
        assert!(mutual_mana(&out).unwrap().abs() < 1e-12);
        assert!(mutual_information(&out).unwrap() > 1.0);
    }

    #[test]
    fn qubit_like_superposition_values() {
        let out = csum_out(&named_state("psi_theta", &[std::f64::consts::FRAC_PI_4]).unwrap());
        let ln2 = 2f64.ln();
        assert!((sre_alpha(&out, 2.0).unwrap() - ln2).abs() < 1e-12);
        // Each marginal is diag(1/2, 1/2, 0): Weyl spectrum {1, 1/2, 1/2}.
        let marginal = -(1.5f64).ln();
        let a = partial_trace(&out, Side::A).unwrap();
        assert!((sre_alpha(&a, 2.0).unwrap() - marginal).abs() < 1e-12);
        assert!((mutual_sre(&out, 2.0).unwrap() - (ln2 - 2.0 * marginal)).abs() < 1e-12);
        assert!((mutual_information(&out).unwrap() - 2.0 * ln2).abs() < 1e-12);
    }

    #[test]
    fn noisy_csum_outputs() {
        let zero = DensityState::pure(&basis(3, 0)).unwrap();
        let csum = beamsplitter(&BeamsplitterSpec::csum(d3()));
        let t = named_state("t", &[]).unwrap();
        let out = tensor(&noisy_mix(&t, 1.0).unwrap(), &zero)
            .evolve(&csum)
            .unwrap();
        assert!((sre_alpha(&out, 2.0).unwrap() - (9.0f64 / 5.0).ln()).abs() < 1e-12);
        // Maximally mixed marginals sit at -ln 3.
        assert!(
            (mutual_sre(&out, 2.0).unwrap() - ((9.0f64 / 5.0).ln() + 2.0 * 3f64.ln())).abs()
                < 1e-12
        );
        assert!((mutual_information(&out).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-10);

        let s = named_state("strange", &[]).unwrap();
        for (p, l1) in [(0.0, 3f64.ln()), (1.0, (15.0f64 / 4.0).ln())] {
            let out = tensor(&noisy_mix(&s, p).unwrap(), &zero)
                .evolve(&csum)
                .unwrap();
            assert!((mutual_l1(&out).unwrap() - l1).abs() < 1e-12);
        }
    }

    #[test]
    fn product_states_have_no_mutual_quantities() {
        let mut r = rng(5);
        for _ in 0..10 {
            let a = random_state(&mut r, &[3]);
            let b = random_state(&mut r, &[3]);
            let ab = tensor(&a, &b);
            assert!(mutual_mana(&ab).unwrap().abs() < 1e-10);
            assert!(mutual_sre(&ab, 2.0).unwrap().abs() < 1e-10);
            assert!(mutual_sre(&ab, 0.5).unwrap().abs() < 1e-10);
            assert!(mutual_l1(&ab).unwrap().abs() < 1e-10);
            assert!(mutual_information(&ab).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn alpha_one_rejected() {
        let rho = DensityState::maximally_mixed(&[3]).unwrap();
        assert_eq!(sre_alpha(&rho, 1.0), Err(Error::AlphaOne));
        assert!(sre_alpha(&rho, -1.0).is_err());
    }

    #[test]
    fn mutual_measures_need_two_parties() {
        let rho = DensityState::maximally_mixed(&[3]).unwrap();
        assert_eq!(mutual_mana(&rho), Err(Error::NotBipartite(1)));
        assert_eq!(nonlocal_mana_upper(&rho, 1, 0), Err(Error::NotBipartite(1)));
    }

    #[test]
    fn log_base_conversion() {
        assert!((LogBase::Two.convert(2f64.ln()) - 1.0).abs() < 1e-15);
        assert!((LogBase::Ten.convert(10f64.ln()) - 1.0).abs() < 1e-15);
        assert_eq!("10".parse::<LogBase>().unwrap(), LogBase::Ten);
        assert!("3".parse::<LogBase>().is_err());
    }

    #[test]
    fn report_parses_and_converts() {
        let kinds: Vec<MeasureKind> = ["mana", "l1", "sre2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(kinds[2], MeasureKind::Sre(2.0));
        let s = DensityState::pure(&named_state("strange", &[]).unwrap()).unwrap();
        let opts = ReportOptions {
            base: LogBase::Two,
            ..ReportOptions::default()
        };
        let r = MeasureReport::compute("strange", &s, &kinds, opts).unwrap();
        assert!((r.get("mana").unwrap() - (5.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!(r.get("log_l1").is_some());
        assert!("bogus".parse::<MeasureKind>().is_err());
    }
}
