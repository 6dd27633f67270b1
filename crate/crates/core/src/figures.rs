//! CSV data behind the landscape and comparison plots.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{mutual_mana, LogBase};
use crate::oracles::{csum_output, linspace, numeric_quantity, MagicState, Quantity};
use crate::states::{named_state, PureVector};

/// Points per axis on every figure grid.
pub const FIGURE_POINTS: usize = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Mutual mana over (p, λ).
    Fig1,
    /// Mutual mana over (p, θ).
    Fig2,
    /// Four quantifiers along λ.
    Fig3a,
    /// Four quantifiers along θ.
    Fig3b,
    /// Four quantifiers along p for one input state.
    Fig4(MagicState),
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4(MagicState::S),
        FigureId::Fig4(MagicState::N),
        FigureId::Fig4(MagicState::T),
        FigureId::Fig4(MagicState::H),
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4(MagicState::S) => "fig4a",
            FigureId::Fig4(MagicState::N) => "fig4b",
            FigureId::Fig4(MagicState::T) => "fig4c",
            FigureId::Fig4(MagicState::H) => "fig4d",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "figure",
                name: s.into(),
            })
    }
}

/// A numeric table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Csv {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureOptions {
    pub base: LogBase,
    /// Measure values with magnitude at or below this are written as 0.
    pub zero_tol: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            base: LogBase::Natural,
            zero_tol: 1e-10,
        }
    }
}

impl FigureOptions {
    fn finish(&self, nats: f64) -> f64 {
        if nats.abs() <= self.zero_tol {
            0.0
        } else {
            self.base.convert(nats)
        }
    }
}

fn phi(lambda: f64) -> Result<PureVector> {
    named_state("phi_lambda", &[lambda.min(FRAC_1_SQRT_2)])
}

fn psi(theta: f64) -> Result<PureVector> {
    named_state("psi_theta", &[theta])
}

fn landscape(
    axis: &str,
    hi: f64,
    state: fn(f64) -> Result<PureVector>,
    opts: &FigureOptions,
) -> Result<Csv> {
    let ps = linspace(0.0, 1.0, FIGURE_POINTS);
    let xs = linspace(0.0, hi, FIGURE_POINTS);
    let cells: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| xs.iter().map(move |&x| (p, x)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(p, x)| {
            Ok(vec![
                p,
                x,
                opts.finish(mutual_mana(&csum_output(&state(x)?, p)?)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Csv {
        header: vec!["p".into(), axis.into(), Quantity::Mana.label().into()],
        rows,
    })
}

fn curves(
    axis: &str,
    xs: Vec<f64>,
    state: impl Fn(f64) -> Result<(PureVector, f64)> + Sync,
    opts: &FigureOptions,
) -> Result<Csv> {
    let rows = xs
        .par_iter()
        .map(|&x| {
            let (pure, p) = state(x)?;
            let out = csum_output(&pure, p)?;
            let mut row = vec![x];
            for q in Quantity::ALL {
                row.push(opts.finish(numeric_quantity(q, &out)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec![axis.to_string()];
    header.extend(Quantity::ALL.iter().map(|q| q.label().to_string()));
    Ok(Csv { header, rows })
}

/// Numeric data for `id`, rows in grid order (first axis outermost).
pub fn figure(id: FigureId, opts: &FigureOptions) -> Result<Csv> {
    match id {
        FigureId::Fig1 => landscape("lambda", FRAC_1_SQRT_2, phi, opts),
        FigureId::Fig2 => landscape("theta", FRAC_PI_2, psi, opts),
        FigureId::Fig3a => curves(
            "lambda",
            linspace(0.0, FRAC_1_SQRT_2, FIGURE_POINTS),
            |x| Ok((phi(x)?, 1.0)),
            opts,
        ),
        FigureId::Fig3b => curves(
            "theta",
            linspace(0.0, FRAC_PI_2, FIGURE_POINTS),
            |x| Ok((psi(x)?, 1.0)),
            opts,
        ),
        FigureId::Fig4(state) => {
            let pure = state.pure();
            curves(
                "p",
                linspace(0.0, 1.0, FIGURE_POINTS),
                move |p| Ok((pure.clone(), p)),
                opts,
            )
        }
    }
}
