//! Scheme descriptors such as `mprk32`, `mprk43ab(0.9,0.6)` or `mpdec(5,gl)`.

use std::fmt;
use std::str::FromStr;

use patankar::mpdec::{MpdecConfig, NodeKind};
use patankar::schemes::{Mprk43GammaParams, Mprk43Params, Scheme};
use patankar::stability::{
    stability_mprk32, stability_mprk43ab, stability_mprk43g, MpdecMode, MpdecStability, StabilityFunction,
    StageRecursion,
};

use crate::error::CliError;

/// A scheme family together with its parameters, before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSpec {
    Mpe,
    Mprk32,
    Mprk43ab { alpha: f64, beta: f64 },
    Mprk43g { gamma: f64 },
    Mpdec { order: usize, nodes: NodeKind },
}

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 2.0 / 3.0;
pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_ORDER: usize = 5;
pub const DEFAULT_NODES: NodeKind = NodeKind::GaussLobatto;

/// Parameters supplied by flags, used where a descriptor leaves them out.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParamDefaults {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub order: Option<usize>,
    pub nodes: Option<NodeKind>,
}

/// Families accepted on the command line with a one-line summary each.
pub const FAMILIES: [(&str, &str); 5] = [
    ("mpe", "modified Patankar Euler, order 1"),
    ("mprk32", "three-stage modified Patankar Runge-Kutta, order 2"),
    ("mprk43ab(alpha,beta)", "two-parameter third order family; defaults alpha = 1/2, beta = 2/3"),
    ("mprk43g(gamma)", "one-parameter third order family, 3/8 <= gamma <= 3/4; default 1/2"),
    ("mpdec(p,nodes)", "deferred correction of order p = 1..14, nodes equi or gl; default 5, gl"),
];

impl SchemeSpec {
    /// Parses a descriptor, taking missing parameters from `defaults`.
    pub fn parse(text: &str, defaults: &ParamDefaults) -> Result<Self, CliError> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(open) => {
                let inner = text[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| CliError::Config(format!("unbalanced parentheses in scheme `{text}`")))?;
                let args: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                (&text[..open], args)
            }
            None => (text, Vec::new()),
        };
        let name = name.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let num = |i: usize, fallback: f64| -> Result<f64, CliError> {
            match args.get(i) {
                Some(s) => parse_number(s),
                None => Ok(fallback),
            }
        };
        let arity = |max: usize| -> Result<(), CliError> {
            if args.len() > max {
                Err(CliError::Config(format!("scheme `{text}` takes at most {max} parameter(s)")))
            } else {
                Ok(())
            }
        };
        let spec = match name.as_str() {
            "mpe" | "mpeuler" => {
                arity(0)?;
                Self::Mpe
            }
            "mprk32" | "mprk22" => {
                arity(0)?;
                Self::Mprk32
            }
            "mprk43ab" | "mprk43" => {
                arity(2)?;
                Self::Mprk43ab {
                    alpha: num(0, defaults.alpha.unwrap_or(DEFAULT_ALPHA))?,
                    beta: num(1, defaults.beta.unwrap_or(DEFAULT_BETA))?,
                }
            }
            "mprk43g" | "mprk43gamma" => {
                arity(1)?;
                Self::Mprk43g { gamma: num(0, defaults.gamma.unwrap_or(DEFAULT_GAMMA))? }
            }
            "mpdec" => {
                arity(2)?;
                let order = match args.first() {
                    Some(s) => s.parse().map_err(|_| CliError::Config(format!("invalid MPDeC order `{s}`")))?,
                    None => defaults.order.unwrap_or(DEFAULT_ORDER),
                };
                let nodes = match args.get(1) {
                    Some(s) => parse_nodes(s)?,
                    None => defaults.nodes.unwrap_or(DEFAULT_NODES),
                };
                Self::Mpdec { order, nodes }
            }
            _ => return Err(CliError::Config(format!("unknown scheme `{text}`; try `list-schemes`"))),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<Scheme<f64>, CliError> {
        let s = match *self {
            Self::Mpe => Scheme::Mpe,
            Self::Mprk32 => Scheme::Mprk32,
            Self::Mprk43ab { alpha, beta } => Scheme::Mprk43(Mprk43Params::new(alpha, beta).map_err(CliError::config)?),
            Self::Mprk43g { gamma } => Scheme::Mprk43Gamma(Mprk43GammaParams::new(gamma).map_err(CliError::config)?),
            Self::Mpdec { order, nodes } => Scheme::Mpdec(MpdecConfig::new(order, nodes).map_err(CliError::config)?),
        };
        Ok(s)
    }

    /// Linear stability function of the scheme.
    pub fn stability(&self, mode: MpdecMode) -> Result<Box<dyn StabilityFunction<f64> + Send + Sync>, CliError> {
        Ok(match *self {
            Self::Mpe => Box::new(StageRecursion::<f64>::mpe()),
            Self::Mprk32 => Box::new(stability_mprk32::<f64>().normalized()),
            Self::Mprk43ab { alpha, beta } => {
                Mprk43Params::new(alpha, beta).map_err(CliError::config)?;
                Box::new(stability_mprk43ab(alpha, beta).map_err(CliError::config)?)
            }
            Self::Mprk43g { gamma } => {
                Mprk43GammaParams::new(gamma).map_err(CliError::config)?;
                Box::new(stability_mprk43g::<f64>())
            }
            Self::Mpdec { order, nodes } => {
                let cfg = MpdecConfig::new(order, nodes).map_err(CliError::config)?;
                Box::new(MpdecStability::new(&cfg, mode))
            }
        })
    }

    /// File-name friendly label.
    pub fn slug(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
            .collect::<String>()
            .trim_end_matches('_')
            .to_string()
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mpe => write!(f, "mpe"),
            Self::Mprk32 => write!(f, "mprk32"),
            Self::Mprk43ab { alpha, beta } => write!(f, "mprk43ab({alpha},{beta})"),
            Self::Mprk43g { gamma } => write!(f, "mprk43g({gamma})"),
            Self::Mpdec { order, nodes } => write!(f, "mpdec({order},{nodes})"),
        }
    }
}

/// Accepts decimals and simple fractions such as `2/3`.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("invalid number `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

pub fn parse_nodes(s: &str) -> Result<NodeKind, CliError> {
    NodeKind::from_str(s).map_err(CliError::config)
}
