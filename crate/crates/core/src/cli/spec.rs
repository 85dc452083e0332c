//! JSON model files and the embedded presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inversion::{Backend, InversionOptions};
use crate::mcm::McmOptions;
use crate::qmodel::{LinearModel, QGaussianParams};

/// One model file: the terms of `Y = Σ c_k X_k` plus optional run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcm: Option<McmOptions>,
    /// Default evaluation grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

/// A term with exactly one of `sigma` and the Tsallis rate `beta = 1/(2σ²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub q: f64,
}

/// Inversion options as written in a model file; bounds may be `"support"`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<Bound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<Bound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accelerate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
}

/// A number, or the matching end of the exact support of a bounded model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Value(f64),
    Named(Support),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    Support,
}

/// Explicit values, or `n` equally spaced points from `from` to `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Linspace { from: Bound, to: Bound, n: usize },
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(format!("cannot parse model: {e}")))
    }

    pub fn model(&self) -> Result<LinearModel> {
        if self.terms.is_empty() {
            return Err(Error::InvalidModel("model has no terms".into()));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let named = |e: Error| Error::InvalidModel(format!("term {}: {e}", k + 1));
                let params = match (t.sigma, t.beta) {
                    (Some(s), None) => QGaussianParams::new(t.mu, s, t.q),
                    (None, Some(b)) => QGaussianParams::from_tsallis_beta(t.mu, b, t.q),
                    _ => {
                        return Err(Error::InvalidModel(format!("term {}: give exactly one of sigma and beta", k + 1)))
                    }
                }
                .map_err(named)?;
                Ok((t.coef, params))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearModel::new(terms)
    }

    /// Options with `"support"` bounds resolved against `model`.
    pub fn inversion_options(&self, model: &LinearModel) -> Result<InversionOptions> {
        let d = InversionOptions::default();
        let Some(o) = &self.options else { return Ok(d) };
        let opts = InversionOptions {
            n_points: o.n_points.unwrap_or(d.n_points),
            x_min: o.x_min.map(|b| resolve(b, model, true)).transpose()?,
            x_max: o.x_max.map(|b| resolve(b, model, false)).transpose()?,
            rel_tol: o.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: o.abs_tol.unwrap_or(d.abs_tol),
            backend: o.backend.unwrap_or(d.backend),
            accelerate: o.accelerate.unwrap_or(d.accelerate),
            max_subdivisions: o.max_subdivisions.unwrap_or(d.max_subdivisions),
        };
        opts.validate()?;
        Ok(opts)
    }

    pub fn backend(&self) -> Option<Backend> {
        self.options.as_ref().and_then(|o| o.backend)
    }
}

fn resolve(b: Bound, model: &LinearModel, lower: bool) -> Result<f64> {
    match b {
        Bound::Value(v) => Ok(v),
        Bound::Named(Support::Support) => {
            let (lo, hi) = model
                .bounded_support()
                .ok_or_else(|| Error::InvalidModel("\"support\" bound needs every term to have q < 1".into()))?;
            Ok(if lower { lo } else { hi })
        }
    }
}

impl GridSpec {
    pub fn points(&self, model: &LinearModel) -> Result<Vec<f64>> {
        match self {
            GridSpec::Values(v) => Ok(v.clone()),
            GridSpec::Linspace { from, to, n } => {
                let (a, b) = (resolve(*from, model, true)?, resolve(*to, model, false)?);
                linspace(a, b, *n)
            }
        }
    }

    /// Command-line form: `a:b:n` for a linear grid, or a comma list.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidOptions(format!("grid `{text}` is neither a:b:n nor a comma list"));
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() == 3 {
            let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
            let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
            let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
            return Ok(GridSpec::Linspace { from: Bound::Value(a), to: Bound::Value(b), n });
        }
        parse_list(text).map(GridSpec::Values).map_err(|_| bad())
    }
}

pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidOptions(format!("`{s}` is not a number"))))
        .collect()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(a < b) {
        return Err(Error::InvalidOptions(format!("linear grid needs a < b and n ≥ 2, got {a}:{b}:{n}")));
    }
    Ok((0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect())
}

pub struct Preset {
    pub name: &'static str,
    pub json: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset { name: "example1", json: include_str!("../../presets/example1.json") },
    Preset { name: "example2", json: include_str!("../../presets/example2.json") },
    Preset { name: "example3", json: include_str!("../../presets/example3.json") },
    Preset { name: "example4", json: include_str!("../../presets/example4.json") },
];

pub fn preset(name: &str) -> Result<ModelSpec> {
    let p = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::InvalidOptions(format!("unknown preset `{name}`; try `qcf preset list`")))?;
    ModelSpec::from_json(p.json)
}
