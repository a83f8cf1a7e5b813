//! Problem files and the shorthand accepted by command-line flags.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use translates::applications::interpolation::Factor;
use translates::config::{build_kernels, FieldConfig, KernelConfig};
use translates::fields::{Field, Weight};
use translates::gallery::Example;
use translates::kernels::Kernel;
use translates::solver::SolveConfig;

/// Everything a command may read from a problem file. Flags override the
/// corresponding entries.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    /// One record per node, or a single record repeated `n` times.
    pub kernels: Vec<KernelConfig>,
    pub n: Option<usize>,
    pub field: Option<FieldConfig>,
    /// Node system for `eval`, `maxima` and `phi`.
    pub y: Option<Vec<f64>>,
    /// Target of `solve`.
    pub target: Option<Vec<f64>>,
    /// Starting point of `solve`.
    pub start: Option<Vec<f64>>,
    pub interpolation: Option<InterpolationBlock>,
    pub bojanov: Option<BojanovBlock>,
    pub solver: SolveConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterpolationBlock {
    pub factors: Vec<Factor>,
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    /// Weight of the moving-node problem.
    pub weight: Option<Weight>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BojanovBlock {
    pub nu: Vec<f64>,
    /// Weight on `interval`.
    pub weight: Weight,
    pub interval: [f64; 2],
}

impl Default for BojanovBlock {
    fn default() -> Self {
        BojanovBlock {
            nu: Vec::new(),
            weight: Weight::Constant { value: 1.0 },
            interval: [0.0, 1.0],
        }
    }
}

impl ProblemConfig {
    pub fn load(path: Option<&Path>) -> Result<ProblemConfig> {
        let Some(path) = path else {
            return Ok(ProblemConfig::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Kernel records with single records expanded to `n` copies.
    pub fn resolved_kernels(&self) -> Result<Vec<KernelConfig>> {
        let list = match (self.kernels.len(), self.n) {
            (_, Some(0)) => bail!("n must be at least 1"),
            (0, _) => bail!("no kernels given"),
            (1, Some(n)) => vec![self.kernels[0].clone(); n],
            (k, Some(n)) if k != n => bail!("{k} kernels given but n = {n}"),
            _ => self.kernels.clone(),
        };
        Ok(list)
    }

    pub fn build_kernels(&self) -> Result<Vec<Kernel>> {
        Ok(build_kernels(&self.resolved_kernels()?)?)
    }

    pub fn build_field(&self) -> Result<Field> {
        Ok(self.field.clone().unwrap_or(FieldConfig::Zero).build()?)
    }

    /// Replaces kernels and field by those of a built-in example.
    pub fn use_example(&mut self, ex: Example) {
        let (kernel, field) = match ex {
            Example::Kinked => (KernelConfig::Kinked, FieldConfig::Kinked),
            Example::Jump => (KernelConfig::Sqrt, FieldConfig::Jump),
            Example::Plateau => (KernelConfig::Reciprocal, FieldConfig::Plateau),
        };
        self.kernels = vec![kernel];
        self.n = Some(1);
        self.field = Some(field);
    }

    /// Makes the resolved kernel list explicit so that the hash does not
    /// depend on how it was written.
    pub fn normalize(&mut self) -> Result<()> {
        if !self.kernels.is_empty() || self.n.is_some() {
            self.kernels = self.resolved_kernels()?;
            self.n = Some(self.kernels.len());
        }
        Ok(())
    }
}

pub fn parse_example(s: &str) -> Result<Example, String> {
    match s {
        "kinked" => Ok(Example::Kinked),
        "jump" => Ok(Example::Jump),
        "plateau" => Ok(Example::Plateau),
        _ => Err(format!("unknown example {s:?}; expected kinked, jump or plateau")),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("not a number: {v:?}")))
        .collect()
}

fn parse_parts(spec: &str, parts: &[&str], names: &[&str]) -> Result<Vec<f64>> {
    ensure!(parts.len() <= names.len(), "too many parameters in {spec:?}");
    parts
        .iter()
        .zip(names)
        .map(|(p, name)| {
            p.parse::<f64>()
                .with_context(|| format!("{name} in {spec:?} is not a number"))
        })
        .collect()
}

/// `log[:ν]`, `sine[:ν[:a]]`, `sqrt`, `kinked`, `reciprocal`, or a JSON
/// kernel record.
pub fn parse_kernel(spec: &str) -> Result<KernelConfig> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return serde_json::from_str(spec).with_context(|| format!("parsing kernel {spec}"));
    }
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    Ok(match name {
        "log" => {
            let p = parse_parts(spec, &rest, &["nu"])?;
            KernelConfig::Log {
                nu: p.first().copied().unwrap_or(1.0),
            }
        }
        "sine" | "sin" => {
            let p = parse_parts(spec, &rest, &["nu", "a"])?;
            KernelConfig::Sine {
                nu: p.first().copied().unwrap_or(1.0),
                a: p.get(1).copied().unwrap_or(1.0),
            }
        }
        "sqrt" if rest.is_empty() => KernelConfig::Sqrt,
        "kinked" if rest.is_empty() => KernelConfig::Kinked,
        "reciprocal" if rest.is_empty() => KernelConfig::Reciprocal,
        _ => bail!("unknown kernel {spec:?}"),
    })
}

/// Comma-separated kernels; JSON records may not be mixed with commas.
pub fn parse_kernels(spec: &str) -> Result<Vec<KernelConfig>> {
    if spec.trim_start().starts_with('[') {
        return serde_json::from_str(spec).with_context(|| format!("parsing kernels {spec}"));
    }
    spec.split(',').map(parse_kernel).collect()
}

/// `zero`, `kinked`, `jump`, `plateau`, `jacobi:a:b[:scale]`,
/// `discrete:x;x;…`, or a JSON field record.
pub fn parse_field(spec: &str) -> Result<FieldConfig> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return serde_json::from_str(spec).with_context(|| format!("parsing field {spec}"));
    }
    if let Some(points) = spec.strip_prefix("discrete:") {
        let points = points
            .split(';')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("not a number: {v:?}")))
            .collect::<Result<Vec<f64>>>()?;
        return Ok(FieldConfig::Discrete { points, values: None });
    }
    if spec.starts_with("jacobi") {
        return Ok(FieldConfig::LogWeight {
            weight: parse_weight(spec)?,
            cusp_at_0: false,
            cusp_at_1: false,
        });
    }
    Ok(match spec {
        "zero" => FieldConfig::Zero,
        "kinked" => FieldConfig::Kinked,
        "jump" => FieldConfig::Jump,
        "plateau" => FieldConfig::Plateau,
        _ => bail!("unknown field {spec:?}"),
    })
}

/// A number (constant weight), `jacobi:a:b[:scale]`, or a JSON weight
/// record.
pub fn parse_weight(spec: &str) -> Result<Weight> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return serde_json::from_str(spec).with_context(|| format!("parsing weight {spec}"));
    }
    if let Ok(value) = spec.parse::<f64>() {
        return Ok(Weight::Constant { value });
    }
    if let Some(rest) = spec.strip_prefix("jacobi:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let p = parse_parts(spec, &parts, &["a", "b", "scale"])?;
        ensure!(p.len() >= 2, "jacobi weight needs both exponents: {spec:?}");
        return Ok(Weight::Jacobi {
            scale: p.get(2).copied().unwrap_or(1.0),
            a: p[0],
            b: p[1],
        });
    }
    bail!("unknown weight {spec:?}")
}

/// `t`, `t^ν`, `sin`, `sin^ν`, `sin(a)` or `sin(a)^ν`.
pub fn parse_factor(spec: &str) -> Result<Factor> {
    let spec = spec.trim();
    let (base, nu) = match spec.split_once('^') {
        Some((b, e)) => (
            b,
            e.parse::<f64>().with_context(|| format!("bad exponent in {spec:?}"))?,
        ),
        None => (spec, 1.0),
    };
    if base == "t" {
        return Ok(Factor::Power { nu });
    }
    if base == "sin" {
        return Ok(Factor::Sine { nu, a: 1.0 });
    }
    if let Some(a) = base.strip_prefix("sin(").and_then(|r| r.strip_suffix(')')) {
        let a = a.parse::<f64>().with_context(|| format!("bad frequency in {spec:?}"))?;
        return Ok(Factor::Sine { nu, a });
    }
    bail!("unknown factor {spec:?}; expected t, t^nu, sin, sin(a) or sin(a)^nu")
}

pub fn parse_factors(spec: &str) -> Result<Vec<Factor>> {
    spec.split(',').map(parse_factor).collect()
}
