//! Serializable descriptions of kernels and fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::fields::{
    make_discrete_field, make_jump_field, make_kinked_field, make_log_weight_field, make_piecewise_field,
    make_plateau_field, make_sampled_field, make_zero_field, Field, FieldPiece, Weight,
};
use crate::kernels::{
    make_kinked_log_kernel, make_log_kernel, make_piecewise_kernel, make_reciprocal_kernel, make_sine_kernel,
    make_sqrt_kernel, Kernel, KernelPiece,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelConfig {
    Log {
        #[serde(default = "one")]
        nu: f64,
    },
    Sine {
        #[serde(default = "one")]
        nu: f64,
        #[serde(default = "one")]
        a: f64,
    },
    Sqrt,
    Piecewise {
        pieces: Vec<KernelPiece>,
        #[serde(default)]
        strictly_concave: bool,
        #[serde(default)]
        pm_constant: Option<f64>,
    },
    Kinked,
    Reciprocal,
}

fn one() -> f64 {
    1.0
}

impl KernelConfig {
    pub fn build(&self) -> Result<Kernel> {
        match self {
            KernelConfig::Log { nu } => make_log_kernel(*nu),
            KernelConfig::Sine { nu, a } => make_sine_kernel(*nu, *a),
            KernelConfig::Sqrt => Ok(make_sqrt_kernel()),
            KernelConfig::Piecewise {
                pieces,
                strictly_concave,
                pm_constant,
            } => make_piecewise_kernel(pieces.clone(), *strictly_concave, *pm_constant),
            KernelConfig::Kinked => Ok(make_kinked_log_kernel()),
            KernelConfig::Reciprocal => Ok(make_reciprocal_kernel()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    Zero,
    Discrete {
        points: Vec<f64>,
        #[serde(default)]
        values: Option<Vec<f64>>,
    },
    #[serde(alias = "logweight")]
    LogWeight {
        weight: Weight,
        #[serde(default)]
        cusp_at_0: bool,
        #[serde(default)]
        cusp_at_1: bool,
    },
    Piecewise {
        pieces: Vec<FieldPiece>,
        #[serde(default)]
        cusp_at_0: bool,
        #[serde(default)]
        cusp_at_1: bool,
    },
    Sampled {
        points: Vec<f64>,
        values: Vec<ExtReal>,
    },
    Kinked,
    Jump,
    Plateau,
}

impl FieldConfig {
    pub fn build(&self) -> Result<Field> {
        match self {
            FieldConfig::Zero => Ok(make_zero_field()),
            FieldConfig::Discrete { points, values } => {
                let zeros = vec![0.0; points.len()];
                make_discrete_field(points, values.as_deref().unwrap_or(&zeros))
            }
            FieldConfig::LogWeight {
                weight,
                cusp_at_0,
                cusp_at_1,
            } => Ok(make_log_weight_field(weight)?.with_cusp_hints(*cusp_at_0, *cusp_at_1)),
            FieldConfig::Piecewise {
                pieces,
                cusp_at_0,
                cusp_at_1,
            } => Ok(make_piecewise_field(pieces.clone())?.with_cusp_hints(*cusp_at_0, *cusp_at_1)),
            FieldConfig::Sampled { points, values } => {
                let raw: Vec<f64> = values.iter().map(|v| v.to_f64()).collect();
                make_sampled_field(points, &raw)
            }
            FieldConfig::Kinked => Ok(make_kinked_field()),
            FieldConfig::Jump => Ok(make_jump_field()),
            FieldConfig::Plateau => Ok(make_plateau_field()),
        }
    }
}

/// Builds every kernel of a list.
pub fn build_kernels(configs: &[KernelConfig]) -> Result<Vec<Kernel>> {
    if configs.is_empty() {
        return Err(Error::InvalidParameter("at least one kernel is required".into()));
    }
    configs.iter().map(KernelConfig::build).collect()
}
