//! Strict JSON configuration files for machines and kernels.
//!
//! Quantities are plain numbers in base units (FLOP/s, bytes/s, bytes);
//! unknown keys are rejected and every error names the offending field.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::mlp::{data_parallel_profile, AllReduceAlgorithm, AllReduceModel, LayerSpec, MlpSpec};
use crate::model::{KernelProfile, MachineSpec};

/// A configuration problem located by a dotted field path (`.` for the root).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| ConfigError::at(e.path().to_string(), e.inner()))?;
    de.end().map_err(|e| ConfigError::at(".", e))?;
    Ok(value)
}

fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value)
        .map_err(|e| ConfigError::at(e.path().to_string(), e.inner()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineConfig {
    pub name: String,
    pub peak_flops: f64,
    pub mem_bw: f64,
    pub net_bw: f64,
}

impl From<&MachineSpec> for MachineConfig {
    fn from(m: &MachineSpec) -> Self {
        Self {
            name: m.name().to_owned(),
            peak_flops: m.peak_flops(),
            mem_bw: m.mem_bw(),
            net_bw: m.net_bw(),
        }
    }
}

pub fn parse_machine_config(text: &str) -> Result<MachineSpec, ConfigError> {
    let c: MachineConfig = from_json(text)?;
    MachineSpec::new(c.name, c.peak_flops, c.mem_bw, c.net_bw).map_err(|e| match e {
        ModelError::InvalidMachine { field, reason } => ConfigError::at(field, reason),
        other => ConfigError::at(".", other),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllReduceName {
    Ring,
    Ideal,
    Factor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllReduceConfig {
    pub algorithm: AllReduceName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<f64>,
}

impl Default for AllReduceConfig {
    fn default() -> Self {
        Self {
            algorithm: AllReduceName::Ideal,
            factor: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    #[serde(rename = "in")]
    pub in_features: u64,
    #[serde(rename = "out")]
    pub out_features: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub flops: f64,
    pub mem_bytes: f64,
    pub net_bytes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlpConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub layers: Vec<LayerConfig>,
    pub dtype_bytes: u32,
    /// Global batch, split evenly across `nodes`.
    pub batch: u64,
    #[serde(default = "one")]
    pub nodes: u64,
    #[serde(default)]
    pub allreduce: AllReduceConfig,
}

/// On-disk kernel description, selected by the `kind` key.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelConfig {
    Raw(RawConfig),
    Mlp(MlpConfig),
}

impl KernelConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let mut value: serde_json::Value = from_json(text)?;
        let object = value
            .as_object_mut()
            .ok_or_else(|| ConfigError::at(".", "expected a JSON object"))?;
        let kind = object
            .remove("kind")
            .ok_or_else(|| ConfigError::at(".", "missing field `kind`"))?;
        match kind.as_str() {
            Some("raw") => from_value(value).map(KernelConfig::Raw),
            Some("mlp") => from_value(value).map(KernelConfig::Mlp),
            Some(other) => Err(ConfigError::at(
                "kind",
                format!("unknown kind `{other}`, expected `raw` or `mlp`"),
            )),
            None => Err(ConfigError::at("kind", "expected a string")),
        }
    }
}

/// Data-parallel MLP training resolved from a `kind: mlp` config.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpKernel {
    pub mlp: MlpSpec,
    pub batch: u64,
    pub allreduce: AllReduceModel,
}

impl MlpKernel {
    pub fn profile_at(&self, batch: u64) -> crate::Result<KernelProfile> {
        data_parallel_profile(&self.mlp, batch, &self.allreduce)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Raw {
        name: String,
        profile: KernelProfile,
    },
    Mlp {
        name: String,
        spec: MlpKernel,
    },
}

impl Kernel {
    pub fn name(&self) -> &str {
        match self {
            Kernel::Raw { name, .. } | Kernel::Mlp { name, .. } => name,
        }
    }

    pub fn profile(&self) -> crate::Result<KernelProfile> {
        match self {
            Kernel::Raw { profile, .. } => Ok(*profile),
            Kernel::Mlp { spec, .. } => spec.profile_at(spec.batch),
        }
    }
}

fn profile_error(e: ModelError) -> ConfigError {
    match e {
        ModelError::InvalidProfile { field, reason } => ConfigError::at(field, reason),
        other => ConfigError::at(".", other),
    }
}

pub fn parse_kernel_config(text: &str) -> Result<Kernel, ConfigError> {
    match KernelConfig::from_json(text)? {
        KernelConfig::Raw(RawConfig {
            name,
            flops,
            mem_bytes,
            net_bytes,
        }) => {
            let profile = KernelProfile::new(flops, mem_bytes, net_bytes).map_err(profile_error)?;
            Ok(Kernel::Raw {
                name: name.unwrap_or_else(|| "kernel".to_owned()),
                profile,
            })
        }
        KernelConfig::Mlp(MlpConfig {
            name,
            layers,
            dtype_bytes,
            batch,
            nodes,
            allreduce,
        }) => {
            let layers: Vec<LayerSpec> = layers
                .iter()
                .map(|l| LayerSpec::new(l.in_features, l.out_features))
                .collect();
            let mlp = MlpSpec::new(layers, dtype_bytes).map_err(|e| match e {
                ModelError::InvalidDtype(_) => ConfigError::at("dtype_bytes", e),
                other => ConfigError::at("layers", other),
            })?;
            let algorithm = match (allreduce.algorithm, allreduce.factor) {
                (AllReduceName::Ring, None) => AllReduceAlgorithm::Ring,
                (AllReduceName::Ideal, None) => AllReduceAlgorithm::Ideal,
                (AllReduceName::Factor, Some(c)) => AllReduceAlgorithm::Factor(c),
                (AllReduceName::Factor, None) => {
                    return Err(ConfigError::at(
                        "allreduce.factor",
                        "required when algorithm is `factor`",
                    ))
                }
                (_, Some(_)) => {
                    return Err(ConfigError::at(
                        "allreduce.factor",
                        "only allowed when algorithm is `factor`",
                    ))
                }
            };
            let allreduce = AllReduceModel::new(algorithm, nodes).map_err(|e| {
                let path = if nodes == 0 {
                    "nodes"
                } else {
                    "allreduce.factor"
                };
                ConfigError::at(path, e)
            })?;
            if batch == 0 {
                return Err(ConfigError::at("batch", "must be at least 1"));
            }
            if !batch.is_multiple_of(nodes) {
                return Err(ConfigError::at(
                    "batch",
                    ModelError::IndivisibleBatch { batch, nodes },
                ));
            }
            Ok(Kernel::Mlp {
                name: name.unwrap_or_else(|| "mlp".to_owned()),
                spec: MlpKernel {
                    mlp,
                    batch,
                    allreduce,
                },
            })
        }
    }
}
