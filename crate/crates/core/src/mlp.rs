//! Kernel profiles for dense layers trained with data parallelism.
//!
//! Every phase of a fully connected layer reduces to one GEMM. Memory traffic
//! counts each operand read once and the result written once; bias additions,
//! activation functions, transposes and weight updates are ignored.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{
    intensities, project, BottleneckReport, IntensityPoint, KernelProfile, MachineSpec,
};

/// Profile of an `m x k` by `k x n` matrix product with `dtype_bytes`-byte
/// elements.
pub fn gemm_profile(m: u64, n: u64, k: u64, dtype_bytes: u32) -> Result<KernelProfile> {
    for (name, value) in [("m", m), ("n", n), ("k", k)] {
        if value == 0 {
            return Err(ModelError::ZeroDimension { name, value });
        }
    }
    let (m, n, k) = (m as f64, n as f64, k as f64);
    let flops = 2.0 * m * n * k;
    let mem_bytes = f64::from(dtype_bytes) * (m * k + k * n + m * n);
    KernelProfile::new(flops, mem_bytes, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Forward,
    ActivationGrad,
    WeightGrad,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Forward, Phase::ActivationGrad, Phase::WeightGrad];

    /// GEMM shape `(m, n, k)` of this phase for one layer.
    fn gemm_shape(self, batch: u64, layer: LayerSpec) -> (u64, u64, u64) {
        let LayerSpec {
            in_features,
            out_features,
        } = layer;
        match self {
            // O = W x I
            Phase::Forward => (batch, out_features, in_features),
            // dI = W^T x dO
            Phase::ActivationGrad => (batch, in_features, out_features),
            // dW = dO^T x I
            Phase::WeightGrad => (out_features, in_features, batch),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Forward => "forward",
            Phase::ActivationGrad => "activation-grad",
            Phase::WeightGrad => "weight-grad",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub in_features: u64,
    pub out_features: u64,
}

impl LayerSpec {
    pub fn new(in_features: u64, out_features: u64) -> Self {
        Self {
            in_features,
            out_features,
        }
    }

    pub fn weight_count(&self) -> u64 {
        self.in_features * self.out_features
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpSpec {
    layers: Vec<LayerSpec>,
    dtype_bytes: u32,
    phases: BTreeSet<Phase>,
}

impl MlpSpec {
    /// Training MLP with all three phases enabled.
    pub fn new(layers: Vec<LayerSpec>, dtype_bytes: u32) -> Result<Self> {
        Self::with_phases(layers, dtype_bytes, Phase::ALL)
    }

    pub fn with_phases(
        layers: Vec<LayerSpec>,
        dtype_bytes: u32,
        phases: impl IntoIterator<Item = Phase>,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(ModelError::NoLayers);
        }
        if !matches!(dtype_bytes, 1 | 2 | 4 | 8) {
            return Err(ModelError::InvalidDtype(dtype_bytes));
        }
        for layer in &layers {
            if layer.in_features == 0 {
                return Err(ModelError::ZeroDimension {
                    name: "in_features",
                    value: 0,
                });
            }
            if layer.out_features == 0 {
                return Err(ModelError::ZeroDimension {
                    name: "out_features",
                    value: 0,
                });
            }
        }
        for (index, pair) in layers.windows(2).enumerate() {
            if pair[0].out_features != pair[1].in_features {
                return Err(ModelError::LayerMismatch {
                    index: index + 1,
                    expected: pair[1].in_features,
                    found: pair[0].out_features,
                });
            }
        }
        Ok(Self {
            layers,
            dtype_bytes,
            phases: phases.into_iter().collect(),
        })
    }

    /// One 4096 x 4096 fp32 layer.
    pub fn case_study() -> Self {
        Self::new(vec![LayerSpec::new(4096, 4096)], 4).expect("constants are valid")
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub fn dtype_bytes(&self) -> u32 {
        self.dtype_bytes
    }

    pub fn phases(&self) -> &BTreeSet<Phase> {
        &self.phases
    }

    /// Bytes of all weight matrices; biases are left out.
    pub fn weight_bytes(&self) -> f64 {
        let weights: f64 = self.layers.iter().map(|l| l.weight_count() as f64).sum();
        weights * f64::from(self.dtype_bytes)
    }
}

pub fn mlp_phase_profile(mlp: &MlpSpec, batch: u64, phase: Phase) -> Result<KernelProfile> {
    if !mlp.phases.contains(&phase) {
        return Err(ModelError::PhaseDisabled(phase));
    }
    if batch == 0 {
        return Err(ModelError::ZeroDimension {
            name: "batch",
            value: 0,
        });
    }
    let mut total: Option<KernelProfile> = None;
    for &layer in &mlp.layers {
        let (m, n, k) = phase.gemm_shape(batch, layer);
        let gemm = gemm_profile(m, n, k, mlp.dtype_bytes)?;
        total = Some(match total {
            Some(acc) => acc + gemm,
            None => gemm,
        });
    }
    Ok(total.expect("an MlpSpec has at least one layer"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AllReduceAlgorithm {
    /// Ring all-reduce: `2 (p - 1) / p` of the buffer per node.
    Ring,
    /// Twice the buffer per node regardless of node count.
    Ideal,
    /// A caller-chosen multiple of the buffer.
    Factor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AllReduceModel {
    pub algorithm: AllReduceAlgorithm,
    pub nodes: u64,
}

impl AllReduceModel {
    pub fn new(algorithm: AllReduceAlgorithm, nodes: u64) -> Result<Self> {
        if nodes == 0 {
            return Err(ModelError::InvalidAllReduce(
                "node count must be at least 1".into(),
            ));
        }
        if let AllReduceAlgorithm::Factor(c) = algorithm {
            if !c.is_finite() || c < 0.0 {
                return Err(ModelError::InvalidAllReduce(format!(
                    "factor {c} must be finite and non-negative"
                )));
            }
        }
        Ok(Self { algorithm, nodes })
    }

    pub fn ideal(nodes: u64) -> Result<Self> {
        Self::new(AllReduceAlgorithm::Ideal, nodes)
    }

    pub fn ring(nodes: u64) -> Result<Self> {
        Self::new(AllReduceAlgorithm::Ring, nodes)
    }
}

/// Network bytes each node sends to all-reduce a `param_bytes` buffer.
pub fn allreduce_volume(param_bytes: f64, model: &AllReduceModel) -> f64 {
    match model.algorithm {
        AllReduceAlgorithm::Ring => {
            let p = model.nodes as f64;
            2.0 * param_bytes * (p - 1.0) / p
        }
        AllReduceAlgorithm::Ideal => 2.0 * param_bytes,
        AllReduceAlgorithm::Factor(c) => c * param_bytes,
    }
}

/// One synchronization interval on one node: the three training phases at
/// `local_batch` followed by an all-reduce of every weight.
pub fn training_step_profile(
    mlp: &MlpSpec,
    local_batch: u64,
    allreduce: &AllReduceModel,
) -> Result<KernelProfile> {
    if !Phase::ALL.iter().all(|p| mlp.phases.contains(p)) {
        return Err(ModelError::IncompleteTraining);
    }
    let compute = Phase::ALL
        .iter()
        .map(|&phase| mlp_phase_profile(mlp, local_batch, phase))
        .try_fold(None, |acc: Option<KernelProfile>, p| {
            let p = p?;
            Ok::<_, ModelError>(Some(acc.map_or(p, |a| a + p)))
        })?
        .expect("three phases");
    compute.with_net_bytes(allreduce_volume(mlp.weight_bytes(), allreduce))
}

/// Per-node profile when `global_batch` is split evenly over
/// `allreduce.nodes` nodes.
pub fn data_parallel_profile(
    mlp: &MlpSpec,
    global_batch: u64,
    allreduce: &AllReduceModel,
) -> Result<KernelProfile> {
    let nodes = allreduce.nodes;
    if global_batch == 0 || !global_batch.is_multiple_of(nodes) {
        return Err(ModelError::IndivisibleBatch {
            batch: global_batch,
            nodes,
        });
    }
    training_step_profile(mlp, global_batch / nodes, allreduce)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Global batch; each node runs `batch / nodes`.
    pub batch: u64,
    pub profile: KernelProfile,
    pub intensities: IntensityPoint,
    pub report: BottleneckReport,
    /// `t_network / t_compute`: above 1 the all-reduce outlasts the math.
    pub allreduce_compute_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Batch at which the all-reduce/compute ratio first drops below 1,
    /// interpolated linearly in log-log space between the bracketing rows.
    pub fn ratio_crossover(&self) -> Option<f64> {
        self.rows.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let (ra, rb) = (a.allreduce_compute_ratio, b.allreduce_compute_ratio);
            if ra >= 1.0 && rb < 1.0 && rb > 0.0 {
                let (la, lb) = ((a.batch as f64).ln(), (b.batch as f64).ln());
                let t = ra.ln() / (ra.ln() - rb.ln());
                Some((la + t * (lb - la)).exp())
            } else {
                None
            }
        })
    }
}

pub fn batch_sweep(
    mlp: &MlpSpec,
    batches: &[u64],
    machine: &MachineSpec,
    allreduce: &AllReduceModel,
    tolerance: f64,
) -> Result<SweepTable> {
    if batches.is_empty() {
        return Err(ModelError::EmptySweep);
    }
    let mut batches = batches.to_vec();
    batches.sort_unstable();
    batches.dedup();
    let rows = batches
        .into_iter()
        .map(|batch| {
            let profile = data_parallel_profile(mlp, batch, allreduce)?;
            let report = project(machine, &profile, tolerance)?;
            let allreduce_compute_ratio = if report.bounds.t_network == 0.0 {
                0.0
            } else {
                report.bounds.t_network / report.bounds.t_compute
            };
            Ok(SweepRow {
                batch,
                profile,
                intensities: intensities(&profile),
                report,
                allreduce_compute_ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

/// Doubling batch sizes from `first` up to and including `last`.
pub fn doubling_batches(first: u64, last: u64) -> Vec<u64> {
    std::iter::successors(Some(first.max(1)), |&b| b.checked_mul(2))
        .take_while(|&b| b <= last)
        .collect()
}
