use serde::Serialize;

use super::types::MachineSpec;
use crate::error::{ModelError, Result};

/// `n` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_space(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(ModelError::InvalidRange {
            min,
            max,
            reason: "bounds must be finite",
        });
    }
    if min <= 0.0 {
        return Err(ModelError::InvalidRange {
            min,
            max,
            reason: "lower bound must be positive",
        });
    }
    if max <= min {
        return Err(ModelError::InvalidRange {
            min,
            max,
            reason: "upper bound must exceed lower bound",
        });
    }
    if n < 2 {
        return Err(ModelError::TooFewSamples(n));
    }
    let (lo, hi) = (min.log10(), max.log10());
    let step = (hi - lo) / (n - 1) as f64;
    let mut values: Vec<f64> = (0..n).map(|i| 10f64.powf(lo + step * i as f64)).collect();
    values[0] = min;
    values[n - 1] = max;
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ModelError::InvalidRange {
            min,
            max,
            reason: "range too narrow for the requested sample count",
        });
    }
    Ok(values)
}

/// Which pair of ceilings a roofline curve draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// FLOP/s against FLOP per memory byte.
    ComputeMemory,
    /// Memory bytes/s against memory byte per network byte.
    MemoryNetwork,
    /// FLOP/s against FLOP per network byte.
    ComputeNetwork,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::ComputeMemory => "compute-memory",
            CurveKind::MemoryNetwork => "memory-network",
            CurveKind::ComputeNetwork => "compute-network",
        }
    }

    /// Flat ceiling of the curve.
    pub fn ceiling(self, machine: &MachineSpec) -> f64 {
        match self {
            CurveKind::ComputeMemory | CurveKind::ComputeNetwork => machine.peak_flops(),
            CurveKind::MemoryNetwork => machine.mem_bw(),
        }
    }

    /// Bandwidth multiplying the intensity on the sloped segment.
    pub fn slope(self, machine: &MachineSpec) -> f64 {
        match self {
            CurveKind::ComputeMemory => machine.mem_bw(),
            CurveKind::MemoryNetwork | CurveKind::ComputeNetwork => machine.net_bw(),
        }
    }

    pub fn knee(self, machine: &MachineSpec) -> f64 {
        self.ceiling(machine) / self.slope(machine)
    }

    pub fn intensity_label(self) -> &'static str {
        match self {
            CurveKind::ComputeMemory => "arithmetic intensity [FLOP/memory byte]",
            CurveKind::MemoryNetwork => "memory intensity [memory byte/network byte]",
            CurveKind::ComputeNetwork => "network intensity [FLOP/network byte]",
        }
    }

    pub fn throughput_label(self) -> &'static str {
        match self {
            CurveKind::ComputeMemory | CurveKind::ComputeNetwork => "performance [FLOP/s]",
            CurveKind::MemoryNetwork => "memory bandwidth [byte/s]",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub kind: CurveKind,
    /// `(intensity, throughput)`, strictly increasing in intensity.
    pub samples: Vec<(f64, f64)>,
    pub knee: f64,
    pub ceiling: f64,
    pub slope: f64,
}

impl Curve {
    pub fn throughput_at(&self, intensity: f64) -> f64 {
        (intensity * self.slope).min(self.ceiling)
    }
}

pub fn roofline_curve(
    machine: &MachineSpec,
    kind: CurveKind,
    range: (f64, f64),
    samples: usize,
) -> Result<Curve> {
    let ceiling = kind.ceiling(machine);
    let slope = kind.slope(machine);
    let samples = log_space(range.0, range.1, samples)?
        .into_iter()
        .map(|x| (x, (x * slope).min(ceiling)))
        .collect();
    Ok(Curve {
        kind,
        samples,
        knee: kind.knee(machine),
        ceiling,
        slope,
    })
}
