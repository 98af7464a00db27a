use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{ModelError, Result};

/// Peak rates of a single node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineSpec {
    name: String,
    peak_flops: f64,
    mem_bw: f64,
    net_bw: f64,
}

fn check_positive(value: f64) -> std::result::Result<(), String> {
    if !value.is_finite() {
        Err(format!("{value} is not finite"))
    } else if value <= 0.0 {
        Err(format!("{value} must be positive"))
    } else {
        Ok(())
    }
}

impl MachineSpec {
    /// `peak_flops` in FLOP/s, `mem_bw` and `net_bw` in bytes/s.
    pub fn new(name: impl Into<String>, peak_flops: f64, mem_bw: f64, net_bw: f64) -> Result<Self> {
        for (field, value) in [
            ("peak_flops", peak_flops),
            ("mem_bw", mem_bw),
            ("net_bw", net_bw),
        ] {
            check_positive(value).map_err(|reason| ModelError::InvalidMachine { field, reason })?;
        }
        Ok(Self {
            name: name.into(),
            peak_flops,
            mem_bw,
            net_bw,
        })
    }

    /// The Cascade Lake socket used throughout the MLP case study:
    /// 4.2 TFLOP/s FP32, 105 GB/s memory, 12 GB/s network.
    pub fn cascade_lake() -> Self {
        Self::new("clx", 4.2e12, 105e9, 12e9).expect("constants are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn peak_flops(&self) -> f64 {
        self.peak_flops
    }

    pub fn mem_bw(&self) -> f64 {
        self.mem_bw
    }

    pub fn net_bw(&self) -> f64 {
        self.net_bw
    }
}

/// FLOPs, memory bytes and network bytes of one unit of work.
///
/// Profiles are additive: summing two profiles models running both pieces of
/// work back to back within one synchronization interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelProfile {
    flops: f64,
    mem_bytes: f64,
    net_bytes: f64,
}

impl KernelProfile {
    pub fn new(flops: f64, mem_bytes: f64, net_bytes: f64) -> Result<Self> {
        let invalid = |field, reason: String| ModelError::InvalidProfile { field, reason };
        for (field, value) in [("flops", flops), ("net_bytes", net_bytes)] {
            if !value.is_finite() || value < 0.0 {
                return Err(invalid(
                    field,
                    format!("{value} must be finite and non-negative"),
                ));
            }
        }
        if !mem_bytes.is_finite() || mem_bytes <= 0.0 {
            return Err(invalid(
                "mem_bytes",
                format!("{mem_bytes} must be finite and positive"),
            ));
        }
        Ok(Self {
            flops,
            mem_bytes,
            net_bytes,
        })
    }

    pub fn flops(&self) -> f64 {
        self.flops
    }

    pub fn mem_bytes(&self) -> f64 {
        self.mem_bytes
    }

    pub fn net_bytes(&self) -> f64 {
        self.net_bytes
    }

    /// Same profile with the network traffic replaced.
    pub fn with_net_bytes(self, net_bytes: f64) -> Result<Self> {
        Self::new(self.flops, self.mem_bytes, net_bytes)
    }

    /// Multiplies every component by `factor` (> 0).
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::new(
            self.flops * factor,
            self.mem_bytes * factor,
            self.net_bytes * factor,
        )
    }
}

impl Add for KernelProfile {
    type Output = KernelProfile;

    fn add(self, rhs: Self) -> Self {
        Self {
            flops: self.flops + rhs.flops,
            mem_bytes: self.mem_bytes + rhs.mem_bytes,
            net_bytes: self.net_bytes + rhs.net_bytes,
        }
    }
}

/// A ratio of two traffic counts. `Unbounded` stands for a zero denominator
/// (for instance a kernel with no network traffic) and never enters arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intensity {
    Finite(f64),
    Unbounded,
}

impl Intensity {
    pub fn ratio(numerator: f64, denominator: f64) -> Self {
        if denominator == 0.0 {
            Intensity::Unbounded
        } else {
            Intensity::Finite(numerator / denominator)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Intensity::Finite(v) => Some(v),
            Intensity::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Intensity::Unbounded)
    }

    /// `intensity * bandwidth`, or `None` when the resource never limits.
    pub fn rate(self, bandwidth: f64) -> Option<f64> {
        self.finite().map(|v| v * bandwidth)
    }
}

impl From<f64> for Intensity {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Intensity::Unbounded
        } else {
            Intensity::Finite(v)
        }
    }
}

impl fmt::Display for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intensity::Finite(v) => write!(f, "{v}"),
            Intensity::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Intensity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Intensity::Finite(v) => serializer.serialize_f64(*v),
            Intensity::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Intensity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IntensityVisitor;

        impl Visitor<'_> for IntensityVisitor {
            type Value = Intensity;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Intensity, E> {
                Ok(Intensity::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Intensity, E> {
                Ok(Intensity::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Intensity, E> {
                Ok(Intensity::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Intensity, E> {
                match v {
                    "inf" => Ok(Intensity::Unbounded),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(IntensityVisitor)
    }
}

/// Coordinates of a kernel in intensity space.
///
/// `i_a` is FLOP per memory byte, `i_m` memory byte per network byte and
/// `i_n` FLOP per network byte, so that `i_n = i_a * i_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityPoint {
    pub i_a: Intensity,
    pub i_m: Intensity,
    pub i_n: Intensity,
}

impl IntensityPoint {
    /// Point on the ridgeline plane at `x = i_m`, `y = i_a`.
    pub fn from_plane(i_m: f64, i_a: f64) -> Self {
        Self {
            i_a: Intensity::Finite(i_a),
            i_m: Intensity::Finite(i_m),
            i_n: Intensity::Finite(i_a * i_m),
        }
    }

    /// Plane coordinates `(x, y) = (i_m, i_a)` when both are finite.
    pub fn plane_coords(&self) -> Option<(f64, f64)> {
        Some((self.i_m.finite()?, self.i_a.finite()?))
    }
}

/// The resource that bounds a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Compute,
    Memory,
    Network,
}

impl Region {
    /// Tie-break order: earlier entries win.
    pub const PRIORITY: [Region; 3] = [Region::Compute, Region::Memory, Region::Network];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Compute => "compute",
            Region::Memory => "memory",
            Region::Network => "network",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Seconds each resource needs in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeBounds {
    pub t_compute: f64,
    pub t_memory: f64,
    pub t_network: f64,
}

impl TimeBounds {
    pub fn get(&self, region: Region) -> f64 {
        match region {
            Region::Compute => self.t_compute,
            Region::Memory => self.t_memory,
            Region::Network => self.t_network,
        }
    }

    pub fn max(&self) -> f64 {
        self.t_compute.max(self.t_memory).max(self.t_network)
    }
}

/// Primary bottleneck and every resource within tolerance of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub region: Region,
    /// In priority order; always contains `region`.
    pub co_limiting: Vec<Region>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BottleneckReport {
    pub region: Region,
    pub bounds: TimeBounds,
    pub runtime: f64,
    pub attained_flops: f64,
    pub co_limiting: Vec<Region>,
    pub tolerance: f64,
}

impl BottleneckReport {
    /// More than one resource limits within tolerance: the kernel sits on a
    /// ridge between regions.
    pub fn on_boundary(&self) -> bool {
        self.co_limiting.len() > 1
    }
}

/// Lines partitioning the ridgeline plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgelineGeometry {
    /// `BW_m / BW_n`, the vertical separator.
    pub x_star: f64,
    /// `P / BW_m`, the horizontal separator.
    pub y_star: f64,
    /// `P / BW_n`, the constant of the diagonal `x * y = k`.
    pub k: f64,
}
