use serde::Serialize;

use super::curve::log_space;
use super::types::MachineSpec;
use crate::error::{ModelError, Result};

/// Attainable FLOP/s over a grid of arithmetic and network intensities.
/// Rows follow `i_n_values`, columns follow `i_a_values`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceGrid {
    i_a_values: Vec<f64>,
    i_n_values: Vec<f64>,
    flops: Vec<Vec<f64>>,
}

impl SurfaceGrid {
    /// Assembles a grid from precomputed parts, checking the shape.
    pub fn from_parts(
        i_a_values: Vec<f64>,
        i_n_values: Vec<f64>,
        flops: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if i_a_values.is_empty() || i_n_values.is_empty() {
            return Err(ModelError::InvalidRange {
                min: f64::NAN,
                max: f64::NAN,
                reason: "surface axes must not be empty",
            });
        }
        if flops.len() != i_n_values.len() || flops.iter().any(|row| row.len() != i_a_values.len())
        {
            return Err(ModelError::InvalidRange {
                min: f64::NAN,
                max: f64::NAN,
                reason: "surface grid shape does not match its axes",
            });
        }
        Ok(Self {
            i_a_values,
            i_n_values,
            flops,
        })
    }

    pub fn i_a_values(&self) -> &[f64] {
        &self.i_a_values
    }

    pub fn i_n_values(&self) -> &[f64] {
        &self.i_n_values
    }

    pub fn flops(&self) -> &[Vec<f64>] {
        &self.flops
    }

    /// Slice at fixed network intensity: a classic roofline over `i_a`.
    pub fn row(&self, i_n_index: usize) -> Vec<(f64, f64)> {
        self.i_a_values
            .iter()
            .copied()
            .zip(self.flops[i_n_index].iter().copied())
            .collect()
    }

    /// Slice at fixed arithmetic intensity: a compute-network roofline over `i_n`.
    pub fn column(&self, i_a_index: usize) -> Vec<(f64, f64)> {
        self.i_n_values
            .iter()
            .copied()
            .zip(self.flops.iter().map(|row| row[i_a_index]))
            .collect()
    }
}

pub fn surface_grid(
    machine: &MachineSpec,
    i_a_range: (f64, f64),
    i_n_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<SurfaceGrid> {
    let i_a_values = log_space(i_a_range.0, i_a_range.1, resolution.0)?;
    let i_n_values = log_space(i_n_range.0, i_n_range.1, resolution.1)?;
    let flops = i_n_values
        .iter()
        .map(|&i_n| {
            let network = i_n * machine.net_bw();
            i_a_values
                .iter()
                .map(|&i_a| {
                    machine
                        .peak_flops()
                        .min(i_a * machine.mem_bw())
                        .min(network)
                })
                .collect()
        })
        .collect();
    Ok(SurfaceGrid {
        i_a_values,
        i_n_values,
        flops,
    })
}
