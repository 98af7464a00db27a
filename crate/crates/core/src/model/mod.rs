//! Intensity algebra, bottleneck classification and projected performance
//! for a node with a compute ceiling and two bandwidth ceilings.

mod classify;
mod curve;
mod surface;
mod types;

pub use classify::{classify_geometric, classify_time, project, DEFAULT_TOLERANCE};
pub use curve::{log_space, roofline_curve, Curve, CurveKind};
pub use surface::{surface_grid, SurfaceGrid};
pub use types::{
    BottleneckReport, Classification, Intensity, IntensityPoint, KernelProfile, MachineSpec,
    Region, RidgelineGeometry, TimeBounds,
};

pub fn intensities(profile: &KernelProfile) -> IntensityPoint {
    IntensityPoint {
        i_a: Intensity::ratio(profile.flops(), profile.mem_bytes()),
        i_m: Intensity::ratio(profile.mem_bytes(), profile.net_bytes()),
        i_n: Intensity::ratio(profile.flops(), profile.net_bytes()),
    }
}

/// `min(P, i_a * BW_m, i_n * BW_n)`; an unbounded intensity drops its term.
pub fn attainable_flops(machine: &MachineSpec, point: &IntensityPoint) -> f64 {
    let mut flops = machine.peak_flops();
    if let Some(memory) = point.i_a.rate(machine.mem_bw()) {
        flops = flops.min(memory);
    }
    if let Some(network) = point.i_n.rate(machine.net_bw()) {
        flops = flops.min(network);
    }
    flops
}

pub fn time_bounds(machine: &MachineSpec, profile: &KernelProfile) -> TimeBounds {
    TimeBounds {
        t_compute: profile.flops() / machine.peak_flops(),
        t_memory: profile.mem_bytes() / machine.mem_bw(),
        t_network: profile.net_bytes() / machine.net_bw(),
    }
}

pub fn ridgeline_geometry(machine: &MachineSpec) -> RidgelineGeometry {
    RidgelineGeometry {
        x_star: machine.mem_bw() / machine.net_bw(),
        y_star: machine.peak_flops() / machine.mem_bw(),
        k: machine.peak_flops() / machine.net_bw(),
    }
}
