use super::types::{
    BottleneckReport, Classification, IntensityPoint, KernelProfile, MachineSpec, Region,
    TimeBounds,
};
use super::{ridgeline_geometry, time_bounds};
use crate::error::{ModelError, Result};

/// Relative slack under which two bounds count as co-limiting.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Picks the largest bound, breaking ties Compute > Memory > Network, and
/// collects every resource whose bound is at least `(1 - tolerance) * max`.
pub fn classify_time(bounds: &TimeBounds, tolerance: f64) -> Result<Classification> {
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(ModelError::InvalidTolerance(tolerance));
    }
    let max = bounds.max();
    if max == 0.0 {
        return Err(ModelError::EmptyKernel);
    }
    let region = Region::PRIORITY
        .into_iter()
        .find(|&r| bounds.get(r) == max)
        .expect("max is one of the bounds");
    let threshold = (1.0 - tolerance) * max;
    let co_limiting = Region::PRIORITY
        .into_iter()
        .filter(|&r| bounds.get(r) >= threshold)
        .collect();
    Ok(Classification {
        region,
        co_limiting,
    })
}

/// Region of a point on the ridgeline plane (`x = i_m`, `y = i_a`).
///
/// The plane is split by `x = x*`, `y = y*` and, in the upper-left quadrant,
/// by the diagonal `x * y = k`. Points on a separator fall to the region that
/// wins the Compute > Memory > Network priority.
pub fn classify_geometric(machine: &MachineSpec, point: &IntensityPoint) -> Result<Region> {
    let (x, y) = point.plane_coords().ok_or(ModelError::InfiniteCoordinate)?;
    let g = ridgeline_geometry(machine);
    let region = match (x >= g.x_star, y >= g.y_star) {
        (false, false) => Region::Network,
        (true, false) => Region::Memory,
        (true, true) => Region::Compute,
        (false, true) if x * y < g.k => Region::Network,
        (false, true) => Region::Compute,
    };
    Ok(region)
}

/// Runtime under full overlap of the three resources and the FLOP rate it
/// implies.
pub fn project(
    machine: &MachineSpec,
    profile: &KernelProfile,
    tolerance: f64,
) -> Result<BottleneckReport> {
    let bounds = time_bounds(machine, profile);
    let Classification {
        region,
        co_limiting,
    } = classify_time(&bounds, tolerance)?;
    let runtime = bounds.max();
    let attained_flops = if profile.flops() == 0.0 {
        0.0
    } else {
        profile.flops() / runtime
    };
    Ok(BottleneckReport {
        region,
        bounds,
        runtime,
        attained_flops,
        co_limiting,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::model::intensities;

    fn bounds(c: f64, m: f64, n: f64) -> TimeBounds {
        TimeBounds {
            t_compute: c,
            t_memory: m,
            t_network: n,
        }
    }

    #[test]
    fn strict_maximum() {
        let c = classify_time(&bounds(3.0, 2.0, 1.0), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(c.region, Region::Compute);
        assert_eq!(c.co_limiting, vec![Region::Compute]);
    }

    #[test]
    fn full_tie_uses_priority() {
        let c = classify_time(&bounds(1.0, 1.0, 1.0), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(c.region, Region::Compute);
        assert_eq!(c.co_limiting, Region::PRIORITY.to_vec());

        let c = classify_time(&bounds(0.5, 1.0, 1.0), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(c.region, Region::Memory);
        assert_eq!(c.co_limiting, vec![Region::Memory, Region::Network]);
    }

    #[test]
    fn tolerance_widens_co_limiting() {
        let b = bounds(1.0, 0.99, 0.5);
        assert_eq!(
            classify_time(&b, 0.0).unwrap().co_limiting,
            vec![Region::Compute]
        );
        assert_eq!(
            classify_time(&b, 0.02).unwrap().co_limiting,
            vec![Region::Compute, Region::Memory]
        );
    }

    #[test]
    fn rejects_empty_kernel_and_bad_tolerance() {
        assert_eq!(
            classify_time(&bounds(0.0, 0.0, 0.0), DEFAULT_TOLERANCE),
            Err(ModelError::EmptyKernel)
        );
        assert!(matches!(
            classify_time(&bounds(1.0, 0.0, 0.0), -1.0),
            Err(ModelError::InvalidTolerance(_))
        ));
        assert!(classify_time(&bounds(1.0, 0.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn geometric_quadrants_on_cascade_lake() {
        let clx = MachineSpec::cascade_lake();
        let at = |x, y| classify_geometric(&clx, &IntensityPoint::from_plane(x, y)).unwrap();
        assert_eq!(at(1.0, 1.0), Region::Network);
        assert_eq!(at(100.0, 1.0), Region::Memory);
        assert_eq!(at(100.0, 100.0), Region::Compute);
        assert_eq!(at(1.0, 100.0), Region::Network);
        assert_eq!(at(5.0, 100.0), Region::Compute);
    }

    #[test]
    fn geometric_boundaries_follow_priority() {
        let clx = MachineSpec::cascade_lake();
        let at = |x, y| classify_geometric(&clx, &IntensityPoint::from_plane(x, y)).unwrap();
        // centre point: all three tie
        assert_eq!(at(8.75, 40.0), Region::Compute);
        // vertical separator below y*: memory and network tie
        assert_eq!(at(8.75, 1.0), Region::Memory);
        // horizontal separator right of x*: compute and memory tie
        assert_eq!(at(100.0, 40.0), Region::Compute);
        // diagonal: compute and network tie
        assert_eq!(at(3.5, 100.0), Region::Compute);
    }

    #[test]
    fn geometric_rejects_unbounded_points() {
        let clx = MachineSpec::cascade_lake();
        let p = intensities(&KernelProfile::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            classify_geometric(&clx, &p),
            Err(ModelError::InfiniteCoordinate)
        );
    }

    #[test]
    fn project_balance_kernel() {
        let clx = MachineSpec::cascade_lake();
        let r = project(
            &clx,
            &KernelProfile::new(350.0, 8.75, 1.0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert_relative_eq!(r.runtime, 350.0 / 4.2e12, max_relative = 1e-12);
        assert_relative_eq!(r.attained_flops, 4.2e12, max_relative = 1e-12);
        assert_eq!(r.co_limiting, Region::PRIORITY.to_vec());
        assert!(r.on_boundary());
    }

    #[test]
    fn project_compute_dominated() {
        let clx = MachineSpec::cascade_lake();
        let r = project(
            &clx,
            &KernelProfile::new(4.2e12, 1.0, 1.0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert_eq!(r.runtime, 1.0);
        assert_eq!(r.region, Region::Compute);
        assert_eq!(r.attained_flops, 4.2e12);
    }

    #[test]
    fn project_unit_machine() {
        let unit = MachineSpec::new("unit", 1.0, 1.0, 1.0).unwrap();
        let r = project(
            &unit,
            &KernelProfile::new(3.0, 2.0, 1.0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert_eq!((r.runtime, r.attained_flops), (3.0, 1.0));
    }

    #[test]
    fn project_zero_flop_kernel_attains_nothing() {
        let clx = MachineSpec::cascade_lake();
        let r = project(
            &clx,
            &KernelProfile::new(0.0, 105e9, 0.0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert_eq!(r.region, Region::Memory);
        assert_eq!(r.runtime, 1.0);
        assert_eq!(r.attained_flops, 0.0);
    }
}
