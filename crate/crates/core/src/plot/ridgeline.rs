use std::fmt::Write as _;

use super::{
    close_document, default_range, escape, open_document, points_attr, write_marker, Frame,
    PlotStyle,
};
use crate::error::{ModelError, Result};
use crate::format::pixel;
use crate::model::{Region, RidgelineGeometry};

/// A kernel on the ridgeline plane at `x = i_m`, `y = i_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgelinePoint {
    pub i_m: f64,
    pub i_a: f64,
    pub label: String,
    pub region: Region,
    /// Several resources limit within tolerance.
    pub on_boundary: bool,
}

/// Region polygons in log10 space over a box `[u0, u1] x [v0, v1]` that
/// strictly contains the centre point.
pub(crate) fn region_polygons(
    geometry: &RidgelineGeometry,
    (u0, u1): (f64, f64),
    (v0, v1): (f64, f64),
) -> [(Region, Vec<(f64, f64)>); 3] {
    let (uc, vc) = (geometry.x_star.log10(), geometry.y_star.log10());
    let lk = uc + vc;
    // where the diagonal u + v = lk leaves the box going up and left
    let exit_top = lk - v1 >= u0;
    let exit = if exit_top {
        (lk - v1, v1)
    } else {
        (u0, lk - u0)
    };

    let memory = vec![(uc, v0), (u1, v0), (u1, vc), (uc, vc)];
    let mut compute = vec![(uc, vc), (u1, vc), (u1, v1)];
    let mut network = vec![(u0, v0), (uc, v0), (uc, vc), exit];
    if exit_top {
        compute.push(exit);
        network.push((u0, v1));
    } else {
        compute.push((u0, v1));
        compute.push(exit);
    }
    [
        (Region::Compute, compute),
        (Region::Memory, memory),
        (Region::Network, network),
    ]
}

/// Point where the diagonal through the centre leaves the plot area
/// towards the top-left.
pub(crate) fn diagonal_end(geometry: &RidgelineGeometry, frame: &Frame) -> (f64, f64) {
    let x = (geometry.k / frame.y.max).max(frame.x.min);
    (x, geometry.k / x)
}

/// Ridgeline plane: quadrant separators through `(x*, y*)`, the `x * y = k`
/// diagonal in the upper-left quadrant, shaded regions and kernel markers
/// colored by their bottleneck.
pub fn render_ridgeline(
    geometry: &RidgelineGeometry,
    points: &[RidgelinePoint],
    style: &PlotStyle,
) -> Result<String> {
    if let Some(p) = points
        .iter()
        .find(|p| !p.i_m.is_finite() || !p.i_a.is_finite())
    {
        return Err(ModelError::InfinitePoint {
            label: p.label.clone(),
        });
    }
    style.validate()?;
    let frame = Frame::new(
        style,
        style
            .x_range
            .unwrap_or_else(|| default_range(geometry.x_star)),
        style
            .y_range
            .unwrap_or_else(|| default_range(geometry.y_star)),
    );
    let palette = &style.palette;

    let mut out = String::new();
    open_document(
        &mut out,
        style,
        &frame,
        "memory intensity [memory byte/network byte]",
        "arithmetic intensity [FLOP/memory byte]",
    );

    let (uc, vc) = (geometry.x_star.log10(), geometry.y_star.log10());
    let pad = 1.0;
    let u_range = (
        frame.x.min.log10().min(uc) - pad,
        frame.x.max.log10().max(uc) + pad,
    );
    let v_range = (
        frame.y.min.log10().min(vc) - pad,
        frame.y.max.log10().max(vc) + pad,
    );
    for (region, polygon) in region_polygons(geometry, u_range, v_range) {
        let fill = match region {
            Region::Compute => &palette.compute_fill,
            Region::Memory => &palette.memory_fill,
            Region::Network => &palette.network_fill,
        };
        let pixels: Vec<(f64, f64)> = polygon
            .iter()
            .map(|&(u, v)| (frame.x.log_to_pixel(u), frame.y.log_to_pixel(v)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon class="region" data-region="{region}" points="{}" fill="{fill}"/>"#,
            points_attr(&pixels),
        );
    }

    // labels sit in the middle of each region's visible part
    let mid = |a: f64, b: f64| (a + b) / 2.0;
    let (xl, xr) = (frame.x.min.log10(), frame.x.max.log10());
    let (yb, yt) = (frame.y.min.log10(), frame.y.max.log10());
    let (ucl, vcl) = (uc.clamp(xl, xr), vc.clamp(yb, yt));
    let labels = [
        (Region::Compute, mid(ucl, xr), mid(vcl, yt)),
        (Region::Memory, mid(ucl, xr), mid(yb, vcl)),
        (Region::Network, mid(xl, ucl), mid(yb, vcl)),
    ];
    for (region, u, v) in labels {
        let name = match region {
            Region::Compute => "Compute",
            Region::Memory => "Memory",
            Region::Network => "Network",
        };
        let _ = writeln!(
            out,
            r##"<text class="region-label" x="{}" y="{}" text-anchor="middle" font-size="16" fill="#555555">{name}</text>"##,
            pixel(frame.x.log_to_pixel(u)),
            pixel(frame.y.log_to_pixel(v)),
        );
    }

    let (cx, cy) = (
        frame.x.to_pixel(geometry.x_star),
        frame.y.to_pixel(geometry.y_star),
    );
    let sep = &palette.separator;
    let _ = writeln!(
        out,
        r#"<line class="separator" data-axis="x" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="{sep}" stroke-dasharray="6 4"/>"#,
        pixel(cx),
        pixel(frame.bottom()),
        pixel(frame.top()),
    );
    let _ = writeln!(
        out,
        r#"<line class="separator" data-axis="y" x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="{sep}" stroke-dasharray="6 4"/>"#,
        pixel(cy),
        pixel(frame.left()),
        pixel(frame.right()),
    );
    let (dx, dy) = diagonal_end(geometry, &frame);
    let _ = writeln!(
        out,
        r#"<line class="diagonal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{sep}" stroke-width="2"/>"#,
        pixel(cx),
        pixel(cy),
        pixel(frame.x.to_pixel(dx)),
        pixel(frame.y.to_pixel(dy)),
    );
    let _ = writeln!(
        out,
        r#"<circle class="center" cx="{}" cy="{}" r="4" fill="{sep}"/>"#,
        pixel(cx),
        pixel(cy),
    );

    for p in points {
        let fill = match p.region {
            Region::Compute => &palette.compute_marker,
            Region::Memory => &palette.memory_marker,
            Region::Network => &palette.network_marker,
        };
        let boundary = p.on_boundary.then_some(palette.boundary_outline.as_str());
        let class = format!("region-{}", escape(p.region.as_str()));
        write_marker(
            &mut out,
            frame.place(p.i_m, p.i_a),
            &p.label,
            fill,
            boundary,
            &class,
        );
    }

    close_document(&mut out, &frame);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ridgeline_geometry, MachineSpec};

    #[test]
    fn diagonal_ends_on_top_left_corner_by_default() {
        let g = ridgeline_geometry(&MachineSpec::cascade_lake());
        let style = PlotStyle::default();
        let frame = Frame::new(&style, default_range(g.x_star), default_range(g.y_star));
        let (x, y) = diagonal_end(&g, &frame);
        assert!((x / 0.0875 - 1.0).abs() < 1e-12);
        assert!((y / 4000.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_regions_and_center() {
        let g = ridgeline_geometry(&MachineSpec::cascade_lake());
        let svg = render_ridgeline(&g, &[], &PlotStyle::default()).unwrap();
        for region in ["compute", "memory", "network"] {
            assert_eq!(svg.matches(&format!("data-region=\"{region}\"")).count(), 1);
        }
        assert_eq!(svg.matches("class=\"diagonal\"").count(), 1);
        assert_eq!(svg.matches("class=\"center\"").count(), 1);
        assert_eq!(svg.matches("class=\"separator\"").count(), 2);
    }

    #[test]
    fn polygons_for_both_diagonal_exits() {
        let g = RidgelineGeometry {
            x_star: 10.0,
            y_star: 10.0,
            k: 100.0,
        };
        let [(_, compute), (_, memory), (_, network)] =
            region_polygons(&g, (-3.0, 3.0), (-1.0, 3.0));
        assert_eq!(
            compute,
            vec![(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (-1.0, 3.0)]
        );
        assert_eq!(
            memory,
            vec![(1.0, -1.0), (3.0, -1.0), (3.0, 1.0), (1.0, 1.0)]
        );
        assert_eq!(
            network,
            vec![
                (-3.0, -1.0),
                (1.0, -1.0),
                (1.0, 1.0),
                (-1.0, 3.0),
                (-3.0, 3.0)
            ]
        );

        let [(_, compute), _, (_, network)] = region_polygons(&g, (0.0, 3.0), (-1.0, 3.0));
        assert_eq!(
            compute,
            vec![(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (0.0, 3.0), (0.0, 2.0)]
        );
        assert_eq!(
            network,
            vec![(0.0, -1.0), (1.0, -1.0), (1.0, 1.0), (0.0, 2.0)]
        );
    }

    #[test]
    fn rejects_infinite_points() {
        let g = ridgeline_geometry(&MachineSpec::cascade_lake());
        let p = RidgelinePoint {
            i_m: f64::INFINITY,
            i_a: 1.0,
            label: "local".into(),
            region: Region::Memory,
            on_boundary: false,
        };
        assert_eq!(
            render_ridgeline(&g, &[p], &PlotStyle::default()),
            Err(ModelError::InfinitePoint {
                label: "local".into()
            })
        );
    }
}
