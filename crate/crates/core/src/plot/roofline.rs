use std::fmt::Write as _;

use super::{
    close_document, default_range, open_document, points_attr, write_marker, Frame, PlotStyle,
};
use crate::error::{ModelError, Result};
use crate::format::{number, pixel};
use crate::model::Curve;

/// A kernel placed on a roofline plot.
#[derive(Debug, Clone, PartialEq)]
pub struct RooflinePoint {
    pub intensity: f64,
    pub throughput: f64,
    pub label: String,
    /// Drawn with the boundary outline.
    pub on_boundary: bool,
}

impl RooflinePoint {
    pub fn new(intensity: f64, throughput: f64, label: impl Into<String>) -> Self {
        Self {
            intensity,
            throughput,
            label: label.into(),
            on_boundary: false,
        }
    }
}

/// Log-log roofline: the curve as one polyline through its samples and knee,
/// the knee annotated, and each point as a labeled marker.
pub fn render_roofline(
    curve: &Curve,
    points: &[RooflinePoint],
    style: &PlotStyle,
) -> Result<String> {
    if curve.samples.is_empty() {
        return Err(ModelError::EmptyCurve);
    }
    style.validate()?;
    let frame = Frame::new(
        style,
        style.x_range.unwrap_or_else(|| default_range(curve.knee)),
        style
            .y_range
            .unwrap_or_else(|| default_range(curve.ceiling)),
    );

    let mut out = String::new();
    open_document(
        &mut out,
        style,
        &frame,
        curve.kind.intensity_label(),
        curve.kind.throughput_label(),
    );

    let first = curve.samples[0].0;
    let last = curve.samples[curve.samples.len() - 1].0;
    let mut line: Vec<(f64, f64)> = curve.samples.clone();
    if curve.knee > first && curve.knee < last && !line.iter().any(|s| s.0 == curve.knee) {
        let at = line.partition_point(|s| s.0 < curve.knee);
        line.insert(at, (curve.knee, curve.ceiling));
    }
    let pixels: Vec<(f64, f64)> = line
        .iter()
        .map(|&(x, y)| (frame.x.to_pixel(x), frame.y.to_pixel(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="curve" data-kind="{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
        curve.kind.as_str(),
        points_attr(&pixels),
        style.palette.curve,
    );

    let (kx, ky) = (
        frame.x.to_pixel(curve.knee),
        frame.y.to_pixel(curve.ceiling),
    );
    let _ = writeln!(
        out,
        r#"<g class="knee" data-intensity="{}"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-dasharray="4 3"/><circle class="knee-point" cx="{}" cy="{}" r="3" fill="{}"/><text x="{}" y="{}">knee {}</text></g>"#,
        number(curve.knee),
        pixel(kx),
        pixel(frame.y.pixel_start),
        pixel(kx),
        pixel(ky),
        style.palette.separator,
        pixel(kx),
        pixel(ky),
        style.palette.separator,
        pixel(kx + 6.0),
        pixel(ky + 16.0),
        number(curve.knee),
    );

    for p in points {
        let at = frame.place(p.intensity, p.throughput);
        let boundary = p
            .on_boundary
            .then_some(style.palette.boundary_outline.as_str());
        write_marker(&mut out, at, &p.label, &style.palette.marker, boundary, "");
    }

    close_document(&mut out, &frame);
    Ok(out)
}
