//! Self-contained SVG 1.1 rendering of rooflines and the ridgeline plane,
//! plus text exports of the performance surface.
//!
//! All geometry is computed here. Axes are logarithmic on both sides; the
//! plotting frame declares its data ranges and pixel extents as `data-*`
//! attributes on the `plot-area` group so markers can be checked against an
//! independent recomputation of the transform.

mod ridgeline;
mod roofline;
mod surface;

use std::fmt::Write as _;

pub use ridgeline::{render_ridgeline, RidgelinePoint};
pub use roofline::{render_roofline, RooflinePoint};
pub use surface::{export_surface, SurfaceFormat};

use crate::error::{ModelError, Result};
use crate::format::{number, pixel};

/// Fill and stroke colors by role.
#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    pub compute_fill: String,
    pub memory_fill: String,
    pub network_fill: String,
    pub compute_marker: String,
    pub memory_marker: String,
    pub network_marker: String,
    pub separator: String,
    pub curve: String,
    pub marker: String,
    pub boundary_outline: String,
    pub grid: String,
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            compute_fill: "#fde0dd".into(),
            memory_fill: "#deebf7".into(),
            network_fill: "#e5f5e0".into(),
            compute_marker: "#c0392b".into(),
            memory_marker: "#2471a3".into(),
            network_marker: "#1e8449".into(),
            separator: "#333333".into(),
            curve: "#1f4e79".into(),
            marker: "#e67e22".into(),
            boundary_outline: "#000000".into(),
            grid: "#e0e0e0".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    pub margin_left: f64,
    pub margin_right: f64,
    pub margin_top: f64,
    pub margin_bottom: f64,
    /// Data range of the horizontal axis; defaults to two decades either
    /// side of the plot's reference point.
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    pub title: Option<String>,
    pub palette: Palette,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 600.0,
            margin_left: 90.0,
            margin_right: 30.0,
            margin_top: 40.0,
            margin_bottom: 70.0,
            x_range: None,
            y_range: None,
            title: None,
            palette: Palette::default(),
        }
    }
}

impl PlotStyle {
    fn validate(&self) -> Result<()> {
        let invalid = |field, reason: &str| ModelError::InvalidStyle {
            field,
            reason: reason.to_owned(),
        };
        for (field, v) in [("width", self.width), ("height", self.height)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(field, "must be positive"));
            }
        }
        for (field, v) in [
            ("margin_left", self.margin_left),
            ("margin_right", self.margin_right),
            ("margin_top", self.margin_top),
            ("margin_bottom", self.margin_bottom),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(field, "must be non-negative"));
            }
        }
        if self.margin_left + self.margin_right >= self.width {
            return Err(invalid("width", "leaves no room between the margins"));
        }
        if self.margin_top + self.margin_bottom >= self.height {
            return Err(invalid("height", "leaves no room between the margins"));
        }
        for (field, range) in [("x_range", self.x_range), ("y_range", self.y_range)] {
            if let Some((lo, hi)) = range {
                if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
                    return Err(invalid(field, "needs 0 < min < max"));
                }
            }
        }
        Ok(())
    }
}

/// Two decades below and above `center`.
pub(crate) fn default_range(center: f64) -> (f64, f64) {
    (center / 100.0, center * 100.0)
}

/// Logarithmic map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAxis {
    pub min: f64,
    pub max: f64,
    pub pixel_start: f64,
    pub pixel_end: f64,
}

impl LogAxis {
    pub fn to_pixel(&self, value: f64) -> f64 {
        let t = (value.log10() - self.min.log10()) / (self.max.log10() - self.min.log10());
        self.pixel_start + t * (self.pixel_end - self.pixel_start)
    }

    /// Position in log10 space mapped to pixels.
    pub fn log_to_pixel(&self, log_value: f64) -> f64 {
        let t = (log_value - self.min.log10()) / (self.max.log10() - self.min.log10());
        self.pixel_start + t * (self.pixel_end - self.pixel_start)
    }

    pub fn from_pixel(&self, pixel: f64) -> f64 {
        let t = (pixel - self.pixel_start) / (self.pixel_end - self.pixel_start);
        10f64.powf(self.min.log10() + t * (self.max.log10() - self.min.log10()))
    }

    pub fn clamp(&self, value: f64) -> f64 {
        if value.is_nan() || value < self.min {
            self.min
        } else if value > self.max {
            self.max
        } else {
            value
        }
    }
}

/// Plot area inside the margins with its two log axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x: LogAxis,
    pub y: LogAxis,
}

impl Frame {
    pub fn new(style: &PlotStyle, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            x: LogAxis {
                min: x_range.0,
                max: x_range.1,
                pixel_start: style.margin_left,
                pixel_end: style.width - style.margin_right,
            },
            y: LogAxis {
                min: y_range.0,
                max: y_range.1,
                pixel_start: style.height - style.margin_bottom,
                pixel_end: style.margin_top,
            },
        }
    }

    /// Pixel position of a data point, clamped into the plot area.
    pub fn place(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.x.to_pixel(self.x.clamp(x)),
            self.y.to_pixel(self.y.clamp(y)),
        )
    }

    fn left(&self) -> f64 {
        self.x.pixel_start
    }

    fn right(&self) -> f64 {
        self.x.pixel_end
    }

    fn top(&self) -> f64 {
        self.y.pixel_end
    }

    fn bottom(&self) -> f64 {
        self.y.pixel_start
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn points_attr(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|&(x, y)| format!("{},{}", pixel(x), pixel(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes the document prologue, axes, decade grid and labels, and opens the
/// clipped `plot-area` group. Close it with [`close_document`].
pub(crate) fn open_document(
    out: &mut String,
    style: &PlotStyle,
    frame: &Frame,
    x_label: &str,
    y_label: &str,
) {
    let (w, h) = (number(style.width), number(style.height));
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    if let Some(title) = &style.title {
        let _ = writeln!(out, "<title>{}</title>", escape(title));
    }
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot-clip"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        pixel(frame.left()),
        pixel(frame.top()),
        pixel(frame.right() - frame.left()),
        pixel(frame.bottom() - frame.top()),
    );

    write_grid(out, style, frame);

    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
        pixel((frame.left() + frame.right()) / 2.0),
        pixel(style.height - 20.0),
        escape(x_label)
    );
    let (ly_x, ly_y) = (pixel(22.0), pixel((frame.top() + frame.bottom()) / 2.0));
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{ly_x}" y="{ly_y}" text-anchor="middle" transform="rotate(-90 {ly_x} {ly_y})">{}</text>"#,
        escape(y_label)
    );
    if let Some(title) = &style.title {
        let _ = writeln!(
            out,
            r#"<text class="title" x="{}" y="{}" text-anchor="middle" font-size="15">{}</text>"#,
            pixel(style.width / 2.0),
            pixel(frame.top() / 2.0 + 6.0),
            escape(title)
        );
    }

    let _ = writeln!(
        out,
        r#"<g id="plot-area" clip-path="url(#plot-clip)" data-x-min="{}" data-x-max="{}" data-y-min="{}" data-y-max="{}" data-left="{}" data-right="{}" data-top="{}" data-bottom="{}">"#,
        number(frame.x.min),
        number(frame.x.max),
        number(frame.y.min),
        number(frame.y.max),
        number(frame.left()),
        number(frame.right()),
        number(frame.top()),
        number(frame.bottom()),
    );
}

pub(crate) fn close_document(out: &mut String, frame: &Frame) {
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        r##"<rect class="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000000"/>"##,
        pixel(frame.left()),
        pixel(frame.top()),
        pixel(frame.right() - frame.left()),
        pixel(frame.bottom() - frame.top()),
    );
    out.push_str("</svg>\n");
}

fn decades(axis: &LogAxis) -> impl Iterator<Item = i32> {
    let lo = axis.min.log10().ceil() as i32;
    let hi = axis.max.log10().floor() as i32;
    lo..=hi
}

/// `10` with a superscript exponent, e.g. `10⁻³`.
fn decade_label(exponent: i32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut label = String::from("10");
    if exponent < 0 {
        label.push('⁻');
    }
    for c in exponent.unsigned_abs().to_string().chars() {
        label.push(DIGITS[c.to_digit(10).unwrap_or(0) as usize]);
    }
    label
}

fn write_grid(out: &mut String, style: &PlotStyle, frame: &Frame) {
    let grid = &style.palette.grid;
    out.push_str("<g class=\"grid\">\n");
    for d in decades(&frame.x) {
        let px = pixel(frame.x.log_to_pixel(f64::from(d)));
        let _ = writeln!(
            out,
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="{grid}"/>"#,
            pixel(frame.top()),
            pixel(frame.bottom()),
        );
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{px}" y="{}" text-anchor="middle">{}</text>"#,
            pixel(frame.bottom() + 18.0),
            decade_label(d),
        );
    }
    for d in decades(&frame.y) {
        let py = pixel(frame.y.log_to_pixel(f64::from(d)));
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py}" x2="{}" y2="{py}" stroke="{grid}"/>"#,
            pixel(frame.left()),
            pixel(frame.right()),
        );
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            pixel(frame.left() - 6.0),
            decade_label(d),
        );
    }
    out.push_str("</g>\n");
}

/// A labeled circle. `boundary` adds the heavy outline used for kernels that
/// sit on a ridge between regions.
pub(crate) fn write_marker(
    out: &mut String,
    at: (f64, f64),
    label: &str,
    fill: &str,
    boundary: Option<&str>,
    extra_class: &str,
) {
    let class = if boundary.is_some() {
        format!("marker boundary {extra_class}")
    } else {
        format!("marker {extra_class}")
    };
    let stroke = match boundary {
        Some(color) => format!(r#" stroke="{color}" stroke-width="2.5""#),
        None => r##" stroke="#ffffff" stroke-width="1""##.to_owned(),
    };
    let _ = writeln!(
        out,
        r#"<g class="{}" data-label="{}"><circle class="marker-dot" cx="{}" cy="{}" r="5" fill="{fill}"{stroke}/><text x="{}" y="{}">{}</text></g>"#,
        class.trim_end(),
        escape(label),
        pixel(at.0),
        pixel(at.1),
        pixel(at.0 + 8.0),
        pixel(at.1 - 8.0),
        escape(label),
    );
}
