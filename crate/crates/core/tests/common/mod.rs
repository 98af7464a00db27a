#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ridgeline::model::Region;

pub fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ridgeline").chain(args.iter().copied());
    let code = ridgeline::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Compares against a checked-in golden file; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> bool {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return true;
    }
    match std::fs::read_to_string(&path) {
        Ok(expected) => expected == actual,
        Err(_) => false,
    }
}

/// The golden documents: analyze (text and JSON), sweep, ridgeline plot and
/// surface on the Cascade Lake + MLP fixtures.
pub fn golden_outputs(dir: &Path) -> Vec<(&'static str, String)> {
    let clx = fixture("clx.json");
    let mlp = fixture("mlp_512.json");
    let svg = dir.join("ridgeline.svg");
    let csv = dir.join("surface.csv");
    let svg_s = svg.to_str().unwrap();
    let csv_s = csv.to_str().unwrap();

    let (c1, analyze_text, _) = run(&["analyze", "--machine", &clx, "--kernel", &mlp]);
    let (c2, analyze_json, _) = run(&["analyze", "--machine", &clx, "--kernel", &mlp, "--json"]);
    let (c3, sweep, _) = run(&[
        "sweep",
        "--machine",
        &clx,
        "--kernel",
        &mlp,
        "--batches",
        "64,128,256,512,1024,2048,4096,8192",
    ]);
    let (c4, _, _) = run(&[
        "plot",
        "--machine",
        &clx,
        "--kernel",
        &mlp,
        "--kind",
        "ridgeline",
        "--batches",
        "256,512,1024,2048,4096",
        "--out",
        svg_s,
    ]);
    let (c5, _, _) = run(&[
        "surface",
        "--machine",
        &clx,
        "--out",
        csv_s,
        "--resolution",
        "16",
    ]);
    assert_eq!([c1, c2, c3, c4, c5], [0; 5]);
    vec![
        ("analyze_mlp512.txt", analyze_text),
        ("analyze_mlp512.json", analyze_json),
        ("sweep_clx_mlp.csv", sweep),
        (
            "ridgeline_clx_mlp.svg",
            std::fs::read_to_string(svg).unwrap(),
        ),
        ("surface_clx.csv", std::fs::read_to_string(csv).unwrap()),
    ]
}

/// Independent reading of the axis transform declared on `plot-area`.
pub struct Transform {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

impl Transform {
    pub fn read(doc: &roxmltree::Document) -> Self {
        let area = doc
            .descendants()
            .find(|n| n.attribute("id") == Some("plot-area"))
            .expect("plot-area group");
        let get = |k: &str| area.attribute(k).unwrap().parse::<f64>().unwrap();
        Self {
            x_min: get("data-x-min"),
            x_max: get("data-x-max"),
            y_min: get("data-y-min"),
            y_max: get("data-y-max"),
            left: get("data-left"),
            right: get("data-right"),
            top: get("data-top"),
            bottom: get("data-bottom"),
        }
    }

    pub fn to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        let x = x.clamp(self.x_min, self.x_max);
        let y = y.clamp(self.y_min, self.y_max);
        let tx = (x.log10() - self.x_min.log10()) / (self.x_max.log10() - self.x_min.log10());
        let ty = (y.log10() - self.y_min.log10()) / (self.y_max.log10() - self.y_min.log10());
        (
            self.left + tx * (self.right - self.left),
            self.bottom - ty * (self.bottom - self.top),
        )
    }

    pub fn to_data(&self, px: f64, py: f64) -> (f64, f64) {
        let tx = (px - self.left) / (self.right - self.left);
        let ty = (self.bottom - py) / (self.bottom - self.top);
        let lx = self.x_min.log10() + tx * (self.x_max.log10() - self.x_min.log10());
        let ly = self.y_min.log10() + ty * (self.y_max.log10() - self.y_min.log10());
        (10f64.powf(lx), 10f64.powf(ly))
    }
}

pub fn markers<'a>(doc: &'a roxmltree::Document<'a>) -> Vec<(String, String, String, bool)> {
    doc.descendants()
        .filter(|n| {
            n.attribute("class")
                .is_some_and(|c| c.split(' ').any(|w| w == "marker"))
        })
        .map(|g| {
            let dot = g.children().find(|c| c.has_tag_name("circle")).unwrap();
            (
                g.attribute("data-label").unwrap().to_owned(),
                dot.attribute("cx").unwrap().to_owned(),
                dot.attribute("cy").unwrap().to_owned(),
                g.attribute("class").unwrap().contains("boundary"),
            )
        })
        .collect()
}

pub fn polygons(doc: &roxmltree::Document) -> Vec<(Region, Vec<(f64, f64)>)> {
    doc.descendants()
        .filter(|n| n.has_tag_name("polygon"))
        .map(|n| {
            let region = match n.attribute("data-region").unwrap() {
                "compute" => Region::Compute,
                "memory" => Region::Memory,
                "network" => Region::Network,
                other => panic!("unexpected region {other}"),
            };
            let pts = n
                .attribute("points")
                .unwrap()
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            (region, pts)
        })
        .collect()
}

pub fn inside(poly: &[(f64, f64)], (x, y): (f64, f64)) -> bool {
    let mut hit = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            hit = !hit;
        }
        j = i;
    }
    hit
}
