//! Structural checks on rendered SVG: well-formed XML, marker positions
//! against an independent axis transform, and region shading against the
//! geometric classifier.

mod common;

use common::{inside, markers, polygons, Transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridgeline::mlp::{batch_sweep, AllReduceModel, MlpSpec};
use ridgeline::model::{
    classify_geometric, ridgeline_geometry, roofline_curve, CurveKind, IntensityPoint, MachineSpec,
    Region, DEFAULT_TOLERANCE,
};
use ridgeline::plot::{
    render_ridgeline, render_roofline, PlotStyle, RidgelinePoint, RooflinePoint,
};

fn sweep_points(tolerance: f64) -> Vec<RidgelinePoint> {
    let table = batch_sweep(
        &MlpSpec::case_study(),
        &[256, 512, 1024, 2048, 4096],
        &MachineSpec::cascade_lake(),
        &AllReduceModel::ideal(1).unwrap(),
        tolerance,
    )
    .unwrap();
    table
        .rows
        .iter()
        .map(|r| {
            let (i_m, i_a) = r.intensities.plane_coords().unwrap();
            RidgelinePoint {
                i_m,
                i_a,
                label: format!("b={}", r.batch),
                region: r.report.region,
                on_boundary: r.report.on_boundary(),
            }
        })
        .collect()
}

#[test]
fn documents_are_well_formed_with_explicit_size() {
    let clx = MachineSpec::cascade_lake();
    let curve = roofline_curve(&clx, CurveKind::MemoryNetwork, (0.01, 1e4), 50).unwrap();
    let docs = [
        render_roofline(
            &curve,
            &[RooflinePoint::new(2.0, 1e10, "<odd & label>")],
            &PlotStyle::default(),
        )
        .unwrap(),
        render_ridgeline(
            &ridgeline_geometry(&clx),
            &sweep_points(DEFAULT_TOLERANCE),
            &PlotStyle::default(),
        )
        .unwrap(),
    ];
    for svg in &docs {
        let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "svg");
        assert_eq!(root.attribute("width"), Some("800"));
        assert_eq!(root.attribute("height"), Some("600"));
        assert_eq!(root.attribute("version"), Some("1.1"));
    }
}

#[test]
fn ridgeline_markers_match_independent_transform() {
    let clx = MachineSpec::cascade_lake();
    let points = sweep_points(DEFAULT_TOLERANCE);
    let svg = render_ridgeline(&ridgeline_geometry(&clx), &points, &PlotStyle::default()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let t = Transform::read(&doc);
    let found = markers(&doc);
    assert_eq!(found.len(), points.len());
    for (p, (label, cx, cy, _)) in points.iter().zip(&found) {
        assert_eq!(&p.label, label);
        let (x, y) = t.to_pixel(p.i_m, p.i_a);
        assert_eq!(format!("{x:.3}"), *cx);
        assert_eq!(format!("{y:.3}"), *cy);
    }
}

#[test]
fn roofline_markers_match_independent_transform() {
    let clx = MachineSpec::cascade_lake();
    let curve = roofline_curve(&clx, CurveKind::ComputeNetwork, (1.0, 1e5), 80).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points: Vec<RooflinePoint> = (0..200)
        .map(|i| {
            RooflinePoint::new(
                10f64.powf(rng.gen_range(-1.0..6.0)),
                10f64.powf(rng.gen_range(9.0..15.0)),
                format!("p{i}"),
            )
        })
        .collect();
    let svg = render_roofline(&curve, &points, &PlotStyle::default()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let t = Transform::read(&doc);
    for (p, (_, cx, cy, _)) in points.iter().zip(markers(&doc)) {
        let (x, y) = t.to_pixel(p.intensity, p.throughput);
        assert_eq!(format!("{x:.3}"), cx);
        assert_eq!(format!("{y:.3}"), cy);
    }
}

#[test]
fn shaded_regions_agree_with_geometric_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let machines = [
        MachineSpec::cascade_lake(),
        MachineSpec::new("decade", 100.0, 10.0, 1.0).unwrap(),
        MachineSpec::new("skewed", 3e14, 2e12, 2.5e10).unwrap(),
    ];
    for machine in &machines {
        for style in [
            PlotStyle::default(),
            PlotStyle {
                x_range: Some((1e-3, 1e2)),
                y_range: Some((1e-1, 1e6)),
                ..PlotStyle::default()
            },
        ] {
            let svg = render_ridgeline(&ridgeline_geometry(machine), &[], &style).unwrap();
            let doc = roxmltree::Document::parse(&svg).unwrap();
            let t = Transform::read(&doc);
            let polys = polygons(&doc);
            assert_eq!(polys.len(), 3);
            let mut checked = 0;
            for _ in 0..5000 {
                let px = rng.gen_range(t.left..t.right);
                let py = rng.gen_range(t.top..t.bottom);
                let classify = |px: f64, py: f64| {
                    let (x, y) = t.to_data(px, py);
                    classify_geometric(machine, &IntensityPoint::from_plane(x, y)).unwrap()
                };
                let region = classify(px, py);
                // skip samples within a pixel of a region boundary
                let stable = [(-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0)]
                    .iter()
                    .all(|(dx, dy)| classify(px + dx, py + dy) == region);
                if !stable {
                    continue;
                }
                let containing: Vec<Region> = polys
                    .iter()
                    .filter(|(_, poly)| inside(poly, (px, py)))
                    .map(|(r, _)| *r)
                    .collect();
                assert_eq!(
                    containing,
                    vec![region],
                    "pixel ({px}, {py}) on {}",
                    machine.name()
                );
                checked += 1;
            }
            assert!(checked > 4000);
        }
    }
}

#[test]
fn center_point_sits_on_separator_intersection() {
    let g = ridgeline_geometry(&MachineSpec::cascade_lake());
    let p = RidgelinePoint {
        i_m: g.x_star,
        i_a: g.y_star,
        label: "center".into(),
        region: Region::Compute,
        on_boundary: true,
    };
    let svg = render_ridgeline(&g, &[p], &PlotStyle::default()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let sep = |axis: &str| {
        doc.descendants()
            .find(|n| {
                n.attribute("class") == Some("separator") && n.attribute("data-axis") == Some(axis)
            })
            .unwrap()
    };
    let (_, cx, cy, boundary) = markers(&doc).remove(0);
    assert_eq!(sep("x").attribute("x1"), Some(cx.as_str()));
    assert_eq!(sep("y").attribute("y1"), Some(cy.as_str()));
    assert!(boundary);
    let center = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("center"))
        .unwrap();
    assert_eq!(center.attribute("cx"), Some(cx.as_str()));
    assert_eq!(center.attribute("cy"), Some(cy.as_str()));
}

#[test]
fn case_study_layout_on_ridgeline() {
    let g = ridgeline_geometry(&MachineSpec::cascade_lake());
    // a 25% band around the diagonal marks batch 512 as on the ridgeline
    let points = sweep_points(0.25);
    let svg = render_ridgeline(&g, &points, &PlotStyle::default()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let found = markers(&doc);
    let by_label = |l: &str| found.iter().find(|m| m.0 == l).unwrap();
    assert!(by_label("b=512").3);
    assert!(!by_label("b=256").3);
    assert!(!by_label("b=1024").3);
    let regions: Vec<(String, Region)> =
        points.iter().map(|p| (p.label.clone(), p.region)).collect();
    assert_eq!(regions[0], ("b=256".into(), Region::Network));
    assert!(regions[2..].iter().all(|(_, r)| *r == Region::Compute));
    for p in &points[2..] {
        assert_eq!(
            classify_geometric(
                &MachineSpec::cascade_lake(),
                &IntensityPoint::from_plane(p.i_m, p.i_a)
            )
            .unwrap(),
            Region::Compute
        );
    }
}
