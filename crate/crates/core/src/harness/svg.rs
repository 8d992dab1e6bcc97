use std::fmt::Write as _;
use std::path::Path;

use crate::tessellation::HyperplaneProcessSample;

/// Planar things that can be drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum SvgObject {
    Polygon(Vec<[f64; 2]>),
    Chord([f64; 2], [f64; 2]),
    Circle { center: [f64; 2], radius: f64 },
    Point([f64; 2]),
}

const SIZE: f64 = 1000.0;

fn bounds(objects: &[SvgObject]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    let mut add = |p: [f64; 2]| {
        b[0] = b[0].min(p[0]);
        b[1] = b[1].min(p[1]);
        b[2] = b[2].max(p[0]);
        b[3] = b[3].max(p[1]);
    };
    for o in objects {
        match o {
            SvgObject::Polygon(ps) => ps.iter().for_each(|&p| add(p)),
            SvgObject::Chord(a, c) => {
                add(*a);
                add(*c);
            }
            SvgObject::Circle { center, radius } => {
                add([center[0] - radius, center[1] - radius]);
                add([center[0] + radius, center[1] + radius]);
            }
            SvgObject::Point(p) => add(*p),
        }
    }
    if !b[0].is_finite() || b[2] <= b[0] || b[3] <= b[1] {
        [-1.0, -1.0, 1.0, 1.0]
    } else {
        b
    }
}

/// Deterministic SVG text: same objects, same bytes.
pub fn render_svg(objects: &[SvgObject]) -> String {
    let [x0, y0, x1, y1] = bounds(objects);
    let span = (x1 - x0).max(y1 - y0) * 1.05;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let s = SIZE / span;
    // y grows upwards in the plane and downwards on the canvas
    let map = |p: [f64; 2]| (SIZE / 2.0 + s * (p[0] - cx), SIZE / 2.0 - s * (p[1] - cy));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for o in objects {
        match o {
            SvgObject::Polygon(ps) if !ps.is_empty() => {
                let mut d = String::new();
                for (i, &p) in ps.iter().enumerate() {
                    let (x, y) = map(p);
                    let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
                }
                d.push('Z');
                let _ = writeln!(
                    out,
                    "<path d=\"{d}\" fill=\"#cfe0f5\" fill-opacity=\"0.6\" stroke=\"#1f4e89\" stroke-width=\"1.5\"/>"
                );
            }
            SvgObject::Polygon(_) => {}
            SvgObject::Chord(a, b) => {
                let ((ax, ay), (bx, by)) = (map(*a), map(*b));
                let _ = writeln!(
                    out,
                    "<path d=\"M{ax:.3},{ay:.3} L{bx:.3},{by:.3}\" stroke=\"#444\" stroke-width=\"1\"/>"
                );
            }
            SvgObject::Circle { center, radius } => {
                let (x, y) = map(*center);
                let _ = writeln!(
                    out,
                    "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#b22\" stroke-dasharray=\"4 3\"/>",
                    s * radius
                );
            }
            SvgObject::Point(p) => {
                let (x, y) = map(*p);
                let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2\" fill=\"black\"/>");
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(objects: &[SvgObject], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg(objects))
}

/// The window circle and one chord per hyperplane of a planar process.
pub fn tessellation_objects(process: &HyperplaneProcessSample) -> Vec<SvgObject> {
    assert_eq!(process.dim, 2, "only planar tessellations can be drawn");
    let r = process.window_radius;
    let mut out = vec![SvgObject::Circle {
        center: [0.0, 0.0],
        radius: r,
    }];
    for h in &process.hyperplanes {
        let (u, t) = (&h.direction, h.distance);
        if t.abs() >= r {
            continue;
        }
        let half = (r * r - t * t).sqrt();
        let (fx, fy) = (t * u[0], t * u[1]);
        out.push(SvgObject::Chord(
            [fx - half * u[1], fy + half * u[0]],
            [fx + half * u[1], fy - half * u[0]],
        ));
    }
    out
}

pub fn polygon_object(vertices: &[Vec<f64>]) -> SvgObject {
    SvgObject::Polygon(vertices.iter().map(|v| [v[0], v[1]]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;
    use crate::tessellation::sample_pht;

    #[test]
    fn empty_canvas() {
        let s = render_svg(&[]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(!s.contains("<path"));
    }

    #[test]
    fn one_path_per_chord_and_deterministic() {
        let draw = || {
            let mut rng = RngStream::new(3, 0);
            let p = sample_pht(2, 0.5, 3.0, &mut rng).unwrap();
            (p.hyperplanes.len(), render_svg(&tessellation_objects(&p)))
        };
        let (k, a) = draw();
        let (_, b) = draw();
        assert_eq!(a, b);
        assert_eq!(a.matches("<path").count(), k);
    }
}
