//! Deterministic SVG pictures of planar scenes.
//!
//! Coordinates are computed exactly and only rounded to six decimals when
//! written out.

use std::fmt::Write as _;

use latcut_core::lattice::{enumerate_points, BoxRegion, Lattice, Mode, Region};
use latcut_core::polyhedron::{HPolyhedron, Inequality};
use latcut_core::{Error, QVector, Result, Scalar};

const UNIT: i64 = 60;
const MARGIN: i64 = 20;

pub struct Scene<'a> {
    pub bodies: Vec<&'a HPolyhedron>,
    pub lattice: &'a Lattice,
    pub anchor: Option<&'a QVector>,
    pub rays: &'a [QVector],
    pub viewport: &'a BoxRegion,
}

struct Frame {
    x0: Scalar,
    y1: Scalar,
}

impl Frame {
    fn x(&self, x: &Scalar) -> String {
        let v = &(x - &self.x0) * &Scalar::from_int(UNIT) + Scalar::from_int(MARGIN);
        v.to_decimal(6)
    }

    fn y(&self, y: &Scalar) -> String {
        let v = &(&self.y1 - y) * &Scalar::from_int(UNIT) + Scalar::from_int(MARGIN);
        v.to_decimal(6)
    }

    fn point(&self, p: &QVector) -> String {
        format!("{},{}", self.x(&p[0]), self.y(&p[1]))
    }
}

/// Vertices of `body` clipped to the viewport, in counterclockwise order.
fn clipped_outline(body: &HPolyhedron, viewport: &BoxRegion) -> Result<Vec<QVector>> {
    let walls: Vec<Inequality> = viewport.to_polyhedron().inequalities;
    let clip = body.restricted(&[], &walls)?;
    if clip.is_empty() {
        return Ok(Vec::new());
    }
    let mut pts = clip.vertices()?;
    if pts.len() < 3 {
        return Ok(pts);
    }
    let n = Scalar::from_int(pts.len() as i64);
    let cx: Scalar = pts.iter().map(|p| p[0].clone()).sum::<Scalar>() / &n;
    let cy: Scalar = pts.iter().map(|p| p[1].clone()).sum::<Scalar>() / &n;
    // Display order only.
    let angle = |p: &QVector| (&p[1] - &cy).to_f64().atan2((&p[0] - &cx).to_f64());
    pts.sort_by(|a, b| angle(a).total_cmp(&angle(b)).then_with(|| a.cmp(b)));
    Ok(pts)
}

pub fn render_svg(scene: &Scene<'_>) -> Result<String> {
    let vp = scene.viewport;
    let two = |n: usize| n == 2;
    if !two(vp.dim())
        || !two(scene.lattice.ambient_dim())
        || scene.bodies.iter().any(|b| !two(b.ambient_dim()))
        || scene.anchor.is_some_and(|f| !two(f.dim()))
        || scene.rays.iter().any(|r| !two(r.dim()))
    {
        return Err(Error::NotTwoDimensional);
    }
    let frame = Frame {
        x0: vp.lower[0].clone(),
        y1: vp.upper[1].clone(),
    };
    let size = |lo: &Scalar, hi: &Scalar| (&(hi - lo) * &Scalar::from_int(UNIT) + Scalar::from_int(2 * MARGIN)).to_decimal(6);
    let width = size(&vp.lower[0], &vp.upper[0]);
    let height = size(&vp.lower[1], &vp.upper[1]);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str(concat!(
        "<style>\n",
        ".body{fill:#9ecae1;fill-opacity:0.5;stroke:#08519c;stroke-width:2}\n",
        ".body.unbounded{stroke-dasharray:6,3}\n",
        ".point{fill:#252525}\n",
        ".ray{stroke:#a50f15;stroke-width:2;marker-end:url(#arrow)}\n",
        ".anchor{fill:#a50f15}\n",
        "</style>\n",
        "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\">",
        "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#a50f15\"/></marker></defs>\n",
    ));
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##);

    if !scene.bodies.is_empty() {
        out.push_str("<g id=\"bodies\">\n");
        for body in &scene.bodies {
            let outline = clipped_outline(body, vp)?;
            if outline.is_empty() {
                continue;
            }
            let class = if body.is_bounded() { "body" } else { "body unbounded" };
            let points: Vec<String> = outline.iter().map(|p| frame.point(p)).collect();
            let tag = if outline.len() >= 3 { "polygon" } else { "polyline" };
            let _ = writeln!(out, r#"<{tag} class="{class}" points="{}"/>"#, points.join(" "));
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g id=\"lattice\">\n");
    for p in enumerate_points(scene.lattice, Region::Box(vp), Mode::Closed)? {
        let _ = writeln!(out, r#"<circle class="point" cx="{}" cy="{}" r="3"/>"#, frame.x(&p[0]), frame.y(&p[1]));
    }
    out.push_str("</g>\n");

    if let Some(f) = scene.anchor {
        if !scene.rays.is_empty() {
            out.push_str("<g id=\"rays\">\n");
            for r in scene.rays {
                let tip = f.add(r);
                let _ = writeln!(
                    out,
                    r#"<line class="ray" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    frame.x(&f[0]),
                    frame.y(&f[1]),
                    frame.x(&tip[0]),
                    frame.y(&tip[1])
                );
            }
            out.push_str("</g>\n");
        }
        let _ = writeln!(
            out,
            r#"<g id="anchor"><circle class="anchor" cx="{}" cy="{}" r="5"/></g>"#,
            frame.x(&f[0]),
            frame.y(&f[1])
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_scene() {
        let split = HPolyhedron::from_int_rows(&[(&[1, 0], 1), (&[-1, 0], 0)]);
        let z2 = Lattice::integer(2);
        let vp = BoxRegion::cube(2, -2, 3);
        let svg = render_svg(&Scene {
            bodies: vec![&split],
            lattice: &z2,
            anchor: None,
            rays: &[],
            viewport: &vp,
        })
        .unwrap();
        assert_eq!(svg.matches("<circle class=\"point\"").count(), 36);
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn empty_scene_and_dimension() {
        let z2 = Lattice::integer(2);
        let vp = BoxRegion::cube(2, 0, 1);
        let svg = render_svg(&Scene {
            bodies: vec![],
            lattice: &z2,
            anchor: None,
            rays: &[],
            viewport: &vp,
        })
        .unwrap();
        assert!(svg.contains("<g id=\"lattice\">") && !svg.contains("bodies"));
        let z3 = Lattice::integer(3);
        let vp3 = BoxRegion::cube(3, 0, 1);
        let err = render_svg(&Scene {
            bodies: vec![],
            lattice: &z3,
            anchor: None,
            rays: &[],
            viewport: &vp3,
        });
        assert_eq!(err, Err(Error::NotTwoDimensional));
    }
}
