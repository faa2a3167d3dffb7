use std::fmt::Write as _;

use isocurve::cover::CoverCurve;
use isocurve::{ParallelSet, Piece, SampledCurve, Trace, Vec2};

/// The trace as `piece,kind,x,y` rows; closed arcs repeat their first point.
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from("piece,kind,x,y\n");
    for (k, piece) in trace.pieces.iter().enumerate() {
        let (kind, points): (&str, Vec<Vec2>) = match piece {
            Piece::Arc(arc) => {
                let mut pts = arc.points.clone();
                if arc.closed {
                    pts.push(arc.points[0]);
                }
                ("arc", pts)
            }
            Piece::Segment { from, to } => ("segment", vec![*from, *to]),
        };
        for p in points {
            let _ = writeln!(out, "{k},{kind},{:?},{:?}", p.x, p.y);
        }
    }
    out
}

fn path(points: impl IntoIterator<Item = Vec2>, close: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.into_iter().enumerate() {
        let _ = write!(d, "{}{:.6},{:.6} ", if i == 0 { "M" } else { "L" }, p.x, -p.y);
    }
    if close {
        d.push('Z');
    }
    d
}

/// Boundary, `S_t` and the covering curve overlaid in one drawing.
pub fn overlay_svg(curve: &SampledCurve, ps: &ParallelSet, cover: &CoverCurve) -> String {
    let (lo, hi) = curve.bounding_box();
    let pad = 0.05 * (hi - lo).norm();
    let (x, y) = (lo.x - pad, -hi.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let stroke = 0.004 * (w.max(h));
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x:.6} {y:.6} {w:.6} {h:.6}\" width=\"800\" height=\"{:.0}\">\n",
        800.0 * h / w
    );
    let _ = writeln!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"{stroke:.6}\"/>",
        path(curve.points.iter().copied(), true)
    );
    for piece in &cover.trace.pieces {
        if let Piece::Segment { from, to } = piece {
            let _ = writeln!(
                svg,
                "<path d=\"{}\" fill=\"none\" stroke=\"#c33\" stroke-width=\"{:.6}\" stroke-dasharray=\"{:.6}\"/>",
                path([*from, *to], false),
                stroke,
                4.0 * stroke
            );
        }
    }
    for arc in &ps.arcs {
        let _ = writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"#26b\" stroke-width=\"{:.6}\"/>",
            path(arc.points.iter().copied(), arc.closed),
            1.5 * stroke
        );
    }
    svg.push_str("</svg>\n");
    svg
}
