//! Segment intersection tests for sampled polylines.

use crate::vec2::{point_segment_distance, Vec2};

/// Returns true when the segments `[a, b]` and `[c, d]` intersect or come
/// closer than `tol`.
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2, tol: f64) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
}

/// Sweep-and-prune self-intersection test. Segment `i` joins `points[i]` and
/// `points[i + 1]`; a closed polyline also has the segment from the last
/// point back to the first. Adjacent segments are never compared.
pub fn polyline_is_simple(points: &[Vec2], closed: bool, tol: f64) -> bool {
    let n = points.len();
    if n < 3 {
        return !closed;
    }
    let seg_count = if closed { n } else { n - 1 };
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    let mut order: Vec<(f64, f64, usize)> = (0..seg_count)
        .map(|i| {
            let (a, b) = seg(i);
            (a.x.min(b.x) - tol, a.x.max(b.x) + tol, i)
        })
        .collect();
    order.sort_by(|l, r| l.0.total_cmp(&r.0));

    for (k, &(_, xmax, i)) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let (ylo, yhi) = (a.y.min(b.y) - tol, a.y.max(b.y) + tol);
        for &(xmin_j, _, j) in &order[k + 1..] {
            if xmin_j > xmax {
                break;
            }
            let gap = i.abs_diff(j);
            if gap <= 1 || (closed && gap == seg_count - 1) {
                continue;
            }
            let (c, d) = seg(j);
            if c.y.max(d.y) < ylo || c.y.min(d.y) > yhi {
                continue;
            }
            if segments_intersect(a, b, c, d, tol) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_simple_bowtie_is_not() {
        let square = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(polyline_is_simple(&square, true, 0.0));
        let bowtie = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(!polyline_is_simple(&bowtie, true, 0.0));
    }

    #[test]
    fn open_polyline_crossing_itself() {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, -1.0),
        ];
        assert!(!polyline_is_simple(&pts, false, 0.0));
        assert!(polyline_is_simple(&pts[..3], false, 0.0));
    }
}
