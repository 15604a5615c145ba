//! The second construction, for large m: one color per layer.
//!
//! A layer splits into fragments of `k = k1 x k2` rectangular cells; `m` of
//! them are colored and form one tile of width at most 1. Copies of the
//! colored tile sit on the row-offset lattice `T1 = (k1*cw, 0)`,
//! `T2 = (k1*cw/2, k2*ch)`, and validity again reduces to tile diameter at
//! most 1 and copy separation at least 1.

use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::geometry::Point;
use crate::{Error, Result};

/// A fragment grid with a colored m-subset of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct CellTiling {
    pub k1: u32,
    pub k2: u32,
    pub cw: f64,
    pub ch: f64,
    /// Colored cells as (col, row), 0-based from the fragment corner.
    pub colored: BTreeSet<(u32, u32)>,
}

impl CellTiling {
    pub fn k(&self) -> u32 {
        self.k1 * self.k2
    }

    pub fn m(&self) -> u32 {
        self.colored.len() as u32
    }

    /// Copy lattice of the colored tile.
    pub fn lattice(&self) -> (Point, Point) {
        let t1 = Point::new(self.k1 as f64 * self.cw, 0.0);
        let t2 = Point::new(self.k1 as f64 * self.cw / 2.0, self.k2 as f64 * self.ch);
        (t1, t2)
    }

    pub fn cell_rect(&self, col: u32, row: u32) -> Rect {
        Rect {
            x0: col as f64 * self.cw,
            y0: row as f64 * self.ch,
            x1: (col + 1) as f64 * self.cw,
            y1: (row + 1) as f64 * self.ch,
        }
    }

    pub fn fragment_center(&self) -> Point {
        Point::new(self.k1 as f64 * self.cw / 2.0, self.k2 as f64 * self.ch / 2.0)
    }

    /// 4-connectivity of the colored set.
    pub fn is_colored_connected(&self) -> bool {
        let Some(&start) = self.colored.iter().next() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some((c, r)) = stack.pop() {
            let mut push = |cc: i64, rr: i64| {
                if cc >= 0 && rr >= 0 {
                    let key = (cc as u32, rr as u32);
                    if self.colored.contains(&key) && seen.insert(key) {
                        stack.push(key);
                    }
                }
            };
            push(c as i64 - 1, r as i64);
            push(c as i64 + 1, r as i64);
            push(c as i64, r as i64 - 1);
            push(c as i64, r as i64 + 1);
        }
        seen.len() == self.colored.len()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ]
    }

    fn translated(&self, v: Point) -> Rect {
        Rect { x0: self.x0 + v.x, y0: self.y0 + v.y, x1: self.x1 + v.x, y1: self.y1 + v.y }
    }
}

/// Distance between two closed axis-aligned rectangles.
pub fn rect_distance(a: &Rect, b: &Rect) -> f64 {
    let dx = (b.x0 - a.x1).max(a.x0 - b.x1).max(0.0);
    let dy = (b.y0 - a.y1).max(a.y0 - b.y1).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

/// Target region the colored cells approximate.
#[derive(Clone, Copy, Debug)]
pub struct TargetShape {
    pub kind: TargetKind,
    pub center: Point,
}

#[derive(Clone, Copy, Debug)]
pub enum TargetKind {
    Disc { diameter: f64 },
    /// Croft's rounded hexagon: a disc of diameter `scale` intersected with
    /// the concentric regular hexagon of inradius `(scale/2)*cos(theta)`,
    /// flats facing the lattice directions (normals at 0, 60, 120 degrees).
    Croft { theta: f64, scale: f64 },
}

impl TargetShape {
    pub fn disc(diameter: f64) -> Self {
        TargetShape { kind: TargetKind::Disc { diameter }, center: Point::ORIGIN }
    }

    pub fn croft(theta: f64, scale: f64) -> Self {
        TargetShape { kind: TargetKind::Croft { theta, scale }, center: Point::ORIGIN }
    }

    pub fn at(mut self, center: Point) -> Self {
        self.center = center;
        self
    }

    /// Signed margin: positive inside. For the croft intersection this is
    /// the minimum constraint margin, the exact signed distance inside.
    pub fn signed_depth(&self, p: Point) -> f64 {
        let v = p - self.center;
        match self.kind {
            TargetKind::Disc { diameter } => diameter / 2.0 - v.norm(),
            TargetKind::Croft { theta, scale } => {
                let radius = scale / 2.0;
                let flat = radius * theta.cos();
                let mut depth = radius - v.norm();
                for normal in [
                    Point::new(1.0, 0.0),
                    Point::new(0.5, 3.0_f64.sqrt() / 2.0),
                    Point::new(-0.5, 3.0_f64.sqrt() / 2.0),
                ] {
                    depth = depth.min(flat - v.dot(normal).abs());
                }
                depth
            }
        }
    }
}

/// Color the `m` cells sitting deepest inside the target shape, centered at
/// the fragment center. Ranking: worst-corner signed depth, ties broken by
/// the angle of the cell center about the shape center, then (col, row).
/// Validity is not guaranteed; pair with [`verify_cell_tiling`].
pub fn select_cells(
    k1: u32,
    k2: u32,
    cw: f64,
    ch: f64,
    m: u32,
    shape: &TargetShape,
) -> Result<CellTiling> {
    if k1 == 0 || k2 == 0 || !(cw > 0.0) || !(ch > 0.0) {
        return Err(Error::Cell("grid dimensions and cell sizes must be positive".into()));
    }
    if m > k1 * k2 {
        return Err(Error::Cell(format!("m = {m} exceeds fragment capacity {}", k1 * k2)));
    }
    let mut tiling = CellTiling { k1, k2, cw, ch, colored: BTreeSet::new() };
    let shape = shape.at(tiling.fragment_center());
    let mut ranked: Vec<((u32, u32), f64, f64)> = Vec::with_capacity((k1 * k2) as usize);
    for col in 0..k1 {
        for row in 0..k2 {
            let rect = tiling.cell_rect(col, row);
            let depth = rect
                .corners()
                .iter()
                .map(|c| shape.signed_depth(*c))
                .fold(f64::INFINITY, f64::min);
            let center = Point::new((rect.x0 + rect.x1) / 2.0, (rect.y0 + rect.y1) / 2.0);
            let angle = (center - shape.center).angle();
            ranked.push(((col, row), depth, angle));
        }
    }
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| a.2.partial_cmp(&b.2).unwrap())
            .then_with(|| a.0.cmp(&b.0))
    });
    tiling.colored = ranked.iter().take(m as usize).map(|(cell, _, _)| *cell).collect();
    Ok(tiling)
}

#[derive(Clone, Copy, Debug)]
pub struct CellReport {
    pub diameter: f64,
    pub min_gap: f64,
    pub valid: bool,
}

/// Exact diameter and copy-separation check for a cell tiling.
pub fn verify_cell_tiling(ct: &CellTiling) -> CellReport {
    let rects: Vec<Rect> = ct.colored.iter().map(|&(c, r)| ct.cell_rect(c, r)).collect();
    if rects.is_empty() {
        return CellReport { diameter: 0.0, min_gap: f64::INFINITY, valid: true };
    }
    let corners: Vec<Point> = rects.iter().flat_map(|r| r.corners()).collect();
    let hull = convex_hull(&corners);
    let mut diameter2 = 0.0f64;
    for (i, a) in hull.iter().enumerate() {
        for b in hull.iter().skip(i + 1) {
            diameter2 = diameter2.max(a.dist2(*b));
        }
    }
    let diameter = diameter2.sqrt();

    let (t1, t2) = ct.lattice();
    let mut min_gap = f64::INFINITY;
    let mut ring: i64 = 1;
    loop {
        let mut ring_min_norm = f64::INFINITY;
        for a in -ring..=ring {
            for b in -ring..=ring {
                if a.abs().max(b.abs()) != ring {
                    continue;
                }
                let v = t1 * a as f64 + t2 * b as f64;
                ring_min_norm = ring_min_norm.min(v.norm());
                if v.norm() - diameter >= min_gap {
                    continue;
                }
                let gap = translate_gap(&rects, v, min_gap);
                min_gap = min_gap.min(gap);
            }
        }
        if min_gap.is_finite() && ring >= 2 && ring_min_norm * 2.0 - diameter >= min_gap {
            break;
        }
        ring += 1;
        if ring > 64 {
            break;
        }
    }
    let valid = diameter <= 1.0 + 1e-12 && min_gap >= 1.0 - 1e-9;
    CellReport { diameter, min_gap, valid }
}

fn translate_gap(rects: &[Rect], v: Point, cutoff: f64) -> f64 {
    let mut best = f64::INFINITY;
    for a in rects {
        let acx = (a.x0 + a.x1) / 2.0;
        let acy = (a.y0 + a.y1) / 2.0;
        let diag = Point::new(a.x1 - a.x0, a.y1 - a.y0).norm();
        for b in rects {
            let moved_cx = (b.x0 + b.x1) / 2.0 + v.x;
            let moved_cy = (b.y0 + b.y1) / 2.0 + v.y;
            let center_gap = Point::new(moved_cx - acx, moved_cy - acy).norm() - diag;
            if center_gap >= best.min(cutoff) {
                continue;
            }
            let d = rect_distance(a, &b.translated(v));
            if d < best {
                best = d;
            }
        }
    }
    best
}

fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in pts.iter().chain(pts.iter().rev()) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Outcome of a cellular scan.
#[derive(Clone, Debug)]
pub struct CellularSearch {
    pub tiling: CellTiling,
    pub report: CellReport,
    /// Set when the scan budget ran out before a valid tiling appeared; the
    /// best attempt is still returned.
    pub budget_exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeFamily {
    Disc,
    Croft,
}

/// Scan grid dimensions and the croft corner angle for the smallest valid
/// fragment at a given `m`.
///
/// Grid candidates come from an area estimate around the target-shape
/// optimum; cell aspect follows from pinning `|T1| = 1 + width` and
/// `|T2| = 2`. A fragment always exists for every `m` because cells may
/// stay uncolored, so on budget exhaustion the scan falls back to growing
/// the best grid until it verifies.
pub fn best_cellular(m: u32, family: ShapeFamily) -> Result<CellularSearch> {
    if m == 0 {
        return Err(Error::Cell("m must be positive".into()));
    }
    let thetas: Vec<f64> = (0..=20).map(|i| 0.05 + 0.40 * i as f64 / 20.0).collect();
    let mut candidates: Vec<(u32, u32, f64)> = Vec::new();
    for &theta in &thetas {
        let (width, height) = lattice_extents(theta, family);
        // Fill estimate: usable area shrinks by roughly one cell-perimeter
        // band; aim a little above m cells inside the target.
        let target_area = match family {
            ShapeFamily::Disc => std::f64::consts::PI / 4.0,
            ShapeFamily::Croft => {
                let a = std::f64::consts::PI / 6.0 - theta + (2.0 * theta).sin() / 2.0;
                1.5 * a
            }
        };
        let frag_area = width * height;
        for slack in [1.02, 1.06, 1.10, 1.16, 1.25, 1.4, 1.7, 2.2, 3.0] {
            let k_est = (m as f64 * frag_area / target_area * slack).ceil();
            let aspect = width / height;
            let k1 = (k_est * aspect).sqrt().round().max(1.0) as u32;
            let k2 = (k_est / k_est.sqrt() / aspect.sqrt()).round().max(1.0) as u32;
            for dk1 in -2i64..=2 {
                for dk2 in -2i64..=2 {
                    let k1 = (k1 as i64 + dk1).max(1) as u32;
                    let k2 = (k2 as i64 + dk2).max(1) as u32;
                    if k1 * k2 >= m {
                        candidates.push((k1, k2, theta));
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| (a.0 * a.1).cmp(&(b.0 * b.1)).then(a.partial_cmp(b).unwrap()));
    candidates.dedup();

    let evaluated: Vec<(u32, CellTiling, CellReport)> = candidates
        .par_iter()
        .filter_map(|&(k1, k2, theta)| {
            let (width, height) = lattice_extents(theta, family);
            let cw = (1.0 + width) / k1 as f64;
            let ch = height / k2 as f64;
            let shape = match family {
                ShapeFamily::Disc => TargetShape::disc(1.0),
                ShapeFamily::Croft => TargetShape::croft(theta, 1.0),
            };
            let tiling = select_cells(k1, k2, cw, ch, m, &shape).ok()?;
            let report = verify_cell_tiling(&tiling);
            report.valid.then_some((k1 * k2, tiling, report))
        })
        .collect();

    if let Some((_, tiling, report)) = evaluated.into_iter().min_by_key(|(k, _, _)| *k) {
        return Ok(CellularSearch { tiling, report, budget_exhausted: false });
    }

    // Fallback: a sufficiently fine disc grid always verifies, leaving the
    // spare cells uncolored.
    let mut k1 = ((m as f64).sqrt().ceil() as u32).max(2) * 2;
    loop {
        let k2 = k1;
        let cw = 1.9 / k1 as f64;
        let ch = (4.0f64 - 0.9025).sqrt() / k2 as f64;
        if k1 * k2 >= m {
            let tiling = select_cells(k1, k2, cw, ch, m, &TargetShape::disc(0.98))?;
            let report = verify_cell_tiling(&tiling);
            if report.valid {
                return Ok(CellularSearch { tiling, report, budget_exhausted: true });
            }
        }
        k1 += 4;
        if k1 > 4096 {
            return Err(Error::Cell(format!("no valid cellular fragment found for m = {m}")));
        }
    }
}

fn lattice_extents(theta: f64, family: ShapeFamily) -> (f64, f64) {
    // Horizontal tile width across the flat (croft) or the full diameter
    // (disc, slightly squeezed so the T1 gap clears 1).
    let width = match family {
        ShapeFamily::Disc => 0.945,
        ShapeFamily::Croft => theta.cos(),
    };
    let t1 = 1.0 + width;
    let height = (4.0f64 - (t1 / 2.0).powi(2)).sqrt();
    (width, height)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_distance_basics() {
        let a = Rect { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 };
        let b = Rect { x0: 2.0, y0: 0.0, x1: 3.0, y1: 1.0 };
        assert!((rect_distance(&a, &b) - 1.0).abs() < 1e-15);
        let c = Rect { x0: 2.0, y0: 2.0, x1: 3.0, y1: 3.0 };
        assert!((rect_distance(&a, &c) - 2.0f64.sqrt()).abs() < 1e-15);
        let overlapping = Rect { x0: 0.5, y0: 0.5, x1: 1.5, y1: 1.5 };
        assert_eq!(rect_distance(&a, &overlapping), 0.0);
    }

    #[test]
    fn single_center_cell_valid() {
        let tiling = select_cells(5, 5, 0.4, 0.4, 1, &TargetShape::disc(1.0)).unwrap();
        assert_eq!(tiling.colored.len(), 1);
        assert!(tiling.colored.contains(&(2, 2)));
        let report = verify_cell_tiling(&tiling);
        assert!((report.diameter - 0.4 * 2.0f64.sqrt()).abs() < 1e-12);
        assert!(report.valid, "gap = {}", report.min_gap);
    }

    #[test]
    fn touching_copies_invalid() {
        let tiling = CellTiling {
            k1: 1,
            k2: 1,
            cw: 0.5,
            ch: 0.5,
            colored: BTreeSet::from([(0, 0)]),
        };
        let report = verify_cell_tiling(&tiling);
        assert_eq!(report.min_gap, 0.0);
        assert!(!report.valid);
    }

    #[test]
    fn oversized_diameter_invalid() {
        let tiling = CellTiling {
            k1: 40,
            k2: 40,
            cw: 0.1,
            ch: 0.1,
            colored: (0..12).map(|c| (c, 0)).collect(),
        };
        let report = verify_cell_tiling(&tiling);
        assert!(report.diameter > 1.0);
        assert!(!report.valid);
    }

    #[test]
    fn capacity_checked() {
        assert!(select_cells(2, 2, 0.1, 0.1, 5, &TargetShape::disc(1.0)).is_err());
    }

    #[test]
    fn verdict_invariant_under_translation_and_rotation() {
        let base = select_cells(30, 30, 0.031, 0.033, 60, &TargetShape::disc(1.0)).unwrap();
        let report = verify_cell_tiling(&base);

        let translated = CellTiling {
            colored: base.colored.iter().map(|&(c, r)| (c + 2, r + 1)).collect(),
            ..base.clone()
        };
        assert!(translated.colored.iter().all(|&(c, r)| c < 30 && r < 30));
        let report_t = verify_cell_tiling(&translated);
        assert!((report.diameter - report_t.diameter).abs() < 1e-12);
        assert!((report.min_gap - report_t.min_gap).abs() < 1e-12);
        assert_eq!(report.valid, report_t.valid);

        let rotated = CellTiling {
            colored: base.colored.iter().map(|&(c, r)| (29 - c, 29 - r)).collect(),
            ..base.clone()
        };
        let report_r = verify_cell_tiling(&rotated);
        assert!((report.diameter - report_r.diameter).abs() < 1e-12);
        assert!((report.min_gap - report_r.min_gap).abs() < 1e-12);
    }

    #[test]
    fn min_gap_lipschitz_in_cell_size() {
        let tiling = select_cells(20, 20, 0.04, 0.042, 40, &TargetShape::disc(1.0)).unwrap();
        let base = verify_cell_tiling(&tiling).min_gap;
        let eps = 1e-6;
        for (dcw, dch) in [(eps, 0.0), (0.0, eps)] {
            let perturbed = CellTiling { cw: tiling.cw + dcw, ch: tiling.ch + dch, ..tiling.clone() };
            let gap = verify_cell_tiling(&perturbed).min_gap;
            // Positions scale with the grid dimensions, so the geometric
            // Lipschitz constant is bounded by a few grid diameters.
            let bound = 4.0 * (tiling.k1 + tiling.k2) as f64 * eps;
            assert!((gap - base).abs() <= bound, "gap moved {} > {bound}", (gap - base).abs());
        }
    }

    #[test]
    fn tiny_single_cell_analytic() {
        // One colored cell of size eps with lattice spacing > 1 + eps stays
        // valid for all eps up to 1/sqrt(2).
        for eps in [0.05, 0.2, 0.5, 0.7] {
            let k1 = (1.2 / eps).ceil() as u32 + 2;
            let tiling = CellTiling {
                k1,
                k2: k1,
                cw: eps,
                ch: eps,
                colored: BTreeSet::from([(0, 0)]),
            };
            let report = verify_cell_tiling(&tiling);
            assert!(report.diameter <= 1.0 + 1e-12);
            assert!(report.valid, "eps={eps}: gap {}", report.min_gap);
        }
    }

    #[test]
    fn best_cellular_small_m() {
        let result = best_cellular(1, ShapeFamily::Disc).unwrap();
        assert!(result.report.valid);
        assert_eq!(result.tiling.m(), 1);
        let result = best_cellular(5, ShapeFamily::Croft).unwrap();
        assert!(result.report.valid);
        assert_eq!(result.tiling.m(), 5);
    }
}
