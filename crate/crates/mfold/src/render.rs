//! Deterministic SVG rendering of tilings.
//!
//! The base layer is drawn with one fill per color index; tiles of the base
//! color across all layers are highlighted in gray on top, optionally with a
//! bold cluster outline and a square reference grid.

use std::fmt::Write;

use num_integer::Integer;

use crate::geometry::{build_hexagon, Point, Primitive, TileShape};
use crate::io::SolutionRecord;
use crate::tiling::{derive_points, lattice_to_cartesian, wavy_tile, TilingConfig, WavyTile};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    BaseLayer,
    BaseColor,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palette {
    HueWheel,
    Grayscale,
}

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub scope: Scope,
    pub cluster_outline: bool,
    pub grid_step: Option<f64>,
    pub palette: Palette,
    pub width: u32,
    pub height: u32,
    /// Pixels per unit distance.
    pub scale: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scope: Scope::Both,
            cluster_outline: false,
            grid_step: None,
            palette: Palette::HueWheel,
            width: 800,
            height: 800,
            scale: 200.0,
        }
    }
}

struct Canvas<'a> {
    svg: String,
    opts: &'a RenderOptions,
}

impl<'a> Canvas<'a> {
    fn new(opts: &'a RenderOptions) -> Self {
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            opts.width, opts.height, opts.width, opts.height
        );
        let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        Canvas { svg, opts }
    }

    /// World to screen; y axis points up in world coordinates.
    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.opts.width as f64 / 2.0 + p.x * self.opts.scale,
            self.opts.height as f64 / 2.0 - p.y * self.opts.scale,
        )
    }

    fn world_half_extent(&self) -> (f64, f64) {
        (
            self.opts.width as f64 / 2.0 / self.opts.scale,
            self.opts.height as f64 / 2.0 / self.opts.scale,
        )
    }

    fn path_from_sides(&self, sides: &[Vec<Primitive>], offset: Point) -> String {
        let mut d = String::new();
        let mut started = false;
        for side in sides {
            for piece in side {
                match piece {
                    Primitive::Point(_) => {}
                    Primitive::Segment(s) => {
                        let (x0, y0) = self.map(s.a + offset);
                        let (x1, y1) = self.map(s.b + offset);
                        if !started {
                            let _ = write!(d, "M{x0:.3} {y0:.3} ");
                            started = true;
                        }
                        let _ = write!(d, "L{x1:.3} {y1:.3} ");
                    }
                    Primitive::Arc(a) => {
                        let (p0, p1) = a.endpoints();
                        let (x0, y0) = self.map(p0 + offset);
                        let (x1, y1) = self.map(p1 + offset);
                        if !started {
                            let _ = write!(d, "M{x0:.3} {y0:.3} ");
                            started = true;
                        }
                        // ccw in world coordinates flips to the positive
                        // sweep under the y-axis flip.
                        let r = self.opts.scale;
                        let _ = write!(d, "A{r:.3} {r:.3} 0 0 1 {x1:.3} {y1:.3} ");
                    }
                }
            }
        }
        d.push('Z');
        d
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> (u8, u8, u8) {
    let c = v * s;
    let hp = (h / 60.0).rem_euclid(6.0);
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    (
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    )
}

fn fill_for(palette: Palette, id: usize, k: u32) -> String {
    match palette {
        Palette::HueWheel => {
            let (r, g, b) = hsv_to_rgb(id as f64 * 360.0 / k as f64, 0.55, 0.95);
            format!("#{r:02x}{g:02x}{b:02x}")
        }
        Palette::Grayscale => {
            let level = 120 + ((id as f64 / k.max(1) as f64) * 120.0) as u8;
            format!("#{level:02x}{level:02x}{level:02x}")
        }
    }
}

/// Color index of the tile at integer lattice position `(a, b)`: the coset
/// of the cluster lattice spanned by `p1` and `p2`, enumerated through a
/// Hermite-style reduction.
struct ColorIndexer {
    u1: i64,
    v1: i64,
    g: i64,
}

impl ColorIndexer {
    fn new(config: &TilingConfig) -> Self {
        let g = config.j1.gcd(&config.j2);
        let (u1, v1);
        if g == 0 {
            // Both cluster vectors horizontal never passes validation
            // (k = i1*j2 - i2*j1 would be 0); keep a safe fallback.
            u1 = config.k as i64;
            v1 = 0;
        } else {
            u1 = (config.k as i64) / g;
            // Extended gcd: x*j1 + y*j2 = g gives the second basis vector.
            let (_, x, y) = extended_gcd(config.j1, config.j2);
            v1 = (x * config.i1 + y * config.i2).rem_euclid(u1);
        }
        ColorIndexer { u1, v1, g: g.max(1) }
    }

    fn color(&self, a: i64, b: i64) -> usize {
        let b_red = b.rem_euclid(self.g);
        let steps = (b - b_red) / self.g;
        let a_adj = a - steps * self.v1;
        let a_red = a_adj.rem_euclid(self.u1);
        (a_red + self.u1 * b_red) as usize
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Render a solution record to an SVG document. Output is byte-identical
/// for identical inputs.
pub fn render_svg(record: &SolutionRecord, opts: &RenderOptions) -> Result<String> {
    match record {
        SolutionRecord::Hex(sol) => render_hex(&sol.config, &sol.shape, sol.wavy, opts),
        SolutionRecord::Bound { .. } => Err(crate::Error::Config(
            "combined/predicted records carry no tiling to render".into(),
        )),
        SolutionRecord::Cell { tiling, .. } => render_cell(tiling, opts),
    }
}

fn render_hex(
    config: &TilingConfig,
    shape: &TileShape,
    wavy: bool,
    opts: &RenderOptions,
) -> Result<String> {
    let mut canvas = Canvas::new(opts);
    let hex = build_hexagon(*shape)?;
    let basis = shape.lattice_basis();
    let tile: Option<WavyTile> = if wavy { wavy_tile(config, shape)? } else { None };
    let plain_sides: Vec<Vec<Primitive>> =
        (0..6).map(|i| vec![Primitive::Segment(hex.side(i))]).collect();
    let sides: &[Vec<Primitive>] = match &tile {
        Some(t) => &t.sides,
        None => &plain_sides,
    };

    let (half_w, half_h) = canvas.world_half_extent();
    let det = basis.0.cross(basis.1);
    let indexer = ColorIndexer::new(config);

    // Cover the view: invert the basis on the canvas corners.
    let mut a_range = (i64::MAX, i64::MIN);
    let mut b_range = (i64::MAX, i64::MIN);
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            let p = Point::new(half_w * sx, half_h * sy);
            let a = (p.x * basis.1.y - p.y * basis.1.x) / det;
            let b = (p.y * basis.0.x - p.x * basis.0.y) / det;
            a_range = (a_range.0.min(a.floor() as i64 - 2), a_range.1.max(a.ceil() as i64 + 2));
            b_range = (b_range.0.min(b.floor() as i64 - 2), b_range.1.max(b.ceil() as i64 + 2));
        }
    }

    if matches!(opts.scope, Scope::BaseLayer | Scope::Both) {
        for b in b_range.0..=b_range.1 {
            for a in a_range.0..=a_range.1 {
                let offset = basis.0 * a as f64 + basis.1 * b as f64;
                if offset.x.abs() > half_w + 1.0 || offset.y.abs() > half_h + 1.0 {
                    continue;
                }
                let d = canvas.path_from_sides(sides, offset);
                let fill = fill_for(opts.palette, indexer.color(a, b), config.k);
                let _ = writeln!(
                    canvas.svg,
                    "<path d=\"{d}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.6\"/>"
                );
            }
        }
    }

    if matches!(opts.scope, Scope::BaseColor | Scope::Both) {
        let points = derive_points(config)?;
        let v5 = lattice_to_cartesian(basis, points.p5);
        let v4 = lattice_to_cartesian(basis, points.p4);
        let reach = ((half_w + half_h) / v5.norm().min(v4.norm()).max(1e-9)).ceil() as i64 + 2;
        for x in -reach..=reach {
            for y in -reach..=reach {
                let offset = v5 * x as f64 + v4 * y as f64;
                if offset.x.abs() > half_w + 1.0 || offset.y.abs() > half_h + 1.0 {
                    continue;
                }
                let d = canvas.path_from_sides(sides, offset);
                let _ = writeln!(
                    canvas.svg,
                    "<path d=\"{d}\" fill=\"#9a9a9a\" fill-opacity=\"0.85\" stroke=\"black\" stroke-width=\"0.9\"/>"
                );
            }
        }
    }

    if let Some(step) = opts.grid_step {
        draw_grid(&mut canvas, step);
    }

    if opts.cluster_outline {
        let p1 = basis.0 * config.i1 as f64 + basis.1 * config.j1 as f64;
        let p2 = basis.0 * config.i2 as f64 + basis.1 * config.j2 as f64;
        let corners = [Point::ORIGIN, p1, p1 + p2, p2];
        let mut d = String::new();
        for (i, c) in corners.iter().enumerate() {
            let (x, y) = canvas.map(*c);
            let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            canvas.svg,
            "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>"
        );
    }

    Ok(canvas.finish())
}

fn render_cell(tiling: &crate::cellular::CellTiling, opts: &RenderOptions) -> Result<String> {
    let mut canvas = Canvas::new(opts);
    let center = tiling.fragment_center();
    let (t1, t2) = tiling.lattice();
    let copies: Vec<Point> = if matches!(opts.scope, Scope::BaseColor | Scope::Both) {
        let mut v = Vec::new();
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                if (a, b) != (0, 0) {
                    v.push(t1 * a as f64 + t2 * b as f64);
                }
            }
        }
        v
    } else {
        Vec::new()
    };
    for (fill, stroke, offsets) in [
        ("#3f7fbf", "black", vec![Point::ORIGIN]),
        ("#9a9a9a", "#555555", copies),
    ] {
        for offset in offsets {
            for &(c, r) in &tiling.colored {
                let rect = tiling.cell_rect(c, r);
                let lo = canvas.map(Point::new(rect.x0, rect.y1) - center + offset);
                let w = (rect.x1 - rect.x0) * opts.scale;
                let h = (rect.y1 - rect.y0) * opts.scale;
                let _ = writeln!(
                    canvas.svg,
                    "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"0.3\"/>",
                    lo.0, lo.1
                );
            }
        }
    }
    if let Some(step) = opts.grid_step {
        draw_grid(&mut canvas, step);
    }
    Ok(canvas.finish())
}

fn draw_grid(canvas: &mut Canvas, step: f64) {
    if !(step > 0.0) {
        return;
    }
    let (half_w, half_h) = canvas.world_half_extent();
    let nx = (half_w / step).floor() as i64;
    let ny = (half_h / step).floor() as i64;
    for i in -nx..=nx {
        let (x, _) = canvas.map(Point::new(i as f64 * step, 0.0));
        let _ = writeln!(
            canvas.svg,
            "<line x1=\"{x:.3}\" y1=\"0\" x2=\"{x:.3}\" y2=\"{}\" stroke=\"#c0c0c0\" stroke-width=\"0.4\"/>",
            canvas.opts.height
        );
    }
    for j in -ny..=ny {
        let (_, y) = canvas.map(Point::new(0.0, j as f64 * step));
        let _ = writeln!(
            canvas.svg,
            "<line x1=\"0\" y1=\"{y:.3}\" x2=\"{}\" y2=\"{y:.3}\" stroke=\"#c0c0c0\" stroke-width=\"0.4\"/>",
            canvas.opts.width
        );
    }
}
