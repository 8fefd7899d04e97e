//! Binary PPM rendering of subtile point clouds.

use std::io::Write;

use rauzy_core::fractal::PointSet;

pub const DEFAULT_MARGIN: f64 = 0.05;
const FIRST_COLORS: [[u8; 3]; 3] = [[230, 57, 70], [69, 123, 157], [42, 157, 143]];
const GOLDEN_ANGLE: f64 = 137.507_764_050_037_85;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// RGB, row-major, row 0 at the top.
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn blank(width: usize, height: usize) -> Self {
        RasterImage {
            width,
            height,
            pixels: vec![255; 3 * width * height],
        }
    }

    pub fn pixel(&self, col: usize, row: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    fn set(&mut self, col: usize, row: usize, rgb: [u8; 3]) {
        let i = 3 * (row * self.width + col);
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)
    }

    /// Distinct non-white colors with their pixel counts, sorted by color.
    pub fn color_histogram(&self) -> Vec<([u8; 3], usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for px in self.pixels.chunks_exact(3) {
            let c = [px[0], px[1], px[2]];
            if c != [255, 255, 255] {
                *counts.entry(c).or_insert(0usize) += 1;
            }
        }
        counts.into_iter().collect()
    }
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let hp = (h % 360.0) / 60.0;
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
    let to = |t: f64| ((t + m) * 255.0).round() as u8;
    [to(r), to(g), to(b)]
}

/// Color of the 0-based letter `i`.
pub fn letter_color(i: usize) -> [u8; 3] {
    match FIRST_COLORS.get(i) {
        Some(&c) => c,
        None => hsv_to_rgb((i - FIRST_COLORS.len() + 1) as f64 * GOLDEN_ANGLE, 0.7, 0.8),
    }
}

/// One pixel per point, later subtiles drawn over earlier ones. The
/// bounding box of all points is scaled uniformly to fit inside the margin;
/// x grows to the right and y upwards. Points of dimension 1 use y = 0,
/// higher dimensions are shown by their first two coordinates.
pub fn render(tiles: &[PointSet], width: usize, height: usize, margin: f64) -> RasterImage {
    let mut img = RasterImage::blank(width, height);
    let xy = |p: &[f64]| (p[0], p.get(1).copied().unwrap_or(0.0));
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in tiles.iter().flat_map(|t| t.iter()) {
        let (x, y) = xy(p);
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    if !lo.0.is_finite() {
        return img;
    }
    let (xc, yc) = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let usable = 1.0 - 2.0 * margin;
    let (w1, h1) = ((width - 1) as f64, (height - 1) as f64);
    let sx = if hi.0 > lo.0 {
        w1 * usable / (hi.0 - lo.0)
    } else {
        f64::INFINITY
    };
    let sy = if hi.1 > lo.1 {
        h1 * usable / (hi.1 - lo.1)
    } else {
        f64::INFINITY
    };
    let s = match sx.min(sy) {
        s if s.is_finite() => s,
        _ => 0.0,
    };
    for (i, tile) in tiles.iter().enumerate() {
        let color = letter_color(i);
        for p in tile.iter() {
            let (x, y) = xy(p);
            let col = (w1 / 2.0 + (x - xc) * s).round();
            let row = (h1 / 2.0 - (y - yc) * s).round();
            if (0.0..=w1).contains(&col) && (0.0..=h1).contains(&row) {
                img.set(col as usize, row as usize, color);
            }
        }
    }
    img
}
