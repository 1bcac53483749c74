//! Phase plots shaded by orientation, written as binary PPM.
//!
//! Hue follows `arg P` on the six-sector wheel (0 is red, counterclockwise
//! through yellow and green); sense-reversing points (`J < 0`) are drawn at
//! value 0.55, all others at full value.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{PolyJet, PolyPoly};

pub type Rgb = [u8; 3];

pub const DARK_VALUE: f64 = 0.55;
pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min < im_max;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate window [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Window {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Square window `[−h, h]²`.
    pub fn centered(h: f64) -> Result<Self> {
        Self::new(-h, h, -h, h)
    }
}

/// Row-major RGB raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "image size {width}x{height} must be positive"
            )));
        }
        Ok(Raster {
            width,
            height,
            data: vec![0; 3 * width * height],
        })
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        let i = 3 * (y * self.width + x);
        self.data[i..i + 3].copy_from_slice(&c);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Premap {
    #[default]
    Identity,
    /// `φ(z) = z exp(|z|²)`, which compresses the far field into view.
    Contraction,
}

impl Premap {
    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Premap::Identity => z,
            Premap::Contraction => z * z.norm_sqr().exp(),
        }
    }

    /// Preimage of `w`, solving `s e^{s²} = |w|` for `s = |z|`.
    pub fn invert(self, w: Complex64) -> Complex64 {
        match self {
            Premap::Identity => w,
            Premap::Contraction => {
                let rho = w.norm();
                if rho == 0.0 {
                    return w;
                }
                // s e^{s²} ≈ ρ; start from the larger of the two asymptotic regimes
                let mut s = if rho < 1.0 { rho } else { rho.ln().sqrt().max(0.5) };
                for _ in 0..100 {
                    let e = (s * s).exp();
                    let f = s * e - rho;
                    let df = e * (1.0 + 2.0 * s * s);
                    let next = (s - f / df).max(0.5 * s);
                    if (next - s).abs() <= 1e-15 * s {
                        s = next;
                        break;
                    }
                    s = next;
                }
                w * (s / rho)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseImage {
    pub raster: Raster,
    pub window: Window,
    /// Pixels drawn white because `φ(z)` or `P(φ(z))` overflowed.
    pub nonfinite_pixels: usize,
}

/// Fully saturated hue-wheel color of `arg w`, dimmed for `jac_sign < 0`.
/// `w = 0` is black; a non-finite `w` is white.
pub fn phase_color(w: Complex64, jac_sign: i8) -> Rgb {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return WHITE;
    }
    if w.re == 0.0 && w.im == 0.0 {
        return BLACK;
    }
    let v = if jac_sign < 0 { DARK_VALUE } else { 1.0 };
    let arg = w.arg();
    // upper half-plane computed directly; the lower half is its mirror with g and b swapped
    let h = 3.0 * arg.abs() / PI;
    let sector = (h.floor() as usize).min(2);
    let f = h - sector as f64;
    let (r, g, b) = match sector {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        _ => (0.0, 1.0, f),
    };
    let q = |x: f64| (255.0 * v * x).round() as u8;
    if arg < 0.0 {
        [q(r), q(b), q(g)]
    } else {
        [q(r), q(g), q(b)]
    }
}

/// Signed orientation of `J`, without a tolerance band.
pub fn jac_sign(j: f64) -> i8 {
    if j > 0.0 {
        1
    } else if j < 0.0 {
        -1
    } else {
        0
    }
}

/// Pixel-center coordinate: symmetric about the window center so that
/// mirrored pixels map to exactly mirrored points.
fn center_coord(i: usize, count: usize, lo: f64, hi: f64) -> f64 {
    let step = (hi - lo) / count as f64;
    let mid = 0.5 * (lo + hi);
    (2.0 * i as f64 + 1.0 - count as f64) * step / 2.0 + mid
}

/// The point of the plane at the center of pixel `(x, y)`; row 0 is the top.
pub fn pixel_center(window: &Window, width: usize, height: usize, x: usize, y: usize) -> Complex64 {
    Complex64::new(
        center_coord(x, width, window.re_min, window.re_max),
        center_coord(height - 1 - y, height, window.im_min, window.im_max),
    )
}

pub fn render_phase(p: &PolyPoly, window: Window, width: usize, height: usize, premap: Premap) -> Result<PhaseImage> {
    let mut raster = Raster::new(width, height)?;
    let jet = PolyJet::new(p);
    let nonfinite: usize = raster
        .data
        .par_chunks_mut(3 * width)
        .enumerate()
        .map(|(y, row)| {
            let mut bad = 0;
            for x in 0..width {
                let u = premap.apply(pixel_center(&window, width, height, x, y));
                let (w, a, b) = jet.eval(u);
                let finite = u.re.is_finite() && u.im.is_finite() && w.re.is_finite() && w.im.is_finite();
                let color = if finite {
                    phase_color(w, jac_sign(a.norm_sqr() - b.norm_sqr()))
                } else {
                    bad += 1;
                    WHITE
                };
                row[3 * x..3 * x + 3].copy_from_slice(&color);
            }
            bad
        })
        .sum();
    Ok(PhaseImage {
        raster,
        window,
        nonfinite_pixels: nonfinite,
    })
}

/// Black discs of radius `max(2, 0.004·width)` pixels at the given zeros,
/// located through the inverse of `premap`.
pub fn draw_markers(img: &mut PhaseImage, zeros: &[Complex64], premap: Premap) {
    let (w, h) = (img.raster.width, img.raster.height);
    let rad = (0.004 * w as f64).max(2.0);
    let win = img.window;
    let sx = w as f64 / (win.re_max - win.re_min);
    let sy = h as f64 / (win.im_max - win.im_min);
    for &z in zeros {
        let u = premap.invert(z);
        let px = (u.re - win.re_min) * sx - 0.5;
        let py = (win.im_max - u.im) * sy - 0.5;
        let (x0, x1) = ((px - rad).floor().max(0.0), (px + rad).ceil().min(w as f64 - 1.0));
        let (y0, y1) = ((py - rad).floor().max(0.0), (py + rad).ceil().min(h as f64 - 1.0));
        if !(x0 <= x1 && y0 <= y1) {
            continue;
        }
        for y in y0 as usize..=y1 as usize {
            for x in x0 as usize..=x1 as usize {
                if (x as f64 - px).hypot(y as f64 - py) <= rad {
                    img.raster.set(x, y, BLACK);
                }
            }
        }
    }
}

pub fn ppm_bytes(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.extend_from_slice(&r.data);
    out
}

pub fn write_ppm(r: &Raster, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&ppm_bytes(r)).map_err(|e| Error::io(path, e))
}

/// Parses a binary `P6` file with maxval 255.
pub fn parse_ppm(bytes: &[u8]) -> Result<Raster> {
    let bad = |msg: &str| Error::InvalidArgument(format!("malformed PPM: {msg}"));
    let mut pos = 0;
    let mut fields = Vec::new();
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header is not ASCII"))?);
    }
    if fields[0] != "P6" || fields[3] != "255" {
        return Err(bad("expected P6 with maxval 255"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad dimension"));
    let (width, height) = (num(fields[1])?, num(fields[2])?);
    // exactly one whitespace byte separates the header from the data
    let data = bytes.get(pos + 1..).ok_or_else(|| bad("missing data"))?;
    if data.len() != 3 * width * height {
        return Err(bad("pixel data length does not match dimensions"));
    }
    let mut r = Raster::new(width, height)?;
    r.data.copy_from_slice(data);
    Ok(r)
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<Raster> {
    let path = path.as_ref();
    parse_ppm(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}
