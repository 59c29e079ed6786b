//! Core raster types and the geometric/intensity primitives the detectors
//! are built on.
//!
//! Coordinate convention, shared by every module: x grows rightward,
//! y grows downward, origin at the top-left pixel.

pub mod pgm;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1 (got {width}x{height})")]
    EmptyImage { width: u32, height: u32 },
    #[error("pixel buffer length {got} does not match {width}x{height}")]
    BadBufferLength { width: u32, height: u32, got: usize },
    #[error("image {width}x{height} exceeds the supported {max}x{max} integral range")]
    TooLarge { width: u32, height: u32, max: u32 },
    #[error("rect ({rect:?}) out of bounds for {width}x{height}")]
    RectOutOfBounds { rect: Rect, width: u32, height: u32 },
    #[error("downsampling {width}x{height} by {sf} yields an empty image")]
    DegenerateDownsample { width: u32, height: u32, sf: u32 },
}

/// Largest supported image side. 255 * 4096^2 still fits a u64 integral
/// accumulator with room to spare; the bound is checked at construction.
pub const MAX_DIM: u32 = 4096;

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage { width, height });
        }
        if width > MAX_DIM || height > MAX_DIM {
            return Err(ImageError::TooLarge { width, height, max: MAX_DIM });
        }
        if pixels.len() != (width as usize) * (height as usize) {
            return Err(ImageError::BadBufferLength { width, height, got: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; (width as usize) * (height as usize)])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn row(&self, y: u32) -> &[u8] {
        let off = y as usize * self.width as usize;
        &self.pixels[off..off + self.width as usize]
    }

    /// Copies the sub-image covered by `r`.
    pub fn crop(&self, r: Rect) -> Result<GrayImage, ImageError> {
        self.check_rect(r)?;
        let mut out = Vec::with_capacity((r.w as usize) * (r.h as usize));
        for y in 0..r.h {
            let sy = (r.y as u32) + y;
            let off = sy as usize * self.width as usize + r.x as usize;
            out.extend_from_slice(&self.pixels[off..off + r.w as usize]);
        }
        GrayImage::new(r.w, r.h, out)
    }

    /// Extends the image by `border` pixels on each side, replicating the
    /// edge values. Used where a full-size code field is needed from an
    /// operator that consumes a border (see the lbp module).
    pub fn pad_replicate(&self, border: u32) -> GrayImage {
        let w = self.width + 2 * border;
        let h = self.height + 2 * border;
        let mut out = Vec::with_capacity(w as usize * h as usize);
        for y in 0..h {
            let sy = y.saturating_sub(border).min(self.height - 1);
            for x in 0..w {
                let sx = x.saturating_sub(border).min(self.width - 1);
                out.push(self.get(sx, sy));
            }
        }
        GrayImage { width: w, height: h, pixels: out }
    }

    pub fn check_rect(&self, r: Rect) -> Result<(), ImageError> {
        if r.x < 0
            || r.y < 0
            || r.x as i64 + r.w as i64 > self.width as i64
            || r.y as i64 + r.h as i64 > self.height as i64
        {
            return Err(ImageError::RectOutOfBounds {
                rect: r,
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

/// Axis-aligned rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn new(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(w >= 1 && h >= 1);
        Self { x, y, w, h }
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn right(&self) -> i64 {
        self.x as i64 + self.w as i64
    }

    pub fn bottom(&self) -> i64 {
        self.y as i64 + self.h as i64
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + (self.w as f64 - 1.0) / 2.0,
            self.y as f64 + (self.h as f64 - 1.0) / 2.0,
        )
    }

    pub fn intersection_area(&self, other: &Rect) -> u64 {
        let x0 = self.x.max(other.x) as i64;
        let y0 = self.y.max(other.y) as i64;
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        if x1 <= x0 || y1 <= y0 {
            0
        } else {
            ((x1 - x0) as u64) * ((y1 - y0) as u64)
        }
    }

    /// Intersection over union; 0 when disjoint.
    pub fn iou(&self, other: &Rect) -> f64 {
        let inter = self.intersection_area(other);
        if inter == 0 {
            return 0.0;
        }
        let union = self.area() + other.area() - inter;
        inter as f64 / union as f64
    }

    /// Clamps the rectangle to an image of the given dimensions. Returns
    /// None when nothing is left.
    pub fn clamp_to(&self, width: u32, height: u32) -> Option<Rect> {
        let x0 = self.x.max(0) as i64;
        let y0 = self.y.max(0) as i64;
        let x1 = self.right().min(width as i64);
        let y1 = self.bottom().min(height as i64);
        if x1 <= x0 || y1 <= y0 {
            return None;
        }
        Some(Rect::new(x0 as i32, y0 as i32, (x1 - x0) as u32, (y1 - y0) as u32))
    }
}

/// Summed-area table. Entry (x, y) holds the sum of all pixels strictly
/// above and to the left, so the table carries one extra zero-padded row
/// and column and `sums[y+1][x+1]` covers the pixel block `[0..=x, 0..=y]`.
#[derive(Debug, Clone)]
pub struct IntegralImage {
    width: u32,  // pixels + 1
    height: u32, // pixels + 1
    sums: Vec<u64>,
}

impl IntegralImage {
    /// Table width (source width + 1).
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Table height (source height + 1).
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn at(&self, x: u32, y: u32) -> u64 {
        self.sums[y as usize * self.width as usize + x as usize]
    }

    fn from_terms(img: &GrayImage, term: impl Fn(u8) -> u64) -> Self {
        let w = img.width() as usize + 1;
        let h = img.height() as usize + 1;
        let mut sums = vec![0u64; w * h];
        for y in 0..img.height() as usize {
            let row = img.row(y as u32);
            let mut running = 0u64;
            for (x, &p) in row.iter().enumerate() {
                running += term(p);
                sums[(y + 1) * w + x + 1] = sums[y * w + x + 1] + running;
            }
        }
        Self { width: w as u32, height: h as u32, sums }
    }
}

/// Builds the integral image in a single pass over the pixels.
pub fn integral(img: &GrayImage) -> IntegralImage {
    IntegralImage::from_terms(img, |p| p as u64)
}

/// Integral image of squared intensities, used for window variance.
pub fn integral_squared(img: &GrayImage) -> IntegralImage {
    IntegralImage::from_terms(img, |p| (p as u64) * (p as u64))
}

/// Sum of the pixels inside `r`, from four table lookups.
pub fn rect_sum(ii: &IntegralImage, r: Rect) -> Result<u64, ImageError> {
    let (img_w, img_h) = (ii.width - 1, ii.height - 1);
    if r.x < 0 || r.y < 0 || r.right() > img_w as i64 || r.bottom() > img_h as i64 {
        return Err(ImageError::RectOutOfBounds { rect: r, width: img_w, height: img_h });
    }
    let x0 = r.x as u32;
    let y0 = r.y as u32;
    let x1 = x0 + r.w;
    let y1 = y0 + r.h;
    Ok(ii.at(x1, y1) + ii.at(x0, y0) - ii.at(x1, y0) - ii.at(x0, y1))
}

/// Mean and standard deviation of the pixels inside `r`.
pub fn window_stats(
    ii: &IntegralImage,
    sq: &IntegralImage,
    r: Rect,
) -> Result<(f64, f64), ImageError> {
    let area = r.area() as f64;
    let s = rect_sum(ii, r)? as f64;
    let s2 = rect_sum(sq, r)? as f64;
    let mean = s / area;
    let var = (s2 / area - mean * mean).max(0.0);
    Ok((mean, var.sqrt()))
}

/// Area-averaging downsample by an integer factor. Each output pixel is
/// the round-half-up mean of its sf x sf source block; trailing rows and
/// columns that do not fill a block are dropped.
pub fn downsample(img: &GrayImage, sf: u32) -> Result<GrayImage, ImageError> {
    assert!(sf >= 1, "scale factor must be positive");
    if sf == 1 {
        return Ok(img.clone());
    }
    let ow = img.width() / sf;
    let oh = img.height() / sf;
    if ow == 0 || oh == 0 {
        return Err(ImageError::DegenerateDownsample {
            width: img.width(),
            height: img.height(),
            sf,
        });
    }
    let area = (sf as u64) * (sf as u64);
    let mut out = Vec::with_capacity(ow as usize * oh as usize);
    for by in 0..oh {
        for bx in 0..ow {
            let mut sum = 0u64;
            for dy in 0..sf {
                let row = img.row(by * sf + dy);
                let off = (bx * sf) as usize;
                for &p in &row[off..off + sf as usize] {
                    sum += p as u64;
                }
            }
            // round-half-up integer mean
            out.push(((2 * sum + area) / (2 * area)) as u8);
        }
    }
    GrayImage::new(ow, oh, out)
}

/// Multiplies all four coordinates of a rectangle detected in a
/// downsampled image back into full-resolution coordinates.
pub fn remap_rect(r: Rect, sf: u32) -> Rect {
    Rect::new(r.x * sf as i32, r.y * sf as i32, r.w * sf, r.h * sf)
}

/// 2-D affine map y = A x + b.
#[derive(Debug, Clone, Copy)]
pub struct AffineMap {
    pub a: [[f64; 2]; 2],
    pub b: [f64; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        Self { a: [[1.0, 0.0], [0.0, 1.0]], b: [0.0, 0.0] }
    }

    /// Rotation by `theta` about `center`. Positive angles rotate the
    /// +x axis toward +y (clockwise on screen with y pointing down).
    pub fn rotation_about(theta: f64, center: (f64, f64)) -> Self {
        let (s, c) = theta.sin_cos();
        let a = [[c, -s], [s, c]];
        let b = [
            center.0 - (a[0][0] * center.0 + a[0][1] * center.1),
            center.1 - (a[1][0] * center.0 + a[1][1] * center.1),
        ];
        Self { a, b }
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (
            self.a[0][0] * p.0 + self.a[0][1] * p.1 + self.b[0],
            self.a[1][0] * p.0 + self.a[1][1] * p.1 + self.b[1],
        )
    }

    /// Composition self ∘ other (other applied first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let mut a = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                a[i][j] = self.a[i][0] * other.a[0][j] + self.a[i][1] * other.a[1][j];
            }
        }
        let b = [
            self.a[0][0] * other.b[0] + self.a[0][1] * other.b[1] + self.b[0],
            self.a[1][0] * other.b[0] + self.a[1][1] * other.b[1] + self.b[1],
        ];
        AffineMap { a, b }
    }

    /// Inverse map; None when the linear part is singular.
    pub fn inverse(&self) -> Option<AffineMap> {
        let det = self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0];
        if det.abs() < 1e-12 {
            return None;
        }
        let a = [
            [self.a[1][1] / det, -self.a[0][1] / det],
            [-self.a[1][0] / det, self.a[0][0] / det],
        ];
        let b = [
            -(a[0][0] * self.b[0] + a[0][1] * self.b[1]),
            -(a[1][0] * self.b[0] + a[1][1] * self.b[1]),
        ];
        Some(AffineMap { a, b })
    }
}

/// Bilinear sample at a fractional position; None outside the image.
#[inline]
fn sample_bilinear(img: &GrayImage, x: f64, y: f64) -> Option<f64> {
    if x < 0.0 || y < 0.0 || x > (img.width() - 1) as f64 || y > (img.height() - 1) as f64 {
        return None;
    }
    let x0 = x.floor() as u32;
    let y0 = y.floor() as u32;
    let x1 = (x0 + 1).min(img.width() - 1);
    let y1 = (y0 + 1).min(img.height() - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let p00 = img.get(x0, y0) as f64;
    let p10 = img.get(x1, y0) as f64;
    let p01 = img.get(x0, y1) as f64;
    let p11 = img.get(x1, y1) as f64;
    let top = p00 + (p10 - p00) * fx;
    let bot = p01 + (p11 - p01) * fx;
    Some(top + (bot - top) * fy)
}

/// Rotates the image by `theta` about `center`, sampling each output
/// pixel from the inverse-mapped source location with bilinear
/// interpolation. Samples falling outside the source are filled with 0.
pub fn rotate(img: &GrayImage, theta: f64, center: (f64, f64)) -> GrayImage {
    if theta == 0.0 {
        return img.clone();
    }
    let inv = AffineMap::rotation_about(-theta, center);
    let mut out = Vec::with_capacity(img.pixels().len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let (sx, sy) = inv.apply((x as f64, y as f64));
            let v = sample_bilinear(img, sx, sy).unwrap_or(0.0);
            out.push((v + 0.5).floor().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage { width: img.width(), height: img.height(), pixels: out }
}

/// Histogram equalization: cumulative-histogram remap stretched to the
/// full 0..255 range. The mapping is monotone, so pixel order relations
/// are preserved; a constant image stays constant. Output level 0 is
/// reserved for the minimum input level, which keeps the map a no-op on
/// already-equalized data.
pub fn hist_equalize(img: &GrayImage) -> GrayImage {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.pixels().len() as u64;
    let cdf_min = hist.iter().copied().find(|&c| c > 0).unwrap_or(0);
    let denom = total - cdf_min;
    let mut lut = [0u8; 256];
    let mut cdf = 0u64;
    let mut lowest = true;
    for v in 0..256 {
        cdf += hist[v];
        if hist[v] == 0 {
            continue;
        }
        lut[v] = if denom == 0 {
            // single-level image: degenerate histogram maps to one level
            255
        } else if lowest {
            0
        } else {
            // round-half-up of (cdf - cdf_min) * 255 / denom
            (((2 * (cdf - cdf_min) * 255 + denom) / (2 * denom)) as u8).max(1)
        };
        lowest = false;
    }
    let pixels = img.pixels().iter().map(|&p| lut[p as usize]).collect();
    GrayImage { width: img.width(), height: img.height(), pixels }
}

/// Bilinear resampling to exactly `w` x `h` pixels.
pub fn resize(img: &GrayImage, w: u32, h: u32) -> Result<GrayImage, ImageError> {
    if w == 0 || h == 0 {
        return Err(ImageError::EmptyImage { width: w, height: h });
    }
    if w == img.width() && h == img.height() {
        return Ok(img.clone());
    }
    let sx = img.width() as f64 / w as f64;
    let sy = img.height() as f64 / h as f64;
    let mut out = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h {
        // pixel-center alignment keeps same-size resampling exact
        let src_y = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (img.height() - 1) as f64);
        for x in 0..w {
            let src_x = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (img.width() - 1) as f64);
            let v = sample_bilinear(img, src_x, src_y).unwrap_or(0.0);
            out.push((v + 0.5).floor().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(w, h, out)
}
