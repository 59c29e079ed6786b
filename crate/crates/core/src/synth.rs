//! Deterministic synthetic corpora.
//!
//! Camera footage cannot ship with the repository, so every detector and
//! classifier here is exercised on procedurally generated scenes drawn
//! from seeded generators: bright face squares with a dark mouth band on
//! noisy backgrounds, and eye patches that are either an open eye (dark
//! pupil disk on a bright ground) or a closed one (dark lid bar). The
//! same renderer draws training crops and in-frame patterns, with the eye
//! geometry expressed in fractions of the face's eye band so a planted
//! eye survives the band crop-and-resize with its training proportions.
//!
//! All generators take an explicit RNG; seeding it fixes the corpus.

use crate::imaging::{GrayImage, Rect};
use rand::Rng;

/// Eye appearance drawn into crops and frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EyePattern {
    Open,
    Closed,
}

/// Standard eye-crop dimensions used across the eye classifiers.
pub const EYE_W: u32 = 50;
pub const EYE_H: u32 = 40;

/// Placement of the two synthetic eyes inside the 200x70 eye band, as
/// origins of 50x40 boxes. Chosen to sit on the (5, 4) search grid.
pub const LEFT_EYE_ROI: (u32, u32) = (35, 16);
pub const RIGHT_EYE_ROI: (u32, u32) = (115, 16);

pub fn noise_image(rng: &mut impl Rng, w: u32, h: u32) -> GrayImage {
    let pixels = (0..w as usize * h as usize).map(|_| rng.gen()).collect();
    GrayImage::new(w, h, pixels).unwrap()
}

/// Uniform noise in a band of intensities.
pub fn noise_image_in(rng: &mut impl Rng, w: u32, h: u32, lo: u8, hi: u8) -> GrayImage {
    let pixels = (0..w as usize * h as usize).map(|_| rng.gen_range(lo..=hi)).collect();
    GrayImage::new(w, h, pixels).unwrap()
}

fn jitter(rng: &mut impl Rng, base: f64, amount: f64) -> f64 {
    base + rng.gen_range(-amount..=amount)
}

fn put(img: &mut GrayImage, x: i64, y: i64, v: u8) {
    if x >= 0 && y >= 0 && (x as u32) < img.width() && (y as u32) < img.height() {
        img.set(x as u32, y as u32, v);
    }
}

fn fill_noisy(img: &mut GrayImage, r: Rect, base: u8, spread: u8, rng: &mut impl Rng) {
    for y in r.y.max(0) as i64..r.bottom().min(img.height() as i64) {
        for x in r.x.max(0) as i64..r.right().min(img.width() as i64) {
            let lo = base.saturating_sub(spread);
            let hi = base.saturating_add(spread);
            put(img, x, y, rng.gen_range(lo..=hi));
        }
    }
}

fn fill_ellipse(
    img: &mut GrayImage,
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    base: u8,
    spread: u8,
    rng: &mut impl Rng,
) {
    let x0 = (cx - rx).floor() as i64;
    let x1 = (cx + rx).ceil() as i64;
    let y0 = (cy - ry).floor() as i64;
    let y1 = (cy + ry).ceil() as i64;
    for y in y0..=y1 {
        for x in x0..=x1 {
            let dx = (x as f64 - cx) / rx;
            let dy = (y as f64 - cy) / ry;
            if dx * dx + dy * dy <= 1.0 {
                let lo = base.saturating_sub(spread);
                let hi = base.saturating_add(spread);
                put(img, x, y, rng.gen_range(lo..=hi));
            }
        }
    }
}

/// Draws one eye pattern into `rect`: a bright ground with either a dark
/// pupil disk (open) or a dark horizontal lid bar (closed). Geometry is
/// fractional in the rect, so the same pattern renders at any scale.
pub fn draw_eye_pattern(img: &mut GrayImage, rect: Rect, state: EyePattern, rng: &mut impl Rng) {
    fill_noisy(img, rect, 195, 10, rng);
    let w = rect.w as f64;
    let h = rect.h as f64;
    let cx = rect.x as f64 + jitter(rng, 0.5, 0.02) * w;
    let cy = rect.y as f64 + jitter(rng, 0.48, 0.02) * h;
    match state {
        EyePattern::Open => {
            // iris ring and pupil
            fill_ellipse(img, cx, cy, 0.26 * w, 0.34 * h, 120, 12, rng);
            fill_ellipse(img, cx, cy, 0.15 * w, 0.20 * h, 45, 10, rng);
        }
        EyePattern::Closed => {
            let bar_h = 0.18 * h;
            let bar = Rect::new(
                (rect.x as f64 + 0.12 * w) as i32,
                (cy - bar_h / 2.0) as i32,
                (0.76 * w) as u32,
                bar_h.max(2.0) as u32,
            );
            fill_noisy(img, bar, 55, 10, rng);
        }
    }
}

/// One 50x40 eye training/test crop with positional jitter.
pub fn eye_crop(rng: &mut impl Rng, state: EyePattern) -> GrayImage {
    let mut img = GrayImage::filled(EYE_W, EYE_H, 0).unwrap();
    let dx = rng.gen_range(-2i32..=2);
    let dy = rng.gen_range(-2i32..=2);
    fill_noisy(&mut img, Rect::new(0, 0, EYE_W, EYE_H), 195, 10, rng);
    draw_eye_pattern(
        &mut img,
        Rect::new(dx, dy, EYE_W, EYE_H),
        state,
        rng,
    );
    img
}

/// The eye band a face box implies: h/5 below the top, h/3 above the
/// bottom, full face width (the geometry `select_eye_roi` cuts).
pub fn eye_band_of_face(face: Rect) -> Rect {
    let h = face.h as i32;
    Rect::new(face.x, face.y + h / 5, face.w, (h - h / 3 - h / 5) as u32)
}

/// Draws a synthetic face into `face`: bright square, dark mouth band,
/// and two eye patterns placed inside the eye band at the fractional
/// positions of [`LEFT_EYE_ROI`]/[`RIGHT_EYE_ROI`], so the band resized
/// to 200x70 shows two 50x40 eyes on the search grid.
pub fn render_face(img: &mut GrayImage, face: Rect, state: EyePattern, rng: &mut impl Rng) {
    fill_noisy(img, face, 205, 8, rng);
    // hairline band along the top edge
    let hair = Rect::new(
        face.x,
        face.y,
        face.w,
        ((0.10 * face.h as f64) as u32).max(2),
    );
    fill_noisy(img, hair, 60, 10, rng);
    // mouth band at 72%..80% of face height
    let mouth = Rect::new(
        face.x + (0.15 * face.w as f64) as i32,
        face.y + (0.72 * face.h as f64) as i32,
        (0.70 * face.w as f64) as u32,
        ((0.08 * face.h as f64) as u32).max(2),
    );
    fill_noisy(img, mouth, 70, 10, rng);
    let band = eye_band_of_face(face);
    for &(ex, ey) in &[LEFT_EYE_ROI, RIGHT_EYE_ROI] {
        let eye = Rect::new(
            band.x + (ex as f64 / 200.0 * band.w as f64).round() as i32,
            band.y + (ey as f64 / 70.0 * band.h as f64).round() as i32,
            ((EYE_W as f64 / 200.0) * band.w as f64).round() as u32,
            ((EYE_H as f64 / 70.0) * band.h as f64).round() as u32,
        );
        draw_eye_pattern(img, eye, state, rng);
    }
}

/// A full frame: dark noisy background with one rendered face.
pub fn face_frame(
    rng: &mut impl Rng,
    frame_w: u32,
    frame_h: u32,
    face: Rect,
    state: EyePattern,
) -> GrayImage {
    let mut img = noise_image_in(rng, frame_w, frame_h, 30, 90);
    render_face(&mut img, face, state, rng);
    img
}

/// Square face training crop: the face pattern over background noise,
/// with small position and scale jitter so detectors trained on these
/// tolerate the misalignment of a sliding window.
pub fn face_crop(rng: &mut impl Rng, size: u32) -> GrayImage {
    let mut img = noise_image_in(rng, size, size, 30, 90);
    let s = rng.gen_range(size * 5 / 6..=size);
    let margin = (size - s) as i32;
    let dx = (margin / 2 + rng.gen_range(-1..=1)).clamp(0, margin);
    let dy = (margin / 2 + rng.gen_range(-1..=1)).clamp(0, margin);
    render_face(&mut img, Rect::new(dx, dy, s, s), EyePattern::Open, rng);
    img
}

/// Negative training crop: noise, or occasionally a smooth gradient.
pub fn background_crop(rng: &mut impl Rng, size: u32) -> GrayImage {
    if rng.gen_bool(0.3) {
        let gx: f64 = rng.gen_range(-4.0..4.0);
        let gy: f64 = rng.gen_range(-4.0..4.0);
        let base: f64 = rng.gen_range(40.0..180.0);
        let mut pixels = Vec::with_capacity(size as usize * size as usize);
        for y in 0..size {
            for x in 0..size {
                let v = base + gx * x as f64 + gy * y as f64 + rng.gen_range(-6.0..6.0);
                pixels.push(v.clamp(0.0, 255.0) as u8);
            }
        }
        GrayImage::new(size, size, pixels).unwrap()
    } else {
        noise_image_in(rng, size, size, 20, 160)
    }
}

/// A face crop rotated well out of the upright range; used as a negative
/// so the upright detector keeps quiet on tilted faces and leaves them to
/// the rotation branches.
pub fn tilted_face_crop(rng: &mut impl Rng, size: u32) -> GrayImage {
    let crop = face_crop(rng, size);
    let angle = rng.gen_range(15.0f64..35.0).to_radians()
        * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let center = ((size - 1) as f64 / 2.0, (size - 1) as f64 / 2.0);
    crate::imaging::rotate(&crop, angle, center)
}

/// Negative crop that is hard for a face cascade: half the time plain
/// background, otherwise a misaligned fragment cut from a frame that does
/// contain a face (edges, corners, band pieces).
pub fn hard_negative_crop(rng: &mut impl Rng, size: u32) -> GrayImage {
    if rng.gen_bool(0.4) {
        return background_crop(rng, size);
    }
    // misaligned or off-scale windows over a frame that does contain a
    // face; everything below the positive overlap band counts as negative
    let face = Rect::new(rng.gen_range(10..50), rng.gen_range(10..50), 64, 64);
    let frame = face_frame(rng, 128, 128, face, EyePattern::Open);
    // bias toward partial overlaps, the windows a detector actually
    // confuses with the face
    let want_overlap = rng.gen_bool(0.7);
    loop {
        let w = rng.gen_range(24..110);
        let x = rng.gen_range(0..=(128 - w)) as i32;
        let y = rng.gen_range(0..=(128 - w)) as i32;
        let window = Rect::new(x, y, w, w);
        let iou = window.iou(&face);
        let ok = if want_overlap { (0.05..0.5).contains(&iou) } else { iou < 0.5 };
        if ok {
            let crop = frame.crop(window).unwrap();
            return crate::imaging::resize(&crop, size, size).unwrap();
        }
    }
}

/// Two Gaussian-ish clusters of weight vectors, labelled +1/-1, as the
/// stand-in for projected eye descriptors.
pub fn weight_clusters(
    rng: &mut impl Rng,
    n_per_class: usize,
    dim: usize,
    separation: f64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut xs = Vec::with_capacity(2 * n_per_class);
    let mut ys = Vec::with_capacity(2 * n_per_class);
    for &label in &[1.0f64, -1.0] {
        for _ in 0..n_per_class {
            let mut v = Vec::with_capacity(dim);
            for d in 0..dim {
                let center = if d < 3 { label * separation * (d + 1) as f64 / 3.0 } else { 0.0 };
                // sum of uniforms approximates a normal well enough here
                let noise: f64 =
                    (0..4).map(|_| rng.gen_range(-0.5..0.5)).sum::<f64>() / 2.0;
                v.push(center + noise);
            }
            xs.push(v);
            ys.push(label);
        }
    }
    (xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let a = eye_crop(&mut ChaCha8Rng::seed_from_u64(5), EyePattern::Open);
        let b = eye_crop(&mut ChaCha8Rng::seed_from_u64(5), EyePattern::Open);
        assert_eq!(a, b);
        let fa = face_frame(
            &mut ChaCha8Rng::seed_from_u64(6),
            320,
            240,
            Rect::new(40, 30, 150, 150),
            EyePattern::Closed,
        );
        let fb = face_frame(
            &mut ChaCha8Rng::seed_from_u64(6),
            320,
            240,
            Rect::new(40, 30, 150, 150),
            EyePattern::Closed,
        );
        assert_eq!(fa, fb);
    }

    #[test]
    fn open_and_closed_crops_differ_in_the_middle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let open = eye_crop(&mut rng, EyePattern::Open);
        let closed = eye_crop(&mut rng, EyePattern::Closed);
        let mid = |img: &GrayImage| -> f64 {
            let mut s = 0.0;
            for y in 15..25 {
                for x in 20..30 {
                    s += img.get(x, y) as f64;
                }
            }
            s / 100.0
        };
        // both have dark centers, but the shapes differ column-wise
        let col_profile = |img: &GrayImage, x: u32| -> f64 {
            (0..EYE_H).map(|y| img.get(x, y) as f64).sum::<f64>() / EYE_H as f64
        };
        assert!(mid(&open) < 150.0 && mid(&closed) < 150.0);
        // closed bar extends much wider than the pupil
        assert!(col_profile(&closed, 8) < col_profile(&open, 8));
    }
}
