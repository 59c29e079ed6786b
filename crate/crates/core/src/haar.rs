//! Haar-like feature evaluation and cascaded detection.
//!
//! The detector slides a window over the image at a geometric ladder of
//! scales, evaluates a cascade of boosted decision stumps per window from
//! the integral image, and groups overlapping raw hits. The fast path
//! downsamples the frame first and remaps the detected coordinates back
//! to full resolution; the tilted path retries the downsampled frame
//! under a schedule of rotations.
//!
//! Stage training is desk-scale discrete AdaBoost over stumps, enough to
//! build test cascades end-to-end; production cascades are loaded from
//! files.

use crate::imaging::{
    self, downsample, integral, integral_squared, remap_rect, rotate, AffineMap, GrayImage,
    ImageError, IntegralImage, Rect,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};
use thiserror::Error;

/// Fixed output size of the eye-search band cut from a face box.
pub const EYE_ROI_W: u32 = 200;
pub const EYE_ROI_H: u32 = 70;

#[derive(Debug, Error)]
pub enum HaarError {
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("image {got_w}x{got_h} is smaller than the {base_w}x{base_h} base window")]
    ImageBelowBaseWindow { got_w: u32, got_h: u32, base_w: u32, base_h: u32 },
    #[error("downsampling by {sf} leaves {got_w}x{got_h}, below the {base_w}x{base_h} base window")]
    DownsampleBelowBaseWindow { sf: u32, got_w: u32, got_h: u32, base_w: u32, base_h: u32 },
    #[error("face box height {0} is too small for an eye band")]
    DegenerateEyeBand(u32),
    #[error("eye band for face {0:?} lies outside the frame")]
    EyeBandOutsideFrame(Rect),
    #[error("training sample {index} is {got_w}x{got_h}, expected {base_w}x{base_h}")]
    BadSampleSize { index: usize, got_w: u32, got_h: u32, base_w: u32, base_h: u32 },
    #[error("training requires positives, negatives and a non-empty feature pool")]
    EmptyTrainingSet,
    #[error("round {round}: no feature in the pool beats chance on the weighted set")]
    NoUsefulFeature { round: usize },
    #[error("cascade file: {0}")]
    BadCascadeFile(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One rectangle of a Haar feature, in base-window coordinates, with its
/// signed weight.
pub type WeightedRect = (Rect, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    TwoRectHorizontal,
    TwoRectVertical,
    ThreeRectHorizontal,
    ThreeRectVertical,
    FourRect,
}

/// Weighted difference of rectangular pixel sums. The weights are chosen
/// so the weighted areas cancel, making the response zero on constant
/// images at every scale.
#[derive(Debug, Clone)]
pub struct HaarFeature {
    pub kind: FeatureKind,
    pub rects: Vec<WeightedRect>,
}

impl HaarFeature {
    /// Left half vs right half; `w` must be even.
    pub fn two_rect_horizontal(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(w % 2 == 0);
        Self {
            kind: FeatureKind::TwoRectHorizontal,
            rects: vec![
                (Rect::new(x, y, w / 2, h), 1.0),
                (Rect::new(x + (w / 2) as i32, y, w / 2, h), -1.0),
            ],
        }
    }

    /// Top half vs bottom half; `h` must be even.
    pub fn two_rect_vertical(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(h % 2 == 0);
        Self {
            kind: FeatureKind::TwoRectVertical,
            rects: vec![
                (Rect::new(x, y, w, h / 2), 1.0),
                (Rect::new(x, y + (h / 2) as i32, w, h / 2), -1.0),
            ],
        }
    }

    /// Outer thirds vs a double-weighted middle third; `w % 3 == 0`.
    pub fn three_rect_horizontal(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(w % 3 == 0);
        let t = w / 3;
        Self {
            kind: FeatureKind::ThreeRectHorizontal,
            rects: vec![
                (Rect::new(x, y, t, h), 1.0),
                (Rect::new(x + t as i32, y, t, h), -2.0),
                (Rect::new(x + 2 * t as i32, y, t, h), 1.0),
            ],
        }
    }

    /// Outer thirds vs a double-weighted middle third; `h % 3 == 0`.
    pub fn three_rect_vertical(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(h % 3 == 0);
        let t = h / 3;
        Self {
            kind: FeatureKind::ThreeRectVertical,
            rects: vec![
                (Rect::new(x, y, w, t), 1.0),
                (Rect::new(x, y + t as i32, w, t), -2.0),
                (Rect::new(x, y + 2 * t as i32, w, t), 1.0),
            ],
        }
    }

    /// Checkerboard of four quadrants; `w` and `h` must be even.
    pub fn four_rect(x: i32, y: i32, w: u32, h: u32) -> Self {
        debug_assert!(w % 2 == 0 && h % 2 == 0);
        let (hw, hh) = (w / 2, h / 2);
        Self {
            kind: FeatureKind::FourRect,
            rects: vec![
                (Rect::new(x, y, hw, hh), 1.0),
                (Rect::new(x + hw as i32, y, hw, hh), -1.0),
                (Rect::new(x, y + hh as i32, hw, hh), -1.0),
                (Rect::new(x + hw as i32, y + hh as i32, hw, hh), 1.0),
            ],
        }
    }

    fn infer_kind(rects: &[WeightedRect]) -> FeatureKind {
        match rects.len() {
            2 => {
                if rects[0].0.y == rects[1].0.y {
                    FeatureKind::TwoRectHorizontal
                } else {
                    FeatureKind::TwoRectVertical
                }
            }
            3 => {
                if rects[0].0.y == rects[1].0.y {
                    FeatureKind::ThreeRectHorizontal
                } else {
                    FeatureKind::ThreeRectVertical
                }
            }
            _ => FeatureKind::FourRect,
        }
    }

    /// Zero-sum weighted area and containment in the base window.
    pub fn validate(&self, base_w: u32, base_h: u32) -> bool {
        let weighted_area: f64 = self.rects.iter().map(|(r, w)| w * r.area() as f64).sum();
        if weighted_area.abs() > 1e-9 {
            return false;
        }
        self.rects.iter().all(|(r, _)| {
            r.x >= 0 && r.y >= 0 && r.right() <= base_w as i64 && r.bottom() <= base_h as i64
        })
    }
}

/// Weak classifier: a thresholded Haar feature with a boosting weight.
#[derive(Debug, Clone)]
pub struct Stump {
    pub feature: HaarFeature,
    pub threshold: f64,
    pub polarity: i8,
    pub vote_weight: f64,
}

impl Stump {
    /// +1 when the feature value lands on the polarity side of the
    /// threshold, -1 otherwise.
    #[inline]
    pub fn vote(&self, value: f64) -> f64 {
        let above = value >= self.threshold;
        if above == (self.polarity > 0) {
            1.0
        } else {
            -1.0
        }
    }
}

/// A boosted stage: passes a window iff the weighted vote sum reaches the
/// stage threshold.
#[derive(Debug, Clone)]
pub struct Stage {
    pub stumps: Vec<Stump>,
    pub stage_threshold: f64,
}

/// Ordered stages over a fixed base window.
#[derive(Debug, Clone)]
pub struct Cascade {
    pub base_w: u32,
    pub base_h: u32,
    pub stages: Vec<Stage>,
    pub variance_normalize: bool,
}

/// Plain and squared integral images of one frame, built once per scan.
pub struct ImageIntegrals {
    pub ii: IntegralImage,
    pub sq: IntegralImage,
}

impl ImageIntegrals {
    pub fn new(img: &GrayImage) -> Self {
        Self { ii: integral(img), sq: integral_squared(img) }
    }
}

/// Scales a base-window feature into `window` and evaluates the weighted
/// rect sums, reported per unit of base-window area so a threshold
/// learned at base scale transfers to every window size. The first
/// rect's weight is rebalanced against the rounded areas so the zero
/// response on constant images survives scaling.
pub fn eval_feature_raw(
    ii: &IntegralImage,
    f: &HaarFeature,
    base: (u32, u32),
    window: Rect,
) -> Result<f64, HaarError> {
    let sx = window.w as f64 / base.0 as f64;
    let sy = window.h as f64 / base.1 as f64;
    let mut scaled: Vec<(Rect, f64)> = Vec::with_capacity(f.rects.len());
    for &(r, w) in &f.rects {
        let x0 = (r.x as f64 * sx).round() as i64;
        let y0 = (r.y as f64 * sy).round() as i64;
        let mut rw = ((r.w as f64 * sx).round() as i64).max(1);
        let mut rh = ((r.h as f64 * sy).round() as i64).max(1);
        if x0 + rw > window.w as i64 {
            rw = window.w as i64 - x0;
        }
        if y0 + rh > window.h as i64 {
            rh = window.h as i64 - y0;
        }
        if rw < 1 || rh < 1 {
            return Err(ImageError::RectOutOfBounds { rect: r, width: window.w, height: window.h }
                .into());
        }
        scaled.push((
            Rect::new(window.x + x0 as i32, window.y + y0 as i32, rw as u32, rh as u32),
            w,
        ));
    }
    let tail_area: f64 = scaled[1..].iter().map(|(r, w)| w * r.area() as f64).sum();
    let w0 = -tail_area / scaled[0].0.area() as f64;
    let mut value = w0 * imaging::rect_sum(ii, scaled[0].0)? as f64;
    for &(r, w) in &scaled[1..] {
        value += w * imaging::rect_sum(ii, r)? as f64;
    }
    Ok(value / (sx * sy))
}

/// Outcome of evaluating a cascade on one window.
#[derive(Debug, Clone, Copy)]
pub struct CascadeEval {
    pub passed: bool,
    /// Vote-sum margin of the last stage evaluated.
    pub score: f64,
    pub stumps_evaluated: u64,
}

impl Cascade {
    /// Feature value over `window`, divided by the window's pixel standard
    /// deviation (floored at 1) when the cascade normalizes variance.
    pub fn eval_feature(
        &self,
        integrals: &ImageIntegrals,
        f: &HaarFeature,
        window: Rect,
    ) -> Result<f64, HaarError> {
        let raw = eval_feature_raw(&integrals.ii, f, (self.base_w, self.base_h), window)?;
        if self.variance_normalize {
            let (_, std) = imaging::window_stats(&integrals.ii, &integrals.sq, window)?;
            Ok(raw / std.max(1.0))
        } else {
            Ok(raw)
        }
    }

    /// Evaluates stages in order, failing at the first stage whose vote
    /// sum falls short of its threshold.
    pub fn eval_window(
        &self,
        integrals: &ImageIntegrals,
        window: Rect,
    ) -> Result<CascadeEval, HaarError> {
        let mut stumps_evaluated = 0u64;
        let mut margin = 0.0;
        for stage in &self.stages {
            let mut votes = 0.0;
            for stump in &stage.stumps {
                let v = self.eval_feature(integrals, &stump.feature, window)?;
                votes += stump.vote_weight * stump.vote(v);
                stumps_evaluated += 1;
            }
            margin = votes - stage.stage_threshold;
            if margin < 0.0 {
                return Ok(CascadeEval { passed: false, score: margin, stumps_evaluated });
            }
        }
        Ok(CascadeEval { passed: true, score: margin, stumps_evaluated })
    }
}

/// Detection-scan parameters.
///
/// `min_window` is expressed in the coordinates of the image handed to
/// the top-level call; the fast path divides it by its scale factor
/// before scanning the downsampled frame.
#[derive(Debug, Clone)]
pub struct DetectParams {
    pub scale_step: f64,
    pub min_window: u32,
    /// Stride in pixels at base scale, grown proportionally with window
    /// size.
    pub window_stride: u32,
    pub min_neighbors: u32,
    pub sf: u32,
    /// Rotation schedule for the tilted branch, radians, tried in order.
    pub tilt_angles: Vec<f64>,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            scale_step: 1.2,
            min_window: 0,
            window_stride: 2,
            min_neighbors: 3,
            sf: 1,
            tilt_angles: default_tilt_angles(),
        }
    }
}

/// +-20, +-40, +-60, +-70 degrees in increasing magnitude, alternating
/// sign; the tilted branch stops at the first angle with a detection.
pub fn default_tilt_angles() -> Vec<f64> {
    [20.0f64, 40.0, 60.0, 70.0]
        .iter()
        .flat_map(|d| {
            let r = d.to_radians();
            [r, -r]
        })
        .collect()
}

/// One detected object in full-resolution image coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Detection {
    pub rect: Rect,
    pub score: f64,
    /// Rotation applied to the frame on the branch that found the object;
    /// 0 for the upright branch.
    pub tilt: f64,
}

/// Scan instrumentation for the performance properties.
#[derive(Debug, Clone, Copy, Default)]
pub struct DetectStats {
    pub windows_evaluated: u64,
    pub stumps_evaluated: u64,
    pub raw_hits: u64,
}

/// Slides the cascade over every scale and location, then groups
/// overlapping hits: union-find over pairs with IoU >= 0.4, groups
/// smaller than `min_neighbors` dropped, each surviving group reporting
/// its mean rectangle.
pub fn detect(c: &Cascade, img: &GrayImage, p: &DetectParams) -> Result<Vec<Detection>, HaarError> {
    detect_with_stats(c, img, p).map(|(d, _)| d)
}

pub fn detect_with_stats(
    c: &Cascade,
    img: &GrayImage,
    p: &DetectParams,
) -> Result<(Vec<Detection>, DetectStats), HaarError> {
    if img.width() < c.base_w || img.height() < c.base_h {
        return Err(HaarError::ImageBelowBaseWindow {
            got_w: img.width(),
            got_h: img.height(),
            base_w: c.base_w,
            base_h: c.base_h,
        });
    }
    let integrals = ImageIntegrals::new(img);
    let mut stats = DetectStats::default();
    let mut raw: Vec<Detection> = Vec::new();
    let mut scale = 1.0f64;
    loop {
        let w = (c.base_w as f64 * scale).round() as u32;
        let h = (c.base_h as f64 * scale).round() as u32;
        if w > img.width() || h > img.height() {
            break;
        }
        if w >= p.min_window.max(c.base_w) {
            let stride = ((p.window_stride as f64 * scale).round() as u32).max(1);
            let mut y = 0u32;
            while y + h <= img.height() {
                let mut x = 0u32;
                while x + w <= img.width() {
                    let window = Rect::new(x as i32, y as i32, w, h);
                    let eval = c.eval_window(&integrals, window)?;
                    stats.windows_evaluated += 1;
                    stats.stumps_evaluated += eval.stumps_evaluated;
                    if eval.passed {
                        raw.push(Detection { rect: window, score: eval.score, tilt: 0.0 });
                    }
                    x += stride;
                }
                y += stride;
            }
        }
        scale *= p.scale_step;
    }
    stats.raw_hits = raw.len() as u64;
    let grouped = group_detections(&raw, p.min_neighbors, img.width(), img.height());
    Ok((grouped, stats))
}

/// Union-find grouping of raw hits. Deterministic given input order.
fn group_detections(
    raw: &[Detection],
    min_neighbors: u32,
    img_w: u32,
    img_h: u32,
) -> Vec<Detection> {
    if raw.is_empty() {
        return Vec::new();
    }
    let mut parent: Vec<usize> = (0..raw.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut i = i;
        while parent[i] != root {
            let next = parent[i];
            parent[i] = root;
            i = next;
        }
        root
    }
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if raw[i].rect.iou(&raw[j].rect) >= 0.4 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_root: std::collections::BTreeMap<usize, usize> = Default::default();
    for i in 0..raw.len() {
        let root = find(&mut parent, i);
        let gi = *group_of_root.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[gi].push(i);
    }
    let mut out = Vec::new();
    for members in groups {
        if (members.len() as u32) < min_neighbors.max(1) {
            continue;
        }
        let n = members.len() as f64;
        let mx = members.iter().map(|&i| raw[i].rect.x as f64).sum::<f64>() / n;
        let my = members.iter().map(|&i| raw[i].rect.y as f64).sum::<f64>() / n;
        let mw = members.iter().map(|&i| raw[i].rect.w as f64).sum::<f64>() / n;
        let mh = members.iter().map(|&i| raw[i].rect.h as f64).sum::<f64>() / n;
        let score = members.iter().map(|&i| raw[i].score).sum::<f64>() / n;
        let rect = Rect::new(
            mx.round() as i32,
            my.round() as i32,
            (mw.round() as u32).max(1),
            (mh.round() as u32).max(1),
        );
        let rect = match rect.clamp_to(img_w, img_h) {
            Some(r) => r,
            None => continue,
        };
        out.push(Detection { rect, score, tilt: raw[members[0]].tilt });
    }
    out
}

/// Downsample-and-remap fast path: detect on the reduced frame, then
/// multiply the coordinates back by the scale factor. At sf = 1 this is
/// exactly `detect`.
pub fn detect_fast(
    c: &Cascade,
    img: &GrayImage,
    p: &DetectParams,
) -> Result<Vec<Detection>, HaarError> {
    detect_fast_with_stats(c, img, p).map(|(d, _)| d)
}

pub fn detect_fast_with_stats(
    c: &Cascade,
    img: &GrayImage,
    p: &DetectParams,
) -> Result<(Vec<Detection>, DetectStats), HaarError> {
    if p.sf <= 1 {
        return detect_with_stats(c, img, p);
    }
    let small = downsample(img, p.sf)?;
    if small.width() < c.base_w || small.height() < c.base_h {
        return Err(HaarError::DownsampleBelowBaseWindow {
            sf: p.sf,
            got_w: small.width(),
            got_h: small.height(),
            base_w: c.base_w,
            base_h: c.base_h,
        });
    }
    let mut scan = p.clone();
    scan.min_window = p.min_window / p.sf;
    let (dets, stats) = detect_with_stats(c, &small, &scan)?;
    let remapped = dets
        .into_iter()
        .filter_map(|d| {
            remap_rect(d.rect, p.sf)
                .clamp_to(img.width(), img.height())
                .map(|rect| Detection { rect, ..d })
        })
        .collect();
    Ok((remapped, stats))
}

/// A tilted-branch hit: the de-rotated detection plus the face rectangle
/// in the rotated full-resolution frame, from which an upright eye band
/// can be cropped.
#[derive(Debug, Clone, Copy)]
pub struct TiltedDetection {
    pub detection: Detection,
    /// Face rect in the frame rotated by `detection.tilt` about the frame
    /// center.
    pub rot_rect: Rect,
}

/// Upright fast detection first; when it comes up empty, the downsampled
/// frame is rotated through the tilt schedule and the first angle with a
/// detection wins. Branch hits carry the applied rotation; their corners
/// are mapped back into original coordinates and clamped to the frame.
pub fn detect_tilted(
    c: &Cascade,
    img: &GrayImage,
    p: &DetectParams,
) -> Result<Vec<Detection>, HaarError> {
    detect_tilted_full(c, img, p).map(|v| v.into_iter().map(|t| t.detection).collect())
}

pub fn detect_tilted_full(
    c: &Cascade,
    img: &GrayImage,
    p: &DetectParams,
) -> Result<Vec<TiltedDetection>, HaarError> {
    let upright = detect_fast(c, img, p)?;
    if !upright.is_empty() {
        return Ok(upright
            .into_iter()
            .map(|d| TiltedDetection { detection: d, rot_rect: d.rect })
            .collect());
    }
    let sf = p.sf.max(1);
    let small = downsample(img, sf)?;
    if small.width() < c.base_w || small.height() < c.base_h {
        return Err(HaarError::DownsampleBelowBaseWindow {
            sf,
            got_w: small.width(),
            got_h: small.height(),
            base_w: c.base_w,
            base_h: c.base_h,
        });
    }
    let mut scan = p.clone();
    scan.min_window = p.min_window / sf;
    let center = ((small.width() - 1) as f64 / 2.0, (small.height() - 1) as f64 / 2.0);
    for &angle in &p.tilt_angles {
        let rotated = rotate(&small, angle, center);
        let dets = detect(c, &rotated, &scan)?;
        if dets.is_empty() {
            continue;
        }
        let back = AffineMap::rotation_about(-angle, center);
        let mut out = Vec::new();
        for d in dets {
            let r = d.rect;
            let corners = [
                (r.x as f64, r.y as f64),
                (r.right() as f64, r.y as f64),
                (r.x as f64, r.bottom() as f64),
                (r.right() as f64, r.bottom() as f64),
            ];
            let mapped: Vec<(f64, f64)> = corners.iter().map(|&q| back.apply(q)).collect();
            let x0 = mapped.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let y0 = mapped.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let x1 = mapped.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let y1 = mapped.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let bbox = Rect::new(
                (x0 * sf as f64).floor() as i32,
                (y0 * sf as f64).floor() as i32,
                (((x1 - x0) * sf as f64).ceil() as u32).max(1),
                (((y1 - y0) * sf as f64).ceil() as u32).max(1),
            );
            let rect = match bbox.clamp_to(img.width(), img.height()) {
                Some(r) => r,
                None => continue,
            };
            let rot_rect = match remap_rect(r, sf).clamp_to(img.width(), img.height()) {
                Some(r) => r,
                None => continue,
            };
            out.push(TiltedDetection {
                detection: Detection { rect, score: d.score, tilt: angle },
                rot_rect,
            });
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Ok(Vec::new())
}

/// Cuts the eye-search band from a face box: from h/5 below the face top
/// down to h/3 above the face bottom, across the face width, clamped to
/// the frame and resized to 200x70.
pub fn select_eye_roi(face: Rect, frame: &GrayImage) -> Result<GrayImage, HaarError> {
    if face.h < 2 {
        return Err(HaarError::DegenerateEyeBand(face.h));
    }
    let h = face.h as i32;
    let y0 = face.y + h / 5;
    let y1 = face.y + h - h / 3;
    if y1 <= y0 {
        return Err(HaarError::DegenerateEyeBand(face.h));
    }
    let band = Rect::new(face.x, y0, face.w, (y1 - y0) as u32);
    let band =
        band.clamp_to(frame.width(), frame.height()).ok_or(HaarError::EyeBandOutsideFrame(face))?;
    let crop = frame.crop(band)?;
    Ok(imaging::resize(&crop, EYE_ROI_W, EYE_ROI_H)?)
}

// ---------------------------------------------------------------------------
// AdaBoost stage training (desk scale)
// ---------------------------------------------------------------------------

/// Per-round diagnostics from `train_stage`.
#[derive(Debug, Clone)]
pub struct StageTraining {
    pub stage: Stage,
    /// Sample-weight totals after each round's renormalization.
    pub round_weight_sums: Vec<f64>,
    /// Weighted error of the stump picked in each round.
    pub round_errors: Vec<f64>,
}

/// Discrete AdaBoost over decision stumps. Per round the pool feature and
/// threshold with the lowest weighted error is picked, voted with
/// 0.5*ln((1-e)/e), and the sample weights are reweighted and
/// renormalized. The stage threshold is the lowest vote sum attained by
/// any positive, so the stage passes every training positive. A round
/// with zero error stops training early with a capped vote weight; a
/// round where every feature does no better than chance is an error.
pub fn train_stage(
    positives: &[GrayImage],
    negatives: &[GrayImage],
    pool: &[HaarFeature],
    rounds: usize,
) -> Result<StageTraining, HaarError> {
    assert!(rounds >= 1);
    if positives.is_empty() || negatives.is_empty() || pool.is_empty() {
        return Err(HaarError::EmptyTrainingSet);
    }
    let base_w = positives[0].width();
    let base_h = positives[0].height();
    for (index, s) in positives.iter().chain(negatives.iter()).enumerate() {
        if s.width() != base_w || s.height() != base_h {
            return Err(HaarError::BadSampleSize {
                index,
                got_w: s.width(),
                got_h: s.height(),
                base_w,
                base_h,
            });
        }
    }
    let n_pos = positives.len();
    let n = n_pos + negatives.len();
    let labels: Vec<f64> = (0..n).map(|i| if i < n_pos { 1.0 } else { -1.0 }).collect();

    // Feature values per (feature, sample) and a per-feature sample
    // ordering, both reused across rounds.
    let window = Rect::new(0, 0, base_w, base_h);
    let integrals: Vec<IntegralImage> =
        positives.iter().chain(negatives.iter()).map(integral).collect();
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(pool.len());
    for f in pool {
        let mut row = Vec::with_capacity(n);
        for ii in &integrals {
            row.push(eval_feature_raw(ii, f, (base_w, base_h), window)?);
        }
        values.push(row);
    }
    let order: Vec<Vec<usize>> = values
        .iter()
        .map(|row| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).unwrap());
            idx
        })
        .collect();

    let mut weights = vec![1.0 / n as f64; n];
    let mut stumps: Vec<Stump> = Vec::new();
    let mut chosen_feature: Vec<usize> = Vec::new();
    let mut round_weight_sums = Vec::new();
    let mut round_errors = Vec::new();
    const EPS_CAP: f64 = 1e-10;

    for round in 0..rounds {
        let total_pos: f64 = (0..n).filter(|&i| labels[i] > 0.0).map(|i| weights[i]).sum();
        let total_neg = 1.0 - total_pos;
        // (feature, threshold, polarity, error)
        let mut best: Option<(usize, f64, i8, f64)> = None;
        for (fi, row) in values.iter().enumerate() {
            let idx = &order[fi];
            // err for polarity +1 at a cut: positives below + negatives
            // at-or-above; polarity -1 is the complement.
            let mut consider = |pos_below: f64, neg_below: f64, thr: f64| {
                let err_plus = pos_below + (total_neg - neg_below);
                let err_minus = 1.0 - err_plus;
                for (err, pol) in [(err_plus, 1i8), (err_minus, -1i8)] {
                    if best.map_or(true, |b| err < b.3 - 1e-15) {
                        best = Some((fi, thr, pol, err));
                    }
                }
            };
            let mut pos_below = 0.0;
            let mut neg_below = 0.0;
            consider(pos_below, neg_below, row[idx[0]] - 1.0);
            for k in 0..n {
                let i = idx[k];
                if labels[i] > 0.0 {
                    pos_below += weights[i];
                } else {
                    neg_below += weights[i];
                }
                let here = row[i];
                let next = if k + 1 < n { row[idx[k + 1]] } else { here + 2.0 };
                if next > here {
                    consider(pos_below, neg_below, (here + next) / 2.0);
                }
            }
        }
        let (fi, threshold, polarity, error) = best.unwrap();
        if error >= 0.5 - 1e-12 {
            return Err(HaarError::NoUsefulFeature { round });
        }
        let eps = error.max(EPS_CAP);
        let alpha = 0.5 * ((1.0 - eps) / eps).ln();
        let stump =
            Stump { feature: pool[fi].clone(), threshold, polarity, vote_weight: alpha };
        round_errors.push(error);
        let mut sum = 0.0;
        for i in 0..n {
            let h = stump.vote(values[fi][i]);
            weights[i] *= (-alpha * labels[i] * h).exp();
            sum += weights[i];
        }
        for w in &mut weights {
            *w /= sum;
        }
        round_weight_sums.push(weights.iter().sum());
        stumps.push(stump);
        chosen_feature.push(fi);
        if error <= EPS_CAP {
            break;
        }
    }

    let mut stage_threshold = f64::INFINITY;
    for i in 0..n_pos {
        let votes: f64 = stumps
            .iter()
            .zip(&chosen_feature)
            .map(|(s, &fi)| s.vote_weight * s.vote(values[fi][i]))
            .sum();
        stage_threshold = stage_threshold.min(votes);
    }

    Ok(StageTraining {
        stage: Stage { stumps, stage_threshold },
        round_weight_sums,
        round_errors,
    })
}

/// Trains stages sequentially, dropping already-rejected negatives before
/// each subsequent stage. Finishes early with fewer stages when no
/// negatives survive. `stage_specs` gives the boosting rounds per stage.
pub fn build_cascade(
    positives: &[GrayImage],
    negatives: &[GrayImage],
    pool: &[HaarFeature],
    stage_specs: &[usize],
) -> Result<Cascade, HaarError> {
    if positives.is_empty() || negatives.is_empty() {
        return Err(HaarError::EmptyTrainingSet);
    }
    let base_w = positives[0].width();
    let base_h = positives[0].height();
    let mut survivors: Vec<GrayImage> = negatives.to_vec();
    let mut stages = Vec::new();
    for &rounds in stage_specs {
        if survivors.is_empty() {
            break;
        }
        let trained = train_stage(positives, &survivors, pool, rounds)?;
        let stage = trained.stage;
        let window = Rect::new(0, 0, base_w, base_h);
        survivors.retain(|neg| {
            let ii = integral(neg);
            let votes: f64 = stage
                .stumps
                .iter()
                .map(|s| {
                    let v = eval_feature_raw(&ii, &s.feature, (base_w, base_h), window)
                        .unwrap_or(0.0);
                    s.vote_weight * s.vote(v)
                })
                .sum();
            votes >= stage.stage_threshold
        });
        stages.push(stage);
    }
    Ok(Cascade { base_w, base_h, stages, variance_normalize: false })
}

/// Deterministic feature pool: all feature kinds enumerated on a coarse
/// position/size grid, shuffled with a seeded generator and truncated.
pub fn generate_feature_pool(
    base_w: u32,
    base_h: u32,
    max_features: usize,
    seed: u64,
) -> Vec<HaarFeature> {
    let mut pool = Vec::new();
    let step = 2i32;
    let mut sizes = Vec::new();
    let mut s = 4u32;
    while s <= base_w.max(base_h) {
        sizes.push(s);
        s += 4;
    }
    for &w in &sizes {
        for &h in &sizes {
            if w > base_w || h > base_h {
                continue;
            }
            let mut y = 0i32;
            while y + h as i32 <= base_h as i32 {
                let mut x = 0i32;
                while x + w as i32 <= base_w as i32 {
                    pool.push(HaarFeature::two_rect_horizontal(x, y, w, h));
                    pool.push(HaarFeature::two_rect_vertical(x, y, w, h));
                    if w % 3 == 0 {
                        pool.push(HaarFeature::three_rect_horizontal(x, y, w, h));
                    }
                    if h % 3 == 0 {
                        pool.push(HaarFeature::three_rect_vertical(x, y, w, h));
                    }
                    pool.push(HaarFeature::four_rect(x, y, w, h));
                    x += step;
                }
                y += step;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(max_features);
    pool
}

// ---------------------------------------------------------------------------
// Cascade text format
// ---------------------------------------------------------------------------

/// Writes the versioned text format:
///
/// ```text
/// HAARCASCADE v1 <base_w> <base_h> <variance_normalize:0|1> <n_stages>
/// STAGE <n_stumps> <threshold>
/// STUMP <vote_weight> <threshold> <polarity> <n_rects>
/// RECT x y w h weight
/// ```
pub fn write_cascade(c: &Cascade, w: &mut impl Write) -> Result<(), HaarError> {
    writeln!(
        w,
        "HAARCASCADE v1 {} {} {} {}",
        c.base_w,
        c.base_h,
        u8::from(c.variance_normalize),
        c.stages.len()
    )?;
    for stage in &c.stages {
        writeln!(w, "STAGE {} {}", stage.stumps.len(), stage.stage_threshold)?;
        for s in &stage.stumps {
            writeln!(
                w,
                "STUMP {} {} {} {}",
                s.vote_weight,
                s.threshold,
                s.polarity,
                s.feature.rects.len()
            )?;
            for (r, weight) in &s.feature.rects {
                writeln!(w, "RECT {} {} {} {} {}", r.x, r.y, r.w, r.h, weight)?;
            }
        }
    }
    Ok(())
}

pub fn read_cascade(r: &mut impl BufRead) -> Result<Cascade, HaarError> {
    let mut tokens = TokenReader::new(r)?;
    tokens.expect("HAARCASCADE")?;
    tokens.expect("v1")?;
    let base_w: u32 = tokens.parse()?;
    let base_h: u32 = tokens.parse()?;
    let vn: u32 = tokens.parse()?;
    let n_stages: usize = tokens.parse()?;
    let mut stages = Vec::with_capacity(n_stages);
    for _ in 0..n_stages {
        tokens.expect("STAGE")?;
        let n_stumps: usize = tokens.parse()?;
        let stage_threshold: f64 = tokens.parse()?;
        let mut stumps = Vec::with_capacity(n_stumps);
        for _ in 0..n_stumps {
            tokens.expect("STUMP")?;
            let vote_weight: f64 = tokens.parse()?;
            let threshold: f64 = tokens.parse()?;
            let polarity: i8 = tokens.parse()?;
            let n_rects: usize = tokens.parse()?;
            if n_rects == 0 {
                return Err(HaarError::BadCascadeFile("stump with zero rects".into()));
            }
            let mut rects = Vec::with_capacity(n_rects);
            for _ in 0..n_rects {
                tokens.expect("RECT")?;
                let x: i32 = tokens.parse()?;
                let y: i32 = tokens.parse()?;
                let w: u32 = tokens.parse()?;
                let h: u32 = tokens.parse()?;
                let weight: f64 = tokens.parse()?;
                rects.push((Rect::new(x, y, w, h), weight));
            }
            let kind = HaarFeature::infer_kind(&rects);
            stumps.push(Stump {
                feature: HaarFeature { kind, rects },
                threshold,
                polarity,
                vote_weight,
            });
        }
        if stumps.is_empty() {
            return Err(HaarError::BadCascadeFile("stage with zero stumps".into()));
        }
        stages.push(Stage { stumps, stage_threshold });
    }
    if stages.is_empty() {
        return Err(HaarError::BadCascadeFile("cascade with zero stages".into()));
    }
    if base_w < 8 || base_h < 8 {
        return Err(HaarError::BadCascadeFile(format!(
            "base window {base_w}x{base_h} below the 8x8 minimum"
        )));
    }
    Ok(Cascade { base_w, base_h, stages, variance_normalize: vn != 0 })
}

pub fn read_cascade_file(path: impl AsRef<std::path::Path>) -> Result<Cascade, HaarError> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_cascade(&mut r)
}

pub fn write_cascade_file(c: &Cascade, path: impl AsRef<std::path::Path>) -> Result<(), HaarError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_cascade(c, &mut w)?;
    Ok(())
}

/// Whitespace token stream over a text model file; locale-independent.
pub(crate) struct TokenReader {
    tokens: Vec<String>,
    pos: usize,
}

impl TokenReader {
    pub(crate) fn new(r: &mut impl BufRead) -> Result<Self, std::io::Error> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Ok(Self { tokens: text.split_whitespace().map(|s| s.to_string()).collect(), pos: 0 })
    }

    pub(crate) fn next_token(&mut self) -> Result<&str, String> {
        let t = self.tokens.get(self.pos).ok_or("unexpected end of file")?;
        self.pos += 1;
        Ok(t)
    }

    pub(crate) fn expect_token(&mut self, what: &str) -> Result<(), String> {
        let t = self.next_token()?;
        if t != what {
            return Err(format!("expected {what:?}, got {t:?}"));
        }
        Ok(())
    }

    pub(crate) fn parse_token<T: std::str::FromStr>(&mut self) -> Result<T, String> {
        let t = self.next_token()?;
        t.parse::<T>().map_err(|_| format!("bad number {t:?}"))
    }

    fn expect(&mut self, what: &str) -> Result<(), HaarError> {
        self.expect_token(what).map_err(HaarError::BadCascadeFile)
    }

    fn parse<T: std::str::FromStr>(&mut self) -> Result<T, HaarError> {
        self.parse_token().map_err(HaarError::BadCascadeFile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::integral;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pass_all_cascade(base: u32) -> Cascade {
        let stump = Stump {
            feature: HaarFeature::two_rect_horizontal(0, 0, base, base),
            threshold: 0.0,
            polarity: 1,
            vote_weight: 1.0,
        };
        Cascade {
            base_w: base,
            base_h: base,
            stages: vec![Stage { stumps: vec![stump], stage_threshold: f64::NEG_INFINITY }],
            variance_normalize: false,
        }
    }

    #[test]
    fn constructed_features_validate() {
        for f in [
            HaarFeature::two_rect_horizontal(2, 3, 8, 6),
            HaarFeature::two_rect_vertical(0, 0, 10, 8),
            HaarFeature::three_rect_horizontal(1, 1, 9, 5),
            HaarFeature::three_rect_vertical(4, 2, 6, 9),
            HaarFeature::four_rect(0, 0, 12, 10),
        ] {
            assert!(f.validate(16, 16), "{:?}", f.kind);
        }
    }

    #[test]
    fn features_are_zero_on_constant_images_at_all_scales() {
        let img = GrayImage::filled(120, 120, 173).unwrap();
        let ii = integral(&img);
        let pool = generate_feature_pool(24, 24, 200, 1);
        for f in &pool {
            for window in [
                Rect::new(0, 0, 24, 24),
                Rect::new(5, 9, 31, 31),
                Rect::new(10, 10, 48, 48),
                Rect::new(3, 7, 97, 101),
            ] {
                let v = eval_feature_raw(&ii, f, (24, 24), window).unwrap();
                assert!(v.abs() < 1e-9, "kind {:?} window {:?} -> {v}", f.kind, window);
            }
        }
    }

    #[test]
    fn two_rect_vertical_on_half_split_window() {
        // top half 255, bottom half 0
        let mut img = GrayImage::filled(24, 24, 0).unwrap();
        for y in 0..12 {
            for x in 0..24 {
                img.set(x, y, 255);
            }
        }
        let ii = integral(&img);
        let f = HaarFeature::two_rect_vertical(0, 0, 24, 24);
        let v = eval_feature_raw(&ii, &f, (24, 24), Rect::new(0, 0, 24, 24)).unwrap();
        // oracle: direct summation, +1 * top sum - 1 * bottom sum
        let expected = (24 * 12 * 255) as f64;
        assert_eq!(v, expected);
        // flipped feature direction via the horizontal variant sums to 0
        let fh = HaarFeature::two_rect_horizontal(0, 0, 24, 24);
        let vh = eval_feature_raw(&ii, &fh, (24, 24), Rect::new(0, 0, 24, 24)).unwrap();
        assert_eq!(vh, 0.0);
    }

    /// Evaluating a feature at scale 2 on a nearest-neighbor 2x upscale
    /// equals its base-scale value on the original: scaling the window is
    /// equivalent to scaling the image.
    #[test]
    fn scale_two_matches_explicit_upscale() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let base = 24u32;
        let img = crate::synth::noise_image(&mut rng, base, base);
        let mut up = GrayImage::filled(base * 2, base * 2, 0).unwrap();
        for y in 0..base * 2 {
            for x in 0..base * 2 {
                up.set(x, y, img.get(x / 2, y / 2));
            }
        }
        let ii = integral(&img);
        let ii_up = integral(&up);
        let pool = generate_feature_pool(base, base, 100, 2);
        for f in &pool {
            let v1 = eval_feature_raw(&ii, f, (base, base), Rect::new(0, 0, base, base)).unwrap();
            let v2 =
                eval_feature_raw(&ii_up, f, (base, base), Rect::new(0, 0, base * 2, base * 2))
                    .unwrap();
            assert!((v2 - v1).abs() < 1e-6, "kind {:?}: {v2} vs {v1}", f.kind);
        }
    }

    #[test]
    fn variance_normalization_divides_by_window_std() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let img = crate::synth::noise_image(&mut rng, 24, 24);
        let integrals = ImageIntegrals::new(&img);
        let mut c = pass_all_cascade(24);
        let f = HaarFeature::two_rect_vertical(0, 0, 24, 24);
        let window = Rect::new(0, 0, 24, 24);
        c.variance_normalize = false;
        let raw = c.eval_feature(&integrals, &f, window).unwrap();
        c.variance_normalize = true;
        let normed = c.eval_feature(&integrals, &f, window).unwrap();
        let (_, std) = crate::imaging::window_stats(&integrals.ii, &integrals.sq, window).unwrap();
        assert!(std > 1.0);
        assert!((normed - raw / std).abs() < 1e-9);
    }

    #[test]
    fn cascade_with_minus_infinity_threshold_passes_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let img = crate::synth::noise_image(&mut rng, 30, 30);
        let integrals = ImageIntegrals::new(&img);
        let c = pass_all_cascade(24);
        for window in [Rect::new(0, 0, 24, 24), Rect::new(3, 3, 27, 27)] {
            assert!(c.eval_window(&integrals, window).unwrap().passed);
        }
    }

    #[test]
    fn first_stage_early_exit_is_observable() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let img = crate::synth::noise_image(&mut rng, 24, 24);
        let integrals = ImageIntegrals::new(&img);
        let mut c = pass_all_cascade(24);
        // first stage impassable, second has three stumps that are never reached
        c.stages[0].stage_threshold = f64::INFINITY;
        let second = Stage {
            stumps: vec![c.stages[0].stumps[0].clone(); 3],
            stage_threshold: f64::NEG_INFINITY,
        };
        c.stages.push(second);
        let eval = c.eval_window(&integrals, Rect::new(0, 0, 24, 24)).unwrap();
        assert!(!eval.passed);
        assert_eq!(eval.stumps_evaluated, 1);
    }

    #[test]
    fn detect_on_blank_image_finds_nothing() {
        let img = GrayImage::filled(120, 90, 128).unwrap();
        // trained-style cascade that requires contrast: threshold above zero
        let stump = Stump {
            feature: HaarFeature::two_rect_vertical(0, 0, 24, 24),
            threshold: 500.0,
            polarity: 1,
            vote_weight: 1.0,
        };
        let c = Cascade {
            base_w: 24,
            base_h: 24,
            stages: vec![Stage { stumps: vec![stump], stage_threshold: 0.5 }],
            variance_normalize: false,
        };
        let dets = detect(&c, &img, &DetectParams::default()).unwrap();
        assert!(dets.is_empty());
    }

    #[test]
    fn detect_rejects_image_below_base_window() {
        let img = GrayImage::filled(16, 16, 0).unwrap();
        let c = pass_all_cascade(24);
        assert!(matches!(
            detect(&c, &img, &DetectParams::default()),
            Err(HaarError::ImageBelowBaseWindow { .. })
        ));
    }

    #[test]
    fn detect_fast_sf1_equals_detect_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let img = crate::synth::face_frame(
            &mut rng,
            200,
            160,
            Rect::new(60, 40, 80, 80),
            crate::synth::EyePattern::Open,
        );
        let stump = Stump {
            feature: HaarFeature::two_rect_vertical(0, 0, 24, 24),
            threshold: 100.0,
            polarity: 1,
            vote_weight: 1.0,
        };
        let c = Cascade {
            base_w: 24,
            base_h: 24,
            stages: vec![Stage { stumps: vec![stump], stage_threshold: 0.0 }],
            variance_normalize: false,
        };
        let p = DetectParams { sf: 1, min_neighbors: 1, ..Default::default() };
        let a = detect(&c, &img, &p).unwrap();
        let b = detect_fast(&c, &img, &p).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.rect, y.rect);
            assert_eq!(x.score, y.score);
        }
    }

    #[test]
    fn detect_fast_errors_when_downsample_below_base() {
        let img = GrayImage::filled(100, 100, 0).unwrap();
        let c = pass_all_cascade(24);
        let p = DetectParams { sf: 8, ..Default::default() };
        assert!(matches!(
            detect_fast(&c, &img, &p),
            Err(HaarError::DownsampleBelowBaseWindow { .. })
        ));
    }

    #[test]
    fn eye_roi_band_arithmetic() {
        // face (100,50,300,300): band rows 110..250 of the frame
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut frame = crate::synth::noise_image(&mut rng, 640, 480);
        // paint the band rows so the crop is recognizable
        for y in 110..250u32 {
            for x in 100..400u32 {
                frame.set(x, y, 200);
            }
        }
        let roi = select_eye_roi(Rect::new(100, 50, 300, 300), &frame).unwrap();
        assert_eq!((roi.width(), roi.height()), (EYE_ROI_W, EYE_ROI_H));
        // the band was uniform bright, so the ROI interior must be too
        for y in 1..roi.height() - 1 {
            for x in 1..roi.width() - 1 {
                assert_eq!(roi.get(x, y), 200);
            }
        }
    }

    #[test]
    fn eye_roi_small_face_band() {
        // face h=15: band rows y+3 .. y+10
        let frame = GrayImage::filled(64, 64, 80).unwrap();
        let roi = select_eye_roi(Rect::new(10, 20, 30, 15), &frame).unwrap();
        assert_eq!((roi.width(), roi.height()), (EYE_ROI_W, EYE_ROI_H));
    }

    #[test]
    fn eye_roi_rejects_degenerate_faces() {
        let frame = GrayImage::filled(64, 64, 80).unwrap();
        assert!(matches!(
            select_eye_roi(Rect::new(0, 0, 10, 1), &frame),
            Err(HaarError::DegenerateEyeBand(1))
        ));
    }

    #[test]
    fn eye_roi_is_always_200x70() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let frame = crate::synth::noise_image(&mut rng, 640, 480);
        for _ in 0..50 {
            let w = rng.gen_range(20..400);
            let h = rng.gen_range(8..400);
            let x = rng.gen_range(-20..620i32);
            let y = rng.gen_range(-20..460i32);
            if let Ok(roi) = select_eye_roi(Rect::new(x, y, w, h), &frame) {
                assert_eq!((roi.width(), roi.height()), (EYE_ROI_W, EYE_ROI_H));
            }
        }
    }

    #[test]
    fn cascade_file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let pool = generate_feature_pool(24, 24, 40, 3);
        let stages: Vec<Stage> = (0..3)
            .map(|_| Stage {
                stumps: (0..4)
                    .map(|_| Stump {
                        feature: pool[rng.gen_range(0..pool.len())].clone(),
                        threshold: rng.gen_range(-100.0..100.0),
                        polarity: if rng.gen_bool(0.5) { 1 } else { -1 },
                        vote_weight: rng.gen_range(0.01..3.0),
                    })
                    .collect(),
                stage_threshold: rng.gen_range(-5.0..5.0),
            })
            .collect();
        let c = Cascade { base_w: 24, base_h: 24, stages, variance_normalize: true };
        let mut buf = Vec::new();
        write_cascade(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("HAARCASCADE v1 24 24 1 3\n"));
        let back = read_cascade(&mut buf.as_slice()).unwrap();
        assert_eq!(back.base_w, 24);
        assert_eq!(back.variance_normalize, true);
        assert_eq!(back.stages.len(), c.stages.len());
        for (s1, s2) in c.stages.iter().zip(&back.stages) {
            assert_eq!(s1.stage_threshold, s2.stage_threshold);
            for (a, b) in s1.stumps.iter().zip(&s2.stumps) {
                assert_eq!(a.threshold, b.threshold);
                assert_eq!(a.vote_weight, b.vote_weight);
                assert_eq!(a.polarity, b.polarity);
                assert_eq!(a.feature.rects, b.feature.rects);
            }
        }
    }

    #[test]
    fn cascade_file_rejects_garbage() {
        assert!(read_cascade(&mut &b"NOTACASCADE"[..]).is_err());
        assert!(read_cascade(&mut &b"HAARCASCADE v1 24 24 0 1\nSTAGE x 0"[..]).is_err());
        assert!(read_cascade(&mut &b"HAARCASCADE v1 4 4 0 0"[..]).is_err());
    }
}
