//! Kalman tracking of the face bounding box.
//!
//! The state is the box's two extreme corners plus their velocities,
//! propagated with a constant-velocity model. Per frame the tracker
//! either updates from a fresh detection or coasts on prediction, and it
//! hands back a search region around the predicted box so the detector
//! only scans a fraction of the frame. After too many consecutive misses
//! it reinitializes and the search region falls back to the full frame.

use crate::imaging::Rect;
use nalgebra::{SMatrix, SVector};
use thiserror::Error;

pub type StateVector = SVector<f64, 8>;
pub type StateCov = SMatrix<f64, 8, 8>;
pub type MeasureVector = SVector<f64, 4>;

#[derive(Debug, Error)]
pub enum TrackerError {
    #[error("innovation covariance is singular; measurement noise must be positive definite")]
    SingularInnovation,
}

/// Corner-plus-velocity state [x1 y1 x2 y2 vx1 vy1 vx2 vy2] with its
/// covariance.
#[derive(Debug, Clone)]
pub struct KalmanState {
    pub x: StateVector,
    pub p: StateCov,
}

impl KalmanState {
    /// State centered on a measured box with zero velocities.
    pub fn from_measurement(z: &MeasureVector, initial_variance: f64) -> Self {
        let mut x = StateVector::zeros();
        for i in 0..4 {
            x[i] = z[i];
        }
        Self { x, p: StateCov::identity() * initial_variance }
    }

    /// The box described by the position entries.
    pub fn rect(&self) -> Rect {
        let x0 = self.x[0].min(self.x[2]);
        let y0 = self.x[1].min(self.x[3]);
        let x1 = self.x[0].max(self.x[2]);
        let y1 = self.x[1].max(self.x[3]);
        Rect::new(
            x0.round() as i32,
            y0.round() as i32,
            ((x1 - x0).round() as u32).max(1),
            ((y1 - y0).round() as u32).max(1),
        )
    }

    /// Text dump for goldens: 8 state entries then the 64 covariance
    /// entries row-major, space separated, one line each.
    pub fn debug_dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for i in 0..8 {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{:.6e}", self.x[i]).unwrap();
        }
        out.push('\n');
        for r in 0..8 {
            for c in 0..8 {
                if c > 0 {
                    out.push(' ');
                }
                write!(out, "{:.6e}", self.p[(r, c)]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Filter matrices and tracker policy knobs.
#[derive(Debug, Clone)]
pub struct KalmanConfig {
    /// Constant-velocity transition (positions advance by velocities each
    /// frame).
    pub f: StateCov,
    /// Measurement map selecting the four corner coordinates.
    pub h: SMatrix<f64, 4, 8>,
    pub q: StateCov,
    pub r: SMatrix<f64, 4, 4>,
    pub initial_variance: f64,
    /// Search-ROI inflation on each side, as a fraction of the box
    /// dimensions.
    pub roi_margin: f64,
    /// Consecutive misses bridged by prediction before reinitializing.
    pub max_coast: u32,
}

impl Default for KalmanConfig {
    fn default() -> Self {
        let mut f = StateCov::identity();
        for i in 0..4 {
            f[(i, i + 4)] = 1.0;
        }
        let mut h = SMatrix::<f64, 4, 8>::zeros();
        for i in 0..4 {
            h[(i, i)] = 1.0;
        }
        Self {
            f,
            h,
            q: StateCov::identity() * 0.01,
            r: SMatrix::<f64, 4, 4>::identity(),
            initial_variance: 100.0,
            roi_margin: 0.5,
            max_coast: 5,
        }
    }
}

/// A priori propagation: x <- F x, P <- F P F' + Q, with the symmetry of
/// P restored against rounding.
pub fn predict(s: &KalmanState, cfg: &KalmanConfig) -> KalmanState {
    let x = cfg.f * s.x;
    let p = cfg.f * s.p * cfg.f.transpose() + cfg.q;
    KalmanState { x, p: (p + p.transpose()) * 0.5 }
}

/// Measurement update from the four corner coordinates.
pub fn update(
    s: &KalmanState,
    z: &MeasureVector,
    cfg: &KalmanConfig,
) -> Result<KalmanState, TrackerError> {
    let residual = z - cfg.h * s.x;
    let innovation_cov = cfg.h * s.p * cfg.h.transpose() + cfg.r;
    let inv = innovation_cov.try_inverse().ok_or(TrackerError::SingularInnovation)?;
    let gain = s.p * cfg.h.transpose() * inv;
    let x = s.x + gain * residual;
    let p = (StateCov::identity() - gain * cfg.h) * s.p;
    Ok(KalmanState { x, p: (p + p.transpose()) * 0.5 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackMode {
    Uninitialized,
    Tracking,
    Coasting,
}

/// Per-stream tracker state machine.
#[derive(Debug, Clone)]
pub struct FaceTracker {
    cfg: KalmanConfig,
    mode: TrackMode,
    frames_coasted: u32,
    state: Option<KalmanState>,
}

fn corners(r: Rect) -> MeasureVector {
    MeasureVector::from([r.x as f64, r.y as f64, r.right() as f64, r.bottom() as f64])
}

impl FaceTracker {
    pub fn new(cfg: KalmanConfig) -> Self {
        Self { cfg, mode: TrackMode::Uninitialized, frames_coasted: 0, state: None }
    }

    pub fn mode(&self) -> TrackMode {
        self.mode
    }

    pub fn frames_coasted(&self) -> u32 {
        self.frames_coasted
    }

    pub fn state(&self) -> Option<&KalmanState> {
        self.state.as_ref()
    }

    /// Advances one frame and returns the search region for the next
    /// detection pass.
    ///
    /// With a detection the filter (re)initializes or predict-updates and
    /// tracks; without one it predicts only, coasting up to `max_coast`
    /// frames before dropping back to an uninitialized full-frame search.
    pub fn step(
        &mut self,
        detection: Option<Rect>,
        frame_w: u32,
        frame_h: u32,
    ) -> Result<Rect, TrackerError> {
        let full = Rect::new(0, 0, frame_w, frame_h);
        match detection {
            Some(rect) => {
                let z = corners(rect);
                let next = match (&self.state, self.mode) {
                    (Some(s), TrackMode::Tracking | TrackMode::Coasting) => {
                        update(&predict(s, &self.cfg), &z, &self.cfg)?
                    }
                    _ => KalmanState::from_measurement(&z, self.cfg.initial_variance),
                };
                self.state = Some(next);
                self.mode = TrackMode::Tracking;
                self.frames_coasted = 0;
            }
            None => {
                if self.mode == TrackMode::Uninitialized {
                    return Ok(full);
                }
                self.frames_coasted += 1;
                if self.frames_coasted > self.cfg.max_coast {
                    self.mode = TrackMode::Uninitialized;
                    self.state = None;
                    self.frames_coasted = 0;
                    return Ok(full);
                }
                let s = self.state.as_ref().expect("state exists while tracking");
                self.state = Some(predict(s, &self.cfg));
                self.mode = TrackMode::Coasting;
            }
        }
        Ok(self.search_roi(frame_w, frame_h))
    }

    /// Predicted box inflated by the margin, clamped to the frame.
    pub fn search_roi(&self, frame_w: u32, frame_h: u32) -> Rect {
        let full = Rect::new(0, 0, frame_w, frame_h);
        let s = match &self.state {
            Some(s) => s,
            None => return full,
        };
        let boxed = match s.rect().clamp_to(frame_w, frame_h) {
            Some(r) => r,
            None => return full,
        };
        let mx = (boxed.w as f64 * self.cfg.roi_margin).round() as i32;
        let my = (boxed.h as f64 * self.cfg.roi_margin).round() as i32;
        let inflated = Rect::new(
            boxed.x - mx,
            boxed.y - my,
            boxed.w + 2 * mx as u32,
            boxed.h + 2 * my as u32,
        );
        inflated.clamp_to(frame_w, frame_h).unwrap_or(full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn max_asymmetry(p: &StateCov) -> f64 {
        let d = p - p.transpose();
        d.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn predict_keeps_still_state_still() {
        let mut cfg = KalmanConfig::default();
        cfg.q = StateCov::zeros();
        let z = MeasureVector::from([10.0, 20.0, 50.0, 60.0]);
        let s = KalmanState::from_measurement(&z, 100.0);
        let next = predict(&s, &cfg);
        for i in 0..4 {
            assert_eq!(next.x[i], s.x[i]);
        }
    }

    #[test]
    fn predict_advances_position_by_velocity() {
        let cfg = KalmanConfig::default();
        let z = MeasureVector::from([10.0, 20.0, 50.0, 60.0]);
        let mut s = KalmanState::from_measurement(&z, 100.0);
        s.x[4] = 3.0; // vx1
        let next = predict(&s, &cfg);
        assert!((next.x[0] - 13.0).abs() < 1e-12);
        assert_eq!(next.x[1], 20.0);
    }

    #[test]
    fn predict_never_shrinks_uncertainty_with_positive_q() {
        let cfg = KalmanConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = KalmanState::from_measurement(
            &MeasureVector::from([0.0, 0.0, 10.0, 10.0]),
            rng.gen_range(0.1..10.0),
        );
        for _ in 0..100 {
            let next = predict(&s, &cfg);
            assert!(next.p.trace() >= s.p.trace() - 1e-12);
            s = next;
        }
    }

    #[test]
    fn update_with_huge_r_keeps_prior() {
        let mut cfg = KalmanConfig::default();
        cfg.r = SMatrix::<f64, 4, 4>::identity() * 1e12;
        let s = KalmanState::from_measurement(&MeasureVector::from([5.0, 5.0, 20.0, 20.0]), 1.0);
        // unit residual on every measured coordinate
        let z = MeasureVector::from([6.0, 6.0, 21.0, 21.0]);
        let post = update(&s, &z, &cfg).unwrap();
        let delta = (post.x - s.x).norm();
        assert!(delta < 1e-3, "posterior moved by {delta}");
    }

    #[test]
    fn update_with_tiny_r_adopts_measurement() {
        let mut cfg = KalmanConfig::default();
        cfg.r = SMatrix::<f64, 4, 4>::identity() * 1e-12;
        let s = KalmanState::from_measurement(&MeasureVector::from([5.0, 5.0, 20.0, 20.0]), 100.0);
        let z = MeasureVector::from([8.0, 4.0, 26.0, 19.0]);
        let post = update(&s, &z, &cfg).unwrap();
        for i in 0..4 {
            assert!((post.x[i] - z[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn update_rejects_singular_innovation() {
        let mut cfg = KalmanConfig::default();
        cfg.r = SMatrix::<f64, 4, 4>::zeros();
        let mut s = KalmanState::from_measurement(&MeasureVector::from([0.0; 4]), 1.0);
        s.p = StateCov::zeros();
        assert!(matches!(
            update(&s, &MeasureVector::from([1.0; 4]), &cfg),
            Err(TrackerError::SingularInnovation)
        ));
    }

    #[test]
    fn noiseless_track_prediction_converges() {
        let cfg = KalmanConfig::default();
        let v = [2.0, 1.0, 2.0, 1.0];
        let at = |t: f64| {
            MeasureVector::from([
                100.0 + v[0] * t,
                80.0 + v[1] * t,
                220.0 + v[2] * t,
                190.0 + v[3] * t,
            ])
        };
        let mut s = KalmanState::from_measurement(&at(0.0), cfg.initial_variance);
        for t in 1..=10 {
            s = update(&predict(&s, &cfg), &at(t as f64), &cfg).unwrap();
        }
        // one-step-ahead prediction vs the true trajectory
        let pred = predict(&s, &cfg);
        let truth = at(11.0);
        for i in 0..4 {
            assert!(
                (pred.x[i] - truth[i]).abs() <= 0.5,
                "coordinate {i}: {} vs {}",
                pred.x[i],
                truth[i]
            );
        }
    }

    #[test]
    fn covariance_stays_symmetric_over_random_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut cfg = KalmanConfig::default();
        let mut s = KalmanState::from_measurement(&MeasureVector::from([0.0, 0.0, 30.0, 30.0]), 50.0);
        for i in 0..10_000 {
            if i % 97 == 0 {
                // refresh noise scales now and then, keeping them PSD
                cfg.q = StateCov::identity() * rng.gen_range(1e-4..1.0);
                cfg.r = SMatrix::<f64, 4, 4>::identity() * rng.gen_range(1e-3..10.0);
            }
            s = predict(&s, &cfg);
            if rng.gen_bool(0.7) {
                let z = MeasureVector::from([
                    rng.gen_range(-50.0..50.0),
                    rng.gen_range(-50.0..50.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                ]);
                s = update(&s, &z, &cfg).unwrap();
            }
            assert!(max_asymmetry(&s.p) < 1e-9);
            for d in 0..8 {
                assert!(s.p[(d, d)] >= 0.0);
            }
        }
    }

    #[test]
    fn first_detection_centers_the_roi() {
        let mut t = FaceTracker::new(KalmanConfig::default());
        let det = Rect::new(200, 150, 100, 100);
        let roi = t.step(Some(det), 640, 480).unwrap();
        assert_eq!(t.mode(), TrackMode::Tracking);
        let (dcx, dcy) = det.center();
        let (rcx, rcy) = roi.center();
        assert!((dcx - rcx).abs() <= 1.0 && (dcy - rcy).abs() <= 1.0);
        assert!(roi.w > det.w && roi.h > det.h);
    }

    #[test]
    fn miss_extrapolates_instead_of_holding_position() {
        let mut t = FaceTracker::new(KalmanConfig::default());
        // steady rightward motion at 5 px/frame
        for i in 0..6 {
            t.step(Some(Rect::new(100 + 5 * i, 100, 80, 80)), 640, 480).unwrap();
        }
        let last_measured_cx = (100.0 + 5.0 * 5.0) + 40.0;
        let roi = t.step(None, 640, 480).unwrap();
        assert_eq!(t.mode(), TrackMode::Coasting);
        let (cx, _) = roi.center();
        assert!(
            cx > last_measured_cx + 2.0,
            "ROI center {cx} does not lead the last measurement {last_measured_cx}"
        );
    }

    #[test]
    fn too_many_misses_reinitialize_to_full_frame() {
        let cfg = KalmanConfig::default();
        let max_coast = cfg.max_coast;
        let mut t = FaceTracker::new(cfg);
        t.step(Some(Rect::new(100, 100, 80, 80)), 640, 480).unwrap();
        for _ in 0..max_coast {
            let roi = t.step(None, 640, 480).unwrap();
            assert_eq!(t.mode(), TrackMode::Coasting);
            assert!(roi.w < 640 || roi.h < 480);
        }
        let roi = t.step(None, 640, 480).unwrap();
        assert_eq!(t.mode(), TrackMode::Uninitialized);
        assert_eq!(roi, Rect::new(0, 0, 640, 480));
    }

    #[test]
    fn roi_contains_predicted_box_and_stays_in_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = FaceTracker::new(KalmanConfig::default());
        for _ in 0..500 {
            let det = if rng.gen_bool(0.8) {
                Some(Rect::new(
                    rng.gen_range(-40..600),
                    rng.gen_range(-40..440),
                    rng.gen_range(20..200),
                    rng.gen_range(20..200),
                ))
            } else {
                None
            };
            let roi = t.step(det, 640, 480).unwrap();
            assert!(roi.x >= 0 && roi.y >= 0 && roi.right() <= 640 && roi.bottom() <= 480);
            if let Some(s) = t.state() {
                if let Some(boxed) = s.rect().clamp_to(640, 480) {
                    assert!(roi.x <= boxed.x && roi.y <= boxed.y);
                    assert!(roi.right() >= boxed.right() && roi.bottom() >= boxed.bottom());
                }
            }
        }
    }

    #[test]
    fn debug_dump_has_documented_shape() {
        let s = KalmanState::from_measurement(&MeasureVector::from([1.0, 2.0, 3.0, 4.0]), 10.0);
        let dump = s.debug_dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0].split(' ').count(), 8);
        assert!(lines[1..].iter().all(|l| l.split(' ').count() == 8));
        assert!(lines[0].starts_with("1.000000e0"));
    }
}
