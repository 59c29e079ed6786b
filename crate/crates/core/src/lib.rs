//! Driver-alertness measurement toolkit.
//!
//! The crate implements the full processing chain of a camera-based
//! drowsiness monitor working on grayscale frames:
//!
//! - [`imaging`]: raster types, integral images, downsampling, affine
//!   rotation, histogram equalization, PGM file I/O.
//! - [`haar`]: Haar-feature evaluation, cascaded detection with the
//!   downsample-and-remap fast path, tilted-face branches, eye-ROI
//!   geometry and desk-scale AdaBoost stage training.
//! - [`tracker`]: Kalman tracking of the face bounding box to shrink the
//!   per-frame search region and bridge detection misses.
//! - [`eigen`]: PCA subspace training and nearest-subspace classification
//!   (daytime eigen-eye detection, and the subspace engine reused for the
//!   NIR descriptor path).
//! - [`lbp`]: local binary patterns, block histograms and the NIR eye
//!   localizer with precomputed block histograms.
//! - [`svm`]: binary SVM with linear/quadratic/polynomial/RBF kernels,
//!   trained by sequential minimal optimization.
//! - [`perclos`]: per-frame bookkeeping, sliding one-minute PERCLOS
//!   windows and alarm thresholding.
//! - [`pipeline`]: end-to-end orchestration (frame ingestion, day/night
//!   mode wiring, CSV output, the scale-factor benchmark and model
//!   training entry points).
//! - [`synth`]: deterministic synthetic corpora used by the test suites
//!   and for demo runs without camera footage.

pub mod eigen;
pub mod haar;
pub mod imaging;
pub mod lbp;
pub mod perclos;
pub mod pipeline;
pub mod svm;
pub mod synth;
pub mod tracker;

pub use imaging::{GrayImage, IntegralImage, Rect};
