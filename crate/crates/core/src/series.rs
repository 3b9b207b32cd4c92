//! Uniformly sampled time series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample types that can be checked for finiteness.
pub trait Sample: Copy {
    fn is_finite_sample(&self) -> bool;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Sample for [f64; 3] {
    fn is_finite_sample(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// A uniformly sampled series starting at `t0` with step `dt`.
///
/// `edge_guard` counts the samples at each end that upstream processing
/// marked as unreliable (the periodization transient of the DFT Hilbert
/// transform, for instance). Pure pointwise maps preserve it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series<T> {
    t0: f64,
    dt: f64,
    values: Vec<T>,
    #[serde(default)]
    edge_guard: usize,
}

pub type RealSeries = Series<f64>;
pub type ComplexSeries = Series<Complex64>;

impl<T: Sample> Series<T> {
    pub fn new(t0: f64, dt: f64, values: Vec<T>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidStep(dt));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSpec(format!("t0 must be finite, got {t0}")));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_sample()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            t0,
            dt,
            values,
            edge_guard: 0,
        })
    }

    /// Builds a series by evaluating `f` on the grid `t0 + j*dt`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> T) -> Result<Self> {
        let values = (0..n).map(|j| f(t0 + j as f64 * dt)).collect();
        Self::new(t0, dt, values)
    }
}

impl<T> Series<T> {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn edge_guard(&self) -> usize {
        self.edge_guard
    }

    pub fn with_edge_guard(mut self, guard: usize) -> Self {
        self.edge_guard = guard;
        self
    }

    /// Time stamp of sample `j`.
    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.time(j))
    }

    /// True when both series share start, step and length.
    pub fn same_grid<U>(&self, other: &Series<U>) -> bool {
        self.t0 == other.t0 && self.dt == other.dt && self.len() == other.len()
    }

    pub(crate) fn check_grid<U>(&self, other: &Series<U>) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(t0={}, dt={}, n={}) vs (t0={}, dt={}, n={})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )))
        }
    }

    /// Pointwise map. Keeps the grid and the edge guard; the caller is
    /// responsible for `f` producing finite values from finite input.
    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Series<U> {
        Series {
            t0: self.t0,
            dt: self.dt,
            values: self.values.iter().map(f).collect(),
            edge_guard: self.edge_guard,
        }
    }

    /// Pointwise combination of two series on the same grid. The result keeps
    /// the larger of the two edge guards.
    pub fn zip_with<U, V>(
        &self,
        other: &Series<U>,
        mut f: impl FnMut(&T, &U) -> V,
    ) -> Result<Series<V>> {
        self.check_grid(other)?;
        Ok(Series {
            t0: self.t0,
            dt: self.dt,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
            edge_guard: self.edge_guard.max(other.edge_guard),
        })
    }
}

impl ComplexSeries {
    pub fn re(&self) -> RealSeries {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> RealSeries {
        self.map(|z| z.im)
    }
}

/// Index range `[margin, n - margin)`; empty when the margins swallow the record.
pub(crate) fn interior(n: usize, margin: usize) -> std::ops::Range<usize> {
    if 2 * margin >= n {
        0..0
    } else {
        margin..n - margin
    }
}
