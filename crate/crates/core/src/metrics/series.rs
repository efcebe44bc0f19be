use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A labelled metric sampled at integer times.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    label: String,
    times: Vec<u64>,
    values: Vec<f64>,
}

impl MetricSeries {
    /// Empty series.
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            times: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a series from aligned vectors; times must increase strictly.
    pub fn from_parts(label: impl Into<String>, times: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: times.len(),
                right: values.len(),
            });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("times", "must be strictly increasing"));
        }
        Ok(Self {
            label: label.into(),
            times,
            values,
        })
    }

    /// Appends a sample.
    ///
    /// # Panics
    /// If `t` does not exceed the last recorded time.
    pub fn push(&mut self, t: u64, value: f64) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "times must be strictly increasing");
        }
        self.times.push(t);
        self.values.push(value);
    }

    /// Metric name.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sample times.
    pub fn times(&self) -> &[u64] {
        &self.times
    }

    /// Sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// `true` when no samples were recorded.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Value at time `t`, if sampled.
    pub fn value_at(&self, t: u64) -> Option<f64> {
        self.times.binary_search(&t).ok().map(|i| self.values[i])
    }

    /// Times as floating-point abscissae.
    pub fn times_f64(&self) -> Vec<f64> {
        self.times.iter().map(|&t| t as f64).collect()
    }

    /// Samples with `t` in `[from, to]`.
    pub fn window(&self, from: u64, to: u64) -> (Vec<f64>, Vec<f64>) {
        self.times
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| t >= from && t <= to)
            .map(|(&t, &v)| (t as f64, v))
            .unzip()
    }
}
