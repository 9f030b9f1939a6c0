//! Piecewise-constant bandwidth traces and exact download timing.
//!
//! A [`CapacityTrace`] holds `(time, bandwidth)` samples; bandwidth is held
//! constant between samples and past the last one. Download completion times
//! are computed by inverting the capacity integral piece by piece, so they
//! are exact for the step model rather than approximated on a tick grid.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// A step-interpolated bandwidth-over-time trace in bits/s.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityTrace {
    samples: Vec<(f64, u64)>,
}

impl CapacityTrace {
    /// Builds a trace from `(time_s, bandwidth_bps)` samples. Times must be
    /// finite, start at 0 and increase strictly.
    pub fn new(samples: Vec<(f64, u64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Trace("trace has no samples".into()));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::Trace(format!(
                "first sample must be at t=0, got t={}",
                samples[0].0
            )));
        }
        for w in samples.windows(2) {
            if !w[1].0.is_finite() || w[0].0 >= w[1].0 {
                return Err(Error::Trace(format!(
                    "sample times must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Self { samples })
    }

    /// Constant-bandwidth trace, handy in tests and examples.
    pub fn constant(bandwidth_bps: u64) -> Self {
        Self {
            samples: vec![(0.0, bandwidth_bps)],
        }
    }

    pub fn samples(&self) -> &[(f64, u64)] {
        &self.samples
    }

    /// Time of the last sample; bandwidth is held constant from here on.
    pub fn end_time_s(&self) -> f64 {
        self.samples.last().unwrap().0
    }

    /// Mean bandwidth over `[0, end_time_s]` (the last step has zero width
    /// in this view). Returns the last sample's value for single-point traces.
    pub fn mean_bandwidth_bps(&self) -> f64 {
        let end = self.end_time_s();
        if end == 0.0 {
            return self.samples[0].1 as f64;
        }
        self.integrate(0.0, end) / end
    }

    fn piece_index(&self, t: f64) -> usize {
        // Index of the sample governing time t (last sample with time <= t).
        match self
            .samples
            .binary_search_by(|probe| probe.0.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    /// Bandwidth in effect at time `t` (clamped to the first sample for
    /// negative times).
    pub fn bandwidth_at(&self, t: f64) -> u64 {
        if t <= 0.0 {
            return self.samples[0].1;
        }
        self.samples[self.piece_index(t)].1
    }

    /// Capacity in bits deliverable over `[start, end]`.
    pub fn integrate(&self, start: f64, end: f64) -> f64 {
        if end <= start {
            return 0.0;
        }
        let mut bits = 0.0;
        let mut t = start.max(0.0);
        let mut i = self.piece_index(t);
        while t < end {
            let piece_end = match self.samples.get(i + 1) {
                Some(&(next, _)) if next < end => next,
                _ => end,
            };
            bits += self.samples[i].1 as f64 * (piece_end - t);
            t = piece_end;
            i += 1;
        }
        bits
    }

    /// How long a download of `size_bits` starting at `start` takes, assuming
    /// the link capacity is fully available to it. Zero-bandwidth stretches
    /// pass time without progress; if the trace is all zeros from some point
    /// on and bits remain, the download never completes.
    pub fn download_time(&self, start: f64, size_bits: u64) -> Result<f64> {
        if !start.is_finite() || start < 0.0 {
            return Err(Error::Misuse(format!(
                "download start must be finite and nonnegative, got {start}"
            )));
        }
        if size_bits == 0 {
            return Ok(0.0);
        }
        let mut remaining = size_bits as f64;
        let mut t = start;
        let mut i = self.piece_index(start);
        loop {
            let bw = self.samples[i].1;
            match self.samples.get(i + 1) {
                Some(&(piece_end, _)) => {
                    let capacity = bw as f64 * (piece_end - t);
                    if capacity >= remaining {
                        return Ok(t + remaining / bw as f64 - start);
                    }
                    remaining -= capacity;
                    t = piece_end;
                    i += 1;
                }
                None => {
                    // Final piece stretches to infinity.
                    if bw == 0 {
                        return Err(Error::NeverCompletes { start_s: start });
                    }
                    return Ok(t + remaining / bw as f64 - start);
                }
            }
        }
    }

    /// Parses the two-column CSV format produced by [`CapacityTrace::save`]:
    /// `time_s,bandwidth_bps` per line, `#` comments and blank lines ignored,
    /// an optional literal header tolerated.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "time_s,bandwidth_bps" {
                continue;
            }
            let parse = || -> Option<(f64, u64)> {
                let (t, bw) = line.split_once(',')?;
                Some((t.trim().parse().ok()?, bw.trim().parse().ok()?))
            };
            let (t, bw) = parse().ok_or_else(|| Error::TraceParse {
                line: lineno + 1,
                reason: format!("expected `time_s,bandwidth_bps`, got `{raw}`"),
            })?;
            samples.push((t, bw));
        }
        Self::new(samples)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("# capacity trace\n# columns: time_s,bandwidth_bps\n");
        for &(t, bw) in &self.samples {
            // `{}` prints the shortest representation that round-trips, so
            // save -> load reproduces the trace bit for bit.
            writeln!(out, "{t},{bw}").unwrap();
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// Throughput actually achieved by a transfer of `size_bits` over
/// `[start, end]`.
pub fn measured_throughput(start: f64, end: f64, size_bits: u64) -> Result<f64> {
    if !(end > start) {
        return Err(Error::EmptyInterval);
    }
    Ok(size_bits as f64 / (end - start))
}
