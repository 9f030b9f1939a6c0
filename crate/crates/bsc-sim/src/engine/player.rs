//! Playback clock: playhead, buffer, startup, and stall bookkeeping.
//!
//! The player is driven by the download loop. Wall time only moves through
//! [`Player::advance_to`]; content only appears through
//! [`Player::extend_playable`]. From those two it derives everything the
//! metrics need: when each segment started to render, how long startup took,
//! and every interval in which the playhead was starved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifest::Manifest;

/// One playback interruption. `block_in_flight` is the block that was still
/// downloading when the buffer ran dry; starvation always ends when that
/// block lands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StallEvent {
    pub start_s: f64,
    pub end_s: f64,
    pub block_in_flight: usize,
}

impl StallEvent {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Nothing has rendered yet; the first block is still on the wire.
    Startup,
    Playing,
    /// The playhead caught up with the playable prefix mid-session.
    Stalled,
    /// The whole presentation has rendered. Wall time may keep moving while
    /// straggler enhancements finish downloading.
    Finished,
}

#[derive(Debug, Clone)]
pub struct Player {
    segment_count: usize,
    segment_duration_s: f64,
    total_duration_s: f64,
    wall_s: f64,
    playhead_s: f64,
    playable_end_s: f64,
    phase: Phase,
    in_flight_block: usize,
    startup_delay_s: Option<f64>,
    finish_s: Option<f64>,
    stalls: Vec<StallEvent>,
    open_stall: Option<(f64, usize)>,
    /// Wall time each segment began to render, stamped once.
    play_starts: Vec<Option<f64>>,
    next_unstamped: usize,
}

impl Player {
    pub fn new(manifest: &Manifest) -> Self {
        Self {
            segment_count: manifest.segment_count(),
            segment_duration_s: manifest.segment_duration_s(),
            total_duration_s: manifest.total_duration_s(),
            wall_s: 0.0,
            playhead_s: 0.0,
            playable_end_s: 0.0,
            phase: Phase::Startup,
            in_flight_block: 1,
            startup_delay_s: None,
            finish_s: None,
            stalls: Vec::new(),
            open_stall: None,
            play_starts: vec![None; manifest.segment_count()],
            next_unstamped: 1,
        }
    }

    pub fn wall_s(&self) -> f64 {
        self.wall_s
    }

    pub fn playhead_s(&self) -> f64 {
        self.playhead_s
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Playable media ahead of the playhead, in seconds.
    pub fn buffer_s(&self) -> f64 {
        self.playable_end_s - self.playhead_s
    }

    pub fn startup_delay_s(&self) -> Option<f64> {
        self.startup_delay_s
    }

    /// Wall time playback of the last segment ended, once it has.
    pub fn finish_s(&self) -> Option<f64> {
        self.finish_s
    }

    pub fn stalls(&self) -> &[StallEvent] {
        &self.stalls
    }

    /// Wall time segment `segment` (1-indexed) began to render.
    pub fn play_start_s(&self, segment: usize) -> Option<f64> {
        self.play_starts.get(segment.wrapping_sub(1)).copied().flatten()
    }

    pub fn set_in_flight(&mut self, block: usize) {
        self.in_flight_block = block;
    }

    /// Grows the contiguous playable prefix. Monotonic and capped at the
    /// presentation length.
    pub fn extend_playable(&mut self, end_s: f64) -> Result<()> {
        if end_s < self.playable_end_s - 1e-9 {
            return Err(Error::Misuse(format!(
                "playable prefix shrank from {} to {end_s}",
                self.playable_end_s
            )));
        }
        if end_s > self.total_duration_s + 1e-9 {
            return Err(Error::Misuse(format!(
                "playable prefix {end_s} beyond the presentation end {}",
                self.total_duration_s
            )));
        }
        self.playable_end_s = end_s.max(self.playable_end_s);
        Ok(())
    }

    /// Ends startup at the current wall time. Requires some playable content.
    pub fn begin_playback(&mut self) -> Result<()> {
        if self.phase != Phase::Startup {
            return Err(Error::Misuse("playback already began".into()));
        }
        if self.playable_end_s <= 0.0 {
            return Err(Error::Misuse("cannot begin playback with no content".into()));
        }
        self.startup_delay_s = Some(self.wall_s);
        self.phase = Phase::Playing;
        self.stamp_reached();
        Ok(())
    }

    /// Ends a stall at the current wall time (a download just landed).
    /// Zero-length stalls, where the playhead touched the prefix edge at the
    /// very instant the block arrived, are dropped.
    pub fn resume(&mut self) -> Result<()> {
        if self.phase != Phase::Stalled {
            return Err(Error::Misuse("resume outside a stall".into()));
        }
        let (start, block) = self
            .open_stall
            .take()
            .ok_or_else(|| Error::Misuse("stalled with no open stall record".into()))?;
        if self.wall_s - start > 1e-9 {
            self.stalls.push(StallEvent {
                start_s: start,
                end_s: self.wall_s,
                block_in_flight: block,
            });
        }
        self.phase = Phase::Playing;
        self.stamp_reached();
        Ok(())
    }

    /// Moves wall time forward, draining the buffer while playing. Entering
    /// a starved state mid-advance records the stall at the exact wall time
    /// the buffer ran out; reaching the end of the presentation finishes
    /// playback instead.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        if t < self.wall_s - 1e-9 {
            return Err(Error::Misuse(format!(
                "wall clock moved backwards: {} to {t}",
                self.wall_s
            )));
        }
        let t = t.max(self.wall_s);
        if self.phase != Phase::Playing {
            self.wall_s = t;
            return Ok(());
        }
        self.stamp_reached();
        let dt = t - self.wall_s;
        let avail = self.buffer_s();
        if dt <= avail {
            self.render(dt);
            self.wall_s = t;
        } else {
            self.render(avail);
            self.playhead_s = self.playable_end_s;
            let starved_at = self.wall_s + avail;
            self.wall_s = t;
            if self.at_presentation_end() {
                self.finish(starved_at);
            } else {
                self.phase = Phase::Stalled;
                self.open_stall = Some((starved_at, self.in_flight_block));
            }
            return Ok(());
        }
        if self.buffer_s() <= 1e-9 {
            self.playhead_s = self.playable_end_s;
            if self.at_presentation_end() {
                self.finish(self.wall_s);
            } else {
                self.phase = Phase::Stalled;
                self.open_stall = Some((self.wall_s, self.in_flight_block));
            }
        }
        Ok(())
    }

    /// Plays out whatever is buffered after the last download. Returns the
    /// wall time playback ended.
    pub fn drain_to_finish(&mut self) -> Result<f64> {
        match self.phase {
            Phase::Finished => {}
            Phase::Playing => {
                let remaining = self.buffer_s();
                self.advance_to(self.wall_s + remaining)?;
            }
            Phase::Startup | Phase::Stalled => {
                return Err(Error::Misuse(
                    "draining the buffer while playback is not running".into(),
                ));
            }
        }
        if self.phase != Phase::Finished {
            return Err(Error::Misuse(format!(
                "playable content ends at {} before the presentation end {}",
                self.playable_end_s, self.total_duration_s
            )));
        }
        Ok(self.finish_s.expect("finished playback has a finish time"))
    }

    fn at_presentation_end(&self) -> bool {
        self.playable_end_s >= self.total_duration_s - 1e-9
    }

    fn finish(&mut self, at_s: f64) {
        self.phase = Phase::Finished;
        self.finish_s = Some(at_s);
    }

    /// Stamps every segment whose start boundary the playhead has already
    /// reached, at the current wall time. Used at the instants rendering
    /// (re)starts, so "already reached" means "starts rendering right now".
    fn stamp_reached(&mut self) {
        while self.next_unstamped <= self.segment_count {
            let boundary = (self.next_unstamped - 1) as f64 * self.segment_duration_s;
            if boundary > self.playhead_s {
                break;
            }
            self.play_starts[self.next_unstamped - 1] = Some(self.wall_s);
            self.next_unstamped += 1;
        }
    }

    /// Advances the playhead by `dt` of rendered media, stamping every
    /// segment boundary crossed strictly inside the interval at the wall
    /// time it is crossed. Boundaries landed on exactly are left for the
    /// instant rendering continues.
    fn render(&mut self, dt: f64) {
        let from = self.playhead_s;
        let to = from + dt;
        while self.next_unstamped <= self.segment_count {
            let boundary = (self.next_unstamped - 1) as f64 * self.segment_duration_s;
            if boundary >= to {
                break;
            }
            let at = if boundary <= from {
                self.wall_s
            } else {
                self.wall_s + (boundary - from)
            };
            self.play_starts[self.next_unstamped - 1] = Some(at);
            self.next_unstamped += 1;
        }
        self.playhead_s = to;
    }
}
