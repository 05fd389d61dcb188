//! Simulated Pauli measurements on identically prepared qubits.
//!
//! Each axis is measured `n` times; outcome `+1` occurs with probability
//! `Tr(ρ P⁺) = ½(1 + s_i)`. Draws come from ChaCha8 keyed by a [`SimSeed`],
//! so a data set is reproducible bit-for-bit from `(seed, stream_id)`.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubit::{Axis, BlochVector};

/// Seed of one simulated data set. `stream_id` selects an independent ChaCha
/// stream under the same key, one per repetition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl SimSeed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        SimSeed { seed, stream_id }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Three `±1` outcome strings of equal length `n`, one per Pauli axis, with
/// their `+1` counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurementDataSet {
    n: u64,
    outcomes: [Vec<i8>; 3],
    plus_counts: [u64; 3],
    source: Option<SimSeed>,
}

impl MeasurementDataSet {
    /// Builds a data set from explicit outcome strings.
    pub fn from_outcomes(outcomes: [Vec<i8>; 3]) -> Result<Self> {
        let n = outcomes[0].len();
        if n == 0 {
            return Err(Error::ZeroMeasurements);
        }
        let mut plus_counts = [0u64; 3];
        for (axis, string) in outcomes.iter().enumerate() {
            if string.len() != n {
                return Err(Error::Config(format!(
                    "axis {} has {} outcomes, expected {n}",
                    axis + 1,
                    string.len()
                )));
            }
            for &o in string {
                match o {
                    1 => plus_counts[axis] += 1,
                    -1 => {}
                    other => return Err(Error::Config(format!("outcome {other} is not +1 or -1"))),
                }
            }
        }
        Ok(MeasurementDataSet {
            n: n as u64,
            outcomes,
            plus_counts,
            source: None,
        })
    }

    /// Canonical data set with the given `+1` counts (the `+1` entries come
    /// first in each string). Estimators only see the counts.
    pub fn from_counts(n: u64, plus_counts: [u64; 3]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroMeasurements);
        }
        if let Some(&plus) = plus_counts.iter().find(|&&l| l > n) {
            return Err(Error::CountOutOfRange { plus, n });
        }
        let outcomes = plus_counts.map(|l| {
            let mut v = vec![1i8; l as usize];
            v.resize(n as usize, -1);
            v
        });
        Ok(MeasurementDataSet {
            n,
            outcomes,
            plus_counts,
            source: None,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn outcomes(&self, axis: Axis) -> &[i8] {
        &self.outcomes[axis.index()]
    }

    /// `ℓ(i)`: number of `+1` outcomes on each axis.
    pub fn plus_counts(&self) -> [u64; 3] {
        self.plus_counts
    }

    pub fn plus_count(&self, axis: Axis) -> u64 {
        self.plus_counts[axis.index()]
    }

    pub fn source(&self) -> Option<SimSeed> {
        self.source
    }

    pub fn with_source(mut self, source: SimSeed) -> Self {
        self.source = Some(source);
        self
    }

    /// Hash of `n` and the outcome strings. Stable within one build.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        self.outcomes.hash(&mut h);
        h.finish()
    }

    /// Text dump: per axis a header `axis=<i> n=<n> seed=<seed>:<stream>`
    /// followed by the space-separated outcomes.
    pub fn to_raw_dump(&self) -> String {
        let seed = match self.source {
            Some(s) => format!("{}:{}", s.seed, s.stream_id),
            None => "none".to_string(),
        };
        let mut out = String::new();
        for axis in Axis::ALL {
            let _ = writeln!(out, "axis={} n={} seed={}", axis.label(), self.n, seed);
            let line: Vec<&str> = self
                .outcomes(axis)
                .iter()
                .map(|&o| if o > 0 { "+1" } else { "-1" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Probability of outcome `+1` when measuring `axis` on state `s`,
/// `½(1 + s_i)`.
pub fn outcome_probability(s: &BlochVector, axis: Axis) -> Result<f64> {
    s.ensure_physical()?;
    Ok((0.5 * (1.0 + s.component(axis))).clamp(0.0, 1.0))
}

/// Measures each Pauli axis `n` times on copies of `s`.
///
/// Axis strings are drawn in the order 1, 2, 3 from one stream.
pub fn simulate_dataset(s: &BlochVector, n: u64, seed: SimSeed) -> Result<MeasurementDataSet> {
    if n == 0 {
        return Err(Error::ZeroMeasurements);
    }
    let probs = [
        outcome_probability(s, Axis::X)?,
        outcome_probability(s, Axis::Y)?,
        outcome_probability(s, Axis::Z)?,
    ];
    let mut rng = seed.rng();
    let mut plus_counts = [0u64; 3];
    let outcomes = [0, 1, 2].map(|axis| {
        let p = probs[axis];
        (0..n)
            .map(|_| {
                if rng.random::<f64>() < p {
                    plus_counts[axis] += 1;
                    1i8
                } else {
                    -1i8
                }
            })
            .collect::<Vec<i8>>()
    });
    Ok(MeasurementDataSet {
        n,
        outcomes,
        plus_counts,
        source: Some(seed),
    })
}

/// Parses one or more data sets in the raw dump format written by
/// [`MeasurementDataSet::to_raw_dump`]. Blank lines and `#` comments are
/// skipped.
pub fn parse_raw_datasets(text: &str) -> Result<Vec<MeasurementDataSet>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut sets = Vec::new();
    while let Some((line_no, first)) = lines.next() {
        let mut header = parse_header(line_no, first)?;
        let mut strings: [Vec<i8>; 3] = Default::default();
        for expected_axis in 1..=3 {
            if expected_axis > 1 {
                let (no, h) = lines.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("missing header for axis {expected_axis}"),
                })?;
                let next = parse_header(no, h)?;
                if next.n != header.n || next.seed != header.seed {
                    return Err(Error::Parse {
                        line: no,
                        msg: "axis headers of one data set disagree on n or seed".into(),
                    });
                }
                header = next;
            }
            if header.axis != expected_axis {
                return Err(Error::Parse {
                    line: header.line,
                    msg: format!("expected axis={expected_axis}, found axis={}", header.axis),
                });
            }
            let (no, body) = lines.next().ok_or_else(|| Error::Parse {
                line: header.line,
                msg: "missing outcome line".into(),
            })?;
            let parsed = body
                .split_whitespace()
                .map(|tok| match tok {
                    "+1" | "1" => Ok(1i8),
                    "-1" => Ok(-1i8),
                    other => Err(Error::Parse {
                        line: no,
                        msg: format!("bad outcome token {other:?}"),
                    }),
                })
                .collect::<Result<Vec<i8>>>()?;
            if parsed.len() as u64 != header.n {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("expected {} outcomes, found {}", header.n, parsed.len()),
                });
            }
            strings[expected_axis - 1] = parsed;
        }
        let mut set = MeasurementDataSet::from_outcomes(strings).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        set.source = header.seed;
        sets.push(set);
    }
    Ok(sets)
}

struct Header {
    line: usize,
    axis: usize,
    n: u64,
    seed: Option<SimSeed>,
}

fn parse_header(line: usize, text: &str) -> Result<Header> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut axis = None;
    let mut n = None;
    let mut seed = None;
    for field in text.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, found {field:?}")))?;
        match key {
            "axis" => axis = Some(value.parse::<usize>().map_err(|e| err(e.to_string()))?),
            "n" => n = Some(value.parse::<u64>().map_err(|e| err(e.to_string()))?),
            "seed" => {
                seed = Some(if value == "none" {
                    None
                } else {
                    let (s, stream) = value
                        .split_once(':')
                        .ok_or_else(|| err("seed must be <seed>:<stream>".into()))?;
                    Some(SimSeed::new(
                        s.parse()
                            .map_err(|e: std::num::ParseIntError| err(e.to_string()))?,
                        stream
                            .parse()
                            .map_err(|e: std::num::ParseIntError| err(e.to_string()))?,
                    ))
                })
            }
            other => return Err(err(format!("unknown header field {other:?}"))),
        }
    }
    match (axis, n, seed) {
        (Some(axis), Some(n), Some(seed)) if (1..=3).contains(&axis) && n > 0 => Ok(Header {
            line,
            axis,
            n,
            seed,
        }),
        _ => Err(err(format!("malformed header {text:?}"))),
    }
}
