//! Partial Curve Mapping: a dissimilarity score between two curves built
//! from arc-length parametrization and the area enclosed between mapped
//! segments.
//!
//! Pipeline, in order:
//! 1. downsample curves that exceed the point budget (shorter curves are
//!    used exactly as given);
//! 2. normalize both by the *reference* curve's time span and value range;
//! 3. compute each curve's cumulative arc length, normalized to [0, 1];
//! 4. map every candidate sample onto the reference at the same arc-length
//!    fraction (linear interpolation along the reference polyline);
//! 5. sum the trapezoid areas bounded by each candidate segment and its
//!    mapped reference segment — for aligned curves this telescopes to the
//!    area enclosed between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Offset-and-scale both axes by the reference curve's ranges.
    ReferenceRange,
    /// Normalize the time axis only; used automatically when the reference
    /// has zero value range.
    TimeOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaRule {
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcmConfig {
    /// Point budget per curve: longer curves are uniformly downsampled to
    /// this count before mapping; shorter curves are used as-is.
    pub resample: usize,
    pub normalization: Normalization,
    pub area_rule: AreaRule,
}

impl Default for PcmConfig {
    fn default() -> Self {
        PcmConfig {
            resample: 64,
            normalization: Normalization::ReferenceRange,
            area_rule: AreaRule::Trapezoid,
        }
    }
}

impl PcmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resample < 8 {
            return Err(Error::config("PCM resample count must be at least 8"));
        }
        Ok(())
    }
}

/// Uniform-in-time resampling of a curve to `n` points.
fn resample(curve: &[(f64, f64)], n: usize) -> Vec<(f64, f64)> {
    let (t0, t1) = (curve[0].0, curve[curve.len() - 1].0);
    if t1 <= t0 {
        // Degenerate time span: replicate the first sample.
        return vec![curve[0]; n];
    }
    let mut out = Vec::with_capacity(n);
    let mut idx = 0usize;
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        while idx + 2 < curve.len() && curve[idx + 1].0 <= t {
            idx += 1;
        }
        let (ta, ya) = curve[idx];
        let (tb, yb) = curve[idx + 1];
        let y = if tb > ta {
            ya + (yb - ya) * (t - ta) / (tb - ta)
        } else {
            ya
        };
        out.push((t, y));
    }
    out
}

/// Cumulative arc length along a polyline, normalized to [0, 1]. Returns the
/// fractions and the total length.
fn arc_fractions(points: &[(f64, f64)]) -> (Vec<f64>, f64) {
    let mut cumulative = Vec::with_capacity(points.len());
    cumulative.push(0.0);
    let mut total = 0.0;
    for pair in points.windows(2) {
        let dx = pair[1].0 - pair[0].0;
        let dy = pair[1].1 - pair[0].1;
        total += (dx * dx + dy * dy).sqrt();
        cumulative.push(total);
    }
    if total > 0.0 {
        for c in &mut cumulative {
            *c /= total;
        }
    }
    (cumulative, total)
}

/// Point on a polyline at arc-length fraction `s`, by linear interpolation
/// between the bracketing vertices.
fn point_at_fraction(points: &[(f64, f64)], fractions: &[f64], s: f64) -> (f64, f64) {
    if s <= 0.0 {
        return points[0];
    }
    if s >= 1.0 {
        return points[points.len() - 1];
    }
    let idx = fractions.partition_point(|f| *f <= s);
    let (s0, s1) = (fractions[idx - 1], fractions[idx]);
    let (p0, p1) = (points[idx - 1], points[idx]);
    if s1 <= s0 {
        return p0;
    }
    let w = (s - s0) / (s1 - s0);
    (p0.0 + (p1.0 - p0.0) * w, p0.1 + (p1.1 - p0.1) * w)
}

/// Dissimilarity of `candidate` with respect to `reference`. Zero for
/// identical curves; grows with the normalized area between them.
pub fn pcm_distance(
    candidate: &[(f64, f64)],
    reference: &[(f64, f64)],
    cfg: &PcmConfig,
) -> Result<f64> {
    cfg.validate()?;
    if candidate.len() < 2 || reference.len() < 2 {
        return Err(Error::validation("PCM needs at least two points per curve"));
    }

    let cand = if candidate.len() > cfg.resample {
        resample(candidate, cfg.resample)
    } else {
        candidate.to_vec()
    };
    let refc = if reference.len() > cfg.resample {
        resample(reference, cfg.resample)
    } else {
        reference.to_vec()
    };

    let ref_t0 = refc[0].0;
    let ref_span = (refc[refc.len() - 1].0 - ref_t0).max(1e-12);
    let (ref_ymin, ref_ymax) = refc
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, y)| {
            (lo.min(*y), hi.max(*y))
        });
    let ref_range = ref_ymax - ref_ymin;

    // Degenerate reference (zero value range): identical constants score 0;
    // otherwise fall back to time-only normalization.
    let normalization =
        if matches!(cfg.normalization, Normalization::ReferenceRange) && ref_range < 1e-12 {
            let identical = cand
                .iter()
                .zip(refc.iter())
                .all(|((_, yc), (_, yr))| (yc - yr).abs() < 1e-12);
            if identical {
                return Ok(0.0);
            }
            Normalization::TimeOnly
        } else {
            cfg.normalization
        };

    let norm = |points: &[(f64, f64)]| -> Vec<(f64, f64)> {
        points
            .iter()
            .map(|(t, y)| {
                let tn = (t - ref_t0) / ref_span;
                let yn = match normalization {
                    Normalization::ReferenceRange => (y - ref_ymin) / ref_range,
                    Normalization::TimeOnly => y - ref_ymin,
                };
                (tn, yn)
            })
            .collect()
    };

    let cand_n = norm(&cand);
    let ref_n = norm(&refc);

    let (cand_fracs, cand_len) = arc_fractions(&cand_n);
    let (ref_fracs, ref_len) = arc_fractions(&ref_n);
    if cand_len == 0.0 && ref_len == 0.0 {
        // Both curves collapse to a point after normalization.
        let dx = cand_n[0].0 - ref_n[0].0;
        let dy = cand_n[0].1 - ref_n[0].1;
        return Ok((dx * dx + dy * dy).sqrt());
    }

    // Image of every candidate vertex on the reference at the same
    // arc-length fraction.
    let mapped: Vec<(f64, f64)> = cand_fracs
        .iter()
        .map(|s| point_at_fraction(&ref_n, &ref_fracs, *s))
        .collect();

    // Each candidate segment and its mapped reference segment bound one
    // trapezoid; the total is the area enclosed between the curves.
    let mut area = 0.0;
    for i in 0..cand_n.len() - 1 {
        match cfg.area_rule {
            AreaRule::Trapezoid => {
                area += quad_area(cand_n[i], cand_n[i + 1], mapped[i + 1], mapped[i]);
            }
        }
    }
    Ok(area)
}

/// Shoelace area of the quadrilateral a → b → c → d, computed from vertex
/// differences so a degenerate quad cancels to exactly zero.
fn quad_area(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> f64 {
    let cross = |u: (f64, f64), v: (f64, f64)| u.0 * v.1 - u.1 * v.0;
    let ab = (b.0 - a.0, b.1 - a.1);
    let ac = (c.0 - a.0, c.1 - a.1);
    let ad = (d.0 - a.0, d.1 - a.1);
    0.5 * (cross(ab, ac) + cross(ac, ad)).abs()
}
