//! Synthetic irradiance and load generators.

use std::f64::consts::PI;

use chrono::{Datelike, NaiveDate, NaiveTime, TimeDelta, Timelike};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::series::{reference_day, PowerTimeSeries, SeriesKind};
use crate::components::PvArraySpec;
use crate::error::{Error, Result};

fn hours_of(t: NaiveTime) -> f64 {
    t.num_seconds_from_midnight() as f64 / 3600.0 + t.nanosecond() as f64 / 3.6e12
}

fn samples_per_day(step: TimeDelta) -> Result<usize> {
    let step_ms = step.num_milliseconds();
    let day_ms = TimeDelta::days(1).num_milliseconds();
    if step_ms <= 0 || day_ms % step_ms != 0 {
        return Err(Error::Contract(format!("step {step} must divide 24 h")));
    }
    Ok((day_ms / step_ms) as usize)
}

fn half_sine_day(peak: f64, sunrise_h: f64, sunset_h: f64, step: TimeDelta) -> Result<Vec<f64>> {
    let n = samples_per_day(step)?;
    let h = step.num_milliseconds() as f64 / 3_600_000.0;
    let span = sunset_h - sunrise_h;
    Ok((0..n)
        .map(|k| {
            let t = k as f64 * h;
            if t <= sunrise_h || t >= sunset_h {
                0.0
            } else {
                (peak * (PI * (t - sunrise_h) / span).sin()).max(0.0)
            }
        })
        .collect())
}

/// One day of clear-sky irradiance, W/m², as a half-sine arch between
/// sunrise and sunset: `peak * sin(pi (t - sunrise) / (sunset - sunrise))`.
pub fn clear_sky_profile(
    peak_irradiance: f64,
    sunrise: NaiveTime,
    sunset: NaiveTime,
    step: TimeDelta,
) -> Result<PowerTimeSeries> {
    clear_sky_profile_on(reference_day(), peak_irradiance, sunrise, sunset, step)
}

pub fn clear_sky_profile_on(
    date: NaiveDate,
    peak_irradiance: f64,
    sunrise: NaiveTime,
    sunset: NaiveTime,
    step: TimeDelta,
) -> Result<PowerTimeSeries> {
    if sunset <= sunrise {
        return Err(Error::Domain(format!(
            "sunset {sunset} must be after sunrise {sunrise}"
        )));
    }
    if !(peak_irradiance > 0.0) || !peak_irradiance.is_finite() {
        return Err(Error::Domain(format!(
            "peak irradiance must be positive, got {peak_irradiance}"
        )));
    }
    let samples = half_sine_day(peak_irradiance, hours_of(sunrise), hours_of(sunset), step)?;
    PowerTimeSeries::new(
        date.and_time(NaiveTime::MIN),
        step,
        samples,
        SeriesKind::Irradiance,
    )
}

/// Array output in MW: `irradiance * efficiency * area * count`, with each
/// panel clipped at its rated power.
pub fn pv_power_from_irradiance(
    irradiance: &PowerTimeSeries,
    spec: &PvArraySpec,
    count: f64,
) -> Result<PowerTimeSeries> {
    if irradiance.kind() != SeriesKind::Irradiance {
        return Err(Error::Contract(
            "PV power needs an irradiance series (W/m²)".into(),
        ));
    }
    if !(count >= 0.0) {
        return Err(Error::Domain(format!("panel count must be >= 0, got {count}")));
    }
    let per_panel_gain = spec.efficiency * spec.panel_area_m2;
    irradiance.map(SeriesKind::Power, |e| {
        (e * per_panel_gain).min(spec.rated_power_w) * count / 1e6
    })
}

const PEAK_WIDTH_H: f64 = 1.0;
const TROUGH_CENTER_H: f64 = 5.0;
const TROUGH_WIDTH_H: f64 = 1.5;
const TROUGH_DEPTH: f64 = 0.3;

/// Gaussian bump on the 24 h clock, cut to zero beyond four widths.
fn clock_bump(hour: f64, center: f64, width: f64) -> f64 {
    let d = (hour - center).rem_euclid(24.0);
    let d = d.min(24.0 - d);
    if d > 4.0 * width {
        0.0
    } else {
        (-0.5 * (d / width).powi(2)).exp()
    }
}

/// One day of load, MW: a daytime plateau at `base`, an overnight trough
/// around 05:00 and a Gaussian evening peak reaching `evening_peak` at
/// `peak_time`. The trough depth scales with `1 - base/peak`, so a flat
/// profile results when the two are equal.
pub fn synthetic_load_profile(
    base_mw: f64,
    evening_peak_mw: f64,
    peak_time: NaiveTime,
    step: TimeDelta,
) -> Result<PowerTimeSeries> {
    if !(base_mw > 0.0) || !(evening_peak_mw >= base_mw) {
        return Err(Error::Domain(format!(
            "need evening peak ({evening_peak_mw}) >= base ({base_mw}) > 0"
        )));
    }
    let n = samples_per_day(step)?;
    let h = step.num_milliseconds() as f64 / 3_600_000.0;
    let peak_h = hours_of(peak_time);
    let rise = evening_peak_mw - base_mw;
    let depth = TROUGH_DEPTH * base_mw * (1.0 - base_mw / evening_peak_mw);
    let samples = (0..n)
        .map(|k| {
            let t = k as f64 * h;
            base_mw + rise * clock_bump(t, peak_h, PEAK_WIDTH_H)
                - depth * clock_bump(t, TROUGH_CENTER_H, TROUGH_WIDTH_H)
        })
        .collect();
    PowerTimeSeries::new(
        reference_day().and_time(NaiveTime::MIN),
        step,
        samples,
        SeriesKind::Power,
    )
}

/// Parameters for a synthetic year of irradiance: seasonal clear-sky arches
/// (southern-hemisphere phase, longest day near 21 December) attenuated by
/// seeded random cloud cover and scaled by `insolation_scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticYear {
    pub insolation_scale: f64,
    pub seed: u64,
    pub summer_peak_w_m2: f64,
    pub winter_peak_w_m2: f64,
    pub summer_daylight_h: f64,
    pub winter_daylight_h: f64,
    /// Probability that a day is overcast.
    pub cloudy_fraction: f64,
    /// Largest fractional attenuation on an overcast day.
    pub max_cloud_attenuation: f64,
    pub step_minutes: i64,
}

impl Default for SyntheticYear {
    fn default() -> Self {
        SyntheticYear {
            insolation_scale: 1.0,
            seed: 2009,
            summer_peak_w_m2: 1050.0,
            winter_peak_w_m2: 700.0,
            summer_daylight_h: 13.9,
            winter_daylight_h: 10.6,
            cloudy_fraction: 0.3,
            max_cloud_attenuation: 0.7,
            step_minutes: 30,
        }
    }
}

impl SyntheticYear {
    /// 365 days from 1 January of `year`; the last day of a leap year is
    /// dropped so every year has the same length.
    pub fn generate(&self, year: i32) -> Result<PowerTimeSeries> {
        if !(self.insolation_scale > 0.0) {
            return Err(Error::Domain("insolation scale must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.cloudy_fraction)
            || !(0.0..1.0).contains(&self.max_cloud_attenuation)
        {
            return Err(Error::Domain("cloud parameters out of range".into()));
        }
        let step = TimeDelta::minutes(self.step_minutes);
        let first = NaiveDate::from_ymd_opt(year, 1, 1)
            .ok_or_else(|| Error::Domain(format!("bad year {year}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut samples = Vec::with_capacity(365 * samples_per_day(step)?);
        for d in 0..365 {
            let date = first + TimeDelta::days(d);
            // +1 at the December solstice, -1 in June
            let season = (2.0 * PI * (date.ordinal() as f64 - 355.0) / 365.0).cos();
            let mix = |summer: f64, winter: f64| {
                0.5 * (summer + winter) + 0.5 * (summer - winter) * season
            };
            let daylight = mix(self.summer_daylight_h, self.winter_daylight_h);
            let peak = mix(self.summer_peak_w_m2, self.winter_peak_w_m2);
            let cloud = if rng.random::<f64>() < self.cloudy_fraction {
                1.0 - self.max_cloud_attenuation * rng.random::<f64>()
            } else {
                1.0
            };
            let day = half_sine_day(
                peak * cloud * self.insolation_scale,
                12.0 - daylight / 2.0,
                12.0 + daylight / 2.0,
                step,
            )?;
            samples.extend(day);
        }
        PowerTimeSeries::new(
            first.and_time(NaiveTime::MIN),
            step,
            samples,
            SeriesKind::Irradiance,
        )
    }
}
