//! TOML scenario files and preset lookup.
//!
//! A scenario file has a top-level `kind`:
//!
//! * `"cases"`: a Case 1-3 study with a clear-sky day and a rate sweep.
//! * `"casestudy"`: a multi-year study over several storage technologies.
//! * `"levelize"`: plain cost and energy year series.
//!
//! Scenario names resolve to a file path first, then to
//! `$LEVELCOST_PRESET_DIR/<name>.toml`, then to the scenarios shipped with
//! the crate. Component presets resolve the same way, directory first.
//! Relative CSV paths are taken from the scenario file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{NaiveTime, TimeDelta};
use serde::{Deserialize, Serialize};

use crate::components::{
    pv_preset, storage_preset, PvArraySpec, StorageSpec, PV_PRESETS, STORAGE_PRESETS,
};
use crate::dispatch::{
    read_series_csv, synthetic_load_profile, GapPolicy, PowerTimeSeries, SeriesKind,
    SyntheticYear,
};
use crate::error::{Error, Result};
use crate::finance::{FinancialAssumptions, StartConvention, YearSeries};
use crate::scenarios::{
    calibrate_cases, CalibrationAnchors, CaseScenario, CaseStudySpecs, ClearSkyDay,
};

pub const PRESET_DIR_ENV: &str = "LEVELCOST_PRESET_DIR";

/// Scenarios shipped with the crate, as `(name, toml)`.
pub const BUILTIN_SCENARIOS: &[(&str, &str)] = &[
    (
        "table4-vrb-lower",
        include_str!("../scenarios/table4-vrb-lower.toml"),
    ),
    (
        "table5-liion-lower",
        include_str!("../scenarios/table5-liion-lower.toml"),
    ),
    (
        "table6to9-template",
        include_str!("../scenarios/table6to9-template.toml"),
    ),
];

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioFile {
    Cases(CasesFile),
    Casestudy(CaseStudyFile),
    Levelize(LevelizeFile),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FinanceSection {
    pub discount_rate: Option<f64>,
    /// Defaults to the storage lifetime where storage is involved.
    pub horizon_years: Option<u32>,
    pub start_convention: Option<StartConvention>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PvSection {
    pub preset: Option<String>,
    pub capital_per_unit: Option<f64>,
    pub install_per_unit: Option<f64>,
    pub om_per_unit_year: Option<f64>,
    pub rated_power_w: Option<f64>,
    pub efficiency: Option<f64>,
    pub panel_area_m2: Option<f64>,
    pub degradation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StorageSection {
    pub preset: Option<String>,
    pub capital_per_kwh: Option<f64>,
    pub om_per_kwh_year: Option<f64>,
    pub power_rating_mw: Option<f64>,
    pub energy_capacity_mwh: Option<f64>,
    pub round_trip_efficiency: Option<f64>,
    pub degradation: Option<f64>,
    pub lifetime_years: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesSection {
    #[serde(default = "default_sunrise")]
    pub sunrise: String,
    #[serde(default = "default_sunset")]
    pub sunset: String,
    #[serde(default = "default_step")]
    pub step_minutes: i64,
    /// Clear-sky peak, W/m². Taken from `[calibration]` when absent.
    pub peak_irradiance_w_m2: Option<f64>,
}

fn default_sunrise() -> String {
    "06:00".into()
}

fn default_sunset() -> String {
    "18:00".into()
}

fn default_step() -> i64 {
    30
}

impl Default for ProfilesSection {
    fn default() -> Self {
        ProfilesSection {
            sunrise: default_sunrise(),
            sunset: default_sunset(),
            step_minutes: default_step(),
            peak_irradiance_w_m2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CasesSection {
    #[serde(default = "default_multiplier")]
    pub case2_multiplier: f64,
    /// Taken from `[calibration]` when absent.
    pub case1_panels: Option<f64>,
}

fn default_multiplier() -> f64 {
    1.5
}

impl Default for CasesSection {
    fn default() -> Self {
        CasesSection {
            case2_multiplier: default_multiplier(),
            case1_panels: None,
        }
    }
}

/// Calibration anchors and the constants solved from them. When the solved
/// constants are missing they are computed on load.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSection {
    pub anchor_daily_surplus_mwh: f64,
    pub anchor_basecase_lcoe: f64,
    pub anchor_rate: f64,
    pub anchor_horizon_years: u32,
    pub peak_irradiance_w_m2: Option<f64>,
    pub case1_panels: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Discount rates as fractions.
    #[serde(default)]
    pub rates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CasesFile {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub finance: FinanceSection,
    #[serde(default)]
    pub pv: PvSection,
    pub storage: StorageSection,
    #[serde(default)]
    pub profiles: ProfilesSection,
    #[serde(default)]
    pub cases: CasesSection,
    pub calibration: Option<CalibrationSection>,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FarmSection {
    pub rated_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LoadSection {
    Synthetic {
        base_mw: f64,
        evening_peak_mw: f64,
        #[serde(default = "default_peak_time")]
        peak_time: String,
        #[serde(default = "default_step")]
        step_minutes: i64,
    },
    Csv {
        path: PathBuf,
        #[serde(default)]
        interpolate_gaps: bool,
    },
}

fn default_peak_time() -> String {
    "20:00".into()
}

/// One year of irradiance: a CSV file, or a synthetic year when `path` is
/// absent.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct YearSection {
    pub year: i32,
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub interpolate_gaps: bool,
    pub insolation_scale: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CaseStudyFile {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub finance: FinanceSection,
    #[serde(default)]
    pub pv: PvSection,
    pub farm: FarmSection,
    /// Storage preset names; `[storage]` fields override every one of them.
    pub technologies: Vec<String>,
    #[serde(default)]
    pub storage: StorageSection,
    pub load: LoadSection,
    pub years: Vec<YearSection>,
    #[serde(default)]
    pub sweep: SweepSection,
}

/// Year series given inline or as a `year,value` CSV file.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum SeriesSource {
    Values(Vec<f64>),
    Csv { csv: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelizeMethod {
    Discounting,
    Annuitizing,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NetSection {
    pub charging_price: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LevelizeFile {
    #[serde(default = "default_levelize_name")]
    pub name: String,
    pub finance: FinanceSection,
    /// USD per year, index 0 is year 0.
    pub costs: SeriesSource,
    /// kWh per year, index 0 is year 0.
    pub energy: SeriesSource,
    #[serde(default = "default_methods")]
    pub methods: Vec<LevelizeMethod>,
    /// Net LCOS reference computed from the discounting LCOE.
    pub net: Option<NetSection>,
}

fn default_levelize_name() -> String {
    "levelize".into()
}

fn default_methods() -> Vec<LevelizeMethod> {
    vec![LevelizeMethod::Discounting, LevelizeMethod::Annuitizing]
}

/// A parsed scenario file and where it came from.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
    /// File path or `builtin:<name>`.
    pub origin: String,
}

fn preset_dir() -> Option<PathBuf> {
    std::env::var_os(PRESET_DIR_ENV).map(PathBuf::from)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioFile> {
    toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {e}")))
}

/// Resolve a scenario argument: a path, a name in the preset directory or a
/// shipped scenario name.
pub fn load_scenario(arg: &str) -> Result<LoadedScenario> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_scenario_file(path);
    }
    if let Some(dir) = preset_dir() {
        let candidate = dir.join(format!("{arg}.toml"));
        if candidate.is_file() {
            return load_scenario_file(&candidate);
        }
    }
    if let Some((name, text)) = BUILTIN_SCENARIOS.iter().find(|(n, _)| *n == arg) {
        let origin = format!("builtin:{name}");
        return Ok(LoadedScenario {
            file: parse_scenario(text, &origin)?,
            base_dir: std::env::current_dir().unwrap_or_default(),
            origin,
        });
    }
    if path.extension().is_some() || arg.contains(std::path::MAIN_SEPARATOR) {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "scenario file not found"),
        ));
    }
    Err(Error::Config(format!(
        "unknown scenario {arg:?}; shipped scenarios: {}",
        BUILTIN_SCENARIOS
            .iter()
            .map(|(n, _)| *n)
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

pub fn load_scenario_file(path: &Path) -> Result<LoadedScenario> {
    let origin = path.display().to_string();
    Ok(LoadedScenario {
        file: parse_scenario(&read_text(path)?, &origin)?,
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        origin,
    })
}

/// Storage preset by name, preferring `$LEVELCOST_PRESET_DIR/<name>.toml`.
pub fn resolve_storage_preset(name: &str) -> Result<StorageSpec> {
    if let Some(dir) = preset_dir() {
        let path = dir.join(format!("{name}.toml"));
        if path.is_file() {
            return toml::from_str(&read_text(&path)?)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())));
        }
    }
    storage_preset(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown storage preset {name:?}; known: {}",
            STORAGE_PRESETS.join(", ")
        ))
    })
}

/// PV preset by name, preferring `$LEVELCOST_PRESET_DIR/<name>.toml`.
pub fn resolve_pv_preset(name: &str) -> Result<PvArraySpec> {
    if let Some(dir) = preset_dir() {
        let path = dir.join(format!("{name}.toml"));
        if path.is_file() {
            return toml::from_str(&read_text(&path)?)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())));
        }
    }
    pv_preset(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown PV preset {name:?}; known: {}",
            PV_PRESETS.join(", ")
        ))
    })
}

/// Every preset and scenario name that resolves, grouped by kind.
pub fn list_presets() -> BTreeMap<&'static str, Vec<String>> {
    let mut out = BTreeMap::new();
    out.insert("pv", PV_PRESETS.iter().map(|s| s.to_string()).collect());
    out.insert("storage", STORAGE_PRESETS.iter().map(|s| s.to_string()).collect());
    out.insert(
        "scenario",
        BUILTIN_SCENARIOS.iter().map(|(n, _)| n.to_string()).collect(),
    );
    if let Some(dir) = preset_dir() {
        let mut extra: Vec<String> = std::fs::read_dir(&dir)
            .into_iter()
            .flatten()
            .flatten()
            .filter_map(|e| {
                let p = e.path();
                (p.extension()? == "toml").then(|| p.file_stem()?.to_str().map(String::from))?
            })
            .collect();
        extra.sort();
        out.insert("directory", extra);
    }
    out
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_clock(s: &str) -> Result<NaiveTime> {
    NaiveTime::parse_from_str(s, "%H:%M")
        .or_else(|_| NaiveTime::parse_from_str(s, "%H:%M:%S"))
        .map_err(|_| config_err(format!("invalid time of day {s:?}; expected HH:MM")))
}

fn checked<T>(r: Result<T>) -> Result<T> {
    // validation failures in a file are configuration errors
    r.map_err(|e| match e {
        Error::Domain(m) | Error::Contract(m) => Error::Config(m),
        other => other,
    })
}

impl PvSection {
    pub fn resolve(&self) -> Result<PvArraySpec> {
        let mut s = resolve_pv_preset(self.preset.as_deref().unwrap_or("sharp-nd250"))?;
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut s.capital_per_unit, self.capital_per_unit);
        set(&mut s.install_per_unit, self.install_per_unit);
        set(&mut s.om_per_unit_year, self.om_per_unit_year);
        set(&mut s.rated_power_w, self.rated_power_w);
        set(&mut s.efficiency, self.efficiency);
        set(&mut s.panel_area_m2, self.panel_area_m2);
        set(&mut s.degradation, self.degradation);
        checked(s.validate())?;
        Ok(s)
    }
}

impl StorageSection {
    /// Apply the overrides to `base`, or to `self.preset` when `base` is
    /// `None`.
    pub fn resolve(&self, base: Option<&str>) -> Result<StorageSpec> {
        let name = base
            .or(self.preset.as_deref())
            .ok_or_else(|| config_err("[storage] needs a preset"))?;
        let mut s = resolve_storage_preset(name)?;
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut s.capital_per_kwh, self.capital_per_kwh);
        set(&mut s.om_per_kwh_year, self.om_per_kwh_year);
        set(&mut s.power_rating_mw, self.power_rating_mw);
        set(&mut s.energy_capacity_mwh, self.energy_capacity_mwh);
        set(&mut s.round_trip_efficiency, self.round_trip_efficiency);
        set(&mut s.degradation, self.degradation);
        if let Some(n) = self.lifetime_years {
            s.lifetime_years = n;
        }
        checked(s.validate())?;
        Ok(s)
    }
}

impl FinanceSection {
    /// Financial assumptions of the file; `paper_bounds` forces t = 0..n sums.
    pub fn resolve(&self, default_horizon: Option<u32>, paper_bounds: bool) -> Result<FinancialAssumptions> {
        let horizon = self
            .horizon_years
            .or(default_horizon)
            .ok_or_else(|| config_err("[finance] needs horizon_years"))?;
        let mut convention = self.start_convention.unwrap_or_default();
        if paper_bounds {
            convention = StartConvention::IncludeYearZero;
        }
        let fin = FinancialAssumptions {
            discount_rate: self.discount_rate.unwrap_or(0.0),
            horizon_years: horizon,
            start_convention: convention,
        };
        checked(fin.validate())?;
        Ok(fin)
    }
}

fn check_rates(rates: &[f64]) -> Result<()> {
    match rates.iter().find(|r| !r.is_finite()) {
        Some(r) => Err(config_err(format!("sweep rate {r} is not a number"))),
        None => Ok(()),
    }
}

impl CasesFile {
    /// Build the case scenario. `paper_bounds` forces t = 0..n sums.
    pub fn to_scenario(&self, paper_bounds: bool) -> Result<CaseScenario> {
        let pv = self.pv.resolve()?;
        let storage = self.storage.resolve(None)?;
        let fin = self.finance.resolve(Some(storage.lifetime_years), paper_bounds)?;
        check_rates(&self.sweep.rates)?;
        let mut scenario = CaseScenario {
            name: self.name.clone(),
            pv,
            storage,
            case1_panels: self.cases.case1_panels.unwrap_or(f64::NAN),
            case2_multiplier: self.cases.case2_multiplier,
            day: ClearSkyDay {
                peak_irradiance_w_m2: self.profiles.peak_irradiance_w_m2.unwrap_or(f64::NAN),
                sunrise: parse_clock(&self.profiles.sunrise)?,
                sunset: parse_clock(&self.profiles.sunset)?,
                step_minutes: self.profiles.step_minutes,
            },
            fin,
        };
        if scenario.case1_panels.is_nan() || scenario.day.peak_irradiance_w_m2.is_nan() {
            let cal = self.calibration.as_ref().ok_or_else(|| {
                config_err(
                    "set [cases] case1_panels and [profiles] peak_irradiance_w_m2, \
                     or provide a [calibration] section",
                )
            })?;
            let (peak, panels) = match (cal.peak_irradiance_w_m2, cal.case1_panels) {
                (Some(p), Some(n)) => (p, n),
                _ => {
                    let solved = calibrate_cases(&self.anchors(paper_bounds)?, &scenario)?;
                    (solved.peak_irradiance_w_m2, solved.case1_panels)
                }
            };
            if scenario.case1_panels.is_nan() {
                scenario.case1_panels = panels;
            }
            if scenario.day.peak_irradiance_w_m2.is_nan() {
                scenario.day.peak_irradiance_w_m2 = peak;
            }
        }
        checked(scenario.validate())?;
        checked(scenario.day.profile().map(|_| ()))?;
        Ok(scenario)
    }

    pub fn anchors(&self, paper_bounds: bool) -> Result<CalibrationAnchors> {
        let cal = self
            .calibration
            .as_ref()
            .ok_or_else(|| config_err("scenario has no [calibration] section"))?;
        let mut convention = self.finance.start_convention.unwrap_or_default();
        if paper_bounds {
            convention = StartConvention::IncludeYearZero;
        }
        Ok(CalibrationAnchors {
            daily_surplus_mwh: cal.anchor_daily_surplus_mwh,
            basecase_lcoe: cal.anchor_basecase_lcoe,
            rate: cal.anchor_rate,
            horizon_years: cal.anchor_horizon_years,
            start_convention: convention,
        })
    }
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn gaps(interpolate: bool) -> GapPolicy {
    if interpolate {
        GapPolicy::interpolate()
    } else {
        GapPolicy::Fail
    }
}

/// A case study with all inputs loaded.
#[derive(Debug, Clone)]
pub struct CaseStudyInputs {
    pub name: String,
    pub pv: PvArraySpec,
    pub farm_rated_mw: f64,
    /// `(preset name, spec, financial assumptions)` per technology.
    pub technologies: Vec<(String, StorageSpec, FinancialAssumptions)>,
    pub load: PowerTimeSeries,
    pub years: BTreeMap<i32, PowerTimeSeries>,
    pub rates: Vec<f64>,
}

impl CaseStudyInputs {
    pub fn specs(&self, storage: &StorageSpec) -> CaseStudySpecs {
        CaseStudySpecs {
            pv: self.pv.clone(),
            farm_rated_mw: self.farm_rated_mw,
            storage: storage.clone(),
        }
    }
}

impl CaseStudyFile {
    pub fn load(&self, base_dir: &Path, paper_bounds: bool) -> Result<CaseStudyInputs> {
        let pv = self.pv.resolve()?;
        if !(self.farm.rated_mw > 0.0) {
            return Err(config_err("[farm] rated_mw must be positive"));
        }
        if self.technologies.is_empty() {
            return Err(config_err("technologies must list at least one storage preset"));
        }
        if self.years.is_empty() {
            return Err(config_err("at least one [[years]] entry is needed"));
        }
        check_rates(&self.sweep.rates)?;
        let technologies = self
            .technologies
            .iter()
            .map(|name| {
                let spec = self.storage.resolve(Some(name))?;
                let fin = self.finance.resolve(Some(spec.lifetime_years), paper_bounds)?;
                Ok((name.clone(), spec, fin))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut years = BTreeMap::new();
        for y in &self.years {
            let series = match &y.path {
                Some(p) => read_series_csv(
                    &resolve_path(base_dir, p),
                    SeriesKind::Irradiance,
                    gaps(y.interpolate_gaps),
                )?,
                None => checked(
                    SyntheticYear {
                        insolation_scale: y.insolation_scale.unwrap_or(1.0),
                        seed: y.seed.unwrap_or(y.year as u64),
                        ..SyntheticYear::default()
                    }
                    .generate(y.year),
                )?,
            };
            if years.insert(y.year, series).is_some() {
                return Err(config_err(format!("year {} listed twice", y.year)));
            }
        }

        let load = match &self.load {
            LoadSection::Synthetic {
                base_mw,
                evening_peak_mw,
                peak_time,
                step_minutes,
            } => checked(synthetic_load_profile(
                *base_mw,
                *evening_peak_mw,
                parse_clock(peak_time)?,
                TimeDelta::minutes(*step_minutes),
            ))?,
            LoadSection::Csv {
                path,
                interpolate_gaps,
            } => read_series_csv(
                &resolve_path(base_dir, path),
                SeriesKind::Power,
                gaps(*interpolate_gaps),
            )?,
        };

        Ok(CaseStudyInputs {
            name: self.name.clone(),
            pv,
            farm_rated_mw: self.farm.rated_mw,
            technologies,
            load,
            years,
            rates: self.sweep.rates.clone(),
        })
    }
}

/// Year series and assumptions of a `levelize` file.
#[derive(Debug, Clone)]
pub struct LevelizeInputs {
    pub name: String,
    pub fin: FinancialAssumptions,
    pub costs: YearSeries,
    pub energy: YearSeries,
    pub methods: Vec<LevelizeMethod>,
    pub net: Option<NetSection>,
}

impl LevelizeFile {
    pub fn load(&self, base_dir: &Path, paper_bounds: bool) -> Result<LevelizeInputs> {
        let costs = checked(YearSeries::money(load_year_values(&self.costs, base_dir)?))?;
        let energy = checked(YearSeries::energy(load_year_values(&self.energy, base_dir)?))?;
        let horizon = (costs.len().max(2) - 1) as u32;
        let fin = self.finance.resolve(Some(horizon), paper_bounds)?;
        if self.methods.is_empty() {
            return Err(config_err("methods must not be empty"));
        }
        Ok(LevelizeInputs {
            name: self.name.clone(),
            fin,
            costs,
            energy,
            methods: self.methods.clone(),
            net: self.net.clone(),
        })
    }
}

fn load_year_values(src: &SeriesSource, base_dir: &Path) -> Result<Vec<f64>> {
    match src {
        SeriesSource::Values(v) => Ok(v.clone()),
        SeriesSource::Csv { csv } => read_year_csv(&resolve_path(base_dir, csv)),
    }
}

/// Read a `year,value` CSV (optional header row). Years must run 0, 1, ...
pub fn read_year_csv(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    parse_year_csv(&text, path)
}

pub fn parse_year_csv(text: &str, path: &Path) -> Result<Vec<f64>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 2 {
            return Err(err(
                line,
                format!("expected 2 columns (year,value), found {}", record.len()),
            ));
        }
        let Ok(year) = record[0].parse::<usize>() else {
            if values.is_empty() && record[0].eq_ignore_ascii_case("year") {
                continue;
            }
            return Err(err(line, format!("invalid year {:?}", &record[0])));
        };
        if year != values.len() {
            return Err(err(
                line,
                format!("expected year {}, found {year}", values.len()),
            ));
        }
        let v: f64 = record[1]
            .parse()
            .map_err(|_| err(line, format!("invalid number {:?}", &record[1])))?;
        if !v.is_finite() {
            return Err(err(line, format!("value {v} is not finite")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(err(1, "no data rows".into()));
    }
    Ok(values)
}
