//! Run configuration: a sectioned key/value file, overridden by command-line
//! flags.
//!
//! ```text
//! species = "Ca40"
//! omega_z_khz = 200        # trap frequency / 2pi
//! geometry = "c"
//! waist_um = 5             # geometry b defaults to the ion spacing
//! n = 15
//! lambda_nm = 395.1
//! atomic_data = "ions.toml"
//! out = "results"
//!
//! [sweep]
//! lambda_range_nm = "380:5000:10"   # or lambda_grid_nm = [...]
//!
//! [errors]
//! epsilon_p = 0.01
//! delta_t_ns = 10
//! epsilon_f = 3e-4
//! f_f_khz = 1
//! position_jitter_nm = 10
//! safety_factor = 10
//!
//! [design]
//! power_cap_w = 1e6
//! guard_linewidths = 1000
//!
//! [trajectory]
//! points_per_period = 400
//! ```
//!
//! Relative paths in a file are taken relative to the file's directory.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::atomic_physics::GuardBand;
use crate::constants::{angular_frequency, hz_to_angular};
use crate::drive_dynamics::DEFAULT_POINTS_PER_PERIOD;
use crate::error::{Error, Result};
use crate::error_budget::{ErrorModel, DEFAULT_SAFETY_FACTOR};
use crate::gate_designer::DesignOptions;
use crate::keyvalue::{Document, SectionReader};
use crate::trap_mechanics::{Geometry, TrapConfig};

pub const ATOMIC_DATA_ENV: &str = "IONGATE_ATOMIC_DATA";

pub const DEFAULT_SPECIES: &str = "Ca40";
pub const DEFAULT_OMEGA_Z_KHZ: f64 = 200.0;
pub const DEFAULT_WAIST_UM: f64 = 5.0;
pub const DEFAULT_N: u32 = 15;
pub const DEFAULT_LAMBDA_NM: f64 = 395.1;
pub const DEFAULT_RANGE: &str = "380:5000:10";

/// Inclusive wavelength range `LO:HI:STEP` in nm. `HI < LO` is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        if self.hi < self.lo {
            return Vec::new();
        }
        let count = ((self.hi - self.lo) / self.step * (1.0 + 1e-12)).floor() as usize + 1;
        (0..count).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected LO:HI:STEP, got `{s}`"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if lo <= 0.0 || step <= 0.0 {
            return Err(format!("LO and STEP must be positive in `{s}`"));
        }
        Ok(Self { lo, hi, step })
    }
}

/// Values that can come from either the file or the command line. Every
/// field is optional; `None` means "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub species: Option<String>,
    pub omega_z_khz: Option<f64>,
    pub geometry: Option<Geometry>,
    pub waist_um: Option<f64>,
    pub n: Option<u32>,
    pub lambda_nm: Option<f64>,
    pub lambda_grid_nm: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub atomic_data: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `self` win over those in `base`.
    fn over(self, base: Overrides) -> Overrides {
        Overrides {
            species: self.species.or(base.species),
            omega_z_khz: self.omega_z_khz.or(base.omega_z_khz),
            geometry: self.geometry.or(base.geometry),
            waist_um: self.waist_um.or(base.waist_um),
            n: self.n.or(base.n),
            lambda_nm: self.lambda_nm.or(base.lambda_nm),
            lambda_grid_nm: self.lambda_grid_nm.or(base.lambda_grid_nm),
            out: self.out.or(base.out),
            atomic_data: self.atomic_data.or(base.atomic_data),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub species: String,
    /// rad/s
    pub omega_z: f64,
    pub geometry: Geometry,
    /// m; `None` selects the geometry default.
    pub waist: Option<f64>,
    pub n: u32,
    /// m
    pub lambda: f64,
    /// Sweep wavelengths, nm, strictly increasing.
    pub lambda_grid_nm: Vec<f64>,
    pub out: Option<PathBuf>,
    pub atomic_data: Option<PathBuf>,
    pub error_model: ErrorModel,
    pub safety_factor: f64,
    pub design: DesignOptions,
    pub points_per_period: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::resolve(None, Overrides::default(), None).expect("defaults are valid")
    }
}

/// Settings that only the file can provide.
#[derive(Default)]
struct FileOnly {
    errors: ErrorModel,
    safety_factor: Option<f64>,
    power_cap: Option<f64>,
    guard_linewidths: Option<f64>,
    points_per_period: Option<usize>,
}

impl RunConfig {
    /// Reads `path` and applies `flags` on top. `env_atomic_data` is the
    /// lowest-priority source for the atomic-data path.
    pub fn load(path: Option<&Path>, flags: Overrides, env_atomic_data: Option<PathBuf>) -> Result<Self> {
        match path {
            None => Self::resolve(None, flags, env_atomic_data),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Schema {
                    origin: p.display().to_string(),
                    line: 0,
                    message: format!("cannot read config: {e}"),
                })?;
                let base = p.parent().unwrap_or(Path::new(""));
                Self::resolve(Some((&text, &p.display().to_string(), base)), flags, env_atomic_data)
            }
        }
    }

    pub fn parse(text: &str, origin: &str, flags: Overrides) -> Result<Self> {
        Self::resolve(Some((text, origin, Path::new(""))), flags, None)
    }

    fn resolve(file: Option<(&str, &str, &Path)>, flags: Overrides, env_atomic_data: Option<PathBuf>) -> Result<Self> {
        let (from_file, extra) = match file {
            Some((text, origin, base)) => read_document(text, origin, base)?,
            None => (Overrides::default(), FileOnly::default()),
        };
        let merged = flags.over(from_file);

        let positive = |name: &str, v: f64| -> Result<f64> {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::InvalidInput(format!("{name} must be positive, got {v:e}")))
            }
        };
        let omega_z = hz_to_angular(positive("omega_z_khz", merged.omega_z_khz.unwrap_or(DEFAULT_OMEGA_Z_KHZ))? * 1e3);
        let waist = merged.waist_um.map(|w| positive("waist_um", w).map(|w| w / 1e6)).transpose()?;
        let lambda = positive("lambda_nm", merged.lambda_nm.unwrap_or(DEFAULT_LAMBDA_NM))? / 1e9;
        let n = merged.n.unwrap_or(DEFAULT_N);
        if n < 2 {
            return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
        }
        let grid_nm = match merged.lambda_grid_nm {
            Some(g) => g,
            None => DEFAULT_RANGE.parse::<GridRange>().expect("default range").points(),
        };
        check_increasing(&grid_nm).map_err(Error::InvalidInput)?;

        let mut design = DesignOptions::default();
        if let Some(cap) = extra.power_cap {
            design.power_cap = positive("power_cap_w", cap)?;
        }
        if let Some(g) = extra.guard_linewidths {
            design.guard = GuardBand { linewidths: positive("guard_linewidths", g)? };
        }
        extra.errors.validate()?;
        let safety_factor = extra.safety_factor.unwrap_or(DEFAULT_SAFETY_FACTOR);
        if !(safety_factor.is_finite() && safety_factor >= 1.0) {
            return Err(Error::InvalidInput(format!("safety_factor must be at least 1, got {safety_factor:e}")));
        }

        Ok(RunConfig {
            species: merged.species.unwrap_or_else(|| DEFAULT_SPECIES.to_string()),
            omega_z,
            geometry: merged.geometry.unwrap_or(Geometry::C),
            waist,
            n,
            lambda,
            lambda_grid_nm: grid_nm,
            out: merged.out,
            atomic_data: merged.atomic_data.or(env_atomic_data),
            error_model: extra.errors,
            safety_factor,
            design,
            points_per_period: extra.points_per_period.unwrap_or(DEFAULT_POINTS_PER_PERIOD),
        })
    }

    /// Explicit waist, or the ion spacing for geometry b and 5 um otherwise.
    pub fn waist_for(&self, trap: &TrapConfig) -> f64 {
        match (self.waist, self.geometry) {
            (Some(w), _) => w,
            (None, Geometry::B) => trap.spacing(),
            (None, _) => DEFAULT_WAIST_UM / 1e6,
        }
    }

    pub fn omega_laser(&self) -> f64 {
        angular_frequency(self.lambda)
    }
}

fn check_increasing(grid: &[f64]) -> std::result::Result<(), String> {
    if let Some(x) = grid.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(format!("wavelength grid values must be positive, got {x:e}"));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(format!(
            "wavelength grid must be strictly increasing ({:e} followed by {:e})",
            w[0], w[1]
        ));
    }
    Ok(())
}

fn path_value(r: &mut SectionReader, key: &str, base: &Path) -> Result<Option<PathBuf>> {
    Ok(r.opt_string(key)?.map(|(s, _)| {
        let p = PathBuf::from(s);
        if p.is_relative() {
            base.join(p)
        } else {
            p
        }
    }))
}

fn read_document(text: &str, origin: &str, base: &Path) -> Result<(Overrides, FileOnly)> {
    let doc = Document::parse(text, origin)?;
    for section in doc.named_sections() {
        if !matches!(section.name.as_str(), "sweep" | "errors" | "design" | "trajectory") {
            return Err(Error::Schema {
                origin: origin.to_string(),
                line: section.line,
                message: format!("unknown section [{}]", section.name),
            });
        }
    }

    let mut o = Overrides::default();
    let mut r = doc.reader(doc.root());
    o.species = r.opt_string("species")?.map(|(s, _)| s);
    o.omega_z_khz = r.opt_f64("omega_z_khz")?.map(|(v, _)| v);
    if let Some((g, line)) = r.opt_string("geometry")? {
        o.geometry = Some(g.parse().map_err(|e: Error| r.error(line, e.to_string()))?);
    }
    o.waist_um = r.opt_f64("waist_um")?.map(|(v, _)| v);
    if let Some((v, line)) = r.opt_f64("n")? {
        if v.fract() != 0.0 || !(2.0..=1e7).contains(&v) {
            return Err(r.error(line, "`n` must be an integer of at least 2"));
        }
        o.n = Some(v as u32);
    }
    o.lambda_nm = r.opt_f64("lambda_nm")?.map(|(v, _)| v);
    o.out = path_value(&mut r, "out", base)?;
    o.atomic_data = path_value(&mut r, "atomic_data", base)?;
    r.finish()?;

    if let Some(section) = doc.section("sweep") {
        let mut r = doc.reader(section);
        let grid = r.opt_f64_array("lambda_grid_nm")?;
        let range = r.opt_string("lambda_range_nm")?;
        match (grid, range) {
            (Some(_), Some((_, line))) => {
                return Err(r.error(line, "give either `lambda_grid_nm` or `lambda_range_nm`, not both"))
            }
            (Some((g, line)), None) => {
                check_increasing(&g).map_err(|m| r.error(line, m))?;
                o.lambda_grid_nm = Some(g);
            }
            (None, Some((s, line))) => {
                o.lambda_grid_nm = Some(s.parse::<GridRange>().map_err(|m| r.error(line, m))?.points());
            }
            (None, None) => {}
        }
        r.finish()?;
    }

    let mut extra = FileOnly::default();
    if let Some(section) = doc.section("errors") {
        let mut r = doc.reader(section);
        let m = &mut extra.errors;
        let mut read = |key: &str, scale: f64, target: &mut f64| -> Result<()> {
            if let Some((v, line)) = r.opt_f64(key)? {
                if v < 0.0 {
                    return Err(r.error(line, format!("`{key}` must be non-negative")));
                }
                *target = v * scale;
            }
            Ok(())
        };
        read("epsilon_p", 1.0, &mut m.epsilon_p)?;
        read("delta_t_ns", 1e-9, &mut m.delta_t)?;
        read("epsilon_f", 1.0, &mut m.epsilon_f)?;
        read("f_f_khz", 2.0 * std::f64::consts::PI * 1e3, &mut m.omega_f)?;
        read("position_jitter_nm", 1e-9, &mut m.position_jitter)?;
        if let Some((v, line)) = r.opt_f64("safety_factor")? {
            if v < 1.0 {
                return Err(r.error(line, "`safety_factor` must be at least 1"));
            }
            extra.safety_factor = Some(v);
        }
        r.finish()?;
    }
    if let Some(section) = doc.section("design") {
        let mut r = doc.reader(section);
        for (key, target) in [
            ("power_cap_w", &mut extra.power_cap),
            ("guard_linewidths", &mut extra.guard_linewidths),
        ] {
            if let Some((v, line)) = r.opt_f64(key)? {
                if v <= 0.0 {
                    return Err(r.error(line, format!("`{key}` must be positive")));
                }
                *target = Some(v);
            }
        }
        r.finish()?;
    }
    if let Some(section) = doc.section("trajectory") {
        let mut r = doc.reader(section);
        if let Some((v, line)) = r.opt_f64("points_per_period")? {
            if v.fract() != 0.0 || !(8.0..=1e6).contains(&v) {
                return Err(r.error(line, "`points_per_period` must be an integer in [8, 1e6]"));
            }
            extra.points_per_period = Some(v as usize);
        }
        r.finish()?;
    }
    Ok((o, extra))
}
