//! Versioned atomic-data file: one section per species.

use std::path::Path;

use crate::atomic_physics::IonSpecies;
use crate::error::{Error, Result};
use crate::keyvalue::Document;

/// The data file shipped with the crate.
pub const BUILTIN: &str = include_str!("../data/atomic_data.toml");

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRecord {
    /// Section name, used for lookup (`Ca40`).
    pub key: String,
    pub species: IonSpecies,
    pub source: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDatabase {
    pub version: u32,
    pub origin: String,
    pub records: Vec<SpeciesRecord>,
}

impl AtomicDatabase {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN, "<builtin atomic data>").expect("builtin atomic data is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Schema {
            origin: path.display().to_string(),
            line: 0,
            message: format!("cannot read atomic data: {e}"),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let doc = Document::parse(text, origin)?;
        let mut root = doc.reader(doc.root());
        let (version, vline) = root.f64("version")?;
        if version < 1.0 || version.fract() != 0.0 {
            return Err(root.error(vline, "`version` must be a positive integer"));
        }
        root.finish()?;

        let mut records = Vec::new();
        for section in doc.named_sections() {
            let mut r = doc.reader(section);
            let (name, _) = r.string("name")?;
            let mut positive = |key: &str| -> Result<f64> {
                let (v, line) = r.f64(key)?;
                if v <= 0.0 {
                    return Err(r.error(line, format!("`{key}` must be positive")));
                }
                Ok(v)
            };
            let mass_u = positive("mass_u")?;
            let lambda_half = positive("lambda_half_nm")?;
            let lambda_threehalf = positive("lambda_threehalf_nm")?;
            let (gamma_half, gh_line) = r.f64("gamma_half_2pi_MHz")?;
            let (gamma_threehalf, gt_line) = r.f64("gamma_threehalf_2pi_MHz")?;
            for (g, line) in [(gamma_half, gh_line), (gamma_threehalf, gt_line)] {
                if g < 0.0 {
                    return Err(r.error(line, "linewidths must be non-negative"));
                }
            }
            let (source, _) = r.string("source")?;
            r.finish()?;
            let species = IonSpecies::from_spectroscopic(
                name,
                mass_u,
                lambda_half,
                lambda_threehalf,
                gamma_half,
                gamma_threehalf,
            )
            .map_err(|e| Error::Schema {
                origin: origin.to_string(),
                line: section.line,
                message: e.to_string(),
            })?;
            records.push(SpeciesRecord {
                key: section.name.clone(),
                species,
                source,
                line: section.line,
            });
        }
        Ok(Self {
            version: version as u32,
            origin: origin.to_string(),
            records,
        })
    }

    /// Looks a species up by section key (`Ca40`) or display name (`40Ca+`),
    /// ignoring ASCII case.
    pub fn get(&self, name: &str) -> Option<&SpeciesRecord> {
        self.records
            .iter()
            .find(|r| r.key.eq_ignore_ascii_case(name) || r.species.name.eq_ignore_ascii_case(name))
    }

    pub fn species(&self, name: &str) -> Result<IonSpecies> {
        self.get(name).map(|r| r.species.clone()).ok_or_else(|| {
            let known: Vec<_> = self.records.iter().map(|r| r.key.as_str()).collect();
            Error::InvalidInput(format!(
                "species `{name}` not found in {} (known: {})",
                self.origin,
                known.join(", ")
            ))
        })
    }
}

/// Shorthands for the shipped species.
pub fn calcium40() -> IonSpecies {
    AtomicDatabase::builtin().species("Ca40").unwrap()
}

pub fn barium138() -> IonSpecies {
    AtomicDatabase::builtin().species("Ba138").unwrap()
}

pub fn strontium88() -> IonSpecies {
    AtomicDatabase::builtin().species("Sr88").unwrap()
}
