//! TOML run configuration.
//!
//! A file holds an optional `[model]` and `[output]` section plus one
//! section per command. Keys mirror the long command-line flags with `_` in
//! place of `-`; flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{
    CwstarParams, MinimizeParams, ModelArgs, OutputArgs, ReconstructParams, ScanParams, SharpParams,
    SweepParams,
};
use crate::error::{Error, Result};
use crate::material::{GrowthBound, MaterialModel};

const SECTIONS: [&str; 8] = [
    "model",
    "output",
    "cwstar",
    "sharp",
    "minimize",
    "scan",
    "sweep",
    "reconstruct",
];

/// Growth constants assumed for custom polynomials when none are given.
pub const DEFAULT_CUSTOM_GROWTH: GrowthBound = GrowthBound { c: 0.25, m: 2.0 };

#[derive(Debug, Default)]
pub struct ConfigFile {
    table: toml::Table,
    origin: Option<PathBuf>,
}

fn config_err(origin: &Option<PathBuf>, message: impl std::fmt::Display) -> Error {
    match origin {
        Some(p) => Error::Config(format!("{}: {message}", p.display())),
        None => Error::Config(message.to_string()),
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, Some(path.to_path_buf()))
    }

    /// Parses and validates every section against its schema.
    pub fn parse(text: &str, origin: Option<PathBuf>) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e| config_err(&origin, e))?;
        for (key, value) in &table {
            if !SECTIONS.contains(&key.as_str()) {
                return Err(config_err(&origin, format!("unknown section [{key}]")));
            }
            if !value.is_table() {
                return Err(config_err(&origin, format!("[{key}] must be a table")));
            }
        }
        let file = Self { table, origin };
        file.section::<ModelArgs>("model")?;
        file.section::<OutputArgs>("output")?;
        file.section::<CwstarParams>("cwstar")?;
        file.section::<SharpParams>("sharp")?;
        file.section::<MinimizeParams>("minimize")?;
        file.section::<ScanParams>("scan")?;
        file.section::<SweepParams>("sweep")?;
        file.section::<ReconstructParams>("reconstruct")?;
        Ok(file)
    }

    fn section<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>> {
        self.table
            .get(name)
            .map(|v| {
                v.clone()
                    .try_into()
                    .map_err(|e| config_err(&self.origin, format!("[{name}]: {e}")))
            })
            .transpose()
    }

    /// The file section `name` with every value set on the command line
    /// laid over it.
    pub fn merged<T>(&self, name: &str, cli: &T) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
    {
        let mut base = match self.table.get(name) {
            Some(toml::Value::Table(t)) => t.clone(),
            _ => toml::Table::new(),
        };
        let overrides = toml::Table::try_from(cli).map_err(|e| Error::Config(e.to_string()))?;
        base.extend(overrides);
        toml::Value::Table(base)
            .try_into()
            .map_err(|e| config_err(&self.origin, format!("[{name}]: {e}")))
    }
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<MaterialModel> {
        let growth = match (self.growth_c, self.growth_m) {
            (Some(c), Some(m)) => Some(GrowthBound { c, m }),
            (None, None) => None,
            _ => return Err(Error::Config("growth_c and growth_m go together".into())),
        };
        match (&self.model, &self.coefficients) {
            (Some(name), None) if name != "custom" => {
                let model = MaterialModel::by_name(name)?;
                match growth {
                    Some(g) => model.with_growth(g),
                    None => Ok(model),
                }
            }
            (None, None) => {
                let model = MaterialModel::by_name("lj")?;
                match growth {
                    Some(g) => model.with_growth(g),
                    None => Ok(model),
                }
            }
            (name, Some(coefficients)) => {
                let name = match name.as_deref() {
                    None | Some("custom") => "custom",
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "model {other:?} conflicts with explicit coefficients; use \"custom\""
                        )))
                    }
                };
                MaterialModel::polynomial(name, coefficients.clone(), growth.unwrap_or(DEFAULT_CUSTOM_GROWTH))
            }
            (Some(_), None) => Err(Error::Config("model \"custom\" needs coefficients".into())),
        }
    }
}

/// Output formats a command may write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}
