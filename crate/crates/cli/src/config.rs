//! Numeric settings: built-in defaults, overridden by a `key = value`
//! configuration file, overridden in turn by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qes_core::shoot::BvpSpec;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "QES_CONFIG";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub precision_bits: u32,
    pub tol: f64,
    pub x0: f64,
    pub xm: f64,
    pub xr: Option<f64>,
    pub e_max: f64,
    pub scan_step: f64,
    pub integrator_tol: f64,
    pub series_terms: usize,
    pub parallel: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let b = BvpSpec::default();
        Settings {
            precision_bits: 128,
            tol: b.tol,
            x0: b.x0,
            xm: b.xm,
            xr: b.xr,
            e_max: b.e_max,
            scan_step: b.scan_step,
            integrator_tol: b.integrator_tol,
            series_terms: b.series_terms,
            parallel: b.parallel,
        }
    }
}

/// Flag values; `None` leaves the configured value alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub tol: Option<f64>,
    pub x0: Option<f64>,
    pub xm: Option<f64>,
    pub xr: Option<f64>,
    pub sequential: bool,
}

impl Settings {
    pub fn bvp(&self) -> BvpSpec {
        BvpSpec {
            x0: self.x0,
            xm: self.xm,
            xr: self.xr,
            tol: self.tol,
            integrator_tol: self.integrator_tol,
            series_terms: self.series_terms,
            e_min: None,
            e_max: self.e_max,
            scan_step: self.scan_step,
            parallel: self.parallel,
        }
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
        where
            T::Err: std::error::Error + Send + Sync + 'static,
        {
            v.parse().with_context(|| format!("bad value '{v}' for '{key}'"))
        }
        match key {
            "precision_bits" => self.precision_bits = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "x0" => self.x0 = num(key, value)?,
            "xm" => self.xm = num(key, value)?,
            "xr" => {
                self.xr = match value {
                    "auto" | "" => None,
                    v => Some(num(key, v)?),
                }
            }
            "e_max" => self.e_max = num(key, value)?,
            "scan_step" => self.scan_step = num(key, value)?,
            "integrator_tol" => self.integrator_tol = num(key, value)?,
            "series_terms" => self.series_terms = num(key, value)?,
            "parallel" => self.parallel = num(key, value)?,
            _ => bail!("unknown configuration key '{key}'"),
        }
        Ok(())
    }

    /// Parse a configuration file body on top of the current values.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key = value", i + 1))?;
            self.set(k.trim(), v.trim()).with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.precision_bits {
            self.precision_bits = v;
        }
        if let Some(v) = o.tol {
            self.tol = v;
        }
        if let Some(v) = o.x0 {
            self.x0 = v;
        }
        if let Some(v) = o.xm {
            self.xm = v;
        }
        if o.xr.is_some() {
            self.xr = o.xr;
        }
        if o.sequential {
            self.parallel = false;
        }
    }

    /// Defaults, then the configuration file (explicit path, else the one
    /// named by [`CONFIG_ENV`]), then the flags.
    pub fn resolve(config: Option<&Path>, overrides: &Overrides) -> Result<Settings> {
        let mut s = Settings::default();
        let path: Option<PathBuf> = config
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        if let Some(p) = path {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("cannot read configuration file {}", p.display()))?;
            s.apply_config(&text)
                .with_context(|| format!("in configuration file {}", p.display()))?;
        }
        s.apply_overrides(overrides);
        if s.precision_bits < 53 {
            bail!("precision_bits must be at least 53");
        }
        s.bvp().validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_then_flags() {
        let mut s = Settings::default();
        s.apply_config("# comment\ntol = 1e-8\nxr = 7.5\nparallel=false\n").unwrap();
        assert_eq!(s.tol, 1e-8);
        assert_eq!(s.xr, Some(7.5));
        assert!(!s.parallel);
        s.apply_overrides(&Overrides {
            tol: Some(1e-12),
            ..Default::default()
        });
        assert_eq!(s.tol, 1e-12);
        assert_eq!(s.xr, Some(7.5));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut s = Settings::default();
        assert!(s.apply_config("colour = blue").is_err());
        assert!(s.apply_config("tol").is_err());
    }
}
