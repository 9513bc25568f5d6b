//! Run configuration: the `key = value` config grammar and validation.
//!
//! Recognized keys (defaults in parentheses):
//!
//! ```text
//! mode             skyrme | sigma          (required)
//! n1               integer ≥ 0             (1; forced 0 in sigma mode)
//! s                real, 7/2 < s < 18/5    (3.55)
//! dr               mesh spacing            (2⁻⁹)
//! r_max            outer radius            (16)
//! cfl              dt/dr, in (0, 1/2]      (0.25)
//! t_end            final time              (10)
//! data.kind        gaussian | skyrmion_perturb | ts_blowup   (gaussian)
//! data.amp         family amplitude        (0.5)
//! data.width       family width            (1)
//! data.center      family center           (0)
//! data.T           σ blow-up time          (1)
//! monitor_every    steps between records   (16)
//! snapshot_every   steps between snapshots (0 = final only)
//! out.series       series CSV path         (series.csv)
//! out.snapshots    snapshot path prefix    (snapshot)
//! ```
//!
//! Unknown keys are rejected; `#` starts a comment.

use crate::error::{LabError, Result};
use crate::evolve::Mode;
use crate::scenarios::DataFamily;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: Mode,
    pub n1: u32,
    pub s: f64,
    pub dr: f64,
    pub r_max: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub data: DataFamily,
    pub monitor_every: usize,
    pub snapshot_every: usize,
    pub out_series: String,
    pub out_snapshots: String,
}

impl SimConfig {
    pub fn default_skyrme() -> Self {
        SimConfig {
            mode: Mode::Skyrme,
            n1: 1,
            s: 3.55,
            dr: (2.0f64).powi(-9),
            r_max: 16.0,
            cfl: 0.25,
            t_end: 10.0,
            data: DataFamily::Gaussian {
                amp: 0.5,
                width: 1.0,
                center: 0.0,
            },
            monitor_every: 16,
            snapshot_every: 0,
            out_series: "series.csv".into(),
            out_snapshots: "snapshot".into(),
        }
    }

    pub fn default_sigma(t_blowup: f64) -> Self {
        SimConfig {
            mode: Mode::Sigma,
            n1: 0,
            t_end: t_blowup,
            r_max: t_blowup + 5.0,
            dr: (2.0f64).powi(-11),
            data: DataFamily::TsBlowup { t_blowup },
            ..SimConfig::default_skyrme()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dr > 0.0) {
            return Err(LabError::Config(format!(
                "dr must be positive, got {}",
                self.dr
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(LabError::Config(format!(
                "cfl must lie in (0, 1/2], got {}",
                self.cfl
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(LabError::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.mode != Mode::Sigma && !(self.s > 3.5 && self.s < 3.6) {
            return Err(LabError::Config(format!(
                "monitor exponent out of range: need 7/2 < s < 18/5, got {}",
                self.s
            )));
        }
        if self.monitor_every == 0 {
            return Err(LabError::Config("monitor_every must be at least 1".into()));
        }
        // propagation padding: r_max ≥ effective data radius + t_end + 2
        // (characteristic speed 1 for the principal part)
        let needed = self.data.extent() + self.t_end + 2.0;
        if self.r_max < needed - 1e-9 {
            return Err(LabError::Config(format!(
                "r_max = {} is inside the propagation horizon: need at least {:.3} \
                 (data radius {:.3} + t_end {} + margin 2)",
                self.r_max,
                needed,
                self.data.extent(),
                self.t_end
            )));
        }
        if let DataFamily::TsBlowup { .. } = self.data {
            if self.mode != Mode::Sigma {
                return Err(LabError::Config(
                    "ts_blowup data drives the sigma mode; set mode = sigma".into(),
                ));
            }
        }
        Ok(())
    }

    /// Canonical `key = value` listing (sorted keys, full precision).
    pub fn canonical(&self) -> String {
        let mode = match self.mode {
            Mode::Skyrme => "skyrme",
            Mode::Sigma => "sigma",
            Mode::FreeWave => "free_wave",
        };
        let (kind, amp, width, center, t_blow) = match &self.data {
            DataFamily::Gaussian { amp, width, center } => ("gaussian", *amp, *width, *center, 1.0),
            DataFamily::SkyrmionPerturb { amp, width, center } => {
                ("skyrmion_perturb", *amp, *width, *center, 1.0)
            }
            DataFamily::TsBlowup { t_blowup } => ("ts_blowup", 0.0, 0.0, 0.0, *t_blowup),
        };
        let mut rows = vec![
            format!("cfl = {:.17e}", self.cfl),
            format!("data.T = {t_blow:.17e}"),
            format!("data.amp = {amp:.17e}"),
            format!("data.center = {center:.17e}"),
            format!("data.kind = {kind}"),
            format!("data.width = {width:.17e}"),
            format!("dr = {:.17e}", self.dr),
            format!("mode = {mode}"),
            format!("monitor_every = {}", self.monitor_every),
            format!("n1 = {}", self.n1),
            format!("out.series = {}", self.out_series),
            format!("out.snapshots = {}", self.out_snapshots),
            format!("r_max = {:.17e}", self.r_max),
            format!("s = {:.17e}", self.s),
            format!("snapshot_every = {}", self.snapshot_every),
            format!("t_end = {:.17e}", self.t_end),
        ];
        rows.sort();
        rows.join("\n")
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        LabError::Config(format!(
            "line {line}: {key} expects a number, got `{value}`"
        ))
    })
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        LabError::Config(format!(
            "line {line}: {key} expects an integer, got `{value}`"
        ))
    })
}

/// Parse the `key = value` config text.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut mode: Option<Mode> = None;
    let mut cfg = SimConfig::default_skyrme();
    let mut kind: Option<String> = None;
    let mut amp: Option<f64> = None;
    let mut width: Option<f64> = None;
    let mut center: Option<f64> = None;
    let mut t_blow: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("line {line}: expected `key = value`")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "mode" => {
                mode = Some(match value {
                    "skyrme" => Mode::Skyrme,
                    "sigma" => Mode::Sigma,
                    other => {
                        return Err(LabError::Config(format!(
                            "line {line}: mode must be `skyrme` or `sigma`, got `{other}`"
                        )))
                    }
                });
            }
            "n1" => cfg.n1 = parse_usize(key, value, line)? as u32,
            "s" => cfg.s = parse_f64(key, value, line)?,
            "dr" => cfg.dr = parse_f64(key, value, line)?,
            "r_max" => cfg.r_max = parse_f64(key, value, line)?,
            "cfl" => cfg.cfl = parse_f64(key, value, line)?,
            "t_end" => cfg.t_end = parse_f64(key, value, line)?,
            "data.kind" => kind = Some(value.to_string()),
            "data.amp" => amp = Some(parse_f64(key, value, line)?),
            "data.width" => width = Some(parse_f64(key, value, line)?),
            "data.center" => center = Some(parse_f64(key, value, line)?),
            "data.T" => t_blow = Some(parse_f64(key, value, line)?),
            "monitor_every" => cfg.monitor_every = parse_usize(key, value, line)?,
            "snapshot_every" => cfg.snapshot_every = parse_usize(key, value, line)?,
            "out.series" => cfg.out_series = value.to_string(),
            "out.snapshots" => cfg.out_snapshots = value.to_string(),
            other => {
                return Err(LabError::Config(format!(
                    "line {line}: unknown key `{other}`"
                )));
            }
        }
    }

    let mode = mode.ok_or_else(|| LabError::Config("missing required key: mode".into()))?;
    cfg.mode = mode;
    if mode == Mode::Sigma {
        cfg.n1 = 0;
    }
    let kind = kind.unwrap_or_else(|| {
        if mode == Mode::Sigma {
            "ts_blowup".to_string()
        } else {
            "gaussian".to_string()
        }
    });
    cfg.data = match kind.as_str() {
        "gaussian" => DataFamily::Gaussian {
            amp: amp.unwrap_or(0.5),
            width: width.unwrap_or(1.0),
            center: center.unwrap_or(0.0),
        },
        "skyrmion_perturb" => DataFamily::SkyrmionPerturb {
            amp: amp.unwrap_or(0.5),
            width: width.unwrap_or(1.0),
            center: center.unwrap_or(3.0),
        },
        "ts_blowup" => DataFamily::TsBlowup {
            t_blowup: t_blow.unwrap_or(1.0),
        },
        other => {
            return Err(LabError::Config(format!(
                "data.kind must be gaussian, skyrmion_perturb, or ts_blowup; got `{other}`"
            )))
        }
    };
    if mode == Mode::Sigma {
        if let DataFamily::TsBlowup { t_blowup } = cfg.data {
            // keep the default horizon consistent with the blow-up time
            if (cfg.r_max - SimConfig::default_skyrme().r_max).abs() < 1e-12 {
                cfg.r_max = t_blowup + 5.0;
            }
            if (cfg.t_end - SimConfig::default_skyrme().t_end).abs() < 1e-12 {
                cfg.t_end = t_blowup;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
