//! Experiment configuration: plain `key = value` text, presets, and the
//! canonical rendering written into run manifests.

use crate::error::{Error, Result};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Named experiment pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// KdV snapshot at ε = 0.1.
    Figure1,
    /// KdV, elliptic/Hopf and multiscale curves at t = 0.4, ε = 0.01.
    Figure4,
    /// Differences of KdV against the elliptic/Hopf and patched solutions.
    Figure5,
    /// Error sweep over ε with power-law fits.
    Scaling,
    /// Width of the zone where the multiscale solution is better.
    Zonewidth,
    /// Multiscale vs KdV at times shortly after breakup.
    Breakup,
    /// The Hastings–McLeod solution and its residual.
    HastingsMcleod,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Figure1,
        Preset::Figure4,
        Preset::Figure5,
        Preset::Scaling,
        Preset::Zonewidth,
        Preset::Breakup,
        Preset::HastingsMcleod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Figure1 => "figure1",
            Preset::Figure4 => "figure4",
            Preset::Figure5 => "figure5",
            Preset::Scaling => "scaling",
            Preset::Zonewidth => "zonewidth",
            Preset::Breakup => "breakup",
            Preset::HastingsMcleod => "hastings-mcleod",
        }
    }

    fn defaults(self) -> (Vec<f64>, Vec<f64>) {
        let sweep = vec![0.08, 0.04, 0.02, 0.01];
        match self {
            Preset::Figure1 => (vec![0.1], vec![0.4]),
            Preset::Figure4 | Preset::Figure5 => (vec![0.01], vec![0.4]),
            Preset::Scaling | Preset::Zonewidth => (sweep, vec![0.4]),
            Preset::Breakup => (vec![0.01], vec![0.22, 0.24, 0.27, 0.3]),
            Preset::HastingsMcleod => (Vec::new(), Vec::new()),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

/// Everything a `run` needs. Built from preset defaults, then a config
/// file, then command-line overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    /// `sech2` or `file:<path>`.
    pub initial_data: String,
    pub epsilons: Vec<f64>,
    pub times: Vec<f64>,
    /// Half-width L of the periodic box.
    pub half_width: f64,
    /// Grid points; `None` picks the resolving power of two.
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub dealias: bool,
    pub tail_gate: f64,
    pub blowup: f64,
    pub hm_tol: f64,
    pub hm_mu: f64,
    /// Edge window half-width in Painlevé units.
    pub window: f64,
    /// Plot range for curves and differences.
    pub xmin: f64,
    pub xmax: f64,
    pub outdir: Option<PathBuf>,
}

pub const KEYS: [&str; 16] = [
    "preset",
    "initial_data",
    "epsilons",
    "times",
    "L",
    "N",
    "dt",
    "dealias",
    "tail_gate",
    "blowup",
    "hm_tol",
    "hm_mu",
    "window",
    "xmin",
    "xmax",
    "outdir",
];

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        let (epsilons, times) = preset.defaults();
        ExperimentConfig {
            preset,
            initial_data: "sech2".into(),
            epsilons,
            times,
            half_width: 15.0,
            n: None,
            dt: None,
            dealias: false,
            tail_gate: 1e-8,
            blowup: 10.0,
            hm_tol: 1e-14,
            hm_mu: 0.009,
            window: 0.5,
            xmin: -6.0,
            xmax: 2.0,
            outdir: None,
        }
    }

    /// Resolve a list of (key, value, origin) assignments: the last `preset`
    /// picks the defaults, every other key is applied in order.
    pub fn from_assignments(items: &[Assignment]) -> Result<Self> {
        let mut preset = None;
        for a in items.iter().filter(|a| a.key == "preset") {
            preset = Some(a.value.parse::<Preset>().map_err(|e| a.error(e.to_string()))?);
        }
        let preset = preset.ok_or_else(|| Error::Config("no preset given (config key `preset` or --preset)".into()))?;
        let mut cfg = ExperimentConfig::preset(preset);
        for a in items.iter().filter(|a| a.key != "preset") {
            cfg.set(&a.key, &a.value).map_err(|e| a.error(e))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let auto = value.eq_ignore_ascii_case("auto");
        match key {
            "initial_data" => self.initial_data = value.to_string(),
            "epsilons" => self.epsilons = parse_list(value)?,
            "times" => self.times = parse_list(value)?,
            "L" => self.half_width = parse_num(value)?,
            "N" => self.n = if auto { None } else { Some(value.parse().map_err(|_| format!("N: expected an integer or auto, got {value:?}"))?) },
            "dt" => self.dt = if auto { None } else { Some(parse_num(value)?) },
            "dealias" => self.dealias = value.parse().map_err(|_| format!("dealias: expected true or false, got {value:?}"))?,
            "tail_gate" => self.tail_gate = parse_num(value)?,
            "blowup" => self.blowup = parse_num(value)?,
            "hm_tol" => self.hm_tol = parse_num(value)?,
            "hm_mu" => self.hm_mu = parse_num(value)?,
            "window" => self.window = parse_num(value)?,
            "xmin" => self.xmin = parse_num(value)?,
            "xmax" => self.xmax = parse_num(value)?,
            "outdir" => self.outdir = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key {key:?} (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, v) in [
            ("L", self.half_width),
            ("tail_gate", self.tail_gate),
            ("blowup", self.blowup),
            ("hm_tol", self.hm_tol),
            ("hm_mu", self.hm_mu),
            ("window", self.window),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.xmin < self.xmax) {
            return bad(format!("xmin = {} must be below xmax = {}", self.xmin, self.xmax));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0)) {
            return bad(format!("epsilon must be positive, got {e}"));
        }
        if let Some(t) = self.times.iter().find(|t| !(**t > 0.0)) {
            return bad(format!("times must be positive, got {t}"));
        }
        let needs_runs = self.preset != Preset::HastingsMcleod;
        if needs_runs && (self.epsilons.is_empty() || self.times.is_empty()) {
            return bad(format!("preset {} needs at least one epsilon and one time", self.preset));
        }
        if matches!(self.preset, Preset::Scaling | Preset::Zonewidth) && self.epsilons.len() < 3 {
            return bad(format!("preset {} fits a power law and needs ≥ 3 epsilons", self.preset));
        }
        if self.initial_data != "sech2" && !self.initial_data.starts_with("file:") {
            return bad(format!("initial_data must be sech2 or file:<path>, got {:?}", self.initial_data));
        }
        Ok(())
    }

    /// Canonical `key = value` lines. Numbers use the shortest decimal that
    /// round-trips, so feeding the text back reproduces the configuration
    /// exactly. `outdir` is left out so a manifest can be re-run elsewhere.
    pub fn render(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ");
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let lines = [
            ("preset", self.preset.to_string()),
            ("initial_data", self.initial_data.clone()),
            ("epsilons", list(&self.epsilons)),
            ("times", list(&self.times)),
            ("L", num(self.half_width)),
            ("N", opt(self.n.map(|n| n.to_string()))),
            ("dt", opt(self.dt.map(num))),
            ("dealias", self.dealias.to_string()),
            ("tail_gate", num(self.tail_gate)),
            ("blowup", num(self.blowup)),
            ("hm_tol", num(self.hm_tol)),
            ("hm_mu", num(self.hm_mu)),
            ("window", num(self.window)),
            ("xmin", num(self.xmin)),
            ("xmax", num(self.xmax)),
        ];
        // empty lists are omitted: a preset without runs needs none
        lines.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// One `key = value` with where it came from, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub key: String,
    pub value: String,
    pub origin: String,
}

impl Assignment {
    fn error(&self, detail: impl fmt::Display) -> Error {
        Error::Config(format!("{}: {detail}", self.origin))
    }

    /// `key=value` from the command line.
    pub fn from_flag(text: &str) -> Result<Self> {
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects key=value, got {text:?}")))?;
        Ok(Assignment {
            key: k.trim().to_string(),
            value: v.trim().to_string(),
            origin: format!("--set {text}"),
        })
    }
}

/// Parse config text. Blank lines and `#` comments are skipped; every other
/// line must be `key = value` with a known key.
pub fn parse_config(text: &str, origin: &Path) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |detail: String| Error::Parse {
            path: origin.to_path_buf(),
            line: i + 1,
            detail,
        };
        let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(err(format!("unknown key {k:?}")));
        }
        if v.is_empty() {
            return Err(err(format!("empty value for {k:?}")));
        }
        out.push(Assignment {
            key: k.to_string(),
            value: v.to_string(),
            origin: format!("{}:{}", origin.display(), i + 1),
        });
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<Assignment>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, path)
}

/// Shortest round-trip decimal, in exponent form for very small or large
/// magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && !(1e-3..1e6).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn parse_num(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("expected a number, got {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got {s:?}"))
    }
}

/// Comma- or whitespace-separated numbers.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(parse_num)
        .collect()
}
