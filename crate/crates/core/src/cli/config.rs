//! Line-based run configuration: `[section]` headers, `key = value` lines,
//! `#` comments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dynamics::{Branch, DerivativeMethod, Grid, PotentialSpec};
use crate::n_algebra::{format_complex, parse_complex};
use crate::nonlinearity::NonlinearitySpec;

use super::CliError;

/// Initial field family.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    PlaneWave {
        momentum_index: Vec<i64>,
        mass: f64,
        branch: Branch,
    },
    Gaussian {
        center: Vec<f64>,
        width: f64,
        /// 0-based basis spinor index; written `e1`..`e4`.
        base: usize,
        momentum_index: Vec<i64>,
    },
    Homogeneous {
        c: Complex64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    /// `None` means `0.1·Δx_min`.
    pub dt: Option<f64>,
    pub steps: usize,
    pub output_every: usize,
    pub derivative: DerivativeMethod,
    /// Worker threads; `None` leaves the choice to the thread pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub directory: String,
    pub series_name: String,
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub potential: PotentialSpec,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialSpec,
    pub run: RunSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// Time step with the `0.1·Δx_min` default applied.
    pub fn dt(&self) -> f64 {
        self.run.dt.unwrap_or(0.1 * self.grid.min_spacing())
    }
}

struct Entry {
    value: String,
    line: usize,
    used: bool,
}

/// Parsed `section → key → value` with line numbers for messages.
struct Sections {
    map: BTreeMap<String, BTreeMap<String, Entry>>,
}

const SECTIONS: [&str; 6] = ["grid", "potential", "nonlinearity", "initial", "run", "output"];

impl Sections {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut map: BTreeMap<String, BTreeMap<String, Entry>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(CliError::Config(format!("line {line}: unknown section [{name}]")));
                }
                if map.contains_key(name) {
                    return Err(CliError::Config(format!("line {line}: section [{name}] repeated")));
                }
                map.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(CliError::Config(format!("line {line}: expected `key = value`, got {content:?}")));
            };
            let Some(section) = &current else {
                return Err(CliError::Config(format!("line {line}: `{}` appears before any section", key.trim())));
            };
            let key = key.trim().to_string();
            let entries = map.get_mut(section).expect("section inserted");
            if entries.contains_key(&key) {
                return Err(CliError::Config(format!("line {line}: [{section}] {key} repeated")));
            }
            entries.insert(
                key,
                Entry {
                    value: value.trim().to_string(),
                    line,
                    used: false,
                },
            );
        }
        Ok(Self { map })
    }

    fn get(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let e = self.map.get_mut(section)?.get_mut(key)?;
        e.used = true;
        Some((e.value.clone(), e.line))
    }

    fn require(&mut self, section: &str, key: &str) -> Result<(String, usize), CliError> {
        self.get(section, key)
            .ok_or_else(|| CliError::Config(format!("[{section}] {key}: missing")))
    }

    fn parsed<T>(
        &mut self,
        section: &str,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        match self.get(section, key) {
            None => Ok(None),
            Some((value, line)) => parse(&value)
                .map(Some)
                .map_err(|why| CliError::Config(format!("line {line}: [{section}] {key}: {why}"))),
        }
    }

    fn required<T>(
        &mut self,
        section: &str,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, CliError> {
        self.parsed(section, key, parse)?
            .ok_or_else(|| CliError::Config(format!("[{section}] {key}: missing")))
    }

    fn reject_unused(&self) -> Result<(), CliError> {
        for (section, entries) in &self.map {
            for (key, e) in entries {
                if !e.used {
                    return Err(CliError::Config(format!(
                        "line {}: [{section}] {key}: unknown field",
                        e.line
                    )));
                }
            }
        }
        Ok(())
    }
}

fn number<T: FromStr>(what: &'static str) -> impl Fn(&str) -> Result<T, String> {
    move |s| s.parse::<T>().map_err(|_| format!("expected {what}, got {s:?}"))
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn finite_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn list<T>(item: impl Fn(&str) -> Result<T, String>) -> impl Fn(&str) -> Result<Vec<T>, String> {
    move |s| s.split(',').map(|t| item(t.trim())).collect()
}

fn on_off(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        other => Err(format!("expected on or off, got {other:?}")),
    }
}

fn base_spinor(s: &str) -> Result<usize, String> {
    match s {
        "e1" => Ok(0),
        "e2" => Ok(1),
        "e3" => Ok(2),
        "e4" => Ok(3),
        other => Err(format!("expected e1..e4, got {other:?}")),
    }
}

fn csv<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl FromStr for RunConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut s = Sections::parse(text)?;

        let dims: usize = s.required("grid", "dims", number("an integer"))?;
        let (points_text, points_line) = s.require("grid", "points")?;
        let points = list(number::<usize>("an integer"))(&points_text)
            .map_err(|why| CliError::Config(format!("line {points_line}: [grid] points: {why}")))?;
        let (lengths_text, lengths_line) = s.require("grid", "lengths")?;
        let lengths = list(positive_real)(&lengths_text)
            .map_err(|why| CliError::Config(format!("line {lengths_line}: [grid] lengths: {why}")))?;
        if points.len() != dims || lengths.len() != dims {
            return Err(CliError::Config(format!(
                "line {points_line}: [grid] points/lengths: dims = {dims} needs {dims} entries each"
            )));
        }
        let grid = Grid::new(&points, &lengths)
            .map_err(|e| CliError::Config(format!("line {points_line}: [grid] points: {e}")))?;

        let potential = s
            .parsed("potential", "spec", |v| v.parse::<PotentialSpec>().map_err(|e| e.to_string()))?
            .unwrap_or(PotentialSpec::Zero);
        let nonlinearity = s.required("nonlinearity", "spec", |v| {
            v.parse::<NonlinearitySpec>().map_err(|e| e.to_string())
        })?;

        let kind = s.required("initial", "kind", |v| Ok(v.to_string()))?;
        let initial = match kind.as_str() {
            "plane_wave" => InitialSpec::PlaneWave {
                momentum_index: s.required("initial", "p_index", list(number("an integer")))?,
                mass: s.required("initial", "mass", |v| match v.parse::<f64>() {
                    Ok(m) if m >= 0.0 && m.is_finite() => Ok(m),
                    _ => Err(format!("expected a non-negative number, got {v:?}")),
                })?,
                branch: s
                    .parsed("initial", "branch", |v| v.parse::<Branch>().map_err(|e| e.to_string()))?
                    .unwrap_or_default(),
            },
            "gaussian" => InitialSpec::Gaussian {
                center: s.required("initial", "center", list(finite_real))?,
                width: s.required("initial", "width", positive_real)?,
                base: s.parsed("initial", "base", base_spinor)?.unwrap_or(0),
                momentum_index: s.required("initial", "momentum_index", list(number("an integer")))?,
            },
            "homogeneous" => InitialSpec::Homogeneous {
                c: s.required("initial", "c", |v| {
                    parse_complex(v).and_then(|c| {
                        if c.is_finite() {
                            Ok(c)
                        } else {
                            Err(format!("non-finite amplitude {v:?}"))
                        }
                    })
                })?,
            },
            other => {
                let (_, line) = s.require("initial", "kind")?;
                return Err(CliError::Config(format!(
                    "line {line}: [initial] kind: expected plane_wave, gaussian or homogeneous, got {other:?}"
                )));
            }
        };
        let index_len = match &initial {
            InitialSpec::PlaneWave { momentum_index, .. } => Some(("p_index", momentum_index.len())),
            InitialSpec::Gaussian { momentum_index, center, .. } => {
                if center.len() != dims {
                    return Err(CliError::Config(format!("[initial] center: needs {dims} coordinates")));
                }
                Some(("momentum_index", momentum_index.len()))
            }
            InitialSpec::Homogeneous { .. } => None,
        };
        if let Some((key, n)) = index_len {
            if n != dims {
                return Err(CliError::Config(format!("[initial] {key}: needs {dims} entries")));
            }
        }

        let run = RunSection {
            dt: s.parsed("run", "dt", positive_real)?,
            steps: s.required("run", "steps", number("a non-negative integer"))?,
            output_every: s
                .parsed("run", "output_every", |v| match v.parse::<usize>() {
                    Ok(n) if n > 0 => Ok(n),
                    _ => Err(format!("expected a positive integer, got {v:?}")),
                })?
                .unwrap_or(1),
            derivative: s
                .parsed("run", "derivative", |v| v.parse::<DerivativeMethod>().map_err(|e| e.to_string()))?
                .unwrap_or_default(),
            threads: s.parsed("run", "threads", |v| match v.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(format!("expected a positive integer, got {v:?}")),
            })?,
        };

        let output = OutputSection {
            directory: s.parsed("output", "directory", |v| Ok(v.to_string()))?.unwrap_or_else(|| ".".into()),
            series_name: s
                .parsed("output", "series_name", |v| {
                    if v.is_empty() || v.contains(['/', '\\']) {
                        Err(format!("expected a plain file stem, got {v:?}"))
                    } else {
                        Ok(v.to_string())
                    }
                })?
                .unwrap_or_else(|| "series".into()),
            snapshots: s.parsed("output", "snapshots", on_off)?.unwrap_or(false),
        };

        s.reject_unused()?;
        Ok(RunConfig {
            grid,
            potential,
            nonlinearity,
            initial,
            run,
            output,
        })
    }
}

/// Canonical text that parses back to the same configuration.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[grid]")?;
        writeln!(f, "dims = {}", self.grid.dims())?;
        writeln!(f, "points = {}", csv(self.grid.points()))?;
        writeln!(f, "lengths = {}", csv(self.grid.lengths()))?;
        writeln!(f, "\n[potential]\nspec = {}", self.potential)?;
        writeln!(f, "\n[nonlinearity]\nspec = {}", self.nonlinearity)?;
        writeln!(f, "\n[initial]")?;
        match &self.initial {
            InitialSpec::PlaneWave {
                momentum_index,
                mass,
                branch,
            } => {
                writeln!(f, "kind = plane_wave")?;
                writeln!(f, "p_index = {}", csv(momentum_index))?;
                writeln!(f, "mass = {mass}")?;
                writeln!(f, "branch = {branch}")?;
            }
            InitialSpec::Gaussian {
                center,
                width,
                base,
                momentum_index,
            } => {
                writeln!(f, "kind = gaussian")?;
                writeln!(f, "center = {}", csv(center))?;
                writeln!(f, "width = {width}")?;
                writeln!(f, "base = e{}", base + 1)?;
                writeln!(f, "momentum_index = {}", csv(momentum_index))?;
            }
            InitialSpec::Homogeneous { c } => {
                writeln!(f, "kind = homogeneous")?;
                writeln!(f, "c = {}", format_complex(*c))?;
            }
        }
        writeln!(f, "\n[run]")?;
        writeln!(f, "dt = {}", self.dt())?;
        writeln!(f, "steps = {}", self.run.steps)?;
        writeln!(f, "output_every = {}", self.run.output_every)?;
        writeln!(f, "derivative = {}", self.run.derivative)?;
        if let Some(t) = self.run.threads {
            writeln!(f, "threads = {t}")?;
        }
        writeln!(f, "\n[output]")?;
        writeln!(f, "directory = {}", self.output.directory)?;
        writeln!(f, "series_name = {}", self.output.series_name)?;
        writeln!(f, "snapshots = {}", if self.output.snapshots { "on" } else { "off" })
    }
}
