//! Run configuration: a flat key-value file merged with command-line flags.
//!
//! File grammar, one item per line:
//!
//! ```text
//! # comment            (also `;`)
//! key = value          before any section: applies to every command
//! [sweep]              following keys apply to `sweep` only
//! omega = 0:5:0.05
//! ```
//!
//! Keys are the long flag names with `-` or `_` accepted alike. Flags win
//! over the file. A manifest written by a run is itself a valid file.

use std::collections::BTreeMap;
use std::path::Path;

use qfb_core::algebra::{DensityMatrix, IDX_00, IDX_01, IDX_10, IDX_11};
use qfb_core::linalg::{Mat4, C64};
use qfb_core::sweep::{grid, ControlMode};
use qfb_core::trajectories::StepScheme;

use crate::CliError;

pub const COMMANDS: [&str; 3] = ["steady-state", "trajectory", "sweep"];

const COMMON_KEYS: [&str; 5] = ["mode", "initial", "omega", "lambda", "output"];
const MONTE_CARLO_KEYS: [&str; 7] = ["dt", "t_final", "n_traj", "seed", "stride", "scheme", "window"];

/// Keys accepted by `command`.
pub fn known_keys(command: &str) -> Vec<&'static str> {
    let mut keys = COMMON_KEYS.to_vec();
    keys.push("threads");
    if command != "steady-state" {
        keys.extend(MONTE_CARLO_KEYS);
    }
    if command == "sweep" {
        keys.push("fine_step");
    }
    keys
}

pub fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

fn bad(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config { key: key.to_string(), message: message.into() }
}

/// Parsed file contents: global keys plus per-command sections.
#[derive(Debug, Default)]
pub struct ConfigFile {
    pub global: BTreeMap<String, String>,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut file = ConfigFile::default();
        let mut section: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !COMMANDS.contains(&name) {
                    return Err(bad("config", format!("line {}: unknown section [{name}]", n + 1)));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("config", format!("line {}: expected `key = value`", n + 1)))?;
            let key = normalize_key(key);
            let target = match &section {
                Some(s) => file.sections.entry(s.clone()).or_default(),
                None => &mut file.global,
            };
            target.insert(key, value.trim().to_string());
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Global keys overlaid with the command's section.
    pub fn for_command(&self, command: &str) -> BTreeMap<String, String> {
        let mut out = self.global.clone();
        if let Some(s) = self.sections.get(command) {
            out.extend(s.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        out
    }
}

/// Merged key-value settings of one run, with typed accessors that name the
/// offending key on failure.
#[derive(Clone, Debug)]
pub struct Settings {
    pub command: String,
    values: BTreeMap<String, String>,
}

impl Settings {
    /// File values, then flags; rejects keys the command does not take.
    pub fn merge(
        command: &str,
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let known = known_keys(command);
        let mut values = file;
        values.extend(flags);
        if let Some(k) = values.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(bad(k, format!("not a setting of `{command}`")));
        }
        Ok(Self { command: command.to_string(), values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Records a default so the manifest shows every value used.
    pub fn set_default(&mut self, key: &str, value: impl Into<String>) {
        self.values.entry(key.to_string()).or_insert_with(|| value.into());
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| bad(key, "missing"))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let s = self.required(key)?;
        let x: f64 = s.parse().map_err(|_| bad(key, format!("`{s}` is not a number")))?;
        if !x.is_finite() {
            return Err(bad(key, format!("`{s}` is not finite")));
        }
        Ok(x)
    }

    pub fn positive_f64(&self, key: &str) -> Result<f64, CliError> {
        let x = self.f64(key)?;
        if x <= 0.0 {
            return Err(bad(key, format!("must be > 0, got {x}")));
        }
        Ok(x)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let s = self.required(key)?;
        s.parse().map_err(|_| bad(key, format!("`{s}` is not a non-negative integer")))
    }

    pub fn positive_usize(&self, key: &str) -> Result<usize, CliError> {
        let n = self.usize(key)?;
        if n == 0 {
            return Err(bad(key, "must be ≥ 1"));
        }
        Ok(n)
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        let s = self.required(key)?;
        s.parse().map_err(|_| bad(key, format!("`{s}` is not a non-negative integer")))
    }

    /// A scalar `x` or an inclusive range `min:max:step`.
    pub fn values_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let s = self.required(key)?;
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| -> Result<f64, CliError> {
            p.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(key, format!("`{p}` is not a number")))
        };
        match parts.as_slice() {
            [x] => Ok(vec![num(x)?]),
            [a, b, c] => grid(num(a)?, num(b)?, num(c)?)
                .map_err(|_| bad(key, format!("`{s}` is not a valid min:max:step range"))),
            _ => Err(bad(key, format!("`{s}`: expected a number or min:max:step"))),
        }
    }

    pub fn scalar(&self, key: &str) -> Result<f64, CliError> {
        let v = self.values_list(key)?;
        if v.len() != 1 {
            return Err(bad(key, "expected a single value for this command"));
        }
        Ok(v[0])
    }

    pub fn mode(&self) -> Result<ControlMode, CliError> {
        match self.required("mode")? {
            "none" => Ok(ControlMode::NoFeedback),
            "markovian" => Ok(ControlMode::Markovian),
            "bayesian" => Ok(ControlMode::Bayesian),
            other => Err(bad("mode", format!("`{other}`: expected none, markovian or bayesian"))),
        }
    }

    pub fn scheme(&self) -> Result<StepScheme, CliError> {
        match self.required("scheme")? {
            "positive-map" => Ok(StepScheme::PositiveMap),
            "euler-maruyama" => Ok(StepScheme::EulerMaruyama),
            other => Err(bad("scheme", format!("`{other}`: expected positive-map or euler-maruyama"))),
        }
    }

    pub fn initial(&self) -> Result<DensityMatrix, CliError> {
        parse_initial(self.required("initial")?)
    }
}

/// Named preset or 16 comma-separated complex entries in row-major order
/// (basis `|11⟩, |10⟩, |01⟩, |00⟩`), e.g. `0.5, 0, 0, 0.5i, …`.
pub fn parse_initial(s: &str) -> Result<DensityMatrix, CliError> {
    let named = match s.trim() {
        "00" => Some(DensityMatrix::basis(IDX_00)),
        "01" => Some(DensityMatrix::basis(IDX_01)),
        "10" => Some(DensityMatrix::basis(IDX_10)),
        "11" => Some(DensityMatrix::basis(IDX_11)),
        "singlet" => Some(DensityMatrix::singlet()),
        "mixed" => Some(DensityMatrix::maximally_mixed()),
        _ => None,
    };
    if let Some(rho) = named {
        return Ok(rho);
    }
    let entries: Vec<&str> = s.split(',').map(str::trim).collect();
    if entries.len() != 16 {
        return Err(bad(
            "initial",
            format!("`{s}`: expected 00, 01, 10, 11, singlet, mixed or 16 complex entries"),
        ));
    }
    let mut m = Mat4::zeros();
    for (k, e) in entries.iter().enumerate() {
        let z: C64 = e
            .replace(' ', "")
            .parse()
            .map_err(|_| bad("initial", format!("entry {k}: `{e}` is not a complex number")))?;
        m[(k / 4, k % 4)] = z;
    }
    DensityMatrix::new(m).map_err(|e| bad("initial", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let flags = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        Settings::merge("sweep", BTreeMap::new(), flags).unwrap()
    }

    #[test]
    fn file_sections_and_precedence() {
        let file = ConfigFile::parse(
            "# run\nmode = none\nomega = 1\n[sweep]\nomega = 0:1:0.5\n[trajectory]\nomega = 7\n",
        )
        .unwrap();
        let merged = file.for_command("sweep");
        assert_eq!(merged["omega"], "0:1:0.5");
        assert_eq!(merged["mode"], "none");
        let flags = BTreeMap::from([("mode".to_string(), "markovian".to_string())]);
        let s = Settings::merge("sweep", merged, flags).unwrap();
        assert_eq!(s.mode().unwrap(), ControlMode::Markovian);
        assert_eq!(s.values_list("omega").unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn errors_name_the_key() {
        let err = ConfigFile::parse("[nonsense]\n").unwrap_err();
        assert!(err.to_string().contains("config"));
        let err = Settings::merge("steady-state", BTreeMap::from([("n_traj".into(), "5".into())]), BTreeMap::new())
            .unwrap_err();
        assert!(err.to_string().contains("n_traj"), "{err}");
        let s = settings(&[("dt", "fast"), ("omega", "1:0:0.1"), ("mode", "magic")]);
        assert!(s.positive_f64("dt").unwrap_err().to_string().contains("dt"));
        assert!(s.values_list("omega").unwrap_err().to_string().contains("omega"));
        assert!(s.mode().unwrap_err().to_string().contains("mode"));
    }

    #[test]
    fn initial_states() {
        assert_eq!(parse_initial("singlet").unwrap(), DensityMatrix::singlet());
        let explicit = "0,0,0,0, 0,0.5,-0.5,0, 0,-0.5,0.5,0, 0,0,0,0";
        let rho = parse_initial(explicit).unwrap();
        assert!((rho.matrix() - DensityMatrix::singlet().matrix()).norm() < 1e-15);
        let complex = "0.5,0,0,0.5i, 0,0,0,0, 0,0,0,0, -0.5i,0,0,0.5";
        assert!(parse_initial(complex).is_ok());
        assert!(parse_initial("1,0,0,0").is_err());
        let not_positive = "1,0,0,0, 0,1,0,0, 0,0,-1,0, 0,0,0,0";
        assert!(parse_initial(not_positive).unwrap_err().to_string().contains("initial"));
    }
}
