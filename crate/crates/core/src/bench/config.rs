//! TOML benchmark configuration.
//!
//! ```toml
//! n_grid = [16, 32, 64, 128]
//! seeds = [1, 2, 3, 4, 5]
//! metric = "trace"
//!
//! [problem]
//! kind = "grover"
//! n_qubits = 2
//! schedule = "linear"
//! time_scale = 40.0
//!
//! [[schemes]]
//! family = "hdr"
//! base = "Ost4"
//!
//! [[schemes]]
//! family = "mpf"
//! variant = "hdr"
//! k = [1, 2]
//!
//! [output]
//! csv = "grover.csv"
//! svg = "grover.svg"
//!
//! [[checks.slope]]
//! series = "hdr-Ost4"
//! min = -4.5
//! max = -3.5
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::ProblemDescription;
use crate::splitting::BaseScheme;

/// Overrides `output.dir` when set.
pub const OUT_DIR_ENV: &str = "TDSIM_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub problem: ProblemDescription,
    pub n_grid: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub metric: Metric,
    #[serde(default = "default_reference_tol")]
    pub reference_tol: f64,
    pub schemes: Vec<SchemeSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub checks: Checks,
}

fn default_seeds() -> Vec<u64> {
    (1..=5).collect()
}

fn default_reference_tol() -> f64 {
    1e-12
}

/// How a final approximation is compared with the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Trace distance between final states started from the problem's initial state.
    #[default]
    Trace,
    /// Spectral-norm distance between the composed operator and the reference propagator.
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pointwise,
    Hdr,
    Iacs,
    Mpf,
    Qdrift,
    Taylor2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Pointwise => "pointwise",
            Family::Hdr => "hdr",
            Family::Iacs => "iacs",
            Family::Mpf => "mpf",
            Family::Qdrift => "qdrift",
            Family::Taylor2 => "taylor2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Second-order step inside each MPF branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MpfVariant {
    #[default]
    Pointwise,
    Hdr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub family: Family,
    /// Required by the product families.
    #[serde(default)]
    pub base: Option<BaseScheme>,
    /// Pointwise family only: number of terms swept before the midpoint switch.
    #[serde(default = "default_lambda_prime")]
    pub lambda_prime: usize,
    /// MPF step counts.
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub variant: MpfVariant,
    /// Replaces the generated scheme name in the CSV.
    #[serde(default)]
    pub label: Option<String>,
}

fn default_lambda_prime() -> usize {
    1
}

impl SchemeSpec {
    pub fn product(family: Family, base: BaseScheme) -> Self {
        Self {
            family,
            base: Some(base),
            lambda_prime: default_lambda_prime(),
            k: Vec::new(),
            variant: MpfVariant::default(),
            label: None,
        }
    }

    pub fn mpf(variant: MpfVariant, k: Vec<usize>) -> Self {
        Self {
            family: Family::Mpf,
            base: None,
            lambda_prime: default_lambda_prime(),
            k,
            variant,
            label: None,
        }
    }

    pub fn plain(family: Family) -> Self {
        Self {
            family,
            base: None,
            lambda_prime: default_lambda_prime(),
            k: Vec::new(),
            variant: MpfVariant::default(),
            label: None,
        }
    }

    /// Value of the CSV `scheme` column.
    pub fn scheme_name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match self.family {
            Family::Pointwise => format!("pointwise-l{}", self.lambda_prime),
            Family::Mpf => {
                let v = match self.variant {
                    MpfVariant::Pointwise => "pointwise",
                    MpfVariant::Hdr => "hdr",
                };
                let k: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
                format!("mpf-{v}-k{}", k.join("-"))
            }
            f => f.name().to_string(),
        }
    }

    /// Value of the CSV `base` column.
    pub fn base_name(&self) -> &'static str {
        match self.family {
            Family::Mpf => "Strang",
            Family::Qdrift | Family::Taylor2 => "none",
            _ => self.base.map(|b| b.name()).unwrap_or("none"),
        }
    }

    /// Identifier used by checks and plot legends.
    pub fn series_id(&self) -> String {
        match self.family {
            Family::Pointwise | Family::Hdr | Family::Iacs => {
                format!("{}-{}", self.scheme_name(), self.base_name())
            }
            _ => self.scheme_name(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("scheme {}: {m}", self.series_id())));
        match self.family {
            Family::Pointwise | Family::Hdr | Family::Iacs if self.base.is_none() => {
                bad(format!("family {} needs a base", self.family))
            }
            Family::Mpf if self.k.is_empty() => bad("mpf needs a nonempty k list".into()),
            Family::Mpf | Family::Qdrift | Family::Taylor2 if self.base.is_some() => {
                bad(format!("family {} takes no base", self.family))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_csv")]
    pub csv: PathBuf,
    #[serde(default)]
    pub svg: Option<PathBuf>,
    /// When false the `seconds` column is written as zero so reruns give identical bytes.
    #[serde(default)]
    pub timings: bool,
    /// Slope of the dashed guide line in the plot.
    #[serde(default = "default_guide")]
    pub guide_slope: f64,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_csv() -> PathBuf {
    PathBuf::from("bench.csv")
}

fn default_guide() -> f64 {
    -4.0
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            csv: default_csv(),
            svg: None,
            timings: false,
            guide_slope: default_guide(),
        }
    }
}

impl OutputSpec {
    /// Output directory, honoring [`OUT_DIR_ENV`].
    pub fn resolved_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => self.dir.clone(),
        }
    }

    pub fn csv_path(&self) -> PathBuf {
        self.resolved_dir().join(&self.csv)
    }

    pub fn svg_path(&self) -> Option<PathBuf> {
        self.svg.as_ref().map(|s| self.resolved_dir().join(s))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    #[serde(default)]
    pub slope: Vec<SlopeCheck>,
    #[serde(default)]
    pub ordering: Vec<OrderingCheck>,
    /// Require errors inside the fit window to decrease with `N`.
    #[serde(default)]
    pub monotone: bool,
}

/// Fitted log-log slope of error against gate count must lie in `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeCheck {
    pub series: String,
    pub min: f64,
    pub max: f64,
}

/// `better` must not exceed `worse` on at least `min_fraction` of the shared
/// grid points where both errors are inside the fit window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderingCheck {
    pub better: String,
    pub worse: String,
    #[serde(default = "default_min_fraction")]
    pub min_fraction: f64,
}

fn default_min_fraction() -> f64 {
    0.7
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        if self.n_grid.is_empty() || self.n_grid[0] == 0 {
            return Err(Error::Config("n_grid must be nonempty and positive".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_grid must be strictly increasing".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be nonempty".into()));
        }
        if !(self.reference_tol > 0.0) {
            return Err(Error::Config("reference_tol must be positive".into()));
        }
        for s in &self.schemes {
            s.validate()?;
        }
        let ids = self.series_ids();
        for i in 0..ids.len() {
            if ids[i + 1..].contains(&ids[i]) {
                return Err(Error::Config(format!("duplicate series {}", ids[i])));
            }
        }
        let known = |name: &str| -> Result<()> {
            if ids.iter().any(|i| i == name) {
                Ok(())
            } else {
                Err(Error::Config(format!("check refers to unknown series {name}")))
            }
        };
        for c in &self.checks.slope {
            known(&c.series)?;
            if !(c.min <= c.max) {
                return Err(Error::Config(format!("slope range [{}, {}] is empty", c.min, c.max)));
            }
        }
        for c in &self.checks.ordering {
            known(&c.better)?;
            known(&c.worse)?;
            if !(0.0..=1.0).contains(&c.min_fraction) {
                return Err(Error::Config("min_fraction must lie in [0, 1]".into()));
            }
        }
        Ok(())
    }

    pub fn series_ids(&self) -> Vec<String> {
        self.schemes.iter().map(|s| s.series_id()).collect()
    }

    /// Seeds that give distinct instances; deterministic problems run once.
    pub fn effective_seeds(&self) -> Vec<u64> {
        if self.problem.is_random() {
            self.seeds.clone()
        } else {
            self.seeds[..1].to_vec()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
n_grid = [8, 16]

[problem]
kind = "grover"
n_qubits = 2
schedule = "linear"
time_scale = 40.0

[[schemes]]
family = "hdr"
base = "Ost4"

[[schemes]]
family = "mpf"
variant = "hdr"
k = [1, 2]

[[checks.slope]]
series = "hdr-Ost4"
min = -4.5
max = -3.5
"#;

    #[test]
    fn parses_with_defaults() {
        let c = BenchConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.seeds, vec![1, 2, 3, 4, 5]);
        assert_eq!(c.metric, Metric::Trace);
        assert_eq!(c.series_ids(), vec!["hdr-Ost4", "mpf-hdr-k1-2"]);
        assert_eq!(c.schemes[0].lambda_prime, 1);
        assert!(!c.output.timings);
        let again = BenchConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_configs() {
        let grid = SAMPLE.replace("[8, 16]", "[16, 8]");
        assert!(BenchConfig::from_toml(&grid).is_err());
        let unknown = SAMPLE.replace("series = \"hdr-Ost4\"", "series = \"hdr-FRS\"");
        assert!(BenchConfig::from_toml(&unknown).is_err());
        let typo = SAMPLE.replace("variant = \"hdr\"", "variant = \"hdr\"\nbase = \"Ost4\"");
        assert!(BenchConfig::from_toml(&typo).is_err());
        let extra = SAMPLE.replace("n_grid", "bogus = 1\nn_grid");
        assert!(BenchConfig::from_toml(&extra).is_err());
        let none = SAMPLE.split("[[schemes]]").next().unwrap().to_string();
        assert!(BenchConfig::from_toml(&none).is_err());
    }

    #[test]
    fn ising_runs_one_seed() {
        let text = SAMPLE.replace(
            "kind = \"grover\"\nn_qubits = 2\nschedule = \"linear\"\ntime_scale = 40.0",
            "kind = \"ising\"\nsites = 2\nh_x = 1.0",
        );
        let c = BenchConfig::from_toml(&text).unwrap();
        assert_eq!(c.effective_seeds(), vec![1]);
    }
}
