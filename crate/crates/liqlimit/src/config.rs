//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Unknown or repeated keys are rejected with the offending line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use liqlimit_core::{ImpactParams, LiquidationProblem, MarketParams, OptionSpec, StrategyKind};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

/// Parsed assignments restricted to a fixed key set.
#[derive(Debug)]
struct Table {
    entries: BTreeMap<String, Entry>,
}

impl Table {
    fn parse(text: &str, allowed: &[&'static str]) -> Result<Self> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                Error::config(line, format!("expected `key = value`, found `{content}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !allowed.contains(&key) {
                return Err(Error::config(line, format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(Error::config(line, format!("empty value for `{key}`")));
            }
            if let Some(prev) = entries.get(key) {
                return Err(Error::config(
                    line,
                    format!("duplicate key `{key}` (first set on line {})", prev.line),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Self { entries })
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    fn raw(&self, key: &'static str) -> Result<&Entry> {
        self.entries.get(key).ok_or(Error::MissingKey(key))
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<T> {
        let e = self.raw(key)?;
        parse_scalar(e.line, key, &e.value)
    }

    fn get_or<T: FromStr>(&self, key: &'static str, default: T) -> Result<T> {
        match self.entries.get(key) {
            Some(e) => parse_scalar(e.line, key, &e.value),
            None => Ok(default),
        }
    }

    fn list(&self, key: &'static str) -> Result<Vec<f64>> {
        let e = self.raw(key)?;
        let out = e
            .value
            .split(',')
            .map(|s| parse_scalar::<f64>(e.line, key, s.trim()))
            .collect::<Result<Vec<_>>>()?;
        if out.is_empty() {
            return Err(Error::config(e.line, format!("`{key}` is an empty list")));
        }
        Ok(out)
    }

    fn path(&self, key: &'static str) -> Option<PathBuf> {
        self.entries.get(key).map(|e| PathBuf::from(&e.value))
    }

    fn check(&self, ok: bool, key: &'static str, message: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::config(
                self.line_of(key),
                format!("`{key}`: {message}"),
            ))
        }
    }
}

fn parse_scalar<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    let parsed: T = value
        .parse()
        .map_err(|_| Error::config(line, format!("cannot parse `{value}` for `{key}`")))?;
    Ok(parsed)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_strategy(line: usize, value: &str) -> Result<StrategyKind> {
    match value {
        "asymptotic" => Ok(StrategyKind::Asymptotic),
        "benchmark_sinh" => Ok(StrategyKind::BenchmarkSinh),
        "none" => Ok(StrategyKind::None),
        other => Err(Error::config(
            line,
            format!("unknown strategy `{other}` (expected asymptotic, benchmark_sinh or none)"),
        )),
    }
}

/// Settings for `sweep` and `trajectory`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub market: MarketParams,
    pub option: OptionSpec,
    pub phi0: f64,
    pub a: f64,
    pub lambda_sweep: Vec<f64>,
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub strategy: StrategyKind,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 14] = [
        "s0",
        "mu",
        "sigma",
        "horizon",
        "theta",
        "strike",
        "phi0",
        "a",
        "lambda_sweep",
        "n_paths",
        "n_steps",
        "seed",
        "strategy",
        "output",
    ];

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = Table::parse(text, &Self::KEYS)?;
        let (s0, mu, sigma, horizon): (f64, f64, f64, f64) = (
            t.get("s0")?,
            t.get_or("mu", 0.0)?,
            t.get("sigma")?,
            t.get("horizon")?,
        );
        t.check(s0.is_finite(), "s0", "must be finite")?;
        t.check(mu.is_finite(), "mu", "must be finite")?;
        t.check(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            "must be positive",
        )?;
        t.check(
            horizon > 0.0 && horizon.is_finite(),
            "horizon",
            "must be positive",
        )?;
        let market = MarketParams::new(s0, mu, sigma, horizon)?;

        let theta: f64 = t.get_or("theta", 0.0)?;
        let strike: f64 = t.get_or("strike", 0.0)?;
        t.check(theta.is_finite(), "theta", "must be finite")?;
        t.check(strike.is_finite(), "strike", "must be finite")?;
        let option = OptionSpec::new(theta, strike)?;

        let phi0: f64 = t.get("phi0")?;
        t.check(phi0.is_finite(), "phi0", "must be finite")?;
        let a: f64 = t.get("a")?;
        t.check(a > 0.0 && a.is_finite(), "a", "must be positive")?;

        let lambda_sweep = t.list("lambda_sweep")?;
        t.check(
            lambda_sweep.iter().all(|&l| l > 0.0 && l < 1.0),
            "lambda_sweep",
            "values must lie in (0, 1)",
        )?;
        t.check(
            lambda_sweep.windows(2).all(|w| w[1] < w[0]),
            "lambda_sweep",
            "values must be strictly decreasing",
        )?;

        let n_paths: usize = t.get("n_paths")?;
        t.check(n_paths >= 2, "n_paths", "must be at least 2")?;
        let n_steps: usize = t.get("n_steps")?;
        t.check(n_steps >= 100, "n_steps", "must be at least 100")?;
        let seed: u64 = t.get("seed")?;
        let strategy = match t.entries.get("strategy") {
            Some(e) => parse_strategy(e.line, &e.value)?,
            None => StrategyKind::Asymptotic,
        };
        t.check(
            strategy != StrategyKind::None || phi0 == 0.0,
            "strategy",
            "`none` requires phi0 = 0",
        )?;

        Ok(Self {
            market,
            option,
            phi0,
            a,
            lambda_sweep,
            n_paths,
            n_steps,
            seed,
            strategy,
            output: t.path("output"),
        })
    }

    pub fn problem(&self, lambda: f64) -> Result<LiquidationProblem> {
        Ok(LiquidationProblem {
            market: self.market,
            impact: ImpactParams::new(lambda, self.a)?,
            option: self.option,
            phi0: self.phi0,
        })
    }
}

/// Settings for `var-table`: the Cartesian lattice of variational problems.
#[derive(Debug, Clone, PartialEq)]
pub struct VarTableConfig {
    pub sigma: f64,
    pub a: f64,
    pub lambdas: Vec<f64>,
    pub xs: Vec<f64>,
    pub phis: Vec<f64>,
    pub t_ends: Vec<f64>,
    pub n_grid: usize,
    pub output: Option<PathBuf>,
}

impl VarTableConfig {
    pub const KEYS: [&'static str; 8] = [
        "sigma", "a", "lambdas", "xs", "phis", "t_ends", "n_grid", "output",
    ];

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = Table::parse(text, &Self::KEYS)?;
        let sigma: f64 = t.get("sigma")?;
        t.check(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            "must be positive",
        )?;
        let a: f64 = t.get("a")?;
        t.check(a > 0.0 && a.is_finite(), "a", "must be positive")?;
        let lambdas = t.list("lambdas")?;
        t.check(
            lambdas.iter().all(|&l| l > 0.0 && l < 1.0),
            "lambdas",
            "values must lie in (0, 1)",
        )?;
        let xs = t.list("xs")?;
        t.check(
            xs.iter().all(|v| v.is_finite()),
            "xs",
            "values must be finite",
        )?;
        let phis = t.list("phis")?;
        t.check(
            phis.iter().all(|v| v.is_finite()),
            "phis",
            "values must be finite",
        )?;
        let t_ends = t.list("t_ends")?;
        t.check(
            t_ends.iter().all(|&v| v > 0.0 && v.is_finite()),
            "t_ends",
            "values must be positive",
        )?;
        let n_grid: usize = t.get_or("n_grid", 2000)?;
        t.check(n_grid >= 100, "n_grid", "must be at least 100")?;
        Ok(Self {
            sigma,
            a,
            lambdas,
            xs,
            phis,
            t_ends,
            n_grid,
            output: t.path("output"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
# ATM call
s0 = 0
mu = 0
sigma = 0.2
horizon = 1
theta = 1
strike = 0
phi0 = 0.5
a = 0.25
lambda_sweep = 0.4, 0.2, 0.1
n_paths = 1000
n_steps = 1000
seed = 7   # trailing comment
strategy = asymptotic
";

    #[test]
    fn parses_a_complete_file() {
        let c = ExperimentConfig::parse(GOOD).unwrap();
        assert_eq!(c.lambda_sweep, vec![0.4, 0.2, 0.1]);
        assert_eq!(c.seed, 7);
        assert_eq!(c.strategy, StrategyKind::Asymptotic);
        assert!(c.output.is_none());
        assert_eq!(c.problem(0.2).unwrap().alpha(), 0.25 / 0.2);
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Config { line, .. } => line,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let text = format!("{GOOD}volatility = 3\n");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 15);
    }

    #[test]
    fn sweep_must_decrease() {
        let text = GOOD.replace("0.4, 0.2, 0.1", "0.1, 0.2");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 10);
        let text = GOOD.replace("0.4, 0.2, 0.1", "1.0, 0.5");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 10);
    }

    #[test]
    fn rejects_bad_values() {
        let text = GOOD.replace("n_steps = 1000", "n_steps = 99");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 12);
        let text = GOOD.replace("asymptotic", "greedy");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 14);
        let text = GOOD.replace("sigma = 0.2", "sigma = abc");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 4);
        let text = format!("{GOOD}seed = 3\n");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 15);
        let text = GOOD.replace("a = 0.25", "a 0.25");
        assert_eq!(line_of(ExperimentConfig::parse(&text).unwrap_err()), 9);
    }

    #[test]
    fn missing_key() {
        let text = GOOD.replace("phi0 = 0.5\n", "");
        assert!(matches!(
            ExperimentConfig::parse(&text),
            Err(Error::MissingKey("phi0"))
        ));
    }

    #[test]
    fn var_table_defaults() {
        let c = VarTableConfig::parse("sigma=1\na=1\nlambdas=0.2,0.1\nxs=1\nphis=0.5\nt_ends=1\n")
            .unwrap();
        assert_eq!(c.n_grid, 2000);
        assert_eq!(c.lambdas.len(), 2);
        assert!(
            VarTableConfig::parse("sigma=1\na=1\nlambdas=2\nxs=1\nphis=0\nt_ends=1\n").is_err()
        );
    }
}
