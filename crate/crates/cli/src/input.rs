//! Loading fans, polytopes, systems and certificates from files or the example catalog.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use toric_linsys::catalog::CatalogExample;
use toric_linsys::io::{DivisorSpec, SystemFile};
use toric_linsys::{Fan, LatticePolytope, LatticeVector};

/// Malformed input; reported as `{"error": ..., "path": ...}` with exit code 1.
#[derive(Debug)]
pub struct InputError {
    pub error: String,
    pub path: Option<String>,
}

impl InputError {
    pub fn new(error: impl Into<String>, path: impl Into<Option<String>>) -> Self {
        InputError { error: error.into(), path: path.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(p) => write!(f, "{} (at {p})", self.error),
            None => f.write_str(&self.error),
        }
    }
}

impl std::error::Error for InputError {}

pub fn read_json<T: DeserializeOwned>(file: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(file).map_err(|e| InputError::new(format!("cannot read {}: {e}", file.display()), None))?;
    parse_json(&text).map_err(|e| InputError::new(format!("{}: {}", file.display(), e.error), e.path))
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError::new(e.into_inner().to_string(), path)
    })
}

pub fn example(name: &str) -> Result<CatalogExample, InputError> {
    name.parse().map_err(|e: toric_linsys::Error| InputError::new(e.to_string(), Some("--example".into())))
}

pub fn int_list(text: &str, flag: &str) -> Result<Vec<i64>, InputError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| InputError::new(format!("not an integer: {t:?}"), Some(flag.to_string()))))
        .collect()
}

pub fn mult_list(text: &str) -> Result<Vec<u32>, InputError> {
    int_list(text, "--mults")?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| InputError::new(format!("multiplicity {x} must be nonnegative"), Some("--mults".into()))))
        .collect()
}

pub fn vertex(text: &str) -> Result<LatticeVector, InputError> {
    Ok(LatticeVector::from_i64s(&int_list(text, "--vertex")?))
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Source {
    /// Fan JSON file
    #[arg(long)]
    pub fan: Option<std::path::PathBuf>,
    /// Catalog entry: pn:<n>, p1n:<n>, hirzebruch:<a>, bl3p2, box:<a1>x<a2>...
    #[arg(long)]
    pub example: Option<String>,
}

impl Source {
    pub fn fan(&self) -> Result<Fan, InputError> {
        match (&self.fan, &self.example) {
            (Some(path), None) => read_json(path),
            (None, Some(name)) => Ok(example(name)?.fan()),
            _ => Err(InputError::new("exactly one of --fan and --example is required", None)),
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct SystemSource {
    /// System JSON file: {"fan", "divisor", "multiplicities"}
    #[arg(long)]
    pub system: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub source: Source,
    /// Divisor JSON file: {"coeffs": [...]} or {"standard": [...]}
    #[arg(long)]
    pub divisor: Option<std::path::PathBuf>,
    /// Standard-form class, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    /// Point multiplicities, comma separated
    #[arg(long)]
    pub mults: Option<String>,
}

impl SystemSource {
    pub fn system_file(&self) -> Result<SystemFile, InputError> {
        if let Some(path) = &self.system {
            if self.source.fan.is_some() || self.source.example.is_some() || self.divisor.is_some() || self.class.is_some() {
                return Err(InputError::new("--system cannot be combined with --fan, --example, --divisor or --class", None));
            }
            let mut file: SystemFile = read_json(path)?;
            if let Some(m) = &self.mults {
                file.multiplicities = mult_list(m)?;
            }
            return Ok(file);
        }
        let fan = self.source.fan()?;
        let divisor = match (&self.divisor, &self.class) {
            (Some(path), None) => read_json::<DivisorSpec>(path)?,
            (None, Some(class)) => DivisorSpec::Standard(int_list(class, "--class")?.into_iter().map(Into::into).collect()),
            (None, None) => match self.source.example.as_deref().map(example).transpose()?.and_then(|e| e.default_class()) {
                Some(class) => DivisorSpec::Standard(class),
                None => return Err(InputError::new("a divisor is required (--divisor or --class)", None)),
            },
            (Some(_), Some(_)) => return Err(InputError::new("--divisor and --class are mutually exclusive", None)),
        };
        let multiplicities = self.mults.as_deref().map(mult_list).transpose()?.unwrap_or_default();
        Ok(SystemFile { fan, divisor, multiplicities })
    }
}

pub fn polytope(path: Option<&Path>, example_name: Option<&str>) -> Result<LatticePolytope, InputError> {
    match (path, example_name) {
        (Some(p), None) => read_json(p),
        (None, Some(name)) => Ok(example(name)?.polytope()),
        _ => Err(InputError::new("exactly one of --polytope and --example is required", None)),
    }
}
