//! Batch analysis over a list of systems, one JSON line per system.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toric_linsys::io::{DivisorSpec, SystemFile};
use toric_linsys::linsys::derive_seed;
use toric_linsys::{analyze, RankConfig, SpecialityReport};

use crate::input::{example, InputError};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub tasks: Vec<TaskSpec>,
}

/// Either a full system document or a catalog example with a standard-form class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
    #[serde(default)]
    pub multiplicities: Vec<u32>,
}

impl TaskSpec {
    fn from_example(example: &str, class: Vec<i64>, multiplicities: Vec<u32>) -> Self {
        let name = format!("{example} class={class:?} mults={multiplicities:?}");
        TaskSpec { name: Some(name), system: None, example: Some(example.into()), class: Some(class), multiplicities }
    }

    fn resolve(&self) -> Result<SystemFile, InputError> {
        match (&self.system, &self.example) {
            (Some(sys), None) => {
                let mut sys = sys.clone();
                if !self.multiplicities.is_empty() {
                    sys.multiplicities = self.multiplicities.clone();
                }
                Ok(sys)
            }
            (None, Some(name)) => {
                let ex = example(name)?;
                let class = match &self.class {
                    Some(c) => c.iter().map(|&x| x.into()).collect(),
                    None => ex.default_class().ok_or_else(|| InputError::new("task needs a class", None))?,
                };
                Ok(SystemFile { fan: ex.fan(), divisor: DivisorSpec::Standard(class), multiplicities: self.multiplicities.clone() })
            }
            _ => Err(InputError::new("task needs exactly one of \"system\" and \"example\"", None)),
        }
    }
}

pub fn preset(name: &str) -> Result<Vec<TaskSpec>, InputError> {
    match name {
        "p2-single" => Ok((1..=6)
            .flat_map(|d| (1..=4).map(move |mu| TaskSpec::from_example("pn:2", vec![d], vec![mu])))
            .collect()),
        "f1-family" => Ok((2..=6)
            .flat_map(|n| {
                (1..=2).map(move |m: i64| {
                    let count = (n / (m + 1)) as usize;
                    TaskSpec::from_example("hirzebruch:1", vec![n, m], vec![(m + 1) as u32; count])
                })
            })
            .collect()),
        other => Err(InputError::new(format!("unknown preset {other:?}; expected p2-single or f1-family"), Some("--preset".into()))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<SpecialityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub tasks: usize,
    pub ok: usize,
    pub failed: usize,
    pub special: usize,
    pub toric_special: usize,
}

/// Runs every task on the worker pool; records come back in task order.
pub fn run(tasks: &[TaskSpec], cfg: &RankConfig) -> Vec<Record> {
    tasks
        .par_iter()
        .enumerate()
        .map(|(index, task)| {
            let seed = derive_seed(cfg.seed, index as u64);
            let outcome = task
                .resolve()
                .map_err(|e| e.to_string())
                .and_then(|sys| sys.linear_system().map_err(|e| e.to_string()))
                .and_then(|ls| analyze(&ls, &cfg.with_seed(seed)).map_err(|e| e.to_string()));
            let (report, error) = match outcome {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e)),
            };
            Record { index, name: task.name.clone(), seed, report, error }
        })
        .collect()
}

pub fn write_records<W: Write>(records: &[Record], mut out: W) -> std::io::Result<Summary> {
    let mut summary = Summary { tasks: records.len(), ..Summary::default() };
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
        match &r.report {
            Some(rep) => {
                summary.ok += 1;
                summary.special += usize::from(rep.special);
                summary.toric_special += usize::from(rep.toric_special);
            }
            None => summary.failed += 1,
        }
    }
    out.flush()?;
    Ok(summary)
}
