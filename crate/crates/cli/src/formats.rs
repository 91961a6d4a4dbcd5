//! JSON file formats. Field names are fixed and unknown fields are
//! rejected.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use regret_sched_core::reductions::{
    FourPPInstance, PairingWitness, PartitionInstance, SchedulingReduction,
};
use regret_sched_core::{Instance, JobInterval, RegretReport, Scenario, Schedule, Time};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub lo: Time,
    pub hi: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub machines: usize,
    pub jobs: Vec<JobFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub machines: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub durations: Vec<Time>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub max_regret: Time,
    pub worst_scenario: ScenarioFile,
    pub worst_alternative: ScheduleFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub m: usize,
    #[serde(rename = "B")]
    pub b: Time,
    pub values: Vec<Time>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourPPFile {
    pub values: Vec<Time>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub quadruplets: Vec<[usize; 4]>,
    pub pairing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdFile {
    #[serde(rename = "B")]
    pub big_b: Time,
    pub threshold: Time,
    pub threshold_integral: bool,
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        Self {
            machines: inst.machines(),
            jobs: inst
                .jobs()
                .iter()
                .map(|iv| JobFile {
                    lo: iv.lo,
                    hi: iv.hi,
                })
                .collect(),
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = regret_sched_core::Error;

    fn try_from(f: InstanceFile) -> Result<Self, Self::Error> {
        Instance::new(
            f.machines,
            f.jobs
                .into_iter()
                .map(|j| JobInterval::new(j.lo, j.hi))
                .collect(),
        )
    }
}

impl From<&Schedule> for ScheduleFile {
    fn from(s: &Schedule) -> Self {
        Self {
            machines: s.machines().to_vec(),
        }
    }
}

impl TryFrom<ScheduleFile> for Schedule {
    type Error = regret_sched_core::Error;

    fn try_from(f: ScheduleFile) -> Result<Self, Self::Error> {
        Schedule::new(f.machines)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        Self {
            durations: s.durations().to_vec(),
        }
    }
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = regret_sched_core::Error;

    fn try_from(f: ScenarioFile) -> Result<Self, Self::Error> {
        Scenario::new(f.durations)
    }
}

impl From<&RegretReport> for ReportFile {
    fn from(r: &RegretReport) -> Self {
        Self {
            max_regret: r.max_regret,
            worst_scenario: (&r.worst_scenario).into(),
            worst_alternative: (&r.worst_alternative).into(),
        }
    }
}

impl TryFrom<ReportFile> for RegretReport {
    type Error = regret_sched_core::Error;

    fn try_from(f: ReportFile) -> Result<Self, Self::Error> {
        Ok(RegretReport {
            max_regret: f.max_regret,
            worst_scenario: f.worst_scenario.try_into()?,
            worst_alternative: f.worst_alternative.try_into()?,
        })
    }
}

impl From<&PartitionInstance> for PartitionFile {
    fn from(p: &PartitionInstance) -> Self {
        Self {
            m: p.m(),
            b: p.target(),
            values: p.values().to_vec(),
        }
    }
}

impl TryFrom<PartitionFile> for PartitionInstance {
    type Error = regret_sched_core::Error;

    fn try_from(f: PartitionFile) -> Result<Self, Self::Error> {
        PartitionInstance::new(f.m, f.b, f.values)
    }
}

impl From<&FourPPInstance> for FourPPFile {
    fn from(p: &FourPPInstance) -> Self {
        Self {
            values: p.values().to_vec(),
        }
    }
}

impl TryFrom<FourPPFile> for FourPPInstance {
    type Error = regret_sched_core::Error;

    fn try_from(f: FourPPFile) -> Result<Self, Self::Error> {
        FourPPInstance::new(f.values)
    }
}

impl From<&PairingWitness> for WitnessFile {
    fn from(w: &PairingWitness) -> Self {
        Self {
            quadruplets: w.quadruplets.clone(),
            pairing: w.pairing.clone(),
        }
    }
}

impl From<&SchedulingReduction> for ThresholdFile {
    fn from(t: &SchedulingReduction) -> Self {
        Self {
            big_b: t.big_b,
            threshold: t.threshold,
            threshold_integral: t.threshold_integral,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        source: e,
    })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("file types always serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(read_json::<InstanceFile>(path)?.try_into()?)
}

pub fn read_schedule(path: &Path) -> Result<Schedule, CliError> {
    Ok(read_json::<ScheduleFile>(path)?.try_into()?)
}

pub fn read_scenario(path: &Path) -> Result<Scenario, CliError> {
    Ok(read_json::<ScenarioFile>(path)?.try_into()?)
}

pub fn read_partition(path: &Path) -> Result<PartitionInstance, CliError> {
    Ok(read_json::<PartitionFile>(path)?.try_into()?)
}

pub fn read_four_pp(path: &Path) -> Result<FourPPInstance, CliError> {
    Ok(read_json::<FourPPFile>(path)?.try_into()?)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<(), CliError> {
    write_json(path, &InstanceFile::from(inst))
}

pub fn write_schedule(path: &Path, s: &Schedule) -> Result<(), CliError> {
    write_json(path, &ScheduleFile::from(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<InstanceFile>(r#"{"machines":1,"jobs":[],"extra":0}"#);
        assert!(err.is_err());
        let err = serde_json::from_str::<InstanceFile>(
            r#"{"machines":1,"jobs":[{"lo":0,"hi":1,"mid":0}]}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn partition_file_uses_capital_b() {
        let f: PartitionFile = serde_json::from_str(r#"{"m":1,"B":10,"values":[3,3,4]}"#).unwrap();
        assert_eq!(f.b, 10);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"m":1,"B":10,"values":[3,3,4]}"#
        );
    }
}
