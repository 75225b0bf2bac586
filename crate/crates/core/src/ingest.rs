//! Parsing and validation of tablet recordings and cohort manifests.
//!
//! Recording files are comma-delimited UTF-8 with a
//! `t,x,y,z,pressure,azimuth,altitude` header, optionally preceded by a
//! `#rate=<hz>` pragma. The `t` column holds seconds; a column that is
//! exactly the row index (0, 1, 2, ...) is treated as sample indices and
//! converted to seconds using the sample rate.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NOMINAL_RATE_HZ: f64 = 180.0;

/// The writing task a recording captures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    Spiral,
    Sentence,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Spiral => write!(f, "spiral"),
            Task::Sentence => write!(f, "sentence"),
        }
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spiral" => Ok(Task::Spiral),
            "sentence" => Ok(Task::Sentence),
            other => Err(Error::input(format!("unknown task `{other}`"))),
        }
    }
}

/// One timestamped six-channel pen sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TabletSample {
    /// Seconds since recording start.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Pen-to-surface distance; 0 while on-surface.
    pub z: f64,
    pub pressure: f64,
    /// Degrees in [0, 360).
    pub azimuth: f64,
    /// Degrees in [0, 90].
    pub altitude: f64,
}

impl TabletSample {
    /// Channel-range checks shared by the parser and the generators.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(format!("timestamp {} out of range", self.t));
        }
        if self.pressure < 0.0 {
            return Err(format!("pressure {} is negative", self.pressure));
        }
        if self.z < 0.0 {
            return Err(format!("z {} is negative", self.z));
        }
        if self.z > 0.0 && self.pressure != 0.0 {
            return Err("in-air sample carries nonzero pressure".to_string());
        }
        if !(0.0..360.0).contains(&self.azimuth) {
            return Err(format!("azimuth {} outside [0, 360)", self.azimuth));
        }
        if !(0.0..=90.0).contains(&self.altitude) {
            return Err(format!("altitude {} outside [0, 90]", self.altitude));
        }
        Ok(())
    }
}

/// An ordered sequence of samples for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    samples: Vec<TabletSample>,
    pub task: Task,
    pub sample_rate: f64,
}

impl Recording {
    pub fn new(samples: Vec<TabletSample>, task: Task, sample_rate: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::input(format!(
                "recording needs at least 2 samples, found {}",
                samples.len()
            )));
        }
        if !(sample_rate > 0.0) {
            return Err(Error::input("sample rate must be positive"));
        }
        for pair in samples.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::input("timestamps must be strictly increasing"));
            }
        }
        for (i, s) in samples.iter().enumerate() {
            s.validate()
                .map_err(|msg| Error::input(format!("sample {i}: {msg}")))?;
        }
        Ok(Recording {
            samples,
            task,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[TabletSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Cohort membership label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    Pd,
    EHc,
    YHc,
    ValidationPd,
    ValidationHc,
}

impl Group {
    /// Groups whose members are patients (and therefore carry a motor score).
    pub fn is_pd(self) -> bool {
        matches!(self, Group::Pd | Group::ValidationPd)
    }

    /// Groups reserved for the held-out validation workflow; the evaluation
    /// harness never trains on them.
    pub fn is_validation(self) -> bool {
        matches!(self, Group::ValidationPd | Group::ValidationHc)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Group::Pd => "PD",
            Group::EHc => "eHC",
            Group::YHc => "yHC",
            Group::ValidationPd => "ValidationPD",
            Group::ValidationHc => "ValidationHC",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PD" => Ok(Group::Pd),
            "eHC" => Ok(Group::EHc),
            "yHC" => Ok(Group::YHc),
            "ValidationPD" => Ok(Group::ValidationPd),
            "ValidationHC" => Ok(Group::ValidationHc),
            other => Err(Error::input(format!("unknown group `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sex {
    M,
    F,
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sex::M => write!(f, "M"),
            Sex::F => write!(f, "F"),
        }
    }
}

impl FromStr for Sex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Sex::M),
            "F" | "f" => Ok(Sex::F),
            other => Err(Error::input(format!("unknown sex `{other}`"))),
        }
    }
}

/// Subject metadata from the cohort manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord {
    pub id: String,
    pub group: Group,
    pub age: f64,
    pub sex: Sex,
    /// Motor score, 0–132. Present exactly for PD groups.
    pub updrs3: Option<u32>,
    pub years_post: Option<f64>,
}

impl SubjectRecord {
    fn validate(&self) -> Result<()> {
        if self.group.is_pd() != self.updrs3.is_some() {
            return Err(Error::input(format!(
                "subject {}: updrs3 must be present exactly for PD groups",
                self.id
            )));
        }
        if let Some(u) = self.updrs3 {
            if u > 132 {
                return Err(Error::input(format!(
                    "subject {}: updrs3 {} above 132",
                    self.id, u
                )));
            }
        }
        Ok(())
    }
}

/// A labeled collection of recordings keyed by subject id.
#[derive(Debug, Clone, Default)]
pub struct Cohort {
    pub subjects: Vec<SubjectRecord>,
    pub recordings: BTreeMap<String, Vec<Recording>>,
}

impl Cohort {
    pub fn subject(&self, id: &str) -> Option<&SubjectRecord> {
        self.subjects.iter().find(|s| s.id == id)
    }
}

const RECORDING_HEADER: &str = "t,x,y,z,pressure,azimuth,altitude";

/// Parses one recording file. Errors carry the physical line number.
pub fn parse_recording(bytes: &[u8], task: Task) -> Result<Recording> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::parse(1, "file is not UTF-8"))?;
    let mut rate = NOMINAL_RATE_HZ;
    let mut lines = text.lines().enumerate().peekable();

    if let Some((_, line)) = lines.peek() {
        if let Some(rest) = line.strip_prefix("#rate=") {
            rate = rest
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(1, format!("bad rate pragma `{line}`")))?;
            if !(rate > 0.0) {
                return Err(Error::parse(1, "rate must be positive"));
            }
            lines.next();
        }
    }

    let (header_idx, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    if header.trim() != RECORDING_HEADER {
        return Err(Error::parse(
            header_idx + 1,
            format!("expected header `{RECORDING_HEADER}`"),
        ));
    }

    let mut samples = Vec::new();
    let mut raw_t = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::parse(
                lineno,
                format!("expected 7 fields, found {}", fields.len()),
            ));
        }
        let mut nums = [0.0f64; 7];
        for (k, f) in fields.iter().enumerate() {
            nums[k] = f
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno, format!("bad number `{f}`")))?;
        }
        let sample = TabletSample {
            t: nums[0],
            x: nums[1],
            y: nums[2],
            z: nums[3],
            pressure: nums[4],
            azimuth: nums[5],
            altitude: nums[6],
        };
        sample
            .validate()
            .map_err(|msg| Error::parse(lineno, msg))?;
        raw_t.push((lineno, nums[0]));
        samples.push(sample);
    }
    if samples.is_empty() {
        return Err(Error::parse(header_idx + 2, "no samples"));
    }

    // Sample-index timestamps: an integer column equal to the row index.
    let indexed = samples.len() > 1
        && raw_t
            .iter()
            .enumerate()
            .all(|(i, (_, t))| *t == i as f64);
    if indexed {
        for (i, s) in samples.iter_mut().enumerate() {
            s.t = i as f64 / rate;
        }
    }
    for w in raw_t.windows(2) {
        if w[1].1 <= w[0].1 {
            return Err(Error::parse(w[1].0, "timestamps not strictly increasing"));
        }
    }
    Recording::new(samples, task, rate)
}

/// Writes a recording in the file format accepted by [`parse_recording`].
/// Floats use the shortest round-trip encoding, so parse → serialize →
/// parse is the identity on every channel.
pub fn serialize_recording(rec: &Recording) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#rate={}", rec.sample_rate);
    out.push_str(RECORDING_HEADER);
    out.push('\n');
    for s in rec.samples() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t, s.x, s.y, s.z, s.pressure, s.azimuth, s.altitude
        );
    }
    out
}

/// One manifest row: a recording file attributed to a subject.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub subject_id: String,
    pub task: Task,
    pub path: String,
}

/// Parsed cohort manifest; recordings are resolved relative to the manifest
/// location by [`CohortManifest::load`].
#[derive(Debug, Clone, Default)]
pub struct CohortManifest {
    pub subjects: Vec<SubjectRecord>,
    pub entries: Vec<ManifestEntry>,
}

const MANIFEST_HEADER: &str = "id,group,age,sex,updrs3,years_post,task,path";

/// Parses and validates a cohort manifest.
///
/// A subject may appear on several rows (one per recording) as long as the
/// metadata repeats exactly; conflicting metadata or a repeated recording
/// path is a duplicate-id error.
pub fn parse_cohort_manifest(bytes: &[u8]) -> Result<CohortManifest> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::parse(1, "file is not UTF-8"))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty manifest"))?;
    if header.trim() != MANIFEST_HEADER {
        return Err(Error::parse(
            1,
            format!("expected header `{MANIFEST_HEADER}`"),
        ));
    }

    let mut manifest = CohortManifest::default();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::parse(
                lineno,
                format!("expected 8 fields, found {}", fields.len()),
            ));
        }
        let group: Group = fields[1]
            .parse()
            .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
        let age: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(lineno, "bad age"))?;
        let sex: Sex = fields[3]
            .parse()
            .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
        let updrs3 = if fields[4].is_empty() {
            None
        } else {
            Some(
                fields[4]
                    .parse::<u32>()
                    .map_err(|_| Error::parse(lineno, "bad updrs3"))?,
            )
        };
        let years_post = if fields[5].is_empty() {
            None
        } else {
            Some(
                fields[5]
                    .parse::<f64>()
                    .map_err(|_| Error::parse(lineno, "bad years_post"))?,
            )
        };
        let task: Task = fields[6]
            .parse()
            .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
        let subject = SubjectRecord {
            id: fields[0].to_string(),
            group,
            age,
            sex,
            updrs3,
            years_post,
        };
        subject
            .validate()
            .map_err(|e| Error::parse(lineno, e.to_string()))?;

        match manifest.subjects.iter().find(|s| s.id == subject.id) {
            Some(existing) if *existing != subject => {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate subject id `{}` with conflicting metadata", subject.id),
                ));
            }
            Some(_) => {}
            None => manifest.subjects.push(subject),
        }
        let path = fields[7].to_string();
        if manifest
            .entries
            .iter()
            .any(|e| e.subject_id == fields[0] && e.path == path)
        {
            return Err(Error::parse(
                lineno,
                format!("duplicate row for subject `{}` and path `{path}`", fields[0]),
            ));
        }
        manifest.entries.push(ManifestEntry {
            subject_id: fields[0].to_string(),
            task,
            path,
        });
    }
    Ok(manifest)
}

impl CohortManifest {
    /// Reads every referenced recording and assembles the cohort.
    pub fn load(&self, base_dir: &Path) -> Result<Cohort> {
        let mut cohort = Cohort {
            subjects: self.subjects.clone(),
            recordings: BTreeMap::new(),
        };
        for entry in &self.entries {
            let path = base_dir.join(&entry.path);
            let bytes = std::fs::read(&path).map_err(|e| {
                Error::input(format!(
                    "recording `{}` for subject {}: {e}",
                    path.display(),
                    entry.subject_id
                ))
            })?;
            let rec = parse_recording(&bytes, entry.task)?;
            cohort
                .recordings
                .entry(entry.subject_id.clone())
                .or_default()
                .push(rec);
        }
        Ok(cohort)
    }
}

/// Serializes a cohort to `dir`: one recording file per (subject, index)
/// under `recordings/`, plus `manifest.csv`. Returns the manifest path.
pub fn write_cohort(cohort: &Cohort, dir: &Path) -> Result<std::path::PathBuf> {
    let rec_dir = dir.join("recordings");
    std::fs::create_dir_all(&rec_dir)?;
    let mut manifest = String::from(MANIFEST_HEADER);
    manifest.push('\n');
    for subject in &cohort.subjects {
        let recs = cohort
            .recordings
            .get(&subject.id)
            .ok_or_else(|| Error::input(format!("subject {} has no recordings", subject.id)))?;
        for (k, rec) in recs.iter().enumerate() {
            let rel = format!("recordings/{}_{}.csv", subject.id, k);
            std::fs::write(dir.join(&rel), serialize_recording(rec))?;
            let updrs3 = subject.updrs3.map(|u| u.to_string()).unwrap_or_default();
            let years = subject
                .years_post
                .map(|y| y.to_string())
                .unwrap_or_default();
            let _ = writeln!(
                manifest,
                "{},{},{},{},{},{},{},{}",
                subject.id, subject.group, subject.age, subject.sex, updrs3, years, rec.task, rel
            );
        }
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest)?;
    Ok(path)
}
