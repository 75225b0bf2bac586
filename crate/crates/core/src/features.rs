//! Named feature vectors and the CSV feature table exchanged between the
//! extraction and evaluation stages.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ingest::{Group, Task};

/// An ordered list of named feature values. Names are unique and the order
/// is stable across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::input(format!(
                "feature vector has {} names but {} values",
                names.len(),
                values.len()
            )));
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::input("duplicate feature name"));
        }
        Ok(FeatureVector { names, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    /// Appends another vector, keeping name uniqueness.
    pub fn concat(self, other: FeatureVector) -> Result<FeatureVector> {
        let mut names = self.names;
        let mut values = self.values;
        names.extend(other.names);
        values.extend(other.values);
        FeatureVector::new(names, values)
    }
}

/// One row of a feature table: subject metadata plus the feature values.
#[derive(Debug, Clone)]
pub struct FeatureRow {
    pub id: String,
    pub group: Group,
    pub task: Task,
    pub updrs3: Option<u32>,
    pub values: Vec<f64>,
}

/// A feature matrix keyed by subject id, as written by `extract` and read
/// back by the evaluation commands.
#[derive(Debug, Clone, Default)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn push(&mut self, row: FeatureRow) -> Result<()> {
        if row.values.len() != self.feature_names.len() {
            return Err(Error::input(format!(
                "row for {} has {} values, expected {}",
                row.id,
                row.values.len(),
                self.feature_names.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// CSV with metadata columns `id,group,task,updrs3` followed by one
    /// column per feature. Floats use the shortest round-trip encoding.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,group,task,updrs3");
        for name in &self.feature_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},{},{}", row.id, row.group, row.task);
            match row.updrs3 {
                Some(u) => {
                    let _ = write!(out, ",{u}");
                }
                None => out.push(','),
            }
            for v in &row.values {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<FeatureTable> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty feature table"))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 5 || cols[..4] != ["id", "group", "task", "updrs3"] {
            return Err(Error::parse(
                1,
                "expected header id,group,task,updrs3,<features...>",
            ));
        }
        let feature_names: Vec<String> = cols[4..].iter().map(|s| s.to_string()).collect();
        let mut table = FeatureTable {
            feature_names,
            rows: Vec::new(),
        };
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(Error::parse(
                    lineno,
                    format!("expected {} fields, found {}", cols.len(), fields.len()),
                ));
            }
            let group: Group = fields[1]
                .parse()
                .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
            let task: Task = fields[2]
                .parse()
                .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
            let updrs3 = if fields[3].is_empty() {
                None
            } else {
                Some(
                    fields[3]
                        .parse::<u32>()
                        .map_err(|_| Error::parse(lineno, "bad updrs3"))?,
                )
            };
            let mut values = Vec::with_capacity(table.feature_names.len());
            for f in &fields[4..] {
                values.push(
                    f.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad number `{f}`")))?,
                );
            }
            table.push(FeatureRow {
                id: fields[0].to_string(),
                group,
                task,
                updrs3,
                values,
            })?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_duplicate_names() {
        assert!(FeatureVector::new(names(&["a", "a"]), vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(FeatureVector::new(names(&["a"]), vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn concat_preserves_order() {
        let a = FeatureVector::new(names(&["a", "b"]), vec![1.0, 2.0]).unwrap();
        let b = FeatureVector::new(names(&["c"]), vec![3.0]).unwrap();
        let c = a.concat(b).unwrap();
        assert_eq!(c.names(), &["a", "b", "c"]);
        assert_eq!(c.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(c.get("b"), Some(2.0));
    }

    #[test]
    fn table_round_trips_through_csv() {
        let mut table = FeatureTable {
            feature_names: names(&["f1", "f2"]),
            rows: Vec::new(),
        };
        table
            .push(FeatureRow {
                id: "s1".into(),
                group: Group::Pd,
                task: Task::Spiral,
                updrs3: Some(35),
                values: vec![0.1, -2.5e-7],
            })
            .unwrap();
        table
            .push(FeatureRow {
                id: "s2".into(),
                group: Group::YHc,
                task: Task::Spiral,
                updrs3: None,
                values: vec![1.0 / 3.0, f64::MIN_POSITIVE],
            })
            .unwrap();
        let csv = table.to_csv();
        let back = FeatureTable::from_csv(&csv).unwrap();
        assert_eq!(back.feature_names, table.feature_names);
        assert_eq!(back.rows.len(), 2);
        for (a, b) in back.rows.iter().zip(&table.rows) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.updrs3, b.updrs3);
            assert_eq!(a.values, b.values);
        }
    }
}
