use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;
use vertexfusion::{Error, Result};

/// Versioned report document; field order is fixed by this struct so
/// serialization is byte-stable for a given configuration and seed.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub provenance: Provenance,
    pub status: String,
    /// Violated invariants with witnesses, empty on success.
    pub failures: Vec<String>,
    pub results: Value,
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub algebra: String,
    /// "rational" or "generic".
    pub field_mode: String,
    pub kappa: String,
    pub level: String,
    /// The invariant form normalization in force.
    pub normalization: String,
    pub z: String,
    pub depth: usize,
    pub seed: u64,
}

impl Report {
    pub fn new(command: &str, provenance: Provenance) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            provenance,
            status: "pass".into(),
            failures: Vec::new(),
            results: Value::Object(Default::default()),
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.status = "fail".into();
        self.failures.push(witness);
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.to_string(), value);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes the report and CSV tables under the output directory.
pub fn write_outputs(
    out_dir: &str,
    report: &Report,
    csv_tables: &BTreeMap<String, String>,
) -> Result<()> {
    let dir = Path::new(out_dir);
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot create {out_dir}: {e}")))?;
    let path = dir.join("report.json");
    std::fs::write(&path, report.to_json())
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    for (name, content) in csv_tables {
        let path = dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
