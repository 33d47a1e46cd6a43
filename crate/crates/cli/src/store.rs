//! Append-only JSON-lines store of bound records.

use mixedsdp::{BoundRecord, Error, ProblemSpec, Result};
use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

pub const STORE_ENV: &str = "MIXEDSDP_STORE";
pub const DEFAULT_STORE: &str = "mixedsdp-results.jsonl";

pub type Key = (usize, usize, usize, u8);

pub fn key(spec: &ProblemSpec) -> Key {
    (spec.n2, spec.n3, spec.d, spec.k)
}

pub struct ResultsStore {
    path: PathBuf,
}

impl ResultsStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ResultsStore { path: path.into() }
    }

    /// `$MIXEDSDP_STORE` if set, otherwise `mixedsdp-results.jsonl` in the working directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(STORE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_STORE.into()))
    }

    pub fn append(&self, record: &BoundRecord) -> Result<()> {
        let line = serde_json::to_string(record).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{line}")?;
        Ok(())
    }

    /// All records in file order. A missing file is an empty store.
    pub fn records(&self) -> Result<Vec<BoundRecord>> {
        let text = match std::fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() }))
            .collect()
    }

    /// The latest record per key.
    pub fn latest(&self) -> Result<HashMap<Key, BoundRecord>> {
        Ok(self.records()?.into_iter().map(|r| (key(&r.spec), r)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixedsdp::solver::{certify, solve_spec};
    use mixedsdp::SolverOptions;

    #[test]
    fn append_and_read_latest() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultsStore::new(dir.path().join("s.jsonl"));
        assert!(store.records().unwrap().is_empty());
        let spec = ProblemSpec::k3(1, 1, 1).unwrap();
        let s = solve_spec(&spec, &SolverOptions::default()).unwrap();
        let b = certify(&s).unwrap();
        let mut r = BoundRecord::new(spec, &s, &b, 1e-8, 0.0);
        store.append(&r).unwrap();
        r.certified_bound = 5;
        store.append(&r).unwrap();
        assert_eq!(store.records().unwrap().len(), 2);
        assert_eq!(store.latest().unwrap()[&(1, 1, 1, 3)].certified_bound, 5);
    }

    #[test]
    fn corrupt_line_reports_its_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        std::fs::write(&path, "\n{not json}\n").unwrap();
        assert!(matches!(ResultsStore::new(path).records(), Err(Error::Parse { line: 2, .. })));
    }
}
