use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rulers_core::ehrhart::CountReport;
use rulers_core::rulers::FamilySpec;
use sha2::{Digest, Sha256};

/// Content-addressed store of count reports.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn key(family: &FamilySpec, t: u64, arrangement_hash: &str, with_closed: bool) -> String {
        let family = serde_json::to_string(family).expect("family serializes");
        let material = format!(
            "{family}\n{t}\n{arrangement_hash}\n{with_closed}\n{}",
            env!("CARGO_PKG_VERSION")
        );
        hex::encode(Sha256::digest(material.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, if present and readable; unreadable entries count as misses.
    pub fn get(&self, key: &str) -> Option<CountReport> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, report: &CountReport) -> io::Result<()> {
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(report).expect("report serializes"))?;
        fs::rename(tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let report = CountReport {
            family: FamilySpec::bh(3, 3),
            t: 12,
            open_count: 7,
            closed_count_with_multiplicity: Some(99),
            arrangement_hash: "ab".into(),
        };
        let key = Cache::key(&report.family, 12, "ab", true);
        assert!(cache.get(&key).is_none());
        cache.put(&key, &report).unwrap();
        let back = cache.get(&key).unwrap();
        assert_eq!(back, report);
        assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&report).unwrap());
        assert_ne!(key, Cache::key(&report.family, 12, "ab", false));
        assert_ne!(key, Cache::key(&report.family, 13, "ab", true));
    }
}
