//! Number formatting and all-or-nothing file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Rounds to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        // drops the sign of -0
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Text form of a number: 15 significant digits, `.` separator, shortest
/// decimal that reads back to the rounded value.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Builds CSV text with a fixed header and LF line endings.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // writing to memory cannot fail
        writer.write_record(header).expect("in-memory csv");
        Csv { writer }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("in-memory csv");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("in-memory csv");
        String::from_utf8(bytes).expect("csv fields are utf-8")
    }
}

/// Files produced by a command, written only once everything is computed.
#[derive(Debug, Default)]
pub struct Bundle {
    files: Vec<(String, String)>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    #[cfg(test)]
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Writes every file to a temporary sibling, then renames them into
    /// place. On failure the temporaries are removed and nothing is renamed.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        let io = |what: &str, p: &Path, e: std::io::Error| {
            CliError::Io(format!("{what} {}: {e}", p.display()))
        };
        fs::create_dir_all(dir).map_err(|e| io("creating", dir, e))?;
        let pid = std::process::id();
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(self.files.len());
        let cleanup = |staged: &[(PathBuf, PathBuf)]| {
            for (tmp, _) in staged {
                let _ = fs::remove_file(tmp);
            }
        };
        for (name, contents) in &self.files {
            let target = dir.join(name);
            let tmp = dir.join(format!(".{name}.{pid}.tmp"));
            let res = fs::File::create(&tmp).and_then(|mut f| {
                f.write_all(contents.as_bytes())?;
                f.sync_all()
            });
            if let Err(e) = res {
                let _ = fs::remove_file(&tmp);
                cleanup(&staged);
                return Err(io("writing", &tmp, e));
            }
            staged.push((tmp, target));
        }
        for (i, (tmp, target)) in staged.iter().enumerate() {
            if let Err(e) = fs::rename(tmp, target) {
                cleanup(&staged[i..]);
                return Err(io("renaming into", target, e));
            }
        }
        Ok(staged.into_iter().map(|(_, t)| t).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_fifteen_digits() {
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(37.0 / 48.0), "0.770833333333333");
        assert_eq!(fmt_num(4.0 / 3.0), "1.33333333333333");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt_num(0.0), "0");
        for x in [1.0 / 7.0, 123456.789, 3.3e-17, 9.99e20] {
            let back: f64 = fmt_num(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-14 * x.abs());
        }
    }

    #[test]
    fn csv_rows() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&["1".into(), "x".into()]);
        c.row(&["2".into(), "y,z".into()]);
        assert_eq!(c.finish(), "a,b\n1,x\n2,\"y,z\"\n");
    }

    #[test]
    fn bundle_writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested");
        let mut b = Bundle::new();
        b.add("a.csv", "x\n".into());
        b.add("b.json", "{}".into());
        let written = b.write(&out).unwrap();
        assert_eq!(written.len(), 2);
        assert_eq!(fs::read_to_string(out.join("a.csv")).unwrap(), "x\n");
        let leftovers: Vec<_> = fs::read_dir(&out).unwrap().collect();
        assert_eq!(leftovers.len(), 2);
    }

    #[test]
    fn bundle_reports_unwritable_dir() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "").unwrap();
        let mut b = Bundle::new();
        b.add("a.csv", String::new());
        let err = b.write(&blocker.join("sub")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
