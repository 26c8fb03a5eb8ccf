//! Quality traces and their CSV form.
//!
//! A trace is a uniformly sampled (1 ms) series of quantized quality values,
//! optionally paired with per-sample throughput. The CSV layout is
//! `t_ms,q,throughput_mbps` with LF line endings; the throughput column is
//! left empty when the trace carries none.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Uniform 1 ms series of quantized quality samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start_ms: u64,
    pub q: Vec<u8>,
    pub throughput_mbps: Option<Vec<u32>>,
}

impl Trace {
    pub fn new(start_ms: u64, q: Vec<u8>) -> Trace {
        Trace {
            start_ms,
            q,
            throughput_mbps: None,
        }
    }

    pub fn len_ms(&self) -> u64 {
        self.q.len() as u64
    }

    /// Timestamp of sample `i`.
    pub fn time_at(&self, i: usize) -> u64 {
        self.start_ms + i as u64
    }

    /// `(t_ms, q)` pairs in time order.
    pub fn samples(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.q
            .iter()
            .enumerate()
            .map(move |(i, &q)| (self.start_ms + i as u64, q))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.q.len() * 12 + 24);
        out.push_str("t_ms,q,throughput_mbps\n");
        for (i, &q) in self.q.iter().enumerate() {
            let t = self.start_ms + i as u64;
            match &self.throughput_mbps {
                Some(tp) => {
                    let _ = writeln!(out, "{t},{q},{}", tp[i]);
                }
                None => {
                    let _ = writeln!(out, "{t},{q},");
                }
            }
        }
        out
    }

    /// Parses the CSV form, reporting the offending line on malformed input.
    pub fn from_csv(path: &Path, text: &str) -> Result<Trace> {
        let bad = |line: usize, msg: &str| Error::TraceParse {
            path: path.to_path_buf(),
            line,
            msg: msg.to_string(),
        };
        let mut q = Vec::new();
        let mut throughput: Vec<u32> = Vec::new();
        let mut has_throughput = true;
        let mut start_ms = 0u64;
        let mut expect_t: Option<u64> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if idx == 0 {
                if raw_line.trim() != "t_ms,q,throughput_mbps" {
                    return Err(bad(1, "expected header \"t_ms,q,throughput_mbps\""));
                }
                continue;
            }
            if raw_line.is_empty() {
                continue;
            }
            let mut fields = raw_line.split(',');
            let t_field = fields.next().unwrap_or("");
            let q_field = fields.next().ok_or_else(|| bad(line_no, "missing q field"))?;
            let tp_field = fields.next().unwrap_or("");
            if fields.next().is_some() {
                return Err(bad(line_no, "too many fields"));
            }
            let t: u64 = t_field
                .trim()
                .parse()
                .map_err(|_| bad(line_no, "t_ms is not an integer"))?;
            let qv: u8 = q_field
                .trim()
                .parse()
                .map_err(|_| bad(line_no, "q is not an integer"))?;
            if qv > 10 {
                return Err(bad(line_no, "q outside 0..=10"));
            }
            match expect_t {
                None => start_ms = t,
                Some(expected) if t != expected => {
                    return Err(bad(line_no, "timestamps must advance by exactly 1 ms"));
                }
                Some(_) => {}
            }
            expect_t = Some(t + 1);
            if tp_field.trim().is_empty() {
                has_throughput = false;
            } else {
                let tp: u32 = tp_field
                    .trim()
                    .parse()
                    .map_err(|_| bad(line_no, "throughput_mbps is not an integer"))?;
                throughput.push(tp);
            }
            q.push(qv);
        }
        Ok(Trace {
            start_ms,
            q,
            throughput_mbps: if has_throughput && !throughput.is_empty() {
                Some(throughput)
            } else {
                None
            },
        })
    }

    pub fn read_csv(path: &Path) -> Result<Trace> {
        let text = fs::read_to_string(path).map_err(|source| Error::ReadFile {
            path: path.to_path_buf(),
            source,
        })?;
        Trace::from_csv(path, &text)
    }
}

/// Writes `bytes` to `path` atomically (temp file in the same directory, then
/// rename), so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| Error::WriteFile {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(dir).map_err(err)?;
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".tmp-{}", file_name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp).map_err(err)?;
        f.write_all(bytes).map_err(err)?;
        f.sync_all().map_err(err)?;
    }
    fs::rename(&tmp, path).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let trace = Trace {
            start_ms: 5,
            q: vec![9, 9, 8, 0],
            throughput_mbps: Some(vec![900, 900, 900, 0]),
        };
        let csv = trace.to_csv();
        assert!(csv.starts_with("t_ms,q,throughput_mbps\n5,9,900\n"));
        assert!(!csv.contains('\r'));
        let back = Trace::from_csv(Path::new("test.csv"), &csv).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn csv_without_throughput() {
        let trace = Trace::new(0, vec![1, 2, 3]);
        let back = Trace::from_csv(Path::new("t.csv"), &trace.to_csv()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "t_ms,q,throughput_mbps\n0,9,900\n1,eleven,900\n";
        let err = Trace::from_csv(Path::new("bad.csv"), text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("bad.csv"), "{msg}");
    }

    #[test]
    fn parse_rejects_gaps() {
        let text = "t_ms,q,throughput_mbps\n0,9,\n2,9,\n";
        assert!(Trace::from_csv(Path::new("gap.csv"), text).is_err());
    }

    #[test]
    fn empty_body_is_an_empty_trace() {
        let trace = Trace::from_csv(Path::new("empty.csv"), "t_ms,q,throughput_mbps\n").unwrap();
        assert_eq!(trace.len_ms(), 0);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second");
        // No temp residue.
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
