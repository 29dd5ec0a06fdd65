//! On-disk cache of MLS enumerations as NDJSON with a checksum sidecar.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use supercomb::superext::for_each_mls;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] supercomb::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub n: usize,
    pub count: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Hit,
    Miss,
    /// The old data file was kept with a `.bad` suffix.
    CacheCorrupt { reason: String },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub path: PathBuf,
    pub meta: Meta,
    pub status: Status,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn data_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("mls-{n}.ndjson"))
    }

    pub fn meta_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("mls-{n}.meta"))
    }

    /// Makes sure a checksum-valid enumeration for `n` is on disk.
    pub fn ensure(&self, n: usize, branches: Option<usize>) -> Result<Entry, CacheError> {
        let data = self.data_path(n);
        let status = match self.validate(n)? {
            Ok(meta) => {
                return Ok(Entry {
                    path: data,
                    meta,
                    status: Status::Hit,
                })
            }
            Err(None) => Status::Miss,
            Err(Some(reason)) => {
                let mut bad = data.clone().into_os_string();
                bad.push(".bad");
                fs::rename(&data, &bad).map_err(io_err(&data))?;
                Status::CacheCorrupt { reason }
            }
        };
        let meta = self.write(n, branches)?;
        Ok(Entry {
            path: data,
            meta,
            status,
        })
    }

    /// Reads the metadata without validating the data file.
    pub fn meta(&self, n: usize) -> Option<Meta> {
        let text = fs::read_to_string(self.meta_path(n)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// `Ok(meta)` when valid, `Err(None)` when absent, `Err(Some(reason))`
    /// when present but corrupt.
    fn validate(&self, n: usize) -> Result<Result<Meta, Option<String>>, CacheError> {
        let data = self.data_path(n);
        if !data.exists() {
            return Ok(Err(None));
        }
        let Some(meta) = self.meta(n) else {
            return Ok(Err(Some("missing or unreadable metadata".into())));
        };
        let file = File::open(&data).map_err(io_err(&data))?;
        let mut hasher = Sha256::new();
        let mut lines = 0u64;
        let mut reader = BufReader::new(file);
        let mut buf = Vec::new();
        loop {
            buf.clear();
            let read = reader.read_until(b'\n', &mut buf).map_err(io_err(&data))?;
            if read == 0 {
                break;
            }
            hasher.update(&buf);
            lines += 1;
        }
        let digest = hex::encode(hasher.finalize());
        if meta.n != n || digest != meta.sha256 {
            return Ok(Err(Some(format!("checksum mismatch for {}", data.display()))));
        }
        if lines != meta.count {
            return Ok(Err(Some(format!("expected {} lines, found {lines}", meta.count))));
        }
        Ok(Ok(meta))
    }

    fn write(&self, n: usize, branches: Option<usize>) -> Result<Meta, CacheError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let data = self.data_path(n);
        let tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        let mut writer = BufWriter::new(tmp);
        let (count, digest) = stream_mls(n, branches, &mut writer)?;
        let tmp = writer.into_inner().map_err(|e| io_err(&data)(e.into_error()))?;
        tmp.persist(&data).map_err(|e| io_err(&data)(e.error))?;
        let meta = Meta {
            n,
            count,
            sha256: digest,
        };
        let meta_path = self.meta_path(n);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(serde_json::to_string(&meta).expect("serializable").as_bytes())
            .and_then(|_| tmp.write_all(b"\n"))
            .map_err(io_err(&meta_path))?;
        tmp.persist(&meta_path).map_err(|e| io_err(&meta_path)(e.error))?;
        Ok(meta)
    }
}

pub fn write_line(out: &mut impl Write, lists: &[Vec<usize>]) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, lists)?;
    out.write_all(b"\n")
}

/// Enumerates to `out` and returns `(count, sha256)`.
pub fn stream_mls(n: usize, branches: Option<usize>, out: &mut impl Write) -> Result<(u64, String), CacheError> {
    let mut w = HashingWriter::new(out);
    let mut failure = None;
    let count = for_each_mls(n, branches, |eta| {
        if failure.is_none() {
            failure = write_line(&mut w, &eta.to_point_lists()).err();
        }
    })?;
    if let Some(source) = failure {
        return Err(CacheError::Io {
            path: PathBuf::from("<stream>"),
            source,
        });
    }
    Ok((count, w.finish().1))
}

pub struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> HashingWriter<W> {
    pub fn new(inner: W) -> Self {
        HashingWriter {
            inner,
            hasher: Sha256::new(),
        }
    }

    pub fn finish(self) -> (W, String) {
        (self.inner, hex::encode(self.hasher.finalize()))
    }
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    std::io::copy(&mut file, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}
