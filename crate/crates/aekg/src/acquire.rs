//! Fetching and unpacking quarterly archives.
//!
//! The download URL comes from a configurable template with `{year}` and
//! `{quarter}` placeholders; nothing is hard-coded to one distribution
//! endpoint. Downloads write to a `.part` file and rename atomically on
//! completion, so the presence of the destination file means a complete
//! earlier download and the fetch is skipped without touching the
//! network. A per-destination lock file prevents two fetchers from
//! downloading the same archive concurrently.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

#[derive(Debug, thiserror::Error)]
pub enum AcquireError {
    #[error("quarter reference out of range: year {year} (>= 2004) quarter {quarter} (1-4)")]
    InvalidQuarter { year: i64, quarter: i64 },
    #[error("url template {template:?} must contain {missing}")]
    Template {
        template: String,
        missing: &'static str,
    },
    #[error("http failure: status {status} fetching {url}")]
    Http { status: u16, url: String },
    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String },
    #[error("timed out waiting for download lock {0}")]
    LockTimeout(PathBuf),
    #[error("corrupt archive {path}: {message}")]
    CorruptArchive { path: PathBuf, message: String },
    #[error("archive entry {0:?} resolves outside the destination directory")]
    PathTraversalEntry(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// One quarterly dataset reference. The dataset starts in 2004.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuarterRef {
    year: u16,
    quarter: u8,
}

impl QuarterRef {
    pub fn new(year: i64, quarter: i64) -> Result<Self, AcquireError> {
        if !(2004..=9999).contains(&year) || !(1..=4).contains(&quarter) {
            return Err(AcquireError::InvalidQuarter { year, quarter });
        }
        Ok(QuarterRef {
            year: year as u16,
            quarter: quarter as u8,
        })
    }

    pub fn year(&self) -> u16 {
        self.year
    }

    pub fn quarter(&self) -> u8 {
        self.quarter
    }
}

/// Retry and backoff knobs for [`fetch_quarter`].
#[derive(Debug, Clone)]
pub struct FetchOptions {
    /// Additional attempts after the first failure.
    pub retries: u32,
    /// First backoff delay; doubles per retry.
    pub backoff_base: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            retries: 3,
            backoff_base: Duration::from_millis(500),
        }
    }
}

/// Substitutes `{year}` and `{quarter}` into the template.
pub fn expand_template(template: &str, quarter: QuarterRef) -> Result<String, AcquireError> {
    if !template.contains("{year}") {
        return Err(AcquireError::Template {
            template: template.to_string(),
            missing: "{year}",
        });
    }
    if !template.contains("{quarter}") {
        return Err(AcquireError::Template {
            template: template.to_string(),
            missing: "{quarter}",
        });
    }
    Ok(template
        .replace("{year}", &quarter.year.to_string())
        .replace("{quarter}", &quarter.quarter.to_string()))
}

fn archive_file_name(url: &str, quarter: QuarterRef) -> String {
    url.rsplit('/')
        .next()
        .filter(|name| !name.is_empty())
        .map(str::to_string)
        .unwrap_or_else(|| format!("faers_{}q{}.zip", quarter.year, quarter.quarter))
}

// Removes the lock file when the guard drops, success or failure.
struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn acquire_lock(lock_path: &Path, dest: &Path) -> Result<Option<LockGuard>, AcquireError> {
    let deadline = std::time::Instant::now() + Duration::from_secs(60);
    loop {
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(lock_path)
        {
            Ok(_) => return Ok(Some(LockGuard(lock_path.to_path_buf()))),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                // Another fetcher is downloading; wait for it, then reuse
                // its result if the file appeared.
                if dest.exists() {
                    return Ok(None);
                }
                if std::time::Instant::now() > deadline {
                    return Err(AcquireError::LockTimeout(lock_path.to_path_buf()));
                }
                std::thread::sleep(Duration::from_millis(25));
            }
            Err(e) => return Err(e.into()),
        }
    }
}

fn transient(err: &AcquireError) -> bool {
    match err {
        AcquireError::Http { status, .. } => (500..=599).contains(status),
        AcquireError::Network { .. } => true,
        _ => false,
    }
}

fn download_once(url: &str, part: &Path) -> Result<(), AcquireError> {
    let response = ureq::get(url).call().map_err(|err| match err {
        ureq::Error::StatusCode(status) => AcquireError::Http {
            status,
            url: url.to_string(),
        },
        other => AcquireError::Network {
            url: url.to_string(),
            message: other.to_string(),
        },
    })?;
    let mut reader = response.into_body().into_reader();
    let mut file = fs::File::create(part)?;
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = reader.read(&mut buf).map_err(|e| AcquireError::Network {
            url: url.to_string(),
            message: e.to_string(),
        })?;
        if n == 0 {
            break;
        }
        file.write_all(&buf[..n])?;
    }
    file.sync_all()?;
    Ok(())
}

/// Downloads the archive for `quarter` into `dest_dir`, returning its
/// path. Skips the network entirely when the destination file already
/// exists (completed downloads are renamed into place atomically, so
/// existence implies completeness). Transient failures (transport errors,
/// 5xx) are retried with exponential backoff; 4xx failures are not.
pub fn fetch_quarter(
    quarter: QuarterRef,
    url_template: &str,
    dest_dir: &Path,
    opts: &FetchOptions,
) -> Result<PathBuf, AcquireError> {
    let url = expand_template(url_template, quarter)?;
    fs::create_dir_all(dest_dir)?;
    let dest = dest_dir.join(archive_file_name(&url, quarter));
    if dest.exists() {
        return Ok(dest);
    }
    let lock_path = dest.with_extension("lock");
    let Some(_guard) = acquire_lock(&lock_path, &dest)? else {
        return Ok(dest);
    };
    if dest.exists() {
        return Ok(dest);
    }
    let part = dest.with_extension("part");
    let mut attempt = 0u32;
    loop {
        match download_once(&url, &part) {
            Ok(()) => break,
            Err(err) => {
                let _ = fs::remove_file(&part);
                if attempt >= opts.retries || !transient(&err) {
                    return Err(err);
                }
                std::thread::sleep(opts.backoff_base * 2u32.pow(attempt));
                attempt += 1;
            }
        }
    }
    fs::rename(&part, &dest)?;
    Ok(dest)
}

/// Extracts the `.xml` entries (case-insensitive) of a ZIP archive into
/// `dest_dir`, rejecting any entry whose resolved path would escape it.
/// Returns the extracted paths in archive order.
pub fn extract_archive(archive: &Path, dest_dir: &Path) -> Result<Vec<PathBuf>, AcquireError> {
    let file = fs::File::open(archive)?;
    let mut zip = zip::ZipArchive::new(file).map_err(|e| AcquireError::CorruptArchive {
        path: archive.to_path_buf(),
        message: e.to_string(),
    })?;
    fs::create_dir_all(dest_dir)?;
    let mut extracted = Vec::new();
    for index in 0..zip.len() {
        let mut entry = zip
            .by_index(index)
            .map_err(|e| AcquireError::CorruptArchive {
                path: archive.to_path_buf(),
                message: e.to_string(),
            })?;
        let name = entry.name().to_string();
        let Some(relative) = entry.enclosed_name() else {
            return Err(AcquireError::PathTraversalEntry(name));
        };
        if entry.is_dir() || !name.to_ascii_lowercase().ends_with(".xml") {
            continue;
        }
        let target = dest_dir.join(relative);
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut out = fs::File::create(&target)?;
        io::copy(&mut entry, &mut out)?;
        extracted.push(target);
    }
    Ok(extracted)
}
