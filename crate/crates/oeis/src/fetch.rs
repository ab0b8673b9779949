use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;

use crate::bfile::{parse_bfile, valid_anum, BfileError, OeisEntry, Source};
use crate::fixtures::fixture;

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{0:?} is not an A-number")]
    InvalidAnum(String),
    #[error("{0} is neither cached nor bundled, and network access is off")]
    NotInFixtures(String),
    #[error("network error: {0}")]
    NetworkError(String),
    #[error("malformed b-file: {0}")]
    MalformedResponse(#[from] BfileError),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// `$GKP_CACHE_DIR`, or `./.oeis-cache`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("GKP_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".oeis-cache"))
}

// one writer at a time per process; the rename keeps readers from seeing
// half-written files across processes
static CACHE_LOCK: Mutex<()> = Mutex::new(());

#[derive(Clone, Debug)]
pub struct Fetcher {
    pub cache_dir: PathBuf,
    pub offline: bool,
    pub base_url: String,
}

impl Fetcher {
    pub fn new(cache_dir: impl Into<PathBuf>, offline: bool) -> Self {
        Fetcher { cache_dir: cache_dir.into(), offline, base_url: DEFAULT_BASE_URL.to_string() }
    }

    pub fn with_base_url(mut self, url: impl Into<String>) -> Self {
        self.base_url = url.into().trim_end_matches('/').to_string();
        self
    }

    fn cache_path(&self, anum: &str) -> PathBuf {
        self.cache_dir.join(format!("b{}.txt", &anum[1..]))
    }

    /// Looks in the cache, then the bundled fixtures, then (unless offline)
    /// downloads the b-file once and caches the response verbatim.
    pub fn fetch(&self, anum: &str) -> Result<OeisEntry, FetchError> {
        if !valid_anum(anum) {
            return Err(FetchError::InvalidAnum(anum.to_string()));
        }
        let path = self.cache_path(anum);
        if let Ok(text) = fs::read_to_string(&path) {
            return with_meta(parse_bfile(&text)?, anum, Source::Network);
        }
        if let Some((_, e)) = fixture(anum) {
            return Ok(e);
        }
        if self.offline {
            return Err(FetchError::NotInFixtures(anum.to_string()));
        }
        let text = self.download(anum)?;
        let entry = with_meta(parse_bfile(&text)?, anum, Source::Network)?;
        store(&path, &text)?;
        Ok(entry)
    }

    fn download(&self, anum: &str) -> Result<String, FetchError> {
        let url = format!("{}/{}/b{}.txt", self.base_url, anum, &anum[1..]);
        let net = |e: reqwest::Error| FetchError::NetworkError(e.to_string());
        let client = reqwest::blocking::Client::builder().timeout(Duration::from_secs(30)).build().map_err(net)?;
        let resp = client.get(&url).send().map_err(net)?;
        if !resp.status().is_success() {
            return Err(FetchError::NetworkError(format!("GET {url}: {}", resp.status())));
        }
        resp.text().map_err(net)
    }
}

fn with_meta(mut e: OeisEntry, anum: &str, source: Source) -> Result<OeisEntry, FetchError> {
    e.anum = anum.to_string();
    e.source = source;
    Ok(e)
}

fn store(path: &Path, text: &str) -> Result<(), FetchError> {
    let _guard = CACHE_LOCK.lock().unwrap_or_else(|p| p.into_inner());
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// [`Fetcher::fetch`] against the public server.
pub fn fetch(anum: &str, cache_dir: &Path, offline: bool) -> Result<OeisEntry, FetchError> {
    Fetcher::new(cache_dir, offline).fetch(anum)
}
