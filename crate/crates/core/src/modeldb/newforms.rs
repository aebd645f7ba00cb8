//! Client for newform orbit data.
//!
//! A prime p is usable for the quadratic Chabauty machinery only if T_p
//! generates the Hecke algebra; the practical check is that a_p of each
//! newform orbit generates that orbit's coefficient field, i.e. the minimal
//! polynomial of a_p has degree equal to the orbit dimension. The degrees are
//! ingested from an external database endpoint (GET {base}/newforms/{level})
//! and cached on disk; the crate never computes eigenvalue fields itself, so
//! the check is advisory.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ModelDbError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformOrbitRecord {
    pub label: String,
    pub dimension: u32,
    /// Degree of the minimal polynomial of a_p over ℚ, per prime.
    pub ap_minpoly_degree: BTreeMap<u64, u32>,
}

fn cache_path(cache_dir: &Path, level: u64) -> PathBuf {
    cache_dir.join(format!("{level}.json"))
}

fn parse_records(raw: &str) -> Result<Vec<NewformOrbitRecord>, ModelDbError> {
    let recs: Vec<NewformOrbitRecord> =
        serde_json::from_str(raw).map_err(|e| ModelDbError::Parse(e.to_string()))?;
    for r in &recs {
        if r.dimension == 0 {
            return Err(ModelDbError::Parse(format!(
                "orbit {} has dimension 0",
                r.label
            )));
        }
        if r.ap_minpoly_degree.values().any(|&d| d > r.dimension) {
            return Err(ModelDbError::Parse(format!(
                "orbit {}: minimal-polynomial degree exceeds dimension",
                r.label
            )));
        }
    }
    Ok(recs)
}

/// Fetch the orbit records for a level, caching raw responses on disk.
///
/// Online: GET {base}/newforms/{level}; a successful response refreshes the
/// cache (atomic rename). On network failure the cache is consulted; with a
/// cold cache the fetch error is surfaced. Offline mode never touches the
/// network.
pub fn fetch_newform_orbits(
    level: u64,
    base_url: &str,
    cache_dir: &Path,
    offline: bool,
) -> Result<Vec<NewformOrbitRecord>, ModelDbError> {
    let cache = cache_path(cache_dir, level);
    if offline {
        let raw = std::fs::read_to_string(&cache).map_err(|_| {
            ModelDbError::Fetch(format!("offline and no cached response for level {level}"))
        })?;
        return parse_records(&raw);
    }
    let url = format!("{}/newforms/{}", base_url.trim_end_matches('/'), level);
    match ureq::get(&url).call() {
        Ok(resp) => {
            let raw = resp
                .into_string()
                .map_err(|e| ModelDbError::Fetch(e.to_string()))?;
            let recs = parse_records(&raw)?;
            std::fs::create_dir_all(cache_dir)?;
            let mut tmp = tempfile::NamedTempFile::new_in(cache_dir)?;
            tmp.write_all(raw.as_bytes())?;
            tmp.persist(&cache).map_err(|e| ModelDbError::Io(e.error))?;
            Ok(recs)
        }
        Err(e) => {
            if let Ok(raw) = std::fs::read_to_string(&cache) {
                return parse_records(&raw);
            }
            Err(ModelDbError::Fetch(e.to_string()))
        }
    }
}

/// True iff Σ orbit dimensions equals the genus and a_p generates each
/// orbit's coefficient field (minimal-polynomial degree = dimension).
pub fn hecke_generation_check(
    genus: u32,
    p: u64,
    records: &[NewformOrbitRecord],
) -> Result<bool, ModelDbError> {
    if records.is_empty() {
        return Err(ModelDbError::InsufficientData("no orbit records".into()));
    }
    let mut total = 0u32;
    let mut generated = true;
    for r in records {
        total += r.dimension;
        match r.ap_minpoly_degree.get(&p) {
            None => {
                return Err(ModelDbError::InsufficientData(format!(
                    "orbit {} has no a_p minimal-polynomial degree for p = {p}",
                    r.label
                )))
            }
            Some(&d) => generated &= d == r.dimension,
        }
    }
    Ok(total == genus && generated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Write as _};
    use std::net::TcpListener;

    fn serve_once(body: String, status: &'static str) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            if let Ok((mut sock, _)) = listener.accept() {
                let mut reader = BufReader::new(sock.try_clone().unwrap());
                let mut line = String::new();
                while reader.read_line(&mut line).is_ok() {
                    if line.ends_with("\r\n\r\n") || line == "\r\n" || line.is_empty() {
                        break;
                    }
                    line.clear();
                }
                let resp = format!(
                    "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                let _ = sock.write_all(resp.as_bytes());
            }
        });
        format!("http://{addr}")
    }

    fn record(dim: u32, p: u64, deg: u32) -> NewformOrbitRecord {
        NewformOrbitRecord {
            label: "a".into(),
            dimension: dim,
            ap_minpoly_degree: [(p, deg)].into_iter().collect(),
        }
    }

    #[test]
    fn fetch_parses_and_caches() {
        let body = r#"[{"label":"a","dimension":4,"ap_minpoly_degree":{"5":4}}]"#.to_string();
        let base = serve_once(body, "200 OK");
        let dir = tempfile::tempdir().unwrap();
        let recs = fetch_newform_orbits(137, &base, dir.path(), false).unwrap();
        assert_eq!(recs, vec![record(4, 5, 4)]);
        // warm cache now serves offline
        let recs2 = fetch_newform_orbits(137, &base, dir.path(), true).unwrap();
        assert_eq!(recs, recs2);
    }

    #[test]
    fn cold_cache_offline_fails() {
        let dir = tempfile::tempdir().unwrap();
        let err = fetch_newform_orbits(271, "http://127.0.0.1:1", dir.path(), true);
        assert!(matches!(err, Err(ModelDbError::Fetch(_))));
    }

    #[test]
    fn unreachable_endpoint_cold_cache_is_fetch_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = fetch_newform_orbits(271, "http://127.0.0.1:1", dir.path(), false);
        assert!(matches!(err, Err(ModelDbError::Fetch(_))));
    }

    #[test]
    fn malformed_response_is_parse_error() {
        let base = serve_once("{not json".to_string(), "200 OK");
        let dir = tempfile::tempdir().unwrap();
        let err = fetch_newform_orbits(137, &base, dir.path(), false);
        assert!(matches!(err, Err(ModelDbError::Parse(_))));
    }

    #[test]
    fn hecke_check_semantics() {
        // (137, 5) with a single dim-4 orbit of degree 4
        assert!(hecke_generation_check(4, 5, &[record(4, 5, 4)]).unwrap());
        // degree < dimension: generation fails
        assert!(!hecke_generation_check(4, 5, &[record(4, 5, 2)]).unwrap());
        // wrong total dimension
        assert!(!hecke_generation_check(5, 5, &[record(4, 5, 4)]).unwrap());
        // missing prime: insufficient data, distinct from false
        assert!(matches!(
            hecke_generation_check(4, 7, &[record(4, 5, 4)]),
            Err(ModelDbError::InsufficientData(_))
        ));
    }
}
