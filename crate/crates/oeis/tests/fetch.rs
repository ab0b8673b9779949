use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use gkp_oeis::{fetch, FetchError, Fetcher, Source};

/// Serves `body` with `status` for every request and counts them.
fn serve(status: &'static str, body: &'static str) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hits = Arc::new(AtomicUsize::new(0));
    let h = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut s) = stream else { break };
            let mut reader = BufReader::new(s.try_clone().unwrap());
            let mut line = String::new();
            let mut path = String::new();
            loop {
                line.clear();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                if path.is_empty() {
                    path = line.split_whitespace().nth(1).unwrap_or("").to_string();
                }
            }
            h.fetch_add(1, Ordering::SeqCst);
            let body = if path.ends_with(".txt") { body } else { "" };
            let resp = format!(
                "HTTP/1.1 {status}\r\nContent-Length: {}\r\nContent-Type: text/plain\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            let _ = s.write_all(resp.as_bytes());
        }
    });
    (format!("http://{addr}"), hits)
}

#[test]
fn fixtures_served_offline() {
    let dir = tempfile::tempdir().unwrap();
    let e = fetch("A007318", dir.path(), true).unwrap();
    assert_eq!(e.values[..6], [1, 1, 1, 1, 2, 1]);
    assert_eq!(e.source, Source::Fixture);
    let e = fetch("A008277", dir.path(), true).unwrap();
    assert_eq!(e.values[..6], [1, 1, 1, 1, 3, 1]);
}

#[test]
fn offline_miss() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(fetch("A000000", dir.path(), true), Err(FetchError::NotInFixtures(_))));
    assert!(matches!(fetch("X1", dir.path(), true), Err(FetchError::InvalidAnum(_))));
}

#[test]
fn downloads_once_then_uses_cache() {
    let (url, hits) = serve("200 OK", "# test\n0 2\n1 3\n2 5\n");
    let dir = tempfile::tempdir().unwrap();
    let f = Fetcher::new(dir.path(), false).with_base_url(&url);
    let e = f.fetch("A000040").unwrap();
    assert_eq!(e.values, [2, 3, 5]);
    assert_eq!(e.source, Source::Network);
    assert!(dir.path().join("b000040.txt").exists());
    let again = f.fetch("A000040").unwrap();
    assert_eq!(again, e);
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    // the cache also serves an offline fetcher
    let off = Fetcher::new(dir.path(), true).fetch("A000040").unwrap();
    assert_eq!(off.values, e.values);
}

#[test]
fn http_errors_and_bad_bodies() {
    let dir = tempfile::tempdir().unwrap();
    let (url, _) = serve("404 Not Found", "");
    let f = Fetcher::new(dir.path(), false).with_base_url(&url);
    assert!(matches!(f.fetch("A000041"), Err(FetchError::NetworkError(_))));
    let (url, _) = serve("200 OK", "<html>not a b-file</html>\n");
    let f = Fetcher::new(dir.path(), false).with_base_url(&url);
    assert!(matches!(f.fetch("A000042"), Err(FetchError::MalformedResponse(_))));
    assert!(!dir.path().join("b000042.txt").exists());
}

#[test]
fn unreachable_server() {
    let dir = tempfile::tempdir().unwrap();
    // bind and drop to get a port with nothing listening
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let f = Fetcher::new(dir.path(), false).with_base_url(format!("http://127.0.0.1:{port}"));
    assert!(matches!(f.fetch("A000043"), Err(FetchError::NetworkError(_))));
}
