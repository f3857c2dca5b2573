//! Serves the HTTP API on an ephemeral loopback port, posts a snapshot to
//! `/api/score` and prints the response.
//!
//! Pass `--stay` to keep serving (until ctrl-c) and try it from a browser or
//! curl instead.

use std::io::{Read, Write};
use std::net::TcpStream;
use std::sync::Arc;

use quasar_workbench::api::{router, serve, AppState};
use quasar_workbench::store::SnapshotStore;
use quasar_workbench::SystemClock;

const SNAPSHOT: &str = include_str!("../../../fixtures/snapshot-basic.json");

fn post(addr: std::net::SocketAddr, path: &str, body: &str) -> std::io::Result<String> {
    let mut stream = TcpStream::connect(addr)?;
    write!(
        stream,
        "POST {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\n\
         Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )?;
    let mut response = String::new();
    stream.read_to_string(&mut response)?;
    Ok(response)
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let store = SnapshotStore::open(std::env::temp_dir().join("quasar-example-api"))?;
    let app = router(
        Arc::new(AppState {
            store,
            clock: Arc::new(SystemClock),
        }),
        None,
    );
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    println!("listening on http://{addr}");

    if std::env::args().any(|a| a == "--stay") {
        serve(listener, app).await?;
        return Ok(());
    }

    tokio::spawn(async move { axum::serve(listener, app).await });
    let response = tokio::task::spawn_blocking(move || post(addr, "/api/score", SNAPSHOT)).await??;
    let (head, body) = response.split_once("\r\n\r\n").unwrap_or((&response, ""));
    println!("{}", head.lines().next().unwrap_or_default());
    let report: serde_json::Value = serde_json::from_str(body)?;
    println!("pqr {}  rs {}", report["pqr"]["literal"], report["rs"]);
    Ok(())
}
