//! Loopback TLS 1.3 responder with a throwaway ECDSA P-256 certificate.

use std::net::{SocketAddr, TcpListener};
use std::sync::Arc;
use std::thread::JoinHandle;

use rustls::pki_types::{PrivateKeyDer, PrivatePkcs8KeyDer};
use rustls::{ServerConfig, ServerConnection, StreamOwned};

pub struct Responder {
    pub addr: SocketAddr,
    handle: Option<JoinHandle<()>>,
}

impl Responder {
    /// Serves `handshakes` connections, then exits.
    pub fn start(handshakes: usize) -> Self {
        let certified =
            rcgen::generate_simple_self_signed(vec!["localhost".to_string()]).expect("generate certificate");
        let key = PrivateKeyDer::Pkcs8(PrivatePkcs8KeyDer::from(certified.key_pair.serialize_der()));
        let provider = Arc::new(rustls::crypto::ring::default_provider());
        let config = ServerConfig::builder_with_provider(provider)
            .with_protocol_versions(&[&rustls::version::TLS13])
            .expect("tls 1.3")
            .with_no_client_auth()
            .with_single_cert(vec![certified.cert.der().clone()], key)
            .expect("server certificate");
        let config = Arc::new(config);

        let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        let addr = listener.local_addr().expect("local addr");
        let handle = std::thread::spawn(move || {
            for stream in listener.incoming().take(handshakes) {
                let Ok(stream) = stream else { continue };
                let Ok(conn) = ServerConnection::new(config.clone()) else {
                    continue;
                };
                let mut tls = StreamOwned::new(conn, stream);
                while tls.conn.is_handshaking() {
                    if tls.conn.complete_io(&mut tls.sock).is_err() {
                        break;
                    }
                }
                // flush the server's final flight before closing
                let _ = tls.conn.complete_io(&mut tls.sock);
            }
        });
        Self {
            addr,
            handle: Some(handle),
        }
    }

    pub fn join(mut self) {
        if let Some(h) = self.handle.take() {
            h.join().expect("responder thread");
        }
    }
}
