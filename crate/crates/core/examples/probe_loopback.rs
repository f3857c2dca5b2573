//! Starts a throwaway TLS 1.3 server on 127.0.0.1 and probes it. Nothing
//! leaves the machine.

#[path = "../tests/support/responder.rs"]
mod responder;

use quasar_core::inventory::{classify, probe_endpoint, ProbeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = responder::Responder::start(1);
    let result = probe_endpoint("127.0.0.1", server.addr.port(), &ProbeOptions::default())?;
    server.join();

    println!("protocol   {}", result.protocol_version);
    println!(
        "group      {}",
        result.key_exchange_group.as_deref().unwrap_or("-")
    );
    println!(
        "leaf key   {}",
        result.leaf_public_key_algorithm.as_deref().unwrap_or("-")
    );
    println!(
        "signature  {}",
        result.leaf_signature_algorithm.as_deref().unwrap_or("-")
    );
    println!("class      {:?}", classify(&result.asset).vulnerability);
    Ok(())
}
