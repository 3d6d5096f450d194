//! A client for serve mode, talking to an in-process server.
//!
//! cargo run --example serve_client

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use serde_json::{json, Value};
use sneng::snepslog::serve::serve;
use sneng::snepslog::SessionOptions;

fn main() -> std::io::Result<()> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    thread::spawn(move || serve(listener, SessionOptions::default()));

    let stream = TcpStream::connect(addr)?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = stream;
    let requests = [
        json!({"op": "tell", "text": "p.\np => q."}),
        json!({"op": "ask", "text": "q?"}),
        json!({"op": "tell", "text": "~q."}),
        json!({"op": "graph"}),
    ];
    for req in requests {
        println!("> {req}");
        writeln!(writer, "{req}")?;
        loop {
            let mut line = String::new();
            reader.read_line(&mut line)?;
            print!("< {line}");
            let msg: Value = serde_json::from_str(&line)?;
            match msg["op"].as_str() {
                Some("event") => continue,
                Some("revision_request") => {
                    // keep the rule, give up the newest belief
                    let newest = msg["candidates"].as_array().and_then(|c| c.last()).unwrap();
                    let choice = json!({"op": "revision_choice", "retract": [format!("wff{}", newest["wff"])]});
                    println!("> {choice}");
                    writeln!(writer, "{choice}")?;
                }
                _ => break,
            }
        }
    }
    Ok(())
}
