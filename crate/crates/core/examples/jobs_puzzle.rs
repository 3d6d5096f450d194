//! The jobs puzzle, solved by the corpus script.
//!
//! cargo run --release --example jobs_puzzle

use std::time::Instant;

use sneng::corpus::{corpus_dir, transcript_of};
use sneng::snepslog::SessionOptions;

fn main() {
    let script = std::fs::read_to_string(corpus_dir().join("jobs-puzzle.snlog")).unwrap();
    let start = Instant::now();
    let (mut s, _, _) = transcript_of(&script, SessionOptions::default());
    let mut rows: Vec<String> = s
        .ask("has(x, y)?")
        .unwrap()
        .into_iter()
        .map(|a| format!("{:<8} {}", a.bindings["x"], a.bindings["y"]))
        .collect();
    rows.sort();
    for r in rows {
        println!("{r}");
    }
    println!("solved in {:.2?}", start.elapsed());
}
