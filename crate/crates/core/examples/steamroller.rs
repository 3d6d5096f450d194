//! Schubert's steamroller, from the corpus.
//!
//! cargo run --release --example steamroller

use sneng::corpus::{corpus_dir, transcript_of};
use sneng::snepslog::SessionOptions;

fn main() {
    let script = std::fs::read_to_string(corpus_dir().join("steamroller.snlog")).unwrap();
    let (_, transcript, ok) = transcript_of(&script, SessionOptions::default());
    print!("{transcript}");
    println!("ok: {ok}");
}
