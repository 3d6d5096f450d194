//! Dumping a network to text and loading it back.
//!
//! cargo run --example persistence

use sneng::snepslog::{dump, load_str, Session, SessionOptions};

fn main() {
    let mut s = Session::default();
    s.run_script("h1.\nh2.\nh1 => c.\n%retract h2");
    let text = dump(s.engine());
    print!("{text}");

    let mut restored = load_str(&text, SessionOptions::default()).unwrap();
    println!("c restored: {}", !restored.ask("c?").unwrap().is_empty());
    println!("h2 restored: {}", !restored.ask("h2?").unwrap().is_empty());
}
