//! whendo and ifdo rules driving primitive acts.
//!
//! cargo run --example traffic_light

use std::fs;

use sneng::corpus::corpus_dir;
use sneng::snepslog::Session;

fn main() {
    let script = fs::read_to_string(corpus_dir().join("traffic-light.snlog")).unwrap();
    let mut s = Session::default();
    for line in s.run_script(&script).transcript {
        println!("{line}");
    }
}
