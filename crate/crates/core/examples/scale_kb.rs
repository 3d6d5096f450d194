//! A generated knowledge base of independent implication chains.
//!
//! cargo run --release --example scale_kb -- 20 25

use std::time::Instant;

use sneng::corpus::{generate_chain_kb, transcript_of};
use sneng::snepslog::SessionOptions;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("a number"));
    let chains = args.next().unwrap_or(20);
    let links = args.next().unwrap_or(25);
    let start = Instant::now();
    let (mut s, _, _) = transcript_of(&generate_chain_kb(chains, links), SessionOptions::default());
    println!("{} terms loaded in {:.2?}", s.engine().store().len(), start.elapsed());
    let goal = format!("p(c{}, n{links})?", chains - 1);
    let start = Instant::now();
    let n = s.ask(&goal).unwrap().len();
    println!("{goal} {n} answer(s) in {:.2?}", start.elapsed());
}
