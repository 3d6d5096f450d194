//! A contradiction resolved automatically from source credibility.
//!
//! cargo run --example simpsons_revision

use sneng::snepslog::Session;

const KB: &str = "fun(learning).
~fun(spitting).
Source(Lisa, fun(learning)).
Source(Lisa, ~fun(spitting)).
Source(Bart, fun(spitting)).
Sgreater(Lisa, Marge).
Sgreater(Marge, Bart).
Sgreater(Bart, Homer).
Greater(fun(learning), ~fun(spitting)).
";

fn main() {
    let mut s = Session::default();
    s.run_script(KB);
    // Bart is less credible than Lisa, so his claim is the one retracted.
    for line in s.run_script("fun(spitting).\nfun(x)?").transcript {
        println!("{line}");
    }
}
