//! Recursive rules answered by backward chaining with goal tables.
//!
//! cargo run --example ancestors

use sneng::snepslog::Session;

fn main() {
    let mut s = Session::default();
    s.run_script(
        "all(x, y)(parent(x, y) => anc(x, y)).
         all(x, y, z)({anc(x, y), anc(y, z)} &=> {anc(x, z)}).
         parent(a, b).
         parent(b, c).
         parent(c, d).
         parent(a, e).",
    );
    let mut pairs: Vec<String> = s
        .ask("anc(u, v)?")
        .unwrap()
        .into_iter()
        .map(|a| format!("{} -> {}", a.bindings["u"], a.bindings["v"]))
        .collect();
    pairs.sort();
    for p in &pairs {
        println!("{p}");
    }
    println!("{} pairs, depth cap hits: {}", pairs.len(), s.engine().stats().depth_cap_hits);
}
