//! Assert propositions, then ask with and without variables.
//!
//! cargo run --example tell_ask

use sneng::snepslog::Session;

fn main() {
    let mut s = Session::default();
    let out = s.run_script(
        "likes(ann, tea).
         likes(bob, coffee).
         all(x)(likes(x, tea) => calm(x)).
         calm(ann)?
         likes(x, y)?
         calm(bob)?",
    );
    for line in out.transcript {
        println!("{line}");
    }

    let answers = s.ask("likes(who, coffee)?").unwrap();
    for a in answers {
        println!("who = {}", a.bindings["who"]);
    }
}
