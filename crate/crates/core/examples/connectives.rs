//! The set-oriented connectives: andor, thresh and the entailments.
//!
//! cargo run --example connectives

use sneng::snepslog::Session;

fn main() {
    let mut s = Session::default();
    let out = s.run_script(
        "; exactly one of the three is on duty
         andor(1,1){alice, bob, carol}.
         ~alice.
         ~bob.
         carol?
         ; either both or neither
         thresh(1,1){lamp, power}.
         power.
         lamp?
         ; any antecedent suffices
         {snow, hail} v=> {cold}.
         hail.
         cold?",
    );
    for line in out.transcript {
        println!("{line}");
    }
}
