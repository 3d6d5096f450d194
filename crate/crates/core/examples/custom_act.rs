//! Registering a primitive act with its own effect.
//!
//! cargo run --example custom_act

use std::rc::Rc;

use sneng::snepslog::Session;
use sneng::ActHandler;

fn main() {
    let mut s = Session::default();
    // `ring(x)` makes the engine believe `rung(x)`.
    let ring: ActHandler = Rc::new(|engine, args| {
        let rung = engine.app("rung", args.to_vec());
        engine.assert_hyp(rung).map(|_| ()).map_err(|e| e.to_string())
    });
    s.engine_mut().register_primitive("ring", 1, ring).unwrap();
    let out = s.run_script(
        "all(d)(whendo(visitor(d), ring(d))).
         visitor(front).
         rung(x)?",
    );
    for line in out.transcript {
        println!("{line}");
    }
}
