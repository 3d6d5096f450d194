//! A contradiction with no credibility information, resolved by a dialog
//! that always retracts the newest candidate.
//!
//! cargo run --example interactive_revision

use sneng::snepslog::{Session, SessionOptions};
use sneng::{RevisionMode, RevisionRequest, TermId};

fn main() {
    let mut s = Session::new(SessionOptions {
        mode: RevisionMode::Interactive,
        ..SessionOptions::default()
    });
    s.set_dialog(Some(Box::new(|req: &RevisionRequest| -> Option<Vec<TermId>> {
        println!("contradiction between {} and {}", req.p_display, req.not_p_display);
        for c in &req.candidates {
            println!("  candidate wff{}: {}", c.wff, c.display);
        }
        let newest = req.candidates.iter().max_by_key(|c| c.wff)?;
        Some(vec![newest.hypothesis])
    })));
    for line in s.run_script("rain.\nrain => wet.\n~wet.\nwet?\nrain?").transcript {
        println!("{line}");
    }
}
