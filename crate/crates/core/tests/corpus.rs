//! Every corpus script reproduces its golden transcript.

use sneng::corpus::{corpus_dir, discover, run_case, CorpusCase};
use sneng::snepslog::Session;

fn lisa_wins(s: &mut Session) -> Result<(), String> {
    let a = s.ask("fun(x)?").map_err(|e| e.to_string())?;
    match a.as_slice() {
        [one] if one.bindings["x"] == "learning" => Ok(()),
        _ => Err(format!("expected only fun(learning), got {} answers", a.len())),
    }
}

fn acts_fire_once(s: &mut Session) -> Result<(), String> {
    let out = s.run_script("green(light1)?\ngreen(light2)!");
    match out.transcript.iter().find(|l| l.starts_with("ACT: ")) {
        Some(l) => Err(format!("repeated act {l}")),
        None => Ok(()),
    }
}

fn oracle_for(case: CorpusCase) -> CorpusCase {
    match case.name.as_str() {
        "simpsons" => case.with_oracle(lisa_wins),
        "traffic-light" => case.with_oracle(acts_fire_once),
        _ => case,
    }
}

#[test]
fn golden_transcripts() {
    let cases = discover(&corpus_dir()).unwrap();
    let names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["ancestors", "jobs-puzzle", "simpsons", "steamroller", "traffic-light"]);
    let mut failures = Vec::new();
    for case in cases.into_iter().map(oracle_for) {
        let r = run_case(&case, false).unwrap();
        if let Some(diff) = r.diff {
            failures.push(format!("{}:\n{diff}", r.name));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn traffic_light_performs_its_acts() {
    let case = CorpusCase::new(corpus_dir().join("traffic-light.snlog"));
    let r = run_case(&case, false).unwrap();
    let acts: Vec<&str> = r.transcript.lines().filter(|l| l.starts_with("ACT: ")).collect();
    assert_eq!(
        acts,
        ["ACT: lookat(light1)", "ACT: believe(green(light1))", "ACT: cross(street1)", "ACT: cross(street2)"]
    );
}
