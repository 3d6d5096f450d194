//! Independent oracles shared by the integration and acceptance tests.
//! None of these call into the engine's inference code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use sneng::{Functor, TermId, TermStore};

/// Truth value of a ground propositional term under `atom`.
pub fn holds(store: &TermStore, t: TermId, atom: &dyn Fn(TermId) -> bool) -> bool {
    let term = store.get(t);
    let args = term.args();
    let count = |ms: &[TermId]| ms.iter().filter(|m| holds(store, **m, atom)).count() as u32;
    match term.functor() {
        Functor::Sym(_) => atom(t),
        Functor::AndOr(i, j) => {
            let k = count(args);
            *i <= k && k <= *j
        }
        Functor::Thresh(i, j) => {
            let k = count(args);
            k < *i || k > *j
        }
        Functor::AndEntail(n) => {
            let (a, c) = args.split_at(*n as usize);
            count(a) < a.len() as u32 || count(c) == c.len() as u32
        }
        Functor::OrEntail(n) => {
            let (a, c) = args.split_at(*n as usize);
            count(a) == 0 || count(c) == c.len() as u32
        }
        Functor::All(_) => panic!("quantified term in a propositional oracle"),
    }
}

/// Ground Horn closure: `rules` are (body, head) over atom names.
pub fn horn_closure(facts: &BTreeSet<String>, rules: &[(Vec<String>, String)]) -> BTreeSet<String> {
    let mut known = facts.clone();
    loop {
        let before = known.len();
        for (body, head) in rules {
            if body.iter().all(|b| known.contains(b)) {
                known.insert(head.clone());
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

/// Transitive closure of a relation by repeated composition.
pub fn transitive_closure(edges: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    let mut rel: BTreeSet<(String, String)> = edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    loop {
        let mut add = Vec::new();
        for (a, b) in &rel {
            for (c, d) in &rel {
                if b == c && !rel.contains(&(a.clone(), d.clone())) {
                    add.push((a.clone(), d.clone()));
                }
            }
        }
        if add.is_empty() {
            return rel;
        }
        rel.extend(add);
    }
}

/// Clauses over positive integer variables; `-v` is the negated literal.
pub type Clause = Vec<i32>;

/// Plain DPLL with unit propagation.
pub fn satisfiable(clauses: &[Clause]) -> bool {
    fn solve(clauses: Vec<Clause>) -> bool {
        let mut clauses = clauses;
        loop {
            if clauses.iter().any(|c| c.is_empty()) {
                return false;
            }
            let Some(unit) = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]) else {
                break;
            };
            clauses = assign(&clauses, unit);
        }
        let Some(lit) = clauses.first().map(|c| c[0]) else {
            return true;
        };
        solve(assign(&clauses, lit)) || solve(assign(&clauses, -lit))
    }
    fn assign(clauses: &[Clause], lit: i32) -> Vec<Clause> {
        clauses
            .iter()
            .filter(|c| !c.contains(&lit))
            .map(|c| c.iter().copied().filter(|l| *l != -lit).collect())
            .collect()
    }
    solve(clauses.to_vec())
}

/// Interns ground atoms as DPLL variables.
#[derive(Default)]
pub struct AtomTable {
    ids: BTreeMap<String, i32>,
}

impl AtomTable {
    pub fn lit(&mut self, name: &str, positive: bool) -> i32 {
        let n = self.ids.len() as i32 + 1;
        let v = *self.ids.entry(name.to_string()).or_insert(n);
        if positive {
            v
        } else {
            -v
        }
    }
}

pub const STEAMROLLER_DOMAIN: [&str; 8] = ["w", "f", "b", "c", "s", "g", "pc", "ps"];

/// The steamroller instance as ground clauses, written from the puzzle
/// statement rather than from the corpus script's rule encoding.
pub fn steamroller_clauses(atoms: &mut AtomTable) -> Vec<Clause> {
    let d = STEAMROLLER_DOMAIN;
    let mut cs: Vec<Clause> = Vec::new();
    let fact = |atoms: &mut AtomTable, cs: &mut Vec<Clause>, name: String, pos: bool| cs.push(vec![atoms.lit(&name, pos)]);
    for a in ["w", "f", "b", "c", "s"] {
        fact(atoms, &mut cs, format!("an({a})"), true);
    }
    for p in ["g", "pc", "ps"] {
        fact(atoms, &mut cs, format!("pl({p})"), true);
    }
    // caterpillars and snails are smaller than birds, birds than foxes,
    // foxes than wolves
    for (x, y) in [("c", "b"), ("s", "b"), ("b", "f"), ("f", "w")] {
        fact(atoms, &mut cs, format!("ms({x}, {y})"), true);
    }
    for (x, y, pos) in [
        ("w", "f", false),
        ("w", "g", false),
        ("b", "c", true),
        ("b", "s", false),
        ("c", "pc", true),
        ("s", "ps", true),
    ] {
        fact(atoms, &mut cs, format!("eats({x}, {y})"), pos);
    }
    for x in d {
        // every animal likes all plants, or all smaller plant eaters
        cs.push(vec![
            atoms.lit(&format!("an({x})"), false),
            atoms.lit(&format!("ap({x})"), true),
            atoms.lit(&format!("as({x})"), true),
        ]);
        for y in d {
            cs.push(vec![
                atoms.lit(&format!("ap({x})"), false),
                atoms.lit(&format!("pl({y})"), false),
                atoms.lit(&format!("eats({x}, {y})"), true),
            ]);
            cs.push(vec![
                atoms.lit(&format!("as({x})"), false),
                atoms.lit(&format!("an({y})"), false),
                atoms.lit(&format!("ms({y}, {x})"), false),
                atoms.lit(&format!("pe({y})"), false),
                atoms.lit(&format!("eats({x}, {y})"), true),
            ]);
            // eating some plant makes a plant eater
            cs.push(vec![
                atoms.lit(&format!("eats({x}, {y})"), false),
                atoms.lit(&format!("pl({y})"), false),
                atoms.lit(&format!("pe({x})"), true),
            ]);
        }
    }
    cs
}

/// True when the clauses entail the ground atom.
pub fn entails(clauses: &[Clause], atoms: &mut AtomTable, atom: &str) -> bool {
    let mut with_negation = clauses.to_vec();
    with_negation.push(vec![atoms.lit(atom, false)]);
    !satisfiable(&with_negation)
}

pub const JOBS_PEOPLE: [&str; 4] = ["Roberta", "Thelma", "Steve", "Pete"];
pub const JOBS: [&str; 8] = ["chef", "guard", "nurse", "clerk", "police", "teacher", "actor", "boxer"];

/// Every job -> person assignment satisfying the puzzle clues, by
/// exhaustive enumeration of all 4^8 assignments.
pub fn jobs_solutions() -> Vec<BTreeMap<&'static str, &'static str>> {
    let female = |p: &str| p == "Roberta" || p == "Thelma";
    let mut out = Vec::new();
    for code in 0..4usize.pow(8) {
        let holder: BTreeMap<&str, &str> = JOBS
            .iter()
            .enumerate()
            .map(|(k, j)| (*j, JOBS_PEOPLE[(code / 4usize.pow(k as u32)) % 4]))
            .collect();
        let ok = JOBS_PEOPLE
            .iter()
            .all(|p| holder.values().filter(|h| *h == p).count() == 2)
            && !female(holder["nurse"])
            && !female(holder["actor"])
            // the chef's husband is the clerk
            && female(holder["chef"])
            && !female(holder["clerk"])
            && holder["boxer"] != "Roberta"
            // no education past ninth grade
            && !["nurse", "police", "teacher"].iter().any(|j| holder[j] == "Pete")
            // Roberta, the chef and the police officer went golfing
            && holder["chef"] != "Roberta"
            && holder["police"] != "Roberta"
            && holder["chef"] != holder["police"];
        if ok {
            out.push(holder);
        }
    }
    out
}
