//! Logical readings of terms and the elimination rules for each connective.
//!
//! Every rule is compiled into a list of [`Schema`]s: conjunctive premise
//! lists that entail one conclusion. Forward and backward inference both run
//! over schemas, so the rule table lives in exactly one place.
//!
//! The table:
//!
//! * `{A..} v=> {C..}`: any one antecedent yields every consequent.
//! * `{A..} &=> {C..}`: all antecedents yield every consequent.
//! * `andor(i,j){P1..Pn}`: `j` true members force the negation of each other
//!   member; `n-i` negated members force each other member.
//! * `thresh(i,j){P1..Pn}`: `i` true members plus `n-1-j` negated members
//!   force the remaining member; `i-1` true plus `n-j` negated force its
//!   negation.
//! * `all(x..)(B)`: the schemas of `B`, with `x..` free; an atomic or negated
//!   body is itself a premise-free schema.

use crate::term::{Functor, TermError, TermId, TermStore};

/// The connective structure of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connective {
    Atomic,
    AndOr {
        min: u32,
        max: u32,
        members: Vec<TermId>,
    },
    Thresh {
        min: u32,
        max: u32,
        members: Vec<TermId>,
    },
    AndEntail {
        antecedents: Vec<TermId>,
        consequents: Vec<TermId>,
    },
    OrEntail {
        antecedents: Vec<TermId>,
        consequents: Vec<TermId>,
    },
    All {
        vars: Vec<TermId>,
        body: TermId,
    },
}

impl Connective {
    pub fn read(store: &TermStore, t: TermId) -> Connective {
        let term = store.get(t);
        let args = term.args();
        match *term.functor() {
            Functor::Sym(_) => Connective::Atomic,
            Functor::AndOr(min, max) => Connective::AndOr {
                min,
                max,
                members: args.to_vec(),
            },
            Functor::Thresh(min, max) => Connective::Thresh {
                min,
                max,
                members: args.to_vec(),
            },
            Functor::AndEntail(n) => {
                let (a, c) = args.split_at(n as usize);
                Connective::AndEntail {
                    antecedents: a.to_vec(),
                    consequents: c.to_vec(),
                }
            }
            Functor::OrEntail(n) => {
                let (a, c) = args.split_at(n as usize);
                Connective::OrEntail {
                    antecedents: a.to_vec(),
                    consequents: c.to_vec(),
                }
            }
            Functor::All(n) => Connective::All {
                vars: args[..n as usize].to_vec(),
                body: args[n as usize],
            },
        }
    }

    pub fn is_rule(&self) -> bool {
        !matches!(self, Connective::Atomic)
    }
}

/// `premises` jointly entail `conclusion`, given the rule they came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schema {
    pub premises: Vec<TermId>,
    pub conclusion: TermId,
}

/// Compiled form of one rule term.
#[derive(Clone, Debug, Default)]
pub struct RuleSchemas {
    /// Variables free in the schemas (bound by the rule's `all`).
    pub vars: Vec<TermId>,
    pub schemas: Vec<Schema>,
}

/// Compiles `rule` into schemas. Atomic terms compile to nothing.
pub fn compile(store: &mut TermStore, rule: TermId) -> Result<RuleSchemas, TermError> {
    let mut vars = Vec::new();
    let mut body = rule;
    while let Connective::All { vars: v, body: b } = Connective::read(store, body) {
        vars.extend(v);
        body = b;
    }
    let mut schemas = Vec::new();
    let quantified = body != rule;
    match Connective::read(store, body) {
        Connective::Atomic => {
            if quantified {
                schemas.push(Schema {
                    premises: Vec::new(),
                    conclusion: body,
                });
            }
        }
        Connective::OrEntail {
            antecedents,
            consequents,
        } => {
            for a in &antecedents {
                for c in &consequents {
                    schemas.push(Schema {
                        premises: vec![*a],
                        conclusion: *c,
                    });
                }
            }
        }
        Connective::AndEntail {
            antecedents,
            consequents,
        } => {
            for c in &consequents {
                schemas.push(Schema {
                    premises: antecedents.clone(),
                    conclusion: *c,
                });
            }
        }
        Connective::AndOr { min, max, members } => {
            let n = members.len();
            let (i, j) = (min as usize, max as usize);
            if quantified && min == 0 && max == 0 && n == 1 {
                schemas.push(Schema {
                    premises: Vec::new(),
                    conclusion: body,
                });
            }
            for (k, &x) in members.iter().enumerate() {
                let others: Vec<TermId> = without(&members, k);
                if j < n {
                    let not_x = store.negation_of(x)?;
                    if not_x != body {
                        for trues in combinations(&others, j) {
                            schemas.push(Schema {
                                premises: trues,
                                conclusion: not_x,
                            });
                        }
                    }
                }
                if i >= 1 {
                    for falses in combinations(&others, n - i) {
                        let premises = negate_all(store, &falses)?;
                        schemas.push(Schema {
                            premises,
                            conclusion: x,
                        });
                    }
                }
            }
        }
        Connective::Thresh { min, max, members } => {
            let n = members.len();
            let (i, j) = (min as usize, max as usize);
            for (k, &x) in members.iter().enumerate() {
                let others: Vec<TermId> = without(&members, k);
                // x forced true: i true, n-1-j false
                if j < n {
                    push_mixed(store, &mut schemas, &others, i, n - 1 - j, x)?;
                }
                // x forced false: i-1 true, n-j false
                if i >= 1 {
                    let not_x = store.negation_of(x)?;
                    push_mixed(store, &mut schemas, &others, i - 1, n - j, not_x)?;
                }
            }
        }
        Connective::All { .. } => unreachable!("flattened above"),
    }
    Ok(RuleSchemas { vars, schemas })
}

fn push_mixed(
    store: &mut TermStore,
    out: &mut Vec<Schema>,
    others: &[TermId],
    trues: usize,
    falses: usize,
    conclusion: TermId,
) -> Result<(), TermError> {
    if trues + falses > others.len() {
        return Ok(());
    }
    for t in combinations(others, trues) {
        let rest: Vec<TermId> = others.iter().copied().filter(|o| !t.contains(o)).collect();
        for f in combinations(&rest, falses) {
            let mut premises = t.clone();
            premises.extend(negate_all(store, &f)?);
            out.push(Schema {
                premises,
                conclusion,
            });
        }
    }
    Ok(())
}

fn negate_all(store: &mut TermStore, ts: &[TermId]) -> Result<Vec<TermId>, TermError> {
    ts.iter().map(|t| store.negation_of(*t)).collect()
}

fn without(v: &[TermId], k: usize) -> Vec<TermId> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, t)| *t)
        .collect()
}

/// All `k`-element subsets of `items`, in lexicographic index order.
pub fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|i| items[*i]).collect());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != pos + items.len() - k {
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        let v = [1, 2, 3, 4];
        assert_eq!(combinations(&v, 0), vec![Vec::<i32>::new()]);
        assert_eq!(combinations(&v, 2).len(), 6);
        assert_eq!(combinations(&v, 4), vec![vec![1, 2, 3, 4]]);
        assert!(combinations(&v, 5).is_empty());
        assert_eq!(combinations(&v, 1), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    fn setup() -> (TermStore, TermId, TermId) {
        let mut s = TermStore::new();
        let a = s.atom("a");
        let b = s.atom("b");
        (s, a, b)
    }

    #[test]
    fn negation_compiles_to_nothing() {
        let (mut s, a, _) = setup();
        let na = s.negation_of(a).unwrap();
        assert!(compile(&mut s, na).unwrap().schemas.is_empty());
    }

    #[test]
    fn xor_schemas() {
        let (mut s, a, b) = setup();
        let xor = s.andor(1, 1, vec![a, b]).unwrap();
        let rs = compile(&mut s, xor).unwrap();
        let na = s.negation_of(a).unwrap();
        let nb = s.negation_of(b).unwrap();
        let expected = [
            Schema { premises: vec![b], conclusion: na },
            Schema { premises: vec![nb], conclusion: a },
            Schema { premises: vec![a], conclusion: nb },
            Schema { premises: vec![na], conclusion: b },
        ];
        assert_eq!(rs.schemas.len(), 4);
        for e in &expected {
            assert!(rs.schemas.contains(e), "{e:?}");
        }
    }

    #[test]
    fn conjunction_yields_members_unconditionally() {
        let (mut s, a, b) = setup();
        let both = s.andor(2, 2, vec![a, b]).unwrap();
        let rs = compile(&mut s, both).unwrap();
        let free: Vec<TermId> = rs
            .schemas
            .iter()
            .filter(|sc| sc.premises.is_empty())
            .map(|sc| sc.conclusion)
            .collect();
        assert_eq!(free, vec![a, b]);
    }

    #[test]
    fn iff_schemas() {
        let (mut s, a, b) = setup();
        let iff = s.thresh(1, 1, vec![a, b]).unwrap();
        let rs = compile(&mut s, iff).unwrap();
        assert!(rs.schemas.contains(&Schema {
            premises: vec![a],
            conclusion: b
        }));
        let na = s.negation_of(a).unwrap();
        let nb = s.negation_of(b).unwrap();
        assert!(rs.schemas.contains(&Schema {
            premises: vec![na],
            conclusion: nb
        }));
        assert_eq!(rs.schemas.len(), 4);
    }

    #[test]
    fn quantified_body_keeps_variables_free() {
        let mut s = TermStore::new();
        let x = s.var("x");
        let man = s.app("man", vec![x]);
        let mortal = s.app("mortal", vec![x]);
        let imp = s.implies(man, mortal);
        let rule = s.forall(vec![x], imp).unwrap();
        let rs = compile(&mut s, rule).unwrap();
        assert_eq!(rs.vars, vec![x]);
        assert_eq!(
            rs.schemas,
            vec![Schema {
                premises: vec![man],
                conclusion: mortal
            }]
        );
        let fact = s.forall(vec![x], man).unwrap();
        let rs = compile(&mut s, fact).unwrap();
        assert_eq!(rs.schemas[0].premises, Vec::<TermId>::new());
    }
}
