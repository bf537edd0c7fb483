//! Formula parser for the s-expression grammar.
//!
//! ```text
//! formula := "(atom" NAME arg* ")" | "false" | "true" | "(=>" f f ")" | "(not" f ")"
//!          | "(and" f f+ ")" | "(or" f f+ ")" | "(iff" f f ")"
//!          | "(K" AGENT f ")" | "(E" group f ")" | "(C" group f ")"
//!          | "(forall" VAR f ")"
//! group   := "(" AGENT* ")"
//! ```
//!
//! Two abbreviations are accepted on input: `(NAME arg*)` for an atom whose
//! name is not a keyword, and a bare `NAME` for a nullary atom.
//!
//! `(forall i f)` is the conjunction of `f[i := a]` over the agents `a` of
//! the domain, in id order (`true` for an empty domain). It needs a domain.

use crate::formula::{Agent, Domain, Formula, Group};
use crate::sexpr::{read_one, ParseError, Sexp};

const KEYWORDS: &[&str] = &[
    "atom", "false", "true", "=>", "not", "and", "or", "iff", "K", "E", "C", "forall",
];

fn substitute(e: &Sexp, var: &str, value: &Sexp) -> Sexp {
    match e {
        Sexp::Symbol(s, _) if s == var => value.clone(),
        Sexp::List(items, pos) => {
            let shadowed =
                e.head() == Some("forall") && items.get(1).and_then(Sexp::as_symbol) == Some(var);
            if shadowed {
                e.clone()
            } else {
                Sexp::List(
                    items.iter().map(|x| substitute(x, var, value)).collect(),
                    *pos,
                )
            }
        }
        _ => e.clone(),
    }
}

pub fn parse_formula(text: &str, domain: Option<&Domain>) -> Result<Formula, ParseError> {
    formula_from_sexp(&read_one(text)?, domain)
}

pub fn parse_group(text: &str, domain: Option<&Domain>) -> Result<Group, ParseError> {
    group_from_sexp(&read_one(text)?, domain)
}

/// Resolves a decimal id or a declared agent name.
pub fn agent_from_sexp(e: &Sexp, domain: Option<&Domain>) -> Result<Agent, ParseError> {
    let s = match e {
        Sexp::Symbol(s, _) => s,
        _ => return Err(ParseError::new(e.pos(), "expected an agent")),
    };
    let agent = if let Ok(id) = s.parse::<u32>() {
        Agent(id)
    } else {
        match domain.and_then(|d| d.lookup(s)) {
            Some(a) => a,
            None => return Err(ParseError::new(e.pos(), format!("unknown agent `{s}`"))),
        }
    };
    if let Some(d) = domain {
        if !d.contains(agent) {
            return Err(ParseError::new(e.pos(), format!("unknown agent `{s}`")));
        }
    }
    Ok(agent)
}

pub fn group_from_sexp(e: &Sexp, domain: Option<&Domain>) -> Result<Group, ParseError> {
    match e {
        Sexp::List(items, _) => items
            .iter()
            .map(|x| agent_from_sexp(x, domain))
            .collect::<Result<Group, _>>(),
        _ => Err(ParseError::new(
            e.pos(),
            "malformed group: expected `(agent ...)`",
        )),
    }
}

pub fn formula_from_sexp(e: &Sexp, domain: Option<&Domain>) -> Result<Formula, ParseError> {
    match e {
        Sexp::Str(s, _) => parse_formula(s, domain),
        Sexp::Symbol(s, pos) => match s.as_str() {
            "false" => Ok(Formula::False),
            "true" => Ok(Formula::top()),
            s if KEYWORDS.contains(&s) => Err(ParseError::new(
                *pos,
                format!("keyword `{s}` used as an atom"),
            )),
            s => Ok(Formula::atom(s)),
        },
        Sexp::List(items, pos) => {
            let Some(head) = items.first() else {
                return Err(ParseError::new(*pos, "empty formula `()`"));
            };
            let Some(op) = head.as_symbol() else {
                return Err(ParseError::new(head.pos(), "expected an operator"));
            };
            let args = &items[1..];
            let sub = |k: usize| formula_from_sexp(&args[k], domain);
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(ParseError::new(
                        *pos,
                        format!("`{op}` expects {n} arguments, got {}", args.len()),
                    ))
                }
            };
            match op {
                "atom" => {
                    let Some(name) = args.first().and_then(Sexp::as_symbol) else {
                        return Err(ParseError::new(*pos, "`atom` expects a name"));
                    };
                    let xs = args[1..]
                        .iter()
                        .map(|x| agent_from_sexp(x, domain))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::atom_with(name, xs))
                }
                "=>" => {
                    arity(2)?;
                    Ok(Formula::implies(sub(0)?, sub(1)?))
                }
                "iff" => {
                    arity(2)?;
                    Ok(Formula::iff(sub(0)?, sub(1)?))
                }
                "not" => {
                    arity(1)?;
                    Ok(Formula::not(sub(0)?))
                }
                "and" | "or" => {
                    if args.len() < 2 {
                        return Err(ParseError::new(
                            *pos,
                            format!("`{op}` expects at least 2 arguments"),
                        ));
                    }
                    let parts = args
                        .iter()
                        .map(|x| formula_from_sexp(x, domain))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(if op == "and" {
                        Formula::conj(parts)
                    } else {
                        Formula::disj(parts)
                    })
                }
                "K" => {
                    arity(2)?;
                    Ok(Formula::knows(agent_from_sexp(&args[0], domain)?, sub(1)?))
                }
                "E" | "C" => {
                    arity(2)?;
                    let g = group_from_sexp(&args[0], domain)?;
                    let body = sub(1)?;
                    Ok(if op == "E" {
                        Formula::everyone(g, body)
                    } else {
                        Formula::common(g, body)
                    })
                }
                "forall" => {
                    arity(2)?;
                    let Some(var) = args[0].as_symbol() else {
                        return Err(ParseError::new(
                            args[0].pos(),
                            "`forall` expects a variable",
                        ));
                    };
                    let Some(d) = domain else {
                        return Err(ParseError::new(*pos, "`forall` needs declared agents"));
                    };
                    let parts = d
                        .agents()
                        .map(|a| {
                            let value = Sexp::Symbol(a.id().to_string(), args[0].pos());
                            formula_from_sexp(&substitute(&args[1], var, &value), domain)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::conj(parts))
                }
                "false" | "true" => Err(ParseError::new(
                    head.pos(),
                    format!("`{op}` takes no arguments"),
                )),
                name => {
                    let xs = args
                        .iter()
                        .map(|x| agent_from_sexp(x, domain))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::atom_with(name, xs))
                }
            }
        }
    }
}
