//! Text formats for proofs (`.cklp`) and theories (`.ckt`).
//!
//! A proof file holds one node tree, optionally wrapped in a header:
//!
//! ```text
//! (proof
//!   (theory "wisemen")
//!   (basis ck)
//!   (agents (0 Alice) (1 Bob) (2 Carol))
//!   (axiom "One_hat" "(and ...)")
//!   (conclusion "(=> ...)")
//!   (MP (PROPER "One_hat") (TAUT "(=> ...)")))
//! ```
//!
//! Node forms: `(TAUT f)`, `(AX_K i f g)`, `(AX_T i f)`, `(AX_E_DEF G f)`,
//! `(AX_FB G f)`, `(AX_A7 G f)`, `(AX_A8 G f)`, `(AX_A9 G f g)`,
//! `(AX_A10 G f)`, `(PROPER "name")`, `(MP minor major)`, `(KG i node)`,
//! `(LFB G f node)`, `(R3 G node)`, `(R10 G f node)`. Formulas are written
//! as quoted strings; unquoted formulas are accepted on input.
//!
//! A theory file:
//!
//! ```text
//! (theory "id"
//!   (basis ck)
//!   (agents (0 Alice) (1 Bob))
//!   (axiom "Name" "(=> ...)"))
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{print_formula, Agent, Domain, Formula, Group};
use crate::kernel::{Basis, Proof, ProofNode, RuleTag, TecAxiom, Theorem, Theory};
use crate::parse::{agent_from_sexp, formula_from_sexp, group_from_sexp};
use crate::sexpr::{quote, read_one, ParseError, Sexp};

/// A parsed proof file.
#[derive(Clone, Debug)]
pub struct ProofFile {
    pub theory_id: Option<String>,
    pub basis: Option<Basis>,
    pub agents: Option<Domain>,
    pub axioms: Vec<(String, Formula)>,
    pub conclusion: Option<Formula>,
    pub root: Proof,
}

impl ProofFile {
    /// The theory described by the header: declared basis (default `ck`),
    /// declared agents plus any the proof mentions, and the listed axioms.
    pub fn default_theory(&self) -> Result<Theory> {
        let mut domain = self.agents.clone().unwrap_or_default();
        for a in proof_agents(&self.root) {
            domain.insert(a, None);
        }
        let mut t = Theory::new(
            self.theory_id.as_deref().unwrap_or("anonymous"),
            domain,
            self.basis.unwrap_or(Basis::Ck),
        );
        for (name, f) in &self.axioms {
            t.add_axiom(name, f.clone())?;
        }
        Ok(t)
    }

    /// Replays the proof in `t` and compares with the declared conclusion.
    pub fn check(&self, t: &Theory) -> Result<Theorem> {
        let th = t.check_proof(&self.root)?;
        if let Some(want) = &self.conclusion {
            if want != th.conclusion() {
                return Err(Error::shape("conclusion", want, th.conclusion()));
            }
        }
        Ok(th)
    }
}

/// Every agent mentioned anywhere in the proof tree.
pub fn proof_agents(root: &ProofNode) -> BTreeSet<Agent> {
    let mut out = BTreeSet::new();
    root.walk(&mut |_, node| {
        let mut add_group = |g: &Group| out.extend(g.members().iter().copied());
        match node {
            ProofNode::Taut(f) => out.extend(f.agents()),
            ProofNode::AxK { agent, phi, psi } => {
                out.insert(*agent);
                out.extend(phi.agents());
                out.extend(psi.agents());
            }
            ProofNode::AxT { agent, phi } => {
                out.insert(*agent);
                out.extend(phi.agents());
            }
            ProofNode::AxEDef { group, phi } | ProofNode::AxFb { group, phi } => {
                add_group(group);
                out.extend(phi.agents());
            }
            ProofNode::AxTec {
                group, phi, psi, ..
            } => {
                add_group(group);
                out.extend(phi.agents());
                if let Some(psi) = psi {
                    out.extend(psi.agents());
                }
            }
            ProofNode::Proper(_) | ProofNode::Mp(..) => {}
            ProofNode::Kg(i, _) => {
                out.insert(*i);
            }
            ProofNode::Lfb { group, phi, .. } | ProofNode::R10 { group, phi, .. } => {
                add_group(group);
                out.extend(phi.agents());
            }
            ProofNode::R3 { group, .. } => add_group(group),
        }
    });
    out
}

fn f(x: &Formula) -> String {
    quote(&print_formula(x))
}

fn write_node(node: &ProofNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let tag = node.tag();
    let _ = match node {
        ProofNode::Taut(x) => write!(out, "{pad}({tag} {})", f(x)),
        ProofNode::AxK { agent, phi, psi } => {
            write!(out, "{pad}({tag} {agent} {} {})", f(phi), f(psi))
        }
        ProofNode::AxT { agent, phi } => write!(out, "{pad}({tag} {agent} {})", f(phi)),
        ProofNode::AxEDef { group, phi } | ProofNode::AxFb { group, phi } => {
            write!(out, "{pad}({tag} {group} {})", f(phi))
        }
        ProofNode::AxTec {
            group, phi, psi, ..
        } => match psi {
            Some(psi) => write!(out, "{pad}({tag} {group} {} {})", f(phi), f(psi)),
            None => write!(out, "{pad}({tag} {group} {})", f(phi)),
        },
        ProofNode::Proper(name) => write!(out, "{pad}({tag} {})", quote(name)),
        ProofNode::Mp(a, b) => {
            let _ = writeln!(out, "{pad}({tag}");
            write_node(a, depth + 1, out);
            out.push('\n');
            write_node(b, depth + 1, out);
            write!(out, ")")
        }
        ProofNode::Kg(i, c) => {
            let _ = writeln!(out, "{pad}({tag} {i}");
            write_node(c, depth + 1, out);
            write!(out, ")")
        }
        ProofNode::Lfb {
            group,
            phi,
            premise,
        }
        | ProofNode::R10 {
            group,
            phi,
            premise,
        } => {
            let _ = writeln!(out, "{pad}({tag} {group} {}", f(phi));
            write_node(premise, depth + 1, out);
            write!(out, ")")
        }
        ProofNode::R3 { group, premise } => {
            let _ = writeln!(out, "{pad}({tag} {group}");
            write_node(premise, depth + 1, out);
            write!(out, ")")
        }
    };
}

/// The bare node tree.
pub fn write_proof_node(node: &ProofNode) -> String {
    let mut out = String::new();
    write_node(node, 0, &mut out);
    out.push('\n');
    out
}

fn write_agents(d: &Domain, out: &mut String) {
    out.push_str("(agents");
    for (a, name) in d.entries() {
        match name {
            Some(n) => {
                let _ = write!(out, " ({a} {n})");
            }
            None => {
                let _ = write!(out, " {a}");
            }
        }
    }
    out.push(')');
}

/// A theorem with a full header, including every proper axiom it uses.
pub fn write_proof(t: &Theory, th: &Theorem) -> String {
    let mut out = String::from("(proof\n  ");
    let _ = writeln!(out, "(theory {})", quote(th.theory_id()));
    let _ = writeln!(out, "  (basis {})", t.basis());
    out.push_str("  ");
    write_agents(t.domain(), &mut out);
    out.push('\n');
    for name in th.proof().proper_axioms_used() {
        if let Some(ax) = t.axiom(&name) {
            let _ = writeln!(out, "  (axiom {} {})", quote(&name), f(ax));
        }
    }
    let _ = writeln!(out, "  (conclusion {})", f(th.conclusion()));
    write_node(th.proof(), 1, &mut out);
    out.push_str(")\n");
    out
}

fn err(e: &Sexp, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(e.pos(), msg))
}

fn string_arg(e: &Sexp) -> Result<String> {
    match e {
        Sexp::Str(s, _) => Ok(s.clone()),
        Sexp::Symbol(s, _) => Ok(s.clone()),
        _ => Err(err(e, "expected a name")),
    }
}

fn basis_from(e: &Sexp) -> Result<Basis> {
    let s = e
        .as_symbol()
        .ok_or_else(|| err(e, "expected a basis name"))?;
    Basis::from_name(s).ok_or_else(|| err(e, format!("unknown basis `{s}`")))
}

fn agents_from(items: &[Sexp]) -> Result<Domain> {
    let mut d = Domain::new();
    for item in items {
        let (id, name) = match item {
            Sexp::Symbol(..) => (item, None),
            Sexp::List(v, _) if v.len() == 2 => (&v[0], v[1].as_symbol()),
            _ => return Err(err(item, "expected `id` or `(id Name)`")),
        };
        let agent = agent_from_sexp(id, None).map_err(Error::Parse)?;
        if let Some(n) = name {
            if n.parse::<u32>().is_ok() || d.lookup(n).is_some() {
                return Err(Error::DuplicateAgent(n.to_owned()));
            }
        }
        if !d.insert(agent, name) {
            return Err(Error::DuplicateAgent(agent.to_string()));
        }
    }
    Ok(d)
}

fn node_from(e: &Sexp, d: Option<&Domain>) -> Result<Proof> {
    let items = e.as_list().ok_or_else(|| err(e, "expected a proof node"))?;
    let head = e.head().ok_or_else(|| err(e, "expected a rule tag"))?;
    let tag = RuleTag::from_name(head).ok_or_else(|| err(e, format!("unknown rule `{head}`")))?;
    let args = &items[1..];
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(
                e,
                format!("{tag} expects {n} arguments, got {}", args.len()),
            ))
        }
    };
    let formula = |k: usize| formula_from_sexp(&args[k], d).map_err(Error::Parse);
    let group = |k: usize| group_from_sexp(&args[k], d).map_err(Error::Parse);
    let agent = |k: usize| agent_from_sexp(&args[k], d).map_err(Error::Parse);
    let child = |k: usize| node_from(&args[k], d);
    let tec = |which: TecAxiom| -> Result<ProofNode> {
        let n = if which == TecAxiom::A9 { 3 } else { 2 };
        want(n)?;
        Ok(ProofNode::AxTec {
            which,
            group: group(0)?,
            phi: formula(1)?,
            psi: if n == 3 { Some(formula(2)?) } else { None },
        })
    };
    let node = match tag {
        RuleTag::Taut => {
            want(1)?;
            ProofNode::Taut(formula(0)?)
        }
        RuleTag::AxK => {
            want(3)?;
            ProofNode::AxK {
                agent: agent(0)?,
                phi: formula(1)?,
                psi: formula(2)?,
            }
        }
        RuleTag::AxT => {
            want(2)?;
            ProofNode::AxT {
                agent: agent(0)?,
                phi: formula(1)?,
            }
        }
        RuleTag::AxEDef => {
            want(2)?;
            ProofNode::AxEDef {
                group: group(0)?,
                phi: formula(1)?,
            }
        }
        RuleTag::AxFb => {
            want(2)?;
            ProofNode::AxFb {
                group: group(0)?,
                phi: formula(1)?,
            }
        }
        RuleTag::AxA7 => tec(TecAxiom::A7)?,
        RuleTag::AxA8 => tec(TecAxiom::A8)?,
        RuleTag::AxA9 => tec(TecAxiom::A9)?,
        RuleTag::AxA10 => tec(TecAxiom::A10)?,
        RuleTag::Proper => {
            want(1)?;
            ProofNode::Proper(string_arg(&args[0])?)
        }
        RuleTag::Mp => {
            want(2)?;
            ProofNode::Mp(child(0)?, child(1)?)
        }
        RuleTag::Kg => {
            want(2)?;
            ProofNode::Kg(agent(0)?, child(1)?)
        }
        RuleTag::Lfb => {
            want(3)?;
            ProofNode::Lfb {
                group: group(0)?,
                phi: formula(1)?,
                premise: child(2)?,
            }
        }
        RuleTag::R3 => {
            want(2)?;
            ProofNode::R3 {
                group: group(0)?,
                premise: child(1)?,
            }
        }
        RuleTag::R10 => {
            want(3)?;
            ProofNode::R10 {
                group: group(0)?,
                phi: formula(1)?,
                premise: child(2)?,
            }
        }
    };
    Ok(Arc::new(node))
}

/// Parses a proof file. Agent names resolve through the header's
/// `agents` clause if present, otherwise through `domain`.
pub fn read_proof(text: &str, domain: Option<&Domain>) -> Result<ProofFile> {
    let top = read_one(text)?;
    if top.head() != Some("proof") {
        return Ok(ProofFile {
            theory_id: None,
            basis: None,
            agents: None,
            axioms: Vec::new(),
            conclusion: None,
            root: node_from(&top, domain)?,
        });
    }
    let items = top.as_list().expect("has a head");
    let (root, header) = items[1..]
        .split_last()
        .ok_or_else(|| err(&top, "proof without a node"))?;
    let mut file = ProofFile {
        theory_id: None,
        basis: None,
        agents: None,
        axioms: Vec::new(),
        conclusion: None,
        root: Arc::new(ProofNode::Proper(String::new())),
    };
    let mut conclusion = None;
    let mut axioms = Vec::new();
    for h in header {
        let parts = h.as_list().unwrap_or(&[]);
        match (h.head(), parts.len()) {
            (Some("theory"), 2) => file.theory_id = Some(string_arg(&parts[1])?),
            (Some("basis"), 2) => file.basis = Some(basis_from(&parts[1])?),
            (Some("agents"), _) => file.agents = Some(agents_from(&parts[1..])?),
            (Some("conclusion"), 2) => conclusion = Some(&parts[1]),
            (Some("axiom"), 3) => axioms.push((string_arg(&parts[1])?, &parts[2])),
            _ => return Err(err(h, "unknown proof header entry")),
        }
    }
    let d = file.agents.as_ref().or(domain);
    file.root = node_from(root, d)?;
    for (name, f) in axioms {
        file.axioms.push((name, formula_from_sexp(f, d)?));
    }
    if let Some(c) = conclusion {
        file.conclusion = Some(formula_from_sexp(c, d)?);
    }
    Ok(file)
}

pub fn write_theory(t: &Theory) -> String {
    let mut out = format!("(theory {}\n  (basis {})\n  ", quote(t.id()), t.basis());
    write_agents(t.domain(), &mut out);
    for (name, ax) in t.axioms() {
        let _ = write!(out, "\n  (axiom {} {})", quote(name), f(ax));
    }
    out.push_str(")\n");
    out
}

pub fn read_theory(text: &str) -> Result<Theory> {
    let top = read_one(text)?;
    if top.head() != Some("theory") {
        return Err(err(&top, "expected `(theory \"id\" ...)`"));
    }
    let items = top.as_list().expect("has a head");
    let id = items
        .get(1)
        .ok_or_else(|| err(&top, "theory without an id"))
        .and_then(string_arg)?;
    let mut basis = Basis::Ck;
    let mut domain = None;
    let mut axioms = Vec::new();
    for entry in &items[2..] {
        let parts = entry.as_list().unwrap_or(&[]);
        match (entry.head(), parts.len()) {
            (Some("basis"), 2) => basis = basis_from(&parts[1])?,
            (Some("agents"), _) => {
                if domain.is_some() {
                    return Err(err(entry, "duplicate agents clause"));
                }
                domain = Some(agents_from(&parts[1..])?)
            }
            (Some("axiom"), 3) => axioms.push((string_arg(&parts[1])?, &parts[2])),
            _ => return Err(err(entry, "unknown theory entry")),
        }
    }
    let domain = domain.unwrap_or_default();
    let mut t = Theory::new(&id, domain.clone(), basis);
    for (name, f) in axioms {
        t.add_axiom(&name, formula_from_sexp(f, Some(&domain))?)?;
    }
    Ok(t)
}
