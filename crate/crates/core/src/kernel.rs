//! The trusted core.
//!
//! [`Theorem`] values can only be produced by the rule methods on [`Theory`]
//! below. Each theorem carries the full proof tree it was built from, so
//! any theorem can be re-checked with [`Theory::check_proof`] or serialized
//! and audited elsewhere. Matching in the rules is purely syntactic on
//! desugared formulas; propositional reshaping goes through `TAUT`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, NodePath, Result};
use crate::formula::{expand_everyone, Agent, Domain, Formula, Group};
use crate::taut::is_tautology;

/// Which axiomatization of common knowledge a theory uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Fixpoint axiom FB and least-fixpoint rule LFB.
    Ck,
    /// Axioms A7–A10 and rule R3.
    Tec,
    /// Axioms A7–A9, rule R10 and rule R3.
    TecPrime,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Ck, Basis::Tec, Basis::TecPrime];

    pub fn allows(self, rule: RuleTag) -> bool {
        use RuleTag::*;
        match rule {
            Taut | AxK | AxT | AxEDef | Proper | Mp | Kg => true,
            AxFb | Lfb => self == Basis::Ck,
            AxA7 | AxA8 | AxA9 | R3 => matches!(self, Basis::Tec | Basis::TecPrime),
            AxA10 => self == Basis::Tec,
            R10 => self == Basis::TecPrime,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Ck => "ck",
            Basis::Tec => "tec",
            Basis::TecPrime => "tecprime",
        }
    }

    pub fn from_name(s: &str) -> Option<Basis> {
        match s.to_ascii_lowercase().as_str() {
            "ck" => Some(Basis::Ck),
            "tec" => Some(Basis::Tec),
            "tecprime" | "tec'" => Some(Basis::TecPrime),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Taut,
    AxK,
    AxT,
    AxEDef,
    AxFb,
    AxA7,
    AxA8,
    AxA9,
    AxA10,
    Proper,
    Mp,
    Kg,
    Lfb,
    R3,
    R10,
}

impl RuleTag {
    pub const ALL: [RuleTag; 15] = [
        RuleTag::Taut,
        RuleTag::AxK,
        RuleTag::AxT,
        RuleTag::AxEDef,
        RuleTag::AxFb,
        RuleTag::AxA7,
        RuleTag::AxA8,
        RuleTag::AxA9,
        RuleTag::AxA10,
        RuleTag::Proper,
        RuleTag::Mp,
        RuleTag::Kg,
        RuleTag::Lfb,
        RuleTag::R3,
        RuleTag::R10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Taut => "TAUT",
            RuleTag::AxK => "AX_K",
            RuleTag::AxT => "AX_T",
            RuleTag::AxEDef => "AX_E_DEF",
            RuleTag::AxFb => "AX_FB",
            RuleTag::AxA7 => "AX_A7",
            RuleTag::AxA8 => "AX_A8",
            RuleTag::AxA9 => "AX_A9",
            RuleTag::AxA10 => "AX_A10",
            RuleTag::Proper => "PROPER",
            RuleTag::Mp => "MP",
            RuleTag::Kg => "KG",
            RuleTag::Lfb => "LFB",
            RuleTag::R3 => "R3",
            RuleTag::R10 => "R10",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleTag> {
        RuleTag::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleTag::Mp => 2,
            RuleTag::Kg | RuleTag::Lfb | RuleTag::R3 | RuleTag::R10 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Axiom schemes A7 to A10 of the TEC bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TecAxiom {
    A7,
    A8,
    A9,
    A10,
}

impl TecAxiom {
    pub fn tag(self) -> RuleTag {
        match self {
            TecAxiom::A7 => RuleTag::AxA7,
            TecAxiom::A8 => RuleTag::AxA8,
            TecAxiom::A9 => RuleTag::AxA9,
            TecAxiom::A10 => RuleTag::AxA10,
        }
    }
}

pub type Proof = Arc<ProofNode>;

/// A derivation tree. Leaves are axiom-scheme instances, inner nodes are
/// rule applications.
#[derive(Clone, Debug, PartialEq)]
pub enum ProofNode {
    Taut(Formula),
    AxK {
        agent: Agent,
        phi: Formula,
        psi: Formula,
    },
    AxT {
        agent: Agent,
        phi: Formula,
    },
    AxEDef {
        group: Group,
        phi: Formula,
    },
    AxFb {
        group: Group,
        phi: Formula,
    },
    AxTec {
        which: TecAxiom,
        group: Group,
        phi: Formula,
        psi: Option<Formula>,
    },
    Proper(String),
    Mp(Proof, Proof),
    Kg(Agent, Proof),
    Lfb {
        group: Group,
        phi: Formula,
        premise: Proof,
    },
    R3 {
        group: Group,
        premise: Proof,
    },
    R10 {
        group: Group,
        phi: Formula,
        premise: Proof,
    },
}

impl ProofNode {
    pub fn tag(&self) -> RuleTag {
        match self {
            ProofNode::Taut(_) => RuleTag::Taut,
            ProofNode::AxK { .. } => RuleTag::AxK,
            ProofNode::AxT { .. } => RuleTag::AxT,
            ProofNode::AxEDef { .. } => RuleTag::AxEDef,
            ProofNode::AxFb { .. } => RuleTag::AxFb,
            ProofNode::AxTec { which, .. } => which.tag(),
            ProofNode::Proper(_) => RuleTag::Proper,
            ProofNode::Mp(..) => RuleTag::Mp,
            ProofNode::Kg(..) => RuleTag::Kg,
            ProofNode::Lfb { .. } => RuleTag::Lfb,
            ProofNode::R3 { .. } => RuleTag::R3,
            ProofNode::R10 { .. } => RuleTag::R10,
        }
    }

    pub fn children(&self) -> Vec<&Proof> {
        match self {
            ProofNode::Mp(a, b) => vec![a, b],
            ProofNode::Kg(_, c)
            | ProofNode::Lfb { premise: c, .. }
            | ProofNode::R3 { premise: c, .. }
            | ProofNode::R10 { premise: c, .. } => vec![c],
            _ => Vec::new(),
        }
    }

    /// Proof size counted as a tree, i.e. shared subproofs are counted once
    /// per use. Saturates instead of overflowing.
    pub fn tree_size(&self) -> u64 {
        fn go(n: &Proof, memo: &mut HashMap<*const ProofNode, u64>) -> u64 {
            let key = Arc::as_ptr(n);
            if let Some(s) = memo.get(&key) {
                return *s;
            }
            let s = n
                .children()
                .into_iter()
                .fold(1u64, |acc, c| acc.saturating_add(go(c, memo)));
            memo.insert(key, s);
            s
        }
        let mut memo = HashMap::new();
        self.children()
            .into_iter()
            .fold(1u64, |acc, c| acc.saturating_add(go(c, &mut memo)))
    }

    pub fn depth(&self) -> usize {
        fn go(n: &Proof, memo: &mut HashMap<*const ProofNode, usize>) -> usize {
            let key = Arc::as_ptr(n);
            if let Some(d) = memo.get(&key) {
                return *d;
            }
            let d = 1 + n
                .children()
                .into_iter()
                .map(|c| go(c, memo))
                .max()
                .unwrap_or(0);
            memo.insert(key, d);
            d
        }
        let mut memo = HashMap::new();
        1 + self
            .children()
            .into_iter()
            .map(|c| go(c, &mut memo))
            .max()
            .unwrap_or(0)
    }

    /// Pre-order walk over every node with its path. Shared subproofs are
    /// visited once per occurrence.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&NodePath, &'a ProofNode)) {
        fn go<'a>(
            n: &'a ProofNode,
            path: &mut Vec<usize>,
            f: &mut dyn FnMut(&NodePath, &'a ProofNode),
        ) {
            f(&NodePath(path.clone()), n);
            for (k, c) in n.children().into_iter().enumerate() {
                path.push(k);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f);
    }

    /// Every rule tag that occurs in the tree.
    pub fn tags(&self) -> std::collections::BTreeSet<RuleTag> {
        fn go(
            n: &Proof,
            seen: &mut std::collections::HashSet<*const ProofNode>,
            out: &mut std::collections::BTreeSet<RuleTag>,
        ) {
            if !seen.insert(Arc::as_ptr(n)) {
                return;
            }
            out.insert(n.tag());
            for c in n.children() {
                go(c, seen, out);
            }
        }
        let mut out = std::collections::BTreeSet::new();
        out.insert(self.tag());
        let mut seen = std::collections::HashSet::new();
        for c in self.children() {
            go(c, &mut seen, &mut out);
        }
        out
    }

    /// Names of the proper axioms used at `PROPER` leaves.
    pub fn proper_axioms_used(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        fn go(
            n: &ProofNode,
            seen: &mut std::collections::HashSet<*const ProofNode>,
            out: &mut std::collections::BTreeSet<String>,
        ) {
            if let ProofNode::Proper(name) = n {
                out.insert(name.clone());
            }
            for c in n.children() {
                if seen.insert(Arc::as_ptr(c)) {
                    go(c, seen, out);
                }
            }
        }
        go(self, &mut std::collections::HashSet::new(), &mut out);
        out
    }
}

/// A kernel-certified judgment `⊢ φ` inside one theory.
#[derive(Clone, Debug)]
pub struct Theorem {
    theory_id: Arc<str>,
    conclusion: Formula,
    proof: Proof,
}

impl Theorem {
    pub fn theory_id(&self) -> &str {
        &self.theory_id
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⊢ {}", self.conclusion)
    }
}

/// Agent domain, axiom basis and named proper axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    id: Arc<str>,
    domain: Domain,
    basis: Basis,
    axioms: BTreeMap<String, Formula>,
}

impl Theory {
    pub fn new(id: &str, domain: Domain, basis: Basis) -> Self {
        Theory {
            id: Arc::from(id),
            domain,
            basis,
            axioms: BTreeMap::new(),
        }
    }

    pub fn add_axiom(&mut self, name: &str, f: Formula) -> Result<()> {
        self.check_formula(&f)?;
        if self.axioms.contains_key(name) {
            return Err(Error::DuplicateAxiom(name.to_owned()));
        }
        self.axioms.insert(name.to_owned(), f);
        Ok(())
    }

    pub fn with_axiom(mut self, name: &str, f: Formula) -> Result<Self> {
        self.add_axiom(name, f)?;
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn axioms(&self) -> &BTreeMap<String, Formula> {
        &self.axioms
    }

    pub fn axiom(&self, name: &str) -> Option<&Formula> {
        self.axioms.get(name)
    }

    /// The same theory under another id.
    pub fn renamed(&self, id: &str) -> Theory {
        Theory {
            id: Arc::from(id),
            ..self.clone()
        }
    }

    /// Drops the named proper axioms. The result has a derived id so its
    /// theorems cannot be confused with those of `self`.
    pub fn without_axioms(&self, names: &[String]) -> Result<Theory> {
        let mut t = self.clone();
        for n in names {
            if t.axioms.remove(n).is_none() {
                return Err(Error::UnknownHypothesis(n.clone()));
            }
        }
        if !names.is_empty() {
            t.id = Arc::from(format!("{}-without-{}", self.id, names.join("+")));
        }
        Ok(t)
    }

    pub fn check_agent(&self, a: Agent) -> Result<()> {
        if self.domain.contains(a) {
            Ok(())
        } else {
            Err(Error::UnknownAgent(a))
        }
    }

    pub fn check_group(&self, g: &Group) -> Result<()> {
        g.members().iter().try_for_each(|a| self.check_agent(*a))
    }

    pub fn check_formula(&self, f: &Formula) -> Result<()> {
        f.agents().into_iter().try_for_each(|a| self.check_agent(a))
    }

    fn require(&self, rule: RuleTag) -> Result<()> {
        if self.basis.allows(rule) {
            Ok(())
        } else {
            Err(Error::BasisViolation {
                rule,
                basis: self.basis,
            })
        }
    }

    fn owns(&self, th: &Theorem) -> Result<()> {
        if *th.theory_id == *self.id {
            Ok(())
        } else {
            Err(Error::TheoryMismatch {
                expected: self.id.to_string(),
                found: th.theory_id.to_string(),
            })
        }
    }

    fn make(&self, conclusion: Formula, node: ProofNode) -> Theorem {
        Theorem {
            theory_id: self.id.clone(),
            conclusion,
            proof: Arc::new(node),
        }
    }

    // Axiom schemes.

    pub fn ax_taut(&self, f: &Formula) -> Result<Theorem> {
        self.check_formula(f)?;
        if !is_tautology(f)? {
            return Err(Error::NotATautology(f.clone()));
        }
        Ok(self.make(f.clone(), ProofNode::Taut(f.clone())))
    }

    /// `⊢ (K_i φ ∧ K_i(φ ⇒ ψ)) ⇒ K_i ψ`
    pub fn ax_k(&self, i: Agent, phi: &Formula, psi: &Formula) -> Result<Theorem> {
        self.check_agent(i)?;
        self.check_formula(phi)?;
        self.check_formula(psi)?;
        let concl = Formula::implies(
            Formula::and(
                Formula::knows(i, phi.clone()),
                Formula::knows(i, Formula::implies(phi.clone(), psi.clone())),
            ),
            Formula::knows(i, psi.clone()),
        );
        Ok(self.make(
            concl,
            ProofNode::AxK {
                agent: i,
                phi: phi.clone(),
                psi: psi.clone(),
            },
        ))
    }

    /// `⊢ K_i φ ⇒ φ`
    pub fn ax_t(&self, i: Agent, phi: &Formula) -> Result<Theorem> {
        self.check_agent(i)?;
        self.check_formula(phi)?;
        let concl = Formula::implies(Formula::knows(i, phi.clone()), phi.clone());
        Ok(self.make(
            concl,
            ProofNode::AxT {
                agent: i,
                phi: phi.clone(),
            },
        ))
    }

    /// `⊢ E_G φ ⇔ ⋀_{i∈G} K_i φ`
    pub fn ax_e_def(&self, g: &Group, phi: &Formula) -> Result<Theorem> {
        self.check_group(g)?;
        self.check_formula(phi)?;
        let concl = Formula::iff(
            Formula::everyone(g.clone(), phi.clone()),
            expand_everyone(g, phi),
        );
        Ok(self.make(
            concl,
            ProofNode::AxEDef {
                group: g.clone(),
                phi: phi.clone(),
            },
        ))
    }

    /// `⊢ C_G φ ⇒ φ ∧ E_G(C_G φ)`
    pub fn ax_fb(&self, g: &Group, phi: &Formula) -> Result<Theorem> {
        self.require(RuleTag::AxFb)?;
        self.check_group(g)?;
        self.check_formula(phi)?;
        let c = Formula::common(g.clone(), phi.clone());
        let concl = Formula::implies(
            c.clone(),
            Formula::and(phi.clone(), Formula::everyone(g.clone(), c)),
        );
        Ok(self.make(
            concl,
            ProofNode::AxFb {
                group: g.clone(),
                phi: phi.clone(),
            },
        ))
    }

    pub fn ax_tec(
        &self,
        which: TecAxiom,
        g: &Group,
        phi: &Formula,
        psi: Option<&Formula>,
    ) -> Result<Theorem> {
        let tag = which.tag();
        self.require(tag)?;
        self.check_group(g)?;
        self.check_formula(phi)?;
        match (which, psi) {
            (TecAxiom::A9, None) => {
                return Err(Error::MissingParameter {
                    rule: tag,
                    param: "psi",
                })
            }
            (TecAxiom::A9, Some(psi)) => self.check_formula(psi)?,
            (_, Some(_)) => {
                return Err(Error::UnexpectedParameter {
                    rule: tag,
                    param: "psi",
                })
            }
            (_, None) => {}
        }
        let c = |f: Formula| Formula::common(g.clone(), f);
        let e = |f: Formula| Formula::everyone(g.clone(), f);
        let concl = match which {
            TecAxiom::A7 => Formula::implies(c(phi.clone()), phi.clone()),
            TecAxiom::A8 => Formula::implies(c(phi.clone()), e(c(phi.clone()))),
            TecAxiom::A9 => {
                let psi = psi.expect("checked above").clone();
                Formula::implies(
                    Formula::and(
                        c(phi.clone()),
                        c(Formula::implies(phi.clone(), psi.clone())),
                    ),
                    c(psi),
                )
            }
            TecAxiom::A10 => Formula::implies(
                c(Formula::implies(phi.clone(), e(phi.clone()))),
                Formula::implies(phi.clone(), c(phi.clone())),
            ),
        };
        Ok(self.make(
            concl,
            ProofNode::AxTec {
                which,
                group: g.clone(),
                phi: phi.clone(),
                psi: psi.cloned(),
            },
        ))
    }

    pub fn ax_proper(&self, name: &str) -> Result<Theorem> {
        let f = self
            .axioms
            .get(name)
            .ok_or_else(|| Error::UnknownAxiom(name.to_owned()))?;
        Ok(self.make(f.clone(), ProofNode::Proper(name.to_owned())))
    }

    // Rules.

    /// `⊢ φ` and `⊢ φ ⇒ ψ` give `⊢ ψ`.
    pub fn rule_mp(&self, minor: &Theorem, major: &Theorem) -> Result<Theorem> {
        self.owns(minor)?;
        self.owns(major)?;
        let (ante, cons) = major
            .conclusion
            .as_implies()
            .ok_or_else(|| Error::shape(RuleTag::Mp, "an implication", &major.conclusion))?;
        if *ante != minor.conclusion {
            return Err(Error::shape(RuleTag::Mp, ante, &minor.conclusion));
        }
        Ok(self.make(
            cons.clone(),
            ProofNode::Mp(minor.proof.clone(), major.proof.clone()),
        ))
    }

    /// `⊢ φ` gives `⊢ K_i φ`.
    pub fn rule_kg(&self, i: Agent, th: &Theorem) -> Result<Theorem> {
        self.owns(th)?;
        self.check_agent(i)?;
        Ok(self.make(
            Formula::knows(i, th.conclusion.clone()),
            ProofNode::Kg(i, th.proof.clone()),
        ))
    }

    /// `⊢ ρ ⇒ φ ∧ E_G ρ` gives `⊢ ρ ⇒ C_G φ`.
    pub fn rule_lfb(&self, g: &Group, phi: &Formula, th: &Theorem) -> Result<Theorem> {
        self.require(RuleTag::Lfb)?;
        self.owns(th)?;
        self.check_group(g)?;
        let (rho, body) = th
            .conclusion
            .as_implies()
            .ok_or_else(|| Error::shape(RuleTag::Lfb, "ρ ⇒ φ ∧ E_G(ρ)", &th.conclusion))?;
        let expected = Formula::and(phi.clone(), Formula::everyone(g.clone(), rho.clone()));
        if *body != expected {
            return Err(Error::shape(RuleTag::Lfb, &expected, body));
        }
        Ok(self.make(
            Formula::implies(rho.clone(), Formula::common(g.clone(), phi.clone())),
            ProofNode::Lfb {
                group: g.clone(),
                phi: phi.clone(),
                premise: th.proof.clone(),
            },
        ))
    }

    /// `⊢ φ` gives `⊢ C_G φ`.
    pub fn rule_r3(&self, g: &Group, th: &Theorem) -> Result<Theorem> {
        self.require(RuleTag::R3)?;
        self.owns(th)?;
        self.check_group(g)?;
        Ok(self.make(
            Formula::common(g.clone(), th.conclusion.clone()),
            ProofNode::R3 {
                group: g.clone(),
                premise: th.proof.clone(),
            },
        ))
    }

    /// `⊢ C_G(φ ⇒ E_G φ)` gives `⊢ φ ⇒ C_G φ`.
    pub fn rule_r10(&self, g: &Group, phi: &Formula, th: &Theorem) -> Result<Theorem> {
        self.require(RuleTag::R10)?;
        self.owns(th)?;
        self.check_group(g)?;
        let expected = Formula::common(
            g.clone(),
            Formula::implies(phi.clone(), Formula::everyone(g.clone(), phi.clone())),
        );
        if th.conclusion != expected {
            return Err(Error::shape(RuleTag::R10, &expected, &th.conclusion));
        }
        Ok(self.make(
            Formula::implies(phi.clone(), Formula::common(g.clone(), phi.clone())),
            ProofNode::R10 {
                group: g.clone(),
                phi: phi.clone(),
                premise: th.proof.clone(),
            },
        ))
    }

    /// Replays a proof tree through the rules above. Errors are annotated
    /// with the path of the first node that fails.
    pub fn check_proof(&self, proof: &ProofNode) -> Result<Theorem> {
        let mut memo = HashMap::new();
        self.replay(proof, &mut Vec::new(), &mut memo)
    }

    fn replay(
        &self,
        node: &ProofNode,
        path: &mut Vec<usize>,
        memo: &mut HashMap<*const ProofNode, Theorem>,
    ) -> Result<Theorem> {
        let key = node as *const ProofNode;
        if let Some(th) = memo.get(&key) {
            return Ok(th.clone());
        }
        let mut sub = |k: usize, child: &Proof, path: &mut Vec<usize>| {
            path.push(k);
            let r = self.replay(child, path, memo);
            path.pop();
            r
        };
        let result = match node {
            ProofNode::Taut(f) => self.ax_taut(f),
            ProofNode::AxK { agent, phi, psi } => self.ax_k(*agent, phi, psi),
            ProofNode::AxT { agent, phi } => self.ax_t(*agent, phi),
            ProofNode::AxEDef { group, phi } => self.ax_e_def(group, phi),
            ProofNode::AxFb { group, phi } => self.ax_fb(group, phi),
            ProofNode::AxTec {
                which,
                group,
                phi,
                psi,
            } => self.ax_tec(*which, group, phi, psi.as_ref()),
            ProofNode::Proper(name) => self.ax_proper(name),
            ProofNode::Mp(a, b) => {
                let ta = sub(0, a, path)?;
                let tb = sub(1, b, path)?;
                self.rule_mp(&ta, &tb)
            }
            ProofNode::Kg(i, c) => {
                let t = sub(0, c, path)?;
                self.rule_kg(*i, &t)
            }
            ProofNode::Lfb {
                group,
                phi,
                premise,
            } => {
                let t = sub(0, premise, path)?;
                self.rule_lfb(group, phi, &t)
            }
            ProofNode::R3 { group, premise } => {
                let t = sub(0, premise, path)?;
                self.rule_r3(group, &t)
            }
            ProofNode::R10 {
                group,
                phi,
                premise,
            } => {
                let t = sub(0, premise, path)?;
                self.rule_r10(group, phi, &t)
            }
        };
        let th = result.map_err(|e| match e {
            e @ Error::AtNode { .. } => e,
            e => Error::AtNode {
                path: NodePath(path.clone()),
                source: Box::new(e),
            },
        })?;
        memo.insert(key, th.clone());
        Ok(th)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Agent;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn a() -> Agent {
        Agent(0)
    }
    fn b() -> Agent {
        Agent(1)
    }
    fn ab() -> Group {
        Group::new([a(), b()])
    }
    fn ck() -> Theory {
        Theory::new("t", Domain::range(2), Basis::Ck)
    }
    fn tec() -> Theory {
        Theory::new("tec", Domain::range(2), Basis::Tec)
    }
    fn tecp() -> Theory {
        Theory::new("tecp", Domain::range(2), Basis::TecPrime)
    }

    #[test]
    fn taut_examples() {
        let t = ck();
        assert_eq!(
            t.ax_taut(&Formula::implies(p(), p())).unwrap().conclusion(),
            &Formula::implies(p(), p())
        );
        let kp = Formula::knows(a(), p());
        let proj = Formula::implies(Formula::and(kp.clone(), q()), kp.clone());
        assert!(t.ax_taut(&proj).is_ok());
        let axt = Formula::implies(kp, p());
        assert_eq!(t.ax_taut(&axt).unwrap_err(), Error::NotATautology(axt));
    }

    #[test]
    fn k_and_t_examples() {
        let t = ck();
        let th = t.ax_k(a(), &p(), &q()).unwrap();
        assert_eq!(
            th.conclusion().to_string(),
            "(=> (and (K 0 (atom p)) (K 0 (=> (atom p) (atom q)))) (K 0 (atom q)))"
        );
        assert!(t.ax_k(a(), &p(), &p()).is_ok());
        assert_eq!(
            t.ax_k(Agent(9), &p(), &q()).unwrap_err(),
            Error::UnknownAgent(Agent(9))
        );

        assert_eq!(
            t.ax_t(a(), &p()).unwrap().conclusion().to_string(),
            "(=> (K 0 (atom p)) (atom p))"
        );
        assert_eq!(
            t.ax_t(a(), &Formula::False)
                .unwrap()
                .conclusion()
                .to_string(),
            "(not (K 0 false))"
        );
        let kp = Formula::knows(a(), p());
        assert_eq!(
            t.ax_t(a(), &kp).unwrap().conclusion(),
            &Formula::implies(Formula::knows(a(), kp.clone()), kp)
        );
    }

    #[test]
    fn e_def_examples() {
        let t = ck();
        assert_eq!(
            t.ax_e_def(&ab(), &p()).unwrap().conclusion().to_string(),
            "(iff (E (0 1) (atom p)) (and (K 0 (atom p)) (K 1 (atom p))))"
        );
        assert_eq!(
            t.ax_e_def(&Group::empty(), &p())
                .unwrap()
                .conclusion()
                .to_string(),
            "(iff (E () (atom p)) true)"
        );
        assert_eq!(
            t.ax_e_def(&Group::new([a()]), &p())
                .unwrap()
                .conclusion()
                .to_string(),
            "(iff (E (0) (atom p)) (K 0 (atom p)))"
        );
    }

    #[test]
    fn fb_examples() {
        let t = ck();
        assert_eq!(
            t.ax_fb(&ab(), &p()).unwrap().conclusion().to_string(),
            "(=> (C (0 1) (atom p)) (and (atom p) (E (0 1) (C (0 1) (atom p)))))"
        );
        assert!(t.ax_fb(&Group::empty(), &p()).is_ok());
        assert!(matches!(
            tec().ax_fb(&ab(), &p()),
            Err(Error::BasisViolation {
                rule: RuleTag::AxFb,
                basis: Basis::Tec
            })
        ));
    }

    #[test]
    fn mp_examples() {
        let t = ck();
        let pp = Formula::implies(p(), p());
        let th_pp = t.ax_taut(&pp).unwrap();
        let th_chain = t
            .ax_taut(&Formula::implies(pp.clone(), pp.clone()))
            .unwrap();
        assert_eq!(t.rule_mp(&th_pp, &th_chain).unwrap().conclusion(), &pp);

        // FB plus a projection gives C_{a} p ⇒ p.
        let g = Group::new([a()]);
        let fb = t.ax_fb(&g, &p()).unwrap();
        let c = Formula::common(g.clone(), p());
        let proj = t
            .ax_taut(&Formula::implies(
                fb.conclusion().clone(),
                Formula::implies(c.clone(), p()),
            ))
            .unwrap();
        assert_eq!(
            t.rule_mp(&fb, &proj).unwrap().conclusion(),
            &Formula::implies(c, p())
        );

        let other = t.ax_taut(&Formula::implies(q(), q())).unwrap();
        assert!(matches!(
            t.rule_mp(&other, &th_chain),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            t.rule_mp(&th_chain, &th_pp),
            Err(Error::ShapeMismatch { .. })
        ));
        let foreign = t.renamed("u").ax_taut(&pp).unwrap();
        assert!(matches!(
            t.rule_mp(&foreign, &th_chain),
            Err(Error::TheoryMismatch { .. })
        ));
    }

    #[test]
    fn kg_examples() {
        let t = ck();
        let pp = t.ax_taut(&Formula::implies(p(), p())).unwrap();
        let k = t.rule_kg(a(), &pp).unwrap();
        assert_eq!(k.conclusion().to_string(), "(K 0 (=> (atom p) (atom p)))");
        let kk = t.rule_kg(a(), &t.rule_kg(b(), &pp).unwrap()).unwrap();
        assert_eq!(
            kk.conclusion().to_string(),
            "(K 0 (K 1 (=> (atom p) (atom p))))"
        );
        assert_eq!(
            t.rule_kg(Agent(7), &pp).unwrap_err(),
            Error::UnknownAgent(Agent(7))
        );
    }

    #[test]
    fn lfb_examples() {
        let t = ck();
        let fb = t.ax_fb(&ab(), &p()).unwrap();
        let c = Formula::common(ab(), p());
        assert_eq!(
            t.rule_lfb(&ab(), &p(), &fb).unwrap().conclusion(),
            &Formula::implies(c.clone(), c)
        );
        assert!(matches!(
            t.rule_lfb(&ab(), &q(), &fb),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            t.rule_lfb(&Group::new([a()]), &p(), &fb),
            Err(Error::ShapeMismatch { .. })
        ));

        // Empty group: ⊢ p ⇒ p ∧ E_∅ p from E_def and Taut, then LFB.
        let e = Group::empty();
        let edef = t.ax_e_def(&e, &p()).unwrap();
        let goal = Formula::implies(p(), Formula::and(p(), Formula::everyone(e.clone(), p())));
        let glue = t
            .ax_taut(&Formula::implies(edef.conclusion().clone(), goal))
            .unwrap();
        let premise = t.rule_mp(&edef, &glue).unwrap();
        assert_eq!(
            t.rule_lfb(&e, &p(), &premise).unwrap().conclusion(),
            &Formula::implies(p(), Formula::common(e, p()))
        );
    }

    #[test]
    fn tec_examples() {
        let t = tec();
        let g1 = Group::new([a()]);
        assert_eq!(
            t.ax_tec(TecAxiom::A7, &g1, &p(), None)
                .unwrap()
                .conclusion()
                .to_string(),
            "(=> (C (0) (atom p)) (atom p))"
        );
        assert_eq!(
            t.ax_tec(TecAxiom::A10, &ab(), &p(), None)
                .unwrap()
                .conclusion()
                .to_string(),
            "(=> (C (0 1) (=> (atom p) (E (0 1) (atom p)))) (=> (atom p) (C (0 1) (atom p))))"
        );
        assert!(matches!(
            tecp().ax_tec(TecAxiom::A10, &ab(), &p(), None),
            Err(Error::BasisViolation {
                rule: RuleTag::AxA10,
                basis: Basis::TecPrime
            })
        ));
        assert!(matches!(
            t.ax_tec(TecAxiom::A9, &ab(), &p(), None),
            Err(Error::MissingParameter { .. })
        ));
        assert!(matches!(
            t.ax_tec(TecAxiom::A7, &ab(), &p(), Some(&q())),
            Err(Error::UnexpectedParameter { .. })
        ));
        assert!(tecp().ax_tec(TecAxiom::A9, &ab(), &p(), Some(&q())).is_ok());
    }

    #[test]
    fn r3_and_r10_examples() {
        let t = tec();
        let pp = t.ax_taut(&Formula::implies(p(), p())).unwrap();
        assert_eq!(
            t.rule_r3(&ab(), &pp).unwrap().conclusion().to_string(),
            "(C (0 1) (=> (atom p) (atom p)))"
        );
        assert_eq!(
            t.rule_r3(&Group::empty(), &pp)
                .unwrap()
                .conclusion()
                .to_string(),
            "(C () (=> (atom p) (atom p)))"
        );
        let ck_pp = ck().ax_taut(&Formula::implies(p(), p())).unwrap();
        assert!(matches!(
            ck().rule_r3(&ab(), &ck_pp),
            Err(Error::BasisViolation { .. })
        ));

        // R10: from C_{a}(p ⇒ E_{a} p) get p ⇒ C_{a} p. The premise is built
        // from R3 over a proper axiom.
        let g1 = Group::new([a()]);
        let body = Formula::implies(p(), Formula::everyone(g1.clone(), p()));
        let tp = tecp().with_axiom("h", body).unwrap();
        let h = tp.ax_proper("h").unwrap();
        let c = tp.rule_r3(&g1, &h).unwrap();
        assert_eq!(
            tp.rule_r10(&g1, &p(), &c).unwrap().conclusion(),
            &Formula::implies(p(), Formula::common(g1.clone(), p()))
        );
        assert!(matches!(
            tp.rule_r10(&g1, &q(), &c),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            t.rule_r10(&g1, &p(), &pp),
            Err(Error::BasisViolation { .. })
        ));
    }

    #[test]
    fn proper_axioms() {
        let t = ck().with_axiom("h", p()).unwrap();
        assert_eq!(t.ax_proper("h").unwrap().conclusion(), &p());
        assert_eq!(
            t.ax_proper("nope").unwrap_err(),
            Error::UnknownAxiom("nope".into())
        );
        assert!(matches!(
            t.clone().with_axiom("h", q()),
            Err(Error::DuplicateAxiom(_))
        ));
        assert!(matches!(
            ck().with_axiom("bad", Formula::knows(Agent(5), p())),
            Err(Error::UnknownAgent(Agent(5)))
        ));
    }

    #[test]
    fn check_proof_replays_and_locates_errors() {
        let t = ck();
        let fb = t.ax_fb(&ab(), &p()).unwrap();
        let lfb = t.rule_lfb(&ab(), &p(), &fb).unwrap();
        let again = t.check_proof(lfb.proof()).unwrap();
        assert_eq!(again.conclusion(), lfb.conclusion());

        let bad = ProofNode::Kg(
            a(),
            Arc::new(ProofNode::Taut(Formula::implies(
                Formula::knows(a(), p()),
                p(),
            ))),
        );
        let err = t.check_proof(&bad).unwrap_err();
        assert_eq!(err.path(), Some(&NodePath(vec![0])));
        assert_eq!(err.code(), "NotATautology");
    }

    #[test]
    fn basis_gating_is_exhaustive() {
        let g = Group::new([a()]);
        for basis in Basis::ALL {
            let t = Theory::new("x", Domain::range(2), basis)
                .with_axiom("h", p())
                .unwrap();
            let h = t.ax_proper("h").unwrap();
            let cases: Vec<(RuleTag, Result<Theorem>)> = vec![
                (RuleTag::AxFb, t.ax_fb(&g, &p())),
                (RuleTag::Lfb, t.rule_lfb(&g, &p(), &h)),
                (RuleTag::AxA7, t.ax_tec(TecAxiom::A7, &g, &p(), None)),
                (RuleTag::AxA8, t.ax_tec(TecAxiom::A8, &g, &p(), None)),
                (RuleTag::AxA9, t.ax_tec(TecAxiom::A9, &g, &p(), Some(&q()))),
                (RuleTag::AxA10, t.ax_tec(TecAxiom::A10, &g, &p(), None)),
                (RuleTag::R3, t.rule_r3(&g, &h)),
                (RuleTag::R10, t.rule_r10(&g, &p(), &h)),
            ];
            for (tag, r) in cases {
                let gated = matches!(r, Err(Error::BasisViolation { .. }));
                assert_eq!(gated, !basis.allows(tag), "{tag} in {basis}: {r:?}");
            }
        }
    }
}
