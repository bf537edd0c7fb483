//! Moving hypotheses between the meta level and the object level.
//!
//! A [`HypDerivation`] proves `⊢ ψ` using some proper axioms as
//! hypotheses. [`internalize_full`] turns it into one theorem
//! `⊢ C_G(Φ) ⇒ C_G(ψ)` that no longer mentions those axioms, where `Φ` is
//! the conjunction of the hypotheses. [`internalize`] weakens that to
//! `⊢ C_G(Φ) ⇒ ψ`, and [`externalize`] goes back from `⊢ Φ`.

use std::collections::HashMap;

use crate::derived::{c_mono, internal_kg, internal_lfb_sub, k_c, kg_c, strengthen, weaken};
use crate::error::{Error, NodePath, Result};
use crate::formula::{Formula, Group};
use crate::kernel::{Basis, Proof, ProofNode, RuleTag, Theorem, Theory};
use crate::tactics::{glue, trans};

/// A proof of `⊢ ψ` in `theory` that may use the named hypotheses.
#[derive(Clone, Debug)]
pub struct HypDerivation {
    theory: Theory,
    hypotheses: Vec<String>,
    root: Proof,
    conclusion: Formula,
}

impl HypDerivation {
    /// Hypothesis names are sorted and deduplicated; each must be a proper
    /// axiom of `theory`, and `root` must check in `theory`.
    pub fn new<I, S>(theory: Theory, hypotheses: I, root: Proof) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut hypotheses: Vec<String> = hypotheses.into_iter().map(Into::into).collect();
        hypotheses.sort();
        hypotheses.dedup();
        if let Some(h) = hypotheses.iter().find(|h| theory.axiom(h).is_none()) {
            return Err(Error::UnknownHypothesis(h.clone()));
        }
        let conclusion = theory.check_proof(&root)?.conclusion().clone();
        Ok(HypDerivation {
            theory,
            hypotheses,
            root,
            conclusion,
        })
    }

    pub fn from_theorem<I, S>(theory: Theory, hypotheses: I, th: &Theorem) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if th.theory_id() != theory.id() {
            return Err(Error::TheoryMismatch {
                expected: theory.id().to_owned(),
                found: th.theory_id().to_owned(),
            });
        }
        Self::new(theory, hypotheses, th.proof().clone())
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn hypotheses(&self) -> &[String] {
        &self.hypotheses
    }

    pub fn root(&self) -> &Proof {
        &self.root
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    /// Right-nested conjunction of the hypotheses in name order, `⊤` if
    /// there are none.
    pub fn hypothesis_conjunction(&self) -> Formula {
        Formula::conj(
            self.hypotheses
                .iter()
                .map(|h| self.theory.axiom(h).expect("validated in new").clone())
                .collect::<Vec<_>>(),
        )
    }

    /// The theory without the hypotheses. Internalized theorems live here.
    pub fn stripped_theory(&self) -> Theory {
        self.theory
            .without_axioms(&self.hypotheses)
            .expect("validated in new")
    }
}

/// Proves the hypothesis conjunction from the proper axioms of the
/// derivation's own theory.
pub fn prove_hypotheses(d: &HypDerivation) -> Result<Theorem> {
    let t = &d.theory;
    let leaves = d
        .hypotheses
        .iter()
        .map(|h| t.ax_proper(h))
        .collect::<Result<Vec<_>>>()?;
    glue(
        t,
        &leaves.iter().collect::<Vec<_>>(),
        &d.hypothesis_conjunction(),
    )
}

/// Re-checks a theorem's proof in `t`. Succeeds whenever every rule and
/// proper axiom it uses is available in `t`, e.g. to move a theorem of a
/// stripped theory back into the full one.
pub fn lift(t: &Theory, th: &Theorem) -> Result<Theorem> {
    t.check_proof(th.proof())
}

fn side_conditions(root: &ProofNode, g: &Group) -> Result<()> {
    let mut err = None;
    root.walk(&mut |path, node| {
        if err.is_some() {
            return;
        }
        match node {
            ProofNode::Kg(i, _) if !g.contains(*i) => {
                err = Some(Error::AgentOutsideGroup {
                    agent: *i,
                    group: g.clone(),
                    path: path.clone(),
                })
            }
            ProofNode::Lfb { group, .. } if !group.is_subset(g) => {
                err = Some(Error::GroupOutsideGroup {
                    inner: group.clone(),
                    group: g.clone(),
                    path: path.clone(),
                })
            }
            _ => {}
        }
    });
    err.map_or(Ok(()), Err)
}

struct Internalizer<'a> {
    stripped: Theory,
    group: &'a Group,
    hypotheses: &'a [String],
    formulas: HashMap<String, Formula>,
    conj: Formula,
    guard: Formula,
    uses: HashMap<*const ProofNode, bool>,
    done: HashMap<*const ProofNode, Theorem>,
}

impl Internalizer<'_> {
    fn uses_hypothesis(&mut self, node: &ProofNode) -> bool {
        let key = node as *const ProofNode;
        if let Some(b) = self.uses.get(&key) {
            return *b;
        }
        let b = match node {
            ProofNode::Proper(name) => self.hypotheses.contains(name),
            _ => node.children().into_iter().any(|c| self.uses_hypothesis(c)),
        };
        self.uses.insert(key, b);
        b
    }

    /// The `α` of a transformed theorem `⊢ C_G Φ ⇒ C_G α`.
    fn inner(th: &Theorem) -> &Formula {
        match th.conclusion().as_implies() {
            Some((_, Formula::Common(_, body))) => body,
            _ => unreachable!("transformed theorems have the guarded shape"),
        }
    }

    fn go(&mut self, node: &ProofNode, path: &mut Vec<usize>) -> Result<Theorem> {
        let key = node as *const ProofNode;
        if let Some(th) = self.done.get(&key) {
            return Ok(th.clone());
        }
        let t = self.stripped.clone();
        let g = self.group;
        let at = |e: Error, path: &[usize]| match e {
            e @ Error::AtNode { .. } => e,
            e => Error::AtNode {
                path: NodePath(path.to_vec()),
                source: Box::new(e),
            },
        };
        let th = if !self.uses_hypothesis(node) {
            let plain = t.check_proof(node).map_err(|e| match e {
                Error::AtNode { path: sub, source } => {
                    let mut full = path.clone();
                    full.extend(sub.0);
                    Error::AtNode {
                        path: NodePath(full),
                        source,
                    }
                }
                e => at(e, path),
            })?;
            let boxed = kg_c(&t, g, &plain).map_err(|e| at(e, path))?;
            glue(
                &t,
                &[&boxed],
                &Formula::implies(self.guard.clone(), boxed.conclusion().clone()),
            )
            .map_err(|e| at(e, path))?
        } else {
            let mut child = |k: usize, c: &Proof, me: &mut Self| {
                path.push(k);
                let r = me.go(c, path);
                path.pop();
                r
            };
            let step = match node {
                ProofNode::Proper(name) => {
                    let h = self.formulas[name].clone();
                    let pick = t.ax_taut(&Formula::implies(self.conj.clone(), h))?;
                    c_mono(&t, g, &pick)
                }
                ProofNode::Mp(a, b) => {
                    let ta = child(0, a, self)?;
                    let tb = child(1, b, self)?;
                    let alpha = Self::inner(&ta).clone();
                    let beta = match Self::inner(&tb).as_implies() {
                        Some((_, beta)) => beta.clone(),
                        None => unreachable!("checked derivation"),
                    };
                    let kc = k_c(&t, g, &alpha, &beta)?;
                    glue(
                        &t,
                        &[&ta, &tb, &kc],
                        &Formula::implies(self.guard.clone(), Formula::common(g.clone(), beta)),
                    )
                }
                ProofNode::Kg(i, a) => {
                    let ta = child(0, a, self)?;
                    let step = internal_kg(&t, g, *i, Self::inner(&ta))?;
                    trans(&t, &ta, &step)
                }
                ProofNode::Lfb {
                    group,
                    phi,
                    premise,
                } => {
                    let tp = child(0, premise, self)?;
                    let rho = match Self::inner(&tp).as_implies() {
                        Some((rho, _)) => rho.clone(),
                        None => unreachable!("checked derivation"),
                    };
                    let step = internal_lfb_sub(&t, g, group, &rho, phi)?;
                    trans(&t, &tp, &step)
                }
                other => Err(Error::BasisViolation {
                    rule: other.tag(),
                    basis: t.basis(),
                }),
            };
            step.map_err(|e| at(e, path))?
        };
        self.done.insert(key, th.clone());
        Ok(th)
    }
}

/// `⊢ C_G(Φ) ⇒ C_G(ψ)` in the stripped theory.
pub fn internalize_full(d: &HypDerivation, g: &Group) -> Result<Theorem> {
    if d.theory.basis() != Basis::Ck {
        return Err(Error::BasisViolation {
            rule: RuleTag::Lfb,
            basis: d.theory.basis(),
        });
    }
    d.theory.check_group(g)?;
    side_conditions(&d.root, g)?;
    let conj = d.hypothesis_conjunction();
    let mut engine = Internalizer {
        stripped: d.stripped_theory(),
        group: g,
        hypotheses: &d.hypotheses,
        formulas: d
            .hypotheses
            .iter()
            .map(|h| {
                (
                    h.clone(),
                    d.theory.axiom(h).expect("validated in new").clone(),
                )
            })
            .collect(),
        guard: Formula::common(g.clone(), conj.clone()),
        conj,
        uses: HashMap::new(),
        done: HashMap::new(),
    };
    let root: &ProofNode = &d.root;
    engine.go(root, &mut Vec::new())
}

/// `⊢ C_G(Φ) ⇒ ψ` in the stripped theory.
pub fn internalize(d: &HypDerivation, g: &Group) -> Result<Theorem> {
    let full = internalize_full(d, g)?;
    weaken(
        &d.stripped_theory(),
        g,
        &d.hypothesis_conjunction(),
        &d.conclusion,
        &full,
    )
}

/// `⊢ C_G(Φ) ⇒ C_G(ψ)` from `⊢ C_G(Φ) ⇒ ψ`.
pub fn strengthen_internal(t: &Theory, g: &Group, th: &Theorem) -> Result<Theorem> {
    let (phi, psi) = guarded(th, g)?;
    strengthen(t, g, &phi, &psi, th)
}

fn guarded(th: &Theorem, g: &Group) -> Result<(Formula, Formula)> {
    match th.conclusion().as_implies() {
        Some((Formula::Common(h, phi), psi)) if h == g => Ok((phi.as_ref().clone(), psi.clone())),
        _ => Err(Error::shape(
            "externalize",
            format!("C {g} (...) ⇒ ..."),
            th.conclusion(),
        )),
    }
}

/// `⊢ Φ` and `⊢ C_G(Φ) ⇒ ψ` give `⊢ ψ`.
pub fn externalize(t: &Theory, g: &Group, premise: &Theorem, th: &Theorem) -> Result<Theorem> {
    for x in [premise, th] {
        if x.theory_id() != t.id() {
            return Err(Error::TheoryMismatch {
                expected: t.id().to_owned(),
                found: x.theory_id().to_owned(),
            });
        }
    }
    let (phi, _) = guarded(th, g)?;
    if &phi != premise.conclusion() {
        return Err(Error::shape("externalize", &phi, premise.conclusion()));
    }
    let boxed = kg_c(t, g, premise)?;
    t.rule_mp(&boxed, th)
}
