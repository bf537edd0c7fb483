//! Small proof-building helpers on top of the kernel.
//!
//! Nothing here is trusted: every function only calls kernel rules, so a
//! bug can make a construction fail but never yield a false theorem.

use crate::error::{Error, Result};
use crate::formula::{expand_everyone, Agent, Formula, Group};
use crate::kernel::{Theorem, Theory};

/// Derives `goal` from `premises` by one `TAUT` instance
/// `p1 ⇒ p2 ⇒ … ⇒ goal` followed by one `MP` per premise.
pub fn glue(t: &Theory, premises: &[&Theorem], goal: &Formula) -> Result<Theorem> {
    let schema = premises.iter().rev().fold(goal.clone(), |acc, p| {
        Formula::implies(p.conclusion().clone(), acc)
    });
    let mut th = t.ax_taut(&schema)?;
    for p in premises {
        th = t.rule_mp(p, &th)?;
    }
    Ok(th)
}

fn implication<'a>(th: &'a Theorem, what: &str) -> Result<(&'a Formula, &'a Formula)> {
    th.conclusion()
        .as_implies()
        .ok_or_else(|| Error::shape(what, "an implication", th.conclusion()))
}

/// `⊢ a ⇒ b` and `⊢ b ⇒ c` give `⊢ a ⇒ c`.
pub fn trans(t: &Theory, ab: &Theorem, bc: &Theorem) -> Result<Theorem> {
    let (a, b) = implication(ab, "transitivity")?;
    let (b2, c) = implication(bc, "transitivity")?;
    if b != b2 {
        return Err(Error::shape("transitivity", b, b2));
    }
    glue(t, &[ab, bc], &Formula::implies(a.clone(), c.clone()))
}

/// Chains a non-empty sequence of implications.
pub fn trans_all(t: &Theory, steps: &[&Theorem]) -> Result<Theorem> {
    let (first, rest) = steps
        .split_first()
        .ok_or_else(|| Error::Malformed("empty implication chain".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, th| trans(t, &acc, th))
}

/// `⊢ (a ∧ b) ⇒ c` gives `⊢ a ⇒ b ⇒ c`.
pub fn curry(t: &Theory, th: &Theorem) -> Result<Theorem> {
    let (ab, c) = implication(th, "curry")?;
    let (a, b) = ab
        .as_and()
        .ok_or_else(|| Error::shape("curry", "a conjunction", ab))?;
    glue(
        t,
        &[th],
        &Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone())),
    )
}

/// `⊢ a ⇒ b` gives `⊢ K_i a ⇒ K_i b`.
pub fn k_mono(t: &Theory, i: Agent, th: &Theorem) -> Result<Theorem> {
    let (a, b) = implication(th, "K monotonicity")?;
    let known = t.rule_kg(i, th)?;
    let dist = t.ax_k(i, a, b)?;
    glue(
        t,
        &[&known, &dist],
        &Formula::implies(Formula::knows(i, a.clone()), Formula::knows(i, b.clone())),
    )
}

/// `⊢ K_i a ∧ K_i b ⇒ K_i(a ∧ b)`.
pub fn k_and(t: &Theory, i: Agent, a: &Formula, b: &Formula) -> Result<Theorem> {
    let ab = Formula::and(a.clone(), b.clone());
    let pair = t.ax_taut(&Formula::implies(
        a.clone(),
        Formula::implies(b.clone(), ab.clone()),
    ))?;
    let known = t.rule_kg(i, &pair)?;
    let first = t.ax_k(i, a, &Formula::implies(b.clone(), ab.clone()))?;
    let second = t.ax_k(i, b, &ab)?;
    glue(
        t,
        &[&known, &first, &second],
        &Formula::implies(
            Formula::and(Formula::knows(i, a.clone()), Formula::knows(i, b.clone())),
            Formula::knows(i, ab),
        ),
    )
}

/// `⊢ a ⇒ b` gives `⊢ E_G a ⇒ E_G b`.
pub fn e_mono(t: &Theory, g: &Group, th: &Theorem) -> Result<Theorem> {
    let (a, b) = implication(th, "E monotonicity")?;
    let def_a = t.ax_e_def(g, a)?;
    let def_b = t.ax_e_def(g, b)?;
    let per_agent = g
        .members()
        .iter()
        .map(|i| k_mono(t, *i, th))
        .collect::<Result<Vec<_>>>()?;
    let mut premises = vec![&def_a, &def_b];
    premises.extend(per_agent.iter());
    glue(
        t,
        &premises,
        &Formula::implies(
            Formula::everyone(g.clone(), a.clone()),
            Formula::everyone(g.clone(), b.clone()),
        ),
    )
}

/// `⊢ E_G a ∧ E_G b ⇒ E_G(a ∧ b)`.
pub fn e_and(t: &Theory, g: &Group, a: &Formula, b: &Formula) -> Result<Theorem> {
    let ab = Formula::and(a.clone(), b.clone());
    let defs = [t.ax_e_def(g, a)?, t.ax_e_def(g, b)?, t.ax_e_def(g, &ab)?];
    let per_agent = g
        .members()
        .iter()
        .map(|i| k_and(t, *i, a, b))
        .collect::<Result<Vec<_>>>()?;
    let mut premises: Vec<&Theorem> = defs.iter().collect();
    premises.extend(per_agent.iter());
    glue(
        t,
        &premises,
        &Formula::implies(
            Formula::and(
                Formula::everyone(g.clone(), a.clone()),
                Formula::everyone(g.clone(), b.clone()),
            ),
            Formula::everyone(g.clone(), ab),
        ),
    )
}

/// `⊢ E_G a ⇒ K_i a` for `i ∈ G`.
pub fn e_member(t: &Theory, g: &Group, i: Agent, a: &Formula) -> Result<Theorem> {
    if !g.contains(i) {
        return Err(Error::AgentNotInGroup {
            agent: i,
            group: g.clone(),
        });
    }
    let def = t.ax_e_def(g, a)?;
    glue(
        t,
        &[&def],
        &Formula::implies(
            Formula::everyone(g.clone(), a.clone()),
            Formula::knows(i, a.clone()),
        ),
    )
}

/// `⊢ E_G a ⇒ E_H a` for `H ⊆ G`.
pub fn e_subgroup(t: &Theory, g: &Group, sub: &Group, a: &Formula) -> Result<Theorem> {
    if let Some(i) = sub.members().iter().find(|i| !g.contains(**i)) {
        return Err(Error::AgentNotInGroup {
            agent: *i,
            group: g.clone(),
        });
    }
    let big = t.ax_e_def(g, a)?;
    let small = t.ax_e_def(sub, a)?;
    glue(
        t,
        &[&big, &small],
        &Formula::implies(
            Formula::everyone(g.clone(), a.clone()),
            Formula::everyone(sub.clone(), a.clone()),
        ),
    )
}

/// `⊢ E_G a ⇔ ⋀_{i∈G} K_i a` split into the direction from the conjunction.
pub fn e_intro(t: &Theory, g: &Group, a: &Formula) -> Result<Theorem> {
    let def = t.ax_e_def(g, a)?;
    glue(
        t,
        &[&def],
        &Formula::implies(
            expand_everyone(g, a),
            Formula::everyone(g.clone(), a.clone()),
        ),
    )
}
