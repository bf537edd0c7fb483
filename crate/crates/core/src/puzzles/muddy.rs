//! The muddy children.
//!
//! Children `0..n` may have mud on their faces. Father announces that at
//! least one child is muddy, then repeatedly asks the muddy ones to step
//! forward. Each silent round turns "at least p" into common knowledge of
//! "at least p+1".

use itertools::Itertools;

use crate::derived::{e_from_c, t_c};
use crate::error::{Error, Result};
use crate::formula::{forall_agents, Agent, Domain, Formula, Group};
use crate::kernel::{Basis, Theorem, Theory};
use crate::meta::{internalize, HypDerivation};
use crate::tactics::{e_and, e_member, e_mono, glue};

pub const DEFAULT_MAX_CHILDREN: u32 = 4;

pub const KNOWLEDGE_DIFFUSION: &str = "Knowledge_Diffusion";
pub const FIRST_FATHER_STATEMENT: &str = "First_Father_Statement";

/// Whether the diffusion principle is a proper axiom or a common-knowledge
/// premise of the theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Axiom,
    Internal,
}

pub fn muddy(i: u32) -> Formula {
    Formula::atom_with("muddy", [Agent(i)])
}

/// Agents `0..n`.
pub fn children(n: u32) -> Group {
    Group::from_ids(0..n)
}

fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        Err(Error::ResourceLimit(format!(
            "{n} children exceeds the limit of {cap}"
        )))
    } else {
        Ok(())
    }
}

/// At least `p` of the `n` children are muddy: a disjunction over the
/// `p`-subsets in lexicographic order.
pub fn at_least(n: u32, p: u32) -> Result<Formula> {
    if p > n + 1 {
        return Err(Error::OutOfRange(format!(
            "at_least({n}, {p}): count exceeds {}",
            n + 1
        )));
    }
    Ok(Formula::disj(
        (0..n)
            .combinations(p as usize)
            .map(|s| Formula::conj(s.into_iter().map(muddy).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    ))
}

pub fn exactly(n: u32, p: u32) -> Result<Formula> {
    if p > n {
        return Err(Error::OutOfRange(format!(
            "exactly({n}, {p}): count exceeds {n}"
        )));
    }
    Ok(Formula::and(
        at_least(n, p)?,
        Formula::not(at_least(n, p + 1)?),
    ))
}

/// `⋀_i (E at_least(p) ⇒ E ¬exactly(p) ⇒ K_i E ¬exactly(p))`
pub fn knowledge_diffusion(n: u32, p: u32) -> Result<Formula> {
    let g = children(n);
    let seen = Formula::everyone(g.clone(), at_least(n, p)?);
    let silent = Formula::everyone(g, Formula::not(exactly(n, p)?));
    Ok(forall_agents(&Domain::range(n), |i| {
        Formula::implies(
            seen.clone(),
            Formula::implies(silent.clone(), Formula::knows(i, silent.clone())),
        )
    }))
}

/// `C at_least(p) ∧ E ¬exactly(p) ⇒ C at_least(p+1)` for `n` children.
pub fn progress_statement(n: u32, p: u32) -> Result<Formula> {
    let g = children(n);
    Ok(Formula::implies(
        Formula::and(
            Formula::common(g.clone(), at_least(n, p)?),
            Formula::everyone(g.clone(), Formula::not(exactly(n, p)?)),
        ),
        Formula::common(g, at_least(n, p + 1)?),
    ))
}

fn check_round(n: u32, p: u32) -> Result<()> {
    if p == 0 || p >= n {
        return Err(Error::OutOfRange(format!(
            "round {p} with {n} children: need 1 <= round < children"
        )));
    }
    Ok(())
}

/// Proves the progress step for `n` children from `diffusion`, a theorem
/// whose conclusion is [`knowledge_diffusion`]`(n, p)`.
pub fn progress_from(t: &Theory, n: u32, p: u32, diffusion: &Theorem) -> Result<Theorem> {
    check_round(n, p)?;
    let g = children(n);
    let seen = at_least(n, p)?;
    let silent = Formula::not(exactly(n, p)?);
    let next = at_least(n, p + 1)?;
    let common_seen = Formula::common(g.clone(), seen.clone());
    let shared_silent = Formula::everyone(g.clone(), silent.clone());
    let invariant = Formula::and(common_seen.clone(), shared_silent.clone());

    // The invariant implies the next count.
    let unfold = t_c(t, &g, &seen)?;
    let someone = e_member(t, &g, Agent(0), &silent)?;
    let truth = t.ax_t(Agent(0), &silent)?;
    let counted = glue(
        t,
        &[&unfold, &someone, &truth],
        &Formula::implies(invariant.clone(), next.clone()),
    )?;

    // The invariant is shared knowledge.
    let spread = e_from_c(t, &g, &seen)?;
    let shared_seen = e_mono(t, &g, &unfold)?;
    let def = t.ax_e_def(&g, &shared_silent)?;
    let parts = glue(
        t,
        &[&spread, &shared_seen, diffusion, &def],
        &Formula::implies(
            invariant.clone(),
            Formula::and(
                Formula::everyone(g.clone(), common_seen.clone()),
                Formula::everyone(g.clone(), shared_silent.clone()),
            ),
        ),
    )?;
    let pair = e_and(t, &g, &common_seen, &shared_silent)?;
    let stable = glue(
        t,
        &[&parts, &pair],
        &Formula::implies(
            invariant.clone(),
            Formula::everyone(g.clone(), invariant.clone()),
        ),
    )?;

    let premise = glue(
        t,
        &[&counted, &stable],
        &Formula::implies(
            invariant.clone(),
            Formula::and(next.clone(), Formula::everyone(g.clone(), invariant)),
        ),
    )?;
    t.rule_lfb(&g, &next, &premise)
}

/// The theory for one progress step: `n` children and the diffusion
/// principle for round `p` as a proper axiom.
pub fn progress_theory(n: u32, p: u32) -> Result<Theory> {
    Theory::new(&format!("muddy-{n}-round-{p}"), Domain::range(n), Basis::Ck)
        .with_axiom(KNOWLEDGE_DIFFUSION, knowledge_diffusion(n, p)?)
}

/// The progress step with the diffusion principle as hypothesis.
pub fn progress_derivation(n: u32, p: u32) -> Result<HypDerivation> {
    check_round(n, p)?;
    check_cap(n, DEFAULT_MAX_CHILDREN)?;
    let t = progress_theory(n, p)?;
    let kd = t.ax_proper(KNOWLEDGE_DIFFUSION)?;
    let th = progress_from(&t, n, p, &kd)?;
    HypDerivation::from_theorem(t, [KNOWLEDGE_DIFFUSION], &th)
}

/// The progress lemma for `n + 1` children and round `p`, `1 ≤ p ≤ n`.
///
/// `Axiom` gives `⊢ C X ∧ E Y ⇒ C Z` with the diffusion principle as a
/// proper axiom; `Internal` gives `⊢ C(KD) ⇒ C X ∧ E Y ⇒ C Z` with no
/// proper axioms, obtained by internalizing the former.
pub fn progress(n: u32, p: u32, variant: Variant) -> Result<Theorem> {
    let d = progress_derivation(n + 1, p)?;
    match variant {
        Variant::Axiom => d.theory().check_proof(d.root()),
        Variant::Internal => internalize(&d, &children(n + 1)),
    }
}

fn no_step(p: u32) -> String {
    format!("NoStep_{p}")
}

fn diffusion_name(p: u32) -> String {
    format!("{KNOWLEDGE_DIFFUSION}_{p}")
}

/// Father's first statement, one "nobody stepped forward" fact per round,
/// and the diffusion principle per round: as a proper axiom in the `Axiom`
/// variant, under common knowledge in the `Internal` one.
pub fn final_theory(n: u32, variant: Variant) -> Result<Theory> {
    if n == 0 {
        return Err(Error::OutOfRange("need at least one child".into()));
    }
    let g = children(n);
    let id = match variant {
        Variant::Axiom => format!("muddy-{n}"),
        Variant::Internal => format!("muddy-{n}-internal"),
    };
    let mut t = Theory::new(&id, Domain::range(n), Basis::Ck);
    t.add_axiom(
        FIRST_FATHER_STATEMENT,
        Formula::common(g.clone(), at_least(n, 1)?),
    )?;
    for p in 1..n {
        t.add_axiom(
            &no_step(p),
            Formula::everyone(g.clone(), Formula::not(exactly(n, p)?)),
        )?;
        let kd = knowledge_diffusion(n, p)?;
        let kd = match variant {
            Variant::Axiom => kd,
            Variant::Internal => Formula::common(g.clone(), kd),
        };
        t.add_axiom(&diffusion_name(p), kd)?;
    }
    Ok(t)
}

/// `⊢ C([:n:]) at_least(n, n)` with at most [`DEFAULT_MAX_CHILDREN`].
pub fn muddy_final(n: u32, variant: Variant) -> Result<Theorem> {
    muddy_final_capped(n, variant, DEFAULT_MAX_CHILDREN)
}

pub fn muddy_final_capped(n: u32, variant: Variant, cap: u32) -> Result<Theorem> {
    check_cap(n, cap)?;
    let t = final_theory(n, variant)?;
    let mut known = t.ax_proper(FIRST_FATHER_STATEMENT)?;
    for p in 1..n {
        let step = match variant {
            Variant::Axiom => progress_from(&t, n, p, &t.ax_proper(&diffusion_name(p))?)?,
            Variant::Internal => {
                let internal = internalize(&progress_derivation(n, p)?, &children(n))?;
                let lifted = t.check_proof(internal.proof())?;
                t.rule_mp(&t.ax_proper(&diffusion_name(p))?, &lifted)?
            }
        };
        let silent = t.ax_proper(&no_step(p))?;
        let goal = Formula::common(children(n), at_least(n, p + 1)?);
        known = glue(&t, &[&known, &silent, &step], &goal)?;
    }
    Ok(known)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn parse(s: &str) -> Formula {
        parse_formula(s, None).unwrap()
    }

    #[test]
    fn counting_formulas() {
        assert_eq!(at_least(2, 1).unwrap(), parse("(or (muddy 0) (muddy 1))"));
        assert_eq!(at_least(2, 2).unwrap(), parse("(and (muddy 0) (muddy 1))"));
        assert_eq!(at_least(3, 0).unwrap(), Formula::top());
        assert_eq!(at_least(3, 4).unwrap(), Formula::False);
        assert!(matches!(at_least(3, 5), Err(Error::OutOfRange(_))));
        assert_eq!(
            at_least(3, 2).unwrap(),
            parse("(or (and (muddy 0) (muddy 1)) (and (muddy 0) (muddy 2)) (and (muddy 1) (muddy 2)))")
        );
        assert_eq!(
            exactly(2, 1).unwrap(),
            parse("(and (or (muddy 0) (muddy 1)) (not (and (muddy 0) (muddy 1))))")
        );
    }

    #[test]
    fn disjunct_counts() {
        fn count(f: &Formula) -> usize {
            match f.as_or() {
                Some((_, rest)) => 1 + count(rest),
                None => 1,
            }
        }
        let binom =
            |n: u32, k: u32| (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
        for n in 1..=5u32 {
            for p in 1..=n {
                assert_eq!(
                    count(&at_least(n, p).unwrap()) as u64,
                    binom(n, p),
                    "({n},{p})"
                );
            }
        }
    }

    #[test]
    fn monotone_by_taut() {
        let t = Theory::new("m", Domain::range(4), Basis::Ck);
        for n in 1..=4 {
            for p in 0..n {
                let f = Formula::implies(at_least(n, p + 1).unwrap(), at_least(n, p).unwrap());
                assert!(t.ax_taut(&f).is_ok(), "({n},{p})");
            }
        }
    }

    #[test]
    fn progress_axiom_variant() {
        let th = progress(2, 1, Variant::Axiom).unwrap();
        assert_eq!(th.conclusion(), &progress_statement(3, 1).unwrap());
        assert_eq!(
            th.proof()
                .proper_axioms_used()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![KNOWLEDGE_DIFFUSION.to_string()]
        );
        assert!(matches!(
            progress(2, 0, Variant::Axiom),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            progress(2, 3, Variant::Axiom),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn final_small() {
        let one = muddy_final(1, Variant::Axiom).unwrap();
        assert_eq!(one.conclusion(), &Formula::common(children(1), muddy(0)));
        let two = muddy_final(2, Variant::Axiom).unwrap();
        assert_eq!(
            two.conclusion(),
            &Formula::common(children(2), at_least(2, 2).unwrap())
        );
        assert!(matches!(
            muddy_final(5, Variant::Axiom),
            Err(Error::ResourceLimit(_))
        ));
    }
}
