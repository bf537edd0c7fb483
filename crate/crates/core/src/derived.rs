//! Derived theorems and rules for common knowledge, and the derivations
//! relating the three axiomatizations.
//!
//! Everything is built from kernel rules (directly or through
//! [`crate::tactics`]), so each result carries a complete proof tree.

use crate::error::{Error, Result};
use crate::formula::{Agent, Formula, Group};
use crate::kernel::{Basis, TecAxiom, Theorem, Theory};
use crate::tactics::{curry, e_and, e_member, e_subgroup, glue, k_mono, trans, trans_all};

fn common(g: &Group, f: Formula) -> Formula {
    Formula::common(g.clone(), f)
}

fn everyone(g: &Group, f: Formula) -> Formula {
    Formula::everyone(g.clone(), f)
}

fn expect_conclusion(rule: &str, th: &Theorem, expected: &Formula) -> Result<()> {
    if th.conclusion() == expected {
        Ok(())
    } else {
        Err(Error::shape(rule, expected, th.conclusion()))
    }
}

/// `⊢ C_G φ ⇒ φ`
pub fn t_c(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let fb = t.ax_fb(g, phi)?;
    glue(
        t,
        &[&fb],
        &Formula::implies(common(g, phi.clone()), phi.clone()),
    )
}

/// `⊢ C_G φ ⇒ E_G(C_G φ)`
pub fn e_from_c(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let fb = t.ax_fb(g, phi)?;
    let c = common(g, phi.clone());
    glue(t, &[&fb], &Formula::implies(c.clone(), everyone(g, c)))
}

/// `⊢ (C_G φ ∧ C_G(φ ⇒ ψ)) ⇒ C_G ψ`
pub fn k_c(t: &Theory, g: &Group, phi: &Formula, psi: &Formula) -> Result<Theorem> {
    let imp = Formula::implies(phi.clone(), psi.clone());
    let c_phi = common(g, phi.clone());
    let c_imp = common(g, imp.clone());
    let both = Formula::and(c_phi.clone(), c_imp.clone());
    let pieces = [
        t_c(t, g, phi)?,
        t_c(t, g, &imp)?,
        e_from_c(t, g, phi)?,
        e_from_c(t, g, &imp)?,
        e_and(t, g, &c_phi, &c_imp)?,
    ];
    let premise = glue(
        t,
        &pieces.iter().collect::<Vec<_>>(),
        &Formula::implies(both.clone(), Formula::and(psi.clone(), everyone(g, both))),
    )?;
    t.rule_lfb(g, psi, &premise)
}

/// From `⊢ φ` derive `⊢ C_G φ`, by the fixpoint rule with `⊤` as the
/// invariant.
pub fn kg_c(t: &Theory, g: &Group, th: &Theorem) -> Result<Theorem> {
    let phi = th.conclusion();
    let top = Formula::top();
    let top_th = t.ax_taut(&top)?;
    let def = t.ax_e_def(g, &top)?;
    let known = g
        .members()
        .iter()
        .map(|i| t.rule_kg(*i, &top_th))
        .collect::<Result<Vec<_>>>()?;
    let mut premises = vec![th, &def];
    premises.extend(known.iter());
    let premise = glue(
        t,
        &premises,
        &Formula::implies(top.clone(), Formula::and(phi.clone(), everyone(g, top))),
    )?;
    let lfb = t.rule_lfb(g, phi, &premise)?;
    t.rule_mp(&top_th, &lfb)
}

/// `⊢ C_G φ ⇒ C_G(C_G φ)`
pub fn four_c(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let c = common(g, phi.clone());
    let efc = e_from_c(t, g, phi)?;
    let premise = glue(
        t,
        &[&efc],
        &Formula::implies(c.clone(), Formula::and(c.clone(), everyone(g, c.clone()))),
    )?;
    t.rule_lfb(g, &c, &premise)
}

/// From `⊢ C_G φ ⇒ ψ` derive `⊢ C_G φ ⇒ C_G ψ`.
pub fn strengthen(
    t: &Theory,
    g: &Group,
    phi: &Formula,
    psi: &Formula,
    th: &Theorem,
) -> Result<Theorem> {
    let c = common(g, phi.clone());
    expect_conclusion("strengthen", th, &Formula::implies(c.clone(), psi.clone()))?;
    let efc = e_from_c(t, g, phi)?;
    let premise = glue(
        t,
        &[th, &efc],
        &Formula::implies(c.clone(), Formula::and(psi.clone(), everyone(g, c))),
    )?;
    t.rule_lfb(g, psi, &premise)
}

/// From `⊢ C_G φ ⇒ C_G ψ` derive `⊢ C_G φ ⇒ ψ`.
pub fn weaken(
    t: &Theory,
    g: &Group,
    phi: &Formula,
    psi: &Formula,
    th: &Theorem,
) -> Result<Theorem> {
    expect_conclusion(
        "weaken",
        th,
        &Formula::implies(common(g, phi.clone()), common(g, psi.clone())),
    )?;
    trans(t, th, &t_c(t, g, psi)?)
}

/// From `⊢ a ⇒ b` derive `⊢ C_G a ⇒ C_G b`.
pub fn c_mono(t: &Theory, g: &Group, th: &Theorem) -> Result<Theorem> {
    let (a, b) = th
        .conclusion()
        .as_implies()
        .ok_or_else(|| Error::shape("C monotonicity", "an implication", th.conclusion()))?;
    let down = trans(t, &t_c(t, g, a)?, th)?;
    strengthen(t, g, a, b, &down)
}

/// `⊢ C_G(φ ∧ ψ) ⇒ C_G φ ∧ C_G ψ` and its converse.
pub fn c_conj(t: &Theory, g: &Group, phi: &Formula, psi: &Formula) -> Result<(Theorem, Theorem)> {
    let both = Formula::and(phi.clone(), psi.clone());
    let c_both = common(g, both.clone());
    let c_phi = common(g, phi.clone());
    let c_psi = common(g, psi.clone());
    let split = Formula::and(c_phi.clone(), c_psi.clone());

    let left = c_mono(
        t,
        g,
        &t.ax_taut(&Formula::implies(both.clone(), phi.clone()))?,
    )?;
    let right = c_mono(
        t,
        g,
        &t.ax_taut(&Formula::implies(both.clone(), psi.clone()))?,
    )?;
    let forward = glue(
        t,
        &[&left, &right],
        &Formula::implies(c_both.clone(), split.clone()),
    )?;

    let pieces = [
        t_c(t, g, phi)?,
        t_c(t, g, psi)?,
        e_from_c(t, g, phi)?,
        e_from_c(t, g, psi)?,
        e_and(t, g, &c_phi, &c_psi)?,
    ];
    let premise = glue(
        t,
        &pieces.iter().collect::<Vec<_>>(),
        &Formula::implies(
            split.clone(),
            Formula::and(both.clone(), everyone(g, split)),
        ),
    )?;
    let backward = t.rule_lfb(g, &both, &premise)?;
    Ok((forward, backward))
}

/// The A10 instance `⊢ C_G(φ ⇒ E_G φ) ⇒ φ ⇒ C_G φ` in the fixpoint basis.
pub fn a10_in_ck(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let step = Formula::implies(phi.clone(), everyone(g, phi.clone()));
    let inv = common(g, step.clone());
    let a7 = t_c(t, g, &step)?;
    let a8 = e_from_c(t, g, &step)?;
    let share = e_and(t, g, &inv, phi)?;
    let both = Formula::and(inv.clone(), phi.clone());
    let premise = glue(
        t,
        &[&a7, &a8, &share],
        &Formula::implies(both.clone(), Formula::and(phi.clone(), everyone(g, both))),
    )?;
    let lfb = t.rule_lfb(g, phi, &premise)?;
    curry(t, &lfb)
}

/// The A10 instance in whichever basis `t` uses.
pub fn a10(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    match t.basis() {
        Basis::Ck => a10_in_ck(t, g, phi),
        Basis::Tec => t.ax_tec(TecAxiom::A10, g, phi, None),
        Basis::TecPrime => a10_from_r10(t, g, phi),
    }
}

/// The fixpoint axiom FB from A7 and A8.
pub fn fb_in_tec(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let c = common(g, phi.clone());
    let a7 = t.ax_tec(TecAxiom::A7, g, phi, None)?;
    let a8 = t.ax_tec(TecAxiom::A8, g, phi, None)?;
    glue(
        t,
        &[&a7, &a8],
        &Formula::implies(c.clone(), Formula::and(phi.clone(), everyone(g, c))),
    )
}

/// The fixpoint rule LFB from R3, A9 and A10: `⊢ ρ ⇒ φ ∧ E_G ρ` gives
/// `⊢ ρ ⇒ C_G φ`.
pub fn lfb_in_tec(t: &Theory, g: &Group, phi: &Formula, th: &Theorem) -> Result<Theorem> {
    let (rho, body) = th
        .conclusion()
        .as_implies()
        .ok_or_else(|| Error::shape("LFB", "ρ ⇒ φ ∧ E_G(ρ)", th.conclusion()))?;
    let expected = Formula::and(phi.clone(), everyone(g, rho.clone()));
    if *body != expected {
        return Err(Error::shape("LFB", &expected, body));
    }

    let to_e = glue(
        t,
        &[th],
        &Formula::implies(rho.clone(), everyone(g, rho.clone())),
    )?;
    let c_to_e = t.rule_r3(g, &to_e)?;
    let a10 = a10(t, g, rho)?;
    let rho_to_c_rho = t.rule_mp(&c_to_e, &a10)?;

    let to_phi = glue(t, &[th], &Formula::implies(rho.clone(), phi.clone()))?;
    let c_to_phi = t.rule_r3(g, &to_phi)?;
    let a9 = t.ax_tec(TecAxiom::A9, g, rho, Some(phi))?;
    let c_rho_to_c_phi = glue(
        t,
        &[&c_to_phi, &a9],
        &Formula::implies(common(g, rho.clone()), common(g, phi.clone())),
    )?;
    trans(t, &rho_to_c_rho, &c_rho_to_c_phi)
}

/// The A10 instance derived with rule R10 in place of the axiom.
pub fn a10_from_r10(t: &Theory, g: &Group, phi: &Formula) -> Result<Theorem> {
    let step = Formula::implies(phi.clone(), everyone(g, phi.clone()));
    let inv = common(g, step.clone());
    let both = Formula::and(inv.clone(), phi.clone());

    let a8 = t.ax_tec(TecAxiom::A8, g, &step, None)?;
    let a7 = t.ax_tec(TecAxiom::A7, g, &step, None)?;
    let share = e_and(t, g, &inv, phi)?;
    let closed = glue(
        t,
        &[&a8, &a7, &share],
        &Formula::implies(both.clone(), everyone(g, both.clone())),
    )?;
    let c_closed = t.rule_r3(g, &closed)?;
    let both_to_c_both = t.rule_r10(g, &both, &c_closed)?;

    let proj = t.ax_taut(&Formula::implies(both.clone(), phi.clone()))?;
    let c_proj = t.rule_r3(g, &proj)?;
    let a9 = t.ax_tec(TecAxiom::A9, g, &both, Some(phi))?;
    let c_both_to_c_phi = glue(
        t,
        &[&c_proj, &a9],
        &Formula::implies(common(g, both), common(g, phi.clone())),
    )?;
    let chained = trans(t, &both_to_c_both, &c_both_to_c_phi)?;
    curry(t, &chained)
}

/// `⊢ C_G((φ ⇒ ψ) ∧ φ) ⇒ C_G ψ`
pub fn internal_mp(t: &Theory, g: &Group, phi: &Formula, psi: &Formula) -> Result<Theorem> {
    let imp = Formula::implies(phi.clone(), psi.clone());
    let (split, _) = c_conj(t, g, &imp, phi)?;
    let kc = k_c(t, g, phi, psi)?;
    glue(
        t,
        &[&split, &kc],
        &Formula::implies(
            common(g, Formula::and(imp, phi.clone())),
            common(g, psi.clone()),
        ),
    )
}

/// `⊢ C_G φ ⇒ C_G(K_i φ)` for `i ∈ G`.
pub fn internal_kg(t: &Theory, g: &Group, i: Agent, phi: &Formula) -> Result<Theorem> {
    if !g.contains(i) {
        return Err(Error::AgentNotInGroup {
            agent: i,
            group: g.clone(),
        });
    }
    let c = common(g, phi.clone());
    let efc = e_from_c(t, g, phi)?;
    let member = e_member(t, g, i, &c)?;
    let down = k_mono(t, i, &t_c(t, g, phi)?)?;
    let chained = trans_all(t, &[&efc, &member, &down])?;
    strengthen(t, g, phi, &Formula::knows(i, phi.clone()), &chained)
}

/// `⊢ C_G(ρ ⇒ φ ∧ E_G ρ) ⇒ C_G(ρ ⇒ C_G φ)`
pub fn internal_lfb(t: &Theory, g: &Group, rho: &Formula, phi: &Formula) -> Result<Theorem> {
    internal_lfb_sub(t, g, g, rho, phi)
}

/// `⊢ C_G(ρ ⇒ φ ∧ E_H ρ) ⇒ C_G(ρ ⇒ C_H φ)` for `H ⊆ G`.
pub fn internal_lfb_sub(
    t: &Theory,
    g: &Group,
    sub: &Group,
    rho: &Formula,
    phi: &Formula,
) -> Result<Theorem> {
    let body = Formula::implies(
        rho.clone(),
        Formula::and(phi.clone(), everyone(sub, rho.clone())),
    );
    let outer = common(g, body.clone());
    let both = Formula::and(outer.clone(), rho.clone());

    let unfold = t_c(t, g, &body)?;
    let efc = e_from_c(t, g, &body)?;
    let narrow = e_subgroup(t, g, sub, &outer)?;
    let share = e_and(t, sub, &outer, rho)?;
    let premise = glue(
        t,
        &[&unfold, &efc, &narrow, &share],
        &Formula::implies(both.clone(), Formula::and(phi.clone(), everyone(sub, both))),
    )?;
    let lfb = t.rule_lfb(sub, phi, &premise)?;
    let curried = curry(t, &lfb)?;
    strengthen(
        t,
        g,
        &body,
        &Formula::implies(rho.clone(), common(sub, phi.clone())),
        &curried,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Domain;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }
    fn theory(basis: Basis) -> Theory {
        Theory::new(basis.name(), Domain::range(2), basis)
    }
    fn groups() -> Vec<Group> {
        vec![
            Group::empty(),
            Group::from_ids([0]),
            Group::from_ids([0, 1]),
        ]
    }

    fn rechecks(t: &Theory, th: &Theorem) {
        let again = t.check_proof(th.proof()).unwrap();
        assert_eq!(again.conclusion(), th.conclusion());
    }

    #[test]
    fn t_c_and_e_from_c() {
        let t = theory(Basis::Ck);
        for g in groups() {
            let th = t_c(&t, &g, &p()).unwrap();
            assert_eq!(th.conclusion(), &Formula::implies(common(&g, p()), p()));
            rechecks(&t, &th);
            let e = e_from_c(&t, &g, &p()).unwrap();
            let c = common(&g, p());
            assert_eq!(
                e.conclusion(),
                &Formula::implies(c.clone(), everyone(&g, c))
            );
        }
        let ka = Formula::knows(Agent(0), p());
        let g = Group::from_ids([0]);
        assert_eq!(
            t_c(&t, &g, &ka).unwrap().conclusion(),
            &Formula::implies(common(&g, ka.clone()), ka)
        );
        assert!(matches!(
            t_c(&theory(Basis::Tec), &g, &p()),
            Err(Error::BasisViolation { .. })
        ));
    }

    #[test]
    fn k_c_kg_c_four_c() {
        let t = theory(Basis::Ck);
        for g in groups() {
            let kc = k_c(&t, &g, &p(), &q()).unwrap();
            let want = t.ax_tec(TecAxiom::A9, &g, &p(), Some(&q()));
            assert!(want.is_err());
            assert_eq!(
                kc.conclusion(),
                theory(Basis::Tec)
                    .ax_tec(TecAxiom::A9, &g, &p(), Some(&q()))
                    .unwrap()
                    .conclusion()
            );
            rechecks(&t, &kc);

            let pp = t.ax_taut(&Formula::implies(p(), p())).unwrap();
            let kg = kg_c(&t, &g, &pp).unwrap();
            assert_eq!(kg.conclusion(), &common(&g, Formula::implies(p(), p())));
            rechecks(&t, &kg);

            let four = four_c(&t, &g, &p()).unwrap();
            let c = common(&g, p());
            assert_eq!(
                four.conclusion(),
                &Formula::implies(c.clone(), common(&g, c))
            );
            assert!(four.proof().tags().iter().all(|tag| Basis::Ck.allows(*tag)));
        }
    }

    #[test]
    fn kg_c_matches_r3() {
        let ck = theory(Basis::Ck);
        let tec = theory(Basis::Tec);
        let f = Formula::implies(p(), p());
        for g in groups() {
            let a = kg_c(&ck, &g, &ck.ax_taut(&f).unwrap()).unwrap();
            let b = tec.rule_r3(&g, &tec.ax_taut(&f).unwrap()).unwrap();
            assert_eq!(a.conclusion().to_string(), b.conclusion().to_string());
        }
    }

    #[test]
    fn strengthen_and_weaken() {
        let t = theory(Basis::Ck);
        let g = Group::from_ids([0, 1]);
        let base = t_c(&t, &g, &p()).unwrap();
        let s = strengthen(&t, &g, &p(), &p(), &base).unwrap();
        let c = common(&g, p());
        assert_eq!(s.conclusion(), &Formula::implies(c.clone(), c.clone()));
        let w = weaken(&t, &g, &p(), &p(), &s).unwrap();
        assert_eq!(w.conclusion(), base.conclusion());
        assert!(matches!(
            strengthen(&t, &g, &q(), &p(), &base),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            weaken(&t, &g, &p(), &p(), &base),
            Err(Error::ShapeMismatch { .. })
        ));

        let efc = e_from_c(&t, &g, &p()).unwrap();
        let s2 = strengthen(&t, &g, &p(), &everyone(&g, c.clone()), &efc).unwrap();
        assert_eq!(
            s2.conclusion(),
            &Formula::implies(c.clone(), common(&g, everyone(&g, c)))
        );
    }

    #[test]
    fn c_conj_both_ways() {
        let t = theory(Basis::Ck);
        for g in groups() {
            let (fwd, bwd) = c_conj(&t, &g, &p(), &q()).unwrap();
            let cpq = common(&g, Formula::and(p(), q()));
            let split = Formula::and(common(&g, p()), common(&g, q()));
            assert_eq!(
                fwd.conclusion(),
                &Formula::implies(cpq.clone(), split.clone())
            );
            assert_eq!(bwd.conclusion(), &Formula::implies(split, cpq));
        }
    }

    #[test]
    fn a10_across_bases() {
        let tec = theory(Basis::Tec);
        let tecp = theory(Basis::TecPrime);
        let ck = theory(Basis::Ck);
        for g in groups() {
            let want = tec.ax_tec(TecAxiom::A10, &g, &p(), None).unwrap();
            let from_ck = a10_in_ck(&ck, &g, &p()).unwrap();
            let from_r10 = a10_from_r10(&tecp, &g, &p()).unwrap();
            assert_eq!(
                from_ck.conclusion().to_string(),
                want.conclusion().to_string()
            );
            assert_eq!(
                from_r10.conclusion().to_string(),
                want.conclusion().to_string()
            );
            rechecks(&ck, &from_ck);
            rechecks(&tecp, &from_r10);
        }
    }

    #[test]
    fn lfb_and_fb_in_tec() {
        let tec = theory(Basis::Tec);
        let ck = theory(Basis::Ck);
        for basis in [Basis::Tec, Basis::TecPrime] {
            let t = theory(basis);
            for g in groups() {
                let fb = fb_in_tec(&t, &g, &p()).unwrap();
                assert_eq!(fb.conclusion(), ck.ax_fb(&g, &p()).unwrap().conclusion());
                let via = lfb_in_tec(&t, &g, &p(), &fb).unwrap();
                let direct = ck.rule_lfb(&g, &p(), &ck.ax_fb(&g, &p()).unwrap()).unwrap();
                assert_eq!(via.conclusion(), direct.conclusion());
            }
        }
        // A C-free invariant.
        let g = Group::from_ids([0]);
        let body = Formula::implies(r(), Formula::and(p(), everyone(&g, r())));
        let t = tec.with_axiom("h", body).unwrap();
        let h = t.ax_proper("h").unwrap();
        let th = lfb_in_tec(&t, &g, &p(), &h).unwrap();
        assert_eq!(th.conclusion(), &Formula::implies(r(), common(&g, p())));
        assert!(matches!(
            lfb_in_tec(&t, &g, &q(), &h),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn internal_rules() {
        let t = theory(Basis::Ck);
        for g in groups() {
            let mp = internal_mp(&t, &g, &p(), &q()).unwrap();
            assert_eq!(
                mp.conclusion(),
                &Formula::implies(
                    common(&g, Formula::and(Formula::implies(p(), q()), p())),
                    common(&g, q())
                )
            );
            let lfb = internal_lfb(&t, &g, &r(), &p()).unwrap();
            assert_eq!(
                lfb.conclusion(),
                &Formula::implies(
                    common(
                        &g,
                        Formula::implies(r(), Formula::and(p(), everyone(&g, r())))
                    ),
                    common(&g, Formula::implies(r(), common(&g, p())))
                )
            );
            rechecks(&t, &lfb);
        }
        let g = Group::from_ids([0, 1]);
        let kg = internal_kg(&t, &g, Agent(0), &p()).unwrap();
        assert_eq!(
            kg.conclusion(),
            &Formula::implies(common(&g, p()), common(&g, Formula::knows(Agent(0), p())))
        );
        assert!(internal_kg(&t, &Group::from_ids([0]), Agent(0), &p()).is_ok());
        assert!(matches!(
            internal_kg(&t, &Group::empty(), Agent(0), &p()),
            Err(Error::AgentNotInGroup { .. })
        ));
    }
}
