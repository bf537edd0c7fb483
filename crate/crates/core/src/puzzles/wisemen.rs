//! The three wise men.
//!
//! Alice, Bob and Carol each wear a red or white hat and see the others'
//! hats. Alice and then Bob say they do not know their colour; Carol then
//! knows hers.

use crate::derived::c_mono;
use crate::error::Result;
use crate::formula::{forall_agents, Agent, Domain, Formula, Group};
use crate::kernel::{Basis, Theorem, Theory};
use crate::meta::{internalize, HypDerivation};
use crate::tactics::{glue, k_and, k_mono, trans};

pub const ALICE: Agent = Agent(0);
pub const BOB: Agent = Agent(1);
pub const CAROL: Agent = Agent(2);

pub const ONE_HAT: &str = "One_hat";
pub const TWO_WHITE_HATS: &str = "Two_white_hats";
pub const K_ALICE_WHITE_BOB: &str = "K_Alice_white_Bob";
pub const K_ALICE_WHITE_CAROL: &str = "K_Alice_white_Carol";
pub const K_BOB_WHITE_CAROL: &str = "K_Bob_white_Carol";

pub fn domain() -> Domain {
    Domain::new()
        .with(ALICE, "Alice")
        .with(BOB, "Bob")
        .with(CAROL, "Carol")
}

pub fn everybody() -> Group {
    Group::new([ALICE, BOB, CAROL])
}

pub fn white(i: Agent) -> Formula {
    Formula::atom_with("white", [i])
}

pub fn red(i: Agent) -> Formula {
    Formula::atom_with("red", [i])
}

/// Agent `i` knows the colour of their own hat.
pub fn knows_hat(i: Agent) -> Formula {
    Formula::or(Formula::knows(i, white(i)), Formula::knows(i, red(i)))
}

pub fn one_hat() -> Formula {
    forall_agents(&domain(), |i| Formula::or(white(i), red(i)))
}

pub fn two_white_hats() -> Formula {
    Formula::implies(Formula::and(white(BOB), white(CAROL)), red(ALICE))
}

/// `white j ⇒ K_i(white j)`: `i` sees `j`'s hat.
pub fn sees_white(i: Agent, j: Agent) -> Formula {
    Formula::implies(white(j), Formula::knows(i, white(j)))
}

/// The five assumptions with their names.
pub fn assumptions() -> Vec<(&'static str, Formula)> {
    vec![
        (ONE_HAT, one_hat()),
        (TWO_WHITE_HATS, two_white_hats()),
        (K_ALICE_WHITE_BOB, sees_white(ALICE, BOB)),
        (K_ALICE_WHITE_CAROL, sees_white(ALICE, CAROL)),
        (K_BOB_WHITE_CAROL, sees_white(BOB, CAROL)),
    ]
}

/// The five assumptions as proper axioms.
pub fn axiom_theory() -> Theory {
    assumptions()
        .into_iter()
        .try_fold(
            Theory::new("wisemen", domain(), Basis::Ck),
            |t, (name, f)| t.with_axiom(name, f),
        )
        .expect("assumptions are well formed")
}

/// No proper axioms at all.
pub fn pure_theory() -> Theory {
    Theory::new("wisemen-pure", domain(), Basis::Ck)
}

/// What Carol hears: `K_Bob(¬Kh Alice) ∧ ¬Kh Bob`.
fn announcements() -> Formula {
    Formula::and(
        Formula::knows(BOB, Formula::not(knows_hat(ALICE))),
        Formula::not(knows_hat(BOB)),
    )
}

/// `K_Carol(K_Bob(¬Kh Alice) ∧ ¬Kh Bob) ⇒ Kh Carol`
pub fn carol_knows() -> Formula {
    Formula::implies(Formula::knows(CAROL, announcements()), knows_hat(CAROL))
}

/// `⊢ K_Carol(K_Bob(¬Kh Alice) ∧ ¬Kh Bob) ⇒ K_Carol(red Carol)` from the
/// five proper axioms.
pub fn wisemen_first() -> Result<Theorem> {
    first_in(&axiom_theory())
}

fn first_in(t: &Theory) -> Result<Theorem> {
    let one_hat = t.ax_proper(ONE_HAT)?;
    let two_white = t.ax_proper(TWO_WHITE_HATS)?;
    let alice_bob = t.ax_proper(K_ALICE_WHITE_BOB)?;
    let alice_carol = t.ax_proper(K_ALICE_WHITE_CAROL)?;
    let bob_carol = t.ax_proper(K_BOB_WHITE_CAROL)?;

    // If Carol's hat were white and Alice did not know hers, Bob's is red.
    let alice_infers = k_mono(t, ALICE, &two_white)?;
    let alice_combines = k_and(t, ALICE, &white(BOB), &white(CAROL))?;
    let not_kh_alice = Formula::not(knows_hat(ALICE));
    let bob_red = glue(
        t,
        &[
            &alice_infers,
            &alice_combines,
            &alice_bob,
            &alice_carol,
            &one_hat,
        ],
        &Formula::implies(Formula::and(white(CAROL), not_kh_alice.clone()), red(BOB)),
    )?;

    // Bob can run that argument too, so Carol's hat is red.
    let bob_combines = k_and(t, BOB, &white(CAROL), &not_kh_alice)?;
    let bob_infers = k_mono(t, BOB, &bob_red)?;
    let carol_red = glue(
        t,
        &[&bob_combines, &bob_infers, &bob_carol, &one_hat],
        &Formula::implies(announcements(), red(CAROL)),
    )?;
    k_mono(t, CAROL, &carol_red)
}

/// Bob's premise in the second result, in display order.
pub fn bob_premise() -> Formula {
    Formula::conj([
        one_hat(),
        sees_white(BOB, CAROL),
        sees_white(ALICE, BOB),
        sees_white(ALICE, CAROL),
        Formula::knows(ALICE, two_white_hats()),
        Formula::not(knows_hat(ALICE)),
    ])
}

/// `⊢ K_Carol(K_Bob(B) ∧ ¬Kh Bob) ⇒ Kh Carol` with every assumption
/// inside the knowledge operators and no proper axioms.
pub fn wisemen_second() -> Result<Theorem> {
    let t = pure_theory();
    let premise = bob_premise();
    let both_white = Formula::and(white(BOB), white(CAROL));

    let alice_applies = t.ax_k(ALICE, &both_white, &red(ALICE))?;
    let alice_combines = k_and(&t, ALICE, &white(BOB), &white(CAROL))?;
    let bob_red = glue(
        &t,
        &[&alice_applies, &alice_combines],
        &Formula::implies(premise.clone(), Formula::implies(white(CAROL), red(BOB))),
    )?;

    let bob_knows = k_mono(&t, BOB, &bob_red)?;
    let bob_applies = t.ax_k(BOB, &white(CAROL), &red(BOB))?;
    let bob_truth = t.ax_t(BOB, &premise)?;
    let heard = Formula::and(Formula::knows(BOB, premise), Formula::not(knows_hat(BOB)));
    let carol_red = glue(
        &t,
        &[&bob_knows, &bob_applies, &bob_truth],
        &Formula::implies(heard.clone(), red(CAROL)),
    )?;
    let carol_knows_red = k_mono(&t, CAROL, &carol_red)?;
    glue(
        &t,
        &[&carol_knows_red],
        &Formula::implies(Formula::knows(CAROL, heard), knows_hat(CAROL)),
    )
}

/// The first result extended to conclude `Kh Carol`, with the five
/// assumptions as hypotheses.
pub fn first_derivation() -> Result<HypDerivation> {
    let t = axiom_theory();
    let first = first_in(&t)?;
    let extended = glue(&t, &[&first], &carol_knows())?;
    HypDerivation::from_theorem(t, assumptions().into_iter().map(|(n, _)| n), &extended)
}

/// The assumptions in the order of the corollary's display.
pub fn corollary_assumptions() -> Formula {
    Formula::conj([
        two_white_hats(),
        one_hat(),
        sees_white(BOB, CAROL),
        sees_white(ALICE, BOB),
        sees_white(ALICE, CAROL),
    ])
}

/// `⊢ C_{Alice,Bob,Carol}(assumptions) ⇒ K_Carol(…) ⇒ Kh Carol`, by
/// internalizing [`first_derivation`].
pub fn wisemen_corollary() -> Result<Theorem> {
    let d = first_derivation()?;
    let g = everybody();
    let internal = internalize(&d, &g)?;
    let t = d.stripped_theory();
    let reorder = t.ax_taut(&Formula::implies(
        corollary_assumptions(),
        d.hypothesis_conjunction(),
    ))?;
    trans(&t, &c_mono(&t, &g, &reorder)?, &internal)
}
