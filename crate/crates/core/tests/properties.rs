mod common;

use ckl_core::derived::{c_conj, four_c, internal_kg, internal_lfb_sub, internal_mp, k_c, t_c};
use ckl_core::files::{read_proof, write_proof};
use ckl_core::meta::{externalize, internalize, internalize_full, lift, prove_hypotheses};
use ckl_core::oracle::{valid_on_small_models, Bounds, Verdict};
use ckl_core::taut::is_tautology;
use ckl_core::{Agent, Basis, Domain, Formula, Group, TecAxiom, Theorem, Theory};
use common::*;
use proptest::prelude::*;

fn small() -> Bounds {
    Bounds {
        worlds: 2,
        agents: 2,
        atoms: 2,
    }
}

fn valid(f: &Formula, bounds: Bounds) -> bool {
    valid_on_small_models(f, bounds).unwrap().is_valid()
}

fn formula(seed: u64, depth: u32) -> Formula {
    random_modal(&mut rng(seed), depth)
}

fn group_of(bits: u8) -> Group {
    Group::from_ids((0..2).filter(|i| bits >> i & 1 == 1))
}

fn ck() -> Theory {
    Theory::new("ck", Domain::range(3), Basis::Ck)
}

fn tec() -> Theory {
    Theory::new("tec", Domain::range(3), Basis::Tec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn axiom_instances_hold_in_small_models(s in any::<u64>(), bits in 0u8..4, i in 0u32..2) {
        let (a, b) = (formula(s, 2), formula(s ^ 1, 2));
        let g = group_of(bits);
        let t = ck();
        let e = tec();
        let instances: Vec<Theorem> = vec![
            t.ax_k(Agent(i), &a, &b).unwrap(),
            t.ax_t(Agent(i), &a).unwrap(),
            t.ax_e_def(&g, &a).unwrap(),
            t.ax_fb(&g, &a).unwrap(),
            e.ax_tec(TecAxiom::A7, &g, &a, None).unwrap(),
            e.ax_tec(TecAxiom::A8, &g, &a, None).unwrap(),
            e.ax_tec(TecAxiom::A9, &g, &a, Some(&b)).unwrap(),
            e.ax_tec(TecAxiom::A10, &g, &a, None).unwrap(),
        ];
        for th in instances {
            prop_assert!(valid(th.conclusion(), small()), "{}", th.conclusion());
        }
    }

    #[test]
    fn derived_theorems_hold_and_replay(s in any::<u64>(), bits in 0u8..4) {
        let (a, b) = (formula(s, 2), formula(s ^ 1, 1));
        let g = group_of(bits);
        let t = ck();
        let (split, join) = c_conj(&t, &g, &a, &b).unwrap();
        let mut all = vec![
            t_c(&t, &g, &a).unwrap(),
            k_c(&t, &g, &a, &b).unwrap(),
            four_c(&t, &g, &a).unwrap(),
            internal_mp(&t, &g, &a, &b).unwrap(),
            internal_lfb_sub(&t, &g, &group_of(bits & 1), &a, &b).unwrap(),
            split,
            join,
        ];
        if let Some(&i) = g.members().first() {
            all.push(internal_kg(&t, &g, i, &a).unwrap());
        }
        for th in all {
            let replay = t.check_proof(th.proof()).unwrap();
            prop_assert_eq!(replay.conclusion(), th.conclusion());
            prop_assert!(valid(th.conclusion(), small()), "{}", th.conclusion());
        }
    }

    #[test]
    fn taut_agrees_with_truth_table(s in any::<u64>()) {
        let mut g = rng(s);
        let leaves = [p(), q(), Formula::knows(Agent(0), p()), Formula::common(Group::from_ids([0]), r())];
        let f = random_formula(&mut g, &leaves, 5);
        prop_assert_eq!(is_tautology(&f).unwrap(), brute_force_taut(&f));
    }

    #[test]
    fn tautologies_hold_in_models(s in any::<u64>()) {
        let mut g = rng(s);
        let leaves = [p(), q(), Formula::knows(Agent(1), p()), Formula::everyone(Group::from_ids([0, 1]), q())];
        let f = random_formula(&mut g, &leaves, 4);
        if is_tautology(&f).unwrap() {
            prop_assert!(valid(&f, small()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_derivations_internalize_and_round_trip(s in any::<u64>()) {
        let (d, g) = random_derivation(&mut rng(s), "gen");
        let stripped = d.stripped_theory();
        let full = internalize_full(&d, &g).unwrap();
        let internal = internalize(&d, &g).unwrap();
        let cphi = Formula::common(g.clone(), d.hypothesis_conjunction());
        prop_assert_eq!(internal.conclusion(), &Formula::implies(cphi.clone(), d.conclusion().clone()));
        prop_assert_eq!(full.conclusion(), &Formula::implies(cphi, Formula::common(g.clone(), d.conclusion().clone())));
        stripped.check_proof(internal.proof()).unwrap();

        let premise = prove_hypotheses(&d).unwrap();
        let back = externalize(d.theory(), &g, &premise, &lift(d.theory(), &internal).unwrap()).unwrap();
        prop_assert_eq!(back.conclusion(), d.conclusion());

        let file = read_proof(&write_proof(&stripped, &internal), None).unwrap();
        let again = file.check(&file.default_theory().unwrap()).unwrap();
        prop_assert_eq!(again.conclusion(), internal.conclusion());
    }
}

#[test]
fn unrestricted_internal_kg_fails_for_the_empty_group() {
    let claim = Formula::implies(
        Formula::common(Group::empty(), p()),
        Formula::common(Group::empty(), Formula::knows(Agent(0), p())),
    );
    assert!(matches!(
        valid_on_small_models(&claim, small()).unwrap(),
        Verdict::Countermodel { .. }
    ));
    let t = ck();
    assert!(internal_kg(&t, &Group::empty(), Agent(0), &p()).is_err());
}

#[test]
fn non_theorems_have_countermodels() {
    let g = Group::from_ids([0, 1]);
    let wrong = [
        Formula::implies(p(), Formula::knows(Agent(0), p())),
        Formula::implies(
            Formula::everyone(g.clone(), p()),
            Formula::common(g.clone(), p()),
        ),
        Formula::implies(
            Formula::knows(Agent(0), p()),
            Formula::knows(Agent(0), Formula::knows(Agent(0), p())),
        ),
        Formula::implies(
            Formula::not(Formula::knows(Agent(0), p())),
            Formula::knows(Agent(0), Formula::not(Formula::knows(Agent(0), p()))),
        ),
    ];
    for f in wrong {
        assert!(!valid(&f, Bounds::default()), "{f}");
    }
}
