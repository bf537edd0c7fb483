#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use ckl_core::derived::kg_c;
use ckl_core::meta::HypDerivation;
use ckl_core::tactics::{glue, k_mono};
use ckl_core::{Agent, Basis, Domain, Formula, Group, Proof, ProofNode, TecAxiom, Theorem, Theory};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed from `--seed N` or `CKL_SEED`, default 7.
pub fn seed() -> u64 {
    let args: Vec<String> = std::env::args().collect();
    if let Some(k) = args.iter().position(|a| a == "--seed") {
        if let Some(v) = args.get(k + 1).and_then(|v| v.parse().ok()) {
            return v;
        }
    }
    std::env::var("CKL_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(7)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p() -> Formula {
    Formula::atom("p")
}

pub fn q() -> Formula {
    Formula::atom("q")
}

pub fn r() -> Formula {
    Formula::atom("r")
}

/// A random propositional combination of `leaves`.
pub fn random_formula(rng: &mut ChaCha8Rng, leaves: &[Formula], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::False,
            1 => Formula::top(),
            _ => leaves.choose(rng).unwrap().clone(),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, leaves, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::iff(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

/// A random formula with modal operators, agents below 3.
pub fn random_modal(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return [p(), q(), r(), Formula::False].choose(rng).unwrap().clone();
    }
    let group = |rng: &mut ChaCha8Rng| Group::from_ids((0..3).filter(|_| rng.gen_bool(0.5)));
    match rng.gen_range(0..7) {
        0 => Formula::not(random_modal(rng, depth - 1)),
        1 => Formula::and(random_modal(rng, depth - 1), random_modal(rng, depth - 1)),
        2 => Formula::implies(random_modal(rng, depth - 1), random_modal(rng, depth - 1)),
        3 => Formula::knows(Agent(rng.gen_range(0..3)), random_modal(rng, depth - 1)),
        4 => {
            let g = group(rng);
            Formula::everyone(g, random_modal(rng, depth - 1))
        }
        5 => {
            let g = group(rng);
            Formula::common(g, random_modal(rng, depth - 1))
        }
        _ => Formula::or(random_modal(rng, depth - 1), random_modal(rng, depth - 1)),
    }
}

/// Truth-table check: every maximal non-propositional subformula is an
/// independent variable, all assignments are tried.
pub fn brute_force_taut(f: &Formula) -> bool {
    fn collect(f: &Formula, vars: &mut BTreeMap<Formula, usize>) {
        match f {
            Formula::False => {}
            Formula::Implies(a, b) => {
                collect(a, vars);
                collect(b, vars);
            }
            other => {
                let n = vars.len();
                vars.entry(other.clone()).or_insert(n);
            }
        }
    }
    fn eval(f: &Formula, vars: &BTreeMap<Formula, usize>, bits: u64) -> bool {
        match f {
            Formula::False => false,
            Formula::Implies(a, b) => !eval(a, vars, bits) || eval(b, vars, bits),
            other => bits >> vars[other] & 1 == 1,
        }
    }
    let mut vars = BTreeMap::new();
    collect(f, &mut vars);
    assert!(vars.len() <= 20);
    (0..1u64 << vars.len()).all(|bits| eval(f, &vars, bits))
}

pub fn abstract_vars(f: &Formula) -> usize {
    fn go(f: &Formula, seen: &mut Vec<Formula>) {
        match f {
            Formula::False => {}
            Formula::Implies(a, b) => {
                go(a, seen);
                go(b, seen);
            }
            other => {
                if !seen.contains(other) {
                    seen.push(other.clone());
                }
            }
        }
    }
    let mut seen = Vec::new();
    go(f, &mut seen);
    seen.len()
}

/// A random derivation in a CK theory over three agents, with one to three
/// hypotheses, together with a group that satisfies the side conditions.
pub fn random_derivation(rng: &mut ChaCha8Rng, id: &str) -> (HypDerivation, Group) {
    let g = loop {
        let g = Group::from_ids((0..3).filter(|_| rng.gen_bool(0.6)));
        if !g.is_empty() {
            break g;
        }
    };
    let members = g.members().to_vec();
    let n_hyps = rng.gen_range(1..=3);
    let mut t = Theory::new(id, Domain::range(3), Basis::Ck);
    for k in 0..n_hyps {
        t.add_axiom(&format!("h{k}"), random_modal(rng, 2)).unwrap();
    }
    t.add_axiom("extra", Formula::implies(r(), p())).unwrap();

    let mut pool: Vec<Theorem> = (0..n_hyps)
        .map(|k| t.ax_proper(&format!("h{k}")).unwrap())
        .collect();
    let i = *members.choose(rng).unwrap();
    pool.push(t.ax_t(i, &p()).unwrap());
    pool.push(t.ax_k(i, &p(), &q()).unwrap());
    if rng.gen_bool(0.5) {
        pool.push(t.ax_proper("extra").unwrap());
    }
    let sub = Group::new(members.iter().copied().filter(|_| rng.gen_bool(0.5)));
    pool.push(t.ax_fb(&sub, &q()).unwrap());
    pool.push(t.ax_e_def(&g, &r()).unwrap());

    let steps = rng.gen_range(3..7);
    for _ in 0..steps {
        let a = pool.choose(rng).unwrap().clone();
        let i = *members.choose(rng).unwrap();
        let next = match rng.gen_range(0..5) {
            0 => t.rule_kg(i, &a).unwrap(),
            1 => {
                let b = pool.choose(rng).unwrap().clone();
                let goal = Formula::and(a.conclusion().clone(), b.conclusion().clone());
                glue(&t, &[&a, &b], &goal).unwrap()
            }
            2 => {
                let goal = Formula::or(a.conclusion().clone(), random_modal(rng, 1));
                glue(&t, &[&a], &goal).unwrap()
            }
            3 => {
                let sub = Group::new(members.iter().copied().filter(|_| rng.gen_bool(0.5)));
                kg_c(&t, &sub, &a).unwrap()
            }
            _ => match a.conclusion().as_implies() {
                Some(_) => k_mono(&t, i, &a).unwrap(),
                None => t.rule_kg(i, &a).unwrap(),
            },
        };
        pool.push(next);
    }
    let last = pool.last().unwrap().clone();
    let h = t
        .ax_proper(&format!("h{}", rng.gen_range(0..n_hyps)))
        .unwrap();
    let goal = Formula::and(h.conclusion().clone(), last.conclusion().clone());
    let root = glue(&t, &[&h, &last], &goal).unwrap();
    let hyps: Vec<String> = (0..n_hyps).map(|k| format!("h{k}")).collect();
    (HypDerivation::from_theorem(t, hyps, &root).unwrap(), g)
}

/// Paths of every node in the (unshared) proof tree.
pub fn node_paths(root: &ProofNode) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    root.walk(&mut |path, _| out.push(path.0.clone()));
    out
}

pub fn node_at<'a>(root: &'a Proof, path: &[usize]) -> &'a Proof {
    path.iter().fold(root, |n, &k| n.children()[k])
}

/// `root` with the node at `path` replaced.
pub fn replace_at(root: &Proof, path: &[usize], new: Proof) -> Proof {
    let Some((&k, rest)) = path.split_first() else {
        return new;
    };
    let child = |c: &Proof| replace_at(c, rest, new.clone());
    let node = match &**root {
        ProofNode::Mp(a, b) if k == 0 => ProofNode::Mp(child(a), b.clone()),
        ProofNode::Mp(a, b) => ProofNode::Mp(a.clone(), child(b)),
        ProofNode::Kg(i, c) => ProofNode::Kg(*i, child(c)),
        ProofNode::Lfb {
            group,
            phi,
            premise,
        } => ProofNode::Lfb {
            group: group.clone(),
            phi: phi.clone(),
            premise: child(premise),
        },
        ProofNode::R3 { group, premise } => ProofNode::R3 {
            group: group.clone(),
            premise: child(premise),
        },
        ProofNode::R10 {
            group,
            phi,
            premise,
        } => ProofNode::R10 {
            group: group.clone(),
            phi: phi.clone(),
            premise: child(premise),
        },
        leaf => panic!("no child {k} under {}", leaf.tag()),
    };
    Arc::new(node)
}

pub fn mutate_formula(rng: &mut ChaCha8Rng, f: &Formula) -> Formula {
    match (rng.gen_range(0..4), f) {
        (0, Formula::Implies(a, b)) => Formula::implies((**b).clone(), (**a).clone()),
        (1, _) => Formula::not(f.clone()),
        (2, Formula::Implies(a, _)) => (**a).clone(),
        _ => Formula::and(f.clone(), Formula::atom("z")),
    }
}

pub fn mutate_group(rng: &mut ChaCha8Rng, g: &Group) -> Group {
    let a = Agent(rng.gen_range(0..4));
    if g.contains(a) {
        Group::new(g.members().iter().copied().filter(|x| *x != a))
    } else {
        Group::new(g.members().iter().copied().chain([a]))
    }
}

pub fn mutate_agent(rng: &mut ChaCha8Rng, a: Agent) -> Agent {
    Agent((a.id() + rng.gen_range(1..4)) % 5)
}

/// One random local change to a node: a parameter, a tag or a child.
pub fn mutate_node(rng: &mut ChaCha8Rng, node: &ProofNode, axiom_names: &[String]) -> ProofNode {
    let flip = rng.gen_bool(0.5);
    match node.clone() {
        ProofNode::Taut(f) => ProofNode::Taut(mutate_formula(rng, &f)),
        ProofNode::AxK { agent, phi, psi } => match rng.gen_range(0..3) {
            0 => ProofNode::AxK {
                agent: mutate_agent(rng, agent),
                phi,
                psi,
            },
            1 => ProofNode::AxK {
                agent,
                phi: mutate_formula(rng, &phi),
                psi,
            },
            _ => ProofNode::AxK {
                agent,
                phi: psi,
                psi: phi,
            },
        },
        ProofNode::AxT { agent, phi } if flip => ProofNode::AxT {
            agent: mutate_agent(rng, agent),
            phi,
        },
        ProofNode::AxT { agent, phi } => ProofNode::AxT {
            agent,
            phi: mutate_formula(rng, &phi),
        },
        ProofNode::AxEDef { group, phi } if flip => ProofNode::AxEDef {
            group: mutate_group(rng, &group),
            phi,
        },
        ProofNode::AxEDef { group, phi } => ProofNode::AxFb { group, phi },
        ProofNode::AxFb { group, phi } if flip => ProofNode::AxFb {
            group: mutate_group(rng, &group),
            phi,
        },
        ProofNode::AxFb { group, phi } => ProofNode::AxEDef {
            group,
            phi: mutate_formula(rng, &phi),
        },
        ProofNode::AxTec {
            which,
            group,
            phi,
            psi,
        } => match rng.gen_range(0..3) {
            0 => ProofNode::AxTec {
                which,
                group: mutate_group(rng, &group),
                phi,
                psi,
            },
            1 => ProofNode::AxTec {
                which,
                group,
                phi: mutate_formula(rng, &phi),
                psi,
            },
            _ => {
                let other = match which {
                    TecAxiom::A7 => TecAxiom::A8,
                    TecAxiom::A8 => TecAxiom::A10,
                    TecAxiom::A9 => TecAxiom::A7,
                    TecAxiom::A10 => TecAxiom::A7,
                };
                ProofNode::AxTec {
                    which: other,
                    group,
                    phi,
                    psi: None,
                }
            }
        },
        ProofNode::Proper(name) => {
            let others: Vec<_> = axiom_names.iter().filter(|n| **n != name).collect();
            match others.choose(rng) {
                Some(n) if flip => ProofNode::Proper((*n).clone()),
                _ => ProofNode::Proper(format!("{name}_x")),
            }
        }
        ProofNode::Mp(a, b) => match rng.gen_range(0..3) {
            0 => ProofNode::Mp(b, a),
            1 => ProofNode::Mp(a.clone(), a),
            _ => ProofNode::Mp(b.clone(), b),
        },
        ProofNode::Kg(i, c) if flip => ProofNode::Kg(mutate_agent(rng, i), c),
        ProofNode::Kg(i, c) => ProofNode::R3 {
            group: Group::new([i]),
            premise: c,
        },
        ProofNode::Lfb {
            group,
            phi,
            premise,
        } => match rng.gen_range(0..3) {
            0 => ProofNode::Lfb {
                group: mutate_group(rng, &group),
                phi,
                premise,
            },
            1 => ProofNode::Lfb {
                group,
                phi: mutate_formula(rng, &phi),
                premise,
            },
            _ => ProofNode::R10 {
                group,
                phi,
                premise,
            },
        },
        ProofNode::R3 { group, premise } if flip => ProofNode::R3 {
            group: mutate_group(rng, &group),
            premise,
        },
        ProofNode::R3 { group, premise } => ProofNode::Kg(
            group.members().first().copied().unwrap_or(Agent(0)),
            premise,
        ),
        ProofNode::R10 {
            group,
            phi,
            premise,
        } if flip => ProofNode::R10 {
            group: mutate_group(rng, &group),
            phi,
            premise,
        },
        ProofNode::R10 {
            group,
            phi,
            premise,
        } => ProofNode::Lfb {
            group,
            phi,
            premise,
        },
    }
}
