//! Kripke semantics over small reflexive models, used to refute
//! non-theorems and to sanity-check everything the kernel produces.
//!
//! Worlds are numbered `0..n` with `n ≤ 8` and sets of worlds are bitmasks.
//! `K_i φ` holds where every `i`-successor satisfies `φ`, `E_G φ` where
//! every member knows `φ`, and `C_G φ` where every world reachable through
//! any number of `G`-steps satisfies `φ`; in particular `C_∅ φ` is `φ`.
//!
//! [`valid_on_small_models`] enumerates every model within the bounds: each
//! agent of the formula is interpreted by one of at most `agents` distinct
//! accessibility relations, and each atom by one of at most `atoms`
//! distinct valuations. Bounded validity is necessary for theoremhood,
//! never sufficient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Agent, Atom, Formula, Group};
use crate::kernel::{Theorem, Theory};

pub const MAX_WORLDS: usize = 8;
pub const MAX_ENUM_WORLDS: usize = 4;
pub const MAX_ENUM_AGENTS: usize = 3;
pub const MAX_ENUM_ATOMS: usize = 3;

type WorldSet = u8;

fn all_worlds(n: usize) -> WorldSet {
    ((1u16 << n) - 1) as WorldSet
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: usize,
    /// `relations[i][w]` is the set of `i`-successors of `w`.
    relations: BTreeMap<Agent, Vec<WorldSet>>,
    valuation: BTreeMap<Atom, WorldSet>,
}

impl KripkeModel {
    pub fn new(worlds: usize) -> Result<Self> {
        if worlds == 0 || worlds > MAX_WORLDS {
            return Err(Error::OutOfRange(format!(
                "a model needs between 1 and {MAX_WORLDS} worlds, got {worlds}"
            )));
        }
        Ok(KripkeModel {
            worlds,
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    /// Sets agent `i`'s relation from successor sets; every world is made
    /// its own successor.
    pub fn set_successors(&mut self, i: Agent, succ: &[WorldSet]) -> Result<()> {
        if succ.len() != self.worlds {
            return Err(Error::Malformed(format!(
                "relation for agent {i} has {} rows, expected {}",
                succ.len(),
                self.worlds
            )));
        }
        let mask = all_worlds(self.worlds);
        let rows = succ
            .iter()
            .enumerate()
            .map(|(w, s)| (s | (1 << w)) & mask)
            .collect();
        self.relations.insert(i, rows);
        Ok(())
    }

    /// Sets agent `i`'s relation from an edge list (reflexive closure added).
    pub fn set_edges(&mut self, i: Agent, edges: &[(usize, usize)]) -> Result<()> {
        let mut rows = vec![0; self.worlds];
        for &(a, b) in edges {
            if a >= self.worlds || b >= self.worlds {
                return Err(Error::OutOfRange(format!("edge ({a}, {b})")));
            }
            rows[a] |= 1 << b;
        }
        self.set_successors(i, &rows)
    }

    pub fn set_atom(&mut self, atom: Atom, worlds: &[usize]) -> Result<()> {
        let mut set = 0;
        for &w in worlds {
            if w >= self.worlds {
                return Err(Error::OutOfRange(format!("world {w}")));
            }
            set |= 1 << w;
        }
        self.valuation.insert(atom, set);
        Ok(())
    }

    pub fn successors(&self, i: Agent, w: usize) -> Option<Vec<usize>> {
        let row = self.relations.get(&i)?.get(w)?;
        Some((0..self.worlds).filter(|v| row & (1 << v) != 0).collect())
    }

    pub fn is_reflexive(&self) -> bool {
        self.relations
            .values()
            .all(|rows| rows.iter().enumerate().all(|(w, s)| s & (1 << w) != 0))
    }

    fn relation(&self, i: Agent) -> Result<&[WorldSet]> {
        self.relations
            .get(&i)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownAgent(i))
    }

    fn closure(&self, g: &Group) -> Result<Vec<WorldSet>> {
        let rels = g
            .members()
            .iter()
            .map(|i| self.relation(*i))
            .collect::<Result<Vec<_>>>()?;
        Ok(reach(self.worlds, &rels))
    }

    /// The set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> Result<WorldSet> {
        let n = self.worlds;
        let all = all_worlds(n);
        Ok(match f {
            Formula::False => 0,
            Formula::Atom(a) => *self
                .valuation
                .get(a)
                .ok_or_else(|| Error::UnknownAtom(atom_text(a)))?,
            Formula::Implies(a, b) => (!self.extension(a)? | self.extension(b)?) & all,
            Formula::Knows(i, a) => boxed(n, self.relation(*i)?, self.extension(a)?),
            Formula::Everyone(g, a) => {
                let inner = self.extension(a)?;
                g.members().iter().try_fold(all, |acc, i| {
                    Ok::<_, Error>(acc & boxed(n, self.relation(*i)?, inner))
                })?
            }
            Formula::Common(g, a) => boxed(n, &self.closure(g)?, self.extension(a)?),
        })
    }

    pub fn eval(&self, w: usize, f: &Formula) -> Result<bool> {
        if w >= self.worlds {
            return Err(Error::OutOfRange(format!("world {w}")));
        }
        Ok(self.extension(f)? & (1 << w) != 0)
    }
}

/// `eval(m, w, f)`
pub fn eval(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool> {
    m.eval(w, f)
}

fn atom_text(a: &Atom) -> String {
    let mut s = a.name.to_string();
    for x in a.args.iter() {
        s.push(' ');
        s.push_str(&x.to_string());
    }
    s
}

fn set_text(n: usize, s: WorldSet) -> String {
    let items: Vec<String> = (0..n)
        .filter(|w| s & (1 << w) != 0)
        .map(|w| w.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", self.worlds)?;
        for (i, rows) in &self.relations {
            let edges: Vec<String> = rows
                .iter()
                .enumerate()
                .flat_map(|(w, s)| {
                    (0..self.worlds)
                        .filter(move |v| v != &w && s & (1 << v) != 0)
                        .map(move |v| format!("{w}->{v}"))
                })
                .collect();
            writeln!(f, "agent {i}: reflexive + [{}]", edges.join(" "))?;
        }
        for (a, s) in &self.valuation {
            writeln!(f, "{}: {}", atom_text(a), set_text(self.worlds, *s))?;
        }
        Ok(())
    }
}

/// Worlds whose successors all lie in `target`.
fn boxed(n: usize, rel: &[WorldSet], target: WorldSet) -> WorldSet {
    (0..n).fold(0, |acc, w| {
        if rel[w] & !target == 0 {
            acc | (1 << w)
        } else {
            acc
        }
    })
}

/// Reflexive-transitive closure of the union of `rels`.
fn reach(n: usize, rels: &[&[WorldSet]]) -> Vec<WorldSet> {
    let mut r: Vec<WorldSet> = (0..n)
        .map(|w| rels.iter().fold(1 << w, |acc, rel| acc | rel[w]))
        .collect();
    loop {
        let next: Vec<WorldSet> = (0..n)
            .map(|w| {
                (0..n)
                    .filter(|v| r[w] & (1 << v) != 0)
                    .fold(r[w], |acc, v| acc | r[v])
            })
            .collect();
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Enumeration bounds for [`valid_on_small_models`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub worlds: usize,
    pub agents: usize,
    pub atoms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            worlds: 3,
            agents: 2,
            atoms: 2,
        }
    }
}

impl Bounds {
    fn check(&self) -> Result<()> {
        let bad = |what: &str, v: usize, max: usize| {
            Err(Error::ResourceLimit(format!(
                "{what} bound {v} is outside 1..={max}"
            )))
        };
        if self.worlds == 0 || self.worlds > MAX_ENUM_WORLDS {
            return bad("world", self.worlds, MAX_ENUM_WORLDS);
        }
        if self.agents == 0 || self.agents > MAX_ENUM_AGENTS {
            return bad("agent", self.agents, MAX_ENUM_AGENTS);
        }
        if self.atoms == 0 || self.atoms > MAX_ENUM_ATOMS {
            return bad("atom", self.atoms, MAX_ENUM_ATOMS);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Valid,
    Countermodel { model: KripkeModel, world: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid within bounds"),
            Verdict::Countermodel { model, world } => {
                writeln!(f, "countermodel (fails at world {world})")?;
                write!(f, "{model}")
            }
        }
    }
}

// Compiled evaluation: the formula DAG flattened into operations over
// world bitmasks, agents and atoms replaced by slot indices.

enum Op {
    Atom(usize),
    False,
    Implies(usize, usize),
    Knows(usize, usize),
    Everyone(Vec<usize>, usize),
    Common(usize, usize),
}

#[derive(Default)]
struct Program {
    ops: Vec<Op>,
    index: HashMap<Formula, usize>,
    agents: Vec<Agent>,
    atoms: Vec<Atom>,
    groups: Vec<Vec<usize>>,
}

impl Program {
    fn agent_slot(&mut self, a: Agent) -> usize {
        match self.agents.iter().position(|x| *x == a) {
            Some(k) => k,
            None => {
                self.agents.push(a);
                self.agents.len() - 1
            }
        }
    }

    fn group_slot(&mut self, g: &Group) -> usize {
        let slots: Vec<usize> = g.members().iter().map(|a| self.agent_slot(*a)).collect();
        match self.groups.iter().position(|x| *x == slots) {
            Some(k) => k,
            None => {
                self.groups.push(slots);
                self.groups.len() - 1
            }
        }
    }

    fn compile(&mut self, f: &Formula) -> usize {
        if let Some(k) = self.index.get(f) {
            return *k;
        }
        let op = match f {
            Formula::False => Op::False,
            Formula::Atom(a) => {
                let k = match self.atoms.iter().position(|x| x == a) {
                    Some(k) => k,
                    None => {
                        self.atoms.push(a.clone());
                        self.atoms.len() - 1
                    }
                };
                Op::Atom(k)
            }
            Formula::Implies(a, b) => Op::Implies(self.compile(a), self.compile(b)),
            Formula::Knows(i, a) => {
                let body = self.compile(a);
                Op::Knows(self.agent_slot(*i), body)
            }
            Formula::Everyone(g, a) => {
                let body = self.compile(a);
                Op::Everyone(
                    g.members().iter().map(|i| self.agent_slot(*i)).collect(),
                    body,
                )
            }
            Formula::Common(g, a) => {
                let body = self.compile(a);
                Op::Common(self.group_slot(g), body)
            }
        };
        self.ops.push(op);
        self.index.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn run(
        &self,
        n: usize,
        rels: &[&[WorldSet]],
        closures: &[Vec<WorldSet>],
        vals: &[WorldSet],
        out: &mut [WorldSet],
    ) {
        let all = all_worlds(n);
        for (k, op) in self.ops.iter().enumerate() {
            out[k] = match op {
                Op::False => 0,
                Op::Atom(a) => vals[*a],
                Op::Implies(a, b) => (!out[*a] | out[*b]) & all,
                Op::Knows(i, a) => boxed(n, rels[*i], out[*a]),
                Op::Everyone(g, a) => g
                    .iter()
                    .fold(all, |acc, i| acc & boxed(n, rels[*i], out[*a])),
                Op::Common(g, a) => boxed(n, &closures[*g], out[*a]),
            };
        }
    }
}

/// Restricted growth strings of length `len` with at most `blocks` values:
/// every way to partition `len` items into at most `blocks` labelled-by-
/// first-occurrence classes.
fn partitions(len: usize, blocks: usize) -> Vec<(Vec<usize>, usize)> {
    fn go(
        len: usize,
        blocks: usize,
        cur: &mut Vec<usize>,
        used: usize,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if cur.len() == len {
            out.push((cur.clone(), used));
            return;
        }
        for v in 0..(used + 1).min(blocks) {
            cur.push(v);
            go(len, blocks, cur, used.max(v + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, blocks, &mut Vec::new(), 0, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

fn permute_set(s: WorldSet, perm: &[usize]) -> WorldSet {
    perm.iter().enumerate().fold(0, |acc, (w, pw)| {
        if s & (1 << w) != 0 {
            acc | (1 << pw)
        } else {
            acc
        }
    })
}

fn permute_rel(rel: &[WorldSet], perm: &[usize]) -> Vec<WorldSet> {
    let mut out = vec![0; rel.len()];
    for (w, s) in rel.iter().enumerate() {
        out[perm[w]] = permute_set(*s, perm);
    }
    out
}

/// Every reflexive relation on `n` worlds.
fn reflexive_relations(n: usize) -> Vec<Vec<WorldSet>> {
    let free = n * (n - 1);
    (0u32..(1 << free))
        .map(|code| {
            let mut bit = 0;
            (0..n)
                .map(|w| {
                    let mut s: WorldSet = 1 << w;
                    for v in (0..n).filter(|v| *v != w) {
                        if code & (1 << bit) != 0 {
                            s |= 1 << v;
                        }
                        bit += 1;
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Calls `visit(tuple)` for every tuple of `len` pairwise distinct indices
/// into `0..count`, in lexicographic order. Stops early when `visit`
/// returns `true`.
fn distinct_tuples(count: usize, len: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(
        count: usize,
        len: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == len {
            return visit(cur);
        }
        for x in 0..count {
            if cur.contains(&x) {
                continue;
            }
            cur.push(x);
            let stop = go(count, len, cur, visit);
            cur.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(count, len, &mut Vec::new(), visit)
}

/// Searches for a model within `bounds` where every formula in `axioms`
/// holds at every world but `f` fails somewhere. Enumeration order is
/// fixed, so the countermodel returned is deterministic.
pub fn valid_under_axioms(f: &Formula, axioms: &[Formula], bounds: Bounds) -> Result<Verdict> {
    bounds.check()?;
    let mut prog = Program::default();
    let goal = prog.compile(f);
    let axiom_ops: Vec<usize> = axioms.iter().map(|a| prog.compile(a)).collect();
    let agent_maps = partitions(prog.agents.len(), bounds.agents);
    let atom_maps = partitions(prog.atoms.len(), bounds.atoms);
    let mut out = vec![0; prog.ops.len()];

    for n in 1..=bounds.worlds {
        let all = all_worlds(n);
        let rels = reflexive_relations(n);
        let perms = permutations(n);
        let rel_code: HashMap<Vec<WorldSet>, usize> = rels
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        // perm_of[p][r] = index of relation r permuted by perms[p].
        let perm_of: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| rels.iter().map(|r| rel_code[&permute_rel(r, p)]).collect())
            .collect();
        let sets: Vec<WorldSet> = (0..=all).collect();

        for (agent_map, agent_blocks) in &agent_maps {
            let mut found = None;
            distinct_tuples(rels.len(), *agent_blocks, &mut |tuple| {
                // Only the lexicographically least tuple of each world
                // permutation class is visited.
                let canonical = perm_of.iter().all(|pm| {
                    let image: Vec<usize> = tuple.iter().map(|r| pm[*r]).collect();
                    image.as_slice() >= tuple
                });
                if !canonical {
                    return false;
                }
                let slot_rels: Vec<&[WorldSet]> = agent_map
                    .iter()
                    .map(|b| rels[tuple[*b]].as_slice())
                    .collect();
                let closures: Vec<Vec<WorldSet>> = prog
                    .groups
                    .iter()
                    .map(|g| reach(n, &g.iter().map(|i| slot_rels[*i]).collect::<Vec<_>>()))
                    .collect();
                for (atom_map, atom_blocks) in &atom_maps {
                    let stop = distinct_tuples(sets.len(), *atom_blocks, &mut |vals| {
                        let slot_vals: Vec<WorldSet> =
                            atom_map.iter().map(|b| sets[vals[*b]]).collect();
                        prog.run(n, &slot_rels, &closures, &slot_vals, &mut out);
                        if axiom_ops.iter().any(|k| out[*k] != all) {
                            return false;
                        }
                        if out[goal] == all {
                            return false;
                        }
                        let world = (0..n)
                            .find(|w| out[goal] & (1 << w) == 0)
                            .expect("fails somewhere");
                        let mut model = KripkeModel::new(n).expect("bounded");
                        for (slot, a) in prog.agents.iter().enumerate() {
                            model.set_successors(*a, slot_rels[slot]).expect("sized");
                        }
                        for (slot, a) in prog.atoms.iter().enumerate() {
                            model.valuation.insert(a.clone(), slot_vals[slot]);
                        }
                        found = Some(Verdict::Countermodel { model, world });
                        true
                    });
                    if stop {
                        return true;
                    }
                }
                false
            });
            if let Some(v) = found {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::Valid)
}

pub fn valid_on_small_models(f: &Formula, bounds: Bounds) -> Result<Verdict> {
    valid_under_axioms(f, &[], bounds)
}

/// Checks a theorem against every small model of the proper axioms its
/// proof uses.
pub fn check_theorem(theory: &Theory, th: &Theorem, bounds: Bounds) -> Result<Verdict> {
    let axioms = th
        .proof()
        .proper_axioms_used()
        .into_iter()
        .map(|name| {
            theory
                .axiom(&name)
                .cloned()
                .ok_or(Error::UnknownAxiom(name))
        })
        .collect::<Result<Vec<_>>>()?;
    valid_under_axioms(th.conclusion(), &axioms, bounds)
}
