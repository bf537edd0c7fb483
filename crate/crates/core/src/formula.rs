//! Object-language syntax: agents, groups and formulas.
//!
//! The only primitive connectives are `⊥` and `⇒`. Negation, truth,
//! conjunction, disjunction and equivalence are expanded when they are
//! built, so two formulas are equal exactly when their desugared trees are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// An agent, identified by a small integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub u32);

impl Agent {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of agents, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(Vec<Agent>);

impl Group {
    pub fn new<I: IntoIterator<Item = Agent>>(members: I) -> Self {
        let mut v: Vec<Agent> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Group(v)
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        Self::new(ids.into_iter().map(Agent))
    }

    pub fn empty() -> Self {
        Group(Vec::new())
    }

    pub fn members(&self) -> &[Agent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: Agent) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn is_subset(&self, other: &Group) -> bool {
        self.0.iter().all(|a| other.contains(*a))
    }
}

impl FromIterator<Agent> for Group {
    fn from_iter<I: IntoIterator<Item = Agent>>(iter: I) -> Self {
        Group::new(iter)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A predicate applied to agent arguments, e.g. `white(0)` or `muddy(2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: Arc<str>,
    pub args: Arc<[Agent]>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    False,
    Implies(Arc<Formula>, Arc<Formula>),
    Knows(Agent, Arc<Formula>),
    Everyone(Group, Arc<Formula>),
    Common(Group, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::atom_with(name, std::iter::empty())
    }

    pub fn atom_with<I: IntoIterator<Item = Agent>>(name: &str, args: I) -> Formula {
        Formula::Atom(Atom {
            name: Arc::from(name),
            args: args.into_iter().collect(),
        })
    }

    pub fn falsum() -> Formula {
        Formula::False
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::False)
    }

    pub fn top() -> Formula {
        Formula::not(Formula::False)
    }

    /// `a ∧ b ≔ ¬(a ⇒ ¬b)`
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `a ∨ b ≔ ¬a ⇒ b`
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn knows(i: Agent, a: Formula) -> Formula {
        Formula::Knows(i, Arc::new(a))
    }

    pub fn everyone(g: Group, a: Formula) -> Formula {
        Formula::Everyone(g, Arc::new(a))
    }

    pub fn common(g: Group, a: Formula) -> Formula {
        Formula::Common(g, Arc::new(a))
    }

    /// Right-nested conjunction; `⊤` when empty.
    pub fn conj<I>(items: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::top(),
            Some(last) => it.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Right-nested disjunction; `⊥` when empty.
    pub fn disj<I>(items: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Formula::False,
            Some(last) => it.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Implies(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::False => Some(a),
            _ => None,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self.as_not(), Some(Formula::False))
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let (a, nb) = self.as_not()?.as_implies()?;
        Some((a, nb.as_not()?))
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        let (na, b) = self.as_implies()?;
        Some((na.as_not()?, b))
    }

    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_and()?;
        let (a, b) = l.as_implies()?;
        let (b2, a2) = r.as_implies()?;
        (a == a2 && b == b2).then_some((a, b))
    }

    /// Number of nodes in the formula tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::False => 1,
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Knows(_, a) | Formula::Everyone(_, a) | Formula::Common(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::False => 1,
            Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Knows(_, a) | Formula::Everyone(_, a) | Formula::Common(_, a) => 1 + a.depth(),
        }
    }

    /// Every agent occurring in a modality or as an atom argument.
    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<Agent>) {
        match self {
            Formula::Atom(a) => out.extend(a.args.iter().copied()),
            Formula::False => {}
            Formula::Implies(a, b) => {
                a.collect_agents(out);
                b.collect_agents(out);
            }
            Formula::Knows(i, a) => {
                out.insert(*i);
                a.collect_agents(out);
            }
            Formula::Everyone(g, a) | Formula::Common(g, a) => {
                out.extend(g.members().iter().copied());
                a.collect_agents(out);
            }
        }
    }

    /// Distinct atoms, in first-occurrence order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_atoms(&mut seen, &mut out);
        out
    }

    fn collect_atoms(&self, seen: &mut BTreeSet<Atom>, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => {
                if seen.insert(a.clone()) {
                    out.push(a.clone());
                }
            }
            Formula::False => {}
            Formula::Implies(a, b) => {
                a.collect_atoms(seen, out);
                b.collect_atoms(seen, out);
            }
            Formula::Knows(_, a) | Formula::Everyone(_, a) | Formula::Common(_, a) => {
                a.collect_atoms(seen, out)
            }
        }
    }

    /// Replaces every `E_G(φ)` by its unfolding `⋀_{i∈G} K_i φ`, bottom-up.
    pub fn unfold_everyone(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::False => self.clone(),
            Formula::Implies(a, b) => Formula::implies(a.unfold_everyone(), b.unfold_everyone()),
            Formula::Knows(i, a) => Formula::knows(*i, a.unfold_everyone()),
            Formula::Everyone(g, a) => expand_everyone(g, &a.unfold_everyone()),
            Formula::Common(g, a) => Formula::common(g.clone(), a.unfold_everyone()),
        }
    }

    /// Infix rendering with unicode connectives, for humans.
    pub fn pretty<'a>(&'a self, domain: Option<&'a Domain>) -> Pretty<'a> {
        Pretty { f: self, domain }
    }
}

/// `⋀_{i∈G} K_i φ`, right-nested in agent order; `⊤` for the empty group.
pub fn expand_everyone(g: &Group, f: &Formula) -> Formula {
    Formula::conj(g.members().iter().map(|i| Formula::knows(*i, f.clone())))
}

/// Finite stand-in for object-level quantification over agents.
pub fn forall_agents<F>(domain: &Domain, template: F) -> Formula
where
    F: Fn(Agent) -> Formula,
{
    let parts: Vec<Formula> = domain.agents().map(template).collect();
    Formula::conj(parts)
}

/// The agents a theory talks about, with optional display names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Domain {
    agents: BTreeMap<Agent, Option<String>>,
}

impl Domain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Agents `0..n` without names.
    pub fn range(n: u32) -> Self {
        Domain {
            agents: (0..n).map(|i| (Agent(i), None)).collect(),
        }
    }

    /// Adds an agent. Returns `false` if the id or the name is already taken.
    pub fn insert(&mut self, a: Agent, name: Option<&str>) -> bool {
        if self.agents.contains_key(&a) {
            return false;
        }
        if let Some(n) = name {
            if self.lookup(n).is_some() {
                return false;
            }
        }
        self.agents.insert(a, name.map(str::to_owned));
        true
    }

    pub fn with(mut self, a: Agent, name: &str) -> Self {
        self.insert(a, Some(name));
        self
    }

    pub fn contains(&self, a: Agent) -> bool {
        self.agents.contains_key(&a)
    }

    pub fn agents(&self) -> impl DoubleEndedIterator<Item = Agent> + '_ {
        self.agents.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn name(&self, a: Agent) -> Option<&str> {
        self.agents.get(&a).and_then(|n| n.as_deref())
    }

    pub fn lookup(&self, name: &str) -> Option<Agent> {
        self.agents
            .iter()
            .find(|(_, n)| n.as_deref() == Some(name))
            .map(|(a, _)| *a)
    }

    pub fn group(&self) -> Group {
        Group::new(self.agents())
    }

    pub fn entries(&self) -> impl Iterator<Item = (Agent, Option<&str>)> + '_ {
        self.agents.iter().map(|(a, n)| (*a, n.as_deref()))
    }
}

// Printing. The s-expression form re-sugars the derived connectives; parsing
// expands them again, so printing and parsing are mutually inverse.

enum Sugar<'a> {
    False,
    True,
    Iff(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Not(&'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Atom(&'a Atom),
    Knows(Agent, &'a Formula),
    Everyone(&'a Group, &'a Formula),
    Common(&'a Group, &'a Formula),
}

fn classify(f: &Formula) -> Sugar<'_> {
    match f {
        Formula::False => Sugar::False,
        Formula::Atom(a) => Sugar::Atom(a),
        Formula::Knows(i, a) => Sugar::Knows(*i, a),
        Formula::Everyone(g, a) => Sugar::Everyone(g, a),
        Formula::Common(g, a) => Sugar::Common(g, a),
        Formula::Implies(a, b) => {
            if f.is_top() {
                Sugar::True
            } else if let Some((x, y)) = f.as_iff() {
                Sugar::Iff(x, y)
            } else if let Some((x, y)) = f.as_and() {
                Sugar::And(x, y)
            } else if let Some(x) = f.as_not() {
                Sugar::Not(x)
            } else if let Some((x, y)) = f.as_or().filter(|_| a.as_and().is_none()) {
                Sugar::Or(x, y)
            } else {
                Sugar::Implies(a, b)
            }
        }
    }
}

fn write_sexpr(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match classify(f) {
        Sugar::False => out.write_str("false"),
        Sugar::True => out.write_str("true"),
        Sugar::Atom(a) => {
            write!(out, "(atom {}", a.name)?;
            for x in a.args.iter() {
                write!(out, " {x}")?;
            }
            out.write_str(")")
        }
        Sugar::Knows(i, a) => {
            write!(out, "(K {i} ")?;
            write_sexpr(a, out)?;
            out.write_str(")")
        }
        Sugar::Everyone(g, a) => {
            write!(out, "(E {g} ")?;
            write_sexpr(a, out)?;
            out.write_str(")")
        }
        Sugar::Common(g, a) => {
            write!(out, "(C {g} ")?;
            write_sexpr(a, out)?;
            out.write_str(")")
        }
        Sugar::Not(a) => {
            out.write_str("(not ")?;
            write_sexpr(a, out)?;
            out.write_str(")")
        }
        Sugar::Implies(a, b) => write_binary("=>", a, b, out),
        Sugar::Iff(a, b) => write_binary("iff", a, b, out),
        Sugar::And(a, b) => {
            out.write_str("(and ")?;
            write_sexpr(a, out)?;
            let mut rest = b;
            while let Sugar::And(x, y) = classify(rest) {
                out.write_str(" ")?;
                write_sexpr(x, out)?;
                rest = y;
            }
            out.write_str(" ")?;
            write_sexpr(rest, out)?;
            out.write_str(")")
        }
        Sugar::Or(a, b) => {
            out.write_str("(or ")?;
            write_sexpr(a, out)?;
            let mut rest = b;
            while let Sugar::Or(x, y) = classify(rest) {
                out.write_str(" ")?;
                write_sexpr(x, out)?;
                rest = y;
            }
            out.write_str(" ")?;
            write_sexpr(rest, out)?;
            out.write_str(")")
        }
    }
}

fn write_binary(op: &str, a: &Formula, b: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(out, "({op} ")?;
    write_sexpr(a, out)?;
    out.write_str(" ")?;
    write_sexpr(b, out)?;
    out.write_str(")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sexpr(self, f)
    }
}

/// Deterministic s-expression text for `f`.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// Unicode infix view, see [`Formula::pretty`].
pub struct Pretty<'a> {
    f: &'a Formula,
    domain: Option<&'a Domain>,
}

// Binding strength: ⇒ and ⇔ bind weakest, then ∨, then ∧, then prefix operators.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;

impl Pretty<'_> {
    fn agent(&self, a: Agent, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.domain.and_then(|d| d.name(a)) {
            Some(n) => out.write_str(n),
            None => write!(out, "{a}"),
        }
    }

    fn group(&self, g: &Group, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str("{")?;
        for (k, a) in g.members().iter().enumerate() {
            if k > 0 {
                out.write_str(",")?;
            }
            self.agent(*a, out)?;
        }
        out.write_str("}")
    }

    fn go(&self, f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prec, right_assoc) = match classify(f) {
            Sugar::Implies(..) | Sugar::Iff(..) => (PREC_IMP, true),
            Sugar::Or(..) => (PREC_OR, true),
            Sugar::And(..) => (PREC_AND, true),
            _ => (PREC_PREFIX, false),
        };
        let paren = prec < ctx;
        if paren {
            out.write_str("(")?;
        }
        let bin = |out: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            let left = if right_assoc { prec + 1 } else { prec };
            self.go(a, left, out)?;
            write!(out, " {op} ")?;
            self.go(b, prec, out)
        };
        match classify(f) {
            Sugar::False => out.write_str("⊥")?,
            Sugar::True => out.write_str("⊤")?,
            Sugar::Atom(a) => {
                out.write_str(&a.name)?;
                if !a.args.is_empty() {
                    out.write_str("(")?;
                    for (k, x) in a.args.iter().enumerate() {
                        if k > 0 {
                            out.write_str(",")?;
                        }
                        self.agent(*x, out)?;
                    }
                    out.write_str(")")?;
                }
            }
            Sugar::Not(a) => {
                out.write_str("¬")?;
                self.go(a, PREC_PREFIX, out)?;
            }
            Sugar::Knows(i, a) => {
                out.write_str("K_")?;
                self.agent(i, out)?;
                out.write_str(" ")?;
                self.go(a, PREC_PREFIX, out)?;
            }
            Sugar::Everyone(g, a) => {
                out.write_str("E")?;
                self.group(g, out)?;
                out.write_str(" ")?;
                self.go(a, PREC_PREFIX, out)?;
            }
            Sugar::Common(g, a) => {
                out.write_str("C")?;
                self.group(g, out)?;
                out.write_str(" ")?;
                self.go(a, PREC_PREFIX, out)?;
            }
            Sugar::Implies(a, b) => bin(out, a, "⇒", b)?,
            Sugar::Iff(a, b) => bin(out, a, "⇔", b)?,
            Sugar::And(a, b) => bin(out, a, "∧", b)?,
            Sugar::Or(a, b) => bin(out, a, "∨", b)?,
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.go(self.f, 0, f)
    }
}
