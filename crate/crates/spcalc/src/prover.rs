//! Budgeted proof search over normal-shaped rewrite sequences, plus the
//! polynomial semantic oracle for the base system: a tree, read as a
//! Kripke model, satisfies exactly the consequences of its own formula.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::calculus::{check, Derivation, System};
use crate::embed::to_tree;
use crate::formula::{Formula, Label};
use crate::rules::{apply, enumerate_applicable, lift, RuleClass, RuleInstance, RuleKind};
use crate::tree::{ModalTree, Position};

/// Caps on the search: total rule applications along a branch, node count
/// of intermediate trees, and visited states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_steps: usize,
    pub max_nodes: usize,
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_steps: 12, max_nodes: 32, max_states: 200_000 }
    }
}

/// Outcome of a proof attempt. `Refuted` is only ever produced for the
/// base system, where the semantic oracle is decisive; richer systems
/// yield `Unknown` when the budget runs out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    Proved(Derivation),
    Refuted,
    Unknown(SearchDiagnostics),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub states_visited: usize,
    pub nodes_pruned: usize,
    pub depth_reached: usize,
    pub budget: Option<SearchBudget>,
}

/// Kripke satisfaction at the root of `t`: worlds are the nodes, an
/// `a`-edge relates a node to its `a`-labelled children, and an atom holds
/// where it occurs in the node's list.
pub fn models(t: &ModalTree, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Var(name) => t.atoms.iter().any(|a| a == name),
        Formula::And(l, r) => models(t, l) && models(t, r),
        Formula::Dia(label, body) => t
            .children
            .iter()
            .any(|(l, child)| l == label && models(child, body)),
    }
}

/// Decision procedure for base-system entailment: `phi` entails `psi`
/// exactly when the tree of `phi` satisfies `psi`.
pub fn entails_kplus(phi: &Formula, psi: &Formula) -> bool {
    models(&to_tree(phi), psi)
}

/// Constructive witness for a base-system entailment: steps rewriting `t`
/// to the tree of `goal`, defined whenever `models(t, goal)` holds.
pub fn kplus_witness(t: &ModalTree, goal: &Formula) -> Option<Vec<RuleInstance>> {
    if !models(t, goal) {
        return None;
    }
    Some(witness_steps(t, goal))
}

fn remove_children_except(t: &ModalTree, keep: Option<usize>) -> Vec<RuleInstance> {
    let mut steps = Vec::new();
    for k in (1..=t.children.len()).rev() {
        if Some(k) != keep {
            steps.push(RuleInstance::PiMinus { pos: Position::root(), child: k });
        }
    }
    steps
}

fn remove_atoms_except(len: usize, keep: Option<usize>) -> Vec<RuleInstance> {
    let mut steps = Vec::new();
    for k in (1..=len).rev() {
        if Some(k) != keep {
            steps.push(RuleInstance::RhoMinus { pos: Position::root(), atom: k });
        }
    }
    steps
}

fn witness_steps(t: &ModalTree, goal: &Formula) -> Vec<RuleInstance> {
    match goal {
        Formula::Top => {
            let mut steps = remove_children_except(t, None);
            steps.extend(remove_atoms_except(t.atoms.len(), None));
            steps
        }
        Formula::Var(name) => {
            let keep = t.atoms.iter().position(|a| a == name).expect("models checked") + 1;
            let mut steps = remove_children_except(t, None);
            steps.extend(remove_atoms_except(t.atoms.len(), Some(keep)));
            steps
        }
        Formula::And(l, r) => {
            let left_tree = to_tree(l);
            let mut steps = crate::calculus::sums::duplicate(t);
            steps.extend(crate::calculus::sums::in_left(&witness_steps(t, l)));
            steps.extend(crate::calculus::sums::in_right(&left_tree, &witness_steps(t, r)));
            steps
        }
        Formula::Dia(label, body) => {
            let pick = t
                .children
                .iter()
                .position(|(l, child)| l == label && models(child, body))
                .expect("models checked");
            let mut steps = remove_children_except(t, Some(pick + 1));
            steps.extend(remove_atoms_except(t.atoms.len(), None));
            let sub = &t.children[pick].1;
            steps.extend(
                witness_steps(sub, body)
                    .iter()
                    .map(|r| lift(r, &Position(vec![1]))),
            );
            steps
        }
    }
}

/// Expansion order during search: once a step of a later block has been
/// taken, earlier blocks are closed. This preserves completeness because
/// every reachable endpoint is reachable by a normal sequence.
fn class_rank(class: RuleClass) -> usize {
    RuleClass::NORMAL_ORDER
        .iter()
        .position(|c| *c == class)
        .expect("all classes ordered")
}

struct Searcher<'a> {
    sys: &'a System,
    goal: ModalTree,
    goal_labels: Vec<Label>,
    budget: SearchBudget,
    visited: HashMap<(ModalTree, usize), usize>,
    diagnostics: SearchDiagnostics,
}

impl<'a> Searcher<'a> {
    fn candidates(&self, tree: &ModalTree, min_rank: usize) -> Vec<(usize, RuleInstance)> {
        let kinds: Vec<RuleKind> = self
            .sys
            .allowed_kinds()
            .into_iter()
            .filter(|k| class_rank(k.class()) >= min_rank)
            .collect();
        enumerate_applicable(tree, &kinds)
            .into_iter()
            .filter(|r| match r {
                // Foreign labels never survive into the goal tree.
                RuleInstance::M { new_label, .. } => {
                    *new_label == 0 || self.goal_labels.contains(new_label)
                }
                _ => true,
            })
            .map(|r| (class_rank(r.class()), r))
            .collect()
    }

    fn dfs(
        &mut self,
        tree: &ModalTree,
        min_rank: usize,
        depth_left: usize,
        steps: &mut Vec<RuleInstance>,
    ) -> Option<Vec<RuleInstance>> {
        if *tree == self.goal {
            return Some(steps.clone());
        }
        if depth_left == 0 {
            return None;
        }
        if self.visited.len() >= self.budget.max_states {
            return None;
        }
        match self.visited.get(&(tree.clone(), min_rank)) {
            Some(&seen) if seen >= depth_left => return None,
            _ => {
                self.visited.insert((tree.clone(), min_rank), depth_left);
            }
        }
        self.diagnostics.states_visited = self.visited.len();
        for (rank, rule) in self.candidates(tree, min_rank) {
            let next = apply(tree, &rule).expect("enumerated instance applies");
            if next.node_count() > self.budget.max_nodes {
                self.diagnostics.nodes_pruned += 1;
                continue;
            }
            steps.push(rule);
            if let Some(found) = self.dfs(&next, rank, depth_left - 1, steps) {
                return Some(found);
            }
            steps.pop();
        }
        None
    }
}

/// Search for a derivation from the tree of `phi` to the tree of `psi`.
///
/// The base-system oracle runs first: a positive answer yields a
/// constructed witness (valid in every system), and a negative answer
/// under the base system is a refutation. Otherwise iterative deepening
/// explores rule applications in normal block order.
pub fn prove(phi: &Formula, psi: &Formula, sys: &System, budget: &SearchBudget) -> ProofResult {
    let start = to_tree(phi);
    let goal = to_tree(psi);

    if let Some(steps) = kplus_witness(&start, psi) {
        let d = Derivation::new(start, steps);
        debug_assert!(check(&d, sys).is_ok());
        return ProofResult::Proved(d);
    }
    if *sys == System::K_PLUS {
        return ProofResult::Refuted;
    }

    let mut goal_labels: Vec<Label> = Vec::new();
    collect_labels(&goal, &mut goal_labels);

    let mut diagnostics = SearchDiagnostics { budget: Some(*budget), ..Default::default() };
    for depth in 0..=budget.max_steps {
        let mut searcher = Searcher {
            sys,
            goal: goal.clone(),
            goal_labels: goal_labels.clone(),
            budget: *budget,
            visited: HashMap::new(),
            diagnostics: SearchDiagnostics::default(),
        };
        let mut steps = Vec::new();
        if let Some(found) = searcher.dfs(&start, 0, depth, &mut steps) {
            let d = Derivation::new(start, found);
            debug_assert_eq!(check(&d, sys).ok(), Some(goal));
            return ProofResult::Proved(d);
        }
        diagnostics.states_visited += searcher.diagnostics.states_visited;
        diagnostics.nodes_pruned += searcher.diagnostics.nodes_pruned;
        diagnostics.depth_reached = depth;
        if searcher.visited.len() >= budget.max_states {
            break;
        }
    }
    ProofResult::Unknown(diagnostics)
}

fn collect_labels(t: &ModalTree, out: &mut Vec<Label>) {
    for (label, child) in &t.children {
        if !out.contains(label) {
            out.push(*label);
        }
        collect_labels(child, out);
    }
}

/// Like [`prove`], but expanding each search level with parallel workers.
/// Sound but not order-deterministic: with several shortest witnesses any
/// of them may be returned.
#[cfg(feature = "parallel")]
pub fn prove_parallel(
    phi: &Formula,
    psi: &Formula,
    sys: &System,
    budget: &SearchBudget,
) -> ProofResult {
    use rayon::prelude::*;

    let start = to_tree(phi);
    let goal = to_tree(psi);
    if let Some(steps) = kplus_witness(&start, psi) {
        return ProofResult::Proved(Derivation::new(start, steps));
    }
    if *sys == System::K_PLUS {
        return ProofResult::Refuted;
    }

    let mut goal_labels: Vec<Label> = Vec::new();
    collect_labels(&goal, &mut goal_labels);
    let keep = |r: &RuleInstance| match r {
        RuleInstance::M { new_label, .. } => {
            *new_label == 0 || goal_labels.contains(new_label)
        }
        _ => true,
    };

    // Arena of (tree, open block rank, parent, rule); frontier by level.
    let mut arena: Vec<(ModalTree, usize, usize, Option<RuleInstance>)> =
        vec![(start.clone(), 0, 0, None)];
    let mut visited: HashMap<(ModalTree, usize), ()> = HashMap::new();
    visited.insert((start.clone(), 0), ());
    let mut frontier = vec![0usize];
    let mut diagnostics = SearchDiagnostics { budget: Some(*budget), ..Default::default() };

    for depth in 0..budget.max_steps {
        diagnostics.depth_reached = depth;
        let expansions: Vec<(usize, RuleInstance, ModalTree, usize)> = frontier
            .par_iter()
            .flat_map_iter(|&idx| {
                let (tree, min_rank) = (&arena[idx].0, arena[idx].1);
                let kinds: Vec<RuleKind> = sys
                    .allowed_kinds()
                    .into_iter()
                    .filter(|k| class_rank(k.class()) >= min_rank)
                    .collect();
                enumerate_applicable(tree, &kinds)
                    .into_iter()
                    .filter(keep)
                    .map(move |rule| {
                        let succ = apply(tree, &rule).expect("enumerated instance applies");
                        let rank = class_rank(rule.class());
                        (idx, rule, succ, rank)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();

        let mut next = Vec::new();
        for (parent, rule, succ, rank) in expansions {
            if succ.node_count() > budget.max_nodes {
                diagnostics.nodes_pruned += 1;
                continue;
            }
            if succ == goal {
                let mut steps = vec![rule];
                let mut cur = parent;
                while let Some(r) = arena[cur].3.clone() {
                    steps.push(r);
                    cur = arena[cur].2;
                }
                steps.reverse();
                let d = Derivation::new(start, steps);
                debug_assert!(check(&d, sys).is_ok());
                return ProofResult::Proved(d);
            }
            if visited.len() >= budget.max_states {
                diagnostics.states_visited = visited.len();
                return ProofResult::Unknown(diagnostics);
            }
            if visited.insert((succ.clone(), rank), ()).is_none() {
                arena.push((succ, rank, parent, Some(rule)));
                next.push(arena.len() - 1);
            }
        }
        diagnostics.states_visited = visited.len();
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    ProofResult::Unknown(diagnostics)
}

/// Mutual derivability under the same budget in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivResult {
    Equivalent(Derivation, Derivation),
    NotEquivalent,
    Unknown,
}

pub fn equiv(phi: &Formula, psi: &Formula, sys: &System, budget: &SearchBudget) -> EquivResult {
    let forward = prove(phi, psi, sys, budget);
    let backward = prove(psi, phi, sys, budget);
    match (forward, backward) {
        (ProofResult::Proved(f), ProofResult::Proved(b)) => EquivResult::Equivalent(f, b),
        (ProofResult::Refuted, _) | (_, ProofResult::Refuted) => EquivResult::NotEquivalent,
        _ => EquivResult::Unknown,
    }
}

/// Batch oracle sweep, parallel when the `parallel` feature is enabled.
pub fn entails_kplus_batch(pairs: &[(Formula, Formula)]) -> Vec<bool> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.par_iter().map(|(a, b)| entails_kplus(a, b)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        entails_kplus_batch_seq(pairs)
    }
}

/// Sequential batch oracle sweep; kept for comparison benches.
pub fn entails_kplus_batch_seq(pairs: &[(Formula, Formula)]) -> Vec<bool> {
    pairs.iter().map(|(a, b)| entails_kplus(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn models_examples() {
        let f = p("<0> p");
        assert!(models(&to_tree(&f), &f));
        assert!(!models(&to_tree(&p("p")), &p("<0> p")));
        assert!(models(&to_tree(&p("<1> p & <0> q")), &p("<1> p")));
    }

    #[test]
    fn oracle_examples() {
        assert!(entails_kplus(&p("p & q"), &p("p")));
        assert!(!entails_kplus(&p("p"), &p("<0> p")));
        assert!(!entails_kplus(&p("<1> p"), &p("<0> p")));
    }

    #[test]
    fn witness_replays_to_goal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let shape = crate::corpus::TreeShape::default();
        let mut hits = 0;
        for _ in 0..500 {
            let phi = crate::corpus::random_formula(&mut rng, 2, &shape);
            let psi = crate::corpus::random_formula(&mut rng, 2, &shape);
            if !entails_kplus(&phi, &psi) {
                continue;
            }
            hits += 1;
            let start = to_tree(&phi);
            let steps = kplus_witness(&start, &psi).unwrap();
            let d = Derivation::new(start, steps);
            assert_eq!(check(&d, &System::K_PLUS).unwrap(), to_tree(&psi));
        }
        assert!(hits > 10, "corpus produced too few entailments ({hits})");
    }

    #[test]
    fn named_sequents() {
        let budget = SearchBudget::default();

        match prove(&p("<1> p & <0> q"), &p("<1>(p & <0> q)"), &System::RC, &budget) {
            ProofResult::Proved(d) => {
                assert_eq!(d.steps.iter().filter(|s| s.kind() == RuleKind::J).count(), 1);
            }
            other => panic!("expected a proof, got {other:?}"),
        }

        assert!(matches!(
            prove(&p("<0><0> p"), &p("<0> p"), &System::K4_PLUS, &budget),
            ProofResult::Proved(_)
        ));

        assert_eq!(
            prove(&p("<1> p"), &p("<0> p"), &System::K_PLUS, &budget),
            ProofResult::Refuted
        );
        let m_only = System { four: false, m: true, j: false };
        assert!(matches!(
            prove(&p("<1> p"), &p("<0> p"), &m_only, &budget),
            ProofResult::Proved(_)
        ));

        assert_eq!(prove(&p("p"), &p("<0> p"), &System::K_PLUS, &budget), ProofResult::Refuted);
    }

    #[test]
    fn axiom_self_tests() {
        let tight = SearchBudget { max_steps: 3, ..Default::default() };
        assert!(matches!(
            prove(&p("<2><2> p"), &p("<2> p"), &System::K4_PLUS, &tight),
            ProofResult::Proved(_)
        ));
        let m_only = System { four: false, m: true, j: false };
        assert!(matches!(
            prove(&p("<2> T"), &p("<0> T"), &m_only, &tight),
            ProofResult::Proved(_)
        ));
        let j_only = System { four: false, m: false, j: true };
        assert!(matches!(
            prove(&p("<1> p & <0> q"), &p("<1>(p & <0> q)"), &j_only, &tight),
            ProofResult::Proved(_)
        ));
    }

    #[test]
    fn equiv_examples() {
        let budget = SearchBudget::default();
        let lhs = crate::formula::big_and([p("p"), p("q")]);
        let rhs = crate::formula::big_and([p("q"), p("p")]);
        assert!(matches!(
            equiv(&lhs, &rhs, &System::K_PLUS, &budget),
            EquivResult::Equivalent(..)
        ));
        assert_eq!(equiv(&p("p"), &p("q"), &System::K_PLUS, &budget), EquivResult::NotEquivalent);
    }

    #[test]
    fn monotonic_across_systems() {
        let budget = SearchBudget::default();
        if let ProofResult::Proved(d) =
            prove(&p("<0><0> p"), &p("<0> p"), &System::K4_PLUS, &budget)
        {
            assert!(check(&d, &System::RC).is_ok());
        } else {
            panic!("expected proof");
        }
    }
}
