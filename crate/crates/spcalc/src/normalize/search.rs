//! Bounded search for a normal sequence between two given trees, used as
//! a fallback when the constructive reordering is blocked. (An atom
//! elimination that manufactures the empty inner node required by a later
//! transitivity step cannot be pushed behind it; some such derivations
//! still have normal equivalents reaching the same endpoint by another
//! route, which this search finds at small scale.)

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::calculus::System;
use crate::formula::Label;
use crate::rules::{apply, enumerate_applicable, RuleClass, RuleInstance, RuleKind};
use crate::tree::ModalTree;

pub struct SearchCaps {
    pub max_steps: usize,
    pub max_nodes: usize,
    /// Cap on node count plus total atom occurrences; keeps atom
    /// duplication from flooding the state space.
    pub max_size: usize,
    pub max_states: usize,
}

fn size(t: &ModalTree) -> usize {
    t.node_count() + atom_occurrences(t)
}

fn atom_occurrences(t: &ModalTree) -> usize {
    t.atoms.len() + t.children.iter().map(|(_, c)| atom_occurrences(c)).sum::<usize>()
}

fn class_rank(class: RuleClass) -> usize {
    RuleClass::NORMAL_ORDER
        .iter()
        .position(|c| *c == class)
        .expect("ordered")
}

fn collect_labels(t: &ModalTree, out: &mut Vec<Label>) {
    for (label, child) in &t.children {
        if !out.contains(label) {
            out.push(*label);
        }
        collect_labels(child, out);
    }
}

/// Breadth-first search over normal-ordered rule applications from
/// `start` to `goal`; a state is a tree plus the lowest block still open.
pub fn find_normal_sequence(
    start: &ModalTree,
    goal: &ModalTree,
    sys: &System,
    caps: &SearchCaps,
) -> Option<Vec<RuleInstance>> {
    if start == goal {
        return Some(Vec::new());
    }
    let mut labels = vec![0];
    collect_labels(start, &mut labels);
    collect_labels(goal, &mut labels);

    // Node arena: (tree, min rank, parent index, rule that led here).
    let mut arena: Vec<(ModalTree, usize, usize, Option<RuleInstance>)> =
        vec![(start.clone(), 0, 0, None)];
    let mut visited: HashMap<(ModalTree, usize), ()> = HashMap::new();
    visited.insert((start.clone(), 0), ());

    let mut frontier = vec![0usize];
    for _depth in 0..caps.max_steps {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (tree, min_rank) = (arena[idx].0.clone(), arena[idx].1);
            let kinds: Vec<RuleKind> = sys
                .allowed_kinds()
                .into_iter()
                .filter(|k| class_rank(k.class()) >= min_rank)
                .collect();
            for rule in enumerate_applicable(&tree, &kinds) {
                if let RuleInstance::M { new_label, .. } = &rule {
                    if !labels.contains(new_label) {
                        continue;
                    }
                }
                let succ = apply(&tree, &rule).expect("enumerated instance applies");
                if succ.node_count() > caps.max_nodes || size(&succ) > caps.max_size {
                    continue;
                }
                let rank = class_rank(rule.class());
                if succ == *goal {
                    let mut steps = vec![rule];
                    let mut cur = idx;
                    while let Some(r) = arena[cur].3.clone() {
                        steps.push(r);
                        cur = arena[cur].2;
                    }
                    steps.reverse();
                    return Some(steps);
                }
                match visited.entry((succ.clone(), rank)) {
                    Entry::Occupied(_) => continue,
                    Entry::Vacant(v) => {
                        v.insert(());
                    }
                }
                arena.push((succ, rank, idx, Some(rule)));
                next.push(arena.len() - 1);
                if visited.len() >= caps.max_states {
                    return None;
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}
