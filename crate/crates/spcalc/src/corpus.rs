//! Seedable generators for trees, formulas, rule applications and
//! derivations. Used by the test suites and the benches; kept in the
//! library so both can share one corpus definition.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{Derivation, System};
use crate::formula::{Formula, Label};
use crate::rules::{apply, enumerate_applicable, RuleInstance, RuleKind};
use crate::tree::ModalTree;

/// Shape limits for random trees.
#[derive(Debug, Clone, Copy)]
pub struct TreeShape {
    pub max_height: usize,
    pub max_children: usize,
    pub max_atoms: usize,
    pub max_label: Label,
    pub n_vars: usize,
}

impl Default for TreeShape {
    fn default() -> Self {
        TreeShape { max_height: 3, max_children: 3, max_atoms: 2, max_label: 2, n_vars: 3 }
    }
}

pub const VAR_NAMES: [&str; 6] = ["p", "q", "r", "s", "u", "v"];

pub fn random_tree<R: Rng>(rng: &mut R, shape: &TreeShape) -> ModalTree {
    let n_atoms = rng.gen_range(0..=shape.max_atoms);
    let atoms = (0..n_atoms)
        .map(|_| VAR_NAMES[rng.gen_range(0..shape.n_vars.min(VAR_NAMES.len()))].to_string())
        .collect();
    let n_children = if shape.max_height == 0 {
        0
    } else {
        rng.gen_range(0..=shape.max_children)
    };
    let children = (0..n_children)
        .map(|_| {
            let label = rng.gen_range(0..=shape.max_label);
            let sub = TreeShape { max_height: shape.max_height - 1, ..*shape };
            (label, random_tree(rng, &sub))
        })
        .collect();
    ModalTree { atoms, children }
}

/// Random tree with at most `max_nodes` nodes (retries with shrinking shape).
pub fn random_tree_with_nodes<R: Rng>(
    rng: &mut R,
    shape: &TreeShape,
    max_nodes: usize,
) -> ModalTree {
    loop {
        let t = random_tree(rng, shape);
        if t.node_count() <= max_nodes {
            return t;
        }
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, shape: &TreeShape) -> Formula {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..5) };
    match choice {
        0 => Formula::Top,
        1 | 2 => Formula::var(VAR_NAMES[rng.gen_range(0..shape.n_vars.min(VAR_NAMES.len()))]),
        3 => Formula::dia(
            rng.gen_range(0..=shape.max_label),
            random_formula(rng, depth - 1, shape),
        ),
        _ => Formula::and(
            random_formula(rng, depth - 1, shape),
            random_formula(rng, depth - 1, shape),
        ),
    }
}

/// A uniformly chosen applicable instance of the allowed kinds, if any.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    tree: &ModalTree,
    kinds: &[RuleKind],
) -> Option<RuleInstance> {
    let all = enumerate_applicable(tree, kinds);
    all.choose(rng).cloned()
}

/// Random derivation of up to `max_steps` applicable steps in `sys`.
/// Trees whose node count would exceed `max_nodes` are avoided by
/// filtering duplication steps when near the cap.
pub fn random_derivation<R: Rng>(
    rng: &mut R,
    start: ModalTree,
    sys: &System,
    max_steps: usize,
    max_nodes: usize,
) -> Derivation {
    let kinds = sys.allowed_kinds();
    let mut steps = Vec::new();
    let mut tree = start.clone();
    for _ in 0..max_steps {
        let mut candidates = enumerate_applicable(&tree, &kinds);
        if tree.node_count() >= max_nodes {
            candidates.retain(|r| r.kind() != RuleKind::PiPlus);
        }
        let Some(step) = candidates.choose(rng).cloned() else {
            break;
        };
        tree = apply(&tree, &step).expect("enumerated instance applies");
        steps.push(step);
    }
    Derivation::new(start, steps)
}

/// Random sequence of base-system steps from `start` (kinds restricted to
/// the five base rules), with the same node cap as `random_derivation`.
pub fn random_base_sequence<R: Rng>(
    rng: &mut R,
    start: ModalTree,
    max_steps: usize,
    max_nodes: usize,
) -> Derivation {
    random_derivation(rng, start, &System::K_PLUS, max_steps, max_nodes)
}

/// A random `(tree, instance)` pair where the instance applies to the tree.
pub fn random_applicable_pair<R: Rng>(
    rng: &mut R,
    shape: &TreeShape,
    kinds: &[RuleKind],
) -> (ModalTree, RuleInstance) {
    loop {
        let t = random_tree(rng, shape);
        if let Some(r) = random_instance(rng, &t, kinds) {
            return (t, r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivations_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let start = random_tree(&mut rng, &TreeShape::default());
            let d = random_derivation(&mut rng, start, &System::RC, 6, 24);
            assert!(crate::calculus::check(&d, &System::RC).is_ok());
        }
    }
}
