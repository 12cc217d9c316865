//! Permutation-block compression: two trees related by child permutations
//! are connected by a block of at most `node_count - 1` swaps, found by
//! matching children up to permutation equivalence and decomposing the
//! root arrangement into transpositions.

use crate::error::NormalizeError;
use crate::rules::RuleInstance;
use crate::tree::{ModalTree, Position};

/// Representative of the permutation-equivalence class: children sorted
/// recursively. Atom lists are left untouched, their order is significant.
pub fn canonical(t: &ModalTree) -> ModalTree {
    let mut children: Vec<(u64, ModalTree)> = t
        .children
        .iter()
        .map(|(l, c)| (*l, canonical(c)))
        .collect();
    children.sort();
    ModalTree { atoms: t.atoms.clone(), children }
}

pub fn sigma_equivalent(a: &ModalTree, b: &ModalTree) -> bool {
    canonical(a) == canonical(b)
}

/// A block of swaps taking `from` to `to`, of length at most
/// `from.node_count() - 1`. Fails when the trees are not permutation
/// equivalent.
pub fn compress_sigma(
    from: &ModalTree,
    to: &ModalTree,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let mut out = Vec::new();
    compress_into(from, to, &Position::root(), &mut out)?;
    Ok(out)
}

fn compress_into(
    from: &ModalTree,
    to: &ModalTree,
    base: &Position,
    out: &mut Vec<RuleInstance>,
) -> Result<(), NormalizeError> {
    if from.atoms != to.atoms || from.children.len() != to.children.len() {
        return Err(NormalizeError::NotSigmaEquivalent);
    }
    let m = from.children.len();
    let from_canon: Vec<ModalTree> = from.children.iter().map(|(_, c)| canonical(c)).collect();

    // perm[target slot] = source child index.
    let mut used = vec![false; m];
    let mut perm = vec![0usize; m];
    for (ti, (tl, tc)) in to.children.iter().enumerate() {
        let tcanon = canonical(tc);
        let mut found = None;
        for (si, (sl, _)) in from.children.iter().enumerate() {
            if !used[si] && sl == tl && from_canon[si] == tcanon {
                found = Some(si);
                break;
            }
        }
        match found {
            Some(si) => {
                used[si] = true;
                perm[ti] = si;
            }
            None => return Err(NormalizeError::NotSigmaEquivalent),
        }
    }

    // Fix each subtree in place (source numbering), then arrange the root.
    for (ti, &si) in perm.iter().enumerate() {
        compress_into(&from.children[si].1, &to.children[ti].1, &base.push(si + 1), out)?;
    }
    let mut slots: Vec<usize> = (0..m).collect();
    for ti in 0..m {
        let at = slots.iter().position(|&x| x == perm[ti]).expect("permutation");
        if at != ti {
            out.push(RuleInstance::Sigma { pos: base.clone(), left: ti + 1, right: at + 1 });
            slots.swap(ti, at);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::replay;
    use crate::corpus::{random_tree, TreeShape};
    use crate::rules::{apply, enumerate_applicable, RuleKind};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn compress_random_sigma_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let start = random_tree(&mut rng, &TreeShape::default());
            let mut cur = start.clone();
            for _ in 0..6 {
                let sigmas = enumerate_applicable(&cur, &[RuleKind::Sigma]);
                if let Some(s) = sigmas.choose(&mut rng) {
                    cur = apply(&cur, s).unwrap();
                }
            }
            let steps = compress_sigma(&start, &cur).unwrap();
            assert!(steps.len() <= start.node_count().saturating_sub(1));
            assert_eq!(replay(&start, &steps).unwrap(), cur);
            assert!(steps.iter().all(|s| s.kind() == RuleKind::Sigma));
        }
    }

    #[test]
    fn inequivalent_trees_are_rejected() {
        let a = ModalTree::leaf(vec!["p".into()]);
        let b = ModalTree::leaf(vec!["q".into()]);
        assert!(compress_sigma(&a, &b).is_err());
        assert!(!sigma_equivalent(&a, &b));
    }

    #[test]
    fn duplicate_children_match() {
        let leaf = ModalTree::empty();
        let x = ModalTree::new(vec![], vec![(0, leaf.clone()), (0, leaf.clone()), (1, leaf.clone())]);
        let y = ModalTree::new(vec![], vec![(1, leaf.clone()), (0, leaf.clone()), (0, leaf)]);
        let steps = compress_sigma(&x, &y).unwrap();
        assert_eq!(replay(&x, &steps).unwrap(), y);
    }
}
