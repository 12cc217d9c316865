//! Trees whose nodes carry persistent marker flags. Rewriting a marked
//! tree moves the markers with the nodes they sit on: duplication copies
//! them, deletion drops them, relabeling and permutation keep them. The
//! reordering of a J step past duplications is driven by counting marker
//! occurrences, so markers must be invisible to the rule semantics.

use crate::error::RuleError;
use crate::formula::Label;
use crate::rules::RuleInstance;
use crate::tree::{ModalTree, Position};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MarkSet(u8);

impl MarkSet {
    pub const INTERNAL: MarkSet = MarkSet(1);
    pub const UPPER: MarkSet = MarkSet(2);
    pub const LOWER: MarkSet = MarkSet(4);

    pub fn insert(&mut self, other: MarkSet) {
        self.0 |= other.0;
    }

    pub fn contains(&self, other: MarkSet) -> bool {
        self.0 & other.0 == other.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    pub atoms: Vec<String>,
    pub marks: MarkSet,
    pub children: Vec<(Label, MarkedTree)>,
}

impl MarkedTree {
    pub fn from_tree(t: &ModalTree) -> MarkedTree {
        MarkedTree {
            atoms: t.atoms.clone(),
            marks: MarkSet::default(),
            children: t
                .children
                .iter()
                .map(|(l, c)| (*l, MarkedTree::from_tree(c)))
                .collect(),
        }
    }

    pub fn erase(&self) -> ModalTree {
        ModalTree {
            atoms: self.atoms.clone(),
            children: self.children.iter().map(|(l, c)| (*l, c.erase())).collect(),
        }
    }

    pub fn mark_at(&mut self, pos: &Position, mark: MarkSet) {
        match pos.split_first() {
            None => self.marks.insert(mark),
            Some((i, rest)) => self.children[i - 1].1.mark_at(&rest, mark),
        }
    }

    /// Number of nodes carrying `mark`.
    pub fn count(&self, mark: MarkSet) -> usize {
        usize::from(self.marks.contains(mark))
            + self.children.iter().map(|(_, c)| c.count(mark)).sum::<usize>()
    }

    fn node_mut(&mut self, pos: &Position) -> &mut MarkedTree {
        match pos.split_first() {
            None => self,
            Some((i, rest)) => self.children[i - 1].1.node_mut(&rest),
        }
    }
}

/// Mirror of the plain [`crate::rules::apply`] on marked trees. Erasing
/// the markers commutes with application.
pub fn apply_marked(tree: &MarkedTree, rule: &RuleInstance) -> Result<MarkedTree, RuleError> {
    // Validate against the erased tree so every side condition is shared
    // with the unmarked semantics.
    crate::rules::apply(&tree.erase(), rule)?;
    let mut out = tree.clone();
    let node = out.node_mut(rule.pos());
    match rule {
        RuleInstance::RhoPlus { atom, .. } => {
            let a = node.atoms[*atom - 1].clone();
            node.atoms.insert(0, a);
        }
        RuleInstance::RhoMinus { atom, .. } => {
            node.atoms.remove(*atom - 1);
        }
        RuleInstance::Sigma { left, right, .. } => {
            node.children.swap(*left - 1, *right - 1);
        }
        RuleInstance::PiPlus { child, .. } => {
            let dup = node.children[*child - 1].clone();
            node.children.insert(0, dup);
        }
        RuleInstance::PiMinus { child, .. } => {
            node.children.remove(*child - 1);
        }
        RuleInstance::Four { child, .. } => {
            let (label, inner) = node.children[*child - 1].clone();
            // The collapsed node's markers vanish with it.
            node.children[*child - 1] = (label, inner.children[0].1.clone());
        }
        RuleInstance::M { child, new_label, .. } => {
            node.children[*child - 1].0 = *new_label;
        }
        RuleInstance::J { target, source, .. } => {
            let (beta, moved) = node.children[*source - 1].clone();
            node.children[*target - 1].1.children.push((beta, moved));
            node.children.remove(*source - 1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_derivation, random_tree, TreeShape};
    use crate::calculus::System;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn erase_commutes_with_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let start = random_tree(&mut rng, &TreeShape::default());
            let d = random_derivation(&mut rng, start.clone(), &System::RC, 5, 24);
            let mut marked = MarkedTree::from_tree(&start);
            let mut plain = start;
            for step in &d.steps {
                marked = apply_marked(&marked, step).unwrap();
                plain = crate::rules::apply(&plain, step).unwrap();
                assert_eq!(marked.erase(), plain);
            }
        }
    }

    #[test]
    fn duplication_copies_marks() {
        let t = ModalTree::new(
            Vec::new(),
            vec![(0, ModalTree::leaf(vec!["p".into()]))],
        );
        let mut m = MarkedTree::from_tree(&t);
        m.mark_at(&Position(vec![1]), MarkSet::UPPER);
        let dup = apply_marked(
            &m,
            &RuleInstance::PiPlus { pos: Position::root(), child: 1 },
        )
        .unwrap();
        assert_eq!(dup.count(MarkSet::UPPER), 2);

        let removed = apply_marked(
            &dup,
            &RuleInstance::PiMinus { pos: Position::root(), child: 1 },
        )
        .unwrap();
        assert_eq!(removed.count(MarkSet::UPPER), 1);
    }
}
