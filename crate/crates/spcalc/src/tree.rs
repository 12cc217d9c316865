//! Modal trees: finite trees whose nodes carry ordered lists of atoms and
//! whose edges carry natural-number labels, together with the position,
//! subtree and replacement algebra the rewrite rules are built on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::formula::Label;

/// A node address: a string of 1-based child indices, empty for the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(index: usize) -> Self {
        Position(vec![index])
    }

    /// `self` followed by `rest`.
    pub fn join(&self, rest: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Position(v)
    }

    pub fn push(&self, index: usize) -> Position {
        let mut v = self.0.clone();
        v.push(index);
        Position(v)
    }

    pub fn split_first(&self) -> Option<(usize, Position)> {
        self.0.split_first().map(|(h, t)| (*h, Position(t.to_vec())))
    }

    pub fn starts_with(&self, prefix: &Position) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// The remainder of `self` after `prefix`, when `prefix` leads to it.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.starts_with(prefix)
            .then(|| Position(self.0[prefix.0.len()..].to_vec()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse the textual form: `e` for the root, else dot-separated indices.
    pub fn parse(text: &str) -> Option<Position> {
        if text == "e" {
            return Some(Position::root());
        }
        let mut v = Vec::new();
        for part in text.split('.') {
            let n: usize = part.parse().ok()?;
            if n == 0 {
                return None;
            }
            v.push(n);
        }
        Some(Position(v))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A modal tree: an ordered atom list together with an ordered list of
/// labelled children. Duplicates are significant in both lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModalTree {
    pub atoms: Vec<String>,
    pub children: Vec<(Label, ModalTree)>,
}

impl ModalTree {
    pub fn new(atoms: Vec<String>, children: Vec<(Label, ModalTree)>) -> Self {
        ModalTree { atoms, children }
    }

    /// The single-node tree with no atoms.
    pub fn empty() -> Self {
        ModalTree::default()
    }

    pub fn leaf(atoms: Vec<String>) -> Self {
        ModalTree { atoms, children: Vec::new() }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Maximum child count over all nodes, at least 1.
    pub fn width(&self) -> usize {
        if self.children.is_empty() {
            return 1;
        }
        self.children
            .iter()
            .map(|(_, c)| c.width())
            .max()
            .unwrap()
            .max(self.children.len())
    }

    /// Length of the longest root-to-leaf path, 0 for a leaf.
    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|(_, c)| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.node_count()).sum::<usize>()
    }

    /// Concatenate roots and child lists.
    pub fn sum(&self, other: &ModalTree) -> ModalTree {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut children = self.children.clone();
        children.extend_from_slice(&other.children);
        ModalTree { atoms, children }
    }

    /// All positions in depth-first, left-to-right order (the root first).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![(Position::root(), self)];
        while let Some((pos, node)) = stack.pop() {
            out.push(pos.clone());
            for (i, (_, child)) in node.children.iter().enumerate().rev() {
                stack.push((pos.push(i + 1), child));
            }
        }
        out
    }

    pub fn has_position(&self, pos: &Position) -> bool {
        self.subtree(pos).is_ok()
    }

    /// The subtree rooted at `pos`.
    pub fn subtree(&self, pos: &Position) -> Result<&ModalTree, RuleError> {
        let mut node = self;
        for (depth, &i) in pos.0.iter().enumerate() {
            if i == 0 || i > node.children.len() {
                return Err(RuleError::InvalidPosition(Position(pos.0[..=depth].to_vec())));
            }
            node = &node.children[i - 1].1;
        }
        Ok(node)
    }

    /// Replace the subtree at `pos` by `replacement`; edge labels on the
    /// path are untouched.
    pub fn replace(&self, pos: &Position, replacement: ModalTree) -> Result<ModalTree, RuleError> {
        match pos.split_first() {
            None => Ok(replacement),
            Some((i, rest)) => {
                if i == 0 || i > self.children.len() {
                    return Err(RuleError::InvalidPosition(pos.clone()));
                }
                let mut out = self.clone();
                let (_, child) = &self.children[i - 1];
                out.children[i - 1].1 = child.replace(&rest, replacement)?;
                Ok(out)
            }
        }
    }
}

/// Sum of a list of trees; the empty list yields the empty tree.
pub fn big_sum<'a, I>(trees: I) -> ModalTree
where
    I: IntoIterator<Item = &'a ModalTree>,
{
    trees
        .into_iter()
        .fold(ModalTree::empty(), |acc, t| acc.sum(t))
}

impl fmt::Display for ModalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<[{}];[", self.atoms.join(","))?;
        for (i, (label, child)) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({label},{child})")?;
        }
        write!(f, "]>")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(atoms: &[&str]) -> ModalTree {
        ModalTree::leaf(atoms.iter().map(|s| s.to_string()).collect())
    }

    fn node(children: Vec<(Label, ModalTree)>) -> ModalTree {
        ModalTree::new(Vec::new(), children)
    }

    #[test]
    fn metrics_base_cases() {
        assert_eq!(leaf(&["p"]).width(), 1);
        assert_eq!(leaf(&["p"]).height(), 0);
        assert_eq!(leaf(&[]).node_count(), 1);
    }

    #[test]
    fn metrics_examples() {
        let two = node(vec![(0, leaf(&[])), (1, leaf(&[]))]);
        assert_eq!(two.width(), 2);
        assert_eq!(two.node_count(), 3);

        let inner = node(vec![(0, leaf(&[])), (0, leaf(&[])), (0, leaf(&[]))]);
        assert_eq!(node(vec![(0, inner)]).width(), 3);

        let deep = node(vec![(0, leaf(&[])), (1, node(vec![(2, leaf(&[]))]))]);
        assert_eq!(deep.height(), 2);

        let chain = node(vec![(0, node(vec![(0, node(vec![(0, leaf(&[]))]))]))]);
        assert_eq!(chain.node_count(), 4);
    }

    #[test]
    fn sum_concatenates() {
        assert_eq!(leaf(&["p"]).sum(&leaf(&["q"])), leaf(&["p", "q"]));
        let a = node(vec![(0, leaf(&["a"]))]);
        let b = node(vec![(1, leaf(&["b"]))]);
        assert_eq!(
            a.sum(&b),
            node(vec![(0, leaf(&["a"])), (1, leaf(&["b"]))])
        );
        assert_eq!(leaf(&[]).sum(&leaf(&[])), leaf(&[]));
    }

    #[test]
    fn big_sum_examples() {
        assert_eq!(big_sum([]), ModalTree::empty());
        let t = node(vec![(3, leaf(&["p"]))]);
        assert_eq!(big_sum([&t]), t);
        assert_eq!(big_sum([&leaf(&["p"]), &leaf(&["q"])]), leaf(&["p", "q"]));
    }

    #[test]
    fn positions_are_preorder() {
        assert_eq!(leaf(&[]).positions(), vec![Position::root()]);
        let t = node(vec![(0, leaf(&[])), (0, node(vec![(1, leaf(&[]))]))]);
        let expected: Vec<Position> = [vec![], vec![1], vec![2], vec![2, 1]]
            .into_iter()
            .map(Position)
            .collect();
        assert_eq!(t.positions(), expected);
    }

    #[test]
    fn subtree_and_replace() {
        let a = leaf(&["a"]);
        let b = leaf(&["b"]);
        let t = node(vec![(0, a.clone()), (1, b.clone())]);

        assert_eq!(t.subtree(&Position::root()).unwrap(), &t);
        assert_eq!(t.subtree(&Position::child(2)).unwrap(), &b);

        let c = leaf(&["c"]);
        let replaced = t.replace(&Position::child(1), c.clone()).unwrap();
        assert_eq!(replaced, node(vec![(0, c), (1, b)]));

        // Self-subtree replacement is the identity.
        let sub = t.subtree(&Position::child(2)).unwrap().clone();
        assert_eq!(t.replace(&Position::child(2), sub).unwrap(), t);

        assert!(t.subtree(&Position(vec![3])).is_err());
        assert!(t.replace(&Position(vec![1, 1]), leaf(&[])).is_err());
    }

    #[test]
    fn json_shape() {
        let t = node(vec![(0, leaf(&["p"]))]);
        assert_eq!(
            serde_json::to_value(&t).unwrap(),
            serde_json::json!({
                "atoms": [],
                "children": [[0, {"atoms": ["p"], "children": []}]]
            })
        );
        let back: ModalTree = serde_json::from_value(serde_json::to_value(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
