//! The two embeddings between formulas and modal trees. `to_tree` followed
//! by `to_formula` is the identity on trees exactly; the other composition
//! is the identity on formulas up to base-system equivalence.

use crate::formula::{big_and, Formula};
use crate::tree::ModalTree;

/// Map a formula to its modal tree: verum to the empty tree, a variable to
/// a one-atom leaf, a diamond to a single labelled child, a conjunction to
/// the sum of the two trees.
pub fn to_tree(f: &Formula) -> ModalTree {
    match f {
        Formula::Top => ModalTree::empty(),
        Formula::Var(name) => ModalTree::leaf(vec![name.clone()]),
        Formula::Dia(label, body) => ModalTree::new(Vec::new(), vec![(*label, to_tree(body))]),
        Formula::And(l, r) => to_tree(l).sum(&to_tree(r)),
    }
}

/// Map a tree back to a formula: the conjunction of its atoms conjoined
/// with the conjunction of diamonds over its children. No simplification
/// is performed; `to_tree` absorbs the introduced verum conjuncts.
pub fn to_formula(t: &ModalTree) -> Formula {
    let atoms = big_and(t.atoms.iter().map(|a| Formula::Var(a.clone())));
    let diamonds = big_and(
        t.children
            .iter()
            .map(|(label, child)| Formula::dia(*label, to_formula(child))),
    );
    Formula::and(atoms, diamonds)
}

/// `to_tree(to_formula(t))`; equals `t` for every tree.
pub fn tree_roundtrip(t: &ModalTree) -> ModalTree {
    to_tree(&to_formula(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::tree::Position;

    fn leaf(atoms: &[&str]) -> ModalTree {
        ModalTree::leaf(atoms.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn to_tree_clauses() {
        assert_eq!(to_tree(&Formula::Top), ModalTree::empty());
        assert_eq!(to_tree(&Formula::var("p")), leaf(&["p"]));
        assert_eq!(
            to_tree(&parse("<0> p & q").unwrap()),
            ModalTree::new(vec!["q".into()], vec![(0, leaf(&["p"]))])
        );
    }

    #[test]
    fn to_formula_shape() {
        assert_eq!(
            to_formula(&ModalTree::empty()),
            Formula::and(Formula::Top, Formula::Top)
        );
        assert_eq!(
            to_formula(&leaf(&["p"])),
            Formula::and(
                Formula::and(Formula::var("p"), Formula::Top),
                Formula::Top
            )
        );
        let one_child = ModalTree::new(Vec::new(), vec![(0, ModalTree::empty())]);
        assert_eq!(
            to_formula(&one_child),
            Formula::and(
                Formula::Top,
                Formula::and(
                    Formula::dia(0, Formula::and(Formula::Top, Formula::Top)),
                    Formula::Top
                )
            )
        );
    }

    #[test]
    fn roundtrip_examples() {
        let l = leaf(&["p"]);
        assert_eq!(tree_roundtrip(&l), l);
        let t = ModalTree::new(
            vec!["p".into(), "q".into()],
            vec![(3, ModalTree::empty())],
        );
        assert_eq!(tree_roundtrip(&t), t);
    }

    #[test]
    fn height_equals_modal_depth() {
        for text in ["T", "p", "<0> p & q", "<1><0> p", "<2>(p & q) & <0> T"] {
            let f = parse(text).unwrap();
            assert_eq!(to_tree(&f).height(), f.modal_depth(), "{text}");
        }
    }

    #[test]
    fn conjunction_is_sum() {
        let f = parse("<1> p").unwrap();
        let g = parse("q & <0> T").unwrap();
        assert_eq!(
            to_tree(&Formula::and(f.clone(), g.clone())),
            to_tree(&f).sum(&to_tree(&g))
        );
    }

    #[test]
    fn embed_positions_smoke() {
        let t = to_tree(&parse("<1>(p & <0> q)").unwrap());
        assert!(t.has_position(&Position(vec![1, 1])));
        assert!(!t.has_position(&Position(vec![2])));
    }
}
