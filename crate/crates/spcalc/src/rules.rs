//! The eight rewrite rules, as validated instances applicable at arbitrary
//! positions. An instance carries its position and all index arguments, so
//! applying it to a given tree is deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, RuleError};
use crate::formula::Label;
use crate::tree::{ModalTree, Position};

/// Rule identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    RhoPlus,
    RhoMinus,
    Sigma,
    PiPlus,
    PiMinus,
    Four,
    M,
    J,
}

impl RuleKind {
    pub const ALL: [RuleKind; 8] = [
        RuleKind::RhoPlus,
        RuleKind::RhoMinus,
        RuleKind::Sigma,
        RuleKind::PiPlus,
        RuleKind::PiMinus,
        RuleKind::Four,
        RuleKind::M,
        RuleKind::J,
    ];

    pub fn class(self) -> RuleClass {
        match self {
            RuleKind::RhoPlus | RuleKind::RhoMinus => RuleClass::Atomic,
            RuleKind::Sigma => RuleClass::Structural,
            RuleKind::PiPlus => RuleClass::Replicative,
            RuleKind::PiMinus | RuleKind::Four => RuleClass::Decreasing,
            RuleKind::M | RuleKind::J => RuleClass::Modal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::RhoPlus => "rho+",
            RuleKind::RhoMinus => "rho-",
            RuleKind::Sigma => "sigma",
            RuleKind::PiPlus => "pi+",
            RuleKind::PiMinus => "pi-",
            RuleKind::Four => "4",
            RuleKind::M => "m",
            RuleKind::J => "J",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The five kinds the rules fall into; normal derivations order their
/// steps by this classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleClass {
    Replicative,
    Modal,
    Decreasing,
    Atomic,
    Structural,
}

impl RuleClass {
    /// Block order within a normal sequence.
    pub const NORMAL_ORDER: [RuleClass; 5] = [
        RuleClass::Replicative,
        RuleClass::Modal,
        RuleClass::Decreasing,
        RuleClass::Atomic,
        RuleClass::Structural,
    ];
}

/// One fully determined rewrite step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleInstance {
    /// Prepend a copy of the `atom`-th atom at `pos`.
    RhoPlus { pos: Position, atom: usize },
    /// Remove the `atom`-th atom at `pos`.
    RhoMinus { pos: Position, atom: usize },
    /// Swap children `left` and `right` at `pos`.
    Sigma { pos: Position, left: usize, right: usize },
    /// Prepend a copy of the `child`-th child at `pos`.
    PiPlus { pos: Position, child: usize },
    /// Remove the `child`-th child at `pos`.
    PiMinus { pos: Position, child: usize },
    /// Collapse child `child`, which must be `(b, <[]; [(b, S)]>)`, to `(b, S)`.
    Four { pos: Position, child: usize },
    /// Lower the label of child `child` to `new_label`.
    M { pos: Position, child: usize, new_label: Label },
    /// Move child `source` to the end of child `target`'s child list;
    /// requires label(target) > label(source).
    J { pos: Position, target: usize, source: usize },
}

impl RuleInstance {
    pub fn kind(&self) -> RuleKind {
        match self {
            RuleInstance::RhoPlus { .. } => RuleKind::RhoPlus,
            RuleInstance::RhoMinus { .. } => RuleKind::RhoMinus,
            RuleInstance::Sigma { .. } => RuleKind::Sigma,
            RuleInstance::PiPlus { .. } => RuleKind::PiPlus,
            RuleInstance::PiMinus { .. } => RuleKind::PiMinus,
            RuleInstance::Four { .. } => RuleKind::Four,
            RuleInstance::M { .. } => RuleKind::M,
            RuleInstance::J { .. } => RuleKind::J,
        }
    }

    pub fn class(&self) -> RuleClass {
        self.kind().class()
    }

    pub fn pos(&self) -> &Position {
        match self {
            RuleInstance::RhoPlus { pos, .. }
            | RuleInstance::RhoMinus { pos, .. }
            | RuleInstance::Sigma { pos, .. }
            | RuleInstance::PiPlus { pos, .. }
            | RuleInstance::PiMinus { pos, .. }
            | RuleInstance::Four { pos, .. }
            | RuleInstance::M { pos, .. }
            | RuleInstance::J { pos, .. } => pos,
        }
    }

    pub(crate) fn with_pos(&self, pos: Position) -> RuleInstance {
        let mut out = self.clone();
        match &mut out {
            RuleInstance::RhoPlus { pos: p, .. }
            | RuleInstance::RhoMinus { pos: p, .. }
            | RuleInstance::Sigma { pos: p, .. }
            | RuleInstance::PiPlus { pos: p, .. }
            | RuleInstance::PiMinus { pos: p, .. }
            | RuleInstance::Four { pos: p, .. }
            | RuleInstance::M { pos: p, .. }
            | RuleInstance::J { pos: p, .. } => *p = pos,
        }
        out
    }

}

fn check_child_index(
    node: &ModalTree,
    pos: &Position,
    index: usize,
) -> Result<(), RuleError> {
    if index == 0 || index > node.children.len() {
        return Err(RuleError::ChildIndex {
            pos: pos.clone(),
            index,
            len: node.children.len(),
        });
    }
    Ok(())
}

/// Validate `rule` against `tree` and, on success, return the rewritten
/// node at the rule's position.
fn rewrite_node(tree: &ModalTree, rule: &RuleInstance) -> Result<ModalTree, RuleError> {
    let pos = rule.pos();
    let node = tree.subtree(pos)?;
    match rule {
        RuleInstance::RhoPlus { atom, .. } => {
            if *atom == 0 || *atom > node.atoms.len() {
                return Err(RuleError::AtomIndex {
                    pos: pos.clone(),
                    index: *atom,
                    len: node.atoms.len(),
                });
            }
            let mut out = node.clone();
            out.atoms.insert(0, node.atoms[*atom - 1].clone());
            Ok(out)
        }
        RuleInstance::RhoMinus { atom, .. } => {
            if *atom == 0 || *atom > node.atoms.len() {
                return Err(RuleError::AtomIndex {
                    pos: pos.clone(),
                    index: *atom,
                    len: node.atoms.len(),
                });
            }
            let mut out = node.clone();
            out.atoms.remove(*atom - 1);
            Ok(out)
        }
        RuleInstance::Sigma { left, right, .. } => {
            check_child_index(node, pos, *left)?;
            check_child_index(node, pos, *right)?;
            if left == right {
                return Err(RuleError::EqualIndices(*left));
            }
            let mut out = node.clone();
            out.children.swap(*left - 1, *right - 1);
            Ok(out)
        }
        RuleInstance::PiPlus { child, .. } => {
            check_child_index(node, pos, *child)?;
            let mut out = node.clone();
            let dup = node.children[*child - 1].clone();
            out.children.insert(0, dup);
            Ok(out)
        }
        RuleInstance::PiMinus { child, .. } => {
            check_child_index(node, pos, *child)?;
            let mut out = node.clone();
            out.children.remove(*child - 1);
            Ok(out)
        }
        RuleInstance::Four { child, .. } => {
            check_child_index(node, pos, *child)?;
            let (label, inner) = &node.children[*child - 1];
            let fail = |reason: &str| RuleError::FourShape {
                pos: pos.clone(),
                index: *child,
                reason: reason.to_string(),
            };
            if !inner.atoms.is_empty() {
                return Err(fail("inner node carries atoms"));
            }
            if inner.children.len() != 1 {
                return Err(fail("inner node must have exactly one child"));
            }
            let (inner_label, grand) = &inner.children[0];
            if inner_label != label {
                return Err(fail("inner edge label differs from the outer one"));
            }
            let mut out = node.clone();
            out.children[*child - 1] = (*label, grand.clone());
            Ok(out)
        }
        RuleInstance::M { child, new_label, .. } => {
            check_child_index(node, pos, *child)?;
            let (label, sub) = &node.children[*child - 1];
            if new_label >= label {
                return Err(RuleError::LabelNotSmaller { old: *label, new: *new_label });
            }
            let mut out = node.clone();
            out.children[*child - 1] = (*new_label, sub.clone());
            Ok(out)
        }
        RuleInstance::J { target, source, .. } => {
            check_child_index(node, pos, *target)?;
            check_child_index(node, pos, *source)?;
            if target == source {
                return Err(RuleError::EqualIndices(*target));
            }
            let (alpha, absorber) = &node.children[*target - 1];
            let (beta, moved) = &node.children[*source - 1];
            if alpha <= beta {
                return Err(RuleError::LabelOrder { left: *alpha, right: *beta });
            }
            let mut new_absorber = absorber.clone();
            new_absorber.children.push((*beta, moved.clone()));
            let mut out = node.clone();
            out.children[*target - 1] = (*alpha, new_absorber);
            out.children.remove(*source - 1);
            Ok(out)
        }
    }
}

/// Whether `rule` applies to `tree`.
pub fn applicable(tree: &ModalTree, rule: &RuleInstance) -> bool {
    rewrite_node(tree, rule).is_ok()
}

/// Apply `rule` to `tree`, or report the violated side condition.
pub fn apply(tree: &ModalTree, rule: &RuleInstance) -> Result<ModalTree, RuleError> {
    let rewritten = rewrite_node(tree, rule)?;
    tree.replace(rule.pos(), rewritten)
}

/// Reposition `rule` under `prefix`: applying the lifted rule inside a
/// larger tree rewrites the embedded subtree in place.
pub fn lift(rule: &RuleInstance, prefix: &Position) -> RuleInstance {
    rule.with_pos(prefix.join(rule.pos()))
}

/// All applicable instances of the allowed kinds, in canonical order:
/// depth-first position order, then kind order, then argument order.
/// For the label-lowering rule every smaller label is enumerated.
pub fn enumerate_applicable(tree: &ModalTree, allowed: &[RuleKind]) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for pos in tree.positions() {
        let node = tree.subtree(&pos).expect("enumerated position");
        for kind in RuleKind::ALL {
            if !allowed.contains(&kind) {
                continue;
            }
            enumerate_at(node, &pos, kind, &mut out);
        }
    }
    out
}

fn enumerate_at(node: &ModalTree, pos: &Position, kind: RuleKind, out: &mut Vec<RuleInstance>) {
    let n_atoms = node.atoms.len();
    let n_children = node.children.len();
    match kind {
        RuleKind::RhoPlus => {
            for atom in 1..=n_atoms {
                out.push(RuleInstance::RhoPlus { pos: pos.clone(), atom });
            }
        }
        RuleKind::RhoMinus => {
            for atom in 1..=n_atoms {
                out.push(RuleInstance::RhoMinus { pos: pos.clone(), atom });
            }
        }
        RuleKind::Sigma => {
            for left in 1..=n_children {
                for right in 1..=n_children {
                    if left != right {
                        out.push(RuleInstance::Sigma { pos: pos.clone(), left, right });
                    }
                }
            }
        }
        RuleKind::PiPlus => {
            for child in 1..=n_children {
                out.push(RuleInstance::PiPlus { pos: pos.clone(), child });
            }
        }
        RuleKind::PiMinus => {
            for child in 1..=n_children {
                out.push(RuleInstance::PiMinus { pos: pos.clone(), child });
            }
        }
        RuleKind::Four => {
            for (i, (label, inner)) in node.children.iter().enumerate() {
                let shape_ok = inner.atoms.is_empty()
                    && inner.children.len() == 1
                    && inner.children[0].0 == *label;
                if shape_ok {
                    out.push(RuleInstance::Four { pos: pos.clone(), child: i + 1 });
                }
            }
        }
        RuleKind::M => {
            for (i, (label, _)) in node.children.iter().enumerate() {
                for new_label in 0..*label {
                    out.push(RuleInstance::M {
                        pos: pos.clone(),
                        child: i + 1,
                        new_label,
                    });
                }
            }
        }
        RuleKind::J => {
            for (i, (alpha, _)) in node.children.iter().enumerate() {
                for (j, (beta, _)) in node.children.iter().enumerate() {
                    if i != j && alpha > beta {
                        out.push(RuleInstance::J {
                            pos: pos.clone(),
                            target: i + 1,
                            source: j + 1,
                        });
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Text and JSON forms: `kind@pos(args)` e.g. `J@1.2(i=1,j=3)`, `m@e(i=2,b=0)`.
// ---------------------------------------------------------------------------

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleInstance::RhoPlus { pos, atom } => write!(f, "rho+@{pos}(i={atom})"),
            RuleInstance::RhoMinus { pos, atom } => write!(f, "rho-@{pos}(i={atom})"),
            RuleInstance::Sigma { pos, left, right } => {
                write!(f, "sigma@{pos}(i={left},j={right})")
            }
            RuleInstance::PiPlus { pos, child } => write!(f, "pi+@{pos}(i={child})"),
            RuleInstance::PiMinus { pos, child } => write!(f, "pi-@{pos}(i={child})"),
            RuleInstance::Four { pos, child } => write!(f, "4@{pos}(i={child})"),
            RuleInstance::M { pos, child, new_label } => {
                write!(f, "m@{pos}(i={child},b={new_label})")
            }
            RuleInstance::J { pos, target, source } => {
                write!(f, "J@{pos}(i={target},j={source})")
            }
        }
    }
}

impl RuleInstance {
    /// Parse the textual rule form.
    pub fn parse(text: &str) -> Result<RuleInstance, ParseError> {
        let err = |pos: usize, msg: &str| ParseError { pos, msg: msg.to_string() };
        let at = text.find('@').ok_or_else(|| err(0, "missing '@'"))?;
        let kind = &text[..at];
        let rest = &text[at + 1..];
        let paren = rest.find('(').ok_or_else(|| err(at, "missing '('"))?;
        if !rest.ends_with(')') {
            return Err(err(text.len(), "missing ')'"));
        }
        let pos = Position::parse(&rest[..paren])
            .ok_or_else(|| err(at + 1, "bad position"))?;
        let mut i = None;
        let mut j = None;
        let mut b = None;
        let args = &rest[paren + 1..rest.len() - 1];
        for part in args.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| err(at, "argument must be key=value"))?;
            let slot = match key.trim() {
                "i" => &mut i,
                "j" => &mut j,
                "b" => &mut b,
                _ => return Err(err(at, "unknown argument key")),
            };
            *slot = Some(
                value
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| err(at, "argument must be a natural number"))?,
            );
        }
        let need_i = || i.map(|v| v as usize).ok_or_else(|| err(at, "missing i"));
        let need_j = || j.map(|v| v as usize).ok_or_else(|| err(at, "missing j"));
        match kind {
            "rho+" => Ok(RuleInstance::RhoPlus { pos, atom: need_i()? }),
            "rho-" => Ok(RuleInstance::RhoMinus { pos, atom: need_i()? }),
            "sigma" => Ok(RuleInstance::Sigma { pos, left: need_i()?, right: need_j()? }),
            "pi+" => Ok(RuleInstance::PiPlus { pos, child: need_i()? }),
            "pi-" => Ok(RuleInstance::PiMinus { pos, child: need_i()? }),
            "4" => Ok(RuleInstance::Four { pos, child: need_i()? }),
            "m" => Ok(RuleInstance::M {
                pos,
                child: need_i()?,
                new_label: b.ok_or_else(|| err(at, "missing b"))?,
            }),
            "J" => Ok(RuleInstance::J { pos, target: need_i()?, source: need_j()? }),
            other => Err(ParseError { pos: 0, msg: format!("unknown rule kind {other:?}") }),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    kind: String,
    pos: Position,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Label>,
}

impl Serialize for RuleInstance {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let (i, j, b) = match self {
            RuleInstance::RhoPlus { atom, .. } | RuleInstance::RhoMinus { atom, .. } => {
                (Some(*atom), None, None)
            }
            RuleInstance::Sigma { left, right, .. } => (Some(*left), Some(*right), None),
            RuleInstance::PiPlus { child, .. }
            | RuleInstance::PiMinus { child, .. }
            | RuleInstance::Four { child, .. } => (Some(*child), None, None),
            RuleInstance::M { child, new_label, .. } => (Some(*child), None, Some(*new_label)),
            RuleInstance::J { target, source, .. } => (Some(*target), Some(*source), None),
        };
        RuleJson {
            kind: self.kind().name().to_string(),
            pos: self.pos().clone(),
            i,
            j,
            b,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RuleInstance {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RuleJson::deserialize(de)?;
        let pos = raw.pos;
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| D::Error::custom(format!("rule {:?} needs {what}", raw.kind)))
        };
        match raw.kind.as_str() {
            "rho+" => Ok(RuleInstance::RhoPlus { pos, atom: need(raw.i, "i")? }),
            "rho-" => Ok(RuleInstance::RhoMinus { pos, atom: need(raw.i, "i")? }),
            "sigma" => Ok(RuleInstance::Sigma {
                pos,
                left: need(raw.i, "i")?,
                right: need(raw.j, "j")?,
            }),
            "pi+" => Ok(RuleInstance::PiPlus { pos, child: need(raw.i, "i")? }),
            "pi-" => Ok(RuleInstance::PiMinus { pos, child: need(raw.i, "i")? }),
            "4" => Ok(RuleInstance::Four { pos, child: need(raw.i, "i")? }),
            "m" => Ok(RuleInstance::M {
                pos,
                child: need(raw.i, "i")?,
                new_label: raw.b.ok_or_else(|| D::Error::custom("rule m needs b"))?,
            }),
            "J" => Ok(RuleInstance::J {
                pos,
                target: need(raw.i, "i")?,
                source: need(raw.j, "j")?,
            }),
            other => Err(D::Error::custom(format!("unknown rule kind {other:?}"))),
        }
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
    fn four_side_condition() {
        let good = node(vec![(2, node(vec![(2, leaf(&[]))]))]);
        let four = RuleInstance::Four { pos: Position::root(), child: 1 };
        assert!(applicable(&good, &four));

        let atoms_inside = node(vec![(
            2,
            ModalTree::new(vec!["p".into()], vec![(2, leaf(&[]))]),
        )]);
        assert!(!applicable(&atoms_inside, &four));

        let label_mismatch = node(vec![(2, node(vec![(1, leaf(&[]))]))]);
        assert!(!applicable(&label_mismatch, &four));

        let two_grandchildren = node(vec![(2, node(vec![(2, leaf(&[])), (2, leaf(&[]))]))]);
        assert!(!applicable(&two_grandchildren, &four));
    }

    #[test]
    fn j_requires_label_order() {
        let t = node(vec![(0, leaf(&["a"])), (1, leaf(&["b"]))]);
        let wrong = RuleInstance::J { pos: Position::root(), target: 1, source: 2 };
        assert!(!applicable(&t, &wrong));
        let right = RuleInstance::J { pos: Position::root(), target: 2, source: 1 };
        assert!(applicable(&t, &right));
    }

    #[test]
    fn four_collapses() {
        let s = leaf(&["s"]);
        let t = node(vec![(7, node(vec![(7, s.clone())]))]);
        let out = apply(&t, &RuleInstance::Four { pos: Position::root(), child: 1 }).unwrap();
        assert_eq!(out, node(vec![(7, s)]));
    }

    #[test]
    fn j_moves_and_removes() {
        let absorb = ModalTree::new(vec!["x".into()], vec![(0, leaf(&["y"]))]);
        let moved = leaf(&["z"]);
        let t = node(vec![(3, absorb.clone()), (1, moved.clone())]);
        let out =
            apply(&t, &RuleInstance::J { pos: Position::root(), target: 1, source: 2 }).unwrap();
        let expected = node(vec![(
            3,
            ModalTree::new(vec!["x".into()], vec![(0, leaf(&["y"])), (1, moved)]),
        )]);
        assert_eq!(out, expected);
    }

    #[test]
    fn rho_plus_prepends() {
        let t = leaf(&["p"]);
        let out =
            apply(&t, &RuleInstance::RhoPlus { pos: Position::root(), atom: 1 }).unwrap();
        assert_eq!(out, leaf(&["p", "p"]));
    }

    #[test]
    fn pi_plus_prepends() {
        let t = node(vec![(0, leaf(&["a"])), (1, leaf(&["b"]))]);
        let out =
            apply(&t, &RuleInstance::PiPlus { pos: Position::root(), child: 2 }).unwrap();
        assert_eq!(
            out,
            node(vec![(1, leaf(&["b"])), (0, leaf(&["a"])), (1, leaf(&["b"]))])
        );
    }

    #[test]
    fn lift_concatenates_positions() {
        let r = RuleInstance::Four { pos: Position(vec![1]), child: 2 };
        let lifted = lift(&r, &Position(vec![3, 1]));
        assert_eq!(lifted, RuleInstance::Four { pos: Position(vec![3, 1, 1]), child: 2 });

        let s = RuleInstance::Sigma { pos: Position::root(), left: 1, right: 2 };
        assert_eq!(
            lift(&s, &Position(vec![2])),
            RuleInstance::Sigma { pos: Position(vec![2]), left: 1, right: 2 }
        );
    }

    #[test]
    fn enumerate_leaf_cases() {
        assert!(enumerate_applicable(&ModalTree::empty(), &RuleKind::ALL).is_empty());
        assert_eq!(
            enumerate_applicable(&leaf(&["p"]), &RuleKind::ALL),
            vec![
                RuleInstance::RhoPlus { pos: Position::root(), atom: 1 },
                RuleInstance::RhoMinus { pos: Position::root(), atom: 1 },
            ]
        );
    }

    #[test]
    fn enumerate_modal_cases() {
        let t = node(vec![(1, leaf(&[])), (0, leaf(&[]))]);
        let got = enumerate_applicable(&t, &[RuleKind::M, RuleKind::J]);
        assert_eq!(
            got,
            vec![
                RuleInstance::M { pos: Position::root(), child: 1, new_label: 0 },
                RuleInstance::J { pos: Position::root(), target: 1, source: 2 },
            ]
        );
    }

    #[test]
    fn error_names_condition() {
        let t = node(vec![(2, ModalTree::new(vec!["p".into()], vec![(2, leaf(&[]))]))]);
        let err = apply(&t, &RuleInstance::Four { pos: Position::root(), child: 1 }).unwrap_err();
        assert!(matches!(err, RuleError::FourShape { .. }));
        assert!(err.to_string().contains("atoms"));
    }

    #[test]
    fn text_round_trip() {
        for text in [
            "J@1.2(i=1,j=3)",
            "m@e(i=2,b=0)",
            "sigma@e(i=1,j=2)",
            "rho+@3(i=1)",
            "pi-@e(i=4)",
            "4@1.1.2(i=1)",
        ] {
            let rule = RuleInstance::parse(text).unwrap();
            assert_eq!(rule.to_string(), text);
        }
    }

    #[test]
    fn json_round_trip() {
        let rule = RuleInstance::M { pos: Position(vec![1]), child: 2, new_label: 0 };
        let v = serde_json::to_value(&rule).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "m", "pos": [1], "i": 2, "b": 0}));
        assert_eq!(serde_json::from_value::<RuleInstance>(v).unwrap(), rule);
    }
}
