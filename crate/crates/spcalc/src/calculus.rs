//! System selection, derivations and the replay checker, plus executable
//! witness constructions for the structural facts the translation from
//! sequent proofs relies on (duplication, projection, reordering of sums).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CheckError;
use crate::rules::{apply, RuleInstance, RuleKind};
use crate::tree::ModalTree;

/// A calculus: the five base rules plus any subset of the three extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct System {
    pub four: bool,
    pub m: bool,
    pub j: bool,
}

impl System {
    /// Base system: atom and child duplication/elimination and permutation.
    pub const K_PLUS: System = System { four: false, m: false, j: false };
    /// Base plus transitivity.
    pub const K4_PLUS: System = System { four: true, m: false, j: false };
    /// Reflection calculus: all three extensions.
    pub const RC: System = System { four: true, m: true, j: true };

    pub fn allows(&self, kind: RuleKind) -> bool {
        match kind {
            RuleKind::Four => self.four,
            RuleKind::M => self.m,
            RuleKind::J => self.j,
            _ => true,
        }
    }

    pub fn allowed_kinds(&self) -> Vec<RuleKind> {
        RuleKind::ALL.into_iter().filter(|k| self.allows(*k)).collect()
    }

    /// `self` admits everything `other` admits.
    pub fn extends(&self, other: &System) -> bool {
        (self.four || !other.four) && (self.m || !other.m) && (self.j || !other.j)
    }

    /// Accepts `k+`/`kplus`, `k4+`/`k4`, `rc`, or any subset of the letters
    /// `4`, `m`, `j` (e.g. `4m`).
    pub fn parse(text: &str) -> Option<System> {
        match text.to_ascii_lowercase().as_str() {
            "k" | "k+" | "kplus" => Some(System::K_PLUS),
            "k4" | "k4+" => Some(System::K4_PLUS),
            "rc" => Some(System::RC),
            other => {
                let mut sys = System::K_PLUS;
                for c in other.chars() {
                    match c {
                        '4' => sys.four = true,
                        'm' => sys.m = true,
                        'j' => sys.j = true,
                        ',' | ' ' => {}
                        _ => return None,
                    }
                }
                Some(sys)
            }
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.four, self.m, self.j) {
            (false, false, false) => write!(f, "K+"),
            (true, false, false) => write!(f, "K4+"),
            (true, true, true) => write!(f, "RC"),
            (four, m, j) => {
                write!(f, "K+[")?;
                if four {
                    write!(f, "4")?;
                }
                if m {
                    write!(f, "m")?;
                }
                if j {
                    write!(f, "j")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A start tree together with an ordered list of steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub start: ModalTree,
    pub steps: Vec<RuleInstance>,
}

impl Derivation {
    pub fn new(start: ModalTree, steps: Vec<RuleInstance>) -> Self {
        Derivation { start, steps }
    }
}

/// Replay a derivation under `sys`, returning the final tree. Every step
/// must be applicable and of an admitted kind.
pub fn check(d: &Derivation, sys: &System) -> Result<ModalTree, CheckError> {
    let mut tree = d.start.clone();
    for (idx, step) in d.steps.iter().enumerate() {
        if !sys.allows(step.kind()) {
            return Err(CheckError::NotInSystem { step: idx + 1, kind: step.kind() });
        }
        tree = apply(&tree, step)
            .map_err(|source| CheckError::NotApplicable { step: idx + 1, source })?;
    }
    Ok(tree)
}

/// Like [`check`] but returning every intermediate tree, the start first.
pub fn check_trace(d: &Derivation, sys: &System) -> Result<Vec<ModalTree>, CheckError> {
    let mut trace = Vec::with_capacity(d.steps.len() + 1);
    let mut tree = d.start.clone();
    trace.push(tree.clone());
    for (idx, step) in d.steps.iter().enumerate() {
        if !sys.allows(step.kind()) {
            return Err(CheckError::NotInSystem { step: idx + 1, kind: step.kind() });
        }
        tree = apply(&tree, step)
            .map_err(|source| CheckError::NotApplicable { step: idx + 1, source })?;
        trace.push(tree.clone());
    }
    Ok(trace)
}

/// Replay steps from `start` without a system restriction.
pub fn replay(start: &ModalTree, steps: &[RuleInstance]) -> Result<ModalTree, CheckError> {
    check(
        &Derivation { start: start.clone(), steps: steps.to_vec() },
        &System::RC,
    )
}

// ---------------------------------------------------------------------------
// Witness constructions. Duplication prepends, so duplicating right-to-left
// reproduces the original order without permutations; eliminations walk
// right-to-left so earlier indices stay put.
// ---------------------------------------------------------------------------

pub mod sums {
    use super::*;
    use crate::tree::Position;

    /// `t` to `t + t`: duplicate every atom and child.
    pub fn duplicate(t: &ModalTree) -> Vec<RuleInstance> {
        let a = t.atoms.len();
        let m = t.children.len();
        let mut steps = Vec::with_capacity(a + m);
        for _ in 0..a {
            steps.push(RuleInstance::RhoPlus { pos: Position::root(), atom: a });
        }
        for _ in 0..m {
            steps.push(RuleInstance::PiPlus { pos: Position::root(), child: m });
        }
        steps
    }

    /// `a + b` to `a`: drop the right summand.
    pub fn project_left(a: &ModalTree, b: &ModalTree) -> Vec<RuleInstance> {
        let mut steps = Vec::new();
        for k in (0..b.atoms.len()).rev() {
            steps.push(RuleInstance::RhoMinus {
                pos: Position::root(),
                atom: a.atoms.len() + k + 1,
            });
        }
        for k in (0..b.children.len()).rev() {
            steps.push(RuleInstance::PiMinus {
                pos: Position::root(),
                child: a.children.len() + k + 1,
            });
        }
        steps
    }

    /// `a + b` to `b`: drop the left summand.
    pub fn project_right(a: &ModalTree, _b: &ModalTree) -> Vec<RuleInstance> {
        let mut steps = Vec::new();
        for _ in 0..a.atoms.len() {
            steps.push(RuleInstance::RhoMinus { pos: Position::root(), atom: 1 });
        }
        for _ in 0..a.children.len() {
            steps.push(RuleInstance::PiMinus { pos: Position::root(), child: 1 });
        }
        steps
    }

    /// `t + t` to `t`: drop the duplicate.
    pub fn collapse(t: &ModalTree) -> Vec<RuleInstance> {
        project_left(t, t)
    }

    /// Steps rewriting the left summand of a sum, given steps for the
    /// summand alone. Left roots are list prefixes, so nothing shifts.
    pub fn in_left(steps: &[RuleInstance]) -> Vec<RuleInstance> {
        steps.to_vec()
    }

    /// Steps rewriting the right summand of `left + _`: root-level indices
    /// shift by the sizes of the (fixed) left summand.
    pub fn in_right(left: &ModalTree, steps: &[RuleInstance]) -> Vec<RuleInstance> {
        let da = left.atoms.len();
        let dg = left.children.len();
        steps.iter().map(|s| shift_root(s, da, dg)).collect()
    }

    fn shift_root(rule: &RuleInstance, atom_shift: usize, child_shift: usize) -> RuleInstance {
        let mut out = rule.clone();
        match &mut out {
            RuleInstance::RhoPlus { pos, atom } | RuleInstance::RhoMinus { pos, atom } => {
                if pos.is_root() {
                    *atom += atom_shift;
                }
            }
            RuleInstance::Sigma { pos, left, right } => {
                if pos.is_root() {
                    *left += child_shift;
                    *right += child_shift;
                }
            }
            RuleInstance::PiPlus { pos, child }
            | RuleInstance::PiMinus { pos, child }
            | RuleInstance::Four { pos, child }
            | RuleInstance::M { pos, child, .. } => {
                if pos.is_root() {
                    *child += child_shift;
                }
            }
            RuleInstance::J { pos, target, source } => {
                if pos.is_root() {
                    *target += child_shift;
                    *source += child_shift;
                }
            }
        }
        // Deep positions move into the shifted child slot.
        if !rule.pos().is_root() {
            let mut v = rule.pos().0.clone();
            v[0] += child_shift;
            return rule.with_pos(crate::tree::Position(v));
        }
        out
    }

    /// `t` to `s + s'` given witnesses `t -> s` and `t -> s'`.
    pub fn join(
        t: &ModalTree,
        s: &ModalTree,
        to_s: &[RuleInstance],
        to_s2: &[RuleInstance],
    ) -> Vec<RuleInstance> {
        let mut steps = duplicate(t);
        steps.extend(in_left(to_s));
        steps.extend(in_right(s, to_s2));
        steps
    }

    /// `a + b` to `s + s'` given witnesses `a -> s` and `b -> s'`.
    pub fn pair(
        s: &ModalTree,
        a_steps: &[RuleInstance],
        b_steps: &[RuleInstance],
    ) -> Vec<RuleInstance> {
        let mut steps = in_left(a_steps).to_vec();
        steps.extend(in_right(s, b_steps));
        steps
    }

    /// `<d1 ++ d2; children>` to `<d2 ++ d1; children>`: duplicate the `d2`
    /// block in front, then drop the stale copy at the tail.
    pub fn swap_atom_blocks(d1_len: usize, d2_len: usize) -> Vec<RuleInstance> {
        let mut steps = Vec::new();
        for _ in 0..d2_len {
            steps.push(RuleInstance::RhoPlus {
                pos: Position::root(),
                atom: d1_len + d2_len,
            });
        }
        let total = d1_len + 2 * d2_len;
        for k in (total - d2_len + 1..=total).rev() {
            steps.push(RuleInstance::RhoMinus { pos: Position::root(), atom: k });
        }
        steps
    }

    /// `a + b` to `b + a`.
    pub fn swap_sum(a: &ModalTree, b: &ModalTree) -> Vec<RuleInstance> {
        let mut steps = swap_atom_blocks(a.atoms.len(), b.atoms.len());
        let (m1, m2) = (a.children.len(), b.children.len());
        for _ in 0..m2 {
            steps.push(RuleInstance::PiPlus { pos: Position::root(), child: m1 + m2 });
        }
        let total = m1 + 2 * m2;
        for k in (total - m2 + 1..=total).rev() {
            steps.push(RuleInstance::PiMinus { pos: Position::root(), child: k });
        }
        steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Position;

    fn leaf(atoms: &[&str]) -> ModalTree {
        ModalTree::leaf(atoms.iter().map(|s| s.to_string()).collect())
    }

    fn node(children: Vec<(u64, ModalTree)>) -> ModalTree {
        ModalTree::new(Vec::new(), children)
    }

    #[test]
    fn check_replays_four() {
        let start = node(vec![(0, node(vec![(0, leaf(&[]))]))]);
        let d = Derivation::new(
            start,
            vec![RuleInstance::Four { pos: Position::root(), child: 1 }],
        );
        assert_eq!(check(&d, &System::K4_PLUS).unwrap(), node(vec![(0, leaf(&[]))]));
        let err = check(&d, &System::K_PLUS).unwrap_err();
        assert_eq!(err, CheckError::NotInSystem { step: 1, kind: RuleKind::Four });
    }

    #[test]
    fn empty_derivation_is_identity() {
        let t = leaf(&["p"]);
        let d = Derivation::new(t.clone(), vec![]);
        assert_eq!(check(&d, &System::K_PLUS).unwrap(), t);
    }

    #[test]
    fn subsystem_ordering() {
        assert!(System::K4_PLUS.extends(&System::K_PLUS));
        assert!(System::RC.extends(&System::K4_PLUS));
        assert!(!System::K_PLUS.extends(&System::K4_PLUS));
    }

    #[test]
    fn system_parsing() {
        assert_eq!(System::parse("rc"), Some(System::RC));
        assert_eq!(System::parse("k+"), Some(System::K_PLUS));
        assert_eq!(System::parse("4m"), Some(System { four: true, m: true, j: false }));
        assert_eq!(System::parse("x"), None);
    }

    #[test]
    fn duplicate_yields_sum_with_itself() {
        let t = ModalTree::new(
            vec!["p".into(), "q".into()],
            vec![(0, leaf(&["a"])), (2, node(vec![(1, leaf(&[]))]))],
        );
        let end = replay(&t, &sums::duplicate(&t)).unwrap();
        assert_eq!(end, t.sum(&t));
        let back = replay(&end, &sums::collapse(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn projections() {
        let a = ModalTree::new(vec!["p".into()], vec![(0, leaf(&["a"]))]);
        let b = ModalTree::new(vec!["q".into(), "r".into()], vec![(1, leaf(&["b"]))]);
        let sum = a.sum(&b);
        assert_eq!(replay(&sum, &sums::project_left(&a, &b)).unwrap(), a);
        assert_eq!(replay(&sum, &sums::project_right(&a, &b)).unwrap(), b);
    }

    #[test]
    fn swap_sum_witness() {
        let a = ModalTree::new(vec!["p".into()], vec![(0, leaf(&["a"])), (1, leaf(&[]))]);
        let b = ModalTree::new(vec!["q".into(), "q".into()], vec![(2, leaf(&["b"]))]);
        let sum = a.sum(&b);
        assert_eq!(replay(&sum, &sums::swap_sum(&a, &b)).unwrap(), b.sum(&a));
    }

    #[test]
    fn in_right_shifts_deep_positions() {
        let left = ModalTree::new(vec!["p".into()], vec![(0, leaf(&["x"])), (0, leaf(&["y"]))]);
        let right = node(vec![(1, leaf(&["z"]))]);
        // Remove the atom "z" inside the right summand's first child.
        let steps = vec![RuleInstance::RhoMinus { pos: Position(vec![1]), atom: 1 }];
        let shifted = sums::in_right(&left, &steps);
        assert_eq!(
            shifted,
            vec![RuleInstance::RhoMinus { pos: Position(vec![3]), atom: 1 }]
        );
        let end = replay(&left.sum(&right), &shifted).unwrap();
        assert_eq!(end, left.sum(&node(vec![(1, leaf(&[]))])));
    }
}
