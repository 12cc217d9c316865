//! Reordering of derivations into normal shape: duplications first, then
//! modal steps, then eliminations and transitivity, then atom edits, then
//! child permutations, with verified bounds on every block length.

mod commute;
mod marked;
mod search;
mod sigma;
mod swap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::calculus::{check, Derivation, System};
use crate::error::NormalizeError;
use crate::rules::{apply, RuleClass, RuleInstance, RuleKind};
use crate::tree::{ModalTree, Position};

pub use commute::{
    commute_atomic, commute_decreasing, commute_j_over_replicatives,
    commute_m_over_replicatives, commute_modal_block_over_piplus, commute_over_piplus,
    commute_structural,
};
pub use marked::{MarkSet, MarkedTree};
pub use sigma::{canonical, compress_sigma, sigma_equivalent};

/// A derivation split into its five blocks; concatenation in block order
/// replays from the original start to the original end tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalShape {
    pub replicative: Vec<RuleInstance>,
    pub modal: Vec<RuleInstance>,
    pub decreasing: Vec<RuleInstance>,
    pub atomic: Vec<RuleInstance>,
    pub structural: Vec<RuleInstance>,
}

impl NormalShape {
    pub fn concat(&self) -> Vec<RuleInstance> {
        let mut out = Vec::with_capacity(self.len());
        out.extend(self.replicative.iter().cloned());
        out.extend(self.modal.iter().cloned());
        out.extend(self.decreasing.iter().cloned());
        out.extend(self.atomic.iter().cloned());
        out.extend(self.structural.iter().cloned());
        out
    }

    pub fn len(&self) -> usize {
        self.replicative.len()
            + self.modal.len()
            + self.decreasing.len()
            + self.atomic.len()
            + self.structural.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn from_steps(steps: Vec<RuleInstance>) -> Option<NormalShape> {
        if !is_normal(&steps) {
            return None;
        }
        let mut shape = NormalShape::default();
        for s in steps {
            match s.class() {
                RuleClass::Replicative => shape.replicative.push(s),
                RuleClass::Modal => shape.modal.push(s),
                RuleClass::Decreasing => shape.decreasing.push(s),
                RuleClass::Atomic => shape.atomic.push(s),
                RuleClass::Structural => shape.structural.push(s),
            }
        }
        Some(shape)
    }
}

/// Whether the kinds of `steps` appear in block order (possibly with
/// empty blocks).
pub fn is_normal(steps: &[RuleInstance]) -> bool {
    let rank = |c: RuleClass| {
        RuleClass::NORMAL_ORDER
            .iter()
            .position(|x| *x == c)
            .expect("ordered")
    };
    steps.windows(2).all(|w| rank(w[0].class()) <= rank(w[1].class()))
}

/// The three flag positions of a merge step, per the inductive definition:
/// applied at the root the flags sit at the root and the two children
/// involved; applied deeper the internal flag sits on the entered branch
/// and the other two are inherited from the subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JFlagSet {
    pub internal: Position,
    pub upper: Position,
    pub lower: Position,
}

pub fn jflags(t: &ModalTree, rule: &RuleInstance) -> Result<JFlagSet, NormalizeError> {
    if !crate::rules::applicable(t, rule) {
        return Err(NormalizeError::ReplayMismatch);
    }
    jflags_unchecked(t, rule).ok_or(NormalizeError::ReplayMismatch)
}

pub(crate) fn jflags_unchecked(t: &ModalTree, rule: &RuleInstance) -> Option<JFlagSet> {
    let RuleInstance::J { pos, target, source } = rule else {
        return None;
    };
    fn go(t: &ModalTree, pos: &Position, target: usize, source: usize) -> Option<JFlagSet> {
        match pos.split_first() {
            None => Some(JFlagSet {
                internal: Position::root(),
                upper: Position(vec![target]),
                lower: Position(vec![source]),
            }),
            Some((head, rest)) => {
                let child = &t.children.get(head - 1)?.1;
                let sub = go(child, &rest, target, source)?;
                Some(JFlagSet {
                    internal: Position(vec![head]),
                    upper: Position(vec![head]).join(&sub.upper),
                    lower: Position(vec![head]).join(&sub.lower),
                })
            }
        }
    }
    go(t, pos, *target, *source)
}

// ---------------------------------------------------------------------------
// The normalization procedure.
// ---------------------------------------------------------------------------

struct Normalizer {
    start: ModalTree,
    end: ModalTree,
    shape: NormalShape,
}

impl Normalizer {
    fn tree_before_modal(&self) -> Result<ModalTree, NormalizeError> {
        run(&self.start, &self.shape.replicative)
    }

    fn tree_before_decreasing(&self) -> Result<ModalTree, NormalizeError> {
        let t = self.tree_before_modal()?;
        run(&t, &self.shape.modal)
    }

    fn tree_before_atomic(&self) -> Result<ModalTree, NormalizeError> {
        let t = self.tree_before_decreasing()?;
        run(&t, &self.shape.decreasing)
    }

    fn tree_before_structural(&self) -> Result<ModalTree, NormalizeError> {
        let t = self.tree_before_atomic()?;
        run(&t, &self.shape.atomic)
    }

    fn insert(&mut self, step: &RuleInstance) -> Result<(), NormalizeError> {
        self.end = apply(&self.end, step).map_err(|_| NormalizeError::ReplayMismatch)?;
        match step.class() {
            RuleClass::Structural => {
                self.shape.structural.push(step.clone());
            }
            RuleClass::Atomic => {
                let before_sigma = self.tree_before_structural()?;
                let (rho, sigmas) =
                    commute_structural(&before_sigma, &self.shape.structural, step)?;
                self.shape.atomic.push(rho);
                self.shape.structural = sigmas;
            }
            RuleClass::Decreasing => {
                let before_sigma = self.tree_before_structural()?;
                let (d1, sigmas) =
                    commute_structural(&before_sigma, &self.shape.structural, step)?;
                let before_atoms = self.tree_before_atomic()?;
                let (d2, rhos) = commute_atomic(&before_atoms, &self.shape.atomic, &d1)?;
                self.shape.decreasing.push(d2);
                self.shape.atomic = rhos;
                self.shape.structural = sigmas;
            }
            RuleClass::Modal => {
                let before_sigma = self.tree_before_structural()?;
                let (m1, sigmas) =
                    commute_structural(&before_sigma, &self.shape.structural, step)?;
                let before_atoms = self.tree_before_atomic()?;
                let (m2, rhos) = commute_atomic(&before_atoms, &self.shape.atomic, &m1)?;
                let before_deltas = self.tree_before_decreasing()?;
                let (ms, deltas) =
                    commute_decreasing(&before_deltas, &self.shape.decreasing, &m2)?;
                self.shape.modal.extend(ms);
                self.shape.decreasing = deltas;
                self.shape.atomic = rhos;
                self.shape.structural = sigmas;
            }
            RuleClass::Replicative => {
                // Pull the duplication over the decreasing, atomic and
                // structural blocks at once, then over the modal block.
                let mut suffix = self.shape.decreasing.clone();
                suffix.extend(self.shape.atomic.iter().cloned());
                suffix.extend(self.shape.structural.iter().cloned());
                let before_deltas = self.tree_before_decreasing()?;
                let (pi1, tail) = commute_over_piplus(&before_deltas, &suffix, step)?;
                let (deltas, rhos, sigmas) = split_by_class(tail)?;

                let before_modal = self.tree_before_modal()?;
                if self.shape.modal.iter().any(|s| s.kind() == RuleKind::J) {
                    let (rep_add, modal, sig_mid) = commute_modal_block_over_piplus(
                        &before_modal,
                        &self.shape.modal,
                        &pi1,
                    )?;
                    // sig_mid sits between the modal block and the
                    // decreasing/atomic blocks; push it to the right.
                    let mut mid = run(&before_modal, &rep_add)?;
                    mid = run(&mid, &modal)?;
                    let mut da = deltas.clone();
                    da.extend(rhos.iter().cloned());
                    let (da2, sig2) = commute::push_sigmas_right(&mid, &sig_mid, &da)?;
                    let (deltas2, rhos2, extra) = split_by_class(da2)?;
                    if !extra.is_empty() {
                        return Err(NormalizeError::ReplayMismatch);
                    }
                    self.shape.replicative.extend(rep_add);
                    self.shape.modal = modal;
                    self.shape.decreasing = deltas2;
                    self.shape.atomic = rhos2;
                    let mut structural = sig2;
                    structural.extend(sigmas);
                    self.shape.structural = structural;
                } else {
                    let (pi2, modal) =
                        commute_over_piplus(&before_modal, &self.shape.modal, &pi1)?;
                    self.shape.replicative.push(pi2);
                    self.shape.modal = modal;
                    self.shape.decreasing = deltas;
                    self.shape.atomic = rhos;
                    self.shape.structural = sigmas;
                }
            }
        }
        self.recompress()?;
        self.validate()
    }

    /// Keep the permutation block within its bound; leave blocks that
    /// already fit untouched so normal inputs pass through unchanged.
    fn recompress(&mut self) -> Result<(), NormalizeError> {
        let cap = self.end.node_count().saturating_sub(1);
        if self.shape.structural.len() > cap {
            let before = self.tree_before_structural()?;
            self.shape.structural = compress_sigma(&before, &self.end)?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), NormalizeError> {
        let got = run(&self.start, &self.shape.concat())?;
        if got != self.end {
            return Err(NormalizeError::ReplayMismatch);
        }
        Ok(())
    }
}

fn run(t: &ModalTree, steps: &[RuleInstance]) -> Result<ModalTree, NormalizeError> {
    let mut cur = t.clone();
    for s in steps {
        cur = apply(&cur, s).map_err(|_| NormalizeError::ReplayMismatch)?;
    }
    Ok(cur)
}

fn split_by_class(
    steps: Vec<RuleInstance>,
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let mut deltas = Vec::new();
    let mut rhos = Vec::new();
    let mut sigmas = Vec::new();
    for s in steps {
        match s.class() {
            RuleClass::Decreasing => {
                if !rhos.is_empty() || !sigmas.is_empty() {
                    return Err(NormalizeError::ReplayMismatch);
                }
                deltas.push(s);
            }
            RuleClass::Atomic => {
                if !sigmas.is_empty() {
                    return Err(NormalizeError::ReplayMismatch);
                }
                rhos.push(s);
            }
            RuleClass::Structural => sigmas.push(s),
            _ => return Err(NormalizeError::ReplayMismatch),
        }
    }
    Ok((deltas, rhos, sigmas))
}

/// Reorder `d` into normal shape. The constructive pass mirrors the
/// inductive normalization argument; when it hits the irreversible
/// atom-elimination/transitivity interaction it falls back to a bounded
/// search for a normal witness with the same endpoints and reports the
/// obstruction only if none exists within the caps.
pub fn normalize(d: &Derivation, sys: &System) -> Result<NormalShape, NormalizeError> {
    let end = check(d, sys)?;
    match normalize_constructive(d) {
        Ok(shape) => Ok(shape),
        Err(NormalizeError::FourObstruction { pos }) => {
            let (max_nodes, max_size) = replay_extents(d)?;
            let caps = search::SearchCaps {
                max_steps: 2 * d.steps.len() + 8,
                max_nodes: max_nodes + 4,
                max_size: max_size + 6,
                max_states: 300_000,
            };
            match search::find_normal_sequence(&d.start, &end, sys, &caps) {
                Some(steps) => {
                    debug_assert!(is_normal(&steps));
                    let shape = NormalShape::from_steps(steps)
                        .ok_or(NormalizeError::ReplayMismatch)?;
                    if run(&d.start, &shape.concat())? != end {
                        return Err(NormalizeError::ReplayMismatch);
                    }
                    Ok(shape)
                }
                None => Err(NormalizeError::FourObstruction { pos }),
            }
        }
        Err(e) => Err(e),
    }
}

fn replay_extents(d: &Derivation) -> Result<(usize, usize), NormalizeError> {
    fn atom_occurrences(t: &ModalTree) -> usize {
        t.atoms.len() + t.children.iter().map(|(_, c)| atom_occurrences(c)).sum::<usize>()
    }
    let mut cur = d.start.clone();
    let mut max_nodes = cur.node_count();
    let mut max_size = max_nodes + atom_occurrences(&cur);
    for s in &d.steps {
        cur = apply(&cur, s).map_err(|_| NormalizeError::ReplayMismatch)?;
        max_nodes = max_nodes.max(cur.node_count());
        max_size = max_size.max(cur.node_count() + atom_occurrences(&cur));
    }
    Ok((max_nodes, max_size))
}

fn normalize_constructive(d: &Derivation) -> Result<NormalShape, NormalizeError> {
    let mut normalizer = Normalizer {
        start: d.start.clone(),
        end: d.start.clone(),
        shape: NormalShape::default(),
    };
    for step in &d.steps {
        normalizer.insert(step)?;
    }
    Ok(normalizer.shape)
}

// ---------------------------------------------------------------------------
// Theorem bounds.
// ---------------------------------------------------------------------------

/// An exact bound of the form `base^exp`; kept symbolic because the
/// merge-regime bounds overflow any fixed-width integer immediately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    base: BigUint,
    exp: BigUint,
}

impl BoundValue {
    pub fn exact(v: usize) -> Self {
        BoundValue { base: BigUint::from(v), exp: BigUint::from(1u32) }
    }

    pub fn power(base: BigUint, exp: BigUint) -> Self {
        BoundValue { base, exp }
    }

    /// Whether `actual <= base^exp`, computed without materializing the
    /// power when it provably exceeds any machine-sized count.
    pub fn admits(&self, actual: usize) -> bool {
        let actual = BigUint::from(actual);
        let one = BigUint::from(1u32);
        if self.exp == one {
            return actual <= self.base;
        }
        if self.exp == BigUint::from(0u32) || self.base <= one {
            // base^0 = 1; 0^e = 0 (e > 0); 1^e = 1.
            let value = if self.exp == BigUint::from(0u32) {
                one
            } else {
                self.base.clone()
            };
            return actual <= value;
        }
        // base >= 2: a 64-bit count is below 2^64 <= base^exp for exp >= 64.
        if self.exp >= BigUint::from(64u32) {
            return true;
        }
        let exp: u32 = self.exp.clone().try_into().expect("small exponent");
        actual <= self.base.pow(exp)
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == BigUint::from(1u32) {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^{}", self.base, self.exp)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundRegime {
    WithoutJ,
    WithJ,
}

/// The four block bounds guaranteed by the normalization theorem, in the
/// regime matching the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub regime: BoundRegime,
    pub replicative: BoundValue,
    pub modal: BoundValue,
    pub decreasing_atomic: BoundValue,
    pub structural: BoundValue,
}

impl BoundReport {
    /// Check a normal shape against the bounds; returns the names of the
    /// violated blocks.
    pub fn violations(&self, shape: &NormalShape) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.replicative.admits(shape.replicative.len()) {
            out.push("replicative");
        }
        if !self.modal.admits(shape.modal.len()) {
            out.push("modal");
        }
        if !self
            .decreasing_atomic
            .admits(shape.decreasing.len() + shape.atomic.len())
        {
            out.push("decreasing+atomic");
        }
        if !self.structural.admits(shape.structural.len()) {
            out.push("structural");
        }
        out
    }
}

/// Bounds for a normalized form of `d`: the input length, the start-tree
/// metrics and the end-tree size determine them, together with the output
/// block lengths the modal bound refers to.
pub fn bounds_for_shape(d: &Derivation, sys: &System, shape: &NormalShape) -> BoundReport {
    let input_len = d.steps.len();
    let end_nodes = run(&d.start, &shape.concat())
        .map(|t| t.node_count())
        .unwrap_or(1);
    let structural = BoundValue::exact(end_nodes.saturating_sub(1));
    let two = BigUint::from(2u32);
    let delta_len = shape.decreasing.len();

    if !sys.j {
        BoundReport {
            regime: BoundRegime::WithoutJ,
            replicative: BoundValue::exact(input_len),
            modal: BoundValue::power(two.clone(), BigUint::from(delta_len + input_len)),
            decreasing_atomic: BoundValue::power(two, BigUint::from(input_len)),
            structural,
        }
    } else {
        let w = BigUint::from(d.start.width());
        let h = d.start.height();
        let one = BigUint::from(1u32);
        // (w+1)^((h+1)^(2|Omega|))
        let rep_exp = BigUint::from(h + 1).pow(2 * input_len as u32);
        let replicative = BoundValue::power(w.clone() + &one, rep_exp);
        // 2^(|delta| + 2|Omega| * (|rep| + w + 1)^h)
        let inner = (BigUint::from(shape.replicative.len()) + &w + &one).pow(h as u32);
        let modal_exp = BigUint::from(delta_len) + BigUint::from(2 * input_len) * inner;
        BoundReport {
            regime: BoundRegime::WithJ,
            replicative,
            modal: BoundValue::power(two.clone(), modal_exp),
            decreasing_atomic: BoundValue::power(two, BigUint::from(input_len)),
            structural,
        }
    }
}

/// Normalize `d` and report the theorem bounds its blocks satisfy.
pub fn theorem_bounds(
    d: &Derivation,
    sys: &System,
) -> Result<(NormalShape, BoundReport), NormalizeError> {
    let shape = normalize(d, sys)?;
    let report = bounds_for_shape(d, sys, &shape);
    Ok((shape, report))
}

#[cfg(test)]
mod tests;
