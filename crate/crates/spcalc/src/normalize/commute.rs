//! List-level commutations: each operation reorders one incoming step (or
//! a merge step against a duplication block) across an already-ordered
//! block, using the single-step swaps and validating the result by replay.

use crate::error::NormalizeError;
use crate::rules::{apply, RuleClass, RuleInstance, RuleKind};
use crate::tree::ModalTree;

use super::marked::{apply_marked, MarkSet, MarkedTree};
use super::swap;

fn run(t: &ModalTree, steps: &[RuleInstance]) -> Result<ModalTree, NormalizeError> {
    let mut cur = t.clone();
    for s in steps {
        cur = apply(&cur, s).map_err(|_| NormalizeError::ReplayMismatch)?;
    }
    Ok(cur)
}

fn validate_reorder(
    t: &ModalTree,
    original: &[RuleInstance],
    reordered: &[RuleInstance],
) -> Result<(), NormalizeError> {
    if run(t, original)? != run(t, reordered)? {
        return Err(NormalizeError::ReplayMismatch);
    }
    Ok(())
}

/// Trees before each step of `steps`, starting at `t` (length `steps + 1`).
fn prefix_trees(t: &ModalTree, steps: &[RuleInstance]) -> Result<Vec<ModalTree>, NormalizeError> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut cur = t.clone();
    out.push(cur.clone());
    for s in steps {
        cur = apply(&cur, s).map_err(|_| NormalizeError::ReplayMismatch)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// `pre_steps ++ [pi]` to `[pi'] ++ tail`: pull one duplication in front
/// of a block free of duplications and merges. Every crossed step yields
/// at most two successors, so `tail` is at most twice `pre_steps`.
pub fn commute_over_piplus(
    t: &ModalTree,
    pre_steps: &[RuleInstance],
    pi: &RuleInstance,
) -> Result<(RuleInstance, Vec<RuleInstance>), NormalizeError> {
    debug_assert!(pre_steps
        .iter()
        .all(|s| !matches!(s.kind(), RuleKind::PiPlus | RuleKind::J)));
    let trees = prefix_trees(t, pre_steps)?;
    let mut pi_cur = pi.clone();
    let mut tail: Vec<RuleInstance> = Vec::new();
    for idx in (0..pre_steps.len()).rev() {
        let swapped = swap::swap_then_piplus(&trees[idx], &pre_steps[idx], &pi_cur)?;
        let (head, rest) = swapped.split_first().ok_or(NormalizeError::ReplayMismatch)?;
        pi_cur = head.clone();
        let mut new_tail = rest.to_vec();
        new_tail.extend(tail);
        tail = new_tail;
    }
    let mut full = vec![pi_cur.clone()];
    full.extend(tail.iter().cloned());
    let mut original = pre_steps.to_vec();
    original.push(pi.clone());
    validate_reorder(t, &original, &full)?;
    Ok((pi_cur, tail))
}

/// `sig_steps ++ [mu]` to `[mu'] ++ sig_out` for a non-permutation `mu`.
/// For atom rules, transitivity and label lowering the block length is
/// preserved; elimination and merge steps may expand each crossed swap
/// into a chain bounded by the width of the tree.
pub fn commute_structural(
    t: &ModalTree,
    sig_steps: &[RuleInstance],
    mu: &RuleInstance,
) -> Result<(RuleInstance, Vec<RuleInstance>), NormalizeError> {
    let trees = prefix_trees(t, sig_steps)?;
    let mut mu_cur = mu.clone();
    let mut sig_out: Vec<RuleInstance> = Vec::new();
    for idx in (0..sig_steps.len()).rev() {
        let swapped = swap::swap_sigma_then(&trees[idx], &sig_steps[idx], &mu_cur)?;
        let (head, rest) = swapped.split_first().ok_or(NormalizeError::ReplayMismatch)?;
        mu_cur = head.clone();
        let mut new_out = rest.to_vec();
        new_out.extend(sig_out);
        sig_out = new_out;
    }
    let mut full = vec![mu_cur.clone()];
    full.extend(sig_out.iter().cloned());
    let mut original = sig_steps.to_vec();
    original.push(mu.clone());
    validate_reorder(t, &original, &full)?;
    Ok((mu_cur, sig_out))
}

/// `rho_steps ++ [mu]` to `[mu'] ++ rho_out` with `rho_out` no longer than
/// the input block: atom edits inside erased subtrees are dropped.
pub fn commute_atomic(
    t: &ModalTree,
    rho_steps: &[RuleInstance],
    mu: &RuleInstance,
) -> Result<(RuleInstance, Vec<RuleInstance>), NormalizeError> {
    let trees = prefix_trees(t, rho_steps)?;
    let mut mu_cur = mu.clone();
    let mut rho_out: Vec<RuleInstance> = Vec::new();
    for idx in (0..rho_steps.len()).rev() {
        let swapped = swap::swap_rho_then(&trees[idx], &rho_steps[idx], &mu_cur)?;
        let (head, rest) = swapped.split_first().ok_or(NormalizeError::ReplayMismatch)?;
        mu_cur = head.clone();
        let mut new_out = rest.to_vec();
        new_out.extend(rho_out);
        rho_out = new_out;
    }
    let mut full = vec![mu_cur.clone()];
    full.extend(rho_out.iter().cloned());
    let mut original = rho_steps.to_vec();
    original.push(mu.clone());
    validate_reorder(t, &original, &full)?;
    Ok((mu_cur, rho_out))
}

/// `delta_steps ++ [mu]` to `mu_list ++ delta_out` for a modal `mu`. Each
/// crossed transitivity step can double the modal steps, so the output
/// modal block is bounded by `2^|delta_steps|`; the decreasing block keeps
/// its length.
pub fn commute_decreasing(
    t: &ModalTree,
    delta_steps: &[RuleInstance],
    mu: &RuleInstance,
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let trees = prefix_trees(t, delta_steps)?;
    let mut mu_list = vec![mu.clone()];
    let mut delta_out: Vec<RuleInstance> = Vec::new();
    for idx in (0..delta_steps.len()).rev() {
        // Sequence here: [delta, mu_list..., delta_out...]. Push the delta
        // right through the whole current modal list.
        let mut cur_tree = trees[idx].clone();
        let mut delta_cur = delta_steps[idx].clone();
        let mut new_mus = Vec::new();
        for m in &mu_list {
            let swapped = swap::swap_decreasing_then_modal(&cur_tree, &delta_cur, m)?;
            let (last, mus) = swapped.split_last().ok_or(NormalizeError::ReplayMismatch)?;
            cur_tree = run(&cur_tree, mus)?;
            new_mus.extend(mus.to_vec());
            delta_cur = last.clone();
        }
        mu_list = new_mus;
        delta_out.insert(0, delta_cur);
    }
    let mut full = mu_list.clone();
    full.extend(delta_out.iter().cloned());
    let mut original = delta_steps.to_vec();
    original.push(mu.clone());
    validate_reorder(t, &original, &full)?;
    Ok((mu_list, delta_out))
}

/// `sigmas ++ steps` to `steps' ++ sigmas'`: push a permutation block to
/// the right of a block of non-permutation steps.
pub fn push_sigmas_right(
    t: &ModalTree,
    sigmas: &[RuleInstance],
    steps: &[RuleInstance],
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let mut out_steps = Vec::with_capacity(steps.len());
    let mut cur_sigmas = sigmas.to_vec();
    let mut cur_tree = t.clone();
    for s in steps {
        let (s2, next_sigmas) = commute_structural(&cur_tree, &cur_sigmas, s)?;
        cur_tree = apply(&cur_tree, &s2).map_err(|_| NormalizeError::ReplayMismatch)?;
        out_steps.push(s2);
        cur_sigmas = next_sigmas;
    }
    Ok((out_steps, cur_sigmas))
}

/// Occurrences of the upper and lower flags of `(t, j)` after replaying
/// `[j] ++ reps` on the marked tree.
fn flag_count(
    t: &ModalTree,
    j_step: &RuleInstance,
    reps: &[RuleInstance],
) -> Result<usize, NormalizeError> {
    let flags = super::jflags_unchecked(t, j_step).ok_or(NormalizeError::ReplayMismatch)?;
    let mut marked = MarkedTree::from_tree(t);
    marked.mark_at(&flags.internal, MarkSet::INTERNAL);
    marked.mark_at(&flags.upper, MarkSet::UPPER);
    marked.mark_at(&flags.lower, MarkSet::LOWER);
    marked = apply_marked(&marked, j_step).map_err(|_| NormalizeError::ReplayMismatch)?;
    for r in reps {
        marked = apply_marked(&marked, r).map_err(|_| NormalizeError::ReplayMismatch)?;
    }
    Ok(marked.count(MarkSet::UPPER) + marked.count(MarkSet::LOWER))
}

/// `[j_step] ++ rep_steps` to `(rep_out, j_out, sig_out)`. The recursion
/// follows the flag count: whenever a duplication copies a flagged node
/// the merge splits in two, each carrying strictly fewer flags, which
/// bounds `j_out` by two to the power of the flag count.
pub fn commute_j_over_replicatives(
    t: &ModalTree,
    j_step: &RuleInstance,
    rep_steps: &[RuleInstance],
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let out = j_over_reps(t, j_step, rep_steps, None)?;
    let mut full = out.0.clone();
    full.extend(out.1.iter().cloned());
    full.extend(out.2.iter().cloned());
    let mut original = vec![j_step.clone()];
    original.extend(rep_steps.iter().cloned());
    validate_reorder(t, &original, &full)?;
    Ok(out)
}

fn j_over_reps(
    t: &ModalTree,
    j_step: &RuleInstance,
    reps: &[RuleInstance],
    parent_flags: Option<usize>,
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let n = flag_count(t, j_step, reps)?;
    if let Some(parent) = parent_flags {
        if n >= parent {
            return Err(NormalizeError::FlagGuard { parent, child: n });
        }
    }
    let Some((first, rest)) = reps.split_first() else {
        return Ok((Vec::new(), vec![j_step.clone()], Vec::new()));
    };

    let parts = swap::swap_j_piplus(t, j_step, first)?;
    if parts.js.len() == 1 {
        debug_assert!(parts.sigmas.is_empty());
        let t1 = run(t, &parts.pis)?;
        let (mut rep_out, j_out, sig_out) = j_over_reps(&t1, &parts.js[0], rest, None)?;
        let mut pis = parts.pis;
        pis.append(&mut rep_out);
        return Ok((pis, j_out, sig_out));
    }

    // Two merges: sequence is pis, j1, j2, sigmas, rest.
    let j1 = parts.js[0].clone();
    let j2 = parts.js[1].clone();
    let t_before_j1 = run(t, &parts.pis)?;
    let t_before_j2 = apply(&t_before_j1, &j1).map_err(|_| NormalizeError::ReplayMismatch)?;
    let t_before_sig = apply(&t_before_j2, &j2).map_err(|_| NormalizeError::ReplayMismatch)?;

    // Move the mid permutations past the remaining duplications.
    let (rest2, sig_mid) = push_sigmas_right(&t_before_sig, &parts.sigmas, rest)?;

    // Recurse on the inner merge, then on the outer one.
    let (r2, js2, ss2) = j_over_reps(&t_before_j2, &j2, &rest2, Some(n))?;
    let (r1, js1, ss1) = j_over_reps(&t_before_j1, &j1, &r2, Some(n))?;

    // Move the permutations of the first recursion past the merges of the
    // second.
    let mut prefix = parts.pis.clone();
    prefix.extend(r1.iter().cloned());
    prefix.extend(js1.iter().cloned());
    let t_mid = run(t, &prefix)?;
    let (js2b, ss1b) = push_sigmas_right(&t_mid, &ss1, &js2)?;

    let mut rep_out = parts.pis;
    rep_out.extend(r1);
    let mut j_out = js1;
    j_out.extend(js2b);
    let mut sig_out = ss1b;
    sig_out.extend(ss2);
    sig_out.extend(sig_mid);
    Ok((rep_out, j_out, sig_out))
}

/// `[m_step] ++ rep_steps` to `(rep_out, m_list)`: the duplications keep
/// their count (arguments adjusted), the label lowerings double per
/// crossed duplication of the touched subtree.
pub fn commute_m_over_replicatives(
    t: &ModalTree,
    m_step: &RuleInstance,
    rep_steps: &[RuleInstance],
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let mut rep_out: Vec<RuleInstance> = Vec::new();
    let mut m_list = vec![m_step.clone()];
    let mut block_start = t.clone();
    for pi in rep_steps {
        // Sequence from block_start: m_list ++ [pi, ...]; pull pi left.
        let trees = prefix_trees(&block_start, &m_list)?;
        let mut pi_cur = pi.clone();
        let mut new_ms: Vec<RuleInstance> = Vec::new();
        for idx in (0..m_list.len()).rev() {
            let swapped = swap::swap_then_piplus(&trees[idx], &m_list[idx], &pi_cur)?;
            let (head, rest) = swapped.split_first().ok_or(NormalizeError::ReplayMismatch)?;
            pi_cur = head.clone();
            let mut tail = rest.to_vec();
            tail.extend(new_ms);
            new_ms = tail;
        }
        block_start = apply(&block_start, &pi_cur).map_err(|_| NormalizeError::ReplayMismatch)?;
        rep_out.push(pi_cur);
        m_list = new_ms;
    }
    let mut full = rep_out.clone();
    full.extend(m_list.iter().cloned());
    let mut original = vec![m_step.clone()];
    original.extend(rep_steps.iter().cloned());
    validate_reorder(t, &original, &full)?;
    Ok((rep_out, m_list))
}

/// `modal_steps ++ [pi]` to `(rep_out, modal_out, sig_out)`: pull one
/// duplication in front of a whole modal block.
pub fn commute_modal_block_over_piplus(
    t: &ModalTree,
    modal_steps: &[RuleInstance],
    pi: &RuleInstance,
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let out = modal_block_rec(t, modal_steps, pi)?;
    let mut full = out.0.clone();
    full.extend(out.1.iter().cloned());
    full.extend(out.2.iter().cloned());
    let mut original = modal_steps.to_vec();
    original.push(pi.clone());
    validate_reorder(t, &original, &full)?;
    Ok(out)
}

fn modal_block_rec(
    t: &ModalTree,
    modal_steps: &[RuleInstance],
    pi: &RuleInstance,
) -> Result<(Vec<RuleInstance>, Vec<RuleInstance>, Vec<RuleInstance>), NormalizeError> {
    let Some((theta, rest)) = modal_steps.split_first() else {
        return Ok((vec![pi.clone()], Vec::new(), Vec::new()));
    };
    debug_assert!(matches!(theta.class(), RuleClass::Modal));
    let t1 = apply(t, theta).map_err(|_| NormalizeError::ReplayMismatch)?;
    let (rep, mod2, sig) = modal_block_rec(&t1, rest, pi)?;
    match theta.kind() {
        RuleKind::M => {
            let (rep2, ms) = commute_m_over_replicatives(t, theta, &rep)?;
            let mut modal_out = ms;
            modal_out.extend(mod2);
            Ok((rep2, modal_out, sig))
        }
        RuleKind::J => {
            let (repj, jout, sigj) = j_over_reps(t, theta, &rep, None)?;
            // Sequence: repj, jout, sigj, mod2, sig.
            let mut prefix = repj.clone();
            prefix.extend(jout.iter().cloned());
            let t_mid = run(t, &prefix)?;
            let (mod2b, sigj2) = push_sigmas_right(&t_mid, &sigj, &mod2)?;
            let mut modal_out = jout;
            modal_out.extend(mod2b);
            let mut sig_out = sigj2;
            sig_out.extend(sig);
            Ok((repj, modal_out, sig_out))
        }
        _ => Err(NormalizeError::ReplayMismatch),
    }
}
