//! Single-step reorderings: given two adjacent steps, produce an
//! equivalent sequence with the kinds in the desired order. Every function
//! replays both the input pair and its output and fails loudly on any
//! divergence, so a wrong case here cannot corrupt a normalization.

use crate::error::NormalizeError;
use crate::rules::{apply, RuleInstance};
use crate::tree::{ModalTree, Position};

/// Relation between two positions.
enum Rel {
    Same,
    /// second = first ++ [branch] ++ rest
    SecondBelow { branch: usize, rest: Position },
    /// first = second ++ [branch] ++ rest
    FirstBelow { branch: usize, rest: Position },
    Disjoint,
}

fn relate(first: &Position, second: &Position) -> Rel {
    if first == second {
        return Rel::Same;
    }
    if let Some(rest) = second.strip_prefix(first) {
        let (branch, rest) = rest.split_first().expect("longer than prefix");
        return Rel::SecondBelow { branch, rest };
    }
    if let Some(rest) = first.strip_prefix(second) {
        let (branch, rest) = rest.split_first().expect("longer than prefix");
        return Rel::FirstBelow { branch, rest };
    }
    Rel::Disjoint
}

fn swap_preimage(x: usize, lo: usize, hi: usize) -> usize {
    if x == lo {
        hi
    } else if x == hi {
        lo
    } else {
        x
    }
}

/// Replay `steps` from `t`.
fn run(t: &ModalTree, steps: &[RuleInstance]) -> Result<ModalTree, NormalizeError> {
    let mut cur = t.clone();
    for s in steps {
        cur = apply(&cur, s).map_err(|_| NormalizeError::ReplayMismatch)?;
    }
    Ok(cur)
}

fn validated(
    t: &ModalTree,
    original: &[&RuleInstance],
    out: Vec<RuleInstance>,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let expect = {
        let steps: Vec<RuleInstance> = original.iter().map(|r| (*r).clone()).collect();
        run(t, &steps)?
    };
    if run(t, &out)? != expect {
        return Err(NormalizeError::ReplayMismatch);
    }
    Ok(out)
}

/// The trailing permutation chain needed when a swapped child is deleted:
/// after deleting directly (pre-swap index), the block between the two
/// swapped slots must be rotated by adjacent transpositions.
fn delete_after_swap_chain(
    pos: &Position,
    lo: usize,
    hi: usize,
    deleted: usize,
) -> Vec<RuleInstance> {
    let sig = |l: usize, r: usize| RuleInstance::Sigma { pos: pos.clone(), left: l, right: r };
    if deleted == lo {
        (lo..hi - 1).map(|k| sig(k, k + 1)).collect()
    } else if deleted == hi {
        (lo..hi - 1).rev().map(|k| sig(k, k + 1)).collect()
    } else {
        let lo2 = lo - usize::from(deleted < lo);
        let hi2 = hi - usize::from(deleted < hi);
        vec![sig(lo2, hi2)]
    }
}

/// `[sigma, mu]` to `[mu'] ++ sigmas` for any non-permutation `mu`.
/// The output keeps one permutation per input permutation except when the
/// later step erases or relocates a swapped child (a chain bounded by the
/// width appears) or erases the permuted subtree (the permutation drops).
pub(crate) fn swap_sigma_then(
    t: &ModalTree,
    sigma: &RuleInstance,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let RuleInstance::Sigma { pos: s, left, right } = sigma else {
        return Err(NormalizeError::ReplayMismatch);
    };
    let (lo, hi) = (*left.min(right), *left.max(right));
    let out = match relate(s, mu.pos()) {
        Rel::Disjoint => vec![mu.clone(), sigma.clone()],
        Rel::Same => swap_sigma_same_node(t, s, lo, hi, mu)?,
        // mu acts strictly below the permuted node: its path component
        // through the swap is renamed.
        Rel::SecondBelow { branch, rest } => {
            let pre = swap_preimage(branch, lo, hi);
            vec![
                mu.with_pos(s.push(pre).join(&rest)),
                sigma.clone(),
            ]
        }
        // The permutation happened strictly below mu's node.
        Rel::FirstBelow { branch, rest } => swap_sigma_below(s, branch, &rest, lo, hi, mu, t)?,
    };
    validated(t, &[sigma, mu], out)
}

fn swap_sigma_same_node(
    _t: &ModalTree,
    s: &Position,
    lo: usize,
    hi: usize,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let sigma = RuleInstance::Sigma { pos: s.clone(), left: lo, right: hi };
    Ok(match mu {
        RuleInstance::RhoPlus { .. } | RuleInstance::RhoMinus { .. } => {
            vec![mu.clone(), sigma]
        }
        RuleInstance::PiPlus { pos, child } => vec![
            RuleInstance::PiPlus { pos: pos.clone(), child: swap_preimage(*child, lo, hi) },
            RuleInstance::Sigma { pos: s.clone(), left: lo + 1, right: hi + 1 },
        ],
        RuleInstance::PiMinus { pos, child } => {
            let mut out = vec![RuleInstance::PiMinus {
                pos: pos.clone(),
                child: swap_preimage(*child, lo, hi),
            }];
            out.extend(delete_after_swap_chain(s, lo, hi, *child));
            out
        }
        RuleInstance::Four { pos, child } => vec![
            RuleInstance::Four { pos: pos.clone(), child: swap_preimage(*child, lo, hi) },
            sigma,
        ],
        RuleInstance::M { pos, child, new_label } => vec![
            RuleInstance::M {
                pos: pos.clone(),
                child: swap_preimage(*child, lo, hi),
                new_label: *new_label,
            },
            sigma,
        ],
        RuleInstance::J { pos, target, source } => {
            let mut out = vec![RuleInstance::J {
                pos: pos.clone(),
                target: swap_preimage(*target, lo, hi),
                source: swap_preimage(*source, lo, hi),
            }];
            out.extend(delete_after_swap_chain(s, lo, hi, *source));
            out
        }
        RuleInstance::Sigma { .. } => return Err(NormalizeError::ReplayMismatch),
    })
}

fn swap_sigma_below(
    s: &Position,
    branch: usize,
    rest: &Position,
    lo: usize,
    hi: usize,
    mu: &RuleInstance,
    t: &ModalTree,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    // s = mu.pos() ++ [branch] ++ rest
    let r = mu.pos();
    let sigma_at = |p: Position| RuleInstance::Sigma { pos: p, left: lo, right: hi };
    Ok(match mu {
        RuleInstance::RhoPlus { .. } | RuleInstance::RhoMinus { .. } => {
            vec![mu.clone(), sigma_at(s.clone())]
        }
        RuleInstance::PiPlus { child, .. } => {
            if *child == branch {
                vec![
                    mu.clone(),
                    sigma_at(r.push(1).join(rest)),
                    sigma_at(r.push(branch + 1).join(rest)),
                ]
            } else {
                vec![mu.clone(), sigma_at(r.push(branch + 1).join(rest))]
            }
        }
        RuleInstance::PiMinus { child, .. } => {
            if *child == branch {
                vec![mu.clone()]
            } else {
                let b = branch - usize::from(*child < branch);
                vec![mu.clone(), sigma_at(r.push(b).join(rest))]
            }
        }
        RuleInstance::Four { child, .. } => {
            if *child == branch {
                // Inside the collapsed subtree; its path drops the inner node.
                let (one, deeper) =
                    rest.split_first().ok_or(NormalizeError::ReplayMismatch)?;
                if one != 1 {
                    return Err(NormalizeError::ReplayMismatch);
                }
                vec![mu.clone(), sigma_at(r.push(branch).join(&deeper))]
            } else {
                vec![mu.clone(), sigma_at(s.clone())]
            }
        }
        RuleInstance::M { .. } => vec![mu.clone(), sigma_at(s.clone())],
        RuleInstance::J { target, source, .. } => {
            let shifted_target = target - usize::from(*source < *target);
            if branch == *target {
                vec![mu.clone(), sigma_at(r.push(shifted_target).join(rest))]
            } else if branch == *source {
                let absorber = t
                    .subtree(r)
                    .map_err(|_| NormalizeError::ReplayMismatch)?
                    .children
                    .get(*target - 1)
                    .ok_or(NormalizeError::ReplayMismatch)?;
                let g = absorber.1.children.len();
                vec![
                    mu.clone(),
                    sigma_at(r.push(shifted_target).push(g + 1).join(rest)),
                ]
            } else {
                let b = branch - usize::from(*source < branch);
                vec![mu.clone(), sigma_at(r.push(b).join(rest))]
            }
        }
        RuleInstance::Sigma { .. } => return Err(NormalizeError::ReplayMismatch),
    })
}

/// `[mu, pi]` to `[pi'] ++ mus` for `mu` among the atomic, structural,
/// decreasing and label-lowering rules. A step first applied inside the
/// subtree that is then duplicated must be repeated in both copies.
pub(crate) fn swap_then_piplus(
    t: &ModalTree,
    mu: &RuleInstance,
    pi: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    if let RuleInstance::Sigma { .. } = mu {
        // Same pair, already covered from the permutation side.
        return swap_sigma_then(t, mu, pi);
    }
    let RuleInstance::PiPlus { pos: l, child: c } = pi else {
        return Err(NormalizeError::ReplayMismatch);
    };
    let k = mu.pos();
    let out = match relate(k, l) {
        Rel::Disjoint => vec![pi.clone(), mu.clone()],
        Rel::Same => swap_piplus_same_node(k, *c, mu)?,
        // Duplication happens strictly below mu's node.
        Rel::SecondBelow { branch, rest } => match mu {
            RuleInstance::RhoPlus { .. } | RuleInstance::RhoMinus { .. } => {
                vec![pi.clone(), mu.clone()]
            }
            RuleInstance::PiMinus { child: n, .. } => {
                let b = branch + usize::from(branch >= *n);
                vec![
                    RuleInstance::PiPlus { pos: k.push(b).join(&rest), child: *c },
                    mu.clone(),
                ]
            }
            RuleInstance::Four { child: n, .. } => {
                if branch == *n {
                    vec![
                        RuleInstance::PiPlus {
                            pos: k.push(*n).push(1).join(&rest),
                            child: *c,
                        },
                        mu.clone(),
                    ]
                } else {
                    vec![pi.clone(), mu.clone()]
                }
            }
            RuleInstance::M { .. } => vec![pi.clone(), mu.clone()],
            _ => return Err(NormalizeError::ReplayMismatch),
        },
        // mu acted strictly inside the child that gets duplicated (or a
        // sibling of it).
        Rel::FirstBelow { branch, rest } => {
            if branch == *c {
                vec![
                    pi.clone(),
                    mu.with_pos(l.push(1).join(&rest)),
                    mu.with_pos(l.push(*c + 1).join(&rest)),
                ]
            } else {
                vec![pi.clone(), mu.with_pos(l.push(branch + 1).join(&rest))]
            }
        }
    };
    validated(t, &[mu, pi], out)
}

fn swap_piplus_same_node(
    k: &Position,
    c: usize,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let pi_at = |child: usize| RuleInstance::PiPlus { pos: k.clone(), child };
    Ok(match mu {
        RuleInstance::RhoPlus { .. } | RuleInstance::RhoMinus { .. } => {
            vec![pi_at(c), mu.clone()]
        }
        RuleInstance::PiMinus { child: n, .. } => {
            let c0 = if c < *n { c } else { c + 1 };
            vec![pi_at(c0), RuleInstance::PiMinus { pos: k.clone(), child: n + 1 }]
        }
        RuleInstance::Four { child: i, .. } => {
            if c == *i {
                vec![
                    pi_at(*i),
                    RuleInstance::Four { pos: k.clone(), child: 1 },
                    RuleInstance::Four { pos: k.clone(), child: i + 1 },
                ]
            } else {
                vec![pi_at(c), RuleInstance::Four { pos: k.clone(), child: i + 1 }]
            }
        }
        RuleInstance::M { child: i, new_label, .. } => {
            if c == *i {
                vec![
                    pi_at(*i),
                    RuleInstance::M { pos: k.clone(), child: 1, new_label: *new_label },
                    RuleInstance::M { pos: k.clone(), child: i + 1, new_label: *new_label },
                ]
            } else {
                vec![
                    pi_at(c),
                    RuleInstance::M { pos: k.clone(), child: i + 1, new_label: *new_label },
                ]
            }
        }
        _ => return Err(NormalizeError::ReplayMismatch),
    })
}

/// `[rho, mu]` to `[mu'] ++ rhos` for `mu` among the child-elimination,
/// transitivity, label-lowering and merge rules. Fails with the dedicated
/// obstruction error when an atom elimination manufactured the empty inner
/// node a transitivity step requires: that pair admits no reversal.
pub(crate) fn swap_rho_then(
    t: &ModalTree,
    rho: &RuleInstance,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    if !matches!(rho, RuleInstance::RhoPlus { .. } | RuleInstance::RhoMinus { .. }) {
        return Err(NormalizeError::ReplayMismatch);
    }
    let k = rho.pos();
    let r = mu.pos();
    let out = match relate(r, k) {
        Rel::Disjoint | Rel::Same => vec![mu.clone(), rho.clone()],
        // rho acted strictly below mu's node: remap its path through mu.
        Rel::SecondBelow { branch, rest } => match mu {
            RuleInstance::PiMinus { child: n, .. } => {
                if branch == *n {
                    vec![mu.clone()]
                } else {
                    let b = branch - usize::from(*n < branch);
                    vec![mu.clone(), rho.with_pos(r.push(b).join(&rest))]
                }
            }
            RuleInstance::Four { child: n, .. } => {
                if branch == *n {
                    match rest.split_first() {
                        None => {
                            // The atom rule edited the inner node itself.
                            return Err(NormalizeError::FourObstruction { pos: r.clone() });
                        }
                        Some((1, deeper)) => {
                            vec![mu.clone(), rho.with_pos(r.push(*n).join(&deeper))]
                        }
                        Some(_) => return Err(NormalizeError::ReplayMismatch),
                    }
                } else {
                    vec![mu.clone(), rho.clone()]
                }
            }
            RuleInstance::M { .. } => vec![mu.clone(), rho.clone()],
            RuleInstance::J { target, source, .. } => {
                let shifted_target = target - usize::from(*source < *target);
                if branch == *target {
                    vec![mu.clone(), rho.with_pos(r.push(shifted_target).join(&rest))]
                } else if branch == *source {
                    let g = absorber_children(t, r, *target)?;
                    vec![
                        mu.clone(),
                        rho.with_pos(r.push(shifted_target).push(g + 1).join(&rest)),
                    ]
                } else {
                    let b = branch - usize::from(*source < branch);
                    vec![mu.clone(), rho.with_pos(r.push(b).join(&rest))]
                }
            }
            _ => return Err(NormalizeError::ReplayMismatch),
        },
        // rho acted above mu: no interaction.
        Rel::FirstBelow { .. } => vec![mu.clone(), rho.clone()],
    };
    validated(t, &[rho, mu], out)
}

fn absorber_children(
    t: &ModalTree,
    node: &Position,
    target: usize,
) -> Result<usize, NormalizeError> {
    let sub = t.subtree(node).map_err(|_| NormalizeError::ReplayMismatch)?;
    Ok(sub
        .children
        .get(target - 1)
        .ok_or(NormalizeError::ReplayMismatch)?
        .1
        .children
        .len())
}

/// `[delta, mu]` to `mus ++ [delta']` for a decreasing `delta` and a modal
/// `mu`. A label lowering or a merge that touches the collapsed edge of a
/// transitivity step must be repeated on both stacked edges.
pub(crate) fn swap_decreasing_then_modal(
    t: &ModalTree,
    delta: &RuleInstance,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let out = match delta {
        RuleInstance::PiMinus { pos: k, child: n } => {
            swap_piminus_then_modal(t, k, *n, delta, mu)?
        }
        RuleInstance::Four { pos: k, child: n } => swap_four_then_modal(t, k, *n, delta, mu)?,
        _ => return Err(NormalizeError::ReplayMismatch),
    };
    validated(t, &[delta, mu], out)
}

fn swap_piminus_then_modal(
    t: &ModalTree,
    k: &Position,
    n: usize,
    delta: &RuleInstance,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let r = mu.pos();
    Ok(match relate(k, r) {
        Rel::Disjoint => vec![mu.clone(), delta.clone()],
        Rel::Same => match mu {
            RuleInstance::M { child: i, new_label, .. } => {
                let i0 = i + usize::from(*i >= n);
                vec![
                    RuleInstance::M { pos: k.clone(), child: i0, new_label: *new_label },
                    delta.clone(),
                ]
            }
            RuleInstance::J { target, source, .. } => {
                let i0 = target + usize::from(*target >= n);
                let j0 = source + usize::from(*source >= n);
                let n2 = n - usize::from(j0 < n);
                vec![
                    RuleInstance::J { pos: k.clone(), target: i0, source: j0 },
                    RuleInstance::PiMinus { pos: k.clone(), child: n2 },
                ]
            }
            _ => return Err(NormalizeError::ReplayMismatch),
        },
        // mu applies strictly below the eliminating node.
        Rel::SecondBelow { branch, rest } => {
            let b = branch + usize::from(branch >= n);
            vec![mu.with_pos(k.push(b).join(&rest)), delta.clone()]
        }
        // The elimination happened strictly below mu's node.
        Rel::FirstBelow { branch, rest } => match mu {
            RuleInstance::M { .. } => vec![mu.clone(), delta.clone()],
            RuleInstance::J { target, source, .. } => {
                let shifted_target = target - usize::from(*source < *target);
                if branch == *target {
                    vec![
                        mu.clone(),
                        RuleInstance::PiMinus {
                            pos: r.push(shifted_target).join(&rest),
                            child: n,
                        },
                    ]
                } else if branch == *source {
                    let g = absorber_children(t, r, *target)?;
                    vec![
                        mu.clone(),
                        RuleInstance::PiMinus {
                            pos: r.push(shifted_target).push(g + 1).join(&rest),
                            child: n,
                        },
                    ]
                } else {
                    let b = branch - usize::from(*source < branch);
                    vec![
                        mu.clone(),
                        RuleInstance::PiMinus { pos: r.push(b).join(&rest), child: n },
                    ]
                }
            }
            _ => return Err(NormalizeError::ReplayMismatch),
        },
    })
}

fn swap_four_then_modal(
    t: &ModalTree,
    k: &Position,
    n: usize,
    delta: &RuleInstance,
    mu: &RuleInstance,
) -> Result<Vec<RuleInstance>, NormalizeError> {
    let r = mu.pos();
    Ok(match relate(k, r) {
        Rel::Disjoint => vec![mu.clone(), delta.clone()],
        Rel::Same => match mu {
            RuleInstance::M { child: i, new_label, .. } => {
                if *i == n {
                    vec![
                        RuleInstance::M { pos: k.clone(), child: n, new_label: *new_label },
                        RuleInstance::M {
                            pos: k.push(n),
                            child: 1,
                            new_label: *new_label,
                        },
                        delta.clone(),
                    ]
                } else {
                    vec![mu.clone(), delta.clone()]
                }
            }
            RuleInstance::J { target, source, .. } => {
                if *target == n {
                    let n2 = n - usize::from(*source < n);
                    vec![
                        RuleInstance::J { pos: k.clone(), target: n, source: *source },
                        RuleInstance::J { pos: k.push(n2), target: 1, source: 2 },
                        RuleInstance::Four { pos: k.clone(), child: n2 },
                    ]
                } else if *source == n {
                    let g = absorber_children(t, k, *target)?;
                    let shifted_target = target - usize::from(n < *target);
                    vec![
                        RuleInstance::J { pos: k.clone(), target: *target, source: n },
                        RuleInstance::Four { pos: k.push(shifted_target), child: g + 1 },
                    ]
                } else {
                    let n2 = n - usize::from(*source < n);
                    vec![
                        mu.clone(),
                        RuleInstance::Four { pos: k.clone(), child: n2 },
                    ]
                }
            }
            _ => return Err(NormalizeError::ReplayMismatch),
        },
        // mu applies strictly below the collapsing node.
        Rel::SecondBelow { branch, rest } => {
            if branch == n {
                vec![mu.with_pos(k.push(n).push(1).join(&rest)), delta.clone()]
            } else {
                vec![mu.clone(), delta.clone()]
            }
        }
        // The collapse happened strictly below mu's node.
        Rel::FirstBelow { branch, rest } => match mu {
            RuleInstance::M { .. } => vec![mu.clone(), delta.clone()],
            RuleInstance::J { target, source, .. } => {
                let shifted_target = target - usize::from(*source < *target);
                if branch == *target {
                    vec![
                        mu.clone(),
                        RuleInstance::Four {
                            pos: r.push(shifted_target).join(&rest),
                            child: n,
                        },
                    ]
                } else if branch == *source {
                    let g = absorber_children(t, r, *target)?;
                    vec![
                        mu.clone(),
                        RuleInstance::Four {
                            pos: r.push(shifted_target).push(g + 1).join(&rest),
                            child: n,
                        },
                    ]
                } else {
                    let b = branch - usize::from(*source < branch);
                    vec![
                        mu.clone(),
                        RuleInstance::Four { pos: r.push(b).join(&rest), child: n },
                    ]
                }
            }
            _ => return Err(NormalizeError::ReplayMismatch),
        },
    })
}

/// Result of pulling a duplication in front of a merge step: a prefix of
/// duplications, one or two merge steps, and a trailing permutation chain.
pub(crate) struct JPiParts {
    pub pis: Vec<RuleInstance>,
    pub js: Vec<RuleInstance>,
    pub sigmas: Vec<RuleInstance>,
}

/// `[j, pi]` to duplications, then merges, then permutations. Two merges
/// appear exactly when the duplication copies a node the merge touched
/// (the merged child, the moved child, or an enclosing subtree).
pub(crate) fn swap_j_piplus(
    t: &ModalTree,
    j_step: &RuleInstance,
    pi: &RuleInstance,
) -> Result<JPiParts, NormalizeError> {
    let RuleInstance::J { pos: k, target: i, source: j } = j_step else {
        return Err(NormalizeError::ReplayMismatch);
    };
    let RuleInstance::PiPlus { pos: l, child: c } = pi else {
        return Err(NormalizeError::ReplayMismatch);
    };
    let merged_index = i - usize::from(j < i);
    let g = absorber_children(t, k, *i)?;

    let parts = match relate(k, l) {
        Rel::Disjoint => JPiParts {
            pis: vec![pi.clone()],
            js: vec![j_step.clone()],
            sigmas: vec![],
        },
        // Duplication above the merge: the merge doubles when the copied
        // child contains it.
        Rel::FirstBelow { branch, rest } => {
            // k = l ++ [branch] ++ rest
            if branch == *c {
                JPiParts {
                    pis: vec![pi.clone()],
                    js: vec![
                        j_step.with_pos(l.push(1).join(&rest)),
                        j_step.with_pos(l.push(*c + 1).join(&rest)),
                    ],
                    sigmas: vec![],
                }
            } else {
                JPiParts {
                    pis: vec![pi.clone()],
                    js: vec![j_step.with_pos(l.push(branch + 1).join(&rest))],
                    sigmas: vec![],
                }
            }
        }
        Rel::Same => {
            if *c == merged_index {
                // Duplicating the merged child copies both touched nodes.
                JPiParts {
                    pis: vec![
                        RuleInstance::PiPlus { pos: k.clone(), child: *i },
                        RuleInstance::PiPlus { pos: k.clone(), child: j + 1 },
                    ],
                    js: vec![
                        RuleInstance::J { pos: k.clone(), target: 2, source: 1 },
                        RuleInstance::J { pos: k.clone(), target: i + 1, source: j + 1 },
                    ],
                    sigmas: vec![],
                }
            } else {
                let c0 = if *c < *j { *c } else { c + 1 };
                JPiParts {
                    pis: vec![RuleInstance::PiPlus { pos: k.clone(), child: c0 }],
                    js: vec![RuleInstance::J {
                        pos: k.clone(),
                        target: i + 1,
                        source: j + 1,
                    }],
                    sigmas: vec![],
                }
            }
        }
        Rel::SecondBelow { branch, rest } => {
            // l = k ++ [branch] ++ rest
            if branch == merged_index {
                match rest.split_first() {
                    None => {
                        if *c <= g {
                            // A child the absorber already had.
                            JPiParts {
                                pis: vec![RuleInstance::PiPlus { pos: k.push(*i), child: *c }],
                                js: vec![j_step.clone()],
                                sigmas: vec![],
                            }
                        } else if *c == g + 1 {
                            // Duplicating the moved child.
                            let rotation = (1..=g)
                                .rev()
                                .map(|x| RuleInstance::Sigma {
                                    pos: k.push(merged_index),
                                    left: x,
                                    right: x + 1,
                                })
                                .collect();
                            JPiParts {
                                pis: vec![RuleInstance::PiPlus { pos: k.clone(), child: *j }],
                                js: vec![
                                    RuleInstance::J { pos: k.clone(), target: i + 1, source: 1 },
                                    RuleInstance::J { pos: k.clone(), target: *i, source: *j },
                                ],
                                sigmas: rotation,
                            }
                        } else {
                            return Err(NormalizeError::ReplayMismatch);
                        }
                    }
                    Some((e, deeper)) if e <= g => JPiParts {
                        pis: vec![pi.with_pos(k.push(*i).push(e).join(&deeper))],
                        js: vec![j_step.clone()],
                        sigmas: vec![],
                    },
                    Some((e, deeper)) if e == g + 1 => JPiParts {
                        pis: vec![pi.with_pos(k.push(*j).join(&deeper))],
                        js: vec![j_step.clone()],
                        sigmas: vec![],
                    },
                    Some(_) => return Err(NormalizeError::ReplayMismatch),
                }
            } else {
                let b = branch + usize::from(branch >= *j);
                JPiParts {
                    pis: vec![pi.with_pos(k.push(b).join(&rest))],
                    js: vec![j_step.clone()],
                    sigmas: vec![],
                }
            }
        }
    };

    let mut out = parts.pis.clone();
    out.extend(parts.js.iter().cloned());
    out.extend(parts.sigmas.iter().cloned());
    validated(t, &[j_step, pi], out)?;
    Ok(parts)
}
