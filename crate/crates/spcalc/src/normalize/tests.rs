use super::*;
use crate::calculus::replay;
use crate::corpus::{random_derivation, random_tree_with_nodes, TreeShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn leaf(atoms: &[&str]) -> ModalTree {
    ModalTree::leaf(atoms.iter().map(|s| s.to_string()).collect())
}

fn node(children: Vec<(u64, ModalTree)>) -> ModalTree {
    ModalTree::new(Vec::new(), children)
}

fn pos(v: &[usize]) -> Position {
    Position(v.to_vec())
}

fn rho_plus(p: &[usize], atom: usize) -> RuleInstance {
    RuleInstance::RhoPlus { pos: pos(p), atom }
}

fn rho_minus(p: &[usize], atom: usize) -> RuleInstance {
    RuleInstance::RhoMinus { pos: pos(p), atom }
}

fn sigma(p: &[usize], left: usize, right: usize) -> RuleInstance {
    RuleInstance::Sigma { pos: pos(p), left, right }
}

fn pi_plus(p: &[usize], child: usize) -> RuleInstance {
    RuleInstance::PiPlus { pos: pos(p), child }
}

fn pi_minus(p: &[usize], child: usize) -> RuleInstance {
    RuleInstance::PiMinus { pos: pos(p), child }
}

fn four(p: &[usize], child: usize) -> RuleInstance {
    RuleInstance::Four { pos: pos(p), child }
}

fn m_rule(p: &[usize], child: usize, new_label: u64) -> RuleInstance {
    RuleInstance::M { pos: pos(p), child, new_label }
}

fn j_rule(p: &[usize], target: usize, source: usize) -> RuleInstance {
    RuleInstance::J { pos: pos(p), target, source }
}

#[test]
fn is_normal_examples() {
    assert!(is_normal(&[
        pi_plus(&[], 1),
        j_rule(&[], 1, 2),
        four(&[], 1),
        rho_minus(&[], 1),
        sigma(&[], 1, 2),
    ]));
    assert!(!is_normal(&[rho_plus(&[], 1), pi_plus(&[], 1)]));
    assert!(is_normal(&[]));
}

#[test]
fn jflag_examples() {
    let a = leaf(&["a"]);
    let b = leaf(&["b"]);
    let t = node(vec![(1, a.clone()), (0, b.clone())]);
    let flags = jflags(&t, &j_rule(&[], 1, 2)).unwrap();
    assert_eq!(flags.internal, pos(&[]));
    assert_eq!(flags.upper, pos(&[1]));
    assert_eq!(flags.lower, pos(&[2]));

    let deep = node(vec![(0, node(vec![(1, a), (0, b)]))]);
    let flags = jflags(&deep, &j_rule(&[1], 1, 2)).unwrap();
    assert_eq!(flags.internal, pos(&[1]));
    assert_eq!(flags.upper, pos(&[1, 1]));
    assert_eq!(flags.lower, pos(&[1, 2]));
}

#[test]
fn commute_over_piplus_duplicated_subtree() {
    // An atom edit inside a child that is then duplicated repeats in both
    // copies.
    let t = node(vec![(0, leaf(&["p"]))]);
    let (pi, tail) = commute_over_piplus(&t, &[rho_plus(&[1], 1)], &pi_plus(&[], 1)).unwrap();
    assert_eq!(pi, pi_plus(&[], 1));
    assert_eq!(tail, vec![rho_plus(&[1], 1), rho_plus(&[2], 1)]);
}

#[test]
fn commute_over_piplus_disjoint() {
    let t = node(vec![(0, leaf(&["p"]))]);
    let mut start = t.clone();
    start.atoms.push("q".into());
    let (pi, tail) =
        commute_over_piplus(&start, &[rho_plus(&[], 1)], &pi_plus(&[], 1)).unwrap();
    assert_eq!(pi, pi_plus(&[], 1));
    assert_eq!(tail, vec![rho_plus(&[], 1)]);
}

#[test]
fn commute_structural_erase_permuted_child() {
    // Seven children; swap 2 and 6, then erase child 2: reversing needs
    // the adjacent chain after erasing child 6 directly.
    let t = node((0..7).map(|i| (i as u64, leaf(&[]))).collect());
    let (mu, sig) = commute_structural(&t, &[sigma(&[], 2, 6)], &pi_minus(&[], 2)).unwrap();
    assert_eq!(mu, pi_minus(&[], 6));
    assert_eq!(sig, vec![sigma(&[], 2, 3), sigma(&[], 3, 4), sigma(&[], 4, 5)]);
}

#[test]
fn commute_structural_disjoint() {
    let t = node(vec![
        (1, node(vec![(0, leaf(&["a"])), (0, leaf(&["b"]))])),
        (0, leaf(&[])),
    ]);
    let (mu, sig) = commute_structural(&t, &[sigma(&[1], 1, 2)], &m_rule(&[], 1, 0)).unwrap();
    assert_eq!(mu, m_rule(&[], 1, 0));
    assert_eq!(sig, vec![sigma(&[1], 1, 2)]);
}

#[test]
fn commute_atomic_erased_edit_drops() {
    let t = node(vec![(0, leaf(&["p"]))]);
    let (mu, rhos) = commute_atomic(&t, &[rho_plus(&[1], 1)], &pi_minus(&[], 1)).unwrap();
    assert_eq!(mu, pi_minus(&[], 1));
    assert!(rhos.is_empty());
}

#[test]
fn commute_atomic_label_rules_pass_through() {
    let t = ModalTree::new(vec!["x".into()], vec![(1, leaf(&["y"]))]);
    let (mu, rhos) = commute_atomic(&t, &[rho_minus(&[], 1)], &m_rule(&[], 1, 0)).unwrap();
    assert_eq!(mu, m_rule(&[], 1, 0));
    assert_eq!(rhos, vec![rho_minus(&[], 1)]);
}

#[test]
fn commute_decreasing_four_then_m() {
    // Collapsing a doubled edge and then lowering its label reverses into
    // two lowerings followed by the collapse.
    let t = node(vec![(2, node(vec![(2, leaf(&[]))]))]);
    let (ms, deltas) = commute_decreasing(&t, &[four(&[], 1)], &m_rule(&[], 1, 0)).unwrap();
    assert_eq!(ms, vec![m_rule(&[], 1, 0), m_rule(&[1], 1, 0)]);
    assert_eq!(deltas, vec![four(&[], 1)]);
}

#[test]
fn commute_decreasing_four_then_j() {
    let t = node(vec![(2, node(vec![(2, leaf(&["s"]))])), (0, leaf(&["x"]))]);
    let (ms, deltas) = commute_decreasing(&t, &[four(&[], 1)], &j_rule(&[], 1, 2)).unwrap();
    assert_eq!(ms.len(), 2);
    assert!(ms.iter().all(|s| s.kind() == RuleKind::J));
    assert_eq!(deltas.len(), 1);
    assert_eq!(deltas[0].kind(), RuleKind::Four);
}

#[test]
fn commute_decreasing_piminus_then_m() {
    let t = node(vec![(1, leaf(&["a"])), (0, leaf(&["b"]))]);
    let (ms, deltas) = commute_decreasing(&t, &[pi_minus(&[], 2)], &m_rule(&[], 1, 0)).unwrap();
    assert_eq!(ms, vec![m_rule(&[], 1, 0)]);
    assert_eq!(deltas, vec![pi_minus(&[], 2)]);
}

#[test]
fn j_then_piplus_duplicating_upper_flag() {
    // Duplicating the merged child needs two extra duplications and merges.
    let t = node(vec![(1, leaf(&["a"])), (0, leaf(&["b"]))]);
    let (reps, js, sigs) =
        commute_j_over_replicatives(&t, &j_rule(&[], 1, 2), &[pi_plus(&[], 1)]).unwrap();
    assert_eq!(reps.len(), 2);
    assert!(reps.iter().all(|s| s.kind() == RuleKind::PiPlus));
    assert_eq!(js.len(), 2);
    assert!(sigs.is_empty());
}

#[test]
fn j_then_piplus_duplicating_lower_flag() {
    // The merged node has its own child, so duplicating the moved child
    // afterwards needs a trailing permutation.
    let absorber = node(vec![(0, leaf(&["g"]))]);
    let t = node(vec![(1, absorber), (0, leaf(&["b"]))]);
    // After the merge the absorber's children are [g-child, moved]; its
    // index 2 is the moved child.
    let (reps, js, sigs) =
        commute_j_over_replicatives(&t, &j_rule(&[], 1, 2), &[pi_plus(&[1], 2)]).unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(js.len(), 2);
    assert_eq!(sigs.len(), 1);
}

#[test]
fn j_then_disjoint_piplus() {
    let t = node(vec![(1, leaf(&["a"])), (0, leaf(&["b"])), (2, leaf(&["c"]))]);
    let (reps, js, sigs) =
        commute_j_over_replicatives(&t, &j_rule(&[], 1, 2), &[pi_plus(&[], 2)]).unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(js, vec![j_rule(&[], 2, 3)]);
    assert!(sigs.is_empty());
}

#[test]
fn m_over_replicatives_doubling() {
    // Lowering inside a child and then duplicating that child doubles the
    // lowering.
    let t = node(vec![(0, node(vec![(1, leaf(&[]))]))]);
    let (reps, ms) =
        commute_m_over_replicatives(&t, &m_rule(&[1], 1, 0), &[pi_plus(&[], 1)]).unwrap();
    assert_eq!(reps, vec![pi_plus(&[], 1)]);
    assert_eq!(ms, vec![m_rule(&[1], 1, 0), m_rule(&[2], 1, 0)]);
}

#[test]
fn m_over_replicatives_disjoint() {
    let t = node(vec![(1, leaf(&["a"])), (0, leaf(&["b"]))]);
    let (reps, ms) =
        commute_m_over_replicatives(&t, &m_rule(&[], 1, 0), &[pi_plus(&[], 2)]).unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(ms.len(), 1);
}

#[test]
fn modal_block_over_piplus_cases() {
    let t = node(vec![(1, leaf(&["a"]))]);
    let (reps, modal, sigs) =
        commute_modal_block_over_piplus(&t, &[], &pi_plus(&[], 1)).unwrap();
    assert_eq!(reps, vec![pi_plus(&[], 1)]);
    assert!(modal.is_empty() && sigs.is_empty());

    let (reps, modal, sigs) =
        commute_modal_block_over_piplus(&t, &[m_rule(&[], 1, 0)], &pi_plus(&[], 1)).unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(modal.len(), 2);
    assert!(sigs.is_empty());
}

#[test]
fn normalize_example() {
    let t = node(vec![(0, leaf(&["p"]))]);
    let d = Derivation::new(t, vec![rho_plus(&[1], 1), pi_plus(&[], 1)]);
    let shape = normalize(&d, &System::K_PLUS).unwrap();
    assert_eq!(shape.replicative, vec![pi_plus(&[], 1)]);
    assert_eq!(shape.atomic, vec![rho_plus(&[1], 1), rho_plus(&[2], 1)]);
    assert!(shape.modal.is_empty());
    assert!(shape.decreasing.is_empty());
    assert!(shape.structural.is_empty());
}

#[test]
fn normalize_keeps_normal_input() {
    let t = node(vec![(0, leaf(&["p"])), (1, leaf(&[]))]);
    let steps = vec![pi_plus(&[], 1), pi_minus(&[], 3), rho_minus(&[2], 1), sigma(&[], 1, 2)];
    let d = Derivation::new(t, steps.clone());
    let shape = normalize(&d, &System::RC).unwrap();
    assert_eq!(shape.concat(), steps);
}

#[test]
fn normalize_random_endpoint_preservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let systems = [
        System::K_PLUS,
        System::K4_PLUS,
        System::RC,
        System { four: false, m: true, j: false },
        System { four: false, m: false, j: true },
    ];
    for sys in systems {
        let mut normalized = 0;
        for _ in 0..120 {
            let start = random_tree_with_nodes(&mut rng, &TreeShape::default(), 6);
            let d = random_derivation(&mut rng, start, &sys, 6, 40);
            let end = check(&d, &sys).unwrap();
            match normalize(&d, &sys) {
                Ok(shape) => {
                    normalized += 1;
                    assert!(is_normal(&shape.concat()));
                    assert_eq!(replay(&d.start, &shape.concat()).unwrap(), end);
                    let report = bounds_for_shape(&d, &sys, &shape);
                    assert!(
                        report.violations(&shape).is_empty(),
                        "bounds violated for {d:?}"
                    );
                }
                Err(NormalizeError::FourObstruction { .. }) => {}
                Err(other) => panic!("unexpected normalize failure: {other} on {d:?}"),
            }
        }
        assert!(normalized > 90, "{sys}: too few normalizations ({normalized})");
    }
}

#[test]
fn obstructed_pair_with_reachable_endpoint_falls_back() {
    // Remove the atom guarding an inner node, then collapse it. The
    // endpoint is still reachable normally because the grandchild is a
    // plain leaf.
    let t = node(vec![(0, ModalTree::new(vec!["p".into()], vec![(0, leaf(&[]))]))]);
    let d = Derivation::new(t, vec![rho_minus(&[1], 1), four(&[], 1)]);
    let shape = normalize(&d, &System::K4_PLUS).unwrap();
    let end = check(&d, &System::K4_PLUS).unwrap();
    assert!(is_normal(&shape.concat()));
    assert_eq!(replay(&d.start, &shape.concat()).unwrap(), end);
}

#[test]
fn obstructed_pair_with_unreachable_endpoint_reports() {
    // Same pattern, but the guarded inner node hides a distinct atom: no
    // normal sequence reaches the endpoint at all (the atom block comes
    // after every transitivity step, yet the collapse needs it first).
    let q_node = leaf(&["q"]);
    let t = node(vec![(
        0,
        ModalTree::new(vec!["p".into()], vec![(0, q_node)]),
    )]);
    let d = Derivation::new(t, vec![rho_minus(&[1], 1), four(&[], 1)]);
    match normalize(&d, &System::K4_PLUS) {
        Err(NormalizeError::FourObstruction { .. }) => {}
        other => panic!("expected the obstruction report, got {other:?}"),
    }
}

#[test]
fn bound_report_examples() {
    // Three steps, no merge rule, end tree of four nodes.
    let t = node(vec![(0, leaf(&[])), (1, leaf(&[])), (2, leaf(&[]))]);
    let d = Derivation::new(
        t,
        vec![sigma(&[], 1, 2), sigma(&[], 2, 3), sigma(&[], 1, 3)],
    );
    let (shape, report) = theorem_bounds(&d, &System::K_PLUS).unwrap();
    assert_eq!(report.regime, BoundRegime::WithoutJ);
    assert!(report.replicative.admits(3));
    assert!(!report.replicative.admits(4));
    assert!(report.decreasing_atomic.admits(8));
    assert!(!report.decreasing_atomic.admits(9));
    assert!(report.structural.admits(3));
    assert!(!report.structural.admits(4));
    assert!(report.violations(&shape).is_empty());

    // Empty derivation.
    let d0 = Derivation::new(leaf(&["p"]), vec![]);
    let (shape0, report0) = theorem_bounds(&d0, &System::K_PLUS).unwrap();
    assert!(shape0.is_empty());
    assert!(report0.replicative.admits(0) && !report0.replicative.admits(1));
    assert!(report0.modal.admits(1) && !report0.modal.admits(2));
    assert!(report0.decreasing_atomic.admits(1));

    // Merge regime substitution: width 1, height 1, one step.
    let t1 = node(vec![(1, leaf(&[]))]);
    let d1 = Derivation::new(t1, vec![m_rule(&[], 1, 0)]);
    let (_, report1) = theorem_bounds(&d1, &System::RC).unwrap();
    assert_eq!(report1.regime, BoundRegime::WithJ);
    assert!(report1.replicative.admits(16));
    assert!(!report1.replicative.admits(17));
}

#[test]
fn bound_value_large_exponents() {
    let b = BoundValue::power(BigUint::from(3u32), BigUint::from(10_000u32));
    assert!(b.admits(usize::MAX));
    let small = BoundValue::power(BigUint::from(2u32), BigUint::from(3u32));
    assert!(small.admits(8));
    assert!(!small.admits(9));
    assert_eq!(BoundValue::exact(5).to_string(), "5");
    assert_eq!(small.to_string(), "2^3");
}

#[test]
fn tiny_scale_matches_bounded_search() {
    // Every constructive normalization endpoint is also reached by the
    // bounded normal-order search at this scale.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..60 {
        let start = random_tree_with_nodes(&mut rng, &TreeShape::default(), 4);
        let d = random_derivation(&mut rng, start, &System::RC, 3, 16);
        let end = check(&d, &System::RC).unwrap();
        let caps = search::SearchCaps {
            max_steps: 10,
            max_nodes: 12,
            max_size: 24,
            max_states: 200_000,
        };
        let found = search::find_normal_sequence(&d.start, &end, &System::RC, &caps);
        match normalize(&d, &System::RC) {
            Ok(shape) => {
                assert_eq!(replay(&d.start, &shape.concat()).unwrap(), end);
                if shape.len() <= caps.max_steps {
                    assert!(found.is_some(), "search missed a normal witness for {d:?}");
                }
            }
            Err(NormalizeError::FourObstruction { .. }) => {
                assert!(found.is_none(), "normalize gave up on a reachable endpoint: {d:?}");
            }
            Err(other) => panic!("unexpected failure {other}"),
        }
    }
}
