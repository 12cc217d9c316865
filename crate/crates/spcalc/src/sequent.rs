//! Sequent-style proofs and their translation into rewrite derivations.
//!
//! A proof tree uses the axioms and rules of the sequent presentation:
//! identity, weakening to verum, cut, the two conjunct projections,
//! conjunction introduction, distribution under a diamond, and the three
//! optional axioms. Translating a proof of `phi |- psi` yields a
//! derivation from the tree of `phi` that replays to the tree of `psi`.

use serde::{Deserialize, Serialize};

use crate::calculus::{sums, Derivation, System};
use crate::embed::to_tree;
use crate::error::SequentError;
use crate::formula::{Formula, Label, Sequent};
use crate::rules::{lift, RuleInstance};
use crate::tree::Position;

/// A node of a sequent proof. `conclusion` is checked against the rule
/// during translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequentProof {
    /// `phi |- phi`
    Id { formula: Formula },
    /// `phi |- T`
    Top { formula: Formula },
    /// from `phi |- psi` and `psi |- chi`, infer `phi |- chi`
    Cut { left: Box<SequentProof>, right: Box<SequentProof> },
    /// `phi & psi |- phi`
    AndElim1 { left: Formula, right: Formula },
    /// `phi & psi |- psi`
    AndElim2 { left: Formula, right: Formula },
    /// from `phi |- psi` and `phi |- chi`, infer `phi |- psi & chi`
    AndIntro { left: Box<SequentProof>, right: Box<SequentProof> },
    /// from `phi |- psi`, infer `<a> phi |- <a> psi`
    Dist { label: Label, premise: Box<SequentProof> },
    /// `<a><a> phi |- <a> phi`
    Four { label: Label, formula: Formula },
    /// `<a> phi |- <b> phi` for `a > b`
    Mono { from: Label, to: Label, formula: Formula },
    /// `<a> phi & <b> psi |- <a>(phi & <b> psi)` for `a > b`
    Jax { upper: Label, lower: Label, left: Formula, right: Formula },
}

impl SequentProof {
    /// The sequent this proof establishes.
    pub fn conclusion(&self) -> Result<Sequent, SequentError> {
        match self {
            SequentProof::Id { formula } => {
                Ok(Sequent { lhs: formula.clone(), rhs: formula.clone() })
            }
            SequentProof::Top { formula } => {
                Ok(Sequent { lhs: formula.clone(), rhs: Formula::Top })
            }
            SequentProof::Cut { left, right } => {
                let l = left.conclusion()?;
                let r = right.conclusion()?;
                if l.rhs != r.lhs {
                    return Err(SequentError::Malformed(
                        "cut".into(),
                        format!("premises do not meet: {} vs {}", l.rhs, r.lhs),
                    ));
                }
                Ok(Sequent { lhs: l.lhs, rhs: r.rhs })
            }
            SequentProof::AndElim1 { left, right } => Ok(Sequent {
                lhs: Formula::and(left.clone(), right.clone()),
                rhs: left.clone(),
            }),
            SequentProof::AndElim2 { left, right } => Ok(Sequent {
                lhs: Formula::and(left.clone(), right.clone()),
                rhs: right.clone(),
            }),
            SequentProof::AndIntro { left, right } => {
                let l = left.conclusion()?;
                let r = right.conclusion()?;
                if l.lhs != r.lhs {
                    return Err(SequentError::Malformed(
                        "and-intro".into(),
                        "premises have different antecedents".into(),
                    ));
                }
                Ok(Sequent { lhs: l.lhs, rhs: Formula::and(l.rhs, r.rhs) })
            }
            SequentProof::Dist { label, premise } => {
                let p = premise.conclusion()?;
                Ok(Sequent {
                    lhs: Formula::dia(*label, p.lhs),
                    rhs: Formula::dia(*label, p.rhs),
                })
            }
            SequentProof::Four { label, formula } => Ok(Sequent {
                lhs: Formula::dia(*label, Formula::dia(*label, formula.clone())),
                rhs: Formula::dia(*label, formula.clone()),
            }),
            SequentProof::Mono { from, to, formula } => {
                if from <= to {
                    return Err(SequentError::Malformed(
                        "m".into(),
                        format!("label {to} is not below {from}"),
                    ));
                }
                Ok(Sequent {
                    lhs: Formula::dia(*from, formula.clone()),
                    rhs: Formula::dia(*to, formula.clone()),
                })
            }
            SequentProof::Jax { upper, lower, left, right } => {
                if upper <= lower {
                    return Err(SequentError::Malformed(
                        "j".into(),
                        format!("label {lower} is not below {upper}"),
                    ));
                }
                let moved = Formula::dia(*lower, right.clone());
                Ok(Sequent {
                    lhs: Formula::and(Formula::dia(*upper, left.clone()), moved.clone()),
                    rhs: Formula::dia(*upper, Formula::and(left.clone(), moved)),
                })
            }
        }
    }

    fn rule_name(&self) -> &'static str {
        match self {
            SequentProof::Id { .. } => "id",
            SequentProof::Top { .. } => "top",
            SequentProof::Cut { .. } => "cut",
            SequentProof::AndElim1 { .. } => "and-elim-1",
            SequentProof::AndElim2 { .. } => "and-elim-2",
            SequentProof::AndIntro { .. } => "and-intro",
            SequentProof::Dist { .. } => "dist",
            SequentProof::Four { .. } => "four",
            SequentProof::Mono { .. } => "m",
            SequentProof::Jax { .. } => "j",
        }
    }
}

/// Steps taking an arbitrary tree to the empty tree: drop children, then
/// atoms, right to left.
fn eliminate_all(t: &crate::tree::ModalTree) -> Vec<RuleInstance> {
    let mut steps = Vec::new();
    for k in (1..=t.children.len()).rev() {
        steps.push(RuleInstance::PiMinus { pos: Position::root(), child: k });
    }
    for k in (1..=t.atoms.len()).rev() {
        steps.push(RuleInstance::RhoMinus { pos: Position::root(), atom: k });
    }
    steps
}

/// Translate a sequent proof into a rewrite derivation under `sys`,
/// following the inductive clauses of the completeness argument.
pub fn translate(proof: &SequentProof, sys: &System) -> Result<Derivation, SequentError> {
    let conclusion = proof.conclusion()?;
    let steps = translate_steps(proof, sys)?;
    let d = Derivation::new(to_tree(&conclusion.lhs), steps);
    debug_assert_eq!(
        crate::calculus::check(&d, sys).ok().as_ref(),
        Some(&to_tree(&conclusion.rhs)),
    );
    Ok(d)
}

fn translate_steps(proof: &SequentProof, sys: &System) -> Result<Vec<RuleInstance>, SequentError> {
    match proof {
        SequentProof::Id { .. } => Ok(Vec::new()),
        SequentProof::Top { formula } => Ok(eliminate_all(&to_tree(formula))),
        SequentProof::Cut { left, right } => {
            let mut steps = translate_steps(left, sys)?;
            steps.extend(translate_steps(right, sys)?);
            Ok(steps)
        }
        SequentProof::AndElim1 { left, right } => {
            Ok(sums::project_left(&to_tree(left), &to_tree(right)))
        }
        SequentProof::AndElim2 { left, right } => {
            Ok(sums::project_right(&to_tree(left), &to_tree(right)))
        }
        SequentProof::AndIntro { left, right } => {
            let lhs = to_tree(&left.conclusion()?.lhs);
            let mid = to_tree(&left.conclusion()?.rhs);
            let to_s = translate_steps(left, sys)?;
            let to_s2 = translate_steps(right, sys)?;
            Ok(sums::join(&lhs, &mid, &to_s, &to_s2))
        }
        SequentProof::Dist { premise, .. } => {
            let inner = translate_steps(premise, sys)?;
            Ok(inner.iter().map(|r| lift(r, &Position(vec![1]))).collect())
        }
        SequentProof::Four { .. } => {
            if !sys.four {
                return Err(SequentError::NotInSystem("four".into()));
            }
            Ok(vec![RuleInstance::Four { pos: Position::root(), child: 1 }])
        }
        SequentProof::Mono { to, .. } => {
            if !sys.m {
                return Err(SequentError::NotInSystem("m".into()));
            }
            Ok(vec![RuleInstance::M { pos: Position::root(), child: 1, new_label: *to }])
        }
        SequentProof::Jax { .. } => {
            if !sys.j {
                return Err(SequentError::NotInSystem("j".into()));
            }
            Ok(vec![RuleInstance::J { pos: Position::root(), target: 1, source: 2 }])
        }
    }
}

/// Witness derivation for commuting an atom block: steps from
/// `<d1 ++ d2; G>` to `<d2 ++ d1; G>`, replay-checked by the caller.
pub fn atom_permutation_steps(d1_len: usize, d2_len: usize) -> Vec<RuleInstance> {
    sums::swap_atom_blocks(d1_len, d2_len)
}

// ---------------------------------------------------------------------------
// JSON form: nested {"rule": ..., "conclusion": [lhs, rhs], "premises": [..]}
// with formulas in concrete syntax.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ProofJson {
    rule: String,
    conclusion: [String; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<ProofJson>,
}

impl SequentProof {
    pub fn to_json(&self) -> Result<serde_json::Value, SequentError> {
        Ok(serde_json::to_value(self.to_repr()?).expect("serializable"))
    }

    fn to_repr(&self) -> Result<ProofJson, SequentError> {
        let c = self.conclusion()?;
        let premises = match self {
            SequentProof::Cut { left, right } | SequentProof::AndIntro { left, right } => {
                vec![left.to_repr()?, right.to_repr()?]
            }
            SequentProof::Dist { premise, .. } => vec![premise.to_repr()?],
            _ => Vec::new(),
        };
        Ok(ProofJson {
            rule: self.rule_name().to_string(),
            conclusion: [c.lhs.to_string(), c.rhs.to_string()],
            premises,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SequentProof, SequentError> {
        let repr: ProofJson = serde_json::from_value(value.clone())
            .map_err(|e| SequentError::Malformed("root".into(), e.to_string()))?;
        SequentProof::from_repr(&repr)
    }

    fn from_repr(repr: &ProofJson) -> Result<SequentProof, SequentError> {
        let bad = |msg: &str| SequentError::Malformed(repr.rule.clone(), msg.to_string());
        let parse = |s: &str| {
            crate::formula::parse(s)
                .map_err(|e| SequentError::Malformed(repr.rule.clone(), e.to_string()))
        };
        let lhs = parse(&repr.conclusion[0])?;
        let rhs = parse(&repr.conclusion[1])?;
        let premise = |k: usize| -> Result<SequentProof, SequentError> {
            let p = repr.premises.get(k).ok_or_else(|| bad("missing premise"))?;
            SequentProof::from_repr(p)
        };
        let proof = match repr.rule.as_str() {
            "id" => SequentProof::Id { formula: lhs.clone() },
            "top" => SequentProof::Top { formula: lhs.clone() },
            "cut" => SequentProof::Cut {
                left: Box::new(premise(0)?),
                right: Box::new(premise(1)?),
            },
            "and-elim-1" => match &lhs {
                Formula::And(l, r) => {
                    SequentProof::AndElim1 { left: (**l).clone(), right: (**r).clone() }
                }
                _ => return Err(bad("antecedent is not a conjunction")),
            },
            "and-elim-2" => match &lhs {
                Formula::And(l, r) => {
                    SequentProof::AndElim2 { left: (**l).clone(), right: (**r).clone() }
                }
                _ => return Err(bad("antecedent is not a conjunction")),
            },
            "and-intro" => SequentProof::AndIntro {
                left: Box::new(premise(0)?),
                right: Box::new(premise(1)?),
            },
            "dist" => match &lhs {
                Formula::Dia(label, _) => SequentProof::Dist {
                    label: *label,
                    premise: Box::new(premise(0)?),
                },
                _ => return Err(bad("antecedent is not a diamond")),
            },
            "four" => match &lhs {
                Formula::Dia(a, inner) => match &**inner {
                    Formula::Dia(b, body) if a == b => {
                        SequentProof::Four { label: *a, formula: (**body).clone() }
                    }
                    _ => return Err(bad("antecedent is not a doubled diamond")),
                },
                _ => return Err(bad("antecedent is not a diamond")),
            },
            "m" => match (&lhs, &rhs) {
                (Formula::Dia(a, body), Formula::Dia(b, _)) => SequentProof::Mono {
                    from: *a,
                    to: *b,
                    formula: (**body).clone(),
                },
                _ => return Err(bad("both sides must be diamonds")),
            },
            "j" => match &lhs {
                Formula::And(l, r) => match (&**l, &**r) {
                    (Formula::Dia(a, body), Formula::Dia(b, moved)) => SequentProof::Jax {
                        upper: *a,
                        lower: *b,
                        left: (**body).clone(),
                        right: (**moved).clone(),
                    },
                    _ => return Err(bad("antecedent conjuncts must be diamonds")),
                },
                _ => return Err(bad("antecedent is not a conjunction")),
            },
            other => return Err(bad(&format!("unknown rule {other:?}"))),
        };
        // The stated conclusion must match the reconstructed one.
        let c = proof.conclusion()?;
        if c.lhs != lhs || c.rhs != rhs {
            return Err(bad("stated conclusion does not match the rule"));
        }
        Ok(proof)
    }
}

/// Random sequent proofs with bounded depth; used by the test corpora.
pub mod gen {
    use super::*;
    use crate::corpus::TreeShape;
    use rand::Rng;

    pub fn random_proof<R: Rng>(rng: &mut R, sys: &System, depth: usize) -> SequentProof {
        let shape = TreeShape { max_label: 2, n_vars: 3, ..TreeShape::default() };
        let f = crate::corpus::random_formula(rng, 2, &shape);
        random_proof_from(rng, sys, f, depth)
    }

    /// A proof whose antecedent is `lhs`.
    pub fn random_proof_from<R: Rng>(
        rng: &mut R,
        sys: &System,
        lhs: Formula,
        depth: usize,
    ) -> SequentProof {
        let shape = TreeShape { max_label: 2, n_vars: 3, ..TreeShape::default() };
        if depth == 0 {
            return base_case(rng, lhs);
        }
        let choice = rng.gen_range(0..8);
        match choice {
            0 => SequentProof::Top { formula: lhs },
            1 => {
                let left = random_proof_from(rng, sys, lhs, depth - 1);
                let mid = left.conclusion().expect("generated proofs are well formed").rhs;
                let right = random_proof_from(rng, sys, mid, depth - 1);
                SequentProof::Cut { left: Box::new(left), right: Box::new(right) }
            }
            2 => match lhs {
                Formula::And(l, r) => {
                    if rng.gen_bool(0.5) {
                        SequentProof::AndElim1 { left: *l, right: *r }
                    } else {
                        SequentProof::AndElim2 { left: *l, right: *r }
                    }
                }
                other => base_case(rng, other),
            },
            3 => {
                let left = random_proof_from(rng, sys, lhs.clone(), depth - 1);
                let right = random_proof_from(rng, sys, lhs, depth - 1);
                SequentProof::AndIntro { left: Box::new(left), right: Box::new(right) }
            }
            4 => match lhs {
                Formula::Dia(label, body) => SequentProof::Dist {
                    label,
                    premise: Box::new(random_proof_from(rng, sys, *body, depth - 1)),
                },
                other => base_case(rng, other),
            },
            5 if sys.four => match &lhs {
                Formula::Dia(a, inner) => match &**inner {
                    Formula::Dia(b, body) if a == b => {
                        SequentProof::Four { label: *a, formula: (**body).clone() }
                    }
                    _ => SequentProof::Id { formula: lhs },
                },
                _ => SequentProof::Id { formula: lhs },
            },
            6 if sys.m => match &lhs {
                Formula::Dia(a, body) if *a > 0 => SequentProof::Mono {
                    from: *a,
                    to: rng.gen_range(0..*a),
                    formula: (**body).clone(),
                },
                _ => SequentProof::Id { formula: lhs },
            },
            7 if sys.j => match &lhs {
                Formula::And(l, r) => match (&**l, &**r) {
                    (Formula::Dia(a, body), Formula::Dia(b, moved)) if a > b => {
                        SequentProof::Jax {
                            upper: *a,
                            lower: *b,
                            left: (**body).clone(),
                            right: (**moved).clone(),
                        }
                    }
                    _ => SequentProof::Id { formula: lhs },
                },
                _ => SequentProof::Id { formula: lhs },
            },
            _ => {
                let _ = &shape;
                base_case(rng, lhs)
            }
        }
    }

    fn base_case<R: Rng>(rng: &mut R, lhs: Formula) -> SequentProof {
        if rng.gen_bool(0.5) {
            SequentProof::Id { formula: lhs }
        } else {
            SequentProof::Top { formula: lhs }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check, replay};
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn four_axiom_translates_to_one_step() {
        let proof = SequentProof::Four { label: 0, formula: p("p") };
        let d = translate(&proof, &System::K4_PLUS).unwrap();
        assert_eq!(d.steps, vec![RuleInstance::Four { pos: Position::root(), child: 1 }]);
        assert_eq!(check(&d, &System::K4_PLUS).unwrap(), to_tree(&p("<0> p")));
    }

    #[test]
    fn identity_translates_to_nothing() {
        let proof = SequentProof::Id { formula: p("p & <1> q") };
        let d = translate(&proof, &System::K_PLUS).unwrap();
        assert!(d.steps.is_empty());
    }

    #[test]
    fn cut_of_m_then_four_reaches_target() {
        // <1><0> p |- <0> p in the full system, via lowering then collapsing.
        let m_step = SequentProof::Mono { from: 1, to: 0, formula: p("<0> p") };
        let four = SequentProof::Four { label: 0, formula: p("p") };
        let proof = SequentProof::Cut { left: Box::new(m_step), right: Box::new(four) };
        let d = translate(&proof, &System::RC).unwrap();
        assert_eq!(check(&d, &System::RC).unwrap(), to_tree(&p("<0> p")));
        assert_eq!(d.steps.len(), 2);
    }

    #[test]
    fn j_axiom_example() {
        let proof = SequentProof::Jax { upper: 1, lower: 0, left: p("p"), right: p("q") };
        let d = translate(&proof, &System::RC).unwrap();
        assert_eq!(d.steps.len(), 1);
        assert_eq!(check(&d, &System::RC).unwrap(), to_tree(&p("<1>(p & <0> q)")));
    }

    #[test]
    fn top_eliminates_everything() {
        let proof = SequentProof::Top { formula: p("p & q") };
        let d = translate(&proof, &System::K_PLUS).unwrap();
        assert_eq!(check(&d, &System::K_PLUS).unwrap(), to_tree(&Formula::Top));
    }

    #[test]
    fn axiom_outside_system_is_rejected() {
        let proof = SequentProof::Four { label: 0, formula: p("p") };
        assert!(matches!(
            translate(&proof, &System::K_PLUS),
            Err(SequentError::NotInSystem(_))
        ));
    }

    #[test]
    fn atom_permutation_replays() {
        use crate::tree::ModalTree;
        let t = ModalTree::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(0, ModalTree::empty())],
        );
        // Treat [a] ++ [b, c] -> [b, c] ++ [a].
        let steps = atom_permutation_steps(1, 2);
        let end = crate::calculus::replay(&t, &steps).unwrap();
        assert_eq!(
            end,
            ModalTree::new(
                vec!["b".into(), "c".into(), "a".into()],
                vec![(0, ModalTree::empty())]
            )
        );
    }

    #[test]
    fn json_round_trip() {
        let proof = SequentProof::Cut {
            left: Box::new(SequentProof::Mono { from: 1, to: 0, formula: p("<0> p") }),
            right: Box::new(SequentProof::Four { label: 0, formula: p("p") }),
        };
        let v = proof.to_json().unwrap();
        assert_eq!(SequentProof::from_json(&v).unwrap(), proof);
    }

    #[test]
    fn random_proofs_translate_and_replay() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for sys in [System::K_PLUS, System::K4_PLUS, System::RC] {
            for _ in 0..100 {
                let proof = gen::random_proof(&mut rng, &sys, 3);
                let c = proof.conclusion().unwrap();
                let d = translate(&proof, &sys).unwrap();
                assert_eq!(check(&d, &sys).unwrap(), to_tree(&c.rhs));
            }
        }
    }

    #[test]
    fn translated_derivations_use_replay_helper() {
        let proof = SequentProof::AndIntro {
            left: Box::new(SequentProof::Id { formula: p("p & q") }),
            right: Box::new(SequentProof::AndElim1 { left: p("p"), right: p("q") }),
        };
        let d = translate(&proof, &System::K_PLUS).unwrap();
        let end = replay(&d.start, &d.steps).unwrap();
        assert_eq!(end, to_tree(&p("(p & q) & p")));
    }
}
