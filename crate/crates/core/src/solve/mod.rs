//! Solvers for semifactual and counterfactual explanations.
//!
//! Perceptrons and FBDDs get polynomial-time solvers that also honour a
//! single linear preference rule. Everything else (MLPs, general rule sets)
//! falls back to exact exhaustive search.

mod fbdd;
mod mlp;
mod perceptron;

use std::fmt;
use std::str::FromStr;

pub use fbdd::{
    fbdd_agreement_weights, fbdd_counterfactual, fbdd_enumerate, fbdd_enumerate_semifactuals,
    fbdd_mca_value, fbdd_semifactual, min_weight_subgraph, AgreementFbdd, MinWeightSubgraph,
};
pub use mlp::mlp_explanations_exact;
pub use perceptron::{
    feature_scores, perceptron_counterfactual, perceptron_enumerate, perceptron_semifactual,
    ScoredFeature,
};

use crate::error::{Error, Result};
use crate::instance::{hamming, Instance};
use crate::model::Model;
use crate::oracle::{oracle_best, Explanation, ExplanationQuery, DEFAULT_MAX_FEATURES};
use crate::preference::{degrees, is_linear, Literal, PreferenceRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Same class, maximal distance ("even if").
    Semifactual,
    /// Different class, minimal distance ("if only").
    Counterfactual,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Semifactual => "semi",
            Mode::Counterfactual => "counter",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "semi" | "semifactual" => Ok(Mode::Semifactual),
            "counter" | "counterfactual" => Ok(Mode::Counterfactual),
            other => Err(format!("unknown mode {other:?}, expected semi or counter")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Feature cap for brute-force fallbacks.
    pub max_oracle_features: usize,
    /// Maximum number of instances exhaustive MLP search may evaluate.
    pub mlp_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_oracle_features: DEFAULT_MAX_FEATURES,
            mlp_budget: 1 << DEFAULT_MAX_FEATURES,
        }
    }
}

/// A capped list of explanations in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub explanations: Vec<Explanation>,
    /// More explanations exist than were returned.
    pub truncated: bool,
}

impl Enumeration {
    pub(crate) fn from_sorted(mut explanations: Vec<Explanation>, limit: usize) -> Self {
        let truncated = explanations.len() > limit;
        explanations.truncate(limit);
        Enumeration { explanations, truncated }
    }
}

/// Returns the single linear rule, `None` for an empty set, and an error
/// for anything else.
pub(crate) fn linear_rule(rules: &[PreferenceRule]) -> Result<Option<&PreferenceRule>> {
    match rules {
        [] => Ok(None),
        _ if is_linear(rules) => Ok(Some(&rules[0])),
        _ => Err(Error::NonLinearPreference),
    }
}

fn fast_path_applies(model: &Model, rules: &[PreferenceRule]) -> bool {
    !matches!(model, Model::Mlp(_)) && (rules.is_empty() || is_linear(rules))
}

fn exhaustive_best(
    model: &Model,
    x: &Instance,
    mode: Mode,
    rules: &[PreferenceRule],
    opts: &SolveOptions,
) -> Result<Vec<Explanation>> {
    match model {
        Model::Mlp(m) => mlp_explanations_exact(m, x, mode, rules, opts.mlp_budget),
        _ => oracle_best(
            &ExplanationQuery::new(mode, model, x).with_preferences(rules),
            opts.max_oracle_features,
        ),
    }
}

/// One canonical (best) explanation of `x`.
///
/// Fails with [`Error::NoCounterfactual`] when the model is constant.
pub fn explain(
    model: &Model,
    x: &Instance,
    mode: Mode,
    rules: &[PreferenceRule],
    opts: &SolveOptions,
) -> Result<Explanation> {
    if fast_path_applies(model, rules) {
        let rule = linear_rule(rules)?;
        return match (model, mode) {
            (Model::Perceptron(p), Mode::Semifactual) => perceptron_semifactual(p, x, rule),
            (Model::Perceptron(p), Mode::Counterfactual) => perceptron_counterfactual(p, x, rule),
            (Model::Fbdd(f), Mode::Semifactual) => fbdd_semifactual(f, x, rule),
            (Model::Fbdd(f), Mode::Counterfactual) => fbdd_counterfactual(f, x, rule),
            (Model::Mlp(_), _) => unreachable!("MLPs never take the fast path"),
        };
    }
    exhaustive_best(model, x, mode, rules, opts)?
        .into_iter()
        .next()
        .ok_or(Error::NoCounterfactual)
}

/// Up to `limit` (best) explanations of `x`, lexicographically ordered.
pub fn enumerate(
    model: &Model,
    x: &Instance,
    mode: Mode,
    rules: &[PreferenceRule],
    limit: usize,
    opts: &SolveOptions,
) -> Result<Enumeration> {
    if fast_path_applies(model, rules) {
        // With a linear rule the best explanations are exactly those
        // satisfying the head literal the solver's answer satisfies first.
        let rule = linear_rule(rules)?;
        let best = explain(model, x, mode, rules, opts)?;
        let goal: Option<Literal> =
            rule.and_then(|r| r.head().iter().find(|l| l.holds(&best.instance)).copied());
        let out = match model {
            Model::Perceptron(p) => perceptron_enumerate(p, x, mode, goal, limit)?,
            Model::Fbdd(f) => fbdd_enumerate(f, x, mode, goal, limit)?,
            Model::Mlp(_) => unreachable!("MLPs never take the fast path"),
        };
        return attach_degrees(out, x, rules);
    }
    let all = exhaustive_best(model, x, mode, rules, opts)?;
    if all.is_empty() && mode == Mode::Counterfactual {
        return Err(Error::NoCounterfactual);
    }
    Ok(Enumeration::from_sorted(all, limit))
}

fn attach_degrees(mut e: Enumeration, x: &Instance, rules: &[PreferenceRule]) -> Result<Enumeration> {
    for ex in &mut e.explanations {
        debug_assert_eq!(ex.distance, hamming(x, &ex.instance)?);
        ex.degrees = degrees(&ex.instance, rules)?;
    }
    Ok(e)
}

/// Decides whether `y` is a best explanation of `x`: no instance of the
/// required class is strictly closer (counterfactual) or farther
/// (semifactual), and none at the same distance strictly dominates `y`.
///
/// With no rules or a single linear rule on a perceptron or FBDD this runs
/// in polynomial time by comparing against the fast solver; otherwise it
/// enumerates (subject to `opts.max_oracle_features`).
pub fn verify_best(
    model: &Model,
    rules: &[PreferenceRule],
    x: &Instance,
    y: &Instance,
    mode: Mode,
    opts: &SolveOptions,
) -> Result<bool> {
    let n = model.feature_count();
    x.ensure_len(n)?;
    y.ensure_len(n)?;
    for rule in rules {
        rule.check_arity(n)?;
    }
    let same = model.eval(x)? == model.eval(y)?;
    match (mode, same) {
        (Mode::Semifactual, false) => {
            return Err(Error::Precondition("candidate has a different class than x".into()))
        }
        (Mode::Counterfactual, true) => {
            return Err(Error::Precondition("candidate has the same class as x".into()))
        }
        _ => {}
    }
    if fast_path_applies(model, rules) {
        let reference = explain(model, x, mode, rules, opts)?;
        return Ok(hamming(x, y)? == reference.distance && degrees(y, rules)? == reference.degrees);
    }
    let best = exhaustive_best(model, x, mode, rules, opts)?;
    Ok(best.iter().any(|e| &e.instance == y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bits, hire_perceptron, hiring};
    use crate::preference::DegreeValue;
    use crate::gen::{gen_random_model, random_instance, random_rule, GenParams, ModelKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn guarded_rule() -> Vec<PreferenceRule> {
        vec![PreferenceRule::new(vec![Literal::neg(1), Literal::pos(0)], vec![Literal::neg(2)]).unwrap()]
    }

    #[test]
    fn verify_best_examples() {
        let m: Model = hire_perceptron().into();
        let o = SolveOptions::default();
        let x = bits("011");
        assert!(verify_best(&m, &guarded_rule(), &x, &bits("000"), Mode::Semifactual, &o).unwrap());
        assert!(!verify_best(&m, &guarded_rule(), &x, &bits("110"), Mode::Semifactual, &o).unwrap());
        assert!(!verify_best(&m, &[], &x, &bits("010"), Mode::Semifactual, &o).unwrap());
        assert!(matches!(
            verify_best(&m, &[], &x, &bits("100"), Mode::Semifactual, &o),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            verify_best(&m, &[], &bits("101"), &bits("100"), Mode::Counterfactual, &o),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn general_rules_fall_back_to_search() {
        for model in [Model::from(hire_perceptron()), Model::from(hiring())] {
            let y = explain(&model, &bits("011"), Mode::Semifactual, &guarded_rule(), &SolveOptions::default()).unwrap();
            assert_eq!(y.instance, bits("000"));
            let e = enumerate(&model, &bits("011"), Mode::Semifactual, &[], 10, &SolveOptions::default()).unwrap();
            assert_eq!(e.explanations.len(), 2);
        }
    }

    #[test]
    fn enumeration_with_linear_rule_keeps_only_best() {
        let r = vec![PreferenceRule::linear(vec![Literal::pos(0)]).unwrap()];
        for model in [Model::from(hire_perceptron()), Model::from(hiring())] {
            let e = enumerate(&model, &bits("011"), Mode::Semifactual, &r, 10, &SolveOptions::default()).unwrap();
            assert_eq!(e.explanations.len(), 1);
            assert_eq!(e.explanations[0].instance, bits("110"));
            assert_eq!(e.explanations[0].degrees, [DegreeValue::Finite(1)]);
        }
    }

    #[test]
    fn mode_names() {
        assert_eq!("semi".parse::<Mode>().unwrap(), Mode::Semifactual);
        assert_eq!("counterfactual".parse::<Mode>().unwrap(), Mode::Counterfactual);
        assert!("x".parse::<Mode>().is_err());
        assert_eq!(Mode::Counterfactual.to_string(), "counter");
    }

    /// Small randomized cross-check of the fast paths against brute force.
    #[test]
    fn fast_paths_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let o = SolveOptions::default();
        for round in 0..300u64 {
            let kind = [ModelKind::Perceptron, ModelKind::Fbdd, ModelKind::Mlp][round as usize % 3];
            let n = rng.random_range(1..=6);
            let params = GenParams { weight_range: 3, hidden: Some(vec![3]), ..GenParams::default() };
            let model = gen_random_model(kind, n, round, &params).unwrap();
            let x = random_instance(&mut rng, n);
            let rules = if rng.random_bool(0.7) { vec![random_rule(&mut rng, n, 4, true)] } else { Vec::new() };
            for mode in [Mode::Semifactual, Mode::Counterfactual] {
                let q = ExplanationQuery::new(mode, &model, &x).with_preferences(&rules);
                let best = oracle_best(&q, 20).unwrap();
                match explain(&model, &x, mode, &rules, &o) {
                    Err(Error::NoCounterfactual) => assert!(best.is_empty()),
                    Err(e) => panic!("{e}"),
                    Ok(y) => {
                        assert!(best.contains(&y), "{kind} {mode} {x} {:?}: {} not best", rules, y.instance);
                        let all = enumerate(&model, &x, mode, &rules, 1 << 10, &o).unwrap();
                        assert_eq!(all.explanations, best, "{kind} {mode} {x}");
                        let class = model.eval(&x).unwrap();
                        for code in 0..1u64 << n {
                            let z = Instance::from_code(code, n);
                            if (model.eval(&z).unwrap() == class) != (mode == Mode::Semifactual) {
                                continue;
                            }
                            let expect = best.iter().any(|b| b.instance == z);
                            assert_eq!(verify_best(&model, &rules, &x, &z, mode, &o).unwrap(), expect);
                        }
                    }
                }
            }
        }
    }
}
