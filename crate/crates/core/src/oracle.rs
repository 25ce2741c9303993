//! Ground truth by exhaustive enumeration of `{0,1}^n`.
//!
//! The oracle evaluates the model on every instance and keeps the ones of
//! the required class at optimal Hamming distance from the focal instance:
//! minimal for counterfactuals, maximal for semifactuals. It is a test
//! fixture and a fallback for queries no polynomial solver covers, so it is
//! capped at [`DEFAULT_MAX_FEATURES`] features unless told otherwise.

use crate::error::{Error, Result};
use crate::instance::{hamming, Instance};
use crate::model::Model;
use crate::preference::{degrees, undominated_indices, DegreeValue, PreferenceRule};
use crate::solve::Mode;

pub const DEFAULT_MAX_FEATURES: usize = 20;

/// An explanation together with its distance from the focal instance and
/// its degree on each preference rule of the query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub instance: Instance,
    pub distance: usize,
    pub degrees: Vec<DegreeValue>,
}

impl Explanation {
    pub fn new(focal: &Instance, instance: Instance, rules: &[PreferenceRule]) -> Result<Self> {
        Ok(Explanation {
            distance: hamming(focal, &instance)?,
            degrees: degrees(&instance, rules)?,
            instance,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExplanationQuery<'a> {
    pub mode: Mode,
    pub model: &'a Model,
    pub focal: &'a Instance,
    pub preferences: &'a [PreferenceRule],
}

impl<'a> ExplanationQuery<'a> {
    pub fn new(mode: Mode, model: &'a Model, focal: &'a Instance) -> Self {
        ExplanationQuery { mode, model, focal, preferences: &[] }
    }

    pub fn with_preferences(self, preferences: &'a [PreferenceRule]) -> Self {
        ExplanationQuery { preferences, ..self }
    }

    pub(crate) fn check(&self) -> Result<()> {
        let n = self.model.feature_count();
        self.focal.ensure_len(n)?;
        for rule in self.preferences {
            rule.check_arity(n)?;
        }
        Ok(())
    }
}

/// Every instance `y` satisfying the query's mode at optimal distance, in
/// lexicographic order. Counterfactual mode yields an empty set for a
/// constant model; semifactual mode always contains at least one instance.
pub fn oracle_explanations(query: &ExplanationQuery<'_>, max_features: usize) -> Result<Vec<Explanation>> {
    query.check()?;
    let n = query.model.feature_count();
    if n > max_features || n >= 64 {
        return Err(Error::CapExceeded { n, cap: max_features });
    }
    let class = query.model.eval(query.focal)?;
    let want_same = query.mode == Mode::Semifactual;

    let mut best: Option<usize> = None;
    let mut found = Vec::new();
    for code in 0..(1u64 << n) {
        let y = Instance::from_code(code, n);
        if (query.model.eval(&y)? == class) != want_same {
            continue;
        }
        let d = hamming(query.focal, &y)?;
        let better = match (best, query.mode) {
            (None, _) => true,
            (Some(b), Mode::Semifactual) => d > b,
            (Some(b), Mode::Counterfactual) => d < b,
        };
        if better {
            best = Some(d);
            found.clear();
        }
        if best == Some(d) {
            found.push(y);
        }
    }
    found
        .into_iter()
        .map(|y| Explanation::new(query.focal, y, query.preferences))
        .collect()
}

/// The members of [`oracle_explanations`] no other member strictly
/// dominates under the query's preferences.
pub fn oracle_best(query: &ExplanationQuery<'_>, max_features: usize) -> Result<Vec<Explanation>> {
    let all = oracle_explanations(query, max_features)?;
    Ok(pareto_filter(all))
}

pub(crate) fn pareto_filter(all: Vec<Explanation>) -> Vec<Explanation> {
    let vectors: Vec<_> = all.iter().map(|e| e.degrees.clone()).collect();
    let keep = undominated_indices(&vectors);
    let mut keep = keep.into_iter().peekable();
    all.into_iter()
        .enumerate()
        .filter_map(|(i, e)| {
            if keep.peek() == Some(&i) {
                keep.next();
                Some(e)
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Layer, Mlp, Perceptron, Rational};
    use crate::preference::Literal;

    fn inst(s: &str) -> Instance {
        Instance::new(s.bytes().map(|b| b == b'1').collect())
    }

    fn hiring() -> Model {
        Perceptron::from_integers(&[-2, 2, 0], 1).unwrap().into()
    }

    fn xor() -> Model {
        let mut out = Layer::from_integers(&[&[1], &[-2]], &[0]);
        out.bias[0] = Rational::new((-1).into(), 2.into());
        Mlp::new(2, vec![Layer::from_integers(&[&[1, 1], &[1, 1]], &[0, -1]), out])
            .unwrap()
            .into()
    }

    fn members(es: &[Explanation]) -> Vec<String> {
        es.iter().map(|e| e.instance.to_string()).collect()
    }

    #[test]
    fn hiring_semifactuals() {
        let m = hiring();
        let x = inst("011");
        let out = oracle_explanations(&ExplanationQuery::new(Mode::Semifactual, &m, &x), 20).unwrap();
        assert_eq!(members(&out), ["000", "110"]);
        assert!(out.iter().all(|e| e.distance == 2));
    }

    #[test]
    fn hiring_counterfactuals() {
        let m = hiring();
        let x = inst("101");
        let out =
            oracle_explanations(&ExplanationQuery::new(Mode::Counterfactual, &m, &x), 20).unwrap();
        assert_eq!(members(&out), ["001", "111"]);
        assert!(out.iter().all(|e| e.distance == 1));
    }

    #[test]
    fn xor_semifactual() {
        let m = xor();
        let x = inst("00");
        let out = oracle_explanations(&ExplanationQuery::new(Mode::Semifactual, &m, &x), 20).unwrap();
        assert_eq!(members(&out), ["11"]);
        assert_eq!(out[0].distance, 2);
    }

    #[test]
    fn best_under_preferences() {
        let m = hiring();
        let x = inst("011");
        let rules =
            [PreferenceRule::new(vec![Literal::neg(1), Literal::pos(0)], vec![Literal::neg(2)]).unwrap()];
        let q = ExplanationQuery::new(Mode::Semifactual, &m, &x).with_preferences(&rules);
        let best = oracle_best(&q, 20).unwrap();
        assert_eq!(members(&best), ["000"]);
        assert_eq!(best[0].degrees, vec![DegreeValue::Finite(1)]);
        let unfiltered = oracle_best(&ExplanationQuery::new(Mode::Semifactual, &m, &x), 20).unwrap();
        assert_eq!(members(&unfiltered), ["000", "110"]);
    }

    #[test]
    fn degenerate_cases() {
        // x is the only class-1 instance: it is its own semifactual.
        let m: Model = Perceptron::from_integers(&[1], -1).unwrap().into();
        let x = inst("1");
        let out = oracle_explanations(&ExplanationQuery::new(Mode::Semifactual, &m, &x), 20).unwrap();
        assert_eq!(members(&out), ["1"]);
        assert_eq!(out[0].distance, 0);

        let constant: Model = Perceptron::from_integers(&[0, 0], 0).unwrap().into();
        let x = inst("01");
        let out =
            oracle_explanations(&ExplanationQuery::new(Mode::Counterfactual, &constant, &x), 20)
                .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let m: Model = Perceptron::from_integers(&[1; 5], 0).unwrap().into();
        let x = Instance::zeros(5);
        assert_eq!(
            oracle_explanations(&ExplanationQuery::new(Mode::Semifactual, &m, &x), 4),
            Err(Error::CapExceeded { n: 5, cap: 4 })
        );
    }
}
