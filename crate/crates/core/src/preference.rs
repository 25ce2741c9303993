//! Preference rules over feature literals, degrees of satisfaction, and the
//! dominance order they induce on explanations.
//!
//! A rule `φ1 > … > φk <- ψ1 & … & ψm` says that, whenever the body holds,
//! explanations satisfying an earlier head literal are preferred. Its degree
//! on an instance is 1 when the body fails, the position of the first
//! satisfied head literal otherwise, and infinite when the body holds but no
//! head literal does. An instance weakly dominates another when its degree
//! is no larger on every rule.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// `f_i` (positive) or `¬f_i`; `feature` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub feature: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(feature: usize) -> Self {
        Literal { feature, positive: true }
    }

    pub fn neg(feature: usize) -> Self {
        Literal { feature, positive: false }
    }

    /// The value the feature must take for the literal to hold.
    pub fn target(&self) -> bool {
        self.positive
    }

    pub fn holds(&self, y: &Instance) -> bool {
        y.get(self.feature) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("!")?;
        }
        write!(f, "f{}", self.feature + 1)
    }
}

/// Checked form of [`Literal::holds`].
pub fn satisfies_literal(y: &Instance, literal: &Literal) -> Result<bool> {
    if literal.feature >= y.len() {
        return Err(Error::IndexOutOfRange { index: literal.feature + 1, n: y.len() });
    }
    Ok(literal.holds(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeValue {
    Finite(usize),
    Infinite,
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeValue::Finite(k) => write!(f, "{k}"),
            DegreeValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceRule {
    head: Vec<Literal>,
    body: Vec<Literal>,
}

impl PreferenceRule {
    /// Fails with [`Error::Precondition`] on an empty head or a repeated
    /// head literal.
    pub fn new(head: Vec<Literal>, body: Vec<Literal>) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::Precondition("a preference rule needs a head literal".into()));
        }
        for (i, lit) in head.iter().enumerate() {
            if head[..i].contains(lit) {
                return Err(Error::Precondition(format!("head literal {lit} occurs twice")));
            }
        }
        Ok(PreferenceRule { head, body })
    }

    pub fn linear(head: Vec<Literal>) -> Result<Self> {
        PreferenceRule::new(head, Vec::new())
    }

    pub fn head(&self) -> &[Literal] {
        &self.head
    }

    pub fn body(&self) -> &[Literal] {
        &self.body
    }

    pub fn is_linear(&self) -> bool {
        self.body.is_empty()
    }

    /// Largest 0-based feature index mentioned.
    pub fn max_feature(&self) -> usize {
        self.head.iter().chain(&self.body).map(|l| l.feature).max().unwrap_or(0)
    }

    pub fn check_arity(&self, n: usize) -> Result<()> {
        let max = self.max_feature();
        if max >= n {
            return Err(Error::IndexOutOfRange { index: max + 1, n });
        }
        Ok(())
    }

    /// Degree of satisfaction. Panics if a literal is out of range for `y`;
    /// use [`degree`] for the checked version.
    pub fn degree_of(&self, y: &Instance) -> DegreeValue {
        if !self.body.iter().all(|l| l.holds(y)) {
            return DegreeValue::Finite(1);
        }
        match self.head.iter().position(|l| l.holds(y)) {
            Some(i) => DegreeValue::Finite(i + 1),
            None => DegreeValue::Infinite,
        }
    }
}

impl fmt::Display for PreferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.head, " > ")?;
        if !self.body.is_empty() {
            f.write_str(" <- ")?;
            write_joined(f, &self.body, " & ")?;
        }
        Ok(())
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, lits: &[Literal], sep: &str) -> fmt::Result {
    for (i, l) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// True iff the set is a single rule with an empty body.
pub fn is_linear(rules: &[PreferenceRule]) -> bool {
    matches!(rules, [rule] if rule.is_linear())
}

pub fn degree(y: &Instance, rule: &PreferenceRule) -> Result<DegreeValue> {
    rule.check_arity(y.len())?;
    Ok(rule.degree_of(y))
}

pub fn degrees(y: &Instance, rules: &[PreferenceRule]) -> Result<Vec<DegreeValue>> {
    rules.iter().map(|r| degree(y, r)).collect()
}

/// Pointwise `≤` on degree vectors of equal length.
pub fn vector_weakly_dominates(a: &[DegreeValue], b: &[DegreeValue]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn vector_strictly_dominates(a: &[DegreeValue], b: &[DegreeValue]) -> bool {
    vector_weakly_dominates(a, b) && !vector_weakly_dominates(b, a)
}

/// `y ⊒ z`: `y` is at least as preferred as `z` under every rule.
pub fn weakly_dominates(y: &Instance, z: &Instance, rules: &[PreferenceRule]) -> Result<bool> {
    z.ensure_len(y.len())?;
    Ok(vector_weakly_dominates(&degrees(y, rules)?, &degrees(z, rules)?))
}

/// `y ⊐ z`: `y ⊒ z` and not `z ⊒ y`.
pub fn strictly_dominates(y: &Instance, z: &Instance, rules: &[PreferenceRule]) -> Result<bool> {
    z.ensure_len(y.len())?;
    Ok(vector_strictly_dominates(&degrees(y, rules)?, &degrees(z, rules)?))
}

/// Indices of the entries of `vectors` that no other entry strictly
/// dominates.
pub fn undominated_indices(vectors: &[Vec<DegreeValue>]) -> Vec<usize> {
    (0..vectors.len())
        .filter(|&i| !vectors.iter().any(|v| vector_strictly_dominates(v, &vectors[i])))
        .collect()
}

/// The candidates not strictly dominated by another candidate, sorted and
/// deduplicated.
pub fn pareto_best(candidates: &[Instance], rules: &[PreferenceRule]) -> Result<Vec<Instance>> {
    let mut sorted = candidates.to_vec();
    sorted.sort();
    sorted.dedup();
    if let Some(first) = sorted.first() {
        for y in &sorted {
            y.ensure_len(first.len())?;
        }
    }
    let vectors = sorted.iter().map(|y| degrees(y, rules)).collect::<Result<Vec<_>>>()?;
    Ok(undominated_indices(&vectors).into_iter().map(|i| sorted[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(s: &str) -> Instance {
        Instance::new(s.bytes().map(|b| b == b'1').collect())
    }

    /// ¬f2 ≻ f1 ← ¬f3
    fn example_rule() -> PreferenceRule {
        PreferenceRule::new(vec![Literal::neg(1), Literal::pos(0)], vec![Literal::neg(2)]).unwrap()
    }

    #[test]
    fn literals() {
        assert!(satisfies_literal(&inst("000"), &Literal::neg(1)).unwrap());
        assert!(satisfies_literal(&inst("110"), &Literal::pos(0)).unwrap());
        assert!(!satisfies_literal(&inst("110"), &Literal::neg(1)).unwrap());
        assert_eq!(
            satisfies_literal(&inst("110"), &Literal::pos(3)),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
    }

    #[test]
    fn degree_cases() {
        let k = example_rule();
        assert_eq!(degree(&inst("000"), &k).unwrap(), DegreeValue::Finite(1));
        assert_eq!(degree(&inst("110"), &k).unwrap(), DegreeValue::Finite(2));
        assert_eq!(degree(&inst("011"), &k).unwrap(), DegreeValue::Finite(1));
        assert_eq!(degree(&inst("010"), &k).unwrap(), DegreeValue::Infinite);
        assert!(degree(&inst("01"), &k).is_err());
    }

    #[test]
    fn infinite_above_every_finite() {
        assert!(DegreeValue::Infinite > DegreeValue::Finite(usize::MAX));
        assert!(DegreeValue::Finite(1) < DegreeValue::Finite(2));
    }

    #[test]
    fn dominance_examples() {
        let rules = [example_rule()];
        let (y1, y2) = (inst("000"), inst("110"));
        assert!(weakly_dominates(&y1, &y2, &rules).unwrap());
        assert!(strictly_dominates(&y1, &y2, &rules).unwrap());
        assert!(weakly_dominates(&y1, &y1, &rules).unwrap());
        assert!(!strictly_dominates(&y1, &y1, &rules).unwrap());

        let crossed = [
            PreferenceRule::linear(vec![Literal::pos(0), Literal::pos(1)]).unwrap(),
            PreferenceRule::linear(vec![Literal::pos(1), Literal::pos(0)]).unwrap(),
        ];
        let (y, z) = (inst("10"), inst("01"));
        assert!(!weakly_dominates(&y, &z, &crossed).unwrap());
        assert!(!weakly_dominates(&z, &y, &crossed).unwrap());
        assert!(!strictly_dominates(&y, &z, &crossed).unwrap());
        assert!(!strictly_dominates(&z, &y, &crossed).unwrap());
        assert_eq!(pareto_best(&[y.clone(), z.clone()], &crossed).unwrap(), vec![z, y]);
    }

    #[test]
    fn pareto_examples() {
        let rules = [example_rule()];
        assert_eq!(
            pareto_best(&[inst("110"), inst("000")], &rules).unwrap(),
            vec![inst("000")]
        );
        assert_eq!(pareto_best(&[inst("110")], &rules).unwrap(), vec![inst("110")]);
        assert_eq!(
            pareto_best(&[inst("110"), inst("000")], &[]).unwrap(),
            vec![inst("000"), inst("110")]
        );
    }

    #[test]
    fn rule_construction() {
        assert!(PreferenceRule::linear(vec![Literal::pos(0), Literal::pos(0)]).is_err());
        assert!(PreferenceRule::linear(vec![]).is_err());
        let contradictory = PreferenceRule::linear(vec![Literal::pos(0), Literal::neg(0)]).unwrap();
        assert_eq!(contradictory.to_string(), "f1 > !f1");
        assert_eq!(example_rule().to_string(), "!f2 > f1 <- !f3");
        assert!(is_linear(std::slice::from_ref(&contradictory)));
        assert!(!is_linear(&[example_rule()]));
        assert!(!is_linear(&[contradictory.clone(), contradictory]));
        assert!(!is_linear(&[]));
    }

    const N: usize = 5;

    fn literal() -> impl Strategy<Value = Literal> {
        (0..N, any::<bool>()).prop_map(|(feature, positive)| Literal { feature, positive })
    }

    fn rule() -> impl Strategy<Value = PreferenceRule> {
        (prop::collection::vec(literal(), 1..4), prop::collection::vec(literal(), 0..3)).prop_map(
            |(mut head, body)| {
                let mut seen = Vec::new();
                head.retain(|l| {
                    let fresh = !seen.contains(l);
                    seen.push(*l);
                    fresh
                });
                PreferenceRule::new(head, body).unwrap()
            },
        )
    }

    fn instance() -> impl Strategy<Value = Instance> {
        prop::collection::vec(any::<bool>(), N).prop_map(Instance::new)
    }

    proptest! {
        #[test]
        fn unsatisfied_body_gives_degree_one(r in rule(), y in instance()) {
            if !r.body().iter().all(|l| l.holds(&y)) {
                prop_assert_eq!(r.degree_of(&y), DegreeValue::Finite(1));
            }
        }

        #[test]
        fn single_linear_rule_is_total(head in prop::collection::vec(literal(), 1..4),
                                       y in instance(), z in instance()) {
            let mut head = head;
            head.dedup();
            if let Ok(r) = PreferenceRule::linear(head) {
                let rules = [r];
                prop_assert!(weakly_dominates(&y, &z, &rules).unwrap()
                    || weakly_dominates(&z, &y, &rules).unwrap());
            }
        }

        #[test]
        fn pareto_idempotent(rules in prop::collection::vec(rule(), 0..4),
                             cands in prop::collection::vec(instance(), 1..10)) {
            let once = pareto_best(&cands, &rules).unwrap();
            prop_assert!(!once.is_empty());
            prop_assert_eq!(pareto_best(&once, &rules).unwrap(), once);
        }
    }
}
