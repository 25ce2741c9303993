//! Greedy solvers for perceptrons.
//!
//! Flipping feature `i` of `x` moves the score by `Δ_i = w_i(1 - 2x_i)`.
//! The *score* `s_i` of a feature measures how much flipping it pushes the
//! model away from the class of `x` (`s_i = -Δ_i` for class 1, `Δ_i` for
//! class 0). Keeping the class with as many flips as possible means taking
//! the features of smallest score first; changing it with as few flips as
//! possible means taking the largest first. Every cardinality's optimal
//! flip set is then a prefix of the sorted list, and a single swap at the
//! prefix boundary realises any one forced-in or forced-out feature.

use num_traits::Zero;

use super::{linear_rule, Enumeration, Mode};
use crate::error::{Error, Result};
use crate::instance::{flip, Instance};
use crate::model::{step, Perceptron, Rational};
use crate::oracle::Explanation;
use crate::preference::{Literal, PreferenceRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredFeature {
    pub feature: usize,
    pub score: Rational,
}

/// Per-feature scores in feature order.
pub fn feature_scores(model: &Perceptron, x: &Instance) -> Result<Vec<ScoredFeature>> {
    let class = model.eval(x)?;
    Ok((0..model.feature_count())
        .map(|feature| {
            let delta = model.flip_delta(x, feature);
            ScoredFeature { feature, score: if class { -delta } else { delta } }
        })
        .collect())
}

/// Scores sorted best-first for `mode`, ties by ascending feature index.
struct Ranking {
    class: bool,
    base: Rational,
    order: Vec<ScoredFeature>,
}

impl Ranking {
    fn new(model: &Perceptron, x: &Instance, mode: Mode) -> Result<Self> {
        let mut order = feature_scores(model, x)?;
        order.sort_by(|a, b| {
            let by_score = match mode {
                Mode::Semifactual => a.score.cmp(&b.score),
                Mode::Counterfactual => b.score.cmp(&a.score),
            };
            by_score.then(a.feature.cmp(&b.feature))
        });
        Ok(Ranking { class: model.eval(x)?, base: model.score(x)?, order })
    }

    /// Model score after flipping features whose scores sum to `sum`.
    fn score_after(&self, sum: &Rational) -> Rational {
        if self.class {
            &self.base - sum
        } else {
            &self.base + sum
        }
    }

    /// Model scores after flipping each prefix of the ranking, `0..=n`.
    fn prefix_scores(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.order.len() + 1);
        let mut sum = Rational::zero();
        out.push(self.score_after(&sum));
        for f in &self.order {
            sum += &f.score;
            out.push(self.score_after(&sum));
        }
        out
    }

    fn prefix_features(&self, len: usize) -> Vec<usize> {
        self.order[..len].iter().map(|f| f.feature).collect()
    }
}

fn prepare<'r>(
    model: &Perceptron,
    x: &Instance,
    rule: Option<&'r PreferenceRule>,
) -> Result<&'r [PreferenceRule]> {
    x.ensure_len(model.feature_count())?;
    match rule {
        Some(r) => {
            linear_rule(std::slice::from_ref(r))?;
            r.check_arity(model.feature_count())?;
            Ok(std::slice::from_ref(r))
        }
        None => Ok(&[]),
    }
}

/// Tries, head literal by head literal, the single swap that makes `y`
/// satisfy it at the same distance: bring the literal's feature in and
/// drop the last flipped one, or drop it and take the next unflipped one.
fn repair(
    model: &Perceptron,
    x: &Instance,
    y: Instance,
    ranking: &Ranking,
    flipped: usize,
    rule: &PreferenceRule,
    accept: impl Fn(bool) -> bool,
) -> Instance {
    let y_score = model.score(&y).expect("arity checked");
    let satisfied = rule.head().iter().position(|l| l.holds(&y)).unwrap_or(rule.head().len());
    for literal in &rule.head()[..satisfied] {
        let p = literal.feature;
        let j = if x.get(p) == y.get(p) {
            ranking.order[flipped - 1].feature
        } else {
            match ranking.order.get(flipped) {
                Some(f) => f.feature,
                None => continue,
            }
        };
        let z_score = &y_score + model.flip_delta(&y, p) + model.flip_delta(&y, j);
        if accept(step(&z_score)) {
            let mut z = y;
            z.toggle(p);
            z.toggle(j);
            return z;
        }
    }
    y
}

/// Semifactual of `x` at maximal distance; with a linear `rule`, a best one.
pub fn perceptron_semifactual(
    model: &Perceptron,
    x: &Instance,
    rule: Option<&PreferenceRule>,
) -> Result<Explanation> {
    let rules = prepare(model, x, rule)?;
    let ranking = Ranking::new(model, x, Mode::Semifactual)?;
    let n = model.feature_count();
    let prefix = ranking.prefix_scores();
    // Feasible prefix lengths need not be contiguous in general; take the largest.
    let k = (0..=n)
        .rev()
        .find(|&i| step(&prefix[i]) == ranking.class)
        .expect("the empty flip keeps the class");
    let y = if k == 0 {
        x.clone()
    } else if k == n {
        x.complement()
    } else {
        let y = flip(x, &ranking.prefix_features(k))?;
        match rule {
            Some(r) => repair(model, x, y, &ranking, k, r, |c| c == ranking.class),
            None => y,
        }
    };
    Explanation::new(x, y, rules)
}

/// Counterfactual of `x` at minimal distance; with a linear `rule`, a best
/// one.
pub fn perceptron_counterfactual(
    model: &Perceptron,
    x: &Instance,
    rule: Option<&PreferenceRule>,
) -> Result<Explanation> {
    let rules = prepare(model, x, rule)?;
    let ranking = Ranking::new(model, x, Mode::Counterfactual)?;
    let n = model.feature_count();
    let prefix = ranking.prefix_scores();
    let c = (1..=n)
        .find(|&i| step(&prefix[i]) != ranking.class)
        .ok_or(Error::NoCounterfactual)?;
    let y = flip(x, &ranking.prefix_features(c))?;
    let y = match rule {
        Some(r) => repair(model, x, y, &ranking, c, r, |cl| cl != ranking.class),
        None => y,
    };
    Explanation::new(x, y, rules)
}

/// Lists up to `limit` optimal explanations, optionally only those
/// satisfying `goal`, by branch-and-bound over the ranking: a partial flip
/// set is extended only while its best possible completion still works.
pub fn perceptron_enumerate(
    model: &Perceptron,
    x: &Instance,
    mode: Mode,
    goal: Option<Literal>,
    limit: usize,
) -> Result<Enumeration> {
    x.ensure_len(model.feature_count())?;
    let n = model.feature_count();
    if let Some(g) = goal {
        if g.feature >= n {
            return Err(Error::IndexOutOfRange { index: g.feature + 1, n });
        }
    }
    let ranking = Ranking::new(model, x, mode)?;
    let prefix = ranking.prefix_scores();
    let accept = |score: &Rational| (step(score) == ranking.class) == (mode == Mode::Semifactual);
    let size = match mode {
        Mode::Semifactual => (0..=n).rev().find(|&i| accept(&prefix[i])).expect("k = 0 works"),
        Mode::Counterfactual => (1..=n).find(|&i| accept(&prefix[i])).ok_or(Error::NoCounterfactual)?,
    };

    let mut chosen: Vec<usize> = Vec::new();
    let mut sum = Rational::zero();
    let mut items: Vec<&ScoredFeature> = ranking.order.iter().collect();
    if let Some(g) = goal {
        // y_p differs from x_p exactly when p is flipped.
        let flip_p = g.target() != x.get(g.feature);
        let pos = items.iter().position(|f| f.feature == g.feature).expect("every feature ranked");
        let item = items.remove(pos);
        if flip_p {
            chosen.push(item.feature);
            sum += &item.score;
        }
    }
    if chosen.len() > size {
        return Ok(Enumeration { explanations: Vec::new(), truncated: false });
    }
    let mut item_prefix = Vec::with_capacity(items.len() + 1);
    item_prefix.push(Rational::zero());
    for f in &items {
        let next = item_prefix.last().expect("non-empty") + &f.score;
        item_prefix.push(next);
    }
    let ok = |s: &Rational| accept(&ranking.score_after(s));

    let mut found: Vec<Instance> = Vec::new();
    // (index into items, stage): 0 = fresh, 1 = include branch done.
    let mut stack: Vec<(usize, u8)> = vec![(0, 0)];
    while let Some(&(idx, stage)) = stack.last() {
        if found.len() > limit {
            break;
        }
        let top = stack.len() - 1;
        match stage {
            0 => {
                let need = size - chosen.len();
                if need == 0 {
                    if ok(&sum) {
                        found.push(flip(x, &chosen)?);
                    }
                    stack.pop();
                    continue;
                }
                let fits = items.len() - idx >= need
                    && ok(&(&sum + &item_prefix[idx + need] - &item_prefix[idx]));
                if !fits {
                    stack.pop();
                    continue;
                }
                stack[top].1 = 1;
                chosen.push(items[idx].feature);
                sum += &items[idx].score;
                stack.push((idx + 1, 0));
            }
            1 => {
                chosen.pop();
                sum -= &items[idx].score;
                stack[top].1 = 2;
                stack.push((idx + 1, 0));
            }
            _ => {
                stack.pop();
            }
        }
    }
    found.sort();
    found.dedup();
    let explanations = found
        .into_iter()
        .map(|y| Explanation::new(x, y, &[]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Enumeration::from_sorted(explanations, limit))
}
