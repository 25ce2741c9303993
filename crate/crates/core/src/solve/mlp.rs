//! Exact exhaustive search for ReLU networks.
//!
//! Instances are visited as `x XOR mask` with `mask` running through a
//! binary reflected Gray code, so consecutive instances differ in a single
//! feature and the first layer's pre-activation is updated by adding or
//! subtracting one weight row instead of being recomputed.

use super::Mode;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::{step, Mlp};
use crate::oracle::{pareto_filter, Explanation};
use crate::preference::PreferenceRule;

/// The optimal explanations of `x` (the best ones when `rules` is
/// non-empty), lexicographically ordered. Evaluates all `2^n` instances;
/// fails with [`Error::BudgetExceeded`] when that is more than `budget`.
pub fn mlp_explanations_exact(
    model: &Mlp,
    x: &Instance,
    mode: Mode,
    rules: &[PreferenceRule],
    budget: u64,
) -> Result<Vec<Explanation>> {
    let n = model.feature_count();
    x.ensure_len(n)?;
    for rule in rules {
        rule.check_arity(n)?;
    }
    if n >= 64 || (1u64 << n) > budget {
        return Err(Error::BudgetExceeded { n, budget });
    }

    let class = model.eval(x)?;
    let want_same = mode == Mode::Semifactual;
    let first = &model.layers()[0];
    let mut y = x.clone();
    let mut pre = {
        let h: Vec<_> = x
            .bits()
            .iter()
            .map(|&b| crate::model::Rational::from_integer(u8::from(b).into()))
            .collect();
        first.affine(&h)
    };
    let mut distance = 0usize;
    let mut best: Option<usize> = None;
    let mut masks: Vec<u64> = Vec::new();
    let mut mask = 0u64;

    for step_index in 0..(1u64 << n) {
        if step_index > 0 {
            let j = step_index.trailing_zeros() as usize;
            mask ^= 1 << j;
            y.toggle(j);
            let row = &first.weights[j];
            if y.get(j) {
                pre.iter_mut().zip(row).for_each(|(p, w)| *p += w);
            } else {
                pre.iter_mut().zip(row).for_each(|(p, w)| *p -= w);
            }
            if y.get(j) == x.get(j) {
                distance -= 1;
            } else {
                distance += 1;
            }
        }
        let same = step(&model.logit_from_first_preactivation(pre.clone())) == class;
        if same != want_same {
            continue;
        }
        let better = match (best, mode) {
            (None, _) => true,
            (Some(b), Mode::Semifactual) => distance > b,
            (Some(b), Mode::Counterfactual) => distance < b,
        };
        if better {
            best = Some(distance);
            masks.clear();
        }
        if best == Some(distance) {
            masks.push(mask);
        }
    }

    let mut found: Vec<Instance> = masks
        .into_iter()
        .map(|m| {
            let mut z = x.clone();
            for j in 0..n {
                if m >> j & 1 == 1 {
                    z.toggle(j);
                }
            }
            z
        })
        .collect();
    found.sort();
    let all = found
        .into_iter()
        .map(|z| Explanation::new(x, z, rules))
        .collect::<Result<Vec<_>>>()?;
    Ok(pareto_filter(all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bits, hire_perceptron, xor};

    fn members(es: &[Explanation]) -> Vec<Instance> {
        es.iter().map(|e| e.instance.clone()).collect()
    }

    #[test]
    fn xor_semifactual() {
        let e = mlp_explanations_exact(&xor(), &bits("00"), Mode::Semifactual, &[], 1 << 20).unwrap();
        assert_eq!(members(&e), [bits("11")]);
        assert_eq!(e[0].distance, 2);
        let e = mlp_explanations_exact(&xor(), &bits("00"), Mode::Counterfactual, &[], 1 << 20).unwrap();
        assert_eq!(members(&e), [bits("01"), bits("10")]);
    }

    #[test]
    fn perceptron_as_network() {
        let m = Mlp::from(&hire_perceptron());
        let e = mlp_explanations_exact(&m, &bits("011"), Mode::Semifactual, &[], 1 << 20).unwrap();
        assert_eq!(members(&e), [bits("000"), bits("110")]);
    }

    #[test]
    fn preferences_filter() {
        let m = Mlp::from(&hire_perceptron());
        let rule = PreferenceRule::new(
            vec![crate::Literal::neg(1), crate::Literal::pos(0)],
            vec![crate::Literal::neg(2)],
        )
        .unwrap();
        let e = mlp_explanations_exact(&m, &bits("011"), Mode::Semifactual, &[rule], 1 << 20).unwrap();
        assert_eq!(members(&e), [bits("000")]);
    }

    #[test]
    fn budget() {
        let m = crate::gen::gen_random_model(crate::gen::ModelKind::Mlp, 30, 1, &Default::default()).unwrap();
        let crate::Model::Mlp(m) = m else { panic!() };
        let x = Instance::zeros(30);
        assert!(matches!(
            mlp_explanations_exact(&m, &x, Mode::Semifactual, &[], 1_000_000),
            Err(Error::BudgetExceeded { n: 30, .. })
        ));
    }

    #[test]
    fn constant_network_has_no_counterfactual() {
        let m = Mlp::from(&crate::Perceptron::from_integers(&[0, 0], 1).unwrap());
        let e = mlp_explanations_exact(&m, &bits("01"), Mode::Counterfactual, &[], 16).unwrap();
        assert!(e.is_empty());
    }
}
