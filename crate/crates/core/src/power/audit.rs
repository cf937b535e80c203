//! Finite checks of transfer between the power and its window tail.

use serde::{Deserialize, Serialize};

use super::{
    canonical_embed, pointwise_verdict, power_compare, Outcome, PowerElement, PowerError, Relation,
};

/// Quantifier-free formula over `≺` and `=` with variables indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    Less(usize, usize),
    Eq(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Evaluation from an atom oracle; `None` if a needed atom is unknown.
    pub fn eval(&self, rel: &dyn Fn(usize, usize) -> Option<Relation>) -> Option<bool> {
        match self {
            Formula::Less(i, j) => Some(rel(*i, *j)? == Relation::Less),
            Formula::Eq(i, j) => Some(rel(*i, *j)? == Relation::Equal),
            Formula::Not(f) => Some(!f.eval(rel)?),
            Formula::And(a, b) => Some(a.eval(rel)? && b.eval(rel)?),
            Formula::Or(a, b) => Some(a.eval(rel)? || b.eval(rel)?),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Formula::Less(i, j) | Formula::Eq(i, j) => i.max(j) + 1,
            Formula::Not(f) => f.arity(),
            Formula::And(a, b) | Formula::Or(a, b) => a.arity().max(b.arity()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LosAudit {
    pub instances: usize,
    pub both_decided: usize,
    pub power_only: usize,
    pub tail_only: usize,
    pub neither: usize,
    pub mismatches: Vec<String>,
}

impl LosAudit {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.power_only == 0
    }
}

/// Compares the formula evaluated from decided power comparisons with the
/// tail verdict of its pointwise evaluation on the window.
pub fn los_shadow_audit(
    instances: &[(Formula, Vec<PowerElement>)],
) -> Result<LosAudit, PowerError> {
    let mut audit = LosAudit::default();
    for (phi, params) in instances {
        if phi.arity() > params.len() {
            return Err(PowerError::Precondition(format!(
                "{phi:?} needs {} parameters",
                phi.arity()
            )));
        }
        audit.instances += 1;
        let mut table = vec![vec![None; params.len()]; params.len()];
        for (i, a) in params.iter().enumerate() {
            for (j, b) in params.iter().enumerate() {
                if let Outcome::Decided(r) = power_compare(a, b)?.outcome {
                    table[i][j] = Some(r);
                }
            }
        }
        let power = phi.eval(&|i, j| table[i][j]);
        let ctx = params[0].context().clone();
        let refs: Vec<&PowerElement> = params.iter().collect();
        let tail = pointwise_verdict(&refs, |vals| {
            phi.eval(&|i, j| {
                let (a, b) = (vals[i], vals[j]);
                if a == b {
                    return Some(Relation::Equal);
                }
                ctx.lt(a, b).map(|lt| {
                    if lt {
                        Relation::Less
                    } else {
                        Relation::Greater
                    }
                })
            })
        })?;
        match (power, tail.decided()) {
            (Some(p), Some(t)) => {
                audit.both_decided += 1;
                if p != *t {
                    audit
                        .mismatches
                        .push(format!("{phi:?}: power {p}, tail {t}"));
                }
            }
            (Some(_), None) => audit.power_only += 1,
            (None, Some(_)) => audit.tail_only += 1,
            (None, None) => audit.neither += 1,
        }
    }
    Ok(audit)
}

/// For `x ≺ embed(a)` over a copy of ω, the `b ≺ a` with `x = embed(b)`.
/// `Ok(None)` means no predecessor of `a` matches.
pub fn initial_segment_law(x: &PowerElement, a: u64) -> Result<Option<u64>, PowerError> {
    let ctx = x.context();
    let ea = canonical_embed(ctx, a)?;
    if !power_compare(x, &ea)?.is(&Relation::Less) {
        return Err(PowerError::Precondition(format!(
            "{} ≺ embed({a}) is not decided",
            x.label()
        )));
    }
    let preds: Vec<u64> = match ctx.base().predecessors(a, ctx.budget()) {
        Some(p) => p,
        None => (0..=ctx.pair_horizon(a, a))
            .filter(|&b| b != a && ctx.member(b) == Some(true) && ctx.lt(b, a) == Some(true))
            .collect(),
    };
    let mut found = None;
    for b in preds {
        if power_compare(x, &canonical_embed(ctx, b)?)?.is(&Relation::Equal) {
            if found.is_some() {
                return Err(PowerError::Precondition(
                    "two embeds equal the same element".into(),
                ));
            }
            found = Some(b);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::clocked::ClockedFunction;
    use crate::power::tests::nat_ctx;

    fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
        if depth == 0 || rng.gen_bool(0.3) {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            return if rng.gen_bool(0.6) {
                Formula::Less(i, j)
            } else {
                Formula::Eq(i, j)
            };
        }
        match rng.gen_range(0..3) {
            0 => Formula::Not(Box::new(random_formula(rng, depth - 1))),
            1 => Formula::And(
                Box::new(random_formula(rng, depth - 1)),
                Box::new(random_formula(rng, depth - 1)),
            ),
            _ => Formula::Or(
                Box::new(random_formula(rng, depth - 1)),
                Box::new(random_formula(rng, depth - 1)),
            ),
        }
    }

    #[test]
    fn hundred_random_instances() {
        let ctx = nat_ctx(128);
        let pool: Vec<PowerElement> = [
            ClockedFunction::identity(),
            ClockedFunction::constant(9),
            ClockedFunction::rule("2n", |n| 2 * n),
            ClockedFunction::rule("n+1", |n| n + 1),
            ClockedFunction::rule("n mod 3", |n| n % 3),
            ClockedFunction::rule("128-n", |n| 128 - n),
        ]
        .into_iter()
        .map(|f| PowerElement::new(&ctx, f).unwrap())
        .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let instances: Vec<(Formula, Vec<PowerElement>)> = (0..100)
            .map(|_| {
                let phi = random_formula(&mut rng, 3);
                let params = (0..3)
                    .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                    .collect();
                (phi, params)
            })
            .collect();
        let audit = los_shadow_audit(&instances).unwrap();
        assert_eq!(audit.instances, 100);
        assert!(audit.passed(), "{audit:?}");
        assert!(audit.both_decided > 50);
    }

    #[test]
    fn initial_segment() {
        let ctx = nat_ctx(64);
        let x = PowerElement::new(
            &ctx,
            ClockedFunction::rule("n<8 ? n : 3", |n| if n < 8 { n } else { 3 }),
        )
        .unwrap();
        assert_eq!(initial_segment_law(&x, 10).unwrap(), Some(3));
        let id = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        assert!(initial_segment_law(&id, 10).is_err());
    }
}
