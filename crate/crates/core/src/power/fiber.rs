//! Fibers of a shuffle power over one projection class.

use std::sync::Arc;

use super::{
    far_apart_test, power_compare, same_order, tail_verdict, PowerContext, PowerElement,
    PowerError, Relation, Verdict,
};
use crate::clocked::{checked_pair, left, right, ClockedFunction, Descriptor, Eval};
use crate::order::{ComputableOrder, Order};
use crate::staged::Shuffle;

/// Fibers longer than this are treated as unfinished.
pub const FIBER_CAP: u64 = 1 << 16;

fn fiber_len(m: &Shuffle, x: u64, budget: u64) -> Option<u64> {
    for i in 0..FIBER_CAP {
        match m.contains(checked_pair(x, i)?, budget)? {
            true => {}
            false => return Some(i),
        }
    }
    None
}

/// The elements whose first coordinate agrees with `χ` on the tail, with
/// the least and greatest of them.
#[derive(Clone)]
pub struct ProjectionFiber {
    shuffle: Arc<Shuffle>,
    pub chi: PowerElement,
    /// `⟨π₀χ(n), 0⟩`.
    pub lambda: PowerElement,
    /// `⟨π₀χ(n), top index⟩`.
    pub rho: PowerElement,
}

impl std::fmt::Debug for ProjectionFiber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProjectionFiber")
            .field("shuffle", &self.shuffle.name())
            .field("chi", &self.chi)
            .finish()
    }
}

pub fn projection_fiber(
    m: &Arc<Shuffle>,
    chi: &PowerElement,
) -> Result<ProjectionFiber, PowerError> {
    let as_order: Order = m.clone();
    if !same_order(chi.context().base(), &as_order) {
        return Err(PowerError::IncompatibleContexts);
    }
    let ctx = chi.context();
    let lambda = PowerElement::labeled(
        ctx,
        chi.representative()
            .map_partial("λ", |z| checked_pair(left(z), 0)),
        format!("λ({})", chi.label()),
    )?;
    let (r, sh) = (chi.representative().clone(), Arc::clone(m));
    let label = format!("ρ({})", chi.label());
    let rho_f = ClockedFunction::from_fn(Descriptor::Rule(label.clone()), move |n, s| {
        let Eval::Value(z) = r.eval(n, s) else {
            return Eval::Pending;
        };
        let x = left(z);
        match fiber_len(&sh, x, s) {
            Some(k) if k > 0 => checked_pair(x, k - 1).into(),
            _ => Eval::Pending,
        }
    });
    let rho = PowerElement::labeled(ctx, rho_f, label)?;
    Ok(ProjectionFiber {
        shuffle: Arc::clone(m),
        chi: chi.clone(),
        lambda,
        rho,
    })
}

impl ProjectionFiber {
    fn ctx(&self) -> &Arc<PowerContext> {
        self.chi.context()
    }

    /// `π₀∘ψ = π₀∘χ` on the tail.
    pub fn contains(&self, psi: &PowerElement) -> Result<Verdict<bool>, PowerError> {
        psi.check_shared(&self.chi)?;
        let j: Vec<Option<bool>> = psi
            .values()
            .iter()
            .zip(self.chi.values())
            .map(|(a, b)| Some(left((*a)?) == left((*b)?)))
            .collect();
        Ok(tail_verdict(self.ctx().window(), &j, self.ctx().budget()))
    }

    fn require_member(&self, psi: &PowerElement) -> Result<(), PowerError> {
        if self.contains(psi)?.is(&true) {
            Ok(())
        } else {
            Err(PowerError::Precondition(format!(
                "{} is not in the fiber of {}",
                psi.label(),
                self.chi.label()
            )))
        }
    }

    /// Fiber length at each window element.
    pub fn lengths(&self) -> Vec<Option<u64>> {
        let budget = self.ctx().budget();
        self.chi
            .values()
            .iter()
            .map(|z| fiber_len(&self.shuffle, left((*z)?), budget))
            .collect()
    }

    /// `ψ_i(n) = ⟨π₀χ(n), i⟩` for every `i` below the eventual fiber length.
    pub fn members(&self) -> Result<Vec<PowerElement>, PowerError> {
        let ctx = self.ctx();
        let Some(&k) = tail_verdict(ctx.window(), &self.lengths(), ctx.budget()).decided() else {
            return Err(PowerError::Precondition(
                "fiber length is not eventually constant".into(),
            ));
        };
        (0..k)
            .map(|i| {
                let f = self
                    .chi
                    .representative()
                    .map_partial("ψ", move |z| checked_pair(left(z), i));
                PowerElement::labeled(ctx, f, format!("⟨π0∘{}, {i}⟩", self.chi.label()))
            })
            .collect()
    }

    /// `⟨π₀φ(n), π₁φ(n) + 1⟩` while that stays in the fiber.
    pub fn successor(&self, phi: &PowerElement) -> Result<PowerElement, PowerError> {
        self.require_member(phi)?;
        if power_compare(phi, &self.rho)?.is(&Relation::Equal) {
            return Err(PowerError::Precondition(format!(
                "{} is the greatest in its fiber",
                phi.label()
            )));
        }
        let (r, sh) = (phi.representative().clone(), Arc::clone(&self.shuffle));
        let label = format!("{}⁺", phi.label());
        let f = ClockedFunction::from_fn(Descriptor::Rule(label.clone()), move |n, s| {
            let Eval::Value(z) = r.eval(n, s) else {
                return Eval::Pending;
            };
            let (x, i) = (left(z), right(z));
            match fiber_len(&sh, x, s) {
                Some(k) if i + 1 < k => checked_pair(x, i + 1).into(),
                _ => Eval::Pending,
            }
        });
        PowerElement::labeled(self.ctx(), f, label)
    }

    /// `⟨π₀φ(n), π₁φ(n) ∸ 1⟩`; `φ` must not be the least of the fiber.
    pub fn predecessor(&self, phi: &PowerElement) -> Result<PowerElement, PowerError> {
        self.require_member(phi)?;
        let positive: Vec<Option<bool>> = phi
            .values()
            .iter()
            .map(|z| z.map(|z| right(z) > 0))
            .collect();
        if !tail_verdict(self.ctx().window(), &positive, self.ctx().budget()).is(&true) {
            return Err(PowerError::Precondition(format!(
                "{} is the least in its fiber",
                phi.label()
            )));
        }
        let f = phi.representative().map_partial("pred", |z| {
            checked_pair(left(z), right(z).saturating_sub(1))
        });
        PowerElement::labeled(self.ctx(), f, format!("{}⁻", phi.label()))
    }

    /// `⟨π₀χ(n), ⌊(π₁ψ(n) + π₁φ(n))/2⌋⟩` where all three first coordinates agree.
    pub fn midpoint(
        &self,
        psi: &PowerElement,
        phi: &PowerElement,
    ) -> Result<PowerElement, PowerError> {
        self.require_member(psi)?;
        self.require_member(phi)?;
        if !far_apart_test(psi, phi)?.is(&true) {
            return Err(PowerError::Precondition(format!(
                "{} ≪ {} is not decided",
                psi.label(),
                phi.label()
            )));
        }
        let (c, a, b) = (
            self.chi.representative().clone(),
            psi.representative().clone(),
            phi.representative().clone(),
        );
        let label = format!("mid({}, {})", psi.label(), phi.label());
        let f = ClockedFunction::from_fn(Descriptor::Rule(label.clone()), move |n, s| {
            let (Eval::Value(zc), Eval::Value(za), Eval::Value(zb)) =
                (c.eval(n, s), a.eval(n, s), b.eval(n, s))
            else {
                return Eval::Pending;
            };
            let x = left(zc);
            if left(za) != x || left(zb) != x {
                return Eval::Pending;
            }
            checked_pair(x, (right(za) + right(zb)) / 2).into()
        });
        PowerElement::labeled(self.ctx(), f, label)
    }
}
