use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::blocks::{first_between, witness_on_tail};
use super::{classify_standard, power_compare, PowerElement, PowerError, Relation};
use crate::clocked::{ClockedFunction, Descriptor, Eval};
use crate::order::Coloring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorTarget {
    Solid(u64),
    /// Color equal to the value of the upper endpoint.
    Striped,
}

/// First `k` strictly between `x(n)` and `y(n)` with the requested color.
pub fn color_density_witness(
    x: &PowerElement,
    y: &PowerElement,
    f: &Coloring,
    target: ColorTarget,
) -> Result<PowerElement, PowerError> {
    for e in [x, y] {
        if !classify_standard(e).is_nonstandard() {
            return Err(PowerError::Precondition(format!(
                "{} is not shown nonstandard",
                e.label()
            )));
        }
    }
    let v = power_compare(x, y)?;
    if !v.is(&Relation::Less) {
        return Err(PowerError::Precondition(format!(
            "{} ≺ {} is not decided",
            x.label(),
            y.label()
        )));
    }
    let ctx = Arc::clone(x.context());
    let (xr, yr, c, f) = (
        x.representative().clone(),
        y.representative().clone(),
        Arc::clone(&ctx),
        Arc::clone(f),
    );
    let name = match target {
        ColorTarget::Solid(d) => format!("color{d}({}, {})", x.label(), y.label()),
        ColorTarget::Striped => format!("striped({}, {})", x.label(), y.label()),
    };
    let theta = ClockedFunction::from_fn(Descriptor::Rule(name), move |n, s| {
        let (Eval::Value(a), Eval::Value(b)) = (xr.eval(n, s), yr.eval(n, s)) else {
            return Eval::Pending;
        };
        let d = match target {
            ColorTarget::Solid(d) => d,
            ColorTarget::Striped => b,
        };
        first_between(&c, a, b, |k| f(k) == Some(d)).into()
    });
    witness_on_tail(&ctx, theta, v.evidence.cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::tests::nat_ctx;
    use crate::power::{induced_color, ColorKind};

    #[test]
    fn colors_by_residue() {
        let ctx = nat_ctx(128);
        let x = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let y = PowerElement::new(&ctx, ClockedFunction::rule("3n+8", |n| 3 * n + 8)).unwrap();
        let f: Coloring = Arc::new(|k| Some(k % 5));
        for d in 0..5 {
            let t = color_density_witness(&x, &y, &f, ColorTarget::Solid(d)).unwrap();
            assert_eq!(induced_color(&f, &t).kind, ColorKind::Solid(d));
            assert!(power_compare(&x, &t).unwrap().is(&Relation::Less));
            assert!(power_compare(&t, &y).unwrap().is(&Relation::Less));
        }
        match color_density_witness(&x, &y, &f, ColorTarget::Solid(7)) {
            Err(PowerError::NotFound { failing }) => assert_eq!(failing.len(), 128),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn striped_variant() {
        let ctx = nat_ctx(128);
        let x = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let y = PowerElement::new(&ctx, ClockedFunction::rule("2n+2", |n| 2 * n + 2)).unwrap();
        // F(k) = k+1: the point before y(n) has color y(n)
        let f: Coloring = Arc::new(|k| Some(k + 1));
        let t = color_density_witness(&x, &y, &f, ColorTarget::Striped).unwrap();
        assert!(t
            .values()
            .iter()
            .enumerate()
            .all(|(n, v)| *v == Some(2 * n as u64 + 1)));
        assert!(matches!(
            induced_color(&f, &t).kind,
            ColorKind::StripedEvidence(_)
        ));
    }

    #[test]
    fn standard_endpoints_are_refused() {
        let ctx = nat_ctx(64);
        let x = PowerElement::new(&ctx, ClockedFunction::constant(1)).unwrap();
        let y = PowerElement::new(&ctx, ClockedFunction::identity()).unwrap();
        let f: Coloring = Arc::new(|_| Some(0));
        assert!(matches!(
            color_density_witness(&x, &y, &f, ColorTarget::Solid(0)),
            Err(PowerError::Precondition(_))
        ));
    }
}
