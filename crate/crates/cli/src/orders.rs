//! Order expressions accepted by `--base` and recipe parameters.
//!
//! Grammar: `N`, `N*`, `Z`, `Q`, `ZQ`, `finite:K`, `A+B`, `sum(A,B)`,
//! `prod(A,B)` (copies of `A` indexed by `B`), `rev(A)`, and the staged
//! copies `breaker:S`, `nzq`, `colored:S`.

use std::sync::Arc;

use cohepow_core::clocked::{CeSet, ClockedFunction, Numbering};
use cohepow_core::order::{
    finite, integers, naturals, naturals_reversed, product, rationals, reverse, sum, Order,
};
use cohepow_core::staged::{build_colored_dense, build_successor_breaker, NzqCopy, StagedOrder};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderSpecError {
    #[error("unknown order expression `{0}`")]
    Unknown(String),
    #[error("bad parameter in `{0}`")]
    BadParameter(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Numbering with the two explicit total functions `4n` and `8n` in front.
pub fn gap_overlay() -> Numbering {
    Numbering::Overlay(vec![
        ClockedFunction::rule("4n", |n| 4 * n),
        ClockedFunction::rule("8n", |n| 8 * n),
    ])
}

/// Complement of the window the colored copy is built against.
pub fn colored_complement() -> CeSet {
    crate::recipe::CohesiveSource::Default
        .load()
        .expect("default window builds")
        .complement()
        .clone()
}

/// Reserved set for the breaker: odd numbers, which the evens-split window avoids.
pub fn breaker_reserved(x: u64) -> bool {
    x % 2 == 1
}

fn split_top(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn split_plus(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn number(spec: &str, s: &str) -> Result<u64, OrderSpecError> {
    s.trim()
        .parse()
        .map_err(|_| OrderSpecError::BadParameter(spec.to_string()))
}

/// The staged copies `breaker:S` and `colored:S`; `None` for other expressions.
pub fn parse_staged(spec: &str) -> Option<Result<StagedOrder, OrderSpecError>> {
    let s = spec.trim();
    if let Some(st) = s.strip_prefix("breaker:") {
        return Some(
            number(s, st)
                .map(|st| build_successor_breaker(Numbering::Interpreter, breaker_reserved, st)),
        );
    }
    let st = s.strip_prefix("colored:")?;
    Some(number(s, st).and_then(|st| {
        build_colored_dense(gap_overlay(), &colored_complement(), st)
            .map(|(o, _)| o)
            .map_err(|e| OrderSpecError::Construction(e.to_string()))
    }))
}

pub fn parse_order(spec: &str) -> Result<Order, OrderSpecError> {
    let s = spec.trim();
    if let Some((a, b)) = split_plus(s) {
        return Ok(sum(parse_order(a)?, parse_order(b)?));
    }
    let call = |name: &str| {
        s.strip_prefix(name)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    if let Some(inner) = call("sum") {
        let (a, b) = split_top(inner).ok_or_else(|| OrderSpecError::Unknown(s.into()))?;
        return Ok(sum(parse_order(a)?, parse_order(b)?));
    }
    if let Some(inner) = call("prod") {
        let (a, b) = split_top(inner).ok_or_else(|| OrderSpecError::Unknown(s.into()))?;
        return Ok(product(parse_order(a)?, parse_order(b)?));
    }
    if let Some(inner) = call("rev") {
        return Ok(reverse(parse_order(inner)?));
    }
    if let Some(k) = s.strip_prefix("finite:") {
        return Ok(finite(number(s, k)?));
    }
    if let Some(o) = parse_staged(s) {
        return Ok(Arc::new(o?));
    }
    match s {
        "N" => Ok(naturals()),
        "N*" => Ok(naturals_reversed()),
        "Z" => Ok(integers()),
        "Q" => Ok(rationals()),
        "ZQ" => Ok(product(integers(), rationals())),
        "nzq" => Ok(Arc::new(NzqCopy::over_halting_diagonal())),
        _ => Err(OrderSpecError::Unknown(s.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohepow_core::order::Components;

    #[test]
    fn parses_the_example_orders() {
        assert_eq!(parse_order("N").unwrap().less(1, 2, 0), Some(true));
        assert_eq!(parse_order("N*").unwrap().less(1, 2, 0), Some(false));
        let s = parse_order("N+ZQ").unwrap();
        assert!(matches!(s.components(), Some(Components::Sum(_))));
        let p = parse_order("prod(Z, sum(N*, N))").unwrap();
        assert!(matches!(p.components(), Some(Components::Product(_))));
        assert!(matches!(
            parse_order("rev(Q)").unwrap().components(),
            Some(Components::Reverse(_))
        ));
        assert_eq!(parse_order("finite:3").unwrap().contains(3, 0), Some(false));
        assert!(parse_order("R").is_err());
        assert!(parse_order("finite:x").is_err());
    }
}
