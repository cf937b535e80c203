use std::fmt;

use serde::{Deserialize, Serialize};

/// Symbolic order-type labels used to annotate expectations in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderTypeTag {
    Omega,
    OmegaStar,
    Zeta,
    Eta,
    Finite(u64),
    ZetaEta,
    OmegaPlusZetaEta,
    OmegaPlusEta,
    /// `ω + ζη + ω*`
    Alpha,
    Shuffle(String),
    Sum(Box<OrderTypeTag>, Box<OrderTypeTag>),
    Product(Box<OrderTypeTag>, Box<OrderTypeTag>),
    Reverse(Box<OrderTypeTag>),
    Unknown,
}

impl fmt::Display for OrderTypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OrderTypeTag::*;
        match self {
            Omega => write!(f, "ω"),
            OmegaStar => write!(f, "ω*"),
            Zeta => write!(f, "ζ"),
            Eta => write!(f, "η"),
            Finite(k) => write!(f, "{k}"),
            ZetaEta => write!(f, "ζη"),
            OmegaPlusZetaEta => write!(f, "ω+ζη"),
            OmegaPlusEta => write!(f, "ω+η"),
            Alpha => write!(f, "ω+ζη+ω*"),
            Shuffle(d) => write!(f, "σ({d})"),
            Sum(a, b) => write!(f, "({a} + {b})"),
            Product(a, b) => write!(f, "({a}·{b})"),
            Reverse(a) => write!(f, "({a})*"),
            Unknown => write!(f, "?"),
        }
    }
}
