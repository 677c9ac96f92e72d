//! Side tags for disjoint unions: names from the left operand are prefixed
//! with `1.` and names from the right operand with `2.`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Left => "1.",
            Side::Right => "2.",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

pub fn tag(side: Side, name: &str) -> String {
    format!("{}{}", side.prefix(), name)
}

/// Splits a tagged name into its side and original name.
pub fn untag(name: &str) -> Option<(Side, &str)> {
    if let Some(rest) = name.strip_prefix("1.") {
        Some((Side::Left, rest))
    } else {
        name.strip_prefix("2.").map(|rest| (Side::Right, rest))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        assert_eq!(untag(&tag(Side::Left, "a.b")), Some((Side::Left, "a.b")));
        assert_eq!(untag(&tag(Side::Right, "2.x")), Some((Side::Right, "2.x")));
        assert_eq!(untag("x"), None);
    }
}
