use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// One site of the chain: an up or down step carrying a color in `1..=s`,
/// or an uncolored flat step.
///
/// The derived order (`Up < Flat < Down`, then ascending color) is the
/// canonical enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up(u8),
    Flat,
    Down(u8),
}

impl Step {
    pub fn color(self) -> Option<u8> {
        match self {
            Step::Up(c) | Step::Down(c) => Some(c),
            Step::Flat => None,
        }
    }

    pub fn dh(self) -> i32 {
        match self {
            Step::Up(_) => 1,
            Step::Flat => 0,
            Step::Down(_) => -1,
        }
    }

    /// Position of this label in the local basis of dimension `2s + 1`:
    /// `u¹..uˢ, 0, d¹..dˢ`.
    pub fn code(self, s: usize) -> usize {
        match self {
            Step::Up(c) => c as usize - 1,
            Step::Flat => s,
            Step::Down(c) => s + c as usize,
        }
    }

    pub fn from_code(code: usize, s: usize) -> Step {
        match code.cmp(&s) {
            std::cmp::Ordering::Less => Step::Up(code as u8 + 1),
            std::cmp::Ordering::Equal => Step::Flat,
            std::cmp::Ordering::Greater => Step::Down((code - s) as u8),
        }
    }

    /// Color relabeling `i → s − i + 1`.
    pub fn flip(self, s: usize) -> Step {
        let f = |c: u8| (s as u8 + 1) - c;
        match self {
            Step::Up(c) => Step::Up(f(c)),
            Step::Flat => Step::Flat,
            Step::Down(c) => Step::Down(f(c)),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Up(c) => write!(f, "u{c}"),
            Step::Flat => f.write_str("0"),
            Step::Down(c) => write!(f, "d{c}"),
        }
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::ParseStep(tok.to_string());
        if tok == "0" {
            return Ok(Step::Flat);
        }
        let (kind, color) = tok.split_at(tok.len().min(1));
        let color: u8 = color.parse().map_err(|_| bad())?;
        if color == 0 {
            return Err(bad());
        }
        match kind {
            "u" => Ok(Step::Up(color)),
            "d" => Ok(Step::Down(color)),
            _ => Err(bad()),
        }
    }
}

/// Parses the dotted text form, e.g. `"u1.0.0.d1"`.
pub fn parse_steps(text: &str) -> Result<Vec<Step>> {
    text.trim().split('.').map(str::parse).collect()
}

pub fn format_steps(steps: &[Step]) -> String {
    steps.iter().map(Step::to_string).collect::<Vec<_>>().join(".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tokens() {
        assert_eq!(
            parse_steps("u1.0.d12").unwrap(),
            vec![Step::Up(1), Step::Flat, Step::Down(12)]
        );
        for bad in ["", "x1", "u", "u0", "d-1", "u1..d1", "01"] {
            assert!(parse_steps(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn text_round_trip() {
        let steps = vec![Step::Up(2), Step::Flat, Step::Down(2)];
        assert_eq!(parse_steps(&format_steps(&steps)).unwrap(), steps);
    }

    #[test]
    fn order_and_codes() {
        assert!(Step::Up(2) < Step::Flat && Step::Flat < Step::Down(1));
        assert!(Step::Up(1) < Step::Up(2));
        for s in 1..4 {
            for code in 0..2 * s + 1 {
                assert_eq!(Step::from_code(code, s).code(s), code);
            }
        }
    }
}
