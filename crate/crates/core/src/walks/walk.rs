use std::fmt;

use super::step::{format_steps, Step};
use crate::{Error, Result};

/// A validated `s`-colored Motzkin walk with its height profile and area.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    steps: Vec<Step>,
    heights: Vec<u32>,
    area: u64,
}

impl Walk {
    /// Validates `steps` as an `s`-colored Motzkin walk.
    pub fn validate(steps: &[Step], s: usize) -> Result<Walk> {
        if steps.is_empty() || steps.len() % 2 != 0 {
            return Err(Error::OddLength(steps.len()));
        }
        let mut heights = Vec::with_capacity(steps.len() + 1);
        heights.push(0u32);
        let mut open: Vec<u8> = Vec::new();
        for (i, &step) in steps.iter().enumerate() {
            let position = i + 1;
            if let Some(color) = step.color() {
                if color == 0 || color as usize > s {
                    return Err(Error::ColorOutOfRange { position, color, s });
                }
            }
            match step {
                Step::Up(c) => open.push(c),
                Step::Flat => {}
                Step::Down(c) => match open.pop() {
                    None => return Err(Error::NegativeHeight { position }),
                    Some(expected) if expected != c => {
                        return Err(Error::ColorMismatch {
                            position,
                            expected,
                            found: c,
                        })
                    }
                    Some(_) => {}
                },
            }
            heights.push(open.len() as u32);
        }
        if !open.is_empty() {
            return Err(Error::NonzeroEndpoint {
                height: open.len() as u32,
            });
        }
        let area = area_of_heights(&heights);
        Ok(Walk {
            steps: steps.to_vec(),
            heights,
            area,
        })
    }

    /// Builds a walk from parts already known to be consistent.
    pub(crate) fn from_parts(steps: Vec<Step>, heights: Vec<u32>, area: u64) -> Walk {
        debug_assert_eq!(area, area_of_heights(&heights));
        Walk {
            steps,
            heights,
            area,
        }
    }

    pub fn parse(text: &str, s: usize) -> Result<Walk> {
        Walk::validate(&super::parse_steps(text)?, s)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Heights `h_0, …, h_{2n}`.
    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Half-length `n`.
    pub fn n(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn area(&self) -> u64 {
        self.area
    }

    /// Height `h_n` at the middle of the chain.
    pub fn midpoint_height(&self) -> u32 {
        self.heights[self.n()]
    }

    /// All interior heights `h_1, …, h_{2n−1}` are positive.
    pub fn is_prime(&self) -> bool {
        let len = self.steps.len();
        self.heights[1..len].iter().all(|&h| h > 0)
    }

    pub fn color_flip(&self, s: usize) -> Walk {
        Walk {
            steps: self.steps.iter().map(|st| st.flip(s)).collect(),
            heights: self.heights.clone(),
            area: self.area,
        }
    }

    /// Concatenation of two walks; area is additive.
    pub fn concat(&self, other: &Walk) -> Walk {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        let mut heights = self.heights.clone();
        heights.extend_from_slice(&other.heights[1..]);
        Walk {
            steps,
            heights,
            area: self.area + other.area,
        }
    }

    /// The tent `(u^c)^n (d^c)^n`, the unique shape with area `n²`.
    pub fn tent(n: usize, color: u8) -> Walk {
        let mut steps = vec![Step::Up(color); n];
        steps.extend(std::iter::repeat(Step::Down(color)).take(n));
        Walk::validate(&steps, color as usize).expect("tent is a valid walk")
    }

    pub fn flat(n: usize) -> Walk {
        Walk {
            steps: vec![Step::Flat; 2 * n],
            heights: vec![0; 2 * n + 1],
            area: 0,
        }
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_steps(&self.steps))
    }
}

/// Area `½ Σ (h_{j−1} + h_j)`, accumulated doubled.
pub(crate) fn area_of_heights(heights: &[u32]) -> u64 {
    let doubled: u64 = heights
        .windows(2)
        .map(|w| w[0] as u64 + w[1] as u64)
        .sum();
    assert!(doubled % 2 == 0, "doubled area {doubled} of a closed walk must be even");
    doubled / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(text: &str, s: usize) -> Walk {
        Walk::parse(text, s).unwrap()
    }

    #[test]
    fn flat_walk() {
        let w = walk("0.0", 1);
        assert_eq!(w.heights(), &[0, 0, 0]);
        assert_eq!(w.area(), 0);
        assert_eq!(w, Walk::flat(1));
    }

    #[test]
    fn areas() {
        assert_eq!(walk("u1.u1.d1.d1", 1).area(), 4);
        assert_eq!(walk("0.u1.d1.0", 1).area(), 1);
        assert_eq!(walk("u1.0.0.d1", 1).area(), 3);
        for n in 1..8 {
            assert_eq!(Walk::tent(n, 1).area(), (n * n) as u64);
        }
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            Walk::parse("u1.d2", 2),
            Err(Error::ColorMismatch { position: 2, expected: 1, found: 2 })
        ));
        assert!(matches!(Walk::parse("u1.0.d1", 1), Err(Error::OddLength(3))));
        assert!(matches!(
            Walk::parse("d1.u1", 1),
            Err(Error::NegativeHeight { position: 1 })
        ));
        assert!(matches!(
            Walk::parse("u1.u1", 1),
            Err(Error::NonzeroEndpoint { height: 2 })
        ));
        assert!(matches!(
            Walk::parse("u3.d3", 2),
            Err(Error::ColorOutOfRange { color: 3, .. })
        ));
        assert!(matches!(Walk::validate(&[], 1), Err(Error::OddLength(0))));
    }

    #[test]
    fn primality() {
        assert!(walk("u1.u1.d1.d1", 1).is_prime());
        assert!(!walk("u1.d1.u1.d1", 1).is_prime());
        assert!(!walk("0.0", 1).is_prime());
        assert!(walk("u1.d1", 1).is_prime());
        assert!(walk("u2.0.0.d2", 2).is_prime());
    }

    #[test]
    fn flips() {
        assert_eq!(walk("u1.d1", 2).color_flip(2), walk("u2.d2", 2));
        assert_eq!(walk("0.0.0.0", 3).color_flip(3), walk("0.0.0.0", 3));
        let w = walk("u1.u3.d3.0.d1.0", 3);
        assert_eq!(w.color_flip(3).color_flip(3), w);
        assert_eq!(w.color_flip(3).to_string(), "u3.u1.d1.0.d3.0");
    }

    #[test]
    fn concat_adds_area() {
        let a = walk("u1.0.0.d1", 1);
        let b = walk("u1.u1.d1.d1", 1);
        let ab = a.concat(&b);
        assert_eq!(ab.area(), a.area() + b.area());
        assert_eq!(Walk::validate(ab.steps(), 1).unwrap(), ab);
    }
}
