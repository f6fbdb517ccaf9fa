use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A tape cell: the left end-marker `¢`, an input letter, or the right end-marker `$`.
///
/// The derived order puts `¢` first and `$` last, with letters in between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TapeSymbol {
    Cent,
    Letter(char),
    Dollar,
}

impl TapeSymbol {
    /// File-format key: `cent`, `dollar`, or the letter itself.
    pub fn key(&self) -> String {
        match self {
            TapeSymbol::Cent => "cent".to_string(),
            TapeSymbol::Dollar => "dollar".to_string(),
            TapeSymbol::Letter(c) => c.to_string(),
        }
    }

    /// Tape alphabet `Γ = {¢} ∪ Σ ∪ {$}` in canonical order.
    pub fn tape_alphabet(sigma: &[char]) -> Vec<TapeSymbol> {
        std::iter::once(TapeSymbol::Cent)
            .chain(sigma.iter().map(|&c| TapeSymbol::Letter(c)))
            .chain(std::iter::once(TapeSymbol::Dollar))
            .collect()
    }
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSymbol::Cent => write!(f, "¢"),
            TapeSymbol::Dollar => write!(f, "$"),
            TapeSymbol::Letter(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tape symbol {0:?}")]
pub struct UnknownSymbol(pub String);

impl FromStr for TapeSymbol {
    type Err = UnknownSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cent" => Ok(TapeSymbol::Cent),
            "dollar" => Ok(TapeSymbol::Dollar),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(TapeSymbol::Letter(c)),
                    _ => Err(UnknownSymbol(s.to_string())),
                }
            }
        }
    }
}

/// Head movement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Left,
    Stay,
    Right,
}

impl Dir {
    pub fn as_i8(self) -> i8 {
        match self {
            Dir::Left => -1,
            Dir::Stay => 0,
            Dir::Right => 1,
        }
    }

    pub fn from_i64(d: i64) -> Option<Dir> {
        match d {
            -1 => Some(Dir::Left),
            0 => Some(Dir::Stay),
            1 => Some(Dir::Right),
            _ => None,
        }
    }

    /// New head position, or `None` when it would fall below 0.
    pub fn apply(self, head: usize) -> Option<usize> {
        match self {
            Dir::Left => head.checked_sub(1),
            Dir::Stay => Some(head),
            Dir::Right => head.checked_add(1),
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// The tape `¢ x $`; positions run from 0 (`¢`) to `n + 1` (`$`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<TapeSymbol>,
}

impl Tape {
    pub fn new(input: &str) -> Self {
        let cells = std::iter::once(TapeSymbol::Cent)
            .chain(input.chars().map(TapeSymbol::Letter))
            .chain(std::iter::once(TapeSymbol::Dollar))
            .collect();
        Tape { cells }
    }

    /// Builds the tape after checking every letter belongs to `sigma`.
    pub fn checked(input: &str, sigma: &[char]) -> Result<Self, char> {
        match input.chars().find(|c| !sigma.contains(c)) {
            Some(c) => Err(c),
            None => Ok(Tape::new(input)),
        }
    }

    /// Number of input letters `n`.
    pub fn input_len(&self) -> usize {
        self.cells.len() - 2
    }

    /// Position of `$`.
    pub fn last(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn get(&self, pos: usize) -> Option<TapeSymbol> {
        self.cells.get(pos).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tape_layout() {
        let t = Tape::new("ab");
        assert_eq!(t.input_len(), 2);
        assert_eq!(t.last(), 3);
        assert_eq!(t.get(0), Some(TapeSymbol::Cent));
        assert_eq!(t.get(2), Some(TapeSymbol::Letter('b')));
        assert_eq!(t.get(3), Some(TapeSymbol::Dollar));
        assert_eq!(t.get(4), None);
        assert_eq!(Tape::new("").last(), 1);
    }

    #[test]
    fn symbol_keys() {
        for s in [TapeSymbol::Cent, TapeSymbol::Letter('a'), TapeSymbol::Letter(':'), TapeSymbol::Dollar] {
            assert_eq!(s.key().parse::<TapeSymbol>().unwrap(), s);
        }
        assert!("ab".parse::<TapeSymbol>().is_err());
        assert!("".parse::<TapeSymbol>().is_err());
    }

    #[test]
    fn checked_rejects_foreign_letters() {
        assert_eq!(Tape::checked("abc", &['a', 'b']), Err('c'));
        assert!(Tape::checked("", &[]).is_ok());
    }

    #[test]
    fn head_moves() {
        assert_eq!(Dir::Left.apply(0), None);
        assert_eq!(Dir::Right.apply(3), Some(4));
        assert_eq!(Dir::from_i64(2), None);
    }
}
