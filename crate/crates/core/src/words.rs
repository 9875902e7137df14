//! Digit-word arithmetic on spherically symmetric trees: nonzero-position
//! bookkeeping, binary projection, the linear-position bijection and
//! β-weights.
//!
//! Words are stored little-endian (index 0 is the rightmost digit);
//! display and parsing are big-endian so that printed strings look like
//! `0340020` with digit 0 on the right.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// A shape entry was below 2.
    ShapeEntryTooSmall { index: usize, value: u32 },
    /// Empty shape.
    EmptyShape,
    /// A digit exceeded the alphabet size at its level.
    DigitOutOfRange { index: usize, digit: u8, alphabet: u32 },
    /// The operation needs a binary word.
    NotBinary,
    /// A linear position was >= 2^n.
    PositionOutOfRange { position: u64, length: usize },
    /// Two words (or a word and a shape) disagree on length.
    LengthMismatch { left: usize, right: usize },
    /// Unparsable digit character.
    BadDigit(char),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::ShapeEntryTooSmall { index, value } => {
                write!(f, "shape entry m_{index} = {value} must be at least 2")
            }
            WordError::EmptyShape => write!(f, "shape must have at least one entry"),
            WordError::DigitOutOfRange { index, digit, alphabet } => {
                write!(f, "digit {digit} at position {index} exceeds alphabet size {alphabet}")
            }
            WordError::NotBinary => write!(f, "word is not over the alphabet {{0,1}}"),
            WordError::PositionOutOfRange { position, length } => {
                write!(f, "linear position {position} out of range for length {length}")
            }
            WordError::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            WordError::BadDigit(c) => write!(f, "cannot parse digit {c:?}"),
        }
    }
}

/// The digit-size sequence m̄ of a spherically symmetric tree, truncated to
/// a finite level. Entry `i` is the number of children of a level-`i`
/// vertex; β_i = 1/(m_i - 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    m: Vec<u32>,
}

impl TreeShape {
    pub fn new(m: Vec<u32>) -> Result<Self, WordError> {
        if m.is_empty() {
            return Err(WordError::EmptyShape);
        }
        for (i, &v) in m.iter().enumerate() {
            if v < 2 {
                return Err(WordError::ShapeEntryTooSmall { index: i, value: v });
            }
        }
        Ok(TreeShape { m })
    }

    /// Constant shape m_i = m for `len` levels.
    pub fn constant(m: u32, len: usize) -> Result<Self, WordError> {
        Self::new(alloc::vec![m; len])
    }

    /// Shape obtained by repeating `pattern` cyclically for `len` levels.
    pub fn repeating(pattern: &[u32], len: usize) -> Result<Self, WordError> {
        if pattern.is_empty() {
            return Err(WordError::EmptyShape);
        }
        Self::new((0..len).map(|i| pattern[i % pattern.len()]).collect())
    }

    /// Explicit entries, padded by the last value up to `len` levels.
    pub fn explicit(entries: &[u32], len: usize) -> Result<Self, WordError> {
        if entries.is_empty() {
            return Err(WordError::EmptyShape);
        }
        let last = *entries.last().unwrap();
        Self::new(
            (0..len)
                .map(|i| if i < entries.len() { entries[i] } else { last })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Alphabet size at level `i`.
    pub fn m(&self, i: usize) -> u32 {
        self.m[i]
    }

    pub fn entries(&self) -> &[u32] {
        &self.m
    }

    /// Largest alphabet size over the stored entries.
    pub fn bound(&self) -> u32 {
        *self.m.iter().max().unwrap()
    }

    pub fn is_binary(&self) -> bool {
        self.m.iter().all(|&v| v == 2)
    }

    /// β_i = 1/(m_i - 1).
    pub fn beta(&self, i: usize) -> Rat {
        Rat::new(BigInt::one(), BigInt::from(self.m[i] - 1))
    }

    /// Number of level-`n` vertices, ∏_{i<n} m_i.
    pub fn level_size(&self, n: usize) -> BigInt {
        self.m[..n].iter().fold(BigInt::one(), |acc, &v| acc * v)
    }
}

/// A finite digit word x_{n-1}…x_1 x_0 with x_i ∈ [m_i]. A vertex of the
/// level-n Schreier graph, or a finitely supported end padded by zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitWord {
    digits: Vec<u8>, // little-endian
}

impl DigitWord {
    /// Construct from little-endian digits.
    pub fn from_digits(digits: Vec<u8>) -> Self {
        DigitWord { digits }
    }

    pub fn zero(len: usize) -> Self {
        DigitWord { digits: alloc::vec![0; len] }
    }

    /// Parse a big-endian digit string such as "0340020".
    pub fn parse(s: &str) -> Result<Self, WordError> {
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            let d = c.to_digit(10).ok_or(WordError::BadDigit(c))? as u8;
            digits.push(d);
        }
        Ok(DigitWord { digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit(&self, i: usize) -> u8 {
        self.digits[i]
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn set_digit(&mut self, i: usize, d: u8) {
        self.digits[i] = d;
    }

    /// Check every digit against the shape's alphabet sizes.
    pub fn validate(&self, shape: &TreeShape) -> Result<(), WordError> {
        if self.digits.len() > shape.len() {
            return Err(WordError::LengthMismatch { left: self.digits.len(), right: shape.len() });
        }
        for (i, &d) in self.digits.iter().enumerate() {
            if u32::from(d) >= shape.m(i) {
                return Err(WordError::DigitOutOfRange { index: i, digit: d, alphabet: shape.m(i) });
            }
        }
        Ok(())
    }

    /// Number of nonzero digits, |x|.
    pub fn hamming_weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn is_binary(&self) -> bool {
        self.digits.iter().all(|&d| d <= 1)
    }

    /// Positions of nonzero digits, ascending.
    pub fn nonzero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.digits.iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, _)| i)
    }

    /// ℓ_t(x): position of the (t+1)-th nonzero digit from the right.
    /// Returns `Some(-1)` for t = -1 and `None` when fewer than t+1 nonzero
    /// digits exist (ℓ_t = +∞).
    pub fn ell_position(&self, t: i32) -> Option<i64> {
        assert!(t >= -1, "ell_position requires t >= -1");
        if t == -1 {
            return Some(-1);
        }
        self.nonzero_positions().nth(t as usize).map(|p| p as i64)
    }

    /// The projection π: digit i of the output is 1 iff x_i ≠ 0.
    pub fn project_binary(&self) -> DigitWord {
        DigitWord {
            digits: self.digits.iter().map(|&d| u8::from(d != 0)).collect(),
        }
    }

    /// Linear position x̂ of a binary word: bit k of the result is the
    /// parity of the number of ones at positions >= k. Bijective on
    /// {0,1}^n; the inverse is `from_linear_position`.
    pub fn linear_position(&self) -> Result<u64, WordError> {
        if !self.is_binary() {
            return Err(WordError::NotBinary);
        }
        assert!(self.digits.len() <= 63, "word too long for a u64 linear position");
        let mut parity = 0u64;
        let mut out = 0u64;
        for k in (0..self.digits.len()).rev() {
            parity ^= u64::from(self.digits[k]);
            out |= parity << k;
        }
        Ok(out)
    }

    /// Inverse of `linear_position`: x_k = x̂_k + x̂_{k+1} mod 2, i.e. the
    /// binary word is p ^ (p >> 1) written to length n.
    pub fn from_linear_position(p: u64, n: usize) -> Result<Self, WordError> {
        assert!(n <= 63);
        if p >> n != 0 {
            return Err(WordError::PositionOutOfRange { position: p, length: n });
        }
        let g = p ^ (p >> 1);
        Ok(DigitWord {
            digits: (0..n).map(|k| ((g >> k) & 1) as u8).collect(),
        })
    }

    /// Mixed-radix rank of the word under the shape, Σ x_i ∏_{j<i} m_j.
    /// Used as a dense vertex index.
    pub fn rank(&self, shape: &TreeShape) -> usize {
        let mut rank = 0usize;
        let mut scale = 1usize;
        for (i, &d) in self.digits.iter().enumerate() {
            rank += d as usize * scale;
            scale *= shape.m(i) as usize;
        }
        rank
    }

    /// Inverse of `rank` for length-n words.
    pub fn from_rank(mut rank: usize, shape: &TreeShape, n: usize) -> Self {
        let mut digits = Vec::with_capacity(n);
        for i in 0..n {
            let m = shape.m(i) as usize;
            digits.push((rank % m) as u8);
            rank /= m;
        }
        DigitWord { digits }
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in self.digits.iter().rev() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Integer linear position of a binary word; its binary digits are x̂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearPosition(pub u64);

impl fmt::Display for LinearPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// β^a = ∏_{i: a_i = 1} 1/(m_i - 1); the empty product is 1.
pub fn beta_weight(a: &DigitWord, shape: &TreeShape) -> Rat {
    let mut den = BigInt::one();
    for i in a.nonzero_positions() {
        den *= BigInt::from(shape.m(i) - 1);
    }
    Rat::new(BigInt::one(), den)
}

/// β^{-a} = ∏_{i: a_i = 1} (m_i - 1).
pub fn beta_weight_inverse(a: &DigitWord, shape: &TreeShape) -> Rat {
    let mut num = BigInt::one();
    for i in a.nonzero_positions() {
        num *= BigInt::from(shape.m(i) - 1);
    }
    Rat::from_integer(num)
}

/// Big-endian string of a word, convenience for diagnostics.
pub fn word_string(w: &DigitWord) -> String {
    alloc::format!("{w}")
}
