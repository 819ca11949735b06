//! Rigid surjections, choice injections and the connections built from them.
//!
//! A connection over an alphabet `A` is a pair `(r, c)`: `r` sends each of the
//! `L` numeric positions either to a letter of `A` or to one of `K` classes,
//! and `c` picks one representative of every class inside the window that
//! starts at the class's first occurrence and ends just before the next class
//! opens. Letters are never stored as positions; the identity on `A` is
//! implicit.

mod enumerate;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{
    connections, enumerate_space, increasing_injections, reducts, rigid_surjections,
    segment_set, stirling2, Mode, SpaceElement, SpaceSpec,
};
pub use text::{format_connection, infer_alphabet, parse_connection, parse_tokens, ConnectionJson};

/// A finite alphabet `α0 < α1 < ...`; every letter precedes every numeral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet(pub usize);

impl Alphabet {
    pub const EMPTY: Alphabet = Alphabet(0);

    pub fn size(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The alphabet with one more letter appended at the top.
    pub fn extended(self) -> Alphabet {
        Alphabet(self.0 + 1)
    }

    pub fn contains(self, letter: usize) -> bool {
        letter < self.0
    }
}

/// One value of a surjection: a letter of the alphabet or a class number.
///
/// The derived order puts every letter before every numeral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Letter(usize),
    Num(usize),
}

impl Token {
    pub fn num(self) -> Option<usize> {
        match self {
            Token::Num(n) => Some(n),
            Token::Letter(_) => None,
        }
    }

    pub fn is_letter(self) -> bool {
        matches!(self, Token::Letter(_))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Token::Num(n) => write!(f, "{n}"),
            Token::Letter(l) if l < 26 => write!(f, "{}", (b'a' + l as u8) as char),
            Token::Letter(l) => write!(f, "#{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LetterOutsideAlphabet { position: usize, letter: usize },
    FirstNumeralNotZero { position: usize, value: usize },
    GrowthJump { position: usize, value: usize, max_seen: usize },
    ChoiceCount { expected: usize, found: usize },
    ChoiceNotIncreasing { class: usize },
    ChoiceOutOfDomain { class: usize, value: usize },
    ChoiceWrongClass { class: usize, value: usize },
    ChoiceOutsideWindow { class: usize, value: usize, start: usize, end: usize },
}

impl Violation {
    /// Stable short code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::LetterOutsideAlphabet { .. } => "letter-outside-alphabet",
            Violation::FirstNumeralNotZero { .. } => "first-numeral-not-zero",
            Violation::GrowthJump { .. } => "restricted-growth",
            Violation::ChoiceCount { .. } => "choice-count",
            Violation::ChoiceNotIncreasing { .. } => "choice-not-increasing",
            Violation::ChoiceOutOfDomain { .. } => "choice-out-of-domain",
            Violation::ChoiceWrongClass { .. } => "choice-wrong-class",
            Violation::ChoiceOutsideWindow { .. } => "choice-outside-window",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::LetterOutsideAlphabet { position, letter } => {
                write!(f, "{} at position {position} (letter #{letter})", self.code())
            }
            Violation::FirstNumeralNotZero { position, value } => {
                write!(f, "{} at position {position} (found {value})", self.code())
            }
            Violation::GrowthJump { position, value, max_seen } => write!(
                f,
                "{} at position {position} ({value} follows max {max_seen})",
                self.code()
            ),
            Violation::ChoiceCount { expected, found } => {
                write!(f, "{} (expected {expected}, found {found})", self.code())
            }
            Violation::ChoiceNotIncreasing { class } => {
                write!(f, "{} at class {class}", self.code())
            }
            Violation::ChoiceOutOfDomain { class, value }
            | Violation::ChoiceWrongClass { class, value } => {
                write!(f, "{} at class {class} (value {value})", self.code())
            }
            Violation::ChoiceOutsideWindow { class, value, start, end } => write!(
                f,
                "{} at class {class} (value {value} not in [{start},{end}))",
                self.code()
            ),
        }
    }
}

/// Outcome of [`validate_connection`]; `len` and `image` are always filled in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub len: usize,
    pub image: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok L={} K={}", self.len, self.image);
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn surjection_violations(tokens: &[Token], alphabet: Alphabet, out: &mut Vec<Violation>) -> usize {
    let mut max_seen: Option<usize> = None;
    for (position, &tok) in tokens.iter().enumerate() {
        match tok {
            Token::Letter(letter) => {
                if !alphabet.contains(letter) {
                    out.push(Violation::LetterOutsideAlphabet { position, letter });
                }
            }
            Token::Num(value) => match max_seen {
                None if value != 0 => {
                    out.push(Violation::FirstNumeralNotZero { position, value });
                    max_seen = Some(value);
                }
                Some(max) if value > max + 1 => {
                    out.push(Violation::GrowthJump { position, value, max_seen: max });
                    max_seen = Some(value);
                }
                _ => max_seen = Some(max_seen.map_or(value, |m| m.max(value))),
            },
        }
    }
    max_seen.map_or(0, |m| m + 1)
}

/// First occurrence of each class, followed by `L` as the closing bound.
fn class_starts(tokens: &[Token], image: usize) -> Vec<usize> {
    let mut starts = vec![usize::MAX; image + 1];
    for (y, tok) in tokens.iter().enumerate() {
        if let Token::Num(k) = *tok {
            if k < image && starts[k] == usize::MAX {
                starts[k] = y;
            }
        }
    }
    starts[image] = tokens.len();
    starts
}

/// Checks every surjection and choice invariant. The image size is inferred as
/// one more than the largest numeral.
pub fn validate_connection(tokens: &[Token], choice: &[usize], alphabet: Alphabet) -> ValidationReport {
    let mut violations = Vec::new();
    let image = surjection_violations(tokens, alphabet, &mut violations);
    if choice.len() != image {
        violations.push(Violation::ChoiceCount { expected: image, found: choice.len() });
    }
    let starts = class_starts(tokens, image);
    for (class, &value) in choice.iter().enumerate().take(image) {
        if class > 0 && value <= choice[class - 1] {
            violations.push(Violation::ChoiceNotIncreasing { class });
        }
        if value >= tokens.len() {
            violations.push(Violation::ChoiceOutOfDomain { class, value });
            continue;
        }
        if tokens[value] != Token::Num(class) {
            violations.push(Violation::ChoiceWrongClass { class, value });
        }
        let (start, end) = (starts[class], starts[class + 1]);
        if value < start || value >= end {
            violations.push(Violation::ChoiceOutsideWindow { class, value, start, end });
        }
    }
    ValidationReport { len: tokens.len(), image, violations }
}

/// A rigid surjection `A ∪ L → A ∪ K`, stored by its values on the numerals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidSurjection {
    alphabet: Alphabet,
    tokens: Vec<Token>,
    image: usize,
}

impl RigidSurjection {
    pub fn new(alphabet: Alphabet, tokens: Vec<Token>) -> Result<Self> {
        let mut violations = Vec::new();
        let image = surjection_violations(&tokens, alphabet, &mut violations);
        if !violations.is_empty() {
            return Err(Error::Invalid(ValidationReport { len: tokens.len(), image, violations }));
        }
        Ok(RigidSurjection { alphabet, tokens, image })
    }

    pub(crate) fn from_parts(alphabet: Alphabet, tokens: Vec<Token>, image: usize) -> Self {
        debug_assert!({
            let mut v = Vec::new();
            surjection_violations(&tokens, alphabet, &mut v) == image && v.is_empty()
        });
        RigidSurjection { alphabet, tokens, image }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Number of numeric positions `L`.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of classes `K`.
    pub fn image(&self) -> usize {
        self.image
    }

    /// First occurrence `E_k` of each class, with `E_K = L` appended.
    pub fn class_starts(&self) -> Vec<usize> {
        class_starts(&self.tokens, self.image)
    }

    /// The positions of class `k` that lie inside its choice window.
    pub fn choice_windows(&self) -> Vec<Vec<usize>> {
        let starts = self.class_starts();
        (0..self.image)
            .map(|k| {
                (starts[k]..starts[k + 1])
                    .filter(|&y| self.tokens[y] == Token::Num(k))
                    .collect()
            })
            .collect()
    }

    /// Pairs the surjection with the least valid choice, `c(k) = E_k`.
    pub fn with_least_choice(self) -> Connection {
        let mut choice = self.class_starts();
        choice.pop();
        Connection { surj: self, choice }
    }

    /// `self ∘ inner`, with letters fixed.
    pub fn compose(&self, inner: &RigidSurjection) -> Result<RigidSurjection> {
        if self.alphabet != inner.alphabet {
            return Err(Error::domain("alphabets differ"));
        }
        if self.len() != inner.image {
            return Err(Error::domain(format!(
                "outer domain {} does not match inner image {}",
                self.len(),
                inner.image
            )));
        }
        let tokens = inner
            .tokens
            .iter()
            .map(|&t| match t {
                Token::Num(m) => self.tokens[m],
                letter => letter,
            })
            .collect();
        Ok(RigidSurjection::from_parts(self.alphabet, tokens, self.image))
    }
}

/// An element of `F^A_{L,K}`.
///
/// Ordering is lexicographic on the surjection tokens, then on the choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Connection {
    surj: RigidSurjection,
    choice: Vec<usize>,
}

impl Connection {
    pub fn new(alphabet: Alphabet, tokens: Vec<Token>, choice: Vec<usize>) -> Result<Self> {
        let report = validate_connection(&tokens, &choice, alphabet);
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let image = report.image;
        Ok(Connection { surj: RigidSurjection { alphabet, tokens, image }, choice })
    }

    pub(crate) fn from_parts(surj: RigidSurjection, choice: Vec<usize>) -> Self {
        debug_assert!(validate_connection(&surj.tokens, &choice, surj.alphabet).is_ok());
        Connection { surj, choice }
    }

    /// The identity of `F^A_{n,n}`.
    pub fn identity(alphabet: Alphabet, n: usize) -> Self {
        let tokens = (0..n).map(Token::Num).collect();
        Connection {
            surj: RigidSurjection { alphabet, tokens, image: n },
            choice: (0..n).collect(),
        }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Connection::identity(alphabet, 0)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.surj.alphabet
    }

    pub fn surjection(&self) -> &RigidSurjection {
        &self.surj
    }

    pub fn tokens(&self) -> &[Token] {
        &self.surj.tokens
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    /// Length: the number of numeric positions. Letters are not counted.
    pub fn len(&self) -> usize {
        self.surj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surj.is_empty()
    }

    pub fn image(&self) -> usize {
        self.surj.image
    }

    pub fn class_starts(&self) -> Vec<usize> {
        self.surj.class_starts()
    }

    /// `E_n`, with `E_K = L`.
    pub fn class_start(&self, n: usize) -> usize {
        if n >= self.image() {
            return self.len();
        }
        self.tokens()
            .iter()
            .position(|&t| t == Token::Num(n))
            .expect("surjection hits every class")
    }

    /// `self · inner = (s ∘ r, c ∘ j)` for `self = (s, j)` and `inner = (r, c)`.
    pub fn compose(&self, inner: &Connection) -> Result<Connection> {
        let surj = self.surj.compose(&inner.surj)?;
        let choice = self.choice.iter().map(|&k| inner.choice[k]).collect();
        let out = Connection { surj, choice };
        assert!(
            validate_connection(out.tokens(), &out.choice, out.alphabet()).is_ok(),
            "composition left the space of connections"
        );
        Ok(out)
    }

    /// The `n`-th segment `(r↾E_n, c↾n)`.
    pub fn segment(&self, n: usize) -> Result<Connection> {
        if n > self.image() {
            return Err(Error::domain(format!(
                "segment {n} requested from a connection with {} classes",
                self.image()
            )));
        }
        let end = self.class_start(n);
        Ok(Connection {
            surj: RigidSurjection {
                alphabet: self.alphabet(),
                tokens: self.tokens()[..end].to_vec(),
                image: n,
            },
            choice: self.choice[..n].to_vec(),
        })
    }

    /// All segments `0..=K`; the last one is `self`.
    pub fn segments(&self) -> Vec<Connection> {
        (0..=self.image()).map(|n| self.segment(n).expect("n ≤ K")).collect()
    }

    /// Prefix test on both coordinates.
    pub fn is_initial_segment_of(&self, big: &Connection) -> bool {
        self.alphabet() == big.alphabet()
            && big.tokens().starts_with(self.tokens())
            && big.choice.starts_with(&self.choice)
    }

    /// Whether `self` equals `big.segment(n)` for some `n`.
    pub fn is_segment_of(&self, big: &Connection) -> bool {
        self.image() <= big.image()
            && self.alphabet() == big.alphabet()
            && self.len() == big.class_start(self.image())
            && self.is_initial_segment_of(big)
    }

    /// Convenience for `reduct_witness(self, base).is_some()` on equal shapes.
    pub fn is_reduct_of(&self, base: &Connection) -> bool {
        matches!(reduct_witness(self, base), Ok(Some(_)))
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("|")?;
        for (i, c) in self.choice.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Solves `candidate = w · base` for `w`.
///
/// Because `base` is onto, `w` is forced pointwise, so the witness is unique
/// when it exists.
pub fn reduct_witness(candidate: &Connection, base: &Connection) -> Result<Option<Connection>> {
    if candidate.alphabet() != base.alphabet() {
        return Err(Error::domain("alphabets differ"));
    }
    if candidate.len() != base.len() {
        return Err(Error::domain(format!(
            "lengths differ ({} vs {})",
            candidate.len(),
            base.len()
        )));
    }
    let mut forced: Vec<Option<Token>> = vec![None; base.image()];
    for (&b, &c) in base.tokens().iter().zip(candidate.tokens()) {
        match b {
            Token::Letter(_) => {
                if b != c {
                    return Ok(None);
                }
            }
            Token::Num(m) => match forced[m] {
                None => forced[m] = Some(c),
                Some(prev) if prev != c => return Ok(None),
                Some(_) => {}
            },
        }
    }
    let tokens: Vec<Token> = forced.into_iter().map(|t| t.expect("base is onto")).collect();
    let mut choice = Vec::with_capacity(candidate.image());
    for &value in candidate.choice() {
        match base.choice().binary_search(&value) {
            Ok(k) => choice.push(k),
            Err(_) => return Ok(None),
        }
    }
    match Connection::new(base.alphabet(), tokens, choice) {
        Ok(w) => {
            debug_assert_eq!(w.compose(base).ok().as_ref(), Some(candidate));
            Ok(Some(w))
        }
        Err(_) => Ok(None),
    }
}
