//! Explicit maps between words, connections and cylinders, each on a finite
//! truncation with an explicit error when there is not enough room.
//!
//! * [`word_to_segment`] / [`segment_to_word`]: words of length `K` and the
//!   letter-only 0-segments reachable from a base connection.
//! * [`AlphabetShift`]: a relabelling of `A ∪ ω` that turns some numerals
//!   into new letters, and the conjugation it induces on connections.
//! * [`Cylinder`]: connections over the larger alphabet embedded as reducts
//!   of a base that start with a fixed segment, and the way back.
//! * [`left_word_to_connection`], [`freeze_below`], [`fuse`] and
//!   [`canonical_projection`].

use crate::connection::{reduct_witness, Alphabet, Connection, RigidSurjection, Token};
use crate::error::{Error, Result};
use crate::words::{Symbol, VariableWord, Word};

fn same_alphabet(a: Alphabet, b: Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::domain(format!("alphabets differ ({} vs {})", a.size(), b.size())))
    }
}

/// Sends a word `w` of length `K` to the 0-segment of `(r₁, c₁) · base`,
/// where `r₁` spells `w` on its first `K` positions and then counts
/// `0, 1, …`, and `c₁` is the least valid choice.
pub fn word_to_segment(w: &Word, base: &Connection) -> Result<Connection> {
    same_alphabet(w.alphabet(), base.alphabet())?;
    let k = w.len();
    let m = base.image();
    if k > m {
        return Err(Error::domain(format!("word of length {k} needs a base with at least {k} classes, got {m}")));
    }
    let tokens = w
        .letters()
        .iter()
        .map(|&l| Token::Letter(l))
        .chain((0..m - k).map(Token::Num))
        .collect();
    let outer = RigidSurjection::new(base.alphabet(), tokens)?.with_least_choice();
    outer.compose(base)?.segment(0)
}

/// Recovers the word whose image under [`word_to_segment`] is `seg`.
///
/// The word's length `K` is forced by `|seg| = E_K` of the base, and each
/// letter by the first position of its class.
pub fn segment_to_word(seg: &Connection, base: &Connection) -> Result<Word> {
    same_alphabet(seg.alphabet(), base.alphabet())?;
    if seg.image() != 0 {
        return Err(Error::domain("expected a 0-segment (no numerals)"));
    }
    let starts = base.class_starts();
    let Some(k) = starts.iter().position(|&e| e == seg.len()) else {
        return Err(Error::NotInRange(format!(
            "length {} is not a class boundary of the base",
            seg.len()
        )));
    };
    let letter = |t: Token| match t {
        Token::Letter(l) => l,
        Token::Num(_) => unreachable!("0-segments have no numerals"),
    };
    let word: Vec<usize> = starts[..k].iter().map(|&e| letter(seg.tokens()[e])).collect();
    for (p, (&b, &s)) in base.tokens().iter().zip(seg.tokens()).enumerate() {
        let expected = match b {
            Token::Letter(_) => b,
            Token::Num(m) => Token::Letter(word[m]),
        };
        if s != expected {
            return Err(Error::NotInRange(format!("position {p} cannot be reached from the base")));
        }
    }
    Word::new(seg.alphabet(), word)
}

/// A bijection of `A ∪ ω` onto `B ∪ ω` that sends the first few numerals to
/// new letters appended after `A` and shifts the remaining numerals down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetShift {
    /// One new letter: `0 ↦ α_{|A|}`, `n ↦ n − 1`.
    NewLetter { base: Alphabet },
    /// `count` new letters: `m ↦ α_{|A|+m}` for `m < count`, else `m ↦ m − count`.
    AbsorbNumerals { base: Alphabet, count: usize },
}

impl AlphabetShift {
    pub fn base(self) -> Alphabet {
        match self {
            AlphabetShift::NewLetter { base } | AlphabetShift::AbsorbNumerals { base, .. } => base,
        }
    }

    /// How many numerals become letters.
    pub fn width(self) -> usize {
        match self {
            AlphabetShift::NewLetter { .. } => 1,
            AlphabetShift::AbsorbNumerals { count, .. } => count,
        }
    }

    /// The alphabet `B` on the other side.
    pub fn target(self) -> Alphabet {
        Alphabet(self.base().size() + self.width())
    }

    /// The forward map `A ∪ ω → B ∪ ω`.
    pub fn map_token(self, t: Token) -> Token {
        let (a, d) = (self.base().size(), self.width());
        match t {
            Token::Letter(_) => t,
            Token::Num(m) if m < d => Token::Letter(a + m),
            Token::Num(m) => Token::Num(m - d),
        }
    }

    /// The inverse map `B ∪ ω → A ∪ ω`.
    pub fn unmap_token(self, t: Token) -> Token {
        let (a, d) = (self.base().size(), self.width());
        match t {
            Token::Letter(l) if l >= a => Token::Num(l - a),
            Token::Letter(_) => t,
            Token::Num(m) => Token::Num(m + d),
        }
    }

    /// Conjugates `s` (over `B`, length `L`) to `h⁻¹ ∘ s ∘ h` over `A`, of
    /// length `L + width`. The absorbed classes choose their first position;
    /// every other choice moves up with its position.
    pub fn conjugate(self, s: &Connection) -> Result<Connection> {
        same_alphabet(s.alphabet(), self.target())?;
        let d = self.width();
        let tokens = (0..s.len() + d)
            .map(|p| {
                let image = match self.map_token(Token::Num(p)) {
                    Token::Num(m) => s.tokens()[m],
                    letter => letter,
                };
                self.unmap_token(image)
            })
            .collect();
        let choice = (0..d).chain(s.choice().iter().map(|&c| c + d)).collect();
        Connection::new(self.base(), tokens, choice)
    }

    /// Inverse of [`conjugate`](Self::conjugate): `h ∘ x ∘ h⁻¹`, defined
    /// when `x` is the identity on its first `width` positions and classes.
    pub fn unconjugate(self, x: &Connection) -> Result<Connection> {
        same_alphabet(x.alphabet(), self.base())?;
        let d = self.width();
        let fixed = x.len() >= d
            && x.image() >= d
            && (0..d).all(|k| x.tokens()[k] == Token::Num(k) && x.choice()[k] == k);
        if !fixed {
            return Err(Error::NotInRange(format!(
                "the first {d} positions are not fixed, so this is not a conjugate"
            )));
        }
        let tokens = x.tokens()[d..].iter().map(|&t| self.map_token(t)).collect();
        let choice = x.choice()[d..].iter().map(|&c| c - d).collect();
        Connection::new(self.target(), tokens, choice)
            .map_err(|e| Error::NotInRange(format!("conjugate back is not a connection: {e}")))
    }
}

/// The cylinder of reducts of `base` that begin with `base.segment(width)`,
/// identified with connections over the shifted alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub shift: AlphabetShift,
    pub base: Connection,
}

impl Cylinder {
    pub fn new(shift: AlphabetShift, base: Connection) -> Result<Self> {
        same_alphabet(shift.base(), base.alphabet())?;
        if base.image() < shift.width() {
            return Err(Error::domain(format!(
                "base needs at least {} classes, has {}",
                shift.width(),
                base.image()
            )));
        }
        Ok(Cylinder { shift, base })
    }

    /// Every member starts with this segment of the base.
    pub fn anchor(&self) -> Connection {
        self.base.segment(self.shift.width()).expect("checked in new")
    }

    /// Length, over the shifted alphabet, of the connections that embed.
    pub fn source_len(&self) -> usize {
        self.base.image() - self.shift.width()
    }

    pub fn contains(&self, x: &Connection) -> bool {
        x.len() == self.base.len()
            && self.anchor().is_initial_segment_of(x)
            && matches!(reduct_witness(x, &self.base), Ok(Some(_)))
    }

    /// `s ↦ conjugate(s) · base`.
    pub fn embed(&self, s: &Connection) -> Result<Connection> {
        if s.len() != self.source_len() {
            return Err(Error::domain(format!(
                "this cylinder embeds connections of length {}, got {}",
                self.source_len(),
                s.len()
            )));
        }
        self.shift.conjugate(s)?.compose(&self.base)
    }

    /// Solves `x = y · base` and undoes the conjugation.
    pub fn project(&self, x: &Connection) -> Result<Connection> {
        let Some(w) = reduct_witness(x, &self.base)? else {
            return Err(Error::NotInRange("not a reduct of the base".into()));
        };
        self.shift.unconjugate(&w)
    }
}

/// Builds the rigid surjection read off `w0 ⌢ x0 ⌢ x1 ⌢ …`: letters stay,
/// and each `v` in block `x_m` becomes the numeral `m`.
pub fn left_word_to_connection(w0: &Word, xs: &[VariableWord]) -> Result<RigidSurjection> {
    let alphabet = w0.alphabet();
    let mut tokens: Vec<Token> = w0.letters().iter().map(|&l| Token::Letter(l)).collect();
    for (m, x) in xs.iter().enumerate() {
        same_alphabet(x.alphabet(), alphabet)?;
        if !x.is_left_variable() {
            return Err(Error::domain(format!("variable word {m} ({x}) does not start with v")));
        }
        tokens.extend(x.symbols().iter().map(|s| match *s {
            Symbol::Var => Token::Num(m),
            Symbol::Letter(l) => Token::Letter(l),
        }));
    }
    RigidSurjection::new(alphabet, tokens)
}

/// Replaces the first `n` tokens and choices of `witness` by the identity.
pub fn freeze_below(witness: &Connection, n: usize) -> Result<Connection> {
    if n > witness.len() {
        return Err(Error::domain(format!(
            "cannot freeze {n} positions of a connection of length {}",
            witness.len()
        )));
    }
    let tokens = (0..n).map(Token::Num).chain(witness.tokens()[n..].iter().copied()).collect();
    let choice = (0..n).chain(witness.choice().iter().skip(n).copied()).collect();
    Connection::new(witness.alphabet(), tokens, choice).map_err(|e| match e {
        Error::Invalid(report) => Error::FrozenWitnessInvalid(report),
        other => other,
    })
}

/// Reads the stable segments `chain[n].segment(n)` off a coherent chain,
/// requiring `chain[n + 1]` to agree with `chain[n]` up to segment `n`.
pub fn fuse(chain: &[Connection]) -> Result<Vec<Connection>> {
    let segments = chain
        .iter()
        .enumerate()
        .map(|(n, c)| c.segment(n))
        .collect::<Result<Vec<_>>>()?;
    for n in 0..chain.len().saturating_sub(1) {
        if chain[n + 1].segment(n)? != segments[n] {
            return Err(Error::FusionIncoherent { index: n });
        }
    }
    Ok(segments)
}

/// `0, 1, …, K−1` followed by zeros, with the identity choice.
pub fn canonical_projection(n: usize, k: usize) -> Result<Connection> {
    if k > n {
        return Err(Error::domain(format!("need K ≤ N, got K={k} N={n}")));
    }
    if k == 0 && n > 0 {
        return Err(Error::domain("K = 0 leaves nowhere to send the remaining positions"));
    }
    let tokens = (0..k).map(Token::Num).chain(std::iter::repeat_n(Token::Num(0), n - k)).collect();
    Connection::new(Alphabet::EMPTY, tokens, (0..k).collect())
}
