//! Words, variable words and combinatorial lines over a finite alphabet.
//!
//! Text form is a comma-separated list of letters `a`, `b`, ...; the symbol
//! `v` is reserved for the variable, so word text covers alphabets of at most
//! 21 letters (`a`..`u`).

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::connection::Alphabet;
use crate::error::{Error, Result};
use crate::search::{scan_sizes, search_bad_coloring, ColoredSpace, Coloring, Hypergraph, SearchConfig, WitnessOutcome};

const VARIABLE: u8 = b'v';
const TEXT_LETTERS: usize = (VARIABLE - b'a') as usize;

/// A symbol of a variable word. The variable sorts before every letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Var,
    Letter(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::Var => f.write_str("v"),
            Symbol::Letter(l) if l < TEXT_LETTERS => write!(f, "{}", (b'a' + l as u8) as char),
            Symbol::Letter(l) => write!(f, "#{l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    Constant,
    Variable,
    LeftVariable,
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordKind::Constant => "constant_word",
            WordKind::Variable => "variable_word",
            WordKind::LeftVariable => "left_variable_word",
        })
    }
}

pub fn classify(symbols: &[Symbol]) -> WordKind {
    match symbols.first() {
        Some(Symbol::Var) => WordKind::LeftVariable,
        _ if symbols.contains(&Symbol::Var) => WordKind::Variable,
        _ => WordKind::Constant,
    }
}

fn check_letter(alphabet: Alphabet, letter: usize) -> Result<()> {
    if alphabet.contains(letter) {
        Ok(())
    } else {
        Err(Error::domain(format!("letter {letter} outside an alphabet of size {}", alphabet.size())))
    }
}

/// A finite word over the alphabet, with no variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<usize>) -> Result<Self> {
        for &l in &letters {
            check_letter(alphabet, l)?;
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, letters: Vec::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends `other`; both words must share an alphabet.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::domain("alphabets differ"));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: self.alphabet, letters })
    }
}

/// A word over the alphabet and the variable `v`, with at least one `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableWord {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl VariableWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        for s in &symbols {
            if let Symbol::Letter(l) = *s {
                check_letter(alphabet, l)?;
            }
        }
        if !symbols.contains(&Symbol::Var) {
            return Err(Error::domain("a variable word needs at least one v"));
        }
        Ok(VariableWord { alphabet, symbols })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_left_variable(&self) -> bool {
        self.symbols[0] == Symbol::Var
    }

    /// `x(α)`: every `v` replaced by `letter`.
    pub fn substitute(&self, letter: usize) -> Result<Word> {
        check_letter(self.alphabet, letter)?;
        let letters = self
            .symbols
            .iter()
            .map(|s| match *s {
                Symbol::Var => letter,
                Symbol::Letter(l) => l,
            })
            .collect();
        Ok(Word { alphabet: self.alphabet, letters })
    }

    /// `{x(α) : α ∈ A}` in letter order.
    pub fn line(&self) -> Vec<Word> {
        (0..self.alphabet.size())
            .map(|a| self.substitute(a).expect("letter in range"))
            .collect()
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols: Vec<Symbol> = self.letters.iter().map(|&l| Symbol::Letter(l)).collect();
        write_list(f, &symbols)
    }
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.symbols)
    }
}

/// Parses comma-separated symbols; `v` is the variable.
pub fn parse_symbols(text: &str) -> Result<Vec<Symbol>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut offset = 0;
    text.split(',')
        .map(|item| {
            let at = offset;
            offset += item.len() + 1;
            match item.as_bytes() {
                [VARIABLE] => Ok(Symbol::Var),
                [b] if b.is_ascii_lowercase() && *b < VARIABLE => Ok(Symbol::Letter((b - b'a') as usize)),
                _ => Err(Error::Parse {
                    position: at,
                    message: format!("expected a letter a..u or the variable v, found {item:?}"),
                }),
            }
        })
        .collect()
}

pub fn parse_word(text: &str, alphabet: Alphabet) -> Result<Word> {
    let symbols = parse_symbols(text)?;
    let letters = symbols
        .into_iter()
        .map(|s| match s {
            Symbol::Letter(l) => Ok(l),
            Symbol::Var => Err(Error::domain("a constant word cannot contain v")),
        })
        .collect::<Result<Vec<_>>>()?;
    Word::new(alphabet, letters)
}

pub fn parse_variable_word(text: &str, alphabet: Alphabet) -> Result<VariableWord> {
    VariableWord::new(alphabet, parse_symbols(text)?)
}

/// Smallest alphabet covering the letters of every given word text.
pub fn infer_word_alphabet<'a>(texts: impl IntoIterator<Item = &'a str>) -> Alphabet {
    let max = texts
        .into_iter()
        .flat_map(|t| t.split(','))
        .filter_map(|item| match item.as_bytes() {
            [b] if b.is_ascii_lowercase() && *b < VARIABLE => Some((b - b'a') as usize + 1),
            _ => None,
        })
        .max();
    Alphabet(max.unwrap_or(0))
}

/// A member of `w0 ⌢ [X]_A` written as `w0 ⌢ x_{n0}(α0) ⌢ … ⌢ x_{nk}(αk)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub indices: Vec<usize>,
    pub letters: Vec<usize>,
}

impl Decomposition {
    /// Rebuilds the word this decomposition describes.
    pub fn assemble(&self, w0: &Word, xs: &[VariableWord]) -> Result<Word> {
        if self.indices.len() != self.letters.len() {
            return Err(Error::domain("indices and letters differ in length"));
        }
        if self.indices.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::domain("indices must be strictly increasing"));
        }
        let mut out = w0.clone();
        for (&n, &a) in self.indices.iter().zip(&self.letters) {
            let x = xs.get(n).ok_or_else(|| Error::domain(format!("no variable word at index {n}")))?;
            out = out.concat(&x.substitute(a)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (&n, &a)) in self.indices.iter().zip(&self.letters).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{n}({})", Symbol::Letter(a))?;
        }
        Ok(())
    }
}

/// The letter `x` must take to match `target` at `at`, if it matches at all.
fn match_at(x: &VariableWord, target: &[usize], at: usize) -> Option<usize> {
    let window = target.get(at..at + x.len())?;
    let mut letter = None;
    for (s, &t) in x.symbols.iter().zip(window) {
        match *s {
            Symbol::Letter(l) if l != t => return None,
            Symbol::Letter(_) => {}
            Symbol::Var => match letter {
                None => letter = Some(t),
                Some(prev) if prev != t => return None,
                Some(_) => {}
            },
        }
    }
    letter
}

/// Finds the lexicographically least decomposition of `w` as a member of
/// `w0 ⌢ [X]_A`, where the empty product is allowed (so `w0` itself is a
/// member).
pub fn span_membership(w: &Word, w0: &Word, xs: &[VariableWord]) -> Result<Option<Decomposition>> {
    let alphabet = w.alphabet;
    if w0.alphabet != alphabet || xs.iter().any(|x| x.alphabet != alphabet) {
        return Err(Error::domain("all words must share one alphabet"));
    }
    if !w.letters.starts_with(&w0.letters) {
        return Ok(None);
    }

    struct Dfs<'a> {
        target: &'a [usize],
        xs: &'a [VariableWord],
        dead: HashSet<(usize, usize)>,
        path: Decomposition,
    }

    impl Dfs<'_> {
        fn run(&mut self, at: usize, next: usize) -> bool {
            if at == self.target.len() {
                return true;
            }
            if self.dead.contains(&(at, next)) {
                return false;
            }
            for n in next..self.xs.len() {
                // The letter is forced by the first v, so indices alone order
                // the candidates.
                if let Some(a) = match_at(&self.xs[n], self.target, at) {
                    self.path.indices.push(n);
                    self.path.letters.push(a);
                    if self.run(at + self.xs[n].len(), n + 1) {
                        return true;
                    }
                    self.path.indices.pop();
                    self.path.letters.pop();
                }
            }
            self.dead.insert((at, next));
            false
        }
    }

    let mut dfs = Dfs { target: &w.letters, xs, dead: HashSet::new(), path: Decomposition::default() };
    Ok(dfs.run(w0.len(), 0).then_some(dfs.path))
}

/// Every variable word of length `n`, in lexicographic order with `v` first,
/// paired with its combinatorial line.
pub fn enumerate_lines(n: usize, alphabet: Alphabet) -> Vec<(VariableWord, Vec<Word>)> {
    if n == 0 {
        return Vec::new();
    }
    let symbols: Vec<Symbol> =
        std::iter::once(Symbol::Var).chain((0..alphabet.size()).map(Symbol::Letter)).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        n: usize,
        alphabet: Alphabet,
        symbols: &[Symbol],
        current: &mut Vec<Symbol>,
        out: &mut Vec<(VariableWord, Vec<Word>)>,
    ) {
        if current.len() == n {
            if current.contains(&Symbol::Var) {
                let x = VariableWord { alphabet, symbols: current.clone() };
                let line = x.line();
                out.push((x, line));
            }
            return;
        }
        for &s in symbols {
            current.push(s);
            rec(n, alphabet, symbols, current, out);
            current.pop();
        }
    }
    rec(n, alphabet, &symbols, &mut current, &mut out);
    out
}

/// All words of length `n`, in lexicographic order.
pub fn all_words(n: usize, alphabet: Alphabet) -> Vec<Word> {
    let mut out = vec![Word::empty(alphabet)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet.size()).map(move |a| {
                    let mut letters = w.letters.clone();
                    letters.push(a);
                    Word { alphabet, letters }
                })
            })
            .collect();
    }
    out
}

/// Lines of `A^n` with their variable words; a vertex is the index of a word
/// in [`all_words`] order. Lines with identical word sets are kept once.
pub struct LineFamily {
    pub alphabet: Alphabet,
    pub length: usize,
    pub lines: Vec<VariableWord>,
    pub graph: Hypergraph,
}

pub fn line_family(n: usize, alphabet: Alphabet) -> Result<LineFamily> {
    let words = all_words(n, alphabet);
    if words.len() > u32::MAX as usize {
        return Err(Error::domain("word space too large"));
    }
    let index: HashMap<&Word, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut seen = HashSet::new();
    let mut lines = Vec::new();
    let mut edges = Vec::new();
    for (x, line) in enumerate_lines(n, alphabet) {
        let mut members: Vec<u32> = line.iter().map(|w| index[w]).collect();
        members.sort_unstable();
        members.dedup();
        if seen.insert(members.clone()) {
            lines.push(x);
            edges.push(members);
        }
    }
    Ok(LineFamily { alphabet, length: n, lines, graph: Hypergraph::new(words.len(), edges) })
}

/// The first monochromatic line under a coloring of a word space.
pub fn find_mono_line(coloring: &Coloring) -> Result<Option<(VariableWord, usize)>> {
    let ColoredSpace::Words { alphabet, length } = coloring.space else {
        return Err(Error::domain("coloring is not on a word space"));
    };
    coloring.check()?;
    let family = line_family(length, alphabet)?;
    Ok(family
        .graph
        .first_monochromatic(&coloring.colors)
        .map(|(edge, color)| (family.lines[edge].clone(), color)))
}

/// Least `N ≤ max_n` such that every `l`-coloring of `A^N` has a
/// monochromatic combinatorial line.
pub fn hj_min_n(alphabet_size: usize, palette: usize, max_n: usize, config: &SearchConfig) -> Result<WitnessOutcome> {
    if alphabet_size == 0 || palette == 0 {
        return Err(Error::domain("alphabet size and number of colors must be positive"));
    }
    let alphabet = Alphabet(alphabet_size);
    scan_sizes(1, max_n, |n| {
        let family = line_family(n, alphabet)?;
        let found = search_bad_coloring(&family.graph, palette, config)?;
        Ok(found.map(|colors| Coloring { space: ColoredSpace::Words { alphabet, length: n }, palette, colors }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const AB: Alphabet = Alphabet(2);

    fn w(text: &str) -> Word {
        parse_word(text, AB).unwrap()
    }

    fn x(text: &str) -> VariableWord {
        parse_variable_word(text, AB).unwrap()
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(x("v,a,v").substitute(1).unwrap(), w("b,a,b"));
        assert_eq!(x("v").substitute(0).unwrap(), w("a"));
        assert_eq!(x("v,b").substitute(0).unwrap(), w("a,b"));
        assert!(x("v").substitute(2).is_err());
    }

    #[test]
    fn classification_examples() {
        let kind = |t: &str| classify(&parse_symbols(t).unwrap());
        assert_eq!(kind("a,b"), WordKind::Constant);
        assert_eq!(kind("v,a"), WordKind::LeftVariable);
        assert_eq!(kind("a,v"), WordKind::Variable);
        assert!(parse_variable_word("a,b", AB).is_err());
        assert!(parse_word("a,v", AB).is_err());
        assert!(matches!(parse_symbols("a,,b"), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn span_examples() {
        let xs = [x("v,b"), x("v")];
        let d = span_membership(&w("a,a,b,b"), &w("a"), &xs).unwrap().unwrap();
        assert_eq!(d, Decomposition { indices: vec![0, 1], letters: vec![0, 1] });
        assert_eq!(d.assemble(&w("a"), &xs).unwrap(), w("a,a,b,b"));

        let d = span_membership(&w("a"), &w("a"), &xs).unwrap().unwrap();
        assert!(d.indices.is_empty());
        assert_eq!(span_membership(&w("b,a"), &w("a"), &xs).unwrap(), None);
    }

    #[test]
    fn line_examples() {
        let one = enumerate_lines(1, AB);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].0, x("v"));
        assert_eq!(one[0].1, vec![w("a"), w("b")]);

        let two: Vec<String> = enumerate_lines(2, AB).iter().map(|(x, _)| x.to_string()).collect();
        assert_eq!(two, ["v,v", "v,a", "v,b", "a,v", "b,v"]);

        for n in 1..=4 {
            assert!(enumerate_lines(n, Alphabet(1)).iter().all(|(_, line)| line.len() == 1));
        }
        assert!(enumerate_lines(0, AB).is_empty());
    }

    #[test]
    fn hales_jewett_examples() {
        let cfg = SearchConfig::default();
        match hj_min_n(2, 2, 4, &cfg).unwrap() {
            WitnessOutcome::Minimal { n: 2, previous: Some(c) } => {
                assert_eq!(c.colors, vec![0, 1]);
                assert_eq!(find_mono_line(&c).unwrap(), None);
            }
            other => panic!("{other:?}"),
        }
        for k in 1..=3 {
            assert!(matches!(hj_min_n(k, 1, 3, &cfg).unwrap(), WitnessOutcome::Minimal { n: 1, .. }));
        }
        for l in 1..=3 {
            assert!(matches!(hj_min_n(1, l, 3, &cfg).unwrap(), WitnessOutcome::Minimal { n: 1, .. }));
        }
        // three letters and two colors need N = 4, so [3]^3 still has a bad coloring
        match hj_min_n(3, 2, 3, &cfg).unwrap() {
            WitnessOutcome::NotWithin { max_n: 3, last_bad: Some(c) } => {
                assert_eq!(c.colors.len(), 27);
                assert_eq!(find_mono_line(&c).unwrap(), None);
            }
            other => panic!("{other:?}"),
        }
    }

    // Every decomposition by exhaustion over index subsets and letters.
    fn all_decompositions(w: &Word, w0: &Word, xs: &[VariableWord]) -> Vec<Decomposition> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << xs.len()) {
            let indices: Vec<usize> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect();
            let combos = w.alphabet.size().pow(indices.len() as u32);
            for mut code in 0..combos {
                let mut letters = vec![0; indices.len()];
                for slot in letters.iter_mut().rev() {
                    *slot = code % w.alphabet.size();
                    code /= w.alphabet.size();
                }
                let d = Decomposition { indices: indices.clone(), letters };
                if d.assemble(w0, xs).unwrap() == *w {
                    out.push(d);
                }
            }
        }
        out.sort_by(|a, b| (&a.indices, &a.letters).cmp(&(&b.indices, &b.letters)));
        out
    }

    fn symbols_strategy(a: usize, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
        prop::collection::vec(
            prop_oneof![Just(Symbol::Var), (0..a).prop_map(Symbol::Letter)],
            1..=max_len,
        )
    }

    proptest! {
        #[test]
        fn substitution_keeps_length(a in 1usize..4, syms in symbols_strategy(3, 6), pick in 0usize..3) {
            let syms: Vec<Symbol> = syms.into_iter().map(|s| match s {
                Symbol::Letter(l) => Symbol::Letter(l % a),
                v => v,
            }).collect();
            prop_assume!(syms.contains(&Symbol::Var));
            let x = VariableWord::new(Alphabet(a), syms).unwrap();
            let word = x.substitute(pick % a).unwrap();
            prop_assert_eq!(word.len(), x.len());
            let as_symbols: Vec<Symbol> = word.letters().iter().map(|&l| Symbol::Letter(l)).collect();
            prop_assert_eq!(classify(&as_symbols), WordKind::Constant);
        }

        #[test]
        fn span_agrees_with_exhaustion(
            a in 1usize..=2,
            target in prop::collection::vec(0usize..2, 0..=8),
            w0 in prop::collection::vec(0usize..2, 0..=2),
            xs in prop::collection::vec(symbols_strategy(2, 3), 0..=3),
        ) {
            let alphabet = Alphabet(a);
            let fix = |l: usize| l % a;
            let target = Word::new(alphabet, target.into_iter().map(fix).collect()).unwrap();
            let w0 = Word::new(alphabet, w0.into_iter().map(fix).collect()).unwrap();
            let xs: Vec<VariableWord> = xs
                .into_iter()
                .filter(|s| s.contains(&Symbol::Var))
                .map(|s| {
                    let s = s.into_iter().map(|y| match y { Symbol::Letter(l) => Symbol::Letter(fix(l)), v => v }).collect();
                    VariableWord::new(alphabet, s).unwrap()
                })
                .collect();
            let got = span_membership(&target, &w0, &xs).unwrap();
            let oracle = all_decompositions(&target, &w0, &xs);
            prop_assert_eq!(got.clone(), oracle.first().cloned());
            if let Some(d) = got {
                prop_assert_eq!(d.assemble(&w0, &xs).unwrap(), target);
            }
        }

        #[test]
        fn left_variable_spans_keep_first_letter(
            first in 0usize..2,
            xs in prop::collection::vec(symbols_strategy(2, 3), 1..=3),
            picks in prop::collection::vec(0usize..2, 3),
            mask in 0u32..8,
        ) {
            let w0 = Word::new(AB, vec![first]).unwrap();
            let xs: Vec<VariableWord> = xs
                .into_iter()
                .map(|mut s| { s[0] = Symbol::Var; VariableWord::new(AB, s).unwrap() })
                .collect();
            let indices: Vec<usize> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect();
            let letters = indices.iter().map(|&i| picks[i]).collect();
            let member = Decomposition { indices, letters }.assemble(&w0, &xs).unwrap();
            prop_assert_eq!(member.letters()[0], first);
        }
    }
}
