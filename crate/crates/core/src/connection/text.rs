//! Text and JSON forms of connections.
//!
//! Grammar: `conn := tpart '|' ipart`, where `tpart` is a comma-separated list
//! of tokens (numerals or the letters `a`..`z`) and `ipart` a comma-separated
//! list of numerals. Either part may be empty.

use serde::{Deserialize, Serialize};

use super::{Alphabet, Connection, Token};
use crate::error::{Error, Result};

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn split_items(text: &str, base: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = base;
    text.split(',').map(move |item| {
        let at = offset;
        offset += item.len() + 1;
        (at, item)
    })
}

fn parse_nat(item: &str, at: usize) -> Result<usize> {
    if item.is_empty() || !item.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(at, format!("expected a natural number, found {item:?}")));
    }
    item.parse().map_err(|_| parse_error(at, "numeral too large"))
}

fn parse_token(item: &str, at: usize) -> Result<Token> {
    let bytes = item.as_bytes();
    if bytes.len() == 1 && bytes[0].is_ascii_lowercase() {
        return Ok(Token::Letter((bytes[0] - b'a') as usize));
    }
    parse_nat(item, at)
        .map(Token::Num)
        .map_err(|_| parse_error(at, format!("expected a numeral or a letter, found {item:?}")))
}

fn parse_tokens_at(text: &str, base: usize) -> Result<Vec<Token>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    split_items(text, base).map(|(at, item)| parse_token(item, at)).collect()
}

/// Parses a bare token list such as `a,0,1,1`.
pub fn parse_tokens(text: &str) -> Result<Vec<Token>> {
    parse_tokens_at(text, 0)
}

/// Parses `tokens|choice` and validates it against `alphabet`.
pub fn parse_connection(text: &str, alphabet: Alphabet) -> Result<Connection> {
    let Some(bar) = text.find('|') else {
        return Err(parse_error(text.len(), "missing '|' separator"));
    };
    let tokens = parse_tokens_at(&text[..bar], 0)?;
    let rest = &text[bar + 1..];
    if let Some(extra) = rest.find('|') {
        return Err(parse_error(bar + 1 + extra, "more than one '|'"));
    }
    let choice = if rest.is_empty() {
        Vec::new()
    } else {
        split_items(rest, bar + 1)
            .map(|(at, item)| parse_nat(item, at))
            .collect::<Result<Vec<_>>>()?
    };
    Connection::new(alphabet, tokens, choice)
}

/// The smallest alphabet that covers every letter in `text`; used when the
/// caller does not say.
pub fn infer_alphabet(text: &str) -> Alphabet {
    let max = text
        .split([',', '|'])
        .filter_map(|item| match item.as_bytes() {
            [b] if b.is_ascii_lowercase() => Some((b - b'a') as usize + 1),
            _ => None,
        })
        .max();
    Alphabet(max.unwrap_or(0))
}

/// Canonical text form. Fails for letters past `z`.
pub fn format_connection(conn: &Connection) -> Result<String> {
    if conn.alphabet().size() > 26 && conn.tokens().iter().any(|t| matches!(t, Token::Letter(l) if *l >= 26)) {
        return Err(Error::domain("letters beyond 'z' have no text form"));
    }
    Ok(conn.to_string())
}

/// `{"alphabet": n, "t": [...], "i": [...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub alphabet: usize,
    pub t: Vec<String>,
    pub i: Vec<usize>,
}

impl From<&Connection> for ConnectionJson {
    fn from(c: &Connection) -> Self {
        ConnectionJson {
            alphabet: c.alphabet().size(),
            t: c.tokens().iter().map(Token::to_string).collect(),
            i: c.choice().to_vec(),
        }
    }
}

impl TryFrom<ConnectionJson> for Connection {
    type Error = Error;

    fn try_from(json: ConnectionJson) -> Result<Self> {
        let tokens = json
            .t
            .iter()
            .enumerate()
            .map(|(pos, item)| parse_token(item, pos))
            .collect::<Result<Vec<_>>>()?;
        Connection::new(Alphabet(json.alphabet), tokens, json.i)
    }
}

impl Serialize for Connection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConnectionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Connection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = ConnectionJson::deserialize(d)?;
        Connection::try_from(json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_examples() {
        let c = parse_connection("0,0,1|0,2", Alphabet(0)).unwrap();
        assert_eq!(format_connection(&c).unwrap(), "0,0,1|0,2");

        let empty = parse_connection("|", Alphabet(0)).unwrap();
        assert!(empty.is_empty());
        assert_eq!(format_connection(&empty).unwrap(), "|");

        match parse_connection("0,2|0", Alphabet(0)) {
            Err(Error::Invalid(report)) => {
                assert!(report.violations.iter().any(|v| v.code() == "restricted-growth"))
            }
            other => panic!("expected invariant violation, got {other:?}"),
        }
    }

    #[test]
    fn grammar_errors_carry_positions() {
        match parse_connection("0,x1|0", Alphabet(0)) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_connection("0,0", Alphabet(0)), Err(Error::Parse { .. })));
        assert!(matches!(parse_connection("0||", Alphabet(0)), Err(Error::Parse { .. })));
        match parse_connection("0|0,", Alphabet(0)) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_connection("0,,1|0,2", Alphabet(0)), Err(Error::Parse { .. })));
    }

    #[test]
    fn letters_outside_alphabet_are_violations() {
        assert!(matches!(parse_connection("b,0|1", Alphabet(1)), Err(Error::Invalid(_))));
        assert_eq!(infer_alphabet("b,0|1"), Alphabet(2));
        assert_eq!(infer_alphabet("0,1|0,1"), Alphabet(0));
    }

    #[test]
    fn json_form() {
        let c = parse_connection("a,0,1,1|1,2", Alphabet(1)).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"alphabet":1,"t":["a","0","1","1"],"i":[1,2]}"#);
        let back: Connection = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Connection>(r#"{"alphabet":0,"t":["1"],"i":[0]}"#).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(a in 0usize..3, len in 0usize..6, pick in any::<prop::sample::Index>()) {
            let all: Vec<Connection> = (0..=len)
                .flat_map(|k| crate::connection::connections(Alphabet(a), len, k))
                .collect();
            prop_assume!(!all.is_empty());
            let c = pick.get(&all);
            let text = format_connection(c).unwrap();
            prop_assert_eq!(&parse_connection(&text, Alphabet(a)).unwrap(), c);
        }
    }
}
