use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Alphabet, Connection, RigidSurjection, Token};
use crate::error::{Error, Result};

/// Which reading of `F_{L,K}` to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Connections,
    SurjectionsOnly,
    InjectionsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub alphabet: Alphabet,
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "K")]
    pub image: usize,
    pub mode: Mode,
}

impl SpaceSpec {
    pub fn new(alphabet: Alphabet, len: usize, image: usize, mode: Mode) -> Self {
        SpaceSpec { alphabet, len, image, mode }
    }

    pub fn check(&self) -> Result<()> {
        if self.image > self.len {
            return Err(Error::domain(format!("K = {} exceeds L = {}", self.image, self.len)));
        }
        if self.mode == Mode::InjectionsOnly && !self.alphabet.is_empty() {
            return Err(Error::domain("injection spaces take no alphabet"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceElement {
    Connection(Connection),
    Surjection(RigidSurjection),
    /// An increasing injection `K → L`, listed by its values.
    Injection(Vec<usize>),
}

impl std::fmt::Display for SpaceElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceElement::Connection(c) => write!(f, "{c}"),
            SpaceElement::Surjection(s) => {
                let toks: Vec<String> = s.tokens().iter().map(Token::to_string).collect();
                f.write_str(&toks.join(","))
            }
            SpaceElement::Injection(v) => {
                let vals: Vec<String> = v.iter().map(usize::to_string).collect();
                f.write_str(&vals.join(","))
            }
        }
    }
}

/// Stirling numbers of the second kind, `S(L, K)`.
pub fn stirling2(len: usize, image: usize) -> u128 {
    if image > len {
        return 0;
    }
    let mut row = vec![0u128; image + 1];
    row[0] = 1;
    for n in 1..=len {
        for k in (1..=image.min(n)).rev() {
            row[k] = k as u128 * row[k] + row[k - 1];
        }
        row[0] = 0;
    }
    row[image]
}

/// All rigid surjections `A ∪ L → A ∪ K` in lexicographic token order.
pub fn rigid_surjections(alphabet: Alphabet, len: usize, image: usize) -> Vec<RigidSurjection> {
    let mut out = Vec::new();
    if image > len {
        return out;
    }
    let mut buf = Vec::with_capacity(len);
    fill_surjections(alphabet, len, image, 0, &mut buf, &mut out);
    out
}

// `seen` = number of classes opened so far.
fn fill_surjections(
    alphabet: Alphabet,
    len: usize,
    image: usize,
    seen: usize,
    buf: &mut Vec<Token>,
    out: &mut Vec<RigidSurjection>,
) {
    let remaining = len - buf.len();
    if remaining == 0 {
        if seen == image {
            out.push(RigidSurjection::from_parts(alphabet, buf.clone(), image));
        }
        return;
    }
    if remaining > image - seen {
        for a in 0..alphabet.size() {
            buf.push(Token::Letter(a));
            fill_surjections(alphabet, len, image, seen, buf, out);
            buf.pop();
        }
        for k in 0..seen {
            buf.push(Token::Num(k));
            fill_surjections(alphabet, len, image, seen, buf, out);
            buf.pop();
        }
    }
    if seen < image {
        buf.push(Token::Num(seen));
        fill_surjections(alphabet, len, image, seen + 1, buf, out);
        buf.pop();
    }
}

/// Every valid choice for `surj`, in lexicographic order.
pub(crate) fn choices_for(surj: &RigidSurjection) -> Vec<Vec<usize>> {
    let windows = surj.choice_windows();
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(windows.len());
    fn go(windows: &[Vec<usize>], buf: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match windows.get(buf.len()) {
            None => out.push(buf.clone()),
            Some(w) => {
                for &y in w {
                    buf.push(y);
                    go(windows, buf, out);
                    buf.pop();
                }
            }
        }
    }
    go(&windows, &mut buf, &mut out);
    out
}

/// All of `F^A_{L,K}`, ordered by surjection tokens and then by choice.
pub fn connections(alphabet: Alphabet, len: usize, image: usize) -> Vec<Connection> {
    rigid_surjections(alphabet, len, image)
        .into_iter()
        .flat_map(|s| {
            choices_for(&s)
                .into_iter()
                .map(move |c| Connection::from_parts(s.clone(), c))
        })
        .collect()
}

/// Increasing injections `K → L` (equivalently `K`-subsets of `L`), lexicographic.
pub fn increasing_injections(image: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if image > len {
        return out;
    }
    let mut buf = Vec::with_capacity(image);
    fn go(image: usize, len: usize, buf: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if buf.len() == image {
            out.push(buf.clone());
            return;
        }
        let start = buf.last().map_or(0, |&x| x + 1);
        let need = image - buf.len();
        for x in start..=len - need {
            buf.push(x);
            go(image, len, buf, out);
            buf.pop();
        }
    }
    go(image, len, &mut buf, &mut out);
    out
}

pub fn enumerate_space(spec: SpaceSpec) -> Result<Vec<SpaceElement>> {
    spec.check()?;
    Ok(match spec.mode {
        Mode::Connections => connections(spec.alphabet, spec.len, spec.image)
            .into_iter()
            .map(SpaceElement::Connection)
            .collect(),
        Mode::SurjectionsOnly => rigid_surjections(spec.alphabet, spec.len, spec.image)
            .into_iter()
            .map(SpaceElement::Surjection)
            .collect(),
        Mode::InjectionsOnly => increasing_injections(spec.image, spec.len)
            .into_iter()
            .map(SpaceElement::Injection)
            .collect(),
    })
}

/// Every reduct of `base`: `w · base` for `w ∈ F^A_{M,K'}`, `K'` running from
/// `M` down to 0. The identity witness comes first, so `base` leads the list.
/// Distinct witnesses give distinct reducts.
pub fn reducts(base: &Connection) -> Vec<Connection> {
    let m = base.image();
    (0..=m)
        .rev()
        .flat_map(|k| connections(base.alphabet(), m, k))
        .map(|w| w.compose(base).expect("shapes match"))
        .collect()
}

/// The `n`-segments of all reducts of `base` with at least `n` classes,
/// sorted and deduplicated.
pub fn segment_set(base: &Connection, n: usize) -> Result<Vec<Connection>> {
    let m = base.image();
    if n > m {
        return Err(Error::domain(format!("n = {n} exceeds the {m} classes of the base")));
    }
    let mut set = BTreeSet::new();
    for k in n..=m {
        for w in connections(base.alphabet(), m, k) {
            let reduct = w.compose(base)?;
            set.insert(reduct.segment(n)?);
        }
    }
    Ok(set.into_iter().collect())
}
