//! Finite approximations and exhaustive checks of the axioms of a
//! topological Ramsey space on connections.
//!
//! `u_n(x) = x.segment(n)` is the approximation used throughout. Throughout
//! the checks, "`t ⪯ x`" means `t` is one of the segments `u_n(x)`, and the
//! cylinder `[t, b]` is the set of reducts of `b` having `t` as a segment.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::connection::{connections, reduct_witness, reducts, segment_set, Alphabet, Connection, Token};
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};

/// Largest universe [`check_axioms`] will enumerate.
pub const ELEMENT_GUARD: usize = 1_000_000;

/// `(s↾n, j↾|im(s↾n)|)`, kept literally even when the last kept choice
/// points past position `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproximationRecord {
    pub alphabet: Alphabet,
    #[serde(rename = "t", serialize_with = "token_strings")]
    pub tokens: Vec<Token>,
    pub choice_prefix: Vec<usize>,
    /// Set when the last kept choice value is at or beyond `n`, so the record
    /// is not itself a connection.
    pub tail_relaxed: bool,
}

fn token_strings<S: serde::Serializer>(tokens: &[Token], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(tokens.iter().map(Token::to_string))
}

impl ApproximationRecord {
    pub fn to_connection(&self) -> Result<Connection> {
        Connection::new(self.alphabet, self.tokens.clone(), self.choice_prefix.clone())
    }
}

impl fmt::Display for ApproximationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.tokens.iter().map(Token::to_string).collect();
        let choice: Vec<String> = self.choice_prefix.iter().map(usize::to_string).collect();
        write!(f, "{}|{}", tokens.join(","), choice.join(","))?;
        if self.tail_relaxed {
            f.write_str(" (tail relaxed)")?;
        }
        Ok(())
    }
}

pub fn u_prime_n(conn: &Connection, n: usize) -> Result<ApproximationRecord> {
    if n > conn.len() {
        return Err(Error::domain(format!("n = {n} exceeds the length {}", conn.len())));
    }
    let tokens = conn.tokens()[..n].to_vec();
    let classes = tokens.iter().filter_map(|t| t.num()).max().map_or(0, |m| m + 1);
    let choice_prefix = conn.choice()[..classes].to_vec();
    let tail_relaxed = choice_prefix.last().is_some_and(|&c| c >= n);
    Ok(ApproximationRecord { alphabet: conn.alphabet(), tokens, choice_prefix, tail_relaxed })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub statement: &'static str,
    /// Number of instances examined.
    pub checked: usize,
    /// First failing instance in enumeration order.
    pub counterexample: Option<String>,
}

impl ClauseResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub max_len: usize,
    pub max_alphabet: usize,
    pub elements: usize,
    pub clauses: Vec<ClauseResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(ClauseResult::passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "universe: L <= {}, alphabet <= {}, {} connections",
            self.max_len, self.max_alphabet, self.elements
        )?;
        for c in &self.clauses {
            let verdict = if c.passed() { "pass" } else { "FAIL" };
            write!(f, "{:<7} {verdict}  {:>9} checked  {}", c.clause, c.checked, c.statement)?;
            if let Some(cx) = &c.counterexample {
                write!(f, "\n        counterexample: {cx}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The enumerated universe, grouped for the pairwise clauses.
struct Universe {
    elements: Vec<Connection>,
    reducts: HashMap<Connection, Vec<Connection>>,
}

impl Universe {
    fn build(max_len: usize, max_alphabet: usize) -> Result<Self> {
        let mut elements = Vec::new();
        for a in 0..=max_alphabet {
            for len in 0..=max_len {
                for k in 0..=len {
                    elements.extend(connections(Alphabet(a), len, k));
                    if elements.len() > ELEMENT_GUARD {
                        return Err(Error::GuardExceeded { count: elements.len(), limit: ELEMENT_GUARD });
                    }
                }
            }
        }
        let reducts = elements.iter().map(|x| (x.clone(), reducts(x))).collect();
        Ok(Universe { elements, reducts })
    }

    /// Elements of the same alphabet and length as `x`.
    fn peers<'a>(&'a self, x: &'a Connection) -> impl Iterator<Item = &'a Connection> + 'a {
        self.elements.iter().filter(move |y| y.alphabet() == x.alphabet() && y.len() == x.len())
    }

    /// `[t, b]`: reducts of `b` with `t` as a segment.
    fn cylinder(&self, t: &Connection, b: &Connection) -> Vec<&Connection> {
        self.reducts[b].iter().filter(|x| t.is_segment_of(x)).collect()
    }
}

fn is_fin_reduct(small: &Connection, big: &Connection) -> bool {
    small.len() == big.len() && matches!(reduct_witness(small, big), Ok(Some(_)))
}

type Check<'u> = dyn Fn(&Connection) -> (usize, Option<String>) + Sync + Send + 'u;

fn run_clause(
    universe: &Universe,
    par: Parallelism,
    clause: &'static str,
    statement: &'static str,
    check: &Check<'_>,
) -> ClauseResult {
    let results = exec::map(&universe.elements, par, |x| check(x));
    let checked = results.iter().map(|(n, _)| n).sum();
    let counterexample = results.into_iter().find_map(|(_, cx)| cx);
    ClauseResult { clause, statement, checked, counterexample }
}

/// Exhaustively checks A.1 to A.3 over every connection with alphabet size
/// at most `max_alphabet` and length at most `max_len`.
pub fn check_axioms(max_len: usize, max_alphabet: usize, par: Parallelism) -> Result<AxiomReport> {
    let universe = Universe::build(max_len, max_alphabet)?;
    let u = &universe;
    let mut clauses = Vec::new();

    clauses.push(run_clause(u, par, "A.1(1)", "u_0(x) has no classes and no numerals", &|x| {
        let seg = x.segment(0).expect("0 ≤ K");
        let ok = seg.image() == 0
            && seg.tokens().iter().all(|t| t.is_letter())
            && (!x.alphabet().is_empty() || seg.is_empty());
        (1, (!ok).then(|| format!("x = {x}, u_0(x) = {seg}")))
    }));

    // A.1(2): x ↦ (u_n(x))_n is injective.
    {
        let mut seen: HashMap<Vec<Connection>, &Connection> = HashMap::new();
        let mut counterexample = None;
        for x in &u.elements {
            if let Some(prev) = seen.insert(x.segments(), x) {
                counterexample.get_or_insert_with(|| format!("{prev} and {x} share every segment"));
            }
        }
        clauses.push(ClauseResult {
            clause: "A.1(2)",
            statement: "distinct connections differ at some segment",
            checked: u.elements.len(),
            counterexample,
        });
    }

    // A.1(3): equal segment values come from the same level with equal lower segments.
    {
        let mut first: HashMap<Connection, (usize, Vec<Connection>, &Connection)> = HashMap::new();
        let mut counterexample = None;
        let mut checked = 0;
        for x in &u.elements {
            let segs = x.segments();
            for (n, seg) in segs.iter().enumerate() {
                checked += 1;
                let lower = segs[..n].to_vec();
                match first.get(seg) {
                    None => {
                        first.insert(seg.clone(), (n, lower, x));
                    }
                    Some((m, other_lower, y)) if *m != n || *other_lower != lower => {
                        counterexample.get_or_insert_with(|| {
                            format!("u_{n}({x}) = u_{m}({y}) = {seg} with different levels or lower segments")
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        clauses.push(ClauseResult {
            clause: "A.1(3)",
            statement: "u_n(x) = u_m(y) forces n = m and u_k(x) = u_k(y) for k < n",
            checked,
            counterexample,
        });
    }

    clauses.push(run_clause(
        u,
        par,
        "A.2(1)",
        "the finite reducts of t are exactly the witness-solvable peers of t",
        &|t| {
            let listed: HashSet<&Connection> = u.reducts[t].iter().collect();
            let solved: HashSet<&Connection> = u.peers(t).filter(|c| is_fin_reduct(c, t)).collect();
            let ok = listed == solved && listed.len() == u.reducts[t].len();
            (1, (!ok).then(|| format!("t = {t}: {} listed, {} solvable", listed.len(), solved.len())))
        },
    ));

    clauses.push(run_clause(
        u,
        par,
        "A.2(2)",
        "y <= x iff every u_n(y) is a finite reduct of some u_m(x)",
        &|x| {
            let x_segs = x.segments();
            let mut checked = 0;
            for y in u.peers(x) {
                checked += 1;
                let lhs = is_fin_reduct(y, x);
                let rhs = y.segments().iter().all(|s| x_segs.iter().any(|b| is_fin_reduct(s, b)));
                if lhs != rhs {
                    return (checked, Some(format!("y = {y}, x = {x}: reduct {lhs}, segmentwise {rhs}")));
                }
            }
            (checked, None)
        },
    ));

    clauses.push(run_clause(
        u,
        par,
        "A.2(3)",
        "t' ⪯ t <= t'' gives some t~ ⪯ t'' with t' <= t~",
        &|t2| {
            let t2_segs = t2.segments();
            let mut checked = 0;
            for t in &u.reducts[t2] {
                for t1 in t.segments() {
                    checked += 1;
                    if !t2_segs.iter().any(|s| is_fin_reduct(&t1, s)) {
                        return (checked, Some(format!("t' = {t1}, t = {t}, t'' = {t2}")));
                    }
                }
            }
            (checked, None)
        },
    ));

    clauses.push(run_clause(
        u,
        par,
        "A.3(1)",
        "[t, b] nonempty implies [t, b'] nonempty for every b' in [t, b]",
        &|b| {
            let mut checked = 0;
            let segs: HashSet<Connection> = u.reducts[b].iter().flat_map(|x| x.segments()).collect();
            for t in &segs {
                for b1 in u.cylinder(t, b) {
                    checked += 1;
                    if u.cylinder(t, b1).is_empty() {
                        return (checked, Some(format!("t = {t}, b = {b}, b' = {b1}")));
                    }
                }
            }
            (checked, None)
        },
    ));

    clauses.push(run_clause(
        u,
        par,
        "A.3(2)",
        "b' <= b and [t, b'] nonempty give b'' in [t, b] with [t, b''] nonempty inside [t, b']",
        &|b| {
            let mut checked = 0;
            for b1 in &u.reducts[b] {
                let segs: HashSet<Connection> = u.reducts[b1].iter().flat_map(|x| x.segments()).collect();
                for t in &segs {
                    checked += 1;
                    let target: HashSet<&Connection> = u.cylinder(t, b1).into_iter().collect();
                    let found = u.cylinder(t, b).into_iter().any(|b2| {
                        let inner = u.cylinder(t, b2);
                        !inner.is_empty() && inner.iter().all(|x| target.contains(x))
                    });
                    if !found {
                        return (checked, Some(format!("t = {t}, b = {b}, b' = {b1}")));
                    }
                }
            }
            (checked, None)
        },
    ));

    Ok(AxiomReport { max_len, max_alphabet, elements: u.elements.len(), clauses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// The whole fan lies in the open set.
    Inside,
    /// The whole fan avoids it.
    Outside,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Inside => "inside",
            Side::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanDecision {
    pub reduct: Connection,
    pub side: Side,
    /// `u_{n+1}[t, reduct]`: the `(n+1)`-segments of reducts of `reduct`
    /// whose `n`-segment is `t`.
    pub fan: Vec<Connection>,
}

/// `{s ∈ reduct_{n+1} : s.segment(n) = t}` with `n = t.image()`.
pub fn fan(t: &Connection, reduct: &Connection) -> Result<Vec<Connection>> {
    let n = t.image();
    if reduct.image() <= n {
        return Ok(Vec::new());
    }
    Ok(segment_set(reduct, n + 1)?
        .into_iter()
        .filter(|s| s.segment(n).is_ok_and(|p| p == *t))
        .collect())
}

/// Looks for a reduct `b'` of `base` with `t` as a segment whose fan lies
/// wholly inside or wholly outside `open`. Reducts are tried in
/// [`reducts`] order (the base first) and only those that lose at most
/// `depth` classes are considered; reducts without room for an
/// `(n+1)`-segment are skipped, since their empty fan decides nothing.
pub fn verify_a4_instance(
    base: &Connection,
    t: &Connection,
    open: &[Connection],
    depth: usize,
) -> Result<Option<FanDecision>> {
    if t.alphabet() != base.alphabet() {
        return Err(Error::domain("t and the base use different alphabets"));
    }
    let n = t.image();
    for o in open {
        if o.alphabet() != base.alphabet() || o.image() != n + 1 {
            return Err(Error::domain(format!("open-set member {o} does not have {} classes", n + 1)));
        }
    }
    let open: HashSet<&Connection> = open.iter().collect();
    for reduct in reducts(base) {
        if base.image() - reduct.image() > depth || reduct.image() <= n || !t.is_segment_of(&reduct) {
            continue;
        }
        let fan = fan(t, &reduct)?;
        let side = if fan.iter().all(|s| open.contains(s)) {
            Side::Inside
        } else if fan.iter().all(|s| !open.contains(s)) {
            Side::Outside
        } else {
            continue;
        };
        return Ok(Some(FanDecision { reduct, side, fan }));
    }
    Ok(None)
}
