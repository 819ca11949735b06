mod args;

use std::fmt::Display;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use selfdual_core::axioms::{check_axioms, verify_a4_instance};
use selfdual_core::connection::{
    enumerate_space, infer_alphabet, parse_connection, reduct_witness, segment_set, SpaceElement,
};
use selfdual_core::maps::{
    canonical_projection, freeze_below, fuse, left_word_to_connection, segment_to_word, word_to_segment,
    AlphabetShift, Cylinder,
};
use selfdual_core::search::{
    copy_family, find_bad_coloring, find_mono_copy, min_witness_n, ColoredSpace, Coloring, SearchConfig,
    WitnessOutcome,
};
use selfdual_core::words::{
    find_mono_line, hj_min_n, infer_word_alphabet, line_family, parse_variable_word, parse_word, span_membership,
};
use selfdual_core::{Alphabet, Connection, Error, Mode, Parallelism, SpaceSpec};

use args::{AxiomsCommand, Cli, Command, CopyArgs, Format, MapsCommand, SearchArgs, SearchCommand, ShiftArgs};

/// Reasons to stop with something other than success.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// An honest negative answer at this truncation.
    #[error("{0}")]
    NotFound(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::BoundExceeded { .. } | Error::GuardExceeded { .. }) => 3,
            Failure::Core(Error::NotInRange(_)) | Failure::NotFound(_) => 4,
            Failure::Core(_) | Failure::Usage(_) | Failure::Io { .. } => 2,
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    format: Format,
    search: SearchConfig,
}

impl Ctx {
    fn emit(&self, text: impl Display, json: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Jsonl => println!("{json}"),
        }
    }

    fn emit_connection(&self, c: &Connection) {
        self.emit(c, json!(c));
    }
}

fn alphabet_for(explicit: Option<usize>, texts: &[&str]) -> Alphabet {
    explicit.map(Alphabet).unwrap_or_else(|| texts.iter().map(|t| infer_alphabet(t)).max().unwrap_or_default())
}

fn conn(text: &str, alphabet: Alphabet) -> Result<Connection, Failure> {
    Ok(parse_connection(text, alphabet)?)
}

fn element_json(e: &SpaceElement) -> Value {
    match e {
        SpaceElement::Connection(c) => json!(c),
        SpaceElement::Surjection(s) => json!({ "t": s.tokens().iter().map(|t| t.to_string()).collect::<Vec<_>>() }),
        SpaceElement::Injection(v) => json!({ "i": v }),
    }
}

fn run(cli: Cli) -> Outcome {
    let parallelism = match cli.threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(1) => Parallelism::Sequential,
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Parallelism::Parallel
        }
        None => Parallelism::Parallel,
    };
    let mut search = SearchConfig { parallelism, ..Default::default() };
    if let Some(budget) = cli.node_budget {
        search.node_budget = budget;
    }
    let ctx = Ctx { format: cli.format, search };

    match cli.command {
        Command::Enumerate(s) => {
            let spec = SpaceSpec::new(Alphabet(s.alphabet), s.len, s.image, s.mode.into());
            for e in enumerate_space(spec)? {
                ctx.emit(&e, element_json(&e));
            }
            Ok(())
        }
        Command::Count(s) => {
            let spec = SpaceSpec::new(Alphabet(s.alphabet), s.len, s.image, s.mode.into());
            let n = enumerate_space(spec)?.len();
            ctx.emit(n, json!({ "count": n }));
            Ok(())
        }
        Command::Validate { conn: text, alphabet } => {
            let c = conn(&text, alphabet_for(alphabet, &[&text]))?;
            ctx.emit(&c, json!({ "valid": true, "connection": c, "L": c.len(), "K": c.image() }));
            Ok(())
        }
        Command::Compose { outer, inner, alphabet } => {
            let a = alphabet_for(alphabet, &[&outer, &inner]);
            ctx.emit_connection(&conn(&outer, a)?.compose(&conn(&inner, a)?)?);
            Ok(())
        }
        Command::Segment { conn: text, n, alphabet } => {
            ctx.emit_connection(&conn(&text, alphabet_for(alphabet, &[&text]))?.segment(n)?);
            Ok(())
        }
        Command::Reduct { candidate, base, alphabet } => {
            let a = alphabet_for(alphabet, &[&candidate, &base]);
            let (cand, base) = (conn(&candidate, a)?, conn(&base, a)?);
            match reduct_witness(&cand, &base)? {
                Some(w) => {
                    ctx.emit_connection(&w);
                    Ok(())
                }
                None => Err(Failure::NotFound(format!("{cand} is not a reduct of {base}"))),
            }
        }
        Command::SegmentsAt { base, n, alphabet } => {
            let base = conn(&base, alphabet_for(alphabet, &[&base]))?;
            for s in segment_set(&base, n)? {
                ctx.emit_connection(&s);
            }
            Ok(())
        }
        Command::Search(cmd) => run_search(&ctx, cmd),
        Command::Axioms(a) => match a.instance {
            None => {
                let report = check_axioms(a.len, a.alphabet, ctx.search.parallelism)?;
                ctx.emit(format_args!("{report}").to_string().trim_end(), json!(report));
                if report.all_passed() {
                    Ok(())
                } else {
                    Err(Failure::NotFound("some clauses have counterexamples".into()))
                }
            }
            Some(AxiomsCommand::A4 { base, t, open, depth, alphabet }) => {
                let mut texts = vec![base.as_str(), t.as_str()];
                texts.extend(open.iter().map(String::as_str));
                let a = alphabet_for(alphabet, &texts);
                let (base, t) = (conn(&base, a)?, conn(&t, a)?);
                let open = open.iter().map(|o| conn(o, a)).collect::<Result<Vec<_>, _>>()?;
                match verify_a4_instance(&base, &t, &open, depth)? {
                    Some(d) => {
                        let fan: Vec<String> = d.fan.iter().map(Connection::to_string).collect();
                        ctx.emit(
                            format_args!("{} {}\nfan: {}", d.reduct, d.side, fan.join(" ")),
                            json!({ "reduct": d.reduct, "side": d.side, "fan": d.fan }),
                        );
                        Ok(())
                    }
                    None => Err(Failure::NotFound(format!("no reduct within depth {depth} decides the fan"))),
                }
            }
        },
        Command::Maps(cmd) => run_maps(&ctx, cmd),
    }
}

fn required(value: Option<usize>, flag: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("{flag} is required")))
}

fn read_coloring(path: &std::path::Path) -> Result<Coloring, Failure> {
    let text = std::fs::read_to_string(path).map_err(|source| Failure::Io { path: path.display().to_string(), source })?;
    Ok(Coloring::from_json(text.trim())?)
}

fn run_search(ctx: &Ctx, cmd: SearchCommand) -> Outcome {
    let (copy, mode) = match cmd {
        SearchCommand::Sd { copy, mode } => (copy, Mode::from(mode)),
        SearchCommand::Ramsey(copy) => (copy, Mode::InjectionsOnly),
        SearchCommand::Dual(copy) => (copy, Mode::SurjectionsOnly),
        SearchCommand::Hj { alphabet, common } => return run_hj(ctx, alphabet, common),
    };
    let CopyArgs { image, inner, common } = copy;
    let m = required(inner, "--M")?;

    if let Some(path) = &common.verify {
        let coloring = read_coloring(path)?;
        let ColoredSpace::Space(spec) = coloring.space else {
            return Err(Failure::Usage("this coloring is on a word space; use `search hj --verify`".into()));
        };
        if spec.mode != mode || image.is_some_and(|k| k != spec.image) {
            return Err(Failure::Usage("the coloring's space does not match the requested search".into()));
        }
        let family = copy_family(spec.len, spec.image, m, mode)?;
        return report_mono(ctx, find_mono_copy(&coloring, &family)?.map(|(a, c)| (a.to_string(), c)));
    }

    let k = required(image, "--K")?;
    if let Some(n) = common.size {
        let found = find_bad_coloring(n, k, m, common.colors, mode, &ctx.search)?;
        return report_single(ctx, found);
    }
    let outcome = min_witness_n(k, m, common.colors, mode, common.max_n, &ctx.search)?;
    report_witness(ctx, outcome, common.certificate)
}

fn run_hj(ctx: &Ctx, alphabet: usize, common: SearchArgs) -> Outcome {
    if let Some(path) = &common.verify {
        let coloring = read_coloring(path)?;
        return report_mono(ctx, find_mono_line(&coloring)?.map(|(x, c)| (x.to_string(), c)));
    }
    if let Some(n) = common.size {
        let a = Alphabet(alphabet);
        let family = line_family(n, a)?;
        let found = selfdual_core::search::search_bad_coloring(&family.graph, common.colors, &ctx.search)?;
        let found = found
            .map(|colors| Coloring::new(ColoredSpace::Words { alphabet: a, length: n }, common.colors, colors))
            .transpose()?;
        return report_single(ctx, found);
    }
    let outcome = hj_min_n(alphabet, common.colors, common.max_n, &ctx.search)?;
    report_witness(ctx, outcome, common.certificate)
}

fn report_mono(ctx: &Ctx, mono: Option<(String, usize)>) -> Outcome {
    match mono {
        None => {
            ctx.emit("no monochromatic copy", json!({ "monochromatic": null }));
            Ok(())
        }
        Some((at, color)) => {
            ctx.emit(
                format_args!("monochromatic copy at {at} in color {color}"),
                json!({ "monochromatic": { "at": at, "color": color } }),
            );
            Err(Failure::NotFound("the coloring has a monochromatic copy".into()))
        }
    }
}

fn coloring_json(c: &Coloring) -> Value {
    serde_json::from_str(&c.to_json()).expect("colorings serialize to JSON")
}

fn report_single(ctx: &Ctx, found: Option<Coloring>) -> Outcome {
    match found {
        Some(c) => ctx.emit(c.to_json(), json!({ "bad_coloring": coloring_json(&c) })),
        None => ctx.emit("none", json!({ "bad_coloring": null })),
    }
    Ok(())
}

fn report_witness(ctx: &Ctx, outcome: WitnessOutcome, certificate: bool) -> Outcome {
    match outcome {
        WitnessOutcome::Minimal { n, previous } => {
            let cert = previous.as_ref().filter(|_| certificate);
            match ctx.format {
                Format::Text => {
                    println!("{n}");
                    if let Some(c) = cert {
                        println!("{}", c.to_json());
                    }
                }
                Format::Jsonl => {
                    println!("{}", json!({ "N": n, "certificate": cert.map(coloring_json) }));
                }
            }
            if certificate && previous.is_none() {
                eprintln!("no smaller size was tested, so there is no certificate");
            }
            Ok(())
        }
        WitnessOutcome::NotWithin { max_n, last_bad } => {
            let cert = last_bad.as_ref().filter(|_| certificate);
            match ctx.format {
                Format::Text => {
                    println!("none <= {max_n}");
                    if let Some(c) = cert {
                        println!("{}", c.to_json());
                    }
                }
                Format::Jsonl => {
                    println!("{}", json!({ "N": null, "max_N": max_n, "last_bad": cert.map(coloring_json) }));
                }
            }
            Err(Failure::NotFound(format!("no witness up to N = {max_n}")))
        }
    }
}

fn shift_of(args: &ShiftArgs, base: Alphabet) -> AlphabetShift {
    match args.absorb {
        Some(count) => AlphabetShift::AbsorbNumerals { base, count },
        None => AlphabetShift::NewLetter { base },
    }
}

fn run_maps(ctx: &Ctx, cmd: MapsCommand) -> Outcome {
    match cmd {
        MapsCommand::Sigma { word, base, alphabet } => {
            let a = alphabet_for(alphabet, &[&word, &base]);
            let seg = word_to_segment(&parse_word(&word, a)?, &conn(&base, a)?)?;
            ctx.emit_connection(&seg);
        }
        MapsCommand::SigmaInv { segment, base, alphabet } => {
            let a = alphabet_for(alphabet, &[&segment, &base]);
            let w = segment_to_word(&conn(&segment, a)?, &conn(&base, a)?)?;
            ctx.emit(&w, json!({ "word": w.to_string() }));
        }
        MapsCommand::Shift { conn: text, shift } => {
            if shift.inverse {
                let a = alphabet_for(shift.alphabet, &[&text]);
                let s = shift_of(&shift, a);
                ctx.emit_connection(&s.unconjugate(&conn(&text, a)?)?);
            } else {
                let s = shift_of(&shift, Alphabet(shift.alphabet.unwrap_or(0)));
                ctx.emit_connection(&s.conjugate(&conn(&text, s.target())?)?);
            }
        }
        MapsCommand::Theta { conn: text, base, shift } => {
            let a = alphabet_for(shift.alphabet, &[&base]);
            let cyl = Cylinder::new(shift_of(&shift, a), conn(&base, a)?)?;
            if shift.inverse {
                ctx.emit_connection(&cyl.project(&conn(&text, a)?)?);
            } else {
                ctx.emit_connection(&cyl.embed(&conn(&text, cyl.shift.target())?)?);
            }
        }
        MapsCommand::LeftWord { w0, xs } => {
            let mut texts = vec![w0.as_str()];
            texts.extend(xs.iter().map(String::as_str));
            let a = infer_word_alphabet(texts);
            let xs = xs.iter().map(|x| parse_variable_word(x, a)).collect::<Result<Vec<_>, _>>()?;
            let r = left_word_to_connection(&parse_word(&w0, a)?, &xs)?;
            let tokens: Vec<String> = r.tokens().iter().map(|t| t.to_string()).collect();
            ctx.emit(tokens.join(","), json!({ "t": tokens }));
        }
        MapsCommand::Freeze { witness, n, alphabet } => {
            let w = conn(&witness, alphabet_for(alphabet, &[&witness]))?;
            ctx.emit_connection(&freeze_below(&w, n)?);
        }
        MapsCommand::Fuse { chain, alphabet } => {
            let texts: Vec<&str> = chain.iter().map(String::as_str).collect();
            let a = alphabet_for(alphabet, &texts);
            let chain = chain.iter().map(|c| conn(c, a)).collect::<Result<Vec<_>, _>>()?;
            for s in fuse(&chain)? {
                ctx.emit_connection(&s);
            }
        }
        MapsCommand::Projection { len, image } => ctx.emit_connection(&canonical_projection(len, image)?),
        MapsCommand::Span { w, w0, xs } => {
            let mut texts = vec![w.as_str(), w0.as_str()];
            texts.extend(xs.iter().map(String::as_str));
            let a = infer_word_alphabet(texts);
            let xs = xs.iter().map(|x| parse_variable_word(x, a)).collect::<Result<Vec<_>, _>>()?;
            match span_membership(&parse_word(&w, a)?, &parse_word(&w0, a)?, &xs)? {
                Some(d) => {
                    let text = if d.indices.is_empty() { "w0".to_string() } else { format!("w0 {d}") };
                    ctx.emit(text, json!({ "indices": d.indices, "letters": d.letters }));
                }
                None => return Err(Failure::NotFound(format!("{w} is not in the span"))),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("selfdual: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
