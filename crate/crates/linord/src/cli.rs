//! Command-line front end: parse terms and classes, run the deciders and
//! searches, and emit human-readable or JSON reports.
//!
//! Exit codes: 0 holds/true, 2 fails/false, 3 unknown, 1 usage or parse
//! errors.

use crate::constructions as cons;
use crate::engine::{self, Verdict};
use crate::lclass::{self, ClassId};
use crate::ordinal::Ordinal;
use crate::term::{normalize, parse_class, parse_term, ColouredFinite, E1Seq, PeriodicSet, Term};
use crate::zcalc;
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use rand::SeedableRng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "linord", version, about = "deciders and searches for countable linear orders")]
struct Cli {
    /// Emit machine-readable JSON instead of prose.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide class-indexed convex embeddability (default), plain
    /// embeddability, convex embeddability, or biembeddability.
    Rel(RelArgs),
    /// Isomorphism on the decidable fragment.
    Iso { a: String, b: String },
    /// Rank of a scattered term: the least g with t <= Z^g.
    Rank { term: String },
    /// Class membership.
    Member { class: String, term: String },
    /// Closure under convex sums, from the classified table.
    Ccs {
        class: String,
        /// Print the violation witness when the class is not closed.
        #[arg(long)]
        witness: bool,
    },
    /// Search for a closure violation without the table.
    CcsSearch {
        class: String,
        /// Instance budget; defaults to LINORD_BUDGET or 10000.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build one of the named maps.
    Construct {
        #[command(subcommand)]
        map: ConstructCmd,
    },
    /// Report transitivity violations of the relation on a corpus file
    /// (one term per line).
    ProbeTransitivity {
        #[arg(long)]
        class: String,
        #[arg(long)]
        corpus: std::path::PathBuf,
    },
    /// Generate the named family.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
}

#[derive(Args)]
struct RelArgs {
    /// Class for the indexed relation (required unless --embed/--convex).
    #[arg(long)]
    class: Option<String>,
    /// Plain embeddability.
    #[arg(long)]
    embed: bool,
    /// Convex embeddability.
    #[arg(long)]
    convex: bool,
    /// Both directions of the indexed relation.
    #[arg(long)]
    bi: bool,
    a: String,
    b: String,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// (1 + z*L + 1) * M
    Cong { l: String, m: String },
    /// L + 1
    Succ { l: String },
    /// (shuffle(alpha) + q + base + q) * L
    Fractal { l: String, base: String, alpha: String },
    /// sum over a < gamma of (shuffle(a) + z*L)
    Threshold { l: String, gamma: String },
    /// sum over the integers of (shuffle(h(k)) + z*L)
    FinZeta { l: String },
    /// word of singleton shuffles from a coloured chain, e.g. "a,b,a"
    Coloured { colours: String },
    /// the tail-equality image of "x1,x2,...;tail"
    E1 { seq: String },
    /// decide tail equality of two sequences
    E1Decide { x: String, y: String },
}

#[derive(Subcommand)]
enum GenCmd {
    /// shuffle over a symbolic infinite label set: evens, odds, all,
    /// or bits:PREFIX:PERIOD
    ShuffleFamily {
        #[arg(long)]
        set: String,
    },
    /// interval restriction of the fixed injective shuffle
    Ishuffle { lo: String, hi: String },
    /// pairwise incomparable constant-label shuffles
    Antichain {
        #[arg(long, default_value_t = 5)]
        count: u64,
    },
    /// random block words
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: u64,
    },
}

/// Runs a full command line; returns the exit status and the report.
pub fn run_command(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return (1, e.to_string()),
    };
    match dispatch(&cli) {
        Ok((code, report)) => (code, report),
        Err(msg) => (1, format!("error: {msg}")),
    }
}

fn term_arg(s: &str) -> Result<Term, String> {
    parse_term(s).map_err(|e| e.to_string())
}

fn class_arg(s: &str) -> Result<ClassId, String> {
    parse_class(s).map_err(|e| e.to_string())
}

fn ordinal_arg(s: &str) -> Result<Ordinal, String> {
    Ordinal::parse(s).map_err(|e| e.to_string())
}

fn verdict_report(v: &Verdict, json_mode: bool) -> (i32, String) {
    if json_mode {
        (v.exit_code(), v.to_json().to_string())
    } else {
        let text = match v {
            Verdict::Holds { rule, witness } => {
                let mut s = format!("holds [{rule}]");
                if let Some(w) = witness {
                    s.push_str(&format!("\n  index order: {}", w.index_order));
                    for (src, dst) in &w.pieces {
                        s.push_str(&format!("\n  piece {src}  ->  {dst}"));
                    }
                    if let Some(e) = &w.embedding {
                        s.push_str(&format!("\n  embedding: {e:?}"));
                    }
                }
                s
            }
            Verdict::Fails { rule, detail } => format!("fails [{rule}]: {detail}"),
            Verdict::Unknown { explanation } => format!("unknown: {explanation}"),
        };
        (v.exit_code(), text)
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, String), String> {
    match &cli.cmd {
        Cmd::Rel(args) => {
            let a = term_arg(&args.a)?;
            let b = term_arg(&args.b)?;
            let v = if args.embed {
                engine::embeds(&a, &b)
            } else if args.convex {
                engine::convex_embeds(&a, &b)
            } else {
                let class = class_arg(args.class.as_deref().ok_or("--class is required")?)?;
                if args.bi {
                    engine::biembeds(&class, &a, &b)
                } else {
                    engine::l_convex_embeds(&class, &a, &b)
                }
            };
            Ok(verdict_report(&v, cli.json))
        }
        Cmd::Iso { a, b } => {
            let v = engine::iso_check(&term_arg(a)?, &term_arg(b)?);
            Ok(verdict_report(&v, cli.json))
        }
        Cmd::Rank { term } => {
            let t = term_arg(term)?;
            match zcalc::hausdorff_rank(&t) {
                Ok(r) => {
                    let report = if cli.json {
                        json!({"rank": r.to_string()}).to_string()
                    } else {
                        r.to_string()
                    };
                    Ok((0, report))
                }
                Err(zcalc::ZcalcError::Undecided(t)) => Ok((3, format!("unknown: rank of {t} undecided within the probe bound"))),
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Member { class, term } => {
            let c = class_arg(class)?;
            let t = term_arg(term)?;
            Ok(verdict_report(&c.member(&t), cli.json))
        }
        Cmd::Ccs { class, witness } => {
            let c = class_arg(class)?;
            let (v, w) = lclass::ccs_check(&c);
            if cli.json {
                let mut j = v.to_json();
                if *witness {
                    if let Some(w) = &w {
                        j["ccsWitness"] = w.to_json();
                    }
                }
                Ok((v.exit_code(), j.to_string()))
            } else {
                let (code, mut text) = verdict_report(&v, false);
                if *witness {
                    if let Some(w) = &w {
                        text.push_str(&format!(
                            "\n  K = {}, K' = {}, sum = {}\n  family: {}",
                            w.index,
                            w.target,
                            w.sum,
                            w.family.to_json()
                        ));
                    }
                }
                Ok((code, text))
            }
        }
        Cmd::CcsSearch { class, budget } => {
            let c = class_arg(class)?;
            let budget = budget
                .or_else(|| std::env::var("LINORD_BUDGET").ok().and_then(|s| s.parse().ok()))
                .unwrap_or(10_000);
            let (w, used) = lclass::ccs_witness_search(&c, budget);
            match w {
                Some(w) => {
                    let report = if cli.json {
                        json!({"found": true, "instances": used, "witness": w.to_json()}).to_string()
                    } else {
                        format!(
                            "violation after {used} instances: K = {}, K' = {}, sum = {} leaves the class",
                            w.index, w.target, w.sum
                        )
                    };
                    Ok((2, report))
                }
                None => {
                    let report = if cli.json {
                        json!({"found": false, "instances": used}).to_string()
                    } else {
                        format!("no violation within {used} instances")
                    };
                    Ok((0, report))
                }
            }
        }
        Cmd::Construct { map } => construct(map, cli),
        Cmd::ProbeTransitivity { class, corpus } => {
            let c = class_arg(class)?;
            let text = std::fs::read_to_string(corpus).map_err(|e| e.to_string())?;
            let terms: Vec<Term> = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| term_arg(l.trim()))
                .collect::<Result<_, _>>()?;
            let bad = engine::transitivity_probe(&c, &terms);
            if cli.json {
                let arr: Vec<_> = bad
                    .iter()
                    .map(|(i, j, k)| {
                        json!({
                            "a": terms[*i].to_string(),
                            "b": terms[*j].to_string(),
                            "c": terms[*k].to_string(),
                        })
                    })
                    .collect();
                Ok((if bad.is_empty() { 0 } else { 2 }, json!({ "violations": arr }).to_string()))
            } else if bad.is_empty() {
                Ok((0, "no transitivity violations".into()))
            } else {
                let mut s = format!("{} violations:", bad.len());
                for (i, j, k) in &bad {
                    s.push_str(&format!("\n  {}  |  {}  |  {}", terms[*i], terms[*j], terms[*k]));
                }
                Ok((2, s))
            }
        }
        Cmd::Gen { family } => gen(family, cli),
    }
}

fn construct(map: &ConstructCmd, cli: &Cli) -> Result<(i32, String), String> {
    let term_out = |t: Term, json_mode: bool| {
        let n = normalize(&t);
        if json_mode {
            (0, json!({"term": t.to_string(), "normalized": n.to_string()}).to_string())
        } else {
            (0, format!("{t}\n  normalized: {n}"))
        }
    };
    match map {
        ConstructCmd::Cong { l, m } => Ok(term_out(cons::phi_cong(&term_arg(l)?, &term_arg(m)?), cli.json)),
        ConstructCmd::Succ { l } => Ok(term_out(cons::phi_succ(&term_arg(l)?), cli.json)),
        ConstructCmd::Fractal { l, base, alpha } => {
            let t = cons::phi_fractal(&term_arg(l)?, &term_arg(base)?, &ordinal_arg(alpha)?)
                .map_err(|e| e.to_string())?;
            Ok(term_out(t, cli.json))
        }
        ConstructCmd::Threshold { l, gamma } => {
            let t = cons::phi_threshold(&term_arg(l)?, &ordinal_arg(gamma)?).map_err(|e| e.to_string())?;
            Ok(term_out(t, cli.json))
        }
        ConstructCmd::FinZeta { l } => Ok(term_out(cons::phi_fin_zeta(&term_arg(l)?), cli.json)),
        ConstructCmd::Coloured { colours } => {
            let s = parse_colours(colours)?;
            Ok(term_out(cons::phi_coloured(&s), cli.json))
        }
        ConstructCmd::E1 { seq } => {
            let s = parse_e1(seq)?;
            let t = cons::phi_e1(&s).map_err(|e| e.to_string())?;
            Ok(term_out(t, cli.json))
        }
        ConstructCmd::E1Decide { x, y } => {
            let v = cons::e1_decide(&parse_e1(x)?, &parse_e1(y)?);
            Ok(verdict_report(&v, cli.json))
        }
    }
}

fn gen(family: &GenCmd, cli: &Cli) -> Result<(i32, String), String> {
    match family {
        GenCmd::ShuffleFamily { set } => {
            let s = parse_set(set)?;
            let t = cons::gen_shuffle_family(s);
            Ok((0, t.to_string()))
        }
        GenCmd::Ishuffle { lo, hi } => {
            let t = cons::gen_interval_shuffle(parse_rat(lo)?, parse_rat(hi)?).map_err(|e| e.to_string())?;
            Ok((0, t.to_string()))
        }
        GenCmd::Antichain { count } => {
            let fam = cons::antichain_family(*count);
            let lines: Vec<String> = fam.iter().map(|t| t.to_string()).collect();
            if cli.json {
                Ok((0, json!({ "family": lines }).to_string()))
            } else {
                Ok((0, lines.join("\n")))
            }
        }
        GenCmd::Corpus { count } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let cfg = crate::corpus::GenCfg::default();
            let lines: Vec<String> = (0..*count)
                .map(|_| crate::corpus::random_term(&mut rng, &cfg).to_string())
                .collect();
            Ok((0, lines.join("\n")))
        }
    }
}

fn parse_colours(s: &str) -> Result<ColouredFinite, String> {
    let mut names: Vec<String> = vec![];
    let mut out = vec![];
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err("empty colour".into());
        }
        if let Ok(n) = part.parse::<u32>() {
            out.push(n);
            continue;
        }
        let id = names.iter().position(|x| x == part).unwrap_or_else(|| {
            names.push(part.to_string());
            names.len() - 1
        });
        out.push(id as u32 + 1);
    }
    if out.is_empty() {
        return Err("need at least one colour".into());
    }
    Ok(ColouredFinite::new(out))
}

fn parse_rat(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let r = if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| "bad rational")?;
        let d: i64 = d.trim().parse().map_err(|_| "bad rational")?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        Rational64::new(n, d)
    } else {
        Rational64::from_integer(s.parse::<i64>().map_err(|_| "bad rational")?)
    };
    Ok(if neg { -r } else { r })
}

fn parse_e1(s: &str) -> Result<E1Seq, String> {
    let (prefix, tail) = s.split_once(';').ok_or("expected 'x1,x2,...;tail'")?;
    let prefix: Vec<Rational64> = prefix
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_rat)
        .collect::<Result<_, _>>()?;
    let tail = parse_rat(tail)?;
    Ok(E1Seq { prefix, tail })
}

fn parse_set(s: &str) -> Result<PeriodicSet, String> {
    match s {
        "evens" => Ok(PeriodicSet::evens()),
        "odds" => Ok(PeriodicSet::odds()),
        "all" => Ok(PeriodicSet::all()),
        other => {
            let rest = other.strip_prefix("bits:").ok_or("unknown set; use evens, odds, all or bits:P:Q")?;
            let (p, q) = rest.split_once(':').ok_or("bits needs prefix:period")?;
            let bits = |s: &str| -> Result<Vec<bool>, String> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err("bits are 0 or 1".to_string()),
                    })
                    .collect()
            };
            PeriodicSet::new(bits(p)?, bits(q)?).ok_or_else(|| "the set must be infinite".into())
        }
    }
}
