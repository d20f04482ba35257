use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use residue_symbols::{
    anderson_romo_check, contou_carrere, dlog2, kato_residue, kato_square, realize_residues, res1, res2,
    residue_sum_check, tame_symbol_at_point, weil_check, witt_decompose, witt_decompose_to, Error, LaurentSeries,
    ReciprocityReport, Result, Ring, RingElement,
};

use crate::parse::{
    parse_assignment, parse_form, parse_global_form, parse_mhat, parse_point, parse_rational, parse_ring,
    parse_series, FormValue,
};
use crate::report::Format;
use crate::suites::{run_suite, Suite, SuiteConfig, SuiteOptions};

#[derive(Parser, Debug)]
#[command(name = "rsym", version, about = "Residue symbols over truncated local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a symbol of two units.
    Symbol {
        kind: SymbolKind,
        #[command(flatten)]
        pair: Pair,
        /// Closed point for the tame symbol of rational functions on P^1
        /// (`inf` for infinity); without it `--f`, `--g` are series in t.
        #[arg(long)]
        at: Option<String>,
    },
    /// Witt decomposition of a unit series.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        /// Compute the coordinates a_i with i < N only.
        #[arg(long)]
        coords: Option<usize>,
    },
    /// Residue of a one-form `f*dt + g*de` or a two-form `h*de^dt`.
    Residue {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// The two-form dlog f ^ dlog g.
    Dlog2 {
        #[command(flatten)]
        pair: Pair,
    },
    /// Check a reciprocity law or the commuting square on given inputs.
    Verify {
        law: Law,
        #[command(flatten)]
        common: Common,
        #[arg(long = "f", allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long = "g", allow_hyphen_values = true)]
        g: Option<String>,
        /// Two-form on the affine line as partial fractions in x (residue-sum).
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
        /// Residue assignment `s1: w1; s2: w2; inf: w` to realize (residue-sum).
        #[arg(long, allow_hyphen_values = true)]
        poles: Option<String>,
    },
    /// Run a randomized verification suite.
    Suite {
        name: Suite,
        #[command(flatten)]
        opts: SuiteArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SymbolKind {
    Cc,
    Tame,
    Kato,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Law {
    Weil,
    ReciprocityAr,
    ResidueSum,
    DlogSquare,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficient ring, e.g. `F3[e]/(e^2)`, `Q`, `Z/25`, `F5[x]/(x^3)`.
    #[arg(long)]
    pub ring: String,
    /// Working t-precision for inputs given as polynomials.
    #[arg(long)]
    pub tprec: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Pair {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "f", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long = "g", allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    /// Ring to draw cases from; repeat for several. Defaults depend on the suite.
    #[arg(long)]
    pub ring: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Nilpotency orders m of the default rings F_p[e]/(e^m).
    #[arg(long, value_delimiter = ',')]
    pub orders: Vec<u32>,
    /// Bound on the exponents n, m.
    #[arg(long)]
    pub max_exp: Option<i64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub cases: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coefficients drawn above the winding index of random units.
    #[arg(long)]
    pub tprec: Option<i64>,
    /// x-precision m of Kato rings F_p[x]/(x^m).
    #[arg(long)]
    pub xprec: Option<u32>,
    /// Maximal depth of the nilpotent polar tail of random units.
    #[arg(long)]
    pub polar_depth: Option<i64>,
    /// Rerun a single case by index.
    #[arg(long = "case")]
    pub only_case: Option<usize>,
    /// Record wall time in the report.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// The result of a command: its report in both formats and whether every
/// check passed.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub pass: bool,
}

impl Outcome {
    fn value(command: &str, inputs: Value, result: impl ToString) -> Outcome {
        let result = result.to_string();
        Outcome {
            json: json!({ "command": command, "inputs": inputs, "result": result, "pass": true }),
            text: result + "\n",
            pass: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
        }
    }
}

fn series_in(common: &Common, ring: &Ring, text: &str) -> Result<LaurentSeries> {
    let f = parse_series(text, ring, "t")?;
    Ok(match common.tprec {
        Some(n) => f.with_precision(n),
        None => f,
    })
}

/// Run `op` on the inputs, attaching a working precision to exact inputs
/// when the result needs one.
fn with_working_precision<T>(
    f: &LaurentSeries,
    g: &LaurentSeries,
    op: impl Fn(&LaurentSeries, &LaurentSeries) -> Result<T>,
) -> Result<T> {
    let first = op(f, g);
    if !matches!(first, Err(Error::IndeterminateAtPrecision(_))) || !(f.is_exact() || g.is_exact()) {
        return first;
    }
    let mut last = first;
    for n in [16, 64, 256, 1024] {
        last = op(&f.with_precision(n), &g.with_precision(n));
        if !matches!(last, Err(Error::IndeterminateAtPrecision(_))) {
            break;
        }
    }
    last
}

/// `(-1)^(v w) a^w / b^v` from the leading terms of two series over a field.
fn tame_series(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElement> {
    if !f.ring().is_field() {
        return Err(Error::UnsupportedRing {
            op: "tame symbol",
            ring: f.ring().to_string(),
        });
    }
    let lead = |s: &LaurentSeries| -> Result<(i64, RingElement)> {
        let v = s.winding_number()?;
        Ok((v, s.coeff(v).expect("unit series have a known leading term")))
    };
    let (v, a) = lead(f)?;
    let (w, b) = lead(g)?;
    let ring = f.ring();
    let sign = if (v * w).rem_euclid(2) == 1 { -ring.one() } else { ring.one() };
    Ok(sign * a.pow(w)? * b.pow(v)?.inv()?)
}

fn reciprocity_outcome(command: &str, inputs: Value, report: &ReciprocityReport) -> Outcome {
    let mut text = String::new();
    for (p, v) in &report.symbols {
        let _ = writeln!(text, "{p}: {v}");
    }
    let pass = report.passes();
    let _ = writeln!(text, "product: {}", report.product);
    text.push_str(if pass { "pass\n" } else { "FAIL\n" });
    let symbols: Vec<Value> = report
        .symbols
        .iter()
        .map(|(p, v)| json!({ "point": p.to_string(), "symbol": v.to_string() }))
        .collect();
    Outcome {
        text,
        json: json!({
            "command": command,
            "inputs": inputs,
            "symbols": symbols,
            "product": report.product.to_string(),
            "pass": pass,
        }),
        pass,
    }
}

fn square_outcome(inputs: Value, residue: String, symbol: String) -> Outcome {
    let pass = residue == symbol;
    let text = format!("residue: {residue}\nsymbol: {symbol}\n{}\n", if pass { "pass" } else { "FAIL" });
    Outcome {
        text,
        json: json!({
            "command": "verify dlog-square",
            "inputs": inputs,
            "residue": residue,
            "symbol": symbol,
            "pass": pass,
        }),
        pass,
    }
}

fn required<'a>(flag: &str, v: &'a Option<String>) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("missing --{flag}"),
    })
}

fn symbol(kind: SymbolKind, pair: &Pair, at: Option<&str>) -> Result<Outcome> {
    let ring = parse_ring(&pair.common.ring)?;
    let inputs = json!({ "ring": ring.to_string(), "f": pair.f, "g": pair.g, "at": at });
    let result = match (kind, at) {
        (SymbolKind::Tame, Some(at)) => {
            let f = parse_rational(&pair.f, &ring)?;
            let g = parse_rational(&pair.g, &ring)?;
            tame_symbol_at_point(&f, &g, &parse_point(at, &ring)?)?.to_string()
        }
        (SymbolKind::Cc, Some(at)) => {
            let f = parse_rational(&pair.f, &ring)?;
            let g = parse_rational(&pair.g, &ring)?;
            residue_symbols::contou_carrere_at(&f, &g, &parse_point(at, &ring)?)?.to_string()
        }
        (SymbolKind::Tame, None) => {
            tame_series(&series_in(&pair.common, &ring, &pair.f)?, &series_in(&pair.common, &ring, &pair.g)?)?
                .to_string()
        }
        (SymbolKind::Cc, None) => {
            contou_carrere(&series_in(&pair.common, &ring, &pair.f)?, &series_in(&pair.common, &ring, &pair.g)?)?
                .to_string()
        }
        (SymbolKind::Kato, _) => kato_residue(&parse_mhat(&pair.f, &ring)?, &parse_mhat(&pair.g, &ring)?)?.to_string(),
    };
    let name = match kind {
        SymbolKind::Cc => "symbol cc",
        SymbolKind::Tame => "symbol tame",
        SymbolKind::Kato => "symbol kato",
    };
    Ok(Outcome::value(name, inputs, result))
}

fn decompose(common: &Common, f: &str, coords: Option<usize>) -> Result<Outcome> {
    let ring = parse_ring(&common.ring)?;
    let series = series_in(common, &ring, f)?;
    let d = match coords {
        Some(n) => witt_decompose_to(&series, n)?,
        None => witt_decompose(&series)?,
    };
    let text = format!("{d}\n");
    let json = json!({
        "command": "decompose",
        "inputs": { "ring": ring.to_string(), "f": series.to_string() },
        "winding": d.winding(),
        "a0": d.a0().to_string(),
        "positive": d.positive().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "negative": d.negative().iter().map(|(i, a)| json!([i, a.to_string()])).collect::<Vec<_>>(),
        "precision": d.precision(),
        "pass": true,
    });
    Ok(Outcome { text, json, pass: true })
}

fn residue(common: &Common, form: &str) -> Result<Outcome> {
    let ring = parse_ring(&common.ring)?;
    let inputs = json!({ "ring": ring.to_string(), "form": form });
    let result = match parse_form(form, &ring)? {
        FormValue::One(w) => res1(&w)?.to_string(),
        FormValue::Two(w) => res2(&w)?.to_string(),
        FormValue::Series(_) => {
            return Err(Error::Parse {
                pos: 0,
                msg: "expected a one-form (dt, de) or a two-form (de^dt)".into(),
            })
        }
    };
    Ok(Outcome::value("residue", inputs, result))
}

fn dlog2_command(pair: &Pair) -> Result<Outcome> {
    let ring = parse_ring(&pair.common.ring)?;
    let f = series_in(&pair.common, &ring, &pair.f)?;
    let g = series_in(&pair.common, &ring, &pair.g)?;
    let w = with_working_precision(&f, &g, dlog2)?;
    let r = res2(&w).map(|r| r.to_string()).unwrap_or_else(|e| format!("error: {e}"));
    let inputs = json!({ "ring": ring.to_string(), "f": pair.f, "g": pair.g });
    Ok(Outcome {
        text: format!("{w}\n"),
        json: json!({ "command": "dlog2", "inputs": inputs, "result": w.to_string(), "res2": r, "pass": true }),
        pass: true,
    })
}

fn verify(law: Law, common: &Common, f: &Option<String>, g: &Option<String>, form: &Option<String>, poles: &Option<String>) -> Result<Outcome> {
    let ring = parse_ring(&common.ring)?;
    let inputs = json!({ "ring": ring.to_string(), "f": f, "g": g, "form": form, "poles": poles });
    match law {
        Law::Weil | Law::ReciprocityAr => {
            let fr = parse_rational(required("f", f)?, &ring)?;
            let gr = parse_rational(required("g", g)?, &ring)?;
            let (name, report) = match law {
                Law::Weil => ("verify weil", weil_check(&fr, &gr)?),
                _ => ("verify reciprocity-ar", anderson_romo_check(&fr, &gr)?),
            };
            Ok(reciprocity_outcome(name, inputs, &report))
        }
        Law::DlogSquare if ring.variable() == Some("x") => {
            let (r, s) = kato_square(&parse_mhat(required("f", f)?, &ring)?, &parse_mhat(required("g", g)?, &ring)?)?;
            Ok(square_outcome(inputs, r.to_string(), s.to_string()))
        }
        Law::DlogSquare => {
            let fs = series_in(common, &ring, required("f", f)?)?;
            let gs = series_in(common, &ring, required("g", g)?)?;
            let (r, s) = with_working_precision(&fs, &gs, residue_symbols::dlog_square)?;
            Ok(square_outcome(inputs, r.to_string(), s.to_string()))
        }
        Law::ResidueSum => {
            let (omega, expected) = match (form, poles) {
                (Some(text), None) => (parse_global_form(text, &ring)?, None),
                (None, Some(text)) => {
                    let assignment = parse_assignment(text, &ring)?;
                    (realize_residues(&ring, &assignment)?, Some(assignment))
                }
                _ => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "give exactly one of --form and --poles".into(),
                    })
                }
            };
            let (residues, sum) = residue_sum_check(&omega)?;
            let mut pass = sum.is_zero();
            if let Some(assignment) = &expected {
                for (pt, w) in assignment {
                    pass &= omega.residue_at(pt)? == *w;
                }
            }
            let mut text = String::new();
            if expected.is_some() {
                let _ = writeln!(text, "form: {omega}");
            }
            for (p, w) in &residues {
                let _ = writeln!(text, "{p}: {w}");
            }
            let _ = writeln!(text, "sum: {sum}");
            text.push_str(if pass { "pass\n" } else { "FAIL\n" });
            let json = json!({
                "command": "verify residue-sum",
                "inputs": inputs,
                "form": omega.to_string(),
                "residues": residues.iter().map(|(p, w)| json!({ "point": p.to_string(), "residue": w.to_string() })).collect::<Vec<_>>(),
                "sum": sum.to_string(),
                "pass": pass,
            });
            Ok(Outcome { text, json, pass })
        }
    }
}

fn suite(name: Suite, args: &SuiteArgs) -> Result<Outcome> {
    let rings = args.ring.iter().map(|r| parse_ring(r)).collect::<Result<Vec<_>>>()?;
    let opts = SuiteOptions {
        rings,
        primes: args.primes.clone(),
        orders: args.orders.clone(),
        max_exp: args.max_exp,
        cases: args.cases.map(|c| c as usize),
        seed: args.seed,
        tprec: args.tprec,
        xprec: args.xprec,
        polar_depth: args.polar_depth,
        only_case: args.only_case,
        timing: args.timing,
    };
    let report = run_suite(&SuiteConfig::resolve(name, opts)?)?;
    Ok(Outcome {
        text: report.render(Format::Text),
        json: serde_json::to_value(&report).expect("serializable"),
        pass: report.passed(),
    })
}

/// Execute a parsed command line; returns the outcome and its output format.
pub fn execute(cli: &Cli) -> (Result<Outcome>, Format, Option<std::path::PathBuf>) {
    match &cli.command {
        Command::Symbol { kind, pair, at } => (symbol(*kind, pair, at.as_deref()), pair.common.format, pair.common.out.clone()),
        Command::Decompose { common, f, coords } => (decompose(common, f, *coords), common.format, common.out.clone()),
        Command::Residue { common, form } => (residue(common, form), common.format, common.out.clone()),
        Command::Dlog2 { pair } => (dlog2_command(pair), pair.common.format, pair.common.out.clone()),
        Command::Verify {
            law,
            common,
            f,
            g,
            form,
            poles,
        } => (verify(*law, common, f, g, form, poles), common.format, common.out.clone()),
        Command::Suite { name, opts } => (suite(*name, opts), opts.format, opts.out.clone()),
    }
}

/// Parse `argv`, run the command and write its report. Returns the exit
/// code: 0 when every check passes, 1 when a check fails, 2 on errors.
pub fn run<I, T>(argv: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (outcome, format, out) = execute(&cli);
    match outcome {
        Ok(o) => {
            let text = o.render(format);
            let written = match &out {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
