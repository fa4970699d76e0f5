//! `hhcalc`: admissible words, differential searches, bar-complex checks and
//! higher Hochschild homology series from the command line.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on a
//! usage or parameter error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hochschild::bar::{bar_complex, check_shuffle_laws, verify_quasi_iso, BarBounds, CheckOutcome, QuasiIsoCase};
use hochschild::fp::is_prime;
use hochschild::series::{
    hh_group_algebra, hh_laurent, hh_poly_gens, hh_polynomial, hh_truncated, hh_truncated_height, oracle_cross, thh_fp,
    thh_group_algebra, GroupSpec, OracleFamily, PoincareSeries,
};
use hochschild::words::{
    classify, diff_candidates, enumerate_words, verify_powerwords, GeneratorKind, SearchMode, WordFamily,
};

use report::{table, Format, Report, RunConfig};

const MAX_DEGREE_ENV: &str = "HHCALC_MAX_DEGREE";

#[derive(Parser)]
#[command(
    name = "hhcalc",
    version,
    about = "Iterated Tor words, bar complexes and higher Hochschild homology over F_p"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the admissible words of one length with their bidegrees.
    Words(WordsArgs),
    /// Search for pairs of words a shortest differential could connect.
    DiffSearch(DiffSearchArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Print a Poincaré series.
    Series {
        #[command(subcommand)]
        target: Target,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Words ending in μ, |μ| = 2.
    B,
    /// Words ending in a polynomial generator x.
    BPrime,
    /// Words ending in x with x^m = 0.
    BDoublePrime,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::B => "b",
            FamilyArg::BPrime => "b-prime",
            FamilyArg::BDoublePrime => "b-double-prime",
        }
    }
}

#[derive(Args)]
struct FamilyOpts {
    #[arg(long, value_enum, default_value_t = FamilyArg::B)]
    family: FamilyArg,
    /// Truncation height for b-double-prime.
    #[arg(long)]
    m: Option<u64>,
    /// Degree of the base letter x (b-prime and b-double-prime).
    #[arg(long, default_value_t = 0)]
    base_degree: u64,
}

impl FamilyOpts {
    fn build(&self) -> Result<WordFamily, String> {
        match self.family {
            FamilyArg::B => Ok(WordFamily::b()),
            FamilyArg::BPrime => Ok(WordFamily::b_prime(self.base_degree)),
            FamilyArg::BDoublePrime => {
                let m = self.m.ok_or("b-double-prime needs --m")?;
                WordFamily::b_double_prime(m, self.base_degree).map_err(|e| e.to_string())
            }
        }
    }

    fn echo(&self, c: &mut RunConfig) {
        c.set("family", self.family.name());
        if self.family != FamilyArg::B {
            c.set("base_degree", self.base_degree);
        }
        if let Some(m) = self.m {
            c.set("m", m);
        }
    }
}

#[derive(Args)]
struct WordsArgs {
    #[arg(long)]
    p: u32,
    /// Word length.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    family: FamilyOpts,
    /// Largest total degree listed.
    #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 64)]
    max_degree: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Raw,
    Refined,
}

#[derive(Args)]
struct DiffSearchArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 64)]
    max_degree: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Refined)]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum Suite {
    /// Comparison maps between a bar complex and its small model, plus
    /// sampled shuffle-product laws.
    Bar(BarArgs),
    /// The only word of degree 4p^k and length at most 2p+1 is ρ^kεμ.
    Powerwords {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
    /// Word-family series against iterated Tor.
    OracleCross {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 64)]
        max_degree: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Poly,
    Truncated,
    Exterior,
}

#[derive(Args)]
struct BarArgs {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// Truncation height for the truncated case.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    p: u32,
    /// Degree of x; 0 switches to the weight grading.
    #[arg(long, default_value_t = 2)]
    x_degree: u32,
    #[arg(long, default_value_t = 5)]
    max_s: u32,
    /// Internal degree bound; defaults to what the model needs up to max-s.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Weight bound; defaults to what the model needs up to max-s.
    #[arg(long)]
    max_weight: Option<u32>,
    /// Number of sampled pairs for the shuffle-product laws.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SeriesOpts {
    /// Number of iterations (the sphere dimension).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u32,
    /// Truncation degree.
    #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 64)]
    max_degree: u32,
}

impl SeriesOpts {
    fn echo(&self, c: &mut RunConfig) {
        c.set("n", self.n).set("p", self.p).set("max_degree", self.max_degree);
    }
}

#[derive(Subcommand)]
enum Target {
    /// Higher THH of F_p.
    ThhFp(SeriesOpts),
    /// HH^[n] of F_p[x], as ranks over F_p[x].
    HhPoly(SeriesOpts),
    /// HH^[n] of F_p[x]/x^m, as ranks over F_p[x]/x^m.
    HhTrunc {
        #[command(flatten)]
        opts: SeriesOpts,
        /// m = p^ell.
        #[arg(long, conflicts_with = "m")]
        ell: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        /// Allow m that is not a power of p; only the word series is claimed.
        #[arg(long)]
        word_calculus_only: bool,
    },
    /// HH^[n] of F_p[x^{±1}], as ranks over F_p[x^{±1}].
    HhLaurent(SeriesOpts),
    /// Higher THH (or HH with --hh-only) of a group algebra F_p[G].
    Group {
        /// A group such as "Z^2 x Z/6"; "trivial" for the trivial group.
        #[arg(default_value = "trivial")]
        group: String,
        #[command(flatten)]
        opts: SeriesOpts,
        #[arg(long)]
        hh_only: bool,
    },
    /// HH^[n] of a polynomial algebra with generators in the given degrees.
    PolyGens {
        /// Comma-separated generator degrees.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u64>,
        #[command(flatten)]
        opts: SeriesOpts,
    },
}

/// A parameter problem, reported with exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn check_p(p: u32) -> Result<(), UsageError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(UsageError(format!("--p {p} is not prime")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    match report.passed {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn run(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Words(a) => words(a, cli.format),
        Command::DiffSearch(a) => diff_search(a, cli.format),
        Command::Verify { suite } => match suite {
            Suite::Bar(a) => verify_bar(a, cli.format),
            Suite::Powerwords { p, k_max } => verify_pw(*p, *k_max, cli.format),
            Suite::OracleCross {
                p,
                n,
                family,
                max_degree,
            } => verify_oracle(*p, *n, family, *max_degree, cli.format),
        },
        Command::Series { target } => series(target, cli.format),
    }
}

fn kind_name(k: GeneratorKind) -> String {
    match k {
        GeneratorKind::Exterior => "exterior".into(),
        GeneratorKind::TruncatedHeightP => "truncated(p)".into(),
        GeneratorKind::Free => "polynomial".into(),
        GeneratorKind::TruncatedHeightM(m) => format!("truncated({m})"),
    }
}

fn words(a: &WordsArgs, format: Format) -> Result<Report, UsageError> {
    check_p(a.p)?;
    let family = a.family.build()?;
    let mut config = RunConfig::new("words", format);
    config.set("p", a.p).set("n", a.n).set("max_degree", a.max_degree);
    a.family.echo(&mut config);

    let list = enumerate_words(a.n, &family, a.p, a.max_degree)?;
    let mut rows = vec![vec!["key", "word", "bidegree", "total", "kind"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()];
    let mut items = Vec::new();
    for (w, bd) in &list {
        let kind = kind_name(classify(w, &family)?.kind);
        rows.push(vec![
            w.key(),
            w.pretty(),
            bd.to_string(),
            bd.total().to_string(),
            kind.clone(),
        ]);
        items.push(json!({
            "key": w.key(),
            "word": w.pretty(),
            "hom": bd.hom,
            "internal": bd.internal,
            "total": bd.total(),
            "kind": kind,
        }));
    }
    let mut text = table(&rows);
    text.push_str(&format!("words: {}\n", list.len()));
    Ok(Report {
        config,
        text,
        csv: rows,
        result: json!({ "count": list.len(), "words": items }),
        passed: None,
    })
}

fn diff_search(a: &DiffSearchArgs, format: Format) -> Result<Report, UsageError> {
    check_p(a.p)?;
    let mode = match a.mode {
        ModeArg::Raw => SearchMode::Raw,
        ModeArg::Refined => SearchMode::Refined,
    };
    let mut config = RunConfig::new("diff-search", format);
    config
        .set("p", a.p)
        .set("n", a.n)
        .set("max_degree", a.max_degree)
        .set("mode", if mode == SearchMode::Raw { "raw" } else { "refined" });

    let start = Instant::now();
    let found = diff_candidates(a.n, a.p, a.max_degree, mode)?;
    // timing goes to stderr so that reports stay byte-identical
    eprintln!("diff-search: {} candidates in {:.3?}", found.len(), start.elapsed());

    let mut text = String::new();
    let mut csv = vec![vec![
        "source",
        "source_word",
        "source_bidegree",
        "target",
        "target_word",
        "target_bidegree",
        "drop",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>()];
    let mut items = Vec::new();
    for c in &found {
        text.push_str(&c.key_line());
        text.push('\n');
        text.push_str(&format!("    {}\n", c.pretty_line()));
        csv.push(vec![
            c.source.key(),
            c.source.pretty(),
            c.source_bidegree.to_string(),
            c.target.key(),
            c.target.pretty(),
            c.target_bidegree.to_string(),
            c.drop.to_string(),
        ]);
        items.push(json!({
            "line": c.key_line(),
            "pretty": c.pretty_line(),
            "source": c.source.key(),
            "source_bidegree": [c.source_bidegree.hom, c.source_bidegree.internal],
            "target": c.target.key(),
            "target_bidegree": [c.target_bidegree.hom, c.target_bidegree.internal],
            "drop": c.drop,
        }));
    }
    text.push_str(&format!("candidates: {}\n", found.len()));
    Ok(Report {
        config,
        text,
        csv,
        result: json!({ "count": found.len(), "candidates": items }),
        passed: None,
    })
}

fn checks_section(checks: &[CheckOutcome], text: &mut String, csv: &mut Vec<Vec<String>>) {
    for c in checks {
        let status = if c.passed { "ok" } else { "FAILED" };
        text.push_str(&format!("{status:6}  {} ({} checked)\n", c.name, c.checked));
        if let Some(w) = &c.witness {
            text.push_str(&format!("        witness: {w}\n"));
        }
        csv.push(vec![
            c.name.clone(),
            status.to_string(),
            c.checked.to_string(),
            c.witness.clone().unwrap_or_default(),
        ]);
    }
}

fn verify_bar(a: &BarArgs, format: Format) -> Result<Report, UsageError> {
    check_p(a.p)?;
    let case = match a.case {
        CaseArg::Poly => QuasiIsoCase::Polynomial,
        CaseArg::Exterior => QuasiIsoCase::Exterior,
        CaseArg::Truncated => QuasiIsoCase::Truncated {
            m: a.m.ok_or("the truncated case needs --m")?,
        },
    };
    // the largest model class with s <= max_s has this many factors of x
    let top = match case {
        QuasiIsoCase::Polynomial => 1,
        QuasiIsoCase::Exterior => a.max_s,
        QuasiIsoCase::Truncated { m } => a.max_s / 2 * m + a.max_s % 2,
    };
    let max_degree = a.max_degree.unwrap_or(top * a.x_degree);
    let max_weight = a.max_weight.unwrap_or(if a.x_degree == 0 { top } else { 0 });
    let bounds = BarBounds::new(a.max_s, max_degree, max_weight);

    let mut config = RunConfig::new("verify bar", format);
    config
        .set(
            "case",
            a.case
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string(),
        )
        .set("p", a.p)
        .set("x_degree", a.x_degree)
        .set("max_s", a.max_s)
        .set("max_degree", max_degree)
        .set("max_weight", max_weight)
        .set("samples", a.samples)
        .set("seed", a.seed);
    if let Some(m) = a.m {
        config.set("m", m);
    }

    let qi = verify_quasi_iso(case, a.x_degree, a.p, bounds)?;
    let model = hochschild::bar::SmallModel::new(case, a.p, a.x_degree)?;
    let complex = bar_complex(&model.algebra, bounds)?;
    let laws = check_shuffle_laws(&complex, a.samples, a.seed)?;
    let mut checks = qi.checks.clone();
    checks.push(CheckOutcome {
        name: "d squares to zero on every block".into(),
        passed: true,
        checked: complex.blocks().count(),
        witness: None,
    });
    checks.extend(laws);

    let homology = complex.homology()?;
    let mut text = String::new();
    let mut csv = vec![vec![
        "check".to_string(),
        "status".into(),
        "checked".into(),
        "witness".into(),
    ]];
    checks_section(&checks, &mut text, &mut csv);
    text.push_str("homology (s, internal, weight): dim\n");
    for (k, d) in homology.iter() {
        text.push_str(&format!("  {k:?}: {d}\n"));
    }
    let passed = checks.iter().all(|c| c.passed);
    let dims: Vec<Value> = homology.iter().map(|(k, d)| json!([k.0, k.1, k.2, d])).collect();
    Ok(Report {
        config,
        text,
        csv,
        result: json!({ "checks": checks, "homology": dims }),
        passed: Some(passed),
    })
}

fn verify_pw(p: u32, k_max: u32, format: Format) -> Result<Report, UsageError> {
    check_p(p)?;
    let mut config = RunConfig::new("verify powerwords", format);
    config.set("p", p).set("k_max", k_max);
    let r = verify_powerwords(p, k_max)?;
    let mut text = String::new();
    let mut csv = vec![vec!["k".to_string(), "degree".into(), "key".into(), "word".into()]];
    let mut found = serde_json::Map::new();
    for (k, ws) in &r.found {
        let degree = 4 * (p as u64).pow(*k);
        let names: Vec<String> = ws.iter().map(|w| format!("{} ({})", w.pretty(), w.key())).collect();
        text.push_str(&format!("k = {k}, degree {degree}: {}\n", names.join(", ")));
        for w in ws {
            csv.push(vec![k.to_string(), degree.to_string(), w.key(), w.pretty()]);
        }
        found.insert(k.to_string(), json!(ws.iter().map(|w| w.key()).collect::<Vec<_>>()));
    }
    for w in &r.violations {
        text.push_str(&format!("unexpected word: {} ({})\n", w.pretty(), w.key()));
    }
    Ok(Report {
        config,
        text,
        csv,
        result: json!({
            "found": found,
            "violations": r.violations.iter().map(|w| w.key()).collect::<Vec<_>>(),
        }),
        passed: Some(r.passed()),
    })
}

fn verify_oracle(p: u32, n: usize, family: &FamilyOpts, max_degree: u32, format: Format) -> Result<Report, UsageError> {
    check_p(p)?;
    let fam = match family.family {
        FamilyArg::B => OracleFamily::B,
        FamilyArg::BPrime => OracleFamily::BPrime {
            base_degree: u32::try_from(family.base_degree)?,
        },
        FamilyArg::BDoublePrime => {
            if family.base_degree != 0 {
                return Err(UsageError("the oracle for b-double-prime needs --base-degree 0".into()));
            }
            OracleFamily::BDoublePrime {
                m: u32::try_from(family.m.ok_or("b-double-prime needs --m")?)?,
            }
        }
    };
    let mut config = RunConfig::new("verify oracle-cross", format);
    config.set("p", p).set("n", n).set("max_degree", max_degree);
    family.echo(&mut config);
    let r = oracle_cross(fam, n, p, max_degree)?;
    let mut rows = vec![vec!["degree".to_string(), "words".into(), "iterated_tor".into()]];
    for (d, (a, b)) in r.words.iter().zip(&r.iterated_tor).enumerate() {
        if *a != 0 || *b != 0 {
            rows.push(vec![d.to_string(), a.to_string(), b.to_string()]);
        }
    }
    let mut text = table(&rows);
    if let Some(d) = r.first_mismatch() {
        text.push_str(&format!("first mismatch in degree {d}\n"));
    }
    Ok(Report {
        config,
        text,
        csv: rows,
        result: json!({ "words": r.words, "iterated_tor": r.iterated_tor }),
        passed: Some(r.passed()),
    })
}

fn series(target: &Target, format: Format) -> Result<Report, UsageError> {
    let (name, s, config) = match target {
        Target::ThhFp(o) => {
            check_p(o.p)?;
            let mut c = RunConfig::new("series thh-fp", format);
            o.echo(&mut c);
            ("thh-fp", thh_fp(o.n, o.p, o.max_degree)?, c)
        }
        Target::HhPoly(o) => {
            check_p(o.p)?;
            let mut c = RunConfig::new("series hh-poly", format);
            o.echo(&mut c);
            ("hh-poly", hh_polynomial(o.n, o.p, o.max_degree)?, c)
        }
        Target::HhLaurent(o) => {
            check_p(o.p)?;
            let mut c = RunConfig::new("series hh-laurent", format);
            o.echo(&mut c);
            ("hh-laurent", hh_laurent(o.n, o.p, o.max_degree)?, c)
        }
        Target::HhTrunc {
            opts,
            ell,
            m,
            word_calculus_only,
        } => {
            check_p(opts.p)?;
            let mut c = RunConfig::new("series hh-trunc", format);
            opts.echo(&mut c);
            let s = match (ell, m) {
                (Some(ell), _) => {
                    c.set("ell", *ell);
                    hh_truncated(opts.n, opts.p, *ell, opts.max_degree)?
                }
                (None, Some(m)) => {
                    c.set("m", *m).set("word_calculus_only", *word_calculus_only);
                    hh_truncated_height(opts.n, opts.p, *m, opts.max_degree, *word_calculus_only)?
                }
                (None, None) => return Err(UsageError("hh-trunc needs --ell or --m".into())),
            };
            ("hh-trunc", s, c)
        }
        Target::Group { group, opts, hh_only } => {
            check_p(opts.p)?;
            let g: GroupSpec = group.parse()?;
            let mut c = RunConfig::new("series group", format);
            opts.echo(&mut c);
            c.set("group", g.normalized().to_string()).set("hh_only", *hh_only);
            let s = if *hh_only {
                hh_group_algebra(&g, opts.n, opts.p, opts.max_degree)?
            } else {
                thh_group_algebra(&g, opts.n, opts.p, opts.max_degree)?
            };
            ("group", s, c)
        }
        Target::PolyGens { degrees, opts } => {
            check_p(opts.p)?;
            let mut c = RunConfig::new("series poly-gens", format);
            opts.echo(&mut c);
            let list: Vec<String> = degrees.iter().map(u64::to_string).collect();
            c.set("degrees", list.join(","));
            ("poly-gens", hh_poly_gens(degrees, opts.n, opts.p, opts.max_degree)?, c)
        }
    };
    Ok(series_report(name, &s, config))
}

fn series_report(name: &str, s: &PoincareSeries, config: RunConfig) -> Report {
    let mut rows = vec![vec!["degree".to_string(), "dim".to_string()]];
    rows.extend(
        s.coeffs()
            .iter()
            .enumerate()
            .map(|(d, c)| vec![d.to_string(), c.to_string()]),
    );
    let mut text = format!(
        "target: {name}\nbase: {}\nbasis: {}\nvalidity: {}\nseries: {s}\n",
        s.base, s.basis_note, s.validity
    );
    text.push_str(&table(&rows));
    Report {
        config,
        text,
        csv: rows,
        result: serde_json::to_value(s).expect("series serialize"),
        passed: None,
    }
}
